//! Boolean networks, Boolean modes, trajectories and attractors.

use std::collections::BTreeSet;

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

use crate::bits::{BitSet, StateSet};
use crate::equivalence::{LabelKind, Notation, TransitionRelation};
use crate::error::{Error, Limits, Result};
use crate::formula::{split_list, Formula, VarTable};

/// A Boolean network over the alphabet `table`: one update formula per variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BooleanNetwork {
    table: VarTable,
    updates: Vec<Formula>,
}

impl BooleanNetwork {
    pub fn new(table: VarTable, updates: Vec<Formula>) -> Result<Self> {
        if updates.len() != table.len() {
            return Err(Error::Validation(format!(
                "{} update functions for {} variables",
                updates.len(),
                table.len()
            )));
        }
        for f in &updates {
            f.check(&table)?;
        }
        Ok(BooleanNetwork { table, updates })
    }

    pub fn table(&self) -> &VarTable {
        &self.table
    }

    pub fn updates(&self) -> &[Formula] {
        &self.updates
    }

    pub fn update(&self, var: usize) -> &Formula {
        &self.updates[var]
    }

    /// The synchronous image `F(s)`.
    pub fn image(&self, s: &StateSet) -> StateSet {
        self.step_unchecked(s, &self.table.full())
    }

    /// Updates the variables of `m` from `s`, all reading the same source state.
    pub fn step(&self, s: &StateSet, m: &StateSet) -> Result<StateSet> {
        self.table.check(s)?;
        if m.bound() > self.table.len() {
            return Err(Error::Usage(format!(
                "mode element {m:?} is not a subset of the network's variables"
            )));
        }
        Ok(self.step_unchecked(s, m))
    }

    pub(crate) fn step_unchecked(&self, s: &StateSet, m: &StateSet) -> StateSet {
        let mut next = s.clone();
        for x in m.iter() {
            if self.updates[x].eval(s) {
                next.insert(x);
            } else {
                next.remove(x);
            }
        }
        next
    }

    /// Every labelled edge `(s, m, s')` with `m ∈ M` over all `2^|X|` states.
    pub fn transitions(&self, mode: &BooleanMode, limits: &Limits) -> Result<TransitionRelation> {
        mode.check(&self.table)?;
        let mut rel = TransitionRelation::new(
            self.table.clone(),
            self.table.names().to_vec(),
            LabelKind::ModeElement,
            Notation::Digits,
        );
        for s in self.table.all_states(limits)? {
            rel.add_state(s.clone());
            for m in mode.elements() {
                let next = self.step_unchecked(&s, m);
                rel.add_edge(s.clone(), m.clone(), next);
            }
        }
        Ok(rel)
    }

    /// Terminal strongly connected components of the one-step graph, each
    /// sorted, the list sorted by its members.
    pub fn attractors(&self, mode: &BooleanMode, limits: &Limits) -> Result<Vec<Vec<StateSet>>> {
        let rel = self.transitions(mode, limits)?;
        Ok(terminal_components(&rel))
    }

    /// All trajectories of exactly `steps` steps from `start` (fewer only when
    /// the mode offers no step), deduplicated on their state sequences.
    pub fn trajectories(
        &self,
        mode: &BooleanMode,
        start: &StateSet,
        steps: usize,
        limits: &Limits,
    ) -> Result<(Vec<Trajectory>, bool)> {
        mode.check(&self.table)?;
        self.table.check(start)?;
        let mut frontier = vec![Trajectory::single(start.clone())];
        let mut truncated = false;
        for _ in 0..steps {
            let mut next = Vec::new();
            let mut seen = BTreeSet::new();
            for t in &frontier {
                let last = t.last();
                if mode.elements().is_empty() {
                    next.push(t.clone());
                    continue;
                }
                for m in mode.elements() {
                    let s = self.step_unchecked(last, m);
                    let mut ext = t.clone();
                    ext.push(m.clone(), s);
                    if seen.insert(ext.states.clone()) {
                        next.push(ext);
                    }
                }
            }
            if next.len() > limits.breadth {
                next.truncate(limits.breadth);
                truncated = true;
            }
            frontier = next;
        }
        Ok((frontier, truncated))
    }
}

/// Terminal SCCs of an explicit relation, labels ignored.
pub(crate) fn terminal_components(rel: &TransitionRelation) -> Vec<Vec<StateSet>> {
    let states: Vec<StateSet> = rel.states().iter().cloned().collect();
    let index = |s: &StateSet| states.binary_search(s).expect("edge endpoint is a state");
    let mut graph = DiGraph::<(), ()>::with_capacity(states.len(), rel.len());
    let nodes: Vec<_> = states.iter().map(|_| graph.add_node(())).collect();
    for e in rel.edges() {
        graph.add_edge(nodes[index(&e.src)], nodes[index(&e.dst)], ());
    }
    let mut out: Vec<Vec<StateSet>> = tarjan_scc(&graph)
        .into_iter()
        .filter(|comp| {
            let members: BTreeSet<_> = comp.iter().copied().collect();
            comp.iter()
                .all(|&n| graph.neighbors(n).all(|succ| members.contains(&succ)))
        })
        .map(|comp| {
            let mut c: Vec<StateSet> = comp.iter().map(|n| states[n.index()].clone()).collect();
            c.sort();
            c
        })
        .collect();
    out.sort();
    out
}

/// A Boolean mode: the sets of variables that may be updated together in a step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BooleanMode {
    elements: Vec<StateSet>,
}

impl BooleanMode {
    pub fn new(elements: impl IntoIterator<Item = StateSet>) -> Self {
        let set: BTreeSet<StateSet> = elements.into_iter().collect();
        BooleanMode {
            elements: set.into_iter().collect(),
        }
    }

    /// `{X}`: every variable updated at once.
    pub fn synchronous(table: &VarTable) -> Self {
        BooleanMode::new([table.full()])
    }

    /// `{{x} | x ∈ X}`: one variable per step.
    pub fn asynchronous(table: &VarTable) -> Self {
        BooleanMode::new((0..table.len()).map(BitSet::singleton))
    }

    pub fn elements(&self) -> &[StateSet] {
        &self.elements
    }

    pub fn check(&self, table: &VarTable) -> Result<()> {
        self.elements.iter().try_for_each(|m| table.check(m))
    }

    /// `syn`, `asyn`, or explicit elements such as `{x,y};{x}`.
    pub fn parse(text: &str, table: &VarTable) -> Result<Self> {
        match text.trim() {
            "syn" => Ok(Self::synchronous(table)),
            "asyn" => Ok(Self::asynchronous(table)),
            other => {
                let mut elems = Vec::new();
                for part in other.split(';') {
                    let part = part.trim();
                    if part.is_empty() {
                        continue;
                    }
                    let inner = part
                        .strip_prefix('{')
                        .and_then(|p| p.strip_suffix('}'))
                        .ok_or_else(|| Error::parse(1, 0, format!("bad mode element `{part}`")))?;
                    elems.push(
                        table
                            .set_of(&split_list(inner))
                            .map_err(|e| Error::parse(1, 0, e.to_string()))?,
                    );
                }
                if elems.is_empty() {
                    return Err(Error::parse(1, 0, format!("unknown mode `{other}`")));
                }
                Ok(BooleanMode::new(elems))
            }
        }
    }

    pub fn show(&self, table: &VarTable) -> String {
        if *self == Self::synchronous(table) {
            return "syn".into();
        }
        if *self == Self::asynchronous(table) {
            return "asyn".into();
        }
        let parts: Vec<String> = self.elements.iter().map(|m| table.show_set(m)).collect();
        parts.join(";")
    }
}

/// A finite sequence of states, optionally labelled by what fired at each step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trajectory {
    pub states: Vec<StateSet>,
    /// Empty, or one label per step.
    pub labels: Vec<BitSet>,
}

impl Trajectory {
    pub fn single(state: StateSet) -> Self {
        Trajectory {
            states: vec![state],
            labels: Vec::new(),
        }
    }

    pub fn from_states(states: Vec<StateSet>) -> Result<Self> {
        if states.is_empty() {
            return Err(Error::Validation(
                "a trajectory needs at least one state".into(),
            ));
        }
        Ok(Trajectory {
            states,
            labels: Vec::new(),
        })
    }

    pub fn push(&mut self, label: BitSet, state: StateSet) {
        if self.labels.len() + 1 == self.states.len() {
            self.labels.push(label);
        }
        self.states.push(state);
    }

    pub fn first(&self) -> &StateSet {
        &self.states[0]
    }

    pub fn last(&self) -> &StateSet {
        self.states.last().expect("trajectories are non-empty")
    }

    pub fn steps(&self) -> usize {
        self.states.len() - 1
    }

    pub fn show(&self, render: impl Fn(&StateSet) -> String) -> String {
        let parts: Vec<String> = self.states.iter().map(render).collect();
        parts.join(" -> ")
    }
}
