//! Explicit labelled transition relations and exhaustive simulation checks.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::Serialize;

use crate::bcn::BooleanControlNetwork;
use crate::bits::{BitSet, StateSet};
use crate::bn::{BooleanMode, BooleanNetwork};
use crate::boolp::{dotted_product, BooleanPSystem, ModeView, Quasimode, Semantics};
use crate::error::{Error, Limits, Result};
use crate::formula::VarTable;
use crate::translate::{
    bcn_to_composite, bn_mode_to_quasimode, bn_to_boolp, clr_id, rs_to_boolp, set_id, u_clr_id,
    u_set_id, ControlledComposite, ReactionSystem,
};

/// What the label bits of a relation's edges index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LabelKind {
    /// Variables of a Boolean mode element.
    ModeElement,
    /// Rules of a Boolean P system.
    Rules,
}

/// How states are rendered in exports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Notation {
    Digits,
    Sets,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub src: StateSet,
    pub label: BitSet,
    pub dst: StateSet,
}

/// A finite labelled transition relation over the subsets of `universe`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionRelation {
    universe: VarTable,
    label_names: Vec<String>,
    kind: LabelKind,
    notation: Notation,
    states: BTreeSet<StateSet>,
    edges: BTreeSet<Edge>,
}

impl TransitionRelation {
    pub fn new(
        universe: VarTable,
        label_names: Vec<String>,
        kind: LabelKind,
        notation: Notation,
    ) -> Self {
        TransitionRelation {
            universe,
            label_names,
            kind,
            notation,
            states: BTreeSet::new(),
            edges: BTreeSet::new(),
        }
    }

    pub fn universe(&self) -> &VarTable {
        &self.universe
    }

    pub fn label_names(&self) -> &[String] {
        &self.label_names
    }

    pub fn kind(&self) -> LabelKind {
        self.kind
    }

    pub fn with_notation(mut self, notation: Notation) -> Self {
        self.notation = notation;
        self
    }

    pub fn add_state(&mut self, s: StateSet) {
        self.states.insert(s);
    }

    pub fn add_edge(&mut self, src: StateSet, label: BitSet, dst: StateSet) {
        self.states.insert(src.clone());
        self.states.insert(dst.clone());
        self.edges.insert(Edge { src, label, dst });
    }

    pub fn states(&self) -> &BTreeSet<StateSet> {
        &self.states
    }

    pub fn edges(&self) -> impl Iterator<Item = &Edge> {
        self.edges.iter()
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains(&self, src: &StateSet, label: &BitSet, dst: &StateSet) -> bool {
        self.edges.contains(&Edge {
            src: src.clone(),
            label: label.clone(),
            dst: dst.clone(),
        })
    }

    /// `(label, dst)` pairs leaving `src`, in canonical order.
    pub fn successors<'a>(
        &'a self,
        src: &'a StateSet,
    ) -> impl Iterator<Item = (&'a BitSet, &'a StateSet)> + 'a {
        self.edges
            .iter()
            .filter(move |e| &e.src == src)
            .map(|e| (&e.label, &e.dst))
    }

    /// Groups the edges by source state.
    pub fn by_source(&self) -> BTreeMap<StateSet, BTreeSet<(BitSet, StateSet)>> {
        let mut out: BTreeMap<StateSet, BTreeSet<(BitSet, StateSet)>> = BTreeMap::new();
        for e in &self.edges {
            out.entry(e.src.clone())
                .or_default()
                .insert((e.label.clone(), e.dst.clone()));
        }
        out
    }

    pub fn show_state(&self, s: &StateSet) -> String {
        match self.notation {
            Notation::Digits => self.universe.show_digits(s),
            Notation::Sets => self.universe.show_set(s),
        }
    }

    pub fn show_label(&self, label: &BitSet) -> String {
        let names: Vec<&str> = label
            .iter()
            .map(|i| self.label_names.get(i).map_or("?", String::as_str))
            .collect();
        format!("{{{}}}", names.join(","))
    }

    /// One `src --label--> dst` line per edge.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for e in &self.edges {
            let _ = writeln!(
                out,
                "{} --{}--> {}",
                self.show_state(&e.src),
                self.show_label(&e.label),
                self.show_state(&e.dst)
            );
        }
        out
    }

    /// A Graphviz digraph; every state is declared, edges carry their labels.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph transitions {\n");
        for s in &self.states {
            let _ = writeln!(out, "  \"{}\";", self.show_state(s));
        }
        for e in &self.edges {
            let _ = writeln!(
                out,
                "  \"{}\" -> \"{}\" [label=\"{}\"];",
                self.show_state(&e.src),
                self.show_state(&e.dst),
                self.show_label(&e.label)
            );
        }
        out.push_str("}\n");
        out
    }

    /// One JSON object per edge: `{src, mode_elem, dst}` for Boolean networks
    /// and `{src, rules, dst}` for P systems.
    pub fn to_json_lines(&self) -> String {
        let key = match self.kind {
            LabelKind::ModeElement => "mode_elem",
            LabelKind::Rules => "rules",
        };
        let mut out = String::new();
        for e in &self.edges {
            let mut obj = serde_json::Map::new();
            obj.insert("src".into(), self.show_state(&e.src).into());
            obj.insert(key.into(), self.show_label(&e.label).into());
            obj.insert("dst".into(), self.show_state(&e.dst).into());
            let _ = writeln!(out, "{}", serde_json::Value::Object(obj));
        }
        out
    }
}

/// Every edge `W --R'--> W'` for `W ⊆ V` and `R' ∈ M(W)`, stutters included.
pub fn boolp_transitions(
    system: &BooleanPSystem,
    mode: &ModeView<'_>,
    limits: &Limits,
) -> Result<TransitionRelation> {
    let mut rel = TransitionRelation::new(
        system.table().clone(),
        system.rule_ids(),
        LabelKind::Rules,
        Notation::Sets,
    );
    for w in system.table().all_states(limits)? {
        rel.add_state(w.clone());
        for (label, dst) in mode.successors(&w)? {
            rel.add_edge(w.clone(), label, dst);
        }
    }
    Ok(rel)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

/// A state whose outgoing edges differ between the two sides of a check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub state: String,
    pub expected: Vec<String>,
    pub actual: Vec<String>,
    #[serde(skip)]
    pub raw_state: StateSet,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquivalenceReport {
    pub check: String,
    pub verdict: Verdict,
    pub states: usize,
    pub edges: usize,
    pub counterexample: Option<Counterexample>,
}

impl EquivalenceReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{}: {} ({} states, {} edges)\n",
            self.check,
            match self.verdict {
                Verdict::Pass => "pass",
                Verdict::Fail => "FAIL",
            },
            self.states,
            self.edges
        );
        if let Some(c) = &self.counterexample {
            let _ = writeln!(out, "  counterexample at {}", c.state);
            let _ = writeln!(out, "    expected: {}", c.expected.join(" "));
            let _ = writeln!(out, "    actual:   {}", c.actual.join(" "));
        }
        out
    }
}

/// Compares two relations edge set by edge set, reporting the first source
/// state (in canonical order) whose outgoing edges differ.
pub fn compare_relations(
    check: &str,
    expected: &TransitionRelation,
    actual: &TransitionRelation,
) -> EquivalenceReport {
    let exp = expected.by_source();
    let act = actual.by_source();
    let empty = BTreeSet::new();
    let sources: BTreeSet<&StateSet> = expected
        .states()
        .iter()
        .chain(actual.states().iter())
        .collect();
    let render = |rel: &TransitionRelation, edges: &BTreeSet<(BitSet, StateSet)>| {
        edges
            .iter()
            .map(|(l, d)| format!("{}->{}", rel.show_label(l), rel.show_state(d)))
            .collect::<Vec<_>>()
    };
    let counterexample = sources.into_iter().find_map(|s| {
        let e = exp.get(s).unwrap_or(&empty);
        let a = act.get(s).unwrap_or(&empty);
        (e != a).then(|| Counterexample {
            state: actual.show_state(s),
            expected: render(expected, e),
            actual: render(actual, a),
            raw_state: s.clone(),
        })
    });
    EquivalenceReport {
        check: check.to_string(),
        verdict: if counterexample.is_none() {
            Verdict::Pass
        } else {
            Verdict::Fail
        },
        states: actual.states().len().max(expected.states().len()),
        edges: actual.len(),
        counterexample,
    }
}

/// The system's rule ids followed by the expected ids it lacks, so that a
/// removed rule still shows up in expected labels.
fn label_universe(
    system: &BooleanPSystem,
    expected: impl IntoIterator<Item = String>,
) -> Vec<String> {
    let mut names = system.rule_ids();
    for id in expected {
        if system.position(&id).is_none() && !names.contains(&id) {
            names.push(id);
        }
    }
    names
}

fn rule_bits(names: &[String], ids: impl IntoIterator<Item = String>) -> BitSet {
    ids.into_iter()
        .map(|id| {
            names
                .iter()
                .position(|n| *n == id)
                .expect("id in the label universe")
        })
        .collect()
}

/// The relation a faithful `Π(F)` must have, built from the network alone.
///
/// Each edge `s --m--> s'` of `F` becomes `s --R'--> s'` where `R'` holds
/// `set_x` for the `x ∈ m` with `f_x(s) = 1` and `clr_x` for the `x ∈ m ∩ s`
/// with `f_x(s) = 0`: exactly the advised rules of `m` that apply at `s`.
pub fn expected_bn_relation(
    net: &BooleanNetwork,
    mode: &BooleanMode,
    system: &BooleanPSystem,
    limits: &Limits,
) -> Result<TransitionRelation> {
    let table = net.table();
    let names = label_universe(
        system,
        table.names().iter().flat_map(|x| [set_id(x), clr_id(x)]),
    );
    let mut rel = TransitionRelation::new(
        system.table().clone(),
        names.clone(),
        LabelKind::Rules,
        Notation::Sets,
    );
    for s in table.all_states(limits)? {
        rel.add_state(s.clone());
        for m in mode.elements() {
            let dst = net.step(&s, m)?;
            let ids = m.iter().filter_map(|x| {
                let name = table.name(x);
                if net.update(x).eval(&s) {
                    Some(set_id(name))
                } else if s.contains(x) {
                    Some(clr_id(name))
                } else {
                    None
                }
            });
            rel.add_edge(s.clone(), rule_bits(&names, ids), dst);
        }
    }
    Ok(rel)
}

/// Compares `F` under `M` with a candidate system and quasimode.
pub fn compare_bn_simulation(
    net: &BooleanNetwork,
    mode: &BooleanMode,
    system: &BooleanPSystem,
    quasimode: &Quasimode,
    limits: &Limits,
) -> Result<EquivalenceReport> {
    if system.table() != net.table() {
        return Err(Error::Usage(
            "the P system must be over the network's alphabet".into(),
        ));
    }
    let expected = expected_bn_relation(net, mode, system, limits)?;
    let view = system.derive(quasimode, Semantics::Filtered, limits)?;
    let actual = boolp_transitions(system, &view, limits)?;
    Ok(compare_relations("bn-sim", &expected, &actual))
}

/// Builds `Π(F)` with the quasimode of `M` and checks it against `F` exhaustively.
pub fn check_bn_simulation(
    net: &BooleanNetwork,
    mode: &BooleanMode,
    limits: &Limits,
) -> Result<EquivalenceReport> {
    let system = bn_to_boolp(net)?;
    let quasimode = bn_mode_to_quasimode(mode, net);
    compare_bn_simulation(net, mode, &system, &quasimode, limits)
}

/// The relation a faithful composite must have, built from `F_U(μ)` for every
/// control `μ`: `(W ∪ W_U) → (W' ∪ W_U')` for every `W_U' ⊆ U`, with the erase
/// rules of the old controls and the set rules of the new ones in the label.
pub fn expected_bcn_relation(
    bcn: &BooleanControlNetwork,
    mode: &BooleanMode,
    system: &BooleanPSystem,
    limits: &Limits,
) -> Result<TransitionRelation> {
    let xs = bcn.x_table();
    let us = bcn.u_table();
    let nx = xs.len();
    limits.check_vars("controlled state enumeration", nx + us.len())?;
    let names = label_universe(
        system,
        xs.names()
            .iter()
            .flat_map(|x| [set_id(x), clr_id(x)])
            .chain(us.names().iter().flat_map(|u| [u_set_id(u), u_clr_id(u)])),
    );
    let mut rel = TransitionRelation::new(
        bcn.table().clone(),
        names.clone(),
        LabelKind::Rules,
        Notation::Sets,
    );
    let controls: Vec<StateSet> = us.all_states(limits)?.collect();
    for mu in &controls {
        let net = bcn.apply_control(mu)?;
        let erase: Vec<String> = mu.iter().map(|u| u_clr_id(us.name(u))).collect();
        for s in xs.all_states(limits)? {
            let src = s.union(&mu.shifted(nx));
            rel.add_state(src.clone());
            for m in mode.elements() {
                let next = net.step(&s, m)?;
                let updates: Vec<String> = m
                    .iter()
                    .filter_map(|x| {
                        let name = xs.name(x);
                        if net.update(x).eval(&s) {
                            Some(set_id(name))
                        } else if s.contains(x) {
                            Some(clr_id(name))
                        } else {
                            None
                        }
                    })
                    .collect();
                for next_mu in &controls {
                    let ids = updates
                        .iter()
                        .cloned()
                        .chain(erase.iter().cloned())
                        .chain(next_mu.iter().map(|u| u_set_id(us.name(u))));
                    let dst = next.union(&next_mu.shifted(nx));
                    rel.add_edge(src.clone(), rule_bits(&names, ids), dst);
                }
            }
        }
    }
    Ok(rel)
}

/// Compares a BCN under `M` with a candidate composite.
pub fn compare_bcn_simulation(
    bcn: &BooleanControlNetwork,
    mode: &BooleanMode,
    composite: &ControlledComposite,
    limits: &Limits,
) -> Result<EquivalenceReport> {
    let system = composite.system();
    if system.table() != bcn.table() {
        return Err(Error::Usage(
            "the composite must be over the alphabet X ∪ U of the control network".into(),
        ));
    }
    let expected = expected_bcn_relation(bcn, mode, system, limits)?;
    let view = system.derive(composite.quasimode(), Semantics::Filtered, limits)?;
    let actual = boolp_transitions(system, &view, limits)?;
    Ok(compare_relations("bcn-sim", &expected, &actual))
}

/// Builds the controlled composite of `B` under `M` and checks it exhaustively.
pub fn check_bcn_simulation(
    bcn: &BooleanControlNetwork,
    mode: &BooleanMode,
    limits: &Limits,
) -> Result<EquivalenceReport> {
    let composite = bcn_to_composite(bcn, mode)?;
    compare_bcn_simulation(bcn, mode, &composite, limits)
}

/// Checks at every configuration that the mode derived from `M̃₁ ×̇ M̃₂`
/// (materialized before deriving) equals the product of the derived modes.
pub fn check_product_lemma(
    system: &BooleanPSystem,
    first: &[BTreeSet<String>],
    second: &[BTreeSet<String>],
    semantics: Semantics,
    limits: &Limits,
) -> Result<EquivalenceReport> {
    let q1 = Quasimode::explicit(first.iter().cloned());
    let q2 = Quasimode::explicit(second.iter().cloned());
    let elems1 = q1.elements(system, limits)?;
    let elems2 = q2.elements(system, limits)?;
    let product = dotted_product(&elems1, &elems2);
    let combined = Quasimode::explicit(product.iter().map(|m| system.ids_of(m)));
    let lhs = system.derive(&combined, semantics, limits)?;
    let rhs = ModeView::product(
        system.derive(&q1, semantics, limits)?,
        system.derive(&q2, semantics, limits)?,
    )?;
    let mut states = 0;
    for w in system.table().all_states(limits)? {
        states += 1;
        let a = lhs.at(&w)?;
        let b = rhs.at(&w)?;
        if a != b {
            let show = |sets: &[BitSet]| sets.iter().map(|m| system.show_rules(m)).collect();
            return Ok(EquivalenceReport {
                check: "lemma-product".into(),
                verdict: Verdict::Fail,
                states,
                edges: 0,
                counterexample: Some(Counterexample {
                    state: system.table().show_set(&w),
                    expected: show(&a),
                    actual: show(&b),
                    raw_state: w,
                }),
            });
        }
    }
    Ok(EquivalenceReport {
        check: "lemma-product".into(),
        verdict: Verdict::Pass,
        states,
        edges: 0,
        counterexample: None,
    })
}

/// One maximally parallel step of the embedded system against the reaction
/// system's own result function, at every state. A halting configuration is
/// read as persisting.
pub fn check_rs_embedding(rs: &ReactionSystem, limits: &Limits) -> Result<EquivalenceReport> {
    let (system, quasimode) = rs_to_boolp(rs)?;
    let view = system.derive(&quasimode, Semantics::Filtered, limits)?;
    let table = rs.species();
    let mut expected =
        TransitionRelation::new(table.clone(), Vec::new(), LabelKind::Rules, Notation::Sets);
    let mut actual = expected.clone();
    for w in table.all_states(limits)? {
        expected.add_edge(w.clone(), BitSet::new(), rs.result(&w));
        let succ = view.successors(&w)?;
        if succ.is_empty() {
            actual.add_edge(w.clone(), BitSet::new(), w.clone());
        }
        for (_, dst) in succ {
            actual.add_edge(w.clone(), BitSet::new(), dst);
        }
    }
    Ok(compare_relations("rs-embed", &expected, &actual))
}
