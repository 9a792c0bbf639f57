//! Boolean P systems: guarded set-rewriting rules, modes, quasimodes and
//! composition.
//!
//! A rule `A → B | φ` applies to a configuration `W` when `A ⊆ W` and `φ(W)`
//! holds. Applying a set of individually applicable rules yields
//! `(W ∖ ⋃A) ∪ ⋃B`; rules never compete, so any such set can fire together.
//!
//! A quasimode advises families of rule sets independently of the
//! configuration. The mode derived from it keeps, at each `W`, the applicable
//! part of every advised set ([`Semantics::Filtered`]); an advised set with no
//! applicable rule becomes a stutter step. [`Semantics::Strict`] instead keeps
//! only the advised sets that are applicable as a whole.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::bits::{BitSet, RuleSet, StateSet};
use crate::bn::Trajectory;
use crate::error::{Error, Limits, Result};
use crate::formula::{Formula, VarTable};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub id: String,
    pub lhs: StateSet,
    pub rhs: StateSet,
    pub guard: Formula,
}

impl Rule {
    pub fn new(id: impl Into<String>, lhs: StateSet, rhs: StateSet, guard: Formula) -> Self {
        Rule {
            id: id.into(),
            lhs,
            rhs,
            guard,
        }
    }

    pub fn show(&self, table: &VarTable) -> String {
        format!(
            "{}: {} -> {} | {}",
            self.id,
            table.show_set(&self.lhs),
            table.show_set(&self.rhs),
            self.guard.display(table)
        )
    }
}

/// `A ⊆ W ∧ φ(W)`.
pub fn rule_applicable(rule: &Rule, w: &StateSet) -> bool {
    rule.lhs.is_subset(w) && rule.guard.eval(w)
}

/// `(W ∖ ⋃A) ∪ ⋃B` for rules that are each applicable to `W`. Order and
/// repetition of the rules do not matter.
pub fn apply_rules<'a>(
    w: &StateSet,
    rules: impl IntoIterator<Item = &'a Rule>,
) -> Result<StateSet> {
    let mut erased = BitSet::new();
    let mut produced = BitSet::new();
    for r in rules {
        if !rule_applicable(r, w) {
            return Err(Error::NotApplicable(r.id.clone()));
        }
        erased.union_with(&r.lhs);
        produced.union_with(&r.rhs);
    }
    Ok(w.difference(&erased).union(&produced))
}

/// `{a ∪ b | a ∈ A, b ∈ B}`, sorted and deduplicated.
pub fn dotted_product(a: &[BitSet], b: &[BitSet]) -> Vec<BitSet> {
    let out: BTreeSet<BitSet> = a
        .iter()
        .flat_map(|x| b.iter().map(move |y| x.union(y)))
        .collect();
    out.into_iter().collect()
}

/// `Π = (V, R)` with rules addressed by unique ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BooleanPSystem {
    table: VarTable,
    rules: Vec<Rule>,
    index: HashMap<String, usize>,
}

impl BooleanPSystem {
    pub fn new(table: VarTable, rules: Vec<Rule>) -> Result<Self> {
        let mut index = HashMap::with_capacity(rules.len());
        for (i, r) in rules.iter().enumerate() {
            if !crate::formula::is_identifier(&r.id) {
                return Err(Error::Validation(format!(
                    "`{}` is not a valid rule id",
                    r.id
                )));
            }
            if index.insert(r.id.clone(), i).is_some() {
                return Err(Error::Validation(format!("duplicate rule id `{}`", r.id)));
            }
            for set in [&r.lhs, &r.rhs] {
                table
                    .check(set)
                    .map_err(|e| Error::Validation(format!("rule `{}`: {e}", r.id)))?;
            }
            r.guard
                .check(&table)
                .map_err(|e| Error::Validation(format!("rule `{}`: {e}", r.id)))?;
        }
        Ok(BooleanPSystem {
            table,
            rules,
            index,
        })
    }

    pub fn table(&self) -> &VarTable {
        &self.table
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn rule(&self, pos: usize) -> &Rule {
        &self.rules[pos]
    }

    pub fn position(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn rule_ids(&self) -> Vec<String> {
        self.rules.iter().map(|r| r.id.clone()).collect()
    }

    /// All rules as a rule set.
    pub fn all_rules(&self) -> RuleSet {
        BitSet::full(self.rules.len())
    }

    pub fn rule_set<S: AsRef<str>>(&self, ids: impl IntoIterator<Item = S>) -> Result<RuleSet> {
        ids.into_iter()
            .map(|id| {
                let id = id.as_ref();
                self.position(id)
                    .ok_or_else(|| Error::Validation(format!("unknown rule `{id}`")))
            })
            .collect()
    }

    pub fn ids_of(&self, set: &RuleSet) -> BTreeSet<String> {
        set.iter().map(|i| self.rules[i].id.clone()).collect()
    }

    /// `{r1,r2}` with ids in lexicographic order.
    pub fn show_rules(&self, set: &RuleSet) -> String {
        let ids: Vec<String> = self.ids_of(set).into_iter().collect();
        format!("{{{}}}", ids.join(","))
    }

    /// The rules applicable to `W`; `Appl(Π, W)` is its power set.
    pub fn applicable_rules(&self, w: &StateSet) -> RuleSet {
        self.rules
            .iter()
            .enumerate()
            .filter(|(_, r)| rule_applicable(r, w))
            .map(|(i, _)| i)
            .collect()
    }

    pub fn is_halting(&self, w: &StateSet) -> bool {
        !self.rules.iter().any(|r| rule_applicable(r, w))
    }

    /// Applies `rules` to `W`, failing on the first inapplicable member.
    pub fn apply_rule_set(&self, w: &StateSet, rules: &RuleSet) -> Result<StateSet> {
        if rules.bound() > self.rules.len() {
            return Err(Error::Usage("rule set mentions unknown rules".into()));
        }
        apply_rules(w, rules.iter().map(|i| &self.rules[i]))
    }

    pub(crate) fn apply_unchecked(&self, w: &StateSet, rules: &RuleSet) -> StateSet {
        let mut erased = BitSet::new();
        let mut produced = BitSet::new();
        for i in rules.iter() {
            erased.union_with(&self.rules[i].lhs);
            produced.union_with(&self.rules[i].rhs);
        }
        w.difference(&erased).union(&produced)
    }

    /// Orders rule sets by their sorted id lists.
    fn compare_rule_sets(&self, a: &RuleSet, b: &RuleSet) -> Ordering {
        let key = |s: &RuleSet| {
            let mut ids: Vec<&str> = s.iter().map(|i| self.rules[i].id.as_str()).collect();
            ids.sort_unstable();
            ids
        };
        key(a).cmp(&key(b))
    }

    /// The mode derived from `quasimode`.
    pub fn derive(
        &self,
        quasimode: &Quasimode,
        semantics: Semantics,
        limits: &Limits,
    ) -> Result<ModeView<'_>> {
        Ok(ModeView {
            system: self,
            node: quasimode.compile(self, semantics)?,
            limits: *limits,
        })
    }

    /// Fires the unique non-extendable applicable set; empty at halting states.
    pub fn maximally_parallel(&self) -> ModeView<'_> {
        ModeView {
            system: self,
            node: Node::MaxPar,
            limits: Limits::default(),
        }
    }

    /// Every evolution of at most `max_steps` steps from `start`.
    ///
    /// A run stops early when it reaches a halting configuration or when the
    /// mode offers no step. If the number of runs would exceed
    /// `limits.breadth`, the result is cut and marked truncated.
    pub fn evolve(
        &self,
        mode: &ModeView<'_>,
        start: &StateSet,
        max_steps: usize,
        limits: &Limits,
    ) -> Result<Evolution> {
        self.table.check(start)?;
        let mut done = Vec::new();
        let mut frontier = vec![Trajectory::single(start.clone())];
        let mut truncated = false;
        for _ in 0..max_steps {
            let mut next = Vec::new();
            let mut seen = BTreeSet::new();
            for t in frontier {
                let last = t.last().clone();
                let succ = if self.is_halting(&last) {
                    Vec::new()
                } else {
                    mode.successors(&last)?
                };
                if succ.is_empty() {
                    done.push(t);
                    continue;
                }
                for (label, dst) in succ {
                    let mut ext = t.clone();
                    ext.push(label, dst);
                    if seen.insert(ext.states.clone()) {
                        next.push(ext);
                    }
                }
            }
            if done.len() + next.len() > limits.breadth {
                next.truncate(limits.breadth.saturating_sub(done.len()));
                truncated = true;
            }
            frontier = next;
            if frontier.is_empty() || truncated {
                break;
            }
        }
        done.extend(frontier);
        let runs = done
            .into_iter()
            .map(|t| {
                let halting = self.is_halting(t.last());
                Run {
                    trajectory: t,
                    halting,
                }
            })
            .collect();
        Ok(Evolution { runs, truncated })
    }

    /// Text form accepted by the system parser.
    pub fn to_text(&self) -> String {
        let mut out = format!("alphabet {}\n", self.table.names().join(", "));
        for r in &self.rules {
            out.push_str(&r.show(&self.table));
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Run {
    pub trajectory: Trajectory,
    pub halting: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Evolution {
    pub runs: Vec<Run>,
    /// Set when the breadth limit cut some runs.
    pub truncated: bool,
}

/// `Π₁ ∪ Π₂`: the alphabets merged by name, rules merged by id.
///
/// A rule id present in both systems must denote the same rule (same sets,
/// equivalent guards); it is then kept once.
pub fn union_systems(
    first: &BooleanPSystem,
    second: &BooleanPSystem,
    limits: &Limits,
) -> Result<BooleanPSystem> {
    let mut table = first.table.clone();
    let map: Vec<usize> = second
        .table
        .names()
        .iter()
        .map(|n| table.intern(n.clone()))
        .collect::<Result<_>>()?;
    let remap_set = |s: &StateSet| -> StateSet { s.iter().map(|i| map[i]).collect() };
    let mut rules = first.rules.clone();
    for r in &second.rules {
        let moved = Rule {
            id: r.id.clone(),
            lhs: remap_set(&r.lhs),
            rhs: remap_set(&r.rhs),
            guard: r.guard.remap(&|i| map[i]),
        };
        match first.position(&r.id) {
            None => rules.push(moved),
            Some(i) => {
                let old = &first.rules[i];
                let same = old.lhs == moved.lhs
                    && old.rhs == moved.rhs
                    && old.guard.equivalent(&moved.guard, limits)?;
                if !same {
                    return Err(Error::Validation(format!(
                        "rule id `{}` names different rules in the two systems",
                        r.id
                    )));
                }
            }
        }
    }
    BooleanPSystem::new(table, rules)
}

/// How a derived mode treats advised rule sets that are only partly applicable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Semantics {
    /// Restrict every advised set to its applicable rules.
    #[default]
    Filtered,
    /// Keep only advised sets whose rules are all applicable (`M̃ ∩ Appl`).
    Strict,
}

/// A configuration-independent family of advised rule sets, `M̃ ⊆ 2^R`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Quasimode {
    /// An explicit, sorted and deduplicated family.
    Explicit(Vec<BTreeSet<String>>),
    /// `{R}`, fired as the non-extendable applicable set.
    MaxPar,
    /// `{{r} | r ∈ R}`.
    Seq,
    /// `2^R`.
    Async,
    /// `2^S` for a given rule set `S`.
    Powerset(BTreeSet<String>),
    /// `M̃₁ ×̇ M̃₂`, kept lazy.
    Product(Box<Quasimode>, Box<Quasimode>),
}

impl Quasimode {
    pub fn explicit(family: impl IntoIterator<Item = BTreeSet<String>>) -> Self {
        let set: BTreeSet<BTreeSet<String>> = family.into_iter().collect();
        Quasimode::Explicit(set.into_iter().collect())
    }

    /// `self ×̇ other`; two explicit families are multiplied out.
    pub fn dotted(self, other: Quasimode) -> Quasimode {
        match (self, other) {
            (Quasimode::Explicit(a), Quasimode::Explicit(b)) => Quasimode::explicit(
                a.iter()
                    .flat_map(|x| b.iter().map(move |y| x.union(y).cloned().collect())),
            ),
            (a, b) => Quasimode::Product(Box::new(a), Box::new(b)),
        }
    }

    /// Fails if the quasimode names a rule that `system` lacks.
    pub fn check(&self, system: &BooleanPSystem) -> Result<()> {
        match self {
            Quasimode::Explicit(family) => family
                .iter()
                .try_for_each(|m| system.rule_set(m.iter()).map(|_| ())),
            Quasimode::Powerset(s) => system.rule_set(s.iter()).map(|_| ()),
            Quasimode::Product(a, b) => {
                a.check(system)?;
                b.check(system)
            }
            Quasimode::MaxPar | Quasimode::Seq | Quasimode::Async => Ok(()),
        }
    }

    fn compile(&self, system: &BooleanPSystem, semantics: Semantics) -> Result<Node> {
        Ok(match self {
            Quasimode::Explicit(family) => Node::Explicit(
                family
                    .iter()
                    .map(|m| system.rule_set(m.iter()))
                    .collect::<Result<_>>()?,
                semantics,
            ),
            Quasimode::MaxPar => Node::MaxPar,
            Quasimode::Seq => Node::Seq(semantics),
            Quasimode::Async => Node::Powerset(system.all_rules()),
            Quasimode::Powerset(s) => Node::Powerset(system.rule_set(s.iter())?),
            Quasimode::Product(a, b) => Node::Product(
                Box::new(a.compile(system, semantics)?),
                Box::new(b.compile(system, semantics)?),
            ),
        })
    }

    /// Multiplies the family out over `system`'s rules.
    pub fn elements(&self, system: &BooleanPSystem, limits: &Limits) -> Result<Vec<RuleSet>> {
        let mut out = match self {
            Quasimode::Explicit(family) => family
                .iter()
                .map(|m| system.rule_set(m.iter()))
                .collect::<Result<Vec<_>>>()?,
            Quasimode::MaxPar => vec![system.all_rules()],
            Quasimode::Seq => (0..system.rules().len()).map(BitSet::singleton).collect(),
            Quasimode::Async => {
                limits.check_vars("power set of rules", system.rules().len())?;
                system.all_rules().subsets().collect()
            }
            Quasimode::Powerset(s) => {
                let s = system.rule_set(s.iter())?;
                limits.check_vars("power set of rules", s.len())?;
                s.subsets().collect()
            }
            Quasimode::Product(a, b) => {
                let (a, b) = (a.elements(system, limits)?, b.elements(system, limits)?);
                let count = a.len().saturating_mul(b.len());
                if count > limits.breadth {
                    return Err(Error::Capacity {
                        what: "quasimode product",
                        needed: count,
                        limit: limits.breadth,
                    });
                }
                dotted_product(&a, &b)
            }
        };
        out.sort_by(|a, b| system.compare_rule_sets(a, b));
        out.dedup();
        Ok(out)
    }
}

impl fmt::Display for Quasimode {
    /// Expression form: `maxpar`, `seq`, `async`, `powerset {r1,r2}`,
    /// `{{r1,r2},{r3}}`, joined by `*` for products.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ids = |s: &BTreeSet<String>| {
            format!("{{{}}}", s.iter().cloned().collect::<Vec<_>>().join(","))
        };
        match self {
            Quasimode::Explicit(family) => {
                let parts: Vec<String> = family.iter().map(ids).collect();
                write!(f, "{{{}}}", parts.join(","))
            }
            Quasimode::MaxPar => write!(f, "maxpar"),
            Quasimode::Seq => write!(f, "seq"),
            Quasimode::Async => write!(f, "async"),
            Quasimode::Powerset(s) => write!(f, "powerset {}", ids(s)),
            Quasimode::Product(a, b) => write!(f, "{a} * {b}"),
        }
    }
}

#[derive(Debug, Clone)]
enum Node {
    Explicit(Vec<RuleSet>, Semantics),
    MaxPar,
    Seq(Semantics),
    Powerset(RuleSet),
    Product(Box<Node>, Box<Node>),
}

/// A mode of a system: for every configuration, the rule sets that may fire.
#[derive(Debug, Clone)]
pub struct ModeView<'a> {
    system: &'a BooleanPSystem,
    node: Node,
    limits: Limits,
}

impl<'a> ModeView<'a> {
    pub fn system(&self) -> &'a BooleanPSystem {
        self.system
    }

    /// `(M₁ × M₂)(W) = M₁(W) ×̇ M₂(W)`; both modes must belong to the same system.
    pub fn product(first: ModeView<'a>, second: ModeView<'a>) -> Result<ModeView<'a>> {
        if !std::ptr::eq(first.system, second.system) && first.system != second.system {
            return Err(Error::Usage(
                "product modes must be over the same (union) system".into(),
            ));
        }
        Ok(ModeView {
            system: first.system,
            limits: first.limits,
            node: Node::Product(Box::new(first.node), Box::new(second.node)),
        })
    }

    /// `M(W)`, sorted by rule ids.
    pub fn at(&self, w: &StateSet) -> Result<Vec<RuleSet>> {
        let app = self.system.applicable_rules(w);
        let mut out = self.eval(&self.node, &app)?;
        out.sort_by(|a, b| self.system.compare_rule_sets(a, b));
        out.dedup();
        Ok(out)
    }

    fn eval(&self, node: &Node, app: &RuleSet) -> Result<Vec<RuleSet>> {
        Ok(match node {
            Node::Explicit(family, Semantics::Filtered) => {
                family.iter().map(|m| m.intersection(app)).collect()
            }
            Node::Explicit(family, Semantics::Strict) => family
                .iter()
                .filter(|m| m.is_subset(app))
                .cloned()
                .collect(),
            Node::MaxPar => {
                if app.is_empty() {
                    Vec::new()
                } else {
                    vec![app.clone()]
                }
            }
            Node::Seq(semantics) => {
                let mut out: Vec<RuleSet> = app.iter().map(BitSet::singleton).collect();
                let partial = app.len() < self.system.rules().len();
                if *semantics == Semantics::Filtered && partial {
                    out.push(BitSet::new());
                }
                out
            }
            Node::Powerset(s) => {
                let live = s.intersection(app);
                self.limits
                    .check_vars("power set of applicable rules", live.len())?;
                live.subsets().collect()
            }
            Node::Product(a, b) => {
                let (a, b) = (self.eval(a, app)?, self.eval(b, app)?);
                dotted_product(&a, &b)
            }
        })
    }

    /// `{(R', apply(W, R')) | R' ∈ M(W)}`.
    pub fn successors(&self, w: &StateSet) -> Result<Vec<(RuleSet, StateSet)>> {
        Ok(self
            .at(w)?
            .into_iter()
            .map(|m| {
                let next = self.system.apply_unchecked(w, &m);
                (m, next)
            })
            .collect())
    }
}
