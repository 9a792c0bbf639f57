//! Translations into Boolean P systems: Boolean networks, controlled
//! composites of control networks, and reaction systems.

use std::collections::{BTreeMap, BTreeSet};

use crate::bcn::{control_pairs, BooleanControlNetwork, Control};
use crate::bits::{BitSet, StateSet};
use crate::bn::{BooleanMode, BooleanNetwork};
use crate::boolp::{BooleanPSystem, Quasimode, Rule};
use crate::error::{Error, Limits, Result};
use crate::formula::{Formula, VarTable};

pub fn set_id(var: &str) -> String {
    format!("set_{var}")
}

pub fn clr_id(var: &str) -> String {
    format!("clr_{var}")
}

pub fn u_set_id(control: &str) -> String {
    format!("u_set_{control}")
}

pub fn u_clr_id(control: &str) -> String {
    format!("u_clr_{control}")
}

pub fn u_rewrite_id(from: &str, to: &str) -> String {
    format!("u_rw_{from}_{to}")
}

/// `R_x = {∅ → {x} | f_x, {x} → ∅ | ¬f_x}` for every variable, over `table`.
fn update_rules(names: &VarTable, updates: &[Formula]) -> Vec<Rule> {
    updates
        .iter()
        .enumerate()
        .flat_map(|(i, f)| {
            let name = names.name(i);
            [
                Rule::new(set_id(name), BitSet::new(), BitSet::singleton(i), f.clone()),
                Rule::new(
                    clr_id(name),
                    BitSet::singleton(i),
                    BitSet::new(),
                    Formula::not(f.clone()),
                ),
            ]
        })
        .collect()
}

/// `Π(F) = (X, ⋃_x R_x)` with rule ids `set_x` and `clr_x`.
pub fn bn_to_boolp(net: &BooleanNetwork) -> Result<BooleanPSystem> {
    BooleanPSystem::new(
        net.table().clone(),
        update_rules(net.table(), net.updates()),
    )
}

/// `M̃ = {⋃_{x ∈ m} R_x | m ∈ M}`.
pub fn bn_mode_to_quasimode(mode: &BooleanMode, net: &BooleanNetwork) -> Quasimode {
    mode_quasimode(mode, net.table())
}

fn mode_quasimode(mode: &BooleanMode, x: &VarTable) -> Quasimode {
    Quasimode::explicit(mode.elements().iter().map(|m| {
        m.iter()
            .flat_map(|i| [set_id(x.name(i)), clr_id(x.name(i))])
            .collect::<BTreeSet<_>>()
    }))
}

/// Which master system drives the control inputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ControlRegime {
    /// Erase every control and introduce any subset at each step.
    Free,
    /// Erase every control and introduce exactly one member of each pair.
    Total,
    /// Never erase; controls may be introduced or switched within their pair.
    Abiding,
}

impl ControlRegime {
    pub fn name(self) -> &'static str {
        match self {
            ControlRegime::Free => "free",
            ControlRegime::Total => "tcs",
            ControlRegime::Abiding => "acs",
        }
    }
}

/// Where a composite rule comes from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RuleOrigin {
    Set(String),
    Clear(String),
    ControlSet(String),
    ControlClear(String),
    ControlRewrite(String, String),
}

/// `Π ∪ Π_U` for a control network under a mode, with its quasimode.
#[derive(Debug, Clone)]
pub struct ControlledComposite {
    bcn: BooleanControlNetwork,
    mode: BooleanMode,
    regime: ControlRegime,
    pi: BooleanPSystem,
    pi_u: BooleanPSystem,
    system: BooleanPSystem,
    quasimode: Quasimode,
    origins: BTreeMap<String, RuleOrigin>,
}

/// `Π_U = (U, R_U⁰ ∪ R_U¹)` with `R_U⁰ = {{u} → ∅ | 1}` and `R_U¹ = {∅ → {u} | 1}`.
pub fn pi_u_free(u: &VarTable) -> Result<BooleanPSystem> {
    let mut rules = Vec::with_capacity(2 * u.len());
    for (j, name) in u.names().iter().enumerate() {
        rules.push(Rule::new(
            u_clr_id(name),
            BitSet::singleton(j),
            BitSet::new(),
            Formula::TRUE,
        ));
        rules.push(Rule::new(
            u_set_id(name),
            BitSet::new(),
            BitSet::singleton(j),
            Formula::TRUE,
        ));
    }
    BooleanPSystem::new(u.clone(), rules)
}

fn erase_all(u: &VarTable) -> BTreeSet<String> {
    u.names().iter().map(|n| u_clr_id(n)).collect()
}

/// `M̃_U = {R_U⁰} ×̇ 2^{R_U¹}`.
pub fn quasimode_free(u: &VarTable) -> Quasimode {
    let erase = Quasimode::explicit([erase_all(u)]);
    if u.is_empty() {
        return erase;
    }
    erase.dotted(Quasimode::Powerset(
        u.names().iter().map(|n| u_set_id(n)).collect(),
    ))
}

/// `{R_U⁰} ×̇ P`, where every member of `P` introduces exactly one control of
/// each `<name>0`/`<name>1` pair.
pub fn quasimode_tcs_for(u: &VarTable) -> Result<Quasimode> {
    let pairs = control_pairs(u)?;
    let mut q = Quasimode::explicit([erase_all(u)]);
    for (_, p0, p1) in pairs {
        let choice = Quasimode::explicit([
            BTreeSet::from([u_set_id(u.name(p0))]),
            BTreeSet::from([u_set_id(u.name(p1))]),
        ]);
        q = Quasimode::Product(Box::new(q), Box::new(choice));
    }
    Ok(q)
}

/// The total-control quasimode for the controls of `composite`.
pub fn quasimode_tcs(composite: &ControlledComposite) -> Result<Quasimode> {
    quasimode_tcs_for(composite.bcn.u_table())
}

/// `Π_U` for abiding sequences: `R_U¹ ∪ P_U` with
/// `P_U = {{u^a} → {u^b} | 1}` within every pair, under `2^{R_U}`.
pub fn pi_u_acs(u: &VarTable) -> Result<(BooleanPSystem, Quasimode)> {
    let pairs = control_pairs(u)?;
    let mut rules: Vec<Rule> = u
        .names()
        .iter()
        .enumerate()
        .map(|(j, n)| {
            Rule::new(
                u_set_id(n),
                BitSet::new(),
                BitSet::singleton(j),
                Formula::TRUE,
            )
        })
        .collect();
    for (_, p0, p1) in pairs {
        for a in [p0, p1] {
            for b in [p0, p1] {
                rules.push(Rule::new(
                    u_rewrite_id(u.name(a), u.name(b)),
                    BitSet::singleton(a),
                    BitSet::singleton(b),
                    Formula::TRUE,
                ));
            }
        }
    }
    Ok((BooleanPSystem::new(u.clone(), rules)?, Quasimode::Async))
}

/// Controlled composite with a freely changing control.
pub fn bcn_to_composite(
    bcn: &BooleanControlNetwork,
    mode: &BooleanMode,
) -> Result<ControlledComposite> {
    ControlledComposite::build(bcn, mode, ControlRegime::Free)
}

impl ControlledComposite {
    pub fn build(
        bcn: &BooleanControlNetwork,
        mode: &BooleanMode,
        regime: ControlRegime,
    ) -> Result<Self> {
        mode.check(bcn.x_table())?;
        let u = bcn.u_table();
        let pi = BooleanPSystem::new(
            bcn.table().clone(),
            update_rules(bcn.x_table(), bcn.updates()),
        )?;
        let (pi_u, control_part) = match regime {
            ControlRegime::Free => (pi_u_free(u)?, quasimode_free(u)),
            ControlRegime::Total => (pi_u_free(u)?, quasimode_tcs_for(u)?),
            ControlRegime::Abiding => {
                let (p, _) = pi_u_acs(u)?;
                let ids: BTreeSet<String> = p.rule_ids().into_iter().collect();
                let q = if ids.is_empty() {
                    Quasimode::explicit([BTreeSet::new()])
                } else {
                    Quasimode::Powerset(ids)
                };
                (p, q)
            }
        };
        // Guards of Π_U mention only U, so merging can never clash.
        let system = crate::boolp::union_systems(&pi, &pi_u, &Limits::default())?;
        let quasimode = mode_quasimode(mode, bcn.x_table()).dotted(control_part);
        let mut origins = BTreeMap::new();
        for name in bcn.x_table().names() {
            origins.insert(set_id(name), RuleOrigin::Set(name.clone()));
            origins.insert(clr_id(name), RuleOrigin::Clear(name.clone()));
        }
        for r in pi_u.rules() {
            let from = r.lhs.iter().next().map(|j| u.name(j).to_string());
            let to = r.rhs.iter().next().map(|j| u.name(j).to_string());
            let origin = match (from, to) {
                (Some(f), Some(t)) => RuleOrigin::ControlRewrite(f, t),
                (Some(f), None) => RuleOrigin::ControlClear(f),
                (None, Some(t)) => RuleOrigin::ControlSet(t),
                (None, None) => unreachable!("control rules move one symbol"),
            };
            origins.insert(r.id.clone(), origin);
        }
        Ok(ControlledComposite {
            bcn: bcn.clone(),
            mode: mode.clone(),
            regime,
            pi,
            pi_u,
            system,
            quasimode,
            origins,
        })
    }

    pub fn bcn(&self) -> &BooleanControlNetwork {
        &self.bcn
    }

    pub fn mode(&self) -> &BooleanMode {
        &self.mode
    }

    pub fn regime(&self) -> ControlRegime {
        self.regime
    }

    /// `Π = (X ∪ U, ⋃_x R_x)`.
    pub fn pi(&self) -> &BooleanPSystem {
        &self.pi
    }

    /// The master system driving the controls.
    pub fn pi_u(&self) -> &BooleanPSystem {
        &self.pi_u
    }

    /// `Π ∪ Π_U`.
    pub fn system(&self) -> &BooleanPSystem {
        &self.system
    }

    pub fn quasimode(&self) -> &Quasimode {
        &self.quasimode
    }

    pub fn origin(&self, rule_id: &str) -> Option<&RuleOrigin> {
        self.origins.get(rule_id)
    }

    /// Replaces the system and quasimode, keeping the bookkeeping. Used to
    /// build deliberately broken composites.
    pub fn with_parts(mut self, system: BooleanPSystem, quasimode: Quasimode) -> Self {
        self.system = system;
        self.quasimode = quasimode;
        self
    }

    /// The starting configuration `W ∪ W_U⁰` for state `s` and first control `μ₀`.
    pub fn initial(&self, s: &StateSet, first: &Control) -> StateSet {
        s.truncated(self.bcn.x_table().len())
            .union(&self.bcn.embed_control(first))
    }

    /// Splits a configuration into its state and control parts.
    pub fn split(&self, w: &StateSet) -> (StateSet, Control) {
        let nx = self.bcn.x_table().len();
        (w.truncated(nx), w.slice_from(nx, self.bcn.u_table().len()))
    }

    /// Text form: the union system, section comments and the quasimode line.
    pub fn to_text(&self) -> String {
        let t = self.system.table();
        let mut out = format!(
            "# controlled composite, regime {}, mode {}\nalphabet {}\n# pi: state update rules\n",
            self.regime.name(),
            self.mode.show(self.bcn.x_table()),
            t.names().join(", ")
        );
        for r in self.pi.rules() {
            out.push_str(&r.show(t));
            out.push('\n');
        }
        out.push_str("# pi_u: control rules\n");
        let n = self.pi.rules().len();
        for r in &self.system.rules()[n..] {
            out.push_str(&r.show(t));
            out.push('\n');
        }
        out.push_str(&format!("quasimode {}\n", self.quasimode));
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reaction {
    pub id: String,
    pub reactants: StateSet,
    pub inhibitors: StateSet,
    pub products: StateSet,
}

/// A closed reaction system over `species`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReactionSystem {
    species: VarTable,
    reactions: Vec<Reaction>,
}

impl ReactionSystem {
    /// Rejects reactions whose reactants and inhibitors overlap unless
    /// `allow_dead` is set, in which case they are kept as never-enabled.
    pub fn new(species: VarTable, reactions: Vec<Reaction>, allow_dead: bool) -> Result<Self> {
        let mut ids = BTreeSet::new();
        for a in &reactions {
            if !ids.insert(a.id.as_str()) {
                return Err(Error::Validation(format!(
                    "duplicate reaction id `{}`",
                    a.id
                )));
            }
            for s in [&a.reactants, &a.inhibitors, &a.products] {
                species.check(s)?;
            }
            if !allow_dead && !a.reactants.is_disjoint(&a.inhibitors) {
                return Err(Error::Validation(format!(
                    "reaction `{}` inhibits one of its own reactants",
                    a.id
                )));
            }
        }
        Ok(ReactionSystem { species, reactions })
    }

    pub fn species(&self) -> &VarTable {
        &self.species
    }

    pub fn reactions(&self) -> &[Reaction] {
        &self.reactions
    }

    pub fn enabled(&self, reaction: &Reaction, w: &StateSet) -> bool {
        reaction.reactants.is_subset(w) && reaction.inhibitors.is_disjoint(w)
    }

    /// `res(W) = ⋃{P_a | R_a ⊆ W, I_a ∩ W = ∅}`.
    pub fn result(&self, w: &StateSet) -> StateSet {
        let mut out = StateSet::new();
        for a in self.reactions.iter().filter(|a| self.enabled(a, w)) {
            out.union_with(&a.products);
        }
        out
    }

    pub fn to_text(&self) -> String {
        let t = &self.species;
        let mut out = format!("species {}\n", t.names().join(", "));
        for a in &self.reactions {
            out.push_str(&format!(
                "{}: reactants {} inhibitors {} products {}\n",
                a.id,
                t.show_set(&a.reactants),
                t.show_set(&a.inhibitors),
                t.show_set(&a.products)
            ));
        }
        out
    }
}

pub fn degradation_id(species: &str) -> String {
    format!("deg_{species}")
}

/// One rule `∅ → P_a | ⋀R_a ∧ ⋀¬I_a` per reaction and `{x} → ∅ | 1` per
/// species, to be run maximally parallel.
pub fn rs_to_boolp(rs: &ReactionSystem) -> Result<(BooleanPSystem, Quasimode)> {
    let mut rules = Vec::new();
    for a in rs.reactions() {
        let guard = Formula::and(
            a.reactants
                .iter()
                .map(Formula::var)
                .chain(a.inhibitors.iter().map(|i| Formula::not(Formula::var(i))))
                .collect(),
        );
        rules.push(Rule::new(
            a.id.clone(),
            BitSet::new(),
            a.products.clone(),
            guard,
        ));
    }
    for (i, name) in rs.species().names().iter().enumerate() {
        rules.push(Rule::new(
            degradation_id(name),
            BitSet::singleton(i),
            BitSet::new(),
            Formula::TRUE,
        ));
    }
    Ok((
        BooleanPSystem::new(rs.species().clone(), rules)?,
        Quasimode::MaxPar,
    ))
}
