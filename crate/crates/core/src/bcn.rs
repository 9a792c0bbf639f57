//! Boolean control networks, freeze controls and control sequences.

use crate::bits::StateSet;
use crate::bn::{BooleanNetwork, Trajectory};
use crate::error::{Error, Limits, Result};
use crate::formula::{Formula, VarTable};

/// An assignment to the control inputs, read as the set of inputs set to 1.
pub type Control = StateSet;

/// A control network stored as update formulas over `X ∪ U`.
///
/// The joint table lists `X` first and `U` after it, so a state over `X` is
/// also a set over the joint table, and control input `j` sits at position
/// `|X| + j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BooleanControlNetwork {
    x: VarTable,
    u: VarTable,
    table: VarTable,
    updates: Vec<Formula>,
}

impl BooleanControlNetwork {
    /// `updates[i]` is the controlled update of `x_i`, over the joint table.
    pub fn new(x: VarTable, u: VarTable, updates: Vec<Formula>) -> Result<Self> {
        let mut table = x.clone();
        for name in u.names() {
            if x.contains(name) {
                return Err(Error::Validation(format!(
                    "`{name}` is both a variable and a control input"
                )));
            }
            table.intern(name.clone())?;
        }
        if updates.len() != x.len() {
            return Err(Error::Validation(format!(
                "{} update functions for {} variables",
                updates.len(),
                x.len()
            )));
        }
        for f in &updates {
            f.check(&table)?;
        }
        Ok(BooleanControlNetwork {
            x,
            u,
            table,
            updates,
        })
    }

    /// Ingests an extensional control network, one network per control in
    /// canonical order of `S_U`, and stores it through the controlled update
    /// formulas `⋁_μ (μ ∧ F(μ)_x)`.
    pub fn from_extensional(
        x: VarTable,
        u: VarTable,
        networks: &[BooleanNetwork],
        limits: &Limits,
    ) -> Result<Self> {
        limits.check_vars("control enumeration", u.len())?;
        let controls: Vec<Control> = u.all_states(limits)?.collect();
        if networks.len() != controls.len() {
            return Err(Error::Validation(format!(
                "{} networks for {} controls",
                networks.len(),
                controls.len()
            )));
        }
        if let Some(bad) = networks.iter().find(|n| n.table() != &x) {
            return Err(Error::Validation(format!(
                "network over {:?} does not match the state variables",
                bad.table().names()
            )));
        }
        let nx = x.len();
        let updates = (0..nx)
            .map(|i| {
                Formula::or(
                    controls
                        .iter()
                        .zip(networks)
                        .map(|(mu, net)| {
                            let mut parts = control_literals(mu, nx, u.len());
                            parts.push(net.update(i).clone());
                            Formula::and(parts)
                        })
                        .collect(),
                )
            })
            .collect();
        Self::new(x, u, updates)
    }

    pub fn x_table(&self) -> &VarTable {
        &self.x
    }

    pub fn u_table(&self) -> &VarTable {
        &self.u
    }

    /// The joint table `X ∪ U`.
    pub fn table(&self) -> &VarTable {
        &self.table
    }

    pub fn updates(&self) -> &[Formula] {
        &self.updates
    }

    /// Lifts a control to the joint table.
    pub fn embed_control(&self, mu: &Control) -> StateSet {
        mu.shifted(self.x.len())
    }

    /// The network `F_U(μ)`: every control input replaced by its value, then folded.
    pub fn apply_control(&self, mu: &Control) -> Result<BooleanNetwork> {
        self.u.check(mu)?;
        let nx = self.x.len();
        let updates = self
            .updates
            .iter()
            .map(|f| f.substitute(&|i| (i >= nx).then(|| mu.contains(i - nx))))
            .collect();
        BooleanNetwork::new(self.x.clone(), updates)
    }

    /// The all-zero control.
    pub fn neutral_control(&self) -> Control {
        Control::new()
    }

    /// Controls named `<stem>0` / `<stem>1`, as `(stem, pos0, pos1)` in
    /// order of the `0` member. Fails if some control has no partner.
    pub fn control_pairs(&self) -> Result<Vec<(String, usize, usize)>> {
        control_pairs(&self.u)
    }

    /// Text form accepted by the network parser.
    pub fn to_text(&self) -> String {
        let mut out = format!("var {}\n", self.x.names().join(", "));
        if !self.u.is_empty() {
            out.push_str(&format!("control {}\n", self.u.names().join(", ")));
        }
        for (i, f) in self.updates.iter().enumerate() {
            out.push_str(&format!(
                "{}' = {}\n",
                self.x.name(i),
                f.display(&self.table)
            ));
        }
        out
    }
}

pub(crate) fn control_pairs(u: &VarTable) -> Result<Vec<(String, usize, usize)>> {
    let mut pairs = Vec::new();
    for (i, name) in u.names().iter().enumerate() {
        let (stem, last) = name.split_at(name.len() - 1);
        match last {
            "0" => {
                let partner = format!("{stem}1");
                let j = u.position(&partner).ok_or_else(|| {
                    Error::Validation(format!("control `{name}` has no partner `{partner}`"))
                })?;
                pairs.push((stem.to_string(), i, j));
            }
            "1" if u.contains(&format!("{stem}0")) => {}
            _ => {
                return Err(Error::Validation(format!(
                    "control `{name}` is not part of a `<name>0`/`<name>1` pair"
                )))
            }
        }
    }
    Ok(pairs)
}

/// `⋀_{u ∈ μ} u ∧ ⋀_{v ∉ μ} ¬v` over joint positions starting at `offset`.
fn control_literals(mu: &Control, offset: usize, nu: usize) -> Vec<Formula> {
    (0..nu)
        .map(|j| {
            let v = Formula::var(offset + j);
            if mu.contains(j) {
                v
            } else {
                Formula::not(v)
            }
        })
        .collect()
}

pub fn freeze_control_names(var: &str) -> (String, String) {
    (format!("u_{var}0"), format!("u_{var}1"))
}

/// Adds freeze controls `u_x0`, `u_x1` for every variable:
/// `f'_x = (f_x ∧ ¬u_x0) ∨ u_x1`. Setting `u_x0` freezes `x` to 0, setting
/// `u_x1` freezes it to 1 and wins when both are set.
pub fn freeze_extend(net: &BooleanNetwork) -> Result<BooleanControlNetwork> {
    let all: Vec<usize> = (0..net.table().len()).collect();
    freeze_variables(net, &all)
}

/// [`freeze_extend`] restricted to the variables at `vars`.
pub fn freeze_variables(net: &BooleanNetwork, vars: &[usize]) -> Result<BooleanControlNetwork> {
    let x = net.table().clone();
    let mut u = VarTable::new();
    let mut updates = net.updates().to_vec();
    for &i in vars {
        let (n0, n1) = freeze_control_names(x.name(i));
        let p0 = x.len() + u.intern(n0)?;
        let p1 = x.len() + u.intern(n1)?;
        updates[i] = freeze_formula(updates[i].clone(), p0, p1);
    }
    BooleanControlNetwork::new(x, u, updates)
}

pub(crate) fn freeze_formula(f: Formula, to_zero: usize, to_one: usize) -> Formula {
    Formula::or(vec![
        Formula::and(vec![f, Formula::not(Formula::var(to_zero))]),
        Formula::var(to_one),
    ])
}

/// The stored controlled update formulas.
pub fn flatten_bcn(bcn: &BooleanControlNetwork) -> Vec<Formula> {
    bcn.updates().to_vec()
}

/// Concatenates trajectories whose endpoints agree, keeping each shared state once.
pub fn glue_trajectories(parts: &[Trajectory]) -> Result<Trajectory> {
    let (first, rest) = parts
        .split_first()
        .ok_or_else(|| Error::Validation("nothing to glue".into()))?;
    let mut out = first.clone();
    for (i, t) in rest.iter().enumerate() {
        if t.first() != out.last() {
            return Err(Error::Validation(format!(
                "trajectory {} starts where trajectory {} does not end",
                i + 1,
                i
            )));
        }
        let labelled = out.labels.len() == out.steps() && t.labels.len() == t.steps();
        if !labelled {
            out.labels.clear();
        }
        out.states.extend(t.states[1..].iter().cloned());
        if labelled {
            out.labels.extend(t.labels.iter().cloned());
        }
    }
    Ok(out)
}
