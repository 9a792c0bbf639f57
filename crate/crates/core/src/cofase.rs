//! Bounded inference and verification of control sequences driving a control
//! network from start states into target states.
//!
//! Two engines are provided. [`solve_cofase`] searches sequences of controls
//! directly, a phase moving from `s` to any state reachable under one
//! control. [`solve_cofase_via_composite`] searches the controlled composite
//! P system and decodes the control history from its configurations. They
//! are independent and must agree on solvability and minimal phase count.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use serde_json::{json, Value};

use crate::bcn::{control_pairs, BooleanControlNetwork, Control};
use crate::bits::{BitSet, StateSet};
use crate::bn::{BooleanMode, BooleanNetwork, Trajectory};
use crate::boolp::Semantics;
use crate::error::{Error, Limits, Result};
use crate::translate::bcn_to_composite;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoFaSeInstance {
    pub bcn: BooleanControlNetwork,
    pub start: Vec<StateSet>,
    pub target: Vec<StateSet>,
    pub mode: BooleanMode,
}

impl CoFaSeInstance {
    pub fn new(
        bcn: BooleanControlNetwork,
        start: Vec<StateSet>,
        target: Vec<StateSet>,
        mode: BooleanMode,
    ) -> Result<Self> {
        if start.is_empty() || target.is_empty() {
            return Err(Error::Validation(
                "start and target sets must be non-empty".into(),
            ));
        }
        for s in start.iter().chain(&target) {
            bcn.x_table().check(s)?;
        }
        mode.check(bcn.x_table())?;
        let dedup = |v: Vec<StateSet>| -> Vec<StateSet> {
            v.into_iter().collect::<BTreeSet<_>>().into_iter().collect()
        };
        Ok(CoFaSeInstance {
            bcn,
            start: dedup(start),
            target: dedup(target),
            mode,
        })
    }
}

/// Whether one sequence must serve every start state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Policy {
    #[default]
    Uniform,
    PerStart,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    pub max_phases: usize,
    pub policy: Policy,
    /// Least number of steps each phase must take.
    pub min_steps_per_phase: usize,
    pub limits: Limits,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            max_phases: 4,
            policy: Policy::Uniform,
            min_steps_per_phase: 0,
            limits: Limits::default(),
        }
    }
}

/// A control sequence for one start state with a glued witness trajectory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StartWitness {
    pub start: StateSet,
    pub controls: Vec<Control>,
    pub trajectory: Trajectory,
    /// Indices in `trajectory.states` where one phase ends and the next begins.
    pub boundaries: Vec<usize>,
}

impl StartWitness {
    pub fn phases(&self) -> usize {
        self.controls.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoFaSeSolution {
    pub policy: Policy,
    pub witnesses: Vec<StartWitness>,
}

impl CoFaSeSolution {
    /// The longest sequence over all start states.
    pub fn phases(&self) -> usize {
        self.witnesses
            .iter()
            .map(StartWitness::phases)
            .max()
            .unwrap_or(0)
    }

    pub fn to_json(&self, bcn: &BooleanControlNetwork) -> Value {
        let u = bcn.u_table();
        let x = bcn.x_table();
        let witnesses: Vec<Value> = self
            .witnesses
            .iter()
            .map(|w| {
                json!({
                    "start": x.show_digits(&w.start),
                    "controls": w.controls.iter().map(|c| u.show_set(c)).collect::<Vec<_>>(),
                    "states": w.trajectory.states.iter().map(|s| x.show_digits(s)).collect::<Vec<_>>(),
                    "boundaries": w.boundaries,
                })
            })
            .collect();
        json!({
            "solved": true,
            "policy": match self.policy { Policy::Uniform => "uniform", Policy::PerStart => "per-start" },
            "phases": self.phases(),
            "witnesses": witnesses,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Solved(CoFaSeSolution),
    /// Nothing found within `bound` phases (direct engine) or steps (composite engine).
    NoSolutionWithinBound {
        bound: usize,
    },
}

impl Outcome {
    pub fn solution(&self) -> Option<&CoFaSeSolution> {
        match self {
            Outcome::Solved(s) => Some(s),
            Outcome::NoSolutionWithinBound { .. } => None,
        }
    }
}

/// The controls the direct engine tries, in canonical order.
///
/// All of `S_U` when it is enumerable; otherwise, for paired freeze controls,
/// only the controls setting at most one member of each pair.
pub fn control_space(bcn: &BooleanControlNetwork, limits: &Limits) -> Result<Vec<Control>> {
    let u = bcn.u_table();
    if limits.check_vars("control enumeration", u.len()).is_ok() {
        return Ok(u.all_states(limits)?.collect());
    }
    let pairs = control_pairs(u)?;
    let count = 3f64.powi(pairs.len() as i32);
    if count > limits.breadth as f64 {
        return Err(Error::Capacity {
            what: "freeze control enumeration",
            needed: count.min(usize::MAX as f64) as usize,
            limit: limits.breadth,
        });
    }
    let mut out = vec![Control::new()];
    for (_, p0, p1) in pairs {
        out = out
            .into_iter()
            .flat_map(|c| {
                let mut zero = c.clone();
                zero.insert(p0);
                let mut one = c.clone();
                one.insert(p1);
                [c, zero, one]
            })
            .collect();
    }
    out.sort();
    Ok(out)
}

/// The one-step graph of a network over state codes, with closures.
struct PhaseGraph {
    net: BooleanNetwork,
    succ: Vec<Vec<u32>>,
    /// States reachable from each state in at least `min_steps` steps.
    reach: Vec<BitSet>,
}

impl PhaseGraph {
    fn new(net: BooleanNetwork, mode: &BooleanMode, min_steps: usize) -> Self {
        let n = net.table().len();
        let count = 1usize << n;
        let succ: Vec<Vec<u32>> = (0..count)
            .map(|c| {
                let s = BitSet::from_code(c as u64, n);
                let mut out: Vec<u32> = mode
                    .elements()
                    .iter()
                    .map(|m| net.step_unchecked(&s, m).to_code(n) as u32)
                    .collect();
                out.sort_unstable();
                out.dedup();
                out
            })
            .collect();
        let reach = (0..count)
            .map(|c| {
                let mut layer: BitSet = BitSet::singleton(c);
                for _ in 0..min_steps {
                    layer = layer
                        .iter()
                        .flat_map(|s| succ[s].iter().map(|&d| d as usize))
                        .collect();
                }
                let mut seen = layer.clone();
                let mut queue: VecDeque<usize> = layer.iter().collect();
                while let Some(s) = queue.pop_front() {
                    for &d in &succ[s] {
                        if seen.insert(d as usize) {
                            queue.push_back(d as usize);
                        }
                    }
                }
                seen
            })
            .collect();
        PhaseGraph { net, succ, reach }
    }

    fn image(&self, from: &BitSet) -> BitSet {
        let mut out = BitSet::new();
        for s in from.iter() {
            out.union_with(&self.reach[s]);
        }
        out
    }

    /// A shortest path of at least `min_steps` steps from `a` to `b`.
    fn path(&self, a: usize, b: usize, min_steps: usize) -> Vec<usize> {
        // Search over (state, min(steps, min_steps)).
        let key = |s: usize, k: usize| s * (min_steps + 1) + k;
        let mut prev: HashMap<usize, usize> = HashMap::new();
        let mut queue = VecDeque::from([(a, 0usize)]);
        let mut seen = HashSet::from([key(a, 0)]);
        while let Some((s, k)) = queue.pop_front() {
            if s == b && k == min_steps {
                let mut path = vec![s];
                let mut cur = key(s, k);
                while let Some(&p) = prev.get(&cur) {
                    path.push(p / (min_steps + 1));
                    cur = p;
                }
                path.reverse();
                return path;
            }
            for &d in &self.succ[s] {
                let nk = (k + 1).min(min_steps);
                if seen.insert(key(d as usize, nk)) {
                    prev.insert(key(d as usize, nk), key(s, k));
                    queue.push_back((d as usize, nk));
                }
            }
        }
        unreachable!("path requested between states that are not connected")
    }
}

/// Shortest control sequence, breadth-first over phases.
pub fn solve_cofase(inst: &CoFaSeInstance, opts: &SearchOptions) -> Result<Outcome> {
    let n = inst.bcn.x_table().len();
    opts.limits.check_vars("state enumeration", n)?;
    let controls = control_space(&inst.bcn, &opts.limits)?;
    let graphs: Vec<PhaseGraph> = controls
        .iter()
        .map(|mu| {
            Ok(PhaseGraph::new(
                inst.bcn.apply_control(mu)?,
                &inst.mode,
                opts.min_steps_per_phase,
            ))
        })
        .collect::<Result<_>>()?;
    let target: BitSet = inst.target.iter().map(|t| t.to_code(n) as usize).collect();

    let groups: Vec<Vec<StateSet>> = match opts.policy {
        Policy::Uniform => vec![inst.start.clone()],
        Policy::PerStart => inst.start.iter().map(|s| vec![s.clone()]).collect(),
    };
    let mut witnesses = Vec::new();
    for group in groups {
        let codes: Vec<usize> = group.iter().map(|s| s.to_code(n) as usize).collect();
        let Some(seq) = search_sequence(&graphs, &codes, &target, opts.max_phases) else {
            return Ok(Outcome::NoSolutionWithinBound {
                bound: opts.max_phases,
            });
        };
        for (s, &code) in group.iter().zip(&codes) {
            let seq_graphs: Vec<&PhaseGraph> = seq.iter().map(|&i| &graphs[i]).collect();
            let (trajectory, boundaries) = build_witness(
                &seq_graphs,
                code,
                &target,
                n,
                &inst.mode,
                opts.min_steps_per_phase,
            );
            witnesses.push(StartWitness {
                start: s.clone(),
                controls: seq.iter().map(|&i| controls[i].clone()).collect(),
                trajectory,
                boundaries,
            });
        }
    }
    Ok(Outcome::Solved(CoFaSeSolution {
        policy: opts.policy,
        witnesses,
    }))
}

/// Breadth-first search over the tuple of reachable-state sets, one per start.
fn search_sequence(
    graphs: &[PhaseGraph],
    starts: &[usize],
    target: &BitSet,
    max_phases: usize,
) -> Option<Vec<usize>> {
    let root: Vec<BitSet> = starts.iter().map(|&s| BitSet::singleton(s)).collect();
    // (positions, parent, control)
    let mut arena: Vec<(Vec<BitSet>, usize, usize)> = vec![(root.clone(), usize::MAX, usize::MAX)];
    let mut seen: HashSet<Vec<BitSet>> = HashSet::from([root]);
    let mut level = vec![0usize];
    for _ in 0..max_phases {
        let mut next = Vec::new();
        for &node in &level {
            for (ci, g) in graphs.iter().enumerate() {
                let pos: Vec<BitSet> = arena[node].0.iter().map(|p| g.image(p)).collect();
                let done = pos.iter().all(|p| !p.is_disjoint(target));
                if done {
                    let mut seq = vec![ci];
                    let mut cur = node;
                    while arena[cur].1 != usize::MAX {
                        seq.push(arena[cur].2);
                        cur = arena[cur].1;
                    }
                    seq.reverse();
                    return Some(seq);
                }
                if seen.insert(pos.clone()) {
                    arena.push((pos, node, ci));
                    next.push(arena.len() - 1);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        level = next;
    }
    None
}

fn build_witness(
    graphs: &[&PhaseGraph],
    start: usize,
    target: &BitSet,
    n: usize,
    mode: &BooleanMode,
    min_steps: usize,
) -> (Trajectory, Vec<usize>) {
    let mut layers = vec![BitSet::singleton(start)];
    for g in graphs {
        let next = g.image(layers.last().unwrap());
        layers.push(next);
    }
    let decode = |c: usize| BitSet::from_code(c as u64, n);
    // Pick endpoints backwards, smallest state first.
    let mut ends = vec![layers
        .last()
        .unwrap()
        .intersection(target)
        .iter()
        .min_by_key(|&c| decode(c))
        .expect("search guaranteed a target")];
    for k in (0..graphs.len()).rev() {
        let goal = *ends.last().unwrap();
        let prev = layers[k]
            .iter()
            .filter(|&p| graphs[k].reach[p].contains(goal))
            .min_by_key(|&c| decode(c))
            .expect("layer construction guarantees a predecessor");
        ends.push(prev);
    }
    ends.reverse();
    let mut states = vec![decode(start)];
    let mut labels = Vec::new();
    let mut boundaries = Vec::new();
    for (k, g) in graphs.iter().enumerate() {
        if k > 0 {
            boundaries.push(states.len() - 1);
        }
        let path = g.path(ends[k], ends[k + 1], min_steps);
        for w in path.windows(2) {
            let (a, b) = (decode(w[0]), decode(w[1]));
            let label = mode
                .elements()
                .iter()
                .find(|m| g.net.step_unchecked(&a, m) == b)
                .cloned()
                .expect("path edges come from the mode");
            labels.push(label);
            states.push(b);
        }
    }
    (Trajectory { states, labels }, boundaries)
}

/// Result of checking a witness against a control sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verification {
    Accepted,
    /// The step from `states[step]` to `states[step + 1]` (in `phase`) is not
    /// a transition of that phase's network, or the phase is too short.
    Rejected {
        step: usize,
        phase: usize,
    },
}

/// Checks that each segment of `witness` between consecutive boundaries is a
/// trajectory of `F_U(μ_i)` under `mode`. Segments share their endpoint states
/// by construction.
pub fn verify_control_sequence(
    bcn: &BooleanControlNetwork,
    controls: &[Control],
    mode: &BooleanMode,
    witness: &Trajectory,
    boundaries: &[usize],
    min_steps_per_phase: usize,
) -> Result<Verification> {
    if controls.is_empty() {
        return Err(Error::Validation("empty control sequence".into()));
    }
    if boundaries.len() + 1 != controls.len() {
        return Err(Error::Validation(format!(
            "{} boundaries do not split a trajectory into {} phases",
            boundaries.len(),
            controls.len()
        )));
    }
    let last = witness.states.len() - 1;
    let mut cuts = Vec::with_capacity(controls.len() + 1);
    cuts.push(0);
    cuts.extend_from_slice(boundaries);
    cuts.push(last);
    if cuts.windows(2).any(|w| w[0] > w[1]) || boundaries.iter().any(|&b| b > last) {
        return Err(Error::Validation(format!(
            "boundaries {boundaries:?} are not ascending indices into {} states",
            witness.states.len()
        )));
    }
    mode.check(bcn.x_table())?;
    for s in &witness.states {
        bcn.x_table().check(s)?;
    }
    for (phase, mu) in controls.iter().enumerate() {
        let net = bcn.apply_control(mu)?;
        let (from, to) = (cuts[phase], cuts[phase + 1]);
        if to - from < min_steps_per_phase {
            return Ok(Verification::Rejected { step: from, phase });
        }
        for step in from..to {
            let (a, b) = (&witness.states[step], &witness.states[step + 1]);
            if !mode
                .elements()
                .iter()
                .any(|m| &net.step_unchecked(a, m) == b)
            {
                return Ok(Verification::Rejected { step, phase });
            }
        }
    }
    Ok(Verification::Accepted)
}

/// Options of the composite engine.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CompositeOptions {
    /// Longest run of the composite explored.
    pub max_steps: usize,
    /// Solutions with more phases are reported as not found.
    pub max_phases: Option<usize>,
    pub policy: Policy,
    /// 0 or 1.
    pub min_steps_per_phase: usize,
    pub limits: Limits,
}

/// Searches the controlled composite `Π ∪ Π_U` from every `W_α ∪ W_U⁰` for a
/// configuration whose state part is a target, minimizing the number of
/// phases (maximal runs of equal consecutive controls).
///
/// Each start is solved on its own. The uniform policy is accepted only for a
/// single start state, where it coincides with the per-start one.
pub fn solve_cofase_via_composite(
    inst: &CoFaSeInstance,
    opts: &CompositeOptions,
) -> Result<Outcome> {
    if opts.policy == Policy::Uniform && inst.start.len() > 1 {
        return Err(Error::Usage(
            "the composite engine decides each start separately; use the per-start policy".into(),
        ));
    }
    if opts.min_steps_per_phase > 1 {
        return Err(Error::Usage(
            "the composite engine supports at most one required step per phase".into(),
        ));
    }
    let bcn = &inst.bcn;
    let nx = bcn.x_table().len();
    opts.limits
        .check_vars("composite state enumeration", bcn.table().len())?;
    let composite = bcn_to_composite(bcn, &inst.mode)?;
    let system = composite.system();
    let view = system.derive(composite.quasimode(), Semantics::Filtered, &opts.limits)?;
    let target: HashSet<&StateSet> = inst.target.iter().collect();
    let controls: Vec<Control> = bcn.u_table().all_states(&opts.limits)?.collect();

    let mut succ_cache: HashMap<StateSet, Vec<StateSet>> = HashMap::new();
    let mut witnesses = Vec::new();
    for s in &inst.start {
        // Node: (configuration, previous applied control equals its control part).
        let mut arena: Vec<(StateSet, usize)> = Vec::new();
        let mut best: HashMap<(StateSet, bool), usize> = HashMap::new();
        let mut frontier: Vec<((StateSet, bool), usize, usize)> = Vec::new();
        for mu in &controls {
            let c = composite.initial(s, mu);
            arena.push((c.clone(), usize::MAX));
            best.insert((c.clone(), false), 0);
            frontier.push(((c, false), 0, arena.len() - 1));
        }
        let mut found: Option<(usize, usize)> = None; // (phases, node)
        for step in 0..=opts.max_steps {
            for ((c, _), phases, node) in &frontier {
                let allowed = step > 0 || opts.min_steps_per_phase == 0;
                if allowed && target.contains(&c.truncated(nx)) {
                    let p = (*phases).max(1);
                    if found.is_none_or(|(fp, _)| p < fp) {
                        found = Some((p, *node));
                    }
                }
            }
            if step == opts.max_steps || frontier.is_empty() {
                break;
            }
            let mut next: HashMap<(StateSet, bool), (usize, usize)> = HashMap::new();
            for ((c, flag), phases, node) in &frontier {
                if let Some((fp, _)) = found {
                    if *phases >= fp {
                        continue;
                    }
                }
                let applied = c.slice_from(nx, bcn.u_table().len());
                let np = phases + usize::from(!flag);
                if !succ_cache.contains_key(c) {
                    let dsts = view.successors(c)?.into_iter().map(|(_, d)| d).collect();
                    succ_cache.insert(c.clone(), dsts);
                }
                for d in &succ_cache[c] {
                    let nflag = d.slice_from(nx, bcn.u_table().len()) == applied;
                    let key = (d.clone(), nflag);
                    let better_than_seen = best.get(&key).is_none_or(|&b| np < b);
                    let better_in_layer = next.get(&key).is_none_or(|&(b, _)| np < b);
                    if better_than_seen && better_in_layer {
                        next.insert(key, (np, *node));
                    }
                }
            }
            let mut layer: Vec<_> = next.into_iter().collect();
            layer.sort_by(|a, b| (a.1 .0, &a.0 .0, a.0 .1).cmp(&(b.1 .0, &b.0 .0, b.0 .1)));
            frontier = layer
                .into_iter()
                .map(|((c, flag), (p, parent))| {
                    best.insert((c.clone(), flag), p);
                    arena.push((c.clone(), parent));
                    ((c, flag), p, arena.len() - 1)
                })
                .collect();
        }
        let Some((phases, node)) = found else {
            return Ok(Outcome::NoSolutionWithinBound {
                bound: opts.max_steps,
            });
        };
        if opts.max_phases.is_some_and(|m| phases > m) {
            return Ok(Outcome::NoSolutionWithinBound {
                bound: opts.max_steps,
            });
        }
        let mut configs = vec![arena[node].0.clone()];
        let mut cur = arena[node].1;
        while cur != usize::MAX {
            configs.push(arena[cur].0.clone());
            cur = arena[cur].1;
        }
        configs.reverse();
        witnesses.push(decode_composite_run(&composite, &configs, &inst.mode));
    }
    Ok(Outcome::Solved(CoFaSeSolution {
        policy: opts.policy,
        witnesses,
    }))
}

/// Reads a composite run as a control sequence: the control applied at each
/// step is the control part of the configuration it leaves; equal
/// consecutive controls form one phase.
fn decode_composite_run(
    composite: &crate::translate::ControlledComposite,
    configs: &[StateSet],
    mode: &BooleanMode,
) -> StartWitness {
    let parts: Vec<(StateSet, Control)> = configs.iter().map(|c| composite.split(c)).collect();
    let states: Vec<StateSet> = parts.iter().map(|(s, _)| s.clone()).collect();
    let mut controls: Vec<Control> = Vec::new();
    let mut boundaries = Vec::new();
    let mut labels = Vec::new();
    for (i, (s, mu)) in parts[..parts.len() - 1].iter().enumerate() {
        if controls.last() != Some(mu) {
            if !controls.is_empty() {
                boundaries.push(i);
            }
            controls.push(mu.clone());
        }
        let net = composite
            .bcn()
            .apply_control(mu)
            .expect("control over the network's inputs");
        let label = mode
            .elements()
            .iter()
            .find(|m| net.step_unchecked(s, m) == parts[i + 1].0)
            .cloned()
            .unwrap_or_default();
        labels.push(label);
    }
    if controls.is_empty() {
        controls.push(Control::new());
    }
    StartWitness {
        start: states[0].clone(),
        controls,
        trajectory: Trajectory { states, labels },
        boundaries,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bcn::freeze_extend;
    use crate::bn::tests::example_31;
    use crate::formula::VarTable;

    fn instance(start: &[&str], target: &[&str]) -> CoFaSeInstance {
        let f = example_31();
        let b = freeze_extend(&f).unwrap();
        let st = |d: &&str| f.table().parse_state(d).unwrap();
        CoFaSeInstance::new(
            b,
            start.iter().map(st).collect(),
            target.iter().map(st).collect(),
            BooleanMode::synchronous(f.table()),
        )
        .unwrap()
    }

    fn opts(max_phases: usize) -> SearchOptions {
        SearchOptions {
            max_phases,
            ..SearchOptions::default()
        }
    }

    fn verify(inst: &CoFaSeInstance, w: &StartWitness, min_steps: usize) -> Verification {
        verify_control_sequence(
            &inst.bcn,
            &w.controls,
            &inst.mode,
            &w.trajectory,
            &w.boundaries,
            min_steps,
        )
        .unwrap()
    }

    #[test]
    fn example_32_is_solved_within_three_phases() {
        let inst = instance(&["01"], &["11"]);
        let out = solve_cofase(&inst, &opts(3)).unwrap();
        let sol = out.solution().expect("solvable");
        assert!(sol.phases() <= 3);
        let w = &sol.witnesses[0];
        assert_eq!(w.trajectory.last(), &inst.target[0]);
        assert_eq!(verify(&inst, w, 0), Verification::Accepted);
    }

    #[test]
    fn start_inside_target_needs_one_empty_phase() {
        let inst = instance(&["01"], &["01", "11"]);
        let sol = solve_cofase(&inst, &opts(3)).unwrap();
        let w = &sol.solution().unwrap().witnesses[0];
        assert_eq!(w.controls, vec![Control::new()]);
        assert_eq!(w.trajectory.steps(), 0);
    }

    #[test]
    fn uncontrolled_network_cannot_reach_11() {
        let f = example_31();
        let b =
            BooleanControlNetwork::new(f.table().clone(), VarTable::new(), f.updates().to_vec())
                .unwrap();
        let inst = CoFaSeInstance::new(
            b,
            vec![f.table().parse_state("01").unwrap()],
            vec![f.table().parse_state("11").unwrap()],
            BooleanMode::synchronous(f.table()),
        )
        .unwrap();
        assert_eq!(
            solve_cofase(&inst, &opts(4)).unwrap(),
            Outcome::NoSolutionWithinBound { bound: 4 }
        );
        let composite = solve_cofase_via_composite(
            &inst,
            &CompositeOptions {
                max_steps: 16,
                max_phases: None,
                policy: Policy::Uniform,
                min_steps_per_phase: 0,
                limits: Limits::default(),
            },
        )
        .unwrap();
        assert!(composite.solution().is_none());
    }

    #[test]
    fn composite_engine_agrees_on_example_32() {
        let inst = instance(&["01"], &["11"]);
        let direct = solve_cofase(&inst, &opts(4)).unwrap();
        let composite = solve_cofase_via_composite(
            &inst,
            &CompositeOptions {
                max_steps: 16,
                max_phases: Some(4),
                policy: Policy::Uniform,
                min_steps_per_phase: 0,
                limits: Limits::default(),
            },
        )
        .unwrap();
        let (d, c) = (direct.solution().unwrap(), composite.solution().unwrap());
        assert_eq!(d.phases(), c.phases());
        assert_eq!(verify(&inst, &c.witnesses[0], 0), Verification::Accepted);
    }

    #[test]
    fn strict_phases_need_a_step() {
        let inst = instance(&["01"], &["01"]);
        let o = SearchOptions {
            min_steps_per_phase: 1,
            ..opts(3)
        };
        let sol = solve_cofase(&inst, &o).unwrap();
        let w = &sol.solution().unwrap().witnesses[0];
        assert!(w.trajectory.steps() >= 1);
        assert_eq!(verify(&inst, w, 1), Verification::Accepted);
    }

    #[test]
    fn per_start_and_uniform_policies() {
        let inst = instance(&["00", "10"], &["11"]);
        let uni = solve_cofase(&inst, &opts(4)).unwrap();
        let sol = uni.solution().unwrap();
        assert_eq!(sol.witnesses.len(), 2);
        assert_eq!(sol.witnesses[0].controls, sol.witnesses[1].controls);
        for w in &sol.witnesses {
            assert_eq!(verify(&inst, w, 0), Verification::Accepted);
        }
        let per = solve_cofase(
            &inst,
            &SearchOptions {
                policy: Policy::PerStart,
                ..opts(4)
            },
        )
        .unwrap();
        assert!(per.solution().unwrap().phases() <= sol.phases());
    }

    #[test]
    fn verification_examples() {
        let inst = instance(&["01"], &["11"]);
        let f = example_31();
        let states = |ds: &[&str]| {
            Trajectory::from_states(
                ds.iter()
                    .map(|d| f.table().parse_state(d).unwrap())
                    .collect(),
            )
            .unwrap()
        };
        let u = inst.bcn.u_table();
        let mus = vec![
            Control::new(),
            u.set_of(&["u_x0"]).unwrap(),
            u.set_of(&["u_y1"]).unwrap(),
        ];
        let tau = states(&["01", "10", "01", "00", "00", "01", "11"]);
        let check = |t: &Trajectory, b: &[usize]| {
            verify_control_sequence(&inst.bcn, &mus, &inst.mode, t, b, 0)
        };
        assert_eq!(check(&tau, &[2, 4]).unwrap(), Verification::Accepted);
        let bad = states(&["01", "10", "11", "00", "00", "01", "11"]);
        assert_eq!(
            check(&bad, &[2, 4]).unwrap(),
            Verification::Rejected { step: 1, phase: 0 }
        );
        assert!(check(&tau, &[4, 2]).is_err());
        assert!(check(&tau, &[2]).is_err());
        assert!(check(&tau, &[2, 9]).is_err());
        let single = states(&["10"]);
        assert_eq!(
            verify_control_sequence(&inst.bcn, &mus[1..2], &inst.mode, &single, &[], 0).unwrap(),
            Verification::Accepted
        );
    }

    #[test]
    fn zero_phase_bound_finds_nothing() {
        let inst = instance(&["01"], &["01"]);
        assert_eq!(
            solve_cofase(&inst, &opts(0)).unwrap(),
            Outcome::NoSolutionWithinBound { bound: 0 }
        );
    }

    #[test]
    fn freeze_generator_for_large_control_sets() {
        let f = example_31();
        let b = freeze_extend(&f).unwrap();
        let limits = Limits {
            vars: 3,
            ..Limits::default()
        };
        let space = control_space(&b, &limits).unwrap();
        assert_eq!(space.len(), 9);
        assert_eq!(space[0], Control::new());
    }

    #[test]
    fn instance_validation() {
        let f = example_31();
        let b = freeze_extend(&f).unwrap();
        let syn = BooleanMode::synchronous(f.table());
        assert!(CoFaSeInstance::new(b.clone(), vec![], vec![BitSet::new()], syn.clone()).is_err());
        assert!(
            CoFaSeInstance::new(b, vec![BitSet::singleton(4)], vec![BitSet::new()], syn).is_err()
        );
    }
}
