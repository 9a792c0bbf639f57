//! Control sequence search against exhaustive enumeration of short sequences.

use std::collections::BTreeSet;

use boolps::bcn::BooleanControlNetwork;
use boolps::cofase::{
    solve_cofase, solve_cofase_via_composite, verify_control_sequence, CompositeOptions,
    SearchOptions, Verification,
};
use boolps::random::random_cofase;
use boolps::{BitSet, BooleanMode, CoFaSeInstance, Limits, Policy, StateSet};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// States reachable from `from` in zero or more steps of `F_U(μ)`.
fn closure(
    bcn: &BooleanControlNetwork,
    mode: &BooleanMode,
    mu: &BitSet,
    from: &BTreeSet<StateSet>,
) -> BTreeSet<StateSet> {
    let net = bcn.apply_control(mu).unwrap();
    let mut seen = from.clone();
    let mut stack: Vec<StateSet> = from.iter().cloned().collect();
    while let Some(s) = stack.pop() {
        for m in mode.elements() {
            let t = net.step(&s, m).unwrap();
            if seen.insert(t.clone()) {
                stack.push(t);
            }
        }
    }
    seen
}

fn solves(inst: &CoFaSeInstance, starts: &[StateSet], seq: &[BitSet]) -> bool {
    starts.iter().all(|s| {
        let mut pos = BTreeSet::from([s.clone()]);
        for mu in seq {
            pos = closure(&inst.bcn, &inst.mode, mu, &pos);
        }
        pos.iter().any(|p| inst.target.contains(p))
    })
}

/// Every sequence of exactly `len` controls.
fn sequences(controls: &[BitSet], len: usize) -> Vec<Vec<BitSet>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|seq| {
                controls.iter().map(move |c| {
                    let mut next = seq.clone();
                    next.push(c.clone());
                    next
                })
            })
            .collect();
    }
    out
}

fn minimal_phases(inst: &CoFaSeInstance, starts: &[StateSet], bound: usize) -> Option<usize> {
    let controls: Vec<BitSet> = inst
        .bcn
        .u_table()
        .all_states(&Limits::default())
        .unwrap()
        .collect();
    (1..=bound).find(|&k| {
        sequences(&controls, k)
            .iter()
            .any(|seq| solves(inst, starts, seq))
    })
}

#[test]
fn search_is_minimal_against_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xc0fa);
    let bound = 3;
    let mut solved = 0;
    for i in 0..40 {
        let n = 2 + i % 2;
        let inst = random_cofase(&mut rng, n);
        if inst.bcn.u_table().len() > 4 {
            continue;
        }
        let opts = SearchOptions {
            max_phases: bound,
            ..SearchOptions::default()
        };
        let out = solve_cofase(&inst, &opts).unwrap();
        let oracle = minimal_phases(&inst, &inst.start, bound);
        match out.solution() {
            Some(sol) => {
                solved += 1;
                assert_eq!(Some(sol.phases()), oracle, "instance {i}");
                for w in &sol.witnesses {
                    assert!(inst.target.contains(w.trajectory.last()));
                    assert_eq!(w.trajectory.first(), &w.start);
                    let v = verify_control_sequence(
                        &inst.bcn,
                        &w.controls,
                        &inst.mode,
                        &w.trajectory,
                        &w.boundaries,
                        0,
                    )
                    .unwrap();
                    assert_eq!(v, Verification::Accepted, "instance {i}");
                }
            }
            None => assert_eq!(oracle, None, "instance {i}"),
        }
    }
    assert!(solved > 5);
}

#[test]
fn per_start_policy_is_minimal_per_start() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xc0fb);
    for _ in 0..20 {
        let inst = random_cofase(&mut rng, 2);
        let opts = SearchOptions {
            max_phases: 3,
            policy: Policy::PerStart,
            ..SearchOptions::default()
        };
        let out = solve_cofase(&inst, &opts).unwrap();
        let oracle: Option<Vec<usize>> = inst
            .start
            .iter()
            .map(|s| minimal_phases(&inst, std::slice::from_ref(s), 3))
            .collect();
        match (out.solution(), oracle) {
            (Some(sol), Some(per)) => {
                let got: Vec<usize> = sol.witnesses.iter().map(|w| w.phases()).collect();
                assert_eq!(got, per);
            }
            (None, None) => {}
            (got, want) => panic!("search {got:?} oracle {want:?}"),
        }
    }
}

#[test]
fn engines_agree_per_start() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xc0fc);
    for _ in 0..15 {
        let inst = random_cofase(&mut rng, 2);
        let direct = solve_cofase(
            &inst,
            &SearchOptions {
                max_phases: 4,
                policy: Policy::PerStart,
                ..SearchOptions::default()
            },
        )
        .unwrap();
        let composite = solve_cofase_via_composite(
            &inst,
            &CompositeOptions {
                max_steps: 12,
                max_phases: Some(4),
                policy: Policy::PerStart,
                min_steps_per_phase: 0,
                limits: Limits::default(),
            },
        )
        .unwrap();
        let phases = |o: &boolps::Outcome| {
            o.solution()
                .map(|s| s.witnesses.iter().map(|w| w.phases()).collect::<Vec<_>>())
        };
        assert_eq!(phases(&direct), phases(&composite));
        if let Some(sol) = composite.solution() {
            for w in &sol.witnesses {
                let v = verify_control_sequence(
                    &inst.bcn,
                    &w.controls,
                    &inst.mode,
                    &w.trajectory,
                    &w.boundaries,
                    0,
                )
                .unwrap();
                assert_eq!(v, Verification::Accepted);
            }
        }
    }
}
