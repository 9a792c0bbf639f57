//! Single-fault mutants of translated systems must be caught with a
//! counterexample.

use std::collections::BTreeSet;

use boolps::equivalence::{boolp_transitions, compare_bcn_simulation, compare_bn_simulation};
use boolps::random::{random_bn, random_freeze_bcn, random_mode};
use boolps::translate::{bcn_to_composite, bn_mode_to_quasimode, bn_to_boolp};
use boolps::{BooleanPSystem, Formula, Limits, Quasimode, Rule, Semantics};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn family(q: &Quasimode) -> Vec<BTreeSet<String>> {
    match q {
        Quasimode::Explicit(f) => f.clone(),
        other => panic!("expected an explicit quasimode, got {other}"),
    }
}

fn rebuild(system: &BooleanPSystem, rules: Vec<Rule>) -> BooleanPSystem {
    BooleanPSystem::new(system.table().clone(), rules).unwrap()
}

fn flip_guard(system: &BooleanPSystem, i: usize) -> BooleanPSystem {
    let mut rules = system.rules().to_vec();
    rules[i].guard = Formula::not(rules[i].guard.clone());
    rebuild(system, rules)
}

fn drop_rule(system: &BooleanPSystem, q: &Quasimode, i: usize) -> (BooleanPSystem, Quasimode) {
    let mut rules = system.rules().to_vec();
    let gone = rules.remove(i).id;
    let q = Quasimode::explicit(family(q).into_iter().map(|mut m| {
        m.remove(&gone);
        m
    }));
    (rebuild(system, rules), q)
}

/// Same labelled relation as the unmutated system, so no checker could tell them apart.
fn coincides(a: (&BooleanPSystem, &Quasimode), b: (&BooleanPSystem, &Quasimode)) -> bool {
    let limits = Limits::default();
    let rel = |(s, q): (&BooleanPSystem, &Quasimode)| {
        let view = s.derive(q, Semantics::Filtered, &limits).unwrap();
        boolp_transitions(s, &view, &limits)
            .unwrap()
            .edges()
            .map(|e| (e.src.clone(), s.ids_of(&e.label), e.dst.clone()))
            .collect::<BTreeSet<_>>()
    };
    rel(a) == rel(b)
}

#[test]
fn bn_translation_mutants_are_detected() {
    let limits = Limits::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0x6d75);
    let (mut total, mut detected, mut equivalent) = (0, 0, 0);
    for _ in 0..60 {
        let n = rng.gen_range(2..=4);
        let net = random_bn(&mut rng, n);
        let mode = random_mode(&mut rng, net.table());
        let system = bn_to_boolp(&net).unwrap();
        let q = bn_mode_to_quasimode(&mode, &net);
        let i = rng.gen_range(0..system.rules().len());
        let mut mutants = vec![
            (flip_guard(&system, i), q.clone()),
            drop_rule(&system, &q, i),
        ];
        let fam = family(&q);
        let k = rng.gen_range(0..fam.len());
        let dropped: Vec<_> = fam
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != k)
            .map(|(_, m)| m.clone())
            .collect();
        mutants.push((system.clone(), Quasimode::Explicit(dropped)));
        for (ms, mq) in mutants {
            let report = compare_bn_simulation(&net, &mode, &ms, &mq, &limits).unwrap();
            if !report.passed() {
                assert!(report.counterexample.is_some());
                detected += 1;
            } else if coincides((&system, &q), (&ms, &mq)) {
                equivalent += 1;
                continue;
            }
            total += 1;
        }
    }
    let rate = detected as f64 / total as f64;
    println!("bn mutants: {detected}/{total} detected, {equivalent} equivalent");
    assert!(rate >= 0.99, "detection rate {rate}");
}

#[test]
fn composite_mutants_are_detected() {
    let limits = Limits::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0x6d76);
    let (mut total, mut detected, mut equivalent) = (0, 0, 0);
    for _ in 0..20 {
        let bcn = random_freeze_bcn(&mut rng, 2);
        let mode = random_mode(&mut rng, bcn.x_table());
        let composite = bcn_to_composite(&bcn, &mode).unwrap();
        let system = composite.system().clone();
        let npi = composite.pi().rules().len();

        // Guard flip on a state-update rule.
        let i = rng.gen_range(0..npi);
        let flipped = flip_guard(&system, i);
        // Control erasure removed: stale controls persist.
        let kept: Vec<Rule> = system
            .rules()
            .iter()
            .filter(|r| !r.id.starts_with("u_clr_"))
            .cloned()
            .collect();
        let no_erase = rebuild(&system, kept);
        let no_erase_q = strip_ids(composite.quasimode(), |id| id.starts_with("u_clr_"));
        // One control-setting rule dropped.
        let sets: Vec<&Rule> = system
            .rules()
            .iter()
            .filter(|r| r.id.starts_with("u_set_"))
            .collect();
        let gone = sets[rng.gen_range(0..sets.len())].id.clone();
        let no_set = rebuild(
            &system,
            system
                .rules()
                .iter()
                .filter(|r| r.id != gone)
                .cloned()
                .collect(),
        );
        let no_set_q = strip_ids(composite.quasimode(), |id| id == gone);

        for (s, q) in [
            (flipped, composite.quasimode().clone()),
            (no_erase, no_erase_q),
            (no_set, no_set_q),
        ] {
            let broken = composite.clone().with_parts(s.clone(), q.clone());
            let report = compare_bcn_simulation(&bcn, &mode, &broken, &limits).unwrap();
            if !report.passed() {
                assert!(report.counterexample.is_some());
                detected += 1;
            } else if coincides((&system, composite.quasimode()), (&s, &q)) {
                equivalent += 1;
                continue;
            }
            total += 1;
        }
    }
    println!("composite mutants: {detected}/{total} detected, {equivalent} equivalent");
    assert!(detected as f64 / total as f64 >= 0.99);
}

fn strip_ids(q: &Quasimode, drop: impl Fn(&str) -> bool + Copy) -> Quasimode {
    let keep = |s: &BTreeSet<String>| {
        s.iter()
            .filter(|id| !drop(id))
            .cloned()
            .collect::<BTreeSet<_>>()
    };
    match q {
        Quasimode::Explicit(f) => Quasimode::explicit(f.iter().map(keep)),
        Quasimode::Powerset(s) => Quasimode::Powerset(keep(s)),
        Quasimode::Product(a, b) => {
            Quasimode::Product(Box::new(strip_ids(a, drop)), Box::new(strip_ids(b, drop)))
        }
        other => other.clone(),
    }
}

#[test]
fn removing_control_erasure_is_reported_at_a_controlled_state() {
    let net = boolps::syntax::parse_bn("var x, y\nx' = !x & y\ny' = x & !y\n").unwrap();
    let bcn = boolps::bcn::freeze_extend(&net).unwrap();
    let mode = boolps::BooleanMode::synchronous(net.table());
    let composite = bcn_to_composite(&bcn, &mode).unwrap();
    let system = composite.system();
    let kept = system
        .rules()
        .iter()
        .filter(|r| !r.id.starts_with("u_clr_"))
        .cloned()
        .collect();
    let broken = composite.clone().with_parts(
        rebuild(system, kept),
        strip_ids(composite.quasimode(), |id| id.starts_with("u_clr_")),
    );
    let report = compare_bcn_simulation(&bcn, &mode, &broken, &Limits::default()).unwrap();
    assert!(!report.passed());
    let cex = report.counterexample.unwrap();
    assert!(!cex.raw_state.slice_from(2, 4).is_empty(), "{cex:?}");
}
