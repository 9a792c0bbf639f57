//! Acceptance suite. Prints one pass/fail line per criterion and fails if any
//! criterion fails.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use boolps::bcn::freeze_extend;
use boolps::boolp::{apply_rules, rule_applicable, union_systems};
use boolps::cofase::{
    solve_cofase, solve_cofase_via_composite, verify_control_sequence, CompositeOptions,
    SearchOptions, Verification,
};
use boolps::equivalence::{check_bcn_simulation, check_bn_simulation};
use boolps::random::{
    random_bn, random_cofase, random_explicit_quasimode, random_freeze_bcn, random_mode, random_rs,
    random_system,
};
use boolps::syntax::{parse_bn, parse_cofase, parse_system};
use boolps::translate::rs_to_boolp;
use boolps::{
    BitSet, BooleanMode, BooleanPSystem, Limits, ModeView, Policy, Quasimode, Rule, Semantics,
    StateSet,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

fn model(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../models")
        .join(name)
}

fn boolps(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_boolps"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).expect("utf-8 output"),
    )
}

struct Outcome {
    ok: bool,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Outcome {
    Outcome {
        ok: true,
        detail: detail.into(),
    }
}

fn fail(detail: impl Into<String>) -> Outcome {
    Outcome {
        ok: false,
        detail: detail.into(),
    }
}

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return fail(format!($($msg)+));
        }
    };
}

/// Edges of a JSON-lines relation as (src, dst) pairs.
fn json_edges(text: &str) -> BTreeSet<(String, String)> {
    text.lines()
        .map(|l| {
            let v: Value = serde_json::from_str(l).expect("one JSON object per line");
            (
                v["src"].as_str().unwrap().to_string(),
                v["dst"].as_str().unwrap().to_string(),
            )
        })
        .collect()
}

fn successors(edges: &BTreeSet<(String, String)>, src: &str) -> BTreeSet<String> {
    edges
        .iter()
        .filter(|(s, _)| s == src)
        .map(|(_, d)| d.clone())
        .collect()
}

fn set(items: &[&str]) -> BTreeSet<String> {
    items.iter().map(|s| s.to_string()).collect()
}

fn criterion_1() -> Outcome {
    let path = model("ex31.bn");
    let path = path.to_str().unwrap();
    let (code, syn) = boolps(&[
        "bn",
        "transitions",
        path,
        "--mode",
        "syn",
        "--format",
        "json",
    ]);
    ensure!(code == 0, "syn exit {code}");
    let syn = json_edges(&syn);
    // The figure draws a self-loop at 11; the formulas give 11 -> 00.
    let expected: BTreeSet<(String, String)> =
        [("00", "00"), ("01", "10"), ("10", "01"), ("11", "00")]
            .iter()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect();
    ensure!(syn == expected, "syn edges {syn:?}");
    let (code, asyn) = boolps(&[
        "bn",
        "transitions",
        path,
        "--mode",
        "asyn",
        "--format",
        "json",
    ]);
    ensure!(code == 0, "asyn exit {code}");
    let asyn = json_edges(&asyn);
    ensure!(
        successors(&asyn, "01") == set(&["11", "00"]),
        "asyn from 01"
    );
    ensure!(
        successors(&asyn, "10") == set(&["11", "00"]),
        "asyn from 10"
    );
    ensure!(
        successors(&asyn, "11") == set(&["01", "10"]),
        "asyn from 11"
    );
    ensure!(successors(&asyn, "00") == set(&["00"]), "asyn from 00");
    pass("syn 01->10, 10->01, 00->00, 11->00; asyn 01,10 -> {11,00}, 11 -> {01,10}")
}

fn criterion_2() -> Outcome {
    let path = model("ex41.pi");
    let (code, out) = boolps(&[
        "pi",
        "trace",
        path.to_str().unwrap(),
        "--mode",
        "maxpar",
        "--init",
        "{a,b}",
        "--steps",
        "2",
    ]);
    ensure!(code == 0, "exit {code}");
    ensure!(out == "{a,b} -> {a} -> {} halting\n", "trace `{out}`");
    let file = parse_system(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let system = &file.system;
    let limits = Limits::default();
    let view = system.maximally_parallel();
    let start = system.table().parse_state("{a,b}").unwrap();
    let evolution = system.evolve(&view, &start, 10, &limits).unwrap();
    ensure!(evolution.runs.len() == 1, "{} runs", evolution.runs.len());
    let run = &evolution.runs[0];
    let shown: Vec<String> = run
        .trajectory
        .states
        .iter()
        .map(|s| system.table().show_set(s))
        .collect();
    ensure!(shown == ["{a,b}", "{a}", "{}"], "states {shown:?}");
    ensure!(
        run.halting && system.is_halting(&StateSet::new()),
        "empty configuration must halt"
    );
    pass("unique maxpar run {a,b} -> {a} -> {}, {} halting")
}

fn criterion_3() -> Outcome {
    let path = model("ex32.cofase");
    let p = path.to_str().unwrap();
    let (code, out) = boolps(&[
        "cofase",
        "verify",
        p,
        "--controls",
        "{};{u_x0};{u_y1}",
        "--trajectory",
        "01,10,01,00,00,01,11",
        "--boundaries",
        "2,4",
    ]);
    ensure!(
        code == 0 && out.trim() == "accepted",
        "verify exit {code}: {out}"
    );
    let (code, out) = boolps(&[
        "cofase",
        "solve",
        p,
        "--max-phases",
        "3",
        "--format",
        "json",
    ]);
    ensure!(code == 0, "solve exit {code}");
    let v: Value = serde_json::from_str(&out).unwrap();
    let phases = v["phases"].as_u64().unwrap();
    ensure!((1..=3).contains(&phases), "{phases} phases");

    let inst = parse_cofase(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let net = parse_bn(&std::fs::read_to_string(model("ex31.bn")).unwrap()).unwrap();
    ensure!(
        inst.bcn == freeze_extend(&net).unwrap(),
        "instance file is not freeze_extend(ex31)"
    );
    let out = solve_cofase(
        &inst,
        &SearchOptions {
            max_phases: 3,
            ..SearchOptions::default()
        },
    )
    .unwrap();
    let Some(sol) = out.solution() else {
        return fail("no solution within 3 phases");
    };
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
        ensure!(v == Verification::Accepted, "witness rejected: {v:?}");
        ensure!(
            inst.target.contains(w.trajectory.last()),
            "witness misses the target"
        );
    }
    let x = inst.bcn.x_table();
    let tau: Vec<String> = sol.witnesses[0]
        .trajectory
        .states
        .iter()
        .map(|s| x.show_digits(s))
        .collect();
    pass(format!(
        "(mu1, mu2, mu3) accepted with boundaries (2, 4); search found {} phase(s): {}",
        sol.phases(),
        tau.join(" -> ")
    ))
}

fn criterion_4() -> Outcome {
    let limits = Limits::default();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut cases = 0;
    for i in 0..100 {
        let n = 2 + i % 4;
        let net = random_bn(&mut rng, n);
        let random = random_mode(&mut rng, net.table());
        for mode in [
            BooleanMode::synchronous(net.table()),
            BooleanMode::asynchronous(net.table()),
            random,
        ] {
            let report = check_bn_simulation(&net, &mode, &limits).unwrap();
            ensure!(report.passed(), "network {i}: {}", report.to_text());
            cases += 1;
        }
    }
    pass(format!("{cases}/300 networks x modes simulated exactly"))
}

fn rename(system: &BooleanPSystem, prefix: &str) -> BooleanPSystem {
    let rules = system
        .rules()
        .iter()
        .map(|r| {
            Rule::new(
                format!("{prefix}{}", r.id),
                r.lhs.clone(),
                r.rhs.clone(),
                r.guard.clone(),
            )
        })
        .collect();
    BooleanPSystem::new(system.table().clone(), rules).unwrap()
}

fn id_family(system: &BooleanPSystem, sets: &[BitSet]) -> BTreeSet<BTreeSet<String>> {
    sets.iter().map(|m| system.ids_of(m)).collect()
}

fn criterion_5() -> Outcome {
    let limits = Limits::default();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut points = 0;
    for i in 0..100 {
        let (v1, v2) = (rng.gen_range(1..=5), rng.gen_range(1..=5));
        let (r1, r2) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
        let p1 = random_system(&mut rng, v1, r1);
        let p2 = rename(&random_system(&mut rng, v2, r2), "q");
        let union = union_systems(&p1, &p2, &limits).unwrap();
        let k1 = rng.gen_range(1..=3);
        let k2 = rng.gen_range(1..=3);
        let q1 = random_explicit_quasimode(&mut rng, &p1, k1);
        let q2 = random_explicit_quasimode(&mut rng, &p2, k2);
        let (Quasimode::Explicit(f1), Quasimode::Explicit(f2)) = (&q1, &q2) else {
            unreachable!()
        };
        let combined = q1.clone().dotted(q2.clone());
        let lhs = union
            .derive(&combined, Semantics::Filtered, &limits)
            .unwrap();
        let rhs = ModeView::product(
            union.derive(&q1, Semantics::Filtered, &limits).unwrap(),
            union.derive(&q2, Semantics::Filtered, &limits).unwrap(),
        )
        .unwrap();
        for w in union.table().all_states(&limits).unwrap() {
            // Oracle: restrict every advised union to its applicable rules.
            let oracle: BTreeSet<BTreeSet<String>> = f1
                .iter()
                .flat_map(|a| {
                    f2.iter()
                        .map(move |b| a.union(b).cloned().collect::<BTreeSet<String>>())
                })
                .map(|m| {
                    m.into_iter()
                        .filter(|id| rule_applicable(union.rule(union.position(id).unwrap()), &w))
                        .collect()
                })
                .collect();
            let a = id_family(&union, &lhs.at(&w).unwrap());
            let b = id_family(&union, &rhs.at(&w).unwrap());
            ensure!(
                a == b && a == oracle,
                "pair {i} at {}: {a:?} vs {b:?} vs {oracle:?}",
                union.table().show_set(&w)
            );
            points += 1;
        }
    }
    pass(format!("100 pairs, {points} configurations: derive of the product equals the product of derived modes"))
}

fn criterion_6() -> Outcome {
    let limits = Limits::default();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut cases = 0;
    for i in 0..50 {
        let bcn = random_freeze_bcn(&mut rng, 2 + i % 2);
        for mode in [
            BooleanMode::synchronous(bcn.x_table()),
            BooleanMode::asynchronous(bcn.x_table()),
        ] {
            let report = check_bcn_simulation(&bcn, &mode, &limits).unwrap();
            ensure!(report.passed(), "network {i}: {}", report.to_text());
            cases += 1;
        }
    }
    pass(format!(
        "{cases}/100 control networks x modes simulated exactly by the composite"
    ))
}

fn criterion_7() -> Outcome {
    let limits = Limits::default();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut states = 0;
    for i in 0..100 {
        let s = rng.gen_range(1..=6);
        let a = rng.gen_range(1..=5);
        let rs = random_rs(&mut rng, s, a);
        let (system, q) = rs_to_boolp(&rs).unwrap();
        let view = system.derive(&q, Semantics::Filtered, &limits).unwrap();
        for w in rs.species().all_states(&limits).unwrap() {
            let expected: BitSet = rs
                .reactions()
                .iter()
                .filter(|r| r.reactants.is_subset(&w) && r.inhibitors.is_disjoint(&w))
                .flat_map(|r| r.products.iter().collect::<Vec<_>>())
                .collect();
            let succ = view.successors(&w).unwrap();
            let got: Vec<StateSet> = if succ.is_empty() {
                vec![w.clone()]
            } else {
                succ.into_iter().map(|(_, d)| d).collect()
            };
            ensure!(
                got == vec![expected.clone()],
                "system {i} at {w:?}: {got:?} vs {expected:?}"
            );
            states += 1;
        }
    }
    pass(format!(
        "100 reaction systems, {states} states: maxpar step equals the result function"
    ))
}

fn criterion_8() -> Outcome {
    let limits = Limits::default();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut solvable, mut unsolvable) = (0, 0);
    for i in 0..30 {
        let inst = random_cofase(&mut rng, 2 + i % 2);
        let max_phases = 1 + i % 4;
        let direct = solve_cofase(
            &inst,
            &SearchOptions {
                max_phases,
                policy: Policy::PerStart,
                min_steps_per_phase: 0,
                limits,
            },
        )
        .unwrap();
        let composite = solve_cofase_via_composite(
            &inst,
            &CompositeOptions {
                max_steps: 8 * max_phases,
                max_phases: Some(max_phases),
                policy: Policy::PerStart,
                min_steps_per_phase: 0,
                limits,
            },
        )
        .unwrap();
        let phases = |o: &boolps::Outcome| {
            o.solution()
                .map(|s| s.witnesses.iter().map(|w| w.phases()).collect::<Vec<_>>())
        };
        ensure!(
            phases(&direct) == phases(&composite),
            "instance {i}: {:?} vs {:?}",
            phases(&direct),
            phases(&composite)
        );
        match composite.solution() {
            Some(sol) => {
                solvable += 1;
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
                    ensure!(
                        v == Verification::Accepted,
                        "instance {i}: composite witness rejected"
                    );
                }
            }
            None => unsolvable += 1,
        }
    }
    pass(format!(
        "30 instances agree ({solvable} solvable, {unsolvable} not within bound)"
    ))
}

fn criterion_9() -> Outcome {
    let limits = Limits::default();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut checked = 0;
    for i in 0..100 {
        let (v, r) = (rng.gen_range(1..=5), rng.gen_range(1..=5));
        let system = random_system(&mut rng, v, r);
        let view = system.maximally_parallel();
        for w in system.table().all_states(&limits).unwrap() {
            let sets = view.at(&w).unwrap();
            if system.is_halting(&w) {
                ensure!(
                    sets.iter().all(BitSet::is_empty),
                    "system {i}: rules offered at a halting state"
                );
                continue;
            }
            ensure!(sets.len() == 1, "system {i}: {} maxpar sets", sets.len());
            ensure!(
                sets[0] == system.applicable_rules(&w),
                "system {i}: maxpar set is extendable"
            );
            let direct = system.apply_rule_set(&w, &sets[0]).unwrap();
            let mut rules: Vec<&Rule> = sets[0].iter().map(|p| system.rule(p)).collect();
            for _ in 0..3 {
                rules.shuffle(&mut rng);
                let dup = rules[rng.gen_range(0..rules.len())];
                rules.push(dup);
                let shuffled = apply_rules(&w, rules.iter().copied()).unwrap();
                ensure!(
                    shuffled == direct,
                    "system {i}: order or duplication changed the result"
                );
            }
            checked += 1;
        }
    }
    pass(format!(
        "100 systems, {checked} non-halting configurations: one maxpar set, order-free application"
    ))
}

fn criterion_10() -> Outcome {
    let path = model("ex32.cofase");
    let (code, out) = boolps(&[
        "cofase",
        "solve",
        path.to_str().unwrap(),
        "--max-phases",
        "0",
    ]);
    ensure!(code == 1, "exit {code}");
    ensure!(out.contains("bound 0"), "output `{out}`");
    pass("hardness not reproduced; searches are bounded and report the bound (exit 1, `no solution within bound 0`)")
}

fn main() {
    let criteria: [(fn() -> Outcome, Duration); 10] = [
        (criterion_1, Duration::from_secs(1)),
        (criterion_2, Duration::from_secs(1)),
        (criterion_3, Duration::from_secs(1)),
        (criterion_4, Duration::from_secs(60)),
        (criterion_5, Duration::from_secs(30)),
        (criterion_6, Duration::from_secs(120)),
        (criterion_7, Duration::from_secs(30)),
        (criterion_8, Duration::from_secs(120)),
        (criterion_9, Duration::from_secs(30)),
        (criterion_10, Duration::from_secs(1)),
    ];
    let mut failed = Vec::new();
    for (i, (check, bound)) in criteria.iter().enumerate() {
        let n = i + 1;
        let started = Instant::now();
        let outcome = check();
        let elapsed = started.elapsed();
        let in_time = elapsed <= *bound;
        let ok = outcome.ok && in_time;
        println!(
            "criterion {n:>2}: {} ({:.2}s, bound {}s) {}{}",
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            bound.as_secs(),
            outcome.detail,
            if in_time { "" } else { " [too slow]" }
        );
        if !ok {
            failed.push(n);
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
