//! Abiding control sequences never release a controlled variable.

use std::collections::BTreeSet;

use boolps::bcn::freeze_extend;
use boolps::random::random_bn;
use boolps::translate::{pi_u_acs, ControlRegime, ControlledComposite};
use boolps::{BitSet, BooleanMode, Limits, Semantics, VarTable};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn controlled(u: &VarTable, w: &BitSet) -> BTreeSet<String> {
    w.iter()
        .map(|j| {
            let name = u.name(j);
            name[..name.len() - 1].to_string()
        })
        .collect()
}

#[test]
fn acs_master_is_monotone_on_every_configuration() {
    let limits = Limits::default();
    for vars in [1, 2] {
        let names: Vec<String> = (0..vars)
            .flat_map(|i| [format!("u_x{i}0"), format!("u_x{i}1")])
            .collect();
        let u = VarTable::from_names(names).unwrap();
        let (system, q) = pi_u_acs(&u).unwrap();
        let view = system.derive(&q, Semantics::Filtered, &limits).unwrap();
        for w in u.all_states(&limits).unwrap() {
            let before = controlled(&u, &w);
            for (_, dst) in view.successors(&w).unwrap() {
                let after = controlled(&u, &dst);
                assert!(before.is_subset(&after), "{w:?} -> {dst:?}");
            }
        }
    }
}

#[test]
fn acs_composite_runs_keep_controls() {
    let limits = Limits::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0xac5);
    for _ in 0..3 {
        let net = random_bn(&mut rng, 2);
        let bcn = freeze_extend(&net).unwrap();
        let mode = BooleanMode::asynchronous(net.table());
        let composite = ControlledComposite::build(&bcn, &mode, ControlRegime::Abiding).unwrap();
        let system = composite.system();
        let view = system
            .derive(composite.quasimode(), Semantics::Filtered, &limits)
            .unwrap();
        let u = bcn.u_table();
        for w in system.table().all_states(&limits).unwrap() {
            let (_, mu) = composite.split(&w);
            for (_, dst) in view.successors(&w).unwrap() {
                let (_, next) = composite.split(&dst);
                assert!(controlled(u, &mu).is_subset(&controlled(u, &next)));
            }
        }
    }
}
