//! Seeded generators of small random models for property suites.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::bcn::{freeze_variables, BooleanControlNetwork};
use crate::bits::{BitSet, StateSet};
use crate::bn::{BooleanMode, BooleanNetwork};
use crate::boolp::{BooleanPSystem, Quasimode, Rule};
use crate::cofase::CoFaSeInstance;
use crate::formula::{Formula, VarTable};
use crate::translate::{Reaction, ReactionSystem};

pub fn random_formula<R: Rng>(rng: &mut R, nvars: usize, depth: u32) -> Formula {
    if depth == 0 || nvars == 0 || rng.gen_bool(0.3) {
        if nvars == 0 || rng.gen_bool(0.1) {
            return Formula::Const(rng.gen());
        }
        return Formula::var(rng.gen_range(0..nvars));
    }
    match rng.gen_range(0..3) {
        0 => Formula::not(random_formula(rng, nvars, depth - 1)),
        k => {
            let parts = (0..rng.gen_range(2..=3))
                .map(|_| random_formula(rng, nvars, depth - 1))
                .collect();
            if k == 1 {
                Formula::and(parts)
            } else {
                Formula::or(parts)
            }
        }
    }
}

pub fn random_subset<R: Rng>(rng: &mut R, n: usize, p: f64) -> BitSet {
    (0..n).filter(|_| rng.gen_bool(p)).collect()
}

fn names(prefix: &str, n: usize) -> VarTable {
    VarTable::from_names((0..n).map(|i| format!("{prefix}{i}")))
        .expect("generated names are distinct")
}

/// A network over `x0, x1, ...` with random updates.
pub fn random_bn<R: Rng>(rng: &mut R, n: usize) -> BooleanNetwork {
    let updates = (0..n).map(|_| random_formula(rng, n, 3)).collect();
    BooleanNetwork::new(names("x", n), updates).expect("formulas over the table")
}

/// `syn`, `asyn`, or a random non-empty family of subsets of the variables.
pub fn random_mode<R: Rng>(rng: &mut R, table: &VarTable) -> BooleanMode {
    match rng.gen_range(0..3) {
        0 => BooleanMode::synchronous(table),
        1 => BooleanMode::asynchronous(table),
        _ => {
            let k = rng.gen_range(1..=3);
            BooleanMode::new((0..k).map(|_| random_subset(rng, table.len(), 0.5)))
        }
    }
}

/// A system over `a0, a1, ...` with rules `r0, r1, ...`.
pub fn random_system<R: Rng>(rng: &mut R, nsymbols: usize, nrules: usize) -> BooleanPSystem {
    let rules = (0..nrules)
        .map(|i| {
            Rule::new(
                format!("r{i}"),
                random_subset(rng, nsymbols, 0.4),
                random_subset(rng, nsymbols, 0.4),
                random_formula(rng, nsymbols, 2),
            )
        })
        .collect();
    BooleanPSystem::new(names("a", nsymbols), rules).expect("rules over the table")
}

/// An explicit family of `count` random rule sets of `system`.
pub fn random_explicit_quasimode<R: Rng>(
    rng: &mut R,
    system: &BooleanPSystem,
    count: usize,
) -> Quasimode {
    let ids = system.rule_ids();
    Quasimode::explicit(
        (0..count).map(|_| ids.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect()),
    )
}

/// A random one of the named generators or an explicit family.
pub fn random_quasimode<R: Rng>(rng: &mut R, system: &BooleanPSystem) -> Quasimode {
    match rng.gen_range(0..4) {
        0 => Quasimode::MaxPar,
        1 => Quasimode::Seq,
        2 if system.rules().len() <= 10 => Quasimode::Async,
        _ => {
            let k = rng.gen_range(1..=3);
            random_explicit_quasimode(rng, system, k)
        }
    }
}

/// A random network with freeze controls on a non-empty random subset of
/// its variables.
pub fn random_freeze_bcn<R: Rng>(rng: &mut R, n: usize) -> BooleanControlNetwork {
    let net = random_bn(rng, n);
    let mut vars: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
    if vars.is_empty() && n > 0 {
        vars.push(rng.gen_range(0..n));
    }
    freeze_variables(&net, &vars).expect("variables of the network")
}

/// A reaction system over `s0, s1, ...` with non-empty reactants and products
/// and inhibitors disjoint from reactants.
pub fn random_rs<R: Rng>(rng: &mut R, nspecies: usize, nreactions: usize) -> ReactionSystem {
    let reactions = (0..nreactions)
        .map(|i| {
            let mut reactants = random_subset(rng, nspecies, 0.35);
            if reactants.is_empty() {
                reactants.insert(rng.gen_range(0..nspecies));
            }
            let inhibitors = random_subset(rng, nspecies, 0.25).difference(&reactants);
            let mut products = random_subset(rng, nspecies, 0.35);
            if products.is_empty() {
                products.insert(rng.gen_range(0..nspecies));
            }
            Reaction {
                id: format!("a{i}"),
                reactants,
                inhibitors,
                products,
            }
        })
        .collect();
    ReactionSystem::new(names("s", nspecies), reactions, false).expect("disjoint by construction")
}

/// A control instance with 1 or 2 start and target states under `syn` or `asyn`.
pub fn random_cofase<R: Rng>(rng: &mut R, n: usize) -> CoFaSeInstance {
    let bcn = random_freeze_bcn(rng, n);
    let mut all: Vec<StateSet> = (0..1u64 << n).map(|c| BitSet::from_code(c, n)).collect();
    all.shuffle(rng);
    let starts = rng.gen_range(1..=2usize).min(all.len());
    let start = all[..starts].to_vec();
    all.shuffle(rng);
    let targets = rng.gen_range(1..=2usize).min(all.len());
    let target = all[..targets].to_vec();
    let mode = if rng.gen_bool(0.5) {
        BooleanMode::synchronous(bcn.x_table())
    } else {
        BooleanMode::asynchronous(bcn.x_table())
    };
    CoFaSeInstance::new(bcn, start, target, mode).expect("states over the network")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generators_are_deterministic_per_seed() {
        let a = random_bn(&mut ChaCha8Rng::seed_from_u64(7), 4);
        let b = random_bn(&mut ChaCha8Rng::seed_from_u64(7), 4);
        assert_eq!(a, b);
        let c = random_cofase(&mut ChaCha8Rng::seed_from_u64(7), 3);
        let d = random_cofase(&mut ChaCha8Rng::seed_from_u64(7), 3);
        assert_eq!(c, d);
    }

    #[test]
    fn generated_models_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let s = random_system(&mut rng, 3, 4);
            let q = random_quasimode(&mut rng, &s);
            q.check(&s).unwrap();
            let rs = random_rs(&mut rng, 4, 3);
            assert!(rs
                .reactions()
                .iter()
                .all(|a| a.reactants.is_disjoint(&a.inhibitors) && !a.products.is_empty()));
            let b = random_freeze_bcn(&mut rng, 3);
            assert!(!b.u_table().is_empty());
        }
    }
}
