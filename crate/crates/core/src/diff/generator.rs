//! Seeded random acyclic terminologies.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::{Axiom, Concept, ConceptName, RoleName, Terminology};

/// Builds an acyclic terminology over `D0..D{n-1}`, a primitive pool
/// `P0..` and roles `r0..`.
///
/// `eq_ratio` is the expected ratio of equations to inclusions and
/// `exists_ratio` the expected ratio of existential to atomic conjuncts.
/// `Di` only refers to `Dj` with `j > i` and to primitives.
pub fn generate_random_terminology(num_defined: usize, num_roles: usize, eq_ratio: f64, exists_ratio: f64, max_conj: usize, seed: u64) -> Terminology {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p_eq = eq_ratio / (1.0 + eq_ratio);
    let p_exists = exists_ratio / (1.0 + exists_ratio);
    let num_prim = (num_defined / 2).max(1);
    let defined: Vec<ConceptName> = (0..num_defined).map(|i| ConceptName::new(format!("D{i}"))).collect();
    let prims: Vec<ConceptName> = (0..num_prim).map(|i| ConceptName::new(format!("P{i}"))).collect();
    let roles: Vec<RoleName> = (0..num_roles.max(1)).map(|i| RoleName::new(format!("r{i}"))).collect();
    let mut axioms = Vec::with_capacity(num_defined);
    for i in 0..num_defined {
        let pick_name = |rng: &mut ChaCha8Rng| {
            let later = num_defined - i - 1;
            let k = rng.gen_range(0..later + num_prim);
            if k < later {
                defined[i + 1 + k].clone()
            } else {
                prims[k - later].clone()
            }
        };
        let width = rng.gen_range(1..=max_conj.max(1));
        let mut parts = Vec::with_capacity(width);
        for _ in 0..width {
            let name = pick_name(&mut rng);
            if num_roles > 0 && rng.gen_bool(p_exists) {
                let r = roles[rng.gen_range(0..roles.len())].clone();
                parts.push(Concept::exists(r, Concept::Atom(name)));
            } else {
                parts.push(Concept::Atom(name));
            }
        }
        let rhs = Concept::conj(parts);
        let a = defined[i].clone();
        axioms.push(if rng.gen_bool(p_eq) { Axiom::EqAtom(a, rhs) } else { Axiom::SubAtom(a, rhs) });
    }
    Terminology::new(axioms).expect("each name is defined once")
}
