//! Shared generators, worked-example checks and property bodies.
//!
//! Each check returns `Err(reason)` on failure so the same code backs the
//! per-case tests, the property suites and the acceptance report.

#![allow(dead_code)]

pub mod examples;
pub mod props;

use std::collections::BTreeSet;

use proptest::prelude::any;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use eldiff::diff::prepare;
use eldiff::{Abox, Assertion, Axiom, Concept, DiffOptions, Direction, Mode, ModeReport, Signature, SubsumptionIndex, Terminology, WitnessReport};

pub const CONCEPTS: [&str; 6] = ["A", "B", "C", "D", "E", "F"];
pub const ROLES: [&str; 3] = ["r", "s", "t"];

/// Shape of random terminologies.
#[derive(Clone, Copy, Debug)]
pub struct GenCfg {
    pub acyclic: bool,
    pub ranges: bool,
    pub domains: bool,
    pub role_incl: bool,
    pub max_axioms: usize,
}

impl GenCfg {
    pub const ELHR_ACYCLIC: GenCfg = GenCfg { acyclic: true, ranges: true, domains: true, role_incl: true, max_axioms: 12 };
    pub const ELHR: GenCfg = GenCfg { acyclic: false, ranges: true, domains: true, role_incl: true, max_axioms: 12 };
    pub const NO_RANGES: GenCfg = GenCfg { acyclic: false, ranges: false, domains: true, role_incl: true, max_axioms: 12 };
    pub const EL: GenCfg = GenCfg { acyclic: false, ranges: false, domains: false, role_incl: false, max_axioms: 10 };
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_rhs(rng: &mut ChaCha8Rng, owner: Option<usize>, acyclic: bool) -> Concept {
    let n = CONCEPTS.len();
    let width = rng.gen_range(1..=2);
    let parts: Vec<Concept> = (0..width)
        .map(|_| {
            let target = match owner {
                Some(i) if acyclic => (i + 1 < n).then(|| rng.gen_range(i + 1..n)),
                _ => Some(rng.gen_range(0..n)),
            };
            let role = ROLES[rng.gen_range(0..ROLES.len())];
            let exists = rng.gen_bool(0.45);
            match target {
                Some(t) if !exists => Concept::atom(CONCEPTS[t]),
                _ => {
                    let filler = match target {
                        Some(t) if rng.gen_bool(0.85) => Concept::atom(CONCEPTS[t]),
                        _ => Concept::Top,
                    };
                    Concept::exists(role, filler)
                }
            }
        })
        .collect();
    Concept::conj(parts)
}

fn base_axioms(rng: &mut ChaCha8Rng, cfg: GenCfg) -> Vec<Axiom> {
    let mut axioms = Vec::new();
    for (i, a) in CONCEPTS.iter().enumerate() {
        if rng.gen_bool(0.7) {
            let rhs = random_rhs(rng, Some(i), cfg.acyclic);
            axioms.push(if rng.gen_bool(0.4) { Axiom::EqAtom((*a).into(), rhs) } else { Axiom::SubAtom((*a).into(), rhs) });
        }
    }
    for r in ROLES {
        if cfg.ranges && rng.gen_bool(0.3) {
            axioms.push(Axiom::RangeRestr(r.into(), random_rhs(rng, None, cfg.acyclic)));
        }
        if cfg.domains && rng.gen_bool(0.25) {
            axioms.push(Axiom::DomainRestr(r.into(), random_rhs(rng, None, cfg.acyclic)));
        }
    }
    if cfg.role_incl {
        for (i, r) in ROLES.iter().enumerate() {
            for s in &ROLES[i + 1..] {
                if rng.gen_bool(0.2) {
                    axioms.push(Axiom::RoleIncl((*r).into(), (*s).into()));
                }
            }
        }
    }
    axioms.shuffle(rng);
    axioms
}

/// A random terminology over the fixed name pools.
pub fn random_terminology(seed: u64, cfg: GenCfg) -> Terminology {
    let mut rng = rng(seed);
    let mut axioms = base_axioms(&mut rng, cfg);
    axioms.truncate(cfg.max_axioms);
    Terminology::new(axioms).expect("one definition per name")
}

/// Two terminologies drawn as overlapping subsets of one axiom pool.
pub fn random_pair(seed: u64, cfg: GenCfg) -> (Terminology, Terminology) {
    let mut rng = rng(seed);
    let pool = base_axioms(&mut rng, cfg);
    // A few extra definitions so the two sides can disagree on a name.
    let extra = base_axioms(&mut rng, cfg);
    let pick = |rng: &mut ChaCha8Rng| {
        let mut out: Vec<Axiom> = Vec::new();
        let mut defined = BTreeSet::new();
        let alt = rng.gen_bool(0.5);
        let (first, second) = if alt { (&extra, &pool) } else { (&pool, &extra) };
        let chosen: Vec<&Axiom> = first
            .iter()
            .map(|ax| (ax, 0.75))
            .chain(second.iter().map(|ax| (ax, 0.15)))
            .filter(|(_, p)| rng.gen_bool(*p))
            .map(|(ax, _)| ax)
            .collect();
        for ax in chosen {
            if let Some(a) = ax.defined_name() {
                if !defined.insert(a.clone()) {
                    continue;
                }
            }
            out.push(ax.clone());
        }
        out.truncate(cfg.max_axioms);
        Terminology::new(out).expect("one definition per name")
    };
    let t1 = pick(&mut rng);
    let t2 = pick(&mut rng);
    (t1, t2)
}

/// A random signature over the pools; each name is kept with probability `p`.
pub fn random_signature(seed: u64, p: f64) -> Signature {
    let mut rng = rng(seed ^ 0x5151);
    let concepts: Vec<&str> = CONCEPTS.iter().copied().filter(|_| rng.gen_bool(p)).collect();
    let roles: Vec<&str> = ROLES.iter().copied().filter(|_| rng.gen_bool(p)).collect();
    Signature::new(concepts, roles).expect("disjoint pools")
}

/// A random non-empty ABox over the pools with individuals `a0..a{n-1}`.
pub fn random_abox(seed: u64, n: usize) -> Abox {
    let mut rng = rng(seed ^ 0xABB0);
    let ind = |i: usize| format!("a{i}");
    let mut out = vec![Assertion::concept(CONCEPTS[rng.gen_range(0..CONCEPTS.len())], ind(0))];
    for i in 0..n {
        for c in CONCEPTS {
            if rng.gen_bool(0.15) {
                out.push(Assertion::concept(c, ind(i)));
            }
        }
        for j in 0..n {
            for r in ROLES {
                if rng.gen_bool(0.08) {
                    out.push(Assertion::role(r, ind(i), ind(j)));
                }
            }
        }
    }
    Abox::new(out).expect("non-empty")
}

pub fn opts(examples: bool) -> DiffOptions {
    DiffOptions { examples, max_example_size: 10_000, ..DiffOptions::default() }
}

pub fn mode_report(r: &WitnessReport, dir: Direction, mode: Mode) -> Result<&ModeReport, String> {
    r.get(dir, mode).ok_or_else(|| format!("missing report for {} {}", dir.label(), mode.label()))
}

pub fn prepared(t: &Terminology) -> SubsumptionIndex {
    prepare(t)
}

pub fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Runs `check` on `cases` seeds drawn from a fixed-seed generator.
pub fn check_cases(cases: u32, check: impl Fn(u64) -> Result<(), String>) -> Result<(), String> {
    let config = Config { cases, failure_persistence: None, max_shrink_iters: 32, ..Config::default() };
    let mut runner = TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha));
    runner.run(&any::<u64>(), |seed| check(seed).map_err(|e| TestCaseError::fail(format!("seed {seed}: {e}")))).map_err(|e| e.to_string())
}
