//! Test oracles: noimply covers and brute-force witness enumeration.

use std::collections::{BTreeMap, BTreeSet};

use crate::canonical::{build_canonical_with, concept_to_abox, Saturation};
use crate::model::{Abox, Assertion, Concept, ConceptName, IndividualName, RoleName, Signature};
use crate::reasoner::SubsumptionIndex;

use super::witness_abox::{def_kind, DefKind};
use super::{role_witnesses, Mode, ModeReport};

/// `all^n_Σ`.
fn all_sigma(sigma: &Signature, n: usize) -> Concept {
    let base = sigma.concept_names.iter().cloned().map(Concept::Atom);
    if n == 0 {
        return Concept::conj(base);
    }
    let inner = all_sigma(sigma, n - 1);
    Concept::conj(base.chain(sigma.role_names.iter().map(|s| Concept::exists(s.clone(), inner.clone()))))
}

/// `noimply^n_{T2,Σ}(A)`; `idx2` must come from a normalized EL terminology.
pub fn noimply_cover(idx2: &SubsumptionIndex, sigma: &Signature, a: &ConceptName, n: usize) -> BTreeSet<Concept> {
    let t2 = &idx2.source().terminology;
    let missing = || sigma.concept_names.iter().filter(|b| !idx2.subsumes(b, a)).cloned().map(Concept::Atom).collect::<Vec<_>>();
    match def_kind(t2, a) {
        DefKind::Conj(parts) => parts.iter().flat_map(|p| noimply_cover(idx2, sigma, p, n)).collect(),
        _ if n == 0 => BTreeSet::from([Concept::conj(missing())]),
        DefKind::Prim => {
            let all = all_sigma(sigma, n - 1);
            let mut parts = missing();
            parts.extend(sigma.role_names.iter().map(|s| Concept::exists(s.clone(), all.clone())));
            BTreeSet::from([Concept::conj(parts)])
        }
        DefKind::Exists(r, b) => {
            let all = all_sigma(sigma, n - 1);
            let mut parts = missing();
            parts.extend(sigma.role_names.iter().filter(|s| **s != r).map(|s| Concept::exists(s.clone(), all.clone())));
            if sigma.has_role(&r) {
                parts.extend(noimply_cover(idx2, sigma, &b, n - 1).into_iter().map(|e| Concept::exists(r.clone(), e)));
            }
            BTreeSet::from([Concept::conj(parts)])
        }
    }
}

/// Σ-concepts with role depth at most `depth` and at most `width` conjuncts per level.
pub fn enumerate_concepts(sigma: &Signature, depth: usize, width: usize) -> Vec<Concept> {
    let mut level: Vec<Concept> = Vec::new();
    for d in 0..=depth {
        let mut items: Vec<Concept> = sigma.concept_names.iter().cloned().map(Concept::Atom).collect();
        if d > 0 {
            for r in &sigma.role_names {
                items.extend(level.iter().map(|c| Concept::exists(r.clone(), c.clone())));
            }
        }
        let mut out: BTreeSet<Concept> = BTreeSet::from([Concept::Top]);
        subsets(&items, width, &mut Vec::new(), 0, &mut |parts| {
            out.insert(Concept::conj(parts.iter().map(|&i| items[i].clone())));
        });
        level = out.into_iter().collect();
    }
    level
}

fn subsets(items: &[Concept], width: usize, cur: &mut Vec<usize>, start: usize, f: &mut dyn FnMut(&[usize])) {
    if !cur.is_empty() {
        f(cur);
    }
    if cur.len() == width {
        return;
    }
    for i in start..items.len() {
        cur.push(i);
        subsets(items, width, cur, i + 1, f);
        cur.pop();
    }
}

fn role_sets(roles: &[RoleName], max: usize) -> Vec<Vec<RoleName>> {
    let mut out = Vec::new();
    for mask in 1u32..(1 << roles.len().min(12)) {
        let set: Vec<RoleName> = roles.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, r)| r.clone()).collect();
        if set.len() <= max {
            out.push(set);
        }
    }
    out
}

/// Root labels of `A_C` saturated under `idx`, restricted to `Σ`.
fn entailed_names(idx: &SubsumptionIndex, c: &Concept, sigma: &Signature) -> BTreeSet<ConceptName> {
    let (abox, root) = concept_to_abox(c).expect("enumerated concepts are C^ran");
    let sat = Saturation::run(&idx.rules, &abox);
    let n = sat.individual_node(&root).expect("root individual exists");
    sigma.concept_names.iter().filter(|a| sat.has_label(n, a)).cloned().collect()
}

/// Witnesses for direction `T1 → T2` found by enumerating candidate inclusions.
pub fn brute_force_witnesses(idx1: &SubsumptionIndex, idx2: &SubsumptionIndex, sigma: &Signature, depth_cap: usize, conj_cap: usize) -> BTreeMap<Mode, ModeReport> {
    let concepts = enumerate_concepts(sigma, depth_cap, conj_cap);
    let roles: Vec<RoleName> = sigma.role_names.iter().cloned().collect();
    let mut report: BTreeMap<Mode, ModeReport> = Mode::ALL.iter().map(|&m| (m, ModeReport::default())).collect();
    let role_wtn = role_witnesses(idx1, idx2, sigma, true);
    for r in report.values_mut() {
        r.role_wtn = role_wtn.clone();
    }

    let mut rhs_check = |lhs: &Concept, modes: &[Mode]| {
        let e1 = entailed_names(idx1, lhs, sigma);
        let e2 = entailed_names(idx2, lhs, sigma);
        for a in e1.difference(&e2) {
            for m in modes {
                report.get_mut(m).expect("all modes present").rhs_wtn.insert(a.clone());
            }
        }
    };
    for c in &concepts {
        rhs_check(c, &Mode::ALL);
        for r in &roles {
            rhs_check(&Concept::conj([Concept::ran(r.clone()), c.clone()]), &Mode::ALL);
        }
        for set in role_sets(&roles, 2).into_iter().filter(|s| s.len() > 1) {
            let lhs = Concept::conj(set.into_iter().map(Concept::ran).chain([c.clone()]));
            rhs_check(&lhs, &[Mode::Instance, Mode::Query]);
        }
    }

    let mut queries: Vec<Concept> = concepts.clone();
    for c in concepts.iter().filter(|c| c.role_depth() < depth_cap.max(1)) {
        queries.push(Concept::exists_universal(c.clone()));
        for set in role_sets(&roles, 2).into_iter().filter(|s| s.len() > 1) {
            queries.push(Concept::exists_roles(set, c.clone()));
        }
    }
    let el_count = concepts.len();
    let a = IndividualName::new("a");
    let b = IndividualName::new("b");
    let lhs_check = |abox: Abox, at: &IndividualName| -> (bool, bool) {
        let i1 = build_canonical_with(&idx1.rules, &abox);
        let i2 = build_canonical_with(&idx2.rules, &abox);
        let (x1, x2) = (i1.individual(at).expect("individual"), i2.individual(at).expect("individual"));
        let mut found = (false, false);
        for (k, d) in queries.iter().enumerate() {
            if i1.eval(d).contains(x1) && !i2.eval(d).contains(x2) {
                if k < el_count {
                    found.0 = true;
                }
                found.1 = true;
            }
        }
        found
    };
    let mark = |report: &mut BTreeMap<Mode, ModeReport>, found: (bool, bool), insert: &dyn Fn(&mut ModeReport)| {
        if found.0 {
            insert(report.get_mut(&Mode::Concept).expect("mode"));
            insert(report.get_mut(&Mode::Instance).expect("mode"));
        }
        if found.1 {
            insert(report.get_mut(&Mode::Query).expect("mode"));
        }
    };
    for c in &sigma.concept_names {
        let abox = Abox::new([Assertion::concept(c.clone(), a.clone())]).expect("non-empty");
        let found = lhs_check(abox, &a);
        mark(&mut report, found, &|m| {
            m.lhs_atomic.insert(c.clone());
        });
    }
    for r in &roles {
        let abox = Abox::new([Assertion::role(r.clone(), a.clone(), b.clone())]).expect("non-empty");
        let found = lhs_check(abox.clone(), &a);
        mark(&mut report, found, &|m| {
            m.lhs_dom.insert(r.clone());
        });
        let found = lhs_check(abox, &b);
        mark(&mut report, found, &|m| {
            m.lhs_ran.insert(r.clone());
        });
    }
    report
}
