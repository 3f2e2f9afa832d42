//! Integer-indexed view of a normalized terminology.

use std::collections::{BTreeSet, HashMap};

use crate::model::{Axiom, Concept, ConceptName, RoleName, Signed};
use crate::normalize::NormalizedTerminology;

/// Existential consequence `∃r.B` with `None` for `⊤`.
pub(crate) type Exists = (u32, Option<u32>);

#[derive(Debug, Default)]
pub(crate) struct Rules {
    pub concepts: Vec<ConceptName>,
    pub concept_id: HashMap<ConceptName, u32>,
    pub roles: Vec<RoleName>,
    pub role_id: HashMap<RoleName, u32>,
    /// Concept names on the right of `A ⊑ F` / `A ≡ F`.
    pub told_supers: Vec<Vec<u32>>,
    /// Existentials on the right of `A ⊑ ∃r.B` / `A ≡ ∃r.B`.
    pub told_exists: Vec<Vec<Exists>>,
    pub dom_supers: Vec<Vec<u32>>,
    pub dom_exists: Vec<Vec<Exists>>,
    pub ran_supers: Vec<Vec<u32>>,
    pub ran_exists: Vec<Vec<Exists>>,
    /// Reflexive-transitive super-roles of each role.
    pub role_up: Vec<Vec<u32>>,
    /// `X ≡ B1 ⊓ … ⊓ Bn`.
    pub conj_defs: Vec<(u32, Vec<u32>)>,
    pub conj_by_member: Vec<Vec<u32>>,
    /// `X ≡ ∃r.B`.
    pub exist_defs: Vec<(u32, u32, Option<u32>)>,
    pub exist_by_role: Vec<Vec<u32>>,
    pub exist_by_filler: Vec<Vec<u32>>,
}

impl Rules {
    pub fn compile(t: &NormalizedTerminology) -> Rules {
        let sig = t.terminology.signature();
        let concepts: Vec<ConceptName> = sig.concept_names.into_iter().collect();
        let roles: Vec<RoleName> = sig.role_names.into_iter().collect();
        let concept_id: HashMap<ConceptName, u32> = concepts.iter().enumerate().map(|(i, c)| (c.clone(), i as u32)).collect();
        let role_id: HashMap<RoleName, u32> = roles.iter().enumerate().map(|(i, r)| (r.clone(), i as u32)).collect();
        let (nc, nr) = (concepts.len(), roles.len());
        let mut r = Rules {
            told_supers: vec![Vec::new(); nc],
            told_exists: vec![Vec::new(); nc],
            dom_supers: vec![Vec::new(); nr],
            dom_exists: vec![Vec::new(); nr],
            ran_supers: vec![Vec::new(); nr],
            ran_exists: vec![Vec::new(); nr],
            role_up: vec![Vec::new(); nr],
            conj_by_member: vec![Vec::new(); nc],
            exist_by_role: vec![Vec::new(); nr],
            exist_by_filler: vec![Vec::new(); nc],
            ..Rules::default()
        };
        let cid = |c: &ConceptName| concept_id[c];
        let split = |c: &Concept| -> (Vec<u32>, Vec<Exists>) {
            let mut names = Vec::new();
            let mut ex = Vec::new();
            for x in c.conjuncts() {
                match x {
                    Concept::Atom(a) => names.push(cid(a)),
                    Concept::Exists(role, f) => ex.push((
                        role_id[role],
                        match &**f {
                            Concept::Atom(b) => Some(cid(b)),
                            Concept::Top => None,
                            other => panic!("filler {other:?} is not normalized"),
                        },
                    )),
                    other => panic!("conjunct {other:?} is not normalized"),
                }
            }
            (names, ex)
        };
        let mut told_up: Vec<Vec<u32>> = vec![Vec::new(); nr];
        for ax in t.terminology.axioms() {
            match ax {
                Axiom::SubAtom(a, c) | Axiom::EqAtom(a, c) => {
                    let (names, ex) = split(c);
                    let x = cid(a);
                    if let Axiom::EqAtom(..) = ax {
                        if ex.is_empty() {
                            let d = r.conj_defs.len() as u32;
                            for &m in &names {
                                r.conj_by_member[m as usize].push(d);
                            }
                            r.conj_defs.push((x, names.clone()));
                        } else if let ([], [(role, f)]) = (names.as_slice(), ex.as_slice()) {
                            let d = r.exist_defs.len() as u32;
                            r.exist_by_role[*role as usize].push(d);
                            if let Some(b) = f {
                                r.exist_by_filler[*b as usize].push(d);
                            }
                            r.exist_defs.push((x, *role, *f));
                        } else {
                            panic!("definition of {a} is not normalized");
                        }
                    }
                    r.told_supers[x as usize].extend(names);
                    r.told_exists[x as usize].extend(ex);
                }
                Axiom::DomainRestr(role, c) => {
                    let (names, ex) = split(c);
                    r.dom_supers[role_id[role] as usize].extend(names);
                    r.dom_exists[role_id[role] as usize].extend(ex);
                }
                Axiom::RangeRestr(role, c) => {
                    let (names, ex) = split(c);
                    r.ran_supers[role_id[role] as usize].extend(names);
                    r.ran_exists[role_id[role] as usize].extend(ex);
                }
                Axiom::RoleIncl(a, b) => told_up[role_id[a] as usize].push(role_id[b]),
            }
        }
        for start in 0..nr {
            let mut seen = BTreeSet::from([start as u32]);
            let mut todo = vec![start as u32];
            while let Some(x) = todo.pop() {
                for &y in &told_up[x as usize] {
                    if seen.insert(y) {
                        todo.push(y);
                    }
                }
            }
            r.role_up[start] = seen.into_iter().collect();
        }
        r.concepts = concepts;
        r.concept_id = concept_id;
        r.roles = roles;
        r.role_id = role_id;
        r
    }

    pub fn nc(&self) -> usize {
        self.concepts.len()
    }

    pub fn nr(&self) -> usize {
        self.roles.len()
    }
}
