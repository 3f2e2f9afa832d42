//! Σ-restricted pre-sets as bitsets over the signature.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;

use crate::model::{ConceptName, RoleName, Signature};
use crate::reasoner::SubsumptionIndex;

/// `preC`, `preDom`, `preRan` and `preRole` of one terminology.
pub(crate) struct PreIndex {
    pub concepts: Vec<ConceptName>,
    pub roles: Vec<RoleName>,
    pre_c: HashMap<ConceptName, FixedBitSet>,
    pre_dom: HashMap<ConceptName, FixedBitSet>,
    pre_ran: HashMap<ConceptName, FixedBitSet>,
    pre_role: HashMap<RoleName, FixedBitSet>,
    empty_c: FixedBitSet,
    empty_r: FixedBitSet,
}

impl PreIndex {
    pub fn new(idx: &SubsumptionIndex, sigma: &Signature) -> PreIndex {
        let concepts: Vec<ConceptName> = sigma.concept_names.iter().cloned().collect();
        let roles: Vec<RoleName> = sigma.role_names.iter().cloned().collect();
        let (nc, nr) = (concepts.len(), roles.len());
        let mut pre_c: HashMap<ConceptName, FixedBitSet> = HashMap::new();
        for (i, b) in concepts.iter().enumerate() {
            for x in idx.supers(b) {
                pre_c.entry(x).or_insert_with(|| FixedBitSet::with_capacity(nc)).insert(i);
            }
        }
        let mut pre_dom: HashMap<ConceptName, FixedBitSet> = HashMap::new();
        let mut pre_ran: HashMap<ConceptName, FixedBitSet> = HashMap::new();
        let mut pre_role: HashMap<RoleName, FixedBitSet> = HashMap::new();
        let role_pos: HashMap<&RoleName, usize> = roles.iter().enumerate().map(|(i, r)| (r, i)).collect();
        for (r, a) in idx.dom_subs() {
            if let Some(&i) = role_pos.get(&r) {
                pre_dom.entry(a).or_insert_with(|| FixedBitSet::with_capacity(nr)).insert(i);
            }
        }
        for (r, a) in idx.ran_subs() {
            if let Some(&i) = role_pos.get(&r) {
                pre_ran.entry(a).or_insert_with(|| FixedBitSet::with_capacity(nr)).insert(i);
            }
        }
        for (i, s) in roles.iter().enumerate() {
            pre_role.entry(s.clone()).or_insert_with(|| FixedBitSet::with_capacity(nr)).insert(i);
        }
        for (s, r) in idx.role_subs() {
            if let Some(&i) = role_pos.get(&s) {
                pre_role.entry(r).or_insert_with(|| FixedBitSet::with_capacity(nr)).insert(i);
            }
        }
        PreIndex {
            concepts,
            roles,
            pre_c,
            pre_dom,
            pre_ran,
            pre_role,
            empty_c: FixedBitSet::with_capacity(nc),
            empty_r: FixedBitSet::with_capacity(nr),
        }
    }

    pub fn c(&self, a: &ConceptName) -> &FixedBitSet {
        self.pre_c.get(a).unwrap_or(&self.empty_c)
    }

    pub fn dom(&self, a: &ConceptName) -> &FixedBitSet {
        self.pre_dom.get(a).unwrap_or(&self.empty_r)
    }

    pub fn ran(&self, a: &ConceptName) -> &FixedBitSet {
        self.pre_ran.get(a).unwrap_or(&self.empty_r)
    }

    pub fn role(&self, r: &RoleName) -> &FixedBitSet {
        self.pre_role.get(r).unwrap_or(&self.empty_r)
    }

    pub fn n_concepts(&self) -> usize {
        self.concepts.len()
    }

    pub fn n_roles(&self) -> usize {
        self.roles.len()
    }
}
