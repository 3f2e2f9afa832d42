//! The NotWitness dynamic program for acyclic terminologies.

use std::collections::{BTreeSet, HashMap};

use fixedbitset::FixedBitSet;

use crate::diff::pre::PreIndex;
use crate::diff::witness_abox::{def_kind, non_conjunctive_names, DefKind};
use crate::error::{Error, Result};
use crate::model::{definitional_order, non_conj, ConceptName, Signature, Signed};
use crate::reasoner::SubsumptionIndex;

/// An element of `Ξ`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Xi {
    /// Stands for every Σ-concept.
    All,
    Name(ConceptName),
}

/// Which recursion to run.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum NwVariant {
    El,
    Elhr,
}

/// `NotWitness(E)` for every `E ∈ sig(T1) ∪ Σ`.
#[derive(Clone, Debug)]
pub struct NotWitnessTable {
    xi: Vec<Xi>,
    xi_pos: HashMap<ConceptName, usize>,
    entries: HashMap<ConceptName, FixedBitSet>,
}

const ALL: usize = 0;

impl NotWitnessTable {
    /// Runs the recursion; both terminologies must be acyclic, and EL for
    /// [`NwVariant::El`].
    pub fn compute(idx1: &SubsumptionIndex, idx2: &SubsumptionIndex, sigma: &Signature, variant: NwVariant) -> Result<NotWitnessTable> {
        let pre1 = PreIndex::new(idx1, sigma);
        let pre2 = PreIndex::new(idx2, sigma);
        Self::compute_with(idx1, idx2, &pre1, &pre2, sigma, variant)
    }

    pub(crate) fn compute_with(
        idx1: &SubsumptionIndex,
        idx2: &SubsumptionIndex,
        pre1: &PreIndex,
        pre2: &PreIndex,
        sigma: &Signature,
        variant: NwVariant,
    ) -> Result<NotWitnessTable> {
        let (t1, t2) = (&idx1.source().terminology, &idx2.source().terminology);
        if variant == NwVariant::El && !(t1.is_el() && t2.is_el()) {
            return Err(Error::NotEl);
        }
        let order1 = definitional_order(t1).ok_or(Error::Cyclic)?;
        if definitional_order(t2).is_none() {
            return Err(Error::Cyclic);
        }
        let mut xi = vec![Xi::All];
        xi.extend(non_conjunctive_names(t2, sigma).into_iter().map(Xi::Name));
        let xi_pos: HashMap<ConceptName, usize> = xi
            .iter()
            .enumerate()
            .filter_map(|(i, x)| match x {
                Xi::Name(a) => Some((a.clone(), i)),
                Xi::All => None,
            })
            .collect();
        let n = xi.len();
        let kinds2: Vec<DefKind> = xi
            .iter()
            .map(|x| match x {
                Xi::All => DefKind::Prim,
                Xi::Name(a) => def_kind(t2, a),
            })
            .collect();
        let name_of = |i: usize| match &xi[i] {
            Xi::Name(a) => Some(a),
            Xi::All => None,
        };
        let empty_c = FixedBitSet::with_capacity(pre2.n_concepts());
        let empty_r = FixedBitSet::with_capacity(pre2.n_roles());
        let pc2: Vec<&FixedBitSet> = (0..n).map(|i| name_of(i).map_or(&empty_c, |a| pre2.c(a))).collect();
        let pd2: Vec<&FixedBitSet> = (0..n).map(|i| name_of(i).map_or(&empty_r, |a| pre2.dom(a))).collect();
        let pr2: Vec<&FixedBitSet> = (0..n).map(|i| name_of(i).map_or(&empty_r, |a| pre2.ran(a))).collect();

        let filter = |pred: &dyn Fn(usize) -> bool| {
            let mut out = FixedBitSet::with_capacity(n);
            (0..n).filter(|&i| pred(i)).for_each(|i| out.insert(i));
            out
        };
        // Empty pre sets admit all of Ξ, `All` included.
        let aux_pp = |e: &ConceptName| -> FixedBitSet {
            let (c, d, r) = (pre1.c(e), pre1.dom(e), pre1.ran(e));
            match variant {
                NwVariant::El => filter(&|i| c.is_subset(pc2[i])),
                NwVariant::Elhr => filter(&|i| c.is_subset(pc2[i]) && d.is_subset(pd2[i]) && r.is_subset(pr2[i])),
            }
        };

        let mut names: BTreeSet<ConceptName> = sigma.concept_names.clone();
        names.extend(t1.signature().concept_names);
        let defined: BTreeSet<&ConceptName> = order1.iter().collect();
        let mut entries: HashMap<ConceptName, FixedBitSet> = HashMap::new();
        // Undefined names first; they are pseudo-primitive and have no dependencies.
        for e in names.iter().filter(|e| !defined.contains(e)) {
            entries.insert(e.clone(), aux_pp(e));
        }
        for e in &order1 {
            let set = match def_kind(t1, e) {
                DefKind::Prim => aux_pp(e),
                DefKind::Conj(parts) => {
                    let mut out = FixedBitSet::with_capacity(n);
                    for p in &parts {
                        out.union_with(&entries[p]);
                    }
                    out
                }
                DefKind::Exists(r, e1) => {
                    let nw1 = &entries[&e1];
                    let role1 = pre1.role(&r);
                    let trivial = match variant {
                        NwVariant::El => !sigma.has_role(&r),
                        NwVariant::Elhr => role1.is_clear(),
                    };
                    if trivial || nw1.contains(ALL) {
                        aux_pp(e)
                    } else {
                        match variant {
                            NwVariant::El => {
                                let c = pre1.c(e);
                                filter(&|i| match &kinds2[i] {
                                    DefKind::Exists(r2, a1) => {
                                        *r2 == r && c.is_subset(pc2[i]) && non_conj(t2, a1).iter().all(|b| xi_pos.get(b).is_some_and(|&j| nw1.contains(j)))
                                    }
                                    _ => false,
                                })
                            }
                            NwVariant::Elhr => {
                                let parts1 = non_conj(t1, &e1);
                                let candidates = filter(&|i| match &kinds2[i] {
                                    DefKind::Prim => role1.is_subset(pd2[i]),
                                    DefKind::Exists(t, b) => {
                                        let role2 = pre2.role(t);
                                        let mut cover = role2.clone();
                                        cover.union_with(pd2[i]);
                                        if !role1.is_subset(&cover) {
                                            return false;
                                        }
                                        let parts2 = non_conj(t2, b);
                                        role1.intersection(role2).filter(|&s| !pd2[i].contains(s)).all(|s| {
                                            parts2.iter().filter(|b1| !pre2.ran(b1).contains(s)).all(|b1| {
                                                let j = xi_pos.get(b1).copied();
                                                parts1.iter().any(|e2| j.is_some_and(|j| entries[e2].contains(j)) && !pre1.ran(e2).contains(s))
                                            })
                                        })
                                    }
                                    DefKind::Conj(_) => false,
                                });
                                let mut out = aux_pp(e);
                                out.intersect_with(&candidates);
                                out
                            }
                        }
                    }
                }
            };
            entries.insert(e.clone(), set);
        }
        Ok(NotWitnessTable { xi, xi_pos, entries })
    }

    /// `NotWitness(e)`, if `e ∈ sig(T1) ∪ Σ`.
    pub fn get(&self, e: &ConceptName) -> Option<BTreeSet<Xi>> {
        self.entries.get(e).map(|s| s.ones().map(|i| self.xi[i].clone()).collect())
    }

    /// Whether `a ∈ NotWitness(e)`.
    pub fn contains(&self, e: &ConceptName, a: &ConceptName) -> bool {
        match (self.entries.get(e), self.xi_pos.get(a)) {
            (Some(s), Some(&i)) => s.contains(i),
            _ => false,
        }
    }

    /// Names with an entry, in name order.
    pub fn names(&self) -> BTreeSet<ConceptName> {
        self.entries.keys().cloned().collect()
    }

    /// `Ξ` in index order.
    pub fn xi(&self) -> &[Xi] {
        &self.xi
    }
}

/// Instance rhs witnesses via the table: `A ∈ sig(T1) ∩ Σ` with some
/// `B ∈ non_conj_T2(A)` outside `NotWitness(A)`.
pub(crate) fn rhs_from_table(table: &NotWitnessTable, idx1: &SubsumptionIndex, idx2: &SubsumptionIndex, sigma: &Signature) -> BTreeSet<ConceptName> {
    let sig1 = idx1.source().terminology.signature();
    let t2 = &idx2.source().terminology;
    sigma
        .concept_names
        .iter()
        .filter(|a| sig1.has_concept(a))
        .filter(|a| non_conj(t2, a).iter().any(|b| !table.contains(a, b)))
        .cloned()
        .collect()
}
