//! The witness ABox `A_{T,Σ}` and its role-splitting unfolding.

use std::collections::{BTreeMap, BTreeSet};

use crate::diff::pre::PreIndex;
use crate::error::{Error, Result};
use crate::model::{non_conj, Abox, Assertion, Concept, ConceptName, IndividualName, RoleName, Signature, Signed, Terminology};
use crate::reasoner::SubsumptionIndex;

/// Which construction to use.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum AboxVariant {
    /// No incoming edges from `ξ_Σ`; valid when neither side uses ranges, domains or role inclusions.
    El,
    /// Adds the `r(ξ_Σ, ξ_B)` edges filtered by `preRan`.
    Elhr,
}

/// The individual `ξ_Σ`.
pub fn sigma_individual() -> IndividualName {
    IndividualName::new("@Σ")
}

/// The individual `ξ_B`.
pub fn xi_individual(b: &ConceptName) -> IndividualName {
    IndividualName::new(format!("ξ_{b}"))
}

/// Shape of a name's definition in a normalized terminology.
pub(crate) enum DefKind {
    Prim,
    Conj(BTreeSet<ConceptName>),
    Exists(RoleName, ConceptName),
}

pub(crate) fn def_kind(t: &Terminology, a: &ConceptName) -> DefKind {
    match t.equation(a) {
        None => DefKind::Prim,
        Some(Concept::Exists(r, f)) => match &**f {
            Concept::Atom(b) => DefKind::Exists(r.clone(), b.clone()),
            _ => DefKind::Prim,
        },
        Some(_) => DefKind::Conj(non_conj(t, a)),
    }
}

/// Non-conjunctive names of `sig(T) ∪ Σ`, in name order.
pub(crate) fn non_conjunctive_names(t: &Terminology, sigma: &Signature) -> Vec<ConceptName> {
    let mut names: BTreeSet<ConceptName> = t.signature().concept_names;
    names.extend(sigma.concept_names.iter().cloned());
    names.into_iter().filter(|a| !matches!(def_kind(t, a), DefKind::Conj(_))).collect()
}

/// Builds `A_{T,Σ}`; `None` when it would be empty.
pub(crate) fn witness_abox_with(idx: &SubsumptionIndex, pre: &PreIndex, sigma: &Signature, variant: AboxVariant) -> Option<Abox> {
    let t = &idx.source().terminology;
    let xs = sigma_individual();
    let mut out: Vec<Assertion> = Vec::new();
    for a in &sigma.concept_names {
        out.push(Assertion::concept(a.clone(), xs.clone()));
    }
    for r in &sigma.role_names {
        out.push(Assertion::role(r.clone(), xs.clone(), xs.clone()));
    }
    let missing_c = |b: &ConceptName| pre.concepts.iter().enumerate().filter(|&(i, _)| !pre.c(b).contains(i)).map(|(_, a)| a.clone()).collect::<Vec<_>>();
    let roles_outside = |set: &fixedbitset::FixedBitSet| pre.roles.iter().enumerate().filter(|&(i, _)| !set.contains(i)).map(|(_, r)| r.clone()).collect::<Vec<_>>();
    for b in non_conjunctive_names(t, sigma) {
        let xb = xi_individual(&b);
        for a in missing_c(&b) {
            out.push(Assertion::concept(a, xb.clone()));
        }
        if variant == AboxVariant::Elhr {
            for r in roles_outside(pre.ran(&b)) {
                out.push(Assertion::role(r, xs.clone(), xb.clone()));
            }
        }
        match def_kind(t, &b) {
            DefKind::Prim => {
                for s in roles_outside(pre.dom(&b)) {
                    out.push(Assertion::role(s, xb.clone(), xs.clone()));
                }
            }
            DefKind::Exists(r1, b1) => {
                let mut blocked = pre.role(&r1).clone();
                blocked.union_with(pre.dom(&b));
                for s in roles_outside(&blocked) {
                    out.push(Assertion::role(s, xb.clone(), xs.clone()));
                }
                let mut via = pre.role(&r1).clone();
                via.difference_with(pre.dom(&b));
                for b2 in non_conj(t, &b1) {
                    for i in via.ones() {
                        if !pre.ran(&b2).contains(i) {
                            out.push(Assertion::role(pre.roles[i].clone(), xb.clone(), xi_individual(&b2)));
                        }
                    }
                }
            }
            DefKind::Conj(_) => unreachable!("conjunctive names are filtered"),
        }
    }
    Abox::new(out).ok()
}

/// Builds `A_{T,Σ}` for a classified normalized terminology.
pub fn build_witness_abox(idx: &SubsumptionIndex, sigma: &Signature, variant: AboxVariant) -> Result<Abox> {
    let pre = PreIndex::new(idx, sigma);
    witness_abox_with(idx, &pre, sigma, variant).ok_or(Error::EmptyAbox)
}

/// Role-splitting unfolding with explicit names for the copies.
pub(crate) fn unfold_named(abox: &Abox, name: &dyn Fn(&IndividualName, &RoleName) -> IndividualName) -> Result<Abox> {
    let roles: Vec<RoleName> = abox.signature().role_names.into_iter().collect();
    if roles.is_empty() {
        return Err(Error::NoRoles);
    }
    let mut out = Vec::new();
    for x in abox.assertions() {
        match x {
            Assertion::Concept(c, a) => {
                for r in &roles {
                    out.push(Assertion::Concept(c.clone(), name(a, r)));
                }
            }
            Assertion::Role(r, a, b) => {
                for s in &roles {
                    out.push(Assertion::role(r.clone(), name(a, s), name(b, r)));
                }
            }
        }
    }
    Abox::new(out)
}

/// The role-splitting unfolding `A†`, with copies named `a_r`.
pub fn role_splitting_unfold(abox: &Abox) -> Result<Abox> {
    unfold_named(abox, &|a, r| IndividualName::new(format!("{a}_{r}")))
}

/// Collision-free copy names for internal use.
pub(crate) struct SplitNames {
    ids: BTreeMap<(IndividualName, RoleName), IndividualName>,
}

impl SplitNames {
    pub fn new(abox: &Abox) -> SplitNames {
        let roles: Vec<RoleName> = abox.signature().role_names.into_iter().collect();
        let mut ids = BTreeMap::new();
        for a in abox.individuals() {
            for r in &roles {
                let id = IndividualName::new(format!("@u{}", ids.len()));
                ids.insert((a.clone(), r.clone()), id);
            }
        }
        SplitNames { ids }
    }

    pub fn get(&self, a: &IndividualName, r: &RoleName) -> Option<&IndividualName> {
        self.ids.get(&(a.clone(), r.clone()))
    }

    pub fn unfold(&self, abox: &Abox) -> Result<Abox> {
        unfold_named(abox, &|a, r| self.ids[&(a.clone(), r.clone())].clone())
    }
}
