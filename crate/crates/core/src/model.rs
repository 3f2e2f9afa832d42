//! Concepts, axioms, terminologies, signatures and ABoxes.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Prefix reserved for names introduced by normalization.
pub const FRESH_PREFIX: &str = "@N";

macro_rules! name_type {
    ($(#[$doc:meta])* $name:ident) => {
        $(#[$doc])*
        #[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(Arc<str>);

        impl $name {
            pub fn new(s: impl AsRef<str>) -> Self {
                $name(Arc::from(s.as_ref()))
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }

            /// True for names in the reserved `@` namespace.
            pub fn is_reserved(&self) -> bool {
                self.0.starts_with('@')
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl From<&str> for $name {
            fn from(s: &str) -> Self {
                $name::new(s)
            }
        }

        impl From<String> for $name {
            fn from(s: String) -> Self {
                $name::new(s)
            }
        }
    };
}

name_type!(
    /// A concept name.
    ConceptName
);
name_type!(
    /// A role name. The universal role is not a role name.
    RoleName
);
name_type!(
    /// An individual name.
    IndividualName
);

/// Concept expressions in canonical form.
///
/// Values should be built through the smart constructors, which flatten and
/// sort conjunctions and drop `⊤` conjuncts. The derived order is the
/// structural total order: variant rank, then names, then children.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Concept {
    Top,
    Atom(ConceptName),
    Ran(RoleName),
    Exists(RoleName, Box<Concept>),
    /// `∃(r1 ⊓ … ⊓ rk).C` with at least two sorted, distinct roles.
    ExistsRoles(Vec<RoleName>, Box<Concept>),
    /// `∃u.C` for the universal role.
    ExistsUniversal(Box<Concept>),
    /// At least two sorted, distinct, non-conjunction children.
    Conj(Vec<Concept>),
}

/// Concept language families.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Family {
    /// Plain EL.
    El,
    /// EL with `ran(r)`.
    Ran,
    /// EL with role conjunctions.
    Inter,
    /// EL with role conjunctions and the universal role.
    InterU,
    /// Mixes `ran(r)` with role conjunctions or the universal role.
    Mixed,
}

impl Concept {
    pub fn atom(name: impl Into<ConceptName>) -> Concept {
        Concept::Atom(name.into())
    }

    pub fn ran(role: impl Into<RoleName>) -> Concept {
        Concept::Ran(role.into())
    }

    pub fn exists(role: impl Into<RoleName>, filler: Concept) -> Concept {
        Concept::Exists(role.into(), Box::new(filler))
    }

    /// `∃(r1 ⊓ … ⊓ rk).C`; collapses to `∃r.C` for a single role.
    ///
    /// # Panics
    /// Panics when `roles` is empty.
    pub fn exists_roles<I, R>(roles: I, filler: Concept) -> Concept
    where
        I: IntoIterator<Item = R>,
        R: Into<RoleName>,
    {
        let mut roles: Vec<RoleName> = roles.into_iter().map(Into::into).collect();
        roles.sort();
        roles.dedup();
        match roles.len() {
            0 => panic!("role conjunction needs at least one role"),
            1 => Concept::Exists(roles.pop().unwrap(), Box::new(filler)),
            _ => Concept::ExistsRoles(roles, Box::new(filler)),
        }
    }

    pub fn exists_universal(filler: Concept) -> Concept {
        Concept::ExistsUniversal(Box::new(filler))
    }

    /// Canonical conjunction of the given concepts.
    pub fn conj<I: IntoIterator<Item = Concept>>(items: I) -> Concept {
        let mut out = Vec::new();
        for c in items {
            match c {
                Concept::Top => {}
                Concept::Conj(children) => out.extend(children),
                other => out.push(other),
            }
        }
        out.sort();
        out.dedup();
        match out.len() {
            0 => Concept::Top,
            1 => out.pop().unwrap(),
            _ => Concept::Conj(out),
        }
    }

    /// Conjuncts of this concept; `⊤` has none.
    pub fn conjuncts(&self) -> &[Concept] {
        match self {
            Concept::Top => &[],
            Concept::Conj(children) => children,
            other => std::slice::from_ref(other),
        }
    }

    /// Rebuilds the concept bottom-up through the smart constructors.
    pub fn canonicalize(&self) -> Concept {
        match self {
            Concept::Top | Concept::Atom(_) | Concept::Ran(_) => self.clone(),
            Concept::Exists(r, c) => Concept::exists(r.clone(), c.canonicalize()),
            Concept::ExistsRoles(rs, c) => Concept::exists_roles(rs.iter().cloned(), c.canonicalize()),
            Concept::ExistsUniversal(c) => Concept::exists_universal(c.canonicalize()),
            Concept::Conj(cs) => Concept::conj(cs.iter().map(Concept::canonicalize)),
        }
    }

    /// Number of constructor nodes.
    pub fn size(&self) -> usize {
        match self {
            Concept::Top | Concept::Atom(_) | Concept::Ran(_) => 1,
            Concept::Exists(_, c) | Concept::ExistsRoles(_, c) | Concept::ExistsUniversal(c) => 1 + c.size(),
            Concept::Conj(cs) => 1 + cs.iter().map(Concept::size).sum::<usize>(),
        }
    }

    /// Nesting depth of existential restrictions.
    pub fn role_depth(&self) -> usize {
        match self {
            Concept::Top | Concept::Atom(_) | Concept::Ran(_) => 0,
            Concept::Exists(_, c) | Concept::ExistsRoles(_, c) | Concept::ExistsUniversal(c) => 1 + c.role_depth(),
            Concept::Conj(cs) => cs.iter().map(Concept::role_depth).max().unwrap_or(0),
        }
    }

    pub fn family(&self) -> Family {
        let (mut ran, mut inter, mut univ) = (false, false, false);
        self.visit(&mut |c| match c {
            Concept::Ran(_) => ran = true,
            Concept::ExistsRoles(..) => inter = true,
            Concept::ExistsUniversal(_) => univ = true,
            _ => {}
        });
        match (ran, inter, univ) {
            (false, false, false) => Family::El,
            (true, false, false) => Family::Ran,
            (false, true, false) => Family::Inter,
            (false, _, true) => Family::InterU,
            _ => Family::Mixed,
        }
    }

    pub fn is_el(&self) -> bool {
        self.family() == Family::El
    }

    /// True when the concept belongs to C^ran (EL plus `ran`).
    pub fn is_ran_family(&self) -> bool {
        matches!(self.family(), Family::El | Family::Ran)
    }

    /// True when the concept belongs to C^{⊓,u}.
    pub fn is_inter_u_family(&self) -> bool {
        matches!(self.family(), Family::El | Family::Inter | Family::InterU)
    }

    /// Pre-order traversal.
    pub fn visit<F: FnMut(&Concept)>(&self, f: &mut F) {
        f(self);
        match self {
            Concept::Exists(_, c) | Concept::ExistsRoles(_, c) | Concept::ExistsUniversal(c) => c.visit(f),
            Concept::Conj(cs) => cs.iter().for_each(|c| c.visit(f)),
            _ => {}
        }
    }

    /// All subconcepts including the concept itself.
    pub fn subconcepts(&self) -> BTreeSet<Concept> {
        let mut out = BTreeSet::new();
        self.visit(&mut |c| {
            out.insert(c.clone());
        });
        out
    }
}

impl fmt::Display for Concept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::syntax::render_concept(self))
    }
}

/// Terminology axioms.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Axiom {
    /// `A ⊑ C`
    SubAtom(ConceptName, Concept),
    /// `A ≡ C`
    EqAtom(ConceptName, Concept),
    /// `ran(r) ⊑ C`
    RangeRestr(RoleName, Concept),
    /// `∃r.⊤ ⊑ C`
    DomainRestr(RoleName, Concept),
    /// `r ⊑ s`
    RoleIncl(RoleName, RoleName),
}

impl Axiom {
    pub fn rhs(&self) -> Option<&Concept> {
        match self {
            Axiom::SubAtom(_, c) | Axiom::EqAtom(_, c) | Axiom::RangeRestr(_, c) | Axiom::DomainRestr(_, c) => Some(c),
            Axiom::RoleIncl(..) => None,
        }
    }

    /// Defined name for `SubAtom`/`EqAtom`.
    pub fn defined_name(&self) -> Option<&ConceptName> {
        match self {
            Axiom::SubAtom(a, _) | Axiom::EqAtom(a, _) => Some(a),
            _ => None,
        }
    }

    fn validate(&self) -> Result<()> {
        if let Some(rhs) = self.rhs() {
            if !rhs.is_el() {
                return Err(Error::InvalidAxiom(format!("right-hand side {rhs} is not an EL concept")));
            }
            if *rhs == Concept::Top {
                return Err(Error::InvalidAxiom("right-hand side is top".into()));
            }
            if *rhs != rhs.canonicalize() {
                return Err(Error::InvalidAxiom(format!("right-hand side {rhs} is not in canonical form")));
            }
        }
        Ok(())
    }
}

/// A set of axioms in which every concept name is defined at most once.
///
/// Axioms are kept sorted and deduplicated.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Terminology {
    axioms: Vec<Axiom>,
    definition_of: BTreeMap<ConceptName, usize>,
}

impl Terminology {
    pub fn new<I: IntoIterator<Item = Axiom>>(axioms: I) -> Result<Terminology> {
        let set: BTreeSet<Axiom> = axioms.into_iter().collect();
        let axioms: Vec<Axiom> = set.into_iter().collect();
        let mut definition_of = BTreeMap::new();
        for (i, ax) in axioms.iter().enumerate() {
            ax.validate()?;
            if let Some(a) = ax.defined_name() {
                if definition_of.insert(a.clone(), i).is_some() {
                    return Err(Error::DuplicateDefinition(a.clone()));
                }
            }
        }
        Ok(Terminology { axioms, definition_of })
    }

    pub fn empty() -> Terminology {
        Terminology::default()
    }

    pub fn axioms(&self) -> &[Axiom] {
        &self.axioms
    }

    pub fn len(&self) -> usize {
        self.axioms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.axioms.is_empty()
    }

    /// The `SubAtom`/`EqAtom` axiom with `a` on the left.
    pub fn definition(&self, a: &ConceptName) -> Option<&Axiom> {
        self.definition_of.get(a).map(|&i| &self.axioms[i])
    }

    pub fn defined_names(&self) -> impl Iterator<Item = &ConceptName> {
        self.definition_of.keys()
    }

    /// True when `a` has no `≡` definition.
    pub fn is_pseudo_primitive(&self, a: &ConceptName) -> bool {
        !matches!(self.definition(a), Some(Axiom::EqAtom(..)))
    }

    /// The right-hand side of `a ≡ C`, if any.
    pub fn equation(&self, a: &ConceptName) -> Option<&Concept> {
        match self.definition(a) {
            Some(Axiom::EqAtom(_, c)) => Some(c),
            _ => None,
        }
    }

    /// True when `a ≡ B1 ⊓ … ⊓ Bn` with concept names `Bi`.
    pub fn is_conjunctive(&self, a: &ConceptName) -> bool {
        self.equation(a)
            .is_some_and(|c| c.conjuncts().iter().all(|x| matches!(x, Concept::Atom(_))))
    }

    /// Union with another terminology; fails on clashing definitions.
    pub fn union(&self, other: &Terminology) -> Result<Terminology> {
        Terminology::new(self.axioms.iter().chain(other.axioms.iter()).cloned())
    }

    pub fn has_range_restrictions(&self) -> bool {
        self.axioms.iter().any(|a| matches!(a, Axiom::RangeRestr(..)))
    }

    /// True when the terminology uses no role inclusion, domain or range axiom.
    pub fn is_el(&self) -> bool {
        self.axioms.iter().all(|a| matches!(a, Axiom::SubAtom(..) | Axiom::EqAtom(..)))
    }
}

/// A pair of disjoint name sets.
#[derive(Clone, PartialEq, Eq, Debug, Default, Hash, PartialOrd, Ord)]
pub struct Signature {
    pub concept_names: BTreeSet<ConceptName>,
    pub role_names: BTreeSet<RoleName>,
}

impl Signature {
    /// Builds a signature, rejecting names used in both spaces.
    pub fn new<C, R>(concepts: C, roles: R) -> Result<Signature>
    where
        C: IntoIterator,
        C::Item: Into<ConceptName>,
        R: IntoIterator,
        R::Item: Into<RoleName>,
    {
        let sig = Signature {
            concept_names: concepts.into_iter().map(Into::into).collect(),
            role_names: roles.into_iter().map(Into::into).collect(),
        };
        if let Some(clash) = sig.concept_names.iter().find(|c| sig.role_names.contains(&RoleName::new(c.as_str()))) {
            return Err(Error::SignatureClash(clash.to_string()));
        }
        Ok(sig)
    }

    pub fn empty() -> Signature {
        Signature::default()
    }

    pub fn has_concept(&self, a: &ConceptName) -> bool {
        self.concept_names.contains(a)
    }

    pub fn has_role(&self, r: &RoleName) -> bool {
        self.role_names.contains(r)
    }

    pub fn is_empty(&self) -> bool {
        self.concept_names.is_empty() && self.role_names.is_empty()
    }

    pub fn union(&self, other: &Signature) -> Signature {
        Signature {
            concept_names: self.concept_names.union(&other.concept_names).cloned().collect(),
            role_names: self.role_names.union(&other.role_names).cloned().collect(),
        }
    }

    pub fn intersection(&self, other: &Signature) -> Signature {
        Signature {
            concept_names: self.concept_names.intersection(&other.concept_names).cloned().collect(),
            role_names: self.role_names.intersection(&other.role_names).cloned().collect(),
        }
    }

    pub fn is_subset(&self, other: &Signature) -> bool {
        self.concept_names.is_subset(&other.concept_names) && self.role_names.is_subset(&other.role_names)
    }

    /// Drops names in the reserved namespace.
    pub fn without_reserved(&self) -> Signature {
        Signature {
            concept_names: self.concept_names.iter().filter(|c| !c.is_reserved()).cloned().collect(),
            role_names: self.role_names.iter().filter(|r| !r.is_reserved()).cloned().collect(),
        }
    }
}

/// Entities with a signature.
pub trait Signed {
    fn add_signature(&self, sig: &mut Signature);

    fn signature(&self) -> Signature {
        let mut sig = Signature::default();
        self.add_signature(&mut sig);
        sig
    }
}

impl Signed for Concept {
    fn add_signature(&self, sig: &mut Signature) {
        self.visit(&mut |c| match c {
            Concept::Atom(a) => {
                sig.concept_names.insert(a.clone());
            }
            Concept::Ran(r) | Concept::Exists(r, _) => {
                sig.role_names.insert(r.clone());
            }
            Concept::ExistsRoles(rs, _) => sig.role_names.extend(rs.iter().cloned()),
            _ => {}
        });
    }
}

impl Signed for Axiom {
    fn add_signature(&self, sig: &mut Signature) {
        match self {
            Axiom::SubAtom(a, c) | Axiom::EqAtom(a, c) => {
                sig.concept_names.insert(a.clone());
                c.add_signature(sig);
            }
            Axiom::RangeRestr(r, c) | Axiom::DomainRestr(r, c) => {
                sig.role_names.insert(r.clone());
                c.add_signature(sig);
            }
            Axiom::RoleIncl(r, s) => {
                sig.role_names.insert(r.clone());
                sig.role_names.insert(s.clone());
            }
        }
    }
}

impl Signed for Terminology {
    fn add_signature(&self, sig: &mut Signature) {
        self.axioms.iter().for_each(|a| a.add_signature(sig));
    }
}

impl Signed for Abox {
    fn add_signature(&self, sig: &mut Signature) {
        for a in &self.assertions {
            match a {
                Assertion::Concept(Some(c), _) => {
                    sig.concept_names.insert(c.clone());
                }
                Assertion::Concept(None, _) => {}
                Assertion::Role(r, _, _) => {
                    sig.role_names.insert(r.clone());
                }
            }
        }
    }
}

/// `signature_of` for any signed entity.
pub fn signature_of<T: Signed + ?Sized>(entity: &T) -> Signature {
    entity.signature()
}

/// ABox assertions. A concept assertion with `None` asserts `⊤`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Assertion {
    Concept(Option<ConceptName>, IndividualName),
    Role(RoleName, IndividualName, IndividualName),
}

impl Assertion {
    pub fn concept(a: impl Into<ConceptName>, ind: impl Into<IndividualName>) -> Assertion {
        Assertion::Concept(Some(a.into()), ind.into())
    }

    pub fn top(ind: impl Into<IndividualName>) -> Assertion {
        Assertion::Concept(None, ind.into())
    }

    pub fn role(r: impl Into<RoleName>, a: impl Into<IndividualName>, b: impl Into<IndividualName>) -> Assertion {
        Assertion::Role(r.into(), a.into(), b.into())
    }
}

/// A non-empty finite set of assertions.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Abox {
    assertions: BTreeSet<Assertion>,
}

impl Abox {
    pub fn new<I: IntoIterator<Item = Assertion>>(assertions: I) -> Result<Abox> {
        let assertions: BTreeSet<Assertion> = assertions.into_iter().collect();
        if assertions.is_empty() {
            return Err(Error::EmptyAbox);
        }
        Ok(Abox { assertions })
    }

    pub fn assertions(&self) -> &BTreeSet<Assertion> {
        &self.assertions
    }

    pub fn contains(&self, a: &Assertion) -> bool {
        self.assertions.contains(a)
    }

    pub fn len(&self) -> usize {
        self.assertions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assertions.is_empty()
    }

    /// Individuals occurring in some assertion.
    pub fn individuals(&self) -> BTreeSet<IndividualName> {
        let mut out = BTreeSet::new();
        for a in &self.assertions {
            match a {
                Assertion::Concept(_, i) => {
                    out.insert(i.clone());
                }
                Assertion::Role(_, x, y) => {
                    out.insert(x.clone());
                    out.insert(y.clone());
                }
            }
        }
        out
    }

    pub fn has_individual(&self, ind: &IndividualName) -> bool {
        self.assertions.iter().any(|a| match a {
            Assertion::Concept(_, i) => i == ind,
            Assertion::Role(_, x, y) => x == ind || y == ind,
        })
    }
}

/// Names occurring on the right of `A ⊑ C` / `A ≡ C`, keyed by `A`.
fn depends_on(t: &Terminology) -> BTreeMap<&ConceptName, BTreeSet<ConceptName>> {
    let mut out = BTreeMap::new();
    for ax in t.axioms() {
        if let (Some(a), Some(c)) = (ax.defined_name(), ax.rhs()) {
            out.insert(a, c.signature().concept_names);
        }
    }
    out
}

/// True when the transitive closure of the definitional dependency relation
/// is irreflexive.
pub fn is_acyclic(t: &Terminology) -> bool {
    definitional_order(t).is_some()
}

/// Defined names ordered so that every name comes after the names its
/// definition uses; `None` for cyclic terminologies.
pub fn definitional_order(t: &Terminology) -> Option<Vec<ConceptName>> {
    let deps = depends_on(t);
    // 0 = unvisited, 1 = on stack, 2 = done
    let mut state: BTreeMap<&ConceptName, u8> = BTreeMap::new();
    let mut order = Vec::new();
    for &root in deps.keys() {
        if state.get(root).copied().unwrap_or(0) != 0 {
            continue;
        }
        let mut stack: Vec<(&ConceptName, Vec<&ConceptName>)> = Vec::new();
        state.insert(root, 1);
        stack.push((root, deps[root].iter().filter_map(|b| deps.get_key_value(b).map(|(k, _)| *k)).collect()));
        while let Some((node, pending)) = stack.last_mut() {
            if let Some(next) = pending.pop() {
                match state.get(next).copied().unwrap_or(0) {
                    0 => {
                        state.insert(next, 1);
                        let children = deps[next].iter().filter_map(|b| deps.get_key_value(b).map(|(k, _)| *k)).collect();
                        stack.push((next, children));
                    }
                    1 => return None,
                    _ => {}
                }
            } else {
                state.insert(node, 2);
                order.push((*node).clone());
                stack.pop();
            }
        }
    }
    Some(order)
}

/// `{B1..Bn}` for `A ≡ B1 ⊓ … ⊓ Bn`, otherwise `{A}`.
pub fn non_conj(t: &Terminology, a: &ConceptName) -> BTreeSet<ConceptName> {
    if let Some(c) = t.equation(a) {
        let names: Option<BTreeSet<ConceptName>> = c
            .conjuncts()
            .iter()
            .map(|x| match x {
                Concept::Atom(b) => Some(b.clone()),
                _ => None,
            })
            .collect();
        if let Some(names) = names {
            return names;
        }
    }
    BTreeSet::from([a.clone()])
}

/// Nesting depth of existential restrictions.
pub fn role_depth(c: &Concept) -> usize {
    c.role_depth()
}
