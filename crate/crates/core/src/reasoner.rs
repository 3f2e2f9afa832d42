//! Classification of normalized terminologies and subsumption checking.
//!
//! The classifier saturates one context per concept name, per domain
//! expression `∃r.⊤` and per successor kind `ran(r) ⊓ B`. It recomputes a
//! whole context whenever something it depends on changed. Subsumption
//! between complex concepts goes through the canonical model instead, so the
//! two routes can check each other.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::sync::Arc;

use fixedbitset::FixedBitSet;

use crate::canonical;
use crate::error::{Error, Result};
use crate::model::{Concept, ConceptName, RoleName, Signature};
use crate::normalize::NormalizedTerminology;
use crate::rules::Rules;

/// Classification result of a normalized terminology.
#[derive(Debug)]
pub struct SubsumptionIndex {
    source: NormalizedTerminology,
    pub(crate) rules: Arc<Rules>,
    /// `atom[A]` holds every `B` with `T ⊨ A ⊑ B`.
    atom: Vec<FixedBitSet>,
    /// `dom[r]` holds every `A` with `T ⊨ ∃r.⊤ ⊑ A`.
    dom: Vec<FixedBitSet>,
    /// `ran[r]` holds every `A` with `T ⊨ ran(r) ⊑ A`.
    ran: Vec<FixedBitSet>,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
enum Kind {
    Name(u32),
    Dom(u32),
    Aux(u32, Option<u32>),
}

struct Context {
    kind: Kind,
    labels: FixedBitSet,
    succ: Vec<(u32, usize)>,
    preds: Vec<usize>,
}

struct Classifier<'a> {
    rules: &'a Rules,
    ctxs: Vec<Context>,
    by_kind: HashMap<Kind, usize>,
    queue: VecDeque<usize>,
    queued: Vec<bool>,
}

impl<'a> Classifier<'a> {
    fn context(&mut self, kind: Kind) -> usize {
        if let Some(&i) = self.by_kind.get(&kind) {
            return i;
        }
        let i = self.ctxs.len();
        self.ctxs.push(Context { kind, labels: FixedBitSet::with_capacity(self.rules.nc()), succ: Vec::new(), preds: Vec::new() });
        self.by_kind.insert(kind, i);
        self.queued.push(false);
        self.enqueue(i);
        i
    }

    fn enqueue(&mut self, i: usize) {
        if !self.queued[i] {
            self.queued[i] = true;
            self.queue.push_back(i);
        }
    }

    fn add_edge(&mut self, from: usize, role: u32, filler: Option<u32>) -> bool {
        let to = self.context(Kind::Aux(role, filler));
        if self.ctxs[from].succ.contains(&(role, to)) {
            return false;
        }
        self.ctxs[from].succ.push((role, to));
        self.ctxs[to].preds.push(from);
        true
    }

    /// Recomputes one context until its labels and edges are stable.
    fn refresh(&mut self, c: usize) {
        let rules = self.rules;
        let nc = rules.nc();
        let mut labels = self.ctxs[c].labels.clone();
        let kind = self.ctxs[c].kind;
        let mut label_changed = false;
        loop {
            let before_labels = labels.count_ones(..);
            let before_edges = self.ctxs[c].succ.len();
            let mut new = labels.clone();
            match kind {
                Kind::Name(a) => new.insert(a as usize),
                Kind::Aux(_, Some(b)) => new.insert(b as usize),
                _ => {}
            }
            if let Kind::Aux(r, _) = kind {
                for &s in &rules.role_up[r as usize] {
                    rules.ran_supers[s as usize].iter().for_each(|&x| new.insert(x as usize));
                }
            }
            for &(t, d) in &self.ctxs[c].succ {
                for &s in &rules.role_up[t as usize] {
                    rules.dom_supers[s as usize].iter().for_each(|&x| new.insert(x as usize));
                    for &def in &rules.exist_by_role[s as usize] {
                        let (x, _, f) = rules.exist_defs[def as usize];
                        if f.is_none_or(|b| self.ctxs[d].labels.contains(b as usize)) {
                            new.insert(x as usize);
                        }
                    }
                }
            }
            // Close under told supers and conjunctive definitions.
            let mut todo: Vec<usize> = new.ones().collect();
            while let Some(a) = todo.pop() {
                for &b in &rules.told_supers[a] {
                    if !new.put(b as usize) {
                        todo.push(b as usize);
                    }
                }
                for &def in &rules.conj_by_member[a] {
                    let (x, ref members) = rules.conj_defs[def as usize];
                    if !new.contains(x as usize) && members.iter().all(|&m| new.contains(m as usize)) {
                        new.insert(x as usize);
                        todo.push(x as usize);
                    }
                }
            }
            debug_assert_eq!(new.len(), nc);
            labels = new;
            self.ctxs[c].labels = labels.clone();
            // Edges from labels, domains and ranges.
            let mut wanted: Vec<(u32, Option<u32>)> = Vec::new();
            for a in labels.ones() {
                wanted.extend(rules.told_exists[a].iter().copied());
            }
            match kind {
                Kind::Dom(r) => wanted.push((r, None)),
                Kind::Aux(r, _) => {
                    for &s in &rules.role_up[r as usize] {
                        wanted.extend(rules.ran_exists[s as usize].iter().copied());
                    }
                }
                Kind::Name(_) => {}
            }
            let roles: Vec<u32> = self.ctxs[c].succ.iter().map(|&(t, _)| t).collect();
            for t in roles {
                for &s in &rules.role_up[t as usize] {
                    wanted.extend(rules.dom_exists[s as usize].iter().copied());
                }
            }
            for (role, f) in wanted {
                self.add_edge(c, role, f);
            }
            let grew = labels.count_ones(..) != before_labels;
            label_changed |= grew;
            if !grew && self.ctxs[c].succ.len() == before_edges {
                break;
            }
        }
        if label_changed {
            let preds = self.ctxs[c].preds.clone();
            for p in preds {
                self.enqueue(p);
            }
        }
    }

    fn run(&mut self) {
        while let Some(c) = self.queue.pop_front() {
            self.queued[c] = false;
            self.refresh(c);
        }
    }
}

/// Classifies a normalized terminology.
pub fn classify(t: &NormalizedTerminology) -> SubsumptionIndex {
    let rules = Rules::compile(t);
    let (nc, nr) = (rules.nc(), rules.nr());
    let mut cl = Classifier { rules: &rules, ctxs: Vec::new(), by_kind: HashMap::new(), queue: VecDeque::new(), queued: Vec::new() };
    for a in 0..nc as u32 {
        cl.context(Kind::Name(a));
    }
    for r in 0..nr as u32 {
        cl.context(Kind::Dom(r));
        cl.context(Kind::Aux(r, None));
    }
    cl.run();
    let get = |k: Kind| cl.ctxs[cl.by_kind[&k]].labels.clone();
    let atom = (0..nc as u32).map(|a| get(Kind::Name(a))).collect();
    let dom = (0..nr as u32).map(|r| get(Kind::Dom(r))).collect();
    let ran = (0..nr as u32).map(|r| get(Kind::Aux(r, None))).collect();
    drop(cl);
    SubsumptionIndex { source: t.clone(), rules: Arc::new(rules), atom, dom, ran }
}

/// Concept names of `Σ` below `A`, and the `Σ` roles whose domain or range
/// is below `A`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PreSets {
    pub pre_c: BTreeSet<ConceptName>,
    pub pre_dom: BTreeSet<RoleName>,
    pub pre_ran: BTreeSet<RoleName>,
}

impl SubsumptionIndex {
    pub fn source(&self) -> &NormalizedTerminology {
        &self.source
    }

    fn cid(&self, a: &ConceptName) -> Option<usize> {
        self.rules.concept_id.get(a).map(|&i| i as usize)
    }

    fn rid(&self, r: &RoleName) -> Option<usize> {
        self.rules.role_id.get(r).map(|&i| i as usize)
    }

    /// `T ⊨ sub ⊑ sup` for concept names.
    pub fn subsumes(&self, sub: &ConceptName, sup: &ConceptName) -> bool {
        match (self.cid(sub), self.cid(sup)) {
            (Some(a), Some(b)) => self.atom[a].contains(b),
            _ => sub == sup,
        }
    }

    /// `T ⊨ ∃r.⊤ ⊑ A`.
    pub fn dom_entails(&self, r: &RoleName, a: &ConceptName) -> bool {
        matches!((self.rid(r), self.cid(a)), (Some(r), Some(a)) if self.dom[r].contains(a))
    }

    /// `T ⊨ ran(r) ⊑ A`.
    pub fn ran_entails(&self, r: &RoleName, a: &ConceptName) -> bool {
        matches!((self.rid(r), self.cid(a)), (Some(r), Some(a)) if self.ran[r].contains(a))
    }

    /// `T ⊨ r ⊑ s`.
    pub fn role_entails(&self, r: &RoleName, s: &RoleName) -> bool {
        match (self.rid(r), self.rid(s)) {
            (Some(a), Some(b)) => self.rules.role_up[a].contains(&(b as u32)),
            _ => r == s,
        }
    }

    /// Names `B` with `T ⊨ A ⊑ B`.
    pub fn supers(&self, a: &ConceptName) -> BTreeSet<ConceptName> {
        match self.cid(a) {
            Some(i) => self.atom[i].ones().map(|b| self.rules.concepts[b].clone()).collect(),
            None => BTreeSet::from([a.clone()]),
        }
    }

    pub fn atom_subs(&self) -> BTreeSet<(ConceptName, ConceptName)> {
        let c = &self.rules.concepts;
        self.atom.iter().enumerate().flat_map(|(a, s)| s.ones().map(move |b| (c[a].clone(), c[b].clone()))).collect()
    }

    pub fn dom_subs(&self) -> BTreeSet<(RoleName, ConceptName)> {
        self.role_concept_pairs(&self.dom)
    }

    pub fn ran_subs(&self) -> BTreeSet<(RoleName, ConceptName)> {
        self.role_concept_pairs(&self.ran)
    }

    fn role_concept_pairs(&self, rel: &[FixedBitSet]) -> BTreeSet<(RoleName, ConceptName)> {
        let (rs, cs) = (&self.rules.roles, &self.rules.concepts);
        rel.iter().enumerate().flat_map(|(r, s)| s.ones().map(move |a| (rs[r].clone(), cs[a].clone()))).collect()
    }

    pub fn role_subs(&self) -> BTreeSet<(RoleName, RoleName)> {
        let rs = &self.rules.roles;
        self.rules
            .role_up
            .iter()
            .enumerate()
            .flat_map(|(r, ups)| ups.iter().map(move |&s| (rs[r].clone(), rs[s as usize].clone())))
            .collect()
    }

    /// `T ⊨ lhs ⊑ rhs` through the canonical model of the lhs ABox.
    pub fn entails(&self, lhs: &Concept, rhs: &Concept) -> Result<bool> {
        if !lhs.is_ran_family() {
            return Err(Error::Family(format!("left-hand side {lhs} must not use role conjunctions or the universal role")));
        }
        if !rhs.is_inter_u_family() {
            return Err(Error::Family(format!("right-hand side {rhs} must not use ran")));
        }
        let (abox, root) = canonical::concept_to_abox(lhs)?;
        let model = canonical::build_canonical_with(&self.rules, &abox);
        Ok(model.eval_at(rhs, &root))
    }
}

/// Restrictions of the index relations to `Σ`, targeted at `a`.
pub fn pre_sets(idx: &SubsumptionIndex, sigma: &Signature, a: &ConceptName) -> PreSets {
    PreSets {
        pre_c: sigma.concept_names.iter().filter(|b| idx.subsumes(b, a)).cloned().collect(),
        pre_dom: sigma.role_names.iter().filter(|r| idx.dom_entails(r, a)).cloned().collect(),
        pre_ran: sigma.role_names.iter().filter(|r| idx.ran_entails(r, a)).cloned().collect(),
    }
}

/// `{s ∈ Σ | T ⊨ s ⊑ r}`.
pub fn pre_role(idx: &SubsumptionIndex, sigma: &Signature, r: &RoleName) -> BTreeSet<RoleName> {
    sigma.role_names.iter().filter(|s| idx.role_entails(s, r)).cloned().collect()
}

/// `T ⊨ lhs ⊑ rhs` for a C^ran left side and a C^{⊓,u} right side.
pub fn entails_subsumption(t: &NormalizedTerminology, lhs: &Concept, rhs: &Concept) -> Result<bool> {
    if !lhs.is_ran_family() {
        return Err(Error::Family(format!("left-hand side {lhs} must not use role conjunctions or the universal role")));
    }
    if !rhs.is_inter_u_family() {
        return Err(Error::Family(format!("right-hand side {rhs} must not use ran")));
    }
    let rules = Rules::compile(t);
    let (abox, root) = canonical::concept_to_abox(lhs)?;
    let model = canonical::build_canonical_with(&rules, &abox);
    Ok(model.eval_at(rhs, &root))
}

/// `T ⊨ r ⊑ s`.
pub fn entails_role(t: &NormalizedTerminology, r: &RoleName, s: &RoleName) -> bool {
    let rules = Rules::compile(t);
    match (rules.role_id.get(r), rules.role_id.get(s)) {
        (Some(&a), Some(b)) => rules.role_up[a as usize].contains(b),
        _ => r == s,
    }
}
