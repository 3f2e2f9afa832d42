//! Witness sets for the logical difference between two terminologies.
//!
//! A direction `T1 → T2` collects role witnesses, right-hand witnesses
//! (names entailed by more Σ-concepts in `T1` than in `T2`) and left-hand
//! witnesses (names, domains and ranges with more Σ-consequences in `T1`),
//! for concept, instance and query difference.

mod examples;
mod generator;
mod notwitness;
mod oracle;
mod pre;
mod witness_abox;

use std::collections::{BTreeMap, BTreeSet};

use crate::canonical::{build_canonical_with, Saturation};
use crate::error::{Error, Result};
use crate::model::{is_acyclic, non_conj, Abox, Assertion, Concept, ConceptName, IndividualName, RoleName, Signature, Signed, Terminology};
use crate::normalize::normalize;
use crate::par;
use crate::reasoner::{classify, SubsumptionIndex};
use crate::simulation::{EdgeMatch, SigmaIndex, SimGraph, Simulation, WitnessBuilder, DEFAULT_SIZE_CAP};

pub use generator::generate_random_terminology;
pub use notwitness::{NotWitnessTable, NwVariant, Xi};
pub use oracle::{brute_force_witnesses, enumerate_concepts, noimply_cover};
pub use witness_abox::{build_witness_abox, role_splitting_unfold, sigma_individual, xi_individual, AboxVariant};

use pre::PreIndex;
use witness_abox::{witness_abox_with, SplitNames};

/// Difference notion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Mode {
    Concept,
    Instance,
    Query,
}

impl Mode {
    pub const ALL: [Mode; 3] = [Mode::Concept, Mode::Instance, Mode::Query];

    pub fn label(self) -> &'static str {
        match self {
            Mode::Concept => "concept",
            Mode::Instance => "instance",
            Mode::Query => "query",
        }
    }
}

/// Which terminology plays `T1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Direction {
    Forward,
    Backward,
}

impl Direction {
    pub const BOTH: [Direction; 2] = [Direction::Forward, Direction::Backward];

    pub fn label(self) -> &'static str {
        match self {
            Direction::Forward => "1→2",
            Direction::Backward => "2→1",
        }
    }
}

/// How right-hand instance witnesses are decided.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Strategy {
    /// NotWitness on acyclic inputs, otherwise the witness ABox.
    #[default]
    Auto,
    NotWitness,
    Abox,
}

/// A single witness.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum WitnessKey {
    Role(RoleName, RoleName),
    Rhs(ConceptName),
    LhsAtomic(ConceptName),
    LhsDom(RoleName),
    LhsRan(RoleName),
}

/// An example inclusion `lhs ⊑ rhs`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Inclusion {
    pub lhs: Concept,
    pub rhs: Concept,
}

/// Witness sets of one direction and mode.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ModeReport {
    pub role_wtn: BTreeSet<(RoleName, RoleName)>,
    pub rhs_wtn: BTreeSet<ConceptName>,
    pub lhs_atomic: BTreeSet<ConceptName>,
    pub lhs_dom: BTreeSet<RoleName>,
    pub lhs_ran: BTreeSet<RoleName>,
    pub examples: BTreeMap<WitnessKey, Inclusion>,
    /// Witnesses whose example exceeded the size cap.
    pub overflow: BTreeSet<WitnessKey>,
}

impl ModeReport {
    /// Every witness, in key order.
    pub fn keys(&self) -> Vec<WitnessKey> {
        let mut out: Vec<WitnessKey> = self.role_wtn.iter().map(|(r, s)| WitnessKey::Role(r.clone(), s.clone())).collect();
        out.extend(self.rhs_wtn.iter().cloned().map(WitnessKey::Rhs));
        out.extend(self.lhs_atomic.iter().cloned().map(WitnessKey::LhsAtomic));
        out.extend(self.lhs_dom.iter().cloned().map(WitnessKey::LhsDom));
        out.extend(self.lhs_ran.iter().cloned().map(WitnessKey::LhsRan));
        out
    }

    pub fn is_empty(&self) -> bool {
        self.role_wtn.is_empty() && self.rhs_wtn.is_empty() && self.lhs_atomic.is_empty() && self.lhs_dom.is_empty() && self.lhs_ran.is_empty()
    }

    /// Equality of the witness sets, ignoring examples.
    pub fn same_sets(&self, other: &ModeReport) -> bool {
        self.role_wtn == other.role_wtn
            && self.rhs_wtn == other.rhs_wtn
            && self.lhs_atomic == other.lhs_atomic
            && self.lhs_dom == other.lhs_dom
            && self.lhs_ran == other.lhs_ran
    }
}

/// Witness sets per direction and mode.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WitnessReport {
    pub entries: BTreeMap<(Direction, Mode), ModeReport>,
}

impl WitnessReport {
    pub fn get(&self, dir: Direction, mode: Mode) -> Option<&ModeReport> {
        self.entries.get(&(dir, mode))
    }

    /// True when no computed entry has a witness.
    pub fn is_empty(&self) -> bool {
        self.entries.values().all(ModeReport::is_empty)
    }

    /// Equality of all witness sets, ignoring examples.
    pub fn same_sets(&self, other: &WitnessReport) -> bool {
        self.entries.len() == other.entries.len() && self.entries.iter().all(|(k, v)| other.entries.get(k).is_some_and(|w| v.same_sets(w)))
    }
}

/// Options for [`compute_diff`].
#[derive(Clone, Debug)]
pub struct DiffOptions {
    pub modes: Vec<Mode>,
    pub directions: Vec<Direction>,
    pub strategy: Strategy,
    pub examples: bool,
    pub max_example_size: usize,
    /// Restricts role witnesses to roles of `Σ`.
    pub role_witnesses_in_sigma: bool,
    /// Uses the data-parallel paths when compiled in.
    pub parallel: bool,
    /// Worker count for the parallel paths; `None` uses the global pool.
    pub threads: Option<usize>,
    /// Shuffles simulation worklists; results do not depend on it.
    pub order_seed: Option<u64>,
}

impl Default for DiffOptions {
    fn default() -> Self {
        DiffOptions {
            modes: Mode::ALL.to_vec(),
            directions: Direction::BOTH.to_vec(),
            strategy: Strategy::Auto,
            examples: false,
            max_example_size: DEFAULT_SIZE_CAP,
            role_witnesses_in_sigma: true,
            parallel: true,
            threads: None,
            order_seed: None,
        }
    }
}

/// `sig(T1) ∩ sig(T2)` without reserved names.
pub fn default_signature(t1: &Terminology, t2: &Terminology) -> Signature {
    t1.signature().intersection(&t2.signature()).without_reserved()
}

/// Role witnesses `r ⊑ s` with `T1 ⊨ r ⊑ s`, `T2 ⊭ r ⊑ s` and `r ≠ s`.
pub fn role_witnesses(idx1: &SubsumptionIndex, idx2: &SubsumptionIndex, sigma: &Signature, in_sigma: bool) -> BTreeSet<(RoleName, RoleName)> {
    let roles: Vec<RoleName> = if in_sigma {
        sigma.role_names.iter().cloned().collect()
    } else {
        idx1.source().terminology.signature().role_names.into_iter().collect()
    };
    let mut out = BTreeSet::new();
    for r in &roles {
        for s in &roles {
            if r != s && idx1.role_entails(r, s) && !idx2.role_entails(r, s) {
                out.insert((r.clone(), s.clone()));
            }
        }
    }
    out
}

fn both_el(idx1: &SubsumptionIndex, idx2: &SubsumptionIndex) -> bool {
    idx1.source().terminology.is_el() && idx2.source().terminology.is_el()
}

fn abox_variant(idx1: &SubsumptionIndex, idx2: &SubsumptionIndex) -> AboxVariant {
    if both_el(idx1, idx2) {
        AboxVariant::El
    } else {
        AboxVariant::Elhr
    }
}

fn use_notwitness(idx1: &SubsumptionIndex, idx2: &SubsumptionIndex, strategy: Strategy) -> Result<bool> {
    let acyclic = is_acyclic(&idx1.source().terminology) && is_acyclic(&idx2.source().terminology);
    match strategy {
        Strategy::Auto => Ok(acyclic),
        Strategy::NotWitness if acyclic => Ok(true),
        Strategy::NotWitness => Err(Error::Cyclic),
        Strategy::Abox => Ok(false),
    }
}

/// `(T1, A)` saturated, with its ABox.
struct Saturated<'r> {
    sat: Saturation<'r>,
}

impl<'r> Saturated<'r> {
    fn holds(&self, ind: &IndividualName, a: &ConceptName) -> Option<usize> {
        self.sat.individual_node(ind).filter(|&n| self.sat.has_label(n, a))
    }
}

/// Shared state of one direction.
struct DirCtx<'a> {
    idx1: &'a SubsumptionIndex,
    idx2: &'a SubsumptionIndex,
    sigma: &'a Signature,
    parallel: bool,
    pre2: PreIndex,
    abox: Option<Abox>,
}

impl<'a> DirCtx<'a> {
    fn new(idx1: &'a SubsumptionIndex, idx2: &'a SubsumptionIndex, sigma: &'a Signature, parallel: bool) -> Self {
        let pre2 = PreIndex::new(idx2, sigma);
        let abox = witness_abox_with(idx2, &pre2, sigma, abox_variant(idx1, idx2));
        DirCtx { idx1, idx2, sigma, parallel, pre2, abox }
    }

    fn candidates(&self) -> Vec<ConceptName> {
        self.sigma.concept_names.iter().cloned().collect()
    }

    fn saturate(&self, abox: &Abox) -> Saturated<'a> {
        Saturated { sat: Saturation::run(&self.idx1.rules, abox) }
    }

    /// The first `B ∈ non_conj_T2(A)` with `(T1, A_{T2,Σ}) ⊨ A(ξ_B)`.
    fn abox_witness(&self, sat: &Saturated, a: &ConceptName) -> Option<(ConceptName, usize)> {
        let t2 = &self.idx2.source().terminology;
        non_conj(t2, a).into_iter().find_map(|b| sat.holds(&xi_individual(&b), a).map(|n| (b, n)))
    }

    fn rhs_instance(&self, strategy: Strategy, abox_sat: Option<&Saturated>) -> Result<BTreeSet<ConceptName>> {
        if use_notwitness(self.idx1, self.idx2, strategy)? {
            let pre1 = PreIndex::new(self.idx1, self.sigma);
            let table = NotWitnessTable::compute_with(self.idx1, self.idx2, &pre1, &self.pre2, self.sigma, NwVariant::Elhr)?;
            return Ok(notwitness::rhs_from_table(&table, self.idx1, self.idx2, self.sigma));
        }
        let Some(sat) = abox_sat else { return Ok(BTreeSet::new()) };
        let cands = self.candidates();
        let hits = par::map(self.parallel, &cands, |a| self.abox_witness(sat, a).is_some());
        Ok(cands.into_iter().zip(hits).filter(|(_, h)| *h).map(|(a, _)| a).collect())
    }

    fn concept_shortcut(&self) -> bool {
        self.sigma.role_names.is_empty() || !self.idx1.source().terminology.has_range_restrictions()
    }

    /// `A†_{T2,Σ}` saturated under `T1`, with the copy names.
    fn split(&self) -> Result<Option<(SplitNames, Saturated<'a>)>> {
        let Some(abox) = &self.abox else { return Ok(None) };
        let names = SplitNames::new(abox);
        let unfolded = names.unfold(abox)?;
        let sat = self.saturate(&unfolded);
        Ok(Some((names, sat)))
    }

    /// The first `(ξ_B)_r` with `(T1, A†) ⊨ A((ξ_B)_r)`.
    fn split_witness(&self, names: &SplitNames, sat: &Saturated, a: &ConceptName) -> Option<usize> {
        let t2 = &self.idx2.source().terminology;
        for b in non_conj(t2, a) {
            for r in &self.sigma.role_names {
                if let Some(n) = names.get(&xi_individual(&b), r).and_then(|ind| sat.holds(ind, a)) {
                    return Some(n);
                }
            }
        }
        None
    }

    fn rhs_concept(&self, instance: &BTreeSet<ConceptName>, split: Option<&(SplitNames, Saturated)>) -> BTreeSet<ConceptName> {
        if self.concept_shortcut() {
            return instance.clone();
        }
        let Some((names, sat)) = split else { return BTreeSet::new() };
        let cands: Vec<ConceptName> = instance.iter().cloned().collect();
        let hits = par::map(self.parallel, &cands, |a| self.split_witness(names, sat, a).is_some());
        cands.into_iter().zip(hits).filter(|(_, h)| *h).map(|(a, _)| a).collect()
    }
}

/// Internal individual names of the global lhs ABox.
fn lhs_atom_ind(a: &ConceptName) -> IndividualName {
    IndividualName::new(format!("@a:{a}"))
}

fn lhs_dom_ind(r: &RoleName) -> IndividualName {
    IndividualName::new(format!("@d:{r}"))
}

fn lhs_ran_ind(r: &RoleName) -> IndividualName {
    IndividualName::new(format!("@e:{r}"))
}

/// Canonical models of all singleton Σ-ABoxes at once, restricted to Σ.
struct LhsModels {
    sx: SigmaIndex,
    g1: SimGraph,
    g2: SimGraph,
    at1: BTreeMap<IndividualName, usize>,
    at2: BTreeMap<IndividualName, usize>,
}

/// One lhs check: the witness key, the point and the root of its ABox.
struct LhsProbe {
    key: WitnessKey,
    point: IndividualName,
    root: IndividualName,
    lhs: Concept,
}

fn lhs_probes(sigma: &Signature) -> Vec<LhsProbe> {
    let mut out = Vec::new();
    for a in &sigma.concept_names {
        let ind = lhs_atom_ind(a);
        out.push(LhsProbe { key: WitnessKey::LhsAtomic(a.clone()), point: ind.clone(), root: ind, lhs: Concept::Atom(a.clone()) });
    }
    for r in &sigma.role_names {
        out.push(LhsProbe { key: WitnessKey::LhsDom(r.clone()), point: lhs_dom_ind(r), root: lhs_dom_ind(r), lhs: Concept::exists(r.clone(), Concept::Top) });
        out.push(LhsProbe { key: WitnessKey::LhsRan(r.clone()), point: lhs_ran_ind(r), root: lhs_dom_ind(r), lhs: Concept::ran(r.clone()) });
    }
    out
}

impl LhsModels {
    fn build(idx1: &SubsumptionIndex, idx2: &SubsumptionIndex, sigma: &Signature) -> Option<LhsModels> {
        let mut asserts: Vec<Assertion> = sigma.concept_names.iter().map(|a| Assertion::concept(a.clone(), lhs_atom_ind(a))).collect();
        asserts.extend(sigma.role_names.iter().map(|r| Assertion::role(r.clone(), lhs_dom_ind(r), lhs_ran_ind(r))));
        let abox = Abox::new(asserts).ok()?;
        let sx = SigmaIndex::new(sigma, false);
        let i1 = build_canonical_with(&idx1.rules, &abox);
        let i2 = build_canonical_with(&idx2.rules, &abox);
        let at = |i: &crate::canonical::Interpretation| i.individuals().iter().map(|(k, &v)| (k.clone(), v)).collect();
        Some(LhsModels { g1: SimGraph::from_interpretation(&i1, &sx), g2: SimGraph::from_interpretation(&i2, &sx), at1: at(&i1), at2: at(&i2), sx })
    }
}

/// Outcome of the lhs checks for one simulation flavour.
#[derive(Default)]
struct LhsOutcome {
    keys: BTreeSet<WitnessKey>,
    examples: BTreeMap<WitnessKey, Inclusion>,
    overflow: BTreeSet<WitnessKey>,
}

#[allow(clippy::too_many_arguments)]
fn lhs_run(
    models: &LhsModels,
    idx1: &SubsumptionIndex,
    idx2: &SubsumptionIndex,
    probes: &[LhsProbe],
    query: bool,
    examples: Option<usize>,
    parallel: bool,
    order_seed: Option<u64>,
) -> Result<LhsOutcome> {
    let mode = if query { EdgeMatch::Intersection } else { EdgeMatch::PerRole };
    let sim = Simulation::compute(&models.g1, &models.g2, mode, order_seed);
    let results = par::map(parallel, probes, |p| -> Result<Option<(WitnessKey, Option<Inclusion>)>> {
        let (d, e) = (models.at1[&p.point], models.at2[&p.point]);
        let dom1 = models.g1.reachable([models.at1[&p.root]]);
        let dom2 = models.g2.reachable([models.at2[&p.root]]);
        let local = sim.holds(d, e);
        let bad = if query && local { sim.global_failure(&dom1, &dom2) } else { None };
        if local && bad.is_none() {
            return Ok(None);
        }
        let Some(cap) = examples else { return Ok(Some((p.key.clone(), None))) };
        let mut wb = WitnessBuilder::new(&models.g1, &models.g2, &sim, &models.sx);
        let built = match bad {
            None => wb.pointed(d, e, cap, &dom1, &dom2),
            Some(b) => wb.global(b, d, e, cap, &dom1, &dom2),
        };
        match built {
            Ok(c) => Ok(Some((p.key.clone(), Some(examples::verify_lhs(idx1, idx2, p.lhs.clone(), c)?)))),
            Err(()) => Ok(Some((p.key.clone(), None))),
        }
    });
    let mut out = LhsOutcome::default();
    for r in results {
        if let Some((key, ex)) = r? {
            match ex {
                Some(inc) => {
                    out.examples.insert(key.clone(), inc);
                }
                None if examples.is_some() => {
                    out.overflow.insert(key.clone());
                }
                None => {}
            }
            out.keys.insert(key);
        }
    }
    Ok(out)
}

fn apply_lhs(m: &mut ModeReport, o: &LhsOutcome) {
    for k in &o.keys {
        match k {
            WitnessKey::LhsAtomic(a) => {
                m.lhs_atomic.insert(a.clone());
            }
            WitnessKey::LhsDom(r) => {
                m.lhs_dom.insert(r.clone());
            }
            WitnessKey::LhsRan(r) => {
                m.lhs_ran.insert(r.clone());
            }
            _ => {}
        }
    }
    m.examples.extend(o.examples.iter().map(|(k, v)| (k.clone(), v.clone())));
    m.overflow.extend(o.overflow.iter().cloned());
}

/// Rhs examples for `names`, from a derivation node picker.
fn rhs_examples(
    ctx: &DirCtx,
    sat: &Saturated,
    names: &BTreeSet<ConceptName>,
    node: &(dyn Fn(&ConceptName) -> Option<usize> + Sync),
    concept_mode: bool,
    cap: usize,
) -> Result<(BTreeMap<WitnessKey, Inclusion>, BTreeSet<WitnessKey>)> {
    let list: Vec<ConceptName> = names.iter().cloned().collect();
    let results = par::map(ctx.parallel, &list, |a| -> Result<Option<Inclusion>> {
        let Some(n) = node(a) else { return Ok(None) };
        let x = sat.sat.name_id(a).expect("label present");
        let mut ex = examples::Explainer::new(&sat.sat);
        let Some(raw) = ex.label(n, x) else { return Ok(None) };
        let raw = if concept_mode { examples::strip_redundant_ran(&raw) } else { raw };
        examples::finish_rhs(ctx.idx1, ctx.idx2, raw, a, cap)
    });
    let mut found = BTreeMap::new();
    let mut overflow = BTreeSet::new();
    for (a, r) in list.into_iter().zip(results) {
        match r? {
            Some(inc) => {
                found.insert(WitnessKey::Rhs(a), inc);
            }
            None => {
                overflow.insert(WitnessKey::Rhs(a));
            }
        }
    }
    Ok((found, overflow))
}

fn diff_direction(idx1: &SubsumptionIndex, idx2: &SubsumptionIndex, sigma: &Signature, opts: &DiffOptions) -> Result<BTreeMap<Mode, ModeReport>> {
    let ctx = DirCtx::new(idx1, idx2, sigma, opts.parallel);
    let want = |m: Mode| opts.modes.contains(&m);
    let cap = opts.examples.then_some(opts.max_example_size);
    let role = role_witnesses(idx1, idx2, sigma, opts.role_witnesses_in_sigma);

    let needs_abox_sat = !use_notwitness(idx1, idx2, opts.strategy)? || opts.examples;
    let abox_sat = if needs_abox_sat { ctx.abox.as_ref().map(|a| ctx.saturate(a)) } else { None };
    let rhs_i = ctx.rhs_instance(opts.strategy, abox_sat.as_ref())?;
    let split = if want(Mode::Concept) && !ctx.concept_shortcut() { ctx.split()? } else { None };
    let rhs_c = if want(Mode::Concept) { ctx.rhs_concept(&rhs_i, split.as_ref()) } else { BTreeSet::new() };

    let probes = lhs_probes(sigma);
    let models = LhsModels::build(idx1, idx2, sigma);
    let lhs_i = match &models {
        Some(m) if want(Mode::Concept) || want(Mode::Instance) => lhs_run(m, idx1, idx2, &probes, false, cap, opts.parallel, opts.order_seed)?,
        _ => LhsOutcome::default(),
    };
    let lhs_q = match &models {
        Some(m) if want(Mode::Query) => lhs_run(m, idx1, idx2, &probes, true, cap, opts.parallel, opts.order_seed)?,
        _ => LhsOutcome::default(),
    };

    let mut ex_i = (BTreeMap::new(), BTreeSet::new());
    let mut ex_c = (BTreeMap::new(), BTreeSet::new());
    if let Some(cap) = cap {
        if let Some(sat) = &abox_sat {
            if want(Mode::Instance) || want(Mode::Query) || (want(Mode::Concept) && ctx.concept_shortcut()) {
                ex_i = rhs_examples(&ctx, sat, &rhs_i, &|a| ctx.abox_witness(sat, a).map(|(_, n)| n), false, cap)?;
            }
            if want(Mode::Concept) {
                if ctx.concept_shortcut() {
                    ex_c = concept_examples_from_instance(&ctx, &ex_i, &rhs_c, cap)?;
                } else if let Some((names, ssat)) = &split {
                    ex_c = rhs_examples(&ctx, ssat, &rhs_c, &|a| ctx.split_witness(names, ssat, a), true, cap)?;
                }
            }
        }
    }

    let mut out = BTreeMap::new();
    for &mode in &opts.modes {
        let mut m = ModeReport { role_wtn: role.clone(), ..ModeReport::default() };
        match mode {
            Mode::Concept => {
                m.rhs_wtn = rhs_c.clone();
                m.examples.extend(ex_c.0.clone());
                m.overflow.extend(ex_c.1.iter().cloned());
                apply_lhs(&mut m, &lhs_i);
            }
            Mode::Instance => {
                m.rhs_wtn = rhs_i.clone();
                m.examples.extend(ex_i.0.clone());
                m.overflow.extend(ex_i.1.iter().cloned());
                apply_lhs(&mut m, &lhs_i);
            }
            Mode::Query => {
                m.rhs_wtn = rhs_i.clone();
                m.examples.extend(ex_i.0.clone());
                m.overflow.extend(ex_i.1.iter().cloned());
                apply_lhs(&mut m, &lhs_q);
            }
        }
        out.insert(mode, m);
    }
    Ok(out)
}

/// Concept-mode examples when `ran` conjuncts carry no information in `T1`.
fn concept_examples_from_instance(
    ctx: &DirCtx,
    ex_i: &(BTreeMap<WitnessKey, Inclusion>, BTreeSet<WitnessKey>),
    names: &BTreeSet<ConceptName>,
    cap: usize,
) -> Result<(BTreeMap<WitnessKey, Inclusion>, BTreeSet<WitnessKey>)> {
    let mut found = BTreeMap::new();
    let mut overflow = BTreeSet::new();
    for a in names {
        let key = WitnessKey::Rhs(a.clone());
        match ex_i.0.get(&key) {
            Some(inc) => {
                let lhs = drop_ran(&inc.lhs);
                match examples::finish_rhs(ctx.idx1, ctx.idx2, lhs, a, cap)? {
                    Some(inc) => {
                        found.insert(key, inc);
                    }
                    None => {
                        overflow.insert(key);
                    }
                }
            }
            None => {
                overflow.insert(key);
            }
        }
    }
    Ok((found, overflow))
}

fn drop_ran(c: &Concept) -> Concept {
    Concept::conj(c.conjuncts().iter().filter_map(|x| match x {
        Concept::Ran(_) => None,
        Concept::Exists(r, f) => Some(Concept::exists(r.clone(), drop_ran(f))),
        other => Some(other.clone()),
    }))
}

/// Computes witness sets, normalizing and classifying both inputs.
///
/// `sigma = None` uses [`default_signature`].
pub fn compute_diff(t1: &Terminology, t2: &Terminology, sigma: Option<&Signature>, opts: &DiffOptions) -> Result<WitnessReport> {
    let sigma = match sigma {
        Some(s) => {
            if let Some(bad) = s.concept_names.iter().map(|a| a.as_str()).chain(s.role_names.iter().map(|r| r.as_str())).find(|x| x.starts_with('@')) {
                return Err(Error::ReservedInSignature(bad.to_string()));
            }
            s.clone()
        }
        None => default_signature(t1, t2),
    };
    par::with_threads(opts.threads, || {
        let (n1, n2) = par::join(opts.parallel, || normalize(t1), || normalize(t2));
        let (i1, i2) = par::join(opts.parallel, || classify(&n1), || classify(&n2));
        if opts.strategy == Strategy::NotWitness && !(is_acyclic(&n1.terminology) && is_acyclic(&n2.terminology)) {
            return Err(Error::Cyclic);
        }
        let fwd = opts.directions.contains(&Direction::Forward);
        let bwd = opts.directions.contains(&Direction::Backward);
        let (f, b) = par::join(
            opts.parallel,
            || fwd.then(|| diff_direction(&i1, &i2, &sigma, opts)).transpose(),
            || bwd.then(|| diff_direction(&i2, &i1, &sigma, opts)).transpose(),
        );
        let mut report = WitnessReport::default();
        for (dir, res) in [(Direction::Forward, f?), (Direction::Backward, b?)] {
            if let Some(modes) = res {
                for (mode, m) in modes {
                    report.entries.insert((dir, mode), m);
                }
            }
        }
        Ok(report)
    })
}

/// Instance rhs witnesses of `T1 → T2` for classified normalized inputs.
pub fn rhs_witnesses_instance(idx1: &SubsumptionIndex, idx2: &SubsumptionIndex, sigma: &Signature, strategy: Strategy) -> Result<BTreeSet<ConceptName>> {
    let ctx = DirCtx::new(idx1, idx2, sigma, false);
    let sat = if use_notwitness(idx1, idx2, strategy)? { None } else { ctx.abox.as_ref().map(|a| ctx.saturate(a)) };
    ctx.rhs_instance(strategy, sat.as_ref())
}

/// Concept rhs witnesses of `T1 → T2` for classified normalized inputs.
pub fn rhs_witnesses_concept(idx1: &SubsumptionIndex, idx2: &SubsumptionIndex, sigma: &Signature) -> Result<BTreeSet<ConceptName>> {
    let ctx = DirCtx::new(idx1, idx2, sigma, false);
    let instance = rhs_witnesses_instance(idx1, idx2, sigma, Strategy::Auto)?;
    let split = if ctx.concept_shortcut() { None } else { ctx.split()? };
    Ok(ctx.rhs_concept(&instance, split.as_ref()))
}

/// Lhs witness sets `(atomic, dom, ran)` of `T1 → T2`; `query` selects the
/// global intersection-preserving simulation.
pub fn lhs_witnesses(
    idx1: &SubsumptionIndex,
    idx2: &SubsumptionIndex,
    sigma: &Signature,
    query: bool,
) -> (BTreeSet<ConceptName>, BTreeSet<RoleName>, BTreeSet<RoleName>) {
    let mut m = ModeReport::default();
    if let Some(models) = LhsModels::build(idx1, idx2, sigma) {
        let probes = lhs_probes(sigma);
        let o = lhs_run(&models, idx1, idx2, &probes, query, None, false, None).expect("no examples requested");
        apply_lhs(&mut m, &o);
    }
    (m.lhs_atomic, m.lhs_dom, m.lhs_ran)
}

/// Example `C ⊑ A` for a rhs witness `A`; `Ok(None)` when `A` is not a
/// witness or the example exceeds `cap`.
pub fn generate_rhs_example(idx1: &SubsumptionIndex, idx2: &SubsumptionIndex, sigma: &Signature, a: &ConceptName, mode: Mode, cap: usize) -> Result<Option<Inclusion>> {
    let ctx = DirCtx::new(idx1, idx2, sigma, false);
    let names = BTreeSet::from([a.clone()]);
    let Some(abox) = &ctx.abox else { return Ok(None) };
    let sat = ctx.saturate(abox);
    if mode == Mode::Concept {
        if ctx.concept_shortcut() {
            let (ex, _) = rhs_examples(&ctx, &sat, &names, &|a| ctx.abox_witness(&sat, a).map(|(_, n)| n), false, cap)?;
            let (ex, _) = concept_examples_from_instance(&ctx, &(ex, BTreeSet::new()), &names, cap)?;
            return Ok(ex.into_values().next());
        }
        let Some((split_names, ssat)) = ctx.split()? else { return Ok(None) };
        let (ex, _) = rhs_examples(&ctx, &ssat, &names, &|a| ctx.split_witness(&split_names, &ssat, a), true, cap)?;
        return Ok(ex.into_values().next());
    }
    let (ex, _) = rhs_examples(&ctx, &sat, &names, &|a| ctx.abox_witness(&sat, a).map(|(_, n)| n), false, cap)?;
    Ok(ex.into_values().next())
}

/// Example for a lhs witness key; `Ok(None)` when the key is not a witness
/// or the example exceeds `cap`.
pub fn generate_lhs_example(idx1: &SubsumptionIndex, idx2: &SubsumptionIndex, sigma: &Signature, key: &WitnessKey, mode: Mode, cap: usize) -> Result<Option<Inclusion>> {
    let Some(models) = LhsModels::build(idx1, idx2, sigma) else { return Ok(None) };
    let probes: Vec<LhsProbe> = lhs_probes(sigma).into_iter().filter(|p| &p.key == key).collect();
    let o = lhs_run(&models, idx1, idx2, &probes, mode == Mode::Query, Some(cap), false, None)?;
    Ok(o.examples.get(key).cloned())
}

/// Normalizes and classifies a terminology.
pub fn prepare(t: &Terminology) -> SubsumptionIndex {
    classify(&normalize(t))
}
