//! Σ-simulations between pointed interpretations and ABoxes.
//!
//! All three variants share one greatest-fixpoint engine over graphs whose
//! nodes carry atom bitsets and whose edges carry role bitsets. Every pair
//! removed from the candidate relation remembers the condition it violated,
//! which is enough to rebuild a separating concept afterwards.

use std::collections::{BTreeSet, HashMap, VecDeque};

use fixedbitset::FixedBitSet;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::canonical::{Element, Interpretation};
use crate::model::{Abox, Assertion, Concept, ConceptName, IndividualName, RoleName, Signature};

/// Default size cap for extracted concepts.
pub const DEFAULT_SIZE_CAP: usize = 64;

/// Outcome of a simulation check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimulationResult {
    pub holds: bool,
    /// A concept true at the left point and false at the right point.
    pub witness_concept: Option<Concept>,
    /// Set when a separating concept exists but exceeded the size cap.
    pub overflow: bool,
}

/// Tuning knobs for simulation checks.
#[derive(Clone, Debug)]
pub struct SimOptions {
    pub size_cap: usize,
    /// Randomizes worklist order; the result must not depend on it.
    pub order_seed: Option<u64>,
    pub extract_witness: bool,
}

impl Default for SimOptions {
    fn default() -> Self {
        SimOptions { size_cap: DEFAULT_SIZE_CAP, order_seed: None, extract_witness: true }
    }
}

/// How successor conditions are matched.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub(crate) enum EdgeMatch {
    /// Each role of a left edge may be matched by a different right edge.
    PerRole,
    /// The whole role set of a left edge must be matched by one right edge.
    Intersection,
}

/// Atom and role universes derived from a signature.
#[derive(Clone, Debug)]
pub(crate) struct SigmaIndex {
    pub concepts: Vec<ConceptName>,
    pub roles: Vec<RoleName>,
    concept_id: HashMap<ConceptName, usize>,
    role_id: HashMap<RoleName, usize>,
    /// Whether `ran(r)` pseudo-atoms follow the concept atoms.
    ran_atoms: bool,
}

impl SigmaIndex {
    pub fn new(sigma: &Signature, ran_atoms: bool) -> SigmaIndex {
        let concepts: Vec<ConceptName> = sigma.concept_names.iter().cloned().collect();
        let roles: Vec<RoleName> = sigma.role_names.iter().cloned().collect();
        SigmaIndex {
            concept_id: concepts.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect(),
            role_id: roles.iter().enumerate().map(|(i, r)| (r.clone(), i)).collect(),
            concepts,
            roles,
            ran_atoms,
        }
    }

    fn n_atoms(&self) -> usize {
        self.concepts.len() + if self.ran_atoms { self.roles.len() } else { 0 }
    }

    fn atom_concept(&self, i: usize) -> Concept {
        if i < self.concepts.len() {
            Concept::Atom(self.concepts[i].clone())
        } else {
            Concept::Ran(self.roles[i - self.concepts.len()].clone())
        }
    }

    fn role_set(&self, roles: &[RoleName]) -> FixedBitSet {
        let mut set = FixedBitSet::with_capacity(self.roles.len());
        roles.iter().filter_map(|r| self.role_id.get(r)).for_each(|&i| set.insert(i));
        set
    }
}

/// Σ-restricted view of an interpretation or ABox.
#[derive(Clone, Debug)]
pub(crate) struct SimGraph {
    pub labels: Vec<FixedBitSet>,
    pub succ: Vec<Vec<(usize, FixedBitSet)>>,
    pub pred: Vec<Vec<usize>>,
    /// Successors over every role, including those outside Σ.
    links: Vec<Vec<usize>>,
}

impl SimGraph {
    fn from_parts(labels: Vec<FixedBitSet>, succ: Vec<Vec<(usize, FixedBitSet)>>, links: Vec<Vec<usize>>) -> SimGraph {
        let mut pred = vec![Vec::new(); labels.len()];
        for (x, edges) in succ.iter().enumerate() {
            for (y, _) in edges {
                pred[*y].push(x);
            }
        }
        for p in &mut pred {
            p.sort_unstable();
            p.dedup();
        }
        SimGraph { labels, succ, pred, links }
    }

    pub fn from_interpretation(i: &Interpretation, sx: &SigmaIndex) -> SimGraph {
        let n = i.len();
        let mut labels = Vec::with_capacity(n);
        let mut succ = Vec::with_capacity(n);
        let links = (0..n).map(|x| i.successors(x).iter().map(|(y, _)| *y).collect()).collect();
        for x in 0..n {
            let mut l = FixedBitSet::with_capacity(sx.n_atoms());
            i.labels(x).iter().filter_map(|a| sx.concept_id.get(a)).for_each(|&k| l.insert(k));
            labels.push(l);
            succ.push(
                i.successors(x)
                    .iter()
                    .filter_map(|(y, rs)| {
                        let set = sx.role_set(rs);
                        (!set.is_clear()).then_some((*y, set))
                    })
                    .collect(),
            );
        }
        let mut g = SimGraph::from_parts(labels, succ, links);
        if sx.ran_atoms {
            g.add_ran_atoms(sx);
        }
        g
    }

    /// Nodes are the ABox individuals in sorted order.
    pub fn from_abox(a: &Abox, sx: &SigmaIndex) -> (SimGraph, Vec<IndividualName>) {
        let inds: Vec<IndividualName> = a.individuals().into_iter().collect();
        let pos: HashMap<&IndividualName, usize> = inds.iter().enumerate().map(|(i, x)| (x, i)).collect();
        let mut labels = vec![FixedBitSet::with_capacity(sx.n_atoms()); inds.len()];
        let mut edges: HashMap<(usize, usize), Vec<RoleName>> = HashMap::new();
        for x in a.assertions() {
            match x {
                Assertion::Concept(Some(c), i) => {
                    if let Some(&k) = sx.concept_id.get(c) {
                        labels[pos[i]].insert(k);
                    }
                }
                Assertion::Concept(None, _) => {}
                Assertion::Role(r, p, q) => edges.entry((pos[p], pos[q])).or_default().push(r.clone()),
            }
        }
        let mut succ = vec![Vec::new(); inds.len()];
        let mut links = vec![Vec::new(); inds.len()];
        let mut keys: Vec<_> = edges.into_iter().collect();
        keys.sort();
        for ((p, q), rs) in keys {
            links[p].push(q);
            let set = sx.role_set(&rs);
            if !set.is_clear() {
                succ[p].push((q, set));
            }
        }
        let mut g = SimGraph::from_parts(labels, succ, links);
        if sx.ran_atoms {
            g.add_ran_atoms(sx);
        }
        (g, inds)
    }

    fn add_ran_atoms(&mut self, sx: &SigmaIndex) {
        let base = sx.concepts.len();
        for x in 0..self.succ.len() {
            for (y, rs) in self.succ[x].clone() {
                rs.ones().for_each(|r| self.labels[y].insert(base + r));
            }
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    /// Extension of a concept over Σ; `∃u` ranges over `domain`.
    pub fn eval(&self, c: &Concept, sx: &SigmaIndex, domain: &FixedBitSet) -> FixedBitSet {
        let n = self.len();
        let atom = |k: Option<usize>| {
            let mut out = FixedBitSet::with_capacity(n);
            if let Some(k) = k {
                (0..n).filter(|&x| self.labels[x].contains(k)).for_each(|x| out.insert(x));
            }
            out
        };
        match c {
            Concept::Top => {
                let mut all = FixedBitSet::with_capacity(n);
                all.insert_range(..);
                all
            }
            Concept::Atom(a) => atom(sx.concept_id.get(a).copied()),
            Concept::Ran(r) => {
                if sx.ran_atoms {
                    atom(sx.role_id.get(r).map(|&i| sx.concepts.len() + i))
                } else {
                    let mut out = FixedBitSet::with_capacity(n);
                    if let Some(&k) = sx.role_id.get(r) {
                        for edges in &self.succ {
                            edges.iter().filter(|(_, rs)| rs.contains(k)).for_each(|(y, _)| out.insert(*y));
                        }
                    }
                    out
                }
            }
            Concept::Exists(r, f) => self.exists(&self.eval(f, sx, domain), std::slice::from_ref(r), sx),
            Concept::ExistsRoles(rs, f) => self.exists(&self.eval(f, sx, domain), rs, sx),
            Concept::ExistsUniversal(f) => {
                let mut inner = self.eval(f, sx, domain);
                inner.intersect_with(domain);
                let mut out = FixedBitSet::with_capacity(n);
                if !inner.is_clear() {
                    out.insert_range(..);
                }
                out
            }
            Concept::Conj(cs) => {
                let mut out = self.eval(&cs[0], sx, domain);
                for x in &cs[1..] {
                    out.intersect_with(&self.eval(x, sx, domain));
                }
                out
            }
        }
    }

    fn exists(&self, filler: &FixedBitSet, roles: &[RoleName], sx: &SigmaIndex) -> FixedBitSet {
        let mut out = FixedBitSet::with_capacity(self.len());
        let Some(need) = roles.iter().map(|r| sx.role_id.get(r).copied()).collect::<Option<Vec<usize>>>() else {
            return out;
        };
        for (x, edges) in self.succ.iter().enumerate() {
            if edges.iter().any(|(y, rs)| filler.contains(*y) && need.iter().all(|&k| rs.contains(k))) {
                out.insert(x);
            }
        }
        out
    }

    /// Nodes reachable from `roots` over any role.
    pub fn reachable(&self, roots: impl IntoIterator<Item = usize>) -> FixedBitSet {
        let mut seen = FixedBitSet::with_capacity(self.len());
        let mut todo: Vec<usize> = roots.into_iter().collect();
        todo.iter().for_each(|&r| seen.insert(r));
        while let Some(x) = todo.pop() {
            for &y in &self.links[x] {
                if !seen.put(y) {
                    todo.push(y);
                }
            }
        }
        seen
    }
}

/// Greatest simulation between two graphs.
pub(crate) struct Simulation {
    /// `s[d]` is the set of right nodes simulating `d`.
    pub s: Vec<FixedBitSet>,
    /// 0 for pairs failing the atom condition, `k + 1` for a failed requirement `k`.
    reason: Vec<u32>,
    reqs: Vec<Vec<(usize, FixedBitSet)>>,
    n2: usize,
}

impl Simulation {
    pub fn compute(g1: &SimGraph, g2: &SimGraph, mode: EdgeMatch, order_seed: Option<u64>) -> Simulation {
        let (n1, n2) = (g1.len(), g2.len());
        let reqs: Vec<Vec<(usize, FixedBitSet)>> = g1
            .succ
            .iter()
            .map(|edges| {
                let mut out: Vec<(usize, FixedBitSet)> = Vec::new();
                for (y, rs) in edges {
                    match mode {
                        EdgeMatch::Intersection => out.push((*y, rs.clone())),
                        EdgeMatch::PerRole => {
                            for r in rs.ones() {
                                let mut single = FixedBitSet::with_capacity(rs.len());
                                single.insert(r);
                                out.push((*y, single));
                            }
                        }
                    }
                }
                out
            })
            .collect();
        let mut s = Vec::with_capacity(n1);
        for d in 0..n1 {
            let mut row = FixedBitSet::with_capacity(n2);
            for e in 0..n2 {
                if g1.labels[d].is_subset(&g2.labels[e]) {
                    row.insert(e);
                }
            }
            s.push(row);
        }
        let mut sim = Simulation { s, reason: vec![0; n1 * n2], reqs, n2 };
        let mut rng = order_seed.map(ChaCha8Rng::seed_from_u64);
        let mut queue: VecDeque<(usize, usize)> = VecDeque::new();
        let mut order: Vec<usize> = (0..n1).collect();
        if let Some(rng) = rng.as_mut() {
            order.shuffle(rng);
        }
        for &d in &order {
            let alive: Vec<usize> = sim.s[d].ones().collect();
            for e in alive {
                if let Some(k) = sim.failing_req(g2, d, e, None) {
                    sim.remove(d, e, k);
                    queue.push_back((d, e));
                }
            }
        }
        loop {
            let next = match rng.as_mut() {
                Some(rng) if !queue.is_empty() => {
                    let i = rng.gen_range(0..queue.len());
                    queue.swap_remove_back(i)
                }
                _ => queue.pop_front(),
            };
            let Some((d2, e2)) = next else { break };
            for &d in &g1.pred[d2] {
                for &e in &g2.pred[e2] {
                    if sim.s[d].contains(e) {
                        if let Some(k) = sim.failing_req(g2, d, e, Some(d2)) {
                            sim.remove(d, e, k);
                            queue.push_back((d, e));
                        }
                    }
                }
            }
        }
        sim
    }

    fn remove(&mut self, d: usize, e: usize, k: usize) {
        self.s[d].set(e, false);
        self.reason[d * self.n2 + e] = k as u32 + 1;
    }

    fn satisfied(&self, g2: &SimGraph, e: usize, (d2, roles): &(usize, FixedBitSet)) -> bool {
        g2.succ[e].iter().any(|(e2, rs)| roles.is_subset(rs) && self.s[*d2].contains(*e2))
    }

    /// First requirement of `d` that `e` fails, optionally only those targeting `target`.
    fn failing_req(&self, g2: &SimGraph, d: usize, e: usize, target: Option<usize>) -> Option<usize> {
        self.reqs[d]
            .iter()
            .enumerate()
            .filter(|(_, (y, _))| target.is_none_or(|t| *y == t))
            .find(|(_, req)| !self.satisfied(g2, e, req))
            .map(|(k, _)| k)
    }

    pub fn holds(&self, d: usize, e: usize) -> bool {
        self.s[d].contains(e)
    }

    /// First `d` in `left` whose image misses `right` entirely.
    pub fn global_failure(&self, left: &FixedBitSet, right: &FixedBitSet) -> Option<usize> {
        left.ones().find(|&d| self.s[d].is_disjoint(right))
    }
}

/// Builds separating concepts from removal reasons.
pub(crate) struct WitnessBuilder<'a> {
    pub g1: &'a SimGraph,
    pub g2: &'a SimGraph,
    pub sim: &'a Simulation,
    pub sx: &'a SigmaIndex,
    memo: HashMap<(usize, usize), Concept>,
    budget: usize,
}

/// Upper bound on nodes built before pruning.
const BUILD_BUDGET: usize = 20_000;
/// Largest concept handed to greedy pruning.
const PRUNE_LIMIT: usize = 2_000;

impl<'a> WitnessBuilder<'a> {
    pub fn new(g1: &'a SimGraph, g2: &'a SimGraph, sim: &'a Simulation, sx: &'a SigmaIndex) -> Self {
        WitnessBuilder { g1, g2, sim, sx, memo: HashMap::new(), budget: BUILD_BUDGET }
    }

    /// Concept true at `d` and false at `e`, for a pair not in the simulation.
    fn build(&mut self, d: usize, e: usize) -> Option<Concept> {
        debug_assert!(!self.sim.holds(d, e));
        if let Some(c) = self.memo.get(&(d, e)) {
            return Some(c.clone());
        }
        let code = self.sim.reason[d * self.sim.n2 + e];
        let c = if code == 0 {
            let mut missing = self.g1.labels[d].clone();
            missing.difference_with(&self.g2.labels[e]);
            self.sx.atom_concept(missing.ones().next().expect("atom failure has a missing atom"))
        } else {
            let (d2, roles) = &self.sim.reqs[d][code as usize - 1];
            let mut parts = Vec::new();
            for (e2, rs) in &self.g2.succ[e] {
                if roles.is_subset(rs) {
                    parts.push(self.build(*d2, *e2)?);
                }
            }
            let names: Vec<RoleName> = roles.ones().map(|r| self.sx.roles[r].clone()).collect();
            Concept::exists_roles(names, Concept::conj(parts))
        };
        let size = c.size();
        if size > self.budget {
            return None;
        }
        self.budget -= size;
        self.memo.insert((d, e), c.clone());
        Some(c)
    }

    /// Separating concept for `(d, e)`, pruned; `Err(())` on overflow.
    pub fn pointed(&mut self, d: usize, e: usize, cap: usize, dom1: &FixedBitSet, dom2: &FixedBitSet) -> Result<Concept, ()> {
        let raw = self.build(d, e).ok_or(())?;
        self.finish(raw, d, e, cap, dom1, dom2)
    }

    /// `∃u.(⨅_{e ∈ dom2} C(bad, e))` for an element `bad` of `dom1` without image.
    pub fn global(&mut self, bad: usize, d: usize, e: usize, cap: usize, dom1: &FixedBitSet, dom2: &FixedBitSet) -> Result<Concept, ()> {
        let mut parts = Vec::new();
        for x in dom2.ones() {
            parts.push(self.build(bad, x).ok_or(())?);
        }
        let raw = Concept::exists_universal(Concept::conj(parts));
        self.finish(raw, d, e, cap, dom1, dom2)
    }

    fn finish(&self, raw: Concept, d: usize, e: usize, cap: usize, dom1: &FixedBitSet, dom2: &FixedBitSet) -> Result<Concept, ()> {
        let separates = |c: &Concept| self.g1.eval(c, self.sx, dom1).contains(d) && !self.g2.eval(c, self.sx, dom2).contains(e);
        debug_assert!(separates(&raw), "extracted concept must separate");
        if raw.size() > PRUNE_LIMIT {
            return Err(());
        }
        let c = prune(raw, &separates);
        if c.size() > cap {
            Err(())
        } else {
            Ok(c)
        }
    }
}

/// Every concept obtained by deleting one conjunct at some position.
fn removals(c: &Concept) -> Vec<Concept> {
    let mut out = Vec::new();
    let parts = c.conjuncts();
    if parts.len() > 1 {
        for i in 0..parts.len() {
            out.push(Concept::conj(parts.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, x)| x.clone())));
        }
    }
    for (i, part) in parts.iter().enumerate() {
        let rebuilt: Vec<Concept> = match part {
            Concept::Exists(r, f) => removals(f).into_iter().chain(std::iter::once(Concept::Top).filter(|_| **f != Concept::Top)).map(|g| Concept::exists(r.clone(), g)).collect(),
            Concept::ExistsRoles(rs, f) => removals(f)
                .into_iter()
                .chain(std::iter::once(Concept::Top).filter(|_| **f != Concept::Top))
                .map(|g| Concept::exists_roles(rs.iter().cloned(), g))
                .collect(),
            Concept::ExistsUniversal(f) => removals(f).into_iter().map(Concept::exists_universal).collect(),
            _ => Vec::new(),
        };
        for replacement in rebuilt {
            out.push(Concept::conj(parts.iter().enumerate().map(|(j, x)| if j == i { replacement.clone() } else { x.clone() })));
        }
    }
    out
}

/// Greedily deletes conjuncts while `keep` holds.
pub(crate) fn prune(mut c: Concept, keep: &dyn Fn(&Concept) -> bool) -> Concept {
    'outer: loop {
        for cand in removals(&c) {
            if cand.size() < c.size() && keep(&cand) {
                c = cand;
                continue 'outer;
            }
        }
        return c;
    }
}

fn all_bits(n: usize) -> FixedBitSet {
    let mut b = FixedBitSet::with_capacity(n);
    b.insert_range(..);
    b
}

fn point(i: &Interpretation, x: &Element) -> usize {
    i.index_of(x).unwrap_or_else(|| panic!("element {x:?} is not in the interpretation"))
}

#[allow(clippy::too_many_arguments)]
fn pointed_check(g1: &SimGraph, d: usize, g2: &SimGraph, e: usize, sx: &SigmaIndex, mode: EdgeMatch, global: bool, opts: &SimOptions) -> SimulationResult {
    let sim = Simulation::compute(g1, g2, mode, opts.order_seed);
    let (dom1, dom2) = (all_bits(g1.len()), all_bits(g2.len()));
    let local = sim.holds(d, e);
    let bad = if global && local { sim.global_failure(&dom1, &dom2) } else { None };
    let holds = local && bad.is_none();
    if holds || !opts.extract_witness {
        return SimulationResult { holds, witness_concept: None, overflow: false };
    }
    let mut wb = WitnessBuilder::new(g1, g2, &sim, sx);
    let res = match bad {
        None => wb.pointed(d, e, opts.size_cap, &dom1, &dom2),
        Some(b) => wb.global(b, d, e, opts.size_cap, &dom1, &dom2),
    };
    match res {
        Ok(c) => SimulationResult { holds, witness_concept: Some(c), overflow: false },
        Err(()) => SimulationResult { holds, witness_concept: None, overflow: true },
    }
}

/// Whether `(I1, d)` is Σ-simulated by `(I2, e)`.
pub fn sigma_simulation(i1: &Interpretation, d: &Element, i2: &Interpretation, e: &Element, sigma: &Signature) -> SimulationResult {
    sigma_simulation_with(i1, d, i2, e, sigma, &SimOptions::default())
}

pub fn sigma_simulation_with(i1: &Interpretation, d: &Element, i2: &Interpretation, e: &Element, sigma: &Signature, opts: &SimOptions) -> SimulationResult {
    let sx = SigmaIndex::new(sigma, false);
    let (g1, g2) = (SimGraph::from_interpretation(i1, &sx), SimGraph::from_interpretation(i2, &sx));
    pointed_check(&g1, point(i1, d), &g2, point(i2, e), &sx, EdgeMatch::PerRole, false, opts)
}

/// Whether `(A1, a1)` is Σ-range simulated by `(A2, a2)`.
pub fn range_simulation(a1: &Abox, x1: &IndividualName, a2: &Abox, x2: &IndividualName, sigma: &Signature) -> SimulationResult {
    range_simulation_with(a1, x1, a2, x2, sigma, &SimOptions::default())
}

pub fn range_simulation_with(a1: &Abox, x1: &IndividualName, a2: &Abox, x2: &IndividualName, sigma: &Signature, opts: &SimOptions) -> SimulationResult {
    let sx = SigmaIndex::new(sigma, true);
    let (g1, n1) = SimGraph::from_abox(a1, &sx);
    let (g2, n2) = SimGraph::from_abox(a2, &sx);
    let d = n1.binary_search(x1).unwrap_or_else(|_| panic!("{x1} is not in the left ABox"));
    let e = n2.binary_search(x2).unwrap_or_else(|_| panic!("{x2} is not in the right ABox"));
    pointed_check(&g1, d, &g2, e, &sx, EdgeMatch::PerRole, false, opts)
}

/// Whether `(I1, d)` is globally intersection-preserving Σ-simulated by `(I2, e)`.
pub fn global_intersection_simulation(i1: &Interpretation, d: &Element, i2: &Interpretation, e: &Element, sigma: &Signature) -> SimulationResult {
    global_intersection_simulation_with(i1, d, i2, e, sigma, &SimOptions::default())
}

pub fn global_intersection_simulation_with(
    i1: &Interpretation,
    d: &Element,
    i2: &Interpretation,
    e: &Element,
    sigma: &Signature,
    opts: &SimOptions,
) -> SimulationResult {
    let sx = SigmaIndex::new(sigma, false);
    let (g1, g2) = (SimGraph::from_interpretation(i1, &sx), SimGraph::from_interpretation(i2, &sx));
    pointed_check(&g1, point(i1, d), &g2, point(i2, e), &sx, EdgeMatch::Intersection, true, opts)
}

/// Σ-concept names and roles occurring in a concept, for test convenience.
pub fn concept_sigma(c: &Concept) -> BTreeSet<String> {
    use crate::model::Signed;
    let s = c.signature();
    s.concept_names.iter().map(|x| x.to_string()).chain(s.role_names.iter().map(|x| x.to_string())).collect()
}
