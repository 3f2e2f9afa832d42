//! Canonical models, concept evaluation and concept/ABox translations.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::model::{Abox, Assertion, Axiom, Concept, ConceptName, IndividualName, RoleName, Signed};
use crate::normalize::NormalizedTerminology;
use crate::reasoner::SubsumptionIndex;
use crate::rules::Rules;

/// Domain elements of canonical models.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Element {
    Named(IndividualName),
    /// `x_{ran(r),D}`.
    Aux(RoleName, Concept),
}

/// A terminology together with an ABox.
#[derive(Clone, Debug)]
pub struct KnowledgeBase {
    pub terminology: NormalizedTerminology,
    pub abox: Abox,
}

/// A finite interpretation with labelled elements and role-set edges.
#[derive(Clone, Debug)]
pub struct Interpretation {
    elements: Vec<Element>,
    index: HashMap<Element, usize>,
    labels: Vec<Vec<ConceptName>>,
    succ: Vec<Vec<(usize, Vec<RoleName>)>>,
    individuals: BTreeMap<IndividualName, usize>,
    concept_ext: HashMap<ConceptName, FixedBitSet>,
    ran_ext: HashMap<RoleName, FixedBitSet>,
}

impl Interpretation {
    /// Builds an interpretation from elements, labels and single-role edges.
    /// Every `Named` element is an individual.
    pub fn new(elements: Vec<Element>, labels: Vec<BTreeSet<ConceptName>>, edges: impl IntoIterator<Item = (usize, RoleName, usize)>) -> Interpretation {
        let mut grouped: BTreeMap<(usize, usize), BTreeSet<RoleName>> = BTreeMap::new();
        for (x, r, y) in edges {
            grouped.entry((x, y)).or_default().insert(r);
        }
        let mut succ = vec![Vec::new(); elements.len()];
        for ((x, y), rs) in grouped {
            succ[x].push((y, rs.into_iter().collect()));
        }
        Interpretation::assemble(elements, labels.into_iter().map(|l| l.into_iter().collect()).collect(), succ)
    }

    fn assemble(elements: Vec<Element>, labels: Vec<Vec<ConceptName>>, succ: Vec<Vec<(usize, Vec<RoleName>)>>) -> Interpretation {
        let n = elements.len();
        let index = elements.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();
        let individuals = elements
            .iter()
            .enumerate()
            .filter_map(|(i, e)| match e {
                Element::Named(a) => Some((a.clone(), i)),
                Element::Aux(..) => None,
            })
            .collect();
        let mut concept_ext: HashMap<ConceptName, FixedBitSet> = HashMap::new();
        for (i, ls) in labels.iter().enumerate() {
            for a in ls {
                concept_ext.entry(a.clone()).or_insert_with(|| FixedBitSet::with_capacity(n)).insert(i);
            }
        }
        let mut ran_ext: HashMap<RoleName, FixedBitSet> = HashMap::new();
        for edges in &succ {
            for (y, rs) in edges {
                for r in rs {
                    ran_ext.entry(r.clone()).or_insert_with(|| FixedBitSet::with_capacity(n)).insert(*y);
                }
            }
        }
        Interpretation { elements, index, labels, succ, individuals, concept_ext, ran_ext }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn domain(&self) -> &[Element] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Element {
        &self.elements[i]
    }

    pub fn index_of(&self, e: &Element) -> Option<usize> {
        self.index.get(e).copied()
    }

    pub fn individual(&self, a: &IndividualName) -> Option<usize> {
        self.individuals.get(a).copied()
    }

    pub fn individuals(&self) -> &BTreeMap<IndividualName, usize> {
        &self.individuals
    }

    /// Concept names holding at element `i`, sorted.
    pub fn labels(&self, i: usize) -> &[ConceptName] {
        &self.labels[i]
    }

    /// Successors of `i` with the sorted set of roles on the edge.
    pub fn successors(&self, i: usize) -> &[(usize, Vec<RoleName>)] {
        &self.succ[i]
    }

    pub fn concept_ext(&self, a: &ConceptName) -> BTreeSet<Element> {
        self.to_elements(self.concept_ext.get(a).cloned().unwrap_or_else(|| FixedBitSet::with_capacity(self.len())))
    }

    pub fn role_ext(&self, r: &RoleName) -> BTreeSet<(Element, Element)> {
        let mut out = BTreeSet::new();
        for (x, edges) in self.succ.iter().enumerate() {
            for (y, rs) in edges {
                if rs.contains(r) {
                    out.insert((self.elements[x].clone(), self.elements[*y].clone()));
                }
            }
        }
        out
    }

    fn to_elements(&self, bits: FixedBitSet) -> BTreeSet<Element> {
        bits.ones().map(|i| self.elements[i].clone()).collect()
    }

    /// Extension of `c` as a bitset over element indices.
    pub fn eval(&self, c: &Concept) -> FixedBitSet {
        let n = self.len();
        match c {
            Concept::Top => {
                let mut all = FixedBitSet::with_capacity(n);
                all.insert_range(..);
                all
            }
            Concept::Atom(a) => self.concept_ext.get(a).cloned().unwrap_or_else(|| FixedBitSet::with_capacity(n)),
            Concept::Ran(r) => self.ran_ext.get(r).cloned().unwrap_or_else(|| FixedBitSet::with_capacity(n)),
            Concept::Exists(r, f) => self.exists_where(&self.eval(f), |rs| rs.contains(r)),
            Concept::ExistsRoles(roles, f) => self.exists_where(&self.eval(f), |rs| roles.iter().all(|r| rs.contains(r))),
            Concept::ExistsUniversal(f) => {
                let mut out = FixedBitSet::with_capacity(n);
                if self.eval(f).count_ones(..) > 0 {
                    out.insert_range(..);
                }
                out
            }
            Concept::Conj(cs) => {
                let mut out = self.eval(&cs[0]);
                for x in &cs[1..] {
                    out.intersect_with(&self.eval(x));
                }
                out
            }
        }
    }

    fn exists_where(&self, filler: &FixedBitSet, ok: impl Fn(&[RoleName]) -> bool) -> FixedBitSet {
        let mut out = FixedBitSet::with_capacity(self.len());
        for (x, edges) in self.succ.iter().enumerate() {
            if edges.iter().any(|(y, rs)| filler.contains(*y) && ok(rs)) {
                out.insert(x);
            }
        }
        out
    }

    /// Whether individual `a` belongs to `c`; false for unknown individuals.
    pub fn eval_at(&self, c: &Concept, a: &IndividualName) -> bool {
        self.individual(a).is_some_and(|i| self.eval(c).contains(i))
    }

    /// Checks one axiom of a terminology.
    pub fn satisfies_axiom(&self, ax: &Axiom) -> bool {
        let subset = |x: &FixedBitSet, y: &FixedBitSet| x.is_subset(y);
        match ax {
            Axiom::SubAtom(a, c) => subset(&self.eval(&Concept::Atom(a.clone())), &self.eval(c)),
            Axiom::EqAtom(a, c) => self.eval(&Concept::Atom(a.clone())) == self.eval(c),
            Axiom::RangeRestr(r, c) => subset(&self.eval(&Concept::Ran(r.clone())), &self.eval(c)),
            Axiom::DomainRestr(r, c) => subset(&self.eval(&Concept::exists(r.clone(), Concept::Top)), &self.eval(c)),
            Axiom::RoleIncl(r, s) => self.succ.iter().all(|edges| edges.iter().all(|(_, rs)| !rs.contains(r) || rs.contains(s))),
        }
    }

    /// Checks one ABox assertion.
    pub fn satisfies_assertion(&self, a: &Assertion) -> bool {
        match a {
            Assertion::Concept(c, i) => match self.individual(i) {
                Some(x) => c.as_ref().is_none_or(|c| self.labels[x].contains(c)),
                None => false,
            },
            Assertion::Role(r, x, y) => match (self.individual(x), self.individual(y)) {
                (Some(x), Some(y)) => self.succ[x].iter().any(|(z, rs)| *z == y && rs.contains(r)),
                _ => false,
            },
        }
    }

    /// Elements reachable from `roots`, roots included.
    pub fn reachable(&self, roots: impl IntoIterator<Item = usize>) -> FixedBitSet {
        let mut seen = FixedBitSet::with_capacity(self.len());
        let mut todo: Vec<usize> = roots.into_iter().collect();
        todo.iter().for_each(|&r| seen.insert(r));
        while let Some(x) = todo.pop() {
            for &(y, _) in &self.succ[x] {
                if !seen.put(y) {
                    todo.push(y);
                }
            }
        }
        seen
    }

    /// Restriction to the given elements.
    pub fn restrict(&self, keep: &FixedBitSet) -> Interpretation {
        let map: HashMap<usize, usize> = keep.ones().enumerate().map(|(new, old)| (old, new)).collect();
        let elements = keep.ones().map(|i| self.elements[i].clone()).collect();
        let labels = keep.ones().map(|i| self.labels[i].clone()).collect();
        let succ = keep
            .ones()
            .map(|i| self.succ[i].iter().filter_map(|(y, rs)| map.get(y).map(|&ny| (ny, rs.clone()))).collect())
            .collect();
        Interpretation::assemble(elements, labels, succ)
    }
}

/// Extension of a concept as a set of elements.
pub fn eval_concept(i: &Interpretation, c: &Concept) -> BTreeSet<Element> {
    i.to_elements(i.eval(c))
}

/// Why a label was first derived at a node.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Why {
    Asserted,
    /// Initial filler of an aux node.
    AuxInit,
    Super(u32),
    Conj(u32),
    /// Existential definition satisfied via the edge `(role, target)`.
    Exist(u32, u32, usize),
    /// Domain of the role of the outgoing edge `(role, target)`.
    Dom(u32, usize),
    /// Range of the role of the incoming edge `(role, source)`.
    Ran(u32, usize),
}

/// Why an edge exists.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum EdgeWhy {
    Asserted,
    Label(u32),
    /// Domain consequence of the outgoing edge `(role, target)`.
    Dom(u32, usize),
    /// Range consequence of the incoming edge `(role, source)`.
    Ran(u32, usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub(crate) enum NodeKind {
    Named(usize),
    Aux(u32, Option<u32>),
}

#[derive(Clone, Copy)]
enum Task {
    Label(usize, u32),
    Edge(usize, u32, usize),
}

/// Forward-chaining saturation of an ABox under compiled rules.
///
/// Labels range over the terminology's concept names followed by ABox-only
/// names; roles likewise.
pub(crate) struct Saturation<'r> {
    rules: &'r Rules,
    pub names: Vec<ConceptName>,
    name_id: HashMap<ConceptName, u32>,
    pub roles: Vec<RoleName>,
    role_id: HashMap<RoleName, u32>,
    extra_up: Vec<Vec<u32>>,
    pub individuals: Vec<IndividualName>,
    pub kinds: Vec<NodeKind>,
    pub labels: Vec<FixedBitSet>,
    pub succ: Vec<Vec<(u32, usize)>>,
    pub preds: Vec<Vec<(u32, usize)>>,
    edges: HashSet<(usize, u32, usize)>,
    aux: HashMap<(u32, Option<u32>), usize>,
    pub why: HashMap<(usize, u32), Why>,
    pub edge_why: HashMap<(usize, u32, usize), EdgeWhy>,
    queue: VecDeque<Task>,
}

impl<'r> Saturation<'r> {
    pub fn run(rules: &'r Rules, abox: &Abox) -> Saturation<'r> {
        let mut names = rules.concepts.clone();
        let mut name_id: HashMap<ConceptName, u32> = rules.concept_id.clone();
        let mut roles = rules.roles.clone();
        let mut role_id: HashMap<RoleName, u32> = rules.role_id.clone();
        let sig = abox.signature();
        for c in sig.concept_names {
            if !name_id.contains_key(&c) {
                name_id.insert(c.clone(), names.len() as u32);
                names.push(c);
            }
        }
        let mut extra_up = Vec::new();
        for r in sig.role_names {
            if !role_id.contains_key(&r) {
                let id = roles.len() as u32;
                role_id.insert(r.clone(), id);
                roles.push(r);
                extra_up.push(vec![id]);
            }
        }
        let individuals: Vec<IndividualName> = abox.individuals().into_iter().collect();
        let n = individuals.len();
        let universe = names.len();
        let mut sat = Saturation {
            rules,
            names,
            name_id,
            roles,
            role_id,
            extra_up,
            kinds: (0..n).map(NodeKind::Named).collect(),
            labels: vec![FixedBitSet::with_capacity(universe); n],
            succ: vec![Vec::new(); n],
            preds: vec![Vec::new(); n],
            individuals,
            edges: HashSet::new(),
            aux: HashMap::new(),
            why: HashMap::new(),
            edge_why: HashMap::new(),
            queue: VecDeque::new(),
        };
        let ind_id: HashMap<&IndividualName, usize> = sat.individuals.iter().enumerate().map(|(i, a)| (a, i)).collect();
        let ind_id: HashMap<IndividualName, usize> = ind_id.into_iter().map(|(a, i)| (a.clone(), i)).collect();
        for a in abox.assertions() {
            match a {
                Assertion::Concept(Some(c), i) => {
                    let x = sat.name_id[c];
                    sat.add_label(ind_id[i], x, Why::Asserted);
                }
                Assertion::Concept(None, _) => {}
                Assertion::Role(r, x, y) => {
                    let t = sat.role_id[r];
                    sat.add_edge(ind_id[x], t, ind_id[y], EdgeWhy::Asserted);
                }
            }
        }
        sat.saturate();
        sat
    }

    fn role_up(&self, t: u32) -> &[u32] {
        let nr = self.rules.nr();
        if (t as usize) < nr {
            &self.rules.role_up[t as usize]
        } else {
            &self.extra_up[t as usize - nr]
        }
    }

    fn add_label(&mut self, n: usize, x: u32, why: Why) {
        if !self.labels[n].put(x as usize) {
            self.why.insert((n, x), why);
            self.queue.push_back(Task::Label(n, x));
        }
    }

    fn add_edge(&mut self, n: usize, t: u32, m: usize, why: EdgeWhy) {
        if self.edges.insert((n, t, m)) {
            self.succ[n].push((t, m));
            self.preds[m].push((t, n));
            self.edge_why.insert((n, t, m), why);
            self.queue.push_back(Task::Edge(n, t, m));
        }
    }

    fn aux_node(&mut self, role: u32, filler: Option<u32>) -> usize {
        if let Some(&m) = self.aux.get(&(role, filler)) {
            return m;
        }
        let m = self.kinds.len();
        self.kinds.push(NodeKind::Aux(role, filler));
        self.labels.push(FixedBitSet::with_capacity(self.names.len()));
        self.succ.push(Vec::new());
        self.preds.push(Vec::new());
        self.aux.insert((role, filler), m);
        if let Some(b) = filler {
            self.add_label(m, b, Why::AuxInit);
        }
        m
    }

    fn exists_edge(&mut self, n: usize, (role, filler): (u32, Option<u32>), why: EdgeWhy) {
        let m = self.aux_node(role, filler);
        self.add_edge(n, role, m, why);
    }

    fn saturate(&mut self) {
        let rules = self.rules;
        let nc = rules.nc() as u32;
        while let Some(task) = self.queue.pop_front() {
            match task {
                Task::Label(n, x) => {
                    if x >= nc {
                        continue;
                    }
                    for &b in &rules.told_supers[x as usize] {
                        self.add_label(n, b, Why::Super(x));
                    }
                    for &e in &rules.told_exists[x as usize] {
                        self.exists_edge(n, e, EdgeWhy::Label(x));
                    }
                    for &def in &rules.conj_by_member[x as usize] {
                        let (y, ref members) = rules.conj_defs[def as usize];
                        if members.iter().all(|&m| self.labels[n].contains(m as usize)) {
                            self.add_label(n, y, Why::Conj(def));
                        }
                    }
                    for &def in &rules.exist_by_filler[x as usize] {
                        let (y, s, _) = rules.exist_defs[def as usize];
                        let preds: Vec<(u32, usize)> = self.preds[n].clone();
                        for (t, p) in preds {
                            if self.role_up(t).contains(&s) {
                                self.add_label(p, y, Why::Exist(def, t, n));
                            }
                        }
                    }
                }
                Task::Edge(n, t, m) => {
                    let ups: Vec<u32> = self.role_up(t).iter().copied().filter(|&s| (s as usize) < rules.nr()).collect();
                    for s in ups {
                        let s = s as usize;
                        for &b in &rules.dom_supers[s] {
                            self.add_label(n, b, Why::Dom(t, m));
                        }
                        for &e in &rules.dom_exists[s] {
                            self.exists_edge(n, e, EdgeWhy::Dom(t, m));
                        }
                        for &b in &rules.ran_supers[s] {
                            self.add_label(m, b, Why::Ran(t, n));
                        }
                        for &e in &rules.ran_exists[s] {
                            self.exists_edge(m, e, EdgeWhy::Ran(t, n));
                        }
                        for &def in &rules.exist_by_role[s] {
                            let (y, _, f) = rules.exist_defs[def as usize];
                            if f.is_none_or(|b| self.labels[m].contains(b as usize)) {
                                self.add_label(n, y, Why::Exist(def, t, m));
                            }
                        }
                    }
                }
            }
        }
    }

    pub fn rules(&self) -> &'r Rules {
        self.rules
    }

    pub fn name_id(&self, a: &ConceptName) -> Option<u32> {
        self.name_id.get(a).copied()
    }

    pub fn individual_node(&self, a: &IndividualName) -> Option<usize> {
        self.individuals.binary_search(a).ok()
    }

    pub fn has_label(&self, n: usize, a: &ConceptName) -> bool {
        self.name_id(a).is_some_and(|x| self.labels[n].contains(x as usize))
    }

    /// Super-roles of `t` as names.
    pub fn role_names_up(&self, t: u32) -> Vec<RoleName> {
        let mut rs: Vec<RoleName> = self.role_up(t).iter().map(|&s| self.roles[s as usize].clone()).collect();
        rs.sort();
        rs
    }

    pub fn element(&self, n: usize) -> Element {
        match self.kinds[n] {
            NodeKind::Named(i) => Element::Named(self.individuals[i].clone()),
            NodeKind::Aux(r, f) => Element::Aux(
                self.roles[r as usize].clone(),
                f.map_or(Concept::Top, |b| Concept::Atom(self.names[b as usize].clone())),
            ),
        }
    }

    /// The saturated model as an interpretation.
    pub fn interpretation(&self) -> Interpretation {
        let elements: Vec<Element> = (0..self.kinds.len()).map(|n| self.element(n)).collect();
        let labels = self.labels.iter().map(|l| l.ones().map(|x| self.names[x].clone()).collect::<BTreeSet<_>>().into_iter().collect()).collect();
        let succ = self
            .succ
            .iter()
            .map(|edges| {
                let mut by_target: BTreeMap<usize, BTreeSet<RoleName>> = BTreeMap::new();
                for &(t, m) in edges {
                    by_target.entry(m).or_default().extend(self.role_names_up(t));
                }
                by_target.into_iter().map(|(m, rs)| (m, rs.into_iter().collect())).collect()
            })
            .collect();
        Interpretation::assemble(elements, labels, succ)
    }
}

/// Canonical model of `abox` under compiled rules.
pub(crate) fn build_canonical_with(rules: &Rules, abox: &Abox) -> Interpretation {
    Saturation::run(rules, abox).interpretation()
}

/// The canonical model `I_K`: named individuals plus the aux elements they
/// reach.
pub fn build_canonical(k: &KnowledgeBase, idx: &SubsumptionIndex) -> Interpretation {
    debug_assert_eq!(idx.source(), &k.terminology);
    build_canonical_with(&idx.rules, &k.abox)
}

/// Whether `K ⊨ C(a)` for `C` in C^{⊓,u} or C^ran.
pub fn instance_check(k: &KnowledgeBase, idx: &SubsumptionIndex, c: &Concept, a: &IndividualName) -> Result<bool> {
    if !(c.is_inter_u_family() || c.is_ran_family()) {
        return Err(Error::Family(format!("{c} is not an instance query")));
    }
    if !k.abox.has_individual(a) {
        return Err(Error::UnknownIndividual(a.clone()));
    }
    Ok(build_canonical(k, idx).eval_at(c, a))
}

/// Subconcepts of a terminology used to index aux elements.
fn sub_concepts(t: &NormalizedTerminology) -> BTreeSet<Concept> {
    let mut out = BTreeSet::from([Concept::Top]);
    for ax in t.terminology.axioms() {
        match ax {
            Axiom::SubAtom(a, _) | Axiom::EqAtom(a, _) => {
                out.insert(Concept::Atom(a.clone()));
            }
            Axiom::DomainRestr(r, _) => {
                out.insert(Concept::exists(r.clone(), Concept::Top));
            }
            _ => {}
        }
        if let Some(c) = ax.rhs() {
            out.extend(c.subconcepts());
        }
    }
    out
}

/// The full generating interpretation `W_K`, with every `x_{ran(r),D}` for
/// `r ∈ rol(T)` and `D ∈ sub(T)`. Quadratic in `T`; meant for small inputs.
pub fn build_generating(k: &KnowledgeBase, idx: &SubsumptionIndex) -> Interpretation {
    let rules = &idx.rules;
    let t = &k.terminology;
    let roles: Vec<RoleName> = rules.roles.clone();
    let subs: Vec<Concept> = sub_concepts(t).into_iter().collect();
    let named = build_canonical(k, idx);
    let individuals: Vec<IndividualName> = k.abox.individuals().into_iter().collect();

    let mut elements: Vec<Element> = individuals.iter().cloned().map(Element::Named).collect();
    let mut labels: Vec<BTreeSet<ConceptName>> =
        individuals.iter().map(|a| named.labels(named.individual(a).unwrap()).iter().cloned().collect()).collect();
    // Model of ran(r) ⊓ D, per aux element.
    let mut aux_models = Vec::new();
    for r in &roles {
        for d in &subs {
            let c = Concept::conj([Concept::Ran(r.clone()), d.clone()]);
            let (abox, root) = concept_to_abox(&c).expect("EL concept");
            let m = build_canonical_with(rules, &abox);
            let ri = m.individual(&root).unwrap();
            labels.push(m.labels(ri).iter().filter(|a| rules.concept_id.contains_key(*a)).cloned().collect());
            elements.push(Element::Aux(r.clone(), d.clone()));
            aux_models.push((m, root));
        }
    }
    let supers = |s: &RoleName| -> Vec<RoleName> { roles.iter().filter(|r| idx.role_entails(s, r)).cloned().collect() };
    let mut edges = Vec::new();
    let ind_pos: HashMap<&IndividualName, usize> = individuals.iter().enumerate().map(|(i, a)| (a, i)).collect();
    for a in k.abox.assertions() {
        if let Assertion::Role(s, x, y) = a {
            let mut ups = supers(s);
            if !rules.role_id.contains_key(s) {
                ups = vec![s.clone()];
            }
            for r in ups {
                edges.push((ind_pos[x], r, ind_pos[y]));
            }
        }
    }
    let n_named = individuals.len();
    for (si, s) in roles.iter().enumerate() {
        for (di, d) in subs.iter().enumerate() {
            let target = n_named + si * subs.len() + di;
            let ex = Concept::exists(s.clone(), d.clone());
            let ext = named.eval(&ex);
            for (i, a) in individuals.iter().enumerate() {
                if ext.contains(named.individual(a).unwrap()) {
                    for r in supers(s) {
                        edges.push((i, r, target));
                    }
                }
            }
            for (src, (m, root)) in aux_models.iter().enumerate() {
                if m.eval_at(&ex, root) {
                    for r in supers(s) {
                        edges.push((n_named + src, r, target));
                    }
                }
            }
        }
    }
    Interpretation::new(elements, labels, edges)
}

/// The ABox `A_C` of a C^ran concept and its root individual.
pub fn concept_to_abox(c: &Concept) -> Result<(Abox, IndividualName)> {
    if !c.is_ran_family() {
        return Err(Error::Family(format!("{c} is not a C^ran concept")));
    }
    let root = IndividualName::new("a_C");
    let ran = IndividualName::new("a_ran");
    let mut out = Vec::new();
    let mut counter = 0usize;
    let mut todo = vec![(root.clone(), c)];
    while let Some((ind, c)) = todo.pop() {
        if *c == Concept::Top {
            out.push(Assertion::top(ind.clone()));
        }
        for x in c.conjuncts() {
            match x {
                Concept::Atom(a) => out.push(Assertion::concept(a.clone(), ind.clone())),
                Concept::Ran(r) => out.push(Assertion::role(r.clone(), ran.clone(), ind.clone())),
                Concept::Exists(r, f) => {
                    counter += 1;
                    let next = IndividualName::new(format!("a_p{counter}"));
                    out.push(Assertion::role(r.clone(), ind.clone(), next.clone()));
                    todo.push((next, f));
                }
                other => unreachable!("{other:?} outside C^ran"),
            }
        }
    }
    Ok((Abox::new(out)?, root))
}

/// `C^{n,ran}_{A,a}`.
pub fn abox_neighborhood_concept(abox: &Abox, a: &IndividualName, n: usize) -> Result<Concept> {
    if !abox.has_individual(a) {
        return Err(Error::UnknownIndividual(a.clone()));
    }
    let mut base: BTreeMap<&IndividualName, Vec<Concept>> = BTreeMap::new();
    let mut out_edges: BTreeMap<&IndividualName, Vec<(&RoleName, &IndividualName)>> = BTreeMap::new();
    for x in abox.assertions() {
        match x {
            Assertion::Concept(Some(c), i) => base.entry(i).or_default().push(Concept::Atom(c.clone())),
            Assertion::Concept(None, _) => {}
            Assertion::Role(r, p, q) => {
                base.entry(q).or_default().push(Concept::Ran(r.clone()));
                out_edges.entry(p).or_default().push((r, q));
            }
        }
    }
    let mut memo: HashMap<(&IndividualName, usize), Concept> = HashMap::new();
    fn go<'a>(
        i: &'a IndividualName,
        n: usize,
        base: &BTreeMap<&'a IndividualName, Vec<Concept>>,
        out: &BTreeMap<&'a IndividualName, Vec<(&'a RoleName, &'a IndividualName)>>,
        memo: &mut HashMap<(&'a IndividualName, usize), Concept>,
    ) -> Concept {
        if let Some(c) = memo.get(&(i, n)) {
            return c.clone();
        }
        let mut parts = base.get(i).cloned().unwrap_or_default();
        if n > 0 {
            for &(r, j) in out.get(i).map(Vec::as_slice).unwrap_or(&[]) {
                parts.push(Concept::exists(r.clone(), go(j, n - 1, base, out, memo)));
            }
        }
        let c = Concept::conj(parts);
        memo.insert((i, n), c.clone());
        c
    }
    Ok(go(a, n, &base, &out_edges, &mut memo))
}
