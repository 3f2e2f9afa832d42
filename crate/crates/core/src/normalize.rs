//! Conversion of terminologies into normal form.
//!
//! A normalized terminology contains only axioms `A ≡ ∃r.B`, `A ≡ F`,
//! `E ⊑ ∃r.B`, `E ⊑ ∃r.⊤`, `E ⊑ F` and role inclusions, where `E` is a concept
//! name, `∃s.⊤` or `ran(s)`, and `F` is a conjunction of concept names that are
//! all non-conjunctive.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use crate::model::{Axiom, Concept, ConceptName, RoleName, Signed, Terminology, FRESH_PREFIX};

/// A normalized terminology with its fresh-name registry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalizedTerminology {
    pub terminology: Terminology,
    /// Names introduced by normalization.
    pub fresh: BTreeSet<ConceptName>,
    /// The subconcept each fresh name abbreviates.
    pub origin: BTreeMap<ConceptName, Concept>,
}

impl NormalizedTerminology {
    pub fn is_fresh(&self, a: &ConceptName) -> bool {
        self.fresh.contains(a)
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
enum Lhs {
    Sub(ConceptName),
    Eq(ConceptName),
    Dom(RoleName),
    Ran(RoleName),
}

struct Normalizer {
    taken: BTreeSet<ConceptName>,
    counter: usize,
    by_concept: HashMap<Concept, ConceptName>,
    fresh: BTreeSet<ConceptName>,
    origin: BTreeMap<ConceptName, Concept>,
    /// Fresh definitions in creation order.
    defs: Vec<(ConceptName, Concept)>,
}

impl Normalizer {
    fn fresh_for(&mut self, c: &Concept) -> ConceptName {
        if let Some(n) = self.by_concept.get(c) {
            return n.clone();
        }
        let name = loop {
            self.counter += 1;
            let candidate = ConceptName::new(format!("{FRESH_PREFIX}{}", self.counter));
            if !self.taken.contains(&candidate) {
                break candidate;
            }
        };
        self.by_concept.insert(c.clone(), name.clone());
        self.fresh.insert(name.clone());
        self.origin.insert(name.clone(), c.clone());
        self.defs.push((name.clone(), c.clone()));
        name
    }

    /// Replaces every compound filler under `∃` with a fresh name.
    fn flatten(&mut self, c: &Concept) -> Concept {
        match c {
            Concept::Exists(r, d) => {
                let d = self.flatten(d);
                match d {
                    Concept::Atom(_) | Concept::Top => Concept::exists(r.clone(), d),
                    other => Concept::exists(r.clone(), Concept::Atom(self.fresh_for(&other))),
                }
            }
            Concept::Conj(cs) => Concept::conj(cs.iter().map(|x| self.flatten(x))),
            other => other.clone(),
        }
    }

    /// Splits existential conjuncts off a mixed right-hand side.
    fn split(&mut self, c: Concept) -> Concept {
        let parts = c.conjuncts();
        let names = parts.iter().filter(|x| matches!(x, Concept::Atom(_))).count();
        let exists = parts.len() - names;
        if names == 0 && exists <= 1 {
            return c;
        }
        let parts = parts.to_vec();
        Concept::conj(parts.into_iter().map(|x| match x {
            Concept::Exists(..) => Concept::Atom(self.fresh_for(&x)),
            other => other,
        }))
    }
}

/// Post-order over a dependency graph given as adjacency lists; `None` on a
/// cycle. Nodes are visited in ascending index order.
fn post_order(adj: &[Vec<usize>]) -> Option<Vec<usize>> {
    let n = adj.len();
    let mut state = vec![0u8; n];
    let mut order = Vec::with_capacity(n);
    for root in 0..n {
        if state[root] != 0 {
            continue;
        }
        state[root] = 1;
        let mut stack = vec![(root, 0usize)];
        while let Some((v, i)) = stack.last_mut() {
            if let Some(&w) = adj[*v].get(*i) {
                *i += 1;
                match state[w] {
                    0 => {
                        state[w] = 1;
                        stack.push((w, 0));
                    }
                    1 => return None,
                    _ => {}
                }
            } else {
                state[*v] = 2;
                order.push(*v);
                stack.pop();
            }
        }
    }
    Some(order)
}

/// Strongly connected components (Tarjan, iterative).
fn sccs(adj: &[Vec<usize>]) -> Vec<usize> {
    let n = adj.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![usize::MAX; n];
    let mut stack = Vec::new();
    let (mut next_index, mut next_comp) = (0, 0);
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        let mut work = vec![(root, 0usize)];
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut i)) = work.last_mut() {
            if let Some(&w) = adj[v].get(*i) {
                *i += 1;
                if index[w] == usize::MAX {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    work.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                work.pop();
                if let Some(&(parent, _)) = work.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w] = false;
                        comp[w] = next_comp;
                        if w == v {
                            break;
                        }
                    }
                    next_comp += 1;
                }
            }
        }
    }
    comp
}

fn names_of(c: &Concept) -> Option<Vec<ConceptName>> {
    c.conjuncts()
        .iter()
        .map(|x| match x {
            Concept::Atom(a) => Some(a.clone()),
            _ => None,
        })
        .collect()
}

/// Breaks cycles through conjunctive definitions.
fn break_cycles(axioms: &mut BTreeMap<Lhs, Concept>) {
    loop {
        let conj: BTreeMap<ConceptName, Vec<ConceptName>> = axioms
            .iter()
            .filter_map(|(l, c)| match l {
                Lhs::Eq(a) => names_of(c).map(|ns| (a.clone(), ns)),
                _ => None,
            })
            .collect();
        let names: Vec<&ConceptName> = conj.keys().collect();
        let id: HashMap<&ConceptName, usize> = names.iter().enumerate().map(|(i, n)| (*n, i)).collect();
        let adj: Vec<Vec<usize>> =
            names.iter().map(|a| conj[*a].iter().filter_map(|b| id.get(b).copied()).collect()).collect();
        let comp = sccs(&adj);
        let mut size = vec![0usize; names.len()];
        comp.iter().for_each(|&c| size[c] += 1);
        let cyclic = |v: usize| size[comp[v]] > 1 || adj[v].contains(&v);
        // `names` is sorted, so the first cyclic node is the smallest name of its component.
        let Some(rep) = (0..names.len()).find(|&v| cyclic(v)) else { return };
        // Shortest definitional path from `rep` back to itself.
        let mut parent: Vec<Option<usize>> = vec![None; names.len()];
        let mut queue = VecDeque::from([rep]);
        let mut last = None;
        'bfs: while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if w == rep {
                    last = Some(v);
                    break 'bfs;
                }
                if parent[w].is_none() {
                    parent[w] = Some(v);
                    queue.push_back(w);
                }
            }
        }
        let mut path = vec![last.expect("cyclic node lies on a cycle")];
        while let Some(&v) = path.last() {
            if v == rep {
                break;
            }
            path.push(parent[v].expect("path leads back to the representative"));
        }
        path.reverse();
        // Unfold each path node into its successor's definition and drop `rep` at the end.
        let mut kept: BTreeSet<ConceptName> = BTreeSet::new();
        for (i, &v) in path.iter().enumerate() {
            let skip = path.get(i + 1).copied().unwrap_or(rep);
            let mut skipped = false;
            for b in &conj[names[v]] {
                if !skipped && id.get(b) == Some(&skip) {
                    skipped = true;
                } else {
                    kept.insert(b.clone());
                }
            }
        }
        kept.remove(names[rep]);
        let a = names[rep].clone();
        axioms.remove(&Lhs::Eq(a.clone()));
        if !kept.is_empty() {
            axioms.insert(Lhs::Sub(a), Concept::conj(kept.into_iter().map(Concept::Atom)));
        }
    }
}

/// Replaces conjunctive names inside name conjunctions by their expansions.
fn substitute(axioms: &mut BTreeMap<Lhs, Concept>) {
    let conj: BTreeMap<ConceptName, Vec<ConceptName>> = axioms
        .iter()
        .filter_map(|(l, c)| match l {
            Lhs::Eq(a) => names_of(c).map(|ns| (a.clone(), ns)),
            _ => None,
        })
        .collect();
    let names: Vec<&ConceptName> = conj.keys().collect();
    let id: HashMap<&ConceptName, usize> = names.iter().enumerate().map(|(i, n)| (*n, i)).collect();
    let adj: Vec<Vec<usize>> = names.iter().map(|a| conj[*a].iter().filter_map(|b| id.get(b).copied()).collect()).collect();
    let order = post_order(&adj).expect("conjunctive definitions are acyclic after cycle breaking");
    let mut expansion: Vec<BTreeSet<ConceptName>> = vec![BTreeSet::new(); names.len()];
    for v in order {
        let mut set = BTreeSet::new();
        for b in &conj[names[v]] {
            match id.get(b) {
                Some(&w) => set.extend(expansion[w].iter().cloned()),
                None => {
                    set.insert(b.clone());
                }
            }
        }
        expansion[v] = set;
    }
    for c in axioms.values_mut() {
        if let Some(ns) = names_of(c) {
            let mut set = BTreeSet::new();
            for b in ns {
                match id.get(&b) {
                    Some(&w) => set.extend(expansion[w].iter().cloned()),
                    None => {
                        set.insert(b);
                    }
                }
            }
            *c = Concept::conj(set.into_iter().map(Concept::Atom));
        }
    }
}

/// Normalizes a terminology.
pub fn normalize(t: &Terminology) -> NormalizedTerminology {
    let mut nz = Normalizer {
        taken: t.signature().concept_names,
        counter: 0,
        by_concept: HashMap::new(),
        fresh: BTreeSet::new(),
        origin: BTreeMap::new(),
        defs: Vec::new(),
    };
    let mut roles = Vec::new();
    let mut stage: Vec<(Lhs, Concept)> = Vec::new();
    for ax in t.axioms() {
        let (lhs, rhs) = match ax {
            Axiom::SubAtom(a, c) => (Lhs::Sub(a.clone()), c),
            Axiom::EqAtom(a, c) => (Lhs::Eq(a.clone()), c),
            Axiom::DomainRestr(r, c) => (Lhs::Dom(r.clone()), c),
            Axiom::RangeRestr(r, c) => (Lhs::Ran(r.clone()), c),
            Axiom::RoleIncl(r, s) => {
                roles.push(Axiom::RoleIncl(r.clone(), s.clone()));
                continue;
            }
        };
        stage.push((lhs, nz.flatten(rhs)));
    }
    // Fresh definitions from step one are flattened already; they join the stage.
    let step1_defs = std::mem::take(&mut nz.defs);
    stage.extend(step1_defs.into_iter().map(|(n, c)| (Lhs::Eq(n), c)));

    // Domain and range axioms may share a left-hand side, so they are merged by conjunction.
    let mut split: Vec<(Lhs, Concept)> = stage.into_iter().map(|(l, c)| (l, nz.split(c))).collect();
    split.extend(std::mem::take(&mut nz.defs).into_iter().map(|(n, c)| (Lhs::Eq(n), c)));

    let mut axioms: BTreeMap<Lhs, Concept> = BTreeMap::new();
    let mut extra: Vec<Axiom> = Vec::new();
    for (lhs, c) in split {
        match (&lhs, &c) {
            (Lhs::Eq(a), Concept::Exists(r, f)) if **f == Concept::Top => {
                axioms.insert(Lhs::Sub(a.clone()), c.clone());
                extra.push(Axiom::DomainRestr(r.clone(), Concept::Atom(a.clone())));
            }
            (Lhs::Dom(_) | Lhs::Ran(_), _) => extra.push(match lhs {
                Lhs::Dom(r) => Axiom::DomainRestr(r, c),
                Lhs::Ran(r) => Axiom::RangeRestr(r, c),
                _ => unreachable!(),
            }),
            _ => {
                axioms.insert(lhs, c);
            }
        }
    }
    // Domain/range axioms take part in substitution under indexed keys.
    let mut side: BTreeMap<Lhs, Concept> = BTreeMap::new();
    let mut side_axioms = Vec::new();
    for (i, ax) in extra.into_iter().enumerate() {
        let key = Lhs::Sub(ConceptName::new(format!("@side{i}")));
        match ax {
            Axiom::DomainRestr(r, c) => {
                side.insert(key.clone(), c);
                side_axioms.push((key, Lhs::Dom(r)));
            }
            Axiom::RangeRestr(r, c) => {
                side.insert(key.clone(), c);
                side_axioms.push((key, Lhs::Ran(r)));
            }
            _ => unreachable!(),
        }
    }

    break_cycles(&mut axioms);
    let n_main = axioms.len();
    axioms.extend(side);
    substitute(&mut axioms);
    debug_assert!(axioms.len() >= n_main);

    let mut out = roles;
    for (key, target) in side_axioms {
        let c = axioms.remove(&key).expect("side axiom present");
        out.push(match target {
            Lhs::Dom(r) => Axiom::DomainRestr(r, c),
            Lhs::Ran(r) => Axiom::RangeRestr(r, c),
            _ => unreachable!(),
        });
    }
    for (lhs, c) in axioms {
        out.push(match lhs {
            Lhs::Sub(a) => Axiom::SubAtom(a, c),
            Lhs::Eq(a) => Axiom::EqAtom(a, c),
            _ => unreachable!(),
        });
    }
    let terminology = Terminology::new(out).expect("normalization preserves the terminology invariants");
    NormalizedTerminology { terminology, fresh: nz.fresh, origin: nz.origin }
}

/// Checks the normalized axiom shapes.
pub fn is_normalized(t: &Terminology) -> bool {
    let non_conj_name = |c: &Concept| match c {
        Concept::Atom(a) => !t.is_conjunctive(a),
        _ => false,
    };
    let names_ok = |c: &Concept| !c.conjuncts().is_empty() && c.conjuncts().iter().all(non_conj_name);
    let exists_ok = |c: &Concept, allow_top: bool| match c {
        Concept::Exists(_, f) => matches!(**f, Concept::Atom(_)) || (allow_top && **f == Concept::Top),
        _ => false,
    };
    t.axioms().iter().all(|ax| match ax {
        Axiom::EqAtom(_, c) => exists_ok(c, false) || names_ok(c),
        Axiom::SubAtom(_, c) | Axiom::DomainRestr(_, c) | Axiom::RangeRestr(_, c) => exists_ok(c, true) || names_ok(c),
        Axiom::RoleIncl(..) => true,
    })
}
