//! Example inclusions for rhs and lhs witnesses.

use std::collections::HashMap;

use crate::canonical::{EdgeWhy, NodeKind, Saturation, Why};
use crate::error::{Error, Result};
use crate::model::{Concept, ConceptName};
use crate::reasoner::SubsumptionIndex;
use crate::simulation::prune;
use crate::syntax::render_concept;

use super::Inclusion;

/// Upper bound on nodes built while unfolding a derivation.
const EXPLAIN_BUDGET: usize = 20_000;
/// Largest rhs example handed to greedy pruning.
const RHS_PRUNE_LIMIT: usize = 600;

/// Unfolds recorded first derivations of labels at named nodes into concepts.
pub(crate) struct Explainer<'s, 'r> {
    sat: &'s Saturation<'r>,
    memo: HashMap<(usize, u32), Concept>,
    budget: usize,
}

impl<'s, 'r> Explainer<'s, 'r> {
    pub fn new(sat: &'s Saturation<'r>) -> Self {
        Explainer { sat, memo: HashMap::new(), budget: EXPLAIN_BUDGET }
    }

    fn named(&self, m: usize) -> bool {
        matches!(self.sat.kinds[m], NodeKind::Named(_))
    }

    fn charge(&mut self, c: Concept) -> Option<Concept> {
        let size = c.size();
        if size > self.budget {
            return None;
        }
        self.budget -= size;
        Some(c)
    }

    /// A concept true at `n` in the ABox that makes `T1` derive label `x` at `n`.
    pub fn label(&mut self, n: usize, x: u32) -> Option<Concept> {
        if let Some(c) = self.memo.get(&(n, x)) {
            return Some(c.clone());
        }
        let sat = self.sat;
        let c = match *sat.why.get(&(n, x))? {
            Why::Asserted => Concept::Atom(sat.names[x as usize].clone()),
            Why::AuxInit => return None,
            Why::Super(y) => self.label(n, y)?,
            Why::Conj(def) => {
                let (_, members) = &sat.rules().conj_defs[def as usize];
                let mut parts = Vec::with_capacity(members.len());
                for &m in members {
                    parts.push(self.label(n, m)?);
                }
                Concept::conj(parts)
            }
            Why::Exist(def, t, m) => {
                if self.named(m) {
                    let filler = match sat.rules().exist_defs[def as usize].2 {
                        Some(f) => self.label(m, f)?,
                        None => Concept::Top,
                    };
                    Concept::exists(sat.roles[t as usize].clone(), filler)
                } else {
                    self.edge(n, t, m)?
                }
            }
            Why::Dom(t, m) => {
                if self.named(m) {
                    Concept::exists(sat.roles[t as usize].clone(), Concept::Top)
                } else {
                    self.edge(n, t, m)?
                }
            }
            Why::Ran(t, _) => Concept::ran(sat.roles[t as usize].clone()),
        };
        let c = self.charge(c)?;
        self.memo.insert((n, x), c.clone());
        Some(c)
    }

    /// A concept true at `n` that makes `T1` derive the edge `(n, t, m)`.
    fn edge(&mut self, n: usize, t: u32, m: usize) -> Option<Concept> {
        let sat = self.sat;
        match *sat.edge_why.get(&(n, t, m))? {
            EdgeWhy::Asserted => Some(Concept::exists(sat.roles[t as usize].clone(), Concept::Top)),
            EdgeWhy::Label(x) => self.label(n, x),
            EdgeWhy::Dom(t2, m2) => {
                if self.named(m2) {
                    Some(Concept::exists(sat.roles[t2 as usize].clone(), Concept::Top))
                } else {
                    self.edge(n, t2, m2)
                }
            }
            EdgeWhy::Ran(t2, _) => Some(Concept::ran(sat.roles[t2 as usize].clone())),
        }
    }
}

/// Removes `ran(s)` conjuncts sitting directly below `∃s`.
pub(crate) fn strip_redundant_ran(c: &Concept) -> Concept {
    fn inner(c: &Concept, under: Option<&crate::model::RoleName>) -> Concept {
        Concept::conj(c.conjuncts().iter().filter_map(|x| match x {
            Concept::Ran(r) if Some(r) == under => None,
            Concept::Exists(r, f) => Some(Concept::exists(r.clone(), inner(f, Some(r)))),
            other => Some(other.clone()),
        }))
    }
    inner(c, None)
}

fn separates(idx1: &SubsumptionIndex, idx2: &SubsumptionIndex, c: &Concept, d: &Concept) -> Result<bool> {
    Ok(idx1.entails(c, d)? && !idx2.entails(c, d)?)
}

/// Prunes and verifies a raw rhs example `raw ⊑ a`; `None` on overflow.
pub(crate) fn finish_rhs(idx1: &SubsumptionIndex, idx2: &SubsumptionIndex, raw: Concept, a: &ConceptName, cap: usize) -> Result<Option<Inclusion>> {
    let rhs = Concept::Atom(a.clone());
    if !separates(idx1, idx2, &raw, &rhs)? {
        return Err(Error::Verification(format!("{} ⊑ {a}", render_concept(&raw))));
    }
    if raw.size() > RHS_PRUNE_LIMIT {
        return Ok(None);
    }
    let c = prune(raw, &|c| separates(idx1, idx2, c, &rhs).unwrap_or(false));
    if c.size() > cap {
        return Ok(None);
    }
    Ok(Some(Inclusion { lhs: c, rhs }))
}

/// Verifies a lhs example `lhs ⊑ d` built from a simulation failure.
pub(crate) fn verify_lhs(idx1: &SubsumptionIndex, idx2: &SubsumptionIndex, lhs: Concept, d: Concept) -> Result<Inclusion> {
    if !separates(idx1, idx2, &lhs, &d)? {
        return Err(Error::Verification(format!("{} ⊑ {}", render_concept(&lhs), render_concept(&d))));
    }
    Ok(Inclusion { lhs, rhs: d })
}
