//! Small hand-built inputs with known witness sets.

use std::collections::BTreeSet;

use eldiff::canonical::instance_check;
use eldiff::diff::{
    build_witness_abox, generate_rhs_example, noimply_cover, prepare, role_splitting_unfold, sigma_individual, xi_individual, AboxVariant,
    NotWitnessTable, NwVariant, Xi,
};
use eldiff::reasoner::entails_subsumption;
use eldiff::{
    compute_diff, normalize, Abox, Assertion, Axiom, Concept, ConceptName, Direction, IndividualName, KnowledgeBase, Mode, Signature, Terminology,
};

use super::{ensure, mode_report, opts};

fn names<const N: usize>(xs: [&str; N]) -> BTreeSet<ConceptName> {
    xs.into_iter().map(ConceptName::new).collect()
}

fn sub(a: &str, c: Concept) -> Axiom {
    Axiom::SubAtom(a.into(), c)
}

fn eq(a: &str, c: Concept) -> Axiom {
    Axiom::EqAtom(a.into(), c)
}

fn atom(a: &str) -> Concept {
    Concept::atom(a)
}

fn ex(r: &str, c: Concept) -> Concept {
    Concept::exists(r, c)
}

fn tbox(axioms: impl IntoIterator<Item = Axiom>) -> Terminology {
    Terminology::new(axioms).expect("valid terminology")
}

fn sig<const N: usize, const M: usize>(c: [&str; N], r: [&str; M]) -> Signature {
    Signature::new(c, r).expect("valid signature")
}

fn abox(xs: impl IntoIterator<Item = Assertion>) -> Abox {
    Abox::new(xs).expect("non-empty")
}

/// `ran(r) ⊑ A1, ran(s) ⊑ A2, B ≡ A1 ⊓ A2` against the empty terminology.
pub fn range_pair() -> (Terminology, Terminology, Signature) {
    let t1 = tbox([
        Axiom::RangeRestr("r".into(), atom("A1")),
        Axiom::RangeRestr("s".into(), atom("A2")),
        eq("B", Concept::conj([atom("A1"), atom("A2")])),
    ]);
    (t1, Terminology::empty(), sig(["B"], ["r", "s"]))
}

fn verifies(t1: &Terminology, t2: &Terminology, lhs: &Concept, rhs: &Concept) -> Result<bool, String> {
    let (n1, n2) = (normalize(t1), normalize(t2));
    let a = entails_subsumption(&n1, lhs, rhs).map_err(|e| e.to_string())?;
    let b = entails_subsumption(&n2, lhs, rhs).map_err(|e| e.to_string())?;
    Ok(a && !b)
}

/// Every mode of `dir` reports nothing.
fn all_empty(report: &eldiff::WitnessReport, dir: Direction) -> Result<(), String> {
    for mode in Mode::ALL {
        let m = mode_report(report, dir, mode)?;
        ensure(m.is_empty(), || format!("{} {} not empty: {:?}", dir.label(), mode.label(), m.keys()))?;
    }
    Ok(())
}

pub fn range_pair_diff() -> Result<(), String> {
    let (t1, t2, sigma) = range_pair();
    let report = compute_diff(&t1, &t2, Some(&sigma), &opts(true)).map_err(|e| e.to_string())?;
    all_empty(&report, Direction::Backward)?;
    let concept = mode_report(&report, Direction::Forward, Mode::Concept)?;
    ensure(concept.is_empty(), || format!("concept mode not empty: {:?}", concept.keys()))?;
    let expected_lhs = Concept::conj([Concept::ran("r"), Concept::ran("s")]);
    for mode in [Mode::Instance, Mode::Query] {
        let m = mode_report(&report, Direction::Forward, mode)?;
        ensure(m.rhs_wtn == names(["B"]), || format!("{} rhs = {:?}", mode.label(), m.rhs_wtn))?;
        ensure(m.keys().len() == 1, || format!("{} has extra witnesses: {:?}", mode.label(), m.keys()))?;
    }
    let inst = mode_report(&report, Direction::Forward, Mode::Instance)?;
    let inc = inst.examples.get(&eldiff::WitnessKey::Rhs("B".into())).ok_or("no instance example for B")?;
    ensure(inc.lhs == expected_lhs && inc.rhs == atom("B"), || format!("example {} ⊑ {}", inc.lhs, inc.rhs))?;
    ensure(verifies(&t1, &t2, &inc.lhs, &inc.rhs)?, || "example does not separate".into())
}

pub fn query_only_exists() -> Result<(), String> {
    let t1 = tbox([sub("A", ex("r", atom("B")))]);
    let t2 = Terminology::empty();
    let sigma = sig(["A", "B"], [] as [&str; 0]);
    let report = compute_diff(&t1, &t2, Some(&sigma), &opts(true)).map_err(|e| e.to_string())?;
    all_empty(&report, Direction::Backward)?;
    for mode in [Mode::Concept, Mode::Instance] {
        let m = mode_report(&report, Direction::Forward, mode)?;
        ensure(m.is_empty(), || format!("{} not empty: {:?}", mode.label(), m.keys()))?;
    }
    let q = mode_report(&report, Direction::Forward, Mode::Query)?;
    ensure(q.lhs_atomic == names(["A"]) && q.keys().len() == 1, || format!("query witnesses {:?}", q.keys()))?;
    let inc = q.examples.get(&eldiff::WitnessKey::LhsAtomic("A".into())).ok_or("no query example for A")?;
    let expected = Concept::exists_universal(atom("B"));
    ensure(inc.lhs == atom("A") && inc.rhs == expected, || format!("example {} ⊑ {}", inc.lhs, inc.rhs))?;
    ensure(verifies(&t1, &t2, &inc.lhs, &inc.rhs)?, || "example does not separate".into())
}

pub fn query_only_role_conjunction() -> Result<(), String> {
    let t1 = tbox([sub("A", ex("s", Concept::Top)), Axiom::RoleIncl("s".into(), "r1".into()), Axiom::RoleIncl("s".into(), "r2".into())]);
    let t2 = tbox([sub("A", Concept::conj([ex("r1", Concept::Top), ex("r2", Concept::Top)]))]);
    let sigma = sig(["A"], ["r1", "r2"]);
    let report = compute_diff(&t1, &t2, Some(&sigma), &opts(true)).map_err(|e| e.to_string())?;
    all_empty(&report, Direction::Backward)?;
    for mode in [Mode::Concept, Mode::Instance] {
        let m = mode_report(&report, Direction::Forward, mode)?;
        ensure(m.is_empty(), || format!("{} not empty: {:?}", mode.label(), m.keys()))?;
    }
    let q = mode_report(&report, Direction::Forward, Mode::Query)?;
    ensure(q.role_wtn.is_empty(), || format!("role witnesses {:?}", q.role_wtn))?;
    ensure(q.lhs_atomic == names(["A"]) && q.keys().len() == 1, || format!("query witnesses {:?}", q.keys()))?;
    let inc = q.examples.get(&eldiff::WitnessKey::LhsAtomic("A".into())).ok_or("no query example for A")?;
    let expected = Concept::exists_roles(["r1", "r2"], Concept::Top);
    ensure(inc.lhs == atom("A") && inc.rhs == expected, || format!("example {} ⊑ {}", inc.lhs, inc.rhs))?;
    ensure(verifies(&t1, &t2, &inc.lhs, &inc.rhs)?, || "example does not separate".into())
}

/// `B_{i+1} ≡ ∃r.B_i ⊓ ∃s.B_i` against a tree of `F_i ⊑ ∃r.F_{i+1} ⊓ ∃s.F_{i+1}`.
pub fn binary_tree_pair(n: usize) -> (Terminology, Terminology, Signature) {
    let b = |i: usize| format!("B{i}");
    let f = |i: usize| format!("F{i}");
    let mut a1 = vec![sub("A0", atom("B0")), eq("A1", atom(&b(n)))];
    let mut a2 = vec![sub("A1", atom("F0"))];
    for i in 0..n {
        a1.push(eq(&b(i + 1), Concept::conj([ex("r", atom(&b(i))), ex("s", atom(&b(i)))])));
        a2.push(sub(&f(i), Concept::conj([ex("r", atom(&f(i + 1))), ex("s", atom(&f(i + 1)))])));
    }
    (tbox(a1), tbox(a2), sig(["A0", "A1"], ["r", "s"]))
}

/// `C_0 = A0`, `C_{i+1} = ∃r.C_i ⊓ ∃s.C_i`.
pub fn binary_tree_concept(n: usize) -> Concept {
    (0..n).fold(atom("A0"), |c, _| Concept::conj([ex("r", c.clone()), ex("s", c)]))
}

pub fn binary_tree(n: usize) -> Result<(), String> {
    let (t1, t2, sigma) = binary_tree_pair(n);
    let report = compute_diff(&t1, &t2, Some(&sigma), &opts(false)).map_err(|e| e.to_string())?;
    let c = mode_report(&report, Direction::Forward, Mode::Concept)?;
    ensure(c.rhs_wtn == names(["A1"]), || format!("concept rhs = {:?}", c.rhs_wtn))?;
    let (i1, i2) = (prepare(&t1), prepare(&t2));
    let inc = generate_rhs_example(&i1, &i2, &sigma, &"A1".into(), Mode::Concept, 10_000)
        .map_err(|e| e.to_string())?
        .ok_or("no example for A1")?;
    let expected = binary_tree_concept(n);
    ensure(inc.lhs == expected && inc.rhs == atom("A1"), || format!("example {} ⊑ {}", inc.lhs, inc.rhs))?;
    ensure(inc.lhs.role_depth() == n, || format!("role depth {}", inc.lhs.role_depth()))?;
    ensure(verifies(&t1, &t2, &inc.lhs, &inc.rhs)?, || "example does not separate".into())
}

pub fn binary_tree_table() -> Result<(), String> {
    let (t1, t2, sigma) = binary_tree_pair(2);
    let (i1, i2) = (prepare(&t1), prepare(&t2));
    let table = NotWitnessTable::compute(&i1, &i2, &sigma, NwVariant::El).map_err(|e| e.to_string())?;
    let a0 = BTreeSet::from([Xi::Name("A0".into())]);
    for x in t1.signature_names() {
        let got = table.get(&x).unwrap_or_default();
        let want = if x.as_str() == "A0" || x.as_str() == "B0" { a0.clone() } else { BTreeSet::new() };
        ensure(got == want, || format!("NotWitness({x}) = {got:?}, expected {want:?}"))?;
    }
    ensure(!table.contains(&"A1".into(), &"A1".into()), || "A1 ∈ NotWitness(A1)".into())
}

trait SignatureNames {
    fn signature_names(&self) -> Vec<ConceptName>;
}

impl SignatureNames for Terminology {
    fn signature_names(&self) -> Vec<ConceptName> {
        use eldiff::model::Signed;
        self.signature().concept_names.into_iter().collect()
    }
}

pub fn lhs_nested() -> Result<(), String> {
    let t1 = tbox([
        sub("A", ex("r", atom("F0"))),
        sub("F0", Concept::conj([atom("F1"), atom("F2")])),
        sub("F1", ex("r", atom("B1"))),
        sub("F2", ex("r", atom("B2"))),
    ]);
    let t2 = tbox([
        sub("A", Concept::conj([atom("G1"), atom("G2")])),
        sub("G1", ex("r", atom("H1"))),
        sub("G2", ex("r", atom("H2"))),
        sub("H1", ex("r", atom("B1"))),
        sub("H2", ex("r", atom("B2"))),
    ]);
    let sigma = sig(["A", "B1", "B2"], ["r"]);
    let report = compute_diff(&t1, &t2, Some(&sigma), &opts(true)).map_err(|e| e.to_string())?;
    let c = mode_report(&report, Direction::Forward, Mode::Concept)?;
    ensure(c.lhs_atomic == names(["A"]), || format!("concept lhs = {:?}", c.lhs_atomic))?;
    let inc = c.examples.get(&eldiff::WitnessKey::LhsAtomic("A".into())).ok_or("no example for A")?;
    let expected = ex("r", Concept::conj([ex("r", atom("B1")), ex("r", atom("B2"))]));
    ensure(inc.lhs == atom("A") && inc.rhs == expected, || format!("example {} ⊑ {}", inc.lhs, inc.rhs))?;
    ensure(verifies(&t1, &t2, &inc.lhs, &inc.rhs)?, || "example does not separate".into())
}

fn cover_is(t2: &Terminology, sigma: &Signature, a: &str, n: usize, want: &[Concept]) -> Result<(), String> {
    let got = noimply_cover(&prepare(t2), sigma, &a.into(), n);
    let want: BTreeSet<Concept> = want.iter().cloned().collect();
    ensure(got == want, || format!("noimply^{n}({a}) = {got:?}, expected {want:?}"))
}

pub fn noimply_covers() -> Result<(), String> {
    let ab = Concept::conj([atom("A"), atom("B")]);
    let s = sig(["A", "B"], ["r"]);
    let empty = Terminology::empty();
    cover_is(&empty, &s, "A", 0, &[atom("B")])?;
    cover_is(&empty, &s, "B", 0, &[atom("A")])?;
    cover_is(&empty, &s, "A", 1, &[Concept::conj([atom("B"), ex("r", ab.clone())])])?;
    cover_is(&empty, &s, "B", 1, &[Concept::conj([atom("A"), ex("r", ab.clone())])])?;

    let cyc = tbox([eq("A", ex("r", atom("A")))]);
    cover_is(&cyc, &s, "A", 0, &[atom("B")])?;
    cover_is(&cyc, &s, "B", 0, &[atom("A")])?;
    cover_is(&cyc, &s, "B", 1, &[Concept::conj([atom("A"), ex("r", ab)])])?;
    cover_is(&cyc, &s, "A", 1, &[Concept::conj([atom("B"), ex("r", atom("B"))])])?;

    let conj = tbox([eq("A", Concept::conj([atom("B1"), atom("B2")]))]);
    let s3 = sig(["A", "B1", "B2"], [] as [&str; 0]);
    for n in 0..3 {
        cover_is(&conj, &s3, "B1", n, &[atom("B2")])?;
        cover_is(&conj, &s3, "B2", n, &[atom("B1")])?;
        cover_is(&conj, &s3, "A", n, &[atom("B1"), atom("B2")])?;
    }
    Ok(())
}

fn xi(b: &str) -> IndividualName {
    xi_individual(&b.into())
}

fn abox_is(t2: &Terminology, sigma: &Signature, variant: AboxVariant, want: Abox) -> Result<(), String> {
    let got = build_witness_abox(&prepare(t2), sigma, variant).map_err(|e| e.to_string())?;
    ensure(got == want, || format!("witness ABox {:?}, expected {:?}", got.assertions(), want.assertions()))
}

pub fn witness_aboxes() -> Result<(), String> {
    let x = sigma_individual();
    let c = |a: &str, i: &IndividualName| Assertion::concept(a, i.clone());
    let r = |r: &str, i: &IndividualName, j: &IndividualName| Assertion::role(r, i.clone(), j.clone());
    let s = sig(["A", "B"], ["r"]);
    let a_sigma = [c("A", &x), c("B", &x), r("r", &x, &x)];

    let want = abox([c("A", &xi("B")), c("B", &xi("A")), r("r", &xi("A"), &x), r("r", &xi("B"), &x)].into_iter().chain(a_sigma.clone()));
    abox_is(&Terminology::empty(), &s, AboxVariant::El, want)?;

    let cyc = tbox([eq("A", ex("r", atom("A")))]);
    let want = abox([c("A", &xi("B")), c("B", &xi("A")), r("r", &xi("A"), &xi("A")), r("r", &xi("B"), &x)].into_iter().chain(a_sigma));
    abox_is(&cyc, &s, AboxVariant::El, want)?;

    let conj = tbox([eq("A", Concept::conj([atom("B1"), atom("B2")]))]);
    let s3 = sig(["A", "B1", "B2"], [] as [&str; 0]);
    let want = abox([c("B1", &xi("B2")), c("B2", &xi("B1")), c("A", &x), c("B1", &x), c("B2", &x)]);
    abox_is(&conj, &s3, AboxVariant::El, want)?;

    let (t1, t2, sigma) = range_pair();
    let want = abox([
        c("B", &x),
        r("r", &x, &x),
        r("s", &x, &x),
        r("r", &xi("B"), &x),
        r("s", &xi("B"), &x),
        r("r", &x, &xi("B")),
        r("s", &x, &xi("B")),
    ]);
    abox_is(&t2, &sigma, AboxVariant::Elhr, want.clone())?;
    let b = atom("B");
    let k1 = KnowledgeBase { terminology: normalize(&t1), abox: want.clone() };
    let k2 = KnowledgeBase { terminology: normalize(&t2), abox: want };
    ensure(instance_check(&k1, &prepare(&t1), &b, &xi("B")).map_err(|e| e.to_string())?, || "T1 misses B(ξ_B)".into())?;
    ensure(!instance_check(&k2, &prepare(&t2), &b, &xi("B")).map_err(|e| e.to_string())?, || "T2 derives B(ξ_B)".into())
}

pub fn role_splitting() -> Result<(), String> {
    let (t1, _, _) = range_pair();
    let original = abox([Assertion::role("r", "a", "c"), Assertion::role("s", "b", "c")]);
    let split = role_splitting_unfold(&original).map_err(|e| e.to_string())?;
    let want = abox([
        Assertion::role("r", "a_r", "c_r"),
        Assertion::role("r", "a_s", "c_r"),
        Assertion::role("s", "b_r", "c_s"),
        Assertion::role("s", "b_s", "c_s"),
    ]);
    ensure(split == want, || format!("unfolding {:?}", split.assertions()))?;
    let idx = prepare(&t1);
    let b = atom("B");
    let k = KnowledgeBase { terminology: normalize(&t1), abox: original };
    ensure(instance_check(&k, &idx, &b, &"c".into()).map_err(|e| e.to_string())?, || "B(c) not entailed on the original ABox".into())?;
    let k = KnowledgeBase { terminology: normalize(&t1), abox: split };
    for ind in ["c_r", "c_s"] {
        ensure(!instance_check(&k, &idx, &b, &ind.into()).map_err(|e| e.to_string())?, || format!("B({ind}) entailed on the unfolding"))?;
    }
    Ok(())
}

/// `A ⊑ ∃r.B, A' ≡ ∃r.B'` against `A ⊑ ∃r.B, A' ⊑ ∃r.B'` over `{A, A', B, B'}`.
pub fn replacement_pair(extra: bool) -> (Terminology, Terminology, Signature) {
    let common = [sub("A", ex("r", atom("B")))];
    let bb = extra.then(|| sub("B", atom("B'")));
    let t1 = tbox(common.iter().cloned().chain([eq("A'", ex("r", atom("B'")))]).chain(bb.clone()));
    let t2 = tbox(common.iter().cloned().chain([sub("A'", ex("r", atom("B'")))]).chain(bb));
    (t1, t2, sig(["A", "A'", "B", "B'"], [] as [&str; 0]))
}

pub fn replacement() -> Result<(), String> {
    let (t1, t2, sigma) = replacement_pair(false);
    let report = compute_diff(&t1, &t2, Some(&sigma), &opts(false)).map_err(|e| e.to_string())?;
    all_empty(&report, Direction::Forward)?;
    all_empty(&report, Direction::Backward)?;

    let (t1, t2, sigma) = replacement_pair(true);
    let report = compute_diff(&t1, &t2, Some(&sigma), &opts(true)).map_err(|e| e.to_string())?;
    let c = mode_report(&report, Direction::Forward, Mode::Concept)?;
    ensure(c.lhs_atomic.contains(&ConceptName::new("A")), || format!("concept lhs = {:?}", c.lhs_atomic))?;
    ensure(c.rhs_wtn.contains(&ConceptName::new("A'")), || format!("concept rhs = {:?}", c.rhs_wtn))?;
    ensure(verifies(&t1, &t2, &atom("A"), &atom("A'"))?, || "A ⊑ A' does not separate".into())
}

pub type Check = (&'static str, fn() -> Result<(), String>);

/// The worked-example checks in report order.
pub const CHECKS: [Check; 11] = [
    ("range pair: instance-only rhs B", range_pair_diff),
    ("query-only lhs via ∃u", query_only_exists),
    ("query-only lhs via role conjunction", query_only_role_conjunction),
    ("binary tree n=2: rhs A1 and example C_2", || binary_tree(2)),
    ("binary tree n=3: example C_3 of depth 3", || binary_tree(3)),
    ("binary tree n=2: NotWitness table", binary_tree_table),
    ("nested lhs example", lhs_nested),
    ("noimply covers", noimply_covers),
    ("witness ABoxes", witness_aboxes),
    ("role-splitting unfolding", role_splitting),
    ("replacement pair", replacement),
];
