//! Invariant suites over the simplicial engine and the model corpus, with
//! optional fault injection for checking that the suites can fail.

use crate::builders::{connected_sum, from_simplicial};
use crate::classes::{omega_formula, omega_formula_all, spinc_data, sw_classes, sw_from_wu, wu_classes, Choices};
use crate::decide::{beta_vanishes_on_dm, check_w7_theorem, decide, decide_seeded};
use crate::iso::GradedIso;
use crate::library;
use crate::model::{CohomologyModel, ManifoldModel};
use crate::validate::{validate, validate_cohomology};
use ninefold_simplicial::cochain::{Coefficients, Cochain};
use ninefold_simplicial::f2::BitVec;
use ninefold_simplicial::{triangulations, Class, Cohomology, SimplicialComplex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

pub const SUITES: [&str; 6] = ["steenrod_axioms", "exactness", "wu_formula", "validate", "choice_independence", "w7"];

pub const DEFAULT_SEED: u64 = 0x9e37_79b9;

/// Deliberate defects, used to check that the suites detect them.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fault {
    /// Every Sq¹ table of engine-built models replaced by zero.
    ZeroSq1,
    /// One row of the degree-(2,7) product table of S1xCP4 deleted.
    DropPairingRow,
}

#[derive(Clone, Debug)]
pub struct SelftestOptions {
    pub seed: u64,
    pub samples: usize,
    pub random_complexes: usize,
    pub random_cocycles: usize,
    pub mutations: usize,
    pub fault: Option<Fault>,
}

impl Default for SelftestOptions {
    fn default() -> Self {
        SelftestOptions { seed: DEFAULT_SEED, samples: 20, random_complexes: 5, random_cocycles: 100, mutations: 10, fault: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub passed: bool,
    pub checks: usize,
    pub counterexample: Option<Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SelftestReport {
    pub suites: Vec<SuiteReport>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(|s| s.passed)
    }

    pub fn suite(&self, name: &str) -> Option<&SuiteReport> {
        self.suites.iter().find(|s| s.name == name)
    }
}

struct Tally {
    checks: usize,
    counterexample: Option<Value>,
}

impl Tally {
    fn new() -> Self {
        Tally { checks: 0, counterexample: None }
    }

    fn check(&mut self, ok: bool, witness: impl FnOnce() -> Value) {
        self.checks += 1;
        if !ok && self.counterexample.is_none() {
            self.counterexample = Some(witness());
        }
    }

    fn fail(&mut self, witness: Value) {
        self.check(false, || witness);
    }

    fn finish(self, name: &str) -> SuiteReport {
        SuiteReport { name: name.into(), passed: self.counterexample.is_none(), checks: self.checks, counterexample: self.counterexample }
    }
}

pub fn run(opts: &SelftestOptions) -> SelftestReport {
    SelftestReport { suites: SUITES.iter().map(|s| run_suite(s, opts).expect("known suite")).collect() }
}

pub fn run_suite(name: &str, opts: &SelftestOptions) -> Option<SuiteReport> {
    let mut t = Tally::new();
    match name {
        "steenrod_axioms" => steenrod_axioms(opts, &mut t),
        "exactness" => exactness(opts, &mut t),
        "wu_formula" => wu_formula(opts, &mut t),
        "validate" => validate_suite(opts, &mut t),
        "choice_independence" => choice_independence(opts, &mut t),
        "w7" => w7(opts, &mut t),
        _ => return None,
    }
    Some(t.finish(name))
}

/// Closed triangulated manifolds with known characteristic classes.
pub fn test_complexes() -> Vec<(&'static str, SimplicialComplex)> {
    vec![
        ("S4", triangulations::sphere(4)),
        ("RP2", triangulations::rp2()),
        ("T2", triangulations::torus()),
        ("CP2", triangulations::cp2()),
        ("RP3", triangulations::rp3()),
        ("T3", triangulations::t3()),
    ]
}

fn engine_models(fault: Option<Fault>) -> Vec<(&'static str, CohomologyModel)> {
    test_complexes()
        .into_iter()
        .map(|(name, x)| {
            let mut m = from_simplicial(&x).expect("test complexes are closed manifolds");
            if fault == Some(Fault::ZeroSq1) {
                for ((k, _), cols) in m.sq.iter_mut() {
                    if *k == 1 {
                        cols.iter_mut().for_each(|c| *c = BitVec::zeros(c.len()));
                    }
                }
            }
            (name, m)
        })
        .collect()
}

fn corpus(fault: Option<Fault>) -> Vec<ManifoldModel> {
    let mut all = library::corpus();
    if fault == Some(Fault::DropPairingRow) {
        let m = all.iter_mut().find(|m| m.label == "S1xCP4").expect("library model");
        let t = m.cohomology.cup2.get_mut(&(2, 7)).expect("stored pair");
        t[0].iter_mut().for_each(|c| *c = BitVec::zeros(c.len()));
    }
    all
}

fn report_violations(t: &mut Tally, label: &str, m: &CohomologyModel, checks: &[&str]) {
    let r = validate_cohomology(m);
    let bad: Vec<_> = r.violations.iter().filter(|v| checks.contains(&v.check.as_str())).collect();
    t.check(bad.is_empty(), || json!({ "model": label, "check": bad[0].check, "degree": bad[0].degree, "witness": bad[0].witness }));
}

// ---------- Steenrod axioms ----------

fn random_cocycle(rng: &mut ChaCha8Rng, h: &Cohomology, p: usize) -> Cochain {
    let k = h.complex();
    let mut z = Cochain::zero(k, p, Coefficients::F2);
    for g in h.generators(p) {
        if rng.gen_bool(0.5) {
            z = z.add(&h.representative(&g)).expect("same ring");
        }
    }
    if p > 0 {
        let bits = BitVec::from_bools(&(0..k.count(p - 1)).map(|_| rng.gen_bool(0.5)).collect::<Vec<_>>());
        z = z.add(&Cochain::from_bits(k, p - 1, &bits).coboundary()).expect("same ring");
    }
    z
}

fn sq_of_cocycle(h: &Cohomology, k: usize, z: &Cochain) -> Class {
    let p = z.degree();
    if k > p {
        return h.zero(p + k);
    }
    h.class_of(&z.cup_i(z, p - k).expect("same ring")).expect("cup-i square of a cocycle is a cocycle")
}

fn sq(h: &Cohomology, k: usize, x: &Class) -> Class {
    h.sq(k, x).expect("mod-2 coefficients")
}

fn steenrod_on_complex(h: &Cohomology, label: &str, rng: &mut ChaCha8Rng, cocycles: usize, t: &mut Tally) {
    let dim = h.complex().dimension();
    for _ in 0..cocycles {
        let p = rng.gen_range(0..=dim);
        let z = random_cocycle(rng, h, p);
        let x = h.class_of(&z).expect("cocycle");
        let ce = |what: &str| json!({ "complex": label, "degree": p, "axiom": what, "cocycle": z.to_bits() });
        // Squares computed from this cocycle agree with those of the basis representative.
        for k in 0..=dim - p {
            t.check(sq_of_cocycle(h, k, &z) == sq(h, k, &x), || ce("well-defined on classes"));
        }
        t.check(sq(h, 0, &x) == x, || ce("Sq0 = id"));
        if 2 * p <= dim {
            t.check(sq(h, p, &x) == h.cup(&x, &x), || ce("Sq^p x = x^2"));
        }
        if p + 2 <= dim {
            t.check(sq(h, 1, &sq(h, 1, &x)).is_zero(), || ce("Sq1 Sq1 = 0"));
        }
        if p + 3 <= dim {
            t.check(sq(h, 1, &sq(h, 2, &x)) == sq(h, 3, &x), || ce("Sq1 Sq2 = Sq3"));
        }
        if p + 4 <= dim {
            t.check(sq(h, 2, &sq(h, 2, &x)) == sq(h, 3, &sq(h, 1, &x)), || ce("Sq2 Sq2 = Sq3 Sq1"));
        }
        // Cartan formula against a second random cocycle.
        if p < dim {
            let q = rng.gen_range(0..=dim - p);
            let y = h.class_of(&random_cocycle(rng, h, q)).expect("cocycle");
            let xy = h.cup(&x, &y);
            for k in 0..=dim - p - q {
                let mut rhs = h.zero(p + q + k);
                for i in 0..=k {
                    rhs = h.add(&rhs, &h.cup(&sq(h, i, &x), &sq(h, k - i, &y)));
                }
                t.check(sq(h, k, &xy) == rhs, || json!({ "complex": label, "degrees": [p, q], "axiom": "Cartan", "k": k }));
            }
        }
    }
}

const AXIOM_CHECKS: [&str; 8] = ["unit", "sq0_identity", "sq_above_degree", "sq_top_is_square", "cartan", "adem", "commutativity", "associativity"];

fn steenrod_axioms(opts: &SelftestOptions, t: &mut Tally) {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let per = opts.random_cocycles.div_ceil(opts.random_complexes.max(1));
    for c in 0..opts.random_complexes {
        let dim = 2 + c % 5;
        let x = triangulations::random_complex(&mut rng, 8, dim, 14);
        let h = Cohomology::compute(&x, Coefficients::F2);
        steenrod_on_complex(&h, &format!("random complex {c} (dimension {dim})"), &mut rng, per, t);
    }
    for (label, m) in engine_models(opts.fault) {
        report_violations(t, label, &m, &AXIOM_CHECKS);
    }
    for m in corpus(opts.fault) {
        report_violations(t, &m.label, &m.cohomology, &AXIOM_CHECKS);
    }
}

// ---------- Exactness and order independence ----------

const EXACTNESS_CHECKS: [&str; 6] = ["exactness", "rho2_beta_sq1", "beta_rho2", "beta_order_two", "universal_coefficients", "rho2_well_defined"];

/// Compares the groups, squares, products and Bocksteins of `x` with those of
/// `x` reordered along `order`, through the transport isomorphism.
pub fn order_independence(x: &SimplicialComplex, order: &[usize]) -> Result<(), String> {
    let y = x.reordered(order).map_err(|e| e.to_string())?;
    let (h2, k2) = (Cohomology::compute(x, Coefficients::F2), Cohomology::compute(&y, Coefficients::F2));
    let (hz, kz) = (Cohomology::compute(x, Coefficients::Integers), Cohomology::compute(&y, Coefficients::Integers));
    let n = x.dimension();
    let e = |s: ninefold_simplicial::Error| s.to_string();
    for d in 0..=n {
        let (a, b) = (hz.group(d), kz.group(d));
        if a.free_rank != b.free_rank || a.torsion != b.torsion || h2.num_generators(d) != k2.num_generators(d) {
            return Err(format!("groups differ in degree {d}"));
        }
    }
    for d in 0..=n {
        for g in h2.generators(d) {
            let tg = h2.transport_class(&g, &k2).map_err(e)?;
            for k in 0..=n - d {
                if h2.transport_class(&sq(&h2, k, &g), &k2).map_err(e)? != sq(&k2, k, &tg) {
                    return Err(format!("Sq{k} on degree {d}"));
                }
            }
            for j in 0..=n - d {
                for g2 in h2.generators(j) {
                    let lhs = h2.transport_class(&h2.cup(&g, &g2), &k2).map_err(e)?;
                    if lhs != k2.cup(&tg, &h2.transport_class(&g2, &k2).map_err(e)?) {
                        return Err(format!("mod-2 product in degrees ({d},{j})"));
                    }
                }
            }
            if d < n {
                let lhs = hz.transport_class(&h2.bockstein(&g, &hz).map_err(e)?, &kz).map_err(e)?;
                if lhs != k2.bockstein(&tg, &kz).map_err(e)? {
                    return Err(format!("Bockstein on degree {d}"));
                }
            }
        }
        for g in hz.generators(d) {
            let lhs = h2.transport_class(&hz.reduce(&g, &h2).map_err(e)?, &k2).map_err(e)?;
            if lhs != kz.reduce(&hz.transport_class(&g, &kz).map_err(e)?, &k2).map_err(e)? {
                return Err(format!("reduction on degree {d}"));
            }
        }
    }
    Ok(())
}

fn exactness(opts: &SelftestOptions, t: &mut Tally) {
    for (label, m) in engine_models(opts.fault) {
        report_violations(t, label, &m, &EXACTNESS_CHECKS);
    }
    for m in corpus(opts.fault) {
        report_violations(t, &m.label, &m.cohomology, &EXACTNESS_CHECKS);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x6f72);
    for (label, x) in test_complexes() {
        for _ in 0..5 {
            let order = triangulations::random_order(&mut rng, x.n_vertices());
            let r = order_independence(&x, &order);
            t.check(r.is_ok(), || json!({ "complex": label, "order": order, "difference": r.unwrap_err() }));
        }
    }
}

// ---------- Wu formula ----------

/// Total Stiefel–Whitney class of each test complex: `None` for 1, otherwise
/// (generator degree, e) for (1 + g)ᵉ.
fn golden_total_class(label: &str) -> Option<(usize, usize)> {
    match label {
        "RP2" => Some((1, 3)),
        "RP3" => Some((1, 4)),
        "CP2" => Some((2, 3)),
        _ => None,
    }
}

fn binom_odd(n: usize, k: usize) -> bool {
    k <= n && (n & k) == k
}

/// Expected wₖ from the golden total class, in the model's coordinates.
pub fn golden_sw(label: &str, m: &CohomologyModel) -> Option<Vec<BitVec>> {
    let n = m.dimension;
    let mut w: Vec<BitVec> = (0..=n).map(|k| m.f2_zero(k)).collect();
    w[0] = m.f2_unit(0, 0);
    if let Some((d, e)) = golden_total_class(label) {
        if m.f2_dim(d) != 1 {
            return None;
        }
        let g = m.f2_unit(d, 0);
        let mut power = m.f2_unit(0, 0);
        for j in 1..=n / d {
            power = m.cup2(d * (j - 1), &power, d, &g);
            if binom_odd(e, j) {
                w[d * j] = power.clone();
            }
        }
    }
    Some(w)
}

fn wu_formula(opts: &SelftestOptions, t: &mut Tally) {
    for (label, m) in engine_models(opts.fault) {
        match wu_classes(&m) {
            Err(e) => t.fail(json!({ "model": label, "error": e.to_string() })),
            Ok(wu) => {
                let sw = sw_from_wu(&m, &wu);
                let gold = golden_sw(label, &m);
                t.check(gold.as_ref() == Some(&sw.w), || {
                    json!({ "model": label, "computed": sw.w, "expected": gold })
                });
            }
        }
    }
    for m in corpus(opts.fault) {
        let h = &m.cohomology;
        match sw_classes(&m) {
            Err(e) => t.fail(json!({ "model": m.label, "error": e.to_string() })),
            Ok((wu, _)) => {
                for k in 0..=h.dimension {
                    for y in h.f2_basis(h.dimension - k) {
                        let ok = h.eval2(&h.cup2(k, &wu.v[k], h.dimension - k, &y)) == h.eval2(&h.sq(k, h.dimension - k, &y));
                        t.check(ok, || json!({ "model": m.label, "degree": k, "wu_class": wu.v[k], "test_class": y }));
                    }
                }
            }
        }
    }
}

// ---------- Full validation ----------

fn validate_suite(opts: &SelftestOptions, t: &mut Tally) {
    for m in corpus(opts.fault) {
        let r = validate(&m);
        t.check(r.is_ok(), || json!({ "model": m.label, "violations": r.violations }));
    }
}

// ---------- Choice independence ----------

/// S1xCP4, the synthetic models and any other corpus model on which the
/// closed formula for Ω(p_c) applies.
pub fn formula_models() -> Vec<ManifoldModel> {
    library::corpus()
        .into_iter()
        .filter(|m| {
            let Ok((_, sw)) = sw_classes(m) else { return false };
            sw.w3_vanishes() && !sw.w[2].is_zero() && beta_vanishes_on_dm(m, &sw).unwrap_or(false)
        })
        .collect()
}

/// The coset from the formula under `samples` random choices of c, v and cv/2,
/// each compared with the canonical choice.
pub fn choice_independence_for(m: &ManifoldModel, seed: u64, samples: usize, t: &mut impl FnMut(bool, Value)) {
    let h = &m.cohomology;
    let Ok((_, sw)) = sw_classes(m) else {
        t(false, json!({ "model": m.label, "error": "classes" }));
        return;
    };
    let canon = spinc_data::<ChaCha8Rng>(h, &sw, &mut Choices::canonical()).ok().flatten().map(|d| omega_formula(h, &sw, &d));
    let Some(canon) = canon else {
        t(false, json!({ "model": m.label, "error": "no spin^c data" }));
        return;
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for s in 0..samples {
        let data = spinc_data(h, &sw, &mut Choices::random(&mut rng)).ok().flatten().expect("W3 = 0");
        let all = omega_formula_all(h, &sw, &data.c, &data.v).expect("half products exist");
        let coset = omega_formula(h, &sw, &data);
        let ok = coset == canon && all.iter().all(|c| *c == canon);
        t(ok, json!({ "model": m.label, "sample": s, "c": h.format_z(2, &data.c), "v": h.format_z(6, &data.v), "coset": h.format_f2(8, &coset.representative), "canonical": h.format_f2(8, &canon.representative) }));
    }
    let base = decide(m);
    for _ in 0..samples.min(5) {
        let other = decide_seeded(m, rng.gen());
        let ok = matches!((&base, &other), (Ok(a), Ok(b)) if a.same_decision(b));
        t(ok, json!({ "model": m.label, "error": "seeded decision differs" }));
    }
}

fn choice_independence(opts: &SelftestOptions, t: &mut Tally) {
    for (i, m) in formula_models().iter().enumerate() {
        choice_independence_for(m, opts.seed.wrapping_add(i as u64), opts.samples, &mut |ok, w| t.check(ok, || w));
    }
}

// ---------- W7 ----------

fn spinc(m: &ManifoldModel) -> bool {
    sw_classes(m).map(|(_, sw)| sw.w3_vanishes()).unwrap_or(false)
}

/// Valid spin^c models derived from the corpus: transports along random
/// automorphisms alternating with connected sums of two corpus models.
pub fn spinc_mutations(seed: u64, count: usize) -> Vec<ManifoldModel> {
    let base: Vec<ManifoldModel> = library::corpus().into_iter().filter(spinc).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let a = &base[rng.gen_range(0..base.len())];
            if i % 2 == 0 {
                let mut m = GradedIso::random_automorphism(&a.cohomology, &mut rng, 4).transport(a);
                m.label = format!("{} (automorphism {i})", a.label);
                m
            } else {
                let b = &base[rng.gen_range(0..base.len())];
                connected_sum(a, b).expect("oriented models")
            }
        })
        .collect()
}

fn w7(opts: &SelftestOptions, t: &mut Tally) {
    let mutations = spinc_mutations(opts.seed ^ 0x7737, opts.mutations);
    for m in corpus(opts.fault).into_iter().filter(spinc).chain(mutations) {
        let r = validate(&m);
        if !r.is_ok() {
            t.fail(json!({ "model": m.label, "violations": r.violations }));
            continue;
        }
        let (_, sw) = sw_classes(&m).expect("valid model");
        t.check(sw.w7_vanishes() && sw.w[7].is_zero(), || json!({ "model": m.label, "w7": sw.w[7], "W7": sw.big_w7.as_ref().map(|v| m.cohomology.format_z(7, v)) }));
        let r = check_w7_theorem(&m);
        t.check(matches!(r, Ok(true)), || json!({ "model": m.label, "result": format!("{r:?}") }));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> SelftestOptions {
        SelftestOptions { random_cocycles: 20, samples: 4, mutations: 4, ..Default::default() }
    }

    #[test]
    fn fresh_build_passes() {
        let r = run(&quick());
        for s in &r.suites {
            assert!(s.passed, "{}: {:?}", s.name, s.counterexample);
            assert!(s.checks > 0, "{}", s.name);
        }
    }

    #[test]
    fn zero_sq1_is_caught_on_rp2() {
        let opts = SelftestOptions { fault: Some(Fault::ZeroSq1), ..quick() };
        let s = run_suite("exactness", &opts).unwrap();
        assert!(!s.passed);
        let ce = s.counterexample.unwrap();
        assert_eq!(ce["model"], "RP2");
        assert_eq!(ce["check"], "rho2_beta_sq1");
    }

    #[test]
    fn dropped_pairing_row_names_the_degree() {
        let opts = SelftestOptions { fault: Some(Fault::DropPairingRow), ..quick() };
        let s = run_suite("validate", &opts).unwrap();
        assert!(!s.passed);
        let ce = s.counterexample.unwrap();
        assert_eq!(ce["model"], "S1xCP4");
        let pairing: Vec<_> = ce["violations"].as_array().unwrap().iter().filter(|v| v["check"] == "poincare_pairing").collect();
        assert!(!pairing.is_empty(), "{ce}");
        assert!(pairing.iter().all(|v| v["degree"] == 2 || v["degree"] == 7), "{ce}");
    }
}
