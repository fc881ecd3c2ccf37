//! Acceptance criteria 1 to 8. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

use ninefold_core::builders::{connected_sum, from_simplicial};
use ninefold_core::classes::{sw_classes, sw_from_wu, wu_classes, spinc_data, Choices};
use ninefold_core::decide::{check_w7_theorem, decide, decide_connected_sum};
use ninefold_core::iso::{homotopy_invariance_check, GradedIso};
use ninefold_core::library::{self, library, NAMES, SYNTHETIC_NAMES};
use ninefold_core::selftest::{self, SelftestOptions};
use ninefold_core::{validate, CohomologyModel, ManifoldModel, Outcome};
use ninefold_simplicial::cochain::{Coefficients, Cochain};
use ninefold_simplicial::f2::BitVec;
use ninefold_simplicial::{triangulations, Class, Cohomology};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

type Outcome_ = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

// ---------- Brute-force oracles ----------

fn all_elements(dim: usize) -> Vec<BitVec> {
    assert!(dim <= 16, "brute force over 2^{dim} elements");
    (0u32..1 << dim).map(|m| BitVec::from_indices(dim, (0..dim).filter(|&i| m >> i & 1 == 1))).collect()
}

fn span(dim: usize, gens: &[BitVec]) -> BTreeSet<Vec<bool>> {
    let mut out = BTreeSet::from([vec![false; dim]]);
    for g in gens {
        let more: Vec<Vec<bool>> = out.iter().map(|v| v.iter().zip(g.to_bools()).map(|(a, b)| *a ^ b).collect()).collect();
        out.extend(more);
    }
    out
}

/// Wu classes of a model by exhaustive search over each degree.
fn wu_oracle(h: &CohomologyModel) -> Vec<BitVec> {
    let n = h.dimension;
    (0..=n)
        .map(|k| {
            let sols: Vec<BitVec> = all_elements(h.f2_dim(k))
                .into_iter()
                .filter(|v| h.f2_basis(n - k).iter().all(|y| h.eval2(&h.cup2(k, v, n - k, y)) == h.eval2(&h.sq(k, n - k, y))))
                .collect();
            assert_eq!(sols.len(), 1, "Wu class v{k} not unique");
            sols[0].clone()
        })
        .collect()
}

fn sw_oracle(h: &CohomologyModel) -> Vec<BitVec> {
    let v = wu_oracle(h);
    (0..=h.dimension)
        .map(|k| (0..=k).fold(h.f2_zero(k), |acc, i| acc.xor(&h.sq(i, k - i, &v[k - i]))))
        .collect()
}

/// Sq²(ρ₂H⁶) as an explicit set.
fn sq2_image(h: &CohomologyModel) -> BTreeSet<Vec<bool>> {
    let gens: Vec<BitVec> = (0..h.z_gens(6)).map(|g| h.sq(2, 6, &h.rho2(6, &h.z_unit(6, g)))).collect();
    span(h.f2_dim(8), &gens)
}

fn spinc(m: &ManifoldModel) -> bool {
    sw_classes(m).map(|(_, sw)| sw.w3_vanishes()).unwrap_or(false)
}

// ---------- Criteria ----------

fn criterion_1() -> Outcome_ {
    let expected = [
        ("S9", "Contact"),
        ("S1xHP2", "NoContact(W8)"),
        ("M1_surgered", "NoContact(O9)"),
        ("Dold_5_2", "NoContact(W3)"),
        ("S1xCP4", "Contact"),
        ("M3_sum", "NoContact(O8)"),
    ];
    let start = Instant::now();
    for (name, want) in expected {
        let got = decide(&library(name).unwrap()).map_err(|e| format!("{name}: {e}"))?.summary();
        ensure!(got == want, "{name}: expected {want}, got {got}");
    }
    let t = start.elapsed();
    ensure!(t < Duration::from_secs(5), "took {t:?}");
    Ok(format!("6/6 verdicts in {:.2}s", t.as_secs_f64()))
}

fn criterion_2() -> Outcome_ {
    let opts = SelftestOptions::default();
    let mutations = selftest::spinc_mutations(opts.seed ^ 0x7737, 10);
    ensure!(mutations.len() == 10, "expected 10 mutations");
    let models: Vec<ManifoldModel> = library::corpus().into_iter().filter(spinc).chain(mutations).collect();
    for m in &models {
        let r = validate(m);
        ensure!(r.is_ok(), "{} invalid: {:?}", m.label, r.violations);
        ensure!(spinc(m), "{} lost W3 = 0", m.label);
        let h = &m.cohomology;
        let w = sw_oracle(h);
        ensure!(w[7].is_zero(), "{}: w7 != 0", m.label);
        ensure!(CohomologyModel::z_is_zero(&h.beta(6, &w[6])), "{}: W7 != 0", m.label);
        let r = check_w7_theorem(m);
        ensure!(matches!(r, Ok(true)), "{}: {r:?}", m.label);
    }
    let suite = selftest::run_suite("w7", &opts).unwrap();
    ensure!(suite.passed, "w7 suite: {:?}", suite.counterexample);
    Ok(format!("{} spin^c models including 10 mutations", models.len()))
}

fn eval_top(z: &Cochain) -> bool {
    z.support().filter(|(_, x)| ninefold_simplicial::int::parity(x)).count() % 2 == 1
}

/// Wu and Stiefel–Whitney classes of a closed triangulated manifold, computed
/// on cochains by pairing with the sum of all top simplices.
fn sw_by_pairing(h: &Cohomology) -> Vec<Class> {
    let n = h.complex().dimension();
    let ev = |c: &Class| eval_top(&h.representative(c));
    let v: Vec<Class> = (0..=n)
        .map(|k| {
            let sols: Vec<Class> = all_elements(h.num_generators(k))
                .iter()
                .map(|b| h.class_from_bits(k, b))
                .filter(|v| h.generators(n - k).iter().all(|x| ev(&h.cup(v, x)) == ev(&h.sq(k, x).unwrap())))
                .collect();
            assert_eq!(sols.len(), 1);
            sols[0].clone()
        })
        .collect();
    (0..=n).map(|k| (0..=k).fold(h.zero(k), |acc, i| h.add(&acc, &h.sq(i, &v[k - i]).unwrap()))).collect()
}

fn criterion_3() -> Outcome_ {
    let start = Instant::now();
    for (label, x) in [("CP2", triangulations::cp2()), ("RP3", triangulations::rp3()), ("S4", triangulations::sphere(4)), ("T2", triangulations::torus())] {
        let h = Cohomology::compute(&x, Coefficients::F2);
        let n = x.dimension();
        let one = h.generator(0, 0);
        // Classical total classes: (1 + a)³ on CP², (1 + x)⁴ on RP³, 1 otherwise.
        let golden: Vec<Class> = (0..=n)
            .map(|k| match (label, k) {
                (_, 0) => one.clone(),
                ("CP2", 2) => h.generator(2, 0),
                ("CP2", 4) => h.cup(&h.generator(2, 0), &h.generator(2, 0)),
                _ => h.zero(k),
            })
            .collect();
        let by_pairing = sw_by_pairing(&h);
        ensure!(by_pairing == golden, "{label}: pairing oracle gives {by_pairing:?}");
        let m = from_simplicial(&x).map_err(|e| e.to_string())?;
        let sw = sw_from_wu(&m, &wu_classes(&m).map_err(|e| e.to_string())?);
        let bits: Vec<BitVec> = golden.iter().map(Class::to_bits).collect();
        ensure!(sw.w == bits, "{label}: model path gives {:?}", sw.w);
    }
    let opts = SelftestOptions::default();
    ensure!(opts.random_complexes >= 5 && opts.random_cocycles >= 100, "suite too small");
    let suite = selftest::run_suite("steenrod_axioms", &opts).unwrap();
    ensure!(suite.passed, "steenrod suite: {:?}", suite.counterexample);
    let t = start.elapsed();
    ensure!(t < Duration::from_secs(60), "took {t:?}");
    Ok(format!("4 goldens, {} axiom checks in {:.1}s", suite.checks, t.as_secs_f64()))
}

fn criterion_4() -> Outcome_ {
    let models = selftest::formula_models();
    let names: BTreeSet<&str> = models.iter().map(|m| m.label.as_str()).collect();
    for want in SYNTHETIC_NAMES.iter().chain(["S1xCP4"].iter()) {
        ensure!(names.contains(want), "{want} does not satisfy the formula hypothesis");
    }
    let mut samples = 0;
    for (i, m) in models.iter().enumerate() {
        let h = &m.cohomology;
        let (_, sw) = sw_classes(m).unwrap();
        let image = sq2_image(h);
        let canon = spinc_data::<ChaCha8Rng>(h, &sw, &mut Choices::canonical()).unwrap().unwrap();
        let x0 = sw.w[8].xor(&h.rho2(8, &canon.half_cv));
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + i as u64);
        for s in 0..20 {
            let d = spinc_data(h, &sw, &mut Choices::random(&mut rng)).unwrap().unwrap();
            let x = sw.w[8].xor(&h.rho2(8, &d.half_cv));
            ensure!(image.contains(&x.xor(&x0).to_bools()), "{} sample {s}: coset changed", m.label);
            samples += 1;
        }
        let mut fails = Vec::new();
        selftest::choice_independence_for(m, 2000 + i as u64, 20, &mut |ok, w| {
            if !ok {
                fails.push(w)
            }
        });
        ensure!(fails.is_empty(), "{}: {}", m.label, fails[0]);
    }
    Ok(format!("{} models, {samples} randomized choices", models.len()))
}

fn criterion_5() -> Outcome_ {
    let models: Vec<ManifoldModel> = NAMES.iter().map(|n| library(n).unwrap()).collect();
    let (mut pairs, mut determined) = (0, 0);
    for i in 0..models.len() {
        for j in i + 1..models.len() {
            let (a, b) = (&models[i], &models[j]);
            let by_clause = decide_connected_sum(a, b).map_err(|e| format!("{} # {}: {e}", a.label, b.label))?;
            let direct = decide(&connected_sum(a, b).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
            pairs += 1;
            if direct.outcome != Outcome::Undetermined {
                determined += 1;
                ensure!(
                    by_clause.same_decision(&direct),
                    "{} # {}: clauses give {}, the sum gives {}",
                    a.label,
                    b.label,
                    by_clause.summary(),
                    direct.summary()
                );
            }
        }
    }
    ensure!(pairs == 15, "{pairs} pairs");
    Ok(format!("{determined}/{pairs} pairs determined and in agreement"))
}

fn criterion_6() -> Outcome_ {
    let mut degrees = 0;
    for m in library::corpus() {
        let h = &m.cohomology;
        for i in 0..=h.dimension {
            let image = span(h.f2_dim(i), &h.rho2[i]);
            let kernel: BTreeSet<Vec<bool>> = all_elements(h.f2_dim(i))
                .into_iter()
                .filter(|x| i == h.dimension || CohomologyModel::z_is_zero(&h.beta(i, x)))
                .map(|x| x.to_bools())
                .collect();
            ensure!(image == kernel, "{} degree {i}: image of rho2 differs from ker beta", m.label);
            degrees += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(66);
    let mut complexes: Vec<(String, ninefold_simplicial::SimplicialComplex)> =
        selftest::test_complexes().into_iter().map(|(l, x)| (l.to_string(), x)).collect();
    for c in 0..2 {
        complexes.push((format!("random {c}"), triangulations::random_complex(&mut rng, 7, 3, 10)));
    }
    for (label, x) in &complexes {
        for _ in 0..5 {
            let order = triangulations::random_order(&mut rng, x.n_vertices());
            selftest::order_independence(x, &order).map_err(|e| format!("{label} under {order:?}: {e}"))?;
        }
    }
    Ok(format!("{degrees} model degrees exact, {} complexes x 5 orders", complexes.len()))
}

fn criterion_7() -> Outcome_ {
    let mut checks = 0;
    let mut c_applied = 0;
    for m in library::corpus() {
        let h = &m.cohomology;
        let w = sw_oracle(h);
        let v = wu_oracle(h);
        let image = sq2_image(h);
        // (a) Sq²y = w₂y on H⁶.
        for y in h.f2_basis(6) {
            ensure!(h.sq(2, 6, &y) == h.cup2(2, &w[2], 6, &y), "{}: clause (a) fails on {}", m.label, h.format_f2(6, &y));
            checks += 1;
        }
        // (b) z² = v₄z = (w₄ + w₂²)z on H⁴.
        let w2sq = h.cup2(2, &w[2], 2, &w[2]);
        ensure!(v[4] == w[4].xor(&w2sq), "{}: v4 != w4 + w2^2", m.label);
        for z in h.f2_basis(4) {
            ensure!(h.cup2(4, &z, 4, &z) == h.cup2(4, &v[4], 4, &z), "{}: clause (b) fails on {}", m.label, h.format_f2(4, &z));
            checks += 1;
        }
        // (c) under β|D_M = 0: Sq¹(H⁷) ⊆ Sq²(ρ₂H⁶).
        let torsion3 = span(h.f2_dim(3), &h.rho2[3][h.degree(3).z_rank..]);
        let dm: Vec<BitVec> = all_elements(h.f2_dim(1))
            .into_iter()
            .filter(|x| torsion3.contains(&h.cup2(1, x, 2, &w[2]).to_bools()))
            .collect();
        if dm.iter().all(|x| CohomologyModel::z_is_zero(&h.beta(1, x))) {
            c_applied += 1;
            for z in h.f2_basis(7) {
                ensure!(image.contains(&h.sq(1, 7, &z).to_bools()), "{}: clause (c) fails", m.label);
                checks += 1;
            }
        }
        if !CohomologyModel::z_is_zero(&h.beta(2, &w[2])) {
            continue;
        }
        // (d) w₆ρ₂(u) ∈ Sq²(ρ₂H⁶) for u in H².
        for g in 0..h.z_gens(2) {
            let u = h.rho2(2, &h.z_unit(2, g));
            ensure!(image.contains(&h.cup2(6, &w[6], 2, &u).to_bools()), "{}: clause (d) fails", m.label);
            checks += 1;
        }
        // (e) w₄ = 0 ⟹ ρ₂(v²) ∈ Sq²(ρ₂H⁶) for v in H⁴.
        if w[4].is_zero() {
            for g in 0..h.z_gens(4) {
                let r = h.rho2(4, &h.z_unit(4, g));
                ensure!(image.contains(&h.cup2(4, &r, 4, &r).to_bools()), "{}: clause (e) fails", m.label);
                checks += 1;
            }
        }
    }
    ensure!(c_applied > 0, "clause (c) never applied");
    Ok(format!("{checks} basis checks, (c) on {c_applied} models, 0 violations"))
}

fn criterion_8() -> Outcome_ {
    let mut rng = ChaCha8Rng::seed_from_u64(88);
    let mut copies = 0;
    for a in library::all() {
        let want = decide(&a).map_err(|e| e.to_string())?.summary();
        for k in 0..4 {
            let iso = if k < 3 { GradedIso::relabeling(&a.cohomology, &mut rng) } else { GradedIso::random_automorphism(&a.cohomology, &mut rng, 4) };
            let b = iso.transport(&a);
            let same = homotopy_invariance_check(&a, &b, &iso).map_err(|e| format!("{}: {e}", a.label))?;
            let got = decide(&b).map_err(|e| e.to_string())?.summary();
            ensure!(same && got == want, "{}: copy {k} gives {got}, expected {want}", a.label);
            copies += 1;
        }
    }
    Ok(format!("{copies} relabeled copies agree"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome_); 8] = [
        ("reference verdict corpus", criterion_1),
        ("W7 suite", criterion_2),
        ("Steenrod engine goldens and axioms", criterion_3),
        ("choice independence", criterion_4),
        ("connected-sum consistency", criterion_5),
        ("exactness and order independence", criterion_6),
        ("squaring lemma clauses", criterion_7),
        ("homotopy invariance smoke test", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let r = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_else(|| "panic".into()))
        });
        match r {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail}", i + 1),
            Err(e) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {e}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
