use ninefold_core::builders::connected_sum;
use ninefold_core::classes::{coset_reduce, sigma_w4, sq2_rho2_h6, sw_classes};
use ninefold_core::decide::{decide, decide_seeded, Obstruction};
use ninefold_core::iso::GradedIso;
use ninefold_core::library;
use ninefold_core::{schema, validate, CohomologyModel, ManifoldModel};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::OnceLock;

fn corpus() -> &'static [ManifoldModel] {
    static C: OnceLock<Vec<ManifoldModel>> = OnceLock::new();
    C.get_or_init(library::corpus)
}

fn model() -> impl Strategy<Value = &'static ManifoldModel> {
    (0..corpus().len()).prop_map(|i| &corpus()[i])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn automorphisms_preserve_validity_and_verdicts(m in model(), seed in any::<u64>(), moves in 1usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let iso = GradedIso::random_automorphism(&m.cohomology, &mut rng, moves);
        let b = iso.transport(m);
        prop_assert!(iso.check(m, &b).is_ok());
        let r = validate(&b);
        prop_assert!(r.is_ok(), "{:?}", r.violations);
        prop_assert_eq!(decide(&b).unwrap().summary(), decide(m).unwrap().summary());
    }

    #[test]
    fn schema_round_trip_is_identity_on_normal_forms(m in model(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b = GradedIso::relabeling(&m.cohomology, &mut rng).transport(m);
        let text = schema::to_json(&b);
        let back = schema::from_json(&text).unwrap();
        prop_assert_eq!(&back, &schema::normalized(&b));
        prop_assert_eq!(schema::to_json(&back), text);
    }

    #[test]
    fn connected_sum_verdict_is_symmetric(a in model(), b in model()) {
        let ab = decide(&connected_sum(a, b).unwrap()).unwrap();
        let ba = decide(&connected_sum(b, a).unwrap()).unwrap();
        prop_assert!(ab.same_decision(&ba), "{} vs {}", ab.summary(), ba.summary());
    }

    #[test]
    fn decision_ignores_lift_choices(m in model(), seed in any::<u64>()) {
        prop_assert!(decide_seeded(m, seed).unwrap().same_decision(&decide(m).unwrap()));
    }
}

/// Every NoContact verdict carries a witness that re-verifies from the classes.
#[test]
fn witnesses_re_verify() {
    let models: Vec<ManifoldModel> = corpus()
        .iter()
        .cloned()
        .chain(corpus().iter().flat_map(|a| corpus().iter().map(move |b| connected_sum(a, b).unwrap())))
        .collect();
    for m in &models {
        let v = decide(m).unwrap();
        let Some(obstruction) = v.obstruction else {
            assert!(v.witness.is_none());
            continue;
        };
        let h = &m.cohomology;
        let (_, sw) = sw_classes(m).unwrap();
        let w = v.witness.as_ref().expect("NoContact carries a witness");
        match obstruction {
            Obstruction::W3 => {
                let coords = w.coords.as_ref().unwrap();
                assert!(!CohomologyModel::z_is_zero(coords));
                assert_eq!(coords, &h.beta(2, &sw.w[2]));
            }
            Obstruction::W8 => {
                assert!(sw.w[2].is_zero());
                assert_eq!(w.bits.as_ref().unwrap(), &sw.w[8]);
                assert!(!sw.w[8].is_zero());
            }
            Obstruction::O8 => {
                let x = w.bits.as_ref().unwrap();
                assert!(!sq2_rho2_h6(h).contains(x), "{}", m.label);
                assert!(!coset_reduce(h, x).is_zero());
            }
            Obstruction::O9 => {
                assert!(sw.w[2].is_zero() && sw.w[8].is_zero());
                assert_eq!(sigma_w4(m, &sw).unwrap(), Some(true));
            }
        }
    }
}

#[test]
fn spin_models_have_trivial_indeterminacy() {
    for m in corpus() {
        let (_, sw) = sw_classes(m).unwrap();
        if sw.w[2].is_zero() {
            assert_eq!(sq2_rho2_h6(&m.cohomology).dim(), 0, "{}", m.label);
        }
    }
}
