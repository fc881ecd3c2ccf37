//! Named example manifolds.

use crate::builders::{build_product, circle, connected_sum, cp, hp, sphere};
use crate::model::ManifoldModel;
use crate::poly::PolyBuilder;
use crate::BuildError;

pub const NAMES: [&str; 6] = ["S9", "S1xHP2", "S1xCP4", "Dold_5_2", "M1_surgered", "M3_sum"];

/// Known verdicts for the library models.
pub const EXPECTED_VERDICTS: [(&str, &str); 6] = [
    ("S9", "Contact"),
    ("S1xHP2", "NoContact(W8)"),
    ("S1xCP4", "Contact"),
    ("Dold_5_2", "NoContact(W3)"),
    ("M1_surgered", "NoContact(O9)"),
    ("M3_sum", "NoContact(O8)"),
];

pub fn expected_verdict(name: &str) -> Option<&'static str> {
    EXPECTED_VERDICTS.iter().find(|(n, _)| *n == name).map(|(_, v)| *v)
}

pub fn library(name: &str) -> Result<ManifoldModel, BuildError> {
    let m = match name {
        "S9" => ManifoldModel::new(name, sphere(9)),
        "S1xHP2" => {
            let m = ManifoldModel::new(name, build_product(&circle(), &hp(2))?);
            let phi = m.named(5, "s*u").expect("basis element s*u");
            m.with_phi_hat(phi)
        }
        "S1xCP4" => ManifoldModel::new(name, build_product(&circle(), &cp(4))?),
        "Dold_5_2" => {
            // D(5,2) = (S⁵ × CP²)/(Z/2): c in degree 1, d in degree 2.
            let h = PolyBuilder::new(9).generator("c", 1, 6).generator("d", 2, 3).total_sq("d", &["d", "c*d", "d^2"]).build()?;
            ManifoldModel::new(name, h)
        }
        "M1_surgered" => {
            // Homology of S⁵ × S⁴ with Sq⁴z = yz, so that v₄ = w₄ = y.
            let h = PolyBuilder::new(9).generator("y", 4, 2).generator("z", 5, 2).total_sq("z", &["z", "y*z"]).build()?;
            let m = ManifoldModel::new(name, h);
            let phi = m.named(5, "z").expect("basis element z");
            m.with_phi_hat(phi)
        }
        "M3_sum" => {
            let mut m = connected_sum(&library("S1xHP2")?, &library("S1xCP4")?)?;
            m.label = name.into();
            m
        }
        _ => return Err(BuildError::UnknownModel(name.into())),
    };
    Ok(m)
}

pub fn all() -> Vec<ManifoldModel> {
    NAMES.iter().map(|n| library(n).expect("library model builds")).collect()
}

pub const SYNTHETIC_NAMES: [&str; 5] = ["RP9", "S1xCP2xCP2", "S1xCP2xS4", "RP5xS4", "RP9#S1xHP2"];

/// Spin^c models on which β vanishes on D_M, so that the closed formula for
/// Ω(p_c) applies. Used by the choice-independence and W₇ suites.
pub fn synthetic(name: &str) -> Result<ManifoldModel, BuildError> {
    let m = match name {
        "RP9" => ManifoldModel::new(name, PolyBuilder::new(9).generator("x", 1, 10).total_sq("x", &["x", "x^2"]).build()?),
        "S1xCP2xCP2" => {
            let h = PolyBuilder::new(9)
                .generator("s", 1, 2)
                .generator("a", 2, 3)
                .generator("b", 2, 3)
                .total_sq("a", &["a", "a^2"])
                .total_sq("b", &["b", "b^2"])
                .build()?;
            ManifoldModel::new(name, h)
        }
        "S1xCP2xS4" => ManifoldModel::new(name, build_product(&circle(), &build_product(&cp(2), &sphere(4))?)?),
        "RP5xS4" => {
            let h = PolyBuilder::new(9).generator("x", 1, 6).generator("u", 4, 2).total_sq("x", &["x", "x^2"]).build()?;
            ManifoldModel::new(name, h)
        }
        "RP9#S1xHP2" => {
            let mut m = connected_sum(&synthetic("RP9")?, &library("S1xHP2")?)?;
            m.label = name.into();
            m
        }
        _ => return Err(BuildError::UnknownModel(name.into())),
    };
    Ok(m)
}

pub fn all_synthetic() -> Vec<ManifoldModel> {
    SYNTHETIC_NAMES.iter().map(|n| synthetic(n).expect("synthetic model builds")).collect()
}

/// Library and synthetic models.
pub fn corpus() -> Vec<ManifoldModel> {
    all().into_iter().chain(all_synthetic()).collect()
}

/// Looks a name up in the library, then among the synthetic models.
pub fn lookup(name: &str) -> Result<ManifoldModel, BuildError> {
    library(name).or_else(|_| synthetic(name))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classes::sw_classes;
    use crate::decide::beta_vanishes_on_dm;

    #[test]
    fn synthetic_models_meet_the_formula_hypothesis() {
        for m in all_synthetic() {
            let r = crate::validate(&m);
            assert!(r.is_ok(), "{}: {:?}", m.label, r.violations);
            let (_, sw) = sw_classes(&m).unwrap();
            assert!(sw.w3_vanishes(), "{}", m.label);
            assert!(!sw.w[2].is_zero(), "{} should not be spin", m.label);
            assert!(beta_vanishes_on_dm(&m, &sw).unwrap(), "{}", m.label);
            eprintln!("{}: {}", m.label, crate::decide(&m).unwrap().summary());
        }
    }
}
