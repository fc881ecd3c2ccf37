//! Decision procedure for almost contact (hence contact) structures on closed
//! oriented 9-manifolds, with its obstruction trail.

use crate::builders::connected_sum;
use crate::classes::{
    self, coset_reduce, omega_formula_all, sigma_w4, spinc_data, sq2_rho2_h6, sw_classes, ClassError, Choices, CosetH8, SWClasses,
};
use crate::model::{CohomologyModel, ManifoldModel, ZVec};
use crate::validate::{validate, ValidationReport};
use ninefold_simplicial::f2::BitVec;
use ninefold_simplicial::int::serde_int;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Outcome {
    Contact,
    NoContact,
    Undetermined,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Obstruction {
    W3,
    O8,
    O9,
    W8,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Missing {
    PhiHat,
    OmegaValue,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntegralRecord {
    pub zero: bool,
    #[serde(with = "serde_int::vec")]
    pub coords: ZVec,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CosetRecord {
    pub zero: bool,
    pub representative: BitVec,
    pub subspace_dim: usize,
}

impl CosetRecord {
    fn of(c: &CosetH8) -> Self {
        CosetRecord { zero: c.is_zero(), representative: c.representative.clone(), subspace_dim: c.subspace.dim() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Trail {
    pub o3: IntegralRecord,
    pub o7: IntegralRecord,
    pub o8: Option<CosetRecord>,
    pub o9: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub degree: usize,
    pub description: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bits: Option<BitVec>,
    #[serde(skip_serializing_if = "Option::is_none", with = "opt_zvec")]
    pub coords: Option<ZVec>,
}

mod opt_zvec {
    use super::*;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(v: &Option<ZVec>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(v) => serde_int::vec::serialize(v, s),
            None => s.serialize_none(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub label: String,
    pub outcome: Outcome,
    pub obstruction: Option<Obstruction>,
    pub missing: Option<Missing>,
    pub trail: Trail,
    pub witness: Option<Witness>,
}

impl Verdict {
    /// Short form such as `NoContact(W8)`.
    pub fn summary(&self) -> String {
        match (self.outcome, self.obstruction, self.missing) {
            (Outcome::NoContact, Some(o), _) => format!("NoContact({o:?})"),
            (Outcome::Undetermined, _, Some(m)) => format!("Undetermined({m:?})"),
            (o, _, _) => format!("{o:?}"),
        }
    }

    pub fn same_decision(&self, other: &Verdict) -> bool {
        self.outcome == other.outcome && self.obstruction == other.obstruction && self.missing == other.missing
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DecideError {
    #[error("model fails validation ({} violations)", .0.violations.len())]
    Invalid(ValidationReport),
    #[error(transparent)]
    Class(#[from] ClassError),
    #[error("precondition: {0}")]
    Precondition(String),
    #[error("internal contradiction: {0}")]
    Contradiction(String),
}

fn check_valid(m: &ManifoldModel) -> Result<(), DecideError> {
    let r = validate(m);
    if r.is_ok() {
        Ok(())
    } else {
        Err(DecideError::Invalid(r))
    }
}

/// β vanishes on D_M, the hypothesis under which the formula for Ω(p_c) applies.
pub fn beta_vanishes_on_dm(m: &ManifoldModel, sw: &SWClasses) -> Result<bool, ClassError> {
    let h = &m.cohomology;
    let dm = classes::compute_dm(h, &sw.w[2])?;
    Ok(dm.basis().iter().all(|x| CohomologyModel::z_is_zero(&h.beta(1, x))))
}

fn evaluate_with<R: rand::Rng>(m: &ManifoldModel, sw: &SWClasses, choices: &mut Choices<R>, use_supplied: bool) -> Result<Option<CosetH8>, DecideError> {
    let h = &m.cohomology;
    if !sw.w3_vanishes() {
        return Err(DecideError::Precondition("W3 != 0".into()));
    }
    if sw.w[2].is_zero() {
        return Ok(Some(coset_reduce(h, &sw.w[8])));
    }
    if sw.w[4].is_zero() {
        return Ok(Some(coset_reduce(h, &h.f2_zero(8))));
    }
    if beta_vanishes_on_dm(m, sw)? {
        let data = spinc_data(h, sw, choices)?.expect("W3 = 0");
        let all = omega_formula_all(h, sw, &data.c, &data.v)?;
        if all.windows(2).any(|w| w[0] != w[1]) {
            return Err(DecideError::Contradiction("coset depends on the choice of cv/2".into()));
        }
        return Ok(Some(classes::omega_formula(h, sw, &data)));
    }
    if use_supplied {
        if let Some(om) = m.omega_pc.as_ref().filter(|o| o.determined) {
            return Ok(Some(coset_reduce(h, &om.representative)));
        }
    }
    Ok(None)
}

/// Ω(p_c) from the closed formulas only (no supplied value).
pub fn omega_from_formulas(m: &ManifoldModel, sw: &SWClasses) -> Result<Option<CosetH8>, DecideError> {
    evaluate_with::<ChaCha8Rng>(m, sw, &mut Choices::canonical(), false)
}

/// Ω(p_c(M)) as a coset in H⁸/Sq²(ρ₂H⁶); requires W₃ = 0.
pub fn evaluate_omega_pc(m: &ManifoldModel) -> Result<Option<CosetH8>, DecideError> {
    check_valid(m)?;
    let (_, sw) = sw_classes(m)?;
    evaluate_with::<ChaCha8Rng>(m, &sw, &mut Choices::canonical(), true)
}

pub fn decide(m: &ManifoldModel) -> Result<Verdict, DecideError> {
    decide_with::<ChaCha8Rng>(m, &mut Choices::canonical())
}

/// `decide` with the integral lifts and the half product drawn from a seeded RNG.
pub fn decide_seeded(m: &ManifoldModel, seed: u64) -> Result<Verdict, DecideError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    decide_with(m, &mut Choices::random(&mut rng))
}

fn integral_record(v: &Option<ZVec>) -> IntegralRecord {
    let coords = v.clone().unwrap_or_default();
    IntegralRecord { zero: CohomologyModel::z_is_zero(&coords), coords }
}

pub fn decide_with<R: rand::Rng>(m: &ManifoldModel, choices: &mut Choices<R>) -> Result<Verdict, DecideError> {
    check_valid(m)?;
    let h = &m.cohomology;
    let (_, sw) = sw_classes(m)?;
    let mut trail = Trail { o3: integral_record(&sw.big_w3), o7: integral_record(&sw.big_w7), o8: None, o9: None };
    let verdict = |outcome, obstruction, missing, trail, witness| Verdict {
        label: m.label.clone(),
        outcome,
        obstruction,
        missing,
        trail,
        witness,
    };
    let f2_witness = |d: usize, x: &BitVec, what: &str| Witness {
        degree: d,
        description: format!("{what} = {}", h.format_f2(d, x)),
        bits: Some(x.clone()),
        coords: None,
    };

    if !trail.o3.zero {
        let w3 = sw.big_w3.clone().unwrap();
        let wit = Witness { degree: 3, description: format!("W3 = {}", h.format_z(3, &w3)), bits: None, coords: Some(w3) };
        return Ok(verdict(Outcome::NoContact, Some(Obstruction::W3), None, trail, Some(wit)));
    }
    if !trail.o7.zero {
        return Err(DecideError::Contradiction("W7 != 0 on a spin^c model".into()));
    }

    if sw.w[2].is_zero() {
        let o8 = coset_reduce(h, &sw.w[8]);
        if o8.subspace.dim() != 0 {
            return Err(DecideError::Contradiction("Sq2(rho2 H6) nonzero on a spin model".into()));
        }
        trail.o8 = Some(CosetRecord::of(&o8));
        if !sw.w[8].is_zero() {
            let wit = f2_witness(8, &sw.w[8], "w8");
            return Ok(verdict(Outcome::NoContact, Some(Obstruction::W8), None, trail, Some(wit)));
        }
        return Ok(match sigma_w4(m, &sw)? {
            Some(false) => {
                trail.o9 = Some(false);
                verdict(Outcome::Contact, None, None, trail, None)
            }
            Some(true) => {
                trail.o9 = Some(true);
                let wit = f2_witness(4, &sw.w[4], "w4 (paired with phi_hat to the fundamental class)");
                verdict(Outcome::NoContact, Some(Obstruction::O9), None, trail, Some(wit))
            }
            None => verdict(Outcome::Undetermined, None, Some(Missing::PhiHat), trail, None),
        });
    }

    match evaluate_with(m, &sw, choices, true)? {
        Some(c) if c.is_zero() => {
            trail.o8 = Some(CosetRecord::of(&c));
            // The top obstruction vanishes for non-spin spin^c manifolds.
            trail.o9 = Some(false);
            Ok(verdict(Outcome::Contact, None, None, trail, None))
        }
        Some(c) => {
            trail.o8 = Some(CosetRecord::of(&c));
            let mut wit = f2_witness(8, &c.representative, "coset representative");
            wit.description.push_str(&format!(" mod a {}-dimensional subspace", c.subspace.dim()));
            Ok(verdict(Outcome::NoContact, Some(Obstruction::O8), None, trail, Some(wit)))
        }
        None => Ok(verdict(Outcome::Undetermined, None, Some(Missing::OmegaValue), trail, None)),
    }
}

/// Per-factor data used by the connected-sum rules.
struct FactorData {
    sw: SWClasses,
    sigma: Option<bool>,
    omega: Option<CosetH8>,
}

fn factor_data(m: &ManifoldModel) -> Result<FactorData, DecideError> {
    check_valid(m)?;
    let (_, sw) = sw_classes(m)?;
    let sigma = if sw.w[2].is_zero() { sigma_w4(m, &sw)? } else { None };
    let omega = if sw.w3_vanishes() { evaluate_with::<ChaCha8Rng>(m, &sw, &mut Choices::canonical(), true)? } else { None };
    Ok(FactorData { sw, sigma, omega })
}

/// Verdict for a # b from per-factor data, cross-checked against `decide` on
/// the assembled sum.
pub fn decide_connected_sum(a: &ManifoldModel, b: &ManifoldModel) -> Result<Verdict, DecideError> {
    let (fa, fb) = (factor_data(a)?, factor_data(b)?);
    let sum = connected_sum(a, b).map_err(|e| DecideError::Precondition(e.to_string()))?;
    let direct = decide(&sum)?;
    let d8a = a.cohomology.f2_dim(8);
    let d8b = b.cohomology.f2_dim(8);
    let embed8 = |left: bool, x: &BitVec| if left { x.concat(&BitVec::zeros(d8b)) } else { BitVec::zeros(d8a).concat(x) };

    use Outcome::*;
    let spin_a = fa.sw.w[2].is_zero();
    let spin_b = fb.sw.w[2].is_zero();
    // (outcome, obstruction, missing, witness in sum coordinates)
    let clause: (Outcome, Option<Obstruction>, Option<Missing>, Option<Witness>) = if !fa.sw.w3_vanishes() || !fb.sw.w3_vanishes() {
        (NoContact, Some(Obstruction::W3), None, None)
    } else if spin_a && spin_b {
        if !fa.sw.w[8].is_zero() || !fb.sw.w[8].is_zero() {
            (NoContact, Some(Obstruction::W8), None, None)
        } else {
            match (fa.sigma, fb.sigma) {
                (Some(x), Some(y)) if x == y => (Contact, None, None, None),
                (Some(_), Some(_)) => (NoContact, Some(Obstruction::O9), None, None),
                _ => (Undetermined, None, Some(Missing::PhiHat), None),
            }
        }
    } else {
        // Ω is additive over the summands; the spin side contributes [w₈].
        let parts = [(true, spin_a, &fa), (false, spin_b, &fb)];
        let mut nonzero = None;
        let mut unknown = false;
        for (left, spin, f) in parts {
            let value = if spin { Some(f.sw.w[8].clone()) } else { f.omega.as_ref().map(|c| c.representative.clone()) };
            match value {
                Some(x) if !x.is_zero() => nonzero = nonzero.or(Some((left, x))),
                Some(_) => {}
                None => unknown = true,
            }
        }
        match (nonzero, unknown) {
            (Some((left, x)), _) => {
                let bits = embed8(left, &x);
                let wit = Witness { degree: 8, description: "nonzero summand of the coset".into(), bits: Some(bits), coords: None };
                (NoContact, Some(Obstruction::O8), None, Some(wit))
            }
            (None, true) => (Undetermined, None, Some(Missing::OmegaValue), None),
            (None, false) => (Contact, None, None, None),
        }
    };
    let (outcome, obstruction, missing, witness) = clause;
    if direct.outcome != Undetermined && outcome != Undetermined && (direct.outcome != outcome || direct.obstruction != obstruction) {
        return Err(DecideError::Contradiction(format!(
            "connected-sum rule gives {outcome:?}/{obstruction:?} but the assembled sum gives {}",
            direct.summary()
        )));
    }
    if direct.outcome != Undetermined || outcome == Undetermined {
        return Ok(direct);
    }
    let witness = witness.or_else(|| {
        let (_, sw) = sw_classes(&sum).ok()?;
        let d = if obstruction == Some(Obstruction::O9) { 4 } else { 8 };
        Some(Witness { degree: d, description: format!("w{d} of the sum"), bits: Some(sw.w[d].clone()), coords: None })
    });
    Ok(Verdict { label: sum.label.clone(), outcome, obstruction, missing, trail: direct.trail, witness })
}

/// W₇ = 0 checked three ways: β(w₆) = 0, w₆ has an integral lift, and w₆
/// pairs trivially with the reduction of every torsion class in H³.
pub fn check_w7_theorem(m: &ManifoldModel) -> Result<bool, DecideError> {
    check_valid(m)?;
    let h = &m.cohomology;
    let (_, sw) = sw_classes(m)?;
    if !sw.w3_vanishes() {
        return Err(DecideError::Precondition("W3 != 0".into()));
    }
    let by_beta = sw.w7_vanishes();
    let by_lift = h.rho2_matrix(6).solve(&sw.w[6]).is_some();
    let d3 = h.degree(3);
    let by_torsion = (d3.z_rank..d3.z_gens()).all(|t| !h.eval2(&h.cup2(3, &h.rho2[3][t], 6, &sw.w[6])));
    if by_beta != by_lift || by_beta != by_torsion {
        return Err(DecideError::Contradiction(format!("W7 clauses disagree: beta {by_beta}, lift {by_lift}, torsion {by_torsion}")));
    }
    Ok(by_beta && sw.w[7].is_zero())
}

/// Sq²(ρ₂H⁶) for reports.
pub fn omega_subspace_dim(m: &ManifoldModel) -> usize {
    sq2_rho2_h6(&m.cohomology).dim()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::library::library;

    #[test]
    fn library_verdicts() {
        let expect = [
            ("S9", "Contact"),
            ("S1xHP2", "NoContact(W8)"),
            ("S1xCP4", "Contact"),
            ("Dold_5_2", "NoContact(W3)"),
            ("M1_surgered", "NoContact(O9)"),
            ("M3_sum", "NoContact(O8)"),
        ];
        for (name, v) in expect {
            assert_eq!(decide(&library(name).unwrap()).unwrap().summary(), v, "{name}");
        }
    }
}
