//! Wu and Stiefel–Whitney classes, integral lifts, D_M, half products, σ_{w₄}
//! and cosets in degree 8.

use crate::model::{CohomologyModel, ManifoldModel, ZVec};
use ninefold_simplicial::f2::{BitVec, F2Matrix, Subspace};
use ninefold_simplicial::int::{self, Int};
use rand::Rng;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ClassError {
    #[error("model is not oriented")]
    NotOrientable,
    #[error("Poincaré pairing degenerate in degree {0}")]
    DegeneratePairing(usize),
    #[error("Wu class v{0} has no solution")]
    NoWuSolution(usize),
    #[error("identity {0} fails")]
    Identity(String),
    #[error("model is not spin")]
    NotSpin,
    #[error("half product: {0}")]
    NoHalf(String),
    #[error("dimension {0} is not 9")]
    Dimension(usize),
    #[error("consistency: {0}")]
    Consistency(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WuClasses {
    /// `v[k]` in degree `k`, for k = 0..=n.
    pub v: Vec<BitVec>,
}

impl WuClasses {
    pub fn v2(&self) -> &BitVec {
        &self.v[2]
    }
    pub fn v4(&self) -> &BitVec {
        &self.v[4]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SWClasses {
    /// `w[k]` in degree `k`, for k = 0..=n.
    pub w: Vec<BitVec>,
    /// W₃ = β(w₂), present when n ≥ 3.
    pub big_w3: Option<ZVec>,
    /// W₇ = β(w₆), present when n ≥ 7.
    pub big_w7: Option<ZVec>,
}

impl SWClasses {
    pub fn w(&self, k: usize) -> &BitVec {
        &self.w[k]
    }
    pub fn w3_vanishes(&self) -> bool {
        self.big_w3.as_ref().is_none_or(CohomologyModel::z_is_zero)
    }
    pub fn w7_vanishes(&self) -> bool {
        self.big_w7.as_ref().is_none_or(CohomologyModel::z_is_zero)
    }
}

/// Mod-2 pairing matrix Hᵏ × Hⁿ⁻ᵏ → F₂; column `i` is ⟨eᵢ · −, [M]⟩.
pub fn pairing_matrix(m: &CohomologyModel, k: usize) -> F2Matrix {
    let n = m.dimension;
    let dual = m.f2_basis(n - k);
    let cols = m
        .f2_basis(k)
        .iter()
        .map(|x| BitVec::from_bools(&dual.iter().map(|y| m.eval2(&m.cup2(k, x, n - k, y))).collect::<Vec<_>>()))
        .collect();
    F2Matrix::from_columns(dual.len(), cols)
}

/// Wu classes from ⟨vₖ x, [M]⟩ = ⟨Sqᵏ x, [M]⟩. Classes above n/2 are verified to vanish.
pub fn wu_classes(m: &CohomologyModel) -> Result<WuClasses, ClassError> {
    let n = m.dimension;
    if m.f2_dim(n) != 1 {
        return Err(ClassError::DegeneratePairing(n));
    }
    let mut v = Vec::new();
    for k in 0..=n {
        let rhs: Vec<bool> = m.f2_basis(n - k).iter().map(|y| m.eval2(&m.sq(k, n - k, y))).collect();
        let rhs = BitVec::from_bools(&rhs);
        if 2 * k > n {
            if !rhs.is_zero() {
                return Err(ClassError::NoWuSolution(k));
            }
            v.push(m.f2_zero(k));
            continue;
        }
        let p = pairing_matrix(m, k);
        if p.rank() != m.f2_dim(k) || m.f2_dim(k) != m.f2_dim(n - k) {
            return Err(ClassError::DegeneratePairing(k));
        }
        v.push(p.solve(&rhs).ok_or(ClassError::NoWuSolution(k))?);
    }
    Ok(WuClasses { v })
}

/// Wu formula w = Sq(v), with W₃ and W₇.
pub fn sw_from_wu(m: &CohomologyModel, wu: &WuClasses) -> SWClasses {
    let n = m.dimension;
    let w: Vec<BitVec> = (0..=n)
        .map(|k| {
            let mut acc = m.f2_zero(k);
            for i in 0..=k / 2 {
                acc.xor_assign(&m.sq(i, k - i, &wu.v[k - i]));
            }
            acc
        })
        .collect();
    let big_w3 = (n >= 3).then(|| m.beta(2, &w[2]));
    let big_w7 = (n >= 7).then(|| m.beta(6, &w[6]));
    SWClasses { w, big_w3, big_w7 }
}

/// Wu and Stiefel–Whitney classes of an oriented 9-dimensional model, with the
/// identities that hold for every such manifold verified.
pub fn sw_classes(m: &ManifoldModel) -> Result<(WuClasses, SWClasses), ClassError> {
    let h = &m.cohomology;
    if h.dimension != 9 {
        return Err(ClassError::Dimension(h.dimension));
    }
    if !h.is_orientable() {
        return Err(ClassError::NotOrientable);
    }
    let wu = wu_classes(h)?;
    for k in [1, 3, 5, 6, 7, 8, 9] {
        if !wu.v[k].is_zero() {
            return Err(ClassError::Identity(format!("v{k} = 0")));
        }
    }
    let sw = sw_from_wu(h, &wu);
    check_sw_identities(h, &wu, &sw).map_err(ClassError::Identity)?;
    Ok((wu, sw))
}

/// Returns the name of the first failing identity.
pub fn check_sw_identities(h: &CohomologyModel, wu: &WuClasses, sw: &SWClasses) -> Result<(), String> {
    let w = &sw.w;
    if !w[1].is_zero() {
        return Err("w1 = 0".into());
    }
    if wu.v[2] != w[2] {
        return Err("v2 = w2".into());
    }
    if wu.v[4] != w[4].xor(&h.cup2(2, &w[2], 2, &w[2])) {
        return Err("v4 = w4 + w2^2".into());
    }
    if w[6] != h.sq(2, 4, &wu.v[4]) {
        return Err("w6 = Sq2 v4".into());
    }
    let w2sq = h.cup2(2, &w[2], 2, &w[2]);
    let w2_4 = h.cup2(4, &w2sq, 4, &w2sq);
    if w[8] != h.cup2(4, &w[4], 4, &w[4]).xor(&w2_4) {
        return Err("w8 = w4^2 + w2^4".into());
    }
    if !w[9].is_zero() {
        return Err("w9 = 0".into());
    }
    for i in 1..=3 {
        if w[2 * i + 1] != h.sq(1, 2 * i, &w[2 * i]) {
            return Err(format!("w{} = Sq1 w{}", 2 * i + 1, 2 * i));
        }
    }
    Ok(())
}

/// Integral class reducing to `x`, with 0/1 coordinates, or `None` when `x`
/// has no lift. Agreement with β(x) = 0 is checked.
pub fn integral_lift(m: &CohomologyModel, i: usize, x: &BitVec) -> Result<Option<ZVec>, ClassError> {
    let sol = m.rho2_matrix(i).solve(x);
    let beta_zero = i >= m.dimension || CohomologyModel::z_is_zero(&m.beta(i, x));
    if sol.is_some() != beta_zero {
        return Err(ClassError::Consistency(format!("lift existence disagrees with β in degree {i}")));
    }
    Ok(sol.map(|s| m.z_normalize(i, s.to_bools().into_iter().map(|b| Int::from(b as u8)).collect())))
}

/// D_M = {x ∈ H¹ : x·w₂ ∈ ρ₂(TH³)}, checked against the annihilator of Sq²(ρ₂H⁶).
pub fn compute_dm(m: &CohomologyModel, w2: &BitVec) -> Result<Subspace, ClassError> {
    if m.dimension != 9 {
        return Err(ClassError::Dimension(m.dimension));
    }
    let torsion3 = m.rho2_torsion_image(3);
    let cols: Vec<BitVec> = m.f2_basis(1).iter().map(|x| torsion3.reduce(&m.cup2(1, x, 2, w2))).collect();
    let d = Subspace::spanned_by(m.f2_dim(1), F2Matrix::from_columns(m.f2_dim(3), cols).kernel().iter());
    let s = sq2_rho2_h6(m);
    let ann_cols: Vec<BitVec> = m
        .f2_basis(1)
        .iter()
        .map(|x| BitVec::from_bools(&s.basis().iter().map(|a| m.eval2(&m.cup2(1, x, 8, a))).collect::<Vec<_>>()))
        .collect();
    let ann = Subspace::spanned_by(m.f2_dim(1), F2Matrix::from_columns(s.dim(), ann_cols).kernel().iter());
    if !d.equals(&ann) {
        return Err(ClassError::Consistency("D_M differs from the annihilator of Sq2(rho2 H6)".into()));
    }
    Ok(d)
}

/// Sq²(ρ₂H⁶) ⊆ H⁸(F₂), with ρ₂H⁶ realized as ker β.
pub fn sq2_rho2_h6(m: &CohomologyModel) -> Subspace {
    Subspace::spanned_by(m.f2_dim(8), m.beta_kernel(6).iter().map(|y| m.sq(2, 6, y)).collect::<Vec<_>>().iter())
}

#[derive(Clone, Debug)]
pub struct CosetH8 {
    pub representative: BitVec,
    pub subspace: Subspace,
}

impl CosetH8 {
    pub fn is_zero(&self) -> bool {
        self.representative.is_zero()
    }

    pub fn subspace_basis(&self) -> Vec<BitVec> {
        self.subspace.basis()
    }

    pub fn add(&self, other: &CosetH8) -> CosetH8 {
        CosetH8 { representative: self.subspace.reduce(&self.representative.xor(&other.representative)), subspace: self.subspace.clone() }
    }
}

impl PartialEq for CosetH8 {
    fn eq(&self, other: &Self) -> bool {
        self.subspace.equals(&other.subspace) && self.subspace.contains(&self.representative.xor(&other.representative))
    }
}

pub fn coset_reduce(m: &CohomologyModel, x: &BitVec) -> CosetH8 {
    let subspace = sq2_rho2_h6(m);
    CosetH8 { representative: subspace.reduce(x), subspace }
}

/// All d with 2d = cv in degree 8, canonical (smallest residues) first.
pub fn half_products(m: &CohomologyModel, cv: &ZVec) -> Result<Vec<ZVec>, ClassError> {
    let orders = m.z_orders(8);
    let two = Int::from(2u8);
    let mut options: Vec<Vec<Int>> = Vec::new();
    for (e, o) in cv.iter().zip(&orders) {
        if int::is_zero(o) {
            if !int::is_even(e) {
                return Err(ClassError::NoHalf(format!("free coordinate {e} is odd")));
            }
            options.push(vec![e / &two]);
        } else if !int::is_even(o) {
            // 2 is invertible mod an odd order.
            let inv = (o + Int::from(1u8)) / &two;
            options.push(vec![int::reduce(&(e * inv), o)]);
        } else {
            if !int::is_even(e) {
                return Err(ClassError::NoHalf(format!("torsion coordinate {e} is odd modulo {o}")));
            }
            let h = e / &two;
            let half = o / &two;
            let mut opts = vec![int::reduce(&h, o), int::reduce(&(h + half), o)];
            opts.sort();
            options.push(opts);
        }
    }
    let mut out: Vec<ZVec> = vec![vec![]];
    for opts in options {
        out = out.into_iter().flat_map(|v| opts.iter().map(move |x| [v.clone(), vec![x.clone()]].concat())).collect();
    }
    Ok(out)
}

pub fn half_product(m: &CohomologyModel, c: &ZVec, v: &ZVec) -> Result<ZVec, ClassError> {
    let cv = m.cup_z(2, c, 6, v).ok_or_else(|| ClassError::NoHalf("integral products (2,6) missing".into()))?;
    Ok(half_products(m, &cv)?.remove(0))
}

/// σ_{w₄} = ⟨w₄ φ̂, [M]⟩; `None` when φ̂ is missing and w₄ ≠ 0.
pub fn sigma_w4(m: &ManifoldModel, sw: &SWClasses) -> Result<Option<bool>, ClassError> {
    if !sw.w[2].is_zero() {
        return Err(ClassError::NotSpin);
    }
    let h = &m.cohomology;
    if sw.w[4].is_zero() {
        return Ok(Some(false));
    }
    Ok(m.phi_hat.as_ref().map(|phi| h.eval2(&h.cup2(4, &sw.w[4], 5, phi))))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpincData {
    pub c: ZVec,
    pub v: ZVec,
    pub half_cv: ZVec,
    pub p_c: Option<ZVec>,
}

/// Source of the free parameters in lifts: `None` gives the canonical choice.
pub struct Choices<'a, R: Rng> {
    pub rng: Option<&'a mut R>,
}

impl<'a, R: Rng> Choices<'a, R> {
    pub fn canonical() -> Self {
        Choices { rng: None }
    }

    pub fn random(rng: &'a mut R) -> Self {
        Choices { rng: Some(rng) }
    }

    /// Adds 2·(random class) to a lift; every lift has this form.
    fn perturb(&mut self, m: &CohomologyModel, i: usize, z: ZVec) -> ZVec {
        let Some(rng) = self.rng.as_deref_mut() else { return z };
        let w: ZVec = (0..m.z_gens(i)).map(|_| Int::from(rng.gen_range(-3i64..=3))).collect();
        m.z_add(i, &z, &m.z_scale(i, &w, &Int::from(2u8)))
    }

    fn pick(&mut self, n: usize) -> usize {
        match self.rng.as_deref_mut() {
            Some(rng) => rng.gen_range(0..n),
            None => 0,
        }
    }
}

/// Lifts of w₂ and w₆ and a half product, when W₃ = 0.
pub fn spinc_data<R: Rng>(m: &CohomologyModel, sw: &SWClasses, choices: &mut Choices<R>) -> Result<Option<SpincData>, ClassError> {
    if !sw.w3_vanishes() {
        return Ok(None);
    }
    let c = integral_lift(m, 2, &sw.w[2])?.ok_or_else(|| ClassError::Consistency("w2 has no lift although W3 = 0".into()))?;
    let v = integral_lift(m, 6, &sw.w[6])?.ok_or_else(|| ClassError::Consistency("w6 has no lift although W3 = 0".into()))?;
    let c = choices.perturb(m, 2, c);
    let v = choices.perturb(m, 6, v);
    let cv = m.cup_z(2, &c, 6, &v).ok_or_else(|| ClassError::NoHalf("integral products (2,6) missing".into()))?;
    let halves = half_products(m, &cv)?;
    let half_cv = halves[choices.pick(halves.len())].clone();
    let p_c = integral_lift(m, 4, &sw.w[4])?;
    Ok(Some(SpincData { c, v, half_cv, p_c }))
}

/// The coset [w₈ − ρ₂(cv/2)] for given spin^c data.
pub fn omega_formula(m: &CohomologyModel, sw: &SWClasses, data: &SpincData) -> CosetH8 {
    coset_reduce(m, &sw.w[8].xor(&m.rho2(8, &data.half_cv)))
}

/// Cosets [w₈ − ρ₂(d)] for every half product d of the given c and v.
pub fn omega_formula_all(m: &CohomologyModel, sw: &SWClasses, c: &ZVec, v: &ZVec) -> Result<Vec<CosetH8>, ClassError> {
    let cv = m.cup_z(2, c, 6, v).ok_or_else(|| ClassError::NoHalf("integral products (2,6) missing".into()))?;
    Ok(half_products(m, &cv)?.iter().map(|d| coset_reduce(m, &sw.w[8].xor(&m.rho2(8, d)))).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::library::library;

    #[test]
    fn s1xhp2_classes() {
        let m = library("S1xHP2").unwrap();
        let (wu, sw) = sw_classes(&m).unwrap();
        assert!(wu.v2().is_zero());
        assert_eq!(wu.v4(), &m.named(4, "u").unwrap());
        assert_eq!(sw.w[8], m.named(8, "u^2").unwrap());
        assert_eq!(sigma_w4(&m, &sw).unwrap(), Some(true));
    }

    #[test]
    fn half_products_enumerate_two_torsion() {
        let m = crate::builders::rp(9);
        // H⁸(RP⁹; Z) = Z/2, so 2d = 0 has two solutions.
        let sols = half_products(&m, &vec![Int::from(0u8)]).unwrap();
        assert_eq!(sols, vec![vec![Int::from(0u8)], vec![Int::from(1u8)]]);
    }
}
