//! Algebraic cohomology models of closed manifolds.
//!
//! Integral classes are coordinate vectors over the degree's integral
//! generators (free first, then torsion); mod-2 classes are bit vectors over the
//! named F₂ basis. All tables are stored as columns: entry `k` is the image of
//! the `k`-th source generator.

use ninefold_simplicial::f2::{BitVec, F2Matrix};
use ninefold_simplicial::int::{self, Int};
use std::collections::BTreeMap;

/// Integral coordinate vector.
pub type ZVec = Vec<Int>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Degree {
    pub z_rank: usize,
    /// Orders of the torsion generators, ascending.
    pub z_torsion: Vec<Int>,
    pub f2_basis: Vec<String>,
}

impl Degree {
    pub fn zero() -> Self {
        Degree { z_rank: 0, z_torsion: vec![], f2_basis: vec![] }
    }

    pub fn z_gens(&self) -> usize {
        self.z_rank + self.z_torsion.len()
    }

    /// Generator orders, 0 for free generators.
    pub fn z_orders(&self) -> Vec<Int> {
        let mut o = vec![Int::from(0u8); self.z_rank];
        o.extend(self.z_torsion.iter().cloned());
        o
    }

    pub fn f2_dim(&self) -> usize {
        self.f2_basis.len()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Orientation {
    /// The orientation class is `top_sign` times the integral top generator.
    pub top_sign: i64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CohomologyModel {
    pub dimension: usize,
    pub graded: Vec<Degree>,
    /// `rho2[i][g]`: reduction of integral generator `g` of degree `i`.
    pub rho2: Vec<Vec<BitVec>>,
    /// `beta[i][b]`: Bockstein of F₂ basis element `b` of degree `i`, in degree `i+1` coordinates.
    pub beta: Vec<Vec<ZVec>>,
    /// `sq[(k, i)][b]`: Sqᵏ of basis element `b` of degree `i`.
    pub sq: BTreeMap<(usize, usize), Vec<BitVec>>,
    /// `cup2[(i, j)][p][q]` for `i ≤ j`.
    pub cup2: BTreeMap<(usize, usize), Vec<Vec<BitVec>>>,
    /// `cup_z[(i, j)][p][q]` for `i ≤ j`, only for the stored pairs.
    pub cup_z: BTreeMap<(usize, usize), Vec<Vec<ZVec>>>,
    pub orientation: Option<Orientation>,
}

/// Externally supplied value of the degree-8 coset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmegaDatum {
    pub representative: BitVec,
    pub determined: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ManifoldModel {
    pub label: String,
    pub cohomology: CohomologyModel,
    pub phi_hat: Option<BitVec>,
    pub omega_pc: Option<OmegaDatum>,
}

/// Integral product pairs a model of dimension `n` must carry.
pub fn required_cup_z_pairs(n: usize) -> Vec<(usize, usize)> {
    let mut v: Vec<(usize, usize)> = (0..=n / 2).map(|k| (k, n - k)).collect();
    if n >= 8 {
        v.push((2, 6));
    }
    v.sort_unstable();
    v.dedup();
    v
}

impl CohomologyModel {
    pub fn n(&self) -> usize {
        self.dimension
    }

    pub fn degree(&self, i: usize) -> &Degree {
        static EMPTY: std::sync::OnceLock<Degree> = std::sync::OnceLock::new();
        self.graded.get(i).unwrap_or_else(|| EMPTY.get_or_init(Degree::zero))
    }

    pub fn f2_dim(&self, i: usize) -> usize {
        self.degree(i).f2_dim()
    }

    pub fn z_gens(&self, i: usize) -> usize {
        self.degree(i).z_gens()
    }

    pub fn z_orders(&self, i: usize) -> Vec<Int> {
        self.degree(i).z_orders()
    }

    pub fn names(&self, i: usize) -> &[String] {
        &self.degree(i).f2_basis
    }

    pub fn f2_zero(&self, i: usize) -> BitVec {
        BitVec::zeros(self.f2_dim(i))
    }

    pub fn f2_unit(&self, i: usize, b: usize) -> BitVec {
        BitVec::unit(self.f2_dim(i), b)
    }

    pub fn f2_basis(&self, i: usize) -> Vec<BitVec> {
        (0..self.f2_dim(i)).map(|b| self.f2_unit(i, b)).collect()
    }

    pub fn z_zero(&self, i: usize) -> ZVec {
        vec![Int::from(0u8); self.z_gens(i)]
    }

    pub fn z_unit(&self, i: usize, g: usize) -> ZVec {
        let mut v = self.z_zero(i);
        v[g] = Int::from(1u8);
        v
    }

    pub fn z_normalize(&self, i: usize, mut v: ZVec) -> ZVec {
        for (x, o) in v.iter_mut().zip(self.z_orders(i)) {
            *x = int::reduce(x, &o);
        }
        v
    }

    pub fn z_add(&self, i: usize, a: &ZVec, b: &ZVec) -> ZVec {
        self.z_normalize(i, a.iter().zip(b).map(|(x, y)| x + y).collect())
    }

    pub fn z_scale(&self, i: usize, a: &ZVec, k: &Int) -> ZVec {
        self.z_normalize(i, a.iter().map(|x| x * k).collect())
    }

    pub fn z_is_zero(v: &ZVec) -> bool {
        v.iter().all(int::is_zero)
    }

    /// Sqᵏ on a degree-`i` class. Missing tables read as zero, except Sq⁰ = id.
    pub fn sq(&self, k: usize, i: usize, x: &BitVec) -> BitVec {
        let t = i + k;
        if t > self.dimension {
            return BitVec::zeros(0);
        }
        match self.sq.get(&(k, i)) {
            Some(cols) => apply_cols(self.f2_dim(t), cols, x),
            None if k == 0 => x.clone(),
            None => self.f2_zero(t),
        }
    }

    pub fn sq_matrix(&self, k: usize, i: usize) -> F2Matrix {
        F2Matrix::from_columns(self.f2_dim(i + k), self.f2_basis(i).iter().map(|b| self.sq(k, i, b)).collect())
    }

    /// Mod-2 cup product of a degree-`i` and a degree-`j` class.
    pub fn cup2(&self, i: usize, x: &BitVec, j: usize, y: &BitVec) -> BitVec {
        let t = i + j;
        if t > self.dimension {
            return BitVec::zeros(0);
        }
        let (a, b, xa, yb) = if i <= j { (i, j, x, y) } else { (j, i, y, x) };
        let mut out = self.f2_zero(t);
        let Some(table) = self.cup2.get(&(a, b)) else { return out };
        for p in xa.ones() {
            for q in yb.ones() {
                out.xor_assign(&table[p][q]);
            }
        }
        out
    }

    pub fn rho2(&self, i: usize, z: &ZVec) -> BitVec {
        let mut out = self.f2_zero(i);
        for (g, x) in z.iter().enumerate() {
            if int::parity(x) {
                out.xor_assign(&self.rho2[i][g]);
            }
        }
        out
    }

    pub fn rho2_matrix(&self, i: usize) -> F2Matrix {
        F2Matrix::from_columns(self.f2_dim(i), self.rho2.get(i).cloned().unwrap_or_default())
    }

    /// β: Hⁱ(F₂) → Hⁱ⁺¹(Z).
    pub fn beta(&self, i: usize, x: &BitVec) -> ZVec {
        if i >= self.dimension {
            return vec![];
        }
        let mut out = self.z_zero(i + 1);
        for b in x.ones() {
            for (o, v) in out.iter_mut().zip(&self.beta[i][b]) {
                *o += v;
            }
        }
        self.z_normalize(i + 1, out)
    }

    /// Integral product, if the pair (in either order) is stored.
    pub fn cup_z(&self, i: usize, a: &ZVec, j: usize, b: &ZVec) -> Option<ZVec> {
        let t = i + j;
        if t > self.dimension {
            return Some(vec![]);
        }
        let (lo, hi, x, y, sign) = if i <= j { (i, j, a, b, 1i64) } else { (j, i, b, a, if i * j % 2 == 1 { -1 } else { 1 }) };
        let table = self.cup_z.get(&(lo, hi))?;
        let mut out = self.z_zero(t);
        for (p, xp) in x.iter().enumerate() {
            if int::is_zero(xp) {
                continue;
            }
            for (q, yq) in y.iter().enumerate() {
                if int::is_zero(yq) {
                    continue;
                }
                let c = xp * yq;
                for (o, v) in out.iter_mut().zip(&table[p][q]) {
                    *o += &c * v;
                }
            }
        }
        let s = Int::from(sign);
        Some(self.z_normalize(t, out.into_iter().map(|x| x * &s).collect()))
    }

    pub fn is_orientable(&self) -> bool {
        self.orientation.is_some()
    }

    /// ⟨x, [M]⟩ mod 2 for a top-degree class.
    pub fn eval2(&self, x: &BitVec) -> bool {
        debug_assert_eq!(x.len(), self.f2_dim(self.dimension));
        x.len() == 1 && x.get(0)
    }

    /// ⟨z, [M]⟩ for a top-degree integral class of an oriented model.
    pub fn eval_z(&self, z: &ZVec) -> Option<Int> {
        let o = self.orientation?;
        Some(&z[0] * Int::from(o.top_sign))
    }

    /// Human-readable sum of basis names.
    pub fn format_f2(&self, i: usize, x: &BitVec) -> String {
        let names = self.names(i);
        let terms: Vec<&str> = x.ones().map(|b| names[b].as_str()).collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }

    pub fn format_z(&self, i: usize, z: &ZVec) -> String {
        if Self::z_is_zero(z) {
            return "0".into();
        }
        let orders = self.z_orders(i);
        let terms: Vec<String> = z
            .iter()
            .enumerate()
            .filter(|(_, x)| !int::is_zero(x))
            .map(|(g, x)| {
                let gen = if int::is_zero(&orders[g]) { format!("g{i}.{g}") } else { format!("t{i}.{g}[{}]", orders[g]) };
                if int::is_one(x) {
                    gen
                } else {
                    format!("{x}*{gen}")
                }
            })
            .collect();
        terms.join(" + ")
    }

    /// ρ₂ of the torsion subgroup in degree `i`.
    pub fn rho2_torsion_image(&self, i: usize) -> ninefold_simplicial::Subspace {
        let d = self.degree(i);
        ninefold_simplicial::Subspace::spanned_by(self.f2_dim(i), self.rho2[i][d.z_rank..].iter())
    }

    /// ker β in degree `i`, equal to ρ₂(Hⁱ) on a valid model.
    pub fn beta_kernel(&self, i: usize) -> Vec<BitVec> {
        if i >= self.dimension {
            return self.f2_basis(i);
        }
        // β takes values of order ≤ 2, so each coordinate is 0 or order/2 and
        // "coordinate is nonzero" is F₂-linear.
        let rows = self.z_gens(i + 1);
        let cols: Vec<BitVec> = self.beta[i]
            .iter()
            .map(|v| BitVec::from_indices(rows, v.iter().enumerate().filter(|(_, x)| !int::is_zero(x)).map(|(k, _)| k)))
            .collect();
        F2Matrix::from_columns(rows, cols).kernel()
    }
}

pub(crate) fn apply_cols(dim: usize, cols: &[BitVec], x: &BitVec) -> BitVec {
    let mut out = BitVec::zeros(dim);
    for b in x.ones() {
        out.xor_assign(&cols[b]);
    }
    out
}

impl ManifoldModel {
    pub fn new(label: impl Into<String>, cohomology: CohomologyModel) -> Self {
        ManifoldModel { label: label.into(), cohomology, phi_hat: None, omega_pc: None }
    }

    pub fn with_phi_hat(mut self, phi: BitVec) -> Self {
        self.phi_hat = Some(phi);
        self
    }

    pub fn h(&self) -> &CohomologyModel {
        &self.cohomology
    }

    /// Basis vector named `name` in degree `i`.
    pub fn named(&self, i: usize, name: &str) -> Option<BitVec> {
        self.cohomology.names(i).iter().position(|n| n == name).map(|b| self.cohomology.f2_unit(i, b))
    }
}
