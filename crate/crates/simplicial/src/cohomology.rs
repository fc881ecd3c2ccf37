//! Cohomology groups of simplicial complexes with representative cocycles,
//! and the induced operations on classes.
//!
//! Integral and Z/2ʲ groups come from Smith normal forms of the coboundary
//! matrices. Mod 2 groups use bit-packed elimination by default; the lattice
//! route is available for cross-checking.

use crate::cochain::{Coefficients, Cochain};
use crate::complex::SimplicialComplex;
use crate::f2::{BitVec, Echelon, F2Matrix, TrackedEchelon};
use crate::int::{self, Int};
use crate::snf::{smith_normal_form_tracked, Track, ZMatrix};
use crate::Error;
use std::fmt;

/// One graded piece: `Z^free_rank ⊕ ⊕ Z/torsion[k]`, with a representative cocycle
/// per generator (free generators first, then torsion in increasing order).
#[derive(Clone, Debug)]
pub struct GradedGroup {
    pub degree: usize,
    pub free_rank: usize,
    pub torsion: Vec<Int>,
    pub basis_cocycles: Vec<Cochain>,
}

impl GradedGroup {
    /// Order of each generator, 0 for free ones.
    pub fn orders(&self) -> Vec<Int> {
        let mut o = vec![Int::from(0u8); self.free_rank];
        o.extend(self.torsion.iter().cloned());
        o
    }

    pub fn num_generators(&self) -> usize {
        self.free_rank + self.torsion.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.num_generators() == 0
    }
}

impl fmt::Display for GradedGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for t in &self.torsion {
            parts.push(format!("Z/{t}"));
        }
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// A cohomology class in generator coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Class {
    pub degree: usize,
    pub coords: Vec<Int>,
}

impl Class {
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(int::is_zero)
    }

    pub fn to_bits(&self) -> BitVec {
        BitVec::from_indices(self.coords.len(), self.coords.iter().enumerate().filter(|(_, x)| int::parity(x)).map(|(i, _)| i))
    }
}

/// How to compute the groups.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    /// Bit-packed elimination for F₂, lattice route otherwise.
    Auto,
    /// Smith-normal-form lattice route for every ring.
    Lattice,
}

#[derive(Clone, Debug)]
enum Coords {
    F2 {
        echelon: TrackedEchelon,
    },
    Lattice {
        /// Rows of V⁻¹ for the retained lattice directions.
        v_inv: ZMatrix,
        scale: Vec<Int>,
        /// Rows of the relation-SNF transform, one per generator.
        u_rows: ZMatrix,
    },
}

#[derive(Clone, Debug)]
pub struct Cohomology {
    complex: SimplicialComplex,
    coeffs: Coefficients,
    groups: Vec<GradedGroup>,
    coords: Vec<Coords>,
}

impl Cohomology {
    pub fn compute(complex: &SimplicialComplex, coeffs: Coefficients) -> Self {
        Self::compute_with(complex, coeffs, Method::Auto)
    }

    pub fn compute_with(complex: &SimplicialComplex, coeffs: Coefficients, method: Method) -> Self {
        let top = complex.dimension();
        let mut groups = Vec::with_capacity(top + 1);
        let mut coords = Vec::with_capacity(top + 1);
        if coeffs.is_f2() && method == Method::Auto {
            let deltas: Vec<F2Matrix> = (0..=top).map(|d| f2_coboundary(complex, d)).collect();
            for d in 0..=top {
                let prev = if d == 0 { None } else { Some(&deltas[d - 1]) };
                let (g, c) = f2_degree(complex, d, &deltas[d], prev);
                groups.push(g);
                coords.push(c);
            }
        } else {
            let deltas: Vec<ZMatrix> = (0..=top).map(|d| complex.coboundary_matrix(d)).collect();
            for d in 0..=top {
                let prev = if d == 0 { None } else { Some(&deltas[d - 1]) };
                let (g, c) = lattice_degree(complex, coeffs, d, &deltas[d], prev);
                groups.push(g);
                coords.push(c);
            }
        }
        Cohomology { complex: complex.clone(), coeffs, groups, coords }
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn coeffs(&self) -> Coefficients {
        self.coeffs
    }

    pub fn groups(&self) -> &[GradedGroup] {
        &self.groups
    }

    /// The group in degree `d`; empty above the dimension.
    pub fn group(&self, d: usize) -> GradedGroup {
        self.groups.get(d).cloned().unwrap_or(GradedGroup { degree: d, free_rank: 0, torsion: vec![], basis_cocycles: vec![] })
    }

    pub fn num_generators(&self, d: usize) -> usize {
        self.groups.get(d).map_or(0, GradedGroup::num_generators)
    }

    /// F₂-dimension of each group (meaningful for mod-2 coefficients).
    pub fn dims(&self) -> Vec<usize> {
        self.groups.iter().map(GradedGroup::num_generators).collect()
    }

    fn orders(&self, d: usize) -> Vec<Int> {
        self.groups.get(d).map_or_else(Vec::new, GradedGroup::orders)
    }

    pub fn zero(&self, d: usize) -> Class {
        Class { degree: d, coords: vec![Int::from(0u8); self.num_generators(d)] }
    }

    pub fn generator(&self, d: usize, k: usize) -> Class {
        let mut c = self.zero(d);
        c.coords[k] = Int::from(1u8);
        c
    }

    pub fn generators(&self, d: usize) -> Vec<Class> {
        (0..self.num_generators(d)).map(|k| self.generator(d, k)).collect()
    }

    /// Reduces coordinates modulo generator orders.
    pub fn normalize(&self, mut c: Class) -> Class {
        let orders = self.orders(c.degree);
        assert_eq!(c.coords.len(), orders.len(), "class has wrong number of coordinates");
        for (x, o) in c.coords.iter_mut().zip(&orders) {
            *x = int::reduce(x, o);
        }
        c
    }

    pub fn class_from_coords(&self, d: usize, coords: Vec<Int>) -> Class {
        self.normalize(Class { degree: d, coords })
    }

    pub fn class_from_bits(&self, d: usize, bits: &BitVec) -> Class {
        self.class_from_coords(d, bits.to_bools().into_iter().map(|b| Int::from(u8::from(b))).collect())
    }

    pub fn add(&self, a: &Class, b: &Class) -> Class {
        assert_eq!(a.degree, b.degree, "adding classes of different degree");
        let coords = a.coords.iter().zip(&b.coords).map(|(x, y)| x + y).collect();
        self.class_from_coords(a.degree, coords)
    }

    pub fn scale(&self, a: &Class, k: &Int) -> Class {
        self.class_from_coords(a.degree, a.coords.iter().map(|x| x * k).collect())
    }

    /// The class of a cocycle; errors if the cochain is not a cocycle.
    pub fn class_of(&self, z: &Cochain) -> Result<Class, Error> {
        if z.coeffs() != self.coeffs {
            return Err(Error::RingMismatch);
        }
        if z.complex() != &self.complex {
            return Err(Error::ComplexMismatch);
        }
        let d = z.degree();
        if d >= self.groups.len() {
            return Ok(self.zero(d));
        }
        match &self.coords[d] {
            Coords::F2 { echelon } => {
                let (res, combo) = echelon.reduce(&z.to_bits());
                if !res.is_zero() {
                    return Err(Error::NotACocycle);
                }
                Ok(self.class_from_bits(d, &combo))
            }
            Coords::Lattice { v_inv, scale, u_rows } => {
                if !z.is_cocycle() {
                    return Err(Error::NotACocycle);
                }
                let w = v_inv.apply(&z.to_dense());
                let mut t = Vec::with_capacity(w.len());
                for (x, s) in w.iter().zip(scale) {
                    // Values of a mod-m cochain are only defined mod m; s divides m.
                    let r = int::reduce(x, s);
                    if !int::is_zero(&r) {
                        return Err(Error::Consistency("cocycle outside the cocycle lattice".into()));
                    }
                    t.push(x / s);
                }
                Ok(self.class_from_coords(d, u_rows.apply(&t)))
            }
        }
    }

    pub fn representative(&self, c: &Class) -> Cochain {
        let g = self.group(c.degree);
        assert_eq!(c.coords.len(), g.num_generators(), "class has wrong number of coordinates");
        let mut out = Cochain::zero(&self.complex, c.degree, self.coeffs);
        for (x, z) in c.coords.iter().zip(&g.basis_cocycles) {
            if !int::is_zero(x) {
                out = out.add(&z.scale(x)).expect("same complex and ring");
            }
        }
        out
    }

    pub fn cup(&self, a: &Class, b: &Class) -> Class {
        let x = self.representative(a);
        let y = self.representative(b);
        self.class_of(&x.cup(&y).expect("same ring")).expect("cup of cocycles is a cocycle")
    }

    /// Sqᵏ[x] = [x ∪_{deg x − k} x]; mod-2 coefficients only.
    pub fn sq(&self, k: usize, a: &Class) -> Result<Class, Error> {
        if !self.coeffs.is_f2() {
            return Err(Error::RingMismatch);
        }
        let p = a.degree;
        if k > p {
            return Ok(self.zero(p + k));
        }
        let x = self.representative(a);
        self.class_of(&x.cup_i(&x, p - k)?)
    }

    /// Bockstein of the sequence Z → Z → Z/2ʲ: lift, coboundary, divide by 2ʲ.
    /// `self` must have Z/2ʲ coefficients and `target` integer coefficients.
    pub fn bockstein(&self, a: &Class, target: &Cohomology) -> Result<Class, Error> {
        let Coefficients::Mod2Pow(j) = self.coeffs else { return Err(Error::RingMismatch) };
        if target.coeffs != Coefficients::Integers || target.complex != self.complex {
            return Err(Error::RingMismatch);
        }
        let lifted = self.representative(a).lift().coboundary();
        let halved = lifted
            .divide_exact(&int::pow2(j))
            .map_err(|_| Error::Consistency("Bockstein lift has a coboundary not divisible by 2^j".into()))?;
        target.class_of(&halved)
    }

    /// Coefficient reduction Z → Z/2ʲ (or Z/2ʲ → Z/2ⁱ, i ≤ j) on classes.
    pub fn reduce(&self, a: &Class, target: &Cohomology) -> Result<Class, Error> {
        if target.complex != self.complex {
            return Err(Error::ComplexMismatch);
        }
        target.class_of(&self.representative(a).reduce_to(target.coeffs)?)
    }

    /// Matrix (as columns in target coordinates) of a map applied to each generator.
    pub fn map_matrix<F>(&self, d: usize, f: F) -> Result<Vec<Class>, Error>
    where
        F: FnMut(&Class) -> Result<Class, Error>,
    {
        self.generators(d).iter().map(f).collect()
    }

    /// Transports every basis cocycle of degree `d` to `other` (same labelled complex, possibly
    /// reordered) and returns their classes there: the matrix of the canonical isomorphism.
    pub fn transport_matrix(&self, other: &Cohomology, d: usize) -> Result<Vec<Class>, Error> {
        self.group(d).basis_cocycles.iter().map(|z| other.class_of(&z.transport(&other.complex)?)).collect()
    }

    pub fn transport_class(&self, a: &Class, other: &Cohomology) -> Result<Class, Error> {
        other.class_of(&self.representative(a).transport(&other.complex)?)
    }
}

/// δ: Cᵈ → Cᵈ⁺¹ over F₂, by columns.
fn f2_coboundary(complex: &SimplicialComplex, d: usize) -> F2Matrix {
    let rows = complex.count(d + 1);
    let mut cols = vec![BitVec::zeros(rows); complex.count(d)];
    let mut face = Vec::with_capacity(d + 1);
    for (r, s) in complex.simplices(d + 1).iter().enumerate() {
        for skip in 0..s.len() {
            face.clear();
            face.extend(s.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v));
            cols[complex.index_of(&face).unwrap()].set(r, true);
        }
    }
    F2Matrix::from_columns(rows, cols)
}

fn f2_degree(
    complex: &SimplicialComplex,
    d: usize,
    delta: &F2Matrix,
    prev: Option<&F2Matrix>,
) -> (GradedGroup, Coords) {
    let n = complex.count(d);
    let kernel = delta.kernel();
    let boundaries: Vec<BitVec> = prev.map_or_else(Vec::new, |p| p.columns().to_vec());
    let mut b = Echelon::new(n);
    for v in &boundaries {
        b.insert(v);
    }
    let h = kernel.len() - b.rank();
    let mut e = TrackedEchelon::new(n, h);
    for v in boundaries {
        e.insert(v, BitVec::zeros(h));
    }
    let mut reps = Vec::with_capacity(h);
    for z in kernel {
        if reps.len() == h {
            break;
        }
        if e.insert(z.clone(), BitVec::unit(h, reps.len())).is_none() {
            reps.push(Cochain::from_bits(complex, d, &z));
        }
    }
    assert_eq!(reps.len(), h, "cocycles must span the cohomology");
    let g = GradedGroup { degree: d, free_rank: 0, torsion: vec![Int::from(2u8); h], basis_cocycles: reps };
    (g, Coords::F2 { echelon: e })
}

fn lattice_degree(
    complex: &SimplicialComplex,
    coeffs: Coefficients,
    d: usize,
    delta: &ZMatrix,
    prev: Option<&ZMatrix>,
) -> (GradedGroup, Coords) {
    let n = complex.count(d);
    let m = coeffs.modulus();
    let finite = !int::is_zero(&m);
    let snf = smith_normal_form_tracked(delta, Track { u: false, u_inv: false, v: true, v_inv: true });
    let (v, v_inv) = (snf.v.unwrap(), snf.v_inv.unwrap());

    // Lattice of cocycles: w = V⁻¹z with w_k ∈ s_k·Z.
    let mut keep = Vec::new();
    let mut scale = Vec::new();
    for k in 0..n {
        if k < snf.rank {
            if finite {
                keep.push(k);
                scale.push(&m / int::gcd(&m, &snf.diagonal[k]));
            }
        } else {
            keep.push(k);
            scale.push(Int::from(1u8));
        }
    }
    let big_n = keep.len();
    let v_inv_k = if keep.is_empty() {
        ZMatrix::zeros(0, n)
    } else {
        ZMatrix::from_rows(keep.iter().map(|&k| v_inv.row(k).to_vec()).collect())
    };

    // Relations in lattice coordinates t = S⁻¹w.
    let mut rel_cols: Vec<Vec<Int>> = Vec::new();
    if let Some(b) = prev {
        let vb = v_inv_k.mul(b);
        for j in 0..vb.cols() {
            let col = vb.column(j);
            let t: Vec<Int> = col
                .iter()
                .zip(&scale)
                .map(|(x, s)| {
                    let x = if finite { int::reduce(x, &m) } else { x.clone() };
                    debug_assert!(int::is_zero(&int::reduce(&x, s)));
                    x / s
                })
                .collect();
            if t.iter().any(|x| !int::is_zero(x)) {
                rel_cols.push(t);
            }
        }
    }
    if finite {
        for (k, s) in scale.iter().enumerate() {
            let mut c = vec![Int::from(0u8); big_n];
            c[k] = &m / s;
            rel_cols.push(c);
        }
    }
    let rel = ZMatrix::from_columns(big_n, &rel_cols);
    let rs = smith_normal_form_tracked(&rel, Track { u: true, u_inv: true, v: false, v_inv: false });
    let (u, u_inv) = (rs.u.unwrap(), rs.u_inv.unwrap());

    let mut free = Vec::new();
    let mut tors = Vec::new();
    for k in 0..big_n {
        if k < rs.rank {
            if !int::is_one(&rs.diagonal[k]) {
                tors.push((k, rs.diagonal[k].clone()));
            }
        } else {
            free.push(k);
        }
    }
    let order: Vec<usize> = free.iter().copied().chain(tors.iter().map(|(k, _)| *k)).collect();
    let reps: Vec<Cochain> = order
        .iter()
        .map(|&k| {
            let t = u_inv.column(k);
            let w: Vec<Int> = t.iter().zip(&scale).map(|(x, s)| x * s).collect();
            let mut z = vec![Int::from(0u8); n];
            for (idx, &kk) in keep.iter().enumerate() {
                if int::is_zero(&w[idx]) {
                    continue;
                }
                for (r, zr) in z.iter_mut().enumerate() {
                    let c = v.get(r, kk);
                    if !int::is_zero(c) {
                        *zr += c * &w[idx];
                    }
                }
            }
            Cochain::from_dense(complex, d, coeffs, &z)
        })
        .collect();
    let u_rows = ZMatrix::from_rows(order.iter().map(|&k| u.row(k).to_vec()).collect());
    let u_rows = if order.is_empty() { ZMatrix::zeros(0, big_n) } else { u_rows };
    let g = GradedGroup {
        degree: d,
        free_rank: free.len(),
        torsion: tors.into_iter().map(|(_, o)| o).collect(),
        basis_cocycles: reps,
    };
    (g, Coords::Lattice { v_inv: v_inv_k, scale, u_rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triangulations;

    fn summary(h: &Cohomology) -> Vec<String> {
        h.groups().iter().map(|g| g.to_string()).collect()
    }

    #[test]
    fn sphere_integral() {
        let h = Cohomology::compute(&triangulations::sphere(4), Coefficients::Integers);
        assert_eq!(summary(&h), vec!["Z", "0", "0", "0", "Z"]);
    }

    #[test]
    fn rp2_groups() {
        let k = triangulations::rp2();
        let z = Cohomology::compute(&k, Coefficients::Integers);
        assert_eq!(summary(&z), vec!["Z", "0", "Z/2"]);
        let f2 = Cohomology::compute(&k, Coefficients::F2);
        assert_eq!(f2.dims(), vec![1, 1, 1]);
        let z4 = Cohomology::compute(&k, Coefficients::Mod2Pow(2));
        assert_eq!(summary(&z4), vec!["Z/4", "Z/2", "Z/2"]);
    }

    #[test]
    fn representatives_round_trip() {
        for coeffs in [Coefficients::Integers, Coefficients::F2, Coefficients::Mod2Pow(3)] {
            let h = Cohomology::compute(&triangulations::torus(), coeffs);
            for d in 0..3 {
                for g in h.generators(d) {
                    let z = h.representative(&g);
                    assert!(z.is_cocycle());
                    assert_eq!(h.class_of(&z).unwrap(), g);
                    // Adding a coboundary does not change the class.
                    if d > 0 {
                        let b = Cochain::from_values(h.complex(), d - 1, coeffs, [(0, Int::from(1u8))]).coboundary();
                        assert_eq!(h.class_of(&z.add(&b).unwrap()).unwrap(), g);
                    }
                }
            }
        }
    }

    #[test]
    fn non_cocycle_rejected() {
        let k = triangulations::torus();
        let h = Cohomology::compute(&k, Coefficients::F2);
        let x = Cochain::from_values(&k, 1, Coefficients::F2, [(0, Int::from(1u8))]);
        assert!(matches!(h.class_of(&x), Err(Error::NotACocycle)));
    }
}
