//! Sparse simplicial cochains with Alexander–Whitney and Steenrod ∪ᵢ products.

use crate::complex::SimplicialComplex;
use crate::f2::BitVec;
use crate::int::{self, Int};
use crate::Error;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Coefficient ring of a cochain: the integers or Z/2ʲ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Coefficients {
    Integers,
    Mod2Pow(u32),
}

impl Coefficients {
    pub const F2: Coefficients = Coefficients::Mod2Pow(1);

    /// 0 for the integers.
    pub fn modulus(self) -> Int {
        match self {
            Coefficients::Integers => Int::from(0u8),
            Coefficients::Mod2Pow(j) => int::pow2(j),
        }
    }

    pub fn reduce(self, x: &Int) -> Int {
        int::reduce(x, &self.modulus())
    }

    pub fn is_f2(self) -> bool {
        self == Coefficients::F2
    }
}

#[derive(Clone, Debug)]
pub struct Cochain {
    complex: SimplicialComplex,
    degree: usize,
    coeffs: Coefficients,
    values: BTreeMap<usize, Int>,
}

impl PartialEq for Cochain {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree && self.coeffs == other.coeffs && self.values == other.values && self.complex == other.complex
    }
}

impl Cochain {
    pub fn zero(complex: &SimplicialComplex, degree: usize, coeffs: Coefficients) -> Self {
        Cochain { complex: complex.clone(), degree, coeffs, values: BTreeMap::new() }
    }

    /// The 0-cochain with value 1 on every vertex.
    pub fn unit(complex: &SimplicialComplex, coeffs: Coefficients) -> Self {
        Self::from_values(complex, 0, coeffs, (0..complex.count(0)).map(|i| (i, Int::from(1u8))))
    }

    /// Values are reduced into the ring; zeros are dropped; repeated indices add.
    pub fn from_values(
        complex: &SimplicialComplex,
        degree: usize,
        coeffs: Coefficients,
        values: impl IntoIterator<Item = (usize, Int)>,
    ) -> Self {
        let mut c = Self::zero(complex, degree, coeffs);
        let n = complex.count(degree);
        for (i, x) in values {
            assert!(i < n, "simplex index {i} out of range for degree {degree}");
            c.add_at(i, &x);
        }
        c
    }

    pub fn from_dense(complex: &SimplicialComplex, degree: usize, coeffs: Coefficients, values: &[Int]) -> Self {
        assert_eq!(values.len(), complex.count(degree), "dense cochain length mismatch");
        Self::from_values(complex, degree, coeffs, values.iter().cloned().enumerate())
    }

    pub fn from_bits(complex: &SimplicialComplex, degree: usize, bits: &BitVec) -> Self {
        assert_eq!(bits.len(), complex.count(degree), "bit cochain length mismatch");
        Self::from_values(complex, degree, Coefficients::F2, bits.ones().map(|i| (i, Int::from(1u8))))
    }

    /// Cochain given by its value on simplices written as vertex-position lists.
    pub fn from_simplices(
        complex: &SimplicialComplex,
        degree: usize,
        coeffs: Coefficients,
        values: &[(Vec<u32>, i64)],
    ) -> Result<Self, Error> {
        let mut out = Vec::new();
        for (s, x) in values {
            let mut s = s.clone();
            s.sort_unstable();
            if s.len() != degree + 1 {
                return Err(Error::DegreeMismatch { expected: degree, found: s.len().saturating_sub(1) });
            }
            let i = complex.index_of(&s).ok_or_else(|| Error::InvalidComplex(format!("{s:?} is not a simplex")))?;
            out.push((i, Int::from(*x)));
        }
        Ok(Self::from_values(complex, degree, coeffs, out))
    }

    fn add_at(&mut self, i: usize, x: &Int) {
        let e = self.values.entry(i).or_insert_with(|| Int::from(0u8));
        *e += x;
        let r = self.coeffs.reduce(e);
        if int::is_zero(&r) {
            self.values.remove(&i);
        } else {
            *e = r;
        }
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> Coefficients {
        self.coeffs
    }

    pub fn get(&self, i: usize) -> Int {
        self.values.get(&i).cloned().unwrap_or_else(|| Int::from(0u8))
    }

    pub fn support(&self) -> impl Iterator<Item = (usize, &Int)> {
        self.values.iter().map(|(&i, x)| (i, x))
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn to_dense(&self) -> Vec<Int> {
        let mut v = vec![Int::from(0u8); self.complex.count(self.degree)];
        for (&i, x) in &self.values {
            v[i] = x.clone();
        }
        v
    }

    pub fn to_bits(&self) -> BitVec {
        BitVec::from_indices(self.complex.count(self.degree), self.values.iter().filter(|(_, x)| int::parity(x)).map(|(&i, _)| i))
    }

    fn check_compatible(&self, other: &Cochain) -> Result<(), Error> {
        if self.coeffs != other.coeffs {
            return Err(Error::RingMismatch);
        }
        if self.complex != other.complex {
            return Err(Error::ComplexMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Cochain) -> Result<Cochain, Error> {
        self.check_compatible(other)?;
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch { expected: self.degree, found: other.degree });
        }
        let mut out = self.clone();
        for (&i, x) in &other.values {
            out.add_at(i, x);
        }
        Ok(out)
    }

    pub fn scale(&self, k: &Int) -> Cochain {
        Self::from_values(&self.complex, self.degree, self.coeffs, self.values.iter().map(|(&i, x)| (i, x * k)))
    }

    pub fn neg(&self) -> Cochain {
        self.scale(&Int::from(-1))
    }

    pub fn sub(&self, other: &Cochain) -> Result<Cochain, Error> {
        self.add(&other.neg())
    }

    /// Coefficient change: Z → Z/2ʲ, or Z/2ʲ → Z/2ⁱ with i ≤ j.
    pub fn reduce_to(&self, target: Coefficients) -> Result<Cochain, Error> {
        match (self.coeffs, target) {
            (_, Coefficients::Integers) if self.coeffs != Coefficients::Integers => Err(Error::RingMismatch),
            (Coefficients::Mod2Pow(j), Coefficients::Mod2Pow(i)) if i > j => Err(Error::RingMismatch),
            _ => Ok(Self::from_values(&self.complex, self.degree, target, self.values.iter().map(|(&i, x)| (i, x.clone())))),
        }
    }

    /// Integral cochain with the least non-negative residues as values.
    pub fn lift(&self) -> Cochain {
        Cochain { coeffs: Coefficients::Integers, ..self.clone() }
    }

    /// Exact division of an integral cochain; fails when some value is not divisible.
    pub fn divide_exact(&self, k: &Int) -> Result<Cochain, Error> {
        if self.coeffs != Coefficients::Integers {
            return Err(Error::RingMismatch);
        }
        let mut out = Vec::with_capacity(self.values.len());
        for (&i, x) in &self.values {
            if !int::is_zero(&int::reduce(x, k)) {
                return Err(Error::Consistency(format!("cochain value {x} not divisible by {k}")));
            }
            out.push((i, x / k));
        }
        Ok(Self::from_values(&self.complex, self.degree, self.coeffs, out))
    }

    /// δf(σ) = Σₖ (−1)ᵏ f(σ without its k-th vertex).
    pub fn coboundary(&self) -> Cochain {
        let d = self.degree;
        let k = &self.complex;
        let mut out = Vec::new();
        for (r, s) in k.simplices(d + 1).iter().enumerate() {
            let mut acc = Int::from(0u8);
            let mut face = Vec::with_capacity(d + 1);
            for skip in 0..s.len() {
                face.clear();
                face.extend(s.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v));
                if let Some(x) = self.values.get(&k.index_of(&face).expect("faces exist")) {
                    if skip % 2 == 0 {
                        acc += x;
                    } else {
                        acc -= x;
                    }
                }
            }
            if !int::is_zero(&acc) {
                out.push((r, acc));
            }
        }
        Self::from_values(k, d + 1, self.coeffs, out)
    }

    pub fn is_cocycle(&self) -> bool {
        self.coboundary().is_zero()
    }

    /// Alexander–Whitney cup product: (x∪y)(σ) = x(front p-face)·y(back q-face).
    pub fn cup(&self, other: &Cochain) -> Result<Cochain, Error> {
        self.check_compatible(other)?;
        let (p, q) = (self.degree, other.degree);
        let k = &self.complex;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(k, p + q, self.coeffs));
        }
        let mut out = Vec::new();
        for (r, s) in k.simplices(p + q).iter().enumerate() {
            let Some(x) = self.values.get(&k.index_of(&s[..=p]).unwrap()) else { continue };
            let Some(y) = other.values.get(&k.index_of(&s[p..]).unwrap()) else { continue };
            out.push((r, x * y));
        }
        Ok(Self::from_values(k, p + q, self.coeffs, out))
    }

    /// Steenrod's ∪ᵢ product (mod 2). For an n-simplex with n = p + q − i, sums over
    /// 0 ≤ j₀ < … < jᵢ ≤ n; the intervals [0,j₀], [j₀,j₁], …, [jᵢ,n] alternate between
    /// `self` (even positions) and `other` (odd positions).
    pub fn cup_i(&self, other: &Cochain, i: usize) -> Result<Cochain, Error> {
        self.check_compatible(other)?;
        if !self.coeffs.is_f2() {
            return Err(Error::Unsupported("cup_i products are defined only mod 2".into()));
        }
        let (p, q) = (self.degree, other.degree);
        let k = &self.complex;
        if p + q < i {
            return Ok(Self::zero(k, 0, self.coeffs));
        }
        let n = p + q - i;
        if self.is_zero() || other.is_zero() || n > k.dimension() {
            return Ok(Self::zero(k, n, self.coeffs));
        }
        let splits = interval_splits(n, i, p, q);
        let mut out = Vec::new();
        let (mut xf, mut yf) = (Vec::with_capacity(p + 1), Vec::with_capacity(q + 1));
        for (r, s) in k.simplices(n).iter().enumerate() {
            let mut acc = false;
            for (xs, ys) in &splits {
                xf.clear();
                xf.extend(xs.iter().map(|&t| s[t]));
                let Some(xi) = k.index_of(&xf) else { continue };
                if !self.values.contains_key(&xi) {
                    continue;
                }
                yf.clear();
                yf.extend(ys.iter().map(|&t| s[t]));
                if other.values.contains_key(&k.index_of(&yf).unwrap()) {
                    acc = !acc;
                }
            }
            if acc {
                out.push((r, Int::from(1u8)));
            }
        }
        Ok(Self::from_values(k, n, self.coeffs, out))
    }

    /// Transport along a relabelling of the vertex order: `target` must have the same
    /// vertex labels and simplices. Integral values pick up the sign of the sorting permutation.
    pub fn transport(&self, target: &SimplicialComplex) -> Result<Cochain, Error> {
        let map = self.complex.vertex_map_to(target)?;
        let mut out = Vec::with_capacity(self.values.len());
        for (&i, x) in &self.values {
            let s = &self.complex.simplices(self.degree)[i];
            let mut t: Vec<u32> = s.iter().map(|&v| map[v as usize]).collect();
            let odd = permutation_parity(&t);
            t.sort_unstable();
            let j = target.index_of(&t).ok_or_else(|| Error::InvalidComplex(format!("simplex {t:?} missing in target")))?;
            out.push((j, if odd { -x } else { x.clone() }));
        }
        Ok(Self::from_values(target, self.degree, self.coeffs, out))
    }
}

/// For each admissible (j₀ < … < jᵢ), the vertex positions of the `x` face and `y` face,
/// keeping only splits whose faces have sizes p+1 and q+1 and no repeated vertex.
fn interval_splits(n: usize, i: usize, p: usize, q: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    let mut out = Vec::new();
    let mut js = Vec::with_capacity(i + 1);
    fn rec(
        n: usize,
        i: usize,
        p: usize,
        q: usize,
        start: usize,
        js: &mut Vec<usize>,
        out: &mut Vec<(Vec<usize>, Vec<usize>)>,
    ) {
        if js.len() == i + 1 {
            let mut bounds = Vec::with_capacity(i + 3);
            bounds.push(0);
            bounds.extend_from_slice(js);
            bounds.push(n);
            let (mut xs, mut ys) = (Vec::new(), Vec::new());
            for w in 0..bounds.len() - 1 {
                let part = if w % 2 == 0 { &mut xs } else { &mut ys };
                part.extend(bounds[w]..=bounds[w + 1]);
            }
            if xs.len() == p + 1 && ys.len() == q + 1 {
                out.push((xs, ys));
            }
            return;
        }
        for j in start..=n {
            js.push(j);
            rec(n, i, p, q, j + 1, js, out);
            js.pop();
        }
    }
    rec(n, i, p, q, 0, &mut js, &mut out);
    out
}

fn permutation_parity(v: &[u32]) -> bool {
    let mut odd = false;
    for a in 0..v.len() {
        for b in a + 1..v.len() {
            if v[a] > v[b] {
                odd = !odd;
            }
        }
    }
    odd
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triangulations;

    #[test]
    fn cup_with_unit() {
        let k = triangulations::rp2();
        let x = Cochain::from_values(&k, 1, Coefficients::F2, [(0, Int::from(1u8)), (3, Int::from(1u8))]);
        let one = Cochain::unit(&k, Coefficients::F2);
        assert_eq!(x.cup(&one).unwrap(), x);
        assert_eq!(one.cup(&x).unwrap(), x);
    }

    #[test]
    fn cup_zero_matches_cup() {
        let k = triangulations::cp2();
        let x = Cochain::from_values(&k, 2, Coefficients::F2, (0..20).map(|i| (i * 3, Int::from(1u8))));
        let y = Cochain::from_values(&k, 1, Coefficients::F2, (0..10).map(|i| (i * 2, Int::from(1u8))));
        assert_eq!(x.cup_i(&y, 0).unwrap(), x.cup(&y).unwrap());
    }

    #[test]
    fn top_cup_i_is_pointwise_square() {
        let k = triangulations::rp2();
        let x = Cochain::from_values(&k, 2, Coefficients::F2, [(1, Int::from(1u8)), (4, Int::from(1u8))]);
        assert_eq!(x.cup_i(&x, 2).unwrap(), x);
    }

    #[test]
    fn split_enumeration() {
        // ∪₁ of two 1-cochains on a 1-simplex: j₀ = 0, j₁ = 1, x on {0}∪{1}, y on {0,1}.
        let s = interval_splits(1, 1, 1, 1);
        assert_eq!(s, vec![(vec![0, 1], vec![0, 1])]);
        assert!(interval_splits(2, 0, 1, 1).iter().all(|(x, y)| x == &vec![0, 1] && y == &vec![1, 2]));
    }

    #[test]
    fn integral_coboundary_squares_to_zero() {
        let k = triangulations::torus();
        let x = Cochain::from_values(&k, 0, Coefficients::Integers, (0..7).map(|i| (i, Int::from(i as i64 * i as i64 - 3))));
        assert!(x.coboundary().coboundary().is_zero());
    }

    #[test]
    fn transport_preserves_coboundary() {
        let k = triangulations::rp2();
        let order = vec![3, 1, 5, 0, 2, 4];
        let k2 = k.reordered(&order).unwrap();
        let x = Cochain::from_values(&k, 1, Coefficients::Integers, (0..15).map(|i| (i, Int::from(i as i64 % 5 - 2))));
        let lhs = x.coboundary().transport(&k2).unwrap();
        let rhs = x.transport(&k2).unwrap().coboundary();
        assert_eq!(lhs, rhs);
    }
}
