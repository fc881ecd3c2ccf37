//! Dense linear algebra over F₂ on packed bit vectors.

use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec { len, words: vec![0; len.div_ceil(64)] }
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i, true);
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    pub fn from_indices(len: usize, ones: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Self::zeros(len);
        for i in ones {
            v.flip(i);
        }
        v
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, b: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % 64);
        if b {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        assert_eq!(self.len, other.len, "bit vector length mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= *b;
        }
    }

    pub fn xor(&self, other: &BitVec) -> BitVec {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn first_one(&self) -> Option<usize> {
        for (k, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(k * 64 + w.trailing_zeros() as usize);
            }
        }
        None
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let t = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(k * 64 + t)
            })
        })
    }

    pub fn dot(&self, other: &BitVec) -> bool {
        assert_eq!(self.len, other.len, "bit vector length mismatch");
        let mut acc = 0u32;
        for (a, b) in self.words.iter().zip(&other.words) {
            acc ^= (a & b).count_ones() & 1;
        }
        acc == 1
    }

    pub fn to_bools(&self) -> Vec<bool> {
        (0..self.len).map(|i| self.get(i)).collect()
    }

    /// Concatenation `self ⊕ other`.
    pub fn concat(&self, other: &BitVec) -> BitVec {
        let mut out = BitVec::zeros(self.len + other.len);
        for i in self.ones() {
            out.set(i, true);
        }
        for i in other.ones() {
            out.set(self.len + i, true);
        }
        out
    }

    pub fn slice(&self, start: usize, end: usize) -> BitVec {
        BitVec::from_indices(end - start, self.ones().filter(|&i| i >= start && i < end).map(|i| i - start))
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl serde::Serialize for BitVec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.to_bools().into_iter().map(u8::from))
    }
}

impl<'de> serde::Deserialize<'de> for BitVec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw: Vec<u8> = Vec::deserialize(d)?;
        if let Some(bad) = raw.iter().find(|&&b| b > 1) {
            return Err(serde::de::Error::custom(format!("F2 entry must be 0 or 1, got {bad}")));
        }
        Ok(BitVec::from_bools(&raw.iter().map(|&b| b == 1).collect::<Vec<_>>()))
    }
}

/// Matrix over F₂ stored by columns: column `j` is the image of the `j`-th basis vector.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct F2Matrix {
    rows: usize,
    cols: Vec<BitVec>,
}

impl F2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        F2Matrix { rows, cols: vec![BitVec::zeros(rows); cols] }
    }

    pub fn identity(n: usize) -> Self {
        F2Matrix { rows: n, cols: (0..n).map(|i| BitVec::unit(n, i)).collect() }
    }

    pub fn from_columns(rows: usize, cols: Vec<BitVec>) -> Self {
        assert!(cols.iter().all(|c| c.len() == rows), "column length mismatch");
        F2Matrix { rows, cols }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn col(&self, j: usize) -> &BitVec {
        &self.cols[j]
    }

    pub fn columns(&self) -> &[BitVec] {
        &self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.cols[j].get(i)
    }

    pub fn set(&mut self, i: usize, j: usize, b: bool) {
        self.cols[j].set(i, b);
    }

    pub fn apply(&self, x: &BitVec) -> BitVec {
        assert_eq!(x.len(), self.cols.len(), "vector length does not match column count");
        let mut out = BitVec::zeros(self.rows);
        for j in x.ones() {
            out.xor_assign(&self.cols[j]);
        }
        out
    }

    /// `self · other`.
    pub fn compose(&self, other: &F2Matrix) -> F2Matrix {
        assert_eq!(self.ncols(), other.rows, "dimension mismatch in composition");
        F2Matrix { rows: self.rows, cols: other.cols.iter().map(|c| self.apply(c)).collect() }
    }

    pub fn transpose(&self) -> F2Matrix {
        let mut t = F2Matrix::zeros(self.ncols(), self.rows);
        for (j, c) in self.cols.iter().enumerate() {
            for i in c.ones() {
                t.set(j, i, true);
            }
        }
        t
    }

    pub fn rank(&self) -> usize {
        let mut e = Echelon::new(self.rows);
        self.cols.iter().filter(|c| e.insert(c)).count()
    }

    /// Basis of the null space.
    pub fn kernel(&self) -> Vec<BitVec> {
        let n = self.ncols();
        let mut e = TrackedEchelon::new(self.rows, n);
        let mut out = Vec::new();
        for (j, c) in self.cols.iter().enumerate() {
            if let Some(combo) = e.insert(c.clone(), BitVec::unit(n, j)) {
                out.push(combo);
            }
        }
        out
    }

    /// Some `x` with `self · x = b`, if one exists.
    pub fn solve(&self, b: &BitVec) -> Option<BitVec> {
        let n = self.ncols();
        let mut e = TrackedEchelon::new(self.rows, n);
        for (j, c) in self.cols.iter().enumerate() {
            e.insert(c.clone(), BitVec::unit(n, j));
        }
        let (residual, combo) = e.reduce(b);
        residual.is_zero().then_some(combo)
    }

    /// Every solution of `self · x = b` (affine space, enumerated). Intended for small kernels.
    pub fn solve_all(&self, b: &BitVec) -> Vec<BitVec> {
        let Some(x0) = self.solve(b) else { return Vec::new() };
        let ker = self.kernel();
        assert!(ker.len() < 20, "kernel too large to enumerate");
        (0u64..(1 << ker.len()))
            .map(|mask| {
                let mut x = x0.clone();
                for (k, v) in ker.iter().enumerate() {
                    if mask >> k & 1 == 1 {
                        x.xor_assign(v);
                    }
                }
                x
            })
            .collect()
    }

    pub fn image(&self) -> Subspace {
        Subspace::spanned_by(self.rows, self.cols.iter())
    }
}

/// Reduced row-echelon basis of a subspace of F₂ⁿ; pivots are the lowest set bits.
#[derive(Clone, Debug)]
pub struct Echelon {
    dim: usize,
    rows: Vec<(usize, BitVec)>,
}

impl Echelon {
    pub fn new(dim: usize) -> Self {
        Echelon { dim, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn reduce(&self, v: &BitVec) -> BitVec {
        let mut v = v.clone();
        for (p, r) in &self.rows {
            if v.get(*p) {
                v.xor_assign(r);
            }
        }
        v
    }

    /// Adds `v`; returns false when it was already in the span.
    pub fn insert(&mut self, v: &BitVec) -> bool {
        assert_eq!(v.len(), self.dim, "vector length mismatch");
        let v = self.reduce(v);
        let Some(p) = v.first_one() else { return false };
        for (_, r) in self.rows.iter_mut() {
            if r.get(p) {
                r.xor_assign(&v);
            }
        }
        let at = self.rows.partition_point(|(q, _)| *q < p);
        self.rows.insert(at, (p, v));
        true
    }

    pub fn basis(&self) -> impl Iterator<Item = &BitVec> {
        self.rows.iter().map(|(_, r)| r)
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.iter().map(|(p, _)| *p)
    }
}

/// Echelon form where each row remembers which combination of inputs produced it.
#[derive(Clone, Debug)]
pub struct TrackedEchelon {
    dim: usize,
    labels: usize,
    rows: Vec<(usize, BitVec, BitVec)>,
}

impl TrackedEchelon {
    pub fn new(dim: usize, labels: usize) -> Self {
        TrackedEchelon { dim, labels, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Residual and the label combination that was subtracted.
    pub fn reduce(&self, v: &BitVec) -> (BitVec, BitVec) {
        let mut v = v.clone();
        let mut combo = BitVec::zeros(self.labels);
        for (p, r, l) in &self.rows {
            if v.get(*p) {
                v.xor_assign(r);
                combo.xor_assign(l);
            }
        }
        (v, combo)
    }

    /// Inserts `v` carrying label `label`. If `v` is dependent, returns the label
    /// combination that sums to zero together with `label`.
    pub fn insert(&mut self, v: BitVec, label: BitVec) -> Option<BitVec> {
        assert_eq!(v.len(), self.dim, "vector length mismatch");
        let (v, combo) = self.reduce(&v);
        let label = label.xor(&combo);
        let Some(p) = v.first_one() else { return Some(label) };
        for (_, r, l) in self.rows.iter_mut() {
            if r.get(p) {
                r.xor_assign(&v);
                l.xor_assign(&label);
            }
        }
        let at = self.rows.partition_point(|(q, _, _)| *q < p);
        self.rows.insert(at, (p, v, label));
        None
    }
}

/// A subspace of F₂ⁿ with canonical (reduced echelon) basis.
#[derive(Clone, Debug)]
pub struct Subspace {
    e: Echelon,
}

impl Subspace {
    pub fn zero(dim: usize) -> Self {
        Subspace { e: Echelon::new(dim) }
    }

    pub fn full(dim: usize) -> Self {
        Self::spanned_by(dim, (0..dim).map(|i| BitVec::unit(dim, i)).collect::<Vec<_>>().iter())
    }

    pub fn spanned_by<'a>(dim: usize, vs: impl IntoIterator<Item = &'a BitVec>) -> Self {
        let mut e = Echelon::new(dim);
        for v in vs {
            e.insert(v);
        }
        Subspace { e }
    }

    pub fn ambient_dim(&self) -> usize {
        self.e.dim
    }

    pub fn dim(&self) -> usize {
        self.e.rank()
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        self.e.reduce(v).is_zero()
    }

    /// Canonical representative of `v + self`.
    pub fn reduce(&self, v: &BitVec) -> BitVec {
        self.e.reduce(v)
    }

    pub fn basis(&self) -> Vec<BitVec> {
        self.e.basis().cloned().collect()
    }

    pub fn add(&mut self, v: &BitVec) -> bool {
        self.e.insert(v)
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut s = self.clone();
        for v in other.e.basis() {
            s.add(v);
        }
        s
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.e.basis().all(|v| other.contains(v))
    }

    pub fn equals(&self, other: &Subspace) -> bool {
        self.dim() == other.dim() && self.is_subspace_of(other)
    }

    /// All elements; only for small subspaces.
    pub fn elements(&self) -> Vec<BitVec> {
        let b = self.basis();
        assert!(b.len() < 20, "subspace too large to enumerate");
        (0u64..(1 << b.len()))
            .map(|mask| {
                let mut x = BitVec::zeros(self.ambient_dim());
                for (k, v) in b.iter().enumerate() {
                    if mask >> k & 1 == 1 {
                        x.xor_assign(v);
                    }
                }
                x
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bv(s: &str) -> BitVec {
        BitVec::from_bools(&s.chars().map(|c| c == '1').collect::<Vec<_>>())
    }

    #[test]
    fn bits_across_word_boundary() {
        let mut v = BitVec::zeros(130);
        v.set(0, true);
        v.set(64, true);
        v.set(129, true);
        assert_eq!(v.ones().collect::<Vec<_>>(), vec![0, 64, 129]);
        assert_eq!(v.count_ones(), 3);
        assert!(v.dot(&BitVec::unit(130, 129)));
        assert_eq!(v.slice(60, 70), BitVec::unit(10, 4));
    }

    #[test]
    fn kernel_and_solve() {
        // columns: e0, e1, e0+e1
        let m = F2Matrix::from_columns(2, vec![bv("10"), bv("01"), bv("11")]);
        assert_eq!(m.rank(), 2);
        let k = m.kernel();
        assert_eq!(k, vec![bv("111")]);
        let x = m.solve(&bv("11")).unwrap();
        assert_eq!(m.apply(&x), bv("11"));
        assert_eq!(m.solve_all(&bv("11")).len(), 2);
        let z = F2Matrix::zeros(2, 1);
        assert!(z.solve(&bv("10")).is_none());
    }

    #[test]
    fn subspace_canonical_reduction() {
        let s = Subspace::spanned_by(3, [bv("110"), bv("011")].iter());
        assert!(s.contains(&bv("101")));
        assert!(!s.contains(&bv("100")));
        assert_eq!(s.reduce(&bv("100")), s.reduce(&bv("010")));
        let t = Subspace::spanned_by(3, [bv("101"), bv("110")].iter());
        assert!(s.equals(&t));
        assert_eq!(s.elements().len(), 4);
    }

    #[test]
    fn transpose_and_compose() {
        let a = F2Matrix::from_columns(2, vec![bv("10"), bv("11"), bv("01")]);
        let at = a.transpose();
        assert_eq!(at.rows(), 3);
        assert_eq!(at.col(1), &bv("011"));
        let p = a.compose(&at);
        assert_eq!(p.col(0), &bv("01"));
        assert_eq!(p.col(1), &bv("10"));
    }
}
