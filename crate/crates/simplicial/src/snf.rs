//! Dense integer matrices and Smith normal form.

use crate::int::{self, Int};
use ibig::ops::{Abs, DivEuclid};
use std::fmt;

#[derive(Clone, PartialEq, Eq)]
pub struct ZMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<Int>>,
}

impl ZMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ZMatrix { rows, cols, data: vec![vec![Int::from(0u8); cols]; rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i][i] = Int::from(1u8);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Int>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        ZMatrix { rows: rows.len(), cols, data: rows }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| Int::from(x)).collect()).collect())
    }

    /// Builds a matrix from column vectors of length `rows`.
    pub fn from_columns(rows: usize, cols: &[Vec<Int>]) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length mismatch");
            for (i, x) in c.iter().enumerate() {
                m.data[i][j] = x.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Int {
        &self.data[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: Int) {
        self.data[i][j] = x;
    }

    pub fn row(&self, i: usize) -> &[Int] {
        &self.data[i]
    }

    pub fn column(&self, j: usize) -> Vec<Int> {
        self.data.iter().map(|r| r[j].clone()).collect()
    }

    pub fn mul(&self, other: &ZMatrix) -> ZMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = ZMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for (k, a) in self.data[i].iter().enumerate() {
                if int::is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other.data[k][j];
                    if !int::is_zero(b) {
                        out.data[i][j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn apply(&self, x: &[Int]) -> Vec<Int> {
        assert_eq!(x.len(), self.cols, "vector length mismatch");
        self.data
            .iter()
            .map(|r| {
                let mut acc = Int::from(0u8);
                for (a, b) in r.iter().zip(x) {
                    if !int::is_zero(a) && !int::is_zero(b) {
                        acc += a * b;
                    }
                }
                acc
            })
            .collect()
    }

    pub fn transpose(&self) -> ZMatrix {
        let mut t = ZMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j][i] = self.data[i][j].clone();
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().flatten().all(int::is_zero)
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Int {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        let mut a = self.data.clone();
        let mut sign = 1i64;
        let mut prev = Int::from(1u8);
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !int::is_zero(&a[i][k])) else { return Int::from(0u8) };
            if p != k {
                a.swap(p, k);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        if n == 0 {
            Int::from(1u8)
        } else {
            a[n - 1][n - 1].clone() * Int::from(sign)
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        self.data.swap(a, b);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        for r in &mut self.data {
            r.swap(a, b);
        }
    }

    /// row_i -= q·row_t
    fn row_axpy(&mut self, i: usize, t: usize, q: &Int) {
        debug_assert_ne!(i, t);
        let (src, dst) = if i < t {
            let (lo, hi) = self.data.split_at_mut(t);
            (&hi[0], &mut lo[i])
        } else {
            let (lo, hi) = self.data.split_at_mut(i);
            (&lo[t], &mut hi[0])
        };
        for (d, s) in dst.iter_mut().zip(src) {
            if !int::is_zero(s) {
                *d -= q * s;
            }
        }
    }

    /// col_j -= q·col_t
    fn col_axpy(&mut self, j: usize, t: usize, q: &Int) {
        for r in &mut self.data {
            if !int::is_zero(&r[t]) {
                let v = q * &r[t];
                r[j] -= v;
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in &mut self.data[i] {
            *x = -&*x;
        }
    }

    fn negate_col(&mut self, j: usize) {
        for r in &mut self.data {
            r[j] = -&r[j];
        }
    }
}

impl fmt::Debug for ZMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ZMatrix {}x{} [", self.rows, self.cols)?;
        for r in &self.data {
            let s: Vec<String> = r.iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", s.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Which transforms to accumulate during reduction.
#[derive(Clone, Copy, Debug, Default)]
pub struct Track {
    pub u: bool,
    pub u_inv: bool,
    pub v: bool,
    pub v_inv: bool,
}

impl Track {
    pub const ALL: Track = Track { u: true, u_inv: true, v: true, v_inv: true };
    pub const NONE: Track = Track { u: false, u_inv: false, v: false, v_inv: false };
}

/// `U·A·V = D` with `D` diagonal, non-negative, and each entry dividing the next.
#[derive(Clone, Debug)]
pub struct Snf {
    /// Diagonal of `D`, length `min(rows, cols)`.
    pub diagonal: Vec<Int>,
    pub rank: usize,
    pub u: Option<ZMatrix>,
    pub u_inv: Option<ZMatrix>,
    pub v: Option<ZMatrix>,
    pub v_inv: Option<ZMatrix>,
    rows: usize,
    cols: usize,
}

impl Snf {
    pub fn d_matrix(&self) -> ZMatrix {
        let mut d = ZMatrix::zeros(self.rows, self.cols);
        for (k, x) in self.diagonal.iter().enumerate() {
            d.set(k, k, x.clone());
        }
        d
    }

    /// Nonzero diagonal entries different from 1.
    pub fn invariant_factors(&self) -> Vec<Int> {
        self.diagonal[..self.rank].iter().filter(|d| !int::is_one(d)).cloned().collect()
    }
}

/// Smith normal form with all four transforms.
pub fn smith_normal_form(a: &ZMatrix) -> Snf {
    smith_normal_form_tracked(a, Track::ALL)
}

pub fn smith_normal_form_tracked(a: &ZMatrix, track: Track) -> Snf {
    let (m, n) = (a.rows, a.cols);
    let mut d = a.clone();
    let mut u = track.u.then(|| ZMatrix::identity(m));
    let mut u_inv = track.u_inv.then(|| ZMatrix::identity(m));
    let mut v = track.v.then(|| ZMatrix::identity(n));
    let mut v_inv = track.v_inv.then(|| ZMatrix::identity(n));

    // Elementary operations applied to D and mirrored on the transforms.
    macro_rules! swap_rows {
        ($a:expr, $b:expr) => {{
            let (x, y) = ($a, $b);
            if x != y {
                d.swap_rows(x, y);
                if let Some(u) = u.as_mut() {
                    u.swap_rows(x, y);
                }
                if let Some(ui) = u_inv.as_mut() {
                    ui.swap_cols(x, y);
                }
            }
        }};
    }
    macro_rules! swap_cols {
        ($a:expr, $b:expr) => {{
            let (x, y) = ($a, $b);
            if x != y {
                d.swap_cols(x, y);
                if let Some(v) = v.as_mut() {
                    v.swap_cols(x, y);
                }
                if let Some(vi) = v_inv.as_mut() {
                    vi.swap_rows(x, y);
                }
            }
        }};
    }
    macro_rules! row_axpy {
        ($i:expr, $t:expr, $q:expr) => {{
            let (i, t, q) = ($i, $t, $q);
            d.row_axpy(i, t, q);
            if let Some(u) = u.as_mut() {
                u.row_axpy(i, t, q);
            }
            if let Some(ui) = u_inv.as_mut() {
                // E = I - q e_i e_tᵀ, E⁻¹ = I + q e_i e_tᵀ: col_t += q col_i
                let nq = -q;
                ui.col_axpy(t, i, &nq);
            }
        }};
    }
    macro_rules! col_axpy {
        ($j:expr, $t:expr, $q:expr) => {{
            let (j, t, q) = ($j, $t, $q);
            d.col_axpy(j, t, q);
            if let Some(v) = v.as_mut() {
                v.col_axpy(j, t, q);
            }
            if let Some(vi) = v_inv.as_mut() {
                // F = I - q e_t e_jᵀ, F⁻¹ = I + q e_t e_jᵀ: row_t += q row_j
                let nq = -q;
                vi.row_axpy(t, j, &nq);
            }
        }};
    }

    let kmax = m.min(n);
    let mut rank = 0;
    for t in 0..kmax {
        // Smallest nonzero entry of the trailing block becomes the pivot.
        let Some((pi, pj)) = min_abs_entry(&d, t..m, t..n) else { break };
        swap_rows!(t, pi);
        swap_cols!(t, pj);
        loop {
            let mut clean = true;
            for i in t + 1..m {
                if !int::is_zero(&d.data[i][t]) {
                    let q = (&d.data[i][t]).div_euclid(&d.data[t][t]);
                    if !int::is_zero(&q) {
                        row_axpy!(i, t, &q);
                    }
                    if !int::is_zero(&d.data[i][t]) {
                        clean = false;
                    }
                }
            }
            for j in t + 1..n {
                if !int::is_zero(&d.data[t][j]) {
                    let q = (&d.data[t][j]).div_euclid(&d.data[t][t]);
                    if !int::is_zero(&q) {
                        col_axpy!(j, t, &q);
                    }
                    if !int::is_zero(&d.data[t][j]) {
                        clean = false;
                    }
                }
            }
            if !clean {
                // A remainder smaller than the pivot survives; move it to the pivot.
                let cand_col = (t + 1..m)
                    .filter(|&i| !int::is_zero(&d.data[i][t]))
                    .min_by_key(|&i| (&d.data[i][t]).abs());
                let cand_row = (t + 1..n)
                    .filter(|&j| !int::is_zero(&d.data[t][j]))
                    .min_by_key(|&j| (&d.data[t][j]).abs());
                let ac = cand_col.map(|i| (&d.data[i][t]).abs());
                let ar = cand_row.map(|j| (&d.data[t][j]).abs());
                match (ac, ar) {
                    (Some(x), Some(y)) if y < x => swap_cols!(t, cand_row.unwrap()),
                    (Some(_), _) => swap_rows!(t, cand_col.unwrap()),
                    (None, Some(_)) => swap_cols!(t, cand_row.unwrap()),
                    (None, None) => unreachable!(),
                }
                continue;
            }
            // Row and column are clear; enforce divisibility on the trailing block.
            let p = (&d.data[t][t]).abs();
            let bad = if int::is_one(&p) {
                None
            } else {
                (t + 1..m).find(|&i| (t + 1..n).any(|j| !int::is_zero(&int::reduce(&d.data[i][j], &p))))
            };
            match bad {
                Some(i) => {
                    let neg_one = Int::from(-1);
                    row_axpy!(t, i, &neg_one);
                }
                None => break,
            }
        }
        if d.data[t][t] < Int::from(0u8) {
            d.negate_row(t);
            if let Some(u) = u.as_mut() {
                u.negate_row(t);
            }
            if let Some(ui) = u_inv.as_mut() {
                ui.negate_col(t);
            }
        }
        rank = t + 1;
    }
    let diagonal = (0..kmax).map(|k| d.data[k][k].clone()).collect();
    Snf { diagonal, rank, u, u_inv, v, v_inv, rows: m, cols: n }
}

fn min_abs_entry(
    d: &ZMatrix,
    rows: std::ops::Range<usize>,
    cols: std::ops::Range<usize>,
) -> Option<(usize, usize)> {
    let mut best: Option<(Int, usize, usize)> = None;
    for i in rows {
        for j in cols.clone() {
            let x = &d.data[i][j];
            if int::is_zero(x) {
                continue;
            }
            let a = x.abs();
            if int::is_one(&a) {
                return Some((i, j));
            }
            if best.as_ref().is_none_or(|(b, _, _)| a < *b) {
                best = Some((a, i, j));
            }
        }
    }
    best.map(|(_, i, j)| (i, j))
}
