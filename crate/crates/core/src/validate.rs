//! Structural and algebraic checks on models. Every violated invariant is
//! reported with a witness.

use crate::classes::{self, check_sw_identities, pairing_matrix, sw_from_wu, wu_classes};
use crate::model::{required_cup_z_pairs, CohomologyModel, ManifoldModel};
use ninefold_simplicial::f2::Subspace;
use ninefold_simplicial::int::{self, Int};
use ninefold_simplicial::ZMatrix;
use serde::Serialize;
use std::collections::HashSet;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub check: String,
    pub degree: Option<usize>,
    pub witness: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub skipped: Vec<String>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    fn push(&mut self, check: &str, degree: Option<usize>, witness: impl Into<String>) {
        self.violations.push(Violation { check: check.into(), degree, witness: witness.into() });
    }

    pub fn mentions(&self, check: &str) -> bool {
        self.violations.iter().any(|v| v.check == check)
    }
}

fn binom_odd(n: usize, k: usize) -> bool {
    k <= n && (n & k) == k
}

/// Checks that the tables have the declared shapes. Later checks index freely.
fn check_shapes(m: &CohomologyModel, r: &mut ValidationReport) {
    let n = m.dimension;
    if m.graded.len() != n + 1 {
        r.push("shape", None, format!("{} graded pieces for dimension {n}", m.graded.len()));
        return;
    }
    for (i, d) in m.graded.iter().enumerate() {
        let mut seen = HashSet::new();
        for name in &d.f2_basis {
            if name.is_empty() || !seen.insert(name) {
                r.push("basis_names", Some(i), format!("name {name:?} empty or repeated"));
            }
        }
        if d.z_torsion.iter().any(|o| o < &Int::from(2u8)) || d.z_torsion.windows(2).any(|w| w[0] > w[1]) {
            r.push("torsion_orders", Some(i), "orders must be ≥ 2 and ascending");
        }
    }
    for (what, len) in [("rho2", m.rho2.len()), ("beta", m.beta.len())] {
        if len != n + 1 {
            r.push("shape", None, format!("{what} has {len} degrees"));
            return;
        }
    }
    for i in 0..=n {
        if m.rho2[i].len() != m.z_gens(i) || m.rho2[i].iter().any(|c| c.len() != m.f2_dim(i)) {
            r.push("shape", Some(i), "rho2 columns");
        }
        let target = if i < n { m.z_gens(i + 1) } else { 0 };
        if m.beta[i].len() != m.f2_dim(i) || m.beta[i].iter().any(|c| c.len() != target) {
            r.push("shape", Some(i), "beta columns");
        }
        for k in 0..=n - i {
            match m.sq.get(&(k, i)) {
                None => r.push("missing_sq", Some(i), format!("Sq{k} on degree {i}")),
                Some(cols) => {
                    if cols.len() != m.f2_dim(i) || cols.iter().any(|c| c.len() != m.f2_dim(i + k)) {
                        r.push("shape", Some(i), format!("Sq{k} columns"));
                    }
                }
            }
        }
        for j in i..=n - i {
            match m.cup2.get(&(i, j)) {
                None => r.push("missing_cup2", Some(i), format!("products of degrees ({i},{j})")),
                Some(t) => {
                    let ok = t.len() == m.f2_dim(i) && t.iter().all(|row| row.len() == m.f2_dim(j) && row.iter().all(|c| c.len() == m.f2_dim(i + j)));
                    if !ok {
                        r.push("shape", Some(i), format!("cup2 table ({i},{j})"));
                    }
                }
            }
        }
    }
    for &(k, i) in m.sq.keys() {
        if i + k > n {
            r.push("shape", Some(i), format!("Sq{k} table leaves the model"));
        }
    }
    for &(i, j) in m.cup2.keys() {
        if i > j || i + j > n {
            r.push("shape", Some(i), format!("unexpected cup2 pair ({i},{j})"));
        }
    }
    for (&(i, j), t) in &m.cup_z {
        if i > j || i + j > n {
            r.push("shape", Some(i), format!("unexpected cupZ pair ({i},{j})"));
            continue;
        }
        let ok = t.len() == m.z_gens(i) && t.iter().all(|row| row.len() == m.z_gens(j) && row.iter().all(|c| c.len() == m.z_gens(i + j)));
        if !ok {
            r.push("shape", Some(i), format!("cupZ table ({i},{j})"));
        }
    }
    if m.is_orientable() {
        for pair in required_cup_z_pairs(n) {
            if !m.cup_z.contains_key(&pair) {
                r.push("missing_cupz", Some(pair.0), format!("integral products ({},{})", pair.0, pair.1));
            }
        }
    }
}

pub fn validate_cohomology(m: &CohomologyModel) -> ValidationReport {
    let mut r = ValidationReport::default();
    check_shapes(m, &mut r);
    if !r.is_ok() {
        r.skipped.push("algebraic checks skipped: malformed tables".into());
        return r;
    }
    let n = m.dimension;
    let d0 = m.degree(0);
    if d0.z_rank != 1 || !d0.z_torsion.is_empty() || d0.f2_dim() != 1 {
        r.push("connected", Some(0), "H0 must be Z with one F2 basis element");
        return r;
    }
    if m.f2_dim(n) != 1 {
        r.push("top_degree", Some(n), format!("H^n(F2) has dimension {}", m.f2_dim(n)));
    }
    if let Some(o) = m.orientation {
        let top = m.degree(n);
        if top.z_rank != 1 || !top.z_torsion.is_empty() || o.top_sign.abs() != 1 {
            r.push("orientation", Some(n), "oriented model needs H^n = Z and sign ±1");
        }
    }

    // Universal coefficients.
    for i in 0..=n {
        let even = |d: usize| m.degree(d).z_torsion.iter().filter(|o| int::is_even(o)).count();
        let expect = m.degree(i).z_rank + even(i) + if i < n { even(i + 1) } else { 0 };
        if expect != m.f2_dim(i) {
            r.push("universal_coefficients", Some(i), format!("F2 dimension {} but integral data predicts {expect}", m.f2_dim(i)));
        }
    }

    let unit = m.f2_unit(0, 0);
    for i in 0..=n {
        for (b, x) in m.f2_basis(i).iter().enumerate() {
            if m.cup2(0, &unit, i, x) != *x {
                r.push("unit", Some(i), m.names(i)[b].clone());
            }
            if m.sq(0, i, x) != *x {
                r.push("sq0_identity", Some(i), m.names(i)[b].clone());
            }
            for k in i + 1..=n - i {
                if !m.sq(k, i, x).is_zero() {
                    r.push("sq_above_degree", Some(i), format!("Sq{k} {}", m.names(i)[b]));
                }
            }
            if 2 * i <= n && m.sq(i, i, x) != m.cup2(i, x, i, x) {
                r.push("sq_top_is_square", Some(i), m.names(i)[b].clone());
            }
        }
    }
    for i in 0..=n / 2 {
        let basis = m.f2_basis(i);
        for p in 0..basis.len() {
            for q in 0..p {
                if m.cup2.get(&(i, i)).map(|t| t[p][q] != t[q][p]).unwrap_or(false) {
                    r.push("commutativity", Some(i), format!("{} * {}", m.names(i)[p], m.names(i)[q]));
                }
            }
        }
    }
    for i in 1..=n {
        for j in 1..=n - i {
            for k in 1..=n - i - j {
                for x in m.f2_basis(i) {
                    for y in m.f2_basis(j) {
                        for z in m.f2_basis(k) {
                            let l = m.cup2(i + j, &m.cup2(i, &x, j, &y), k, &z);
                            let rr = m.cup2(i, &x, j + k, &m.cup2(j, &y, k, &z));
                            if l != rr {
                                r.push("associativity", Some(i + j + k), format!("degrees ({i},{j},{k})"));
                            }
                        }
                    }
                }
            }
        }
    }
    // Cartan formula on basis products.
    for i in 0..=n {
        for j in i..=n - i {
            for (p, x) in m.f2_basis(i).iter().enumerate() {
                for (q, y) in m.f2_basis(j).iter().enumerate() {
                    let xy = m.cup2(i, x, j, y);
                    for k in 1..=n - i - j {
                        let mut rhs = m.f2_zero(i + j + k);
                        for l in 0..=k {
                            rhs.xor_assign(&m.cup2(i + l, &m.sq(l, i, x), j + k - l, &m.sq(k - l, j, y)));
                        }
                        if m.sq(k, i + j, &xy) != rhs {
                            r.push("cartan", Some(i + j), format!("Sq{k}({} * {})", m.names(i)[p], m.names(j)[q]));
                        }
                    }
                }
            }
        }
    }
    // Adem relations Sqᵃ Sqᵇ = Σ C(b−c−1, a−2c) Sq^{a+b−c} Sqᶜ for a < 2b.
    for i in 0..=n {
        for b in 1..=n - i {
            for a in 1..(2 * b).min(n - i - b + 1) {
                for (p, x) in m.f2_basis(i).iter().enumerate() {
                    let lhs = m.sq(a, i + b, &m.sq(b, i, x));
                    let mut rhs = m.f2_zero(i + a + b);
                    for c in 0..=a / 2 {
                        if binom_odd(b - c - 1, a - 2 * c) {
                            rhs.xor_assign(&m.sq(a + b - c, i + c, &m.sq(c, i, x)));
                        }
                    }
                    if lhs != rhs {
                        r.push("adem", Some(i), format!("Sq{a}Sq{b} on {}", m.names(i)[p]));
                    }
                }
            }
        }
    }
    // Reduction and Bockstein.
    for i in 0..=n {
        let orders = m.z_orders(i);
        for g in 0..m.z_gens(i) {
            if !int::is_zero(&orders[g]) && !int::is_even(&orders[g]) && !m.rho2[i][g].is_zero() {
                r.push("rho2_well_defined", Some(i), format!("generator {g} of odd order"));
            }
            if i < n && !CohomologyModel::z_is_zero(&m.beta(i, &m.rho2(i, &m.z_unit(i, g)))) {
                r.push("beta_rho2", Some(i), format!("generator {g}"));
            }
        }
        if i < n {
            for (b, x) in m.f2_basis(i).iter().enumerate() {
                let bx = m.beta(i, x);
                if !CohomologyModel::z_is_zero(&m.z_scale(i + 1, &bx, &Int::from(2u8))) {
                    r.push("beta_order_two", Some(i), m.names(i)[b].clone());
                }
                if m.rho2(i + 1, &bx) != m.sq(1, i, x) {
                    r.push("rho2_beta_sq1", Some(i), m.names(i)[b].clone());
                }
            }
        }
        let image = Subspace::spanned_by(m.f2_dim(i), m.rho2[i].iter());
        let kernel = Subspace::spanned_by(m.f2_dim(i), m.beta_kernel(i).iter());
        if !image.equals(&kernel) {
            let witness = kernel.basis().into_iter().chain(image.basis()).find(|v| !image.contains(v) || !kernel.contains(v)).unwrap();
            r.push("exactness", Some(i), m.format_f2(i, &witness));
        }
    }
    // Integral products.
    for (&(i, j), table) in &m.cup_z {
        let oi = m.z_orders(i);
        let oj = m.z_orders(j);
        for (p, row) in table.iter().enumerate() {
            for (q, prod) in row.iter().enumerate() {
                let red = m.rho2(i + j, prod);
                if red != m.cup2(i, &m.rho2[i][p], j, &m.rho2[j][q]) {
                    r.push("cupz_reduction", Some(i + j), format!("generators {p} (deg {i}) and {q} (deg {j})"));
                }
                for o in [&oi[p], &oj[q]] {
                    if !int::is_zero(o) && !CohomologyModel::z_is_zero(&m.z_scale(i + j, prod, o)) {
                        r.push("cupz_torsion", Some(i + j), format!("generators {p} (deg {i}) and {q} (deg {j})"));
                    }
                }
                if i == j && i % 2 == 1 {
                    let sym = m.z_scale(i + j, &table[q][p], &Int::from(-1i8));
                    if &sym != prod {
                        r.push("cupz_graded_commutative", Some(i), format!("generators {p} and {q}"));
                    }
                } else if i == j && &table[q][p] != prod {
                    r.push("cupz_graded_commutative", Some(i), format!("generators {p} and {q}"));
                }
            }
        }
    }
    // Poincaré duality.
    if m.f2_dim(n) == 1 {
        for i in 0..=n {
            let p = pairing_matrix(m, i);
            if p.rank() != m.f2_dim(i) || m.f2_dim(i) != m.f2_dim(n - i) {
                let witness = p.kernel().first().map(|v| m.format_f2(i, v)).unwrap_or_else(|| format!("dimension {} vs {}", m.f2_dim(i), m.f2_dim(n - i)));
                r.push("poincare_pairing", Some(i), witness);
            }
        }
    }
    if m.is_orientable() && r.is_ok() {
        for k in 0..=n / 2 {
            let (rk, rl) = (m.degree(k).z_rank, m.degree(n - k).z_rank);
            if rk != rl {
                r.push("integral_pairing", Some(k), format!("free ranks {rk} and {rl}"));
                continue;
            }
            let mut mat = ZMatrix::zeros(rk, rk);
            for p in 0..rk {
                for q in 0..rk {
                    let prod = m.cup_z(k, &m.z_unit(k, p), n - k, &m.z_unit(n - k, q)).expect("required pair");
                    mat.set(p, q, m.eval_z(&prod).unwrap());
                }
            }
            let det = mat.determinant();
            if int::abs(&det) != Int::from(1u8) {
                r.push("integral_pairing", Some(k), format!("determinant {det}"));
            }
        }
        if n > 0 && m.f2_basis(n - 1).iter().any(|x| !m.sq(1, n - 1, x).is_zero()) {
            r.push("orientation", Some(n - 1), "Sq1 into the top degree is nonzero");
        }
    }
    r
}

/// Full validation of a 9-dimensional manifold model.
pub fn validate(m: &ManifoldModel) -> ValidationReport {
    let h = &m.cohomology;
    let mut r = validate_cohomology(h);
    if h.dimension != 9 {
        r.push("dimension", None, format!("dimension {} is not 9", h.dimension));
        return r;
    }
    if !h.is_orientable() {
        r.push("orientation", Some(9), "no orientation");
    }
    if let Some(phi) = &m.phi_hat {
        if phi.len() != h.f2_dim(5) {
            r.push("phi_hat", Some(5), format!("length {} for dimension {}", phi.len(), h.f2_dim(5)));
        }
    }
    if let Some(om) = &m.omega_pc {
        if om.representative.len() != h.f2_dim(8) {
            r.push("omega_pc", Some(8), format!("length {} for dimension {}", om.representative.len(), h.f2_dim(8)));
        }
    }
    if !r.is_ok() {
        r.skipped.push("characteristic class checks skipped".into());
        return r;
    }
    let wu = match wu_classes(h) {
        Ok(wu) => wu,
        Err(e) => {
            r.push("wu_classes", None, e.to_string());
            return r;
        }
    };
    for k in [1, 3, 5, 6, 7, 8, 9] {
        if !wu.v[k].is_zero() {
            r.push("wu_vanishing", Some(k), h.format_f2(k, &wu.v[k]));
        }
    }
    let sw = sw_from_wu(h, &wu);
    if let Err(id) = check_sw_identities(h, &wu, &sw) {
        r.push("stiefel_whitney", None, id);
    }
    // Lemma on squares, clauses that hold on every oriented 9-manifold.
    for (b, y) in h.f2_basis(6).iter().enumerate() {
        if h.sq(2, 6, y) != h.cup2(2, &sw.w[2], 6, y) {
            r.push("sq2_on_degree6", Some(6), h.names(6)[b].clone());
        }
    }
    let w4w22 = sw.w[4].xor(&h.cup2(2, &sw.w[2], 2, &sw.w[2]));
    for (b, z) in h.f2_basis(4).iter().enumerate() {
        if h.cup2(4, z, 4, z) != h.cup2(4, &w4w22, 4, z) {
            r.push("square_on_degree4", Some(4), h.names(4)[b].clone());
        }
    }
    if sw.w3_vanishes() {
        for k in [3, 5, 7, 9] {
            if !sw.w[k].is_zero() {
                r.push("spinc_odd_w", Some(k), h.format_f2(k, &sw.w[k]));
            }
        }
        if sw.w[6] != h.sq(2, 4, &sw.w[4]) {
            r.push("spinc_w6", Some(6), h.format_f2(6, &sw.w[6]));
        }
        let w2w4 = h.cup2(2, &sw.w[2], 4, &sw.w[4]);
        if !w2w4.is_zero() {
            r.push("spinc_w2w4", Some(6), h.format_f2(6, &w2w4));
        }
        let w2w6 = h.cup2(2, &sw.w[2], 6, &sw.w[6]);
        if !w2w6.is_zero() {
            r.push("spinc_w2w6", Some(8), h.format_f2(8, &w2w6));
        }
    } else {
        r.skipped.push("spin^c identities skipped: W3 != 0".into());
    }
    if let Err(e) = classes::compute_dm(h, &sw.w[2]) {
        r.push("d_m", Some(1), e.to_string());
    }
    if let Some(om) = m.omega_pc.as_ref().filter(|o| o.determined) {
        if let Ok(Some(computed)) = crate::decide::omega_from_formulas(m, &sw) {
            let supplied = classes::coset_reduce(h, &om.representative);
            if supplied != computed {
                r.push("omega_pc", Some(8), format!("supplied {} but formula gives {}", h.format_f2(8, &supplied.representative), h.format_f2(8, &computed.representative)));
            }
        }
    }
    r
}
