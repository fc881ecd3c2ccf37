//! Graded isomorphisms between models: relabelings, random automorphisms,
//! transport of structure and the commuting checks.

use crate::decide::{decide, DecideError};
use crate::model::{CohomologyModel, Degree, ManifoldModel, OmegaDatum, Orientation, ZVec};
use ninefold_simplicial::f2::{BitVec, F2Matrix};
use ninefold_simplicial::int::{self, Int};
use rand::seq::SliceRandom;
use rand::Rng;
use std::collections::BTreeMap;

/// Degree-wise maps a → b with their inverses. Integral maps are stored as
/// columns: the image of each generator.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedIso {
    pub f2: Vec<F2Matrix>,
    pub f2_inv: Vec<F2Matrix>,
    pub z: Vec<Vec<ZVec>>,
    pub z_inv: Vec<Vec<ZVec>>,
    /// Basis names of the image model, when the map permutes bases.
    pub names: Option<Vec<Vec<String>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IsoError {
    #[error("not an isomorphism: {0}")]
    NotCommuting(String),
    #[error(transparent)]
    Decide(#[from] DecideError),
}

fn z_apply(target: &CohomologyModel, i: usize, cols: &[ZVec], v: &ZVec) -> ZVec {
    let mut out = target.z_zero(i);
    for (x, col) in v.iter().zip(cols) {
        for (o, c) in out.iter_mut().zip(col) {
            *o += x * c;
        }
    }
    target.z_normalize(i, out)
}

fn identity_cols(d: usize) -> Vec<ZVec> {
    (0..d).map(|g| (0..d).map(|h| Int::from((g == h) as u8)).collect()).collect()
}

impl GradedIso {
    pub fn identity(m: &CohomologyModel) -> Self {
        let n = m.dimension;
        GradedIso {
            f2: (0..=n).map(|i| F2Matrix::identity(m.f2_dim(i))).collect(),
            f2_inv: (0..=n).map(|i| F2Matrix::identity(m.f2_dim(i))).collect(),
            z: (0..=n).map(|i| identity_cols(m.z_gens(i))).collect(),
            z_inv: (0..=n).map(|i| identity_cols(m.z_gens(i))).collect(),
            names: None,
        }
    }

    /// Random permutation of every basis (torsion generators only among equal
    /// orders) with random signs on free generators.
    pub fn relabeling<R: Rng>(m: &CohomologyModel, rng: &mut R) -> Self {
        let n = m.dimension;
        let mut iso = GradedIso::identity(m);
        let mut names = Vec::new();
        for i in 0..=n {
            let d = m.f2_dim(i);
            let mut perm: Vec<usize> = (0..d).collect();
            perm.shuffle(rng);
            // Basis element b goes to position perm[b].
            iso.f2[i] = F2Matrix::from_columns(d, (0..d).map(|b| BitVec::unit(d, perm[b])).collect());
            iso.f2_inv[i] = F2Matrix::from_columns(d, (0..d).map(|p| BitVec::unit(d, perm.iter().position(|&x| x == p).unwrap())).collect());
            let mut nm = vec![String::new(); d];
            for b in 0..d {
                nm[perm[b]] = m.names(i)[b].clone();
            }
            names.push(nm);

            let deg = m.degree(i);
            let g = deg.z_gens();
            let mut zperm: Vec<usize> = (0..deg.z_rank).collect();
            zperm.shuffle(rng);
            let mut start = deg.z_rank;
            while start < g {
                let end = (start..g).find(|&k| deg.z_torsion[k - deg.z_rank] != deg.z_torsion[start - deg.z_rank]).unwrap_or(g);
                let mut block: Vec<usize> = (start..end).collect();
                block.shuffle(rng);
                zperm.extend(block);
                start = end;
            }
            let signs: Vec<i64> = (0..g).map(|k| if k < deg.z_rank && rng.gen_bool(0.5) { -1 } else { 1 }).collect();
            let mut fwd = vec![vec![Int::from(0u8); g]; g];
            let mut inv = vec![vec![Int::from(0u8); g]; g];
            for k in 0..g {
                fwd[k][zperm[k]] = Int::from(signs[k]);
                inv[zperm[k]][k] = Int::from(signs[k]);
            }
            iso.z[i] = fwd;
            iso.z_inv[i] = inv;
        }
        iso.names = Some(names);
        iso
    }

    /// Random automorphism built from elementary moves: F₂ transvections, and
    /// integral moves g ↦ g + k·h allowed when ord(h) divides k·ord(g).
    pub fn random_automorphism<R: Rng>(m: &CohomologyModel, rng: &mut R, moves: usize) -> Self {
        let n = m.dimension;
        let mut iso = GradedIso::identity(m);
        for i in 0..=n {
            let d = m.f2_dim(i);
            if d >= 2 {
                for _ in 0..moves {
                    let (a, b) = (rng.gen_range(0..d), rng.gen_range(0..d));
                    if a == b {
                        continue;
                    }
                    // e_a ↦ e_a + e_b; inverse is the same move.
                    let mut fcols = iso.f2[i].columns().to_vec();
                    fcols[a] = fcols[a].xor(&fcols[b]);
                    iso.f2[i] = F2Matrix::from_columns(d, fcols);
                    let t = F2Matrix::from_columns(d, (0..d).map(|c| if c == a { BitVec::unit(d, a).xor(&BitVec::unit(d, b)) } else { BitVec::unit(d, c) }).collect());
                    iso.f2_inv[i] = t.compose(&iso.f2_inv[i]);
                }
            }
            let orders = m.z_orders(i);
            let g = orders.len();
            if g >= 2 {
                for _ in 0..moves {
                    let (a, b) = (rng.gen_range(0..g), rng.gen_range(0..g));
                    let k = Int::from(rng.gen_range(-2i64..=2));
                    if a == b || int::is_zero(&k) {
                        continue;
                    }
                    // Well-defined iff ord(b) | k·ord(a), with 0 for free generators.
                    let lhs = &k * &orders[a];
                    let ok = if int::is_zero(&orders[b]) { int::is_zero(&orders[a]) } else { int::is_zero(&int::reduce(&lhs, &orders[b])) };
                    if !ok {
                        continue;
                    }
                    // Forward: precompose with e_a ↦ e_a + k e_b.
                    let col_b = iso.z[i][b].clone();
                    let col_a: ZVec = iso.z[i][a].iter().zip(&col_b).map(|(x, y)| x + &k * y).collect();
                    iso.z[i][a] = m.z_normalize(i, col_a);
                    // Inverse: postcompose with e_a ↦ e_a − k e_b, i.e. coordinate b −= k·coordinate a.
                    for col in iso.z_inv[i].iter_mut() {
                        let new_b = &col[b] - &k * &col[a];
                        col[b] = new_b;
                        *col = m.z_normalize(i, col.clone());
                    }
                }
            }
        }
        iso
    }

    pub fn map_f2(&self, i: usize, x: &BitVec) -> BitVec {
        self.f2[i].apply(x)
    }

    /// Image of `a` under the isomorphism: all structure is conjugated.
    pub fn transport(&self, a: &ManifoldModel) -> ManifoldModel {
        let h = &a.cohomology;
        let n = h.dimension;
        let graded: Vec<Degree> = (0..=n)
            .map(|i| {
                let d = h.degree(i);
                let names = match &self.names {
                    Some(nm) => nm[i].clone(),
                    None => (0..d.f2_dim()).map(|k| format!("b{i}_{k}")).collect(),
                };
                Degree { z_rank: d.z_rank, z_torsion: d.z_torsion.clone(), f2_basis: names }
            })
            .collect();
        let mut b = CohomologyModel {
            dimension: n,
            graded,
            rho2: vec![],
            beta: vec![],
            sq: BTreeMap::new(),
            cup2: BTreeMap::new(),
            cup_z: BTreeMap::new(),
            orientation: None,
        };
        let finv = |i: usize, x: &BitVec| self.f2_inv[i].apply(x);
        let zf = |i: usize, v: &ZVec| z_apply(h, i, &self.z[i], v);
        let zinv = |i: usize, v: &ZVec| z_apply(h, i, &self.z_inv[i], v);
        for i in 0..=n {
            b.rho2.push((0..h.z_gens(i)).map(|g| self.f2[i].apply(&h.rho2(i, &zinv(i, &h.z_unit(i, g))))).collect());
            b.beta.push(
                (0..h.f2_dim(i))
                    .map(|e| if i < n { zf(i + 1, &h.beta(i, &finv(i, &h.f2_unit(i, e)))) } else { vec![] })
                    .collect(),
            );
        }
        for &(k, i) in h.sq.keys() {
            b.sq.insert((k, i), (0..h.f2_dim(i)).map(|e| self.f2[i + k].apply(&h.sq(k, i, &finv(i, &h.f2_unit(i, e))))).collect());
        }
        for &(i, j) in h.cup2.keys() {
            let t = (0..h.f2_dim(i))
                .map(|p| {
                    (0..h.f2_dim(j))
                        .map(|q| self.f2[i + j].apply(&h.cup2(i, &finv(i, &h.f2_unit(i, p)), j, &finv(j, &h.f2_unit(j, q)))))
                        .collect()
                })
                .collect();
            b.cup2.insert((i, j), t);
        }
        for &(i, j) in h.cup_z.keys() {
            let t = (0..h.z_gens(i))
                .map(|p| {
                    (0..h.z_gens(j))
                        .map(|q| {
                            let prod = h.cup_z(i, &zinv(i, &h.z_unit(i, p)), j, &zinv(j, &h.z_unit(j, q))).expect("stored pair");
                            zf(i + j, &prod)
                        })
                        .collect()
                })
                .collect();
            b.cup_z.insert((i, j), t);
        }
        b.orientation = h.orientation.map(|o| {
            let eps = int::to_i64(&self.z[n][0][0]).expect("top map is ±1");
            Orientation { top_sign: o.top_sign * eps }
        });
        ManifoldModel {
            label: a.label.clone(),
            cohomology: b,
            phi_hat: a.phi_hat.as_ref().map(|x| self.f2[5].apply(x)),
            omega_pc: a.omega_pc.as_ref().map(|o| OmegaDatum { representative: self.f2[8].apply(&o.representative), determined: o.determined }),
        }
    }

    /// Verifies that the maps are mutually inverse and commute with every
    /// structure map of `a` and `b`.
    pub fn check(&self, a: &ManifoldModel, b: &ManifoldModel) -> Result<(), IsoError> {
        let (ha, hb) = (&a.cohomology, &b.cohomology);
        let n = ha.dimension;
        let fail = |s: String| Err(IsoError::NotCommuting(s));
        if hb.dimension != n || self.f2.len() != n + 1 || self.z.len() != n + 1 || self.f2_inv.len() != n + 1 || self.z_inv.len() != n + 1 {
            return fail("dimensions".into());
        }
        for i in 0..=n {
            let (da, db) = (ha.f2_dim(i), hb.f2_dim(i));
            if self.f2[i].rows() != db || self.f2[i].ncols() != da || self.f2_inv[i].rows() != da || self.f2_inv[i].ncols() != db {
                return fail(format!("F2 map shape in degree {i}"));
            }
            if self.f2_inv[i].compose(&self.f2[i]) != F2Matrix::identity(da) || self.f2[i].compose(&self.f2_inv[i]) != F2Matrix::identity(db) {
                return fail(format!("F2 maps not inverse in degree {i}"));
            }
            if self.z[i].len() != ha.z_gens(i) || self.z_inv[i].len() != hb.z_gens(i) {
                return fail(format!("integral map shape in degree {i}"));
            }
            if self.z[i].iter().any(|c| c.len() != hb.z_gens(i)) || self.z_inv[i].iter().any(|c| c.len() != ha.z_gens(i)) {
                return fail(format!("integral map shape in degree {i}"));
            }
            // Well-defined on torsion, and mutually inverse.
            for (g, o) in ha.z_orders(i).iter().enumerate() {
                if !int::is_zero(o) && !CohomologyModel::z_is_zero(&hb.z_scale(i, &self.z[i][g], o)) {
                    return fail(format!("integral map ignores the order of generator {g} in degree {i}"));
                }
                let back = z_apply(ha, i, &self.z_inv[i], &self.z[i][g]);
                if back != ha.z_unit(i, g) {
                    return fail(format!("integral maps not inverse in degree {i}"));
                }
            }
            for (g, o) in hb.z_orders(i).iter().enumerate() {
                if !int::is_zero(o) && !CohomologyModel::z_is_zero(&ha.z_scale(i, &self.z_inv[i][g], o)) {
                    return fail(format!("inverse ignores the order of generator {g} in degree {i}"));
                }
                if z_apply(hb, i, &self.z[i], &self.z_inv[i][g]) != hb.z_unit(i, g) {
                    return fail(format!("integral maps not inverse in degree {i}"));
                }
            }
            for g in 0..ha.z_gens(i) {
                if self.f2[i].apply(&ha.rho2[i][g]) != hb.rho2(i, &self.z[i][g]) {
                    return fail(format!("rho2 in degree {i}"));
                }
            }
            if i < n {
                for e in 0..da {
                    let x = ha.f2_unit(i, e);
                    if z_apply(hb, i + 1, &self.z[i + 1], &ha.beta(i, &x)) != hb.beta(i, &self.f2[i].apply(&x)) {
                        return fail(format!("beta in degree {i}"));
                    }
                }
            }
            for k in 0..=n - i {
                for e in 0..da {
                    let x = ha.f2_unit(i, e);
                    if self.f2[i + k].apply(&ha.sq(k, i, &x)) != hb.sq(k, i, &self.f2[i].apply(&x)) {
                        return fail(format!("Sq{k} in degree {i}"));
                    }
                }
            }
            for j in i..=n - i {
                for x in ha.f2_basis(i) {
                    for y in ha.f2_basis(j) {
                        let lhs = self.f2[i + j].apply(&ha.cup2(i, &x, j, &y));
                        if lhs != hb.cup2(i, &self.f2[i].apply(&x), j, &self.f2[j].apply(&y)) {
                            return fail(format!("mod-2 product in degrees ({i},{j})"));
                        }
                    }
                }
            }
        }
        for &(i, j) in ha.cup_z.keys() {
            for p in 0..ha.z_gens(i) {
                for q in 0..ha.z_gens(j) {
                    let prod = ha.cup_z(i, &ha.z_unit(i, p), j, &ha.z_unit(j, q)).unwrap();
                    let lhs = z_apply(hb, i + j, &self.z[i + j], &prod);
                    let Some(rhs) = hb.cup_z(i, &self.z[i][p], j, &self.z[j][q]) else {
                        return fail(format!("integral products ({i},{j}) missing in the target"));
                    };
                    if lhs != rhs {
                        return fail(format!("integral product in degrees ({i},{j})"));
                    }
                }
            }
        }
        match (ha.orientation, hb.orientation) {
            (None, None) => {}
            (Some(oa), Some(ob)) => {
                let image = hb.z_scale(n, &self.z[n][0], &Int::from(oa.top_sign));
                if image[0] != Int::from(ob.top_sign) {
                    return fail("orientation".into());
                }
            }
            _ => return fail("orientation".into()),
        }
        match (&a.phi_hat, &b.phi_hat) {
            (None, None) => {}
            (Some(x), Some(y)) if self.f2[5].apply(x) == *y => {}
            _ => return fail("phi_hat".into()),
        }
        match (&a.omega_pc, &b.omega_pc) {
            (None, None) => {}
            (Some(x), Some(y)) if x.determined == y.determined => {
                let sa = crate::classes::coset_reduce(hb, &self.f2[8].apply(&x.representative));
                if sa != crate::classes::coset_reduce(hb, &y.representative) {
                    return fail("omega_pc".into());
                }
            }
            _ => return fail("omega_pc".into()),
        }
        Ok(())
    }
}

/// Checks the isomorphism, then compares the two verdicts.
pub fn homotopy_invariance_check(a: &ManifoldModel, b: &ManifoldModel, iso: &GradedIso) -> Result<bool, IsoError> {
    iso.check(a, b)?;
    let (va, vb) = (decide(a)?, decide(b)?);
    Ok(va.same_decision(&vb))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::library::library;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_and_relabeling() {
        let a = library("S1xCP4").unwrap();
        assert!(homotopy_invariance_check(&a, &a, &GradedIso::identity(&a.cohomology)).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let iso = GradedIso::relabeling(&a.cohomology, &mut rng);
        let b = iso.transport(&a);
        assert!(homotopy_invariance_check(&a, &b, &iso).unwrap());
    }

    #[test]
    fn broken_sq_is_rejected() {
        let a = library("S1xCP4").unwrap();
        let mut b = a.clone();
        // Sq²a³ = a⁴ dropped.
        let cols = b.cohomology.sq.get_mut(&(2, 6)).unwrap();
        cols[0] = BitVec::zeros(cols[0].len());
        let r = homotopy_invariance_check(&a, &b, &GradedIso::identity(&a.cohomology));
        assert!(matches!(r, Err(IsoError::NotCommuting(_))), "{r:?}");
    }
}
