//! Model constructors: standard spaces, products, connected sums and
//! triangulated complexes.

use crate::model::{CohomologyModel, Degree, ManifoldModel, OmegaDatum, Orientation, ZVec};
use crate::poly::PolyBuilder;
use crate::BuildError;
use ninefold_simplicial::f2::{BitVec, F2Matrix};
use ninefold_simplicial::int::Int;
use ninefold_simplicial::{Coefficients, Cohomology, SimplicialComplex};
use std::collections::BTreeMap;

pub fn point() -> CohomologyModel {
    PolyBuilder::new(0).build().expect("point")
}

pub fn sphere(n: usize) -> CohomologyModel {
    assert!(n > 0);
    let name = if n == 1 { "s".to_string() } else { format!("e{n}") };
    PolyBuilder::new(n).generator(&name, n, 2).build().expect("sphere")
}

pub fn circle() -> CohomologyModel {
    sphere(1)
}

/// Complex projective space CPⁿ.
pub fn cp(n: usize) -> CohomologyModel {
    PolyBuilder::new(2 * n).generator("a", 2, n as u32 + 1).build().expect("cp")
}

/// Quaternionic projective space HPⁿ.
pub fn hp(n: usize) -> CohomologyModel {
    PolyBuilder::new(4 * n).generator("u", 4, n as u32 + 1).build().expect("hp")
}

/// Real projective space RPⁿ.
pub fn rp(n: usize) -> CohomologyModel {
    PolyBuilder::new(n).generator("x", 1, n as u32 + 1).build().expect("rp")
}

fn kron(a: &BitVec, b: &BitVec) -> BitVec {
    let mut out = BitVec::zeros(a.len() * b.len());
    for p in a.ones() {
        for q in b.ones() {
            out.set(p * b.len() + q, true);
        }
    }
    out
}

fn join_names(x: &str, y: &str) -> String {
    match (x, y) {
        ("1", y) => y.to_string(),
        (x, "1") => x.to_string(),
        (x, y) => format!("{x}*{y}"),
    }
}

/// Künneth assembly for torsion-free factors. Degree-`t` bases are ordered by
/// the degree of the first factor, then lexicographically.
pub fn build_product(a: &CohomologyModel, b: &CohomologyModel) -> Result<CohomologyModel, BuildError> {
    if a.graded.iter().chain(&b.graded).any(|d| !d.z_torsion.is_empty()) {
        return Err(BuildError::TorsionFactor);
    }
    let (na, nb) = (a.dimension, b.dimension);
    let n = na + nb;
    // offsets[t][i]: first index in degree t of the block H^i(a) ⊗ H^{t-i}(b).
    let block = |t: usize, i: usize| -> Option<usize> {
        let j = t.checked_sub(i)?;
        (i <= na && j <= nb).then_some(j)
    };
    let mut f2_off = vec![BTreeMap::new(); n + 1];
    let mut z_off = vec![BTreeMap::new(); n + 1];
    let mut graded = Vec::new();
    for t in 0..=n {
        let (mut f, mut z) = (0, 0);
        let mut names = Vec::new();
        for i in 0..=t {
            let Some(j) = block(t, i) else { continue };
            f2_off[t].insert(i, f);
            z_off[t].insert(i, z);
            for x in a.names(i) {
                for y in b.names(j) {
                    names.push(join_names(x, y));
                }
            }
            f += a.f2_dim(i) * b.f2_dim(j);
            z += a.degree(i).z_rank * b.degree(j).z_rank;
        }
        graded.push(Degree { z_rank: z, z_torsion: vec![], f2_basis: names });
    }
    let f2_dim = |t: usize| graded[t].f2_basis.len();
    let embed = |t: usize, i: usize, v: &BitVec| -> BitVec {
        let mut out = BitVec::zeros(f2_dim(t));
        let off = f2_off[t][&i];
        for k in v.ones() {
            out.set(off + k, true);
        }
        out
    };
    // F₂ basis of degree t as (i, p, q).
    let f2_elems = |t: usize| -> Vec<(usize, usize, usize)> {
        let mut v = Vec::new();
        for &i in f2_off[t].keys() {
            for p in 0..a.f2_dim(i) {
                for q in 0..b.f2_dim(t - i) {
                    v.push((i, p, q));
                }
            }
        }
        v
    };
    let z_elems = |t: usize| -> Vec<(usize, usize, usize)> {
        let mut v = Vec::new();
        for &i in z_off[t].keys() {
            for p in 0..a.degree(i).z_rank {
                for q in 0..b.degree(t - i).z_rank {
                    v.push((i, p, q));
                }
            }
        }
        v
    };

    let mut rho2 = Vec::new();
    let mut beta = Vec::new();
    for t in 0..=n {
        rho2.push(
            z_elems(t)
                .into_iter()
                .map(|(i, p, q)| embed(t, i, &kron(&a.rho2[i][p], &b.rho2[t - i][q])))
                .collect::<Vec<_>>(),
        );
        let target = if t < n { graded[t + 1].z_rank } else { 0 };
        beta.push(vec![vec![Int::from(0u8); target]; f2_dim(t)]);
    }

    let mut sq = BTreeMap::new();
    for t in 0..=n {
        for k in 0..=n - t {
            let cols = f2_elems(t)
                .into_iter()
                .map(|(i, p, q)| {
                    let j = t - i;
                    let mut out = BitVec::zeros(f2_dim(t + k));
                    for l in 0..=k {
                        if i + l > na || j + k - l > nb {
                            continue;
                        }
                        let x = a.sq(l, i, &a.f2_unit(i, p));
                        let y = b.sq(k - l, j, &b.f2_unit(j, q));
                        out.xor_assign(&embed(t + k, i + l, &kron(&x, &y)));
                    }
                    out
                })
                .collect::<Vec<_>>();
            sq.insert((k, t), cols);
        }
    }

    let mut cup2 = BTreeMap::new();
    for s in 0..=n {
        for t in s..=n - s {
            let left = f2_elems(s);
            let right = f2_elems(t);
            let table: Vec<Vec<BitVec>> = left
                .iter()
                .map(|&(i, p, q)| {
                    right
                        .iter()
                        .map(|&(i2, p2, q2)| {
                            let (j, j2) = (s - i, t - i2);
                            if i + i2 > na || j + j2 > nb {
                                return BitVec::zeros(f2_dim(s + t));
                            }
                            let x = a.cup2(i, &a.f2_unit(i, p), i2, &a.f2_unit(i2, p2));
                            let y = b.cup2(j, &b.f2_unit(j, q), j2, &b.f2_unit(j2, q2));
                            embed(s + t, i + i2, &kron(&x, &y))
                        })
                        .collect()
                })
                .collect();
            cup2.insert((s, t), table);
        }
    }

    let mut cup_z = BTreeMap::new();
    for s in 0..=n {
        'pairs: for t in s..=n - s {
            let left = z_elems(s);
            let right = z_elems(t);
            let mut table = vec![vec![Vec::new(); right.len()]; left.len()];
            for (l, &(i, p, q)) in left.iter().enumerate() {
                for (r, &(i2, p2, q2)) in right.iter().enumerate() {
                    let (j, j2) = (s - i, t - i2);
                    let mut out = vec![Int::from(0u8); graded[s + t].z_rank];
                    if i + i2 <= na && j + j2 <= nb {
                        let Some(x) = a.cup_z(i, &a.z_unit(i, p), i2, &a.z_unit(i2, p2)) else { continue 'pairs };
                        let Some(y) = b.cup_z(j, &b.z_unit(j, q), j2, &b.z_unit(j2, q2)) else { continue 'pairs };
                        let sign = if j * i2 % 2 == 1 { -1 } else { 1 };
                        let off = z_off[s + t][&(i + i2)];
                        let yl = y.len();
                        for (u, xu) in x.iter().enumerate() {
                            for (w, yw) in y.iter().enumerate() {
                                out[off + u * yl + w] += xu * yw * Int::from(sign);
                            }
                        }
                    }
                    table[l][r] = out;
                }
            }
            cup_z.insert((s, t), table);
        }
    }
    for pair in crate::model::required_cup_z_pairs(n) {
        if !cup_z.contains_key(&pair) {
            return Err(BuildError::MissingProducts(pair));
        }
    }
    let orientation = match (a.orientation, b.orientation) {
        (Some(x), Some(y)) => Some(Orientation { top_sign: x.top_sign * y.top_sign }),
        _ => None,
    };
    Ok(CohomologyModel { dimension: n, graded, rho2, beta, sq, cup2, cup_z, orientation })
}

fn prefixed(prefix: &str, names: &[String]) -> Vec<String> {
    names.iter().map(|n| format!("{prefix}.{n}")).collect()
}

/// Connected sum of two oriented closed models of the same dimension.
pub fn connected_sum_cohomology(
    a: &CohomologyModel,
    b: &CohomologyModel,
    labels: (&str, &str),
) -> Result<CohomologyModel, BuildError> {
    let n = a.dimension;
    if b.dimension != n {
        return Err(BuildError::DimensionMismatch(n, b.dimension));
    }
    if n == 0 {
        return Err(BuildError::Invalid("connected sum needs positive dimension".into()));
    }
    let (Some(oa), Some(ob)) = (a.orientation, b.orientation) else {
        return Err(BuildError::NotOrientable);
    };
    let la = labels.0.to_string();
    let lb = if labels.0 == labels.1 { format!("{}'", labels.1) } else { labels.1.to_string() };
    let middle = |i: usize| 0 < i && i < n;

    // Integral generators: free (a then b), then torsion sorted stably by order.
    let mut graded = Vec::new();
    // zmap[i]: (side, generator) -> new index
    let mut zmap: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
    for i in 0..=n {
        if !middle(i) {
            let d = a.degree(i);
            graded.push(Degree { z_rank: 1, z_torsion: vec![], f2_basis: d.f2_basis.clone() });
            zmap.push((vec![0], vec![0]));
            continue;
        }
        let (da, db) = (a.degree(i), b.degree(i));
        let mut torsion: Vec<(Int, bool, usize)> = da
            .z_torsion
            .iter()
            .enumerate()
            .map(|(k, o)| (o.clone(), false, k))
            .chain(db.z_torsion.iter().enumerate().map(|(k, o)| (o.clone(), true, k)))
            .collect();
        torsion.sort_by(|x, y| x.0.cmp(&y.0));
        let mut ma = vec![0; da.z_gens()];
        let mut mb = vec![0; db.z_gens()];
        for g in 0..da.z_rank {
            ma[g] = g;
        }
        for g in 0..db.z_rank {
            mb[g] = da.z_rank + g;
        }
        let free = da.z_rank + db.z_rank;
        for (pos, (_, right, k)) in torsion.iter().enumerate() {
            if *right {
                mb[db.z_rank + k] = free + pos;
            } else {
                ma[da.z_rank + k] = free + pos;
            }
        }
        let mut names = prefixed(&la, &da.f2_basis);
        names.extend(prefixed(&lb, &db.f2_basis));
        graded.push(Degree { z_rank: free, z_torsion: torsion.into_iter().map(|t| t.0).collect(), f2_basis: names });
        zmap.push((ma, mb));
    }
    let f2_dim = |i: usize| graded[i].f2_basis.len();
    // Embedding of F₂ classes from a side; the ends are shared.
    let emb2 = |side: bool, i: usize, x: &BitVec| -> BitVec {
        if !middle(i) {
            return x.clone();
        }
        let mut out = BitVec::zeros(f2_dim(i));
        let off = if side { a.f2_dim(i) } else { 0 };
        for k in x.ones() {
            out.set(off + k, true);
        }
        out
    };
    let embz = |side: bool, i: usize, z: &ZVec| -> ZVec {
        let mut out = vec![Int::from(0u8); graded[i].z_gens()];
        if i == n {
            // Coordinates relative to the fused orientation class.
            let sign = if side { ob.top_sign } else { oa.top_sign };
            out[0] = &z[0] * Int::from(sign);
            return out;
        }
        let map = if side { &zmap[i].1 } else { &zmap[i].0 };
        for (g, x) in z.iter().enumerate() {
            out[map[g]] += x;
        }
        out
    };
    let sides = |i: usize| -> Vec<(bool, usize)> {
        if middle(i) {
            (0..a.f2_dim(i)).map(|k| (false, k)).chain((0..b.f2_dim(i)).map(|k| (true, k))).collect()
        } else {
            (0..a.f2_dim(i)).map(|k| (false, k)).collect()
        }
    };
    let model_of = |side: bool| if side { b } else { a };

    let mut rho2 = Vec::new();
    let mut beta = Vec::new();
    for i in 0..=n {
        let mut cols = vec![BitVec::zeros(f2_dim(i)); graded[i].z_gens()];
        if middle(i) {
            for (side, m) in [(false, a), (true, b)] {
                let map = if side { &zmap[i].1 } else { &zmap[i].0 };
                for (g, col) in m.rho2[i].iter().enumerate() {
                    cols[map[g]] = emb2(side, i, col);
                }
            }
        } else {
            cols[0] = a.rho2[i][0].clone();
        }
        rho2.push(cols);
        beta.push(
            sides(i)
                .into_iter()
                .map(|(side, k)| {
                    let m = model_of(side);
                    if i == n {
                        return vec![];
                    }
                    let z = m.beta(i, &m.f2_unit(i, k));
                    if i + 1 == n {
                        // β into the top degree vanishes on oriented models.
                        return vec![Int::from(0u8); 1];
                    }
                    embz(side, i + 1, &z)
                })
                .collect::<Vec<_>>(),
        );
    }

    let mut sq = BTreeMap::new();
    for i in 0..=n {
        for k in 0..=n - i {
            let cols = sides(i)
                .into_iter()
                .map(|(side, p)| {
                    if i == 0 {
                        return if k == 0 { BitVec::unit(1, 0) } else { BitVec::zeros(f2_dim(k)) };
                    }
                    let m = model_of(side);
                    emb2(side, i + k, &m.sq(k, i, &m.f2_unit(i, p)))
                })
                .collect::<Vec<_>>();
            sq.insert((k, i), cols);
        }
    }

    let mut cup2 = BTreeMap::new();
    let mut cup_z = BTreeMap::new();
    for i in 0..=n {
        for j in i..=n - i {
            let t = i + j;
            let table: Vec<Vec<BitVec>> = sides(i)
                .into_iter()
                .map(|(s1, p)| {
                    sides(j)
                        .into_iter()
                        .map(|(s2, q)| {
                            // Degree-0 classes are the common unit.
                            let side = if i == 0 { s2 } else { s1 };
                            if i > 0 && j > 0 && s1 != s2 {
                                return BitVec::zeros(f2_dim(t));
                            }
                            let m = model_of(side);
                            emb2(side, t, &m.cup2(i, &m.f2_unit(i, p), j, &m.f2_unit(j, q)))
                        })
                        .collect()
                })
                .collect();
            cup2.insert((i, j), table);

            let (Some(_), Some(_)) = (a.cup_z.get(&(i, j)), b.cup_z.get(&(i, j))) else { continue };
            let zsides = |d: usize| -> Vec<(bool, usize)> {
                if !middle(d) {
                    return vec![(false, 0)];
                }
                let mut v = vec![(false, 0usize); graded[d].z_gens()];
                for (g, &pos) in zmap[d].0.iter().enumerate() {
                    v[pos] = (false, g);
                }
                for (g, &pos) in zmap[d].1.iter().enumerate() {
                    v[pos] = (true, g);
                }
                v
            };
            let table: Vec<Vec<ZVec>> = zsides(i)
                .into_iter()
                .map(|(s1, p)| {
                    zsides(j)
                        .into_iter()
                        .map(|(s2, q)| {
                            let side = if i == 0 { s2 } else { s1 };
                            if i > 0 && j > 0 && s1 != s2 {
                                return vec![Int::from(0u8); graded[t].z_gens()];
                            }
                            let m = model_of(side);
                            // The unit and the top generator are identified across sides.
                            let zq = if j == n { orientation_class(m) } else { m.z_unit(j, q) };
                            let prod = m.cup_z(i, &m.z_unit(i, p), j, &zq).expect("pair present");
                            embz(side, t, &prod)
                        })
                        .collect()
                })
                .collect();
            cup_z.insert((i, j), table);
        }
    }
    Ok(CohomologyModel {
        dimension: n,
        graded,
        rho2,
        beta,
        sq,
        cup2,
        cup_z,
        orientation: Some(Orientation { top_sign: 1 }),
    })
}

/// The orientation class in `m`'s top coordinates.
fn orientation_class(m: &CohomologyModel) -> ZVec {
    let mut v = m.z_zero(m.dimension);
    v[0] = Int::from(m.orientation.expect("oriented").top_sign);
    v
}

pub fn connected_sum(a: &ManifoldModel, b: &ManifoldModel) -> Result<ManifoldModel, BuildError> {
    let h = connected_sum_cohomology(&a.cohomology, &b.cohomology, (&a.label, &b.label))?;
    // Data on a vanishing group is known without being supplied.
    let phi = |m: &ManifoldModel| m.phi_hat.clone().or_else(|| (m.cohomology.f2_dim(5) == 0).then(|| BitVec::zeros(0)));
    let omega = |m: &ManifoldModel| match &m.omega_pc {
        Some(o) if o.determined => Some(o.representative.clone()),
        _ => (m.cohomology.f2_dim(8) == 0).then(|| BitVec::zeros(0)),
    };
    let phi_hat = match (phi(a), phi(b)) {
        (Some(x), Some(y)) if a.phi_hat.is_some() || b.phi_hat.is_some() => Some(x.concat(&y)),
        _ => None,
    };
    let omega_pc = match (omega(a), omega(b)) {
        (Some(x), Some(y)) if a.omega_pc.is_some() || b.omega_pc.is_some() => Some(OmegaDatum { representative: x.concat(&y), determined: true }),
        _ => None,
    };
    Ok(ManifoldModel { label: format!("{}#{}", a.label, b.label), cohomology: h, phi_hat, omega_pc })
}

/// Cohomology model computed from a triangulated closed manifold.
pub fn from_simplicial(x: &SimplicialComplex) -> Result<CohomologyModel, BuildError> {
    let n = x.dimension();
    let hz = Cohomology::compute(x, Coefficients::Integers);
    let h2 = Cohomology::compute(x, Coefficients::F2);
    let dim2 = |d: usize| h2.num_generators(d);
    if dim2(n) != 1 {
        return Err(BuildError::NotClosedManifold(format!("top mod-2 group has dimension {}", dim2(n))));
    }
    let engine = |e: ninefold_simplicial::Error| BuildError::Engine(e.to_string());
    let mut graded = Vec::new();
    let mut rho2 = Vec::new();
    let mut beta = Vec::new();
    for d in 0..=n {
        let g = hz.group(d);
        let names = (0..dim2(d)).map(|k| format!("e{d}_{k}")).collect();
        graded.push(Degree { z_rank: g.free_rank, z_torsion: g.torsion.clone(), f2_basis: names });
        rho2.push(hz.generators(d).iter().map(|c| hz.reduce(c, &h2).map(|r| r.to_bits())).collect::<Result<Vec<_>, _>>().map_err(engine)?);
        beta.push(if d < n {
            h2.generators(d).iter().map(|c| h2.bockstein(c, &hz).map(|r| r.coords)).collect::<Result<Vec<_>, _>>().map_err(engine)?
        } else {
            vec![vec![]; dim2(d)]
        });
    }
    let mut sq = BTreeMap::new();
    for i in 0..=n {
        for k in 0..=n - i {
            let cols = h2.generators(i).iter().map(|c| h2.sq(k, c).map(|r| r.to_bits())).collect::<Result<Vec<_>, _>>().map_err(engine)?;
            sq.insert((k, i), cols);
        }
    }
    let mut cup2 = BTreeMap::new();
    let mut cup_z = BTreeMap::new();
    for i in 0..=n {
        for j in i..=n - i {
            let t2: Vec<Vec<BitVec>> =
                h2.generators(i).iter().map(|p| h2.generators(j).iter().map(|q| h2.cup(p, q).to_bits()).collect()).collect();
            cup2.insert((i, j), t2);
            let tz: Vec<Vec<ZVec>> =
                hz.generators(i).iter().map(|p| hz.generators(j).iter().map(|q| hz.cup(p, q).coords).collect()).collect();
            cup_z.insert((i, j), tz);
        }
    }
    let top = hz.group(n);
    let orientation = (top.free_rank == 1 && top.torsion.is_empty()).then_some(Orientation { top_sign: 1 });
    let model = CohomologyModel { dimension: n, graded, rho2, beta, sq, cup2, cup_z, orientation };
    for i in 0..=n {
        let cols: Vec<BitVec> = model
            .f2_basis(i)
            .iter()
            .map(|x| BitVec::from_bools(&model.f2_basis(n - i).iter().map(|y| model.eval2(&model.cup2(i, x, n - i, y))).collect::<Vec<_>>()))
            .collect();
        let p = F2Matrix::from_columns(model.f2_dim(n - i), cols);
        if p.rank() != model.f2_dim(i) || model.f2_dim(i) != model.f2_dim(n - i) {
            return Err(BuildError::NotClosedManifold(format!("mod-2 Poincaré pairing degenerate in degree {i}")));
        }
    }
    Ok(model)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_ranks() {
        let m = build_product(&circle(), &cp(4)).unwrap();
        let ranks: Vec<usize> = (0..=9).map(|i| m.graded[i].z_rank).collect();
        assert_eq!(ranks, vec![1; 10]);
        assert_eq!(m.names(5), &["s*a^2".to_string()]);
    }

    #[test]
    fn product_with_point_is_identity() {
        let x = cp(2);
        assert_eq!(build_product(&x, &point()).unwrap(), x);
    }
}
