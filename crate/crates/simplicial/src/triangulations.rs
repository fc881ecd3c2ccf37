//! Small named triangulations and random complexes used by tests and self-checks.

use crate::complex::SimplicialComplex;
use rand::seq::SliceRandom;
use rand::Rng;
use std::collections::{BTreeMap, BTreeSet};

fn build(n: usize, facets: Vec<Vec<u32>>) -> SimplicialComplex {
    SimplicialComplex::from_facets(n, &facets).expect("built-in triangulation is valid")
}

/// Boundary of the (d+1)-simplex, a d-sphere.
pub fn sphere(d: usize) -> SimplicialComplex {
    let n = d + 2;
    let facets = (0..n as u32).map(|skip| (0..n as u32).filter(|&v| v != skip).collect()).collect();
    build(n, facets)
}

/// Six-vertex real projective plane.
pub fn rp2() -> SimplicialComplex {
    let f: [[u32; 3]; 10] =
        [[1, 2, 3], [1, 3, 4], [1, 4, 5], [1, 5, 6], [1, 6, 2], [2, 3, 5], [3, 4, 6], [4, 5, 2], [5, 6, 3], [6, 2, 4]];
    build(6, f.iter().map(|t| t.iter().map(|v| v - 1).collect()).collect())
}

/// Seven-vertex torus.
pub fn torus() -> SimplicialComplex {
    let mut facets = Vec::new();
    for i in 0..7u32 {
        facets.push(vec![i, (i + 1) % 7, (i + 3) % 7]);
        facets.push(vec![i, (i + 2) % 7, (i + 3) % 7]);
    }
    build(7, facets)
}

/// Nine-vertex complex projective plane.
pub fn cp2() -> SimplicialComplex {
    const F: [[u32; 5]; 36] = [
        [0, 1, 2, 3, 4],
        [0, 1, 2, 3, 5],
        [0, 1, 2, 4, 5],
        [0, 1, 6, 7, 8],
        [0, 2, 6, 7, 8],
        [1, 2, 6, 7, 8],
        [3, 4, 5, 6, 7],
        [3, 4, 5, 6, 8],
        [3, 4, 5, 7, 8],
        [0, 1, 3, 4, 6],
        [0, 1, 3, 6, 7],
        [0, 2, 3, 5, 8],
        [0, 2, 5, 6, 8],
        [0, 3, 4, 6, 7],
        [1, 2, 4, 5, 7],
        [1, 2, 4, 7, 8],
        [1, 4, 5, 7, 8],
        [2, 3, 5, 6, 8],
        [0, 1, 3, 5, 7],
        [0, 1, 5, 7, 8],
        [0, 2, 4, 5, 6],
        [0, 2, 4, 6, 7],
        [0, 3, 5, 7, 8],
        [1, 2, 3, 4, 8],
        [1, 2, 3, 6, 8],
        [1, 3, 4, 6, 8],
        [2, 4, 5, 6, 7],
        [0, 1, 4, 5, 6],
        [0, 1, 5, 6, 8],
        [0, 2, 3, 4, 8],
        [0, 2, 4, 7, 8],
        [0, 3, 4, 7, 8],
        [1, 2, 3, 5, 7],
        [1, 2, 3, 6, 7],
        [1, 4, 5, 6, 8],
        [2, 3, 5, 6, 7],
    ];
    build(9, F.iter().map(|t| t.to_vec()).collect())
}

/// Real projective 3-space as the order complex of the face poset of the
/// 4-dimensional cross-polytope boundary modulo the antipodal map (40 vertices).
pub fn rp3() -> SimplicialComplex {
    // A face is a set of signed coordinates (axis, sign) on distinct axes.
    type Face = Vec<(u8, bool)>;
    let mut faces: Vec<Face> = Vec::new();
    for mask in 1u32..16 {
        let axes: Vec<u8> = (0..4).filter(|a| mask >> a & 1 == 1).collect();
        for signs in 0u32..(1 << axes.len()) {
            faces.push(axes.iter().enumerate().map(|(k, &a)| (a, signs >> k & 1 == 1)).collect());
        }
    }
    let negate = |f: &Face| -> Face { f.iter().map(|&(a, s)| (a, !s)).collect() };
    let orbit = |f: &Face| -> Face { std::cmp::min(f.clone(), negate(f)) };
    let reps: BTreeSet<Face> = faces.iter().map(orbit).collect();
    let id: BTreeMap<Face, u32> = reps.into_iter().enumerate().map(|(i, f)| (f, i as u32)).collect();
    let subset = |a: &Face, b: &Face| a.iter().all(|x| b.contains(x));
    let mut facets = BTreeSet::new();
    for f4 in faces.iter().filter(|f| f.len() == 4) {
        for f3 in faces.iter().filter(|f| f.len() == 3 && subset(f, f4)) {
            for f2 in faces.iter().filter(|f| f.len() == 2 && subset(f, f3)) {
                for f1 in faces.iter().filter(|f| f.len() == 1 && subset(f, f2)) {
                    let mut s: Vec<u32> = [f1, f2, f3, f4].iter().map(|f| id[&orbit(f)]).collect();
                    s.sort_unstable();
                    facets.insert(s);
                }
            }
        }
    }
    build(id.len(), facets.into_iter().collect())
}

/// Three-torus: Freudenthal triangulation of the 3×3×3 periodic grid.
pub fn t3() -> SimplicialComplex {
    let v = |p: [u32; 3]| p[0] * 9 + p[1] * 3 + p[2];
    let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let mut facets = BTreeSet::new();
    for base in 0..27u32 {
        let b = [base / 9, base / 3 % 3, base % 3];
        for perm in &perms {
            let mut p = b;
            let mut s = vec![v(p)];
            for &axis in perm {
                p[axis] = (p[axis] + 1) % 3;
                s.push(v(p));
            }
            s.sort_unstable();
            facets.insert(s);
        }
    }
    build(27, facets.into_iter().collect())
}

/// Standard triangulation of the product of two complexes: vertices are pairs
/// ordered lexicographically, maximal simplices are staircase paths through
/// products of facets.
pub fn product(a: &SimplicialComplex, b: &SimplicialComplex) -> SimplicialComplex {
    let nb = b.n_vertices() as u32;
    let mut facets = BTreeSet::new();
    for s in a.facets() {
        for t in b.facets() {
            let (p, q) = (s.len() - 1, t.len() - 1);
            // Lattice paths: choose which of the p+q steps move in the first factor.
            for mask in 0u64..(1 << (p + q)) {
                if mask.count_ones() as usize != p {
                    continue;
                }
                let (mut i, mut j) = (0, 0);
                let mut simplex = vec![s[0] * nb + t[0]];
                for step in 0..p + q {
                    if mask >> step & 1 == 1 {
                        i += 1;
                    } else {
                        j += 1;
                    }
                    simplex.push(s[i] * nb + t[j]);
                }
                facets.insert(simplex);
            }
        }
    }
    let all: Vec<Vec<u32>> = facets.into_iter().collect();
    // Products of non-pure complexes can produce non-maximal staircases.
    let maximal: Vec<Vec<u32>> = all
        .iter()
        .filter(|f| !all.iter().any(|g| g.len() > f.len() && f.iter().all(|x| g.contains(x))))
        .cloned()
        .collect();
    build(a.n_vertices() * b.n_vertices(), maximal)
}

/// Random complex on `n` vertices generated by `k` random simplices of dimension
/// between 1 and `dim`; non-maximal ones are discarded.
pub fn random_complex<R: Rng>(rng: &mut R, n: usize, dim: usize, k: usize) -> SimplicialComplex {
    assert!(dim < n, "dimension must be below the vertex count");
    let verts: Vec<u32> = (0..n as u32).collect();
    let mut cand = BTreeSet::new();
    for _ in 0..k {
        let size = rng.gen_range(2..=dim + 1);
        let mut s: Vec<u32> = verts.choose_multiple(rng, size).copied().collect();
        s.sort_unstable();
        cand.insert(s);
    }
    // Always reach the requested dimension.
    let mut top: Vec<u32> = verts.choose_multiple(rng, dim + 1).copied().collect();
    top.sort_unstable();
    cand.insert(top);
    let cand: Vec<Vec<u32>> = cand.into_iter().collect();
    let maximal: Vec<Vec<u32>> = cand
        .iter()
        .filter(|f| !cand.iter().any(|g| g.len() > f.len() && f.iter().all(|x| g.contains(x))))
        .cloned()
        .collect();
    build(n, maximal)
}

/// Random subcomplex obtained by deleting each facet with probability `p`
/// (at least one facet is kept).
pub fn random_facet_deletion<R: Rng>(rng: &mut R, base: &SimplicialComplex, p: f64) -> SimplicialComplex {
    let mut kept: Vec<Vec<u32>> = base.facets().iter().filter(|_| !rng.gen_bool(p)).cloned().collect();
    if kept.is_empty() {
        kept.push(base.facets()[0].clone());
    }
    build(base.n_vertices(), kept)
}

/// A uniformly random vertex order.
pub fn random_order<R: Rng>(rng: &mut R, n: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    order
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f_vectors() {
        assert_eq!(sphere(4).f_vector(), vec![6, 15, 20, 15, 6]);
        assert_eq!(rp2().f_vector(), vec![6, 15, 10]);
        assert_eq!(torus().f_vector(), vec![7, 21, 14]);
        assert_eq!(cp2().f_vector(), vec![9, 36, 84, 90, 36]);
        assert_eq!(rp3().f_vector(), vec![40, 232, 384, 192]);
        assert_eq!(t3().f_vector()[3], 162);
    }

    #[test]
    fn euler_characteristics() {
        assert_eq!(rp2().euler_characteristic(), 1);
        assert_eq!(torus().euler_characteristic(), 0);
        assert_eq!(cp2().euler_characteristic(), 3);
        assert_eq!(rp3().euler_characteristic(), 0);
        assert_eq!(t3().euler_characteristic(), 0);
        let s1 = sphere(1);
        assert_eq!(product(&rp2(), &s1).euler_characteristic(), 0);
    }

    #[test]
    fn closed_pseudomanifolds() {
        for k in [sphere(4), rp2(), torus(), cp2(), rp3(), t3(), product(&rp2(), &sphere(1))] {
            assert!(k.is_closed_pseudomanifold(), "{k:?}");
        }
    }
}
