//! Models whose mod-2 cohomology is a truncated polynomial algebra.
//!
//! The mod-2 ring and the total square of each generator are declared. The
//! integral structure is derived: without Sq¹ the ring is torsion-free with the
//! same monomial basis (Koszul signs for odd generators); otherwise all torsion
//! is taken to be of order 2 and read off from Sq¹ (Bockstein spectral sequence
//! collapsing after the first page).

use crate::model::{CohomologyModel, Degree, Orientation, ZVec};
use crate::BuildError;
use ninefold_simplicial::f2::{BitVec, Echelon, F2Matrix};
use ninefold_simplicial::int::Int;
use std::collections::{BTreeMap, BTreeSet, HashMap};

type Monomial = Vec<u32>;
type Poly = BTreeSet<Monomial>;

#[derive(Clone, Debug)]
struct Generator {
    name: String,
    degree: usize,
    height: u32,
}

#[derive(Clone, Debug)]
pub struct PolyBuilder {
    dimension: usize,
    gens: Vec<Generator>,
    total_sq: HashMap<String, Vec<String>>,
}

impl PolyBuilder {
    pub fn new(dimension: usize) -> Self {
        PolyBuilder { dimension, gens: vec![], total_sq: HashMap::new() }
    }

    /// Adds a generator with `x^height = 0`.
    pub fn generator(mut self, name: &str, degree: usize, height: u32) -> Self {
        self.gens.push(Generator { name: name.into(), degree, height });
        self
    }

    /// Total square of a generator as a list of monomials such as `"c^2*d"`.
    /// Defaults to `x + x²`.
    pub fn total_sq(mut self, name: &str, terms: &[&str]) -> Self {
        self.total_sq.insert(name.into(), terms.iter().map(|s| s.to_string()).collect());
        self
    }

    fn parse_monomial(&self, s: &str) -> Result<Monomial, BuildError> {
        let mut m = vec![0u32; self.gens.len()];
        let s = s.trim();
        if s == "1" {
            return Ok(m);
        }
        for factor in s.split('*') {
            let (name, exp) = match factor.split_once('^') {
                Some((n, e)) => (n.trim(), e.trim().parse::<u32>().map_err(|_| BuildError::Parse(format!("bad exponent in {s:?}")))?),
                None => (factor.trim(), 1),
            };
            let g = self
                .gens
                .iter()
                .position(|g| g.name == name)
                .ok_or_else(|| BuildError::Parse(format!("unknown generator {name:?} in {s:?}")))?;
            m[g] += exp;
        }
        Ok(m)
    }

    fn mono_degree(&self, m: &Monomial) -> usize {
        m.iter().zip(&self.gens).map(|(&e, g)| e as usize * g.degree).sum()
    }

    fn alive(&self, m: &Monomial) -> bool {
        m.iter().zip(&self.gens).all(|(&e, g)| e < g.height)
    }

    fn mono_name(&self, m: &Monomial) -> String {
        let parts: Vec<String> = m
            .iter()
            .zip(&self.gens)
            .filter(|(&e, _)| e > 0)
            .map(|(&e, g)| if e == 1 { g.name.clone() } else { format!("{}^{e}", g.name) })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }

    fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        let mut out = Poly::new();
        for x in a {
            for y in b {
                let m: Monomial = x.iter().zip(y).map(|(p, q)| p + q).collect();
                if self.alive(&m) && self.mono_degree(&m) <= self.dimension && !out.insert(m.clone()) {
                    out.remove(&m);
                }
            }
        }
        out
    }

    /// Sign of x^e · x^f relative to the normal-ordered x^(e+f).
    fn koszul_sign(&self, e: &Monomial, f: &Monomial) -> i64 {
        let mut odd = 0u64;
        for (g, &fg) in f.iter().enumerate() {
            for (h, &eh) in e.iter().enumerate().skip(g + 1) {
                odd += (fg as u64 * self.gens[g].degree as u64) * (eh as u64 * self.gens[h].degree as u64);
            }
        }
        if odd % 2 == 1 {
            -1
        } else {
            1
        }
    }

    pub fn build(&self) -> Result<CohomologyModel, BuildError> {
        let n = self.dimension;
        if self.gens.iter().any(|g| g.degree == 0 || g.height < 2) {
            return Err(BuildError::Invalid("generators need positive degree and height ≥ 2".into()));
        }
        // Monomial basis per degree, higher powers of earlier generators first.
        let mut basis: Vec<Vec<Monomial>> = vec![vec![]; n + 1];
        let mut stack = vec![vec![0u32; self.gens.len()]];
        let mut seen = BTreeSet::new();
        while let Some(m) = stack.pop() {
            if !seen.insert(m.clone()) {
                continue;
            }
            basis[self.mono_degree(&m)].push(m.clone());
            for g in 0..self.gens.len() {
                let mut m2 = m.clone();
                m2[g] += 1;
                if self.alive(&m2) && self.mono_degree(&m2) <= n {
                    stack.push(m2);
                }
            }
        }
        for b in basis.iter_mut() {
            b.sort_by(|x, y| y.cmp(x));
        }
        if basis[n].len() != 1 {
            return Err(BuildError::Invalid(format!("top degree has dimension {}", basis[n].len())));
        }
        let index: Vec<HashMap<Monomial, usize>> =
            basis.iter().map(|b| b.iter().enumerate().map(|(k, m)| (m.clone(), k)).collect()).collect();
        let vec_of = |poly: &Poly, d: usize| -> BitVec {
            BitVec::from_indices(basis[d].len(), poly.iter().filter(|m| self.mono_degree(m) == d).map(|m| index[d][m]))
        };

        // Total squares of generators, then of monomials by multiplicativity.
        let mut gen_sq: Vec<Poly> = Vec::new();
        for (g, gen) in self.gens.iter().enumerate() {
            let mut p = Poly::new();
            match self.total_sq.get(&gen.name) {
                Some(terms) => {
                    for t in terms {
                        let m = self.parse_monomial(t)?;
                        if self.alive(&m) && self.mono_degree(&m) <= n && !p.insert(m.clone()) {
                            p.remove(&m);
                        }
                    }
                }
                None => {
                    let mut x = vec![0u32; self.gens.len()];
                    x[g] = 1;
                    p.insert(x.clone());
                    x[g] = 2;
                    if self.alive(&x) && self.mono_degree(&x) <= n {
                        p.insert(x);
                    }
                }
            }
            gen_sq.push(p);
        }
        let one: Poly = [vec![0u32; self.gens.len()]].into_iter().collect();
        let total_sq = |m: &Monomial| -> Poly {
            let mut acc = one.clone();
            for (g, &e) in m.iter().enumerate() {
                for _ in 0..e {
                    acc = self.mul(&acc, &gen_sq[g]);
                }
            }
            acc
        };

        let mut sq = BTreeMap::new();
        for i in 0..=n {
            let totals: Vec<Poly> = basis[i].iter().map(total_sq).collect();
            for k in 0..=n - i {
                sq.insert((k, i), totals.iter().map(|p| vec_of(p, i + k)).collect::<Vec<_>>());
            }
        }
        let mono_product = |x: &Monomial, y: &Monomial| -> Option<Monomial> {
            let m: Monomial = x.iter().zip(y).map(|(p, q)| p + q).collect();
            self.alive(&m).then_some(m)
        };
        let mut cup2 = BTreeMap::new();
        for i in 0..=n {
            for j in i..=n - i {
                let table: Vec<Vec<BitVec>> = basis[i]
                    .iter()
                    .map(|x| {
                        basis[j]
                            .iter()
                            .map(|y| match mono_product(x, y) {
                                Some(m) => BitVec::unit(basis[i + j].len(), index[i + j][&m]),
                                None => BitVec::zeros(basis[i + j].len()),
                            })
                            .collect()
                    })
                    .collect();
                cup2.insert((i, j), table);
            }
        }
        let names: Vec<Vec<String>> = basis.iter().map(|b| b.iter().map(|m| self.mono_name(m)).collect()).collect();

        let mut model = CohomologyModel {
            dimension: n,
            graded: vec![],
            rho2: vec![],
            beta: vec![],
            sq,
            cup2,
            cup_z: BTreeMap::new(),
            orientation: None,
        };
        let sq1_zero = (0..n).all(|i| model.sq[&(1, i)].iter().all(BitVec::is_zero));
        if sq1_zero {
            self.fill_torsion_free(&mut model, &basis, &index, names)?;
        } else {
            fill_from_sq1(&mut model, names)?;
        }
        Ok(model)
    }

    fn fill_torsion_free(
        &self,
        model: &mut CohomologyModel,
        basis: &[Vec<Monomial>],
        index: &[HashMap<Monomial, usize>],
        names: Vec<Vec<String>>,
    ) -> Result<(), BuildError> {
        let n = self.dimension;
        if let Some(g) = self.gens.iter().find(|g| g.degree % 2 == 1 && g.height > 2) {
            return Err(BuildError::Invalid(format!("odd generator {} must square to zero integrally", g.name)));
        }
        for (i, nm) in names.into_iter().enumerate() {
            let d = nm.len();
            model.graded.push(Degree { z_rank: d, z_torsion: vec![], f2_basis: nm });
            model.rho2.push((0..d).map(|b| BitVec::unit(d, b)).collect());
            let target = if i < n { basis[i + 1].len() } else { 0 };
            model.beta.push(vec![vec![Int::from(0u8); target]; d]);
        }
        for i in 0..=n {
            for j in i..=n - i {
                let t = i + j;
                let table: Vec<Vec<ZVec>> = basis[i]
                    .iter()
                    .map(|x| {
                        basis[j]
                            .iter()
                            .map(|y| {
                                let mut v = vec![Int::from(0u8); basis[t].len()];
                                let m: Monomial = x.iter().zip(y).map(|(p, q)| p + q).collect();
                                if self.alive(&m) {
                                    v[index[t][&m]] = Int::from(self.koszul_sign(x, y));
                                }
                                v
                            })
                            .collect()
                    })
                    .collect();
                model.cup_z.insert((i, j), table);
            }
        }
        model.orientation = Some(Orientation { top_sign: 1 });
        Ok(())
    }
}

/// Integral structure from Sq¹ under the assumption that all torsion has order 2.
/// Free generators reduce to a complement of im Sq¹ in ker Sq¹; torsion generators
/// are β(y) for chosen preimages y. Products of free generators are taken as the
/// 0/1 lift of their mod-2 product; products with torsion use β(y)·z = β(y·ρ₂z).
pub(crate) fn fill_from_sq1(model: &mut CohomologyModel, names: Vec<Vec<String>>) -> Result<(), BuildError> {
    let n = model.dimension;
    let dims: Vec<usize> = names.iter().map(Vec::len).collect();
    let sq1 = |i: usize, x: &BitVec| -> BitVec {
        if i >= n {
            return BitVec::zeros(0);
        }
        crate::model::apply_cols(dims[i + 1], &model.sq[&(1, i)], x)
    };
    for i in 0..n.saturating_sub(1) {
        for b in 0..dims[i] {
            if !sq1(i + 1, &sq1(i, &BitVec::unit(dims[i], b))).is_zero() {
                return Err(BuildError::Invalid(format!("Sq¹Sq¹ ≠ 0 in degree {i}")));
            }
        }
    }
    // Torsion generators: (preimage y in degree i-1, image b = Sq¹y in degree i).
    let mut torsion: Vec<Vec<(BitVec, BitVec)>> = vec![vec![]; n + 1];
    let mut free: Vec<Vec<BitVec>> = vec![vec![]; n + 1];
    for i in 0..=n {
        let mut ech = Echelon::new(dims[i]);
        if i > 0 {
            for b in 0..dims[i - 1] {
                let y = BitVec::unit(dims[i - 1], b);
                let img = sq1(i - 1, &y);
                if ech.insert(&img) {
                    torsion[i].push((y, img));
                }
            }
        }
        let kernel: Vec<BitVec> = if i < n {
            let units = (0..dims[i]).map(|b| BitVec::unit(dims[i], b));
            let mono_kernel: Vec<BitVec> = units.filter(|u| sq1(i, u).is_zero()).collect();
            let m = F2Matrix::from_columns(dims[i + 1], (0..dims[i]).map(|b| sq1(i, &BitVec::unit(dims[i], b))).collect());
            mono_kernel.into_iter().chain(m.kernel()).collect()
        } else {
            (0..dims[i]).map(|b| BitVec::unit(dims[i], b)).collect()
        };
        for k in kernel {
            if ech.insert(&k) {
                free[i].push(k);
            }
        }
    }
    let two = Int::from(2u8);
    for (i, nm) in names.into_iter().enumerate() {
        model.graded.push(Degree { z_rank: free[i].len(), z_torsion: vec![two.clone(); torsion[i].len()], f2_basis: nm });
        model.rho2.push(free[i].iter().cloned().chain(torsion[i].iter().map(|(_, b)| b.clone())).collect());
    }
    // Coordinates of a class in ker Sq¹ relative to (free, torsion images).
    let coords = |t: usize, x: &BitVec| -> Result<ZVec, BuildError> {
        let cols: Vec<BitVec> = free[t].iter().cloned().chain(torsion[t].iter().map(|(_, b)| b.clone())).collect();
        let sol = F2Matrix::from_columns(dims[t], cols)
            .solve(x)
            .ok_or_else(|| BuildError::Invalid(format!("class in degree {t} has no integral lift")))?;
        Ok(sol.to_bools().into_iter().map(|b| Int::from(b as u8)).collect())
    };
    let beta_coords = |t: usize, x: &BitVec| -> Result<ZVec, BuildError> {
        // Sq¹x lies in the span of the torsion images; free coordinates vanish.
        let v = coords(t, x)?;
        if v[..free[t].len()].iter().any(|c| c != &Int::from(0u8)) {
            return Err(BuildError::Invalid(format!("Sq¹ image in degree {t} meets the free part")));
        }
        Ok(v)
    };
    for i in 0..=n {
        let mut col = Vec::new();
        for b in 0..dims[i] {
            col.push(if i < n { beta_coords(i + 1, &sq1(i, &BitVec::unit(dims[i], b)))? } else { vec![] });
        }
        model.beta.push(col);
    }
    for i in 0..=n {
        for j in i..=n - i {
            let t = i + j;
            let gens_i = model.graded[i].z_gens();
            let gens_j = model.graded[j].z_gens();
            let mut table = vec![vec![Vec::new(); gens_j]; gens_i];
            for (p, row) in table.iter_mut().enumerate() {
                for (q, entry) in row.iter_mut().enumerate() {
                    let fp = p < free[i].len();
                    let fq = q < free[j].len();
                    *entry = if fp && fq {
                        coords(t, &model.cup2(i, &free[i][p], j, &free[j][q]))?
                    } else if !fp {
                        let (y, _) = &torsion[i][p - free[i].len()];
                        beta_coords(t, &sq1(t - 1, &model.cup2(i - 1, y, j, &model.rho2[j][q])))?
                    } else {
                        let (y, _) = &torsion[j][q - free[j].len()];
                        beta_coords(t, &sq1(t - 1, &model.cup2(j - 1, y, i, &model.rho2[i][p])))?
                    };
                }
            }
            model.cup_z.insert((i, j), table);
        }
    }
    let top = &model.graded[n];
    if top.z_rank == 1 && top.z_torsion.is_empty() {
        model.orientation = Some(Orientation { top_sign: 1 });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cp4_ranks_and_squares() {
        let m = PolyBuilder::new(8).generator("a", 2, 5).build().unwrap();
        let dims: Vec<usize> = (0..=8).map(|i| m.f2_dim(i)).collect();
        assert_eq!(dims, vec![1, 0, 1, 0, 1, 0, 1, 0, 1]);
        // Sq²a³ = 3a⁴ = a⁴.
        let a3 = m.f2_unit(6, 0);
        assert_eq!(m.sq(2, 6, &a3), m.f2_unit(8, 0));
        assert!(m.orientation.is_some());
    }

    #[test]
    fn rp_torsion_from_sq1() {
        let m = PolyBuilder::new(5).generator("x", 1, 6).build().unwrap();
        let ranks: Vec<usize> = (0..=5).map(|i| m.graded[i].z_rank).collect();
        let tors: Vec<usize> = (0..=5).map(|i| m.graded[i].z_torsion.len()).collect();
        assert_eq!(ranks, vec![1, 0, 0, 0, 0, 1]);
        assert_eq!(tors, vec![0, 0, 1, 0, 1, 0]);
        assert!(m.orientation.is_some());
        // β(x) is the order-2 generator of H².
        assert_eq!(m.beta(1, &m.f2_unit(1, 0)), vec![Int::from(1u8)]);
    }

    #[test]
    fn odd_generators_anticommute() {
        let m = PolyBuilder::new(2).generator("s", 1, 2).generator("t", 1, 2).build().unwrap();
        let s = m.z_unit(1, 0);
        let t = m.z_unit(1, 1);
        let st = m.cup_z(1, &s, 1, &t).unwrap();
        let ts = m.cup_z(1, &t, 1, &s).unwrap();
        assert_eq!(st, ts.iter().map(|x| -x).collect::<Vec<_>>());
    }
}
