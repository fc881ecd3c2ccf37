//! Finite abstract simplicial complexes over totally ordered vertices.

use crate::snf::ZMatrix;
use crate::Error;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

pub const COMPLEX_SCHEMA_VERSION: u32 = 1;

/// A vertex label as written in input documents.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum VertexId {
    Num(i64),
    Name(String),
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexId::Num(n) => write!(f, "{n}"),
            VertexId::Name(s) => f.write_str(s),
        }
    }
}

impl From<i64> for VertexId {
    fn from(n: i64) -> Self {
        VertexId::Num(n)
    }
}

/// A simplex as a strictly increasing list of vertex positions.
pub type Simplex = Vec<u32>;

struct Inner {
    labels: Vec<VertexId>,
    facets: Vec<Simplex>,
    /// `simplices[d]` lists the d-simplices in lexicographic order.
    simplices: Vec<Vec<Simplex>>,
    index: Vec<HashMap<Simplex, usize>>,
}

/// Immutable simplicial complex; cloning is cheap.
#[derive(Clone)]
pub struct SimplicialComplex {
    inner: Arc<Inner>,
}

impl PartialEq for SimplicialComplex {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.labels == other.inner.labels && self.inner.facets == other.inner.facets)
    }
}

impl fmt::Debug for SimplicialComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SimplicialComplex(dim {}, f-vector {:?})", self.dimension(), self.f_vector())
    }
}

#[derive(Serialize, Deserialize)]
struct ComplexDoc {
    #[serde(default = "default_schema")]
    schema_version: u32,
    vertices: Vec<VertexId>,
    facets: Vec<Vec<VertexId>>,
}

fn default_schema() -> u32 {
    COMPLEX_SCHEMA_VERSION
}

impl SimplicialComplex {
    /// Complex on vertices `0..n` with the given facets (vertex positions).
    pub fn from_facets(n_vertices: usize, facets: &[Vec<u32>]) -> Result<Self, Error> {
        let labels = (0..n_vertices as i64).map(VertexId::Num).collect();
        Self::build(labels, facets.to_vec())
    }

    /// Complex with labelled vertices; facets refer to labels.
    pub fn from_labelled(labels: Vec<VertexId>, facets: &[Vec<VertexId>]) -> Result<Self, Error> {
        let pos: HashMap<&VertexId, u32> = labels.iter().enumerate().map(|(i, v)| (v, i as u32)).collect();
        if pos.len() != labels.len() {
            return Err(Error::InvalidComplex("duplicate vertex label".into()));
        }
        let mut out = Vec::with_capacity(facets.len());
        for (k, f) in facets.iter().enumerate() {
            let mut s = Vec::with_capacity(f.len());
            for v in f {
                let p = pos
                    .get(v)
                    .ok_or_else(|| Error::InvalidComplex(format!("facet {k} uses unknown vertex {v}")))?;
                s.push(*p);
            }
            out.push(s);
        }
        Self::build(labels, out)
    }

    fn build(labels: Vec<VertexId>, facets: Vec<Simplex>) -> Result<Self, Error> {
        let n = labels.len() as u32;
        let mut canon: Vec<Simplex> = Vec::with_capacity(facets.len());
        for (k, mut f) in facets.into_iter().enumerate() {
            if f.is_empty() {
                return Err(Error::InvalidComplex(format!("facet {k} is empty")));
            }
            if let Some(v) = f.iter().find(|&&v| v >= n) {
                return Err(Error::InvalidComplex(format!("facet {k} uses vertex position {v} out of range")));
            }
            f.sort_unstable();
            if f.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidComplex(format!("facet {k} repeats a vertex")));
            }
            canon.push(f);
        }
        let set: BTreeSet<Simplex> = canon.iter().cloned().collect();
        if set.len() != canon.len() {
            return Err(Error::InvalidComplex("duplicate facet".into()));
        }
        for (k, f) in canon.iter().enumerate() {
            if canon.iter().any(|g| g.len() > f.len() && is_subset(f, g)) {
                return Err(Error::InvalidComplex(format!("facet {k} is contained in another facet")));
            }
        }
        let dim = canon.iter().map(Vec::len).max().unwrap_or(0);
        let mut levels: Vec<BTreeSet<Simplex>> = vec![BTreeSet::new(); dim];
        for f in &canon {
            for mask in 1u64..(1u64 << f.len()) {
                let s: Simplex = (0..f.len()).filter(|&i| mask >> i & 1 == 1).map(|i| f[i]).collect();
                levels[s.len() - 1].insert(s);
            }
        }
        let simplices: Vec<Vec<Simplex>> = levels.into_iter().map(|l| l.into_iter().collect()).collect();
        let index = simplices
            .iter()
            .map(|l| l.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect())
            .collect();
        canon.sort();
        Ok(SimplicialComplex { inner: Arc::new(Inner { labels, facets: canon, simplices, index }) })
    }

    pub fn from_json(text: &str) -> Result<Self, Error> {
        let doc: ComplexDoc = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if doc.schema_version != COMPLEX_SCHEMA_VERSION {
            return Err(Error::Parse(format!("unsupported complex schema_version {}", doc.schema_version)));
        }
        Self::from_labelled(doc.vertices, &doc.facets)
    }

    pub fn to_json(&self) -> String {
        let doc = ComplexDoc {
            schema_version: COMPLEX_SCHEMA_VERSION,
            vertices: self.inner.labels.clone(),
            facets: self.inner.facets.iter().map(|f| f.iter().map(|&v| self.inner.labels[v as usize].clone()).collect()).collect(),
        };
        serde_json::to_string_pretty(&doc).expect("complex serializes")
    }

    pub fn n_vertices(&self) -> usize {
        self.inner.labels.len()
    }

    pub fn labels(&self) -> &[VertexId] {
        &self.inner.labels
    }

    pub fn facets(&self) -> &[Simplex] {
        &self.inner.facets
    }

    /// Largest simplex dimension; an empty complex reports 0.
    pub fn dimension(&self) -> usize {
        self.inner.simplices.len().saturating_sub(1)
    }

    pub fn f_vector(&self) -> Vec<usize> {
        self.inner.simplices.iter().map(Vec::len).collect()
    }

    pub fn simplices(&self, d: usize) -> &[Simplex] {
        self.inner.simplices.get(d).map_or(&[], Vec::as_slice)
    }

    pub fn count(&self, d: usize) -> usize {
        self.simplices(d).len()
    }

    pub fn index_of(&self, s: &[u32]) -> Option<usize> {
        if s.is_empty() {
            return None;
        }
        self.inner.index.get(s.len() - 1)?.get(s).copied()
    }

    /// Matrix of δ: Cᵈ → Cᵈ⁺¹ (rows: (d+1)-simplices, columns: d-simplices).
    pub fn coboundary_matrix(&self, d: usize) -> ZMatrix {
        let mut m = ZMatrix::zeros(self.count(d + 1), self.count(d));
        for (r, s) in self.simplices(d + 1).iter().enumerate() {
            for k in 0..s.len() {
                let face: Simplex = s.iter().enumerate().filter(|&(i, _)| i != k).map(|(_, &v)| v).collect();
                let c = self.index_of(&face).expect("faces of simplices are simplices");
                m.set(r, c, crate::int::int(if k % 2 == 0 { 1 } else { -1 }));
            }
        }
        m
    }

    /// The same complex with vertices listed in a different order: the new
    /// vertex at position `i` is the old vertex `order[i]`.
    pub fn reordered(&self, order: &[usize]) -> Result<Self, Error> {
        let n = self.n_vertices();
        let mut seen = vec![false; n];
        if order.len() != n || order.iter().any(|&o| o >= n || std::mem::replace(&mut seen[o], true)) {
            return Err(Error::InvalidComplex("reordering is not a permutation".into()));
        }
        let labels: Vec<VertexId> = order.iter().map(|&o| self.inner.labels[o].clone()).collect();
        let facets: Vec<Vec<VertexId>> =
            self.inner.facets.iter().map(|f| f.iter().map(|&v| self.inner.labels[v as usize].clone()).collect()).collect();
        Self::from_labelled(labels, &facets)
    }

    /// Positions in `self` of the vertices of `other`, matched by label.
    pub fn vertex_map_to(&self, other: &SimplicialComplex) -> Result<Vec<u32>, Error> {
        let pos: HashMap<&VertexId, u32> = other.labels().iter().enumerate().map(|(i, v)| (v, i as u32)).collect();
        self.labels()
            .iter()
            .map(|l| pos.get(l).copied().ok_or_else(|| Error::InvalidComplex(format!("vertex {l} missing in target"))))
            .collect()
    }

    /// Euler characteristic.
    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector().iter().enumerate().map(|(d, &c)| if d % 2 == 0 { c as i64 } else { -(c as i64) }).sum()
    }

    /// True if every (dim−1)-simplex lies in exactly two facets and all facets have full dimension.
    pub fn is_closed_pseudomanifold(&self) -> bool {
        let d = self.dimension();
        if self.facets().iter().any(|f| f.len() != d + 1) || d == 0 {
            return false;
        }
        let mut count = vec![0u32; self.count(d - 1)];
        for s in self.simplices(d) {
            for k in 0..s.len() {
                let face: Simplex = s.iter().enumerate().filter(|&(i, _)| i != k).map(|(_, &v)| v).collect();
                count[self.index_of(&face).unwrap()] += 1;
            }
        }
        count.iter().all(|&c| c == 2)
    }
}

fn is_subset(a: &[u32], b: &[u32]) -> bool {
    let mut j = 0;
    for &x in a {
        while j < b.len() && b[j] < x {
            j += 1;
        }
        if j == b.len() || b[j] != x {
            return false;
        }
        j += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn faces_are_generated() {
        let k = SimplicialComplex::from_facets(4, &[vec![0, 1, 2], vec![2, 3]]).unwrap();
        assert_eq!(k.f_vector(), vec![4, 4, 1]);
        assert_eq!(k.index_of(&[1, 2]), Some(2));
        assert_eq!(k.euler_characteristic(), 1);
    }

    #[test]
    fn rejects_bad_facets() {
        assert!(SimplicialComplex::from_facets(3, &[vec![0, 0, 1]]).is_err());
        assert!(SimplicialComplex::from_facets(3, &[vec![0, 1, 2], vec![0, 1]]).is_err());
        assert!(SimplicialComplex::from_facets(3, &[vec![0, 1], vec![1, 0]]).is_err());
        assert!(SimplicialComplex::from_facets(2, &[vec![0, 5]]).is_err());
    }

    #[test]
    fn coboundary_squares_to_zero() {
        let k = SimplicialComplex::from_facets(5, &[vec![0, 1, 2, 3], vec![1, 2, 3, 4]]).unwrap();
        for d in 0..2 {
            assert!(k.coboundary_matrix(d + 1).mul(&k.coboundary_matrix(d)).is_zero());
        }
    }

    #[test]
    fn json_round_trip_with_names() {
        let text = r#"{"schema_version":1,"vertices":["a","b","c"],"facets":[["c","a"],["b","c"]]}"#;
        let k = SimplicialComplex::from_json(text).unwrap();
        assert_eq!(k.facets(), &[vec![0, 2], vec![1, 2]]);
        let again = SimplicialComplex::from_json(&k.to_json()).unwrap();
        assert_eq!(k, again);
        assert!(SimplicialComplex::from_json(r#"{"vertices":["a"],"facets":[["a","z"]]}"#).is_err());
    }
}
