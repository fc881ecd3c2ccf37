//! JSON form of manifold models.
//!
//! Products are listed sparsely (zero products omitted); integral coordinates
//! are reduced modulo generator orders. Emitting a parsed document yields the
//! normalized form, which parses back to the same model.

use crate::model::{CohomologyModel, Degree, ManifoldModel, OmegaDatum, Orientation, ZVec};
use crate::BuildError;
use ninefold_simplicial::f2::BitVec;
use ninefold_simplicial::int::serde_int;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DegreeDoc {
    degree: usize,
    z_rank: usize,
    #[serde(with = "serde_int::vec", default)]
    z_torsion: ZVec,
    f2_dim: usize,
    f2_basis: Vec<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Rho2Doc {
    degree: usize,
    columns: Vec<BitVec>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BetaDoc {
    degree: usize,
    #[serde(with = "serde_int::mat")]
    columns: Vec<ZVec>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SqDoc {
    k: usize,
    degree: usize,
    columns: Vec<BitVec>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Cup2Entry {
    left: usize,
    right: usize,
    value: BitVec,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Cup2Doc {
    degrees: (usize, usize),
    products: Vec<Cup2Entry>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CupZEntry {
    left: usize,
    right: usize,
    #[serde(with = "serde_int::vec")]
    value: ZVec,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CupZDoc {
    degrees: (usize, usize),
    products: Vec<CupZEntry>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct OrientationDoc {
    top_generator_sign: i64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct OmegaDoc {
    representative: BitVec,
    determined: bool,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelDoc {
    schema_version: u32,
    label: String,
    dimension: usize,
    graded: Vec<DegreeDoc>,
    rho2: Vec<Rho2Doc>,
    beta: Vec<BetaDoc>,
    sq: Vec<SqDoc>,
    cup2: Vec<Cup2Doc>,
    #[serde(rename = "cupZ")]
    cup_z: Vec<CupZDoc>,
    orientation: Option<OrientationDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    phi_hat: Option<BitVec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    omega_pc: Option<OmegaDoc>,
}

fn to_doc(m: &ManifoldModel) -> ModelDoc {
    let h = &m.cohomology;
    let n = h.dimension;
    let graded = h
        .graded
        .iter()
        .enumerate()
        .map(|(i, d)| DegreeDoc { degree: i, z_rank: d.z_rank, z_torsion: d.z_torsion.clone(), f2_dim: d.f2_dim(), f2_basis: d.f2_basis.clone() })
        .collect();
    let rho2 = h.rho2.iter().enumerate().map(|(i, c)| Rho2Doc { degree: i, columns: c.clone() }).collect();
    let beta = h
        .beta
        .iter()
        .enumerate()
        .map(|(i, c)| BetaDoc {
            degree: i,
            columns: if i < n { c.iter().map(|v| h.z_normalize(i + 1, v.clone())).collect() } else { c.clone() },
        })
        .collect();
    let sq = h.sq.iter().map(|(&(k, i), c)| SqDoc { k, degree: i, columns: c.clone() }).collect();
    let cup2 = h
        .cup2
        .iter()
        .map(|(&(i, j), t)| Cup2Doc {
            degrees: (i, j),
            products: t
                .iter()
                .enumerate()
                .flat_map(|(p, row)| row.iter().enumerate().map(move |(q, v)| (p, q, v)))
                .filter(|(_, _, v)| !v.is_zero())
                .map(|(p, q, v)| Cup2Entry { left: p, right: q, value: v.clone() })
                .collect(),
        })
        .collect();
    let cup_z = h
        .cup_z
        .iter()
        .map(|(&(i, j), t)| CupZDoc {
            degrees: (i, j),
            products: t
                .iter()
                .enumerate()
                .flat_map(|(p, row)| row.iter().enumerate().map(move |(q, v)| (p, q, v)))
                .map(|(p, q, v)| (p, q, h.z_normalize(i + j, v.clone())))
                .filter(|(_, _, v)| !CohomologyModel::z_is_zero(v))
                .map(|(p, q, v)| CupZEntry { left: p, right: q, value: v })
                .collect(),
        })
        .collect();
    ModelDoc {
        schema_version: SCHEMA_VERSION,
        label: m.label.clone(),
        dimension: n,
        graded,
        rho2,
        beta,
        sq,
        cup2,
        cup_z,
        orientation: h.orientation.map(|o| OrientationDoc { top_generator_sign: o.top_sign }),
        phi_hat: m.phi_hat.clone(),
        omega_pc: m.omega_pc.as_ref().map(|o| OmegaDoc { representative: o.representative.clone(), determined: o.determined }),
    }
}

fn from_doc(doc: ModelDoc) -> Result<ManifoldModel, BuildError> {
    let err = |s: String| BuildError::Parse(s);
    if doc.schema_version != SCHEMA_VERSION {
        return Err(err(format!("schema_version: expected {SCHEMA_VERSION}, found {}", doc.schema_version)));
    }
    let n = doc.dimension;
    if doc.graded.len() != n + 1 {
        return Err(err(format!("graded: expected {} degrees, found {}", n + 1, doc.graded.len())));
    }
    let mut graded = Vec::new();
    for (i, d) in doc.graded.into_iter().enumerate() {
        if d.degree != i {
            return Err(err(format!("graded[{i}].degree: expected {i}, found {}", d.degree)));
        }
        if d.f2_dim != d.f2_basis.len() {
            return Err(err(format!("graded[{i}].f2_dim: {} but {} basis names", d.f2_dim, d.f2_basis.len())));
        }
        graded.push(Degree { z_rank: d.z_rank, z_torsion: d.z_torsion, f2_basis: d.f2_basis });
    }
    let f2_dim = |i: usize| graded.get(i).map_or(0, |d| d.f2_basis.len());
    let z_gens = |i: usize| graded.get(i).map_or(0, Degree::z_gens);

    let mut rho2 = vec![None; n + 1];
    for r in doc.rho2 {
        let slot = rho2.get_mut(r.degree).ok_or_else(|| err(format!("rho2: degree {} out of range", r.degree)))?;
        if slot.replace(r.columns).is_some() {
            return Err(err(format!("rho2: degree {} repeated", r.degree)));
        }
    }
    let rho2: Vec<Vec<BitVec>> =
        rho2.into_iter().enumerate().map(|(i, c)| c.ok_or_else(|| err(format!("rho2: degree {i} missing")))).collect::<Result<_, _>>()?;
    let mut beta = vec![None; n + 1];
    for b in doc.beta {
        let slot = beta.get_mut(b.degree).ok_or_else(|| err(format!("beta: degree {} out of range", b.degree)))?;
        if slot.replace(b.columns).is_some() {
            return Err(err(format!("beta: degree {} repeated", b.degree)));
        }
    }
    let beta: Vec<Vec<ZVec>> =
        beta.into_iter().enumerate().map(|(i, c)| c.ok_or_else(|| err(format!("beta: degree {i} missing")))).collect::<Result<_, _>>()?;
    let mut sq = BTreeMap::new();
    for s in doc.sq {
        if sq.insert((s.k, s.degree), s.columns).is_some() {
            return Err(err(format!("sq: (k={}, degree={}) repeated", s.k, s.degree)));
        }
    }
    let mut cup2 = BTreeMap::new();
    for c in doc.cup2 {
        let (i, j) = c.degrees;
        let mut t = vec![vec![BitVec::zeros(f2_dim(i + j)); f2_dim(j)]; f2_dim(i)];
        for e in c.products {
            let cell = t.get_mut(e.left).and_then(|row| row.get_mut(e.right));
            *cell.ok_or_else(|| err(format!("cup2 ({i},{j}): index ({}, {}) out of range", e.left, e.right)))? = e.value;
        }
        if cup2.insert((i, j), t).is_some() {
            return Err(err(format!("cup2: degrees ({i},{j}) repeated")));
        }
    }
    let mut cup_z = BTreeMap::new();
    for c in doc.cup_z {
        let (i, j) = c.degrees;
        let zero = vec![ninefold_simplicial::Int::from(0u8); z_gens(i + j)];
        let mut t = vec![vec![zero; z_gens(j)]; z_gens(i)];
        for e in c.products {
            let cell = t.get_mut(e.left).and_then(|row| row.get_mut(e.right));
            *cell.ok_or_else(|| err(format!("cupZ ({i},{j}): index ({}, {}) out of range", e.left, e.right)))? = e.value;
        }
        if cup_z.insert((i, j), t).is_some() {
            return Err(err(format!("cupZ: degrees ({i},{j}) repeated")));
        }
    }
    let mut h = CohomologyModel {
        dimension: n,
        graded,
        rho2,
        beta,
        sq,
        cup2,
        cup_z,
        orientation: doc.orientation.map(|o| Orientation { top_sign: o.top_generator_sign }),
    };
    // Normalize integral coordinates where shapes allow it.
    for i in 0..n {
        let gens = h.z_gens(i + 1);
        if h.beta[i].iter().all(|v| v.len() == gens) {
            h.beta[i] = h.beta[i].iter().map(|v| h.z_normalize(i + 1, v.clone())).collect();
        }
    }
    let keys: Vec<(usize, usize)> = h.cup_z.keys().copied().collect();
    for (i, j) in keys {
        if i + j <= n {
            let gens = h.z_gens(i + j);
            let t = &h.cup_z[&(i, j)];
            if t.iter().flatten().all(|v| v.len() == gens) {
                let norm = t.iter().map(|row| row.iter().map(|v| h.z_normalize(i + j, v.clone())).collect()).collect();
                h.cup_z.insert((i, j), norm);
            }
        }
    }
    Ok(ManifoldModel {
        label: doc.label,
        cohomology: h,
        phi_hat: doc.phi_hat,
        omega_pc: doc.omega_pc.map(|o| OmegaDatum { representative: o.representative, determined: o.determined }),
    })
}

pub fn to_json(m: &ManifoldModel) -> String {
    serde_json::to_string_pretty(&to_doc(m)).expect("model serializes")
}

pub fn to_value(m: &ManifoldModel) -> serde_json::Value {
    serde_json::to_value(to_doc(m)).expect("model serializes")
}

pub fn from_json(text: &str) -> Result<ManifoldModel, BuildError> {
    let doc: ModelDoc = serde_json::from_str(text).map_err(|e| BuildError::Parse(e.to_string()))?;
    from_doc(doc)
}

/// Model with the same normalized document as `m`.
pub fn normalized(m: &ManifoldModel) -> ManifoldModel {
    from_json(&to_json(m)).expect("emitted document parses")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn library_round_trip() {
        for m in crate::library::all() {
            let text = to_json(&m);
            let back = from_json(&text).unwrap();
            assert_eq!(back, normalized(&m));
            assert_eq!(to_json(&back), text);
        }
    }

    #[test]
    fn errors_name_the_field() {
        let e = from_json(r#"{"schema_version": 1, "label": "x"}"#).unwrap_err();
        assert!(e.to_string().contains("dimension"), "{e}");
        let e = from_json("{\n\"schema_version\": 1,\n\"bogus\": 2}").unwrap_err();
        assert!(e.to_string().contains("bogus") && e.to_string().contains("line 3"), "{e}");
    }
}
