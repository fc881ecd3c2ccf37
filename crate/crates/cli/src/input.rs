//! Loading models: `lib:NAME` for built-in models, otherwise a JSON file
//! holding either a manifold model or a simplicial complex.

use ninefold_core::{library, schema, ManifoldModel};
use ninefold_simplicial::SimplicialComplex;
use sha2::{Digest, Sha256};
use std::path::Path;

pub enum Input {
    Model(ManifoldModel),
    Complex(SimplicialComplex),
}

pub struct Loaded {
    pub source: String,
    pub label: String,
    /// SHA-256 of the normalized JSON document.
    pub digest: String,
    pub input: Input,
}

fn sha256(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

impl Loaded {
    pub fn from_model(source: String, m: ManifoldModel) -> Self {
        let digest = sha256(&schema::to_json(&m));
        Loaded { source, label: m.label.clone(), digest, input: Input::Model(m) }
    }

    pub fn model(&self) -> Option<&ManifoldModel> {
        match &self.input {
            Input::Model(m) => Some(m),
            Input::Complex(_) => None,
        }
    }
}

pub fn load(arg: &str) -> Result<Loaded, String> {
    if let Some(name) = arg.strip_prefix("lib:") {
        let m = library::lookup(name).map_err(|e| e.to_string())?;
        return Ok(Loaded::from_model(arg.into(), m));
    }
    load_path(Path::new(arg))
}

pub fn load_path(path: &Path) -> Result<Loaded, String> {
    let source = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| format!("{source}: {e}"))?;
    // Complexes are recognised by their facet list; everything else must be a model.
    let is_complex = serde_json::from_str::<serde_json::Value>(&text).ok().is_some_and(|v| v.get("facets").is_some());
    if is_complex {
        let x = SimplicialComplex::from_json(&text).map_err(|e| format!("{source}: {e}"))?;
        let label = path.file_stem().map_or_else(|| source.clone(), |s| s.to_string_lossy().into_owned());
        return Ok(Loaded { source, label, digest: sha256(&x.to_json()), input: Input::Complex(x) });
    }
    let m = schema::from_json(&text).map_err(|e| format!("{source}: {e}"))?;
    Ok(Loaded::from_model(source, m))
}
