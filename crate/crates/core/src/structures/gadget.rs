//! Gadgets: role-tagged objects and matrices in the compact model.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::StructureError;
use crate::matrix::ComplexMatrix;
use crate::model::{AtomSpace, ModelEnv};
use crate::object::ObjectExpr;

/// A named bundle of objects and morphisms instantiating one structure.
///
/// Objects are keyed by role (`A`, `B`, `A2`, ...), morphisms by role
/// (`mul`, `eta_L`, `u`, ...). The signature of each morphism role is fixed
/// by [`super::suites::role_signature`] in terms of the object roles.
#[derive(Clone, Debug, PartialEq)]
pub struct Gadget {
    pub kind: String,
    pub objects: BTreeMap<String, ObjectExpr>,
    pub morphisms: BTreeMap<String, ComplexMatrix>,
    pub env: ModelEnv,
    pub notes: Option<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AtomJson {
    dim: usize,
    basis: Option<Vec<String>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GadgetJson {
    kind: String,
    objects: BTreeMap<String, ObjectExpr>,
    morphisms: BTreeMap<String, serde_json::Value>,
    atoms: BTreeMap<String, AtomJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    degree: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    notes: Option<String>,
}

impl Gadget {
    pub fn new(kind: &str, env: ModelEnv) -> Self {
        Gadget {
            kind: kind.to_string(),
            objects: BTreeMap::new(),
            morphisms: BTreeMap::new(),
            env,
            notes: None,
        }
    }

    pub fn with_object(mut self, role: &str, ty: ObjectExpr) -> Self {
        self.objects.insert(role.to_string(), ty);
        self
    }

    pub fn with(mut self, role: &str, m: ComplexMatrix) -> Self {
        self.morphisms.insert(role.to_string(), m);
        self
    }

    pub fn set(&mut self, role: &str, m: ComplexMatrix) {
        self.morphisms.insert(role.to_string(), m);
    }

    pub fn object(&self, role: &str) -> Result<&ObjectExpr, StructureError> {
        self.objects
            .get(role)
            .ok_or_else(|| StructureError::MissingRole(role.to_string()))
    }

    pub fn morphism(&self, role: &str) -> Result<&ComplexMatrix, StructureError> {
        self.morphisms
            .get(role)
            .ok_or_else(|| StructureError::MissingRole(role.to_string()))
    }

    /// Dimension of an object role in the gadget's model.
    pub fn dim(&self, role: &str) -> Result<usize, StructureError> {
        Ok(self.env.dim(self.object(role)?)?)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let atoms = self
            .env
            .atoms
            .iter()
            .map(|(k, a)| {
                (
                    k.clone(),
                    AtomJson {
                        dim: a.dim,
                        basis: Some(a.basis.clone()),
                    },
                )
            })
            .collect();
        let j = GadgetJson {
            kind: self.kind.clone(),
            objects: self.objects.clone(),
            morphisms: self.morphisms.iter().map(|(k, m)| (k.clone(), m.to_json())).collect(),
            atoms,
            degree: Some(self.env.degree),
            notes: self.notes.clone(),
        };
        serde_json::to_value(j).expect("gadget json is serializable")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self, StructureError> {
        let j: GadgetJson = serde_json::from_value(v.clone()).map_err(|e| StructureError::Schema(e.to_string()))?;
        let mut env = ModelEnv::new(j.degree.unwrap_or(3));
        for (name, a) in j.atoms {
            let basis = a.basis.unwrap_or_else(|| AtomSpace::new(a.dim).basis);
            if basis.len() != a.dim {
                return Err(StructureError::Schema(format!(
                    "atom `{name}` has dim {} but {} basis labels",
                    a.dim,
                    basis.len()
                )));
            }
            env.atoms.insert(name, AtomSpace { dim: a.dim, basis });
        }
        let mut morphisms = BTreeMap::new();
        for (role, m) in j.morphisms {
            let m =
                ComplexMatrix::from_json(&m).map_err(|e| StructureError::Schema(format!("morphism `{role}`: {e}")))?;
            morphisms.insert(role, m);
        }
        Ok(Gadget {
            kind: j.kind,
            objects: j.objects,
            morphisms,
            env,
            notes: j.notes,
        })
    }

    pub fn parse(text: &str) -> Result<Self, StructureError> {
        let v: serde_json::Value = serde_json::from_str(text).map_err(|e| StructureError::Schema(e.to_string()))?;
        Gadget::from_json(&v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let env = ModelEnv::new(2).with_atom("A", AtomSpace::with_labels(&["1", "x"]));
        let g = Gadget::new("monoid", env)
            .with_object("A", ObjectExpr::atom("A"))
            .with("unit", ComplexMatrix::from_real(2, 1, &[1.0, 0.0]));
        let back = Gadget::from_json(&g.to_json()).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn basis_length_is_checked() {
        let text = r#"{"kind":"k","objects":{},"morphisms":{},"atoms":{"A":{"dim":2,"basis":["0"]}}}"#;
        assert!(matches!(Gadget::parse(text), Err(StructureError::Schema(_))));
    }
}
