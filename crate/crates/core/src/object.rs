//! Object formulas: atoms, the two units, the two tensors, dagger and the
//! exponential pair.

use std::fmt;

use serde::{Deserialize, Serialize};

/// A formula describing the type carried by a wire.
///
/// Equality is syntactic. Interpretation in the matrix model lives in
/// [`crate::model`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ObjectExpr {
    Atom(String),
    Top,
    Bot,
    Tensor(Box<ObjectExpr>, Box<ObjectExpr>),
    Par(Box<ObjectExpr>, Box<ObjectExpr>),
    Dagger(Box<ObjectExpr>),
    Bang(Box<ObjectExpr>),
    Quest(Box<ObjectExpr>),
}

impl ObjectExpr {
    pub fn atom(name: &str) -> Self {
        ObjectExpr::Atom(name.to_string())
    }

    pub fn tensor(l: ObjectExpr, r: ObjectExpr) -> Self {
        ObjectExpr::Tensor(Box::new(l), Box::new(r))
    }

    pub fn par(l: ObjectExpr, r: ObjectExpr) -> Self {
        ObjectExpr::Par(Box::new(l), Box::new(r))
    }

    pub fn dagger(t: ObjectExpr) -> Self {
        ObjectExpr::Dagger(Box::new(t))
    }

    pub fn bang(t: ObjectExpr) -> Self {
        ObjectExpr::Bang(Box::new(t))
    }

    pub fn quest(t: ObjectExpr) -> Self {
        ObjectExpr::Quest(Box::new(t))
    }

    /// Checks the tree invariant that every atom has a nonempty name.
    pub fn is_well_formed(&self) -> bool {
        match self {
            ObjectExpr::Atom(n) => !n.is_empty(),
            ObjectExpr::Top | ObjectExpr::Bot => true,
            ObjectExpr::Tensor(l, r) | ObjectExpr::Par(l, r) => l.is_well_formed() && r.is_well_formed(),
            ObjectExpr::Dagger(t) | ObjectExpr::Bang(t) | ObjectExpr::Quest(t) => t.is_well_formed(),
        }
    }

    /// Names of all atoms occurring in the formula, in first-occurrence order.
    pub fn atoms(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut Vec<String>) {
        match self {
            ObjectExpr::Atom(n) => {
                if !out.contains(n) {
                    out.push(n.clone());
                }
            }
            ObjectExpr::Top | ObjectExpr::Bot => {}
            ObjectExpr::Tensor(l, r) | ObjectExpr::Par(l, r) => {
                l.collect_atoms(out);
                r.collect_atoms(out);
            }
            ObjectExpr::Dagger(t) | ObjectExpr::Bang(t) | ObjectExpr::Quest(t) => t.collect_atoms(out),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(TypeJson::from(self)).expect("type expressions always serialize")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self, serde_json::Error> {
        serde_json::from_value(v.clone())
    }
}

impl fmt::Display for ObjectExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ObjectExpr::Atom(n) => write!(f, "{n}"),
            ObjectExpr::Top => write!(f, "⊤"),
            ObjectExpr::Bot => write!(f, "⊥"),
            ObjectExpr::Tensor(l, r) => write!(f, "({l} ⊗ {r})"),
            ObjectExpr::Par(l, r) => write!(f, "({l} ⊕ {r})"),
            ObjectExpr::Dagger(t) => write!(f, "{t}†"),
            ObjectExpr::Bang(t) => write!(f, "!{t}"),
            ObjectExpr::Quest(t) => write!(f, "?{t}"),
        }
    }
}

impl Serialize for ObjectExpr {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        TypeJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for ObjectExpr {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let t = TypeJson::deserialize(d)?;
        if let TypeJson::Atom(n) = &t {
            if n.is_empty() {
                return Err(serde::de::Error::custom("atom name must be nonempty"));
            }
        }
        Ok(t.into())
    }
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
enum TypeJson {
    Atom(String),
    Top {},
    Bot {},
    Tensor(Box<TypeJson>, Box<TypeJson>),
    Par(Box<TypeJson>, Box<TypeJson>),
    Dagger(Box<TypeJson>),
    Bang(Box<TypeJson>),
    Quest(Box<TypeJson>),
}

impl From<&ObjectExpr> for TypeJson {
    fn from(t: &ObjectExpr) -> Self {
        match t {
            ObjectExpr::Atom(n) => TypeJson::Atom(n.clone()),
            ObjectExpr::Top => TypeJson::Top {},
            ObjectExpr::Bot => TypeJson::Bot {},
            ObjectExpr::Tensor(l, r) => TypeJson::Tensor(Box::new((&**l).into()), Box::new((&**r).into())),
            ObjectExpr::Par(l, r) => TypeJson::Par(Box::new((&**l).into()), Box::new((&**r).into())),
            ObjectExpr::Dagger(x) => TypeJson::Dagger(Box::new((&**x).into())),
            ObjectExpr::Bang(x) => TypeJson::Bang(Box::new((&**x).into())),
            ObjectExpr::Quest(x) => TypeJson::Quest(Box::new((&**x).into())),
        }
    }
}

impl From<TypeJson> for ObjectExpr {
    fn from(t: TypeJson) -> Self {
        match t {
            TypeJson::Atom(n) => ObjectExpr::Atom(n),
            TypeJson::Top {} => ObjectExpr::Top,
            TypeJson::Bot {} => ObjectExpr::Bot,
            TypeJson::Tensor(l, r) => ObjectExpr::tensor((*l).into(), (*r).into()),
            TypeJson::Par(l, r) => ObjectExpr::par((*l).into(), (*r).into()),
            TypeJson::Dagger(x) => ObjectExpr::dagger((*x).into()),
            TypeJson::Bang(x) => ObjectExpr::bang((*x).into()),
            TypeJson::Quest(x) => ObjectExpr::quest((*x).into()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn json_shapes_follow_the_schema() {
        let t = ObjectExpr::tensor(ObjectExpr::atom("A"), ObjectExpr::par(ObjectExpr::Top, ObjectExpr::Bot));
        assert_eq!(
            t.to_json(),
            json!({"tensor": [{"atom": "A"}, {"par": [{"top": {}}, {"bot": {}}]}]})
        );
        let back = ObjectExpr::from_json(&t.to_json()).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn unary_constructors_round_trip() {
        let t = ObjectExpr::bang(ObjectExpr::dagger(ObjectExpr::quest(ObjectExpr::atom("X"))));
        assert_eq!(t.to_json(), json!({"bang": {"dagger": {"quest": {"atom": "X"}}}}));
        assert_eq!(ObjectExpr::from_json(&t.to_json()).unwrap(), t);
    }

    #[test]
    fn empty_atom_is_rejected() {
        assert!(ObjectExpr::from_json(&json!({"atom": ""})).is_err());
        assert!(ObjectExpr::from_json(&json!({"wat": {}})).is_err());
    }

    #[test]
    fn atoms_are_listed_once() {
        let a = ObjectExpr::atom("A");
        let t = ObjectExpr::tensor(a.clone(), ObjectExpr::par(a, ObjectExpr::atom("B")));
        assert_eq!(t.atoms(), vec!["A".to_string(), "B".to_string()]);
    }
}
