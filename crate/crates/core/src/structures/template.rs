//! Builder for equation templates: circuits whose generators are gadget roles.

use std::collections::BTreeMap;

use super::StructureError;
use crate::circuit::{Circuit, Node, NodeKind, Wire};
use crate::object::ObjectExpr;

/// Handle to a wire under construction.
pub type W = usize;

/// Object roles of the domain and codomain of a morphism role.
pub fn role_signature(role: &str) -> Option<(&'static [&'static str], &'static [&'static str])> {
    let sig: (&[&str], &[&str]) = match role {
        "mul" => (&["A", "A"], &["A"]),
        "unit" => (&[], &["A"]),
        "comul" => (&["A"], &["A", "A"]),
        "counit" => (&["A"], &[]),
        "eta_L" | "eta" => (&[], &["A", "B"]),
        "eps_L" | "eps" => (&["B", "A"], &[]),
        "eta_R" => (&[], &["B", "A"]),
        "eps_R" => (&["A", "B"], &[]),
        "eta2" => (&[], &["A2", "B2"]),
        "eps2" => (&["B2", "A2"], &[]),
        "f" => (&["A"], &["A2"]),
        "g" => (&["B2"], &["B"]),
        "u" | "alpha" | "phi" => (&["A"], &["B"]),
        "v" | "phi_inv" => (&["B"], &["A"]),
        "ea" => (&["A"], &["A"]),
        "eb" => (&["B"], &["B"]),
        "lact" => (&["A", "B"], &["B"]),
        "ract" => (&["B", "A"], &["B"]),
        "lcoact" => (&["A"], &["B", "A"]),
        "rcoact" => (&["A"], &["A", "B"]),
        "bcomul" => (&["B"], &["B", "B"]),
        "bcounit" => (&["B"], &[]),
        "bang_comul" => (&["BA"], &["BA", "BA"]),
        "bang_counit" => (&["BA"], &[]),
        "bang_eps" => (&["BA"], &["A"]),
        "bang_delta" => (&["BA"], &["BBA"]),
        "quest_nabla" => (&["QAd", "QAd"], &["QAd"]),
        "quest_unit" => (&[], &["QAd"]),
        "quest_eta" => (&["Ad"], &["QAd"]),
        "quest_mu" => (&["QQAd"], &["QAd"]),
        "s_iso" => (&["BAd"], &["QAd"]),
        "s_outer" => (&["BBAd"], &["QBAd"]),
        "quest_s" => (&["QBAd"], &["QQAd"]),
        "t_iso" => (&["QAdd"], &["BAdd"]),
        _ => return None,
    };
    Some(sig)
}

/// Incrementally builds one side of an equation.
///
/// The first missing role or object is remembered and reported by
/// [`Tpl::finish`], so template code can be written without `?` on every
/// step.
pub struct Tpl<'a> {
    objects: &'a BTreeMap<String, ObjectExpr>,
    wires: Vec<Wire>,
    nodes: Vec<Node>,
    inputs: Vec<W>,
    err: Option<StructureError>,
}

impl<'a> Tpl<'a> {
    pub fn new(objects: &'a BTreeMap<String, ObjectExpr>) -> Self {
        Tpl {
            objects,
            wires: Vec::new(),
            nodes: Vec::new(),
            inputs: Vec::new(),
            err: None,
        }
    }

    fn fail(&mut self, e: StructureError) {
        if self.err.is_none() {
            self.err = Some(e);
        }
    }

    pub fn obj(&mut self, role: &str) -> ObjectExpr {
        match self.objects.get(role) {
            Some(t) => t.clone(),
            None => {
                self.fail(StructureError::MissingRole(role.to_string()));
                ObjectExpr::Top
            }
        }
    }

    fn fresh(&mut self, ty: ObjectExpr) -> W {
        let id = self.wires.len();
        self.wires.push(Wire {
            id: format!("t{id}"),
            ty,
        });
        id
    }

    /// A boundary input carrying the object of `role`.
    pub fn input(&mut self, role: &str) -> W {
        let ty = self.obj(role);
        self.input_ty(ty)
    }

    pub fn input_ty(&mut self, ty: ObjectExpr) -> W {
        let w = self.fresh(ty);
        self.inputs.push(w);
        w
    }

    fn signature(&mut self, role: &str) -> (Vec<ObjectExpr>, Vec<ObjectExpr>) {
        match role_signature(role) {
            Some((dom, cod)) => (
                dom.iter().map(|r| self.obj(r)).collect(),
                cod.iter().map(|r| self.obj(r)).collect(),
            ),
            None => {
                self.fail(StructureError::UnknownRole(role.to_string()));
                (vec![], vec![])
            }
        }
    }

    fn push(&mut self, kind: NodeKind, ins: &[W], out_tys: Vec<ObjectExpr>) -> Vec<W> {
        let outs: Vec<W> = out_tys.into_iter().map(|t| self.fresh(t)).collect();
        self.nodes.push(Node {
            kind,
            inputs: ins.iter().map(|&w| self.wires[w].id.clone()).collect(),
            outputs: outs.iter().map(|&w| self.wires[w].id.clone()).collect(),
        });
        outs
    }

    /// Applies the generator of `role` to `ins` and returns its outputs.
    pub fn g(&mut self, role: &str, ins: &[W]) -> Vec<W> {
        let (dom, cod) = self.signature(role);
        let kind = NodeKind::Generator {
            name: role.to_string(),
            dom,
            cod: cod.clone(),
        };
        self.push(kind, ins, cod)
    }

    /// Single-output form of [`Tpl::g`].
    pub fn g1(&mut self, role: &str, ins: &[W]) -> W {
        let outs = self.g(role, ins);
        match outs.first() {
            Some(&w) => w,
            None => {
                self.fail(StructureError::UnknownRole(format!("{role} has no output")));
                self.fresh(ObjectExpr::Top)
            }
        }
    }

    /// Two-output form of [`Tpl::g`].
    pub fn g2(&mut self, role: &str, ins: &[W]) -> (W, W) {
        let outs = self.g(role, ins);
        if outs.len() == 2 {
            (outs[0], outs[1])
        } else {
            self.fail(StructureError::UnknownRole(format!("{role} does not have two outputs")));
            (self.fresh(ObjectExpr::Top), self.fresh(ObjectExpr::Top))
        }
    }

    /// Applies the dagger box of the generator of `role`.
    pub fn dag(&mut self, role: &str, ins: &[W]) -> Vec<W> {
        let (dom, cod) = self.signature(role);
        let inner = Circuit::generator(role, dom, cod);
        let out_tys: Vec<ObjectExpr> = inner.input_types().into_iter().map(ObjectExpr::dagger).collect();
        self.push(NodeKind::DaggerBox { inner: Box::new(inner) }, ins, out_tys)
    }

    pub fn dag1(&mut self, role: &str, ins: &[W]) -> W {
        let outs = self.dag(role, ins);
        outs.first().copied().unwrap_or_else(|| self.fresh(ObjectExpr::Top))
    }

    /// Adds a structural node (intro, elim, symmetry) with the given output types.
    pub fn node(&mut self, kind: NodeKind, ins: &[W], out_tys: Vec<ObjectExpr>) -> Vec<W> {
        self.push(kind, ins, out_tys)
    }

    pub fn ty(&self, w: W) -> ObjectExpr {
        self.wires[w].ty.clone()
    }

    pub fn finish(self, outs: &[W]) -> Result<Circuit, StructureError> {
        if let Some(e) = self.err {
            return Err(e);
        }
        let inputs = self.inputs.iter().map(|&w| self.wires[w].id.clone()).collect();
        let outputs = outs.iter().map(|&w| self.wires[w].id.clone()).collect();
        Ok(Circuit::new(self.wires, self.nodes, inputs, outputs)?)
    }
}
