//! Oriented circuit equalities: reductions that shrink a circuit and
//! expansions that grow a single wire.
//!
//! Reductions:
//!
//! * `tensor-beta`, `par-beta`: an intro feeding the matching elim becomes
//!   two plain wires.
//! * `tensor-eta`, `par-eta`: an elim whose two outputs feed the matching
//!   intro in order becomes one plain wire.
//! * `top-beta`: a ⊤-intro whose wire is consumed by a ⊤-elim disappears.
//! * `top-eta`: a ⊤-elim anchored on the output of a ⊤-intro disappears and
//!   the ⊤ wire it consumed continues as the anchor wire.
//! * `bot-beta`, `bot-eta`: the mirror images for ⊥.
//!
//! A redex fires only if none of the wires it deletes carries a thinning
//! anchor, and only if the result is still acyclic. Expansions are the
//! inverses of the eta rules.

use std::collections::HashSet;

use thiserror::Error;

use crate::circuit::{Circuit, CircuitError, Node, NodeKind, Source, Target, Wire, WireId};
use crate::object::ObjectExpr;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RewriteError {
    #[error("wire `{0}` has an atomic or modal type and cannot be expanded")]
    NotExpandable(WireId),
    #[error("no wire named `{0}`")]
    UnknownWire(WireId),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Reduce,
    Expand,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RewriteRule {
    pub name: &'static str,
    pub direction: Direction,
}

pub const RULES: &[RewriteRule] = &[
    RewriteRule {
        name: "tensor-beta",
        direction: Direction::Reduce,
    },
    RewriteRule {
        name: "par-beta",
        direction: Direction::Reduce,
    },
    RewriteRule {
        name: "tensor-eta",
        direction: Direction::Reduce,
    },
    RewriteRule {
        name: "par-eta",
        direction: Direction::Reduce,
    },
    RewriteRule {
        name: "top-beta",
        direction: Direction::Reduce,
    },
    RewriteRule {
        name: "top-eta",
        direction: Direction::Reduce,
    },
    RewriteRule {
        name: "bot-beta",
        direction: Direction::Reduce,
    },
    RewriteRule {
        name: "bot-eta",
        direction: Direction::Reduce,
    },
    RewriteRule {
        name: "tensor-expand",
        direction: Direction::Expand,
    },
    RewriteRule {
        name: "par-expand",
        direction: Direction::Expand,
    },
    RewriteRule {
        name: "top-expand",
        direction: Direction::Expand,
    },
    RewriteRule {
        name: "bot-expand",
        direction: Direction::Expand,
    },
];

/// Mutable copy of a circuit used while rewriting.
#[derive(Clone)]
struct Parts {
    wires: Vec<Wire>,
    nodes: Vec<Node>,
    inputs: Vec<WireId>,
    outputs: Vec<WireId>,
}

impl Parts {
    fn of(c: &Circuit) -> Self {
        let (wires, nodes, inputs, outputs) = c.clone().into_parts();
        Parts {
            wires,
            nodes,
            inputs,
            outputs,
        }
    }

    fn anchored(&self, w: &str) -> bool {
        self.nodes
            .iter()
            .any(|n| n.kind.thin().map(|t| t == w).unwrap_or(false))
    }

    /// The consumer of `drop` now consumes `keep`, and anchors on `drop`
    /// move to `keep`. `drop` is removed.
    fn merge(&mut self, keep: &str, drop: &str) {
        for n in self.nodes.iter_mut() {
            for w in n.inputs.iter_mut() {
                if w == drop {
                    *w = keep.to_string();
                }
            }
            match &mut n.kind {
                NodeKind::TopElim { thin } | NodeKind::BotIntro { thin } if thin == drop => *thin = keep.to_string(),
                _ => {}
            }
        }
        for w in self.outputs.iter_mut() {
            if w == drop {
                *w = keep.to_string();
            }
        }
        self.remove_wires(&[drop]);
    }

    fn remove_wires(&mut self, ids: &[&str]) {
        self.wires.retain(|w| !ids.contains(&w.id.as_str()));
    }

    fn remove_nodes(&mut self, mut idx: Vec<usize>) {
        idx.sort_unstable();
        for i in idx.into_iter().rev() {
            self.nodes.remove(i);
        }
    }

    fn build(self) -> Result<Circuit, CircuitError> {
        Circuit::new(self.wires, self.nodes, self.inputs, self.outputs)
    }

    fn fresh(&self, base: &str) -> WireId {
        let taken: HashSet<&str> = self.wires.iter().map(|w| w.id.as_str()).collect();
        (1..)
            .map(|k| format!("{base}.x{k}"))
            .find(|id| !taken.contains(id.as_str()))
            .expect("infinitely many candidates")
    }
}

/// Tries every rule at node `i`; returns the rewritten circuit on success.
fn reduce_at(c: &Circuit, i: usize) -> Option<(&'static str, Circuit)> {
    let nodes = c.nodes();
    let sources = c.sources();
    let targets = c.targets();
    let node = &nodes[i];
    let consumer = |w: &str| match targets[w] {
        Target::Node(n, p) => Some((n, p)),
        Target::Boundary(_) => None,
    };
    let producer = |w: &str| match sources[w] {
        Source::Node(n, p) => Some((n, p)),
        Source::Boundary(_) => None,
    };
    let mut p = Parts::of(c);
    let rule = match &node.kind {
        NodeKind::TensorIntro | NodeKind::ParIntro => {
            let w = &node.outputs[0];
            let (j, _) = consumer(w)?;
            let elim_matches = matches!(
                (&node.kind, &nodes[j].kind),
                (NodeKind::TensorIntro, NodeKind::TensorElim) | (NodeKind::ParIntro, NodeKind::ParElim)
            );
            if !elim_matches || p.anchored(w) {
                return None;
            }
            let (x, y) = (node.inputs.clone(), nodes[j].outputs.clone());
            p.remove_nodes(vec![i, j]);
            p.remove_wires(&[w]);
            p.merge(&x[0], &y[0]);
            p.merge(&x[1], &y[1]);
            if matches!(node.kind, NodeKind::TensorIntro) {
                "tensor-beta"
            } else {
                "par-beta"
            }
        }
        NodeKind::TensorElim | NodeKind::ParElim => {
            let (a, b) = (&node.outputs[0], &node.outputs[1]);
            let (j, pa) = consumer(a)?;
            let (k, pb) = consumer(b)?;
            let intro_matches = matches!(
                (&node.kind, &nodes[j].kind),
                (NodeKind::TensorElim, NodeKind::TensorIntro) | (NodeKind::ParElim, NodeKind::ParIntro)
            );
            if j != k || (pa, pb) != (0, 1) || !intro_matches || p.anchored(a) || p.anchored(b) {
                return None;
            }
            let (w, w2) = (node.inputs[0].clone(), nodes[j].outputs[0].clone());
            p.remove_nodes(vec![i, j]);
            p.remove_wires(&[a, b]);
            p.merge(&w, &w2);
            if matches!(node.kind, NodeKind::TensorElim) {
                "tensor-eta"
            } else {
                "par-eta"
            }
        }
        NodeKind::TopIntro => {
            let t = &node.outputs[0];
            let (j, _) = consumer(t)?;
            if !matches!(nodes[j].kind, NodeKind::TopElim { .. }) || p.anchored(t) {
                return None;
            }
            p.remove_nodes(vec![i, j]);
            p.remove_wires(&[t]);
            "top-beta"
        }
        NodeKind::TopElim { thin } => {
            let (j, _) = producer(thin)?;
            if !matches!(nodes[j].kind, NodeKind::TopIntro) {
                return None;
            }
            let w = node.inputs[0].clone();
            let x = thin.clone();
            p.remove_nodes(vec![i, j]);
            p.merge(&w, &x);
            "top-eta"
        }
        NodeKind::BotIntro { thin } => {
            let b = &node.outputs[0];
            if let Some((j, _)) = consumer(b) {
                if matches!(nodes[j].kind, NodeKind::BotElim) && !p.anchored(b) {
                    p.remove_nodes(vec![i, j]);
                    p.remove_wires(&[b]);
                    return p.build().ok().map(|c| ("bot-beta", c));
                }
            }
            let (j, _) = consumer(thin)?;
            if !matches!(nodes[j].kind, NodeKind::BotElim) {
                return None;
            }
            let x = thin.clone();
            p.remove_nodes(vec![i, j]);
            // The ⊥ wire produced here continues from the anchor's producer.
            let b = b.clone();
            rename_producer(&mut p, &x, &b);
            "bot-eta"
        }
        _ => return None,
    };
    p.build().ok().map(|c| (rule, c))
}

/// Makes the producer of `from` produce `to` instead, moving anchors, and
/// removes `from`.
fn rename_producer(p: &mut Parts, from: &str, to: &str) {
    for n in p.nodes.iter_mut() {
        for w in n.outputs.iter_mut() {
            if w == from {
                *w = to.to_string();
            }
        }
        match &mut n.kind {
            NodeKind::TopElim { thin } | NodeKind::BotIntro { thin } if thin == from => *thin = to.to_string(),
            _ => {}
        }
    }
    for w in p.inputs.iter_mut() {
        if w == from {
            *w = to.to_string();
        }
    }
    p.remove_wires(&[from]);
}

/// One reduction at the lowest-index node where a rule applies, with the
/// name of the rule, or `None` for a normal form.
pub fn step(c: &Circuit) -> Option<(&'static str, Circuit)> {
    (0..c.nodes().len()).find_map(|i| reduce_at(c, i))
}

/// Applies [`step`] until none applies. Returns the normal form and the
/// names of the rules fired, in order.
pub fn normalize_with_log(c: &Circuit) -> (Circuit, Vec<&'static str>) {
    let mut cur = c.clone();
    let mut log = Vec::new();
    while let Some((rule, next)) = step(&cur) {
        debug_assert!(next.nodes().len() < cur.nodes().len());
        log.push(rule);
        cur = next;
    }
    (cur, log)
}

/// Normal form under the reduction rules.
pub fn normalize(c: &Circuit) -> Circuit {
    normalize_with_log(c).0
}

/// Replaces wire `w` by an elim/intro pair (⊗, ⊕) or a unit pair joined by a
/// thinning link (⊤, ⊥).
pub fn expand_wire(c: &Circuit, w: &str) -> Result<Circuit, RewriteError> {
    let ty = c
        .wire_type(w)
        .ok_or_else(|| RewriteError::UnknownWire(w.to_string()))?
        .clone();
    let mut p = Parts::of(c);
    let upper = w.to_string();
    let lower = p.fresh(w);
    // `upper` keeps the producer, `lower` takes over the consumer.
    p.wires.push(Wire {
        id: lower.clone(),
        ty: ty.clone(),
    });
    for n in p.nodes.iter_mut() {
        for x in n.inputs.iter_mut() {
            if *x == upper {
                *x = lower.clone();
            }
        }
    }
    for x in p.outputs.iter_mut() {
        if *x == upper {
            *x = lower.clone();
        }
    }
    match &ty {
        ObjectExpr::Tensor(l, r) | ObjectExpr::Par(l, r) => {
            let a = p.fresh(w);
            p.wires.push(Wire {
                id: a.clone(),
                ty: (**l).clone(),
            });
            let b = p.fresh(w);
            p.wires.push(Wire {
                id: b.clone(),
                ty: (**r).clone(),
            });
            let (elim, intro) = if matches!(ty, ObjectExpr::Tensor(..)) {
                (NodeKind::TensorElim, NodeKind::TensorIntro)
            } else {
                (NodeKind::ParElim, NodeKind::ParIntro)
            };
            p.nodes.push(Node {
                kind: elim,
                inputs: vec![upper],
                outputs: vec![a.clone(), b.clone()],
            });
            p.nodes.push(Node {
                kind: intro,
                inputs: vec![a, b],
                outputs: vec![lower],
            });
        }
        ObjectExpr::Top => {
            p.nodes.push(Node {
                kind: NodeKind::TopElim { thin: lower.clone() },
                inputs: vec![upper],
                outputs: vec![],
            });
            p.nodes.push(Node {
                kind: NodeKind::TopIntro,
                inputs: vec![],
                outputs: vec![lower],
            });
        }
        ObjectExpr::Bot => {
            p.nodes.push(Node {
                kind: NodeKind::BotElim,
                inputs: vec![upper.clone()],
                outputs: vec![],
            });
            p.nodes.push(Node {
                kind: NodeKind::BotIntro { thin: upper },
                inputs: vec![],
                outputs: vec![lower],
            });
        }
        _ => return Err(RewriteError::NotExpandable(w.to_string())),
    }
    Ok(p.build()?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{compose, isomorphic, tensor_parallel};

    fn a() -> ObjectExpr {
        ObjectExpr::atom("A")
    }
    fn b() -> ObjectExpr {
        ObjectExpr::atom("B")
    }

    #[test]
    fn intro_then_elim_reduces_to_two_wires() {
        let c = compose(&Circuit::tensor_intro(a(), b()), &Circuit::tensor_elim(a(), b())).unwrap();
        let (n, log) = normalize_with_log(&c);
        assert_eq!(log, vec!["tensor-beta"]);
        assert!(n.nodes().is_empty());
        assert!(isomorphic(
            &n,
            &tensor_parallel(&Circuit::id_wire(a()), &Circuit::id_wire(b()))
        ));
    }

    #[test]
    fn normal_circuit_is_unchanged() {
        let c = Circuit::generator("f", vec![a()], vec![b()]);
        assert_eq!(normalize(&c), c);
    }

    #[test]
    fn atom_wire_is_not_expandable() {
        let c = Circuit::id_wire(a());
        let w = c.inputs()[0].clone();
        assert_eq!(expand_wire(&c, &w), Err(RewriteError::NotExpandable(w)));
    }

    #[test]
    fn expansions_normalize_back() {
        for ty in [
            ObjectExpr::tensor(a(), b()),
            ObjectExpr::par(a(), b()),
            ObjectExpr::Top,
            ObjectExpr::Bot,
        ] {
            let c = Circuit::id_wire(ty.clone());
            let w = c.inputs()[0].clone();
            let e = expand_wire(&c, &w).unwrap();
            assert_eq!(e.nodes().len(), 2, "{ty}");
            assert!(isomorphic(&normalize(&e), &c), "{ty}");
        }
    }

    #[test]
    fn top_intro_consumed_by_thinned_elim_vanishes() {
        let c = Circuit::new(
            vec![
                Wire {
                    id: "x".into(),
                    ty: a(),
                },
                Wire {
                    id: "t".into(),
                    ty: ObjectExpr::Top,
                },
            ],
            vec![
                Node {
                    kind: NodeKind::TopIntro,
                    inputs: vec![],
                    outputs: vec!["t".into()],
                },
                Node {
                    kind: NodeKind::TopElim { thin: "x".into() },
                    inputs: vec!["t".into()],
                    outputs: vec![],
                },
            ],
            vec!["x".into()],
            vec!["x".into()],
        )
        .unwrap();
        let (n, log) = normalize_with_log(&c);
        assert_eq!(log, vec!["top-beta"]);
        assert!(isomorphic(&n, &Circuit::id_wire(a())));
    }
}
