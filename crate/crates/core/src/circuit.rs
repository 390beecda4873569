//! Typed circuits: wires, nodes, boundary, construction and (de)serialization.
//!
//! A circuit is an open port graph. Every wire has exactly one producer
//! (a node output or a boundary input) and exactly one consumer (a node input
//! or a boundary output). Thinning links on `TopElim` and `BotIntro` refer to
//! wires by id, never to nodes.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::object::ObjectExpr;

pub type WireId = String;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CircuitError {
    #[error("type mismatch at position {position}: expected {expected}, found {found}")]
    TypeMismatch {
        position: usize,
        expected: ObjectExpr,
        found: ObjectExpr,
    },
    #[error("arity mismatch: {0} outputs cannot meet {1} inputs")]
    ArityMismatch(usize, usize),
    #[error("syntax error at line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("schema error in field `{field}`: {msg}")]
    Schema { field: String, msg: String },
    #[error("node {node} is ill-typed: {msg}")]
    IllTyped { node: usize, msg: String },
    #[error("circuit contains a cycle")]
    Cyclic,
}

impl CircuitError {
    fn schema(field: &str, msg: impl Into<String>) -> Self {
        CircuitError::Schema {
            field: field.to_string(),
            msg: msg.into(),
        }
    }

    fn ill(node: usize, msg: impl Into<String>) -> Self {
        CircuitError::IllTyped { node, msg: msg.into() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Wire {
    pub id: WireId,
    pub ty: ObjectExpr,
}

#[derive(Clone, Debug, PartialEq)]
pub enum NodeKind {
    /// An opaque morphism. Its inputs are read as tensored and its outputs as
    /// parred.
    Generator {
        name: String,
        dom: Vec<ObjectExpr>,
        cod: Vec<ObjectExpr>,
    },
    TensorIntro,
    TensorElim,
    ParIntro,
    ParElim,
    TopIntro,
    TopElim {
        thin: WireId,
    },
    BotIntro {
        thin: WireId,
    },
    BotElim,
    Symmetry,
    /// Mirror image of an inner circuit. Inputs of the box carry the daggers
    /// of the inner outputs and vice versa, left to right order kept.
    DaggerBox {
        inner: Box<Circuit>,
    },
}

impl NodeKind {
    /// Stable lowercase tag used in JSON and in diagnostics.
    pub fn tag(&self) -> &'static str {
        match self {
            NodeKind::Generator { .. } => "generator",
            NodeKind::TensorIntro => "tensor_intro",
            NodeKind::TensorElim => "tensor_elim",
            NodeKind::ParIntro => "par_intro",
            NodeKind::ParElim => "par_elim",
            NodeKind::TopIntro => "top_intro",
            NodeKind::TopElim { .. } => "top_elim",
            NodeKind::BotIntro { .. } => "bot_intro",
            NodeKind::BotElim => "bot_elim",
            NodeKind::Symmetry => "symmetry",
            NodeKind::DaggerBox { .. } => "dagger_box",
        }
    }

    /// Number of (input, output) ports.
    pub fn arity(&self) -> (usize, usize) {
        match self {
            NodeKind::Generator { dom, cod, .. } => (dom.len(), cod.len()),
            NodeKind::TensorIntro | NodeKind::ParIntro => (2, 1),
            NodeKind::TensorElim | NodeKind::ParElim => (1, 2),
            NodeKind::TopIntro | NodeKind::BotIntro { .. } => (0, 1),
            NodeKind::TopElim { .. } | NodeKind::BotElim => (1, 0),
            NodeKind::Symmetry => (2, 2),
            NodeKind::DaggerBox { inner } => (inner.outputs.len(), inner.inputs.len()),
        }
    }

    pub fn thin(&self) -> Option<&WireId> {
        match self {
            NodeKind::TopElim { thin } | NodeKind::BotIntro { thin } => Some(thin),
            _ => None,
        }
    }

    fn thin_mut(&mut self) -> Option<&mut WireId> {
        match self {
            NodeKind::TopElim { thin } | NodeKind::BotIntro { thin } => Some(thin),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Node {
    pub kind: NodeKind,
    pub inputs: Vec<WireId>,
    pub outputs: Vec<WireId>,
}

/// Where a wire starts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Source {
    Boundary(usize),
    Node(usize, usize),
}

/// Where a wire ends.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Target {
    Boundary(usize),
    Node(usize, usize),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    wires: Vec<Wire>,
    nodes: Vec<Node>,
    inputs: Vec<WireId>,
    outputs: Vec<WireId>,
}

impl Circuit {
    /// Builds a circuit and checks every structural and typing invariant.
    pub fn new(
        wires: Vec<Wire>,
        nodes: Vec<Node>,
        inputs: Vec<WireId>,
        outputs: Vec<WireId>,
    ) -> Result<Self, CircuitError> {
        let c = Circuit {
            wires,
            nodes,
            inputs,
            outputs,
        };
        c.check()?;
        Ok(c)
    }

    pub fn empty() -> Self {
        Circuit {
            wires: vec![],
            nodes: vec![],
            inputs: vec![],
            outputs: vec![],
        }
    }

    /// A single wire of type `ty`.
    pub fn id_wire(ty: ObjectExpr) -> Self {
        Circuit {
            wires: vec![Wire { id: "w0".into(), ty }],
            nodes: vec![],
            inputs: vec!["w0".into()],
            outputs: vec!["w0".into()],
        }
    }

    /// Parallel identity wires.
    pub fn identity(tys: &[ObjectExpr]) -> Self {
        tys.iter().fold(Circuit::empty(), |acc, t| {
            tensor_parallel(&acc, &Circuit::id_wire(t.clone()))
        })
    }

    /// A single node whose ports are all on the boundary.
    pub fn single(kind: NodeKind, in_tys: Vec<ObjectExpr>, out_tys: Vec<ObjectExpr>) -> Result<Self, CircuitError> {
        let mut wires = Vec::new();
        let mut inputs = Vec::new();
        let mut outputs = Vec::new();
        for t in in_tys {
            let id = format!("w{}", wires.len());
            wires.push(Wire { id: id.clone(), ty: t });
            inputs.push(id);
        }
        for t in out_tys {
            let id = format!("w{}", wires.len());
            wires.push(Wire { id: id.clone(), ty: t });
            outputs.push(id);
        }
        let node = Node {
            kind,
            inputs: inputs.clone(),
            outputs: outputs.clone(),
        };
        Circuit::new(wires, vec![node], inputs, outputs)
    }

    pub fn generator(name: &str, dom: Vec<ObjectExpr>, cod: Vec<ObjectExpr>) -> Self {
        let kind = NodeKind::Generator {
            name: name.to_string(),
            dom: dom.clone(),
            cod: cod.clone(),
        };
        Circuit::single(kind, dom, cod).expect("a generator is well-typed by construction")
    }

    pub fn tensor_intro(a: ObjectExpr, b: ObjectExpr) -> Self {
        let t = ObjectExpr::tensor(a.clone(), b.clone());
        Circuit::single(NodeKind::TensorIntro, vec![a, b], vec![t]).expect("well-typed")
    }

    pub fn tensor_elim(a: ObjectExpr, b: ObjectExpr) -> Self {
        let t = ObjectExpr::tensor(a.clone(), b.clone());
        Circuit::single(NodeKind::TensorElim, vec![t], vec![a, b]).expect("well-typed")
    }

    pub fn par_intro(a: ObjectExpr, b: ObjectExpr) -> Self {
        let t = ObjectExpr::par(a.clone(), b.clone());
        Circuit::single(NodeKind::ParIntro, vec![a, b], vec![t]).expect("well-typed")
    }

    pub fn par_elim(a: ObjectExpr, b: ObjectExpr) -> Self {
        let t = ObjectExpr::par(a.clone(), b.clone());
        Circuit::single(NodeKind::ParElim, vec![t], vec![a, b]).expect("well-typed")
    }

    /// Crossing of two wires: `a, b` in, `b, a` out.
    pub fn symmetry(a: ObjectExpr, b: ObjectExpr) -> Self {
        Circuit::single(NodeKind::Symmetry, vec![a.clone(), b.clone()], vec![b, a]).expect("well-typed")
    }

    /// Mirror image of `inner`.
    pub fn dagger_box(inner: Circuit) -> Self {
        let ins = inner.output_types().into_iter().map(ObjectExpr::dagger).collect();
        let outs = inner.input_types().into_iter().map(ObjectExpr::dagger).collect();
        Circuit::single(NodeKind::DaggerBox { inner: Box::new(inner) }, ins, outs)
            .expect("dagger box boundary is derived from its inner circuit")
    }

    pub fn wires(&self) -> &[Wire] {
        &self.wires
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn inputs(&self) -> &[WireId] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[WireId] {
        &self.outputs
    }

    pub fn wire(&self, id: &str) -> Option<&Wire> {
        self.wires.iter().find(|w| w.id == id)
    }

    pub fn wire_type(&self, id: &str) -> Option<&ObjectExpr> {
        self.wire(id).map(|w| &w.ty)
    }

    pub fn input_types(&self) -> Vec<ObjectExpr> {
        self.inputs.iter().map(|w| self.wire_type(w).unwrap().clone()).collect()
    }

    pub fn output_types(&self) -> Vec<ObjectExpr> {
        self.outputs
            .iter()
            .map(|w| self.wire_type(w).unwrap().clone())
            .collect()
    }

    /// Producer of every wire.
    pub fn sources(&self) -> HashMap<WireId, Source> {
        let mut m = HashMap::new();
        for (i, w) in self.inputs.iter().enumerate() {
            m.insert(w.clone(), Source::Boundary(i));
        }
        for (n, node) in self.nodes.iter().enumerate() {
            for (p, w) in node.outputs.iter().enumerate() {
                m.insert(w.clone(), Source::Node(n, p));
            }
        }
        m
    }

    /// Consumer of every wire.
    pub fn targets(&self) -> HashMap<WireId, Target> {
        let mut m = HashMap::new();
        for (i, w) in self.outputs.iter().enumerate() {
            m.insert(w.clone(), Target::Boundary(i));
        }
        for (n, node) in self.nodes.iter().enumerate() {
            for (p, w) in node.inputs.iter().enumerate() {
                m.insert(w.clone(), Target::Node(n, p));
            }
        }
        m
    }

    /// Node indices in a flow-respecting order.
    pub fn topological_order(&self) -> Result<Vec<usize>, CircuitError> {
        let src = self.sources();
        let n = self.nodes.len();
        let mut indeg = vec![0usize; n];
        let mut succ: Vec<Vec<usize>> = vec![vec![]; n];
        for (j, node) in self.nodes.iter().enumerate() {
            for w in &node.inputs {
                if let Some(Source::Node(i, _)) = src.get(w) {
                    succ[*i].push(j);
                    indeg[j] += 1;
                }
            }
        }
        let mut queue: VecDeque<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(i) = queue.pop_front() {
            order.push(i);
            for &j in &succ[i] {
                indeg[j] -= 1;
                if indeg[j] == 0 {
                    queue.push_back(j);
                }
            }
        }
        if order.len() != n {
            return Err(CircuitError::Cyclic);
        }
        Ok(order)
    }

    /// Checks endpoint uniqueness, port typing, anchors and acyclicity.
    pub fn check(&self) -> Result<(), CircuitError> {
        let mut types: HashMap<&str, &ObjectExpr> = HashMap::new();
        for w in &self.wires {
            if !w.ty.is_well_formed() {
                return Err(CircuitError::schema(
                    "wires",
                    format!("wire `{}` has a malformed type", w.id),
                ));
            }
            if types.insert(&w.id, &w.ty).is_some() {
                return Err(CircuitError::schema("wires", format!("duplicate wire id `{}`", w.id)));
            }
        }
        let mut produced: HashSet<&str> = HashSet::new();
        let mut consumed: HashSet<&str> = HashSet::new();
        for w in &self.inputs {
            if !types.contains_key(w.as_str()) {
                return Err(CircuitError::schema("inputs", format!("unknown wire `{w}`")));
            }
            if !produced.insert(w) {
                return Err(CircuitError::schema("inputs", format!("wire `{w}` has two producers")));
            }
        }
        for w in &self.outputs {
            if !types.contains_key(w.as_str()) {
                return Err(CircuitError::schema("outputs", format!("unknown wire `{w}`")));
            }
            if !consumed.insert(w) {
                return Err(CircuitError::schema("outputs", format!("wire `{w}` has two consumers")));
            }
        }
        for (n, node) in self.nodes.iter().enumerate() {
            let (ni, no) = node.kind.arity();
            if node.inputs.len() != ni || node.outputs.len() != no {
                return Err(CircuitError::ill(
                    n,
                    format!(
                        "{} expects {ni} inputs and {no} outputs, got {} and {}",
                        node.kind.tag(),
                        node.inputs.len(),
                        node.outputs.len()
                    ),
                ));
            }
            for w in &node.inputs {
                if !types.contains_key(w.as_str()) {
                    return Err(CircuitError::schema(
                        "ports",
                        format!("node {n} references unknown wire `{w}`"),
                    ));
                }
                if !consumed.insert(w) {
                    return Err(CircuitError::schema("ports", format!("wire `{w}` has two consumers")));
                }
            }
            for w in &node.outputs {
                if !types.contains_key(w.as_str()) {
                    return Err(CircuitError::schema(
                        "ports",
                        format!("node {n} references unknown wire `{w}`"),
                    ));
                }
                if !produced.insert(w) {
                    return Err(CircuitError::schema("ports", format!("wire `{w}` has two producers")));
                }
            }
            let ins: Vec<&ObjectExpr> = node.inputs.iter().map(|w| types[w.as_str()]).collect();
            let outs: Vec<&ObjectExpr> = node.outputs.iter().map(|w| types[w.as_str()]).collect();
            check_node_types(n, node, &ins, &outs)?;
            if let Some(anchor) = node.kind.thin() {
                if !types.contains_key(anchor.as_str()) {
                    return Err(CircuitError::schema(
                        "thin",
                        format!("node {n} anchors unknown wire `{anchor}`"),
                    ));
                }
                let own = node.inputs.iter().chain(node.outputs.iter()).any(|w| w == anchor);
                if own {
                    return Err(CircuitError::ill(n, "a unit node cannot anchor its own wire"));
                }
            }
        }
        for w in &self.wires {
            if !produced.contains(w.id.as_str()) {
                return Err(CircuitError::schema(
                    "wires",
                    format!("wire `{}` has no producer", w.id),
                ));
            }
            if !consumed.contains(w.id.as_str()) {
                return Err(CircuitError::schema(
                    "wires",
                    format!("wire `{}` has no consumer", w.id),
                ));
            }
        }
        self.topological_order()?;
        Ok(())
    }

    /// Renames every wire (and every anchor) through `f`. Inner circuits of
    /// dagger boxes keep their own namespace.
    fn rename(&self, f: &dyn Fn(&str) -> String) -> Circuit {
        Circuit {
            wires: self
                .wires
                .iter()
                .map(|w| Wire {
                    id: f(&w.id),
                    ty: w.ty.clone(),
                })
                .collect(),
            nodes: self
                .nodes
                .iter()
                .map(|n| {
                    let mut kind = n.kind.clone();
                    if let Some(t) = kind.thin_mut() {
                        *t = f(t);
                    }
                    Node {
                        kind,
                        inputs: n.inputs.iter().map(|w| f(w)).collect(),
                        outputs: n.outputs.iter().map(|w| f(w)).collect(),
                    }
                })
                .collect(),
            inputs: self.inputs.iter().map(|w| f(w)).collect(),
            outputs: self.outputs.iter().map(|w| f(w)).collect(),
        }
    }

    /// Renames wires to `w0, w1, ...` in declaration order.
    pub fn canonical_ids(&self) -> Circuit {
        let map: HashMap<String, String> = self
            .wires
            .iter()
            .enumerate()
            .map(|(i, w)| (w.id.clone(), format!("w{i}")))
            .collect();
        self.rename(&|w| map[w].clone())
    }

    pub(crate) fn into_parts(self) -> (Vec<Wire>, Vec<Node>, Vec<WireId>, Vec<WireId>) {
        (self.wires, self.nodes, self.inputs, self.outputs)
    }
}

fn check_node_types(n: usize, node: &Node, ins: &[&ObjectExpr], outs: &[&ObjectExpr]) -> Result<(), CircuitError> {
    let bad = |msg: &str| Err(CircuitError::ill(n, msg.to_string()));
    match &node.kind {
        NodeKind::Generator { dom, cod, name } => {
            if name.is_empty() {
                return bad("generator name is empty");
            }
            if ins.iter().zip(dom).any(|(a, b)| *a != b) || outs.iter().zip(cod).any(|(a, b)| *a != b) {
                return bad("generator ports disagree with its signature");
            }
        }
        NodeKind::TensorIntro => {
            if *outs[0] != ObjectExpr::tensor(ins[0].clone(), ins[1].clone()) {
                return bad("tensor_intro output must be the tensor of its inputs");
            }
        }
        NodeKind::TensorElim => {
            if *ins[0] != ObjectExpr::tensor(outs[0].clone(), outs[1].clone()) {
                return bad("tensor_elim input must be the tensor of its outputs");
            }
        }
        NodeKind::ParIntro => {
            if *outs[0] != ObjectExpr::par(ins[0].clone(), ins[1].clone()) {
                return bad("par_intro output must be the par of its inputs");
            }
        }
        NodeKind::ParElim => {
            if *ins[0] != ObjectExpr::par(outs[0].clone(), outs[1].clone()) {
                return bad("par_elim input must be the par of its outputs");
            }
        }
        NodeKind::TopIntro => {
            if *outs[0] != ObjectExpr::Top {
                return bad("top_intro produces ⊤");
            }
        }
        NodeKind::TopElim { .. } => {
            if *ins[0] != ObjectExpr::Top {
                return bad("top_elim consumes ⊤");
            }
        }
        NodeKind::BotIntro { .. } => {
            if *outs[0] != ObjectExpr::Bot {
                return bad("bot_intro produces ⊥");
            }
        }
        NodeKind::BotElim => {
            if *ins[0] != ObjectExpr::Bot {
                return bad("bot_elim consumes ⊥");
            }
        }
        NodeKind::Symmetry => {
            if ins[0] != outs[1] || ins[1] != outs[0] {
                return bad("symmetry must swap its two wires");
            }
        }
        NodeKind::DaggerBox { inner } => {
            inner
                .check()
                .map_err(|e| CircuitError::ill(n, format!("inner circuit: {e}")))?;
            let want_in: Vec<ObjectExpr> = inner.output_types().into_iter().map(ObjectExpr::dagger).collect();
            let want_out: Vec<ObjectExpr> = inner.input_types().into_iter().map(ObjectExpr::dagger).collect();
            if ins.iter().zip(&want_in).any(|(a, b)| *a != b) || outs.iter().zip(&want_out).any(|(a, b)| *a != b) {
                return bad("dagger box ports must be the daggers of the mirrored inner boundary");
            }
        }
    }
    Ok(())
}

/// Sequential composition: outputs of `f` are glued to inputs of `g`.
pub fn compose(f: &Circuit, g: &Circuit) -> Result<Circuit, CircuitError> {
    if f.outputs.len() != g.inputs.len() {
        return Err(CircuitError::ArityMismatch(f.outputs.len(), g.inputs.len()));
    }
    for (i, (a, b)) in f.output_types().into_iter().zip(g.input_types()).enumerate() {
        if a != b {
            return Err(CircuitError::TypeMismatch {
                position: i,
                expected: a,
                found: b,
            });
        }
    }
    let f2 = f.rename(&|w| format!("f.{w}"));
    let glue: HashMap<String, String> = g
        .inputs
        .iter()
        .zip(&f2.outputs)
        .map(|(gi, fo)| (gi.clone(), fo.clone()))
        .collect();
    let g2 = g.rename(&|w| glue.get(w).cloned().unwrap_or_else(|| format!("g.{w}")));
    // Glued wires keep the entry contributed by f.
    let mut wires = f2.wires;
    wires.extend(g2.wires);
    let mut seen = HashSet::new();
    wires.retain(|w| seen.insert(w.id.clone()));
    let mut nodes = f2.nodes;
    nodes.extend(g2.nodes);
    let c = Circuit::new(wires, nodes, f2.inputs, g2.outputs)?;
    Ok(c.canonical_ids())
}

/// Side-by-side juxtaposition with concatenated boundaries.
pub fn tensor_parallel(f: &Circuit, g: &Circuit) -> Circuit {
    let f2 = f.rename(&|w| format!("l.{w}"));
    let g2 = g.rename(&|w| format!("r.{w}"));
    let mut wires = f2.wires;
    wires.extend(g2.wires);
    let mut nodes = f2.nodes;
    nodes.extend(g2.nodes);
    let mut inputs = f2.inputs;
    inputs.extend(g2.inputs);
    let mut outputs = f2.outputs;
    outputs.extend(g2.outputs);
    Circuit {
        wires,
        nodes,
        inputs,
        outputs,
    }
    .canonical_ids()
}

/// Composes a chain of circuits left to right.
pub fn compose_all(parts: &[Circuit]) -> Result<Circuit, CircuitError> {
    let mut it = parts.iter();
    let first = it.next().cloned().unwrap_or_else(Circuit::empty);
    it.try_fold(first, |acc, c| compose(&acc, c))
}

/// Juxtaposes a list of circuits left to right.
pub fn tensor_all(parts: &[Circuit]) -> Circuit {
    parts.iter().fold(Circuit::empty(), |acc, c| tensor_parallel(&acc, c))
}

// ---------------------------------------------------------------------------
// Isomorphism
// ---------------------------------------------------------------------------

/// Port-graph isomorphism that respects boundary order, port positions, node
/// kinds and thinning anchors. Matching propagates from the boundary and from
/// anchors. Components unreachable from both (closed scalars) are compared by
/// their multiset of node kinds.
pub fn isomorphic(a: &Circuit, b: &Circuit) -> bool {
    if a.wires.len() != b.wires.len()
        || a.nodes.len() != b.nodes.len()
        || a.inputs.len() != b.inputs.len()
        || a.outputs.len() != b.outputs.len()
    {
        return false;
    }
    let (sa, ta) = (a.sources(), a.targets());
    let (sb, tb) = (b.sources(), b.targets());
    let anchored = |c: &Circuit| -> HashMap<WireId, Vec<usize>> {
        let mut m: HashMap<WireId, Vec<usize>> = HashMap::new();
        for (i, n) in c.nodes.iter().enumerate() {
            if let Some(t) = n.kind.thin() {
                m.entry(t.clone()).or_default().push(i);
            }
        }
        m
    };
    let (anc_a, anc_b) = (anchored(a), anchored(b));
    let mut wmap: HashMap<WireId, WireId> = HashMap::new();
    let mut nmap: HashMap<usize, usize> = HashMap::new();
    let mut queue: VecDeque<(WireId, WireId)> = VecDeque::new();
    for (x, y) in a.inputs.iter().zip(&b.inputs).chain(a.outputs.iter().zip(&b.outputs)) {
        queue.push_back((x.clone(), y.clone()));
    }
    let same_kind = |x: &NodeKind, y: &NodeKind| -> bool {
        match (x, y) {
            (
                NodeKind::Generator {
                    name: n1,
                    dom: d1,
                    cod: c1,
                },
                NodeKind::Generator {
                    name: n2,
                    dom: d2,
                    cod: c2,
                },
            ) => n1 == n2 && d1 == d2 && c1 == c2,
            (NodeKind::DaggerBox { inner: i1 }, NodeKind::DaggerBox { inner: i2 }) => isomorphic(i1, i2),
            _ => x.tag() == y.tag(),
        }
    };
    let mut pending_nodes: VecDeque<(usize, usize)> = VecDeque::new();
    loop {
        if let Some((x, y)) = queue.pop_front() {
            match wmap.get(&x) {
                Some(prev) if *prev != y => return false,
                Some(_) => continue,
                None => {}
            }
            if wmap.values().any(|v| *v == y) {
                return false;
            }
            if a.wire_type(&x) != b.wire_type(&y) {
                return false;
            }
            wmap.insert(x.clone(), y.clone());
            match (sa[&x], sb[&y]) {
                (Source::Boundary(i), Source::Boundary(j)) if i == j => {}
                (Source::Node(n, p), Source::Node(m, q)) if p == q => pending_nodes.push_back((n, m)),
                _ => return false,
            }
            match (ta[&x], tb[&y]) {
                (Target::Boundary(i), Target::Boundary(j)) if i == j => {}
                (Target::Node(n, p), Target::Node(m, q)) if p == q => pending_nodes.push_back((n, m)),
                _ => return false,
            }
            let ka = anc_a.get(&x).cloned().unwrap_or_default();
            let kb = anc_b.get(&y).cloned().unwrap_or_default();
            if ka.len() != kb.len() {
                return false;
            }
            for (n, m) in ka.into_iter().zip(kb) {
                pending_nodes.push_back((n, m));
            }
        } else if let Some((n, m)) = pending_nodes.pop_front() {
            match nmap.get(&n) {
                Some(prev) if *prev != m => return false,
                Some(_) => continue,
                None => {}
            }
            if nmap.values().any(|v| *v == m) {
                return false;
            }
            let (na, nb) = (&a.nodes[n], &b.nodes[m]);
            if !same_kind(&na.kind, &nb.kind) {
                return false;
            }
            nmap.insert(n, m);
            for (x, y) in na
                .inputs
                .iter()
                .zip(&nb.inputs)
                .chain(na.outputs.iter().zip(&nb.outputs))
            {
                queue.push_back((x.clone(), y.clone()));
            }
            if let (Some(x), Some(y)) = (na.kind.thin(), nb.kind.thin()) {
                queue.push_back((x.clone(), y.clone()));
            }
        } else {
            break;
        }
    }
    // Closed components: compare by kind multiset.
    let rest = |c: &Circuit, mapped: &dyn Fn(usize) -> bool| -> BTreeMap<String, usize> {
        let mut m = BTreeMap::new();
        for (i, n) in c.nodes.iter().enumerate() {
            if !mapped(i) {
                let key = match &n.kind {
                    NodeKind::Generator { name, .. } => format!("generator:{name}"),
                    k => k.tag().to_string(),
                };
                *m.entry(key).or_insert(0) += 1;
            }
        }
        m
    };
    let image: HashSet<usize> = nmap.values().copied().collect();
    rest(a, &|i| nmap.contains_key(&i)) == rest(b, &|i| image.contains(&i))
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WireJson {
    id: String,
    #[serde(rename = "type")]
    ty: ObjectExpr,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NodeJson {
    kind: String,
    ports: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    thin: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    name: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    dom: Option<Vec<ObjectExpr>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    cod: Option<Vec<ObjectExpr>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    inner: Option<Box<CircuitJson>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CircuitJson {
    wires: Vec<WireJson>,
    nodes: Vec<NodeJson>,
    inputs: Vec<String>,
    outputs: Vec<String>,
}

impl From<&Circuit> for CircuitJson {
    fn from(c: &Circuit) -> Self {
        CircuitJson {
            wires: c
                .wires
                .iter()
                .map(|w| WireJson {
                    id: w.id.clone(),
                    ty: w.ty.clone(),
                })
                .collect(),
            nodes: c
                .nodes
                .iter()
                .map(|n| {
                    let mut ports = n.inputs.clone();
                    ports.extend(n.outputs.iter().cloned());
                    let mut j = NodeJson {
                        kind: n.kind.tag().to_string(),
                        ports,
                        thin: n.kind.thin().cloned(),
                        name: None,
                        dom: None,
                        cod: None,
                        inner: None,
                    };
                    match &n.kind {
                        NodeKind::Generator { name, dom, cod } => {
                            j.name = Some(name.clone());
                            j.dom = Some(dom.clone());
                            j.cod = Some(cod.clone());
                        }
                        NodeKind::DaggerBox { inner } => j.inner = Some(Box::new((&**inner).into())),
                        _ => {}
                    }
                    j
                })
                .collect(),
            inputs: c.inputs.clone(),
            outputs: c.outputs.clone(),
        }
    }
}

fn from_json_struct(j: CircuitJson) -> Result<Circuit, CircuitError> {
    let wires: Vec<Wire> = j.wires.into_iter().map(|w| Wire { id: w.id, ty: w.ty }).collect();
    let mut nodes = Vec::new();
    for (idx, n) in j.nodes.into_iter().enumerate() {
        let need_thin = |t: Option<String>| {
            t.ok_or_else(|| CircuitError::schema("thin", format!("node {idx} needs a thinning anchor")))
        };
        let kind = match n.kind.as_str() {
            "generator" => NodeKind::Generator {
                name: n
                    .name
                    .ok_or_else(|| CircuitError::schema("name", format!("node {idx} needs a name")))?,
                dom: n
                    .dom
                    .ok_or_else(|| CircuitError::schema("dom", format!("node {idx} needs a domain list")))?,
                cod: n
                    .cod
                    .ok_or_else(|| CircuitError::schema("cod", format!("node {idx} needs a codomain list")))?,
            },
            "tensor_intro" => NodeKind::TensorIntro,
            "tensor_elim" => NodeKind::TensorElim,
            "par_intro" => NodeKind::ParIntro,
            "par_elim" => NodeKind::ParElim,
            "top_intro" => NodeKind::TopIntro,
            "top_elim" => NodeKind::TopElim {
                thin: need_thin(n.thin)?,
            },
            "bot_intro" => NodeKind::BotIntro {
                thin: need_thin(n.thin)?,
            },
            "bot_elim" => NodeKind::BotElim,
            "symmetry" => NodeKind::Symmetry,
            "dagger_box" => {
                let inner = n
                    .inner
                    .ok_or_else(|| CircuitError::schema("inner", format!("node {idx} needs an inner circuit")))?;
                NodeKind::DaggerBox {
                    inner: Box::new(from_json_struct(*inner)?),
                }
            }
            other => return Err(CircuitError::schema("kind", format!("unknown node kind `{other}`"))),
        };
        let (ni, no) = kind.arity();
        if n.ports.len() != ni + no {
            return Err(CircuitError::ill(
                idx,
                format!("expected {} ports, found {}", ni + no, n.ports.len()),
            ));
        }
        let inputs = n.ports[..ni].to_vec();
        let outputs = n.ports[ni..].to_vec();
        nodes.push(Node { kind, inputs, outputs });
    }
    Circuit::new(wires, nodes, j.inputs, j.outputs)
}

/// Parses the JSON circuit format.
pub fn parse(text: &[u8]) -> Result<Circuit, CircuitError> {
    let value: serde_json::Value = serde_json::from_slice(text).map_err(|e| CircuitError::Syntax {
        line: e.line(),
        msg: e.to_string(),
    })?;
    let j: CircuitJson = serde_json::from_value(value).map_err(|e| {
        let msg = e.to_string();
        let field = msg
            .split('`')
            .nth(1)
            .map(str::to_string)
            .unwrap_or_else(|| "circuit".to_string());
        CircuitError::Schema { field, msg }
    })?;
    from_json_struct(j)
}

pub fn to_json(c: &Circuit) -> serde_json::Value {
    serde_json::to_value(CircuitJson::from(c)).expect("circuits always serialize")
}

/// Serializes to pretty-printed JSON.
pub fn serialize(c: &Circuit) -> Vec<u8> {
    let mut v = serde_json::to_vec_pretty(&CircuitJson::from(c)).expect("circuits always serialize");
    v.push(b'\n');
    v
}

// ---------------------------------------------------------------------------
// DOT
// ---------------------------------------------------------------------------

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn node_label(k: &NodeKind) -> String {
    match k {
        NodeKind::Generator { name, .. } => name.clone(),
        NodeKind::TensorIntro => "⊗I".into(),
        NodeKind::TensorElim => "⊗E".into(),
        NodeKind::ParIntro => "⊕I".into(),
        NodeKind::ParElim => "⊕E".into(),
        NodeKind::TopIntro => "⊤I".into(),
        NodeKind::TopElim { .. } => "⊤E".into(),
        NodeKind::BotIntro { .. } => "⊥I".into(),
        NodeKind::BotElim => "⊥E".into(),
        NodeKind::Symmetry => "σ".into(),
        NodeKind::DaggerBox { .. } => "†".into(),
    }
}

fn render_body(c: &Circuit, prefix: &str, indent: &str, out: &mut String) {
    let src = c.sources();
    let tgt = c.targets();
    let endpoint_src = |s: Source| match s {
        Source::Boundary(i) => format!("{prefix}in{i}"),
        Source::Node(n, _) => format!("{prefix}n{n}"),
    };
    let endpoint_tgt = |t: Target| match t {
        Target::Boundary(i) => format!("{prefix}out{i}"),
        Target::Node(n, _) => format!("{prefix}n{n}"),
    };
    for i in 0..c.inputs.len() {
        let _ = writeln!(out, "{indent}\"{prefix}in{i}\" [shape=point];");
    }
    for i in 0..c.outputs.len() {
        let _ = writeln!(out, "{indent}\"{prefix}out{i}\" [shape=point];");
    }
    for (n, node) in c.nodes.iter().enumerate() {
        match &node.kind {
            NodeKind::DaggerBox { inner } => {
                let _ = writeln!(out, "{indent}subgraph \"cluster_{prefix}n{n}\" {{");
                let _ = writeln!(out, "{indent}  label=\"†\"; style=dashed;");
                let _ = writeln!(out, "{indent}  \"{prefix}n{n}\" [label=\"†\", shape=box];");
                render_body(inner, &format!("{prefix}n{n}."), &format!("{indent}  "), out);
                let _ = writeln!(out, "{indent}}}");
            }
            k => {
                let shape = if matches!(k, NodeKind::Generator { .. }) {
                    "box"
                } else {
                    "circle"
                };
                let _ = writeln!(
                    out,
                    "{indent}\"{prefix}n{n}\" [label=\"{}\", shape={shape}];",
                    dot_escape(&node_label(k))
                );
            }
        }
    }
    for w in &c.wires {
        let _ = writeln!(
            out,
            "{indent}\"{}\" -> \"{}\" [label=\"{}\"];",
            endpoint_src(src[&w.id]),
            endpoint_tgt(tgt[&w.id]),
            dot_escape(&w.ty.to_string())
        );
    }
    for (n, node) in c.nodes.iter().enumerate() {
        if let Some(anchor) = node.kind.thin() {
            let _ = writeln!(
                out,
                "{indent}\"{prefix}n{n}\" -> \"{}\" [style=dotted, arrowhead=none, label=\"{}\"];",
                endpoint_src(src[anchor]),
                dot_escape(anchor)
            );
        }
    }
}

/// Renders a DOT digraph. Thinning links are dotted edges from the unit node
/// to the producer of its anchor wire; dagger boxes become clusters.
pub fn render_dot(c: &Circuit) -> Vec<u8> {
    let mut out = String::from("digraph circuit {\n  rankdir=TB;\n");
    render_body(c, "", "  ", &mut out);
    out.push_str("}\n");
    out.into_bytes()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a() -> ObjectExpr {
        ObjectExpr::atom("A")
    }
    fn b() -> ObjectExpr {
        ObjectExpr::atom("B")
    }

    #[test]
    fn id_wire_composes_to_id_wire() {
        let c = compose(&Circuit::id_wire(a()), &Circuit::id_wire(a())).unwrap();
        assert!(isomorphic(&c, &Circuit::id_wire(a())));
        assert_eq!(c.wires().len(), 1);
    }

    #[test]
    fn intro_then_elim_has_two_nodes_and_four_wires() {
        let c = compose(&Circuit::tensor_intro(a(), b()), &Circuit::tensor_elim(a(), b())).unwrap();
        assert_eq!(c.nodes().len(), 2);
        // 3 + 3 wires minus 1 glued.
        assert_eq!(c.wires().len(), 5);
        assert_eq!(c.input_types(), vec![a(), b()]);
        assert_eq!(c.output_types(), vec![a(), b()]);
    }

    #[test]
    fn mismatched_types_are_reported() {
        let top = Circuit::id_wire(ObjectExpr::Top);
        let bot = Circuit::id_wire(ObjectExpr::Bot);
        match compose(&top, &bot) {
            Err(CircuitError::TypeMismatch {
                position,
                expected,
                found,
            }) => {
                assert_eq!(position, 0);
                assert_eq!(expected, ObjectExpr::Top);
                assert_eq!(found, ObjectExpr::Bot);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn tensor_parallel_concatenates_boundaries() {
        let c = tensor_parallel(&Circuit::id_wire(a()), &Circuit::id_wire(b()));
        assert_eq!(c.wires().len(), 2);
        assert_eq!(c.input_types(), vec![a(), b()]);
        let f = Circuit::tensor_intro(a(), b());
        assert!(isomorphic(&tensor_parallel(&Circuit::empty(), &f), &f));
    }

    #[test]
    fn serialize_round_trips() {
        let c = Circuit::id_wire(a());
        let back = parse(&serialize(&c)).unwrap();
        assert!(isomorphic(&back, &c));
        let d = Circuit::dagger_box(Circuit::generator("f", vec![a()], vec![b(), a()]));
        let back = parse(&serialize(&d)).unwrap();
        assert!(isomorphic(&back, &d));
    }

    #[test]
    fn dangling_wire_is_a_schema_error() {
        let text = br#"{"wires":[{"id":"x","type":{"atom":"A"}}],"nodes":[],"inputs":["x"],"outputs":["y"]}"#;
        assert!(matches!(parse(text), Err(CircuitError::Schema { .. })));
        let text = br#"{"wires":[{"id":"x","type":{"atom":"A"}},{"id":"z","type":{"atom":"A"}}],"nodes":[],"inputs":["x"],"outputs":["x"]}"#;
        assert!(matches!(parse(text), Err(CircuitError::Schema { .. })));
    }

    #[test]
    fn syntax_errors_carry_a_line() {
        let text = b"{\n\"wires\": [\n oops\n}";
        match parse(text) {
            Err(CircuitError::Syntax { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn ill_typed_node_is_a_type_error() {
        let text = br#"{"wires":[{"id":"x","type":{"atom":"A"}},{"id":"y","type":{"atom":"A"}},{"id":"z","type":{"atom":"A"}}],
            "nodes":[{"kind":"tensor_intro","ports":["x","y","z"]}],"inputs":["x","y"],"outputs":["z"]}"#;
        assert!(matches!(parse(text), Err(CircuitError::IllTyped { node: 0, .. })));
    }

    #[test]
    fn cycles_are_rejected() {
        let g = |n: &str, i: &str, o: &str| Node {
            kind: NodeKind::Generator {
                name: n.into(),
                dom: vec![a()],
                cod: vec![a()],
            },
            inputs: vec![i.into()],
            outputs: vec![o.into()],
        };
        let wires = vec![
            Wire {
                id: "p".into(),
                ty: a(),
            },
            Wire {
                id: "q".into(),
                ty: a(),
            },
        ];
        let r = Circuit::new(wires, vec![g("f", "p", "q"), g("g", "q", "p")], vec![], vec![]);
        assert_eq!(r, Err(CircuitError::Cyclic));
    }

    #[test]
    fn dot_output_mentions_edges_and_styles() {
        let dot = String::from_utf8(render_dot(&Circuit::id_wire(a()))).unwrap();
        assert_eq!(dot.matches("->").count(), 1);
        let d = String::from_utf8(render_dot(&Circuit::dagger_box(Circuit::id_wire(a())))).unwrap();
        assert!(d.contains("subgraph \"cluster_n0\""));
    }
}
