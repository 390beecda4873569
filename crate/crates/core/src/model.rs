//! Interpretation of objects and circuits in the compact matrix model.
//!
//! Both tensors become one Kronecker product with the left index major, both
//! units become the one-dimensional space, and every structural node is an
//! identity or a permutation. Circuits are evaluated by sweeping their nodes
//! in flow order over a dense tensor whose axes are the currently open wires.

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::circuit::{Circuit, CircuitError, NodeKind};
use crate::exponential::multisets;
use crate::matrix::{c, ComplexMatrix, C64};
use crate::object::ObjectExpr;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("atom `{0}` has no dimension assigned")]
    UnboundAtom(String),
    #[error("generator `{0}` has no matrix assigned")]
    UnassignedGenerator(String),
    #[error("generator `{name}` expects a {rows}x{cols} matrix, found {found_rows}x{found_cols}")]
    ShapeMismatch {
        name: String,
        rows: usize,
        cols: usize,
        found_rows: usize,
        found_cols: usize,
    },
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

/// Dimension and basis labels of one atom.
#[derive(Clone, Debug, PartialEq)]
pub struct AtomSpace {
    pub dim: usize,
    pub basis: Vec<String>,
}

impl AtomSpace {
    pub fn new(dim: usize) -> Self {
        AtomSpace {
            dim,
            basis: (0..dim).map(|i| i.to_string()).collect(),
        }
    }

    pub fn with_labels(labels: &[&str]) -> Self {
        AtomSpace {
            dim: labels.len(),
            basis: labels.iter().map(|s| s.to_string()).collect(),
        }
    }
}

/// Atom spaces, the degree bound for `!`/`?`, and generator matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelEnv {
    pub atoms: BTreeMap<String, AtomSpace>,
    pub degree: usize,
    pub generators: HashMap<String, ComplexMatrix>,
}

impl Default for ModelEnv {
    fn default() -> Self {
        ModelEnv {
            atoms: BTreeMap::new(),
            degree: 3,
            generators: HashMap::new(),
        }
    }
}

impl ModelEnv {
    pub fn new(degree: usize) -> Self {
        ModelEnv {
            degree,
            ..Default::default()
        }
    }

    pub fn with_atom(mut self, name: &str, space: AtomSpace) -> Self {
        self.atoms.insert(name.to_string(), space);
        self
    }

    pub fn assign(&mut self, name: &str, m: ComplexMatrix) {
        self.generators.insert(name.to_string(), m);
    }

    /// Dimension of the interpretation of `t`.
    pub fn dim(&self, t: &ObjectExpr) -> Result<usize, ModelError> {
        Ok(match t {
            ObjectExpr::Atom(n) => self.atoms.get(n).ok_or_else(|| ModelError::UnboundAtom(n.clone()))?.dim,
            ObjectExpr::Top | ObjectExpr::Bot => 1,
            ObjectExpr::Tensor(l, r) | ObjectExpr::Par(l, r) => self.dim(l)? * self.dim(r)?,
            ObjectExpr::Dagger(x) => self.dim(x)?,
            ObjectExpr::Bang(x) | ObjectExpr::Quest(x) => crate::exponential::multiset_count(self.dim(x)?, self.degree),
        })
    }

    /// Dimension of a list of wires read side by side.
    pub fn dims_product(&self, ts: &[ObjectExpr]) -> Result<usize, ModelError> {
        ts.iter().try_fold(1usize, |acc, t| Ok(acc * self.dim(t)?))
    }

    /// Ordered basis labels of the interpretation of `t`.
    pub fn interp(&self, t: &ObjectExpr) -> Result<Vec<String>, ModelError> {
        Ok(match t {
            ObjectExpr::Atom(n) => self
                .atoms
                .get(n)
                .ok_or_else(|| ModelError::UnboundAtom(n.clone()))?
                .basis
                .clone(),
            ObjectExpr::Top | ObjectExpr::Bot => vec!["*".to_string()],
            ObjectExpr::Tensor(l, r) | ObjectExpr::Par(l, r) => {
                let (ls, rs) = (self.interp(l)?, self.interp(r)?);
                ls.iter()
                    .flat_map(|x| rs.iter().map(move |y| format!("{x}{y}")))
                    .collect()
            }
            ObjectExpr::Dagger(x) => self.interp(x)?,
            ObjectExpr::Bang(x) | ObjectExpr::Quest(x) => {
                let base = self.interp(x)?;
                multisets(base.len(), self.degree)
                    .into_iter()
                    .map(|m| {
                        let items: Vec<&str> = m.iter().map(|&i| base[i].as_str()).collect();
                        format!("[{}]", items.join(","))
                    })
                    .collect()
            }
        })
    }
}

/// Free function form of [`ModelEnv::interp`]: `(dim, labels)`.
pub fn interp(t: &ObjectExpr, env: &ModelEnv) -> Result<(usize, Vec<String>), ModelError> {
    let labels = env.interp(t)?;
    Ok((labels.len(), labels))
}

/// Row-major dense tensor.
#[derive(Clone, Debug)]
struct Tensor {
    data: Vec<C64>,
    shape: Vec<usize>,
}

impl Tensor {
    fn permute(&self, perm: &[usize]) -> Tensor {
        let rank = self.shape.len();
        debug_assert_eq!(perm.len(), rank);
        if perm.iter().enumerate().all(|(i, &p)| i == p) {
            return self.clone();
        }
        let mut old_strides = vec![1usize; rank];
        for i in (0..rank.saturating_sub(1)).rev() {
            old_strides[i] = old_strides[i + 1] * self.shape[i + 1];
        }
        let new_shape: Vec<usize> = perm.iter().map(|&p| self.shape[p]).collect();
        let strides: Vec<usize> = perm.iter().map(|&p| old_strides[p]).collect();
        let total: usize = new_shape.iter().product();
        let mut data = Vec::with_capacity(total);
        if total > 0 {
            let mut idx = vec![0usize; rank];
            let mut offset = 0usize;
            for _ in 0..total {
                data.push(self.data[offset]);
                // Odometer increment over the new shape.
                let mut ax = rank;
                while ax > 0 {
                    ax -= 1;
                    idx[ax] += 1;
                    offset += strides[ax];
                    if idx[ax] < new_shape[ax] {
                        break;
                    }
                    offset -= strides[ax] * new_shape[ax];
                    idx[ax] = 0;
                }
            }
        }
        Tensor { data, shape: new_shape }
    }
}

/// Evaluation state: axis 0 indexes the circuit input space, the other axes
/// are the open wires listed in `open`.
struct State {
    t: Tensor,
    open: Vec<String>,
}

impl State {
    fn axis(&self, w: &str) -> usize {
        1 + self.open.iter().position(|x| x == w).expect("wire is open")
    }

    /// Moves the axes of `wires` to the end in the given order.
    fn bring_to_end(&mut self, wires: &[String]) {
        let picked: Vec<usize> = wires.iter().map(|w| self.axis(w)).collect();
        let mut perm: Vec<usize> = (0..self.t.shape.len()).filter(|a| !picked.contains(a)).collect();
        perm.extend(&picked);
        self.t = self.t.permute(&perm);
        let mut open: Vec<String> = self.open.iter().filter(|w| !wires.contains(w)).cloned().collect();
        open.extend(wires.iter().cloned());
        self.open = open;
    }

    /// Replaces the trailing `ins` axes with `outs` axes, either by a matrix
    /// or, when `m` is `None`, by a pure reshape.
    fn replace(&mut self, ins: &[String], outs: &[(String, usize)], m: Option<&ComplexMatrix>) {
        self.bring_to_end(ins);
        let k = ins.len();
        let keep = self.t.shape.len() - k;
        let in_dim: usize = self.t.shape[keep..].iter().product();
        let out_dim: usize = outs.iter().map(|(_, d)| d).product();
        let rest: usize = self.t.shape[..keep].iter().product();
        if let Some(m) = m {
            debug_assert_eq!((m.rows(), m.cols()), (out_dim, in_dim));
            let x = nalgebra::DMatrix::from_column_slice(in_dim, rest, &self.t.data);
            let y = &m.0 * x;
            self.t.data = y.as_slice().to_vec();
        } else {
            debug_assert_eq!(in_dim, out_dim);
        }
        self.t.shape.truncate(keep);
        self.t.shape.extend(outs.iter().map(|(_, d)| *d));
        self.open.truncate(keep - 1);
        self.open.extend(outs.iter().map(|(w, _)| w.clone()));
    }
}

/// Flow-respecting node order that keeps the open tensor small.
///
/// Among the nodes whose inputs are all available, the one with the
/// smallest ratio of output size to input size runs first, ties broken by
/// node index. Cups are therefore opened only when nothing can be
/// contracted.
fn contraction_order(circ: &Circuit, dims: &HashMap<&str, usize>) -> Result<Vec<usize>, ModelError> {
    circ.topological_order()?;
    let n = circ.nodes().len();
    let mut available: std::collections::HashSet<&str> = circ.inputs().iter().map(String::as_str).collect();
    let mut done = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let log_size = |ws: &[String]| -> f64 { ws.iter().map(|w| (dims[w.as_str()].max(1) as f64).ln()).sum() };
    let gain: Vec<f64> = circ
        .nodes()
        .iter()
        .map(|node| log_size(&node.outputs) - log_size(&node.inputs))
        .collect();
    while order.len() < n {
        let next = (0..n)
            .filter(|&i| !done[i] && circ.nodes()[i].inputs.iter().all(|w| available.contains(w.as_str())))
            .min_by(|&a, &b| gain[a].total_cmp(&gain[b]).then(a.cmp(&b)))
            .ok_or(ModelError::Circuit(CircuitError::Cyclic))?;
        done[next] = true;
        available.extend(circ.nodes()[next].outputs.iter().map(String::as_str));
        order.push(next);
    }
    Ok(order)
}

/// Evaluates `c` to a matrix from the input space to the output space.
///
/// LDC validity is not required: the model does not tell the two tensors
/// apart, so invalid circuits still evaluate.
pub fn evaluate(circ: &Circuit, env: &ModelEnv) -> Result<ComplexMatrix, ModelError> {
    let dims: HashMap<&str, usize> = circ
        .wires()
        .iter()
        .map(|w| Ok((w.id.as_str(), env.dim(&w.ty)?)))
        .collect::<Result<_, ModelError>>()?;
    let in_dims: Vec<usize> = circ.inputs().iter().map(|w| dims[w.as_str()]).collect();
    let n_in: usize = in_dims.iter().product();
    let mut data = vec![c(0.0, 0.0); n_in * n_in];
    for i in 0..n_in {
        data[i * n_in + i] = c(1.0, 0.0);
    }
    let mut shape = vec![n_in];
    shape.extend(&in_dims);
    let mut st = State {
        t: Tensor { data, shape },
        open: circ.inputs().to_vec(),
    };
    let outs_of =
        |ws: &[String]| -> Vec<(String, usize)> { ws.iter().map(|w| (w.clone(), dims[w.as_str()])).collect() };
    for idx in contraction_order(circ, &dims)? {
        let node = &circ.nodes()[idx];
        match &node.kind {
            NodeKind::Generator { name, dom, cod } => {
                let m = env
                    .generators
                    .get(name)
                    .ok_or_else(|| ModelError::UnassignedGenerator(name.clone()))?;
                let (rows, cols) = (env.dims_product(cod)?, env.dims_product(dom)?);
                if m.rows() != rows || m.cols() != cols {
                    return Err(ModelError::ShapeMismatch {
                        name: name.clone(),
                        rows,
                        cols,
                        found_rows: m.rows(),
                        found_cols: m.cols(),
                    });
                }
                st.replace(&node.inputs, &outs_of(&node.outputs), Some(m));
            }
            NodeKind::DaggerBox { inner } => {
                let m = evaluate(inner, env)?.adjoint();
                st.replace(&node.inputs, &outs_of(&node.outputs), Some(&m));
            }
            NodeKind::Symmetry => {
                // Relabel only: the axis of in0 now carries out1 and vice versa.
                for w in st.open.iter_mut() {
                    if *w == node.inputs[0] {
                        *w = node.outputs[1].clone();
                    } else if *w == node.inputs[1] {
                        *w = node.outputs[0].clone();
                    }
                }
            }
            _ => st.replace(&node.inputs, &outs_of(&node.outputs), None),
        }
    }
    st.bring_to_end(circ.outputs());
    let n_out: usize = circ.outputs().iter().map(|w| dims[w.as_str()]).product();
    Ok(ComplexMatrix(nalgebra::DMatrix::from_column_slice(
        n_out, n_in, &st.t.data,
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{compose, tensor_parallel};
    use crate::matrix::residual;

    fn qubit_env() -> ModelEnv {
        ModelEnv::new(3).with_atom("A", AtomSpace::new(2))
    }

    #[test]
    fn tensor_labels_are_left_major() {
        let env = qubit_env();
        let a = ObjectExpr::atom("A");
        let (d, l) = interp(&ObjectExpr::tensor(a.clone(), a), &env).unwrap();
        assert_eq!(d, 4);
        assert_eq!(l, vec!["00", "01", "10", "11"]);
        assert_eq!(interp(&ObjectExpr::Top, &env).unwrap(), (1, vec!["*".to_string()]));
    }

    #[test]
    fn bang_dimension_counts_multisets() {
        let env = qubit_env();
        let (d, l) = interp(&ObjectExpr::bang(ObjectExpr::atom("A")), &env).unwrap();
        assert_eq!(d, 10);
        assert_eq!(l[0], "[]");
        assert_eq!(l[3], "[0,0]");
        assert_eq!(l[9], "[1,1,1]");
        assert!(matches!(
            env.dim(&ObjectExpr::atom("Z")),
            Err(ModelError::UnboundAtom(_))
        ));
    }

    #[test]
    fn generator_evaluates_to_its_matrix() {
        let mut env = qubit_env();
        let a = ObjectExpr::atom("A");
        let f = ComplexMatrix::from_real(2, 2, &[1.0, 2.0, 3.0, 4.0]);
        env.assign("f", f.clone());
        let circ = Circuit::generator("f", vec![a.clone()], vec![a]);
        assert_eq!(evaluate(&circ, &env).unwrap(), f);
    }

    #[test]
    fn parallel_is_kronecker() {
        let mut env = qubit_env().with_atom("B", AtomSpace::new(3));
        let (a, b) = (ObjectExpr::atom("A"), ObjectExpr::atom("B"));
        let f = ComplexMatrix::from_real(2, 2, &[1.0, 2.0, 3.0, 4.0]);
        let g = ComplexMatrix::from_fn(3, 3, |i, j| c((i * 3 + j) as f64, 1.0));
        env.assign("f", f.clone());
        env.assign("g", g.clone());
        let circ = tensor_parallel(
            &Circuit::generator("f", vec![a.clone()], vec![a]),
            &Circuit::generator("g", vec![b.clone()], vec![b]),
        );
        assert!(residual(&evaluate(&circ, &env).unwrap(), &f.kron(&g)) < 1e-14);
    }

    #[test]
    fn symmetry_is_the_swap() {
        let env = qubit_env().with_atom("B", AtomSpace::new(3));
        let circ = Circuit::symmetry(ObjectExpr::atom("A"), ObjectExpr::atom("B"));
        assert_eq!(evaluate(&circ, &env).unwrap(), ComplexMatrix::swap(2, 3));
    }

    #[test]
    fn dagger_box_is_conjugate_transpose() {
        let mut env = qubit_env();
        let a = ObjectExpr::atom("A");
        let f = ComplexMatrix::from_row_major(4, 2, &(0..8).map(|k| c(k as f64, -(k as f64))).collect::<Vec<_>>());
        env.assign("f", f.clone());
        let inner = Circuit::generator("f", vec![a.clone()], vec![a.clone(), a]);
        let m = evaluate(&Circuit::dagger_box(inner), &env).unwrap();
        assert_eq!(m, f.adjoint());
    }

    #[test]
    fn intro_then_elim_is_identity() {
        let env = qubit_env().with_atom("B", AtomSpace::new(3));
        let (a, b) = (ObjectExpr::atom("A"), ObjectExpr::atom("B"));
        let circ = compose(
            &Circuit::tensor_intro(a.clone(), b.clone()),
            &Circuit::tensor_elim(a, b),
        )
        .unwrap();
        assert_eq!(evaluate(&circ, &env).unwrap(), ComplexMatrix::identity(6));
    }

    #[test]
    fn missing_generator_is_reported() {
        let env = qubit_env();
        let a = ObjectExpr::atom("A");
        let circ = Circuit::generator("h", vec![a.clone()], vec![a]);
        assert_eq!(evaluate(&circ, &env), Err(ModelError::UnassignedGenerator("h".into())));
    }
}
