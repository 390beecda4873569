//! Degree-truncated free exponential on the matrix model.
//!
//! `!A` is spanned by multisets over the basis of `A` of size at most `d`,
//! listed by size and then lexicographically. The comultiplication uses the
//! divided-power convention: `Δ[m]` is the sum of `m1 ⊗ m2` over every
//! distinct ordered pair of sub-multisets with `m1 ⊎ m2 = m`. All structure
//! maps are integer matrices. `?A` uses the same space with daggered maps.

use std::collections::HashMap;

use thiserror::Error;

use crate::matrix::{c, ComplexMatrix, MatrixError, C64};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExpError {
    #[error("input is not a comonoid (residual {0:e})")]
    NotAComonoid(f64),
    #[error("lift constraints are inconsistent (residual {0:e})")]
    LiftFailure(f64),
    #[error("shape mismatch: expected {expected_rows}x{expected_cols}, found {rows}x{cols}")]
    ShapeMismatch {
        expected_rows: usize,
        expected_cols: usize,
        rows: usize,
        cols: usize,
    },
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Number of multisets of size at most `d` over `n` symbols.
pub fn multiset_count(n: usize, d: usize) -> usize {
    if n == 0 {
        return 1;
    }
    (0..=d).map(|k| binomial(n + k - 1, k)).sum()
}

/// All multisets (as sorted index vectors) of size at most `d` over `0..n`,
/// ordered by size and then lexicographically.
pub fn multisets(n: usize, d: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(n, k, i, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::with_capacity(multiset_count(n, d));
    for k in 0..=d {
        if n == 0 && k > 0 {
            break;
        }
        rec(n, k, 0, &mut Vec::new(), &mut out);
    }
    out
}

/// Distinct orderings of a sorted sequence.
pub fn orderings<T: Ord + Clone>(sorted: &[T]) -> Vec<Vec<T>> {
    let mut cur: Vec<T> = sorted.to_vec();
    cur.sort();
    let mut out = vec![cur.clone()];
    // Lexicographic next-permutation enumerates each distinct ordering once.
    loop {
        let n = cur.len();
        if n < 2 {
            break;
        }
        let mut i = n - 1;
        while i > 0 && cur[i - 1] >= cur[i] {
            i -= 1;
        }
        if i == 0 {
            break;
        }
        let mut j = n - 1;
        while cur[j] <= cur[i - 1] {
            j -= 1;
        }
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(cur.clone());
    }
    out
}

/// Number of distinct orderings of a multiset.
pub fn ordering_count<T: Ord>(sorted: &[T]) -> usize {
    let mut total = 1usize;
    let mut run = 0usize;
    for (i, x) in sorted.iter().enumerate() {
        run = if i > 0 && sorted[i - 1] == *x { run + 1 } else { 1 };
        total = total * (i + 1) / run;
    }
    total
}

/// Distinct ordered splittings `m = m1 ⊎ m2` of a sorted multiset.
pub fn sub_multiset_pairs(m: &[usize]) -> Vec<(Vec<usize>, Vec<usize>)> {
    // Group into (symbol, multiplicity) and choose how many of each go left.
    let mut groups: Vec<(usize, usize)> = Vec::new();
    for &x in m {
        match groups.last_mut() {
            Some((s, k)) if *s == x => *k += 1,
            _ => groups.push((x, 1)),
        }
    }
    let mut out = vec![(Vec::new(), Vec::new())];
    for (s, k) in groups {
        let mut next = Vec::with_capacity(out.len() * (k + 1));
        for (l, r) in &out {
            for j in 0..=k {
                let mut l2: Vec<usize> = l.clone();
                l2.extend(std::iter::repeat_n(s, j));
                let mut r2: Vec<usize> = r.clone();
                r2.extend(std::iter::repeat_n(s, k - j));
                next.push((l2, r2));
            }
        }
        out = next;
    }
    out
}

/// Basis of a truncated `!A`.
#[derive(Clone, Debug, PartialEq)]
pub struct MultisetBasis {
    pub base: Vec<String>,
    pub degree: usize,
    pub elements: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
}

impl MultisetBasis {
    pub fn new(base: Vec<String>, degree: usize) -> Self {
        let elements = multisets(base.len(), degree);
        let index = elements.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        MultisetBasis {
            base,
            degree,
            elements,
            index,
        }
    }

    /// Basis over `0..n` with numeric labels.
    pub fn numeric(n: usize, degree: usize) -> Self {
        Self::new((0..n).map(|i| i.to_string()).collect(), degree)
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn base_dim(&self) -> usize {
        self.base.len()
    }

    pub fn index_of(&self, m: &[usize]) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn degree_of(&self, i: usize) -> usize {
        self.elements[i].len()
    }

    pub fn labels(&self) -> Vec<String> {
        self.elements
            .iter()
            .map(|m| {
                let items: Vec<&str> = m.iter().map(|&i| self.base[i].as_str()).collect();
                format!("[{}]", items.join(","))
            })
            .collect()
    }
}

/// Nonzero entries `(row, col, value)` of a matrix.
fn nonzeros(m: &ComplexMatrix) -> Vec<(usize, usize, C64)> {
    let mut out = Vec::new();
    for j in 0..m.cols() {
        for i in 0..m.rows() {
            let v = m.get(i, j);
            if v != c(0.0, 0.0) {
                out.push((i, j, v));
            }
        }
    }
    out
}

fn transposed(nz: &[(usize, usize, C64)]) -> Vec<(usize, usize, C64)> {
    nz.iter().map(|&(i, j, v)| (j, i, v)).collect()
}

/// `S * b` for a sparse `S` with `rows` rows.
fn sparse_mul(nz: &[(usize, usize, C64)], rows: usize, b: &ComplexMatrix) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(rows, b.cols());
    for &(i, k, v) in nz {
        for j in 0..b.cols() {
            out.0[(i, j)] += v * b.0[(k, j)];
        }
    }
    out
}

/// `a * S` for a sparse `S` with `cols` columns.
fn mul_sparse(a: &ComplexMatrix, nz: &[(usize, usize, C64)], cols: usize) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(a.rows(), cols);
    for &(k, j, v) in nz {
        for i in 0..a.rows() {
            out.0[(i, j)] += a.0[(i, k)] * v;
        }
    }
    out
}

/// A comonoid in the matrix model: `delta: C -> C ⊗ C`, `counit: C -> ⊤`.
#[derive(Clone, Debug)]
pub struct Comonoid {
    pub delta: ComplexMatrix,
    pub counit: ComplexMatrix,
}

/// A monoid in the matrix model: `mult: M ⊗ M -> M`, `unit: ⊤ -> M`.
#[derive(Clone, Debug)]
pub struct Monoid {
    pub mult: ComplexMatrix,
    pub unit: ComplexMatrix,
}

impl Comonoid {
    pub fn dim(&self) -> usize {
        self.delta.cols()
    }

    /// Worst residual of coassociativity and the two counit laws.
    ///
    /// Small comonoids are checked on every basis vector. Above 16
    /// dimensions the check uses three fixed pseudo-random probe vectors,
    /// which keeps the cost quadratic in the comultiplication size.
    pub fn law_residual(&self) -> f64 {
        let n = self.dim();
        let probes: Vec<Vec<C64>> = if n <= 16 {
            (0..n)
                .map(|j| (0..n).map(|i| c(if i == j { 1.0 } else { 0.0 }, 0.0)).collect())
                .collect()
        } else {
            let mut state = 0x9e37_79b9_7f4a_7c15u64;
            let mut next = move || {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
            };
            (0..3).map(|_| (0..n).map(|_| c(next(), next())).collect()).collect()
        };
        let nz = nonzeros(&self.delta);
        let mut worst = 0.0f64;
        for x in probes {
            let xv = ComplexMatrix::column(&x);
            let dx = sparse_mul(&nz, n * n, &xv);
            // V[a, b] = (Δx)[a*n + b].
            let v = ComplexMatrix::from_fn(n, n, |a, b| dx.get(a * n + b, 0));
            let left = sparse_mul(&nz, n * n, &v); // rows (a1,a2), cols b
            let right = mul_sparse(&v, &transposed(&nz), n * n); // rows a, cols (b1,b2)
            for a1 in 0..n {
                for a2 in 0..n {
                    for b in 0..n {
                        let l = left.get(a1 * n + a2, b);
                        let r = right.get(a1, a2 * n + b);
                        worst = worst.max((l - r).norm());
                    }
                }
            }
            let cl = self.counit.mul(&v); // 1 x n
            let cr = v.mul(&self.counit.transpose()); // n x 1
            for (a, &xa) in x.iter().enumerate() {
                worst = worst.max((cl.get(0, a) - xa).norm());
                worst = worst.max((cr.get(a, 0) - xa).norm());
            }
        }
        worst
    }

    /// The trivial comonoid on the unit.
    pub fn trivial() -> Self {
        Comonoid {
            delta: ComplexMatrix::identity(1),
            counit: ComplexMatrix::identity(1),
        }
    }
}

impl Monoid {
    pub fn dim(&self) -> usize {
        self.mult.rows()
    }

    /// The comonoid obtained by daggering both maps.
    pub fn dagger(&self) -> Comonoid {
        Comonoid {
            delta: self.mult.adjoint(),
            counit: self.unit.adjoint(),
        }
    }
}

/// Structure maps of the truncated exponential on one base space.
#[derive(Clone, Debug)]
pub struct ExpStructure {
    pub basis: MultisetBasis,
    /// Basis of `!!A`, multisets over the basis of `!A`.
    pub outer: MultisetBasis,
    /// `Δ: !A -> !A ⊗ !A`.
    pub delta_co: ComplexMatrix,
    /// `e: !A -> ⊤`.
    pub counit_e: ComplexMatrix,
    /// `ε: !A -> A`.
    pub eps: ComplexMatrix,
    /// `δ: !A -> !!A`.
    pub delta: ComplexMatrix,
    /// `∇ = Δ†`.
    pub nabla: ComplexMatrix,
    /// `u = e†`.
    pub unit_u: ComplexMatrix,
    /// `η = ε†`.
    pub eta: ComplexMatrix,
    /// `μ = δ†`.
    pub mu: ComplexMatrix,
    /// `s: (!A)† -> ?(A†)`, the identity here.
    pub s_iso: ComplexMatrix,
    /// `t: (?A)† -> !(A†)`, the identity here.
    pub t_iso: ComplexMatrix,
}

impl ExpStructure {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn degree(&self) -> usize {
        self.basis.degree
    }

    pub fn comonoid(&self) -> Comonoid {
        Comonoid {
            delta: self.delta_co.clone(),
            counit: self.counit_e.clone(),
        }
    }
}

/// Builds `Δ, e, ε, δ` and their daggers for base labels `base` at degree `d`.
pub fn build_exp(base: &[String], d: usize) -> ExpStructure {
    let basis = MultisetBasis::new(base.to_vec(), d);
    let n = basis.len();
    let one = c(1.0, 0.0);
    let mut delta_co = ComplexMatrix::zeros(n * n, n);
    for (j, m) in basis.elements.iter().enumerate() {
        for (l, r) in sub_multiset_pairs(m) {
            let (li, ri) = (basis.index_of(&l).unwrap(), basis.index_of(&r).unwrap());
            delta_co.set(li * n + ri, j, one);
        }
    }
    let mut counit_e = ComplexMatrix::zeros(1, n);
    counit_e.set(0, 0, one);
    let mut eps = ComplexMatrix::zeros(base.len(), n);
    for a in 0..base.len() {
        eps.set(a, basis.index_of(&[a]).unwrap(), one);
    }
    let outer = MultisetBasis::new(basis.labels(), d);
    let delta = comultiplication_into_outer(&basis, &outer);
    ExpStructure {
        nabla: delta_co.adjoint(),
        unit_u: counit_e.adjoint(),
        eta: eps.adjoint(),
        mu: delta.adjoint(),
        s_iso: ComplexMatrix::identity(n),
        t_iso: ComplexMatrix::identity(n),
        basis,
        outer,
        delta_co,
        counit_e,
        eps,
        delta,
    }
}

/// Closed form of `δ`: `δ[m] = Σ M` over multisets `M` of basis elements of
/// `!A` whose union is `m`, each distinct `M` once, with `|M| <= d`.
fn comultiplication_into_outer(inner: &MultisetBasis, outer: &MultisetBasis) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(outer.len(), inner.len());
    for (row, big) in outer.elements.iter().enumerate() {
        let mut union: Vec<usize> = big.iter().flat_map(|&i| inner.elements[i].iter().copied()).collect();
        union.sort();
        if let Some(col) = inner.index_of(&union) {
            out.set(row, col, c(1.0, 0.0));
        }
    }
    out
}

/// Index of a sequence in `X^{⊗n}` with left-major layout.
fn seq_index(w: &[usize], base: usize) -> usize {
    w.iter().fold(0, |acc, &x| acc * base + x)
}

/// `!f: !A -> !B` for `f: A -> B` given as a `|B| x |A|` matrix.
///
/// Each multiset `m` is embedded as the sum of its distinct orderings, `f` is
/// applied factorwise, and the coefficient of `m'` is read off its sorted
/// ordering (equivalently the average over its orderings).
pub fn bang_functor(f: &ComplexMatrix, a: &MultisetBasis, b: &MultisetBasis) -> Result<ComplexMatrix, ExpError> {
    if f.rows() != b.base_dim() || f.cols() != a.base_dim() {
        return Err(ExpError::ShapeMismatch {
            expected_rows: b.base_dim(),
            expected_cols: a.base_dim(),
            rows: f.rows(),
            cols: f.cols(),
        });
    }
    let mut out = ComplexMatrix::zeros(b.len(), a.len());
    for (j, m) in a.elements.iter().enumerate() {
        let ords = orderings(m);
        for (i, mp) in b.elements.iter().enumerate() {
            if mp.len() != m.len() {
                continue;
            }
            let mut acc = c(0.0, 0.0);
            for w in &ords {
                let mut p = c(1.0, 0.0);
                for (x, y) in mp.iter().zip(w) {
                    p *= f.get(*x, *y);
                }
                acc += p;
            }
            out.set(i, j, acc);
        }
    }
    Ok(out)
}

/// Total degree of each basis vector of `!A ⊗ !A`.
pub fn pair_degrees(x: &MultisetBasis, y: &MultisetBasis) -> Vec<usize> {
    let mut out = Vec::with_capacity(x.len() * y.len());
    for i in 0..x.len() {
        for j in 0..y.len() {
            out.push(x.degree_of(i) + y.degree_of(j));
        }
    }
    out
}

/// Keeps the rows whose index satisfies `keep`, zeroing the rest.
pub fn mask_rows(m: &ComplexMatrix, keep: impl Fn(usize) -> bool) -> ComplexMatrix {
    ComplexMatrix::from_fn(
        m.rows(),
        m.cols(),
        |i, j| if keep(i) { m.get(i, j) } else { c(0.0, 0.0) },
    )
}

/// Keeps the columns whose index satisfies `keep`, zeroing the rest.
pub fn mask_cols(m: &ComplexMatrix, keep: impl Fn(usize) -> bool) -> ComplexMatrix {
    ComplexMatrix::from_fn(
        m.rows(),
        m.cols(),
        |i, j| if keep(j) { m.get(i, j) } else { c(0.0, 0.0) },
    )
}

fn relative_ok(res: f64, scale: f64, tol: f64) -> bool {
    res <= tol * scale.max(1.0)
}

/// The unique comonoid morphism `f♭: C -> !A` with `f♭;ε = f`.
///
/// Degree `n` is solved from `f♭;Δⁿ;εⁿ = Δ_Cⁿ;fⁿ`: the right side is built
/// as `Tₙ = (f ⊗ Tₙ₋₁)·Δ_C`, and the multiset coefficient is its least-squares
/// value over the orderings of that multiset. Inconsistent systems (a
/// non-symmetric `Tₙ`) fail with [`ExpError::LiftFailure`]. The morphism
/// laws are re-verified on the degree window before returning.
pub fn lift_flat(
    cm: &Comonoid,
    f: &ComplexMatrix,
    target: &MultisetBasis,
    tol: f64,
) -> Result<ComplexMatrix, ExpError> {
    let dc = cm.dim();
    let na = target.base_dim();
    if f.rows() != na || f.cols() != dc {
        return Err(ExpError::ShapeMismatch {
            expected_rows: na,
            expected_cols: dc,
            rows: f.rows(),
            cols: f.cols(),
        });
    }
    let law = cm.law_residual();
    let scale = cm.delta.max_abs().max(cm.counit.max_abs());
    if !relative_ok(law, scale, tol) {
        return Err(ExpError::NotAComonoid(law));
    }
    let d = target.degree;
    let mut out = ComplexMatrix::zeros(target.len(), dc);
    let mut t = cm.counit.clone();
    let mut worst = 0.0f64;
    let mut tscale = 1.0f64;
    let nz = nonzeros(&cm.delta);
    for n in 0..=d {
        if n == 1 {
            t = f.clone();
        } else if n > 1 {
            t = mul_sparse(&f.kron(&t), &nz, dc);
        }
        tscale = tscale.max(t.max_abs());
        for (i, m) in target.elements.iter().enumerate() {
            if m.len() != n {
                continue;
            }
            let ords = orderings(m);
            let k = ords.len() as f64;
            for col in 0..dc {
                let vals: Vec<C64> = ords.iter().map(|w| t.get(seq_index(w, na), col)).collect();
                let mean = vals.iter().fold(c(0.0, 0.0), |a, b| a + b) / k;
                for v in &vals {
                    worst = worst.max((v - mean).norm());
                }
                out.set(i, col, mean);
            }
        }
    }
    if !relative_ok(worst, tscale, tol) {
        return Err(ExpError::LiftFailure(worst));
    }
    // Post-check: counit and comultiplication laws on the window.
    let r_counit = ComplexMatrix::from_fn(1, dc, |_, col| out.get(0, col))
        .sub(&cm.counit)
        .max_abs();
    let r_delta = comultiplication_residual(cm, &out, target);
    let res = r_counit.max(r_delta);
    if !relative_ok(res, tscale, tol) {
        return Err(ExpError::LiftFailure(res));
    }
    Ok(out)
}

/// Worst entry of `F;Δ - Δ_C;(F ⊗ F)` over output pairs of total degree at
/// most `d`. Computed one input column at a time so `!!A` targets stay cheap.
fn comultiplication_residual(cm: &Comonoid, out: &ComplexMatrix, target: &MultisetBasis) -> f64 {
    let dc = cm.dim();
    let d = target.degree;
    let mut worst = 0.0f64;
    for col in 0..dc {
        let w = ComplexMatrix::from_fn(dc, dc, |x, y| cm.delta.get(x * dc + y, col));
        let rhs = out.mul(&w).mul(&out.transpose());
        for (i, m1) in target.elements.iter().enumerate() {
            for (j, m2) in target.elements.iter().enumerate() {
                if m1.len() + m2.len() > d {
                    continue;
                }
                let mut u: Vec<usize> = m1.iter().chain(m2.iter()).copied().collect();
                u.sort();
                let lhs = out.get(target.index_of(&u).expect("union is within degree"), col);
                worst = worst.max((lhs - rhs.get(i, j)).norm());
            }
        }
    }
    worst
}

/// The unique monoid morphism `g♯: ?B -> M` with `η;g♯ = g`, obtained by
/// daggering [`lift_flat`] applied to the daggered data.
pub fn lift_sharp(m: &Monoid, g: &ComplexMatrix, source: &MultisetBasis, tol: f64) -> Result<ComplexMatrix, ExpError> {
    Ok(lift_flat(&m.dagger(), &g.adjoint(), source, tol)?.adjoint())
}

/// Worst entry of `δ;!δ - δ;δ` on the window where no intermediate wire
/// exceeds degree `d`.
///
/// `!!!A` is far too large to build densely, so both sides are expanded
/// column by column as sparse vectors keyed by multisets of `!!A` basis
/// indices. An entry `{o_1, ..., o_k}` is compared when the `o_j` together
/// hold at most `d` elements of `!A`.
pub fn comonad_coassoc_residual(exp: &ExpStructure) -> f64 {
    let d = exp.degree();
    let outer = &exp.outer;
    // Sparse columns of δ: the !!A indices hit by each !A basis vector.
    let delta_cols: Vec<Vec<usize>> = (0..exp.dim())
        .map(|j| {
            (0..outer.len())
                .filter(|&i| exp.delta.get(i, j) != c(0.0, 0.0))
                .collect()
        })
        .collect();
    let size = |o: usize| outer.elements[o].len();
    let mut worst = 0.0f64;
    for col in delta_cols.iter() {
        let mut lhs: HashMap<Vec<usize>, f64> = HashMap::new();
        let mut rhs: HashMap<Vec<usize>, f64> = HashMap::new();
        for &big in col {
            let parts = &outer.elements[big];
            // δ;!δ: every distinct ordering of the parts, δ applied to each
            // part, read off at non-decreasing index sequences.
            for w in orderings(parts) {
                let mut seqs: Vec<Vec<usize>> = vec![Vec::new()];
                for &part in &w {
                    seqs = seqs
                        .into_iter()
                        .flat_map(|s| {
                            delta_cols[part].iter().filter_map(move |&o| {
                                if s.last().is_some_and(|&l| l > o) {
                                    None
                                } else {
                                    let mut t = s.clone();
                                    t.push(o);
                                    Some(t)
                                }
                            })
                        })
                        .collect();
                }
                for s in seqs {
                    *lhs.entry(s).or_default() += 1.0;
                }
            }
            // δ;δ at !!A: multisets of !!A elements whose union is `big`.
            let subs: Vec<usize> = (0..outer.len())
                .filter(|&o| is_sub_multiset(&outer.elements[o], parts))
                .collect();
            let mut stack: Vec<(Vec<usize>, usize)> = vec![(Vec::new(), 0)];
            while let Some((cur, start)) = stack.pop() {
                let mut union: Vec<usize> = cur.iter().flat_map(|&o| outer.elements[o].iter().copied()).collect();
                union.sort();
                if union == *parts {
                    *rhs.entry(cur.clone()).or_default() += 1.0;
                }
                if cur.len() < d {
                    for (k, &o) in subs.iter().enumerate().skip(start) {
                        let mut next = cur.clone();
                        next.push(o);
                        stack.push((next, k));
                    }
                }
            }
        }
        let in_window = |m: &Vec<usize>| m.iter().map(|&o| size(o)).sum::<usize>() <= d;
        for (k, v) in lhs.iter().filter(|(k, _)| in_window(k)) {
            worst = worst.max((v - rhs.get(k).copied().unwrap_or(0.0)).abs());
        }
        for (k, v) in rhs.iter().filter(|(k, _)| in_window(k)) {
            worst = worst.max((v - lhs.get(k).copied().unwrap_or(0.0)).abs());
        }
    }
    worst
}

fn is_sub_multiset(small: &[usize], big: &[usize]) -> bool {
    let mut rest = big.to_vec();
    small.iter().all(|x| match rest.iter().position(|y| y == x) {
        Some(p) => {
            rest.remove(p);
            true
        }
        None => false,
    })
}

/// Monoidal structure `(m⊤, m⊗, ν⊗)` of the exponential.
///
/// `m⊗: !A ⊗ !B -> !(A ⊗ B)` lifts `ε ⊗ ε` from the product comonoid,
/// `ν⊗ = m⊗†`, and `m⊤: ⊤ -> !⊤` lifts the identity of the trivial comonoid.
pub struct MonoidalMaps {
    pub m_top: ComplexMatrix,
    pub m_tensor: ComplexMatrix,
    pub nu_tensor: ComplexMatrix,
    /// Basis of `!(A ⊗ B)`.
    pub product: MultisetBasis,
    /// Basis of `!⊤`.
    pub unit: MultisetBasis,
}

/// Product comonoid on `X ⊗ Y` with the middle factors swapped.
pub fn product_comonoid(x: &Comonoid, y: &Comonoid) -> Comonoid {
    let (dx, dy) = (x.dim(), y.dim());
    let raw = x.delta.kron(&y.delta);
    // raw rows are (x1, x2, y1, y2); reorder to (x1, y1, x2, y2).
    let mut delta = ComplexMatrix::zeros(raw.rows(), raw.cols());
    for x1 in 0..dx {
        for x2 in 0..dx {
            for y1 in 0..dy {
                for y2 in 0..dy {
                    let from = ((x1 * dx + x2) * dy + y1) * dy + y2;
                    let to = ((x1 * dy + y1) * dx + x2) * dy + y2;
                    for col in 0..raw.cols() {
                        let v = raw.get(from, col);
                        if v != c(0.0, 0.0) {
                            delta.set(to, col, v);
                        }
                    }
                }
            }
        }
    }
    Comonoid {
        delta,
        counit: x.counit.kron(&y.counit),
    }
}

pub fn monoidal_structure(a: &ExpStructure, b: &ExpStructure, tol: f64) -> Result<MonoidalMaps, ExpError> {
    let d = a.degree();
    let labels: Vec<String> = a
        .basis
        .base
        .iter()
        .flat_map(|x| b.basis.base.iter().map(move |y| format!("{x}{y}")))
        .collect();
    let product = MultisetBasis::new(labels, d);
    let prod = product_comonoid(&a.comonoid(), &b.comonoid());
    let m_tensor = lift_flat(&prod, &a.eps.kron(&b.eps), &product, tol)?;
    let unit = MultisetBasis::new(vec!["*".to_string()], d);
    let m_top = lift_flat(&Comonoid::trivial(), &ComplexMatrix::identity(1), &unit, tol)?;
    Ok(MonoidalMaps {
        nu_tensor: m_tensor.adjoint(),
        m_top,
        m_tensor,
        product,
        unit,
    })
}
