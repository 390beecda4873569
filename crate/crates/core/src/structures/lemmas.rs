//! Split lemmas as checkable equivalences.
//!
//! A pair of idempotents `(ea, eb)` is sectional on a dual, linear monoid,
//! linear comonoid or linear bialgebra exactly when the section `s` of its
//! splitting is a morphism from the induced structure on the split object
//! back to the original one. [`check_lemma`] evaluates both sides so that
//! tests can confirm they agree, and the generators below produce passing
//! instances and counterexamples.

use std::fmt;

use rand::Rng;
use serde::Serialize;

use super::builtins::cyclic_pair;
use super::gadget::Gadget;
use super::ops::{induced_linear_comonoid, induced_linear_monoid, with_idempotents, Splitting};
use super::suites::{check_suite, EquationResult, Suite, SuiteReport, Window};
use super::template::role_signature;
use super::StructureError;
use crate::matrix::{c, matrices_equal, ComplexMatrix};
use crate::model::{AtomSpace, ModelEnv};
use crate::object::ObjectExpr;

/// The four split lemmas.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Lemma {
    Dual,
    Monoid,
    Comonoid,
    Bialgebra,
}

impl Lemma {
    pub const ALL: [Lemma; 4] = [Lemma::Dual, Lemma::Monoid, Lemma::Comonoid, Lemma::Bialgebra];

    pub fn name(self) -> &'static str {
        match self {
            Lemma::Dual => "dual",
            Lemma::Monoid => "monoid",
            Lemma::Comonoid => "comonoid",
            Lemma::Bialgebra => "bialgebra",
        }
    }
}

impl fmt::Display for Lemma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Both sides of one lemma instance.
#[derive(Clone, Debug, Serialize)]
pub struct LemmaVerdict {
    pub lemma: Lemma,
    /// The sectional conditions on the original structure.
    pub sectional: SuiteReport,
    /// The section is a morphism from the induced structure.
    pub morphism: SuiteReport,
}

impl LemmaVerdict {
    /// True when both sides reach the same verdict.
    pub fn agrees(&self) -> bool {
        self.sectional.pass == self.morphism.pass
    }
}

/// Evaluates the sectional conditions of `(sp.ea(), sp.eb())` on `g` and,
/// independently, whether the section is a morphism of the kind `lemma`
/// names. Duals use the roles `eta`, `eps` for [`Lemma::Dual`] and the left
/// and right duals otherwise.
pub fn check_lemma(g: &Gadget, lemma: Lemma, sp: &Splitting, tol: f64) -> Result<LemmaVerdict, StructureError> {
    let h = with_idempotents(g, sp);
    let sectional = match lemma {
        Lemma::Dual => check_suite(&h, Suite::DualSectional, tol, Window::Full)?,
        Lemma::Monoid => check_suite(&h, Suite::MonoidSectional, tol, Window::Full)?,
        Lemma::Comonoid => check_suite(&h, Suite::ComonoidSectional, tol, Window::Full)?,
        Lemma::Bialgebra => merge(
            "monoid-sectional+comonoid-sectional",
            tol,
            vec![
                check_suite(&h, Suite::MonoidSectional, tol, Window::Full)?,
                check_suite(&h, Suite::ComonoidSectional, tol, Window::Full)?,
            ],
        ),
    };
    let mut parts = Vec::new();
    match lemma {
        Lemma::Dual => {
            let eta = g.morphism("eta")?;
            let eps = g.morphism("eps")?;
            let (eta_e, eps_e) = induced_dual(eta, eps, sp);
            parts.push(dual_morphism_report(
                "",
                (&eta_e, &eps_e),
                (eta, eps),
                &sp.s,
                &sp.r2,
                tol,
            )?);
        }
        Lemma::Monoid | Lemma::Comonoid | Lemma::Bialgebra => {
            let mut eqs = Vec::new();
            if lemma != Lemma::Comonoid {
                let e = induced_linear_monoid(g, sp)?;
                let mul = g.morphism("mul")?;
                let unit = g.morphism("unit")?;
                eqs.push(matrix_equation(
                    "section mul",
                    &sp.s.kron(&sp.s).then(mul),
                    &e.morphism("mul")?.then(&sp.s),
                    tol,
                )?);
                eqs.push(matrix_equation(
                    "section unit",
                    &e.morphism("unit")?.then(&sp.s),
                    unit,
                    tol,
                )?);
            }
            if lemma != Lemma::Monoid {
                let e = induced_linear_comonoid(g, sp)?;
                let comul = g.morphism("comul")?;
                let counit = g.morphism("counit")?;
                eqs.push(matrix_equation(
                    "section comul",
                    &sp.s.then(comul),
                    &e.morphism("comul")?.then(&sp.s.kron(&sp.s)),
                    tol,
                )?);
                eqs.push(matrix_equation(
                    "section counit",
                    &sp.s.then(counit),
                    e.morphism("counit")?,
                    tol,
                )?);
            }
            parts.push(report_of("section", tol, eqs));
            let (eta_l, eps_l) = (g.morphism("eta_L")?, g.morphism("eps_L")?);
            let (eta_r, eps_r) = (g.morphism("eta_R")?, g.morphism("eps_R")?);
            let (el_eta, el_eps) = induced_dual(eta_l, eps_l, sp);
            let flipped = Splitting {
                r: sp.r2.clone(),
                s: sp.s2.clone(),
                r2: sp.r.clone(),
                s2: sp.s.clone(),
            };
            let (er_eta, er_eps) = induced_dual(eta_r, eps_r, &flipped);
            parts.push(dual_morphism_report(
                "L ",
                (&el_eta, &el_eps),
                (eta_l, eps_l),
                &sp.s,
                &sp.r2,
                tol,
            )?);
            parts.push(dual_morphism_report(
                "R ",
                (eta_r, eps_r),
                (&er_eta, &er_eps),
                &sp.r2,
                &sp.s,
                tol,
            )?);
        }
    }
    Ok(LemmaVerdict {
        lemma,
        sectional,
        morphism: merge("section-morphism", tol, parts),
    })
}

/// The dual `(eta;(r⊗r2), (s2⊗s);eps)` induced on the split objects.
fn induced_dual(eta: &ComplexMatrix, eps: &ComplexMatrix, sp: &Splitting) -> (ComplexMatrix, ComplexMatrix) {
    (eta.then(&sp.r.kron(&sp.r2)), sp.s2.kron(&sp.s).then(eps))
}

fn matrix_equation(
    label: &str,
    lhs: &ComplexMatrix,
    rhs: &ComplexMatrix,
    tol: f64,
) -> Result<EquationResult, StructureError> {
    let (pass, residual) = matrices_equal(lhs, rhs, tol)?;
    Ok(EquationResult {
        label: label.to_string(),
        residual,
        pass,
    })
}

fn report_of(suite: &str, tol: f64, equations: Vec<EquationResult>) -> SuiteReport {
    SuiteReport {
        suite: suite.to_string(),
        pass: equations.iter().all(|e| e.pass),
        tol,
        worst: equations.iter().map(|e| e.residual).fold(0.0, f64::max),
        equations,
    }
}

/// Concatenates reports, keeping the first equation of each label.
fn merge(suite: &str, tol: f64, parts: Vec<SuiteReport>) -> SuiteReport {
    let mut equations: Vec<EquationResult> = Vec::new();
    for eq in parts.into_iter().flat_map(|r| r.equations) {
        if !equations.iter().any(|e| e.label == eq.label) {
            equations.push(eq);
        }
    }
    report_of(suite, tol, equations)
}

/// Checks that `(f, g)` is a morphism from the dual `d1` on `(X, Y)` to the
/// dual `d2` on `(X2, Y2)`, where `f: X -> X2` and `g: Y2 -> Y`.
fn dual_morphism_report(
    prefix: &str,
    d1: (&ComplexMatrix, &ComplexMatrix),
    d2: (&ComplexMatrix, &ComplexMatrix),
    f: &ComplexMatrix,
    g: &ComplexMatrix,
    tol: f64,
) -> Result<SuiteReport, StructureError> {
    let env = ModelEnv::new(1)
        .with_atom("X", AtomSpace::new(f.cols()))
        .with_atom("X2", AtomSpace::new(f.rows()))
        .with_atom("Y", AtomSpace::new(g.rows()))
        .with_atom("Y2", AtomSpace::new(g.cols()));
    let gadget = Gadget::new("dual-morphism", env)
        .with_object("A", ObjectExpr::atom("X"))
        .with_object("B", ObjectExpr::atom("Y"))
        .with_object("A2", ObjectExpr::atom("X2"))
        .with_object("B2", ObjectExpr::atom("Y2"))
        .with("eta", d1.0.clone())
        .with("eps", d1.1.clone())
        .with("eta2", d2.0.clone())
        .with("eps2", d2.1.clone())
        .with("f", f.clone())
        .with("g", g.clone());
    let mut report = check_suite(&gadget, Suite::DualMorphism, tol, Window::Full)?;
    for eq in &mut report.equations {
        eq.label = format!("{prefix}{}", eq.label);
    }
    Ok(report)
}

/// Transports every role of `g` along `p` on `A` and `q` on `B`. Each role
/// matrix becomes `(⊗ outputs) * m * (⊗ inputs)^-1`, so every equation
/// between roles keeps its residual up to rounding.
pub fn transport(g: &Gadget, p: &ComplexMatrix, q: &ComplexMatrix) -> Result<Gadget, StructureError> {
    let p_inv = p.inverse().map_err(|_| StructureError::NotInvertible("p".into()))?;
    let q_inv = q.inverse().map_err(|_| StructureError::NotInvertible("q".into()))?;
    let iso = |obj: &str, inverse: bool| -> Result<&ComplexMatrix, StructureError> {
        match (obj, inverse) {
            ("A", false) => Ok(p),
            ("A", true) => Ok(&p_inv),
            ("B", false) => Ok(q),
            ("B", true) => Ok(&q_inv),
            _ => Err(StructureError::Schema(format!(
                "cannot transport a role touching `{obj}`"
            ))),
        }
    };
    let mut out = g.clone();
    for (role, m) in &g.morphisms {
        let (ins, outs) = role_signature(role).ok_or_else(|| StructureError::UnknownRole(role.clone()))?;
        let mut left = ComplexMatrix::identity(1);
        for o in outs {
            left = left.kron(iso(o, false)?);
        }
        let mut right = ComplexMatrix::identity(1);
        for i in ins {
            right = right.kron(iso(i, true)?);
        }
        out.set(role, left.mul(m).mul(&right));
    }
    Ok(out)
}

/// An idempotent with image spanned by the columns of `v` and a random
/// complementary kernel.
pub fn projector_onto(v: &ComplexMatrix, rng: &mut impl Rng) -> Result<ComplexMatrix, StructureError> {
    let (n, k) = (v.rows(), v.cols());
    let w = ComplexMatrix::random(n, n - k, rng);
    let t = ComplexMatrix::from_fn(n, n, |i, j| if j < k { v.get(i, j) } else { w.get(i, j - k) });
    let d = ComplexMatrix::from_fn(n, n, |i, j| if i == j && i < k { c(1.0, 0.0) } else { c(0.0, 0.0) });
    let t_inv = t
        .inverse()
        .map_err(|_| StructureError::NotInvertible("basis completion".into()))?;
    Ok(t.mul(&d).mul(&t_inv))
}

/// A random dual on `A = ℂⁿ`, `B = ℂⁿ` with cup matrix `M` and cap `M⁻¹`,
/// together with a splitting of rank `rank`.
///
/// When `sectional` is set, `eb = (M⁻¹ ea M)ᵀ`, which satisfies both
/// sectional equations. Otherwise `eb` is an unrelated random projector of
/// the same rank.
pub fn dual_instance(
    n: usize,
    rank: usize,
    sectional: bool,
    rng: &mut impl Rng,
) -> Result<(Gadget, Splitting), StructureError> {
    let m = ComplexMatrix::random_invertible(n, rng);
    let m_inv = m.inverse().map_err(|_| StructureError::NotInvertible("cup".into()))?;
    let eta = ComplexMatrix::from_fn(n * n, 1, |r, _| m.get(r / n, r % n));
    let eps = ComplexMatrix::from_fn(1, n * n, |_, r| m_inv.get(r / n, r % n));
    let ea = ComplexMatrix::random_projector(n, rank, rng);
    let eb = if sectional {
        m_inv.mul(&ea).mul(&m).transpose()
    } else {
        ComplexMatrix::random_projector(n, rank, rng)
    };
    let env = ModelEnv::new(1)
        .with_atom("A", AtomSpace::new(n))
        .with_atom("B", AtomSpace::new(n));
    let g = Gadget::new("dual", env)
        .with_object("A", ObjectExpr::atom("A"))
        .with_object("B", ObjectExpr::atom("B"))
        .with("eta", eta)
        .with("eps", eps);
    Ok((g, Splitting::from_idempotents(&ea, &eb, 1e-9)?))
}

/// A random instance of `lemma`, sectional or not.
///
/// Structure lemmas start from the group algebra of `Z_4` with the copying
/// comonoid, carried to a random basis on each side by [`transport`]. The
/// idempotent projects onto a chosen subspace `H` along a random kernel
/// and `eb` is its transpose, which keeps the duals sectional; only the
/// choice of `H` decides the verdict:
///
/// | lemma     | sectional `H`  | counterexample `H`        |
/// |-----------|----------------|---------------------------|
/// | monoid    | `⟨0, 2⟩`       | `⟨0, 1⟩`, not closed      |
/// | comonoid  | `⟨0, 1⟩`       | `⟨0, 1+3⟩`, not copied    |
/// | bialgebra | `⟨0, 2⟩`       | `⟨0, 2, 1+3⟩`, a subalgebra that is not copied |
pub fn lemma_instance(
    lemma: Lemma,
    sectional: bool,
    rng: &mut impl Rng,
) -> Result<(Gadget, Splitting), StructureError> {
    if lemma == Lemma::Dual {
        return dual_instance(3, 2, sectional, rng);
    }
    let one = c(1.0, 0.0);
    let span: Vec<Vec<(usize, f64)>> = match (lemma, sectional) {
        (Lemma::Monoid | Lemma::Bialgebra, true) => vec![vec![(0, 1.0)], vec![(2, 1.0)]],
        (Lemma::Monoid, false) | (Lemma::Comonoid, true) => vec![vec![(0, 1.0)], vec![(1, 1.0)]],
        (Lemma::Comonoid, false) => vec![vec![(0, 1.0)], vec![(1, 1.0), (3, 1.0)]],
        _ => vec![vec![(0, 1.0)], vec![(2, 1.0)], vec![(1, 1.0), (3, 1.0)]],
    };
    let v = ComplexMatrix::from_fn(4, span.len(), |i, j| {
        span[j].iter().filter(|(k, _)| *k == i).map(|(_, x)| one * *x).sum()
    });
    let ea0 = projector_onto(&v, rng)?;
    let mut g = cyclic_pair(4);
    g.kind = format!("linear-{lemma}");
    let g = g.with("ea", ea0.clone()).with("eb", ea0.transpose());
    let p = ComplexMatrix::random_invertible(4, rng);
    let q = ComplexMatrix::random_invertible(4, rng);
    let mut t = transport(&g, &p, &q)?;
    let sp = Splitting::from_idempotents(t.morphism("ea")?, t.morphism("eb")?, 1e-9)?;
    t.morphisms.remove("ea");
    t.morphisms.remove("eb");
    Ok((t, sp))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::ops::{split_linear_bialgebra, split_linear_monoid};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const TOL: f64 = 1e-8;

    #[test]
    fn transport_preserves_the_structure() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let g = cyclic_pair(3);
        let p = ComplexMatrix::random_invertible(3, &mut rng);
        let q = ComplexMatrix::random_invertible(3, &mut rng);
        let t = transport(&g, &p, &q).unwrap();
        for suite in [Suite::LinearMonoid, Suite::LinearComonoid, Suite::LinearBialgebra] {
            let r = check_suite(&t, suite, TOL, Window::Full).unwrap();
            assert!(r.pass, "{suite}: {r:?}");
        }
    }

    #[test]
    fn projector_has_the_requested_image() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let v = ComplexMatrix::from_real(3, 1, &[1.0, 1.0, 0.0]);
        let e = projector_onto(&v, &mut rng).unwrap();
        assert!(e.mul(&e).sub(&e).max_abs() < 1e-12);
        assert!(e.mul(&v).sub(&v).max_abs() < 1e-12);
    }

    #[test]
    fn every_lemma_holds_in_both_directions() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for lemma in Lemma::ALL {
            for sectional in [true, false] {
                let (g, sp) = lemma_instance(lemma, sectional, &mut rng).unwrap();
                let v = check_lemma(&g, lemma, &sp, TOL).unwrap();
                assert_eq!(
                    v.sectional.pass, sectional,
                    "{lemma} sectional={sectional}: {:?}",
                    v.sectional
                );
                assert!(v.agrees(), "{lemma} sectional={sectional}: {v:?}");
                if !sectional {
                    assert!(v.sectional.fails_strongly() && v.morphism.fails_strongly(), "{v:?}");
                }
            }
        }
    }

    #[test]
    fn sectional_monoid_splits_to_a_linear_monoid() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let (g, sp) = lemma_instance(Lemma::Monoid, true, &mut rng).unwrap();
        let e = split_linear_monoid(&g, &sp, TOL, Window::Full).unwrap();
        assert!(check_suite(&e, Suite::LinearMonoid, TOL, Window::Full).unwrap().pass);
        let (g, sp) = lemma_instance(Lemma::Bialgebra, true, &mut rng).unwrap();
        let e = split_linear_bialgebra(&g, &sp, TOL, Window::Full).unwrap();
        assert!(check_suite(&e, Suite::LinearBialgebra, TOL, Window::Full).unwrap().pass);
    }

    #[test]
    fn non_sectional_bialgebra_is_rejected() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let (g, sp) = lemma_instance(Lemma::Bialgebra, false, &mut rng).unwrap();
        assert!(matches!(
            split_linear_bialgebra(&g, &sp, TOL, Window::Full),
            Err(StructureError::SuiteFailure { .. })
        ));
    }
}
