//! Constructions between structures: splittings, presentations by actions,
//! compact reflection, antipodes and daggers of duals.

use super::gadget::Gadget;
use super::suites::{self, check_suite, gadget_env, Suite, SuiteReport, Window};
use super::template::{Tpl, W};
use super::StructureError;
use crate::matrix::{matrices_equal, split_idempotent, ComplexMatrix};
use crate::model::{evaluate, AtomSpace, ModelEnv};
use crate::object::ObjectExpr;

/// Checks `suite` and turns a failing report into [`StructureError::SuiteFailure`].
pub fn require(g: &Gadget, suite: Suite, tol: f64, window: Window) -> Result<SuiteReport, StructureError> {
    let r = check_suite(g, suite, tol, window)?;
    if r.pass {
        Ok(r)
    } else {
        Err(StructureError::SuiteFailure {
            suite: suite.name().to_string(),
            worst: r.worst,
        })
    }
}

/// Evaluates a template built over the roles of `g`, with inputs of the
/// given object roles.
pub fn eval_template(
    g: &Gadget,
    inputs: &[&str],
    build: impl FnOnce(&mut Tpl, &[W]) -> Vec<W>,
) -> Result<ComplexMatrix, StructureError> {
    let mut t = Tpl::new(&g.objects);
    let ws: Vec<W> = inputs.iter().map(|r| t.input(r)).collect();
    let outs = build(&mut t, &ws);
    let circ = t.finish(&outs)?;
    Ok(evaluate(&circ, &gadget_env(g))?)
}

/// Result of splitting a binary idempotent `(u, v)`.
///
/// `u;v = r;s` on `A` and `v;u = p;q` on `B`; `alpha: E -> E'` and
/// `beta: E' -> E` are mutually inverse.
#[derive(Clone, Debug)]
pub struct BinarySplit {
    pub r: ComplexMatrix,
    pub s: ComplexMatrix,
    pub p: ComplexMatrix,
    pub q: ComplexMatrix,
    pub alpha: ComplexMatrix,
    pub beta: ComplexMatrix,
}

fn split_checked(name: &str, e: &ComplexMatrix, tol: f64) -> Result<(ComplexMatrix, ComplexMatrix), StructureError> {
    split_idempotent(e, tol).map_err(|err| match err {
        crate::matrix::MatrixError::NotIdempotent(res) => StructureError::NotIdempotent(name.to_string(), res),
        other => other.into(),
    })
}

/// Splits `u;v` and `v;u` and returns the comparison isomorphisms
/// `alpha = s;u;p` and `beta = q;v;r`.
pub fn split_binary_idempotent(g: &Gadget, tol: f64) -> Result<BinarySplit, StructureError> {
    require(g, Suite::BinaryIdempotent, tol, Window::Full)?;
    let (u, v) = (g.morphism("u")?, g.morphism("v")?);
    let (r, s) = split_checked("u;v", &u.then(v), tol)?;
    let (p, q) = split_checked("v;u", &v.then(u), tol)?;
    let alpha = s.then(u).then(&p);
    let beta = q.then(v).then(&r);
    Ok(BinarySplit {
        r,
        s,
        p,
        q,
        alpha,
        beta,
    })
}

/// Builds `alpha = s;u;s†` from the splitting of `u;v` of a dagger binary
/// idempotent and checks that it is preunitary.
pub fn weak_preunitary_from_dagger_split(g: &Gadget, tol: f64) -> Result<(ComplexMatrix, SuiteReport), StructureError> {
    require(g, Suite::DaggerBinary, tol, Window::Full)?;
    let u = g.morphism("u")?;
    let (_, s) = split_checked("u;v", &u.then(g.morphism("v")?), tol)?;
    let alpha = s.then(u).then(&s.adjoint());
    let k = alpha.rows();
    let iso = Gadget::new(
        "preunitary",
        ModelEnv::new(g.env.degree).with_atom("E", AtomSpace::new(k)),
    )
    .with_object("A", ObjectExpr::atom("E"))
    .with_object("B", ObjectExpr::dagger(ObjectExpr::atom("E")))
    .with("phi", alpha.clone());
    let report = check_suite(&iso, Suite::Preunitary, tol, Window::Full)?;
    Ok((alpha, report))
}

/// Presents a linear monoid by its actions and coactions on `B`.
pub fn monoid_to_actions(g: &Gadget, tol: f64) -> Result<Gadget, StructureError> {
    require(g, Suite::LinearMonoid, tol, Window::Full)?;
    let mut out = Gadget::new("monoid-actions", g.env.clone());
    out.objects = g.objects.clone();
    out.set("mul", g.morphism("mul")?.clone());
    out.set("unit", g.morphism("unit")?.clone());
    out.set(
        "lact",
        eval_template(g, &["A", "B"], |t, w| vec![suites::lact(t, w[0], w[1])])?,
    );
    out.set(
        "ract",
        eval_template(g, &["B", "A"], |t, w| vec![suites::ract(t, w[0], w[1])])?,
    );
    out.set(
        "lcoact",
        eval_template(g, &["A"], |t, w| {
            let (b, a) = suites::lcoact(t, w[0]);
            vec![b, a]
        })?,
    );
    out.set(
        "rcoact",
        eval_template(g, &["A"], |t, w| {
            let (a, b) = suites::rcoact(t, w[0]);
            vec![a, b]
        })?,
    );
    out.set(
        "bcomul",
        eval_template(g, &["B"], |t, w| {
            let (x, y) = suites::comul_b_l(t, w[0]);
            vec![x, y]
        })?,
    );
    out.set(
        "bcounit",
        eval_template(g, &["B"], |t, w| {
            suites::counit_b_l(t, w[0]);
            vec![]
        })?,
    );
    Ok(out)
}

/// Recovers the duals of a linear monoid from its action presentation.
pub fn actions_to_monoid(g: &Gadget, tol: f64) -> Result<Gadget, StructureError> {
    require(g, Suite::MonoidActions, tol, Window::Full)?;
    let mut out = Gadget::new("linear-monoid", g.env.clone());
    out.objects = g.objects.clone();
    let (unit, bcounit) = (g.morphism("unit")?, g.morphism("bcounit")?);
    out.set("mul", g.morphism("mul")?.clone());
    out.set("unit", unit.clone());
    out.set("eta_L", unit.then(g.morphism("rcoact")?));
    out.set("eta_R", unit.then(g.morphism("lcoact")?));
    out.set("eps_L", g.morphism("ract")?.then(bcounit));
    out.set("eps_R", g.morphism("lact")?.then(bcounit));
    Ok(out)
}

/// A splitting of the idempotents `ea = r;s` on `A` and `eb = r2;s2` on `B`.
#[derive(Clone, Debug)]
pub struct Splitting {
    pub r: ComplexMatrix,
    pub s: ComplexMatrix,
    pub r2: ComplexMatrix,
    pub s2: ComplexMatrix,
}

impl Splitting {
    /// Splits both idempotents through the image of an SVD.
    pub fn from_idempotents(ea: &ComplexMatrix, eb: &ComplexMatrix, tol: f64) -> Result<Self, StructureError> {
        let (r, s) = split_checked("ea", ea, tol)?;
        let (r2, s2) = split_checked("eb", eb, tol)?;
        Ok(Splitting { r, s, r2, s2 })
    }

    pub fn ea(&self) -> ComplexMatrix {
        self.r.then(&self.s)
    }

    pub fn eb(&self) -> ComplexMatrix {
        self.r2.then(&self.s2)
    }
}

/// Copy of `g` with `ea` and `eb` set from the splitting.
pub fn with_idempotents(g: &Gadget, sp: &Splitting) -> Gadget {
    g.clone().with("ea", sp.ea()).with("eb", sp.eb())
}

/// Gadget skeleton on the split objects. `B` becomes `E†` when it was `A†`,
/// `E` when the two splittings have the same rank, and a new atom otherwise.
fn split_skeleton(g: &Gadget, sp: &Splitting, kind: &str) -> Gadget {
    let k = sp.r.rows();
    let k2 = sp.r2.rows();
    let a = g.objects.get("A");
    let b = g.objects.get("B");
    let e = ObjectExpr::atom("E");
    let mut env = ModelEnv::new(g.env.degree).with_atom("E", AtomSpace::new(k));
    let b_obj = match (a, b) {
        (Some(a), Some(ObjectExpr::Dagger(inner))) if **inner == *a && k == k2 => ObjectExpr::dagger(e.clone()),
        _ if k == k2 => e.clone(),
        _ => {
            env = env.with_atom("F", AtomSpace::new(k2));
            ObjectExpr::atom("F")
        }
    };
    Gadget::new(kind, env).with_object("A", e).with_object("B", b_obj)
}

fn split_duals(g: &Gadget, sp: &Splitting, out: &mut Gadget) -> Result<(), StructureError> {
    out.set("eta_L", g.morphism("eta_L")?.then(&sp.r.kron(&sp.r2)));
    out.set("eps_L", sp.s2.kron(&sp.s).then(g.morphism("eps_L")?));
    out.set("eta_R", g.morphism("eta_R")?.then(&sp.r2.kron(&sp.r)));
    out.set("eps_R", sp.s.kron(&sp.s2).then(g.morphism("eps_R")?));
    Ok(())
}

/// The linear monoid `(E, (s⊗s);m;r, u;r)` with the induced duals, without
/// checking any precondition.
pub fn induced_linear_monoid(g: &Gadget, sp: &Splitting) -> Result<Gadget, StructureError> {
    let mut out = split_skeleton(g, sp, "linear-monoid");
    out.set("mul", sp.s.kron(&sp.s).then(g.morphism("mul")?).then(&sp.r));
    out.set("unit", g.morphism("unit")?.then(&sp.r));
    split_duals(g, sp, &mut out)?;
    Ok(out)
}

/// The linear comonoid `(E, s;d;(r⊗r), s;k)` with the induced duals,
/// without checking any precondition.
pub fn induced_linear_comonoid(g: &Gadget, sp: &Splitting) -> Result<Gadget, StructureError> {
    let mut out = split_skeleton(g, sp, "linear-comonoid");
    out.set("comul", sp.s.then(g.morphism("comul")?).then(&sp.r.kron(&sp.r)));
    out.set("counit", sp.s.then(g.morphism("counit")?));
    split_duals(g, sp, &mut out)?;
    Ok(out)
}

/// Both induced structures on the split object.
pub fn induced_linear_bialgebra(g: &Gadget, sp: &Splitting) -> Result<Gadget, StructureError> {
    let mut out = induced_linear_monoid(g, sp)?;
    let co = induced_linear_comonoid(g, sp)?;
    out.kind = "linear-bialgebra".into();
    out.set("comul", co.morphism("comul")?.clone());
    out.set("counit", co.morphism("counit")?.clone());
    Ok(out)
}

fn require_either(g: &Gadget, a: Suite, b: Suite, tol: f64, window: Window) -> Result<(), StructureError> {
    let ra = check_suite(g, a, tol, window)?;
    if ra.pass {
        return Ok(());
    }
    let rb = check_suite(g, b, tol, window)?;
    if rb.pass {
        return Ok(());
    }
    Err(StructureError::SuiteFailure {
        suite: format!("{a} or {b}"),
        worst: ra.worst.min(rb.worst),
    })
}

/// Splits a linear monoid along a sectional or retractional pair.
pub fn split_linear_monoid(g: &Gadget, sp: &Splitting, tol: f64, window: Window) -> Result<Gadget, StructureError> {
    let h = with_idempotents(g, sp);
    require_either(&h, Suite::MonoidSectional, Suite::MonoidRetractional, tol, window)?;
    induced_linear_monoid(g, sp)
}

/// Splits a linear comonoid along a sectional pair.
pub fn split_linear_comonoid(g: &Gadget, sp: &Splitting, tol: f64, window: Window) -> Result<Gadget, StructureError> {
    require(&with_idempotents(g, sp), Suite::ComonoidSectional, tol, window)?;
    induced_linear_comonoid(g, sp)
}

/// Splits a linear bialgebra along a pair that is sectional for both the
/// monoid and the comonoid.
pub fn split_linear_bialgebra(g: &Gadget, sp: &Splitting, tol: f64, window: Window) -> Result<Gadget, StructureError> {
    let h = with_idempotents(g, sp);
    require(&h, Suite::MonoidSectional, tol, window)?;
    require(&h, Suite::ComonoidSectional, tol, window)?;
    induced_linear_bialgebra(g, sp)
}

/// Exchanges linear monoids and linear comonoids by transposing every role.
///
/// Left and right duals trade places: the new right cap is the transposed
/// left cup, and so on. Applying the reflection twice gives back `g`.
pub fn compact_reflection(g: &Gadget, tol: f64) -> Result<Gadget, StructureError> {
    let to_comonoid = g.morphisms.contains_key("mul");
    let (suite, kind) = if to_comonoid {
        (Suite::LinearMonoid, "linear-comonoid")
    } else {
        (Suite::LinearComonoid, "linear-monoid")
    };
    require(g, suite, tol, Window::Full)?;
    let mut out = Gadget::new(kind, g.env.clone());
    out.objects = g.objects.clone();
    out.notes = g.notes.clone();
    let pairs: [(&str, &str); 6] = if to_comonoid {
        [
            ("mul", "comul"),
            ("unit", "counit"),
            ("eta_L", "eps_R"),
            ("eps_L", "eta_R"),
            ("eta_R", "eps_L"),
            ("eps_R", "eta_L"),
        ]
    } else {
        [
            ("comul", "mul"),
            ("counit", "unit"),
            ("eta_L", "eps_R"),
            ("eps_L", "eta_R"),
            ("eta_R", "eps_L"),
            ("eps_R", "eta_L"),
        ]
    };
    for (from, to) in pairs {
        out.set(to, g.morphism(from)?.transpose());
    }
    Ok(out)
}

/// The `⊗` antipode `A -> A` and the `⊕` antipode `B -> B` of a
/// complementary system.
pub fn antipode(g: &Gadget, tol: f64) -> Result<(ComplexMatrix, ComplexMatrix), StructureError> {
    require(g, Suite::Complementary, tol, Window::Full)?;
    let s_tensor = eval_template(g, &["A"], |t, w| vec![suites::antipode_tensor(t, w[0])])?;
    let s_par = eval_template(g, &["B"], |t, w| vec![suites::antipode_par(t, w[0])])?;
    Ok((s_tensor, s_par))
}

/// The dual `(eps†, eta†)` between `B†` and `A†`.
pub fn dagger_of_dual(g: &Gadget, tol: f64) -> Result<Gadget, StructureError> {
    require(g, Suite::Dual, tol, Window::Full)?;
    let mut out = Gadget::new("dual", g.env.clone());
    out.objects
        .insert("A".into(), ObjectExpr::dagger(g.object("B")?.clone()));
    out.objects
        .insert("B".into(), ObjectExpr::dagger(g.object("A")?.clone()));
    out.set("eta", g.morphism("eps")?.adjoint());
    out.set("eps", g.morphism("eta")?.adjoint());
    Ok(out)
}

/// Outcome of splitting a binary idempotent on a linear bialgebra.
#[derive(Clone, Debug)]
pub struct ComplementaryVerdict {
    /// The idempotent conditions checked on the input.
    pub conditions: SuiteReport,
    /// The bialgebra induced on the splitting.
    pub split: Gadget,
    /// The complementarity suite checked on the induced bialgebra.
    pub split_report: SuiteReport,
}

/// Checks the idempotent conditions for `(u, v)` on `g` and splits it with
/// the given splitting of `u;v` and `v;u`.
pub fn complementary_from_idempotent_with(
    g: &Gadget,
    sp: &Splitting,
    tol: f64,
    window: Window,
) -> Result<ComplementaryVerdict, StructureError> {
    let conditions = check_suite(g, Suite::ComplementaryIdempotentCond, tol, window)?;
    let split = induced_linear_bialgebra(g, sp)?;
    let split_report = check_suite(&split, Suite::Complementary, tol, Window::Full)?;
    Ok(ComplementaryVerdict {
        conditions,
        split,
        split_report,
    })
}

/// As [`complementary_from_idempotent_with`], splitting through SVD images.
pub fn complementary_from_idempotent(
    g: &Gadget,
    tol: f64,
    window: Window,
) -> Result<ComplementaryVerdict, StructureError> {
    let (u, v) = (g.morphism("u")?, g.morphism("v")?);
    let sp = Splitting::from_idempotents(&u.then(v), &v.then(u), tol)?;
    complementary_from_idempotent_with(g, &sp, tol, window)
}

/// True when all listed roles of `a` and `b` agree within `tol`.
pub fn roles_agree(a: &Gadget, b: &Gadget, roles: &[&str], tol: f64) -> Result<(bool, f64), StructureError> {
    let mut worst = 0.0f64;
    let mut ok = true;
    for role in roles {
        let (x, y) = (a.morphism(role)?, b.morphism(role)?);
        let (pass, res) = matrices_equal(x, y, tol).map_err(|_| StructureError::ShapeMismatch {
            label: role.to_string(),
            lhs: (x.rows(), x.cols()),
            rhs: (y.rows(), y.cols()),
        })?;
        ok &= pass;
        worst = worst.max(res);
    }
    Ok((ok, worst))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{c, residual};
    use crate::structures::builtins::{self, cyclic_pair, qubit_zx, weil};

    const TOL: f64 = 1e-9;

    fn bin(u: ComplexMatrix, v: ComplexMatrix) -> Gadget {
        let (n, m) = (u.cols(), u.rows());
        let env = ModelEnv::new(3)
            .with_atom("A", AtomSpace::new(n))
            .with_atom("B", AtomSpace::new(m));
        Gadget::new("binary-idempotent", env)
            .with_object("A", ObjectExpr::atom("A"))
            .with_object("B", ObjectExpr::atom("B"))
            .with("u", u)
            .with("v", v)
    }

    #[test]
    fn identity_pair_splits_to_identities() {
        let sp = split_binary_idempotent(&bin(ComplexMatrix::identity(2), ComplexMatrix::identity(2)), TOL).unwrap();
        assert!(residual(&sp.alpha.then(&sp.beta), &ComplexMatrix::identity(2)) < 1e-12);
        assert!(residual(&sp.beta.then(&sp.alpha), &ComplexMatrix::identity(2)) < 1e-12);
    }

    #[test]
    fn embedding_and_retraction_split_through_rank_two() {
        let u = ComplexMatrix::from_real(3, 2, &[1.0, 0.0, 0.0, 1.0, 0.0, 0.0]);
        let v = u.transpose();
        let sp = split_binary_idempotent(&bin(u, v), TOL).unwrap();
        assert_eq!(sp.alpha.rows(), 2);
        assert!(residual(&sp.alpha.then(&sp.beta), &ComplexMatrix::identity(2)) < 1e-8);
        assert!(residual(&sp.beta.then(&sp.alpha), &ComplexMatrix::identity(2)) < 1e-8);
    }

    #[test]
    fn non_binary_pair_is_rejected() {
        let u = ComplexMatrix::from_real(2, 2, &[1.0, 1.0, 0.0, 1.0]);
        let err = split_binary_idempotent(&bin(u.clone(), u), TOL).unwrap_err();
        assert!(matches!(err, StructureError::SuiteFailure { .. }));
    }

    #[test]
    fn hermitian_unitary_gives_a_unitary_alpha() {
        let h = 1.0 / 2f64.sqrt();
        let u = ComplexMatrix::from_real(2, 2, &[h, h, h, -h]);
        let (alpha, report) = weak_preunitary_from_dagger_split(&bin(u.clone(), u.adjoint()), TOL).unwrap();
        assert!(report.pass && report.worst < 1e-10, "{report:?}");
        assert!(residual(&alpha.mul(&alpha.adjoint()), &ComplexMatrix::identity(2)) < 1e-10);
    }

    #[test]
    fn dagger_split_needs_a_dagger_binary_pair() {
        let u = ComplexMatrix::from_real(2, 2, &[1.0, 2.0, 0.0, 0.0]);
        let v = ComplexMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, 0.0]);
        assert!(matches!(
            weak_preunitary_from_dagger_split(&bin(u, v), TOL),
            Err(StructureError::SuiteFailure { .. })
        ));
    }

    #[test]
    fn actions_round_trip_on_weil_and_qubit() {
        for g in [weil(), qubit_zx()] {
            let acts = monoid_to_actions(&g, TOL).unwrap();
            assert!(
                check_suite(&acts, Suite::MonoidActions, TOL, Window::Full)
                    .unwrap()
                    .pass
            );
            let back = actions_to_monoid(&acts, TOL).unwrap();
            let (ok, worst) =
                roles_agree(&g, &back, &["mul", "unit", "eta_L", "eps_L", "eta_R", "eps_R"], 1e-10).unwrap();
            assert!(ok, "worst {worst}");
        }
    }

    #[test]
    fn trivial_monoid_has_trivial_actions() {
        let acts = monoid_to_actions(&builtins::trivial(), TOL).unwrap();
        for role in ["lact", "ract", "lcoact", "rcoact"] {
            assert_eq!(acts.morphism(role).unwrap(), &ComplexMatrix::identity(1));
        }
    }

    #[test]
    fn identity_idempotent_split_returns_the_monoid() {
        let g = weil();
        let id = ComplexMatrix::identity(2);
        let sp = Splitting {
            r: id.clone(),
            s: id.clone(),
            r2: id.clone(),
            s2: id,
        };
        let out = split_linear_monoid(&g, &sp, TOL, Window::Full).unwrap();
        assert!(
            roles_agree(&g, &out, &["mul", "unit", "eta_L", "eps_R"], 0.0)
                .unwrap()
                .0
        );
    }

    /// Direct sum of the qubit group algebra and a one-dimensional algebra,
    /// projected onto the qubit block.
    #[test]
    fn block_projection_recovers_the_block_monoid() {
        let one = c(1.0, 0.0);
        let mul = builtins::mul_from_table(3, |i, j| match (i, j) {
            (2, 2) => vec![(2, one)],
            (2, _) | (_, 2) => vec![],
            (i, j) => vec![(i ^ j, one)],
        });
        let mut unit = builtins::ket(3, 0);
        unit.set(2, 0, one);
        let env = ModelEnv::new(3).with_atom("A", AtomSpace::new(3));
        let g = builtins::with_canonical_duals(
            Gadget::new("linear-monoid", env)
                .with_object("A", ObjectExpr::atom("A"))
                .with_object("B", ObjectExpr::atom("A"))
                .with("mul", mul)
                .with("unit", unit),
            3,
        );
        assert!(check_suite(&g, Suite::LinearMonoid, TOL, Window::Full).unwrap().pass);
        let r = ComplexMatrix::from_real(2, 3, &[1.0, 0.0, 0.0, 0.0, 1.0, 0.0]);
        let s = r.transpose();
        let sp = Splitting {
            r: r.clone(),
            s: s.clone(),
            r2: r,
            s2: s,
        };
        let out = split_linear_monoid(&g, &sp, TOL, Window::Full).unwrap();
        assert!(check_suite(&out, Suite::LinearMonoid, TOL, Window::Full).unwrap().pass);
        let q = qubit_zx();
        assert!(
            roles_agree(&q, &out, &["mul", "unit", "eta_L", "eps_L"], 1e-12)
                .unwrap()
                .0
        );
    }

    #[test]
    fn incompatible_projector_is_rejected() {
        let g = weil();
        let p = ComplexMatrix::from_real(2, 2, &[0.5, 0.5, 0.5, 0.5]);
        let sp = Splitting::from_idempotents(&p, &p, TOL).unwrap();
        assert!(matches!(
            split_linear_monoid(&g, &sp, TOL, Window::Full),
            Err(StructureError::SuiteFailure { .. })
        ));
    }

    #[test]
    fn reflection_is_an_involution_and_changes_kind() {
        for g in [weil(), qubit_zx(), builtins::quad4(false)] {
            let mut mon = g.clone();
            mon.morphisms
                .retain(|k, _| ["mul", "unit", "eta_L", "eps_L", "eta_R", "eps_R"].contains(&k.as_str()));
            let co = compact_reflection(&mon, TOL).unwrap();
            assert!(check_suite(&co, Suite::LinearComonoid, TOL, Window::Full).unwrap().pass);
            let back = compact_reflection(&co, TOL).unwrap();
            assert_eq!(back.morphisms, mon.morphisms);
        }
    }

    #[test]
    fn dagger_linear_monoid_reflects_to_dagger_linear_comonoid() {
        let co = compact_reflection(&builtins::quad4(false), TOL).unwrap();
        assert!(
            check_suite(&co, Suite::DaggerLinearComonoid, TOL, Window::Full)
                .unwrap()
                .pass
        );
    }

    #[test]
    fn qubit_antipode_is_the_identity() {
        let (st, sp) = antipode(&qubit_zx(), TOL).unwrap();
        assert!(residual(&st, &ComplexMatrix::identity(2)) < 1e-12);
        assert!(residual(&sp, &ComplexMatrix::identity(2)) < 1e-12);
    }

    #[test]
    fn cyclic_antipode_is_the_group_inverse() {
        let (st, _) = antipode(&cyclic_pair(3), TOL).unwrap();
        let inv = ComplexMatrix::permutation(&[0, 2, 1]);
        assert!(residual(&st, &inv) < 1e-12, "{st:?}");
    }

    #[test]
    fn non_complementary_bialgebra_has_no_antipode() {
        assert!(matches!(
            antipode(&builtins::boolean_pair(), TOL),
            Err(StructureError::SuiteFailure { .. })
        ));
    }

    fn dual_gadget(n: usize, eta: ComplexMatrix, eps: ComplexMatrix) -> Gadget {
        let env = ModelEnv::new(3).with_atom("A", AtomSpace::new(n));
        Gadget::new("dual", env)
            .with_object("A", ObjectExpr::atom("A"))
            .with_object("B", ObjectExpr::dagger(ObjectExpr::atom("A")))
            .with("eta", eta)
            .with("eps", eps)
    }

    #[test]
    fn dagger_of_dual_is_a_dual_and_an_involution() {
        let g = dual_gadget(2, builtins::canonical_cup(2), builtins::canonical_cap(2));
        let d = dagger_of_dual(&g, TOL).unwrap();
        assert!(check_suite(&d, Suite::Dual, TOL, Window::Full).unwrap().pass);
        assert_eq!(d.morphisms, g.morphisms);
        let dd = dagger_of_dual(&d, TOL).unwrap();
        assert_eq!(dd.morphisms, g.morphisms);
        let unit = dual_gadget(1, ComplexMatrix::identity(1), ComplexMatrix::identity(1));
        assert!(
            check_suite(&dagger_of_dual(&unit, TOL).unwrap(), Suite::Dual, TOL, Window::Full)
                .unwrap()
                .pass
        );
    }

    #[test]
    fn dagger_of_dual_on_a_twisted_pairing() {
        let p = ComplexMatrix::from_fn(2, 2, |i, j| c((i + 2 * j) as f64 + 1.0, i as f64 - j as f64));
        let pinv = p.inverse().unwrap();
        // eta = (1 ⊗ P^T) cup and eps = cap (P^-T ⊗ 1): the snakes still close.
        let eta = builtins::canonical_cup(2).then(&ComplexMatrix::identity(2).kron(&p.transpose()));
        let eps = pinv
            .transpose()
            .kron(&ComplexMatrix::identity(2))
            .then(&builtins::canonical_cap(2));
        let g = dual_gadget(2, eta, eps);
        assert!(check_suite(&g, Suite::Dual, TOL, Window::Full).unwrap().pass);
        let d = dagger_of_dual(&g, TOL).unwrap();
        assert!(check_suite(&d, Suite::Dual, TOL, Window::Full).unwrap().pass);
    }
}
