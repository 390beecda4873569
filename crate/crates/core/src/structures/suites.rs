//! Equation suites and their evaluation in the matrix model.
//!
//! Each equation is a pair of circuits over gadget roles. Both sides are
//! evaluated separately and compared entrywise; their boundary types may
//! differ by daggers that the model interprets as identities, as long as
//! the dimensions agree.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::gadget::Gadget;
use super::template::{Tpl, W};
use super::StructureError;
use crate::circuit::{Circuit, NodeKind};
use crate::exponential::multisets;
use crate::matrix::{matrices_equal, ComplexMatrix};
use crate::model::{evaluate, ModelEnv};
use crate::object::ObjectExpr;

/// Every equation suite in the registry.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    Dual,
    DualMorphism,
    DualSectional,
    DualRetractional,
    TensorOfDuals,
    DaggerDual,
    DaggerOfDual,
    BinaryIdempotent,
    DaggerBinary,
    Coring,
    LinearMonoid,
    MonoidActions,
    MonoidSectional,
    MonoidRetractional,
    DaggerLinearMonoid,
    FrobeniusCoincidence,
    FrobeniusAlgebra,
    DaggerFrobenius,
    FrobeniusSplittingCond,
    LinearComonoid,
    ComonoidSectional,
    DaggerLinearComonoid,
    LinearBialgebra,
    Complementary,
    Hopf,
    ComplementaryIdempotentCond,
    Preunitary,
    DaggerBangCoherence,
}

impl Suite {
    pub const ALL: [Suite; 28] = [
        Suite::Dual,
        Suite::DualMorphism,
        Suite::DualSectional,
        Suite::DualRetractional,
        Suite::TensorOfDuals,
        Suite::DaggerDual,
        Suite::DaggerOfDual,
        Suite::BinaryIdempotent,
        Suite::DaggerBinary,
        Suite::Coring,
        Suite::LinearMonoid,
        Suite::MonoidActions,
        Suite::MonoidSectional,
        Suite::MonoidRetractional,
        Suite::DaggerLinearMonoid,
        Suite::FrobeniusCoincidence,
        Suite::FrobeniusAlgebra,
        Suite::DaggerFrobenius,
        Suite::FrobeniusSplittingCond,
        Suite::LinearComonoid,
        Suite::ComonoidSectional,
        Suite::DaggerLinearComonoid,
        Suite::LinearBialgebra,
        Suite::Complementary,
        Suite::Hopf,
        Suite::ComplementaryIdempotentCond,
        Suite::Preunitary,
        Suite::DaggerBangCoherence,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Dual => "dual",
            Suite::DualMorphism => "dual-morphism",
            Suite::DualSectional => "dual-sectional",
            Suite::DualRetractional => "dual-retractional",
            Suite::TensorOfDuals => "tensor-of-duals",
            Suite::DaggerDual => "dagger-dual",
            Suite::DaggerOfDual => "dagger-of-dual",
            Suite::BinaryIdempotent => "binary-idempotent",
            Suite::DaggerBinary => "dagger-binary",
            Suite::Coring => "coring",
            Suite::LinearMonoid => "linear-monoid",
            Suite::MonoidActions => "monoid-actions",
            Suite::MonoidSectional => "monoid-sectional",
            Suite::MonoidRetractional => "monoid-retractional",
            Suite::DaggerLinearMonoid => "dagger-linear-monoid",
            Suite::FrobeniusCoincidence => "frobenius-coincidence",
            Suite::FrobeniusAlgebra => "frobenius-algebra",
            Suite::DaggerFrobenius => "dagger-frobenius",
            Suite::FrobeniusSplittingCond => "frobenius-splitting-cond",
            Suite::LinearComonoid => "linear-comonoid",
            Suite::ComonoidSectional => "comonoid-sectional",
            Suite::DaggerLinearComonoid => "dagger-linear-comonoid",
            Suite::LinearBialgebra => "linear-bialgebra",
            Suite::Complementary => "complementary",
            Suite::Hopf => "hopf",
            Suite::ComplementaryIdempotentCond => "complementary-idempotent-cond",
            Suite::Preunitary => "preunitary",
            Suite::DaggerBangCoherence => "dagger-bang-coherence",
        }
    }

    /// Builds every equation of the suite for the roles of `g`.
    pub fn equations(self, g: &Gadget) -> Result<Vec<Equation>, StructureError> {
        let mut b = Eqs { g, out: Vec::new() };
        match self {
            Suite::Dual => b.snakes("eta", "eps", "A", "B")?,
            Suite::DualMorphism => {
                b.snakes("eta", "eps", "A", "B")?;
                b.snakes("eta2", "eps2", "A2", "B2")?;
                b.dual_morphism()?;
            }
            Suite::DualSectional => {
                b.dual_sectional("eta", "eps", "ea", "eb", "")?;
                b.idempotent("ea")?;
                b.idempotent("eb")?;
            }
            Suite::DualRetractional => {
                b.dual_retractional("eta", "eps", "ea", "eb", "")?;
                b.idempotent("ea")?;
                b.idempotent("eb")?;
            }
            Suite::TensorOfDuals => b.tensor_of_duals()?,
            Suite::DaggerDual => {
                b.snakes("eta", "eps", "A", "B")?;
                b.dagger_dual("eta", "eps", "")?;
            }
            Suite::DaggerOfDual => b.dagger_of_dual()?,
            Suite::BinaryIdempotent => b.binary_idempotent()?,
            Suite::DaggerBinary => {
                b.binary_idempotent()?;
                b.self_dagger("u")?;
                b.self_dagger("v")?;
            }
            Suite::Coring => b.coring()?,
            Suite::LinearMonoid => b.linear_monoid()?,
            Suite::MonoidActions => b.monoid_actions()?,
            Suite::MonoidSectional => {
                b.monoid_sectional()?;
                b.linear_sectional_duals()?;
            }
            Suite::MonoidRetractional => {
                b.monoid_retractional()?;
                b.dual_retractional("eta_L", "eps_L", "ea", "eb", "L ")?;
                b.dual_sectional("eta_R", "eps_R", "eb", "ea", "R ")?;
                b.idempotent("ea")?;
                b.idempotent("eb")?;
            }
            Suite::DaggerLinearMonoid => {
                b.linear_monoid()?;
                b.dagger_dual("eta_L", "eps_L", "L ")?;
                b.dagger_dual("eta_R", "eps_R", "R ")?;
                b.dagger_monoid_on_b()?;
            }
            Suite::FrobeniusCoincidence => b.coincidence("alpha")?,
            Suite::FrobeniusAlgebra => {
                b.monoid()?;
                b.comonoid()?;
                b.frobenius_law()?;
            }
            Suite::DaggerFrobenius => {
                b.coincidence("phi")?;
                b.preunitary()?;
            }
            Suite::FrobeniusSplittingCond => b.frobenius_splitting()?,
            Suite::LinearComonoid => b.linear_comonoid()?,
            Suite::ComonoidSectional => {
                b.comonoid_sectional()?;
                b.linear_sectional_duals()?;
            }
            Suite::DaggerLinearComonoid => {
                b.linear_comonoid()?;
                b.dagger_dual("eta_L", "eps_L", "L ")?;
                b.dagger_dual("eta_R", "eps_R", "R ")?;
                b.dagger_comonoid_on_b()?;
            }
            Suite::LinearBialgebra => b.linear_bialgebra()?,
            Suite::Complementary => {
                b.linear_bialgebra()?;
                b.complementary()?;
            }
            Suite::Hopf => b.hopf()?,
            Suite::ComplementaryIdempotentCond => b.idempotent_complementary()?,
            Suite::Preunitary => b.preunitary()?,
            Suite::DaggerBangCoherence => b.bang_coherence()?,
        }
        Ok(b.out)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = StructureError;
    fn from_str(s: &str) -> Result<Self, StructureError> {
        let key = s.to_ascii_lowercase().replace('_', "-");
        Suite::ALL
            .iter()
            .copied()
            .find(|x| x.name() == key)
            .ok_or_else(|| StructureError::UnknownSuite(s.to_string()))
    }
}

/// One labelled equation between two circuits.
#[derive(Clone, Debug)]
pub struct Equation {
    pub label: String,
    pub lhs: Circuit,
    pub rhs: Circuit,
}

/// Which matrix entries are compared for gadgets on exponential objects.
///
/// `Total(w)` keeps an entry only when the total multiset degree of both its
/// input and output basis vectors is at most `w`. Objects without `!` or `?`
/// have degree zero everywhere, so the policy is harmless for them.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Window {
    Full,
    Total(usize),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EquationResult {
    pub label: String,
    pub residual: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub pass: bool,
    pub tol: f64,
    pub worst: f64,
    pub equations: Vec<EquationResult>,
}

impl SuiteReport {
    /// True when some equation misses by more than a thousand tolerances,
    /// which separates structural failure from numerical noise.
    pub fn fails_strongly(&self) -> bool {
        self.worst > 1e3 * self.tol
    }

    pub fn residual(&self, label: &str) -> Option<f64> {
        self.equations.iter().find(|e| e.label == label).map(|e| e.residual)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("reports serialize")
    }
}

/// Multiset degree of every basis vector of `ty`, in basis order.
pub fn basis_degrees(ty: &ObjectExpr, env: &ModelEnv) -> Result<Vec<usize>, StructureError> {
    Ok(match ty {
        ObjectExpr::Atom(_) | ObjectExpr::Top | ObjectExpr::Bot => vec![0; env.dim(ty)?],
        ObjectExpr::Tensor(l, r) | ObjectExpr::Par(l, r) => {
            let (dl, dr) = (basis_degrees(l, env)?, basis_degrees(r, env)?);
            dl.iter().flat_map(|x| dr.iter().map(move |y| x + y)).collect()
        }
        ObjectExpr::Dagger(x) => basis_degrees(x, env)?,
        ObjectExpr::Bang(x) | ObjectExpr::Quest(x) => {
            multisets(env.dim(x)?, env.degree).iter().map(|m| m.len()).collect()
        }
    })
}

fn boundary_degrees(tys: &[ObjectExpr], env: &ModelEnv) -> Result<Vec<usize>, StructureError> {
    let mut acc = vec![0usize];
    for t in tys {
        let d = basis_degrees(t, env)?;
        acc = acc.iter().flat_map(|x| d.iter().map(move |y| x + y)).collect();
    }
    Ok(acc)
}

/// Model environment of a gadget with its roles assigned as generators.
///
/// An invertible `phi` also provides `phi_inv`.
pub fn gadget_env(g: &Gadget) -> ModelEnv {
    let mut env = g.env.clone();
    for (role, m) in &g.morphisms {
        env.assign(role, m.clone());
    }
    if let Some(phi) = g.morphisms.get("phi") {
        if let Ok(inv) = phi.inverse() {
            env.assign("phi_inv", inv);
        }
    }
    env
}

fn masked(m: &ComplexMatrix, rows: &[usize], cols: &[usize], w: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(m.rows(), m.cols(), |i, j| {
        if rows[i] <= w && cols[j] <= w {
            m.get(i, j)
        } else {
            crate::matrix::c(0.0, 0.0)
        }
    })
}

/// Evaluates one equation and returns its residual on the window.
pub fn equation_residual(
    eq: &Equation,
    env: &ModelEnv,
    window: Window,
) -> Result<(ComplexMatrix, ComplexMatrix), StructureError> {
    let l = evaluate(&eq.lhs, env)?;
    let r = evaluate(&eq.rhs, env)?;
    if l.rows() != r.rows() || l.cols() != r.cols() {
        return Err(StructureError::ShapeMismatch {
            label: eq.label.clone(),
            lhs: (l.rows(), l.cols()),
            rhs: (r.rows(), r.cols()),
        });
    }
    match window {
        Window::Full => Ok((l, r)),
        Window::Total(w) => {
            let cols = boundary_degrees(&eq.lhs.input_types(), env)?;
            let rows = boundary_degrees(&eq.lhs.output_types(), env)?;
            Ok((masked(&l, &rows, &cols, w), masked(&r, &rows, &cols, w)))
        }
    }
}

/// Evaluates every equation of `suite` on `g` and reports the residuals.
pub fn check_suite(g: &Gadget, suite: Suite, tol: f64, window: Window) -> Result<SuiteReport, StructureError> {
    let eqs = suite.equations(g)?;
    let env = gadget_env(g);
    let mut equations = Vec::with_capacity(eqs.len());
    let mut worst = 0.0f64;
    for eq in &eqs {
        let (l, r) = equation_residual(eq, &env, window)?;
        let (pass, residual) = matrices_equal(&l, &r, tol).map_err(|_| StructureError::ShapeMismatch {
            label: eq.label.clone(),
            lhs: (l.rows(), l.cols()),
            rhs: (r.rows(), r.cols()),
        })?;
        worst = worst.max(residual);
        equations.push(EquationResult {
            label: eq.label.clone(),
            residual,
            pass,
        });
    }
    Ok(SuiteReport {
        suite: suite.name().to_string(),
        pass: equations.iter().all(|e| e.pass),
        tol,
        worst,
        equations,
    })
}

/// Accumulates the equations of one suite.
struct Eqs<'g> {
    g: &'g Gadget,
    out: Vec<Equation>,
}

type Side<'f> = Box<dyn FnOnce(&mut Tpl, &[W]) -> Vec<W> + 'f>;

impl<'g> Eqs<'g> {
    fn side(&self, ins: &[ObjectExpr], f: Side<'_>) -> Result<Circuit, StructureError> {
        let mut t = Tpl::new(&self.g.objects);
        let ws: Vec<W> = ins.iter().map(|ty| t.input_ty(ty.clone())).collect();
        let outs = f(&mut t, &ws);
        t.finish(&outs)
    }

    fn obj(&self, role: &str) -> Result<ObjectExpr, StructureError> {
        Ok(self.g.object(role)?.clone())
    }

    fn objs(&self, roles: &[&str]) -> Result<Vec<ObjectExpr>, StructureError> {
        roles.iter().map(|r| self.obj(r)).collect()
    }

    /// Adds `lhs = rhs` where both sides take inputs of the given roles.
    fn eq(&mut self, label: &str, ins: &[&str], lhs: Side<'_>, rhs: Side<'_>) -> Result<(), StructureError> {
        let tys = self.objs(ins)?;
        self.eq_typed(label, &tys, lhs, &tys, rhs)
    }

    fn eq_typed(
        &mut self,
        label: &str,
        lhs_ins: &[ObjectExpr],
        lhs: Side<'_>,
        rhs_ins: &[ObjectExpr],
        rhs: Side<'_>,
    ) -> Result<(), StructureError> {
        let lhs = self.side(lhs_ins, lhs)?;
        let rhs = self.side(rhs_ins, rhs)?;
        self.out.push(Equation {
            label: label.to_string(),
            lhs,
            rhs,
        });
        Ok(())
    }

    fn has(&self, label: &str) -> bool {
        self.out.iter().any(|e| e.label == label)
    }

    // ----- building blocks -------------------------------------------------

    fn monoid(&mut self) -> Result<(), StructureError> {
        self.eq(
            "monoid assoc",
            &["A", "A", "A"],
            Box::new(|t, w| {
                let xy = t.g1("mul", &[w[0], w[1]]);
                vec![t.g1("mul", &[xy, w[2]])]
            }),
            Box::new(|t, w| {
                let yz = t.g1("mul", &[w[1], w[2]]);
                vec![t.g1("mul", &[w[0], yz])]
            }),
        )?;
        self.eq(
            "monoid unit left",
            &["A"],
            Box::new(|t, w| {
                let u = t.g1("unit", &[]);
                vec![t.g1("mul", &[u, w[0]])]
            }),
            Box::new(|_, w| vec![w[0]]),
        )?;
        self.eq(
            "monoid unit right",
            &["A"],
            Box::new(|t, w| {
                let u = t.g1("unit", &[]);
                vec![t.g1("mul", &[w[0], u])]
            }),
            Box::new(|_, w| vec![w[0]]),
        )
    }

    fn comonoid_on(&mut self, comul: &str, counit: &str, obj: &str, prefix: &str) -> Result<(), StructureError> {
        let (c1, c2, c3) = (comul.to_string(), comul.to_string(), comul.to_string());
        let c4 = comul.to_string();
        self.eq(
            &format!("{prefix}comonoid coassoc"),
            &[obj],
            Box::new(move |t, w| {
                let (a, b) = t.g2(&c1, &[w[0]]);
                let (b1, b2) = t.g2(&c1, &[b]);
                vec![a, b1, b2]
            }),
            Box::new(move |t, w| {
                let (a, b) = t.g2(&c2, &[w[0]]);
                let (a1, a2) = t.g2(&c2, &[a]);
                vec![a1, a2, b]
            }),
        )?;
        let (k1, k2) = (counit.to_string(), counit.to_string());
        self.eq(
            &format!("{prefix}comonoid counit left"),
            &[obj],
            Box::new(move |t, w| {
                let (a, b) = t.g2(&c3, &[w[0]]);
                t.g(&k1, &[a]);
                vec![b]
            }),
            Box::new(|_, w| vec![w[0]]),
        )?;
        self.eq(
            &format!("{prefix}comonoid counit right"),
            &[obj],
            Box::new(move |t, w| {
                let (a, b) = t.g2(&c4, &[w[0]]);
                t.g(&k2, &[b]);
                vec![a]
            }),
            Box::new(|_, w| vec![w[0]]),
        )
    }

    fn comonoid(&mut self) -> Result<(), StructureError> {
        self.comonoid_on("comul", "counit", "A", "")
    }

    /// Snake equations of a dual `eta: ⊤ -> X ⊕ Y`, `eps: Y ⊗ X -> ⊥`.
    fn snakes(&mut self, eta: &str, eps: &str, x: &str, y: &str) -> Result<(), StructureError> {
        let (e1, e2) = (eta.to_string(), eta.to_string());
        let (p1, p2) = (eps.to_string(), eps.to_string());
        self.eq(
            &format!("{eta}/{eps} snake {x}"),
            &[x],
            Box::new(move |t, w| {
                let (a, b) = t.g2(&e1, &[]);
                t.g(&p1, &[b, w[0]]);
                vec![a]
            }),
            Box::new(|_, w| vec![w[0]]),
        )?;
        self.eq(
            &format!("{eta}/{eps} snake {y}"),
            &[y],
            Box::new(move |t, w| {
                let (a, b) = t.g2(&e2, &[]);
                t.g(&p2, &[w[0], a]);
                vec![b]
            }),
            Box::new(|_, w| vec![w[0]]),
        )
    }

    fn idempotent(&mut self, e: &str) -> Result<(), StructureError> {
        let obj = if e == "ea" { "A" } else { "B" };
        let (e1, e2) = (e.to_string(), e.to_string());
        self.eq(
            &format!("{e} idempotent"),
            &[obj],
            Box::new(move |t, w| {
                let x = t.g1(&e1, &[w[0]]);
                vec![t.g1(&e1, &[x])]
            }),
            Box::new(move |t, w| vec![t.g1(&e2, &[w[0]])]),
        )
    }

    /// `(ex, ey)` sectional on the dual `eta: ⊤ -> X ⊕ Y`, `eps: Y ⊗ X -> ⊥`.
    fn dual_sectional(&mut self, eta: &str, eps: &str, ex: &str, ey: &str, prefix: &str) -> Result<(), StructureError> {
        let (eta1, eta2) = (eta.to_string(), eta.to_string());
        let (ex1, ey1, ey2) = (ex.to_string(), ey.to_string(), ey.to_string());
        self.eq(
            &format!("{prefix}dual sectional cup"),
            &[],
            Box::new(move |t, _| {
                let (a, b) = t.g2(&eta1, &[]);
                vec![t.g1(&ex1, &[a]), t.g1(&ey1, &[b])]
            }),
            Box::new(move |t, _| {
                let (a, b) = t.g2(&eta2, &[]);
                vec![a, t.g1(&ey2, &[b])]
            }),
        )?;
        let (eps1, eps2) = (eps.to_string(), eps.to_string());
        let (ex2, ex3, ey3) = (ex.to_string(), ex.to_string(), ey.to_string());
        let (x, y) = self.dual_objects(eta)?;
        self.eq(
            &format!("{prefix}dual sectional cap"),
            &[y, x],
            Box::new(move |t, w| {
                let b = t.g1(&ey3, &[w[0]]);
                let a = t.g1(&ex2, &[w[1]]);
                t.g(&eps1, &[b, a]);
                vec![]
            }),
            Box::new(move |t, w| {
                let a = t.g1(&ex3, &[w[1]]);
                t.g(&eps2, &[w[0], a]);
                vec![]
            }),
        )
    }

    /// `(ex, ey)` retractional on the dual `eta: ⊤ -> X ⊕ Y`, `eps: Y ⊗ X -> ⊥`.
    fn dual_retractional(
        &mut self,
        eta: &str,
        eps: &str,
        ex: &str,
        ey: &str,
        prefix: &str,
    ) -> Result<(), StructureError> {
        let (eta1, eta2) = (eta.to_string(), eta.to_string());
        let (ex1, ey1, ex2) = (ex.to_string(), ey.to_string(), ex.to_string());
        self.eq(
            &format!("{prefix}dual retractional cup"),
            &[],
            Box::new(move |t, _| {
                let (a, b) = t.g2(&eta1, &[]);
                vec![t.g1(&ex1, &[a]), t.g1(&ey1, &[b])]
            }),
            Box::new(move |t, _| {
                let (a, b) = t.g2(&eta2, &[]);
                vec![t.g1(&ex2, &[a]), b]
            }),
        )?;
        let (eps1, eps2) = (eps.to_string(), eps.to_string());
        let (ex3, ey3, ey4) = (ex.to_string(), ey.to_string(), ey.to_string());
        let (x, y) = self.dual_objects(eta)?;
        self.eq(
            &format!("{prefix}dual retractional cap"),
            &[y, x],
            Box::new(move |t, w| {
                let b = t.g1(&ey3, &[w[0]]);
                let a = t.g1(&ex3, &[w[1]]);
                t.g(&eps1, &[b, a]);
                vec![]
            }),
            Box::new(move |t, w| {
                let b = t.g1(&ey4, &[w[0]]);
                t.g(&eps2, &[b, w[1]]);
                vec![]
            }),
        )
    }

    fn dual_objects(&self, eta: &str) -> Result<(&'static str, &'static str), StructureError> {
        match eta {
            "eta" | "eta_L" => Ok(("A", "B")),
            "eta_R" => Ok(("B", "A")),
            "eta2" => Ok(("A2", "B2")),
            _ => Err(StructureError::UnknownRole(eta.to_string())),
        }
    }

    fn dual_morphism(&mut self) -> Result<(), StructureError> {
        self.eq(
            "morphism cup",
            &[],
            Box::new(|t, _| {
                let (a, b) = t.g2("eta", &[]);
                vec![t.g1("f", &[a]), b]
            }),
            Box::new(|t, _| {
                let (a, b) = t.g2("eta2", &[]);
                vec![a, t.g1("g", &[b])]
            }),
        )?;
        self.eq(
            "morphism cap",
            &["B2", "A"],
            Box::new(|t, w| {
                let a = t.g1("f", &[w[1]]);
                t.g("eps2", &[w[0], a]);
                vec![]
            }),
            Box::new(|t, w| {
                let b = t.g1("g", &[w[0]]);
                t.g("eps", &[b, w[1]]);
                vec![]
            }),
        )
    }

    fn tensor_of_duals(&mut self) -> Result<(), StructureError> {
        // x: ⊤ -> (A ⊗ A2) ⊕ (B2 ⊕ B) with wires [a, c, d, b];
        // y: (B2 ⊕ B) ⊗ (A ⊗ A2) -> ⊥ on [d, b, a, c].
        fn x(t: &mut Tpl) -> [W; 4] {
            let (c, d) = t.g2("eta2", &[]);
            let (a, b) = t.g2("eta", &[]);
            [a, c, d, b]
        }
        fn y(t: &mut Tpl, d: W, b: W, a: W, c: W) {
            t.g("eps", &[b, a]);
            t.g("eps2", &[d, c]);
        }
        self.eq(
            "tensor dual snake left",
            &["A", "A2"],
            Box::new(|t, w| {
                let [a, c, d, b] = x(t);
                y(t, d, b, w[0], w[1]);
                vec![a, c]
            }),
            Box::new(|_, w| vec![w[0], w[1]]),
        )?;
        self.eq(
            "tensor dual snake right",
            &["B2", "B"],
            Box::new(|t, w| {
                let [a, c, d, b] = x(t);
                y(t, w[0], w[1], a, c);
                vec![d, b]
            }),
            Box::new(|_, w| vec![w[0], w[1]]),
        )
    }

    /// `eta` is the dagger of `eps` and vice versa.
    fn dagger_dual(&mut self, eta: &str, eps: &str, prefix: &str) -> Result<(), StructureError> {
        let (x, y) = self.dual_objects(eta)?;
        let (xo, yo) = (self.obj(x)?, self.obj(y)?);
        let (eta1, eps1) = (eta.to_string(), eps.to_string());
        self.eq_typed(
            &format!("{prefix}cup is dagger of cap"),
            &[],
            Box::new(move |t, _| t.g(&eta1, &[])),
            &[],
            Box::new(move |t, _| t.dag(&eps1, &[])),
        )?;
        let (eta2, eps2) = (eta.to_string(), eps.to_string());
        let dagger_ins = vec![ObjectExpr::dagger(xo.clone()), ObjectExpr::dagger(yo.clone())];
        self.eq_typed(
            &format!("{prefix}cap is dagger of cup"),
            &[yo, xo],
            Box::new(move |t, w| {
                t.g(&eps2, &[w[0], w[1]]);
                vec![]
            }),
            &dagger_ins,
            Box::new(move |t, w| {
                t.dag(&eta2, &[w[0], w[1]]);
                vec![]
            }),
        )
    }

    fn dagger_of_dual(&mut self) -> Result<(), StructureError> {
        // New dual B† ⊣ A† with cup eps† and cap eta†.
        let a = self.obj("A")?;
        let b = self.obj("B")?;
        let (ad, bd) = (ObjectExpr::dagger(a), ObjectExpr::dagger(b));
        self.eq_typed(
            "dagger dual snake B†",
            std::slice::from_ref(&bd),
            Box::new(|t, w| {
                let outs = t.dag("eps", &[]);
                t.dag("eta", &[outs[1], w[0]]);
                vec![outs[0]]
            }),
            std::slice::from_ref(&bd),
            Box::new(|_, w| vec![w[0]]),
        )?;
        self.eq_typed(
            "dagger dual snake A†",
            std::slice::from_ref(&ad),
            Box::new(|t, w| {
                let outs = t.dag("eps", &[]);
                t.dag("eta", &[w[0], outs[0]]);
                vec![outs[1]]
            }),
            std::slice::from_ref(&ad),
            Box::new(|_, w| vec![w[0]]),
        )
    }

    fn binary_idempotent(&mut self) -> Result<(), StructureError> {
        self.eq(
            "uvu = u",
            &["A"],
            Box::new(|t, w| {
                let b = t.g1("u", &[w[0]]);
                let a = t.g1("v", &[b]);
                vec![t.g1("u", &[a])]
            }),
            Box::new(|t, w| vec![t.g1("u", &[w[0]])]),
        )?;
        self.eq(
            "vuv = v",
            &["B"],
            Box::new(|t, w| {
                let a = t.g1("v", &[w[0]]);
                let b = t.g1("u", &[a]);
                vec![t.g1("v", &[b])]
            }),
            Box::new(|t, w| vec![t.g1("v", &[w[0]])]),
        )
    }

    /// `role` equals its own dagger up to the identity `ι`.
    fn self_dagger(&mut self, role: &str) -> Result<(), StructureError> {
        let (dom, cod) =
            super::template::role_signature(role).ok_or_else(|| StructureError::UnknownRole(role.to_string()))?;
        let ins = self.objs(dom)?;
        let dag_ins: Vec<ObjectExpr> = self.objs(cod)?.into_iter().map(ObjectExpr::dagger).collect();
        let (r1, r2) = (role.to_string(), role.to_string());
        self.eq_typed(
            &format!("{role} is self-dagger"),
            &ins,
            Box::new(move |t, w| t.g(&r1, w)),
            &dag_ins,
            Box::new(move |t, w| t.dag(&r2, w)),
        )
    }

    fn coring(&mut self) -> Result<(), StructureError> {
        // e_A = u;v on A and e_B = v;u on B, each with X the same object.
        for (obj, first, second) in [("A", "u", "v"), ("B", "v", "u")] {
            let x = self.obj(obj)?;
            let tensor = ObjectExpr::tensor(x.clone(), x.clone());
            let par = ObjectExpr::par(x.clone(), x.clone());
            for (side, left) in [("KL", false), ("KR", true)] {
                let name = |n: u8| format!("{side}.{n} on {obj}");
                let (f1, s1) = (first.to_string(), second.to_string());
                let (f2, s2) = (first.to_string(), second.to_string());
                let (xa, xb) = (x.clone(), x.clone());
                let (xc, xd) = (x.clone(), x.clone());
                let (tt, pp) = (tensor.clone(), par.clone());
                // [1]: (1 ⊗ e); mx; κ = 1 ⊗ e on X ⊗ A.
                let lhs = self.side(
                    std::slice::from_ref(&tt),
                    Box::new(move |t, w| {
                        let o = t.node(NodeKind::TensorElim, &[w[0]], vec![xa.clone(), xa.clone()]);
                        let (p, q) = if left { (o[1], o[0]) } else { (o[0], o[1]) };
                        let q = t.g1(&f1, &[q]);
                        let q = t.g1(&s1, &[q]);
                        let pair = if left { [q, p] } else { [p, q] };
                        let m = t.node(NodeKind::ParIntro, &pair, vec![ObjectExpr::par(xa.clone(), xa.clone())]);
                        let o = t.node(NodeKind::ParElim, &[m[0]], vec![xa.clone(), xa.clone()]);
                        t.node(
                            NodeKind::TensorIntro,
                            &o,
                            vec![ObjectExpr::tensor(xa.clone(), xa.clone())],
                        )
                    }),
                )?;
                let rhs = self.side(
                    &[tt],
                    Box::new(move |t, w| {
                        let o = t.node(NodeKind::TensorElim, &[w[0]], vec![xb.clone(), xb.clone()]);
                        let (p, q) = if left { (o[1], o[0]) } else { (o[0], o[1]) };
                        let q = t.g1(&f2, &[q]);
                        let q = t.g1(&s2, &[q]);
                        let pair = if left { [q, p] } else { [p, q] };
                        t.node(
                            NodeKind::TensorIntro,
                            &pair,
                            vec![ObjectExpr::tensor(xb.clone(), xb.clone())],
                        )
                    }),
                )?;
                self.out.push(Equation {
                    label: name(1),
                    lhs,
                    rhs,
                });
                // [2]: (1 ⊕ e); κ; mx = 1 ⊕ e on X ⊕ A.
                let (f3, s3) = (first.to_string(), second.to_string());
                let (f4, s4) = (first.to_string(), second.to_string());
                let lhs = self.side(
                    std::slice::from_ref(&pp),
                    Box::new(move |t, w| {
                        let o = t.node(NodeKind::ParElim, &[w[0]], vec![xc.clone(), xc.clone()]);
                        let (p, q) = if left { (o[1], o[0]) } else { (o[0], o[1]) };
                        let q = t.g1(&f3, &[q]);
                        let q = t.g1(&s3, &[q]);
                        let pair = if left { [q, p] } else { [p, q] };
                        let m = t.node(
                            NodeKind::TensorIntro,
                            &pair,
                            vec![ObjectExpr::tensor(xc.clone(), xc.clone())],
                        );
                        let o = t.node(NodeKind::TensorElim, &[m[0]], vec![xc.clone(), xc.clone()]);
                        t.node(NodeKind::ParIntro, &o, vec![ObjectExpr::par(xc.clone(), xc.clone())])
                    }),
                )?;
                let rhs = self.side(
                    &[pp],
                    Box::new(move |t, w| {
                        let o = t.node(NodeKind::ParElim, &[w[0]], vec![xd.clone(), xd.clone()]);
                        let (p, q) = if left { (o[1], o[0]) } else { (o[0], o[1]) };
                        let q = t.g1(&f4, &[q]);
                        let q = t.g1(&s4, &[q]);
                        let pair = if left { [q, p] } else { [p, q] };
                        t.node(NodeKind::ParIntro, &pair, vec![ObjectExpr::par(xd.clone(), xd.clone())])
                    }),
                )?;
                self.out.push(Equation {
                    label: name(2),
                    lhs,
                    rhs,
                });
            }
        }
        Ok(())
    }

    // ----- derived structure on B ------------------------------------------

    fn linear_monoid(&mut self) -> Result<(), StructureError> {
        self.monoid()?;
        self.snakes("eta_L", "eps_L", "A", "B")?;
        self.snakes("eta_R", "eps_R", "B", "A")?;
        self.eq(
            "B counit left = right",
            &["B"],
            Box::new(|t, w| {
                counit_b_l(t, w[0]);
                vec![]
            }),
            Box::new(|t, w| {
                counit_b_r(t, w[0]);
                vec![]
            }),
        )?;
        self.eq(
            "B comul left = right",
            &["B"],
            Box::new(|t, w| {
                let (a, b) = comul_b_l(t, w[0]);
                vec![a, b]
            }),
            Box::new(|t, w| {
                let (a, b) = comul_b_r(t, w[0]);
                vec![a, b]
            }),
        )
    }

    fn linear_comonoid(&mut self) -> Result<(), StructureError> {
        self.comonoid()?;
        if !self.has("eta_L/eps_L snake A") {
            self.snakes("eta_L", "eps_L", "A", "B")?;
            self.snakes("eta_R", "eps_R", "B", "A")?;
        }
        self.eq(
            "B unit left = right",
            &[],
            Box::new(|t, _| vec![unit_b_l(t)]),
            Box::new(|t, _| vec![unit_b_r(t)]),
        )?;
        self.eq(
            "B mul left = right",
            &["B", "B"],
            Box::new(|t, w| vec![nabla_b_l(t, w[0], w[1])]),
            Box::new(|t, w| vec![nabla_b_r(t, w[0], w[1])]),
        )
    }

    fn dagger_monoid_on_b(&mut self) -> Result<(), StructureError> {
        let ad = ObjectExpr::dagger(self.obj("A")?);
        let b = self.obj("B")?;
        self.eq_typed(
            "B counit is dagger of unit",
            std::slice::from_ref(&b),
            Box::new(|t, w| {
                counit_b_l(t, w[0]);
                vec![]
            }),
            std::slice::from_ref(&ad),
            Box::new(|t, w| t.dag("unit", &[w[0]])),
        )?;
        self.eq_typed(
            "B comul is dagger of mul",
            &[b],
            Box::new(|t, w| {
                let (x, y) = comul_b_l(t, w[0]);
                vec![x, y]
            }),
            &[ad],
            Box::new(|t, w| t.dag("mul", &[w[0]])),
        )
    }

    fn dagger_comonoid_on_b(&mut self) -> Result<(), StructureError> {
        let ad = ObjectExpr::dagger(self.obj("A")?);
        let b = self.obj("B")?;
        self.eq_typed(
            "B unit is dagger of counit",
            &[],
            Box::new(|t, _| vec![unit_b_l(t)]),
            &[],
            Box::new(|t, _| t.dag("counit", &[])),
        )?;
        self.eq_typed(
            "B mul is dagger of comul",
            &[b.clone(), b],
            Box::new(|t, w| vec![nabla_b_l(t, w[0], w[1])]),
            &[ad.clone(), ad],
            Box::new(|t, w| t.dag("comul", &[w[0], w[1]])),
        )
    }

    fn coincidence(&mut self, alpha: &'static str) -> Result<(), StructureError> {
        self.eq(
            &format!("{alpha} from left cup"),
            &["A"],
            Box::new(move |t, w| vec![t.g1(alpha, &[w[0]])]),
            Box::new(move |t, w| {
                let (a, o) = t.g2("eta_L", &[]);
                let m = t.g1("mul", &[w[0], a]);
                let b = t.g1(alpha, &[m]);
                counit_b_l(t, b);
                vec![o]
            }),
        )?;
        self.eq(
            &format!("{alpha} from right cup"),
            &["A"],
            Box::new(move |t, w| vec![t.g1(alpha, &[w[0]])]),
            Box::new(move |t, w| {
                let (o, a) = t.g2("eta_R", &[]);
                let m = t.g1("mul", &[a, w[0]]);
                let b = t.g1(alpha, &[m]);
                counit_b_r(t, b);
                vec![o]
            }),
        )?;
        self.eq(
            &format!("{alpha} left cap"),
            &["A", "A"],
            Box::new(move |t, w| {
                let m = t.g1("mul", &[w[0], w[1]]);
                let b = t.g1(alpha, &[m]);
                counit_b_l(t, b);
                vec![]
            }),
            Box::new(move |t, w| {
                let b = t.g1(alpha, &[w[0]]);
                t.g("eps_L", &[b, w[1]]);
                vec![]
            }),
        )?;
        self.eq(
            &format!("{alpha} right cap"),
            &["A", "A"],
            Box::new(move |t, w| {
                let m = t.g1("mul", &[w[0], w[1]]);
                let b = t.g1(alpha, &[m]);
                counit_b_r(t, b);
                vec![]
            }),
            Box::new(move |t, w| {
                let b = t.g1(alpha, &[w[1]]);
                t.g("eps_R", &[w[0], b]);
                vec![]
            }),
        )
    }

    /// Needs `B = A†` so that `(phi^-1)†` composes after `phi`.
    fn preunitary(&mut self) -> Result<(), StructureError> {
        if !self.g.morphisms.contains_key("phi") {
            return Err(StructureError::MissingRole("phi".into()));
        }
        let inv = self.g.morphisms["phi"].inverse();
        if inv.is_err() {
            return Err(StructureError::NotInvertible("phi".into()));
        }
        self.eq(
            "phi (phi^-1)† = iota",
            &["A"],
            Box::new(|t, w| {
                let b = t.g1("phi", &[w[0]]);
                t.dag("phi_inv", &[b])
            }),
            Box::new(|_, w| vec![w[0]]),
        )
    }

    fn frobenius_law(&mut self) -> Result<(), StructureError> {
        self.eq(
            "frobenius left",
            &["A", "A"],
            Box::new(|t, w| {
                let (a, b) = t.g2("comul", &[w[1]]);
                vec![t.g1("mul", &[w[0], a]), b]
            }),
            Box::new(|t, w| {
                let m = t.g1("mul", &[w[0], w[1]]);
                let (a, b) = t.g2("comul", &[m]);
                vec![a, b]
            }),
        )?;
        self.eq(
            "frobenius right",
            &["A", "A"],
            Box::new(|t, w| {
                let (a, b) = t.g2("comul", &[w[0]]);
                vec![a, t.g1("mul", &[b, w[1]])]
            }),
            Box::new(|t, w| {
                let m = t.g1("mul", &[w[0], w[1]]);
                let (a, b) = t.g2("comul", &[m]);
                vec![a, b]
            }),
        )
    }

    fn frobenius_splitting(&mut self) -> Result<(), StructureError> {
        fn ea(t: &mut Tpl, x: W) -> W {
            let b = t.g1("u", &[x]);
            t.g1("v", &[b])
        }
        fn eb(t: &mut Tpl, x: W) -> W {
            let a = t.g1("v", &[x]);
            t.g1("u", &[a])
        }
        self.eq(
            "u from left cup",
            &["A"],
            Box::new(|t, w| vec![t.g1("u", &[w[0]])]),
            Box::new(|t, w| {
                let (a, b) = t.g2("eta_L", &[]);
                let (x, a) = (ea(t, w[0]), ea(t, a));
                let m = t.g1("mul", &[x, a]);
                let m = t.g1("u", &[m]);
                counit_b_l(t, m);
                vec![eb(t, b)]
            }),
        )?;
        self.eq(
            "u from right cup",
            &["A"],
            Box::new(|t, w| vec![t.g1("u", &[w[0]])]),
            Box::new(|t, w| {
                let (b, a) = t.g2("eta_R", &[]);
                let (a, x) = (ea(t, a), ea(t, w[0]));
                let m = t.g1("mul", &[a, x]);
                let m = t.g1("u", &[m]);
                counit_b_r(t, m);
                vec![eb(t, b)]
            }),
        )
    }

    fn monoid_sectional(&mut self) -> Result<(), StructureError> {
        self.eq(
            "monoid sectional mul",
            &["A", "A"],
            Box::new(|t, w| {
                let x = t.g1("ea", &[w[0]]);
                let y = t.g1("ea", &[w[1]]);
                let m = t.g1("mul", &[x, y]);
                vec![t.g1("ea", &[m])]
            }),
            Box::new(|t, w| {
                let x = t.g1("ea", &[w[0]]);
                let y = t.g1("ea", &[w[1]]);
                vec![t.g1("mul", &[x, y])]
            }),
        )?;
        self.eq(
            "monoid sectional unit",
            &[],
            Box::new(|t, _| {
                let u = t.g1("unit", &[]);
                vec![t.g1("ea", &[u])]
            }),
            Box::new(|t, _| vec![t.g1("unit", &[])]),
        )
    }

    fn monoid_retractional(&mut self) -> Result<(), StructureError> {
        self.eq(
            "monoid retractional mul",
            &["A", "A"],
            Box::new(|t, w| {
                let m = t.g1("mul", &[w[0], w[1]]);
                vec![t.g1("ea", &[m])]
            }),
            Box::new(|t, w| {
                let x = t.g1("ea", &[w[0]]);
                let y = t.g1("ea", &[w[1]]);
                let m = t.g1("mul", &[x, y]);
                vec![t.g1("ea", &[m])]
            }),
        )
    }

    fn comonoid_sectional(&mut self) -> Result<(), StructureError> {
        self.eq(
            "comonoid sectional comul",
            &["A"],
            Box::new(|t, w| {
                let x = t.g1("ea", &[w[0]]);
                let (a, b) = t.g2("comul", &[x]);
                vec![t.g1("ea", &[a]), t.g1("ea", &[b])]
            }),
            Box::new(|t, w| {
                let x = t.g1("ea", &[w[0]]);
                let (a, b) = t.g2("comul", &[x]);
                vec![a, b]
            }),
        )
    }

    /// Dual conditions shared by sectional linear monoids and comonoids.
    fn linear_sectional_duals(&mut self) -> Result<(), StructureError> {
        self.dual_sectional("eta_L", "eps_L", "ea", "eb", "L ")?;
        self.dual_retractional("eta_R", "eps_R", "eb", "ea", "R ")?;
        self.idempotent("ea")?;
        self.idempotent("eb")
    }

    fn monoid_actions(&mut self) -> Result<(), StructureError> {
        self.monoid()?;
        self.comonoid_on("bcomul", "bcounit", "B", "B ")?;
        self.eq(
            "left action unit",
            &["B"],
            Box::new(|t, w| {
                let u = t.g1("unit", &[]);
                vec![t.g1("lact", &[u, w[0]])]
            }),
            Box::new(|_, w| vec![w[0]]),
        )?;
        self.eq(
            "left action assoc",
            &["A", "A", "B"],
            Box::new(|t, w| {
                let b = t.g1("lact", &[w[1], w[2]]);
                vec![t.g1("lact", &[w[0], b])]
            }),
            Box::new(|t, w| {
                let m = t.g1("mul", &[w[0], w[1]]);
                vec![t.g1("lact", &[m, w[2]])]
            }),
        )?;
        self.eq(
            "right action unit",
            &["B"],
            Box::new(|t, w| {
                let u = t.g1("unit", &[]);
                vec![t.g1("ract", &[w[0], u])]
            }),
            Box::new(|_, w| vec![w[0]]),
        )?;
        self.eq(
            "right action assoc",
            &["B", "A", "A"],
            Box::new(|t, w| {
                let b = t.g1("ract", &[w[0], w[1]]);
                vec![t.g1("ract", &[b, w[2]])]
            }),
            Box::new(|t, w| {
                let m = t.g1("mul", &[w[1], w[2]]);
                vec![t.g1("ract", &[w[0], m])]
            }),
        )?;
        self.eq(
            "actions commute",
            &["A", "B", "A"],
            Box::new(|t, w| {
                let b = t.g1("lact", &[w[0], w[1]]);
                vec![t.g1("ract", &[b, w[2]])]
            }),
            Box::new(|t, w| {
                let b = t.g1("ract", &[w[1], w[2]]);
                vec![t.g1("lact", &[w[0], b])]
            }),
        )?;
        let lco_mul = |t: &mut Tpl, w: &[W]| {
            let m = t.g1("mul", &[w[0], w[1]]);
            let (b, a) = t.g2("lcoact", &[m]);
            vec![b, a]
        };
        self.eq(
            "left coaction on product, first",
            &["A", "A"],
            Box::new(lco_mul),
            Box::new(|t, w| {
                let (b, a) = t.g2("lcoact", &[w[0]]);
                vec![b, t.g1("mul", &[a, w[1]])]
            }),
        )?;
        self.eq(
            "left coaction on product, second",
            &["A", "A"],
            Box::new(lco_mul),
            Box::new(|t, w| {
                let (b, a) = t.g2("lcoact", &[w[1]]);
                vec![t.g1("lact", &[w[0], b]), a]
            }),
        )?;
        let rco_mul = |t: &mut Tpl, w: &[W]| {
            let m = t.g1("mul", &[w[0], w[1]]);
            let (a, b) = t.g2("rcoact", &[m]);
            vec![a, b]
        };
        self.eq(
            "right coaction on product, second",
            &["A", "A"],
            Box::new(rco_mul),
            Box::new(|t, w| {
                let (a, b) = t.g2("rcoact", &[w[1]]);
                vec![t.g1("mul", &[w[0], a]), b]
            }),
        )?;
        self.eq(
            "right coaction on product, first",
            &["A", "A"],
            Box::new(rco_mul),
            Box::new(|t, w| {
                let (a, b) = t.g2("rcoact", &[w[0]]);
                vec![a, t.g1("ract", &[b, w[1]])]
            }),
        )
    }

    fn bialgebra_tensor(&mut self) -> Result<(), StructureError> {
        self.eq(
            "bialgebra comul of mul",
            &["A", "A"],
            Box::new(|t, w| {
                let m = t.g1("mul", &[w[0], w[1]]);
                let (a, b) = t.g2("comul", &[m]);
                vec![a, b]
            }),
            Box::new(|t, w| {
                let (x1, x2) = t.g2("comul", &[w[0]]);
                let (y1, y2) = t.g2("comul", &[w[1]]);
                vec![t.g1("mul", &[x1, y1]), t.g1("mul", &[x2, y2])]
            }),
        )?;
        self.eq(
            "bialgebra comul of unit",
            &[],
            Box::new(|t, _| {
                let u = t.g1("unit", &[]);
                let (a, b) = t.g2("comul", &[u]);
                vec![a, b]
            }),
            Box::new(|t, _| vec![t.g1("unit", &[]), t.g1("unit", &[])]),
        )?;
        self.eq(
            "bialgebra counit of mul",
            &["A", "A"],
            Box::new(|t, w| {
                let m = t.g1("mul", &[w[0], w[1]]);
                t.g("counit", &[m]);
                vec![]
            }),
            Box::new(|t, w| {
                t.g("counit", &[w[0]]);
                t.g("counit", &[w[1]]);
                vec![]
            }),
        )?;
        self.eq(
            "bialgebra counit of unit",
            &[],
            Box::new(|t, _| {
                let u = t.g1("unit", &[]);
                t.g("counit", &[u]);
                vec![]
            }),
            Box::new(|_, _| vec![]),
        )
    }

    fn bialgebra_par(&mut self) -> Result<(), StructureError> {
        self.eq(
            "B bialgebra comul of mul",
            &["B", "B"],
            Box::new(|t, w| {
                let m = nabla_b_l(t, w[0], w[1]);
                let (a, b) = comul_b_l(t, m);
                vec![a, b]
            }),
            Box::new(|t, w| {
                let (x1, x2) = comul_b_l(t, w[0]);
                let (y1, y2) = comul_b_l(t, w[1]);
                vec![nabla_b_l(t, x1, y1), nabla_b_l(t, x2, y2)]
            }),
        )?;
        self.eq(
            "B bialgebra comul of unit",
            &[],
            Box::new(|t, _| {
                let u = unit_b_l(t);
                let (a, b) = comul_b_l(t, u);
                vec![a, b]
            }),
            Box::new(|t, _| vec![unit_b_l(t), unit_b_l(t)]),
        )?;
        self.eq(
            "B bialgebra counit of mul",
            &["B", "B"],
            Box::new(|t, w| {
                let m = nabla_b_l(t, w[0], w[1]);
                counit_b_l(t, m);
                vec![]
            }),
            Box::new(|t, w| {
                counit_b_l(t, w[0]);
                counit_b_l(t, w[1]);
                vec![]
            }),
        )?;
        self.eq(
            "B bialgebra counit of unit",
            &[],
            Box::new(|t, _| {
                let u = unit_b_l(t);
                counit_b_l(t, u);
                vec![]
            }),
            Box::new(|_, _| vec![]),
        )
    }

    fn linear_bialgebra(&mut self) -> Result<(), StructureError> {
        self.linear_monoid()?;
        self.linear_comonoid()?;
        self.bialgebra_tensor()?;
        self.bialgebra_par()
    }

    fn complementary(&mut self) -> Result<(), StructureError> {
        self.eq(
            "commutative",
            &["A", "A"],
            Box::new(|t, w| vec![t.g1("mul", &[w[0], w[1]])]),
            Box::new(|t, w| vec![t.g1("mul", &[w[1], w[0]])]),
        )?;
        self.eq(
            "cocommutative",
            &["A"],
            Box::new(|t, w| {
                let (a, b) = t.g2("comul", &[w[0]]);
                vec![a, b]
            }),
            Box::new(|t, w| {
                let (a, b) = t.g2("comul", &[w[0]]);
                vec![b, a]
            }),
        )?;
        self.eq(
            "comp.1",
            &["A"],
            Box::new(|t, w| {
                let ub = unit_b_l(t);
                let b = lact(t, w[0], ub);
                counit_b_r(t, b);
                vec![]
            }),
            Box::new(|t, w| {
                t.g("counit", &[w[0]]);
                vec![]
            }),
        )?;
        self.eq(
            "comp.2",
            &[],
            Box::new(|t, _| {
                let ub = unit_b_l(t);
                let (a1, a2) = t.g2("comul", &[ub]);
                counit_b_r(t, a2);
                vec![a1]
            }),
            Box::new(|t, _| vec![t.g1("unit", &[])]),
        )?;
        self.eq(
            "comp.3",
            &[],
            Box::new(|t, _| {
                let ub = unit_b_l(t);
                let (b, a) = lcoact(t, ub);
                vec![b, a]
            }),
            Box::new(|t, _| vec![unit_b_l(t), unit_b_l(t)]),
        )?;
        self.eq(
            "comp.1 op",
            &["A"],
            Box::new(|t, w| {
                let ub = unit_b_r(t);
                let b = ract(t, ub, w[0]);
                counit_b_l(t, b);
                vec![]
            }),
            Box::new(|t, w| {
                t.g("counit", &[w[0]]);
                vec![]
            }),
        )?;
        self.eq(
            "comp.2 op",
            &[],
            Box::new(|t, _| {
                let ub = unit_b_r(t);
                let (a1, a2) = t.g2("comul", &[ub]);
                counit_b_l(t, a1);
                vec![a2]
            }),
            Box::new(|t, _| vec![t.g1("unit", &[])]),
        )?;
        self.eq(
            "comp.3 op",
            &[],
            Box::new(|t, _| {
                let ub = unit_b_r(t);
                let (a, b) = rcoact(t, ub);
                vec![a, b]
            }),
            Box::new(|t, _| vec![unit_b_r(t), unit_b_r(t)]),
        )
    }

    fn hopf(&mut self) -> Result<(), StructureError> {
        let counit_unit = |t: &mut Tpl, w: &[W]| {
            t.g("counit", &[w[0]]);
            vec![t.g1("unit", &[])]
        };
        self.eq(
            "hopf tensor left",
            &["A"],
            Box::new(|t, w| {
                let (a, b) = t.g2("comul", &[w[0]]);
                let s = antipode_tensor(t, a);
                vec![t.g1("mul", &[s, b])]
            }),
            Box::new(counit_unit),
        )?;
        self.eq(
            "hopf tensor right",
            &["A"],
            Box::new(|t, w| {
                let (a, b) = t.g2("comul", &[w[0]]);
                let s = antipode_tensor(t, b);
                vec![t.g1("mul", &[a, s])]
            }),
            Box::new(counit_unit),
        )?;
        let b_counit_unit = |t: &mut Tpl, w: &[W]| {
            counit_b_l(t, w[0]);
            vec![unit_b_l(t)]
        };
        self.eq(
            "hopf par left",
            &["B"],
            Box::new(|t, w| {
                let (a, b) = comul_b_l(t, w[0]);
                let s = antipode_par(t, a);
                vec![nabla_b_l(t, s, b)]
            }),
            Box::new(b_counit_unit),
        )?;
        self.eq(
            "hopf par right",
            &["B"],
            Box::new(|t, w| {
                let (a, b) = comul_b_l(t, w[0]);
                let s = antipode_par(t, b);
                vec![nabla_b_l(t, a, s)]
            }),
            Box::new(b_counit_unit),
        )
    }

    fn idempotent_complementary(&mut self) -> Result<(), StructureError> {
        fn ea(t: &mut Tpl, x: W) -> W {
            let b = t.g1("u", &[x]);
            t.g1("v", &[b])
        }
        fn eb(t: &mut Tpl, x: W) -> W {
            let a = t.g1("v", &[x]);
            t.g1("u", &[a])
        }
        fn uvu(t: &mut Tpl, b: W) -> W {
            let a = t.g1("v", &[b]);
            t.g1("u", &[a])
        }
        self.eq(
            "(a)",
            &["A"],
            Box::new(|t, w| {
                let x = ea(t, w[0]);
                let ub = unit_b_l(t);
                let b = lact(t, x, ub);
                let b = eb(t, b);
                counit_b_r(t, b);
                vec![]
            }),
            Box::new(|t, w| {
                let x = ea(t, w[0]);
                t.g("counit", &[x]);
                vec![]
            }),
        )?;
        self.eq(
            "(b)",
            &[],
            Box::new(|t, _| {
                let ub = unit_b_l(t);
                let a = t.g1("v", &[ub]);
                let (a1, a2) = t.g2("comul", &[a]);
                let b = t.g1("u", &[a1]);
                counit_b_r(t, b);
                vec![ea(t, a2)]
            }),
            Box::new(|t, _| {
                let u = t.g1("unit", &[]);
                vec![ea(t, u)]
            }),
        )?;
        self.eq(
            "(c)",
            &[],
            Box::new(|t, _| {
                let ub = unit_b_l(t);
                let a = t.g1("v", &[ub]);
                let (p, q) = rcoact(t, a);
                vec![t.g1("u", &[p]), eb(t, q)]
            }),
            Box::new(|t, _| {
                let u1 = unit_b_l(t);
                let u2 = unit_b_l(t);
                vec![uvu(t, u1), uvu(t, u2)]
            }),
        )?;
        self.eq(
            "(a) op",
            &["A"],
            Box::new(|t, w| {
                let x = ea(t, w[0]);
                let ub = unit_b_r(t);
                let b = ract(t, ub, x);
                let b = eb(t, b);
                counit_b_l(t, b);
                vec![]
            }),
            Box::new(|t, w| {
                let x = ea(t, w[0]);
                t.g("counit", &[x]);
                vec![]
            }),
        )?;
        self.eq(
            "(b) op",
            &[],
            Box::new(|t, _| {
                let ub = unit_b_r(t);
                let a = t.g1("v", &[ub]);
                let (a1, a2) = t.g2("comul", &[a]);
                let b = t.g1("u", &[a2]);
                counit_b_l(t, b);
                vec![ea(t, a1)]
            }),
            Box::new(|t, _| {
                let u = t.g1("unit", &[]);
                vec![ea(t, u)]
            }),
        )?;
        self.eq(
            "(c) op",
            &[],
            Box::new(|t, _| {
                let ub = unit_b_r(t);
                let a = t.g1("v", &[ub]);
                let (q, p) = lcoact(t, a);
                vec![eb(t, q), t.g1("u", &[p])]
            }),
            Box::new(|t, _| {
                let u1 = unit_b_r(t);
                let u2 = unit_b_r(t);
                vec![uvu(t, u1), uvu(t, u2)]
            }),
        )
    }

    fn bang_coherence(&mut self) -> Result<(), StructureError> {
        let pair = self.objs(&["BAd", "BAd"])?;
        self.eq_typed(
            "(!?mul)",
            &pair,
            Box::new(|t, w| {
                let x = t.g1("s_iso", &[w[0]]);
                let y = t.g1("s_iso", &[w[1]]);
                vec![t.g1("quest_nabla", &[x, y])]
            }),
            &pair,
            Box::new(|t, w| {
                let z = t.dag1("bang_comul", &[w[0], w[1]]);
                vec![t.g1("s_iso", &[z])]
            }),
        )?;
        self.eq(
            "(!?unit)",
            &[],
            Box::new(|t, _| vec![t.g1("quest_unit", &[])]),
            Box::new(|t, _| {
                let z = t.dag1("bang_counit", &[]);
                vec![t.g1("s_iso", &[z])]
            }),
        )?;
        self.eq(
            "(!?delta)",
            &["BBAd"],
            Box::new(|t, w| {
                let x = t.g1("s_outer", &[w[0]]);
                let x = t.g1("quest_s", &[x]);
                vec![t.g1("quest_mu", &[x])]
            }),
            Box::new(|t, w| {
                let z = t.dag1("bang_delta", &[w[0]]);
                vec![t.g1("s_iso", &[z])]
            }),
        )?;
        self.eq(
            "(!?eta)",
            &["Ad"],
            Box::new(|t, w| vec![t.g1("quest_eta", &[w[0]])]),
            Box::new(|t, w| {
                let z = t.dag1("bang_eps", &[w[0]]);
                vec![t.g1("s_iso", &[z])]
            }),
        )?;
        self.eq(
            "(!?iota)",
            &["QAdd"],
            Box::new(|t, w| vec![t.g1("t_iso", &[w[0]])]),
            Box::new(|t, w| t.dag("s_iso", &[w[0]])),
        )
    }
}

// ----- derived maps used by several suites -----------------------------------

/// `B -> ⊥` from the unit and the left cap.
pub fn counit_b_l(t: &mut Tpl, b: W) {
    let u = t.g1("unit", &[]);
    t.g("eps_L", &[b, u]);
}

/// `B -> ⊥` from the unit and the right cap.
pub fn counit_b_r(t: &mut Tpl, b: W) {
    let u = t.g1("unit", &[]);
    t.g("eps_R", &[u, b]);
}

/// `⊤ -> B` from the counit and the left cup.
pub fn unit_b_l(t: &mut Tpl) -> W {
    let (a, b) = t.g2("eta_L", &[]);
    t.g("counit", &[a]);
    b
}

/// `⊤ -> B` from the counit and the right cup.
pub fn unit_b_r(t: &mut Tpl) -> W {
    let (b, a) = t.g2("eta_R", &[]);
    t.g("counit", &[a]);
    b
}

/// `B -> B ⊕ B` from the multiplication and two left cups.
pub fn comul_b_l(t: &mut Tpl, b: W) -> (W, W) {
    let (ar, o1) = t.g2("eta_L", &[]);
    let (al, o2) = t.g2("eta_L", &[]);
    let m = t.g1("mul", &[al, ar]);
    t.g("eps_L", &[b, m]);
    (o1, o2)
}

/// `B -> B ⊕ B` from the multiplication and two right cups.
pub fn comul_b_r(t: &mut Tpl, b: W) -> (W, W) {
    let (o1, ar) = t.g2("eta_R", &[]);
    let (o2, al) = t.g2("eta_R", &[]);
    let m = t.g1("mul", &[al, ar]);
    t.g("eps_R", &[m, b]);
    (o1, o2)
}

/// `B ⊗ B -> B` from the comultiplication and the left dual.
pub fn nabla_b_l(t: &mut Tpl, b1: W, b2: W) -> W {
    let (a, o) = t.g2("eta_L", &[]);
    let (x1, x2) = t.g2("comul", &[a]);
    t.g("eps_L", &[b1, x2]);
    t.g("eps_L", &[b2, x1]);
    o
}

/// `B ⊗ B -> B` from the comultiplication and the right dual.
pub fn nabla_b_r(t: &mut Tpl, b1: W, b2: W) -> W {
    let (o, a) = t.g2("eta_R", &[]);
    let (x1, x2) = t.g2("comul", &[a]);
    t.g("eps_R", &[x1, b2]);
    t.g("eps_R", &[x2, b1]);
    o
}

/// Left action `A ⊗ B -> B` built from the multiplication and the right dual.
pub fn lact(t: &mut Tpl, a: W, b: W) -> W {
    let (bo, a1) = t.g2("eta_R", &[]);
    let m = t.g1("mul", &[a1, a]);
    t.g("eps_R", &[m, b]);
    bo
}

/// Right action `B ⊗ A -> B` built from the multiplication and the left dual.
pub fn ract(t: &mut Tpl, b: W, a: W) -> W {
    let (a1, bo) = t.g2("eta_L", &[]);
    let m = t.g1("mul", &[a, a1]);
    t.g("eps_L", &[b, m]);
    bo
}

/// Left coaction `A -> B ⊕ A`.
pub fn lcoact(t: &mut Tpl, x: W) -> (W, W) {
    let (b, a1) = t.g2("eta_R", &[]);
    (b, t.g1("mul", &[a1, x]))
}

/// Right coaction `A -> A ⊕ B`.
pub fn rcoact(t: &mut Tpl, x: W) -> (W, W) {
    let (a1, b) = t.g2("eta_L", &[]);
    (t.g1("mul", &[x, a1]), b)
}

/// The `⊗` antipode circuit `A -> A`.
pub fn antipode_tensor(t: &mut Tpl, x: W) -> W {
    let w = unit_b_l(t);
    let (w1, w2) = t.g2("comul", &[w]);
    let m = t.g1("mul", &[x, w2]);
    counit_b_r(t, m);
    w1
}

/// The `⊕` antipode circuit `B -> B`.
pub fn antipode_par(t: &mut Tpl, x: W) -> W {
    let w = t.g1("unit", &[]);
    let (w1, w2) = comul_b_l(t, w);
    let m = nabla_b_l(t, x, w2);
    t.g("counit", &[m]);
    w1
}
