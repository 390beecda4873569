//! Built-in example gadgets and small constructors for algebraic test data.

use super::gadget::Gadget;
use crate::matrix::{c, ComplexMatrix, C64};
use crate::model::{AtomSpace, ModelEnv};
use crate::object::ObjectExpr;

/// Names accepted by [`builtin`], in listing order.
pub const BUILTIN_NAMES: [&str; 4] = ["weil", "quad4", "quad4-flip", "qubit-zx"];

/// Looks up a built-in gadget by name.
pub fn builtin(name: &str) -> Option<Gadget> {
    match name {
        "weil" => Some(weil()),
        "quad4" => Some(quad4(false)),
        "quad4-flip" => Some(quad4(true)),
        "qubit-zx" => Some(qubit_zx()),
        _ => None,
    }
}

/// The cup `Σ_i |ii⟩` as an `n² x 1` column.
pub fn canonical_cup(n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(
        n * n,
        1,
        |r, _| if r % (n + 1) == 0 { c(1.0, 0.0) } else { c(0.0, 0.0) },
    )
}

/// The cap `Σ_i ⟨ii|` as a `1 x n²` row.
pub fn canonical_cap(n: usize) -> ComplexMatrix {
    canonical_cup(n).transpose()
}

/// Multiplication `A ⊗ A -> A` from a structure-constant function
/// `(i, j) -> [(k, coefficient)]`.
pub fn mul_from_table(n: usize, table: impl Fn(usize, usize) -> Vec<(usize, C64)>) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(n, n * n);
    for i in 0..n {
        for j in 0..n {
            for (k, z) in table(i, j) {
                m.set(k, i * n + j, m.get(k, i * n + j) + z);
            }
        }
    }
    m
}

/// Basis vector `|i⟩` of dimension `n`.
pub fn ket(n: usize, i: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, 1, |r, _| if r == i { c(1.0, 0.0) } else { c(0.0, 0.0) })
}

/// The copying comultiplication `|i⟩ -> |ii⟩`.
pub fn copy_comul(n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n * n, n, |r, i| if r == i * n + i { c(1.0, 0.0) } else { c(0.0, 0.0) })
}

/// The deleting counit `Σ_i ⟨i|`.
pub fn delete_counit(n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(1, n, |_, _| c(1.0, 0.0))
}

/// Adds canonical left and right duals between the `A` and `B` roles.
pub fn with_canonical_duals(g: Gadget, n: usize) -> Gadget {
    g.with("eta_L", canonical_cup(n))
        .with("eps_L", canonical_cap(n))
        .with("eta_R", canonical_cup(n))
        .with("eps_R", canonical_cap(n))
}

fn env_with(labels: &[&str]) -> ModelEnv {
    ModelEnv::new(3).with_atom("A", AtomSpace::with_labels(labels))
}

/// Dual numbers `ℂ[x]/(x²)` as a commutative dagger linear monoid.
pub fn weil() -> Gadget {
    let one = c(1.0, 0.0);
    let mul = mul_from_table(2, |i, j| match (i, j) {
        (0, k) | (k, 0) => vec![(k, one)],
        _ => vec![],
    });
    let mut g = Gadget::new("linear-monoid", env_with(&["1", "x"]))
        .with_object("A", ObjectExpr::atom("A"))
        .with_object("B", ObjectExpr::dagger(ObjectExpr::atom("A")))
        .with("mul", mul)
        .with("unit", ket(2, 0))
        .with("alpha", ComplexMatrix::identity(2));
    g = with_canonical_duals(g, 2);
    g.notes = Some(
        "dual witness: canonical basis cup and cap on both sides; alpha is the identity as a candidate coincidence map"
            .into(),
    );
    g
}

/// The four-dimensional algebra with `xy = iz` and `yx = -iz`, or with
/// `xy = yx = -iz` when `flip` is set. All other products of generators
/// vanish, including the unspecified `yz` and `zy`.
pub fn quad4(flip: bool) -> Gadget {
    let one = c(1.0, 0.0);
    let (xy, yx) = if flip {
        (c(0.0, -1.0), c(0.0, -1.0))
    } else {
        (c(0.0, 1.0), c(0.0, -1.0))
    };
    let mul = mul_from_table(4, |i, j| match (i, j) {
        (0, k) | (k, 0) => vec![(k, one)],
        (1, 2) => vec![(3, xy)],
        (2, 1) => vec![(3, yx)],
        _ => vec![],
    });
    let kind = if flip { "linear-monoid" } else { "dagger-linear-monoid" };
    let mut g = Gadget::new(kind, env_with(&["1", "x", "y", "z"]))
        .with_object("A", ObjectExpr::atom("A"))
        .with_object("B", ObjectExpr::dagger(ObjectExpr::atom("A")))
        .with("mul", mul)
        .with("unit", ket(4, 0))
        .with("alpha", ComplexMatrix::identity(4));
    g = with_canonical_duals(g, 4);
    g.notes = Some(
        "dual witness: canonical basis cup and cap; products yz and zy are set to 0; alpha is the identity".into(),
    );
    g
}

/// Cyclic group `Z_n` as a complementary pair: the group algebra
/// multiplication with the copying comonoid, self-dual through the
/// canonical cup.
pub fn cyclic_pair(n: usize) -> Gadget {
    group_pair(n, |i, j| (i + j) % n, 0)
}

/// Group algebra of a finite group given by its multiplication table, with
/// the copying comonoid and canonical duals on `B = A`.
pub fn group_pair(n: usize, op: impl Fn(usize, usize) -> usize, identity: usize) -> Gadget {
    let one = c(1.0, 0.0);
    let labels: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
    let g = Gadget::new("complementary", env_with(&refs))
        .with_object("A", ObjectExpr::atom("A"))
        .with_object("B", ObjectExpr::atom("A"))
        .with("mul", mul_from_table(n, |i, j| vec![(op(i, j), one)]))
        .with("unit", ket(n, identity))
        .with("comul", copy_comul(n))
        .with("counit", delete_counit(n))
        .with("alpha", ComplexMatrix::identity(n));
    with_canonical_duals(g, n)
}

/// The qubit pair: XOR multiplication with unit `|0⟩` and the copying
/// comonoid on the computational basis.
pub fn qubit_zx() -> Gadget {
    let mut g = cyclic_pair(2);
    g.env = env_with(&["0", "1"]);
    g.notes = Some("X monoid written in the Z basis; alpha is the identity".into());
    g
}

/// The monoid `{0, 1}` under multiplication with the copying comonoid.
/// It is a bialgebra that is not complementary.
pub fn boolean_pair() -> Gadget {
    let mut g = group_pair(2, |i, j| i * j, 1);
    g.kind = "linear-bialgebra".into();
    g
}

/// Every role of every suite on the unit object with matrix `[1]`.
pub fn trivial() -> Gadget {
    let one = ComplexMatrix::identity(1);
    let mut g = Gadget::new("trivial", ModelEnv::new(3));
    for role in ["A", "B", "A2", "B2"] {
        g = g.with_object(role, ObjectExpr::Top);
    }
    for role in [
        "mul", "unit", "comul", "counit", "eta", "eps", "eta_L", "eps_L", "eta_R", "eps_R", "eta2", "eps2", "f", "g",
        "u", "v", "alpha", "phi", "ea", "eb", "lact", "ract", "lcoact", "rcoact", "bcomul", "bcounit",
    ] {
        g = g.with(role, one.clone());
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::suites::{check_suite, Suite, Window};

    fn pass(g: &Gadget, s: Suite) -> bool {
        check_suite(g, s, 1e-9, Window::Full).unwrap().pass
    }

    #[test]
    fn weil_is_a_dagger_linear_monoid_but_not_frobenius() {
        let g = weil();
        assert!(pass(&g, Suite::LinearMonoid));
        assert!(pass(&g, Suite::DaggerLinearMonoid));
        let r = check_suite(&g, Suite::FrobeniusCoincidence, 1e-9, Window::Full).unwrap();
        assert!(r.fails_strongly(), "{r:?}");
    }

    #[test]
    fn quad4_variants() {
        let g = quad4(false);
        assert!(pass(&g, Suite::DaggerLinearMonoid));
        assert!(check_suite(&g, Suite::FrobeniusCoincidence, 1e-9, Window::Full)
            .unwrap()
            .fails_strongly());
        let f = quad4(true);
        assert!(pass(&f, Suite::LinearMonoid));
        assert!(check_suite(&f, Suite::DaggerLinearMonoid, 1e-9, Window::Full)
            .unwrap()
            .fails_strongly());
    }

    #[test]
    fn qubit_pair_is_complementary_and_hopf() {
        let g = qubit_zx();
        let r = check_suite(&g, Suite::Complementary, 1e-12, Window::Full).unwrap();
        assert!(r.pass, "{r:?}");
        assert!(pass(&g, Suite::Hopf));
    }

    #[test]
    fn boolean_monoid_is_a_bialgebra_but_not_complementary() {
        let g = boolean_pair();
        assert!(pass(&g, Suite::LinearBialgebra));
        assert!(check_suite(&g, Suite::Complementary, 1e-9, Window::Full)
            .unwrap()
            .fails_strongly());
    }

    #[test]
    fn trivial_gadget_passes_every_applicable_suite() {
        let g = trivial();
        for s in Suite::ALL {
            if let Ok(r) = check_suite(&g, s, 1e-12, Window::Full) {
                assert!(r.pass, "{s}: {r:?}");
            }
        }
    }

    #[test]
    fn cyclic_pairs_are_complementary() {
        for n in 1..=4 {
            assert!(pass(&cyclic_pair(n), Suite::Complementary), "Z_{n}");
            assert!(pass(&cyclic_pair(n), Suite::Hopf), "Z_{n}");
        }
    }
}
