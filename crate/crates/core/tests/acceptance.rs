//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero when any criterion fails. Tolerances and time budgets are the
//! constants below.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use ldc_core::circuit::{self, compose, isomorphic, tensor_parallel, Circuit, NodeKind};
use ldc_core::exponential::{bang_functor, build_exp, comonad_coassoc_residual, MultisetBasis};
use ldc_core::matrix::{c, matrices_equal, residual, split_idempotent, ComplexMatrix};
use ldc_core::model::{evaluate, AtomSpace, ModelEnv};
use ldc_core::object::ObjectExpr;
use ldc_core::rewrite::{expand_wire, normalize, step};
use ldc_core::structures::builtins::{builtin, canonical_cap, canonical_cup, qubit_zx};
use ldc_core::structures::lemmas::{check_lemma, lemma_instance, Lemma};
use ldc_core::structures::ops::split_binary_idempotent;
use ldc_core::structures::pipeline::{coherence_gadget, run_pipeline};
use ldc_core::structures::{check_suite, Gadget, Suite, Window};
use ldc_core::validity::{validate, validate_all_orders};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const VALIDATE_BUDGET: Duration = Duration::from_millis(100);
const ORDER_SEEDS: u64 = 20;
const MIN_CORPUS: usize = 15;
const REWRITE_BUDGET: Duration = Duration::from_secs(1);
const SNAKE_TOL: f64 = 1e-12;
const COMPOSE_TOL: f64 = 1e-10;
const COMPOSE_PAIRS: usize = 100;
const SPLIT_TOL: f64 = 1e-8;
const SPLIT_CASES: usize = 100;
const SUITE_TOL: f64 = 1e-9;
const STRONG_FAILURE: f64 = 1e3;
const EXAMPLES_BUDGET: Duration = Duration::from_secs(1);
const COMPLEMENTARY_TOL: f64 = 1e-12;
const PERTURBATION: f64 = 1e-3;
const PERTURBED_TOL: f64 = 1e-9;
const EXP_DEGREE: usize = 3;
const EXP_TOL: f64 = 1e-9;
const FUNCTOR_TOL: f64 = 1e-10;
const FUNCTOR_PAIRS: usize = 50;
const EXP_BUDGET: Duration = Duration::from_secs(30);
const PIPELINE_TOL: f64 = 1e-8;
const PIPELINE_BUDGET: Duration = Duration::from_secs(60);

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Outcome {
            pass,
            detail: detail.into(),
        }
    }
}

fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

/// Every corpus circuit with its expected validity, in manifest order.
fn corpus() -> Vec<(String, Circuit, bool)> {
    let dir = fixtures_dir();
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("corpus.json")).expect("manifest"))
            .expect("manifest json");
    let expected: BTreeMap<String, bool> = serde_json::from_value(manifest["valid"].clone()).expect("valid map");
    expected
        .into_iter()
        .map(|(name, valid)| {
            let bytes = std::fs::read(dir.join(format!("{name}.json"))).expect("fixture file");
            let c = circuit::parse(&bytes).unwrap_or_else(|e| panic!("{name}: {e}"));
            (name, c, valid)
        })
        .collect()
}

fn timed_validity(name: &str) -> (bool, bool, Duration) {
    let t = Instant::now();
    let bytes = std::fs::read(fixtures_dir().join(format!("{name}.json"))).expect("fixture");
    let c = circuit::parse(&bytes).expect("fixture parses");
    let r = validate(&c).expect("validates");
    (r.valid, r.stuck.is_some(), t.elapsed())
}

fn criterion_1() -> Outcome {
    let (left_valid, _, left_t) = timed_validity("left-distributor");
    let (rev_valid, rev_stuck, rev_t) = timed_validity("reverse-distributor");
    let corpus = corpus();
    let seeds: Vec<u64> = (0..ORDER_SEEDS).collect();
    let thinning = corpus
        .iter()
        .filter(|(_, c, _)| {
            c.nodes()
                .iter()
                .any(|n| matches!(n.kind, NodeKind::TopElim { .. } | NodeKind::BotIntro { .. }))
        })
        .count();
    let mut mismatched = Vec::new();
    let mut disagree = Vec::new();
    for (name, c, valid) in &corpus {
        if validate(c).map(|r| r.valid).ok() != Some(*valid) {
            mismatched.push(name.clone());
        }
        if !validate_all_orders(c, &seeds) {
            disagree.push(name.clone());
        }
    }
    let pass = left_valid
        && !rev_valid
        && rev_stuck
        && left_t < VALIDATE_BUDGET
        && rev_t < VALIDATE_BUDGET
        && corpus.len() >= MIN_CORPUS
        && thinning > 0
        && mismatched.is_empty()
        && disagree.is_empty();
    Outcome::new(
        pass,
        format!(
            "left valid={left_valid} in {left_t:.2?}, reverse valid={rev_valid} stuck={rev_stuck} in {rev_t:.2?}; \
             {} fixtures ({thinning} with thinning links), {ORDER_SEEDS} seeds; unexpected verdicts {mismatched:?}, \
             order disagreements {disagree:?}",
            corpus.len()
        ),
    )
}

fn criterion_2() -> Outcome {
    let t = Instant::now();
    let corpus = corpus();
    let mut problems = Vec::new();
    let mut steps = 0;
    let mut expansions = 0;
    for (name, c, _) in &corpus {
        let mut cur = c.clone();
        while let Some((rule, next)) = step(&cur) {
            if next.nodes().len() >= cur.nodes().len() {
                problems.push(format!("{name}: {rule} did not shrink"));
                break;
            }
            steps += 1;
            cur = next;
        }
        let n = normalize(c);
        if !isomorphic(&n, &cur) {
            problems.push(format!("{name}: normalize differs from stepping"));
        }
        if validate(c).map(|r| r.valid).ok() != validate(&n).map(|r| r.valid).ok() {
            problems.push(format!("{name}: validity changed"));
        }
        for w in n.wires() {
            if !matches!(
                w.ty,
                ObjectExpr::Top | ObjectExpr::Bot | ObjectExpr::Tensor(..) | ObjectExpr::Par(..)
            ) {
                continue;
            }
            match expand_wire(&n, &w.id) {
                Ok(e) => {
                    expansions += 1;
                    if !isomorphic(&normalize(&e), &n) {
                        problems.push(format!("{name}: expanding {} does not round-trip", w.id));
                    }
                }
                Err(err) => problems.push(format!("{name}: {err}")),
            }
        }
    }
    let elapsed = t.elapsed();
    Outcome::new(
        problems.is_empty() && elapsed < REWRITE_BUDGET,
        format!(
            "{} circuits, {steps} reduction steps, {expansions} expansions round-tripped, {elapsed:.2?}; problems {problems:?}",
            corpus.len()
        ),
    )
}

fn atom(name: &str) -> ObjectExpr {
    ObjectExpr::atom(name)
}

fn snake_residual(n: usize) -> f64 {
    let (a, b) = (atom("A"), atom("B"));
    let mut env = ModelEnv::new(1)
        .with_atom("A", AtomSpace::new(n))
        .with_atom("B", AtomSpace::new(n));
    env.assign("eta", canonical_cup(n));
    env.assign("eps", canonical_cap(n));
    let eta = Circuit::generator("eta", vec![], vec![a.clone(), b.clone()]);
    let eps = Circuit::generator("eps", vec![b.clone(), a.clone()], vec![]);
    let snake_a = compose(
        &tensor_parallel(&eta, &Circuit::id_wire(a.clone())),
        &tensor_parallel(&Circuit::id_wire(a.clone()), &eps),
    )
    .expect("snake on A composes");
    let snake_b = compose(
        &tensor_parallel(&Circuit::id_wire(b.clone()), &eta),
        &tensor_parallel(&eps, &Circuit::id_wire(b.clone())),
    )
    .expect("snake on B composes");
    let id = ComplexMatrix::identity(n);
    let ra = residual(&evaluate(&snake_a, &env).expect("evaluates"), &id);
    let rb = residual(&evaluate(&snake_b, &env).expect("evaluates"), &id);
    ra.max(rb)
}

fn criterion_3() -> Outcome {
    let snake = (1..=4).map(snake_residual).fold(0.0, f64::max);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst: f64 = 0.0;
    let mut all_ok = true;
    for _ in 0..COMPOSE_PAIRS {
        let mut env = ModelEnv::new(1);
        let names = ["P", "Q", "R", "S", "T"];
        for name in names {
            env = env.with_atom(name, AtomSpace::new(rng.gen_range(1..=4)));
        }
        let pick = |rng: &mut ChaCha8Rng| -> Vec<ObjectExpr> {
            (0..rng.gen_range(1..=2))
                .map(|_| atom(names[rng.gen_range(0..4)]))
                .collect()
        };
        let (dom, mid, cod) = (pick(&mut rng), pick(&mut rng), pick(&mut rng));
        let f_m = ComplexMatrix::random(
            env.dims_product(&mid).unwrap(),
            env.dims_product(&dom).unwrap(),
            &mut rng,
        );
        let g_m = ComplexMatrix::random(
            env.dims_product(&cod).unwrap(),
            env.dims_product(&mid).unwrap(),
            &mut rng,
        );
        env.assign("f", f_m.clone());
        env.assign("g", g_m.clone());
        let mut f = Circuit::generator("f", dom, mid.clone());
        let mut g = Circuit::generator("g", mid, cod);
        let mut expected = f_m.then(&g_m);
        if rng.gen_bool(0.5) {
            let side = Circuit::id_wire(atom("T"));
            f = tensor_parallel(&f, &side);
            g = tensor_parallel(&g, &side);
            let id = ComplexMatrix::identity(env.dim(&atom("T")).unwrap());
            expected = f_m.kron(&id).then(&g_m.kron(&id));
        }
        let fg = compose(&f, &g).expect("composable");
        let whole = evaluate(&fg, &env).expect("evaluates");
        let parts = evaluate(&f, &env).unwrap().then(&evaluate(&g, &env).unwrap());
        for other in [&parts, &expected] {
            let (ok, r) = matrices_equal(&whole, other, COMPOSE_TOL).unwrap();
            all_ok &= ok;
            worst = worst.max(r);
        }
    }
    Outcome::new(
        snake <= SNAKE_TOL && all_ok,
        format!("snake residual {snake:.1e} on dims 1-4; {COMPOSE_PAIRS} composable pairs, worst residual {worst:.1e}"),
    )
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst_split: f64 = 0.0;
    let mut worst_iso: f64 = 0.0;
    let mut errors = Vec::new();
    for i in 0..SPLIT_CASES {
        let n = 1 + i % 6;
        let rank = rng.gen_range(0..=n);
        let e = ComplexMatrix::random_projector(n, rank, &mut rng);
        match split_idempotent(&e, SPLIT_TOL) {
            Ok((r, s)) => {
                if r.rows() != rank {
                    errors.push(format!("case {i}: rank {} instead of {rank}", r.rows()));
                }
                worst_split = worst_split.max(residual(&r.then(&s), &e));
                worst_split = worst_split.max(residual(&s.then(&r), &ComplexMatrix::identity(r.rows())));
            }
            Err(err) => errors.push(format!("case {i}: {err}")),
        }
        let na = n;
        let nb = rng.gen_range(1..=6);
        let k = rng.gen_range(0..=na.min(nb));
        let p = ComplexMatrix::random_invertible(nb, &mut rng);
        let q = ComplexMatrix::random_invertible(na, &mut rng);
        let d = ComplexMatrix::from_fn(
            nb,
            na,
            |r, col| if r == col && r < k { c(1.0, 0.0) } else { c(0.0, 0.0) },
        );
        let u = p.mul(&d).mul(&q);
        let v = q.inverse().unwrap().mul(&d.transpose()).mul(&p.inverse().unwrap());
        let env = ModelEnv::new(1)
            .with_atom("A", AtomSpace::new(na))
            .with_atom("B", AtomSpace::new(nb));
        let g = Gadget::new("binary-idempotent", env)
            .with_object("A", atom("A"))
            .with_object("B", atom("B"))
            .with("u", u)
            .with("v", v);
        match split_binary_idempotent(&g, SPLIT_TOL) {
            Ok(b) => {
                let id = ComplexMatrix::identity(b.alpha.rows());
                worst_iso = worst_iso.max(residual(&b.alpha.then(&b.beta), &id));
                worst_iso = worst_iso.max(residual(&b.beta.then(&b.alpha), &id));
            }
            Err(err) => errors.push(format!("binary case {i}: {err}")),
        }
    }
    Outcome::new(
        errors.is_empty() && worst_split <= SPLIT_TOL && worst_iso <= SPLIT_TOL,
        format!(
            "{SPLIT_CASES} projectors: split residual {worst_split:.1e}; {SPLIT_CASES} binary idempotents: \
             alpha/beta residual {worst_iso:.1e}; errors {errors:?}"
        ),
    )
}

fn criterion_5() -> Outcome {
    let t = Instant::now();
    let mut ok = true;
    let mut parts = Vec::new();
    for name in ["weil", "quad4"] {
        let g = builtin(name).unwrap();
        let lm = check_suite(&g, Suite::LinearMonoid, SUITE_TOL, Window::Full).unwrap();
        let dlm = check_suite(&g, Suite::DaggerLinearMonoid, SUITE_TOL, Window::Full).unwrap();
        let fc = check_suite(&g, Suite::FrobeniusCoincidence, SUITE_TOL, Window::Full).unwrap();
        ok &= lm.pass && dlm.pass && fc.worst >= STRONG_FAILURE * SUITE_TOL;
        parts.push(format!(
            "{name}: linear {:.0e}, dagger {:.0e}, coincidence worst {:.1e}",
            lm.worst, dlm.worst, fc.worst
        ));
    }
    let flip = builtin("quad4-flip").unwrap();
    let lm = check_suite(&flip, Suite::LinearMonoid, SUITE_TOL, Window::Full).unwrap();
    let dlm = check_suite(&flip, Suite::DaggerLinearMonoid, SUITE_TOL, Window::Full).unwrap();
    ok &= lm.pass && dlm.worst >= STRONG_FAILURE * SUITE_TOL;
    parts.push(format!(
        "quad4-flip: linear {:.0e}, dagger worst {:.1e}",
        lm.worst, dlm.worst
    ));
    let elapsed = t.elapsed();
    Outcome::new(
        ok && elapsed < EXAMPLES_BUDGET,
        format!("{}; {elapsed:.2?}", parts.join("; ")),
    )
}

/// Roles read by the complementarity and Hopf equations.
const STRUCTURE_ROLES: [&str; 8] = ["mul", "unit", "comul", "counit", "eta_L", "eps_L", "eta_R", "eps_R"];

fn criterion_6() -> Outcome {
    let g = qubit_zx();
    let comp = check_suite(&g, Suite::Complementary, COMPLEMENTARY_TOL, Window::Full).unwrap();
    let hopf = check_suite(&g, Suite::Hopf, COMPLEMENTARY_TOL, Window::Full).unwrap();
    let labels_present = ["comp.1", "comp.2", "comp.3"]
        .iter()
        .all(|l| comp.residual(l).is_some())
        && [
            "hopf tensor left",
            "hopf tensor right",
            "hopf par left",
            "hopf par right",
        ]
        .iter()
        .all(|l| hopf.residual(l).is_some());
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut insensitive = Vec::new();
    let mut smallest_worst = f64::INFINITY;
    for role in STRUCTURE_ROLES {
        let m = g.morphism(role).unwrap();
        let dir = ComplexMatrix::random(m.rows(), m.cols(), &mut rng);
        let bump = dir.scale(c(PERTURBATION / dir.max_abs(), 0.0));
        let p = g.clone().with(role, m.add(&bump));
        let rc = check_suite(&p, Suite::Complementary, PERTURBED_TOL, Window::Full).unwrap();
        let rh = check_suite(&p, Suite::Hopf, PERTURBED_TOL, Window::Full).unwrap();
        if rc.pass && rh.pass {
            insensitive.push(role);
        }
        smallest_worst = smallest_worst.min(rc.worst.max(rh.worst));
    }
    Outcome::new(
        comp.pass && hopf.pass && labels_present && insensitive.is_empty(),
        format!(
            "complementary worst {:.0e}, hopf worst {:.0e}; perturbing each of {} roles by {PERTURBATION:.0e}: \
             smallest worst residual {smallest_worst:.1e}, insensitive {insensitive:?}",
            comp.worst,
            hopf.worst,
            STRUCTURE_ROLES.len()
        ),
    )
}

fn is_integer_matrix(m: &ComplexMatrix) -> bool {
    m.entries().iter().all(|z| z.im == 0.0 && z.re.fract() == 0.0)
}

fn criterion_7() -> Outcome {
    let t = Instant::now();
    let labels = vec!["0".to_string(), "1".to_string()];
    let e = build_exp(&labels, EXP_DEGREE);
    let integer = is_integer_matrix(&e.delta_co) && is_integer_matrix(&e.counit_e) && is_integer_matrix(&e.delta);
    let law = e.comonoid().law_residual();
    let cocomm = residual(&e.delta_co.then(&ComplexMatrix::swap(e.dim(), e.dim())), &e.delta_co);
    let id = ComplexMatrix::identity(e.dim());
    let mut eps_outer = ComplexMatrix::zeros(e.dim(), e.outer.len());
    for a in 0..e.dim() {
        eps_outer.set(a, e.outer.index_of(&[a]).unwrap(), c(1.0, 0.0));
    }
    let counit_outer = residual(&e.delta.then(&eps_outer), &id);
    let counit_bang = residual(&e.delta.then(&bang_functor(&e.eps, &e.outer, &e.basis).unwrap()), &id);
    let coassoc = comonad_coassoc_residual(&e);
    let comonad = counit_outer.max(counit_bang).max(coassoc);
    let coherence = check_suite(
        &coherence_gadget(2, EXP_DEGREE),
        Suite::DaggerBangCoherence,
        EXP_TOL,
        Window::Total(EXP_DEGREE),
    )
    .unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut functor_ok = true;
    let mut functor_worst: f64 = 0.0;
    let ba = MultisetBasis::numeric(2, EXP_DEGREE);
    let (ok, r) = matrices_equal(
        &bang_functor(&ComplexMatrix::identity(2), &ba, &ba).unwrap(),
        &ComplexMatrix::identity(ba.len()),
        FUNCTOR_TOL,
    )
    .unwrap();
    functor_ok &= ok;
    functor_worst = functor_worst.max(r);
    for _ in 0..FUNCTOR_PAIRS {
        let nb = rng.gen_range(1..=3);
        let nc = rng.gen_range(1..=3);
        let bb = MultisetBasis::numeric(nb, EXP_DEGREE);
        let bc = MultisetBasis::numeric(nc, EXP_DEGREE);
        let f = ComplexMatrix::random(nb, 2, &mut rng);
        let g = ComplexMatrix::random(nc, nb, &mut rng);
        let whole = bang_functor(&f.then(&g), &ba, &bc).unwrap();
        let parts = bang_functor(&f, &ba, &bb)
            .unwrap()
            .then(&bang_functor(&g, &bb, &bc).unwrap());
        let (ok, r) = matrices_equal(&whole, &parts, FUNCTOR_TOL).unwrap();
        functor_ok &= ok;
        functor_worst = functor_worst.max(r);
    }
    let elapsed = t.elapsed();
    Outcome::new(
        integer
            && law == 0.0
            && cocomm == 0.0
            && comonad <= EXP_TOL
            && coherence.pass
            && functor_ok
            && elapsed < EXP_BUDGET,
        format!(
            "!A dim {}, !!A dim {}; comonoid law {law:.0e}, cocommutativity {cocomm:.0e}, integer {integer}; \
             comonad worst {comonad:.1e}; dagger coherence worst {:.1e}; functoriality over {FUNCTOR_PAIRS} pairs \
             worst {functor_worst:.1e}; {elapsed:.2?}",
            e.dim(),
            e.outer.len(),
            coherence.worst
        ),
    )
}

fn criterion_8() -> Outcome {
    let t = Instant::now();
    let g = qubit_zx();
    let (report, _) = match run_pipeline(&g, EXP_DEGREE, PIPELINE_TOL) {
        Ok(r) => r,
        Err(e) => return Outcome::new(false, format!("pipeline error: {e}")),
    };
    let conditions = report.conditions.as_ref().map_or(f64::INFINITY, |c| c.worst);
    let conditions_pass = report.conditions.as_ref().is_some_and(|c| c.pass);
    let labels_present = report
        .conditions
        .as_ref()
        .is_some_and(|c| ["(a)", "(b)", "(c)"].iter().all(|l| c.residual(l).is_some()));
    let elapsed = t.elapsed();
    Outcome::new(
        report.retraction == 0.0
            && report.idempotent_bang == 0.0
            && conditions_pass
            && labels_present
            && conditions <= PIPELINE_TOL
            && report.split.pass
            && report.recovered <= PIPELINE_TOL
            && report.pass
            && elapsed < PIPELINE_BUDGET,
        format!(
            "retraction {:.0e}, e_! idempotent {:.0e}, conditions worst {conditions:.1e}, split complementary {}, \
             recovered maps differ by {:.1e}; {elapsed:.2?}",
            report.retraction, report.idempotent_bang, report.split.pass, report.recovered
        ),
    )
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut ok = true;
    let mut parts = Vec::new();
    for lemma in Lemma::ALL {
        let mut cell = Vec::new();
        for sectional in [true, false] {
            let verdict =
                lemma_instance(lemma, sectional, &mut rng).and_then(|(g, sp)| check_lemma(&g, lemma, &sp, SPLIT_TOL));
            match verdict {
                Ok(v) => {
                    let confirmed = v.sectional.pass == sectional && v.agrees();
                    ok &= confirmed;
                    cell.push(format!(
                        "{} sectional={} morphism={}",
                        if sectional { "instance" } else { "counterexample" },
                        v.sectional.pass,
                        v.morphism.pass
                    ));
                }
                Err(e) => {
                    ok = false;
                    cell.push(format!("error {e}"));
                }
            }
        }
        parts.push(format!("{lemma}: {}", cell.join(", ")));
    }
    Outcome::new(ok, parts.join("; "))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 9] = [
        ("boxing validity", criterion_1),
        ("rewrite soundness", criterion_2),
        ("model kernel", criterion_3),
        ("idempotent splitting", criterion_4),
        ("counterexample reproduction", criterion_5),
        ("complementarity", criterion_6),
        ("exponential laws", criterion_7),
        ("exponential pipeline", criterion_8),
        ("split lemmas", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Outcome::new(false, format!("panicked: {msg}"))
        });
        if !outcome.pass {
            failed += 1;
        }
        println!(
            "criterion {}: {} {name}: {}",
            i + 1,
            if outcome.pass { "PASS" } else { "FAIL" },
            outcome.detail
        );
    }
    println!(
        "acceptance: {} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
