//! Seeded property suites.
//!
//! Each trial draws a genome (a short vector of integers) from a ChaCha8
//! stream keyed by `(seed, suite, trial)` and decodes it into matrices,
//! points or parameters. Failing genomes are shrunk greedily toward zero.

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::arrangement::{bounded_complex, enumerate_cells, is_generic, sample_region, signature_at, signature_system, solve};
use crate::error::Result;
use crate::mapping::{apply, is_fixed, piecewise_report, project};
use crate::matrix3::{conjugate, MonomialMatrix, TropMatrix3, PERMS};
use crate::normalform::{self, canonical_form, f_unchecked, make_l, normalizations, CanonicalParams};
use crate::projective::{collinear, cross, line_vertex, on_line, AffinePoint, ProjPoint, TropLine};
use crate::semiring::{frac, plane_norm, rat, t_add, t_min, t_mul, trop_distance, DualScalar, Rational, TropScalar};
use crate::triangle::{column_normal_representative, is_good, member, origin_in_soma, soma_dimension};

/// Replaceable pieces of the library, for mutation testing.
#[derive(Clone, Copy)]
pub struct Hooks {
    pub make_f: fn(&CanonicalParams) -> Result<TropMatrix3>,
}

impl Default for Hooks {
    fn default() -> Self {
        Hooks { make_f: normalform::make_f }
    }
}

pub enum Verdict {
    Pass,
    /// The genome does not meet the suite's precondition.
    Discard,
    Fail(String),
}

use Verdict::{Discard, Fail, Pass};

fn check(ok: bool, msg: impl FnOnce() -> String) -> Verdict {
    if ok {
        Pass
    } else {
        Fail(msg())
    }
}

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Fail(format!($($fmt)+));
        }
    };
}

pub struct Suite {
    pub name: &'static str,
    genes: usize,
    range: (i64, i64),
    check: fn(&[i64], &Hooks) -> Verdict,
    describe: fn(&[i64]) -> Value,
}

impl Suite {
    pub fn run_genome(&self, g: &[i64], hooks: &Hooks) -> Verdict {
        (self.check)(g, hooks)
    }

    pub fn describe(&self, g: &[i64]) -> Value {
        (self.describe)(g)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Counterexample {
    pub suite: String,
    pub trial: u64,
    pub genome: Vec<i64>,
    pub case: Value,
    pub message: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteOutcome {
    pub name: String,
    pub trials: u64,
    pub passed: u64,
    pub discarded: u64,
    pub failure: Option<Counterexample>,
}

impl SuiteOutcome {
    pub fn ok(&self) -> bool {
        self.failure.is_none()
    }
}

pub fn trial_rng(seed: u64, suite: usize, trial: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(((suite as u64) << 40) | trial);
    r
}

// Decoders.

fn q(v: i64, den: i64) -> Rational {
    frac(v, den)
}

fn matrix(g: &[i64]) -> TropMatrix3 {
    TropMatrix3::from_rationals(std::array::from_fn(|i| std::array::from_fn(|j| q(g[3 * i + j], 2))))
}

fn normal(g: &[i64]) -> TropMatrix3 {
    TropMatrix3::from_rationals(std::array::from_fn(|i| {
        std::array::from_fn(|j| if i == j { Rational::zero() } else { -q(g[3 * i + j].abs(), 2) })
    }))
}

fn point(g: &[i64]) -> ProjPoint {
    ProjPoint::new([0, 1, 2].map(|i| TropScalar::Finite(q(g[i], 3)))).expect("finite")
}

fn monomial(g: &[i64]) -> MonomialMatrix {
    let perm = PERMS[(g[0].rem_euclid(6)) as usize];
    MonomialMatrix::new(perm, [1, 2, 3].map(|i| q(g[i], 2))).expect("permutation")
}

/// Valid canonical parameters: 8 magnitudes and a denominator.
fn params(g: &[i64]) -> CanonicalParams {
    let den = 1 + g[8].rem_euclid(3);
    let r = |v: i64| q(v.abs(), den);
    let (mut d, mut dv, mut h) = (r(g[0]), [r(g[1]), r(g[2]), r(g[3])], [r(g[4]), r(g[5]), r(g[6])]);
    let gg = r(g[7]);
    if gg.is_positive() {
        d = Rational::zero();
        dv[0] = Rational::zero();
        h[0] = Rational::zero();
        h[2] = Rational::zero();
    }
    for j in 0..3 {
        if h[(j + 1) % 3].is_positive() {
            dv[j] = Rational::zero();
        }
    }
    CanonicalParams::new(d, dv, h, gg)
}

fn m_json(m: &TropMatrix3) -> Value {
    serde_json::to_value(m).expect("serializable")
}

fn p_json(p: &ProjPoint) -> Value {
    serde_json::to_value(p).expect("serializable")
}

// Suites.

fn semiring_laws(g: &[i64], _: &Hooks) -> Verdict {
    let s = |v: i64| if v % 7 == 0 { TropScalar::NegInf } else { TropScalar::Finite(q(v, 4)) };
    let (a, b, c) = (s(g[0]), s(g[1]), s(g[2]));
    ensure!(t_add(&a, &t_add(&b, &c)) == t_add(&t_add(&a, &b), &c), "⊕ associativity");
    ensure!(t_mul(&a, &t_mul(&b, &c)) == t_mul(&t_mul(&a, &b), &c), "⊙ associativity");
    ensure!(t_add(&a, &b) == t_add(&b, &a) && t_mul(&a, &b) == t_mul(&b, &a), "commutativity");
    ensure!(t_mul(&a, &t_add(&b, &c)) == t_add(&t_mul(&a, &b), &t_mul(&a, &c)), "distributivity");
    ensure!(t_add(&a, &a) == a, "⊕ idempotency");
    let (x, y) = (q(g[0], 4), q(g[1], 4));
    let lhs = t_min(&DualScalar::Finite(-x.clone()), &DualScalar::Finite(-y.clone()));
    let rhs = t_add(&TropScalar::Finite(x), &TropScalar::Finite(y)).neg_dual();
    check(lhs == rhs, || "min/max duality".to_string())
}

fn norm_axioms(g: &[i64], _: &Hooks) -> Verdict {
    let p = (q(g[0], 2), q(g[1], 2));
    let qq = (q(g[2], 2), q(g[3], 2));
    let r = (q(g[4], 2), q(g[5], 2));
    let k = rat(g[6].abs() % 9);
    let n = plane_norm(&p.0, &p.1);
    ensure!(!n.is_negative() && (n.is_zero() == (p.0.is_zero() && p.1.is_zero())), "positivity");
    ensure!(plane_norm(&(&k * &p.0), &(&k * &p.1)) == &k * &n, "homogeneity");
    let d = |a: &(Rational, Rational), b: &(Rational, Rational)| trop_distance((&a.0, &a.1), (&b.0, &b.1));
    check(d(&p, &r) <= d(&p, &qq) + d(&qq, &r), || "triangle inequality".to_string())
}

fn projective_laws(g: &[i64], _: &Hooks) -> Verdict {
    let (p, q2) = (point(&g[0..3]), point(&g[3..6]));
    let (lp, lq) = (TropLine::new(p.clone()), TropLine::new(q2.clone()));
    ensure!(on_line(&q2, &lp) == on_line(&p, &lq), "incidence duality");
    let c = cross(&p, &q2).expect("finite");
    ensure!(c == cross(&q2, &p).expect("finite"), "cross commutativity");
    let join = TropLine::new(c.clone());
    ensure!(on_line(&p, &join) && on_line(&q2, &join), "join misses a generator");
    let lhs = p.chart().expect("finite").add(&q2.chart().expect("finite"));
    let m = cross(&p.neg().expect("finite"), &q2.neg().expect("finite")).expect("finite");
    let rhs = c.neg().expect("finite").chart().expect("finite").add(&m.chart().expect("finite"));
    check(lhs == rhs, || format!("parallelogram: {lhs} vs {rhs}"))
}

fn power_chain(g: &[i64], _: &Hooks) -> Verdict {
    let a = normal(g);
    let (a2, a3) = (a.pow(2), a.pow(3));
    ensure!(TropMatrix3::identity().le(&a) && a.le(&a2) && a2.le(&a3), "I ≤ A ≤ A² ≤ A³ fails");
    ensure!(a2 == a3, "A² ≠ A³");
    let hat = a.adjoint_hat().expect("finite");
    ensure!(hat == a.join(&a.breve().expect("finite")) && hat == a2, "hat ≠ A ⊕ breve ≠ A²");
    ensure!(hat.is_normal(), "hat not normal");
    ensure!(a.kleene_star().expect("finite") == a2, "star ≠ A²");
    for j in 0..3 {
        let c = a2.col(j);
        ensure!(a.mul_vec(&c) == c, "column {} of A² is not an eigenvector with eigenvalue 0", j + 1);
    }
    Pass
}

fn monomial_laws(g: &[i64], _: &Hooks) -> Verdict {
    let (p, qm) = (monomial(&g[0..4]), monomial(&g[4..8]));
    let a = matrix(&g[8..17]);
    let pq = p.mul(&qm);
    ensure!(pq.to_matrix() == p.to_matrix().mul(&qm.to_matrix()), "monomial product");
    ensure!(p.mul(&p.inverse()) == MonomialMatrix::identity(), "monomial inverse");
    let cols = |m: &TropMatrix3| {
        let mut v: Vec<ProjPoint> = (0..3).map(|j| ProjPoint::new(m.col(j)).expect("finite")).collect();
        v.sort_by_key(|p| p.canonical());
        v
    };
    let moved = cols(&conjugate(&MonomialMatrix::identity(), &a, &qm));
    ensure!(moved == cols(&a), "right monomial changes the column set");
    let det = a.trop_det();
    ensure!(det == a.transpose().trop_det(), "det not transpose invariant");
    let sing = |m: &TropMatrix3| !m.trop_det().regular;
    check(sing(&a) == sing(&conjugate(&p, &a, &qm)), || "singularity not preserved".to_string())
}

fn good_idempotent(g: &[i64], _: &Hooks) -> Verdict {
    let a = normal(g);
    let good = is_good(&a).expect("finite");
    let idem = a.is_idempotent();
    let breve = a.breve().expect("finite").le(&a);
    check(good == idem && idem == breve, || format!("good={good} idempotent={idem} breve≤A={breve}"))
}

fn normalization(g: &[i64], _: &Hooks) -> Verdict {
    let a = matrix(g);
    let all = match normalizations(&a) {
        Ok(v) => v,
        Err(e) => return Fail(e.to_string()),
    };
    for n in &all {
        ensure!(n.n.is_normal(), "normalization not normal");
        ensure!(conjugate(&n.p, &a, &n.q) == n.n, "N ≠ P A Q");
    }
    let target = canonical_form(&a).expect("finite").params;
    for n in &all {
        let c = canonical_form(&n.n).expect("finite").params;
        ensure!(c == target, "normalizations disagree: {c:?} vs {target:?}");
    }
    Pass
}

fn square_root(g: &[i64], h: &Hooks) -> Verdict {
    let p = params(g);
    let f = match (h.make_f)(&p) {
        Ok(f) => f,
        Err(e) => return Fail(e.to_string()),
    };
    check(f.pow(2) == make_l(&p.d, &p.dv).expect("valid"), || "F² ≠ L".to_string())
}

fn forbidden_combination(g: &[i64], _: &Hooks) -> Verdict {
    let den = 1 + g[5].rem_euclid(3);
    let r = |v: i64| q(v.abs(), den);
    let (h1, gg) = (r(g[0]), r(g[1]));
    if h1.is_zero() || gg.is_zero() {
        return Discard;
    }
    let p = CanonicalParams::new(Rational::zero(), [Rational::zero(), r(g[2]), r(g[3])], [h1, r(g[4]), Rational::zero()], gg);
    let f = f_unchecked(&p);
    check(f.pow(2) != make_l(&p.d, &p.dv).expect("valid"), || "forbidden combination squares to L".to_string())
}

fn negative_dv(g: &[i64], _: &Hooks) -> Verdict {
    let d = q(g[0].abs() + 1, 2);
    let dv: [Rational; 3] = std::array::from_fn(|j| q(g[1 + j].abs(), 2));
    let l = make_l(&d, &dv).expect("valid");
    ensure!(l.is_normal() && l.is_idempotent(), "nonnegative d_j should be idempotent");
    // Pull one d_j into [-d, 0).
    let k = g[4].rem_euclid(3) as usize;
    let mut bent = dv.clone();
    bent[k] = -(&d * q(1 + g[5].abs() % 4, 4));
    let m = make_l(&d, &bent).expect("valid");
    check(m.is_normal() && !m.is_idempotent(), || format!("d_{} = {} keeps L idempotent or breaks normality", k + 1, bent[k]))
}

fn canonical_invariance(g: &[i64], _: &Hooks) -> Verdict {
    let a = matrix(&g[0..9]);
    let (p, qm) = (monomial(&g[9..13]), monomial(&g[13..17]));
    let c1 = canonical_form(&a).expect("finite").params;
    let c2 = canonical_form(&conjugate(&p, &a, &qm)).expect("finite").params;
    check(c1 == c2, || format!("{c1:?} vs {c2:?}"))
}

fn origin_soma(g: &[i64], _: &Hooks) -> Verdict {
    let a = if g[9] % 2 == 0 { normal(g) } else { matrix(g) };
    let inside = origin_in_soma(&a).expect("finite");
    let rep = column_normal_representative(&a).expect("finite").is_some();
    ensure!(inside == rep, "origin in soma = {inside}, column-normal = {rep}");
    check(!a.is_normal() || inside, || "normal matrix without the origin in its soma".to_string())
}

fn soma_maximality(g: &[i64], h: &Hooks) -> Verdict {
    let p = params(g);
    let f = match (h.make_f)(&p) {
        Ok(f) => f,
        Err(e) => return Fail(e.to_string()),
    };
    let l = f.pow(2);
    for j in 0..3 {
        let tip = ProjPoint::new(f.col(j)).expect("finite");
        ensure!(member(&tip, &f).expect("finite"), "column {} not in T_F", j + 1);
        let base = ProjPoint::new(l.col(j)).expect("finite");
        ensure!(member(&base, &f).expect("finite") && member(&base, &l).expect("finite"), "soma vertex outside");
        if tip != base {
            ensure!(!member(&tip, &l).expect("finite"), "antenna tip {} inside the soma", j + 1);
        }
    }
    Pass
}

fn cardinal_points(g: &[i64], _: &Hooks) -> Verdict {
    let c = normal(g).pow(2).chart0().expect("finite");
    let x = |j: usize| c.finite(0, j).expect("finite").clone();
    let y = |j: usize| c.finite(1, j).expect("finite").clone();
    check(
        x(0) >= x(1) && x(0) >= x(2) && y(1) >= y(0) && y(1) >= y(2) && x(2) <= x(1) && y(2) <= y(0),
        || "columns of A² out of cardinal order".to_string(),
    )
}

fn partition(g: &[i64], _: &Hooks) -> Verdict {
    let a = TropMatrix3::ints(std::array::from_fn(|i| std::array::from_fn(|j| g[3 * i + j] % 5)));
    let arr = enumerate_cells(&a);
    ensure!(arr.counts[0] <= 6 && arr.counts[1] <= 15 && arr.counts[2] <= 10, "cell counts {:?}", arr.counts);
    ensure!(arr.euler() == 1, "Euler count {}", arr.euler());
    let p = AffinePoint::new(q(g[9], 3), q(g[10], 3));
    let s = signature_at(&a, &p);
    ensure!(arr.find(&s).is_some(), "signature {s} not enumerated");
    let system = signature_system(&a, &s).expect("enumerated");
    check(system.iter().all(|c| c.holds(&p)), || format!("point {p} violates cell {s}"))
}

fn generic_census(g: &[i64], _: &Hooks) -> Verdict {
    let a = TropMatrix3::from_rationals(std::array::from_fn(|i| std::array::from_fn(|j| q(g[3 * i + j], 7))));
    if !is_generic(&a) {
        return Discard;
    }
    let arr = enumerate_cells(&a);
    ensure!(arr.counts == [6, 15, 10] && arr.euler() == 1, "census {:?}", arr.counts);
    let rows: Vec<ProjPoint> = (0..3).map(|i| ProjPoint::new(a.row(i)).expect("finite")).collect();
    let bc = bounded_complex(&a).expect("finite");
    ensure!(bc.cell.is_some(), "no bounded cell");
    for v in bc.vertices {
        let p = v.embed();
        let vertex = rows.iter().any(|r| line_vertex(&TropLine::new(r.clone())).ok() == Some(p.clone()));
        let meet = [(0, 1), (0, 2), (1, 2)].iter().any(|&(i, j)| cross(&rows[i], &rows[j]).ok() == Some(p.clone()));
        ensure!(vertex || meet, "closure vertex {v} is neither a line vertex nor a meet");
    }
    Pass
}

fn piecewise_behaviour(g: &[i64], h: &Hooks) -> Verdict {
    let p = params(g);
    let f = match (h.make_f)(&p) {
        Ok(f) => f,
        Err(e) => return Fail(e.to_string()),
    };
    let report = match piecewise_report(&f) {
        Ok(r) => r,
        Err(e) => return Fail(e.to_string()),
    };
    ensure!(report.valid(), "piecewise labels fail on samples");
    let mut rng = ChaCha8Rng::seed_from_u64(g.iter().fold(0u64, |a, &v| a.wrapping_mul(31).wrapping_add(v as u64)));
    // Soma points, from the hexagon description, are fixed.
    let hp = crate::triangle::hrep_idempotent(&p.d, &p.dv).expect("nonnegative");
    for _ in 0..4 {
        let x = &hp.x_min + (&hp.x_max - &hp.x_min) * q(rng.gen_range(0..=12), 12);
        let y = &hp.y_min + (&hp.y_max - &hp.y_min) * q(rng.gen_range(0..=12), 12);
        let pt = AffinePoint::new(x, y);
        if hp.contains(&pt) {
            ensure!(is_fixed(&f, &pt.embed()), "soma point {pt} moves");
        }
    }
    for e in &report.entries {
        if let crate::mapping::Behaviour::CollapseToAntenna { .. } = e.behaviour {
            let system = signature_system(&f, &e.cell.signature).expect("cell");
            for s in sample_region(&system, &e.cell.witness, &mut rng, 3) {
                ensure!(!is_fixed(&f, &s.embed()), "antenna cell point {s} is fixed");
            }
        }
    }
    Pass
}

fn soma_dimension_suite(g: &[i64], h: &Hooks) -> Verdict {
    let p = params(g);
    let f = match (h.make_f)(&p) {
        Ok(f) => f,
        Err(e) => return Fail(e.to_string()),
    };
    let dim = soma_dimension(&p);
    let b = bounded_complex(&f).expect("finite").cell.is_some();
    check(b == (dim == 2), || format!("soma dimension {dim}, bounded cell {b}"))
}

fn map_laws(g: &[i64], _: &Hooks) -> Verdict {
    let a = matrix(&g[0..9]);
    let p = point(&g[9..12]);
    ensure!(apply(&a, &apply(&a, &p)) == apply(&a.pow(2), &p), "composition law");
    check(member(&apply(&a, &p), &a).expect("finite"), || "image outside the span".to_string())
}

fn collinearity(g: &[i64], _: &Hooks) -> Verdict {
    let a = matrix(&g[0..9]);
    let (p, q2) = (point(&g[9..12]), point(&g[12..15]));
    if p == q2 {
        return Discard;
    }
    let line = TropLine::through(&p, &q2).expect("finite");
    let v = line_vertex(&line).expect("finite").chart().expect("finite");
    let step = [(-1, 0), (0, -1), (1, 1)][g[15].rem_euclid(3) as usize];
    let t = q(g[16].abs(), 2);
    let r = AffinePoint::new(&v.x + &t * rat(step.0), &v.y + &t * rat(step.1)).embed();
    ensure!(on_line(&r, &line) && collinear(&p, &q2, &r).expect("finite"), "constructed triple not collinear");
    check(
        collinear(&apply(&a, &p), &apply(&a, &q2), &apply(&a, &r)).expect("finite"),
        || "images not collinear".to_string(),
    )
}

fn projector(g: &[i64], _: &Hooks) -> Verdict {
    let a = matrix(&g[0..9]);
    let p = point(&g[9..12]);
    let r = project(&a, &p).expect("finite");
    ensure!(project(&a, &r).expect("finite") == r, "projector not idempotent");
    let (pc, rc) = (p.chart().expect("finite"), r.chart().expect("finite"));
    let best = trop_distance((&pc.x, &pc.y), (&rc.x, &rc.y));
    for w in g[12..].chunks(3) {
        let v = apply(&a, &point(w)).chart().expect("finite");
        let dist = trop_distance((&pc.x, &pc.y), (&v.x, &v.y));
        ensure!(best <= dist, "span point {v} is closer than ρ(p) = {rc}");
    }
    Pass
}

fn region_solver(g: &[i64], _: &Hooks) -> Verdict {
    // A random strict system against brute-force lattice search.
    let forms = [(1, 0), (-1, 0), (0, 1), (0, -1), (1, -1), (-1, 1)];
    let system: Vec<crate::arrangement::Constraint> = g
        .chunks(2)
        .map(|c| {
            let (a, b) = forms[c[0].rem_euclid(6) as usize];
            crate::arrangement::Constraint::lt(a, b, rat(c[1] % 6))
        })
        .collect();
    let region = solve(&system);
    if let Some(r) = &region {
        ensure!(system.iter().all(|c| c.holds(&r.witness)), "witness outside region");
    }
    // Vertices are integer points with |coordinate| ≤ 10, so any open feasible
    // region meets the 1/4 lattice inside that window; scale by 4 to stay in i64.
    let ints: Vec<(i64, i64, i64)> = g
        .chunks(2)
        .map(|c| {
            let (a, b) = forms[c[0].rem_euclid(6) as usize];
            (a as i64, b as i64, 4 * (c[1] % 6))
        })
        .collect();
    let found = (-48i64..=48).any(|x| (-48i64..=48).any(|y| ints.iter().all(|&(a, b, c)| a * x + b * y < c)));
    check(found == region.is_some(), || format!("solver says {}, lattice says {found}", region.is_some()))
}

fn json_matrix(g: &[i64]) -> Value {
    json!({ "matrix": m_json(&matrix(&g[0..9])) })
}

fn json_normal(g: &[i64]) -> Value {
    json!({ "matrix": m_json(&normal(g)) })
}

fn json_params(g: &[i64]) -> Value {
    let p = params(g);
    json!({ "params": p, "matrix": normalform::make_f(&p).ok().map(|f| m_json(&f)) })
}

fn json_raw(g: &[i64]) -> Value {
    json!({ "genome": g })
}

fn json_map(g: &[i64]) -> Value {
    json!({ "matrix": m_json(&matrix(&g[0..9])), "point": p_json(&point(&g[9..12])) })
}

fn json_conjugated(g: &[i64]) -> Value {
    let a = matrix(&g[0..9]);
    let b = conjugate(&monomial(&g[9..13]), &a, &monomial(&g[13..17]));
    json!({ "matrix": m_json(&a), "conjugate": m_json(&b) })
}

fn json_origin(g: &[i64]) -> Value {
    let a = if g[9] % 2 == 0 { normal(g) } else { matrix(g) };
    json!({ "matrix": m_json(&a) })
}

fn json_small(g: &[i64]) -> Value {
    let a = TropMatrix3::ints(std::array::from_fn(|i| std::array::from_fn(|j| g[3 * i + j] % 5)));
    json!({ "matrix": m_json(&a), "point": [q(g[9], 3).to_string(), q(g[10], 3).to_string()] })
}

fn json_generic(g: &[i64]) -> Value {
    let a = TropMatrix3::from_rationals(std::array::from_fn(|i| std::array::from_fn(|j| q(g[3 * i + j], 7))));
    json!({ "matrix": m_json(&a) })
}

pub fn suites() -> Vec<Suite> {
    let s = |name, genes, range, check, describe| Suite { name, genes, range, check, describe };
    vec![
        s("semiring-laws", 3, (-40, 40), semiring_laws, json_raw),
        s("norm-axioms", 7, (-40, 40), norm_axioms, json_raw),
        s("projective-laws", 6, (-60, 60), projective_laws, json_raw),
        s("normal-power-chain", 9, (-40, 0), power_chain, json_normal),
        s("monomial-laws", 17, (-20, 20), monomial_laws, json_raw),
        s("good-iff-idempotent", 9, (-16, 0), good_idempotent, json_normal),
        s("normalization", 9, (-12, 12), normalization, json_matrix),
        s("square-root-law", 9, (0, 6), square_root, json_params),
        s("forbidden-combination", 6, (0, 6), forbidden_combination, json_raw),
        s("negative-dv-antennas", 6, (0, 12), negative_dv, json_raw),
        s("canonical-invariance", 17, (-20, 20), canonical_invariance, json_conjugated),
        s("origin-in-soma", 10, (-12, 12), origin_soma, json_origin),
        s("soma-maximality", 9, (0, 6), soma_maximality, json_params),
        s("cardinal-points", 9, (-20, 0), cardinal_points, json_normal),
        s("arrangement-partition", 11, (-30, 30), partition, json_small),
        s("arrangement-generic", 9, (-7000, 7000), generic_census, json_generic),
        s("region-solver", 8, (-6, 6), region_solver, json_raw),
        s("piecewise-behaviour", 9, (0, 6), piecewise_behaviour, json_params),
        s("soma-dimension", 9, (0, 3), soma_dimension_suite, json_params),
        s("map-laws", 12, (-30, 30), map_laws, json_map),
        s("collinearity", 17, (-30, 30), collinearity, json_map),
        s("projector", 12 + 3 * 20, (-30, 30), projector, json_map),
    ]
}

/// Greedy shrink toward zero while the failure persists.
pub fn shrink(suite: &Suite, genome: &[i64], hooks: &Hooks) -> (Vec<i64>, String) {
    let fails = |g: &[i64]| match suite.run_genome(g, hooks) {
        Fail(m) => Some(m),
        _ => None,
    };
    let mut best = genome.to_vec();
    let mut msg = fails(&best).unwrap_or_default();
    let mut budget = 400;
    let mut progress = true;
    while progress && budget > 0 {
        progress = false;
        for i in 0..best.len() {
            let v = best[i];
            for cand in [0, v / 2, v - v.signum()] {
                if cand == v || budget == 0 {
                    continue;
                }
                budget -= 1;
                let mut g = best.clone();
                g[i] = cand;
                if let Some(m) = fails(&g) {
                    best = g;
                    msg = m;
                    progress = true;
                    break;
                }
            }
        }
    }
    (best, msg)
}

pub fn run_suite(index: usize, suite: &Suite, seed: u64, trials: u64, hooks: &Hooks) -> SuiteOutcome {
    let mut out = SuiteOutcome {
        name: suite.name.to_string(),
        trials: 0,
        passed: 0,
        discarded: 0,
        failure: None,
    };
    for trial in 0..trials {
        let mut rng = trial_rng(seed, index, trial);
        let genome: Vec<i64> = (0..suite.genes).map(|_| rng.gen_range(suite.range.0..=suite.range.1)).collect();
        out.trials += 1;
        match suite.run_genome(&genome, hooks) {
            Pass => out.passed += 1,
            Discard => out.discarded += 1,
            Fail(_) => {
                let (genome, message) = shrink(suite, &genome, hooks);
                out.failure = Some(Counterexample {
                    suite: suite.name.to_string(),
                    trial,
                    case: suite.describe(&genome),
                    genome,
                    message,
                });
                break;
            }
        }
    }
    out
}

pub fn run_all(seed: u64, trials: u64, hooks: &Hooks) -> Vec<SuiteOutcome> {
    suites()
        .iter()
        .enumerate()
        .map(|(i, s)| run_suite(i, s, seed, trials, hooks))
        .collect()
}

pub fn find_suite(name: &str) -> Option<(usize, Suite)> {
    suites().into_iter().enumerate().find(|(_, s)| s.name == name)
}

/// `make_f` with `h2` written into the `h3` slot.
pub fn corrupted_make_f(p: &CanonicalParams) -> Result<TropMatrix3> {
    let mut swapped = p.clone();
    swapped.h.swap(1, 2);
    Ok(f_unchecked(&swapped))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_suite_passes_a_few_trials() {
        for o in run_all(7, 12, &Hooks::default()) {
            assert!(o.ok(), "{}: {:?}", o.name, o.failure);
            assert_eq!(o.trials, 12);
        }
    }

    #[test]
    fn trials_are_deterministic() {
        let a = trial_rng(3, 2, 9).gen::<u64>();
        assert_eq!(a, trial_rng(3, 2, 9).gen::<u64>());
        assert_ne!(a, trial_rng(3, 2, 10).gen::<u64>());
        assert_ne!(a, trial_rng(4, 2, 9).gen::<u64>());
    }

    #[test]
    fn corrupted_make_f_is_caught_and_shrunk() {
        let hooks = Hooks { make_f: corrupted_make_f };
        let (i, s) = find_suite("square-root-law").unwrap();
        let o = run_suite(i, &s, 42, 200, &hooks);
        let c = o.failure.expect("mutation must be detected");
        assert!(c.case["matrix"].is_object());
        // Shrinking leaves only what the failure needs.
        assert!(c.genome.iter().filter(|v| **v != 0).count() <= 3, "{:?}", c.genome);
    }

    #[test]
    fn forbidden_combination_never_squares_to_l() {
        let (i, s) = find_suite("forbidden-combination").unwrap();
        let o = run_suite(i, &s, 1, 300, &Hooks::default());
        assert!(o.ok(), "{:?}", o.failure);
        assert!(o.passed > 100);
    }
}
