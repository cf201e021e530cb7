//! Normal and lower canonical forms of 3×3 tropical matrices.
//!
//! [`normalize`] brings a matrix to a normal one (`I ≤ N ≤ 0`) through
//! `N = P ⊙ A ⊙ Q` with monomial `P`, `Q`, solving the 3×3 assignment
//! problem by exhaustion. [`canonical_form`] goes further, to
//!
//! ```text
//! F = | 0              -d-d2          -2d-d3-h3 |
//!     | -2d-d1-h1      0              -d-d3-g   |
//!     | -d-d1          -2d-d2-h2      0         |
//! ```
//!
//! whose square is `L(d, dv)`, the same matrix with `h = g = 0`.
//!
//! A matrix usually admits several such forms: cyclic relabelings of the
//! coordinates rotate `(dv, h)`, and for `d = 0` a reflection swaps labels.
//! Every form reachable through an optimal assignment is generated and the
//! smallest under [`CanonicalParams::sort_key`] is returned, which makes the
//! result a function of the monomial orbit of `A` alone.

use std::cmp::Ordering;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix3::{conjugate, MonomialMatrix, TropMatrix3, PERMS};
use crate::semiring::{self, rat, t_add, t_mul, Rational, TropScalar};

/// Parameters `(d, d1, d2, d3, h1, h2, h3, g)` of the lower canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CanonicalParams {
    #[serde(with = "semiring::rational_str")]
    pub d: Rational,
    #[serde(with = "semiring::rational_str3")]
    pub dv: [Rational; 3],
    #[serde(with = "semiring::rational_str3")]
    pub h: [Rational; 3],
    #[serde(with = "semiring::rational_str")]
    pub g: Rational,
}

impl CanonicalParams {
    pub fn new(d: Rational, dv: [Rational; 3], h: [Rational; 3], g: Rational) -> Self {
        CanonicalParams { d, dv, h, g }
    }

    /// Integer parameters, for tests and examples.
    pub fn ints(d: i64, dv: [i64; 3], h: [i64; 3], g: i64) -> Self {
        CanonicalParams::new(rat(d), dv.map(rat), h.map(rat), rat(g))
    }

    /// Idempotent form `L(d, dv)`: no antennas.
    pub fn idempotent(d: Rational, dv: [Rational; 3]) -> Self {
        CanonicalParams::new(d, dv, Default::default(), Rational::zero())
    }

    pub fn has_antennas(&self) -> bool {
        self.g.is_positive() || self.h.iter().any(Signed::is_positive)
    }

    /// Total order used to pick one form per orbit: forms without `g` first,
    /// then lexicographic in `(h1, h2, h3, d1, d2, d3, d, g)`.
    pub fn sort_key(&self) -> (bool, Vec<Rational>) {
        let mut v: Vec<Rational> = self.h.to_vec();
        v.extend(self.dv.iter().cloned());
        v.push(self.d.clone());
        v.push(self.g.clone());
        (self.g.is_positive(), v)
    }

    /// Parameters after the relabeling `i ↦ i + 1` of coordinates.
    fn rotated(&self) -> CanonicalParams {
        let r = |v: &[Rational; 3]| [v[2].clone(), v[0].clone(), v[1].clone()];
        CanonicalParams::new(self.d.clone(), r(&self.dv), r(&self.h), self.g.clone())
    }
}

/// Outcome of [`validate_params`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParamReport {
    pub valid: bool,
    pub violations: Vec<String>,
}

pub fn validate_params(p: &CanonicalParams) -> ParamReport {
    let mut v = Vec::new();
    let names = ["d1", "d2", "d3"];
    if p.d.is_negative() {
        v.push("d must be nonnegative".to_string());
    }
    for j in 0..3 {
        if p.dv[j].is_negative() {
            v.push(format!("{} must be nonnegative", names[j]));
        }
        if p.h[j].is_negative() {
            v.push(format!("h{} must be nonnegative", j + 1));
        }
    }
    if p.g.is_negative() {
        v.push("g must be nonnegative".to_string());
    }
    for j in 0..3 {
        let next = (j + 1) % 3;
        if p.h[next].is_positive() && !p.dv[j].is_zero() {
            v.push(format!("h{} > 0 requires {} = 0", next + 1, names[j]));
        }
    }
    if p.g.is_positive() {
        if !p.d.is_zero() {
            v.push("g > 0 requires d = 0".to_string());
        }
        if !p.dv[0].is_zero() {
            v.push("g > 0 requires d1 = 0".to_string());
        }
        if !p.h[2].is_zero() {
            v.push("g > 0 requires h3 = 0".to_string());
        }
        if !p.h[0].is_zero() {
            v.push("g > 0 requires h1 = 0".to_string());
        }
    }
    ParamReport {
        valid: v.is_empty(),
        violations: v,
    }
}

fn check_params(p: &CanonicalParams) -> Result<()> {
    let report = validate_params(p);
    if report.valid {
        Ok(())
    } else {
        Err(Error::ConstraintViolation(report.violations))
    }
}

/// `L(d, dv)`; normal for `d ≥ 0`, `d_j ≥ -d`, idempotent iff every `d_j ≥ 0`.
pub fn make_l(d: &Rational, dv: &[Rational; 3]) -> Result<TropMatrix3> {
    if d.is_negative() {
        return Err(Error::ParamRange(format!("d = {d} is negative")));
    }
    for (j, dj) in dv.iter().enumerate() {
        if dj < &-d {
            return Err(Error::ParamRange(format!("d{} = {dj} is below -d", j + 1)));
        }
    }
    Ok(l_unchecked(d, dv))
}

fn l_unchecked(d: &Rational, dv: &[Rational; 3]) -> TropMatrix3 {
    let [d1, d2, d3] = dv;
    let two_d = d + d;
    TropMatrix3::from_rationals([
        [Rational::zero(), -(d + d2), -(&two_d + d3)],
        [-(&two_d + d1), Rational::zero(), -(d + d3)],
        [-(d + d1), -(&two_d + d2), Rational::zero()],
    ])
}

/// `F(d, dv, h, g)`.
pub fn make_f(p: &CanonicalParams) -> Result<TropMatrix3> {
    check_params(p)?;
    Ok(f_unchecked(p))
}

/// `F` without validating the parameters.
pub fn f_unchecked(p: &CanonicalParams) -> TropMatrix3 {
    let mut e = l_unchecked(&p.d, &p.dv).finite_entries().expect("L is finite");
    e[0][2] -= &p.h[2];
    e[1][0] -= &p.h[0];
    e[2][1] -= &p.h[1];
    e[1][2] -= &p.g;
    TropMatrix3::from_rationals(e)
}

/// `N = P ⊙ A ⊙ Q` with `N` normal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Normalization {
    #[serde(rename = "N")]
    pub n: TropMatrix3,
    #[serde(rename = "P")]
    pub p: MonomialMatrix,
    #[serde(rename = "Q")]
    pub q: MonomialMatrix,
}

/// Lower canonical form `F = P ⊙ A ⊙ Q = make_f(params)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CanonicalResult {
    pub params: CanonicalParams,
    #[serde(rename = "P")]
    pub p: MonomialMatrix,
    #[serde(rename = "Q")]
    pub q: MonomialMatrix,
    #[serde(rename = "F")]
    pub f: TropMatrix3,
}

fn assignment_value(a: &TropMatrix3, rows: &[usize; 3], cols: &[usize; 3]) -> TropScalar {
    (0..3).fold(TropScalar::zero(), |acc, i| t_mul(&acc, a.get(rows[i], cols[i])))
}

/// Optimal assignment value and the admissible `(row order, column order)`
/// pairs, i.e. those putting an optimal assignment on the diagonal.
fn admissible_pairs(a: &TropMatrix3) -> Result<Vec<([usize; 3], [usize; 3])>> {
    let best = PERMS
        .iter()
        .map(|s| assignment_value(a, &[0, 1, 2], s))
        .max()
        .expect("six assignments");
    if !best.is_finite() {
        return Err(Error::Degenerate(
            "every assignment meets a -inf entry".to_string(),
        ));
    }
    let mut out = Vec::new();
    for rows in PERMS {
        for cols in PERMS {
            if assignment_value(a, &rows, &cols) == best {
                out.push((rows, cols));
            }
        }
    }
    Ok(out)
}

/// Max-plus Kleene star of a matrix with zero diagonal and no positive cycle.
fn star(k: &[[TropScalar; 3]; 3]) -> [[TropScalar; 3]; 3] {
    let mut s = k.clone();
    for m in 0..3 {
        for i in 0..3 {
            for j in 0..3 {
                let via = t_mul(&s[i][m], &s[m][j]);
                s[i][j] = t_add(&s[i][j], &via);
            }
        }
    }
    s
}

fn normalize_pair(a: &TropMatrix3, rows: [usize; 3], cols: [usize; 3]) -> Normalization {
    let m: [[TropScalar; 3]; 3] =
        std::array::from_fn(|i| std::array::from_fn(|j| a.get(rows[i], cols[j]).clone()));
    let diag: [Rational; 3] =
        std::array::from_fn(|j| m[j][j].finite().cloned().expect("diagonal of an optimal assignment"));
    let k: [[TropScalar; 3]; 3] =
        std::array::from_fn(|i| std::array::from_fn(|j| m[i][j].sub(&diag[j])));
    let ks = star(&k);
    // Least potentials anchored at u3 = 0 when row 3 of the star is finite,
    // otherwise the least potentials above zero.
    let u: [Rational; 3] = if ks[2].iter().all(TropScalar::is_finite) {
        std::array::from_fn(|j| ks[2][j].finite().cloned().expect("finite"))
    } else {
        std::array::from_fn(|j| {
            (0..3)
                .map(|i| ks[i][j].clone())
                .max()
                .and_then(|s| s.finite().cloned())
                .expect("zero diagonal keeps the column maximum finite")
        })
    };
    let v: [Rational; 3] = std::array::from_fn(|j| -(&diag[j] + &u[j]));
    let p = MonomialMatrix::new(rows, u).expect("permutation");
    let mut qperm = [0usize; 3];
    let mut qoff: [Rational; 3] = Default::default();
    for j in 0..3 {
        qperm[cols[j]] = j;
        qoff[cols[j]] = v[j].clone();
    }
    let q = MonomialMatrix::new(qperm, qoff).expect("permutation");
    let n = conjugate(&p, a, &q);
    debug_assert!(n.is_normal());
    Normalization { n, p, q }
}

/// Deterministic normalization: the identity if `A` is already normal,
/// otherwise the lexicographically first admissible pair with least potentials.
pub fn normalize(a: &TropMatrix3) -> Result<Normalization> {
    if a.is_normal() {
        return Ok(Normalization {
            n: a.clone(),
            p: MonomialMatrix::identity(),
            q: MonomialMatrix::identity(),
        });
    }
    let (rows, cols) = admissible_pairs(a)?[0];
    Ok(normalize_pair(a, rows, cols))
}

/// One normalization per admissible pair.
pub fn normalizations(a: &TropMatrix3) -> Result<Vec<Normalization>> {
    Ok(admissible_pairs(a)?
        .into_iter()
        .map(|(r, c)| normalize_pair(a, r, c))
        .collect())
}

/// Monomial `(P, Q)` with `P ⊙ A ⊙ Q = B`, for all-finite matrices.
pub fn find_monomial_pair(a: &TropMatrix3, b: &TropMatrix3) -> Result<Option<(MonomialMatrix, MonomialMatrix)>> {
    let ea = a.finite_entries()?;
    let eb = b.finite_entries()?;
    for rows in PERMS {
        for cols in PERMS {
            // b_ij = u_i + a[rows i][cols j] + v_j, normalized by v_1 = 0.
            let u: [Rational; 3] = std::array::from_fn(|i| &eb[i][0] - &ea[rows[i]][cols[0]]);
            let v: [Rational; 3] = std::array::from_fn(|j| &eb[0][j] - &ea[rows[0]][cols[j]] - &u[0]);
            let fits = (0..3).all(|i| (0..3).all(|j| eb[i][j] == &u[i] + &ea[rows[i]][cols[j]] + &v[j]));
            if fits {
                let p = MonomialMatrix::new(rows, u)?;
                let mut qperm = [0usize; 3];
                let mut qoff: [Rational; 3] = Default::default();
                for j in 0..3 {
                    qperm[cols[j]] = j;
                    qoff[cols[j]] = v[j].clone();
                }
                return Ok(Some((p, MonomialMatrix::new(qperm, qoff)?)));
            }
        }
    }
    Ok(None)
}

/// Simultaneous relabeling as a conjugation: `relabel(M, ρ) = P ⊙ M ⊙ P⁻¹`.
fn relabel_monomial(rho: [usize; 3]) -> MonomialMatrix {
    let mut inv = [0usize; 3];
    for i in 0..3 {
        inv[rho[i]] = i;
    }
    MonomialMatrix::permutation(inv).expect("permutation")
}

/// `(d, dv, Q)` with `Q⁻¹ ⊙ B ⊙ Q = L(d, dv)` for normal idempotent `B`.
///
/// Column 3 is moved to the chart origin and the parameters are read from
/// the translated entries `t1 = (1,1)`, `t4 = (1,2)`, `t3 = (2,1)`,
/// `t2 = (2,2)`. When `t3 > t4` the triangle has the opposite orientation and
/// labels 1 and 2 are swapped first.
pub fn canonical_idempotent(b: &TropMatrix3) -> Result<(Rational, [Rational; 3], MonomialMatrix)> {
    b.require_finite()?;
    if !b.is_normal() {
        return Err(Error::NotNormal);
    }
    if !b.is_idempotent() {
        return Err(Error::NotIdempotent);
    }
    for rho in [[0, 1, 2], [1, 0, 2]] {
        let r = relabel_monomial(rho);
        let br = conjugate(&r, b, &r.inverse());
        let e = br.finite_entries()?;
        let t = |i: usize, j: usize| &e[i][j] - &e[2][j] - (&e[i][2] - &e[2][2]);
        let (t1, t4, t3, t2) = (t(0, 0), t(0, 1), t(1, 0), t(1, 1));
        if t3 > t4 {
            continue;
        }
        let d = (&t4 - &t3) / rat(3);
        let d3 = t3;
        let d1 = &t1 - &t4;
        let d2 = &t2 - &t4;
        let s = MonomialMatrix::diag([
            &e[0][2] + &d3 + &d + &d,
            &e[1][2] + &d3 + &d,
            Rational::zero(),
        ]);
        let dv = [d1, d2, d3];
        let l = make_l(&d, &dv)?;
        let q = r.inverse().mul(&s);
        if conjugate(&q.inverse(), b, &q) == l {
            return Ok((d, dv, q));
        }
    }
    Err(Error::Internal(
        "idempotent matrix did not reduce to an L form".to_string(),
    ))
}

/// Reads the parameters of a matrix already in lower canonical form.
pub fn read_lower_form(f: &TropMatrix3) -> Result<CanonicalParams> {
    let e = f.finite_entries().map_err(|_| Error::NotCanonical)?;
    if !f.is_normal() {
        return Err(Error::NotCanonical);
    }
    let l = f.pow(2).finite_entries().map_err(|_| Error::NotCanonical)?;
    let forward = &l[0][1] + &l[1][2] + &l[2][0];
    let backward = &l[0][2] + &l[2][1] + &l[1][0];
    let d = (&forward - &backward) / rat(3);
    let dv = [-(&l[2][0]) - &d, -(&l[0][1]) - &d, -(&l[1][2]) - &d];
    let h = [&l[1][0] - &e[1][0], &l[2][1] - &e[2][1], &l[0][2] - &e[0][2]];
    let g = &l[1][2] - &e[1][2];
    let params = CanonicalParams::new(d, dv, h, g);
    if !validate_params(&params).valid || f_unchecked(&params) != *f {
        return Err(Error::NotCanonical);
    }
    Ok(params)
}

/// Canonical candidate reached from one normalization.
fn candidate(a: &TropMatrix3, norm: &Normalization) -> Option<CanonicalResult> {
    let (d, dv, qc) = canonical_idempotent(&norm.n.pow(2)).ok()?;
    let mut p = qc.inverse().mul(&norm.p);
    let mut q = norm.q.mul(&qc);
    let mut t = conjugate(&qc.inverse(), &norm.n, &qc);
    let l = l_unchecked(&d, &dv);
    let r = l.sub(&t).ok()?;
    if r.iter().flatten().any(Signed::is_negative) {
        return None;
    }
    let slots = [&r[2][0], &r[0][1], &r[1][2]];
    let positive: Vec<usize> = (0..3).filter(|&k| slots[k].is_positive()).collect();
    if positive.len() > 1 {
        return None;
    }
    let mut params = CanonicalParams::new(
        d,
        dv,
        [r[1][0].clone(), r[2][1].clone(), r[0][2].clone()],
        slots[2].clone(),
    );
    if let Some(&k) = positive.first() {
        params.g = slots[k].clone();
        params.h = [r[1][0].clone(), r[2][1].clone(), r[0][2].clone()];
        // g sits in slot k+1; each rotation i ↦ i+1 advances the slot by one.
        for _ in k..2 {
            let rho = relabel_monomial([1, 2, 0]);
            t = conjugate(&rho, &t, &rho.inverse());
            p = rho.mul(&p);
            q = q.mul(&rho.inverse());
            params = params.rotated();
        }
    }
    if !validate_params(&params).valid || f_unchecked(&params) != t {
        return None;
    }
    debug_assert_eq!(conjugate(&p, a, &q), t);
    Some(CanonicalResult { params, p, q, f: t })
}

/// Every lower canonical form reachable from an optimal assignment, sorted
/// by [`CanonicalParams::sort_key`] and deduplicated by parameters.
pub fn representations(a: &TropMatrix3) -> Result<Vec<CanonicalResult>> {
    a.require_finite()?;
    let mut out: Vec<CanonicalResult> = normalizations(a)?
        .iter()
        .filter_map(|n| candidate(a, n))
        .collect();
    out.sort_by_key(|x| x.params.sort_key());
    out.dedup_by(|x, y| x.params == y.params);
    Ok(out)
}

/// Lower canonical form of an all-finite matrix.
pub fn canonical_form(a: &TropMatrix3) -> Result<CanonicalResult> {
    let reps = representations(a)?;
    let best = reps
        .into_iter()
        .next()
        .ok_or_else(|| Error::Internal(format!("no lower canonical form found for {a}")))?;
    if conjugate(&best.p, a, &best.q) != best.f {
        return Err(Error::Internal("canonical transform mismatch".to_string()));
    }
    Ok(best)
}

impl PartialOrd for CanonicalParams {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CanonicalParams {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}
