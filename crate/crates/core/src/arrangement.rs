//! The cell decomposition `C^A` of the chart `Z = 0` cut out by the three
//! tropical lines `row(A, i)`.
//!
//! A cell is labeled by its signature: for each row, the set of indices at
//! which `max_j (a_ij + p_j)` is attained. Every candidate signature turns
//! into a system of equalities and strict inequalities whose linear parts
//! are `x`, `y` or `x - y`, solved exactly below.

use std::fmt;

use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::matrix3::TropMatrix3;
use crate::normalform::read_lower_form;
use crate::projective::AffinePoint;
use crate::semiring::{rat, Rational, TropScalar};
use crate::triangle::AntennaKind;

/// Argmax sets of the three rows, as bitmasks over `{1, 2, 3}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CellSignature(pub [u8; 3]);

impl CellSignature {
    pub fn sets(&self) -> [Vec<usize>; 3] {
        self.0.map(|m| (0..3).filter(|j| m & (1 << j) != 0).map(|j| j + 1).collect())
    }

    /// `self` lies in the closure of `other`.
    pub fn is_face_of(&self, other: &CellSignature) -> bool {
        (0..3).all(|i| self.0[i] & other.0[i] == other.0[i])
    }
}

impl fmt::Display for CellSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self.sets().map(|v| {
            v.iter().map(|j| j.to_string()).collect::<Vec<_>>().join("")
        });
        write!(f, "({},{},{})", s[0], s[1], s[2])
    }
}

impl Serialize for CellSignature {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.sets().serialize(s)
    }
}

/// `a·x + b·y < c` (or `= c`), with `(a, b)` one of `±(1,0)`, `±(0,1)`, `±(1,-1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub a: i8,
    pub b: i8,
    pub c: Rational,
    pub strict: bool,
}

impl Constraint {
    pub fn lt(a: i8, b: i8, c: Rational) -> Self {
        Constraint { a, b, c, strict: true }
    }

    pub fn eq(a: i8, b: i8, c: Rational) -> Self {
        Constraint { a, b, c, strict: false }
    }

    fn lhs(&self, p: &AffinePoint) -> Rational {
        rat(self.a as i64) * &p.x + rat(self.b as i64) * &p.y
    }

    pub fn holds(&self, p: &AffinePoint) -> bool {
        let v = self.lhs(p);
        if self.strict {
            v < self.c
        } else {
            v == self.c
        }
    }
}

impl Serialize for Constraint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lhs = match (self.a, self.b) {
            (1, 0) => "x",
            (-1, 0) => "-x",
            (0, 1) => "y",
            (0, -1) => "-y",
            (1, -1) => "x - y",
            (-1, 1) => "y - x",
            _ => "?",
        };
        write!(f, "{lhs} {} {}", if self.strict { "<" } else { "=" }, self.c)
    }
}

/// Solution of a constraint system: affine dimension, boundedness, witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Region {
    pub dim: u8,
    pub bounded: bool,
    pub witness: AffinePoint,
}

/// Open interval with optional ends.
#[derive(Default)]
struct Interval {
    lo: Option<Rational>,
    hi: Option<Rational>,
}

impl Interval {
    fn above(&mut self, v: Rational) {
        if self.lo.as_ref().is_none_or(|l| v > *l) {
            self.lo = Some(v);
        }
    }

    fn below(&mut self, v: Rational) {
        if self.hi.as_ref().is_none_or(|h| v < *h) {
            self.hi = Some(v);
        }
    }

    fn pick(&self) -> Option<Rational> {
        match (&self.lo, &self.hi) {
            (Some(l), Some(h)) if l < h => Some((l + h) / rat(2)),
            (Some(_), Some(_)) => None,
            (Some(l), None) => Some(l + Rational::one()),
            (None, Some(h)) => Some(h - Rational::one()),
            (None, None) => Some(Rational::zero()),
        }
    }

    fn bounded(&self) -> bool {
        self.lo.is_some() && self.hi.is_some()
    }
}

const RECESSION: [(i64, i64); 6] = [(1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (-1, -1)];

/// Decide a system exactly.
pub fn solve(constraints: &[Constraint]) -> Option<Region> {
    let (eqs, strict): (Vec<&Constraint>, Vec<&Constraint>) =
        constraints.iter().partition(|c| !c.strict);
    // Normalize equalities so the first nonzero coefficient is positive.
    let mut forms: Vec<(i8, i8, Rational)> = Vec::new();
    for e in &eqs {
        let (a, b, c) = if e.a < 0 || (e.a == 0 && e.b < 0) {
            (-e.a, -e.b, -e.c.clone())
        } else {
            (e.a, e.b, e.c.clone())
        };
        match forms.iter().find(|f| f.0 == a && f.1 == b) {
            Some(f) if f.2 != c => return None,
            Some(_) => {}
            None => forms.push((a, b, c)),
        }
    }
    match forms.len() {
        0 => solve_plane(&strict),
        1 => solve_line(&forms[0], &strict),
        _ => {
            let p = intersect(&forms[0], &forms[1]);
            let ok = constraints.iter().all(|c| c.holds(&p));
            ok.then_some(Region {
                dim: 0,
                bounded: true,
                witness: p,
            })
        }
    }
}

fn intersect(f: &(i8, i8, Rational), g: &(i8, i8, Rational)) -> AffinePoint {
    // Forms are x, y or x - y.
    let value = |a: i8, b: i8| -> Option<&Rational> {
        [f, g].into_iter().find(|h| h.0 == a && h.1 == b).map(|h| &h.2)
    };
    match (value(1, 0), value(0, 1), value(1, -1)) {
        (Some(x), Some(y), _) => AffinePoint::new(x.clone(), y.clone()),
        (Some(x), None, Some(z)) => AffinePoint::new(x.clone(), x - z),
        (None, Some(y), Some(z)) => AffinePoint::new(y + z, y.clone()),
        _ => unreachable!("two distinct forms among x, y, x - y"),
    }
}

fn solve_line(form: &(i8, i8, Rational), strict: &[&Constraint]) -> Option<Region> {
    // Parametrize the line as base + t * dir.
    let (base, dir) = match (form.0, form.1) {
        (1, 0) => (AffinePoint::new(form.2.clone(), Rational::zero()), (0, 1)),
        (0, 1) => (AffinePoint::new(Rational::zero(), form.2.clone()), (1, 0)),
        _ => (AffinePoint::new(form.2.clone(), Rational::zero()), (1, 1)),
    };
    let mut t = Interval::default();
    for c in strict {
        let k = c.a as i64 * dir.0 + c.b as i64 * dir.1;
        let rest = &c.c - c.lhs(&base);
        match k.signum() {
            0 if !rest.is_positive() => return None,
            0 => {}
            1 => t.below(rest / rat(k)),
            _ => t.above(rest / rat(k)),
        }
    }
    let s = t.pick()?;
    let witness = AffinePoint::new(&base.x + &s * rat(dir.0), &base.y + &s * rat(dir.1));
    Some(Region {
        dim: 1,
        bounded: t.bounded(),
        witness,
    })
}

fn solve_plane(strict: &[&Constraint]) -> Option<Region> {
    let (mut x, mut y, mut z) = (Interval::default(), Interval::default(), Interval::default());
    for c in strict {
        match (c.a, c.b) {
            (1, 0) => x.below(c.c.clone()),
            (-1, 0) => x.above(-c.c.clone()),
            (0, 1) => y.below(c.c.clone()),
            (0, -1) => y.above(-c.c.clone()),
            (1, -1) => z.below(c.c.clone()),
            (-1, 1) => z.above(-c.c.clone()),
            _ => unreachable!("unexpected linear form"),
        }
    }
    y.pick()?;
    z.pick()?;
    // Eliminate y: max(yl, x - zu) < y < min(yu, x - zl).
    let mut xr = Interval {
        lo: x.lo.clone(),
        hi: x.hi.clone(),
    };
    if let (Some(yl), Some(zl)) = (&y.lo, &z.lo) {
        xr.above(yl + zl);
    }
    if let (Some(yu), Some(zu)) = (&y.hi, &z.hi) {
        xr.below(yu + zu);
    }
    let wx = xr.pick()?;
    let mut yr = Interval {
        lo: y.lo.clone(),
        hi: y.hi.clone(),
    };
    if let Some(zu) = &z.hi {
        yr.above(&wx - zu);
    }
    if let Some(zl) = &z.lo {
        yr.below(&wx - zl);
    }
    let wy = yr.pick()?;
    let bounded = RECESSION.iter().all(|&(rx, ry)| {
        strict
            .iter()
            .any(|c| c.a as i64 * rx + c.b as i64 * ry > 0)
    });
    Some(Region {
        dim: 2,
        bounded,
        witness: AffinePoint::new(wx, wy),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub signature: CellSignature,
    pub dim: u8,
    pub bounded: bool,
    pub witness: AffinePoint,
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Cell", 4)?;
        st.serialize_field("signature", &self.signature)?;
        st.serialize_field("dim", &self.dim)?;
        st.serialize_field("bounded", &self.bounded)?;
        st.serialize_field("witness", &self.witness)?;
        st.end()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Arrangement {
    pub cells: Vec<Cell>,
    /// Number of cells of dimension 0, 1 and 2.
    pub counts: [usize; 3],
}

impl Arrangement {
    pub fn find(&self, sig: &CellSignature) -> Option<&Cell> {
        self.cells
            .binary_search_by(|c| c.signature.cmp(sig))
            .ok()
            .map(|k| &self.cells[k])
    }

    pub fn euler(&self) -> i64 {
        self.counts[0] as i64 - self.counts[1] as i64 + self.counts[2] as i64
    }

    pub fn total(&self) -> usize {
        self.cells.len()
    }
}

fn row_terms(a: &TropMatrix3, i: usize, p: &AffinePoint) -> [TropScalar; 3] {
    let coords = [p.x.clone(), p.y.clone(), Rational::zero()];
    std::array::from_fn(|j| match a.get(i, j) {
        TropScalar::Finite(v) => TropScalar::Finite(v + &coords[j]),
        TropScalar::NegInf => TropScalar::NegInf,
    })
}

pub fn signature_at(a: &TropMatrix3, p: &AffinePoint) -> CellSignature {
    CellSignature(std::array::from_fn(|i| {
        let t = row_terms(a, i, p);
        let top = t.iter().max().expect("three terms");
        (0..3).filter(|&j| t[j] == *top).fold(0u8, |m, j| m | (1 << j))
    }))
}

/// `e_j - e_k` in chart coordinates, `e_3 = 0`.
fn difference(j: usize, k: usize) -> (i8, i8) {
    let e = |i: usize| match i {
        0 => (1i8, 0i8),
        1 => (0, 1),
        _ => (0, 0),
    };
    (e(j).0 - e(k).0, e(j).1 - e(k).1)
}

/// Defining system of a signature; `None` when it forces a `-inf` term to the top.
pub fn signature_system(a: &TropMatrix3, sig: &CellSignature) -> Option<Vec<Constraint>> {
    let mut out = Vec::new();
    for i in 0..3 {
        let set: Vec<usize> = (0..3).filter(|j| sig.0[i] & (1 << j) != 0).collect();
        let j0 = *set.first()?;
        let a0 = a.get(i, j0).finite()?;
        for &j in &set[1..] {
            let aj = a.get(i, j).finite()?;
            // a_ij + p_j = a_ij0 + p_j0
            let (u, v) = difference(j, j0);
            out.push(Constraint::eq(u, v, a0 - aj));
        }
        for k in (0..3).filter(|k| !set.contains(k)) {
            if let Some(ak) = a.get(i, k).finite() {
                // a_ik + p_k < a_ij0 + p_j0
                let (u, v) = difference(k, j0);
                out.push(Constraint::lt(u, v, a0 - ak));
            }
        }
    }
    Some(out)
}

pub fn enumerate_cells(a: &TropMatrix3) -> Arrangement {
    let mut cells = Vec::new();
    let mut counts = [0usize; 3];
    for m0 in 1u8..8 {
        for m1 in 1u8..8 {
            for m2 in 1u8..8 {
                let signature = CellSignature([m0, m1, m2]);
                let Some(system) = signature_system(a, &signature) else {
                    continue;
                };
                if let Some(r) = solve(&system) {
                    counts[r.dim as usize] += 1;
                    cells.push(Cell {
                        signature,
                        dim: r.dim,
                        bounded: r.bounded,
                        witness: r.witness,
                    });
                }
            }
        }
    }
    Arrangement { cells, counts }
}

/// `n` points of an open region around `witness`: random directions, with
/// step lengths halved until the point lands inside.
pub fn sample_region<R: Rng>(
    constraints: &[Constraint],
    witness: &AffinePoint,
    rng: &mut R,
    n: usize,
) -> Vec<AffinePoint> {
    let mut out = vec![witness.clone()];
    while out.len() < n {
        let (u, v) = (rng.gen_range(-8i64..=8), rng.gen_range(-8i64..=8));
        if u == 0 && v == 0 {
            continue;
        }
        let mut step = rat(1i64 << rng.gen_range(0..6));
        for _ in 0..64 {
            let p = AffinePoint::new(&witness.x + &step * rat(u), &witness.y + &step * rat(v));
            if constraints.iter().all(|c| c.holds(&p)) {
                out.push(p);
                break;
            }
            step /= rat(2);
        }
    }
    out
}

/// Bounded 2-cell `B^A` and the 0-cells on its boundary.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundedComplex {
    pub cell: Option<Cell>,
    pub vertices: Vec<AffinePoint>,
}

pub fn bounded_complex(a: &TropMatrix3) -> Result<BoundedComplex> {
    a.require_finite()?;
    let arr = enumerate_cells(a);
    let bounded: Vec<&Cell> = arr.cells.iter().filter(|c| c.dim == 2 && c.bounded).collect();
    if bounded.len() > 1 {
        return Err(Error::Internal("more than one bounded 2-cell".to_string()));
    }
    let cell = bounded.first().map(|c| (*c).clone());
    let vertices = match &cell {
        Some(b) => arr
            .cells
            .iter()
            .filter(|c| c.dim == 0 && c.signature.is_face_of(&b.signature))
            .map(|c| c.witness.clone())
            .collect(),
        None => Vec::new(),
    };
    Ok(BoundedComplex { cell, vertices })
}

/// Region where `f_N` has unique preimages.
pub fn injectivity_set(n: &TropMatrix3) -> Result<Option<Cell>> {
    if !n.is_normal() {
        return Err(Error::NotNormal);
    }
    Ok(bounded_complex(n)?.cell)
}

/// The cell `P_a` of an antenna of a canonical form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AntennaCell {
    pub kind: AntennaKind,
    pub constraints: Vec<Constraint>,
    pub cell: Cell,
}

impl AntennaCell {
    pub fn contains(&self, p: &AffinePoint) -> bool {
        self.constraints.iter().all(|c| c.holds(p))
    }
}

pub fn antenna_cell(f: &TropMatrix3, which: AntennaKind) -> Result<AntennaCell> {
    let p = read_lower_form(f)?;
    let (d, [d1, d2, d3], [h1, h2, h3], g) = (&p.d, &p.dv, &p.h, &p.g);
    let none = || Error::NoSuchAntenna(format!("{which:?}"));
    let constraints = match which {
        AntennaKind::H1 if h1.is_positive() => vec![
            Constraint::lt(-1, 0, -(d + d1)),
            Constraint::lt(1, 0, d + d1 + h1),
            Constraint::lt(0, 1, -d.clone()),
        ],
        AntennaKind::H2 if h2.is_positive() => vec![
            Constraint::lt(-1, 0, -d.clone()),
            Constraint::lt(1, -1, -(d + d2)),
            Constraint::lt(-1, 1, d + d2 + h2),
        ],
        AntennaKind::H3 if h3.is_positive() => vec![
            Constraint::lt(0, -1, d + d3 + h3),
            Constraint::lt(0, 1, -(d + d3)),
            Constraint::lt(1, -1, -d.clone()),
        ],
        AntennaKind::G if g.is_positive() => vec![
            Constraint::lt(-1, 0, d3 + g),
            Constraint::lt(1, 0, -d3.clone()),
            Constraint::lt(-1, 1, Rational::zero()),
        ],
        _ => return Err(none()),
    };
    let region = solve(&constraints)
        .ok_or_else(|| Error::Internal("empty antenna cell".to_string()))?;
    let sig = signature_at(f, &region.witness);
    let cell = enumerate_cells(f)
        .find(&sig)
        .cloned()
        .filter(|c| c.dim == 2)
        .ok_or_else(|| Error::Internal(format!("antenna cell {sig} is not a 2-cell")))?;
    Ok(AntennaCell {
        kind: which,
        constraints,
        cell,
    })
}

/// All 2×2 minors and the full matrix are tropically regular.
pub fn is_generic(a: &TropMatrix3) -> bool {
    if !a.trop_det().regular {
        return false;
    }
    for r in [(0, 1), (0, 2), (1, 2)] {
        for c in [(0, 1), (0, 2), (1, 2)] {
            let diag = a.get(r.0, c.0).finite().zip(a.get(r.1, c.1).finite()).map(|(x, y)| x + y);
            let anti = a.get(r.0, c.1).finite().zip(a.get(r.1, c.0).finite()).map(|(x, y)| x + y);
            if diag.is_none() || diag == anti {
                return false;
            }
        }
    }
    true
}
