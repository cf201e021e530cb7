//! Tropical triangles `T_A = span(A)`: goodness, soma, antennas, membership.
//!
//! With `F = P ⊙ A ⊙ Q` the canonical form and `L = F²`, the soma of `T_F`
//! is `T_L` and antenna `j` joins `col(L, j)` to `col(F, j)` whenever the two
//! differ. Both are carried back to the coordinates of `A` by `P⁻¹`.

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::mapping::project;
use crate::matrix3::{MonomialMatrix, TropMatrix3, PERMS};
use crate::normalform::{canonical_form, make_l, CanonicalParams, CanonicalResult};
use crate::projective::{AffinePoint, ProjPoint};
use crate::semiring::{self, Rational};

/// Direction of an antenna in the chart.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Direction {
    #[serde(rename = "W")]
    West,
    #[serde(rename = "S")]
    South,
    #[serde(rename = "NE")]
    NorthEast,
}

impl Direction {
    /// Unit step in the chart.
    pub fn step(self) -> (i64, i64) {
        match self {
            Direction::West => (-1, 0),
            Direction::South => (0, -1),
            Direction::NorthEast => (1, 1),
        }
    }

    fn of(delta: &AffinePoint) -> Option<Direction> {
        let (dx, dy) = (&delta.x, &delta.y);
        if dx.is_negative() && dy.is_zero() {
            Some(Direction::West)
        } else if dx.is_zero() && dy.is_negative() {
            Some(Direction::South)
        } else if dx.is_positive() && dx == dy {
            Some(Direction::NorthEast)
        } else {
            None
        }
    }
}

/// Which parameter of the canonical form an antenna comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum AntennaKind {
    H1,
    H2,
    H3,
    G,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Antenna {
    pub kind: AntennaKind,
    pub base: ProjPoint,
    pub tip: ProjPoint,
    pub base_chart: AffinePoint,
    pub tip_chart: AffinePoint,
    pub direction: Direction,
    #[serde(with = "semiring::rational_str")]
    pub length: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TriangleReport {
    pub good: bool,
    pub params: CanonicalParams,
    pub soma_dim: u8,
    pub antennas: Vec<Antenna>,
    pub pinwheel: bool,
    pub convex: bool,
    pub soma_vertices_chart: Vec<AffinePoint>,
}

/// The six slack inequalities of a good triangle, on raw entries.
pub fn is_good(a: &TropMatrix3) -> Result<bool> {
    let e = a.finite_entries()?;
    let s = |i: usize, k: usize, j: usize| &e[i][j] - &e[k][j];
    Ok(s(0, 1, 1) <= s(0, 1, 2)
        && s(0, 1, 2) <= s(0, 1, 0)
        && s(1, 2, 2) <= s(1, 2, 0)
        && s(1, 2, 0) <= s(1, 2, 1)
        && s(2, 0, 0) <= s(2, 0, 1)
        && s(2, 0, 1) <= s(2, 0, 2))
}

/// 0 for a point, 1 for a segment, 2 otherwise.
pub fn soma_dimension(p: &CanonicalParams) -> u8 {
    let z = |r: &Rational| r.is_zero();
    if z(&p.d) && p.dv.iter().all(z) {
        0
    } else if z(&p.d) && (0..3).any(|j| z(&p.dv[j]) && z(&p.dv[(j + 1) % 3])) {
        1
    } else {
        2
    }
}

fn transport(pinv: &MonomialMatrix, col: [Rational; 3]) -> ProjPoint {
    ProjPoint::new(pinv.apply_vec(&col.map(semiring::TropScalar::Finite)))
        .expect("finite coordinates")
}

fn column(m: &[[Rational; 3]; 3], j: usize) -> [Rational; 3] {
    std::array::from_fn(|i| m[i][j].clone())
}

/// Matrix whose columns span the soma of `T_A`, in the coordinates of `A`.
pub fn soma_matrix_of(c: &CanonicalResult) -> TropMatrix3 {
    let l = make_l(&c.params.d, &c.params.dv)
        .expect("valid params")
        .finite_entries()
        .expect("finite");
    let pinv = c.p.inverse();
    let cols = [0, 1, 2].map(|j| transport(&pinv, column(&l, j)).into_coords());
    TropMatrix3::from_columns([&cols[0], &cols[1], &cols[2]]).expect("finite")
}

pub fn soma_matrix(a: &TropMatrix3) -> Result<TropMatrix3> {
    Ok(soma_matrix_of(&canonical_form(a)?))
}

pub fn antennas_of(c: &CanonicalResult) -> Result<Vec<Antenna>> {
    let l = make_l(&c.params.d, &c.params.dv)?.finite_entries()?;
    let f = c.f.finite_entries()?;
    let pinv = c.p.inverse();
    let kinds = [
        AntennaKind::H1,
        AntennaKind::H2,
        if c.params.g.is_positive() { AntennaKind::G } else { AntennaKind::H3 },
    ];
    let mut out = Vec::new();
    for j in 0..3 {
        let base = transport(&pinv, column(&l, j));
        let tip = transport(&pinv, column(&f, j));
        if base == tip {
            continue;
        }
        let base_chart = base.chart()?;
        let tip_chart = tip.chart()?;
        let direction = Direction::of(&tip_chart.sub(&base_chart)).ok_or_else(|| {
            Error::Internal(format!("antenna from {base_chart} to {tip_chart} has no tropical direction"))
        })?;
        out.push(Antenna {
            kind: kinds[j],
            length: base_chart.distance(&tip_chart),
            base,
            tip,
            base_chart,
            tip_chart,
            direction,
        });
    }
    Ok(out)
}

pub fn analyze(a: &TropMatrix3) -> Result<TriangleReport> {
    let c = canonical_form(a)?;
    analyze_with(a, &c)
}

pub fn analyze_with(a: &TropMatrix3, c: &CanonicalResult) -> Result<TriangleReport> {
    let antennas = antennas_of(c)?;
    let soma = soma_matrix_of(c);
    let soma_vertices_chart = (0..3)
        .map(|j| ProjPoint::new(soma.col(j)).and_then(|p| p.chart()))
        .collect::<Result<Vec<_>>>()?;
    Ok(TriangleReport {
        good: is_good(a)?,
        soma_dim: soma_dimension(&c.params),
        pinwheel: c.params.g.is_zero(),
        convex: antennas.is_empty(),
        params: c.params.clone(),
        antennas,
        soma_vertices_chart,
    })
}

/// Some pair of monomial matrices puts `A` in a form with `g = 0`.
pub fn is_pinwheel(a: &TropMatrix3) -> Result<bool> {
    Ok(canonical_form(a)?.params.g.is_zero())
}

/// Whether the chart origin lies in the soma of `T_A`.
pub fn origin_in_soma(a: &TropMatrix3) -> Result<bool> {
    let soma = soma_matrix(a)?;
    member(&ProjPoint::ints([0, 0, 0]), &soma)
}

/// `A ⊙ Q` normal for some monomial `Q`: each column can be scaled so that
/// its maximum sits on a distinct diagonal position.
pub fn column_normal_representative(a: &TropMatrix3) -> Result<Option<TropMatrix3>> {
    let e = a.finite_entries()?;
    for sigma in PERMS {
        // Column sigma[j] of A moves to position j.
        let rep: [[Rational; 3]; 3] = std::array::from_fn(|i| {
            std::array::from_fn(|j| &e[i][sigma[j]] - &e[j][sigma[j]])
        });
        let m = TropMatrix3::from_rationals(rep);
        if m.is_normal() {
            return Ok(Some(m));
        }
    }
    Ok(None)
}

/// A chart midpoint of two points of `T_F` that is not in `T_F`, for a
/// canonical form with antennas. Candidates pair each antenna tip with the
/// soma hexagon vertices and the other tips.
pub fn non_convexity_witness(c: &CanonicalResult) -> Option<AffinePoint> {
    let hex = hrep_idempotent(&c.params.d, &c.params.dv).ok()?.vertices();
    let f = c.f.chart0().ok()?;
    let l = make_l(&c.params.d, &c.params.dv).ok()?.chart0().ok()?;
    let chart = |m: &TropMatrix3, j: usize| {
        AffinePoint::new(m.finite(0, j).ok()?.clone(), m.finite(1, j).ok()?.clone()).into()
    };
    let tips: Vec<AffinePoint> = (0..3)
        .filter_map(|j| {
            let t: Option<AffinePoint> = chart(&f, j);
            let b: Option<AffinePoint> = chart(&l, j);
            (t != b).then_some(t).flatten()
        })
        .collect();
    for tip in &tips {
        for other in hex.iter().chain(tips.iter()) {
            let m = tip.midpoint(other);
            if !member(&m.embed(), &c.f).ok()? {
                return Some(m);
            }
        }
    }
    None
}

/// `p ∈ span(A)`.
pub fn member(p: &ProjPoint, a: &TropMatrix3) -> Result<bool> {
    Ok(project(a, p)? == *p)
}

/// Chart description of `T_L` for `L = L(d, dv)`, `d, d_j ≥ 0`:
/// `x_min ≤ x ≤ x_max`, `y_min ≤ y ≤ y_max`, `diff_min ≤ y - x ≤ diff_max`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HalfPlanes {
    #[serde(with = "semiring::rational_str")]
    pub x_min: Rational,
    #[serde(with = "semiring::rational_str")]
    pub x_max: Rational,
    #[serde(with = "semiring::rational_str")]
    pub y_min: Rational,
    #[serde(with = "semiring::rational_str")]
    pub y_max: Rational,
    #[serde(with = "semiring::rational_str")]
    pub diff_min: Rational,
    #[serde(with = "semiring::rational_str")]
    pub diff_max: Rational,
}

impl HalfPlanes {
    pub fn contains(&self, p: &AffinePoint) -> bool {
        let diff = &p.y - &p.x;
        self.x_min <= p.x
            && p.x <= self.x_max
            && self.y_min <= p.y
            && p.y <= self.y_max
            && self.diff_min <= diff
            && diff <= self.diff_max
    }

    pub fn interior_contains(&self, p: &AffinePoint) -> bool {
        let diff = &p.y - &p.x;
        self.x_min < p.x
            && p.x < self.x_max
            && self.y_min < p.y
            && p.y < self.y_max
            && self.diff_min < diff
            && diff < self.diff_max
    }

    /// Vertices of the hexagon, counterclockwise from column 1.
    pub fn vertices(&self) -> [AffinePoint; 6] {
        let p = |x: &Rational, y: &Rational| AffinePoint::new(x.clone(), y.clone());
        [
            p(&self.x_max, &(&self.x_max + &self.diff_min)),
            p(&self.x_max, &self.y_max),
            p(&(&self.y_max - &self.diff_max), &self.y_max),
            p(&self.x_min, &(&self.x_min + &self.diff_max)),
            p(&self.x_min, &self.y_min),
            p(&(&self.y_min - &self.diff_min), &self.y_min),
        ]
    }
}

pub fn hrep_idempotent(d: &Rational, dv: &[Rational; 3]) -> Result<HalfPlanes> {
    if d.is_negative() || dv.iter().any(Signed::is_negative) {
        return Err(Error::ParamRange(
            "the idempotent form needs d and every d_j nonnegative".to_string(),
        ));
    }
    let [d1, d2, d3] = dv;
    let two_d = d + d;
    Ok(HalfPlanes {
        x_min: -(&two_d + d3),
        x_max: d + d1,
        y_min: -(d + d3),
        y_max: &two_d + d2,
        diff_min: -(&two_d + d1),
        diff_max: d + d2,
    })
}
