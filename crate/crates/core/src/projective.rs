//! Points and lines of the tropical projective plane.
//!
//! A [`ProjPoint`] is a triple of max-plus scalars taken up to a common
//! finite shift. The `Z = 0` chart sends `[x, y, z]` to `(x - z, y - z)`.
//! Lines are stored by their coefficient point: `L_p` is the set of `q`
//! where `max_j (p_j + q_j)` is attained at least twice.

use std::fmt;
use std::hash::{Hash, Hasher};

use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::matrix3::TropMatrix3;
use crate::semiring::{self, rat, t_add, t_mul, Rational, TropScalar};

/// Raw triple of scalars; a representative, not a projective class.
pub type Vec3 = [TropScalar; 3];

/// A point of the tropical projective plane.
///
/// Stores whatever representative it was built from; equality and hashing
/// go through the canonical representative whose largest coordinate is 0.
#[derive(Clone, Debug)]
pub struct ProjPoint {
    coords: Vec3,
}

impl ProjPoint {
    pub fn new(coords: Vec3) -> Result<Self> {
        if coords.iter().all(|c| !c.is_finite()) {
            return Err(Error::InvalidPoint);
        }
        Ok(ProjPoint { coords })
    }

    /// Point from integer coordinates (all finite).
    pub fn ints(c: [i64; 3]) -> Self {
        ProjPoint {
            coords: c.map(TropScalar::int),
        }
    }

    pub fn coords(&self) -> &Vec3 {
        &self.coords
    }

    pub fn into_coords(self) -> Vec3 {
        self.coords
    }

    pub fn is_all_finite(&self) -> bool {
        self.coords.iter().all(TropScalar::is_finite)
    }

    /// Representative with maximum coordinate equal to zero.
    pub fn canonical(&self) -> Vec3 {
        let top = self
            .coords
            .iter()
            .filter_map(TropScalar::finite)
            .max()
            .cloned()
            .expect("a projective point has a finite coordinate");
        self.coords.clone().map(|c| c.sub(&top))
    }

    /// `λ ⊙ p`.
    pub fn shift(&self, lambda: &Rational) -> ProjPoint {
        let l = TropScalar::Finite(lambda.clone());
        ProjPoint {
            coords: self.coords.clone().map(|c| t_mul(&c, &l)),
        }
    }

    /// Coordinate-wise negation; only defined when every coordinate is finite.
    pub fn neg(&self) -> Result<ProjPoint> {
        let [a, b, c] = &self.coords;
        Ok(ProjPoint {
            coords: [a.neg()?, b.neg()?, c.neg()?],
        })
    }

    /// Image in the `Z = 0` chart.
    pub fn chart(&self) -> Result<AffinePoint> {
        let z = self.coords[2].finite().ok_or(Error::BoundaryPoint)?;
        match (&self.coords[0], &self.coords[1]) {
            (TropScalar::Finite(x), TropScalar::Finite(y)) => Ok(AffinePoint::new(x - z, y - z)),
            _ => Err(Error::NonFinite(
                "chart image has a -inf coordinate".to_string(),
            )),
        }
    }
}

impl PartialEq for ProjPoint {
    fn eq(&self, other: &Self) -> bool {
        self.canonical() == other.canonical()
    }
}

impl Eq for ProjPoint {}

impl Hash for ProjPoint {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.canonical().hash(state);
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = &self.coords;
        write!(f, "[{a}, {b}, {c}]")
    }
}

impl Serialize for ProjPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coords.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ProjPoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let coords = <[TropScalar; 3]>::deserialize(d)?;
        ProjPoint::new(coords).map_err(serde::de::Error::custom)
    }
}

/// Point of the affine chart `Z = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AffinePoint {
    #[serde(with = "semiring::rational_str")]
    pub x: Rational,
    #[serde(with = "semiring::rational_str")]
    pub y: Rational,
}

impl AffinePoint {
    pub fn new(x: Rational, y: Rational) -> Self {
        AffinePoint { x, y }
    }

    pub fn ints(x: i64, y: i64) -> Self {
        AffinePoint::new(rat(x), rat(y))
    }

    pub fn origin() -> Self {
        AffinePoint::new(Rational::zero(), Rational::zero())
    }

    /// `[x, y, 0]`.
    pub fn embed(&self) -> ProjPoint {
        ProjPoint {
            coords: [
                TropScalar::Finite(self.x.clone()),
                TropScalar::Finite(self.y.clone()),
                TropScalar::zero(),
            ],
        }
    }

    pub fn add(&self, other: &AffinePoint) -> AffinePoint {
        AffinePoint::new(&self.x + &other.x, &self.y + &other.y)
    }

    pub fn sub(&self, other: &AffinePoint) -> AffinePoint {
        AffinePoint::new(&self.x - &other.x, &self.y - &other.y)
    }

    pub fn scale(&self, k: &Rational) -> AffinePoint {
        AffinePoint::new(&self.x * k, &self.y * k)
    }

    pub fn midpoint(&self, other: &AffinePoint) -> AffinePoint {
        let half = semiring::frac(1, 2);
        self.add(other).scale(&half)
    }

    pub fn norm(&self) -> Rational {
        semiring::plane_norm(&self.x, &self.y)
    }

    pub fn distance(&self, other: &AffinePoint) -> Rational {
        semiring::trop_distance((&self.x, &self.y), (&other.x, &other.y))
    }
}

impl fmt::Display for AffinePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Tropical cross product (tropical Cramer's rule).
///
/// `cross(p, q)` is the stable intersection of `L_p` and `L_q`; dually,
/// `-cross(p, q)` is the vertex of the stable join of `p` and `q`.
pub fn cross(p: &ProjPoint, q: &ProjPoint) -> Result<ProjPoint> {
    cross_raw(p.coords(), q.coords())
}

pub(crate) fn cross_raw(p: &Vec3, q: &Vec3) -> Result<ProjPoint> {
    let pair = |i: usize, j: usize| t_add(&t_mul(&p[i], &q[j]), &t_mul(&q[i], &p[j]));
    let coords = [pair(1, 2), pair(0, 2), pair(0, 1)];
    ProjPoint::new(coords)
        .map_err(|_| Error::Degenerate("cross product has no finite coordinate".to_string()))
}

/// Tropical line `L_p`, stored by its coefficient point `p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TropLine {
    pub coeffs: ProjPoint,
}

impl TropLine {
    pub fn new(coeffs: ProjPoint) -> Self {
        TropLine { coeffs }
    }

    /// Stable join of two points: `L_{p ⊗ q}`.
    pub fn through(p: &ProjPoint, q: &ProjPoint) -> Result<Self> {
        Ok(TropLine::new(cross(p, q)?))
    }

    /// Stable intersection with another line.
    pub fn stable_intersection(&self, other: &TropLine) -> Result<ProjPoint> {
        cross(&self.coeffs, &other.coeffs)
    }

    pub fn contains(&self, q: &ProjPoint) -> bool {
        on_line(q, self)
    }

    /// Vertex `-p` of a tripod line.
    pub fn vertex(&self) -> Result<ProjPoint> {
        line_vertex(self)
    }
}

/// Number of indices attaining `max_j (a_j + b_j)`.
pub(crate) fn max_multiplicity(a: &Vec3, b: &Vec3) -> usize {
    let sums: Vec<TropScalar> = (0..3).map(|j| t_mul(&a[j], &b[j])).collect();
    let top = sums.iter().max().expect("three sums");
    sums.iter().filter(|s| *s == top).count()
}

/// Whether `q` lies on `line`: the maximum of `coeffs_j + q_j` is attained twice.
pub fn on_line(q: &ProjPoint, line: &TropLine) -> bool {
    max_multiplicity(q.coords(), line.coeffs.coords()) >= 2
}

/// Vertex of a line whose coefficients are all finite.
pub fn line_vertex(line: &TropLine) -> Result<ProjPoint> {
    if !line.coeffs.is_all_finite() {
        return Err(Error::Degenerate(
            "line with a -inf coefficient has no vertex".to_string(),
        ));
    }
    line.coeffs.neg()
}

/// Tropical segment `span(p, q)` in the chart: at most two classical pieces
/// `start -- elbow -- end` with slopes 0, 1 or infinity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Segment {
    pub start: AffinePoint,
    pub elbow: AffinePoint,
    pub end: AffinePoint,
}

impl Segment {
    pub fn is_point(&self) -> bool {
        self.start == self.end
    }

    /// Integer length, the sum of the two classical pieces.
    pub fn integer_length(&self) -> Rational {
        self.start.distance(&self.elbow) + self.elbow.distance(&self.end)
    }
}

/// `span(p, q)`, elbow at `-(p ⊗ q)`.
pub fn span_segment(p: &ProjPoint, q: &ProjPoint) -> Result<Segment> {
    let start = p.chart()?;
    let end = q.chart()?;
    let elbow = cross(p, q)?.neg()?.chart()?;
    Ok(Segment { start, elbow, end })
}

/// `co-span(p, q)`, elbow at `(-p) ⊗ (-q)`. Needs all-finite inputs.
pub fn cospan_segment(p: &ProjPoint, q: &ProjPoint) -> Result<Segment> {
    let start = p.chart()?;
    let end = q.chart()?;
    let elbow = cross(&p.neg()?, &q.neg()?)?.chart()?;
    Ok(Segment { start, elbow, end })
}

/// Tropical collinearity: the matrix with columns `p, q, r` is tropically singular.
pub fn collinear(p: &ProjPoint, q: &ProjPoint, r: &ProjPoint) -> Result<bool> {
    let m = TropMatrix3::from_columns([p.coords(), q.coords(), r.coords()])?;
    Ok(!m.trop_det().regular)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semiring::frac;
    use proptest::prelude::*;

    fn p(c: [i64; 3]) -> ProjPoint {
        ProjPoint::ints(c)
    }

    #[test]
    fn chart_examples() {
        assert_eq!(p([3, 4, 6]).chart().unwrap(), AffinePoint::ints(-3, -2));
        assert_eq!(p([0, 0, 0]).chart().unwrap(), AffinePoint::origin());
        let boundary =
            ProjPoint::new([TropScalar::int(1), TropScalar::int(2), TropScalar::NegInf]).unwrap();
        assert_eq!(boundary.chart(), Err(Error::BoundaryPoint));
        let a = AffinePoint::new(frac(1, 3), frac(-5, 2));
        assert_eq!(a.embed().chart().unwrap(), a);
    }

    #[test]
    fn projective_equality() {
        assert_eq!(p([2, 2, 2]), p([0, 0, 0]));
        assert_eq!(p([12, 13, 21]), p([-1, 0, 8]));
        assert_ne!(p([12, 13, 21]), p([-2, 0, 8]));
        assert!(ProjPoint::new([TropScalar::NegInf, TropScalar::NegInf, TropScalar::NegInf]).is_err());
    }

    #[test]
    fn cramer_examples() {
        let a = p([3, 4, 6]);
        let b = p([-2, 0, 8]);
        let c = p([1, 1, 0]);
        let ab = cross(&a, &b).unwrap();
        let bc = cross(&b, &c).unwrap();
        assert_eq!(ab.coords(), p([12, 11, 3]).coords());
        assert_eq!(bc.coords(), p([9, 9, 1]).coords());
        let corner = cross(&ab, &bc).unwrap();
        assert_eq!(corner.coords(), p([12, 13, 21]).coords());
        assert_eq!(corner, p([-1, 0, 8]));
        assert_ne!(corner, b);
    }

    #[test]
    fn cross_of_boundary_points_can_degenerate() {
        let e1 = ProjPoint::new([TropScalar::zero(), TropScalar::NegInf, TropScalar::NegInf]).unwrap();
        assert!(matches!(cross(&e1, &e1), Err(Error::Degenerate(_))));
    }

    #[test]
    fn incidence_examples() {
        let line = TropLine::new(p([12, 11, 3]));
        assert!(on_line(&p([3, 4, 6]), &line));
        assert!(on_line(&p([-2, 0, 8]), &line));
        assert!(!on_line(&p([0, 0, 0]), &line));
    }

    #[test]
    fn vertex_examples() {
        let zero = TropLine::new(p([0, 0, 0]));
        assert_eq!(line_vertex(&zero).unwrap(), p([0, 0, 0]));
        assert_eq!(line_vertex(&TropLine::new(p([2, 2, 2]))).unwrap(), p([0, 0, 0]));
        let v = line_vertex(&TropLine::new(p([12, 11, 3]))).unwrap();
        assert_eq!(v.chart().unwrap(), AffinePoint::ints(-9, -8));
        let slope_one =
            TropLine::new(ProjPoint::new([TropScalar::int(0), TropScalar::int(1), TropScalar::NegInf]).unwrap());
        assert!(matches!(line_vertex(&slope_one), Err(Error::Degenerate(_))));
    }

    #[test]
    fn segment_examples() {
        let a = p([3, 4, 6]);
        let b = p([-2, 0, 8]);
        let s = span_segment(&a, &a).unwrap();
        assert!(s.is_point());
        assert_eq!(span_segment(&a, &b).unwrap().elbow, AffinePoint::ints(-9, -8));
        assert_eq!(cospan_segment(&a, &b).unwrap().elbow, AffinePoint::ints(-4, -2));
    }

    #[test]
    fn collinearity_examples() {
        let a = p([3, 4, 6]);
        let b = p([-2, 0, 8]);
        assert!(collinear(&a, &a, &b).unwrap());
        let elbow = cross(&a, &b).unwrap().neg().unwrap();
        assert!(collinear(&a, &b, &elbow).unwrap());
        assert!(!collinear(&a, &b, &p([0, 0, 0])).unwrap());
    }

    fn finite_point() -> impl Strategy<Value = ProjPoint> {
        prop::array::uniform3((-30i64..30, 1i64..4)).prop_map(|c| {
            ProjPoint::new(c.map(|(n, d)| TropScalar::Finite(frac(n, d)))).unwrap()
        })
    }

    proptest! {
        #[test]
        fn point_line_duality(a in finite_point(), b in finite_point()) {
            let la = TropLine::new(a.clone());
            let lb = TropLine::new(b.clone());
            prop_assert_eq!(on_line(&b, &la), on_line(&a, &lb));
        }

        #[test]
        fn join_contains_generators(a in finite_point(), b in finite_point()) {
            let join = TropLine::through(&a, &b).unwrap();
            prop_assert!(join.contains(&a));
            prop_assert!(join.contains(&b));
            prop_assert_eq!(cross(&a, &b).unwrap(), cross(&b, &a).unwrap());
        }

        #[test]
        fn span_cospan_parallelogram(a in finite_point(), b in finite_point()) {
            let lhs = a.chart().unwrap().add(&b.chart().unwrap());
            let span = span_segment(&a, &b).unwrap();
            let cospan = cospan_segment(&a, &b).unwrap();
            prop_assert_eq!(lhs, span.elbow.add(&cospan.elbow));
        }

        #[test]
        fn segment_length_is_distance(a in finite_point(), b in finite_point()) {
            let s = span_segment(&a, &b).unwrap();
            prop_assert_eq!(s.integer_length(), s.start.distance(&s.end));
        }
    }
}
