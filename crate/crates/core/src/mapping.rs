//! The maps `f_A(p) = A ⊙ p` and the projector `ρ` onto a tropical span.

use num_traits::Signed;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::arrangement::{
    antenna_cell, enumerate_cells, sample_region, signature_system, Cell, CellSignature, Constraint,
};
use crate::error::{Error, Result};
use crate::matrix3::{MonomialMatrix, TropMatrix3};
use crate::normalform::{read_lower_form, CanonicalParams, CanonicalResult};
use crate::projective::{AffinePoint, ProjPoint, Vec3};
use crate::semiring::{rat, Rational, TropScalar};
use crate::triangle::{antennas_of, hrep_idempotent, Antenna, AntennaKind, HalfPlanes};

/// `f_A(p)`.
pub fn apply(a: &TropMatrix3, p: &ProjPoint) -> ProjPoint {
    ProjPoint::new(a.mul_vec(p.coords()))
        .expect("a valid matrix sends points to points: some column term is finite")
}

/// Nearest point map onto `span(A)`: each column is lowered until it sits
/// below `p`, and the lowered columns are added up.
pub fn project(a: &TropMatrix3, p: &ProjPoint) -> Result<ProjPoint> {
    let e = a.finite_entries()?;
    let q: [Rational; 3] = finite_coords(p)?;
    let mut out: Vec3 = [TropScalar::NegInf, TropScalar::NegInf, TropScalar::NegInf];
    for j in 0..3 {
        let lambda = (0..3)
            .map(|i| &q[i] - &e[i][j])
            .min()
            .expect("three coordinates");
        for i in 0..3 {
            let v = TropScalar::Finite(&lambda + &e[i][j]);
            if v > out[i] {
                out[i] = v;
            }
        }
    }
    ProjPoint::new(out)
}

pub(crate) fn finite_coords(p: &ProjPoint) -> Result<[Rational; 3]> {
    let c = p.coords();
    let f = |i: usize| {
        c[i].finite()
            .cloned()
            .ok_or_else(|| Error::NonFinite("point has a -inf coordinate".to_string()))
    };
    Ok([f(0)?, f(1)?, f(2)?])
}

/// `f_A(p) = p` projectively.
pub fn is_fixed(a: &TropMatrix3, p: &ProjPoint) -> bool {
    apply(a, p) == *p
}

/// Bijectivity class of `f_A`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum MapClass {
    #[serde(rename = "bijective-monomial")]
    BijectiveMonomial,
    #[serde(rename = "non-injective-non-surjective")]
    NonInjectiveNonSurjective,
}

/// `f_A` is bijective exactly when `A` is a monomial matrix.
pub fn classify(a: &TropMatrix3) -> MapClass {
    if a.monomial_pattern().is_some() {
        MapClass::BijectiveMonomial
    } else {
        MapClass::NonInjectiveNonSurjective
    }
}

/// What `f_F` does on one 2-cell of `C^F`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Behaviour {
    IdentityOnSoma,
    CollapseToAntenna { antenna: AntennaKind },
    /// Constant, equal to a column (1-based).
    Corner { column: usize },
    /// Constant along `direction`, landing on the line `target`.
    ParallelProjection { direction: [i64; 2], target: Constraint },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Sample {
    pub point: AffinePoint,
    pub image: AffinePoint,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiecewiseEntry {
    pub cell: Cell,
    pub behaviour: Behaviour,
    pub samples: Vec<Sample>,
    pub valid: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiecewiseReport {
    pub params: CanonicalParams,
    pub entries: Vec<PiecewiseEntry>,
}

impl PiecewiseReport {
    pub fn valid(&self) -> bool {
        self.entries.iter().all(|e| e.valid)
    }

    pub fn entry(&self, sig: &CellSignature) -> Option<&PiecewiseEntry> {
        self.entries.iter().find(|e| e.cell.signature == *sig)
    }
}

impl Serialize for PiecewiseReport {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Row<'a> {
            bounded: bool,
            behaviour: &'a Behaviour,
            samples: &'a [Sample],
            valid: bool,
        }
        struct Cells<'a>(&'a [PiecewiseEntry]);
        impl Serialize for Cells<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let mut m = s.serialize_map(Some(self.0.len()))?;
                for e in self.0 {
                    m.serialize_entry(
                        &e.cell.signature.to_string(),
                        &Row {
                            bounded: e.cell.bounded,
                            behaviour: &e.behaviour,
                            samples: &e.samples,
                            valid: e.valid,
                        },
                    )?;
                }
                m.end()
            }
        }
        let mut m = s.serialize_map(Some(2))?;
        m.serialize_entry("params", &self.params)?;
        m.serialize_entry("cells", &Cells(&self.entries))?;
        m.end()
    }
}

pub const SAMPLES_PER_CELL: usize = 4;

/// Chart direction of `e_m`; the third basis vector is `(-1, -1)`.
fn basis_direction(m: usize) -> [i64; 2] {
    match m {
        0 => [1, 0],
        1 => [0, 1],
        _ => [-1, -1],
    }
}

fn is_recession(system: &[Constraint], dir: [i64; 2]) -> bool {
    system
        .iter()
        .all(|c| c.a as i64 * dir[0] + c.b as i64 * dir[1] <= 0)
}

fn label(
    f: &TropMatrix3,
    cell: &Cell,
    system: &[Constraint],
    antenna_cells: &[(CellSignature, AntennaKind)],
) -> Result<Behaviour> {
    if let Some((_, kind)) = antenna_cells.iter().find(|(s, _)| *s == cell.signature) {
        return Ok(Behaviour::CollapseToAntenna { antenna: *kind });
    }
    let sets = cell.signature.sets();
    if sets.iter().any(|s| s.len() != 1) {
        return Err(Error::Internal(format!("2-cell {} has a tie", cell.signature)));
    }
    let j: [usize; 3] = std::array::from_fn(|i| sets[i][0] - 1);
    let mut used: Vec<usize> = j.to_vec();
    used.sort_unstable();
    used.dedup();
    match used.len() {
        3 if j == [0, 1, 2] => Ok(Behaviour::IdentityOnSoma),
        1 => Ok(Behaviour::Corner { column: j[0] + 1 }),
        2 => {
            let m = (0..3).find(|k| !used.contains(k)).expect("one index unused");
            let e = basis_direction(m);
            let direction = [e, [-e[0], -e[1]]]
                .into_iter()
                .find(|&d| is_recession(system, d))
                .ok_or_else(|| {
                    Error::Internal(format!("cell {} is bounded along its kernel", cell.signature))
                })?;
            // Two rows read the same column, fixing q_i - q_k.
            let (i, k) = [(0, 1), (0, 2), (1, 2)]
                .into_iter()
                .find(|&(i, k)| j[i] == j[k])
                .expect("two rows share a column");
            let c = f.finite(i, j[i])? - f.finite(k, j[k])?;
            let target = match (i, k) {
                (0, 1) => Constraint::eq(1, -1, c),
                (0, 2) => Constraint::eq(1, 0, c),
                _ => Constraint::eq(0, 1, c),
            };
            Ok(Behaviour::ParallelProjection { direction, target })
        }
        _ => Err(Error::Internal(format!(
            "2-cell {} has a permuting linear piece",
            cell.signature
        ))),
    }
}

fn on_antenna(q: &AffinePoint, a: &Antenna) -> bool {
    let (sx, sy) = a.direction.step();
    let delta = q.sub(&a.base_chart);
    let t = if sx != 0 { &delta.x / rat(sx) } else { &delta.y / rat(sy) };
    delta == AffinePoint::new(&t * rat(sx), &t * rat(sy)) && !t.is_negative() && t <= a.length
}

fn on_boundary(f: &TropMatrix3, soma: &HalfPlanes, q: &AffinePoint) -> bool {
    crate::triangle::member(&q.embed(), f).unwrap_or(false) && !soma.interior_contains(q)
}

/// Checks one sample against the claimed behaviour.
pub fn behaviour_holds(
    f: &TropMatrix3,
    soma: &HalfPlanes,
    antennas: &[Antenna],
    behaviour: &Behaviour,
    p: &AffinePoint,
) -> bool {
    let image = |p: &AffinePoint| apply(f, &p.embed()).chart().expect("finite image");
    let q = image(p);
    match behaviour {
        Behaviour::IdentityOnSoma => q == *p && soma.contains(p),
        Behaviour::CollapseToAntenna { antenna } => antennas
            .iter()
            .find(|a| a.kind == *antenna)
            .is_some_and(|a| on_antenna(&q, a)),
        Behaviour::Corner { column } => {
            ProjPoint::new(f.col(column - 1)).and_then(|c| c.chart()).ok() == Some(q)
        }
        Behaviour::ParallelProjection { direction, target } => {
            let moved = |k: i64| {
                AffinePoint::new(&p.x + rat(k * direction[0]), &p.y + rat(k * direction[1]))
            };
            target.holds(&q)
                && on_boundary(f, soma, &q)
                && [1, 7, 100].into_iter().all(|k| image(&moved(k)) == q)
        }
    }
}

fn signature_seed(sig: &CellSignature) -> u64 {
    sig.0.iter().fold(0u64, |acc, &m| acc * 8 + m as u64)
}

/// Labels every 2-cell of `C^F` for `F` in lower canonical form and checks
/// each label on sampled points.
pub fn piecewise_report(f: &TropMatrix3) -> Result<PiecewiseReport> {
    let params = read_lower_form(f)?;
    let c = CanonicalResult {
        params: params.clone(),
        p: MonomialMatrix::identity(),
        q: MonomialMatrix::identity(),
        f: f.clone(),
    };
    let antennas = antennas_of(&c)?;
    let soma = hrep_idempotent(&params.d, &params.dv)?;
    let antenna_cells = antennas
        .iter()
        .map(|a| Ok((antenna_cell(f, a.kind)?.cell.signature, a.kind)))
        .collect::<Result<Vec<_>>>()?;
    let mut entries = Vec::new();
    for cell in enumerate_cells(f).cells.into_iter().filter(|c| c.dim == 2) {
        let system = signature_system(f, &cell.signature).expect("enumerated cell");
        let behaviour = label(f, &cell, &system, &antenna_cells)?;
        let mut rng = ChaCha8Rng::seed_from_u64(signature_seed(&cell.signature));
        let points = sample_region(&system, &cell.witness, &mut rng, SAMPLES_PER_CELL);
        let valid = points
            .iter()
            .all(|p| behaviour_holds(f, &soma, &antennas, &behaviour, p));
        let samples = points
            .into_iter()
            .map(|point| Sample {
                image: apply(f, &point.embed()).chart().expect("finite image"),
                point,
            })
            .collect();
        entries.push(PiecewiseEntry {
            cell,
            behaviour,
            samples,
            valid,
        });
    }
    Ok(PiecewiseReport { params, entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::signature_at;
    use crate::normalform::{make_f, make_l};
    use crate::projective::{collinear, line_vertex, on_line, TropLine};
    use crate::semiring::{frac, trop_distance};
    use crate::triangle::member;
    use proptest::prelude::*;

    fn l3924() -> TropMatrix3 {
        make_l(&rat(3), &[9, 2, 4].map(rat)).unwrap()
    }

    fn pinwheel_f() -> TropMatrix3 {
        make_f(&CanonicalParams::new(frac(1, 3), [0, 0, 1].map(rat), [0, 1, 1].map(rat), rat(0))).unwrap()
    }

    #[test]
    fn apply_and_project_disagree() {
        let p = ProjPoint::ints([-12, 0, 0]);
        assert_eq!(apply(&l3924(), &p), ProjPoint::ints([-5, 0, 0]));
        assert_eq!(project(&l3924(), &p).unwrap(), ProjPoint::ints([-10, -5, 0]));
        assert_ne!(apply(&l3924(), &p), project(&l3924(), &p).unwrap());
    }

    #[test]
    fn apply_examples() {
        let p = ProjPoint::ints([4, -7, 19]);
        assert_eq!(apply(&TropMatrix3::identity(), &p), p);
        let a = TropMatrix3::ints([[0, -5, 0], [-7, 0, 0], [-6, -1, 0]]);
        assert_eq!(apply(&a, &ProjPoint::ints([0, -100, -90])), ProjPoint::new(a.col(0)).unwrap());
        let mut e = [[TropScalar::NegInf, TropScalar::zero(), TropScalar::NegInf],
            [TropScalar::zero(), TropScalar::NegInf, TropScalar::NegInf],
            [TropScalar::NegInf, TropScalar::NegInf, TropScalar::zero()]];
        let p12 = TropMatrix3::new(e.clone()).unwrap();
        assert_eq!(apply(&p12, &ProjPoint::ints([1, 2, 3])), ProjPoint::ints([2, 1, 3]));
        assert!(matches!(project(&p12, &ProjPoint::ints([1, 2, 3])), Err(Error::NonFinite(_))));
        e[2][2] = TropScalar::int(5);
        assert_eq!(classify(&TropMatrix3::new(e).unwrap()), MapClass::BijectiveMonomial);
    }

    #[test]
    fn project_fixes_columns() {
        let a = TropMatrix3::ints([[0, -5, 0], [-7, 0, 0], [-6, -1, 0]]);
        for j in 0..3 {
            let c = ProjPoint::new(a.col(j)).unwrap();
            assert_eq!(project(&a, &c).unwrap(), c);
        }
        let far = ProjPoint::ints([50, -40, 0]);
        assert!(!member(&far, &a).unwrap());
    }

    #[test]
    fn fixed_point_examples() {
        let e = pinwheel_f();
        let c = ProjPoint::new(e.pow(2).col(0)).unwrap();
        assert_eq!(c, ProjPoint::new([rat(0), frac(-2, 3), frac(-1, 3)].map(TropScalar::Finite)).unwrap());
        assert!(is_fixed(&e, &c));
        // Tip of the h2 antenna maps to its base.
        let (d, tip) = (frac(1, 3), AffinePoint::new(frac(4, 3), frac(5, 3)));
        assert!(!is_fixed(&e, &tip.embed()));
        assert_eq!(apply(&e, &tip.embed()).chart().unwrap(), AffinePoint::new(d.clone(), &d + &d));
        assert!(!is_fixed(&e, &AffinePoint::ints(-50, -60).embed()));
    }

    #[test]
    fn classify_examples() {
        let n = TropScalar::NegInf;
        let z = TropScalar::zero();
        let p12 = TropMatrix3::new([[n.clone(), z.clone(), n.clone()], [z.clone(), n.clone(), n.clone()], [n.clone(), n, z]]).unwrap();
        assert_eq!(classify(&p12), MapClass::BijectiveMonomial);
        assert_eq!(classify(&TropMatrix3::identity()), MapClass::BijectiveMonomial);
        assert_eq!(classify(&l3924()), MapClass::NonInjectiveNonSurjective);
        assert_eq!(serde_json::to_string(&classify(&l3924())).unwrap(), "\"non-injective-non-surjective\"");
    }

    #[test]
    fn piecewise_examples() {
        let l = l3924();
        let r = piecewise_report(&l).unwrap();
        assert!(r.valid());
        assert_eq!(r.entries.len(), 10);
        let p = AffinePoint::ints(0, -20);
        assert_eq!(apply(&l, &p.embed()).chart().unwrap(), AffinePoint::ints(0, -7));
        let e = r.entry(&signature_at(&l, &p)).unwrap();
        assert_eq!(e.behaviour, Behaviour::ParallelProjection { direction: [0, -1], target: Constraint::eq(0, 1, rat(-7)) });
        let b = r.entries.iter().filter(|e| e.behaviour == Behaviour::IdentityOnSoma).count();
        assert_eq!(b, 1);
        let corners = r.entries.iter().filter(|e| matches!(e.behaviour, Behaviour::Corner { .. })).count();
        assert_eq!(corners, 3);

        let f = pinwheel_f();
        let r = piecewise_report(&f).unwrap();
        assert!(r.valid());
        let q = AffinePoint::ints(1, 2);
        assert_eq!(apply(&f, &q.embed()).chart().unwrap(), AffinePoint::new(rat(1), frac(4, 3)));
        let e = r.entry(&signature_at(&f, &q)).unwrap();
        assert_eq!(e.behaviour, Behaviour::CollapseToAntenna { antenna: AntennaKind::H2 });

        let two_antenna = make_f(&CanonicalParams::ints(0, [0, 6, 1], [0, 1, 0], 4)).unwrap();
        let r = piecewise_report(&two_antenna).unwrap();
        assert!(r.valid());
        let v = serde_json::to_value(&r).unwrap();
        assert!(v["cells"].as_object().unwrap().values().any(|c| c["behaviour"]["kind"] == "collapse-to-antenna"));
        assert_eq!(piecewise_report(&TropMatrix3::ints([[0, 1, 3], [0, 3, 4], [0, 0, 0]])).unwrap_err(), Error::NotCanonical);
    }

    #[test]
    fn soma_points_are_fixed() {
        let h = hrep_idempotent(&rat(3), &[9, 2, 4].map(rat)).unwrap();
        for v in h.vertices() {
            assert!(is_fixed(&l3924(), &v.embed()));
        }
        for x in -10..=12 {
            for y in -7..=15 {
                let p = AffinePoint::ints(x, y);
                assert_eq!(is_fixed(&l3924(), &p.embed()), h.contains(&p), "{p}");
            }
        }
    }

    fn matrix() -> impl Strategy<Value = TropMatrix3> {
        prop::array::uniform9(-20i64..20).prop_map(|v| {
            TropMatrix3::from_rationals(std::array::from_fn(|i| std::array::from_fn(|j| frac(v[3 * i + j], 2))))
        })
    }

    fn point() -> impl Strategy<Value = ProjPoint> {
        prop::array::uniform3(-40i64..40).prop_map(|c| ProjPoint::new(c.map(|v| TropScalar::Finite(frac(v, 3)))).unwrap())
    }

    fn params() -> impl Strategy<Value = CanonicalParams> {
        (0i64..5, prop::array::uniform3(0i64..5), prop::array::uniform3(0i64..5), 0i64..5, 1i64..4).prop_map(
            |(d, dv, h, g, den)| {
                let r = |v: i64| frac(v, den);
                let (mut d, mut dv, mut h, g) = (r(d), dv.map(r), h.map(r), r(g));
                if g.is_positive() {
                    d = rat(0);
                    dv[0] = rat(0);
                    h[0] = rat(0);
                    h[2] = rat(0);
                }
                for j in 0..3 {
                    if h[(j + 1) % 3].is_positive() {
                        dv[j] = rat(0);
                    }
                }
                CanonicalParams::new(d, dv, h, g)
            },
        )
    }

    proptest! {
        #[test]
        fn composition_law(a in matrix(), p in point()) {
            prop_assert_eq!(apply(&a, &apply(&a, &p)), apply(&a.pow(2), &p));
        }

        #[test]
        fn image_in_span(a in matrix(), p in point()) {
            prop_assert!(member(&apply(&a, &p), &a).unwrap());
        }

        #[test]
        fn projector_is_idempotent_and_nearest(a in matrix(), p in point(), ws in prop::collection::vec(prop::array::uniform3(-30i64..30), 20)) {
            let r = project(&a, &p).unwrap();
            prop_assert_eq!(project(&a, &r).unwrap(), r.clone());
            let (pc, rc) = (p.chart().unwrap(), r.chart().unwrap());
            let best = trop_distance((&pc.x, &pc.y), (&rc.x, &rc.y));
            for w in ws {
                let v = apply(&a, &ProjPoint::new(w.map(TropScalar::int)).unwrap()).chart().unwrap();
                prop_assert!(best <= trop_distance((&pc.x, &pc.y), (&v.x, &v.y)));
            }
        }

        #[test]
        fn collinear_points_stay_collinear(a in matrix(), p in point(), q in point(), ray in 0usize..3, t in 0i64..30) {
            prop_assume!(p != q);
            let line = TropLine::through(&p, &q).unwrap();
            let v = line_vertex(&line).unwrap().chart().unwrap();
            let step = [(-1, 0), (0, -1), (1, 1)][ray];
            let r = AffinePoint::new(&v.x + rat(t * step.0), &v.y + rat(t * step.1)).embed();
            prop_assert!(on_line(&r, &line));
            prop_assert!(collinear(&p, &q, &r).unwrap());
            prop_assert!(collinear(&apply(&a, &p), &apply(&a, &q), &apply(&a, &r)).unwrap());
        }

        #[test]
        fn piecewise_labels_hold(p in params()) {
            let f = make_f(&p).unwrap();
            let r = piecewise_report(&f).unwrap();
            prop_assert!(r.valid(), "{}", serde_json::to_string(&r).unwrap());
            let total = r.entries.len();
            prop_assert_eq!(total, enumerate_cells(&f).counts[2]);
        }
    }
}
