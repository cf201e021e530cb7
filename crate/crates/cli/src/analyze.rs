use serde::Serialize;
use troplane::arrangement::{enumerate_cells, CellSignature};
use troplane::mapping::{classify, piecewise_report, MapClass, PiecewiseReport};
use troplane::normalform::{canonical_form, CanonicalResult};
use troplane::triangle::{analyze_with, TriangleReport};
use troplane::{Error, TropMatrix3};

#[derive(Serialize)]
pub struct Census {
    pub counts: [usize; 3],
    pub total: usize,
    pub euler: i64,
    pub bounded_cell: Option<CellSignature>,
}

#[derive(Serialize)]
pub struct Report {
    pub matrix: TropMatrix3,
    pub classification: MapClass,
    pub census: Census,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub canonical: Option<CanonicalResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub triangle: Option<TriangleReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub piecewise: Option<PiecewiseReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
}

pub fn analyze(a: &TropMatrix3) -> Result<Report, Error> {
    let arr = enumerate_cells(a);
    let bounded_cell = arr
        .cells
        .iter()
        .find(|c| c.dim == 2 && c.bounded)
        .map(|c| c.signature);
    let census = Census {
        counts: arr.counts,
        total: arr.total(),
        euler: arr.euler(),
        bounded_cell,
    };
    let classification = classify(a);
    let mut report = Report {
        matrix: a.clone(),
        classification,
        census,
        canonical: None,
        triangle: None,
        piecewise: None,
        skipped: None,
    };
    if !a.is_all_finite() {
        if classification == MapClass::BijectiveMonomial {
            report.skipped = Some("monomial matrix: f_A is a bijection and spans no triangle".to_string());
            return Ok(report);
        }
        return Err(Error::NonFinite(
            "canonicalization needs an all-finite matrix".to_string(),
        ));
    }
    let c = canonical_form(a)?;
    report.triangle = Some(analyze_with(a, &c)?);
    report.piecewise = Some(piecewise_report(&c.f)?);
    report.canonical = Some(c);
    Ok(report)
}
