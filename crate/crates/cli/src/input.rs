use std::path::Path;

use serde::Deserialize;
use troplane::semiring::Rational;
use troplane::{Error, TropMatrix3, TropScalar};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEntries {
    entries: [[String; 3]; 3],
}

/// Parses `{"entries": [[...], [...], [...]]}` with string scalars.
pub fn parse_matrix(text: &str) -> Result<TropMatrix3, Error> {
    let raw: RawEntries = serde_json::from_str(text).map_err(|e| Error::Parse {
        input: format!("line {}, column {}", e.line(), e.column()),
        reason: e.to_string(),
    })?;
    let mut entries: [[TropScalar; 3]; 3] = Default::default();
    for (i, row) in raw.entries.iter().enumerate() {
        for (j, s) in row.iter().enumerate() {
            entries[i][j] = s.parse().map_err(|e: Error| Error::Parse {
                input: format!("entry ({}, {}) = {s:?}", i + 1, j + 1),
                reason: match e {
                    Error::Parse { reason, .. } => reason,
                    other => other.to_string(),
                },
            })?;
        }
    }
    TropMatrix3::new(entries)
}

/// Inline JSON when the argument starts with `{`, `-` for stdin, else a path.
pub fn read_input(arg: &str) -> Result<String, Error> {
    let io = |e: std::io::Error| Error::Parse {
        input: arg.to_string(),
        reason: e.to_string(),
    };
    if arg.trim_start().starts_with('{') {
        Ok(arg.to_string())
    } else if arg == "-" {
        std::io::read_to_string(std::io::stdin()).map_err(io)
    } else {
        std::fs::read_to_string(Path::new(arg)).map_err(io)
    }
}

pub struct Viewport {
    pub xmin: Rational,
    pub xmax: Rational,
    pub ymin: Rational,
    pub ymax: Rational,
}

pub fn parse_viewport(s: &str) -> Result<Viewport, Error> {
    let parts: Vec<&str> = s.split(',').collect();
    let bad = |reason: &str| Error::Parse {
        input: s.to_string(),
        reason: reason.to_string(),
    };
    if parts.len() != 4 {
        return Err(bad("expected xmin,xmax,ymin,ymax"));
    }
    let v = parts
        .iter()
        .map(|p| troplane::semiring::parse_rational(p))
        .collect::<Result<Vec<_>, _>>()?;
    if v[0] >= v[1] || v[2] >= v[3] {
        return Err(bad("viewport must have xmin < xmax and ymin < ymax"));
    }
    let mut it = v.into_iter();
    let mut next = || it.next().expect("four values");
    Ok(Viewport {
        xmin: next(),
        xmax: next(),
        ymin: next(),
        ymax: next(),
    })
}
