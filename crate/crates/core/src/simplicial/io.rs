//! Plain-text triangulation format.
//!
//! ```text
//! # comment
//! dim 2
//! 0 1 2
//! 0 2 3
//! ```
//!
//! The first non-comment line is `dim n`; every following non-empty line is
//! one facet of `n + 1` whitespace-separated nonnegative vertex ids.

use thiserror::Error;

use super::triangulation::{validate_triangulation, OrientedTriangulation, TriangulationError};

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("missing `dim n` header")]
    MissingHeader,
    #[error(transparent)]
    Invalid(#[from] TriangulationError),
}

/// Parses the raw header and facet list without validating the complex.
pub fn parse_facets(text: &str) -> Result<(usize, Vec<Vec<usize>>), ParseError> {
    let mut dim: Option<usize> = None;
    let mut facets = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let syntax = |msg: String| ParseError::Syntax {
            line: lineno + 1,
            msg,
        };
        match dim {
            None => {
                let mut parts = line.split_whitespace();
                if parts.next() != Some("dim") {
                    return Err(syntax(format!("expected `dim n`, found `{line}`")));
                }
                let n = parts
                    .next()
                    .and_then(|p| p.parse::<usize>().ok())
                    .ok_or_else(|| syntax("bad dimension".into()))?;
                if parts.next().is_some() {
                    return Err(syntax("trailing tokens after dimension".into()));
                }
                dim = Some(n);
            }
            Some(n) => {
                let facet = line
                    .split_whitespace()
                    .map(|tok| tok.parse::<usize>().map_err(|_| syntax(format!("bad vertex id `{tok}`"))))
                    .collect::<Result<Vec<_>, _>>()?;
                if facet.len() != n + 1 {
                    return Err(syntax(format!(
                        "facet has {} vertices, `dim {n}` needs {}",
                        facet.len(),
                        n + 1
                    )));
                }
                facets.push(facet);
            }
        }
    }
    Ok((dim.ok_or(ParseError::MissingHeader)?, facets))
}

pub fn parse_triangulation(text: &str) -> Result<OrientedTriangulation, ParseError> {
    let (_, facets) = parse_facets(text)?;
    Ok(validate_triangulation(facets)?)
}

/// Writes facets in their stored order. Reading the output back yields the
/// same facets and the same signs.
pub fn write_triangulation(t: &OrientedTriangulation) -> String {
    let mut out = format!("dim {}\n", t.dimension());
    for f in t.facets() {
        let parts: Vec<String> = f.iter().map(|v| v.to_string()).collect();
        out.push_str(&parts.join(" "));
        out.push('\n');
    }
    out
}
