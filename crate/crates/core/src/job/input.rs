use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Deserialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::graded::GradedDims;
use crate::jacobian::{random_nondegenerate, CoefficientFunction};
use crate::lattice::{Cone, ConePair, GorensteinPair, LatticePoint};
use crate::scalar::{parse_rational, Rational};

/// Retries allowed when sampling a nondegenerate coefficient function.
pub const SAMPLE_TRIES: usize = 32;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConeInput {
    Rays(Vec<LatticePoint>),
    PolytopeVertices(Vec<LatticePoint>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoefficientSource {
    /// Seeded sample, resampled until nondegenerate.
    Random { seed: u64 },
    Constant(Rational),
    Explicit(Vec<(LatticePoint, Rational)>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Verification {
    Vanishing,
    OriginClasses,
    Decomposition,
    HattedDecomposition,
    FilteredDims,
    Flatness,
}

impl Verification {
    pub const ALL: [Verification; 6] = [
        Verification::Vanishing,
        Verification::OriginClasses,
        Verification::Decomposition,
        Verification::HattedDecomposition,
        Verification::FilteredDims,
        Verification::Flatness,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Verification::Vanishing => "thm-key",
            Verification::OriginClasses => "prop-maincoro",
            Verification::Decomposition => "thm-main",
            Verification::HattedDecomposition => "thm-main-gkz",
            Verification::FilteredDims => "bhiso",
            Verification::Flatness => "flatness",
        }
    }

    /// Whether the check only needs the cone pair, not the Gorenstein structure.
    pub fn cones_only(self) -> bool {
        matches!(self, Verification::Vanishing | Verification::OriginClasses)
    }
}

impl fmt::Display for Verification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Verification {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Verification::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| Error::Validation(format!("unknown verification {s:?}")))
    }
}

/// Which checks a job asks for; `All` expands to whatever the input supports.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Selection {
    All,
    Only(Vec<Verification>),
}

impl FromStr for Selection {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if s == "all" {
            Ok(Selection::All)
        } else {
            Ok(Selection::Only(vec![s.parse()?]))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JobSpec {
    pub name: Option<String>,
    pub cone: ConeInput,
    pub f: Option<CoefficientSource>,
    pub g: Option<CoefficientSource>,
    pub verify: Selection,
    pub max_degree: usize,
    pub n_cap: usize,
    pub seed: u64,
    /// Expected dimension tables keyed by verification name.
    pub expect: BTreeMap<String, GradedDims>,
    pub output: Option<String>,
}

pub const DEFAULT_MAX_DEGREE: usize = 6;
pub const DEFAULT_N_CAP: usize = 8;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    name: Option<String>,
    rays: Option<Vec<Vec<i64>>>,
    polytope_vertices: Option<Vec<Vec<i64>>>,
    f: Option<Value>,
    g: Option<Value>,
    verify: Option<Vec<String>>,
    max_degree: Option<usize>,
    n_cap: Option<usize>,
    seed: Option<u64>,
    expect: Option<BTreeMap<String, BTreeMap<String, usize>>>,
    output: Option<String>,
}

fn parse_error(location: &str, message: impl Into<String>) -> Error {
    Error::Parse {
        location: location.to_string(),
        message: message.into(),
    }
}

fn points(rows: Vec<Vec<i64>>) -> Vec<LatticePoint> {
    rows.into_iter().map(LatticePoint).collect()
}

fn parse_source(v: &Value, location: &str) -> Result<CoefficientSource> {
    match v {
        Value::String(s) => {
            if s == "random" {
                return Err(parse_error(location, "write random:seed=N"));
            }
            if let Some(rest) = s.strip_prefix("random:seed=") {
                let seed = rest.parse().map_err(|_| parse_error(location, format!("bad seed {rest:?}")))?;
                return Ok(CoefficientSource::Random { seed });
            }
            if let Some(rest) = s.strip_prefix("constant:") {
                let q = parse_rational(rest).ok_or_else(|| parse_error(location, format!("bad rational {rest:?}")))?;
                return Ok(CoefficientSource::Constant(q));
            }
            Err(parse_error(location, format!("unknown coefficient source {s:?}")))
        }
        Value::Array(entries) => {
            let mut out = Vec::with_capacity(entries.len());
            for (i, e) in entries.iter().enumerate() {
                let loc = format!("{location}[{i}]");
                let point: Vec<i64> = e
                    .get("point")
                    .and_then(|p| serde_json::from_value(p.clone()).ok())
                    .ok_or_else(|| parse_error(&loc, "expected an integer array under \"point\""))?;
                let value = match e.get("value") {
                    Some(Value::String(s)) => parse_rational(s),
                    Some(Value::Number(n)) => n.as_i64().map(crate::scalar::rat),
                    _ => None,
                }
                .ok_or_else(|| parse_error(&format!("{loc}.value"), "expected a rational \"p/q\""))?;
                out.push((LatticePoint(point), value));
            }
            Ok(CoefficientSource::Explicit(out))
        }
        _ => Err(parse_error(location, "expected a string or a list of {point, value}")),
    }
}

/// Parses and validates a job document.
pub fn parse_input(document: &str) -> Result<JobSpec> {
    let doc: Document = serde_json::from_str(document).map_err(|e| Error::Parse {
        location: format!("line {} column {}", e.line(), e.column()),
        message: e.to_string(),
    })?;
    let cone = match (doc.rays, doc.polytope_vertices) {
        (Some(r), None) => ConeInput::Rays(points(r)),
        (None, Some(v)) => ConeInput::PolytopeVertices(points(v)),
        _ => return Err(parse_error("$", "give exactly one of \"rays\" and \"polytope_vertices\"")),
    };
    let f = doc.f.as_ref().map(|v| parse_source(v, "$.f")).transpose()?;
    let g = doc.g.as_ref().map(|v| parse_source(v, "$.g")).transpose()?;
    let verify = match doc.verify {
        None => Selection::All,
        Some(names) if names.iter().any(|n| n == "all") => Selection::All,
        Some(names) => Selection::Only(
            names
                .iter()
                .enumerate()
                .map(|(i, n)| n.parse().map_err(|_| parse_error(&format!("$.verify[{i}]"), format!("unknown verification {n:?}"))))
                .collect::<Result<_>>()?,
        ),
    };
    let mut expect = BTreeMap::new();
    for (name, table) in doc.expect.unwrap_or_default() {
        name.parse::<Verification>().map_err(|_| parse_error(&format!("$.expect.{name}"), "unknown verification"))?;
        let mut dims = GradedDims::new();
        for (k, d) in table {
            let k: i64 = k.parse().map_err(|_| parse_error(&format!("$.expect.{name}.{k}"), "grading must be an integer"))?;
            dims.set(k, d);
        }
        expect.insert(name, dims);
    }
    let max_degree = doc.max_degree.unwrap_or(DEFAULT_MAX_DEGREE);
    if max_degree < 2 {
        return Err(parse_error("$.max_degree", "must be at least 2"));
    }
    Ok(JobSpec {
        name: doc.name,
        cone,
        f,
        g,
        verify,
        max_degree,
        n_cap: doc.n_cap.unwrap_or(DEFAULT_N_CAP),
        seed: doc.seed.unwrap_or(0),
        expect,
        output: doc.output,
    })
}

impl JobSpec {
    pub fn cone(&self) -> Result<Cone> {
        match &self.cone {
            ConeInput::Rays(r) => Cone::from_rays(r),
            ConeInput::PolytopeVertices(v) => Cone::over_polytope(v),
        }
    }

    pub fn cone_pair(&self) -> Result<ConePair> {
        Ok(ConePair::new(self.cone()?))
    }

    pub fn gorenstein(&self) -> Result<GorensteinPair> {
        GorensteinPair::new(self.cone()?)
    }

    fn source_f(&self) -> CoefficientSource {
        self.f.clone().unwrap_or(CoefficientSource::Random { seed: self.seed })
    }

    fn source_g(&self) -> CoefficientSource {
        self.g.clone().unwrap_or(CoefficientSource::Random { seed: self.seed + 1 })
    }

    /// `f` on `Δ`.
    pub fn f(&self, pair: &GorensteinPair) -> Result<CoefficientFunction> {
        resolve(&self.source_f(), pair).map_err(|e| relabel(e, "f"))
    }

    /// `g` on `Δ^∨`.
    pub fn g(&self, pair: &GorensteinPair) -> Result<CoefficientFunction> {
        resolve(&self.source_g(), &pair.swapped()).map_err(|e| relabel(e, "g"))
    }

    /// The checks to run, with `all` expanded.
    pub fn verifications(&self, gorenstein: bool) -> Vec<Verification> {
        match &self.verify {
            Selection::All => Verification::ALL.into_iter().filter(|v| gorenstein || v.cones_only()).collect(),
            Selection::Only(v) => v.clone(),
        }
    }
}

fn relabel(e: Error, which: &str) -> Error {
    match e {
        Error::Validation(m) => Error::Validation(format!("{which}: {m}")),
        Error::DegenerateCoefficients(m) => Error::DegenerateCoefficients(format!("{which}: {m}")),
        other => other,
    }
}

fn resolve(source: &CoefficientSource, side: &GorensteinPair) -> Result<CoefficientFunction> {
    match source {
        CoefficientSource::Random { seed } => random_nondegenerate(side, *seed, SAMPLE_TRIES),
        CoefficientSource::Constant(c) => Ok(CoefficientFunction::constant(side.delta(), c.clone())),
        CoefficientSource::Explicit(values) => CoefficientFunction::new(side.delta(), values.iter().cloned()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn segment_job() {
        let job = parse_input(r#"{"polytope_vertices": [[-1],[1]], "g": "random:seed=7", "f": "random:seed=9"}"#).unwrap();
        assert_eq!(job.cone, ConeInput::PolytopeVertices(vec![LatticePoint(vec![-1]), LatticePoint(vec![1])]));
        assert_eq!(job.g, Some(CoefficientSource::Random { seed: 7 }));
        assert_eq!(job.verify, Selection::All);
        assert_eq!(job.gorenstein().unwrap().rank(), 2);
    }

    #[test]
    fn quadrant_key_job() {
        let job = parse_input(r#"{"rays": [[1,0],[0,1]], "verify": ["thm-key"]}"#).unwrap();
        assert_eq!(job.verify, Selection::Only(vec![Verification::Vanishing]));
        assert_eq!(job.cone_pair().unwrap().rank(), 2);
    }

    #[test]
    fn foreign_coefficient_point() {
        let job = parse_input(r#"{"polytope_vertices": [[-1],[1]], "f": [{"point": [5, 1], "value": "1/2"}]}"#).unwrap();
        let pair = job.gorenstein().unwrap();
        assert!(matches!(job.f(&pair), Err(Error::Validation(_))));
    }

    #[test]
    fn syntax_error_has_location() {
        match parse_input("{\n  \"rays\": [[1,0],\n") {
            Err(Error::Parse { location, .. }) => assert!(location.starts_with("line ")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn both_cone_forms_rejected() {
        assert!(matches!(
            parse_input(r#"{"rays": [[1]], "polytope_vertices": [[1]]}"#),
            Err(Error::Parse { .. })
        ));
    }
}
