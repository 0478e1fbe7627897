use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use super::input::{JobSpec, Verification};
use crate::error::{Error, Result};
use crate::gkz::{connection_on_hb, ConnectionBundle};
use crate::graded::GradedDims;
use crate::jacobian::{compare_hat_dims, CoefficientFunction, HatComparison};
use crate::koszul::{certify_coefficients, verify_decomposition, verify_hatted_decomposition, HattedDecompositionReport, DecompositionReport};
use crate::lattice::{ConePair, FacePoset, GorensteinPair, LatticePoint};
use crate::sheaf::{verify_origin_classes, verify_vanishing, VanishingReport, OriginReport};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    NotStabilized,
    Fail,
}

#[derive(Clone, Debug, Serialize)]
pub struct PairSummary {
    pub rank: usize,
    pub gorenstein: bool,
    pub rays: Vec<LatticePoint>,
    pub dual_rays: Vec<LatticePoint>,
    pub delta: Option<usize>,
    pub delta_dual: Option<usize>,
    /// Number of faces by dimension.
    pub faces: GradedDims,
    pub dual_faces: GradedDims,
}

fn face_counts(p: &FacePoset) -> GradedDims {
    let mut out = GradedDims::new();
    for f in p.faces() {
        out.add(f.dim as i64, 1);
    }
    out
}

impl PairSummary {
    pub fn new(cones: &ConePair, gorenstein: Option<&GorensteinPair>) -> PairSummary {
        PairSummary {
            rank: cones.rank(),
            gorenstein: gorenstein.is_some(),
            rays: cones.primal().rays().to_vec(),
            dual_rays: cones.dual().rays().to_vec(),
            delta: gorenstein.map(|g| g.delta().len()),
            delta_dual: gorenstein.map(|g| g.delta_dual().len()),
            faces: face_counts(cones.primal_faces()),
            dual_faces: face_counts(cones.dual_faces()),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Parameters {
    pub max_degree: usize,
    pub n_cap: usize,
    pub seed: u64,
    pub f: Option<CoefficientFunction>,
    pub g: Option<CoefficientFunction>,
}

/// Filtered against graded dimensions on both sides.
#[derive(Clone, Debug, Serialize)]
pub struct FilteredDimsReport {
    /// `R̂₁(g,σ)` for faces `σ` of `K^∨`.
    pub dual_side: Vec<HatComparison>,
    /// `R̂₁(f,θ)` for faces `θ` of `K`.
    pub primal_side: Vec<HatComparison>,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
#[serde(untagged)]
pub enum Details {
    Vanishing(Box<VanishingReport>),
    Origins(Vec<OriginReport>),
    Decomposition(Box<DecompositionReport>),
    HattedDecomposition(Box<HattedDecompositionReport>),
    FilteredDims(Box<FilteredDimsReport>),
    Flatness(Box<ConnectionBundle>),
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationResult {
    pub name: &'static str,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dims: Option<GradedDims>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<GradedDims>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub details: Option<Details>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema_version: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub pair: PairSummary,
    pub parameters: Parameters,
    pub verifications: Vec<VerificationResult>,
    pub verdict: Verdict,
}

impl Report {
    /// 0 when everything passes, 1 on any failure, 3 when the only problems are unstabilized truncations.
    pub fn exit_code(&self) -> i32 {
        match self.verdict {
            Verdict::Pass => 0,
            Verdict::Fail => 1,
            Verdict::NotStabilized => 3,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

fn verdict(pass: bool) -> Verdict {
    if pass {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}

/// Everything a check may need, resolved once.
pub struct Context {
    pub cones: ConePair,
    pub pair: Option<GorensteinPair>,
    pub f: Option<CoefficientFunction>,
    pub g: Option<CoefficientFunction>,
    pub max_degree: usize,
    pub n_cap: usize,
}

impl Context {
    /// Builds the cones and, when needed, certified coefficient functions. Errors here are input errors.
    pub fn new(job: &JobSpec, checks: &[Verification]) -> Result<Context> {
        let cones = job.cone_pair()?;
        let needs_pair = checks.iter().any(|v| !v.cones_only());
        let pair = match job.gorenstein() {
            Ok(p) => Some(p),
            Err(e) if needs_pair => return Err(e),
            Err(_) => None,
        };
        let (f, g) = match (&pair, needs_pair) {
            (Some(p), true) => {
                let f = job.f(p)?;
                let g = job.g(p)?;
                certify_coefficients(p, &f, &g)?;
                (Some(f), Some(g))
            }
            _ => (None, None),
        };
        Ok(Context {
            cones,
            pair,
            f,
            g,
            max_degree: job.max_degree,
            n_cap: job.n_cap,
        })
    }

    fn gorenstein(&self) -> (&GorensteinPair, &CoefficientFunction, &CoefficientFunction) {
        (
            self.pair.as_ref().expect("checked in Context::new"),
            self.f.as_ref().expect("checked in Context::new"),
            self.g.as_ref().expect("checked in Context::new"),
        )
    }
}

fn result(name: &'static str, verdict: Verdict, dims: Option<GradedDims>, details: Details) -> VerificationResult {
    VerificationResult {
        name,
        verdict,
        message: None,
        dims,
        expected: None,
        details: Some(details),
    }
}

/// Runs one check; computational errors become verdicts.
pub fn run_check(ctx: &Context, check: Verification) -> VerificationResult {
    let name = check.name();
    let out: Result<VerificationResult> = (|| {
        let d = ctx.max_degree;
        Ok(match check {
            Verification::Vanishing => {
                let rep = verify_vanishing(&ctx.cones, d as u32)?;
                result(name, verdict(rep.pass), None, Details::Vanishing(Box::new(rep)))
            }
            Verification::OriginClasses => {
                let c = &ctx.cones;
                let origins: Vec<_> = c
                    .primal_faces()
                    .ids()
                    .flat_map(|t| c.dual_faces().ids().map(move |s| (t, s)))
                    .filter(|&(t, s)| c.dual_faces().le(s, c.dual_face(t)))
                    .collect();
                let reps: Vec<OriginReport> = origins
                    .par_iter()
                    .map(|&(t, s)| verify_origin_classes(c, t, s, d as u32))
                    .collect::<Result<_>>()?;
                let pass = reps.iter().all(|r| r.pass);
                result(name, verdict(pass), None, Details::Origins(reps))
            }
            Verification::Decomposition => {
                let (p, f, g) = ctx.gorenstein();
                let rep = verify_decomposition(p, f, g, d)?;
                let dims = rep.cohomology.dims.clone();
                result(name, verdict(rep.pass), Some(dims), Details::Decomposition(Box::new(rep)))
            }
            Verification::HattedDecomposition => {
                let (p, f, g) = ctx.gorenstein();
                let rep = verify_hatted_decomposition(p, f, g, d, ctx.n_cap)?;
                let v = if !rep.stabilized() { Verdict::NotStabilized } else { verdict(rep.pass) };
                let dims = rep.dhat.dims.clone();
                result(name, v, Some(dims), Details::HattedDecomposition(Box::new(rep)))
            }
            Verification::FilteredDims => {
                let (p, f, g) = ctx.gorenstein();
                let dual_side = compare_hat_dims(&p.swapped(), g);
                let primal_side = compare_hat_dims(p, f);
                let pass = dual_side.iter().chain(&primal_side).all(|c| c.pass);
                let rep = FilteredDimsReport {
                    dual_side,
                    primal_side,
                    pass,
                };
                result(name, verdict(pass), None, Details::FilteredDims(Box::new(rep)))
            }
            Verification::Flatness => {
                let (p, f, g) = ctx.gorenstein();
                let rep = connection_on_hb(p, f, g)?;
                let mut r = result(name, verdict(rep.integrable), None, Details::Flatness(Box::new(rep.clone())));
                if !rep.derivative_symmetric {
                    r.message = Some("curvature vanishes; the multiplication matrices do not commute, so mixed derivatives are not symmetric".into());
                }
                r
            }
        })
    })();
    out.unwrap_or_else(|e| VerificationResult {
        name,
        verdict: if matches!(e, Error::StabilizationFailed(_)) { Verdict::NotStabilized } else { Verdict::Fail },
        message: Some(e.to_string()),
        dims: None,
        expected: None,
        details: None,
    })
}

/// Runs every selected check. Input problems are returned as errors; everything else is a verdict.
pub fn run(job: &JobSpec) -> Result<Report> {
    let gorenstein = job.gorenstein().is_ok();
    let checks = job.verifications(gorenstein);
    let ctx = Context::new(job, &checks)?;
    let mut results: Vec<VerificationResult> = checks.par_iter().map(|&c| run_check(&ctx, c)).collect();
    let expect: BTreeMap<&str, &GradedDims> = job.expect.iter().map(|(k, v)| (k.as_str(), v)).collect();
    for r in &mut results {
        if let Some(&want) = expect.get(r.name) {
            r.expected = Some(want.clone());
            if r.dims.as_ref() != Some(want) {
                r.verdict = Verdict::Fail;
                r.message = Some("dimensions differ from the expected table".into());
            }
        }
    }
    let verdict = results.iter().map(|r| r.verdict).max().unwrap_or(Verdict::Pass);
    Ok(Report {
        schema_version: SCHEMA_VERSION,
        name: job.name.clone(),
        pair: PairSummary::new(&ctx.cones, ctx.pair.as_ref()),
        parameters: Parameters {
            max_degree: job.max_degree,
            n_cap: job.n_cap,
            seed: job.seed,
            f: ctx.f.clone(),
            g: ctx.g.clone(),
        },
        verifications: results,
        verdict,
    })
}
