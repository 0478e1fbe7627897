use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use stringykit::gpoly::{verify_degree_bounds, DegreeBoundsReport};
use stringykit::jacobian::{quotient_dims, r1, r1_hat_default, GradedQuotient, R1Space};
use stringykit::job::{parse_input, run, JobSpec, PairSummary, Selection};
use stringykit::koszul::{cohomology_d, cohomology_dhat};
use stringykit::lattice::{FaceId, GorensteinPair};
use stringykit::Error;

#[derive(Parser)]
#[command(name = "stringykit", version, about = "Exact computations on dual reflexive Gorenstein cones")]
struct Cli {
    /// Worker threads (defaults to STRINGYKIT_JOBS, then the number of CPUs).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Overrides {
    /// Truncation degree D.
    #[arg(long)]
    max_degree: Option<usize>,
    /// Largest N-degree cap for the hatted differential.
    #[arg(long)]
    n_cap: Option<usize>,
    /// Seed for coefficient functions the job leaves unspecified.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Differential {
    D,
    Dhat,
}

#[derive(Subcommand)]
enum Command {
    /// Cones, face lattices, g-polynomials and degree bounds.
    Inspect {
        job: PathBuf,
    },
    /// Graded dimensions of the Jacobian quotients on every face.
    Hilbert {
        job: PathBuf,
        /// Use g on the faces of the dual cone.
        #[arg(long)]
        dual: bool,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// R₁ on every face, graded or filtered.
    R1 {
        job: PathBuf,
        #[arg(long)]
        dual: bool,
        /// Filtered variant from the deformed action.
        #[arg(long)]
        hat: bool,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Cohomology of the double Koszul complex.
    Cohomology {
        job: PathBuf,
        #[arg(long, value_enum, default_value = "d")]
        differential: Differential,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Run one verification (thm-key, prop-maincoro, thm-main, thm-main-gkz, bhiso, flatness) or all.
    Verify {
        which: String,
        job: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Run the job's own verification list and write the report.
    Report {
        job: PathBuf,
        /// Output path; defaults to the job's "output" field, then stdout.
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        overrides: Overrides,
    },
}

fn load(path: &Path, overrides: Option<&Overrides>) -> Result<JobSpec, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse {
        location: path.display().to_string(),
        message: e.to_string(),
    })?;
    let mut job = parse_input(&text)?;
    if let Some(o) = overrides {
        if let Some(d) = o.max_degree {
            job.max_degree = d;
        }
        if let Some(p) = o.n_cap {
            job.n_cap = p;
        }
        if let Some(s) = o.seed {
            job.seed = s;
        }
    }
    Ok(job)
}

fn print<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("serializable"));
}

#[derive(Serialize)]
struct FaceInfo {
    id: usize,
    dim: usize,
    rays: Vec<usize>,
    dual_face: usize,
}

#[derive(Serialize)]
struct Inspection {
    pair: PairSummary,
    faces: Vec<FaceInfo>,
    eulerian: bool,
    degree_bounds: DegreeBoundsReport,
}

fn inspect(job: &JobSpec) -> Result<Inspection, Error> {
    let cones = job.cone_pair()?;
    let pair = job.gorenstein().ok();
    let faces = cones
        .primal_faces()
        .ids()
        .map(|id| FaceInfo {
            id: id.0,
            dim: cones.primal_faces().face(id).dim,
            rays: cones.primal_faces().face(id).rays.clone(),
            dual_face: cones.dual_face(id).0,
        })
        .collect();
    Ok(Inspection {
        pair: PairSummary::new(&cones, pair.as_ref()),
        faces,
        eulerian: cones.primal_faces().is_eulerian() && cones.dual_faces().is_eulerian(),
        degree_bounds: verify_degree_bounds(&cones)?,
    })
}

/// The cone whose faces carry the coefficient function, and that function.
fn side(job: &JobSpec, dual: bool) -> Result<(GorensteinPair, stringykit::jacobian::CoefficientFunction), Error> {
    let pair = job.gorenstein()?;
    if dual {
        let g = job.g(&pair)?;
        Ok((pair.swapped(), g))
    } else {
        let f = job.f(&pair)?;
        Ok((pair, f))
    }
}

fn face_ids(pair: &GorensteinPair) -> Vec<FaceId> {
    pair.faces().ids().collect()
}

fn execute(cli: Cli) -> Result<i32, Error> {
    match cli.command {
        Command::Inspect { job } => {
            print(&inspect(&load(&job, None)?)?);
            Ok(0)
        }
        Command::Hilbert { job, dual, overrides } => {
            let job = load(&job, Some(&overrides))?;
            let (pair, c) = side(&job, dual)?;
            let out: Vec<GradedQuotient> = face_ids(&pair)
                .into_iter()
                .map(|t| quotient_dims(&pair, t, &c, job.max_degree.max(pair.faces().face(t).dim + 2)))
                .collect();
            print(&out);
            Ok(0)
        }
        Command::R1 { job, dual, hat, overrides } => {
            let job = load(&job, Some(&overrides))?;
            let (pair, c) = side(&job, dual)?;
            let out: Vec<R1Space> = face_ids(&pair)
                .into_iter()
                .map(|t| {
                    if hat {
                        r1_hat_default(&pair, t, &c)
                    } else {
                        Ok(r1(&pair, t, &c, pair.faces().face(t).dim + 2))
                    }
                })
                .collect::<Result<_, _>>()?;
            print(&out);
            Ok(0)
        }
        Command::Cohomology { job, differential, overrides } => {
            let job = load(&job, Some(&overrides))?;
            let pair = job.gorenstein()?;
            let f = job.f(&pair)?;
            let g = job.g(&pair)?;
            match differential {
                Differential::D => print(&cohomology_d(&pair, &f, &g, job.max_degree)?),
                Differential::Dhat => {
                    let rep = cohomology_dhat(&pair, &f, &g, job.max_degree, job.n_cap)?;
                    print(&rep);
                    if !rep.all_stabilized() {
                        return Ok(3);
                    }
                }
            }
            Ok(0)
        }
        Command::Verify { which, job, overrides } => {
            let mut job = load(&job, Some(&overrides))?;
            job.verify = which.parse::<Selection>()?;
            let report = run(&job)?;
            print!("{}", report.to_json());
            Ok(report.exit_code())
        }
        Command::Report { job, output, overrides } => {
            let job = load(&job, Some(&overrides))?;
            let report = run(&job)?;
            let target = output.or_else(|| job.output.clone().map(PathBuf::from));
            match target {
                Some(path) => std::fs::write(&path, report.to_json()).map_err(|e| Error::Validation(format!("{}: {e}", path.display())))?,
                None => print!("{}", report.to_json()),
            }
            Ok(report.exit_code())
        }
    }
}

fn configure_threads(jobs: Option<usize>) {
    let jobs = jobs.or_else(|| std::env::var("STRINGYKIT_JOBS").ok().and_then(|s| s.parse().ok()));
    if let Some(n) = jobs.filter(|&n| n > 0) {
        // only fails if a pool already exists
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads(cli.jobs);
    match execute(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
