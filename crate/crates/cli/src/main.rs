use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use depthpoly::generate::{generate_convex, generate_random};
use depthpoly::io::{parse_order_type_db, parse_points_text, write_points_text};
use depthpoly::report::InputDescriptor;
use depthpoly::roots::{find_roots, RootError};
use depthpoly::svg::{e_leq_root_plot, voronoi_root_plot, SvgOptions};
use depthpoly::{
    analyze, build_polynomials, depth_profile, AnalysisReport, AnalyzeOptions, PointSet,
};

/// Circle, Voronoi, cumulative-edge and j-edge polynomials of planar point sets.
#[derive(Parser)]
#[command(name = "depthpoly", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every identity and bound check; exit status 0 iff all pass.
    Analyze {
        file: PathBuf,
        /// Read record INDEX (1-based) of an order-type database for N points.
        #[arg(long, num_args = 2, value_names = ["N", "INDEX"])]
        otdb: Option<Vec<usize>>,
        /// Write the JSON report here.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Write PREFIX_pV.svg and PREFIX_pE.svg.
        #[arg(long, value_name = "PREFIX")]
        svg_prefix: Option<PathBuf>,
        /// Leave the timings object empty.
        #[arg(long)]
        no_timings: bool,
    },
    /// Generate a seeded point set in the text format.
    Gen {
        kind: GenKind,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Like analyze, reporting only through the exit status.
    Verify {
        file: PathBuf,
        #[arg(long, num_args = 2, value_names = ["N", "INDEX"])]
        otdb: Option<Vec<usize>>,
    },
    /// Print the roots of one polynomial: re, im, modulus, residual.
    Roots {
        file: PathBuf,
        #[arg(long)]
        poly: PolyChoice,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    Random,
    Convex,
}

#[derive(Clone, Copy, ValueEnum)]
enum PolyChoice {
    /// circle polynomial
    C,
    /// Voronoi polynomial
    V,
    /// cumulative edge polynomial
    E,
    /// j-edge polynomial
    J,
}

fn load(file: &Path, otdb: Option<&[usize]>) -> Result<(PointSet, InputDescriptor)> {
    let source = file.display().to_string();
    match otdb {
        Some(&[n, index]) => {
            let bytes = fs::read(file).with_context(|| format!("reading {source}"))?;
            let record = parse_order_type_db(&bytes, n, index)
                .with_context(|| format!("record {index} of {source}"))?;
            let descriptor = InputDescriptor {
                source,
                format: "order_type_db".into(),
                index: Some(index),
                perturbed: record.perturbed,
            };
            Ok((record.points, descriptor))
        }
        Some(_) => bail!("--otdb takes N and INDEX"),
        None => {
            let text = fs::read_to_string(file).with_context(|| format!("reading {source}"))?;
            let set = parse_points_text(&text).with_context(|| format!("parsing {source}"))?;
            let descriptor = InputDescriptor {
                source,
                format: "text".into(),
                index: None,
                perturbed: false,
            };
            Ok((set, descriptor))
        }
    }
}

fn run_analysis(file: &Path, otdb: Option<&[usize]>, timings: bool) -> Result<AnalysisReport> {
    let (set, input) = load(file, otdb)?;
    let opts = AnalyzeOptions {
        input,
        record_timings: timings,
        ..AnalyzeOptions::default()
    };
    Ok(analyze(&set, &opts)?)
}

fn print_summary(report: &AnalysisReport) {
    let checks = report.identities.len() + report.bounds.checks.len();
    let failed: Vec<_> = report.failures().collect();
    println!(
        "n = {}  h = {}  cr = {}  alpha = {:.6}",
        report.n, report.h, report.cr, report.alpha
    );
    println!("c = {:?}", report.coefficients.c);
    println!("v = {:?}", report.coefficients.v);
    println!("E = {:?}", report.coefficients.e_cum);
    println!("e = {:?}", report.coefficients.e);
    println!(
        "mu = {:.6}  sigma = {:.6}  min |1 - z| over circle roots = {:.6} (ln n / n = {:.6})",
        report.stats.mu,
        report.stats.sigma,
        report.bounds.min_dist_to_one,
        report.bounds.log_n_over_n
    );
    println!("{} of {} checks passed", checks - failed.len(), checks);
    for c in failed {
        println!("FAILED {}: lhs {:?} rhs {:?}", c.name, c.lhs, c.rhs);
    }
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Analyze {
            file,
            otdb,
            json,
            svg_prefix,
            no_timings,
        } => {
            let report = run_analysis(&file, otdb.as_deref(), !no_timings)?;
            print_summary(&report);
            if let Some(path) = json {
                fs::write(&path, report.to_json() + "\n")
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            if let Some(prefix) = svg_prefix {
                let opts = SvgOptions::default();
                let base = prefix.display();
                let plots = [
                    (
                        "pV",
                        voronoi_root_plot(&report.roots.voronoi, &report.bounds, &opts),
                    ),
                    (
                        "pE",
                        e_leq_root_plot(&report.roots.e_leq, &report.bounds, &opts),
                    ),
                ];
                for (label, svg) in plots {
                    let path = format!("{base}_{label}.svg");
                    fs::write(&path, svg).with_context(|| format!("writing {path}"))?;
                }
            }
            Ok(report.all_passed())
        }
        Command::Gen { kind, n, seed, out } => {
            let set = match kind {
                GenKind::Random => generate_random(n, seed)?,
                GenKind::Convex => generate_convex(n, seed)?,
            };
            fs::write(&out, write_points_text(&set))
                .with_context(|| format!("writing {}", out.display()))?;
            Ok(true)
        }
        Command::Verify { file, otdb } => {
            Ok(run_analysis(&file, otdb.as_deref(), false)?.all_passed())
        }
        Command::Roots { file, poly } => {
            let (set, _) = load(&file, None)?;
            let polys = build_polynomials(&depth_profile(&set)?)?;
            let p = match poly {
                PolyChoice::C => &polys.circle,
                PolyChoice::V => &polys.voronoi,
                PolyChoice::E => &polys.e_leq,
                PolyChoice::J => &polys.j_edge,
            };
            let (roots, converged) = match find_roots(p) {
                Ok(r) => (r, true),
                Err(RootError::NotConverged(r)) => (r, false),
                Err(e) => return Err(e.into()),
            };
            println!("# coefficients {:?}", p.coeffs());
            for (z, res) in roots.roots.iter().zip(&roots.residuals) {
                println!(
                    "{:+.15e} {:+.15e} {:.15e} {:.3e}",
                    z.re,
                    z.im,
                    z.norm(),
                    res
                );
            }
            Ok(converged)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
