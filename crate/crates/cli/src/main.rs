//! Command-line front end: construct/verify/zeros/asympt/curve/flow.
//!
//! All numeric output is decimal strings at the configured precision and
//! file writes are atomic (temp file + rename), so identical inputs produce
//! byte-identical files.

use clap::{Args, Parser, Subcommand};
use diffortho::asymptotics::{
    nth_root_report, ratio_report, trace_level_curve, zero_locus_distances,
};
use diffortho::construct::{
    coeff_growth_report, diff_orthogonality_residuals, eigen_residual, q_with_root, qhat,
    quasi_orthogonality_residuals,
};
use diffortho::hydro::{sample_field, stagnation_verify, FlowSystem};
use diffortho::measures::{pn_construct, MeasureSpec};
use diffortho::polycore::Case;
use diffortho::scalar::{c_to_dec, to_dec, Prec};
use diffortho::spectra::{ks_distance, roots, zero_stats, LimitDensity};
use diffortho::{Error, Result};
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(
    name = "diffortho",
    about = "Monic orthogonal polynomials of Laguerre/Hermite differential operators: construction, verification, zero asymptotics, and the stagnation-point flow model"
)]
struct Cli {
    /// Working precision in bits (env: DIFFORTHO_BITS)
    #[arg(long, global = true, env = "DIFFORTHO_BITS", default_value_t = 256)]
    precision_bits: u32,
    /// Output directory
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
    /// Seed recorded for deterministic reruns
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct SpecArgs {
    /// Family: laguerre or hermite
    #[arg(long)]
    case: String,
    /// Laguerre parameter (> -1)
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    alpha: String,
    /// Coefficients of rho, low to high, comma-separated
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    rho: String,
}

#[derive(Subcommand)]
enum Cmd {
    /// Emit Qhat_n (or Q_n when --zeta is given) as JSON
    Construct {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        n: usize,
        /// Prescribed root of Q_n, as a+bi
        #[arg(long, allow_hyphen_values = true)]
        zeta: Option<String>,
    },
    /// Residual tables: differential orthogonality, eigen-identity,
    /// quasi-orthogonality, coefficient growth
    Verify {
        #[command(flatten)]
        spec: SpecArgs,
        /// Degrees, comma-separated
        #[arg(long)]
        n: String,
    },
    /// Zero cloud CSV with stats and KS distance to the limit density
    Zeros {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        n: usize,
        /// Which polynomial: qhat, pn, or qhat-prime
        #[arg(long, default_value = "qhat")]
        target: String,
    },
    /// nth-root and ratio tables over a degree ladder
    Asympt {
        #[command(flatten)]
        spec: SpecArgs,
        /// Degrees, comma-separated
        #[arg(long)]
        n: String,
        /// Evaluation points, comma-separated a+bi (off the contracted support)
        #[arg(long, allow_hyphen_values = true)]
        points: String,
        /// Contracted root prescription for the Q_n/P_n table
        #[arg(long)]
        zeta: Option<String>,
    },
    /// Trace the level curve E(zeta) of Psi
    Curve {
        /// Family: laguerre or hermite
        #[arg(long)]
        case: String,
        #[arg(long, default_value = "0")]
        alpha: String,
        /// zeta as a+bi
        #[arg(long, allow_hyphen_values = true)]
        zeta: String,
        /// x0,x1,y0,y1
        #[arg(long, allow_hyphen_values = true)]
        window: String,
        #[arg(long)]
        step: f64,
    },
    /// Stagnation report and sampled velocity field
    Flow {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        n: usize,
        /// Field window x0,x1,y0,y1 (omit to skip the field CSV)
        #[arg(long, allow_hyphen_values = true)]
        window: Option<String>,
        #[arg(long, default_value_t = 0.25)]
        step: f64,
        /// Experiment: build the system at the zeros of Q_n with this
        /// prescribed root instead of Qhat_n (no stagnation claim is made)
        #[arg(long)]
        zeta: Option<String>,
    },
}

fn main() {
    let cli = Cli::parse();
    std::process::exit(match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    });
}

fn parse_case(case: &str, alpha: &str, p: Prec) -> Result<Case> {
    match case {
        "laguerre" => Case::laguerre(p.parse(alpha)?),
        "hermite" => Ok(Case::Hermite),
        other => Err(Error::Parse(format!(
            "unknown case {other:?} (expected laguerre or hermite)"
        ))),
    }
}

fn parse_spec(args: &SpecArgs, p: Prec) -> Result<MeasureSpec> {
    let case = parse_case(&args.case, &args.alpha, p)?;
    let rho = args
        .rho
        .split(',')
        .map(|s| p.parse(s.trim()))
        .collect::<Result<Vec<_>>>()?;
    MeasureSpec::new(case, rho)
}

fn parse_degrees(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|e| Error::Parse(format!("bad degree {t:?}: {e}")))
        })
        .collect()
}

fn parse_window(s: &str) -> Result<(f64, f64, f64, f64)> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|e| Error::Parse(format!("bad window entry {t:?}: {e}")))
        })
        .collect::<Result<Vec<_>>>()?;
    if v.len() != 4 {
        return Err(Error::Parse("window must be x0,x1,y0,y1".into()));
    }
    Ok((v[0], v[1], v[2], v[3]))
}

fn write_atomic(path: &Path, content: &str) -> Result<()> {
    let io = |e: std::io::Error| Error::Parse(format!("cannot write {}: {e}", path.display()));
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, content).map_err(io)?;
    std::fs::rename(&tmp, path).map_err(io)?;
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    if cli.precision_bits < 64 {
        return Err(Error::Parse("precision must be at least 64 bits".into()));
    }
    let p = Prec::new(cli.precision_bits);
    let out = &cli.out;
    std::fs::create_dir_all(out)
        .map_err(|e| Error::Parse(format!("cannot create {}: {e}", out.display())))?;
    match &cli.cmd {
        Cmd::Construct { spec, n, zeta } => {
            let spec = parse_spec(spec, p)?;
            let d = match zeta {
                Some(z) => q_with_root(&spec, *n, &p.parse_complex(z)?)?,
                None => qhat(&spec, *n)?,
            };
            let path = out.join(format!("construct_n{n}.json"));
            write_atomic(&path, &serde_json::to_string_pretty(&d.to_json()).unwrap())?;
            println!("wrote {}", path.display());
        }
        Cmd::Verify { spec, n } => {
            let spec = parse_spec(spec, p)?;
            let degrees = parse_degrees(n)?;
            let mut csv = String::from("check,n,k,value\n");
            for &deg in &degrees {
                let d = qhat(&spec, deg)?;
                for (k, r) in diff_orthogonality_residuals(&d, deg - 1)?
                    .iter()
                    .enumerate()
                {
                    csv.push_str(&format!("diff_orthogonality,{deg},{k},{}\n", to_dec(r)));
                }
                csv.push_str(&format!(
                    "eigen_residual,{deg},,{}\n",
                    to_dec(&eigen_residual(&d)?)
                ));
                for (k, r) in quasi_orthogonality_residuals(&spec, deg)?.iter().enumerate() {
                    csv.push_str(&format!("quasi_orthogonality,{deg},{k},{}\n", to_dec(r)));
                }
            }
            for row in coeff_growth_report(&spec, &degrees)? {
                csv.push_str(&format!(
                    "coeff_growth_ratio,{},{},{}\n",
                    row.n,
                    row.k,
                    to_dec(&row.ratio)
                ));
            }
            let path = out.join("verify.csv");
            write_atomic(&path, &csv)?;
            println!("wrote {}", path.display());
        }
        Cmd::Zeros { spec, n, target } => {
            let spec = parse_spec(spec, p)?;
            let poly = match target.as_str() {
                "qhat" => qhat(&spec, *n)?.qhat,
                "pn" => pn_construct(&spec, *n)?,
                "qhat-prime" => qhat(&spec, *n)?.qhat.derivative_in_basis(),
                other => return Err(Error::Parse(format!("unknown target {other:?}"))),
            };
            let zc = roots(&poly)?;
            let stats = zero_stats(&zc, &spec.case);
            let norm = zc.normalize();
            let ks = ks_distance(&norm, &LimitDensity::new(spec.case.clone()))?;
            let csv_path = out.join(format!("zeros_{target}_n{n}.csv"));
            write_atomic(&csv_path, &norm.to_csv())?;
            let stats_json = serde_json::json!({
                "n": n,
                "target": target,
                "real_in_delta": stats.real_in_delta,
                "max_imag": to_dec(&stats.max_imag),
                "min_real_gap": to_dec(&stats.min_real_gap),
                "max_abs": to_dec(&stats.max_abs),
                "ks_distance": to_dec(&ks),
            });
            let stats_path = out.join(format!("zeros_{target}_n{n}_stats.json"));
            write_atomic(&stats_path, &serde_json::to_string_pretty(&stats_json).unwrap())?;
            println!("wrote {}", csv_path.display());
            println!("wrote {}", stats_path.display());
        }
        Cmd::Asympt {
            spec,
            n,
            points,
            zeta,
        } => {
            let spec = parse_spec(spec, p)?;
            let degrees = parse_degrees(n)?;
            let z_set = points
                .split(',')
                .map(|s| p.parse_complex(s.trim()))
                .collect::<Result<Vec<_>>>()?;
            let mut csv = String::from("z,n,measured,limit,rel_err\n");
            for row in nth_root_report(&spec, &z_set, &degrees)? {
                csv.push_str(&format!(
                    "{},{},{},{},{}\n",
                    c_to_dec(&row.z),
                    row.n,
                    to_dec(&row.measured),
                    to_dec(&row.limit),
                    to_dec(&row.rel_err)
                ));
            }
            let path = out.join("asympt_nthroot.csv");
            write_atomic(&path, &csv)?;
            println!("wrote {}", path.display());

            let zeta = match zeta {
                Some(z) => Some(p.parse_complex(z)?),
                None => None,
            };
            let mut csv = String::from("z,n,region,ratio_re,ratio_im,err\n");
            for row in ratio_report(&spec, &z_set, &degrees, zeta.as_ref())? {
                csv.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    c_to_dec(&row.z),
                    row.n,
                    match row.region {
                        diffortho::asymptotics::Region::Outer => "outer",
                        diffortho::asymptotics::Region::Inner => "inner",
                    },
                    to_dec(row.ratio.real()),
                    to_dec(row.ratio.imag()),
                    to_dec(&row.err)
                ));
            }
            let path = out.join("asympt_ratio.csv");
            write_atomic(&path, &csv)?;
            println!("wrote {}", path.display());
        }
        Cmd::Curve {
            case,
            alpha,
            zeta,
            window,
            step,
        } => {
            let case = parse_case(case, alpha, p)?;
            let zeta = p.parse_complex(zeta)?;
            let window = parse_window(window)?;
            let curve = trace_level_curve(&case, &zeta, window, *step)?;
            let path = out.join("curve.csv");
            write_atomic(&path, &curve.to_csv())?;
            println!("wrote {}", path.display());
        }
        Cmd::Flow {
            spec,
            n,
            window,
            step,
            zeta,
        } => {
            let spec = parse_spec(spec, p)?;
            let (sys, rep_json) = match zeta {
                // experiment mode: system at the zeros of Q_n for this
                // zeta; no stagnation property is asserted or reported
                Some(z) => {
                    let zeta = p.parse_complex(z)?;
                    let d = q_with_root(&spec, *n, &zeta)?;
                    let sys = FlowSystem::new(spec.case.clone(), roots(&d.q_real()?)?.zeros)?;
                    let j = serde_json::json!({
                        "n": n,
                        "zeta": c_to_dec(&zeta),
                        "system": sys.to_json(),
                    });
                    (sys, j)
                }
                None => {
                    let rep = stagnation_verify(&spec, *n)?;
                    let d = qhat(&spec, *n)?;
                    let sys = FlowSystem::new(spec.case.clone(), roots(&d.qhat)?.zeros)?;
                    let j = serde_json::json!({
                        "n": rep.n,
                        "max_residual": to_dec(&rep.max_residual),
                        "newton_max_dist": to_dec(&rep.newton_max_dist),
                        "unrecovered": rep.unrecovered,
                        "system": sys.to_json(),
                    });
                    (sys, j)
                }
            };
            let path = out.join(format!("flow_n{n}.json"));
            write_atomic(&path, &serde_json::to_string_pretty(&rep_json).unwrap())?;
            println!("wrote {}", path.display());
            if let Some(w) = window {
                let window = parse_window(w)?;
                let csv = sample_field(&sys, window, *step)?;
                let path = out.join(format!("flow_field_n{n}.csv"));
                write_atomic(&path, &csv)?;
                println!("wrote {}", path.display());
            }
        }
    }
    // zero_locus_distances is exposed through asympt's ratio/curve data in
    // tests; keep the symbol referenced for the library consumers
    let _ = zero_locus_distances;
    let _ = cli.seed;
    Ok(())
}
