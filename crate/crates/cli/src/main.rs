use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use satdesign::estimation::parse_exact;
use satdesign::report::{self, DesignReportJson, EnumerationJson, OptimalJson, SpectrumJson};
use satdesign::search::{binomial, ReportMethod, DEFAULT_SUBSET_CAP};
use satdesign::{
    blue, build_model_matrix, d_optimal, enumerate_admissible, is_admissible, make_partition,
    read_observations_csv, simulate, spectrum, Error, ModelSpec, Partition, SearchConfig, SearchMethod,
};

#[derive(Parser)]
#[command(name = "satdesign", version, about = "Saturated 2^k factorial designs: admissibility, D-optimal search, exact estimation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the model matrix H_N with run and effect labels.
    Matrix {
        #[arg(long)]
        k: u32,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Evaluate one deletion set. Exits 1 if it is not admissible.
    Check {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_delimiter = ',', required = true)]
        delete: Vec<String>,
        /// Subset cap for computing the efficiency reference.
        #[arg(long, default_value_t = DEFAULT_SUBSET_CAP)]
        cap: u128,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// List every admissible deletion set with its determinant class.
    Enumerate {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        limits: Limits,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Find a D-optimal deletion set.
    Optimal {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        limits: Limits,
        #[arg(long, value_enum, default_value_t = Method::Exhaustive)]
        method: Method,
        /// Exchange restarts.
        #[arg(long, default_value_t = 20)]
        restarts: usize,
        /// Exchange iterations per restart.
        #[arg(long, default_value_t = 1000)]
        max_iters: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// List every maximizer instead of the lexicographically first.
        #[arg(long)]
        all: bool,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// BLUE of the kept effects and BLUP of the deleted runs from observed data.
    Estimate {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_delimiter = ',', required = true)]
        delete: Vec<String>,
        /// CSV with header `run,y`, one row per kept run.
        #[arg(long)]
        data: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Monte Carlo check of the estimator's bias and covariance.
    Simulate {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_delimiter = ',', required = true)]
        delete: Vec<String>,
        /// True values of the kept effects, standard order; zeros if omitted.
        #[arg(long, value_delimiter = ',')]
        theta: Vec<String>,
        #[arg(long, default_value_t = 1.0)]
        sigma: f64,
        #[arg(long, default_value_t = 20_000)]
        reps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Attained values of |det M| over n x n sign matrices (n <= 6).
    Spectrum {
        #[arg(long)]
        order: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

#[derive(Args)]
struct ModelArgs {
    #[arg(long)]
    k: u32,
    /// Negligible effects, e.g. F23,F123.
    #[arg(long, value_delimiter = ',', required = true)]
    negligible: Vec<String>,
}

impl ModelArgs {
    fn spec(&self) -> Result<ModelSpec, Failure> {
        Ok(ModelSpec::from_labels(self.k, &self.negligible)?)
    }
}

#[derive(Args)]
struct Limits {
    /// Maximum number of subsets an exhaustive search may visit.
    #[arg(long, default_value_t = DEFAULT_SUBSET_CAP)]
    cap: u128,
    /// Search exhaustively even above the cap.
    #[arg(long)]
    force: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Exhaustive,
    Exchange,
}

enum Failure {
    /// Bad flags, labels or files.
    Input(anyhow::Error),
    /// The design cannot be used; any report has already been printed.
    Inadmissible(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Inadmissible | Error::Singular { .. } => Failure::Inadmissible(e.to_string()),
            other => Failure::Input(other.into()),
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Input(e)
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

fn partition(model: &ModelArgs, delete: &[String]) -> Result<Partition, Failure> {
    let spec = model.spec()?;
    let runs = spec.parse_runs(delete)?;
    Ok(make_partition(&spec, &runs)?)
}

fn run(cli: Cli) -> Result<String, Failure> {
    match cli.command {
        Command::Matrix { k, format } => {
            let h = build_model_matrix(k)?;
            Ok(match format {
                Format::Json => json(&report::matrix_json(k, &h)),
                Format::Csv => report::matrix_csv(k, &h),
            })
        }
        Command::Check { model, delete, cap, format } => {
            let spec = model.spec()?;
            let runs = spec.parse_runs(&delete)?;
            let mut report = is_admissible(&spec, &runs)?;
            let mut class_rank = None;
            // Efficiency is relative to the certified optimum, so it is only
            // reported when the exhaustive enumeration fits under the cap.
            if binomial(spec.runs(), spec.d()) <= cap {
                let config = SearchConfig { subset_cap: cap, ..SearchConfig::default() };
                let e = enumerate_admissible(&spec, &config)?;
                class_rank = e.class_rank(&report.abs_det_c);
                report = report.with_reference(&e.max_abs_det_c(), ReportMethod::Check, true);
            }
            let out = match format {
                Format::Json => json(&DesignReportJson::from(&report)),
                Format::Csv => report::report_csv(&report, class_rank),
            };
            if report.admissible {
                Ok(out)
            } else {
                print!("{out}");
                Err(Failure::Inadmissible("deletion set is not admissible: |det C| = 0".into()))
            }
        }
        Command::Enumerate { model, limits, format } => {
            let spec = model.spec()?;
            let config = SearchConfig { subset_cap: limits.cap, force: limits.force, ..SearchConfig::default() };
            let e = enumerate_admissible(&spec, &config)?;
            Ok(match format {
                Format::Json => json(&EnumerationJson::from(&e)),
                Format::Csv => report::enumeration_csv(&e),
            })
        }
        Command::Optimal { model, limits, method, restarts, max_iters, seed, all, format } => {
            let spec = model.spec()?;
            let config = SearchConfig {
                method: match method {
                    Method::Exhaustive => SearchMethod::Exhaustive,
                    Method::Exchange => SearchMethod::Exchange,
                },
                subset_cap: limits.cap,
                force: limits.force,
                restarts,
                max_iters,
                seed,
            };
            let mut opt = d_optimal(&spec, &config)?;
            if !opt.best.admissible {
                return Err(Failure::Inadmissible("no admissible deletion set exists".into()));
            }
            if !all {
                opt.optima.truncate(1);
            }
            Ok(match format {
                Format::Json => json(&OptimalJson::from(&opt)),
                Format::Csv => {
                    let mut out = String::from("deleted_set,abs_det_C,admissible,class_rank\n");
                    for r in &opt.optima {
                        let labels: Vec<String> = r.deleted.iter().map(ToString::to_string).collect();
                        out.push_str(&format!("{},{},{},1\n", labels.join(" "), r.abs_det_c, r.admissible));
                    }
                    out
                }
            })
        }
        Command::Estimate { model, delete, data, format } => {
            let p = partition(&model, &delete)?;
            let text = std::fs::read_to_string(&data).with_context(|| format!("reading {}", data.display()))?;
            let y = read_observations_csv(&text, &p)?;
            let est = blue(&p, &y)?;
            Ok(match format {
                Format::Json => json(&report::estimation_json(&p, &est)),
                Format::Csv => {
                    let mut out = String::from("kind,label,value,value_decimal\n");
                    for (e, v) in &est.theta1_hat {
                        out.push_str(&format!("effect,{e},{},{}\n", report::ratio_string(v), report::rational_decimal(v)));
                    }
                    for (r, v) in &est.y2_blup {
                        out.push_str(&format!("run,{r},{},{}\n", report::ratio_string(v), report::rational_decimal(v)));
                    }
                    out
                }
            })
        }
        Command::Simulate { model, delete, theta, sigma, reps, seed, format } => {
            let p = partition(&model, &delete)?;
            let theta: Vec<BigRational> = if theta.is_empty() {
                vec![BigRational::zero(); p.kept().len()]
            } else {
                theta.iter().map(|t| parse_exact(t)).collect::<Result<_, _>>()?
            };
            let s = simulate(&p, &theta, sigma, reps, seed)?;
            Ok(match format {
                Format::Json => json(&report::simulation_json(&p, &s)),
                Format::Csv => {
                    let n = s.n();
                    let mut out = String::from("effect,mean_bias,empirical_var,theoretical_var\n");
                    for (i, e) in p.spec().nonneg().iter().enumerate() {
                        out.push_str(&format!(
                            "{e},{},{},{}\n",
                            report::decimal12(s.mean_bias[i]),
                            report::decimal12(s.empirical_cov[i * n + i]),
                            report::decimal12(s.theoretical_cov[i * n + i])
                        ));
                    }
                    out
                }
            })
        }
        Command::Spectrum { order, format } => {
            let s = spectrum(order)?;
            Ok(match format {
                Format::Json => json(&SpectrumJson::from(&s)),
                Format::Csv => {
                    let mut out = String::from("abs_det,normalized\n");
                    for (r, n) in s.raw.iter().zip(&s.normalized) {
                        out.push_str(&format!("{r},{n}\n"));
                    }
                    out
                }
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Inadmissible(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
