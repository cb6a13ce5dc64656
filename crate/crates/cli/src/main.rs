use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use hkgeom::connection::SplitContext;
use hkgeom::cubic::{upsilon_with_method, DetMethod};
use hkgeom::decompose::{self, DecomposeOptions};
use hkgeom::lie::{self, ModuleKind};
use hkgeom::{forms, isoparametric, magic, upsilon, ConnElement, Error, ScalarQ3, Subspace};

#[derive(Parser, Debug)]
#[command(
    name = "hkgeom",
    version,
    about = "Checks for the cubic tensors in dimensions 5, 8, 14 and 26"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Arithmetic used by exact-capable commands.
    #[arg(long, global = true, value_enum)]
    mode: Option<ModeArg>,

    #[arg(long, global = true, value_enum, default_value_t = Profile::Default)]
    profile: Profile,

    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[arg(long, global = true, default_value_t = 1e-8)]
    rank_tol: f64,

    #[arg(long, global = true, default_value_t = 1e-6)]
    cluster_tol: f64,

    #[arg(long, global = true, default_value_t = 1e-6)]
    curvature_tol: f64,

    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Include wall-clock timings in reports.
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Export the tensor built from the determinant.
    BuildUpsilon {
        #[arg(long)]
        dim: usize,
        #[arg(long, value_enum, default_value_t = MethodArg::Freudenthal)]
        method: MethodArg,
    },
    /// Symmetry, trace, quadratic identity, harmonicity and eikonal checks.
    Verify {
        #[arg(long)]
        dim: usize,
    },
    /// Stabilizer subalgebra in so(n).
    Stabilizer {
        #[arg(long)]
        dim: usize,
        /// Include the basis in the report.
        #[arg(long)]
        basis: bool,
    },
    /// Casimir decomposition of R^n, Lambda^3 R^n or so(n) (x) R^n.
    Decompose {
        #[arg(long)]
        dim: usize,
        #[arg(long, value_enum)]
        module: ModuleArg,
    },
    /// Dimensions of the connection subspaces and of the defect kernel.
    Counts {
        #[arg(long)]
        dim: usize,
    },
    /// Split a connection element given as JSON (`-` for stdin).
    Split {
        #[arg(long)]
        input: String,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Principal curvatures of level sets in the sphere.
    Isoparametric {
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        level: f64,
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
    /// The 2- and 3-form catalog and its stabilizers.
    Forms,
    /// Dimensions of the homogeneous models.
    MagicSquare,
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
enum ModeArg {
    Exact,
    Float,
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
enum Profile {
    Default,
    Slow,
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MethodArg {
    Freudenthal,
    WeierstrassLeft,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModuleArg {
    Vector,
    Lambda3,
    Conn,
}

struct Outcome {
    json: Value,
    table: Option<String>,
    csv: Option<String>,
    passed: bool,
}

impl Outcome {
    fn new(json: Value, passed: bool) -> Self {
        Outcome {
            json,
            table: None,
            csv: None,
            passed,
        }
    }
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NonRealWeierstrass { .. } | Error::Nonconvergence { .. } | Error::SingularPoint(_) => 1,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure {
            code: 2,
            message: e.to_string(),
        }
    }
}

fn expected_stabilizer_dim(n: usize) -> usize {
    match n {
        5 => 3,
        8 => 8,
        14 => 21,
        _ => 52,
    }
}

fn expected_lambda3(n: usize) -> Vec<usize> {
    match n {
        5 => vec![7, 3],
        8 => vec![27, 20, 8, 1],
        14 => vec![189, 84, 70, 21],
        _ => vec![1274, 1053, 273],
    }
}

fn printed_restricted(n: usize) -> (usize, usize) {
    match n {
        5 => (50, 25),
        8 => (224, 118),
        14 => (1274, 658),
        _ => (8450, 3952),
    }
}

fn float_upsilon(n: usize) -> Result<hkgeom::FloatUpsilon, Failure> {
    Ok(hkgeom::upsilon_from_cubic(n)?.to_f64())
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    let slow = cli.profile == Profile::Slow;
    match &cli.command {
        Command::BuildUpsilon { dim, method } => {
            let method = match method {
                MethodArg::Freudenthal => DetMethod::Freudenthal,
                MethodArg::WeierstrassLeft => DetMethod::WeierstrassLeft,
            };
            let u = upsilon_with_method(*dim, method)?;
            let json = match cli.mode {
                Some(ModeArg::Float) => u.to_f64().to_json("iii-exact"),
                _ => u.to_json("iii-exact"),
            };
            Ok(Outcome::new(json, true))
        }
        Command::Verify { dim } => {
            let u = hkgeom::upsilon_from_cubic(*dim)?;
            let report = match cli.mode {
                Some(ModeArg::Float) => upsilon::verify_identities(&u.to_f64()),
                _ => upsilon::verify_identities(&u),
            };
            let mut out = Outcome::new(report.to_json(cli.timings), report.all_passed());
            out.table = Some(
                report
                    .checks()
                    .iter()
                    .map(|(name, c)| format!("{name:<14} {}\n", if c.passed { "pass" } else { "FAIL" }))
                    .collect(),
            );
            Ok(out)
        }
        Command::Stabilizer { dim, basis } => {
            let n = *dim;
            let u = hkgeom::upsilon_from_cubic(n)?;
            let exact = match cli.mode {
                Some(ModeArg::Exact) => true,
                Some(ModeArg::Float) => false,
                None => n <= 14 || slow,
            };
            let (h_json, dim_h, closed, commutant, mode) = if exact {
                let h: Subspace<ScalarQ3> = lie::stabilizer_sym3(&u, 0.0);
                let closed = lie::bracket_closure_check(n, &h);
                let commutant = lie::commutant_dim(n, &lie::skew_basis(n, &h), 0.0);
                (h.to_json(), h.dim(), closed, commutant, "EXACT")
            } else {
                let h = lie::stabilizer_sym3(&u.to_f64(), cli.rank_tol);
                let closed = lie::bracket_closure_check(n, &h);
                let commutant = lie::commutant_dim(n, &lie::skew_basis(n, &h), cli.rank_tol);
                (h.to_json(), h.dim(), closed, commutant, "FLOAT")
            };
            let expected = expected_stabilizer_dim(n);
            let passed = dim_h == expected && closed && commutant == 1;
            let mut json = json!({
                "n": n,
                "mode": mode,
                "dim": dim_h,
                "expected_dim": expected,
                "bracket_closed": closed,
                "commutant_dim": commutant,
                "passed": passed,
            });
            if *basis {
                json["subspace"] = h_json;
            }
            let mut out = Outcome::new(json, passed);
            out.table = Some(format!(
                "n = {n}  mode {mode}  dim {dim_h} (expected {expected})  closed {closed}  commutant {commutant}\n"
            ));
            Ok(out)
        }
        Command::Decompose { dim, module } => {
            let n = *dim;
            let module = match module {
                ModuleArg::Vector => ModuleKind::Vector,
                ModuleArg::Lambda3 => ModuleKind::Lambda3,
                ModuleArg::Conn => ModuleKind::Conn,
            };
            let opts = DecomposeOptions {
                cluster_tol: cli.cluster_tol,
                slow,
            };
            let u = float_upsilon(n)?;
            let dim_module = module.dim(n);
            if dim_module > decompose::DEFAULT_MODULE_LIMIT && !slow {
                return Err(Error::ModuleTooLarge { dim: dim_module }.into());
            }
            let h = lie::stabilizer_sym3(&u, cli.rank_tol);
            let g = lie::grading_of_sym3(&u);
            let iso = decompose::isotypic(n, &h, &g, module, opts)?;
            let mut passed = iso.commutator_residual < 1e-8;
            let mut json = serde_json::to_value(&iso.report).expect("serializable");
            json["commutator_residual"] = json!(iso.commutator_residual);
            json["line"] = json!(iso.report.render_line());
            if module == ModuleKind::Lambda3 {
                let expected = expected_lambda3(n);
                passed &= iso.report.dims_descending() == expected;
                json["expected_dims"] = json!(expected);
            }
            if module == ModuleKind::Conn && n == 26 {
                let check = decompose::adjoint_isotypic_check(n, &h, &g, opts)?;
                passed &= check.intersection_dim == 0 && check.isotypic_dim % 52 == 0 && check.isotypic_dim > 0;
                json["adjoint_isotypic"] = serde_json::to_value(&check).expect("serializable");
            }
            json["passed"] = json!(passed);
            let mut out = Outcome::new(json, passed);
            out.table = Some(iso.report.render_table());
            Ok(out)
        }
        Command::Counts { dim } => {
            let n = *dim;
            let u = hkgeom::upsilon_from_cubic(n)?;
            let exact = cli.mode == Some(ModeArg::Exact);
            let (counts, kernel) = if exact {
                let h = lie::stabilizer_sym3(&u, 0.0);
                (
                    decompose::component_counts(n, &h, 0.0)?,
                    upsilon::nearly_integrable_kernel_dim(&u, 0.0),
                )
            } else {
                let uf = u.to_f64();
                let h = lie::stabilizer_sym3(&uf, cli.rank_tol);
                (
                    decompose::component_counts(n, &h, cli.rank_tol)?,
                    upsilon::nearly_integrable_kernel_dim(&uf, cli.rank_tol),
                )
            };
            let printed = printed_restricted(n);
            let passed = (counts.total, counts.restricted) == printed && kernel >= counts.sum_dim;
            let json = json!({
                "n": n,
                "total": counts.total,
                "restricted": counts.restricted,
                "h_conn_dim": counts.h_conn_dim,
                "lambda3_dim": counts.lambda3_dim,
                "intersection_dim": counts.intersection_dim,
                "sum_dim": counts.sum_dim,
                "v1_excluded": counts.v1_excluded,
                "defect_kernel_dim": kernel,
                "passed": passed,
            });
            let mut out = Outcome::new(json, passed);
            out.table = Some(format!(
                "n = {n}: {} components, restricted {}, intersection {}, defect kernel {kernel}\n",
                counts.total, counts.restricted, counts.intersection_dim
            ));
            Ok(out)
        }
        Command::Split { input, tol } => {
            let text = if input == "-" {
                let mut s = String::new();
                io::stdin().read_to_string(&mut s)?;
                s
            } else {
                fs::read_to_string(input)?
            };
            let c = ConnElement::from_json_str(&text)?;
            let u = float_upsilon(c.n())?;
            let ctx = SplitContext::new(&u, cli.rank_tol);
            let s = ctx.split(&c)?;
            let admits = ctx.admits_characteristic(&c, *tol)?;
            let mut json = s.to_json(&c);
            json["admits_characteristic"] = json!(admits);
            json["defect_norm"] = json!(ctx.defect_norm(&c)?);
            let passed = s.norms(&c).reconstruction_error < 1e-10;
            Ok(Outcome::new(json, passed))
        }
        Command::Isoparametric { dim, level, samples } => {
            let u = float_upsilon(*dim)?;
            let report = isoparametric::verify_isoparametric(&u, *level, *samples, cli.seed, cli.curvature_tol)?;
            let mut out = Outcome::new(report.to_json(), report.passed());
            out.csv = Some(report.to_csv()?);
            let mut t = format!(
                "n = {}, level {}, {} samples\n",
                report.n, report.level, report.sample_count
            );
            for c in &report.clusters {
                t.push_str(&format!(
                    "  curvature {:>14.10}  multiplicity {}  spread {:.1e}/{:.1e}\n",
                    c.value, c.multiplicity, c.within_point_spread, c.across_point_spread
                ));
            }
            out.table = Some(t);
            Ok(out)
        }
        Command::Forms => {
            let catalog = forms::build_catalog();
            let stab = forms::verify_form_stabilizers(cli.rank_tol);
            let tau = forms::verify_tau_span();
            let link = forms::verify_v1_link(cli.seed);
            let passed = stab.passed() && tau.passed() && link.passed();
            let json = json!({
                "catalog": catalog.to_json(),
                "stabilizers": stab,
                "tau_span": tau,
                "v1_link": link,
                "passed": passed,
            });
            Ok(Outcome::new(json, passed))
        }
        Command::MagicSquare => {
            let table = magic::model_table();
            let pattern = magic::header_pattern_holds(&table);
            let passed = pattern && table.iter().all(magic::ModelEntry::matches);
            let json = json!({ "models": table, "header_pattern": pattern, "passed": passed });
            let mut out = Outcome::new(json, passed);
            out.table = Some(magic::render_table(&table));
            let mut w = String::from("model,total_algebra_dim,isotropy_dim,space_dim,structure_group\n");
            for e in &table {
                w.push_str(&format!(
                    "\"{}\",{},{},{},\"{}\"\n",
                    e.model, e.total_algebra_dim, e.isotropy_dim, e.space_dim, e.structure_group
                ));
            }
            out.csv = Some(w);
            Ok(out)
        }
    }
}

fn render(cli: &Cli, out: &Outcome) -> Result<String, Failure> {
    match cli.format {
        Format::Json => Ok(serde_json::to_string_pretty(&out.json).expect("serializable") + "\n"),
        Format::Table => Ok(out
            .table
            .clone()
            .unwrap_or_else(|| serde_json::to_string_pretty(&out.json).expect("serializable") + "\n")),
        Format::Csv => out.csv.clone().ok_or_else(|| Failure {
            code: 2,
            message: "CSV output is available for isoparametric and magic-square only".into(),
        }),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let result = run(&cli).and_then(|out| Ok((render(&cli, &out)?, out.passed)));
    match result {
        Ok((text, passed)) => {
            let written = match &cli.output {
                Some(path) => fs::write(path, text),
                None => io::stdout().write_all(text.as_bytes()),
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
