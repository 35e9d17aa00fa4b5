use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use mero_core::bialg::{bialgebraicity_rank_test, Family, RankTestOptions};
use mero_core::json::{
    complex_list, equation_value, from_json_str, gauss_value, integer_rows, lattice_value,
    numeric_config_value, verdict_value, ConfigJson, CoverJson, LatticeJson, LinearVarietySpecJson,
};
use mero_core::mpf::with_precision;
use mero_core::periods::{period_vector, quadrature_period};
use mero_core::scalar::{gauss, rat, ComplexExt, Real};
use mero_core::strata::residues;
use mero_core::torus::{detect_multiplicative_relations, embed, fiber_rank, log_point, AffineLattice};
use mero_core::varieties::arithmetic::{arithmetic_point_check, ArithmeticCase};
use mero_core::varieties::cover::{pullback_by_cover, BasePoint};
use mero_core::varieties::dlog::{dlog_differential, rational_map};
use mero_core::varieties::groups::PointGroup;
use mero_core::varieties::linear::{exponentiate_linear_row, sm_membership};
use mero_core::varieties::teich::teichmueller_curve_from_point;
use mero_core::{BigComplex, Error, ExactConfig, GaussianRational, Mpf};

const SCHEMAS: &str = "\
Schemas (rationals as \"p/q\", integers or decimals; complex as {\"re\", \"im\"} or a bare real):
  config   {\"mu\": [ints], \"lambda\": c, \"zeros\": [c], \"poles\": [c],
            \"normalization\": \"canonical\"|\"free\", \"paths\"?: [{\"waypoints\": [c], \"detour\"?: \"ccw\"|\"cw\"|\"forbid\"}]}
  cover    {\"numerator\": [c], \"denominator\"?: [c]}   ascending coefficients
  variety  {\"A\": [[rational]], \"B\": [[c]], \"q\": [rational]}
  lattice  {\"k\": int, \"basis\": [[int]]}

Exit status: 0 success, 1 computed negative verdict, 2 input error, 3 precision or tolerance failure.";

#[derive(Parser)]
#[command(name = "mero", version, about = "Periods, residues and bi-algebraic varieties of differentials on the Riemann sphere", after_help = SCHEMAS)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Working precision in bits.
    #[arg(long, global = true, default_value_t = 256, value_parser = clap::value_parser!(u32).range(64..))]
    precision_bits: u32,
    /// Tolerance for quadrature checks.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    /// Seed for sampling.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyKind {
    Full,
    ResidueFiber,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form period vector of a config, optionally checked by quadrature.
    Periods {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        quadrature: bool,
    },
    /// Exact residues of a config.
    Residues {
        #[arg(long)]
        input: PathBuf,
    },
    /// Torus coordinates of a canonical config.
    Embed {
        #[arg(long)]
        input: PathBuf,
    },
    /// Rank of T_R on the linear part of a lattice (--spec: lattice).
    FiberRank {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        spec: PathBuf,
    },
    /// Numerical bi-algebraicity test of a family through a config.
    BialgTest {
        #[arg(long)]
        input: PathBuf,
        /// Test the family of pullbacks along this cover.
        #[arg(long)]
        cover: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = FamilyKind::Full)]
        family: FamilyKind,
        /// Lattice V; detected from the samples when absent.
        #[arg(long)]
        spec: Option<PathBuf>,
        #[arg(long, default_value_t = 4)]
        samples: usize,
    },
    /// Membership of a canonical point in a linear variety.
    CheckSm {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        point: PathBuf,
    },
    /// Linear variety of dimension two through a point with real periods.
    MakeTeich {
        #[arg(long)]
        input: PathBuf,
    },
    /// Pullback of an exact config along a cover.
    Pullback {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        cover: PathBuf,
    },
    /// Logarithmic differential df/f of a rational map (cover schema).
    Dlog {
        #[arg(long)]
        input: PathBuf,
    },
    /// Arithmetic point check of an exact config.
    ArithCheck {
        #[arg(long)]
        input: PathBuf,
    },
    /// Multiplicative relations among the torus coordinates of configs.
    DetectRelations {
        /// A config or an array of configs.
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 12)]
        bound: u64,
    },
}

/// A failure with its exit status.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::PrecisionTooLow(_) | Error::RankUnstable(_) | Error::ToleranceNotMet { .. } => 3,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

/// A result and whether it is a positive verdict.
struct Outcome {
    value: Value,
    positive: bool,
}

fn ok(value: Value) -> Outcome {
    Outcome { value, positive: true }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure { code: 2, message: format!("{}: {e}", path.display()) })?;
    from_json_str(&text).map_err(|e| Failure { code: 2, message: format!("{}: {e}", path.display()) })
}

fn read_config(path: &Path) -> Result<(ConfigJson, ExactConfig), Failure> {
    let cj: ConfigJson = read_json(path)?;
    let cfg = cj.to_config()?;
    Ok((cj, cfg))
}

fn base_point(b: &BasePoint) -> Value {
    match b {
        BasePoint::Zero(i) => json!({"zero": i}),
        BasePoint::Pole(j) => json!({"pole": j}),
        BasePoint::Infinity => json!("infinity"),
    }
}

fn group_value(g: &PointGroup, points: &[BigComplex]) -> Value {
    json!({
        "factor": g.factor.as_ref().map(|f| f.coeffs().iter().map(gauss_value).collect::<Vec<_>>()),
        "order": g.order,
        "local_degree": g.local_degree,
        "exact_residue": g.exact_residue.as_ref().map(gauss_value),
        "points": complex_list(points),
    })
}

fn poly_value(p: &mero_core::poly::Poly<GaussianRational>) -> Value {
    Value::Array(p.coeffs().iter().map(gauss_value).collect())
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    let bits = cli.precision_bits as usize;
    let tol = Mpf::from_f64(cli.tol);
    match &cli.command {
        Command::Periods { input, quadrature } => {
            let (cj, cfg) = read_config(input)?;
            let paths = cj.paths::<Mpf>(&cfg)?;
            let pv = period_vector(&cfg, &paths)?;
            let mut out = json!({
                "relative": complex_list(&pv.relative),
                "scaled_residues": complex_list(&pv.scaled_residues),
                "branch_data": pv.branch_data,
            });
            if *quadrature {
                let q = paths
                    .iter()
                    .map(|p| quadrature_period(&cfg, p, &tol))
                    .collect::<mero_core::Result<Vec<_>>>()?;
                let diff = q
                    .iter()
                    .zip(&pv.relative)
                    .fold(Mpf::from_i64(0), |acc, (a, b)| acc.max_of(ComplexExt::abs(&(a.clone() - b.clone()))));
                out["quadrature"] = complex_list(&q);
                out["max_difference"] = Value::String(diff.to_decimal_string());
                if diff > tol.clone() * Mpf::from_i64(10) {
                    return Err(Failure {
                        code: 3,
                        message: format!("quadrature differs from the closed form by {:e}", diff.to_f64()),
                    });
                }
            }
            Ok(ok(out))
        }
        Command::Residues { input } => {
            let (_, cfg) = read_config(input)?;
            let r = residues(&cfg)?;
            Ok(ok(json!({
                "residues": r.finite.iter().map(gauss_value).collect::<Vec<_>>(),
                "residue_at_infinity": gauss_value(&r.at_infinity),
                "sum": gauss_value(&r.total()),
            })))
        }
        Command::Embed { input } => {
            let (_, cfg) = read_config(input)?;
            let tp = embed(&cfg)?;
            let logs = log_point::<GaussianRational, Mpf>(&tp);
            Ok(ok(json!({
                "w": tp.w.iter().map(|r| r.iter().map(gauss_value).collect::<Vec<_>>()).collect::<Vec<_>>(),
                "lambda": gauss_value(&tp.lambda),
                "closure_relations_hold": tp.closure_relations_hold(),
                "log_point": logs.iter().map(|r| complex_list(r)).collect::<Vec<_>>(),
            })))
        }
        Command::FiberRank { input, spec } => {
            let (_, cfg) = read_config(input)?;
            let lattice = read_json::<LatticeJson>(spec)?.to_lattice()?;
            let r = residues(&cfg)?;
            Ok(ok(json!({"fib": fiber_rank(&r.finite, &lattice)?})))
        }
        Command::BialgTest { input, cover, family, spec, samples } => {
            let (_, base) = read_config(input)?;
            let fam = match (cover, family) {
                (Some(c), _) => Family::Cover { base, cover: read_json::<CoverJson>(c)?.to_cover()? },
                (None, FamilyKind::Full) => Family::FullStratum { base },
                (None, FamilyKind::ResidueFiber) => Family::ResidueFiber { base },
            };
            let lattice: Option<AffineLattice> = spec.as_ref().map(|s| read_json::<LatticeJson>(s)?.to_lattice().map_err(Failure::from)).transpose()?;
            let opts = RankTestOptions { samples: *samples, seed: cli.seed, ..Default::default() };
            let v = bialgebraicity_rank_test(&fam, lattice.as_ref(), &opts)?;
            let positive = v.dim_asv == v.dim_s;
            Ok(Outcome { value: verdict_value(&v), positive })
        }
        Command::CheckSm { spec, point } => {
            let spec = read_json::<LinearVarietySpecJson>(spec)?.to_spec()?;
            let (cj, cfg) = read_config(point)?;
            let paths = cj.paths::<Mpf>(&cfg)?;
            let v = sm_membership(&cfg, &spec, &paths)?;
            let equations = spec
                .a
                .iter()
                .zip(&spec.b)
                .map(|(a, b)| {
                    let c: Vec<GaussianRational> = a.iter().map(|x| gauss(x.clone(), rat(0, 1))).collect();
                    exponentiate_linear_row(&c, b, &spec.q).map(|eq| equation_value(&eq))
                })
                .collect::<mero_core::Result<Vec<_>>>()?;
            Ok(Outcome {
                value: json!({
                    "member": v.algebraic,
                    "exact": v.exact,
                    "numeric_residual": v.numeric_residual,
                    "equations": equations,
                }),
                positive: v.algebraic,
            })
        }
        Command::MakeTeich { input } => {
            let (cj, cfg) = read_config(input)?;
            let paths = cj.paths::<Mpf>(&cfg)?;
            let t = teichmueller_curve_from_point(&cfg, &paths)?;
            Ok(ok(json!({
                "spec": LinearVarietySpecJson::from_spec(&t.spec),
                "lambda_scale": {"re": t.lambda_scale.re, "im": t.lambda_scale.im},
                "normalized_periods": t.normalized_periods,
                "dimension": t.dimension,
            })))
        }
        Command::Pullback { input, cover } => {
            let (_, base) = read_config(input)?;
            let cover = read_json::<CoverJson>(cover)?.to_cover()?;
            let pb = pullback_by_cover::<Mpf>(&base, &cover)?;
            let groups: Vec<Value> = pb
                .groups
                .iter()
                .zip(&pb.points)
                .zip(&pb.over)
                .map(|((g, p), o)| {
                    let mut v = group_value(g, p);
                    v["over"] = base_point(o);
                    v
                })
                .collect();
            Ok(ok(json!({
                "differential": {
                    "numerator": poly_value(pb.differential.numerator()),
                    "denominator": poly_value(pb.differential.denominator()),
                },
                "signature": pb.config.signature.orders(),
                "groups": groups,
                "config": numeric_config_value(&pb.config),
            })))
        }
        Command::Dlog { input } => {
            let cj: CoverJson = read_json(input)?;
            let (n, d) = cj.polys()?;
            let f = rational_map(n.coeffs().to_vec(), d.coeffs().to_vec())?;
            let lg = dlog_differential::<Mpf>(&f)?;
            let groups: Vec<Value> = lg
                .groups
                .iter()
                .zip(&lg.points)
                .zip(&lg.f_orders)
                .map(|((g, p), o)| {
                    let mut v = group_value(g, p);
                    v["f_order"] = json!(o);
                    v
                })
                .collect();
            Ok(ok(json!({
                "differential": {
                    "numerator": poly_value(lg.differential.numerator()),
                    "denominator": poly_value(lg.differential.denominator()),
                },
                "signature": lg.config.signature.orders(),
                "groups": groups,
                "config": numeric_config_value(&lg.config),
            })))
        }
        Command::ArithCheck { input } => {
            let (_, cfg) = read_config(input)?;
            let v = arithmetic_point_check(&cfg)?;
            let c = &v.certificate;
            let case = match c.case {
                ArithmeticCase::ExactDifferential => "exact-differential",
                ArithmeticCase::LogStratum => "log-stratum",
                ArithmeticCase::NotArithmetic => "not-arithmetic",
            };
            Ok(Outcome {
                value: json!({
                    "arithmetic": v.arithmetic,
                    "case": case,
                    "roots_of_unity": c.roots_of_unity.iter().map(|r| json!({"j": r.j, "k": r.k, "order": r.order})).collect::<Vec<_>>(),
                    "relations": c.relations.iter().map(|r| json!({"j": r.j, "exponents": integer_rows(std::slice::from_ref(&r.exponents))[0]})).collect::<Vec<_>>(),
                    "heuristic": c.heuristic,
                    "reason": c.reason,
                }),
                positive: v.arithmetic,
            })
        }
        Command::DetectRelations { input, bound } => {
            let raw: Value = read_json(input)?;
            let items = match raw {
                Value::Array(a) => a,
                v => vec![v],
            };
            let mut points = Vec::with_capacity(items.len());
            for (i, item) in items.into_iter().enumerate() {
                let cj: ConfigJson = serde_json::from_value(item)
                    .map_err(|e| Failure { code: 2, message: format!("{}: config {i}: {e}", input.display()) })?;
                points.push(embed(&cj.to_config()?)?);
            }
            let k = points[0].flat().len();
            // Torus points are exact, so any precision can evaluate them.
            let rels = detect_multiplicative_relations(&points, *bound)?;
            Ok(ok(json!({
                "relations": integer_rows(&rels.basis),
                "heuristic": rels.heuristic,
                "annihilator": lattice_value(&AffineLattice::annihilator_of(k, &rels.basis)),
            })))
        }
    }
    .map(|mut o: Outcome| {
        o.value["precision_bits"] = json!(bits);
        o
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let bits = cli.precision_bits as usize;
    let result = with_precision(bits, || run(&cli));
    match result {
        Ok(outcome) => {
            let text = serde_json::to_string_pretty(&outcome.value).expect("values serialize") + "\n";
            let written = match &cli.output {
                Some(p) => fs::write(p, text).map_err(|e| format!("{}: {e}", p.display())),
                None => {
                    print!("{text}");
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("{}", json!({"error": e}));
                return ExitCode::from(2);
            }
            ExitCode::from(if outcome.positive { 0 } else { 1 })
        }
        Err(f) => {
            eprintln!("{}", json!({"error": f.message, "exit": f.code}));
            ExitCode::from(f.code)
        }
    }
}
