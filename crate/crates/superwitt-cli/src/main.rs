//! `superwitt`: exact computations in supertorus vector-field algebras.
//!
//! Exit codes: 0 success, 1 a verification check or search came back
//! negative, 2 usage or input errors.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use superwitt::cover::{minimal_n_search, minimal_omega_ell};
use superwitt::scalar::q;
use superwitt::tensormod::{TensorModule, TensorVector};
use superwitt::verma::VermaModule;
use superwitt::vfields::{twist_field, twist_poly, AlgebraKind, IntMatrix};

use superwitt_cli::forms::{
    field_form, mask_to_bits, mult_csv, mult_rows, poly_form, radical_csv, radical_form,
    resolve_rep, scalar_str, tv_form, tv_from_form, TvForm,
};
use superwitt_cli::parse::{parse_element, parse_field, parse_poly, parse_scalar_list, Parsed};
use superwitt_cli::suites::{
    default_lambda, kind_from_name, run_suite, SuiteConfig, SUITES,
};

#[derive(Parser)]
#[command(
    name = "superwitt",
    version,
    about = "Exact rational computations in supertorus vector-field algebras"
)]
struct Cli {
    /// Emit machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct KindArgs {
    /// Algebra family: wmn, wmn-d0 (adjoined scalar row), or wm1n.
    #[arg(long, default_value = "wmn")]
    kind: String,
    /// Number of even coordinates.
    #[arg(long, default_value_t = 1)]
    m: usize,
    /// Number of odd coordinates.
    #[arg(long, default_value_t = 1)]
    n: usize,
}

impl KindArgs {
    fn kind(&self) -> Result<AlgebraKind, String> {
        kind_from_name(&self.kind, self.m, self.n)
    }
}

#[derive(Args, Clone)]
struct ModuleArgs {
    #[command(flatten)]
    kind: KindArgs,
    /// Fiber: trivial, natural, dual, natural*natural, or a JSON file path.
    #[arg(long = "V", default_value = "natural")]
    v: String,
    /// Comma-separated rational weights, one per even coordinate.
    #[arg(long)]
    lambda: Option<String>,
    /// Weight of the adjoined scalar row (wmn-d0 only).
    #[arg(long)]
    lambda0: Option<String>,
}

impl ModuleArgs {
    fn module(&self) -> Result<TensorModule, String> {
        let kind = self.kind.kind()?;
        let ec = kind.context().even_count();
        let rho = resolve_rep(ec, kind.n(), &self.v)?;
        let lambda = match &self.lambda {
            Some(text) => {
                let l = parse_scalar_list(text).map_err(|e| e.to_string())?;
                if l.len() != ec {
                    return Err(format!("--lambda needs {ec} entries, got {}", l.len()));
                }
                l
            }
            None => default_lambda(ec),
        };
        let lambda0 = match (&self.lambda0, matches!(kind, AlgebraKind::SemiDirect { .. })) {
            (Some(text), true) => Some(
                parse_scalar_list(text)
                    .map_err(|e| e.to_string())?
                    .into_iter()
                    .next()
                    .ok_or("--lambda0 is empty")?,
            ),
            (None, true) => Some(q(2, 3)),
            (Some(_), false) => {
                return Err("--lambda0 applies to the wmn-d0 kind only".to_string())
            }
            (None, false) => None,
        };
        TensorModule::new(kind, rho, lambda, lambda0).map_err(|e| e.to_string())
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse an expression and print it back (or its JSON form).
    Parse {
        #[command(flatten)]
        kind: KindArgs,
        /// Expression, e.g. "3/2*t1^-2*x1*x2" or "t1*D1".
        expr: String,
    },
    /// Bracket of two vector fields.
    Bracket {
        #[command(flatten)]
        kind: KindArgs,
        x: String,
        y: String,
    },
    /// Apply a vector field to a coefficient function.
    Apply {
        #[command(flatten)]
        kind: KindArgs,
        field: String,
        target: String,
    },
    /// Act by a vector field on a tensor-module vector.
    Act {
        #[command(flatten)]
        module: ModuleArgs,
        /// The acting field, in expression syntax.
        #[arg(long)]
        field: String,
        /// The vector, as JSON (`@path` reads a file).
        #[arg(long)]
        vec: String,
    },
    /// Weight multiplicity table over an offset window.
    Mult {
        #[command(flatten)]
        module: ModuleArgs,
        /// Offset window radius.
        #[arg(long, default_value_t = 2)]
        window: i64,
    },
    /// Pull an element back along a lattice automorphism.
    Twist {
        #[command(flatten)]
        kind: KindArgs,
        /// Integer matrix, rows separated by ';', entries by ','.
        #[arg(long)]
        theta: String,
        /// Vector field to transform.
        #[arg(long, conflicts_with = "poly")]
        field: Option<String>,
        /// Coefficient function to transform.
        #[arg(long)]
        poly: Option<String>,
    },
    /// Minimal difference and annihilator orders for a tensor module.
    Cover {
        #[command(flatten)]
        module: ModuleArgs,
        /// Lattice window radius for the brute-force search.
        #[arg(long, default_value_t = 4)]
        radius: i64,
        /// Largest order tried before giving up.
        #[arg(long, default_value_t = 6)]
        bound: u64,
        /// Search only the minimal annihilator order.
        #[arg(long = "minimalN", alias = "minimal-n")]
        minimal_n: bool,
        /// Search only the minimal difference order, for this direction.
        #[arg(long = "minimal-ell")]
        minimal_ell: Option<usize>,
    },
    /// Lowest-weight module dimension tables under the distinguished grading.
    Verma {
        /// Number of even coordinates of the degree-zero algebra.
        #[arg(long, default_value_t = 0)]
        m: usize,
        /// Number of odd coordinates.
        #[arg(long, default_value_t = 0)]
        n: usize,
        /// Fiber: trivial, natural, dual, natural*natural, or a JSON file.
        #[arg(long = "V", default_value = "trivial")]
        v: String,
        /// Comma-separated rational weights, one per even coordinate.
        #[arg(long)]
        lambda: Option<String>,
        /// Weight of the distinguished row.
        #[arg(long, default_value = "1")]
        lambda0: String,
        /// Depth of the table.
        #[arg(long, default_value_t = 3)]
        depth: usize,
        /// Raising depth for the constraint recursion.
        #[arg(long = "raise-depth")]
        raise_depth: Option<usize>,
        /// Lattice window radius (only felt when m >= 1).
        #[arg(long, default_value_t = 3)]
        window: i64,
    },
    /// Run a verification suite.
    Verify {
        /// Suite name; see --list.
        #[arg(long, required_unless_present = "list")]
        suite: Option<String>,
        /// List the available suites.
        #[arg(long)]
        list: bool,
        #[command(flatten)]
        module: ModuleArgs,
        /// Window radius used by exhaustive sweeps.
        #[arg(long, default_value_t = 1)]
        window: i64,
        /// Number of random samples.
        #[arg(long, default_value_t = 100)]
        samples: usize,
        /// Random seed (also read from SUPERWITT_SEED).
        #[arg(long, env = "SUPERWITT_SEED", default_value_t = 17)]
        seed: u64,
        /// Plant a sign defect so the failure path can be exercised.
        #[arg(long = "corrupt-sign", hide = true)]
        corrupt_sign: bool,
    },
}

fn tv_text(n: usize, w: &TensorVector) -> String {
    if w.is_zero() {
        return "0".to_string();
    }
    w.terms()
        .map(|(key, c)| {
            format!(
                "{}  r={:?}  p={:?}  j={}",
                scalar_str(c),
                key.r,
                mask_to_bits(key.p, n),
                key.j
            )
        })
        .collect::<Vec<_>>()
        .join("\n")
}

fn read_arg_or_file(text: &str) -> Result<String, String> {
    match text.strip_prefix('@') {
        Some(path) => {
            std::fs::read_to_string(path).map_err(|e| format!("cannot read '{path}': {e}"))
        }
        None => Ok(text.to_string()),
    }
}

fn parse_theta(text: &str) -> Result<IntMatrix, String> {
    let rows: Result<Vec<Vec<i64>>, String> = text
        .split(';')
        .map(|row| {
            row.split(',')
                .map(|e| {
                    e.trim()
                        .parse::<i64>()
                        .map_err(|_| format!("bad matrix entry '{}'", e.trim()))
                })
                .collect()
        })
        .collect();
    IntMatrix::new(rows?).map_err(|e| e.to_string())
}

fn run(cli: Cli) -> Result<u8, String> {
    match cli.cmd {
        Cmd::Parse { kind, expr } => {
            let k = kind.kind()?;
            match parse_element(k, &expr).map_err(|e| e.to_string())? {
                Parsed::Poly(p) => {
                    if cli.json {
                        let v = serde_json::json!({"type": "poly", "value": poly_form(&p)});
                        println!("{v}");
                    } else {
                        println!("{p}");
                    }
                }
                Parsed::Field(x) => {
                    if cli.json {
                        let v = serde_json::json!({"type": "field", "value": field_form(&x)});
                        println!("{v}");
                    } else {
                        println!("{x}");
                    }
                }
            }
            Ok(0)
        }
        Cmd::Bracket { kind, x, y } => {
            let k = kind.kind()?;
            let xf = parse_field(k, &x).map_err(|e| e.to_string())?;
            let yf = parse_field(k, &y).map_err(|e| e.to_string())?;
            let b = xf.try_bracket(&yf).map_err(|e| e.to_string())?;
            if cli.json {
                println!("{}", serde_json::json!(field_form(&b)));
            } else {
                println!("{b}");
            }
            Ok(0)
        }
        Cmd::Apply { kind, field, target } => {
            let k = kind.kind()?;
            let xf = parse_field(k, &field).map_err(|e| e.to_string())?;
            let h = parse_poly(k, &target).map_err(|e| e.to_string())?;
            let out = xf.apply(&h).map_err(|e| e.to_string())?;
            if cli.json {
                println!("{}", serde_json::json!(poly_form(&out)));
            } else {
                println!("{out}");
            }
            Ok(0)
        }
        Cmd::Act { module, field, vec } => {
            let md = module.module()?;
            let kind = md.kind();
            let xf = parse_field(kind, &field).map_err(|e| e.to_string())?;
            let raw = read_arg_or_file(&vec)?;
            let form: TvForm =
                serde_json::from_str(&raw).map_err(|e| format!("bad vector JSON: {e}"))?;
            let w = tv_from_form(&md, &form)?;
            let out = md.act(&xf, &w).map_err(|e| e.to_string())?;
            let n = kind.n();
            if cli.json {
                println!("{}", serde_json::json!(tv_form(n, &out)));
            } else {
                println!("{}", tv_text(n, &out));
            }
            Ok(0)
        }
        Cmd::Mult { module, window } => {
            let md = module.module()?;
            if cli.json {
                let rows: Vec<serde_json::Value> = mult_rows(&md, window)
                    .into_iter()
                    .map(|(k, d)| serde_json::json!({"offset": k, "dimension": d}))
                    .collect();
                println!("{}", serde_json::json!(rows));
            } else {
                print!("{}", mult_csv(&md, window));
            }
            Ok(0)
        }
        Cmd::Twist { kind, theta, field, poly } => {
            let k = kind.kind()?;
            let th = parse_theta(&theta)?;
            match (field, poly) {
                (Some(expr), None) => {
                    let x = parse_field(k, &expr).map_err(|e| e.to_string())?;
                    let out = twist_field(&th, &x).map_err(|e| e.to_string())?;
                    if cli.json {
                        println!("{}", serde_json::json!(field_form(&out)));
                    } else {
                        println!("{out}");
                    }
                }
                (None, Some(expr)) => {
                    let p = parse_poly(k, &expr).map_err(|e| e.to_string())?;
                    let out = twist_poly(&th, &p).map_err(|e| e.to_string())?;
                    if cli.json {
                        println!("{}", serde_json::json!(poly_form(&out)));
                    } else {
                        println!("{out}");
                    }
                }
                _ => return Err("pass exactly one of --field or --poly".to_string()),
            }
            Ok(0)
        }
        Cmd::Cover { module, radius, bound, minimal_n, minimal_ell } => {
            let md = module.module()?;
            let mut report = serde_json::Map::new();
            let mut lines = Vec::new();
            let want_n = minimal_n || minimal_ell.is_none();
            if let Some(label) = minimal_ell {
                match minimal_omega_ell(&md, label, radius, bound) {
                    Ok(ell) => {
                        report.insert("minimal_ell".into(), serde_json::json!(ell));
                        report.insert("direction".into(), serde_json::json!(label));
                        lines.push(format!(
                            "minimal difference order for direction {label}: {ell}"
                        ));
                    }
                    Err(e) => return exhausted(cli.json, e),
                }
            }
            if want_n {
                match minimal_n_search(&md, radius, bound) {
                    Ok(nc) => {
                        report.insert("minimal_n".into(), serde_json::json!(nc));
                        lines.push(format!("minimal annihilator order: {nc}"));
                    }
                    Err(e) => return exhausted(cli.json, e),
                }
            }
            if cli.json {
                println!("{}", serde_json::Value::Object(report));
            } else {
                println!("{}", lines.join("\n"));
            }
            Ok(0)
        }
        Cmd::Verma { m, n, v, lambda, lambda0, depth, raise_depth, window } => {
            let kind = AlgebraKind::SemiDirect { m, n };
            let ec = kind.context().even_count();
            let rho = resolve_rep(ec, n, &v)?;
            let lam = match &lambda {
                Some(text) => {
                    let l = parse_scalar_list(text).map_err(|e| e.to_string())?;
                    if l.len() != ec {
                        return Err(format!("--lambda needs {ec} entries, got {}", l.len()));
                    }
                    l
                }
                None => default_lambda(ec),
            };
            let l0 = parse_scalar_list(&lambda0)
                .map_err(|e| e.to_string())?
                .into_iter()
                .next()
                .ok_or("--lambda0 is empty")?;
            let base = TensorModule::new(kind, rho, lam, Some(l0)).map_err(|e| e.to_string())?;
            let verma = VermaModule::new(base, window).map_err(|e| e.to_string())?;
            let raise = raise_depth.unwrap_or(depth + 2);
            let report = verma.radical(depth, raise).map_err(|e| e.to_string())?;
            if cli.json {
                println!("{}", serde_json::json!(radical_form(&report)));
            } else {
                print!("{}", radical_csv(&report));
            }
            Ok(0)
        }
        Cmd::Verify {
            suite,
            list,
            module,
            window,
            samples,
            seed,
            corrupt_sign,
        } => {
            if list {
                if cli.json {
                    let rows: Vec<serde_json::Value> = SUITES
                        .iter()
                        .map(|(name, what)| serde_json::json!({"suite": name, "checks": what}))
                        .collect();
                    println!("{}", serde_json::json!(rows));
                } else {
                    for (name, what) in SUITES {
                        println!("{name:24} {what}");
                    }
                }
                return Ok(0);
            }
            let name = suite.expect("clap enforces --suite without --list");
            let kind = module.kind.kind()?;
            let lambda = match &module.lambda {
                Some(text) => parse_scalar_list(text).map_err(|e| e.to_string())?,
                None => Vec::new(),
            };
            let lambda0 = match &module.lambda0 {
                Some(text) => Some(
                    parse_scalar_list(text)
                        .map_err(|e| e.to_string())?
                        .into_iter()
                        .next()
                        .ok_or("--lambda0 is empty")?,
                ),
                None => None,
            };
            let cfg = SuiteConfig {
                name,
                m: module.kind.m,
                n: module.kind.n,
                kind,
                v_name: module.v.clone(),
                lambda,
                lambda0,
                window,
                samples,
                seed,
                corrupt_sign,
            };
            let report = run_suite(&cfg)?;
            if cli.json {
                println!("{}", serde_json::to_string(&report).expect("report serializes"));
            } else {
                for c in &report.checks {
                    println!(
                        "check {:40} {} ({} checks)",
                        c.name,
                        if c.pass { "pass" } else { "FAIL" },
                        c.count
                    );
                }
                println!(
                    "suite {} [{} m={} n={} seed={}]: {}",
                    report.suite,
                    report.kind,
                    report.m,
                    report.n,
                    report.seed,
                    if report.pass { "PASS" } else { "FAIL" }
                );
            }
            Ok(if report.pass { 0 } else { 1 })
        }
    }
}

fn exhausted(json: bool, e: superwitt::Error) -> Result<u8, String> {
    if let superwitt::Error::SearchExhausted { bound } = e {
        if json {
            println!("{}", serde_json::json!({"exhausted": true, "bound": bound}));
        } else {
            println!("no order up to {bound} works");
        }
        Ok(1)
    } else {
        Err(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
