//! The `pseudosum` command line.
//!
//! Every subcommand prints one JSON document carrying `"version": 1`. Exit
//! codes: 0 on success, 1 when an input fails validation, 2 on usage errors.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

use pseudosum::cyclic::Permutation;
use pseudosum::*;

pub const SCHEMA_VERSION: u64 = 1;

const EXIT_OK: i32 = 0;
const EXIT_INVALID: i32 = 1;
const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "pseudosum", version, about = "Pseudo-sums of random variables over finite alphabets")]
struct Cli {
    /// Write the JSON document here instead of standard output.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct TableSource {
    /// Table JSON file.
    #[arg(long, value_name = "FILE")]
    lut: Option<PathBuf>,
    /// Built-in table: `modN`, `maxN`, or `perm FILE` (addition mod N
    /// relabeled by the permutation in FILE).
    #[arg(long = "gen", num_args = 1..=2, value_names = ["KIND", "FILE"])]
    generator: Option<Vec<String>>,
}

#[derive(Debug, Args)]
struct PermArg {
    /// Relabeling permutation JSON file (identity when omitted).
    #[arg(long, value_name = "FILE")]
    perm: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Algebraic properties of a table.
    Check {
        #[command(flatten)]
        table: TableSource,
    },
    /// Law of X ⊕ Y for independent X ~ P and Y ~ Q.
    Convolve {
        #[command(flatten)]
        table: TableSource,
        /// The two input laws, `--dist P --dist Q`.
        #[arg(long, num_args = 1, required = true, value_name = "FILE")]
        dist: Vec<PathBuf>,
    },
    /// Law of the M-fold pseudo-sum.
    Power {
        #[command(flatten)]
        table: TableSource,
        #[arg(long)]
        dist: PathBuf,
        #[arg(long)]
        m: usize,
    },
    /// Limit of the pseudo-sums, or the cycle they fall into.
    Limit {
        #[command(flatten)]
        table: TableSource,
        #[arg(long)]
        dist: PathBuf,
        #[arg(long, default_value_t = DEFAULT_STABLE_TOL)]
        tol: f64,
        #[arg(long, default_value_t = DEFAULT_MAX_DOUBLINGS)]
        max_doublings: usize,
    },
    /// Stable laws of addition mod N.
    Stable {
        #[arg(long, value_name = "N")]
        enumerate: usize,
        #[command(flatten)]
        perm: PermArg,
    },
    /// Domain of attraction under addition mod N.
    Doa {
        #[arg(long)]
        dist: PathBuf,
        /// Test attraction to M·U only.
        #[arg(long, value_name = "M")]
        target: Option<usize>,
        #[command(flatten)]
        perm: PermArg,
    },
    /// Infinite divisibility under addition mod N.
    Id {
        #[arg(long)]
        dist: PathBuf,
        #[arg(long, conflicts_with = "check")]
        decompose: bool,
        #[arg(long)]
        check: bool,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[command(flatten)]
        perm: PermArg,
    },
    /// Characteristic function of a law under addition mod N.
    Spectrum {
        #[arg(long)]
        dist: PathBuf,
        #[command(flatten)]
        perm: PermArg,
    },
    /// The maximum as pseudo-sum.
    Max(MaxArgs),
    /// Seeded Monte Carlo estimate of the M-fold pseudo-sum.
    Simulate {
        #[command(flatten)]
        table: TableSource,
        #[arg(long)]
        dist: PathBuf,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        trials: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        compare_exact: bool,
        /// Worker threads (default: all cores). Output does not depend on it.
        #[arg(long)]
        workers: Option<usize>,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct MaxArgs {
    /// Law of max{X, Y}.
    #[arg(long, num_args = 2, value_names = ["P", "Q"])]
    convolve: Option<Vec<PathBuf>>,
    /// Law whose N-fold maximum is P.
    #[arg(long, num_args = 2, value_names = ["N", "P"])]
    root: Option<Vec<String>>,
    /// Whether P is attracted to the point mass at X.
    #[arg(long, num_args = 2, value_names = ["X", "P"])]
    doa: Option<Vec<String>>,
}

/// Outcome of one invocation: exit code and the text to print (the JSON
/// document on success, a diagnostic otherwise).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub text: String,
}

/// Runs the command line `argv` (including the program name).
pub fn run<I, T>(argv: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            return Output {
                code,
                text: e.render().to_string(),
            };
        }
    };
    match execute(&cli.command) {
        Ok(doc) => {
            let mut text = serde_json::to_string_pretty(&doc).expect("documents serialize");
            text.push('\n');
            if let Some(path) = &cli.out {
                if let Err(e) = fs::write(path, &text) {
                    return Output {
                        code: EXIT_INVALID,
                        text: format!("error: cannot write {}: {e}\n", path.display()),
                    };
                }
                return Output {
                    code: EXIT_OK,
                    text: String::new(),
                };
            }
            Output { code: EXIT_OK, text }
        }
        Err(CliError::Usage(msg)) => Output {
            code: EXIT_USAGE,
            text: format!("error: {msg}\n"),
        },
        Err(CliError::Invalid(msg)) => Output {
            code: EXIT_INVALID,
            text: format!("error: {msg}\n"),
        },
    }
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Invalid(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Invalid(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Invalid(format!("cannot read {}: {e}", path.display())))
}

fn read_dist(path: &Path) -> CliResult<Distribution> {
    Distribution::from_json(&read(path)?).map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))
}

fn read_perm(path: &Path) -> CliResult<Permutation> {
    Permutation::from_json(&read(path)?).map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))
}

fn perm_for(arg: &PermArg, n: usize) -> CliResult<Permutation> {
    match &arg.perm {
        None => Ok(Permutation::identity(n)),
        Some(path) => {
            let s = read_perm(path)?;
            if s.n() != n {
                return Err(CliError::Invalid(format!(
                    "permutation has size {} but the distribution has size {n}",
                    s.n()
                )));
            }
            Ok(s)
        }
    }
}

fn load_table(src: &TableSource) -> CliResult<LutTable> {
    if let Some(path) = &src.lut {
        return LutTable::from_json(&read(path)?).map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())));
    }
    let spec = src.generator.as_deref().unwrap_or_default();
    match spec {
        [kind, file] if kind == "perm" => {
            let s = read_perm(Path::new(file))?;
            Ok(make_cyclic_lut(s.n(), &s)?)
        }
        [kind] => {
            let size = |prefix: &str| -> CliResult<usize> {
                kind[prefix.len()..]
                    .parse::<usize>()
                    .map_err(|_| CliError::Usage(format!("cannot read a size from --gen {kind}")))
            };
            if kind.starts_with("mod") {
                let n = size("mod")?;
                Ok(make_cyclic_lut(n, &Permutation::identity(n))?)
            } else if kind.starts_with("max") {
                Ok(make_max_lut(size("max")?)?)
            } else {
                Err(CliError::Usage(format!("unknown generator {kind}; expected modN, maxN or perm FILE")))
            }
        }
        _ => Err(CliError::Usage("--gen expects modN, maxN or perm FILE".into())),
    }
}

/// Rounds to 12 significant digits.
fn sig12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

fn probs(p: &Distribution) -> Value {
    p.probs().iter().map(|&v| sig12(v)).collect()
}

fn dist_doc(p: &Distribution) -> Value {
    json!({ "n": p.n(), "p": probs(p) })
}

fn stable_doc(law: &StableLaw, s: &Permutation) -> CliResult<Value> {
    Ok(json!({ "m": law.m(), "r": law.r(), "p": probs(&law.distribution(s)?) }))
}

fn versioned(doc: Value) -> Value {
    let mut out = Map::new();
    out.insert("version".into(), SCHEMA_VERSION.into());
    if let Value::Object(fields) = doc {
        out.extend(fields);
    }
    Value::Object(out)
}

fn execute(cmd: &Command) -> CliResult<Value> {
    let doc = match cmd {
        Command::Check { table } => {
            let t = load_table(table)?;
            let mut doc = json!({
                "n": t.n(),
                "associative": t.is_associative(),
                "commutative": t.check_commutative() == Commutativity::Pass,
                "identity": t.find_identity(),
                "idempotents": t.find_idempotents(),
            });
            if let Associativity::Counterexample(i, j, k) = t.check_associative() {
                doc["associativity_counterexample"] = json!([i, j, k]);
            }
            if let Commutativity::Counterexample(i, j) = t.check_commutative() {
                doc["commutativity_counterexample"] = json!([i, j]);
            }
            doc
        }
        Command::Convolve { table, dist } => {
            let [p, q] = dist.as_slice() else {
                return Err(CliError::Usage(format!("convolve needs exactly two --dist files, got {}", dist.len())));
            };
            let t = load_table(table)?;
            dist_doc(&convolve(&t, &read_dist(p)?, &read_dist(q)?)?)
        }
        Command::Power { table, dist, m } => {
            let t = load_table(table)?;
            dist_doc(&power(&t, &read_dist(dist)?, *m)?)
        }
        Command::Limit {
            table,
            dist,
            tol,
            max_doublings,
        } => {
            let t = load_table(table)?;
            match limit(&t, &read_dist(dist)?, *tol, *max_doublings)? {
                LimitResult::Converged { limit, doublings } => {
                    json!({ "status": "converged", "limit": probs(&limit), "doublings": doublings })
                }
                LimitResult::Cycle { period } => json!({ "status": "cycle", "period": period }),
                LimitResult::MaxIterations => json!({ "status": "max_iterations" }),
            }
        }
        Command::Stable { enumerate, perm } => {
            if *enumerate == 0 {
                return Err(CliError::Usage("--enumerate needs N >= 1".into()));
            }
            let s = perm_for(perm, *enumerate)?;
            let laws = enumerate_stable(*enumerate, &s)?
                .iter()
                .map(|(law, _)| stable_doc(law, &s))
                .collect::<CliResult<Vec<_>>>()?;
            json!({ "n": enumerate, "count": laws.len(), "laws": laws })
        }
        Command::Doa { dist, target, perm } => {
            let p = read_dist(dist)?;
            let s = perm_for(perm, p.n())?;
            match target {
                Some(m) => {
                    let law = StableLaw::new(p.n(), *m)?;
                    json!({
                        "target": stable_doc(&law, &s)?,
                        "in_doa": in_doa(&p, &law, &s)?,
                    })
                }
                None => {
                    let attractor = doa_attractor(&p, &s)?.map(|law| stable_doc(&law, &s)).transpose()?;
                    json!({ "attractor": attractor })
                }
            }
        }
        Command::Id {
            dist,
            decompose: _,
            check,
            tol,
            perm,
        } => {
            let p = read_dist(dist)?;
            let s = perm_for(perm, p.n())?;
            if *check {
                json!({ "infinitely_divisible": is_infinitely_divisible(&p, &s, *tol)? })
            } else {
                let d = decompose_id(&p, &s, *tol)?;
                let decomposition = d.map(|d| {
                    json!({
                        "a": d.a,
                        "m": d.m,
                        "lambda": sig12(d.lambda),
                        "jump": probs(&d.jump),
                    })
                });
                json!({ "infinitely_divisible": decomposition.is_some(), "decomposition": decomposition })
            }
        }
        Command::Spectrum { dist, perm } => {
            let p = read_dist(dist)?;
            let s = perm_for(perm, p.n())?;
            let f: Vec<[f64; 2]> = spectrum(&p, &s)?
                .values()
                .iter()
                .map(|z| [sig12(z.re), sig12(z.im)])
                .collect();
            json!({ "n": p.n(), "spectrum": f })
        }
        Command::Max(args) => max_command(args)?,
        Command::Simulate {
            table,
            dist,
            m,
            trials,
            seed,
            compare_exact,
            workers,
        } => {
            let t = load_table(table)?;
            let p = read_dist(dist)?;
            if *workers == Some(0) {
                return Err(CliError::Usage("--workers must be at least 1".into()));
            }
            let cfg = SimConfig::new(*seed, *trials, *m)?;
            let counts = empirical_counts(&t, &p, &cfg, *workers)?;
            let empirical = empirical_fold_with_workers(&t, &p, &cfg, *workers)?;
            let mut doc = json!({
                "seed": seed,
                "trials": trials,
                "m": m,
                "counts": counts,
                "empirical": probs(&empirical),
            });
            if *compare_exact {
                let exact = power(&t, &p, *m)?;
                doc["exact"] = probs(&exact);
                doc["tv"] = sig12(tv_distance(&empirical, &exact)?).into();
            }
            doc
        }
    };
    Ok(versioned(doc))
}

fn max_command(args: &MaxArgs) -> CliResult<Value> {
    if let Some(files) = &args.convolve {
        let (p, q) = (read_dist(&files[0])?, read_dist(&files[1])?);
        return Ok(dist_doc(&max_convolve(&p, &q)?));
    }
    let parse = |raw: &str, what: &str| {
        raw.parse::<usize>()
            .map_err(|_| CliError::Usage(format!("{what} must be a non-negative integer, got {raw}")))
    };
    if let Some(v) = &args.root {
        let n = parse(&v[0], "root order")?;
        return Ok(dist_doc(&max_nth_root(&read_dist(Path::new(&v[1]))?, n)?));
    }
    if let Some(v) = &args.doa {
        let x = parse(&v[0], "point")?;
        let p = read_dist(Path::new(&v[1]))?;
        return Ok(json!({ "x": x, "in_doa": max_doa(&p, x)? }));
    }
    Err(CliError::Usage("max needs --convolve, --root or --doa".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding() {
        assert_eq!(sig12(0.1 + 0.2), 0.3);
        assert_eq!(sig12(1.0 / 3.0), 0.333333333333);
        assert_eq!(sig12(0.0), 0.0);
        assert_eq!(sig12(-2.5e-20), -2.5e-20);
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run(["pseudosum", "check", "--bogus"]).code, EXIT_USAGE);
        assert_eq!(run(["pseudosum"]).code, EXIT_USAGE);
        assert_eq!(run(["pseudosum", "check", "--gen", "cube3"]).code, EXIT_USAGE);
        assert_eq!(run(["pseudosum", "check"]).code, EXIT_USAGE);
        assert_eq!(run(["pseudosum", "--help"]).code, EXIT_OK);
    }

    #[test]
    fn generated_check() {
        let out = run(["pseudosum", "check", "--gen", "max3"]);
        assert_eq!(out.code, 0);
        let v: Value = serde_json::from_str(&out.text).unwrap();
        assert_eq!(v["identity"], 0);
        assert_eq!(v["idempotents"], json!([0, 1, 2]));
        assert_eq!(v["version"], 1);
    }
}
