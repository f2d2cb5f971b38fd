//! `fptlab`: F-pure thresholds of polynomials over finite fields.

mod output;

use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use fptlab::accumulation::{accumulation_sequence, default_levels, DEFAULT_LEVEL_BUDGET};
use fptlab::algebra::{parse_polynomial, parse_univariate, FiniteField, MvPolynomial, WeightedGrading};
use fptlab::baseq::{self, DigitExpansion, ExactRational};
use fptlab::counterexamples::{construct_with, ConstructOptions};
use fptlab::fpt::{fpt_principal, probe_vertical, SolverConfig};
use fptlab::frobenius::cache::default_path;
use fptlab::frobenius::{IdealBudget, NuCache, NuConfig, NuTable};
use fptlab::Error;

use output::{Document, Format};

#[derive(Parser)]
#[command(name = "fptlab", version, about = "F-pure thresholds over finite fields")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Base-q digits and truncations of a positive rational.
    Digits {
        #[arg(long)]
        t: ExactRational,
        #[arg(long, short = 'q', alias = "p")]
        q: u64,
        #[arg(long, default_value_t = 10)]
        n_max: u32,
    },
    /// ν_f(p^e) for e = 1..=e_max, with witness monomials.
    Nu {
        #[command(flatten)]
        poly: PolyArgs,
        #[arg(long, default_value_t = 5)]
        e_max: u32,
        /// Ignore the on-disk cache.
        #[arg(long)]
        no_cache: bool,
        #[arg(long, default_value_t = fptlab::frobenius::DEFAULT_MAX_TERMS)]
        max_terms: usize,
    },
    /// Exact threshold when the graded two-variable solver applies,
    /// otherwise a truncation interval.
    Fpt {
        #[command(flatten)]
        poly: PolyArgs,
        #[arg(long)]
        weights: Option<Weights>,
        #[arg(long, default_value_t = 12)]
        e_max: u32,
        /// Include the ν table in the output.
        #[arg(long)]
        emit_table: bool,
        #[arg(long, default_value_t = fptlab::frobenius::DEFAULT_MAX_TERMS)]
        max_terms: usize,
    },
    /// Perturbations f + α_e with thresholds above fpt(f).
    Accumulate {
        #[command(flatten)]
        poly: PolyArgs,
        #[arg(long)]
        weights: Option<Weights>,
        /// Comma-separated levels; defaults to the first three admissible ones.
        #[arg(long)]
        levels: Option<Levels>,
        #[arg(long)]
        probe: Option<u32>,
        #[arg(long, default_value_t = 12)]
        e_max: u32,
        #[arg(long, default_value_t = DEFAULT_LEVEL_BUDGET)]
        level_budget: u64,
    },
    /// Accumulation points of two-dimensional thresholds outside T_1.
    Counterexample {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        max_ext_degree: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_LEVEL_BUDGET)]
        level_budget: u64,
    },
    /// Truncations of fpt((f) + m^n) for n = 1..=n_max.
    ProbeVertical {
        #[command(flatten)]
        poly: PolyArgs,
        #[arg(long, default_value_t = 5)]
        n_max: u32,
        #[arg(long, short = 'e', default_value_t = 2)]
        e: u32,
        #[arg(long, default_value_t = 100_000)]
        max_products: usize,
    },
    /// Inspect or clear the ν cache.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Subcommand)]
enum CacheAction {
    Stat,
    Clear,
}

#[derive(Args)]
struct PolyArgs {
    #[arg(long)]
    p: u64,
    /// Monic irreducible modulus in z defining F_p[z]/(μ); `u` denotes z.
    #[arg(long)]
    modulus: Option<String>,
    #[arg(long)]
    poly: String,
    #[arg(long)]
    vars: Option<usize>,
}

impl PolyArgs {
    fn field(&self) -> fptlab::Result<Arc<FiniteField>> {
        match &self.modulus {
            None => FiniteField::prime(self.p),
            Some(text) => FiniteField::extension(self.p, &parse_univariate(text, self.p, 'z')?),
        }
    }

    fn polynomial(&self) -> fptlab::Result<MvPolynomial> {
        parse_polynomial(&self.poly, &self.field()?, self.vars)
    }
}

#[derive(Clone)]
struct Weights(Vec<u64>);

impl std::str::FromStr for Weights {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        s.split(',')
            .map(|w| w.trim().parse::<u64>().map_err(|e| format!("bad weight {w:?}: {e}")))
            .collect::<Result<_, _>>()
            .map(Weights)
    }
}

#[derive(Clone)]
struct Levels(Vec<u32>);

impl std::str::FromStr for Levels {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        s.split(',')
            .filter(|l| !l.trim().is_empty())
            .map(|l| l.trim().parse::<u32>().map_err(|e| format!("bad level {l:?}: {e}")))
            .collect::<Result<_, _>>()
            .map(Levels)
    }
}

fn grading(weights: &Option<Weights>, f: &MvPolynomial) -> fptlab::Result<WeightedGrading> {
    match weights {
        Some(w) => WeightedGrading::new(w.0.clone()),
        None => Ok(WeightedGrading::standard(f.nvars())),
    }
}

fn open_cache() -> fptlab::Result<NuCache> {
    match default_path() {
        Some(path) => NuCache::open(path),
        None => Ok(NuCache::in_memory()),
    }
}

fn run(command: Command) -> fptlab::Result<Document> {
    match command {
        Command::Digits { t, q, n_max } => digits(&t, q, n_max),
        Command::Nu {
            poly,
            e_max,
            no_cache,
            max_terms,
        } => {
            let f = poly.polynomial()?;
            let config = NuConfig { max_terms };
            let mut cache = if no_cache { NuCache::in_memory() } else { open_cache()? };
            let table = NuTable::with_cache(&f, config, &cache)?;
            table.ensure_level(e_max)?;
            table.record_into(&mut cache);
            cache.save()?;
            let rows: Vec<_> = table.entries().into_iter().take(e_max as usize).collect();
            let mut tsv = String::from("e\tnu\ttruncation\twitness\n");
            let mut pretty = format!("f = {f}\n");
            let mut json_rows = Vec::new();
            for row in &rows {
                let tr = table.truncation(row.e)?;
                let witness: Vec<String> = row.witness.exponents().iter().map(u32::to_string).collect();
                tsv.push_str(&format!("{}\t{}\t{}\t{}\n", row.e, row.nu, tr, witness.join(",")));
                pretty.push_str(&format!("ν({}^{}) = {}   truncation {}\n", f.characteristic(), row.e, row.nu, tr));
                json_rows.push(json!({"e": row.e, "nu": row.nu, "truncation": tr, "witness": row.witness}));
            }
            Ok(Document::new(
                "nu",
                json!({
                    "p": f.characteristic(),
                    "field": f.field().describe(),
                    "polynomial": f.to_string(),
                    "fingerprint": table.fingerprint(),
                    "table": json_rows,
                }),
                tsv,
                pretty,
            ))
        }
        Command::Fpt {
            poly,
            weights,
            e_max,
            emit_table,
            max_terms,
        } => {
            let f = poly.polynomial()?;
            let w = grading(&weights, &f)?;
            let config = SolverConfig {
                e_max,
                max_terms,
                ..SolverConfig::default()
            };
            let cert = fpt_principal(&f, Some(&w), config)?;
            let mut value = serde_json::to_value(&cert).expect("serializable");
            if !emit_table {
                strip_tables(&mut value);
            }
            let method = value["method"].as_str().unwrap_or_default().to_string();
            let mut tsv = format!("polynomial\tp\tfpt\tmethod\n{}\t{}\t{}\t{}\n", f, f.characteristic(), cert.value, method);
            let mut pretty = format!("fpt({f}) = {}\nmethod: {method}\n", cert.value);
            if emit_table {
                let base = cert.base.as_deref().unwrap_or(&cert);
                tsv.push_str("\ne\tnu\ttruncation\n");
                for row in &base.nu_table {
                    let tr = ExactRational::from_integer(row.nu).scale_pow(cert.p, -i64::from(row.e));
                    tsv.push_str(&format!("{}\t{}\t{}\n", row.e, row.nu, tr));
                    pretty.push_str(&format!("ν(p^{}) = {}\n", row.e, row.nu));
                }
            }
            Ok(Document::new("fpt", value, tsv, pretty))
        }
        Command::Accumulate {
            poly,
            weights,
            levels,
            probe,
            e_max,
            level_budget,
        } => {
            let f = poly.polynomial()?;
            let w = grading(&weights, &f)?;
            let cert = fpt_principal(&f, Some(&w), SolverConfig::default())?;
            let levels = match levels {
                Some(l) => l.0,
                None => default_levels(&f, &w, &cert, 3, e_max, level_budget)?,
            };
            let probe = probe.unwrap_or_else(|| levels.iter().max().map_or(1, |&m| m + 1));
            let report = accumulation_sequence(&f, &w, &cert, &levels, probe)?;
            let mut pretty = format!("t = fpt({}) = {}\n", report.polynomial, report.t);
            for r in &report.rows {
                pretty.push_str(&format!(
                    "e = {}: λ = {:?}, α = {:?}, ν {} -> {}, gap {}, level-{} truncation {}\n",
                    r.e, r.lambda, r.alpha, r.nu_before, r.nu_after, r.gap, report.probe_level, r.probe_truncation
                ));
            }
            Ok(Document::new(
                "accumulate",
                serde_json::to_value(&report).expect("serializable"),
                report.to_tsv(),
                pretty,
            ))
        }
        Command::Counterexample {
            p,
            max_ext_degree,
            level_budget,
        } => {
            let pkg = construct_with(
                p,
                ConstructOptions {
                    max_ext_degree,
                    level_budget,
                    ..ConstructOptions::default()
                },
            )?;
            let mut value = serde_json::to_value(&pkg).expect("serializable");
            strip_tables(&mut value);
            let tsv = format!(
                "p\tpolynomial\tfpt\tm\tt_p\tin_t1\n{}\t{}\t{}\t{}\t{}\t{}\n",
                pkg.p, pkg.polynomial, pkg.fpt.value, pkg.multiplier, pkg.t_p, pkg.in_t1
            );
            Ok(Document::new("counterexample", value, tsv, pkg.summary()))
        }
        Command::ProbeVertical {
            poly,
            n_max,
            e,
            max_products,
        } => {
            let f = poly.polynomial()?;
            let budget = IdealBudget {
                max_products,
                ..IdealBudget::default()
            };
            let probe = probe_vertical(&f, n_max, e, budget)?;
            let mut tsv = String::from("n\tnu\ttruncation\n");
            let mut pretty = format!("f = {}, level {e}, fpt(f) truncation {}\n", probe.polynomial, probe.fpt_truncation);
            for r in &probe.rows {
                tsv.push_str(&format!("{}\t{}\t{}\n", r.n, r.nu, r.truncation));
                pretty.push_str(&format!("n = {}: {}\n", r.n, r.truncation));
            }
            pretty.push_str(&match probe.stable_from {
                Some(n) => format!("stable from n = {n}\n"),
                None => "not stable within n_max\n".to_string(),
            });
            Ok(Document::new(
                "probe-vertical",
                serde_json::to_value(&probe).expect("serializable"),
                tsv,
                pretty,
            ))
        }
        Command::Cache { action } => {
            let mut cache = open_cache()?;
            if let CacheAction::Clear = action {
                cache.clear()?;
            }
            let stat = cache.stat();
            let tsv = format!(
                "path\tentries\tpolynomials\tbytes\n{}\t{}\t{}\t{}\n",
                stat.path.as_deref().unwrap_or("-"),
                stat.entries,
                stat.polynomials,
                stat.bytes
            );
            let pretty = format!(
                "cache: {}\nentries: {}\npolynomials: {}\nbytes: {}\n",
                stat.path.as_deref().unwrap_or("(none)"),
                stat.entries,
                stat.polynomials,
                stat.bytes
            );
            Ok(Document::new("cache", serde_json::to_value(&stat).expect("serializable"), tsv, pretty))
        }
    }
}

fn digits(t: &ExactRational, q: u64, n_max: u32) -> fptlab::Result<Document> {
    let mut rows = Vec::new();
    let mut tsv = String::from("n\tdigit\ttruncation\n");
    for n in 1..=n_max {
        let d = baseq::digit(t, q, i64::from(n))?;
        let tr = baseq::truncation(t, q, n)?;
        tsv.push_str(&format!("{n}\t{d}\t{tr}\n"));
        rows.push(json!({"n": n, "digit": d, "truncation": tr}));
    }
    let expansion = DigitExpansion::new(t, q, 1 << 20)?;
    let in_z = baseq::is_in_z_inv_q(t, q)?;
    let stable = baseq::stabilize_base(t, q)?;
    let shown: Vec<String> = rows.iter().map(|r| r["digit"].to_string()).collect();
    let pretty = format!(
        "t = {t}, base {q}\ndigits: {}\npreperiod {}, period {}\nin Z[1/{q}]: {in_z}\nstabilizing exponent: {stable}\n",
        shown.join(" "),
        expansion.preperiod(),
        expansion.period()
    );
    Ok(Document::new(
        "digits",
        json!({
            "t": t,
            "q": q,
            "digits": rows,
            "preperiod": expansion.preperiod(),
            "period": expansion.period(),
            "in_z_inv_q": in_z,
            "stabilize_base": stable,
        }),
        tsv,
        pretty,
    ))
}

fn strip_tables(v: &mut Value) {
    match v {
        Value::Object(map) => {
            map.remove("nu_table");
            map.values_mut().for_each(strip_tables);
        }
        Value::Array(items) => items.iter_mut().for_each(strip_tables),
        _ => {}
    }
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Budget(_) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(doc) => {
            print!("{}", doc.render(cli.format));
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}
