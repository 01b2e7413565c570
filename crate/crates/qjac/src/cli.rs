//! Command-line front end: expand, verify, bps, certify and table
//! subcommands over the library modules.
//!
//! Exit codes: 0 success/PASS, 1 verification failure, 2 usage error,
//! 3 precision error. All numbers are emitted as exact `num/den`
//! strings; output is deterministic for identical invocations.

use std::path::PathBuf;
use std::str::FromStr;

use clap::{Parser, Subcommand};

use crate::certify::{certify_equal, CertifyError};
use crate::jacobi::{registry, JacobiError, NamedKey};
use crate::modular::ModularError;
use crate::rational::{format_rational, is_integer, Rational};
use crate::series::{SeriesError, UQSeries};
use crate::tables::{self, TablesError};
use crate::verify::{run_suite, VerifyConfig, SUITES};
use crate::ycoords::{bps_expand, YError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_PRECISION: i32 = 3;

/// Default precisions and limits, overridable by the environment
/// variable `QJAC_DEFAULT_PREC`, a config file, and flags (in that
/// order of increasing priority).
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub u_prec: i64,
    pub q_prec: i64,
    pub format: String,
    pub max_weight: i64,
    pub guard: i64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            u_prec: 24,
            q_prec: 25,
            format: "pretty".into(),
            max_weight: 120,
            guard: 5,
        }
    }
}

impl RunConfig {
    fn from_env() -> Self {
        let mut cfg = RunConfig::default();
        if let Ok(v) = std::env::var("QJAC_DEFAULT_PREC") {
            if let Ok(p) = v.trim().parse::<i64>() {
                if p > 0 {
                    cfg.u_prec = p;
                    cfg.q_prec = p + 1;
                }
            }
        }
        cfg
    }

    fn apply_file(&mut self, path: &PathBuf) -> Result<(), String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(format!("bad config line: {line}"));
            };
            let (key, value) = (key.trim(), value.trim());
            let set_pos = |target: &mut i64| {
                value
                    .parse::<i64>()
                    .ok()
                    .filter(|v| *v > 0)
                    .map(|v| *target = v)
                    .ok_or_else(|| format!("bad value for {key}: {value}"))
            };
            match key {
                "u_prec" => set_pos(&mut self.u_prec)?,
                "q_prec" => set_pos(&mut self.q_prec)?,
                "max_weight" => set_pos(&mut self.max_weight)?,
                "guard" => {
                    self.guard = value
                        .parse::<i64>()
                        .ok()
                        .filter(|v| *v >= 0)
                        .ok_or_else(|| format!("bad value for guard: {value}"))?;
                }
                "format" => self.format = value.to_string(),
                _ => return Err(format!("unknown config key: {key}")),
            }
        }
        Ok(())
    }
}

#[derive(Parser)]
#[command(name = "qjac", version, about = "Exact series engine for quasi-modular and quasi-Jacobi forms")]
struct Cli {
    /// optional key=value config file
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Expand a named series and print it
    Expand {
        #[arg(long)]
        series: String,
        /// integer parameters, comma separated (e.g. 1,2)
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        params: Vec<i64>,
        #[arg(long)]
        u_prec: Option<i64>,
        #[arg(long)]
        q_prec: Option<i64>,
        /// json | csv | pretty
        #[arg(long)]
        format: Option<String>,
    },
    /// Run an invariant suite
    Verify {
        /// series-core | qmod-rank | jacobi | ycoords | certify | tables | all
        suite: String,
        #[arg(long)]
        max_weight: Option<i64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        u_prec: Option<i64>,
        #[arg(long)]
        q_prec: Option<i64>,
    },
    /// Fit a named series as a BPS table and print it as JSON
    Bps {
        #[arg(long)]
        series: String,
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        params: Vec<i64>,
        #[arg(long, default_value_t = 1)]
        index: i64,
        #[arg(long)]
        u_prec: Option<i64>,
        #[arg(long)]
        q_prec: Option<i64>,
    },
    /// Certify that two series (canonical JSON files) coincide
    Certify {
        #[arg(long)]
        lhs: PathBuf,
        #[arg(long)]
        rhs: PathBuf,
        #[arg(long)]
        sigma: i64,
        /// use the strengthened threshold B'(sigma)
        #[arg(long)]
        strong: bool,
    },
    /// Emit a CSV table of invariants
    Table {
        /// N | abelian | k3e-d1 | bps-k3e
        #[arg(long)]
        invariant: String,
        /// range `lo..hi` (inclusive) or a single value, per parameter
        #[arg(long)]
        g: Option<String>,
        #[arg(long)]
        h: Option<String>,
        #[arg(long)]
        m: Option<String>,
        #[arg(long)]
        n: Option<String>,
        #[arg(long)]
        d: Option<String>,
        /// fail (exit 1) if any value is not an integer
        #[arg(long)]
        integers_only: bool,
    },
}

fn parse_range(spec: &Option<String>, name: &str) -> Result<(i64, i64), String> {
    let Some(s) = spec else {
        return Err(format!("missing required range --{name}"));
    };
    let s = s.trim();
    if let Some((lo, hi)) = s.split_once("..") {
        let lo = i64::from_str(lo.trim()).map_err(|_| format!("bad range --{name}={s}"))?;
        let hi = i64::from_str(hi.trim()).map_err(|_| format!("bad range --{name}={s}"))?;
        if lo > hi {
            return Err(format!("empty range --{name}={s}"));
        }
        Ok((lo, hi))
    } else {
        let v = i64::from_str(s).map_err(|_| format!("bad range --{name}={s}"))?;
        Ok((v, v))
    }
}

fn usage(msg: &str) -> i32 {
    eprintln!("error: {msg}");
    eprintln!("run `qjac --help` for usage");
    EXIT_USAGE
}

fn precision(msg: &str) -> i32 {
    eprintln!("precision error: {msg}");
    EXIT_PRECISION
}

/// Classify library errors into the exit-code contract.
fn classify(err: &dyn std::error::Error) -> i32 {
    let msg = err.to_string();
    // walk the source chain looking for precision-shaped failures
    if msg.contains("precision") {
        precision(&msg)
    } else {
        usage(&msg)
    }
}

fn build_series(series: &str, params: &[i64], u_prec: i64, q_prec: i64) -> Result<UQSeries, i32> {
    let key: NamedKey = series.parse().map_err(|e: JacobiError| usage(&e.to_string()))?;
    registry(key, params, u_prec, q_prec)
        .map(|n| n.series)
        .map_err(|e| match e {
            JacobiError::Series(SeriesError::OutOfPrecision { .. }) => precision(&e.to_string()),
            other => usage(&other.to_string()),
        })
}

fn print_series(s: &UQSeries, format: &str) -> Result<(), i32> {
    match format {
        "json" => println!("{}", s.to_json()),
        "csv" => print!("{}", s.to_csv()),
        "pretty" => {
            for (u, layer) in s.layers() {
                println!("u^{u}: {layer}");
            }
            println!("precision: u^{}, q^{}", s.u_prec(), s.q_prec());
        }
        other => return Err(usage(&format!("unknown format: {other}"))),
    }
    Ok(())
}

pub fn run() -> i32 {
    let cli = Cli::parse();
    let mut cfg = RunConfig::from_env();
    if let Some(path) = &cli.config {
        if let Err(e) = cfg.apply_file(path) {
            return usage(&e);
        }
    }
    match cli.cmd {
        Cmd::Expand {
            series,
            params,
            u_prec,
            q_prec,
            format,
        } => {
            let s = match build_series(
                &series,
                &params,
                u_prec.unwrap_or(cfg.u_prec),
                q_prec.unwrap_or(cfg.q_prec),
            ) {
                Ok(s) => s,
                Err(code) => return code,
            };
            match print_series(&s, format.as_deref().unwrap_or(&cfg.format)) {
                Ok(()) => EXIT_OK,
                Err(code) => code,
            }
        }
        Cmd::Verify {
            suite,
            max_weight,
            seed,
            u_prec,
            q_prec,
        } => {
            let vcfg = VerifyConfig {
                u_prec: u_prec.unwrap_or(cfg.u_prec),
                q_prec: q_prec.unwrap_or(cfg.q_prec),
                guard: cfg.guard,
                max_weight: max_weight.unwrap_or(cfg.max_weight),
                seed,
            };
            match run_suite(&suite, &vcfg) {
                Some(rep) => {
                    print!("{}", rep.render());
                    if rep.all_pass() {
                        EXIT_OK
                    } else {
                        EXIT_FAIL
                    }
                }
                None => usage(&format!(
                    "unknown suite {suite:?}; choose one of {}",
                    SUITES.join(", ")
                )),
            }
        }
        Cmd::Bps {
            series,
            params,
            index,
            u_prec,
            q_prec,
        } => {
            let s = match build_series(
                &series,
                &params,
                u_prec.unwrap_or(cfg.u_prec),
                q_prec.unwrap_or(cfg.q_prec),
            ) {
                Ok(s) => s,
                Err(code) => return code,
            };
            match bps_expand(&s, index) {
                Ok(table) => {
                    let mut rows = serde_json::Map::new();
                    for (n, row) in &table.rows {
                        let mut obj = serde_json::Map::new();
                        for (r, v) in row {
                            obj.insert(r.to_string(), format_rational(v).into());
                        }
                        rows.insert(n.to_string(), serde_json::Value::Object(obj));
                    }
                    let out = serde_json::json!({
                        "index": table.index,
                        "rows": rows,
                        "residual_order": table.residual_order,
                    });
                    println!("{}", serde_json::to_string_pretty(&out).expect("valid json"));
                    EXIT_OK
                }
                Err(e @ YError::ResidualNonzero { .. }) => {
                    eprintln!("fit failed: {e}");
                    EXIT_FAIL
                }
                Err(e) => usage(&e.to_string()),
            }
        }
        Cmd::Certify {
            lhs,
            rhs,
            sigma,
            strong,
        } => {
            let load = |path: &PathBuf| -> Result<UQSeries, i32> {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| usage(&format!("{}: {e}", path.display())))?;
                UQSeries::from_json(&text).map_err(|e| usage(&e.to_string()))
            };
            let (a, b) = match (load(&lhs), load(&rhs)) {
                (Ok(a), Ok(b)) => (a, b),
                (Err(code), _) | (_, Err(code)) => return code,
            };
            match certify_equal(&a, &b, sigma, strong, cfg.guard) {
                Ok(rep) => {
                    println!(
                        "{}",
                        serde_json::to_string_pretty(&rep).expect("report serializes")
                    );
                    if rep.certified() {
                        EXIT_OK
                    } else {
                        EXIT_FAIL
                    }
                }
                Err(CertifyError::Modular(ModularError::InsufficientPrecision {
                    needed,
                    have,
                })) => precision(&format!("need {needed} q-coefficients, have {have}")),
                Err(e) => classify(&e),
            }
        }
        Cmd::Table {
            invariant,
            g,
            h,
            m,
            n,
            d,
            integers_only,
        } => table_cmd(&invariant, &g, &h, &m, &n, &d, integers_only),
    }
}

fn table_cmd(
    invariant: &str,
    g: &Option<String>,
    h: &Option<String>,
    m: &Option<String>,
    n: &Option<String>,
    d: &Option<String>,
    integers_only: bool,
) -> i32 {
    let mut lines: Vec<String> = Vec::new();
    let mut values: Vec<Rational> = Vec::new();
    let result: Result<(), i32> = (|| {
        match invariant {
            "N" => {
                let (m0, m1) = parse_range(m, "m").map_err(|e| usage(&e))?;
                let (n0, n1) = parse_range(n, "n").map_err(|e| usage(&e))?;
                let (g0, g1) = parse_range(g, "g").map_err(|e| usage(&e))?;
                let (h0, h1) = parse_range(h, "h").map_err(|e| usage(&e))?;
                lines.push("m,n,g,h,value".into());
                for mm in m0..=m1 {
                    for nn in n0..=n1 {
                        for gg in g0..=g1 {
                            for hh in h0..=h1 {
                                let v = tables::invariant_n(mm, nn, gg, hh)
                                    .map_err(|e| table_err(e))?;
                                lines.push(format!(
                                    "{mm},{nn},{gg},{hh},{}",
                                    format_rational(&v)
                                ));
                                values.push(v);
                            }
                        }
                    }
                }
            }
            "abelian" => {
                let (g0, g1) = parse_range(g, "g").map_err(|e| usage(&e))?;
                let (d0, d1) = parse_range(d, "d").map_err(|e| usage(&e))?;
                lines.push("g,d,value".into());
                for gg in g0..=g1 {
                    for dd in d0..=d1 {
                        let v = tables::invariant_abelian(gg, dd).map_err(|e| table_err(e))?;
                        lines.push(format!("{gg},{dd},{}", format_rational(&v)));
                        values.push(v);
                    }
                }
            }
            "k3e-d1" => {
                let (g0, g1) = parse_range(g, "g").map_err(|e| usage(&e))?;
                let (h0, h1) = parse_range(h, "h").map_err(|e| usage(&e))?;
                lines.push("g,h,value".into());
                for gg in g0..=g1 {
                    for hh in h0..=h1 {
                        let v = tables::invariant_k3e_d1(gg, hh).map_err(|e| table_err(e))?;
                        lines.push(format!("{gg},{hh},{}", format_rational(&v)));
                        values.push(v);
                    }
                }
            }
            "bps-k3e" => {
                let (h0, h1) = parse_range(h, "h").map_err(|e| usage(&e))?;
                lines.push("g,h,value".into());
                for hh in h0..=h1 {
                    let t = tables::bps_numbers_k3e(hh).map_err(|e| table_err(e))?;
                    for (gg, v) in t {
                        lines.push(format!("{gg},{hh},{v}"));
                    }
                }
            }
            other => return Err(usage(&format!("unknown invariant: {other}"))),
        }
        Ok(())
    })();
    if let Err(code) = result {
        return code;
    }
    if integers_only {
        if let Some(bad) = values.iter().find(|v| !is_integer(v)) {
            eprintln!("non-integer value in table: {}", format_rational(bad));
            return EXIT_FAIL;
        }
    }
    for line in lines {
        println!("{line}");
    }
    EXIT_OK
}

fn table_err(e: TablesError) -> i32 {
    match e {
        TablesError::Series(SeriesError::OutOfPrecision { .. }) => precision(&e.to_string()),
        TablesError::NonIntegerBps { .. } => {
            eprintln!("{e}");
            EXIT_FAIL
        }
        other => usage(&other.to_string()),
    }
}
