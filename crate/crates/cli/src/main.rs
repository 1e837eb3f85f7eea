//! `salemforge`: batch front end printing JSON (default) or CSV.

mod table;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde_json::{json, Value};

use salemforge::error::Error;
use salemforge::jonquieres::{
    auxiliary_polynomial, jonquieres_matrix, matrix_document, verify_structure, OrbitData,
    PolyDocument,
};
use salemforge::numerics::{format_rational, parse_rational, unit_circle_census};
use salemforge::realization::verify_realization;
use salemforge::spectrum::{
    classify_entry, dynamical_degree, enumerate_level_tuples, LevelReading, SpectrumCache,
    SpectrumEntry, SpectrumKey,
};
use salemforge::weyl::is_weyl_member;

use table::{emit_table, join_tuple, Format, Row};

#[derive(Parser, Debug)]
#[command(
    name = "salemforge",
    version,
    about = "Exact computations for de Jonquières matrices"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,

    /// JSON-lines cache of classified entries.
    #[arg(long, global = true, env = "SALEMFORGE_CACHE")]
    cache: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct KeyArgs {
    /// Degree of the map.
    #[arg(long)]
    d: u32,

    /// Orbit lengths n_2,...,n_m as a comma-separated list; empty for m = 1.
    #[arg(long, default_value = "", allow_hyphen_values = true)]
    tuple: String,
}

#[derive(Args, Debug, Clone)]
struct WidthArg {
    /// Width of printed isolating intervals (decimal, scientific or p/q).
    #[arg(long, default_value = "1e-9")]
    width: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Reading {
    /// Reference tuple (n_2, ..., n_{m-2}, n_{m-1} - 1) at level m - 1.
    TruncateDecrement,
    /// Reference tuple (n_2, ..., n_m - 1) at the same level.
    DecrementLast,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Auxiliary polynomial coefficients, ascending.
    Poly(KeyArgs),
    /// The de Jonquières matrix with basis labels.
    Matrix(KeyArgs),
    /// Characteristic polynomial and structural identities.
    Charpoly(KeyArgs),
    /// Isolating interval of the dominant root.
    Lambda {
        #[command(flatten)]
        key: KeyArgs,
        #[command(flatten)]
        width: WidthArg,
    },
    /// Root counts inside, on and outside the unit circle.
    Census(KeyArgs),
    /// Census and Salem/Pisot label, stored in the cache when one is given.
    Classify {
        #[command(flatten)]
        key: KeyArgs,
        #[command(flatten)]
        width: WidthArg,
    },
    /// Weyl group membership certificate of the matrix.
    Weyl(KeyArgs),
    /// First members of a level set, in increasing order.
    Spectrum {
        #[arg(long)]
        d: u32,
        /// Level: number of orbits including the fixed first one.
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 10)]
        limit: usize,
        /// Largest orbit length searched.
        #[arg(long, default_value_t = 40)]
        bound: u32,
        #[arg(long, value_enum, default_value = "truncate-decrement")]
        reading: Reading,
        #[command(flatten)]
        width: WidthArg,
    },
    /// Exact verification of the orbit points on the cuspidal cubic.
    Realize(KeyArgs),
    /// Inspect the cache.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Subcommand, Debug)]
enum CacheAction {
    /// Every stored key with its narrowest interval.
    List {
        #[command(flatten)]
        width: WidthArg,
    },
    /// One stored entry.
    Get {
        #[command(flatten)]
        key: KeyArgs,
        #[command(flatten)]
        width: WidthArg,
    },
}

/// Failure with the process exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidOrbitData(_)
            | Error::InvalidKey(_)
            | Error::InvalidArgument(_)
            | Error::BoundTooSmall { .. }
            | Error::ToleranceNotReached { .. } => 2,
            _ => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

fn parse_tuple(s: &str) -> Result<Vec<u32>, Failure> {
    let s = s.trim().trim_start_matches('(').trim_end_matches(')');
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|x| {
            x.trim()
                .parse::<u32>()
                .map_err(|_| usage(format!("bad tuple entry {x:?}")))
        })
        .collect()
}

fn parse_width(s: &str) -> Result<BigRational, Failure> {
    let w = parse_rational(s)?;
    if !w.is_positive() {
        return Err(usage("width must be positive"));
    }
    Ok(w)
}

impl KeyArgs {
    fn orbit_data(&self) -> Result<OrbitData, Failure> {
        Ok(OrbitData::new(self.d, parse_tuple(&self.tuple)?)?)
    }

    fn key(&self) -> Result<SpectrumKey, Failure> {
        Ok(SpectrumKey::new(self.d, parse_tuple(&self.tuple)?)?)
    }
}

/// Number of decimals shown for an interval of the given width.
fn decimals(width: &BigRational) -> usize {
    let mut k = 0;
    let mut step = BigRational::one();
    while &step > width && k < 60 {
        step /= BigRational::from_integer(10.into());
        k += 1;
    }
    k
}

fn csv_of(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}

fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("value serializes");
    s.push('\n');
    s
}

fn coefficient_rows(coeffs: &[String]) -> Vec<Vec<String>> {
    coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| vec![i.to_string(), c.clone()])
        .collect()
}

fn cache_of(cli: &Cli) -> Option<SpectrumCache> {
    cli.cache.as_ref().map(SpectrumCache::new)
}

/// Cached entry if present, otherwise computed and stored.
fn classified(cache: Option<&SpectrumCache>, key: &SpectrumKey) -> Result<SpectrumEntry, Failure> {
    if let Some(c) = cache {
        if let Some(e) = c.get(key)? {
            return Ok(e);
        }
    }
    let e = classify_entry(key)?;
    if let Some(c) = cache {
        c.put(&e)?;
    }
    Ok(e)
}

fn run(cli: &Cli) -> Result<String, Failure> {
    let format = cli.format;
    let cache = cache_of(cli);
    let out = match &cli.command {
        Command::Poly(k) => {
            let doc = PolyDocument::from_poly(&auxiliary_polynomial(&k.orbit_data()?));
            match format {
                Format::Json => json_text(&serde_json::to_value(&doc).map_err(Error::from)?),
                Format::Csv => csv_of(&["degree", "coeff"], &coefficient_rows(&doc.coeffs)),
            }
        }
        Command::Matrix(k) => {
            let doc = matrix_document(&k.orbit_data()?)?;
            match format {
                Format::Json => json_text(&serde_json::to_value(&doc).map_err(Error::from)?),
                Format::Csv => {
                    let mut header = vec![""];
                    header.extend(doc.labels.iter().map(String::as_str));
                    let rows: Vec<Vec<String>> = doc
                        .labels
                        .iter()
                        .zip(&doc.entries)
                        .map(|(l, r)| {
                            std::iter::once(l.clone())
                                .chain(r.iter().cloned())
                                .collect()
                        })
                        .collect();
                    csv_of(&header, &rows)
                }
            }
        }
        Command::Charpoly(k) => {
            let o = k.orbit_data()?;
            let char_poly = PolyDocument::from_poly(&jonquieres_matrix(&o)?.char_poly());
            let report = verify_structure(&o)?;
            match format {
                Format::Json => {
                    json_text(&json!({"coeffs": char_poly.coeffs, "structure": report}))
                }
                Format::Csv => csv_of(&["degree", "coeff"], &coefficient_rows(&char_poly.coeffs)),
            }
        }
        Command::Lambda { key, width } => {
            let k = key.key()?;
            let w = parse_width(&width.width)?;
            let v = dynamical_degree(&k, &w)?;
            let (lo, hi) = (format_rational(v.lo()), format_rational(v.hi()));
            let dec = v.to_decimal(decimals(&w));
            match format {
                Format::Json => json_text(&json!({
                    "d": k.d(), "tuple": k.tuple(), "lo": lo, "hi": hi, "decimal": dec,
                })),
                Format::Csv => csv_of(
                    &["d", "tuple", "lo", "hi", "decimal"],
                    &[vec![k.d().to_string(), join_tuple(k.tuple()), lo, hi, dec]],
                ),
            }
        }
        Command::Census(k) => {
            let c = unit_circle_census(&auxiliary_polynomial(&k.orbit_data()?))?;
            match format {
                Format::Json => json_text(&serde_json::to_value(c).map_err(Error::from)?),
                Format::Csv => csv_of(
                    &["inside", "on", "outside"],
                    &[vec![
                        c.inside.to_string(),
                        c.on.to_string(),
                        c.outside.to_string(),
                    ]],
                ),
            }
        }
        Command::Classify { key, width } => {
            let k = key.key()?;
            let w = parse_width(&width.width)?;
            let e = classified(cache.as_ref(), &k)?;
            let row = Row::new(&e, &w);
            match format {
                Format::Json => {
                    let mut v = serde_json::to_value(&row).map_err(Error::from)?;
                    v["cyclotomic_orders"] = json!(e.cyclotomic_orders);
                    v["residual"] = json!(PolyDocument::from_poly(&e.residual).coeffs);
                    v["residual_census"] =
                        serde_json::to_value(e.residual_census).map_err(Error::from)?;
                    json_text(&v)
                }
                Format::Csv => emit_table(&[row], Format::Csv),
            }
        }
        Command::Weyl(k) => {
            let j = jonquieres_matrix(&k.orbit_data()?)?;
            let m = is_weyl_member(&j)?;
            match format {
                Format::Json => json_text(&m.to_json()),
                Format::Csv => {
                    let steps = m.to_json()["steps"].as_array().cloned().unwrap_or_default();
                    let rows: Vec<Vec<String>> = steps
                        .iter()
                        .enumerate()
                        .map(|(i, s)| {
                            vec![
                                i.to_string(),
                                s["side"].as_str().unwrap_or_default().to_string(),
                                s["kind"].as_str().unwrap_or_default().to_string(),
                                s["indices"].to_string(),
                            ]
                        })
                        .collect();
                    csv_of(&["step", "side", "kind", "indices"], &rows)
                }
            }
        }
        Command::Spectrum {
            d,
            m,
            limit,
            bound,
            reading,
            width,
        } => {
            let w = parse_width(&width.width)?;
            let reading = match reading {
                Reading::TruncateDecrement => LevelReading::TruncateDecrement,
                Reading::DecrementLast => LevelReading::DecrementLast,
            };
            let tuples = enumerate_level_tuples(*d, *m, *limit, *bound, reading)?;
            let mut rows = Vec::with_capacity(tuples.len());
            for t in tuples {
                let e = classified(cache.as_ref(), &SpectrumKey::new(*d, t)?)?;
                rows.push(Row::new(&e, &w));
            }
            emit_table(&rows, format)
        }
        Command::Realize(k) => {
            let report = verify_realization(&k.key()?)?;
            match format {
                Format::Json => json_text(&serde_json::to_value(&report).map_err(Error::from)?),
                Format::Csv => {
                    let mut rows = Vec::new();
                    for g in &report.groups {
                        for c in &g.checks {
                            let expect = serde_json::to_value(c.expect).map_err(Error::from)?;
                            rows.push(vec![
                                g.name.clone(),
                                c.name.clone(),
                                expect.as_str().unwrap_or_default().to_string(),
                                c.pass.to_string(),
                            ]);
                        }
                    }
                    csv_of(&["group", "check", "expect", "pass"], &rows)
                }
            }
        }
        Command::Cache { action } => {
            let cache = cache
                .ok_or_else(|| usage("no cache path: pass --cache or set SALEMFORGE_CACHE"))?;
            match action {
                CacheAction::List { width } => {
                    let w = parse_width(&width.width)?;
                    let mut entries = cache.all()?;
                    entries.sort_by(|a, b| {
                        a.key
                            .d()
                            .cmp(&b.key.d())
                            .then_with(|| a.value.compare(&b.value))
                    });
                    let rows: Vec<Row> = entries.iter().map(|e| Row::new(e, &w)).collect();
                    emit_table(&rows, format)
                }
                CacheAction::Get { key, width } => {
                    let w = parse_width(&width.width)?;
                    let k = key.key()?;
                    let e = cache
                        .get(&k)?
                        .ok_or_else(|| usage(format!("{k} is not in the cache")))?;
                    emit_table(&[Row::new(&e, &w)], format)
                }
            }
        }
    };
    Ok(out)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tuples_parse() {
        assert_eq!(parse_tuple("").ok(), Some(vec![]));
        assert_eq!(parse_tuple("2,3, 4").ok(), Some(vec![2, 3, 4]));
        assert_eq!(parse_tuple("(2,3)").ok(), Some(vec![2, 3]));
        assert_eq!(parse_tuple("2,x").err().map(|f| f.code), Some(2));
    }

    #[test]
    fn widths_parse() {
        assert_eq!(
            parse_width("1e-9").ok(),
            Some(BigRational::new(1.into(), 1_000_000_000.into()))
        );
        assert_eq!(parse_width("0").err().map(|f| f.code), Some(2));
        assert_eq!(
            decimals(&BigRational::new(1.into(), 1_000_000_000.into())),
            9
        );
        assert_eq!(decimals(&BigRational::new(1.into(), 3.into())), 1);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(Failure::from(Error::InvalidKey("x".into())).code, 2);
        assert_eq!(
            Failure::from(Error::CensusContradiction("x".into())).code,
            1
        );
        assert_eq!(Failure::from(Error::StructureViolation("x".into())).code, 1);
    }
}
