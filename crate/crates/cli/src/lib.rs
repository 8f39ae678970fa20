//! Front end for the `smithcube` binary. [`run`] takes the argument list and
//! returns the exit code with everything destined for stdout and stderr, so
//! the whole command surface can be driven in-process.
//!
//! Exit codes: 0 success, 1 usage or parameter error, 2 a verification or
//! cross-check mismatch.

mod args;
mod report;

use std::ffi::OsString;
use std::path::Path;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::Parser;
use serde_json::{json, Value};
use smithcube::bigmat::text::write_sparse;
use smithcube::canonical::{build_e, canonical_block, verify_bier, wilson_form};
use smithcube::cube::{
    adjacency_capped, blocks, laplacian, lower_block, monomial_adjacency_capped, upper_block,
    verify_conjugacy, zeta_matrix_capped,
};
use smithcube::reduction::{
    build_b, laplacian_partial_check, smith_group, smith_group_oracle, smith_group_via_reduction,
    verify_conjecture, SmithGroupSummary, DEFAULT_ORACLE_CAP,
};
use smithcube::subsets::inclusion_matrix;
use smithcube::{snf, Error, IntMatrix};

pub use args::{Cli, Command, Format, Kind, Method, ReportFormat, Target};
use report::{entries, factors, num, pairs, render, summary_brief};

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_MISMATCH: u8 = 2;

/// Environment variable overriding the default oracle cap.
pub const CAP_ENV: &str = "SMITHCUBE_CAP";

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Outcome {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn usage(msg: impl std::fmt::Display) -> Self {
        Outcome {
            code: EXIT_USAGE,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        }
    }
}

enum Failure {
    Usage(String),
    Mismatch(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Structure(msg) => Failure::Mismatch(msg),
            other => Failure::Usage(other.to_string()),
        }
    }
}

/// Oracle cap: the `--cap` flag, then `SMITHCUBE_CAP`, then 10.
pub fn resolve_cap(flag: Option<u32>, env: Option<&str>) -> Result<u32, String> {
    if let Some(c) = flag {
        return Ok(c);
    }
    match env {
        Some(v) => v
            .trim()
            .parse()
            .map_err(|_| format!("{CAP_ENV}={v:?} is not a non-negative integer")),
        None => Ok(DEFAULT_ORACLE_CAP),
    }
}

pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome {
                    code: EXIT_OK,
                    stdout: text,
                    stderr: String::new(),
                },
                _ => Outcome {
                    code: EXIT_USAGE,
                    stdout: String::new(),
                    stderr: text,
                },
            };
        }
    };
    let env_cap = std::env::var(CAP_ENV).ok();
    let (result, out) = match cli.command {
        Command::SmithGroup {
            n,
            method,
            format,
            cap,
            out,
        } => (
            resolve_cap(cap, env_cap.as_deref())
                .map_err(Failure::Usage)
                .and_then(|cap| cmd_smith_group(n, method, format, cap)),
            out,
        ),
        Command::Verify {
            target,
            n,
            format,
            cap,
            out,
        } => (
            resolve_cap(cap, env_cap.as_deref())
                .map_err(Failure::Usage)
                .and_then(|cap| cmd_verify(target, n, format, cap)),
            out,
        ),
        Command::Matrix { kind, params, out } => (cmd_matrix(kind, &params), out),
    };
    let outcome = match result {
        Ok(o) => o,
        Err(Failure::Usage(msg)) => return Outcome::usage(msg),
        Err(Failure::Mismatch(msg)) => {
            return Outcome {
                code: EXIT_MISMATCH,
                stdout: String::new(),
                stderr: format!("mismatch: {msg}\n"),
            }
        }
    };
    match out {
        Some(path) => write_out(&path, outcome),
        None => outcome,
    }
}

fn write_out(path: &Path, outcome: Outcome) -> Outcome {
    match std::fs::write(path, &outcome.stdout) {
        Ok(()) => Outcome {
            stdout: String::new(),
            ..outcome
        },
        Err(e) => Outcome::usage(format!("cannot write {}: {e}", path.display())),
    }
}

fn status_code(ok: bool) -> (u8, &'static str) {
    if ok {
        (EXIT_OK, "ok")
    } else {
        (EXIT_MISMATCH, "mismatch")
    }
}

fn oracle_limit(n: u32, cap: u32) -> Result<(), Failure> {
    if n > cap {
        return Err(Failure::Usage(format!(
            "generic elimination needs n <= {cap} (got {n}); raise --cap or {CAP_ENV}"
        )));
    }
    Ok(())
}

fn cmd_smith_group(n: u32, method: Method, format: Format, cap: u32) -> Result<Outcome, Failure> {
    let start = Instant::now();
    if n == 0 {
        return Err(Failure::Usage("n must be at least 1".into()));
    }
    let mut results: Vec<(&str, SmithGroupSummary)> = Vec::new();
    let mut skipped: Vec<(&str, String)> = Vec::new();
    match method {
        Method::Closed => results.push(("closed", smith_group(n)?)),
        Method::Oracle => {
            oracle_limit(n, cap)?;
            results.push(("oracle", smith_group_oracle(n, cap)?));
        }
        Method::Reduction => {
            if !n.is_multiple_of(2) {
                return Err(Failure::Usage(format!(
                    "the reduction method needs even n (got {n}); odd n has no 2-local part"
                )));
            }
            results.push(("reduction", smith_group_via_reduction(n)?));
        }
        Method::All => {
            results.push(("closed", smith_group(n)?));
            if n <= cap {
                results.push(("oracle", smith_group_oracle(n, cap)?));
            } else {
                skipped.push(("oracle", format!("n = {n} exceeds cap {cap}")));
            }
            if n.is_multiple_of(2) {
                results.push(("reduction", smith_group_via_reduction(n)?));
            } else {
                skipped.push(("reduction", "odd n".to_string()));
            }
        }
    }
    let primary = &results[0].1;
    let agree = results.iter().all(|(_, s)| s.same_group(primary));
    let (code, status) = status_code(agree);
    let mut stderr = String::new();
    if !agree {
        for (name, s) in &results {
            stderr.push_str(&format!("{name}: free_rank {} {}\n", s.free_rank, s.invariant_factors));
        }
    }
    let stdout = match format {
        Format::Text => primary.to_text(),
        Format::Csv => report::csv(primary),
        Format::Json => {
            let mut doc = json!({
                "command": "smith-group",
                "params": {"n": n, "method": method.name(), "cap": cap},
                "status": status,
                "free_rank": num(&primary.free_rank),
                "entries": entries(&primary.nonzero),
                "invariant_factors": factors(&primary.invariant_factors),
                "elapsed_ms": start.elapsed().as_millis() as u64,
            });
            if method == Method::All {
                doc["compared"] = results.iter().map(|(m, s)| summary_brief(m, s)).collect();
                if !skipped.is_empty() {
                    doc["skipped"] = skipped
                        .iter()
                        .map(|(m, why)| json!({"method": m, "reason": why}))
                        .collect();
                }
            }
            render(&doc)
        }
    };
    Ok(Outcome {
        code,
        stdout,
        stderr,
    })
}

fn within_cap(target: Target, n: u32, cap: u32) -> Result<(), Failure> {
    if n > cap {
        return Err(Failure::Usage(format!(
            "verify {} needs n <= {cap} (got {n}); raise --cap or {CAP_ENV}",
            target.name()
        )));
    }
    Ok(())
}

fn verify_bier_all(n: u32) -> Result<(bool, Value), Failure> {
    let nn = n as usize;
    let mut failures = Vec::new();
    let mut checked = 0u64;
    for k in 0..=nn / 2 {
        if !build_e(nn, k)?.matrix.is_unimodular()? {
            failures.push(json!({"t": Value::Null, "k": k, "check": "unimodular"}));
        }
        for t in 0..=k {
            checked += 1;
            if !verify_bier(nn, t, k)? {
                failures.push(json!({"t": t, "k": k, "check": "bier"}));
            }
        }
    }
    Ok((failures.is_empty(), json!({"pairs_checked": checked, "failures": failures})))
}

fn verify_half(n: u32) -> Result<(bool, Value), Failure> {
    let pair = blocks(n)?;
    let m_snf = snf(&pair.upper);
    let nt_snf = snf(&pair.lower.transpose());
    let snf_equal = m_snf == nt_snf;
    let sign_flip_equal = pair.sign_flipped() == pair.upper;
    Ok((
        snf_equal && sign_flip_equal,
        json!({
            "snf_equal": snf_equal,
            "sign_flip_equal": sign_flip_equal,
            "m": factors(&m_snf),
            "n_transpose": factors(&nt_snf),
        }),
    ))
}

fn cmd_verify(target: Target, n: u32, format: ReportFormat, cap: u32) -> Result<Outcome, Failure> {
    let start = Instant::now();
    if n == 0 {
        return Err(Failure::Usage("n must be at least 1".into()));
    }
    let (ok, details) = match target {
        Target::Bier => {
            within_cap(target, n, cap)?;
            verify_bier_all(n)?
        }
        Target::Conjecture => {
            let c = verify_conjecture(n, cap)?;
            (
                c.holds(),
                json!({
                    "used_oracle": c.used_oracle,
                    "divisors": pairs(c.divisors.iter(), "exponent", "multiplicity"),
                    "eigenvalue_counts": pairs(c.eigenvalue_counts.iter(), "exponent", "multiplicity"),
                }),
            )
        }
        Target::Half => {
            within_cap(target, n, cap)?;
            verify_half(n)?
        }
        Target::Conjugacy => {
            within_cap(target, n, cap)?;
            let holds = verify_conjugacy(n)?;
            (holds, json!({ "holds": holds }))
        }
        Target::Laplacian => {
            let r = laplacian_partial_check(n, cap)?;
            let rows: Vec<Value> = r
                .rows
                .iter()
                .map(|(i, a, l)| json!({"exponent": i, "adjacency": num(a), "laplacian": num(l)}))
                .collect();
            (r.holds(), json!({"s": r.s, "rows": rows}))
        }
    };
    let (code, status) = status_code(ok);
    let stdout = match format {
        ReportFormat::Json => render(&json!({
            "command": "verify",
            "params": {"target": target.name(), "n": n, "cap": cap},
            "status": status,
            "details": details,
            "elapsed_ms": start.elapsed().as_millis() as u64,
        })),
        ReportFormat::Text => format!("verify {} {n}: {status}\n{}\n", target.name(), render(&details).trim_end()),
    };
    Ok(Outcome {
        code,
        stdout,
        stderr: String::new(),
    })
}

fn expect_params<const N: usize>(kind: Kind, params: &[u32], names: &str) -> Result<[u32; N], Failure> {
    params.try_into().map_err(|_| {
        Failure::Usage(format!(
            "matrix {kind:?} takes {N} parameter(s) ({names}), got {}",
            params.len()
        ))
    })
}

fn build_matrix(kind: Kind, params: &[u32]) -> Result<IntMatrix, Failure> {
    let cap = smithcube::cube::DEFAULT_SIZE_CAP;
    Ok(match kind {
        Kind::Adjacency => {
            let [n] = expect_params(kind, params, "n")?;
            adjacency_capped(n, cap)?.matrix
        }
        Kind::Monomial => {
            let [n] = expect_params(kind, params, "n")?;
            monomial_adjacency_capped(n, cap)?.matrix
        }
        Kind::Zeta => {
            let [n] = expect_params(kind, params, "n")?;
            zeta_matrix_capped(n, cap)?
        }
        Kind::Laplacian => {
            let [n] = expect_params(kind, params, "n")?;
            laplacian(n)?
        }
        Kind::M => {
            let [n] = expect_params(kind, params, "n")?;
            upper_block(n)?
        }
        Kind::N => {
            let [n] = expect_params(kind, params, "n")?;
            lower_block(n)?
        }
        Kind::W => {
            let [n, t, k] = expect_params(kind, params, "n t k")?;
            inclusion_matrix(n as usize, t as usize, k as usize)?
        }
        Kind::E => {
            let [n, k] = expect_params(kind, params, "n k")?;
            build_e(n as usize, k as usize)?.matrix
        }
        Kind::EBlock => {
            let [n, k] = expect_params(kind, params, "n k")?;
            canonical_block(n as usize, k as usize)?
        }
        Kind::D => {
            let [n, t, k] = expect_params(kind, params, "n t k")?;
            wilson_form(n as usize, t as usize, k as usize)?.matrix
        }
        Kind::B => {
            let [n] = expect_params(kind, params, "n")?;
            build_b(n)?.b
        }
        Kind::BPrime => {
            let [n] = expect_params(kind, params, "n")?;
            build_b(n)?.b_prime
        }
    })
}

fn cmd_matrix(kind: Kind, params: &[u32]) -> Result<Outcome, Failure> {
    Ok(Outcome {
        code: EXIT_OK,
        stdout: write_sparse(&build_matrix(kind, params)?),
        stderr: String::new(),
    })
}
