//! Command-line front end for `fuchsian-core`.
//!
//! Every count is emitted as a decimal string; JSON output is built from
//! `serde_json::Value` with sorted keys, so it re-serializes byte-for-byte.

use std::collections::BTreeMap;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use fuchsian_core::congruence::{
    count_explicit, count_ramanujan, prime_local_data, CongruenceInstance, SolvabilityVerdict, Term,
};
use fuchsian_core::fuchsian::{
    count_epi_s, count_hom_s, ep_form_admissible, epi_from_hom_inversion, harvey_admissible,
    AdmissibilityReport, FuchsianSignature,
};
use fuchsian_core::oracle::{self, DEFAULT_BUDGET};
use fuchsian_core::{arith, parse, Error};

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_DOMAIN: u8 = 2;
pub const EXIT_MISMATCH: u8 = 3;
pub const EXIT_BUDGET: u8 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "fuchsian",
    version,
    about = "Exact counts of surface-kernel maps onto cyclic groups"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Cross-check the result against independent routes and brute force.
    #[arg(long, global = true)]
    pub verify: bool,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Maximum enumeration size for brute-force checks.
    #[arg(long, global = true, env = "FUCHSIAN_BUDGET")]
    pub budget: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Args)]
pub struct SignatureArgs {
    /// Signature in the form "(g;n1,n2,...)".
    #[arg(long, conflicts_with_all = ["genus", "periods"], required_unless_present = "genus")]
    pub signature: Option<String>,

    #[arg(long)]
    pub genus: Option<u32>,

    /// Comma-separated periods, used with --genus.
    #[arg(long, requires = "genus", allow_hyphen_values = true)]
    pub periods: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Count surface-kernel epimorphisms onto Z_n.
    Epi {
        #[command(flatten)]
        signature: SignatureArgs,
        #[arg(long, allow_hyphen_values = true)]
        n: i128,
    },
    /// Count surface-kernel homomorphisms into Z_d.
    Hom {
        #[command(flatten)]
        signature: SignatureArgs,
        #[arg(long, allow_hyphen_values = true)]
        d: i128,
    },
    /// Evaluate both sets of admissibility conditions for Z_n.
    Harvey {
        #[command(flatten)]
        signature: SignatureArgs,
        #[arg(long, allow_hyphen_values = true)]
        n: i128,
    },
    /// Count solutions of a1 x1 + ... + ak xk = b (mod n) with gcd(xi, n) = ti.
    Congruence {
        #[arg(long, allow_hyphen_values = true)]
        n: i128,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        b: i64,
        /// Terms "a1:t1,a2:t2,...".
        #[arg(long, default_value = "", allow_hyphen_values = true)]
        terms: String,
    },
    /// Evaluate the Ramanujan sum c_n(m).
    Ramanujan {
        #[arg(long, allow_hyphen_values = true)]
        n: i128,
        #[arg(long, allow_hyphen_values = true)]
        m: i64,
    },
    /// Sweep all signatures and targets in a range, one JSON line each.
    Sweep {
        #[arg(long, default_value_t = 1)]
        max_genus: u32,
        #[arg(long, default_value_t = 3)]
        max_k: usize,
        #[arg(long, default_value_t = 2)]
        min_period: u64,
        #[arg(long, default_value_t = 8)]
        max_period: u64,
        #[arg(long, default_value_t = 24)]
        max_n: u64,
    },
}

/// A failure that ends the run without output on stdout.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        let code = match &err {
            Error::Parse(_) => EXIT_USAGE,
            Error::Domain(_) | Error::Constraint(_) | Error::Overflow(_) => EXIT_DOMAIN,
            Error::BudgetExceeded { .. } => EXIT_BUDGET,
            Error::NonIntegral { .. } | Error::Inconsistent { .. } | Error::Residual { .. } => {
                EXIT_MISMATCH
            }
        };
        CliError {
            code,
            message: err.to_string(),
        }
    }
}

/// Rendered output lines and the exit code to finish with.
#[derive(Debug)]
pub struct Output {
    pub lines: Vec<String>,
    pub exit_code: u8,
}

fn positive(value: i128, name: &str) -> Result<u64, Error> {
    u64::try_from(value)
        .ok()
        .filter(|&v| v >= 1)
        .ok_or_else(|| {
            Error::Domain(format!(
                "--{name} must be a positive 64-bit integer, got {value}"
            ))
        })
}

fn resolve_signature(args: &SignatureArgs) -> Result<FuchsianSignature, Error> {
    match (&args.signature, args.genus) {
        (Some(text), _) => parse::parse_signature(text),
        (None, Some(genus)) => {
            parse::signature_from_parts(genus, args.periods.as_deref().unwrap_or(""))
        }
        (None, None) => Err(Error::Domain("a signature is required".into())),
    }
}

fn e_p_json(e_p: &BTreeMap<u64, usize>) -> Value {
    Value::Object(e_p.iter().map(|(p, e)| (p.to_string(), json!(e))).collect())
}

fn signature_json(sig: &FuchsianSignature) -> Value {
    json!({
        "signature": sig.to_string(),
        "genus": sig.genus(),
        "periods": sig.periods().iter().map(u64::to_string).collect::<Vec<_>>(),
        "period_lcm": sig.period_lcm().to_string(),
        "hyperbolic": sig.is_hyperbolic(),
    })
}

fn merge(target: &mut Value, extra: Value) {
    if let (Value::Object(t), Value::Object(e)) = (target, extra) {
        t.extend(e);
    }
}

fn report_json(report: &AdmissibilityReport) -> Value {
    json!({
        "harvey": {
            "admissible": report.harvey_admissible(),
            "failed": report.harvey_failures.iter().map(|c| c.label()).collect::<Vec<_>>(),
        },
        "ep_form": {
            "admissible": report.ep_admissible(),
            "failed": report.ep_failures.iter().map(|c| c.label()).collect::<Vec<_>>(),
        },
    })
}

/// Outcome of one cross-check.
enum Check {
    Agree,
    Disagree(String),
    /// The brute-force oracle declined to run.
    OverBudget,
}

impl Check {
    fn compare(
        label: &str,
        expected: &BigUint,
        other: Result<BigUint, Error>,
    ) -> Result<Check, Error> {
        match other {
            Ok(v) if &v == expected => Ok(Check::Agree),
            Ok(v) => Ok(Check::Disagree(format!("{label} gave {v}"))),
            Err(Error::BudgetExceeded { .. }) => Ok(Check::OverBudget),
            Err(e) => Err(e),
        }
    }

    fn label(&self) -> &'static str {
        match self {
            Check::Agree => "agree",
            Check::Disagree(_) => "mismatch",
            Check::OverBudget => "skipped",
        }
    }
}

/// Summarises a list of named checks. Budget refusals are fatal (exit 4)
/// for single commands and recorded as skipped in sweeps.
fn verification_json(checks: &[(&str, Check)]) -> (Value, bool, bool) {
    let mut map = Map::new();
    let mut agree = true;
    let mut over_budget = false;
    for (name, check) in checks {
        map.insert((*name).to_string(), json!(check.label()));
        if let Check::Disagree(detail) = check {
            agree = false;
            map.insert(format!("{name}_detail"), json!(detail));
        }
        over_budget |= matches!(check, Check::OverBudget);
    }
    map.insert("verified".into(), json!(agree));
    (Value::Object(map), agree, over_budget)
}

struct Ctx {
    verify: bool,
    budget: u64,
}

/// Result of one command before rendering.
struct Response {
    body: Value,
    text: Vec<String>,
    mismatch: bool,
    over_budget: bool,
}

impl Response {
    fn new(body: Value, text: Vec<String>) -> Self {
        Response {
            body,
            text,
            mismatch: false,
            over_budget: false,
        }
    }

    fn attach(&mut self, checks: &[(&str, Check)]) {
        let (value, agree, over_budget) = verification_json(checks);
        self.text.push(format!(
            "verification: {}",
            checks
                .iter()
                .map(|(name, c)| format!("{name}={}", c.label()))
                .collect::<Vec<_>>()
                .join(" ")
        ));
        merge(&mut self.body, json!({ "verification": value }));
        self.mismatch |= !agree;
        self.over_budget |= over_budget;
    }
}

fn epi(ctx: &Ctx, sig: &FuchsianSignature, n: u64) -> Result<Response, Error> {
    let start = Instant::now();
    let count = count_epi_s(sig, n)?;
    let elapsed = start.elapsed().as_micros() as u64;
    let e_p = fuchsian_core::fuchsian::e_p_table(sig)?;
    let mut body = json!({
        "command": "epi",
        "n": n.to_string(),
        "count": count.to_string(),
        "e_p": e_p_json(&e_p),
        "elapsed_us": elapsed,
    });
    merge(&mut body, signature_json(sig));
    let text = vec![format!("|Epi_S({sig}, Z_{n})| = {count}")];
    let mut response = Response::new(body, text);
    if ctx.verify {
        let checks = [
            (
                "inversion",
                Check::compare("Möbius inversion", &count, epi_from_hom_inversion(sig, n))?,
            ),
            (
                "oracle",
                Check::compare(
                    "brute force",
                    &count,
                    oracle::brute_epi_s(sig, n, ctx.budget),
                )?,
            ),
        ];
        response.attach(&checks);
    }
    Ok(response)
}

fn hom(ctx: &Ctx, sig: &FuchsianSignature, d: u64) -> Result<Response, Error> {
    let start = Instant::now();
    let count = count_hom_s(sig, d)?;
    let elapsed = start.elapsed().as_micros() as u64;
    let mut body = json!({
        "command": "hom",
        "d": d.to_string(),
        "count": count.to_string(),
        "elapsed_us": elapsed,
    });
    merge(&mut body, signature_json(sig));
    let text = vec![format!("|Hom_S({sig}, Z_{d})| = {count}")];
    let mut response = Response::new(body, text);
    if ctx.verify {
        let via_congruence = if d.is_multiple_of(sig.period_lcm()) {
            let terms = sig.periods().iter().map(|&p| Term::new(1, d / p)).collect();
            let inst = CongruenceInstance::new(d, 0, terms)?;
            count_explicit(&inst).map(|v| BigUint::from(d).pow(2 * sig.genus()) * v.count())
        } else {
            Ok(BigUint::default())
        };
        let checks = [
            (
                "congruence",
                Check::compare("congruence count", &count, via_congruence)?,
            ),
            (
                "oracle",
                Check::compare(
                    "brute force",
                    &count,
                    oracle::brute_hom_s(sig, d, ctx.budget),
                )?,
            ),
        ];
        response.attach(&checks);
    }
    Ok(response)
}

fn harvey(ctx: &Ctx, sig: &FuchsianSignature, n: u64) -> Result<Response, Error> {
    let report = harvey_admissible(sig, n)?;
    let ep = ep_form_admissible(sig, n)?;
    let mut body = json!({
        "command": "harvey",
        "n": n.to_string(),
        "e_p": e_p_json(&report.e_p),
    });
    merge(&mut body, signature_json(sig));
    merge(&mut body, report_json(&report));
    let verdict = |ok: bool| if ok { "admissible" } else { "inadmissible" };
    let failed = |labels: Vec<&str>| {
        if labels.is_empty() {
            String::new()
        } else {
            format!(
                " (failed: {})",
                labels
                    .iter()
                    .map(|l| format!("({l})"))
                    .collect::<Vec<_>>()
                    .join(", ")
            )
        }
    };
    let mut text = vec![
        format!(
            "signature {sig}, n = {n}, hyperbolic: {}",
            sig.is_hyperbolic()
        ),
        format!(
            "Harvey conditions: {}{}",
            verdict(report.harvey_admissible()),
            failed(report.harvey_failures.iter().map(|c| c.label()).collect())
        ),
        format!(
            "e_p conditions: {}{}",
            verdict(ep.admissible),
            failed(ep.ep_failures.iter().map(|c| c.label()).collect())
        ),
    ];
    if report.harvey_admissible() != ep.admissible {
        text.push("note: the two condition sets disagree; this only happens for non-hyperbolic signatures".into());
    }
    let mut response = Response::new(body, text);
    if ctx.verify {
        let count = count_epi_s(sig, n)?;
        let positive = BigUint::from(u8::from(ep.admissible));
        let as_flag = |c: BigUint| BigUint::from(u8::from(c != BigUint::default()));
        let mut checks = vec![
            (
                "count_positive",
                Check::compare("count positivity", &positive, Ok(as_flag(count)))?,
            ),
            (
                "oracle_positive",
                Check::compare(
                    "brute-force positivity",
                    &positive,
                    oracle::brute_epi_s(sig, n, ctx.budget).map(as_flag),
                )?,
            ),
        ];
        if sig.is_hyperbolic() {
            let harvey_flag = BigUint::from(u8::from(report.harvey_admissible()));
            checks.push((
                "harvey_matches",
                Check::compare("Harvey verdict", &positive, Ok(harvey_flag))?,
            ));
        }
        response.attach(&checks);
    }
    Ok(response)
}

fn verdict_json(verdict: &SolvabilityVerdict) -> Value {
    match verdict {
        SolvabilityVerdict::Count(c) => json!({ "kind": "count", "count": c.to_string() }),
        SolvabilityVerdict::NoSolution { clause, prime } => json!({
            "kind": "no_solution",
            "clause": clause.label(),
            "prime": prime.to_string(),
        }),
        SolvabilityVerdict::ZeroCoefficientsInconsistent => {
            json!({ "kind": "zero_coefficients_inconsistent" })
        }
    }
}

fn congruence(ctx: &Ctx, n: u64, b: i64, terms: Vec<Term>) -> Result<Response, Error> {
    let inst = CongruenceInstance::new(n, b, terms)?;
    let start = Instant::now();
    let verdict = count_explicit(&inst)?;
    let elapsed = start.elapsed().as_micros() as u64;
    let count = verdict.count();
    let mut body = json!({
        "command": "congruence",
        "n": n.to_string(),
        "b": b.to_string(),
        "terms": parse::format_terms(inst.terms()),
        "count": count.to_string(),
        "verdict": verdict_json(&verdict),
        "elapsed_us": elapsed,
    });
    let mut text = vec![format!(
        "N_{n}({b}; {}) = {count}",
        if inst.terms().is_empty() {
            "-".to_string()
        } else {
            parse::format_terms(inst.terms())
        }
    )];
    match &verdict {
        SolvabilityVerdict::NoSolution { clause, prime } => {
            text.push(format!("no solutions: clause {clause} at p = {prime}"))
        }
        SolvabilityVerdict::ZeroCoefficientsInconsistent => {
            text.push("no solutions: all coefficients vanish and b is not 0 mod n".into())
        }
        SolvabilityVerdict::Count(_) => {}
    }
    if !inst.all_coefficients_zero() {
        let data: Vec<Value> = prime_local_data(&inst)?
            .iter()
            .map(|d| json!({ "p": d.prime.to_string(), "r": d.r, "m": d.m, "e": d.e }))
            .collect();
        merge(&mut body, json!({ "local_data": data }));
    }
    let mut response = Response::new(body, text);
    if ctx.verify {
        let mut checks = Vec::new();
        if !inst.terms().is_empty() {
            checks.push((
                "ramanujan",
                Check::compare("Ramanujan-sum formula", &count, count_ramanujan(&inst))?,
            ));
        }
        checks.push((
            "oracle",
            Check::compare(
                "enumeration",
                &count,
                oracle::enumerate_congruence(&inst, ctx.budget).map(BigUint::from),
            )?,
        ));
        response.attach(&checks);
    }
    Ok(response)
}

fn ramanujan(ctx: &Ctx, n: u64, m: i64) -> Result<Response, Error> {
    let value = arith::ramanujan_sum(n, m)?;
    let body = json!({
        "command": "ramanujan",
        "n": n.to_string(),
        "m": m.to_string(),
        "value": value.to_string(),
    });
    let mut response = Response::new(body, vec![format!("c_{n}({m}) = {value}")]);
    if ctx.verify {
        let (float_value, residual) = oracle::ramanujan_float(n, m)?;
        let agree = float_value as i128 == value;
        let mut verification = json!({
            "oracle": if agree { "agree" } else { "mismatch" },
            "residual": format!("{residual:e}"),
            "verified": agree,
        });
        if !agree {
            merge(
                &mut verification,
                json!({ "oracle_detail": format!("exponential sum gave {float_value}") }),
            );
        }
        response.text.push(format!(
            "verification: oracle={} residual={residual:e}",
            if agree { "agree" } else { "mismatch" }
        ));
        merge(&mut response.body, json!({ "verification": verification }));
        response.mismatch = !agree;
    }
    Ok(response)
}

fn period_multisets(max_k: usize, lo: u64, hi: u64) -> Vec<Vec<u64>> {
    let mut out = vec![vec![]];
    let mut frontier: Vec<Vec<u64>> = vec![vec![]];
    for _ in 0..max_k {
        let next: Vec<Vec<u64>> = frontier
            .iter()
            .flat_map(|prefix| {
                let start = prefix.last().copied().unwrap_or(lo);
                (start..=hi).map(move |p| {
                    let mut v = prefix.clone();
                    v.push(p);
                    v
                })
            })
            .collect();
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

fn sweep_record(ctx: &Ctx, sig: &FuchsianSignature, n: u64) -> Result<Response, Error> {
    let count = count_epi_s(sig, n)?;
    let report = harvey_admissible(sig, n)?;
    let mut body = json!({
        "n": n.to_string(),
        "count": count.to_string(),
        "e_p": e_p_json(&report.e_p),
    });
    merge(&mut body, signature_json(sig));
    merge(&mut body, report_json(&report));
    let text = vec![format!(
        "{sig}\t{n}\t{count}\tharvey={}\tep_form={}",
        report.harvey_admissible(),
        report.ep_admissible()
    )];
    let mut response = Response::new(body, text);
    if ctx.verify {
        let checks = [
            (
                "inversion",
                Check::compare("Möbius inversion", &count, epi_from_hom_inversion(sig, n))?,
            ),
            (
                "oracle",
                Check::compare(
                    "brute force",
                    &count,
                    oracle::brute_epi_s(sig, n, ctx.budget),
                )?,
            ),
        ];
        response.attach(&checks);
    }
    Ok(response)
}

fn sweep(
    ctx: &Ctx,
    max_genus: u32,
    max_k: usize,
    min_period: u64,
    max_period: u64,
    max_n: u64,
) -> Result<Vec<Response>, Error> {
    if min_period < 2 || max_n == 0 {
        return Err(Error::Domain(
            "sweep needs --min-period >= 2 and --max-n >= 1".into(),
        ));
    }
    let mut cases = Vec::new();
    for genus in 0..=max_genus {
        for periods in period_multisets(max_k, min_period, max_period) {
            let sig = FuchsianSignature::new(genus, periods)?;
            for n in 1..=max_n {
                cases.push((sig.clone(), n));
            }
        }
    }
    cases
        .par_iter()
        .map(|(sig, n)| sweep_record(ctx, sig, *n))
        .collect()
}

fn render(format: Format, response: &Response) -> Vec<String> {
    match format {
        Format::Json => vec![serde_json::to_string(&response.body).expect("JSON values serialize")],
        Format::Text => response.text.clone(),
    }
}

fn finish(
    format: Format,
    responses: &[Response],
    over_budget_fatal: bool,
) -> Result<Output, CliError> {
    if over_budget_fatal && responses.iter().any(|r| r.over_budget) {
        return Err(CliError {
            code: EXIT_BUDGET,
            message: "oracle budget exceeded; raise --budget or FUCHSIAN_BUDGET".into(),
        });
    }
    let lines = responses.iter().flat_map(|r| render(format, r)).collect();
    let exit_code = if responses.iter().any(|r| r.mismatch) {
        EXIT_MISMATCH
    } else {
        EXIT_OK
    };
    Ok(Output { lines, exit_code })
}

/// Executes a parsed command line.
pub fn run(cli: &Cli) -> Result<Output, CliError> {
    let ctx = Ctx {
        verify: cli.verify,
        budget: cli.budget.unwrap_or(DEFAULT_BUDGET),
    };
    let single = |r: Result<Response, Error>| -> Result<Output, CliError> {
        finish(cli.format, &[r?], true)
    };
    match &cli.command {
        Command::Epi { signature, n } => {
            single(resolve_signature(signature).and_then(|s| epi(&ctx, &s, positive(*n, "n")?)))
        }
        Command::Hom { signature, d } => {
            single(resolve_signature(signature).and_then(|s| hom(&ctx, &s, positive(*d, "d")?)))
        }
        Command::Harvey { signature, n } => {
            single(resolve_signature(signature).and_then(|s| harvey(&ctx, &s, positive(*n, "n")?)))
        }
        Command::Congruence { n, b, terms } => single(
            parse::parse_terms(terms).and_then(|t| congruence(&ctx, positive(*n, "n")?, *b, t)),
        ),
        Command::Ramanujan { n, m } => {
            single(positive(*n, "n").and_then(|n| ramanujan(&ctx, n, *m)))
        }
        Command::Sweep {
            max_genus,
            max_k,
            min_period,
            max_period,
            max_n,
        } => {
            let responses = sweep(&ctx, *max_genus, *max_k, *min_period, *max_period, *max_n)?;
            finish(cli.format, &responses, false)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multisets_are_sorted_and_complete() {
        let sets = period_multisets(2, 2, 4);
        // empty, 3 singletons, 6 pairs
        assert_eq!(sets.len(), 10);
        assert!(sets.iter().all(|s| s.windows(2).all(|w| w[0] <= w[1])));
    }

    #[test]
    fn positive_rejects_out_of_range() {
        assert!(positive(0, "n").is_err());
        assert!(positive(-3, "n").is_err());
        assert!(positive(1 << 64, "n").is_err());
        assert_eq!(positive(u64::MAX as i128, "n").unwrap(), u64::MAX);
    }

    #[test]
    fn error_codes() {
        assert_eq!(
            CliError::from(Error::Domain(String::new())).code,
            EXIT_DOMAIN
        );
        assert_eq!(
            CliError::from(Error::BudgetExceeded {
                needed: "9".into(),
                budget: 1
            })
            .code,
            EXIT_BUDGET
        );
        let parse = parse::parse_terms("x").unwrap_err();
        assert_eq!(CliError::from(parse).code, EXIT_USAGE);
    }
}
