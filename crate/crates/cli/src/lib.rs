//! The `theta` command-line front end.
//!
//! [`run`] parses arguments, dispatches to `theta_core` and returns the exit
//! code with the rendered document, so tests never spawn a process.

mod output;
mod parse;

use std::ffi::OsString;
use std::fmt;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use theta_core::conservation::{companion_quotient, enumerate_q, rallis_parameters, Ledger};
use theta_core::dual_pairs::ClassicalSignature;
use theta_core::formed_spaces::{
    adjacent, enumerate_towers, DiscChar, Field, Parity, RealTowers, TowerClass, TowerFamily, WittTower,
};
use theta_core::growth::{doubling_signatures, kappa_and_nu_pair, lift_bound, nu_profile, plan_chain, psi_eval};
use theta_core::moment_descent::{check_theta_lift, classify_descent, descend, induce_orbit, lift_orbit_support};
use theta_core::orbits::{enumerate_complex_orbits, enumerate_tableaux, AdmissibleTableau, DEFAULT_CAP};
use theta_core::scalar::parse_scalar;
use theta_core::{BigRational, ErrorClass, NuQ, Rational, ThetaError};

use output::{envelope, pretty, Report};

/// Version stamped into every output document.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "theta", version, about = "Exact combinatorics for the local theta correspondence")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Largest dimension any enumeration may reach.
    #[arg(long, global = true, default_value_t = DEFAULT_CAP)]
    cap: u32,
    /// Write the document to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List the Witt towers of one class.
    Towers {
        /// R, C or NA.
        #[arg(long, default_value = "R")]
        field: String,
        #[arg(long, default_value_t = 0)]
        eps: u8,
        /// Real class index in 0..4; defaults to eps.
        #[arg(long)]
        alpha: Option<u8>,
        /// Non-archimedean discriminant character: triv or nontriv.
        #[arg(long, default_value = "triv")]
        chi: String,
        /// Real towers are listed up to this |k|.
        #[arg(long, default_value_t = 8)]
        max_abs: u32,
    },
    /// Constants of a pair of classical signatures, e.g. --s C,2,2 --s-prime D,3,3.
    Pairs {
        #[arg(long)]
        s: String,
        #[arg(long = "s-prime")]
        s_prime: String,
    },
    /// Nilpotent orbit enumeration.
    Orbits {
        #[command(subcommand)]
        action: OrbitsAction,
    },
    /// Moment-map descent of a real orbit given as tableau JSON (inline or a file).
    Descend {
        #[arg(long)]
        orbit: String,
        /// Target space, e.g. O(2,1) or Sp(4).
        #[arg(long)]
        target: String,
    },
    /// Check theta lift (--to-dim) or induced orbit (--induce) of a complex orbit like orth:3.
    Lift {
        #[arg(long)]
        orbit: String,
        #[arg(long, conflicts_with = "induce", required_unless_present = "induce")]
        to_dim: Option<u32>,
        /// Signature s'' of the induced orbit, e.g. C,4,4.
        #[arg(long)]
        induce: Option<String>,
    },
    /// Real orbits of a complex type on V' descending exactly to a tableau.
    Support {
        /// Tableau JSON (inline or a file).
        #[arg(long)]
        orbit: String,
        /// Complex orbit on V', e.g. sp:4.
        #[arg(long)]
        lift: String,
        /// The space V', e.g. Sp(4).
        #[arg(long)]
        target: String,
    },
    /// First-occurrence ledgers.
    Ledger {
        #[command(subcommand)]
        action: LedgerAction,
    },
    /// Doubling signatures and parameters.
    Doubling {
        #[command(subcommand)]
        action: DoublingAction,
    },
    /// Growth thresholds along a lifting chain.
    Plan {
        #[arg(long)]
        start: String,
        /// Initial bound: an integer, a fraction, or -inf.
        #[arg(long, allow_hyphen_values = true)]
        nu: String,
        /// Next signature of the chain; repeat for each step.
        #[arg(long, required = true)]
        via: Vec<String>,
    },
    /// The function Psi on a multiset of eigenvalues, e.g. psi 4 1/4.
    Psi {
        #[arg(required = true, allow_negative_numbers = true)]
        eigenvalues: Vec<String>,
    },
}

#[derive(Debug, Subcommand)]
enum OrbitsAction {
    /// Complex orbits of a type and size, or real tableaux on --space.
    Enumerate {
        #[arg(long = "type")]
        lie_type: Option<String>,
        #[arg(long)]
        size: Option<u32>,
        /// Enumerate real tableaux on this space instead, e.g. O(2,1).
        #[arg(long, conflicts_with_all = ["lie_type", "size"])]
        space: Option<String>,
    },
}

#[derive(Debug, Subcommand)]
enum LedgerAction {
    /// Run inference to the fixed point.
    Infer {
        /// Ledger JSON file, or - for standard input.
        file: String,
    },
}

#[derive(Debug, Subcommand)]
enum DoublingAction {
    /// s0, s'' and the doubled signature for a pair.
    Signatures {
        #[arg(long)]
        s: String,
        #[arg(long = "s-prime")]
        s_prime: String,
    },
    /// s0 and alpha for O(p,q) against Sp_2n, with the signatures of the same alpha.
    Rallis {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        q: u32,
        #[arg(long)]
        n: u32,
    },
    /// Companion signature for an occurrence on O(p1,q1).
    Companion {
        #[arg(long)]
        p1: u32,
        #[arg(long)]
        q1: u32,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        m: u32,
    },
}

/// A failure with its exit code class.
#[derive(Debug)]
pub struct CliError {
    pub class: ErrorClass,
    pub message: String,
    detail: Option<Value>,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> CliError {
        CliError { class: ErrorClass::Usage, message: message.into(), detail: None }
    }

    pub fn exit_code(&self) -> i32 {
        match self.class {
            ErrorClass::Usage => 1,
            ErrorClass::Mathematical => 2,
            ErrorClass::Cap => 3,
        }
    }

    fn class_name(&self) -> &'static str {
        match self.class {
            ErrorClass::Usage => "usage",
            ErrorClass::Mathematical => "mathematical",
            ErrorClass::Cap => "cap",
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<ThetaError> for CliError {
    fn from(e: ThetaError) -> CliError {
        let detail = match &e {
            ThetaError::Contradiction(c) => serde_json::to_value(c).ok(),
            _ => None,
        };
        CliError { class: e.class(), message: e.to_string(), detail }
    }
}

/// Exit code and rendered streams of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("library types serialise to plain JSON")
}

/// Runs one command line. The first item is the program name.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let rendered = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: rendered, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: rendered }
            };
        }
    };
    let command = command_name(&cli.command);
    let rendered = dispatch(&cli).and_then(|report| report.render(cli.format));
    match rendered {
        Ok(text) => match &cli.out {
            Some(path) => match std::fs::write(path, &text) {
                Ok(()) => Outcome { code: 0, stdout: String::new(), stderr: String::new() },
                Err(e) => failure(command, CliError::usage(format!("cannot write {}: {e}", path.display()))),
            },
            None => Outcome { code: 0, stdout: text, stderr: String::new() },
        },
        Err(e) => failure(command, e),
    }
}

fn failure(command: &str, e: CliError) -> Outcome {
    let mut body = json!({
        "class": e.class_name(),
        "exit_code": e.exit_code(),
        "message": e.message,
    });
    if let Some(detail) = &e.detail {
        body["contradiction"] = detail.clone();
    }
    Outcome {
        code: e.exit_code(),
        stdout: pretty(&envelope(command, "error", body)),
        stderr: format!("theta {command}: {e}\n"),
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Towers { .. } => "towers",
        Command::Pairs { .. } => "pairs",
        Command::Orbits { .. } => "orbits",
        Command::Descend { .. } => "descend",
        Command::Lift { .. } => "lift",
        Command::Support { .. } => "support",
        Command::Ledger { .. } => "ledger",
        Command::Doubling { .. } => "doubling",
        Command::Plan { .. } => "plan",
        Command::Psi { .. } => "psi",
    }
}

fn dispatch(cli: &Cli) -> Result<Report, CliError> {
    match &cli.command {
        Command::Towers { field, eps, alpha, chi, max_abs } => towers(field, *eps, *alpha, chi, *max_abs),
        Command::Pairs { s, s_prime } => pairs(s, s_prime),
        Command::Orbits { action: OrbitsAction::Enumerate { lie_type, size, space } } => {
            orbits(lie_type.as_deref(), *size, space.as_deref(), cli.cap)
        }
        Command::Descend { orbit, target } => descend_cmd(orbit, target),
        Command::Lift { orbit, to_dim, induce } => lift(orbit, *to_dim, induce.as_deref(), cli.cap),
        Command::Support { orbit, lift, target } => support(orbit, lift, target, cli.cap),
        Command::Ledger { action: LedgerAction::Infer { file } } => ledger_infer(file),
        Command::Doubling { action } => doubling(action),
        Command::Plan { start, nu, via } => plan(start, nu, via),
        Command::Psi { eigenvalues } => psi(eigenvalues),
    }
}

fn tower_entry(t: &WittTower) -> Value {
    json!({ "label": t.to_string(), "tower": to_value(t), "kernel_dim": t.kernel_dim() })
}

fn towers(field: &str, eps: u8, alpha: Option<u8>, chi: &str, max_abs: u32) -> Result<Report, CliError> {
    let field = Field::from_code(field)?;
    let parity = Parity::from_bit(eps)?;
    let class = match field {
        Field::Real => TowerClass::Real { alpha: alpha.unwrap_or(eps) },
        Field::Complex => TowerClass::Complex,
        Field::NonArch => TowerClass::NonArch { chi: DiscChar::from_code(chi)? },
    };
    let family = enumerate_towers(parity, class)?;
    let count = to_value(&family.count());
    let listed: Vec<WittTower> = match &family {
        TowerFamily::Finite(v) => v.clone(),
        TowerFamily::Real(r) => RealTowers::up_to(r.alpha(), max_abs),
    };
    let mut pairs = Vec::new();
    for (i, a) in listed.iter().enumerate() {
        for b in &listed[i + 1..] {
            if adjacent(a, b)? {
                pairs.push(json!([a.to_string(), b.to_string()]));
            }
        }
    }
    let mut result = json!({
        "field": field.code(),
        "eps": eps,
        "count": count,
        "towers": listed.iter().map(tower_entry).collect::<Vec<_>>(),
        "adjacent_pairs": pairs,
    });
    if let TowerClass::Real { alpha } = class {
        result["alpha"] = json!(alpha);
        result["listed_up_to_abs_k"] = json!(max_abs);
    }
    let rows = listed.iter().map(|t| vec![t.to_string(), t.kernel_dim().to_string()]).collect();
    Ok(Report::new("towers", result).with_table(vec!["tower", "kernel_dim"], rows))
}

fn pairs(s: &str, s_prime: &str) -> Result<Report, CliError> {
    let (s, t) = (parse::signature(s)?, parse::signature(s_prime)?);
    let constants = kappa_and_nu_pair(&s, &t)?;
    let result = json!({
        "s": to_value(&s),
        "s_prime": to_value(&t),
        "groups": [s.real_group()?.to_string(), t.real_group()?.to_string()],
        "nu_profile_s": to_value(&nu_profile(&s)?),
        "nu_profile_s_prime": to_value(&nu_profile(&t)?),
        "kappa": constants.kappa,
        "nu_pair": constants.nu_pair,
        "nu_pair_table": constants.nu_pair_table,
        "good_regime": constants.in_good_regime(),
        "lift_bound": lift_bound(&s, &t)?,
    });
    Ok(Report::new("pairs", result))
}

fn orbits(lie_type: Option<&str>, size: Option<u32>, space: Option<&str>, cap: u32) -> Result<Report, CliError> {
    if let Some(space) = space {
        let v = parse::space(space)?;
        let tableaux = enumerate_tableaux(&v, cap)?;
        let mut entries = Vec::new();
        let mut rows = Vec::new();
        for tab in &tableaux {
            let partition = tab.complexify().partition;
            entries.push(
                json!({ "tableau": to_value(tab), "display": tab.to_string(), "partition": to_value(&partition) }),
            );
            rows.push(vec![partition.to_string(), tab.to_string()]);
        }
        let result = json!({ "space": to_value(&v), "count": tableaux.len(), "tableaux": entries });
        return Ok(Report::new("orbits", result).with_table(vec!["partition", "tableau"], rows));
    }
    let (Some(lie_type), Some(size)) = (lie_type, size) else {
        return Err(CliError::usage("orbits enumerate needs --type and --size, or --space"));
    };
    let lie = parse::lie_type(lie_type)?;
    let found = enumerate_complex_orbits(lie, size, cap)?;
    let entries: Vec<Value> = found
        .iter()
        .map(|o| json!({ "partition": to_value(&o.partition), "columns": to_value(&o.column_data()) }))
        .collect();
    let rows = found
        .iter()
        .map(|o| {
            let c = o.column_data();
            vec![o.partition.to_string(), c.c1.to_string(), c.c2.to_string(), c.is_pure.to_string()]
        })
        .collect();
    let result = json!({ "type": lie.code(), "size": size, "count": found.len(), "orbits": entries });
    Ok(Report::new("orbits", result).with_table(vec!["partition", "c1", "c2", "pure"], rows))
}

fn tableau(text: &str) -> Result<AdmissibleTableau, CliError> {
    let tab: AdmissibleTableau = parse::json_or_file(text, "tableau")?;
    tab.ensure_valid()?;
    Ok(tab)
}

fn descend_cmd(orbit: &str, target: &str) -> Result<Report, CliError> {
    let o = tableau(orbit)?;
    let v = parse::space(target)?;
    let d = descend(&o, &v)?;
    let class = classify_descent(&o, &v)?;
    let mut result = to_value(&d);
    result["source"] = to_value(&o);
    result["target"] = to_value(&v);
    result["display"] = json!(d.orbit.to_string());
    result["classification"] = to_value(&class);
    Ok(Report::new("descend", result))
}

fn lift(orbit: &str, to_dim: Option<u32>, induce: Option<&str>, cap: u32) -> Result<Report, CliError> {
    let o = parse::complex_orbit(orbit)?;
    let result = match (to_dim, induce) {
        (Some(dim), _) => {
            let up = check_theta_lift(&o, dim, cap)?;
            json!({ "mode": "check_lift", "orbit": to_value(&o), "dim_v_prime": dim, "lift": to_value(&up) })
        }
        (None, Some(sig)) => {
            let s2 = parse::signature(sig)?;
            let up = induce_orbit(&o, &s2, cap)?;
            json!({ "mode": "induce", "orbit": to_value(&o), "signature": to_value(&s2), "lift": to_value(&up) })
        }
        (None, None) => return Err(CliError::usage("lift needs --to-dim or --induce")),
    };
    Ok(Report::new("lift", result))
}

fn support(orbit: &str, lift: &str, target: &str, cap: u32) -> Result<Report, CliError> {
    let o = tableau(orbit)?;
    let o_prime = parse::complex_orbit(lift)?;
    let v_prime = parse::space(target)?;
    let found = lift_orbit_support(&o, &o_prime, &v_prime, cap)?;
    let rows = found.iter().map(|t| vec![t.to_string()]).collect();
    let result = json!({
        "orbit": to_value(&o),
        "lift_type": to_value(&o_prime),
        "target": to_value(&v_prime),
        "count": found.len(),
        "support": found.iter().map(to_value).collect::<Vec<_>>(),
    });
    Ok(Report::new("support", result).with_table(vec!["tableau"], rows))
}

fn ledger_infer(file: &str) -> Result<Report, CliError> {
    let body = if file == "-" {
        std::io::read_to_string(std::io::stdin()).map_err(|e| CliError::usage(format!("cannot read stdin: {e}")))?
    } else {
        std::fs::read_to_string(file).map_err(|e| CliError::usage(format!("cannot read ledger '{file}': {e}")))?
    };
    let ledger: Ledger = parse::json(&body, "ledger")?;
    let report = ledger.infer()?.report();
    let bound = |b: Option<i64>| b.map(|v| v.to_string()).unwrap_or_else(|| "inf".into());
    let rows = report
        .indices
        .iter()
        .map(|ix| {
            vec![
                ix.index.clone(),
                ix.twisted.to_string(),
                ix.tower.map(|t| t.to_string()).unwrap_or_default(),
                ix.lo.value.to_string(),
                bound(ix.hi.as_ref().map(|h| h.value)),
                ix.exact.map(|v| v.to_string()).unwrap_or_default(),
            ]
        })
        .collect();
    Ok(Report::new("ledger", to_value(&report))
        .with_table(vec!["index", "twisted", "tower", "lo", "hi", "exact"], rows))
}

fn doubling(action: &DoublingAction) -> Result<Report, CliError> {
    let result = match *action {
        DoublingAction::Signatures { ref s, ref s_prime } => {
            let (s, t) = (parse::signature(s)?, parse::signature(s_prime)?);
            let d = doubling_signatures(&s, &t)?;
            let mut v = to_value(&d);
            v["split_rank_ok"] = json!(d.split_rank_ok());
            v
        }
        DoublingAction::Rallis { p, q, n } => {
            let r = rallis_parameters::<Rational>(p, q, n);
            let same_alpha: Vec<Value> = enumerate_q(p + q, r.alpha).into_iter().map(|(a, b)| json!([a, b])).collect();
            json!({ "p": p, "q": q, "n": n, "s0": r.s0.to_string(), "alpha": r.alpha, "signatures_of_alpha": same_alpha })
        }
        DoublingAction::Companion { p1, q1, n, m } => {
            let c = companion_quotient(p1, q1, n, m)?;
            json!({ "p1": p1, "q1": q1, "n": n, "m": m, "companion": c.map(|(a, b)| json!([a, b])) })
        }
    };
    Ok(Report::new("doubling", result))
}

fn plan(start: &str, nu: &str, via: &[String]) -> Result<Report, CliError> {
    let start: ClassicalSignature = parse::signature(start)?;
    let nu0 = NuQ::parse(nu).ok_or_else(|| CliError::usage(format!("cannot read growth bound '{nu}'")))?;
    let targets = via.iter().map(|s| parse::signature(s)).collect::<Result<Vec<_>, _>>()?;
    let chain = plan_chain(&start, nu0, &targets)?;
    let rows = chain
        .steps
        .iter()
        .enumerate()
        .map(|(i, s)| {
            vec![
                i.to_string(),
                s.from.to_string(),
                s.to.to_string(),
                s.kappa.to_string(),
                s.nu_in.to_string(),
                s.flags.convergent.to_string(),
                s.flags.overconvergent.to_string(),
                s.flags.unitarity_preserving.to_string(),
                s.nu_out.to_string(),
            ]
        })
        .collect();
    let headers =
        vec!["step", "from", "to", "kappa", "nu_in", "convergent", "overconvergent", "unitarity_preserving", "nu_out"];
    Ok(Report::new("plan", to_value(&chain)).with_table(headers, rows))
}

fn psi(eigenvalues: &[String]) -> Result<Report, CliError> {
    let values = eigenvalues
        .iter()
        .map(|t| {
            parse_scalar::<BigRational>(t).ok_or_else(|| CliError::usage(format!("'{t}' is not a rational number")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let p = psi_eval(&values)?;
    let result = json!({
        "eigenvalues": values.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
        "squared": p.squared.to_string(),
        "value": p.value.map(|v| v.to_string()),
        "approx": p.approx,
    });
    Ok(Report::new("psi", result))
}
