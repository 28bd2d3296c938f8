//! `singlet`: enumerate singlet bases, apply invariant operators, export matrices and run the
//! oracle validation suite.

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde::Serialize;
use serde_json::{json, Map, Value};
use singlet_core::fock::{apply_su2_op, apply_su3_op, Oracle};
use singlet_core::su2::{act_su2, norm_sq_su2};
use singlet_core::su3::{act_su3, norm_sq_su3};
use singlet_core::validate::verify;
use singlet_core::{enumerate_su2, enumerate_su3, parse, Group, SqrtRational, Su2Label, Su3Label};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "singlet", version, about = "Exact singlet bases and invariant operators for three SU(2) or SU(3) irreps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// List basis labels up to a weight cutoff with exact norms and leg irreps
    Basis {
        #[arg(long)]
        group: Group,
        #[arg(long)]
        wmax: u32,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Apply an operator to one normalized basis state
    Act {
        #[arg(long)]
        group: Group,
        #[arg(long)]
        op: String,
        /// Label as JSON, e.g. '{"l12":1}'; omitted fields are zero
        label: String,
        /// Expand the oracle state instead of using closed forms
        #[arg(long)]
        via_oracle: bool,
        /// Add a lossy decimal value (15 significant digits) to each coefficient
        #[arg(long)]
        float: bool,
    },
    /// Sparse matrix of an operator on the basis truncated at --wmax
    Matrix {
        #[arg(long)]
        group: Group,
        #[arg(long)]
        op: String,
        #[arg(long)]
        wmax: u32,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        via_oracle: bool,
        #[arg(long)]
        float: bool,
    },
    /// Check the closed forms against the Fock oracle; exit 1 on any engine mismatch
    Verify {
        #[arg(long)]
        group: Group,
        #[arg(long)]
        wmax: u32,
        /// Also write the full report as JSON
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(untagged)]
enum Label {
    Su2(Su2Label),
    Su3(Su3Label),
}

impl Label {
    fn weight(&self) -> u32 {
        match self {
            Label::Su2(x) => x.weight(),
            Label::Su3(x) => x.weight(),
        }
    }
}

impl std::fmt::Display for Label {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Label::Su2(x) => x.fmt(f),
            Label::Su3(x) => x.fmt(f),
        }
    }
}

#[derive(Serialize)]
struct Coeff {
    #[serde(flatten)]
    exact: SqrtRational,
    #[serde(skip_serializing_if = "Option::is_none")]
    approx_lossy: Option<f64>,
}

fn coeff(c: SqrtRational, float: bool) -> Coeff {
    let approx_lossy = float.then(|| format!("{:.14e}", c.to_f64()).parse().unwrap());
    Coeff { exact: c, approx_lossy }
}

fn rational_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn to_json(v: &impl Serialize) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

// ---------------------------------------------------------------------------
// basis

fn basis_labels(group: Group, wmax: u32) -> Vec<Label> {
    match group {
        Group::Su2 => enumerate_su2(wmax).into_iter().map(Label::Su2).collect(),
        Group::Su3 => enumerate_su3(wmax).into_iter().map(Label::Su3).collect(),
    }
}

fn norm_sq(x: &Label) -> BigRational {
    match x {
        Label::Su2(x) => norm_sq_su2(x),
        Label::Su3(x) => norm_sq_su3(x),
    }
}

fn irreps(x: &Label) -> Value {
    match x {
        Label::Su2(x) => json!(x.n()),
        Label::Su3(x) => json!(x.content().map(|(p, q)| [p, q])),
    }
}

fn cmd_basis(group: Group, wmax: u32, format: Format, out: Option<&PathBuf>) -> Result<()> {
    let labels = basis_labels(group, wmax);
    let text = match format {
        Format::Json => {
            let rows: Vec<_> = labels
                .iter()
                .map(|x| {
                    json!({
                        "label": x,
                        "weight": x.weight(),
                        "norm_sq": rational_string(&norm_sq(x)),
                        "irreps": irreps(x),
                    })
                })
                .collect();
            to_json(&json!({ "group": group, "w_max": wmax, "labels": rows }))?
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            match group {
                Group::Su2 => w.write_record(["l12", "l23", "l31", "weight", "norm_sq", "n1", "n2", "n3"])?,
                Group::Su3 => w.write_record([
                    "l12", "l21", "l13", "l31", "l23", "l32", "p", "weight", "norm_sq", "p1", "q1", "p2",
                    "q2", "p3", "q3",
                ])?,
            }
            for x in &labels {
                let mut row: Vec<String> = match x {
                    Label::Su2(y) => [y.l12, y.l23, y.l31].iter().map(u32::to_string).collect(),
                    Label::Su3(y) => {
                        let mut r: Vec<_> = y.links().iter().map(u32::to_string).collect();
                        r.push(y.p.to_string());
                        r
                    }
                };
                row.push(x.weight().to_string());
                row.push(rational_string(&norm_sq(x)));
                match x {
                    Label::Su2(y) => row.extend(y.n().iter().map(u32::to_string)),
                    Label::Su3(y) => {
                        for (p, q) in y.content() {
                            row.push(p.to_string());
                            row.push(q.to_string());
                        }
                    }
                }
                w.write_record(&row)?;
            }
            String::from_utf8(w.into_inner()?)?
        }
    };
    emit(&text, out)
}

// ---------------------------------------------------------------------------
// act and matrix

/// Parse a label object; omitted fields default to zero, unknown fields are rejected.
fn parse_label(group: Group, text: &str) -> Result<Label> {
    let v: Value = serde_json::from_str(text).context("label is not valid JSON")?;
    let Value::Object(given) = v else { bail!("label must be a JSON object") };
    let keys: &[&str] = match group {
        Group::Su2 => &["l12", "l23", "l31"],
        Group::Su3 => &["l12", "l21", "l13", "l31", "l23", "l32", "p"],
    };
    if let Some(k) = given.keys().find(|k| !keys.contains(&k.as_str())) {
        bail!("unknown label field '{k}' for {}", serde_json::to_string(&group)?);
    }
    let mut full = Map::new();
    for k in keys {
        full.insert((*k).into(), given.get(*k).cloned().unwrap_or(json!(0)));
    }
    Ok(match group {
        Group::Su2 => Label::Su2(serde_json::from_value(Value::Object(full)).context("invalid SU(2) label")?),
        Group::Su3 => Label::Su3(serde_json::from_value(Value::Object(full)).context("invalid SU(3) label")?),
    })
}

struct Actor {
    op: singlet_core::InvariantOp,
    oracle: Option<Oracle>,
}

impl Actor {
    fn new(group: Group, text: &str, via_oracle: bool) -> Result<Actor> {
        let op = parse(text, group)?;
        Ok(Actor { op, oracle: via_oracle.then(Oracle::new) })
    }

    fn act(&self, x: &Label) -> Result<Vec<(Label, SqrtRational)>> {
        let scale = |c: &BigRational, t: &BigRational, s: &BigRational| SqrtRational::scaled_root(c, &(t / s));
        Ok(match (x, &self.oracle) {
            (Label::Su3(x), None) => {
                act_su3(&self.op, x)?.into_iter().map(|t| (Label::Su3(t.target), t.coeff)).collect()
            }
            (Label::Su2(x), None) => {
                act_su2(&self.op, x)?.into_iter().map(|t| (Label::Su2(t.target), t.coeff)).collect()
            }
            (Label::Su3(x), Some(o)) => {
                let v = apply_su3_op(&self.op, &o.state(x));
                let s = o.norm_sq(x);
                o.expand_su3(&v)?
                    .into_iter()
                    .map(|(t, c)| (Label::Su3(t), scale(&c, &o.norm_sq(&t), &s)))
                    .collect()
            }
            (Label::Su2(x), Some(o)) => {
                let v = apply_su2_op(&self.op, &o.state_su2(x));
                let s = o.state_su2(x).norm_sq();
                o.expand_su2(&v)?
                    .into_iter()
                    .map(|(t, c)| (Label::Su2(t), scale(&c, &o.state_su2(&t).norm_sq(), &s)))
                    .collect()
            }
        })
    }
}

fn cmd_act(group: Group, op: &str, label: &str, via_oracle: bool, float: bool) -> Result<()> {
    let actor = Actor::new(group, op, via_oracle)?;
    let x = parse_label(group, label)?;
    let transitions: Vec<_> = actor
        .act(&x)?
        .into_iter()
        .map(|(t, c)| json!({ "target": t, "coeff": coeff(c, float) }))
        .collect();
    let out = json!({
        "group": group,
        "op": actor.op.to_string(),
        "source": x,
        "via_oracle": via_oracle,
        "transitions": transitions,
    });
    emit(&to_json(&out)?, None)
}

#[derive(Serialize)]
struct Entry {
    row: Label,
    col: Label,
    coeff: Coeff,
}

#[derive(Serialize)]
struct MatrixExport {
    group: Group,
    w_max: u32,
    op: String,
    via_oracle: bool,
    entries: Vec<Entry>,
}

fn matrix(group: Group, op: &str, wmax: u32, via_oracle: bool, float: bool) -> Result<MatrixExport> {
    let actor = Actor::new(group, op, via_oracle)?;
    let mut entries = Vec::new();
    for col in basis_labels(group, wmax) {
        for (row, c) in actor.act(&col)? {
            if row.weight() <= wmax {
                entries.push(Entry { row, col, coeff: coeff(c, float) });
            }
        }
    }
    entries.sort_by_key(|e| (e.row, e.col));
    Ok(MatrixExport { group, w_max: wmax, op: actor.op.to_string(), via_oracle, entries })
}

fn cmd_matrix(
    group: Group,
    op: &str,
    wmax: u32,
    out: Option<&PathBuf>,
    format: Format,
    via_oracle: bool,
    float: bool,
) -> Result<()> {
    let m = matrix(group, op, wmax, via_oracle, float)?;
    let text = match format {
        Format::Json => to_json(&m)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let mut header = vec!["row", "col", "sign", "radicand"];
            if float {
                header.push("approx_lossy");
            }
            w.write_record(&header)?;
            for e in &m.entries {
                let mut r = vec![
                    e.row.to_string(),
                    e.col.to_string(),
                    e.coeff.exact.sign().to_string(),
                    e.coeff.exact.radicand_string(),
                ];
                if let Some(a) = e.coeff.approx_lossy {
                    r.push(a.to_string());
                }
                w.write_record(&r)?;
            }
            String::from_utf8(w.into_inner()?)?
        }
    };
    emit(&text, out)
}

// ---------------------------------------------------------------------------
// verify

fn cmd_verify(group: Group, wmax: u32, out: Option<&PathBuf>) -> Result<bool> {
    let report = verify(group, wmax);
    let mut text = report.render();
    text.push_str("ledger:\n");
    text.push_str(&to_json(&report.ledger)?);
    if !report.mismatches.is_empty() {
        text.push_str("engine mismatches:\n");
        text.push_str(&to_json(&report.mismatches)?);
    }
    emit(&text, None)?;
    if let Some(p) = out {
        emit(&to_json(&report)?, Some(p))?;
    }
    Ok(report.passed)
}

fn configure_threads() -> Result<()> {
    if let Ok(v) = std::env::var("SINGLET_THREADS") {
        let n: usize = v.parse().with_context(|| format!("SINGLET_THREADS='{v}' is not a count"))?;
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    configure_threads()?;
    match cli.command {
        Command::Basis { group, wmax, format, out } => cmd_basis(group, wmax, format, out.as_ref())?,
        Command::Act { group, op, label, via_oracle, float } => cmd_act(group, &op, &label, via_oracle, float)?,
        Command::Matrix { group, op, wmax, out, format, via_oracle, float } => {
            cmd_matrix(group, &op, wmax, out.as_ref(), format, via_oracle, float)?
        }
        Command::Verify { group, wmax, out } => return cmd_verify(group, wmax, out.as_ref()),
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
