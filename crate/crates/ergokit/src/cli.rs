//! Command-line surface: state ingestion, Hamiltonian specs, computation
//! commands, and serialized reports.
//!
//! States come either from a named-constructor JSON object or from an
//! explicit `{"dims": [...], "matrix": [[[re, im], ...], ...]}` document
//! (inline or in a file). Hamiltonians use the spec grammar
//! `equispaced:d=<int>,E=<float>`, `matrix:<path>`, or
//! `composite:<spec>(x<spec>)*`.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;

use crate::error::{ErgoError, Result};
use crate::families;
use crate::gaps;
use crate::hamiltonian::Hamiltonian;
use crate::matrix::{ComplexMatrix, C64};
use crate::report::{format_sig, paper_report, render_markdown};
use crate::sampling::{self, PurityModel, SampleConfig};
use crate::spectrum::Spectrum;
use crate::state::DensityMatrix;
use crate::thermal;

/// Default seed when neither `--seed` nor `ERGOKIT_SEED` is set.
const DEFAULT_SEED: u64 = 42;

#[derive(Parser, Debug)]
#[command(
    name = "ergokit",
    about = "Battery capacity of finite-dimensional quantum states",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(Args, Debug)]
pub struct CommonArgs {
    /// State source: inline JSON or a path to a JSON file.
    #[arg(long)]
    pub state: String,
    /// Hamiltonian spec: equispaced:d=..,E=.. | matrix:<path> | composite:..x..
    #[arg(long)]
    pub ham: String,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Battery capacity and the other work functionals of a state.
    Capacity(CommonArgs),
    /// Alias surface for the same work functionals, ergotropy first.
    Ergotropy(CommonArgs),
    /// Gap quantities of a composite state (δ_in, δ_out, capacity gaps).
    Gap {
        #[arg(long)]
        state: String,
        /// Defaults to one unit-spacing qubit ladder per subsystem.
        #[arg(long)]
        ham: Option<String>,
        /// Constant for the indicator-weighted average measure.
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Multipartite entanglement measures of a pure composite state.
    Multipartite {
        #[arg(long)]
        state: String,
        #[arg(long)]
        ham: Option<String>,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Asymptotic per-copy quantities through entropy-matched Gibbs states.
    Total(CommonArgs),
    /// Monte Carlo verification of the Haar work-variance identity.
    Montecarlo {
        /// Explicit state (inline JSON or file). Mutually exclusive with
        /// --model.
        #[arg(long)]
        state: Option<String>,
        /// Random-state model: pure | hilbert-schmidt | spectrum:p0,p1,...
        #[arg(long)]
        model: Option<String>,
        /// Dimension for --model.
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long)]
        ham: String,
        #[arg(long, default_value_t = 20_000)]
        samples: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reproduce the worked examples and print the errata ledger.
    PaperReport {
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Validate a state input; exit 0 iff it is a valid density matrix.
    Validate {
        #[arg(long)]
        state: String,
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
    },
}

/// Runs a parsed command, writing its report to stdout or `--out`.
pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Capacity(args) | Command::Ergotropy(args) => run_work(args),
        Command::Gap { state, ham, alpha, format, out } => {
            run_gap(&state, ham.as_deref(), alpha, format, out.as_deref())
        }
        Command::Multipartite { state, ham, alpha, format, out } => {
            run_multipartite(&state, ham.as_deref(), alpha, format, out.as_deref())
        }
        Command::Total(args) => run_total(args),
        Command::Montecarlo { state, model, dim, ham, samples, seed, format, out } => {
            run_montecarlo(
                state.as_deref(),
                model.as_deref(),
                dim,
                &ham,
                samples,
                resolve_seed(seed),
                format,
                out.as_deref(),
            )
        }
        Command::PaperReport { seed, format, out } => {
            run_paper_report(resolve_seed(seed), format, out.as_deref())
        }
        Command::Validate { state, format } => run_validate(&state, format),
    }
}

/// `--seed`, then `ERGOKIT_SEED`, then the default.
pub fn resolve_seed(flag: Option<u64>) -> u64 {
    flag.or_else(|| {
        std::env::var("ERGOKIT_SEED").ok().and_then(|s| s.parse().ok())
    })
    .unwrap_or(DEFAULT_SEED)
}

// ---------------------------------------------------------------------------
// State and Hamiltonian parsing
// ---------------------------------------------------------------------------

fn read_json_source(source: &str) -> Result<Value> {
    let text = if source.trim_start().starts_with('{') {
        source.to_string()
    } else {
        std::fs::read_to_string(Path::new(source)).map_err(|e| {
            ErgoError::Parse(format!("cannot read state file '{source}': {e}"))
        })?
    };
    serde_json::from_str(&text)
        .map_err(|e| ErgoError::Parse(format!("invalid JSON in state source: {e}")))
}

fn field_f64(obj: &Value, key: &str) -> Result<f64> {
    obj.get(key)
        .and_then(Value::as_f64)
        .ok_or_else(|| ErgoError::Parse(format!("missing or non-numeric field '{key}'")))
}

fn field_f64_or(obj: &Value, key: &str, default: f64) -> Result<f64> {
    match obj.get(key) {
        None => Ok(default),
        Some(v) => v
            .as_f64()
            .ok_or_else(|| ErgoError::Parse(format!("field '{key}' must be a number"))),
    }
}

/// Parses a state source: named constructor or explicit matrix document.
pub fn parse_state(source: &str) -> Result<DensityMatrix> {
    let doc = read_json_source(source)?;
    if let Some(name) = doc.get("name").and_then(Value::as_str) {
        return build_named_state(name, &doc);
    }
    let (matrix, dims) = parse_matrix_document(&doc)?;
    DensityMatrix::new(matrix, dims)
}

fn build_named_state(name: &str, doc: &Value) -> Result<DensityMatrix> {
    match name {
        "qubit" => {
            let q = field_f64(doc, "q")?;
            let c = field_f64(doc, "c")?;
            let theta = field_f64_or(doc, "theta", 0.0)?;
            families::qubit_state(q, c, theta)
        }
        "ghz" => {
            let theta = field_f64_or(doc, "theta", std::f64::consts::FRAC_PI_4)?;
            Ok(families::ghz_state(theta))
        }
        "werner_d" => {
            let d = field_f64(doc, "d")? as usize;
            let v = field_f64(doc, "v")?;
            families::werner_qudit(d, v)
        }
        "werner2" => {
            let v = field_f64(doc, "v")?;
            let theta = field_f64_or(doc, "theta", std::f64::consts::FRAC_PI_4)?;
            families::werner_two_qubit(v, theta)
        }
        "isotropic" => {
            let v = field_f64(doc, "v")?;
            let lambda = field_f64_or(doc, "lambda", 0.5)?;
            families::isotropic_two_qubit(v, lambda)
        }
        "acin" => {
            let l_values = doc
                .get("l")
                .and_then(Value::as_array)
                .ok_or_else(|| ErgoError::Parse("constructor 'acin' needs a 5-entry 'l' array".into()))?;
            if l_values.len() != 5 {
                return Err(ErgoError::Parse(format!(
                    "constructor 'acin' needs exactly 5 coefficients, got {}",
                    l_values.len()
                )));
            }
            let mut l = [0.0f64; 5];
            for (slot, v) in l.iter_mut().zip(l_values) {
                *slot = v
                    .as_f64()
                    .ok_or_else(|| ErgoError::Parse("non-numeric entry in 'l'".into()))?;
            }
            let theta = field_f64_or(doc, "theta", 0.0)?;
            families::acin_state(&l, theta)
        }
        "w3" => Ok(families::w_state()),
        other => Err(ErgoError::Parse(format!("unknown state constructor '{other}'"))),
    }
}

/// Parses `{"dims": [...](optional), "matrix": [[[re, im], ...], ...]}`.
fn parse_matrix_document(doc: &Value) -> Result<(ComplexMatrix, Vec<usize>)> {
    let rows = doc
        .get("matrix")
        .and_then(Value::as_array)
        .ok_or_else(|| ErgoError::Parse("document needs a 'matrix' array".into()))?;
    let n = rows.len();
    let mut data = Vec::with_capacity(n * n);
    for row in rows {
        let entries = row
            .as_array()
            .ok_or_else(|| ErgoError::Parse("matrix rows must be arrays".into()))?;
        if entries.len() != n {
            return Err(ErgoError::Parse(format!(
                "matrix must be square: row of length {} in a {n}-row matrix",
                entries.len()
            )));
        }
        for entry in entries {
            let pair = entry
                .as_array()
                .ok_or_else(|| ErgoError::Parse("matrix entries are [re, im] pairs".into()))?;
            if pair.len() != 2 {
                return Err(ErgoError::Parse("matrix entries are [re, im] pairs".into()));
            }
            let re = pair[0]
                .as_f64()
                .ok_or_else(|| ErgoError::Parse("non-numeric matrix entry".into()))?;
            let im = pair[1]
                .as_f64()
                .ok_or_else(|| ErgoError::Parse("non-numeric matrix entry".into()))?;
            data.push(C64::new(re, im));
        }
    }
    let matrix = ComplexMatrix::from_data(n, data)?;
    let dims = match doc.get("dims") {
        None => vec![n],
        Some(v) => {
            let list = v
                .as_array()
                .ok_or_else(|| ErgoError::Parse("'dims' must be an array".into()))?;
            list.iter()
                .map(|x| {
                    x.as_u64().map(|u| u as usize).ok_or_else(|| {
                        ErgoError::Parse("'dims' entries must be positive integers".into())
                    })
                })
                .collect::<Result<Vec<usize>>>()?
        }
    };
    Ok((matrix, dims))
}

/// Parses the Hamiltonian grammar. Errors carry the offending position.
pub fn parse_ham_spec(s: &str) -> Result<Hamiltonian> {
    parse_ham_at(s, 0)
}

fn parse_ham_at(s: &str, offset: usize) -> Result<Hamiltonian> {
    if let Some(rest) = s.strip_prefix("equispaced:") {
        return parse_equispaced(rest, offset + "equispaced:".len());
    }
    if let Some(path) = s.strip_prefix("matrix:") {
        if path.is_empty() {
            return Err(ErgoError::Parse(format!(
                "position {}: 'matrix:' needs a file path",
                offset + "matrix:".len()
            )));
        }
        return load_matrix_hamiltonian(path);
    }
    if let Some(rest) = s.strip_prefix("composite:") {
        return parse_composite(rest, offset + "composite:".len());
    }
    Err(ErgoError::Parse(format!(
        "position {offset}: expected 'equispaced:', 'matrix:', or 'composite:', got '{s}'"
    )))
}

fn parse_equispaced(body: &str, offset: usize) -> Result<Hamiltonian> {
    let mut levels: Option<usize> = None;
    let mut quantum: Option<f64> = None;
    let mut cursor = offset;
    for part in body.split(',') {
        let (key, value) = part.split_once('=').ok_or_else(|| {
            ErgoError::Parse(format!("position {cursor}: expected key=value, got '{part}'"))
        })?;
        match key {
            "d" => {
                levels = Some(value.parse().map_err(|_| {
                    ErgoError::Parse(format!("position {cursor}: invalid level count '{value}'"))
                })?)
            }
            "E" => {
                quantum = Some(value.parse().map_err(|_| {
                    ErgoError::Parse(format!("position {cursor}: invalid spacing '{value}'"))
                })?)
            }
            other => {
                return Err(ErgoError::Parse(format!(
                    "position {cursor}: unknown key '{other}' (expected d or E)"
                )))
            }
        }
        cursor += part.len() + 1;
    }
    let levels = levels
        .ok_or_else(|| ErgoError::Parse(format!("position {offset}: missing 'd='")))?;
    let quantum = quantum
        .ok_or_else(|| ErgoError::Parse(format!("position {offset}: missing 'E='")))?;
    Hamiltonian::equispaced(levels, quantum)
}

fn load_matrix_hamiltonian(path: &str) -> Result<Hamiltonian> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ErgoError::Parse(format!("cannot read Hamiltonian file '{path}': {e}")))?;
    let doc: Value = serde_json::from_str(&text)
        .map_err(|e| ErgoError::Parse(format!("invalid JSON in '{path}': {e}")))?;
    let (matrix, _) = parse_matrix_document(&doc)?;
    Hamiltonian::explicit(matrix)
}

/// Splits `spec(xspec)*` at every 'x' followed by a spec keyword.
fn parse_composite(body: &str, offset: usize) -> Result<Hamiltonian> {
    let mut parts = Vec::new();
    let mut start = 0usize;
    let bytes = body.as_bytes();
    for i in 0..bytes.len() {
        if bytes[i] == b'x' && i > start {
            let tail = &body[i + 1..];
            if tail.starts_with("equispaced:") || tail.starts_with("matrix:") {
                parts.push((start, &body[start..i]));
                start = i + 1;
            }
        }
    }
    parts.push((start, &body[start..]));
    if parts.iter().any(|(_, p)| p.is_empty()) {
        return Err(ErgoError::Parse(format!(
            "position {offset}: empty term in composite spec"
        )));
    }
    let locals: Result<Vec<Hamiltonian>> = parts
        .into_iter()
        .map(|(pos, p)| parse_ham_at(p, offset + pos))
        .collect();
    Hamiltonian::composite(locals?)
}

/// Default composite Hamiltonian for gap commands: one unit-spacing qubit
/// ladder (d = subsystem dimension) per subsystem.
fn default_ladder_sum(dims: &[usize]) -> Result<Hamiltonian> {
    let locals: Result<Vec<Hamiltonian>> =
        dims.iter().map(|&d| Hamiltonian::equispaced(d, 1.0)).collect();
    Hamiltonian::composite(locals?)
}

// ---------------------------------------------------------------------------
// Command execution and reports
// ---------------------------------------------------------------------------

fn emit(text: String, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn to_json_pretty<T: Serialize>(value: &T) -> Result<String> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    Ok(text)
}

#[derive(Serialize)]
struct WorkReport {
    command: &'static str,
    ham: String,
    units: &'static str,
    mean_energy: f64,
    ergotropy: f64,
    antiergotropy: f64,
    capacity: f64,
    passive_energy: f64,
    active_energy: f64,
}

fn run_work(args: CommonArgs) -> Result<()> {
    let rho = parse_state(&args.state)?;
    let h = parse_ham_spec(&args.ham)?;
    let w = crate::ergotropics::work_quantities(&rho, &h)?;
    let report = WorkReport {
        command: "capacity",
        ham: args.ham.clone(),
        units: "absolute",
        mean_energy: w.mean_energy,
        ergotropy: w.ergotropy,
        antiergotropy: w.antiergotropy,
        capacity: w.capacity,
        passive_energy: w.passive_energy,
        active_energy: w.active_energy,
    };
    let text = match args.format {
        OutputFormat::Json => to_json_pretty(&report)?,
        OutputFormat::Text => format!(
            "capacity        {}\nergotropy       {}\nantiergotropy   {}\nmean energy     {}\n\
             passive energy  {}\nactive energy   {}\nunits           {}\n",
            format_sig(w.capacity, 9),
            format_sig(w.ergotropy, 9),
            format_sig(w.antiergotropy, 9),
            format_sig(w.mean_energy, 9),
            format_sig(w.passive_energy, 9),
            format_sig(w.active_energy, 9),
            report.units,
        ),
    };
    emit(text, args.out.as_deref())
}

#[derive(Serialize)]
struct GapCommandReport {
    command: &'static str,
    ham: String,
    units: &'static str,
    #[serde(flatten)]
    gaps: gaps::GapReport,
    /// Concurrence-roof gap for mixed two-qubit states.
    mixed_two_qubit_gap: Option<f64>,
    concurrence: Option<f64>,
}

fn run_gap(
    state: &str,
    ham: Option<&str>,
    alpha: Option<f64>,
    format: OutputFormat,
    out: Option<&Path>,
) -> Result<()> {
    let rho = parse_state(state)?;
    let (h, units) = match ham {
        Some(spec) => (parse_ham_spec(spec)?, "absolute"),
        None => (default_ladder_sum(rho.dims())?, "E"),
    };
    let gap_data = gaps::gap_report(&rho, &h, alpha)?;
    let (mixed_gap, concurrence) = if rho.dims() == [2, 2] {
        (
            Some(gaps::capacity_gap_mixed_2q(&rho)?),
            Some(gaps::concurrence_2q(&rho)?),
        )
    } else {
        (None, None)
    };
    let report = GapCommandReport {
        command: "gap",
        ham: ham.unwrap_or("default qubit ladders").to_string(),
        units,
        gaps: gap_data,
        mixed_two_qubit_gap: mixed_gap,
        concurrence,
    };
    let text = match format {
        OutputFormat::Json => to_json_pretty(&report)?,
        OutputFormat::Text => {
            let mut s = String::new();
            s.push_str(&format!("global capacity      {}\n", format_sig(report.gaps.global_capacity, 9)));
            for (i, c) in report.gaps.local_capacities.iter().enumerate() {
                s.push_str(&format!(
                    "local capacity {}     {}\n",
                    char::from(b'A' + (i % 26) as u8),
                    format_sig(*c, 9)
                ));
            }
            s.push_str(&format!("delta_out            {}\n", format_sig(report.gaps.delta_out, 9)));
            s.push_str(&format!("delta_in             {}\n", format_sig(report.gaps.delta_in, 9)));
            for (label, gap) in &report.gaps.bipartite_gaps {
                s.push_str(&format!("gap {label:<16} {}\n", format_sig(*gap, 9)));
            }
            s.push_str(&format!(
                "fully separable gap  {}\n",
                format_sig(report.gaps.fully_separable_gap, 9)
            ));
            match &report.gaps.measures {
                Some(m) => {
                    s.push_str(&format!("mbwcg                {}\n", format_sig(m.mbwcg, 9)));
                    s.push_str(&format!("abcg                 {}\n", format_sig(m.abcg, 9)));
                    if let Some(wcf) = m.wcf {
                        s.push_str(&format!("wcf (units E^2)      {}\n", format_sig(wcf, 9)));
                    }
                    s.push_str(&format!("wcv                  {}\n", format_sig(m.wcv, 9)));
                }
                None => s.push_str("measures             not computed (mixed state)\n"),
            }
            if let (Some(gap), Some(c)) = (report.mixed_two_qubit_gap, report.concurrence) {
                s.push_str(&format!("concurrence          {}\n", format_sig(c, 9)));
                s.push_str(&format!("roof gap (2 qubits)  {}\n", format_sig(gap, 9)));
            }
            s.push_str(&format!("units                {units}\n"));
            s
        }
    };
    emit(text, out)
}

#[derive(Serialize)]
struct MultipartiteReport {
    command: &'static str,
    units: &'static str,
    measures: gaps::MultipartiteMeasures,
    bipartite_gaps: Vec<(String, f64)>,
    fully_separable_gap: f64,
}

fn run_multipartite(
    state: &str,
    ham: Option<&str>,
    alpha: Option<f64>,
    format: OutputFormat,
    out: Option<&Path>,
) -> Result<()> {
    let rho = parse_state(state)?;
    let (h, units) = match ham {
        Some(spec) => (parse_ham_spec(spec)?, "absolute"),
        None => (default_ladder_sum(rho.dims())?, "E"),
    };
    let measures = gaps::multipartite_measures(&rho, &h, alpha)?;
    let full_report = gaps::gap_report(&rho, &h, alpha)?;
    let report = MultipartiteReport {
        command: "multipartite",
        units,
        measures,
        bipartite_gaps: full_report.bipartite_gaps.clone(),
        fully_separable_gap: full_report.fully_separable_gap,
    };
    let text = match format {
        OutputFormat::Json => to_json_pretty(&report)?,
        OutputFormat::Text => {
            let mut s = String::new();
            for (label, gap) in &report.bipartite_gaps {
                s.push_str(&format!("gap {label:<14} {}\n", format_sig(*gap, 9)));
            }
            s.push_str(&format!("fully separable  {}\n", format_sig(report.fully_separable_gap, 9)));
            s.push_str(&format!("mbwcg            {}\n", format_sig(report.measures.mbwcg, 9)));
            s.push_str(&format!("abcg             {}\n", format_sig(report.measures.abcg, 9)));
            if let Some(wcf) = report.measures.wcf {
                s.push_str(&format!("wcf (units E^2)  {}\n", format_sig(wcf, 9)));
            }
            s.push_str(&format!("wcv              {}\n", format_sig(report.measures.wcv, 9)));
            s.push_str(&format!("alpha            {}\n", format_sig(report.measures.alpha, 9)));
            s.push_str(&format!("units            {units}\n"));
            s
        }
    };
    emit(text, out)
}

#[derive(Serialize)]
struct TotalReport {
    command: &'static str,
    ham: String,
    units: &'static str,
    capacity: f64,
    total_ergotropy: f64,
    total_antiergotropy: f64,
    total_capacity: f64,
    beta_low_entropy_match: f64,
    beta_high_entropy_match: f64,
}

fn run_total(args: CommonArgs) -> Result<()> {
    let rho = parse_state(&args.state)?;
    let h = parse_ham_spec(&args.ham)?;
    let (w, t) = thermal::totals_with_baseline(&rho, &h)?;
    let entropy = crate::state::von_neumann_entropy(&rho, std::f64::consts::E)?.value;
    let low = thermal::match_gibbs(entropy, &h, thermal::BetaSign::Positive)?;
    let high = thermal::match_gibbs(entropy, &h, thermal::BetaSign::Negative)?;
    let report = TotalReport {
        command: "total",
        ham: args.ham.clone(),
        units: "absolute",
        capacity: w.capacity,
        total_ergotropy: t.total_ergotropy,
        total_antiergotropy: t.total_antiergotropy,
        total_capacity: t.total_capacity,
        beta_low_entropy_match: low.beta,
        beta_high_entropy_match: high.beta,
    };
    let text = match args.format {
        OutputFormat::Json => to_json_pretty(&report)?,
        OutputFormat::Text => format!(
            "total capacity       {}\ntotal ergotropy      {}\ntotal antiergotropy  {}\n\
             capacity (one copy)  {}\nbeta (low branch)    {}\nbeta (high branch)   {}\n\
             units                {}\n",
            format_sig(t.total_capacity, 9),
            format_sig(t.total_ergotropy, 9),
            format_sig(t.total_antiergotropy, 9),
            format_sig(w.capacity, 9),
            format_sig(low.beta, 9),
            format_sig(high.beta, 9),
            report.units,
        ),
    };
    emit(text, args.out.as_deref())
}

#[derive(Serialize)]
struct MontecarloReport {
    command: &'static str,
    ham: String,
    units: &'static str,
    dim: usize,
    model: String,
    n_samples: usize,
    seed: u64,
    mean: f64,
    variance: f64,
    std_error_of_variance: f64,
    analytic_variance: f64,
    z_score: f64,
    observed_min: f64,
    observed_max: f64,
    antiergotropy: f64,
    ergotropy: f64,
    batches: Vec<BatchRow>,
}

#[derive(Serialize)]
struct BatchRow {
    batch: usize,
    n: usize,
    mean: f64,
    variance: f64,
}

fn parse_model(model: &str) -> Result<PurityModel> {
    match model {
        "pure" => Ok(PurityModel::Pure),
        "hilbert-schmidt" | "hs" => Ok(PurityModel::HilbertSchmidt),
        other => {
            if let Some(rest) = other.strip_prefix("spectrum:") {
                let values: std::result::Result<Vec<f64>, _> =
                    rest.split(',').map(str::parse).collect();
                let values = values.map_err(|_| {
                    ErgoError::Parse(format!("invalid spectrum list '{rest}'"))
                })?;
                Ok(PurityModel::FixedSpectrum(Spectrum::from_unsorted(values)))
            } else {
                Err(ErgoError::Parse(format!(
                    "unknown model '{other}' (pure | hilbert-schmidt | spectrum:...)"
                )))
            }
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn run_montecarlo(
    state: Option<&str>,
    model: Option<&str>,
    dim: Option<usize>,
    ham: &str,
    samples: usize,
    seed: u64,
    format: OutputFormat,
    out: Option<&Path>,
) -> Result<()> {
    let h = parse_ham_spec(ham)?;
    let (rho, model_name) = match (state, model) {
        (Some(src), None) => (parse_state(src)?, "explicit".to_string()),
        (None, Some(m)) => {
            let dim = dim.unwrap_or(h.dim());
            let purity = parse_model(m)?;
            let mut rng = sampling::stream_rng(seed ^ 0x57A7E, 0);
            (sampling::random_density(dim, &purity, &mut rng)?, m.to_string())
        }
        _ => {
            return Err(ErgoError::Parse(
                "montecarlo needs exactly one of --state or --model".into(),
            ))
        }
    };
    let cfg = SampleConfig::new(
        rho.dim(),
        samples,
        seed,
        model.map(parse_model).transpose()?.unwrap_or(PurityModel::Pure),
    )?;
    let run = sampling::mc_work_variance(&rho, &h, &cfg)?;
    let w = crate::ergotropics::work_quantities(&rho, &h)?;
    let se = run.estimate.std_error_of_variance;
    let z = if se > 0.0 { (run.estimate.variance - run.analytic_variance) / se } else { 0.0 };

    // Ten equal batches for drift plots.
    let raw = sampling::sample_work_values(&rho, &h, seed, samples);
    let batch_size = (samples / 10).max(1);
    let batches: Vec<BatchRow> = raw
        .chunks(batch_size)
        .enumerate()
        .map(|(i, chunk)| {
            let est = sampling::summarize(chunk);
            BatchRow { batch: i + 1, n: chunk.len(), mean: est.mean, variance: est.variance }
        })
        .collect();

    let report = MontecarloReport {
        command: "montecarlo",
        ham: ham.to_string(),
        units: "absolute",
        dim: rho.dim(),
        model: model_name,
        n_samples: samples,
        seed,
        mean: run.estimate.mean,
        variance: run.estimate.variance,
        std_error_of_variance: se,
        analytic_variance: run.analytic_variance,
        z_score: z,
        observed_min: run.observed_min,
        observed_max: run.observed_max,
        antiergotropy: w.antiergotropy,
        ergotropy: w.ergotropy,
        batches,
    };
    let text = match format {
        OutputFormat::Json => to_json_pretty(&report)?,
        OutputFormat::Text => {
            let mut s = format!(
                "dim {} model {} samples {} seed {}\nsample variance      {}\n\
                 analytic variance    {}\njackknife SE         {}\nz score              {}\n\
                 observed range       [{}, {}]\nwork window          [{}, {}]\n",
                report.dim,
                report.model,
                report.n_samples,
                report.seed,
                format_sig(report.variance, 9),
                format_sig(report.analytic_variance, 9),
                format_sig(report.std_error_of_variance, 9),
                format_sig(report.z_score, 9),
                format_sig(report.observed_min, 9),
                format_sig(report.observed_max, 9),
                format_sig(report.antiergotropy, 9),
                format_sig(report.ergotropy, 9),
            );
            s.push_str("batch,n,mean,variance\n");
            for b in &report.batches {
                s.push_str(&format!(
                    "{},{},{},{}\n",
                    b.batch,
                    b.n,
                    format_sig(b.mean, 9),
                    format_sig(b.variance, 9)
                ));
            }
            s
        }
    };
    emit(text, out)
}

fn run_paper_report(seed: u64, format: OutputFormat, out: Option<&Path>) -> Result<()> {
    let report = paper_report(seed)?;
    let text = match format {
        OutputFormat::Json => to_json_pretty(&report)?,
        OutputFormat::Text => render_markdown(&report),
    };
    emit(text, out)
}

#[derive(Serialize)]
struct ValidateReport {
    command: &'static str,
    valid: bool,
    dim: usize,
    dims: Vec<usize>,
    trace: f64,
    purity: f64,
    min_eigenvalue: f64,
}

fn run_validate(state: &str, format: OutputFormat) -> Result<()> {
    let rho = parse_state(state)?;
    let report = ValidateReport {
        command: "validate",
        valid: true,
        dim: rho.dim(),
        dims: rho.dims().to_vec(),
        trace: rho.matrix().trace().re,
        purity: rho.purity(),
        min_eigenvalue: rho.spectrum().min(),
    };
    let text = match format {
        OutputFormat::Json => to_json_pretty(&report)?,
        OutputFormat::Text => format!(
            "valid           true\ndim             {}\ndims            {:?}\ntrace           {}\n\
             purity          {}\nmin eigenvalue  {}\n",
            report.dim,
            report.dims,
            format_sig(report.trace, 9),
            format_sig(report.purity, 9),
            format_sig(report.min_eigenvalue, 9),
        ),
    };
    emit(text, None)
}
