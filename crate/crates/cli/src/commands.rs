use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use qcldpc::bounds::{
    best_bound, comparison_table, exhaustive_search, render_table, BoundReport, TableColumn,
};
use qcldpc::construct::{construct, CaseTag, PermutationPolicy};
use qcldpc::girth::{check_m8_validity, girth_exponent, girth_lifted_with, shortest_cycle};
use qcldpc::lifting::{lift_with, rank_gf2, write_alist};
use qcldpc::sim::{
    ber_sweep, random_lifting, NamedCode, SimConfig, SweepTable, RANDOM_LIFTING_NOTE,
};
use qcldpc::{ExponentMatrix, Girth, Modulus, Workers};

use crate::args::{
    BoundArgs, Cli, Command, ConstructArgs, ExportArgs, Format, GirthArgs, SearchArgs, SimulateArgs,
};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    Domain(qcldpc::Error),
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Io { .. } => 1,
            CliError::Domain(_) => 2,
            CliError::Internal(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => f.write_str(m),
            CliError::Io { path, source } => write!(f, "{}: {source}", path.display()),
            CliError::Domain(e) => write!(f, "{e:?}: {e}"),
            CliError::Internal(m) => write!(f, "internal inconsistency: {m}"),
        }
    }
}

impl From<qcldpc::Error> for CliError {
    fn from(e: qcldpc::Error) -> Self {
        CliError::Domain(e)
    }
}

type Result<T> = std::result::Result<T, CliError>;

pub fn run(cli: Cli) -> Result<()> {
    let workers = cli.workers.map(Workers::from_count);
    let fmt = cli.format;
    match cli.command {
        Command::Construct(a) => cmd_construct(a, fmt),
        Command::Girth(a) => cmd_girth(a, fmt, workers.unwrap_or_default()),
        Command::Bound(a) => cmd_bound(a, fmt),
        Command::Export(a) => cmd_export(a, fmt, workers.unwrap_or_default()),
        Command::Simulate(a) => cmd_simulate(a, fmt, workers),
        Command::Search(a) => cmd_search(a, fmt, workers.unwrap_or_default()),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.into(),
        source,
    })
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.into(),
        source,
    })
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("output serializes");
    s.push('\n');
    s
}

fn read_matrix(path: &Path, p: Option<u64>) -> Result<ExponentMatrix> {
    let e: ExponentMatrix = read(path)?.parse()?;
    Ok(match p {
        Some(p) => e.with_lifting_degree(p)?,
        None => e,
    })
}

#[derive(Serialize)]
struct Sidecar<'a> {
    l: usize,
    d: u64,
    p: u64,
    p_min: u64,
    case: CaseTag,
    policy: PermutationPolicy,
    row_headers: &'a [u64],
    col_headers: &'a [u64],
    matrix: Vec<Vec<u64>>,
    bound: BoundReport,
    notes: &'a [String],
}

fn cmd_construct(a: ConstructArgs, fmt: Format) -> Result<()> {
    let c = construct(a.l, a.d)?;
    let p = a.p.unwrap_or(c.p_min);
    let e = c.emit_for_p(p)?;
    let bound = best_bound(a.l as u64, Some((c.m8.row_headers(), Modulus::Unbounded)))?;
    let sidecar = Sidecar {
        l: a.l,
        d: a.d,
        p,
        p_min: c.p_min,
        case: c.case,
        policy: c.params.policy,
        row_headers: c.m8.row_headers(),
        col_headers: c.m8.col_headers(),
        matrix: e.to_rows(),
        bound,
        notes: &c.notes,
    };
    match a.output {
        Some(path) => {
            let mut side = path.clone().into_os_string();
            side.push(".json");
            let side = PathBuf::from(side);
            write(&path, &e.to_string())?;
            write(&side, &json(&sidecar))?;
            println!(
                "wrote {} and {} (p = {p}, p_min = {})",
                path.display(),
                side.display(),
                c.p_min
            );
        }
        None if fmt == Format::Json => print!("{}", json(&sidecar)),
        None => print!("{e}"),
    }
    Ok(())
}

#[derive(Serialize)]
struct GirthReport {
    girth: Girth,
    exponent: Girth,
    lifted: Girth,
    /// Only for three-row matrices.
    m8_valid: Option<bool>,
    witness: Option<qcldpc::girth::CycleWitness>,
}

fn cmd_girth(a: GirthArgs, fmt: Format, workers: Workers) -> Result<()> {
    let e = read_matrix(&a.file, a.p)?;
    let exponent = girth_exponent(&e);
    let lifted = girth_lifted_with(&lift_with(&e, workers), workers)?;
    if exponent != lifted {
        return Err(CliError::Internal(format!(
            "exponent-level girth {exponent} but lifted girth {lifted}"
        )));
    }
    let m8_valid = if e.rows() == 3 {
        let valid = check_m8_validity(&e.normalize().to_m8()?).valid;
        if valid != exponent.at_least(8) {
            return Err(CliError::Internal(format!(
                "girth {exponent} but girth-8 matrix validity {valid}"
            )));
        }
        Some(valid)
    } else {
        None
    };
    let report = GirthReport {
        girth: exponent,
        exponent,
        lifted,
        m8_valid,
        witness: shortest_cycle(&e),
    };
    match fmt {
        Format::Json => print!("{}", json(&report)),
        Format::Csv => {
            println!("girth,exponent,lifted,m8_valid");
            let valid = m8_valid.map(|v| v.to_string()).unwrap_or_default();
            println!("{exponent},{exponent},{lifted},{valid}");
        }
        Format::Table => {
            println!("girth {exponent}");
            println!("exponent-level  {exponent}");
            println!("lifted-level    {lifted}");
            if let Some(v) = m8_valid {
                println!("m8-valid        {v}");
            }
            if let Some(w) = &report.witness {
                println!("cycle rows {:?} cols {:?}", w.rows, w.cols);
            }
        }
    }
    Ok(())
}

fn cmd_bound(a: BoundArgs, fmt: Format) -> Result<()> {
    if let Some(range) = a.table1 {
        let cols = comparison_table(range)?;
        match fmt {
            Format::Table => print!("{}", render_table(&cols)),
            Format::Json => print!("{}", json(&cols)),
            Format::Csv => print!("{}", table_csv(&cols)),
        }
        return Ok(());
    }
    let l =
        a.l.ok_or_else(|| CliError::Usage("--L or --table1 is required".into()))?;
    let headers = match &a.a_row {
        Some(path) => Some(parse_headers(&read(path)?)?),
        None => None,
    };
    let modulus = a.p.map_or(Modulus::Unbounded, Modulus::Finite);
    let report = best_bound(l, headers.as_deref().map(|h| (h, modulus)))?;
    match fmt {
        Format::Table => print!("{}", report.to_text()),
        Format::Json => print!("{}", json(&report)),
        Format::Csv => {
            println!("quantity,value");
            for line in report.to_text().lines() {
                let (name, value) = line.rsplit_once(' ').unwrap_or((line, ""));
                println!("\"{}\",{value}", name.trim());
            }
        }
    }
    Ok(())
}

fn parse_headers(text: &str) -> Result<Vec<u64>> {
    text.split_whitespace()
        .map(|t| {
            t.parse()
                .map_err(|_| qcldpc::Error::MalformedText(format!("bad header {t:?}")).into())
        })
        .collect()
}

fn table_csv(cols: &[TableColumn]) -> String {
    let mut out = String::from("l,lemma,construction,prior_construction\n");
    for c in cols {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            c.l, c.lemma, c.construction, c.prior_construction
        );
    }
    out
}

#[derive(Serialize)]
struct ExportReport {
    n: usize,
    m: usize,
    rank: usize,
    output: PathBuf,
}

fn cmd_export(a: ExportArgs, fmt: Format, workers: Workers) -> Result<()> {
    let e = read_matrix(&a.file, a.p)?;
    let h = lift_with(&e, workers);
    write(&a.output, &write_alist(&h))?;
    let report = ExportReport {
        n: h.n_cols(),
        m: h.n_rows(),
        rank: rank_gf2(&h),
        output: a.output,
    };
    match fmt {
        Format::Json => print!("{}", json(&report)),
        Format::Csv => println!("n,m,rank\n{},{},{}", report.n, report.m, report.rank),
        Format::Table => println!(
            "n {} m {} rank {} -> {}",
            report.n,
            report.m,
            report.rank,
            report.output.display()
        ),
    }
    Ok(())
}

fn cmd_simulate(a: SimulateArgs, fmt: Format, workers: Option<Workers>) -> Result<()> {
    let mut cfg = match &a.config {
        Some(path) => serde_json::from_str::<SimConfig>(&read(path)?)
            .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?,
        None => SimConfig::default(),
    };
    if let Some(v) = a.snr.clone() {
        cfg.snr_db = v.0;
    }
    if let Some(v) = a.max_iterations {
        cfg.max_iterations = v;
    }
    if let Some(v) = a.max_frames {
        cfg.max_frames = v;
    }
    if let Some(v) = a.max_frame_errors {
        cfg.max_frame_errors = v;
    }
    if let Some(v) = a.seed {
        cfg.master_seed = v;
    }
    if let Some(v) = a.alpha {
        cfg.normalization = v;
    }
    if let Some(v) = a.rate {
        cfg.rate_mode = v.into();
    }
    if let Some(w) = workers {
        cfg.workers = w;
    }
    cfg.validate()?;

    let mut shapes = Vec::new();
    let mut codes = Vec::new();
    for path in &a.input {
        let e = read_matrix(path, None)?;
        let id = path.file_stem().map_or_else(
            || path.display().to_string(),
            |s| s.to_string_lossy().into(),
        );
        shapes.push((e.rows(), e.cols(), e.lifting_degree()));
        codes.push(NamedCode::new(id, lift_with(&e, cfg.workers)));
    }
    if let Some(l) = a.l {
        let c = construct(l, a.d)?;
        let p = a.p.unwrap_or(c.p_min);
        let e = c.emit_for_p(p)?;
        shapes.push((3, l, p));
        codes.push(NamedCode::new(
            format!("construction-L{l}-d{}-p{p}", a.d),
            lift_with(&e, cfg.workers),
        ));
    }
    if let Some(seed) = a.baseline_seed {
        let &(j, l, p) = shapes
            .first()
            .ok_or_else(|| CliError::Usage("--baseline-seed needs another code".into()))?;
        let e = random_lifting(j, l, p, seed)?;
        codes.push(
            NamedCode::new(format!("random-L{l}-p{p}"), lift_with(&e, cfg.workers))
                .with_note(format!("{RANDOM_LIFTING_NOTE}; seed {seed}")),
        );
    }
    eprintln!(
        "config: {}",
        serde_json::to_string(&cfg).expect("config serializes")
    );

    let table = ber_sweep(&codes, &cfg)?;
    let text = match fmt {
        Format::Csv => table.to_csv()?,
        Format::Json => table.to_json() + "\n",
        Format::Table => sweep_text(&table),
    };
    match &a.output {
        Some(path) => write(path, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn sweep_text(table: &SweepTable) -> String {
    let mut out = String::new();
    for r in &table.results {
        let _ = writeln!(
            out,
            "{}  n={} m={} rank={} rate={:.4}",
            r.code_id, r.n, r.m, r.rank, r.rate
        );
        for note in &r.notes {
            let _ = writeln!(out, "  note: {note}");
        }
        let _ = writeln!(
            out,
            "  {:>7} {:>10} {:>10} {:>10} {:>11} {:>11} {:>7}",
            "snr_db", "frames", "bit_err", "frame_err", "ber", "fer", "iters"
        );
        for pt in &r.points {
            let _ = writeln!(
                out,
                "  {:>7.2} {:>10} {:>10} {:>10} {:>11.4e} {:>11.4e} {:>7.2}",
                pt.snr_db, pt.frames, pt.bit_errors, pt.frame_errors, pt.ber, pt.fer, pt.mean_iters
            );
        }
    }
    out
}

#[derive(Serialize)]
struct SearchReport {
    l: usize,
    p: u64,
    exists: bool,
    witness: Option<Vec<Vec<u64>>>,
}

fn cmd_search(a: SearchArgs, fmt: Format, workers: Workers) -> Result<()> {
    let found = exhaustive_search(a.l, a.p, workers)?;
    if let Some(e) = &found {
        if !girth_exponent(e).at_least(8) {
            return Err(CliError::Internal(format!(
                "search returned\n{e}with short cycles"
            )));
        }
    }
    let report = SearchReport {
        l: a.l,
        p: a.p,
        exists: found.is_some(),
        witness: found.as_ref().map(ExponentMatrix::to_rows),
    };
    match fmt {
        Format::Json => print!("{}", json(&report)),
        Format::Csv => println!("l,p,exists\n{},{},{}", a.l, a.p, report.exists),
        Format::Table => match &found {
            Some(e) => print!("witness (girth >= 8)\n{e}"),
            None => println!("none exists"),
        },
    }
    Ok(())
}
