//! `fivepair`: synthesize, verify, optimize and draw encodings for the
//! five-pair single-error-correcting code.
//!
//! Exit codes: 0 on success, 1 when a verification fails or a search finds
//! nothing within its bound, 2 on bad usage or unreadable input.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use fivepair::bell::table1;
use fivepair::io::{read_designation, read_matrix, read_records, read_sequence, render_sequence, to_json, to_jsonl};
use fivepair::synthesis::{enumerate_solutions, EnumerationOptions};
use fivepair::{
    minimal_sequence, permute_and_reduce, synthesize, ChoicePath, DesignationMatrix, GroupIndex, Mat10, Objective,
    OptimizationResult, SolutionRecord, VerificationReport, VerifyInput,
};

#[derive(Parser)]
#[command(name = "fivepair", version, about = "Encoding functions for the five-pair single-error-correcting code")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build encoding matrices and their reduction sequences from a designation.
    Synth(SynthArgs),
    /// Replay all sixteen syndromes through a matrix, sequence or record.
    Verify(VerifyArgs),
    /// Shorten the reduction sequence of a matrix or record.
    Optimize(OptimizeArgs),
    /// Draw a sequence as an ASCII gate array.
    Render(RenderArgs),
    /// Print the syndrome / measurement correspondence of a designation.
    Tables(TablesArgs),
}

#[derive(Args)]
struct Jobs {
    /// Worker threads. Output does not depend on this.
    #[arg(long, env = "FIVEPAIR_JOBS")]
    jobs: Option<usize>,
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("mode").required(true).args(["enumerate_all", "choices"]))]
struct SynthArgs {
    /// Designation: 4 rows of 10 bits, or JSON.
    #[arg(long)]
    designation: PathBuf,
    /// Order in which designation groups are processed, e.g. 2,1,3,4,5.
    #[arg(long, value_parser = parse_column_order)]
    column_order: Option<[GroupIndex; 5]>,
    /// Enumerate every feasible path.
    #[arg(long)]
    enumerate_all: bool,
    /// A choice path, or a JSON array of them.
    #[arg(long)]
    choices: Option<PathBuf>,
    /// Stop after this many records.
    #[arg(long)]
    limit: Option<usize>,
    #[command(flatten)]
    jobs: Jobs,
    /// Output directory; standard output when absent.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("input").required(true).args(["mw", "sequence", "record"]))]
struct VerifyArgs {
    /// Encoding matrix: 10 rows of 10 bits, or JSON.
    #[arg(long)]
    mw: Option<PathBuf>,
    /// Reduction sequence: JSON, gate list or gate array.
    #[arg(long)]
    sequence: Option<PathBuf>,
    /// One record, a JSON array of records, or JSONL.
    #[arg(long)]
    record: Option<PathBuf>,
    /// Designation; defaults to the record's, or to the matrix's measured rows.
    #[arg(long)]
    designation: Option<PathBuf>,
    /// Print the full reports as JSON instead of TSV.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct OptimizeArgs {
    /// Encoding matrix or record. `--permute-only` needs a record.
    #[arg(long)]
    mw: PathBuf,
    /// `total` or `bxor` (BXOR count first).
    #[arg(long, default_value = "total")]
    objective: Objective,
    /// Longest sequence searched.
    #[arg(long, default_value_t = 10)]
    max_depth: usize,
    /// Only reorder the record's own BXOR gates.
    #[arg(long)]
    permute_only: bool,
    #[command(flatten)]
    jobs: Jobs,
}

#[derive(Args)]
struct RenderArgs {
    /// Sequence or record.
    #[arg(long)]
    sequence: PathBuf,
}

#[derive(Args)]
struct TablesArgs {
    #[arg(long)]
    designation: PathBuf,
}

/// Failure with the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

fn failed(message: impl Into<String>) -> Failure {
    Failure { code: 1, message: message.into() }
}

type Outcome = Result<(), Failure>;

fn parse_column_order(s: &str) -> Result<[GroupIndex; 5], String> {
    let digits: Vec<usize> = if s.contains(',') {
        s.split(',').map(|t| t.trim().parse::<usize>().map_err(|e| e.to_string())).collect::<Result<_, _>>()?
    } else {
        s.chars().map(|c| c.to_digit(10).map(|d| d as usize).ok_or(format!("bad digit {c:?}"))).collect::<Result<_, _>>()?
    };
    let groups: Vec<GroupIndex> =
        digits.into_iter().map(|k| GroupIndex::new(k).map_err(|e| e.to_string())).collect::<Result<_, _>>()?;
    let order: [GroupIndex; 5] = groups.try_into().map_err(|_| "expected five groups".to_string())?;
    let mut seen = [false; 5];
    for g in order {
        if std::mem::replace(&mut seen[g.get() - 1], true) {
            return Err(format!("group {g} repeats"));
        }
    }
    Ok(order)
}

/// Reads a file, or standard input for `-`.
fn read(path: &Path) -> Result<String, Failure> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| usage(format!("stdin: {e}")))?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn parsed<T, E: std::fmt::Display>(path: &Path, r: Result<T, E>) -> Result<T, Failure> {
    r.map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> Outcome {
    fs::write(path, contents).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn emit(text: &str) -> Outcome {
    let mut out = io::stdout().lock();
    // a closed pipe is not an error worth reporting
    let _ = out.write_all(text.as_bytes()).and_then(|_| out.flush());
    Ok(())
}

fn set_jobs(jobs: &Jobs) -> Outcome {
    if let Some(n) = jobs.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
            .map_err(|e| usage(format!("--jobs: {e}")))?;
    }
    Ok(())
}

fn synth(args: SynthArgs) -> Outcome {
    set_jobs(&args.jobs)?;
    let mv = parsed(&args.designation, read_designation(&read(&args.designation)?))?;
    if let Err(e) = mv.validate() {
        return Err(usage(format!("{}: {e}", args.designation.display())));
    }
    if let Some(out) = &args.output {
        fs::create_dir_all(out).map_err(|e| usage(format!("{}: {e}", out.display())))?;
    }

    if let Some(choices) = &args.choices {
        let text = read(choices)?;
        let value: Value = parsed(choices, serde_json::from_str(&text))?;
        let single = !value.is_array();
        let mut paths: Vec<ChoicePath> = if single {
            vec![parsed(choices, serde_json::from_value(value))?]
        } else {
            parsed(choices, serde_json::from_value(value))?
        };
        if let Some(order) = args.column_order {
            paths.iter_mut().for_each(|p| p.column_order = order);
        }
        paths.truncate(args.limit.unwrap_or(usize::MAX));
        let mut records = Vec::with_capacity(paths.len());
        for (k, p) in paths.iter().enumerate() {
            let r = synthesize(&mv, p).map_err(|e| usage(format!("{} path {}: {e}", choices.display(), k + 1)))?;
            records.push(r);
        }
        return match (&args.output, single) {
            (Some(dir), true) => write_file(&dir.join("record.json"), &to_json(&records[0])),
            (None, true) => emit(&to_json(&records[0])),
            (Some(dir), false) => {
                write_file(&dir.join("records.jsonl"), &to_jsonl(&records))?;
                write_file(&dir.join("summary.json"), &to_json(&json!({ "records": records.len() })))
            }
            (None, false) => emit(&to_jsonl(&records)),
        };
    }

    let order = args.column_order.unwrap_or_else(fivepair::synthesis::identity_order);
    let (mut sink, path): (Box<dyn Write>, Option<PathBuf>) = match &args.output {
        Some(dir) => {
            let path = dir.join("records.jsonl");
            let file = fs::File::create(&path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
            (Box::new(io::BufWriter::new(file)), Some(path))
        }
        None => (Box::new(io::BufWriter::new(io::stdout().lock())), None),
    };
    let mut write_error = None;
    let stats = enumerate_solutions(&mv, order, EnumerationOptions { limit: args.limit, jobs: None }, |r| {
        if write_error.is_none() {
            write_error = serde_json::to_writer(&mut sink, &r).map_err(io::Error::from).and_then(|_| sink.write_all(b"\n")).err();
        }
    });
    let flushed = sink.flush();
    drop(sink);
    if let (Some(path), Some(e)) = (&path, write_error.or(flushed.err())) {
        return Err(usage(format!("{}: {e}", path.display())));
    }
    let summary = json!({
        "column_order": order,
        "records": stats.records,
        "options": stats.options,
        "infeasible": stats.infeasible,
    });
    match &args.output {
        Some(dir) => write_file(&dir.join("summary.json"), &to_json(&summary)),
        None => {
            eprint!("{}", to_json(&summary));
            Ok(())
        }
    }
}

const REPORT_HEADER: &str = "i\tx\tw\tv\tw'\trecovery\trestored";

fn report_tsv(r: &VerificationReport, record: Option<usize>) -> String {
    let mut s = String::new();
    for row in &r.rows {
        if let Some(k) = record {
            s.push_str(&format!("{k}\t"));
        }
        s.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
            row.i, row.x, row.w, row.v, row.w_prime, row.recovery, row.restored
        ));
    }
    s
}

/// Checks a record both ways: its matrix against the designation, and its
/// sequence's forward map relabeled onto it. The two must agree row for row.
fn verify_record(rec: &SolutionRecord, mv: &DesignationMatrix) -> VerificationReport {
    let mut report = fivepair::verify_solution(VerifyInput::Matrix(&rec.m_w), mv);
    if !rec.is_consistent() {
        report.failures.push("sequence, i_x and m_w are inconsistent".to_string());
    }
    let by_sequence = fivepair::verify_solution(VerifyInput::Sequence(&rec.sequence), mv);
    if by_sequence.correspondence() != report.correspondence() {
        report.failures.push("sequence gives a different measurement correspondence".to_string());
    }
    report.failures.extend(by_sequence.failures.into_iter().map(|f| format!("sequence: {f}")));
    report.pass = report.failures.is_empty();
    report
}

fn verify(args: VerifyArgs) -> Outcome {
    let designation = match &args.designation {
        Some(p) => Some(parsed(p, read_designation(&read(p)?))?),
        None => None,
    };
    let reports: Vec<VerificationReport> = if let Some(p) = &args.mw {
        let m: Mat10 = parsed(p, read_matrix(&read(p)?))?;
        let mv = designation.unwrap_or_else(|| DesignationMatrix::from_measured_rows(&m));
        vec![fivepair::verify_solution(VerifyInput::Matrix(&m), &mv)]
    } else if let Some(p) = &args.sequence {
        let seq = parsed(p, read_sequence(&read(p)?))?;
        let mv = designation.ok_or_else(|| usage("--sequence needs --designation"))?;
        vec![fivepair::verify_solution(VerifyInput::Sequence(&seq), &mv)]
    } else {
        let p = args.record.as_ref().expect("clap enforces one input");
        let records = parsed(p, read_records(&read(p)?))?;
        records.iter().map(|r| verify_record(r, designation.as_ref().unwrap_or(&r.designation))).collect()
    };

    let pass = reports.iter().all(|r| r.pass);
    if args.json {
        if reports.len() == 1 {
            emit(&to_json(&reports[0]))?;
        } else {
            emit(&to_json(&reports))?;
        }
    } else {
        let many = reports.len() > 1;
        let mut out = String::new();
        out.push_str(if many { "record\t" } else { "" });
        out.push_str(REPORT_HEADER);
        out.push('\n');
        for (k, r) in reports.iter().enumerate() {
            out.push_str(&report_tsv(r, many.then_some(k + 1)));
        }
        let failures: Vec<String> = reports
            .iter()
            .enumerate()
            .flat_map(|(k, r)| r.failures.iter().map(move |f| if many { format!("record {}: {f}", k + 1) } else { f.clone() }))
            .collect();
        let summary = json!({
            "pass": pass,
            "records": reports.len(),
            "passed": reports.iter().filter(|r| r.pass).count(),
            "failures": failures,
        });
        out.push_str(&serde_json::to_string(&summary).expect("plain data"));
        out.push('\n');
        emit(&out)?;
    }
    if pass {
        Ok(())
    } else {
        Err(Failure { code: 1, message: String::new() })
    }
}

fn optimize(args: OptimizeArgs) -> Outcome {
    set_jobs(&args.jobs)?;
    let text = read(&args.mw)?;
    let record: Option<SolutionRecord> = text
        .trim_start()
        .starts_with('{')
        .then(|| parsed(&args.mw, read_records(&text)))
        .transpose()?
        .and_then(|mut v| (v.len() == 1).then(|| v.remove(0)));
    let m_w = match &record {
        Some(r) => r.m_w,
        None => parsed(&args.mw, read_matrix(&text))?,
    };
    let mv = DesignationMatrix::from_measured_rows(&m_w);
    if let Err(e) = mv.validate() {
        return Err(usage(format!("{}: measured rows: {e}", args.mw.display())));
    }

    let (result, certified, depth): (OptimizationResult, bool, usize) = if args.permute_only {
        let rec = record.as_ref().ok_or_else(|| usage("--permute-only needs a record"))?;
        let r = permute_and_reduce(rec, args.objective);
        let len = r.best.len();
        (r, false, len)
    } else {
        match minimal_sequence(&m_w, args.objective, args.max_depth) {
            Ok(r) => (r, true, args.max_depth),
            Err(e) => return Err(failed(e.to_string())),
        }
    };

    let out = SolutionRecord {
        designation: mv,
        path: None,
        m_w,
        i_x: result.best_i_x,
        sequence: result.best.clone(),
        counts: None,
    };
    let check = verify_record(&out, &mv);
    if let Some(input) = &record {
        let before = fivepair::verify_solution(VerifyInput::Matrix(&input.m_w), &input.designation);
        if before.correspondence() != check.correspondence() {
            return Err(failed("optimized sequence changes the measurement correspondence"));
        }
    }
    let mut value = serde_json::to_value(&out).expect("plain data");
    value["optimality"] = json!({
        "certified": certified,
        "depth": depth,
        "objective": args.objective,
        "bxor": result.objective_value.0,
        "total": result.objective_value.1,
        "explored": result.explored,
    });
    emit(&to_json(&value))?;
    if check.pass {
        Ok(())
    } else {
        Err(failed(check.failures.join("; ")))
    }
}

fn render(args: RenderArgs) -> Outcome {
    let seq = parsed(&args.sequence, read_sequence(&read(&args.sequence)?))?;
    emit(&render_sequence(&seq))
}

fn tables(args: TablesArgs) -> Outcome {
    let mv = parsed(&args.designation, read_designation(&read(&args.designation)?))?;
    let rows = parsed(&args.designation, table1(&mv))?;
    let mut out = String::from("i\tx\tv\n");
    for r in rows {
        out.push_str(&format!("{}\t{}\t{}\n", r.i, r.x, r.v));
    }
    emit(&out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Synth(a) => synth(a),
        Command::Verify(a) => verify(a),
        Command::Optimize(a) => optimize(a),
        Command::Render(a) => render(a),
        Command::Tables(a) => tables(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            if !f.message.is_empty() {
                eprintln!("fivepair: {}", f.message);
            }
            ExitCode::from(f.code)
        }
    }
}
