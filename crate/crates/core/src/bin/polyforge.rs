use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use polyforge::action::{action_matrices, verify_action_relations};
use polyforge::coset::{enumerate, EnumConfig, Strategy, DEFAULT_MAX_COSETS};
use polyforge::input::PresentationFile;
use polyforge::kernel::analyse_subgroup;
use polyforge::pipeline::{self, FamilyReport, RunOptions};
use polyforge::polytope::{atlas_record, grid_csv, GridRow};
use polyforge::presets::{self, CaseData};
use polyforge::selftest::{self, Fault};
use polyforge::tietze::TietzeOptions;
use polyforge::word::{Presentation, Word};
use polyforge::Error;

#[derive(Parser)]
#[command(name = "polyforge", version, about = "Coset enumeration and chiral {4,8} polytope certification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate cosets and report index and normality.
    Enumerate(Source),
    /// Rewrite the subgroup presentation and simplify it.
    Rewrite(Source),
    /// Conjugation matrices of a built-in case.
    Action {
        #[arg(long)]
        case: u8,
        #[command(flatten)]
        out: Output,
    },
    /// Build the quotient for one `(case, m)`.
    Family {
        #[arg(long)]
        case: u8,
        #[arg(long, default_value_t = 1)]
        m: u64,
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        out: Output,
    },
    /// Full pipeline with claim checks.
    Certify {
        #[arg(long, conflicts_with = "all")]
        case: Option<u8>,
        #[arg(long, default_value_t = 1, conflicts_with = "m_max")]
        m: u64,
        #[arg(long)]
        all: bool,
        #[arg(long)]
        m_max: Option<u64>,
        /// Flip one action-matrix sign before checking relations.
        #[arg(long)]
        mutate_table: bool,
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        out: Output,
    },
    /// Oracle-based consistency suite.
    Selftest {
        #[arg(long)]
        quick: bool,
        #[arg(long)]
        inject_fault: Option<Fault>,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Args)]
struct Source {
    #[arg(long, conflicts_with = "file")]
    case: Option<u8>,
    /// TOML file with `generators`, `relators` and `subgroup`.
    #[arg(long)]
    file: Option<PathBuf>,
    /// Also print the coset table.
    #[arg(long)]
    table: bool,
    #[command(flatten)]
    run: RunArgs,
    #[command(flatten)]
    out: Output,
}

#[derive(Args, Clone)]
struct RunArgs {
    #[arg(long, env = "POLYFORGE_LIMIT", default_value_t = DEFAULT_MAX_COSETS)]
    limit: usize,
    #[arg(long, value_enum, default_value_t = StrategyArg::Felsch)]
    strategy: StrategyArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Hlt,
    Felsch,
}

impl RunArgs {
    fn config(&self) -> EnumConfig {
        EnumConfig::with_limit(self.limit).strategy(match self.strategy {
            StrategyArg::Hlt => Strategy::Hlt,
            StrategyArg::Felsch => Strategy::Felsch,
        })
    }
}

#[derive(Args, Clone)]
struct Output {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

enum Failure {
    Claim(String),
    Resource(String),
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_) | Error::UnknownSymbol(_) | Error::InvalidWord(_) | Error::Io(_) | Error::MissingImage(_) => {
                Failure::Input(e.to_string())
            }
            Error::Resource(_) | Error::PartialTable | Error::DegreeBound { .. } | Error::OrderCap(_) => {
                Failure::Resource(e.to_string())
            }
            _ => Failure::Claim(e.to_string()),
        }
    }
}

impl From<pipeline::StageError> for Failure {
    fn from(e: pipeline::StageError) -> Self {
        match Failure::from(e.source) {
            Failure::Claim(m) => Failure::Claim(format!("{} stage: {m}", e.stage)),
            Failure::Resource(m) => Failure::Resource(format!("{} stage: {m}", e.stage)),
            Failure::Input(m) => Failure::Input(format!("{} stage: {m}", e.stage)),
        }
    }
}

type Outcome = Result<(), Failure>;

fn emit(out: &Output, text: &str) -> Outcome {
    match &out.out {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Input(format!("{}: {e}", p.display()))),
        None => {
            let mut s = std::io::stdout().lock();
            s.write_all(text.as_bytes()).map_err(|e| Failure::Input(e.to_string()))
        }
    }
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("json serializes") + "\n"
}

fn case_data(id: u8) -> Result<CaseData, Failure> {
    presets::case(id).ok_or_else(|| Failure::Input(format!("unknown case {id}; expected 1-4")))
}

fn load_source(src: &Source) -> Result<(Presentation, Vec<Word>, Option<CaseData>), Failure> {
    match (&src.case, &src.file) {
        (Some(id), None) => {
            let c = case_data(*id)?;
            Ok((presets::group_u(), c.basis.to_vec(), Some(c)))
        }
        (None, Some(path)) => {
            let (p, sub) = PresentationFile::load(path)?.build()?;
            Ok((p, sub, None))
        }
        _ => Err(Failure::Input("give exactly one of --case or --file".into())),
    }
}

fn cmd_enumerate(src: &Source) -> Outcome {
    let (p, sub, case) = load_source(src)?;
    let t = enumerate(&p, &sub, &src.run.config())?;
    let complete = t.is_complete();
    let normal = if complete { Some(t.is_normal()?) } else { None };
    let t = if complete { t.standardize()? } else { t };
    let text = match src.out.format {
        Format::Json => {
            let mut v = json!({
                "complete": complete,
                "index": complete.then(|| t.live_count()),
                "normal": normal,
                "defined": t.defined_count(),
            });
            if let Some(c) = &case {
                v["case"] = json!(c.id);
            }
            if src.table {
                v["table"] = t.to_json();
            }
            pretty(&v)
        }
        Format::Csv => format!(
            "complete,index,normal,defined\n{},{},{},{}\n",
            complete,
            if complete { t.live_count().to_string() } else { String::new() },
            normal.map_or(String::new(), |n| n.to_string()),
            t.defined_count()
        ),
        Format::Text => {
            let mut s = if complete {
                format!("index {}, normal: {}\n", t.live_count(), normal.unwrap_or(false))
            } else {
                format!("incomplete after defining {} cosets\n", t.defined_count())
            };
            if src.table {
                s.push_str(&t.to_text());
            }
            s
        }
    };
    emit(&src.out, &text)?;
    if !complete {
        return Err(Failure::Resource("enumeration did not complete".into()));
    }
    Ok(())
}

fn cmd_rewrite(src: &Source) -> Outcome {
    let (p, sub, _) = load_source(src)?;
    let t = enumerate(&p, &sub, &src.run.config())?;
    if !t.is_complete() {
        return Err(Failure::Resource("enumeration did not complete".into()));
    }
    let (rw, summary) = analyse_subgroup(&p, &t, &TietzeOptions::default())?;
    let s = &summary.simplified;
    let names: Vec<String> = (0..s.generators.len()).map(|i| format!("s{}", i + 1)).collect();
    let al = polyforge::word::Alphabet::new(&names)?;
    let relators: Vec<String> = s.compact_relators().iter().map(|r| r.display(&al).to_string()).collect();
    let invariants: Vec<String> = summary.invariants.iter().map(|d| d.to_string()).collect();
    let text = match src.out.format {
        Format::Json => pretty(&json!({
            "index": rw.table.live_count(),
            "schreier_generators": summary.schreier_generators,
            "rewritten_relators": summary.rewritten_relators,
            "transversal_max_length": summary.transversal_max_length,
            "simplified_generators": s.generators.len(),
            "simplified_relators": relators,
            "budget_exhausted": s.budget_exhausted,
            "moves": s.moves,
            "abelian_invariants": invariants,
            "free_abelian_rank4": summary.is_free_abelian_rank4(),
        })),
        Format::Csv => format!(
            "index,schreier_generators,rewritten_relators,simplified_generators,simplified_relators,abelian_invariants\n{},{},{},{},{},\"{}\"\n",
            rw.table.live_count(),
            summary.schreier_generators,
            summary.rewritten_relators,
            s.generators.len(),
            s.relators.len(),
            invariants.join(" ")
        ),
        Format::Text => {
            let mut out = format!(
                "index {}\nschreier generators {}\nrewritten relators {}\nsimplified to {} generators, {} relators{}\nabelian invariants ({})\n",
                rw.table.live_count(),
                summary.schreier_generators,
                summary.rewritten_relators,
                s.generators.len(),
                s.relators.len(),
                if s.budget_exhausted { " (budget exhausted)" } else { "" },
                invariants.join(",")
            );
            if s.is_commutator_form() {
                out.push_str(&format!("< {} | {} >\n", names.join(", "), relators.join(", ")));
            }
            out
        }
    };
    emit(&src.out, &text)
}

fn cmd_action(id: u8, out: &Output) -> Outcome {
    let case = case_data(id)?;
    let u = presets::group_u();
    let t = enumerate(&u, &case.basis, &EnumConfig::default())?;
    let cm = polyforge::kernel::certify_free_abelian_rank4(&u, &t, &case.basis)?;
    let ap = action_matrices(&cm)?;
    let holds = verify_action_relations(&ap, &u)?;
    let rows = ap.rows_i64();
    let text = match out.format {
        Format::Json => pretty(&json!({
            "case": id,
            "a": rows[0],
            "b": rows[1],
            "det_a": ap.a().determinant().to_string(),
            "det_b": ap.b().determinant().to_string(),
            "relations_hold": holds,
        })),
        Format::Csv => {
            let mut s = String::from("generator,row,c1,c2,c3,c4\n");
            for (g, name) in ["a", "b"].iter().enumerate() {
                for (i, r) in rows[g].iter().enumerate() {
                    s.push_str(&format!("{name},{},{},{},{},{}\n", i + 1, r[0], r[1], r[2], r[3]));
                }
            }
            s
        }
        Format::Text => format!(
            "A_a (det {})\n{}A_b (det {})\n{}relators act trivially: {}\n",
            ap.a().determinant(),
            ap.a(),
            ap.b().determinant(),
            ap.b(),
            holds
        ),
    };
    emit(out, &text)?;
    if !holds {
        return Err(Failure::Claim("action stage: relators do not act trivially".into()));
    }
    Ok(())
}

fn run_options(run: &RunArgs, mutate: bool) -> RunOptions {
    let mut o = RunOptions::new(run.config());
    o.mutate_table = mutate;
    o
}

fn cmd_family(id: u8, m: u64, run: &RunArgs, out: &Output) -> Outcome {
    if m == 0 {
        return Err(Failure::Input("--m must be at least 1".into()));
    }
    let case = case_data(id)?;
    let opts = RunOptions {
        direct_limit: 0,
        ..run_options(run, false)
    };
    let kernel = pipeline::prepare_case(&case, &opts)?;
    let (_, r) = pipeline::family(&kernel, m, &opts)?;
    let record = json!({
        "case": id,
        "m": m,
        "order": r.order,
        "generator_orders": {"a": r.generator_orders[0], "b": r.generator_orders[1], "ab": r.generator_orders[2]},
        "witness_orders": r.witness_orders,
        "validated": r.validated,
    });
    let text = match out.format {
        Format::Json => pretty(&record),
        Format::Csv => format!(
            "case,m,order,a,b,ab,mirror_witness,variant_witness,validated\n{id},{m},{},{},{},{},{},{},{}\n",
            r.order,
            r.generator_orders[0],
            r.generator_orders[1],
            r.generator_orders[2],
            r.witness_orders.mirror_image,
            r.witness_orders.variant,
            r.validated
        ),
        Format::Text => format!(
            "case {id}, m = {m}: order {}, |a| = {}, |b| = {}, |ab| = {}, mirror witness order {}, variant witness order {}, validated {}\n",
            r.order,
            r.generator_orders[0],
            r.generator_orders[1],
            r.generator_orders[2],
            r.witness_orders.mirror_image,
            r.witness_orders.variant,
            r.validated
        ),
    };
    emit(out, &text)
}

fn report_text(r: &FamilyReport) -> String {
    let p = &r.polytope;
    let mut s = format!(
        "case {}, m = {}: order {}, type {{{},{}}}, |ab| = {}, |<a> ∩ <b>| = {}, {}, chi {}, genus {}\n",
        r.case,
        r.m,
        r.order,
        p.k1,
        p.k2,
        p.k12,
        p.intersection,
        p.verdict,
        p.chi.map_or("-".into(), |c| c.to_string()),
        p.genus.map_or("-".into(), |g| g.to_string()),
    );
    if let Some(w) = &p.witness {
        s.push_str(&format!(
            "  witness: relator {} = ({})^{} maps to an element of order {}; root image has order {}\n",
            w.relator, w.root, w.power, w.image_order, w.root_image_order
        ));
    }
    if let Some(cv) = &r.cross_validation {
        s.push_str(&format!("  direct enumeration: index {}, orders agree: {}\n", cv.direct_index, cv.agree));
    }
    s.push_str(&format!("  solvable: {}\n", r.solvable));
    for c in r.claims.iter().filter(|c| !c.ok) {
        s.push_str(&format!("  MISMATCH [{}] {}: expected {}, found {}\n", c.stage, c.name, c.expected, c.found));
    }
    s
}

#[allow(clippy::too_many_arguments)]
fn cmd_certify(case: Option<u8>, m: u64, all: bool, m_max: Option<u64>, mutate: bool, run: &RunArgs, out: &Output) -> Outcome {
    let opts = run_options(run, mutate);
    let cases = match (case, all) {
        (Some(id), false) => vec![case_data(id)?],
        (None, true) => presets::all_cases(),
        _ => return Err(Failure::Input("give --case or --all".into())),
    };
    let (lo, hi) = match m_max {
        Some(k) => (1, k),
        None => (m, m),
    };
    if lo == 0 {
        return Err(Failure::Input("--m must be at least 1".into()));
    }
    let results: Vec<_> = pipeline::grid(&cases, hi, &opts)
        .into_iter()
        .filter(|r| match r {
            Ok(r) => r.m >= lo,
            Err((_, m, _)) => *m >= lo,
        })
        .collect();
    let mut reports = Vec::new();
    let mut first_error = None;
    for r in results {
        match r {
            Ok(r) => reports.push(r),
            Err((id, m, e)) => {
                eprintln!("case {id}, m = {m}: {e}");
                first_error.get_or_insert((id, m, Failure::from(e)));
            }
        }
    }
    let text = match out.format {
        Format::Json => {
            let v: Vec<_> = reports
                .iter()
                .map(|r| {
                    let mut a = atlas_record(&r.polytope, r.case, r.m);
                    a["claims_hold"] = json!(r.all_claims_hold());
                    a["report"] = serde_json::to_value(r).expect("report serializes");
                    a
                })
                .collect();
            pretty(&json!(v))
        }
        Format::Csv => {
            let rows: Vec<GridRow> = reports.iter().map(|r| GridRow::new(&r.polytope, r.case, r.m)).collect();
            grid_csv(&rows)?
        }
        Format::Text => reports.iter().map(report_text).collect(),
    };
    emit(out, &text)?;
    if let Some((id, m, f)) = first_error {
        return Err(match f {
            Failure::Claim(s) => Failure::Claim(format!("case {id}, m = {m}: {s}")),
            other => other,
        });
    }
    if let Some(r) = reports.iter().find(|r| !r.all_claims_hold()) {
        let c = r.first_failure().expect("a claim failed");
        return Err(Failure::Claim(format!(
            "case {}, m = {}: {} stage: {} expected {}, found {}",
            r.case, r.m, c.stage, c.name, c.expected, c.found
        )));
    }
    Ok(())
}

fn cmd_selftest(quick: bool, fault: Option<Fault>, out: &Output) -> Outcome {
    let checks = selftest::run(quick, fault);
    let text = match out.format {
        Format::Json => pretty(&json!(checks)),
        Format::Csv => {
            let mut s = String::from("check,passed,detail\n");
            for c in &checks {
                s.push_str(&format!("\"{}\",{},\"{}\"\n", c.name, c.passed, c.detail));
            }
            s
        }
        Format::Text => checks
            .iter()
            .map(|c| format!("{} {} ({})\n", if c.passed { "pass" } else { "FAIL" }, c.name, c.detail))
            .collect(),
    };
    emit(out, &text)?;
    match checks.iter().filter(|c| !c.passed).count() {
        0 => Ok(()),
        n => Err(Failure::Claim(format!("{n} self-test checks failed"))),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = match &cli.command {
        Command::Enumerate(src) => cmd_enumerate(src),
        Command::Rewrite(src) => cmd_rewrite(src),
        Command::Action { case, out } => cmd_action(*case, out),
        Command::Family { case, m, run, out } => cmd_family(*case, *m, run, out),
        Command::Certify {
            case,
            m,
            all,
            m_max,
            mutate_table,
            run,
            out,
        } => cmd_certify(*case, *m, *all, *m_max, *mutate_table, run, out),
        Command::Selftest { quick, inject_fault, out } => cmd_selftest(*quick, *inject_fault, out),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Claim(m)) => {
            eprintln!("polyforge: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Resource(m)) => {
            eprintln!("polyforge: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Input(m)) => {
            eprintln!("polyforge: {m}");
            ExitCode::from(3)
        }
    }
}
