use clap::{Parser, Subcommand};
use fatdecomp_cli::{
    corpus_exit, decompose, error_code, exit_code, format_row, parse_k_range, run_corpus, verify,
    Certificate, Kind, RunOptions, Target, VerifyOptions, BUDGET_ENV, EXIT_INPUT, EXIT_INVALID, EXIT_OK,
};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "fatdecomp", version, about = "Radial decompositions or fat K4 / K4- minors")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decompose a graph or find a fat minor.
    ///
    /// Exit codes: 0 decomposition, 10 witness, 20 budget exhausted,
    /// 2 bad input, 3 internal failure.
    Decompose {
        /// Edge-list file, `-` for stdin.
        input: PathBuf,
        #[arg(long, value_enum, default_value = "k4")]
        target: Target,
        #[arg(long, default_value_t = 1)]
        fat: usize,
        #[arg(long, env = BUDGET_ENV, default_value_t = fatdecomp::sp::DEFAULT_BUDGET)]
        budget: u64,
        /// Use the K4 constants with this Menger factor (at least 4).
        #[arg(long, value_name = "M")]
        scaled_constants: Option<usize>,
        /// Directory for the certificate files and report.json.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Check a certificate against a graph. Exit codes: 0 valid, 1 invalid,
    /// 2 unreadable or of another kind.
    Verify {
        graph: PathBuf,
        certificate: PathBuf,
        #[arg(long, value_enum)]
        kind: Kind,
        /// Pattern the model must be of, or the decomposition graph must avoid.
        #[arg(long, value_enum)]
        target: Option<Target>,
        /// Required fatness of a model; with --target, the K whose bounds a
        /// decomposition must meet.
        #[arg(long)]
        fat: Option<usize>,
        #[arg(long, value_name = "M")]
        scaled_constants: Option<usize>,
        /// Decomposition the quasi-isometry belongs to.
        #[arg(long)]
        decomposition: Option<PathBuf>,
    },
    /// Run a corpus of generated graphs and check every result.
    Corpus {
        /// Items like `cycle:60;grid:8x8;builtin`.
        #[arg(default_value = "builtin")]
        spec: String,
        /// `1`, `1..3` or `1,2`.
        #[arg(long, default_value = "1")]
        fat: String,
        #[arg(long, value_enum, value_delimiter = ',', default_value = "k4minus,k4")]
        target: Vec<Target>,
        #[arg(long, env = BUDGET_ENV, default_value_t = fatdecomp::sp::DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long, value_name = "M")]
        scaled_constants: Option<usize>,
        /// Do not fail the sweep on budget errors.
        #[arg(long)]
        allow_budget_errors: bool,
        #[arg(long)]
        json: bool,
    },
}

fn read(path: &Path) -> Result<Vec<u8>, String> {
    if path == Path::new("-") {
        let mut buf = Vec::new();
        std::io::Read::read_to_end(&mut std::io::stdin(), &mut buf).map_err(|e| e.to_string())?;
        return Ok(buf);
    }
    std::fs::read(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn read_text(path: &Path) -> Result<String, String> {
    String::from_utf8(read(path)?).map_err(|_| format!("{}: not UTF-8", path.display()))
}

fn main() -> ExitCode {
    let code = match Cli::parse().cmd {
        Cmd::Decompose { input, target, fat, budget, scaled_constants, out, json } => {
            let opts = RunOptions { target, fat, budget, scaled: scaled_constants };
            cmd_decompose(&input, &opts, out.as_deref(), json)
        }
        Cmd::Verify { graph, certificate, kind, target, fat, scaled_constants, decomposition } => {
            cmd_verify(&graph, &certificate, kind, target, fat, scaled_constants, decomposition.as_deref())
        }
        Cmd::Corpus { spec, fat, target, budget, scaled_constants, allow_budget_errors, json } => {
            cmd_corpus(&spec, &fat, &target, budget, scaled_constants, allow_budget_errors, json)
        }
    };
    ExitCode::from(code as u8)
}

fn cmd_decompose(input: &Path, opts: &RunOptions, out: Option<&Path>, json: bool) -> i32 {
    let bytes = match read(input) {
        Ok(b) => b,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INPUT;
        }
    };
    let (report, cert) = match decompose(&bytes, opts) {
        Ok(x) => x,
        Err(e) => {
            eprintln!("error: {e}");
            return error_code(&e);
        }
    };
    let report_json = serde_json::to_string_pretty(&report).expect("reports serialize");
    if let Some(dir) = out {
        if let Err(e) = write_artifacts(dir, &report_json, &cert) {
            eprintln!("error: {e}");
            return fatdecomp_cli::EXIT_FAILED;
        }
        if json {
            println!("{report_json}");
        } else {
            println!("{:?} written to {}", report.branch, dir.display());
        }
    } else if json {
        let (kind, text, qi) = match &cert {
            Certificate::Decomposition { text, qi } => ("decomposition", Some(text), Some(qi)),
            Certificate::Witness { text } => ("model", Some(text), None),
            Certificate::None => ("none", None, None),
        };
        let env = serde_json::json!({
            "report": report,
            "certificate": { "kind": kind, "text": text, "qi": qi },
        });
        println!("{}", serde_json::to_string_pretty(&env).expect("envelopes serialize"));
    } else {
        match &cert {
            Certificate::Decomposition { text, .. } | Certificate::Witness { text } => print!("{text}"),
            Certificate::None => {}
        }
        eprintln!("{report_json}");
    }
    if let Some(e) = &report.error {
        eprintln!("error: {e}");
    }
    exit_code(report.branch)
}

fn write_artifacts(dir: &Path, report: &str, cert: &Certificate) -> std::io::Result<()> {
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join("report.json"), report)?;
    match cert {
        Certificate::Decomposition { text, qi } => {
            std::fs::write(dir.join("decomposition.txt"), text)?;
            std::fs::write(dir.join("qi.txt"), qi)?;
        }
        Certificate::Witness { text } => std::fs::write(dir.join("witness.txt"), text)?,
        Certificate::None => {}
    }
    Ok(())
}

fn cmd_verify(
    graph: &Path,
    cert: &Path,
    kind: Kind,
    target: Option<Target>,
    fat: Option<usize>,
    scaled: Option<usize>,
    decomposition: Option<&Path>,
) -> i32 {
    let texts = read_text(graph).and_then(|g| {
        let c = read_text(cert)?;
        let d = decomposition.map(read_text).transpose()?;
        Ok((g, c, d))
    });
    let (g, c, d) = match texts {
        Ok(x) => x,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INPUT;
        }
    };
    let opts = VerifyOptions { target, fat, scaled, decomposition: d };
    match verify(&g, &c, kind, &opts) {
        Ok(Ok(msg)) => {
            println!("{msg}");
            EXIT_OK
        }
        Ok(Err(msg)) => {
            println!("invalid: {msg}");
            EXIT_INVALID
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INPUT
        }
    }
}

fn cmd_corpus(
    spec: &str,
    fat: &str,
    targets: &[Target],
    budget: u64,
    scaled: Option<usize>,
    allow_budget: bool,
    json: bool,
) -> i32 {
    let setup = fatdecomp::corpus::parse_spec(spec).and_then(|g| Ok((g, parse_k_range(fat)?)));
    let (graphs, ks) = match setup {
        Ok(x) => x,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INPUT;
        }
    };
    let runs: Vec<RunOptions> = targets
        .iter()
        .flat_map(|&t| {
            ks.iter().map(move |&k| RunOptions {
                target: t,
                fat: k,
                budget,
                scaled: if t == Target::K4 { scaled } else { None },
            })
        })
        .collect();
    let rows = run_corpus(&graphs, &runs);
    for r in &rows {
        if json {
            println!("{}", serde_json::to_string(r).expect("rows serialize"));
        } else {
            println!("{}", format_row(r));
        }
    }
    let code = corpus_exit(&rows, allow_budget);
    if code == EXIT_INVALID {
        eprintln!("some runs did not verify");
    }
    code
}
