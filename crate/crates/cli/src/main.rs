use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use reebflow::flowops::{smooth, truncate, truncated_smooth, FlowParams};
use reebflow::metrics::{estimate_distance, find_isomorphism, DistanceError, IsoOutcome, DEFAULT_ISO_BUDGET, DEFAULT_SEARCH_BUDGET};
use reebflow::properties::tail_report;
use reebflow::reeb::{component_count, image};
use reebflow::tooling::{generate, parse, serialize, to_dot, to_svg, Family, FormatError};
use reebflow::{Height, ReebGraph};

#[derive(Parser)]
#[command(name = "reebflow", version, about = "Smoothing, truncation and interleaving distances for Reeb graphs")]
struct Cli {
    /// Emit a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for the parallel searches.
    #[arg(long, global = true, env = "REEBFLOW_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check a graph document and list every violation.
    Validate { input: PathBuf },
    /// Smooth by `eps`.
    Smooth {
        #[arg(long)]
        eps: Height,
        input: PathBuf,
    },
    /// Remove points lacking a height-`tau` up-path or down-path.
    Truncate {
        #[arg(long)]
        tau: Height,
        input: PathBuf,
    },
    /// Truncated smoothing with `tau = m * eps`.
    Flow {
        #[arg(long)]
        eps: Height,
        #[arg(long)]
        m: Height,
        input: PathBuf,
    },
    /// Components, images, and tail and safety parameters.
    Check { input: PathBuf },
    /// Decide isomorphism.
    Iso {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value_t = DEFAULT_ISO_BUDGET)]
        budget: u64,
    },
    /// Bracket the truncated interleaving distance.
    Dist {
        #[arg(long)]
        m: Height,
        #[arg(long)]
        tol: Height,
        #[arg(long, default_value_t = DEFAULT_SEARCH_BUDGET)]
        budget: u64,
        a: PathBuf,
        b: PathBuf,
    },
    /// Write a fixture graph.
    Gen {
        #[command(subcommand)]
        family: Gen,
    },
    /// Draw a graph.
    Render {
        #[arg(long, value_enum, default_value_t = Format::Dot)]
        format: Format,
        input: PathBuf,
    },
}

#[derive(Subcommand)]
enum Gen {
    Segment { a: Height, b: Height },
    Cycle { a: Height, b: Height },
    Zigzag {
        #[arg(required = true, allow_negative_numbers = true)]
        heights: Vec<Height>,
    },
    Ladder { k: usize },
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Dot,
    Svg,
}

enum Failure {
    Domain(String, Option<Value>),
    Exhausted(String, Option<Value>),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Domain(..) => 1,
            Failure::Exhausted(..) => 2,
            Failure::Io(_) => 3,
        }
    }
}

fn domain(e: impl std::fmt::Display) -> Failure {
    Failure::Domain(e.to_string(), None)
}

enum Output {
    Text(String),
    Report(String, Value),
}

fn read(path: &PathBuf) -> Result<ReebGraph, Failure> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| Failure::Io(format!("stdin: {e}")))?;
        s
    } else {
        fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?
    };
    parse(&text).map_err(|e| Failure::Domain(format!("{}: {e}", path.display()), None))
}

fn graph_report(g: &ReebGraph) -> Value {
    json!({
        "document": serialize(g),
        "vertices": g.vertex_count(),
        "edges": g.edge_count(),
        "components": component_count(g),
    })
}

fn run(cmd: Cmd) -> Result<Output, Failure> {
    match cmd {
        Cmd::Validate { input } => {
            let text = fs::read_to_string(&input).map_err(|e| Failure::Io(format!("{}: {e}", input.display())))?;
            match parse(&text) {
                Ok(g) => Ok(Output::Report(
                    format!("ok: {} vertices, {} edges\n", g.vertex_count(), g.edge_count()),
                    json!({"valid": true, "violations": []}),
                )),
                Err(FormatError::Validation(v)) => {
                    let list: Vec<String> = v.0.iter().map(|x| x.to_string()).collect();
                    Err(Failure::Domain(list.join("\n"), Some(json!({"valid": false, "violations": list}))))
                }
                Err(e) => Err(Failure::Domain(e.to_string(), Some(json!({"valid": false, "violations": [e.to_string()]})))),
            }
        }
        Cmd::Smooth { eps, input } => {
            let s = smooth(&read(&input)?, &eps).map_err(domain)?;
            let mut rep = graph_report(&s.graph);
            rep["eps"] = json!(eps);
            Ok(Output::Report(serialize(&s.graph), rep))
        }
        Cmd::Truncate { tau, input } => {
            let t = truncate(&read(&input)?, &tau).map_err(domain)?;
            let mut rep = graph_report(&t.graph);
            rep["tau"] = json!(tau);
            rep["removed_up"] = json!(t.removed_up);
            rep["removed_down"] = json!(t.removed_down);
            Ok(Output::Report(serialize(&t.graph), rep))
        }
        Cmd::Flow { eps, m, input } => {
            let p = FlowParams::slope(eps, &m).map_err(domain)?;
            let g = truncated_smooth(&read(&input)?, &p).map_err(domain)?;
            let mut rep = graph_report(&g);
            rep["eps"] = json!(p.eps);
            rep["tau"] = json!(p.tau);
            Ok(Output::Report(serialize(&g), rep))
        }
        Cmd::Check { input } => {
            let g = read(&input)?;
            let (comps, overall) = image(&g);
            let t = tail_report(&g);
            let text = format!(
                "components: {}\nimage: {}\ncomponent images: {}\nmax tailed: {}\nmax weakly safe: {}\nmax safe: {}\n",
                comps.len(),
                overall,
                comps.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(" "),
                t.max_tailed,
                opt(&t.max_weak_safe),
                opt(&t.max_safe),
            );
            let rep = json!({
                "components": comps.len(),
                "image": overall.to_string(),
                "component_images": comps.iter().map(|i| i.to_string()).collect::<Vec<_>>(),
                "tails": t,
            });
            Ok(Output::Report(text, rep))
        }
        Cmd::Iso { a, b, budget } => {
            let g = Arc::new(read(&a)?);
            let h = Arc::new(read(&b)?);
            match find_isomorphism(&g, &h, budget) {
                IsoOutcome::Isomorphic(w) => {
                    let verified = w.verify();
                    Ok(Output::Report(
                        format!("isomorphic (witness verified: {verified})\n"),
                        json!({"isomorphic": true, "witness_verified": verified}),
                    ))
                }
                IsoOutcome::NotIsomorphic => {
                    Ok(Output::Report("not isomorphic\n".into(), json!({"isomorphic": false})))
                }
                IsoOutcome::Exhausted => Err(Failure::Exhausted(
                    "isomorphism search exhausted its budget".into(),
                    Some(json!({"isomorphic": null})),
                )),
            }
        }
        Cmd::Dist { m, tol, budget, a, b } => {
            let g = Arc::new(read(&a)?);
            let h = Arc::new(read(&b)?);
            match estimate_distance(&g, &h, &m, &tol, budget) {
                Ok(br) => Ok(Output::Report(bracket_text(&br), bracket_json(&br))),
                Err(DistanceError::BudgetExceeded(br)) => {
                    Err(Failure::Exhausted(format!("budget exhausted\n{}", bracket_text(&br)), Some(bracket_json(&br))))
                }
                Err(e) => Err(domain(e)),
            }
        }
        Cmd::Gen { family } => {
            let f = match family {
                Gen::Segment { a, b } => Family::Segment(a, b),
                Gen::Cycle { a, b } => Family::Cycle(a, b),
                Gen::Zigzag { heights } => Family::Zigzag(heights),
                Gen::Ladder { k } => Family::Ladder(k),
                Gen::Random { n, m, seed } => Family::Random { n, m, seed },
            };
            let out = generate(&f).map_err(domain)?;
            let mut rep = graph_report(&out.graph);
            rep["family"] = json!(f);
            rep["retries"] = json!(out.retries);
            Ok(Output::Report(serialize(&out.graph), rep))
        }
        Cmd::Render { format, input } => {
            let g = read(&input)?;
            let body = match format {
                Format::Dot => to_dot(&g),
                Format::Svg => to_svg(&g),
            };
            Ok(Output::Text(body))
        }
    }
}

fn opt(x: &Option<Height>) -> String {
    x.as_ref().map_or_else(|| "none".into(), |h| h.to_string())
}

fn bracket_text(br: &reebflow::metrics::DistanceBracket) -> String {
    format!(
        "m: {}\nlo: {}\nhi: {}\ncertificate: {}\nwitness: {}\nsearches: {}\n",
        br.m,
        br.lo,
        br.hi,
        br.certificate,
        br.witness.as_ref().map_or("none".to_string(), |w| format!("eps = {}", w.eps)),
        br.searches
    )
}

fn bracket_json(br: &reebflow::metrics::DistanceBracket) -> Value {
    json!({
        "m": br.m,
        "lo": br.lo.to_string(),
        "hi": br.hi.to_string(),
        "certificate": br.certificate,
        "witness_eps": br.witness.as_ref().map(|w| w.eps.clone()),
        "searches": br.searches,
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let json = cli.json;
    let mut stdout = io::stdout().lock();
    match run(cli.cmd) {
        Ok(Output::Text(t)) => {
            let _ = stdout.write_all(t.as_bytes());
            ExitCode::SUCCESS
        }
        Ok(Output::Report(t, v)) => {
            let body = if json { format!("{}\n", serde_json::to_string_pretty(&v).unwrap_or_default()) } else { t };
            let _ = stdout.write_all(body.as_bytes());
            ExitCode::SUCCESS
        }
        Err(f) => {
            let code = f.code();
            match f {
                Failure::Domain(msg, rep) | Failure::Exhausted(msg, rep) => {
                    if let (true, Some(v)) = (json, rep) {
                        let _ = writeln!(stdout, "{}", serde_json::to_string_pretty(&v).unwrap_or_default());
                    }
                    eprintln!("error: {msg}");
                }
                Failure::Io(msg) => eprintln!("error: {msg}"),
            }
            ExitCode::from(code)
        }
    }
}
