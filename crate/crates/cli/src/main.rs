use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use amalgam_core::decisions::{self, Index};
use amalgam_core::graph::{classify, isomorphic, LabelledGraph};
use amalgam_core::pipeline::{is_member, verify_precover, BuildOptions};
use amalgam_core::pipeline::graph_accepts;
use amalgam_core::separability::{is_embedding, separate};
use amalgam_core::subgroup_presentation::{compute_presentation, tietze_simplify};
use amalgam_core::{Amalgam, Error, Session};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

#[derive(Parser)]
#[command(name = "amalgam", version, about = "Subgroup graphs of amalgams of finite groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    JsonLines,
}

#[derive(Args)]
struct Common {
    /// Amalgam description file.
    file: PathBuf,
    /// Subgroup generator word; repeat for several.
    #[arg(long = "gen", value_name = "WORD")]
    gens: Vec<String>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Upper bound on cosets when enumerating the factors.
    #[arg(long)]
    coset_cap: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Build the subgroup graph and write it to disk.
    Build {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        /// Base name of the written files.
        #[arg(long, default_value = "subgroup")]
        name: String,
        /// Also write one frame per algorithm step.
        #[arg(long)]
        trace: bool,
        /// Also write a DOT rendering.
        #[arg(long)]
        dot: bool,
    },
    /// Decide membership of each word.
    Member {
        #[command(flatten)]
        common: Common,
        #[arg(required = true)]
        words: Vec<String>,
    },
    /// Decide whether the subgroup is free.
    Free {
        #[command(flatten)]
        common: Common,
    },
    /// Decide whether the subgroup is torsion-free.
    TorsionFree {
        #[command(flatten)]
        common: Common,
    },
    /// Compute the index of the subgroup.
    Index {
        #[command(flatten)]
        common: Common,
    },
    /// Compute a presentation of the subgroup.
    Present {
        #[command(flatten)]
        common: Common,
        /// Skip Tietze simplification.
        #[arg(long)]
        raw: bool,
    },
    /// Build a finite-index subgroup containing H but not the excluded word.
    Separate {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_name = "WORD")]
        exclude: String,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        #[arg(long, default_value = "separating")]
        name: String,
    },
    /// Print the subgroup graph in DOT format.
    ExportDot {
        #[command(flatten)]
        common: Common,
        /// Write to this directory instead of standard output.
        #[arg(long)]
        out_dir: Option<PathBuf>,
        #[arg(long, default_value = "subgroup")]
        name: String,
    },
    /// Check the subgroup graph against its defining properties.
    Verify {
        #[command(flatten)]
        common: Common,
    },
    /// Describe the amalgam.
    Info {
        #[command(flatten)]
        common: Common,
    },
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::Build { common, .. }
            | Command::Member { common, .. }
            | Command::Free { common }
            | Command::TorsionFree { common }
            | Command::Index { common }
            | Command::Present { common, .. }
            | Command::Separate { common, .. }
            | Command::ExportDot { common, .. }
            | Command::Verify { common }
            | Command::Info { common } => common,
        }
    }
}

enum Failure {
    Input(String),
    Unsupported(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::UnsupportedSeparability => Failure::Unsupported(e.to_string()),
            other => Failure::Input(other.to_string()),
        }
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure::Input(format!("cannot write {}: {e}", path.display()))
}

/// Collects output records and prints them as text lines or JSON objects.
struct Report {
    format: Format,
}

impl Report {
    fn emit(&self, text: impl AsRef<str>, fields: Value) {
        match self.format {
            Format::Text => println!("{}", text.as_ref()),
            Format::JsonLines => println!("{fields}"),
        }
    }
}

fn names(amalgam: &Amalgam) -> Vec<String> {
    amalgam.alphabet().names().to_vec()
}

fn dot(amalgam: &Amalgam, g: &LabelledGraph) -> String {
    g.to_dot(&names(amalgam), |gen| amalgam.factor_of(gen))
}

fn write(path: PathBuf, text: &str) -> Result<PathBuf, Failure> {
    fs::write(&path, text).map_err(|e| io_failure(&path, e))?;
    Ok(path)
}

fn summary(amalgam: &Amalgam, g: &LabelledGraph) -> Map<String, Value> {
    let report = classify(g, amalgam);
    let mono = |f| report.monochromatic(f).len();
    let mut m = Map::new();
    m.insert("vertices".into(), json!(g.num_vertices));
    m.insert("edges".into(), json!(g.num_edges()));
    m.insert("bichromatic".into(), json!(report.bichromatic().len()));
    m.insert("mono1".into(), json!(mono(amalgam_core::Factor::One)));
    m.insert("mono2".into(), json!(mono(amalgam_core::Factor::Two)));
    m.insert("components".into(), json!(report.components.len()));
    m
}

fn summary_text(m: &Map<String, Value>) -> String {
    format!(
        "vertices: {}\nedges: {}\nbichromatic: {}\nmonochromatic (factor 1): {}\nmonochromatic (factor 2): {}\ncomponents: {}",
        m["vertices"], m["edges"], m["bichromatic"], m["mono1"], m["mono2"], m["components"]
    )
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let common = cli.command.common();
    let out = Report {
        format: common.format,
    };
    let mut session = Session::load(&common.file, common.coset_cap)?;
    let gens = session.parse_words(&common.gens)?;
    match &cli.command {
        Command::Build {
            out_dir,
            name,
            trace,
            dot: with_dot,
            ..
        } => {
            fs::create_dir_all(out_dir).map_err(|e| io_failure(out_dir, e))?;
            let options = BuildOptions {
                trace: *trace,
                ..BuildOptions::default()
            };
            let sg = session.subgroup_with(&gens, &options)?.clone();
            let amalgam = &session.amalgam;
            let graph_path = write(out_dir.join(format!("{name}.graph")), &sg.graph.to_text(&names(amalgam)))?;
            let mut files = vec![graph_path.display().to_string()];
            if *with_dot {
                let p = write(out_dir.join(format!("{name}.dot")), &dot(amalgam, &sg.graph))?;
                files.push(p.display().to_string());
            }
            for (step, g) in &sg.trace {
                let p = write(out_dir.join(format!("{name}.{step}.dot")), &dot(amalgam, g))?;
                files.push(p.display().to_string());
            }
            let mut m = summary(amalgam, &sg.graph);
            m.insert("query".into(), json!("build"));
            m.insert("files".into(), json!(files));
            let text = format!("{}\nwrote: {}", summary_text(&m), files.join(", "));
            out.emit(text, Value::Object(m));
        }
        Command::Member { words, .. } => {
            let sg = session.subgroup(&gens)?.clone();
            let amalgam = &session.amalgam;
            for text in words {
                let w = amalgam.parse_word(text)?;
                let member = is_member(&sg, amalgam, &w);
                out.emit(
                    format!("{text}: {}", yes_no(member)),
                    json!({"query": "member", "word": text, "member": member}),
                );
            }
        }
        Command::Free { .. } | Command::TorsionFree { .. } => {
            let query = if matches!(cli.command, Command::Free { .. }) {
                "free"
            } else {
                "torsion-free"
            };
            let sg = session.subgroup(&gens)?.clone();
            let r = decisions::is_free(&sg.graph, &session.amalgam);
            let mut text = yes_no(r.free).to_string();
            if let Some(c) = r.witness {
                text.push_str(&format!(" (component {c} is not a full Cayley graph)"));
            }
            out.emit(text, json!({"query": query, "value": r.free, "witness": r.witness}));
        }
        Command::Index { .. } => {
            let sg = session.subgroup(&gens)?.clone();
            let amalgam = &session.amalgam;
            match decisions::index(&sg.graph, amalgam) {
                Index::Finite(k) => out.emit(k.to_string(), json!({"query": "index", "finite": true, "index": k})),
                Index::Infinite { witness, escape } => out.emit(
                    format!("infinite\nwitness vertex: {witness}\nescape word: {}", amalgam.show(&escape)),
                    json!({"query": "index", "finite": false, "witness": witness, "escape": amalgam.show(&escape)}),
                ),
            }
        }
        Command::Present { raw, .. } => {
            let sg = session.subgroup(&gens)?.clone();
            let amalgam = &session.amalgam;
            let mut p = compute_presentation(&sg.graph, amalgam);
            if !raw {
                p = tietze_simplify(&p);
            }
            let defs: Map<String, Value> = p
                .generators
                .iter()
                .map(|(n, w)| (n.clone(), json!(amalgam.show(w))))
                .collect();
            out.emit(
                p.display(amalgam).to_string().trim_end(),
                json!({"query": "present", "presentation": p.header(), "generators": defs}),
            );
        }
        Command::Separate {
            exclude,
            out_dir,
            name,
            ..
        } => {
            let sg = session.subgroup(&gens)?.clone();
            let amalgam = &session.amalgam;
            let w = amalgam.parse_word(exclude)?;
            let k = separate(&sg, amalgam, &w)?;
            fs::create_dir_all(out_dir).map_err(|e| io_failure(out_dir, e))?;
            let gp = write(out_dir.join(format!("{name}.graph")), &k.cover.to_text(&names(amalgam)))?;
            let dp = write(out_dir.join(format!("{name}.dot")), &dot(amalgam, &k.cover))?;
            let checklist = [
                ("saturated", k.cover.is_saturated_in(0..2 * amalgam.num_gens())),
                ("precover", verify_precover(&k.cover, amalgam).ok()),
                ("generators loop", gens.iter().all(|h| graph_accepts(&k.cover, amalgam, h))),
                ("excluded word does not loop", !graph_accepts(&k.cover, amalgam, &w)),
                ("subgroup graph embeds", is_embedding(&sg.graph, &k.cover, &k.embedding)),
            ];
            let mut text = format!("index: {}\ncase: {}\n", k.index, k.case);
            for (item, ok) in checklist {
                text.push_str(&format!("[{}] {item}\n", if ok { "ok" } else { "FAIL" }));
            }
            text.push_str(&format!("wrote: {}, {}", gp.display(), dp.display()));
            out.emit(
                text,
                json!({"query": "separate", "index": k.index, "case": k.case.to_string(),
                       "verified": checklist.iter().all(|c| c.1),
                       "files": [gp.display().to_string(), dp.display().to_string()]}),
            );
        }
        Command::ExportDot { out_dir, name, .. } => {
            let sg = session.subgroup(&gens)?.clone();
            let text = dot(&session.amalgam, &sg.graph);
            match out_dir {
                Some(dir) => {
                    fs::create_dir_all(dir).map_err(|e| io_failure(dir, e))?;
                    let p = write(dir.join(format!("{name}.dot")), &text)?;
                    out.emit(
                        format!("wrote: {}", p.display()),
                        json!({"query": "export-dot", "file": p.display().to_string()}),
                    );
                }
                None => print!("{text}"),
            }
        }
        Command::Verify { .. } => {
            let sg = session.subgroup(&gens)?.clone();
            let amalgam = &session.amalgam;
            let precover = verify_precover(&sg.graph, amalgam);
            let loops = sg
                .generators
                .iter()
                .all(|h| graph_accepts(&sg.graph, amalgam, h));
            let canonical = (1..=5u64).all(|seed| {
                let opts = BuildOptions {
                    order_seed: Some(seed),
                    trace: false,
                };
                let other = amalgam_core::pipeline::build_subgroup_graph(amalgam, &gens, &opts);
                isomorphic(&sg.graph, &other.graph).is_some()
            });
            let checks = [
                ("well-labelled", sg.graph.is_well_labelled()),
                ("precover", precover.ok()),
                ("connected", sg.graph.is_connected()),
                ("generators loop", loops),
                ("independent of folding order", canonical),
            ];
            let mut lines: Vec<String> = checks
                .iter()
                .map(|(item, ok)| format!("[{}] {item}", if *ok { "ok" } else { "FAIL" }))
                .collect();
            lines.extend(precover.diagnostics.iter().map(|d| format!("  {d}")));
            let fields: Map<String, Value> = checks
                .iter()
                .map(|(item, ok)| (item.replace(' ', "_"), json!(ok)))
                .chain([("query".to_string(), json!("verify"))])
                .collect();
            out.emit(lines.join("\n"), Value::Object(fields));
        }
        Command::Info { .. } => {
            let amalgam = &session.amalgam;
            let c = amalgam.classification();
            let tags = c.tags();
            let text = format!(
                "|G1| = {}\n|G2| = {}\n|A| = {}\nedge subgroup: {}",
                amalgam.order(amalgam_core::Factor::One),
                amalgam.order(amalgam_core::Factor::Two),
                amalgam.edge.order(),
                tags.join(", ")
            );
            out.emit(
                text,
                json!({"query": "info", "order1": amalgam.order(amalgam_core::Factor::One),
                       "order2": amalgam.order(amalgam_core::Factor::Two),
                       "edge_order": amalgam.edge.order(), "tags": tags}),
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Unsupported(m)) => {
            eprintln!("unsupported: {m}");
            ExitCode::from(3)
        }
    }
}
