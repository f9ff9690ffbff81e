use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use hillgraph::dpo::{apply, find_matches, reachable, Gts, StepRecord};
use hillgraph::encoder::{certify_trace, decode, emit_step_derivation, encode_graph, type_graph_of, verify_correspondence, Reading};
use hillgraph::format::{parse_gts, parse_hg, write_hg};
use hillgraph::gen;
use hillgraph::hill::{parse_hill, HillFile, Sequent};
use hillgraph::hypergraph::{find_isomorphisms, TypeGraph, TypedHypergraph};
use hillgraph::kernel::{check, parse_prf, prove, write_prf, ProofTree};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

#[derive(Parser)]
#[command(name = "hillgraph", about = "DPO graph rewriting certified in a linear logic with hiding")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Subcommand)]
enum Command {
    /// Check a proof tree.
    Check { file: PathBuf },
    /// Search for proofs of the sequents (or closed formulas) of a `.hill` file.
    Prove {
        file: PathBuf,
        #[arg(long, default_value_t = 12)]
        depth: usize,
        /// Only this declaration.
        #[arg(long)]
        name: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Apply one rule at one match, emitting the result and its certificate.
    Apply {
        system: PathBuf,
        /// Host graph (`.hg`, first graph); the start graph by default.
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long)]
        rule: Option<String>,
        #[arg(long = "match", default_value_t = 0)]
        index: usize,
        /// List matches and their gluing status instead.
        #[arg(long)]
        list: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Breadth-first reachability from the start graph.
    Search {
        system: PathBuf,
        #[arg(long)]
        target: PathBuf,
        #[arg(long, default_value_t = 4)]
        depth: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Encode a graph as a formula with its derivation.
    Encode {
        file: PathBuf,
        #[arg(long)]
        graph: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decode a normal graph formula.
    Decode {
        file: PathBuf,
        #[arg(long)]
        name: Option<String>,
        /// A `.hg` or `.gts` file providing the type graph.
        #[arg(long)]
        types: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare rewriting with certified derivations on random hosts.
    Verify {
        system: PathBuf,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Decide isomorphism of the first graphs of two `.hg` files.
    Iso { a: PathBuf, b: PathBuf },
}

/// A completed run: its output and whether it is a negative answer.
struct Outcome {
    text: String,
    structured: serde_json::Value,
    failed: bool,
}

impl Outcome {
    fn ok(text: String, structured: serde_json::Value) -> Outcome {
        Outcome { text, structured, failed: false }
    }

    fn failed(text: String, structured: serde_json::Value) -> Outcome {
        Outcome { text, structured, failed: true }
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn write(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).with_context(|| format!("cannot write {}", path.display()))
}

fn certificate_path(out: &Path) -> PathBuf {
    out.with_extension("prf")
}

fn load_gts(path: &Path) -> Result<Gts> {
    parse_gts(&read(path)?).map_err(|e| anyhow!("{}: {e}", path.display()))
}

fn load_graph(path: &Path, name: Option<&str>) -> Result<TypedHypergraph> {
    let doc = parse_hg(&read(path)?).map_err(|e| anyhow!("{}: {e}", path.display()))?;
    match name {
        Some(n) => doc.graph(n).cloned().ok_or_else(|| anyhow!("{}: no graph {n}", path.display())),
        None => doc.graphs.into_iter().next().ok_or_else(|| anyhow!("{}: no graph", path.display())),
    }
}

fn load_hill(path: &Path) -> Result<HillFile> {
    parse_hill(&read(path)?).map_err(|e| anyhow!("{}: {e}", path.display()))
}

/// Graphs from another file are re-typed over the system's type graph.
fn retype(g: &TypedHypergraph, tg: &Arc<TypeGraph>) -> Result<TypedHypergraph> {
    if **g.type_graph() != **tg {
        bail!("graph {} is not typed over {}", g.name, tg.name);
    }
    let mut h = TypedHypergraph::new(g.name.clone(), tg.clone());
    for (n, l) in g.nodes() {
        h.add_node(n.clone(), l.clone())?;
    }
    for (e, edge) in g.edges() {
        h.add_edge(e.clone(), edge.label.clone(), edge.attach.clone())?;
    }
    Ok(h)
}

fn valid(g: &TypedHypergraph) -> Result<()> {
    if let Some(v) = g.validate().first() {
        bail!("graph {}: {v}", g.name);
    }
    Ok(())
}

fn checked(tree: ProofTree) -> Result<ProofTree> {
    let r = check(&tree);
    if !r.ok {
        bail!("internal error: emitted certificate does not check\n{r}");
    }
    Ok(tree)
}

fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Check { file } => {
            let tree = parse_prf(&read(file)?).map_err(|e| anyhow!("{}: {e}", file.display()))?;
            let r = check(&tree);
            let s = serde_json::to_value(&r)?;
            Ok(if r.ok { Outcome::ok(r.to_string(), s) } else { Outcome::failed(r.to_string(), s) })
        }
        Command::Prove { file, depth, name, out } => {
            let hill = load_hill(file)?;
            let mut goals: Vec<(String, Sequent)> = hill.sequents.clone();
            if goals.is_empty() {
                goals = hill.formulas.iter().map(|(n, f)| (n.clone(), Sequent::new(vec![], vec![], None, f.clone()))).collect();
            }
            if let Some(n) = name {
                goals.retain(|(m, _)| m == n);
                if goals.is_empty() {
                    bail!("{}: no declaration {n}", file.display());
                }
            }
            let mut text = String::new();
            let mut results = Vec::new();
            let mut missing = false;
            for (n, s) in &goals {
                match prove(s, *depth) {
                    Some(t) => {
                        let prf = write_prf(&checked(t)?);
                        if let Some(out) = out {
                            let path = if goals.len() == 1 { out.clone() } else { out.join(format!("{n}.prf")) };
                            write(&path, &prf)?;
                            text.push_str(&format!("{n}: proved, written to {}\n", path.display()));
                        } else {
                            text.push_str(&format!("# {n}\n{prf}"));
                        }
                        results.push(json!({"name": n, "proved": true, "proof": prf}));
                    }
                    None => {
                        missing = true;
                        text.push_str(&format!("{n}: no proof within bound {depth}\n"));
                        results.push(json!({"name": n, "proved": false}));
                    }
                }
            }
            let s = json!({"depth": depth, "results": results});
            Ok(if missing { Outcome::failed(text, s) } else { Outcome::ok(text, s) })
        }
        Command::Apply { system, graph, rule, index, list, out } => {
            let gts = load_gts(system)?;
            let host = match graph {
                Some(p) => retype(&load_graph(p, None)?, &gts.type_graph)?,
                None => gts.start.clone(),
            };
            valid(&host)?;
            let rules: Vec<_> = match rule {
                Some(r) => vec![gts.rules.get(r).ok_or_else(|| anyhow!("no rule {r}"))?],
                None => gts.rules.values().collect(),
            };
            if *list {
                let mut text = String::new();
                let mut entries = Vec::new();
                for r in &rules {
                    for m in find_matches(r, &host) {
                        let map: Vec<String> = m.morphism.node_map.iter().map(|(a, b)| format!("{a}->{b}")).collect();
                        let status = match apply(r, &host, &m.morphism) {
                            Ok(_) => "applicable".to_string(),
                            Err(e) => e.to_string(),
                        };
                        text.push_str(&format!("{} {} [{}] {status}\n", r.name, m.index, map.join(", ")));
                        entries.push(json!({"rule": r.name, "index": m.index, "nodes": map, "status": status}));
                    }
                }
                return Ok(Outcome::ok(text, json!({"matches": entries})));
            }
            let [r] = rules.as_slice() else { bail!("--rule is required when the system has several rules") };
            let ms = find_matches(r, &host);
            let m = ms.get(*index).ok_or_else(|| anyhow!("rule {} has {} matches, no match {index}", r.name, ms.len()))?;
            let step = match apply(r, &host, &m.morphism) {
                Ok(s) => s,
                Err(e) => return Ok(Outcome::failed(format!("{e}\n"), json!({"error": e.to_string()}))),
            };
            let mut result = step.result.clone();
            result.name = "H".into();
            let hg = write_hg(&[&result]);
            let prf = write_prf(&checked(emit_step_derivation(r, &step)?)?);
            let text = match out {
                Some(out) => {
                    write(out, &hg)?;
                    write(&certificate_path(out), &prf)?;
                    format!("written {} and {}\n", out.display(), certificate_path(out).display())
                }
                None => format!("{hg}\n{prf}"),
            };
            let cert = out.as_ref().map(|o| certificate_path(o).display().to_string());
            Ok(Outcome::ok(text, json!({"rule": r.name, "match": index, "graph": hg, "certificate": cert, "proof": prf})))
        }
        Command::Search { system, target, depth, out } => {
            let gts = load_gts(system)?;
            let target = retype(&load_graph(target, None)?, &gts.type_graph)?;
            valid(&target)?;
            let Some(trace) = reachable(&gts, &target, *depth) else {
                return Ok(Outcome::failed(format!("target not reachable within {depth} steps\n"), json!({"reachable": false})));
            };
            let rules: Vec<_> = gts.rules.values().cloned().collect();
            let mut host = gts.start.clone();
            let mut steps: Vec<(usize, StepRecord)> = Vec::new();
            let mut text = String::new();
            for (i, t) in trace.iter().enumerate() {
                let ri = gts.rules.get_index_of(&t.rule).expect("rule of the system");
                let m = &find_matches(&rules[ri], &host)[t.match_index];
                let step = apply(&rules[ri], &host, &m.morphism)?;
                text.push_str(&format!("{}. {} at match {}\n", i + 1, t.rule, t.match_index));
                host = step.result.clone();
                steps.push((ri, step));
            }
            let prf = write_prf(&checked(certify_trace(&rules, &gts.start, &steps, Reading::Unrestricted)?)?);
            match out {
                Some(out) => {
                    write(out, &prf)?;
                    text.push_str(&format!("certificate written to {}\n", out.display()));
                }
                None => text.push_str(&prf),
            }
            let steps: Vec<_> = trace.iter().map(|t| json!({"rule": t.rule, "match": t.match_index})).collect();
            Ok(Outcome::ok(text, json!({"reachable": true, "trace": steps, "proof": prf})))
        }
        Command::Encode { file, graph, out } => {
            let g = load_graph(file, graph.as_deref())?;
            valid(&g)?;
            let e = encode_graph(&g);
            let name = if g.name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') && !g.name.is_empty() {
                g.name.clone()
            } else {
                "G".into()
            };
            let hill =
                HillFile { formulas: vec![(name.clone(), e.formula().clone())], sequents: vec![(name, e.sequent.clone())] }.to_text();
            let prf = write_prf(&checked(e.derivation.clone())?);
            let text = match out {
                Some(out) => {
                    write(out, &hill)?;
                    write(&certificate_path(out), &prf)?;
                    format!("written {} and {}\n", out.display(), certificate_path(out).display())
                }
                None => format!("{hill}\n{prf}"),
            };
            Ok(Outcome::ok(text, json!({"formula": e.formula().to_string(), "sequent": e.sequent.to_string(), "proof": prf})))
        }
        Command::Decode { file, name, types, out } => {
            let hill = load_hill(file)?;
            let f = match name {
                Some(n) => hill
                    .formula(n)
                    .or_else(|| hill.sequent(n).map(|s| &s.goal))
                    .ok_or_else(|| anyhow!("{}: no declaration {n}", file.display()))?,
                None => hill
                    .formulas
                    .first()
                    .map(|(_, f)| f)
                    .or_else(|| hill.sequents.first().map(|(_, s)| &s.goal))
                    .ok_or_else(|| anyhow!("{}: empty file", file.display()))?,
            };
            let tg = match types {
                Some(p) => {
                    let src = read(p)?;
                    match parse_gts(&src) {
                        Ok(gts) => gts.type_graph,
                        Err(_) => parse_hg(&src).map_err(|e| anyhow!("{}: {e}", p.display()))?.type_graph,
                    }
                }
                None => Arc::new(type_graph_of(f)?),
            };
            let mut g = decode(f, &tg)?;
            g.name = name.clone().unwrap_or_else(|| "G".into());
            let hg = write_hg(&[&g]);
            let text = match out {
                Some(out) => {
                    write(out, &hg)?;
                    format!("written {}\n", out.display())
                }
                None => hg.clone(),
            };
            Ok(Outcome::ok(text, json!({"graph": hg})))
        }
        Command::Verify { system, samples, seed } => {
            let gts = load_gts(system)?;
            if gts.rules.is_empty() {
                bail!("{}: no rules", system.display());
            }
            let rules: Vec<_> = gts.rules.values().collect();
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let mut text = String::new();
            let mut reports = Vec::new();
            let mut bad = 0;
            for i in 0..*samples {
                let rule = *rules.choose(&mut rng).unwrap();
                let host = gen::host_for(&mut rng, rule, 6, 6);
                let c = verify_correspondence(&host, rule);
                if !c.ok() {
                    bad += 1;
                    text.push_str(&format!("sample {i} ({}): {}\n", rule.name, c.mismatches.join("; ")));
                }
                reports.push(json!({"sample": i, "rule": rule.name, "report": c}));
            }
            text.push_str(&format!("{} samples, {bad} mismatching\n", samples));
            let s = json!({"seed": seed, "samples": reports, "mismatching": bad});
            Ok(if bad == 0 { Outcome::ok(text, s) } else { Outcome::failed(text, s) })
        }
        Command::Iso { a, b } => {
            let (ga, gb) = (load_graph(a, None)?, load_graph(b, None)?);
            match find_isomorphisms(&ga, &gb, 1).into_iter().next() {
                Some(m) => {
                    let nodes: Vec<String> = m.node_map.iter().map(|(x, y)| format!("{x} -> {y}")).collect();
                    let edges: Vec<String> = m.edge_map.iter().map(|(x, y)| format!("{x} -> {y}")).collect();
                    let text = format!("{}\n", nodes.iter().chain(&edges).cloned().collect::<Vec<_>>().join("\n"));
                    Ok(Outcome::ok(text, json!({"isomorphic": true, "nodes": nodes, "edges": edges})))
                }
                None => Ok(Outcome::failed("not isomorphic\n".into(), json!({"isomorphic": false}))),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(o) => {
            match cli.format {
                Format::Text => print!("{}", o.text),
                Format::Structured => println!("{}", serde_json::to_string_pretty(&o.structured).expect("json")),
            }
            if o.failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
