//! gh-forge: metric graphs, correspondences, and Gromov-Hausdorff checks
//! from the command line.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use gh_forge_cli::glued_doc::GluedNetsDoc;
use gh_forge_cli::report::{reproduce, ReportRow, ReproduceOptions};
use gh_forge_core::constructions::{chordal_bound_root, chordal_residual, phi_graph, PhiMap};
use gh_forge_core::error::{Error, Result};
use gh_forge_core::gh_solver::{distortion, exact_gh, glue, Correspondence};
use gh_forge_core::graph_spaces::{
    build_circle_graph, build_e, build_e_prime, build_segment, build_star4, build_tripod,
    epsilon_net, graph_metric, MetricGraph,
};
use gh_forge_core::metric_core::FiniteMetricSpace;
use gh_forge_core::topology::{loop_class, transfer_loop, LoopPath, Side};

#[derive(Parser)]
#[command(name = "gh-forge", version, about = "metric geometry toolkit", long_about = None)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build named spaces and emit their sampled metrics.
    Spaces {
        #[command(subcommand)]
        command: SpacesCommand,
    },
    /// Correspondence distortion, exact GH, and gluing.
    Gh {
        #[command(subcommand)]
        command: GhCommand,
    },
    /// The canonical circle-to-tripod map.
    Phi {
        #[command(subcommand)]
        command: PhiCommand,
    },
    /// Closed-form bounds.
    Bounds {
        #[command(subcommand)]
        command: BoundsCommand,
    },
    /// Loops, homotopy classes, and loop transfer.
    Topo {
        #[command(subcommand)]
        command: TopoCommand,
    },
    /// Run every headline check and report pass/fail rows.
    Reproduce {
        /// Net resolution
        #[arg(long, default_value_t = PI / 64.0)]
        eps: f64,
        /// Circle sample count (positive multiple of 8)
        #[arg(long, default_value_t = 2048)]
        n: usize,
        /// Seed for the randomized batteries
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Node budget for the exact-GH battery
        #[arg(long, default_value_t = 10_000_000)]
        budget: u64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Write the report here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum SpacesCommand {
    /// Sample a named space and write its metric document.
    Build {
        /// e | e-prime | star4 | circle | tripod | segment
        name: String,
        /// Net resolution
        #[arg(long, default_value_t = PI / 64.0)]
        eps: f64,
        /// Edge count for `circle` (total circumference 2 pi)
        #[arg(long, default_value_t = 8)]
        edges: usize,
        /// Comma-separated leg lengths for `tripod`
        #[arg(long)]
        lengths: Option<String>,
        /// Length for `segment`
        #[arg(long)]
        length: Option<f64>,
        /// Output metric document
        #[arg(long)]
        out: PathBuf,
        /// Also write the graph document
        #[arg(long)]
        graph_out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum GhCommand {
    /// Exact GH distance between two small metric documents.
    Exact {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value_t = 10_000_000)]
        budget: u64,
    },
    /// Distortion of a correspondence document between two metrics.
    Distortion { a: PathBuf, b: PathBuf, r: PathBuf },
    /// Glue two metrics through a correspondence.
    Glue {
        a: PathBuf,
        b: PathBuf,
        r: PathBuf,
        #[arg(long, default_value_t = 1e-6)]
        eta: f64,
        /// Write the glued metric document here
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum PhiCommand {
    /// Print the canonical eight-step walk.
    Walk,
    /// Sample the map and print the distortion of its graph.
    Verify {
        #[arg(long, default_value_t = 2048)]
        n: usize,
    },
}

#[derive(Subcommand)]
enum BoundsCommand {
    /// Root of D + sqrt(2 - 2 sqrt(1 - D^2)) = 1 in (0, 1).
    ChordalRoot,
}

#[derive(Subcommand)]
enum TopoCommand {
    /// Classify a loop in the free fundamental group of a graph.
    Class {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long = "loop")]
        loop_path: PathBuf,
    },
    /// Transfer a loop across a glued pair of nets.
    Transfer {
        #[arg(long)]
        glued: PathBuf,
        #[arg(long = "loop")]
        loop_path: PathBuf,
        /// Distance bound, strictly above the parts' Hausdorff distance
        #[arg(long = "D")]
        d_bound: f64,
        /// Which part the loop lives in
        #[arg(long, value_enum, default_value_t = FromSide::Left)]
        from: FromSide,
        /// Write the transferred loop here
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Assemble a glued-nets document from two graph documents.
    MakeGlued {
        #[arg(long)]
        left_graph: PathBuf,
        #[arg(long)]
        right_graph: PathBuf,
        #[arg(long, default_value_t = PI / 64.0)]
        eps: f64,
        /// Bridge pairs document; by default nets are paired index-to-index
        #[arg(long)]
        pairs: Option<PathBuf>,
        #[arg(long, default_value_t = 1e-6)]
        eta: f64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FromSide {
    Left,
    Right,
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(err) => {
            eprintln!("error: {err}");
            std::process::exit(2);
        }
    }
}

fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Spaces { command } => spaces(command),
        Command::Gh { command } => gh(command),
        Command::Phi { command } => phi(command),
        Command::Bounds { command } => bounds(command),
        Command::Topo { command } => topo(command),
        Command::Reproduce { eps, n, seed, budget, format, out } => {
            let rows = reproduce(&ReproduceOptions { eps, n, seed, budget })?;
            let text = render_rows(&rows, format)?;
            emit(out.as_deref(), &text)?;
            Ok(if rows.iter().all(|r| r.pass) { 0 } else { 1 })
        }
    }
}

fn render_rows(rows: &[ReportRow], format: Format) -> Result<String> {
    Ok(match format {
        Format::Csv => {
            let mut lines = vec![ReportRow::csv_header().to_string()];
            lines.extend(rows.iter().map(ReportRow::to_csv));
            lines.join("\n") + "\n"
        }
        Format::Json => serde_json::to_string_pretty(rows)? + "\n",
    })
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn spaces(command: SpacesCommand) -> Result<i32> {
    let SpacesCommand::Build { name, eps, edges, lengths, length, out, graph_out } = command;
    let graph = match name.as_str() {
        "e" => build_e(),
        "e-prime" => build_e_prime(),
        "star4" => build_star4(),
        "circle" => build_circle_graph(edges, 2.0 * PI / edges as f64)?,
        "tripod" => {
            let raw = lengths
                .ok_or_else(|| Error::Domain("tripod needs --lengths a,b,c".into()))?;
            let legs: Vec<f64> = raw
                .split(',')
                .map(|s| s.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::Domain(format!("bad --lengths: {e}")))?;
            if legs.len() != 3 {
                return Err(Error::Domain("tripod needs exactly three lengths".into()));
            }
            build_tripod(legs[0], legs[1], legs[2])?
        }
        "segment" => {
            let l = length.ok_or_else(|| Error::Domain("segment needs --length".into()))?;
            build_segment(l)?
        }
        other => {
            return Err(Error::Domain(format!(
                "unknown space '{other}' (expected e, e-prime, star4, circle, tripod, segment)"
            )))
        }
    };
    let net = epsilon_net(&graph, eps)?;
    let table = graph_metric(&graph, &net)?;
    table.metric.save(&out)?;
    println!("{name}: {} samples at eps={eps:.6} -> {}", net.len(), out.display());
    if let Some(path) = graph_out {
        graph.save(&path)?;
        println!("graph -> {}", path.display());
    }
    Ok(0)
}

fn stem(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

fn gh(command: GhCommand) -> Result<i32> {
    match command {
        GhCommand::Exact { a, b, budget } => {
            let x = FiniteMetricSpace::load(&a)?;
            let y = FiniteMetricSpace::load(&b)?;
            let bounds = exact_gh(&x, &y, Some(budget))?;
            let witness = bounds.witness.as_ref().map_or(0, |w| w.pairs.len());
            println!("name,lower,upper,witness_size");
            println!("{}-{},{},{},{}", stem(&a), stem(&b), bounds.lower, bounds.upper, witness);
            if !bounds.exact {
                eprintln!("note: budget exhausted after {} nodes; bounds are not tight", bounds.nodes_visited);
            }
            Ok(0)
        }
        GhCommand::Distortion { a, b, r } => {
            let x = FiniteMetricSpace::load(&a)?;
            let y = FiniteMetricSpace::load(&b)?;
            let rel = Correspondence::load(&r)?;
            let dis = distortion(&x, &y, &rel)?;
            println!("name,distortion,pairs");
            println!("{}-{},{},{}", stem(&a), stem(&b), dis, rel.pairs.len());
            Ok(0)
        }
        GhCommand::Glue { a, b, r, eta, out } => {
            let x = FiniteMetricSpace::load(&a)?;
            let y = FiniteMetricSpace::load(&b)?;
            let rel = Correspondence::load(&r)?;
            let glued = glue(&x, &y, &rel, eta)?;
            println!("name,hausdorff,bridge_cost,points");
            println!(
                "{}-{},{},{},{}",
                stem(&a),
                stem(&b),
                glued.part_hausdorff(),
                glued.bridge_cost,
                glued.as_metric.len()
            );
            if let Some(path) = out {
                glued.as_metric.save(&path)?;
                println!("glued metric -> {}", path.display());
            }
            Ok(0)
        }
    }
}

fn phi(command: PhiCommand) -> Result<i32> {
    match command {
        PhiCommand::Walk => {
            let map = PhiMap::canonical()?;
            let labels = map.graph.vertex_labels();
            let seq = map.walk.vertex_sequence(&map.graph);
            println!(
                "start P = {} ; end Q = {} ; jump length pi/2",
                labels[map.walk.start_vertex], labels[map.walk.end_vertex]
            );
            for (k, step) in map.walk.steps.iter().enumerate() {
                println!(
                    "step {k}: edge {} {} ({} -> {})",
                    step.edge,
                    if step.forward { "forward" } else { "backward" },
                    labels[seq[k]],
                    labels[seq[k + 1]],
                );
            }
            Ok(0)
        }
        PhiCommand::Verify { n } => {
            let pg = phi_graph(n)?;
            let dis = pg.distortion()?;
            let slack = 2.0 * (2.0 * PI / n as f64);
            println!("n,distortion,net_slack,target_lo,target_hi");
            println!("{n},{dis},{slack},{},{}", PI / 2.0 - 0.02, PI / 2.0 + 1e-9);
            Ok(if (PI / 2.0 - 0.02..=PI / 2.0 + 1e-9).contains(&dis) { 0 } else { 1 })
        }
    }
}

fn bounds(command: BoundsCommand) -> Result<i32> {
    match command {
        BoundsCommand::ChordalRoot => {
            let root = chordal_bound_root();
            println!("root,residual");
            println!("{root},{}", chordal_residual(root));
            Ok(0)
        }
    }
}

fn topo(command: TopoCommand) -> Result<i32> {
    match command {
        TopoCommand::Class { graph, loop_path } => {
            let g = MetricGraph::load(&graph)?;
            let lp = LoopPath::from_json_str(&g, &std::fs::read_to_string(&loop_path)?)?;
            let word = loop_class(&g, &lp)?;
            println!("class: {word}");
            println!("nulhomotopic: {}", word.is_empty());
            Ok(0)
        }
        TopoCommand::Transfer { glued, loop_path, d_bound, from, out } => {
            let doc = GluedNetsDoc::load(&glued)?;
            let (glued_space, left, right) = doc.realize()?;
            let (from_table, to_table, side) = match from {
                FromSide::Left => (&left, &right, Side::Left),
                FromSide::Right => (&right, &left, Side::Right),
            };
            let lp = LoopPath::from_json_str(&from_table.graph, &std::fs::read_to_string(&loop_path)?)?;
            let cert = transfer_loop(&glued_space, from_table, to_table, side, &lp, d_bound)?;
            println!("hausdorff,delta,subdivision,sup_gap,basepoint_gap,beta_samples");
            println!(
                "{},{},{},{},{},{}",
                cert.hausdorff,
                cert.delta,
                cert.subdivision,
                cert.sup_gap,
                cert.basepoint_gap,
                cert.beta.sample_count()
            );
            let word = loop_class(&to_table.graph, &cert.beta)?;
            println!("transferred class: {word}");
            if let Some(path) = out {
                std::fs::write(&path, cert.beta.to_json())?;
                println!("loop -> {}", path.display());
            }
            Ok(0)
        }
        TopoCommand::MakeGlued { left_graph, right_graph, eps, pairs, eta, out } => {
            let lg = MetricGraph::load(&left_graph)?;
            let rg = MetricGraph::load(&right_graph)?;
            let scale = rg.total_length() / lg.total_length();
            let left_points = epsilon_net(&lg, eps)?;
            let right_points = epsilon_net(&rg, eps * scale)?;
            let pair_list = match pairs {
                Some(path) => Correspondence::load(&path)?.pairs,
                None => {
                    if left_points.len() != right_points.len() {
                        return Err(Error::Domain(format!(
                            "index pairing needs equal net sizes, got {} and {}",
                            left_points.len(),
                            right_points.len()
                        )));
                    }
                    (0..left_points.len()).map(|i| (i, i)).collect()
                }
            };
            let doc = GluedNetsDoc {
                left_graph: lg,
                left_points,
                right_graph: rg,
                right_points,
                pairs: pair_list,
                eta,
            };
            let (glued_space, _, _) = doc.realize()?;
            doc.save(&out)?;
            println!(
                "glued {} + {} points, hausdorff {} -> {}",
                glued_space.left_len,
                glued_space.right_len,
                glued_space.part_hausdorff(),
                out.display()
            );
            Ok(0)
        }
    }
}
