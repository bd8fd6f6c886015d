//! `linkbench` command line.
//!
//! Exit codes: 0 on success, 1 for usage and configuration errors, 2 for
//! data, format and I/O errors.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::analytic::{
    ideal_auc, ideal_roc_points, planted_probabilities, planted_roc_points, planted_sbm_auc,
    PlantedBranch,
};
use crate::bench::{self, Preset, SpecEntry, SweepConfig, DEFAULT_PREDICTORS};
use crate::census::{analytic_census, empirical_census, EdgeCensus};
use crate::error::{Error, Result};
use crate::eval::auc;
use crate::graphgen::{generate, GraphSpec, StructureKind};
use crate::io;
use crate::predict::{import_scores, ObservedGraph, PredictorKind, ScoredPairs};
use crate::split::{EvalSet, DEFAULT_HOLDOUT_FRACTION};

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Parser)]
#[command(
    name = "linkbench",
    version,
    about = "Synthetic graphs and predictability ceilings for link-prediction benchmarks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a graph and write its edge list and roles file.
    ///
    /// Edge list: one "u<TAB>v" line per edge (u < v, 0-indexed); '#' lines are
    /// comments and the first one records the graph parameters as key=value.
    /// Roles file: "node<TAB>role" with role S<i> (1-based structure) or B.
    Generate {
        #[command(flatten)]
        spec: SpecArgs,
        /// Edge-list output path.
        #[arg(long)]
        out: PathBuf,
        /// Roles output path [default: OUT with extension .roles].
        #[arg(long)]
        roles: Option<PathBuf>,
    },
    /// Print the edge census, analytically from parameters or counted from a graph file.
    Census {
        #[command(flatten)]
        spec: SpecArgs,
        /// Count classes in this edge-list file instead (its header supplies the roles).
        #[arg(long, conflicts_with = "SpecArgs")]
        graph: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Both)]
        format: Format,
    },
    /// Print ideal and planted-SBM AUC, p, q and ROC breakpoints.
    Analytic {
        #[command(flatten)]
        spec: SpecArgs,
        /// TOML file with n_bridge, bridge_degree, n_structures, structure, [diagonals], k.
        #[arg(long, conflicts_with = "SpecArgs")]
        config: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Both)]
        format: Format,
    },
    /// Split a graph into observed / held-out edges and sample as many negatives.
    ///
    /// Writes observed.edges, heldout.edges and negatives.edges into OUT_DIR, each
    /// an edge list whose second comment line reads "split=<part> fraction=<f> seed=<s>".
    Split {
        /// Edge-list file written by `generate`.
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = DEFAULT_HOLDOUT_FRACTION)]
        fraction: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Score the held-out and negative pairs of a split with a built-in predictor.
    ///
    /// Output: "u<TAB>v<TAB>score" per line with a "# predictor=<name>" comment.
    /// Native predictors see only observed.edges; oracle-ideal and planted-sbm read
    /// the graph parameters from the split header.
    Predict {
        #[arg(long)]
        split_dir: PathBuf,
        /// adamic-adar, common-neighbors, jaccard, oracle-ideal, planted-sbm or random.
        #[arg(long)]
        predictor: String,
        /// Seed of the random predictor.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compute AUC of score files against a split; writes "replicate,predictor,auc" CSV.
    Eval {
        #[arg(long)]
        split_dir: PathBuf,
        /// Score file(s) ("u<TAB>v<TAB>score"); repeat or comma-separate.
        #[arg(long, required = true, value_delimiter = ',')]
        scores: Vec<PathBuf>,
        /// Replicate label written in the first column.
        #[arg(long, default_value_t = 0)]
        replicate: usize,
        /// Output CSV [default: stdout].
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a parameter sweep and write one CSV row per (point, predictor).
    ///
    /// Columns: sweep_param, sweep_value, N_B, D_B, M, kind, k, predictor, auc_mean,
    /// auc_var, n_replicates, ideal_auc, planted_auc, base_seed.
    Sweep {
        /// fig3, fig4-clique, fig4-lattice, fig5-lattice or fig5-diag.
        #[arg(long, required_unless_present = "config", conflicts_with = "config")]
        preset: Option<String>,
        /// TOML sweep description (preset or [[points]], predictors, replicates, seed, ...).
        #[arg(long)]
        config: Option<PathBuf>,
        /// Comma-separated predictor names [default: adamic-adar,oracle-ideal,planted-sbm,random].
        #[arg(long, value_delimiter = ',')]
        predictors: Option<Vec<String>>,
        #[arg(long)]
        replicates: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        holdout: Option<f64>,
        /// Override the preset's grid of swept values.
        #[arg(long, value_delimiter = ',', conflicts_with = "config")]
        grid: Option<Vec<f64>>,
        #[arg(long)]
        out: PathBuf,
        /// Also write each replicate's split files under this directory.
        #[arg(long)]
        emit_splits: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Kv,
    Csv,
    Both,
}

/// Graph parameters; flag names follow the model symbols.
#[derive(Debug, Clone, Args)]
struct SpecArgs {
    /// Number of structures M.
    #[arg(long)]
    m: Option<usize>,
    /// Clique size or lattice side.
    #[arg(long)]
    k: Option<usize>,
    /// clique, lattice or lattice-diag.
    #[arg(long)]
    structure: Option<String>,
    /// Closed diagonal directions for lattice-diag (1 or 2).
    #[arg(long)]
    diagonals: Option<u8>,
    /// Number of bridge nodes N_B.
    #[arg(long)]
    nb: Option<usize>,
    /// Expected bridge degree D_B.
    #[arg(long)]
    db: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
}

impl SpecArgs {
    fn is_empty(&self) -> bool {
        self.m.is_none()
            && self.k.is_none()
            && self.structure.is_none()
            && self.diagonals.is_none()
            && self.nb.is_none()
            && self.db.is_none()
            && self.seed.is_none()
    }

    fn to_spec(&self) -> Result<GraphSpec> {
        fn need<T: Copy>(v: Option<T>, flag: &str) -> Result<T> {
            v.ok_or_else(|| Error::Config(format!("missing required flag --{flag}")))
        }
        let name = self
            .structure
            .as_deref()
            .ok_or_else(|| Error::Config("missing required flag --structure".into()))?;
        if self.diagonals.is_some() && name != "lattice-diag" {
            return Err(Error::Config(
                "--diagonals only applies to --structure lattice-diag".into(),
            ));
        }
        let spec = GraphSpec::new(
            need(self.nb, "nb")?,
            need(self.db, "db")?,
            need(self.m, "m")?,
            StructureKind::parse(name, self.diagonals)?,
            need(self.k, "k")?,
            self.seed.unwrap_or(0),
        );
        spec.validate()?;
        Ok(spec)
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    let provenance = provenance(&argv);
    match dispatch(cli.command, &provenance, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "linkbench: {e}");
            e.exit_code()
        }
    }
}

/// Provenance comment lines. Values of output-location flags are elided so
/// that the same run written to two places yields identical files.
fn provenance(argv: &[OsString]) -> Vec<String> {
    const OUTPUT_FLAGS: [&str; 4] = ["--out", "--out-dir", "--roles", "--emit-splits"];
    let mut shown = Vec::with_capacity(argv.len());
    let mut elide_next = false;
    for (i, a) in argv.iter().enumerate() {
        let a = a.to_string_lossy();
        if i == 0 {
            shown.push("linkbench".to_string());
            continue;
        }
        if elide_next {
            shown.push("<path>".into());
            elide_next = false;
            continue;
        }
        match a.split_once('=') {
            Some((flag, _)) if OUTPUT_FLAGS.contains(&flag) => shown.push(format!("{flag}=<path>")),
            _ => {
                elide_next = OUTPUT_FLAGS.contains(&a.as_ref());
                shown.push(a.into_owned());
            }
        }
    }
    vec![
        format!("linkbench {VERSION}"),
        format!("argv: {}", shown.join(" ")),
    ]
}

fn dispatch(command: Command, provenance: &[String], out: &mut dyn Write) -> Result<()> {
    let stdout_err = |e| Error::io("<stdout>", e);
    match command {
        Command::Generate {
            spec,
            out: path,
            roles,
        } => {
            let spec = spec.to_spec()?;
            let graph = generate(&spec)?;
            let mut comments = provenance.to_vec();
            comments.push(format!("seed={}", spec.seed));
            io::write_edge_list(&path, &spec, &comments, graph.edges())?;
            let roles = roles.unwrap_or_else(|| path.with_extension("roles"));
            io::write_roles(&roles, &graph, &comments)?;
            writeln!(
                out,
                "wrote {} nodes, {} edges to {} (roles: {})",
                graph.n_nodes(),
                graph.n_edges(),
                path.display(),
                roles.display()
            )
            .map_err(stdout_err)
        }
        Command::Census {
            spec,
            graph,
            format,
        } => {
            let census = match graph {
                Some(path) => empirical_census(&io::read_graph(&path)?)?,
                None => analytic_census(&spec.to_spec()?),
            };
            out.write_all(render_census(&census, format).as_bytes())
                .map_err(stdout_err)
        }
        Command::Analytic {
            spec,
            config,
            format,
        } => {
            let spec = match config {
                Some(path) => {
                    if !spec.is_empty() {
                        return Err(Error::Config("--config excludes graph flags".into()));
                    }
                    let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
                    SpecEntry::from_toml_str(&text)?.to_spec()?
                }
                None => spec.to_spec()?,
            };
            out.write_all(render_analytic(&spec, format)?.as_bytes())
                .map_err(stdout_err)
        }
        Command::Split {
            graph,
            fraction,
            seed,
            out_dir,
        } => {
            let g = io::read_graph(&graph)?;
            let set = EvalSet::build(&g, fraction, seed)?;
            io::write_split(&out_dir, g.spec(), &set, provenance)?;
            writeln!(
                out,
                "observed={} heldout={} negatives={}",
                set.observed.len(),
                set.heldout.len(),
                set.negatives.len()
            )
            .map_err(stdout_err)
        }
        Command::Predict {
            split_dir,
            predictor,
            seed,
            out: path,
        } => {
            let kind: PredictorKind = predictor.parse()?;
            let (spec, set) = io::read_split(&split_dir)?;
            let observed = ObservedGraph::new(spec.n_nodes(), &set.observed)?;
            let scorer = kind.bind(&observed, Some(&spec), seed)?;
            let scored = ScoredPairs::from_scorer(kind.name(), &scorer, set.candidates());
            write_scores(&path, &scored, provenance)
        }
        Command::Eval {
            split_dir,
            scores,
            replicate,
            out: path,
        } => {
            let (_, set) = io::read_split(&split_dir)?;
            let mut csv = String::new();
            for c in provenance {
                let _ = writeln!(csv, "# {c}");
            }
            csv.push_str("replicate,predictor,auc\n");
            for file in &scores {
                let table = import_scores(file)?;
                let pos = table.scores_for(&set.heldout)?;
                let neg = table.scores_for(&set.negatives)?;
                let value = auc(&pos, &neg)?;
                let _ = writeln!(csv, "{replicate},{},{value}", table.predictor_name);
            }
            match path {
                Some(p) => write_file(&p, &csv),
                None => out.write_all(csv.as_bytes()).map_err(stdout_err),
            }
        }
        Command::Sweep {
            preset,
            config,
            predictors,
            replicates,
            seed,
            holdout,
            grid,
            out: path,
            emit_splits,
        } => {
            let mut cfg = match (preset, config) {
                (_, Some(file)) => SweepConfig::from_file(&file)?,
                (Some(name), None) => {
                    let preset = Preset::parse(&name)?;
                    SweepConfig {
                        preset,
                        points: preset.points(grid.as_deref())?,
                        predictors: DEFAULT_PREDICTORS.to_vec(),
                        n_replicates: bench::DEFAULT_REPLICATES,
                        base_seed: 0,
                        holdout_fraction: DEFAULT_HOLDOUT_FRACTION,
                    }
                }
                (None, None) => return Err(Error::Config("need --preset or --config".into())),
            };
            if let Some(names) = predictors {
                cfg.predictors = names.iter().map(|n| n.parse()).collect::<Result<_>>()?;
            }
            if let Some(r) = replicates {
                cfg.n_replicates = r;
            }
            if let Some(s) = seed {
                cfg.base_seed = s;
            }
            if let Some(h) = holdout {
                cfg.holdout_fraction = h;
            }
            let result = bench::run_sweep_with_splits(&cfg, emit_splits.as_deref())?;
            let mut comments = provenance.to_vec();
            comments.push(format!(
                "preset={} replicates={} seed={} holdout_fraction={}",
                cfg.preset.name(),
                cfg.n_replicates,
                cfg.base_seed,
                cfg.holdout_fraction
            ));
            bench::write_csv_with_comments(&result, &path, &comments)?;
            writeln!(
                out,
                "wrote {} rows to {}",
                result.rows.len(),
                path.display()
            )
            .map_err(stdout_err)
        }
    }
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn write_scores(path: &Path, scored: &ScoredPairs, provenance: &[String]) -> Result<()> {
    let mut text = format!("# predictor={}\n", scored.predictor_name);
    for c in provenance {
        let _ = writeln!(text, "# {c}");
    }
    for (pair, score) in &scored.entries {
        let _ = writeln!(text, "{}\t{}\t{score}", pair.u, pair.v);
    }
    write_file(path, &text)
}

fn render_census(census: &EdgeCensus, format: Format) -> String {
    let mut s = String::new();
    if format != Format::Csv {
        s.push_str(&census.to_key_values());
    }
    if format == Format::Both {
        s.push('\n');
    }
    if format != Format::Kv {
        s.push_str(&census.to_csv());
    }
    s
}

fn render_analytic(spec: &GraphSpec, format: Format) -> Result<String> {
    let census = analytic_census(spec);
    let mut fields: Vec<(String, String)> = Vec::new();
    let mut put = |k: &str, v: String| fields.push((k.to_string(), v));
    put("ideal_auc", ideal_auc(&census)?.to_string());
    let [a, b, c] = ideal_roc_points(&census)?;
    for (name, p) in [("ideal_a", a), ("ideal_b", b), ("ideal_c", c)] {
        put(&format!("{name}_fpr"), p.fpr.to_string());
        put(&format!("{name}_tpr"), p.tpr.to_string());
    }
    // q is undefined for single-node structures; report the ideal ceiling anyway
    match planted_probabilities(spec) {
        Ok(probs) => {
            put("planted_auc", planted_sbm_auc(&census, &probs)?.to_string());
            put("p", probs.p.to_string());
            put("q", probs.q.to_string());
            let branch = match probs.branch() {
                PlantedBranch::StructureFirst => "q>p",
                PlantedBranch::BridgeFirst => "p>q",
                PlantedBranch::Tied => "p=q",
            };
            put("planted_branch", branch.to_string());
            let pts = planted_roc_points(&census, &probs)?;
            for (name, p) in ["planted_a", "planted_b", "planted_c", "planted_d"]
                .iter()
                .zip(pts)
            {
                put(&format!("{name}_fpr"), p.fpr.to_string());
                put(&format!("{name}_tpr"), p.tpr.to_string());
            }
        }
        Err(_) => put("p", spec.bridge_probability().to_string()),
    }
    let mut s = String::new();
    if format != Format::Csv {
        for (k, v) in &fields {
            let _ = writeln!(s, "{k}={v}");
        }
    }
    if format == Format::Both {
        s.push('\n');
    }
    if format != Format::Kv {
        let keys: Vec<&str> = fields.iter().map(|(k, _)| k.as_str()).collect();
        let vals: Vec<&str> = fields.iter().map(|(_, v)| v.as_str()).collect();
        let _ = writeln!(s, "{}\n{}", keys.join(","), vals.join(","));
    }
    Ok(s)
}
