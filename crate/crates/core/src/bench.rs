//! Parameter sweeps.
//!
//! A sweep is a list of graph specs, a list of predictors and a replicate
//! count. Each (point, replicate) task generates a graph, splits it, scores
//! the shared evaluation set with every predictor and records one AUC per
//! predictor. Tasks run in parallel; results are reduced in task order so
//! the output does not depend on scheduling.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::Deserialize;

use crate::analytic::{ideal_auc, planted_probabilities, planted_sbm_auc};
use crate::census::analytic_census;
use crate::error::{Error, Result};
use crate::eval::{aggregate, auc, AucSummary};
use crate::graphgen::{generate, GraphSpec, StructureKind};
use crate::io;
use crate::predict::{ObservedGraph, PredictorKind, ScoredPairs};
use crate::seed;
use crate::split::{EvalSet, DEFAULT_HOLDOUT_FRACTION};

pub const DEFAULT_REPLICATES: usize = 10;

/// Node count of every fig4 graph.
pub const FIG4_NODES: usize = 3200;
pub const FIG4_BRIDGE_DEGREE: f64 = 12.0;
pub const FIG4_STRUCTURE_FRACTIONS: [f64; 8] = [0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];

pub const FIG3_BRIDGE_DEGREE: f64 = 5.0;
/// `M = N_B` values; not tabulated for the original experiment, powers of two by convention.
pub const FIG3_GRID: [f64; 7] = [1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0];

pub const FIG5_STRUCTURES: usize = 4;
pub const FIG5_STRUCTURE_FRACTION: f64 = 0.75;
/// The bridge degree is held fixed across the k sweep; its value is a convention.
pub const FIG5_BRIDGE_DEGREE: f64 = 5.0;
/// Multiples of 3 so that `N_B = 4k²/3` is an integer.
pub const FIG5_GRID: [f64; 8] = [3.0, 6.0, 9.0, 12.0, 15.0, 18.0, 21.0, 24.0];

pub const DEFAULT_PREDICTORS: [PredictorKind; 4] = [
    PredictorKind::AdamicAdar,
    PredictorKind::OracleIdeal,
    PredictorKind::PlantedSbm,
    PredictorKind::Random,
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// Lattices with one closed diagonal, `k = 8`, `D_B = 5`, sweeping `M = N_B`.
    Fig3,
    /// `N = 3200` cliques of 8 nodes, sweeping `C_S`.
    Fig4Clique,
    /// `N = 3200` 8×8 lattices, sweeping `C_S`.
    Fig4Lattice,
    /// Four lattices at `C_S = 0.75`, sweeping `k`.
    Fig5Lattice,
    /// As `Fig5Lattice` with one closed diagonal.
    Fig5Diag,
    /// Points supplied by a config file.
    Custom,
}

impl Preset {
    pub const ALL: [Preset; 6] = [
        Preset::Fig3,
        Preset::Fig4Clique,
        Preset::Fig4Lattice,
        Preset::Fig5Lattice,
        Preset::Fig5Diag,
        Preset::Custom,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Preset::Fig3 => "fig3",
            Preset::Fig4Clique => "fig4-clique",
            Preset::Fig4Lattice => "fig4-lattice",
            Preset::Fig5Lattice => "fig5-lattice",
            Preset::Fig5Diag => "fig5-diag",
            Preset::Custom => "custom",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let norm = s.trim().replace('_', "-").to_ascii_lowercase();
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == norm)
            .ok_or_else(|| {
                let known: Vec<_> = Preset::ALL.iter().map(|p| p.name()).collect();
                Error::Config(format!(
                    "unknown preset '{s}' (known: {})",
                    known.join(", ")
                ))
            })
    }

    /// Name of the swept parameter.
    pub fn sweep_param(&self) -> &'static str {
        match self {
            Preset::Fig3 => "M",
            Preset::Fig4Clique | Preset::Fig4Lattice => "C_S",
            Preset::Fig5Lattice | Preset::Fig5Diag => "k",
            Preset::Custom => "point",
        }
    }

    pub fn default_grid(&self) -> &'static [f64] {
        match self {
            Preset::Fig3 => &FIG3_GRID,
            Preset::Fig4Clique | Preset::Fig4Lattice => &FIG4_STRUCTURE_FRACTIONS,
            Preset::Fig5Lattice | Preset::Fig5Diag => &FIG5_GRID,
            Preset::Custom => &[],
        }
    }

    /// Spec of one grid point; the seed is left at 0 and replaced per replicate.
    pub fn spec_at(&self, value: f64) -> Result<GraphSpec> {
        let count = |v: f64, what: &str| -> Result<usize> {
            if v.is_finite() && v >= 1.0 && v.fract() == 0.0 {
                Ok(v as usize)
            } else {
                Err(Error::Config(format!(
                    "{} grid value {v} is not a positive integer {what}",
                    self.name()
                )))
            }
        };
        let spec = match self {
            Preset::Fig3 => {
                let m = count(value, "M")?;
                GraphSpec::new(
                    m,
                    FIG3_BRIDGE_DEGREE,
                    m,
                    StructureKind::LatticeDiag(1),
                    8,
                    0,
                )
            }
            Preset::Fig4Clique | Preset::Fig4Lattice => {
                if !(value > 0.0 && value < 1.0) {
                    return Err(Error::Config(format!("C_S must be in (0, 1), got {value}")));
                }
                let kind = if *self == Preset::Fig4Clique {
                    StructureKind::Clique
                } else {
                    StructureKind::Lattice
                };
                let omega = kind.structure_size(8);
                let m = (FIG4_NODES as f64 * value / omega as f64).round() as usize;
                let n_s = m * omega;
                if m == 0 || n_s >= FIG4_NODES {
                    return Err(Error::Config(format!(
                        "C_S = {value} leaves no structures or no bridges"
                    )));
                }
                GraphSpec::new(FIG4_NODES - n_s, FIG4_BRIDGE_DEGREE, m, kind, 8, 0)
            }
            Preset::Fig5Lattice | Preset::Fig5Diag => {
                let k = count(value, "k")?;
                let kind = if *self == Preset::Fig5Lattice {
                    StructureKind::Lattice
                } else {
                    StructureKind::LatticeDiag(1)
                };
                let n_s = FIG5_STRUCTURES * k * k;
                let ratio = (1.0 - FIG5_STRUCTURE_FRACTION) / FIG5_STRUCTURE_FRACTION;
                let n_b = (n_s as f64 * ratio).round() as usize;
                GraphSpec::new(n_b, FIG5_BRIDGE_DEGREE, FIG5_STRUCTURES, kind, k, 0)
            }
            Preset::Custom => {
                return Err(Error::Config(
                    "the custom preset has no built-in grid; supply points in a config file".into(),
                ))
            }
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn points(&self, grid: Option<&[f64]>) -> Result<Vec<SweepPoint>> {
        if *self == Preset::Custom {
            return self.spec_at(0.0).map(|_| Vec::new());
        }
        grid.unwrap_or(self.default_grid())
            .iter()
            .map(|&value| {
                Ok(SweepPoint {
                    param: self.sweep_param().to_string(),
                    value,
                    spec: self.spec_at(value)?,
                })
            })
            .collect()
    }
}

/// Specs of a preset's default grid.
pub fn preset_specs(preset: Preset) -> Result<Vec<GraphSpec>> {
    Ok(preset.points(None)?.into_iter().map(|p| p.spec).collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub param: String,
    pub value: f64,
    pub spec: GraphSpec,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub preset: Preset,
    pub points: Vec<SweepPoint>,
    pub predictors: Vec<PredictorKind>,
    pub n_replicates: usize,
    pub base_seed: u64,
    pub holdout_fraction: f64,
}

impl SweepConfig {
    pub fn from_preset(
        preset: Preset,
        predictors: Vec<PredictorKind>,
        base_seed: u64,
    ) -> Result<Self> {
        Ok(SweepConfig {
            preset,
            points: preset.points(None)?,
            predictors,
            n_replicates: DEFAULT_REPLICATES,
            base_seed,
            holdout_fraction: DEFAULT_HOLDOUT_FRACTION,
        })
    }

    pub fn validate(&self) -> Result<()> {
        if self.points.is_empty() {
            return Err(Error::Config("sweep has no points".into()));
        }
        if self.predictors.is_empty() {
            return Err(Error::Config("sweep has no predictors".into()));
        }
        if self.n_replicates == 0 {
            return Err(Error::Config("replicate count must be >= 1".into()));
        }
        if !(self.holdout_fraction > 0.0 && self.holdout_fraction < 1.0) {
            return Err(Error::Config(format!(
                "hold-out fraction must lie strictly between 0 and 1, got {}",
                self.holdout_fraction
            )));
        }
        for (i, p) in self.points.iter().enumerate() {
            p.spec
                .validate()
                .map_err(|e| e.context(format!("point {i}")))?;
        }
        Ok(())
    }

    /// Parses a TOML sweep description. See the README for the schema.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let file: ConfigFile = toml::from_str(text)
            .map_err(|e| Error::Config(format!("invalid sweep config: {e}")))?;
        file.into_config()
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text).map_err(|e| e.context(path.display()))
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    preset: Option<String>,
    predictors: Option<Vec<String>>,
    replicates: Option<usize>,
    seed: Option<u64>,
    holdout_fraction: Option<f64>,
    grid: Option<Vec<f64>>,
    #[serde(default)]
    points: Vec<SpecEntry>,
}

/// Graph parameters as written in TOML files.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecEntry {
    pub n_bridge: usize,
    pub bridge_degree: f64,
    pub n_structures: usize,
    pub structure: String,
    pub diagonals: Option<u8>,
    pub k: usize,
    pub seed: Option<u64>,
}

impl SpecEntry {
    pub fn to_spec(&self) -> Result<GraphSpec> {
        let kind = StructureKind::parse(&self.structure, self.diagonals)?;
        let spec = GraphSpec::new(
            self.n_bridge,
            self.bridge_degree,
            self.n_structures,
            kind,
            self.k,
            self.seed.unwrap_or(0),
        );
        spec.validate()?;
        Ok(spec)
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(format!("invalid graph spec: {e}")))
    }
}

impl ConfigFile {
    fn into_config(self) -> Result<SweepConfig> {
        let preset = match &self.preset {
            Some(p) => Preset::parse(p)?,
            None if !self.points.is_empty() => Preset::Custom,
            None => return Err(Error::Config("config needs a preset or [[points]]".into())),
        };
        let points = if preset == Preset::Custom {
            if self.grid.is_some() {
                return Err(Error::Config(
                    "'grid' does not apply to custom points".into(),
                ));
            }
            self.points
                .iter()
                .enumerate()
                .map(|(i, p)| {
                    Ok(SweepPoint {
                        param: Preset::Custom.sweep_param().to_string(),
                        value: i as f64,
                        spec: p.to_spec().map_err(|e| e.context(format!("point {i}")))?,
                    })
                })
                .collect::<Result<Vec<_>>>()?
        } else {
            if !self.points.is_empty() {
                return Err(Error::Config(format!(
                    "[[points]] given together with preset '{}'; use preset = \"custom\"",
                    preset.name()
                )));
            }
            preset.points(self.grid.as_deref())?
        };
        let predictors = match self.predictors {
            Some(names) => names
                .iter()
                .map(|n| n.parse())
                .collect::<Result<Vec<_>>>()?,
            None => DEFAULT_PREDICTORS.to_vec(),
        };
        let config = SweepConfig {
            preset,
            points,
            predictors,
            n_replicates: self.replicates.unwrap_or(DEFAULT_REPLICATES),
            base_seed: self.seed.unwrap_or(0),
            holdout_fraction: self.holdout_fraction.unwrap_or(DEFAULT_HOLDOUT_FRACTION),
        };
        config.validate()?;
        Ok(config)
    }
}

/// What one (point, replicate) task produced.
#[derive(Debug, Clone, PartialEq)]
pub struct ReplicateOutcome {
    pub point: usize,
    pub replicate: usize,
    pub seed: u64,
    /// Digest of the candidate pairs every predictor scored.
    pub evalset_digest: u64,
    /// One AUC per configured predictor, in config order.
    pub aucs: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub point: SweepPoint,
    pub predictor: String,
    pub summary: AucSummary,
    /// `None` when the closed form is undefined for the point (e.g. a graph without links).
    pub ideal_auc: Option<f64>,
    pub planted_auc: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    pub replicates: Vec<ReplicateOutcome>,
    pub base_seed: u64,
}

/// Seed of replicate `replicate` at sweep point `point`.
pub fn replicate_seed(base_seed: u64, point: usize, replicate: usize) -> u64 {
    seed::derive(base_seed, &[point as u64, replicate as u64])
}

/// Ideal and planted-SBM AUC of a spec, when defined.
pub fn ceilings(spec: &GraphSpec) -> (Option<f64>, Option<f64>) {
    let census = analytic_census(spec);
    let ideal = ideal_auc(&census).ok();
    let planted = planted_probabilities(spec)
        .and_then(|pr| planted_sbm_auc(&census, &pr))
        .ok();
    (ideal, planted)
}

pub fn run_sweep(config: &SweepConfig) -> Result<SweepResult> {
    run_sweep_with_splits(config, None)
}

/// Like [`run_sweep`], additionally writing every replicate's split files to
/// `emit_dir/point<PPP>/rep<RR>/` when given.
pub fn run_sweep_with_splits(config: &SweepConfig, emit_dir: Option<&Path>) -> Result<SweepResult> {
    config.validate()?;
    let tasks: Vec<(usize, usize)> = (0..config.points.len())
        .flat_map(|p| (0..config.n_replicates).map(move |r| (p, r)))
        .collect();
    let outcomes = tasks
        .par_iter()
        .map(|&(p, r)| {
            run_replicate(config, p, r, emit_dir)
                .map_err(|e| e.context(format!("point {p} replicate {r}")))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut rows = Vec::with_capacity(config.points.len() * config.predictors.len());
    for (p, point) in config.points.iter().enumerate() {
        let (ideal, planted) = ceilings(&point.spec);
        let mine: Vec<&ReplicateOutcome> = outcomes.iter().filter(|o| o.point == p).collect();
        for (j, predictor) in config.predictors.iter().enumerate() {
            let aucs: Vec<f64> = mine.iter().map(|o| o.aucs[j]).collect();
            rows.push(SweepRow {
                point: point.clone(),
                predictor: predictor.name().to_string(),
                summary: aggregate(&aucs)?,
                ideal_auc: ideal,
                planted_auc: planted,
            });
        }
    }
    Ok(SweepResult {
        rows,
        replicates: outcomes,
        base_seed: config.base_seed,
    })
}

fn run_replicate(
    config: &SweepConfig,
    point: usize,
    replicate: usize,
    emit_dir: Option<&Path>,
) -> Result<ReplicateOutcome> {
    let seed = replicate_seed(config.base_seed, point, replicate);
    let spec = config.points[point].spec.with_seed(seed);
    let graph = generate(&spec)?;
    let set = EvalSet::build(&graph, config.holdout_fraction, seed)?;
    if let Some(dir) = emit_dir {
        let dir = dir
            .join(format!("point{point:03}"))
            .join(format!("rep{replicate:02}"));
        io::write_split(&dir, &spec, &set, &[])?;
    }
    let observed = ObservedGraph::new(graph.n_nodes(), &set.observed)?;
    let aucs = config
        .predictors
        .iter()
        .map(|kind| {
            let scorer = kind.bind(&observed, Some(&spec), seed)?;
            let scored = ScoredPairs::from_scorer(kind.name(), &scorer, set.candidates());
            let (pos, neg) = scored.entries.split_at(set.heldout.len());
            let pos: Vec<f64> = pos.iter().map(|e| e.1).collect();
            let neg: Vec<f64> = neg.iter().map(|e| e.1).collect();
            auc(&pos, &neg)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ReplicateOutcome {
        point,
        replicate,
        seed,
        evalset_digest: set.digest(),
        aucs,
    })
}

pub const CSV_HEADER: &str = "sweep_param,sweep_value,N_B,D_B,M,kind,k,predictor,auc_mean,auc_var,n_replicates,ideal_auc,planted_auc,base_seed";

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Renders the result as CSV, preceded by `comments` as `#` lines.
pub fn render_csv(result: &SweepResult, comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        let _ = writeln!(out, "# {c}");
    }
    out.push_str(CSV_HEADER);
    out.push('\n');
    for row in &result.rows {
        let s = &row.point.spec;
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            row.point.param,
            row.point.value,
            s.n_bridge,
            s.bridge_degree,
            s.n_structures,
            s.kind,
            s.k,
            row.predictor,
            row.summary.mean,
            row.summary.variance,
            row.summary.n_replicates,
            opt(row.ideal_auc),
            opt(row.planted_auc),
            result.base_seed
        );
    }
    out
}

pub fn write_csv(result: &SweepResult, path: &Path) -> Result<()> {
    write_csv_with_comments(result, path, &[])
}

pub fn write_csv_with_comments(
    result: &SweepResult,
    path: &Path,
    comments: &[String],
) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    fs::write(path, render_csv(result, comments)).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fig4_points_match_tables() {
        let clique = preset_specs(Preset::Fig4Clique).unwrap();
        assert_eq!(clique.len(), 8);
        let p4 = clique[3];
        assert_eq!(
            (
                p4.n_structure_nodes(),
                p4.n_structures,
                p4.kind,
                p4.k,
                p4.bridge_degree,
                p4.n_bridge
            ),
            (1600, 200, StructureKind::Clique, 8, 12.0, 1600)
        );
        let lattice = preset_specs(Preset::Fig4Lattice).unwrap();
        let p8 = lattice[7];
        assert_eq!(
            (p8.n_structure_nodes(), p8.n_structures, p8.n_bridge),
            (2880, 45, 320)
        );
        assert_eq!(analytic_census(&p8).e_total_existing, 8880.0);
        assert_eq!(analytic_census(&p4).e_total_existing, 24800.0);
    }

    #[test]
    fn fig5_keeps_structure_fraction() {
        for spec in preset_specs(Preset::Fig5Diag).unwrap() {
            assert_eq!(spec.n_structures, 4);
            assert_eq!(spec.kind, StructureKind::LatticeDiag(1));
            assert!((spec.structure_fraction() - 0.75).abs() < 1e-12);
        }
        let k3 = Preset::Fig5Diag.spec_at(3.0).unwrap();
        assert_eq!((k3.structure_size(), k3.n_bridge), (9, 12));
    }

    #[test]
    fn fig3_sweeps_m_equals_nb() {
        for spec in preset_specs(Preset::Fig3).unwrap() {
            assert_eq!(spec.n_structures, spec.n_bridge);
            assert_eq!(spec.kind, StructureKind::LatticeDiag(1));
            assert_eq!(spec.bridge_degree, 5.0);
        }
        assert!(Preset::Fig3.spec_at(2.5).is_err());
    }

    #[test]
    fn presets_parse() {
        assert_eq!(Preset::parse("fig4_clique").unwrap(), Preset::Fig4Clique);
        assert_eq!(Preset::parse("fig4-lattice").unwrap(), Preset::Fig4Lattice);
        assert!(Preset::parse("fig9").is_err());
        assert!(preset_specs(Preset::Custom).is_err());
    }

    #[test]
    fn config_file_custom_points() {
        let cfg = SweepConfig::from_toml_str(
            r#"
            predictors = ["random", "oracle-ideal"]
            replicates = 3
            seed = 5

            [[points]]
            n_bridge = 30
            bridge_degree = 4
            n_structures = 2
            structure = "lattice-diag"
            diagonals = 2
            k = 4
            "#,
        )
        .unwrap();
        assert_eq!(cfg.preset, Preset::Custom);
        assert_eq!(cfg.points[0].spec.kind, StructureKind::LatticeDiag(2));
        assert_eq!(cfg.n_replicates, 3);
        assert_eq!(cfg.holdout_fraction, 0.1);

        let cfg = SweepConfig::from_toml_str("preset = \"fig3\"\ngrid = [1, 2]\n").unwrap();
        assert_eq!(cfg.points.len(), 2);
        assert_eq!(cfg.predictors, DEFAULT_PREDICTORS.to_vec());

        assert!(SweepConfig::from_toml_str("preset = \"fig3\"\nbogus = 1\n").is_err());
        assert!(SweepConfig::from_toml_str("replicates = 0\npreset = \"fig3\"\n").is_err());
    }

    #[test]
    fn empty_result_is_header_only() {
        let csv = render_csv(&SweepResult::default(), &[]);
        assert_eq!(csv, format!("{CSV_HEADER}\n"));
    }
}
