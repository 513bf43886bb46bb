//! End-to-end runs of each subcommand.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use topling_core::comptree::{
    build_tree, compare_trees, parse_newick, singleton_profile, to_newick, ComponentsTree, RefTree,
};
use topling_core::dataset::{random_binary, ParameterMatrix, Schema};
use topling_core::dimension::{density_map, dimension_profile, ProfileParams};
use topling_core::filtration::{build_filtration, critical_radius, radius_grid, DistanceMatrix, RadiusGrid};
use topling_core::h1loc::{analyze_cluster, first_significant_cluster, AnalyzeParams, H1Report};
use topling_core::persistence::{barcode_of, Barcode};
use topling_core::projection::{pca_reduce, EmbeddedPoints};
use topling_core::Error as CoreError;

use crate::config::{MissingMode, RunConfig};
use crate::error::{CliError, Result};
use crate::formats;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Ph,
    Tree,
    Dim,
    Density,
    H1,
    Baseline,
}

impl Command {
    pub fn as_str(self) -> &'static str {
        match self {
            Command::Ph => "ph",
            Command::Tree => "tree",
            Command::Dim => "dim",
            Command::Density => "density",
            Command::H1 => "h1",
            Command::Baseline => "baseline",
        }
    }
}

/// A point cloud ready for analysis, with its distances and radius grid.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub points: EmbeddedPoints,
    pub dm: DistanceMatrix,
    pub grid: RadiusGrid,
}

impl Prepared {
    pub fn names(&self) -> &[String] {
        &self.points.point_names
    }
}

/// Completes, orients and projects `m` as `cfg` prescribes.
pub fn prepare(cfg: &RunConfig, m: &ParameterMatrix) -> Result<Prepared> {
    let m = match cfg.missing {
        MissingMode::Filter => m.filter_by_completeness(cfg.row_threshold)?,
        MissingMode::Fill => m.fill_missing()?,
    };
    let m = if cfg.transpose { m.transpose() } else { m };
    let points = match cfg.pca {
        Some(f) => pca_reduce(&m, f)?,
        None => EmbeddedPoints::from_matrix(&m)?,
    };
    let dm = DistanceMatrix::from_points(&points);
    let grid = radius_grid(critical_radius(&dm), cfg.steps)?;
    Ok(Prepared { points, dm, grid })
}

/// Barcode up to `cfg.max_dim`, computed from cliques one dimension higher so
/// the top dimension has its deaths.
pub fn persistence(cfg: &RunConfig, p: &Prepared) -> Result<(Barcode, f64)> {
    let cutoff = cfg.cutoff.unwrap_or_else(|| p.dm.enclosing_radius());
    let mut fc = build_filtration(&p.dm, cfg.max_dim + 1, cutoff, cfg.simplex_limit)?;
    if cfg.snap_grid {
        fc = fc.snapped(&p.grid);
    }
    Ok((barcode_of(&fc)?.truncated(cfg.max_dim), cutoff))
}

pub fn components(p: &Prepared) -> Result<ComponentsTree> {
    Ok(build_tree(&p.dm, &p.grid)?)
}

/// Localisation on the first significant cluster, if any.
pub fn localize(cfg: &RunConfig, p: &Prepared, tree: &ComponentsTree) -> Result<Option<H1Report>> {
    let min_p = cfg.min_persistence.unwrap_or(2.0 * p.grid.epsilon);
    let Some(id) = first_significant_cluster(tree, &p.dm, min_p)? else {
        return Ok(None);
    };
    let names = p.names();
    let groups = cfg
        .groups
        .iter()
        .map(|g| {
            g.iter()
                .map(|n| {
                    names
                        .iter()
                        .position(|x| x == n)
                        .ok_or_else(|| CliError::Core(CoreError::RowNotFound(n.clone())))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let params = AnalyzeParams {
        tolerance: p.grid.epsilon,
        max_len: cfg.max_cycle_len,
        cap: cfg.cycle_cap,
        groups,
    };
    Ok(analyze_cluster(tree, &p.dm, id, &params)?)
}

#[derive(Serialize)]
struct PhSummary {
    points: usize,
    dim: usize,
    explained_variance: f64,
    critical_radius: f64,
    epsilon: f64,
    cutoff: f64,
    total_persistence: Vec<f64>,
}

#[derive(Serialize)]
struct DimSummary {
    peak: usize,
    s: usize,
    alpha: f64,
}

struct Sink {
    dir: PathBuf,
    written: Vec<PathBuf>,
}

impl Sink {
    fn put(&mut self, name: &str, text: &str) -> Result<()> {
        let path = self.dir.join(name);
        formats::write_atomic(&path, text.as_bytes())?;
        self.written.push(path);
        Ok(())
    }
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("plain data");
    s.push('\n');
    s
}

fn ph_outputs(cfg: &RunConfig, p: &Prepared, sink: &mut Sink) -> Result<()> {
    let (bc, cutoff) = persistence(cfg, p)?;
    sink.put("barcode.json", &formats::barcode_json(&bc))?;
    sink.put("barcode.svg", &formats::barcode_svg(&bc, cutoff))?;
    let summary = PhSummary {
        points: p.points.len(),
        dim: p.points.dim,
        explained_variance: p.points.explained_variance,
        critical_radius: p.grid.critical_radius,
        epsilon: p.grid.epsilon,
        cutoff,
        total_persistence: (0..bc.dims.len()).map(|k| bc.clipped_total(k, cutoff)).collect(),
    };
    sink.put("ph_summary.json", &json(&summary))?;
    let radii = if cfg.radii.is_empty() {
        vec![p.grid.critical_radius]
    } else {
        cfg.radii.clone()
    };
    for (i, r) in radii.iter().enumerate() {
        sink.put(&format!("skeleton_{i}.dot"), &formats::skeleton_dot(&p.dm, p.names(), *r))?;
    }
    Ok(())
}

fn h1_outputs(cfg: &RunConfig, p: &Prepared, sink: &mut Sink) -> Result<()> {
    let tree = components(p)?;
    let report = localize(cfg, p, &tree)?;
    sink.put("h1.json", &formats::h1_report_json(report.as_ref(), &tree, p.names()))?;
    sink.put("h1.txt", &formats::h1_report_text(report.as_ref(), p.names()))?;
    Ok(())
}

fn load_input(cfg: &RunConfig) -> Result<ParameterMatrix> {
    let path = cfg
        .input
        .as_ref()
        .ok_or_else(|| CliError::Config("no input file; pass --input or set input in the config".into()))?;
    formats::load_matrix(path, cfg.schema)
}

/// Runs `cmd` and returns every file written, manifest last.
pub fn run(cfg: &RunConfig, cmd: Command) -> Result<Vec<PathBuf>> {
    if cmd == Command::Baseline && (cfg.baseline_rows == 0 || cfg.baseline_cols == 0) {
        return Err(CliError::Config("baseline_rows and baseline_cols must be at least 1".into()));
    }
    let m = if cmd == Command::Baseline {
        random_binary(cfg.baseline_rows, cfg.baseline_cols, cfg.seed)?
    } else {
        load_input(cfg)?
    };
    fs::create_dir_all(&cfg.out).map_err(|e| CliError::io(&cfg.out, e))?;
    let mut sink = Sink {
        dir: cfg.out.clone(),
        written: Vec::new(),
    };
    let p = prepare(cfg, &m)?;
    match cmd {
        Command::Ph => ph_outputs(cfg, &p, &mut sink)?,
        Command::Tree => {
            let tree = components(&p)?;
            sink.put("tree.nwk", &format!("{}\n", to_newick(&tree, p.names())))?;
            sink.put("clusters.json", &formats::clusters_json(&tree, p.names()))?;
            sink.put("singletons.csv", &formats::singleton_csv(&singleton_profile(&tree, &p.grid)))?;
            if let Some(path) = &cfg.ref_tree {
                let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
                let reference = parse_newick(text.trim())?;
                let ours = RefTree::from_components(&tree, p.names());
                sink.put("tree_comparison.json", &json(&compare_trees(&ours, &reference)?))?;
            }
        }
        Command::Dim => {
            let params = ProfileParams {
                alpha: cfg.alpha,
                s: cfg.s,
                f_max: cfg.f_max,
                seed: cfg.seed,
            };
            let profile = dimension_profile(&p.points, &params)?;
            sink.put("dimension.csv", &formats::profile_csv(&profile))?;
            sink.put("point_errors.csv", &formats::point_errors_csv(&profile, p.names()))?;
            sink.put(
                "dimension.json",
                &json(&DimSummary {
                    peak: profile.peak,
                    s: profile.s,
                    alpha: profile.alpha,
                }),
            )?;
        }
        Command::Density => {
            sink.put("density.csv", &formats::density_csv(&density_map(&p.points, cfg.alpha)?, p.names()))?;
        }
        Command::H1 => h1_outputs(cfg, &p, &mut sink)?,
        Command::Baseline => {
            sink.put("baseline_matrix.csv", &formats::matrix_to_csv(&m))?;
            ph_outputs(cfg, &p, &mut sink)?;
            h1_outputs(cfg, &p, &mut sink)?;
        }
    }
    sink.put("manifest.cfg", &manifest(cfg, cmd))?;
    Ok(sink.written)
}

/// Config text that reproduces the run.
pub fn manifest(cfg: &RunConfig, cmd: Command) -> String {
    format!("# topling {}\n{}", cmd.as_str(), cfg.to_text())
}

/// Reads a manifest or config file, returning the command it names, if any.
pub fn read_config(path: &Path) -> Result<(RunConfig, Option<String>)> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let cmd = text
        .lines()
        .next()
        .and_then(|l| l.strip_prefix("# topling "))
        .map(|s| s.trim().to_string());
    Ok((RunConfig::from_text(&text)?, cmd))
}

/// Schema-agnostic helper for tests and examples: points given as a real
/// matrix with raw coordinates.
pub fn coords_matrix(names: Vec<String>, dim: usize, coords: &[f64]) -> Result<ParameterMatrix> {
    let cols = (0..dim).map(|k| format!("x{k}")).collect();
    Ok(ParameterMatrix::from_values(names, cols, coords.to_vec(), Schema::Real)?)
}
