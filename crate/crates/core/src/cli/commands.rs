use std::collections::{BTreeMap, HashMap};
use std::fs::File;
use std::io::BufWriter;
use std::path::Path;
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};

use super::{curve_from_spec, mesh_from_spec, CliError, Command, RunConfig};
use crate::geom3d::{
    default_bounds, solid_angle_winding, validate_mesh, voxel_regions_in, IndexQuery, TriangleMesh, ROUNDING_GUARD,
};
use crate::homotopy::{index_trace, verify_lower_bound_with, DiscreteHomotopy};
use crate::planar::{winding_angle_value, RayQuery, planar_regions_with};
use crate::word::{parse_word_file, reduce, validate_simple, vdeg, CableSystemWord, RegionId};
use crate::{Point2, Point3, Vec3};

type Output = (Value, Vec<String>);

fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

pub(super) fn dispatch(config: &RunConfig) -> Result<Output, CliError> {
    let started = Instant::now();
    let out = match &config.command {
        Command::Reduce { words, volumes, timings } => cmd_reduce(words, volumes.as_deref(), *timings),
        Command::Regions { mesh, dump } => cmd_regions(config, mesh, dump.as_deref()),
        Command::Vdeg { mesh } => cmd_vdeg(config, mesh),
        Command::Index { mesh, point } => cmd_index(config, mesh, point),
        Command::Sweep {
            homotopy,
            mesh,
            steps,
            offset,
            amplitude,
            point,
        } => cmd_sweep(config, homotopy, mesh, *steps, offset, *amplitude, point.as_ref()),
        Command::Planar { curve, point } => cmd_planar(config, curve, point.as_ref()),
    };
    log::info!("finished in {:.3} s", started.elapsed().as_secs_f64());
    out
}

#[derive(Serialize)]
struct ReducedLine {
    cable_id: String,
    home: RegionId,
    coefficient: i64,
    reduced: String,
    symbols: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    seconds: Option<f64>,
}

fn cmd_reduce(path: &Path, volumes: Option<&Path>, timings: bool) -> Result<Output, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let words = parse_word_file(&text).map_err(|source| CliError::WordFile {
        path: path.display().to_string(),
        source,
    })?;
    let mut lines = Vec::with_capacity(words.len());
    let mut terms = Vec::with_capacity(words.len());
    for w in &words {
        let t0 = Instant::now();
        let term = reduce(w);
        let elapsed = t0.elapsed().as_secs_f64();
        log::debug!("{}: {} symbols reduced in {elapsed:.3e} s", w.cable_id(), w.len());
        lines.push(ReducedLine {
            cable_id: w.cable_id().to_string(),
            home: w.home(),
            coefficient: term.coefficient,
            reduced: term.to_string(),
            symbols: w.len(),
            seconds: timings.then_some(elapsed),
        });
        terms.push(term);
    }
    let system = CableSystemWord::new(words)?;
    let simplicity = validate_simple(&system);
    let mut warnings = Vec::new();
    for c in simplicity.cables.iter().filter(|c| !c.is_simple()) {
        warnings.push(format!("cable {} is not simple", c.cable_id));
    }
    let missing = system.regions_without_word();
    if !missing.is_empty() {
        let list: Vec<String> = missing.iter().map(ToString::to_string).collect();
        warnings.push(format!("regions crossed without a cable word: {}", list.join(", ")));
    }
    let mut result = json!({
        "cables": lines,
        "coefficients": lines.iter().map(|l| l.coefficient).collect::<Vec<_>>(),
        "simplicity": simplicity,
        "all_simple": simplicity.all_simple(),
    });
    if let Some(vpath) = volumes {
        let text = std::fs::read_to_string(vpath).map_err(|e| CliError::Io(format!("{}: {e}", vpath.display())))?;
        let raw: BTreeMap<String, f64> =
            serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", vpath.display())))?;
        let mut map = HashMap::new();
        for (k, v) in raw {
            let id: RegionId = k.parse().map_err(|e| CliError::Config(format!("{}: {e}", vpath.display())))?;
            map.insert(id, v);
        }
        result["vdeg"] = json!(vdeg(&terms, &map)?);
    }
    Ok((result, warnings))
}

fn load_mesh(spec: &str) -> Result<(TriangleMesh, Vec<String>), CliError> {
    let mesh = mesh_from_spec(spec)?;
    let report = validate_mesh(&mesh);
    let mut warnings = Vec::new();
    if !report.is_closed() {
        warnings.push(format!("mesh has {} open edges", report.open_edges.len()));
    }
    if !report.is_oriented() {
        warnings.push(format!("mesh has {} inconsistently oriented edges", report.inconsistent_edges.len()));
    }
    if !report.degenerate_triangles.is_empty() {
        warnings.push(format!("mesh has {} degenerate triangles", report.degenerate_triangles.len()));
    }
    Ok((mesh, warnings))
}

fn query(config: &RunConfig, mesh: &TriangleMesh) -> IndexQuery {
    IndexQuery::for_mesh(mesh)
        .with_seed(config.seed)
        .with_retry_budget(config.retry_budget)
}

fn cmd_regions(config: &RunConfig, spec: &str, dump: Option<&Path>) -> Result<Output, CliError> {
    let (mesh, mut warnings) = load_mesh(spec)?;
    let map = voxel_regions_in(&mesh, config.resolution, default_bounds(&mesh), &query(config, &mesh))?;
    if map.unassigned_surface_voxels() > 0 {
        warnings.push(format!("{} surface voxels left unassigned", map.unassigned_surface_voxels()));
    }
    for r in map.bounded().filter(|r| !r.oracle_agrees()) {
        warnings.push(format!("region {}: cable index {} vs solid angle {:.4}", r.id, r.index, r.winding));
    }
    if let Some(p) = dump {
        let f = File::create(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
        map.write_raw_labels(BufWriter::new(f))
            .map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
    }
    let grid = map.grid();
    Ok((
        json!({
            "grid": {
                "origin": [grid.origin.x, grid.origin.y, grid.origin.z],
                "spacing": [grid.spacing.x, grid.spacing.y, grid.spacing.z],
                "dims": grid.dims,
            },
            "regions": map.records(),
            "total_degree": map.total_degree(),
            "unassigned_surface_voxels": map.unassigned_surface_voxels(),
        }),
        warnings,
    ))
}

fn cmd_vdeg(config: &RunConfig, spec: &str) -> Result<Output, CliError> {
    let (mesh, warnings) = load_mesh(spec)?;
    let map = voxel_regions_in(&mesh, config.resolution, default_bounds(&mesh), &query(config, &mesh))?;
    let d = map.total_degree();
    Ok((
        json!({
            "D": d.total,
            "V_deg": d.vdeg,
            "signed_volume": mesh.signed_volume(),
            "regions": map.bounded().count(),
        }),
        warnings,
    ))
}

fn cmd_index(config: &RunConfig, spec: &str, point: &[f64; 3]) -> Result<Output, CliError> {
    let (mesh, mut warnings) = load_mesh(spec)?;
    let p = Point3::from(*point);
    let index = query(config, &mesh).index(&p, &mesh)?;
    let w = solid_angle_winding(&p, &mesh);
    let agrees = (w - index as f64).abs() < ROUNDING_GUARD;
    if !agrees {
        warnings.push(format!("cable index {index} disagrees with solid-angle winding {w:.6}"));
    }
    Ok((
        json!({
            "point": point,
            "index": index,
            "oracle_winding": w,
            "oracle_agrees": agrees,
        }),
        warnings,
    ))
}

#[allow(clippy::too_many_arguments)]
fn cmd_sweep(
    config: &RunConfig,
    homotopy: &str,
    spec: &str,
    steps: usize,
    offset: &[f64; 3],
    amplitude: f64,
    point: Option<&[f64; 3]>,
) -> Result<Output, CliError> {
    if steps == 0 {
        return Err(CliError::Config("steps must be at least 1".into()));
    }
    let h = match homotopy {
        "radial" => DiscreteHomotopy::radial(&mesh_from_spec(spec)?, steps)?,
        "translate-return" => DiscreteHomotopy::translate_return(&mesh_from_spec(spec)?, Vec3::from(*offset), steps)?,
        "wobble" => DiscreteHomotopy::wobble(&mesh_from_spec(spec)?, steps, amplitude, config.seed)?,
        dir if Path::new(dir).is_dir() => DiscreteHomotopy::from_frame_dir(Path::new(dir))?,
        other => {
            return Err(CliError::Config(format!(
                "unknown homotopy `{other}` (expected radial, translate-return, wobble or a frame directory)"
            )))
        }
    };
    let report = verify_lower_bound_with(&h, config.resolution, config.slack)?;
    let warnings = report.warnings.clone();
    let mut result = json!({
        "frames": h.frames().len(),
        "triangles": h.base().triangles().len(),
        "report": report,
    });
    if let Some(p) = point {
        result["trace"] = to_value(index_trace(&Point3::from(*p), &h)?);
    }
    Ok((result, warnings))
}

fn cmd_planar(config: &RunConfig, spec: &str, point: Option<&[f64; 2]>) -> Result<Output, CliError> {
    let curve = curve_from_spec(spec)?;
    let rays = RayQuery {
        retry_budget: config.retry_budget,
        seed: config.seed,
    };
    let map = planar_regions_with(&curve, config.resolution, &rays)?;
    let mut warnings = Vec::new();
    if map.unassigned_curve_pixels() > 0 {
        warnings.push(format!("{} curve pixels left unassigned", map.unassigned_curve_pixels()));
    }
    for r in map.regions().iter().filter(|r| (r.angle_winding - r.winding as f64).abs() >= ROUNDING_GUARD) {
        warnings.push(format!("region {}: ray winding {} vs angle sum {:.4}", r.id, r.winding, r.angle_winding));
    }
    let mut result = json!({
        "regions": map.regions(),
        "area_bound": map.area_bound(),
        "signed_area": curve.signed_area(),
        "unassigned_curve_pixels": map.unassigned_curve_pixels(),
    });
    if let Some(p) = point {
        let q = Point2::from(*p);
        result["point"] = json!({
            "point": p,
            "winding": rays.winding(q, &curve)?,
            "angle_winding": winding_angle_value(q, &curve)?,
        });
    }
    Ok((result, warnings))
}
