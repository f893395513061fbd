//! Voxel decomposition of the mesh complement into face-connected regions,
//! each carrying a volume and a cable index.
//!
//! Voxels whose cell touches a triangle are marked surface-adjacent and
//! excluded from the flood fill. Their volume is afterwards handed to the
//! nearest region whose index matches the winding number at the voxel
//! centre, so region volumes are not biased low by the surface band.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use super::{solid_angle_winding, Aabb, GeomError, IndexQuery, TriangleMesh, ROUNDING_GUARD};
use crate::lattice::{self, Lattice, BAND, EXTERIOR as EXTERIOR_LABEL, UNVISITED};
use crate::word::RegionId;
use crate::{Point3, Vec3};

/// Raw label of a surface-adjacent voxel.
pub const SURFACE_LABEL: u32 = BAND;

/// Axis-aligned voxel lattice. Voxel `(i, j, k)` has linear index
/// `(i * ny + j) * nz + k` (row-major, axis order x, y, z).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Grid {
    pub origin: Point3,
    pub spacing: Vec3,
    pub dims: [usize; 3],
}

impl Grid {
    pub fn new(bounds: Aabb, resolution: usize) -> Self {
        Grid {
            origin: bounds.min,
            spacing: bounds.extent() / resolution as f64,
            dims: [resolution; 3],
        }
    }

    pub fn len(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn bounds(&self) -> Aabb {
        let d = Vec3::new(self.dims[0] as f64, self.dims[1] as f64, self.dims[2] as f64);
        Aabb {
            min: self.origin,
            max: self.origin + self.spacing.component_mul(&d),
        }
    }

    pub fn voxel_volume(&self) -> f64 {
        self.spacing.x * self.spacing.y * self.spacing.z
    }

    #[inline]
    pub fn linear(&self, [i, j, k]: [usize; 3]) -> usize {
        (i * self.dims[1] + j) * self.dims[2] + k
    }

    #[inline]
    pub fn coords(&self, idx: usize) -> [usize; 3] {
        let k = idx % self.dims[2];
        let rest = idx / self.dims[2];
        [rest / self.dims[1], rest % self.dims[1], k]
    }

    pub fn center(&self, idx: usize) -> Point3 {
        let c = self.coords(idx);
        self.origin
            + Vec3::new(
                (c[0] as f64 + 0.5) * self.spacing.x,
                (c[1] as f64 + 0.5) * self.spacing.y,
                (c[2] as f64 + 0.5) * self.spacing.z,
            )
    }

    /// Voxel containing `p`, if it lies inside the lattice.
    pub fn voxel_of(&self, p: &Point3) -> Option<usize> {
        let mut c = [0; 3];
        for a in 0..3 {
            let x = ((p[a] - self.origin[a]) / self.spacing[a]).floor();
            if x < 0.0 || x >= self.dims[a] as f64 {
                return None;
            }
            c[a] = x as usize;
        }
        Some(self.linear(c))
    }
}

impl Lattice for Grid {
    fn on_boundary(&self, idx: usize) -> bool {
        let c = self.coords(idx);
        (0..3).any(|a| c[a] == 0 || c[a] + 1 == self.dims[a])
    }

    fn neighbors(&self, idx: usize) -> impl Iterator<Item = usize> + '_ {
        let c = self.coords(idx);
        (0..6).filter_map(move |n| {
            let a = n / 2;
            let mut d = c;
            if n % 2 == 0 {
                d[a] = d[a].checked_sub(1)?;
            } else {
                d[a] += 1;
                if d[a] >= self.dims[a] {
                    return None;
                }
            }
            Some(self.linear(d))
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VoxelLabel {
    Region(RegionId),
    Surface,
}

/// Per-region summary.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionInfo {
    pub id: RegionId,
    pub index: i64,
    /// Solid-angle winding number at the representative point.
    pub winding: f64,
    pub representative: Point3,
    /// Grid distance from the representative voxel to the surface band.
    pub clearance: u32,
    pub core_voxels: usize,
    /// Surface-adjacent voxels whose volume was apportioned to this region.
    pub surface_voxels: usize,
    pub volume: f64,
}

impl RegionInfo {
    pub fn oracle_agrees(&self) -> bool {
        let r = self.winding.round();
        r as i64 == self.index && (self.winding - r).abs() < ROUNDING_GUARD
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TotalDegree {
    /// Signed degree-weighted volume `sum ind * Vol`.
    pub total: f64,
    /// `sum |ind| * Vol`.
    pub vdeg: f64,
}

/// Export record for one region.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionRecord {
    pub label: RegionId,
    pub index: i64,
    pub volume: f64,
    pub representative: [f64; 3],
    pub core_voxels: usize,
    pub surface_voxels: usize,
    pub oracle_winding: f64,
}

#[derive(Debug, Clone)]
pub struct RegionMap {
    grid: Grid,
    labels: Vec<u32>,
    regions: Vec<RegionInfo>,
    unassigned_surface_voxels: usize,
}

impl RegionMap {
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// Regions ordered exterior first, then bounded regions by label.
    pub fn regions(&self) -> &[RegionInfo] {
        &self.regions
    }

    pub fn region(&self, id: RegionId) -> Option<&RegionInfo> {
        self.regions.iter().find(|r| r.id == id)
    }

    pub fn bounded(&self) -> impl Iterator<Item = &RegionInfo> {
        self.regions.iter().filter(|r| !r.id.is_exterior())
    }

    /// Surface voxels whose centre winding matched no neighbouring region.
    pub fn unassigned_surface_voxels(&self) -> usize {
        self.unassigned_surface_voxels
    }

    /// Raw flood-fill labels: 0 is the exterior, bounded regions count up
    /// from 1, [`SURFACE_LABEL`] marks the surface band.
    pub fn raw_labels(&self) -> &[u32] {
        &self.labels
    }

    /// Label of the voxel containing `p`; points outside the lattice are
    /// exterior.
    pub fn label_at(&self, p: &Point3) -> VoxelLabel {
        match self.grid.voxel_of(p) {
            None => VoxelLabel::Region(RegionId::EXTERIOR),
            Some(v) => match self.labels[v] {
                SURFACE_LABEL => VoxelLabel::Surface,
                l => VoxelLabel::Region(region_id(l)),
            },
        }
    }

    pub fn total_degree(&self) -> TotalDegree {
        self.bounded().fold(TotalDegree { total: 0.0, vdeg: 0.0 }, |acc, r| TotalDegree {
            total: acc.total + r.index as f64 * r.volume,
            vdeg: acc.vdeg + r.index.unsigned_abs() as f64 * r.volume,
        })
    }

    pub fn records(&self) -> Vec<RegionRecord> {
        self.regions
            .iter()
            .map(|r| RegionRecord {
                label: r.id,
                index: r.index,
                volume: r.volume,
                representative: [r.representative.x, r.representative.y, r.representative.z],
                core_voxels: r.core_voxels,
                surface_voxels: r.surface_voxels,
                oracle_winding: r.winding,
            })
            .collect()
    }

    /// Writes the raw labels as little-endian `u32`s in linear voxel order.
    pub fn write_raw_labels(&self, mut out: impl Write) -> std::io::Result<()> {
        let mut buf = Vec::with_capacity(self.labels.len() * 4);
        for l in &self.labels {
            buf.extend_from_slice(&l.to_le_bytes());
        }
        out.write_all(&buf)
    }
}

fn region_id(label: u32) -> RegionId {
    if label == EXTERIOR_LABEL {
        RegionId::EXTERIOR
    } else {
        RegionId::bounded(label)
    }
}

/// Cube around the mesh with 50% padding on each side of its largest half
/// extent.
pub fn default_bounds(mesh: &TriangleMesh) -> Aabb {
    let (c, half) = match mesh.bounding_box() {
        Some(bb) => (bb.center(), (bb.extent().max() * 0.5).max(1e-6)),
        None => (Point3::origin(), 2.0 / 3.0),
    };
    let h = Vec3::repeat(half * 1.5);
    Aabb { min: c - h, max: c + h }
}

pub fn voxel_regions(mesh: &TriangleMesh, resolution: usize) -> Result<RegionMap, GeomError> {
    voxel_regions_in(mesh, resolution, default_bounds(mesh), &IndexQuery::for_mesh(mesh))
}

/// Region decomposition on an explicit lattice.
pub fn voxel_regions_in(
    mesh: &TriangleMesh,
    resolution: usize,
    bounds: Aabb,
    query: &IndexQuery,
) -> Result<RegionMap, GeomError> {
    if resolution < 8 {
        return Err(GeomError::ResolutionTooLow(resolution));
    }
    let grid = Grid::new(bounds, resolution);
    let mut labels = vec![UNVISITED; grid.len()];
    mark_surface(mesh, &grid, &mut labels);
    let component_count = lattice::flood_fill(&grid, &mut labels);

    let dist = lattice::band_distance(&grid, &labels);
    let best = lattice::representatives(&labels, &dist, component_count);

    let mut regions = best
        .par_iter()
        .enumerate()
        .map(|(l, b)| {
            // an explicit lattice may be filled completely by the surface band
            let (clearance, representative) = match b {
                Some((d, v)) => (*d, grid.center(*v)),
                None => (0, grid.bounds().max + grid.spacing),
            };
            let index = if l as u32 == EXTERIOR_LABEL {
                0
            } else {
                query.index(&representative, mesh)?
            };
            Ok(RegionInfo {
                id: region_id(l as u32),
                index,
                winding: solid_angle_winding(&representative, mesh),
                representative,
                clearance,
                core_voxels: 0,
                surface_voxels: 0,
                volume: 0.0,
            })
        })
        .collect::<Result<Vec<_>, GeomError>>()?;

    for (r, e) in regions.iter().filter(|r| !r.oracle_agrees()).map(|r| (r.id, r.winding)) {
        log::warn!("region {r}: cable index disagrees with solid-angle winding {e:.4}");
    }

    let class = band_classes(mesh, &grid, &labels);
    let index_of_label: Vec<i64> = regions.iter().map(|r| r.index).collect();
    let (owner, unassigned) = lattice::apportion_band(&grid, &labels, &class, &index_of_label);
    for (v, &l) in labels.iter().enumerate() {
        if l != SURFACE_LABEL {
            regions[l as usize].core_voxels += 1;
        } else if let Some(o) = owner[v] {
            regions[o as usize].surface_voxels += 1;
        }
    }
    let vv = grid.voxel_volume();
    for r in &mut regions {
        r.volume = (r.core_voxels + r.surface_voxels) as f64 * vv;
    }
    log::info!(
        "{} regions on a {}^3 grid, {} unassigned surface voxels",
        regions.len(),
        resolution,
        unassigned
    );

    Ok(RegionMap {
        grid,
        labels,
        regions,
        unassigned_surface_voxels: unassigned,
    })
}

pub fn total_degree(mesh: &TriangleMesh, resolution: usize) -> Result<TotalDegree, GeomError> {
    Ok(voxel_regions(mesh, resolution)?.total_degree())
}

fn mark_surface(mesh: &TriangleMesh, grid: &Grid, labels: &mut [u32]) {
    let half = grid.spacing * 0.5 * (1.0 + 1e-9);
    for t in 0..mesh.triangles().len() {
        let tri = mesh.corners(t);
        let Some(bb) = Aabb::from_points(&tri) else { continue };
        let mut lo = [0usize; 3];
        let mut hi = [0usize; 3];
        let mut inside = true;
        for a in 0..3 {
            let l = ((bb.min[a] - grid.origin[a]) / grid.spacing[a]).floor() - 1.0;
            let h = ((bb.max[a] - grid.origin[a]) / grid.spacing[a]).floor() + 1.0;
            if h < 0.0 || l >= grid.dims[a] as f64 {
                inside = false;
                break;
            }
            lo[a] = l.max(0.0) as usize;
            hi[a] = (h as usize).min(grid.dims[a] - 1);
        }
        if !inside {
            continue;
        }
        for i in lo[0]..=hi[0] {
            for j in lo[1]..=hi[1] {
                for k in lo[2]..=hi[2] {
                    let v = grid.linear([i, j, k]);
                    if labels[v] != SURFACE_LABEL && tri_box_overlap(&grid.center(v), &half, &tri) {
                        labels[v] = SURFACE_LABEL;
                    }
                }
            }
        }
    }
}

/// Rounded winding number at the centre of every band voxel.
fn band_classes(mesh: &TriangleMesh, grid: &Grid, labels: &[u32]) -> Vec<Option<i64>> {
    let band: Vec<usize> = (0..labels.len()).filter(|&v| labels[v] == BAND).collect();
    let windings: Vec<Option<i64>> = band
        .par_iter()
        .map(|&v| {
            let w = solid_angle_winding(&grid.center(v), mesh);
            let r = w.round();
            ((w - r).abs() < ROUNDING_GUARD).then_some(r as i64)
        })
        .collect();
    let mut class = vec![None; labels.len()];
    for (v, w) in band.into_iter().zip(windings) {
        class[v] = w;
    }
    class
}

/// Separating-axis test between a triangle and an axis-aligned box.
fn tri_box_overlap(center: &Point3, half: &Vec3, tri: &[Point3; 3]) -> bool {
    let v = tri.map(|p| p - center);
    for a in 0..3 {
        let lo = v.iter().map(|p| p[a]).fold(f64::INFINITY, f64::min);
        let hi = v.iter().map(|p| p[a]).fold(f64::NEG_INFINITY, f64::max);
        if lo > half[a] || hi < -half[a] {
            return false;
        }
    }
    let e = [v[1] - v[0], v[2] - v[1], v[0] - v[2]];
    let n = e[0].cross(&e[1]);
    if n.dot(&v[0]).abs() > half.dot(&n.abs()) {
        return false;
    }
    for edge in &e {
        for a in 0..3 {
            let axis = Vec3::ith(a, 1.0).cross(edge);
            let r = half.dot(&axis.abs());
            let p = v.map(|q| axis.dot(&q));
            let lo = p.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = p.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            if lo > r || hi < -r {
                return false;
            }
        }
    }
    true
}
