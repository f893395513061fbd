use rayon::prelude::*;
use serde::Serialize;

use super::{winding_angle_value, PlanarError, PolyCurve, RayQuery};
use crate::geom3d::ROUNDING_GUARD;
use crate::lattice::{self, Lattice, BAND, EXTERIOR, UNVISITED};
use crate::word::RegionId;
use crate::{Point2, Vec2};

/// Pixel lattice; pixel `(i, j)` has linear index `i * ny + j`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PixelGrid {
    pub origin: Point2,
    pub spacing: Vec2,
    pub dims: [usize; 2],
}

impl PixelGrid {
    pub fn len(&self) -> usize {
        self.dims[0] * self.dims[1]
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn pixel_area(&self) -> f64 {
        self.spacing.x * self.spacing.y
    }

    fn coords(&self, idx: usize) -> [usize; 2] {
        [idx / self.dims[1], idx % self.dims[1]]
    }

    pub fn center(&self, idx: usize) -> Point2 {
        let [i, j] = self.coords(idx);
        self.origin + Vec2::new((i as f64 + 0.5) * self.spacing.x, (j as f64 + 0.5) * self.spacing.y)
    }

    pub fn pixel_of(&self, p: &Point2) -> Option<usize> {
        let i = ((p.x - self.origin.x) / self.spacing.x).floor();
        let j = ((p.y - self.origin.y) / self.spacing.y).floor();
        if i < 0.0 || j < 0.0 || i >= self.dims[0] as f64 || j >= self.dims[1] as f64 {
            return None;
        }
        Some(i as usize * self.dims[1] + j as usize)
    }
}

impl Lattice for PixelGrid {
    fn neighbors(&self, idx: usize) -> impl Iterator<Item = usize> + '_ {
        let [i, j] = self.coords(idx);
        let ny = self.dims[1];
        [
            i.checked_sub(1).map(|i| i * ny + j),
            (i + 1 < self.dims[0]).then(|| (i + 1) * ny + j),
            j.checked_sub(1).map(|j| i * ny + j),
            (j + 1 < ny).then(|| i * ny + j + 1),
        ]
        .into_iter()
        .flatten()
    }

    fn on_boundary(&self, idx: usize) -> bool {
        let [i, j] = self.coords(idx);
        i == 0 || j == 0 || i + 1 == self.dims[0] || j + 1 == self.dims[1]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlanarRegion {
    pub id: RegionId,
    /// Ray-crossing winding number at the representative pixel.
    pub winding: i64,
    /// Angle-sum winding value at the same point.
    pub angle_winding: f64,
    pub representative: [f64; 2],
    pub core_pixels: usize,
    pub curve_pixels: usize,
    pub area: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AreaBound {
    /// `sum |w| * Area`, the lower bound on swept area.
    pub unsigned: f64,
    /// `sum w * Area`.
    pub signed: f64,
}

#[derive(Debug, Clone)]
pub struct PlanarRegionMap {
    grid: PixelGrid,
    labels: Vec<u32>,
    regions: Vec<PlanarRegion>,
    unassigned_curve_pixels: usize,
}

impl PlanarRegionMap {
    pub fn grid(&self) -> &PixelGrid {
        &self.grid
    }

    pub fn regions(&self) -> &[PlanarRegion] {
        &self.regions
    }

    pub fn raw_labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn unassigned_curve_pixels(&self) -> usize {
        self.unassigned_curve_pixels
    }

    /// Region under `p`; `None` on the curve band, exterior off the grid.
    pub fn region_at(&self, p: &Point2) -> Option<RegionId> {
        match self.grid.pixel_of(p) {
            None => Some(RegionId::EXTERIOR),
            Some(v) => match self.labels[v] {
                BAND => None,
                l => Some(label_id(l)),
            },
        }
    }

    pub fn area_bound(&self) -> AreaBound {
        self.regions
            .iter()
            .filter(|r| !r.id.is_exterior())
            .fold(AreaBound { unsigned: 0.0, signed: 0.0 }, |acc, r| AreaBound {
                unsigned: acc.unsigned + r.winding.unsigned_abs() as f64 * r.area,
                signed: acc.signed + r.winding as f64 * r.area,
            })
    }
}

fn label_id(l: u32) -> RegionId {
    if l == EXTERIOR {
        RegionId::EXTERIOR
    } else {
        RegionId::bounded(l)
    }
}

/// Whether segment `a-b` meets the closed box `[lo, hi]` (Liang-Barsky).
fn segment_meets_box(a: &Point2, b: &Point2, lo: &Point2, hi: &Point2) -> bool {
    let d = b - a;
    let (mut t0, mut t1) = (0.0f64, 1.0f64);
    for k in 0..2 {
        for (p, q) in [(-d[k], a[k] - lo[k]), (d[k], hi[k] - a[k])] {
            if p == 0.0 {
                if q < 0.0 {
                    return false;
                }
            } else {
                let r = q / p;
                if p < 0.0 {
                    t0 = t0.max(r);
                } else {
                    t1 = t1.min(r);
                }
            }
        }
    }
    t0 <= t1
}

/// Pixel decomposition of the plane minus the curve, with a winding number
/// and area per region.
pub fn planar_regions(curve: &PolyCurve, resolution: usize) -> Result<PlanarRegionMap, PlanarError> {
    planar_regions_with(curve, resolution, &RayQuery::default())
}

pub fn planar_regions_with(
    curve: &PolyCurve,
    resolution: usize,
    query: &RayQuery,
) -> Result<PlanarRegionMap, PlanarError> {
    if resolution < 8 {
        return Err(PlanarError::ResolutionTooLow(resolution));
    }
    let (lo, hi) = curve.bounds();
    let half = ((hi - lo).max() * 0.5).max(1e-6) * 1.5;
    let c = nalgebra::center(&lo, &hi);
    let grid = PixelGrid {
        origin: c - Vec2::repeat(half),
        spacing: Vec2::repeat(2.0 * half / resolution as f64),
        dims: [resolution; 2],
    };

    let mut labels = vec![UNVISITED; grid.len()];
    let pad = grid.spacing * (0.5 * (1.0 + 1e-9));
    for (a, b) in curve.edges() {
        let (elo, ehi) = (a.inf(&b), a.sup(&b));
        let i0 = (((elo.x - grid.origin.x) / grid.spacing.x).floor() - 1.0).max(0.0) as usize;
        let j0 = (((elo.y - grid.origin.y) / grid.spacing.y).floor() - 1.0).max(0.0) as usize;
        let i1 = ((((ehi.x - grid.origin.x) / grid.spacing.x).floor() + 1.0) as usize).min(resolution - 1);
        let j1 = ((((ehi.y - grid.origin.y) / grid.spacing.y).floor() + 1.0) as usize).min(resolution - 1);
        for i in i0..=i1 {
            for j in j0..=j1 {
                let v = i * resolution + j;
                let center = grid.center(v);
                if labels[v] != BAND && segment_meets_box(&a, &b, &(center - pad), &(center + pad)) {
                    labels[v] = BAND;
                }
            }
        }
    }

    let count = lattice::flood_fill(&grid, &mut labels);
    let dist = lattice::band_distance(&grid, &labels);
    let reps = lattice::representatives(&labels, &dist, count);

    let mut regions = reps
        .par_iter()
        .enumerate()
        .map(|(l, rep)| {
            let p = match rep {
                Some((_, v)) => grid.center(*v),
                None => grid.origin - grid.spacing,
            };
            let winding = if l as u32 == EXTERIOR { 0 } else { query.winding(p, curve)? };
            Ok(PlanarRegion {
                id: label_id(l as u32),
                winding,
                angle_winding: winding_angle_value(p, curve)?,
                representative: [p.x, p.y],
                core_pixels: 0,
                curve_pixels: 0,
                area: 0.0,
            })
        })
        .collect::<Result<Vec<_>, PlanarError>>()?;

    let class: Vec<Option<i64>> = (0..grid.len())
        .into_par_iter()
        .map(|v| {
            if labels[v] != BAND {
                return None;
            }
            let w = winding_angle_value(grid.center(v), curve).ok()?;
            let r = w.round();
            ((w - r).abs() < ROUNDING_GUARD).then_some(r as i64)
        })
        .collect();
    let index_of_label: Vec<i64> = regions.iter().map(|r| r.winding).collect();
    let (owner, unassigned) = lattice::apportion_band(&grid, &labels, &class, &index_of_label);
    for (v, &l) in labels.iter().enumerate() {
        if l != BAND {
            regions[l as usize].core_pixels += 1;
        } else if let Some(o) = owner[v] {
            regions[o as usize].curve_pixels += 1;
        }
    }
    for r in &mut regions {
        r.area = (r.core_pixels + r.curve_pixels) as f64 * grid.pixel_area();
    }
    Ok(PlanarRegionMap {
        grid,
        labels,
        regions,
        unassigned_curve_pixels: unassigned,
    })
}

/// Winding-number-area bounds `sum |w| A` and `sum w A` over bounded regions.
pub fn homotopy_area_bound(curve: &PolyCurve, resolution: usize) -> Result<AreaBound, PlanarError> {
    Ok(planar_regions(curve, resolution)?.area_bound())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn liang_barsky() {
        let (lo, hi) = (Point2::new(0.0, 0.0), Point2::new(1.0, 1.0));
        assert!(segment_meets_box(&Point2::new(-1.0, 0.5), &Point2::new(2.0, 0.5), &lo, &hi));
        assert!(!segment_meets_box(&Point2::new(-1.0, 1.5), &Point2::new(2.0, 1.5), &lo, &hi));
        assert!(!segment_meets_box(&Point2::new(-1.0, 0.0), &Point2::new(0.0, -1.0), &lo, &hi));
        assert!(segment_meets_box(&Point2::new(0.2, 0.2), &Point2::new(0.3, 0.3), &lo, &hi));
    }

    #[test]
    fn unit_square_bound() {
        let b = homotopy_area_bound(&PolyCurve::square(Point2::origin(), 1.0), 128).unwrap();
        assert!((b.unsigned - 1.0).abs() < 0.02, "{b:?}");
        assert!((b.signed - 1.0).abs() < 0.02);
    }

    #[test]
    fn triple_circle_bound() {
        let c = PolyCurve::circle(Point2::origin(), 1.0, 256, 3);
        let map = planar_regions(&c, 256).unwrap();
        assert_eq!(map.regions().len(), 2);
        let b = map.area_bound();
        assert!((b.unsigned - 3.0 * PI).abs() / (3.0 * PI) < 0.02, "{b:?}");
    }

    #[test]
    fn figure_eight_cancels_in_signed_sum() {
        let f = PolyCurve::figure_eight(1.0, 400);
        let map = planar_regions(&f, 256).unwrap();
        let windings: Vec<i64> = map.regions().iter().map(|r| r.winding).collect();
        assert_eq!(windings.len(), 3);
        assert!(windings.contains(&1) && windings.contains(&-1));
        let lobe = 2.0 / 3.0;
        let b = map.area_bound();
        assert!((b.unsigned - 2.0 * lobe).abs() / (2.0 * lobe) < 0.02, "{b:?}");
        assert!(b.signed.abs() < 0.02 * 2.0 * lobe);
    }

    #[test]
    fn low_resolution_rejected() {
        assert_eq!(
            planar_regions(&PolyCurve::square(Point2::origin(), 1.0), 4).unwrap_err(),
            PlanarError::ResolutionTooLow(4)
        );
    }
}
