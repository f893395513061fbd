use rayon::prelude::*;
use serde::Serialize;

use super::DiscreteHomotopy;
use crate::Point3;

/// Signed volume of the tetrahedron `abcd`.
fn tet_volume(a: &Point3, b: &Point3, c: &Point3, d: &Point3) -> f64 {
    (b - a).cross(&(c - a)).dot(&(d - a)) / 6.0
}

/// Like [`tet_volume`], but exactly 0 when the volume is rounding noise
/// relative to the edge lengths (stationary or collapsed tetrahedra).
fn clean_tet_volume([a, b, c, d]: &[Point3; 4]) -> f64 {
    let v = tet_volume(a, b, c, d);
    let scale = (b - a).norm() * (c - a).norm() * (d - a).norm();
    if v.abs() <= 1e-12 * scale {
        0.0
    } else {
        v
    }
}

/// The three tetrahedra of the prism over triangle `tri` between frames `k`
/// and `k + 1`. Corners are taken in increasing vertex-index order and each
/// side quad is cut from its lower-index bottom corner to its higher-index
/// top corner, so neighbouring prisms agree on their shared faces. All three
/// tetrahedra of an unfolded prism have the same orientation.
fn prism_tets(h: &DiscreteHomotopy, k: usize, tri: &[usize; 3]) -> [[Point3; 4]; 3] {
    let mut v = *tri;
    v.sort_unstable();
    let (lo, hi) = (&h.frames()[k], &h.frames()[k + 1]);
    let p = v.map(|i| lo[i]);
    let q = v.map(|i| hi[i]);
    [
        [p[0], p[1], p[2], q[2]],
        [p[0], p[1], q[2], q[1]],
        [p[0], q[0], q[1], q[2]],
    ]
}

/// `+1` when sorting the corners is an even permutation of `tri`.
fn orientation(tri: &[usize; 3]) -> f64 {
    let ascending = (tri[0] < tri[1]) as u8 + (tri[1] < tri[2]) as u8 + (tri[2] < tri[0]) as u8;
    if ascending == 2 {
        1.0
    } else {
        -1.0
    }
}

/// Per-prism diagnostics of the volume sum.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct SweepQuality {
    pub prisms: usize,
    /// Prisms whose tetrahedra have mixed orientation (folded or inverted).
    pub inverted_prisms: usize,
    /// Prisms with zero volume, e.g. stationary triangles.
    pub degenerate_prisms: usize,
    /// `|sum of signed volumes|`; equals the swept volume when nothing folds.
    pub net_signed_volume: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweptVolume {
    pub volume: f64,
    pub quality: SweepQuality,
}

/// Multiplicity-counting swept volume: the sum of absolute tetrahedron
/// volumes over every triangle and time step.
pub fn swept_volume(h: &DiscreteHomotopy) -> SweptVolume {
    let tris = h.base().triangles();
    let steps = h.frames().len() - 1;
    let per_prism: Vec<[f64; 3]> = (0..steps * tris.len())
        .into_par_iter()
        .map(|i| prism_tets(h, i / tris.len(), &tris[i % tris.len()]).map(|t| clean_tet_volume(&t)))
        .collect();
    // fixed-order reduction keeps the result reproducible
    let mut volume = 0.0;
    let mut signed = 0.0;
    let mut quality = SweepQuality {
        prisms: per_prism.len(),
        ..Default::default()
    };
    for (i, vols) in per_prism.iter().enumerate() {
        let abs: f64 = vols.iter().map(|v| v.abs()).sum();
        volume += abs;
        signed += orientation(&tris[i % tris.len()]) * vols.iter().sum::<f64>();
        if abs == 0.0 {
            quality.degenerate_prisms += 1;
        } else if vols.iter().any(|&v| v > 0.0) && vols.iter().any(|&v| v < 0.0) {
            quality.inverted_prisms += 1;
        }
    }
    quality.net_signed_volume = signed.abs();
    SweptVolume { volume, quality }
}

/// Number of swept tetrahedra containing `point` (boundary hits count), an
/// upper bound for how often the surface passes through it. Zero-volume
/// tetrahedra are skipped.
pub fn sweep_multiplicity(point: &Point3, h: &DiscreteHomotopy) -> usize {
    let tris = h.base().triangles();
    let steps = h.frames().len() - 1;
    (0..steps * tris.len())
        .into_par_iter()
        .map(|i| {
            prism_tets(h, i / tris.len(), &tris[i % tris.len()])
                .iter()
                .filter(|tet| {
                    let v = clean_tet_volume(tet);
                    let [a, b, c, d] = tet;
                    if v == 0.0 {
                        return false;
                    }
                    let tol = -1e-12 * v.abs();
                    [
                        tet_volume(point, b, c, d),
                        tet_volume(a, point, c, d),
                        tet_volume(a, b, point, d),
                        tet_volume(a, b, c, point),
                    ]
                    .iter()
                    .all(|w| w * v.signum() >= tol)
                })
                .count()
        })
        .sum()
}

/// Sign distribution of the normal velocity over triangle centroids and
/// time steps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SenseReport {
    pub samples: usize,
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
    /// Samples whose sign disagrees with the majority sign.
    pub violations: usize,
    pub min: f64,
    pub max: f64,
    /// `true` when every non-zero sample has the same sign.
    pub sense_preserving: bool,
    /// `true` when nothing moves at all.
    pub degenerate: bool,
}

/// Evaluates `<(c_{k+1} - c_k) / dt, n_k>` at every triangle centroid `c`
/// with the unit normal `n_k` of frame `k`. Triangles that are degenerate in
/// frame `k` are skipped.
pub fn sense_preserving_report(h: &DiscreteHomotopy) -> SenseReport {
    let tris = h.base().triangles();
    let steps = h.frames().len() - 1;
    let scale = h.base().bounding_box().map_or(1.0, |b| b.diagonal());
    let samples: Vec<Option<f64>> = (0..steps * tris.len())
        .into_par_iter()
        .map(|i| {
            let (k, [a, b, c]) = (i / tris.len(), tris[i % tris.len()]);
            let (f0, f1) = (&h.frames()[k], &h.frames()[k + 1]);
            let n = (f0[b] - f0[a]).cross(&(f0[c] - f0[a]));
            let norm = n.norm();
            if norm == 0.0 {
                return None;
            }
            let dt = h.times()[k + 1] - h.times()[k];
            let vel = ((f1[a] - f0[a]) + (f1[b] - f0[b]) + (f1[c] - f0[c])) / (3.0 * dt);
            Some(vel.dot(&n) / norm)
        })
        .collect();
    let zero_tol = 1e-12 * scale;
    let mut r = SenseReport {
        samples: 0,
        positive: 0,
        negative: 0,
        zero: 0,
        violations: 0,
        min: f64::INFINITY,
        max: f64::NEG_INFINITY,
        sense_preserving: false,
        degenerate: false,
    };
    for v in samples.into_iter().flatten() {
        r.samples += 1;
        r.min = r.min.min(v);
        r.max = r.max.max(v);
        if v > zero_tol {
            r.positive += 1;
        } else if v < -zero_tol {
            r.negative += 1;
        } else {
            r.zero += 1;
        }
    }
    if r.samples == 0 {
        r.min = 0.0;
        r.max = 0.0;
    }
    r.violations = r.positive.min(r.negative);
    r.degenerate = r.positive + r.negative == 0;
    r.sense_preserving = !r.degenerate && r.violations == 0;
    r
}
