use std::f64::consts::PI;
use std::fs;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::HomotopyError;
use crate::geom3d::{io::read_mesh, Aabb, TriangleMesh};
use crate::{Point3, Vec3};

/// Relative tolerance for the collapsed final frame, scaled by the first
/// frame's bounding-box diagonal.
pub const COLLAPSE_TOLERANCE: f64 = 1e-9;

/// Time-sampled vertex positions over a fixed triangle connectivity. Between
/// samples every vertex moves linearly.
#[derive(Debug, Clone)]
pub struct DiscreteHomotopy {
    base: TriangleMesh,
    frames: Vec<Vec<Point3>>,
    times: Vec<f64>,
}

impl DiscreteHomotopy {
    /// Frame 0 is `base`'s own vertex array unless `frames[0]` says otherwise.
    pub fn new(base: TriangleMesh, frames: Vec<Vec<Point3>>, times: Vec<f64>) -> Result<Self, HomotopyError> {
        if frames.len() < 2 {
            return Err(HomotopyError::InvalidHomotopy("at least two frames are required".into()));
        }
        if times.len() != frames.len() {
            return Err(HomotopyError::InvalidHomotopy(format!(
                "{} frames but {} times",
                frames.len(),
                times.len()
            )));
        }
        if times[0] != 0.0 || *times.last().unwrap() != 1.0 {
            return Err(HomotopyError::InvalidHomotopy("times must run from 0 to 1".into()));
        }
        if let Some(k) = times.windows(2).position(|w| w[1] <= w[0]) {
            return Err(HomotopyError::InvalidHomotopy(format!(
                "times not strictly increasing at frame {}",
                k + 1
            )));
        }
        let n = base.vertices().len();
        if let Some(k) = frames.iter().position(|f| f.len() != n) {
            return Err(HomotopyError::InvalidHomotopy(format!(
                "frame {k} has {} vertices, expected {n}",
                frames[k].len()
            )));
        }
        if frames.iter().flatten().any(|p| !p.iter().all(|c| c.is_finite())) {
            return Err(HomotopyError::InvalidHomotopy("non-finite vertex position".into()));
        }
        let scale = Aabb::from_points(&frames[0]).map_or(1.0, |b| b.diagonal().max(f64::MIN_POSITIVE));
        let last = frames.last().unwrap();
        let spread = last.iter().map(|p| (p - last[0]).norm()).fold(0.0, f64::max);
        if spread > COLLAPSE_TOLERANCE * scale {
            return Err(HomotopyError::NotNull { spread });
        }
        let base = base.with_vertices(frames[0].clone())?;
        Ok(DiscreteHomotopy { base, frames, times })
    }

    /// Uniform times `k / (frames - 1)`.
    pub fn uniform(base: TriangleMesh, frames: Vec<Vec<Point3>>) -> Result<Self, HomotopyError> {
        let m = frames.len().max(2) - 1;
        let times = (0..frames.len()).map(|k| k as f64 / m as f64).collect();
        Self::new(base, frames, times)
    }

    /// `H(p, t) = c + (1 - t)(p - c)` about the vertex centroid `c`, sampled
    /// at `steps + 1` uniform times.
    pub fn radial(base: &TriangleMesh, steps: usize) -> Result<Self, HomotopyError> {
        let c = centroid(base.vertices());
        Self::from_fn(base, steps, |p, t| c + (p - c) * (1.0 - t))
    }

    /// Translate by `offset`, translate back, then contract radially; each
    /// phase uses `steps_per_phase` steps.
    pub fn translate_return(base: &TriangleMesh, offset: Vec3, steps_per_phase: usize) -> Result<Self, HomotopyError> {
        let m = steps_per_phase.max(1);
        let c = centroid(base.vertices());
        let mut frames = Vec::with_capacity(3 * m + 1);
        for k in 0..=3 * m {
            let (phase, s) = ((k / m).min(2), (k as f64 / m as f64) - (k / m).min(2) as f64);
            frames.push(
                base.vertices()
                    .iter()
                    .map(|p| match phase {
                        0 => p + offset * s,
                        1 => p + offset * (1.0 - s),
                        _ => c + (p - c) * (1.0 - s),
                    })
                    .collect(),
            );
        }
        Self::uniform(base.clone(), frames)
    }

    /// Radial contraction with smooth random vertex noise that vanishes at
    /// both ends:
    /// `c + (1 - t)((p - c)(1 + a s(p) sin(3 pi t)) + a sin(pi t) v(p))`,
    /// where `s` and `v` are sums of three random plane waves. The radial
    /// term breathes in and out, so for `a` above about 0.1 the motion is no
    /// longer sense-preserving.
    pub fn wobble(base: &TriangleMesh, steps: usize, amplitude: f64, seed: u64) -> Result<Self, HomotopyError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut waves = || -> Vec<(Vec3, Vec3, f64)> {
            (0..3)
                .map(|_| {
                    let k = Vec3::from_fn(|_, _| rng.random_range(-3.0..3.0));
                    let dir = Vec3::from_fn(|_, _| rng.random_range(-1.0..1.0));
                    (k, dir, rng.random_range(0.0..2.0 * PI))
                })
                .collect()
        };
        let (radial, lateral) = (waves(), waves());
        let field = |waves: &[(Vec3, Vec3, f64)], p: &Point3| -> Vec3 {
            waves.iter().map(|(k, dir, phase)| dir * (k.dot(&p.coords) + phase).sin()).sum::<Vec3>() / 3.0
        };
        let c = centroid(base.vertices());
        Self::from_fn(base, steps, |p, t| {
            let s = radial.iter().map(|(k, _, phase)| (k.dot(&p.coords) + phase).sin()).sum::<f64>() / 3.0;
            let breathe = 1.0 + amplitude * s * (3.0 * PI * t).sin();
            c + ((p - c) * breathe + field(&lateral, p) * amplitude * (PI * t).sin()) * (1.0 - t)
        })
    }

    /// Mesh files (`.off` or `.obj`) in `dir`, ordered by file name, at
    /// uniform times. All frames must share the first frame's connectivity.
    pub fn from_frame_dir(dir: &Path) -> Result<Self, HomotopyError> {
        let mut paths: Vec<_> = fs::read_dir(dir)
            .map_err(|e| HomotopyError::Io(format!("{}: {e}", dir.display())))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| matches!(p.extension().and_then(|e| e.to_str()), Some("off" | "obj")))
            .collect();
        paths.sort();
        let mut meshes = paths.iter().map(|p| read_mesh(p)).collect::<Result<Vec<_>, _>>()?;
        if meshes.is_empty() {
            return Err(HomotopyError::InvalidHomotopy(format!("no mesh files in {}", dir.display())));
        }
        let base = meshes.remove(0);
        let mut frames = vec![base.vertices().to_vec()];
        for (k, m) in meshes.into_iter().enumerate() {
            if m.triangles() != base.triangles() {
                return Err(HomotopyError::InvalidHomotopy(format!(
                    "{} does not share the first frame's connectivity",
                    paths[k + 1].display()
                )));
            }
            frames.push(m.vertices().to_vec());
        }
        Self::uniform(base, frames)
    }

    fn from_fn(base: &TriangleMesh, steps: usize, f: impl Fn(&Point3, f64) -> Point3) -> Result<Self, HomotopyError> {
        let m = steps.max(1);
        let mut all: Vec<Vec<Point3>> = (0..=m)
            .map(|k| {
                let t = k as f64 / m as f64;
                base.vertices().iter().map(|p| f(p, t)).collect()
            })
            .collect();
        // snap the last frame exactly onto its first vertex
        let last = all.last_mut().unwrap();
        let p0 = last[0];
        last.iter_mut().for_each(|p| *p = p0);
        Self::uniform(base.clone(), all)
    }

    /// The mesh at time 0.
    pub fn base(&self) -> &TriangleMesh {
        &self.base
    }

    pub fn frames(&self) -> &[Vec<Point3>] {
        &self.frames
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn frame_mesh(&self, k: usize) -> TriangleMesh {
        self.base.with_vertices(self.frames[k].clone()).expect("frames share connectivity")
    }

    /// The point all vertices reach at `t = 1`.
    pub fn terminal_point(&self) -> Point3 {
        self.frames.last().unwrap()[0]
    }

    /// The surface at time `t`, linearly interpolated between frames.
    pub fn at(&self, t: f64) -> TriangleMesh {
        let t = t.clamp(0.0, 1.0);
        let k = self.times.partition_point(|&s| s <= t).clamp(1, self.times.len() - 1) - 1;
        let s = (t - self.times[k]) / (self.times[k + 1] - self.times[k]);
        let verts = self.frames[k]
            .iter()
            .zip(&self.frames[k + 1])
            .map(|(a, b)| a + (b - a) * s)
            .collect();
        self.base.with_vertices(verts).expect("frames share connectivity")
    }

    /// Same motion on a finer time grid: every step is split into `factor`
    /// equal sub-steps.
    pub fn refined(&self, factor: usize) -> Self {
        let factor = factor.max(1);
        let mut frames = vec![self.frames[0].clone()];
        let mut times = vec![0.0];
        for k in 0..self.frames.len() - 1 {
            for j in 1..=factor {
                let s = j as f64 / factor as f64;
                frames.push(
                    self.frames[k]
                        .iter()
                        .zip(&self.frames[k + 1])
                        .map(|(a, b)| a + (b - a) * s)
                        .collect(),
                );
                times.push(if j == factor {
                    self.times[k + 1]
                } else {
                    self.times[k] + (self.times[k + 1] - self.times[k]) * s
                });
            }
        }
        DiscreteHomotopy {
            base: self.base.clone(),
            frames,
            times,
        }
    }
}

fn centroid(points: &[Point3]) -> Point3 {
    if points.is_empty() {
        return Point3::origin();
    }
    Point3::from(points.iter().map(|p| p.coords).sum::<Vec3>() / points.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radial_frames() {
        let s = TriangleMesh::unit_icosphere(1);
        let h = DiscreteHomotopy::radial(&s, 4).unwrap();
        assert_eq!(h.frames().len(), 5);
        assert_eq!(h.times(), &[0.0, 0.25, 0.5, 0.75, 1.0]);
        let p = h.at(0.5).vertices()[3];
        assert!((p.coords.norm() - 0.5).abs() < 1e-12);
        assert!(h.terminal_point().coords.norm() < 1e-12);
    }

    #[test]
    fn rejects_non_null() {
        let s = TriangleMesh::unit_icosphere(0);
        let frames = vec![s.vertices().to_vec(), s.vertices().to_vec()];
        assert!(matches!(
            DiscreteHomotopy::uniform(s, frames),
            Err(HomotopyError::NotNull { .. })
        ));
    }

    #[test]
    fn rejects_bad_times_and_sizes() {
        let s = TriangleMesh::unit_icosphere(0);
        let point = vec![Point3::origin(); s.vertices().len()];
        let frames = vec![s.vertices().to_vec(), point.clone(), point.clone()];
        assert!(DiscreteHomotopy::new(s.clone(), frames.clone(), vec![0.0, 0.5, 0.5]).is_err());
        assert!(DiscreteHomotopy::new(s.clone(), frames.clone(), vec![0.0, 1.0]).is_err());
        assert!(DiscreteHomotopy::new(s.clone(), vec![s.vertices().to_vec(), vec![Point3::origin()]], vec![0.0, 1.0]).is_err());
        assert!(DiscreteHomotopy::new(s, frames, vec![0.0, 0.3, 1.0]).is_ok());
    }

    #[test]
    fn translate_return_phases() {
        let s = TriangleMesh::unit_icosphere(1);
        let h = DiscreteHomotopy::translate_return(&s, Vec3::new(0.0, 0.0, 4.0), 8).unwrap();
        assert_eq!(h.frames().len(), 25);
        let mid = h.at(1.0 / 3.0);
        let c = mid.vertices().iter().map(|p| p.z).sum::<f64>() / mid.vertices().len() as f64;
        assert!((c - 4.0).abs() < 1e-9);
        assert!((h.at(2.0 / 3.0).vertices()[5] - s.vertices()[5]).norm() < 1e-12);
    }

    #[test]
    fn wobble_is_seeded_and_starts_on_base() {
        let s = TriangleMesh::unit_icosphere(2);
        let a = DiscreteHomotopy::wobble(&s, 16, 0.2, 7).unwrap();
        let b = DiscreteHomotopy::wobble(&s, 16, 0.2, 7).unwrap();
        let c = DiscreteHomotopy::wobble(&s, 16, 0.2, 8).unwrap();
        assert_eq!(a.frames(), b.frames());
        assert_ne!(a.frames()[5], c.frames()[5]);
        assert_eq!(a.frames()[0], s.vertices());
    }

    #[test]
    fn refinement_keeps_positions() {
        let s = TriangleMesh::unit_icosphere(1);
        let h = DiscreteHomotopy::radial(&s, 4).unwrap();
        let r = h.refined(3);
        assert_eq!(r.frames().len(), 13);
        assert_eq!(r.frames()[3], h.frames()[1]);
        assert_eq!(r.times()[12], 1.0);
    }

    #[test]
    fn frame_dir_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let h = DiscreteHomotopy::radial(&TriangleMesh::unit_icosphere(0), 3).unwrap();
        for k in 0..h.frames().len() {
            crate::geom3d::io::write_off(&h.frame_mesh(k), &dir.path().join(format!("f{k:03}.off"))).unwrap();
        }
        let back = DiscreteHomotopy::from_frame_dir(dir.path()).unwrap();
        assert_eq!(back.frames().len(), 4);
        assert!((back.frames()[1][2] - h.frames()[1][2]).norm() < 1e-9);
    }
}
