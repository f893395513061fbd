use super::{cable_crossings, Cable, GeomError, RegionMap, TriangleMesh, VoxelLabel};
use crate::word::{CableWord, RegionId, Symbol};

/// Fractions of an open cable piece tried, in order, when labelling it.
const SAMPLE_FRACTIONS: [f64; 9] = [0.5, 0.25, 0.75, 0.125, 0.875, 0.375, 0.625, 0.0625, 0.9375];

/// Records the signed region transitions along `cable`: the cable is cut at
/// its crossing parameters, each piece is labelled by the region of a sample
/// point inside it, and every crossing becomes one symbol.
pub fn build_cable_word(
    cable: &Cable,
    mesh: &TriangleMesh,
    regions: &RegionMap,
) -> Result<CableWord, GeomError> {
    let events = cable_crossings(cable, mesh)?;
    let mut cuts = Vec::with_capacity(events.len() + 2);
    cuts.push(0.0);
    cuts.extend(events.iter().map(|e| e.parameter));
    cuts.push(1.0);

    let pieces = cuts
        .windows(2)
        .enumerate()
        .map(|(i, w)| label_piece(cable, regions, i, w[0], w[1]))
        .collect::<Result<Vec<_>, _>>()?;

    let mut symbols = Vec::with_capacity(events.len());
    for (i, e) in events.iter().enumerate() {
        let (from, to) = (pieces[i], pieces[i + 1]);
        if from == to {
            return Err(GeomError::UnresolvedTransition {
                crossing: i,
                region: from,
            });
        }
        symbols.push(Symbol::new(from, to, e.sign));
    }
    let home = pieces[0];
    CableWord::new(home.to_string(), home, symbols)
        .map_err(|e| GeomError::InvalidCable(e.to_string()))
}

fn label_piece(
    cable: &Cable,
    regions: &RegionMap,
    piece: usize,
    lo: f64,
    hi: f64,
) -> Result<RegionId, GeomError> {
    SAMPLE_FRACTIONS
        .iter()
        .find_map(|f| match regions.label_at(&cable.point_at(lo + (hi - lo) * f)) {
            VoxelLabel::Region(r) => Some(r),
            VoxelLabel::Surface => None,
        })
        .ok_or(GeomError::SurfaceSample { segment: piece })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom3d::voxel_regions;
    use crate::word::{reduce, Sign};
    use crate::Point3;

    fn nested() -> TriangleMesh {
        TriangleMesh::unit_icosphere(2).merged(&TriangleMesh::icosphere(2, 2.0, Point3::origin()))
    }

    #[test]
    fn core_to_exterior() {
        let m = nested();
        let map = voxel_regions(&m, 32).unwrap();
        let core = map.regions().iter().find(|r| r.index == 2).unwrap().id;
        let shell = map.regions().iter().find(|r| r.index == 1).unwrap().id;
        let c = Cable::straight(Point3::new(0.01, 0.02, 0.03), Point3::new(3.9, 0.37, 0.21)).unwrap();
        let w = build_cable_word(&c, &m, &map).unwrap();
        assert_eq!(w.home(), core);
        assert_eq!(
            w.symbols(),
            &[
                Symbol::new(core, shell, Sign::Plus),
                Symbol::new(shell, RegionId::EXTERIOR, Sign::Plus)
            ]
        );
        assert_eq!(reduce(&w).coefficient, 2);
    }

    #[test]
    fn exterior_detour_cancels() {
        let m = TriangleMesh::unit_icosphere(2);
        let map = voxel_regions(&m, 32).unwrap();
        // leave the ball, come back in, leave again
        let c = Cable::new(vec![
            Point3::new(0.01, 0.02, 0.03),
            Point3::new(1.6, 0.11, 0.07),
            Point3::new(0.2, 0.31, -0.05),
            Point3::new(1.9, 1.7, 1.3),
        ])
        .unwrap();
        let w = build_cable_word(&c, &m, &map).unwrap();
        assert_eq!(w.len(), 3);
        assert_eq!(w.symbols()[1].from, RegionId::EXTERIOR);
        assert_eq!(w.symbols()[1].sign, Sign::Minus);
        assert_eq!(reduce(&w).coefficient, 1);
    }

    #[test]
    fn exterior_cable_gives_empty_word() {
        let m = TriangleMesh::unit_icosphere(2);
        let map = voxel_regions(&m, 16).unwrap();
        let c = Cable::straight(Point3::new(1.4, 1.3, 1.2), Point3::new(5.0, 5.0, 5.0)).unwrap();
        let w = build_cable_word(&c, &m, &map).unwrap();
        assert!(w.is_empty());
        assert!(w.home().is_exterior());
    }
}
