//! Dimension-independent labelling passes over voxel and pixel lattices.

use std::collections::VecDeque;

/// Raw label of a cell in the surface band.
pub const BAND: u32 = u32::MAX;
pub const EXTERIOR: u32 = 0;
pub const UNVISITED: u32 = u32::MAX - 1;

pub trait Lattice {
    fn neighbors(&self, idx: usize) -> impl Iterator<Item = usize> + '_;
    fn on_boundary(&self, idx: usize) -> bool;
}

/// Labels the face-connected components of the non-band cells in place.
/// Components touching the lattice boundary become [`EXTERIOR`]; the rest
/// are numbered from 1 in discovery order. Returns the number of labels in
/// use (including the exterior).
pub fn flood_fill<L: Lattice>(lattice: &L, labels: &mut [u32]) -> usize {
    let mut component = vec![u32::MAX; labels.len()];
    let mut touches = Vec::new();
    let mut queue = VecDeque::new();
    for seed in 0..labels.len() {
        if labels[seed] != UNVISITED || component[seed] != u32::MAX {
            continue;
        }
        let c = touches.len() as u32;
        touches.push(false);
        component[seed] = c;
        queue.push_back(seed);
        while let Some(v) = queue.pop_front() {
            if lattice.on_boundary(v) {
                touches[c as usize] = true;
            }
            for n in lattice.neighbors(v) {
                if labels[n] == UNVISITED && component[n] == u32::MAX {
                    component[n] = c;
                    queue.push_back(n);
                }
            }
        }
    }
    let mut next = 1u32;
    let relabel: Vec<u32> = touches
        .iter()
        .map(|&t| {
            if t {
                EXTERIOR
            } else {
                next += 1;
                next - 1
            }
        })
        .collect();
    for (l, c) in labels.iter_mut().zip(&component) {
        if *l == UNVISITED {
            *l = relabel[*c as usize];
        }
    }
    next as usize
}

/// Lattice (city-block) distance from every cell to the nearest band cell;
/// `u32::MAX` everywhere when there is no band.
pub fn band_distance<L: Lattice>(lattice: &L, labels: &[u32]) -> Vec<u32> {
    let mut dist = vec![u32::MAX; labels.len()];
    let mut queue: VecDeque<usize> = (0..labels.len()).filter(|&v| labels[v] == BAND).collect();
    for &v in &queue {
        dist[v] = 0;
    }
    while let Some(v) = queue.pop_front() {
        for n in lattice.neighbors(v) {
            if dist[n] == u32::MAX {
                dist[n] = dist[v] + 1;
                queue.push_back(n);
            }
        }
    }
    dist
}

/// For each label, the cell farthest from the band (lowest index on ties)
/// and its distance.
pub fn representatives(labels: &[u32], dist: &[u32], label_count: usize) -> Vec<Option<(u32, usize)>> {
    let mut best: Vec<Option<(u32, usize)>> = vec![None; label_count];
    for (v, &l) in labels.iter().enumerate() {
        if l != BAND {
            let slot = &mut best[l as usize];
            if slot.is_none_or(|(d, _)| dist[v] > d) {
                *slot = Some((dist[v], v));
            }
        }
    }
    best
}

/// Assigns band cells to regions breadth-first from the region cores: a band
/// cell joins a neighbouring region when its own class (the rounded winding
/// number at its centre) equals that region's index. Returns the owner of
/// every cell and the number of band cells left unowned.
pub fn apportion_band<L: Lattice>(
    lattice: &L,
    labels: &[u32],
    class: &[Option<i64>],
    index_of_label: &[i64],
) -> (Vec<Option<u32>>, usize) {
    let mut owner: Vec<Option<u32>> = labels.iter().map(|&l| (l != BAND).then_some(l)).collect();
    let mut queue: VecDeque<usize> = (0..labels.len())
        .filter(|&v| labels[v] != BAND && lattice.neighbors(v).any(|n| labels[n] == BAND))
        .collect();
    while let Some(u) = queue.pop_front() {
        let l = owner[u].expect("queued cells are owned");
        let index = index_of_label[l as usize];
        for n in lattice.neighbors(u) {
            if owner[n].is_none() && class[n] == Some(index) {
                owner[n] = Some(l);
                queue.push_back(n);
            }
        }
    }
    let unowned = owner.iter().filter(|o| o.is_none()).count();
    (owner, unowned)
}
