use super::{Graph, VertexSet};
use crate::error::{Error, Result};

/// Contraction of consecutive blocks of `R` vertices into single vertices.
///
/// Block `i` holds vertices `i*R .. (i+1)*R`. The auxiliary graph joins two
/// distinct blocks when at least one base edge runs between them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlowUpMap {
    group_size: usize,
    base_n: usize,
    auxiliary: Graph,
}

impl BlowUpMap {
    pub fn group_size(&self) -> usize {
        self.group_size
    }

    /// Number of blocks `n' = n / R`.
    pub fn blocks(&self) -> usize {
        self.base_n / self.group_size
    }

    pub fn auxiliary(&self) -> &Graph {
        &self.auxiliary
    }

    pub fn block_of(&self, v: usize) -> usize {
        v / self.group_size
    }

    pub fn block(&self, i: usize) -> std::ops::Range<usize> {
        i * self.group_size..(i + 1) * self.group_size
    }

    /// Returns `(S', S+)`: the blocks meeting `set`, and the union of those blocks.
    pub fn blow_up_set(&self, set: &[usize]) -> Result<(VertexSet, VertexSet)> {
        if let Some(&bad) = set.iter().find(|&&v| v >= self.base_n) {
            return Err(Error::invalid(format!("vertex {bad} outside the base graph")));
        }
        let mut blocks: Vec<usize> = set.iter().map(|&v| self.block_of(v)).collect();
        blocks.sort_unstable();
        blocks.dedup();
        let plus = blocks.iter().flat_map(|&i| self.block(i)).collect();
        Ok((blocks, plus))
    }
}

/// Builds the blow-up of `g` with blocks of size `group_size`.
///
/// Requires `group_size | n`, and `group_size > k` when `g` carries a ring tag
/// `k` (so that the auxiliary graph contains the `n'`-cycle and nothing more
/// from the ring).
pub fn blow_up(g: &Graph, group_size: usize) -> Result<BlowUpMap> {
    let n = g.n();
    if group_size == 0 || !n.is_multiple_of(group_size) {
        return Err(Error::invalid(format!("group size {group_size} does not divide n = {n}")));
    }
    if let Some(k) = g.ring_k() {
        if group_size <= k {
            return Err(Error::invalid(format!("group size {group_size} must exceed ring half-width k = {k}")));
        }
    }
    let blocks = n / group_size;
    let mut adjacency = vec![Vec::new(); blocks];
    for (u, v) in g.edges() {
        let (a, b) = (u / group_size, v / group_size);
        if a != b {
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
    }
    for list in &mut adjacency {
        list.sort_unstable();
        list.dedup();
    }
    let ring_k = match g.ring_k() {
        Some(_) if blocks > 2 => Some(1),
        _ => None,
    };
    Ok(BlowUpMap {
        group_size,
        base_n: n,
        auxiliary: Graph::from_sorted_adjacency(adjacency, ring_k),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_ring;

    #[test]
    fn ring_maps_to_cycle() {
        let map = blow_up(&build_ring(12, 1).unwrap(), 3).unwrap();
        assert_eq!(map.blocks(), 4);
        assert_eq!(map.auxiliary(), &build_ring(4, 1).unwrap());
    }

    #[test]
    fn wide_ring_maps_to_cycle() {
        let map = blow_up(&build_ring(40, 3).unwrap(), 4).unwrap();
        assert_eq!(map.auxiliary(), &build_ring(10, 1).unwrap());
    }

    #[test]
    fn complete_maps_to_complete() {
        let map = blow_up(&Graph::complete(6), 2).unwrap();
        assert_eq!(map.auxiliary(), &Graph::complete(3));
    }

    #[test]
    fn rejects_bad_group_sizes() {
        let g = build_ring(12, 2).unwrap();
        assert!(blow_up(&g, 5).is_err());
        assert!(blow_up(&g, 2).is_err());
        assert!(blow_up(&g, 0).is_err());
        assert!(blow_up(&g, 3).is_ok());
    }

    #[test]
    fn blow_up_sets() {
        let map = blow_up(&build_ring(12, 1).unwrap(), 3).unwrap();
        assert_eq!(map.blow_up_set(&[3, 4, 5]).unwrap(), (vec![1], vec![3, 4, 5]));
        assert_eq!(map.blow_up_set(&[]).unwrap(), (vec![], vec![]));
        let (blocks, plus) = map.blow_up_set(&[0, 4, 8, 11]).unwrap();
        assert_eq!(blocks, vec![0, 1, 2, 3]);
        assert_eq!(plus, (0..12).collect::<Vec<_>>());
        assert!(map.blow_up_set(&[12]).is_err());
    }
}
