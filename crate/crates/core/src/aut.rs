//! Colour refinement of pair-coloured structures and automorphism search by
//! individualisation-refinement.
//!
//! The automorphism group of the 2-orbit colouring of a group is its
//! 2-closure, so [`oracle_two_closure`] is the brute-force reference every
//! branch algorithm is checked against.

use std::collections::VecDeque;
use std::hash::{Hash, Hasher};

use crate::error::{Error, Result};
use crate::perm::{OrbitalStructure, Permutation, PermutationGroup};
use crate::Limits;

/// A colouring of ordered pairs together with the induced vertex colouring.
#[derive(Debug, Clone)]
pub struct ColoredConfiguration {
    pairs: OrbitalStructure,
    vertex_colors: Vec<u32>,
}

impl ColoredConfiguration {
    pub fn new(pairs: OrbitalStructure) -> Self {
        let vertex_colors = (0..pairs.degree()).map(|i| pairs.color(i, i)).collect();
        ColoredConfiguration { pairs, vertex_colors }
    }

    pub fn of_group(group: &PermutationGroup, limits: &Limits) -> Result<Self> {
        Ok(Self::new(OrbitalStructure::of_group(group, limits.pair_table_cap)?))
    }

    pub fn degree(&self) -> usize {
        self.pairs.degree()
    }

    pub fn pairs(&self) -> &OrbitalStructure {
        &self.pairs
    }

    pub fn vertex_colors(&self) -> &[u32] {
        &self.vertex_colors
    }

    /// The partition of points by vertex colour, cells ordered by colour.
    pub fn initial_partition(&self) -> OrderedPartition {
        let k = self.vertex_colors.iter().copied().max().map_or(0, |m| m as usize + 1);
        let mut cells = vec![Vec::new(); k];
        for (v, &c) in self.vertex_colors.iter().enumerate() {
            cells[c as usize].push(v);
        }
        OrderedPartition::from_cells(self.degree(), cells.into_iter().filter(|c| !c.is_empty()).collect())
    }
}

/// Cells of points with a fixed order; refinement only splits cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderedPartition {
    cells: Vec<Vec<usize>>,
    cell_of: Vec<u32>,
}

impl OrderedPartition {
    pub fn from_cells(n: usize, cells: Vec<Vec<usize>>) -> Self {
        let mut cell_of = vec![u32::MAX; n];
        for (i, c) in cells.iter().enumerate() {
            for &v in c {
                cell_of[v] = i as u32;
            }
        }
        assert!(cell_of.iter().all(|&c| c != u32::MAX), "cells must cover the domain");
        OrderedPartition { cells, cell_of }
    }

    pub fn unit(n: usize) -> Self {
        Self::from_cells(n, vec![(0..n).collect()])
    }

    pub fn discrete(n: usize) -> Self {
        Self::from_cells(n, (0..n).map(|v| vec![v]).collect())
    }

    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }

    pub fn cell_of(&self, v: usize) -> usize {
        self.cell_of[v] as usize
    }

    pub fn is_discrete(&self) -> bool {
        self.cells.len() == self.cell_of.len()
    }

    /// Cells as sorted sets, sorted; forgets the order.
    pub fn as_sets(&self) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = self
            .cells
            .iter()
            .map(|c| {
                let mut c = c.clone();
                c.sort_unstable();
                c
            })
            .collect();
        out.sort();
        out
    }

    /// First smallest cell with more than one point.
    fn target_cell(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for (i, c) in self.cells.iter().enumerate() {
            if c.len() > 1 && best.map_or(true, |b| c.len() < self.cells[b].len()) {
                best = Some(i);
            }
        }
        best
    }

    /// Splits `v` off its cell into a new singleton cell at the end.
    fn individualize(&mut self, v: usize) -> usize {
        let c = self.cell_of(v);
        self.cells[c].retain(|&x| x != v);
        self.cells.push(vec![v]);
        let idx = self.cells.len() - 1;
        self.cell_of[v] = idx as u32;
        idx
    }
}

/// Refines `p` in place using the splitter queue; returns a hash of the refinement trace.
fn refine_in_place(config: &ColoredConfiguration, p: &mut OrderedPartition, queue: Vec<usize>) -> u64 {
    let n = config.degree();
    let k = config.pairs.rank();
    let table = config.pairs.table();
    let mut hasher = std::collections::hash_map::DefaultHasher::new();
    let mut queue: VecDeque<usize> = queue.into();
    let mut queued = vec![false; n.max(1)];
    for &s in &queue {
        queued[s] = true;
    }
    let mut counts = vec![0u32; n * k];
    while let Some(s) = queue.pop_front() {
        queued[s] = false;
        counts.iter_mut().for_each(|c| *c = 0);
        for &w in &p.cells[s] {
            for v in 0..n {
                counts[v * k + table[v * n + w] as usize] += 1;
            }
        }
        s.hash(&mut hasher);
        let cell_count = p.cells.len();
        for ci in 0..cell_count {
            if p.cells[ci].len() < 2 {
                continue;
            }
            let first = &counts[p.cells[ci][0] * k..p.cells[ci][0] * k + k];
            if p.cells[ci].iter().all(|&v| &counts[v * k..v * k + k] == first) {
                continue;
            }
            let mut members = std::mem::take(&mut p.cells[ci]);
            members.sort_by(|&a, &b| counts[a * k..a * k + k].cmp(&counts[b * k..b * k + k]));
            let mut groups: Vec<Vec<usize>> = Vec::new();
            for v in members {
                match groups.last_mut() {
                    Some(g) if counts[g[0] * k..g[0] * k + k] == counts[v * k..v * k + k] => g.push(v),
                    _ => groups.push(vec![v]),
                }
            }
            (ci, groups.len()).hash(&mut hasher);
            for g in &groups {
                (g.len(), &counts[g[0] * k..g[0] * k + k]).hash(&mut hasher);
            }
            let mut iter = groups.into_iter();
            p.cells[ci] = iter.next().unwrap();
            if !queued[ci] {
                queued[ci] = true;
                queue.push_back(ci);
            }
            for g in iter {
                let idx = p.cells.len();
                for &v in &g {
                    p.cell_of[v] = idx as u32;
                }
                p.cells.push(g);
                queued[idx] = true;
                queue.push_back(idx);
            }
        }
    }
    p.cells.len().hash(&mut hasher);
    hasher.finish()
}

/// Coarsest equitable refinement of `partition` with respect to all pair colours.
pub fn refine(config: &ColoredConfiguration, partition: &OrderedPartition) -> OrderedPartition {
    let mut p = partition.clone();
    let queue = (0..p.cells.len()).collect();
    refine_in_place(config, &mut p, queue);
    p
}

struct PathNode {
    partition: OrderedPartition,
    target: usize,
    chosen: usize,
    child_trace: u64,
}

struct Search<'a> {
    config: &'a ColoredConfiguration,
    path: Vec<PathNode>,
    first_leaf: Vec<usize>,
}

impl Search<'_> {
    fn child(&self, node: &OrderedPartition, v: usize) -> (OrderedPartition, u64) {
        let mut p = node.clone();
        let idx = p.individualize(v);
        let trace = refine_in_place(self.config, &mut p, vec![idx]);
        (p, trace)
    }

    fn leaf_permutation(&self, leaf: &OrderedPartition) -> Permutation {
        let mut images = vec![0u32; self.first_leaf.len()];
        for (i, &v) in self.first_leaf.iter().enumerate() {
            images[v] = leaf.cells[i][0] as u32;
        }
        Permutation::from_images_unchecked(images)
    }

    /// Looks for one leaf below `p` (at depth `depth`) giving an automorphism.
    fn find_automorphism(&self, p: &OrderedPartition, depth: usize) -> Option<Permutation> {
        if p.is_discrete() {
            let g = self.leaf_permutation(p);
            return self.config.pairs.preserves(&g).then_some(g);
        }
        let node = self.path.get(depth)?;
        let target = node.target;
        if p.cells.len() != node.partition.cells.len() || p.cells[target].len() != node.partition.cells[target].len()
        {
            return None;
        }
        let mut candidates = p.cells[target].clone();
        candidates.sort_unstable();
        for u in candidates {
            let (child, trace) = self.child(p, u);
            if trace != node.child_trace {
                continue;
            }
            if let Some(g) = self.find_automorphism(&child, depth + 1) {
                return Some(g);
            }
        }
        None
    }
}

fn find_root(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Generators of the group of permutations preserving every pair colour.
pub fn automorphism_group(config: &ColoredConfiguration, limits: &Limits) -> Result<PermutationGroup> {
    let n = config.degree();
    if n > limits.oracle_cap {
        return Err(Error::DegreeCap { what: "the automorphism search", degree: n, cap: limits.oracle_cap });
    }
    let root = refine(config, &config.initial_partition());
    let mut search = Search { config, path: Vec::new(), first_leaf: Vec::new() };
    let mut node = root;
    while let Some(target) = node.target_cell() {
        let chosen = *node.cells[target].iter().min().unwrap();
        let (child, trace) = search.child(&node, chosen);
        search.path.push(PathNode { partition: node, target, chosen, child_trace: trace });
        node = child;
    }
    search.first_leaf = node.cells.iter().map(|c| c[0]).collect();

    let mut gens: Vec<Permutation> = Vec::new();
    for k in (0..search.path.len()).rev() {
        let mut parent: Vec<usize> = (0..n).collect();
        for g in &gens {
            for x in 0..n {
                let (a, b) = (find_root(&mut parent, x), find_root(&mut parent, g.image(x)));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        let node = &search.path[k];
        let chosen = node.chosen;
        let mut cell = node.partition.cells[node.target].clone();
        cell.sort_unstable();
        let mut failed_roots: Vec<usize> = Vec::new();
        let mut found_here = Vec::new();
        for w in cell {
            if w == chosen {
                continue;
            }
            let rw = find_root(&mut parent, w);
            if rw == find_root(&mut parent, chosen) || failed_roots.contains(&rw) {
                continue;
            }
            let (child, trace) = search.child(&search.path[k].partition, w);
            let found = if trace == search.path[k].child_trace { search.find_automorphism(&child, k + 1) } else { None };
            match found {
                Some(g) => {
                    for x in 0..n {
                        let (a, b) = (find_root(&mut parent, x), find_root(&mut parent, g.image(x)));
                        if a != b {
                            parent[a.max(b)] = a.min(b);
                        }
                    }
                    failed_roots = failed_roots.into_iter().map(|r| find_root(&mut parent, r)).collect();
                    found_here.push(g);
                }
                None => failed_roots.push(rw),
            }
        }
        gens.extend(found_here);
    }
    debug_assert!(gens.iter().all(|g| config.pairs.preserves(g)));
    Ok(PermutationGroup::generated_greedily(n, gens))
}

/// The 2-closure of `group` as the automorphism group of its 2-orbit colouring.
pub fn oracle_two_closure(group: &PermutationGroup, limits: &Limits) -> Result<PermutationGroup> {
    if group.degree() > limits.oracle_cap {
        return Err(Error::DegreeCap {
            what: "the automorphism search",
            degree: group.degree(),
            cap: limits.oracle_cap,
        });
    }
    let config = ColoredConfiguration::of_group(group, limits)?;
    automorphism_group(&config, limits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo;

    #[test]
    fn petersen_refinement_after_individualising_zero() {
        let g = zoo::johnson_pairs(5).unwrap().group;
        let config = ColoredConfiguration::of_group(&g, &Limits::default()).unwrap();
        let unit = refine(&config, &config.initial_partition());
        assert_eq!(unit.cells().len(), 1);
        let mut p = unit.clone();
        p.individualize(0);
        let r = refine(&config, &p);
        let mut sizes: Vec<usize> = r.cells().iter().map(|c| c.len()).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 3, 6]);
        let nbrs = config.pairs().neighbours_of_zero(config.pairs().color(0, r.cells()[r.cell_of(1)][0]));
        assert!(nbrs.len() == 3 || nbrs.len() == 6);
    }

    #[test]
    fn discrete_partition_is_fixed() {
        let g = zoo::johnson_pairs(5).unwrap().group;
        let config = ColoredConfiguration::of_group(&g, &Limits::default()).unwrap();
        let d = OrderedPartition::discrete(10);
        assert_eq!(refine(&config, &d), d);
    }

    #[test]
    fn petersen_closure_is_s5() {
        let g = zoo::johnson_pairs(5).unwrap().group;
        let cl = oracle_two_closure(&g, &Limits::default()).unwrap();
        assert_eq!(cl.order_u64(), Some(120));
        assert!(g.is_subgroup_of(&cl));
    }

    #[test]
    fn complete_configuration_gives_symmetric_group() {
        let s5 = PermutationGroup::from_image_lists(5, vec![vec![1, 2, 3, 4, 0], vec![1, 0, 2, 3, 4]]).unwrap();
        let c5 = PermutationGroup::from_image_lists(5, vec![vec![1, 2, 3, 4, 0]]).unwrap();
        assert_eq!(oracle_two_closure(&s5, &Limits::default()).unwrap().order_u64(), Some(120));
        // C5 has rank 5; its closure is itself.
        assert_eq!(oracle_two_closure(&c5, &Limits::default()).unwrap().order_u64(), Some(5));
    }

    #[test]
    fn oracle_cap() {
        let g = zoo::johnson_pairs(5).unwrap().group;
        let limits = Limits { oracle_cap: 8, ..Limits::default() };
        assert!(oracle_two_closure(&g, &limits).is_err());
    }
}
