use super::PermutationGroup;
use crate::error::{Error, Result};

/// A partition of the domain into equal-size cells permuted by a group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockSystem {
    /// Cells sorted internally and ordered by smallest element.
    pub blocks: Vec<Vec<usize>>,
}

impl BlockSystem {
    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn block_size(&self) -> usize {
        self.blocks.first().map_or(0, |b| b.len())
    }

    pub fn degree(&self) -> usize {
        self.blocks.iter().map(|b| b.len()).sum()
    }

    pub fn is_trivial(&self) -> bool {
        self.block_size() <= 1 || self.block_count() <= 1
    }

    /// Cell index of every point.
    pub fn block_index(&self) -> Vec<usize> {
        let mut idx = vec![0; self.degree()];
        for (i, b) in self.blocks.iter().enumerate() {
            for &x in b {
                idx[x] = i;
            }
        }
        idx
    }

    /// True if every generator maps cells onto cells.
    pub fn is_invariant_under(&self, group: &PermutationGroup) -> bool {
        let idx = self.block_index();
        group.generators().iter().all(|g| {
            self.blocks.iter().all(|b| {
                let target = idx[g.image(b[0])];
                b.iter().all(|&x| idx[g.image(x)] == target)
            })
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BlockResult {
    Blocks(BlockSystem),
    Primitive,
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Finest block system in which `0` and `beta` share a cell (Atkinson's merge procedure).
pub fn finest_blocks_joining(group: &PermutationGroup, beta: usize) -> BlockSystem {
    let n = group.degree();
    let mut parent: Vec<usize> = (0..n).collect();
    let mut queue = vec![(0usize, beta)];
    while let Some((a, b)) = queue.pop() {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra == rb {
            continue;
        }
        let (keep, drop) = if ra < rb { (ra, rb) } else { (rb, ra) };
        parent[drop] = keep;
        for g in group.generators() {
            queue.push((g.image(a), g.image(b)));
        }
    }
    let mut cells: Vec<Vec<usize>> = vec![Vec::new(); n];
    for x in 0..n {
        let r = find(&mut parent, x);
        cells[r].push(x);
    }
    let mut blocks: Vec<Vec<usize>> = cells.into_iter().filter(|c| !c.is_empty()).collect();
    blocks.sort();
    BlockSystem { blocks }
}

/// A minimal nontrivial block system, or `Primitive`.
///
/// Every block system containing `{0, beta}` in one cell refines to the finest
/// one, so the smallest proper finest system over all `beta` is minimal.
pub fn minimal_blocks(group: &PermutationGroup) -> Result<BlockResult> {
    if !group.is_transitive() {
        return Err(Error::Intransitive);
    }
    let n = group.degree();
    let mut best: Option<BlockSystem> = None;
    for beta in 1..n {
        let sys = finest_blocks_joining(group, beta);
        if sys.block_size() < n && best.as_ref().map_or(true, |b| sys.block_size() < b.block_size()) {
            best = Some(sys);
        }
    }
    Ok(best.map_or(BlockResult::Primitive, BlockResult::Blocks))
}

pub fn is_primitive(group: &PermutationGroup) -> Result<bool> {
    Ok(matches!(minimal_blocks(group)?, BlockResult::Primitive))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Permutation;

    fn group(n: usize, gens: &[&[&[usize]]]) -> PermutationGroup {
        let gens = gens
            .iter()
            .map(|c| Permutation::from_cycles(n, &c.iter().map(|x| x.to_vec()).collect::<Vec<_>>()).unwrap())
            .collect();
        PermutationGroup::new(n, gens).unwrap()
    }

    /// Brute-force list of all block systems of a group on few points.
    fn all_block_systems(g: &PermutationGroup) -> Vec<Vec<Vec<usize>>> {
        fn partitions(n: usize) -> Vec<Vec<usize>> {
            // restricted growth strings
            let mut out = Vec::new();
            let mut cur = vec![0usize; n];
            fn rec(i: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
                if i == cur.len() {
                    out.push(cur.clone());
                    return;
                }
                for v in 0..=max + 1 {
                    cur[i] = v;
                    rec(i + 1, max.max(v), cur, out);
                }
            }
            if n > 0 {
                rec(1, 0, &mut cur, &mut out);
            }
            out
        }
        let n = g.degree();
        let mut out = Vec::new();
        for labels in partitions(n) {
            let k = labels.iter().max().unwrap() + 1;
            let mut cells = vec![Vec::new(); k];
            for (x, &l) in labels.iter().enumerate() {
                cells[l].push(x);
            }
            let sizes_equal = cells.iter().all(|c| c.len() == cells[0].len());
            let sys = BlockSystem { blocks: cells.clone() };
            if sizes_equal && sys.is_invariant_under(g) && !sys.is_trivial() {
                out.push(cells);
            }
        }
        out
    }

    #[test]
    fn cyclic_four_has_pairs() {
        let g = group(4, &[&[&[0, 1, 2, 3]]]);
        let BlockResult::Blocks(b) = minimal_blocks(&g).unwrap() else { panic!() };
        assert_eq!(b.blocks, vec![vec![0, 2], vec![1, 3]]);
        assert_eq!(all_block_systems(&g), vec![vec![vec![0, 2], vec![1, 3]]]);
    }

    #[test]
    fn symmetric_group_is_primitive() {
        let g = group(5, &[&[&[0, 1, 2, 3, 4]], &[&[0, 1]]]);
        assert_eq!(minimal_blocks(&g).unwrap(), BlockResult::Primitive);
        assert!(all_block_systems(&g).is_empty());
    }

    #[test]
    fn wreath_type_blocks_of_five() {
        // AGL(1,5) on each of three blocks of five, blocks permuted by S3.
        let mut gens = Vec::new();
        let shift: Vec<usize> = (0..15).map(|x| if x < 5 { (x + 1) % 5 } else { x }).collect();
        let mult: Vec<usize> = (0..15).map(|x| if x < 5 { (2 * x) % 5 } else { x }).collect();
        let swap: Vec<usize> = (0..15).map(|x| if x < 10 { (x + 5) % 10 } else { x }).collect();
        let cyc: Vec<usize> = (0..15).map(|x| (x + 5) % 15).collect();
        for v in [shift, mult, swap, cyc] {
            gens.push(Permutation::from_images(v).unwrap());
        }
        let g = PermutationGroup::new(15, gens).unwrap();
        let BlockResult::Blocks(b) = minimal_blocks(&g).unwrap() else { panic!() };
        assert_eq!(b.block_size(), 5);
        assert!(b.is_invariant_under(&g));
    }

    #[test]
    fn intransitive_input_is_rejected() {
        let g = group(4, &[&[&[0, 1]]]);
        assert_eq!(minimal_blocks(&g), Err(Error::Intransitive));
    }
}
