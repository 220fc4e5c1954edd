//! Imprimitive groups, groups preserving a product decomposition, and almost
//! simple groups.

use super::{Branch, BranchResult, Candidate, Failure};
use crate::aut::oracle_two_closure;
use crate::error::{Error, Result};
use crate::perm::{
    is_simple_nonabelian, minimal_blocks, socle_primitive, BlockResult, BlockSystem, OrbitalStructure, Permutation,
    PermutationGroup,
};
use crate::Limits;

/// Closure of an imprimitive rank 3 group: the full wreath product on its blocks.
pub fn imprimitive_closure(group: &PermutationGroup, blocks: &BlockSystem) -> Result<PermutationGroup> {
    if blocks.is_trivial() {
        return Err(Error::TrivialBlocks);
    }
    let n = group.degree();
    let cells: Vec<Vec<usize>> = blocks
        .blocks
        .iter()
        .map(|b| {
            let mut b = b.clone();
            b.sort_unstable();
            b
        })
        .collect();
    let (b, k) = (blocks.block_size(), blocks.block_count());
    let mut gens = Vec::new();
    let first = &cells[0];
    gens.push(Permutation::from_cycles(n, &[first.clone()])?);
    if b > 2 {
        gens.push(Permutation::from_cycles(n, &[vec![first[0], first[1]]])?);
    }
    // move block i onto block i+1, aligned by sorted position
    let mut shift = vec![0; n];
    let mut swap: Vec<usize> = (0..n).collect();
    for (i, cell) in cells.iter().enumerate() {
        for (j, &x) in cell.iter().enumerate() {
            shift[x] = cells[(i + 1) % k][j];
            if i < 2 && k > 2 {
                swap[x] = cells[1 - i][j];
            }
        }
    }
    gens.push(Permutation::from_images(shift)?);
    if k > 2 {
        gens.push(Permutation::from_images(swap)?);
    }
    PermutationGroup::new(n, gens)
}

/// Coordinates of the points of a q x q rook's graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HammingLabelling {
    pub q: usize,
    pub label: Vec<(usize, usize)>,
}

/// Recognises the rook's graph H(2, q) given by its adjacency matrix.
///
/// Lines are the closed common neighbourhoods of edges; they must be cliques
/// of size q, two through every vertex, and split into two parallel classes.
pub fn recognize_h2(adjacent: &[Vec<bool>]) -> Option<HammingLabelling> {
    let n = adjacent.len();
    let q = (n as f64).sqrt().round() as usize;
    if q < 2 || q * q != n {
        return None;
    }
    if adjacent.iter().any(|row| row.iter().filter(|&&x| x).count() != 2 * (q - 1)) {
        return None;
    }
    let mut lines: Vec<Vec<usize>> = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if !adjacent[u][v] {
                continue;
            }
            let line: Vec<usize> =
                (0..n).filter(|&w| w == u || w == v || (adjacent[u][w] && adjacent[v][w])).collect();
            if line.len() != q {
                return None;
            }
            for (i, &x) in line.iter().enumerate() {
                if line[i + 1..].iter().any(|&y| !adjacent[x][y]) {
                    return None;
                }
            }
            if !lines.contains(&line) {
                lines.push(line);
            }
        }
    }
    if lines.len() != 2 * q {
        return None;
    }
    let mut on: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (li, line) in lines.iter().enumerate() {
        for &x in line {
            on[x].push(li);
        }
    }
    if on.iter().any(|l| l.len() != 2) {
        return None;
    }
    // 2-colour the lines: lines through a common point get different colours
    let mut color = vec![u8::MAX; lines.len()];
    for start in 0..lines.len() {
        if color[start] != u8::MAX {
            continue;
        }
        color[start] = 0;
        let mut stack = vec![start];
        while let Some(l) = stack.pop() {
            for &x in &lines[l] {
                for &m in &on[x] {
                    if m == l {
                        continue;
                    }
                    if color[m] == u8::MAX {
                        color[m] = 1 - color[l];
                        stack.push(m);
                    } else if color[m] == color[l] {
                        return None;
                    }
                }
            }
        }
    }
    let index_in_class = |li: usize| lines[..li].iter().enumerate().filter(|(j, _)| color[*j] == color[li]).count();
    let label: Vec<(usize, usize)> = (0..n)
        .map(|x| {
            let (a, b) = (on[x][0], on[x][1]);
            let (r, c) = if color[a] == 0 { (a, b) } else { (b, a) };
            (index_in_class(r), index_in_class(c))
        })
        .collect();
    let mut seen = vec![false; n];
    for &(r, c) in &label {
        if r >= q || c >= q || std::mem::replace(&mut seen[r * q + c], true) {
            return None;
        }
    }
    for u in 0..n {
        for v in 0..n {
            let share = (label[u].0 == label[v].0) as u8 + (label[u].1 == label[v].1) as u8;
            if adjacent[u][v] != (share == 1) {
                return None;
            }
        }
    }
    Some(HammingLabelling { q, label })
}

/// `Sym(q) ↑ Sym(2)` in the coordinates of the labelling.
pub fn product_closure(labelling: &HammingLabelling) -> Result<PermutationGroup> {
    let q = labelling.q;
    let n = q * q;
    let mut point = vec![0; n];
    for (x, &(r, c)) in labelling.label.iter().enumerate() {
        point[r * q + c] = x;
    }
    let lift = |f: &dyn Fn(usize, usize) -> (usize, usize)| -> Result<Permutation> {
        let images = labelling
            .label
            .iter()
            .map(|&(r, c)| {
                let (r2, c2) = f(r, c);
                point[r2 * q + c2]
            })
            .collect();
        Permutation::from_images(images)
    };
    let mut gens = vec![lift(&|r, c| ((r + 1) % q, c))?, lift(&|r, c| (c, r))?];
    if q > 2 {
        gens.push(lift(&|r, c| (if r < 2 { 1 - r } else { r }, c))?);
    }
    PermutationGroup::new(n, gens)
}

/// The oracle's answer when the socle is nonabelian simple, `None` otherwise.
pub fn almost_simple_closure(group: &PermutationGroup, limits: &Limits) -> Result<Option<PermutationGroup>> {
    let socle = socle_primitive(group, limits)?;
    if !is_simple_nonabelian(&socle, limits)? {
        return Ok(None);
    }
    oracle_two_closure(group, limits).map(Some)
}

/// Adjacency of the smallest nondiagonal colour, or `None` if the two colours are paired.
fn smallest_graph(orbitals: &OrbitalStructure) -> Option<Vec<Vec<bool>>> {
    let colors = orbitals.nondiagonal_colors();
    if colors.iter().any(|&c| !orbitals.is_self_paired(c)) {
        return None;
    }
    let c = *colors.iter().min_by_key(|&&c| (orbitals.subdegree_of(c), c))?;
    let n = orbitals.degree();
    Some((0..n).map(|i| (0..n).map(|j| orbitals.color(i, j) == c).collect()).collect())
}

fn fail(reason: impl Into<String>) -> Failure {
    Failure::new(Branch::Nonaffine, reason)
}

/// The nonaffine cascade: imprimitive, then product action, then almost simple.
pub fn run_nonaffine(group: &PermutationGroup, orbitals: &OrbitalStructure, limits: &Limits) -> BranchResult {
    let blocks = minimal_blocks(group).map_err(|e| fail(e.to_string()))?;
    if let BlockResult::Blocks(b) = blocks {
        let h = imprimitive_closure(group, &b).map_err(|e| fail(e.to_string()))?;
        return Ok(Candidate { branch: Branch::Imprimitive, group: h, structural: true });
    }
    if let Some((s, l)) = orbitals.rank3_subdegrees() {
        // The rook's graph case presumes distinct subdegrees, which fails only for q = 3.
        if s != l {
            if let Some(lab) = smallest_graph(orbitals).as_deref().and_then(recognize_h2) {
                let h = product_closure(&lab).map_err(|e| fail(e.to_string()))?;
                return Ok(Candidate { branch: Branch::Product, group: h, structural: true });
            }
        }
    }
    match almost_simple_closure(group, limits) {
        Ok(Some(h)) => Ok(Candidate { branch: Branch::AlmostSimple, group: h, structural: true }),
        Ok(None) => Err(fail("socle is not nonabelian simple (affine group)")),
        Err(e) => Err(fail(e.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::two_orbits;
    use crate::zoo::{self, Base};

    fn rook(q: usize) -> Vec<Vec<bool>> {
        (0..q * q)
            .map(|u| (0..q * q).map(|v| u != v && (u / q == v / q || u % q == v % q)).collect())
            .collect()
    }

    #[test]
    fn rook_graphs_are_recognised() {
        for q in [3, 4, 5] {
            let lab = recognize_h2(&rook(q)).unwrap();
            assert_eq!(lab.q, q);
            let order = product_closure(&lab).unwrap().order().clone();
            let f: u64 = (1..=q as u64).product();
            assert_eq!(order, (f * f * 2).into());
        }
    }

    #[test]
    fn shrikhande_is_rejected() {
        // Cayley graph on Z4 x Z4 with connection set ±(1,0), ±(0,1), ±(1,1)
        let adj: Vec<Vec<bool>> = (0..16)
            .map(|u: usize| {
                (0..16)
                    .map(|v: usize| {
                        let (dx, dy) = ((v / 4 + 4 - u / 4) % 4, (v % 4 + 4 - u % 4) % 4);
                        matches!((dx, dy), (1, 0) | (3, 0) | (0, 1) | (0, 3) | (1, 1) | (3, 3))
                    })
                    .collect()
            })
            .collect();
        assert!(recognize_h2(&adj).is_none());
        let petersen = zoo::johnson_pairs(5).unwrap().group;
        let o = two_orbits(&petersen).unwrap();
        assert!(recognize_h2(&smallest_graph(&o).unwrap()).is_none());
    }

    #[test]
    fn cascade() {
        let l = Limits::default();
        let g = zoo::imprimitive(Base::Sym(2), 2).unwrap().group;
        let c = run_nonaffine(&g, &two_orbits(&g).unwrap(), &l).unwrap();
        assert_eq!((c.branch, c.group.order_u64()), (Branch::Imprimitive, Some(8)));
        let g = zoo::product(Base::Agl15).unwrap().group;
        let c = run_nonaffine(&g, &two_orbits(&g).unwrap(), &l).unwrap();
        assert_eq!((c.branch, c.group.order_u64()), (Branch::Product, Some(28800)));
        let g = zoo::johnson_pairs(5).unwrap().group;
        let c = run_nonaffine(&g, &two_orbits(&g).unwrap(), &l).unwrap();
        assert_eq!((c.branch, c.group.order_u64()), (Branch::AlmostSimple, Some(120)));
        let g = zoo::paley(13).unwrap().group;
        assert!(run_nonaffine(&g, &two_orbits(&g).unwrap(), &l).is_err());
    }
}
