use super::{Permutation, PermutationGroup};
use crate::error::{Error, Result};

/// The colouring of ordered pairs by the 2-orbits of a group.
///
/// Colours are numbered in order of first appearance when pairs are scanned
/// lexicographically, so the table is a deterministic function of the group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitalStructure {
    degree: usize,
    colors: Vec<u32>,
    sizes: Vec<usize>,
    diagonal: Vec<bool>,
    paired: Vec<u32>,
}

impl OrbitalStructure {
    /// Orbits of `group` on ordered pairs, found by flood fill along generators.
    pub fn of_group(group: &PermutationGroup, pair_table_cap: usize) -> Result<Self> {
        let n = group.degree();
        if n > pair_table_cap {
            return Err(Error::DegreeCap { what: "the pair-colour table", degree: n, cap: pair_table_cap });
        }
        const UNSET: u32 = u32::MAX;
        let mut colors = vec![UNSET; n * n];
        let mut sizes = Vec::new();
        let mut stack = Vec::new();
        for start in 0..n * n {
            if colors[start] != UNSET {
                continue;
            }
            let c = sizes.len() as u32;
            colors[start] = c;
            stack.push(start);
            let mut size = 0;
            while let Some(pair) = stack.pop() {
                size += 1;
                let (i, j) = (pair / n, pair % n);
                for g in group.generators() {
                    let img = g.image(i) * n + g.image(j);
                    if colors[img] == UNSET {
                        colors[img] = c;
                        stack.push(img);
                    }
                }
            }
            sizes.push(size);
        }
        Ok(Self::from_table(n, colors))
    }

    /// Wraps an arbitrary colour table (`colors[i * n + j]`), renumbering colours canonically.
    pub fn from_table(n: usize, raw: Vec<u32>) -> Self {
        assert_eq!(raw.len(), n * n);
        let mut remap = std::collections::HashMap::new();
        let colors: Vec<u32> = raw
            .iter()
            .map(|c| {
                let next = remap.len() as u32;
                *remap.entry(*c).or_insert(next)
            })
            .collect();
        let k = remap.len();
        let mut sizes = vec![0; k];
        let mut diagonal = vec![false; k];
        let mut paired = vec![u32::MAX; k];
        for i in 0..n {
            for j in 0..n {
                let c = colors[i * n + j] as usize;
                sizes[c] += 1;
                if i == j {
                    diagonal[c] = true;
                }
                paired[c] = colors[j * n + i];
            }
        }
        OrbitalStructure { degree: n, colors, sizes, diagonal, paired }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    #[inline]
    pub fn color(&self, i: usize, j: usize) -> u32 {
        self.colors[i * self.degree + j]
    }

    pub fn table(&self) -> &[u32] {
        &self.colors
    }

    pub fn rank(&self) -> usize {
        self.sizes.len()
    }

    pub fn color_size(&self, c: u32) -> usize {
        self.sizes[c as usize]
    }

    pub fn is_diagonal(&self, c: u32) -> bool {
        self.diagonal[c as usize]
    }

    pub fn diagonal_colors(&self) -> Vec<u32> {
        (0..self.rank() as u32).filter(|&c| self.is_diagonal(c)).collect()
    }

    pub fn nondiagonal_colors(&self) -> Vec<u32> {
        (0..self.rank() as u32).filter(|&c| !self.is_diagonal(c)).collect()
    }

    /// Colour of the reversed pairs.
    pub fn paired_color(&self, c: u32) -> u32 {
        self.paired[c as usize]
    }

    pub fn is_self_paired(&self, c: u32) -> bool {
        self.paired[c as usize] == c
    }

    /// Number of `j` with `color(0, j) = c`.
    pub fn subdegree_of(&self, c: u32) -> usize {
        (0..self.degree).filter(|&j| self.color(0, j) == c).count()
    }

    /// Nondiagonal suborbit lengths at point 0, sorted ascending.
    pub fn subdegrees(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .nondiagonal_colors()
            .into_iter()
            .map(|c| self.subdegree_of(c))
            .filter(|&s| s > 0)
            .collect();
        out.sort_unstable();
        out
    }

    /// `(smaller, larger)` subdegrees when the structure has rank 3 and one diagonal colour.
    pub fn rank3_subdegrees(&self) -> Option<(usize, usize)> {
        if self.rank() != 3 || self.diagonal_colors().len() != 1 {
            return None;
        }
        let s = self.subdegrees();
        (s.len() == 2).then(|| (s[0], s[1]))
    }

    pub fn is_rank3(&self) -> bool {
        self.rank3_subdegrees().is_some()
    }

    /// True iff `g` maps every colour class into itself.
    pub fn preserves(&self, g: &Permutation) -> bool {
        let n = self.degree;
        if g.degree() != n {
            return false;
        }
        let img = g.images();
        for i in 0..n {
            let gi = img[i] as usize * n;
            let row = &self.colors[i * n..(i + 1) * n];
            for j in 0..n {
                if self.colors[gi + img[j] as usize] != row[j] {
                    return false;
                }
            }
        }
        true
    }

    /// Points `j` with `color(0, j) = c`.
    pub fn neighbours_of_zero(&self, c: u32) -> Vec<usize> {
        (0..self.degree).filter(|&j| self.color(0, j) == c).collect()
    }

    /// True if every colour class of `self` is a union of colour classes of `finer`.
    pub fn is_coarsening_of(&self, finer: &OrbitalStructure) -> bool {
        let mut map = vec![u32::MAX; finer.rank()];
        for (a, b) in finer.colors.iter().zip(&self.colors) {
            let slot = &mut map[*a as usize];
            if *slot == u32::MAX {
                *slot = *b;
            } else if *slot != *b {
                return false;
            }
        }
        true
    }
}

/// Orbital structure of `group` with the default pair-table cap.
pub fn two_orbits(group: &PermutationGroup) -> Result<OrbitalStructure> {
    OrbitalStructure::of_group(group, crate::Limits::default().pair_table_cap)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s5() -> PermutationGroup {
        PermutationGroup::from_image_lists(5, vec![vec![1, 2, 3, 4, 0], vec![1, 0, 2, 3, 4]]).unwrap()
    }

    #[test]
    fn two_transitive_has_rank_two() {
        let o = two_orbits(&s5()).unwrap();
        assert_eq!(o.rank(), 2);
        assert!(!o.is_rank3());
    }

    #[test]
    fn cyclic_four_has_rank_four() {
        let g = PermutationGroup::from_image_lists(4, vec![vec![1, 2, 3, 0]]).unwrap();
        let o = two_orbits(&g).unwrap();
        assert_eq!(o.rank(), 4);
        assert!(o.is_self_paired(o.color(0, 2)));
        assert!(!o.is_self_paired(o.color(0, 1)));
    }

    #[test]
    fn generators_preserve_their_orbitals() {
        let g = s5();
        let o = two_orbits(&g).unwrap();
        for x in g.generators() {
            assert!(o.preserves(x));
        }
        assert!(o.preserves(&Permutation::identity(5)));
    }

    #[test]
    fn degree_cap_is_enforced() {
        assert!(OrbitalStructure::of_group(&s5(), 4).is_err());
    }
}
