use std::collections::HashSet;

use num_bigint::BigUint;

use super::Permutation;

#[derive(Clone, Debug)]
pub(crate) struct Level {
    pub base: usize,
    /// Indices into `StabChain::strong` of the generators fixing all earlier base points.
    pub gens: Vec<usize>,
    pub orbit: Vec<usize>,
    pub transversal: Vec<Option<Permutation>>,
    pub inverse: Vec<Option<Permutation>>,
    /// Schreier generators (orbit point, generator) already known to sift to the identity.
    checked: HashSet<(u32, u32)>,
}

impl Level {
    fn new(n: usize, base: usize) -> Self {
        let mut transversal = vec![None; n];
        let mut inverse = vec![None; n];
        transversal[base] = Some(Permutation::identity(n));
        inverse[base] = Some(Permutation::identity(n));
        Level { base, gens: Vec::new(), orbit: vec![base], transversal, inverse, checked: HashSet::new() }
    }
}

/// Base and strong generating set built with a deterministic Schreier-Sims procedure.
///
/// Base points are the prescribed prefix followed by the smallest point moved
/// by each generator that fixes all previous base points. Transversal entries
/// are never replaced once set, so verified Schreier generators stay verified
/// when the chain grows.
#[derive(Clone, Debug)]
pub(crate) struct StabChain {
    pub n: usize,
    pub strong: Vec<Permutation>,
    pub levels: Vec<Level>,
}

impl StabChain {
    pub fn new(n: usize, gens: &[Permutation], base_prefix: &[usize]) -> Self {
        let mut chain = StabChain { n, strong: Vec::new(), levels: Vec::new() };
        for &b in base_prefix {
            if chain.levels.iter().all(|l| l.base != b) {
                chain.levels.push(Level::new(n, b));
            }
        }
        for g in gens {
            if g.is_identity() {
                continue;
            }
            chain.push_strong(g.clone());
        }
        chain.complete(chain.levels.len());
        chain
    }

    /// Registers `g` as a strong generator on every level whose earlier base points it fixes,
    /// appending a base point if `g` fixes the whole base.
    fn push_strong(&mut self, g: Permutation) -> usize {
        let idx = self.strong.len();
        let mut depth = 0;
        while depth < self.levels.len() && g.image(self.levels[depth].base) == self.levels[depth].base {
            depth += 1;
        }
        if depth == self.levels.len() {
            let b = g.first_moved().expect("identity is never a strong generator");
            self.levels.push(Level::new(self.n, b));
        }
        self.strong.push(g);
        for l in 0..=depth {
            self.levels[l].gens.push(idx);
            self.extend_orbit(l, idx);
        }
        idx
    }

    fn extend_orbit(&mut self, l: usize, new_gen: usize) {
        let level = &mut self.levels[l];
        let strong = &self.strong;
        let mut queue: Vec<usize> = Vec::new();
        let start_len = level.orbit.len();
        for k in 0..start_len {
            let beta = level.orbit[k];
            let gamma = strong[new_gen].image(beta);
            if level.transversal[gamma].is_none() {
                let u = level.transversal[beta].as_ref().unwrap().then(&strong[new_gen]);
                level.inverse[gamma] = Some(u.inverse());
                level.transversal[gamma] = Some(u);
                level.orbit.push(gamma);
                queue.push(gamma);
            }
        }
        while let Some(beta) = queue.pop() {
            for &gi in &level.gens {
                let gamma = strong[gi].image(beta);
                if level.transversal[gamma].is_none() {
                    let u = level.transversal[beta].as_ref().unwrap().then(&strong[gi]);
                    level.inverse[gamma] = Some(u.inverse());
                    level.transversal[gamma] = Some(u);
                    level.orbit.push(gamma);
                    queue.push(gamma);
                }
            }
        }
    }

    /// Sifts `g` starting at `from`; returns the residue and the level where sifting stopped.
    pub fn strip(&self, g: &Permutation, from: usize) -> (Permutation, usize) {
        let mut h = g.clone();
        for l in from..self.levels.len() {
            let level = &self.levels[l];
            let beta = h.image(level.base);
            match &level.inverse[beta] {
                None => return (h, l),
                Some(inv) => h = h.then(inv),
            }
        }
        (h, self.levels.len())
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        g.degree() == self.n && self.strip(g, 0).0.is_identity()
    }

    fn check_level(&mut self, i: usize) -> Option<usize> {
        let orbit_len = self.levels[i].orbit.len();
        let gen_count = self.levels[i].gens.len();
        for ob in 0..orbit_len {
            let beta = self.levels[i].orbit[ob];
            for gk in 0..gen_count {
                let x = self.levels[i].gens[gk];
                if self.levels[i].checked.contains(&(beta as u32, x as u32)) {
                    continue;
                }
                let level = &self.levels[i];
                let gamma = self.strong[x].image(beta);
                let h = level.transversal[beta]
                    .as_ref()
                    .unwrap()
                    .then(&self.strong[x])
                    .then(level.inverse[gamma].as_ref().unwrap());
                if !h.is_identity() {
                    let (y, j) = self.strip(&h, i + 1);
                    if j < self.levels.len() || !y.is_identity() {
                        if j == self.levels.len() {
                            let b = y.first_moved().unwrap();
                            self.levels.push(Level::new(self.n, b));
                        }
                        let idx = self.strong.len();
                        self.strong.push(y);
                        for l in i + 1..=j {
                            self.levels[l].gens.push(idx);
                            self.extend_orbit(l, idx);
                        }
                        return Some(j);
                    }
                }
                self.levels[i].checked.insert((beta as u32, x as u32));
            }
        }
        None
    }

    fn complete(&mut self, _hint: usize) {
        if self.levels.is_empty() {
            return;
        }
        let mut i = self.levels.len() as isize - 1;
        while i >= 0 {
            match self.check_level(i as usize) {
                Some(j) => i = j as isize,
                None => i -= 1,
            }
        }
    }

    /// Adds `g` to the group; returns false if it was already a member.
    pub fn add_generator(&mut self, g: &Permutation) -> bool {
        if self.contains(g) {
            return false;
        }
        self.push_strong(g.clone());
        self.complete(0);
        true
    }

    pub fn order(&self) -> BigUint {
        self.levels.iter().fold(BigUint::from(1u32), |acc, l| acc * BigUint::from(l.orbit.len()))
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base).collect()
    }

    /// Strong generators fixing the first `depth` base points.
    pub fn stabilizer_generators(&self, depth: usize) -> Vec<Permutation> {
        if depth >= self.levels.len() {
            return Vec::new();
        }
        self.levels[depth].gens.iter().map(|&i| self.strong[i].clone()).collect()
    }
}
