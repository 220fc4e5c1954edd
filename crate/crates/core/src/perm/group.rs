use std::collections::{HashSet, VecDeque};

use num_bigint::BigUint;
use rand::Rng;

use super::chain::StabChain;
use super::Permutation;
use crate::error::{Error, Result};

/// A permutation group given by generators, with a stabilizer chain and cached order.
#[derive(Clone, Debug)]
pub struct PermutationGroup {
    degree: usize,
    generators: Vec<Permutation>,
    chain: StabChain,
    order: BigUint,
}

/// Outcome of a capped enumeration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Enumeration {
    Elements(Vec<Permutation>),
    TooLarge,
}

impl PermutationGroup {
    /// Builds the group generated by `gens` on `degree` points.
    pub fn new(degree: usize, gens: Vec<Permutation>) -> Result<Self> {
        for g in &gens {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch { expected: degree, found: g.degree() });
            }
        }
        Ok(Self::build(degree, gens, &[]))
    }

    /// Same as [`PermutationGroup::new`] from raw image lists.
    pub fn from_image_lists(degree: usize, gens: Vec<Vec<usize>>) -> Result<Self> {
        let gens = gens.into_iter().map(Permutation::from_images).collect::<Result<Vec<_>>>()?;
        Self::new(degree, gens)
    }

    pub fn trivial(degree: usize) -> Self {
        Self::build(degree, Vec::new(), &[])
    }

    fn build(degree: usize, gens: Vec<Permutation>, base_prefix: &[usize]) -> Self {
        let chain = StabChain::new(degree, &gens, base_prefix);
        let order = chain.order();
        PermutationGroup { degree, generators: gens, chain, order }
    }

    /// Generated group, keeping only the generators that enlarge it.
    pub fn generated_greedily<I: IntoIterator<Item = Permutation>>(degree: usize, gens: I) -> Self {
        let mut chain = StabChain::new(degree, &[], &[]);
        let mut kept = Vec::new();
        for g in gens {
            if chain.add_generator(&g) {
                kept.push(g);
            }
        }
        let order = chain.order();
        PermutationGroup { degree, generators: kept, chain, order }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn order(&self) -> &BigUint {
        &self.order
    }

    pub fn order_u64(&self) -> Option<u64> {
        u64::try_from(self.order.clone()).ok()
    }

    pub fn is_trivial(&self) -> bool {
        self.order == BigUint::from(1u32)
    }

    pub fn base(&self) -> Vec<usize> {
        self.chain.base()
    }

    pub fn strong_generators(&self) -> &[Permutation] {
        &self.chain.strong
    }

    /// Membership test by sifting through the chain.
    pub fn contains(&self, g: &Permutation) -> Result<bool> {
        if g.degree() != self.degree {
            return Err(Error::DegreeMismatch { expected: self.degree, found: g.degree() });
        }
        Ok(self.chain.contains(g))
    }

    /// Membership for elements known to have the right degree.
    pub fn has(&self, g: &Permutation) -> bool {
        self.chain.contains(g)
    }

    pub fn is_subgroup_of(&self, other: &PermutationGroup) -> bool {
        self.generators.iter().all(|g| other.has(g))
    }

    /// Equal as permutation sets (mutual generator membership).
    pub fn same_group(&self, other: &PermutationGroup) -> bool {
        self.degree == other.degree && self.order == other.order && self.is_subgroup_of(other)
    }

    pub fn identity(&self) -> Permutation {
        Permutation::identity(self.degree)
    }

    pub fn orbit_of(&self, alpha: usize) -> Vec<usize> {
        let mut seen = vec![false; self.degree];
        let mut orbit = vec![alpha];
        seen[alpha] = true;
        let mut k = 0;
        while k < orbit.len() {
            let x = orbit[k];
            for g in &self.generators {
                let y = g.image(x);
                if !seen[y] {
                    seen[y] = true;
                    orbit.push(y);
                }
            }
            k += 1;
        }
        orbit.sort_unstable();
        orbit
    }

    /// Orbits in order of their smallest points; each orbit sorted.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree];
        let mut out = Vec::new();
        for a in 0..self.degree {
            if seen[a] {
                continue;
            }
            let orb = self.orbit_of(a);
            for &x in &orb {
                seen[x] = true;
            }
            out.push(orb);
        }
        out
    }

    pub fn is_transitive(&self) -> bool {
        self.degree <= 1 || self.orbit_of(0).len() == self.degree
    }

    /// Some `g` in the group with `alpha^g = beta`, or `None` if `beta` is outside the orbit.
    pub fn transporter(&self, alpha: usize, beta: usize) -> Option<Permutation> {
        let mut word: Vec<Option<Permutation>> = vec![None; self.degree];
        word[alpha] = Some(self.identity());
        let mut queue = VecDeque::from([alpha]);
        while let Some(x) = queue.pop_front() {
            if x == beta {
                return word[x].clone();
            }
            for g in &self.generators {
                let y = g.image(x);
                if word[y].is_none() {
                    word[y] = Some(word[x].as_ref().unwrap().then(g));
                    queue.push_back(y);
                }
            }
        }
        None
    }

    /// The stabilizer of `alpha`, computed from a chain whose base starts at `alpha`.
    pub fn point_stabilizer(&self, alpha: usize) -> PermutationGroup {
        self.stabilizer_of_sequence(&[alpha])
    }

    /// Pointwise stabilizer of a sequence of points.
    pub fn stabilizer_of_sequence(&self, points: &[usize]) -> PermutationGroup {
        let chain = StabChain::new(self.degree, &self.chain.strong, points);
        let distinct = points.iter().collect::<HashSet<_>>().len();
        let gens = chain.stabilizer_generators(distinct);
        PermutationGroup::build(self.degree, gens, &[])
    }

    /// Uniformly random element, built from one transversal entry per level.
    pub fn random_element<R: Rng>(&self, rng: &mut R) -> Permutation {
        let mut g = self.identity();
        for level in self.chain.levels.iter().rev() {
            let beta = level.orbit[rng.gen_range(0..level.orbit.len())];
            g = g.then(level.transversal[beta].as_ref().unwrap());
        }
        g
    }

    /// All elements if the order is at most `cap`.
    pub fn enumerate_elements(&self, cap: u64) -> Enumeration {
        if self.order > BigUint::from(cap) {
            return Enumeration::TooLarge;
        }
        let mut elements = vec![self.identity()];
        for level in self.chain.levels.iter().rev() {
            let mut next = Vec::with_capacity(elements.len() * level.orbit.len());
            for g in &elements {
                for &beta in &level.orbit {
                    next.push(g.then(level.transversal[beta].as_ref().unwrap()));
                }
            }
            elements = next;
        }
        Enumeration::Elements(elements)
    }

    /// Adds a generator in place; returns false if it was already a member.
    pub fn add_generator(&mut self, g: Permutation) -> bool {
        if self.chain.add_generator(&g) {
            self.generators.push(g);
            self.order = self.chain.order();
            true
        } else {
            false
        }
    }

    /// Normal closure of `seeds` under conjugation by this group's generators.
    pub fn normal_closure(&self, seeds: &[Permutation]) -> Result<PermutationGroup> {
        for s in seeds {
            if !self.contains(s)? {
                return Err(Error::NotInGroup);
            }
        }
        Ok(self.normal_closure_unchecked(seeds))
    }

    pub(crate) fn normal_closure_unchecked(&self, seeds: &[Permutation]) -> PermutationGroup {
        let mut n = PermutationGroup::trivial(self.degree);
        let mut queue: VecDeque<Permutation> = seeds.iter().cloned().collect();
        while let Some(x) = queue.pop_front() {
            if n.add_generator(x.clone()) {
                for g in &self.generators {
                    queue.push_back(x.conjugate_by(g));
                }
            }
        }
        n
    }

    pub fn derived_subgroup(&self) -> PermutationGroup {
        let mut comms = Vec::new();
        for (i, a) in self.generators.iter().enumerate() {
            for b in &self.generators[i + 1..] {
                let c = a.commutator(b);
                if !c.is_identity() {
                    comms.push(c);
                }
            }
        }
        self.normal_closure_unchecked(&comms)
    }

    pub fn is_abelian(&self) -> bool {
        self.generators.iter().enumerate().all(|(i, a)| {
            self.generators[i + 1..].iter().all(|b| a.then(b) == b.then(a))
        })
    }

    /// True if `sub` is normalised by every generator.
    pub fn normalizes(&self, sub: &PermutationGroup) -> bool {
        sub.generators.iter().all(|s| self.generators.iter().all(|g| sub.has(&s.conjugate_by(g))))
    }
}
