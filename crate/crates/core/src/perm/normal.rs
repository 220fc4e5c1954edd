//! Minimal normal subgroups, socles of primitive groups and a simplicity test.

use num_bigint::BigUint;
use rand_chacha::ChaCha8Rng;

use super::{Enumeration, Permutation, PermutationGroup};
use crate::error::{Error, Result};
use crate::Limits;

/// Largest subgroup scanned element by element while minimising normal closures.
pub const NORMAL_SCAN_CAP: u64 = 5_000;

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// The elements of prime order among the powers of `x`.
pub fn prime_order_powers(x: &Permutation) -> Vec<Permutation> {
    let ord = x.order_u64();
    if ord <= 1 {
        return Vec::new();
    }
    prime_factors(ord).into_iter().map(|r| x.pow(ord / r)).collect()
}

/// Candidate elements of `n`: every element when `|n|` is small, otherwise random samples.
fn scan_elements(n: &PermutationGroup, limits: &Limits, rng: &mut ChaCha8Rng) -> (Vec<Permutation>, bool) {
    match n.enumerate_elements(NORMAL_SCAN_CAP.min(limits.enumeration_cap)) {
        Enumeration::Elements(all) => (all, true),
        Enumeration::TooLarge => {
            let mut out: Vec<Permutation> = n.generators().to_vec();
            out.extend((0..limits.sample_count).map(|_| n.random_element(rng)));
            (out, false)
        }
    }
}

/// Shrinks the normal subgroup `start` of `group` to a minimal normal subgroup.
///
/// Returns the subgroup and whether minimality was established exhaustively.
pub fn minimize_normal(
    group: &PermutationGroup,
    start: PermutationGroup,
    limits: &Limits,
    rng: &mut ChaCha8Rng,
) -> (PermutationGroup, bool) {
    let mut current = start;
    loop {
        let (elements, exact) = scan_elements(&current, limits, rng);
        let mut smaller = None;
        'scan: for x in &elements {
            for y in prime_order_powers(x) {
                let m = group.normal_closure_unchecked(&[y]);
                if m.order() < current.order() {
                    smaller = Some(m);
                    break 'scan;
                }
            }
        }
        match smaller {
            Some(m) => current = m,
            None => return (current, exact),
        }
    }
}

/// A minimal normal subgroup of a nontrivial group.
pub fn minimal_normal_subgroup(
    group: &PermutationGroup,
    limits: &Limits,
    rng: &mut ChaCha8Rng,
) -> Result<PermutationGroup> {
    if group.is_trivial() {
        return Err(Error::InvalidParameters("trivial group has no minimal normal subgroup".into()));
    }
    let mut seeds: Vec<Permutation> = group.generators().to_vec();
    seeds.extend((0..limits.sample_count).map(|_| group.random_element(rng)));
    let mut best: Option<PermutationGroup> = None;
    for x in seeds.iter().take(group.generators().len() + 16) {
        for y in prime_order_powers(x) {
            let m = group.normal_closure_unchecked(&[y]);
            if best.as_ref().map_or(true, |b| m.order() < b.order()) {
                best = Some(m);
            }
        }
    }
    let start = best.ok_or_else(|| Error::Budget("no nontrivial element found".into()))?;
    Ok(minimize_normal(group, start, limits, rng).0)
}

/// Centraliser in the full symmetric group of a transitive group.
///
/// A centralising permutation is fixed by its image of point 0, which must be a
/// fixed point of the stabiliser of 0.
pub fn centralizer_in_symmetric(m: &PermutationGroup) -> Result<PermutationGroup> {
    let n = m.degree();
    if !m.is_transitive() {
        return Err(Error::Intransitive);
    }
    let stab = m.point_stabilizer(0);
    let fixed: Vec<usize> = (0..n).filter(|&b| stab.generators().iter().all(|g| g.image(b) == b)).collect();
    // word for each point: element of m mapping 0 to it
    let mut reps: Vec<Option<Permutation>> = vec![None; n];
    reps[0] = Some(Permutation::identity(n));
    let mut queue = vec![0usize];
    while let Some(x) = queue.pop() {
        for g in m.generators() {
            let y = g.image(x);
            if reps[y].is_none() {
                reps[y] = Some(reps[x].as_ref().unwrap().then(g));
                queue.push(y);
            }
        }
    }
    let mut gens = Vec::new();
    for &beta in fixed.iter().filter(|&&b| b != 0) {
        let images: Vec<usize> = (0..n).map(|x| reps[x].as_ref().unwrap().image(beta)).collect();
        if let Ok(c) = Permutation::from_images(images) {
            if m.generators().iter().all(|g| c.then(g) == g.then(&c)) {
                gens.push(c);
            }
        }
    }
    Ok(PermutationGroup::generated_greedily(n, gens))
}

/// Intersection of `group` with a small group `other`, by membership over the elements of `other`.
pub fn intersect_small(group: &PermutationGroup, other: &PermutationGroup, cap: u64) -> Result<PermutationGroup> {
    match other.enumerate_elements(cap) {
        Enumeration::Elements(el) => Ok(PermutationGroup::generated_greedily(
            group.degree(),
            el.into_iter().filter(|x| group.has(x)),
        )),
        Enumeration::TooLarge => Err(Error::TooLarge { size: other.order().to_string(), cap }),
    }
}

/// Product of the minimal normal subgroups of a transitive group.
///
/// For primitive input this is the socle: a second minimal normal subgroup, if
/// any, is the centraliser of the first.
pub fn socle_primitive(group: &PermutationGroup, limits: &Limits) -> Result<PermutationGroup> {
    if !group.is_transitive() {
        return Err(Error::Intransitive);
    }
    let mut rng = limits.rng();
    let m = minimal_normal_subgroup(group, limits, &mut rng)?;
    if m.is_abelian() {
        return Ok(abelian_socle_part(group, m, limits, &mut rng));
    }
    if !m.is_transitive() {
        return Ok(m);
    }
    let cent = centralizer_in_symmetric(&m)?;
    let second = intersect_small(group, &cent, limits.enumeration_cap)?;
    if second.is_trivial() {
        return Ok(m);
    }
    let mut product = m.clone();
    for g in second.generators() {
        product.add_generator(g.clone());
    }
    Ok(product)
}

/// Joins further abelian minimal normal subgroups commuting with `m` until the
/// product is transitive or no candidate is left.
fn abelian_socle_part(
    group: &PermutationGroup,
    m: PermutationGroup,
    limits: &Limits,
    rng: &mut ChaCha8Rng,
) -> PermutationGroup {
    let mut product = m;
    let (elements, _) = scan_elements(group, limits, rng);
    for x in &elements {
        if product.is_transitive() {
            break;
        }
        for y in prime_order_powers(x) {
            if product.has(&y) {
                continue;
            }
            let (n, _) = minimize_normal(group, group.normal_closure_unchecked(&[y]), limits, rng);
            let commutes = n
                .generators()
                .iter()
                .all(|a| product.generators().iter().all(|b| a.then(b) == b.then(a)));
            if n.is_abelian() && commutes && !n.generators().iter().all(|g| product.has(g)) {
                for g in n.generators() {
                    product.add_generator(g.clone());
                }
            }
        }
    }
    product
}

/// True iff the group is nonabelian and has no proper nontrivial normal subgroup.
///
/// Exact when the order is at most the scan cap; otherwise the normal closures
/// of random prime-order elements are tested together with order-based checks.
pub fn is_simple_nonabelian(s: &PermutationGroup, limits: &Limits) -> Result<bool> {
    if s.is_trivial() || s.is_abelian() {
        return Ok(false);
    }
    let order = s.order().clone();
    if &order % BigUint::from(4u32) != BigUint::from(0u32) {
        // Nonabelian simple groups have order divisible by 4.
        return Ok(false);
    }
    if let Some(o) = s.order_u64() {
        if prime_factors(o).len() == 1 {
            return Ok(false);
        }
    }
    let mut rng = limits.rng();
    let (elements, _exact) = scan_elements(s, limits, &mut rng);
    for x in &elements {
        for y in prime_order_powers(x) {
            if s.normal_closure_unchecked(&[y]).order() != &order {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
