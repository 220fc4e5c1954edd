//! Affine groups preserving a nondegenerate quadratic form up to semisimilarity:
//! the closure is the automorphism group of the affine polar graph.

use num_bigint::BigUint;

use super::small::{brute_closure_in_agl, field_coordinates};
use super::{Branch, BranchResult, Candidate, Failure};
use crate::affine::AffineFrame;
use crate::error::{Error, Result};
use crate::gf::linalg::{self, Mat};
use crate::gf::{enumerate_field_structures, CoordinateSystem, GaloisField};
use crate::perm::{OrbitalStructure, Permutation, PermutationGroup};
use crate::zoo::{go_order, FormType, StandardForm};
use crate::Limits;

/// A quadratic form given by its values at every point, with its polar Gram matrix.
#[derive(Debug, Clone)]
pub struct QuadraticFormTable {
    pub values: Vec<u32>,
    pub eps: FormType,
    pub gram: Mat,
}

/// Per generator `(λ, α)` with `κ(v^g) = λ κ(v)^(p^α)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemisimilarityWitness {
    pub factors: Vec<(u32, u32)>,
}

/// The nondiagonal colour whose size is prime to `q`: the nonzero singular vectors.
pub fn isotropic_orbit(orbitals: &OrbitalStructure, q: u64) -> Option<u32> {
    let colors = orbitals.nondiagonal_colors();
    if colors.len() != 2 {
        return None;
    }
    let prime: Vec<u32> = colors.into_iter().filter(|&c| orbitals.subdegree_of(c) as u64 % q != 0).collect();
    (prime.len() == 1).then(|| prime[0])
}

/// At most `k` generators of `g0` (random elements, checked by order);
/// the flag is set when the original, longer generating set had to be kept.
pub fn reduce_generators(g0: &PermutationGroup, k: usize, limits: &Limits) -> (Vec<Permutation>, bool) {
    let gens = g0.generators();
    if gens.len() <= k {
        return (gens.to_vec(), false);
    }
    let mut rng = limits.rng();
    for size in 1..=k {
        for _ in 0..2048 / k {
            let t: Vec<Permutation> = (0..size).map(|_| g0.random_element(&mut rng)).collect();
            let h = PermutationGroup::generated_greedily(g0.degree(), t.iter().cloned());
            if h.order() == g0.order() {
                return (t, false);
            }
        }
    }
    (gens.to_vec(), true)
}

/// Outcome of propagating `κ` along the generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Propagation {
    /// Values at every point reached (`None` elsewhere).
    Table(Vec<Option<u32>>),
    Contradiction { point: usize },
    /// A generator without a guess was needed.
    Undetermined { generator: usize },
}

/// Breadth-first propagation of `κ(seed) = γ` and `κ = 0` on `isotropic`
/// (which should include the origin) through `κ(u^g) = λ κ(u)^(p^α)`, rejecting a point that receives two values.
pub fn propagate_form(
    field: &GaloisField,
    gens: &[Permutation],
    guesses: &[Option<(u32, u32)>],
    isotropic: &[bool],
    seed: usize,
    gamma: u32,
) -> Propagation {
    let mut table: Vec<Option<u32>> = isotropic.iter().map(|&i| i.then_some(0)).collect();
    table[seed] = Some(gamma);
    let mut order = vec![seed];
    let mut head = 0;
    while head < order.len() {
        let u = order[head];
        head += 1;
        let ku = table[u].expect("assigned");
        for (gi, g) in gens.iter().enumerate() {
            let Some((lambda, alpha)) = guesses[gi] else { return Propagation::Undetermined { generator: gi } };
            let w = g.image(u);
            let val = field.mul(lambda, field.frobenius(ku, alpha));
            match table[w] {
                Some(x) if x != val => return Propagation::Contradiction { point: w },
                Some(_) => {}
                None => {
                    table[w] = Some(val);
                    order.push(w);
                }
            }
        }
    }
    Propagation::Table(table)
}

/// Result of checking a total table.
#[derive(Debug, Clone)]
pub struct FormValidation {
    /// `κ` agrees with the quadratic polynomial read off the basis.
    pub quadratic: bool,
    pub nondegenerate: bool,
    pub witness: Option<SemisimilarityWitness>,
    pub gram: Mat,
}

fn value(cs: &CoordinateSystem, values: &[u32], v: &[u32]) -> u32 {
    values[cs.point(v)]
}

fn polar(cs: &CoordinateSystem, values: &[u32], x: &[u32], y: &[u32]) -> u32 {
    let f = cs.field();
    let s = value(cs, values, &linalg::vec_add(f, x, y));
    f.sub(f.sub(s, value(cs, values, x)), value(cs, values, y))
}

/// `(λ, α)` with `κ(v^g) = λ κ(v)^(p^α)` for every point, if any.
pub fn semisimilarity_of(field: &GaloisField, values: &[u32], g: &Permutation) -> Option<(u32, u32)> {
    let v = values.iter().position(|&x| x != 0)?;
    for alpha in 0..field.k() {
        let lambda = field.div(values[g.image(v)], field.frobenius(values[v], alpha))?;
        if lambda != 0
            && (0..values.len()).all(|u| values[g.image(u)] == field.mul(lambda, field.frobenius(values[u], alpha)))
        {
            return Some((lambda, alpha));
        }
    }
    None
}

/// Checks that `values` is a quadratic form, computes its Gram matrix and
/// radical, and finds the semisimilarity factors of the generators.
pub fn validate_form(cs: &CoordinateSystem, gens: &[Permutation], values: &[u32]) -> FormValidation {
    let f = cs.field();
    let a = cs.dim();
    let unit = |i: usize| {
        let mut e = vec![0; a];
        e[i] = 1;
        e
    };
    let gram: Mat = (0..a).map(|i| (0..a).map(|j| polar(cs, values, &unit(i), &unit(j))).collect()).collect();
    let diag: Vec<u32> = (0..a).map(|i| value(cs, values, &unit(i))).collect();
    let quadratic = (0..cs.degree()).all(|pt| {
        let x = cs.coords(pt);
        let mut s = 0;
        for i in 0..a {
            s = f.add(s, f.mul(diag[i], f.mul(x[i], x[i])));
            for j in i + 1..a {
                s = f.add(s, f.mul(gram[i][j], f.mul(x[i], x[j])));
            }
        }
        s == values[pt]
    });
    let nondegenerate = quadratic && linalg::is_invertible(f, &gram);
    let witness = gens
        .iter()
        .map(|g| semisimilarity_of(f, values, g))
        .collect::<Option<Vec<_>>>()
        .map(|factors| SemisimilarityWitness { factors });
    FormValidation { quadratic, nondegenerate, witness, gram }
}

/// All vectors of the span of the rows of `w`.
fn span(f: &GaloisField, w: &Mat, a: usize) -> Vec<Vec<u32>> {
    let q = f.q() as usize;
    (0..q.pow(w.len() as u32))
        .map(|mut c| {
            let mut v = vec![0; a];
            for b in w {
                v = linalg::vec_add(f, &v, &linalg::vec_scale(f, (c % q) as u32, b));
                c /= q;
            }
            v
        })
        .collect()
}

/// Basis `e_1, f_1, ..., e_m, f_m` in which the table equals the standard form
/// of the returned type.
pub fn standard_basis(cs: &CoordinateSystem, values: &[u32]) -> Result<(Mat, FormType)> {
    let f = cs.field();
    let a = cs.dim();
    if a % 2 != 0 || a < 2 {
        return Err(Error::Inconsistent("odd dimension".into()));
    }
    let m = a / 2;
    let kappa = |v: &[u32]| value(cs, values, v);
    let pol = |x: &[u32], y: &[u32]| polar(cs, values, x, y);
    let mut w: Mat = linalg::identity(a);
    let mut basis: Mat = Vec::new();
    let mut eps = FormType::Plus;
    while !w.is_empty() {
        let vectors = span(f, &w, a);
        let singular = vectors.iter().find(|v| v.iter().any(|&x| x != 0) && kappa(v) == 0);
        match singular {
            Some(e) => {
                let g = vectors
                    .iter()
                    .find(|v| pol(e, v) == 1)
                    .ok_or_else(|| Error::Inconsistent("form is degenerate".into()))?;
                // κ(g - κ(g)e) = κ(g) - κ(g) f(e, g) = 0
                let g = linalg::vec_add(f, g, &linalg::vec_scale(f, f.neg(kappa(g)), e));
                basis.push(e.clone());
                basis.push(g.clone());
            }
            None => {
                if w.len() != 2 {
                    return Err(Error::Inconsistent("anisotropic subspace of dimension > 2".into()));
                }
                let zeta = StandardForm::new(f.clone(), m, FormType::Minus).zeta;
                let e = vectors.iter().find(|v| kappa(v) == 1).ok_or_else(|| Error::Inconsistent("no unit".into()))?;
                let g = vectors
                    .iter()
                    .find(|v| pol(e, v) == 1 && kappa(v) == zeta)
                    .ok_or_else(|| Error::Inconsistent("no standard anisotropic pair".into()))?;
                basis.push(e.clone());
                basis.push(g.clone());
                eps = FormType::Minus;
            }
        }
        let (e, g) = (&basis[basis.len() - 2], &basis[basis.len() - 1]);
        let equations: Mat = vec![w.iter().map(|b| pol(b, e)).collect(), w.iter().map(|b| pol(b, g)).collect()];
        let sols = linalg::solve_homogeneous(f, &equations, w.len());
        w = sols.iter().map(|c| linalg::vec_mul(f, c, &w)).collect();
        if w.len() + basis.len() != a {
            return Err(Error::Inconsistent("form is degenerate".into()));
        }
    }
    // entry-by-entry agreement with the standard form, and the singular count
    let std = StandardForm::new(f.clone(), m, eps);
    let mut singular = 0u64;
    for code in 0..cs.degree() {
        let c = cs.decode(code);
        let v = linalg::vec_mul(f, &c, &basis);
        if kappa(&v) != std.value(&c) {
            return Err(Error::Inconsistent("basis does not standardise the form".into()));
        }
        singular += u64::from(code != 0 && kappa(&v) == 0);
    }
    if singular != std.singular_count() {
        return Err(Error::Inconsistent("singular count disagrees with the form type".into()));
    }
    Ok((basis, eps))
}

/// `K` such that `c -> c^p K` is a semisimilarity of the standard form with `λ = 1`.
fn frobenius_fix(std: &StandardForm) -> Option<Mat> {
    let f = &std.field;
    let a = 2 * std.m;
    let q = f.q();
    let all: Vec<Vec<u32>> = (0..q * q).map(|c| vec![c % q, c / q]).collect();
    let plane = |w: &[u32]| {
        let mut v = vec![0; a];
        v[a - 2] = w[0];
        v[a - 1] = w[1];
        std.value(&v)
    };
    let candidates = std::iter::once(linalg::identity(2))
        .chain((0..q.pow(4)).map(|c| vec![vec![c % q, c / q % q], vec![c / q / q % q, c / q / q / q]]));
    for p in candidates {
        let ok = all.iter().all(|w| {
            let img = linalg::vec_mul(f, &w.iter().map(|&x| f.frobenius(x, 1)).collect::<Vec<_>>(), &p);
            plane(&img) == f.frobenius(plane(w), 1)
        });
        if ok && linalg::is_invertible(f, &p) {
            let mut k = linalg::identity(a);
            for r in 0..2 {
                for c in 0..2 {
                    k[a - 2 + r][a - 2 + c] = p[r][c];
                }
            }
            return Some(k);
        }
    }
    None
}

/// `|F^(2m) ⋊ ΓO^ε_2m(q)|`.
pub fn qform_closure_order(eps: FormType, m: usize, q: u64, e: u32) -> BigUint {
    num_traits::pow::pow(BigUint::from(q), 2 * m) * go_order(eps, m as u32, q) * BigUint::from(q - 1) * BigUint::from(e)
}

/// Translations, isometries, similarities and the Frobenius map of the form
/// standardised by `basis`; each generator is checked against the table.
pub fn emit_qform_closure(
    cs: &CoordinateSystem,
    values: &[u32],
    basis: &Mat,
    eps: FormType,
) -> Result<PermutationGroup> {
    let f = cs.field();
    let a = cs.dim();
    let m = a / 2;
    let std = StandardForm::new(f.clone(), m, eps);
    let binv = linalg::inverse(f, basis).ok_or_else(|| Error::Inconsistent("singular basis".into()))?;
    let in_coords = |k: &Mat| linalg::mul(f, &linalg::mul(f, &binv, k), basis);
    let mut linear: Vec<Mat> = Vec::new();
    for code in 1..cs.degree() {
        let c = cs.decode(code);
        if std.value(&c) != 0 {
            linear.push(std.reflection(&c));
        }
    }
    let hyperbolic = if eps == FormType::Plus { m } else { m - 1 };
    if hyperbolic >= 1 {
        let mut flip = linalg::identity(a);
        flip.swap(0, 1);
        linear.push(flip);
    }
    if hyperbolic >= 2 {
        let mut swap = linalg::identity(a);
        swap.swap(0, 2);
        swap.swap(1, 3);
        linear.push(swap);
    }
    if f.q() > 2 {
        let w = f.primitive();
        linear.push((0..a).map(|i| (0..a).map(|j| if i == j { w } else { 0 }).collect()).collect());
        linear.push(std.similarity(w));
    }
    let mut maps: Vec<Permutation> = linear.iter().map(|k| cs.semilinear_map(&in_coords(k), 0)).collect();
    if f.k() > 1 {
        let k = frobenius_fix(&std).ok_or_else(|| Error::Inconsistent("no Frobenius semisimilarity".into()))?;
        let binv_frob: Mat = binv.iter().map(|r| r.iter().map(|&x| f.frobenius(x, 1)).collect()).collect();
        maps.push(cs.semilinear_map(&linalg::mul(f, &linalg::mul(f, &binv_frob, &k), basis), 1));
    }
    let mut group = PermutationGroup::new(cs.degree(), cs.translation_generators())?;
    for g in maps {
        if semisimilarity_of(f, values, &g).is_none() {
            return Err(Error::Inconsistent("emitted map is not a semisimilarity".into()));
        }
        group.add_generator(g);
    }
    let expected = qform_closure_order(eps, m, f.q() as u64, f.k());
    if group.order() != &expected {
        return Err(Error::Inconsistent(format!("qform closure has order {}, expected {expected}", group.order())));
    }
    Ok(group)
}

/// Representatives of `F^× / (F^×)^2`.
fn square_classes(f: &GaloisField) -> Vec<u32> {
    if f.p() == 2 {
        vec![1]
    } else {
        vec![1, f.primitive()]
    }
}

/// Depth-first search over witness guesses, guessing a generator's factor only
/// when propagation first needs it. Calls `found` on every total table until it returns true.
fn search_tables(
    field: &GaloisField,
    gens: &[Permutation],
    isotropic: &[bool],
    seed: usize,
    gamma: u32,
    budget: &mut u64,
    found: &mut dyn FnMut(Vec<u32>) -> bool,
) -> bool {
    let mut guesses = vec![None; gens.len()];
    descend(field, gens, isotropic, seed, gamma, &mut guesses, budget, found)
}

#[allow(clippy::too_many_arguments)]
fn descend(
    field: &GaloisField,
    gens: &[Permutation],
    isotropic: &[bool],
    seed: usize,
    gamma: u32,
    guesses: &mut Vec<Option<(u32, u32)>>,
    budget: &mut u64,
    found: &mut dyn FnMut(Vec<u32>) -> bool,
) -> bool {
    if *budget == 0 {
        return false;
    }
    *budget -= 1;
    match propagate_form(field, gens, guesses, isotropic, seed, gamma) {
        Propagation::Contradiction { .. } => false,
        Propagation::Table(t) => match t.into_iter().collect::<Option<Vec<u32>>>() {
            Some(total) => found(total),
            None => false,
        },
        Propagation::Undetermined { generator } => {
            for alpha in 0..field.k() {
                for lambda in field.units().collect::<Vec<_>>() {
                    guesses[generator] = Some((lambda, alpha));
                    if descend(field, gens, isotropic, seed, gamma, guesses, budget, found) {
                        return true;
                    }
                }
            }
            guesses[generator] = None;
            false
        }
    }
}

fn fail(reason: impl Into<String>) -> Failure {
    Failure::new(Branch::Qform, reason)
}

fn contains_and_preserves(group: &PermutationGroup, orbitals: &OrbitalStructure, h: &PermutationGroup) -> bool {
    group.generators().iter().all(|g| h.has(g)) && h.generators().iter().all(|g| orbitals.preserves(g))
}

/// The quadratic form branch: recovered forms for even `a >= 4`, then brute
/// force inside AΓL for embeddings with `a <= 4`.
pub fn run_qform(
    group: &PermutationGroup,
    orbitals: &OrbitalStructure,
    frame: Option<&AffineFrame>,
    limits: &Limits,
) -> BranchResult {
    let frame = frame.ok_or_else(|| fail("not affine"))?;
    let derived = frame.derived_matrices().map_err(|e| fail(e.to_string()))?;
    let fe = enumerate_field_structures(frame.g0_matrices(), &derived, frame.p(), frame.d(), limits);
    let (gens, _warned) = reduce_generators(frame.g0(), 6, limits);
    let mut reasons = Vec::new();
    for fs in fe.structures.iter().filter(|fs| fs.a() % 2 == 0 && fs.a() >= 4) {
        let q = fs.q() as u64;
        let Some(iso) = isotropic_orbit(orbitals, q) else {
            reasons.push(format!("q={q}: no orbit of size prime to q"));
            continue;
        };
        let cs = match field_coordinates(frame, fs) {
            Ok(cs) => cs,
            Err(e) => {
                reasons.push(e.to_string());
                continue;
            }
        };
        let zero = frame.zero();
        let isotropic: Vec<bool> = (0..cs.degree()).map(|x| x == zero || orbitals.color(zero, x) == iso).collect();
        let Some(seed) = (0..cs.degree()).find(|&x| x != zero && !isotropic[x]) else { continue };
        let mut result: Option<PermutationGroup> = None;
        for gamma in square_classes(cs.field()) {
            let mut budget = limits.enumeration_cap as u64;
            let mut accept = |values: Vec<u32>| {
                let val = validate_form(&cs, &gens, &values);
                if !val.nondegenerate || val.witness.is_none() {
                    return false;
                }
                let Ok((basis, eps)) = standard_basis(&cs, &values) else { return false };
                match emit_qform_closure(&cs, &values, &basis, eps) {
                    Ok(h) if contains_and_preserves(group, orbitals, &h) => {
                        result = Some(h);
                        true
                    }
                    _ => false,
                }
            };
            if search_tables(cs.field(), &gens, &isotropic, seed, gamma, &mut budget, &mut accept) {
                break;
            }
        }
        if let Some(h) = result {
            return Ok(Candidate { branch: Branch::Qform, group: h, structural: true });
        }
        reasons.push(format!("a={} q={q}: no choice defines a correct quadratic form", fs.a()));
    }
    let mut best: Option<PermutationGroup> = None;
    for fs in fe.structures.iter().filter(|fs| fs.a() <= 4) {
        match brute_closure_in_agl(orbitals, frame, fs, limits) {
            Ok(h) if contains_and_preserves(group, orbitals, &h) => {
                if best.as_ref().map_or(true, |b| h.order() > b.order()) {
                    best = Some(h);
                }
            }
            Ok(_) => reasons.push(format!("a={} q={}: overgroup does not contain G", fs.a(), fs.q())),
            Err(e) => reasons.push(format!("a={} q={}: {e}", fs.a(), fs.q())),
        }
    }
    match best {
        Some(h) => Ok(Candidate { branch: Branch::Qform, group: h, structural: false }),
        None if reasons.is_empty() => Err(fail("no embedding of even dimension")),
        None => Err(fail(reasons.join("; "))),
    }
}
