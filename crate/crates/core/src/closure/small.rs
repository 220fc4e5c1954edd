//! Affine groups of small order: the closure is found inside an affine
//! semilinear overgroup by brute force.

use num_bigint::BigUint;
use rand::Rng;

use super::{Branch, BranchResult, Candidate, Failure};
use crate::affine::AffineFrame;
use crate::error::{Error, Result};
use crate::gf::{enumerate_field_structures, linalg, CoordinateSystem, FieldStructure};
use crate::perm::{Enumeration, OrbitalStructure, Permutation, PermutationGroup};
use crate::Limits;

/// True iff `|G| <= n^18`.
pub fn order_gate(group: &PermutationGroup) -> bool {
    let n = BigUint::from(group.degree());
    group.order() <= &num_traits::pow::pow(n, 18)
}

/// A `k`-tuple (padded with identities) generating `g0`, by random then exhaustive search.
pub fn small_generating_tuple(g0: &PermutationGroup, k: usize, limits: &Limits) -> Result<Option<Vec<Permutation>>> {
    let n = g0.degree();
    let id = Permutation::identity(n);
    if g0.is_trivial() {
        return Ok(Some(vec![id; k]));
    }
    let elements = match g0.enumerate_elements(limits.enumeration_cap) {
        Enumeration::Elements(e) => e,
        Enumeration::TooLarge => {
            return Err(Error::TooLarge { size: g0.order().to_string(), cap: limits.enumeration_cap })
        }
    };
    let generates = |tuple: &[Permutation]| PermutationGroup::generated_greedily(n, tuple.iter().cloned()).order() == g0.order();
    let pad = |mut t: Vec<Permutation>| {
        t.resize(k, id.clone());
        t
    };
    if g0.generators().len() <= k {
        return Ok(Some(pad(g0.generators().to_vec())));
    }
    let mut rng = limits.rng();
    for _ in 0..1024 {
        let t: Vec<Permutation> = (0..k).map(|_| elements[rng.gen_range(0..elements.len())].clone()).collect();
        if generates(&t) {
            return Ok(Some(t));
        }
    }
    let m = elements.len() as u64;
    if m.checked_pow(k as u32).map_or(true, |s| s > limits.unit_scan_cap) {
        return Ok(None);
    }
    let mut idx = vec![0usize; k];
    loop {
        let t: Vec<Permutation> = idx.iter().map(|&i| elements[i].clone()).collect();
        if generates(&t) {
            return Ok(Some(t));
        }
        // next non-decreasing index tuple
        let Some(pos) = (0..k).rev().find(|&i| idx[i] + 1 < elements.len()) else { return Ok(None) };
        let v = idx[pos] + 1;
        idx[pos..].iter_mut().for_each(|x| *x = v);
    }
}

/// A field structure under which `G0` acts semilinearly.
#[derive(Debug, Clone)]
pub struct EmbeddingCandidate {
    pub a: usize,
    pub fs: FieldStructure,
    /// Where the field came from.
    pub source: &'static str,
}

/// All semilinear embeddings with `a <= 48`, whether the search was complete,
/// and the flag recording an embedding with `a <= 16`.
pub fn embeddings_small(frame: &AffineFrame, limits: &Limits) -> Result<(Vec<EmbeddingCandidate>, bool, bool)> {
    let derived = frame.derived_matrices()?;
    let fe = enumerate_field_structures(frame.g0_matrices(), &derived, frame.p(), frame.d(), limits);
    let out: Vec<EmbeddingCandidate> = fe
        .structures
        .into_iter()
        .filter(|fs| fs.a() <= 48)
        .map(|fs| EmbeddingCandidate {
            a: fs.a(),
            source: if fs.e() == 1 { "prime field" } else { "centraliser of the derived subgroup" },
            fs,
        })
        .collect();
    let flag = out.iter().any(|c| c.a <= 16);
    Ok((out, fe.complete, flag))
}

/// Order of AΓL_a(q).
pub fn agammal_order(a: usize, q: u64, e: u32) -> BigUint {
    num_traits::pow::pow(BigUint::from(q), a) * linalg::gl_order(a as u32, q) * BigUint::from(e)
}

/// Coordinates of V over the field of `fs`.
pub fn field_coordinates(frame: &AffineFrame, fs: &FieldStructure) -> Result<CoordinateSystem> {
    frame.coordinates(fs, &frame.field_basis(fs))
}

/// Every semilinear map `z -> z^σ L` with `colour(0, z) = colour(0, z^σ L)` for all `z`.
pub fn orbital_preserving_semilinear(
    cs: &CoordinateSystem,
    orbitals: &OrbitalStructure,
) -> Vec<(linalg::Mat, u32)> {
    let f = cs.field();
    let (a, q) = (cs.dim(), f.q() as usize);
    let color0: Vec<u32> = (0..cs.degree()).map(|z| orbitals.color(cs.point(&vec![0; a]), z)).collect();
    let units: Vec<u32> = f.units().collect();
    let mut out = Vec::new();
    for frob in 0..f.k() {
        let mut rows: Vec<Vec<u32>> = Vec::new();
        // span entries: (coordinate code, image coordinates)
        let span = vec![(0usize, vec![0u32; a])];
        extend(cs, &color0, &units, frob, q, &mut rows, span, &mut out);
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn extend(
    cs: &CoordinateSystem,
    color0: &[u32],
    units: &[u32],
    frob: u32,
    q: usize,
    rows: &mut Vec<Vec<u32>>,
    span: Vec<(usize, Vec<u32>)>,
    out: &mut Vec<(linalg::Mat, u32)>,
) {
    let f = cs.field();
    let a = cs.dim();
    let i = rows.len();
    if i == a {
        out.push((rows.clone(), frob));
        return;
    }
    let place = q.pow(i as u32);
    for r_code in 1..cs.degree() {
        let r = cs.decode(r_code);
        let mut grown = span.clone();
        let mut ok = true;
        'check: for lam in units {
            let lr = linalg::vec_scale(f, f.frobenius(*lam, frob), &r);
            for (s, img) in &span {
                let z = s + *lam as usize * place;
                let w = linalg::vec_add(f, img, &lr);
                if color0[cs.point(&cs.decode(z))] != color0[cs.point(&w)] {
                    ok = false;
                    break 'check;
                }
                grown.push((z, w));
            }
        }
        if ok {
            rows.push(r);
            extend(cs, color0, units, frob, q, rows, grown, out);
            rows.pop();
        }
    }
}

/// The subgroup of AΓL_a(q) preserving the 2-orbits of `G`.
pub fn brute_closure_in_agl(
    orbitals: &OrbitalStructure,
    frame: &AffineFrame,
    fs: &FieldStructure,
    limits: &Limits,
) -> Result<PermutationGroup> {
    let size = agammal_order(fs.a(), fs.q() as u64, fs.e());
    if size > BigUint::from(limits.agl_cap) {
        return Err(Error::TooLarge { size: size.to_string(), cap: limits.agl_cap });
    }
    let cs = field_coordinates(frame, fs)?;
    let maps = orbital_preserving_semilinear(&cs, orbitals);
    let mut group = PermutationGroup::new(cs.degree(), cs.translation_generators())?;
    for (m, fr) in maps {
        group.add_generator(cs.semilinear_map(&m, fr));
    }
    Ok(group)
}

fn fail(reason: impl Into<String>) -> Failure {
    Failure::new(Branch::Small, reason)
}

/// The small-groups branch on an affine group with frame `frame`.
pub fn run_small(
    group: &PermutationGroup,
    orbitals: &OrbitalStructure,
    frame: Option<&AffineFrame>,
    limits: &Limits,
) -> BranchResult {
    let frame = frame.ok_or_else(|| fail("not affine"))?;
    if !order_gate(group) {
        return Err(fail("|G| > n^18"));
    }
    match small_generating_tuple(frame.g0(), 4, limits) {
        Ok(Some(_)) => {}
        Ok(None) => return Err(fail("G0 is not 4-generated")),
        Err(e) => return Err(fail(format!("cannot enumerate G0: {e}"))),
    }
    let (cands, _complete, flag) = embeddings_small(frame, limits).map_err(|e| fail(e.to_string()))?;
    if !flag {
        return Err(fail("no semilinear embedding with a <= 16"));
    }
    let mut best: Option<PermutationGroup> = None;
    let mut skipped = Vec::new();
    for c in &cands {
        match brute_closure_in_agl(orbitals, frame, &c.fs, limits) {
            Ok(h) => {
                if best.as_ref().map_or(true, |b| h.order() > b.order()) {
                    best = Some(h);
                }
            }
            Err(e) => skipped.push(format!("a={} q={}: {e}", c.a, c.fs.q())),
        }
    }
    match best {
        Some(h) => Ok(Candidate { branch: Branch::Small, group: h, structural: true }),
        None => Err(fail(format!("no enumerable overgroup ({})", skipped.join("; ")))),
    }
}
