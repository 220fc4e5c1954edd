//! Affine groups preserving a tensor decomposition `V = U ⊗ W` with `dim U = 2`:
//! the closure is the automorphism group of the bilinear forms graph.

use num_bigint::BigUint;

use super::small::field_coordinates;
use super::{Branch, BranchResult, Candidate, Failure};
use crate::affine::AffineFrame;
use crate::error::{Error, Result};
use crate::gf::linalg::{self, Mat};
use crate::gf::{enumerate_field_structures, CoordinateSystem, FieldStructure};
use crate::perm::{OrbitalStructure, Permutation, PermutationGroup};
use crate::zoo::kronecker;
use crate::Limits;

fn p_part(mut x: u64, p: u64) -> u64 {
    let mut out = 1;
    while x % p == 0 {
        x /= p;
        out *= p;
    }
    out
}

/// `(q, m)` with `n = q^(2m)`, where `q` is the `p`-part of the subdegrees.
///
/// The subdegree `(q+1)(q^m-1)` is prime to `p`, so the `p`-part of the other
/// one is `q` whichever of the two is larger.
pub fn tensor_parameters(orbitals: &OrbitalStructure, p: u32) -> Option<(u32, usize)> {
    let (s, l) = orbitals.rank3_subdegrees()?;
    let q = p_part(s as u64, p as u64).max(p_part(l as u64, p as u64));
    if q < 2 {
        return None;
    }
    let (n, mut qq, mut k) = (orbitals.degree() as u64, 1u64, 0usize);
    while qq < n {
        qq = qq.checked_mul(q)?;
        k += 1;
    }
    (qq == n && k % 2 == 0 && k >= 4).then_some((q as u32, k / 2))
}

/// Basis vectors `v[i][j] = u_i ⊗ w_j` in coordinates over the field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorBasis {
    pub m: usize,
    pub vectors: [Vec<Vec<u32>>; 2],
}

impl TensorBasis {
    /// Rows ordered `(i, j) -> i * m + j`.
    pub fn matrix(&self) -> Mat {
        self.vectors.iter().flatten().cloned().collect()
    }
}

/// Whether every generator maps simple tensors of the basis to simple tensors.
pub fn check_tensor_basis(cs: &CoordinateSystem, g0_gens: &[Permutation], basis: &TensorBasis) -> bool {
    let f = cs.field();
    let m = basis.m;
    let b = basis.matrix();
    let Some(binv) = linalg::inverse(f, &b) else { return false };
    let q = f.q();
    let units: Vec<u32> = (0..q).collect();
    let mut simple: Vec<Vec<u32>> = Vec::new();
    // all rank <= 1 coefficient matrices u'^T w' (enough: u' normalised up to scalars is not needed)
    for ucode in 1..q * q {
        let u = [units[(ucode % q) as usize], units[(ucode / q) as usize]];
        for wcode in 1..(q as usize).pow(m as u32) {
            let mut w = Vec::with_capacity(m);
            let mut c = wcode;
            for _ in 0..m {
                w.push((c % q as usize) as u32);
                c /= q as usize;
            }
            let coeffs: Vec<u32> = (0..2).flat_map(|i| w.iter().map(move |&x| f.mul(u[i], x))).collect();
            simple.push(coeffs);
        }
    }
    for g in g0_gens {
        for c in &simple {
            let v = linalg::vec_mul(f, c, &b);
            let img = cs.coords(g.image(cs.point(&v)));
            let k = linalg::vec_mul(f, &img, &binv);
            for j in 0..m {
                for l in j + 1..m {
                    let minor = f.sub(f.mul(k[j], k[m + l]), f.mul(k[l], k[m + j]));
                    if minor != 0 {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Points of the orbit of simple tensors, found by its size `(q+1)(q^m-1)`.
fn simple_orbit(cs: &CoordinateSystem, orbitals: &OrbitalStructure, q: u64, m: usize) -> Option<Vec<bool>> {
    let size = ((q + 1) * (q.pow(m as u32) - 1)) as usize;
    let zero = cs.point(&vec![0; cs.dim()]);
    let c = orbitals.nondiagonal_colors().into_iter().find(|&c| orbitals.subdegree_of(c) == size)?;
    Some((0..cs.degree()).map(|pt| pt == zero || orbitals.color(zero, pt) == c).collect())
}

struct Search<'a> {
    cs: &'a CoordinateSystem,
    is_simple: &'a [bool],
    candidates: Vec<Vec<u32>>,
    m: usize,
}

impl Search<'_> {
    fn simple(&self, v: &[u32]) -> bool {
        self.is_simple[self.cs.point(v)]
    }

    /// `x + λy` simple for every λ.
    fn collinear_line(&self, x: &[u32], y: &[u32]) -> bool {
        let f = self.cs.field();
        f.units().all(|l| self.simple(&linalg::vec_add(f, x, &linalg::vec_scale(f, l, y))))
    }

    fn independent(&self, vs: &[Vec<u32>]) -> bool {
        linalg::rank(self.cs.field(), &vs.to_vec()) == vs.len()
    }

    /// Extends the first row `v[0][..]` then the second row.
    fn run(&self, rows: &mut [Vec<Vec<u32>>; 2], check: &dyn Fn(&TensorBasis) -> bool) -> Option<TensorBasis> {
        let m = self.m;
        let (r0, r1) = (rows[0].len(), rows[1].len());
        if r0 == m && r1 == m {
            let basis = TensorBasis { m, vectors: rows.clone() };
            return check(&basis).then_some(basis);
        }
        let f = self.cs.field();
        for cand in &self.candidates {
            let ok = if r0 < m {
                rows[0].iter().all(|v| self.collinear_line(v, cand))
                    && self.independent(&[rows[0].clone(), vec![cand.clone()]].concat())
            } else {
                let j = r1;
                let same_col = self.collinear_line(&rows[0][j], cand);
                let others = (0..m).filter(|&k| k != j).all(|k| !self.collinear_line(&rows[0][k], cand));
                let same_row = rows[1].iter().all(|v| self.collinear_line(v, cand));
                let scaled = j == 0 || {
                    let s = linalg::vec_add(f, &linalg::vec_add(f, &rows[0][0], &rows[1][0]), &rows[0][j]);
                    self.simple(&linalg::vec_add(f, &s, cand))
                };
                same_col && others && same_row && scaled
            };
            if !ok {
                continue;
            }
            let row = if r0 < m { 0 } else { 1 };
            rows[row].push(cand.clone());
            if let Some(b) = self.run(rows, check) {
                return Some(b);
            }
            rows[row].pop();
        }
        None
    }
}

/// Backtracking over simple tensors with the row/column incidence of a tensor basis.
fn scan_basis(
    cs: &CoordinateSystem,
    is_simple: &[bool],
    m: usize,
    check: &dyn Fn(&TensorBasis) -> bool,
) -> Option<TensorBasis> {
    let zero = cs.point(&vec![0; cs.dim()]);
    let candidates: Vec<Vec<u32>> =
        (0..cs.degree()).filter(|&pt| pt != zero && is_simple[pt]).map(|pt| cs.coords(pt)).collect();
    let search = Search { cs, is_simple, candidates, m };
    // G0 is transitive on simple tensors, so the first vector may be fixed.
    let first = search.candidates.first()?.clone();
    let mut rows = [vec![first], Vec::new()];
    search.run(&mut rows, check)
}

/// Order of SL_m(q).
pub fn sl_order(m: u32, q: u64) -> BigUint {
    linalg::gl_order(m, q) / BigUint::from(q - 1)
}

/// GF(q)-span of the orbit of `v` under `group` (as coordinate vectors).
fn module_dimension(cs: &CoordinateSystem, group: &PermutationGroup, v: &[u32]) -> usize {
    let f = cs.field();
    let mut basis: Mat = Vec::new();
    let mut reduced: Mat = Vec::new();
    let mut queue = vec![v.to_vec()];
    while let Some(x) = queue.pop() {
        let mut trial = reduced.clone();
        trial.push(x.clone());
        if linalg::rank(f, &trial) > reduced.len() {
            reduced = trial;
            basis.push(x.clone());
            for g in group.generators() {
                queue.push(cs.coords(g.image(cs.point(&x))));
            }
        }
    }
    basis.len()
}

/// The normal subgroup SL(W) of `G0`, from the normal closures in `G0''` of its elements.
pub fn extract_slw(
    frame: &AffineFrame,
    cs: &CoordinateSystem,
    simple_vector: &[u32],
    m: usize,
    limits: &Limits,
) -> Result<PermutationGroup> {
    let q = cs.field().q() as u64;
    let target = sl_order(m as u32, q);
    let h = frame.g0().derived_subgroup().derived_subgroup();
    let mut rng = limits.rng();
    let mut samples: Vec<Permutation> = h.generators().to_vec();
    samples.extend((0..64).map(|_| h.random_element(&mut rng)));
    let mut join = PermutationGroup::trivial(frame.degree());
    for x in samples {
        if x.is_identity() || join.has(&x) {
            continue;
        }
        let n = h.normal_closure(&[x])?;
        if module_dimension(cs, &n, simple_vector) == m {
            for g in n.generators() {
                join.add_generator(g.clone());
            }
        }
    }
    let slw = join.derived_subgroup();
    if slw.order() != &target {
        return Err(Error::Inconsistent(format!("found a subgroup of order {} instead of SL_{m}({q})", slw.order())));
    }
    Ok(slw)
}

/// Some `g` in `s` with `P^g ∩ Q = {0}`, by scanning orbits of the points of `P`.
pub fn shift_independent(s: &PermutationGroup, p: &[usize], q: &[bool], zero: usize) -> Option<Permutation> {
    let meets = |g: &Permutation| p.iter().any(|&x| x != zero && q[g.image(x)]);
    if !meets(&s.identity()) {
        return Some(s.identity());
    }
    for &gamma in p.iter().filter(|&&x| x != zero) {
        for delta in s.orbit_of(gamma) {
            if q[delta] {
                continue;
            }
            let g = s.transporter(gamma, delta)?;
            if !meets(&g) {
                return Some(g);
            }
        }
    }
    None
}

fn span_points(cs: &CoordinateSystem, vs: &[Vec<u32>]) -> Vec<usize> {
    let f = cs.field();
    let q = f.q() as usize;
    (0..q.pow(vs.len() as u32))
        .map(|mut c| {
            let mut v = vec![0; cs.dim()];
            for b in vs {
                v = linalg::vec_add(f, &v, &linalg::vec_scale(f, (c % q) as u32, b));
                c /= q;
            }
            cs.point(&v)
        })
        .collect()
}

/// Tensor basis by the constructive route through SL(W) (for `m >= 4`).
fn accumulate_basis(
    cs: &CoordinateSystem,
    is_simple: &[bool],
    slw: &PermutationGroup,
    m: usize,
    check: &dyn Fn(&TensorBasis) -> bool,
) -> Option<TensorBasis> {
    let zero = cs.point(&vec![0; cs.dim()]);
    let simple: Vec<usize> = (0..cs.degree()).filter(|&pt| pt != zero && is_simple[pt]).collect();
    let v1 = cs.coords(simple[0]);
    let search = Search { cs, is_simple, candidates: Vec::new(), m };
    for &pt in &simple[1..] {
        let v2 = cs.coords(pt);
        if !search.collinear_line(&v1, &v2) || !search.independent(&[v1.clone(), v2.clone()]) {
            continue;
        }
        let p = span_points(cs, &[v1.clone(), v2.clone()]);
        let mut in_q = vec![false; cs.degree()];
        let mut q_basis = vec![v1.clone(), v2.clone()];
        for &x in &p {
            in_q[x] = true;
        }
        let mut gs = vec![slw.identity()];
        while gs.len() < m {
            let Some(g) = shift_independent(slw, &p, &in_q, zero) else { break };
            q_basis.push(cs.coords(g.image(cs.point(&v1))));
            q_basis.push(cs.coords(g.image(cs.point(&v2))));
            assert!(search.independent(&q_basis), "accumulated sum must be direct");
            in_q = vec![false; cs.degree()];
            for x in span_points(cs, &q_basis) {
                in_q[x] = true;
            }
            gs.push(g);
        }
        if gs.len() < m {
            continue;
        }
        let image = |g: &Permutation, v: &[u32]| cs.coords(g.image(cs.point(v)));
        let basis = TensorBasis {
            m,
            vectors: [gs.iter().map(|g| image(g, &v1)).collect(), gs.iter().map(|g| image(g, &v2)).collect()],
        };
        if check(&basis) {
            return Some(basis);
        }
    }
    None
}

/// A tensor basis for the coordinates `cs`, or `None`.
pub fn find_tensor_basis(
    frame: &AffineFrame,
    cs: &CoordinateSystem,
    orbitals: &OrbitalStructure,
    m: usize,
    limits: &Limits,
) -> Option<TensorBasis> {
    let q = cs.field().q() as u64;
    if cs.dim() != 2 * m {
        return None;
    }
    let is_simple = simple_orbit(cs, orbitals, q, m)?;
    let gens = frame.g0().generators().to_vec();
    let check = move |b: &TensorBasis| check_tensor_basis(cs, &gens, b);
    if m <= 3 {
        return scan_basis(cs, &is_simple, m, &check);
    }
    let zero = cs.point(&vec![0; cs.dim()]);
    let first = (0..cs.degree()).find(|&pt| pt != zero && is_simple[pt])?;
    let slw = extract_slw(frame, cs, &cs.coords(first), m, limits).ok()?;
    accumulate_basis(cs, &is_simple, &slw, m, &check)
}

fn gl_generators(cs: &CoordinateSystem, n: usize) -> Vec<Mat> {
    let f = cs.field();
    let mut out = Vec::new();
    let mut diag = linalg::identity(n);
    diag[0][0] = f.primitive();
    out.push(diag);
    let mut tv = linalg::identity(n);
    tv[0][1] = 1;
    out.push(tv);
    out.push((0..n).map(|i| (0..n).map(|j| u32::from(j == (i + 1) % n)).collect()).collect());
    let mut sw = linalg::identity(n);
    sw.swap(0, 1);
    out.push(sw);
    out.retain(|m| *m != linalg::identity(n));
    out
}

/// Expected closure order `q^(2m) |GL_2(q)| |GL_m(q)| / (q-1) · e`, doubled for `m = 2`.
pub fn tensor_closure_order(q: u64, m: usize, e: u32) -> BigUint {
    let mut o = num_traits::pow::pow(BigUint::from(q), 2 * m) * linalg::gl_order(2, q) * linalg::gl_order(m as u32, q)
        / BigUint::from(q - 1)
        * BigUint::from(e);
    if m == 2 {
        o *= 2u32;
    }
    o
}

/// Generators of the bilinear forms graph's automorphism group in the given basis.
pub fn emit_tensor_closure(cs: &CoordinateSystem, basis: &TensorBasis) -> Result<PermutationGroup> {
    let f = cs.field();
    let m = basis.m;
    let b = basis.matrix();
    let binv = linalg::inverse(f, &b).ok_or_else(|| Error::Inconsistent("tensor basis is singular".into()))?;
    let in_coords = |k: &Mat| linalg::mul(f, &linalg::mul(f, &binv, k), &b);
    let mut gens = cs.translation_generators();
    for g in gl_generators(cs, 2) {
        gens.push(cs.semilinear_map(&in_coords(&kronecker(f, &g, &linalg::identity(m))), 0));
    }
    for h in gl_generators(cs, m) {
        gens.push(cs.semilinear_map(&in_coords(&kronecker(f, &linalg::identity(2), &h)), 0));
    }
    if f.k() > 1 {
        let binv_frob: Mat = binv.iter().map(|r| r.iter().map(|&x| f.frobenius(x, 1)).collect()).collect();
        gens.push(cs.semilinear_map(&linalg::mul(f, &binv_frob, &b), 1));
    }
    if m == 2 {
        let mut swap = linalg::zero(4, 4);
        for i in 0..2 {
            for j in 0..2 {
                swap[i * 2 + j][j * 2 + i] = 1;
            }
        }
        gens.push(cs.semilinear_map(&in_coords(&swap), 0));
    }
    let group = PermutationGroup::new(cs.degree(), gens)?;
    let expected = tensor_closure_order(f.q() as u64, m, f.k());
    if group.order() != &expected {
        return Err(Error::Inconsistent(format!("tensor closure has order {}, expected {expected}", group.order())));
    }
    Ok(group)
}

fn fail(reason: impl Into<String>) -> Failure {
    Failure::new(Branch::Tensor, reason)
}

/// The tensor branch: every embedding over the field of order `q` is tried.
pub fn run_tensor(
    group: &PermutationGroup,
    orbitals: &OrbitalStructure,
    frame: Option<&AffineFrame>,
    limits: &Limits,
) -> BranchResult {
    let frame = frame.ok_or_else(|| fail("not affine"))?;
    let (q, m) = tensor_parameters(orbitals, frame.p()).ok_or_else(|| fail("n is not q^(2m)"))?;
    let derived = frame.derived_matrices().map_err(|e| fail(e.to_string()))?;
    let fe = enumerate_field_structures(frame.g0_matrices(), &derived, frame.p(), frame.d(), limits);
    let fields: Vec<&FieldStructure> = fe.structures.iter().filter(|fs| fs.q() == q).collect();
    if fields.is_empty() {
        return Err(fail(format!("no semilinear embedding over GF({q})")));
    }
    for fs in fields {
        let cs = field_coordinates(frame, fs).map_err(|e| fail(e.to_string()))?;
        let Some(basis) = find_tensor_basis(frame, &cs, orbitals, m, limits) else { continue };
        let h = emit_tensor_closure(&cs, &basis).map_err(|e| fail(e.to_string()))?;
        if group.generators().iter().all(|g| h.has(g)) && h.generators().iter().all(|g| orbitals.preserves(g)) {
            return Ok(Candidate { branch: Branch::Tensor, group: h, structural: true });
        }
    }
    Err(fail("no embedding gives a tensor basis"))
}
