use std::collections::{HashMap, HashSet};

use super::matrix::solve_linear_matrix_system;
use super::{linalg, GaloisField, MatrixModP, MatrixSpace};
use crate::error::Result;
use crate::Limits;

/// Marker in the Zech table for `1 + c^i = 0`.
pub const ZECH_ZERO: u32 = u32::MAX;

/// A subfield GF(q) of the matrix algebra M_d(p), given by a matrix `c`
/// generating its multiplicative group.
///
/// The abstract field uses `c` as its primitive element, so the field element
/// with code `x` acts on row vectors as the matrix `c^log(x)`.
#[derive(Debug, Clone)]
pub struct FieldStructure {
    p: u32,
    d: usize,
    a: usize,
    c: MatrixModP,
    powers: Vec<MatrixModP>,
    index: HashMap<Vec<u32>, u32>,
    zech: Vec<u32>,
    field: GaloisField,
}

impl FieldStructure {
    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Dimension of V over GF(q).
    pub fn a(&self) -> usize {
        self.a
    }

    pub fn q(&self) -> u32 {
        self.field.q()
    }

    /// Degree of GF(q) over GF(p).
    pub fn e(&self) -> u32 {
        self.field.k()
    }

    pub fn generator(&self) -> &MatrixModP {
        &self.c
    }

    pub fn field(&self) -> &GaloisField {
        &self.field
    }

    /// Exponent of a matrix in `<c>`, if it belongs to it.
    pub fn exponent_of(&self, m: &MatrixModP) -> Option<u32> {
        self.index.get(m.flat()).copied()
    }

    /// `j` with `c^j = 1 + c^i`, or [`ZECH_ZERO`].
    pub fn zech(&self, i: u32) -> u32 {
        self.zech[i as usize]
    }

    pub fn zech_table(&self) -> &[u32] {
        &self.zech
    }

    pub fn power(&self, i: u64) -> &MatrixModP {
        &self.powers[(i % self.powers.len() as u64) as usize]
    }

    /// Matrix of the field element with code `x`.
    pub fn matrix_of(&self, x: u32) -> MatrixModP {
        match self.field.log(x) {
            None => MatrixModP::zero(self.p, self.d),
            Some(i) => self.powers[i as usize].clone(),
        }
    }

    /// Field element represented by `m`, if `m` lies in the field.
    pub fn element_of(&self, m: &MatrixModP) -> Option<u32> {
        if m.is_zero() {
            return Some(0);
        }
        self.exponent_of(m).map(|i| self.field.pow_primitive(i as u64))
    }

    /// `x · v` for a field element `x` and a vector of GF(p)^d.
    pub fn scalar_mul(&self, x: u32, v: &[u32]) -> Vec<u32> {
        match self.field.log(x) {
            None => vec![0; v.len()],
            Some(i) => self.powers[i as usize].apply(v),
        }
    }

    /// Sorted flattened elements of the field; equal for equal fields.
    pub fn element_set_key(&self) -> Vec<Vec<u32>> {
        let mut k: Vec<Vec<u32>> = self.powers.iter().map(|m| m.flat().to_vec()).collect();
        k.sort();
        k
    }

    /// Whether `m` commutes with the field and so is GF(q)-linear.
    pub fn is_linear(&self, m: &MatrixModP) -> bool {
        self.c.mul(m) == m.mul(&self.c)
    }
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut r = 2;
    while r * r <= n {
        if n % r == 0 {
            out.push(r);
            while n % r == 0 {
                n /= r;
            }
        }
        r += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Largest field size handled.
const FIELD_CAP: u64 = 1 << 16;

/// Recognises `{0} ∪ <c>` as a field GF(p^(d/a)) acting on GF(p)^d.
pub fn field_from_element(c: &MatrixModP, a: usize) -> Option<FieldStructure> {
    let (p, d) = (c.p(), c.dim());
    if a == 0 || d % a != 0 {
        return None;
    }
    let k = (d / a) as u32;
    let q = (p as u64).checked_pow(k).filter(|&q| q <= FIELD_CAP)?;
    let id = MatrixModP::identity(p, d);
    if c.pow(q - 1) != id || prime_factors(q - 1).iter().any(|r| c.pow((q - 1) / r) == id) {
        return None;
    }
    let mut powers = Vec::with_capacity(q as usize - 1);
    let mut index = HashMap::with_capacity(q as usize - 1);
    let mut x = id.clone();
    for i in 0..q - 1 {
        index.insert(x.flat().to_vec(), i as u32);
        let next = x.mul(c);
        powers.push(x);
        x = next;
    }
    let mut zech = Vec::with_capacity(q as usize - 1);
    for m in &powers {
        let s = id.add(m);
        if s.is_zero() {
            zech.push(ZECH_ZERO);
        } else {
            zech.push(*index.get(s.flat())?);
        }
    }
    // minimal polynomial of c from its first k powers
    let f = GaloisField::new(p as u64).ok()?;
    let basis: Vec<Vec<u32>> = powers[..k as usize].iter().map(|m| m.flat().to_vec()).collect();
    let target = powers[k as usize % powers.len()].flat().to_vec();
    let target = if k as u64 == q - 1 { id.flat().to_vec() } else { target };
    let coeffs = linalg::coordinates(&f, &basis, &target)?;
    let mut poly: Vec<u32> = coeffs.iter().map(|&x| (p - x) % p).collect();
    poly.push(1);
    let field = GaloisField::from_minimal_polynomial(p, &poly)?;
    Some(FieldStructure { p, d, a, c: c.clone(), powers, index, zech, field })
}

/// The prime field acting by scalar matrices.
pub fn prime_field_structure(p: u32, d: usize) -> FieldStructure {
    let f = GaloisField::new(p as u64).expect("p is prime");
    let c = MatrixModP::scalar(p, d, f.primitive());
    field_from_element(&c, d).expect("scalar field")
}

/// Frobenius exponents `i` with `g^-1 c g = c^(p^i)`, one per generator.
pub fn semilinear_check(gens: &[MatrixModP], fs: &FieldStructure) -> Option<Vec<u32>> {
    let q1 = fs.q() as u64 - 1;
    gens.iter()
        .map(|g| {
            let conj = fs.c.conjugate_by(g)?;
            let j = fs.exponent_of(&conj)? as u64;
            (0..fs.e()).find(|&i| (fs.p as u64).pow(i) % q1 == j % q1 || (q1 == 1 && j == 0))
        })
        .collect()
}

/// `{X : X g = g X}` for every generator.
pub fn centralizer_space(gens: &[MatrixModP], p: u32, d: usize) -> MatrixSpace {
    solve_linear_matrix_system(p, d, |x| {
        gens.iter().flat_map(|g| x.mul(g).sub(&g.mul(x)).flat().to_vec()).collect()
    })
}

/// All invertible elements of the span.
pub fn enumerate_units(space: &MatrixSpace, cap: u64) -> Result<Vec<MatrixModP>> {
    Ok(space.elements(cap)?.into_iter().filter(|m| m.is_invertible()).collect())
}

/// Field structures normalised by `G0`, found inside the centraliser of its derived subgroup.
#[derive(Debug, Clone)]
pub struct FieldEnumeration {
    pub structures: Vec<FieldStructure>,
    /// False if some centraliser was too large to scan.
    pub complete: bool,
}

pub fn enumerate_field_structures(
    g0_gens: &[MatrixModP],
    derived_gens: &[MatrixModP],
    p: u32,
    d: usize,
    limits: &Limits,
) -> FieldEnumeration {
    let mut structures: Vec<FieldStructure> = Vec::new();
    let mut complete = true;
    let mut seen: HashSet<Vec<Vec<u32>>> = HashSet::new();
    let space = centralizer_space(derived_gens, p, d);
    let mut units: Option<Vec<MatrixModP>> = None;
    for a in (1..=d).rev().filter(|a| d % a == 0) {
        let k = (d / a) as u32;
        if k == 1 {
            let fs = prime_field_structure(p, d);
            if seen.insert(fs.element_set_key()) {
                structures.push(fs);
            }
            continue;
        }
        let Some(q) = (p as u64).checked_pow(k).filter(|&q| q <= FIELD_CAP) else {
            complete = false;
            continue;
        };
        if units.is_none() {
            match enumerate_units(&space, limits.unit_scan_cap) {
                Ok(u) => units = Some(u),
                Err(_) => {
                    complete = false;
                    break;
                }
            }
        }
        let mut covered: HashSet<MatrixModP> = HashSet::new();
        let id = MatrixModP::identity(p, d);
        for u in units.as_ref().unwrap() {
            if covered.contains(u) || u.pow(q - 1) != id {
                continue;
            }
            let Some(fs) = field_from_element(u, a) else { continue };
            covered.extend(fs.powers.iter().cloned());
            if semilinear_check(g0_gens, &fs).is_none() {
                continue;
            }
            if seen.insert(fs.element_set_key()) {
                structures.push(fs);
            }
        }
    }
    structures.sort_by_key(|fs| fs.a);
    FieldEnumeration { structures, complete }
}

/// An invertible `t` with `g_i t = t h_i` for all `i`, if one exists in reach.
///
/// The second value is false when the intertwiner space was too large to scan
/// and the random probes failed, so a `None` is not conclusive.
pub fn tuple_intertwiner(g: &[MatrixModP], h: &[MatrixModP], limits: &Limits) -> (Option<MatrixModP>, bool) {
    assert_eq!(g.len(), h.len());
    let (p, d) = match g.first().or(h.first()) {
        Some(m) => (m.p(), m.dim()),
        None => return (None, true),
    };
    let space = solve_linear_matrix_system(p, d, |x| {
        g.iter().zip(h).flat_map(|(gi, hi)| gi.mul(x).sub(&x.mul(hi)).flat().to_vec()).collect()
    });
    if space.dim() == 0 {
        return (None, true);
    }
    let mut rng = limits.rng();
    for _ in 0..64 {
        let t = space.random_element(&mut rng);
        if t.is_invertible() {
            return (Some(t), true);
        }
    }
    match space.elements(limits.unit_scan_cap) {
        Ok(all) => (all.into_iter().find(|t| t.is_invertible()), true),
        Err(_) => (None, false),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn companion4() -> MatrixModP {
        MatrixModP::from_rows(2, &[vec![0, 1], vec![1, 1]])
    }

    fn block2(m: &MatrixModP) -> MatrixModP {
        let mut rows = vec![vec![0; 4]; 4];
        for i in 0..2 {
            for j in 0..2 {
                rows[i][j] = m.get(i, j);
                rows[i + 2][j + 2] = m.get(i, j);
            }
        }
        MatrixModP::from_rows(2, &rows)
    }

    #[test]
    fn gf4_from_companion() {
        let fs = field_from_element(&companion4(), 1).unwrap();
        assert_eq!(fs.q(), 4);
        for i in 0..3 {
            let z = fs.zech(i);
            let lhs = if z == ZECH_ZERO { MatrixModP::zero(2, 2) } else { fs.power(z as u64).clone() };
            assert_eq!(lhs, MatrixModP::identity(2, 2).add(fs.power(i as u64)));
        }
        let block = field_from_element(&block2(&companion4()), 2).unwrap();
        assert_eq!(block.a(), 2);
        let perm3 = MatrixModP::from_rows(
            2,
            &[vec![0, 1, 0, 0], vec![0, 0, 1, 0], vec![1, 0, 0, 0], vec![0, 0, 0, 1]],
        );
        assert!(field_from_element(&perm3, 2).is_none());
    }

    #[test]
    fn abstract_field_matches_matrices() {
        let fs = field_from_element(&companion4(), 1).unwrap();
        let f = fs.field();
        for x in 0..4 {
            for y in 0..4 {
                assert_eq!(fs.matrix_of(f.add(x, y)), fs.matrix_of(x).add(&fs.matrix_of(y)));
                assert_eq!(fs.matrix_of(f.mul(x, y)), fs.matrix_of(x).mul(&fs.matrix_of(y)));
            }
        }
    }

    #[test]
    fn semilinearity() {
        let fs = field_from_element(&companion4(), 1).unwrap();
        assert_eq!(semilinear_check(&[companion4()], &fs), Some(vec![0]));
        // x -> x^2 on GF(4) with basis (1, w): 1 -> 1, w -> w^2 = 1 + w
        let frob = MatrixModP::from_rows(2, &[vec![1, 0], vec![1, 1]]);
        assert_eq!(semilinear_check(&[frob], &fs), Some(vec![1]));
        let block = field_from_element(&block2(&companion4()), 2).unwrap();
        let mix = MatrixModP::from_rows(
            2,
            &[vec![1, 0, 0, 0], vec![0, 0, 1, 0], vec![0, 1, 0, 0], vec![0, 0, 0, 1]],
        );
        assert!(semilinear_check(&[mix], &block).is_none());
    }

    #[test]
    fn centralizers() {
        assert_eq!(centralizer_space(&[MatrixModP::identity(2, 2)], 2, 2).dim(), 4);
        let gl = [MatrixModP::from_rows(2, &[vec![1, 1], vec![0, 1]]), MatrixModP::from_rows(2, &[vec![0, 1], vec![1, 0]])];
        assert_eq!(centralizer_space(&gl, 2, 2).dim(), 1);
        let s = centralizer_space(&[companion4()], 2, 2);
        assert_eq!(s.dim(), 2);
        assert_eq!(enumerate_units(&s, 100).unwrap().len(), 3);
        let id3 = MatrixSpace { p: 3, d: 1, basis: vec![MatrixModP::identity(3, 1)] };
        assert_eq!(enumerate_units(&id3, 100).unwrap().len(), 2);
        assert!(enumerate_units(&centralizer_space(&[], 2, 3), 100).is_err());
    }

    #[test]
    fn field_enumeration() {
        let l = Limits::default();
        let frob = MatrixModP::from_rows(2, &[vec![1, 0], vec![1, 1]]);
        let fe = enumerate_field_structures(&[companion4(), frob], &[companion4()], 2, 2, &l);
        let qs: Vec<(usize, u32)> = fe.structures.iter().map(|f| (f.a(), f.q())).collect();
        assert!(qs.contains(&(1, 4)) && qs.contains(&(2, 2)));
        let gl = [MatrixModP::from_rows(2, &[vec![1, 1], vec![0, 1]]), MatrixModP::from_rows(2, &[vec![0, 1], vec![1, 0]])];
        let fe = enumerate_field_structures(&gl, &gl, 2, 2, &l);
        assert_eq!(fe.structures.iter().map(|f| (f.a(), f.q())).collect::<Vec<_>>(), vec![(2, 2)]);
        let fe = enumerate_field_structures(&[], &[], 2, 2, &l);
        assert!(fe.structures.iter().any(|f| f.a() == 1) && fe.structures.iter().any(|f| f.a() == 2));
    }

    #[test]
    fn intertwiners() {
        let l = Limits::default();
        let u = MatrixModP::from_rows(2, &[vec![1, 1], vec![0, 1]]);
        let lo = MatrixModP::from_rows(2, &[vec![1, 0], vec![1, 1]]);
        let t = tuple_intertwiner(&[u.clone()], &[lo.clone()], &l).0.unwrap();
        assert_eq!(u.mul(&t), t.mul(&lo));
        assert!(t.is_invertible());
        assert!(tuple_intertwiner(&[u], &[MatrixModP::identity(2, 2)], &l).0.is_none());
        let id = MatrixModP::identity(3, 2);
        assert!(tuple_intertwiner(&[id.clone()], &[id], &l).0.is_some());
    }
}
