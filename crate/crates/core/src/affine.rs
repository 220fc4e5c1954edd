//! Affine structure `G = V ⋊ G0` of a group with a regular elementary abelian socle.

use crate::error::{Error, Result};
use crate::gf::{decode, encode, prime_power, CoordinateSystem, FieldStructure, MatrixModP};
use crate::perm::{socle_primitive, Permutation, PermutationGroup};
use crate::Limits;

/// Identification of the points with GF(p)^d, with point 0 as the origin.
#[derive(Debug, Clone)]
pub struct AffineFrame {
    p: u32,
    d: usize,
    label: Vec<u32>,
    point: Vec<u32>,
    basis_points: Vec<usize>,
    translations: PermutationGroup,
    g0: PermutationGroup,
    g0_matrices: Vec<MatrixModP>,
}

impl AffineFrame {
    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn degree(&self) -> usize {
        self.label.len()
    }

    pub fn zero(&self) -> usize {
        0
    }

    /// Vector code (base-`p` digits) of a point.
    pub fn label(&self, point: usize) -> usize {
        self.label[point] as usize
    }

    pub fn vector(&self, point: usize) -> Vec<u32> {
        decode(self.p, self.d, self.label(point))
    }

    pub fn point_of(&self, v: &[u32]) -> usize {
        self.point[encode(self.p, v)] as usize
    }

    pub fn point_of_code(&self, code: usize) -> usize {
        self.point[code] as usize
    }

    /// Points labelled by the standard basis vectors.
    pub fn basis_points(&self) -> &[usize] {
        &self.basis_points
    }

    pub fn translations(&self) -> &PermutationGroup {
        &self.translations
    }

    /// The stabiliser of the origin.
    pub fn g0(&self) -> &PermutationGroup {
        &self.g0
    }

    pub fn g0_matrices(&self) -> &[MatrixModP] {
        &self.g0_matrices
    }

    /// Matrix of an element fixing the origin; checked on every point.
    pub fn matrix_of(&self, g: &Permutation) -> Result<MatrixModP> {
        if g.image(0) != 0 {
            return Err(Error::InconsistentFrame("element moves the origin".into()));
        }
        let rows: Vec<Vec<u32>> = self.basis_points.iter().map(|&b| self.vector(g.image(b))).collect();
        let m = MatrixModP::from_rows(self.p, &rows);
        if self.permutation_of(&m)? != *g {
            return Err(Error::InconsistentFrame("element is not linear in the frame".into()));
        }
        Ok(m)
    }

    /// The permutation `v -> v · m` of the points.
    pub fn permutation_of(&self, m: &MatrixModP) -> Result<Permutation> {
        let images = (0..self.degree()).map(|x| self.point_of(&m.apply(&self.vector(x)))).collect();
        Permutation::from_images(images)
    }

    pub fn translation(&self, t: &[u32]) -> Permutation {
        let images = (0..self.degree())
            .map(|x| {
                let v: Vec<u32> = self.vector(x).iter().zip(t).map(|(&a, &b)| (a + b) % self.p).collect();
                self.point_of(&v)
            })
            .collect();
        Permutation::from_images(images).expect("translation")
    }

    /// Matrices of the derived subgroup of `G0`.
    pub fn derived_matrices(&self) -> Result<Vec<MatrixModP>> {
        self.g0.derived_subgroup().generators().iter().map(|g| self.matrix_of(g)).collect()
    }

    /// GF(q)-coordinates from a basis of V over the field (vectors of GF(p)^d).
    pub fn coordinates(&self, fs: &FieldStructure, basis: &[Vec<u32>]) -> Result<CoordinateSystem> {
        let q = fs.q() as usize;
        let a = basis.len();
        if q.checked_pow(a as u32) != Some(self.degree()) {
            return Err(Error::InconsistentFrame("basis has the wrong size".into()));
        }
        let mut point_of_code = vec![0u32; self.degree()];
        let mut seen = vec![false; self.degree()];
        let f = fs.field();
        for (code, slot) in point_of_code.iter_mut().enumerate() {
            let mut c = code;
            let mut v = vec![0u32; self.d];
            for b in basis {
                let x = (c % q) as u32;
                c /= q;
                let w = fs.scalar_mul(x, b);
                v.iter_mut().zip(w).for_each(|(s, t)| *s = (*s + t) % self.p);
            }
            let pt = self.point_of(&v);
            if seen[pt] {
                return Err(Error::InconsistentFrame("vectors are not a basis over the field".into()));
            }
            seen[pt] = true;
            *slot = pt as u32;
        }
        Ok(CoordinateSystem::new(f.clone(), a, point_of_code))
    }

    /// A basis over the field: greedily the smallest vector code outside the span.
    pub fn field_basis(&self, fs: &FieldStructure) -> Vec<Vec<u32>> {
        let n = self.degree();
        let mut in_span = vec![false; n];
        in_span[0] = true;
        let mut span = vec![0usize];
        let mut basis = Vec::new();
        let units: Vec<u32> = fs.field().units().collect();
        while span.len() < n {
            let code = (0..n).find(|&c| !in_span[c]).unwrap();
            let b = decode(self.p, self.d, code);
            let multiples: Vec<Vec<u32>> = units.iter().map(|&x| fs.scalar_mul(x, &b)).collect();
            let mut grown = span.clone();
            for &s in &span {
                let sv = decode(self.p, self.d, s);
                for m in &multiples {
                    let w: Vec<u32> = sv.iter().zip(m).map(|(&a, &b)| (a + b) % self.p).collect();
                    let c = encode(self.p, &w);
                    if !in_span[c] {
                        in_span[c] = true;
                        grown.push(c);
                    }
                }
            }
            span = grown;
            basis.push(b);
        }
        basis
    }
}

/// The affine frame of `group`, or `None` if its socle is not a regular elementary abelian group.
pub fn detect_affine(group: &PermutationGroup, limits: &Limits) -> Result<Option<AffineFrame>> {
    let n = group.degree();
    let Some((p, d)) = prime_power(n as u64) else { return Ok(None) };
    if !group.is_transitive() {
        return Err(Error::Intransitive);
    }
    let socle = socle_primitive(group, limits)?;
    let p32 = p as u32;
    let elementary = socle.generators().iter().all(|g| g.order_u64() == p);
    if socle.order_u64() != Some(n as u64) || !socle.is_abelian() || !elementary || !socle.is_transitive() {
        return Ok(None);
    }
    build_frame(group, &socle, p32, d as usize).map(Some)
}

/// Frame from a known regular elementary abelian normal subgroup.
pub fn build_frame(group: &PermutationGroup, v: &PermutationGroup, p: u32, d: usize) -> Result<AffineFrame> {
    let n = group.degree();
    let mut label = vec![u32::MAX; n];
    label[0] = 0;
    let mut span = vec![0usize];
    let mut basis_points = Vec::new();
    let mut place = 1u32;
    while span.len() < n {
        let b = (0..n).find(|&x| label[x] == u32::MAX).unwrap();
        let t = v.transporter(0, b).ok_or_else(|| Error::InconsistentFrame("socle is not transitive".into()))?;
        let mut grown = Vec::with_capacity(span.len() * p as usize);
        for &s in &span {
            let mut x = s;
            for j in 0..p {
                if j > 0 {
                    x = t.image(x);
                    if label[x] != u32::MAX {
                        return Err(Error::InconsistentFrame("translation is not of order p".into()));
                    }
                    label[x] = label[s] + j * place;
                }
                grown.push(x);
            }
        }
        span = grown;
        basis_points.push(b);
        place *= p;
    }
    if basis_points.len() != d {
        return Err(Error::InconsistentFrame("socle is not elementary abelian".into()));
    }
    let mut point = vec![0u32; n];
    for (x, &l) in label.iter().enumerate() {
        point[l as usize] = x as u32;
    }
    let g0 = group.point_stabilizer(0);
    let mut frame = AffineFrame {
        p,
        d,
        label,
        point,
        basis_points,
        translations: v.clone(),
        g0: g0.clone(),
        g0_matrices: Vec::new(),
    };
    // translations must act by vector addition
    for g in v.generators() {
        let t = frame.vector(g.image(0));
        if frame.translation(&t) != *g {
            return Err(Error::InconsistentFrame("socle element is not a translation".into()));
        }
    }
    frame.g0_matrices = g0.generators().iter().map(|g| frame.matrix_of(g)).collect::<Result<_>>()?;
    Ok(frame)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn agl15() -> PermutationGroup {
        PermutationGroup::from_image_lists(5, vec![vec![1, 2, 3, 4, 0], vec![0, 2, 4, 1, 3]]).unwrap()
    }

    #[test]
    fn agl15_frame() {
        let f = detect_affine(&agl15(), &Limits::default()).unwrap().unwrap();
        assert_eq!((f.p(), f.d()), (5, 1));
        assert_eq!(f.g0().order_u64(), Some(4));
        let mult2 = Permutation::from_images(vec![0, 2, 4, 1, 3]).unwrap();
        assert_eq!(f.matrix_of(&mult2).unwrap(), MatrixModP::from_rows(5, &[vec![2]]));
        assert!(f.matrix_of(&Permutation::identity(5)).unwrap().is_identity());
    }

    #[test]
    fn nonaffine_and_regular() {
        let s5 = PermutationGroup::from_image_lists(5, vec![vec![1, 2, 3, 4, 0], vec![1, 0, 2, 3, 4]]).unwrap();
        assert!(detect_affine(&s5, &Limits::default()).unwrap().is_none());
        let klein = PermutationGroup::from_image_lists(4, vec![vec![1, 0, 3, 2], vec![2, 3, 0, 1]]).unwrap();
        let f = detect_affine(&klein, &Limits::default()).unwrap().unwrap();
        assert_eq!((f.p(), f.d()), (2, 2));
        assert!(f.g0().is_trivial());
    }

    #[test]
    fn round_trip_on_zoo() {
        let g = crate::zoo::clebsch().unwrap().group;
        let f = detect_affine(&g, &Limits::default()).unwrap().unwrap();
        for (x, m) in f.g0().generators().iter().zip(f.g0_matrices()) {
            assert_eq!(&f.permutation_of(m).unwrap(), x);
        }
        assert!(g.normalizes(f.translations()));
    }
}
