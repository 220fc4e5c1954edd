use super::{linalg::Mat, GaloisField};
use crate::perm::Permutation;

/// A labelling of the points of a domain by coordinate vectors in GF(q)^a.
///
/// The coordinate code of `(c_0, ..., c_{a-1})` is `c_0 + c_1 q + ...`.
#[derive(Debug, Clone)]
pub struct CoordinateSystem {
    field: GaloisField,
    a: usize,
    point_of_code: Vec<u32>,
    code_of_point: Vec<u32>,
}

impl CoordinateSystem {
    /// Points are the coordinate codes themselves.
    pub fn standard(field: GaloisField, a: usize) -> Self {
        let n = (field.q() as usize).pow(a as u32);
        let ids: Vec<u32> = (0..n as u32).collect();
        CoordinateSystem { field, a, point_of_code: ids.clone(), code_of_point: ids }
    }

    /// `point_of_code` must be a bijection from codes onto `0..q^a`.
    pub fn new(field: GaloisField, a: usize, point_of_code: Vec<u32>) -> Self {
        let mut code_of_point = vec![u32::MAX; point_of_code.len()];
        for (c, &pt) in point_of_code.iter().enumerate() {
            code_of_point[pt as usize] = c as u32;
        }
        assert!(code_of_point.iter().all(|&c| c != u32::MAX), "coordinate labelling must be a bijection");
        CoordinateSystem { field, a, point_of_code, code_of_point }
    }

    pub fn field(&self) -> &GaloisField {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.a
    }

    pub fn degree(&self) -> usize {
        self.point_of_code.len()
    }

    pub fn encode(&self, v: &[u32]) -> usize {
        v.iter().rev().fold(0usize, |acc, &x| acc * self.field.q() as usize + x as usize)
    }

    pub fn decode(&self, mut code: usize) -> Vec<u32> {
        let q = self.field.q() as usize;
        (0..self.a)
            .map(|_| {
                let x = (code % q) as u32;
                code /= q;
                x
            })
            .collect()
    }

    pub fn coords(&self, point: usize) -> Vec<u32> {
        self.decode(self.code_of_point[point] as usize)
    }

    pub fn point(&self, v: &[u32]) -> usize {
        self.point_of_code[self.encode(v)] as usize
    }

    /// The map `v -> v^(p^frob) · m + t`.
    pub fn affine_map(&self, m: &Mat, frob: u32, t: &[u32]) -> Permutation {
        let f = &self.field;
        let images = (0..self.degree())
            .map(|pt| {
                let v: Vec<u32> = self.coords(pt).iter().map(|&x| f.frobenius(x, frob)).collect();
                let w = super::linalg::vec_add(f, &super::linalg::vec_mul(f, &v, m), t);
                self.point(&w)
            })
            .collect();
        Permutation::from_images(images).expect("invertible affine map")
    }

    pub fn semilinear_map(&self, m: &Mat, frob: u32) -> Permutation {
        self.affine_map(m, frob, &vec![0; self.a])
    }

    pub fn translation(&self, t: &[u32]) -> Permutation {
        self.affine_map(&super::linalg::identity(self.a), 0, t)
    }

    /// Translations by `x^j e_i` for every unit vector and every power of the
    /// primitive element below the field degree; they generate all translations.
    pub fn translation_generators(&self) -> Vec<Permutation> {
        let mut out = Vec::new();
        for i in 0..self.a {
            for j in 0..self.field.k() {
                let mut t = vec![0; self.a];
                t[i] = self.field.pow_primitive(j as u64);
                out.push(self.translation(&t));
            }
        }
        out
    }
}
