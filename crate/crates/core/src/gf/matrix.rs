use rand::Rng;

use super::{linalg, GaloisField};
use crate::error::{Error, Result};

/// A square matrix over the prime field GF(p), acting on row vectors.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MatrixModP {
    p: u32,
    d: usize,
    entries: Vec<u32>,
}

impl MatrixModP {
    pub fn identity(p: u32, d: usize) -> Self {
        let mut entries = vec![0; d * d];
        for i in 0..d {
            entries[i * d + i] = 1 % p;
        }
        MatrixModP { p, d, entries }
    }

    pub fn zero(p: u32, d: usize) -> Self {
        MatrixModP { p, d, entries: vec![0; d * d] }
    }

    pub fn scalar(p: u32, d: usize, s: u32) -> Self {
        let mut m = Self::zero(p, d);
        for i in 0..d {
            m.entries[i * d + i] = s % p;
        }
        m
    }

    /// Entries are reduced modulo `p`; rows must be square.
    pub fn from_rows(p: u32, rows: &[Vec<u32>]) -> Self {
        let d = rows.len();
        assert!(rows.iter().all(|r| r.len() == d), "matrix must be square");
        MatrixModP { p, d, entries: rows.iter().flatten().map(|&x| x % p).collect() }
    }

    pub fn from_flat(p: u32, d: usize, entries: Vec<u32>) -> Self {
        assert_eq!(entries.len(), d * d);
        MatrixModP { p, d, entries: entries.into_iter().map(|x| x % p).collect() }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.entries[i * self.d + j]
    }

    pub fn flat(&self) -> &[u32] {
        &self.entries
    }

    pub fn rows(&self) -> Vec<Vec<u32>> {
        self.entries.chunks(self.d.max(1)).map(|r| r.to_vec()).collect()
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.entries[i * self.d..(i + 1) * self.d]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&x| x == 0)
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.p, self.d)
    }

    pub fn mul(&self, other: &MatrixModP) -> MatrixModP {
        let (d, p) = (self.d, self.p as u64);
        let mut out = vec![0u32; d * d];
        for i in 0..d {
            for k in 0..d {
                let a = self.entries[i * d + k] as u64;
                if a == 0 {
                    continue;
                }
                for j in 0..d {
                    out[i * d + j] = ((out[i * d + j] as u64 + a * other.entries[k * d + j] as u64) % p) as u32;
                }
            }
        }
        MatrixModP { p: self.p, d, entries: out }
    }

    pub fn add(&self, other: &MatrixModP) -> MatrixModP {
        let p = self.p;
        let entries = self.entries.iter().zip(&other.entries).map(|(&a, &b)| (a + b) % p).collect();
        MatrixModP { p, d: self.d, entries }
    }

    pub fn sub(&self, other: &MatrixModP) -> MatrixModP {
        let p = self.p;
        let entries = self.entries.iter().zip(&other.entries).map(|(&a, &b)| (a + p - b) % p).collect();
        MatrixModP { p, d: self.d, entries }
    }

    pub fn scale(&self, s: u32) -> MatrixModP {
        let p = self.p as u64;
        let entries = self.entries.iter().map(|&a| (a as u64 * s as u64 % p) as u32).collect();
        MatrixModP { p: self.p, d: self.d, entries }
    }

    pub fn pow(&self, mut e: u64) -> MatrixModP {
        let mut base = self.clone();
        let mut acc = Self::identity(self.p, self.d);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    fn prime_field(&self) -> GaloisField {
        GaloisField::new(self.p as u64).expect("p is prime")
    }

    pub fn inverse(&self) -> Option<MatrixModP> {
        let f = self.prime_field();
        linalg::inverse(&f, &self.rows()).map(|r| Self::from_rows(self.p, &r))
    }

    pub fn is_invertible(&self) -> bool {
        let f = self.prime_field();
        linalg::is_invertible(&f, &self.rows())
    }

    /// Conjugate `g^-1 · self · g`.
    pub fn conjugate_by(&self, g: &MatrixModP) -> Option<MatrixModP> {
        g.inverse().map(|gi| gi.mul(self).mul(g))
    }

    /// Row vector times matrix.
    pub fn apply(&self, v: &[u32]) -> Vec<u32> {
        let (d, p) = (self.d, self.p as u64);
        let mut out = vec![0u64; d];
        for (k, &x) in v.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for j in 0..d {
                out[j] += x as u64 * self.entries[k * d + j] as u64;
            }
        }
        out.into_iter().map(|x| (x % p) as u32).collect()
    }

    /// Multiplicative order, or `None` if not invertible or larger than `bound`.
    pub fn order(&self, bound: u64) -> Option<u64> {
        let id = Self::identity(self.p, self.d);
        let mut x = self.clone();
        for o in 1..=bound {
            if x == id {
                return Some(o);
            }
            x = x.mul(self);
        }
        None
    }
}

impl std::fmt::Display for MatrixModP {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let rows: Vec<String> = self
            .rows()
            .iter()
            .map(|r| format!("[{}]", r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")))
            .collect();
        write!(f, "[{}]", rows.join(","))
    }
}

/// Vector code with base-`p` digits `v[0] + v[1] p + ...`.
pub fn encode(p: u32, v: &[u32]) -> usize {
    v.iter().rev().fold(0usize, |acc, &x| acc * p as usize + x as usize)
}

pub fn decode(p: u32, d: usize, mut code: usize) -> Vec<u32> {
    (0..d)
        .map(|_| {
            let x = (code % p as usize) as u32;
            code /= p as usize;
            x
        })
        .collect()
}

/// The GF(p)-span of a list of matrices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixSpace {
    pub p: u32,
    pub d: usize,
    pub basis: Vec<MatrixModP>,
}

impl MatrixSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// `sum coeffs[i] * basis[i]`.
    pub fn combination(&self, coeffs: &[u32]) -> MatrixModP {
        let mut m = MatrixModP::zero(self.p, self.d);
        for (b, &c) in self.basis.iter().zip(coeffs) {
            if c != 0 {
                m = m.add(&b.scale(c));
            }
        }
        m
    }

    pub fn random_element<R: Rng>(&self, rng: &mut R) -> MatrixModP {
        let coeffs: Vec<u32> = (0..self.dim()).map(|_| rng.gen_range(0..self.p)).collect();
        self.combination(&coeffs)
    }

    /// Number of elements, if it fits the cap.
    pub fn size_within(&self, cap: u64) -> Option<u64> {
        let mut s: u64 = 1;
        for _ in 0..self.dim() {
            s = s.checked_mul(self.p as u64).filter(|&s| s <= cap)?;
        }
        Some(s)
    }

    /// Every element of the span, in coefficient order.
    pub fn elements(&self, cap: u64) -> Result<Vec<MatrixModP>> {
        let size = self.size_within(cap).ok_or_else(|| Error::TooLarge {
            size: format!("{}^{}", self.p, self.dim()),
            cap,
        })?;
        Ok((0..size as usize).map(|c| self.combination(&decode(self.p, self.dim(), c))).collect())
    }
}

/// Solutions `X` of linear matrix equations, given as a function producing, for
/// each unknown entry position, the flattened image of the corresponding unit matrix.
pub(crate) fn solve_linear_matrix_system<F>(p: u32, d: usize, image_of_unit: F) -> MatrixSpace
where
    F: Fn(&MatrixModP) -> Vec<u32>,
{
    let f = GaloisField::new(p as u64).expect("p is prime");
    let unknowns = d * d;
    // column u of the system = image of the u-th unit matrix
    let columns: Vec<Vec<u32>> = (0..unknowns)
        .map(|u| {
            let mut e = MatrixModP::zero(p, d);
            e.entries[u] = 1;
            image_of_unit(&e)
        })
        .collect();
    let eqs = columns.first().map_or(0, |c| c.len());
    let rows: Vec<Vec<u32>> = (0..eqs).map(|r| columns.iter().map(|c| c[r]).collect()).collect();
    let basis = linalg::solve_homogeneous(&f, &rows, unknowns)
        .into_iter()
        .map(|x| MatrixModP::from_flat(p, d, x))
        .collect();
    MatrixSpace { p, d, basis }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic() {
        let a = MatrixModP::from_rows(5, &[vec![1, 2], vec![3, 4]]);
        let ai = a.inverse().unwrap();
        assert!(a.mul(&ai).is_identity());
        assert_eq!(a.apply(&[1, 0]), vec![1, 2]);
        assert_eq!(a.pow(0), MatrixModP::identity(5, 2));
        assert!(MatrixModP::from_rows(2, &[vec![1, 1], vec![1, 1]]).inverse().is_none());
        let c = MatrixModP::from_rows(2, &[vec![0, 1], vec![1, 1]]);
        assert_eq!(c.order(10), Some(3));
    }

    #[test]
    fn codes_round_trip() {
        for code in 0..81 {
            assert_eq!(encode(3, &decode(3, 4, code)), code);
        }
    }
}
