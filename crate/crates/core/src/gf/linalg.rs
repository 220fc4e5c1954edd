//! Dense linear algebra over a [`GaloisField`], with matrices as row lists and
//! vectors acting on the left (`v · M`).

use super::GaloisField;

pub type Mat = Vec<Vec<u32>>;

pub fn identity(d: usize) -> Mat {
    (0..d).map(|i| (0..d).map(|j| u32::from(i == j)).collect()).collect()
}

pub fn zero(rows: usize, cols: usize) -> Mat {
    vec![vec![0; cols]; rows]
}

pub fn mul(f: &GaloisField, a: &Mat, b: &Mat) -> Mat {
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            let mut out = vec![0u32; cols];
            for (k, &x) in row.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                for (o, &y) in out.iter_mut().zip(&b[k]) {
                    *o = f.add(*o, f.mul(x, y));
                }
            }
            out
        })
        .collect()
}

pub fn vec_mul(f: &GaloisField, v: &[u32], m: &Mat) -> Vec<u32> {
    let cols = m.first().map_or(0, |r| r.len());
    let mut out = vec![0u32; cols];
    for (k, &x) in v.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (o, &y) in out.iter_mut().zip(&m[k]) {
            *o = f.add(*o, f.mul(x, y));
        }
    }
    out
}

pub fn vec_add(f: &GaloisField, a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().zip(b).map(|(&x, &y)| f.add(x, y)).collect()
}

pub fn vec_scale(f: &GaloisField, c: u32, a: &[u32]) -> Vec<u32> {
    a.iter().map(|&x| f.mul(c, x)).collect()
}

pub fn transpose(a: &Mat) -> Mat {
    let cols = a.first().map_or(0, |r| r.len());
    (0..cols).map(|j| a.iter().map(|r| r[j]).collect()).collect()
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn row_reduce(f: &GaloisField, a: &mut Mat) -> Vec<usize> {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| a[i][c] != 0) else { continue };
        a.swap(r, pr);
        let inv = f.inv(a[r][c]).unwrap();
        for x in a[r].iter_mut() {
            *x = f.mul(*x, inv);
        }
        for i in 0..rows {
            if i != r && a[i][c] != 0 {
                let factor = f.neg(a[i][c]);
                for j in 0..cols {
                    let v = f.mul(factor, a[r][j]);
                    a[i][j] = f.add(a[i][j], v);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(f: &GaloisField, a: &Mat) -> usize {
    let mut b = a.clone();
    row_reduce(f, &mut b).len()
}

/// Basis of `{x : a · x^T = 0}` (solutions of the equations given as rows).
pub fn solve_homogeneous(f: &GaloisField, equations: &Mat, unknowns: usize) -> Mat {
    let mut a: Mat = equations.to_vec();
    if a.is_empty() {
        return identity(unknowns);
    }
    let pivots = row_reduce(f, &mut a);
    let free: Vec<usize> = (0..unknowns).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut x = vec![0u32; unknowns];
            x[fc] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                x[pc] = f.neg(a[r][fc]);
            }
            x
        })
        .collect()
}

/// Left kernel `{v : v · a = 0}`.
pub fn left_kernel(f: &GaloisField, a: &Mat) -> Mat {
    solve_homogeneous(f, &transpose(a), a.len())
}

pub fn inverse(f: &GaloisField, a: &Mat) -> Option<Mat> {
    let d = a.len();
    let mut aug: Mat = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..d).map(|j| u32::from(i == j)));
            row
        })
        .collect();
    let pivots = row_reduce(f, &mut aug);
    if pivots.len() < d || pivots[d - 1] != d - 1 {
        return None;
    }
    Some(aug.into_iter().map(|r| r[d..].to_vec()).collect())
}

pub fn is_invertible(f: &GaloisField, a: &Mat) -> bool {
    rank(f, a) == a.len()
}

/// Coordinates of `v` in the basis given by the rows of `basis`, if `v` is in their span.
pub fn coordinates(f: &GaloisField, basis: &Mat, v: &[u32]) -> Option<Vec<u32>> {
    let k = basis.len();
    // Solve x · basis = v via the augmented transpose.
    let mut sys: Mat = (0..v.len())
        .map(|j| {
            let mut row: Vec<u32> = basis.iter().map(|b| b[j]).collect();
            row.push(v[j]);
            row
        })
        .collect();
    let pivots = row_reduce(f, &mut sys);
    if pivots.contains(&k) {
        return None;
    }
    let mut x = vec![0u32; k];
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = sys[r][k];
    }
    Some(x)
}

/// Order of the general linear group GL_d(q).
pub fn gl_order(d: u32, q: u64) -> num_bigint::BigUint {
    let q = num_bigint::BigUint::from(q);
    let qd = num_traits::pow::pow(q.clone(), d as usize);
    (0..d).fold(num_bigint::BigUint::from(1u32), |acc, i| acc * (&qd - num_traits::pow::pow(q.clone(), i as usize)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_and_kernel() {
        let f = GaloisField::new(3).unwrap();
        let a = vec![vec![1, 2], vec![0, 1]];
        let ai = inverse(&f, &a).unwrap();
        assert_eq!(mul(&f, &a, &ai), identity(2));
        let s = vec![vec![1, 1], vec![2, 2]];
        assert!(inverse(&f, &s).is_none());
        let k = left_kernel(&f, &s);
        assert_eq!(k.len(), 1);
        assert!(vec_mul(&f, &k[0], &s).iter().all(|&x| x == 0));
    }

    #[test]
    fn coordinates_in_basis() {
        let f = GaloisField::new(4).unwrap();
        let basis = vec![vec![1, 2, 0], vec![0, 1, 3]];
        let v = vec_add(&f, &vec_scale(&f, 2, &basis[0]), &vec_scale(&f, 3, &basis[1]));
        assert_eq!(coordinates(&f, &basis, &v), Some(vec![2, 3]));
        assert_eq!(coordinates(&f, &basis, &[0, 0, 1]), None);
    }

    #[test]
    fn gl_orders() {
        assert_eq!(gl_order(2, 2), 6u32.into());
        assert_eq!(gl_order(3, 2), 168u32.into());
        assert_eq!(gl_order(2, 3), 48u32.into());
    }
}
