use crate::error::{Error, Result};

/// `(p, k)` with `n = p^k`, if `n` is a prime power.
pub fn prime_power(n: u64) -> Option<(u64, u32)> {
    if n < 2 {
        return None;
    }
    let p = (2..).find(|d| n % d == 0 || d * d > n).map(|d| if n % d == 0 { d } else { n }).unwrap();
    let (mut m, mut k) = (n, 0);
    while m % p == 0 {
        m /= p;
        k += 1;
    }
    (m == 1).then_some((p, k))
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// The finite field GF(p^k).
///
/// Elements are coded as integers `0..q` whose base-`p` digits are the
/// coefficients of a polynomial in a primitive root `x`; addition is digitwise
/// and multiplication goes through discrete logarithms, so `code(x^i) = exp[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaloisField {
    p: u32,
    k: u32,
    q: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
    add_table: Option<Vec<u32>>,
}

const TABLE_LIMIT: u32 = 256;

impl GaloisField {
    /// GF(q) with the lexicographically first primitive polynomial.
    pub fn new(q: u64) -> Result<Self> {
        let (p, k) = prime_power(q).ok_or_else(|| Error::InvalidParameters(format!("{q} is not a prime power")))?;
        if q > 1 << 20 {
            return Err(Error::InvalidParameters(format!("field of order {q} is too large")));
        }
        let (p, q32) = (p as u32, q as u32);
        if k == 1 {
            // x = smallest primitive root.
            let root = (1..q32).find(|&g| Self::mult_order_mod(g, p) == p - 1).unwrap();
            let mut poly = vec![(p - root) % p];
            poly.push(1);
            return Self::from_minimal_polynomial(p, &poly).ok_or_else(|| Error::Inconsistent("no primitive root".into()));
        }
        for tail in 0..q32 {
            let mut poly: Vec<u32> = (0..k).map(|i| tail / p.pow(i) % p).collect();
            if poly[0] == 0 {
                continue;
            }
            poly.push(1);
            if let Some(f) = Self::from_minimal_polynomial(p, &poly) {
                return Ok(f);
            }
        }
        Err(Error::Inconsistent(format!("no primitive polynomial of degree {k} over GF({p})")))
    }

    fn mult_order_mod(g: u32, p: u32) -> u32 {
        let (mut x, mut o) = (g % p, 1);
        while x != 1 {
            x = x * g % p;
            o += 1;
            if o > p {
                return 0;
            }
        }
        o
    }

    /// The field built from a monic polynomial (`poly[i]` = coefficient of `x^i`),
    /// or `None` unless `x` has order `p^k - 1` modulo it.
    pub fn from_minimal_polynomial(p: u32, poly: &[u32]) -> Option<Self> {
        let k = poly.len() as u32 - 1;
        let q = p.pow(k);
        let digits = |c: u32| -> Vec<u32> { (0..k).map(|i| c / p.pow(i) % p).collect() };
        let code = |d: &[u32]| -> u32 { d.iter().rev().fold(0, |acc, &x| acc * p + x) };
        let mut exp = Vec::with_capacity(q as usize - 1);
        let mut log = vec![u32::MAX; q as usize];
        let mut cur = 1u32;
        for i in 0..q - 1 {
            if log[cur as usize] != u32::MAX {
                return None;
            }
            log[cur as usize] = i;
            exp.push(cur);
            // multiply by x: shift digits, reduce by the monic polynomial
            let d = digits(cur);
            let top = d[k as usize - 1];
            let mut next = vec![0u32; k as usize];
            for j in (1..k as usize).rev() {
                next[j] = d[j - 1];
            }
            for j in 0..k as usize {
                next[j] = (next[j] + p * p - top * poly[j] % p) % p;
            }
            cur = code(&next);
        }
        if cur != 1 {
            return None;
        }
        let mut f = GaloisField { p, k, q, exp, log, add_table: None };
        if q <= TABLE_LIMIT {
            let mut t = vec![0; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    t[(a * q + b) as usize] = f.add_digits(a, b);
                }
            }
            f.add_table = Some(t);
        }
        Some(f)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    /// Degree over the prime field.
    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Primitive element.
    pub fn primitive(&self) -> u32 {
        self.exp[1 % self.exp.len()]
    }

    /// `primitive^i` (exponent taken modulo `q - 1`).
    pub fn pow_primitive(&self, i: u64) -> u32 {
        self.exp[(i % (self.q as u64 - 1)) as usize]
    }

    /// Discrete logarithm of a nonzero element.
    pub fn log(&self, a: u32) -> Option<u32> {
        (a != 0).then(|| self.log[a as usize])
    }

    fn add_digits(&self, mut a: u32, mut b: u32) -> u32 {
        let (mut out, mut place) = (0, 1);
        for _ in 0..self.k {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        match &self.add_table {
            Some(t) => t[(a * self.q + b) as usize],
            None => self.add_digits(a, b),
        }
    }

    pub fn neg(&self, a: u32) -> u32 {
        self.mul(a, self.neg_one())
    }

    pub fn neg_one(&self) -> u32 {
        if self.p == 2 {
            1
        } else {
            self.exp[((self.q - 1) / 2) as usize]
        }
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let s = self.log[a as usize] as u64 + self.log[b as usize] as u64;
        self.exp[(s % (self.q as u64 - 1)) as usize]
    }

    pub fn inv(&self, a: u32) -> Option<u32> {
        (a != 0).then(|| self.exp[((self.q - 1 - self.log[a as usize]) % (self.q - 1)) as usize])
    }

    pub fn div(&self, a: u32, b: u32) -> Option<u32> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        self.exp[((self.log[a as usize] as u64 * e) % (self.q as u64 - 1)) as usize]
    }

    /// `a^(p^i)`.
    pub fn frobenius(&self, a: u32, i: u32) -> u32 {
        self.pow(a, (self.p as u64).pow(i % self.k))
    }

    pub fn is_square(&self, a: u32) -> bool {
        a == 0 || self.p == 2 || self.log[a as usize] % 2 == 0
    }

    /// The element `c * 1` for an integer `c`.
    pub fn from_int(&self, c: i64) -> u32 {
        c.rem_euclid(self.p as i64) as u32
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.q
    }

    pub fn units(&self) -> impl Iterator<Item = u32> + '_ {
        self.exp.iter().copied()
    }
}
