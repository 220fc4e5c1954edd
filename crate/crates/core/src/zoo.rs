//! Named rank 3 groups with known orbit structure.

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::gf::linalg::{self, Mat};
use crate::gf::{is_prime, CoordinateSystem, GaloisField};
use crate::perm::{two_orbits, Permutation, PermutationGroup};

/// A constructed instance together with what is known about it.
#[derive(Debug, Clone)]
pub struct InstanceDescriptor {
    pub name: String,
    pub parameters: String,
    pub group: PermutationGroup,
    /// `(smaller, larger)` subdegrees predicted by formula.
    pub subdegrees: (usize, usize),
    /// Order of the 2-closure, where it is known in closed form.
    pub closure_order: Option<BigUint>,
}

impl InstanceDescriptor {
    pub fn degree(&self) -> usize {
        self.group.degree()
    }

    fn checked(
        name: &str,
        parameters: String,
        group: PermutationGroup,
        mut subdegrees: (usize, usize),
        closure_order: Option<BigUint>,
    ) -> Result<Self> {
        if subdegrees.0 > subdegrees.1 {
            subdegrees = (subdegrees.1, subdegrees.0);
        }
        let computed = two_orbits(&group)?.rank3_subdegrees();
        if !group.is_transitive() || computed != Some(subdegrees) {
            return Err(Error::Inconsistent(format!(
                "{name}({parameters}) has subdegrees {computed:?}, expected {subdegrees:?}"
            )));
        }
        Ok(InstanceDescriptor { name: name.into(), parameters, group, subdegrees, closure_order })
    }
}

fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::from(1u32), |a, i| a * BigUint::from(i))
}

fn cycle(n: usize, points: &[usize]) -> Permutation {
    Permutation::from_cycles(n, &[points.to_vec()]).expect("valid cycle")
}

/// A 2-transitive base group for the wreath constructions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Base {
    /// AGL(1, 5), the Frobenius group of order 20.
    Agl15,
    /// The symmetric group of the given degree.
    Sym(usize),
}

impl Base {
    fn degree(self) -> usize {
        match self {
            Base::Agl15 => 5,
            Base::Sym(m) => m,
        }
    }

    fn generators(self) -> Vec<Vec<usize>> {
        match self {
            Base::Agl15 => vec![vec![1, 2, 3, 4, 0], vec![0, 2, 4, 1, 3]],
            Base::Sym(m) => {
                let mut out = vec![(0..m).map(|i| (i + 1) % m).collect::<Vec<_>>()];
                if m > 2 {
                    let mut t: Vec<usize> = (0..m).collect();
                    t.swap(0, 1);
                    out.push(t);
                }
                out
            }
        }
    }

    fn name(self) -> String {
        match self {
            Base::Agl15 => "agl1_5".into(),
            Base::Sym(m) => format!("sym{m}"),
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        if s == "agl1_5" || s == "f20" {
            return Ok(Base::Agl15);
        }
        s.strip_prefix("sym")
            .and_then(|m| m.parse().ok())
            .filter(|&m: &usize| m >= 2)
            .map(Base::Sym)
            .ok_or_else(|| Error::InvalidParameters(format!("unknown base group {s}")))
    }
}

/// `base ≀ Sym(k)` in imprimitive action on `k` blocks.
pub fn imprimitive(base: Base, k: usize) -> Result<InstanceDescriptor> {
    let b = base.degree();
    if k < 2 {
        return Err(Error::InvalidParameters("need at least two blocks".into()));
    }
    let n = b * k;
    let mut gens: Vec<Permutation> = base
        .generators()
        .into_iter()
        .map(|g| Permutation::from_images((0..n).map(|x| if x < b { g[x] } else { x }).collect()).unwrap())
        .collect();
    let shift = |x: usize, by: usize| (x / b + by) % k * b + x % b;
    gens.push(Permutation::from_images((0..n).map(|x| shift(x, 1)).collect())?);
    if k > 2 {
        let swap: Vec<usize> = (0..n).map(|x| if x / b < 2 { (1 - x / b) * b + x % b } else { x }).collect();
        gens.push(Permutation::from_images(swap)?);
    }
    let group = PermutationGroup::new(n, gens)?;
    let closure = num_traits::pow::pow(factorial(b), k) * factorial(k);
    InstanceDescriptor::checked("imprimitive", format!("{},{k}", base.name()), group, (b - 1, n - b), Some(closure))
}

/// `base ↑ Sym(2)` in product action on `q^2` points.
pub fn product(base: Base) -> Result<InstanceDescriptor> {
    let q = base.degree();
    let n = q * q;
    let mut gens: Vec<Permutation> = Vec::new();
    for g in base.generators() {
        gens.push(Permutation::from_images((0..n).map(|x| g[x / q] * q + x % q).collect())?);
    }
    gens.push(Permutation::from_images((0..n).map(|x| (x % q) * q + x / q).collect())?);
    let group = PermutationGroup::new(n, gens)?;
    let closure = factorial(q) * factorial(q) * BigUint::from(2u32);
    InstanceDescriptor::checked("product", base.name(), group, (2 * (q - 1), (q - 1) * (q - 1)), Some(closure))
}

/// Index of the pair `{i, j}` (`i < j`) in lexicographic order.
fn pair_index(t: usize, i: usize, j: usize) -> usize {
    let (i, j) = (i.min(j), i.max(j));
    i * t - i * (i + 1) / 2 + (j - i - 1)
}

/// The alternating group A_t acting on unordered pairs.
pub fn johnson_pairs(t: usize) -> Result<InstanceDescriptor> {
    if t < 5 {
        return Err(Error::InvalidParameters("need t >= 5".into()));
    }
    let n = t * (t - 1) / 2;
    let long: Vec<usize> = if t % 2 == 1 { (0..t).collect() } else { (1..t).collect() };
    let point_gens = [cycle(t, &[0, 1, 2]), cycle(t, &long)];
    let gens = point_gens
        .iter()
        .map(|g| {
            let mut images = vec![0; n];
            for i in 0..t {
                for j in i + 1..t {
                    images[pair_index(t, i, j)] = pair_index(t, g.image(i), g.image(j));
                }
            }
            Permutation::from_images(images).unwrap()
        })
        .collect();
    let group = PermutationGroup::new(n, gens)?;
    let closure = factorial(t);
    InstanceDescriptor::checked("johnson_pairs", t.to_string(), group, (2 * (t - 2), (t - 2) * (t - 3) / 2), Some(closure))
}

fn field(q: u64) -> Result<GaloisField> {
    GaloisField::new(q)
}

/// Affine group on GF(q)^a generated by translations and the given semilinear maps.
fn affine_group(space: &CoordinateSystem, linear: &[(Mat, u32)]) -> Result<PermutationGroup> {
    let mut gens = space.translation_generators();
    gens.extend(linear.iter().map(|(m, fr)| space.semilinear_map(m, *fr)));
    PermutationGroup::new(space.degree(), gens)
}

/// Paley graph group: translations and multiplication by the nonzero squares of GF(q).
pub fn paley(q: u64) -> Result<InstanceDescriptor> {
    if q % 4 != 1 {
        return Err(Error::InvalidParameters(format!("Paley needs q = 1 mod 4, got {q}")));
    }
    let f = field(q)?;
    let w2 = f.pow_primitive(2);
    let e = f.k() as u64;
    let space = CoordinateSystem::standard(f, 1);
    let group = affine_group(&space, &[(vec![vec![w2]], 0)])?;
    let half = (q as usize - 1) / 2;
    let closure = BigUint::from(q * (q - 1) / 2 * e);
    InstanceDescriptor::checked("paley", q.to_string(), group, (half, half), Some(closure))
}

/// The order-320 subgroup GF(16) ⋊ (C5 ⋊ C4) of AΓL_1(16); its orbital graph is the Clebsch graph.
pub fn clebsch() -> Result<InstanceDescriptor> {
    let f = field(16)?;
    let w3 = f.pow_primitive(3);
    let space = CoordinateSystem::standard(f, 1);
    let group = affine_group(&space, &[(vec![vec![w3]], 0), (vec![vec![1]], 1)])?;
    InstanceDescriptor::checked("clebsch", String::new(), group, (5, 10), Some(BigUint::from(1920u32)))
}

/// Generators of GL_n(q): diag(w, 1, ...), a transvection, an n-cycle and a transposition.
fn gl_generators(f: &GaloisField, n: usize) -> Vec<Mat> {
    let mut out = Vec::new();
    let mut diag = linalg::identity(n);
    diag[0][0] = f.primitive();
    out.push(diag);
    if n >= 2 {
        let mut tv = linalg::identity(n);
        tv[0][1] = 1;
        out.push(tv);
        let cyc: Mat = (0..n).map(|i| (0..n).map(|j| u32::from(j == (i + 1) % n)).collect()).collect();
        out.push(cyc);
        if n > 2 {
            let mut sw = linalg::identity(n);
            sw.swap(0, 1);
            out.push(sw);
        }
    }
    out.retain(|m| *m != linalg::identity(n));
    out
}

/// Kronecker product, rows indexed by `i * rows(b) + k`.
pub fn kronecker(f: &GaloisField, a: &Mat, b: &Mat) -> Mat {
    let (ra, rb) = (a.len(), b.len());
    let mut out = linalg::zero(ra * rb, ra * rb);
    for i in 0..ra {
        for j in 0..ra {
            for k in 0..rb {
                for l in 0..rb {
                    out[i * rb + k][j * rb + l] = f.mul(a[i][j], b[k][l]);
                }
            }
        }
    }
    out
}

fn gl_order_u(d: u32, q: u64) -> BigUint {
    linalg::gl_order(d, q)
}

/// Bilinear forms graph group: 2 x m matrices over GF(q) with GL_2(q) ⊗ GL_m(q) acting.
pub fn bilinear(q: u64, m: usize) -> Result<InstanceDescriptor> {
    if m < 2 {
        return Err(Error::InvalidParameters("need m >= 2".into()));
    }
    let f = field(q)?;
    let id2 = linalg::identity(2);
    let idm = linalg::identity(m);
    let mut lin: Vec<(Mat, u32)> = Vec::new();
    for g in gl_generators(&f, 2) {
        lin.push((kronecker(&f, &g, &idm), 0));
    }
    for g in gl_generators(&f, m) {
        lin.push((kronecker(&f, &id2, &g), 0));
    }
    let e = f.k() as u64;
    let space = CoordinateSystem::standard(f, 2 * m);
    let group = affine_group(&space, &lin)?;
    let qm = q.pow(m as u32);
    let small = ((q + 1) * (qm - 1)) as usize;
    let large = (q * (qm - 1) * (qm / q - 1)) as usize;
    let mut closure = BigUint::from(qm * qm) * gl_order_u(2, q) * gl_order_u(m as u32, q) / BigUint::from(q - 1)
        * BigUint::from(e);
    if m == 2 {
        closure *= 2u32;
    }
    InstanceDescriptor::checked("bilinear", format!("{q},{m}"), group, (small, large), Some(closure))
}

/// Sign of a quadratic form: hyperbolic (`+`) or elliptic (`-`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub enum FormType {
    Plus,
    Minus,
}

impl FormType {
    pub fn sign(self) -> i64 {
        match self {
            FormType::Plus => 1,
            FormType::Minus => -1,
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "+" | "plus" => Ok(FormType::Plus),
            "-" | "minus" => Ok(FormType::Minus),
            _ => Err(Error::InvalidParameters(format!("form type must be + or -, got {s}"))),
        }
    }
}

/// `ζ` with `x^2 + x + ζ` irreducible over GF(q).
pub fn anisotropic_constant(f: &GaloisField) -> u32 {
    f.elements()
        .find(|&z| f.elements().all(|x| f.add(f.add(f.mul(x, x), x), z) != 0))
        .expect("an irreducible quadratic exists")
}

/// Standard quadratic form: hyperbolic planes `x_{2i} x_{2i+1}`, the last plane
/// replaced by `x^2 + xy + ζy^2` for type minus.
#[derive(Debug, Clone)]
pub struct StandardForm {
    pub field: GaloisField,
    pub m: usize,
    pub eps: FormType,
    pub zeta: u32,
}

impl StandardForm {
    pub fn new(field: GaloisField, m: usize, eps: FormType) -> Self {
        let zeta = anisotropic_constant(&field);
        StandardForm { field, m, eps, zeta }
    }

    pub fn value(&self, v: &[u32]) -> u32 {
        let f = &self.field;
        let mut s = 0;
        for i in 0..self.m {
            let (x, y) = (v[2 * i], v[2 * i + 1]);
            let term = if i == self.m - 1 && self.eps == FormType::Minus {
                f.add(f.add(f.mul(x, x), f.mul(x, y)), f.mul(self.zeta, f.mul(y, y)))
            } else {
                f.mul(x, y)
            };
            s = f.add(s, term);
        }
        s
    }

    /// Polar form `κ(x+y) - κ(x) - κ(y)`.
    pub fn polar(&self, x: &[u32], y: &[u32]) -> u32 {
        let f = &self.field;
        let s = linalg::vec_add(f, x, y);
        f.sub(f.sub(self.value(&s), self.value(x)), self.value(y))
    }

    /// Reflection (odd q) or orthogonal transvection (even q) in a non-singular vector `v`.
    pub fn reflection(&self, v: &[u32]) -> Mat {
        let f = &self.field;
        let d = 2 * self.m;
        let kv = self.value(v);
        let inv = f.inv(kv).expect("non-singular vector");
        // x -> x - f(x, v) κ(v)^-1 v
        (0..d)
            .map(|i| {
                let mut e = vec![0; d];
                e[i] = 1;
                let c = f.neg(f.mul(self.polar(&e, v), inv));
                linalg::vec_add(f, &e, &linalg::vec_scale(f, c, v))
            })
            .collect()
    }

    /// A 2 x 2 matrix scaling the last plane's form by `mu`.
    pub fn plane_similarity(&self, mu: u32) -> Mat {
        let f = &self.field;
        let q = f.q();
        let plane = |x: u32, y: u32| -> u32 {
            let mut v = vec![0; 2 * self.m];
            v[2 * self.m - 2] = x;
            v[2 * self.m - 1] = y;
            self.value(&v)
        };
        for code in 0..q.pow(4) {
            let m = [code % q, code / q % q, code / q / q % q, code / q / q / q];
            let mat: Mat = vec![vec![m[0], m[1]], vec![m[2], m[3]]];
            if !linalg::is_invertible(f, &mat) {
                continue;
            }
            let ok = (0..q).all(|x| {
                (0..q).all(|y| {
                    let w = linalg::vec_mul(f, &[x, y], &mat);
                    plane(w[0], w[1]) == f.mul(mu, plane(x, y))
                })
            });
            if ok {
                return mat;
            }
        }
        panic!("no similarity of the final plane");
    }

    /// Similarity with multiplier `mu`: fixes each `e_i`, scales each `f_i`
    /// (the anisotropic plane, if any, by a brute-force 2 x 2 block).
    pub fn similarity(&self, mu: u32) -> Mat {
        let d = 2 * self.m;
        let mut s = linalg::identity(d);
        for i in 0..self.m {
            if i == self.m - 1 && self.eps == FormType::Minus {
                let b = self.plane_similarity(mu);
                for r in 0..2 {
                    for c in 0..2 {
                        s[d - 2 + r][d - 2 + c] = b[r][c];
                    }
                }
            } else {
                s[2 * i + 1][2 * i + 1] = mu;
            }
        }
        s
    }

    /// Number of nonzero singular vectors.
    pub fn singular_count(&self) -> u64 {
        let q = self.field.q() as u64;
        let m = self.m as u32;
        let e = self.eps.sign();
        ((q.pow(m) as i64 - e) * (q.pow(m - 1) as i64 + e)) as u64
    }
}

/// Order of the general orthogonal group GO^ε_{2m}(q).
pub fn go_order(eps: FormType, m: u32, q: u64) -> BigUint {
    let qb = BigUint::from(q);
    let qm = num_traits::pow::pow(qb.clone(), m as usize);
    let first = match eps {
        FormType::Plus => qm - 1u32,
        FormType::Minus => qm + 1u32,
    };
    let mut o = BigUint::from(2u32) * num_traits::pow::pow(qb.clone(), (m * (m - 1)) as usize) * first;
    for i in 1..m {
        o *= num_traits::pow::pow(qb.clone(), 2 * i as usize) - 1u32;
    }
    o
}

/// Affine polar graph group: translations and the similarities of the standard form,
/// with isometries generated by reflections or transvections.
pub fn affine_polar(eps: FormType, m: usize, q: u64) -> Result<InstanceDescriptor> {
    if m < 2 {
        return Err(Error::InvalidParameters("need m >= 2".into()));
    }
    let f = field(q)?;
    let form = StandardForm::new(f.clone(), m, eps);
    let space = CoordinateSystem::standard(f.clone(), 2 * m);
    let d = 2 * m;
    let mut lin: Vec<(Mat, u32)> = Vec::new();
    for code in 1..space.degree() {
        let v = space.decode(code);
        if form.value(&v) == 1 {
            lin.push((form.reflection(&v), 0));
        }
    }
    // O+_4(2) is not generated by transvections; add coordinate isometries.
    let hyperbolic_planes = if eps == FormType::Plus { m } else { m - 1 };
    if hyperbolic_planes >= 1 {
        let mut flip = linalg::identity(d);
        flip.swap(0, 1);
        lin.push((flip, 0));
    }
    if hyperbolic_planes >= 2 {
        let mut swap = linalg::identity(d);
        swap.swap(0, 2);
        swap.swap(1, 3);
        lin.push((swap, 0));
    }
    if q > 2 {
        let mut scalar = linalg::identity(d);
        for (i, row) in scalar.iter_mut().enumerate() {
            row[i] = f.primitive();
        }
        lin.push((scalar, 0));
        lin.push((form.similarity(f.primitive()), 0));
    }
    // Reflections in vectors of value 1 generate the isometry group; add them greedily.
    let mut gens = space.translation_generators();
    let mut group = PermutationGroup::new(space.degree(), gens.clone())?;
    for (mat, fr) in lin {
        let g = space.semilinear_map(&mat, fr);
        if group.add_generator(g.clone()) {
            gens.push(g);
        }
    }
    let group = PermutationGroup::new(space.degree(), gens)?;
    let qm = q.pow(m as u32);
    let (small, large) = match eps {
        FormType::Plus => ((qm - 1) * (qm / q + 1), qm / q * (q - 1) * (qm - 1)),
        FormType::Minus => ((qm + 1) * (qm / q - 1), qm / q * (q - 1) * (qm + 1)),
    };
    let closure = BigUint::from(q.pow(2 * m as u32)) * go_order(eps, m as u32, q) * BigUint::from(q - 1)
        * BigUint::from(f.k() as u64);
    let sign = if eps == FormType::Plus { "+" } else { "-" };
    InstanceDescriptor::checked(
        "affine_polar",
        format!("{sign},{m},{q}"),
        group,
        (small as usize, large as usize),
        Some(closure),
    )
}

/// Looks up an instance by CLI name and comma- or space-separated parameters.
pub fn by_name(name: &str, params: &[String]) -> Result<InstanceDescriptor> {
    let num = |i: usize| -> Result<u64> {
        params
            .get(i)
            .ok_or_else(|| Error::InvalidParameters(format!("{name}: missing parameter {}", i + 1)))?
            .parse()
            .map_err(|_| Error::InvalidParameters(format!("{name}: parameter {} is not a number", i + 1)))
    };
    match name {
        "imprimitive" => {
            let base = Base::parse(params.first().map(String::as_str).unwrap_or("agl1_5"))?;
            imprimitive(base, num(1).unwrap_or(3) as usize)
        }
        "product" => product(Base::parse(params.first().map(String::as_str).unwrap_or("agl1_5"))?),
        "johnson_pairs" | "petersen" => johnson_pairs(if name == "petersen" { 5 } else { num(0)? as usize }),
        "paley" => paley(num(0)?),
        "clebsch" => clebsch(),
        "bilinear" => bilinear(num(0)?, num(1)? as usize),
        "affine_polar" => {
            let eps = FormType::parse(params.first().map(String::as_str).unwrap_or(""))?;
            let q = num(2)?;
            if !is_prime(q) && crate::gf::prime_power(q).is_none() {
                return Err(Error::InvalidParameters(format!("{q} is not a prime power")));
            }
            affine_polar(eps, num(1)? as usize, q)
        }
        _ => Err(Error::InvalidParameters(format!("unknown instance {name}"))),
    }
}

/// Names accepted by [`by_name`].
pub const NAMES: &[&str] =
    &["imprimitive", "product", "johnson_pairs", "petersen", "paley", "clebsch", "bilinear", "affine_polar"];
