//! Property checks shared by the proptest suites and the acceptance run.
//! Each takes a seed and returns a description of the first violation.
#![allow(dead_code)]

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rank3_closure::affine::detect_affine;
use rank3_closure::aut::{oracle_two_closure, refine, ColoredConfiguration, OrderedPartition};
use rank3_closure::closure::qform::{propagate_form, validate_form, Propagation};
use rank3_closure::closure::small::field_coordinates;
use rank3_closure::closure::{two_closure, verify_candidate, OracleMode};
use rank3_closure::gf::{field_from_element, prime_field_structure, tuple_intertwiner, MatrixModP, ZECH_ZERO};
use rank3_closure::perm::{two_orbits, Permutation, PermutationGroup};
use rank3_closure::zoo::{self, FormType, InstanceDescriptor};
use rank3_closure::Limits;

pub type Check = Result<(), String>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_permutation(n: usize, rng: &mut ChaCha8Rng) -> Permutation {
    let mut images: Vec<usize> = (0..n).collect();
    images.shuffle(rng);
    Permutation::from_images(images).unwrap()
}

/// The same group on relabelled points.
pub fn relabel(g: &PermutationGroup, rng: &mut ChaCha8Rng) -> PermutationGroup {
    let s = random_permutation(g.degree(), rng);
    PermutationGroup::new(g.degree(), g.generators().iter().map(|x| x.conjugate_by(&s)).collect()).unwrap()
}

/// Suite instances of degree at most 100.
pub fn small_suite() -> Vec<InstanceDescriptor> {
    vec![
        zoo::johnson_pairs(5).unwrap(),
        zoo::johnson_pairs(6).unwrap(),
        zoo::imprimitive(zoo::Base::Agl15, 3).unwrap(),
        zoo::imprimitive(zoo::Base::Sym(3), 2).unwrap(),
        zoo::product(zoo::Base::Agl15).unwrap(),
        zoo::product(zoo::Base::Sym(4)).unwrap(),
        zoo::paley(9).unwrap(),
        zoo::paley(13).unwrap(),
        zoo::paley(17).unwrap(),
        zoo::clebsch().unwrap(),
        zoo::affine_polar(FormType::Minus, 2, 2).unwrap(),
        zoo::affine_polar(FormType::Plus, 2, 2).unwrap(),
        zoo::bilinear(2, 3).unwrap(),
        zoo::affine_polar(FormType::Plus, 3, 2).unwrap(),
        zoo::affine_polar(FormType::Plus, 2, 3).unwrap(),
    ]
}

/// Orders by breadth-first closure under multiplication, independent of the stabiliser chain.
fn enumerate_order(n: usize, gens: &[Permutation]) -> usize {
    let id = Permutation::identity(n);
    let mut seen: HashSet<Permutation> = HashSet::from([id.clone()]);
    let mut frontier = vec![id];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = x.then(g);
            if seen.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    seen.len()
}

pub fn bsgs_matches_enumeration(seed: u64) -> Check {
    let mut r = rng(seed);
    let n = r.gen_range(2..=7);
    let k = r.gen_range(1..=3);
    let mut gens: Vec<Permutation> = (0..k).map(|_| random_permutation(n, &mut r)).collect();
    if r.gen_bool(0.3) {
        // keep some small groups in the mix
        gens.truncate(1);
    }
    let g = PermutationGroup::new(n, gens.clone()).map_err(|e| e.to_string())?;
    let expected = enumerate_order(n, &gens);
    let found = g.order_u64().unwrap() as usize;
    if found != expected {
        return Err(format!("{gens:?}: chain says {found}, enumeration {expected}"));
    }
    let x = random_permutation(n, &mut r);
    let mut elements = HashSet::new();
    let id = Permutation::identity(n);
    elements.insert(id.clone());
    let mut frontier = vec![id];
    while let Some(y) = frontier.pop() {
        for h in &gens {
            let z = y.then(h);
            if elements.insert(z.clone()) {
                frontier.push(z);
            }
        }
    }
    if g.has(&x) != elements.contains(&x) {
        return Err(format!("membership of {x} disagrees"));
    }
    Ok(())
}

fn pick_instance(r: &mut ChaCha8Rng) -> PermutationGroup {
    let suite = small_suite();
    let inst = &suite[r.gen_range(0..suite.len())];
    relabel(&inst.group, r)
}

/// `oracle(two_closure(G)) = two_closure(G)`, and the dispatcher output verifies.
pub fn closure_is_idempotent(seed: u64) -> Check {
    let mut r = rng(seed);
    let g = pick_instance(&mut r);
    let l = Limits::default();
    let report = two_closure(&g, OracleMode::Off, 256, &l).map_err(|e| e.to_string())?;
    let h = report.group.ok_or("unresolved")?;
    let again = oracle_two_closure(&h, &l).map_err(|e| e.to_string())?;
    if !again.same_group(&h) {
        return Err(format!("closure of order {} closes to order {}", h.order(), again.order()));
    }
    Ok(())
}

pub fn dispatcher_output_verifies(seed: u64) -> Check {
    let mut r = rng(seed);
    let g = pick_instance(&mut r);
    let report = two_closure(&g, OracleMode::Off, 256, &Limits::default()).map_err(|e| e.to_string())?;
    let h = report.group.ok_or("unresolved")?;
    if !report.verified || !verify_candidate(&g, &h).map_err(|e| e.to_string())? {
        return Err(format!("{:?} output does not verify", report.chosen));
    }
    Ok(())
}

pub fn refinement_is_idempotent(seed: u64) -> Check {
    let mut r = rng(seed);
    let g = pick_instance(&mut r);
    let n = g.degree();
    let config = ColoredConfiguration::of_group(&g, &Limits::default()).map_err(|e| e.to_string())?;
    // a random ordered partition with up to four cells
    let k = r.gen_range(1..=4usize);
    let mut cells = vec![Vec::new(); k];
    for v in 0..n {
        cells[r.gen_range(0..k)].push(v);
    }
    cells.retain(|c| !c.is_empty());
    let p = OrderedPartition::from_cells(n, cells);
    let once = refine(&config, &p);
    let twice = refine(&config, &once);
    if once != twice {
        return Err("second refinement split further".into());
    }
    for cell in p.as_sets() {
        // refinement only splits: every new cell lies inside an old one
        for new in once.cells() {
            let inside = new.iter().filter(|v| cell.contains(v)).count();
            if inside != 0 && inside != new.len() {
                return Err("refinement merged cells".into());
            }
        }
    }
    Ok(())
}

fn random_matrix(p: u32, d: usize, r: &mut ChaCha8Rng) -> MatrixModP {
    MatrixModP::from_flat(p, d, (0..d * d).map(|_| r.gen_range(0..p)).collect())
}

/// `c^zech(i) = 1 + c^i` for a field generated by a random matrix.
pub fn zech_identity(seed: u64) -> Check {
    let mut r = rng(seed);
    let (p, d) = [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (5, 2), (7, 2), (2, 6)][r.gen_range(0..8)];
    let fs = loop {
        if let Some(fs) = field_from_element(&random_matrix(p, d, &mut r), 1) {
            break fs;
        }
    };
    let id = MatrixModP::identity(p, d);
    for i in 0..fs.q() - 1 {
        let sum = id.add(fs.power(i as u64));
        let z = fs.zech(i);
        let ok = if z == ZECH_ZERO { sum.is_zero() } else { fs.power(z as u64) == &sum };
        if !ok {
            return Err(format!("zech({i}) = {z} fails over GF({})", fs.q()));
        }
    }
    Ok(())
}

/// The intertwiner of `g` and `X^-1 g X` is invertible and satisfies `g Y = Y h`.
pub fn intertwiner_is_exact(seed: u64) -> Check {
    let mut r = rng(seed);
    let p = [2, 3, 5][r.gen_range(0..3)];
    let d = r.gen_range(1..=4);
    let x = loop {
        let m = random_matrix(p, d, &mut r);
        if m.is_invertible() {
            break m;
        }
    };
    let g: Vec<MatrixModP> = (0..r.gen_range(1..=3)).map(|_| random_matrix(p, d, &mut r)).collect();
    let h: Vec<MatrixModP> = g.iter().map(|m| m.conjugate_by(&x).unwrap()).collect();
    let (y, complete) = tuple_intertwiner(&g, &h, &Limits::default());
    let Some(y) = y else {
        return Err(format!("no intertwiner found (complete search: {complete})"));
    };
    if !y.is_invertible() || g.iter().zip(&h).any(|(a, b)| a.mul(&y) != y.mul(b)) {
        return Err("intertwiner is wrong".into());
    }
    Ok(())
}

/// Every table that validates satisfies `κ(v^g) = λ κ(v)^(p^α)` at every point.
pub fn propagation_witness_holds(seed: u64) -> Check {
    let mut r = rng(seed);
    let insts = [
        zoo::clebsch().unwrap(),
        zoo::affine_polar(FormType::Minus, 2, 2).unwrap(),
        zoo::affine_polar(FormType::Plus, 2, 2).unwrap(),
        zoo::affine_polar(FormType::Plus, 2, 3).unwrap(),
        zoo::affine_polar(FormType::Plus, 3, 2).unwrap(),
    ];
    let inst = &insts[r.gen_range(0..insts.len())];
    let g = relabel(&inst.group, &mut r);
    let l = Limits::default();
    let frame = detect_affine(&g, &l).map_err(|e| e.to_string())?.ok_or("not affine")?;
    let fs = prime_field_structure(frame.p(), frame.d());
    let cs = field_coordinates(&frame, &fs).map_err(|e| e.to_string())?;
    let f = cs.field();
    let o = two_orbits(&g).map_err(|e| e.to_string())?;
    let q = f.q() as u64;
    let iso = rank3_closure::closure::qform::isotropic_orbit(&o, q).ok_or("no isotropic orbit")?;
    let isotropic: Vec<bool> = (0..g.degree()).map(|x| x == 0 || o.color(0, x) == iso).collect();
    let seed_pt = (0..g.degree()).find(|&x| !isotropic[x]).unwrap();
    let (gens, _) = rank3_closure::closure::qform::reduce_generators(frame.g0(), 6, &l);
    // every guess tuple for the prime field: λ ∈ F^×, α = 0
    let units: Vec<u32> = f.units().collect();
    let mut checked = 0;
    let total = units.len().pow(gens.len() as u32).min(4096);
    for code in 0..total {
        let mut c = code;
        let guesses: Vec<Option<(u32, u32)>> = gens
            .iter()
            .map(|_| {
                let l = units[c % units.len()];
                c /= units.len();
                Some((l, 0))
            })
            .collect();
        let Propagation::Table(t) = propagate_form(f, &gens, &guesses, &isotropic, seed_pt, 1) else { continue };
        let Some(values) = t.into_iter().collect::<Option<Vec<u32>>>() else { continue };
        let v = validate_form(&cs, &gens, &values);
        if !v.nondegenerate {
            continue;
        }
        let w = v.witness.ok_or("nondegenerate table without witness")?;
        for (gen, &(lambda, alpha)) in gens.iter().zip(&w.factors) {
            for pt in 0..g.degree() {
                if values[gen.image(pt)] != f.mul(lambda, f.frobenius(values[pt], alpha)) {
                    return Err(format!("witness fails at point {pt}"));
                }
            }
        }
        checked += 1;
    }
    if checked == 0 {
        return Err("no guess produced a valid form".into());
    }
    Ok(())
}
