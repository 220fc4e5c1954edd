//! Acceptance run: one PASS/FAIL line per criterion, details indented below.
//! All comparisons are exact; time budgets are per instance.

mod common;

use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rank3_closure::affine::detect_affine;
use rank3_closure::closure::{qform, small, tensor, two_closure, OracleMode, Resolution};
use rank3_closure::perm::{two_orbits, PermutationGroup};
use rank3_closure::zoo::{self, Base, FormType};
use rank3_closure::Limits;

/// Orders must agree exactly.
const ORDER_TOLERANCE: u32 = 0;
const ORACLE_BUDGET: Duration = Duration::from_secs(120);
const CROSS_BRANCH_BUDGET: Duration = Duration::from_secs(300);
const PROPERTY_CASES: u64 = 200;

struct Ledger {
    lines: Vec<String>,
    failed: Vec<String>,
}

impl Ledger {
    fn criterion(&mut self, name: &str, details: Vec<(bool, String)>) {
        let ok = details.iter().all(|(ok, _)| *ok);
        self.lines.push(format!("{} {name}", if ok { "PASS" } else { "FAIL" }));
        for (ok, d) in details {
            self.lines.push(format!("    {} {d}", if ok { "ok  " } else { "FAIL" }));
        }
        if !ok {
            self.failed.push(name.to_string());
        }
    }
}

fn exact(found: &BigUint, expected: u64) -> bool {
    let diff = if *found > BigUint::from(expected) { found - expected } else { BigUint::from(expected) - found };
    diff <= BigUint::from(ORDER_TOLERANCE)
}

fn oracle_equivalence() -> Vec<(bool, String)> {
    let l = Limits::default();
    let cases: Vec<(&str, PermutationGroup, u64, &[&str])> = vec![
        ("Petersen", zoo::johnson_pairs(5).unwrap().group, 120, &["almost-simple"]),
        ("F20 wr S3", zoo::imprimitive(Base::Agl15, 3).unwrap().group, 10_368_000, &["imprimitive"]),
        ("F20 pwr S2", zoo::product(Base::Agl15).unwrap().group, 28_800, &["product"]),
        ("Paley(13)", zoo::paley(13).unwrap().group, 78, &["small"]),
        ("Paley(9)", zoo::paley(9).unwrap().group, 72, &["small"]),
        ("Clebsch", zoo::clebsch().unwrap().group, 1920, &["small", "qform"]),
        ("H_2(2,3)", zoo::bilinear(2, 3).unwrap().group, 64_512, &["tensor"]),
        ("VO4-(2)", zoo::affine_polar(FormType::Minus, 2, 2).unwrap().group, 1920, &["qform"]),
        ("VO4+(2)", zoo::affine_polar(FormType::Plus, 2, 2).unwrap().group, 1152, &["qform"]),
    ];
    cases
        .into_iter()
        .map(|(name, g, expected, branches)| {
            let t = Instant::now();
            let r = two_closure(&g, OracleMode::On, 256, &l);
            let elapsed = t.elapsed();
            match r {
                Ok(r) => {
                    let order = r.order_big().cloned().unwrap_or_default();
                    let oracle: BigUint = r.oracle_order.as_deref().unwrap_or("0").parse().unwrap();
                    let chosen = r.chosen.clone().unwrap_or_default();
                    let ok = exact(&order, expected)
                        && exact(&oracle, expected)
                        && branches.contains(&chosen.as_str())
                        && r.verified
                        && elapsed <= ORACLE_BUDGET;
                    (ok, format!("{name}: order {order}, oracle {oracle}, branch {chosen}, expected {expected} via {branches:?}, {elapsed:.2?}"))
                }
                Err(e) => (false, format!("{name}: {e}")),
            }
        })
        .collect()
}

fn cross_branch() -> Vec<(bool, String)> {
    let l = Limits::default();
    [("VO4+(3)", zoo::affine_polar(FormType::Plus, 2, 3).unwrap()), ("H_3(2,2)", zoo::bilinear(3, 2).unwrap())]
        .into_iter()
        .map(|(name, inst)| {
            let t = Instant::now();
            let g = &inst.group;
            let o = two_orbits(g).unwrap();
            let frame = detect_affine(g, &l).unwrap();
            let tn = tensor::run_tensor(g, &o, frame.as_ref(), &l);
            let qf = qform::run_qform(g, &o, frame.as_ref(), &l);
            let elapsed = t.elapsed();
            match (tn, qf) {
                (Ok(a), Ok(b)) => {
                    let mutual = a.group.generators().iter().all(|x| b.group.has(x))
                        && b.group.generators().iter().all(|x| a.group.has(x));
                    (
                        mutual && elapsed <= CROSS_BRANCH_BUDGET,
                        format!("{name}: tensor {} / qform {}, mutual membership {mutual}, {elapsed:.2?}", a.group.order(), b.group.order()),
                    )
                }
                (a, b) => (false, format!("{name}: tensor {:?} / qform {:?}", a.err(), b.err())),
            }
        })
        .collect()
}

fn subdegree_formulas() -> Vec<(bool, String)> {
    let mut out = Vec::new();
    let check = |name: String, g: &PermutationGroup, expected: (u64, u64)| {
        let o = two_orbits(g).unwrap();
        let mut found: Vec<u64> = o.subdegrees().iter().map(|&s| s as u64).collect();
        found.sort_unstable();
        let mut want = vec![expected.0, expected.1];
        want.sort_unstable();
        (found == want, format!("{name}: computed {found:?}, formula {want:?}"))
    };
    for (q, m) in [(2u64, 3u32), (3, 3), (2, 4)] {
        // (q+1)(q^m-1) and q(q^m-1)(q^(m-1)-1)
        let f = ((q + 1) * (q.pow(m) - 1), q * (q.pow(m) - 1) * (q.pow(m - 1) - 1));
        out.push(check(format!("bilinear({q},{m})"), &zoo::bilinear(q, m as usize).unwrap().group, f));
    }
    for (eps, m, q) in [(FormType::Minus, 2u32, 2u64), (FormType::Plus, 2, 3), (FormType::Plus, 3, 2)] {
        let e = eps.sign();
        let qm = q.pow(m) as i64;
        let qm1 = q.pow(m - 1) as i64;
        // (q^m - ε)(q^(m-1) + ε) and q^(m-1)(q-1)(q^m - ε)
        let f = (((qm - e) * (qm1 + e)) as u64, (qm1 * (q as i64 - 1) * (qm - e)) as u64);
        let sign = if e > 0 { "+" } else { "-" };
        out.push(check(format!("affine_polar({sign},{m},{q})"), &zoo::affine_polar(eps, m as usize, q).unwrap().group, f));
    }
    out
}

fn property_suites() -> Vec<(bool, String)> {
    let suites: [(&str, fn(u64) -> common::Check); 7] = [
        ("stabiliser chain order vs enumeration", common::bsgs_matches_enumeration),
        ("closure idempotent under the oracle", common::closure_is_idempotent),
        ("dispatcher output verifies", common::dispatcher_output_verifies),
        ("refinement idempotent", common::refinement_is_idempotent),
        ("Zech table identity", common::zech_identity),
        ("tuple intertwiner exact", common::intertwiner_is_exact),
        ("propagated form satisfies witness", common::propagation_witness_holds),
    ];
    suites
        .iter()
        .map(|(name, f)| {
            let failures: Vec<String> =
                (0..PROPERTY_CASES).filter_map(|s| f(0xacce_0000 + s).err().map(|e| format!("seed {s}: {e}"))).collect();
            (
                failures.is_empty(),
                format!("{name}: {}/{PROPERTY_CASES} cases{}", PROPERTY_CASES - failures.len() as u64,
                    failures.first().map(|f| format!(", first failure {f}")).unwrap_or_default()),
            )
        })
        .collect()
}

fn negative_paths() -> Vec<(bool, String)> {
    let l = Limits::default();
    let mut out = Vec::new();
    let dir = std::env::temp_dir().join(format!("rank3-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let c5 = dir.join("c5.txt");
    std::fs::write(&c5, "5\n(0 1 2 3 4)\n").unwrap();
    let status = Command::new(env!("CARGO_BIN_EXE_rank3")).arg("closure").arg(&c5).output().unwrap().status;
    out.push((status.code() == Some(3), format!("rank 5 input: exit code {:?}", status.code())));

    for (name, g) in [
        ("Petersen", zoo::johnson_pairs(5).unwrap().group),
        ("F20 wr S3", zoo::imprimitive(Base::Agl15, 3).unwrap().group),
        ("J(7,2)", zoo::johnson_pairs(7).unwrap().group),
    ] {
        let o = two_orbits(&g).unwrap();
        let frame = detect_affine(&g, &l).unwrap();
        let results = [
            small::run_small(&g, &o, frame.as_ref(), &l).is_err(),
            tensor::run_tensor(&g, &o, frame.as_ref(), &l).is_err(),
            qform::run_qform(&g, &o, frame.as_ref(), &l).is_err(),
        ];
        out.push((results.iter().all(|&x| x), format!("{name}: small/tensor/qform failures {results:?}")));
    }

    let petersen = zoo::johnson_pairs(5).unwrap().group;
    let r = two_closure(&petersen, OracleMode::Auto, 5, &l).unwrap();
    out.push((
        r.resolution == Resolution::Unresolved && r.group.is_none() && !r.verified,
        format!("Petersen above threshold 5: {:?}, order {:?}", r.resolution, r.order),
    ));
    let file = dir.join("petersen.txt");
    let zoo_status =
        Command::new(env!("CARGO_BIN_EXE_rank3")).args(["zoo", "petersen", "-o"]).arg(&file).status().unwrap();
    let status = Command::new(env!("CARGO_BIN_EXE_rank3"))
        .args(["closure", "--threshold", "5"])
        .arg(&file)
        .output()
        .unwrap()
        .status;
    out.push((zoo_status.success() && status.code() == Some(4), format!("CLI above threshold: exit code {:?}", status.code())));
    std::fs::remove_dir_all(&dir).ok();
    out
}

#[test]
fn acceptance() {
    let mut ledger = Ledger { lines: Vec::new(), failed: Vec::new() };
    ledger.criterion("1 oracle equivalence", oracle_equivalence());
    ledger.criterion("2 cross-branch consistency at n = 81", cross_branch());
    ledger.criterion("3 subdegree formulas", subdegree_formulas());
    ledger.criterion("4 property suites", property_suites());
    ledger.criterion("5 negative paths", negative_paths());
    println!("{}", ledger.lines.join("\n"));
    assert!(ledger.failed.is_empty(), "failed criteria: {:?}", ledger.failed);
}
