use std::collections::BTreeMap;
use std::str::FromStr;

use num_bigint::BigUint;
use serde::Serialize;

use super::{nonaffine, qform, small, tensor, Branch, BranchResult, Candidate};
use crate::affine::detect_affine;
use crate::aut::oracle_two_closure;
use crate::error::{Error, Result};
use crate::perm::{OrbitalStructure, PermutationGroup};
use crate::Limits;

/// When to run the automorphism search alongside the branches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OracleMode {
    On,
    Off,
    /// Only up to the degree threshold.
    #[default]
    Auto,
}

impl FromStr for OracleMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "on" => Ok(OracleMode::On),
            "off" => Ok(OracleMode::Off),
            "auto" => Ok(OracleMode::Auto),
            _ => Err(Error::InvalidParameters(format!("oracle mode must be on, off or auto, not {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Resolution {
    Resolved,
    Unresolved,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BranchReport {
    /// `ok`, `failed` or `rejected` (output did not pass verification).
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClosureReport {
    pub degree: usize,
    pub rank: usize,
    pub subdegrees: Vec<usize>,
    pub branches: BTreeMap<String, BranchReport>,
    pub chosen: Option<String>,
    pub order: Option<String>,
    pub generators: Vec<Vec<usize>>,
    pub verified: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_order: Option<String>,
    pub resolution: Resolution,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub diagnostics: Vec<String>,
    #[serde(skip)]
    pub group: Option<PermutationGroup>,
}

impl ClosureReport {
    pub fn order_big(&self) -> Option<&BigUint> {
        self.group.as_ref().map(|g| g.order())
    }
}

/// True iff `h` contains the generators of `g` and preserves the 2-orbits of `g`.
pub fn verify_candidate(g: &PermutationGroup, h: &PermutationGroup) -> Result<bool> {
    if g.degree() != h.degree() {
        return Err(Error::DegreeMismatch { expected: g.degree(), found: h.degree() });
    }
    let orbitals = crate::perm::two_orbits(g)?;
    Ok(verify_with(g, &orbitals, h))
}

fn verify_with(g: &PermutationGroup, orbitals: &OrbitalStructure, h: &PermutationGroup) -> bool {
    g.generators().iter().all(|x| h.has(x)) && h.generators().iter().all(|x| orbitals.preserves(x))
}

/// Among equal orders the more specific construction wins.
fn preference(c: &Candidate) -> u8 {
    match (c.branch, c.structural) {
        (Branch::Qform, true) => 6,
        (Branch::Tensor, _) => 5,
        (Branch::Imprimitive | Branch::Product | Branch::AlmostSimple, _) => 4,
        (Branch::Small, _) => 3,
        (Branch::Qform, false) => 2,
        _ => 1,
    }
}

/// Runs every branch, keeps the verified outputs and reports the largest one.
/// The oracle runs when `mode` asks for it and the degree is at most `threshold`
/// (`On` ignores the threshold); an answer that nothing verified is never given.
pub fn two_closure(
    group: &PermutationGroup,
    mode: OracleMode,
    threshold: usize,
    limits: &Limits,
) -> Result<ClosureReport> {
    let n = group.degree();
    if !group.is_transitive() {
        return Err(Error::Intransitive);
    }
    let orbitals = OrbitalStructure::of_group(group, limits.pair_table_cap)?;
    let rank = orbitals.rank();
    if rank != 3 {
        return Err(Error::NotRank3 { rank });
    }
    let mut report = ClosureReport {
        degree: n,
        rank,
        subdegrees: orbitals.subdegrees(),
        branches: BTreeMap::new(),
        chosen: None,
        order: None,
        generators: Vec::new(),
        verified: false,
        oracle_order: None,
        resolution: Resolution::Unresolved,
        diagnostics: Vec::new(),
        group: None,
    };
    // Outside `On` the threshold also bounds the searches inside the branches.
    let limits = &Limits {
        oracle_cap: if mode == OracleMode::On { limits.oracle_cap.max(n) } else { limits.oracle_cap.min(threshold) },
        ..limits.clone()
    };
    let frame = detect_affine(group, limits).unwrap_or_else(|e| {
        report.diagnostics.push(format!("affine detection failed: {e}"));
        None
    });
    let results: Vec<BranchResult> = vec![
        nonaffine::run_nonaffine(group, &orbitals, limits),
        small::run_small(group, &orbitals, frame.as_ref(), limits),
        tensor::run_tensor(group, &orbitals, frame.as_ref(), limits),
        qform::run_qform(group, &orbitals, frame.as_ref(), limits),
    ];
    let mut candidates: Vec<Candidate> = Vec::new();
    for r in results {
        match r {
            Ok(c) => {
                let ok = verify_with(group, &orbitals, &c.group);
                report.branches.insert(
                    c.branch.name().to_string(),
                    BranchReport {
                        status: if ok { "ok" } else { "rejected" },
                        order: Some(c.group.order().to_string()),
                        reason: (!ok).then(|| "output failed verification".to_string()),
                    },
                );
                if ok {
                    candidates.push(c);
                }
            }
            Err(f) => {
                report.branches.insert(
                    f.branch.name().to_string(),
                    BranchReport { status: "failed", order: None, reason: Some(f.reason) },
                );
            }
        }
    }
    let best = candidates.iter().max_by(|a, b| {
        a.group.order().cmp(b.group.order()).then(preference(a).cmp(&preference(b)))
    });
    if let Some(best) = best {
        for c in &candidates {
            if c.group.order() == best.group.order() && !c.group.same_group(&best.group) {
                report.diagnostics.push(format!(
                    "{} and {} give different groups of the same order",
                    c.branch, best.branch
                ));
            }
        }
    }
    let mut chosen: Option<(String, PermutationGroup)> = best.map(|c| (c.branch.name().to_string(), c.group.clone()));
    let run_oracle = match mode {
        OracleMode::On => true,
        OracleMode::Off => false,
        OracleMode::Auto => n <= threshold,
    };
    if run_oracle {
        match oracle_two_closure(group, limits) {
            Ok(h) => {
                report.oracle_order = Some(h.order().to_string());
                match &chosen {
                    Some((name, g)) if g.order() > h.order() => {
                        return Err(Error::Inconsistent(format!("{name} exceeds the oracle's order")))
                    }
                    Some((name, g)) if g.order() < h.order() => {
                        report.diagnostics.push(format!("{name} is smaller than the oracle's closure"));
                        chosen = Some((Branch::Oracle.name().into(), h));
                    }
                    Some(_) => {}
                    None => chosen = Some((Branch::Oracle.name().into(), h)),
                }
            }
            Err(e) => report.diagnostics.push(format!("oracle unavailable: {e}")),
        }
    }
    if let Some((name, h)) = chosen {
        report.verified = verify_with(group, &orbitals, &h);
        if !report.verified {
            return Err(Error::Inconsistent("chosen group failed verification".into()));
        }
        report.chosen = Some(name);
        report.order = Some(h.order().to_string());
        report.generators = h.generators().iter().map(|g| g.to_vec()).collect();
        report.resolution = Resolution::Resolved;
        report.group = Some(h);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo;

    fn closure(g: &PermutationGroup) -> ClosureReport {
        two_closure(g, OracleMode::Auto, 256, &Limits::default()).unwrap()
    }

    #[test]
    fn chosen_branches() {
        let r = closure(&zoo::johnson_pairs(5).unwrap().group);
        assert_eq!((r.chosen.as_deref(), r.order.as_deref()), (Some("almost-simple"), Some("120")));
        assert_eq!(r.oracle_order.as_deref(), Some("120"));
        let r = closure(&zoo::clebsch().unwrap().group);
        assert_eq!(r.order.as_deref(), Some("1920"));
        assert!(r.verified && r.diagnostics.is_empty(), "{:?}", r.diagnostics);
    }

    #[test]
    fn verification() {
        let g = zoo::paley(13).unwrap().group;
        assert!(verify_candidate(&g, &g).unwrap());
        let sym = PermutationGroup::from_image_lists(
            13,
            vec![(0..13).map(|i| (i + 1) % 13).collect(), {
                let mut t: Vec<usize> = (0..13).collect();
                t.swap(0, 1);
                t
            }],
        )
        .unwrap();
        assert!(!verify_candidate(&g, &sym).unwrap());
    }

    #[test]
    fn unresolved_and_rank() {
        // Paley(13) with the oracle off still resolves through the affine branches.
        let g = zoo::paley(13).unwrap().group;
        let r = two_closure(&g, OracleMode::Off, 0, &Limits::default()).unwrap();
        assert_eq!(r.resolution, Resolution::Resolved);
        let petersen = zoo::johnson_pairs(5).unwrap().group;
        let r = two_closure(&petersen, OracleMode::Auto, 5, &Limits::default()).unwrap();
        assert_eq!((r.resolution, r.order, r.verified), (Resolution::Unresolved, None, false));
        let c5 = PermutationGroup::from_image_lists(5, vec![vec![1, 2, 3, 4, 0]]).unwrap();
        assert!(matches!(two_closure(&c5, OracleMode::Auto, 256, &Limits::default()), Err(Error::NotRank3 { rank: 5 })));
    }
}
