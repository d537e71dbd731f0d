//! The class / maximal-cycle table and the predicted Borel-Moore homology of
//! a crepant resolution of `V/G`: each conjugacy class of age `a`
//! contributes one dimension in degree `2(n - a)`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{conjugacy_classes, ClassRecord, FiniteGroup};
use crate::invariants::{InvariantRing, RamificationCertificate, RgStatus};
use crate::strata::{build_strata, semismall_table, stratum_of_class, SemismallRow};

/// Predicted graded dimensions, keyed by Borel-Moore degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyPrediction {
    pub degrees: BTreeMap<u64, usize>,
    /// The group is not symplectic, so the prediction is only conjectural.
    pub conjectural: bool,
}

impl HomologyPrediction {
    pub fn total(&self) -> usize {
        self.degrees.values().sum()
    }
}

fn integer_ages(classes: &[ClassRecord]) -> Result<Vec<u64>> {
    classes.iter().map(ClassRecord::integer_age).collect()
}

pub fn predict_homology(group: &FiniteGroup, classes: &[ClassRecord]) -> Result<HomologyPrediction> {
    let n = group.dim() as u64;
    let mut degrees = BTreeMap::new();
    for age in integer_ages(classes)? {
        if age > n {
            return Err(Error::Corrupt(format!("age {age} exceeds dimension {n}")));
        }
        *degrees.entry(2 * (n - age)).or_insert(0) += 1;
    }
    if degrees.get(&(2 * n)) != Some(&1) {
        return Err(Error::Corrupt(
            "exactly one class (the identity) should have age 0".into(),
        ));
    }
    Ok(HomologyPrediction {
        degrees,
        conjectural: !group.is_symplectic(),
    })
}

/// Coefficients of `sum over classes t^age`.
pub fn poincare_polynomial(classes: &[ClassRecord]) -> Result<Vec<usize>> {
    let ages = integer_ages(classes)?;
    let top = ages.iter().copied().max().unwrap_or(0) as usize;
    let mut counts = vec![0; top + 1];
    for a in ages {
        counts[a as usize] += 1;
    }
    Ok(counts)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSummary {
    pub order: usize,
    pub dim: usize,
    pub cyclotomic_order: u32,
    pub exponent: u32,
    pub sl: bool,
    pub symplectic: bool,
    pub conjectural_only: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassReport {
    pub order: u32,
    pub size: usize,
    pub weights: Vec<(u32, usize)>,
    pub age: u64,
    pub fixed_dim: usize,
    pub stratum_dim: usize,
    pub rg: Option<RamificationCertificate>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct McKayReport {
    pub group: GroupSummary,
    pub classes: Vec<ClassReport>,
    /// Borel-Moore degree to predicted dimension.
    pub homology_bm: BTreeMap<u64, usize>,
    pub age_counts: Vec<usize>,
    pub strata: Vec<SemismallRow>,
}

#[derive(Clone, Debug)]
pub struct ReportOptions {
    /// Invariant degree bound for `r_g`; defaults to `|G|`.
    pub degree_bound: Option<usize>,
    /// Double the bound (up to `4|G|`) until each certificate is exact.
    pub escalate: bool,
    /// Skip the `r_g` certificates entirely.
    pub skip_rg: bool,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions {
            degree_bound: None,
            escalate: true,
            skip_rg: false,
        }
    }
}

/// `r_g` for one class, with an exhausted degree bound reported as a
/// lower-confidence certificate rather than an error.
pub fn class_rg(
    ring: &InvariantRing,
    class: &ClassRecord,
    degree_bound: usize,
    escalate: bool,
) -> Result<RamificationCertificate> {
    let g = &class.representative;
    let result = if escalate {
        ring.compute_rg_escalating(g, degree_bound)
    } else {
        ring.compute_rg(g, degree_bound)
    };
    match result {
        Err(Error::DegreeBoundTooSmall(d)) => Ok(RamificationCertificate {
            r: class.r,
            rg_bound: 0,
            rg: None,
            status: RgStatus::LowerConfidence,
            degree_used: d,
            note: format!("no invariant of degree <= {d} has a positive value"),
        }),
        other => other,
    }
}

pub fn full_report(group: &FiniteGroup, options: &ReportOptions) -> Result<McKayReport> {
    let classes = conjugacy_classes(group)?;
    let homology = predict_homology(group, &classes)?;
    let age_counts = poincare_polynomial(&classes)?;
    let poset = build_strata(group, &classes)?;
    let ring = InvariantRing::new(group);
    let bound = options.degree_bound.unwrap_or(group.len());
    let mut reports = Vec::with_capacity(classes.len());
    for class in &classes {
        let rg = if options.skip_rg {
            None
        } else {
            Some(class_rg(&ring, class, bound, options.escalate)?)
        };
        reports.push(ClassReport {
            order: class.r,
            size: class.size,
            weights: class.weights.clone(),
            age: class.integer_age()?,
            fixed_dim: class.fixed_dim,
            stratum_dim: stratum_of_class(&poset, class)?.dim,
            rg,
        });
    }
    Ok(McKayReport {
        group: GroupSummary {
            order: group.len(),
            dim: group.dim(),
            cyclotomic_order: group.cyclotomic_order(),
            exponent: group.exponent(),
            sl: group.check_sl(),
            symplectic: group.is_symplectic(),
            conjectural_only: homology.conjectural,
        },
        classes: reports,
        homology_bm: homology.degrees,
        age_counts,
        strata: semismall_table(&poset),
    })
}
