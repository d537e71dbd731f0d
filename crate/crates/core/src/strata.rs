//! The stratification of `V` by fixed subspaces `V^H`, taken up to
//! `G`-conjugacy so that it describes the strata of `X = V/G`.
//!
//! Subgroups are never enumerated: `V^H` is the intersection of the `V^h`
//! for `h` in `H`, so closing the element fixed spaces under intersection
//! gives every `V^H`.

use std::collections::{BTreeSet, HashMap, HashSet};

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{ClassRecord, FiniteGroup, DIRECT_ORBIT_LIMIT};
use crate::linalg::{dot, ExactMatrix, Subspace};
use crate::par;

/// One `G`-orbit of fixed subspaces.
#[derive(Clone, Debug)]
pub struct StratumNode {
    /// Smallest member of the orbit in the canonical order.
    pub subspace: Subspace,
    pub dim: usize,
    pub orbit_size: usize,
    /// Indices into the class list of classes with `V^g` in this orbit.
    pub classes_attached: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct StrataPoset {
    pub nodes: Vec<StratumNode>,
    /// `below[i]`: nodes `j != i` with a conjugate of their subspace inside
    /// node `i`'s subspace.
    pub below: Vec<Vec<usize>>,
    membership: HashMap<Subspace, usize>,
}

impl StrataPoset {
    /// Node whose orbit contains `w`.
    pub fn node_of(&self, w: &Subspace) -> Option<usize> {
        self.membership.get(w).copied()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `i` contains a conjugate of `j` (reflexive).
    pub fn contains(&self, i: usize, j: usize) -> bool {
        i == j || self.below[i].contains(&j)
    }
}

/// `V^g = ker(g - 1)`.
pub fn fixed_space(g: &ExactMatrix) -> Subspace {
    let id = ExactMatrix::identity(g.dim(), g.order());
    g.sub(&id).expect("same shape").kernel()
}

fn orbit(group: &FiniteGroup, w: &Subspace) -> Vec<Subspace> {
    let mut out: Vec<Subspace> = if group.len() <= DIRECT_ORBIT_LIMIT {
        par::map_collect(group.elements(), |h| w.image(h))
    } else {
        let mut seen = HashSet::from([w.clone()]);
        let mut work = vec![w.clone()];
        while let Some(u) = work.pop() {
            for h in group.generators() {
                let img = u.image(h);
                if seen.insert(img.clone()) {
                    work.push(img);
                }
            }
        }
        seen.into_iter().collect()
    };
    out.sort();
    out.dedup();
    out
}

/// Builds the poset of fixed-subspace orbits and attaches the classes.
pub fn build_strata(group: &FiniteGroup, classes: &[ClassRecord]) -> Result<StrataPoset> {
    let n = group.dim();
    let order = group.cyclotomic_order();
    let fixed: Vec<Subspace> = par::map_collect(group.elements(), fixed_space);
    let mut all: BTreeSet<Subspace> = fixed.iter().cloned().collect();
    all.insert(Subspace::full(n, order));

    // close under pairwise intersection, pairing only with new subspaces
    let mut fresh: Vec<Subspace> = all.iter().cloned().collect();
    while !fresh.is_empty() {
        let current: Vec<Subspace> = all.iter().cloned().collect();
        let products: Vec<Vec<Subspace>> =
            par::map_collect(&fresh, |a| current.iter().map(|b| a.intersect(b)).collect());
        fresh = vec![];
        for w in products.into_iter().flatten() {
            if all.insert(w.clone()) {
                fresh.push(w);
            }
        }
    }

    let mut membership: HashMap<Subspace, usize> = HashMap::new();
    let mut orbits: Vec<Vec<Subspace>> = vec![];
    for w in &all {
        if membership.contains_key(w) {
            continue;
        }
        let o = orbit(group, w);
        for u in &o {
            if !all.contains(u) {
                return Err(Error::Corrupt(
                    "fixed-subspace lattice is not stable under the group".into(),
                ));
            }
            membership.insert(u.clone(), orbits.len());
        }
        orbits.push(o);
    }

    // dimension descending, then canonical representative
    let mut perm: Vec<usize> = (0..orbits.len()).collect();
    perm.sort_by(|&a, &b| {
        orbits[b][0]
            .dim()
            .cmp(&orbits[a][0].dim())
            .then_with(|| orbits[a][0].cmp(&orbits[b][0]))
    });
    let mut new_index = vec![0; orbits.len()];
    for (k, &old) in perm.iter().enumerate() {
        new_index[old] = k;
    }
    for v in membership.values_mut() {
        *v = new_index[*v];
    }
    let mut nodes: Vec<StratumNode> = perm
        .iter()
        .map(|&old| StratumNode {
            subspace: orbits[old][0].clone(),
            dim: orbits[old][0].dim(),
            orbit_size: orbits[old].len(),
            classes_attached: vec![],
        })
        .collect();
    let sorted_orbits: Vec<&Vec<Subspace>> = perm.iter().map(|&old| &orbits[old]).collect();

    let below: Vec<Vec<usize>> = par::map_range(nodes.len(), |i| {
        let top = &nodes[i].subspace;
        (0..nodes.len())
            .filter(|&j| {
                j != i
                    && nodes[j].dim <= nodes[i].dim
                    && sorted_orbits[j].iter().any(|u| top.contains_subspace(u))
            })
            .collect()
    });

    for (c, class) in classes.iter().enumerate() {
        let w = fixed_space(&class.representative);
        let i = *membership.get(&w).ok_or_else(|| {
            Error::Corrupt(format!("fixed space of class {c} is missing from the strata"))
        })?;
        nodes[i].classes_attached.push(c);
    }

    Ok(StrataPoset {
        nodes,
        below,
        membership,
    })
}

/// The node carrying `X_g` for the class representative `g`.
pub fn stratum_of_class<'p>(poset: &'p StrataPoset, class: &ClassRecord) -> Result<&'p StratumNode> {
    poset
        .node_of(&fixed_space(&class.representative))
        .map(|i| &poset.nodes[i])
        .ok_or_else(|| Error::Corrupt("class fixed space is not a stratum".into()))
}

/// Codimension of `X_g` and the predicted codimension `age(g)` of `Z_g`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaxCyclePrediction {
    pub codim_xg: usize,
    pub predicted_codim_zg: u64,
}

/// Fails with `AgeLemmaViolated` unless `age(g)` is half the codimension
/// of `V^g`.
pub fn maximal_cycle_prediction(class: &ClassRecord) -> Result<MaxCyclePrediction> {
    let codim = class.representative.dim() - class.fixed_dim;
    let age = class.integer_age()?;
    if 2 * age != codim as u64 {
        return Err(Error::AgeLemmaViolated {
            twice_age: 2 * age as i64,
            codim,
        });
    }
    Ok(MaxCyclePrediction {
        codim_xg: codim,
        predicted_codim_zg: age,
    })
}

/// One row of the semismallness ledger.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemismallRow {
    pub dim: usize,
    pub orbit_size: usize,
    /// `codim(X_H) / 2`, the lower bound for `codim(Y_H)`.
    pub bound: Rational64,
    pub classes: Vec<usize>,
}

pub fn semismall_table(poset: &StrataPoset) -> Vec<SemismallRow> {
    let n = poset.nodes.first().map_or(0, |v| v.subspace.ambient_dim());
    poset
        .nodes
        .iter()
        .map(|node| SemismallRow {
            dim: node.dim,
            orbit_size: node.orbit_size,
            bound: Rational64::new((n - node.dim) as i64, 2),
            classes: node.classes_attached.clone(),
        })
        .collect()
}

/// The restriction of the form `J` to `w` is nondegenerate.
pub fn is_symplectic_subspace(w: &Subspace, form: &ExactMatrix) -> bool {
    let b = w.basis();
    if b.is_empty() {
        return true;
    }
    let rows: Vec<Vec<_>> = b
        .iter()
        .map(|u| {
            let ju = form.apply(u);
            b.iter().map(|v| dot(v, &ju)).collect()
        })
        .collect();
    ExactMatrix::from_rows(rows).is_ok_and(|gram| !gram.det().is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::corpus;
    use crate::group::{conjugacy_classes, enumerate, GroupSpec, DEFAULT_CAP};

    fn setup(spec: &GroupSpec) -> (FiniteGroup, Vec<ClassRecord>, StrataPoset) {
        let g = enumerate(spec, DEFAULT_CAP).unwrap();
        let classes = conjugacy_classes(&g).unwrap();
        let poset = build_strata(&g, &classes).unwrap();
        (g, classes, poset)
    }

    fn dims(p: &StrataPoset) -> Vec<usize> {
        p.nodes.iter().map(|n| n.dim).collect()
    }

    #[test]
    fn trivial_group_has_one_stratum() {
        let (_, classes, p) = setup(&GroupSpec::new(3, 1, vec![], None).unwrap());
        assert_eq!(dims(&p), vec![3]);
        assert_eq!(stratum_of_class(&p, &classes[0]).unwrap().dim, 3);
        let rows = semismall_table(&p);
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].bound, Rational64::from_integer(0));
    }

    #[test]
    fn su2_groups_have_two_strata() {
        for spec in [
            corpus::cyclic(2).unwrap().spec,
            corpus::cyclic(5).unwrap().spec,
            corpus::binary_dihedral(3).unwrap().spec,
        ] {
            let (_, classes, p) = setup(&spec);
            assert_eq!(dims(&p), vec![2, 0]);
            assert_eq!(p.below, vec![vec![1], vec![]]);
            assert_eq!(p.nodes[1].classes_attached.len(), classes.len() - 1);
        }
        let (_, classes, p) = setup(&corpus::cyclic(2).unwrap().spec);
        let minus = classes.iter().find(|c| c.r == 2).unwrap();
        assert_eq!(stratum_of_class(&p, minus).unwrap().dim, 0);
        let rows: Vec<(usize, Rational64)> =
            semismall_table(&p).into_iter().map(|r| (r.dim, r.bound)).collect();
        assert_eq!(
            rows,
            vec![(2, Rational64::from_integer(0)), (0, Rational64::from_integer(1))]
        );
    }

    #[test]
    fn block_swap_strata() {
        let (_, classes, p) = setup(&corpus::symmetric_pairs(2).unwrap().spec);
        assert_eq!(dims(&p), vec![4, 2]);
        let swap = classes.iter().find(|c| c.r == 2).unwrap();
        assert_eq!(stratum_of_class(&p, swap).unwrap().dim, 2);
        let rows: Vec<(usize, Rational64)> =
            semismall_table(&p).into_iter().map(|r| (r.dim, r.bound)).collect();
        assert_eq!(
            rows,
            vec![(4, Rational64::from_integer(0)), (2, Rational64::from_integer(1))]
        );
    }

    #[test]
    fn max_cycle_predictions() {
        let (_, classes, _) = setup(&corpus::cyclic(2).unwrap().spec);
        let got: Vec<(usize, u64)> = classes
            .iter()
            .map(|c| maximal_cycle_prediction(c).unwrap())
            .map(|m| (m.codim_xg, m.predicted_codim_zg))
            .collect();
        assert_eq!(got, vec![(0, 0), (2, 1)]);

        let (_, classes, _) = setup(&corpus::symmetric_pairs(3).unwrap().spec);
        let three_cycle = classes.iter().find(|c| c.r == 3).unwrap();
        let m = maximal_cycle_prediction(three_cycle).unwrap();
        assert_eq!((m.codim_xg, m.predicted_codim_zg), (4, 2));

        let (_, classes, _) = setup(&corpus::mu4_counterexample().unwrap().spec);
        // -I still satisfies the age lemma; i*I has age 3
        let order_two = classes.iter().find(|c| c.r == 2).unwrap();
        assert!(maximal_cycle_prediction(order_two).is_ok());
        let scalar_i = classes.iter().find(|c| c.age == Rational64::from_integer(3)).unwrap();
        assert!(matches!(
            maximal_cycle_prediction(scalar_i),
            Err(Error::AgeLemmaViolated { twice_age: 6, codim: 4 })
        ));
    }

    #[test]
    fn symmetric_group_strata_are_set_partitions() {
        // the fixed spaces of S_n on (C^2)^n are indexed by set partitions,
        // and their orbits by integer partitions
        let (g, classes, p) = setup(&corpus::symmetric_pairs(4).unwrap().spec);
        assert_eq!(p.len(), 5);
        assert_eq!(p.membership.len(), 15);
        assert_eq!(dims(&p), vec![8, 6, 4, 4, 2]);
        let attached: usize = p.nodes.iter().map(|n| n.classes_attached.len()).sum();
        assert_eq!(attached, classes.len());
        let form = g.symplectic_form().unwrap();
        for node in &p.nodes {
            assert!(is_symplectic_subspace(&node.subspace, form));
        }
    }

    #[test]
    fn poset_is_closed_and_covers_every_fixed_space() {
        for spec in [
            corpus::cyclic_wreath(2, 2).unwrap().spec,
            corpus::symmetric_pairs(3).unwrap().spec,
            corpus::binary_dihedral(2).unwrap().spec,
        ] {
            let (g, classes, p) = setup(&spec);
            for h in g.elements() {
                assert!(p.node_of(&fixed_space(h)).is_some());
            }
            for a in &p.nodes {
                for b in &p.nodes {
                    assert!(p.node_of(&a.subspace.intersect(&b.subspace)).is_some());
                }
            }
            for c in &classes {
                let m = maximal_cycle_prediction(c).unwrap();
                assert_eq!(m.codim_xg as u64, 2 * m.predicted_codim_zg);
            }
            let form = g.symplectic_form().unwrap();
            for node in &p.nodes {
                assert_eq!(node.dim % 2, 0);
                assert!(is_symplectic_subspace(&node.subspace, form));
                assert!(p.contains(0, p.node_of(&node.subspace).unwrap()));
            }
        }
    }

    #[test]
    fn lagrangian_line_is_not_symplectic() {
        let form = crate::group::standard_symplectic_form(2, 1).unwrap();
        let line = Subspace::span(
            vec![vec![crate::CycNum::one(1), crate::CycNum::zero(1)]],
            2,
            1,
        );
        assert!(!is_symplectic_subspace(&line, &form));
        assert!(is_symplectic_subspace(&Subspace::full(2, 1), &form));
    }
}
