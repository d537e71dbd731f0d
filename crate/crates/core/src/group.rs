//! Finite matrix groups: enumeration, element orders, conjugacy classes and
//! SL / Sp membership.

use std::collections::{HashMap, HashSet};

use num_integer::Integer;
use num_rational::Rational64;

use crate::cyclo::CycNum;
use crate::error::{Error, Result};
use crate::linalg::ExactMatrix;
use crate::par;
use crate::weights::{weight_data, WeightData};

/// Default bound on the number of enumerated elements.
pub const DEFAULT_CAP: usize = 1_000_000;

/// Above this order conjugacy orbits are grown with generators only.
pub const DIRECT_ORBIT_LIMIT: usize = 10_000;

/// Generators of a matrix group together with the ambient data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupSpec {
    pub dim: usize,
    pub cyclotomic_order: u32,
    pub generators: Vec<ExactMatrix>,
    pub symplectic_form: Option<ExactMatrix>,
}

impl GroupSpec {
    /// Validates shapes, orders and invertibility.
    pub fn new(
        dim: usize,
        cyclotomic_order: u32,
        generators: Vec<ExactMatrix>,
        symplectic_form: Option<ExactMatrix>,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ShapeMismatch("dimension must be positive".into()));
        }
        for (i, g) in generators.iter().enumerate() {
            if g.dim() != dim {
                return Err(Error::ShapeMismatch(format!(
                    "generator {i} is {}x{0}, expected {dim}x{dim}",
                    g.dim()
                )));
            }
            if g.order() != cyclotomic_order {
                return Err(Error::OrderMismatch {
                    left: cyclotomic_order,
                    right: g.order(),
                });
            }
            if g.det().is_zero() {
                return Err(Error::SingularGenerator(i));
            }
        }
        if let Some(j) = &symplectic_form {
            if j.dim() != dim || j.order() != cyclotomic_order {
                return Err(Error::ShapeMismatch(
                    "symplectic form does not match the group dimension".into(),
                ));
            }
            if !dim.is_multiple_of(2) {
                return Err(Error::ShapeMismatch(
                    "a symplectic form needs an even dimension".into(),
                ));
            }
            if j.det().is_zero() || j.transpose() != j.scale(&CycNum::from_int(-1, cyclotomic_order))? {
                return Err(Error::ShapeMismatch(
                    "symplectic form must be invertible and antisymmetric".into(),
                ));
            }
        }
        Ok(GroupSpec {
            dim,
            cyclotomic_order,
            generators,
            symplectic_form,
        })
    }

    /// The explicit form, or the standard one when the dimension is even.
    pub fn form(&self) -> Option<ExactMatrix> {
        self.symplectic_form
            .clone()
            .or_else(|| standard_symplectic_form(self.dim, self.cyclotomic_order))
    }
}

/// Block diagonal `[[0, 1], [-1, 0]]` on consecutive coordinate pairs, so that
/// `V = (C^2)^(n/2)` with each pair a symplectic plane.
pub fn standard_symplectic_form(dim: usize, order: u32) -> Option<ExactMatrix> {
    if dim == 0 || !dim.is_multiple_of(2) {
        return None;
    }
    let mut rows = vec![vec![CycNum::zero(order); dim]; dim];
    for b in 0..dim / 2 {
        rows[2 * b][2 * b + 1] = CycNum::one(order);
        rows[2 * b + 1][2 * b] = CycNum::from_int(-1, order);
    }
    ExactMatrix::from_rows(rows).ok()
}

/// A finite group of matrices, elements sorted by their canonical key.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    dim: usize,
    order: u32,
    elements: Vec<ExactMatrix>,
    index: HashMap<ExactMatrix, usize>,
    identity: usize,
    generators: Vec<usize>,
    inverses: Vec<usize>,
    element_orders: Vec<u32>,
    exponent: u32,
    symplectic_form: Option<ExactMatrix>,
}

/// Breadth-first closure of the generators under multiplication.
///
/// The cyclotomic order is afterwards raised to `lcm(N, exponent)` so that
/// every root of unity needed for eigenspaces exists.
pub fn enumerate(spec: &GroupSpec, cap: usize) -> Result<FiniteGroup> {
    let identity = ExactMatrix::identity(spec.dim, spec.cyclotomic_order);
    let gens = spec.generators.clone();
    let mut seen: HashSet<ExactMatrix> = HashSet::new();
    seen.insert(identity.clone());
    let mut frontier = vec![identity];
    while !frontier.is_empty() {
        let products: Vec<Vec<ExactMatrix>> = par::map_collect(&frontier, |x| {
            gens.iter()
                .map(|g| x.matmul(g).expect("shapes validated"))
                .collect()
        });
        let mut next = vec![];
        for p in products.into_iter().flatten() {
            if !seen.contains(&p) {
                if seen.len() >= cap {
                    return Err(Error::GroupTooLarge { cap });
                }
                seen.insert(p.clone());
                next.push(p);
            }
        }
        frontier = next;
    }
    let mut elements: Vec<ExactMatrix> = seen.into_iter().collect();
    elements.sort_unstable();
    let group = FiniteGroup::from_sorted(elements, spec)?;
    let session = spec.cyclotomic_order.lcm(&group.exponent);
    if session == spec.cyclotomic_order {
        return Ok(group);
    }
    let mut rescaled = par::map_collect(&group.elements, |g| g.rescale(session))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    rescaled.sort_unstable();
    let spec = GroupSpec {
        dim: spec.dim,
        cyclotomic_order: session,
        generators: spec
            .generators
            .iter()
            .map(|g| g.rescale(session))
            .collect::<Result<_>>()?,
        symplectic_form: spec
            .symplectic_form
            .as_ref()
            .map(|j| j.rescale(session))
            .transpose()?,
    };
    FiniteGroup::from_sorted(rescaled, &spec)
}

impl FiniteGroup {
    fn from_sorted(elements: Vec<ExactMatrix>, spec: &GroupSpec) -> Result<Self> {
        let index: HashMap<ExactMatrix, usize> = elements
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, g)| (g, i))
            .collect();
        let id = ExactMatrix::identity(spec.dim, spec.cyclotomic_order);
        let identity = index[&id];
        let generators = spec
            .generators
            .iter()
            .map(|g| index[g])
            .collect();
        // Walk the powers of each element: the order and, one step before the
        // identity, the inverse.
        let walked: Vec<(u32, usize)> = par::map_collect(&elements, |g| {
            let mut prev = id.clone();
            let mut p = g.clone();
            let mut r = 1u32;
            while !p.is_identity() {
                prev = p.clone();
                p = p.matmul(g).expect("same shape");
                r += 1;
            }
            (r, index[&prev])
        });
        let element_orders: Vec<u32> = walked.iter().map(|&(r, _)| r).collect();
        let inverses = walked.iter().map(|&(_, i)| i).collect();
        let exponent = element_orders.iter().fold(1u32, |acc, &r| acc.lcm(&r));
        Ok(FiniteGroup {
            dim: spec.dim,
            order: spec.cyclotomic_order,
            elements,
            index,
            identity,
            generators,
            inverses,
            element_orders,
            exponent,
            symplectic_form: spec.form(),
        })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The session cyclotomic order `N`.
    pub fn cyclotomic_order(&self) -> u32 {
        self.order
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn elements(&self) -> &[ExactMatrix] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &ExactMatrix {
        &self.elements[i]
    }

    pub fn identity_index(&self) -> usize {
        self.identity
    }

    pub fn generator_indices(&self) -> &[usize] {
        &self.generators
    }

    pub fn generators(&self) -> impl Iterator<Item = &ExactMatrix> {
        self.generators.iter().map(|&i| &self.elements[i])
    }

    pub fn index_of(&self, g: &ExactMatrix) -> Option<usize> {
        self.index.get(g).copied()
    }

    pub fn inverse_index(&self, i: usize) -> usize {
        self.inverses[i]
    }

    pub fn element_order(&self, i: usize) -> u32 {
        self.element_orders[i]
    }

    pub fn symplectic_form(&self) -> Option<&ExactMatrix> {
        self.symplectic_form.as_ref()
    }

    /// Index of the product `elements[i] * elements[j]`.
    pub fn mul_index(&self, i: usize, j: usize) -> usize {
        let p = self.elements[i]
            .matmul(&self.elements[j])
            .expect("same shape");
        self.index[&p]
    }

    /// Index of `elements[h] * elements[x] * elements[h]^-1`.
    pub fn conjugate_index(&self, h: usize, x: usize) -> usize {
        let p = self.elements[h]
            .matmul(&self.elements[x])
            .and_then(|p| p.matmul(&self.elements[self.inverses[h]]))
            .expect("same shape");
        self.index[&p]
    }

    /// Number of scalar matrices in the group.
    pub fn scalar_count(&self) -> usize {
        self.elements
            .iter()
            .filter(|g| {
                let c = g.get(0, 0);
                *g == &ExactMatrix::scalar(self.dim, c.clone())
            })
            .count()
    }

    pub fn check_sl(&self) -> bool {
        self.generators().all(|g| g.det().is_one())
    }

    /// `g^T J g == J` for every generator.
    pub fn check_symplectic(&self, form: &ExactMatrix) -> bool {
        self.generators().all(|g| {
            g.transpose()
                .matmul(form)
                .and_then(|t| t.matmul(g))
                .map(|t| &t == form)
                .unwrap_or(false)
        })
    }

    /// Symplectic with respect to the spec's form (or the standard one).
    pub fn is_symplectic(&self) -> bool {
        self.symplectic_form
            .as_ref()
            .is_some_and(|j| self.check_symplectic(j))
    }

    /// Conjugation orbits, as sorted index lists.
    pub fn conjugation_orbits(&self) -> Vec<Vec<usize>> {
        let mut class_of = vec![usize::MAX; self.len()];
        let mut orbits = vec![];
        for x in 0..self.len() {
            if class_of[x] != usize::MAX {
                continue;
            }
            let mut orbit = if self.len() <= DIRECT_ORBIT_LIMIT {
                let mut o = par::map_range(self.len(), |h| self.conjugate_index(h, x));
                o.sort_unstable();
                o.dedup();
                o
            } else {
                self.orbit_by_generators(x)
            };
            orbit.sort_unstable();
            for &y in &orbit {
                class_of[y] = orbits.len();
            }
            orbits.push(orbit);
        }
        orbits
    }

    fn orbit_by_generators(&self, x: usize) -> Vec<usize> {
        let mut seen = HashSet::from([x]);
        let mut work = vec![x];
        while let Some(y) = work.pop() {
            for &g in &self.generators {
                let c = self.conjugate_index(g, y);
                if seen.insert(c) {
                    work.push(c);
                }
            }
        }
        seen.into_iter().collect()
    }
}

/// One conjugacy class with its weight data.
#[derive(Clone, Debug)]
pub struct ClassRecord {
    pub representative: ExactMatrix,
    pub rep_index: usize,
    pub members: Vec<usize>,
    pub size: usize,
    pub r: u32,
    pub weights: Vec<(u32, usize)>,
    pub age: Rational64,
    pub fixed_dim: usize,
}

impl ClassRecord {
    pub fn weight_data(&self) -> WeightData {
        WeightData {
            r: self.r,
            pairs: self.weights.clone(),
            age: self.age,
            fixed_dim: self.fixed_dim,
        }
    }

    pub fn integer_age(&self) -> Result<u64> {
        self.weight_data().integer_age()
    }
}

/// Partition of the group into conjugacy classes, each carrying its weights.
///
/// Records are ordered by (age, order, size, canonical key).
pub fn conjugacy_classes(group: &FiniteGroup) -> Result<Vec<ClassRecord>> {
    let orbits = group.conjugation_orbits();
    let records: Vec<Result<ClassRecord>> = par::map_collect(&orbits, |orbit| {
        let rep_index = orbit[0];
        let rep = group.element(rep_index);
        let w = weight_data(rep)?;
        if w.r != group.element_order(rep_index) {
            return Err(Error::Corrupt(format!(
                "element {rep_index}: order {} from weights, {} from enumeration",
                w.r,
                group.element_order(rep_index)
            )));
        }
        Ok(ClassRecord {
            representative: rep.clone(),
            rep_index,
            members: orbit.clone(),
            size: orbit.len(),
            r: w.r,
            weights: w.pairs,
            age: w.age,
            fixed_dim: w.fixed_dim,
        })
    });
    let mut records = records.into_iter().collect::<Result<Vec<_>>>()?;
    records.sort_by(|a, b| {
        (a.age, a.r, a.size, &a.representative).cmp(&(b.age, b.r, b.size, &b.representative))
    });
    Ok(records)
}
