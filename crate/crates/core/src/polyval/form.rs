use std::collections::BTreeMap;

use crate::cyclo::CycNum;
use crate::error::{Error, Result};
use crate::linalg::ExactMatrix;

use super::poly::{Monomial, SparsePoly};

/// Differential form with polynomial coefficients:
/// `sum c * x^e dx_{i_1} ^ ... ^ dx_{i_k}` with `i_1 < ... < i_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffForm {
    nvars: usize,
    order: u32,
    degree: usize,
    terms: BTreeMap<(Vec<usize>, Monomial), CycNum>,
}

impl DiffForm {
    pub fn zero(nvars: usize, degree: usize, order: u32) -> Self {
        DiffForm {
            nvars,
            order,
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// `f dx_{indices}`; unsorted indices are sorted with the matching sign,
    /// repeated ones give zero.
    pub fn from_poly(f: &SparsePoly, indices: &[usize]) -> Result<Self> {
        let n = f.nvars();
        if indices.iter().any(|&i| i >= n) {
            return Err(Error::ShapeMismatch(format!(
                "form index out of range for {n} variables"
            )));
        }
        let mut form = Self::zero(n, indices.len(), f.order());
        let Some((sorted, negative)) = sort_with_sign(indices) else {
            return Ok(form);
        };
        for (m, c) in f.terms() {
            let c = if negative { -c } else { c.clone() };
            form.add_term(sorted.clone(), m.clone(), c);
        }
        Ok(form)
    }

    pub fn dx(nvars: usize, i: usize, order: u32) -> Result<Self> {
        Self::from_poly(&SparsePoly::one(nvars, order), &[i])
    }

    /// `dx_1 ^ ... ^ dx_n`.
    pub fn volume(nvars: usize, order: u32) -> Self {
        let idx: Vec<usize> = (0..nvars).collect();
        Self::from_poly(&SparsePoly::one(nvars, order), &idx).expect("valid indices")
    }

    fn add_term(&mut self, idx: Vec<usize>, m: Monomial, c: CycNum) {
        if c.is_zero() {
            return;
        }
        let key = (idx, m);
        let sum = match self.terms.get(&key) {
            Some(x) => x + &c,
            None => c,
        };
        if sum.is_zero() {
            self.terms.remove(&key);
        } else {
            self.terms.insert(key, sum);
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[usize], &Monomial, &CycNum)> {
        self.terms.iter().map(|((i, m), c)| (i.as_slice(), m, c))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.nvars != other.nvars || self.degree != other.degree {
            return Err(Error::ShapeMismatch("forms of different shape".into()));
        }
        let mut out = self.clone();
        for ((i, m), c) in &other.terms {
            out.add_term(i.clone(), m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn wedge(&self, other: &Self) -> Result<Self> {
        if self.nvars != other.nvars {
            return Err(Error::ShapeMismatch("forms in different variables".into()));
        }
        let mut out = Self::zero(self.nvars, self.degree + other.degree, self.order);
        for ((ia, ma), ca) in &self.terms {
            for ((ib, mb), cb) in &other.terms {
                let joined: Vec<usize> = ia.iter().chain(ib).copied().collect();
                if let Some((sorted, negative)) = sort_with_sign(&joined) {
                    let c = ca * cb;
                    out.add_term(sorted, ma.mul(mb), if negative { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    /// Pullback along the linear change of coordinates `x = P y`:
    /// coefficients are substituted and `dx_i = sum_j P[i][j] dy_j`.
    pub fn pullback(&self, p: &ExactMatrix) -> Result<Self> {
        if p.dim() != self.nvars {
            return Err(Error::ShapeMismatch("pullback matrix does not match the form".into()));
        }
        let n = self.nvars;
        let mut out = Self::zero(n, self.degree, self.order);
        let mut index_cache: BTreeMap<Vec<usize>, BTreeMap<Vec<usize>, CycNum>> = BTreeMap::new();
        for ((idx, m), c) in &self.terms {
            let coef = SparsePoly::monomial(m.clone(), c.clone())?.substitute(p)?;
            let wedge = index_cache
                .entry(idx.clone())
                .or_insert_with(|| pull_indices(idx, p));
            for (jdx, s) in wedge.iter() {
                for (mm, cc) in coef.terms() {
                    out.add_term(jdx.clone(), mm.clone(), cc * s);
                }
            }
        }
        Ok(out)
    }
}

/// `dx_{i_1} ^ ... ^ dx_{i_k}` expanded in the `dy`, as sorted index sets.
fn pull_indices(idx: &[usize], p: &ExactMatrix) -> BTreeMap<Vec<usize>, CycNum> {
    let order = p.order();
    let mut acc: BTreeMap<Vec<usize>, CycNum> = BTreeMap::from([(vec![], CycNum::one(order))]);
    for &i in idx {
        let mut next: BTreeMap<Vec<usize>, CycNum> = BTreeMap::new();
        for (set, c) in &acc {
            for (j, pij) in p.row(i).iter().enumerate() {
                if pij.is_zero() || set.contains(&j) {
                    continue;
                }
                // dy_S ^ dy_j: move dy_j left past every larger index.
                let pos = set.partition_point(|&s| s < j);
                let negative = (set.len() - pos) % 2 == 1;
                let mut new_set = set.clone();
                new_set.insert(pos, j);
                let term = c * pij;
                let term = if negative { -term } else { term };
                let entry = next.entry(new_set).or_insert_with(|| CycNum::zero(order));
                *entry = &*entry + &term;
            }
        }
        next.retain(|_, c| !c.is_zero());
        acc = next;
    }
    acc
}

/// Sorts indices, returning whether the permutation was odd; `None` on repeats.
fn sort_with_sign(indices: &[usize]) -> Option<(Vec<usize>, bool)> {
    let mut v = indices.to_vec();
    let mut negative = false;
    // insertion sort, counting transpositions
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            negative = !negative;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((v, negative))
}
