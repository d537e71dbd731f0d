use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use crate::cyclo::CycNum;
use crate::error::{Error, Result};
use crate::linalg::ExactMatrix;

/// Exponent vector, ordered graded-lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    /// `sum_j weights[j] * e_j`.
    pub fn weight(&self, weights: &[u32]) -> u64 {
        self.0
            .iter()
            .zip(weights)
            .map(|(&e, &w)| e as u64 * w as u64)
            .sum()
    }

    pub fn mul(&self, other: &Self) -> Self {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// All exponent vectors of total degree `d` in `n` variables, in
    /// increasing graded-lex order.
    pub fn all_of_degree(n: usize, d: u32) -> Vec<Monomial> {
        fn rec(n: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<Monomial>) {
            if prefix.len() == n - 1 {
                prefix.push(d);
                out.push(Monomial(prefix.clone()));
                prefix.pop();
                return;
            }
            for e in 0..=d {
                prefix.push(e);
                rec(n, d - e, prefix, out);
                prefix.pop();
            }
        }
        if n == 0 {
            return if d == 0 { vec![Monomial(vec![])] } else { vec![] };
        }
        let mut out = vec![];
        rec(n, d, &mut vec![], &mut out);
        out
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial over `Q(z_N)`; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SparsePoly {
    nvars: usize,
    order: u32,
    terms: BTreeMap<Monomial, CycNum>,
}

impl SparsePoly {
    pub fn zero(nvars: usize, order: u32) -> Self {
        SparsePoly {
            nvars,
            order,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: CycNum, nvars: usize) -> Self {
        let order = c.order();
        Self::monomial(Monomial::one(nvars), c).unwrap_or_else(|_| Self::zero(nvars, order))
    }

    pub fn one(nvars: usize, order: u32) -> Self {
        Self::constant(CycNum::one(order), nvars)
    }

    pub fn var(nvars: usize, i: usize, order: u32) -> Self {
        Self::monomial(Monomial::var(nvars, i), CycNum::one(order)).expect("valid variable")
    }

    pub fn monomial(m: Monomial, c: CycNum) -> Result<Self> {
        let mut p = Self::zero(m.0.len(), c.order());
        p.add_term(m, c)?;
        Ok(p)
    }

    /// Builds from `(exponents, coefficient)` pairs, merging duplicates.
    pub fn from_terms(
        nvars: usize,
        order: u32,
        terms: impl IntoIterator<Item = (Vec<u32>, CycNum)>,
    ) -> Result<Self> {
        let mut p = Self::zero(nvars, order);
        for (e, c) in terms {
            p.add_term(Monomial(e), c)?;
        }
        Ok(p)
    }

    pub fn add_term(&mut self, m: Monomial, c: CycNum) -> Result<()> {
        if m.0.len() != self.nvars {
            return Err(Error::ShapeMismatch(format!(
                "monomial in {} variables added to a polynomial in {}",
                m.0.len(),
                self.nvars
            )));
        }
        if c.order() != self.order {
            return Err(Error::OrderMismatch {
                left: self.order,
                right: c.order(),
            });
        }
        if c.is_zero() {
            return Ok(());
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
        Ok(())
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &CycNum)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Option<&CycNum> {
        self.terms.get(m)
    }

    pub fn total_degree(&self) -> Option<u64> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::ShapeMismatch(format!(
                "polynomials in {} and {} variables",
                self.nvars, other.nvars
            )));
        }
        if self.order != other.order {
            return Err(Error::OrderMismatch {
                left: self.order,
                right: other.order,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone())?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        SparsePoly {
            nvars: self.nvars,
            order: self.order,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &CycNum) -> Result<Self> {
        if c.order() != self.order {
            return Err(Error::OrderMismatch {
                left: self.order,
                right: c.order(),
            });
        }
        if c.is_zero() {
            return Ok(Self::zero(self.nvars, self.order));
        }
        Ok(SparsePoly {
            nvars: self.nvars,
            order: self.order,
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.mul_truncated(other, None)
    }

    /// Product keeping only monomials of `weight <= bound` (weights nonnegative).
    pub fn mul_truncated(&self, other: &Self, bound: Option<(&[u32], u64)>) -> Result<Self> {
        self.check(other)?;
        let mut acc: HashMap<Monomial, CycNum> = HashMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                if let Some((w, t)) = bound {
                    if m.weight(w) > t {
                        continue;
                    }
                }
                let c = ca * cb;
                acc.entry(m)
                    .and_modify(|x| *x = &*x + &c)
                    .or_insert(c);
            }
        }
        Ok(SparsePoly {
            nvars: self.nvars,
            order: self.order,
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        })
    }

    pub fn pow(&self, e: u32) -> Result<Self> {
        let mut acc = Self::one(self.nvars, self.order);
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// `f(M x)`: every variable `x_i` becomes `sum_j M[i][j] x_j`.
    pub fn substitute(&self, m: &ExactMatrix) -> Result<Self> {
        self.substitute_truncated(m, None)
    }

    /// [`substitute`](Self::substitute) dropping every monomial of weight
    /// above `bound`.
    pub fn substitute_truncated(
        &self,
        m: &ExactMatrix,
        bound: Option<(&[u32], u64)>,
    ) -> Result<Self> {
        let sub = Substitution::new(m, bound.map(|(w, t)| (w.to_vec(), t)))?;
        sub.apply(self)
    }

    /// Contragredient action `(g . f)(x) = f(g^-1 x)`.
    pub fn act(&self, g: &ExactMatrix) -> Result<Self> {
        self.substitute(&g.inverse()?)
    }

    pub fn rescale(&self, new_order: u32) -> Result<Self> {
        let mut out = Self::zero(self.nvars, new_order);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.rescale(new_order)?)?;
        }
        Ok(out)
    }
}

/// `f(g^-1 x)`; see [`SparsePoly::act`].
pub fn act(g: &ExactMatrix, f: &SparsePoly) -> Result<SparsePoly> {
    if g.dim() != f.nvars() {
        return Err(Error::ShapeMismatch(format!(
            "{}x{0} matrix acting on a polynomial in {} variables",
            g.dim(),
            f.nvars()
        )));
    }
    f.act(g)
}

/// A reusable linear change of variables `x_i -> sum_j M[i][j] x_j`,
/// optionally dropping monomials above a weight bound.
///
/// Rows of `M` with a single nonzero entry rename a variable; only the
/// remaining rows are expanded, and those expansions are cached across
/// polynomials.
#[derive(Debug)]
pub struct Substitution {
    nvars: usize,
    order: u32,
    /// `Some((j, c))` when row `i` is `c * e_j`.
    unit: Vec<Option<(usize, CycNum)>>,
    mixing: Vec<usize>,
    linear: Vec<SparsePoly>,
    bound: Option<(Vec<u32>, u64)>,
    cache: Mutex<HashMap<Vec<u32>, Arc<SparsePoly>>>,
}

impl Substitution {
    pub fn new(m: &ExactMatrix, bound: Option<(Vec<u32>, u64)>) -> Result<Self> {
        let n = m.dim();
        if let Some((w, _)) = &bound {
            if w.len() != n {
                return Err(Error::ShapeMismatch(format!(
                    "{} weights for {n} variables",
                    w.len()
                )));
            }
        }
        let mut unit = Vec::with_capacity(n);
        let mut mixing = vec![];
        let mut linear = Vec::with_capacity(n);
        for i in 0..n {
            let nonzero: Vec<(usize, &CycNum)> = m
                .row(i)
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .collect();
            let mut l = SparsePoly::zero(n, m.order());
            for &(j, c) in &nonzero {
                l.add_term(Monomial::var(n, j), c.clone())?;
            }
            linear.push(l);
            match nonzero.as_slice() {
                [(j, c)] => unit.push(Some((*j, (*c).clone()))),
                _ => {
                    unit.push(None);
                    mixing.push(i);
                }
            }
        }
        Ok(Substitution {
            nvars: n,
            order: m.order(),
            unit,
            mixing,
            linear,
            bound,
            cache: Mutex::new(HashMap::new()),
        })
    }

    fn bound_ref(&self) -> Option<(&[u32], u64)> {
        self.bound.as_ref().map(|(w, t)| (w.as_slice(), *t))
    }

    /// Product of the expanded mixing rows raised to `exps`.
    fn mixing_part(&self, exps: &[u32]) -> Result<Arc<SparsePoly>> {
        if let Some(hit) = self.cache.lock().unwrap().get(exps) {
            return Ok(hit.clone());
        }
        let mut acc = SparsePoly::one(self.nvars, self.order);
        for (k, &i) in self.mixing.iter().enumerate() {
            for _ in 0..exps[k] {
                acc = acc.mul_truncated(&self.linear[i], self.bound_ref())?;
            }
        }
        let acc = Arc::new(acc);
        self.cache
            .lock()
            .unwrap()
            .insert(exps.to_vec(), acc.clone());
        Ok(acc)
    }

    pub fn apply(&self, f: &SparsePoly) -> Result<SparsePoly> {
        if f.nvars != self.nvars {
            return Err(Error::ShapeMismatch(format!(
                "{}x{0} substitution into a polynomial in {} variables",
                self.nvars, f.nvars
            )));
        }
        if f.order != self.order {
            return Err(Error::OrderMismatch {
                left: f.order,
                right: self.order,
            });
        }
        let mut out = SparsePoly::zero(self.nvars, self.order);
        for (mono, c) in &f.terms {
            let mut shift = vec![0u32; self.nvars];
            let mut coef = c.clone();
            let mut mix = Vec::with_capacity(self.mixing.len());
            for (i, &e) in mono.0.iter().enumerate() {
                match &self.unit[i] {
                    Some((j, s)) if e > 0 => {
                        shift[*j] += e;
                        if !s.is_one() {
                            coef = &coef * &s.pow(e as u64);
                        }
                    }
                    Some(_) => {}
                    None => mix.push(e),
                }
            }
            let shift = Monomial(shift);
            let budget = match self.bound_ref() {
                Some((w, t)) => match t.checked_sub(shift.weight(w)) {
                    Some(b) => Some((w, b)),
                    None => continue,
                },
                None => None,
            };
            let part = self.mixing_part(&mix)?;
            for (pm, pc) in &part.terms {
                if let Some((w, b)) = budget {
                    if pm.weight(w) > b {
                        continue;
                    }
                }
                out.add_term(pm.mul(&shift), &coef * pc)?;
            }
        }
        Ok(out)
    }
}
