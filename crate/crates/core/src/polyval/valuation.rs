use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use num_integer::Integer;

use crate::cyclo::CycNum;
use crate::error::{Error, Result};
use crate::linalg::{from_columns, root_in_session, ExactMatrix};
use crate::weights::{element_order, weight_data};

use super::form::DiffForm;
use super::poly::{SparsePoly, Substitution};

/// Which coordinates a polynomial is written in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Coordinates {
    /// The original coordinates of `V`.
    Ambient,
    /// The eigencoordinates the valuation is diagonal in.
    Eigen,
}

/// The monomial valuation attached to integer weights on eigencoordinates.
///
/// `basis_change` has the eigenvectors as columns, so ambient coordinates
/// are `x = P y` in terms of eigencoordinates `y`.
#[derive(Clone, Debug)]
pub struct MonomialValuation {
    r: u32,
    weights: Vec<u32>,
    basis_change: ExactMatrix,
    cache: Arc<Mutex<HashMap<SparsePoly, SparsePoly>>>,
    full: Arc<Substitution>,
    truncated: Arc<Mutex<HashMap<u64, Arc<Substitution>>>>,
}

impl MonomialValuation {
    pub fn new(r: u32, weights: Vec<u32>, basis_change: ExactMatrix) -> Result<Self> {
        if weights.len() != basis_change.dim() {
            return Err(Error::ShapeMismatch(format!(
                "{} weights for a {}-dimensional space",
                weights.len(),
                basis_change.dim()
            )));
        }
        if basis_change.det().is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(MonomialValuation {
            full: Arc::new(Substitution::new(&basis_change, None)?),
            r,
            weights,
            basis_change,
            cache: Arc::default(),
            truncated: Arc::default(),
        })
    }

    /// Valuation diagonal in the given coordinates.
    pub fn with_weights(r: u32, weights: Vec<u32>, order: u32) -> Self {
        let n = weights.len();
        Self::new(r, weights, ExactMatrix::identity(n, order)).expect("identity is invertible")
    }

    /// `v_g`: eigencoordinates of `g`, the weight-`a` block carrying weight `a`.
    pub fn from_element(g: &ExactMatrix) -> Result<Self> {
        let r = element_order(g)?;
        let mut columns = vec![];
        let mut weights = vec![];
        for a in 0..r {
            let space = g.eigenspace(r, a as i64)?;
            for v in space.basis() {
                columns.push(v.clone());
                weights.push(a);
            }
        }
        if columns.len() != g.dim() {
            return Err(Error::Corrupt(format!(
                "eigenspaces of an order-{r} element span {} of {} dimensions",
                columns.len(),
                g.dim()
            )));
        }
        Self::new(r, weights, from_columns(&columns, g.order())?)
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn basis_change(&self) -> &ExactMatrix {
        &self.basis_change
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    /// `gcd` of the weights together with `r`.
    pub fn gcd_with_r(&self) -> u32 {
        self.weights.iter().fold(self.r, |g, &a| g.gcd(&a))
    }

    /// `gcd` of the nonzero weights; the value group on `K(V)` is `gcd * Z`.
    pub fn value_gcd(&self) -> u32 {
        self.weights.iter().fold(0, |g, &a| g.gcd(&a))
    }

    /// The valuation is onto `Z` exactly when the nonzero weights are coprime.
    pub fn is_surjective(&self) -> bool {
        self.value_gcd() == 1
    }

    /// `f(P y)`, cached per polynomial.
    pub fn to_eigen(&self, f: &SparsePoly) -> Result<SparsePoly> {
        if let Some(hit) = self.cache.lock().unwrap().get(f) {
            return Ok(hit.clone());
        }
        let converted = self.full.apply(f)?;
        self.cache
            .lock()
            .unwrap()
            .insert(f.clone(), converted.clone());
        Ok(converted)
    }

    /// Eigencoordinate conversion keeping only monomials of weight `<= bound`.
    /// Values up to `bound` are unaffected by the truncation.
    pub fn to_eigen_truncated(&self, f: &SparsePoly, bound: u64) -> Result<SparsePoly> {
        let sub = {
            let mut map = self.truncated.lock().unwrap();
            match map.get(&bound) {
                Some(s) => s.clone(),
                None => {
                    let s = Arc::new(Substitution::new(
                        &self.basis_change,
                        Some((self.weights.clone(), bound)),
                    )?);
                    map.insert(bound, s.clone());
                    s
                }
            }
        };
        sub.apply(f)
    }

    /// Minimum weight of a monomial of `f` (already in eigencoordinates).
    pub fn value_eigen(&self, f: &SparsePoly) -> Result<i64> {
        if f.nvars() != self.dim() {
            return Err(Error::ShapeMismatch("polynomial and valuation dimensions differ".into()));
        }
        f.terms()
            .map(|(m, _)| m.weight(&self.weights) as i64)
            .min()
            .ok_or(Error::ZeroValuation)
    }

    pub fn v_eval(&self, f: &SparsePoly, coords: Coordinates) -> Result<i64> {
        if f.is_zero() {
            return Err(Error::ZeroValuation);
        }
        match coords {
            Coordinates::Eigen => self.value_eigen(f),
            Coordinates::Ambient => self.value_eigen(&self.to_eigen(f)?),
        }
    }

    /// `v(f / h) = v(f) - v(h)`.
    pub fn v_eval_rational(
        &self,
        numerator: &SparsePoly,
        denominator: &SparsePoly,
        coords: Coordinates,
    ) -> Result<i64> {
        Ok(self.v_eval(numerator, coords)? - self.v_eval(denominator, coords)?)
    }

    /// Minimum over terms of the coefficient weight plus the weights of the
    /// differentials, so `v(dy_j) = a_j`. The form is in eigencoordinates.
    pub fn v_eval_form(&self, form: &DiffForm) -> Result<i64> {
        if form.nvars() != self.dim() {
            return Err(Error::ShapeMismatch("form and valuation dimensions differ".into()));
        }
        form.terms()
            .map(|(idx, m, _)| {
                (m.weight(&self.weights) + idx.iter().map(|&j| self.weights[j] as u64).sum::<u64>())
                    as i64
            })
            .min()
            .ok_or(Error::ZeroValuation)
    }

    /// Same, for a form written in ambient coordinates.
    pub fn v_eval_form_ambient(&self, form: &DiffForm) -> Result<i64> {
        self.v_eval_form(&form.pullback(&self.basis_change)?)
    }

    /// Discrepancy on `V`: `sum_j a_j - 1`, checked against the value of the
    /// volume form.
    pub fn discrepancy(&self) -> Result<i64> {
        let direct = self.weights.iter().map(|&a| a as i64).sum::<i64>() - 1;
        let order = self.basis_change.order();
        let via_form = self.v_eval_form(&DiffForm::volume(self.dim(), order))? - 1;
        if direct != via_form {
            return Err(Error::Corrupt(format!(
                "discrepancy {direct} disagrees with the volume form value {via_form}"
            )));
        }
        Ok(direct)
    }
}

pub fn from_element(g: &ExactMatrix) -> Result<MonomialValuation> {
    MonomialValuation::from_element(g)
}

pub fn v_eval(v: &MonomialValuation, f: &SparsePoly, coords: Coordinates) -> Result<i64> {
    v.v_eval(f, coords)
}

pub fn v_eval_rational(
    v: &MonomialValuation,
    numerator: &SparsePoly,
    denominator: &SparsePoly,
    coords: Coordinates,
) -> Result<i64> {
    v.v_eval_rational(numerator, denominator, coords)
}

pub fn v_eval_form(v: &MonomialValuation, form: &DiffForm) -> Result<i64> {
    v.v_eval_form(form)
}

pub fn discrepancy_v(v: &MonomialValuation) -> Result<i64> {
    v.discrepancy()
}

/// Discrepancy of `v_g / r` over the quotient, computed from the value of
/// the ambient volume form pulled back to eigencoordinates and checked
/// against `age(g) - 1`.
pub fn discrepancy_x(g: &ExactMatrix) -> Result<i64> {
    let v = MonomialValuation::from_element(g)?;
    let volume = DiffForm::volume(g.dim(), g.order());
    let form_value = v.v_eval_form_ambient(&volume)?;
    let r = v.r() as i64;
    if form_value % r != 0 {
        return Err(Error::NotSpecialLinear(format!(
            "volume form has value {form_value}, not divisible by the order {r}"
        )));
    }
    let disc = form_value / r - 1;
    let age = weight_data(g)?.integer_age()? as i64;
    if disc != age - 1 {
        return Err(Error::Corrupt(format!(
            "quotient discrepancy {disc} disagrees with age {age} - 1"
        )));
    }
    Ok(disc)
}

/// Components `f_a` with `g . f_a = z_r^a f_a`, summing to `f`.
pub fn weight_components(g: &ExactMatrix, f: &SparsePoly) -> Result<BTreeMap<u32, SparsePoly>> {
    let r = element_order(g)?;
    let order = g.order();
    let ginv = g.inverse()?;
    // images[k] = g^k . f = f(g^-k x)
    let mut images = Vec::with_capacity(r as usize);
    let mut power = ExactMatrix::identity(g.dim(), order);
    for _ in 0..r {
        images.push(f.substitute(&power)?);
        power = power.matmul(&ginv)?;
    }
    let inv_r = CycNum::from_ratio(1, r as i64, order);
    let mut out = BTreeMap::new();
    for a in 0..r {
        let mut comp = SparsePoly::zero(f.nvars(), order);
        for (k, img) in images.iter().enumerate() {
            let z = root_in_session(-(a as i64) * k as i64, r, order)?;
            comp = comp.add(&img.scale(&z)?)?;
        }
        let comp = comp.scale(&inv_r)?;
        if !comp.is_zero() {
            out.insert(a, comp);
        }
    }
    Ok(out)
}
