//! Invariant polynomials by group averaging, and the ramification index of
//! `K(V) / K(V)^G` at the monomial valuation `v_g`.
//!
//! `r_g` is the index in `Z` of the value group `v_g(K(V)^G*)`. Every
//! `G`-invariant is `g`-invariant, so its value lies in `rZ`; hence
//! `r | r_g`. The gcd `g_hat` of the values seen on invariants up to a degree
//! bound is a multiple of `r_g`, so `r | r_g | g_hat` and `g_hat == r`
//! certifies `r_g == r` exactly.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::{Arc, Mutex};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::cyclo::CycNum;
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::linalg::ExactMatrix;
use crate::par;
use crate::polyval::{Monomial, MonomialValuation, SparsePoly};

/// `(1/|G|) sum_g g . f`.
pub fn reynolds(group: &FiniteGroup, f: &SparsePoly) -> Result<SparsePoly> {
    let n = f.nvars();
    let order = f.order();
    // sum_g f(g^-1 x) runs over the same matrices as sum_h f(h x)
    let sum = par::map_reduce(
        group.elements(),
        |h| f.substitute(h),
        || Ok(SparsePoly::zero(n, order)),
        |a, b| a?.add(&b?),
    )?;
    sum.scale(&CycNum::from_ratio(1, group.len() as i64, order))
}

/// Invariants spanning `k[V]^G` in each degree up to `degree_bound`.
#[derive(Clone, Debug)]
pub struct InvariantBasis {
    pub degree_bound: usize,
    pub by_degree: Vec<Vec<SparsePoly>>,
}

impl InvariantBasis {
    pub fn elements(&self) -> impl Iterator<Item = &SparsePoly> {
        self.by_degree.iter().flatten()
    }

    pub fn len(&self) -> usize {
        self.by_degree.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Lazily computed homogeneous invariants of a group, cached per degree.
pub struct InvariantRing<'g> {
    group: &'g FiniteGroup,
    monomial_group: bool,
    cache: Mutex<HashMap<u32, Arc<Vec<SparsePoly>>>>,
}

impl<'g> InvariantRing<'g> {
    pub fn new(group: &'g FiniteGroup) -> Self {
        InvariantRing {
            group,
            monomial_group: group.generators().all(ExactMatrix::is_monomial),
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn group(&self) -> &FiniteGroup {
        self.group
    }

    /// A basis of the degree-`d` invariants.
    pub fn degree(&self, d: u32) -> Result<Arc<Vec<SparsePoly>>> {
        if let Some(hit) = self.cache.lock().unwrap().get(&d) {
            return Ok(hit.clone());
        }
        let basis = Arc::new(if self.monomial_group {
            self.orbit_sums(d)?
        } else {
            self.averaged_monomials(d)?
        });
        self.cache.lock().unwrap().insert(d, basis.clone());
        Ok(basis)
    }

    pub fn basis(&self, degree_bound: usize) -> Result<InvariantBasis> {
        let by_degree = (0..=degree_bound as u32)
            .map(|d| self.degree(d).map(|b| b.as_ref().clone()))
            .collect::<Result<_>>()?;
        Ok(InvariantBasis {
            degree_bound,
            by_degree,
        })
    }

    /// Monomial matrices permute monomials up to scalars, so the average of
    /// one monomial per orbit suffices and the averages have disjoint support.
    fn orbit_sums(&self, d: u32) -> Result<Vec<SparsePoly>> {
        let n = self.group.dim();
        let order = self.group.cyclotomic_order();
        // h sends x_i to c * x_j
        let maps: Vec<Vec<(usize, CycNum)>> = self
            .group
            .elements()
            .iter()
            .map(|h| {
                (0..n)
                    .map(|i| {
                        let (j, c) = h
                            .row(i)
                            .iter()
                            .enumerate()
                            .find(|(_, c)| !c.is_zero())
                            .expect("monomial matrix rows are nonzero");
                        (j, c.clone())
                    })
                    .collect()
            })
            .collect();
        let mut covered: HashSet<Monomial> = HashSet::new();
        let mut reps = vec![];
        for m in Monomial::all_of_degree(n, d) {
            if covered.contains(&m) {
                continue;
            }
            for map in &maps {
                let mut e = vec![0u32; n];
                for (i, &ei) in m.0.iter().enumerate() {
                    e[map[i].0] += ei;
                }
                covered.insert(Monomial(e));
            }
            reps.push(m);
        }
        let inv_len = CycNum::from_ratio(1, self.group.len() as i64, order);
        let sums: Vec<Result<SparsePoly>> = par::map_collect(&reps, |m| {
            let mut acc = SparsePoly::zero(n, order);
            for map in &maps {
                let mut e = vec![0u32; n];
                let mut coef = inv_len.clone();
                for (i, &ei) in m.0.iter().enumerate() {
                    if ei > 0 {
                        let (j, c) = &map[i];
                        e[*j] += ei;
                        if !c.is_one() {
                            coef = &coef * &c.pow(ei as u64);
                        }
                    }
                }
                acc.add_term(Monomial(e), coef)?;
            }
            Ok(acc)
        });
        let mut out = vec![];
        for s in sums {
            let s = s?;
            if !s.is_zero() {
                out.push(s);
            }
        }
        Ok(out)
    }

    fn averaged_monomials(&self, d: u32) -> Result<Vec<SparsePoly>> {
        let n = self.group.dim();
        let order = self.group.cyclotomic_order();
        let monomials = Monomial::all_of_degree(n, d);
        let averaged: Vec<Result<SparsePoly>> = par::map_collect(&monomials, |m| {
            reynolds(self.group, &SparsePoly::monomial(m.clone(), CycNum::one(order))?)
        });
        let polys = averaged.into_iter().collect::<Result<Vec<_>>>()?;
        Ok(independent_subset(polys))
    }
}

/// Linearly independent polynomials spanning the same space, via sparse
/// elimination over graded-lex columns.
fn independent_subset(polys: Vec<SparsePoly>) -> Vec<SparsePoly> {
    let mut echelon = SparseEchelon::new(0);
    let mut kept = vec![];
    for p in polys {
        if p.is_zero() {
            continue;
        }
        let row: BTreeMap<(u64, Monomial), CycNum> =
            p.terms().map(|(m, c)| ((0, m.clone()), c.clone())).collect();
        if echelon.insert(row, vec![]).is_some() {
            kept.push(p);
        }
    }
    kept
}

type Column = (u64, Monomial);
type SparseRow = BTreeMap<Column, CycNum>;

/// Row echelon form with sparse rows keyed by ordered columns. Each stored
/// row has a distinct leading (smallest) column. A combination vector over
/// the inserted inputs is tracked alongside each row.
struct SparseEchelon {
    rows: BTreeMap<Column, (SparseRow, Vec<CycNum>)>,
    width: usize,
}

impl SparseEchelon {
    fn new(width: usize) -> Self {
        SparseEchelon {
            rows: BTreeMap::new(),
            width,
        }
    }

    /// Reduces `row` against the stored rows; stores and returns its new
    /// leading column if it does not reduce to zero.
    fn insert(
        &mut self,
        mut row: BTreeMap<(u64, Monomial), CycNum>,
        mut combo: Vec<CycNum>,
    ) -> Option<(u64, Monomial)> {
        loop {
            let (lead, c) = row.iter().next().map(|(k, c)| (k.clone(), c.clone()))?;
            let Some((pivot, pivot_combo)) = self.rows.get(&lead) else {
                let inv = c.inverse().expect("leading coefficient is nonzero");
                for x in row.values_mut() {
                    *x = &*x * &inv;
                }
                for x in combo.iter_mut() {
                    *x = &*x * &inv;
                }
                self.rows.insert(lead.clone(), (row, combo));
                return Some(lead);
            };
            // pivot rows are normalized to leading coefficient 1
            for (k, p) in pivot {
                let t = &c * p;
                let e = row.entry(k.clone()).or_insert_with(|| CycNum::zero(t.order()));
                *e = &*e - &t;
                if e.is_zero() {
                    row.remove(k);
                }
            }
            for i in 0..self.width {
                combo[i] = &combo[i] - &(&c * &pivot_combo[i]);
            }
        }
    }
}

/// Exactness of a ramification certificate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RgStatus {
    /// `r_g` is determined.
    Exact,
    /// Only the divisor chain `r | r_g | rg_bound` is known.
    LowerConfidence,
}

/// What was learned about `r_g` for one element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RamificationCertificate {
    pub r: u32,
    /// gcd of the positive values of `v_g` seen on invariants.
    pub rg_bound: u64,
    /// The value of `r_g` when `status` is exact.
    pub rg: Option<u64>,
    pub status: RgStatus,
    /// Highest invariant degree examined.
    pub degree_used: usize,
    pub note: String,
}

/// Outcome of checking `r_g == r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RgVerdict {
    Holds,
    Fails { r: u32, rg: u64 },
    Inconclusive { r: u32, rg_bound: u64, degree_bound: usize },
}

/// Result of searching for invariants `f, h` with `v_g(f) - v_g(h) = r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProbeReport {
    Witness {
        numerator: SparsePoly,
        denominator: SparsePoly,
        difference: i64,
    },
    Exhausted {
        degree_bound: usize,
        values: Vec<i64>,
    },
}

/// Values of `v_g` attained on the degree-`d` invariants, each with an
/// ambient invariant polynomial attaining it.
struct DegreeValues {
    values: Vec<(i64, SparsePoly)>,
}

impl<'g> InvariantRing<'g> {
    /// With `bound`, monomials of weight above it are dropped before
    /// elimination, so only values `<= bound` are reported. Witnesses are
    /// built only when `witnesses` is set.
    fn values_in_degree(
        &self,
        v: &MonomialValuation,
        d: u32,
        bound: Option<u64>,
        witnesses: bool,
    ) -> Result<DegreeValues> {
        let invs = self.degree(d)?;
        if invs.is_empty() {
            return Ok(DegreeValues { values: vec![] });
        }
        let converted: Vec<Result<SparsePoly>> = par::map_collect(&invs, |f| match bound {
            Some(b) => v.to_eigen_truncated(f, b),
            None => v.to_eigen(f),
        });
        let order = self.group.cyclotomic_order();
        let width = if witnesses { invs.len() } else { 0 };
        let mut echelon = SparseEchelon::new(width);
        for (i, f) in converted.into_iter().enumerate() {
            let row = f?
                .terms()
                .map(|(m, c)| ((m.weight(v.weights()), m.clone()), c.clone()))
                .collect();
            let mut combo = vec![CycNum::zero(order); width];
            if witnesses {
                combo[i] = CycNum::one(order);
            }
            echelon.insert(row, combo);
        }
        // one value per distinct pivot weight; rows are sorted by weight
        let mut out: Vec<(i64, SparsePoly)> = vec![];
        for ((w, _), (_, combo)) in &echelon.rows {
            if out.last().is_some_and(|(x, _)| *x == *w as i64) {
                continue;
            }
            let mut witness = SparsePoly::zero(self.group.dim(), order);
            for (c, f) in combo.iter().zip(invs.iter()) {
                if !c.is_zero() {
                    witness = witness.add(&f.scale(c)?)?;
                }
            }
            out.push((*w as i64, witness));
        }
        Ok(DegreeValues { values: out })
    }

    /// gcd of the positive values seen in degrees `1..=degree_bound`, and the
    /// last degree examined.
    fn scan_values(
        &self,
        v: &MonomialValuation,
        degree_bound: usize,
        bound: Option<u64>,
        done: impl Fn(u64) -> bool,
    ) -> Result<(u64, usize)> {
        let uniform = v.weights().iter().all(|&a| a == v.weights()[0]);
        let mut gcd = 0u64;
        for d in 1..=degree_bound as u32 {
            if uniform {
                // v_g(f) = a * deg f on homogeneous f
                let w = v.weights()[0] as u64 * d as u64;
                if w > 0 && !self.degree(d)?.is_empty() {
                    gcd = gcd.gcd(&w);
                }
            } else {
                for (w, _) in self.values_in_degree(v, d, bound, false)?.values {
                    if w > 0 {
                        gcd = gcd.gcd(&(w as u64));
                    }
                }
            }
            if done(gcd) {
                return Ok((gcd, d as usize));
            }
        }
        Ok((gcd, degree_bound))
    }

    /// See [`compute_rg`].
    pub fn compute_rg(&self, g: &ExactMatrix, degree_bound: usize) -> Result<RamificationCertificate> {
        let v = MonomialValuation::from_element(g)?;
        let r = v.r();
        if r == 1 {
            return Ok(RamificationCertificate {
                r,
                rg_bound: 1,
                rg: Some(1),
                status: RgStatus::Exact,
                degree_used: 0,
                note: "trivial element: r = r_g = 1".into(),
            });
        }
        let scalar_rg = self.scalar_certificate(&v);
        let done = |gcd: u64| gcd == r as u64 || (gcd != 0 && Some(gcd) == scalar_rg);
        // Every value is a multiple of r_g, so a gcd over the values up to a
        // weight bound is still a multiple of r_g. Try the cheap bound first.
        let first = (r as u64).max(scalar_rg.unwrap_or(0));
        let mut gcd = 0u64;
        let mut degree_used = 0;
        for bound in [Some(first), None] {
            (gcd, degree_used) = self.scan_values(&v, degree_bound, bound, done)?;
            if done(gcd) {
                break;
            }
        }
        if gcd == 0 {
            return Err(Error::DegreeBoundTooSmall(degree_bound));
        }
        if !gcd.is_multiple_of(r as u64) {
            return Err(Error::Corrupt(format!(
                "value gcd {gcd} of invariants is not a multiple of r = {r}"
            )));
        }
        let cert = if gcd == r as u64 {
            RamificationCertificate {
                r,
                rg_bound: gcd,
                rg: Some(gcd),
                status: RgStatus::Exact,
                degree_used,
                note: format!("r = {r} divides r_g, which divides the value gcd {gcd}"),
            }
        } else if Some(gcd) == scalar_rg {
            RamificationCertificate {
                r,
                rg_bound: gcd,
                rg: Some(gcd),
                status: RgStatus::Exact,
                degree_used,
                note: format!(
                    "v_g is a multiple of the degree and G contains {} scalars, so r_g = {gcd}",
                    self.group.scalar_count()
                ),
            }
        } else {
            RamificationCertificate {
                r,
                rg_bound: gcd,
                rg: None,
                status: RgStatus::LowerConfidence,
                degree_used,
                note: format!("{r} | r_g | {gcd}"),
            }
        };
        Ok(cert)
    }

    /// When all weights equal `c > 0`, `v_g = c * deg`. The degree valuation
    /// restricted to `K(V)^G` has ramification index equal to the number of
    /// scalar matrices in `G` (they form its inertia group), so
    /// `r_g = c * #scalars`.
    fn scalar_certificate(&self, v: &MonomialValuation) -> Option<u64> {
        let c = *v.weights().first()?;
        (c > 0 && v.weights().iter().all(|&a| a == c))
            .then(|| c as u64 * self.group.scalar_count() as u64)
    }

    /// Doubles the degree bound up to `4 |G|` until the certificate is exact.
    pub fn compute_rg_escalating(
        &self,
        g: &ExactMatrix,
        degree_bound: usize,
    ) -> Result<RamificationCertificate> {
        let cap = 4 * self.group.len();
        let mut d = degree_bound.max(1);
        loop {
            match self.compute_rg(g, d) {
                Ok(c) if c.status == RgStatus::Exact || d >= cap => return Ok(c),
                Err(Error::DegreeBoundTooSmall(_)) if d < cap => {}
                Err(e) => return Err(e),
                Ok(_) => {}
            }
            d = (2 * d).min(cap);
        }
    }

    pub fn check_rg_lemma(&self, g: &ExactMatrix, degree_bound: usize) -> Result<RgVerdict> {
        let cert = match self.compute_rg(g, degree_bound) {
            Ok(c) => c,
            Err(Error::DegreeBoundTooSmall(_)) => {
                return Ok(RgVerdict::Inconclusive {
                    r: MonomialValuation::from_element(g)?.r(),
                    rg_bound: 0,
                    degree_bound,
                })
            }
            Err(e) => return Err(e),
        };
        Ok(match (cert.status, cert.rg) {
            (RgStatus::Exact, Some(rg)) if rg == cert.r as u64 => RgVerdict::Holds,
            (RgStatus::Exact, Some(rg)) => RgVerdict::Fails { r: cert.r, rg },
            _ => RgVerdict::Inconclusive {
                r: cert.r,
                rg_bound: cert.rg_bound,
                degree_bound,
            },
        })
    }

    pub fn conjecture_probe(&self, g: &ExactMatrix, degree_bound: usize) -> Result<ProbeReport> {
        let v = MonomialValuation::from_element(g)?;
        let r = v.r() as i64;
        let n = self.group.dim();
        let order = self.group.cyclotomic_order();
        let one = SparsePoly::one(n, order);
        let mut seen: BTreeMap<i64, SparsePoly> = BTreeMap::from([(0, one.clone())]);
        for d in 1..=degree_bound as u32 {
            let values = self.values_in_degree(&v, d, None, true)?.values;
            if r == 1 {
                // mu_1 is trivial, any invariant qualifies
                if let Some((_, f)) = values.into_iter().next() {
                    return Ok(ProbeReport::Witness {
                        numerator: f,
                        denominator: one,
                        difference: 0,
                    });
                }
                continue;
            }
            for (w, f) in values {
                if let Some(h) = seen.get(&(w - r)) {
                    return Ok(ProbeReport::Witness {
                        numerator: f,
                        denominator: h.clone(),
                        difference: r,
                    });
                }
                if let Some(h) = seen.get(&(w + r)) {
                    return Ok(ProbeReport::Witness {
                        numerator: h.clone(),
                        denominator: f,
                        difference: r,
                    });
                }
                seen.entry(w).or_insert(f);
            }
        }
        Ok(ProbeReport::Exhausted {
            degree_bound,
            values: seen.into_keys().collect(),
        })
    }
}

pub fn invariant_basis(group: &FiniteGroup, degree_bound: usize) -> Result<InvariantBasis> {
    InvariantRing::new(group).basis(degree_bound)
}

/// Certificate for `r_g` using invariants of degree at most `degree_bound`.
///
/// Degrees are scanned upwards and the scan stops once the value gcd equals
/// `r` (or a scalar-subgroup certificate), since further invariants cannot
/// lower it.
pub fn compute_rg(
    group: &FiniteGroup,
    g: &ExactMatrix,
    degree_bound: usize,
) -> Result<RamificationCertificate> {
    InvariantRing::new(group).compute_rg(g, degree_bound)
}

pub fn check_rg_lemma(group: &FiniteGroup, g: &ExactMatrix, degree_bound: usize) -> Result<RgVerdict> {
    InvariantRing::new(group).check_rg_lemma(g, degree_bound)
}

pub fn conjecture_probe(group: &FiniteGroup, g: &ExactMatrix, degree_bound: usize) -> Result<ProbeReport> {
    InvariantRing::new(group).conjecture_probe(g, degree_bound)
}
