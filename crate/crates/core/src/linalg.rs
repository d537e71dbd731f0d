//! Exact linear algebra over `Q(z_N)`.
//!
//! Weight convention: the weight-`a` subspace of a matrix `g` with `g^r = I`
//! is the eigenspace for the eigenvalue `z_r^(-a)`. Weights are therefore
//! read on linear functions (a coordinate dual to a weight-`a` eigenvector
//! is multiplied by `z_r^a` under the contragredient action), not on vectors.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::cyclo::CycNum;
use crate::error::{Error, Result};

/// Square matrix over `Q(z_N)`, stored row-major.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<CycNum>>", into = "Vec<Vec<CycNum>>")]
pub struct ExactMatrix {
    n: usize,
    order: u32,
    entries: Vec<CycNum>,
}

impl ExactMatrix {
    pub fn identity(n: usize, order: u32) -> Self {
        Self::scalar(n, CycNum::one(order))
    }

    pub fn zero(n: usize, order: u32) -> Self {
        ExactMatrix {
            n,
            order,
            entries: vec![CycNum::zero(order); n * n],
        }
    }

    pub fn scalar(n: usize, c: CycNum) -> Self {
        let mut m = Self::zero(n, c.order());
        for i in 0..n {
            m.entries[i * n + i] = c.clone();
        }
        m
    }

    pub fn diagonal(diag: Vec<CycNum>) -> Result<Self> {
        let n = diag.len();
        let order = diag.first().map(CycNum::order).unwrap_or(1);
        let mut m = Self::zero(n, order);
        for (i, d) in diag.into_iter().enumerate() {
            if d.order() != order {
                return Err(Error::OrderMismatch {
                    left: order,
                    right: d.order(),
                });
            }
            m.entries[i * n + i] = d;
        }
        Ok(m)
    }

    pub fn from_rows(rows: Vec<Vec<CycNum>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::ShapeMismatch("empty matrix".into()));
        }
        let order = rows[0].first().map(CycNum::order).unwrap_or(1);
        let mut entries = Vec::with_capacity(n * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::ShapeMismatch(format!(
                    "row {i} has length {} in a {n}x{n} matrix",
                    row.len()
                )));
            }
            for x in row {
                if x.order() != order {
                    return Err(Error::OrderMismatch {
                        left: order,
                        right: x.order(),
                    });
                }
                entries.push(x);
            }
        }
        Ok(ExactMatrix { n, order, entries })
    }

    /// Integer matrix embedded in `Q(z_N)`.
    pub fn from_ints(rows: &[&[i64]], order: u32) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| CycNum::from_int(x, order)).collect())
                .collect(),
        )
    }

    /// Permutation matrix sending basis vector `e_i` to `e_perm[i]`.
    pub fn permutation(perm: &[usize], order: u32) -> Self {
        let n = perm.len();
        let mut m = Self::zero(n, order);
        for (i, &p) in perm.iter().enumerate() {
            m.entries[p * n + i] = CycNum::one(order);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn get(&self, i: usize, j: usize) -> &CycNum {
        &self.entries[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<CycNum>> {
        self.entries.chunks(self.n).map(<[CycNum]>::to_vec).collect()
    }

    pub fn row(&self, i: usize) -> &[CycNum] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn column(&self, j: usize) -> Vec<CycNum> {
        (0..self.n).map(|i| self.get(i, j).clone()).collect()
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::ShapeMismatch(format!(
                "{}x{0} vs {}x{1}",
                self.n, other.n
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

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = CycNum::zero(self.order);
                for k in 0..n {
                    let a = self.get(i, k);
                    if a.is_zero() {
                        continue;
                    }
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                entries.push(acc);
            }
        }
        Ok(ExactMatrix {
            n,
            order: self.order,
            entries,
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(ExactMatrix {
            n: self.n,
            order: self.order,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(ExactMatrix {
            n: self.n,
            order: self.order,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn scale(&self, c: &CycNum) -> Result<Self> {
        if c.order() != self.order {
            return Err(Error::OrderMismatch {
                left: self.order,
                right: c.order(),
            });
        }
        Ok(ExactMatrix {
            n: self.n,
            order: self.order,
            entries: self.entries.iter().map(|a| a * c).collect(),
        })
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for j in 0..n {
            for i in 0..n {
                entries.push(self.get(i, j).clone());
            }
        }
        ExactMatrix {
            n,
            order: self.order,
            entries,
        }
    }

    pub fn is_identity(&self) -> bool {
        (0..self.n).all(|i| {
            (0..self.n).all(|j| {
                let x = self.get(i, j);
                if i == j {
                    x.is_one()
                } else {
                    x.is_zero()
                }
            })
        })
    }

    /// At most one nonzero entry in every row and column.
    pub fn is_monomial(&self) -> bool {
        let n = self.n;
        let rows_ok = (0..n).all(|i| self.row(i).iter().filter(|x| !x.is_zero()).count() == 1);
        let cols_ok = (0..n).all(|j| (0..n).filter(|&i| !self.get(i, j).is_zero()).count() == 1);
        rows_ok && cols_ok
    }

    pub fn trace(&self) -> CycNum {
        (0..self.n).fold(CycNum::zero(self.order), |acc, i| &acc + self.get(i, i))
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> CycNum {
        let n = self.n;
        let mut m = self.rows();
        let mut sign_flip = false;
        let mut prev = CycNum::one(self.order);
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !m[i][k].is_zero()) else {
                return CycNum::zero(self.order);
            };
            if p != k {
                m.swap(p, k);
                sign_flip = !sign_flip;
            }
            let prev_inv = prev.inverse().expect("Bareiss pivot is nonzero");
            for i in k + 1..n {
                for j in k + 1..n {
                    let t = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                    m[i][j] = &t * &prev_inv;
                }
                m[i][k] = CycNum::zero(self.order);
            }
            prev = m[k][k].clone();
        }
        let d = if n == 0 {
            CycNum::one(self.order)
        } else {
            m[n - 1][n - 1].clone()
        };
        if sign_flip {
            -d
        } else {
            d
        }
    }

    pub fn inverse(&self) -> Result<Self> {
        let n = self.n;
        let mut a = self.rows();
        let mut inv = Self::identity(n, self.order).rows();
        for col in 0..n {
            let p = (col..n)
                .find(|&i| !a[i][col].is_zero())
                .ok_or(Error::DivisionByZero)?;
            a.swap(p, col);
            inv.swap(p, col);
            let piv = a[col][col].inverse()?;
            for j in 0..n {
                a[col][j] = &a[col][j] * &piv;
                inv[col][j] = &inv[col][j] * &piv;
            }
            for i in 0..n {
                if i == col || a[i][col].is_zero() {
                    continue;
                }
                let f = a[i][col].clone();
                for j in 0..n {
                    a[i][j] = &a[i][j] - &(&f * &a[col][j]);
                    inv[i][j] = &inv[i][j] - &(&f * &inv[col][j]);
                }
            }
        }
        Self::from_rows(inv)
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::identity(self.n, self.order);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.matmul(&base).expect("same shape");
            }
            e >>= 1;
            if e > 0 {
                base = base.matmul(&base).expect("same shape");
            }
        }
        acc
    }

    /// Smallest `r >= 1` with `self^r = I`, searching up to `bound`.
    pub fn multiplicative_order(&self, bound: u64) -> Result<u64> {
        let mut p = self.clone();
        for r in 1..=bound {
            if p.is_identity() {
                return Ok(r);
            }
            p = p.matmul(self)?;
        }
        Err(Error::NotFiniteOrder(bound))
    }

    pub fn rescale(&self, new_order: u32) -> Result<Self> {
        Ok(ExactMatrix {
            n: self.n,
            order: new_order,
            entries: self
                .entries
                .iter()
                .map(|x| x.rescale(new_order))
                .collect::<Result<_>>()?,
        })
    }

    pub fn apply(&self, v: &[CycNum]) -> Vec<CycNum> {
        (0..self.n)
            .map(|i| dot(self.row(i), v))
            .collect()
    }

    pub fn kernel(&self) -> Subspace {
        kernel_of_rows(self.rows(), self.n, self.order)
    }

    pub fn rank(&self) -> usize {
        self.n - self.kernel().dim()
    }

    /// The weight-`a` subspace: eigenspace for eigenvalue `z_r^(-a)`.
    pub fn eigenspace(&self, r: u32, a: i64) -> Result<Subspace> {
        self.check_finite_order(r)?;
        let lambda = root_in_session(-a, r, self.order)?;
        Ok(self
            .sub(&Self::scalar(self.n, lambda))
            .expect("same shape")
            .kernel())
    }

    /// Dimension of the weight-`a` subspace computed by the character
    /// projector `(1/r) sum_k z_r^(ak) tr(g^k)`.
    pub fn weight_multiplicity(&self, r: u32, a: i64) -> Result<usize> {
        self.check_finite_order(r)?;
        let mut acc = CycNum::zero(self.order);
        let mut power = Self::identity(self.n, self.order);
        for k in 0..r as i64 {
            let z = root_in_session(a * k, r, self.order)?;
            acc = &acc + &(&z * &power.trace());
            power = power.matmul(self)?;
        }
        let value = acc
            .as_rational()
            .map(|q| q / BigRational::from_integer(BigInt::from(r)))
            .filter(|q| q.is_integer())
            .and_then(|q| q.to_integer().to_usize())
            .ok_or_else(|| {
                Error::Corrupt(format!(
                    "projector trace for weight {a} mod {r} is not a nonnegative integer"
                ))
            })?;
        Ok(value)
    }

    fn check_finite_order(&self, r: u32) -> Result<()> {
        if r == 0 || !self.order.is_multiple_of(r) {
            return Err(Error::NotDivisible {
                from: r,
                to: self.order,
            });
        }
        if !self.pow(r as u64).is_identity() {
            return Err(Error::NotFiniteOrder(r as u64));
        }
        Ok(())
    }
}

/// `z_r^k` written in `Q(z_N)`, `r | N`.
pub fn root_in_session(k: i64, r: u32, order: u32) -> Result<CycNum> {
    if r == 0 || !order.is_multiple_of(r) {
        return Err(Error::NotDivisible { from: r, to: order });
    }
    CycNum::root_of_unity(k * (order / r) as i64, order as i64)
}

pub fn dot(a: &[CycNum], b: &[CycNum]) -> CycNum {
    let order = a.first().or(b.first()).map(CycNum::order).unwrap_or(1);
    a.iter().zip(b).fold(CycNum::zero(order), |acc, (x, y)| {
        if x.is_zero() || y.is_zero() {
            acc
        } else {
            &acc + &(x * y)
        }
    })
}

impl TryFrom<Vec<Vec<CycNum>>> for ExactMatrix {
    type Error = Error;
    fn try_from(rows: Vec<Vec<CycNum>>) -> Result<Self> {
        Self::from_rows(rows)
    }
}

impl From<ExactMatrix> for Vec<Vec<CycNum>> {
    fn from(m: ExactMatrix) -> Self {
        m.rows()
    }
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ExactMatrix<{}> {}x{}", self.order, self.n, self.n)?;
        for i in 0..self.n {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// A linear subspace of `Q(z_N)^n`, stored by its reduced row echelon basis.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    ambient_dim: usize,
    order: u32,
    basis: Vec<Vec<CycNum>>,
}

impl Subspace {
    pub fn full(n: usize, order: u32) -> Self {
        Self::span(
            ExactMatrix::identity(n, order).rows(),
            n,
            order,
        )
    }

    pub fn zero(n: usize, order: u32) -> Self {
        Subspace {
            ambient_dim: n,
            order,
            basis: vec![],
        }
    }

    /// Span of arbitrary vectors.
    pub fn span(vectors: Vec<Vec<CycNum>>, n: usize, order: u32) -> Self {
        let mut rows = vectors;
        let pivots = rref(&mut rows, n);
        rows.truncate(pivots.len());
        Subspace {
            ambient_dim: n,
            order,
            basis: rows,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn basis(&self) -> &[Vec<CycNum>] {
        &self.basis
    }

    /// Linear equations cutting out the subspace.
    pub fn annihilator(&self) -> Vec<Vec<CycNum>> {
        if self.basis.is_empty() {
            return ExactMatrix::identity(self.ambient_dim, self.order).rows();
        }
        kernel_of_rows(self.basis.clone(), self.ambient_dim, self.order).basis
    }

    pub fn intersect(&self, other: &Self) -> Self {
        let mut eqs = self.annihilator();
        eqs.extend(other.annihilator());
        kernel_of_rows(eqs, self.ambient_dim, self.order)
    }

    pub fn contains_subspace(&self, other: &Self) -> bool {
        other.dim() <= self.dim() && &self.intersect(other) == other
    }

    /// Image under a linear map.
    pub fn image(&self, m: &ExactMatrix) -> Self {
        Self::span(
            self.basis.iter().map(|v| m.apply(v)).collect(),
            self.ambient_dim,
            self.order,
        )
    }

    pub fn rescale(&self, new_order: u32) -> Result<Self> {
        let basis = self
            .basis
            .iter()
            .map(|v| v.iter().map(|x| x.rescale(new_order)).collect())
            .collect::<Result<_>>()?;
        Ok(Subspace {
            ambient_dim: self.ambient_dim,
            order: new_order,
            basis,
        })
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(dim {} in {}) ", self.dim(), self.ambient_dim)?;
        f.debug_list()
            .entries(self.basis.iter().map(|v| v.iter().map(ToString::to_string).collect::<Vec<_>>()))
            .finish()
    }
}

/// In-place reduced row echelon form; returns pivot columns. Zero rows are
/// moved to the bottom.
pub fn rref(rows: &mut [Vec<CycNum>], ncols: usize) -> Vec<usize> {
    let mut pivots = vec![];
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(p, r);
        let inv = rows[r][c].inverse().expect("pivot is nonzero");
        if !inv.is_one() {
            for x in rows[r].iter_mut() {
                if !x.is_zero() {
                    *x = &*x * &inv;
                }
            }
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row).skip(c) {
                if !p.is_zero() {
                    *x = &*x - &(&f * p);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

fn kernel_of_rows(mut rows: Vec<Vec<CycNum>>, n: usize, order: u32) -> Subspace {
    let pivots = rref(&mut rows, n);
    let mut basis = vec![];
    for free in (0..n).filter(|c| !pivots.contains(c)) {
        let mut v = vec![CycNum::zero(order); n];
        v[free] = CycNum::one(order);
        for (row, &pc) in rows.iter().zip(&pivots) {
            if !row[free].is_zero() {
                v[pc] = -&row[free];
            }
        }
        basis.push(v);
    }
    Subspace::span(basis, n, order)
}

/// Column matrix whose columns are the given vectors.
pub fn from_columns(cols: &[Vec<CycNum>], order: u32) -> Result<ExactMatrix> {
    let n = cols.len();
    if cols.iter().any(|c| c.len() != n) {
        return Err(Error::ShapeMismatch("column vectors must form a square matrix".into()));
    }
    let rows = (0..n)
        .map(|i| cols.iter().map(|c| c[i].clone()).collect())
        .collect::<Vec<Vec<CycNum>>>();
    if n == 0 {
        return Ok(ExactMatrix::zero(0, order));
    }
    ExactMatrix::from_rows(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(k: i64, n: i64) -> CycNum {
        CycNum::root_of_unity(k, n).unwrap()
    }

    /// Swaps coordinate pairs (1,2) <-> (3,4).
    fn swap4() -> ExactMatrix {
        ExactMatrix::permutation(&[2, 3, 0, 1], 2)
    }

    #[test]
    fn products() {
        let i2 = ExactMatrix::identity(2, 4);
        let m = ExactMatrix::diagonal(vec![z(1, 4), z(3, 4)]).unwrap();
        assert_eq!(i2.matmul(&m).unwrap(), m);
        let neg = ExactMatrix::scalar(2, CycNum::from_int(-1, 4));
        assert!(neg.matmul(&neg).unwrap().is_identity());
        assert!(swap4().matmul(&swap4()).unwrap().is_identity());
        assert!(ExactMatrix::identity(3, 1)
            .matmul(&ExactMatrix::identity(2, 1))
            .is_err());
    }

    #[test]
    fn determinants() {
        assert!(ExactMatrix::identity(5, 3).det().is_one());
        assert!(ExactMatrix::scalar(2, CycNum::from_int(-1, 2)).det().is_one());
        assert!(ExactMatrix::scalar(4, z(1, 4)).det().is_one());
        assert_eq!(swap4().det(), CycNum::one(2));
        let m = ExactMatrix::from_ints(&[&[0, 1], &[1, 0]], 1).unwrap();
        assert_eq!(m.det(), CycNum::from_int(-1, 1));
        let singular = ExactMatrix::from_ints(&[&[1, 2], &[2, 4]], 1).unwrap();
        assert!(singular.det().is_zero());
    }

    #[test]
    fn kernels() {
        assert_eq!(ExactMatrix::zero(3, 1).kernel(), Subspace::full(3, 1));
        let m = ExactMatrix::scalar(2, CycNum::from_int(-2, 1));
        assert_eq!(m.kernel().dim(), 0);
        // swap4 - I: solutions x1 = x3, x2 = x4.
        let k = swap4().sub(&ExactMatrix::identity(4, 2)).unwrap().kernel();
        let one = CycNum::one(2);
        let zero = CycNum::zero(2);
        let expected = Subspace::span(
            vec![
                vec![one.clone(), zero.clone(), one.clone(), zero.clone()],
                vec![zero.clone(), one.clone(), zero.clone(), one.clone()],
            ],
            4,
            2,
        );
        assert_eq!(k, expected);
    }

    #[test]
    fn eigenspaces() {
        let id = ExactMatrix::identity(3, 1);
        assert_eq!(id.eigenspace(1, 0).unwrap().dim(), 3);
        let neg = ExactMatrix::scalar(2, CycNum::from_int(-1, 2));
        assert_eq!(neg.eigenspace(2, 1).unwrap().dim(), 2);
        let anti = swap4().eigenspace(2, 1).unwrap();
        let one = CycNum::one(2);
        let zero = CycNum::zero(2);
        let expected = Subspace::span(
            vec![
                vec![one.clone(), zero.clone(), -&one, zero.clone()],
                vec![zero.clone(), one.clone(), zero.clone(), -&one],
            ],
            4,
            2,
        );
        assert_eq!(anti, expected);
        // r must divide N and g^r = I.
        assert!(neg.eigenspace(3, 0).is_err());
        assert!(swap4().rescale(4).unwrap().eigenspace(4, 0).is_ok());
        assert!(ExactMatrix::scalar(2, z(1, 4)).eigenspace(2, 0).is_err());
    }

    #[test]
    fn weight_multiplicities() {
        assert_eq!(ExactMatrix::identity(4, 1).weight_multiplicity(1, 0).unwrap(), 4);
        let neg = ExactMatrix::scalar(2, CycNum::from_int(-1, 2));
        assert_eq!(neg.weight_multiplicity(2, 1).unwrap(), 2);
        assert_eq!(neg.weight_multiplicity(2, 0).unwrap(), 0);
        let mu4 = ExactMatrix::scalar(4, z(1, 4));
        // eigenvalue z_4 = z_4^(-3)
        assert_eq!(mu4.weight_multiplicity(4, 3).unwrap(), 4);
        for a in 0..3 {
            assert_eq!(mu4.weight_multiplicity(4, a).unwrap(), 0);
        }
    }

    #[test]
    fn inverse_roundtrip() {
        let m = ExactMatrix::from_rows(vec![
            vec![z(1, 3), CycNum::from_int(2, 3)],
            vec![CycNum::from_ratio(1, 2, 3), z(1, 3)],
        ])
        .unwrap();
        let inv = m.inverse().unwrap();
        assert!(m.matmul(&inv).unwrap().is_identity());
        let singular = ExactMatrix::from_ints(&[&[1, 2], &[2, 4]], 1).unwrap();
        assert!(singular.inverse().is_err());
    }

    #[test]
    fn subspace_operations() {
        let one = CycNum::one(1);
        let zero = CycNum::zero(1);
        let xy = Subspace::span(
            vec![vec![one.clone(), zero.clone(), zero.clone()], vec![zero.clone(), one.clone(), zero.clone()]],
            3,
            1,
        );
        let yz = Subspace::span(
            vec![vec![zero.clone(), one.clone(), zero.clone()], vec![zero.clone(), zero.clone(), one.clone()]],
            3,
            1,
        );
        let y = xy.intersect(&yz);
        assert_eq!(y.dim(), 1);
        assert!(xy.contains_subspace(&y));
        assert!(!y.contains_subspace(&xy));
        // same span, different generators
        let xy2 = Subspace::span(
            vec![vec![one.clone(), one.clone(), zero.clone()], vec![one.clone(), -&one, zero.clone()]],
            3,
            1,
        );
        assert_eq!(xy, xy2);
    }
}
