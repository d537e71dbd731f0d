//! Exact arithmetic in cyclotomic fields `Q(z_N)`.
//!
//! An element is stored by its coordinates in the power basis
//! `1, z, ..., z^(phi(N)-1)`, i.e. as the remainder of a rational polynomial
//! modulo the cyclotomic polynomial `Phi_N`. The remainder is unique, so
//! equality, ordering and hashing are all coefficient-wise.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Integer coefficients of `Phi_N`, lowest degree first. Monic of degree `phi(N)`.
pub fn cyclotomic_polynomial(n: u32) -> Arc<Vec<i64>> {
    static CACHE: OnceLock<RwLock<HashMap<u32, Arc<Vec<i64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(p) = cache.read().unwrap().get(&n) {
        return p.clone();
    }
    // x^n - 1 divided by Phi_d for every proper divisor d.
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            num = exact_div_monic(&num, &cyclotomic_polynomial(d));
        }
    }
    let p = Arc::new(num);
    cache.write().unwrap().insert(n, p.clone());
    p
}

fn exact_div_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qd = num.len() - 1 - dd;
    let mut q = vec![0i64; qd + 1];
    for i in (0..=qd).rev() {
        let c = rem[i + dd];
        q[i] = c;
        if c != 0 {
            for (j, &dj) in den.iter().enumerate() {
                rem[i + j] -= c * dj;
            }
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0));
    q
}

/// Euler's totient.
pub fn totient(n: u32) -> usize {
    let mut n = n as u64;
    let mut result = n;
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result as usize
}

/// An element of `Q(z_N)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CycNum {
    order: u32,
    coeffs: Vec<BigRational>,
}

impl CycNum {
    pub fn zero(order: u32) -> Self {
        assert!(order > 0, "cyclotomic order must be positive");
        CycNum {
            order,
            coeffs: vec![BigRational::zero(); totient(order)],
        }
    }

    pub fn one(order: u32) -> Self {
        Self::from_rational(BigRational::one(), order)
    }

    pub fn from_int(value: i64, order: u32) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(value)), order)
    }

    pub fn from_ratio(num: i64, den: i64, order: u32) -> Self {
        Self::from_rational(BigRational::new(num.into(), den.into()), order)
    }

    pub fn from_rational(value: BigRational, order: u32) -> Self {
        let mut z = Self::zero(order);
        z.coeffs[0] = value;
        z
    }

    /// Builds an element from arbitrary power-basis coordinates
    /// `sum c_i z^i` (any length), reducing modulo `Phi_N`.
    pub fn from_power_coeffs(coeffs: Vec<BigRational>, order: u32) -> Self {
        assert!(order > 0, "cyclotomic order must be positive");
        CycNum {
            order,
            coeffs: reduce(coeffs, order),
        }
    }

    /// `z_N^(k mod N)`.
    pub fn root_of_unity(k: i64, order: i64) -> Result<Self> {
        if order <= 0 || order > u32::MAX as i64 {
            return Err(Error::InvalidOrder(order));
        }
        let e = k.rem_euclid(order) as usize;
        let mut c = vec![BigRational::zero(); e + 1];
        c[e] = BigRational::one();
        Ok(Self::from_power_coeffs(c, order as u32))
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// The rational value if the element lies in `Q`.
    pub fn as_rational(&self) -> Option<&BigRational> {
        self.coeffs[1..]
            .iter()
            .all(Zero::is_zero)
            .then(|| &self.coeffs[0])
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.order != other.order {
            return Err(Error::OrderMismatch {
                left: self.order,
                right: other.order,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(CycNum {
            order: self.order,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(CycNum {
            order: self.order,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        if let Some(r) = other.as_rational() {
            return Ok(self.scale(r));
        }
        if let Some(r) = self.as_rational() {
            return Ok(other.scale(r));
        }
        let d = self.coeffs.len();
        let mut prod = vec![BigRational::zero(); 2 * d - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        Ok(CycNum {
            order: self.order,
            coeffs: reduce(prod, self.order),
        })
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        CycNum {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    /// Multiplicative inverse via the extended Euclidean algorithm against `Phi_N`.
    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(r) = self.as_rational() {
            return Ok(Self::from_rational(r.recip(), self.order));
        }
        let phi: Vec<BigRational> = cyclotomic_polynomial(self.order)
            .iter()
            .map(|&c| BigRational::from_integer(c.into()))
            .collect();
        // Invariant: s * a == r (mod Phi_N).
        let mut r0 = phi;
        let mut r1 = trim(self.coeffs.clone());
        let mut s0: Vec<BigRational> = vec![];
        let mut s1 = vec![BigRational::one()];
        while r1.len() > 1 {
            let (q, rem) = poly_divrem(&r0, &r1);
            let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, rem);
            s0 = std::mem::replace(&mut s1, s2);
        }
        // r1 is a nonzero constant since Phi_N is irreducible.
        let c = r1[0].recip();
        let s: Vec<BigRational> = s1.into_iter().map(|x| x * &c).collect();
        Ok(Self::from_power_coeffs(s, self.order))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        self.try_mul(&other.inverse()?)
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.order);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// The same field element inside `Q(z_M)`, `N | M`, via `z_N -> z_M^(M/N)`.
    pub fn rescale(&self, new_order: u32) -> Result<Self> {
        if new_order == 0 || !new_order.is_multiple_of(self.order) {
            return Err(Error::NotDivisible {
                from: self.order,
                to: new_order,
            });
        }
        if new_order == self.order {
            return Ok(self.clone());
        }
        let step = (new_order / self.order) as usize;
        let mut c = vec![BigRational::zero(); step * (self.coeffs.len() - 1) + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            c[i * step] = a.clone();
        }
        Ok(Self::from_power_coeffs(c, new_order))
    }
}

fn reduce(mut c: Vec<BigRational>, order: u32) -> Vec<BigRational> {
    let phi = cyclotomic_polynomial(order);
    let d = phi.len() - 1;
    for i in (d..c.len()).rev() {
        if c[i].is_zero() {
            continue;
        }
        let lead = std::mem::replace(&mut c[i], BigRational::zero());
        for (j, &pj) in phi[..d].iter().enumerate() {
            if pj != 0 {
                c[i - d + j] -= &lead * BigInt::from(pj);
            }
        }
    }
    c.resize(d, BigRational::zero());
    c
}

fn trim(mut p: Vec<BigRational>) -> Vec<BigRational> {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trim(out)
}

fn poly_divrem(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut rem = trim(a.to_vec());
    let db = b.len() - 1;
    if rem.len() < b.len() {
        return (vec![], rem);
    }
    let mut q = vec![BigRational::zero(); rem.len() - db];
    let lead_inv = b[db].recip();
    while rem.len() >= b.len() {
        let shift = rem.len() - b.len();
        let c = rem.last().unwrap() * &lead_inv;
        for (j, bj) in b.iter().enumerate() {
            rem[shift + j] -= &c * bj;
        }
        q[shift] = c;
        rem = trim(rem);
    }
    (trim(q), rem)
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $inner:ident) => {
        impl $trait<&CycNum> for &CycNum {
            type Output = CycNum;
            /// Panics on mismatched cyclotomic orders; use the `try_` form to recover.
            fn $method(self, rhs: &CycNum) -> CycNum {
                self.$inner(rhs).expect("cyclotomic order mismatch")
            }
        }
        impl $trait for CycNum {
            type Output = CycNum;
            fn $method(self, rhs: CycNum) -> CycNum {
                (&self).$inner(&rhs).expect("cyclotomic order mismatch")
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);

impl Neg for &CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        CycNum {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        -&self
    }
}

/// Multiplicative order of a root of unity `z_N^k`: `N / gcd(k, N)`.
pub fn root_order(k: i64, n: u32) -> u32 {
    n / (k.rem_euclid(n as i64) as u64).gcd(&(n as u64)) as u32
}

/// Renders as `(p/q)*z^k + ...`, lowest power first; zero renders as `(0)`.
impl fmt::Display for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            if k > 0 {
                write!(f, "*z^{k}")?;
            }
        }
        if first {
            f.write_str("(0)")?;
        }
        Ok(())
    }
}

impl fmt::Debug for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycNum<{}>[{}]", self.order, self)
    }
}

/// Parses the `Display` form back into `Q(z_N)` for a given `N`.
pub fn parse_cycnum(text: &str, order: u32) -> Result<CycNum> {
    let err = || Error::Parse(format!("bad cyclotomic literal `{text}`"));
    let mut coeffs: Vec<BigRational> = vec![];
    let t = text.trim();
    if t.is_empty() {
        return Err(err());
    }
    for term in t.split(" + ") {
        let term = term.trim();
        let (coef, power) = match term.split_once(")*z^") {
            Some((c, p)) => (c, p.parse::<usize>().map_err(|_| err())?),
            None => (term.strip_suffix(')').ok_or_else(err)?, 0),
        };
        let coef = coef.strip_prefix('(').ok_or_else(err)?;
        let value = parse_rational(coef).ok_or_else(err)?;
        if coeffs.len() <= power {
            coeffs.resize(power + 1, BigRational::zero());
        }
        coeffs[power] += value;
    }
    Ok(CycNum::from_power_coeffs(coeffs, order))
}

pub(crate) fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                return None;
            }
            Some(BigRational::new(p.trim().parse().ok()?, q))
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

fn int_to_json(i: &BigInt) -> serde_json::Value {
    match i.to_i64() {
        Some(v) => serde_json::Value::from(v),
        None => serde_json::Value::String(i.to_string()),
    }
}

fn int_from_json(v: &serde_json::Value) -> Option<BigInt> {
    match v {
        serde_json::Value::Number(n) => n.as_i64().map(BigInt::from),
        serde_json::Value::String(s) => s.parse().ok(),
        _ => None,
    }
}

/// `[[p_0, q_0], [p_1, q_1], ...]`, the power-basis coordinates as integer pairs.
pub fn coeffs_to_json(x: &CycNum) -> serde_json::Value {
    serde_json::Value::Array(
        x.coeffs
            .iter()
            .map(|c| serde_json::Value::Array(vec![int_to_json(c.numer()), int_to_json(c.denom())]))
            .collect(),
    )
}

/// Inverse of [`coeffs_to_json`]. Accepts up to `N` coordinates and reduces them.
pub fn coeffs_from_json(v: &serde_json::Value, order: u32) -> Result<CycNum> {
    let bad = |m: &str| Error::Parse(format!("cyclotomic coefficients: {m}"));
    let arr = v.as_array().ok_or_else(|| bad("expected an array of [p, q] pairs"))?;
    if arr.len() > order as usize {
        return Err(bad("more than N coefficients"));
    }
    let mut coeffs = Vec::with_capacity(arr.len());
    for pair in arr {
        let pq = pair
            .as_array()
            .filter(|a| a.len() == 2)
            .ok_or_else(|| bad("each coefficient must be a [p, q] pair"))?;
        let p = int_from_json(&pq[0]).ok_or_else(|| bad("numerator is not an integer"))?;
        let q = int_from_json(&pq[1]).ok_or_else(|| bad("denominator is not an integer"))?;
        if q.is_zero() {
            return Err(bad("zero denominator"));
        }
        coeffs.push(BigRational::new(p, q));
    }
    Ok(CycNum::from_power_coeffs(coeffs, order))
}

impl Serialize for CycNum {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        serde_json::Value::Array(vec![self.order.into(), coeffs_to_json(self)]).serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycNum {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        let arr = v
            .as_array()
            .filter(|a| a.len() == 2)
            .ok_or_else(|| D::Error::custom("expected [N, [[p, q], ...]]"))?;
        let order = arr[0]
            .as_u64()
            .filter(|&n| n > 0 && n <= u32::MAX as u64)
            .ok_or_else(|| D::Error::custom("N must be a positive integer"))?;
        let x = coeffs_from_json(&arr[1], order as u32).map_err(D::Error::custom)?;
        // Canonical form has exactly phi(N) entries.
        if arr[1].as_array().map(Vec::len) != Some(x.coeffs.len()) || coeffs_to_json(&x) != arr[1] {
            return Err(D::Error::custom("coefficients are not in reduced canonical form"));
        }
        Ok(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn z(k: i64, n: i64) -> CycNum {
        CycNum::root_of_unity(k, n).unwrap()
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(*cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(*cyclotomic_polynomial(3), vec![1, 1, 1]);
        assert_eq!(*cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(*cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(*cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        for n in 1..40 {
            assert_eq!(cyclotomic_polynomial(n).len() - 1, totient(n));
        }
    }

    #[test]
    fn addition() {
        let x = z(1, 5);
        assert_eq!(&CycNum::zero(5) + &x, x);
        assert_eq!(&z(1, 3) + &z(2, 3), CycNum::from_int(-1, 3));
        assert_eq!(&z(1, 4) + &z(1, 4), z(1, 4).scale(&BigRational::from_integer(2.into())));
        assert!(z(1, 3).try_add(&z(1, 4)).is_err());
    }

    #[test]
    fn multiplication() {
        assert_eq!(&z(1, 4) * &z(1, 4), CycNum::from_int(-1, 4));
        assert_eq!(&z(1, 6) * &z(2, 6), CycNum::from_int(-1, 6));
        let x = z(2, 7);
        assert_eq!(&CycNum::one(7) * &x, x);
        assert!(z(1, 3).try_mul(&z(1, 6)).is_err());
    }

    #[test]
    fn inverses() {
        assert_eq!(CycNum::from_int(2, 5).inverse().unwrap(), CycNum::from_ratio(1, 2, 5));
        for n in [3, 4, 5, 8, 12] {
            assert_eq!(z(1, n).inverse().unwrap(), z(n - 1, n));
        }
        let a = &CycNum::one(3) + &z(1, 3);
        assert_eq!(a.inverse().unwrap(), -z(1, 3));
        assert!(matches!(CycNum::zero(3).inverse(), Err(Error::DivisionByZero)));
    }

    #[test]
    fn roots_of_unity() {
        assert!(z(0, 5).is_one());
        assert_eq!(z(2, 4), CycNum::from_int(-1, 4));
        assert!(z(3, 3).is_one());
        assert_eq!(z(-1, 6), z(5, 6));
        assert!(CycNum::root_of_unity(1, 0).is_err());
        assert!(CycNum::root_of_unity(1, -3).is_err());
    }

    #[test]
    fn root_orders() {
        for n in 1..=24u32 {
            for k in 0..n as i64 {
                let x = z(k, n as i64);
                let ord = root_order(k, n);
                assert!(x.pow(ord as u64).is_one());
                for m in 1..ord {
                    assert!(!x.pow(m as u64).is_one(), "z_{n}^{k} has order {ord}");
                }
            }
        }
    }

    #[test]
    fn rescaling() {
        assert_eq!(CycNum::from_int(-1, 2).rescale(4).unwrap(), z(2, 4));
        assert_eq!(z(1, 3).rescale(6).unwrap(), z(2, 6));
        let x = &z(1, 5) + &CycNum::from_ratio(3, 7, 5);
        assert_eq!(x.rescale(5).unwrap(), x);
        assert!(z(1, 4).rescale(6).is_err());
    }

    #[test]
    fn text_roundtrip() {
        let x = &(&z(1, 8) + &CycNum::from_ratio(-3, 2, 8)) + &z(3, 8);
        let s = x.to_string();
        assert_eq!(s, "(-3/2) + (1)*z^1 + (1)*z^3");
        assert_eq!(parse_cycnum(&s, 8).unwrap(), x);
        assert_eq!(CycNum::zero(3).to_string(), "(0)");
        assert!(parse_cycnum(&CycNum::zero(3).to_string(), 3).unwrap().is_zero());
        assert!(parse_cycnum("1/2", 3).is_err());
    }

    #[test]
    fn json_roundtrip() {
        let x = &z(1, 12) + &CycNum::from_ratio(5, 3, 12);
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, "[12,[[5,3],[1,1],[0,1],[0,1]]]");
        let back: CycNum = serde_json::from_str(&s).unwrap();
        assert_eq!(back, x);
        assert!(serde_json::from_str::<CycNum>("[12,[[1,1]]]").is_err());
        assert!(serde_json::from_str::<CycNum>("[0,[]]").is_err());
    }

    fn arb_cyc(order: u32) -> impl Strategy<Value = CycNum> {
        prop::collection::vec((-6i64..=6, 1i64..=4), order as usize).prop_map(move |cs| {
            CycNum::from_power_coeffs(
                cs.into_iter()
                    .map(|(p, q)| BigRational::new(p.into(), q.into()))
                    .collect(),
                order,
            )
        })
    }

    fn arb_triple() -> impl Strategy<Value = (CycNum, CycNum, CycNum)> {
        prop::sample::select(vec![1u32, 3, 4, 5, 8, 9, 12])
            .prop_flat_map(|n| (arb_cyc(n), arb_cyc(n), arb_cyc(n)))
    }

    proptest! {
        #[test]
        fn field_axioms((a, b, c) in arb_triple()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            if !a.is_zero() {
                prop_assert!((&a * &a.inverse().unwrap()).is_one());
            }
        }

        #[test]
        fn rescale_is_ring_homomorphism((a, b, _c) in arb_triple(), k in 1u32..4) {
            let m = a.order() * k;
            prop_assert_eq!((&a * &b).rescale(m).unwrap(), &a.rescale(m).unwrap() * &b.rescale(m).unwrap());
            prop_assert_eq!((&a + &b).rescale(m).unwrap(), &a.rescale(m).unwrap() + &b.rescale(m).unwrap());
        }
    }
}
