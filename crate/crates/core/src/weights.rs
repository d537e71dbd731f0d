//! Weight decomposition and age of a finite-order matrix.

use num_rational::Rational64;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::ExactMatrix;

/// Weights `a` in `[0, r)` with multiplicities, and the age `(1/r) sum a m_a`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightData {
    pub r: u32,
    pub pairs: Vec<(u32, usize)>,
    pub age: Rational64,
    pub fixed_dim: usize,
}

impl WeightData {
    pub fn dim(&self) -> usize {
        self.pairs.iter().map(|&(_, m)| m).sum()
    }

    /// Integer age, or an error explaining that the element is not in SL(V).
    pub fn integer_age(&self) -> Result<u64> {
        if self.age.is_integer() {
            Ok(self.age.to_integer() as u64)
        } else {
            Err(Error::NotSpecialLinear(format!(
                "age {} is not an integer",
                self.age
            )))
        }
    }

    /// Weights of the inverse element: `a -> (r - a) mod r`.
    pub fn inverse_pairs(&self) -> Vec<(u32, usize)> {
        let mut p: Vec<_> = self
            .pairs
            .iter()
            .map(|&(a, m)| ((self.r - a) % self.r, m))
            .collect();
        p.sort_unstable();
        p
    }
}

/// Order of `g`, required to divide the cyclotomic order of its entries.
pub fn element_order(g: &ExactMatrix) -> Result<u32> {
    let n = g.order();
    let r = g.multiplicative_order(n as u64)?;
    if !(n as u64).is_multiple_of(r) {
        return Err(Error::NotDivisible { from: r as u32, to: n });
    }
    Ok(r as u32)
}

pub fn weight_data(g: &ExactMatrix) -> Result<WeightData> {
    let r = element_order(g)?;
    let mut pairs = vec![];
    let mut total = 0i64;
    for a in 0..r {
        let m = g.weight_multiplicity(r, a as i64)?;
        if m > 0 {
            pairs.push((a, m));
            total += a as i64 * m as i64;
        }
    }
    let covered: usize = pairs.iter().map(|&(_, m)| m).sum();
    if covered != g.dim() {
        return Err(Error::Corrupt(format!(
            "weight multiplicities sum to {covered}, expected {}",
            g.dim()
        )));
    }
    let fixed_dim = pairs
        .iter()
        .find(|&&(a, _)| a == 0)
        .map_or(0, |&(_, m)| m);
    Ok(WeightData {
        r,
        pairs,
        age: Rational64::new(total, r as i64),
        fixed_dim,
    })
}

/// Age of an element of SL(V).
pub fn age(g: &ExactMatrix) -> Result<u64> {
    weight_data(g)?.integer_age()
}

/// `2 age(g) == n - dim V^g`, the identity every symplectic element satisfies.
pub fn check_age_lemma(g: &ExactMatrix) -> Result<bool> {
    let w = weight_data(g)?;
    Ok(w.age * Rational64::from_integer(2) == Rational64::from_integer((g.dim() - w.fixed_dim) as i64))
}

/// Same as [`check_age_lemma`], but reports the offending numbers.
pub fn assert_age_lemma(g: &ExactMatrix) -> Result<()> {
    let w = weight_data(g)?;
    let codim = g.dim() - w.fixed_dim;
    let twice = w.age * Rational64::from_integer(2);
    if twice != Rational64::from_integer(codim as i64) {
        return Err(Error::AgeLemmaViolated {
            twice_age: twice.to_i64().unwrap_or(i64::MIN),
            codim,
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;
    use crate::cyclo::CycNum;

    fn z(k: i64, n: i64) -> CycNum {
        CycNum::root_of_unity(k, n).unwrap()
    }

    /// Permutation of `k` blocks of size two, as a matrix on C^(2k).
    fn block_perm(perm: &[usize], order: u32) -> ExactMatrix {
        let p: Vec<usize> = (0..2 * perm.len())
            .map(|i| 2 * perm[i / 2] + i % 2)
            .collect();
        ExactMatrix::permutation(&p, order)
    }

    #[test]
    fn identity_weights() {
        let w = weight_data(&ExactMatrix::identity(3, 1)).unwrap();
        assert_eq!(w.r, 1);
        assert_eq!(w.pairs, vec![(0, 3)]);
        assert_eq!(w.age, Rational64::zero());
        assert_eq!(age(&ExactMatrix::identity(4, 2)).unwrap(), 0);
    }

    #[test]
    fn minus_identity() {
        let g = ExactMatrix::scalar(2, CycNum::from_int(-1, 2));
        let w = weight_data(&g).unwrap();
        assert_eq!((w.r, w.pairs.clone(), w.age), (2, vec![(1, 2)], Rational64::from_integer(1)));
        assert!(check_age_lemma(&g).unwrap());
    }

    #[test]
    fn mu4_generator() {
        let g = ExactMatrix::scalar(4, z(1, 4));
        let w = weight_data(&g).unwrap();
        assert_eq!((w.r, w.pairs.clone()), (4, vec![(3, 4)]));
        assert_eq!(age(&g).unwrap(), 3);
        // V is not self-dual here: 2*3 != 4.
        assert!(!check_age_lemma(&g).unwrap());
    }

    #[test]
    fn block_swap_and_cycles() {
        let swap = block_perm(&[1, 0], 2);
        let w = weight_data(&swap).unwrap();
        assert_eq!(w.pairs, vec![(0, 2), (1, 2)]);
        assert_eq!(age(&swap).unwrap(), 1);
        for n in 2..=5usize {
            let cycle: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
            let order = n as u32;
            let g = block_perm(&cycle, order);
            assert_eq!(age(&g).unwrap(), n as u64 - 1, "{n}-cycle");
            assert!(check_age_lemma(&g).unwrap());
        }
    }

    #[test]
    fn non_sl_age_is_rational() {
        let g = ExactMatrix::diagonal(vec![z(1, 3), CycNum::one(3)]).unwrap();
        let w = weight_data(&g).unwrap();
        // eigenvalue z_3 = z_3^(-2)
        assert_eq!(w.pairs, vec![(0, 1), (2, 1)]);
        assert_eq!(w.age, Rational64::new(2, 3));
        assert!(matches!(age(&g), Err(Error::NotSpecialLinear(_))));
    }

    #[test]
    fn order_must_divide_session_order() {
        // -I has order 2, which does not divide N = 3
        let g = ExactMatrix::scalar(2, CycNum::from_int(-1, 3));
        assert!(weight_data(&g).is_err());
        let inf = ExactMatrix::from_ints(&[&[1, 1], &[0, 1]], 4).unwrap();
        assert!(matches!(weight_data(&inf), Err(Error::NotFiniteOrder(_))));
    }

    #[test]
    fn inverse_weights_and_age_pairing() {
        let g = ExactMatrix::diagonal(vec![z(1, 5), z(4, 5), z(2, 5), z(3, 5), CycNum::one(5)]).unwrap();
        let w = weight_data(&g).unwrap();
        let winv = weight_data(&g.inverse().unwrap()).unwrap();
        assert_eq!(winv.pairs, w.inverse_pairs());
        assert_eq!(
            w.age + winv.age,
            Rational64::from_integer((g.dim() - w.fixed_dim) as i64)
        );
    }
}
