//! Window-certified echelon bases of subspaces of a one-variable Laurent
//! series field, with pivots at lowest exponents.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::laurent::Laurent;

/// Reduced echelon basis of the part of a subspace whose elements have
/// lowest exponent in `[lo, hi]`.
///
/// Every vector is normalized to coefficient 1 at its pivot, carries zero at
/// every other pivot, and is truncated to `O(var^(hi+1))`.
#[derive(Clone, Debug, PartialEq)]
pub struct SubspaceEchelon<F> {
    vectors: BTreeMap<i32, Laurent<F>>,
    lo: i32,
    hi: i32,
}

impl<F: Field> SubspaceEchelon<F> {
    /// Echelonize `gens` and keep the pivots inside `[lo, hi]`.
    ///
    /// Each generator must be known through exponent `hi`.
    pub fn from_generators(gens: &[Laurent<F>], lo: i32, hi: i32) -> Result<Self> {
        let mut basis: BTreeMap<i32, Laurent<F>> = BTreeMap::new();
        for g in gens {
            if g.prec() <= hi {
                return Err(Error::DepthExhausted(format!(
                    "generator known only below exponent {}, window top is {hi}",
                    g.prec()
                )));
            }
            let v = reduce(&basis, g.truncate(hi + 1));
            let Some((p, c)) = v.leading() else { continue };
            let v = v.scale(&c.inv());
            for b in basis.values_mut() {
                if let Some(x) = b.coeff_ref(p) {
                    let x = x.clone();
                    *b = b.sub(&v.scale(&x));
                }
            }
            basis.insert(p, v);
        }
        let vectors = basis.range(lo..=hi).map(|(p, v)| (*p, v.clone())).collect();
        Ok(SubspaceEchelon { vectors, lo, hi })
    }

    pub fn window(&self) -> (i32, i32) {
        (self.lo, self.hi)
    }

    pub fn pivots(&self) -> Vec<i32> {
        self.vectors.keys().copied().collect()
    }

    pub fn vectors(&self) -> impl Iterator<Item = &Laurent<F>> {
        self.vectors.values()
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    /// Shrink the window; the result is still reduced.
    pub fn restrict(&self, lo: i32, hi: i32) -> Self {
        let lo = lo.max(self.lo);
        let hi = hi.min(self.hi);
        SubspaceEchelon {
            vectors: self
                .vectors
                .range(lo..=hi)
                .map(|(p, v)| (*p, v.truncate(hi + 1)))
                .collect(),
            lo,
            hi,
        }
    }

    /// Remainder of `v` after reduction against the basis.
    pub fn remainder(&self, v: &Laurent<F>) -> Laurent<F> {
        reduce(&self.vectors, v.truncate(self.hi + 1))
    }

    /// Whether `v` lies in the span, judged on the exponents `v` is known at.
    /// Vectors whose lowest term falls below the window cannot be decided.
    pub fn contains(&self, v: &Laurent<F>) -> Option<bool> {
        match v.valuation() {
            Some(p) if p < self.lo => None,
            _ => Some(self.remainder(v).is_zero_known()),
        }
    }

    /// All exponents in `[lo, lo + margin)` are pivots.
    pub fn deep_complete(&self, margin: i32) -> bool {
        (self.lo..(self.lo + margin).min(self.hi + 1)).all(|e| self.vectors.contains_key(&e))
    }

    /// Index relative to `O = k[[var]]`: `dim W∩O - dim V/(W+O)`.
    ///
    /// Requires the deep end of the window to be filled with pivots and the
    /// window top not to be a pivot.
    pub fn chi(&self, margin: i32) -> Result<i64> {
        if !self.deep_complete(margin) {
            return Err(Error::WindowTooSmall(format!(
                "pivots are not consecutive over [{}, {})",
                self.lo,
                self.lo + margin
            )));
        }
        if self.vectors.contains_key(&self.hi) {
            return Err(Error::WindowTooSmall(format!(
                "pivot at the window top {}; intersection with O not finite within window",
                self.hi
            )));
        }
        let inside = self.vectors.range(0..).count() as i64;
        let missing = (self.lo..0)
            .filter(|e| !self.vectors.contains_key(e))
            .count() as i64;
        Ok(inside - missing)
    }

    /// Exponents `d` in `[dmin, dmax]` with `var^d · W ⊆ W` on every basis
    /// vector whose shift can be decided inside the window.
    pub fn stabilizer_sample(&self, dmin: i32, dmax: i32) -> Vec<i32> {
        (dmin..=dmax)
            .filter(|&d| {
                let mut tested = 0;
                for v in self.vectors.values() {
                    match self.contains(&v.shift(d)) {
                        Some(true) => tested += 1,
                        Some(false) => return false,
                        None => {}
                    }
                }
                tested > 0
            })
            .collect()
    }
}

fn reduce<F: Field>(basis: &BTreeMap<i32, Laurent<F>>, mut v: Laurent<F>) -> Laurent<F> {
    // Reduction only moves the leading exponent upwards, so one pass over
    // pivots in increasing order clears every pivot position.
    let mut cursor = i32::MIN;
    while let Some((p, b)) = basis.range(cursor..).next() {
        cursor = match p.checked_add(1) {
            Some(c) => c,
            None => break,
        };
        if let Some(c) = v.coeff_ref(*p) {
            let c = c.clone();
            v = v.sub(&b.scale(&c));
        }
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{q, Q};
    use crate::laurent::EXACT;

    fn mono(e: i32) -> Laurent<Q> {
        Laurent::monomial(q(1), e)
    }

    fn w0(lo: i32, hi: i32) -> SubspaceEchelon<Q> {
        let gens: Vec<_> = (0..=-lo).map(|l| mono(-l)).collect();
        SubspaceEchelon::from_generators(&gens, lo, hi).unwrap()
    }

    #[test]
    fn chi_of_w0_is_one() {
        assert_eq!(w0(-12, 12).chi(3), Ok(1));
    }

    #[test]
    fn chi_of_power_series_ring_is_not_certifiable() {
        let gens: Vec<_> = (0..=12).map(mono).collect();
        let b = SubspaceEchelon::from_generators(&gens, -12, 12).unwrap();
        assert!(matches!(b.chi(3), Err(Error::WindowTooSmall(_))));
    }

    #[test]
    fn cancellation_creates_new_pivot() {
        let a = Laurent::exact([(-1, q(1)), (0, q(1))]);
        let b = mono(-1);
        let e = SubspaceEchelon::from_generators(&[a, b], -5, 5).unwrap();
        assert_eq!(e.pivots(), vec![-1, 0]);
    }

    #[test]
    fn reduced_form_clears_other_pivots() {
        let a = Laurent::exact([(-2, q(1)), (0, q(3))]);
        let b = Laurent::exact([(0, q(2)), (1, q(1))]);
        let e = SubspaceEchelon::from_generators(&[a, b], -5, 5).unwrap();
        let v: Vec<_> = e.vectors().cloned().collect();
        assert_eq!(v[0].coeff(0), Some(q(0)));
        assert_eq!(v[0].coeff(1), Some(Q::new(3.into(), (-2).into())));
    }

    #[test]
    fn stabilizer_of_w_one_one() {
        // W(1,1) = span{z^-l, l >= 1} + k(1 + z)
        let mut gens: Vec<_> = (1..=10).map(|l| mono(-l)).collect();
        gens.push(Laurent::exact([(0, q(1)), (1, q(1))]));
        let e = SubspaceEchelon::from_generators(&gens, -10, 10).unwrap();
        assert_eq!(e.stabilizer_sample(-1, 1), vec![0]);
        let deeper = e.stabilizer_sample(-4, 1);
        assert_eq!(deeper, vec![-4, -3, -2, 0]);
    }

    #[test]
    fn stabilizer_of_polynomial_ring_in_inverse() {
        let e = w0(-10, 10);
        assert_eq!(e.stabilizer_sample(-3, 2), vec![-3, -2, -1, 0]);
    }

    #[test]
    fn shallow_generator_is_rejected() {
        let g = Laurent::from_terms([(0, q(1))], 3);
        assert!(SubspaceEchelon::from_generators(&[g], -2, 5).is_err());
        let g = Laurent::from_terms([(0, q(1))], EXACT);
        assert!(SubspaceEchelon::from_generators(&[g], -2, 5).is_ok());
    }
}
