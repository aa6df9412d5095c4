//! Truncated multi-branch power series: elements of `(k[t]/(t^N))^r`.
//!
//! One series per branch of a curve germ; all ring and module elements of the
//! engine are values of this type. Coefficients are stored valuation-major
//! (degree first, then branch), which makes the canonical pivot order of
//! lattice bases coincide with the natural column order.

use crate::error::{KoenigError, Result};
use crate::scalar::{Field, Scalar};

#[derive(Clone, PartialEq, Eq)]
pub struct SeriesVec {
    pub field: Field,
    /// Branch count `r`.
    pub branches: usize,
    /// Truncation order `N`: degrees `0..N` are stored per branch.
    pub trunc: usize,
    /// Coefficient of `t^d` on branch `b` at index `d * branches + b`.
    coeffs: Vec<Scalar>,
}

impl SeriesVec {
    pub fn zero(field: Field, branches: usize, trunc: usize) -> Self {
        SeriesVec {
            field,
            branches,
            trunc,
            coeffs: vec![field.zero(); branches * trunc],
        }
    }

    /// The unit `(1, ..., 1)`.
    pub fn one(field: Field, branches: usize, trunc: usize) -> Self {
        let mut s = Self::zero(field, branches, trunc);
        for b in 0..branches {
            s.set(b, 0, field.one());
        }
        s
    }

    /// `t^degree` on the given branch, zero elsewhere.
    pub fn monomial(field: Field, branches: usize, trunc: usize, branch: usize, degree: usize) -> Self {
        let mut s = Self::zero(field, branches, trunc);
        if degree < trunc {
            s.set(branch, degree, field.one());
        }
        s
    }

    pub fn ambient(&self) -> (usize, usize) {
        (self.branches, self.trunc)
    }

    pub fn same_ambient(&self, other: &SeriesVec) -> Result<()> {
        if self.branches != other.branches || self.trunc != other.trunc || self.field != other.field {
            return Err(KoenigError::shape(
                format!("(r={}, N={}, {})", self.branches, self.trunc, self.field),
                format!("(r={}, N={}, {})", other.branches, other.trunc, other.field),
            ));
        }
        Ok(())
    }

    pub fn get(&self, branch: usize, degree: usize) -> &Scalar {
        &self.coeffs[degree * self.branches + branch]
    }

    pub fn set(&mut self, branch: usize, degree: usize, value: Scalar) {
        self.coeffs[degree * self.branches + branch] = value;
    }

    /// Raw coordinates in valuation-major order, as used by lattice bases.
    pub fn coords(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn from_coords(field: Field, branches: usize, trunc: usize, coeffs: Vec<Scalar>) -> Self {
        assert_eq!(coeffs.len(), branches * trunc);
        SeriesVec { field, branches, trunc, coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|x| x.is_zero())
    }

    pub fn add(&self, other: &SeriesVec) -> Result<SeriesVec> {
        self.same_ambient(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(other.coeffs.iter())
            .map(|(a, b)| a.add(b))
            .collect();
        Ok(SeriesVec { field: self.field, branches: self.branches, trunc: self.trunc, coeffs })
    }

    pub fn scale(&self, c: &Scalar) -> SeriesVec {
        let coeffs = self.coeffs.iter().map(|a| a.mul(c)).collect();
        SeriesVec { field: self.field, branches: self.branches, trunc: self.trunc, coeffs }
    }

    /// Branchwise convolution truncated at degree `N`.
    pub fn mul(&self, other: &SeriesVec) -> Result<SeriesVec> {
        self.same_ambient(other)?;
        let mut out = SeriesVec::zero(self.field, self.branches, self.trunc);
        for b in 0..self.branches {
            for d1 in 0..self.trunc {
                let a = self.get(b, d1);
                if a.is_zero() {
                    continue;
                }
                for d2 in 0..self.trunc - d1 {
                    let c = other.get(b, d2);
                    if c.is_zero() {
                        continue;
                    }
                    let idx = (d1 + d2) * self.branches + b;
                    out.coeffs[idx] = out.coeffs[idx].add(&a.mul(c));
                }
            }
        }
        Ok(out)
    }

    /// Per-branch valuation: least degree with a nonzero coefficient, or
    /// `None` (the infinity sentinel) when the branch vanishes up to `N`.
    pub fn valuations(&self) -> Vec<Option<usize>> {
        (0..self.branches)
            .map(|b| (0..self.trunc).find(|&d| !self.get(b, d).is_zero()))
            .collect()
    }

    /// Multiplication by `t^k`; coefficients pushed past the truncation
    /// window are discarded.
    pub fn shift_up(&self, k: usize) -> SeriesVec {
        let mut out = SeriesVec::zero(self.field, self.branches, self.trunc);
        for d in 0..self.trunc.saturating_sub(k) {
            for b in 0..self.branches {
                out.set(b, d + k, self.get(b, d).clone());
            }
        }
        out
    }

    /// Restriction to a smaller truncation window.
    pub fn truncate_to(&self, trunc: usize) -> SeriesVec {
        assert!(trunc <= self.trunc);
        let mut out = SeriesVec::zero(self.field, self.branches, trunc);
        for d in 0..trunc {
            for b in 0..self.branches {
                out.set(b, d, self.get(b, d).clone());
            }
        }
        out
    }

    /// Keeps the listed branches' coefficients, zeroing all others.
    pub fn restrict_branches(&self, keep: &[usize]) -> SeriesVec {
        let mut out = SeriesVec::zero(self.field, self.branches, self.trunc);
        for &b in keep {
            for d in 0..self.trunc {
                out.set(b, d, self.get(b, d).clone());
            }
        }
        out
    }
}

impl std::fmt::Debug for SeriesVec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts = Vec::new();
        for b in 0..self.branches {
            let mut terms = Vec::new();
            for d in 0..self.trunc {
                let c = self.get(b, d);
                if !c.is_zero() {
                    terms.push(if d == 0 {
                        format!("{c}")
                    } else if c.is_one() {
                        format!("t^{d}")
                    } else {
                        format!("{c}*t^{d}")
                    });
                }
            }
            parts.push(if terms.is_empty() { "0".to_string() } else { terms.join(" + ") });
        }
        write!(f, "({})", parts.join(" | "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rational(branches: usize, trunc: usize) -> (Field, usize, usize) {
        (Field::Rational, branches, trunc)
    }

    #[test]
    fn monomial_product() {
        // t^2 * t^3 = t^5 at r=1, N=8.
        let (f, r, n) = rational(1, 8);
        let a = SeriesVec::monomial(f, r, n, 0, 2);
        let b = SeriesVec::monomial(f, r, n, 0, 3);
        assert_eq!(a.mul(&b).unwrap(), SeriesVec::monomial(f, r, n, 0, 5));
    }

    #[test]
    fn orthogonal_branches_multiply_to_zero() {
        let (f, r, n) = rational(2, 6);
        let a = SeriesVec::monomial(f, r, n, 0, 1);
        let b = SeriesVec::monomial(f, r, n, 1, 1);
        assert!(a.mul(&b).unwrap().is_zero());
    }

    #[test]
    fn truncation_floors_high_terms() {
        // (1 + t^3)^2 = 1 + 2t^3 at N=4: the t^6 term is truncated away.
        let (f, r, n) = rational(1, 4);
        let mut a = SeriesVec::one(f, r, n);
        a.set(0, 3, f.one());
        let sq = a.mul(&a).unwrap();
        let mut expected = SeriesVec::one(f, r, n);
        expected.set(0, 3, f.from_i64(2));
        assert_eq!(sq, expected);
    }

    #[test]
    fn valuations_with_infinity_sentinel() {
        let (f, r, n) = rational(2, 6);
        let mut a = SeriesVec::monomial(f, r, n, 0, 2);
        a.set(0, 5, f.one());
        assert_eq!(a.valuations(), vec![Some(2), None]);
        let b = SeriesVec::monomial(f, r, n, 0, 1);
        assert_eq!(b.valuations(), vec![Some(1), None]);
        assert_eq!(
            SeriesVec::zero(f, r, n).valuations(),
            vec![None, None]
        );
    }

    #[test]
    fn shape_mismatch_is_an_error() {
        let a = SeriesVec::one(Field::Rational, 1, 4);
        let b = SeriesVec::one(Field::Rational, 2, 4);
        assert!(matches!(a.mul(&b), Err(KoenigError::Shape { .. })));
    }
}
