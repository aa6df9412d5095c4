//! Exact dense linear algebra over [`Scalar`]: reduced row echelon form,
//! kernels, and canonical subspace arithmetic.
//!
//! Everything downstream (lattice arithmetic, structure-constant algebras)
//! reduces to these routines, so canonicality is enforced here once: echelon
//! bases are reduced, monic, and sorted by pivot column.

use crate::scalar::{Field, Scalar};

/// Brings `rows` into reduced row echelon form in place: zero rows removed,
/// monic pivots, pivot columns cleared above and below, rows ordered by pivot
/// column. Returns the pivot columns.
pub fn echelonize(rows: &mut Vec<Vec<Scalar>>) -> Vec<usize> {
    rows.retain(|r| r.iter().any(|x| !x.is_zero()));
    if rows.is_empty() {
        return Vec::new();
    }
    let ncols = rows[0].len();
    let mut pivots: Vec<usize> = Vec::new();
    let mut done = 0usize;
    for col in 0..ncols {
        let Some(pivot_row) = (done..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(done, pivot_row);
        let inv = rows[done][col].inv().expect("nonzero pivot");
        for x in rows[done].iter_mut() {
            *x = x.mul(&inv);
        }
        let pivot = rows[done].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != done && !row[col].is_zero() {
                let factor = row[col].clone();
                for (x, p) in row.iter_mut().zip(pivot.iter()) {
                    *x = x.sub(&factor.mul(p));
                }
            }
        }
        pivots.push(col);
        done += 1;
        if done == rows.len() {
            break;
        }
    }
    rows.truncate(done);
    pivots
}

/// Reduces `vec` modulo an echelon basis, returning the remainder.
pub fn reduce(vec: &[Scalar], rows: &[Vec<Scalar>], pivots: &[usize]) -> Vec<Scalar> {
    let mut v = vec.to_vec();
    for (row, &piv) in rows.iter().zip(pivots.iter()) {
        if !v[piv].is_zero() {
            let factor = v[piv].clone();
            for (x, p) in v.iter_mut().zip(row.iter()) {
                *x = x.sub(&factor.mul(p));
            }
        }
    }
    v
}

/// Expresses `vec` in the coordinates of a reduced echelon basis, or returns
/// `None` when it lies outside the span.
pub fn coordinates(vec: &[Scalar], rows: &[Vec<Scalar>], pivots: &[usize]) -> Option<Vec<Scalar>> {
    let coords: Vec<Scalar> = pivots.iter().map(|&p| vec[p].clone()).collect();
    let rem = reduce(vec, rows, pivots);
    if rem.iter().all(|x| x.is_zero()) {
        Some(coords)
    } else {
        None
    }
}

/// Basis of `{x : A x = 0}` where each entry of `equations` is one row of A.
/// The basis is the canonical one read off the reduced echelon form.
pub fn kernel(field: Field, equations: &[Vec<Scalar>], ncols: usize) -> Vec<Vec<Scalar>> {
    let mut rows: Vec<Vec<Scalar>> = equations.to_vec();
    let pivots = echelonize(&mut rows);
    let pivot_set: Vec<bool> = {
        let mut s = vec![false; ncols];
        for &p in &pivots {
            s[p] = true;
        }
        s
    };
    let mut basis = Vec::new();
    for free in 0..ncols {
        if pivot_set[free] {
            continue;
        }
        let mut v = vec![field.zero(); ncols];
        v[free] = field.one();
        for (row, &piv) in rows.iter().zip(pivots.iter()) {
            v[piv] = row[free].neg();
        }
        basis.push(v);
    }
    basis
}

/// A subspace of `k^n` held in canonical reduced echelon form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    pub field: Field,
    pub ncols: usize,
    pub rows: Vec<Vec<Scalar>>,
    pub pivots: Vec<usize>,
}

impl Subspace {
    pub fn from_spanning(field: Field, ncols: usize, vectors: Vec<Vec<Scalar>>) -> Self {
        let mut rows = vectors;
        let pivots = echelonize(&mut rows);
        Subspace { field, ncols, rows, pivots }
    }

    pub fn zero(field: Field, ncols: usize) -> Self {
        Subspace { field, ncols, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn contains(&self, vec: &[Scalar]) -> bool {
        reduce(vec, &self.rows, &self.pivots).iter().all(|x| x.is_zero())
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.rows.iter().all(|r| self.contains(r))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut vectors = self.rows.clone();
        vectors.extend(other.rows.iter().cloned());
        Subspace::from_spanning(self.field, self.ncols, vectors)
    }

    /// Intersection computed from the kernel of the concatenated coefficient
    /// map `(a, b) -> sum a_i u_i - sum b_j v_j`.
    pub fn intersect(&self, other: &Subspace) -> Subspace {
        if self.dim() == 0 || other.dim() == 0 {
            return Subspace::zero(self.field, self.ncols);
        }
        let du = self.dim();
        let dv = other.dim();
        // One equation per ambient coordinate.
        let mut equations = Vec::with_capacity(self.ncols);
        for c in 0..self.ncols {
            let mut eq = Vec::with_capacity(du + dv);
            for u in &self.rows {
                eq.push(u[c].clone());
            }
            for v in &other.rows {
                eq.push(v[c].neg());
            }
            equations.push(eq);
        }
        let combos = kernel(self.field, &equations, du + dv);
        let vectors = combos
            .iter()
            .map(|ab| {
                let mut w = vec![self.field.zero(); self.ncols];
                for (i, u) in self.rows.iter().enumerate() {
                    if !ab[i].is_zero() {
                        for (x, y) in w.iter_mut().zip(u.iter()) {
                            *x = x.add(&ab[i].mul(y));
                        }
                    }
                }
                w
            })
            .collect();
        Subspace::from_spanning(self.field, self.ncols, vectors)
    }

    /// Canonical coset representatives for `self / sub`: the reduced echelon
    /// form of this basis modulo `sub`. Requires `sub` to be contained in
    /// `self`; the caller checks that.
    pub fn complement_mod(&self, sub: &Subspace) -> Vec<Vec<Scalar>> {
        let mut reduced: Vec<Vec<Scalar>> = self
            .rows
            .iter()
            .map(|r| reduce(r, &sub.rows, &sub.pivots))
            .collect();
        echelonize(&mut reduced);
        reduced
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Scalar {
        Field::Rational.from_i64(n)
    }

    #[test]
    fn echelon_is_canonical() {
        // span{(2,4), (1,3)} = all of k^2, pivots (0,1), identity basis.
        let mut rows = vec![vec![q(2), q(4)], vec![q(1), q(3)]];
        let pivots = echelonize(&mut rows);
        assert_eq!(pivots, vec![0, 1]);
        assert_eq!(rows, vec![vec![q(1), q(0)], vec![q(0), q(1)]]);
    }

    #[test]
    fn echelon_idempotent() {
        let mut rows = vec![vec![q(0), q(3), q(1)], vec![q(0), q(6), q(5)]];
        echelonize(&mut rows);
        let mut again = rows.clone();
        echelonize(&mut again);
        assert_eq!(rows, again);
    }

    #[test]
    fn kernel_solves_homogeneous_system() {
        // x + y + z = 0, x - z = 0 over Q: kernel = span{(1, -2, 1)}.
        let eqs = vec![vec![q(1), q(1), q(1)], vec![q(1), q(0), q(-1)]];
        let basis = kernel(Field::Rational, &eqs, 3);
        assert_eq!(basis.len(), 1);
        for eq in &eqs {
            let dot = eq
                .iter()
                .zip(basis[0].iter())
                .fold(q(0), |acc, (a, b)| acc.add(&a.mul(b)));
            assert!(dot.is_zero());
        }
    }

    #[test]
    fn intersection_of_planes() {
        let f = Field::Rational;
        let u = Subspace::from_spanning(f, 3, vec![vec![q(1), q(0), q(0)], vec![q(0), q(1), q(0)]]);
        let v = Subspace::from_spanning(f, 3, vec![vec![q(0), q(1), q(0)], vec![q(0), q(0), q(1)]]);
        let w = u.intersect(&v);
        assert_eq!(w.dim(), 1);
        assert!(w.contains(&[q(0), q(1), q(0)]));
    }
}
