//! Finite-dimensional associative algebras by structure constants: radical,
//! primitive idempotents, Cartan matrix, and Ext-quiver extraction.
//!
//! The toolkit assumes (and verifies on demand) that the semisimple quotient
//! splits as a product of copies of the ground field; inputs violating that
//! are rejected with a split-field error.

pub mod modules;
pub mod presentation;

use crate::error::{KoenigError, Result};
use crate::linalg::{self, Subspace};
use crate::scalar::{Field, Scalar};

/// Sparse coordinate vector, sorted by index.
pub type SparseVec = Vec<(usize, Scalar)>;

/// Full associativity is verified up to this dimension; above it a fixed
/// deterministic sample of triples is checked instead.
const FULL_ASSOC_CHECK_DIM: usize = 48;

#[derive(Clone)]
pub struct StructAlgebra {
    pub field: Field,
    pub dim: usize,
    pub labels: Vec<String>,
    /// `table[i][j]` = coordinates of `b_i * b_j`.
    table: Vec<Vec<SparseVec>>,
    pub unit: Vec<Scalar>,
    /// Distinguished complete orthogonal idempotent list, when the
    /// construction provides one (layer/block idempotents, quiver vertices).
    pub idempotents: Option<Vec<(String, Vec<Scalar>)>>,
}

impl std::fmt::Debug for StructAlgebra {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "StructAlgebra(dim {}, labels {:?})", self.dim, self.labels)
    }
}

/// A complete list of primitive orthogonal idempotents together with the
/// radical: the data underlying simples, Cartan matrix and quiver.
#[derive(Clone, Debug)]
pub struct VertexData {
    pub radical: Subspace,
    pub idempotents: Vec<(String, Vec<Scalar>)>,
}

impl VertexData {
    pub fn count(&self) -> usize {
        self.idempotents.len()
    }
}

/// Result of a global-dimension computation with a cutoff.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GlobalDimension {
    Finite(usize),
    ExceededCutoff(usize),
}

impl GlobalDimension {
    pub fn as_finite(&self) -> Option<usize> {
        match self {
            GlobalDimension::Finite(d) => Some(*d),
            GlobalDimension::ExceededCutoff(_) => None,
        }
    }
}

impl StructAlgebra {
    pub fn new(
        field: Field,
        labels: Vec<String>,
        table: Vec<Vec<SparseVec>>,
        unit: Vec<Scalar>,
        idempotents: Option<Vec<(String, Vec<Scalar>)>>,
    ) -> Result<StructAlgebra> {
        let dim = labels.len();
        assert_eq!(table.len(), dim);
        assert!(table.iter().all(|row| row.len() == dim));
        assert_eq!(unit.len(), dim);
        let alg = StructAlgebra { field, dim, labels, table, unit, idempotents };
        alg.verify_unit()?;
        alg.verify_associativity()?;
        alg.verify_distinguished()?;
        Ok(alg)
    }

    fn basis_vector(&self, i: usize) -> Vec<Scalar> {
        let mut v = vec![self.field.zero(); self.dim];
        v[i] = self.field.one();
        v
    }

    pub fn product_entry(&self, i: usize, j: usize) -> &SparseVec {
        &self.table[i][j]
    }

    /// Product of dense coordinate vectors.
    pub fn mul_vec(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![self.field.zero(); self.dim];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let c = xi.mul(yj);
                for (k, s) in &self.table[i][j] {
                    out[*k] = out[*k].add(&c.mul(s));
                }
            }
        }
        out
    }

    /// Matrix of left multiplication by `x`: column `j` holds `x * b_j`.
    pub fn left_mult_matrix(&self, x: &[Scalar]) -> Vec<Vec<Scalar>> {
        let mut m = vec![vec![self.field.zero(); self.dim]; self.dim];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for j in 0..self.dim {
                for (k, s) in &self.table[i][j] {
                    m[*k][j] = m[*k][j].add(&xi.mul(s));
                }
            }
        }
        m
    }

    fn verify_unit(&self) -> Result<()> {
        for j in 0..self.dim {
            let b = self.basis_vector(j);
            if self.mul_vec(&self.unit, &b) != b || self.mul_vec(&b, &self.unit) != b {
                return Err(KoenigError::Consistency(format!(
                    "unit law fails on basis element {}",
                    self.labels[j]
                )));
            }
        }
        Ok(())
    }

    fn verify_associativity(&self) -> Result<()> {
        let d = self.dim;
        let check = |i: usize, j: usize, k: usize| -> bool {
            let bi = self.basis_vector(i);
            let bj = self.basis_vector(j);
            let bk = self.basis_vector(k);
            let left = self.mul_vec(&self.mul_vec(&bi, &bj), &bk);
            let right = self.mul_vec(&bi, &self.mul_vec(&bj, &bk));
            left == right
        };
        if d <= FULL_ASSOC_CHECK_DIM {
            for i in 0..d {
                for j in 0..d {
                    for k in 0..d {
                        if !check(i, j, k) {
                            return Err(KoenigError::Consistency(format!(
                                "associativity fails at ({i},{j},{k})"
                            )));
                        }
                    }
                }
            }
        } else {
            // Deterministic sample: a fixed linear-congruential sweep.
            let mut state = 0x9e3779b97f4a7c15u64;
            for _ in 0..8 * d {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let i = (state >> 33) as usize % d;
                let j = (state >> 17) as usize % d;
                let k = state as usize % d;
                if !check(i, j, k) {
                    return Err(KoenigError::Consistency(format!(
                        "associativity fails at sampled triple ({i},{j},{k})"
                    )));
                }
            }
        }
        Ok(())
    }

    fn verify_distinguished(&self) -> Result<()> {
        let Some(idems) = &self.idempotents else { return Ok(()) };
        let mut sum = vec![self.field.zero(); self.dim];
        for (name, e) in idems {
            let sq = self.mul_vec(e, e);
            if &sq != e {
                return Err(KoenigError::Consistency(format!(
                    "distinguished element {name} is not idempotent"
                )));
            }
            for (x, y) in sum.iter_mut().zip(e.iter()) {
                *x = x.add(y);
            }
        }
        for ((n1, e1), (n2, e2)) in idems
            .iter()
            .flat_map(|a| idems.iter().map(move |b| (a, b)))
            .filter(|(a, b)| a.0 != b.0)
        {
            if self.mul_vec(e1, e2).iter().any(|x| !x.is_zero()) {
                return Err(KoenigError::Consistency(format!(
                    "distinguished idempotents {n1} and {n2} are not orthogonal"
                )));
            }
        }
        if sum != self.unit {
            return Err(KoenigError::Consistency(
                "distinguished idempotents do not sum to the unit".into(),
            ));
        }
        Ok(())
    }

    // ------------------------------------------------------------------
    // Radical
    // ------------------------------------------------------------------

    /// Jacobson radical as the kernel of the trace bilinear form
    /// `(x, y) -> trace(L_x L_y)`, verified nilpotent. The kernel always
    /// contains the radical, and a nilpotent trace kernel equals it; when
    /// nilpotency fails (possible in small characteristic) the computation
    /// is rejected rather than silently wrong.
    pub fn radical(&self) -> Result<Subspace> {
        let d = self.dim;
        // trace(L_{b_k}) for each k.
        let traces: Vec<Scalar> = (0..d)
            .map(|k| {
                let mut t = self.field.zero();
                for j in 0..d {
                    for (idx, s) in &self.table[k][j] {
                        if *idx == j {
                            t = t.add(s);
                        }
                    }
                }
                t
            })
            .collect();
        // Gram matrix T[i][j] = trace(L_{b_i b_j}).
        let mut gram = Vec::with_capacity(d);
        for i in 0..d {
            let mut row = Vec::with_capacity(d);
            for j in 0..d {
                let mut t = self.field.zero();
                for (k, s) in &self.table[i][j] {
                    t = t.add(&s.mul(&traces[*k]));
                }
                row.push(t);
            }
            gram.push(row);
        }
        let basis = linalg::kernel(self.field, &gram, d);
        let rad = Subspace::from_spanning(self.field, d, basis);
        // Nilpotency: powers of the subspace must reach zero.
        let mut power = rad.clone();
        for _ in 0..=d {
            if power.dim() == 0 {
                return Ok(rad);
            }
            let mut products = Vec::new();
            for x in &power.rows {
                for y in &rad.rows {
                    products.push(self.mul_vec(x, y));
                }
            }
            let next = Subspace::from_spanning(self.field, d, products);
            if next.dim() >= power.dim() {
                break;
            }
            power = next;
        }
        if power.dim() == 0 {
            return Ok(rad);
        }
        if self.field.characteristic() == 0 {
            Err(KoenigError::Consistency(
                "trace-form kernel is not nilpotent: structure constants are inconsistent".into(),
            ))
        } else {
            Err(KoenigError::SplitField(format!(
                "radical computation over {} did not certify; use characteristic 0 or a larger prime",
                self.field
            )))
        }
    }

    // ------------------------------------------------------------------
    // Idempotents, simples, Cartan, quiver
    // ------------------------------------------------------------------

    /// Complete list of primitive orthogonal idempotents plus the radical.
    /// Uses the distinguished list when present (verifying primitivity);
    /// otherwise splits the semisimple quotient and lifts.
    pub fn vertex_data(&self) -> Result<VertexData> {
        let radical = self.radical()?;
        if let Some(idems) = &self.idempotents {
            for (name, e) in idems {
                if self.corner_dim_mod_radical(e, &radical)? != 1 {
                    return Err(KoenigError::Consistency(format!(
                        "distinguished idempotent {name} is not primitive"
                    )));
                }
            }
            return Ok(VertexData { radical, idempotents: idems.clone() });
        }
        let idems = self.discover_idempotents(&radical)?;
        Ok(VertexData { radical, idempotents: idems })
    }

    fn corner_dim_mod_radical(&self, e: &[Scalar], radical: &Subspace) -> Result<usize> {
        let mut vectors = Vec::new();
        for k in 0..self.dim {
            let b = self.basis_vector(k);
            let ebe = self.mul_vec(e, &self.mul_vec(&b, e));
            vectors.push(linalg::reduce(&ebe, &radical.rows, &radical.pivots));
        }
        Ok(Subspace::from_spanning(self.field, self.dim, vectors).dim())
    }

    /// Splits the (required commutative) semisimple quotient into one-
    /// dimensional blocks and lifts the block idempotents through the
    /// radical by the cubic Newton step.
    fn discover_idempotents(&self, radical: &Subspace) -> Result<Vec<(String, Vec<Scalar>)>> {
        // Basis of the quotient: canonical complement of the radical.
        let all = Subspace::from_spanning(
            self.field,
            self.dim,
            (0..self.dim).map(|i| self.basis_vector(i)).collect(),
        );
        let quotient_reps = all.complement_mod(radical);
        let reduce_q = |v: &[Scalar]| linalg::reduce(v, &radical.rows, &radical.pivots);
        // Commutativity of the quotient.
        for x in &quotient_reps {
            for y in &quotient_reps {
                let xy = reduce_q(&self.mul_vec(x, y));
                let yx = reduce_q(&self.mul_vec(y, x));
                if xy != yx {
                    return Err(KoenigError::SplitField(
                        "semisimple quotient is not commutative (not a product of ground fields)"
                            .into(),
                    ));
                }
            }
        }
        // Repeatedly split blocks by eigenvalues of quotient elements.
        let mut blocks: Vec<Vec<Scalar>> = vec![self.unit.clone()];
        for x in &quotient_reps {
            let mut next_blocks = Vec::new();
            for f in blocks.drain(..) {
                let y = reduce_q(&self.mul_vec(&f, &self.mul_vec(x, &f)));
                match self.split_block(&f, &y, radical)? {
                    Some(parts) => next_blocks.extend(parts),
                    None => next_blocks.push(f),
                }
            }
            blocks = next_blocks;
        }
        // Every block must now be one-dimensional mod radical.
        for f in &blocks {
            if self.corner_dim_mod_radical(f, radical)? != 1 {
                return Err(KoenigError::SplitField(
                    "semisimple quotient does not split into copies of the ground field".into(),
                ));
            }
        }
        // Lift sequentially, re-orthogonalizing against already-lifted ones.
        let mut lifted: Vec<Vec<Scalar>> = Vec::new();
        for f in blocks {
            let mut complement = self.unit.clone();
            for l in &lifted {
                for (c, li) in complement.iter_mut().zip(l.iter()) {
                    *c = c.sub(li);
                }
            }
            let seed = self.mul_vec(&complement, &self.mul_vec(&f, &complement));
            lifted.push(self.newton_lift(seed)?);
        }
        Ok(lifted
            .into_iter()
            .enumerate()
            .map(|(i, e)| (format!("v{}", i + 1), e))
            .collect())
    }

    /// Splits the block idempotent `f` along the eigenvalues of `y` acting
    /// inside the corner, when `y` is not scalar there. Returns `None` when
    /// no splitting happens.
    fn split_block(
        &self,
        f: &[Scalar],
        y: &[Scalar],
        radical: &Subspace,
    ) -> Result<Option<Vec<Vec<Scalar>>>> {
        let reduce_q = |v: &[Scalar]| linalg::reduce(v, &radical.rows, &radical.pivots);
        // Minimal polynomial of y inside the corner (all mod radical).
        let mut powers: Vec<Vec<Scalar>> = vec![reduce_q(f)];
        let mut span = Subspace::from_spanning(self.field, self.dim, powers.clone());
        loop {
            let prev = powers.last().unwrap().clone();
            let next = reduce_q(&self.mul_vec(&prev, y));
            if span.contains(&next) {
                powers.push(next);
                break;
            }
            span = span.sum(&Subspace::from_spanning(self.field, self.dim, vec![next.clone()]));
            powers.push(next);
        }
        let deg = powers.len() - 1;
        if deg <= 1 {
            return Ok(None);
        }
        // Solve y^deg = sum c_i y^i for the monic minimal polynomial.
        let mut eqs: Vec<Vec<Scalar>> = Vec::new();
        for c in 0..self.dim {
            let mut row: Vec<Scalar> = (0..deg).map(|i| powers[i][c].clone()).collect();
            row.push(powers[deg][c].neg());
            eqs.push(row);
        }
        let sols = linalg::kernel(self.field, &eqs, deg + 1);
        let sol = sols
            .iter()
            .find(|s| !s[deg].is_zero())
            .ok_or_else(|| KoenigError::Consistency("minimal polynomial solve failed".into()))?;
        let scale = sol[deg].inv().unwrap();
        // Monic minimal polynomial coefficients: y^deg - sum_i coeff[i] y^i = 0.
        let coeffs: Vec<Scalar> = (0..deg).map(|i| sol[i].mul(&scale)).collect();
        let mut poly: Vec<Scalar> = coeffs.iter().map(|c| c.neg()).collect();
        poly.push(self.field.one());
        let roots = match roots_of(self.field, &poly) {
            Some(r) => r,
            None => {
                return Err(KoenigError::SplitField(
                    "an eigenvalue of the semisimple quotient is not in the coefficient field"
                        .into(),
                ))
            }
        };
        if roots.len() != deg {
            return Err(KoenigError::SplitField(
                "minimal polynomial of the semisimple quotient does not split into distinct linear factors"
                    .into(),
            ));
        }
        // Lagrange idempotents of the eigenvalues.
        let mut parts = Vec::new();
        for lambda in &roots {
            let mut part = reduce_q(f);
            for mu in &roots {
                if mu == lambda {
                    continue;
                }
                // part *= (y - mu f) / (lambda - mu)
                let mut ymu = y.to_vec();
                for (a, b) in ymu.iter_mut().zip(f.iter()) {
                    *a = a.sub(&mu.mul(b));
                }
                let denom = lambda.sub(mu).inv().unwrap();
                part = reduce_q(&self.mul_vec(&part, &ymu))
                    .iter()
                    .map(|x| x.mul(&denom))
                    .collect();
            }
            parts.push(part);
        }
        Ok(Some(parts))
    }

    /// Cubic Newton iteration `e <- 3e^2 - 2e^3` from an approximate
    /// idempotent (exact mod radical) to an exact one.
    fn newton_lift(&self, mut e: Vec<Scalar>) -> Result<Vec<Scalar>> {
        let three = self.field.from_i64(3);
        let two = self.field.from_i64(2);
        for _ in 0..(2 * self.dim + 4) {
            let sq = self.mul_vec(&e, &e);
            if sq == e {
                return Ok(e);
            }
            let cube = self.mul_vec(&sq, &e);
            e = sq
                .iter()
                .zip(cube.iter())
                .map(|(s, c)| three.mul(s).sub(&two.mul(c)))
                .collect();
        }
        Err(KoenigError::Consistency("idempotent lifting did not converge".into()))
    }

    /// Cartan matrix: `C[i][j] = dim e_j A e_i`, the multiplicity of the
    /// j-th simple in the i-th projective indecomposable.
    pub fn cartan_matrix(&self, vd: &VertexData) -> Vec<Vec<i64>> {
        let s = vd.count();
        let mut c = vec![vec![0i64; s]; s];
        for i in 0..s {
            for j in 0..s {
                let mut vectors = Vec::new();
                for k in 0..self.dim {
                    let b = self.basis_vector(k);
                    vectors.push(self.mul_vec(
                        &vd.idempotents[j].1,
                        &self.mul_vec(&b, &vd.idempotents[i].1),
                    ));
                }
                c[i][j] = Subspace::from_spanning(self.field, self.dim, vectors).dim() as i64;
            }
        }
        c
    }

    /// Ext-quiver arrow multiplicities: `counts[i][j]` arrows from vertex i
    /// to vertex j, computed as `dim e_j (rad/rad^2) e_i`.
    pub fn quiver_arrows(&self, vd: &VertexData) -> Vec<Vec<usize>> {
        let rad = &vd.radical;
        let mut sq_vectors = Vec::new();
        for x in &rad.rows {
            for y in &rad.rows {
                sq_vectors.push(self.mul_vec(x, y));
            }
        }
        let rad2 = Subspace::from_spanning(self.field, self.dim, sq_vectors);
        let s = vd.count();
        let mut counts = vec![vec![0usize; s]; s];
        for i in 0..s {
            for j in 0..s {
                let corner = |space: &Subspace| {
                    let vectors: Vec<Vec<Scalar>> = space
                        .rows
                        .iter()
                        .map(|x| {
                            self.mul_vec(
                                &vd.idempotents[j].1,
                                &self.mul_vec(x, &vd.idempotents[i].1),
                            )
                        })
                        .collect();
                    Subspace::from_spanning(self.field, self.dim, vectors).dim()
                };
                counts[i][j] = corner(rad) - corner(&rad2);
            }
        }
        counts
    }

    /// The opposite algebra (structure constants transposed).
    pub fn opposite(&self) -> StructAlgebra {
        let mut table = vec![vec![SparseVec::new(); self.dim]; self.dim];
        for i in 0..self.dim {
            for j in 0..self.dim {
                table[i][j] = self.table[j][i].clone();
            }
        }
        StructAlgebra {
            field: self.field,
            dim: self.dim,
            labels: self.labels.clone(),
            table,
            unit: self.unit.clone(),
            idempotents: self.idempotents.clone(),
        }
    }

    /// Direct product with basis the disjoint union.
    pub fn product(&self, other: &StructAlgebra) -> Result<StructAlgebra> {
        assert_eq!(self.field, other.field);
        let dim = self.dim + other.dim;
        let mut table = vec![vec![SparseVec::new(); dim]; dim];
        for i in 0..self.dim {
            for j in 0..self.dim {
                table[i][j] = self.table[i][j].clone();
            }
        }
        for i in 0..other.dim {
            for j in 0..other.dim {
                table[self.dim + i][self.dim + j] = other.table[i][j]
                    .iter()
                    .map(|(k, s)| (self.dim + k, s.clone()))
                    .collect();
            }
        }
        let mut labels = self.labels.clone();
        labels.extend(other.labels.iter().cloned());
        let mut unit = self.unit.clone();
        unit.extend(other.unit.iter().cloned());
        let idempotents = match (&self.idempotents, &other.idempotents) {
            (Some(a), Some(b)) => {
                let mut list: Vec<(String, Vec<Scalar>)> = Vec::new();
                for (n, e) in a {
                    let mut v = e.clone();
                    v.extend(vec![self.field.zero(); other.dim]);
                    list.push((n.clone(), v));
                }
                for (n, e) in b {
                    let mut v = vec![self.field.zero(); self.dim];
                    v.extend(e.iter().cloned());
                    list.push((n.clone(), v));
                }
                Some(list)
            }
            _ => None,
        };
        StructAlgebra::new(self.field, labels, table, unit, idempotents)
    }
}

/// All roots of a polynomial over the coefficient field, or `None` when the
/// polynomial does not split (coefficients ascending, leading one).
fn roots_of(field: Field, poly: &[Scalar]) -> Option<Vec<Scalar>> {
    let eval = |p: &[Scalar], x: &Scalar| {
        let mut acc = field.zero();
        for c in p.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    };
    let deflate = |p: &[Scalar], root: &Scalar| {
        // Synthetic division by (T - root).
        let mut out: Vec<Scalar> = vec![field.zero(); p.len() - 1];
        let mut carry = field.zero();
        for i in (0..p.len() - 1).rev() {
            carry = p[i + 1].add(&carry.mul(root));
            out[i] = carry.clone();
        }
        out
    };
    let mut p = poly.to_vec();
    let mut roots = Vec::new();
    while p.len() > 1 {
        let root = find_root(field, &p, &eval)?;
        roots.push(root.clone());
        p = deflate(&p, &root);
    }
    Some(roots)
}

fn find_root(
    field: Field,
    poly: &[Scalar],
    eval: &impl Fn(&[Scalar], &Scalar) -> Scalar,
) -> Option<Scalar> {
    match field {
        Field::Prime(p) => {
            if p > 1 << 20 {
                return None;
            }
            (0..p)
                .map(|v| Scalar::Fp { p, val: v })
                .find(|x| eval(poly, x).is_zero())
        }
        Field::Rational => {
            // Rational root candidates p/q from divisors of the (integerized)
            // constant and leading coefficients.
            use num_bigint::BigInt;
            use num_traits::{One, Signed, Zero};
            let mut denom_lcm = BigInt::one();
            for c in poly {
                if let Scalar::Rat(r) = c {
                    let d = r.denom();
                    denom_lcm = num_integer::lcm(denom_lcm.clone(), d.clone());
                }
            }
            let ints: Vec<BigInt> = poly
                .iter()
                .map(|c| match c {
                    Scalar::Rat(r) => (r * num_rational::BigRational::from_integer(denom_lcm.clone()))
                        .to_integer(),
                    _ => unreachable!(),
                })
                .collect();
            let a0 = ints.iter().find(|c| !c.is_zero())?.abs();
            if ints[0].is_zero() {
                return Some(field.zero());
            }
            let lead = ints.last().unwrap().abs();
            let divisors = |n: &BigInt| -> Option<Vec<BigInt>> {
                let limit = BigInt::from(1_000_000u64);
                if n > &limit {
                    return None;
                }
                let nn: u64 = n.to_string().parse().ok()?;
                let mut out = Vec::new();
                for d in 1..=nn {
                    if d * d > nn {
                        break;
                    }
                    if nn % d == 0 {
                        out.push(BigInt::from(d));
                        out.push(BigInt::from(nn / d));
                    }
                }
                Some(out)
            };
            let ps = divisors(&a0)?;
            let qs = divisors(&lead)?;
            for p in &ps {
                for q in &qs {
                    for sign in [1i64, -1] {
                        let cand = Scalar::Rat(num_rational::BigRational::new(
                            p * BigInt::from(sign),
                            q.clone(),
                        ));
                        if eval(poly, &cand).is_zero() {
                            return Some(cand);
                        }
                    }
                }
            }
            None
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f() -> Field {
        Field::Rational
    }

    fn one(field: Field) -> Scalar {
        field.one()
    }

    /// k x k: two orthogonal idempotents.
    fn split_semisimple(n: usize) -> StructAlgebra {
        let field = f();
        let mut table = vec![vec![SparseVec::new(); n]; n];
        for i in 0..n {
            table[i][i] = vec![(i, one(field))];
        }
        let unit = vec![one(field); n];
        StructAlgebra::new(field, (0..n).map(|i| format!("e{i}")).collect(), table, unit, None)
            .unwrap()
    }

    /// k[x]/(x^2): basis {1, x}.
    fn dual_numbers() -> StructAlgebra {
        let field = f();
        let mut table = vec![vec![SparseVec::new(); 2]; 2];
        table[0][0] = vec![(0, one(field))];
        table[0][1] = vec![(1, one(field))];
        table[1][0] = vec![(1, one(field))];
        let unit = vec![one(field), field.zero()];
        StructAlgebra::new(field, vec!["1".into(), "x".into()], table, unit, None).unwrap()
    }

    #[test]
    fn semisimple_has_zero_radical() {
        let a = split_semisimple(2);
        assert_eq!(a.radical().unwrap().dim(), 0);
        let vd = a.vertex_data().unwrap();
        assert_eq!(vd.count(), 2);
        assert_eq!(a.cartan_matrix(&vd), vec![vec![1, 0], vec![0, 1]]);
        assert_eq!(a.quiver_arrows(&vd), vec![vec![0, 0], vec![0, 0]]);
    }

    #[test]
    fn three_copies_give_three_simples() {
        let a = split_semisimple(3);
        let vd = a.vertex_data().unwrap();
        assert_eq!(vd.count(), 3);
        let c = a.cartan_matrix(&vd);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(c[i][j], if i == j { 1 } else { 0 });
            }
        }
    }

    #[test]
    fn dual_numbers_have_radical_dim_one() {
        let a = dual_numbers();
        let rad = a.radical().unwrap();
        assert_eq!(rad.dim(), 1);
        let vd = a.vertex_data().unwrap();
        assert_eq!(vd.count(), 1);
        // One loop in the quiver.
        assert_eq!(a.quiver_arrows(&vd), vec![vec![1]]);
    }

    #[test]
    fn radical_works_over_a_large_prime_field() {
        let field = Field::Prime(101);
        let mut table = vec![vec![SparseVec::new(); 2]; 2];
        table[0][0] = vec![(0, field.one())];
        table[0][1] = vec![(1, field.one())];
        table[1][0] = vec![(1, field.one())];
        let unit = vec![field.one(), field.zero()];
        let a = StructAlgebra::new(field, vec!["1".into(), "x".into()], table, unit, None).unwrap();
        assert_eq!(a.radical().unwrap().dim(), 1);
    }

    #[test]
    fn discovered_idempotents_split_a_product_with_mixed_basis() {
        // k x k presented in a rotated basis: {1 = (1,1), d = (1,-1)}.
        let field = f();
        let mut table = vec![vec![SparseVec::new(); 2]; 2];
        table[0][0] = vec![(0, one(field))];
        table[0][1] = vec![(1, one(field))];
        table[1][0] = vec![(1, one(field))];
        table[1][1] = vec![(0, one(field))]; // d*d = 1
        let unit = vec![one(field), field.zero()];
        let a = StructAlgebra::new(field, vec!["1".into(), "d".into()], table, unit, None).unwrap();
        let vd = a.vertex_data().unwrap();
        assert_eq!(vd.count(), 2);
        for (_, e) in &vd.idempotents {
            assert_eq!(a.mul_vec(e, e), *e);
        }
    }
}
