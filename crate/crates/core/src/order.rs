//! The matrix order attached to a normalization chain: the `(n+1) x (n+1)`
//! array of fractional ideals with `A_ij = O_j` above the diagonal and
//! `A_ij = (O_j : O_i)` below it, together with its structural checks.

use crate::chain::{LocalRing, NormalizationChain};
use crate::error::{KoenigError, Result};
use crate::lattice::FractionalIdeal;

#[derive(Clone, Debug)]
pub struct OrderMatrix {
    /// `n + 1` where `n` is the level.
    pub size: usize,
    /// `entries[i][j]` is the (i,j) entry, 0-based.
    pub entries: Vec<Vec<FractionalIdeal>>,
}

/// Row and column inclusion report for the order's entry hierarchy.
#[derive(Clone, Debug)]
pub struct HierarchyReport {
    pub rows_ok: bool,
    pub columns_ok: bool,
}

impl HierarchyReport {
    pub fn passed(&self) -> bool {
        self.rows_ok && self.columns_ok
    }
}

/// Builds the order from a chain and verifies multiplicative closure of the
/// matrix entries exhaustively.
pub fn build_order(chain: &NormalizationChain) -> Result<OrderMatrix> {
    let size = chain.rings.len();
    let mut entries: Vec<Vec<FractionalIdeal>> = Vec::with_capacity(size);
    for i in 0..size {
        let mut row = Vec::with_capacity(size);
        for j in 0..size {
            if i <= j {
                row.push(chain.rings[j].clone());
            } else {
                row.push(chain.rings[j].colon(&chain.rings[i])?);
            }
        }
        entries.push(row);
    }
    let order = OrderMatrix { size, entries };
    for i in 0..size {
        for k in 0..size {
            for j in 0..size {
                let product = order.entries[i][k].mul(&order.entries[k][j])?;
                if !order.entries[i][j].contains(&product)? {
                    return Err(KoenigError::Consistency(format!(
                        "order entries not closed under multiplication at ({i},{k})*({k},{j})"
                    )));
                }
            }
        }
    }
    Ok(order)
}

/// Verifies the entry hierarchy: along every row the entries increase from
/// left to right, along every column they increase from bottom to top.
pub fn hierarchy_check(order: &OrderMatrix) -> Result<HierarchyReport> {
    let n = order.size;
    let mut rows_ok = true;
    for i in 0..n {
        for j in 0..n.saturating_sub(1) {
            if !order.entries[i][j + 1].contains(&order.entries[i][j])? {
                rows_ok = false;
            }
        }
    }
    let mut columns_ok = true;
    for j in 0..n {
        for i in 0..n.saturating_sub(1) {
            if !order.entries[i][j].contains(&order.entries[i + 1][j])? {
                columns_ok = false;
            }
        }
    }
    Ok(HierarchyReport { rows_ok, columns_ok })
}

/// Verifies that every bottom-row ideal `I_{n+1,k}` is a diagonal lattice
/// (one power of t per branch), the concrete form of projectivity over the
/// normalization, and returns the exponent tuples.
pub fn top_row_projectivity(order: &OrderMatrix) -> Result<Vec<Vec<usize>>> {
    let n = order.size;
    let mut exponents = Vec::new();
    for k in 0..n.saturating_sub(1) {
        let entry = &order.entries[n - 1][k];
        let minvals = entry.min_valuations();
        let mut exps = Vec::with_capacity(entry.branches);
        for (b, mv) in minvals.iter().enumerate() {
            match mv {
                Some(v) if *v >= 0 => exps.push(*v as usize),
                _ => {
                    return Err(KoenigError::Consistency(format!(
                        "bottom-row entry {k} vanishes on branch {b}"
                    )))
                }
            }
        }
        let diagonal =
            FractionalIdeal::diagonal(entry.field, entry.branches, entry.trunc, &exps);
        if !entry.equals(&diagonal) {
            return Err(KoenigError::Consistency(format!(
                "bottom-row entry {k} is not a diagonal lattice"
            )));
        }
        exponents.push(exps);
    }
    Ok(exponents)
}

/// For a level-one ring, compares the built 2x2 order with the classical
/// `[[O, O~], [C, O~]]` shape entry by entry.
pub fn auslander_compare(
    ring: &LocalRing,
    chain: &NormalizationChain,
    order: &OrderMatrix,
) -> Result<bool> {
    if chain.level != 1 {
        return Err(KoenigError::Domain(format!(
            "classical 2x2 comparison requires level 1, found level {}",
            chain.level
        )));
    }
    let full = FractionalIdeal::full(
        ring.lattice.field,
        ring.lattice.branches,
        ring.lattice.trunc,
    );
    let conductor = ring.lattice.colon(&full)?;
    Ok(order.entries[0][0].equals(&ring.lattice)
        && order.entries[0][1].equals(&full)
        && order.entries[1][0].equals(&conductor)
        && order.entries[1][1].equals(&full))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{normalization_chain, LocalRing};
    use crate::scalar::Field;
    use crate::series::SeriesVec;

    fn f() -> Field {
        Field::Rational
    }

    fn monomial_ring(n: usize, gens: &[usize]) -> LocalRing {
        let vectors: Vec<SeriesVec> = gens
            .iter()
            .map(|&g| SeriesVec::monomial(f(), 1, n, 0, g))
            .collect();
        LocalRing::new(FractionalIdeal::algebra_closure(f(), 1, n, &vectors).unwrap()).unwrap()
    }

    fn node(n: usize) -> LocalRing {
        let mut u = SeriesVec::zero(f(), 2, n);
        u.set(0, 1, f().from_i64(1));
        u.set(1, 1, f().from_i64(-1));
        let mut v = SeriesVec::zero(f(), 2, n);
        v.set(0, 1, f().from_i64(1));
        v.set(1, 1, f().from_i64(1));
        LocalRing::new(FractionalIdeal::algebra_closure(f(), 2, n, &[u, v]).unwrap()).unwrap()
    }

    #[test]
    fn node_order_is_the_classical_two_by_two() {
        let o = node(12);
        let chain = normalization_chain(&o).unwrap();
        let order = build_order(&chain).unwrap();
        assert_eq!(order.size, 2);
        assert!(auslander_compare(&o, &chain, &order).unwrap());
        assert_eq!(top_row_projectivity(&order).unwrap(), vec![vec![1, 1]]);
    }

    #[test]
    fn cusp_order_matches_and_has_conductor_exponent_two() {
        let o = monomial_ring(12, &[2, 3]);
        let chain = normalization_chain(&o).unwrap();
        let order = build_order(&chain).unwrap();
        assert!(auslander_compare(&o, &chain, &order).unwrap());
        assert_eq!(top_row_projectivity(&order).unwrap(), vec![vec![2]]);
    }

    #[test]
    fn regular_ring_gives_a_one_by_one_order() {
        let o = LocalRing::new(FractionalIdeal::full(f(), 1, 8)).unwrap();
        let chain = normalization_chain(&o).unwrap();
        let order = build_order(&chain).unwrap();
        assert_eq!(order.size, 1);
        assert!(hierarchy_check(&order).unwrap().passed());
        assert!(top_row_projectivity(&order).unwrap().is_empty());
    }

    #[test]
    fn a4_order_entries() {
        // Oracle (colon on valuation sets): I_31 = t^4 O~, I_32 = t^2 O~,
        // I_21 has valuations {2} and everything from 4 on.
        let o = monomial_ring(15, &[2, 5]);
        let chain = normalization_chain(&o).unwrap();
        let order = build_order(&chain).unwrap();
        assert_eq!(order.size, 3);
        assert!(order.entries[2][0].equals(&FractionalIdeal::diagonal(f(), 1, 15, &[4])));
        assert!(order.entries[2][1].equals(&FractionalIdeal::diagonal(f(), 1, 15, &[2])));
        let i21: Vec<isize> = order.entries[1][0]
            .pivot_valuations()
            .iter()
            .map(|&(d, _)| d)
            .collect();
        let expected: Vec<isize> = std::iter::once(2).chain(4..15).collect();
        assert_eq!(i21, expected);
        assert!(hierarchy_check(&order).unwrap().passed());
        assert_eq!(top_row_projectivity(&order).unwrap(), vec![vec![4], vec![2]]);
        assert!(matches!(
            auslander_compare(&o, &chain, &order),
            Err(KoenigError::Domain(_))
        ));
    }

    #[test]
    fn e6_bottom_row() {
        // Oracle: semigroup <3,4> has conductor 6; its sharp has conductor 3.
        let o = monomial_ring(21, &[3, 4]);
        let chain = normalization_chain(&o).unwrap();
        let order = build_order(&chain).unwrap();
        assert_eq!(top_row_projectivity(&order).unwrap(), vec![vec![6], vec![3]]);
        assert!(hierarchy_check(&order).unwrap().passed());
    }
}
