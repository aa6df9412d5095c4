//! Validation of local curve singularities and computation of the chain of
//! partial normalizations `O = O_1 ⊂ O_2 ⊂ ... ⊂ O_{n+1} = O~` obtained by
//! repeatedly taking endomorphisms of the singular-locus ideal.

use crate::error::{KoenigError, Result};
use crate::lattice::FractionalIdeal;
use crate::linalg;
use crate::scalar::Scalar;
use crate::series::SeriesVec;

/// A validated local one-dimensional ring lattice `O` with its conductor
/// exponent (the least `c` with `t^c O~` contained in `O`).
#[derive(Clone, Debug)]
pub struct LocalRing {
    pub lattice: FractionalIdeal,
    pub conductor_exponent: usize,
    pub branches: usize,
}

/// The tower `O_1 ⊂ ... ⊂ O_{n+1} = O~`; `level` is the number of strict
/// steps `n`.
#[derive(Clone, Debug)]
pub struct NormalizationChain {
    pub rings: Vec<FractionalIdeal>,
    pub level: usize,
}

/// Per-block regularity data for a (possibly semilocal) ring lattice.
#[derive(Clone, Debug)]
pub struct SingularLocus {
    /// Finest partition of the branches into local factors.
    pub blocks: Vec<Vec<usize>>,
    /// Regularity flag per block.
    pub regular: Vec<bool>,
    /// True when every local factor is regular.
    pub all_regular: bool,
    /// The vanishing ideal of the singular factors (equals the ring itself
    /// when the ring is regular).
    pub ideal: FractionalIdeal,
}

/// Outcome of the duality verification for a non-regular ring: the two colon
/// identities realizing the canonical Hom isomorphisms.
#[derive(Clone, Debug)]
pub struct DualityReport {
    pub conductor_of_sharp_is_ideal: bool,
    pub colon_of_ideal_is_sharp: bool,
}

impl DualityReport {
    pub fn passed(&self) -> bool {
        self.conductor_of_sharp_is_ideal && self.colon_of_ideal_is_sharp
    }
}

/// Checks the ring-lattice invariants shared by local and semilocal rings:
/// shift zero, unital, multiplicatively closed, containing a power of t
/// times the full lattice.
pub fn validate_ring_lattice(lattice: &FractionalIdeal) -> Result<()> {
    if lattice.shift() != 0 {
        return Err(KoenigError::Domain("ring lattice must have shift 0".into()));
    }
    let one = SeriesVec::one(lattice.field, lattice.branches, lattice.trunc);
    if !lattice.contains_element(&one, 0)? {
        return Err(KoenigError::Domain("ring lattice must contain the unit".into()));
    }
    if lattice.full_from().is_none() {
        return Err(KoenigError::Domain(
            "ring lattice must contain a power of t times the full lattice".into(),
        ));
    }
    let square = lattice.mul(lattice)?;
    if !lattice.contains(&square)? {
        return Err(KoenigError::Domain("lattice is not multiplicatively closed".into()));
    }
    Ok(())
}

impl LocalRing {
    /// Validates multiplicative closure, the unit, the conductor bound, and
    /// locality (no nontrivial branch-block idempotents).
    pub fn new(lattice: FractionalIdeal) -> Result<LocalRing> {
        validate_ring_lattice(&lattice)?;
        let blocks = branch_blocks(&lattice);
        if blocks.len() != 1 {
            return Err(KoenigError::Domain(format!(
                "ring is semilocal with {} local factors; a single local ring is required",
                blocks.len()
            )));
        }
        let conductor_exponent = lattice
            .full_from()
            .expect("validated ring lattice has a conductor");
        Ok(LocalRing {
            branches: lattice.branches,
            conductor_exponent,
            lattice,
        })
    }
}

/// Finest partition of the branches such that every block's indicator vector
/// lies in the ring: the local factors of a semilocal overring.
pub fn branch_blocks(ring: &FractionalIdeal) -> Vec<Vec<usize>> {
    let members = ring.constant_members();
    let r = ring.branches;
    // Branches are equivalent when every constant member takes the same
    // value on both.
    let mut assignment: Vec<Option<usize>> = vec![None; r];
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for b in 0..r {
        if assignment[b].is_some() {
            continue;
        }
        let id = blocks.len();
        assignment[b] = Some(id);
        let mut block = vec![b];
        for b2 in b + 1..r {
            if assignment[b2].is_some() {
                continue;
            }
            let equal = members.rows.iter().all(|v| v[b] == v[b2]);
            if equal {
                assignment[b2] = Some(id);
                block.push(b2);
            }
        }
        blocks.push(block);
    }
    blocks
}

/// Per-factor regularity test and the vanishing ideal of the singular locus.
///
/// A local factor is regular exactly when it consists of a single branch
/// whose projection is that branch's full power-series lattice.
pub fn singular_locus(ring: &FractionalIdeal) -> Result<SingularLocus> {
    let blocks = branch_blocks(ring);
    let trunc = ring.trunc;
    let mut regular = Vec::with_capacity(blocks.len());
    for block in &blocks {
        let is_regular = block.len() == 1 && ring.project_branches(block).dim() == trunc;
        regular.push(is_regular);
    }
    let all_regular = regular.iter().all(|&x| x);
    if all_regular {
        return Ok(SingularLocus { blocks, regular, all_regular, ideal: ring.clone() });
    }

    // Vanishing conditions: the residue at every singular factor is zero.
    // All branches of a local factor share their constant coefficient, so
    // the residue is read off the block's first branch.
    let field = ring.field;
    let basis = ring.basis();
    let mut eval_rows: Vec<Vec<Scalar>> = Vec::new();
    for (block, &is_regular) in blocks.iter().zip(regular.iter()) {
        if is_regular {
            continue;
        }
        let b = block[0];
        eval_rows.push(basis.iter().map(|v| v.get(b, 0).clone()).collect());
    }
    let combos = linalg::kernel(field, &eval_rows, basis.len());
    let mut vectors = Vec::with_capacity(combos.len());
    for combo in combos {
        let mut v = SeriesVec::zero(field, ring.branches, trunc);
        for (c, basis_vec) in combo.iter().zip(basis.iter()) {
            if !c.is_zero() {
                v = v.add(&basis_vec.scale(c))?;
            }
        }
        vectors.push(v);
    }
    let tail = ring.full_from().ok_or(KoenigError::Domain(
        "singular locus needs a ring lattice with a conductor".into(),
    ))?;
    let ideal =
        FractionalIdeal::span_with_tail(field, ring.branches, trunc, &vectors, 0, tail.max(1))?;
    Ok(SingularLocus { blocks, regular, all_regular, ideal })
}

/// One normalization step `O -> End(I_Z) = (I_Z : I_Z)`, with the inclusions
/// `O ⊆ O# ⊆ O~` and strictness verified.
pub fn sharp(ring: &FractionalIdeal) -> Result<FractionalIdeal> {
    let locus = singular_locus(ring)?;
    if locus.all_regular {
        return Err(KoenigError::Domain("sharp of a regular ring".into()));
    }
    let endo = locus.ideal.colon(&locus.ideal)?;
    let full = FractionalIdeal::full(ring.field, ring.branches, ring.trunc);
    if !endo.contains(ring)? || !full.contains(&endo)? {
        return Err(KoenigError::Consistency(
            "endomorphism ring not between the ring and its normalization (truncation too small)"
                .into(),
        ));
    }
    if endo.equals(ring) {
        return Err(KoenigError::Consistency(
            "sharp did not strictly enlarge a non-regular ring (truncation too small)".into(),
        ));
    }
    validate_ring_lattice(&endo)?;
    Ok(endo)
}

/// Verifies the colon-ideal form of the canonical duality isomorphisms for a
/// non-regular ring: `(R : R#) = I_Z(R)` and `(R : I_Z(R)) = R#`.
pub fn duality_check(ring: &FractionalIdeal) -> Result<DualityReport> {
    let locus = singular_locus(ring)?;
    if locus.all_regular {
        return Err(KoenigError::Domain("duality check applies to non-regular rings".into()));
    }
    let sharp_ring = sharp(ring)?;
    let conductor_of_sharp = ring.colon(&sharp_ring)?;
    let colon_of_ideal = ring.colon(&locus.ideal)?;
    Ok(DualityReport {
        conductor_of_sharp_is_ideal: conductor_of_sharp.equals(&locus.ideal),
        colon_of_ideal_is_sharp: colon_of_ideal.equals(&sharp_ring),
    })
}

/// Iterates `sharp` from a validated local ring until the full lattice is
/// reached, recording the level.
pub fn normalization_chain(ring: &LocalRing) -> Result<NormalizationChain> {
    let full = FractionalIdeal::full(ring.lattice.field, ring.branches, ring.lattice.trunc);
    let guard = ring.branches * ring.conductor_exponent.max(1) + 2;
    let mut rings = vec![ring.lattice.clone()];
    let mut steps = 0usize;
    loop {
        let current = rings.last().unwrap();
        let locus = singular_locus(current)?;
        if locus.all_regular {
            if !current.equals(&full) {
                return Err(KoenigError::Consistency(
                    "regular endpoint of the chain is not the full lattice".into(),
                ));
            }
            break;
        }
        rings.push(sharp(current)?);
        steps += 1;
        if steps > guard {
            return Err(KoenigError::Precision { advised: ring.lattice.trunc * 2 });
        }
    }
    let level = rings.len() - 1;
    Ok(NormalizationChain { rings, level })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Field;

    fn f() -> Field {
        Field::Rational
    }

    /// Builds the ring closure of monomial-style generators given as
    /// (branch -> list of (degree, coefficient)) per generator.
    fn ring_from_gens(r: usize, n: usize, gens: &[Vec<Vec<(usize, i64)>>]) -> LocalRing {
        let vectors: Vec<SeriesVec> = gens
            .iter()
            .map(|branches| {
                let mut v = SeriesVec::zero(f(), r, n);
                for (b, terms) in branches.iter().enumerate() {
                    for &(d, c) in terms {
                        v.set(b, d, f().from_i64(c));
                    }
                }
                v
            })
            .collect();
        let lattice = FractionalIdeal::algebra_closure(f(), r, n, &vectors).unwrap();
        LocalRing::new(lattice).unwrap()
    }

    fn cusp(n: usize) -> LocalRing {
        ring_from_gens(1, n, &[vec![vec![(2, 1)]], vec![vec![(3, 1)]]])
    }

    fn node(n: usize) -> LocalRing {
        // u = (t,-t), v = (t,t).
        ring_from_gens(
            2,
            n,
            &[
                vec![vec![(1, 1)], vec![(1, -1)]],
                vec![vec![(1, 1)], vec![(1, 1)]],
            ],
        )
    }

    #[test]
    fn node_ring_is_one_block() {
        let o = node(12);
        assert_eq!(branch_blocks(&o.lattice), vec![vec![0, 1]]);
    }

    #[test]
    fn full_lattice_splits_into_branch_blocks() {
        let full = FractionalIdeal::full(f(), 2, 8);
        assert_eq!(branch_blocks(&full), vec![vec![0], vec![1]]);
        let full1 = FractionalIdeal::full(f(), 1, 8);
        assert_eq!(branch_blocks(&full1), vec![vec![0]]);
    }

    #[test]
    fn cusp_singular_ideal_is_the_maximal_ideal() {
        // Oracle: the evaluation kernel of O = <2,3> has valuations {2,3,4,...}.
        let o = cusp(12);
        let locus = singular_locus(&o.lattice).unwrap();
        assert!(!locus.all_regular);
        let vals: Vec<isize> = locus.ideal.pivot_valuations().iter().map(|&(d, _)| d).collect();
        assert_eq!(vals, (2..12).map(|d| d as isize).collect::<Vec<_>>());
    }

    #[test]
    fn full_lattice_is_regular() {
        let full = FractionalIdeal::full(f(), 2, 8);
        let locus = singular_locus(&full).unwrap();
        assert!(locus.all_regular);
        assert!(locus.ideal.equals(&full));
    }

    #[test]
    fn sharp_of_cusp_and_node_is_the_normalization() {
        let o = cusp(12);
        let s = sharp(&o.lattice).unwrap();
        assert!(s.equals(&FractionalIdeal::full(f(), 1, 12)));
        let o = node(12);
        let s = sharp(&o.lattice).unwrap();
        assert!(s.equals(&FractionalIdeal::full(f(), 2, 12)));
    }

    #[test]
    fn sharp_of_e6_ring() {
        // Oracle via colon ideals: End(m) for <3,4> is k + t^3 k[[t]].
        let o = ring_from_gens(1, 21, &[vec![vec![(3, 1)]], vec![vec![(4, 1)]]]);
        let s = sharp(&o.lattice).unwrap();
        let vals: Vec<isize> = s.pivot_valuations().iter().map(|&(d, _)| d).collect();
        let expected: Vec<isize> = std::iter::once(0).chain(3..21).map(|d| d as isize).collect();
        assert_eq!(vals, expected);
    }

    #[test]
    fn sharp_of_regular_ring_is_a_domain_error() {
        let full = FractionalIdeal::full(f(), 1, 8);
        assert!(matches!(sharp(&full), Err(KoenigError::Domain(_))));
    }

    #[test]
    fn duality_holds_for_cusp_node_and_a4() {
        for ring in [
            cusp(12).lattice,
            node(12).lattice,
            ring_from_gens(1, 15, &[vec![vec![(2, 1)]], vec![vec![(5, 1)]]]).lattice,
        ] {
            let report = duality_check(&ring).unwrap();
            assert!(report.passed());
        }
    }

    #[test]
    fn a4_chain_passes_through_the_tacnode_ring() {
        // O = <2,5> ⊂ <2,3> ⊂ k[[t]], level 2.
        let o = ring_from_gens(1, 15, &[vec![vec![(2, 1)]], vec![vec![(5, 1)]]]);
        let chain = normalization_chain(&o).unwrap();
        assert_eq!(chain.level, 2);
        let middle = ring_from_gens(1, 15, &[vec![vec![(2, 1)]], vec![vec![(3, 1)]]]);
        assert!(chain.rings[1].equals(&middle.lattice));
    }

    #[test]
    fn node_and_cusp_have_level_one() {
        assert_eq!(normalization_chain(&cusp(12)).unwrap().level, 1);
        assert_eq!(normalization_chain(&node(12)).unwrap().level, 1);
    }

    #[test]
    fn e7_has_level_three_with_a_semilocal_intermediate_ring() {
        // u = (0, t^3), v = (t, -t^2).
        let o = ring_from_gens(
            2,
            24,
            &[
                vec![vec![], vec![(3, 1)]],
                vec![vec![(1, 1)], vec![(2, -1)]],
            ],
        );
        let chain = normalization_chain(&o).unwrap();
        assert_eq!(chain.level, 3);
        // Block count never decreases along the chain and reaches r at the top.
        let mut prev = 0;
        for ring in &chain.rings {
            let count = branch_blocks(ring).len();
            assert!(count >= prev);
            prev = count;
        }
        assert_eq!(prev, 2);
    }

    #[test]
    fn d7_chain_has_a_semilocal_intermediate_with_a_regular_factor() {
        // u = (t, t^5), v = (0, t^2): line plus a deep cusp branch.
        let o = ring_from_gens(
            2,
            21,
            &[
                vec![vec![(1, 1)], vec![(5, 1)]],
                vec![vec![], vec![(2, 1)]],
            ],
        );
        let chain = normalization_chain(&o).unwrap();
        assert_eq!(chain.level, 3);
        // The third ring splits as (regular line) x (cusp); the singular
        // ideal must exclude the regular factor.
        let locus = singular_locus(&chain.rings[2]).unwrap();
        assert_eq!(locus.blocks.len(), 2);
        assert_eq!(locus.regular, vec![true, false]);
        // Vanishing ideal is full on the regular branch, maximal on the cusp.
        assert_eq!(locus.ideal.min_valuations(), vec![Some(0), Some(2)]);
    }

    #[test]
    fn regular_input_has_level_zero() {
        let full = FractionalIdeal::full(f(), 1, 8);
        let o = LocalRing::new(full).unwrap();
        let chain = normalization_chain(&o).unwrap();
        assert_eq!(chain.level, 0);
        assert_eq!(chain.rings.len(), 1);
    }

    #[test]
    fn chain_strictness() {
        let o = ring_from_gens(1, 27, &[vec![vec![(3, 1)]], vec![vec![(5, 1)]]]);
        let chain = normalization_chain(&o).unwrap();
        assert_eq!(chain.level, 3); // E8: <3,5> has level 3
        for w in chain.rings.windows(2) {
            assert!(w[1].contains(&w[0]).unwrap());
            assert!(!w[1].equals(&w[0]));
        }
    }

    #[test]
    fn semilocal_input_is_rejected_as_local_ring() {
        let full = FractionalIdeal::full(f(), 2, 8);
        assert!(LocalRing::new(full).is_err());
    }
}
