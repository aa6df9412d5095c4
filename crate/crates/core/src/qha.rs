//! The quasi-hereditary layer algebras of a matrix order: materialization of
//! the finite-dimensional quotients by lattice cosets, the heredity chain
//! verification, standard and costandard modules with their Ext
//! orthogonality, and the Ext^1 bimodule over the normalization.

use crate::chain::{singular_locus, NormalizationChain};
use crate::error::{KoenigError, Result};
use crate::findim::modules::{ext_dim, AlgModule};
use crate::findim::{SparseVec, StructAlgebra, VertexData};
use crate::linalg::{self, Subspace};
use crate::order::OrderMatrix;
use crate::scalar::Scalar;
use crate::series::SeriesVec;

/// Provenance of one basis element of a layer algebra: the matrix position
/// (0-based) and the lattice representative of its coset.
#[derive(Clone, Debug)]
pub struct CosetElem {
    pub row: usize,
    pub col: usize,
    pub rep: SeriesVec,
}

/// One layer `Q_k` of the quotient tower, as a structure-constant algebra
/// with its diagonal idempotents and coset provenance.
#[derive(Clone)]
pub struct QLayer {
    /// 1-based layer index `k`.
    pub k: usize,
    pub algebra: StructAlgebra,
    pub basis_info: Vec<CosetElem>,
    /// Diagonal unit cosets, one per matrix index `0..k`.
    pub diagonal_idempotents: Vec<Vec<Scalar>>,
}

impl std::fmt::Debug for QLayer {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "QLayer(k={}, dim {})", self.k, self.algebra.dim)
    }
}

/// Entry-wise reduction data for one matrix position of a layer.
struct EntryData {
    denominator: Subspace,
    cosets: Subspace,
    /// Indices into the layer basis, in coset order.
    basis_slots: Vec<usize>,
}

/// Builds the layer algebra `Q_k` for `1 <= k <= n` from the chain and the
/// order: entries `O_j / I_{k+1,j}` on and above the diagonal, and
/// `I_{i,j} / I_{k+1,j}` below it.
pub fn build_q_layer(chain: &NormalizationChain, order: &OrderMatrix, k: usize) -> Result<QLayer> {
    assert!(k >= 1 && k <= chain.level, "layer index out of range");
    let field = chain.rings[0].field;
    // Denominators: row k of the order (0-based) restricted to columns <

    // k; numerators: the top-left k x k block.
    let mut entries: Vec<Vec<EntryData>> = Vec::with_capacity(k);
    let mut basis_info: Vec<CosetElem> = Vec::new();
    for i in 0..k {
        let mut row = Vec::with_capacity(k);
        for j in 0..k {
            let numerator = &order.entries[i][j];
            let denominator = &order.entries[k][j];
            let quotient = numerator.quotient(denominator)?;
            if quotient.shift != 0 {
                return Err(KoenigError::Consistency(
                    "layer cosets unexpectedly live at a nonzero shift".into(),
                ));
            }
            let mut slots = Vec::with_capacity(quotient.dim);
            for rep in &quotient.cosets {
                slots.push(basis_info.len());
                basis_info.push(CosetElem { row: i, col: j, rep: rep.clone() });
            }
            let den_sub = Subspace::from_spanning(
                field,
                denominator.branches * denominator.trunc,
                denominator
                    .rebase(0)
                    .expect("shift-0 lattice")
                    .basis()
                    .iter()
                    .map(|v| v.coords().to_vec())
                    .collect(),
            );
            let coset_sub = Subspace::from_spanning(
                field,
                denominator.branches * denominator.trunc,
                quotient.cosets.iter().map(|v| v.coords().to_vec()).collect(),
            );
            row.push(EntryData { denominator: den_sub, cosets: coset_sub, basis_slots: slots });
        }
        entries.push(row);
    }

    let dim = basis_info.len();
    // Coordinates of a lattice element inside an entry's coset basis.
    let entry_coords = |i: usize, j: usize, z: &SeriesVec| -> Result<Vec<(usize, Scalar)>> {
        let e = &entries[i][j];
        let reduced = linalg::reduce(z.coords(), &e.denominator.rows, &e.denominator.pivots);
        let coords = linalg::coordinates(&reduced, &e.cosets.rows, &e.cosets.pivots)
            .ok_or_else(|| KoenigError::Precision { advised: 2 * z.trunc })?;
        Ok(coords
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(idx, c)| (e.basis_slots[idx], c))
            .collect())
    };

    let mut table = vec![vec![SparseVec::new(); dim]; dim];
    for (a, ea) in basis_info.iter().enumerate() {
        for (b, eb) in basis_info.iter().enumerate() {
            if ea.col != eb.row {
                continue;
            }
            let product = ea.rep.mul(&eb.rep)?;
            let mut entry = entry_coords(ea.row, eb.col, &product)?;
            entry.sort_by_key(|(i, _)| *i);
            table[a][b] = entry;
        }
    }

    // Diagonal unit cosets.
    let one = SeriesVec::one(field, chain.rings[0].branches, chain.rings[0].trunc);
    let mut unit = vec![field.zero(); dim];
    let mut diagonal_idempotents = Vec::with_capacity(k);
    for m in 0..k {
        let coords = entry_coords(m, m, &one)?;
        let mut e = vec![field.zero(); dim];
        for (idx, c) in coords {
            e[idx] = c.clone();
            unit[idx] = unit[idx].add(&c);
        }
        diagonal_idempotents.push(e);
    }

    // Primitive idempotents: block indicators of the singular factors of
    // each diagonal ring, which refine the diagonal unit cosets.
    let mut primitives: Vec<(String, Vec<Scalar>)> = Vec::new();
    for m in 0..k {
        let locus = singular_locus(&chain.rings[m])?;
        let singular_count = locus.regular.iter().filter(|&&r| !r).count();
        let mut count = 0usize;
        for (block, regular) in locus.blocks.iter().zip(locus.regular.iter()) {
            if *regular {
                continue;
            }
            count += 1;
            let mut chi = SeriesVec::zero(field, one.branches, one.trunc);
            for &b in block {
                chi.set(b, 0, field.one());
            }
            let coords = entry_coords(m, m, &chi)?;
            let mut e = vec![field.zero(); dim];
            for (idx, c) in coords {
                e[idx] = c;
            }
            let label = if singular_count == 1 {
                format!("v{}", m + 1)
            } else {
                format!("v{}.{}", m + 1, count)
            };
            primitives.push((label, e));
        }
    }

    let labels: Vec<String> = basis_info
        .iter()
        .enumerate()
        .map(|(idx, e)| format!("q{}_{}{}", e.row + 1, e.col + 1, idx))
        .collect();
    let algebra = StructAlgebra::new(field, labels, table, unit, Some(primitives))?;
    Ok(QLayer { k, algebra, basis_info, diagonal_idempotents })
}

/// All layers `Q_1, ..., Q_n`.
pub fn build_layers(chain: &NormalizationChain, order: &OrderMatrix) -> Result<Vec<QLayer>> {
    (1..=chain.level).map(|k| build_q_layer(chain, order, k)).collect()
}

/// The algebra homomorphism `Q_k -> Q_m` (m < k) induced by the tower of
/// quotients, as a dim(Q_m) x dim(Q_k) matrix on basis coordinates.
pub fn layer_hom(
    chain: &NormalizationChain,
    order: &OrderMatrix,
    from: &QLayer,
    to: &QLayer,
) -> Result<Vec<Vec<Scalar>>> {
    assert!(to.k < from.k);
    let field = chain.rings[0].field;
    let _ = order;
    // Reduction data of the target layer.
    let mut columns: Vec<Vec<Scalar>> = Vec::with_capacity(from.algebra.dim);
    for elem in &from.basis_info {
        let mut col = vec![field.zero(); to.algebra.dim];
        if elem.row < to.k && elem.col < to.k {
            let coords = reduce_into_layer(to, elem.row, elem.col, &elem.rep)?;
            for (idx, c) in coords {
                col[idx] = c;
            }
        }
        columns.push(col);
    }
    // Row-major matrix.
    let mut m = vec![vec![field.zero(); from.algebra.dim]; to.algebra.dim];
    for (j, col) in columns.iter().enumerate() {
        for (i, x) in col.iter().enumerate() {
            m[i][j] = x.clone();
        }
    }
    Ok(m)
}

/// Expresses a lattice element as coordinates in a layer's coset basis at
/// the given matrix entry.
fn reduce_into_layer(
    layer: &QLayer,
    row: usize,
    col: usize,
    z: &SeriesVec,
) -> Result<Vec<(usize, Scalar)>> {
    let field = z.field;
    // Rebuild the entry reduction data from the layer's basis info: the
    // denominator is not stored, so reduce against the span of (cosets +
    // denominator) via the stored representatives. To stay exact we rebuild
    // the denominator from provenance: all layer cosets at (row, col) span
    // the complement; anything reducing to zero against cosets after the
    // denominator reduction lies in the denominator.
    //
    // The layer keeps only coset representatives; the denominator span is
    // reconstructed lazily by the caller that owns the order. To avoid
    // duplicating state, `layer_hom` is the sole caller and the reduction
    // uses the coset system of the *target* layer entry, which is an echelon
    // complement of the denominator: reducing z by the denominator first is
    // equivalent to solving z = sum(coset coords) + denominator element.
    let slots: Vec<usize> = layer
        .basis_info
        .iter()
        .enumerate()
        .filter(|(_, e)| e.row == row && e.col == col)
        .map(|(i, _)| i)
        .collect();
    let coset_rows: Vec<Vec<Scalar>> =
        slots.iter().map(|&i| layer.basis_info[i].rep.coords().to_vec()).collect();
    let cosets = Subspace::from_spanning(field, z.branches * z.trunc, coset_rows.clone());
    // z decomposes as coset part + denominator part; the coset coordinates
    // are read off the pivots of the (reduced echelon) coset system.
    let mut coords = Vec::new();
    let mut remainder = z.coords().to_vec();
    for (slot_pos, row_vec) in cosets.rows.iter().enumerate() {
        let piv = cosets.pivots[slot_pos];
        if !remainder[piv].is_zero() {
            let c = remainder[piv].clone();
            for (x, y) in remainder.iter_mut().zip(row_vec.iter()) {
                *x = x.sub(&c.mul(y));
            }
            coords.push((slots[slot_pos], c));
        }
    }
    // The remainder must lie in the denominator; layer construction
    // guarantees it, so no further check is possible here without the
    // denominator span. Callers verify homomorphy afterwards.
    Ok(coords)
}

/// Report of the heredity-chain verification across all layers.
#[derive(Clone, Debug)]
pub struct HeredityReport {
    pub layers_checked: usize,
    pub passed: bool,
    pub failures: Vec<String>,
}

/// Verifies, for each layer `k >= 2`: semisimplicity of the diagonal corner,
/// bijectivity of the multiplication map onto the heredity ideal, and that
/// the quotient by the heredity ideal is the previous layer.
pub fn heredity_check(
    chain: &NormalizationChain,
    order: &OrderMatrix,
    layers: &[QLayer],
) -> Result<HeredityReport> {
    let mut failures = Vec::new();
    for idx in 1..layers.len() {
        let layer = &layers[idx];
        let prev = &layers[idx - 1];
        let k = layer.k;
        let alg = &layer.algebra;
        let field = alg.field;
        let e_k = &layer.diagonal_idempotents[k - 1];

        // (a) The corner e_k Q_k e_k is semisimple and commutative.
        let corner_vectors: Vec<Vec<Scalar>> = (0..alg.dim)
            .map(|b| {
                let mut v = vec![field.zero(); alg.dim];
                v[b] = field.one();
                alg.mul_vec(e_k, &alg.mul_vec(&v, e_k))
            })
            .collect();
        let corner = Subspace::from_spanning(field, alg.dim, corner_vectors);
        // Products of corner elements must satisfy x*y = y*x and the corner
        // radical must vanish: for a commutative split corner it suffices
        // that x^2 = 0 implies x = 0 on a basis of nilpotents; we check
        // directly that the corner is spanned by orthogonal idempotents via
        // the block decomposition used at construction time.
        let mut corner_ok = true;
        for x in &corner.rows {
            for y in &corner.rows {
                if alg.mul_vec(x, y) != alg.mul_vec(y, x) {
                    corner_ok = false;
                }
            }
        }
        // Semisimplicity: the corner has a basis of the block idempotents,
        // so its dimension equals the number of singular blocks of O_k.
        let expected_blocks = {
            let locus = singular_locus(&chain.rings[k - 1])?;
            locus.regular.iter().filter(|&&r| !r).count()
        };
        if corner.dim() != expected_blocks {
            corner_ok = false;
        }
        if !corner_ok {
            failures.push(format!("layer {k}: corner is not split semisimple"));
        }

        // (b) dim(Q_k e_k (x) e_k Q_k over the corner) = dim L_k and the
        // multiplication map is onto L_k by construction.
        let column: Vec<Vec<Scalar>> = (0..alg.dim)
            .map(|b| {
                let mut v = vec![field.zero(); alg.dim];
                v[b] = field.one();
                alg.mul_vec(&v, e_k)
            })
            .collect();
        let row: Vec<Vec<Scalar>> = (0..alg.dim)
            .map(|b| {
                let mut v = vec![field.zero(); alg.dim];
                v[b] = field.one();
                alg.mul_vec(e_k, &v)
            })
            .collect();
        let column_space = Subspace::from_spanning(field, alg.dim, column.clone());
        let row_space = Subspace::from_spanning(field, alg.dim, row.clone());
        // Tensor dimension over the semisimple corner: sum over blocks of
        // dim(column * chi) * dim(chi * row).
        let blocks: Vec<Vec<Scalar>> = block_idempotents_of_layer(chain, layer, k - 1)?;
        let mut tensor_dim = 0usize;
        for chi in &blocks {
            let col_part = Subspace::from_spanning(
                field,
                alg.dim,
                column_space.rows.iter().map(|v| alg.mul_vec(v, chi)).collect(),
            );
            let row_part = Subspace::from_spanning(
                field,
                alg.dim,
                row_space.rows.iter().map(|v| alg.mul_vec(chi, v)).collect(),
            );
            tensor_dim += col_part.dim() * row_part.dim();
        }
        let mut products = Vec::new();
        for x in &column_space.rows {
            for y in &row_space.rows {
                products.push(alg.mul_vec(x, y));
            }
        }
        let heredity_ideal = Subspace::from_spanning(field, alg.dim, products);
        if tensor_dim != heredity_ideal.dim() {
            failures.push(format!(
                "layer {k}: multiplication map is not bijective ({} vs {})",
                tensor_dim,
                heredity_ideal.dim()
            ));
        }

        // (c) Q_k / L_k is the previous layer via the natural projection.
        let hom = layer_hom(chain, order, layer, prev)?;
        let apply = |v: &[Scalar]| -> Vec<Scalar> {
            let mut out = vec![field.zero(); prev.algebra.dim];
            for (i, row_h) in hom.iter().enumerate() {
                for (j, h) in row_h.iter().enumerate() {
                    if !h.is_zero() && !v[j].is_zero() {
                        out[i] = out[i].add(&h.mul(&v[j]));
                    }
                }
            }
            out
        };
        // Homomorphy on all basis pairs.
        let mut hom_ok = true;
        for a in 0..alg.dim {
            for b in 0..alg.dim {
                let mut va = vec![field.zero(); alg.dim];
                va[a] = field.one();
                let mut vb = vec![field.zero(); alg.dim];
                vb[b] = field.one();
                let lhs = apply(&alg.mul_vec(&va, &vb));
                let rhs = prev.algebra.mul_vec(&apply(&va), &apply(&vb));
                if lhs != rhs {
                    hom_ok = false;
                }
            }
        }
        if !hom_ok {
            failures.push(format!("layer {k}: projection is not an algebra homomorphism"));
        }
        // Surjectivity and kernel = L_k.
        let image = Subspace::from_spanning(
            field,
            prev.algebra.dim,
            (0..alg.dim)
                .map(|a| {
                    let mut va = vec![field.zero(); alg.dim];
                    va[a] = field.one();
                    apply(&va)
                })
                .collect(),
        );
        if image.dim() != prev.algebra.dim {
            failures.push(format!("layer {k}: projection is not surjective"));
        }
        let kernel_dim = alg.dim - image.dim();
        let contained =
            heredity_ideal.rows.iter().all(|v| apply(v).iter().all(|x| x.is_zero()));
        if !contained || kernel_dim != heredity_ideal.dim() {
            failures.push(format!("layer {k}: kernel of the projection is not the heredity ideal"));
        }
    }
    Ok(HeredityReport {
        layers_checked: layers.len().saturating_sub(1),
        passed: failures.is_empty(),
        failures,
    })
}

/// Block idempotents of the diagonal ring `O_{m+1}` inside a layer (singular
/// blocks only), as layer coordinates.
fn block_idempotents_of_layer(
    chain: &NormalizationChain,
    layer: &QLayer,
    m: usize,
) -> Result<Vec<Vec<Scalar>>> {
    let field = layer.algebra.field;
    let ring = &chain.rings[m];
    let locus = singular_locus(ring)?;
    let mut out = Vec::new();
    for (block, regular) in locus.blocks.iter().zip(locus.regular.iter()) {
        if *regular {
            continue;
        }
        let mut chi = SeriesVec::zero(field, ring.branches, ring.trunc);
        for &b in block {
            chi.set(b, 0, field.one());
        }
        let coords = reduce_into_layer(layer, m, m, &chi)?;
        let mut e = vec![field.zero(); layer.algebra.dim];
        for (idx, c) in coords {
            e[idx] = c;
        }
        out.push(e);
    }
    Ok(out)
}

/// Standard and costandard modules of the top layer algebra `Q = Q_n`.
#[derive(Clone, Debug)]
pub struct StandardModules {
    pub deltas: Vec<AlgModule>,
    pub nablas: Vec<AlgModule>,
    /// `dim O-bar_k` per layer (the endomorphism rings of the standards).
    pub diagonal_dims: Vec<usize>,
}

/// Builds the standard modules (projectives of the layer quotients inflated
/// up) and costandard modules (their opposite-algebra duals).
pub fn standard_modules(
    chain: &NormalizationChain,
    order: &OrderMatrix,
    layers: &[QLayer],
) -> Result<StandardModules> {
    let n = layers.len();
    assert!(n >= 1);
    let top = &layers[n - 1];
    let field = top.algebra.field;
    let mut deltas = Vec::with_capacity(n);
    let mut nablas = Vec::with_capacity(n);
    let mut diagonal_dims = Vec::with_capacity(n);

    for (ki, layer) in layers.iter().enumerate() {
        let k = ki + 1;
        // Projection Q = Q_n -> Q_k on coordinates.
        let hom: Vec<Vec<Scalar>> = if k == n {
            identity(field, top.algebra.dim)
        } else {
            layer_hom(chain, order, top, layer)?
        };
        // Column-k and row-k index sets of Q_k.
        let col_idx: Vec<usize> = layer
            .basis_info
            .iter()
            .enumerate()
            .filter(|(_, e)| e.col == k - 1)
            .map(|(i, _)| i)
            .collect();
        let row_idx: Vec<usize> = layer
            .basis_info
            .iter()
            .enumerate()
            .filter(|(_, e)| e.row == k - 1)
            .map(|(i, _)| i)
            .collect();
        diagonal_dims.push(
            layer
                .basis_info
                .iter()
                .filter(|e| e.row == k - 1 && e.col == k - 1)
                .count(),
        );

        // Delta_k: left multiplication on the column.
        let mut delta_action = Vec::with_capacity(top.algebra.dim);
        // Nabla_k: dual of right multiplication on the row.
        let mut nabla_action = Vec::with_capacity(top.algebra.dim);
        for q in 0..top.algebra.dim {
            let image: Vec<Scalar> = hom.iter().map(|row| row[q].clone()).collect();
            // Left action on column space.
            let mut dmat = vec![vec![field.zero(); col_idx.len()]; col_idx.len()];
            for (c, &src) in col_idx.iter().enumerate() {
                let mut v = vec![field.zero(); layer.algebra.dim];
                v[src] = field.one();
                let prod = layer.algebra.mul_vec(&image, &v);
                for (r, &dst) in col_idx.iter().enumerate() {
                    dmat[r][c] = prod[dst].clone();
                }
            }
            delta_action.push(dmat);
            // Right action on row space, transposed.
            let mut rmat = vec![vec![field.zero(); row_idx.len()]; row_idx.len()];
            for (c, &src) in row_idx.iter().enumerate() {
                let mut v = vec![field.zero(); layer.algebra.dim];
                v[src] = field.one();
                let prod = layer.algebra.mul_vec(&v, &image);
                for (r, &dst) in row_idx.iter().enumerate() {
                    rmat[r][c] = prod[dst].clone();
                }
            }
            let transposed: Vec<Vec<Scalar>> = (0..row_idx.len())
                .map(|i| (0..row_idx.len()).map(|j| rmat[j][i].clone()).collect())
                .collect();
            nabla_action.push(transposed);
        }
        deltas.push(AlgModule::new(&top.algebra, delta_action)?);
        nablas.push(AlgModule::new(&top.algebra, nabla_action)?);
    }
    Ok(StandardModules { deltas, nablas, diagonal_dims })
}

/// Ext-orthogonality report for the standard and costandard modules.
#[derive(Clone, Debug)]
pub struct ExtOrthogonality {
    pub pmax: usize,
    pub passed: bool,
    pub failures: Vec<String>,
}

/// Verifies the one-sided vanishing of standard-module extensions: with the
/// top layer maximal in the heredity order, `Ext^p(Delta_i, Delta_j) = 0`
/// for `i > j` and `Ext^p(Nabla_i, Nabla_j) = 0` for `i < j`, in every
/// degree `p <= pmax`; self-extensions vanish in positive degrees; the
/// endomorphism ring of each standard has the diagonal dimension.
pub fn ext_orthogonality(
    q: &StructAlgebra,
    vd: &VertexData,
    standards: &StandardModules,
    pmax: usize,
) -> Result<ExtOrthogonality> {
    let n = standards.deltas.len();
    let mut failures = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for p in 0..=pmax {
                if i > j {
                    let d = ext_dim(q, vd, &standards.deltas[i], &standards.deltas[j], p)?;
                    if d != 0 {
                        failures.push(format!("Ext^{p}(Delta_{}, Delta_{}) = {d}", i + 1, j + 1));
                    }
                    let dn = ext_dim(q, vd, &standards.nablas[j], &standards.nablas[i], p)?;
                    if dn != 0 {
                        failures.push(format!("Ext^{p}(Nabla_{}, Nabla_{}) = {dn}", j + 1, i + 1));
                    }
                }
                if i == j && p >= 1 {
                    let d = ext_dim(q, vd, &standards.deltas[i], &standards.deltas[i], p)?;
                    if d != 0 {
                        failures.push(format!("Ext^{p}(Delta_{0}, Delta_{0}) = {d}", i + 1));
                    }
                    let dn = ext_dim(q, vd, &standards.nablas[i], &standards.nablas[i], p)?;
                    if dn != 0 {
                        failures.push(format!("Ext^{p}(Nabla_{0}, Nabla_{0}) = {dn}", i + 1));
                    }
                }
            }
        }
        let end_dim = ext_dim(q, vd, &standards.deltas[i], &standards.deltas[i], 0)?;
        if end_dim != standards.diagonal_dims[i] {
            failures.push(format!(
                "End(Delta_{}) has dimension {end_dim}, expected {}",
                i + 1,
                standards.diagonal_dims[i]
            ));
        }
    }
    Ok(ExtOrthogonality { pmax, passed: failures.is_empty(), failures })
}

// ---------------------------------------------------------------------
// The Ext^1 bimodule W
// ---------------------------------------------------------------------

/// Basis label of the bimodule: the class of `t^{-exp}` on one branch inside
/// `(O~ : C_k)/O~`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WBasisElem {
    /// 0-based layer index `k`.
    pub layer: usize,
    pub branch: usize,
    /// Exponent `e >= 1` of the class of `t^{-e}`.
    pub exp: usize,
}

/// The bimodule `W = ⊕_k (O~ : C_k)/O~` with its left action of the top
/// layer algebra and the right t-adic action of the normalization.
#[derive(Clone)]
pub struct BimoduleW {
    /// Per layer (0-based k), per branch: the conductor exponent of `C_{k+1}`.
    pub conductor_exponents: Vec<Vec<usize>>,
    pub basis: Vec<WBasisElem>,
    /// One dim(W) x dim(W) matrix per basis element of Q.
    pub left_action: Vec<Vec<Vec<Scalar>>>,
    /// Right action of multiplication by t on each branch.
    pub right_t: Vec<Vec<Vec<Scalar>>>,
    /// Right action of the branch idempotents of the normalization.
    pub right_idem: Vec<Vec<Vec<Scalar>>>,
}

impl std::fmt::Debug for BimoduleW {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "BimoduleW(dim {})", self.basis.len())
    }
}

impl BimoduleW {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn index_of(&self, layer: usize, branch: usize, exp: usize) -> Option<usize> {
        self.basis.iter().position(|b| b.layer == layer && b.branch == branch && b.exp == exp)
    }

    /// Dimension of the layer-k part (`O~/C_{k+1}` colength).
    pub fn layer_dims(&self) -> Vec<usize> {
        self.conductor_exponents.iter().map(|c| c.iter().sum()).collect()
    }
}

/// Builds the bimodule from the bottom row of the order and the top layer.
/// The left action of a coset `a` at entry (i,j) carries the class of
/// `y = t^{-e}` on a branch to the class of `y * a`; independence of the
/// representative is verified against the denominator lattice.
pub fn bimodule_w(
    chain: &NormalizationChain,
    order: &OrderMatrix,
    top: &QLayer,
) -> Result<BimoduleW> {
    let n = chain.level;
    assert_eq!(top.k, n);
    let field = chain.rings[0].field;
    let r = chain.rings[0].branches;
    let trunc = chain.rings[0].trunc;

    let mut conductor_exponents = Vec::with_capacity(n);
    for k in 0..n {
        let c_k = &order.entries[n][k];
        let minvals = c_k.min_valuations();
        let mut exps = Vec::with_capacity(r);
        for mv in &minvals {
            match mv {
                Some(v) if *v >= 0 => exps.push(*v as usize),
                _ => {
                    return Err(KoenigError::Consistency(
                        "conductor entry vanishes on a branch".into(),
                    ))
                }
            }
        }
        conductor_exponents.push(exps);
    }
    let mut basis = Vec::new();
    for (k, exps) in conductor_exponents.iter().enumerate() {
        for (b, &c) in exps.iter().enumerate() {
            for e in 1..=c {
                basis.push(WBasisElem { layer: k, branch: b, exp: e });
            }
        }
    }
    let dim = basis.len();
    let index: std::collections::HashMap<(usize, usize, usize), usize> = basis
        .iter()
        .enumerate()
        .map(|(i, w)| ((w.layer, w.branch, w.exp), i))
        .collect();

    // Left action per Q basis element.
    let act_by_rep = |row: usize, col: usize, rep: &SeriesVec| -> Result<Vec<Vec<Scalar>>> {
        let mut m = vec![vec![field.zero(); dim]; dim];
        for (widx, w) in basis.iter().enumerate() {
            if w.layer != col {
                continue;
            }
            let b = w.branch;
            // Class of t^{-e} * rep on branch b: coefficient of t^{-f} is
            // rep_b[e - f] for 1 <= f <= e.
            for f in 1..=w.exp {
                let coeff = rep.get(b, w.exp - f);
                if coeff.is_zero() {
                    continue;
                }
                match index.get(&(row, b, f)) {
                    Some(&target) => m[target][widx] = m[target][widx].add(coeff),
                    None => {
                        return Err(KoenigError::Consistency(format!(
                            "left action escapes the conductor window at layer {row}, branch {b}, exponent {f}"
                        )))
                    }
                }
            }
        }
        Ok(m)
    };
    let mut left_action = Vec::with_capacity(top.algebra.dim);
    for elem in &top.basis_info {
        left_action.push(act_by_rep(elem.row, elem.col, &elem.rep)?);
    }
    // Representative independence: adding a denominator element must not
    // change the action.
    for elem in &top.basis_info {
        let den = &order.entries[n][elem.col];
        if let Some(dvec) = den.basis().first() {
            let shifted = elem.rep.add(dvec)?;
            if act_by_rep(elem.row, elem.col, &shifted)?
                != act_by_rep(elem.row, elem.col, &elem.rep)?
            {
                return Err(KoenigError::Consistency(
                    "bimodule action depends on the choice of coset representative".into(),
                ));
            }
        }
    }

    // Right actions.
    let mut right_t = Vec::with_capacity(r);
    let mut right_idem = Vec::with_capacity(r);
    for b in 0..r {
        let mut tm = vec![vec![field.zero(); dim]; dim];
        let mut im = vec![vec![field.zero(); dim]; dim];
        for (widx, w) in basis.iter().enumerate() {
            if w.branch != b {
                continue;
            }
            im[widx][widx] = field.one();
            if w.exp >= 2 {
                let target = index[&(w.layer, b, w.exp - 1)];
                tm[target][widx] = field.one();
            }
        }
        right_t.push(tm);
        right_idem.push(im);
    }

    let w = BimoduleW { conductor_exponents, basis, left_action, right_t, right_idem };

    // Left and right actions commute elementwise.
    let mat_mul = |a: &Vec<Vec<Scalar>>, b: &Vec<Vec<Scalar>>| -> Vec<Vec<Scalar>> {
        let mut out = vec![vec![field.zero(); dim]; dim];
        for i in 0..dim {
            for k in 0..dim {
                if a[i][k].is_zero() {
                    continue;
                }
                for j in 0..dim {
                    if !b[k][j].is_zero() {
                        out[i][j] = out[i][j].add(&a[i][k].mul(&b[k][j]));
                    }
                }
            }
        }
        out
    };
    for l in &w.left_action {
        for rmat in w.right_t.iter().chain(w.right_idem.iter()) {
            if mat_mul(l, rmat) != mat_mul(rmat, l) {
                return Err(KoenigError::Consistency(
                    "left and right bimodule actions do not commute".into(),
                ));
            }
        }
    }
    let _ = trunc;
    Ok(w)
}

/// Verifies the two-generator presentation of the bimodule for a unibranch
/// chain: with `g1` the deepest class in the first layer and `g2 = g1 * t`,
/// checks `g1 t = g2` and `g2 t = (loop at vertex 1) * g1` (zero for level 1).
pub fn check_w_generator_relations(
    w: &BimoduleW,
    top: &QLayer,
) -> Result<bool> {
    let field = top.algebra.field;
    if w.conductor_exponents.is_empty() || w.conductor_exponents[0].len() != 1 {
        return Err(KoenigError::Domain(
            "generator relations are checked for unibranch chains".into(),
        ));
    }
    let c1 = w.conductor_exponents[0][0];
    if c1 < 2 {
        return Err(KoenigError::Domain("first conductor exponent must be at least 2".into()));
    }
    let dim = w.dim();
    let g1 = w.index_of(0, 0, c1).unwrap();
    let g2 = w.index_of(0, 0, c1 - 1).unwrap();
    let apply = |m: &Vec<Vec<Scalar>>, v: &Vec<Scalar>| -> Vec<Scalar> {
        (0..dim)
            .map(|i| {
                let mut acc = field.zero();
                for j in 0..dim {
                    if !m[i][j].is_zero() && !v[j].is_zero() {
                        acc = acc.add(&m[i][j].mul(&v[j]));
                    }
                }
                acc
            })
            .collect()
    };
    let e = |i: usize| -> Vec<Scalar> {
        let mut v = vec![field.zero(); dim];
        v[i] = field.one();
        v
    };
    // g1 * t = g2.
    if apply(&w.right_t[0], &e(g1)) != e(g2) {
        return Ok(false);
    }
    // g2 * t = alpha_1 beta_1 * g1, the loop at vertex 1 acting on g1.
    let g2t = apply(&w.right_t[0], &e(g2));
    if top.k == 1 {
        return Ok(g2t.iter().all(|x| x.is_zero()));
    }
    // alpha_1: unit coset at entry (0,1); beta_1: any arrow coset at (1,0)
    // of minimal valuation. The product is computed in Q.
    let alpha = top
        .basis_info
        .iter()
        .enumerate()
        .filter(|(_, el)| el.row == 0 && el.col == 1)
        .min_by_key(|(_, el)| el.rep.valuations()[0].unwrap_or(usize::MAX));
    let beta = top
        .basis_info
        .iter()
        .enumerate()
        .filter(|(_, el)| el.row == 1 && el.col == 0)
        .min_by_key(|(_, el)| el.rep.valuations()[0].unwrap_or(usize::MAX));
    let (Some((ai, _)), Some((bi, _))) = (alpha, beta) else {
        return Ok(false);
    };
    let qdim = top.algebra.dim;
    let mut va = vec![field.zero(); qdim];
    va[ai] = field.one();
    let mut vb = vec![field.zero(); qdim];
    vb[bi] = field.one();
    let loop_elem = top.algebra.mul_vec(&va, &vb);
    // Act on g1 by the loop.
    let mut acted = vec![field.zero(); dim];
    for (qi, c) in loop_elem.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let img = apply(&w.left_action[qi], &e(g1));
        for (x, y) in acted.iter_mut().zip(img.iter()) {
            *x = x.add(&c.mul(y));
        }
    }
    Ok(acted == g2t)
}

fn identity(field: crate::scalar::Field, n: usize) -> Vec<Vec<Scalar>> {
    let mut m = vec![vec![field.zero(); n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = field.one();
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{normalization_chain, LocalRing};
    use crate::findim::modules::global_dimension;
    use crate::findim::GlobalDimension;
    use crate::lattice::FractionalIdeal;
    use crate::order::build_order;
    use crate::scalar::Field;

    fn f() -> Field {
        Field::Rational
    }

    fn monomial_chain(n: usize, gens: &[usize]) -> (NormalizationChain, OrderMatrix) {
        let vectors: Vec<SeriesVec> = gens
            .iter()
            .map(|&g| SeriesVec::monomial(f(), 1, n, 0, g))
            .collect();
        let ring =
            LocalRing::new(FractionalIdeal::algebra_closure(f(), 1, n, &vectors).unwrap()).unwrap();
        let chain = normalization_chain(&ring).unwrap();
        let order = build_order(&chain).unwrap();
        (chain, order)
    }

    #[test]
    fn cusp_top_layer_is_the_ground_field() {
        let (chain, order) = monomial_chain(9, &[2, 3]);
        let layers = build_layers(&chain, &order).unwrap();
        assert_eq!(layers.len(), 1);
        assert_eq!(layers[0].algebra.dim, 1);
    }

    #[test]
    fn a4_layer_dimensions() {
        // Oracle (lattice-quotient dimensions): O1/C1 = 2, O2/C2 = 1,
        // I21/C1 = 1,总 dim Q = 5.
        let (chain, order) = monomial_chain(15, &[2, 5]);
        let layers = build_layers(&chain, &order).unwrap();
        assert_eq!(layers.len(), 2);
        assert_eq!(layers[0].algebra.dim, 1); // Q_1 = O_1/I_1 is the residue field
        assert_eq!(layers[1].algebra.dim, 5);
        let vd = layers[1].algebra.vertex_data().unwrap();
        assert_eq!(vd.count(), 2);
        assert_eq!(layers[1].algebra.cartan_matrix(&vd), vec![vec![2, 1], vec![1, 1]]);
        assert_eq!(layers[1].algebra.quiver_arrows(&vd), vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(
            global_dimension(&layers[1].algebra, &vd, 8).unwrap(),
            GlobalDimension::Finite(2)
        );
    }

    #[test]
    fn e6_top_layer_has_dimension_seven() {
        let (chain, order) = monomial_chain(21, &[3, 4]);
        let layers = build_layers(&chain, &order).unwrap();
        let q = &layers.last().unwrap().algebra;
        assert_eq!(q.dim, 7);
        let vd = q.vertex_data().unwrap();
        assert_eq!(q.quiver_arrows(&vd), vec![vec![0, 2], vec![1, 0]]);
        assert_eq!(q.cartan_matrix(&vd), vec![vec![3, 2], vec![1, 1]]);
        assert_eq!(global_dimension(q, &vd, 8).unwrap(), GlobalDimension::Finite(2));
    }

    #[test]
    fn heredity_chain_verifies_on_a4_and_e6() {
        for gens in [vec![2usize, 5], vec![3, 4]] {
            let (chain, order) = monomial_chain(21, &gens);
            let layers = build_layers(&chain, &order).unwrap();
            let report = heredity_check(&chain, &order, &layers).unwrap();
            assert!(report.passed, "{:?}", report.failures);
        }
    }

    #[test]
    fn standard_modules_of_a4() {
        let (chain, order) = monomial_chain(15, &[2, 5]);
        let layers = build_layers(&chain, &order).unwrap();
        let standards = standard_modules(&chain, &order, &layers).unwrap();
        // dim Delta_k = k * dim(O-bar_k) for unibranch chains.
        assert_eq!(standards.deltas[0].dim, 1);
        assert_eq!(standards.deltas[1].dim, 2);
        assert_eq!(standards.nablas[0].dim, 1);
        assert_eq!(standards.nablas[1].dim, 2);
        // The first-vertex component of Delta_k has dimension dim(O-bar_k).
        let top = &layers[1];
        let e1 = &top.diagonal_idempotents[0];
        for (ki, delta) in standards.deltas.iter().enumerate() {
            let act = delta.act_matrix(&top.algebra, e1);
            let vectors: Vec<Vec<Scalar>> = (0..delta.dim)
                .map(|c| act.iter().map(|row| row[c].clone()).collect())
                .collect();
            let dim = Subspace::from_spanning(f(), delta.dim, vectors).dim();
            assert_eq!(dim, standards.diagonal_dims[ki]);
        }
    }

    #[test]
    fn ext_orthogonality_on_a4() {
        let (chain, order) = monomial_chain(15, &[2, 5]);
        let layers = build_layers(&chain, &order).unwrap();
        let standards = standard_modules(&chain, &order, &layers).unwrap();
        let q = &layers[1].algebra;
        let vd = q.vertex_data().unwrap();
        let report = ext_orthogonality(q, &vd, &standards, 2).unwrap();
        assert!(report.passed, "{:?}", report.failures);
    }

    #[test]
    fn cusp_bimodule_is_the_two_dimensional_truncation() {
        let (chain, order) = monomial_chain(9, &[2, 3]);
        let layers = build_layers(&chain, &order).unwrap();
        let w = bimodule_w(&chain, &order, &layers[0]).unwrap();
        assert_eq!(w.dim(), 2);
        assert_eq!(w.layer_dims(), vec![2]);
        assert!(check_w_generator_relations(&w, &layers[0]).unwrap());
    }

    #[test]
    fn a4_bimodule_dimensions_and_relations() {
        // A_4 = A_{2n} with n = 2: layer dims (2n, 2n-2) = (4, 2).
        let (chain, order) = monomial_chain(15, &[2, 5]);
        let layers = build_layers(&chain, &order).unwrap();
        let w = bimodule_w(&chain, &order, &layers[1]).unwrap();
        assert_eq!(w.layer_dims(), vec![4, 2]);
        assert!(check_w_generator_relations(&w, &layers[1]).unwrap());
    }

    #[test]
    fn regular_point_has_zero_bimodule() {
        let ring = LocalRing::new(FractionalIdeal::full(f(), 1, 8)).unwrap();
        let chain = normalization_chain(&ring).unwrap();
        assert_eq!(chain.level, 0);
        // No layers exist; the bimodule is empty by convention.
    }
}
