//! Finite-dimensional left modules over a structure-constant algebra:
//! action matrices, minimal projective resolutions, global dimension, and
//! Ext groups.

use super::{GlobalDimension, StructAlgebra, VertexData};
use crate::error::{KoenigError, Result};
use crate::linalg::{self, Subspace};
use crate::scalar::Scalar;

/// A left module given by one action matrix per algebra basis element
/// (`action[k]` is `dim x dim`, columns = images of module basis vectors).
#[derive(Clone)]
pub struct AlgModule {
    pub dim: usize,
    pub action: Vec<Vec<Vec<Scalar>>>,
}

impl std::fmt::Debug for AlgModule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "AlgModule(dim {})", self.dim)
    }
}

impl AlgModule {
    pub fn new(alg: &StructAlgebra, action: Vec<Vec<Vec<Scalar>>>) -> Result<AlgModule> {
        assert_eq!(action.len(), alg.dim);
        let dim = action.first().map(|m| m.len()).unwrap_or(0);
        let module = AlgModule { dim, action };
        module.verify(alg)?;
        Ok(module)
    }

    pub fn zero_module(alg: &StructAlgebra) -> AlgModule {
        AlgModule { dim: 0, action: vec![Vec::new(); alg.dim] }
    }

    /// The regular module: the algebra acting on itself on the left.
    pub fn regular(alg: &StructAlgebra) -> AlgModule {
        let action = (0..alg.dim)
            .map(|k| {
                let mut x = vec![alg.field.zero(); alg.dim];
                x[k] = alg.field.one();
                alg.left_mult_matrix(&x)
            })
            .collect();
        AlgModule { dim: alg.dim, action }
    }

    /// The one-dimensional simple at the given vertex.
    pub fn simple(alg: &StructAlgebra, vd: &VertexData, vertex: usize) -> Result<AlgModule> {
        let e = &vd.idempotents[vertex].1;
        let rad = &vd.radical;
        let e_red = linalg::reduce(e, &rad.rows, &rad.pivots);
        let pivot = e_red
            .iter()
            .position(|x| !x.is_zero())
            .ok_or_else(|| KoenigError::Consistency("idempotent lies in the radical".into()))?;
        let inv = e_red[pivot].inv().unwrap();
        let mut action = Vec::with_capacity(alg.dim);
        for k in 0..alg.dim {
            let mut b = vec![alg.field.zero(); alg.dim];
            b[k] = alg.field.one();
            let ebe = alg.mul_vec(e, &alg.mul_vec(&b, e));
            let red = linalg::reduce(&ebe, &rad.rows, &rad.pivots);
            let lambda = red[pivot].mul(&inv);
            action.push(vec![vec![lambda]]);
        }
        Ok(AlgModule { dim: 1, action })
    }

    fn verify(&self, alg: &StructAlgebra) -> Result<()> {
        if self.dim == 0 {
            return Ok(());
        }
        // Unit acts as the identity.
        let unit_action = self.act_matrix(alg, &alg.unit);
        for (i, row) in unit_action.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                let expected = if i == j { alg.field.one() } else { alg.field.zero() };
                if *x != expected {
                    return Err(KoenigError::Consistency("module unit law fails".into()));
                }
            }
        }
        // Action respects structure constants (sampled for large inputs).
        let full = alg.dim * alg.dim * self.dim <= 200_000;
        let pairs: Vec<(usize, usize)> = if full {
            (0..alg.dim).flat_map(|i| (0..alg.dim).map(move |j| (i, j))).collect()
        } else {
            let mut state = 0xdeadbeefcafef00du64;
            (0..4 * alg.dim)
                .map(|_| {
                    state = state
                        .wrapping_mul(6364136223846793005)
                        .wrapping_add(1442695040888963407);
                    ((state >> 33) as usize % alg.dim, state as usize % alg.dim)
                })
                .collect()
        };
        for (i, j) in pairs {
            let composed = mat_mul(&self.action[i], &self.action[j], alg);
            let mut expected = vec![vec![alg.field.zero(); self.dim]; self.dim];
            for (k, c) in alg.product_entry(i, j) {
                for r in 0..self.dim {
                    for s in 0..self.dim {
                        expected[r][s] = expected[r][s].add(&c.mul(&self.action[*k][r][s]));
                    }
                }
            }
            if composed != expected {
                return Err(KoenigError::Consistency(format!(
                    "module action does not respect the product of basis elements {i} and {j}"
                )));
            }
        }
        Ok(())
    }

    /// Matrix of the action of a dense algebra element.
    pub fn act_matrix(&self, alg: &StructAlgebra, x: &[Scalar]) -> Vec<Vec<Scalar>> {
        let mut m = vec![vec![alg.field.zero(); self.dim]; self.dim];
        for (k, xk) in x.iter().enumerate() {
            if xk.is_zero() {
                continue;
            }
            for r in 0..self.dim {
                for c in 0..self.dim {
                    m[r][c] = m[r][c].add(&xk.mul(&self.action[k][r][c]));
                }
            }
        }
        m
    }

    pub fn apply(&self, alg: &StructAlgebra, x: &[Scalar], v: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![alg.field.zero(); self.dim];
        for (k, xk) in x.iter().enumerate() {
            if xk.is_zero() {
                continue;
            }
            for r in 0..self.dim {
                let mut acc = alg.field.zero();
                for c in 0..self.dim {
                    if !v[c].is_zero() {
                        acc = acc.add(&self.action[k][r][c].mul(&v[c]));
                    }
                }
                out[r] = out[r].add(&xk.mul(&acc));
            }
        }
        out
    }
}

fn mat_mul(a: &[Vec<Scalar>], b: &[Vec<Scalar>], alg: &StructAlgebra) -> Vec<Vec<Scalar>> {
    let n = a.len();
    let mut out = vec![vec![alg.field.zero(); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                if !b[k][j].is_zero() {
                    out[i][j] = out[i][j].add(&a[i][k].mul(&b[k][j]));
                }
            }
        }
    }
    out
}

/// A minimal projective resolution `... -> P_1 -> P_0 -> M -> 0`, recorded
/// through the summand vertices of each `P_t` and the differential
/// components as algebra elements.
#[derive(Clone, Debug)]
pub struct Resolution {
    /// `verts[t]`: vertices of the indecomposable summands of `P_t`.
    pub verts: Vec<Vec<usize>>,
    /// `diffs[t][v][u]`: for `t >= 1`, the algebra element carrying
    /// generator `v` of `P_t` into summand `u` of `P_{t-1}`.
    pub diffs: Vec<Vec<Vec<Vec<Scalar>>>>,
    /// True when the final kernel is zero (resolution finished).
    pub complete: bool,
}

impl Resolution {
    /// Projective dimension when the resolution finished within the cutoff.
    pub fn projective_dimension(&self) -> Option<usize> {
        if !self.complete {
            return None;
        }
        Some(self.verts.len().saturating_sub(1))
    }
}

/// Internal: a submodule of a free module `⊕_u A e_{verts[u]}` held in
/// concatenated algebra coordinates.
struct FreeSubmodule {
    verts: Vec<usize>,
    space: Subspace,
}

/// Computes a minimal projective resolution of `m`, stopping after the
/// kernel becomes zero or `max_steps` syzygies have been taken.
pub fn resolve(
    alg: &StructAlgebra,
    vd: &VertexData,
    m: &AlgModule,
    max_steps: usize,
) -> Result<Resolution> {
    if m.dim == 0 {
        return Ok(Resolution { verts: Vec::new(), diffs: Vec::new(), complete: true });
    }
    let field = alg.field;
    // Bases of the projective summands A e_j.
    let proj_basis: Vec<Subspace> = vd
        .idempotents
        .iter()
        .map(|(_, e)| {
            let vectors = (0..alg.dim)
                .map(|k| {
                    let mut b = vec![field.zero(); alg.dim];
                    b[k] = field.one();
                    alg.mul_vec(&b, e)
                })
                .collect();
            Subspace::from_spanning(field, alg.dim, vectors)
        })
        .collect();

    // Step 0: generators of M by vertex.
    let rad_m = {
        let mut vectors = Vec::new();
        for rho in &vd.radical.rows {
            let act = m.act_matrix(alg, rho);
            for c in 0..m.dim {
                vectors.push(act.iter().map(|row| row[c].clone()).collect());
            }
        }
        Subspace::from_spanning(field, m.dim, vectors)
    };
    let mut gens: Vec<(usize, Vec<Scalar>)> = Vec::new();
    {
        let mut covered = rad_m.clone();
        for (j, (_, e)) in vd.idempotents.iter().enumerate() {
            let act = m.act_matrix(alg, e);
            for c in 0..m.dim {
                let v: Vec<Scalar> = act.iter().map(|row| row[c].clone()).collect();
                if !covered.contains(&v) {
                    covered = covered.sum(&Subspace::from_spanning(field, m.dim, vec![v.clone()]));
                    gens.push((j, v));
                }
            }
        }
    }
    let verts0: Vec<usize> = gens.iter().map(|(j, _)| *j).collect();
    let mut verts = vec![verts0.clone()];
    let mut diffs: Vec<Vec<Vec<Vec<Scalar>>>> = Vec::new();

    // Kernel of P_0 -> M.
    let mut columns: Vec<Vec<Scalar>> = Vec::new();
    let mut column_vectors: Vec<Vec<Scalar>> = Vec::new(); // concatenated algebra coords
    for (u, (j, mv)) in gens.iter().enumerate() {
        for a in &proj_basis[*j].rows {
            columns.push(m.apply(alg, a, mv));
            let mut vec = vec![field.zero(); alg.dim * gens.len()];
            vec[u * alg.dim..(u + 1) * alg.dim].clone_from_slice(a);
            column_vectors.push(vec);
        }
    }
    let mut kernel = kernel_of_columns(field, &columns, &column_vectors, alg.dim * gens.len());
    let mut current = FreeSubmodule { verts: verts0, space: kernel };

    let mut step = 0usize;
    loop {
        if current.space.dim() == 0 {
            return Ok(Resolution { verts, diffs, complete: true });
        }
        if step >= max_steps {
            return Ok(Resolution { verts, diffs, complete: false });
        }
        step += 1;
        // Generators of the kernel by vertex, minimal modulo rad * kernel.
        let ncols = current.space.ncols;
        let rad_k = {
            let mut vectors = Vec::new();
            for rho in &vd.radical.rows {
                for x in &current.space.rows {
                    vectors.push(componentwise_mult(alg, rho, x, &current.verts));
                }
            }
            Subspace::from_spanning(field, ncols, vectors)
        };
        let mut kgens: Vec<(usize, Vec<Scalar>)> = Vec::new();
        let mut covered = rad_k.clone();
        for (j, (_, e)) in vd.idempotents.iter().enumerate() {
            for x in &current.space.rows {
                let v = componentwise_mult(alg, e, x, &current.verts);
                if !covered.contains(&v) {
                    covered = covered.sum(&Subspace::from_spanning(field, ncols, vec![v.clone()]));
                    kgens.push((j, v));
                }
            }
        }
        let new_verts: Vec<usize> = kgens.iter().map(|(j, _)| *j).collect();
        // Differential components: generator v's component in summand u.
        let old_count = current.verts.len();
        let diff: Vec<Vec<Vec<Scalar>>> = kgens
            .iter()
            .map(|(_, g)| {
                (0..old_count)
                    .map(|u| g[u * alg.dim..(u + 1) * alg.dim].to_vec())
                    .collect()
            })
            .collect();
        verts.push(new_verts.clone());
        diffs.push(diff);

        // Kernel of P_step -> P_{step-1}.
        let mut columns: Vec<Vec<Scalar>> = Vec::new();
        let mut column_vectors: Vec<Vec<Scalar>> = Vec::new();
        for (v, (j, g)) in kgens.iter().enumerate() {
            for a in &proj_basis[*j].rows {
                columns.push(componentwise_mult(alg, a, g, &current.verts));
                let mut vec = vec![field.zero(); alg.dim * kgens.len()];
                vec[v * alg.dim..(v + 1) * alg.dim].clone_from_slice(a);
                column_vectors.push(vec);
            }
        }
        kernel = kernel_of_columns(field, &columns, &column_vectors, alg.dim * kgens.len());
        current = FreeSubmodule { verts: new_verts, space: kernel };
    }
}

/// Left multiplication of a concatenated free-module vector by an algebra
/// element, componentwise.
fn componentwise_mult(
    alg: &StructAlgebra,
    x: &[Scalar],
    vec: &[Scalar],
    verts: &[usize],
) -> Vec<Scalar> {
    let mut out = vec![alg.field.zero(); vec.len()];
    for u in 0..verts.len() {
        let comp = &vec[u * alg.dim..(u + 1) * alg.dim];
        if comp.iter().all(|c| c.is_zero()) {
            continue;
        }
        let prod = alg.mul_vec(x, comp);
        out[u * alg.dim..(u + 1) * alg.dim].clone_from_slice(&prod);
    }
    out
}

/// Kernel of the map sending the i-th domain basis vector to `columns[i]`,
/// expressed back in the given concatenated coordinates of the domain.
fn kernel_of_columns(
    field: crate::scalar::Field,
    columns: &[Vec<Scalar>],
    column_vectors: &[Vec<Scalar>],
    ncols_out: usize,
) -> Subspace {
    if columns.is_empty() {
        return Subspace::zero(field, ncols_out);
    }
    let target_dim = columns[0].len();
    let mut equations = Vec::with_capacity(target_dim);
    for c in 0..target_dim {
        let eq: Vec<Scalar> = columns.iter().map(|col| col[c].clone()).collect();
        equations.push(eq);
    }
    let combos = linalg::kernel(field, &equations, columns.len());
    let vectors = combos
        .iter()
        .map(|combo| {
            let mut v = vec![field.zero(); ncols_out];
            for (ci, coeff) in combo.iter().enumerate() {
                if coeff.is_zero() {
                    continue;
                }
                for (x, y) in v.iter_mut().zip(column_vectors[ci].iter()) {
                    *x = x.add(&coeff.mul(y));
                }
            }
            v
        })
        .collect();
    Subspace::from_spanning(field, ncols_out, vectors)
}

/// Projective dimension of a module, or `None` past the cutoff.
pub fn projective_dimension(
    alg: &StructAlgebra,
    vd: &VertexData,
    m: &AlgModule,
    cutoff: usize,
) -> Result<Option<usize>> {
    let res = resolve(alg, vd, m, cutoff + 1)?;
    Ok(res.projective_dimension())
}

/// Global dimension: the maximum projective dimension of the simples,
/// stopping at the cutoff (returned as a marker, never an error).
pub fn global_dimension(
    alg: &StructAlgebra,
    vd: &VertexData,
    cutoff: usize,
) -> Result<GlobalDimension> {
    let mut best = 0usize;
    for v in 0..vd.count() {
        let s = AlgModule::simple(alg, vd, v)?;
        match projective_dimension(alg, vd, &s, cutoff)? {
            Some(d) => best = best.max(d),
            None => return Ok(GlobalDimension::ExceededCutoff(cutoff)),
        }
    }
    Ok(GlobalDimension::Finite(best))
}

/// Dimension of `Ext^p(M, N)` from a minimal projective resolution of `M`
/// and the induced Hom complex.
pub fn ext_dim(
    alg: &StructAlgebra,
    vd: &VertexData,
    m: &AlgModule,
    n: &AlgModule,
    p: usize,
) -> Result<usize> {
    if m.dim == 0 || n.dim == 0 {
        return Ok(0);
    }
    let res = resolve(alg, vd, m, p + 1)?;
    let steps = res.verts.len();
    if p >= steps {
        // Resolution finished before degree p.
        return Ok(0);
    }
    let field = alg.field;
    // Basis of e_j N for each vertex.
    let corner_bases: Vec<Subspace> = vd
        .idempotents
        .iter()
        .map(|(_, e)| {
            let act = n.act_matrix(alg, e);
            let vectors = (0..n.dim)
                .map(|c| act.iter().map(|row| row[c].clone()).collect())
                .collect();
            Subspace::from_spanning(field, n.dim, vectors)
        })
        .collect();
    let hom_dim = |t: usize| -> usize {
        if t >= steps {
            0
        } else {
            res.verts[t].iter().map(|&j| corner_bases[j].dim()).sum()
        }
    };
    // Matrix of delta^t : Hom(P_{t-1}, N) -> Hom(P_t, N) in corner bases.
    let delta = |t: usize| -> Vec<Vec<Scalar>> {
        // rows: coordinates of the image in ⊕_v e_{j_v} N, columns: domain basis.
        let dom = hom_dim(t - 1);
        let cod = hom_dim(t);
        if dom == 0 || cod == 0 {
            return Vec::new();
        }
        let diff = &res.diffs[t - 1];
        let mut cols: Vec<Vec<Scalar>> = Vec::with_capacity(dom);
        for (u, &i_u) in res.verts[t - 1].iter().enumerate() {
            for f_u in &corner_bases[i_u].rows {
                // The hom sending generator u to f_u, all others to zero.
                let mut image_coords: Vec<Scalar> = Vec::with_capacity(cod);
                for (v, &j_v) in res.verts[t].iter().enumerate() {
                    let x = &diff[v][u];
                    let val = n.apply(alg, x, f_u);
                    let coords = linalg::coordinates(
                        &val,
                        &corner_bases[j_v].rows,
                        &corner_bases[j_v].pivots,
                    )
                    .expect("differential image lands in the corner");
                    image_coords.extend(coords);
                }
                cols.push(image_coords);
            }
        }
        cols
    };
    let rank_of = |cols: Vec<Vec<Scalar>>| -> usize {
        let mut rows = cols;
        linalg::echelonize(&mut rows);
        rows.len()
    };
    let dim_cp = hom_dim(p);
    let rank_next = if p + 1 <= steps.saturating_sub(0) && hom_dim(p + 1) > 0 && dim_cp > 0 {
        rank_of(delta(p + 1))
    } else {
        0
    };
    let rank_prev = if p >= 1 && dim_cp > 0 && hom_dim(p - 1) > 0 {
        rank_of(delta(p))
    } else {
        0
    };
    Ok(dim_cp - rank_next - rank_prev)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::findim::presentation::{presented_algebra, QuiverPresentation};
    use crate::scalar::Field;

    fn kronecker() -> StructAlgebra {
        let pres = QuiverPresentation {
            vertices: vec!["1".into(), "2".into()],
            arrows: vec![("a".into(), 0, 1), ("b".into(), 0, 1)],
            relations: Vec::new(),
        };
        presented_algebra(Field::Rational, &pres, 4).unwrap()
    }

    #[test]
    fn kronecker_projectives_and_simples() {
        let a = kronecker();
        let vd = a.vertex_data().unwrap();
        assert_eq!(vd.count(), 2);
        // dim P_1 = 3 (e1, a, b), dim P_2 = 1.
        let c = a.cartan_matrix(&vd);
        assert_eq!(c[0][0] + c[0][1], 3);
        assert_eq!(c[1][0] + c[1][1], 1);
        let gl = global_dimension(&a, &vd, 8).unwrap();
        assert_eq!(gl, GlobalDimension::Finite(1));
    }

    #[test]
    fn semisimple_global_dimension_zero() {
        let pres = QuiverPresentation {
            vertices: vec!["1".into(), "2".into(), "3".into()],
            arrows: vec![],
            relations: vec![],
        };
        let a = presented_algebra(Field::Rational, &pres, 2).unwrap();
        let vd = a.vertex_data().unwrap();
        let gl = global_dimension(&a, &vd, 4).unwrap();
        assert_eq!(gl, GlobalDimension::Finite(0));
    }

    #[test]
    fn ext_of_simples_counts_arrows() {
        let a = kronecker();
        let vd = a.vertex_data().unwrap();
        let s1 = AlgModule::simple(&a, &vd, 0).unwrap();
        let s2 = AlgModule::simple(&a, &vd, 1).unwrap();
        assert_eq!(ext_dim(&a, &vd, &s1, &s1, 0).unwrap(), 1);
        assert_eq!(ext_dim(&a, &vd, &s2, &s2, 0).unwrap(), 1);
        assert_eq!(ext_dim(&a, &vd, &s1, &s2, 0).unwrap(), 0);
        // Two arrows 1 -> 2.
        assert_eq!(ext_dim(&a, &vd, &s1, &s2, 1).unwrap(), 2);
        assert_eq!(ext_dim(&a, &vd, &s2, &s1, 1).unwrap(), 0);
    }

    #[test]
    fn regular_module_is_projective() {
        let a = kronecker();
        let vd = a.vertex_data().unwrap();
        let reg = AlgModule::regular(&a);
        assert_eq!(projective_dimension(&a, &vd, &reg, 4).unwrap(), Some(0));
    }
}
