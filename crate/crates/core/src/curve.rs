//! Rational projective curve configurations and their tilting algebra: the
//! triangular algebra with the point-local quasi-hereditary algebras in one
//! corner, one Kronecker algebra per projective-line component in the other,
//! and the Ext^1 bimodule between them.

use crate::error::{KoenigError, Result};
use crate::findim::modules::global_dimension;
use crate::findim::{GlobalDimension, SparseVec, StructAlgebra};
use crate::pipeline::{int_det, AttachmentSpec, LambdaParam, PointAnalysis};
use crate::scalar::{Field, Scalar};

/// Exact placement of one branch on a component.
#[derive(Clone, Debug, PartialEq)]
pub enum LambdaValue {
    Finite(Scalar),
    Infinity,
}

impl LambdaValue {
    pub fn from_param(field: Field, param: &LambdaParam) -> Result<LambdaValue> {
        match param {
            LambdaParam::Infinity => Ok(LambdaValue::Infinity),
            LambdaParam::Finite(num, den) => Ok(LambdaValue::Finite(
                field
                    .from_fraction(*num, *den)
                    .map_err(|e| KoenigError::Input(e.to_string()))?,
            )),
        }
    }
}

/// One singular point with the component/parameter assignment of each of
/// its branches.
pub struct ConfiguredPoint {
    pub analysis: PointAnalysis,
    /// Per branch (0-based): (0-based component index, parameter).
    pub attachments: Vec<(usize, LambdaValue)>,
}

/// A configuration of projective lines with singular points.
pub struct CurveConfig {
    pub components: usize,
    pub points: Vec<ConfiguredPoint>,
}

impl CurveConfig {
    /// Assembles a configuration from analyzed points and raw attachments.
    pub fn new(
        components: usize,
        points: Vec<PointAnalysis>,
        attachments: &[AttachmentSpec],
    ) -> Result<CurveConfig> {
        let mut configured = Vec::with_capacity(points.len());
        for analysis in points {
            let field = analysis.field;
            let mut atts: Vec<Option<(usize, LambdaValue)>> = vec![None; analysis.branches];
            for att in attachments.iter().filter(|a| a.point == analysis.name) {
                let lambda = LambdaValue::from_param(field, &att.lambda)?;
                atts[att.branch - 1] = Some((att.component - 1, lambda));
            }
            let attachments: Option<Vec<_>> = atts.into_iter().collect();
            let attachments = attachments.ok_or_else(|| {
                KoenigError::Input(format!("point {} has unattached branches", analysis.name))
            })?;
            configured.push(ConfiguredPoint { analysis, attachments });
        }
        Ok(CurveConfig { components, points: configured })
    }

    pub fn global_level(&self) -> usize {
        self.points.iter().map(|p| p.analysis.chain.level).max().unwrap_or(0)
    }
}

/// The assembled tilting algebra with its invariants.
pub struct LambdaAnalysis {
    pub algebra: StructAlgebra,
    pub vertex_labels: Vec<String>,
    pub quiver: Vec<Vec<usize>>,
    pub cartan: Vec<Vec<i64>>,
    pub cartan_det: i64,
    pub gl_dim: GlobalDimension,
    pub gl_dim_q: usize,
    pub gl_bound_ok: bool,
    pub global_level: usize,
    pub dim_q: usize,
    pub dim_w: usize,
}

impl std::fmt::Debug for LambdaAnalysis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "LambdaAnalysis(dim {}, gl_dim {:?})", self.algebra.dim, self.gl_dim)
    }
}

/// Index bookkeeping for the triangular basis: the local algebras, one
/// Kronecker block per component, and two copies of each local bimodule.
struct LambdaLayout {
    q_offset: Vec<usize>,
    q_dim: Vec<usize>,
    e_offset: usize,
    /// Per point, per column (0: attached to the degree-zero vertex,
    /// 1: attached to the twisted vertex).
    w_offset: Vec<[usize; 2]>,
    w_dim: Vec<usize>,
    dim: usize,
}

const E_BLOCK: usize = 4; // e_{-1}, e_0, z0, zinf per component

fn e_idx(layout: &LambdaLayout, comp: usize, slot: usize) -> usize {
    layout.e_offset + E_BLOCK * comp + slot
}

/// Builds the triangular algebra of a configuration and computes its
/// quiver, Cartan matrix, and global dimension.
pub fn build_lambda(config: &CurveConfig) -> Result<LambdaAnalysis> {
    let field = config
        .points
        .first()
        .map(|p| p.analysis.field)
        .unwrap_or(Field::Rational);
    let t = config.components;
    assert!(t >= 1, "validated configurations have at least one component");

    let mut q_offset = Vec::new();
    let mut q_dim = Vec::new();
    let mut at = 0usize;
    for p in &config.points {
        q_offset.push(at);
        let d = p.analysis.layers.last().map(|l| l.algebra.dim).unwrap_or(0);
        q_dim.push(d);
        at += d;
    }
    let e_offset = at;
    at += E_BLOCK * t;
    let mut w_offset = Vec::new();
    let mut w_dim = Vec::new();
    for p in &config.points {
        let d = p.analysis.bimodule.as_ref().map(|w| w.dim()).unwrap_or(0);
        w_offset.push([at, at + d]);
        w_dim.push(d);
        at += 2 * d;
    }
    let layout = LambdaLayout { q_offset, q_dim, e_offset, w_offset, w_dim, dim: at };
    let dim = layout.dim;

    let mut table = vec![vec![SparseVec::new(); dim]; dim];
    let mut labels = vec![String::new(); dim];
    let mut unit = vec![field.zero(); dim];

    // Q blocks.
    for (pi, p) in config.points.iter().enumerate() {
        let Some(top) = p.analysis.layers.last() else { continue };
        let off = layout.q_offset[pi];
        let alg = &top.algebra;
        for i in 0..alg.dim {
            labels[off + i] = format!("{}:{}", p.analysis.name, alg.labels[i]);
            for j in 0..alg.dim {
                table[off + i][off + j] = alg
                    .product_entry(i, j)
                    .iter()
                    .map(|(k, c)| (off + k, c.clone()))
                    .collect();
            }
        }
        for (i, c) in alg.unit.iter().enumerate() {
            unit[off + i] = c.clone();
        }
    }

    // Kronecker blocks: e_{-1}, e_0 idempotents, arrows z0, zinf from the
    // twisted vertex to the degree-zero vertex.
    for comp in 0..t {
        let em1 = e_idx(&layout, comp, 0);
        let e0 = e_idx(&layout, comp, 1);
        let z0 = e_idx(&layout, comp, 2);
        let zinf = e_idx(&layout, comp, 3);
        labels[em1] = format!("c{}:e-1", comp + 1);
        labels[e0] = format!("c{}:e0", comp + 1);
        labels[z0] = format!("c{}:z0", comp + 1);
        labels[zinf] = format!("c{}:zinf", comp + 1);
        unit[em1] = field.one();
        unit[e0] = field.one();
        table[em1][em1] = vec![(em1, field.one())];
        table[e0][e0] = vec![(e0, field.one())];
        // z = e0 z e-1: apply e-1 first.
        for z in [z0, zinf] {
            table[e0][z] = vec![(z, field.one())];
            table[z][em1] = vec![(z, field.one())];
        }
    }

    // W blocks: left Q-action within a column, right Kronecker action from
    // column 0 to column 1.
    for (pi, p) in config.points.iter().enumerate() {
        let Some(w) = p.analysis.bimodule.as_ref() else { continue };
        let qoff = layout.q_offset[pi];
        let wd = layout.w_dim[pi];
        // Left action: q * w.
        for qi in 0..layout.q_dim[pi] {
            let mat = &w.left_action[qi];
            for col in 0..2 {
                let woff = layout.w_offset[pi][col];
                for src in 0..wd {
                    let mut entry = SparseVec::new();
                    for dst in 0..wd {
                        if !mat[dst][src].is_zero() {
                            entry.push((woff + dst, mat[dst][src].clone()));
                        }
                    }
                    table[qoff + qi][woff + src] = entry;
                }
            }
        }
        // Column idempotent actions: w * e0 and w * e-1 restricted to the
        // branches attached to that component.
        let w0 = layout.w_offset[pi][0];
        let w1 = layout.w_offset[pi][1];
        for (widx, welem) in w.basis.iter().enumerate() {
            let (comp, lambda) = &p.attachments[welem.branch];
            let e0 = e_idx(&layout, *comp, 1);
            let em1 = e_idx(&layout, *comp, 0);
            table[w0 + widx][e0] = vec![(w0 + widx, field.one())];
            table[w1 + widx][em1] = vec![(w1 + widx, field.one())];
            // Right arrow action on the column-0 copy: z maps into column 1.
            let z0 = e_idx(&layout, *comp, 2);
            let zinf = e_idx(&layout, *comp, 3);
            let mut z0_entry = SparseVec::new();
            let mut zinf_entry = SparseVec::new();
            match lambda {
                LambdaValue::Finite(lam) => {
                    // z0 acts as lambda + t, zinf as 1.
                    if !lam.is_zero() {
                        z0_entry.push((w1 + widx, lam.clone()));
                    }
                    if welem.exp >= 2 {
                        let down = w
                            .index_of(welem.layer, welem.branch, welem.exp - 1)
                            .expect("shallower class exists");
                        z0_entry.push((w1 + down, field.one()));
                    }
                    zinf_entry.push((w1 + widx, field.one()));
                }
                LambdaValue::Infinity => {
                    // Roles swapped: z0 acts as 1, zinf as t.
                    z0_entry.push((w1 + widx, field.one()));
                    if welem.exp >= 2 {
                        let down = w
                            .index_of(welem.layer, welem.branch, welem.exp - 1)
                            .expect("shallower class exists");
                        zinf_entry.push((w1 + down, field.one()));
                    }
                }
            }
            z0_entry.sort_by_key(|(i, _)| *i);
            table[w0 + widx][z0] = z0_entry;
            table[w0 + widx][zinf] = zinf_entry;
        }
        for (widx, welem) in w.basis.iter().enumerate() {
            labels[w0 + widx] = format!(
                "{}:w{}b{}e{}:0",
                p.analysis.name,
                welem.layer + 1,
                welem.branch + 1,
                welem.exp
            );
            labels[w1 + widx] = format!(
                "{}:w{}b{}e{}:-1",
                p.analysis.name,
                welem.layer + 1,
                welem.branch + 1,
                welem.exp
            );
        }
    }

    // Distinguished idempotents: local vertices then component vertices.
    let mut idempotents: Vec<(String, Vec<Scalar>)> = Vec::new();
    for (pi, p) in config.points.iter().enumerate() {
        let Some(vd) = p.analysis.vertex_data.as_ref() else { continue };
        let off = layout.q_offset[pi];
        for (label, e) in &vd.idempotents {
            let mut v = vec![field.zero(); dim];
            for (i, c) in e.iter().enumerate() {
                v[off + i] = c.clone();
            }
            idempotents.push((format!("{}:{}", p.analysis.name, label), v));
        }
    }
    for comp in 0..t {
        for (slot, tag) in [(0usize, "-1"), (1, "0")] {
            let mut v = vec![field.zero(); dim];
            v[e_idx(&layout, comp, slot)] = field.one();
            idempotents.push((format!("c{}:{}", comp + 1, tag), v));
        }
    }

    let algebra = StructAlgebra::new(field, labels, table, unit, Some(idempotents))?;
    let vd = algebra.vertex_data()?;
    let quiver = algebra.quiver_arrows(&vd);
    let cartan = algebra.cartan_matrix(&vd);
    let cartan_det = int_det(&cartan);
    let gl_q = config
        .points
        .iter()
        .filter_map(|p| p.analysis.gl_dim.as_finite())
        .max()
        .unwrap_or(0);
    let gl = global_dimension(&algebra, &vd, gl_q + 3)?;
    let bound_ok = matches!(gl, GlobalDimension::Finite(d) if d <= gl_q + 2);
    let dim_w = 2 * layout.w_dim.iter().sum::<usize>();
    let dim_q: usize = layout.q_dim.iter().sum();
    Ok(LambdaAnalysis {
        vertex_labels: vd.idempotents.iter().map(|(l, _)| l.clone()).collect(),
        algebra,
        quiver,
        cartan,
        cartan_det,
        gl_dim: gl,
        gl_dim_q: gl_q,
        gl_bound_ok: bound_ok,
        global_level: config.global_level(),
        dim_q,
        dim_w,
    })
}

/// Verifies the displayed relations of the tilting algebra for a unibranch
/// point of even A-type at a finite parameter: with `g1` the deepest class
/// and `g2 = g1 t`, checks `g1 z0 = g2 zinf` and `g2 z0 = (loop) g1 zinf`
/// (zero for level one).
pub fn check_cuspidal_relations(
    config: &CurveConfig,
    lambda: &LambdaAnalysis,
    point_index: usize,
) -> Result<bool> {
    let p = &config.points[point_index];
    let w = p.analysis.bimodule.as_ref().ok_or_else(|| {
        KoenigError::Domain("relation check needs a singular point".into())
    })?;
    if p.analysis.branches != 1 {
        return Err(KoenigError::Domain("relation check is for unibranch points".into()));
    }
    let field = lambda.algebra.field;
    let alg = &lambda.algebra;
    let dim = alg.dim;
    let c1 = w.conductor_exponents[0][0];
    // Locate the basis slots through the labels assembled by build_lambda.
    let name = &p.analysis.name;
    let slot = |label: String| -> usize {
        alg.labels.iter().position(|l| *l == label).expect("known label")
    };
    let g1 = slot(format!("{name}:w1b1e{c1}:0"));
    let g2 = slot(format!("{name}:w1b1e{}:0", c1 - 1));
    let comp = p.attachments[0].0;
    let z0 = slot(format!("c{}:z0", comp + 1));
    let zinf = slot(format!("c{}:zinf", comp + 1));
    let e = |i: usize| -> Vec<Scalar> {
        let mut v = vec![field.zero(); dim];
        v[i] = field.one();
        v
    };
    // The displayed relations assume the branch point at coordinates (0:1);
    // for a general finite parameter the local coordinate is z0 - lambda
    // zinf. At lambda = 0 this is the verbatim display.
    let local_z0 = match &p.attachments[0].1 {
        LambdaValue::Finite(lam) => {
            let mut v = e(z0);
            if !lam.is_zero() {
                for (x, y) in v.iter_mut().zip(e(zinf).iter()) {
                    *x = x.sub(&lam.mul(y));
                }
            }
            v
        }
        LambdaValue::Infinity => e(zinf),
    };
    let local_zinf = match &p.attachments[0].1 {
        LambdaValue::Finite(_) => e(zinf),
        LambdaValue::Infinity => e(z0),
    };
    // gamma_1 z0 = gamma_2 zinf.
    let lhs = alg.mul_vec(&e(g1), &local_z0);
    let rhs = alg.mul_vec(&e(g2), &local_zinf);
    if lhs != rhs {
        return Ok(false);
    }
    // gamma_2 z0 = loop * gamma_1 zinf (zero at level one).
    let lhs2 = alg.mul_vec(&e(g2), &local_z0);
    if p.analysis.chain.level == 1 {
        return Ok(lhs2.iter().all(|x| x.is_zero()));
    }
    let top = p.analysis.layers.last().unwrap();
    let alpha = top
        .basis_info
        .iter()
        .enumerate()
        .filter(|(_, el)| el.row == 0 && el.col == 1)
        .min_by_key(|(_, el)| el.rep.valuations()[0].unwrap_or(usize::MAX))
        .map(|(i, _)| i)
        .unwrap();
    let beta = top
        .basis_info
        .iter()
        .enumerate()
        .filter(|(_, el)| el.row == 1 && el.col == 0)
        .min_by_key(|(_, el)| el.rep.valuations()[0].unwrap_or(usize::MAX))
        .map(|(i, _)| i)
        .unwrap();
    let qoff = alg
        .labels
        .iter()
        .position(|l| l.starts_with(&format!("{name}:q")))
        .expect("point block present");
    let loop_vec = alg.mul_vec(&e(qoff + alpha), &e(qoff + beta));
    let rhs2 = alg.mul_vec(&loop_vec, &alg.mul_vec(&e(g1), &local_zinf));
    Ok(lhs2 == rhs2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pipeline::{analyze_point, PointSpec};

    fn analyze(name: &str, branches: usize, gens: &[Vec<Vec<(usize, i64)>>]) -> PointAnalysis {
        let spec = PointSpec {
            name: name.into(),
            branches,
            generators: gens
                .iter()
                .map(|g| {
                    g.iter()
                        .map(|branch| branch.iter().map(|&(d, c)| (d, c, 1)).collect())
                        .collect()
                })
                .collect(),
        };
        analyze_point(Field::Rational, &spec, None).unwrap()
    }

    fn attach(point: &str, branch: usize, component: usize, lambda: LambdaParam) -> AttachmentSpec {
        AttachmentSpec { point: point.into(), branch, component, lambda }
    }

    #[test]
    fn smooth_line_gives_the_kronecker_algebra() {
        let config = CurveConfig::new(1, Vec::new(), &[]).unwrap();
        let lambda = build_lambda(&config).unwrap();
        assert_eq!(lambda.algebra.dim, 4);
        assert_eq!(lambda.gl_dim, GlobalDimension::Finite(1));
        assert_eq!(lambda.quiver, vec![vec![0, 2], vec![0, 0]]);
        assert_eq!(lambda.cartan_det, 1);
    }

    #[test]
    fn cuspidal_curve_relations_hold() {
        let cusp = analyze("cusp", 1, &[vec![vec![(2, 1)]], vec![vec![(3, 1)]]]);
        let config = CurveConfig::new(
            1,
            vec![cusp],
            &[attach("cusp", 1, 1, LambdaParam::Finite(0, 1))],
        )
        .unwrap();
        let lambda = build_lambda(&config).unwrap();
        // Kronecker + one extra vertex with two arrows from the degree-zero
        // vertex; dim = 1 + 4 + 2*2.
        assert_eq!(lambda.algebra.dim, 9);
        assert!(lambda.gl_bound_ok);
        assert!(check_cuspidal_relations(&config, &lambda, 0).unwrap());
        // Quiver: vertices [cusp:v1, c1:-1, c1:0].
        let v = &lambda.vertex_labels;
        let iv = |s: &str| v.iter().position(|l| l == s).unwrap();
        let q = &lambda.quiver;
        assert_eq!(q[iv("c1:0")][iv("cusp:v1")], 2);
        assert_eq!(q[iv("c1:-1")][iv("c1:0")], 2);
        assert_eq!(q[iv("c1:-1")][iv("cusp:v1")], 0);
    }

    #[test]
    fn a4_curve_at_nonzero_lambda() {
        let a4 = analyze("a4", 1, &[vec![vec![(2, 1)]], vec![vec![(5, 1)]]]);
        let config = CurveConfig::new(
            1,
            vec![a4],
            &[attach("a4", 1, 1, LambdaParam::Finite(1, 1))],
        )
        .unwrap();
        let lambda = build_lambda(&config).unwrap();
        assert!(lambda.gl_bound_ok);
        assert!(check_cuspidal_relations(&config, &lambda, 0).unwrap());
        assert_eq!(lambda.cartan_det, 1);
    }

    #[test]
    fn lambda_at_infinity_swaps_the_coordinates() {
        let cusp = analyze("cusp", 1, &[vec![vec![(2, 1)]], vec![vec![(3, 1)]]]);
        let config = CurveConfig::new(
            1,
            vec![cusp],
            &[attach("cusp", 1, 1, LambdaParam::Infinity)],
        )
        .unwrap();
        let lambda = build_lambda(&config).unwrap();
        // Same invariants, roles of z0 and zinf exchanged.
        assert_eq!(lambda.algebra.dim, 9);
        assert!(lambda.gl_bound_ok);
        assert_eq!(lambda.cartan_det, 1);
    }
}
