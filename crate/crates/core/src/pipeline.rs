//! End-to-end analysis of one singular point: truncation discovery, ring
//! closure, normalization chain, order, layer algebras, standard modules,
//! and the bimodule, together with every structural verification.

use crate::chain::{
    duality_check, normalization_chain, singular_locus, LocalRing, NormalizationChain,
};
use crate::error::{KoenigError, Result};
use crate::findim::modules::global_dimension;
use crate::findim::{GlobalDimension, VertexData};
use crate::lattice::FractionalIdeal;
use crate::order::{auslander_compare, build_order, hierarchy_check, top_row_projectivity, OrderMatrix};
use crate::qha::{
    bimodule_w, build_layers, ext_orthogonality, standard_modules, BimoduleW, QLayer,
    StandardModules,
};
use crate::scalar::Field;
use crate::series::SeriesVec;

/// Exact-fraction polynomial data for one generator: per branch, a list of
/// (exponent, numerator, denominator) terms.
pub type GeneratorSpec = Vec<Vec<(usize, i64, i64)>>;

/// One singular point of the input.
#[derive(Clone, Debug, PartialEq)]
pub struct PointSpec {
    pub name: String,
    pub branches: usize,
    pub generators: Vec<GeneratorSpec>,
}

/// Placement parameter of a branch on a projective line component.
#[derive(Clone, Debug, PartialEq)]
pub enum LambdaParam {
    Finite(i64, i64),
    Infinity,
}

/// Attachment of one branch of one point to a component.
#[derive(Clone, Debug, PartialEq)]
pub struct AttachmentSpec {
    pub point: String,
    /// 1-based branch index within the point.
    pub branch: usize,
    /// 1-based component index.
    pub component: usize,
    pub lambda: LambdaParam,
}

/// Global configuration section for the tilting-algebra assembly.
#[derive(Clone, Debug, PartialEq)]
pub struct GlobalSpec {
    pub components: usize,
    pub attachments: Vec<AttachmentSpec>,
}

/// A full validated input: field, optional truncation override, points, and
/// the optional curve configuration.
#[derive(Clone, Debug, PartialEq)]
pub struct InputSpec {
    pub field: Field,
    pub truncation: Option<usize>,
    pub points: Vec<PointSpec>,
    pub global: Option<GlobalSpec>,
}

impl InputSpec {
    /// Structural validation: exact coefficients, known point references,
    /// complete attachments, distinct parameters per component.
    pub fn validate(&self) -> Result<()> {
        for p in &self.points {
            if p.branches == 0 {
                return Err(KoenigError::Input(format!("point {} has no branches", p.name)));
            }
            for g in &p.generators {
                if g.len() != p.branches {
                    return Err(KoenigError::Input(format!(
                        "a generator of point {} does not cover every branch",
                        p.name
                    )));
                }
                for branch in g {
                    for &(_, _, den) in branch {
                        if den == 0 {
                            return Err(KoenigError::Input(format!(
                                "zero denominator in a coefficient of point {}",
                                p.name
                            )));
                        }
                    }
                }
            }
        }
        if self.points.iter().map(|p| &p.name).collect::<std::collections::HashSet<_>>().len()
            != self.points.len()
        {
            return Err(KoenigError::Input("duplicate point names".into()));
        }
        if let Some(global) = &self.global {
            if global.components == 0 {
                return Err(KoenigError::Input("configuration needs at least one component".into()));
            }
            let mut seen: Vec<(usize, &LambdaParam)> = Vec::new();
            for att in &global.attachments {
                let Some(point) = self.points.iter().find(|p| p.name == att.point) else {
                    return Err(KoenigError::Input(format!(
                        "attachment references unknown point {}",
                        att.point
                    )));
                };
                if att.branch == 0 || att.branch > point.branches {
                    return Err(KoenigError::Input(format!(
                        "attachment references branch {} of point {} (has {})",
                        att.branch, att.point, point.branches
                    )));
                }
                if att.component == 0 || att.component > global.components {
                    return Err(KoenigError::Input(format!(
                        "attachment references unknown component {}",
                        att.component
                    )));
                }
                if let LambdaParam::Finite(_, den) = att.lambda {
                    if den == 0 {
                        return Err(KoenigError::Input("lambda with zero denominator".into()));
                    }
                }
                for (comp, lam) in &seen {
                    if *comp == att.component && lambda_eq(lam, &att.lambda) {
                        return Err(KoenigError::Input(format!(
                            "duplicate point parameter on component {}",
                            att.component
                        )));
                    }
                }
                seen.push((att.component, &att.lambda));
            }
            // Every branch of every point must be attached exactly once.
            for p in &self.points {
                for b in 1..=p.branches {
                    let count = global
                        .attachments
                        .iter()
                        .filter(|a| a.point == p.name && a.branch == b)
                        .count();
                    if count != 1 {
                        return Err(KoenigError::Input(format!(
                            "branch {b} of point {} attached {count} times",
                            p.name
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

fn lambda_eq(a: &LambdaParam, b: &LambdaParam) -> bool {
    match (a, b) {
        (LambdaParam::Infinity, LambdaParam::Infinity) => true,
        (LambdaParam::Finite(n1, d1), LambdaParam::Finite(n2, d2)) => {
            (*n1 as i128) * (*d2 as i128) == (*n2 as i128) * (*d1 as i128)
        }
        _ => false,
    }
}

/// Verdicts of every structural check performed for one point.
#[derive(Clone, Debug)]
pub struct PointChecks {
    pub hierarchy: bool,
    pub top_row_exponents: Vec<Vec<usize>>,
    pub duality: bool,
    pub auslander: Option<bool>,
    pub heredity: bool,
    pub ext_orthogonality: bool,
    pub diagonal_dims_match: bool,
    pub first_column_dim_matches: bool,
    pub cartan_det: i64,
    pub gl_dim_bound: bool,
    pub bimodule_dim_matches: bool,
}

/// Complete analysis of one singular point.
pub struct PointAnalysis {
    pub name: String,
    pub field: Field,
    pub truncation: usize,
    pub branches: usize,
    pub conductor_exponent: usize,
    pub ring: LocalRing,
    pub chain: NormalizationChain,
    pub order: OrderMatrix,
    pub layers: Vec<QLayer>,
    pub standards: Option<StandardModules>,
    pub bimodule: Option<BimoduleW>,
    pub vertex_data: Option<VertexData>,
    pub quiver: Vec<Vec<usize>>,
    pub vertex_labels: Vec<String>,
    pub cartan: Vec<Vec<i64>>,
    pub gl_dim: GlobalDimension,
    pub dim_q: usize,
    pub checks: PointChecks,
}

impl std::fmt::Debug for PointAnalysis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "PointAnalysis({}: level {}, dim Q {})",
            self.name,
            self.chain.level,
            self.dim_q
        )
    }
}

/// Builds the series generators of a point at a given truncation.
pub fn series_generators(
    field: Field,
    spec: &PointSpec,
    trunc: usize,
) -> Result<Vec<SeriesVec>> {
    let mut out = Vec::with_capacity(spec.generators.len());
    for g in &spec.generators {
        let mut v = SeriesVec::zero(field, spec.branches, trunc);
        for (b, terms) in g.iter().enumerate() {
            for &(d, num, den) in terms {
                if d >= trunc {
                    return Err(KoenigError::Input(format!(
                        "exponent {d} of point {} exceeds the truncation {trunc}",
                        spec.name
                    )));
                }
                let c = field
                    .from_fraction(num, den)
                    .map_err(|e| KoenigError::Input(e.to_string()))?;
                v.set(b, d, v.get(b, d).add(&c));
            }
        }
        out.push(v);
    }
    Ok(out)
}

fn max_generator_degree(spec: &PointSpec) -> usize {
    spec.generators
        .iter()
        .flat_map(|g| g.iter().flat_map(|branch| branch.iter().map(|&(d, _, _)| d)))
        .max()
        .unwrap_or(1)
}

/// Closure of the point's generators at one truncation.
fn closure_at(field: Field, spec: &PointSpec, trunc: usize) -> Result<FractionalIdeal> {
    let gens = series_generators(field, spec, trunc)?;
    FractionalIdeal::algebra_closure(field, spec.branches, trunc, &gens)
}

/// Discovers the conductor exponent by raising the truncation until the
/// conductor ideal is stable under four extra digits, then fixes the working
/// truncation at `3c + 3`.
fn discover_truncation(field: Field, spec: &PointSpec) -> Result<usize> {
    let mut trunc = (2 * max_generator_degree(spec) + 6).max(16);
    for _ in 0..12 {
        let a = match closure_at(field, spec, trunc) {
            Ok(a) => a,
            Err(KoenigError::Precision { .. }) => {
                trunc *= 2;
                continue;
            }
            Err(e) => return Err(e),
        };
        let b = match closure_at(field, spec, trunc + 4) {
            Ok(b) => b,
            Err(KoenigError::Precision { .. }) => {
                trunc *= 2;
                continue;
            }
            Err(e) => return Err(e),
        };
        let ca = a.full_from().expect("closure carries a conductor");
        let cb = b.full_from().expect("closure carries a conductor");
        if ca == cb && b.truncate_to(trunc).equals(&a) {
            return Ok(3 * ca + 3);
        }
        trunc *= 2;
    }
    Err(KoenigError::Precision { advised: trunc })
}

/// Full analysis of one point. When `truncation` is provided it is used as
/// is; otherwise the documented discovery policy applies.
pub fn analyze_point(
    field: Field,
    spec: &PointSpec,
    truncation: Option<usize>,
) -> Result<PointAnalysis> {
    let trunc = match truncation {
        Some(n) => n,
        None => discover_truncation(field, spec)?,
    };
    let lattice = closure_at(field, spec, trunc)?;
    let ring = LocalRing::new(lattice)?;
    let chain = normalization_chain(&ring)?;

    // Re-verify the chain four digits higher; disagreement means the window
    // was too small.
    {
        let lattice2 = closure_at(field, spec, trunc + 4)?;
        let ring2 = LocalRing::new(lattice2)?;
        let chain2 = normalization_chain(&ring2)?;
        let same = chain2.level == chain.level
            && chain
                .rings
                .iter()
                .zip(chain2.rings.iter())
                .all(|(a, b)| b.truncate_to(trunc).equals(a));
        if !same {
            return Err(KoenigError::Precision { advised: trunc * 2 });
        }
    }

    let order = build_order(&chain)?;
    let hierarchy = hierarchy_check(&order)?.passed();
    let top_row_exponents = top_row_projectivity(&order)?;
    let auslander = if chain.level == 1 {
        Some(auslander_compare(&ring, &chain, &order)?)
    } else {
        None
    };
    let mut duality = true;
    for ring_lattice in &chain.rings {
        if !singular_locus(ring_lattice)?.all_regular {
            duality &= duality_check(ring_lattice)?.passed();
        }
    }

    let n = chain.level;
    if n == 0 {
        let checks = PointChecks {
            hierarchy,
            top_row_exponents,
            duality,
            auslander,
            heredity: true,
            ext_orthogonality: true,
            diagonal_dims_match: true,
            first_column_dim_matches: true,
            cartan_det: 1,
            gl_dim_bound: true,
            bimodule_dim_matches: true,
        };
        return Ok(PointAnalysis {
            name: spec.name.clone(),
            field,
            truncation: trunc,
            branches: spec.branches,
            conductor_exponent: ring.conductor_exponent,
            ring,
            chain,
            order,
            layers: Vec::new(),
            standards: None,
            bimodule: None,
            vertex_data: None,
            quiver: Vec::new(),
            vertex_labels: Vec::new(),
            cartan: Vec::new(),
            gl_dim: GlobalDimension::Finite(0),
            dim_q: 0,
            checks,
        });
    }

    let layers = build_layers(&chain, &order)?;
    let top = layers.last().unwrap();
    let heredity_report = crate::qha::heredity_check(&chain, &order, &layers)?;
    let vd = top.algebra.vertex_data()?;
    let quiver = top.algebra.quiver_arrows(&vd);
    let cartan = top.algebra.cartan_matrix(&vd);
    let cartan_det = int_det(&cartan);
    let cutoff = 2 * (n.max(1) - 1) + 2;
    let gl = global_dimension(&top.algebra, &vd, cutoff)?;
    let gl_bound = matches!(gl, GlobalDimension::Finite(d) if d <= 2 * (n - 1));

    let standards = standard_modules(&chain, &order, &layers)?;
    let pmax = (2 * (n - 1)).max(1);
    let ext_report = ext_orthogonality(&top.algebra, &vd, &standards, pmax)?;

    // First-column dimension identities: the vertex-1 component of Delta_k
    // has the diagonal dimension, and the vertex-1 row of Q decomposes as
    // the chain quotients by the conductors.
    let diag_ok = {
        let e1 = &top.diagonal_idempotents[0];
        standards.deltas.iter().zip(standards.diagonal_dims.iter()).all(|(delta, &dk)| {
            let act = delta.act_matrix(&top.algebra, e1);
            let vectors: Vec<Vec<crate::scalar::Scalar>> = (0..delta.dim)
                .map(|c| act.iter().map(|row| row[c].clone()).collect())
                .collect();
            crate::linalg::Subspace::from_spanning(field, delta.dim, vectors).dim() == dk
        })
    };
    let first_row_dim = top.basis_info.iter().filter(|e| e.row == 0).count();
    let mut expected_first_row = 0usize;
    for k in 0..n {
        expected_first_row += chain.rings[k].quotient(&order.entries[n][k])?.dim;
    }
    let first_col_ok = first_row_dim == expected_first_row;

    let bimodule = bimodule_w(&chain, &order, top)?;
    let w_dim_ok = bimodule.dim() == bimodule.layer_dims().iter().sum::<usize>();

    let checks = PointChecks {
        hierarchy,
        top_row_exponents,
        duality,
        auslander,
        heredity: heredity_report.passed,
        ext_orthogonality: ext_report.passed,
        diagonal_dims_match: diag_ok,
        first_column_dim_matches: first_col_ok,
        cartan_det,
        gl_dim_bound: gl_bound,
        bimodule_dim_matches: w_dim_ok,
    };
    let dim_q = top_dim(&chain, &order)?;
    Ok(PointAnalysis {
        name: spec.name.clone(),
        field,
        truncation: trunc,
        branches: spec.branches,
        conductor_exponent: ring.conductor_exponent,
        ring,
        chain,
        order,
        vertex_labels: vd.idempotents.iter().map(|(l, _)| l.clone()).collect(),
        layers,
        standards: Some(standards),
        bimodule: Some(bimodule),
        vertex_data: Some(vd),
        quiver,
        cartan,
        gl_dim: gl,
        dim_q,
        checks,
    })
}

fn top_dim(chain: &NormalizationChain, order: &OrderMatrix) -> Result<usize> {
    let n = chain.level;
    let mut dim = 0usize;
    for i in 0..n {
        for j in 0..n {
            dim += order.entries[i][j].quotient(&order.entries[n][j])?.dim;
        }
    }
    Ok(dim)
}

/// Exact integer determinant via rational Gaussian elimination.
pub fn int_det(m: &[Vec<i64>]) -> i64 {
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use num_traits::{One, Signed, Zero};
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .map(|row| row.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect())
        .collect();
    let mut det = BigRational::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return 0;
        };
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        det *= a[col][col].clone();
        let inv = a[col][col].recip();
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let factor = &a[r][col] * &inv;
            for c in col..n {
                let sub = &factor * &a[col][c];
                a[r][c] -= sub;
            }
        }
    }
    debug_assert!(det.is_integer());
    let int = det.to_integer();
    let sign = if int.is_negative() { -1 } else { 1 };
    let mag: i64 = int.abs().try_into().unwrap_or(i64::MAX);
    sign * mag
}

#[cfg(test)]
mod tests {
    use super::*;

    fn point(name: &str, branches: usize, gens: &[Vec<Vec<(usize, i64)>>]) -> PointSpec {
        PointSpec {
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
        }
    }

    #[test]
    fn cusp_analysis_end_to_end() {
        let spec = point("cusp", 1, &[vec![vec![(2, 1)]], vec![vec![(3, 1)]]]);
        let analysis = analyze_point(Field::Rational, &spec, None).unwrap();
        assert_eq!(analysis.chain.level, 1);
        assert_eq!(analysis.truncation, 9); // c = 2, N = 3c + 3
        assert_eq!(analysis.dim_q, 1);
        assert_eq!(analysis.gl_dim, GlobalDimension::Finite(0));
        assert!(analysis.checks.hierarchy);
        assert!(analysis.checks.duality);
        assert_eq!(analysis.checks.auslander, Some(true));
        assert!(analysis.checks.heredity);
        assert_eq!(analysis.bimodule.as_ref().unwrap().dim(), 2);
    }

    #[test]
    fn a4_analysis_matches_expected_invariants() {
        let spec = point("a4", 1, &[vec![vec![(2, 1)]], vec![vec![(5, 1)]]]);
        let analysis = analyze_point(Field::Rational, &spec, None).unwrap();
        assert_eq!(analysis.chain.level, 2);
        assert_eq!(analysis.dim_q, 5);
        assert_eq!(analysis.gl_dim, GlobalDimension::Finite(2));
        assert_eq!(analysis.quiver, vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(analysis.checks.cartan_det, 1);
        assert!(analysis.checks.ext_orthogonality);
        assert!(analysis.checks.gl_dim_bound);
        assert_eq!(analysis.bimodule.as_ref().unwrap().layer_dims(), vec![4, 2]);
    }

    #[test]
    fn validation_rejects_duplicate_lambdas() {
        let spec = InputSpec {
            field: Field::Rational,
            truncation: None,
            points: vec![point("p", 2, &[vec![vec![(1, 1)], vec![(1, -1)]], vec![vec![(1, 1)], vec![(1, 1)]]])],
            global: Some(GlobalSpec {
                components: 1,
                attachments: vec![
                    AttachmentSpec {
                        point: "p".into(),
                        branch: 1,
                        component: 1,
                        lambda: LambdaParam::Finite(1, 2),
                    },
                    AttachmentSpec {
                        point: "p".into(),
                        branch: 2,
                        component: 1,
                        lambda: LambdaParam::Finite(2, 4),
                    },
                ],
            }),
        };
        assert!(matches!(spec.validate(), Err(KoenigError::Input(_))));
    }

    #[test]
    fn validation_accepts_distinct_lambdas() {
        let spec = InputSpec {
            field: Field::Rational,
            truncation: None,
            points: vec![point("p", 2, &[vec![vec![(1, 1)], vec![(1, -1)]], vec![vec![(1, 1)], vec![(1, 1)]]])],
            global: Some(GlobalSpec {
                components: 1,
                attachments: vec![
                    AttachmentSpec {
                        point: "p".into(),
                        branch: 1,
                        component: 1,
                        lambda: LambdaParam::Finite(0, 1),
                    },
                    AttachmentSpec {
                        point: "p".into(),
                        branch: 2,
                        component: 1,
                        lambda: LambdaParam::Infinity,
                    },
                ],
            }),
        };
        spec.validate().unwrap();
    }
}
