//! Path algebras of quivers with relations, realized as structure-constant
//! algebras by linear algebra on truncated path spaces.
//!
//! Composition is right-to-left throughout: in a product `p q` the path `q`
//! is applied first. Path words are stored in application order (the first
//! entry is the first arrow applied), so the product `p q` concatenates the
//! word of `q` followed by the word of `p`.

use super::{SparseVec, StructAlgebra};
use crate::error::{KoenigError, Result};
use crate::linalg;
use crate::scalar::{Field, Scalar};
use std::collections::HashMap;

/// A quiver presentation: vertices, labelled arrows, and relations given as
/// integer combinations of parallel paths of length at least two.
#[derive(Clone, Debug, PartialEq)]
pub struct QuiverPresentation {
    pub vertices: Vec<String>,
    /// (label, source, target)
    pub arrows: Vec<(String, usize, usize)>,
    pub relations: Vec<Relation>,
}

/// `sum_i coeff_i * word_i = 0` with all words parallel (same source and
/// target); words are arrow index sequences in application order.
#[derive(Clone, Debug, PartialEq)]
pub struct Relation {
    pub terms: Vec<(i64, Vec<usize>)>,
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
struct PathKey {
    source: usize,
    word: Vec<usize>,
}

impl QuiverPresentation {
    fn word_endpoints(&self, source_hint: Option<usize>, word: &[usize]) -> Option<(usize, usize)> {
        if word.is_empty() {
            return source_hint.map(|v| (v, v));
        }
        let mut at = self.arrows[word[0]].1;
        let source = at;
        for &a in word {
            let (_, s, t) = self.arrows[a];
            if s != at {
                return None;
            }
            at = t;
        }
        Some((source, at))
    }

    fn validate(&self) -> Result<()> {
        for (label, s, t) in &self.arrows {
            if *s >= self.vertices.len() || *t >= self.vertices.len() {
                return Err(KoenigError::Input(format!("arrow {label} has an unknown endpoint")));
            }
        }
        for rel in &self.relations {
            let mut endpoints = None;
            for (_, word) in &rel.terms {
                if word.len() < 2 {
                    return Err(KoenigError::Domain(
                        "relations must be combinations of paths of length at least 2".into(),
                    ));
                }
                let ep = self
                    .word_endpoints(None, word)
                    .ok_or_else(|| KoenigError::Input("relation word is not composable".into()))?;
                match endpoints {
                    None => endpoints = Some(ep),
                    Some(prev) if prev != ep => {
                        return Err(KoenigError::Domain(
                            "relation terms are not parallel paths".into(),
                        ))
                    }
                    _ => {}
                }
            }
        }
        Ok(())
    }
}

/// Quotient of the truncated path space by the two-sided span of the
/// relations. Errors when the quotient dimension has not stabilized at the
/// nilpotency bound.
pub fn presented_algebra(
    field: Field,
    pres: &QuiverPresentation,
    bound: usize,
) -> Result<StructAlgebra> {
    pres.validate()?;
    // Find the stabilization length within the bound.
    let mut stabilized_at = None;
    let mut previous_dim = None;
    for len in 0..=bound {
        let dim = quotient_dim(field, pres, len)?;
        if previous_dim == Some(dim) {
            stabilized_at = Some(len);
            break;
        }
        previous_dim = Some(dim);
    }
    let Some(l0) = stabilized_at else {
        return Err(KoenigError::Domain(format!(
            "path-space dimension did not stabilize at the nilpotency bound {bound}"
        )));
    };
    // Work at twice the normal-form length so products of basis paths reduce.
    let full_len = (2 * l0.saturating_sub(1)).max(l0);
    let paths = enumerate_paths(pres, full_len)?;
    let (ideal_rows, ideal_pivots, index) = ideal_echelon(field, pres, &paths, full_len)?;
    let pivot_set: std::collections::HashSet<usize> = ideal_pivots.iter().copied().collect();

    // Normal forms: non-pivot paths, reordered short-first for the basis.
    let mut normal: Vec<usize> = (0..paths.len()).filter(|i| !pivot_set.contains(i)).collect();
    normal.sort_by(|&a, &b| {
        (paths[a].word.len(), paths[a].source, &paths[a].word).cmp(&(
            paths[b].word.len(),
            paths[b].source,
            &paths[b].word,
        ))
    });
    let basis_index: HashMap<usize, usize> =
        normal.iter().enumerate().map(|(new, &old)| (old, new)).collect();
    let dim = normal.len();

    let label_of = |key: &PathKey| -> String {
        if key.word.is_empty() {
            format!("e_{}", pres.vertices[key.source])
        } else {
            // Right-to-left display: last-applied arrow first.
            key.word
                .iter()
                .rev()
                .map(|&a| pres.arrows[a].0.clone())
                .collect::<Vec<_>>()
                .join("")
        }
    };
    let labels: Vec<String> = normal.iter().map(|&i| label_of(&paths[i])).collect();

    // Reduce an arbitrary path column to basis coordinates.
    let reduce_path = |col: usize| -> SparseVec {
        let mut indicator = vec![field.zero(); paths.len()];
        indicator[col] = field.one();
        let reduced = linalg::reduce(&indicator, &ideal_rows, &ideal_pivots);
        let mut out = SparseVec::new();
        for (i, x) in reduced.iter().enumerate() {
            if !x.is_zero() {
                out.push((basis_index[&i], x.clone()));
            }
        }
        out.sort_by_key(|(i, _)| *i);
        out
    };

    let mut table = vec![vec![SparseVec::new(); dim]; dim];
    for (i, &pi) in normal.iter().enumerate() {
        for (j, &pj) in normal.iter().enumerate() {
            // Product b_i * b_j applies b_j first.
            let q = &paths[pj];
            let p = &paths[pi];
            let q_target = pres
                .word_endpoints(Some(q.source), &q.word)
                .expect("stored paths are composable")
                .1;
            if q_target != p.source {
                continue;
            }
            let mut word = q.word.clone();
            word.extend(p.word.iter().copied());
            let key = PathKey { source: q.source, word };
            let col = *index.get(&key).expect("product path fits the doubled window");
            table[i][j] = reduce_path(col);
        }
    }

    let mut unit = vec![field.zero(); dim];
    // Vertex idempotents, ordered by vertex index.
    let mut by_vertex: Vec<(usize, (String, Vec<Scalar>))> = Vec::new();
    for (i, &pi) in normal.iter().enumerate() {
        if paths[pi].word.is_empty() {
            unit[i] = field.one();
            let mut e = vec![field.zero(); dim];
            e[i] = field.one();
            by_vertex.push((paths[pi].source, (pres.vertices[paths[pi].source].clone(), e)));
        }
    }
    by_vertex.sort_by_key(|(v, _)| *v);
    let idempotents: Vec<(String, Vec<Scalar>)> = by_vertex.into_iter().map(|(_, e)| e).collect();

    StructAlgebra::new(field, labels, table, unit, Some(idempotents))
}

fn enumerate_paths(pres: &QuiverPresentation, max_len: usize) -> Result<Vec<PathKey>> {
    let mut paths: Vec<PathKey> = Vec::new();
    let mut frontier: Vec<(PathKey, usize)> = Vec::new(); // (path, target)
    for v in 0..pres.vertices.len() {
        let key = PathKey { source: v, word: Vec::new() };
        paths.push(key.clone());
        frontier.push((key, v));
    }
    for _ in 0..max_len {
        let mut next = Vec::new();
        for (key, target) in &frontier {
            for (a, (_, s, t)) in pres.arrows.iter().enumerate() {
                if s == target {
                    let mut word = key.word.clone();
                    word.push(a);
                    let nk = PathKey { source: key.source, word };
                    paths.push(nk.clone());
                    next.push((nk, *t));
                }
            }
        }
        if paths.len() > 200_000 {
            return Err(KoenigError::Domain(
                "path space too large; tighten the relations or the bound".into(),
            ));
        }
        frontier = next;
    }
    // Column order: longest first, then canonical.
    paths.sort_by(|a, b| {
        (std::cmp::Reverse(a.word.len()), a.source, &a.word).cmp(&(
            std::cmp::Reverse(b.word.len()),
            b.source,
            &b.word,
        ))
    });
    Ok(paths)
}

type IdealEchelon = (Vec<Vec<Scalar>>, Vec<usize>, HashMap<PathKey, usize>);

fn ideal_echelon(
    field: Field,
    pres: &QuiverPresentation,
    paths: &[PathKey],
    max_len: usize,
) -> Result<IdealEchelon> {
    let index: HashMap<PathKey, usize> =
        paths.iter().enumerate().map(|(i, k)| (k.clone(), i)).collect();
    let endpoints: Vec<(usize, usize)> = paths
        .iter()
        .map(|k| pres.word_endpoints(Some(k.source), &k.word).expect("composable"))
        .collect();
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    for rel in &pres.relations {
        let (rs, rt) = pres
            .word_endpoints(None, &rel.terms[0].1)
            .expect("validated relation");
        let rel_len = rel.terms.iter().map(|(_, w)| w.len()).max().unwrap_or(0);
        for (wi, (ws, wt)) in endpoints.iter().enumerate() {
            if *wt != rs {
                continue;
            }
            let w = &paths[wi];
            for (ui, (us, _)) in endpoints.iter().enumerate() {
                if *us != rt {
                    continue;
                }
                let u = &paths[ui];
                if w.word.len() + rel_len + u.word.len() > max_len {
                    continue;
                }
                let mut row = vec![field.zero(); paths.len()];
                for (c, term_word) in &rel.terms {
                    let mut word = w.word.clone();
                    word.extend(term_word.iter().copied());
                    word.extend(u.word.iter().copied());
                    let key = PathKey { source: *ws, word };
                    let col = index[&key];
                    row[col] = row[col].add(&field.from_i64(*c));
                }
                rows.push(row);
            }
        }
    }
    let pivots = linalg::echelonize(&mut rows);
    Ok((rows, pivots, index))
}

fn quotient_dim(field: Field, pres: &QuiverPresentation, max_len: usize) -> Result<usize> {
    let paths = enumerate_paths(pres, max_len)?;
    let (_, pivots, _) = ideal_echelon(field, pres, &paths, max_len)?;
    Ok(paths.len() - pivots.len())
}

/// DOT rendering of a quiver with arrow multiplicities drawn as parallel
/// edges. Output is deterministic.
pub fn quiver_dot(vertices: &[String], counts: &[Vec<usize>]) -> String {
    let mut out = String::from("digraph quiver {\n");
    for v in vertices {
        out.push_str(&format!("    \"{v}\";\n"));
    }
    for (i, row) in counts.iter().enumerate() {
        for (j, &c) in row.iter().enumerate() {
            for _ in 0..c {
                out.push_str(&format!("    \"{}\" -> \"{}\";\n", vertices[i], vertices[j]));
            }
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::findim::modules::global_dimension;
    use crate::findim::GlobalDimension;

    fn f() -> Field {
        Field::Rational
    }

    /// The two-vertex presentation with arrows beta: 1 -> 2, alpha: 2 -> 1
    /// and relation "alpha then beta = 0" (the loop at vertex 2 through 1).
    fn a4_presentation() -> QuiverPresentation {
        QuiverPresentation {
            vertices: vec!["1".into(), "2".into()],
            arrows: vec![("b1".into(), 0, 1), ("a1".into(), 1, 0)],
            // beta_1 alpha_1 = 0: apply alpha_1 first.
            relations: vec![Relation { terms: vec![(1, vec![1, 0])] }],
        }
    }

    fn e6_presentation() -> QuiverPresentation {
        QuiverPresentation {
            vertices: vec!["1".into(), "2".into()],
            arrows: vec![("b".into(), 0, 1), ("bp".into(), 0, 1), ("a".into(), 1, 0)],
            relations: vec![
                Relation { terms: vec![(1, vec![2, 0])] }, // b a = 0
                Relation { terms: vec![(1, vec![2, 1])] }, // b' a = 0
            ],
        }
    }

    #[test]
    fn a4_path_algebra_has_dimension_five() {
        // Oracle: normal forms e1, e2, b1, a1, a1b1.
        let a = presented_algebra(f(), &a4_presentation(), 8).unwrap();
        assert_eq!(a.dim, 5);
        let vd = a.vertex_data().unwrap();
        assert_eq!(vd.count(), 2);
        // Path-count Cartan: paths 1->1: {e1, a1b1}; 1->2: {b1}; 2->1: {a1}; 2->2: {e2}.
        assert_eq!(a.cartan_matrix(&vd), vec![vec![2, 1], vec![1, 1]]);
        assert_eq!(a.quiver_arrows(&vd), vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(global_dimension(&a, &vd, 8).unwrap(), GlobalDimension::Finite(2));
    }

    #[test]
    fn e6_path_algebra_has_dimension_seven() {
        // Oracle: normal forms {e1, e2, a, b, b', ab, ab'}.
        let a = presented_algebra(f(), &e6_presentation(), 8).unwrap();
        assert_eq!(a.dim, 7);
        let vd = a.vertex_data().unwrap();
        assert_eq!(a.quiver_arrows(&vd), vec![vec![0, 2], vec![1, 0]]);
        assert_eq!(a.cartan_matrix(&vd), vec![vec![3, 2], vec![1, 1]]);
        assert_eq!(global_dimension(&a, &vd, 8).unwrap(), GlobalDimension::Finite(2));
    }

    #[test]
    fn kronecker_path_algebra_has_dimension_four() {
        let pres = QuiverPresentation {
            vertices: vec!["1".into(), "2".into()],
            arrows: vec![("x".into(), 0, 1), ("y".into(), 0, 1)],
            relations: vec![],
        };
        let a = presented_algebra(f(), &pres, 4).unwrap();
        assert_eq!(a.dim, 4);
    }

    #[test]
    fn non_admissible_relation_is_rejected() {
        let mut pres = a4_presentation();
        pres.relations.push(Relation { terms: vec![(1, vec![0])] });
        assert!(matches!(
            presented_algebra(f(), &pres, 6),
            Err(KoenigError::Domain(_))
        ));
    }

    #[test]
    fn unbounded_growth_is_reported() {
        // A loop with no relations never stabilizes.
        let pres = QuiverPresentation {
            vertices: vec!["1".into()],
            arrows: vec![("x".into(), 0, 0)],
            relations: vec![],
        };
        assert!(matches!(
            presented_algebra(f(), &pres, 6),
            Err(KoenigError::Domain(_))
        ));
    }

    #[test]
    fn dot_output_lists_parallel_edges() {
        let dot = quiver_dot(
            &["1".into(), "2".into()],
            &[vec![0, 2], vec![1, 0]],
        );
        assert_eq!(dot.matches("\"1\" -> \"2\"").count(), 2);
        assert_eq!(dot.matches("\"2\" -> \"1\"").count(), 1);
    }
}
