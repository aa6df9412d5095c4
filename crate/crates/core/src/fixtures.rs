//! Built-in corpus of simple plane-curve singularities with rational branch
//! parametrizations, their defining equations, and the expected invariants
//! (level, quiver shape, global dimension, quiver presentations).

use crate::error::{KoenigError, Result};
use crate::findim::presentation::{QuiverPresentation, Relation};
use crate::scalar::Field;
use crate::series::SeriesVec;

/// Classification label of a fixture singularity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AdeClass {
    A(usize),
    D(usize),
    E(usize),
}

impl std::fmt::Display for AdeClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AdeClass::A(m) => write!(f, "A{m}"),
            AdeClass::D(m) => write!(f, "D{m}"),
            AdeClass::E(m) => write!(f, "E{m}"),
        }
    }
}

/// One fixture: a parametrized singularity with its expected invariants.
#[derive(Clone, Debug)]
pub struct Fixture {
    pub class: AdeClass,
    pub branches: usize,
    /// Two generators u, v; each is a per-branch polynomial given as
    /// (degree, integer coefficient) terms.
    pub generators: [Vec<Vec<(usize, i64)>>; 2],
    /// Defining equation as (coefficient, u-exponent, v-exponent) terms.
    pub equation: Vec<(i64, u32, u32)>,
    pub expected_level: usize,
    pub expected_gl_dim: usize,
}

impl Fixture {
    pub fn name(&self) -> String {
        self.class.to_string()
    }

    /// The generators as series vectors at the given truncation.
    pub fn series_generators(&self, field: Field, trunc: usize) -> Vec<SeriesVec> {
        self.generators
            .iter()
            .map(|branches| {
                let mut v = SeriesVec::zero(field, self.branches, trunc);
                for (b, terms) in branches.iter().enumerate() {
                    for &(d, c) in terms {
                        if d < trunc {
                            v.set(b, d, field.from_i64(c));
                        }
                    }
                }
                v
            })
            .collect()
    }

    /// Verifies that the defining equation vanishes on the parametrization
    /// up to the truncation window.
    pub fn verify_equation(&self, field: Field, trunc: usize) -> Result<()> {
        let gens = self.series_generators(field, trunc);
        let (u, v) = (&gens[0], &gens[1]);
        let mut total = SeriesVec::zero(field, self.branches, trunc);
        for &(c, ue, ve) in &self.equation {
            let mut term = SeriesVec::one(field, self.branches, trunc);
            for _ in 0..ue {
                term = term.mul(u)?;
            }
            for _ in 0..ve {
                term = term.mul(v)?;
            }
            total = total.add(&term.scale(&field.from_i64(c)))?;
        }
        if !total.is_zero() {
            return Err(KoenigError::Consistency(format!(
                "defining equation of {} does not vanish on its parametrization",
                self.name()
            )));
        }
        Ok(())
    }

    /// The quiver presentation of the attached quasi-hereditary algebra.
    pub fn presentation(&self) -> QuiverPresentation {
        match self.class {
            AdeClass::A(_) => a_type_presentation(self.expected_level),
            AdeClass::D(_) | AdeClass::E(_) => d_type_presentation(self.expected_level),
        }
    }

    /// Expected Ext-quiver arrow counts (`counts[i][j]` arrows i -> j).
    pub fn expected_arrows(&self) -> Vec<Vec<usize>> {
        let n = self.expected_level;
        let mut counts = vec![vec![0usize; n]; n];
        for k in 0..n.saturating_sub(1) {
            counts[k][k + 1] = 1;
            counts[k + 1][k] = 1;
        }
        if !matches!(self.class, AdeClass::A(_)) && n >= 2 {
            counts[0][1] += 1;
        }
        counts
    }
}

/// All sixteen corpus fixtures: A1..A8, D4..D8, E6, E7, E8.
pub fn corpus() -> Vec<Fixture> {
    let mut out = Vec::new();
    for m in 1..=8 {
        out.push(a_fixture(m));
    }
    for m in 4..=8 {
        out.push(d_fixture(m));
    }
    out.push(e_fixture(6));
    out.push(e_fixture(7));
    out.push(e_fixture(8));
    out
}

pub fn by_name(name: &str) -> Option<Fixture> {
    corpus().into_iter().find(|f| f.name().eq_ignore_ascii_case(name))
}

/// `u^2 = v^{m+1}`.
fn a_fixture(m: usize) -> Fixture {
    let level = (m + 1) / 2;
    let gl = if m <= 2 { 0 } else { 2 };
    if m % 2 == 0 {
        // One branch: u = t^{m+1}, v = t^2.
        Fixture {
            class: AdeClass::A(m),
            branches: 1,
            generators: [vec![vec![(m + 1, 1)]], vec![vec![(2, 1)]]],
            equation: vec![(1, 2, 0), (-1, 0, (m + 1) as u32)],
            expected_level: level,
            expected_gl_dim: gl,
        }
    } else {
        // Two branches: u = (t^q, -t^q), v = (t, t) with q = (m+1)/2.
        let q = (m + 1) / 2;
        Fixture {
            class: AdeClass::A(m),
            branches: 2,
            generators: [
                vec![vec![(q, 1)], vec![(q, -1)]],
                vec![vec![(1, 1)], vec![(1, 1)]],
            ],
            equation: vec![(1, 2, 0), (-1, 0, (m + 1) as u32)],
            expected_level: level,
            expected_gl_dim: gl,
        }
    }
}

/// `u^2 v = v^{m-1}`.
fn d_fixture(m: usize) -> Fixture {
    let level = m / 2;
    let gl = if m <= 5 { 2 } else { 3 };
    if m % 2 == 0 {
        // Line branch (u,v) = (t,0) plus u = ±v^{(m-2)/2} on v = t.
        let q = (m - 2) / 2;
        Fixture {
            class: AdeClass::D(m),
            branches: 3,
            generators: [
                vec![vec![(1, 1)], vec![(q, 1)], vec![(q, -1)]],
                vec![vec![], vec![(1, 1)], vec![(1, 1)]],
            ],
            equation: vec![(1, 2, 1), (-1, 0, (m - 1) as u32)],
            expected_level: level,
            expected_gl_dim: gl,
        }
    } else {
        // Line branch (t,0) plus the cusp branch u = t^{m-2}, v = t^2.
        Fixture {
            class: AdeClass::D(m),
            branches: 2,
            generators: [
                vec![vec![(1, 1)], vec![(m - 2, 1)]],
                vec![vec![], vec![(2, 1)]],
            ],
            equation: vec![(1, 2, 1), (-1, 0, (m - 1) as u32)],
            expected_level: level,
            expected_gl_dim: gl,
        }
    }
}

fn e_fixture(l: usize) -> Fixture {
    match l {
        // u^3 + v^4 = 0: u = -t^4, v = t^3.
        6 => Fixture {
            class: AdeClass::E(6),
            branches: 1,
            generators: [vec![vec![(4, -1)]], vec![vec![(3, 1)]]],
            equation: vec![(1, 3, 0), (1, 0, 4)],
            expected_level: 2,
            expected_gl_dim: 2,
        },
        // u^3 + u v^3 = 0: line u = 0 plus u = t^3, v = -t^2.
        7 => Fixture {
            class: AdeClass::E(7),
            branches: 2,
            generators: [
                vec![vec![], vec![(3, 1)]],
                vec![vec![(1, 1)], vec![(2, -1)]],
            ],
            equation: vec![(1, 3, 0), (1, 1, 3)],
            expected_level: 3,
            expected_gl_dim: 3,
        },
        // u^3 + v^5 = 0: u = -t^5, v = t^3.
        8 => Fixture {
            class: AdeClass::E(8),
            branches: 1,
            generators: [vec![vec![(5, -1)]], vec![vec![(3, 1)]]],
            equation: vec![(1, 3, 0), (1, 0, 5)],
            expected_level: 3,
            expected_gl_dim: 3,
        },
        _ => unreachable!("only E6, E7, E8 exist"),
    }
}

/// The double-chain presentation on `n` vertices with the mesh and end
/// relations.
pub fn a_type_presentation(n: usize) -> QuiverPresentation {
    let vertices: Vec<String> = (1..=n).map(|v| v.to_string()).collect();
    let mut arrows = Vec::new();
    // beta_k: k -> k+1 has index 2k, alpha_k: k+1 -> k has index 2k+1.
    for k in 0..n.saturating_sub(1) {
        arrows.push((format!("b{}", k + 1), k, k + 1));
        arrows.push((format!("a{}", k + 1), k + 1, k));
    }
    let beta = |k: usize| 2 * k;
    let alpha = |k: usize| 2 * k + 1;
    let mut relations = Vec::new();
    // beta_k alpha_k = alpha_{k+1} beta_{k+1} (loops at vertex k+1).
    for k in 0..n.saturating_sub(2) {
        relations.push(Relation {
            terms: vec![(1, vec![alpha(k), beta(k)]), (-1, vec![beta(k + 1), alpha(k + 1)])],
        });
    }
    if n >= 2 {
        // beta_{n-1} alpha_{n-1} = 0.
        relations.push(Relation { terms: vec![(1, vec![alpha(n - 2), beta(n - 2)])] });
    }
    QuiverPresentation { vertices, arrows, relations }
}

/// The A-type presentation plus the extra arrow `b': 1 -> 2` with its two
/// relations. Covers the D-series and (at levels 2 and 3) the E-series.
pub fn d_type_presentation(n: usize) -> QuiverPresentation {
    assert!(n >= 2);
    let mut pres = a_type_presentation(n);
    let bp = pres.arrows.len();
    pres.arrows.push(("bp".to_string(), 0, 1));
    let beta = |k: usize| 2 * k;
    let alpha = |k: usize| 2 * k + 1;
    // b' alpha_1 = 0.
    pres.relations.push(Relation { terms: vec![(1, vec![alpha(0), bp])] });
    if n >= 3 {
        // beta_2 b' = 0.
        pres.relations.push(Relation { terms: vec![(1, vec![bp, beta(1)])] });
    }
    pres
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::findim::presentation::presented_algebra;

    #[test]
    fn corpus_has_sixteen_fixtures_with_vanishing_equations() {
        let fixtures = corpus();
        assert_eq!(fixtures.len(), 16);
        for fx in &fixtures {
            fx.verify_equation(Field::Rational, 40).unwrap();
        }
    }

    #[test]
    fn fixture_lookup_by_name() {
        assert!(by_name("a4").is_some());
        assert!(by_name("E6").is_some());
        assert!(by_name("Z9").is_none());
    }

    #[test]
    fn presentation_dimensions_match_hand_counts() {
        // dim Q(A4) = 5, dim Q(E6) = 7 from path enumeration.
        let a4 = by_name("A4").unwrap();
        let alg = presented_algebra(Field::Rational, &a4.presentation(), 10).unwrap();
        assert_eq!(alg.dim, 5);
        let e6 = by_name("E6").unwrap();
        let alg = presented_algebra(Field::Rational, &e6.presentation(), 10).unwrap();
        assert_eq!(alg.dim, 7);
        // E7 and D6 share one algebra, as do E8 and D7.
        let e7 = presented_algebra(Field::Rational, &by_name("E7").unwrap().presentation(), 12)
            .unwrap();
        let d6 = presented_algebra(Field::Rational, &by_name("D6").unwrap().presentation(), 12)
            .unwrap();
        assert_eq!(e7.dim, d6.dim);
    }

    #[test]
    fn expected_arrow_tables() {
        let a4 = by_name("A4").unwrap();
        assert_eq!(a4.expected_arrows(), vec![vec![0, 1], vec![1, 0]]);
        let e6 = by_name("E6").unwrap();
        assert_eq!(e6.expected_arrows(), vec![vec![0, 2], vec![1, 0]]);
        let e7 = by_name("E7").unwrap();
        assert_eq!(
            e7.expected_arrows(),
            vec![vec![0, 2, 0], vec![1, 0, 1], vec![0, 1, 0]]
        );
    }
}
