//! Convex sets of measures inside the probability simplex, stored by their
//! extreme points.

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::lp::{self, Feasibility};
use crate::rational::{one, zero, Rational};
use crate::space::{check_unit_interval, FiniteSpace, Measure, TestFunction};

/// Builds the feasibility system `Σ λₖ genₖ = ξ, Σ λₖ = 1, λ ≥ 0`.
fn hull_system(xi: &Measure, gens: &[&Measure]) -> (Vec<Vec<Rational>>, Vec<Rational>) {
    let n = xi.space().len();
    let mut rows: Vec<Vec<Rational>> =
        (0..n).map(|x| gens.iter().map(|g| g.weight(x).clone()).collect()).collect();
    rows.push(vec![one(); gens.len()]);
    let mut rhs = xi.weights().to_vec();
    rhs.push(one());
    (rows, rhs)
}

fn hull_feasibility(xi: &Measure, gens: &[&Measure]) -> Feasibility {
    let (a, b) = hull_system(xi, gens);
    lp::solve(&a, &b)
}

fn in_hull_refs(xi: &Measure, gens: &[&Measure]) -> bool {
    if gens.is_empty() {
        return false;
    }
    // An atom no generator reaches cannot be produced.
    let reachable = |x: usize| gens.iter().any(|g| *g.weight(x) > zero());
    if !xi.atoms().all(|(x, _)| reachable(x)) {
        return false;
    }
    hull_feasibility(xi, gens).is_feasible()
}

/// Whether `xi` is a convex combination of `gens`, decided exactly.
pub fn in_hull(xi: &Measure, gens: &[Measure]) -> Result<bool> {
    if gens.is_empty() {
        return Err(Error::EmptyGenerators);
    }
    for g in gens {
        xi.space().ensure_same(g.space())?;
    }
    let refs: Vec<&Measure> = gens.iter().collect();
    Ok(in_hull_refs(xi, &refs))
}

/// The extreme points of `conv(gens)`, sorted canonically.
///
/// Redundancy filtering: a candidate lying in the hull of the remaining
/// candidates is dropped. Dropping a redundant point leaves the hull
/// unchanged, so one pass over the candidates suffices.
pub fn extreme_points(gens: &[Measure]) -> Vec<Measure> {
    let mut candidates: Vec<Measure> = gens.to_vec();
    candidates.sort();
    candidates.dedup();
    let mut i = 0;
    while i < candidates.len() {
        let others: Vec<&Measure> =
            candidates.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, m)| m).collect();
        if in_hull_refs(&candidates[i], &others) {
            candidates.remove(i);
        } else {
            i += 1;
        }
    }
    candidates
}

/// A finitely generated convex set `A ⊆ P(X)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MeasurePolytope {
    space: FiniteSpace,
    generators: Vec<Measure>,
    vertices: Vec<Measure>,
}

impl MeasurePolytope {
    pub fn new(generators: Vec<Measure>) -> Result<Self> {
        let first = generators.first().ok_or(Error::EmptyGenerators)?;
        let space = first.space().clone();
        for g in &generators[1..] {
            space.ensure_same(g.space())?;
        }
        let vertices = extreme_points(&generators);
        Ok(Self { space, generators, vertices })
    }

    /// The polytope with its generators replaced by its vertex list.
    pub fn canonical(&self) -> Self {
        Self { space: self.space.clone(), generators: self.vertices.clone(), vertices: self.vertices.clone() }
    }

    pub fn space(&self) -> &FiniteSpace {
        &self.space
    }

    pub fn generators(&self) -> &[Measure] {
        &self.generators
    }

    pub fn vertices(&self) -> &[Measure] {
        &self.vertices
    }

    pub fn contains(&self, xi: &Measure) -> Result<bool> {
        in_hull(xi, &self.vertices)
    }

    /// Support function `φ ↦ max_{ξ ∈ A} ξ(φ)`, attained at a vertex.
    pub fn support_value(&self, phi: &TestFunction) -> Result<Rational> {
        self.space.ensure_same(phi.space())?;
        Ok(max_eval(&self.vertices, phi.values()))
    }
}

pub(crate) fn max_eval(measures: &[Measure], phi: &[Rational]) -> Rational {
    measures.iter().map(|m| m.eval_unchecked(phi)).max().expect("nonempty measure list")
}

impl std::fmt::Debug for MeasurePolytope {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("MeasurePolytope").field("vertices", &self.vertices).finish()
    }
}

impl Serialize for MeasurePolytope {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("MeasurePolytope", 2)?;
        st.serialize_field("generators", &self.generators)?;
        st.serialize_field("vertices", &self.vertices)?;
        st.end()
    }
}

/// `(1 − t)·P + t·Q`, generated by the pairwise combinations of vertices.
pub fn minkowski_combination(p: &MeasurePolytope, q: &MeasurePolytope, t: &Rational) -> Result<MeasurePolytope> {
    p.space.ensure_same(&q.space)?;
    check_unit_interval("t", t)?;
    let mut gens = Vec::with_capacity(p.vertices.len() * q.vertices.len());
    for a in &p.vertices {
        for b in &q.vertices {
            gens.push(a.mix(b, t)?);
        }
    }
    MeasurePolytope::new(gens)
}

pub fn polytope_eq(p: &MeasurePolytope, q: &MeasurePolytope) -> Result<bool> {
    p.space.ensure_same(&q.space)?;
    Ok(p.vertices == q.vertices)
}

/// A test function on which the support functions of `p` and `q` differ, or
/// `None` when the polytopes are equal.
///
/// Candidates are tried cheapest first: point indicators, then the weight
/// vector of a vertex found in only one of the two lists, then a Farkas
/// certificate separating such a vertex from the other hull. The last step
/// always succeeds when the hulls differ.
pub fn separating_function(p: &MeasurePolytope, q: &MeasurePolytope) -> Result<Option<TestFunction>> {
    if polytope_eq(p, q)? {
        return Ok(None);
    }
    let space = &p.space;
    let separates = |phi: &[Rational]| max_eval(&p.vertices, phi) != max_eval(&q.vertices, phi);

    for x in 0..space.len() {
        let phi = TestFunction::indicator(space, &[x]);
        if separates(phi.values()) {
            return Ok(Some(phi));
        }
    }

    let lonely: Vec<(&Measure, &MeasurePolytope)> = p
        .vertices
        .iter()
        .filter(|v| !q.vertices.contains(v))
        .map(|v| (v, q))
        .chain(q.vertices.iter().filter(|v| !p.vertices.contains(v)).map(|v| (v, p)))
        .collect();
    for (v, _) in &lonely {
        if separates(v.weights()) {
            return Ok(Some(TestFunction::new(space.clone(), v.weights().to_vec())?));
        }
    }

    for (v, other) in lonely {
        if let Some(phi) = farkas_separator(v, &other.vertices) {
            debug_assert!(separates(&phi));
            return Ok(Some(TestFunction::new(space.clone(), phi)?));
        }
    }
    unreachable!("distinct vertex lists imply a vertex outside the other hull")
}

/// `φ` with `φ(v) > max φ(g)` over `gens`, read off the infeasibility
/// certificate `y = (φ, c)`: `φ·g + c ≤ 0` for every `g` and `φ·v + c > 0`.
pub(crate) fn farkas_separator(v: &Measure, gens: &[Measure]) -> Option<Vec<Rational>> {
    let refs: Vec<&Measure> = gens.iter().collect();
    match hull_feasibility(v, &refs) {
        Feasibility::Infeasible(mut y) => {
            y.truncate(v.space().len());
            Some(y)
        }
        Feasibility::Feasible(_) => None,
    }
}
