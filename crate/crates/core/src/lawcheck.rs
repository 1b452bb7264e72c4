//! Exhaustive and seeded checks of the functor laws, the normality
//! properties, the support formula, the retraction and the homotopy.
//!
//! Every checker quantifies over an [`InstanceFamily`]: the complete
//! denominator grid of measures with every generator subset up to a bound,
//! falling back to seeded sampling once the exhaustive domain exceeds
//! `max_instances`. Instances run in parallel and are merged by index, so a
//! report depends only on the family.

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::functional::{check_axioms, Axiom, Functional};
use crate::hyperspace::{embed, homotopy, retraction, uniform_grid, ClosedSubset};
use crate::instances::{
    measure_grid, random_functional, random_measure, random_osf_functional, random_subset, small_subsets, subset_count,
};
use crate::rational::{format_rational, one, rat, zero, Rational};
use crate::seed::{derived_rng, random_rational};
use crate::space::{FiniteSpace, Measure, PointMap, TestFunction};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InstanceFamily {
    pub sizes: Vec<usize>,
    pub den: u32,
    pub max_generators: usize,
    pub seed: String,
    /// Random instances drawn by the seeded checks.
    pub samples: usize,
    /// Largest exhaustive domain before switching to sampling.
    pub max_instances: usize,
}

impl InstanceFamily {
    pub fn new(sizes: Vec<usize>, den: u32, seed: impl Into<String>) -> Self {
        Self { sizes, den, max_generators: 6, seed: seed.into(), samples: 100, max_instances: 4096 }
    }

    pub fn with_max_generators(mut self, k: usize) -> Self {
        self.max_generators = k;
        self
    }

    pub fn with_samples(mut self, samples: usize) -> Self {
        self.samples = samples;
        self
    }

    pub fn with_max_instances(mut self, cap: usize) -> Self {
        self.max_instances = cap;
        self
    }

    /// Grid functionals on `space`: one per generator subset of the grid,
    /// exhaustive when small enough, otherwise `max_instances` seeded subsets.
    pub fn functionals(&self, space: &FiniteSpace) -> Vec<Functional> {
        let grid = measure_grid(space, self.den);
        if grid.is_empty() {
            return Vec::new();
        }
        let k = self.max_generators.max(1);
        let exhaustive = subset_count(grid.len(), k).is_some_and(|c| c <= self.max_instances as u128);
        let subsets = if exhaustive {
            small_subsets(grid.len(), k)
        } else {
            let mut rng = derived_rng(&self.seed, &format!("functionals/{}", space.points().join(",")));
            (0..self.max_instances).map(|_| random_subset(&mut rng, grid.len(), k)).collect()
        };
        subsets
            .par_iter()
            .map(|s| Functional::from_generators(space, s.iter().map(|&i| grid[i].clone()).collect()).expect("nonempty"))
            .collect()
    }

    /// Distinct grid functionals, in canonical order.
    pub fn distinct_functionals(&self, space: &FiniteSpace) -> Vec<Functional> {
        let mut all = self.functionals(space);
        all.sort_by(|a, b| a.vertices().cmp(b.vertices()));
        all.dedup();
        all
    }

    /// All maps `source -> target`, or `max_instances` seeded ones.
    pub fn maps(&self, source: &FiniteSpace, target: &FiniteSpace) -> Vec<PointMap> {
        let count = (target.len() as u128).checked_pow(source.len() as u32);
        if count.is_some_and(|c| c <= self.max_instances as u128) {
            return PointMap::all_maps(source, target);
        }
        let mut rng = derived_rng(&self.seed, &format!("maps/{}/{}", source.len(), target.len()));
        (0..self.max_instances)
            .map(|_| {
                let table = (0..source.len()).map(|_| rng.random_range(0..target.len())).collect();
                PointMap::new(source.clone(), target.clone(), table).expect("indices in range")
            })
            .collect()
    }

    fn params(&self) -> Params {
        Params { sizes: self.sizes.clone(), den: self.den }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Params {
    pub sizes: Vec<usize>,
    pub den: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Failure {
    pub instance: Value,
    pub witness: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LawReport {
    pub law: String,
    pub tested: usize,
    pub failures: Vec<Failure>,
    pub seed: String,
    pub params: Params,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub details: Vec<Value>,
}

impl LawReport {
    fn new(law: &str, fam: &InstanceFamily) -> Self {
        Self { law: law.into(), tested: 0, failures: Vec::new(), seed: fam.seed.clone(), params: fam.params(), details: Vec::new() }
    }

    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }

    fn absorb(&mut self, outcome: Outcome) {
        self.tested += outcome.tested;
        self.failures.extend(outcome.failures);
    }
}

#[derive(Default)]
struct Outcome {
    tested: usize,
    failures: Vec<Failure>,
}

impl Outcome {
    fn merge(mut self, other: Outcome) -> Outcome {
        self.tested += other.tested;
        self.failures.extend(other.failures);
        self
    }

    fn check(&mut self, ok: bool, failure: impl FnOnce() -> Failure) {
        self.tested += 1;
        if !ok {
            self.failures.push(failure());
        }
    }
}

fn merge_all(parts: Vec<Outcome>) -> Outcome {
    parts.into_iter().fold(Outcome::default(), Outcome::merge)
}

/// The operations a checker exercises. Substituting a defective operation
/// lets the test suite confirm that each law notices it.
#[derive(Clone, Copy)]
pub struct Model {
    pub pushforward: fn(&Functional, &PointMap) -> Result<Functional>,
    pub in_pf: fn(&Measure) -> bool,
}

impl Model {
    pub fn reference() -> Self {
        Self { pushforward: |mu, f| mu.pushforward(f), in_pf: Measure::is_in_pf }
    }

    fn push(&self, mu: &Functional, f: &PointMap) -> Result<Functional> {
        (self.pushforward)(mu, f)
    }

    fn in_osf(&self, mu: &Functional) -> bool {
        mu.vertices().iter().all(|v| (self.in_pf)(v))
    }
}

impl Default for Model {
    fn default() -> Self {
        Self::reference()
    }
}

fn to_json<T: Serialize>(value: &T) -> Value {
    serde_json::to_value(value).expect("serializable")
}

fn q(v: &Rational) -> Value {
    Value::String(format_rational(v))
}

fn labels(space: &FiniteSpace, xs: &[usize]) -> Value {
    to_json(&space.labels_of(xs))
}

/// Witness for an expected equality of functionals: a separating function
/// with both values when one exists.
fn inequality_witness(left: &Functional, right: &Functional) -> Value {
    let phi = if left.space() == right.space() { left.separating_function(right).ok().flatten() } else { None };
    let values = phi.as_ref().map(|p| json!({"left": q(&left.eval(p).unwrap()), "right": q(&right.eval(p).unwrap())}));
    json!({"left": to_json(left), "right": to_json(right), "phi": phi.as_ref().map(to_json), "values": values})
}

fn push_or_fail(model: &Model, mu: &Functional, f: &PointMap) -> std::result::Result<Functional, Value> {
    model.push(mu, f).map_err(|e| json!({"error": e.to_string()}))
}

fn triples(sizes: &[usize]) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for &m in sizes {
        for &k in sizes {
            for &l in sizes {
                out.push((m, k, l));
            }
        }
    }
    out
}

/// Identity, composition and `OS_f` stability of the pushforward.
pub fn check_functor_laws(fam: &InstanceFamily, model: &Model) -> LawReport {
    let mut report = LawReport::new("functor", fam);
    let mut sizes = fam.sizes.clone();
    sizes.sort_unstable();
    sizes.dedup();

    for &m in &sizes {
        let x = FiniteSpace::with_size("x", m);
        let id = PointMap::identity(&x);
        let functionals = fam.functionals(&x);
        let outcome = merge_all(
            functionals
                .par_iter()
                .map(|mu| {
                    let mut out = Outcome::default();
                    let pushed = push_or_fail(model, mu, &id);
                    out.check(pushed.as_ref().is_ok_and(|p| p == mu), || Failure {
                        instance: json!({"law": "identity", "space": to_json(&x), "mu": to_json(mu)}),
                        witness: match &pushed {
                            Ok(p) => inequality_witness(p, mu),
                            Err(e) => e.clone(),
                        },
                    });
                    out
                })
                .collect(),
        );
        report.absorb(outcome);
    }

    for (m, k, l) in triples(&sizes) {
        let x = FiniteSpace::with_size("x", m);
        let y = FiniteSpace::with_size("y", k);
        let z = FiniteSpace::with_size("z", l);
        let fs = fam.maps(&x, &y);
        let gs = fam.maps(&y, &z);
        let functionals = fam.functionals(&x);
        let outcome = merge_all(
            functionals
                .par_iter()
                .map(|mu| {
                    let mut out = Outcome::default();
                    let mu_osf = model.in_osf(mu);
                    for f in &fs {
                        let fmu = match push_or_fail(model, mu, f) {
                            Ok(v) => v,
                            Err(e) => {
                                out.check(false, || Failure {
                                    instance: json!({"law": "composition", "f": to_json(f), "mu": to_json(mu)}),
                                    witness: e,
                                });
                                continue;
                            }
                        };
                        if l == sizes[0] {
                            // Stability is independent of g; check it once per f.
                            out.check(!mu_osf || model.in_osf(&fmu), || Failure {
                                instance: json!({"law": "osf_stability", "f": to_json(f), "mu": to_json(mu)}),
                                witness: json!({"image": to_json(&fmu), "pf": to_json(&fmu.osf_report())}),
                            });
                        }
                        for g in gs.iter() {
                            let gf = f.then(g).expect("composable");
                            let direct = push_or_fail(model, mu, &gf);
                            let stepwise = push_or_fail(model, &fmu, g);
                            let ok = matches!((&direct, &stepwise), (Ok(a), Ok(b)) if a == b);
                            out.check(ok, || Failure {
                                instance: json!({"law": "composition", "f": to_json(f), "g": to_json(g), "mu": to_json(mu)}),
                                witness: match (&direct, &stepwise) {
                                    (Ok(a), Ok(b)) => inequality_witness(a, b),
                                    (Err(e), _) | (_, Err(e)) => e.clone(),
                                },
                            });
                        }
                    }
                    out
                })
                .collect(),
        );
        report.absorb(outcome);
    }
    report
}

/// Injective maps induce injective pushforwards.
pub fn check_mono(f: &PointMap, fam: &InstanceFamily, model: &Model) -> Result<LawReport> {
    if !f.is_injective() {
        return Err(Error::Precondition(format!("map {f:?} is not injective")));
    }
    let mut report = LawReport::new("mono", fam);
    let functionals = fam.distinct_functionals(f.source());
    let images: Vec<std::result::Result<Functional, Value>> =
        functionals.par_iter().map(|mu| push_or_fail(model, mu, f)).collect();
    let outcome = merge_all(
        (0..functionals.len())
            .into_par_iter()
            .map(|i| {
                let mut out = Outcome::default();
                for j in i + 1..functionals.len() {
                    let ok = matches!((&images[i], &images[j]), (Ok(a), Ok(b)) if a != b);
                    out.check(ok, || Failure {
                        instance: json!({"map": to_json(f), "mu": to_json(&functionals[i]), "nu": to_json(&functionals[j])}),
                        witness: json!({
                            "source_separator": functionals[i].separating_function(&functionals[j]).ok().flatten().as_ref().map(to_json),
                            "image_separator": match (&images[i], &images[j]) {
                                (Ok(a), Ok(b)) => a.separating_function(b).ok().flatten().as_ref().map(to_json),
                                _ => None,
                            },
                        }),
                    });
                }
                out
            })
            .collect(),
    );
    report.absorb(outcome);
    Ok(report)
}

/// A preimage of `nu` under the pushforward of a surjection `f`: each vertex
/// is lifted atomwise along the section sending `y` to the first point of its
/// fiber.
pub fn check_epi(f: &PointMap, nu: &Functional) -> Result<Functional> {
    if !f.is_surjective() {
        return Err(Error::Precondition(format!("map {f:?} is not surjective")));
    }
    f.target().ensure_same(nu.space())?;
    let section: Vec<usize> =
        (0..f.target().len()).map(|y| f.preimage(&[y])[0]).collect();
    let lifted = nu
        .vertices()
        .iter()
        .map(|v| {
            let mut weights = vec![zero(); f.source().len()];
            for (y, w) in v.atoms() {
                weights[section[y]] = w.clone();
            }
            Measure::new(f.source().clone(), weights)
        })
        .collect::<Result<Vec<_>>>()?;
    let mu = Functional::from_generators(f.source(), lifted)?;
    if mu.pushforward(f)? != *nu {
        return Err(Error::Precondition(format!("lift of {nu:?} does not push forward to it")));
    }
    Ok(mu)
}

/// Every functional on the target of a surjection has a preimage, and the
/// section lift preserves `OS_f` membership.
pub fn check_epi_law(f: &PointMap, fam: &InstanceFamily, model: &Model) -> Result<LawReport> {
    if !f.is_surjective() {
        return Err(Error::Precondition(format!("map {f:?} is not surjective")));
    }
    let mut report = LawReport::new("epi", fam);
    let targets = fam.functionals(f.target());
    let outcome = merge_all(
        targets
            .par_iter()
            .map(|nu| {
                let mut out = Outcome::default();
                let lifted = check_epi(f, nu);
                let pushed = lifted.as_ref().map_err(|e| json!({"error": e.to_string()})).and_then(|mu| push_or_fail(model, mu, f));
                let ok = matches!((&lifted, &pushed), (Ok(mu), Ok(p)) if p == nu && model.in_osf(mu) == model.in_osf(nu));
                out.check(ok, || Failure {
                    instance: json!({"map": to_json(f), "nu": to_json(nu)}),
                    witness: match (&lifted, &pushed) {
                        (Ok(mu), Ok(p)) => json!({"lift": to_json(mu), "pushed": inequality_witness(p, nu)}),
                        (Err(e), _) => json!({"error": e.to_string()}),
                        (_, Err(e)) => e.clone(),
                    },
                });
                out
            })
            .collect(),
    );
    report.absorb(outcome);
    Ok(report)
}

/// A one-point space carries exactly one functional; the empty space none.
pub fn check_point_empty(fam: &InstanceFamily) -> LawReport {
    let mut report = LawReport::new("point_empty", fam);
    let mut out = Outcome::default();
    let point = FiniteSpace::with_size("p", 1);
    let dirac = Functional::dirac(&point, 0).expect("one point");
    for den in 1..=fam.den.max(1) {
        let sub = InstanceFamily { den, ..fam.clone() };
        let distinct = sub.distinct_functionals(&point);
        out.check(distinct == vec![dirac.clone()], || Failure {
            instance: json!({"law": "point", "den": den}),
            witness: to_json(&distinct),
        });
    }
    let empty = FiniteSpace::empty();
    let measure = Measure::new(empty.clone(), Vec::new());
    out.check(measure.is_err(), || Failure {
        instance: json!({"law": "empty_measure"}),
        witness: json!({"constructed": measure.as_ref().ok().map(to_json)}),
    });
    let functional = Functional::from_generators(&empty, Vec::new());
    out.check(functional == Err(Error::EmptyGenerators), || Failure {
        instance: json!({"law": "empty_functional"}),
        witness: json!({"result": format!("{functional:?}")}),
    });
    out.check(measure_grid(&empty, fam.den.max(1)).is_empty(), || Failure {
        instance: json!({"law": "empty_grid"}),
        witness: Value::Null,
    });
    report.absorb(out);
    report
}

/// Functionals on a closed subspace `A`, viewed in `X` through the inclusion,
/// stay carried by `A` and keep their `OS_f` membership.
pub fn check_subspace(a: &ClosedSubset, fam: &InstanceFamily, model: &Model) -> LawReport {
    let mut report = LawReport::new("subspace", fam);
    let x = a.space();
    let sub = FiniteSpace::new(a.labels()).expect("labels of a space are distinct");
    let inclusion = PointMap::new(sub.clone(), x.clone(), a.members().to_vec()).expect("members index the space");
    let functionals = fam.functionals(&sub);
    let outcome = merge_all(
        functionals
            .par_iter()
            .map(|mu| {
                let mut out = Outcome::default();
                let viewed = push_or_fail(model, mu, &inclusion);
                let ok = matches!(&viewed, Ok(v) if v.is_carried_by(a.members())
                    && v.support() == inclusion.image(&mu.support())
                    && model.in_osf(v) == model.in_osf(mu));
                out.check(ok, || Failure {
                    instance: json!({"subset": to_json(a), "mu": to_json(mu)}),
                    witness: match &viewed {
                        Ok(v) => json!({"viewed": to_json(v), "support": to_json(&v.support_labels())}),
                        Err(e) => e.clone(),
                    },
                });
                out
            })
            .collect(),
    );
    report.absorb(outcome);
    report
}

/// `supp μ ⊆ f⁻¹(B)` iff `supp f_*μ ⊆ B`.
pub fn check_preimage(f: &PointMap, b: &ClosedSubset, fam: &InstanceFamily, model: &Model) -> Result<LawReport> {
    f.target().ensure_same(b.space())?;
    let mut report = LawReport::new("preimage", fam);
    let pre = f.preimage(b.members());
    let functionals = fam.functionals(f.source());
    let results: Vec<(Outcome, bool)> = functionals
        .par_iter()
        .map(|mu| {
            let mut out = Outcome::default();
            let left = !pre.is_empty() && mu.is_carried_by(&pre);
            let pushed = push_or_fail(model, mu, f);
            let right = matches!(&pushed, Ok(p) if p.is_carried_by(b.members()));
            out.check(pushed.is_ok() && left == right, || Failure {
                instance: json!({"map": to_json(f), "subset": to_json(b), "mu": to_json(mu)}),
                witness: json!({
                    "preimage": labels(f.source(), &pre),
                    "carried_by_preimage": left,
                    "image_carried_by_subset": right,
                    "image": pushed.as_ref().ok().map(to_json),
                }),
            });
            (out, left)
        })
        .collect();
    let qualifying = results.iter().filter(|(_, q)| *q).count();
    report.absorb(merge_all(results.into_iter().map(|(o, _)| o).collect()));
    report.details.push(json!({"preimage": labels(f.source(), &pre), "qualifying": qualifying}));
    Ok(report)
}

/// `supp μ ⊆ A ∩ B` iff `supp μ ⊆ A` and `supp μ ⊆ B`.
pub fn check_intersection(a: &ClosedSubset, b: &ClosedSubset, fam: &InstanceFamily) -> Result<LawReport> {
    a.space().ensure_same(b.space())?;
    let mut report = LawReport::new("intersection", fam);
    let both: Vec<usize> = a.members().iter().copied().filter(|x| b.members().contains(x)).collect();
    let functionals = fam.functionals(a.space());
    let results: Vec<(Outcome, bool)> = functionals
        .par_iter()
        .map(|mu| {
            let mut out = Outcome::default();
            let support = mu.support();
            let left = support.iter().all(|x| both.contains(x));
            let right = mu.is_carried_by(a.members()) && mu.is_carried_by(b.members());
            out.check(left == right, || Failure {
                instance: json!({"a": to_json(a), "b": to_json(b), "mu": to_json(mu)}),
                witness: json!({"support": labels(a.space(), &support), "in_intersection": left, "in_both": right}),
            });
            (out, left)
        })
        .collect();
    let qualifying = results.iter().filter(|(_, q)| *q).count();
    report.absorb(merge_all(results.into_iter().map(|(o, _)| o).collect()));
    report.details.push(json!({"intersection": labels(a.space(), &both), "qualifying": qualifying}));
    Ok(report)
}

/// The smallest set carrying every vertex, found by scanning all subsets.
pub fn minimal_carrier(mu: &Functional) -> Vec<usize> {
    let n = mu.space().len();
    let mut meet: u64 = (1u64 << n) - 1;
    for mask in 0u64..1 << n {
        let set: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        if mu.vertices().iter().all(|v| v.is_carried_by(&set)) {
            meet &= mask;
        }
    }
    (0..n).filter(|i| meet >> i & 1 == 1).collect()
}

/// The brute-force minimal carrier agrees with the union of vertex supports.
pub fn check_support_definition(fam: &InstanceFamily) -> Result<LawReport> {
    if let Some(&big) = fam.sizes.iter().find(|&&s| s > 5) {
        return Err(Error::OutOfRange { name: "size", value: big.to_string(), range: "≤ 5" });
    }
    let mut report = LawReport::new("support_definition", fam);
    for &size in &fam.sizes {
        let x = FiniteSpace::with_size("x", size);
        let functionals = fam.functionals(&x);
        let outcome = merge_all(
            functionals
                .par_iter()
                .map(|mu| {
                    let mut out = Outcome::default();
                    let brute = minimal_carrier(mu);
                    let formula = mu.support();
                    out.check(brute == formula, || Failure {
                        instance: json!({"mu": to_json(mu)}),
                        witness: json!({"minimal_carrier": labels(&x, &brute), "union_of_supports": labels(&x, &formula)}),
                    });
                    out
                })
                .collect(),
        );
        report.absorb(outcome);
    }
    Ok(report)
}

/// The dominance predicate on every grid measure: it agrees with
/// `max α ≥ 1 − 1/(n+1)`, holds for Diracs, and singles out exactly one atom.
pub fn check_pf_dominance(fam: &InstanceFamily, model: &Model) -> LawReport {
    let mut report = LawReport::new("pf_dominance", fam);
    for &size in &fam.sizes {
        let x = FiniteSpace::with_size("x", size);
        let mut grid = measure_grid(&x, fam.den);
        for den in [1, 2, 3] {
            grid.extend(measure_grid(&x, den));
        }
        grid.sort();
        grid.dedup();
        let mut out = Outcome::default();
        for xi in &grid {
            let n = xi.support_size() as i64;
            let bar = one() - rat(1, n + 1);
            let meeting: Vec<usize> = xi.atoms().filter(|(_, w)| **w >= bar).map(|(i, _)| i).collect();
            let claimed = (model.in_pf)(xi);
            let ok = claimed == !meeting.is_empty() && meeting.len() <= 1 && (n != 1 || claimed);
            out.check(ok, || Failure {
                instance: json!({"measure": to_json(xi)}),
                witness: json!({"n": n, "threshold": q(&bar), "predicate": claimed, "atoms_meeting_threshold": labels(&x, &meeting)}),
            });
        }
        report.absorb(out);
    }
    report
}

/// `r(μ_F) = F` for every nonempty `F`, listing each subset and its image.
pub fn check_retraction(fam: &InstanceFamily) -> LawReport {
    let mut report = LawReport::new("retraction", fam);
    for &size in &fam.sizes {
        let x = FiniteSpace::with_size("x", size);
        let subsets = ClosedSubset::all(&x);
        let rows: Vec<(Outcome, Value)> = subsets
            .par_iter()
            .map(|f| {
                let mut out = Outcome::default();
                let image = retraction(&embed(f));
                let ok = image.as_ref() == Ok(f);
                out.check(ok, || Failure {
                    instance: json!({"subset": to_json(f)}),
                    witness: json!({"image": image.as_ref().ok().map(to_json), "error": image.as_ref().err().map(|e| e.to_string())}),
                });
                let detail = json!({"subset": f.labels(), "image": image.as_ref().ok().map(|s| s.labels()), "fixed": ok});
                (out, detail)
            })
            .collect();
        for (o, d) in rows {
            report.absorb(o);
            report.details.push(d);
        }
    }
    report
}

/// Random instance `i` of a seeded check lives in its own stream.
fn instance_space(fam: &InstanceFamily, rng: &mut impl Rng) -> FiniteSpace {
    let size = fam.sizes[rng.random_range(0..fam.sizes.len())];
    FiniteSpace::with_size("x", size)
}

/// The eleven points `0, 1/10, …, 1`.
pub fn deciles() -> Vec<Rational> {
    uniform_grid(10).expect("positive")
}

/// Endpoint identities and axioms along the path for seeded `OS_f`
/// functionals, and pointwise fixing of `exp X`.
pub fn check_homotopy(fam: &InstanceFamily, trials: usize) -> LawReport {
    let mut report = LawReport::new("homotopy", fam);
    let ts = deciles();
    let parts: Vec<(Outcome, bool)> = (0..fam.samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = derived_rng(&fam.seed, &format!("homotopy/{i}"));
            let x = instance_space(fam, &mut rng);
            let mu = random_osf_functional(&mut rng, &x, fam.max_generators, fam.den.max(2));
            let mut out = Outcome::default();
            let target = embed(&retraction(&mu).expect("OS_f instance"));
            let h0 = homotopy(&mu, &zero()).expect("valid t");
            out.check(h0 == mu, || Failure {
                instance: json!({"law": "h0_identity", "mu": to_json(&mu)}),
                witness: inequality_witness(&h0, &mu),
            });
            let h1 = homotopy(&mu, &one()).expect("valid t");
            out.check(h1 == target, || Failure {
                instance: json!({"law": "h1_retraction", "mu": to_json(&mu)}),
                witness: inequality_witness(&h1, &target),
            });
            let mut leaves_osf = false;
            for t in &ts {
                let h = homotopy(&mu, t).expect("valid t");
                leaves_osf |= !h.is_in_osf();
                let axioms = check_axioms(&h.as_black_box(), trials, &format!("{}/homotopy/{i}", fam.seed));
                out.check(axioms.all_pass(), || Failure {
                    instance: json!({"law": "axioms_along_path", "mu": to_json(&mu), "t": q(t)}),
                    witness: to_json(&axioms),
                });
            }
            (out, leaves_osf)
        })
        .collect();
    let leaving = parts.iter().filter(|(_, l)| *l).count();
    report.absorb(merge_all(parts.into_iter().map(|(o, _)| o).collect()));
    report.details.push(json!({"instances": fam.samples, "leave_osf_somewhere": leaving, "grid": ts.iter().map(q).collect::<Vec<_>>()}));

    for &size in &fam.sizes {
        let x = FiniteSpace::with_size("x", size);
        let subsets = ClosedSubset::all(&x);
        let outcome = merge_all(
            subsets
                .par_iter()
                .map(|f| {
                    let mut out = Outcome::default();
                    let mu_f = embed(f);
                    for t in &ts {
                        let h = homotopy(&mu_f, t);
                        out.check(h.as_ref() == Ok(&mu_f), || Failure {
                            instance: json!({"law": "fixes_exp_x", "subset": to_json(f), "t": q(t)}),
                            witness: json!({"result": h.as_ref().ok().map(to_json)}),
                        });
                    }
                    out
                })
                .collect(),
        );
        report.absorb(outcome);
    }
    report
}

/// The five axioms on every grid functional of every size.
pub fn check_axioms_grid(fam: &InstanceFamily, trials: usize) -> LawReport {
    let mut report = LawReport::new("axioms_grid", fam);
    for &size in &fam.sizes {
        let x = FiniteSpace::with_size("x", size);
        let functionals = fam.functionals(&x);
        let outcome = merge_all(
            functionals
                .par_iter()
                .enumerate()
                .map(|(i, mu)| axiom_outcome(mu, trials, &format!("{}/axioms/{size}/{i}", fam.seed)))
                .collect(),
        );
        report.absorb(outcome);
    }
    report
}

/// The five axioms on `fam.samples` seeded random functionals.
pub fn check_axioms_random(fam: &InstanceFamily, trials: usize) -> LawReport {
    let mut report = LawReport::new("axioms_random", fam);
    let outcome = merge_all(
        (0..fam.samples)
            .into_par_iter()
            .map(|i| {
                let mut rng = derived_rng(&fam.seed, &format!("axioms_random/{i}"));
                let x = instance_space(fam, &mut rng);
                let mu = random_functional(&mut rng, &x, fam.max_generators, fam.den.max(2));
                axiom_outcome(&mu, trials, &format!("{}/axioms_random/{i}", fam.seed))
            })
            .collect(),
    );
    report.absorb(outcome);
    report
}

fn axiom_outcome(mu: &Functional, trials: usize, seed: &str) -> Outcome {
    let mut out = Outcome::default();
    let axioms = check_axioms(&mu.as_black_box(), trials, seed);
    for axiom in Axiom::ALL {
        let verdict = axioms.verdict(axiom);
        out.check(verdict.pass, || Failure {
            instance: json!({"mu": to_json(mu), "axiom": axiom.name()}),
            witness: to_json(verdict),
        });
    }
    out
}

fn random_test_function<R: Rng>(rng: &mut R, space: &FiniteSpace) -> TestFunction {
    let values = (0..space.len()).map(|_| random_rational(rng, -16..=16, &[1, 2, 3, 4])).collect();
    TestFunction::new(space.clone(), values).expect("one value per point")
}

/// Evaluating over generators equals evaluating over extreme points, and
/// generator lists with the same hull give the same functional.
pub fn check_representation(fam: &InstanceFamily, tests_per_instance: usize) -> LawReport {
    let mut report = LawReport::new("representation", fam);
    let outcome = merge_all(
        (0..fam.samples)
            .into_par_iter()
            .map(|i| {
                let mut rng = derived_rng(&fam.seed, &format!("representation/{i}"));
                let x = instance_space(fam, &mut rng);
                let count = rng.random_range(1..=fam.max_generators.max(1));
                let gens: Vec<Measure> = (0..count).map(|_| random_measure(&mut rng, &x, fam.den.max(2))).collect();
                let mu = Functional::from_generators(&x, gens.clone()).expect("nonempty");
                let mut out = Outcome::default();
                for _ in 0..tests_per_instance {
                    let phi = random_test_function(&mut rng, &x);
                    let over_gens = gens.iter().map(|g| g.eval(&phi).unwrap()).max().expect("nonempty");
                    let over_vertices = mu.eval(&phi).unwrap();
                    out.check(over_gens == over_vertices, || Failure {
                        instance: json!({"law": "generators_vs_vertices", "generators": to_json(&gens), "phi": to_json(&phi)}),
                        witness: json!({"over_generators": q(&over_gens), "over_vertices": q(&over_vertices)}),
                    });
                }
                // Same hull: shuffle, then pad with convex combinations.
                let mut same_hull = gens.clone();
                same_hull.shuffle(&mut rng);
                for _ in 0..rng.random_range(0..=3) {
                    let a = &gens[rng.random_range(0..gens.len())];
                    let b = &gens[rng.random_range(0..gens.len())];
                    let t = rat(rng.random_range(0..=4), 4);
                    same_hull.push(a.mix(b, &t).expect("t in range"));
                }
                let nu = Functional::from_generators(&x, same_hull.clone()).expect("nonempty");
                out.check(mu.functional_eq(&nu).unwrap_or(false), || Failure {
                    instance: json!({"law": "hull_equal_lists", "generators": to_json(&gens), "other": to_json(&same_hull)}),
                    witness: inequality_witness(&mu, &nu),
                });
                out
            })
            .collect(),
    );
    report.absorb(outcome);
    report
}

/// Mono, epi, subspace, preimage and intersection over every map and subset
/// pair between spaces of the family's sizes, plus the point/empty check.
pub fn check_normality(fam: &InstanceFamily, model: &Model) -> Vec<LawReport> {
    let mut sizes = fam.sizes.clone();
    sizes.sort_unstable();
    sizes.dedup();
    let mut mono = LawReport::new("mono", fam);
    let mut epi = LawReport::new("epi", fam);
    let mut preimage = LawReport::new("preimage", fam);
    for &m in &sizes {
        for &k in &sizes {
            let x = FiniteSpace::with_size("x", m);
            let y = FiniteSpace::with_size("y", k);
            for f in fam.maps(&x, &y) {
                if f.is_injective() {
                    merge_into(&mut mono, check_mono(&f, fam, model).expect("injective"));
                }
                if f.is_surjective() {
                    merge_into(&mut epi, check_epi_law(&f, fam, model).expect("surjective"));
                }
                for b in ClosedSubset::all(&y) {
                    merge_into(&mut preimage, check_preimage(&f, &b, fam, model).expect("same space"));
                }
            }
        }
    }
    let mut subspace = LawReport::new("subspace", fam);
    let mut intersection = LawReport::new("intersection", fam);
    for &m in &sizes {
        let x = FiniteSpace::with_size("x", m);
        let subsets = ClosedSubset::all(&x);
        for a in &subsets {
            merge_into(&mut subspace, check_subspace(a, fam, model));
            for b in &subsets {
                merge_into(&mut intersection, check_intersection(a, b, fam).expect("same space"));
            }
        }
    }
    vec![mono, epi, check_point_empty(fam), subspace, preimage, intersection]
}

fn merge_into(into: &mut LawReport, part: LawReport) {
    into.tested += part.tested;
    into.failures.extend(part.failures);
}
