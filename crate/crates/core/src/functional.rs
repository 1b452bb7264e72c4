//! Semiadditive functionals `ν_A(φ) = max_{ξ ∈ A} ξ(φ)` with `A` a finitely
//! generated convex set of probability measures, plus a randomized checker for
//! the five defining axioms on arbitrary black-box functionals.

use std::fmt;
use std::sync::Arc;

use num_traits::Signed;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::polytope::{self, max_eval, MeasurePolytope};
use crate::rational::{format_rational, one, Rational};
use crate::seed::{derived_rng, random_rational};
use crate::space::{FiniteSpace, Measure, PfVerdict, PointMap, TestFunction};

/// An element of `OS(X)`, stored as the canonical (vertex) form of its
/// measure polytope. Two functionals are equal iff their vertex lists are.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Functional {
    body: MeasurePolytope,
}

impl Functional {
    pub fn from_generators(space: &FiniteSpace, gens: Vec<Measure>) -> Result<Self> {
        if gens.is_empty() {
            return Err(Error::EmptyGenerators);
        }
        for g in &gens {
            space.ensure_same(g.space())?;
        }
        Ok(Self::from_polytope(&MeasurePolytope::new(gens)?))
    }

    pub fn from_polytope(body: &MeasurePolytope) -> Self {
        Self { body: body.canonical() }
    }

    pub fn dirac(space: &FiniteSpace, x: usize) -> Result<Self> {
        Self::from_generators(space, vec![Measure::dirac(space, x)?])
    }

    pub fn space(&self) -> &FiniteSpace {
        self.body.space()
    }

    pub fn body(&self) -> &MeasurePolytope {
        &self.body
    }

    pub fn vertices(&self) -> &[Measure] {
        self.body.vertices()
    }

    pub fn eval(&self, phi: &TestFunction) -> Result<Rational> {
        self.body.support_value(phi)
    }

    /// Union of the vertex supports, sorted.
    pub fn support(&self) -> Vec<usize> {
        let mut carried = vec![false; self.space().len()];
        for v in self.vertices() {
            for (x, _) in v.atoms() {
                carried[x] = true;
            }
        }
        carried.iter().enumerate().filter(|(_, &c)| c).map(|(x, _)| x).collect()
    }

    pub fn support_labels(&self) -> Vec<String> {
        self.space().labels_of(&self.support())
    }

    pub fn is_carried_by(&self, set: &[usize]) -> bool {
        self.vertices().iter().all(|v| v.is_carried_by(set))
    }

    /// `|supp μ| ≤ n`.
    pub fn is_in_osn(&self, n: usize) -> Result<bool> {
        if n == 0 {
            return Err(Error::OutOfRange { name: "n", value: "0".into(), range: "n ≥ 1" });
        }
        Ok(self.support().len() <= n)
    }

    pub fn osf_report(&self) -> OsfReport {
        let vertices: Vec<PfVerdict> = self.vertices().iter().map(Measure::pf_verdict).collect();
        OsfReport { in_osf: vertices.iter().all(|v| v.in_pf), vertices }
    }

    /// Every extreme measure lies in `P_f`.
    pub fn is_in_osf(&self) -> bool {
        self.vertices().iter().all(Measure::is_in_pf)
    }

    /// `OS(f)(μ)(φ) = μ(φ ∘ f)`, realized by pushing each vertex forward.
    pub fn pushforward(&self, f: &PointMap) -> Result<Functional> {
        self.space().ensure_same(f.source())?;
        let gens = self.vertices().iter().map(|v| v.pushforward(f)).collect::<Result<Vec<_>>>()?;
        Self::from_generators(f.target(), gens)
    }

    /// `(1 − t)·self + t·other`.
    pub fn convex_combination(&self, other: &Functional, t: &Rational) -> Result<Functional> {
        Ok(Self::from_polytope(&polytope::minkowski_combination(&self.body, &other.body, t)?))
    }

    pub fn functional_eq(&self, other: &Functional) -> Result<bool> {
        polytope::polytope_eq(&self.body, &other.body)
    }

    pub fn separating_function(&self, other: &Functional) -> Result<Option<TestFunction>> {
        polytope::separating_function(&self.body, &other.body)
    }

    /// `max_{φ ∈ tests} |μ(φ) − ν(φ)|`.
    pub fn dist_on_tests(&self, other: &Functional, tests: &[TestFunction]) -> Result<Rational> {
        self.space().ensure_same(other.space())?;
        if tests.is_empty() {
            return Err(Error::InvalidFunction("empty test family".into()));
        }
        let mut best = Rational::default();
        for phi in tests {
            let d = (self.eval(phi)? - other.eval(phi)?).abs();
            if d > best {
                best = d;
            }
        }
        Ok(best)
    }

    pub fn as_black_box(&self) -> BlackBoxFunctional {
        let vertices = self.vertices().to_vec();
        BlackBoxFunctional::new(self.space().clone(), move |phi| max_eval(&vertices, phi.values()))
    }
}

impl fmt::Debug for Functional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Functional").field("vertices", &self.vertices()).finish()
    }
}

impl Serialize for Functional {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Functional", 1)?;
        st.serialize_field("vertices", self.vertices())?;
        st.end()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OsfReport {
    pub in_osf: bool,
    pub vertices: Vec<PfVerdict>,
}

type Rule = dyn Fn(&TestFunction) -> Rational + Send + Sync;

/// An arbitrary map `C(X) → ℝ`, known only through evaluation.
#[derive(Clone)]
pub struct BlackBoxFunctional {
    space: FiniteSpace,
    rule: Arc<Rule>,
}

impl BlackBoxFunctional {
    pub fn new<F>(space: FiniteSpace, rule: F) -> Self
    where
        F: Fn(&TestFunction) -> Rational + Send + Sync + 'static,
    {
        Self { space, rule: Arc::new(rule) }
    }

    pub fn space(&self) -> &FiniteSpace {
        &self.space
    }

    pub fn eval(&self, phi: &TestFunction) -> Rational {
        (self.rule)(phi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Axiom {
    WeaklyAdditive,
    OrderPreserving,
    Normed,
    PositivelyHomogeneous,
    Semiadditive,
}

impl Axiom {
    pub const ALL: [Axiom; 5] =
        [Axiom::WeaklyAdditive, Axiom::OrderPreserving, Axiom::Normed, Axiom::PositivelyHomogeneous, Axiom::Semiadditive];

    pub fn name(self) -> &'static str {
        match self {
            Axiom::WeaklyAdditive => "weakly_additive",
            Axiom::OrderPreserving => "order_preserving",
            Axiom::Normed => "normed",
            Axiom::PositivelyHomogeneous => "positively_homogeneous",
            Axiom::Semiadditive => "semiadditive",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxiomVerdict {
    pub axiom: Axiom,
    pub pass: bool,
    /// First counterexample found, if any.
    pub witness: Option<Value>,
    pub seed: String,
    pub trials: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxiomReport {
    pub verdicts: Vec<AxiomVerdict>,
}

impl AxiomReport {
    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    pub fn verdict(&self, axiom: Axiom) -> &AxiomVerdict {
        self.verdicts.iter().find(|v| v.axiom == axiom).expect("every axiom is reported")
    }
}

const NUMERATORS: std::ops::RangeInclusive<i64> = -16..=16;
const DENOMINATORS: [i64; 4] = [1, 2, 3, 4];

fn random_function<R: rand::Rng>(rng: &mut R, space: &FiniteSpace, nonnegative: bool) -> TestFunction {
    let range = if nonnegative { 0..=*NUMERATORS.end() } else { NUMERATORS };
    let values = (0..space.len()).map(|_| random_rational(rng, range.clone(), &DENOMINATORS)).collect();
    TestFunction::new(space.clone(), values).expect("one value per point")
}

fn fun_json(phi: &TestFunction) -> Value {
    serde_json::to_value(phi).expect("serializable")
}

fn q(v: &Rational) -> Value {
    Value::String(format_rational(v))
}

/// Tests the five axioms on `trials` random inputs drawn from `seed`.
///
/// Inputs are rationals with numerators in `[-16, 16]` and denominators in
/// `{1, 2, 3, 4}`; scale factors and order increments use nonnegative
/// numerators. A pass is evidence, not proof.
pub fn check_axioms(mu: &BlackBoxFunctional, trials: usize, seed: &str) -> AxiomReport {
    let space = mu.space();
    let mut rng = derived_rng(seed, "axioms");
    let mut witnesses: [Option<Value>; 5] = Default::default();
    let unit = TestFunction::unit(space);

    for _ in 0..trials.max(1) {
        let phi = random_function(&mut rng, space, false);
        let psi = random_function(&mut rng, space, false);
        let bump = random_function(&mut rng, space, true);
        let c = random_rational(&mut rng, NUMERATORS, &DENOMINATORS);
        let t = random_rational(&mut rng, 0..=*NUMERATORS.end(), &DENOMINATORS);
        let mu_phi = mu.eval(&phi);

        if witnesses[0].is_none() {
            let lhs = mu.eval(&phi.add_constant(&c));
            let rhs = &mu_phi + &c;
            if lhs != rhs {
                witnesses[0] = Some(json!({"phi": fun_json(&phi), "c": q(&c), "lhs": q(&lhs), "rhs": q(&rhs)}));
            }
        }
        if witnesses[1].is_none() {
            let upper = phi.add(&bump).expect("same space");
            let hi = mu.eval(&upper);
            if mu_phi > hi {
                witnesses[1] = Some(json!({"phi": fun_json(&phi), "psi": fun_json(&upper), "mu_phi": q(&mu_phi), "mu_psi": q(&hi)}));
            }
        }
        if witnesses[2].is_none() {
            let v = mu.eval(&unit);
            if v != one() {
                witnesses[2] = Some(json!({"phi": fun_json(&unit), "value": q(&v)}));
            }
        }
        if witnesses[3].is_none() {
            let lhs = mu.eval(&phi.scale(&t));
            let rhs = &t * &mu_phi;
            if lhs != rhs {
                witnesses[3] = Some(json!({"phi": fun_json(&phi), "t": q(&t), "lhs": q(&lhs), "rhs": q(&rhs)}));
            }
        }
        if witnesses[4].is_none() {
            let lhs = mu.eval(&phi.add(&psi).expect("same space"));
            let rhs = &mu_phi + mu.eval(&psi);
            if lhs > rhs {
                witnesses[4] = Some(json!({"phi": fun_json(&phi), "psi": fun_json(&psi), "lhs": q(&lhs), "rhs": q(&rhs)}));
            }
        }
    }

    let verdicts = Axiom::ALL
        .iter()
        .zip(witnesses)
        .map(|(&axiom, witness)| AxiomVerdict {
            axiom,
            pass: witness.is_none(),
            witness,
            seed: seed.to_string(),
            trials: trials.max(1),
        })
        .collect();
    AxiomReport { verdicts }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat, zero};

    fn abc() -> FiniteSpace {
        FiniteSpace::new(["a", "b", "c"]).unwrap()
    }

    fn m(space: &FiniteSpace, atoms: &[(&str, Rational)]) -> Measure {
        Measure::from_atoms(space.clone(), atoms.iter().cloned()).unwrap()
    }

    fn d(space: &FiniteSpace, label: &str) -> Measure {
        Measure::dirac_at(space, label).unwrap()
    }

    fn reference(x: &FiniteSpace) -> Functional {
        Functional::from_generators(x, vec![m(x, &[("a", rat(3, 4)), ("b", rat(1, 4))]), d(x, "c")]).unwrap()
    }

    fn phi(x: &FiniteSpace, vals: &[i64]) -> TestFunction {
        TestFunction::new(x.clone(), vals.iter().map(|&v| int(v)).collect()).unwrap()
    }

    #[test]
    fn from_generators_canonicalizes() {
        let x = abc();
        let mid = m(&x, &[("a", rat(1, 2)), ("b", rat(1, 2))]);
        let a = Functional::from_generators(&x, vec![d(&x, "a"), d(&x, "b"), mid]).unwrap();
        let b = Functional::from_generators(&x, vec![d(&x, "b"), d(&x, "a")]).unwrap();
        assert_eq!(a, b);
        assert_eq!(reference(&x).vertices().len(), 2);
        assert_eq!(Functional::from_generators(&x, vec![]).unwrap_err(), Error::EmptyGenerators);
    }

    #[test]
    fn eval_examples() {
        let x = abc();
        assert_eq!(reference(&x).eval(&phi(&x, &[2, -1, 4])).unwrap(), int(4));
        let dirac = Functional::dirac(&x, 0).unwrap();
        assert_eq!(dirac.eval(&phi(&x, &[7, 1, 2])).unwrap(), int(7));
        let everything = Functional::from_generators(&x, vec![d(&x, "a"), d(&x, "b"), d(&x, "c")]).unwrap();
        assert_eq!(everything.eval(&phi(&x, &[-3, 5, 2])).unwrap(), int(5));
        assert_eq!(reference(&x).eval(&TestFunction::constant(&x, rat(-7, 3))).unwrap(), rat(-7, 3));
    }

    #[test]
    fn support_and_osn() {
        let x = abc();
        let r = reference(&x);
        assert_eq!(r.support(), vec![0, 1, 2]);
        assert_eq!(Functional::dirac(&x, 1).unwrap().support(), vec![1]);
        assert!(Functional::dirac(&x, 1).unwrap().is_in_osn(1).unwrap());
        assert!(!r.is_in_osn(2).unwrap());
        assert!(r.is_in_osn(3).unwrap());
        assert!(r.is_in_osn(0).is_err());
    }

    #[test]
    fn osf_membership() {
        let x = abc();
        let report = reference(&x).osf_report();
        assert!(report.in_osf);
        assert_eq!(report.vertices.iter().map(|v| v.threshold.clone()).collect::<Vec<_>>(), vec![rat(1, 2), rat(2, 3)]);
        let spread = Functional::from_generators(&x, vec![m(&x, &[("a", rat(1, 2)), ("b", rat(1, 4)), ("c", rat(1, 4))])]).unwrap();
        assert!(!spread.is_in_osf());
        let all = Functional::from_generators(&x, vec![d(&x, "a"), d(&x, "b"), d(&x, "c")]).unwrap();
        assert!(all.is_in_osf());
    }

    #[test]
    fn pushforward_examples() {
        let x = abc();
        let r = reference(&x);
        assert_eq!(r.pushforward(&PointMap::identity(&x)).unwrap(), r);

        let y = FiniteSpace::new(["y"]).unwrap();
        let collapse = PointMap::constant(&x, &y, 0).unwrap();
        assert_eq!(r.pushforward(&collapse).unwrap(), Functional::dirac(&y, 0).unwrap());

        let yz = FiniteSpace::new(["y", "z"]).unwrap();
        let f = PointMap::from_labels(x.clone(), yz.clone(), [("a", "y"), ("b", "z"), ("c", "z")]).unwrap();
        let expected =
            Functional::from_generators(&yz, vec![m(&yz, &[("y", rat(3, 4)), ("z", rat(1, 4))]), d(&yz, "z")]).unwrap();
        let pushed = r.pushforward(&f).unwrap();
        assert_eq!(pushed, expected);
        assert_eq!(pushed.vertices().len(), 2);
        assert!(r.pushforward(&PointMap::identity(&yz)).is_err());
    }

    #[test]
    fn convex_combination_examples() {
        let x = abc();
        let mu = reference(&x);
        let nu = Functional::from_generators(&x, vec![d(&x, "a"), d(&x, "c")]).unwrap();
        assert_eq!(mu.convex_combination(&nu, &zero()).unwrap(), mu);
        assert_eq!(mu.convex_combination(&nu, &one()).unwrap(), nu);
        assert_eq!(mu.convex_combination(&mu, &rat(1, 3)).unwrap(), mu);
        let half = mu.convex_combination(&nu, &rat(1, 2)).unwrap();
        let flagged = m(&x, &[("a", rat(3, 8)), ("b", rat(1, 8)), ("c", rat(1, 2))]);
        let report = half.osf_report();
        let entry = report.vertices.iter().find(|v| v.vertex == flagged).expect("vertex present");
        assert!(!entry.in_pf);
        assert!(!report.in_osf);
        assert!(mu.convex_combination(&nu, &int(2)).is_err());
    }

    #[test]
    fn equality_and_distance() {
        let x = abc();
        let a = Functional::dirac(&x, 0).unwrap();
        let b = Functional::dirac(&x, 1).unwrap();
        assert!(!a.functional_eq(&b).unwrap());
        let w = a.separating_function(&b).unwrap().unwrap();
        assert_eq!(w, TestFunction::indicator(&x, &[0]));
        assert_eq!(a.dist_on_tests(&b, &[w]).unwrap(), one());
        assert_eq!(a.dist_on_tests(&a, &[TestFunction::unit(&x)]).unwrap(), zero());
        assert!(a.dist_on_tests(&b, &[]).is_err());
        let r = reference(&x);
        assert!(r.functional_eq(&r.pushforward(&PointMap::identity(&x)).unwrap()).unwrap());
    }

    #[test]
    fn functionals_satisfy_all_axioms() {
        let x = abc();
        let report = check_axioms(&reference(&x).as_black_box(), 100, "unit");
        assert!(report.all_pass(), "{report:?}");
        assert!(report.verdicts.iter().all(|v| v.trials == 100 && v.seed == "unit"));
    }

    #[test]
    fn min_functional_is_not_semiadditive() {
        let ab = FiniteSpace::new(["a", "b"]).unwrap();
        let min = BlackBoxFunctional::new(ab.clone(), |phi| phi.values().iter().min().unwrap().clone());
        // The two-point witness by hand.
        let p = phi(&ab, &[1, 0]);
        let s = phi(&ab, &[0, 1]);
        assert!(min.eval(&p.add(&s).unwrap()) > min.eval(&p) + min.eval(&s));

        let report = check_axioms(&min, 100, "min");
        assert!(!report.verdict(Axiom::Semiadditive).pass);
        assert!(report.verdict(Axiom::Semiadditive).witness.is_some());
        for axiom in [Axiom::WeaklyAdditive, Axiom::OrderPreserving, Axiom::Normed, Axiom::PositivelyHomogeneous] {
            assert!(report.verdict(axiom).pass, "{axiom:?}");
        }
    }

    #[test]
    fn shifted_evaluation_is_not_normed() {
        let ab = FiniteSpace::new(["a", "b"]).unwrap();
        let shifted = BlackBoxFunctional::new(ab, |phi| phi.value(0) + one());
        let report = check_axioms(&shifted, 10, "shift");
        let normed = report.verdict(Axiom::Normed);
        assert!(!normed.pass);
        assert_eq!(normed.witness.as_ref().unwrap()["value"], "2");
    }

    #[test]
    fn axiom_report_is_deterministic() {
        let ab = FiniteSpace::new(["a", "b"]).unwrap();
        let min = BlackBoxFunctional::new(ab, |phi| phi.values().iter().min().unwrap().clone());
        let a = serde_json::to_string(&check_axioms(&min, 50, "s")).unwrap();
        let b = serde_json::to_string(&check_axioms(&min, 50, "s")).unwrap();
        assert_eq!(a, b);
    }
}
