//! The hyperspace `exp X` inside `OS_f(X)`: the embedding `F ↦ μ_F`, the
//! retraction onto `exp X` by dominant atoms, the straight-line homotopy
//! between them, and pushforward along a time-indexed family of maps.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::functional::{check_axioms, Functional};
use crate::rational::{format_rational, one, zero, Rational};
use crate::space::{check_unit_interval, FiniteSpace, Measure, PfVerdict, PointMap};

/// A nonempty subset of a finite space; every subset of a finite space is
/// closed.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClosedSubset {
    space: FiniteSpace,
    members: Vec<usize>,
}

impl ClosedSubset {
    pub fn new(space: &FiniteSpace, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut members: Vec<usize> = members.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        if members.is_empty() {
            return Err(Error::EmptySubset);
        }
        if let Some(&bad) = members.iter().find(|&&x| x >= space.len()) {
            return Err(Error::UnknownPoint(format!("#{bad}")));
        }
        Ok(Self { space: space.clone(), members })
    }

    pub fn from_labels<'a>(space: &FiniteSpace, labels: impl IntoIterator<Item = &'a str>) -> Result<Self> {
        let members = labels.into_iter().map(|l| space.index_of(l)).collect::<Result<Vec<_>>>()?;
        Self::new(space, members)
    }

    pub fn whole(space: &FiniteSpace) -> Result<Self> {
        Self::new(space, 0..space.len())
    }

    /// All nonempty subsets, ordered by bitmask.
    pub fn all(space: &FiniteSpace) -> Vec<ClosedSubset> {
        let n = space.len();
        assert!(n < usize::BITS as usize, "space too large to enumerate subsets");
        (1usize..1 << n)
            .map(|mask| ClosedSubset { space: space.clone(), members: (0..n).filter(|i| mask >> i & 1 == 1).collect() })
            .collect()
    }

    pub fn space(&self) -> &FiniteSpace {
        &self.space
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn labels(&self) -> Vec<String> {
        self.space.labels_of(&self.members)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

impl fmt::Debug for ClosedSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.labels()).finish()
    }
}

impl Serialize for ClosedSubset {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("ClosedSubset", 1)?;
        st.serialize_field("members", &self.labels())?;
        st.end()
    }
}

/// `μ_F(φ) = max_{x ∈ F} φ(x)`, the functional generated by the Diracs of `F`.
pub fn embed(subset: &ClosedSubset) -> Functional {
    let diracs = subset.members.iter().map(|&x| Measure::dirac(&subset.space, x).expect("member of space")).collect();
    Functional::from_generators(&subset.space, diracs).expect("nonempty subset")
}

/// The set of dominant atoms of the extreme measures of `mu`.
///
/// Defined on `OS_f(X)`; a vertex outside `P_f` is a precondition failure and
/// the error names it.
pub fn retraction(mu: &Functional) -> Result<ClosedSubset> {
    let report = mu.osf_report();
    if let Some(bad) = report.vertices.iter().find(|v| !v.in_pf) {
        return Err(Error::Precondition(format!(
            "functional is not in OS_f: vertex {:?} has {} atoms, max weight {} < {}",
            bad.vertex,
            bad.n,
            format_rational(&bad.max_weight),
            format_rational(&bad.threshold)
        )));
    }
    let atoms = mu.vertices().iter().map(Measure::dominant_atom).collect::<Result<Vec<_>>>()?;
    ClosedSubset::new(mu.space(), atoms)
}

/// `h_t(μ) = (1 − t)·μ + t·μ_{r(μ)}`.
///
/// The result is always a semiadditive functional; whether it stays in
/// `OS_f` is reported by [`Functional::osf_report`], not assumed.
pub fn homotopy(mu: &Functional, t: &Rational) -> Result<Functional> {
    check_unit_interval("t", t)?;
    let target = embed(&retraction(mu)?);
    mu.convex_combination(&target, t)
}

/// One grid point of a homotopy probe.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeRecord {
    #[serde(with = "crate::rational::serde_str")]
    pub t: Rational,
    pub vertices: Vec<Measure>,
    pub axioms_pass: bool,
    pub pf_verdicts: Vec<PfVerdict>,
    pub in_osf: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeReport {
    pub start: Functional,
    pub retraction: ClosedSubset,
    pub records: Vec<ProbeRecord>,
    /// `h_t(μ) ∈ OS_f` at every grid point.
    pub in_osf_everywhere: bool,
}

/// Evaluates `h_t(mu)` on `grid`, checking the functional axioms and the
/// per-vertex `P_f` condition at each point.
pub fn homotopy_probe(mu: &Functional, grid: &[Rational], trials: usize, seed: &str) -> Result<ProbeReport> {
    if grid.is_empty() {
        return Err(Error::OutOfRange { name: "grid", value: "[]".into(), range: "nonempty" });
    }
    let retracted = retraction(mu)?;
    let target = embed(&retracted);
    let records = grid
        .par_iter()
        .map(|t| {
            check_unit_interval("t", t)?;
            let h = mu.convex_combination(&target, t)?;
            let axioms = check_axioms(&h.as_black_box(), trials, &format!("{seed}/t={}", format_rational(t)));
            let osf = h.osf_report();
            Ok(ProbeRecord {
                t: t.clone(),
                vertices: h.vertices().to_vec(),
                axioms_pass: axioms.all_pass(),
                pf_verdicts: osf.vertices,
                in_osf: osf.in_osf,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let in_osf_everywhere = records.iter().all(|r| r.in_osf);
    Ok(ProbeReport { start: mu.clone(), retraction: retracted, records, in_osf_everywhere })
}

/// `0, 1/k, …, 1`.
pub fn uniform_grid(k: usize) -> Result<Vec<Rational>> {
    if k == 0 {
        return Err(Error::OutOfRange { name: "K", value: "0".into(), range: "K ≥ 1" });
    }
    Ok((0..=k).map(|i| crate::rational::rat(i as i64, k as i64)).collect())
}

type MapAt = dyn Fn(&Rational) -> PointMap + Send + Sync;

/// A family of maps `h(·, t): X → Y` indexed by `t ∈ [0, 1]`.
///
/// No continuity is required: on finite discrete spaces a continuous family
/// is constant, so the family is arbitrary and only its defining identities
/// are exercised.
#[derive(Clone)]
pub struct MapFamily {
    source: FiniteSpace,
    target: FiniteSpace,
    at: Arc<MapAt>,
}

impl MapFamily {
    pub fn new<F>(source: FiniteSpace, target: FiniteSpace, at: F) -> Self
    where
        F: Fn(&Rational) -> PointMap + Send + Sync + 'static,
    {
        Self { source, target, at: Arc::new(at) }
    }

    pub fn constant(map: PointMap) -> Self {
        let (source, target) = (map.source().clone(), map.target().clone());
        Self::new(source, target, move |_| map.clone())
    }

    pub fn source(&self) -> &FiniteSpace {
        &self.source
    }

    pub fn target(&self) -> &FiniteSpace {
        &self.target
    }

    pub fn at(&self, t: &Rational) -> Result<PointMap> {
        let map = (self.at)(t);
        self.source.ensure_same(map.source())?;
        self.target.ensure_same(map.target())?;
        Ok(map)
    }
}

/// `OS_f(h)(μ, t)`: every atom `α δ_x` of every extreme measure becomes
/// `α δ_{h(x, t)}`.
pub fn functor_homotopy(family: &MapFamily, mu: &Functional, t: &Rational) -> Result<Functional> {
    family.source.ensure_same(mu.space())?;
    check_unit_interval("t", t)?;
    mu.pushforward(&family.at(t)?)
}

/// `μ_F` for the first `n` points of `space`: a functional whose support
/// has exactly `n` points.
pub fn degree_witness(space: &FiniteSpace, n: usize) -> Result<Functional> {
    if n == 0 || n > space.len() {
        return Err(Error::OutOfRange { name: "n", value: n.to_string(), range: "1 ≤ n ≤ |X|" });
    }
    Ok(embed(&ClosedSubset::new(space, 0..n)?))
}

/// `t = 0` and `t = 1`, the endpoints every probe is expected to pass.
pub fn endpoints() -> [Rational; 2] {
    [zero(), one()]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};
    use crate::space::TestFunction;

    fn abc() -> FiniteSpace {
        FiniteSpace::new(["a", "b", "c"]).unwrap()
    }

    fn m(space: &FiniteSpace, atoms: &[(&str, Rational)]) -> Measure {
        Measure::from_atoms(space.clone(), atoms.iter().cloned()).unwrap()
    }

    fn reference(x: &FiniteSpace) -> Functional {
        Functional::from_generators(x, vec![m(x, &[("a", rat(3, 4)), ("b", rat(1, 4))]), Measure::dirac_at(x, "c").unwrap()])
            .unwrap()
    }

    #[test]
    fn embed_examples() {
        let x = abc();
        let ac = ClosedSubset::from_labels(&x, ["a", "c"]).unwrap();
        let phi = TestFunction::new(x.clone(), vec![int(1), int(5), int(3)]).unwrap();
        assert_eq!(embed(&ac).eval(&phi).unwrap(), int(3));
        assert!(embed(&ac).is_in_osf());
        let single = ClosedSubset::new(&x, [1]).unwrap();
        assert_eq!(embed(&single), Functional::dirac(&x, 1).unwrap());
        assert_eq!(embed(&ClosedSubset::whole(&x).unwrap()).eval(&phi).unwrap(), int(5));
        assert_eq!(ClosedSubset::new(&x, []).unwrap_err(), Error::EmptySubset);
    }

    #[test]
    fn retraction_examples() {
        let x = abc();
        assert_eq!(retraction(&reference(&x)).unwrap(), ClosedSubset::from_labels(&x, ["a", "c"]).unwrap());
        let boundary = Functional::from_generators(&x, vec![m(&x, &[("a", rat(2, 3)), ("b", rat(1, 3))])]).unwrap();
        assert_eq!(retraction(&boundary).unwrap(), ClosedSubset::from_labels(&x, ["a"]).unwrap());
        for f in ClosedSubset::all(&x) {
            assert_eq!(retraction(&embed(&f)).unwrap(), f);
        }
        let outside =
            Functional::from_generators(&x, vec![m(&x, &[("a", rat(1, 2)), ("b", rat(1, 4)), ("c", rat(1, 4))])]).unwrap();
        assert!(retraction(&outside).unwrap_err().is_precondition());
    }

    #[test]
    fn homotopy_endpoints_and_fixed_points() {
        let x = abc();
        let mu = reference(&x);
        assert_eq!(homotopy(&mu, &zero()).unwrap(), mu);
        assert_eq!(homotopy(&mu, &one()).unwrap(), embed(&retraction(&mu).unwrap()));
        let ac = embed(&ClosedSubset::from_labels(&x, ["a", "c"]).unwrap());
        assert_eq!(homotopy(&ac, &rat(1, 2)).unwrap(), ac);
        assert!(homotopy(&mu, &rat(-1, 2)).is_err());
    }

    #[test]
    fn homotopy_leaves_osf_at_midpoint() {
        let x = abc();
        let h = homotopy(&reference(&x), &rat(1, 2)).unwrap();
        let flagged = m(&x, &[("a", rat(3, 8)), ("b", rat(1, 8)), ("c", rat(1, 2))]);
        let report = h.osf_report();
        let entry = report.vertices.iter().find(|v| v.vertex == flagged).unwrap();
        assert!(!entry.in_pf);
        assert_eq!(entry.threshold, rat(3, 4));
    }

    #[test]
    fn probe_examples() {
        let x = abc();
        let ac = embed(&ClosedSubset::from_labels(&x, ["a", "c"]).unwrap());
        let grid = uniform_grid(4).unwrap();
        let report = homotopy_probe(&ac, &grid, 20, "p").unwrap();
        assert!(report.in_osf_everywhere);
        assert!(report.records.iter().all(|r| r.axioms_pass));

        let report = homotopy_probe(&reference(&x), &endpoints(), 20, "p").unwrap();
        assert!(report.in_osf_everywhere);

        let report = homotopy_probe(&reference(&x), &[rat(1, 2)], 20, "p").unwrap();
        assert!(!report.in_osf_everywhere);
        assert!(report.records[0].axioms_pass);
        assert!(homotopy_probe(&ac, &[], 1, "p").is_err());
    }

    #[test]
    fn functor_homotopy_examples() {
        let x = abc();
        let yz = FiniteSpace::new(["y", "z"]).unwrap();
        let f = PointMap::from_labels(x.clone(), yz.clone(), [("a", "y"), ("b", "z"), ("c", "z")]).unwrap();
        let g = PointMap::constant(&x, &yz, 0).unwrap();
        let mu = reference(&x);

        let constant = MapFamily::constant(f.clone());
        let at0 = functor_homotopy(&constant, &mu, &zero()).unwrap();
        for t in uniform_grid(5).unwrap() {
            assert_eq!(functor_homotopy(&constant, &mu, &t).unwrap(), at0);
        }

        let (f2, g2) = (f.clone(), g.clone());
        let switching = MapFamily::new(x.clone(), yz.clone(), move |t| if *t < rat(1, 2) { f2.clone() } else { g2.clone() });
        assert_eq!(functor_homotopy(&switching, &mu, &zero()).unwrap(), mu.pushforward(&f).unwrap());
        assert_eq!(functor_homotopy(&switching, &mu, &one()).unwrap(), mu.pushforward(&g).unwrap());
        assert!(functor_homotopy(&switching, &Functional::dirac(&yz, 0).unwrap(), &zero()).is_err());
    }

    #[test]
    fn degree_witness_sizes() {
        let x = FiniteSpace::with_size("x", 5);
        assert_eq!(degree_witness(&x, 1).unwrap().support().len(), 1);
        assert_eq!(degree_witness(&x, 3).unwrap().support().len(), 3);
        assert_eq!(degree_witness(&x, 5).unwrap(), embed(&ClosedSubset::whole(&x).unwrap()));
        assert!(degree_witness(&x, 6).is_err());
        assert!(degree_witness(&x, 0).is_err());
    }
}
