//! Finite spaces, maps between them, test functions and finitely supported
//! probability measures.
//!
//! A [`FiniteSpace`] is an ordered list of distinct labels. Every other value
//! refers to points by their index in that list, so the stored order is the
//! canonical order used for sorting and serialization everywhere downstream.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::{format_rational, one, zero, Rational};

#[derive(Clone)]
pub struct FiniteSpace {
    points: Arc<[String]>,
    index: Arc<HashMap<String, usize>>,
}

impl FiniteSpace {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let points: Vec<String> = labels.into_iter().map(Into::into).collect();
        let mut index = HashMap::with_capacity(points.len());
        for (i, label) in points.iter().enumerate() {
            if index.insert(label.clone(), i).is_some() {
                return Err(Error::DuplicateLabel(label.clone()));
            }
        }
        Ok(Self { points: points.into(), index: Arc::new(index) })
    }

    /// `n` points labelled `{prefix}0, {prefix}1, ...`.
    pub fn with_size(prefix: &str, n: usize) -> Self {
        Self::new((0..n).map(|i| format!("{prefix}{i}"))).expect("generated labels are distinct")
    }

    pub fn empty() -> Self {
        Self::with_size("", 0)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn label(&self, i: usize) -> &str {
        &self.points[i]
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.index.get(label).copied().ok_or_else(|| Error::UnknownPoint(label.to_string()))
    }

    pub fn labels_of(&self, indices: &[usize]) -> Vec<String> {
        indices.iter().map(|&i| self.points[i].clone()).collect()
    }

    pub(crate) fn ensure_same(&self, other: &FiniteSpace) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::SpaceMismatch { expected: self.points.to_vec(), found: other.points.to_vec() })
        }
    }
}

impl PartialEq for FiniteSpace {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.points, &other.points) || self.points == other.points
    }
}

impl Eq for FiniteSpace {}

impl Hash for FiniteSpace {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.points.hash(state);
    }
}

impl PartialOrd for FiniteSpace {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FiniteSpace {
    fn cmp(&self, other: &Self) -> Ordering {
        self.points.cmp(&other.points)
    }
}

impl fmt::Debug for FiniteSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.points.iter()).finish()
    }
}

impl Serialize for FiniteSpace {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("FiniteSpace", 1)?;
        st.serialize_field("points", &*self.points)?;
        st.end()
    }
}

/// A total map between finite spaces, stored as an index table.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PointMap {
    source: FiniteSpace,
    target: FiniteSpace,
    table: Vec<usize>,
}

impl PointMap {
    pub fn new(source: FiniteSpace, target: FiniteSpace, table: Vec<usize>) -> Result<Self> {
        if table.len() != source.len() {
            return Err(Error::InvalidMap(format!(
                "table has {} entries for {} source points",
                table.len(),
                source.len()
            )));
        }
        if let Some(&bad) = table.iter().find(|&&y| y >= target.len()) {
            return Err(Error::InvalidMap(format!("image index {bad} outside target")));
        }
        Ok(Self { source, target, table })
    }

    /// Builds a map from `(source label, target label)` pairs; every source
    /// point must appear exactly once.
    pub fn from_labels<'a, I>(source: FiniteSpace, target: FiniteSpace, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a str, &'a str)>,
    {
        let mut table = vec![None; source.len()];
        for (x, y) in pairs {
            let i = source.index_of(x)?;
            let j = target.index_of(y)?;
            if table[i].replace(j).is_some() {
                return Err(Error::InvalidMap(format!("point {x:?} mapped twice")));
            }
        }
        let table = table
            .into_iter()
            .enumerate()
            .map(|(i, y)| y.ok_or_else(|| Error::InvalidMap(format!("point {:?} unmapped", source.label(i)))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(source, target, table)
    }

    pub fn identity(space: &FiniteSpace) -> Self {
        Self { source: space.clone(), target: space.clone(), table: (0..space.len()).collect() }
    }

    pub fn constant(source: &FiniteSpace, target: &FiniteSpace, y: usize) -> Result<Self> {
        Self::new(source.clone(), target.clone(), vec![y; source.len()])
    }

    pub fn source(&self) -> &FiniteSpace {
        &self.source
    }

    pub fn target(&self) -> &FiniteSpace {
        &self.target
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn apply(&self, x: usize) -> usize {
        self.table[x]
    }

    /// `next ∘ self`: first `self`, then `next`.
    pub fn then(&self, next: &PointMap) -> Result<PointMap> {
        self.target.ensure_same(&next.source)?;
        Ok(PointMap {
            source: self.source.clone(),
            target: next.target.clone(),
            table: self.table.iter().map(|&y| next.table[y]).collect(),
        })
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.target.len()];
        self.table.iter().all(|&y| !std::mem::replace(&mut seen[y], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.target.len()];
        for &y in &self.table {
            hit[y] = true;
        }
        hit.into_iter().all(|h| h)
    }

    /// Sorted, deduplicated image of a set of source indices.
    pub fn image(&self, xs: &[usize]) -> Vec<usize> {
        let mut out: Vec<usize> = xs.iter().map(|&x| self.table[x]).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Sorted preimage of a set of target indices.
    pub fn preimage(&self, ys: &[usize]) -> Vec<usize> {
        (0..self.source.len()).filter(|&x| ys.contains(&self.table[x])).collect()
    }

    /// Every map `source -> target`, in lexicographic order of tables.
    pub fn all_maps(source: &FiniteSpace, target: &FiniteSpace) -> Vec<PointMap> {
        let (m, k) = (source.len(), target.len());
        if k == 0 {
            return if m == 0 { vec![PointMap::identity(source).retarget(target)] } else { Vec::new() };
        }
        let mut out = Vec::new();
        let mut table = vec![0usize; m];
        loop {
            out.push(PointMap { source: source.clone(), target: target.clone(), table: table.clone() });
            let mut i = m;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                table[i] += 1;
                if table[i] < k {
                    break;
                }
                table[i] = 0;
            }
        }
    }

    fn retarget(mut self, target: &FiniteSpace) -> Self {
        self.target = target.clone();
        self
    }
}

impl fmt::Debug for PointMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(self.table.iter().enumerate().map(|(x, &y)| (self.source.label(x), self.target.label(y))))
            .finish()
    }
}

impl Serialize for PointMap {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        struct Table<'a>(&'a PointMap);
        impl Serialize for Table<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let m = self.0;
                let mut map = s.serialize_map(Some(m.table.len()))?;
                for (x, &y) in m.table.iter().enumerate() {
                    map.serialize_entry(m.source.label(x), m.target.label(y))?;
                }
                map.end()
            }
        }
        let mut st = s.serialize_struct("PointMap", 1)?;
        st.serialize_field("table", &Table(self))?;
        st.end()
    }
}

/// A real-valued function on a finite space (an element of `C(X)`).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TestFunction {
    space: FiniteSpace,
    values: Vec<Rational>,
}

impl TestFunction {
    pub fn new(space: FiniteSpace, values: Vec<Rational>) -> Result<Self> {
        if values.len() != space.len() {
            return Err(Error::InvalidFunction(format!(
                "{} values for {} points",
                values.len(),
                space.len()
            )));
        }
        Ok(Self { space, values })
    }

    pub fn from_labels<'a, I>(space: FiniteSpace, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a str, Rational)>,
    {
        let mut values = vec![None; space.len()];
        for (label, v) in pairs {
            let i = space.index_of(label)?;
            if values[i].replace(v).is_some() {
                return Err(Error::InvalidFunction(format!("point {label:?} given twice")));
            }
        }
        let values = values
            .into_iter()
            .enumerate()
            .map(|(i, v)| v.ok_or_else(|| Error::InvalidFunction(format!("no value at {:?}", space.label(i)))))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { space, values })
    }

    pub fn constant(space: &FiniteSpace, c: Rational) -> Self {
        Self { space: space.clone(), values: vec![c; space.len()] }
    }

    /// The unit function `1_X`.
    pub fn unit(space: &FiniteSpace) -> Self {
        Self::constant(space, one())
    }

    /// `1` on the listed points, `0` elsewhere.
    pub fn indicator(space: &FiniteSpace, points: &[usize]) -> Self {
        let mut values = vec![zero(); space.len()];
        for &i in points {
            values[i] = one();
        }
        Self { space: space.clone(), values }
    }

    pub fn space(&self) -> &FiniteSpace {
        &self.space
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn value(&self, i: usize) -> &Rational {
        &self.values[i]
    }

    /// `self ∘ f`, a function on `f.source()`.
    pub fn pull_back(&self, f: &PointMap) -> Result<TestFunction> {
        self.space.ensure_same(f.target())?;
        Ok(TestFunction {
            space: f.source().clone(),
            values: f.table().iter().map(|&y| self.values[y].clone()).collect(),
        })
    }

    pub fn add(&self, other: &TestFunction) -> Result<TestFunction> {
        self.space.ensure_same(&other.space)?;
        Ok(TestFunction {
            space: self.space.clone(),
            values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn add_constant(&self, c: &Rational) -> TestFunction {
        TestFunction { space: self.space.clone(), values: self.values.iter().map(|v| v + c).collect() }
    }

    pub fn scale(&self, t: &Rational) -> TestFunction {
        TestFunction { space: self.space.clone(), values: self.values.iter().map(|v| v * t).collect() }
    }

    /// Pointwise `self ≤ other`.
    pub fn le(&self, other: &TestFunction) -> bool {
        self.space == other.space && self.values.iter().zip(&other.values).all(|(a, b)| a <= b)
    }

    /// `‖φ‖ = sup |φ(x)|`; zero on the empty space.
    pub fn sup_norm(&self) -> Rational {
        use num_traits::Signed;
        self.values.iter().map(|v| v.abs()).max().unwrap_or_else(zero)
    }

    pub fn max_value(&self) -> Option<&Rational> {
        self.values.iter().max()
    }
}

impl fmt::Debug for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(self.values.iter().enumerate().map(|(i, v)| (self.space.label(i), format_rational(v))))
            .finish()
    }
}

impl Serialize for TestFunction {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("TestFunction", 1)?;
        st.serialize_field("values", &LabelledRationals { space: &self.space, values: &self.values, skip_zero: false })?;
        st.end()
    }
}

struct LabelledRationals<'a> {
    space: &'a FiniteSpace,
    values: &'a [Rational],
    skip_zero: bool,
}

impl Serialize for LabelledRationals<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use num_traits::Zero;
        let mut map = s.serialize_map(None)?;
        for (i, v) in self.values.iter().enumerate() {
            if self.skip_zero && v.is_zero() {
                continue;
            }
            map.serialize_entry(self.space.label(i), &format_rational(v))?;
        }
        map.end()
    }
}

/// A finitely supported probability measure `Σ αᵢ δ_{xᵢ}`.
///
/// Weights are stored densely in the space's point order; a point carries an
/// atom iff its weight is positive, so colliding atoms are always merged and
/// zero weights never count towards the support.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Measure {
    space: FiniteSpace,
    weights: Vec<Rational>,
}

impl Measure {
    /// Validates a dense weight vector: nonnegative entries summing to one.
    pub fn new(space: FiniteSpace, weights: Vec<Rational>) -> Result<Self> {
        use num_traits::Signed;
        if weights.len() != space.len() {
            return Err(Error::InvalidMeasure(format!("{} weights for {} points", weights.len(), space.len())));
        }
        if let Some(neg) = weights.iter().position(|w| w.is_negative()) {
            return Err(Error::InvalidMeasure(format!("negative weight at {:?}", space.label(neg))));
        }
        let total: Rational = weights.iter().sum();
        if total != one() {
            return Err(Error::InvalidMeasure(format!("weights sum to {}", format_rational(&total))));
        }
        Ok(Self { space, weights })
    }

    /// Builds a measure from `(label, weight)` atoms, merging repeated labels
    /// and dropping zero weights.
    pub fn from_atoms<'a, I>(space: FiniteSpace, atoms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a str, Rational)>,
    {
        let mut weights = vec![zero(); space.len()];
        for (label, w) in atoms {
            let i = space.index_of(label)?;
            weights[i] += w;
        }
        Self::new(space, weights)
    }

    pub fn dirac(space: &FiniteSpace, x: usize) -> Result<Self> {
        if x >= space.len() {
            return Err(Error::UnknownPoint(format!("#{x}")));
        }
        let mut weights = vec![zero(); space.len()];
        weights[x] = one();
        Ok(Self { space: space.clone(), weights })
    }

    pub fn dirac_at(space: &FiniteSpace, label: &str) -> Result<Self> {
        Self::dirac(space, space.index_of(label)?)
    }

    pub fn space(&self) -> &FiniteSpace {
        &self.space
    }

    /// Dense weights in point order (zero where absent).
    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn weight(&self, x: usize) -> &Rational {
        &self.weights[x]
    }

    /// Positive atoms `(point, weight)` in point order.
    pub fn atoms(&self) -> impl Iterator<Item = (usize, &Rational)> + '_ {
        use num_traits::Zero;
        self.weights.iter().enumerate().filter(|(_, w)| !w.is_zero())
    }

    pub fn support(&self) -> Vec<usize> {
        self.atoms().map(|(i, _)| i).collect()
    }

    pub fn support_size(&self) -> usize {
        self.atoms().count()
    }

    pub fn is_carried_by(&self, set: &[usize]) -> bool {
        self.atoms().all(|(i, _)| set.contains(&i))
    }

    /// `ξ(φ) = Σ ξ(x)·φ(x)`.
    pub fn eval(&self, phi: &TestFunction) -> Result<Rational> {
        self.space.ensure_same(phi.space())?;
        Ok(self.eval_unchecked(phi.values()))
    }

    pub(crate) fn eval_unchecked(&self, phi: &[Rational]) -> Rational {
        self.atoms().map(|(i, w)| w * &phi[i]).sum()
    }

    /// Image measure `f_# ξ`: the weight of `y` is the mass of its fiber.
    pub fn pushforward(&self, f: &PointMap) -> Result<Measure> {
        self.space.ensure_same(f.source())?;
        let mut weights = vec![zero(); f.target().len()];
        for (x, w) in self.atoms() {
            weights[f.apply(x)] += w;
        }
        Ok(Measure { space: f.target().clone(), weights })
    }

    /// `(1 − t)·self + t·other`. `t` must lie in `[0, 1]`.
    pub fn mix(&self, other: &Measure, t: &Rational) -> Result<Measure> {
        self.space.ensure_same(&other.space)?;
        check_unit_interval("t", t)?;
        let s = one() - t;
        Ok(Measure {
            space: self.space.clone(),
            weights: self.weights.iter().zip(&other.weights).map(|(a, b)| a * &s + b * t).collect(),
        })
    }

    /// Dominance threshold `n/(n+1)` for `n` atoms.
    pub fn pf_threshold(&self) -> Rational {
        pf_threshold(self.support_size())
    }

    pub fn max_weight(&self) -> &Rational {
        self.weights.iter().max().expect("measures live on nonempty spaces")
    }

    /// Membership in `P_f`: some atom carries weight at least `n/(n+1)`.
    pub fn is_in_pf(&self) -> bool {
        *self.max_weight() >= self.pf_threshold()
    }

    pub fn pf_verdict(&self) -> PfVerdict {
        PfVerdict {
            vertex: self.clone(),
            n: self.support_size(),
            max_weight: self.max_weight().clone(),
            threshold: self.pf_threshold(),
            in_pf: self.is_in_pf(),
        }
    }

    /// The unique atom with weight `≥ n/(n+1)`. For `n ≥ 2` two such atoms
    /// would weigh at least `4/3` together, so at most one exists.
    pub fn dominant_atom(&self) -> Result<usize> {
        let threshold = self.pf_threshold();
        self.atoms().find(|(_, w)| **w >= threshold).map(|(i, _)| i).ok_or_else(|| {
            Error::Precondition(format!(
                "measure {self:?} is not in P_f: max weight {} < {}",
                format_rational(self.max_weight()),
                format_rational(&threshold)
            ))
        })
    }
}

pub fn pf_threshold(n: usize) -> Rational {
    crate::rational::rat(n as i64, n as i64 + 1)
}

pub(crate) fn check_unit_interval(name: &'static str, t: &Rational) -> Result<()> {
    if *t < zero() || *t > one() {
        return Err(Error::OutOfRange { name, value: format_rational(t), range: "[0, 1]" });
    }
    Ok(())
}

impl PartialOrd for Measure {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic in the point order, comparing the weight of each point.
impl Ord for Measure {
    fn cmp(&self, other: &Self) -> Ordering {
        self.space.cmp(&other.space).then_with(|| self.weights.cmp(&other.weights))
    }
}

impl fmt::Debug for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(self.atoms().map(|(i, w)| (self.space.label(i), format_rational(w))))
            .finish()
    }
}

impl Serialize for Measure {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Measure", 1)?;
        st.serialize_field("weights", &LabelledRationals { space: &self.space, values: &self.weights, skip_zero: true })?;
        st.end()
    }
}

/// Per-measure `P_f` diagnostic.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PfVerdict {
    pub vertex: Measure,
    pub n: usize,
    #[serde(with = "crate::rational::serde_str")]
    pub max_weight: Rational,
    #[serde(with = "crate::rational::serde_str")]
    pub threshold: Rational,
    pub in_pf: bool,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn abc() -> FiniteSpace {
        FiniteSpace::new(["a", "b", "c"]).unwrap()
    }

    fn m(space: &FiniteSpace, atoms: &[(&str, Rational)]) -> Measure {
        Measure::from_atoms(space.clone(), atoms.iter().cloned()).unwrap()
    }

    #[test]
    fn rejects_duplicate_labels() {
        assert_eq!(FiniteSpace::new(["a", "a"]).unwrap_err(), Error::DuplicateLabel("a".into()));
    }

    #[test]
    fn dirac_is_a_unit_atom() {
        let ab = FiniteSpace::new(["a", "b"]).unwrap();
        let d = Measure::dirac_at(&ab, "a").unwrap();
        assert_eq!(d.weights(), &[one(), zero()]);
        let c = Measure::dirac_at(&abc(), "c").unwrap();
        assert_eq!(c.support_size(), 1);
        assert_eq!(c.weights().iter().sum::<Rational>(), one());
        assert!(matches!(Measure::dirac_at(&ab, "z"), Err(Error::UnknownPoint(_))));
    }

    #[test]
    fn dirac_is_always_in_pf() {
        let x = abc();
        for i in 0..3 {
            assert!(Measure::dirac(&x, i).unwrap().is_in_pf());
        }
    }

    #[test]
    fn eval_examples() {
        let x = abc();
        let phi = TestFunction::new(x.clone(), vec![int(2), int(-1), int(4)]).unwrap();
        let xi = m(&x, &[("a", rat(3, 4)), ("b", rat(1, 4))]);
        assert_eq!(xi.eval(&phi).unwrap(), rat(5, 4));
        assert_eq!(Measure::dirac_at(&x, "c").unwrap().eval(&phi).unwrap(), int(4));
        assert_eq!(xi.eval(&TestFunction::unit(&x)).unwrap(), one());
    }

    #[test]
    fn eval_rejects_foreign_function() {
        let x = abc();
        let y = FiniteSpace::new(["a", "b"]).unwrap();
        let xi = Measure::dirac(&x, 0).unwrap();
        assert!(matches!(xi.eval(&TestFunction::unit(&y)), Err(Error::SpaceMismatch { .. })));
    }

    #[test]
    fn measure_validation() {
        let x = abc();
        assert!(Measure::new(x.clone(), vec![rat(1, 2), rat(1, 4), zero()]).is_err());
        assert!(Measure::new(x.clone(), vec![rat(3, 2), rat(-1, 2), zero()]).is_err());
        assert!(Measure::new(FiniteSpace::empty(), vec![]).is_err());
        let merged = m(&x, &[("a", rat(1, 4)), ("a", rat(1, 4)), ("b", rat(1, 2)), ("c", zero())]);
        assert_eq!(merged.support(), vec![0, 1]);
        assert_eq!(merged.weight(0), &rat(1, 2));
    }

    #[test]
    fn pushforward_examples() {
        let ab = FiniteSpace::new(["a", "b"]).unwrap();
        let y = FiniteSpace::new(["y"]).unwrap();
        let collapse = PointMap::constant(&ab, &y, 0).unwrap();
        let half = m(&ab, &[("a", rat(1, 2)), ("b", rat(1, 2))]);
        assert_eq!(half.pushforward(&collapse).unwrap(), Measure::dirac(&y, 0).unwrap());
        assert_eq!(half.pushforward(&PointMap::identity(&ab)).unwrap(), half);

        let yz = FiniteSpace::new(["y", "z"]).unwrap();
        let f = PointMap::from_labels(ab.clone(), yz.clone(), [("a", "y"), ("b", "z")]).unwrap();
        let xi = m(&ab, &[("a", rat(3, 4)), ("b", rat(1, 4))]);
        assert_eq!(xi.pushforward(&f).unwrap(), m(&yz, &[("y", rat(3, 4)), ("z", rat(1, 4))]));
        assert!(xi.pushforward(&PointMap::identity(&yz)).is_err());
    }

    #[test]
    fn pf_threshold_examples() {
        let x = abc();
        assert!(m(&x, &[("a", rat(3, 4)), ("b", rat(1, 4))]).is_in_pf());
        assert!(!m(&x, &[("a", rat(1, 2)), ("b", rat(1, 4)), ("c", rat(1, 4))]).is_in_pf());
        let boundary = m(&x, &[("a", rat(2, 3)), ("b", rat(1, 3))]);
        assert!(boundary.is_in_pf());
        assert_eq!(boundary.dominant_atom().unwrap(), 0);
    }

    #[test]
    fn dominant_atom_examples() {
        let x = abc();
        assert_eq!(m(&x, &[("a", rat(3, 4)), ("b", rat(1, 4))]).dominant_atom().unwrap(), 0);
        assert_eq!(Measure::dirac_at(&x, "c").unwrap().dominant_atom().unwrap(), 2);
        let outside = m(&x, &[("a", rat(1, 2)), ("b", rat(1, 4)), ("c", rat(1, 4))]);
        assert!(outside.dominant_atom().unwrap_err().is_precondition());
    }

    #[test]
    fn pf_verdict_reports_threshold() {
        let x = abc();
        let v = m(&x, &[("a", rat(1, 2)), ("b", rat(1, 4)), ("c", rat(1, 4))]).pf_verdict();
        assert_eq!((v.n, v.max_weight, v.threshold, v.in_pf), (3, rat(1, 2), rat(3, 4), false));
    }

    #[test]
    fn map_helpers() {
        let x = abc();
        let yz = FiniteSpace::new(["y", "z"]).unwrap();
        let f = PointMap::from_labels(x.clone(), yz.clone(), [("a", "y"), ("b", "z"), ("c", "z")]).unwrap();
        assert!(!f.is_injective());
        assert!(f.is_surjective());
        assert_eq!(f.image(&[1, 2]), vec![1]);
        assert_eq!(f.preimage(&[1]), vec![1, 2]);
        assert_eq!(PointMap::all_maps(&x, &yz).len(), 8);
        assert_eq!(PointMap::all_maps(&FiniteSpace::empty(), &yz).len(), 1);
        assert!(PointMap::all_maps(&x, &FiniteSpace::empty()).is_empty());
        assert!(PointMap::from_labels(x.clone(), yz.clone(), [("a", "y")]).is_err());
    }

    #[test]
    fn serializes_labelled_weights() {
        let x = abc();
        let xi = m(&x, &[("a", rat(3, 4)), ("b", rat(1, 4))]);
        assert_eq!(serde_json::to_string(&xi).unwrap(), r#"{"weights":{"a":"3/4","b":"1/4"}}"#);
        assert_eq!(serde_json::to_string(&x).unwrap(), r#"{"points":["a","b","c"]}"#);
    }
}
