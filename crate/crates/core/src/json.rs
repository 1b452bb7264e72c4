//! Reading instances, test functions, subsets and maps from JSON.

use std::collections::{BTreeMap, BTreeSet};

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::functional::Functional;
use crate::hyperspace::ClosedSubset;
use crate::rational::{parse_rational, Rational};
use crate::space::{FiniteSpace, Measure, PointMap, TestFunction};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpaceDto {
    points: Vec<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MeasureDto {
    weights: BTreeMap<String, String>,
}

#[derive(Debug, Deserialize)]
struct InstanceDto {
    space: Option<SpaceDto>,
    generators: Option<Vec<MeasureDto>>,
    vertices: Option<Vec<MeasureDto>>,
}

fn parse<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

fn measure(space: &FiniteSpace, dto: &MeasureDto) -> Result<Measure> {
    let atoms = dto
        .weights
        .iter()
        .map(|(label, w)| Ok((label.as_str(), parse_rational(w)?)))
        .collect::<Result<Vec<(&str, Rational)>>>()?;
    Measure::from_atoms(space.clone(), atoms)
}

/// A functional from `{"space"?: {"points": [...]}, "generators": [...]}`.
///
/// `"vertices"` is accepted in place of `"generators"`, so canonical output
/// reads back in. Without an explicit space the points are the sorted union
/// of the labels that occur.
pub fn parse_instance(text: &str) -> Result<Functional> {
    let dto: InstanceDto = parse(text)?;
    let gens = match (dto.generators, dto.vertices) {
        (Some(g), None) | (None, Some(g)) => g,
        (Some(_), Some(_)) => return Err(Error::Parse("give either \"generators\" or \"vertices\", not both".into())),
        (None, None) => return Err(Error::Parse("missing \"generators\"".into())),
    };
    let space = match dto.space {
        Some(s) => FiniteSpace::new(s.points)?,
        None => {
            let labels: BTreeSet<&str> = gens.iter().flat_map(|g| g.weights.keys().map(String::as_str)).collect();
            FiniteSpace::new(labels)?
        }
    };
    let measures = gens.iter().map(|g| measure(&space, g)).collect::<Result<Vec<_>>>()?;
    Functional::from_generators(&space, measures)
}

/// A test function on `space`: either `{"values": {label: "p/q"}}`, a comma
/// list of values in point order, or comma-separated `label=value` pairs.
pub fn parse_test_function(space: &FiniteSpace, text: &str) -> Result<TestFunction> {
    let text = text.trim();
    if text.starts_with('{') {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Dto {
            values: BTreeMap<String, String>,
        }
        let dto: Dto = parse(text)?;
        let pairs = dto.values.iter().map(|(l, v)| Ok((l.as_str(), parse_rational(v)?))).collect::<Result<Vec<_>>>()?;
        return TestFunction::from_labels(space.clone(), pairs);
    }
    let items: Vec<&str> = text.split(',').map(str::trim).collect();
    if items.iter().any(|s| s.contains('=')) {
        let pairs = items
            .iter()
            .map(|item| {
                let (label, value) =
                    item.split_once('=').ok_or_else(|| Error::Parse(format!("expected label=value, got {item:?}")))?;
                Ok((label.trim(), parse_rational(value.trim())?))
            })
            .collect::<Result<Vec<_>>>()?;
        return TestFunction::from_labels(space.clone(), pairs);
    }
    let values = items.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>()?;
    TestFunction::new(space.clone(), values)
}

/// `{"members": [labels]}`.
pub fn parse_closed_subset(space: &FiniteSpace, text: &str) -> Result<ClosedSubset> {
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct Dto {
        members: Vec<String>,
    }
    let dto: Dto = parse(text)?;
    ClosedSubset::from_labels(space, dto.members.iter().map(String::as_str))
}

/// `{"table": {label: label}}`, total on `source`.
pub fn parse_point_map(source: &FiniteSpace, target: &FiniteSpace, text: &str) -> Result<PointMap> {
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct Dto {
        table: BTreeMap<String, String>,
    }
    let dto: Dto = parse(text)?;
    PointMap::from_labels(source.clone(), target.clone(), dto.table.iter().map(|(a, b)| (a.as_str(), b.as_str())))
}
