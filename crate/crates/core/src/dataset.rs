//! The bundled incidence data of the 24 relevant combinatorial types.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::polytope::{parse_dataset, PolytopeData};

/// Raw text of the bundled dataset.
pub const BUNDLED: &str = include_str!("../data/polytopes.txt");

/// Labels of the types with at least three disjoint facet pairs, grouped by
/// that number.
pub const GROUPS: [(usize, &[u32]); 4] = [
    (6, &[1, 2, 3]),
    (5, &[4, 5, 6, 7, 13]),
    (4, &[8, 9, 10, 14, 15, 16, 17, 34]),
    (3, &[11, 12, 18, 19, 20, 21, 22, 26]),
];

/// All 24 labels in group order.
pub fn labels() -> Vec<u32> {
    GROUPS.iter().flat_map(|(_, ls)| ls.iter().copied()).collect()
}

/// Expected number of disjoint pairs of a type, `None` for unknown labels.
pub fn expected_disjoint_pairs(label: u32) -> Option<usize> {
    GROUPS
        .iter()
        .find(|(_, ls)| ls.contains(&label))
        .map(|(d, _)| *d)
}

/// Check that a label names one of the 24 types handled here.
pub fn check_label(label: u32) -> Result<()> {
    match label {
        _ if expected_disjoint_pairs(label).is_some() => Ok(()),
        1..=37 => Err(Error::ExcludedType(label)),
        _ => Err(Error::UnknownType(label)),
    }
}

/// Parse and validate a dataset text against the group table.
pub fn load_dataset(text: &str) -> Result<BTreeMap<u32, PolytopeData>> {
    let mut out = BTreeMap::new();
    for p in parse_dataset(text)? {
        if let Some(expected) = expected_disjoint_pairs(p.label) {
            let found = p.derived.disjoint_pairs.len();
            if found != expected {
                return Err(Error::Transcription {
                    label: p.label,
                    found,
                    expected,
                });
            }
        }
        out.insert(p.label, p);
    }
    if let Some(missing) = labels().into_iter().find(|l| !out.contains_key(l)) {
        return Err(Error::DatasetIncomplete(missing));
    }
    Ok(out)
}

/// The bundled 24 types keyed by label.
pub fn load_bundled_dataset() -> Result<BTreeMap<u32, PolytopeData>> {
    load_dataset(BUNDLED)
}

/// One bundled type.
pub fn polytope(label: u32) -> Result<PolytopeData> {
    check_label(label)?;
    let line = BUNDLED
        .lines()
        .find(|l| l.trim_start().starts_with(&format!("P{label}:")))
        .ok_or(Error::DatasetIncomplete(label))?;
    PolytopeData::parse(line)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_dataset_is_complete_and_consistent() {
        let d = load_bundled_dataset().unwrap();
        assert_eq!(d.len(), 24);
        assert_eq!(d[&1].chunks.len(), 14);
        assert_eq!(d[&17].derived.disjoint_pairs.len(), 4);
        assert_eq!(d[&21].derived.disjoint_pairs.len(), 3);
        assert_eq!(d[&34].chunks.len(), 16);
        assert_eq!(d[&34].symmetry_group.len(), 384);
    }

    #[test]
    fn excluded_and_unknown_labels() {
        assert!(matches!(polytope(23), Err(Error::ExcludedType(23))));
        assert!(matches!(polytope(40), Err(Error::UnknownType(40))));
        assert_eq!(polytope(7).unwrap().label, 7);
    }

    #[test]
    fn group_mismatch_is_reported() {
        let text = BUNDLED.replace("P2:", "P99:").replace("P4:", "P2:");
        assert!(matches!(
            load_dataset(&text),
            Err(Error::Transcription { label: 2, .. })
        ));
    }
}
