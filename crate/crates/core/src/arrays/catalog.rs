//! Standard Taguchi arrays stored as their published tables.
//!
//! Rows follow the conventional published order; L9 in particular runs
//! `0000, 0111, 0222, 1012, …` so run numbers line up with the usual
//! four-factor three-level layout.

use super::{ArrayError, OrthogonalArray};

struct Entry {
    name: &'static str,
    levels: usize,
    table: &'static [&'static [u8]],
}

const CATALOG: &[Entry] = &[
    Entry {
        name: "L4",
        levels: 2,
        table: L4,
    },
    Entry {
        name: "L8",
        levels: 2,
        table: L8,
    },
    Entry {
        name: "L9",
        levels: 3,
        table: L9,
    },
    Entry {
        name: "L16",
        levels: 2,
        table: L16,
    },
    Entry {
        name: "L27",
        levels: 3,
        table: L27,
    },
];

/// Catalog array names, smallest first.
pub fn names() -> Vec<&'static str> {
    CATALOG.iter().map(|e| e.name).collect()
}

/// Looks up a standard array by name (case-insensitive).
pub fn get_array(name: &str) -> Result<OrthogonalArray, ArrayError> {
    CATALOG
        .iter()
        .find(|e| e.name.eq_ignore_ascii_case(name.trim()))
        .map(build)
        .ok_or_else(|| ArrayError::UnknownArray {
            name: name.to_string(),
            available: names().into_iter().map(String::from).collect(),
        })
}

/// Smallest catalog array offering at least `factor_count` columns at
/// `levels` levels each.
pub fn select_array(factor_count: usize, levels: usize) -> Result<OrthogonalArray, ArrayError> {
    let mut candidates: Vec<&Entry> = CATALOG.iter().filter(|e| e.levels == levels).collect();
    candidates.sort_by_key(|e| e.table.len());
    candidates
        .iter()
        .find(|e| factor_count >= 1 && e.table[0].len() >= factor_count)
        .map(|e| build(e))
        .ok_or_else(|| ArrayError::Capacity {
            factors: factor_count,
            levels,
            largest: candidates.last().map(|e| e.name.to_string()),
        })
}

fn build(entry: &Entry) -> OrthogonalArray {
    let columns = entry.table[0].len();
    let cells = entry
        .table
        .iter()
        .map(|row| row.iter().map(|&l| l as usize).collect())
        .collect();
    OrthogonalArray::new(entry.name, vec![entry.levels; columns], cells, 2)
        .expect("catalog tables are well-formed")
}

const L4: &[&[u8]] = &[&[0, 0, 0], &[0, 1, 1], &[1, 0, 1], &[1, 1, 0]];

const L8: &[&[u8]] = &[
    &[0, 0, 0, 0, 0, 0, 0],
    &[0, 0, 0, 1, 1, 1, 1],
    &[0, 1, 1, 0, 0, 1, 1],
    &[0, 1, 1, 1, 1, 0, 0],
    &[1, 0, 1, 0, 1, 0, 1],
    &[1, 0, 1, 1, 0, 1, 0],
    &[1, 1, 0, 0, 1, 1, 0],
    &[1, 1, 0, 1, 0, 0, 1],
];

const L9: &[&[u8]] = &[
    &[0, 0, 0, 0],
    &[0, 1, 1, 1],
    &[0, 2, 2, 2],
    &[1, 0, 1, 2],
    &[1, 1, 2, 0],
    &[1, 2, 0, 1],
    &[2, 0, 2, 1],
    &[2, 1, 0, 2],
    &[2, 2, 1, 0],
];

const L16: &[&[u8]] = &[
    &[0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    &[0, 0, 0, 0, 0, 0, 0, 1, 1, 1, 1, 1, 1, 1, 1],
    &[0, 0, 0, 1, 1, 1, 1, 0, 0, 0, 0, 1, 1, 1, 1],
    &[0, 0, 0, 1, 1, 1, 1, 1, 1, 1, 1, 0, 0, 0, 0],
    &[0, 1, 1, 0, 0, 1, 1, 0, 0, 1, 1, 0, 0, 1, 1],
    &[0, 1, 1, 0, 0, 1, 1, 1, 1, 0, 0, 1, 1, 0, 0],
    &[0, 1, 1, 1, 1, 0, 0, 0, 0, 1, 1, 1, 1, 0, 0],
    &[0, 1, 1, 1, 1, 0, 0, 1, 1, 0, 0, 0, 0, 1, 1],
    &[1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1],
    &[1, 0, 1, 0, 1, 0, 1, 1, 0, 1, 0, 1, 0, 1, 0],
    &[1, 0, 1, 1, 0, 1, 0, 0, 1, 0, 1, 1, 0, 1, 0],
    &[1, 0, 1, 1, 0, 1, 0, 1, 0, 1, 0, 0, 1, 0, 1],
    &[1, 1, 0, 0, 1, 1, 0, 0, 1, 1, 0, 0, 1, 1, 0],
    &[1, 1, 0, 0, 1, 1, 0, 1, 0, 0, 1, 1, 0, 0, 1],
    &[1, 1, 0, 1, 0, 0, 1, 0, 1, 1, 0, 1, 0, 0, 1],
    &[1, 1, 0, 1, 0, 0, 1, 1, 0, 0, 1, 0, 1, 1, 0],
];

const L27: &[&[u8]] = &[
    &[0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    &[0, 0, 0, 0, 1, 1, 1, 1, 1, 1, 1, 1, 1],
    &[0, 0, 0, 0, 2, 2, 2, 2, 2, 2, 2, 2, 2],
    &[0, 1, 1, 1, 0, 0, 0, 1, 1, 1, 2, 2, 2],
    &[0, 1, 1, 1, 1, 1, 1, 2, 2, 2, 0, 0, 0],
    &[0, 1, 1, 1, 2, 2, 2, 0, 0, 0, 1, 1, 1],
    &[0, 2, 2, 2, 0, 0, 0, 2, 2, 2, 1, 1, 1],
    &[0, 2, 2, 2, 1, 1, 1, 0, 0, 0, 2, 2, 2],
    &[0, 2, 2, 2, 2, 2, 2, 1, 1, 1, 0, 0, 0],
    &[1, 0, 1, 2, 0, 1, 2, 0, 1, 2, 0, 1, 2],
    &[1, 0, 1, 2, 1, 2, 0, 1, 2, 0, 1, 2, 0],
    &[1, 0, 1, 2, 2, 0, 1, 2, 0, 1, 2, 0, 1],
    &[1, 1, 2, 0, 0, 1, 2, 1, 2, 0, 2, 0, 1],
    &[1, 1, 2, 0, 1, 2, 0, 2, 0, 1, 0, 1, 2],
    &[1, 1, 2, 0, 2, 0, 1, 0, 1, 2, 1, 2, 0],
    &[1, 2, 0, 1, 0, 1, 2, 2, 0, 1, 1, 2, 0],
    &[1, 2, 0, 1, 1, 2, 0, 0, 1, 2, 2, 0, 1],
    &[1, 2, 0, 1, 2, 0, 1, 1, 2, 0, 0, 1, 2],
    &[2, 0, 2, 1, 0, 2, 1, 0, 2, 1, 0, 2, 1],
    &[2, 0, 2, 1, 1, 0, 2, 1, 0, 2, 1, 0, 2],
    &[2, 0, 2, 1, 2, 1, 0, 2, 1, 0, 2, 1, 0],
    &[2, 1, 0, 2, 0, 2, 1, 1, 0, 2, 2, 1, 0],
    &[2, 1, 0, 2, 1, 0, 2, 2, 1, 0, 0, 2, 1],
    &[2, 1, 0, 2, 2, 1, 0, 0, 2, 1, 1, 0, 2],
    &[2, 2, 1, 0, 0, 2, 1, 2, 1, 0, 1, 0, 2],
    &[2, 2, 1, 0, 1, 0, 2, 0, 2, 1, 2, 1, 0],
    &[2, 2, 1, 0, 2, 1, 0, 1, 0, 2, 0, 2, 1],
];
