//! Partition of index quadruples `(i, j, k, l)` used by the decomposition of
//! `c‖A‖²‖B‖² − f`. Indices are zero-based here.

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct IndexQuadruple {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub l: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum IndexSet {
    /// `(i, j, j, i)`, `i ≠ j`.
    D1,
    /// `(i, j, k, i)`, `j ≠ k`.
    D2,
    /// `(i, j, j, k)`, `i ≠ k`.
    D3,
    /// Everything else; contains `D0 = {(i, i, i, i)}`.
    D4,
}

impl IndexQuadruple {
    pub fn new(i: usize, j: usize, k: usize, l: usize) -> Self {
        Self { i, j, k, l }
    }

    pub fn classify(&self) -> IndexSet {
        let Self { i, j, k, l } = *self;
        match (j == k, i == l) {
            (true, true) if i != j => IndexSet::D1,
            (false, true) => IndexSet::D2,
            (true, false) => IndexSet::D3,
            _ => IndexSet::D4,
        }
    }

    pub fn in_d0(&self) -> bool {
        self.i == self.j && self.j == self.k && self.k == self.l
    }
}

#[derive(Clone, Debug, Default)]
pub struct IndexSets {
    pub d0: Vec<IndexQuadruple>,
    pub d1: Vec<IndexQuadruple>,
    pub d2: Vec<IndexQuadruple>,
    pub d3: Vec<IndexQuadruple>,
    pub d4: Vec<IndexQuadruple>,
}

impl IndexSets {
    pub fn get(&self, set: IndexSet) -> &[IndexQuadruple] {
        match set {
            IndexSet::D1 => &self.d1,
            IndexSet::D2 => &self.d2,
            IndexSet::D3 => &self.d3,
            IndexSet::D4 => &self.d4,
        }
    }
}

/// Classifies all `n⁴` quadruples.
pub fn enumerate_index_sets(n: usize) -> IndexSets {
    let mut sets = IndexSets::default();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let quad = IndexQuadruple::new(i, j, k, l);
                    if quad.in_d0() {
                        sets.d0.push(quad);
                    }
                    match quad.classify() {
                        IndexSet::D1 => sets.d1.push(quad),
                        IndexSet::D2 => sets.d2.push(quad),
                        IndexSet::D3 => sets.d3.push(quad),
                        IndexSet::D4 => sets.d4.push(quad),
                    }
                }
            }
        }
    }
    sets
}

#[cfg(test)]
mod tests {
    use super::*;

    // Brute-force membership straight from the set-builder definitions.
    fn sizes_by_definition(n: usize) -> [usize; 5] {
        let mut out = [0; 5];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let d0 = i == j && j == k && k == l;
                        let d1 = j == k && l == i && i != j;
                        let d2 = l == i && j != k;
                        let d3 = j == k && i != l;
                        out[0] += d0 as usize;
                        out[1] += d1 as usize;
                        out[2] += d2 as usize;
                        out[3] += d3 as usize;
                        out[4] += !(d1 || d2 || d3) as usize;
                    }
                }
            }
        }
        out
    }

    fn sizes(sets: &IndexSets) -> [usize; 5] {
        [
            sets.d0.len(),
            sets.d1.len(),
            sets.d2.len(),
            sets.d3.len(),
            sets.d4.len(),
        ]
    }

    #[test]
    fn n1() {
        let s = enumerate_index_sets(1);
        assert_eq!(sizes(&s), [1, 0, 0, 0, 1]);
        assert_eq!(s.d4, s.d0);
    }

    #[test]
    fn n2_and_n3_cardinalities() {
        assert_eq!(sizes(&enumerate_index_sets(2)), [2, 2, 4, 4, 6]);
        let s3 = sizes(&enumerate_index_sets(3));
        assert_eq!(&s3[1..], &[6, 18, 18, 39]);
    }

    #[test]
    fn matches_definitions_up_to_6() {
        for n in 1..=6 {
            assert_eq!(sizes(&enumerate_index_sets(n)), sizes_by_definition(n), "n={n}");
        }
    }

    #[test]
    fn d0_inside_d4() {
        let s = enumerate_index_sets(4);
        assert!(s.d0.iter().all(|q| s.d4.contains(q)));
    }
}
