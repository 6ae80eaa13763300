//! Distance spectra between point orbits, computed without materializing
//! the orbits.
//!
//! A Johnson point against a family point is summarized by its overlap
//! profile. Two family points are summarized by the table `c[u][v]`
//! counting coordinates at level `u` in the first and level `v` in the
//! second; its row sums are the first family's multiplicities and its column
//! sums the second's. Coordinates permute freely, so every table with those
//! margins is realized by some pair of points.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{Rational, Scalar};
use crate::families::{profiles, CandidateFamily};

/// Sorted set of nonzero squared distances.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct Spectrum<T: Ord = Rational> {
    values: BTreeSet<T>,
}

impl<T: Ord> Default for Spectrum<T> {
    fn default() -> Self {
        Spectrum {
            values: BTreeSet::new(),
        }
    }
}

impl<T: Ord> Spectrum<T> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn values(&self) -> impl Iterator<Item = &T> {
        self.values.iter()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max(&self) -> Option<&T> {
        self.values.iter().next_back()
    }

    pub fn contains(&self, value: &T) -> bool {
        self.values.contains(value)
    }

    pub fn union(&mut self, other: Spectrum<T>) {
        self.values.extend(other.values);
    }
}

impl<T: Scalar> Spectrum<T> {
    /// Zero is dropped; it only arises from a point paired with itself.
    pub fn insert(&mut self, value: T) {
        if value != T::zero() {
            self.values.insert(value);
        }
    }

    /// True when every value is one of `2, 4, ..., 2m`.
    pub fn within_johnson(&self, m: usize) -> bool {
        self.values
            .iter()
            .all(|v| v.as_rational().is_some_and(|r| is_johnson_distance(&r, m)))
    }
}

impl<T: Ord> FromIterator<T> for Spectrum<T> {
    fn from_iter<I: IntoIterator<Item = T>>(iter: I) -> Self {
        Spectrum {
            values: iter.into_iter().collect(),
        }
    }
}

pub fn is_johnson_distance(value: &Rational, m: usize) -> bool {
    match value.to_i64() {
        Some(v) => v > 0 && v % 2 == 0 && v <= 2 * m as i64,
        None => false,
    }
}

/// Squared distances between the Johnson representation and a family, one
/// per feasible overlap profile. With `n >= 2m` every profile is realized.
pub fn johnson_family_spectrum(fam: &CandidateFamily) -> Spectrum {
    let mut out = Spectrum::new();
    for profile in profiles(fam.k(), fam.params().m()) {
        out.insert(fam.sq_dist_profile(&profile).expect("enumerated profile"));
    }
    out
}

/// Squared distances between points of two families of the same
/// parameters. With `a == b` this is the intra-family spectrum.
pub fn cross_family_spectrum(a: &CandidateFamily, b: &CandidateFamily) -> Result<Spectrum> {
    if a.params() != b.params() {
        return Err(Error::ParameterMismatch);
    }
    let n = a.params().n() as i128;
    let scaled = table_sums(&a.scaled_levels(), a.k(), &b.scaled_levels(), b.k());
    let mut out = Spectrum::new();
    for s in scaled {
        out.insert(Rational::new(s, n * n));
    }
    Ok(out)
}

/// Every value of `sum c[u][v] (va[u] - vb[v])^2` over nonnegative integer
/// tables with row sums `ka` and column sums `kb`.
///
/// Rows are filled one at a time; partial tables that leave the same column
/// capacities are merged, so the work is bounded by the number of capacity
/// vectors rather than the number of tables.
fn table_sums(va: &[i64], ka: &[usize], vb: &[i64], kb: &[usize]) -> BTreeSet<i128> {
    let weights: Vec<Vec<i128>> = va
        .iter()
        .map(|&x| vb.iter().map(|&y| ((x - y) as i128).pow(2)).collect())
        .collect();
    let mut states: BTreeMap<Vec<usize>, BTreeSet<i128>> = BTreeMap::new();
    states.insert(kb.to_vec(), BTreeSet::from([0]));
    for (row, &row_sum) in ka.iter().enumerate() {
        let mut next: BTreeMap<Vec<usize>, BTreeSet<i128>> = BTreeMap::new();
        for (caps, sums) in &states {
            fill_row(&weights[row], row_sum, caps, &mut |cells, cost| {
                let left: Vec<usize> = caps.iter().zip(cells).map(|(c, x)| c - x).collect();
                let slot = next.entry(left).or_default();
                slot.extend(sums.iter().map(|s| s + cost));
            });
        }
        states = next;
    }
    states.into_values().flatten().collect()
}

/// Visits every split of `total` into cells bounded by `caps`, with the
/// weighted cost of the split.
fn fill_row(weights: &[i128], total: usize, caps: &[usize], visit: &mut dyn FnMut(&[usize], i128)) {
    fn rec(
        weights: &[i128],
        left: usize,
        caps: &[usize],
        cur: &mut Vec<usize>,
        cost: i128,
        visit: &mut dyn FnMut(&[usize], i128),
    ) {
        let idx = cur.len();
        if idx == caps.len() {
            if left == 0 {
                visit(cur, cost);
            }
            return;
        }
        let room_after: usize = caps[idx + 1..].iter().sum();
        let lo = left.saturating_sub(room_after);
        for take in lo..=left.min(caps[idx]) {
            cur.push(take);
            rec(
                weights,
                left - take,
                caps,
                cur,
                cost + take as i128 * weights[idx],
                visit,
            );
            cur.pop();
        }
    }
    rec(
        weights,
        total,
        caps,
        &mut Vec::with_capacity(caps.len()),
        0,
        visit,
    );
}
