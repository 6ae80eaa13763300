//! The Johnson representation and the candidate families that could extend
//! it.
//!
//! A candidate family is the permutation orbit of a vector whose coordinates
//! take the level values `-(j - 2) - k0/n` for `j = 1..=l`, the level `j`
//! occurring `k_j` times. Level values are handled scaled by `n`, which
//! keeps every coordinate an integer; `n * value_j = (2 - j) n - k0`.

use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactnum::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Parameters {
    n: usize,
    m: usize,
}

impl Parameters {
    /// Requires `m >= 1` and `n >= 2m`; `J(n, m)` and `J(n, n - m)` give
    /// congruent representations so the other half is never needed.
    pub fn new(n: usize, m: usize) -> Result<Self> {
        if m == 0 || n < 2 * m {
            return Err(Error::InvalidParameters { n, m });
        }
        Ok(Parameters { n, m })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn johnson(&self) -> JohnsonRep {
        JohnsonRep { params: *self }
    }

    /// The allowed squared distances `{2, 4, ..., 2m}`.
    pub fn allowed_sq_dists(&self) -> impl Iterator<Item = usize> {
        (1..=self.m).map(|t| 2 * t)
    }
}

pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `(1^m, 0^(n-m))` under all coordinate permutations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct JohnsonRep {
    params: Parameters,
}

impl JohnsonRep {
    pub fn params(&self) -> Parameters {
        self.params
    }

    pub fn cardinality(&self) -> BigUint {
        binomial(self.params.n, self.params.m)
    }

    /// Supports of the points (positions of the ones), lexicographic.
    pub fn supports(&self) -> Combinations {
        Combinations::new(self.params.n, self.params.m)
    }

    /// 0/1 points; the first is `(1^m, 0^(n-m))`.
    pub fn points(&self) -> impl Iterator<Item = Vec<Rational>> {
        let n = self.params.n;
        self.supports().map(move |support| {
            let mut point = vec![Rational::zero(); n];
            for i in support {
                point[i] = Rational::one();
            }
            point
        })
    }

    /// Points with every coordinate multiplied by `scale`.
    pub fn scaled_points(&self, scale: i64) -> impl Iterator<Item = Vec<i64>> {
        let n = self.params.n;
        self.supports().map(move |support| {
            let mut point = vec![0; n];
            for i in support {
                point[i] = scale;
            }
            point
        })
    }
}

/// `k`-subsets of `0..n` in lexicographic order.
#[derive(Debug, Clone)]
pub struct Combinations {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Combinations {
    pub fn new(n: usize, k: usize) -> Self {
        let current = (k <= n).then(|| (0..k).collect());
        Combinations { n, current }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.take()?;
        let k = out.len();
        let mut next = out.clone();
        let mut i = k;
        while i > 0 {
            i -= 1;
            if next[i] < self.n - k + i {
                next[i] += 1;
                for j in i + 1..k {
                    next[j] = next[j - 1] + 1;
                }
                self.current = Some(next);
                break;
            }
        }
        Some(out)
    }
}

/// Distinct permutations of a multiset of level indices, lexicographic.
#[derive(Debug, Clone)]
pub struct MultisetPermutations {
    current: Option<Vec<usize>>,
}

impl MultisetPermutations {
    /// Starts from the sorted arrangement: `counts[0]` zeros, then ones, ...
    pub fn new(counts: &[usize]) -> Self {
        let start = counts
            .iter()
            .enumerate()
            .flat_map(|(level, &c)| std::iter::repeat_n(level, c))
            .collect();
        MultisetPermutations {
            current: Some(start),
        }
    }
}

impl Iterator for MultisetPermutations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.take()?;
        let mut next = out.clone();
        let len = next.len();
        if len >= 2 {
            if let Some(i) = (0..len - 1).rev().find(|&i| next[i] < next[i + 1]) {
                let j = (i + 1..len).rev().find(|&j| next[j] > next[i]).unwrap();
                next.swap(i, j);
                next[i + 1..].reverse();
                self.current = Some(next);
            }
        }
        Some(out)
    }
}

/// Overlap counts `i_j` between a Johnson point's support and the level
/// classes of a family point.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct IProfile(pub Vec<usize>);

impl IProfile {
    pub fn is_valid_for(&self, fam: &CandidateFamily) -> bool {
        self.0.len() == fam.k.len()
            && self.0.iter().zip(&fam.k).all(|(i, k)| i <= k)
            && self.0.iter().sum::<usize>() == fam.params.m
    }

    /// `sum_j (j - 1) i_j` with `j` one-based.
    fn weight(&self) -> i128 {
        self.0
            .iter()
            .enumerate()
            .map(|(idx, &i)| idx as i128 * i as i128)
            .sum()
    }
}

/// All profiles `0 <= i_j <= k_j` with `sum i_j = m`.
pub fn profiles(k: &[usize], m: usize) -> Vec<IProfile> {
    fn rec(k: &[usize], left: usize, cur: &mut Vec<usize>, out: &mut Vec<IProfile>) {
        let idx = cur.len();
        if idx == k.len() {
            if left == 0 {
                out.push(IProfile(cur.clone()));
            }
            return;
        }
        let cap_after: usize = k[idx + 1..].iter().sum();
        let lo = left.saturating_sub(cap_after);
        for take in lo..=left.min(k[idx]) {
            cur.push(take);
            rec(k, left - take, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(k, m, &mut Vec::with_capacity(k.len()), &mut out);
    out
}

/// The orbit `(k0; k_1, ..., k_l)` in canonical form: `k_1 > 0`, `k_l > 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CandidateFamily {
    params: Parameters,
    k0: i64,
    k: Vec<usize>,
}

impl CandidateFamily {
    /// Canonicalizes (empty leading levels are folded into `k0`, empty
    /// trailing levels dropped) and checks that the multiplicities fill `n`
    /// coordinates on the hyperplane `sum x = m`.
    pub fn new(params: Parameters, k0: i64, k: Vec<usize>) -> Result<Self> {
        let lead = k.iter().take_while(|&&c| c == 0).count();
        if lead == k.len() {
            return Err(Error::InvalidFamily("all multiplicities are zero".into()));
        }
        let trail = k.iter().rev().take_while(|&&c| c == 0).count();
        let k0 = k0 + (lead * params.n) as i64;
        let k = k[lead..k.len() - trail].to_vec();
        Self::check(params, k0, &k)?;
        Ok(CandidateFamily { params, k0, k })
    }

    fn check(params: Parameters, k0: i64, k: &[usize]) -> Result<()> {
        let n = params.n as i64;
        let m = params.m as i64;
        let total: usize = k.iter().sum();
        if total != params.n {
            return Err(Error::InvalidFamily(format!(
                "multiplicities sum to {total}, expected {}",
                params.n
            )));
        }
        let weighted = weighted_sum(k);
        if weighted != 2 * n - k0 - m {
            return Err(Error::InvalidFamily(format!(
                "sum j k_j = {weighted} but 2n - k0 - m = {}",
                2 * n - k0 - m
            )));
        }
        Ok(())
    }

    pub fn params(&self) -> Parameters {
        self.params
    }

    pub fn k0(&self) -> i64 {
        self.k0
    }

    pub fn k(&self) -> &[usize] {
        &self.k
    }

    /// Number of distinct levels.
    pub fn l(&self) -> usize {
        self.k.len()
    }

    /// `n` times the level values, highest level first.
    pub fn scaled_levels(&self) -> Vec<i64> {
        let n = self.params.n as i64;
        (1..=self.k.len() as i64)
            .map(|j| (2 - j) * n - self.k0)
            .collect()
    }

    pub fn levels(&self) -> Vec<Rational> {
        let n = self.params.n as i64;
        self.scaled_levels()
            .into_iter()
            .map(|v| Rational::new(v, n))
            .collect()
    }

    /// Whether this orbit is the Johnson representation itself.
    pub fn is_johnson_pattern(&self) -> bool {
        self.k0 == 0 && self.k == [self.params.m, self.params.n - self.params.m]
    }

    /// Orbit size `n! / prod k_j!`.
    pub fn size(&self) -> BigUint {
        let mut acc = BigUint::one();
        let mut placed = 0;
        for &c in &self.k {
            placed += c;
            acc *= binomial(placed, c);
        }
        acc
    }

    pub fn sum_j2k(&self) -> i64 {
        sum_j2k(&self.k)
    }

    /// Orbit points as level indices (0-based), lexicographic.
    pub fn level_patterns(&self) -> MultisetPermutations {
        MultisetPermutations::new(&self.k)
    }

    pub fn points(&self) -> impl Iterator<Item = Vec<Rational>> {
        let levels = self.levels();
        self.level_patterns()
            .map(move |p| p.into_iter().map(|j| levels[j].clone()).collect())
    }

    /// Orbit points with coordinates multiplied by `n`.
    pub fn scaled_points(&self) -> impl Iterator<Item = Vec<i64>> {
        let levels = self.scaled_levels();
        self.level_patterns()
            .map(move |p| p.into_iter().map(|j| levels[j]).collect())
    }

    /// `n` times the squared distance from a Johnson point to a family point
    /// with overlap `profile`; exact integer.
    fn scaled_sq_dist(&self, profile: &IProfile) -> i128 {
        scaled_sq_dist_raw(self.params, self.k0, &self.k, profile.weight())
    }

    pub fn sq_dist_profile(&self, profile: &IProfile) -> Result<Rational> {
        if !profile.is_valid_for(self) {
            return Err(Error::InvalidProfile {
                profile: profile.0.clone(),
                k: self.k.clone(),
            });
        }
        Ok(Rational::new(
            self.scaled_sq_dist(profile),
            self.params.n as i64,
        ))
    }

    /// The profile realizing the largest squared distance: fill the `m`
    /// ones from the lowest level value (highest index) upwards.
    pub fn max_profile(&self) -> IProfile {
        IProfile(max_profile_raw(&self.k, self.params.m))
    }

    /// `M_X`, the largest squared distance from the Johnson representation
    /// to a point of this family; the same for every point of the orbit.
    pub fn m_x(&self) -> Rational {
        Rational::new(
            self.scaled_sq_dist(&self.max_profile()),
            self.params.n as i64,
        )
    }

    /// Whether every point of the orbit can join the Johnson representation
    /// without creating a new distance: `M_X` is an even integer at most
    /// `2m`. All other distances differ from `M_X` by even integers.
    pub fn is_addable(&self) -> bool {
        !self.is_johnson_pattern() && addable_raw(self.params, self.k0, &self.k)
    }

    /// One step of the level-merging rewrite, before canonicalization: for
    /// `l > 3` move one coordinate from level 1 to 2 and one from `l` to
    /// `l - 1`; for `l = 3` move one each from levels 1 and 3 into level 2.
    /// `k0` is unchanged.
    pub fn reduce_raw(&self) -> Result<Vec<usize>> {
        let l = self.l();
        if l < 3 {
            return Err(Error::NotReducible(l));
        }
        let mut k = self.k.clone();
        k[0] -= 1;
        k[l - 1] -= 1;
        if l == 3 {
            k[1] += 2;
        } else {
            k[1] += 1;
            k[l - 2] += 1;
        }
        Ok(k)
    }

    pub fn reduce(&self) -> Result<CandidateFamily> {
        let k = self.reduce_raw()?;
        CandidateFamily::new(self.params, self.k0, k)
    }

    pub fn reduction_trace(&self) -> ReductionTrace {
        let mut chain = vec![self.clone()];
        while chain.last().unwrap().l() >= 3 {
            let next = chain.last().unwrap().reduce().expect("l >= 3");
            chain.push(next);
        }
        let kbar = chain.last().unwrap().k0;
        ReductionTrace { chain, kbar }
    }

    /// Drop in `I_X = 2 sum (j - 1) i_j` (at the maximal profile) across one
    /// reduction step, predicted from the head and tail multiplicities:
    /// zero when `k_l > m` or when `k_1` satisfies `head`, two otherwise.
    pub fn predicted_ix_drop(&self, head: HeadCondition) -> i64 {
        let n = self.params.n;
        let m = self.params.m;
        let k1 = self.k[0];
        let kl = self.k[self.l() - 1];
        let head_hit = match head {
            HeadCondition::AtMost => k1 <= n - m,
            HeadCondition::Exceeds => k1 > n - m,
        };
        if head_hit || kl > m {
            0
        } else {
            2
        }
    }

    /// The drop in `I_X` across one reduction step computed from the
    /// maximal profiles, in the uncanonicalized indexing.
    pub fn ix_drop(&self) -> Result<i64> {
        let raw = self.reduce_raw()?;
        let m = self.params.m;
        let before = 2 * IProfile(max_profile_raw(&self.k, m)).weight();
        let after = 2 * IProfile(max_profile_raw(&raw, m)).weight();
        Ok((before - after) as i64)
    }
}

/// Comparison of `k_1` against `n - m` used by [`CandidateFamily::predicted_ix_drop`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HeadCondition {
    /// `k_1 <= n - m`
    AtMost,
    /// `k_1 > n - m`; the direction that agrees with [`CandidateFamily::ix_drop`]
    Exceeds,
}

impl fmt::Display for CandidateFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        let levels = self.levels();
        let parts = levels.iter().zip(&self.k).filter(|(_, &c)| c > 0);
        for (i, (v, c)) in parts.enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "({v})^{c}")?;
        }
        write!(f, ")^P")
    }
}

impl Serialize for CandidateFamily {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("CandidateFamily", 6)?;
        s.serialize_field("n", &self.params.n)?;
        s.serialize_field("m", &self.params.m)?;
        s.serialize_field("k0", &self.k0)?;
        s.serialize_field("k", &self.k)?;
        s.serialize_field("size", &self.size().to_string())?;
        s.serialize_field("levels", &self.levels())?;
        s.end()
    }
}

/// The chain `X, X', X'', ...` down to a family with at most two levels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReductionTrace {
    pub chain: Vec<CandidateFamily>,
    /// `k0` of the terminal family in canonical form; lies in `(-m, n - m]`.
    pub kbar: i64,
}

impl ReductionTrace {
    pub fn terminal(&self) -> &CandidateFamily {
        self.chain.last().unwrap()
    }
}

fn weighted_sum(k: &[usize]) -> i64 {
    k.iter()
        .enumerate()
        .map(|(idx, &c)| (idx as i64 + 1) * c as i64)
        .sum()
}

/// `sum_j j^2 k_j`, one-based `j`.
pub fn sum_j2k(k: &[usize]) -> i64 {
    k.iter()
        .enumerate()
        .map(|(idx, &c)| (idx as i64 + 1).pow(2) * c as i64)
        .sum()
}

fn max_profile_raw(k: &[usize], m: usize) -> Vec<usize> {
    let mut i = vec![0; k.len()];
    let mut left = m;
    for idx in (0..k.len()).rev() {
        let take = left.min(k[idx]);
        i[idx] = take;
        left -= take;
    }
    i
}

/// `n * d^2 = n (4 k0 + 3m - 4n + sum j^2 k_j + 2 w) - k0^2` with
/// `w = sum (j - 1) i_j`.
fn scaled_sq_dist_raw(params: Parameters, k0: i64, k: &[usize], weight: i128) -> i128 {
    let n = params.n as i128;
    let m = params.m as i128;
    let k0 = k0 as i128;
    n * (4 * k0 + 3 * m - 4 * n + sum_j2k(k) as i128 + 2 * weight) - k0 * k0
}

fn addable_raw(params: Parameters, k0: i64, k: &[usize]) -> bool {
    let n = params.n as i128;
    let weight = IProfile(max_profile_raw(k, params.m)).weight();
    let scaled = scaled_sq_dist_raw(params, k0, k, weight);
    if scaled % n != 0 {
        return false;
    }
    let mx = scaled / n;
    mx % 2 == 0 && mx > 0 && mx <= 2 * params.m as i128
}

/// Calls `visit` with every composition of `total` into `parts` parts whose
/// first and last parts are positive (a single part when `parts == 1`).
pub fn for_each_composition(total: usize, parts: usize, mut visit: impl FnMut(&[usize])) {
    fn rec(left: usize, parts: usize, cur: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize])) {
        let idx = cur.len();
        if idx + 1 == parts {
            if left >= 1 {
                cur.push(left);
                visit(cur);
                cur.pop();
            }
            return;
        }
        let lo = usize::from(idx == 0);
        // keep at least one for the last part
        for take in lo..left {
            cur.push(take);
            rec(left - take, parts, cur, visit);
            cur.pop();
        }
    }
    if parts == 0 || total == 0 {
        return;
    }
    rec(total, parts, &mut Vec::with_capacity(parts), &mut visit);
}

fn families_with_levels(params: Parameters, l: usize, addable_only: bool) -> Vec<CandidateFamily> {
    let n = params.n as i64;
    let m = params.m as i64;
    let mut out = Vec::new();
    for_each_composition(params.n, l, |k| {
        let k0 = 2 * n - m - weighted_sum(k);
        if k0 == 0 && k == [params.m, params.n - params.m] {
            return;
        }
        if addable_only && !addable_raw(params, k0, k) {
            return;
        }
        out.push(CandidateFamily {
            params,
            k0,
            k: k.to_vec(),
        });
    });
    out
}

/// Every canonical family with `1 <= l <= m` levels except the Johnson
/// representation itself, ordered by `l` then lexicographically by `k`.
pub fn enumerate_families(params: Parameters) -> Vec<CandidateFamily> {
    (1..=params.m)
        .into_par_iter()
        .map(|l| families_with_levels(params, l, false))
        .flatten()
        .collect()
}

/// The addable subset of [`enumerate_families`], in the same order.
pub fn addable_families(params: Parameters) -> Vec<CandidateFamily> {
    (1..=params.m)
        .into_par_iter()
        .map(|l| families_with_levels(params, l, true))
        .flatten()
        .collect()
}
