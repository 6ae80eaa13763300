//! Two-distance extensions of `J(n-1, 2)` placed in `R^n` with a fixed last
//! coordinate: `(1^2, 0^(n-3), 0)^P'`, where `P'` permutes all coordinates
//! but the last.
//!
//! An addable point has the shape `(a^k, (a-1)^(n-k-1), b)^P'` with
//! `b = -(n-1)a + (n-k+1)`. Against a Johnson point whose two ones meet
//! `i2` of the `a-1` entries, the squared distance is
//! `n(n-1)a^2 - 2n(n-k+1)a + (n-k+1)(n-k+2) + 2 i2`.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{solve_quadratic, sq_dist, QuadNum, Rational};
use crate::families::{binomial, Combinations};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

impl Serialize for Sign {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_char(self.symbol())
    }
}

/// One orbit `(a^k, (a-1)^(n-k-1), b)^P'`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubFamily {
    pub n: usize,
    /// 1 and 2 for `k = 0` at squared distance 2 and 4, 3 for `k = 1`,
    /// 4 for `k = n-2`.
    pub index: u8,
    pub sign: Sign,
    pub k: usize,
    pub a: QuadNum,
    pub b: QuadNum,
}

impl SubFamily {
    pub fn label(&self) -> String {
        format!("X{}{}", self.index, self.sign.symbol())
    }

    pub fn size(&self) -> usize {
        binomial(self.n - 1, self.k)
            .try_into()
            .expect("small orbit")
    }

    /// Orbit points, `a` positions in lexicographic order.
    pub fn points(&self) -> Vec<Vec<QuadNum>> {
        let low = &self.a - &QuadNum::one();
        Combinations::new(self.n - 1, self.k)
            .map(|pos| {
                let mut p = vec![low.clone(); self.n];
                for i in pos {
                    p[i] = self.a.clone();
                }
                p[self.n - 1] = self.b.clone();
                p
            })
            .collect()
    }
}

impl fmt::Display for SubFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let low = &self.a - &QuadNum::one();
        let mut parts = Vec::new();
        if self.k > 0 {
            parts.push(format!("({})^{}", self.a, self.k));
        }
        if self.n - 1 > self.k {
            parts.push(format!("({})^{}", low, self.n - 1 - self.k));
        }
        parts.push(format!("{}", self.b));
        write!(f, "{}: ({})^P'", self.label(), parts.join(", "))
    }
}

/// The `binomial(n-1, 2)` points of `J(n-1, 2)` in `R^n`.
pub fn sub_johnson_points(n: usize) -> Vec<Vec<QuadNum>> {
    Combinations::new(n - 1, 2)
        .map(|pair| {
            let mut p = vec![QuadNum::zero(); n];
            for i in pair {
                p[i] = QuadNum::one();
            }
            p
        })
        .collect()
}

/// Feasible `i2` values for a given `k`.
pub fn overlap_range(n: usize, k: usize) -> std::ops::RangeInclusive<usize> {
    2usize.saturating_sub(k)..=2.min(n - k - 1)
}

fn quadratic_coefficients(n: usize, k: usize) -> [Rational; 3] {
    let n = n as i64;
    let k = k as i64;
    [
        Rational::from(n * (n - 1)),
        Rational::from(-2 * n * (n - k + 1)),
        Rational::from((n - k + 1) * (n - k + 2)),
    ]
}

pub fn sub_sq_dist(n: usize, k: usize, a: &QuadNum, i2: usize) -> Result<QuadNum> {
    if k > n.saturating_sub(2) || !overlap_range(n, k).contains(&i2) {
        return Err(Error::InfeasibleOverlap { n, k, i2 });
    }
    let [c2, c1, c0] = quadratic_coefficients(n, k);
    Ok(a.square().scale(&c2) + a.scale(&c1) + QuadNum::from(c0 + Rational::from(2 * i2 as i64)))
}

fn is_two_distance(d: &QuadNum) -> bool {
    *d == QuadNum::from(2) || *d == QuadNum::from(4)
}

/// Every orbit that can join `J(n-1, 2)` in full, found by solving the
/// quadratic for each `k` and each choice of distance at the smallest
/// overlap, then checking all overlaps and all pairs inside the orbit.
pub fn solve_sub_families(n: usize) -> Result<Vec<SubFamily>> {
    if n < 5 {
        return Err(Error::InvalidParameters { n, m: 2 });
    }
    let mut out = Vec::new();
    for k in 0..=n - 2 {
        let range = overlap_range(n, k);
        let lowest = *range.start() as i64;
        for target in [2i64, 4] {
            let [c2, c1, c0] = quadratic_coefficients(n, k);
            let c0 = c0 - Rational::from(target - 2 * lowest);
            let (minus, plus) = match solve_quadratic(&c2, &c1, &c0) {
                Ok(roots) => roots,
                Err(_) => continue,
            };
            let roots = if minus == plus {
                vec![(Sign::Plus, plus)]
            } else {
                vec![(Sign::Plus, plus), (Sign::Minus, minus)]
            };
            for (sign, a) in roots {
                let fits = range
                    .clone()
                    .all(|i2| is_two_distance(&sub_sq_dist(n, k, &a, i2).expect("in range")));
                if !fits {
                    continue;
                }
                let index = match (k, target) {
                    (0, 2) => 1,
                    (0, _) => 2,
                    (1, _) => 3,
                    _ => 4,
                };
                let b =
                    a.scale(&Rational::from(-(n as i64 - 1))) + QuadNum::from((n - k + 1) as i64);
                let fam = SubFamily {
                    n,
                    index,
                    sign,
                    k,
                    a,
                    b,
                };
                if self_compatible(&fam) {
                    out.push(fam);
                }
            }
        }
    }
    out.sort_by_key(|f| (f.index, f.sign));
    Ok(out)
}

fn self_compatible(fam: &SubFamily) -> bool {
    let pts = fam.points();
    pts.iter()
        .enumerate()
        .all(|(i, p)| pts[i + 1..].iter().all(|q| is_two_distance(&sq_dist(p, q))))
}

fn cross_compatible(a: &[Vec<QuadNum>], b: &[Vec<QuadNum>]) -> bool {
    a.iter()
        .all(|p| b.iter().all(|q| is_two_distance(&sq_dist(p, q))))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Combination {
    /// Indices into [`SubSearch::families`], increasing.
    pub members: Vec<usize>,
    pub labels: Vec<String>,
    pub added: usize,
    pub total: usize,
    /// No further family can be joined.
    pub maximal: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubSearch {
    pub n: usize,
    pub johnson_size: usize,
    pub families: Vec<SubFamily>,
    /// Every nonempty set of families that can be added together.
    pub combinations: Vec<Combination>,
}

impl SubSearch {
    pub fn find(&self, labels: &[&str]) -> Option<&Combination> {
        let mut want: Vec<&str> = labels.to_vec();
        want.sort_unstable();
        self.combinations.iter().find(|c| {
            let mut have: Vec<&str> = c.labels.iter().map(String::as_str).collect();
            have.sort_unstable();
            have == want
        })
    }

    /// Maximal combinations of at least two families.
    pub fn listed(&self) -> impl Iterator<Item = &Combination> {
        self.combinations
            .iter()
            .filter(|c| c.maximal && c.members.len() >= 2)
    }

    /// `J(n-1, 2)` together with the points of a combination.
    pub fn union_points(&self, comb: &Combination) -> Vec<Vec<QuadNum>> {
        let mut out = sub_johnson_points(self.n);
        for &i in &comb.members {
            out.extend(self.families[i].points());
        }
        out
    }
}

/// All subsets of the solved families whose union with `J(n-1, 2)` keeps
/// squared distances in `{2, 4}`.
pub fn combination_search(n: usize) -> Result<SubSearch> {
    let families = solve_sub_families(n)?;
    let points: Vec<_> = families.iter().map(SubFamily::points).collect();
    let f = families.len();
    let compat: Vec<Vec<bool>> = (0..f)
        .map(|i| {
            (0..f)
                .map(|j| i == j || cross_compatible(&points[i], &points[j]))
                .collect()
        })
        .collect();
    let johnson_size = (n - 1) * (n - 2) / 2;
    let valid = |mask: u32| {
        (0..f).all(|i| mask & (1 << i) == 0 || (0..f).all(|j| mask & (1 << j) == 0 || compat[i][j]))
    };
    let mut combinations = Vec::new();
    for mask in 1u32..(1 << f) {
        if !valid(mask) {
            continue;
        }
        let members: Vec<usize> = (0..f).filter(|i| mask & (1 << i) != 0).collect();
        let added: usize = members.iter().map(|&i| families[i].size()).sum();
        let maximal = (0..f).all(|j| mask & (1 << j) != 0 || !valid(mask | (1 << j)));
        combinations.push(Combination {
            labels: members.iter().map(|&i| families[i].label()).collect(),
            members,
            added,
            total: johnson_size + added,
            maximal,
        });
    }
    Ok(SubSearch {
        n,
        johnson_size,
        families,
        combinations,
    })
}

/// Whether two finite point sets are congruent: some bijection preserves
/// every pairwise squared distance.
pub fn congruent(a: &[Vec<QuadNum>], b: &[Vec<QuadNum>]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut classes = BTreeMap::new();
    let da = distance_classes(a, &mut classes);
    let db = distance_classes(b, &mut classes);
    let signature = |rows: &[Vec<u32>]| -> Vec<Vec<u32>> {
        rows.iter()
            .map(|r| {
                let mut s = r.clone();
                s.sort_unstable();
                s
            })
            .collect()
    };
    let (sa, sb) = (signature(&da), signature(&db));
    let (mut ca, mut cb) = (sa.clone(), sb.clone());
    ca.sort();
    cb.sort();
    if ca != cb {
        return false;
    }
    let mut image = vec![usize::MAX; a.len()];
    let mut used = vec![false; b.len()];
    extend_match(0, &da, &db, &sa, &sb, &mut image, &mut used)
}

fn distance_classes(pts: &[Vec<QuadNum>], classes: &mut BTreeMap<QuadNum, u32>) -> Vec<Vec<u32>> {
    pts.iter()
        .map(|p| {
            pts.iter()
                .map(|q| {
                    let next = classes.len() as u32;
                    *classes.entry(sq_dist(p, q)).or_insert(next)
                })
                .collect()
        })
        .collect()
}

fn extend_match(
    i: usize,
    da: &[Vec<u32>],
    db: &[Vec<u32>],
    sa: &[Vec<u32>],
    sb: &[Vec<u32>],
    image: &mut [usize],
    used: &mut [bool],
) -> bool {
    if i == da.len() {
        return true;
    }
    for c in 0..db.len() {
        if used[c] || sa[i] != sb[c] || (0..i).any(|j| da[i][j] != db[c][image[j]]) {
            continue;
        }
        image[i] = c;
        used[c] = true;
        if extend_match(i + 1, da, db, sa, sb, image, used) {
            return true;
        }
        used[c] = false;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> QuadNum {
        s.parse().unwrap()
    }

    fn family(n: usize, label: &str) -> SubFamily {
        solve_sub_families(n)
            .unwrap()
            .into_iter()
            .find(|f| f.label() == label)
            .unwrap_or_else(|| panic!("{label} missing for n = {n}"))
    }

    #[test]
    fn johnson_points() {
        assert_eq!(sub_johnson_points(5).len(), 6);
        assert_eq!(sub_johnson_points(8).len(), 21);
        assert_eq!(sub_johnson_points(17).len(), 120);
        assert!(sub_johnson_points(8)
            .iter()
            .all(|p| p[7] == QuadNum::zero()));
    }

    #[test]
    fn distance_formula() {
        assert_eq!(sub_sq_dist(9, 0, &q("4/3"), 2).unwrap(), QuadNum::from(2));
        for i2 in overlap_range(8, 6) {
            assert!(is_two_distance(&sub_sq_dist(8, 6, &q("1/2"), i2).unwrap()));
        }
        for n in 5..12 {
            assert_eq!(
                sub_sq_dist(n, n - 2, &QuadNum::zero(), 0).unwrap(),
                QuadNum::from(12)
            );
        }
        assert!(sub_sq_dist(9, 0, &q("1"), 0).is_err());
    }

    #[test]
    fn formula_matches_points() {
        for n in 5..=10 {
            let johnson = sub_johnson_points(n);
            for fam in solve_sub_families(n).unwrap() {
                for y in fam.points() {
                    for x in &johnson {
                        let i2 = (0..n - 1)
                            .filter(|&c| x[c] == QuadNum::one() && y[c] != fam.a)
                            .count();
                        assert_eq!(sq_dist(x, &y), sub_sq_dist(n, fam.k, &fam.a, i2).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn closed_forms() {
        let x1 = family(9, "X1+");
        assert_eq!(
            x1.points(),
            vec![vec![q("1/3"); 8]
                .into_iter()
                .chain([q("-2/3")])
                .collect::<Vec<_>>()]
        );
        let x2 = family(8, "X2+");
        assert_eq!(x2.points()[0][0], q("1/2"));
        assert_eq!(x2.b, q("-3/2"));
        for n in 5..30 {
            let fams = solve_sub_families(n).unwrap();
            assert!(fams.iter().all(|f| matches!(f.k, 0 | 1) || f.k == n - 2));
            let x4 = fams.iter().filter(|f| f.index == 4).count();
            assert_eq!(
                x4,
                match n {
                    ..=9 => 2,
                    10 => 1,
                    _ => 0,
                },
                "n = {n}"
            );
            for f in &fams {
                assert_eq!(f.points().len(), f.size());
                assert_eq!(f.size(), if f.k == 0 { 1 } else { n - 1 });
                for p in f.points() {
                    let s = p.iter().fold(QuadNum::zero(), |acc, x| acc + x);
                    assert_eq!(s, QuadNum::from(2));
                }
            }
        }
        // n = 5, d^2 = 2: the displayed entries (5 -+ sqrt5)/10 are a - 1
        let mut roots: Vec<(QuadNum, QuadNum)> = ["X1+", "X1-"]
            .iter()
            .map(|l| {
                let f = family(5, l);
                (f.a.clone(), f.points()[0][0].clone())
            })
            .collect();
        roots.sort();
        assert_eq!(
            roots,
            vec![
                (q("3/2+-1/10*sqrt(5)"), q("1/2+-1/10*sqrt(5)")),
                (q("3/2+1/10*sqrt(5)"), q("1/2+1/10*sqrt(5)")),
            ]
        );
        // X3-: (1, 0^7, 1), X4-: ((1/3)^7, -2/3, 1/3)
        let x3 = family(9, "X3-");
        assert_eq!((x3.a.clone(), x3.b.clone()), (q("1"), q("1")));
        let x4 = family(9, "X4-");
        assert_eq!((x4.a.clone(), x4.b.clone()), (q("1/3"), q("1/3")));
    }

    #[test]
    fn printed_combinations() {
        let s = combination_search(6).unwrap();
        assert_eq!(s.find(&["X1+", "X4-"]).unwrap().total, 16);
        assert_eq!(s.find(&["X1-", "X4+"]).unwrap().total, 16);
        let s = combination_search(8).unwrap();
        assert_eq!(s.find(&["X2+", "X4+"]).unwrap().total, 29);
        assert_eq!(s.find(&["X2-", "X4-"]).unwrap().total, 29);
        let s = combination_search(9).unwrap();
        let c = s.find(&["X1+", "X3-", "X4-"]).unwrap();
        assert_eq!((c.added, c.total), (17, 45));
        assert_eq!(s.find(&["X1+", "X1-"]).unwrap().total, 30);
        let s = combination_search(17).unwrap();
        assert_eq!(s.find(&["X1+", "X2-"]).unwrap().total, 122);
        assert_eq!(s.find(&["X1-", "X2+"]).unwrap().total, 122);
    }

    #[test]
    fn mirror_closed() {
        for n in 5..=17 {
            let s = combination_search(n).unwrap();
            for c in &s.combinations {
                let mirrored: Vec<String> = c
                    .members
                    .iter()
                    .map(|&i| {
                        let f = &s.families[i];
                        format!("X{}{}", f.index, f.sign.flip().symbol())
                    })
                    .collect();
                let refs: Vec<&str> = mirrored.iter().map(String::as_str).collect();
                // n = 10 has a single X4
                if n == 10 && c.labels.iter().any(|l| l.starts_with("X4")) {
                    continue;
                }
                assert!(s.find(&refs).is_some(), "n = {n}: {:?}", c.labels);
            }
        }
    }

    #[test]
    fn congruence() {
        let s = combination_search(7).unwrap();
        let i = s.families.iter().position(|f| f.label() == "X3+").unwrap();
        let mut union = sub_johnson_points(7);
        union.extend(s.families[i].points());
        let full: Vec<Vec<QuadNum>> = crate::families::Parameters::new(7, 2)
            .unwrap()
            .johnson()
            .points()
            .map(|p| p.into_iter().map(QuadNum::from).collect())
            .collect();
        assert!(congruent(&union, &full));
        let mut other = full.clone();
        other[0][0] = QuadNum::from(5);
        assert!(!congruent(&union, &other));
        assert!(!congruent(&union, &full[1..]));
    }
}
