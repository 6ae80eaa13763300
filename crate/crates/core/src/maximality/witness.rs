//! Explicit extension sets given by position rules, for the two parameter
//! pairs where the whole union of addable families is not compatible.

use crate::exactnum::Rational;
use crate::families::Combinations;

fn thirds(v: i64) -> Rational {
    Rational::new(v, 3)
}

/// Points of `(4/3, (1/3)^7, -2/3)^P` with the `-2/3` placed before the
/// `4/3`; one point from each antipodal pair about `((1/3)^9)`.
pub fn half_pairs_9_3() -> Vec<Vec<Rational>> {
    let mut out = Vec::new();
    for low in 0..9 {
        for high in low + 1..9 {
            let mut p = vec![thirds(1); 9];
            p[low] = thirds(-2);
            p[high] = thirds(4);
            out.push(p);
        }
    }
    out
}

/// The 37 points added to `J(9, 3)`: `((1/3)^9)` plus [`half_pairs_9_3`].
pub fn extension_9_3() -> Vec<Vec<Rational>> {
    let mut out = vec![vec![thirds(1); 9]];
    out.extend(half_pairs_9_3());
    out
}

/// The 86 points of `((4/3)^2, (1/3)^6, -2/3)^P` whose `-2/3` sits after
/// both `4/3` entries, plus `(-2/3, 4/3, 4/3, (1/3)^6)` and
/// `(4/3, -2/3, 4/3, (1/3)^6)`.
pub fn partial_orbit_9_4() -> Vec<Vec<Rational>> {
    let mut out = Vec::new();
    for triple in Combinations::new(9, 3) {
        let mut p = vec![thirds(1); 9];
        p[triple[0]] = thirds(4);
        p[triple[1]] = thirds(4);
        p[triple[2]] = thirds(-2);
        out.push(p);
    }
    for (neg, pos) in [(0, [1, 2]), (1, [0, 2])] {
        let mut p = vec![thirds(1); 9];
        p[neg] = thirds(-2);
        for i in pos {
            p[i] = thirds(4);
        }
        out.push(p);
    }
    out
}

/// The 132 points added to `J(9, 4)`: all of `((2/3)^7, (-1/3)^2)^P` and
/// `(4/3, (1/3)^8)^P`, the single point `((2/3)^8, -4/3)`, and
/// [`partial_orbit_9_4`].
pub fn extension_9_4() -> Vec<Vec<Rational>> {
    let mut out = Vec::new();
    for pair in Combinations::new(9, 2) {
        let mut p = vec![thirds(2); 9];
        for i in pair {
            p[i] = thirds(-1);
        }
        out.push(p);
    }
    for i in 0..9 {
        let mut p = vec![thirds(1); 9];
        p[i] = thirds(4);
        out.push(p);
    }
    let mut p = vec![thirds(2); 9];
    p[8] = thirds(-4);
    out.push(p);
    out.extend(partial_orbit_9_4());
    out
}

/// The explicit extension recorded for `(n, m)`, if any.
pub fn known_extension(n: usize, m: usize) -> Option<Vec<Vec<Rational>>> {
    match (n, m) {
        (9, 3) => Some(extension_9_3()),
        (9, 4) => Some(extension_9_4()),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        assert_eq!(half_pairs_9_3().len(), 36);
        assert_eq!(extension_9_3().len(), 37);
        assert_eq!(partial_orbit_9_4().len(), 86);
        assert_eq!(extension_9_4().len(), 132);
    }

    #[test]
    fn all_on_hyperplane() {
        for p in extension_9_3() {
            assert_eq!(p.iter().sum::<Rational>(), Rational::from(3));
        }
        for p in extension_9_4() {
            assert_eq!(p.iter().sum::<Rational>(), Rational::from(4));
        }
    }
}
