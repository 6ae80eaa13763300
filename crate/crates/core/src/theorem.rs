//! Number-theoretic side: the special factor `n0`, the closed-form
//! non-maximality test and the explicit two-level extension families.

use std::cmp::Ordering;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::families::{addable_families, CandidateFamily, Parameters};

/// Prime factorization with strictly increasing primes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Factorization {
    pub pairs: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn of(mut n: u64) -> Self {
        assert!(n >= 1, "factorization of zero");
        let mut pairs = Vec::new();
        let mut p = 2u64;
        while p * p <= n {
            if n.is_multiple_of(p) {
                let mut e = 0;
                while n.is_multiple_of(p) {
                    n /= p;
                    e += 1;
                }
                pairs.push((p, e));
            }
            p += if p == 2 { 1 } else { 2 };
        }
        if n > 1 {
            pairs.push((n, 1));
        }
        Factorization { pairs }
    }

    pub fn product(&self) -> u64 {
        self.pairs.iter().map(|&(p, e)| p.pow(e)).product()
    }
}

/// The special factor of `n`: each odd prime power `p^e` contributes
/// `p^ceil(e/2)`, and `2^e` (for `e > 0`) contributes `2^ceil((e+1)/2)`.
pub fn n0(n: u64) -> u64 {
    Factorization::of(n)
        .pairs
        .iter()
        .map(|&(p, e)| {
            if p == 2 {
                2u64.pow((e + 2) / 2)
            } else {
                p.pow(e.div_ceil(2))
            }
        })
        .product()
}

/// Whether `J(n, m)` can be extended without a new distance:
/// `n > n0` and `3 n0 - n0^2 / n <= 4m`, compared in integers.
pub fn nonmaximal_predicate(n: usize, m: usize) -> Result<bool> {
    if m < 2 || n < 2 * m {
        return Err(Error::InvalidParameters { n, m });
    }
    let n = n as u128;
    let m = m as u128;
    let s = n0(n as u64) as u128;
    Ok(n > s && 3 * s * n <= 4 * m * n + s * s)
}

/// The same question answered by enumerating every candidate family.
pub fn has_addable_family(params: Parameters) -> bool {
    !addable_families(params).is_empty()
}

/// `(n0 | c, c (n - c) / n is an even integer)`. The two always agree.
pub fn parity_characterization(n: u64, c: u64) -> (bool, bool) {
    let divides = c.is_multiple_of(n0(n));
    let prod = c * (n - c);
    let even = prod.is_multiple_of(n) && (prod / n).is_multiple_of(2);
    (divides, even)
}

/// `(2 floor(2(m+1)/3) - 1)^2`, the largest `n` with `J(n, m)` not maximal.
pub fn corollary_max_n(m: u64) -> u64 {
    let t = 2 * (2 * (m + 1) / 3) - 1;
    t * t
}

/// Upper end of a scan window that provably contains every non-maximal
/// `n`: beyond `((4m+1)/3)^2` the test `3 n0 - n0^2/n <= 4m` fails, because
/// `n0^2 >= n` and the left side grows with `n0` below `3n/2`.
pub fn corollary_window(m: u64) -> u64 {
    let t = 4 * m + 1;
    (t * t).div_ceil(9) + 1
}

/// Largest `n` in `[2m, limit]` for which the closed-form predicate holds.
pub fn max_nonmaximal_n(m: usize, limit: usize) -> Option<usize> {
    (2 * m..=limit)
        .rev()
        .find(|&n| nonmaximal_predicate(n, m).unwrap_or(false))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropositionFamily {
    pub n1: usize,
    pub family: CandidateFamily,
    /// Whether `3 t - t^2 / n <= 4m` holds for `t = n0 n1`; the family is
    /// addable when it does.
    pub condition_holds: bool,
}

/// The two-level family with coordinates in `t/n + Z`, `t = n0 * n1`,
/// placed on the hyperplane `sum x = m`:
///
/// * `m < t`: `((t/n)^(n-t+m), (t/n - 1)^(t-m))`
/// * `m = t`: `((m/n)^n)`
/// * `m > t`: `((1 + t/n)^(m-t), (t/n)^(n+t-m))`
pub fn proposition_family(n: usize, m: usize, n1: usize) -> Result<PropositionFamily> {
    let params = Parameters::new(n, m)?;
    let t = n0(n as u64) as usize * n1;
    if t == 0 || t >= n {
        return Err(Error::Range { product: t, n });
    }
    let k0 = kbar_case(n, m, t);
    let k = match m.cmp(&t) {
        Ordering::Less => vec![n - t + m, t - m],
        Ordering::Equal => vec![n],
        Ordering::Greater => vec![m - t, n + t - m],
    };
    let family = CandidateFamily::new(params, k0, k)?;
    let (nn, mm, tt) = (n as u128, m as u128, t as u128);
    let condition_holds = 3 * tt * nn <= 4 * mm * nn + tt * tt;
    Ok(PropositionFamily {
        n1,
        family,
        condition_holds,
    })
}

/// Terminal offset `kbar` of the reduction for `t = n0 * n1`:
/// `n - t` when `m < t`, `n - m` when `m = t`, `-t` when `m > t`.
pub fn kbar_case(n: usize, m: usize, t: usize) -> i64 {
    match m.cmp(&t) {
        Ordering::Less => (n - t) as i64,
        Ordering::Equal => (n - m) as i64,
        Ordering::Greater => -(t as i64),
    }
}
