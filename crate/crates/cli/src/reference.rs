//! Published values the `tables` and `sub2` commands compare against.

/// `(n, added, total)` for each non-maximal `J(n, m)`.
pub fn table(m: usize) -> Option<&'static [(usize, u64, u64)]> {
    match m {
        2 => Some(&[(9, 9, 45)]),
        3 => Some(&[(8, 8, 64), (9, 37, 121)]),
        4 => Some(&[
            (8, 57, 127),
            (9, 132, 258),
            (18, 153, 3213),
            (25, 25, 12675),
        ]),
        5 => Some(&[
            (16, 560, 4928),
            (18, 2466, 11034),
            (25, 601, 53731),
            (49, 1176, 1908060),
        ]),
        _ => None,
    }
}

/// A published union of `J(n-1, 2)` extension families.
pub struct SubEntry {
    pub labels: &'static [&'static str],
    pub added: usize,
    pub total: usize,
    /// The printed bracket total disagrees with `binomial(n-1, 2) + added`.
    pub known_discrepancy: bool,
}

const fn entry(
    labels: &'static [&'static str],
    added: usize,
    total: usize,
    known: bool,
) -> SubEntry {
    SubEntry {
        labels,
        added,
        total,
        known_discrepancy: known,
    }
}

static N5: [SubEntry; 1] = [entry(&["X1+", "X1-"], 2, 12, true)];
static N6: [SubEntry; 2] = [
    entry(&["X1+", "X4-"], 6, 16, false),
    entry(&["X1-", "X4+"], 6, 16, false),
];
static N7: [SubEntry; 1] = [entry(&["X4+", "X4-"], 12, 27, false)];
static N8: [SubEntry; 2] = [
    entry(&["X2+", "X4+"], 8, 29, false),
    entry(&["X2-", "X4-"], 8, 29, false),
];
static N9: [SubEntry; 3] = [
    entry(&["X1+", "X1-"], 2, 28, true),
    entry(&["X1+", "X3-", "X4-"], 17, 45, false),
    entry(&["X1-", "X3+", "X4+"], 17, 45, false),
];
static N17: [SubEntry; 2] = [
    entry(&["X1+", "X2-"], 2, 122, false),
    entry(&["X1-", "X2+"], 2, 122, false),
];

/// Published unions for `n`; empty when none are listed.
pub fn sub_unions(n: usize) -> &'static [SubEntry] {
    match n {
        5 => &N5,
        6 => &N6,
        7 => &N7,
        8 => &N8,
        9 => &N9,
        17 => &N17,
        _ => &[],
    }
}
