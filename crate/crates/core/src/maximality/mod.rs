//! Maximal extensions of `J(n, m)`: the compatibility graph on all addable
//! points, the clique search over it, and the per-parameter classification
//! report.
//!
//! A point joins the set only if its squared distance to every other point
//! is one of `2, 4, ..., 2m`; the Johnson part already realizes all `m` of
//! those values, so no other value can appear.

pub mod clique;
pub mod witness;

use std::collections::HashMap;

use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{sq_dist, Rational, Scalar};
use crate::families::{addable_families, CandidateFamily, Parameters};
use crate::spectra::{cross_family_spectrum, johnson_family_spectrum, Spectrum};
use crate::theorem::nonmaximal_predicate;

pub use clique::{
    max_clique, maximal_clique_sizes, BitSet, CliqueResult, Graph, MaximalCliqueSizes,
};

pub const DEFAULT_BUDGET: u64 = 100_000_000;
pub const DEFAULT_CAP: u64 = 100_000;
pub const DEFAULT_ENUMERATION_BUDGET: u64 = 1_000_000;

/// All points of all addable families together with their compatibility
/// graph. Coordinates are stored multiplied by `n`, which makes them
/// integers.
#[derive(Debug, Clone)]
pub struct CandidateUniverse {
    pub params: Parameters,
    pub families: Vec<CandidateFamily>,
    /// Index into `families` for each vertex.
    pub family_of: Vec<usize>,
    pub scaled_points: Vec<Vec<i64>>,
    pub graph: Graph,
}

impl CandidateUniverse {
    pub fn len(&self) -> usize {
        self.scaled_points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scaled_points.is_empty()
    }

    pub fn point(&self, v: usize) -> Vec<Rational> {
        let n = self.params.n() as i64;
        self.scaled_points[v]
            .iter()
            .map(|&x| Rational::new(x, n))
            .collect()
    }

    /// Vertex index of an exact point, if it belongs to the universe.
    pub fn index_of(&self) -> HashMap<Vec<i64>, usize> {
        self.scaled_points
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i))
            .collect()
    }
}

fn scaled_compatible(a: &[i64], b: &[i64], n: i64, m: usize) -> bool {
    let d: i64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
    let unit = n * n;
    d % (2 * unit) == 0 && d > 0 && d / (2 * unit) <= m as i64
}

/// Materializes every addable point and links compatible pairs.
pub fn build_universe(params: Parameters, cap: u64) -> Result<CandidateUniverse> {
    build_universe_from(params, addable_families(params), cap)
}

fn build_universe_from(
    params: Parameters,
    families: Vec<CandidateFamily>,
    cap: u64,
) -> Result<CandidateUniverse> {
    let count: u64 = families
        .iter()
        .map(|f| f.size().to_u64().unwrap_or(u64::MAX))
        .fold(0u64, |a, b| a.saturating_add(b));
    if count > cap {
        return Err(Error::UniverseTooLarge { count, cap });
    }
    let mut family_of = Vec::new();
    let mut scaled_points = Vec::new();
    for (i, f) in families.iter().enumerate() {
        for p in f.scaled_points() {
            family_of.push(i);
            scaled_points.push(p);
        }
    }
    let n = params.n() as i64;
    let m = params.m();
    let len = scaled_points.len();
    let rows: Vec<BitSet> = (0..len)
        .into_par_iter()
        .map(|a| {
            let mut row = BitSet::new(len);
            for b in 0..len {
                if a != b && scaled_compatible(&scaled_points[a], &scaled_points[b], n, m) {
                    row.insert(b);
                }
            }
            row
        })
        .collect();
    Ok(CandidateUniverse {
        params,
        families,
        family_of,
        scaled_points,
        graph: Graph::from_rows(rows),
    })
}

/// Distance check of an explicit point set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PointSetCheck<T: Ord> {
    pub valid: bool,
    pub points: usize,
    pub spectrum: Spectrum<T>,
    /// Some pair of points coincides.
    pub has_duplicates: bool,
}

/// Whether `points` is an `m`-distance set (at most `m` distinct nonzero
/// distances, no repeated point). With `johnson_normalized`, every squared
/// distance must also lie in `{2, 4, ..., 2m}`.
pub fn verify_point_set<T: Scalar>(
    points: &[Vec<T>],
    m: usize,
    johnson_normalized: bool,
) -> Result<PointSetCheck<T>> {
    if let Some(first) = points.first() {
        if points.iter().any(|p| p.len() != first.len()) {
            return Err(Error::DimensionMismatch);
        }
    }
    let (spectrum, has_duplicates) = (0..points.len())
        .into_par_iter()
        .map(|i| {
            let mut s = Spectrum::new();
            let mut dup = false;
            for j in i + 1..points.len() {
                let d = sq_dist(&points[i], &points[j]);
                dup |= d == T::zero();
                s.insert(d);
            }
            (s, dup)
        })
        .reduce(
            || (Spectrum::new(), false),
            |(mut a, da), (b, db)| {
                a.union(b);
                (a, da || db)
            },
        );
    let valid = !has_duplicates
        && spectrum.len() <= m
        && (!johnson_normalized || spectrum.within_johnson(m));
    Ok(PointSetCheck {
        valid,
        points: points.len(),
        spectrum,
        has_duplicates,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassifyOptions {
    /// Node-expansion limit for the maximum clique search.
    pub budget: u64,
    /// Largest universe that is materialized.
    pub cap: u64,
    /// Call limit for enumerating maximal cliques.
    pub enumeration_budget: u64,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            budget: DEFAULT_BUDGET,
            cap: DEFAULT_CAP,
            enumeration_budget: DEFAULT_ENUMERATION_BUDGET,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    /// No point can be added.
    Maximal,
    /// Every addable point can be added at once.
    AllAddable,
    /// Clique search finished; the added count is the maximum.
    CliqueOptimal,
    /// Clique search hit its budget; the added count is a lower bound.
    CliqueLowerBound,
    /// Families are not mutually compatible and the universe exceeds the cap.
    Unresolved,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Maximal => "maximal",
            Status::AllAddable => "all-addable",
            Status::CliqueOptimal => "clique-optimal",
            Status::CliqueLowerBound => "clique-lower-bound",
            Status::Unresolved => "unresolved",
        }
    }

    /// Whether the reported total is proven to be the maximum.
    pub fn is_proven(&self) -> bool {
        matches!(
            self,
            Status::Maximal | Status::AllAddable | Status::CliqueOptimal
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyEntry {
    pub family: CandidateFamily,
    pub size: u64,
    pub johnson_spectrum: Spectrum,
    pub intra_spectrum: Spectrum,
    pub self_compatible: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrossEntry {
    pub a: usize,
    pub b: usize,
    pub spectrum: Spectrum,
    pub compatible: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CliqueStats {
    pub size: usize,
    pub optimal: bool,
    pub expansions: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MaximalSizes {
    pub sizes: Vec<usize>,
    pub exhaustive: bool,
    pub visited: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessCheck {
    pub added: usize,
    pub total: usize,
    pub valid: bool,
    pub spectrum: Spectrum,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassificationReport {
    pub n: usize,
    pub m: usize,
    pub johnson_size: u64,
    /// The closed-form non-maximality test, for comparison.
    pub predicate: bool,
    pub families: Vec<FamilyEntry>,
    pub cross: Vec<CrossEntry>,
    pub universe_size: u64,
    pub status: Status,
    pub clique: Option<CliqueStats>,
    pub maximal_clique_sizes: Option<MaximalSizes>,
    /// Points added to the Johnson part (a lower bound unless proven).
    pub added: Option<u64>,
    pub total: Option<u64>,
    pub witness: Option<WitnessCheck>,
    pub notes: Vec<String>,
}

impl ClassificationReport {
    pub fn all_families_compatible(&self) -> bool {
        self.families.iter().all(|f| f.self_compatible) && self.cross.iter().all(|c| c.compatible)
    }
}

/// Classifies the maximal `m`-distance sets containing `J(n, m)`.
///
/// Families are first compared orbit-against-orbit through their spectra.
/// When all of them are mutually compatible the whole union is the unique
/// maximal extension and nothing is materialized. Otherwise the universe is
/// built (within the cap) and searched for a maximum clique.
pub fn classify(params: Parameters, options: &ClassifyOptions) -> ClassificationReport {
    let n = params.n();
    let m = params.m();
    let johnson_size = params.johnson().cardinality().to_u64().unwrap_or(u64::MAX);
    let predicate = m >= 2 && nonmaximal_predicate(n, m).unwrap_or(false);
    let fams = addable_families(params);
    let mut notes = vec![
        "johnson-to-family distances: overlap profile enumeration".to_string(),
        "family-to-family distances: contingency tables with fixed margins".to_string(),
    ];

    let families: Vec<FamilyEntry> = fams
        .par_iter()
        .map(|f| {
            let intra = cross_family_spectrum(f, f).expect("same parameters");
            FamilyEntry {
                family: f.clone(),
                size: f.size().to_u64().unwrap_or(u64::MAX),
                johnson_spectrum: johnson_family_spectrum(f),
                self_compatible: intra.within_johnson(m),
                intra_spectrum: intra,
            }
        })
        .collect();
    let pairs: Vec<(usize, usize)> = (0..fams.len())
        .flat_map(|a| (a + 1..fams.len()).map(move |b| (a, b)))
        .collect();
    let cross: Vec<CrossEntry> = pairs
        .par_iter()
        .map(|&(a, b)| {
            let spectrum = cross_family_spectrum(&fams[a], &fams[b]).expect("same parameters");
            CrossEntry {
                a,
                b,
                compatible: spectrum.within_johnson(m),
                spectrum,
            }
        })
        .collect();
    let universe_size = families
        .iter()
        .fold(0u64, |acc, f| acc.saturating_add(f.size));

    let mut report = ClassificationReport {
        n,
        m,
        johnson_size,
        predicate,
        families,
        cross,
        universe_size,
        status: Status::Maximal,
        clique: None,
        maximal_clique_sizes: None,
        added: Some(0),
        total: Some(johnson_size),
        witness: None,
        notes: Vec::new(),
    };

    if fams.is_empty() {
        notes.push("no candidate family is addable".into());
    } else if report.all_families_compatible() {
        report.status = Status::AllAddable;
        report.added = Some(universe_size);
        report.total = Some(johnson_size + universe_size);
        notes
            .push("all family spectra lie in {2, ..., 2m}: compatibility graph is complete".into());
    } else {
        match build_universe_from(params, fams, options.cap) {
            Ok(universe) => search_universe(&mut report, &universe, options, &mut notes),
            Err(err) => {
                report.status = Status::Unresolved;
                report.added = None;
                report.total = None;
                notes.push(format!("families not mutually compatible; {err}"));
            }
        }
    }

    if let Some(points) = witness::known_extension(n, m) {
        let mut all: Vec<Vec<Rational>> = params.johnson().points().collect();
        let added = points.len();
        all.extend(points);
        let check = verify_point_set(&all, m, true).expect("uniform dimension");
        report.witness = Some(WitnessCheck {
            added,
            total: all.len(),
            valid: check.valid,
            spectrum: check.spectrum,
        });
    }

    if predicate != !report.families.is_empty() {
        notes.push("closed-form predicate disagrees with family enumeration".into());
    }
    report.notes = notes;
    report
}

fn search_universe(
    report: &mut ClassificationReport,
    universe: &CandidateUniverse,
    options: &ClassifyOptions,
    notes: &mut Vec<String>,
) {
    let params = universe.params;
    let johnson_size = report.johnson_size;
    // Seed with the explicit extension when every one of its points is a vertex.
    let seed: Option<Vec<usize>> =
        witness::known_extension(params.n(), params.m()).and_then(|pts| {
            let index = universe.index_of();
            let n = params.n() as i64;
            pts.iter()
                .map(|p| {
                    let scaled: Option<Vec<i64>> = p
                        .iter()
                        .map(|x| (x * &Rational::from(n)).to_i64())
                        .collect();
                    scaled.and_then(|s| index.get(&s).copied())
                })
                .collect::<Option<Vec<usize>>>()
                .filter(|vs| universe.graph.is_clique(vs))
        });
    if seed.is_some() {
        notes.push("clique search seeded with the explicit extension".into());
    }
    let res = max_clique(&universe.graph, options.budget, seed.as_deref());
    let size = res.vertices.len() as u64;
    report.clique = Some(CliqueStats {
        size: res.vertices.len(),
        optimal: res.optimal,
        expansions: res.expansions,
    });
    report.status = if res.optimal {
        Status::CliqueOptimal
    } else {
        notes.push(format!(
            "clique search stopped after {} expansions; {} added points is a lower bound",
            res.expansions, size
        ));
        Status::CliqueLowerBound
    };
    report.added = Some(size);
    report.total = Some(johnson_size + size);

    let sizes = maximal_clique_sizes(&universe.graph, options.enumeration_budget);
    report.maximal_clique_sizes = Some(MaximalSizes {
        sizes: sizes.sizes.into_iter().collect(),
        exhaustive: sizes.exhaustive,
        visited: sizes.visited,
    });
}

/// One row of a reproduced table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableRow {
    pub n: usize,
    pub m: usize,
    pub families: Vec<String>,
    pub added: Option<u64>,
    pub total: Option<u64>,
    pub status: Status,
}

impl From<&ClassificationReport> for TableRow {
    fn from(r: &ClassificationReport) -> Self {
        TableRow {
            n: r.n,
            m: r.m,
            families: r.families.iter().map(|f| f.family.to_string()).collect(),
            added: r.added,
            total: r.total,
            status: r.status,
        }
    }
}
