//! Acceptance criteria, one PASS/FAIL line each. Runs as a plain binary so
//! the lines are printed even when everything passes.

use std::collections::{BTreeSet, HashMap};
use std::time::{Duration, Instant};

use jdist_core::exactnum::{QuadNum, Rational};
use jdist_core::families::{
    addable_families, enumerate_families, sum_j2k, CandidateFamily, Parameters,
};
use jdist_core::maximality::{
    build_universe, classify, verify_point_set, witness, ClassifyOptions, Status, DEFAULT_CAP,
};
use jdist_core::spectra::{cross_family_spectrum, johnson_family_spectrum, Spectrum};
use jdist_core::subjohnson::{combination_search, congruent, sub_johnson_points, SubSearch};
use jdist_core::theorem::{
    corollary_max_n, corollary_window, max_nonmaximal_n, nonmaximal_predicate,
    parity_characterization,
};
use rayon::prelude::*;

const LIMIT_M2: Duration = Duration::from_secs(5);
const LIMIT_M3: Duration = Duration::from_secs(60);
const LIMIT_M5: Duration = Duration::from_secs(30);
/// Clique budget for the (9, 4) search; the optimum is reported only if
/// the search finishes inside it.
const BUDGET_9_4: u64 = 2_000_000;
/// Second families up to this size are materialized in full for the
/// cross-family oracle; larger ones contribute about `ORACLE_SAMPLE`
/// evenly spaced points, whose distances must lie in the computed spectrum.
const ORACLE_MATERIALIZE: usize = 1_000;
const ORACLE_SAMPLE: usize = 64;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn p(n: usize, m: usize) -> Parameters {
    Parameters::new(n, m).unwrap()
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < limit, format!("took {t:.2?}, limit {limit:?}"))
}

fn c1_m2_classification() -> Outcome {
    let start = Instant::now();
    let r = classify(p(9, 2), &ClassifyOptions::default());
    ensure(
        r.families.len() == 1,
        format!("{} families for (9,2)", r.families.len()),
    )?;
    let f = &r.families[0].family;
    ensure(f.k0() == 6 && f.k() == [8, 1], format!("family {f}"))?;
    ensure(
        r.added == Some(9) && r.total == Some(45),
        format!("added {:?} total {:?}", r.added, r.total),
    )?;
    ensure(
        r.status == Status::AllAddable && r.all_families_compatible(),
        "not completely compatible",
    )?;
    for n in (4..=20).filter(|&n| n != 9) {
        let count = addable_families(p(n, 2)).len();
        ensure(count == 0, format!("n = {n}: {count} addable families"))?;
    }
    within(start, LIMIT_M2)?;
    Ok(format!(
        "(9,2): 1 family, 9 added, total 45; n in 4..=20 otherwise empty; {:.2?}",
        start.elapsed()
    ))
}

fn c2_m3_classification() -> Outcome {
    let start = Instant::now();
    let r = classify(p(8, 3), &ClassifyOptions::default());
    ensure(
        r.total == Some(64) && r.status.is_proven(),
        format!("(8,3) total {:?}", r.total),
    )?;
    let r = classify(p(9, 3), &ClassifyOptions::default());
    ensure(
        r.universe_size == 73,
        format!("universe {}", r.universe_size),
    )?;
    let clique = r.clique.clone().ok_or("no clique search")?;
    ensure(
        clique.size == 37 && clique.optimal,
        format!("clique {clique:?}"),
    )?;
    ensure(r.total == Some(121), format!("total {:?}", r.total))?;
    let ms = r
        .maximal_clique_sizes
        .clone()
        .ok_or("no maximal clique enumeration")?;
    ensure(
        ms.exhaustive && ms.sizes == [37],
        format!("maximal sizes {ms:?}"),
    )?;
    // every choice of one point from each mirror pair is a clique
    let u = build_universe(p(9, 3), DEFAULT_CAP).map_err(|e| e.to_string())?;
    let comps = u.graph.co_components();
    ensure(
        comps.iter().all(|c| c.len() <= 2),
        "a non-edge outside the mirror pairs",
    )?;
    within(start, LIMIT_M3)?;
    Ok(format!(
        "(8,3) total 64; (9,3) 73 candidates, clique 37 optimal, every maximal clique 37, total 121; {:.2?}",
        start.elapsed()
    ))
}

fn c3_m4_table() -> Outcome {
    let start = Instant::now();
    for (n, added, total) in [(8, 57u64, 127u64), (18, 153, 3213), (25, 25, 12675)] {
        let r = classify(p(n, 4), &ClassifyOptions::default());
        ensure(
            r.status == Status::AllAddable && r.added == Some(added) && r.total == Some(total),
            format!(
                "n = {n}: {:?} added {:?} total {:?}",
                r.status, r.added, r.total
            ),
        )?;
    }
    let mut pts: Vec<Vec<Rational>> = p(9, 4).johnson().points().collect();
    pts.extend(witness::extension_9_4());
    let check = verify_point_set(&pts, 4, true).map_err(|e| e.to_string())?;
    ensure(
        check.valid && check.points == 258,
        format!("witness {} points valid {}", check.points, check.valid),
    )?;
    let r = classify(
        p(9, 4),
        &ClassifyOptions {
            budget: BUDGET_9_4,
            cap: DEFAULT_CAP,
            enumeration_budget: 0,
        },
    );
    ensure(
        r.total == Some(258),
        format!("(9,4) best total {:?}", r.total),
    )?;
    let claim = if r.status == Status::CliqueOptimal {
        "258 proven maximum".to_string()
    } else {
        format!(
            "258 lower bound, optimality unproven after {} expansions",
            BUDGET_9_4
        )
    };
    Ok(format!(
        "127, 3213, 12675 all-addable; (9,4) witness 258 valid; {claim}; {:.2?}",
        start.elapsed()
    ))
}

fn c4_m5_table() -> Outcome {
    let start = Instant::now();
    for (n, added, total) in [
        (16, 560u64, 4928u64),
        (18, 2466, 11034),
        (25, 601, 53731),
        (49, 1176, 1908060),
    ] {
        let r = classify(p(n, 5), &ClassifyOptions::default());
        ensure(
            r.status == Status::AllAddable && r.added == Some(added) && r.total == Some(total),
            format!(
                "n = {n}: {:?} added {:?} total {:?}",
                r.status, r.added, r.total
            ),
        )?;
        ensure(
            r.clique.is_none(),
            format!("n = {n}: universe was materialized"),
        )?;
    }
    within(start, LIMIT_M5)?;
    Ok(format!(
        "4928, 11034, 53731, 1908060 from spectra only; {:.2?}",
        start.elapsed()
    ))
}

fn c5_theorem_oracle() -> Outcome {
    let cases: Vec<(usize, usize)> = (2..=5)
        .flat_map(|m| (2 * m..=60).map(move |n| (n, m)))
        .collect();
    let mismatches: Vec<(usize, usize)> = cases
        .par_iter()
        .filter(|&&(n, m)| {
            nonmaximal_predicate(n, m).unwrap() == addable_families(p(n, m)).is_empty()
        })
        .copied()
        .collect();
    ensure(
        mismatches.is_empty(),
        format!("mismatches at {mismatches:?}"),
    )?;
    Ok(format!("{} parameter pairs, 0 mismatches", cases.len()))
}

fn c6_corollary() -> Outcome {
    let expected = [(2, 9), (3, 9), (4, 25), (5, 49)];
    for (m, n) in expected {
        ensure(
            corollary_max_n(m) == n,
            format!("m = {m}: {}", corollary_max_n(m)),
        )?;
    }
    for m in 2..=8u64 {
        let scan = max_nonmaximal_n(m as usize, corollary_window(m) as usize);
        ensure(
            scan == Some(corollary_max_n(m) as usize),
            format!("m = {m}: formula {} scan {scan:?}", corollary_max_n(m)),
        )?;
    }
    Ok("m = 2..8 formula equals scan maximum; 9, 9, 25, 49 for m = 2..5".into())
}

fn c7_parity() -> Outcome {
    let mut checked = 0;
    for n in 2..=300u64 {
        for c in 1..n {
            let (a, b) = parity_characterization(n, c);
            ensure(a == b, format!("n = {n}, c = {c}"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} pairs, 0 mismatches"))
}

fn c8_reduction() -> Outcome {
    let cases: Vec<(usize, usize)> = (2..=5)
        .flat_map(|m| (2 * m..=30).map(move |n| (n, m)))
        .collect();
    let counts: Vec<Result<usize, String>> = cases
        .par_iter()
        .map(|&(n, m)| {
            let mut steps = 0;
            for f in enumerate_families(p(n, m)) {
                if f.l() < 3 || !f.m_x().is_even_integer() {
                    continue;
                }
                let raw = f.reduce_raw().map_err(|e| e.to_string())?;
                let drop = f.sum_j2k() - sum_j2k(&raw);
                ensure(
                    drop == 2 * (f.l() as i64 - 2),
                    format!("{f}: sum j^2 k drops by {drop}"),
                )?;
                let next = f.reduce().map_err(|e| e.to_string())?;
                let diff = f.m_x() - next.m_x();
                ensure(
                    diff.is_even_integer() && !diff.is_negative() && !diff.is_zero(),
                    format!("{f} -> {next}: M_X drops by {diff}"),
                )?;
                steps += 1;
            }
            Ok(steps)
        })
        .collect();
    let mut total = 0;
    for c in counts {
        total += c?;
    }
    Ok(format!("{total} reduction steps, 0 violations"))
}

const PRINTED: [(usize, &[&str], usize); 9] = [
    (6, &["X1+", "X4-"], 16),
    (6, &["X1-", "X4+"], 16),
    (7, &["X4+", "X4-"], 27),
    (8, &["X2+", "X4+"], 29),
    (8, &["X2-", "X4-"], 29),
    (9, &["X1+", "X3-", "X4-"], 45),
    (9, &["X1-", "X3+", "X4+"], 45),
    (17, &["X1+", "X2-"], 122),
    (17, &["X1-", "X2+"], 122),
];

fn union_is_two_distance(search: &SubSearch, labels: &[&str]) -> Result<usize, String> {
    let c = search
        .find(labels)
        .ok_or(format!("n = {}: {labels:?} not valid", search.n))?;
    let pts = search.union_points(c);
    let check = verify_point_set(&pts, 2, true).map_err(|e| e.to_string())?;
    ensure(
        check.valid,
        format!("n = {}: {labels:?} fails verification", search.n),
    )?;
    Ok(c.total)
}

fn c9_subjohnson() -> Outcome {
    let searches: HashMap<usize, SubSearch> = [5, 6, 7, 8, 9, 17]
        .into_par_iter()
        .map(|n| (n, combination_search(n).unwrap()))
        .collect();
    for (n, labels, total) in PRINTED {
        let s = &searches[&n];
        let got = union_is_two_distance(s, labels)?;
        ensure(
            got == total,
            format!("n = {n}: {labels:?} total {got}, expected {total}"),
        )?;
        ensure(
            s.find(labels).unwrap().maximal,
            format!("n = {n}: {labels:?} not maximal"),
        )?;
    }
    for n in [6, 7, 8, 17] {
        let listed = searches[&n].listed().count();
        let printed = PRINTED.iter().filter(|e| e.0 == n).count();
        ensure(
            listed == printed,
            format!("n = {n}: {listed} unions listed, {printed} printed"),
        )?;
    }
    // recomputed where the printed bracket totals disagree
    let t5 = union_is_two_distance(&searches[&5], &["X1+", "X1-"])?;
    let t9 = union_is_two_distance(&searches[&9], &["X1+", "X1-"])?;
    ensure(t5 == 8 && t9 == 30, format!("recomputed {t5}, {t9}"))?;
    Ok(format!(
        "16; 27; 29, 29; 45, 45; 122 reproduced; FLAG n=5 total {t5} (printed [12]), FLAG n=9 total {t9} (printed [28])"
    ))
}

fn brute_johnson_spectrum(f: &CandidateFamily, johnson: &[Vec<i64>]) -> BTreeSet<i64> {
    let rep = f.scaled_points().next().unwrap();
    johnson
        .iter()
        .map(|x| dist(x, &rep))
        .filter(|&d| d != 0)
        .collect()
}

fn dist(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn to_spectrum(values: &BTreeSet<i64>, n: usize) -> Spectrum {
    let unit = (n * n) as i64;
    values.iter().map(|&v| Rational::new(v, unit)).collect()
}

fn c10_oracle() -> Outcome {
    let (mut fams, mut full, mut sampled) = (0usize, 0usize, 0usize);
    for n in 2..=10 {
        for m in 1..=n / 2 {
            let params = p(n, m);
            let johnson: Vec<Vec<i64>> = params.johnson().scaled_points(n as i64).collect();
            let families = enumerate_families(params);
            for f in &families {
                let brute = to_spectrum(&brute_johnson_spectrum(f, &johnson), n);
                ensure(
                    johnson_family_spectrum(f) == brute,
                    format!("({n},{m}) J vs {f}"),
                )?;
            }
            fams += families.len();
            let targets: Vec<(bool, Vec<Vec<i64>>)> = families
                .par_iter()
                .map(|f| {
                    let size: usize = f.size().try_into().unwrap_or(usize::MAX);
                    if size <= ORACLE_MATERIALIZE {
                        (true, f.scaled_points().collect())
                    } else {
                        let stride = size / ORACLE_SAMPLE + 1;
                        (false, f.scaled_points().step_by(stride).collect())
                    }
                })
                .collect();
            // orbits are transitive: one point of A against all of B is the whole spectrum
            let bad: Vec<String> = (0..families.len())
                .into_par_iter()
                .flat_map_iter(|a| {
                    let rep = families[a].scaled_points().next().unwrap();
                    let families = &families;
                    let targets = &targets;
                    (0..families.len()).filter_map(move |b| {
                        let (complete, pb) = &targets[b];
                        let brute: BTreeSet<i64> = pb
                            .iter()
                            .map(|y| dist(&rep, y))
                            .filter(|&d| d != 0)
                            .collect();
                        let brute = to_spectrum(&brute, n);
                        let fast = cross_family_spectrum(&families[a], &families[b]).unwrap();
                        let agrees = if *complete {
                            fast == brute
                        } else {
                            brute.values().all(|v| fast.contains(v))
                        };
                        (!agrees).then(|| format!("({n},{m}) {} vs {}", families[a], families[b]))
                    })
                })
                .collect();
            ensure(
                bad.is_empty(),
                format!("mismatches: {:?}", &bad[..bad.len().min(3)]),
            )?;
            let complete = targets.iter().filter(|t| t.0).count();
            full += complete * families.len();
            sampled += (targets.len() - complete) * families.len();
        }
    }
    Ok(format!(
        "{fams} Johnson-family spectra; {full} family pairs exact, {sampled} pairs by sampled containment; 0 mismatches"
    ))
}

fn quad(points: impl IntoIterator<Item = Vec<Rational>>) -> Vec<Vec<QuadNum>> {
    points
        .into_iter()
        .map(|p| p.into_iter().map(QuadNum::from).collect())
        .collect()
}

fn c11_congruence() -> Outcome {
    let mut checks = 0;
    for n in 5..=10 {
        let s = combination_search(n).unwrap();
        let full = quad(p(n, 2).johnson().points());
        let union_of = |label: &str| -> Option<Vec<Vec<QuadNum>>> {
            s.find(&[label]).map(|c| s.union_points(c))
        };
        for label in ["X3+", "X3-"] {
            let u = union_of(label).ok_or(format!("n = {n}: {label} missing"))?;
            ensure(
                congruent(&u, &full),
                format!("n = {n}: J u {label} not congruent to J({n}, 2)"),
            )?;
            checks += 1;
        }
        for i in 1..=4 {
            if let (Some(a), Some(b)) = (union_of(&format!("X{i}+")), union_of(&format!("X{i}-"))) {
                ensure(
                    congruent(&a, &b),
                    format!("n = {n}: X{i}+ and X{i}- unions differ"),
                )?;
                checks += 1;
            }
        }
    }
    let s = combination_search(5).unwrap();
    let x3 = s.union_points(s.find(&["X3+"]).unwrap());
    let x4 = s.union_points(s.find(&["X4+"]).unwrap());
    ensure(congruent(&x3, &x4), "n = 5: X3 and X4 unions differ")?;
    let j6 = sub_johnson_points(6);
    let x4_6 = combination_search(6).unwrap();
    let x4_6 = x4_6.union_points(x4_6.find(&["X4+"]).unwrap());
    let x3_6 = combination_search(6).unwrap();
    let x3_6 = x3_6.union_points(x3_6.find(&["X3+"]).unwrap());
    ensure(
        !congruent(&x3_6, &x4_6),
        "n = 6: X3 and X4 unions should differ",
    )?;
    ensure(
        !congruent(&j6, &x3_6),
        "sets of different size reported congruent",
    )?;
    Ok(format!(
        "{} congruences hold, n = 5 X3/X4 congruent, n = 6 not",
        checks + 1
    ))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 11] = [
        ("m=2 classification", c1_m2_classification),
        ("m=3 classification", c2_m3_classification),
        ("m=4 table", c3_m4_table),
        ("m=5 table", c4_m5_table),
        ("closed form vs enumeration", c5_theorem_oracle),
        ("largest non-maximal n", c6_corollary),
        ("parity characterization", c7_parity),
        ("reduction step properties", c8_reduction),
        ("J(n-1,2) combinations", c9_subjohnson),
        ("spectra vs brute force", c10_oracle),
        ("congruence checks", c11_congruence),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let t = start.elapsed();
        match result {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{t:.2?}]", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why} [{t:.2?}]", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
