//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! A criterion whose expected values disagree with exhaustive computation is
//! printed as `FAIL (known discrepancy)`. The run still succeeds as long as
//! the set of disagreements is exactly the documented one; any other
//! deviation makes the process exit nonzero.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use cdelta::cdiff::{spectrum, uniformity_with, AConvention, CFilter, SweepOptions};
use cdelta::number_theory::{gcd_power_formula, trinomial_roots, RootCase};
use cdelta::tables::{reproduce, ReferenceData, ReproduceOptions, TableDiff};
use cdelta::theorems::{preset, sweep, ClaimId, Grid, Status, SweepReport};
use cdelta::walsh::{apcn_statistic, convolution_statistic, pcn_power_sum, WalshLimits};
use cdelta::{FieldElement, FieldSpec, FunctionTable};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// Table 1 must be recomputed within this budget.
const TABLE1_BUDGET: Duration = Duration::from_secs(60);
/// Table 2 up to n = 7.
const TABLE2_BUDGET: Duration = Duration::from_secs(30 * 60);
/// Minimum size of the Walsh corpus.
const WALSH_CORPUS_MIN: usize = 200;

enum Outcome {
    Pass(String),
    Known(String),
    Fail(String),
}

struct Run {
    unexpected: usize,
}

impl Run {
    fn record(&mut self, id: u32, name: &str, outcome: Outcome) {
        let (tag, detail) = match outcome {
            Outcome::Pass(d) => ("PASS", d),
            Outcome::Known(d) => ("FAIL (known discrepancy)", d),
            Outcome::Fail(d) => {
                self.unexpected += 1;
                ("FAIL", d)
            }
        };
        println!("criterion {id:>2} [{name}]: {tag} -- {detail}");
    }
}

fn gf(p: u32, n: u32) -> FieldSpec {
    FieldSpec::new(p, n, None).unwrap()
}

fn mismatch_set(diff: &TableDiff) -> BTreeSet<(u32, String)> {
    diff.mismatches().map(|c| (c.n, c.column.clone())).collect()
}

fn describe_mismatches(diff: &TableDiff) -> String {
    diff.mismatches()
        .map(|c| format!("n={} {}: expected {}, computed {}/{}", c.n, c.column, c.expected, c.computed_paper, c.computed_nonzero))
        .collect::<Vec<_>>()
        .join("; ")
}

fn criterion_1() -> Outcome {
    let data = ReferenceData::load().unwrap();
    let start = Instant::now();
    let diff = reproduce(data.table(1).unwrap(), ReproduceOptions { max_n: Some(8), allow_long: false }).unwrap();
    let elapsed = start.elapsed();
    if diff.cells.len() != 16 || elapsed > TABLE1_BUDGET {
        return Outcome::Fail(format!("{} cells in {elapsed:.1?}", diff.cells.len()));
    }
    // x^13 disagrees at n = 4, 7, 8 (computed 4, 4, 13); x^5 matches everywhere
    let known: BTreeSet<(u32, String)> = [4, 7, 8].into_iter().map(|n| (n, "x^13".to_string())).collect();
    let found = mismatch_set(&diff);
    let timing = format!("16 cells in {elapsed:.1?}");
    if found.is_empty() {
        Outcome::Pass(timing)
    } else if found == known {
        Outcome::Known(format!("{timing}; x^5 column matches; {}", describe_mismatches(&diff)))
    } else {
        Outcome::Fail(format!("{timing}; {}", describe_mismatches(&diff)))
    }
}

fn criterion_2() -> Outcome {
    let data = ReferenceData::load().unwrap();
    let start = Instant::now();
    let diff = reproduce(data.table(2).unwrap(), ReproduceOptions { max_n: Some(7), allow_long: false }).unwrap();
    let elapsed = start.elapsed();
    let rows: BTreeSet<u32> = diff.cells.iter().map(|c| c.n).collect();
    if rows != BTreeSet::from([1, 2, 3, 5, 7]) || elapsed > TABLE2_BUDGET {
        return Outcome::Fail(format!("rows {rows:?} in {elapsed:.1?}"));
    }
    let conventions: Vec<&str> = diff.matching_conventions.iter().map(|c| c.label()).collect();
    let timing = format!("n=1,2,3,5,7 in {elapsed:.1?}");
    if diff.all_match() {
        return Outcome::Pass(format!("{timing}; matching a-convention: {}", conventions.join(", ")));
    }
    // n = 3 computes 5 and n = 5 computes 7 / 8, identically under both conventions
    let known: BTreeSet<(u32, String)> =
        [3, 5].into_iter().flat_map(|n| ["x^10-x^6-x^2", "x^10+x^6-x^2"].map(|c| (n, c.to_string()))).collect();
    let found = mismatch_set(&diff);
    let matched_rows: Vec<u32> = diff.cells.iter().filter(|c| c.matching.len() == 2).map(|c| c.n).collect();
    if found == known && matched_rows.iter().all(|n| [1, 2, 7].contains(n)) && matched_rows.len() == 6 {
        Outcome::Known(format!("{timing}; rows 1,2,7 match under both conventions; {}", describe_mismatches(&diff)))
    } else {
        Outcome::Fail(format!("{timing}; {}", describe_mismatches(&diff)))
    }
}

fn confirmed_only(report: &SweepReport) -> Result<usize, String> {
    let bad: Vec<String> = report
        .verdicts
        .iter()
        .filter(|v| v.status != Status::Confirmed)
        .map(|v| format!("{} n={} c={:?} observed {}", v.variant, v.params.n, v.params.c.map(|c| c.rank()), v.observed))
        .collect();
    if bad.is_empty() {
        Ok(report.verdicts.len())
    } else {
        Err(bad.join("; "))
    }
}

fn criterion_3() -> Outcome {
    let fields: Vec<(u32, u32)> = (2..=8).map(|n| (2, n)).collect();
    let report = sweep(ClaimId::T6, &fields).unwrap();
    let observed: Vec<u64> = report.verdicts.iter().map(|v| v.observed).collect();
    let expected: Vec<u64> = vec![2, 3, 3, 3, 3, 3, 3];
    match confirmed_only(&report) {
        Ok(_) if observed == expected => Outcome::Pass(format!("max over c != 0 (a != 0) for n=2..8: {observed:?}")),
        Ok(_) => Outcome::Fail(format!("observed {observed:?}")),
        Err(e) => Outcome::Fail(e),
    }
}

fn criterion_4() -> Outcome {
    let fields: Vec<(u32, u32)> = (3..=10).map(|n| (2, n)).collect();
    let report = sweep(ClaimId::T7, &fields).unwrap();
    let expected_count: usize = (3..=10).map(|n| (1usize << n) - 1).sum();
    match confirmed_only(&report) {
        Ok(k) if k == expected_count => Outcome::Pass(format!("{k} values of c over n=3..10, zero mismatches")),
        Ok(k) => Outcome::Fail(format!("{k} verdicts, expected {expected_count}")),
        Err(e) => Outcome::Fail(e),
    }
}

fn criterion_5() -> Outcome {
    let fields = [(3, 2), (3, 3), (5, 2), (7, 1), (7, 2), (13, 1)];
    let report = sweep(ClaimId::T8, &fields).unwrap();
    let f9 = gf(3, 2);
    let minus_one = f9.neg(f9.one());
    let special = report
        .verdicts
        .iter()
        .find(|v| v.params.p == 3 && v.params.n == 2 && v.params.c == Some(minus_one))
        .map(|v| format!("(p,n,c)=(3,2,-1): {} observed {} [{}]", v.variant, v.observed, v.note.clone().unwrap_or_default()))
        .unwrap_or_else(|| "(3,2,-1) absent".into());
    let refuted: Vec<_> = report.refuted().collect();
    let describe = |v: &&cdelta::theorems::ClaimVerdict| {
        let w = v.witness.as_ref().unwrap();
        format!(
            "GF({}^{}) c={} {}: predicted 2, observed {} (witness a={}, b={}, x={:?})",
            v.params.p,
            v.params.n,
            v.params.c.unwrap().rank(),
            v.variant,
            v.observed,
            w.a.rank(),
            w.b.rank(),
            w.solutions.iter().map(|s| s.rank()).collect::<Vec<_>>()
        )
    };
    if refuted.is_empty() {
        return Outcome::Pass(format!("{} values of c classified; {special}", report.verdicts.len()));
    }
    // c = 4 and c = 1/4 over GF(49) fall in the square case as well and reach 3
    let f49 = gf(7, 2);
    let known: BTreeSet<FieldElement> = [f49.from_int(4), f49.inv(f49.from_int(4)).unwrap()].into();
    let found: BTreeSet<FieldElement> = refuted.iter().filter(|v| v.params.p == 7 && v.params.n == 2).map(|v| v.params.c.unwrap()).collect();
    let detail = refuted.iter().map(describe).collect::<Vec<_>>().join("; ");
    if refuted.len() == 2 && found == known && refuted.iter().all(|v| v.witness.is_some() && v.observed == 3) {
        Outcome::Known(format!("{} values of c; Refuted: {detail}; {special}", report.verdicts.len()))
    } else {
        Outcome::Fail(detail)
    }
}

fn random_table(field: &FieldSpec, rng: &mut StdRng) -> FunctionTable {
    let q = field.q();
    FunctionTable::raw(field, (0..q).map(|_| rng.gen_range(0..q)).collect()).unwrap()
}

fn criterion_6() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed_c0de);
    let limits = WalshLimits::default();
    let mut pairs = 0usize;
    let mut agreements = 0usize;
    let mut failures = Vec::new();
    for (p, n) in [(2, 2), (2, 3), (3, 2), (2, 4), (5, 2), (3, 3)] {
        let field = gf(p, n);
        let q = field.q() as u64;
        let mut functions: Vec<FunctionTable> = [2u64, 3, 5, 7, q - 2].iter().filter_map(|&d| FunctionTable::monomial(&field, d).ok()).collect();
        functions.push(FunctionTable::inverse(&field));
        functions.push(FunctionTable::polynomial(&field, &[(1, field.generator()), (0, field.one())]).unwrap());
        for _ in 0..3 {
            functions.push(random_table(&field, &mut rng));
        }
        let last = field.element(q - 1).unwrap();
        let mut cs = vec![FieldElement::ZERO, field.generator(), last, field.neg(field.one())];
        cs.retain(|&c| c != field.one());
        cs.sort();
        cs.dedup();
        for f in &functions {
            for &c in &cs {
                pairs += 1;
                let u = uniformity_with(f, c, AConvention::PaperFootnote, SweepOptions::BRUTE_FORCE).value;
                let tag = format!("GF({p}^{n}) {} c={}", f.origin().describe(), c.rank());
                let pcn = pcn_power_sum(f, c, &limits).unwrap();
                if pcn.equality() != (u == 1) {
                    failures.push(format!("{tag}: pcn equality {} but uniformity {u}", pcn.equality()));
                }
                let apcn = apcn_statistic(f, c, &limits).unwrap();
                if apcn.equality() != (u <= 2) {
                    failures.push(format!("{tag}: apcn equality {} but uniformity {u}", apcn.equality()));
                }
                for delta in 1..=3 {
                    let s = convolution_statistic(f, c, delta, &limits).unwrap();
                    if s.equality() != (u <= delta) {
                        failures.push(format!("{tag}: convolution(δ={delta}) = {} but uniformity {u}", s.count_side));
                    }
                    match s.walsh_side {
                        Some(w) if w == s.count_side => agreements += 1,
                        Some(w) => failures.push(format!("{tag}: δ={delta} count side {} vs Walsh side {w}", s.count_side)),
                        None => {}
                    }
                }
            }
        }
    }
    if pairs < WALSH_CORPUS_MIN {
        failures.push(format!("corpus has only {pairs} pairs"));
    }
    if failures.is_empty() {
        Outcome::Pass(format!("{pairs} (F, c) pairs; {agreements} count/Walsh side comparisons, all exact"))
    } else {
        Outcome::Fail(failures.into_iter().take(5).collect::<Vec<_>>().join("; "))
    }
}

fn criterion_7() -> Outcome {
    let mut fields = Vec::new();
    for p in [2u32, 3, 5, 7, 11, 13, 17] {
        let mut n = 2;
        while (p as u64).pow(n) <= 343 {
            fields.push((p, n));
            n += 1;
        }
    }
    let mut instances = 0u64;
    let mut failures = Vec::new();
    let mut counts_seen = BTreeSet::new();
    for &(p, n) in &fields {
        let field = gf(p, n);
        let q = field.q() as usize;
        for k in 1..n {
            let g = gcd(k, n);
            let pk = (p as u128).pow(k);
            for a in field.enumerate().skip(1) {
                // roots of z^{p^k} - a z = b for every b at once
                let mut by_b: Vec<Vec<FieldElement>> = vec![Vec::new(); q];
                for z in field.enumerate() {
                    let b = field.sub(field.pow_u(z, pk), field.mul(a, z));
                    by_b[b.rank() as usize].push(z);
                }
                for b in field.enumerate() {
                    instances += 1;
                    let expected = &by_b[b.rank() as usize];
                    counts_seen.insert((expected.len() as u64, (p as u64).pow(g)));
                    let out = trinomial_roots(&field, k, a, b).unwrap();
                    let case_ok = match out.case {
                        RootCase::NoRoot => out.count == 0,
                        RootCase::Unique => out.count == 1,
                        RootCase::Full => out.count == (p as u64).pow(g),
                    };
                    if !case_ok || out.count != expected.len() as u64 || &out.roots != expected {
                        failures.push(format!("GF({p}^{n}) k={k} a={} b={}: {:?} {:?} vs {:?}", a.rank(), b.rank(), out.case, out.roots, expected));
                    }
                }
            }
        }
    }
    let bad_counts: Vec<_> = counts_seen.iter().filter(|&&(c, full)| c != 0 && c != 1 && c != full).collect();
    if !bad_counts.is_empty() {
        failures.push(format!("root counts outside {{0, 1, p^g}}: {bad_counts:?}"));
    }
    if failures.is_empty() {
        Outcome::Pass(format!("{instances} (field, k, a, b) instances over {} fields", fields.len()))
    } else {
        Outcome::Fail(format!("{} mismatches, first: {}", failures.len(), failures[0]))
    }
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn gcd_u128(a: u128, b: u128) -> u128 {
    if b == 0 {
        a
    } else {
        gcd_u128(b, a % b)
    }
}

fn criterion_8() -> Outcome {
    let mut checked = 0;
    let mut failures = Vec::new();
    for p in [2u64, 3, 5, 7] {
        for k in 1..=12u32 {
            for n in 1..=12u32 {
                checked += 1;
                let direct = gcd_u128((p as u128).pow(k) + 1, (p as u128).pow(n) - 1);
                match gcd_power_formula(p, k, n) {
                    Ok(g) if g == direct => {}
                    other => failures.push(format!("p={p} k={k} n={n}: {other:?} vs {direct}")),
                }
            }
        }
    }
    if failures.is_empty() {
        Outcome::Pass(format!("{checked}/{checked} agree"))
    } else {
        Outcome::Fail(failures.join("; "))
    }
}

fn criterion_9() -> Outcome {
    let mut failures = Vec::new();
    let mut known = Vec::new();
    let mut notes = Vec::new();

    let t0 = sweep(ClaimId::T0, &preset(ClaimId::T0, Grid::Standard)).unwrap();
    let literal = "x^((3^k+1)/2), stated";
    let refuted_t0: Vec<(u32, u32)> = t0.refuted().map(|v| (v.params.n, v.params.k.unwrap_or(0))).collect();
    let other_t0 = t0.refuted().filter(|v| v.variant != literal).count();
    // the corrected reading gcd(k, n) = 1 with k odd matches everywhere
    let expected_t0 = vec![(2, 1), (3, 2), (4, 1), (4, 3), (5, 2), (5, 4)];
    if other_t0 > 0 {
        failures.push(format!("T0: {other_t0} refutations outside the (3^k+1)/2 literal condition"));
    } else if refuted_t0 == expected_t0 {
        known.push(format!("T0 literal (3^k+1)/2 condition refuted at (n,k) in {expected_t0:?}; other families and the k-odd reading match"));
    } else if !refuted_t0.is_empty() {
        failures.push(format!("T0 refutations {refuted_t0:?}"));
    }

    let t2 = sweep(ClaimId::T2, &preset(ClaimId::T2, Grid::Standard)).unwrap();
    match confirmed_only(&t2) {
        Ok(k) => notes.push(format!("T2 {k} confirmed")),
        Err(e) => failures.push(format!("T2: {e}")),
    }

    let mut t3_bounds = 0;
    for (p, k, n) in [(2, 2, 4), (3, 1, 2), (3, 1, 4), (2, 2, 8)] {
        let params = cdelta::theorems::ClaimParams { k: Some(k), ..cdelta::theorems::ClaimParams::field(p, n) };
        for v in cdelta::theorems::verify(ClaimId::T3, &params, ClaimId::T3.pinned_convention()).unwrap() {
            if v.status == Status::BoundHolds {
                t3_bounds += 1;
            } else {
                failures.push(format!("T3 ({p},{k},{n}) c={:?}: {:?}", v.params.c.map(|c| c.rank()), v.status));
            }
        }
    }
    notes.push(format!("T3 {t3_bounds} bounds hold"));

    let t4 = sweep(ClaimId::T4, &preset(ClaimId::T4, Grid::Standard)).unwrap();
    let gcd_variant_bad = t4.verdicts.iter().filter(|v| !v.variant.starts_with("stated") && v.status != Status::Confirmed).count();
    let literal_at_11 = t4.verdicts.iter().any(|v| v.variant.starts_with("stated") && v.params.n == 1 && v.params.k == Some(1) && v.status == Status::Refuted);
    if gcd_variant_bad == 0 && literal_at_11 {
        let literal_refuted = t4.refuted().count();
        notes.push(format!("T4 gcd criterion matches all {}; literal refuted {literal_refuted} times incl. (k,n)=(1,1)", t4.verdicts.len() / 2));
    } else {
        failures.push(format!("T4: gcd variant mismatches {gcd_variant_bad}, literal (1,1) refuted {literal_at_11}"));
    }

    let t5 = sweep(ClaimId::T5, &preset(ClaimId::T5, Grid::Standard)).unwrap();
    if t5.verdicts.iter().all(|v| v.status == Status::BoundHolds) {
        notes.push(format!("T5 {} bounds hold", t5.verdicts.len()));
    } else {
        failures.push("T5 bound violated".into());
    }

    let summary = notes.join("; ");
    if !failures.is_empty() {
        Outcome::Fail(failures.join("; "))
    } else if !known.is_empty() {
        Outcome::Known(format!("{}; {summary}", known.join("; ")))
    } else {
        Outcome::Pass(summary)
    }
}

fn in_pool<T: Send>(threads: usize, job: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(job)
}

fn criterion_10() -> Outcome {
    let run_spectrum = || {
        let field = gf(3, 4);
        let f = FunctionTable::polynomial(&field, &[(10, field.one()), (6, field.from_int(-1)), (2, field.from_int(-1))]).unwrap();
        let r = spectrum(&f, &CFilter::All, AConvention::PaperFootnote, SweepOptions::default()).unwrap();
        let mut csv = Vec::new();
        r.write_csv(&mut csv).unwrap();
        (serde_json::to_string(&r).unwrap(), csv)
    };
    let run_verify = || sweep(ClaimId::T8, &[(5, 2), (7, 1)]).unwrap().json_lines().unwrap();
    let base = (in_pool(1, run_spectrum), in_pool(1, run_verify));
    for t in [2, 3, 8] {
        if (in_pool(t, run_spectrum), in_pool(t, run_verify)) != base {
            return Outcome::Fail(format!("payload differs with {t} threads"));
        }
    }
    Outcome::Pass("spectrum JSON/CSV and verify JSON lines identical for 1, 2, 3, 8 threads".into())
}

fn main() -> ExitCode {
    // `cargo test -- <filter>` passes arguments; only the full run is defined
    if std::env::args().skip(1).any(|a| a == "--list") {
        return ExitCode::SUCCESS;
    }
    let mut run = Run { unexpected: 0 };
    run.record(1, "table 1 reproduction", criterion_1());
    run.record(2, "table 2 reproduction", criterion_2());
    run.record(3, "x^3 maximal uniformity", criterion_3());
    run.record(4, "inverse, even characteristic", criterion_4());
    run.record(5, "inverse, odd characteristic", criterion_5());
    run.record(6, "Walsh characterizations", criterion_6());
    run.record(7, "trinomial roots", criterion_7());
    run.record(8, "gcd lemma", criterion_8());
    run.record(9, "theorem sweep T0-T5", criterion_9());
    run.record(10, "determinism", criterion_10());
    if run.unexpected == 0 {
        println!("acceptance: no unexpected failures");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {} unexpected failure(s)", run.unexpected);
        ExitCode::FAILURE
    }
}
