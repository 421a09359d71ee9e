//! The acceptance grid: numbered criteria, each a set of checks over a
//! fixed list of data with a time budget.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use super::*;
use crate::coorddouble::{relation_ideal_a, RForm};
use crate::rootdata::make_root_datum;
use crate::scalar::{RatFunc, ScalarQ};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CriterionResult {
    pub id: u32,
    pub title: String,
    pub reports: Vec<CheckReport>,
    pub elapsed_ms: u64,
    pub budget_ms: u64,
}

impl CriterionResult {
    pub fn checks_pass(&self) -> bool {
        self.reports.iter().all(CheckReport::passed)
    }

    pub fn within_budget(&self) -> bool {
        self.elapsed_ms <= self.budget_ms
    }

    pub fn passed(&self) -> bool {
        self.checks_pass() && self.within_budget()
    }

    pub fn failures(&self) -> Vec<&CheckReport> {
        self.reports.iter().filter(|r| !r.passed()).collect()
    }

    /// One line: id, status, counts, time and the first failure.
    pub fn summary(&self) -> String {
        let n = self.reports.len();
        let ok = self.reports.iter().filter(|r| r.passed()).count();
        let mut s = format!(
            "criterion {:>2} {} {} ({}/{} checks, {} ms of {} ms)",
            self.id,
            if self.passed() { "PASS" } else { "FAIL" },
            self.title,
            ok,
            n,
            self.elapsed_ms,
            self.budget_ms
        );
        if let Some(f) = self.failures().first() {
            s.push_str(&format!("; {} {}: {}", f.datum, f.check_name, f.witness));
        } else if !self.within_budget() {
            s.push_str("; over budget");
        }
        s
    }
}

/// Benches shared between criteria, one per datum name.
#[derive(Default)]
pub struct Workbench {
    benches: Mutex<HashMap<String, Arc<Bench<ScalarQ>>>>,
}

impl Workbench {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn bench(&self, name: &str) -> Result<Arc<Bench<ScalarQ>>, UqgError> {
        let mut m = self.benches.lock().expect("bench map poisoned");
        if let Some(b) = m.get(name) {
            return Ok(b.clone());
        }
        let d = parse_datum(name)?;
        let b = Arc::new(Bench::new(&d));
        m.insert(name.to_string(), b.clone());
        Ok(b)
    }
}

/// "B2" → B_2.
pub fn parse_datum(name: &str) -> Result<RootDatum, UqgError> {
    let bad = || UqgError::Invalid(format!("'{}' is not a datum name like A2 or D4", name));
    let t: LieType = name.get(..1).ok_or_else(bad)?.parse().map_err(|_| bad())?;
    let n: usize = name.get(1..).ok_or_else(bad)?.parse().map_err(|_| bad())?;
    make_root_datum(t, n).map_err(|e| UqgError::Invalid(e.to_string()))
}

pub struct Criterion {
    pub id: u32,
    pub title: &'static str,
    pub budget: Duration,
    run: fn(&Workbench) -> Result<Vec<CheckReport>, UqgError>,
}

impl Criterion {
    pub fn run(&self, wb: &Workbench) -> Result<CriterionResult, UqgError> {
        let t0 = Instant::now();
        let reports = (self.run)(wb)?;
        Ok(CriterionResult {
            id: self.id,
            title: self.title.to_string(),
            reports,
            elapsed_ms: t0.elapsed().as_millis() as u64,
            budget_ms: self.budget.as_millis() as u64,
        })
    }
}

/// Runs `check` on every datum of `data` concurrently, keeping data order.
fn over<F>(wb: &Workbench, data: &[&str], check: F) -> Result<Vec<CheckReport>, UqgError>
where
    F: Fn(&Bench<ScalarQ>, &str) -> Result<Vec<CheckReport>, UqgError> + Sync,
{
    let benches: Vec<_> = data.iter().map(|d| wb.bench(d)).collect::<Result<_, _>>()?;
    let per: Vec<Result<Vec<CheckReport>, UqgError>> = std::thread::scope(|s| {
        let hs: Vec<_> = benches.iter().zip(data).map(|(b, d)| s.spawn(|| check(b, d))).collect();
        hs.into_iter().map(|h| h.join().expect("criterion thread panicked")).collect()
    });
    let mut out = Vec::new();
    for r in per {
        out.extend(r?);
    }
    Ok(out)
}

fn c1(wb: &Workbench) -> Result<Vec<CheckReport>, UqgError> {
    over(wb, &["A2", "A3", "B2", "C3", "D4"], |b, d| Ok(vec![check_pbw_dims(b, if d == "D4" { 3 } else { 4 })?]))
}

fn c2(wb: &Workbench) -> Result<Vec<CheckReport>, UqgError> {
    over(wb, &["A1", "A2", "B2", "C2"], |b, _| Ok(vec![check_hopf(b, 100, 7)?]))
}

fn c3(wb: &Workbench) -> Result<Vec<CheckReport>, UqgError> {
    over(wb, &["A2", "B2", "C2", "A3", "B3", "C3", "D3"], |b, _| Ok(vec![check_braid(b)?]))
}

fn c4(wb: &Workbench) -> Result<Vec<CheckReport>, UqgError> {
    over(wb, &["A2", "A3", "B2", "C2", "C3", "D3", "D4"], |b, d| {
        Ok(vec![check_soibel(b, if d == "D4" { Some(4) } else { None })?])
    })
}

fn c5(wb: &Workbench) -> Result<Vec<CheckReport>, UqgError> {
    over(wb, &["A1", "A2", "B2", "C2"], |b, _| Ok(vec![check_rmatrix(b)?]))
}

fn c6(wb: &Workbench) -> Result<Vec<CheckReport>, UqgError> {
    over(wb, &["A1", "A2", "B2", "C2"], |b, _| Ok(vec![check_lbattery(b)?, check_lstru(b)?]))
}

fn c7(wb: &Workbench) -> Result<Vec<CheckReport>, UqgError> {
    over(wb, &["A2", "A3", "B2", "C2", "C3"], |b, _| Ok(vec![check_rootvect(b)?, check_copr(b)?]))
}

/// Quotient dimension of the relation ideal, against the count from the
/// Hilbert series of the quantum matrix algebra (plus the determinant).
fn relation_ideal_report(n: usize, d: usize, expected: usize) -> Result<CheckReport, UqgError> {
    let label = format!("A{}", n);
    run_check("relation_ideal", &label, Some(format!("words of length ≤ {}", d)), || {
        let b: Bench<RatFunc> = Bench::new(&parse_datum(&label)?);
        let lf = b.lfun()?;
        let ideal = relation_ideal_a(&RForm::new(&lf.r), &lf.rep, d)?;
        let got = ideal.quotient_dim();
        if got != expected {
            return Ok(Err(format!("quotient dimension {} instead of {}", got, expected)));
        }
        Ok(Ok(vec![format!("{} words, quotient dimension {}", ideal.words.len(), got)]))
    })
}

fn c8(_: &Workbench) -> Result<Vec<CheckReport>, UqgError> {
    let jobs: Vec<Box<dyn FnOnce() -> Result<CheckReport, UqgError> + Send>> = vec![
        Box::new(|| relation_ideal_report(1, 2, 14)),
        Box::new(|| relation_ideal_report(2, 2, 55)),
        Box::new(|| check_main(MainInstance { n: 1, d: 2, dp: 2 })),
        Box::new(|| check_main(MainInstance { n: 2, d: 2, dp: 1 })),
    ];
    std::thread::scope(|s| {
        let hs: Vec<_> = jobs.into_iter().map(|j| s.spawn(j)).collect();
        hs.into_iter().map(|h| h.join().expect("criterion thread panicked")).collect()
    })
}

fn c9(wb: &Workbench) -> Result<Vec<CheckReport>, UqgError> {
    over(wb, &["A1", "A2", "B2"], |b, _| Ok(vec![check_nogo(b)?, check_nogo_control(b)?]))
}

fn c10(wb: &Workbench) -> Result<Vec<CheckReport>, UqgError> {
    over(wb, &["A1", "A2", "B2"], |b, _| Ok(vec![check_isom(b)?]))
}

fn c11(wb: &Workbench) -> Result<Vec<CheckReport>, UqgError> {
    over(wb, &["A1", "A2"], |b, _| Ok(vec![check_double(b, 50, 11)?]))
}

/// Criteria 1 through 11; the twelfth concerns the command-line front end.
pub fn criteria() -> Vec<Criterion> {
    let s = Duration::from_secs;
    vec![
        Criterion { id: 1, title: "PBW dimensions against Kostant partitions", budget: s(60), run: c1 },
        Criterion { id: 2, title: "Hopf axioms", budget: s(60), run: c2 },
        Criterion { id: 3, title: "braid relations and root-vector weights", budget: s(120), run: c3 },
        Criterion { id: 4, title: "straightening of root vectors", budget: s(300), run: c4 },
        Criterion { id: 5, title: "R-matrix battery", budget: s(300), run: c5 },
        Criterion { id: 6, title: "l-functional battery and shape", budget: s(300), run: c6 },
        Criterion { id: 7, title: "l-functionals as root vectors and their coproducts", budget: s(600), run: c7 },
        Criterion { id: 8, title: "kernel of the double map on truncations", budget: s(600), run: c8 },
        Criterion { id: 9, title: "inhomogeneous obstruction element", budget: s(60), run: c9 },
        Criterion { id: 10, title: "generators from l-functional entries", budget: s(120), run: c10 },
        Criterion { id: 11, title: "double algebra laws", budget: s(120), run: c11 },
    ]
}

/// Runs the selected criteria (all when `ids` is empty) in order, sharing benches.
pub fn run_criteria(ids: &[u32]) -> Result<Vec<CriterionResult>, UqgError> {
    let wb = Workbench::new();
    criteria().iter().filter(|c| ids.is_empty() || ids.contains(&c.id)).map(|c| c.run(&wb)).collect()
}
