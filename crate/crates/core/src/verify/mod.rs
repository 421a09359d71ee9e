//! Named, reportable checks. Each returns a [`CheckReport`]; an `Err` means
//! the computation itself hit an integrity failure before the check could
//! be decided.

mod algebra;
pub mod criteria;
mod frt;
mod lchecks;

use std::sync::{Arc, OnceLock};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::lfun::Lfun;
use crate::rootdata::{LieType, RootDatum};
use crate::scalar::QField;
use crate::uqg::{Uqg, UqgError};

pub use algebra::{check_braid, check_hopf, check_jantz, check_pbw_dims, check_soibel};
pub use frt::{check_double, check_main, MainInstance};
pub use lchecks::{
    check_copr, check_isom, check_lbattery, check_lstru, check_nogo, check_nogo_control, check_rmatrix,
    check_rootvect, sp_commutator_form, sp_exception_params,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check_name: String,
    pub datum: String,
    pub status: Status,
    /// Counterexample or failed identity; empty on pass.
    pub witness: String,
    pub timing_ms: u64,
    /// Set for finite instances of statements that hold in general.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub instance: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub details: Vec<String>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// Result of a check body: `Ok(details)` or `Err(witness)`.
pub(crate) type Outcome = Result<Vec<String>, String>;

pub(crate) fn run_check<F>(name: &str, datum: &str, instance: Option<String>, body: F) -> Result<CheckReport, UqgError>
where
    F: FnOnce() -> Result<Outcome, UqgError>,
{
    let t0 = Instant::now();
    let out = body()?;
    let timing_ms = t0.elapsed().as_millis() as u64;
    let (status, witness, details) = match out {
        Ok(d) => (Status::Pass, String::new(), d),
        Err(w) => (Status::Fail, if w.is_empty() { "unspecified failure".into() } else { w }, Vec::new()),
    };
    Ok(CheckReport { check_name: name.into(), datum: datum.into(), status, witness, timing_ms, instance, details })
}

/// Shared state for the checks on one datum: the algebra and, built on
/// first use, the l-functionals.
pub struct Bench<S> {
    pub u: Arc<Uqg<S>>,
    lfun: OnceLock<Result<Arc<Lfun<S>>, UqgError>>,
}

impl<S: QField> Bench<S> {
    pub fn new(datum: &RootDatum) -> Self {
        Bench { u: Arc::new(Uqg::new(datum)), lfun: OnceLock::new() }
    }

    pub fn from_uqg(u: Arc<Uqg<S>>) -> Self {
        Bench { u, lfun: OnceLock::new() }
    }

    pub fn name(&self) -> String {
        self.u.datum().name()
    }

    pub fn lfun(&self) -> Result<Arc<Lfun<S>>, UqgError> {
        self.lfun.get_or_init(|| Lfun::new(self.u.clone()).map(Arc::new)).clone()
    }
}

/// Bounds used by [`verify_all`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerifyOptions {
    pub pbw_height: i64,
    pub jantz_height: i64,
    /// Height bound on β_i+β_j for the straightening check (None = all pairs).
    pub soibel_height: Option<i64>,
    pub hopf_samples: usize,
    pub seed: u64,
    /// Truncation for the kernel check; only type A of rank ≤ 2 has one.
    pub main: Option<MainInstance>,
}

impl VerifyOptions {
    pub fn for_datum(d: &RootDatum) -> Self {
        let big = d.rank >= 4;
        let main = match (d.lie_type, d.rank) {
            (LieType::A, 1) => Some(MainInstance { n: 1, d: 2, dp: 2 }),
            (LieType::A, 2) => Some(MainInstance { n: 2, d: 2, dp: 1 }),
            _ => None,
        };
        VerifyOptions {
            pbw_height: if big { 3 } else { 4 },
            jantz_height: 3,
            soibel_height: if big { Some(4) } else { None },
            hopf_samples: 100,
            seed: 7,
            main,
        }
    }
}

/// Names accepted by [`verify_selected`], in report order.
pub const CHECK_NAMES: &[&str] = &[
    "braid",
    "copr",
    "double",
    "hopf_axioms",
    "isom",
    "jantz",
    "lfun_battery",
    "lstru",
    "main",
    "nogo",
    "nogo_control",
    "pbw_dims",
    "rmatrix",
    "rootvect",
    "soibel",
];

/// Every check that applies to `datum`, sorted by name.
pub fn verify_all<S: QField>(datum: &RootDatum, opts: &VerifyOptions) -> Result<Vec<CheckReport>, UqgError> {
    verify_selected::<S>(datum, opts, &[])
}

/// The named checks (all when `names` is empty), run concurrently and sorted
/// by name. `main` is skipped when the options carry no instance for it.
pub fn verify_selected<S: QField>(
    datum: &RootDatum,
    opts: &VerifyOptions,
    names: &[String],
) -> Result<Vec<CheckReport>, UqgError> {
    if let Some(bad) = names.iter().find(|n| !CHECK_NAMES.contains(&n.as_str())) {
        return Err(UqgError::Invalid(format!("unknown check '{}' (known: {})", bad, CHECK_NAMES.join(", "))));
    }
    let want = |n: &str| names.is_empty() || names.iter().any(|x| x == n);
    let bench: Bench<S> = Bench::new(datum);
    let b = &bench;
    type Job<'a> = Box<dyn FnOnce() -> Result<CheckReport, UqgError> + Send + 'a>;
    let all: Vec<(&str, Job)> = vec![
        ("pbw_dims", Box::new(move || check_pbw_dims(b, opts.pbw_height))),
        ("hopf_axioms", Box::new(move || check_hopf(b, opts.hopf_samples, opts.seed))),
        ("braid", Box::new(move || check_braid(b))),
        ("soibel", Box::new(move || check_soibel(b, opts.soibel_height))),
        ("jantz", Box::new(move || check_jantz(b, opts.jantz_height))),
        ("rmatrix", Box::new(move || check_rmatrix(b))),
        ("lfun_battery", Box::new(move || check_lbattery(b))),
        ("lstru", Box::new(move || check_lstru(b))),
        ("rootvect", Box::new(move || check_rootvect(b))),
        ("copr", Box::new(move || check_copr(b))),
        ("nogo", Box::new(move || check_nogo(b))),
        ("nogo_control", Box::new(move || check_nogo_control(b))),
        ("isom", Box::new(move || check_isom(b))),
        ("double", Box::new(move || check_double(b, 50, opts.seed))),
    ];
    let mut jobs: Vec<Job> = all.into_iter().filter(|(n, _)| want(n)).map(|(_, j)| j).collect();
    if let Some(inst) = opts.main.filter(|_| want("main")) {
        jobs.push(Box::new(move || check_main(inst)));
    }
    let mut reports: Vec<CheckReport> = std::thread::scope(|s| {
        let handles: Vec<_> = jobs.into_iter().map(|j| s.spawn(j)).collect();
        handles.into_iter().map(|h| h.join().expect("check thread panicked")).collect::<Result<Vec<_>, _>>()
    })?;
    reports.sort_by(|a, b| a.check_name.cmp(&b.check_name));
    Ok(reports)
}
