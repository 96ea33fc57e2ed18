//! Suite files and the concurrent runner.
//!
//! A suite is a TOML file of `[[entry]]` tables (a symbol and theorem ids)
//! and `[[sweep]]` tables that expand to every rank-one or rank-two group
//! of a family up to an order bound. Entries run concurrently; the bundle
//! keeps suite order.

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{SkipReason, Status, TheoremId, TheoremReport, Verifier, VerifyError, REPORT_VERSION};
use crate::diagram::{parse_symbol, Diagram, Family};

#[derive(Clone, Debug, PartialEq, Eq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteEntry {
    pub symbol: String,
    pub theorems: Vec<TheoremId>,
    /// Cap overruns are acceptable for this entry.
    #[serde(default)]
    pub allow_skip: bool,
    /// Runs only in deep mode.
    #[serde(default)]
    pub deep: bool,
    /// Agreeing reports keep only their verdicts; set for sweep entries.
    #[serde(skip)]
    pub summarize: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepFamily {
    /// `Z_m`, `m >= 2`.
    Cyclic,
    /// `I_2(k)`, `k >= 3`.
    Dihedral,
    /// `G(m,1,2)`, `m >= 3`.
    Monomial2,
}

#[derive(Clone, Debug, PartialEq, Eq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub family: SweepFamily,
    pub max_order: u64,
    pub theorems: Vec<TheoremId>,
}

impl Sweep {
    pub fn diagrams(&self) -> Vec<Diagram> {
        let families: Vec<Family> = match self.family {
            SweepFamily::Cyclic => (2..=self.max_order as u32).map(Family::Cyclic).collect(),
            SweepFamily::Dihedral => (3..=(self.max_order / 2) as u32).map(Family::Dihedral).collect(),
            SweepFamily::Monomial2 => (3u32..)
                .take_while(|&m| 2 * (m as u64).pow(2) <= self.max_order)
                .map(|m| Family::monomial(m, 2))
                .collect(),
        };
        families.iter().map(Family::diagram).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct Suite {
    pub name: String,
    #[serde(default)]
    pub cap: Option<usize>,
    #[serde(default)]
    pub simplex_cap: Option<u64>,
    #[serde(default, rename = "entry")]
    pub entries: Vec<SuiteEntry>,
    #[serde(default, rename = "sweep")]
    pub sweeps: Vec<Sweep>,
}

pub fn parse_suite(text: &str) -> Result<Suite, VerifyError> {
    let suite: Suite = toml::from_str(text).map_err(|e| VerifyError::Suite(e.to_string()))?;
    for e in &suite.entries {
        parse_symbol(&e.symbol)?;
    }
    Ok(suite)
}

pub fn load_suite(path: &Path) -> Result<Suite, VerifyError> {
    parse_suite(&std::fs::read_to_string(path)?)
}

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub deep: bool,
    pub cap: Option<usize>,
    pub simplex_cap: Option<u64>,
    /// Worker threads; the rayon default when `None`.
    pub jobs: Option<usize>,
    pub timings: bool,
    pub cache_dir: Option<PathBuf>,
}

#[derive(Clone, Debug, Serialize)]
pub struct EntryResult {
    pub symbol: String,
    pub allow_skip: bool,
    pub reports: Vec<TheoremReport>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Summary {
    pub agree: usize,
    pub disagree: usize,
    pub skipped: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Bundle {
    pub mfc_report: u32,
    pub suite: String,
    pub cap: usize,
    pub simplex_cap: u64,
    pub deep: bool,
    pub summary: Summary,
    pub entries: Vec<EntryResult>,
}

impl Bundle {
    pub fn reports(&self) -> impl Iterator<Item = &TheoremReport> {
        self.entries.iter().flat_map(|e| e.reports.iter())
    }

    /// 0 when everything agrees or was skipped as declared, 1 on any
    /// disagreement, 3 when a cap was hit without `allow_skip`.
    pub fn exit_code(&self) -> i32 {
        if self.reports().any(|r| r.status == Status::Disagree) {
            return 1;
        }
        let undeclared = self.entries.iter().any(|e| {
            !e.allow_skip
                && e.reports
                    .iter()
                    .any(|r| matches!(r.status, Status::Skipped(SkipReason::Cap { .. })))
        });
        if undeclared {
            3
        } else {
            0
        }
    }

    pub fn write(&self, dir: &Path) -> Result<PathBuf, VerifyError> {
        std::fs::create_dir_all(dir)?;
        let path = dir.join("report.json");
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        std::fs::write(&path, text)?;
        Ok(path)
    }
}

impl Suite {
    /// Explicit entries followed by the expanded sweeps.
    pub fn expanded(&self) -> Vec<SuiteEntry> {
        let mut out = self.entries.clone();
        for sweep in &self.sweeps {
            out.extend(sweep.diagrams().iter().map(|d| SuiteEntry {
                symbol: d.to_symbol(),
                theorems: sweep.theorems.clone(),
                allow_skip: false,
                deep: false,
                summarize: true,
            }));
        }
        out
    }

    pub fn run(&self, opts: &RunOptions) -> Result<Bundle, VerifyError> {
        let cap = opts.cap.or(self.cap).unwrap_or(crate::group::DEFAULT_CAP);
        let simplex_cap = opts
            .simplex_cap
            .or(self.simplex_cap)
            .unwrap_or(crate::complex::DEFAULT_SIMPLEX_CAP);
        let verifier = Verifier::new(cap, simplex_cap, opts.cache_dir.clone()).with_timings(opts.timings);
        let entries = self.expanded();
        let mut pool = rayon::ThreadPoolBuilder::new();
        if let Some(j) = opts.jobs {
            pool = pool.num_threads(j.max(1));
        }
        let pool = pool.build()?;
        let results: Vec<EntryResult> = pool.install(|| {
            entries
                .par_iter()
                .map(|e| run_entry(&verifier, e, opts.deep))
                .collect::<Result<_, _>>()
        })?;
        let mut summary = Summary::default();
        for r in results.iter().flat_map(|e| e.reports.iter()) {
            match r.status {
                Status::Agree => summary.agree += 1,
                Status::Disagree => summary.disagree += 1,
                Status::Skipped(_) => summary.skipped += 1,
            }
        }
        Ok(Bundle {
            mfc_report: REPORT_VERSION,
            suite: self.name.clone(),
            cap,
            simplex_cap,
            deep: opts.deep,
            summary,
            entries: results,
        })
    }
}

fn run_entry(verifier: &Verifier, entry: &SuiteEntry, deep: bool) -> Result<EntryResult, VerifyError> {
    let d = parse_symbol(&entry.symbol)?;
    let skip_all = |reason: SkipReason| -> Vec<TheoremReport> {
        entry
            .theorems
            .iter()
            .map(|&t| TheoremReport::skipped(&d, t, reason.clone()))
            .collect()
    };
    let mut reports: Vec<TheoremReport> = if entry.deep && !deep {
        skip_all(SkipReason::DeepOnly)
    } else if let Some(reason) = verifier.precheck(&d)? {
        skip_all(reason)
    } else {
        match verifier.build(&d) {
            Ok(built) => entry
                .theorems
                .iter()
                .map(|&t| verifier.verify_built(t, &built))
                .collect::<Result<_, _>>()?,
            Err(e) => match super::cap_reason(&e) {
                Some(reason) => skip_all(reason),
                None => return Err(e),
            },
        }
    };
    if entry.summarize {
        reports.iter_mut().for_each(TheoremReport::summarize);
    }
    Ok(EntryResult {
        symbol: entry.symbol.clone(),
        allow_skip: entry.allow_skip,
        reports,
    })
}
