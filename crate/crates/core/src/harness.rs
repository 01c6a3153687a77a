//! Verification runs behind the command-line tool: extremal tables,
//! batch index computation, the family atlas and the lemma report.

use std::collections::{BTreeMap, BTreeSet};
use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use crate::braces::BraceClass;
use crate::canon::{canonical_form, CanonicalForm};
use crate::enumerate::{maximize_bicyclic, maximize_tricyclic, EnumerationResult, MaximizeOptions};
use crate::error::{Error, Result};
use crate::families::{
    discover_families, eval, verify_family, DiscoveryCorpus, DiscoveryReport, FamilyCheck,
    FamilyId, FamilyRegistry, Provenance,
};
use crate::graph6::parse_graph6;
use crate::invariants::{summarize, MostarSummary};
use crate::transforms::{run_lemmas, LemmaReport, RowStatus};

/// Process exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Outcome {
    Pass = 0,
    Fail = 1,
    Usage = 2,
    Partial = 3,
}

impl Outcome {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Pass,
    Fail,
    /// The size lies outside the tabulated range.
    Outside,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationRow {
    pub m: usize,
    pub expected_max: Option<u64>,
    pub observed_max: Option<u64>,
    pub expected_family_ids: Vec<FamilyId>,
    pub observed_maximizer_count: usize,
    pub graphs_visited: u64,
    /// Expected families whose member of size `m` is a maximizer.
    pub families_found: Vec<FamilyId>,
    /// Expected families whose member of size `m` is not a maximizer.
    pub families_missing: Vec<FamilyId>,
    /// Expected families without a registry entry.
    pub families_unpinned: Vec<FamilyId>,
    /// Maximizers not isomorphic to any listed family member.
    pub unlisted_maximizers: Vec<CanonicalForm>,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub histogram: Option<BTreeMap<u64, u64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub class: String,
    pub rows: Vec<VerificationRow>,
    /// Canonical graph6 of every maximizer, per size.
    pub maximizers: BTreeMap<usize, Vec<CanonicalForm>>,
}

impl VerificationReport {
    pub fn outcome(&self) -> Outcome {
        if self.rows.iter().any(|r| r.status == Status::Fail) {
            Outcome::Fail
        } else {
            Outcome::Pass
        }
    }

    /// One graph6 line per maximizer, in order of size.
    pub fn sidecar(&self) -> String {
        self.maximizers
            .values()
            .flatten()
            .map(|f| format!("{}\n", f.as_str()))
            .collect()
    }
}

/// Bounds accepted by the tricyclic verification.
pub const THEOREM1_SIZES: RangeInclusive<usize> = 6..=13;
/// Bounds accepted by the bicyclic verification.
pub const THEOREM2_SIZES: RangeInclusive<usize> = 5..=11;

/// Maximum tricyclic index and the listed extremal families.
pub fn theorem1_expected(m: usize) -> Option<(u64, &'static [FamilyId])> {
    use FamilyId::*;
    Some(match m {
        7 => (12, &[F1, H1]),
        8 => (23, &[A3, F1, H1]),
        9 => (36, &[F1, H1, A2, A3, A4, A5, A6]),
        10 => (53, &[A2]),
        11 => (72, &[A1, A2]),
        m if m >= 12 => ((m * m - m - 36) as u64, &[A0]),
        _ => return None,
    })
}

/// Maximum bicyclic index and the listed extremal families.
pub fn theorem2_expected(m: usize) -> Option<(u64, &'static [FamilyId])> {
    use FamilyId::*;
    Some(match m {
        5 => (4, &[B3, B4]),
        6..=8 => ((m * m - 3 * m - 6) as u64, &[B1, B3]),
        9 => (48, &[B0, B1, B2, B3, B4]),
        m if m >= 10 => ((m * m - m - 24) as u64, &[B0]),
        _ => return None,
    })
}

fn row_from(
    reg: &FamilyRegistry,
    m: usize,
    expected: Option<(u64, &'static [FamilyId])>,
    result: EnumerationResult,
) -> VerificationRow {
    let maximizers: BTreeSet<&CanonicalForm> = result.maximizers.iter().collect();
    let (expected_max, ids) = match expected {
        Some((v, ids)) => (Some(v), ids.to_vec()),
        None => (None, Vec::new()),
    };
    let mut row = VerificationRow {
        m,
        expected_max,
        observed_max: result.max_value,
        expected_family_ids: ids.clone(),
        observed_maximizer_count: result.maximizers.len(),
        graphs_visited: result.graphs_visited,
        families_found: Vec::new(),
        families_missing: Vec::new(),
        families_unpinned: Vec::new(),
        unlisted_maximizers: Vec::new(),
        status: Status::Outside,
        notes: Vec::new(),
        histogram: result.histogram,
    };
    let mut listed: BTreeMap<CanonicalForm, Vec<FamilyId>> = BTreeMap::new();
    for id in ids {
        match reg.build(id, m) {
            Ok(g) => {
                let form = canonical_form(&g);
                if maximizers.contains(&form) {
                    row.families_found.push(id);
                } else {
                    row.families_missing.push(id);
                }
                listed.entry(form).or_default().push(id);
            }
            Err(Error::NotPinned(_)) => row.families_unpinned.push(id),
            Err(e) => {
                row.families_missing.push(id);
                row.notes.push(format!("{id}: {e}"));
            }
        }
    }
    for same in listed.values().filter(|ids| ids.len() > 1) {
        let names: Vec<String> = same.iter().map(|id| id.to_string()).collect();
        row.notes.push(format!("{} coincide at m = {m}", names.join(" and ")));
    }
    row.unlisted_maximizers = result
        .maximizers
        .iter()
        .filter(|f| !listed.contains_key(*f))
        .cloned()
        .collect();
    if expected_max.is_some() {
        let listed_count = row.expected_family_ids.len();
        if listed_count != row.observed_maximizer_count {
            row.notes.push(format!(
                "{} families listed, {} non-isomorphic maximizers found",
                listed_count, row.observed_maximizer_count
            ));
        }
        if !row.unlisted_maximizers.is_empty() && row.families_unpinned.is_empty() {
            row.notes.push(format!(
                "{} maximizers match no listed family",
                row.unlisted_maximizers.len()
            ));
        }
        row.status = if row.observed_max == expected_max && row.families_missing.is_empty() {
            Status::Pass
        } else {
            Status::Fail
        };
    } else {
        row.notes.push("outside the tabulated range".into());
    }
    row
}

fn check_range(range: &RangeInclusive<usize>, allowed: &RangeInclusive<usize>) -> Result<()> {
    if range.is_empty() || range.start() < allowed.start() || range.end() > allowed.end() {
        return Err(Error::Usage(format!(
            "size range {}..={} must lie within {}..={}",
            range.start(),
            range.end(),
            allowed.start(),
            allowed.end()
        )));
    }
    Ok(())
}

/// Maximizes over all tricyclic graphs of each size and compares with the
/// tabulated maxima and extremal families.
pub fn verify_theorem1(
    range: RangeInclusive<usize>,
    reg: &FamilyRegistry,
    opts: MaximizeOptions,
) -> Result<VerificationReport> {
    check_range(&range, &THEOREM1_SIZES)?;
    let mut report = VerificationReport {
        class: "tricyclic".into(),
        rows: Vec::new(),
        maximizers: BTreeMap::new(),
    };
    for m in range {
        let result = maximize_tricyclic(m, opts)?;
        report.maximizers.insert(m, result.maximizers.clone());
        report.rows.push(row_from(reg, m, theorem1_expected(m), result));
    }
    Ok(report)
}

/// Bicyclic analogue of [`verify_theorem1`].
pub fn verify_theorem2(
    range: RangeInclusive<usize>,
    reg: &FamilyRegistry,
    opts: MaximizeOptions,
) -> Result<VerificationReport> {
    check_range(&range, &THEOREM2_SIZES)?;
    let mut report = VerificationReport {
        class: "bicyclic".into(),
        rows: Vec::new(),
        maximizers: BTreeMap::new(),
    };
    for m in range {
        let result = maximize_bicyclic(m, opts)?;
        report.maximizers.insert(m, result.maximizers.clone());
        report.rows.push(row_from(reg, m, theorem2_expected(m), result));
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InputProblem {
    /// 1-based input line.
    pub line: usize,
    pub message: String,
    /// Parse failures, as opposed to well-formed but disconnected graphs.
    pub parse: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ComputeOutput {
    pub summaries: Vec<MostarSummary>,
    pub problems: Vec<InputProblem>,
}

impl ComputeOutput {
    pub fn outcome(&self) -> Outcome {
        if self.problems.iter().any(|p| p.parse) {
            Outcome::Usage
        } else if !self.problems.is_empty() {
            Outcome::Partial
        } else {
            Outcome::Pass
        }
    }

    /// One JSON object per line.
    pub fn to_json_lines(&self) -> Result<String> {
        let mut out = String::new();
        for s in &self.summaries {
            out.push_str(&serde_json::to_string(s)?);
            out.push('\n');
        }
        Ok(out)
    }

    pub fn to_csv(&self) -> String {
        let mut out = format!("{}\n", MostarSummary::csv_header());
        for s in &self.summaries {
            for row in s.csv_rows() {
                out.push_str(&row);
                out.push('\n');
            }
        }
        out
    }
}

/// Summaries for every graph6 line of `input`; blank lines and the optional
/// `>>graph6<<` header are ignored.
pub fn compute(input: &str) -> ComputeOutput {
    let mut out = ComputeOutput::default();
    for (i, raw) in input.lines().enumerate() {
        let line = raw.trim();
        let line = line.strip_prefix(">>graph6<<").unwrap_or(line);
        if line.is_empty() {
            continue;
        }
        let problem = |e: Error, parse| InputProblem {
            line: i + 1,
            message: e.to_string(),
            parse,
        };
        match parse_graph6(line) {
            Err(e) => out.problems.push(problem(e, true)),
            Ok(g) => match summarize(&g) {
                Ok(s) => out.summaries.push(s),
                Err(e) => out.problems.push(problem(e, false)),
            },
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosedFormProbe {
    pub m: usize,
    pub best_on_brace: u64,
    pub closed_form: i64,
    pub printed_variant: i64,
}

#[derive(Clone, Debug, Serialize)]
pub struct AtlasReport {
    pub discovery: DiscoveryReport,
    pub pinning: Vec<FamilyCheck>,
    /// Best index on the brace named for the last family, against its
    /// stated closed form and the variant printed at the end of its proof.
    pub h4_check: Vec<ClosedFormProbe>,
}

impl AtlasReport {
    pub fn outcome(&self) -> Outcome {
        if self.pinning.iter().any(|c| !c.passed()) {
            Outcome::Fail
        } else if !self.discovery.unresolved.is_empty() {
            Outcome::Partial
        } else {
            Outcome::Pass
        }
    }
}

/// Number of sizes past `m_min` a discovered entry is checked over.
pub const DISCOVERED_PIN_SPAN: usize = 15;

/// Runs discovery on the enumeration corpus and returns the merged registry
/// with the report.
pub fn atlas(threads: usize) -> Result<(FamilyRegistry, AtlasReport)> {
    let corpus = DiscoveryCorpus::enumerate(threads)?;
    let mut reg = FamilyRegistry::analytic();
    let discovery = discover_families(&corpus, &reg)?;
    for spec in &discovery.entries {
        reg.insert(spec.clone());
    }
    let mut pinning = Vec::new();
    for spec in reg.specs().filter(|s| s.provenance == Provenance::Discovered) {
        if spec.poly.is_some() {
            pinning.push(verify_family(
                &reg,
                spec.id,
                spec.m_min..=spec.m_min + DISCOVERED_PIN_SPAN,
            )?);
        }
    }
    let h4 = FamilyId::H4;
    let class = BraceClass {
        kind: h4.brace_kind().expect("tricyclic family"),
        path_parameters: h4.brace_parameters().expect("tricyclic family").to_vec(),
    };
    let poly = h4.closed_form().expect("tricyclic family");
    let h4_check = corpus
        .brace_maxima
        .iter()
        .filter_map(|(&m, per)| {
            per.get(&class).map(|&best| ClosedFormProbe {
                m,
                best_on_brace: best,
                closed_form: eval(poly, m),
                printed_variant: eval([poly[0], poly[1], -248], m),
            })
        })
        .collect();
    Ok((
        reg,
        AtlasReport {
            discovery,
            pinning,
            h4_check,
        },
    ))
}

/// Exit status of a lemma report: every row must match or be skipped.
pub fn lemma_outcome(report: &LemmaReport) -> Outcome {
    if report.rows.iter().all(|r| r.status != RowStatus::Discrepant) {
        Outcome::Pass
    } else {
        Outcome::Fail
    }
}

pub fn lemmas(probes: usize, seed: u64) -> Result<LemmaReport> {
    if probes == 0 {
        return Err(Error::Usage("at least one probe tuple is required".into()));
    }
    run_lemmas(probes, seed)
}

/// Parses `7..12`, `7..=12`, `7-12` or a single size; all bounds inclusive.
pub fn parse_range(text: &str) -> Result<RangeInclusive<usize>> {
    let bad = || Error::Usage(format!("invalid size range `{text}`"));
    let num = |s: &str| s.trim().parse::<usize>().map_err(|_| bad());
    let parts = text
        .split_once("..=")
        .or_else(|| text.split_once(".."))
        .or_else(|| text.split_once('-'));
    let range = match parts {
        Some((a, b)) => num(a)?..=num(b)?,
        None => {
            let m = num(text)?;
            m..=m
        }
    };
    if range.is_empty() {
        return Err(bad());
    }
    Ok(range)
}
