use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::Serialize;

use super::{Criterion, EvalError, Group, GroupPair, GroupSet, Phase, ScoredTranscript};
use crate::stats::{bonferroni_threshold, format_p, mean, sample_variance, welch_t, WelchResult};

#[derive(Debug, Clone)]
pub struct CompareConfig {
    /// Each pair is compared on total scores and criterion by criterion.
    pub pairs: Vec<GroupPair>,
    pub alpha: f64,
    /// Number of tests for the Bonferroni correction of per-criterion tests.
    pub tests: u32,
}

impl Default for CompareConfig {
    fn default() -> Self {
        let g = |s: &str| s.parse::<GroupPair>().expect("static pair");
        CompareConfig {
            pairs: vec![g("A:B"), g("A:C"), g("B:C"), g("AB:C")],
            alpha: 0.05,
            tests: Criterion::COUNT as u32,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TestResult {
    pub t: f64,
    pub df: f64,
    pub p: f64,
    pub p_display: String,
}

impl From<WelchResult> for TestResult {
    fn from(r: WelchResult) -> Self {
        TestResult {
            t: r.t,
            df: r.df,
            p: r.p,
            p_display: format_p(r.p),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupSummary {
    pub group: Group,
    pub case_solves: usize,
    pub participants: usize,
    pub mean_total: f64,
    pub sd_total: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SideSummary {
    pub groups: String,
    pub case_solves: usize,
    pub mean_total: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionComparison {
    pub criterion: Criterion,
    pub label: &'static str,
    pub phase: Phase,
    pub left_mean: Option<f64>,
    pub right_mean: Option<f64>,
    pub test: Option<TestResult>,
    /// Below the Bonferroni-corrected threshold.
    pub significant: bool,
    /// Below the uncorrected alpha.
    pub nominal: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub pair: GroupPair,
    pub left: SideSummary,
    pub right: SideSummary,
    pub total: Option<TestResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub criteria: Vec<CriterionComparison>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StatsReport {
    pub alpha: f64,
    pub tests: u32,
    pub threshold: f64,
    pub groups: Vec<GroupSummary>,
    pub comparisons: Vec<Comparison>,
}

fn side<'a>(dataset: &[&'a ScoredTranscript], set: GroupSet) -> Vec<&'a ScoredTranscript> {
    dataset.iter().copied().filter(|s| set.contains(s.group)).collect()
}

fn test_or_note(a: &[f64], b: &[f64]) -> (Option<TestResult>, Option<String>) {
    match welch_t(a, b) {
        Ok(r) => (Some(r.into()), None),
        Err(e) => (None, Some(e.to_string())),
    }
}

fn opt_mean(xs: &[f64]) -> Option<f64> {
    (!xs.is_empty()).then(|| mean(xs))
}

/// Compares groups on total scores and per criterion.
///
/// The input order does not matter: rows are sorted before any arithmetic,
/// so permuted datasets give identical reports.
pub fn compare_groups(
    dataset: &[ScoredTranscript],
    config: &CompareConfig,
) -> Result<StatsReport, EvalError> {
    let threshold = bonferroni_threshold(config.alpha, config.tests)?;
    let mut rows: Vec<&ScoredTranscript> = dataset.iter().collect();
    rows.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));

    let mut groups = Vec::new();
    for g in Group::ALL {
        let members: Vec<&ScoredTranscript> = rows.iter().copied().filter(|s| s.group == g).collect();
        if members.is_empty() {
            continue;
        }
        let totals: Vec<f64> = members.iter().map(|s| f64::from(s.total())).collect();
        let participants: BTreeSet<&str> = members.iter().map(|s| s.participant.as_str()).collect();
        groups.push(GroupSummary {
            group: g,
            case_solves: members.len(),
            participants: participants.len(),
            mean_total: mean(&totals),
            sd_total: (totals.len() >= 2).then(|| sample_variance(&totals).sqrt()),
        });
    }
    let usable = groups.iter().filter(|g| g.case_solves >= 2).count();
    if usable < 2 {
        return Err(EvalError::InsufficientData(format!(
            "need at least two groups with two case-solves each, found {usable}"
        )));
    }

    let comparisons = config
        .pairs
        .iter()
        .map(|&pair| {
            let left = side(&rows, pair.left);
            let right = side(&rows, pair.right);
            let totals = |xs: &[&ScoredTranscript]| -> Vec<f64> {
                xs.iter().map(|s| f64::from(s.total())).collect()
            };
            let (lt, rt) = (totals(&left), totals(&right));
            let (total, note) = test_or_note(&lt, &rt);
            let criteria = Criterion::ALL
                .into_iter()
                .map(|c| {
                    let points = |xs: &[&ScoredTranscript]| -> Vec<f64> {
                        xs.iter().map(|s| f64::from(s.score.get(c))).collect()
                    };
                    let (lp, rp) = (points(&left), points(&right));
                    let (test, note) = test_or_note(&lp, &rp);
                    let p = test.as_ref().map(|t| t.p);
                    CriterionComparison {
                        criterion: c,
                        label: c.label(),
                        phase: c.phase(),
                        left_mean: opt_mean(&lp),
                        right_mean: opt_mean(&rp),
                        significant: p.is_some_and(|p| p < threshold),
                        nominal: p.is_some_and(|p| p < config.alpha),
                        test,
                        note,
                    }
                })
                .collect();
            Comparison {
                pair,
                left: SideSummary {
                    groups: pair.left.to_string(),
                    case_solves: left.len(),
                    mean_total: opt_mean(&lt),
                },
                right: SideSummary {
                    groups: pair.right.to_string(),
                    case_solves: right.len(),
                    mean_total: opt_mean(&rt),
                },
                total,
                note,
                criteria,
            }
        })
        .collect();

    Ok(StatsReport {
        alpha: config.alpha,
        tests: config.tests,
        threshold,
        groups,
        comparisons,
    })
}

fn fmt_mean(m: Option<f64>) -> String {
    m.map_or_else(|| "-".to_owned(), |m| format!("{m:.2}"))
}

impl StatsReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Plain-text summary: group means, then one table per comparison.
    pub fn summary_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "Group  Case-solves  Participants  Mean score  SD");
        for g in &self.groups {
            let sd = g.sd_total.map_or_else(|| "-".to_owned(), |s| format!("{s:.2}"));
            let _ = writeln!(
                out,
                "{:<5}  {:>11}  {:>12}  {:>10.2}  {}",
                g.group.to_string(),
                g.case_solves,
                g.participants,
                g.mean_total,
                sd
            );
        }
        let _ = writeln!(
            out,
            "\nPer-criterion threshold: {} / {} = {:.6} (* significant, . p < {})",
            self.alpha, self.tests, self.threshold, self.alpha
        );
        for c in &self.comparisons {
            let _ = writeln!(out, "\n{} vs {}", c.left.groups, c.right.groups);
            let total = match &c.total {
                Some(t) => format!("t = {:.3}, df = {:.1}, p = {}", t.t, t.df, t.p_display),
                None => format!("not tested ({})", c.note.as_deref().unwrap_or("")),
            };
            let _ = writeln!(
                out,
                "  total score: {} (n={}) vs {} (n={}); {}",
                fmt_mean(c.left.mean_total),
                c.left.case_solves,
                fmt_mean(c.right.mean_total),
                c.right.case_solves,
                total
            );
            let _ = writeln!(
                out,
                "  {:<24} {:>6} {:>6} {:>9}",
                "Criterion", c.left.groups, c.right.groups, "p"
            );
            for k in &c.criteria {
                let p = k.test.as_ref().map_or_else(|| "--".to_owned(), |t| t.p_display.clone());
                let flag = if k.significant {
                    "*"
                } else if k.nominal {
                    "."
                } else {
                    ""
                };
                let _ = writeln!(
                    out,
                    "  {:<24} {:>6} {:>6} {:>9} {}",
                    k.label,
                    fmt_mean(k.left_mean),
                    fmt_mean(k.right_mean),
                    p,
                    flag
                );
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::Score;

    fn row(participant: &str, group: Group, case: u32, total: usize) -> ScoredTranscript {
        let mut points = [0u8; Criterion::COUNT];
        points[..total].iter_mut().for_each(|p| *p = 1);
        ScoredTranscript {
            participant: participant.into(),
            group,
            case,
            score: Score { points },
        }
    }

    fn dataset() -> Vec<ScoredTranscript> {
        let mut out = Vec::new();
        for (g, base) in [(Group::A, 14), (Group::B, 14), (Group::C, 17)] {
            for p in 0..3 {
                for case in 1..=3 {
                    out.push(row(&format!("{g}{p}"), g, case, base + (p + case as usize) % 3));
                }
            }
        }
        out
    }

    #[test]
    fn identical_groups_p_one() {
        let report = compare_groups(&dataset(), &CompareConfig::default()).unwrap();
        let ab = &report.comparisons[0];
        assert_eq!(ab.pair.to_string(), "A:B");
        assert_eq!(ab.total.as_ref().unwrap().p, 1.0);
        let ac = &report.comparisons[1];
        assert!(ac.total.as_ref().unwrap().p < 0.001);
        assert_eq!(report.groups.len(), 3);
        assert_eq!(report.groups[0].participants, 3);
    }

    #[test]
    fn order_independent() {
        let data = dataset();
        let mut rev = data.clone();
        rev.reverse();
        let a = compare_groups(&data, &CompareConfig::default()).unwrap().to_json();
        let b = compare_groups(&rev, &CompareConfig::default()).unwrap().to_json();
        assert_eq!(a, b);
    }

    #[test]
    fn insufficient() {
        let data: Vec<_> = dataset().into_iter().filter(|r| r.group == Group::A).collect();
        assert!(matches!(
            compare_groups(&data, &CompareConfig::default()),
            Err(EvalError::InsufficientData(_))
        ));
    }

    #[test]
    fn degenerate_criteria_are_noted() {
        let report = compare_groups(&dataset(), &CompareConfig::default()).unwrap();
        let ekg = &report.comparisons[0].criteria[0];
        // Every participant scored 1 on the first criterion.
        assert!(ekg.test.is_none());
        assert!(ekg.note.is_some());
        assert!(!ekg.significant);
        let text = report.summary_table();
        assert!(text.contains("A vs B"));
        assert!(text.contains("EKG"));
    }
}
