//! Compliance checks of questions against a target subpoint, plus the
//! deterministic one-step verb repair.

use std::collections::{BTreeMap, BTreeSet};

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::parser::{extract_action_verbs, VerbHit};
use crate::taxonomy::{BloomLevel, NcaaaDomain, SubpointId, Taxonomy};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QuestionSource {
    Human,
    Generated,
    Repaired,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Question {
    pub id: String,
    pub text: String,
    #[serde(rename = "targets")]
    pub target_subpoints: Vec<SubpointId>,
    pub source: QuestionSource,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub topic: Option<String>,
    pub created_at: DateTime<Utc>,
}

impl Question {
    pub fn new(id: impl Into<String>, text: impl Into<String>, targets: Vec<SubpointId>) -> Self {
        Question {
            id: id.into(),
            text: text.into(),
            target_subpoints: targets,
            source: QuestionSource::Human,
            topic: None,
            created_at: Utc::now(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub question_id: String,
    pub target_subpoint: SubpointId,
    pub compliant: bool,
    pub primary_verb: Option<VerbHit>,
    pub all_hits: Vec<VerbHit>,
    pub matched_levels: BTreeSet<BloomLevel>,
    pub table_domain: NcaaaDomain,
    pub level_domain: Option<NcaaaDomain>,
    pub suggestions: Vec<String>,
    pub diagnostics: Vec<String>,
}

/// Level-derived domain for a set of matched levels. When the levels reduce to
/// different domains the highest level wins.
pub fn level_domain(taxonomy: &Taxonomy, levels: &BTreeSet<BloomLevel>) -> Option<NcaaaDomain> {
    levels.iter().next_back().map(|&level| taxonomy.ncaaa_domain_for_level(level))
}

pub fn validate_question(question: &Question, subpoint: SubpointId, taxonomy: &Taxonomy) -> Result<ValidationReport> {
    let spec = taxonomy.subpoint(subpoint);
    let all_hits = extract_action_verbs(&question.text, taxonomy.registry())?;
    let mut diagnostics = Vec::new();

    if !question.target_subpoints.contains(&subpoint) {
        diagnostics.push(format!("hypothetical-target: {subpoint} is not among the question's targets"));
    }

    let in_row = all_hits.iter().find(|hit| spec.contains_verb(&hit.span.lemma));
    let compliant = in_row.is_some();
    let primary_verb = in_row.or_else(|| all_hits.first()).cloned();

    match (&primary_verb, compliant) {
        (None, _) => diagnostics.push("no-verb-found: the text contains no registered question verb".to_string()),
        (Some(hit), false) => diagnostics.push(format!(
            "verb-not-in-row: `{}` is not an approved verb for {subpoint}",
            hit.span.lemma
        )),
        (Some(hit), true) => {
            if let Some(first) = all_hits.first().filter(|first| first.span.index < hit.span.index) {
                diagnostics.push(format!(
                    "leading-verb-skipped: `{}` precedes the approved verb `{}`",
                    first.span.lemma, hit.span.lemma
                ));
            }
        }
    }

    let matched_levels: BTreeSet<BloomLevel> = match &primary_verb {
        Some(hit) if spec.any_level => hit.levels.clone(),
        Some(hit) => hit.levels.intersection(&spec.bloom_levels).copied().collect(),
        None => BTreeSet::new(),
    };
    if spec.any_level && compliant {
        diagnostics.push(format!("any-level: {subpoint} accepts any level, reported level follows the verb"));
    }

    let level_domain = level_domain(taxonomy, &matched_levels);
    if let Some(domain) = level_domain.filter(|d| *d != spec.ncaaa_domain) {
        diagnostics.push(format!(
            "domain-split: outcome domain {} differs from level domain {domain}",
            spec.ncaaa_domain
        ));
    }

    let used: BTreeSet<&str> = all_hits.iter().map(|h| h.span.lemma.as_str()).collect();
    let suggestions = spec.verb_row.iter().filter(|v| !used.contains(v.as_str())).cloned().collect();

    Ok(ValidationReport {
        question_id: question.id.clone(),
        target_subpoint: subpoint,
        compliant,
        primary_verb,
        all_hits,
        matched_levels,
        table_domain: spec.ncaaa_domain,
        level_domain,
        suggestions,
        diagnostics,
    })
}

/// Replaces the primary verb with the first approved verb of the subpoint row.
///
/// Compliant questions come back unchanged.
pub fn suggest_repair(question: &Question, subpoint: SubpointId, taxonomy: &Taxonomy) -> Result<Question> {
    let report = validate_question(question, subpoint, taxonomy)?;
    if report.compliant {
        return Ok(question.clone());
    }
    let hit = report.primary_verb.ok_or(Error::NoVerbFound)?;
    let replacement = &taxonomy.subpoint(subpoint).verb_row[0];
    let replacement = if hit.span.surface.chars().next().is_some_and(char::is_uppercase) {
        capitalize(replacement)
    } else {
        replacement.to_lowercase()
    };

    let start = byte_offset(&question.text, hit.span.char_offset);
    let end = start + hit.span.surface.len();
    let mut text = String::with_capacity(question.text.len() + replacement.len());
    text.push_str(&question.text[..start]);
    text.push_str(&replacement);
    text.push_str(&question.text[end..]);

    Ok(Question {
        text,
        source: QuestionSource::Repaired,
        ..question.clone()
    })
}

fn byte_offset(text: &str, char_offset: usize) -> usize {
    text.char_indices().nth(char_offset).map_or(text.len(), |(idx, _)| idx)
}

fn capitalize(word: &str) -> String {
    let mut chars = word.chars();
    match chars.next() {
        Some(first) => first.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplianceCount {
    pub compliant: usize,
    pub non_compliant: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BankValidation {
    pub reports: Vec<ValidationReport>,
    pub summary: BTreeMap<SubpointId, ComplianceCount>,
}

impl BankValidation {
    pub fn all_compliant(&self) -> bool {
        self.reports.iter().all(|r| r.compliant)
    }
}

/// Validates every (question, target) pair. Per-question failures turn into
/// non-compliant reports; the batch never aborts.
pub fn validate_bank(bank: &[Question], taxonomy: &Taxonomy) -> BankValidation {
    let mut out = BankValidation::default();
    for question in bank {
        for &target in &question.target_subpoints {
            let report = validate_question(question, target, taxonomy)
                .unwrap_or_else(|err| failed_report(question, target, taxonomy, &err));
            out.push(report);
        }
    }
    out
}

/// Validates a bank against a single subpoint instead of each question's own
/// targets.
pub fn validate_bank_against(bank: &[Question], subpoint: SubpointId, taxonomy: &Taxonomy) -> BankValidation {
    let mut out = BankValidation::default();
    for question in bank {
        let report = validate_question(question, subpoint, taxonomy)
            .unwrap_or_else(|err| failed_report(question, subpoint, taxonomy, &err));
        out.push(report);
    }
    out
}

impl BankValidation {
    fn push(&mut self, report: ValidationReport) {
        let count = self.summary.entry(report.target_subpoint).or_default();
        if report.compliant {
            count.compliant += 1;
        } else {
            count.non_compliant += 1;
        }
        self.reports.push(report);
    }
}

fn failed_report(question: &Question, target: SubpointId, taxonomy: &Taxonomy, err: &Error) -> ValidationReport {
    let spec = taxonomy.subpoint(target);
    ValidationReport {
        question_id: question.id.clone(),
        target_subpoint: target,
        compliant: false,
        primary_verb: None,
        all_hits: Vec::new(),
        matched_levels: BTreeSet::new(),
        table_domain: spec.ncaaa_domain,
        level_domain: None,
        suggestions: spec.verb_row.clone(),
        diagnostics: vec![format!("{}: {err}", err.code())],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(id: &str) -> SubpointId {
        SubpointId::parse(id).unwrap()
    }

    fn q(text: &str, targets: &[&str]) -> Question {
        Question::new("q", text, targets.iter().map(|t| sp(t)).collect())
    }

    #[test]
    fn worked_example_is_creating_skills() {
        let tax = Taxonomy::builtin();
        let question = q("Write a code shows the output of seven lines on the screen", &["2.1"]);
        let report = validate_question(&question, sp("2.1"), &tax).unwrap();
        assert!(report.compliant);
        assert_eq!(report.primary_verb.as_ref().unwrap().span.lemma, "write");
        assert_eq!(report.matched_levels, BTreeSet::from([BloomLevel::Creating]));
        assert_eq!(report.table_domain, NcaaaDomain::Skills);
        assert_eq!(report.level_domain, Some(NcaaaDomain::Skills));
        assert_eq!(report.suggestions, ["assemble", "construct", "create", "design", "develop", "formulate"]);
    }

    #[test]
    fn understanding_verb_in_values_outcome() {
        let tax = Taxonomy::builtin();
        let report = validate_question(&q("Explain the purpose of HTML tags", &["4.1"]), sp("4.1"), &tax).unwrap();
        assert!(report.compliant);
        assert_eq!(report.matched_levels, BTreeSet::from([BloomLevel::Understanding]));
        assert_eq!(report.table_domain, NcaaaDomain::Values);
        assert_eq!(report.level_domain, Some(NcaaaDomain::Knowledge));
        assert!(report.diagnostics.iter().any(|d| d.starts_with("domain-split")));
    }

    #[test]
    fn wrong_row_suggests_full_row() {
        let tax = Taxonomy::builtin();
        let report = validate_question(&q("Explain the purpose of HTML tags", &["2.1"]), sp("2.1"), &tax).unwrap();
        assert!(!report.compliant);
        assert_eq!(report.primary_verb.as_ref().unwrap().span.lemma, "explain");
        assert!(report.matched_levels.is_empty());
        assert_eq!(report.level_domain, None);
        assert_eq!(
            report.suggestions,
            ["assemble", "construct", "create", "design", "develop", "formulate", "write"]
        );
    }

    #[test]
    fn no_verb() {
        let tax = Taxonomy::builtin();
        let report = validate_question(&q("Seven lines appear on the screen", &["2.1"]), sp("2.1"), &tax).unwrap();
        assert!(!report.compliant);
        assert!(report.primary_verb.is_none());
        assert!(report.diagnostics.iter().any(|d| d.starts_with("no-verb-found")));
    }

    #[test]
    fn earliest_in_row_verb_governs() {
        let tax = Taxonomy::builtin();
        let report = validate_question(&q("Explain and then design a form", &["2.1"]), sp("2.1"), &tax).unwrap();
        assert!(report.compliant);
        assert_eq!(report.primary_verb.unwrap().span.lemma, "design");
        assert!(report.diagnostics.iter().any(|d| d.starts_with("leading-verb-skipped")));
    }

    #[test]
    fn any_level_subpoint_reports_verb_levels() {
        let tax = Taxonomy::builtin();
        let report = validate_question(&q("Question the team plan", &["5.2"]), sp("5.2"), &tax).unwrap();
        assert!(report.compliant);
        assert_eq!(report.matched_levels, BTreeSet::from([BloomLevel::Analyzing, BloomLevel::Evaluating]));
        assert_eq!(report.table_domain, NcaaaDomain::Values);
        assert_eq!(report.level_domain, Some(NcaaaDomain::Skills));
    }

    #[test]
    fn hypothetical_target_noted() {
        let tax = Taxonomy::builtin();
        let report = validate_question(&q("Design a form", &["2.1"]), sp("2.2"), &tax).unwrap();
        assert!(report.diagnostics.iter().any(|d| d.starts_with("hypothetical-target")));
    }

    #[test]
    fn empty_text_is_an_error() {
        let tax = Taxonomy::builtin();
        assert_eq!(validate_question(&q("  ", &["2.1"]), sp("2.1"), &tax), Err(Error::EmptyText));
    }

    #[test]
    fn repair_examples() {
        let tax = Taxonomy::builtin();
        let repaired = suggest_repair(&q("Explain the page layout process", &["2.1"]), sp("2.1"), &tax).unwrap();
        assert_eq!(repaired.text, "Assemble the page layout process");
        assert_eq!(repaired.source, QuestionSource::Repaired);
        assert!(validate_question(&repaired, sp("2.1"), &tax).unwrap().compliant);

        let ok = q("Write a code shows the output of seven lines on the screen", &["2.1"]);
        assert_eq!(suggest_repair(&ok, sp("2.1"), &tax).unwrap(), ok);

        assert_eq!(
            suggest_repair(&q("Seven lines appear on the screen", &["2.1"]), sp("2.1"), &tax),
            Err(Error::NoVerbFound)
        );
    }

    #[test]
    fn repair_keeps_lowercase_and_inner_position() {
        let tax = Taxonomy::builtin();
        let repaired = suggest_repair(&q("Please explaining the café menu", &["4.1"]), sp("2.1"), &tax).unwrap();
        assert_eq!(repaired.text, "Please assemble the café menu");
        let repaired = suggest_repair(&q("¿ Describe the café", &["2.1"]), sp("1.1"), &tax).unwrap();
        assert_eq!(repaired.text, "¿ Appraise the café");
    }

    #[test]
    fn bank_summary() {
        let tax = Taxonomy::builtin();
        assert_eq!(validate_bank(&[], &tax), BankValidation::default());

        let bank = vec![
            q("Write a code shows the output of seven lines on the screen", &["2.1"]),
            q("Explain the purpose of HTML tags", &["4.1"]),
            q("Design a login form", &["2.1", "2.2"]),
            q("", &["6.3"]),
        ];
        let result = validate_bank(&bank, &tax);
        assert_eq!(result.reports.len(), 5);
        assert_eq!(result.summary[&sp("2.1")], ComplianceCount { compliant: 2, non_compliant: 0 });
        assert_eq!(result.summary[&sp("2.2")], ComplianceCount { compliant: 0, non_compliant: 1 });
        assert_eq!(result.summary[&sp("4.1")], ComplianceCount { compliant: 1, non_compliant: 0 });
        assert_eq!(result.summary[&sp("6.3")], ComplianceCount { compliant: 0, non_compliant: 1 });
        assert!(result.reports[4].diagnostics[0].starts_with("EmptyText"));
    }
}
