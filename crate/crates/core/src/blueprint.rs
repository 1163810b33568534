//! Exam assembly against per-subpoint requirements and the coverage matrix
//! reviewers use as accreditation evidence.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generator::{offline_generate, Backend, GenerationRequest};
use crate::taxonomy::{BloomLevel, NcaaaDomain, SubpointId, Taxonomy};
use crate::validator::{validate_question, Question, ValidationReport};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CourseSpec {
    pub code: String,
    pub title: String,
    pub topics: Vec<String>,
    #[serde(rename = "outcomes")]
    pub covered_subpoints: Vec<SubpointId>,
}

impl CourseSpec {
    pub fn check(&self) -> Result<()> {
        if self.code.trim().is_empty() {
            return Err(Error::Schema("course code is empty".into()));
        }
        if self.covered_subpoints.is_empty() {
            return Err(Error::Schema("course covers no outcomes".into()));
        }
        let unique: BTreeSet<_> = self.covered_subpoints.iter().collect();
        if unique.len() != self.covered_subpoints.len() {
            return Err(Error::Schema("course lists an outcome twice".into()));
        }
        Ok(())
    }

    /// Topic used when generating filler questions.
    pub fn default_topic(&self) -> &str {
        self.topics.first().map(String::as_str).unwrap_or(&self.title)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlueprintRequirement {
    per_subpoint_counts: BTreeMap<SubpointId, usize>,
}

impl BlueprintRequirement {
    pub fn new(course: &CourseSpec, counts: BTreeMap<SubpointId, usize>) -> Result<Self> {
        for (id, &n) in &counts {
            if !course.covered_subpoints.contains(id) {
                return Err(Error::InvalidRequest(format!("{id} is not covered by {}", course.code)));
            }
            if n == 0 {
                return Err(Error::InvalidRequest(format!("required count for {id} must be at least 1")));
            }
        }
        Ok(BlueprintRequirement { per_subpoint_counts: counts })
    }

    /// The same count for every subpoint the course covers.
    pub fn uniform(course: &CourseSpec, per_subpoint: usize) -> Result<Self> {
        let counts = course.covered_subpoints.iter().map(|&id| (id, per_subpoint)).collect();
        Self::new(course, counts)
    }

    pub fn counts(&self) -> &BTreeMap<SubpointId, usize> {
        &self.per_subpoint_counts
    }

    pub fn total(&self) -> usize {
        self.per_subpoint_counts.values().sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubpointCoverage {
    pub count: usize,
    pub bloom_levels: BTreeSet<BloomLevel>,
    pub table_domain: NcaaaDomain,
    pub level_domains: BTreeSet<NcaaaDomain>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverageMatrix {
    pub by_subpoint: BTreeMap<SubpointId, usize>,
    pub by_bloom_level: BTreeMap<BloomLevel, usize>,
    pub by_table_domain: BTreeMap<NcaaaDomain, usize>,
    pub by_level_domain: BTreeMap<NcaaaDomain, usize>,
    pub uncovered: Vec<SubpointId>,
    pub total: usize,
    /// Per-subpoint detail for every course subpoint and every counted one.
    pub detail: BTreeMap<SubpointId, SubpointCoverage>,
}

/// Counts compliant (question, subpoint) pairs. A question compliant for k
/// subpoints contributes k.
pub fn coverage_matrix(reports: &[ValidationReport], course: &CourseSpec) -> CoverageMatrix {
    let mut matrix = CoverageMatrix::default();
    for &id in &course.covered_subpoints {
        matrix.detail.insert(id, empty_coverage(id));
    }
    for report in reports.iter().filter(|r| r.compliant) {
        let id = report.target_subpoint;
        *matrix.by_subpoint.entry(id).or_default() += 1;
        *matrix.by_table_domain.entry(report.table_domain).or_default() += 1;
        if let Some(domain) = report.level_domain {
            *matrix.by_level_domain.entry(domain).or_default() += 1;
        }
        for &level in &report.matched_levels {
            *matrix.by_bloom_level.entry(level).or_default() += 1;
        }
        let detail = matrix.detail.entry(id).or_insert_with(|| empty_coverage(id));
        detail.count += 1;
        detail.bloom_levels.extend(report.matched_levels.iter().copied());
        detail.level_domains.extend(report.level_domain);
        matrix.total += 1;
    }
    matrix.uncovered = course
        .covered_subpoints
        .iter()
        .copied()
        .filter(|id| !matrix.by_subpoint.contains_key(id))
        .collect();
    matrix
}

fn empty_coverage(id: SubpointId) -> SubpointCoverage {
    SubpointCoverage {
        count: 0,
        bloom_levels: BTreeSet::new(),
        table_domain: id.table_domain(),
        level_domains: BTreeSet::new(),
    }
}

impl CoverageMatrix {
    /// CSV export: `subpoint,count,bloom_levels,table_domain,level_domain`.
    /// Multi-valued cells are `;`-separated.
    pub fn to_csv(&self) -> Result<String> {
        let mut writer = csv::Writer::from_writer(Vec::new());
        let csv_err = |e: csv::Error| Error::Io(e.to_string());
        writer
            .write_record(["subpoint", "count", "bloom_levels", "table_domain", "level_domain"])
            .map_err(csv_err)?;
        for (id, row) in &self.detail {
            let levels: Vec<&str> = row.bloom_levels.iter().map(|l| l.name()).collect();
            let domains: Vec<&str> = row.level_domains.iter().map(|d| d.name()).collect();
            writer
                .write_record([
                    id.to_string(),
                    row.count.to_string(),
                    levels.join(";"),
                    row.table_domain.to_string(),
                    domains.join(";"),
                ])
                .map_err(csv_err)?;
        }
        let bytes = writer.into_inner().map_err(|e| Error::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
    }
}

/// Supplies questions for slots the bank could not fill.
pub trait Filler {
    fn fill(&self, subpoint: SubpointId, missing: usize) -> Vec<Question>;
}

impl<F> Filler for F
where
    F: Fn(SubpointId, usize) -> Vec<Question>,
{
    fn fill(&self, subpoint: SubpointId, missing: usize) -> Vec<Question> {
        self(subpoint, missing)
    }
}

/// Fills slots from the offline generator.
pub struct OfflineFiller<'a> {
    pub taxonomy: &'a Taxonomy,
    pub course: &'a CourseSpec,
    pub seed: u64,
}

impl Filler for OfflineFiller<'_> {
    fn fill(&self, subpoint: SubpointId, missing: usize) -> Vec<Question> {
        let req = GenerationRequest::new(&self.course.code, self.course.default_topic(), subpoint, missing);
        offline_generate(&req, self.seed, self.taxonomy).unwrap_or_default()
    }
}

/// Fills slots through a generation backend (offline or a live client).
pub struct BackendFiller<'a> {
    pub taxonomy: &'a Taxonomy,
    pub course: &'a CourseSpec,
    pub backend: &'a Backend,
}

impl Filler for BackendFiller<'_> {
    fn fill(&self, subpoint: SubpointId, missing: usize) -> Vec<Question> {
        let req = GenerationRequest::new(&self.course.code, self.course.default_topic(), subpoint, missing);
        self.backend
            .generate(&req, self.taxonomy)
            .map(|result| result.questions)
            .unwrap_or_default()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExamSlot {
    pub subpoint: SubpointId,
    pub question: Question,
    pub report: ValidationReport,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Exam {
    pub slots: Vec<ExamSlot>,
    pub matrix: CoverageMatrix,
    pub deficits: BTreeMap<SubpointId, usize>,
}

impl Exam {
    pub fn questions(&self) -> impl Iterator<Item = &Question> {
        self.slots.iter().map(|s| &s.question)
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }
}

/// Fills each required slot from compliant bank questions (bank order), then
/// from `filler`. Every question fills at most one slot; subpoints are served
/// in catalog order.
pub fn assemble(
    course: &CourseSpec,
    requirement: &BlueprintRequirement,
    bank: &[Question],
    filler: Option<&dyn Filler>,
    taxonomy: &Taxonomy,
) -> Exam {
    let mut used = vec![false; bank.len()];
    let mut slots = Vec::new();
    let mut deficits = BTreeMap::new();

    for (&subpoint, &required) in requirement.counts() {
        let mut filled = 0;
        for (idx, question) in bank.iter().enumerate() {
            if filled == required {
                break;
            }
            if used[idx] || !question.target_subpoints.contains(&subpoint) {
                continue;
            }
            if let Some(report) = compliant_report(question, subpoint, taxonomy) {
                used[idx] = true;
                slots.push(ExamSlot { subpoint, question: question.clone(), report });
                filled += 1;
            }
        }

        if filled < required {
            if let Some(filler) = filler {
                for question in filler.fill(subpoint, required - filled) {
                    if filled == required {
                        break;
                    }
                    if let Some(report) = compliant_report(&question, subpoint, taxonomy) {
                        slots.push(ExamSlot { subpoint, question, report });
                        filled += 1;
                    }
                }
            }
        }

        if filled < required {
            deficits.insert(subpoint, required - filled);
        }
    }

    let reports: Vec<ValidationReport> = slots.iter().map(|s| s.report.clone()).collect();
    Exam {
        matrix: coverage_matrix(&reports, course),
        slots,
        deficits,
    }
}

fn compliant_report(question: &Question, subpoint: SubpointId, taxonomy: &Taxonomy) -> Option<ValidationReport> {
    validate_question(question, subpoint, taxonomy).ok().filter(|r| r.compliant)
}
