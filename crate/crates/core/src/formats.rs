//! On-disk formats: `bank.v1` (JSON lines), `course.v1` and `report.v1`.

use std::collections::HashSet;
use std::io::Write;
use std::path::Path;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::blueprint::{coverage_matrix, CourseSpec, CoverageMatrix};
use crate::error::{Error, Result};
use crate::taxonomy::SubpointId;
use crate::validator::{Question, QuestionSource, ValidationReport};

pub const BANK_SCHEMA: &str = "bank.v1";
pub const COURSE_SCHEMA: &str = "course.v1";
pub const REPORT_SCHEMA: &str = "report.v1";

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCourse {
    #[serde(default)]
    schema: Option<String>,
    code: String,
    #[serde(default)]
    title: String,
    #[serde(default)]
    topics: Vec<String>,
    outcomes: Vec<String>,
}

#[derive(Serialize)]
struct CourseDocument<'a> {
    schema: &'static str,
    #[serde(flatten)]
    course: &'a CourseSpec,
}

fn check_schema(found: Option<&str>, expected: &str) -> Result<()> {
    match found {
        Some(s) if s != expected => Err(Error::Schema(format!("expected schema `{expected}`, found `{s}`"))),
        _ => Ok(()),
    }
}

fn parse_subpoints(raw: &[String]) -> Result<Vec<SubpointId>> {
    raw.iter().map(|s| SubpointId::parse(s)).collect()
}

pub fn parse_course(text: &str) -> Result<CourseSpec> {
    let raw: RawCourse = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
    check_schema(raw.schema.as_deref(), COURSE_SCHEMA)?;
    let course = CourseSpec {
        code: raw.code,
        title: raw.title,
        topics: raw.topics,
        covered_subpoints: parse_subpoints(&raw.outcomes)?,
    };
    course.check()?;
    Ok(course)
}

/// Canonical `course.v1` form: pretty JSON with the schema tag first.
pub fn serialize_course(course: &CourseSpec) -> String {
    let doc = CourseDocument { schema: COURSE_SCHEMA, course };
    let mut out = serde_json::to_string_pretty(&doc).expect("course serializes");
    out.push('\n');
    out
}

pub fn read_course(path: &Path) -> Result<CourseSpec> {
    parse_course(&crate::error::read_file(path)?)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawQuestion {
    id: String,
    text: String,
    targets: Vec<String>,
    source: QuestionSource,
    #[serde(default)]
    topic: Option<String>,
    created_at: DateTime<Utc>,
}

/// Parses one `bank.v1` record.
pub fn parse_question(line: &str) -> Result<Question> {
    let raw: RawQuestion = serde_json::from_str(line).map_err(|e| Error::Schema(e.to_string()))?;
    if raw.id.trim().is_empty() {
        return Err(Error::Schema("question id is empty".into()));
    }
    if raw.text.trim().is_empty() {
        return Err(Error::Schema(format!("question `{}` has empty text", raw.id)));
    }
    if raw.targets.is_empty() {
        return Err(Error::Schema(format!("question `{}` has no targets", raw.id)));
    }
    Ok(Question {
        target_subpoints: parse_subpoints(&raw.targets)?,
        id: raw.id,
        text: raw.text,
        source: raw.source,
        topic: raw.topic,
        created_at: raw.created_at,
    })
}

pub fn parse_bank(text: &str) -> Result<Vec<Question>> {
    let mut seen = HashSet::new();
    let mut bank = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let question = parse_question(line).map_err(|err| match err {
            Error::Schema(msg) => Error::Schema(format!("line {}: {msg}", lineno + 1)),
            other => other,
        })?;
        if !seen.insert(question.id.clone()) {
            return Err(Error::Schema(format!("line {}: duplicate id `{}`", lineno + 1, question.id)));
        }
        bank.push(question);
    }
    Ok(bank)
}

pub fn serialize_question(question: &Question) -> String {
    serde_json::to_string(question).expect("question serializes")
}

pub fn serialize_bank(bank: &[Question]) -> String {
    bank.iter().map(|q| serialize_question(q) + "\n").collect()
}

pub fn read_bank(path: &Path) -> Result<Vec<Question>> {
    parse_bank(&crate::error::read_file(path)?)
}

pub fn append_to_bank(path: &Path, questions: &[Question]) -> Result<()> {
    let mut file = std::fs::OpenOptions::new().create(true).append(true).open(path)?;
    file.write_all(serialize_bank(questions).as_bytes())?;
    Ok(())
}

/// A `report.v1` document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportFile {
    pub schema: String,
    pub course: CourseSpec,
    pub reports: Vec<ValidationReport>,
    pub matrix: CoverageMatrix,
    pub generated_at: DateTime<Utc>,
}

impl ReportFile {
    pub fn new(course: CourseSpec, reports: Vec<ValidationReport>, generated_at: DateTime<Utc>) -> Self {
        let matrix = coverage_matrix(&reports, &course);
        ReportFile {
            schema: REPORT_SCHEMA.to_string(),
            course,
            reports,
            matrix,
            generated_at,
        }
    }

    /// Whether the stored matrix equals the one recomputed from the reports.
    pub fn matrix_consistent(&self) -> bool {
        coverage_matrix(&self.reports, &self.course) == self.matrix
    }
}

pub fn parse_report(text: &str) -> Result<ReportFile> {
    let report: ReportFile = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
    check_schema(Some(&report.schema), REPORT_SCHEMA)?;
    report.course.check()?;
    if !report.matrix_consistent() {
        return Err(Error::Schema("matrix does not match the reports".into()));
    }
    Ok(report)
}

pub fn serialize_report(report: &ReportFile) -> String {
    let mut out = serde_json::to_string_pretty(report).expect("report serializes");
    out.push('\n');
    out
}
