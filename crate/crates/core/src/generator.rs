//! Prompt construction, output parsing and the validate-and-repair generation
//! loop, plus a model-free offline generator.

use std::fmt::Write as _;
use std::sync::Arc;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::client::{ClientParams, CompletionClient};
use crate::error::{Error, Result};
use crate::taxonomy::{SubpointId, Taxonomy};
use crate::validator::{suggest_repair, validate_question, Question, QuestionSource, ValidationReport};

pub const SHORTFALL: &str = "ShortfallFlagged";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationRequest {
    pub course_code: String,
    pub topic: String,
    pub subpoint: SubpointId,
    pub count: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub style_notes: Option<String>,
    #[serde(default)]
    pub client_params: ClientParams,
    /// Timestamp stamped on every question this request produces.
    #[serde(default = "Utc::now")]
    pub issued_at: DateTime<Utc>,
}

impl GenerationRequest {
    pub fn new(course_code: impl Into<String>, topic: impl Into<String>, subpoint: SubpointId, count: usize) -> Self {
        GenerationRequest {
            course_code: course_code.into(),
            topic: topic.into(),
            subpoint,
            count,
            style_notes: None,
            client_params: ClientParams::default(),
            issued_at: Utc::now(),
        }
    }

    pub fn check(&self) -> Result<()> {
        if self.count == 0 {
            return Err(Error::InvalidRequest("count must be at least 1".into()));
        }
        self.client_params.check()
    }

    fn topic_or_default(&self) -> &str {
        let topic = self.topic.trim();
        if topic.is_empty() {
            "the course material"
        } else {
            topic
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RejectedCandidate {
    pub raw: String,
    pub report: ValidationReport,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenerationResult {
    pub questions: Vec<Question>,
    pub rejected: Vec<RejectedCandidate>,
    pub attempts_used: u32,
    pub prompt_transcript: Vec<String>,
    pub shortfall: usize,
    pub diagnostics: Vec<String>,
}

pub fn build_prompt(req: &GenerationRequest, taxonomy: &Taxonomy) -> String {
    let spec = taxonomy.subpoint(req.subpoint);
    let level = if spec.any_level {
        "any level suited to the topic".to_string()
    } else {
        spec.bloom_levels.iter().map(|l| l.name()).collect::<Vec<_>>().join(", ")
    };
    let noun = if req.count == 1 { "question" } else { "questions" };

    let mut prompt = String::new();
    let _ = writeln!(prompt, "You are writing exam questions for the course {}.", req.course_code);
    let _ = writeln!(prompt, "Topic: {}", req.topic_or_default());
    let _ = writeln!(prompt, "Target ABET outcome {}: {}.", spec.id, spec.description);
    let _ = writeln!(prompt, "NCAAA domain: {}. Bloom level: {}.", spec.ncaaa_domain, level);
    let _ = writeln!(prompt, "Approved question verbs: {}.", spec.verb_row.join(", "));
    prompt.push('\n');
    let _ = writeln!(prompt, "Write exactly {} {noun} about the topic.", req.count);
    prompt.push_str("Rules:\n");
    prompt.push_str("- Each question must begin with one approved verb from the list above.\n");
    prompt.push_str("- Emit one question per line, prefixed with \"Q:\".\n");
    prompt.push_str("- Do not add any other text.\n");
    if let Some(notes) = req.style_notes.as_deref().map(str::trim).filter(|n| !n.is_empty()) {
        let _ = writeln!(prompt, "- Style: {notes}");
    }
    prompt
}

/// Pulls `Q:` lines out of raw model output. Never fails; garbage yields an
/// empty list.
pub fn parse_generation_output(raw: &str) -> Vec<String> {
    raw.lines()
        .filter_map(|line| {
            let line = strip_list_marker(line.trim());
            let rest = line.strip_prefix("Q:").or_else(|| line.strip_prefix("q:"))?;
            let text = rest.trim();
            (!text.is_empty()).then(|| text.to_string())
        })
        .collect()
}

fn strip_list_marker(line: &str) -> &str {
    if let Some(rest) = line.strip_prefix(['-', '*', '•']) {
        return rest.trim_start();
    }
    let digits = line.len() - line.trim_start_matches(|c: char| c.is_ascii_digit()).len();
    if digits > 0 {
        if let Some(rest) = line[digits..].strip_prefix(['.', ')']) {
            return rest.trim_start();
        }
    }
    line
}

/// Runs the generate, validate, repair, re-prompt loop against `client`.
pub fn generate(req: &GenerationRequest, client: &dyn CompletionClient, taxonomy: &Taxonomy) -> Result<GenerationResult> {
    req.check()?;
    let spec = taxonomy.subpoint(req.subpoint);
    let max_attempts = 1 + req.client_params.max_retries;

    let mut result = GenerationResult {
        questions: Vec::new(),
        rejected: Vec::new(),
        attempts_used: 0,
        prompt_transcript: Vec::new(),
        shortfall: 0,
        diagnostics: Vec::new(),
    };
    let mut violations: Vec<String> = Vec::new();
    let mut failed_attempts = 0;
    let mut last_failure = None;

    while result.attempts_used < max_attempts && result.questions.len() < req.count {
        let remaining = req.count - result.questions.len();
        let mut prompt = build_prompt(&GenerationRequest { count: remaining, ..req.clone() }, taxonomy);
        if result.attempts_used > 0 {
            prompt.push_str(&corrective_suffix(&violations, &spec.verb_row));
        }
        violations.clear();
        result.prompt_transcript.push(prompt.clone());
        result.attempts_used += 1;
        let attempt = result.attempts_used;

        let raw = match client.complete(&prompt, &req.client_params) {
            Ok(raw) => raw,
            Err(err) => {
                failed_attempts += 1;
                result.diagnostics.push(format!("client-failure (attempt {attempt}): {err}"));
                violations.push("the previous request failed; answer in the required format".into());
                last_failure = Some(err);
                continue;
            }
        };

        let candidates = parse_generation_output(&raw);
        if candidates.is_empty() {
            result.diagnostics.push(format!("no-questions-parsed (attempt {attempt})"));
            violations.push("no lines starting with \"Q:\" were found".into());
        }

        for text in candidates {
            if result.questions.len() == req.count {
                break;
            }
            let mut question = Question {
                id: format!("{}-{}-g{}", req.course_code, req.subpoint, result.questions.len() + 1),
                text: text.clone(),
                target_subpoints: vec![req.subpoint],
                source: QuestionSource::Generated,
                topic: Some(req.topic.clone()),
                created_at: req.issued_at,
            };
            let report = validate_question(&question, req.subpoint, taxonomy)?;
            if !report.compliant {
                match suggest_repair(&question, req.subpoint, taxonomy) {
                    Ok(repaired) => {
                        result.diagnostics.push(format!("repaired: \"{}\" -> \"{}\"", text, repaired.text));
                        question = repaired;
                    }
                    Err(_) => {
                        violations.push(format!("\"{text}\" does not begin with an approved verb"));
                        result.rejected.push(RejectedCandidate { raw: text, report });
                        continue;
                    }
                }
            }
            if result.questions.iter().any(|q| q.text.eq_ignore_ascii_case(&question.text)) {
                result.diagnostics.push(format!("duplicate-skipped: \"{}\"", question.text));
                violations.push(format!("\"{}\" repeats an earlier question", question.text));
                continue;
            }
            result.questions.push(question);
        }
    }

    if result.questions.is_empty() && failed_attempts == result.attempts_used {
        if let Some(err) = last_failure {
            return Err(match err {
                Error::ClientFailure(msg) => Error::ClientFailure(msg),
                other => Error::ClientFailure(other.to_string()),
            });
        }
    }

    result.shortfall = req.count - result.questions.len();
    if result.shortfall > 0 {
        result.diagnostics.push(format!(
            "{SHORTFALL}: obtained {} of {} compliant questions after {} attempts",
            result.questions.len(),
            req.count,
            result.attempts_used
        ));
    }
    Ok(result)
}

fn corrective_suffix(violations: &[String], row: &[String]) -> String {
    let mut out = String::from("\nThe previous answer had problems:\n");
    for violation in violations {
        let _ = writeln!(out, "- {violation}");
    }
    let _ = writeln!(out, "Every question must begin with one of: {}.", row.join(", "));
    out
}

const OFFLINE_CLAUSES: [&str; 4] = [
    "a solution that addresses {topic}.",
    "an example related to {topic}.",
    "the main ideas behind {topic}.",
    "a short case study on {topic}.",
];

/// Model-free generator: cycles through the subpoint's verb row starting at
/// `seed mod row length`. Output is deterministic in `(req, seed)` and always
/// compliant.
pub fn offline_generate(req: &GenerationRequest, seed: u64, taxonomy: &Taxonomy) -> Result<Vec<Question>> {
    req.check()?;
    let row = &taxonomy.subpoint(req.subpoint).verb_row;
    let start = (seed % row.len() as u64) as usize;
    let topic = req.topic_or_default();

    let questions = (0..req.count)
        .map(|i| {
            let pos = start + i;
            let verb = capitalize(&row[pos % row.len()]);
            let clause = OFFLINE_CLAUSES[(pos / row.len()) % OFFLINE_CLAUSES.len()].replace("{topic}", topic);
            Question {
                id: format!("{}-{}-s{}-{}", req.course_code, req.subpoint, seed, i + 1),
                text: format!("{verb} {clause}"),
                target_subpoints: vec![req.subpoint],
                source: QuestionSource::Generated,
                topic: Some(req.topic.clone()),
                created_at: req.issued_at,
            }
        })
        .collect();
    Ok(questions)
}

/// Offline generation wrapped in a [`GenerationResult`]. No client calls are
/// made, so `attempts_used` is zero.
pub fn offline_result(req: &GenerationRequest, seed: u64, taxonomy: &Taxonomy) -> Result<GenerationResult> {
    let questions = offline_generate(req, seed, taxonomy)?;
    Ok(GenerationResult {
        questions,
        rejected: Vec::new(),
        attempts_used: 0,
        prompt_transcript: vec![build_prompt(req, taxonomy)],
        shortfall: 0,
        diagnostics: vec![format!("offline generator, seed {seed}")],
    })
}

fn capitalize(word: &str) -> String {
    let mut chars = word.chars();
    chars.next().map(|c| c.to_uppercase().chain(chars).collect()).unwrap_or_default()
}

/// Where generated questions come from.
#[derive(Clone)]
pub enum Backend {
    Offline { seed: u64 },
    Client(Arc<dyn CompletionClient>),
}

impl std::fmt::Debug for Backend {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Backend::Offline { seed } => f.debug_struct("Offline").field("seed", seed).finish(),
            Backend::Client(_) => f.write_str("Client(..)"),
        }
    }
}

impl Backend {
    pub fn generate(&self, req: &GenerationRequest, taxonomy: &Taxonomy) -> Result<GenerationResult> {
        match self {
            Backend::Offline { seed } => offline_result(req, *seed, taxonomy),
            Backend::Client(client) => generate(req, client.as_ref(), taxonomy),
        }
    }
}
