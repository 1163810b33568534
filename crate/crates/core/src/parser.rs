//! Dictionary-based action-verb extraction.
//!
//! Tokens are maximal runs of alphanumeric characters. Inflected forms are
//! reduced to a registry lemma only when the reduced form is registered, so
//! words like "during" are never stemmed into non-words.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::taxonomy::{BloomLevel, VerbRegistry};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenSpan {
    pub surface: String,
    pub lemma: String,
    pub index: usize,
    /// Offset of the first character of `surface`, counted in chars.
    pub char_offset: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerbHit {
    pub span: TokenSpan,
    pub levels: BTreeSet<BloomLevel>,
    pub affective: bool,
}

pub fn tokenize(text: &str) -> Result<Vec<TokenSpan>> {
    if text.trim().is_empty() {
        return Err(Error::EmptyText);
    }
    let mut tokens = Vec::new();
    let mut current: Option<(usize, String)> = None;
    for (offset, ch) in text.chars().enumerate() {
        if ch.is_alphanumeric() {
            current.get_or_insert_with(|| (offset, String::new())).1.push(ch);
        } else if let Some((start, surface)) = current.take() {
            push_token(&mut tokens, start, surface);
        }
    }
    if let Some((start, surface)) = current {
        push_token(&mut tokens, start, surface);
    }
    Ok(tokens)
}

fn push_token(tokens: &mut Vec<TokenSpan>, char_offset: usize, surface: String) {
    tokens.push(TokenSpan {
        lemma: surface.to_lowercase(),
        surface,
        index: tokens.len(),
        char_offset,
    });
}

/// Reduces a surface form to a registered lemma, or to its plain lowercase
/// form when no rule produces a registered lemma.
pub fn normalize_token(surface: &str, registry: &VerbRegistry) -> String {
    let lower = surface.to_lowercase();
    if registry.is_lemma(&lower) {
        return lower;
    }
    if let Some(lemma) = registry.lemma_for_form(&lower) {
        return lemma.to_string();
    }
    inflection_candidates(&lower)
        .into_iter()
        .find(|candidate| registry.is_lemma(candidate))
        .unwrap_or(lower)
}

/// Candidate bases for `word`, in rule order.
fn inflection_candidates(word: &str) -> Vec<String> {
    let mut out = Vec::new();
    if let Some(stem) = strip(word, "ies") {
        out.push(format!("{stem}y"));
    }
    if let Some(stem) = strip(word, "es") {
        out.push(stem.to_string());
    }
    if let Some(stem) = strip(word, "s") {
        out.push(stem.to_string());
    }
    if let Some(stem) = strip(word, "ing") {
        push_participle_bases(&mut out, stem);
    }
    if let Some(stem) = strip(word, "ied") {
        out.push(format!("{stem}y"));
    }
    if let Some(stem) = strip(word, "ed") {
        push_participle_bases(&mut out, stem);
    }
    out
}

fn push_participle_bases(out: &mut Vec<String>, stem: &str) {
    out.push(stem.to_string());
    out.push(format!("{stem}e"));
    if let Some(single) = undouble(stem) {
        out.push(single.to_string());
    }
}

fn strip<'a>(word: &'a str, suffix: &str) -> Option<&'a str> {
    word.strip_suffix(suffix).filter(|stem| stem.chars().count() >= 2)
}

/// `plann` -> `plan`; `None` when the stem does not end in a doubled consonant.
fn undouble(stem: &str) -> Option<&str> {
    let mut rev = stem.char_indices().rev();
    let (last_idx, last) = rev.next()?;
    let (_, prev) = rev.next()?;
    (last == prev && !"aeiou".contains(last) && last.is_alphabetic()).then(|| &stem[..last_idx])
}

/// Every token whose normalized lemma is a registered question verb, in
/// token order.
pub fn extract_action_verbs(text: &str, registry: &VerbRegistry) -> Result<Vec<VerbHit>> {
    let hits = tokenize(text)?
        .into_iter()
        .filter_map(|mut span| {
            let lemma = normalize_token(&span.surface, registry);
            let entry = registry.get(&lemma)?;
            span.lemma = lemma;
            Some(VerbHit {
                levels: entry.levels.clone(),
                affective: entry.affective,
                span,
            })
        })
        .collect();
    Ok(hits)
}
