//! Test-only oracles that do not share code paths with the library.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

/// The five distinct question-verb rows as printed, with their level label.
pub const VERB_ROWS: [(&str, &str); 5] = [
    (
        "Analyzing",
        "Appraise, assess, evaluate, compare, contrast, criticize, differentiate, discriminate, distinguish, examine, experiment, question, test",
    ),
    (
        "Applying",
        "Choose, demonstrate, employ, illustrate, interpret, operate, schedule, sketch, draw, solve, use, write.",
    ),
    ("Creating", "Assemble, construct, create, design, develop, formulate, write ."),
    (
        "Evaluating",
        "[Affective Learning] Appreciate, accept, attempt, challenge, defend, dispute, join, judge, justify, question, share, support .",
    ),
    (
        "Understanding",
        "Classify, describe, discuss, explain, identify, locate, recognize, report, select, translate, paraphrase",
    ),
];

/// Subpoint -> index into `VERB_ROWS`, one entry per printed subpoint row.
pub const SUBPOINT_ROWS: [(&str, usize); 17] = [
    ("1.1", 0),
    ("1.2", 1),
    ("2.1", 2),
    ("2.2", 1),
    ("2.3", 3),
    ("3.1", 1),
    ("3.2", 1),
    ("3.3", 1),
    ("4.1", 4),
    ("4.2", 4),
    ("4.3", 4),
    ("5.1", 1),
    ("5.2", 3),
    ("5.3", 3),
    ("6.1", 0),
    ("6.2", 1),
    ("6.3", 4),
];

/// Lemmas of a printed row, lowercased, label and punctuation removed.
pub fn fixture_row(printed: &str) -> Vec<String> {
    printed
        .replace("[Affective Learning]", "")
        .split(',')
        .map(|w| w.trim().trim_end_matches('.').trim().to_lowercase())
        .filter(|w| !w.is_empty())
        .collect()
}

/// Brute-force distinct lemma count across every row.
pub fn distinct_lemma_count() -> usize {
    let mut seen: Vec<String> = Vec::new();
    for (_, row) in VERB_ROWS {
        for lemma in fixture_row(row) {
            if !seen.iter().any(|s| s == &lemma) {
                seen.push(lemma);
            }
        }
    }
    seen.len()
}

/// Lemma -> level names, built by scanning every fixture row.
pub fn fixture_levels() -> BTreeMap<String, BTreeSet<String>> {
    let mut out: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
    for (label, row) in VERB_ROWS {
        for lemma in fixture_row(row) {
            out.entry(lemma).or_default().insert(label.to_string());
        }
    }
    out
}

fn is_vowel(c: char) -> bool {
    "aeiou".contains(c)
}

/// Regular inflections of `lemma`, generated forward from English spelling
/// rules.
pub fn inflections(lemma: &str) -> Vec<String> {
    let chars: Vec<char> = lemma.chars().collect();
    let last = *chars.last().unwrap();
    let before_last = chars.get(chars.len().wrapping_sub(2)).copied();
    let mut forms = Vec::new();

    // third person
    if last == 'y' && before_last.is_some_and(|c| !is_vowel(c)) {
        forms.push(format!("{}ies", &lemma[..lemma.len() - 1]));
    } else if lemma.ends_with('s') || lemma.ends_with('x') || lemma.ends_with("ch") || lemma.ends_with("sh") {
        forms.push(format!("{lemma}es"));
    } else {
        forms.push(format!("{lemma}s"));
    }

    // progressive
    if last == 'e' && before_last != Some('e') {
        forms.push(format!("{}ing", &lemma[..lemma.len() - 1]));
    } else {
        forms.push(format!("{lemma}ing"));
    }

    // past
    if last == 'e' {
        forms.push(format!("{lemma}d"));
    } else if last == 'y' && before_last.is_some_and(|c| !is_vowel(c)) {
        forms.push(format!("{}ied", &lemma[..lemma.len() - 1]));
    } else {
        forms.push(format!("{lemma}ed"));
    }

    // consonant doubling, generated for every consonant-final lemma
    if !is_vowel(last) && !"wxy".contains(last) {
        forms.push(format!("{lemma}{last}ing"));
        forms.push(format!("{lemma}{last}ed"));
    }
    forms
}

/// Surface form -> lemma for every lemma, inflection and irregular form.
pub fn form_table<'a>(lemmas: impl IntoIterator<Item = (&'a str, &'a [String])>) -> BTreeMap<String, String> {
    let mut table = BTreeMap::new();
    let mut lemma_list = Vec::new();
    for (lemma, irregular) in lemmas {
        for form in inflections(lemma) {
            table.insert(form, lemma.to_string());
        }
        for form in irregular {
            table.insert(form.clone(), lemma.to_string());
        }
        lemma_list.push(lemma.to_string());
    }
    for lemma in lemma_list {
        table.insert(lemma.clone(), lemma);
    }
    table
}

/// Token-by-token scan: (token index, lemma) for every token found in
/// `table`. Tokens are maximal alphanumeric runs.
pub fn brute_force_hits(text: &str, table: &BTreeMap<String, String>) -> Vec<(usize, String)> {
    let mut tokens = Vec::new();
    let mut current = String::new();
    for ch in text.chars().chain(std::iter::once(' ')) {
        if ch.is_alphanumeric() {
            current.push(ch);
        } else if !current.is_empty() {
            tokens.push(std::mem::take(&mut current));
        }
    }
    tokens
        .iter()
        .enumerate()
        .filter_map(|(idx, token)| {
            let lower = token.to_lowercase();
            table.iter().find(|(form, _)| **form == lower).map(|(_, lemma)| (idx, lemma.clone()))
        })
        .collect()
}

/// Filler vocabulary that contains no question verb in any form.
pub const FILLER: &[&str] = &[
    "the", "a", "an", "code", "screen", "lines", "output", "of", "seven", "on", "table", "during", "page", "process",
    "HTML", "tags", "form", "server", "network", "is", "and", "with", "for", "security", "policy", "team", "meeting",
    "deadline", "things", "class", "press", "data", "users", "appear", "shows", "browser", "layout", "methods",
];
