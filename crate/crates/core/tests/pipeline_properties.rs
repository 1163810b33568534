mod support;

use std::collections::BTreeMap;

use chrono::DateTime;
use proptest::prelude::*;
use qgen_core::blueprint::OfflineFiller;
use qgen_core::{
    assemble, coverage_matrix, generate, offline_generate, suggest_repair, validate_question, BlueprintRequirement,
    CourseSpec, Error, GenerationRequest, Question, ScriptedClient, SubpointId, Taxonomy,
};
use support::oracle::FILLER;

fn subpoints() -> Vec<SubpointId> {
    SubpointId::all().collect()
}

fn question(text: &str, targets: Vec<SubpointId>) -> Question {
    let mut q = Question::new("q", text, targets);
    q.created_at = DateTime::from_timestamp(1_700_000_000, 0).unwrap();
    q
}

fn all_lemmas(tax: &Taxonomy) -> Vec<String> {
    tax.registry().entries().map(|e| e.lemma.clone()).collect()
}

#[test]
fn completeness_every_row_verb_validates() {
    let tax = Taxonomy::builtin();
    for spec in tax.subpoints() {
        for verb in &spec.verb_row {
            let q = question(&format!("{verb} X."), vec![spec.id]);
            let report = validate_question(&q, spec.id, &tax).unwrap();
            assert!(report.compliant, "{} {verb}", spec.id);
        }
    }
}

fn text_strategy() -> impl Strategy<Value = Vec<(bool, prop::sample::Index)>> {
    prop::collection::vec((any::<bool>(), any::<prop::sample::Index>()), 1..10)
}

fn render(tax: &Taxonomy, words: &[(bool, prop::sample::Index)]) -> String {
    let lemmas = all_lemmas(tax);
    words
        .iter()
        .map(|(verb, idx)| if *verb { idx.get(&lemmas).clone() } else { idx.get(FILLER).to_string() })
        .collect::<Vec<_>>()
        .join(" ")
}

proptest! {
    #[test]
    fn soundness_and_suggestions(words in text_strategy(), target in prop::sample::select(subpoints())) {
        let tax = Taxonomy::builtin();
        let text = render(&tax, &words);
        let report = validate_question(&question(&text, vec![target]), target, &tax).unwrap();
        let row = &tax.subpoint(target).verb_row;
        if report.compliant {
            let primary = report.primary_verb.as_ref().unwrap();
            prop_assert!(row.contains(&primary.span.lemma));
        }
        for s in &report.suggestions {
            prop_assert!(report.all_hits.iter().all(|h| &h.span.lemma != s));
            prop_assert!(row.contains(s));
        }
        prop_assert_eq!(report.table_domain, tax.subpoint(target).ncaaa_domain);
        prop_assert_eq!(report.level_domain, qgen_core::validator::level_domain(&tax, &report.matched_levels));
    }

    #[test]
    fn repair_converges_in_one_step(words in text_strategy(), target in prop::sample::select(subpoints())) {
        let tax = Taxonomy::builtin();
        let text = render(&tax, &words);
        let q = question(&text, vec![target]);
        let hits = qgen_core::extract_action_verbs(&text, tax.registry()).unwrap();
        match suggest_repair(&q, target, &tax) {
            Ok(repaired) => {
                prop_assert!(!hits.is_empty());
                prop_assert!(validate_question(&repaired, target, &tax).unwrap().compliant);
                prop_assert_eq!(suggest_repair(&repaired, target, &tax).unwrap(), repaired);
            }
            Err(err) => {
                prop_assert_eq!(err, Error::NoVerbFound);
                prop_assert!(hits.is_empty());
            }
        }
    }

    #[test]
    fn generation_never_accepts_noncompliant(
        lines in prop::collection::vec(text_strategy(), 0..6),
        count in 1usize..5,
        retries in 0u32..4,
        target in prop::sample::select(subpoints()),
    ) {
        let tax = Taxonomy::builtin();
        let raw: String = lines.iter().map(|w| format!("Q: {}\n", render(&tax, w))).collect();
        let client = ScriptedClient::new([raw]);
        let mut req = GenerationRequest::new("C", "topic", target, count);
        req.client_params.max_retries = retries;
        let result = generate(&req, &client, &tax).unwrap();
        prop_assert!(result.attempts_used <= 1 + retries);
        prop_assert_eq!(client.call_count() as u32, result.attempts_used);
        prop_assert!(result.questions.len() <= count);
        for q in &result.questions {
            prop_assert!(validate_question(q, target, &tax).unwrap().compliant);
        }
        let again = generate(&req, &ScriptedClient::new([lines.iter().map(|w| format!("Q: {}\n", render(&tax, w))).collect::<String>()]), &tax).unwrap();
        prop_assert_eq!(again, result);
    }

    #[test]
    fn offline_is_total(target in prop::sample::select(subpoints()), count in 1usize..40, seed in any::<u64>()) {
        let tax = Taxonomy::builtin();
        let req = GenerationRequest::new("C", "networks", target, count);
        let out = offline_generate(&req, seed, &tax).unwrap();
        prop_assert_eq!(out.len(), count);
        for q in &out {
            prop_assert!(validate_question(q, target, &tax).unwrap().compliant);
        }
        prop_assert_eq!(offline_generate(&req, seed, &tax).unwrap(), out);
    }

    #[test]
    fn blueprint_conservation_and_monotonicity(
        covered in prop::sample::subsequence(subpoints(), 1..6),
        counts in prop::collection::vec(1usize..4, 6),
        bank_words in prop::collection::vec((text_strategy(), any::<prop::sample::Index>()), 0..12),
        extra in prop::collection::vec(any::<prop::sample::Index>(), 0..4),
    ) {
        let tax = Taxonomy::builtin();
        let course = CourseSpec { code: "C".into(), title: "T".into(), topics: vec![], covered_subpoints: covered.clone() };
        let req_counts: BTreeMap<_, _> = covered.iter().zip(&counts).map(|(&id, &n)| (id, n)).collect();
        let req = BlueprintRequirement::new(&course, req_counts).unwrap();
        let mut bank: Vec<Question> = bank_words
            .iter()
            .enumerate()
            .map(|(i, (w, t))| {
                let mut q = question(&render(&tax, w), vec![*t.get(&covered)]);
                q.id = format!("b{i}");
                q
            })
            .collect();

        let exam = assemble(&course, &req, &bank, None, &tax);
        let deficit: usize = exam.deficits.values().sum();
        prop_assert_eq!(exam.len() + deficit, req.total());
        prop_assert_eq!(exam.matrix.total, exam.len());
        for slot in &exam.slots {
            prop_assert!(validate_question(&slot.question, slot.subpoint, &tax).unwrap().compliant);
        }

        // adding compliant questions never increases a deficit
        for (i, idx) in extra.iter().enumerate() {
            let id = *idx.get(&covered);
            let verb = &tax.subpoint(id).verb_row[0];
            let mut q = question(&format!("{verb} something"), vec![id]);
            q.id = format!("x{i}");
            bank.push(q);
        }
        let bigger = assemble(&course, &req, &bank, None, &tax);
        for (id, &d) in &bigger.deficits {
            prop_assert!(d <= exam.deficits.get(id).copied().unwrap_or(0));
        }

        let filler = OfflineFiller { taxonomy: &tax, course: &course, seed: 0 };
        let filled = assemble(&course, &req, &bank, Some(&filler), &tax);
        prop_assert!(filled.deficits.is_empty());
        prop_assert_eq!(filled.len(), req.total());

        let reports: Vec<_> = filled.slots.iter().map(|s| s.report.clone()).collect();
        prop_assert_eq!(coverage_matrix(&reports, &course), filled.matrix);
    }
}
