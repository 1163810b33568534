//! Bloom levels, NCAAA domains, the ABET outcome catalog and the question-verb
//! registry that ties them together.
//!
//! Built-in data is embedded here and is immutable once a [`Taxonomy`] has been
//! loaded. A `taxonomy-ext.v1` document can add verbs and surface forms but can
//! never remove or reclassify a built-in verb.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const EXTENSION_SCHEMA: &str = "taxonomy-ext.v1";

/// Cognitive level, ordered from Remembering (1) to Creating (6).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BloomLevel {
    Remembering,
    Understanding,
    Applying,
    Analyzing,
    Evaluating,
    Creating,
}

impl BloomLevel {
    pub const ALL: [BloomLevel; 6] = [
        BloomLevel::Remembering,
        BloomLevel::Understanding,
        BloomLevel::Applying,
        BloomLevel::Analyzing,
        BloomLevel::Evaluating,
        BloomLevel::Creating,
    ];

    pub fn ordinal(self) -> u8 {
        self as u8 + 1
    }

    pub fn from_ordinal(ordinal: u8) -> Option<Self> {
        Self::ALL.get(usize::from(ordinal).checked_sub(1)?).copied()
    }

    pub fn name(self) -> &'static str {
        match self {
            BloomLevel::Remembering => "Remembering",
            BloomLevel::Understanding => "Understanding",
            BloomLevel::Applying => "Applying",
            BloomLevel::Analyzing => "Analyzing",
            BloomLevel::Evaluating => "Evaluating",
            BloomLevel::Creating => "Creating",
        }
    }
}

impl fmt::Display for BloomLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BloomLevel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let wanted = s.trim();
        Self::ALL
            .into_iter()
            .find(|level| level.name().eq_ignore_ascii_case(wanted))
            .ok_or_else(|| Error::InvalidRequest(format!("unknown Bloom level `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum NcaaaDomain {
    Knowledge,
    Skills,
    Values,
}

impl NcaaaDomain {
    pub const ALL: [NcaaaDomain; 3] = [NcaaaDomain::Knowledge, NcaaaDomain::Skills, NcaaaDomain::Values];

    pub fn name(self) -> &'static str {
        match self {
            NcaaaDomain::Knowledge => "Knowledge",
            NcaaaDomain::Skills => "Skills",
            NcaaaDomain::Values => "Values",
        }
    }
}

impl fmt::Display for NcaaaDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One of the five distinct question-verb rows. Several subpoints share a row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VerbRow {
    Analyzing,
    Applying,
    Creating,
    Affective,
    Understanding,
}

const ANALYZING_VERBS: &[&str] = &[
    "appraise",
    "assess",
    "evaluate",
    "compare",
    "contrast",
    "criticize",
    "differentiate",
    "discriminate",
    "distinguish",
    "examine",
    "experiment",
    "question",
    "test",
];

const APPLYING_VERBS: &[&str] = &[
    "choose",
    "demonstrate",
    "employ",
    "illustrate",
    "interpret",
    "operate",
    "schedule",
    "sketch",
    "draw",
    "solve",
    "use",
    "write",
];

const CREATING_VERBS: &[&str] = &["assemble", "construct", "create", "design", "develop", "formulate", "write"];

const AFFECTIVE_VERBS: &[&str] = &[
    "appreciate",
    "accept",
    "attempt",
    "challenge",
    "defend",
    "dispute",
    "join",
    "judge",
    "justify",
    "question",
    "share",
    "support",
];

const UNDERSTANDING_VERBS: &[&str] = &[
    "classify",
    "describe",
    "discuss",
    "explain",
    "identify",
    "locate",
    "recognize",
    "report",
    "select",
    "translate",
    "paraphrase",
];

const IRREGULAR_FORMS: &[(&str, &str)] = &[
    ("wrote", "write"),
    ("written", "write"),
    ("drew", "draw"),
    ("drawn", "draw"),
    ("chose", "choose"),
    ("chosen", "choose"),
];

impl VerbRow {
    pub const ALL: [VerbRow; 5] = [
        VerbRow::Analyzing,
        VerbRow::Applying,
        VerbRow::Creating,
        VerbRow::Affective,
        VerbRow::Understanding,
    ];

    /// Lemmas in printed row order.
    pub fn verbs(self) -> &'static [&'static str] {
        match self {
            VerbRow::Analyzing => ANALYZING_VERBS,
            VerbRow::Applying => APPLYING_VERBS,
            VerbRow::Creating => CREATING_VERBS,
            VerbRow::Affective => AFFECTIVE_VERBS,
            VerbRow::Understanding => UNDERSTANDING_VERBS,
        }
    }

    /// The bracketed level label carried by the row.
    pub fn level(self) -> BloomLevel {
        match self {
            VerbRow::Analyzing => BloomLevel::Analyzing,
            VerbRow::Applying => BloomLevel::Applying,
            VerbRow::Creating => BloomLevel::Creating,
            VerbRow::Affective => BloomLevel::Evaluating,
            VerbRow::Understanding => BloomLevel::Understanding,
        }
    }

    pub fn is_affective(self) -> bool {
        matches!(self, VerbRow::Affective)
    }
}

struct SubpointDef {
    so: u8,
    point: u8,
    description: &'static str,
    row: VerbRow,
    any_level: bool,
}

const fn sp(so: u8, point: u8, description: &'static str, row: VerbRow) -> SubpointDef {
    SubpointDef { so, point, description, row, any_level: false }
}

const SUBPOINTS: [SubpointDef; 17] = [
    sp(1, 1, "An ability to analyze a complex computing problem", VerbRow::Analyzing),
    sp(
        1,
        2,
        "An ability to apply principles of computing and other relevant disciplines to identify solutions",
        VerbRow::Applying,
    ),
    sp(
        2,
        1,
        "An ability to design a computer-based system, process, component, or program to meet desired needs",
        VerbRow::Creating,
    ),
    sp(
        2,
        2,
        "An ability to implement a computer-based system, process, component, or program to meet desired needs",
        VerbRow::Applying,
    ),
    sp(
        2,
        3,
        "An ability to evaluate a computer-based system, process, component, or program to meet desired needs",
        VerbRow::Affective,
    ),
    sp(
        3,
        1,
        "An ability to conduct an oral presentation using effective communication skills",
        VerbRow::Applying,
    ),
    sp(
        3,
        2,
        "An ability to write in a clear, concise, grammatically correct and organized manner",
        VerbRow::Applying,
    ),
    sp(
        3,
        3,
        "An ability to develop appropriate illustrations including hand sketches, computer generated drawings/graphs and pictures",
        VerbRow::Applying,
    ),
    sp(
        4,
        1,
        "Understanding of professional responsibilities, ethical theories, legal and social issues",
        VerbRow::Understanding,
    ),
    sp(
        4,
        2,
        "Understanding of cyber security threats and corresponding procedures to mitigate these threats",
        VerbRow::Understanding,
    ),
    sp(
        4,
        3,
        "Understanding of risk management, security policies and audit procedures",
        VerbRow::Understanding,
    ),
    sp(
        5,
        1,
        "An ability to prepare a work schedule for the assigned task and complete it within the appropriate deadlines",
        VerbRow::Applying,
    ),
    SubpointDef {
        so: 5,
        point: 2,
        description: "An ability to participate in team meetings with full preparedness for providing useful input",
        row: VerbRow::Affective,
        any_level: true,
    },
    SubpointDef {
        so: 5,
        point: 3,
        description: "An ability to share ideas among the team and promote good communication among the team members",
        row: VerbRow::Affective,
        any_level: true,
    },
    sp(
        6,
        1,
        "Support the delivery of information systems within an information systems environment",
        VerbRow::Analyzing,
    ),
    sp(
        6,
        2,
        "Support the use of information systems within an information systems environment",
        VerbRow::Applying,
    ),
    sp(
        6,
        3,
        "Support the management of information systems within an information systems environment",
        VerbRow::Understanding,
    ),
];

struct OutcomeDef {
    statement: &'static str,
    domain: NcaaaDomain,
    table_levels: &'static [&'static str],
}

const OUTCOMES: [OutcomeDef; 6] = [
    OutcomeDef {
        statement: "Analyze a complex computing problem and to apply principles of computing and other relevant disciplines to identify solutions",
        domain: NcaaaDomain::Skills,
        table_levels: &["L3", "L5", "L6"],
    },
    OutcomeDef {
        statement: "Design, implement, and evaluate a computing-based solution to meet a given set of computing requirements in the context of the program's discipline",
        domain: NcaaaDomain::Skills,
        table_levels: &["L5", "L6"],
    },
    OutcomeDef {
        statement: "Communicate effectively in a variety of professional contexts",
        domain: NcaaaDomain::Values,
        table_levels: &["L2", "L3"],
    },
    OutcomeDef {
        statement: "Recognize professional responsibilities and make informed judgments in computing practice based on legal and ethical principles",
        domain: NcaaaDomain::Values,
        table_levels: &["L2", "L3"],
    },
    OutcomeDef {
        statement: "Function effectively as a member or leader of a team engaged in activities appropriate to the program's discipline",
        domain: NcaaaDomain::Values,
        table_levels: &["L2", "L3"],
    },
    OutcomeDef {
        statement: "Support the delivery, use, and management of information systems within an information systems environment",
        domain: NcaaaDomain::Skills,
        table_levels: &["L2", "L3"],
    },
];

/// NCAAA domain of a student outcome, straight from the SO mapping table.
pub fn domain_for_so(so_id: u32) -> Result<NcaaaDomain> {
    usize::try_from(so_id)
        .ok()
        .and_then(|so| so.checked_sub(1))
        .and_then(|idx| OUTCOMES.get(idx))
        .map(|def| def.domain)
        .ok_or(Error::UnknownOutcome(so_id))
}

/// Reduction of a Bloom level onto the three NCAAA domains.
pub fn ncaaa_domain_for_level(level: BloomLevel) -> NcaaaDomain {
    match level {
        BloomLevel::Remembering | BloomLevel::Understanding => NcaaaDomain::Knowledge,
        BloomLevel::Applying | BloomLevel::Analyzing | BloomLevel::Evaluating | BloomLevel::Creating => {
            NcaaaDomain::Skills
        }
    }
}

/// Identifier of one of the 17 catalog subpoints, e.g. `2.1`.
///
/// Construction validates catalog membership, so a `SubpointId` always names a
/// real subpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubpointId {
    so: u8,
    point: u8,
}

impl SubpointId {
    pub fn parse(s: &str) -> Result<Self> {
        let unknown = || Error::UnknownSubpoint(s.to_string());
        let (so, point) = s.trim().split_once('.').ok_or_else(unknown)?;
        let so: u8 = so.parse().map_err(|_| unknown())?;
        let point: u8 = point.parse().map_err(|_| unknown())?;
        if SUBPOINTS.iter().any(|d| d.so == so && d.point == point) {
            Ok(SubpointId { so, point })
        } else {
            Err(unknown())
        }
    }

    /// All catalog ids in catalog order.
    pub fn all() -> impl Iterator<Item = SubpointId> {
        SUBPOINTS.iter().map(|d| SubpointId { so: d.so, point: d.point })
    }

    pub fn so(self) -> u8 {
        self.so
    }

    pub fn point(self) -> u8 {
        self.point
    }

    pub fn table_domain(self) -> NcaaaDomain {
        OUTCOMES[usize::from(self.so) - 1].domain
    }

    pub fn row(self) -> VerbRow {
        self.def().row
    }

    fn def(self) -> &'static SubpointDef {
        SUBPOINTS
            .iter()
            .find(|d| d.so == self.so && d.point == self.point)
            .expect("SubpointId is always in the catalog")
    }
}

impl fmt::Display for SubpointId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.so, self.point)
    }
}

impl FromStr for SubpointId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SubpointId::parse(s)
    }
}

impl Serialize for SubpointId {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for SubpointId {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = String::deserialize(deserializer)?;
        SubpointId::parse(&raw).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubpointSpec {
    pub id: SubpointId,
    pub description: String,
    pub row: VerbRow,
    pub verb_row: Vec<String>,
    /// Empty for `any_level` subpoints, whose row carries no level label.
    pub bloom_levels: BTreeSet<BloomLevel>,
    pub so_id: u8,
    pub ncaaa_domain: NcaaaDomain,
    pub any_level: bool,
}

impl SubpointSpec {
    fn from_def(def: &SubpointDef) -> Self {
        let bloom_levels = if def.any_level { BTreeSet::new() } else { BTreeSet::from([def.row.level()]) };
        SubpointSpec {
            id: SubpointId { so: def.so, point: def.point },
            description: def.description.to_string(),
            row: def.row,
            verb_row: def.row.verbs().iter().map(|v| v.to_string()).collect(),
            bloom_levels,
            so_id: def.so,
            ncaaa_domain: OUTCOMES[usize::from(def.so) - 1].domain,
            any_level: def.any_level,
        }
    }

    pub fn contains_verb(&self, lemma: &str) -> bool {
        self.verb_row.iter().any(|v| v == lemma)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OutcomeRow {
    pub so_id: u8,
    pub statement: String,
    pub domain: NcaaaDomain,
    /// Level labels as printed in the SO mapping table. Display metadata only.
    pub bloom_labels: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MappingTables {
    pub so_rows: Vec<OutcomeRow>,
    pub level_to_domain: BTreeMap<BloomLevel, NcaaaDomain>,
}

impl MappingTables {
    fn builtin() -> Self {
        let so_rows = OUTCOMES
            .iter()
            .zip(1u8..)
            .map(|(def, so_id)| OutcomeRow {
                so_id,
                statement: def.statement.to_string(),
                domain: def.domain,
                bloom_labels: def.table_levels.iter().map(|l| l.to_string()).collect(),
            })
            .collect();
        let level_to_domain = BloomLevel::ALL.into_iter().map(|l| (l, ncaaa_domain_for_level(l))).collect();
        MappingTables { so_rows, level_to_domain }
    }
}

/// A level assignment returned by [`VerbRegistry::classify`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Classification {
    pub level: BloomLevel,
    pub affective: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerbEntry {
    pub lemma: String,
    pub levels: BTreeSet<BloomLevel>,
    pub affective: bool,
    /// Levels that were assigned by an affective-learning row.
    pub affective_levels: BTreeSet<BloomLevel>,
    pub irregular_forms: Vec<String>,
}

impl VerbEntry {
    fn classifications(&self) -> Vec<Classification> {
        self.levels
            .iter()
            .map(|&level| Classification { level, affective: self.affective_levels.contains(&level) })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerbRegistry {
    entries: BTreeMap<String, VerbEntry>,
    #[serde(skip)]
    forms: BTreeMap<String, String>,
}

impl VerbRegistry {
    fn builtin() -> Self {
        let mut entries: BTreeMap<String, VerbEntry> = BTreeMap::new();
        for row in VerbRow::ALL {
            for &lemma in row.verbs() {
                let entry = entries.entry(lemma.to_string()).or_insert_with(|| VerbEntry {
                    lemma: lemma.to_string(),
                    levels: BTreeSet::new(),
                    affective: false,
                    affective_levels: BTreeSet::new(),
                    irregular_forms: Vec::new(),
                });
                entry.levels.insert(row.level());
                if row.is_affective() {
                    entry.affective = true;
                    entry.affective_levels.insert(row.level());
                }
            }
        }
        let mut forms = BTreeMap::new();
        for &(form, lemma) in IRREGULAR_FORMS {
            entries
                .get_mut(lemma)
                .expect("irregular forms target registered lemmas")
                .irregular_forms
                .push(form.to_string());
            forms.insert(form.to_string(), lemma.to_string());
        }
        VerbRegistry { entries, forms }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, lemma: &str) -> Option<&VerbEntry> {
        self.entries.get(lemma)
    }

    pub fn is_lemma(&self, word: &str) -> bool {
        self.entries.contains_key(word)
    }

    /// Lemma for an irregular surface form (`wrote` -> `write`).
    pub fn lemma_for_form(&self, form: &str) -> Option<&str> {
        self.forms.get(form).map(String::as_str)
    }

    pub fn entries(&self) -> impl Iterator<Item = &VerbEntry> {
        self.entries.values()
    }

    /// Every level any row assigns to `lemma`; empty when the lemma is not a
    /// registered question verb.
    pub fn classify(&self, lemma: &str) -> Vec<Classification> {
        self.entries.get(lemma).map(VerbEntry::classifications).unwrap_or_default()
    }

    pub fn levels(&self, lemma: &str) -> BTreeSet<BloomLevel> {
        self.entries.get(lemma).map(|e| e.levels.clone()).unwrap_or_default()
    }

    fn merge(&mut self, ext: &ExtensionConfig) -> Result<()> {
        let builtin = self.clone();
        let mut seen = BTreeSet::new();
        for verb in &ext.verbs {
            check_word(&verb.lemma, "lemma")?;
            if !seen.insert(verb.lemma.as_str()) {
                return Err(Error::MalformedExtension(format!("lemma `{}` listed twice", verb.lemma)));
            }
            for form in &verb.forms {
                check_word(form, "form")?;
            }
            let levels: BTreeSet<BloomLevel> = verb.levels.iter().copied().collect();

            if let Some(existing) = builtin.get(&verb.lemma) {
                if !levels.is_empty() && levels != existing.levels {
                    return Err(Error::ConflictingExtension(format!(
                        "`{}` is built in at {:?}, extension says {:?}",
                        verb.lemma, existing.levels, levels
                    )));
                }
                if verb.affective.is_some_and(|a| a != existing.affective) {
                    return Err(Error::ConflictingExtension(format!(
                        "`{}` affective flag contradicts the built-in entry",
                        verb.lemma
                    )));
                }
            } else {
                if levels.is_empty() {
                    return Err(Error::MalformedExtension(format!("new lemma `{}` needs at least one level", verb.lemma)));
                }
                if let Some(owner) = self.forms.get(&verb.lemma) {
                    return Err(Error::ConflictingExtension(format!(
                        "`{}` is already a form of `{owner}`",
                        verb.lemma
                    )));
                }
                let affective = verb.affective.unwrap_or(false);
                self.entries.insert(
                    verb.lemma.clone(),
                    VerbEntry {
                        lemma: verb.lemma.clone(),
                        affective,
                        affective_levels: if affective { levels.clone() } else { BTreeSet::new() },
                        levels,
                        irregular_forms: Vec::new(),
                    },
                );
            }
        }

        for verb in &ext.verbs {
            for form in &verb.forms {
                if form == &verb.lemma {
                    continue;
                }
                if self.entries.contains_key(form) {
                    return Err(Error::ConflictingExtension(format!("form `{form}` is itself a registered lemma")));
                }
                match self.forms.get(form) {
                    Some(owner) if owner != &verb.lemma => {
                        return Err(Error::ConflictingExtension(format!("form `{form}` already belongs to `{owner}`")));
                    }
                    Some(_) => {}
                    None => {
                        self.forms.insert(form.clone(), verb.lemma.clone());
                        if let Some(entry) = self.entries.get_mut(&verb.lemma) {
                            entry.irregular_forms.push(form.clone());
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

fn check_word(word: &str, what: &str) -> Result<()> {
    let ok = !word.is_empty() && word.chars().all(|c| c.is_alphabetic() && !c.is_uppercase());
    if ok {
        Ok(())
    } else {
        Err(Error::MalformedExtension(format!(
            "{what} `{word}` must be a single lowercase word"
        )))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtensionVerb {
    pub lemma: String,
    #[serde(default)]
    pub levels: Vec<BloomLevel>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub affective: Option<bool>,
    #[serde(default)]
    pub forms: Vec<String>,
}

/// A `taxonomy-ext.v1` document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtensionConfig {
    pub schema: String,
    #[serde(default)]
    pub verbs: Vec<ExtensionVerb>,
}

impl ExtensionConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let config: ExtensionConfig =
            serde_json::from_str(text).map_err(|e| Error::MalformedExtension(e.to_string()))?;
        if config.schema != EXTENSION_SCHEMA {
            return Err(Error::MalformedExtension(format!(
                "expected schema `{EXTENSION_SCHEMA}`, found `{}`",
                config.schema
            )));
        }
        Ok(config)
    }
}

/// The loaded verb registry, subpoint catalog and mapping tables.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Taxonomy {
    registry: VerbRegistry,
    subpoints: Vec<SubpointSpec>,
    tables: MappingTables,
}

/// Builds the built-in taxonomy and merges an optional extension into it.
pub fn load_registry(extension: Option<&ExtensionConfig>) -> Result<Taxonomy> {
    let mut taxonomy = Taxonomy::builtin();
    if let Some(ext) = extension {
        if ext.schema != EXTENSION_SCHEMA {
            return Err(Error::MalformedExtension(format!("unsupported schema `{}`", ext.schema)));
        }
        taxonomy.registry.merge(ext)?;
    }
    Ok(taxonomy)
}

impl Taxonomy {
    pub fn builtin() -> Self {
        Taxonomy {
            registry: VerbRegistry::builtin(),
            subpoints: SUBPOINTS.iter().map(SubpointSpec::from_def).collect(),
            tables: MappingTables::builtin(),
        }
    }

    pub fn registry(&self) -> &VerbRegistry {
        &self.registry
    }

    pub fn subpoints(&self) -> &[SubpointSpec] {
        &self.subpoints
    }

    pub fn tables(&self) -> &MappingTables {
        &self.tables
    }

    pub fn subpoint(&self, id: SubpointId) -> &SubpointSpec {
        self.subpoints.iter().find(|s| s.id == id).expect("catalog holds every SubpointId")
    }

    pub fn classify_verb(&self, lemma: &str) -> Vec<Classification> {
        self.registry.classify(lemma)
    }

    pub fn verbs_for_subpoint(&self, id: &str) -> Result<&[String]> {
        let id = SubpointId::parse(id)?;
        Ok(&self.subpoint(id).verb_row)
    }

    pub fn domain_for_so(&self, so_id: u32) -> Result<NcaaaDomain> {
        domain_for_so(so_id)
    }

    pub fn ncaaa_domain_for_level(&self, level: BloomLevel) -> NcaaaDomain {
        self.tables.level_to_domain[&level]
    }
}

impl Default for Taxonomy {
    fn default() -> Self {
        Taxonomy::builtin()
    }
}
