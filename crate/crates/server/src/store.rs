use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use qgen_core::blueprint::CourseSpec;
use qgen_core::formats::{append_to_bank, read_bank, read_course, serialize_course};
use qgen_core::{Error, Question, Result};
use tokio::sync::RwLock;

/// Question banks keyed by id. Mutations go through the write lock, so there
/// is a single writer at a time; reads run concurrently.
///
/// With a data directory, each bank lives in `<dir>/banks/<id>.jsonl` and
/// appends are written through.
#[derive(Debug, Default)]
pub struct BankStore {
    banks: RwLock<BTreeMap<String, Vec<Question>>>,
    dir: Option<PathBuf>,
}

fn valid_id(id: &str) -> bool {
    !id.is_empty() && id.chars().all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_')
}

impl BankStore {
    pub fn in_memory() -> Self {
        Self::default()
    }

    pub fn open(dir: &Path) -> Result<Self> {
        let dir = dir.join("banks");
        std::fs::create_dir_all(&dir)?;
        let mut banks = BTreeMap::new();
        for entry in std::fs::read_dir(&dir)? {
            let path = entry?.path();
            if path.extension().is_some_and(|e| e == "jsonl") {
                if let Some(id) = path.file_stem().and_then(|s| s.to_str()) {
                    banks.insert(id.to_string(), read_bank(&path)?);
                }
            }
        }
        Ok(BankStore { banks: RwLock::new(banks), dir: Some(dir) })
    }

    pub async fn ids(&self) -> Vec<String> {
        self.banks.read().await.keys().cloned().collect()
    }

    pub async fn get(&self, id: &str) -> Option<Vec<Question>> {
        self.banks.read().await.get(id).cloned()
    }

    /// Appends questions, creating the bank if needed. Returns the new size.
    pub async fn append(&self, id: &str, questions: Vec<Question>) -> Result<usize> {
        if !valid_id(id) {
            return Err(Error::Schema(format!("invalid bank id `{id}`")));
        }
        let mut banks = self.banks.write().await;
        let bank = banks.entry(id.to_string()).or_default();
        for (i, q) in questions.iter().enumerate() {
            let clash = bank.iter().any(|b| b.id == q.id) || questions[..i].iter().any(|p| p.id == q.id);
            if clash {
                return Err(Error::Schema(format!("duplicate question id `{}` in bank `{id}`", q.id)));
            }
        }
        if let Some(dir) = &self.dir {
            append_to_bank(&dir.join(format!("{id}.jsonl")), &questions)?;
        }
        bank.extend(questions);
        Ok(bank.len())
    }
}

#[derive(Debug, Default)]
pub struct CourseStore {
    courses: RwLock<BTreeMap<String, CourseSpec>>,
    dir: Option<PathBuf>,
}

impl CourseStore {
    pub fn in_memory() -> Self {
        Self::default()
    }

    /// Loads every `<dir>/courses/*.json` file.
    pub fn open(dir: &Path) -> Result<Self> {
        let dir = dir.join("courses");
        std::fs::create_dir_all(&dir)?;
        let mut courses = BTreeMap::new();
        for entry in std::fs::read_dir(&dir)? {
            let path = entry?.path();
            if path.extension().is_some_and(|e| e == "json") {
                let course = read_course(&path)?;
                courses.insert(course.code.clone(), course);
            }
        }
        Ok(CourseStore { courses: RwLock::new(courses), dir: Some(dir) })
    }

    pub async fn codes(&self) -> Vec<String> {
        self.courses.read().await.keys().cloned().collect()
    }

    pub async fn get(&self, code: &str) -> Option<CourseSpec> {
        self.courses.read().await.get(code).cloned()
    }

    pub async fn put(&self, course: CourseSpec) -> Result<()> {
        if !valid_id(&course.code) {
            return Err(Error::Schema(format!("invalid course code `{}`", course.code)));
        }
        let mut courses = self.courses.write().await;
        if let Some(dir) = &self.dir {
            std::fs::write(dir.join(format!("{}.json", course.code)), serialize_course(&course))?;
        }
        courses.insert(course.code.clone(), course);
        Ok(())
    }
}
