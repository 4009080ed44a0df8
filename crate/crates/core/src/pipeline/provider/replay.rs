//! Replay of recorded step completions.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{prompt_hash, CompletionRequest, Provider, ProviderError, Reply, StepKey, ToolRequest};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ToolRecord {
    pub name: String,
    pub args: Vec<f64>,
    #[serde(default)]
    pub result: String,
}

/// One recorded step completion.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplayEntry {
    pub step: u8,
    #[serde(default)]
    pub sub_step: Option<String>,
    #[serde(default)]
    pub prompt_hash: String,
    pub completion: String,
    #[serde(default)]
    pub tool_calls: Vec<ToolRecord>,
}

impl ReplayEntry {
    pub fn key(&self) -> StepKey {
        StepKey {
            step: self.step,
            sub_step: self.sub_step.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
struct ReplaySet {
    source: Option<PathBuf>,
    entries: Vec<ReplayEntry>,
}

/// Answers requests from recorded transcripts keyed by step and sub-step.
///
/// When several transcript files are loaded, the prompt hash picks the
/// recording. A single loaded transcript answers regardless of the hash
/// unless the provider is strict.
#[derive(Debug, Clone, PartialEq)]
pub struct ReplayProvider {
    sets: Vec<ReplaySet>,
    pub strict: bool,
}

fn replay_err(path: &Path, message: impl ToString) -> ProviderError {
    ProviderError::Replay {
        path: path.display().to_string(),
        message: message.to_string(),
    }
}

fn collect_files(dir: &Path, out: &mut Vec<PathBuf>) -> Result<(), ProviderError> {
    let rd = fs::read_dir(dir).map_err(|e| replay_err(dir, e))?;
    let mut paths: Vec<PathBuf> = rd.filter_map(|e| e.ok().map(|e| e.path())).collect();
    paths.sort();
    for p in paths {
        if p.is_dir() {
            collect_files(&p, out)?;
        } else if p
            .file_name()
            .and_then(|n| n.to_str())
            .is_some_and(|n| n.starts_with("replay") && n.ends_with(".json"))
        {
            out.push(p);
        }
    }
    Ok(())
}

impl ReplayProvider {
    pub fn new(entries: Vec<ReplayEntry>) -> Self {
        ReplayProvider {
            sets: vec![ReplaySet {
                source: None,
                entries,
            }],
            strict: false,
        }
    }

    pub fn from_json(text: &str) -> Result<Self, ProviderError> {
        let entries: Vec<ReplayEntry> =
            serde_json::from_str(text).map_err(|e| replay_err(Path::new("<inline>"), e))?;
        Ok(Self::new(entries))
    }

    /// Loads one transcript file, or every `replay*.json` below a directory.
    pub fn load(path: &Path) -> Result<Self, ProviderError> {
        let mut files = Vec::new();
        if path.is_dir() {
            collect_files(path, &mut files)?;
            if files.is_empty() {
                return Err(replay_err(path, "no replay*.json files found"));
            }
        } else {
            files.push(path.to_path_buf());
        }
        let mut sets = Vec::new();
        for f in files {
            let text = fs::read_to_string(&f).map_err(|e| replay_err(&f, e))?;
            let entries: Vec<ReplayEntry> =
                serde_json::from_str(&text).map_err(|e| replay_err(&f, e))?;
            sets.push(ReplaySet {
                source: Some(f),
                entries,
            });
        }
        Ok(ReplayProvider {
            sets,
            strict: false,
        })
    }

    pub fn strict(mut self, strict: bool) -> Self {
        self.strict = strict;
        self
    }

    pub fn sources(&self) -> Vec<&Path> {
        self.sets.iter().filter_map(|s| s.source.as_deref()).collect()
    }

    fn lookup(&self, key: &StepKey, prompt: &str) -> Result<&ReplayEntry, ProviderError> {
        let hash = prompt_hash(prompt);
        let candidates: Vec<&ReplayEntry> = self
            .sets
            .iter()
            .flat_map(|s| s.entries.iter())
            .filter(|e| e.step == key.step && e.sub_step == key.sub_step)
            .collect();
        let exact: Vec<&ReplayEntry> = candidates
            .iter()
            .copied()
            .filter(|e| e.prompt_hash == hash)
            .collect();
        if let Some(first) = exact.first() {
            if exact.iter().all(|e| e == first) {
                return Ok(first);
            }
            return Err(ProviderError::AmbiguousRecording(key.tag()));
        }
        if !self.strict && self.sets.len() == 1 && candidates.len() == 1 {
            return Ok(candidates[0]);
        }
        if !self.strict && candidates.len() > 1 && self.sets.len() == 1 {
            return Err(ProviderError::AmbiguousRecording(key.tag()));
        }
        Err(ProviderError::NoRecording {
            key: key.tag(),
            hash,
        })
    }
}

impl Provider for ReplayProvider {
    fn complete(&self, req: &CompletionRequest<'_>) -> Result<Reply, ProviderError> {
        let entry = self.lookup(req.key, req.prompt)?;
        let i = req.history.len();
        match entry.tool_calls.get(i) {
            Some(call) => Ok(Reply::Tool(ToolRequest {
                id: format!("call_{i}"),
                name: call.name.clone(),
                args: call.args.clone(),
            })),
            None => Ok(Reply::Final(entry.completion.clone())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::{Role, ToolExchange};
    use super::*;

    fn entry(step: u8, sub: Option<&str>, prompt: &str, text: &str) -> ReplayEntry {
        ReplayEntry {
            step,
            sub_step: sub.map(str::to_string),
            prompt_hash: prompt_hash(prompt),
            completion: text.into(),
            tool_calls: vec![],
        }
    }

    fn ask(p: &ReplayProvider, key: &StepKey, prompt: &str, history: &[ToolExchange]) -> Result<Reply, ProviderError> {
        p.complete(&CompletionRequest {
            key,
            role: Role::Light,
            model: "m",
            prompt,
            tools: &[],
            history,
            trial: 0,
        })
    }

    #[test]
    fn keyed_by_step_and_sub_step() {
        let p = ReplayProvider::new(vec![
            entry(3, Some("3-1"), "a", "one"),
            entry(3, Some("3-2"), "b", "two"),
        ]);
        assert_eq!(ask(&p, &StepKey::sub(3, "3-2"), "b", &[]), Ok(Reply::Final("two".into())));
        // single transcript: hash mismatch tolerated unless strict
        assert_eq!(ask(&p, &StepKey::sub(3, "3-1"), "zzz", &[]), Ok(Reply::Final("one".into())));
        let strict = p.clone().strict(true);
        assert!(matches!(
            ask(&strict, &StepKey::sub(3, "3-1"), "zzz", &[]),
            Err(ProviderError::NoRecording { .. })
        ));
        assert!(ask(&p, &StepKey::new(5), "x", &[]).is_err());
    }

    #[test]
    fn tool_calls_replayed_in_order() {
        let mut e = entry(3, None, "p", "done");
        e.tool_calls = vec![
            ToolRecord { name: "Divide".into(), args: vec![8.0, 3.0], result: "2.6667".into() },
            ToolRecord { name: "Sqrt".into(), args: vec![2.0], result: "1.4142".into() },
        ];
        let p = ReplayProvider::new(vec![e]);
        let key = StepKey::new(3);
        let first = ask(&p, &key, "p", &[]).unwrap();
        let Reply::Tool(req) = first else { panic!() };
        assert_eq!(req.name, "Divide");
        let hist = vec![ToolExchange { request: req, result: "2.6667".into() }];
        let Reply::Tool(req2) = ask(&p, &key, "p", &hist).unwrap() else { panic!() };
        assert_eq!(req2.args, vec![2.0]);
        let hist2 = vec![hist[0].clone(), ToolExchange { request: req2, result: "1.4142".into() }];
        assert_eq!(ask(&p, &key, "p", &hist2), Ok(Reply::Final("done".into())));
    }

    #[test]
    fn loads_directories() {
        let dir = tempfile::tempdir().unwrap();
        let a = dir.path().join("a");
        fs::create_dir(&a).unwrap();
        let e1 = vec![entry(1, None, "first", "A")];
        let e2 = vec![entry(1, None, "second", "B")];
        fs::write(a.join("replay.json"), serde_json::to_string(&e1).unwrap()).unwrap();
        fs::write(dir.path().join("replay_b.json"), serde_json::to_string(&e2).unwrap()).unwrap();
        fs::write(dir.path().join("other.json"), "not replay").unwrap();
        let p = ReplayProvider::load(dir.path()).unwrap();
        assert_eq!(p.sources().len(), 2);
        assert_eq!(ask(&p, &StepKey::new(1), "second", &[]), Ok(Reply::Final("B".into())));
        assert_eq!(ask(&p, &StepKey::new(1), "first", &[]), Ok(Reply::Final("A".into())));
        assert!(ask(&p, &StepKey::new(1), "third", &[]).is_err());
    }
}
