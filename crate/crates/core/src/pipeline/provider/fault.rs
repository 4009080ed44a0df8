//! Seeded fault injection over another provider.
//!
//! With a known trial count `T`, a step with rate `p` is corrupted in exactly
//! `round(p * T)` trials, chosen by a seeded shuffle; beyond `T` each trial is
//! corrupted independently with probability `p`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use regex::Regex;

use super::{CompletionRequest, Provider, ProviderError, Reply};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FaultKind {
    /// Drops the closing result tag.
    Truncate,
    /// Shifts the first coordinate inside the result block.
    Perturb,
    /// Fails the request.
    ProviderError,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FaultMode {
    #[default]
    Mixed,
    Truncate,
    Perturb,
    Error,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct FaultSchedule {
    /// Corruption rate per step tag (`1`, `3-1`, `5`, ...).
    pub rates: BTreeMap<String, f64>,
    pub seed: u64,
    pub trials: Option<usize>,
    pub mode: FaultMode,
}

impl FaultSchedule {
    pub fn rate(&self, tag: &str) -> f64 {
        self.rates.get(tag).copied().unwrap_or(0.0)
    }

    fn tag_seed(&self, tag: &str) -> u64 {
        // FNV-1a, stable across builds
        let mut h: u64 = 0xcbf29ce484222325;
        for b in tag.bytes() {
            h ^= u64::from(b);
            h = h.wrapping_mul(0x100000001b3);
        }
        h ^ self.seed
    }

    /// Whether `trial` of step `tag` is corrupted.
    pub fn is_faulted(&self, tag: &str, trial: usize) -> bool {
        let rate = self.rate(tag);
        if rate <= 0.0 {
            return false;
        }
        match self.trials {
            Some(t) if trial < t => {
                let count = (rate * t as f64).round() as usize;
                let mut order: Vec<usize> = (0..t).collect();
                order.shuffle(&mut ChaCha8Rng::seed_from_u64(self.tag_seed(tag)));
                order[..count.min(t)].contains(&trial)
            }
            _ => {
                let mut rng = ChaCha8Rng::seed_from_u64(self.tag_seed(tag));
                rng.set_stream(trial as u64);
                rng.gen::<f64>() < rate
            }
        }
    }

    fn kind(&self, tag: &str, trial: usize) -> FaultKind {
        match self.mode {
            FaultMode::Truncate => FaultKind::Truncate,
            FaultMode::Perturb => FaultKind::Perturb,
            FaultMode::Error => FaultKind::ProviderError,
            FaultMode::Mixed => {
                let mut rng = ChaCha8Rng::seed_from_u64(self.tag_seed(tag).rotate_left(17));
                rng.set_stream(trial as u64);
                match rng.gen_range(0..3) {
                    0 => FaultKind::Truncate,
                    1 => FaultKind::Perturb,
                    _ => FaultKind::ProviderError,
                }
            }
        }
    }

    pub fn with_trials(mut self, trials: usize) -> Self {
        self.trials = Some(trials);
        self
    }
}

impl FromStr for FaultSchedule {
    type Err = ProviderError;

    /// `3-1=0.15,5=0.05,seed=7,trials=100,mode=truncate`
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |m: String| ProviderError::Config(m);
        let mut out = FaultSchedule::default();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| bad(format!("expected key=value, got {part:?}")))?;
            let (k, v) = (k.trim(), v.trim());
            match k {
                "seed" => out.seed = v.parse().map_err(|_| bad(format!("bad seed {v:?}")))?,
                "trials" => {
                    out.trials = Some(v.parse().map_err(|_| bad(format!("bad trials {v:?}")))?)
                }
                "mode" => {
                    out.mode = match v {
                        "mixed" => FaultMode::Mixed,
                        "truncate" => FaultMode::Truncate,
                        "perturb" => FaultMode::Perturb,
                        "error" => FaultMode::Error,
                        _ => return Err(bad(format!("bad mode {v:?}"))),
                    }
                }
                tag => {
                    let valid = matches!(tag, "1" | "2" | "3" | "4" | "5" | "6" | "3-1" | "3-2" | "3-3");
                    if !valid {
                        return Err(bad(format!("unknown step {tag:?}")));
                    }
                    let rate: f64 = v.parse().map_err(|_| bad(format!("bad rate {v:?}")))?;
                    if !(0.0..=1.0).contains(&rate) {
                        return Err(bad(format!("rate {rate} outside [0, 1]")));
                    }
                    out.rates.insert(tag.to_string(), rate);
                }
            }
        }
        Ok(out)
    }
}

impl fmt::Display for FaultSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.rates.iter().map(|(k, v)| format!("{k}={v}")).collect();
        parts.push(format!("seed={}", self.seed));
        if let Some(t) = self.trials {
            parts.push(format!("trials={t}"));
        }
        f.write_str(&parts.join(","))
    }
}

pub struct FaultProvider<P> {
    inner: P,
    schedule: FaultSchedule,
    number: Regex,
}

impl<P: Provider> FaultProvider<P> {
    pub fn new(inner: P, schedule: FaultSchedule) -> Self {
        FaultProvider {
            inner,
            schedule,
            number: Regex::new(r"[(\[]\s*(-?\d+(?:\.\d+)?)").expect("static regex"),
        }
    }

    pub fn schedule(&self) -> &FaultSchedule {
        &self.schedule
    }

    fn perturb(&self, text: &str) -> Option<String> {
        let start = text.rfind("<result>")?;
        let m = self.number.captures(&text[start..])?.get(1)?;
        let value: f64 = m.as_str().parse().ok()?;
        let (a, b) = (start + m.start(), start + m.end());
        Some(format!("{}{}{}", &text[..a], value + 1.5, &text[b..]))
    }

    fn truncate(text: &str) -> String {
        match text.rfind("</result>") {
            Some(i) => format!("{}{}", &text[..i], &text[i + "</result>".len()..]),
            None => text.to_string(),
        }
    }
}

impl<P: Provider> Provider for FaultProvider<P> {
    fn complete(&self, req: &CompletionRequest<'_>) -> Result<Reply, ProviderError> {
        let tag = req.key.tag();
        if !self.schedule.is_faulted(&tag, req.trial) {
            return self.inner.complete(req);
        }
        let kind = self.schedule.kind(&tag, req.trial);
        if kind == FaultKind::ProviderError {
            return Err(ProviderError::Injected);
        }
        match self.inner.complete(req)? {
            Reply::Final(text) => {
                let perturbed = match kind {
                    FaultKind::Perturb if matches!(req.key.step, 3 | 5) => self.perturb(&text),
                    _ => None,
                };
                Ok(Reply::Final(perturbed.unwrap_or_else(|| Self::truncate(&text))))
            }
            tool => Ok(tool),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::{ReplayProvider, Role, StepKey};
    use super::*;

    #[test]
    fn exact_counts_with_known_trials() {
        let s: FaultSchedule = "3-1=0.15,3-2=0.23,6=0.17,seed=11,trials=100".parse().unwrap();
        for (tag, want) in [("3-1", 15), ("3-2", 23), ("6", 17), ("5", 0)] {
            let n = (0..100).filter(|&t| s.is_faulted(tag, t)).count();
            assert_eq!(n, want, "{tag}");
        }
        // independent choices per tag
        let a: Vec<bool> = (0..100).map(|t| s.is_faulted("3-1", t)).collect();
        let b: Vec<bool> = (0..100).map(|t| s.is_faulted("6", t)).collect();
        assert_ne!(a, b);
    }

    #[test]
    fn parse_errors() {
        assert!("3-4=0.1".parse::<FaultSchedule>().is_err());
        assert!("3-1=1.5".parse::<FaultSchedule>().is_err());
        assert!("seed".parse::<FaultSchedule>().is_err());
        let s: FaultSchedule = "1=0.02,seed=3".parse().unwrap();
        assert_eq!(s.to_string(), "1=0.02,seed=3");
    }

    #[test]
    fn corruptions() {
        let inner = ReplayProvider::from_json(
            r#"[{"step":5,"completion":"x <result>{\"a\": [2, 3]}</result>"}]"#,
        )
        .unwrap();
        let key = StepKey::new(5);
        let req = CompletionRequest {
            key: &key,
            role: Role::Strong,
            model: "m",
            prompt: "p",
            tools: &[],
            history: &[],
            trial: 0,
        };
        let mk = |mode| FaultSchedule {
            rates: [("5".to_string(), 1.0)].into(),
            seed: 1,
            trials: Some(1),
            mode,
        };
        let p = FaultProvider::new(&inner, mk(FaultMode::Perturb));
        assert_eq!(p.complete(&req), Ok(Reply::Final("x <result>{\"a\": [3.5, 3]}</result>".into())));
        let p = FaultProvider::new(&inner, mk(FaultMode::Truncate));
        assert_eq!(p.complete(&req), Ok(Reply::Final("x <result>{\"a\": [2, 3]}".into())));
        let p = FaultProvider::new(&inner, mk(FaultMode::Error));
        assert_eq!(p.complete(&req), Err(ProviderError::Injected));
    }
}
