//! Structured outcome of a randomized property run.

use serde::{Deserialize, Serialize};

use crate::document::SetDocument;

/// Serde adapter for `f64` that writes non-finite values as the strings
/// `"inf"`, `"-inf"` and `"nan"` instead of JSON `null`.
pub mod extended_float {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn token(x: f64) -> Option<&'static str> {
        if x.is_nan() {
            Some("nan")
        } else if x == f64::INFINITY {
            Some("inf")
        } else if x == f64::NEG_INFINITY {
            Some("-inf")
        } else {
            None
        }
    }

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        match token(*x) {
            Some(t) => s.serialize_str(t),
            None => s.serialize_f64(*x),
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Num(f64),
        Tok(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Raw::deserialize(d)? {
            Raw::Num(x) => Ok(x),
            Raw::Tok(t) => match t.as_str() {
                "inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                "nan" => Ok(f64::NAN),
                other => Err(serde::de::Error::custom(format!("unknown number token {other:?}"))),
            },
        }
    }
}

/// At most this many failures are stored verbatim; the rest are counted.
pub const MAX_RECORDED: usize = 20;

/// Runs whose inconclusive fraction exceeds this fail with exit code 3.
pub const INCONCLUSIVE_LIMIT: f64 = 0.2;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub inputs: Vec<SetDocument>,
    #[serde(with = "extended_float")]
    pub residual: f64,
    #[serde(with = "extended_float")]
    pub threshold: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

/// One checked inequality `residual <= threshold` inside a trial.
#[derive(Clone, Debug)]
pub struct Check {
    pub verdict: Verdict,
    pub residual: f64,
    pub threshold: f64,
    pub inputs: Vec<SetDocument>,
    pub note: Option<String>,
}

impl Check {
    pub fn at_most(residual: f64, threshold: f64) -> Self {
        let verdict = if residual <= threshold {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        Self {
            verdict,
            residual,
            threshold,
            inputs: Vec::new(),
            note: None,
        }
    }

    pub fn inconclusive(residual: f64, threshold: f64) -> Self {
        Self {
            verdict: Verdict::Inconclusive,
            ..Self::at_most(residual, threshold)
        }
    }

    pub fn with_inputs(mut self, inputs: Vec<SetDocument>) -> Self {
        self.inputs = inputs;
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

/// A point of an aggregate sequence (e.g. a residual per perturbation scale).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesPoint {
    pub label: String,
    #[serde(with = "extended_float")]
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub suite: String,
    pub dim: usize,
    pub trials: usize,
    pub seed: u64,
    pub passed: bool,
    pub failure_count: usize,
    pub failures: Vec<Failure>,
    pub inconclusive: usize,
    /// Largest residual over all checks.
    #[serde(with = "extended_float")]
    pub worst_residual: f64,
    /// Largest `residual / threshold` over all checks.
    #[serde(with = "extended_float")]
    pub worst_ratio: f64,
    pub runtime_ms: u64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub series: Vec<SeriesPoint>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<Report>,
}

impl Report {
    pub fn empty(suite: &str, dim: usize, seed: u64) -> Self {
        Self {
            suite: suite.to_string(),
            dim,
            trials: 0,
            seed,
            passed: true,
            failure_count: 0,
            failures: Vec::new(),
            inconclusive: 0,
            worst_residual: 0.0,
            worst_ratio: 0.0,
            runtime_ms: 0,
            series: Vec::new(),
            children: Vec::new(),
        }
    }

    /// Aggregates per-trial check lists. A trial is inconclusive when any
    /// of its checks is.
    pub fn from_trials(suite: &str, dim: usize, seed: u64, trials: Vec<Vec<Check>>) -> Self {
        let mut r = Self::empty(suite, dim, seed);
        r.trials = trials.len();
        for checks in trials {
            let mut undecided = false;
            for c in checks {
                r.absorb(c, &mut undecided);
            }
            if undecided {
                r.inconclusive += 1;
            }
        }
        r.passed = r.failure_count == 0;
        r
    }

    fn absorb(&mut self, c: Check, undecided: &mut bool) {
        if c.residual.is_finite() {
            self.worst_residual = self.worst_residual.max(c.residual);
            if c.threshold > 0.0 {
                self.worst_ratio = self.worst_ratio.max(c.residual / c.threshold);
            }
        }
        match c.verdict {
            Verdict::Pass => {}
            Verdict::Inconclusive => *undecided = true,
            Verdict::Fail => {
                self.failure_count += 1;
                if self.failures.len() < MAX_RECORDED {
                    self.failures.push(Failure {
                        inputs: c.inputs,
                        residual: c.residual,
                        threshold: c.threshold,
                        note: c.note,
                    });
                }
            }
        }
    }

    /// Adds aggregate checks that are not tied to a single trial.
    pub fn add_checks(&mut self, checks: Vec<Check>) {
        let mut undecided = false;
        for c in checks {
            self.absorb(c, &mut undecided);
        }
        if undecided {
            self.inconclusive += 1;
        }
        self.passed = self.failure_count == 0;
    }

    pub fn combine(suite: &str, dim: usize, seed: u64, children: Vec<Report>) -> Self {
        let mut r = Self::empty(suite, dim, seed);
        for c in &children {
            r.trials += c.trials;
            r.failure_count += c.failure_count;
            r.inconclusive += c.inconclusive;
            r.worst_residual = r.worst_residual.max(c.worst_residual);
            r.worst_ratio = r.worst_ratio.max(c.worst_ratio);
            r.runtime_ms += c.runtime_ms;
        }
        r.passed = r.failure_count == 0;
        r.children = children;
        r
    }

    pub fn inconclusive_fraction(&self) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            self.inconclusive as f64 / self.trials as f64
        }
    }

    /// 0 pass, 1 failures, 3 too many inconclusive trials.
    pub fn exit_code(&self) -> i32 {
        if self.failure_count > 0 {
            1
        } else if self.too_inconclusive() {
            3
        } else {
            0
        }
    }

    fn too_inconclusive(&self) -> bool {
        self.inconclusive_fraction() > INCONCLUSIVE_LIMIT || self.children.iter().any(|c| c.too_inconclusive())
    }

    /// Copy with `runtime_ms` zeroed everywhere, for reproducibility checks.
    pub fn without_timing(&self) -> Report {
        let mut r = self.clone();
        r.runtime_ms = 0;
        r.children = r.children.iter().map(|c| c.without_timing()).collect();
        r
    }
}
