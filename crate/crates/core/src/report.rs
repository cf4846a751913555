//! Verdicts with witnesses.

use serde::Serialize;

use crate::tensor::Tensor;

/// Witnesses kept per report; the total count is always exact.
pub const MAX_WITNESSES: usize = 32;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub rule: String,
    /// Basis indices of the failing argument tuple.
    pub witness: Vec<usize>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub ok: bool,
    pub violation_count: usize,
    pub violations: Vec<Violation>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Default for Report {
    fn default() -> Self {
        Self::new()
    }
}

impl Report {
    pub fn new() -> Self {
        Report {
            ok: true,
            violation_count: 0,
            violations: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn push(&mut self, rule: &str, witness: Vec<usize>, detail: String) {
        self.ok = false;
        self.violation_count += 1;
        if self.violations.len() < MAX_WITNESSES {
            self.violations.push(Violation {
                rule: rule.to_string(),
                witness,
                detail,
            });
        }
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    pub fn merge(&mut self, other: Report) {
        self.ok &= other.ok;
        self.violation_count += other.violation_count;
        for v in other.violations {
            if self.violations.len() < MAX_WITNESSES {
                self.violations.push(v);
            }
        }
        self.notes.extend(other.notes);
    }

    /// Merges `other`, prefixing each of its rule names.
    pub fn merge_prefixed(&mut self, prefix: &str, other: Report) {
        let renamed = Report {
            violations: other
                .violations
                .into_iter()
                .map(|v| Violation {
                    rule: format!("{prefix}{}", v.rule),
                    ..v
                })
                .collect(),
            ..other
        };
        self.merge(renamed);
    }

    /// Records one violation per argument tuple where `lhs` and `rhs` differ.
    pub fn compare(&mut self, rule: &str, lhs: &Tensor, rhs: &Tensor) {
        let diff = lhs.sub(rhs);
        for args in diff.nonzero_arg_tuples() {
            let l = lhs.column(&args);
            let r = rhs.column(&args);
            self.push(
                rule,
                args,
                format!("lhs {} vs rhs {}", fmt_vec(&l), fmt_vec(&r)),
            );
        }
    }

    /// Records one violation per argument tuple where `t` is nonzero.
    pub fn require_zero(&mut self, rule: &str, t: &Tensor) {
        for args in t.nonzero_arg_tuples() {
            let v = t.column(&args);
            self.push(rule, args, format!("defect {}", fmt_vec(&v)));
        }
    }

    pub fn first_rule(&self) -> Option<&str> {
        self.violations.first().map(|v| v.rule.as_str())
    }

    pub fn has_rule(&self, rule: &str) -> bool {
        self.violations.iter().any(|v| v.rule == rule)
    }
}

pub(crate) fn fmt_vec(v: &[crate::Rational]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(", "))
}
