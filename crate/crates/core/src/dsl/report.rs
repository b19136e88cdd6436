//! Structured execution reports and the nondiffeomorphism certificate.

use crate::ledger::InvariantLedger;
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone)]
pub struct StepRecord {
    pub index: usize,
    pub line: usize,
    pub text: String,
    pub ledger: InvariantLedger,
    pub sw_summary: String,
    pub details: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct AssertionRecord {
    pub line: usize,
    pub description: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FreedmanOutcome {
    Type(i64, i64),
    NotDetermined(String),
}

impl fmt::Display for FreedmanOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FreedmanOutcome::Type(a, b) => write!(f, "{a} CP^2 # {b} -CP^2  [({a}, {b})]"),
            FreedmanOutcome::NotDetermined(reason) => write!(f, "not determined: {reason}"),
        }
    }
}

/// Deterministic execution record: identical script and parameter produce a
/// byte-identical rendering.
#[derive(Debug, Clone)]
pub struct Report {
    pub script_name: String,
    pub n: i64,
    pub steps: Vec<StepRecord>,
    pub final_ledger: InvariantLedger,
    pub freedman: FreedmanOutcome,
    /// Expanded final basic classes (formatted, coefficient), present when
    /// the final function is small; always sorted.
    pub final_classes: Vec<(String, i64)>,
    pub final_class_count: u128,
    pub final_sw: String,
    /// Sorted multiset of |coefficient| over the final basic classes.
    pub sw_abs_values: Vec<i64>,
    pub certificates: Vec<String>,
    pub notes: Vec<String>,
    pub assertions: Vec<AssertionRecord>,
}

impl Report {
    pub fn label(&self) -> String {
        format!("{} (n = {})", self.script_name, self.n)
    }

    pub fn assertions_passed(&self) -> usize {
        self.assertions.iter().filter(|a| a.passed).count()
    }

    pub fn assertions_failed(&self) -> usize {
        self.assertions.iter().filter(|a| !a.passed).count()
    }

    pub fn all_assertions_pass(&self) -> bool {
        self.assertions_failed() == 0
    }

    /// The rbd-order-insensitive final state: ledger, homeomorphism type,
    /// basic classes with values, and the structured key-value block.
    /// Pipelines that differ only in blow-down order agree here byte for
    /// byte.
    pub fn final_section(&self) -> String {
        let mut out = String::new();
        let push = |out: &mut String, s: String| {
            out.push_str(&s);
            out.push('\n');
        };
        push(&mut out, format!("ledger: {}", self.final_ledger));
        push(&mut out, format!("homeomorphism type: {}", self.freedman));
        push(
            &mut out,
            format!("basic classes ({} terms): {}", self.final_class_count, self.final_sw),
        );
        for (cls, coeff) in &self.final_classes {
            push(&mut out, format!("  SW({cls}) = {coeff}"));
        }
        if !self.sw_abs_values.is_empty() {
            let vals: Vec<String> =
                self.sw_abs_values.iter().map(|v| v.to_string()).collect();
            push(&mut out, format!("|SW| multiset: {{{}}}", vals.join(", ")));
        }
        out.push_str(&self.key_values());
        out
    }

    fn key_values(&self) -> String {
        let mut out = String::new();
        let mut kv = |k: &str, v: String| {
            out.push_str(&format!("{k}: {v}\n"));
        };
        kv("final.e", self.final_ledger.e.to_string());
        kv("final.sigma", self.final_ledger.sigma.to_string());
        kv("final.b2plus", self.final_ledger.b2_plus.to_string());
        kv("final.b2minus", self.final_ledger.b2_minus.to_string());
        kv("final.pi1", self.final_ledger.pi1.to_string());
        kv("final.parity", self.final_ledger.parity.to_string());
        kv(
            "final.freedman",
            match &self.freedman {
                FreedmanOutcome::Type(a, b) => format!("({a}, {b})"),
                FreedmanOutcome::NotDetermined(_) => "none".to_string(),
            },
        );
        kv("final.basic_class_count", self.final_class_count.to_string());
        let vals: Vec<String> = self.sw_abs_values.iter().map(|v| v.to_string()).collect();
        kv("final.sw_values", format!("[{}]", vals.join(", ")));
        out
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let bar = "=".repeat(72);
        out.push_str(&format!("{bar}\npipeline: {}\n{bar}\n", self.label()));
        for step in &self.steps {
            out.push_str(&format!(
                "step {:>3}  [line {:>3}]  {}\n",
                step.index, step.line, step.text
            ));
            out.push_str(&format!("          ledger {}\n", step.ledger));
            out.push_str(&format!("          SW = {}\n", step.sw_summary));
            for d in &step.details {
                out.push_str(&format!("          | {d}\n"));
            }
        }
        out.push_str(&format!("{}\nfinal state\n{}\n", "-".repeat(72), "-".repeat(72)));
        out.push_str(&self.final_section());
        for c in &self.certificates {
            out.push_str(&format!("certificate: {c}\n"));
        }
        for n in &self.notes {
            out.push_str(&format!("note: {n}\n"));
        }
        for a in &self.assertions {
            let status = if a.passed { "pass" } else { "FAIL" };
            let detail = if a.detail.is_empty() {
                String::new()
            } else {
                format!("  ({})", a.detail)
            };
            out.push_str(&format!("assert {status}: {}{detail}\n", a.description));
        }
        out.push_str(&format!(
            "assertions: {} passed, {} failed\n",
            self.assertions_passed(),
            self.assertions_failed()
        ));
        out
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

/// Partition of reports by basic-class count and the multiset of final
/// |SW| values. Reports in distinct groups are certified pairwise
/// nondiffeomorphic; members of a shared group are not distinguished by
/// these invariants.
#[derive(Debug, Clone)]
pub struct NondiffeoPartition {
    pub groups: Vec<((u128, Vec<i64>), Vec<String>)>,
}

impl NondiffeoPartition {
    pub fn distinct_groups(&self) -> usize {
        self.groups.len()
    }

    /// |SW| multisets in group order (convenience for tests).
    pub fn multisets(&self) -> Vec<&[i64]> {
        self.groups.iter().map(|((_, m), _)| m.as_slice()).collect()
    }
}

pub fn nondiffeo_certificate(reports: &[&Report]) -> NondiffeoPartition {
    let mut by_key: BTreeMap<(u128, Vec<i64>), Vec<String>> = BTreeMap::new();
    for r in reports {
        by_key
            .entry((r.final_class_count, r.sw_abs_values.clone()))
            .or_default()
            .push(r.label());
    }
    NondiffeoPartition { groups: by_key.into_iter().collect() }
}

impl fmt::Display for NondiffeoPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "nondiffeomorphism certificate")?;
        for (i, ((count, multiset), members)) in self.groups.iter().enumerate() {
            let vals = if multiset.is_empty() {
                format!("unexpanded, {count} terms")
            } else {
                multiset
                    .iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join(", ")
            };
            writeln!(f, "  group {}: |SW| = {{{vals}}}  <- {}", i + 1, members.join("; "))?;
            if members.len() > 1 {
                writeln!(f, "           not distinguished within this group")?;
            }
        }
        writeln!(
            f,
            "  {} distinct groups: members of different groups are pairwise nondiffeomorphic",
            self.groups.len()
        )
    }
}
