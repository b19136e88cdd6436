//! Pipeline executor: runs a validated script against a dataset for one
//! value of the twist parameter, producing a deterministic report.

use super::ast::*;
use super::dataset::{eval_class_expr, Dataset};
use super::parse::{validate, ParseError};
use super::report::{AssertionRecord, FreedmanOutcome, Report, StepRecord};
use crate::lattice::{cross_pairings, Class, EmbeddedConfiguration, LatticeError, Validation};
use crate::ledger::{coprimality_certificate, FormParity, InvariantLedger, LedgerError, Pi1Status};
use crate::rbd::{descend, DescentOutcome, DescentRow, Pattern, RbdError};
use crate::swcalc::{alexander_twist, AlexanderPolynomial, SwError, SwFunction};
use std::collections::BTreeMap;

#[derive(Debug, Clone, thiserror::Error)]
#[error("step {step} (line {line}): {kind}")]
pub struct ExecError {
    pub step: usize,
    pub line: usize,
    pub kind: ExecErrorKind,
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum ExecErrorKind {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Sw(#[from] SwError),
    #[error(transparent)]
    Rbd(#[from] RbdError),
    #[error(transparent)]
    Ledger(#[from] LedgerError),
    #[error("{0}")]
    Invalid(String),
}

struct ExecState {
    dataset: Dataset,
    classes: BTreeMap<String, Class>,
    configs: BTreeMap<String, ConfigDecl>,
    resolved: BTreeMap<String, EmbeddedConfiguration>,
    sw: SwFunction,
    ledger: InvariantLedger,
    links: Vec<(String, String, String)>,
    blown_down: Vec<(String, u64)>,
    pre_rbd_pi1: Option<Pi1Status>,
    certificates: Vec<String>,
    notes: Vec<String>,
    assertions: Vec<AssertionRecord>,
}

impl ExecState {
    fn config(&mut self, name: &str) -> Result<EmbeddedConfiguration, ExecErrorKind> {
        if let Some(cfg) = self.resolved.get(name) {
            return Ok(cfg.clone());
        }
        let decl = self
            .configs
            .get(name)
            .ok_or_else(|| ExecErrorKind::Invalid(format!("undeclared config `{name}`")))?
            .clone();
        let snapshot = Dataset {
            lattice: self.dataset.lattice.clone(),
            classes: self.classes.clone(),
            configs: BTreeMap::new(),
        };
        let cfg = snapshot.resolve_config(&decl)?;
        self.resolved.insert(name.to_string(), cfg.clone());
        Ok(cfg)
    }

    fn class(&self, name: &str) -> Result<Class, ExecErrorKind> {
        if let Some(c) = self.classes.get(name) {
            return Ok(c.clone());
        }
        let idx = self.dataset.lattice.index_of(name)?;
        Ok(self.dataset.lattice.unit_class(idx))
    }
}

/// Execute a script with the twist parameter `n` substituted.
pub fn execute(script: &Script, dataset: &Dataset, n: i64) -> Result<Report, ExecError> {
    validate(script, dataset).map_err(|e| ExecError {
        step: 0,
        line: e.line,
        kind: ExecErrorKind::Parse(e),
    })?;

    let mut st = ExecState {
        classes: dataset.classes.clone(),
        configs: dataset.configs.clone(),
        resolved: BTreeMap::new(),
        sw: SwFunction::k3(dataset.lattice.clone()),
        ledger: InvariantLedger::e2(),
        dataset: dataset.clone(),
        links: Vec::new(),
        blown_down: Vec::new(),
        pre_rbd_pi1: None,
        certificates: Vec::new(),
        notes: Vec::new(),
        assertions: Vec::new(),
    };
    let mut steps = Vec::new();

    for (i, stmt) in script.statements.iter().enumerate() {
        let step_no = i + 1;
        let mut details = Vec::new();
        run_statement(&mut st, stmt, n, &mut details).map_err(|kind| ExecError {
            step: step_no,
            line: stmt.line,
            kind,
        })?;
        st.ledger.check().map_err(|e| ExecError {
            step: step_no,
            line: stmt.line,
            kind: ExecErrorKind::Ledger(e),
        })?;
        if !st.sw.is_symmetric() {
            st.assertions.push(AssertionRecord {
                line: stmt.line,
                description: "SW charge-conjugation symmetry (automatic)".into(),
                passed: false,
                detail: "coefficient map is not symmetric under L -> -L".into(),
            });
        }
        steps.push(StepRecord {
            index: step_no,
            line: stmt.line,
            text: stmt.kind.to_string(),
            ledger: st.ledger,
            sw_summary: st.sw.to_string(),
            details,
        });
    }

    let freedman = match st.ledger.freedman_type() {
        Ok((a, b)) => FreedmanOutcome::Type(a, b),
        Err(LedgerError::NotDetermined(reason)) => FreedmanOutcome::NotDetermined(reason),
        Err(e) => {
            return Err(ExecError {
                step: script.statements.len(),
                line: script.statements.last().map_or(1, |s| s.line),
                kind: ExecErrorKind::Ledger(e),
            })
        }
    };

    let final_class_count = st.sw.term_count();
    let (final_classes, sw_abs_values) = if final_class_count <= 1024 {
        let classes = st.sw.basic_classes();
        let mut abs: Vec<i64> = classes.iter().map(|(_, c)| c.abs()).collect();
        abs.sort_unstable();
        let formatted = classes
            .iter()
            .map(|(cls, c)| (dataset.lattice.format_class(cls), *c))
            .collect();
        (formatted, abs)
    } else {
        (Vec::new(), Vec::new())
    };

    Ok(Report {
        script_name: script.name.clone(),
        n,
        steps,
        final_ledger: st.ledger,
        freedman,
        final_classes,
        final_class_count,
        final_sw: st.sw.to_string(),
        sw_abs_values,
        certificates: st.certificates,
        notes: st.notes,
        assertions: st.assertions,
    })
}

fn run_statement(
    st: &mut ExecState,
    stmt: &Stmt,
    n: i64,
    details: &mut Vec<String>,
) -> Result<(), ExecErrorKind> {
    match &stmt.kind {
        StmtKind::Start { .. } => {
            st.ledger = InvariantLedger::e2();
            st.sw = SwFunction::k3(st.dataset.lattice.clone());
            Ok(())
        }
        StmtKind::KnotSurgery { fiber, alexander } => {
            let fiber_cls = st.class(fiber)?;
            let delta = match alexander {
                AlexSpec::Twist(expr) => alexander_twist(expr.eval(n))?,
                AlexSpec::Poly(terms) => AlexanderPolynomial::new(terms.iter().copied())?,
            };
            if !delta.is_normalized() {
                st.notes.push(format!(
                    "alexander polynomial {delta} has |Delta(1)| != 1 (line {})",
                    stmt.line
                ));
            }
            details.push(format!("Delta = {delta}"));
            st.sw = st.sw.knot_surgery(&fiber_cls, &delta)?;
            st.ledger = st.ledger.knot_surgery();
            Ok(())
        }
        StmtKind::BlowUp { name, .. } => {
            let idx = st.dataset.lattice.index_of(name)?;
            st.sw = st.sw.blow_up(idx)?;
            st.ledger = st.ledger.blow_up();
            Ok(())
        }
        StmtKind::DeclareClass { name, expr } => {
            let cls = eval_class_expr(expr, &st.dataset.lattice, &st.classes)
                .map_err(ExecErrorKind::Invalid)?;
            details.push(format!(
                "{name} = {} (square {})",
                st.dataset.lattice.format_class(&cls),
                st.dataset.lattice.square(&cls)?
            ));
            st.classes.insert(name.clone(), cls);
            Ok(())
        }
        StmtKind::DeclareConfig(decl) => {
            st.configs.insert(decl.name.clone(), decl.clone());
            Ok(())
        }
        StmtKind::LinkConfigs { a, b, via } => {
            let via_cls = st.class(via)?;
            for name in [a, b] {
                let cfg = st.config(name)?;
                let ends = [0, cfg.len() - 1];
                let meets_end = ends.iter().any(|&i| {
                    st.dataset
                        .lattice
                        .pair(&via_cls, &cfg.spheres[i])
                        .map(|p| p != 0)
                        .unwrap_or(false)
                });
                if !meets_end {
                    return Err(ExecErrorKind::Invalid(format!(
                        "link class `{via}` does not meet an end sphere of `{name}`"
                    )));
                }
            }
            details.push(format!("transverse sphere {via} meets both chains"));
            st.links.push((a.clone(), b.clone(), via.clone()));
            Ok(())
        }
        StmtKind::Rbd { config } => run_rbd(st, config, details),
        StmtKind::AssertLedger { e, sigma, b2_plus, b2_minus } => {
            let l = st.ledger;
            let passed = l.e == *e
                && l.sigma == *sigma
                && l.b2_plus == *b2_plus
                && l.b2_minus == *b2_minus;
            st.assertions.push(AssertionRecord {
                line: stmt.line,
                description: stmt.kind.to_string(),
                passed,
                detail: if passed { String::new() } else { format!("ledger is {l}") },
            });
            Ok(())
        }
        StmtKind::AssertPi1 { status } => {
            let want = match status.as_str() {
                "simply_connected" => Pi1Status::SimplyConnected,
                "h1_zero" => Pi1Status::H1Zero,
                _ => Pi1Status::Unknown,
            };
            let passed = st.ledger.pi1 == want;
            st.assertions.push(AssertionRecord {
                line: stmt.line,
                description: stmt.kind.to_string(),
                passed,
                detail: if passed {
                    String::new()
                } else {
                    format!("pi1 status is {}", st.ledger.pi1)
                },
            });
            Ok(())
        }
        StmtKind::AssertFreedman { cp2, cbar } => {
            let (passed, detail) = match st.ledger.freedman_type() {
                Ok((a, b)) if a == *cp2 && b == *cbar => (true, String::new()),
                Ok((a, b)) => (false, format!("type is ({a}, {b})")),
                Err(e) => (false, e.to_string()),
            };
            st.assertions.push(AssertionRecord {
                line: stmt.line,
                description: stmt.kind.to_string(),
                passed,
                detail,
            });
            Ok(())
        }
        StmtKind::AssertSwCount { count } => {
            let actual = st.sw.term_count();
            let passed = actual == *count;
            st.assertions.push(AssertionRecord {
                line: stmt.line,
                description: stmt.kind.to_string(),
                passed,
                detail: if passed { String::new() } else { format!("count is {actual}") },
            });
            Ok(())
        }
        StmtKind::AssertSwValue { class, coeff } => {
            let cls = st.class(class)?;
            let want = coeff.eval(n);
            let got = st.sw.coefficient(&cls);
            let passed = got == want;
            st.assertions.push(AssertionRecord {
                line: stmt.line,
                description: format!("{} [= {want}]", stmt.kind),
                passed,
                detail: if passed { String::new() } else { format!("coefficient is {got}") },
            });
            Ok(())
        }
        StmtKind::AssertSwSymmetric => {
            let passed = st.sw.is_symmetric();
            st.assertions.push(AssertionRecord {
                line: stmt.line,
                description: stmt.kind.to_string(),
                passed,
                detail: String::new(),
            });
            Ok(())
        }
        StmtKind::AssertEmbedding { config } => {
            let cfg = st.config(config)?;
            let (passed, detail) = match cfg.validate_embedding()? {
                Validation::Ok => (true, String::new()),
                Validation::Mismatch(rows) => {
                    let desc: Vec<String> = rows.iter().take(4).map(|r| r.to_string()).collect();
                    (false, desc.join("; "))
                }
            };
            st.assertions.push(AssertionRecord {
                line: stmt.line,
                description: stmt.kind.to_string(),
                passed,
                detail,
            });
            Ok(())
        }
        StmtKind::AssertDisjoint { a, b } => {
            let ca = st.config(a)?;
            let cb = st.config(b)?;
            let nonzero = cross_pairings(&ca, &cb)?;
            let passed = nonzero.is_empty();
            let detail = if passed {
                String::new()
            } else {
                let desc: Vec<String> = nonzero
                    .iter()
                    .take(4)
                    .map(|(i, j, p)| {
                        format!(
                            "{}.{} . {}.{} = {p}",
                            a,
                            ca.vertex_label(*i),
                            b,
                            cb.vertex_label(*j)
                        )
                    })
                    .collect();
                desc.join("; ")
            };
            st.assertions.push(AssertionRecord {
                line: stmt.line,
                description: stmt.kind.to_string(),
                passed,
                detail,
            });
            Ok(())
        }
    }
}

fn run_rbd(
    st: &mut ExecState,
    config: &str,
    details: &mut Vec<String>,
) -> Result<(), ExecErrorKind> {
    let cfg = st.config(config)?;
    let (p, _) = cfg
        .plumbing
        .source
        .ok_or_else(|| RbdError::MissingProvenance(config.to_string()))?;

    // spheres of configurations blown down earlier must be disjoint
    for (prev, _) in st.blown_down.clone() {
        let prev_cfg = st.config(&prev)?;
        let nonzero = cross_pairings(&prev_cfg, &cfg)?;
        if !nonzero.is_empty() {
            return Err(ExecErrorKind::Invalid(format!(
                "config `{config}` meets already blown-down `{prev}` ({} pairings)",
                nonzero.len()
            )));
        }
    }

    if st.pre_rbd_pi1.is_none() {
        st.pre_rbd_pi1 = Some(st.ledger.pi1);
    }

    let boundary = cfg.plumbing.boundary().map_err(|e| {
        ExecErrorKind::Invalid(format!("config `{config}`: {e}"))
    })?;
    details.push(format!(
        "blow down {} = {} (k = {}, boundary {boundary})",
        config,
        cfg.plumbing.tuple_string(),
        cfg.len()
    ));

    let (sw, rows) = descend(&st.sw, &cfg)?;
    for row in &rows {
        details.push(format_descent_row(st, row));
    }
    let survivors = sw.term_count();
    details.push(format!(
        "surviving basic classes: {survivors} (ambient coordinates; each represents a class of the blown-down manifold)"
    ));
    if survivors <= 16 {
        for (cls, coeff) in sw.basic_classes() {
            details.push(format!(
                "  SW({}) = {coeff}",
                st.dataset.lattice.format_class(&cls)
            ));
        }
    }

    st.sw = sw;
    st.ledger = st.ledger.rational_blow_down(cfg.len())?;
    st.blown_down.push((config.to_string(), p));
    st.notes.push(format!(
        "parity retained as {} across the blow-down of {config} (declared; an odd-square sphere survives outside the configuration)",
        st.ledger.parity
    ));

    // coprimality certificate: every blown-down boundary must be linked to
    // a coprime-order partner that is also blown down
    let covered = st.blown_down.iter().all(|(name, p1)| {
        st.links.iter().any(|(a, b, _)| {
            let partner = if a == name {
                Some(b)
            } else if b == name {
                Some(a)
            } else {
                None
            };
            partner.is_some_and(|other| {
                st.blown_down
                    .iter()
                    .any(|(o, p2)| o == other && coprimality_certificate(*p1, *p2))
            })
        })
    });
    if covered && st.pre_rbd_pi1 == Some(Pi1Status::SimplyConnected) {
        for (a, b, via) in &st.links {
            let pa = st.blown_down.iter().find(|(nm, _)| nm == a).map(|(_, p)| *p);
            let pb = st.blown_down.iter().find(|(nm, _)| nm == b).map(|(_, p)| *p);
            if let (Some(pa), Some(pb)) = (pa, pb) {
                if coprimality_certificate(pa, pb) {
                    let cert = format!(
                        "gcd({}, {}) = 1 for linked pair ({a}, {b}) via {via}",
                        pa * pa,
                        pb * pb
                    );
                    if !st.certificates.contains(&cert) {
                        st.certificates.push(cert);
                    }
                }
            }
        }
        st.ledger = st.ledger.with_pi1(Pi1Status::SimplyConnected);
        details.push(
            "all blown-down boundaries certified coprime; pi1 simply-connected".to_string(),
        );
    } else {
        details.push(format!("pi1 status after blow-down: {}", st.ledger.pi1));
    }
    if st.ledger.parity != FormParity::Odd {
        st.notes.push(format!(
            "blow-down of {config} left parity {} (no odd class declared)",
            st.ledger.parity
        ));
    }
    Ok(())
}

fn format_descent_row(st: &ExecState, row: &DescentRow) -> String {
    let base = st.dataset.lattice.format_class(&row.base);
    let branch = match row.branch {
        Pattern::Plus => "+",
        Pattern::Minus => "-",
        Pattern::Fails => " ",
    };
    match &row.outcome {
        DescentOutcome::Survives { solutions, free_factors } => format!(
            "descent [{branch}] base {base}: {solutions} sign solution(s), {free_factors} free factor(s)"
        ),
        DescentOutcome::Infeasible => {
            format!("descent [{branch}] base {base}: infeasible")
        }
        DescentOutcome::Direct(mode) => {
            format!("descent [{branch}] class {base}: {mode}")
        }
    }
}
