//! Statement AST for pipeline scripts, with printers whose output parses
//! back to the same tree.

use std::fmt;

/// Parsed pipeline script.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Script {
    pub name: String,
    pub statements: Vec<Stmt>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stmt {
    pub line: usize,
    pub kind: StmtKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StmtKind {
    Start { model: String, dataset: Option<String> },
    KnotSurgery { fiber: String, alexander: AlexSpec },
    BlowUp { name: String, at: Option<String> },
    DeclareClass { name: String, expr: ClassExpr },
    DeclareConfig(ConfigDecl),
    LinkConfigs { a: String, b: String, via: String },
    Rbd { config: String },
    AssertLedger { e: i64, sigma: i64, b2_plus: i64, b2_minus: i64 },
    AssertPi1 { status: String },
    AssertFreedman { cp2: i64, cbar: i64 },
    AssertSwCount { count: u128 },
    AssertSwValue { class: String, coeff: NExpr },
    AssertSwSymmetric,
    AssertEmbedding { config: String },
    AssertDisjoint { a: String, b: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigDecl {
    pub name: String,
    pub pq: Option<(u64, u64)>,
    /// Run-length encoded weights as written, e.g. (-18, -19, -2^14, ...).
    pub weights: Vec<(i64, usize)>,
    pub sphere_names: Vec<String>,
}

impl ConfigDecl {
    pub fn expanded_weights(&self) -> Vec<i64> {
        self.weights
            .iter()
            .flat_map(|&(w, n)| std::iter::repeat(w).take(n))
            .collect()
    }
}

/// Integer combination of generators and previously declared classes.
/// `E1..E24` sums a numeric-suffixed generator family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassExpr {
    pub terms: Vec<(i64, Atom)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Atom {
    Name(String),
    Range(String, String),
}

impl fmt::Display for ClassExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (coeff, atom)) in self.terms.iter().enumerate() {
            let mag = coeff.abs();
            if i == 0 {
                if *coeff < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if *coeff < 0 { "-" } else { "+" })?;
            }
            if mag != 1 {
                write!(f, "{mag}")?;
            }
            match atom {
                Atom::Name(n) => write!(f, "{n}")?,
                Atom::Range(a, b) => write!(f, "{a}..{b}")?,
            }
        }
        if self.terms.is_empty() {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Alexander polynomial argument of a knot surgery statement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AlexSpec {
    /// `twist(<expr>)`: the twist-knot family, n substituted at run time.
    Twist(NExpr),
    /// `poly(d1:c1, d2:c2, ...)`: explicit symmetric Laurent coefficients.
    Poly(Vec<(i64, i64)>),
}

impl fmt::Display for AlexSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlexSpec::Twist(e) => write!(f, "twist({e})"),
            AlexSpec::Poly(terms) => {
                let parts: Vec<String> =
                    terms.iter().map(|(d, c)| format!("{d}:{c}")).collect();
                write!(f, "poly({})", parts.join(", "))
            }
        }
    }
}

/// Small integer expressions over the run parameter `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NExpr {
    Int(i64),
    N,
    Neg(Box<NExpr>),
    Add(Box<NExpr>, Box<NExpr>),
    Sub(Box<NExpr>, Box<NExpr>),
    Mul(Box<NExpr>, Box<NExpr>),
    Pow(Box<NExpr>, u32),
}

impl NExpr {
    pub fn eval(&self, n: i64) -> i64 {
        match self {
            NExpr::Int(v) => *v,
            NExpr::N => n,
            NExpr::Neg(e) => -e.eval(n),
            NExpr::Add(a, b) => a.eval(n) + b.eval(n),
            NExpr::Sub(a, b) => a.eval(n) - b.eval(n),
            NExpr::Mul(a, b) => a.eval(n) * b.eval(n),
            NExpr::Pow(a, k) => a.eval(n).pow(*k),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            NExpr::Add(..) | NExpr::Sub(..) => 1,
            NExpr::Mul(..) => 2,
            NExpr::Neg(..) => 3,
            NExpr::Pow(..) => 4,
            NExpr::Int(_) | NExpr::N => 5,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let p = self.precedence();
        if p < min {
            write!(f, "(")?;
        }
        match self {
            NExpr::Int(v) => write!(f, "{v}")?,
            NExpr::N => write!(f, "n")?,
            NExpr::Neg(e) => {
                write!(f, "-")?;
                e.fmt_prec(f, 3)?;
            }
            NExpr::Add(a, b) => {
                a.fmt_prec(f, 1)?;
                write!(f, " + ")?;
                b.fmt_prec(f, 2)?;
            }
            NExpr::Sub(a, b) => {
                a.fmt_prec(f, 1)?;
                write!(f, " - ")?;
                b.fmt_prec(f, 2)?;
            }
            NExpr::Mul(a, b) => {
                a.fmt_prec(f, 2)?;
                write!(f, "*")?;
                b.fmt_prec(f, 3)?;
            }
            NExpr::Pow(a, k) => {
                a.fmt_prec(f, 5)?;
                write!(f, "^{k}")?;
            }
        }
        if p < min {
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Display for NExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

impl fmt::Display for ConfigDecl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "config {}", self.name)?;
        if let Some((p, q)) = self.pq {
            write!(f, " pq=({p}, {q})")?;
        }
        let weights: Vec<String> = self
            .weights
            .iter()
            .map(|&(w, n)| if n >= 2 { format!("{w}^{n}") } else { format!("{w}") })
            .collect();
        write!(f, " plumbing=({})", weights.join(", "))?;
        write!(f, " spheres=[{}]", self.sphere_names.join(", "))
    }
}

impl fmt::Display for StmtKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StmtKind::Start { model, dataset } => {
                write!(f, "start {model}")?;
                if let Some(d) = dataset {
                    write!(f, " dataset=\"{d}\"")?;
                }
                Ok(())
            }
            StmtKind::KnotSurgery { fiber, alexander } => {
                write!(f, "knot_surgery fiber={fiber} alexander={alexander}")
            }
            StmtKind::BlowUp { name, at } => {
                write!(f, "blowup {name}")?;
                if let Some(d) = at {
                    write!(f, " at=\"{d}\"")?;
                }
                Ok(())
            }
            StmtKind::DeclareClass { name, expr } => {
                write!(f, "declare_class {name} = {expr}")
            }
            StmtKind::DeclareConfig(decl) => write!(f, "declare_{decl}"),
            StmtKind::LinkConfigs { a, b, via } => {
                write!(f, "link_configs {a} {b} via={via}")
            }
            StmtKind::Rbd { config } => write!(f, "rbd {config}"),
            StmtKind::AssertLedger { e, sigma, b2_plus, b2_minus } => write!(
                f,
                "assert_ledger e={e} sigma={sigma} b2plus={b2_plus} b2minus={b2_minus}"
            ),
            StmtKind::AssertPi1 { status } => write!(f, "assert_pi1 {status}"),
            StmtKind::AssertFreedman { cp2, cbar } => {
                write!(f, "assert_freedman cp2={cp2} cbar={cbar}")
            }
            StmtKind::AssertSwCount { count } => write!(f, "assert_sw_count {count}"),
            StmtKind::AssertSwValue { class, coeff } => {
                write!(f, "assert_sw_value class={class} coeff={coeff}")
            }
            StmtKind::AssertSwSymmetric => write!(f, "assert_sw_symmetric"),
            StmtKind::AssertEmbedding { config } => {
                write!(f, "assert_embedding {config}")
            }
            StmtKind::AssertDisjoint { a, b } => write!(f, "assert_disjoint {a} {b}"),
        }
    }
}

impl fmt::Display for Script {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for stmt in &self.statements {
            writeln!(f, "{}", stmt.kind)?;
        }
        Ok(())
    }
}
