//! Lattice dataset files: generator declarations with Gram rows, class
//! definitions, and embedded-configuration declarations.
//!
//! Grammar (line-oriented, `#` comments):
//!
//! ```text
//! generators   <name> ...
//! exceptionals <name | name..name> ...
//! gram <name> = [<name>:<int> ...]
//! class <name> = <combination>
//! config <name> [pq=(p, q)] plumbing=(w[^k], ...) spheres=[name, ...]
//! ```
//!
//! Generator and gram lines must precede class lines; classes must be
//! declared before they are referenced.

use super::ast::{Atom, ClassExpr, ConfigDecl};
use super::lex::tokenize_line;
use super::parse::{parse_class_expr, parse_config_decl, validate_config_shape, Cursor, ParseError};
use crate::lattice::{AmbientLattice, Class, EmbeddedConfiguration, LatticeBuilder, LatticeError};
use crate::plumbing::LinearPlumbing;
use std::collections::BTreeMap;
use std::sync::Arc;

#[derive(Debug, Clone)]
pub struct Dataset {
    pub lattice: Arc<AmbientLattice>,
    pub classes: BTreeMap<String, Class>,
    pub configs: BTreeMap<String, ConfigDecl>,
}

impl Dataset {
    /// Materialize a declared configuration against this dataset's lattice.
    pub fn resolve_config(&self, decl: &ConfigDecl) -> Result<EmbeddedConfiguration, LatticeError> {
        let weights = decl.expanded_weights();
        let plumbing = match decl.pq {
            Some((p, q)) => LinearPlumbing { weights, source: Some((p, q)) },
            None => LinearPlumbing::from_weights(weights),
        };
        let spheres: Vec<Class> = decl
            .sphere_names
            .iter()
            .map(|nm| self.class_or_generator(nm))
            .collect::<Result<_, _>>()?;
        EmbeddedConfiguration::new(&decl.name, plumbing, spheres, self.lattice.clone())
    }

    pub fn class_or_generator(&self, name: &str) -> Result<Class, LatticeError> {
        if let Some(c) = self.classes.get(name) {
            return Ok(c.clone());
        }
        Ok(self.lattice.unit_class(self.lattice.index_of(name)?))
    }
}

/// Evaluate a class expression over a lattice and the classes in scope.
pub fn eval_class_expr(
    expr: &ClassExpr,
    lattice: &AmbientLattice,
    classes: &BTreeMap<String, Class>,
) -> Result<Class, String> {
    let mut acc = lattice.zero_class();
    for (coeff, atom) in &expr.terms {
        match atom {
            Atom::Name(name) => {
                if let Some(c) = classes.get(name) {
                    acc.add_multiple(*coeff, c);
                } else {
                    let idx = lattice
                        .index_of(name)
                        .map_err(|_| format!("undeclared identifier `{name}`"))?;
                    acc.coords[idx] += coeff;
                }
            }
            Atom::Range(a, b) => {
                for idx in expand_range(a, b, lattice)? {
                    acc.coords[idx] += coeff;
                }
            }
        }
    }
    Ok(acc)
}

/// `E1..E24` style range over a numeric-suffixed generator family.
fn expand_range(a: &str, b: &str, lattice: &AmbientLattice) -> Result<Vec<usize>, String> {
    let split = |s: &str| -> Option<(String, u64)> {
        let digits = s.chars().rev().take_while(|c| c.is_ascii_digit()).count();
        if digits == 0 {
            return None;
        }
        let (prefix, num) = s.split_at(s.len() - digits);
        Some((prefix.to_string(), num.parse().ok()?))
    };
    let (pa, na) = split(a).ok_or_else(|| format!("range start `{a}` has no numeric suffix"))?;
    let (pb, nb) = split(b).ok_or_else(|| format!("range end `{b}` has no numeric suffix"))?;
    if pa != pb || na > nb {
        return Err(format!("invalid range `{a}..{b}`"));
    }
    (na..=nb)
        .map(|i| {
            let name = format!("{pa}{i}");
            lattice
                .index_of(&name)
                .map_err(|_| format!("range member `{name}` is not a generator"))
        })
        .collect()
}

/// Names from an `exceptionals` list entry: a bare name or `A..B`.
fn range_names(a: &str, b: &str) -> Result<Vec<String>, String> {
    let split = |s: &str| -> Option<(String, u64)> {
        let digits = s.chars().rev().take_while(|c| c.is_ascii_digit()).count();
        if digits == 0 {
            return None;
        }
        let (prefix, num) = s.split_at(s.len() - digits);
        Some((prefix.to_string(), num.parse().ok()?))
    };
    let (pa, na) = split(a).ok_or_else(|| format!("range start `{a}` has no numeric suffix"))?;
    let (pb, nb) = split(b).ok_or_else(|| format!("range end `{b}` has no numeric suffix"))?;
    if pa != pb || na > nb {
        return Err(format!("invalid range `{a}..{b}`"));
    }
    Ok((na..=nb).map(|i| format!("{pa}{i}")).collect())
}

pub fn parse_dataset(text: &str) -> Result<Dataset, ParseError> {
    enum Phase {
        Generators(LatticeBuilder),
        Classes(Arc<AmbientLattice>),
    }
    let mut phase = Phase::Generators(LatticeBuilder::new());
    let mut classes: BTreeMap<String, Class> = BTreeMap::new();
    let mut configs: BTreeMap<String, ConfigDecl> = BTreeMap::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let toks = tokenize_line(line, raw)
            .map_err(|e| ParseError::new(e.line, e.col, e.msg))?;
        if toks.is_empty() {
            continue;
        }
        let mut cur = Cursor::new(toks, line);
        let head = cur.ident()?;
        let perr = |msg: String| ParseError::new(line, 1, msg);
        match head.as_str() {
            "generators" | "exceptionals" => {
                let Phase::Generators(builder) = &mut phase else {
                    return Err(perr("generator declarations must precede classes".into()));
                };
                let exceptional = head == "exceptionals";
                loop {
                    let name = cur.ident()?;
                    let names = if matches!(cur.peek(), Some(super::lex::Tok::DotDot)) {
                        cur.next();
                        let end = cur.ident()?;
                        if !exceptional {
                            return Err(perr("ranges are only allowed for exceptionals".into()));
                        }
                        range_names(&name, &end).map_err(perr)?
                    } else {
                        vec![name]
                    };
                    for nm in names {
                        let res = if exceptional {
                            builder.exceptional(&nm)
                        } else {
                            builder.generator(&nm)
                        };
                        res.map_err(|e| perr(e.to_string()))?;
                    }
                    if cur.done() {
                        break;
                    }
                }
            }
            "gram" => {
                let Phase::Generators(builder) = &mut phase else {
                    return Err(perr("gram rows must precede classes".into()));
                };
                let name = cur.ident()?;
                cur.expect(super::lex::Tok::Eq)?;
                while !cur.done() {
                    let other = cur.ident()?;
                    cur.expect(super::lex::Tok::Colon)?;
                    let v = cur.int()?;
                    builder
                        .pairing(&name, &other, v)
                        .map_err(|e| perr(e.to_string()))?;
                }
            }
            "class" => {
                if let Phase::Generators(builder) = phase {
                    phase = Phase::Classes(Arc::new(builder.build()));
                }
                let Phase::Classes(lattice) = &phase else { unreachable!() };
                let name = cur.ident()?;
                cur.expect(super::lex::Tok::Eq)?;
                let expr = parse_class_expr(&mut cur)?;
                let cls = eval_class_expr(&expr, lattice, &classes).map_err(perr)?;
                if lattice.index_of(&name).is_ok() || classes.contains_key(&name) {
                    return Err(perr(format!("name `{name}` already declared")));
                }
                classes.insert(name, cls);
            }
            "config" => {
                if let Phase::Generators(builder) = phase {
                    phase = Phase::Classes(Arc::new(builder.build()));
                }
                let Phase::Classes(lattice) = &phase else { unreachable!() };
                let decl = parse_config_decl(&mut cur)?;
                for s in &decl.sphere_names {
                    if !classes.contains_key(s) && lattice.index_of(s).is_err() {
                        return Err(perr(format!("undeclared sphere class `{s}`")));
                    }
                }
                validate_config_shape(&decl).map_err(perr)?;
                if configs.contains_key(&decl.name) {
                    return Err(perr(format!("config `{}` already declared", decl.name)));
                }
                configs.insert(decl.name.clone(), decl);
            }
            other => return Err(perr(format!("unknown dataset line `{other}`"))),
        }
        cur.end()?;
    }

    let lattice = match phase {
        Phase::Generators(builder) => Arc::new(builder.build()),
        Phase::Classes(lattice) => lattice,
    };
    Ok(Dataset { lattice, classes, configs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Validation;

    const SMALL: &str = "
# a toy dataset
generators T S
gram T = S:1
gram S = S:-2
exceptionals E1..E4

class twoE = 2E1 - E2
class chain = E1..E3

config C21 pq=(2, 1) plumbing=(-4) spheres=[fourE]
";

    // fourE is referenced before declaration above; fix in a valid variant
    const VALID: &str = "
generators T S
gram T = S:1
gram S = S:-2
exceptionals E1..E4
class fourE = E1 - E2 - E3 - E4
config C21 pq=(2, 1) plumbing=(-4) spheres=[fourE]
";

    #[test]
    fn parse_valid_dataset() {
        let ds = parse_dataset(VALID).unwrap();
        assert_eq!(ds.lattice.rank(), 6);
        let four = &ds.classes["fourE"];
        assert_eq!(ds.lattice.square(four).unwrap(), -4);
        let cfg = ds.resolve_config(&ds.configs["C21"]).unwrap();
        assert_eq!(cfg.validate_embedding().unwrap(), Validation::Ok);
        assert_eq!(cfg.plumbing.source, Some((2, 1)));
    }

    #[test]
    fn use_before_declaration_is_rejected() {
        assert!(parse_dataset(SMALL).is_err());
    }

    #[test]
    fn range_expansion() {
        let ds = parse_dataset(VALID).unwrap();
        let expr = ClassExpr {
            terms: vec![(1, Atom::Range("E1".into(), "E4".into()))],
        };
        let cls = eval_class_expr(&expr, &ds.lattice, &ds.classes).unwrap();
        assert_eq!(ds.lattice.square(&cls).unwrap(), -4);
        assert!(expand_range("E1", "T", &ds.lattice).is_err());
        assert!(expand_range("E4", "E1", &ds.lattice).is_err());
    }

    #[test]
    fn pq_mismatch_is_rejected() {
        let bad = "
exceptionals E1..E4
class fourE = E1 - E2 - E3 - E4
config C21 pq=(2, 1) plumbing=(-5) spheres=[fourE]
";
        assert!(parse_dataset(bad).is_err());
    }

    #[test]
    fn gram_after_class_is_rejected() {
        let bad = "
generators T S
class x = T
gram S = S:-2
";
        assert!(parse_dataset(bad).is_err());
    }
}
