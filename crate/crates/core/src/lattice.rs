//! Ambient second-cohomology model: a finitely generated lattice with an
//! explicit integer Gram pairing, plus embedded sphere configurations
//! validated against their target plumbing shapes.

use crate::matrix::IntMat;
use crate::plumbing::LinearPlumbing;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LatticeError {
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
    #[error("conflicting gram entries for ({0}, {1})")]
    GramConflict(String, String),
    #[error("class has {got} coordinates, lattice has {want} generators")]
    DimensionMismatch { got: usize, want: usize },
    #[error("generator `{0}` is not exceptional (needs square -1, orthogonal to the rest)")]
    NotExceptional(String),
    #[error("configuration has {spheres} sphere classes but the plumbing has {vertices} vertices")]
    SphereCountMismatch { spheres: usize, vertices: usize },
}

/// Named basis with a symmetric integer pairing.
#[derive(Debug, Clone)]
pub struct AmbientLattice {
    names: Vec<String>,
    index: BTreeMap<String, usize>,
    gram: Vec<Vec<i64>>,
}

/// Builder: declare generators first, then fill pairings sparsely
/// (symmetric closure, unset entries are zero).
#[derive(Debug, Default)]
pub struct LatticeBuilder {
    names: Vec<String>,
    index: BTreeMap<String, usize>,
    entries: BTreeMap<(usize, usize), i64>,
    exceptional: Vec<bool>,
}

impl LatticeBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn generator(&mut self, name: &str) -> Result<usize, LatticeError> {
        self.add(name, false)
    }

    /// Exceptional generator: square -1, orthogonal to everything else.
    pub fn exceptional(&mut self, name: &str) -> Result<usize, LatticeError> {
        let i = self.add(name, true)?;
        self.entries.insert((i, i), -1);
        Ok(i)
    }

    fn add(&mut self, name: &str, exc: bool) -> Result<usize, LatticeError> {
        if self.index.contains_key(name) {
            return Err(LatticeError::DuplicateGenerator(name.to_string()));
        }
        let i = self.names.len();
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), i);
        self.exceptional.push(exc);
        Ok(i)
    }

    pub fn pairing(&mut self, a: &str, b: &str, value: i64) -> Result<(), LatticeError> {
        let i = self.lookup(a)?;
        let j = self.lookup(b)?;
        let key = (i.min(j), i.max(j));
        if let Some(&old) = self.entries.get(&key) {
            if old != value {
                return Err(LatticeError::GramConflict(a.to_string(), b.to_string()));
            }
        }
        if (self.exceptional[i] || self.exceptional[j]) && !(i == j && value == -1) {
            let name = if self.exceptional[i] { a } else { b };
            return Err(LatticeError::NotExceptional(name.to_string()));
        }
        self.entries.insert(key, value);
        Ok(())
    }

    fn lookup(&self, name: &str) -> Result<usize, LatticeError> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| LatticeError::UnknownGenerator(name.to_string()))
    }

    pub fn build(self) -> AmbientLattice {
        let n = self.names.len();
        let mut gram = vec![vec![0i64; n]; n];
        for ((i, j), v) in self.entries {
            gram[i][j] = v;
            gram[j][i] = v;
        }
        AmbientLattice { names: self.names, index: self.index, gram }
    }
}

impl AmbientLattice {
    pub fn rank(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Result<usize, LatticeError> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| LatticeError::UnknownGenerator(name.to_string()))
    }

    pub fn gram_entry(&self, i: usize, j: usize) -> i64 {
        self.gram[i][j]
    }

    /// True when generator `i` has square -1 and pairs to zero with every
    /// other generator.
    pub fn is_exceptional(&self, i: usize) -> bool {
        self.gram[i][i] == -1
            && (0..self.rank()).all(|j| j == i || self.gram[i][j] == 0)
    }

    pub fn zero_class(&self) -> Class {
        Class { coords: vec![0; self.rank()] }
    }

    pub fn unit_class(&self, i: usize) -> Class {
        let mut c = self.zero_class();
        c.coords[i] = 1;
        c
    }

    fn check_dim(&self, c: &Class) -> Result<(), LatticeError> {
        if c.coords.len() != self.rank() {
            return Err(LatticeError::DimensionMismatch {
                got: c.coords.len(),
                want: self.rank(),
            });
        }
        Ok(())
    }

    /// Intersection pairing `a^T gram b`.
    pub fn pair(&self, a: &Class, b: &Class) -> Result<i64, LatticeError> {
        self.check_dim(a)?;
        self.check_dim(b)?;
        let mut acc = 0i64;
        for (i, &ai) in a.coords.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            let row = &self.gram[i];
            for (j, &bj) in b.coords.iter().enumerate() {
                if bj != 0 {
                    acc += ai * row[j] * bj;
                }
            }
        }
        Ok(acc)
    }

    pub fn square(&self, a: &Class) -> Result<i64, LatticeError> {
        self.pair(a, a)
    }

    /// `gram * u` as a dense vector; `pair(x, u)` is then a plain dot product.
    pub fn gram_times(&self, u: &Class) -> Result<Vec<i64>, LatticeError> {
        self.check_dim(u)?;
        Ok((0..self.rank())
            .map(|i| {
                u.coords
                    .iter()
                    .enumerate()
                    .filter(|(_, &c)| c != 0)
                    .map(|(j, &c)| self.gram[i][j] * c)
                    .sum()
            })
            .collect())
    }

    pub fn format_class(&self, c: &Class) -> String {
        let mut out = String::new();
        for (i, &v) in c.coords.iter().enumerate() {
            if v == 0 {
                continue;
            }
            let name = &self.names[i];
            if out.is_empty() {
                match v {
                    1 => out.push_str(name),
                    -1 => out = format!("-{name}"),
                    _ => out = format!("{v}{name}"),
                }
            } else {
                let (sign, mag) = if v < 0 { ("-", -v) } else { ("+", v) };
                out.push_str(&format!(" {sign} "));
                if mag != 1 {
                    out.push_str(&mag.to_string());
                }
                out.push_str(name);
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

/// Integer coordinate vector over an ambient lattice's generators.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Class {
    pub coords: Vec<i64>,
}

impl Class {
    pub fn from_coords(coords: Vec<i64>) -> Self {
        Class { coords }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &Class) -> Class {
        Class {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn scaled(&self, k: i64) -> Class {
        Class { coords: self.coords.iter().map(|c| c * k).collect() }
    }

    pub fn neg(&self) -> Class {
        self.scaled(-1)
    }

    pub fn add_multiple(&mut self, k: i64, other: &Class) {
        for (a, b) in self.coords.iter_mut().zip(&other.coords) {
            *a += k * b;
        }
    }
}

/// One sphere class per plumbing vertex, in diagram order.
#[derive(Debug, Clone)]
pub struct EmbeddedConfiguration {
    pub name: String,
    pub plumbing: LinearPlumbing,
    pub spheres: Vec<Class>,
    pub lattice: Arc<AmbientLattice>,
}

/// Result of checking a configuration's pairwise Gram against its plumbing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Validation {
    Ok,
    Mismatch(Vec<PairMismatch>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairMismatch {
    pub i: usize,
    pub j: usize,
    pub expected: i64,
    pub got: i64,
}

impl fmt::Display for PairMismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}): expected {}, got {}",
            self.i + 1,
            self.j + 1,
            self.expected,
            self.got
        )
    }
}

impl EmbeddedConfiguration {
    pub fn new(
        name: &str,
        plumbing: LinearPlumbing,
        spheres: Vec<Class>,
        lattice: Arc<AmbientLattice>,
    ) -> Result<Self, LatticeError> {
        if spheres.len() != plumbing.len() {
            return Err(LatticeError::SphereCountMismatch {
                spheres: spheres.len(),
                vertices: plumbing.len(),
            });
        }
        for s in &spheres {
            if s.coords.len() != lattice.rank() {
                return Err(LatticeError::DimensionMismatch {
                    got: s.coords.len(),
                    want: lattice.rank(),
                });
            }
        }
        Ok(EmbeddedConfiguration {
            name: name.to_string(),
            plumbing,
            spheres,
            lattice,
        })
    }

    pub fn len(&self) -> usize {
        self.spheres.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spheres.is_empty()
    }

    pub fn intersection_matrix(&self) -> IntMat {
        self.plumbing.intersection_matrix()
    }

    /// Compare the full pairwise Gram of the sphere classes against the
    /// plumbing's intersection matrix. A mismatch is a report, not an error.
    pub fn validate_embedding(&self) -> Result<Validation, LatticeError> {
        let q = self.intersection_matrix();
        let mut bad = Vec::new();
        for i in 0..self.len() {
            for j in i..self.len() {
                let got = self.lattice.pair(&self.spheres[i], &self.spheres[j])?;
                let expected = i64::try_from(&q[(i, j)]).expect("small weight");
                if got != expected {
                    bad.push(PairMismatch { i, j, expected, got });
                }
            }
        }
        Ok(if bad.is_empty() { Validation::Ok } else { Validation::Mismatch(bad) })
    }

    /// Pairing vector v_i = L . u_i in diagram order.
    pub fn pairing_vector(&self, l: &Class) -> Result<Vec<i64>, LatticeError> {
        self.spheres.iter().map(|u| self.lattice.pair(l, u)).collect()
    }

    /// 1-based vertex label in the diagram convention: the leftmost vertex
    /// is u_k, the rightmost u_1.
    pub fn vertex_label(&self, position: usize) -> String {
        format!("u{}", self.len() - position)
    }
}

/// All cross pairings between two configurations (disjointness check).
pub fn cross_pairings(
    a: &EmbeddedConfiguration,
    b: &EmbeddedConfiguration,
) -> Result<Vec<(usize, usize, i64)>, LatticeError> {
    let mut nonzero = Vec::new();
    for (i, u) in a.spheres.iter().enumerate() {
        for (j, v) in b.spheres.iter().enumerate() {
            let p = a.lattice.pair(u, v)?;
            if p != 0 {
                nonzero.push((i, j, p));
            }
        }
    }
    Ok(nonzero)
}
