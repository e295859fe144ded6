//! Dependence maps stored as Skolem tables.

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::syntax::{QuantPrefix, Quantifier};

/// Values of the prefix variables, in prefix order, drawn from `0..|D|`.
pub type Valuation = Vec<usize>;

/// Default bound on the number of maps an enumeration may produce.
pub const DEFAULT_BOUND: u64 = 1 << 20;

/// Precomputed layout of a prefix: where each existential reads its inputs.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Layout {
    pub prefix: QuantPrefix,
    pub domain: usize,
    /// Prefix positions of the universal variables.
    pub universals: Vec<usize>,
    /// Prefix positions of the existential variables.
    pub existentials: Vec<usize>,
    /// For each existential (in order), the prefix positions it depends on.
    pub deps: Vec<Vec<usize>>,
    /// For each existential, the number of table entries `|D|^|dep|`.
    pub table_sizes: Vec<usize>,
}

impl Layout {
    pub fn new(prefix: &QuantPrefix, domain: usize) -> Result<Layout> {
        if domain == 0 {
            return Err(Error::Validation("empty domain".into()));
        }
        let entries = prefix.entries();
        let mut universals = Vec::new();
        let mut existentials = Vec::new();
        let mut deps = Vec::new();
        let mut table_sizes = Vec::new();
        for (i, (q, _)) in entries.iter().enumerate() {
            match q {
                Quantifier::Forall => universals.push(i),
                Quantifier::Exists => {
                    existentials.push(i);
                    let d: Vec<usize> = universals.clone();
                    let size = checked_pow(domain, d.len()).ok_or_else(|| {
                        Error::DomainTooLarge {
                            count: format!("{domain}^{}", d.len()),
                            bound: DEFAULT_BOUND,
                        }
                    })?;
                    table_sizes.push(size);
                    deps.push(d);
                }
            }
        }
        Ok(Layout {
            prefix: prefix.clone(),
            domain,
            universals,
            existentials,
            deps,
            table_sizes,
        })
    }

    /// Number of universal valuations.
    pub fn n_universal_valuations(&self) -> usize {
        self.domain.pow(self.universals.len() as u32)
    }

    /// Index of the table entry read by existential number `k` under `nu`.
    pub fn entry_index(&self, k: usize, nu: &[usize]) -> usize {
        self.deps[k]
            .iter()
            .fold(0, |acc, &p| acc * self.domain + nu[p])
    }

    /// Decodes a universal valuation index, first universal most significant,
    /// into a full valuation with existentials set to zero.
    pub fn universal_valuation(&self, mut index: usize) -> Valuation {
        let mut nu = vec![0; self.prefix.len()];
        for &p in self.universals.iter().rev() {
            nu[p] = index % self.domain;
            index /= self.domain;
        }
        nu
    }
}

fn checked_pow(base: usize, exp: usize) -> Option<usize> {
    (0..exp).try_fold(1usize, |acc, _| acc.checked_mul(base))
}

/// A dependence map: one Skolem table per existential variable, indexed by
/// the values of the universals preceding it (first one most significant).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DependenceMap {
    layout: std::sync::Arc<Layout>,
    tables: Vec<Vec<usize>>,
}

impl DependenceMap {
    /// Builds a map from explicit tables, checking their shape.
    pub fn new(prefix: &QuantPrefix, domain: usize, tables: Vec<Vec<usize>>) -> Result<DependenceMap> {
        let layout = Layout::new(prefix, domain)?;
        Self::with_layout(std::sync::Arc::new(layout), tables)
    }

    pub fn with_layout(layout: std::sync::Arc<Layout>, tables: Vec<Vec<usize>>) -> Result<DependenceMap> {
        if tables.len() != layout.existentials.len() {
            return Err(Error::Validation(format!(
                "expected {} tables, got {}",
                layout.existentials.len(),
                tables.len()
            )));
        }
        for (k, t) in tables.iter().enumerate() {
            if t.len() != layout.table_sizes[k] {
                return Err(Error::Validation(format!(
                    "table {k} has {} entries, expected {}",
                    t.len(),
                    layout.table_sizes[k]
                )));
            }
            if t.iter().any(|&v| v >= layout.domain) {
                return Err(Error::Validation(format!("table {k} leaves the domain")));
            }
        }
        Ok(DependenceMap { layout, tables })
    }

    /// The map whose existentials are all constantly zero.
    pub fn zero(layout: std::sync::Arc<Layout>) -> DependenceMap {
        let tables = layout.table_sizes.iter().map(|&n| vec![0; n]).collect();
        DependenceMap { layout, tables }
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn prefix(&self) -> &QuantPrefix {
        &self.layout.prefix
    }

    pub fn domain(&self) -> usize {
        self.layout.domain
    }

    pub fn tables(&self) -> &[Vec<usize>] {
        &self.tables
    }

    /// Completes `nu`, whose universal positions are set, in place.
    pub fn complete(&self, nu: &mut [usize]) {
        for (k, &p) in self.layout.existentials.iter().enumerate() {
            nu[p] = self.tables[k][self.layout.entry_index(k, nu)];
        }
    }

    /// The full valuation for the universal values `universals`, given in
    /// prefix order of the universal variables.
    pub fn apply(&self, universals: &[usize]) -> Valuation {
        let mut nu = vec![0; self.layout.prefix.len()];
        for (&p, &v) in self.layout.universals.iter().zip(universals) {
            nu[p] = v;
        }
        self.complete(&mut nu);
        nu
    }

    /// The image over every universal valuation, in index order.
    pub fn images(&self) -> Vec<Valuation> {
        (0..self.layout.n_universal_valuations())
            .map(|i| {
                let mut nu = self.layout.universal_valuation(i);
                self.complete(&mut nu);
                nu
            })
            .collect()
    }

    /// Position of this map in the canonical enumeration order.
    pub fn index(&self) -> BigUint {
        let d = BigUint::from(self.layout.domain);
        self.tables
            .iter()
            .flatten()
            .fold(BigUint::from(0u32), |acc, &v| acc * &d + BigUint::from(v))
    }
}

/// `∏ |D|^(|D|^|dep(x)|)` over the existential variables.
pub fn count_dependence_maps(prefix: &QuantPrefix, domain: usize) -> BigUint {
    let d = BigUint::from(domain);
    let mut total = BigUint::one();
    let mut n_univ = 0u32;
    for (q, _) in prefix.entries() {
        match q {
            Quantifier::Forall => n_univ += 1,
            Quantifier::Exists => {
                let entries = d.pow(n_univ);
                let exp: u32 = entries.clone().try_into().unwrap_or(u32::MAX);
                total *= d.pow(exp);
            }
        }
    }
    total
}

/// Canonical stream of all dependence maps: lexicographic over the
/// concatenated Skolem tables, earlier entries more significant.
#[derive(Debug, Clone)]
pub struct DependenceMaps {
    layout: std::sync::Arc<Layout>,
    digits: Vec<usize>,
    done: bool,
}

impl Iterator for DependenceMaps {
    type Item = DependenceMap;

    fn next(&mut self) -> Option<DependenceMap> {
        if self.done {
            return None;
        }
        let mut tables = Vec::with_capacity(self.layout.table_sizes.len());
        let mut off = 0;
        for &n in &self.layout.table_sizes {
            tables.push(self.digits[off..off + n].to_vec());
            off += n;
        }
        let out = DependenceMap {
            layout: self.layout.clone(),
            tables,
        };
        let mut i = self.digits.len();
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            self.digits[i] += 1;
            if self.digits[i] < self.layout.domain {
                break;
            }
            self.digits[i] = 0;
        }
        Some(out)
    }
}

/// Enumerates every dependence map of `prefix` over `0..domain`, refusing
/// when there are more than `bound` of them.
pub fn enumerate_dependence_maps(
    prefix: &QuantPrefix,
    domain: usize,
    bound: u64,
) -> Result<DependenceMaps> {
    let count = count_dependence_maps(prefix, domain);
    if count > BigUint::from(bound) {
        return Err(Error::DomainTooLarge {
            count: count.to_string(),
            bound,
        });
    }
    let layout = std::sync::Arc::new(Layout::new(prefix, domain)?);
    let n: usize = layout.table_sizes.iter().sum();
    Ok(DependenceMaps {
        layout,
        digits: vec![0; n],
        done: false,
    })
}
