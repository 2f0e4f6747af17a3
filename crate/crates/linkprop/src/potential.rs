//! Exact algebra on dense discrete belief tables.
//!
//! A [`PotentialTable`] is a nonnegative table over an ordered set of discrete
//! variables. Tables multiply and divide pointwise after broadcasting over the
//! union of their scopes, marginalize by summing out variables, and compare up
//! to a tolerance. Division uses the 0/0 = 0 convention of junction-tree
//! calibration; a positive numerator over a zero denominator is a hard error.

use crate::error::{Error, Result};

/// A discrete variable: a unique id with at least two states.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Variable {
    id: String,
    cardinality: usize,
}

impl Variable {
    pub fn new(id: impl Into<String>, cardinality: usize) -> Result<Self> {
        let id = id.into();
        if cardinality < 2 {
            return Err(Error::BadCardinality { id, cardinality });
        }
        Ok(Variable { id, cardinality })
    }

    /// A two-state variable. Panics only on the impossible cardinality check.
    pub fn binary(id: impl Into<String>) -> Self {
        Variable::new(id, 2).unwrap()
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn cardinality(&self) -> usize {
        self.cardinality
    }
}

/// An ordered, duplicate-free set of variables, canonically sorted by id.
///
/// The state space of a scope is the cartesian product of its members'
/// states; its size is the product of the cardinalities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scope {
    vars: Vec<Variable>,
}

impl Scope {
    /// Builds a canonical scope from variables in any order.
    pub fn new(vars: impl IntoIterator<Item = Variable>) -> Result<Self> {
        let mut vars: Vec<Variable> = vars.into_iter().collect();
        vars.sort_by(|a, b| a.id.cmp(&b.id));
        for pair in vars.windows(2) {
            if pair[0].id == pair[1].id {
                if pair[0].cardinality != pair[1].cardinality {
                    return Err(Error::CardinalityConflict {
                        id: pair[0].id.clone(),
                        left: pair[0].cardinality,
                        right: pair[1].cardinality,
                    });
                }
                return Err(Error::DuplicateVariable {
                    id: pair[0].id.clone(),
                });
            }
        }
        Ok(Scope { vars })
    }

    pub fn empty() -> Self {
        Scope { vars: Vec::new() }
    }

    pub fn vars(&self) -> &[Variable] {
        &self.vars
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    /// Number of cells in the state space.
    pub fn cells(&self) -> usize {
        self.vars.iter().map(|v| v.cardinality).product()
    }

    pub fn contains(&self, id: &str) -> bool {
        self.vars.binary_search_by(|v| v.id.as_str().cmp(id)).is_ok()
    }

    pub fn var(&self, id: &str) -> Option<&Variable> {
        self.vars
            .binary_search_by(|v| v.id.as_str().cmp(id))
            .ok()
            .map(|i| &self.vars[i])
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.vars.iter().map(|v| v.id.as_str())
    }

    pub fn is_subset_of(&self, other: &Scope) -> bool {
        self.vars.iter().all(|v| other.contains(&v.id))
    }

    /// Union of two scopes; errors when a shared id carries two cardinalities.
    pub fn union(&self, other: &Scope) -> Result<Scope> {
        let mut vars = self.vars.clone();
        for v in &other.vars {
            match self.var(&v.id) {
                Some(mine) if mine.cardinality != v.cardinality => {
                    return Err(Error::CardinalityConflict {
                        id: v.id.clone(),
                        left: mine.cardinality,
                        right: v.cardinality,
                    })
                }
                Some(_) => {}
                None => vars.push(v.clone()),
            }
        }
        Scope::new(vars)
    }

    pub fn intersection(&self, other: &Scope) -> Scope {
        let vars = self
            .vars
            .iter()
            .filter(|v| other.contains(&v.id))
            .cloned()
            .collect();
        Scope { vars }
    }

    /// Variables of `self` not present in `other`.
    pub fn difference(&self, other: &Scope) -> Scope {
        let vars = self
            .vars
            .iter()
            .filter(|v| !other.contains(&v.id))
            .cloned()
            .collect();
        Scope { vars }
    }

    fn describe(&self) -> String {
        let ids: Vec<&str> = self.ids().collect();
        format!("{{{}}}", ids.join(","))
    }

    /// Per-variable strides for row-major layout, last variable fastest.
    fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1usize; self.vars.len()];
        for i in (0..self.vars.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * self.vars[i + 1].cardinality;
        }
        strides
    }

    /// Advances a mixed-radix digit vector; returns false after the last cell.
    fn advance(&self, digits: &mut [usize]) -> bool {
        for i in (0..self.vars.len()).rev() {
            digits[i] += 1;
            if digits[i] < self.vars[i].cardinality {
                return true;
            }
            digits[i] = 0;
        }
        false
    }
}

/// Maps digit vectors of an outer scope to flat indices of a table over a
/// sub-scope. Variables absent from the inner scope get stride zero, which
/// is exactly broadcasting.
struct Projection {
    strides: Vec<usize>,
}

impl Projection {
    fn new(outer: &Scope, inner: &Scope) -> Self {
        let inner_strides = inner.strides();
        let strides = outer
            .vars
            .iter()
            .map(|v| match inner.vars.iter().position(|w| w.id == v.id) {
                Some(k) => inner_strides[k],
                None => 0,
            })
            .collect();
        Projection { strides }
    }

    fn index(&self, digits: &[usize]) -> usize {
        digits
            .iter()
            .zip(&self.strides)
            .map(|(d, s)| d * s)
            .sum()
    }
}

/// Dense nonnegative table over a scope, row-major with the last scope
/// variable's index varying fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialTable {
    scope: Scope,
    values: Vec<f64>,
}

impl PotentialTable {
    /// Builds a table from variables in the caller's layout order and values
    /// laid out row-major for that order. The result always carries the
    /// canonical (sorted) scope; values are permuted when the orders differ.
    pub fn new(layout: Vec<Variable>, values: Vec<f64>) -> Result<Self> {
        let given = Scope { vars: layout };
        let scope = Scope::new(given.vars.iter().cloned())?;
        let expected = scope.cells();
        if values.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                actual: values.len(),
            });
        }
        for (index, &value) in values.iter().enumerate() {
            if !value.is_finite() || value < 0.0 {
                return Err(Error::InvalidEntry { index, value });
            }
        }
        if scope.vars == given.vars {
            return Ok(PotentialTable { scope, values });
        }
        // Permute from the caller's layout into canonical order.
        let proj = Projection::new(&scope, &given);
        let mut canonical = vec![0.0; expected];
        let mut digits = vec![0usize; scope.len()];
        for cell in canonical.iter_mut() {
            *cell = values[proj.index(&digits)];
            scope.advance(&mut digits);
        }
        Ok(PotentialTable {
            scope,
            values: canonical,
        })
    }

    /// All-ones table over a scope: the multiplicative identity.
    pub fn ones(scope: Scope) -> Self {
        let values = vec![1.0; scope.cells()];
        PotentialTable { scope, values }
    }

    /// Uniform table summing to one.
    pub fn uniform(scope: Scope) -> Self {
        let n = scope.cells();
        PotentialTable {
            scope,
            values: vec![1.0 / n as f64; n],
        }
    }

    pub fn scope(&self) -> &Scope {
        &self.scope
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn total_mass(&self) -> f64 {
        self.values.iter().sum()
    }

    /// Pointwise product after broadcasting both factors over the union scope.
    pub fn multiply(&self, other: &PotentialTable) -> Result<PotentialTable> {
        let scope = self.scope.union(&other.scope)?;
        let left = Projection::new(&scope, &self.scope);
        let right = Projection::new(&scope, &other.scope);
        let mut values = vec![0.0; scope.cells()];
        let mut digits = vec![0usize; scope.len()];
        for cell in values.iter_mut() {
            *cell = self.values[left.index(&digits)] * other.values[right.index(&digits)];
            scope.advance(&mut digits);
        }
        Ok(PotentialTable { scope, values })
    }

    /// Pointwise quotient with the 0/0 = 0 convention. The denominator scope
    /// must be contained in the numerator scope; a cell with positive
    /// numerator and zero denominator is an inconsistent-support error.
    pub fn divide(&self, den: &PotentialTable) -> Result<PotentialTable> {
        if !den.scope.is_subset_of(&self.scope) {
            return Err(Error::NotSubset {
                sub: den.scope.describe(),
                sup: self.scope.describe(),
            });
        }
        let proj = Projection::new(&self.scope, &den.scope);
        let mut values = vec![0.0; self.values.len()];
        let mut digits = vec![0usize; self.scope.len()];
        for (cell, &num) in values.iter_mut().zip(&self.values) {
            let d = den.values[proj.index(&digits)];
            if d == 0.0 {
                if num != 0.0 {
                    return Err(Error::InconsistentSupport {
                        numerator: num,
                        assignment: self.describe_assignment(&digits),
                    });
                }
                *cell = 0.0;
            } else {
                *cell = num / d;
            }
            self.scope.advance(&mut digits);
        }
        Ok(PotentialTable {
            scope: self.scope.clone(),
            values,
        })
    }

    /// Sums out every variable not in `target`; total mass is preserved.
    pub fn marginalize(&self, target: &Scope) -> Result<PotentialTable> {
        if !target.is_subset_of(&self.scope) {
            return Err(Error::NotSubset {
                sub: target.describe(),
                sup: self.scope.describe(),
            });
        }
        let proj = Projection::new(&self.scope, target);
        let mut values = vec![0.0; target.cells()];
        let mut digits = vec![0usize; self.scope.len()];
        for &v in &self.values {
            values[proj.index(&digits)] += v;
            self.scope.advance(&mut digits);
        }
        Ok(PotentialTable {
            scope: target.clone(),
            values,
        })
    }

    /// Scales entries to sum to one.
    pub fn normalize(&self) -> Result<PotentialTable> {
        let mass = self.total_mass();
        if mass <= 0.0 {
            return Err(Error::ZeroMass);
        }
        let values = self.values.iter().map(|v| v / mass).collect();
        Ok(PotentialTable {
            scope: self.scope.clone(),
            values,
        })
    }

    /// Largest absolute entry difference; requires identical scopes.
    pub fn max_abs_diff(&self, other: &PotentialTable) -> Result<f64> {
        if self.scope != other.scope {
            return Err(Error::ScopeMismatch {
                left: self.scope.describe(),
                right: other.scope.describe(),
            });
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }

    /// True iff the scopes match and no entry differs by more than `tol`.
    pub fn table_equal(&self, other: &PotentialTable, tol: f64) -> Result<bool> {
        Ok(self.max_abs_diff(other)? <= tol)
    }

    fn describe_assignment(&self, digits: &[usize]) -> String {
        self.scope
            .vars
            .iter()
            .zip(digits)
            .map(|(v, d)| format!("{}={}", v.id, d))
            .collect::<Vec<_>>()
            .join(", ")
    }
}
