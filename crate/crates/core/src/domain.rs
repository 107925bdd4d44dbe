//! Search-space descriptions and the a-priori problem features used for
//! algorithm selection.

use crate::error::{Error, Result};

/// One decision variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VariableSpec {
    /// Unbounded real on a standardized scale (reference distribution N(0, 1)).
    Continuous,
    /// Unordered labels `0..cardinality`.
    Categorical { cardinality: usize },
}

/// Decoded value of one variable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Value {
    Real(f64),
    Category(usize),
}

impl Value {
    pub fn as_real(&self) -> Option<f64> {
        match *self {
            Value::Real(v) => Some(v),
            Value::Category(_) => None,
        }
    }

    pub fn as_category(&self) -> Option<usize> {
        match *self {
            Value::Category(c) => Some(c),
            Value::Real(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Domain {
    variables: Vec<VariableSpec>,
}

impl Domain {
    pub fn new(variables: Vec<VariableSpec>) -> Result<Self> {
        if variables.is_empty() {
            return Err(Error::InvalidDomain("a domain needs at least one variable".into()));
        }
        for (i, v) in variables.iter().enumerate() {
            if let VariableSpec::Categorical { cardinality } = v {
                if *cardinality < 2 {
                    return Err(Error::InvalidDomain(format!(
                        "variable {i} has cardinality {cardinality}, at least 2 is required"
                    )));
                }
            }
        }
        Ok(Self { variables })
    }

    /// `d` unbounded real variables.
    pub fn continuous(d: usize) -> Result<Self> {
        Self::new(vec![VariableSpec::Continuous; d])
    }

    /// `n` categorical variables sharing the same cardinality.
    pub fn categorical(n: usize, cardinality: usize) -> Result<Self> {
        Self::new(vec![VariableSpec::Categorical { cardinality }; n])
    }

    pub fn variables(&self) -> &[VariableSpec] {
        &self.variables
    }

    pub fn len(&self) -> usize {
        self.variables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.variables.is_empty()
    }

    /// True iff no categorical variable is present.
    pub fn is_metrizable(&self) -> bool {
        self.variables.iter().all(|v| matches!(v, VariableSpec::Continuous))
    }

    pub fn has_continuous(&self) -> bool {
        self.variables.iter().any(|v| matches!(v, VariableSpec::Continuous))
    }

    /// Checks that a decoded assignment is legal for this domain.
    pub fn is_legal(&self, values: &[Value]) -> bool {
        values.len() == self.variables.len()
            && self.variables.iter().zip(values).all(|(spec, value)| match (spec, value) {
                (VariableSpec::Continuous, Value::Real(x)) => x.is_finite(),
                (VariableSpec::Categorical { cardinality }, Value::Category(c)) => c < cardinality,
                _ => false,
            })
    }
}

/// Problem features known before the first evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemDescriptor {
    /// Number of scalar slots after encoding.
    pub dimension: usize,
    /// Total number of objective evaluations allowed.
    pub budget: usize,
    /// Maximum number of simultaneously outstanding asks.
    pub parallelism: usize,
    pub noisy: bool,
    pub domain: Domain,
}

impl ProblemDescriptor {
    /// Builds a descriptor whose dimension is the encoded dimension of `domain`.
    pub fn new(domain: Domain, budget: usize, parallelism: usize, noisy: bool) -> Result<Self> {
        let descriptor = Self {
            dimension: crate::transforms::encode_dimension(&domain),
            budget,
            parallelism,
            noisy,
            domain,
        };
        descriptor.validate()?;
        Ok(descriptor)
    }

    pub fn continuous(dimension: usize, budget: usize, parallelism: usize, noisy: bool) -> Result<Self> {
        let domain = Domain::continuous(dimension).map_err(|e| Error::InvalidDescriptor(e.to_string()))?;
        Self::new(domain, budget, parallelism, noisy)
    }

    pub fn validate(&self) -> Result<()> {
        if self.dimension == 0 {
            return Err(Error::InvalidDescriptor("dimension must be positive".into()));
        }
        if self.budget == 0 {
            return Err(Error::InvalidDescriptor("budget must be positive".into()));
        }
        if self.parallelism == 0 {
            return Err(Error::InvalidDescriptor("parallelism must be positive".into()));
        }
        if self.parallelism > self.budget {
            return Err(Error::InvalidDescriptor(format!(
                "parallelism {} exceeds budget {}",
                self.parallelism, self.budget
            )));
        }
        let encoded = crate::transforms::encode_dimension(&self.domain);
        if encoded != self.dimension {
            return Err(Error::InvalidDescriptor(format!(
                "dimension {} does not match the encoded domain dimension {encoded}",
                self.dimension
            )));
        }
        Ok(())
    }

    pub fn is_sequential(&self) -> bool {
        self.parallelism == 1
    }

    pub fn is_continuous(&self) -> bool {
        self.domain.is_metrizable()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn metrizable_iff_no_categorical() {
        assert!(Domain::continuous(3).unwrap().is_metrizable());
        let mixed = Domain::new(vec![
            VariableSpec::Continuous,
            VariableSpec::Categorical { cardinality: 3 },
        ])
        .unwrap();
        assert!(!mixed.is_metrizable());
        assert!(mixed.has_continuous());
    }

    #[test]
    fn rejects_bad_domains() {
        assert!(Domain::new(vec![]).is_err());
        assert!(Domain::categorical(2, 1).is_err());
    }

    #[test]
    fn descriptor_invariants() {
        assert!(ProblemDescriptor::continuous(2, 10, 11, false).is_err());
        assert!(ProblemDescriptor::continuous(2, 0, 1, false).is_err());
        let d = ProblemDescriptor::continuous(2, 10, 1, false).unwrap();
        assert!(d.is_sequential() && d.is_continuous());
        let cat = ProblemDescriptor::new(Domain::categorical(4, 3).unwrap(), 100, 4, true).unwrap();
        assert_eq!(cat.dimension, 12);
        assert!(!cat.is_sequential() && !cat.is_continuous());
    }

    #[test]
    fn legality() {
        let dom = Domain::new(vec![VariableSpec::Continuous, VariableSpec::Categorical { cardinality: 2 }]).unwrap();
        assert!(dom.is_legal(&[Value::Real(0.3), Value::Category(1)]));
        assert!(!dom.is_legal(&[Value::Real(0.3), Value::Category(2)]));
        assert!(!dom.is_legal(&[Value::Category(0), Value::Category(1)]));
    }
}
