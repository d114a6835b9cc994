//! Polynomial map germs `f : (R^n, 0) -> (R^p, 0)` and their JSON
//! definition format.
//!
//! The germ-definition document is
//!
//! ```json
//! { "n": 2, "p": 1, "k": 2,
//!   "components": [ [ {"exp": [1, 0], "coef": 1.0},
//!                     {"exp": [0, 2], "coef": -3.0} ] ] }
//! ```
//!
//! with one term list per component. Parsing rejects exponent vectors of the
//! wrong length, terms over the degree bound, and nonzero constant terms
//! (the germ condition `f(0) = 0`), each with the offending component/term
//! location.

use serde::{Deserialize, Serialize};

use crate::{Error, Polynomial};

/// A polynomial map germ with source dimension `n`, target dimension `p`
/// and degree bound `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyGerm {
    n: usize,
    p: usize,
    k: u32,
    components: Vec<Polynomial>,
}

/// Target multi index `(q_1, ..., q_p)`; all entries at least 1. Homeomorphism
/// synthesis is implemented for `q_i = 1`, the decomposition used when a map
/// germ is treated componentwise.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiIndex {
    entries: Vec<u32>,
}

impl MultiIndex {
    pub fn new(entries: Vec<u32>) -> Result<Self, Error> {
        if entries.is_empty() || entries.iter().any(|&q| q == 0) {
            return Err(Error::InvalidParameter(
                "multi index entries must be positive".into(),
            ));
        }
        Ok(Self { entries })
    }

    /// The multi index `(1, ..., 1)` of length `p`.
    pub fn ones(p: usize) -> Self {
        Self {
            entries: vec![1; p],
        }
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn total(&self) -> u32 {
        self.entries.iter().sum()
    }
}

#[derive(Serialize, Deserialize)]
struct TermDoc {
    exp: Vec<u32>,
    coef: f64,
}

#[derive(Serialize, Deserialize)]
struct GermDoc {
    n: usize,
    p: usize,
    k: u32,
    components: Vec<Vec<TermDoc>>,
}

impl PolyGerm {
    /// Validate and build a germ. Enforces `f(0) = 0` and the degree bound
    /// on every component.
    pub fn new(n: usize, p: usize, k: u32, components: Vec<Polynomial>) -> Result<Self, Error> {
        if n == 0 || p == 0 || k == 0 {
            return Err(Error::InvalidParameter(format!(
                "germ dimensions must be positive, got n={n}, p={p}, k={k}"
            )));
        }
        if components.len() != p {
            return Err(Error::InvalidParameter(format!(
                "expected {p} components, got {}",
                components.len()
            )));
        }
        for (ci, comp) in components.iter().enumerate() {
            if comp.num_vars() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: comp.num_vars(),
                });
            }
            let c0 = comp.constant_term();
            if c0 != 0.0 {
                return Err(Error::NonzeroConstantTerm {
                    component: ci,
                    coef: c0,
                });
            }
            if comp.total_degree() > k {
                return Err(Error::DegreeOverBound {
                    component: ci,
                    term: 0,
                    degree: comp.total_degree(),
                    bound: k,
                });
            }
        }
        Ok(Self {
            n,
            p,
            k,
            components,
        })
    }

    /// Convenience constructor for a scalar germ (p = 1).
    pub fn scalar(n: usize, k: u32, f: Polynomial) -> Result<Self, Error> {
        Self::new(n, 1, k, vec![f])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn degree_bound(&self) -> u32 {
        self.k
    }

    pub fn components(&self) -> &[Polynomial] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &Polynomial {
        &self.components[i]
    }

    /// Evaluate all components at `x`.
    pub fn eval(&self, x: &[f64]) -> Result<Vec<f64>, Error> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: x.len(),
            });
        }
        self.components.iter().map(|c| c.eval(x)).collect()
    }

    /// The germ `x -> f(A x)` for a linear change of source coordinates.
    pub fn compose_linear(&self, matrix: &[Vec<f64>]) -> Self {
        Self {
            n: self.n,
            p: self.p,
            k: self.k,
            components: self
                .components
                .iter()
                .map(|c| c.compose_linear(matrix))
                .collect(),
        }
    }

    /// Parse a germ-definition JSON document.
    pub fn parse(text: &str) -> Result<Self, Error> {
        let doc: GermDoc =
            serde_json::from_str(text).map_err(|e| Error::MalformedDocument(e.to_string()))?;
        if doc.components.len() != doc.p {
            return Err(Error::MalformedDocument(format!(
                "declared p = {} but found {} component term lists",
                doc.p,
                doc.components.len()
            )));
        }
        let mut components = Vec::with_capacity(doc.p);
        for (ci, terms) in doc.components.iter().enumerate() {
            for (ti, term) in terms.iter().enumerate() {
                if term.exp.len() != doc.n {
                    return Err(Error::BadExponentLength {
                        component: ci,
                        term: ti,
                        got: term.exp.len(),
                        expected: doc.n,
                    });
                }
                let degree: u32 = term.exp.iter().sum();
                if degree > doc.k {
                    return Err(Error::DegreeOverBound {
                        component: ci,
                        term: ti,
                        degree,
                        bound: doc.k,
                    });
                }
                if degree == 0 && term.coef != 0.0 {
                    return Err(Error::NonzeroConstantTerm {
                        component: ci,
                        coef: term.coef,
                    });
                }
            }
            components.push(Polynomial::from_terms(
                doc.n,
                terms.iter().map(|t| (t.exp.clone(), t.coef)),
            )?);
        }
        Self::new(doc.n, doc.p, doc.k, components)
    }

    /// Serialize to the canonical germ-definition document: terms sorted
    /// lexicographically by exponent vector, zero coefficients dropped.
    pub fn serialize(&self) -> String {
        let doc = GermDoc {
            n: self.n,
            p: self.p,
            k: self.k,
            components: self
                .components
                .iter()
                .map(|c| {
                    c.terms()
                        .map(|(e, coef)| TermDoc {
                            exp: e.to_vec(),
                            coef,
                        })
                        .collect()
                })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("germ document serialization cannot fail")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x_squared() -> PolyGerm {
        PolyGerm::scalar(1, 2, Polynomial::monomial(vec![2], 1.0)).unwrap()
    }

    #[test]
    fn germ_vanishes_at_origin() {
        assert_eq!(x_squared().eval(&[0.0]).unwrap(), vec![0.0]);
    }

    #[test]
    fn eval_vector_germ() {
        // f = (x1 + 2 x2, x1 x2) at (1, 3)
        let f = PolyGerm::new(
            2,
            2,
            2,
            vec![
                Polynomial::linear_form(&[1.0, 2.0]),
                Polynomial::monomial(vec![1, 1], 1.0),
            ],
        )
        .unwrap();
        assert_eq!(f.eval(&[1.0, 3.0]).unwrap(), vec![7.0, 3.0]);
    }

    #[test]
    fn parse_simple_document() {
        let f = PolyGerm::parse(
            r#"{"n":1,"p":1,"k":2,"components":[[{"exp":[2],"coef":1.0}]]}"#,
        )
        .unwrap();
        assert_eq!((f.n(), f.p(), f.degree_bound()), (1, 1, 2));
        assert_eq!(f, x_squared());
    }

    #[test]
    fn parse_rejects_constant_term() {
        let err = PolyGerm::parse(
            r#"{"n":1,"p":1,"k":2,"components":[[{"exp":[0],"coef":1.0}]]}"#,
        )
        .unwrap_err();
        assert!(matches!(err, Error::NonzeroConstantTerm { component: 0, .. }));
    }

    #[test]
    fn parse_rejects_wrong_exponent_length() {
        let err = PolyGerm::parse(
            r#"{"n":2,"p":1,"k":2,"components":[[{"exp":[1],"coef":1.0}]]}"#,
        )
        .unwrap_err();
        assert!(matches!(
            err,
            Error::BadExponentLength { component: 0, term: 0, got: 1, expected: 2 }
        ));
    }

    #[test]
    fn parse_rejects_degree_over_bound() {
        let err = PolyGerm::parse(
            r#"{"n":1,"p":1,"k":2,"components":[[{"exp":[3],"coef":1.0}]]}"#,
        )
        .unwrap_err();
        assert!(matches!(err, Error::DegreeOverBound { degree: 3, bound: 2, .. }));
    }

    #[test]
    fn parse_rejects_malformed_json() {
        assert!(matches!(
            PolyGerm::parse("{not json"),
            Err(Error::MalformedDocument(_))
        ));
    }

    #[test]
    fn serialize_parse_round_trip_is_identity() {
        let corpus = [
            r#"{"n":1,"p":1,"k":2,"components":[[{"exp":[2],"coef":1.0}]]}"#,
            r#"{"n":1,"p":1,"k":3,"components":[[{"exp":[1],"coef":-2.0},{"exp":[3],"coef":0.5}]]}"#,
            r#"{"n":2,"p":2,"k":2,"components":[[{"exp":[1,0],"coef":1.0}],[{"exp":[1,1],"coef":4.0}]]}"#,
            r#"{"n":3,"p":1,"k":4,"components":[[{"exp":[1,1,2],"coef":1.0},{"exp":[0,0,1],"coef":-1.0}]]}"#,
        ];
        for doc in corpus {
            let f = PolyGerm::parse(doc).unwrap();
            let canonical = f.serialize();
            let g = PolyGerm::parse(&canonical).unwrap();
            assert_eq!(f, g);
            // Byte-identical once in canonical form.
            assert_eq!(canonical, g.serialize());
        }
    }
}
