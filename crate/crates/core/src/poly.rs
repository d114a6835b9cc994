//! Multivariate polynomials with `f64` coefficients.
//!
//! Terms are kept in a `BTreeMap` keyed by exponent vector, so the canonical
//! order (lexicographic on exponent vectors) falls out of the representation
//! and serialization is reproducible. Terms with coefficient exactly 0 are
//! never stored.

use std::collections::BTreeMap;

use crate::Error;

/// A polynomial in `num_vars` real variables.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    num_vars: usize,
    terms: BTreeMap<Vec<u32>, f64>,
}

impl Polynomial {
    /// The zero polynomial in `num_vars` variables.
    pub fn zero(num_vars: usize) -> Self {
        Self {
            num_vars,
            terms: BTreeMap::new(),
        }
    }

    /// Build from `(exponent vector, coefficient)` pairs. Zero coefficients
    /// are dropped; repeated exponent vectors are summed.
    pub fn from_terms(
        num_vars: usize,
        terms: impl IntoIterator<Item = (Vec<u32>, f64)>,
    ) -> Result<Self, Error> {
        let mut map: BTreeMap<Vec<u32>, f64> = BTreeMap::new();
        for (exp, coef) in terms {
            if exp.len() != num_vars {
                return Err(Error::DimensionMismatch {
                    expected: num_vars,
                    got: exp.len(),
                });
            }
            *map.entry(exp).or_insert(0.0) += coef;
        }
        map.retain(|_, c| *c != 0.0);
        Ok(Self {
            num_vars,
            terms: map,
        })
    }

    /// The monomial `c * x^exp`.
    pub fn monomial(exp: Vec<u32>, coef: f64) -> Self {
        let num_vars = exp.len();
        let mut terms = BTreeMap::new();
        if coef != 0.0 {
            terms.insert(exp, coef);
        }
        Self { num_vars, terms }
    }

    /// The linear form `sum_i coefs[i] * x_i`.
    pub fn linear_form(coefs: &[f64]) -> Self {
        let n = coefs.len();
        Self::from_terms(
            n,
            coefs.iter().enumerate().map(|(i, &c)| {
                let mut e = vec![0u32; n];
                e[i] = 1;
                (e, c)
            }),
        )
        .expect("exponent lengths are correct by construction")
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    /// Iterate terms in canonical (lexicographic) order.
    pub fn terms(&self) -> impl Iterator<Item = (&[u32], f64)> {
        self.terms.iter().map(|(e, &c)| (e.as_slice(), c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; 0 for the zero polynomial.
    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum())
            .max()
            .unwrap_or(0)
    }

    /// Coefficient of the constant term.
    pub fn constant_term(&self) -> f64 {
        self.terms
            .get(&vec![0u32; self.num_vars])
            .copied()
            .unwrap_or(0.0)
    }

    /// Evaluate at `x` by term summation with cached variable powers.
    pub fn eval(&self, x: &[f64]) -> Result<f64, Error> {
        if x.len() != self.num_vars {
            return Err(Error::DimensionMismatch {
                expected: self.num_vars,
                got: x.len(),
            });
        }
        // powers[i][d] = x_i^d, up to the max exponent of variable i.
        let mut max_exp = vec![0u32; self.num_vars];
        for e in self.terms.keys() {
            for (m, &d) in max_exp.iter_mut().zip(e) {
                *m = (*m).max(d);
            }
        }
        let powers: Vec<Vec<f64>> = x
            .iter()
            .zip(&max_exp)
            .map(|(&xi, &m)| {
                let mut p = Vec::with_capacity(m as usize + 1);
                p.push(1.0);
                for _ in 0..m {
                    p.push(p.last().unwrap() * xi);
                }
                p
            })
            .collect();
        let mut acc = 0.0;
        for (e, &c) in &self.terms {
            let mut t = c;
            for (i, &d) in e.iter().enumerate() {
                t *= powers[i][d as usize];
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Symbolic partial derivative with respect to variable `var`.
    pub fn partial_derivative(&self, var: usize) -> Self {
        let mut out = BTreeMap::new();
        for (e, &c) in &self.terms {
            let d = e[var];
            if d == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[var] -= 1;
            let coef = c * d as f64;
            if coef != 0.0 {
                *out.entry(e2).or_insert(0.0) += coef;
            }
        }
        out.retain(|_, c| *c != 0.0);
        Self {
            num_vars: self.num_vars,
            terms: out,
        }
    }

    /// Exact gradient at `x`: symbolic differentiation, then evaluation.
    pub fn gradient(&self, x: &[f64]) -> Result<Vec<f64>, Error> {
        if x.len() != self.num_vars {
            return Err(Error::DimensionMismatch {
                expected: self.num_vars,
                got: x.len(),
            });
        }
        (0..self.num_vars)
            .map(|i| self.partial_derivative(i).eval(x))
            .collect()
    }

    pub fn scale(&self, c: f64) -> Self {
        let mut terms = BTreeMap::new();
        if c != 0.0 {
            for (e, &a) in &self.terms {
                let v = a * c;
                if v != 0.0 {
                    terms.insert(e.clone(), v);
                }
            }
        }
        Self {
            num_vars: self.num_vars,
            terms,
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(-1.0)
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.num_vars, other.num_vars);
        let mut terms = self.terms.clone();
        for (e, &c) in &other.terms {
            *terms.entry(e.clone()).or_insert(0.0) += c;
        }
        terms.retain(|_, c| *c != 0.0);
        Self {
            num_vars: self.num_vars,
            terms,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.num_vars, other.num_vars);
        let mut terms: BTreeMap<Vec<u32>, f64> = BTreeMap::new();
        for (ea, &ca) in &self.terms {
            for (eb, &cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                *terms.entry(e).or_insert(0.0) += ca * cb;
            }
        }
        terms.retain(|_, c| *c != 0.0);
        Self {
            num_vars: self.num_vars,
            terms,
        }
    }

    pub fn pow(&self, mut n: u32) -> Self {
        let mut acc = Self::monomial(vec![0; self.num_vars], 1.0);
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Substitute the linear change of variables `x -> A x`, i.e. return the
    /// polynomial `q` with `q(x) = self(A x)`. `matrix` is row-major, square,
    /// of size `num_vars`. Total degree never increases.
    pub fn compose_linear(&self, matrix: &[Vec<f64>]) -> Self {
        debug_assert_eq!(matrix.len(), self.num_vars);
        // (A x)_i as a linear form in x.
        let rows: Vec<Polynomial> = matrix.iter().map(|r| Self::linear_form(r)).collect();
        let mut acc = Self::zero(self.num_vars);
        for (e, &c) in &self.terms {
            let mut term = Self::monomial(vec![0; self.num_vars], c);
            for (i, &d) in e.iter().enumerate() {
                if d > 0 {
                    term = term.mul(&rows[i].pow(d));
                }
            }
            acc = acc.add(&term);
        }
        acc
    }
}
