//! Source coordinate changes `h : (R^n, 0) -> (R^n, 0)` with exact inverses.
//!
//! The catalog is restricted to invertible linear maps (identity, sign
//! flips, coordinate permutations, general well-conditioned matrices): the
//! homeomorphism construction needs both `h` and `h^{-1}` evaluable, and a
//! linear `h` keeps `g o h` a polynomial of the same degree bound.

use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::Error;

/// An invertible linear change of source coordinates, with its inverse and
/// singular-value extremes (the Lipschitz constants of `h` and `h^{-1}`).
#[derive(Debug, Clone, PartialEq)]
pub struct CoordChange {
    n: usize,
    label: String,
    matrix: Vec<Vec<f64>>,
    inverse: Vec<Vec<f64>>,
    sigma_max: f64,
    sigma_min: f64,
}

impl CoordChange {
    fn from_matrix(label: String, matrix: Vec<Vec<f64>>) -> Result<Self, Error> {
        let n = matrix.len();
        let flat: Vec<f64> = matrix.iter().flatten().copied().collect();
        let m = DMatrix::from_row_slice(n, n, &flat);
        let inv = m.clone().try_inverse().ok_or_else(|| {
            Error::InvalidParameter(format!("coordinate change {label:?} is singular"))
        })?;
        let svd = m.svd(false, false);
        let sigma_max = svd.singular_values.max();
        let sigma_min = svd.singular_values.min();
        let inverse = (0..n)
            .map(|i| (0..n).map(|j| inv[(i, j)]).collect())
            .collect();
        Ok(Self {
            n,
            label,
            matrix,
            inverse,
            sigma_max,
            sigma_min,
        })
    }

    pub fn identity(n: usize) -> Self {
        let matrix = (0..n)
            .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        Self {
            n,
            label: "id".into(),
            inverse: clone_matrix(&matrix),
            matrix,
            sigma_max: 1.0,
            sigma_min: 1.0,
        }
    }

    /// Flip the sign of the variables selected by `mask`.
    pub fn negation(mask: &[bool]) -> Self {
        let n = mask.len();
        let matrix: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            if mask[i] {
                                -1.0
                            } else {
                                1.0
                            }
                        } else {
                            0.0
                        }
                    })
                    .collect()
            })
            .collect();
        let flipped: Vec<String> = mask
            .iter()
            .enumerate()
            .filter(|(_, &f)| f)
            .map(|(i, _)| i.to_string())
            .collect();
        Self {
            n,
            label: format!("neg[{}]", flipped.join(",")),
            inverse: clone_matrix(&matrix),
            matrix,
            sigma_max: 1.0,
            sigma_min: 1.0,
        }
    }

    /// The variable permutation `x_i -> x_{perm[i]}`.
    pub fn permutation(perm: &[usize]) -> Result<Self, Error> {
        let n = perm.len();
        let mut seen = vec![false; n];
        for &j in perm {
            if j >= n || seen[j] {
                return Err(Error::InvalidParameter(format!(
                    "invalid permutation {perm:?}"
                )));
            }
            seen[j] = true;
        }
        let mut matrix = vec![vec![0.0; n]; n];
        for (i, &j) in perm.iter().enumerate() {
            matrix[i][j] = 1.0;
        }
        let labels: Vec<String> = perm.iter().map(|j| j.to_string()).collect();
        Self::from_matrix(format!("perm[{}]", labels.join(",")), matrix)
    }

    /// A general invertible linear map.
    pub fn linear(label: impl Into<String>, matrix: Vec<Vec<f64>>) -> Result<Self, Error> {
        Self::from_matrix(label.into(), matrix)
    }

    /// The rotation taking unit vector `a` to unit vector `b` in the plane
    /// they span, identity on the orthogonal complement. Used to align the
    /// covector of one degree-1 germ with another's.
    pub fn rotation_between(label: impl Into<String>, a: &[f64], b: &[f64]) -> Result<Self, Error> {
        let n = a.len();
        if b.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: b.len(),
            });
        }
        let a = normalize(a)?;
        let b = normalize(b)?;
        let c: f64 = dot(&a, &b);
        // b with its a-component removed; if a and b are (anti)parallel fall
        // back to identity or a half-turn in a plane containing a.
        let v: Vec<f64> = b.iter().zip(&a).map(|(&bi, &ai)| bi - c * ai).collect();
        let s = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if s < 1e-12 {
            if c > 0.0 {
                return Ok(Self::identity(n));
            }
            // a ~ -b: rotate by pi in span{a, w} for any w orthogonal to a.
            let w = orthogonal_to(&a)?;
            let mut matrix = vec![vec![0.0; n]; n];
            for (i, row) in matrix.iter_mut().enumerate() {
                for (j, entry) in row.iter_mut().enumerate() {
                    let delta = if i == j { 1.0 } else { 0.0 };
                    *entry = delta - 2.0 * a[i] * a[j] - 2.0 * w[i] * w[j];
                }
            }
            return Self::from_matrix(label.into(), matrix);
        }
        let vh: Vec<f64> = v.iter().map(|x| x / s).collect();
        // R = I + (c-1)(a a^T + v v^T) + s (v a^T - a v^T)
        let mut matrix = vec![vec![0.0; n]; n];
        for (i, row) in matrix.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                let delta = if i == j { 1.0 } else { 0.0 };
                *entry = delta
                    + (c - 1.0) * (a[i] * a[j] + vh[i] * vh[j])
                    + s * (vh[i] * a[j] - a[i] * vh[j]);
            }
        }
        Self::from_matrix(label.into(), matrix)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn matrix(&self) -> &[Vec<f64>] {
        &self.matrix
    }

    pub fn inverse_matrix(&self) -> &[Vec<f64>] {
        &self.inverse
    }

    /// Largest singular value: the Lipschitz constant of the forward map.
    pub fn lipschitz_forward(&self) -> f64 {
        self.sigma_max
    }

    /// Reciprocal smallest singular value: the Lipschitz constant of the
    /// inverse map.
    pub fn lipschitz_inverse(&self) -> f64 {
        1.0 / self.sigma_min
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        mat_vec(&self.matrix, x)
    }

    pub fn apply_inverse(&self, x: &[f64]) -> Vec<f64> {
        mat_vec(&self.inverse, x)
    }

    /// The inverse change, as a `CoordChange` of its own.
    pub fn inverted(&self) -> Self {
        Self {
            n: self.n,
            label: format!("inv({})", self.label),
            matrix: clone_matrix(&self.inverse),
            inverse: clone_matrix(&self.matrix),
            sigma_max: 1.0 / self.sigma_min,
            sigma_min: 1.0 / self.sigma_max,
        }
    }
}

/// Which families of coordinate changes a search may draw on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CatalogFamily {
    Identity,
    /// All single-axis and all-axis sign flips.
    Signs,
    /// All coordinate permutations (n <= 6).
    Perms,
    /// Seeded random well-conditioned linear maps.
    Linear(usize),
}

/// Parse a catalog spec such as `"id,signs,perms,linear:4"`.
pub fn parse_catalog_spec(spec: &str) -> Result<Vec<CatalogFamily>, Error> {
    let mut out = Vec::new();
    for part in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        if part == "id" {
            out.push(CatalogFamily::Identity);
        } else if part == "signs" {
            out.push(CatalogFamily::Signs);
        } else if part == "perms" {
            out.push(CatalogFamily::Perms);
        } else if let Some(count) = part.strip_prefix("linear:") {
            let count: usize = count
                .parse()
                .map_err(|_| Error::InvalidParameter(format!("bad catalog entry {part:?}")))?;
            out.push(CatalogFamily::Linear(count));
        } else {
            return Err(Error::InvalidParameter(format!(
                "unknown catalog family {part:?}"
            )));
        }
    }
    if out.is_empty() {
        out.push(CatalogFamily::Identity);
    }
    Ok(out)
}

/// Materialize a catalog in dimension `n`. The identity is always present
/// and always first.
pub fn build_catalog(families: &[CatalogFamily], n: usize, seed: u64) -> Vec<CoordChange> {
    let mut out = vec![CoordChange::identity(n)];
    for family in families {
        match family {
            CatalogFamily::Identity => {}
            CatalogFamily::Signs => {
                // Full flip plus each single-axis flip.
                out.push(CoordChange::negation(&vec![true; n]));
                if n > 1 {
                    for i in 0..n {
                        let mut mask = vec![false; n];
                        mask[i] = true;
                        out.push(CoordChange::negation(&mask));
                    }
                }
            }
            CatalogFamily::Perms => {
                for perm in permutations(n) {
                    if perm.iter().enumerate().all(|(i, &j)| i == j) {
                        continue;
                    }
                    out.push(CoordChange::permutation(&perm).expect("valid by construction"));
                }
            }
            CatalogFamily::Linear(count) => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut made = 0;
                while made < *count {
                    let matrix: Vec<Vec<f64>> = (0..n)
                        .map(|_| (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect())
                        .collect();
                    if let Ok(change) =
                        CoordChange::linear(format!("linear:{seed}#{made}"), matrix)
                    {
                        // Keep only well-conditioned draws.
                        if change.sigma_max / change.sigma_min <= 10.0 {
                            out.push(change);
                            made += 1;
                        }
                    }
                }
            }
        }
    }
    out.dedup_by(|a, b| a.matrix == b.matrix);
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut items: Vec<usize> = (0..n).collect();
    heap_permute(&mut items, n, &mut out);
    out.sort();
    out
}

fn heap_permute(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k <= 1 {
        out.push(items.clone());
        return;
    }
    for i in 0..k {
        heap_permute(items, k - 1, out);
        if k % 2 == 0 {
            items.swap(i, k - 1);
        } else {
            items.swap(0, k - 1);
        }
    }
}

fn clone_matrix(m: &[Vec<f64>]) -> Vec<Vec<f64>> {
    m.to_vec()
}

fn mat_vec(m: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
    m.iter()
        .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
        .collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn normalize(v: &[f64]) -> Result<Vec<f64>, Error> {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if n < 1e-12 {
        return Err(Error::InvalidParameter(
            "cannot normalize a near-zero vector".into(),
        ));
    }
    Ok(v.iter().map(|x| x / n).collect())
}

fn orthogonal_to(a: &[f64]) -> Result<Vec<f64>, Error> {
    let n = a.len();
    if n < 2 {
        return Err(Error::InvalidParameter(
            "no orthogonal direction in dimension 1".into(),
        ));
    }
    // Start from the basis vector least aligned with a, then Gram-Schmidt.
    let i = a
        .iter()
        .enumerate()
        .min_by(|(_, x), (_, y)| x.abs().partial_cmp(&y.abs()).unwrap())
        .map(|(i, _)| i)
        .unwrap();
    let mut w = vec![0.0; n];
    w[i] = 1.0;
    let proj = a[i];
    for (wj, &aj) in w.iter_mut().zip(a) {
        *wj -= proj * aj;
    }
    normalize(&w)
}
