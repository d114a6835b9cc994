//! Explicit piecewise bi-Lipschitz homeomorphisms `H(x, y) = (h(x), theta(x, y))`
//! built from a passing contact verdict, and their product-structured
//! assembly over a common source change.
//!
//! For a positively related pair (`f ~ g o h`) the map is the five-case
//! formula
//!
//! ```text
//! theta(x, y) = 0                      if y = 0
//!             = (g o h)(x) * y / f(x)  if 0 < |y| <= |f(x)|
//!             = y - f(x) + (g o h)(x)  if |f(x)| <= |y|, sign(y) = sign(f(x))
//!             = y + f(x) - (g o h)(x)  if |f(x)| <= |y|, sign(y) = -sign(f(x))
//!             = y                      if f(x) = 0
//! ```
//!
//! with `f(x) = 0` meaning `|f(x)| <= eps_zero(|x|)` in floats, and the
//! closed middle condition winning at the exact boundary `|y| = |f(x)|`.
//!
//! For the negative branch (`f ~ -(g o h)`) the same formula applied as
//! written is not injective (its middle case decreases while the outer cases
//! increase), so the map is realized as the positive construction for the
//! pair `(f, -(g o h))` composed with target negation: `theta = -theta_plus`.
//! That keeps `theta(x, f(x)) = (g o h)(x)` and `theta(x, 0) = 0` verbatim,
//! makes `theta(x, .)` strictly decreasing, and swaps the target half-spaces
//! exactly as the sign bookkeeping demands.

use serde::{Deserialize, Serialize};

use crate::contact::{ContactVerdict, VerdictKind};
use crate::coord::CoordChange;
use crate::germ::PolyGerm;
use crate::sample::norm;
use crate::{Error, Polynomial, ToleranceConfig};

/// A map evaluable on points of its input space.
pub trait EvaluableMap {
    fn dim_in(&self) -> usize;
    fn dim_out(&self) -> usize;
    fn eval(&self, input: &[f64]) -> Vec<f64>;
}

/// A map with an evaluable inverse.
pub trait InvertibleMap: EvaluableMap {
    fn eval_inverse(&self, output: &[f64]) -> Vec<f64>;
}

/// Which branch of the contact relation the construction realizes:
/// `Plus` for `f ~ g o h` (theta increasing in y), `Minus` for
/// `f ~ -(g o h)` (theta decreasing).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SignBranch {
    Plus,
    Minus,
}

/// Which of the five formula cases fired during an evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Branch {
    /// `y = 0`.
    ZeroY,
    /// `0 < |y| <= |f(x)|`.
    Middle,
    /// `|f(x)| <= |y|`, matching signs.
    OuterSame,
    /// `|f(x)| <= |y|`, opposite signs.
    OuterOpposite,
    /// `|f(x)| <= eps_zero`.
    ZeroF,
}

/// One evaluation of `H`, with the case that fired for testability.
#[derive(Debug, Clone)]
pub struct HomeoValue {
    pub x: Vec<f64>,
    pub y: f64,
    pub branch: Branch,
}

/// The single-component construction for a scalar pair `(f, g)` over a
/// source change `h`.
///
/// Internally the map is stored in "positive core" form: polynomials
/// `f_src ~ g_aligned` with positive constants, plus input/output negation
/// flags. The forward map of a `Minus` construction negates its output; its
/// inverse negates its input.
#[derive(Debug, Clone)]
pub struct PiecewiseHomeo {
    f_src: Polynomial,
    g_aligned: Polynomial,
    h: CoordChange,
    negate_in: bool,
    negate_out: bool,
    sign: SignBranch,
    degree_bound: u32,
    tol: ToleranceConfig,
}

impl PiecewiseHomeo {
    /// Build directly from the descriptor `(f, g, h, sign)`, without
    /// consulting a verdict. The caller asserts the contact hypothesis; if it
    /// is false the verifier's monotonicity and half-space checks will fail.
    pub fn from_parts(
        f: &PolyGerm,
        g: &PolyGerm,
        h: &CoordChange,
        sign: SignBranch,
        tol: &ToleranceConfig,
    ) -> Result<Self, Error> {
        if f.p() != 1 {
            return Err(Error::NonScalarGerm { p: f.p() });
        }
        if g.p() != 1 {
            return Err(Error::NonScalarGerm { p: g.p() });
        }
        if f.n() != g.n() || h.dim() != f.n() {
            return Err(Error::DimensionMismatch {
                expected: f.n(),
                got: if f.n() != g.n() { g.n() } else { h.dim() },
            });
        }
        let g_comp = g.component(0).compose_linear(h.matrix());
        let g_aligned = match sign {
            SignBranch::Plus => g_comp,
            SignBranch::Minus => g_comp.neg(),
        };
        Ok(Self {
            f_src: f.component(0).clone(),
            g_aligned,
            h: h.clone(),
            negate_in: false,
            negate_out: sign == SignBranch::Minus,
            sign,
            degree_bound: f.degree_bound().max(g.degree_bound()),
            tol: *tol,
        })
    }

    pub fn h(&self) -> &CoordChange {
        &self.h
    }

    pub fn sign_branch(&self) -> SignBranch {
        self.sign
    }

    pub fn source_dim(&self) -> usize {
        self.f_src.num_vars()
    }

    fn eps_zero_at(&self, x: &[f64]) -> f64 {
        self.tol.eps_zero(norm(x), self.degree_bound)
    }

    fn theta_plus(&self, x: &[f64], y: f64) -> (f64, Branch) {
        if y == 0.0 {
            return (0.0, Branch::ZeroY);
        }
        let fx = self.f_src.eval(x).expect("dimension checked at construction");
        if fx.abs() <= self.eps_zero_at(x) {
            return (y, Branch::ZeroF);
        }
        let gx = self.g_aligned.eval(x).expect("dimension checked at construction");
        if y.abs() <= fx.abs() {
            return (gx * y / fx, Branch::Middle);
        }
        if (y > 0.0) == (fx > 0.0) {
            (y - fx + gx, Branch::OuterSame)
        } else {
            (y + fx - gx, Branch::OuterOpposite)
        }
    }

    /// Evaluate `H(x, y) = (h(x), theta(x, y))`, reporting the case fired.
    pub fn eval_with_branch(&self, x: &[f64], y: f64) -> (HomeoValue, f64) {
        let y_in = if self.negate_in { -y } else { y };
        let (t, branch) = self.theta_plus(x, y_in);
        let theta = if self.negate_out { -t } else { t };
        (
            HomeoValue {
                x: self.h.apply(x),
                y: theta,
                branch,
            },
            theta,
        )
    }

    /// Evaluate `H(x, y)` as `(h(x), theta)`.
    pub fn eval_homeo(&self, x: &[f64], y: f64) -> (Vec<f64>, f64) {
        let (v, theta) = self.eval_with_branch(x, y);
        (v.x, theta)
    }

    /// The role-swapped construction: the same formula built from
    /// `(g o h, f, h^{-1})`, so that forward-then-inverse is the identity.
    pub fn inverse(&self) -> Self {
        let inv = self.h.inverse_matrix();
        Self {
            f_src: self.g_aligned.compose_linear(inv),
            g_aligned: self.f_src.compose_linear(inv),
            h: self.h.inverted(),
            negate_in: self.negate_out,
            negate_out: self.negate_in,
            sign: self.sign,
            degree_bound: self.degree_bound,
            tol: self.tol,
        }
    }

    /// Inverse evaluation without materializing the role-swapped map.
    pub fn eval_inverse_homeo(&self, u: &[f64], v: f64) -> (Vec<f64>, f64) {
        self.inverse().eval_homeo(u, v)
    }
}

/// Construct the Lemma map for a pair whose contact verdict passed.
/// Refuses `Distinct` and `Inconclusive` verdicts: the construction
/// hypotheses are unmet.
pub fn synth_single(
    f: &PolyGerm,
    g: &PolyGerm,
    h: &CoordChange,
    verdict: &ContactVerdict,
    tol: &ToleranceConfig,
) -> Result<PiecewiseHomeo, Error> {
    let sign = match verdict.kind {
        VerdictKind::Equivalent => SignBranch::Plus,
        VerdictKind::NegEquivalent => SignBranch::Minus,
        other => {
            return Err(Error::VerdictNotEquivalent {
                kind: other.to_string(),
            })
        }
    };
    PiecewiseHomeo::from_parts(f, g, h, sign, tol)
}

impl EvaluableMap for PiecewiseHomeo {
    fn dim_in(&self) -> usize {
        self.source_dim() + 1
    }

    fn dim_out(&self) -> usize {
        self.dim_in()
    }

    fn eval(&self, input: &[f64]) -> Vec<f64> {
        let n = self.source_dim();
        let (mut out, theta) = self.eval_homeo(&input[..n], input[n]);
        out.push(theta);
        out
    }
}

impl InvertibleMap for PiecewiseHomeo {
    fn eval_inverse(&self, output: &[f64]) -> Vec<f64> {
        self.inverse().eval(output)
    }
}

impl EvaluableMap for CoordChange {
    fn dim_in(&self) -> usize {
        self.dim()
    }

    fn dim_out(&self) -> usize {
        self.dim()
    }

    fn eval(&self, input: &[f64]) -> Vec<f64> {
        self.apply(input)
    }
}

impl InvertibleMap for CoordChange {
    fn eval_inverse(&self, output: &[f64]) -> Vec<f64> {
        self.apply_inverse(output)
    }
}

/// Product map `(h(x), theta_1(x, y_1), ..., theta_p(x, y_p))`: a contact
/// family of per-component constructions sharing one common factor `h`.
#[derive(Debug, Clone)]
pub struct MultiHomeo {
    h: CoordChange,
    components: Vec<PiecewiseHomeo>,
}

/// Assemble per-component maps into the product. All parts must carry the
/// identical common factor (bit-equal matrices).
pub fn assemble_multi(parts: Vec<PiecewiseHomeo>) -> Result<MultiHomeo, Error> {
    let first = parts.first().ok_or_else(|| {
        Error::InvalidParameter("cannot assemble an empty contact family".into())
    })?;
    let h = first.h.clone();
    for part in &parts[1..] {
        if part.h.matrix() != h.matrix() {
            return Err(Error::MismatchedCommonFactor {
                first: h.label().to_string(),
                other: part.h.label().to_string(),
            });
        }
    }
    Ok(MultiHomeo {
        h,
        components: parts,
    })
}

impl MultiHomeo {
    pub fn h(&self) -> &CoordChange {
        &self.h
    }

    pub fn components(&self) -> &[PiecewiseHomeo] {
        &self.components
    }

    pub fn source_dim(&self) -> usize {
        self.h.dim()
    }

    pub fn target_dim(&self) -> usize {
        self.components.len()
    }

    /// Evaluate the product map on `(x, y_1, ..., y_p)`.
    pub fn eval_multi(&self, x: &[f64], ys: &[f64]) -> (Vec<f64>, Vec<f64>) {
        debug_assert_eq!(ys.len(), self.components.len());
        let hx = self.h.apply(x);
        let thetas = self
            .components
            .iter()
            .zip(ys)
            .map(|(part, &y)| part.eval_homeo(x, y).1)
            .collect();
        (hx, thetas)
    }

    pub fn inverse(&self) -> Self {
        Self {
            h: self.h.inverted(),
            components: self.components.iter().map(PiecewiseHomeo::inverse).collect(),
        }
    }
}

impl EvaluableMap for MultiHomeo {
    fn dim_in(&self) -> usize {
        self.source_dim() + self.target_dim()
    }

    fn dim_out(&self) -> usize {
        self.dim_in()
    }

    fn eval(&self, input: &[f64]) -> Vec<f64> {
        let n = self.source_dim();
        let (mut out, thetas) = self.eval_multi(&input[..n], &input[n..]);
        out.extend(thetas);
        out
    }
}

impl InvertibleMap for MultiHomeo {
    fn eval_inverse(&self, output: &[f64]) -> Vec<f64> {
        self.inverse().eval(output)
    }
}

/// The common factor of an equivalence homeomorphism, recovered as
/// `x -> pi_n(H(x, f(x)))`.
pub struct CommonFactorMap<'a> {
    map: &'a dyn EvaluableMap,
    germ: &'a PolyGerm,
}

/// Wrap `H` and `f` into the evaluable source-change `x -> pi_n(H(x, f(x)))`.
/// Bi-Lipschitz estimation of the result is the verifier's job.
pub fn extract_common_factor<'a>(
    map: &'a dyn EvaluableMap,
    germ: &'a PolyGerm,
) -> CommonFactorMap<'a> {
    CommonFactorMap { map, germ }
}

impl EvaluableMap for CommonFactorMap<'_> {
    fn dim_in(&self) -> usize {
        self.germ.n()
    }

    fn dim_out(&self) -> usize {
        self.germ.n()
    }

    fn eval(&self, input: &[f64]) -> Vec<f64> {
        let mut full = input.to_vec();
        full.extend(self.germ.eval(input).expect("dimension fixed by germ"));
        let mut out = self.map.eval(&full);
        out.truncate(self.germ.n());
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contact::same_contact;
    use crate::SampleScheme;
    use rand::Rng;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn scalar_germ(k: u32, terms: &[(Vec<u32>, f64)]) -> PolyGerm {
        let n = terms[0].0.len();
        PolyGerm::scalar(
            n,
            k,
            Polynomial::from_terms(n, terms.iter().cloned()).unwrap(),
        )
        .unwrap()
    }

    fn x_sq_pair() -> (PolyGerm, PolyGerm, PiecewiseHomeo) {
        let f = scalar_germ(2, &[(vec![2], 1.0)]);
        let g = scalar_germ(2, &[(vec![2], 2.0)]);
        let h = CoordChange::identity(1);
        let map = PiecewiseHomeo::from_parts(&f, &g, &h, SignBranch::Plus, &tol()).unwrap();
        (f, g, map)
    }

    #[test]
    fn identity_pair_gives_identity_map() {
        let f = scalar_germ(2, &[(vec![2], 1.0)]);
        let h = CoordChange::identity(1);
        let map = PiecewiseHomeo::from_parts(&f, &f, &h, SignBranch::Plus, &tol()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let x = rng.gen_range(-0.5..0.5);
            let y = rng.gen_range(-0.5..0.5);
            let (hx, theta) = map.eval_homeo(&[x], y);
            assert_eq!(hx, vec![x]);
            assert!((theta - y).abs() <= 1e-12, "theta {theta} != {y}");
        }
    }

    #[test]
    fn hand_evaluated_cases() {
        let (_, _, map) = x_sq_pair();
        // Middle case: 2 * 1 * 0.5 / 1.
        let (v, theta) = map.eval_with_branch(&[1.0], 0.5);
        assert_eq!(v.branch, Branch::Middle);
        assert_eq!(theta, 1.0);
        // Outer same-sign case: 3 - 1 + 2.
        let (v, theta) = map.eval_with_branch(&[1.0], 3.0);
        assert_eq!(v.branch, Branch::OuterSame);
        assert_eq!(theta, 4.0);
        // Middle case with negative y: 2 * 1 * (-0.5) / 1.
        let (v, theta) = map.eval_with_branch(&[1.0], -0.5);
        assert_eq!(v.branch, Branch::Middle);
        assert_eq!(theta, -1.0);
        // Boundary y = f(1) = 1: the closed middle condition wins; both
        // formulas agree there.
        let (v, theta) = map.eval_with_branch(&[1.0], 1.0);
        assert_eq!(v.branch, Branch::Middle);
        assert_eq!(theta, 2.0);
    }

    #[test]
    fn zero_y_and_zero_f_cases() {
        let (_, _, map) = x_sq_pair();
        let (v, theta) = map.eval_with_branch(&[0.7], 0.0);
        assert_eq!(v.branch, Branch::ZeroY);
        assert_eq!(theta, 0.0);
        let (v, theta) = map.eval_with_branch(&[0.0], 0.3);
        assert_eq!(v.branch, Branch::ZeroF);
        assert_eq!(theta, 0.3);
    }

    #[test]
    fn inverse_hand_case_and_round_trip() {
        let (_, _, map) = x_sq_pair();
        let (u, v) = map.eval_inverse_homeo(&[1.0], 1.0);
        assert_eq!(u, vec![1.0]);
        assert!((v - 0.5).abs() <= 1e-12);

        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..1000 {
            let x = rng.gen_range(-0.5..0.5);
            let y = rng.gen_range(-0.5..0.5);
            let (hx, theta) = map.eval_homeo(&[x], y);
            let (xb, yb) = map.eval_inverse_homeo(&hx, theta);
            assert!((xb[0] - x).abs() <= 1e-9);
            assert!((yb - y).abs() <= 1e-9, "y {y} came back {yb}");
        }
    }

    #[test]
    fn minus_branch_is_decreasing_and_maps_graph() {
        // f = x^2, g = -3 x^2: f ~ -(g o id).
        let f = scalar_germ(2, &[(vec![2], 1.0)]);
        let g = scalar_germ(2, &[(vec![2], -3.0)]);
        let h = CoordChange::identity(1);
        let map = PiecewiseHomeo::from_parts(&f, &g, &h, SignBranch::Minus, &tol()).unwrap();

        // Graph mapping: theta(x, f(x)) = g(h(x)).
        for &x in &[0.05, -0.08, 0.3] {
            let fx = x * x;
            let (_, theta) = map.eval_homeo(&[x], fx);
            assert!((theta - (-3.0 * x * x)).abs() <= 1e-12);
        }

        // Strictly decreasing in y, zero at zero.
        let (_, at_zero) = map.eval_homeo(&[0.2], 0.0);
        assert_eq!(at_zero, 0.0);
        let mut prev = f64::INFINITY;
        for i in 0..=100 {
            let y = -0.1 + 0.002 * i as f64;
            let (_, theta) = map.eval_homeo(&[0.2], y);
            assert!(theta < prev, "not strictly decreasing at y = {y}");
            prev = theta;
        }

        // Round trip through the role-swapped inverse.
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..500 {
            let x = rng.gen_range(-0.4..0.4);
            let y = rng.gen_range(-0.4..0.4);
            let (hx, theta) = map.eval_homeo(&[x], y);
            let (xb, yb) = map.eval_inverse_homeo(&hx, theta);
            assert!((xb[0] - x).abs() <= 1e-9 && (yb - y).abs() <= 1e-9);
        }
    }

    #[test]
    fn synth_refuses_failed_verdicts() {
        let scheme = SampleScheme::default();
        let f = scalar_germ(2, &[(vec![1], 1.0)]);
        let g = scalar_germ(2, &[(vec![2], 1.0)]);
        let verdict = same_contact(&f, &g, &scheme, &tol()).unwrap();
        let h = CoordChange::identity(1);
        assert!(matches!(
            synth_single(&f, &g, &h, &verdict, &tol()),
            Err(Error::VerdictNotEquivalent { .. })
        ));
    }

    #[test]
    fn assemble_requires_common_factor() {
        let f = scalar_germ(2, &[(vec![2], 1.0)]);
        let g = scalar_germ(2, &[(vec![2], 2.0)]);
        let id = CoordChange::identity(1);
        let neg = CoordChange::negation(&[true]);
        let a = PiecewiseHomeo::from_parts(&f, &g, &id, SignBranch::Plus, &tol()).unwrap();
        let b = PiecewiseHomeo::from_parts(&f, &g, &neg, SignBranch::Plus, &tol()).unwrap();
        assert!(matches!(
            assemble_multi(vec![a.clone(), b]),
            Err(Error::MismatchedCommonFactor { .. })
        ));
        assert!(assemble_multi(vec![a.clone(), a]).is_ok());
    }

    #[test]
    fn product_components_are_independent() {
        let f1 = scalar_germ(2, &[(vec![2], 1.0)]);
        let g1 = scalar_germ(2, &[(vec![2], 2.0)]);
        let f2 = scalar_germ(3, &[(vec![3], 1.0)]);
        let g2 = scalar_germ(3, &[(vec![3], 0.5)]);
        let id = CoordChange::identity(1);
        let multi = assemble_multi(vec![
            PiecewiseHomeo::from_parts(&f1, &g1, &id, SignBranch::Plus, &tol()).unwrap(),
            PiecewiseHomeo::from_parts(&f2, &g2, &id, SignBranch::Plus, &tol()).unwrap(),
        ])
        .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let x = [0.3];
        let base = multi.eval_multi(&x, &[0.02, 0.05]);
        for _ in 0..100 {
            let y2 = rng.gen_range(-0.2..0.2);
            let perturbed = multi.eval_multi(&x, &[0.02, y2]);
            assert_eq!(base.1[0], perturbed.1[0]);
        }
    }

    #[test]
    fn extract_common_factor_recovers_h() {
        let f1 = scalar_germ(2, &[(vec![2, 0], 1.0)]);
        let g1 = scalar_germ(2, &[(vec![0, 2], 2.0)]);
        let swap = CoordChange::permutation(&[1, 0]).unwrap();
        // g1 o swap = 2 x1^2 ~ f1 positively.
        let part = PiecewiseHomeo::from_parts(&f1, &g1, &swap, SignBranch::Plus, &tol()).unwrap();
        let multi = assemble_multi(vec![part]).unwrap();
        let germ = PolyGerm::new(2, 1, 2, vec![f1.component(0).clone()]).unwrap();
        let factor = extract_common_factor(&multi, &germ);
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..100 {
            let x = [rng.gen_range(-0.3..0.3), rng.gen_range(-0.3..0.3)];
            let got = factor.eval(&x);
            let want = swap.apply(&x);
            for (a, b) in got.iter().zip(&want) {
                assert!((a - b).abs() <= 1e-12);
            }
        }
    }
}
