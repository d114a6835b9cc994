//! Sampling semidecision of the "same contact" relation: `f ~ g` when there
//! are positive constants `c1, c2` with `c1 f(x) <= g(x) <= c2 f(x)` near
//! the origin.
//!
//! Finite sampling can certify the constants on the sample set but can never
//! prove distinctness, so `Distinct` is an evidence-graded verdict: it
//! requires a monotone ratio trend across at least three consecutive radii
//! (a geometric decay or growth consistent with a genuine order gap), never
//! a single bad ratio. `Inconclusive` is the honest default.

use serde::Serialize;

use crate::coord::CoordChange;
use crate::germ::PolyGerm;
use crate::sample::SampleScheme;
use crate::{Error, ToleranceConfig};

/// Outcome kind of the same-contact test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum VerdictKind {
    /// `f ~ g`: all sampled ratios positive and bounded.
    Equivalent,
    /// `f ~ -g`: all sampled ratios negative and bounded.
    NegEquivalent,
    /// A trend certificate separates the pair on the sample set.
    Distinct,
    Inconclusive,
}

impl VerdictKind {
    pub fn is_definite_link(self) -> bool {
        matches!(self, VerdictKind::Equivalent | VerdictKind::NegEquivalent)
    }
}

impl std::fmt::Display for VerdictKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            VerdictKind::Equivalent => "Equivalent",
            VerdictKind::NegEquivalent => "NegEquivalent",
            VerdictKind::Distinct => "Distinct",
            VerdictKind::Inconclusive => "Inconclusive",
        };
        f.write_str(s)
    }
}

/// Per-radius ratio summary kept as the verdict's audit trail.
#[derive(Debug, Clone, Serialize)]
pub struct RadiusStats {
    pub radius: f64,
    pub samples: usize,
    /// Samples with `|f(x)|` above the zero threshold, i.e. with a ratio.
    pub ratios: usize,
    pub min_abs_ratio: f64,
    pub max_abs_ratio: f64,
    pub sign_changes: bool,
    /// Samples where `f` vanishes but `g` does not.
    pub mismatches: usize,
    pub both_zero: usize,
}

/// Summary statistics backing a verdict.
#[derive(Debug, Clone, Serialize)]
pub struct Evidence {
    pub samples: usize,
    pub per_radius: Vec<RadiusStats>,
    pub note: Option<String>,
}

/// Outcome of the same-contact test, with estimated constants or a witness.
#[derive(Debug, Clone, Serialize)]
pub struct ContactVerdict {
    pub kind: VerdictKind,
    pub c_lower: Option<f64>,
    pub c_upper: Option<f64>,
    pub witness: Option<Vec<f64>>,
    pub evidence: Evidence,
}

/// Vanishing order of a scalar germ along one ray.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum OrderEstimate {
    /// Least-squares slope of `log|f(r d)|` against `log r`.
    Order(f64),
    /// All sampled values on the ray sit below the zero threshold.
    IdenticallyZero,
}

/// Per-direction discrete invariant: sign pattern along the radii and the
/// estimated order of vanishing, per component.
#[derive(Debug, Clone, Serialize)]
pub struct RaySignature {
    pub direction: Vec<f64>,
    pub per_component: Vec<ComponentSignature>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ComponentSignature {
    /// One entry per radius, in {-1, 0, +1}.
    pub sign_pattern: Vec<i8>,
    pub order: OrderEstimate,
}

// Per-step factor a trend certificate must beat: a genuine order gap decays
// at least like r^1, i.e. by rho per radius step, while an equivalent pair's
// ratio drifts toward a constant. sqrt(rho) sits strictly between.
fn trend_step_factor(rho: f64) -> f64 {
    rho.sqrt()
}

const TREND_MIN_RADII: usize = 3;

struct RadiusAccum {
    radius: f64,
    samples: usize,
    ratios: usize,
    min_abs: f64,
    min_abs_point: Vec<f64>,
    max_abs: f64,
    max_abs_point: Vec<f64>,
    any_pos: bool,
    any_neg: bool,
    mismatches: usize,
    mismatch_point: Vec<f64>,
    both_zero: usize,
}

impl RadiusAccum {
    fn new(radius: f64) -> Self {
        Self {
            radius,
            samples: 0,
            ratios: 0,
            min_abs: f64::INFINITY,
            min_abs_point: Vec::new(),
            max_abs: 0.0,
            max_abs_point: Vec::new(),
            any_pos: false,
            any_neg: false,
            mismatches: 0,
            mismatch_point: Vec::new(),
            both_zero: 0,
        }
    }

    fn stats(&self) -> RadiusStats {
        RadiusStats {
            radius: self.radius,
            samples: self.samples,
            ratios: self.ratios,
            min_abs_ratio: if self.ratios > 0 { self.min_abs } else { f64::NAN },
            max_abs_ratio: if self.ratios > 0 { self.max_abs } else { f64::NAN },
            sign_changes: self.any_pos && self.any_neg,
            mismatches: self.mismatches,
            both_zero: self.both_zero,
        }
    }
}

fn scalar_component<'a>(f: &'a PolyGerm) -> Result<&'a crate::Polynomial, Error> {
    if f.p() != 1 {
        return Err(Error::NonScalarGerm { p: f.p() });
    }
    Ok(f.component(0))
}

/// Semidecide whether the scalar germs `f` and `g` are of the same contact
/// at the origin, on the sample set of `scheme`.
pub fn same_contact(
    f: &PolyGerm,
    g: &PolyGerm,
    scheme: &SampleScheme,
    tol: &ToleranceConfig,
) -> Result<ContactVerdict, Error> {
    let fp = scalar_component(f)?;
    let gp = scalar_component(g)?;
    if f.n() != g.n() {
        return Err(Error::DimensionMismatch {
            expected: f.n(),
            got: g.n(),
        });
    }
    scheme.validate()?;
    tol.validate()?;
    let k = f.degree_bound().max(g.degree_bound());
    let dirs = scheme.directions(f.n());
    let radii = scheme.radii();

    let mut shells: Vec<RadiusAccum> = radii.iter().map(|&r| RadiusAccum::new(r)).collect();
    for (j, &r) in radii.iter().enumerate() {
        let eps = tol.eps_zero(r, k);
        let shell = &mut shells[j];
        for d in &dirs {
            let x: Vec<f64> = d.iter().map(|&c| r * c).collect();
            let fx = fp.eval(&x)?;
            let gx = gp.eval(&x)?;
            shell.samples += 1;
            if fx.abs() <= eps {
                if gx.abs() <= eps {
                    shell.both_zero += 1;
                } else {
                    shell.mismatches += 1;
                    shell.mismatch_point = x;
                }
                continue;
            }
            let ratio = gx / fx;
            shell.ratios += 1;
            if ratio > 0.0 {
                shell.any_pos = true;
            } else {
                shell.any_neg = true;
            }
            let a = ratio.abs();
            if a < shell.min_abs {
                shell.min_abs = a;
                shell.min_abs_point = x.clone();
            }
            if a > shell.max_abs {
                shell.max_abs = a;
                shell.max_abs_point = x;
            }
        }
    }

    Ok(judge(&shells, scheme.rho, tol))
}

fn judge(shells: &[RadiusAccum], rho: f64, tol: &ToleranceConfig) -> ContactVerdict {
    let per_radius: Vec<RadiusStats> = shells.iter().map(RadiusAccum::stats).collect();
    let samples: usize = shells.iter().map(|s| s.samples).sum();
    let total_ratios: usize = shells.iter().map(|s| s.ratios).sum();
    let total_mismatches: usize = shells.iter().map(|s| s.mismatches).sum();

    let verdict = |kind, c_lower, c_upper, witness, note: Option<String>| ContactVerdict {
        kind,
        c_lower,
        c_upper,
        witness,
        evidence: Evidence {
            samples,
            per_radius: per_radius.clone(),
            note,
        },
    };

    // Vanishing mismatch: f = 0 forces g = 0 under same contact. Demand the
    // mismatch persist across consecutive radii before separating.
    if total_mismatches > 0 {
        let mut streak = 0usize;
        let mut best_streak = 0usize;
        let mut witness = None;
        for shell in shells {
            if shell.mismatches > 0 {
                streak += 1;
                best_streak = best_streak.max(streak);
                witness = Some(shell.mismatch_point.clone());
            } else if shell.samples > 0 {
                streak = 0;
            }
        }
        if best_streak >= TREND_MIN_RADII {
            return verdict(
                VerdictKind::Distinct,
                None,
                None,
                witness,
                Some("g does not vanish where f does, persistently across radii".into()),
            );
        }
        return verdict(
            VerdictKind::Inconclusive,
            None,
            None,
            None,
            Some("isolated vanishing mismatch without a persistent certificate".into()),
        );
    }

    if total_ratios == 0 {
        // Both germs below the zero threshold on every sample. The sign of
        // Assertion-3 is undefined here; report equivalence with constants 1
        // and record the ambiguity.
        return verdict(
            VerdictKind::Equivalent,
            Some(1.0),
            Some(1.0),
            None,
            Some("both germs identically zero on the sample set; sign ambiguous".into()),
        );
    }

    // Trend certificates over the suffix of radii ending at the smallest
    // sampled radius with ratio data.
    let active: Vec<&RadiusAccum> = shells.iter().filter(|s| s.ratios > 0).collect();
    let step = trend_step_factor(rho);
    if let Some(point) = decay_certificate(&active, step) {
        return verdict(
            VerdictKind::Distinct,
            None,
            None,
            Some(point),
            Some("min |ratio| decays geometrically toward the origin".into()),
        );
    }
    if let Some(point) = growth_certificate(&active, step) {
        return verdict(
            VerdictKind::Distinct,
            None,
            None,
            Some(point),
            Some("max |ratio| grows geometrically toward the origin".into()),
        );
    }

    let any_pos = shells.iter().any(|s| s.any_pos);
    let any_neg = shells.iter().any(|s| s.any_neg);
    if any_pos && any_neg {
        return verdict(
            VerdictKind::Inconclusive,
            None,
            None,
            None,
            Some("ratio changes sign but no trend certificate; zero set may thread the samples".into()),
        );
    }

    let c_lower = active.iter().map(|s| s.min_abs).fold(f64::INFINITY, f64::min);
    let c_upper = active.iter().map(|s| s.max_abs).fold(0.0, f64::max);
    if c_lower < tol.ratio_floor || c_upper > 1.0 / tol.ratio_floor {
        return verdict(
            VerdictKind::Inconclusive,
            None,
            None,
            None,
            Some(format!(
                "ratio range [{c_lower:.3e}, {c_upper:.3e}] exceeds the ratio floor"
            )),
        );
    }
    let kind = if any_pos {
        VerdictKind::Equivalent
    } else {
        VerdictKind::NegEquivalent
    };
    verdict(kind, Some(c_lower), Some(c_upper), None, None)
}

fn decay_certificate(active: &[&RadiusAccum], step: f64) -> Option<Vec<f64>> {
    if active.len() < TREND_MIN_RADII {
        return None;
    }
    let mut span = 1usize;
    for w in active.windows(2) {
        if w[1].min_abs <= step * w[0].min_abs {
            span += 1;
        } else {
            span = 1;
        }
    }
    // span counts the qualifying suffix because windows run outer-to-inner.
    if span >= TREND_MIN_RADII {
        Some(active.last().unwrap().min_abs_point.clone())
    } else {
        None
    }
}

fn growth_certificate(active: &[&RadiusAccum], step: f64) -> Option<Vec<f64>> {
    if active.len() < TREND_MIN_RADII {
        return None;
    }
    let mut span = 1usize;
    for w in active.windows(2) {
        if w[1].max_abs * step >= w[0].max_abs {
            span += 1;
        } else {
            span = 1;
        }
    }
    if span >= TREND_MIN_RADII {
        Some(active.last().unwrap().max_abs_point.clone())
    } else {
        None
    }
}

/// Same-contact of `f` against `g o h`: the signed relation underlying a
/// componentwise equivalence link. `Equivalent` records `f ~ g o h`,
/// `NegEquivalent` records `f ~ -(g o h)`.
pub fn signed_contact(
    f: &PolyGerm,
    g: &PolyGerm,
    h: &CoordChange,
    scheme: &SampleScheme,
    tol: &ToleranceConfig,
) -> Result<ContactVerdict, Error> {
    if h.dim() != g.n() {
        return Err(Error::DimensionMismatch {
            expected: g.n(),
            got: h.dim(),
        });
    }
    let composed = g.compose_linear(h.matrix());
    same_contact(f, &composed, scheme, tol)
}

/// Least-squares slope of `log|f(r d)|` against `log r` over the radii where
/// `f` clears the zero threshold.
pub fn vanishing_order(
    f: &PolyGerm,
    direction: &[f64],
    scheme: &SampleScheme,
    tol: &ToleranceConfig,
) -> Result<OrderEstimate, Error> {
    let fp = scalar_component(f)?;
    let k = f.degree_bound();
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for r in scheme.radii() {
        let point: Vec<f64> = direction.iter().map(|&c| r * c).collect();
        let v = fp.eval(&point)?;
        if v.abs() > tol.eps_zero(r, k) {
            xs.push(r.ln());
            ys.push(v.abs().ln());
        }
    }
    if xs.len() < 2 {
        return Ok(OrderEstimate::IdenticallyZero);
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    Ok(OrderEstimate::Order(sxy / sxx))
}

/// Per-direction, per-component sign patterns and order estimates.
pub fn signature(
    f: &PolyGerm,
    directions: &[Vec<f64>],
    scheme: &SampleScheme,
    tol: &ToleranceConfig,
) -> Result<Vec<RaySignature>, Error> {
    if directions.is_empty() {
        return Err(Error::InvalidParameter(
            "signature needs a nonempty direction list".into(),
        ));
    }
    let radii = scheme.radii();
    let k = f.degree_bound();
    let mut out = Vec::with_capacity(directions.len());
    for d in directions {
        let mut per_component = Vec::with_capacity(f.p());
        for comp in f.components() {
            let mut pattern = Vec::with_capacity(radii.len());
            for &r in &radii {
                let point: Vec<f64> = d.iter().map(|&c| r * c).collect();
                let v = comp.eval(&point)?;
                let eps = tol.eps_zero(r, k);
                pattern.push(if v > eps {
                    1
                } else if v < -eps {
                    -1
                } else {
                    0
                });
            }
            let scalar = PolyGerm::scalar(f.n(), k.max(1), comp.clone())?;
            let order = vanishing_order(&scalar, d, scheme, tol)?;
            per_component.push(ComponentSignature {
                sign_pattern: pattern,
                order,
            });
        }
        out.push(RaySignature {
            direction: d.clone(),
            per_component,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Polynomial;

    fn scalar(k: u32, terms: &[(Vec<u32>, f64)]) -> PolyGerm {
        let n = terms[0].0.len();
        PolyGerm::scalar(
            n,
            k,
            Polynomial::from_terms(n, terms.iter().cloned()).unwrap(),
        )
        .unwrap()
    }

    fn defaults() -> (SampleScheme, ToleranceConfig) {
        (SampleScheme::default(), ToleranceConfig::default())
    }

    #[test]
    fn exact_scaling_is_equivalent() {
        let (scheme, tol) = defaults();
        let f = scalar(2, &[(vec![2], 1.0)]);
        let g = scalar(2, &[(vec![2], 2.0)]);
        let v = same_contact(&f, &g, &scheme, &tol).unwrap();
        assert_eq!(v.kind, VerdictKind::Equivalent);
        assert!((v.c_lower.unwrap() - 2.0).abs() <= 1e-12);
        assert!((v.c_upper.unwrap() - 2.0).abs() <= 1e-12);
        assert!(v.witness.is_none());
    }

    #[test]
    fn order_gap_is_distinct_with_witness_at_smallest_radius() {
        let (scheme, tol) = defaults();
        let f = scalar(2, &[(vec![1], 1.0)]);
        let g = scalar(2, &[(vec![2], 1.0)]);
        let v = same_contact(&f, &g, &scheme, &tol).unwrap();
        assert_eq!(v.kind, VerdictKind::Distinct);
        let w = v.witness.expect("distinct verdict carries a witness");
        let r_min = scheme.radii().last().copied().unwrap();
        assert!((w[0].abs() - r_min).abs() <= 1e-12);
    }

    #[test]
    fn negated_germ_is_neg_equivalent() {
        let (scheme, tol) = defaults();
        let f = scalar(1, &[(vec![1], 1.0)]);
        let g = scalar(1, &[(vec![1], -1.0)]);
        let v = same_contact(&f, &g, &scheme, &tol).unwrap();
        assert_eq!(v.kind, VerdictKind::NegEquivalent);
        assert!((v.c_lower.unwrap() - 1.0).abs() <= 1e-12);
        assert!((v.c_upper.unwrap() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn direction_dependent_ratio_brackets_constants() {
        // f = x1^2 + x2^2, g = 3 x1^2 + x2^2: ratio depends only on the
        // direction, so the constants bracket [1, 3]. Oracle: brute-force
        // min/max of (3 d1^2 + d2^2) / (d1^2 + d2^2) over many directions.
        let scheme = SampleScheme {
            dirs_per_radius: 256,
            ..Default::default()
        };
        let tol = ToleranceConfig::default();
        let f = scalar(
            2,
            &[(vec![2, 0], 1.0), (vec![0, 2], 1.0)],
        );
        let g = scalar(
            2,
            &[(vec![2, 0], 3.0), (vec![0, 2], 1.0)],
        );
        let v = same_contact(&f, &g, &scheme, &tol).unwrap();
        assert_eq!(v.kind, VerdictKind::Equivalent);
        let lo = v.c_lower.unwrap();
        let hi = v.c_upper.unwrap();
        assert!((lo - 1.0).abs() <= 0.05, "c_lower = {lo}");
        assert!((hi - 3.0).abs() <= 0.05, "c_upper = {hi}");
    }

    #[test]
    fn vector_germ_is_rejected() {
        let (scheme, tol) = defaults();
        let f = PolyGerm::new(
            1,
            2,
            2,
            vec![
                Polynomial::monomial(vec![1], 1.0),
                Polynomial::monomial(vec![2], 1.0),
            ],
        )
        .unwrap();
        let g = scalar(2, &[(vec![2], 1.0)]);
        assert!(matches!(
            same_contact(&f, &g, &scheme, &tol),
            Err(Error::NonScalarGerm { p: 2 })
        ));
    }

    #[test]
    fn zero_set_threading_is_inconclusive() {
        // f = x1 x2, g = x1^2: per-ray ratio d1/d2 is constant in r but flips
        // sign across rays. No trend certificate, so the oracle abstains.
        let (scheme, tol) = defaults();
        let f = scalar(2, &[(vec![1, 1], 1.0)]);
        let g = scalar(2, &[(vec![2, 0], 1.0)]);
        let v = same_contact(&f, &g, &scheme, &tol).unwrap();
        assert_eq!(v.kind, VerdictKind::Inconclusive);
        assert!(v.c_lower.is_none() && v.c_upper.is_none());
    }

    #[test]
    fn identically_zero_pair_is_equivalent_with_note() {
        let (scheme, tol) = defaults();
        let zero = PolyGerm::scalar(1, 2, Polynomial::zero(1)).unwrap();
        let v = same_contact(&zero, &zero, &scheme, &tol).unwrap();
        assert_eq!(v.kind, VerdictKind::Equivalent);
        assert_eq!(v.c_lower, Some(1.0));
        assert!(v.evidence.note.is_some());
    }

    #[test]
    fn zero_against_nonzero_is_distinct() {
        let (scheme, tol) = defaults();
        let zero = PolyGerm::scalar(1, 2, Polynomial::zero(1)).unwrap();
        let g = scalar(2, &[(vec![2], 1.0)]);
        let v = same_contact(&zero, &g, &scheme, &tol).unwrap();
        assert_eq!(v.kind, VerdictKind::Distinct);
        assert!(v.witness.is_some());
    }

    #[test]
    fn signed_contact_examples() {
        let (scheme, tol) = defaults();
        // f = x, g = x, h = negation: g o h = -f.
        let f = scalar(1, &[(vec![1], 1.0)]);
        let h = CoordChange::negation(&[true]);
        let v = signed_contact(&f, &f, &h, &scheme, &tol).unwrap();
        assert_eq!(v.kind, VerdictKind::NegEquivalent);

        // f = x^2, g = x^2, h = x -> 2x: g o h = 4 f.
        let fsq = scalar(2, &[(vec![2], 1.0)]);
        let h = CoordChange::linear("2x", vec![vec![2.0]]).unwrap();
        let v = signed_contact(&fsq, &fsq, &h, &scheme, &tol).unwrap();
        assert_eq!(v.kind, VerdictKind::Equivalent);
        assert!((v.c_lower.unwrap() - 4.0).abs() <= 1e-9);
        assert!((v.c_upper.unwrap() - 4.0).abs() <= 1e-9);

        // f = x1, g = x2, h = swap: g o h = f.
        let fx1 = scalar(1, &[(vec![1, 0], 1.0)]);
        let gx2 = scalar(1, &[(vec![0, 1], 1.0)]);
        let h = CoordChange::permutation(&[1, 0]).unwrap();
        let v = signed_contact(&fx1, &gx2, &h, &scheme, &tol).unwrap();
        assert_eq!(v.kind, VerdictKind::Equivalent);
        assert!((v.c_lower.unwrap() - 1.0).abs() <= 1e-12);
        assert!((v.c_upper.unwrap() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn vanishing_order_examples() {
        let (scheme, tol) = defaults();
        let sq = scalar(2, &[(vec![2], 1.0)]);
        match vanishing_order(&sq, &[1.0], &scheme, &tol).unwrap() {
            OrderEstimate::Order(o) => assert!((o - 2.0).abs() <= 0.05, "order {o}"),
            OrderEstimate::IdenticallyZero => panic!("x^2 is not zero on the ray"),
        }

        let xy = scalar(2, &[(vec![1, 1], 1.0)]);
        assert_eq!(
            vanishing_order(&xy, &[1.0, 0.0], &scheme, &tol).unwrap(),
            OrderEstimate::IdenticallyZero
        );

        let f = scalar(3, &[(vec![1], 1.0), (vec![3], 1.0)]);
        match vanishing_order(&f, &[1.0], &scheme, &tol).unwrap() {
            OrderEstimate::Order(o) => assert!((o - 1.0).abs() <= 0.05, "order {o}"),
            OrderEstimate::IdenticallyZero => panic!("x + x^3 is not zero on the ray"),
        }
    }

    #[test]
    fn signature_signs_follow_the_germ() {
        let (scheme, tol) = defaults();
        let f = scalar(1, &[(vec![1], 1.0)]);
        let sigs = signature(&f, &[vec![1.0], vec![-1.0]], &scheme, &tol).unwrap();
        assert!(sigs[0].per_component[0].sign_pattern.iter().all(|&s| s == 1));
        assert!(sigs[1].per_component[0].sign_pattern.iter().all(|&s| s == -1));

        let sq = scalar(2, &[(vec![2], 1.0)]);
        let sigs = signature(&sq, &[vec![1.0], vec![-1.0]], &scheme, &tol).unwrap();
        for sig in &sigs {
            assert!(sig.per_component[0].sign_pattern.iter().all(|&s| s == 1));
        }
    }

    #[test]
    fn signature_of_saddle_matches_direction_sign() {
        let (scheme, tol) = defaults();
        let f = scalar(
            2,
            &[(vec![2, 0], 1.0), (vec![0, 2], -1.0)],
        );
        let dirs = scheme.directions(2);
        let sigs = signature(&f, &dirs, &scheme, &tol).unwrap();
        for sig in sigs.iter().take(64) {
            let expected = (sig.direction[0].powi(2) - sig.direction[1].powi(2)).signum() as i8;
            for &s in &sig.per_component[0].sign_pattern {
                assert_eq!(s, expected, "dir {:?}", sig.direction);
            }
        }
    }
}
