//! Geometry of achievable-point sets on the utility-privacy plane:
//! upper concave envelopes, the sanity band, and the curve CSV format.

use crate::error::{Error, Result};
use crate::prob::JointPmf;
use crate::tol::TOL_NUM;

/// A point on the utility-privacy plane: leakage `I(X;U)` on the
/// horizontal axis, utility `I(Y;U)` on the vertical axis, both in bits,
/// plus a free-form provenance tag.
#[derive(Clone, Debug, PartialEq)]
pub struct TradeoffPoint {
    pub leakage: f64,
    pub utility: f64,
    pub tag: String,
}

impl TradeoffPoint {
    pub fn new(leakage: f64, utility: f64, tag: impl Into<String>) -> TradeoffPoint {
        TradeoffPoint {
            leakage,
            utility,
            tag: tag.into(),
        }
    }
}

/// A concave piecewise-linear function given by breakpoints with strictly
/// increasing leakage; the domain is the breakpoint leakage range.
#[derive(Clone, Debug, PartialEq)]
pub struct PiecewiseLinear {
    breakpoints: Vec<TradeoffPoint>,
}

impl PiecewiseLinear {
    pub fn breakpoints(&self) -> &[TradeoffPoint] {
        &self.breakpoints
    }

    pub fn domain(&self) -> (f64, f64) {
        (
            self.breakpoints.first().expect("non-empty").leakage,
            self.breakpoints.last().expect("non-empty").leakage,
        )
    }

    /// Piecewise-linear evaluation; arguments outside the domain clamp to
    /// the nearest endpoint and set the flag.
    pub fn evaluate(&self, x: f64) -> (f64, bool) {
        let (lo, hi) = self.domain();
        if x < lo {
            return (self.breakpoints[0].utility, true);
        }
        if x > hi {
            return (self.breakpoints.last().unwrap().utility, true);
        }
        let pts = &self.breakpoints;
        for w in pts.windows(2) {
            if x <= w[1].leakage {
                let (a, b) = (&w[0], &w[1]);
                let t = (x - a.leakage) / (b.leakage - a.leakage);
                return (a.utility + t * (b.utility - a.utility), false);
            }
        }
        (pts.last().unwrap().utility, false)
    }

    /// Largest slope increase between consecutive segments (a concave
    /// function keeps this at or below zero up to rounding).
    pub fn max_slope_increase(&self) -> f64 {
        let pts = &self.breakpoints;
        let mut worst = f64::NEG_INFINITY;
        for w in pts.windows(3) {
            let s1 = (w[1].utility - w[0].utility) / (w[1].leakage - w[0].leakage);
            let s2 = (w[2].utility - w[1].utility) / (w[2].leakage - w[1].leakage);
            worst = worst.max(s2 - s1);
        }
        if worst == f64::NEG_INFINITY {
            0.0
        } else {
            worst
        }
    }
}

fn cross(a: &TradeoffPoint, b: &TradeoffPoint, c: &TradeoffPoint) -> f64 {
    (b.leakage - a.leakage) * (c.utility - a.utility)
        - (b.utility - a.utility) * (c.leakage - a.leakage)
}

/// Upper concave envelope of a finite point set: the pointwise-minimal
/// concave majorant, computed as the upper hull of the points after a
/// sort-by-leakage sweep. Points sharing a leakage coordinate within the
/// numeric tolerance keep only the highest utility.
pub fn upper_concave_envelope(points: &[TradeoffPoint]) -> Result<PiecewiseLinear> {
    if points.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut sorted: Vec<TradeoffPoint> = points.to_vec();
    sorted.sort_by(|a, b| {
        a.leakage
            .partial_cmp(&b.leakage)
            .expect("finite leakage")
            .then(a.utility.partial_cmp(&b.utility).expect("finite utility"))
    });
    // duplicate leakage keeps max utility
    let mut dedup: Vec<TradeoffPoint> = Vec::with_capacity(sorted.len());
    for p in sorted {
        match dedup.last() {
            Some(last) if (p.leakage - last.leakage).abs() <= TOL_NUM => {
                if p.utility > last.utility {
                    *dedup.last_mut().unwrap() = p;
                }
            }
            _ => dedup.push(p),
        }
    }
    // monotone-chain upper hull: keep right turns, merge collinear runs
    let mut hull: Vec<TradeoffPoint> = Vec::with_capacity(dedup.len());
    for p in dedup {
        while hull.len() >= 2 && cross(&hull[hull.len() - 2], &hull[hull.len() - 1], &p) >= -TOL_NUM
        {
            hull.pop();
        }
        hull.push(p);
    }
    Ok(PiecewiseLinear { breakpoints: hull })
}

/// Envelope evaluation (free-function form of [`PiecewiseLinear::evaluate`]).
pub fn evaluate_envelope(env: &PiecewiseLinear, x: f64) -> (f64, bool) {
    env.evaluate(x)
}

/// The two chords every admissible trade-off curve must lie between: the
/// upper line from `(0, H(Y|X))` to `(I(X;Y), H(Y))` and the lower line
/// from `(0, leftmost_utility)` to the same right endpoint. Returned as
/// `(lower, upper)`. When `X` and `Y` are independent both degenerate to
/// the single point `(0, H(Y))`.
pub fn sanity_band(j: &JointPmf, leftmost_utility: f64) -> (PiecewiseLinear, PiecewiseLinear) {
    let ixy = j.mutual_information();
    let hy = crate::prob::entropy(&j.marginal_y());
    let hyx = hy - ixy;
    if ixy <= TOL_NUM {
        let point = PiecewiseLinear {
            breakpoints: vec![TradeoffPoint::new(0.0, hy, "band")],
        };
        return (point.clone(), point);
    }
    let upper = PiecewiseLinear {
        breakpoints: vec![
            TradeoffPoint::new(0.0, hyx, "band_upper"),
            TradeoffPoint::new(ixy, hy, "band_upper"),
        ],
    };
    let lower = PiecewiseLinear {
        breakpoints: vec![
            TradeoffPoint::new(0.0, leftmost_utility, "band_lower"),
            TradeoffPoint::new(ixy, hy, "band_lower"),
        ],
    };
    (lower, upper)
}

/// Whether an achievable point respects the proven part of the band:
/// leakage inside `[0, I(X;Y)]` and utility inside
/// `[0, leakage + H(Y|X)]`, all within `tol`.
pub fn within_sanity_band(
    point: &TradeoffPoint,
    i_xy: f64,
    h_y_given_x: f64,
    tol: f64,
) -> bool {
    point.leakage >= -tol
        && point.leakage <= i_xy + tol
        && point.utility >= -tol
        && point.utility <= point.leakage + h_y_given_x + tol
}

/// Achievable points together with their upper concave envelope.
#[derive(Clone, Debug)]
pub struct TradeoffCurve {
    pub points: Vec<TradeoffPoint>,
    pub envelope: PiecewiseLinear,
}

impl TradeoffCurve {
    pub fn from_points(points: Vec<TradeoffPoint>) -> Result<TradeoffCurve> {
        let envelope = upper_concave_envelope(&points)?;
        Ok(TradeoffCurve { points, envelope })
    }
}

/// Row kind in the curve CSV format.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CurveKind {
    Point,
    Envelope,
    BandUpper,
    BandLower,
}

impl CurveKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CurveKind::Point => "point",
            CurveKind::Envelope => "envelope",
            CurveKind::BandUpper => "band_upper",
            CurveKind::BandLower => "band_lower",
        }
    }

    pub fn parse(s: &str) -> Result<CurveKind> {
        match s {
            "point" => Ok(CurveKind::Point),
            "envelope" => Ok(CurveKind::Envelope),
            "band_upper" => Ok(CurveKind::BandUpper),
            "band_lower" => Ok(CurveKind::BandLower),
            other => Err(Error::InvalidInput(format!("unknown curve kind {other:?}"))),
        }
    }
}

/// Serializes a curve (and optionally its band) as
/// `epsilon_bits,utility_bits,kind` rows. Extra envelope rows evaluated
/// on `grid` leakage values are appended after the breakpoints.
pub fn curve_to_csv(
    curve: &TradeoffCurve,
    band: Option<(&PiecewiseLinear, &PiecewiseLinear)>,
    grid: &[f64],
) -> String {
    let mut out = String::from("epsilon_bits,utility_bits,kind\n");
    let mut push = |x: f64, y: f64, kind: CurveKind| {
        out.push_str(&format!("{x:.12},{y:.12},{}\n", kind.as_str()));
    };
    for p in &curve.points {
        push(p.leakage, p.utility, CurveKind::Point);
    }
    for p in curve.envelope.breakpoints() {
        push(p.leakage, p.utility, CurveKind::Envelope);
    }
    for &x in grid {
        let (y, _) = curve.envelope.evaluate(x);
        push(x, y, CurveKind::Envelope);
    }
    if let Some((lower, upper)) = band {
        for p in lower.breakpoints() {
            push(p.leakage, p.utility, CurveKind::BandLower);
        }
        for p in upper.breakpoints() {
            push(p.leakage, p.utility, CurveKind::BandUpper);
        }
    }
    out
}

/// Parses rows produced by [`curve_to_csv`].
pub fn curve_from_csv(text: &str) -> Result<Vec<(f64, f64, CurveKind)>> {
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if i == 0 {
            if line.trim() != "epsilon_bits,utility_bits,kind" {
                return Err(Error::InvalidInput(format!("bad csv header {line:?}")));
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let mut fields = line.split(',');
        let (Some(a), Some(b), Some(c)) = (fields.next(), fields.next(), fields.next()) else {
            return Err(Error::InvalidInput(format!("bad csv row {line:?}")));
        };
        let x: f64 = a
            .trim()
            .parse()
            .map_err(|_| Error::InvalidInput(format!("bad csv number {a:?}")))?;
        let y: f64 = b
            .trim()
            .parse()
            .map_err(|_| Error::InvalidInput(format!("bad csv number {b:?}")))?;
        rows.push((x, y, CurveKind::parse(c.trim())?));
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn pts(raw: &[(f64, f64)]) -> Vec<TradeoffPoint> {
        raw.iter()
            .map(|&(x, y)| TradeoffPoint::new(x, y, "t"))
            .collect()
    }

    #[test]
    fn concave_peak_keeps_all_points() {
        let env = upper_concave_envelope(&pts(&[(0.0, 0.0), (1.0, 1.0), (2.0, 0.0)])).unwrap();
        assert_eq!(env.breakpoints().len(), 3);
    }

    #[test]
    fn point_below_chord_is_dropped() {
        let env = upper_concave_envelope(&pts(&[(0.0, 0.0), (1.0, 0.2), (2.0, 1.0)])).unwrap();
        assert_eq!(env.breakpoints().len(), 2);
        let (v, clamped) = env.evaluate(1.0);
        assert!(!clamped);
        assert_abs_diff_eq!(v, 0.5, epsilon = 1e-12);
    }

    #[test]
    fn evaluation_cases() {
        let env = upper_concave_envelope(&pts(&[(0.0, 1.0), (2.0, 2.0)])).unwrap();
        assert_eq!(env.evaluate(0.0), (1.0, false));
        assert_abs_diff_eq!(env.evaluate(1.0).0, 1.5, epsilon = 1e-12);
        let (v, clamped) = env.evaluate(-1.0);
        assert!(clamped);
        assert_eq!(v, 1.0);
        let (v, clamped) = env.evaluate(3.0);
        assert!(clamped);
        assert_eq!(v, 2.0);
    }

    #[test]
    fn duplicate_leakage_keeps_max_utility() {
        let env =
            upper_concave_envelope(&pts(&[(0.0, 0.3), (0.0, 0.7), (1.0, 1.0)])).unwrap();
        assert_abs_diff_eq!(env.evaluate(0.0).0, 0.7, epsilon = 1e-12);
    }

    #[test]
    fn empty_input_is_rejected() {
        assert!(matches!(
            upper_concave_envelope(&[]),
            Err(Error::EmptyInput)
        ));
    }

    #[test]
    fn band_degenerates_for_independent_pair() {
        let j = crate::prob::joint_from(
            &crate::prob::Pmf::validate(&[0.4, 0.6]).unwrap(),
            &crate::prob::Channel::constant(
                2,
                crate::prob::Pmf::validate(&[0.5, 0.25, 0.25]).unwrap(),
            ),
        )
        .unwrap();
        let hy = crate::prob::entropy(&j.marginal_y());
        let (lower, upper) = sanity_band(&j, 0.0);
        assert_eq!(lower.breakpoints().len(), 1);
        assert_abs_diff_eq!(upper.breakpoints()[0].utility, hy, epsilon = 1e-12);
    }

    #[test]
    fn band_endpoints() {
        let j = crate::fixtures::example3_joint();
        let ixy = j.mutual_information();
        let hy = crate::prob::entropy(&j.marginal_y());
        let (lower, upper) = sanity_band(&j, 0.9);
        assert_abs_diff_eq!(upper.evaluate(0.0).0, hy - ixy, epsilon = 1e-12);
        assert_abs_diff_eq!(upper.evaluate(ixy).0, hy, epsilon = 1e-12);
        assert_abs_diff_eq!(lower.evaluate(ixy).0, hy, epsilon = 1e-12);
        assert_abs_diff_eq!(lower.evaluate(0.0).0, 0.9, epsilon = 1e-12);
    }

    #[test]
    fn csv_round_trip() {
        let curve = TradeoffCurve::from_points(pts(&[(0.0, 0.5), (1.0, 0.9), (2.0, 1.0)])).unwrap();
        let j = crate::fixtures::example3_joint();
        let (lower, upper) = sanity_band(&j, 0.9);
        let text = curve_to_csv(&curve, Some((&lower, &upper)), &[0.5]);
        let rows = curve_from_csv(&text).unwrap();
        assert_eq!(rows.len(), 3 + 3 + 1 + 2 + 2);
        assert!(rows.iter().any(|r| r.2 == CurveKind::BandUpper));
    }

    proptest! {
        #[test]
        fn envelope_is_concave_majorant_of_inputs(
            raw in proptest::collection::vec((0.0..4.0f64, 0.0..4.0f64), 1..40)
        ) {
            let points = pts(&raw);
            let env = upper_concave_envelope(&points).unwrap();
            // concavity
            prop_assert!(env.max_slope_increase() <= 1e-9);
            // majorant over every input point
            for p in &points {
                let (v, clamped) = env.evaluate(p.leakage);
                prop_assert!(!clamped);
                prop_assert!(v >= p.utility - 1e-9);
            }
            // minimality: every breakpoint is an input point
            for b in env.breakpoints() {
                prop_assert!(points.iter().any(
                    |p| (p.leakage - b.leakage).abs() < 1e-12 && (p.utility - b.utility).abs() < 1e-12
                ));
            }
            // idempotence
            let again = upper_concave_envelope(env.breakpoints()).unwrap();
            prop_assert_eq!(again.breakpoints().len(), env.breakpoints().len());
        }

        #[test]
        fn envelope_with_top_right_point_is_non_decreasing(
            raw in proptest::collection::vec((0.0..2.0f64, 0.0..2.0f64), 1..20)
        ) {
            let mut points = pts(&raw);
            points.push(TradeoffPoint::new(2.5, 2.5, "R"));
            let env = upper_concave_envelope(&points).unwrap();
            for w in env.breakpoints().windows(2) {
                prop_assert!(w[1].utility >= w[0].utility - 1e-9);
            }
        }
    }
}
