use crate::error::{Error, Result};
use crate::tol::TOL_PMF;

/// A probability mass function over a finite alphabet.
///
/// Entries are non-negative and sum to 1 within the validation tolerance;
/// entries below the tolerance are clamped to exact zero and the vector is
/// renormalized, so downstream support tests can compare against 0.
#[derive(Clone, Debug, PartialEq)]
pub struct Pmf {
    probs: Vec<f64>,
    labels: Option<Vec<String>>,
}

impl Pmf {
    pub fn validate(raw: &[f64]) -> Result<Pmf> {
        Pmf::validate_with(raw, TOL_PMF)
    }

    pub fn validate_with(raw: &[f64], tau_pmf: f64) -> Result<Pmf> {
        if raw.is_empty() {
            return Err(Error::EmptyInput);
        }
        for (i, &v) in raw.iter().enumerate() {
            if v <= -tau_pmf {
                return Err(Error::NegativeEntry { index: i, value: v });
            }
        }
        let sum: f64 = raw.iter().sum();
        if (sum - 1.0).abs() > tau_pmf {
            return Err(Error::SumNotOne { sum });
        }
        let mut probs: Vec<f64> = raw
            .iter()
            .map(|&v| if v < tau_pmf { 0.0 } else { v })
            .collect();
        let clamped_sum: f64 = probs.iter().sum();
        // renormalize only when meaningfully off so validation is idempotent
        if (clamped_sum - 1.0).abs() > 1e-12 {
            for p in &mut probs {
                *p /= clamped_sum;
            }
        }
        Ok(Pmf { probs, labels: None })
    }

    pub fn uniform(n: usize) -> Pmf {
        assert!(n >= 1);
        Pmf {
            probs: vec![1.0 / n as f64; n],
            labels: None,
        }
    }

    pub fn point_mass(n: usize, at: usize) -> Pmf {
        assert!(at < n);
        let mut probs = vec![0.0; n];
        probs[at] = 1.0;
        Pmf { probs, labels: None }
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Pmf> {
        if labels.len() != self.probs.len() {
            return Err(Error::DimensionMismatch {
                left: labels.len(),
                right: self.probs.len(),
            });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.probs.len()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn get(&self, i: usize) -> f64 {
        self.probs[i]
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn min_prob(&self) -> f64 {
        self.probs.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Symbols with mass above the validation tolerance.
    pub fn support(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.probs[i] > TOL_PMF).collect()
    }
}

/// Shannon entropy in bits of a raw probability slice, with 0 log 0 = 0.
pub fn entropy_of(probs: &[f64]) -> f64 {
    let mut h = 0.0;
    for &p in probs {
        if p > 0.0 {
            h -= p * p.log2();
        }
    }
    h
}

/// Shannon entropy of a pmf in bits.
pub fn entropy(p: &Pmf) -> f64 {
    entropy_of(p.probs())
}

/// Binary entropy function in bits.
pub fn binary_entropy(t: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::OutOfRange { value: t });
    }
    Ok(entropy_of(&[t, 1.0 - t]))
}

/// Kullback-Leibler divergence from `q` to `p` in bits. Returns
/// `f64::INFINITY` when `p` is not absolutely continuous w.r.t. `q`.
pub fn kl_divergence(p: &Pmf, q: &Pmf) -> Result<f64> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch {
            left: p.dim(),
            right: q.dim(),
        });
    }
    let mut d = 0.0;
    for (&pi, &qi) in p.probs().iter().zip(q.probs()) {
        if pi > 0.0 {
            if qi <= 0.0 {
                return Ok(f64::INFINITY);
            }
            d += pi * (pi / qi).log2();
        }
    }
    Ok(d)
}

/// Validates a raw vector into a `Pmf` (free-function form of
/// [`Pmf::validate`]).
pub fn validate_pmf(raw: &[f64]) -> Result<Pmf> {
    Pmf::validate(raw)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn validate_accepts_simple_pmfs() {
        let p = Pmf::validate(&[0.5, 0.5]).unwrap();
        assert_eq!(p.probs(), &[0.5, 0.5]);
        let q = Pmf::validate(&[0.5, 0.25, 0.125, 0.125]).unwrap();
        assert_eq!(q.probs(), &[0.5, 0.25, 0.125, 0.125]);
    }

    #[test]
    fn validate_rejects_bad_sums_and_negatives() {
        assert!(matches!(
            Pmf::validate(&[0.5, 0.6]),
            Err(Error::SumNotOne { .. })
        ));
        assert!(matches!(
            Pmf::validate(&[-0.2, 1.2]),
            Err(Error::NegativeEntry { index: 0, .. })
        ));
        assert!(matches!(Pmf::validate(&[]), Err(Error::EmptyInput)));
    }

    #[test]
    fn validate_clamps_tiny_entries() {
        let p = Pmf::validate(&[1.0 - 1e-10, 1e-10]).unwrap();
        assert_eq!(p.get(1), 0.0);
        assert_eq!(p.get(0), 1.0);
        // small negatives within tolerance clamp to zero as well
        let q = Pmf::validate(&[1.0 + 1e-10, -1e-10]).unwrap();
        assert_eq!(q.get(1), 0.0);
    }

    #[test]
    fn entropy_known_values() {
        assert_abs_diff_eq!(entropy(&Pmf::uniform(4)), 2.0, epsilon = 1e-15);
        let dyadic = Pmf::validate(&[0.5, 0.25, 0.125, 0.125]).unwrap();
        assert_abs_diff_eq!(entropy(&dyadic), 1.75, epsilon = 1e-15);
        assert_eq!(entropy(&Pmf::point_mass(3, 0)), 0.0);
    }

    #[test]
    fn binary_entropy_known_values() {
        assert_eq!(binary_entropy(0.5).unwrap(), 1.0);
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        // frozen from an independent high-precision evaluation of
        // -t log2 t - (1-t) log2 (1-t) at t = 3/16
        assert_abs_diff_eq!(binary_entropy(0.1875).unwrap(), 0.696212, epsilon = 1e-6);
        assert!(matches!(
            binary_entropy(1.5),
            Err(Error::OutOfRange { .. })
        ));
    }

    #[test]
    fn binary_entropy_is_symmetric() {
        for i in 0..=100 {
            let t = i as f64 / 100.0;
            assert_abs_diff_eq!(
                binary_entropy(t).unwrap(),
                binary_entropy(1.0 - t).unwrap(),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn entropy_bounds_with_equality_cases() {
        use proptest::prelude::*;
        proptest!(|(raw in proptest::collection::vec(1e-6..1.0f64, 1..12))| {
            let sum: f64 = raw.iter().sum();
            let probs: Vec<f64> = raw.iter().map(|v| v / sum).collect();
            let p = Pmf::validate(&probs).unwrap();
            let h = entropy(&p);
            prop_assert!(h >= 0.0);
            prop_assert!(h <= (p.dim() as f64).log2() + 1e-12);
        });
        assert_eq!(entropy(&Pmf::point_mass(5, 2)), 0.0);
        assert_abs_diff_eq!(entropy(&Pmf::uniform(8)), 3.0, epsilon = 1e-12);
    }

    #[test]
    fn kl_divergence_cases() {
        let p = Pmf::validate(&[0.3, 0.7]).unwrap();
        assert_abs_diff_eq!(kl_divergence(&p, &p).unwrap(), 0.0, epsilon = 1e-15);
        let point = Pmf::point_mass(2, 0);
        let half = Pmf::uniform(2);
        assert_abs_diff_eq!(kl_divergence(&point, &half).unwrap(), 1.0, epsilon = 1e-15);
        assert_eq!(kl_divergence(&half, &point).unwrap(), f64::INFINITY);
        let three = Pmf::uniform(3);
        assert!(matches!(
            kl_divergence(&half, &three),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
