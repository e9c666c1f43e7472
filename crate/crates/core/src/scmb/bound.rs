use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_2;

use super::bias::critical_points;
use super::EPS_EQUAL_RADII;
use crate::{Error, Result};

/// Canonical multipath configurations, one path per satellite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundCase {
    /// A single satellite is NLOS.
    Case1,
    /// Every satellite has the same NLOS bias.
    Case2,
    /// Biases differ.
    Case3,
}

impl std::fmt::Display for BoundCase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            BoundCase::Case1 => "CASE1",
            BoundCase::Case2 => "CASE2",
            BoundCase::Case3 => "CASE3",
        })
    }
}

/// `[lower, ∞)` when attained, `(lower, ∞)` otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorBound {
    pub case: BoundCase,
    pub lower: f64,
    pub lower_attained: bool,
    /// Azimuth separation where the lower bound is reached, radians.
    pub attained_at: Option<f64>,
    /// Always `+∞`.
    pub upper: f64,
}

impl std::fmt::Display for ErrorBound {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let open = if self.lower_attained { '[' } else { '(' };
        write!(f, "{}: {open}{}, inf)", self.case, self.lower)
    }
}

/// Error bound for satellites with one path each, given their radii (zero = LOS).
pub fn case_bound(radii: &[f64]) -> Result<ErrorBound> {
    if radii.len() < 2 {
        return Err(Error::TooFew {
            what: "satellites",
            needed: 2,
            got: radii.len(),
        });
    }
    if radii.iter().any(|r| !(r.is_finite() && *r >= 0.0)) {
        return Err(Error::InvalidInput(
            "radii must be finite and non-negative".into(),
        ));
    }
    let mut nonzero: Vec<f64> = radii.iter().copied().filter(|r| *r > 0.0).collect();
    nonzero.sort_by(f64::total_cmp);

    let bound = |case, lower, lower_attained, attained_at| ErrorBound {
        case,
        lower,
        lower_attained,
        attained_at,
        upper: f64::INFINITY,
    };
    match nonzero.as_slice() {
        [] => Err(Error::NoMultipath),
        [only] => Ok(bound(BoundCase::Case1, *only, true, Some(FRAC_PI_2))),
        [first, .., last]
            if nonzero.len() == radii.len() && last - first <= EPS_EQUAL_RADII * last =>
        {
            Ok(bound(BoundCase::Case2, *first, false, None))
        }
        [smallest, second, ..] => {
            let cp = critical_points(*smallest, *second)?;
            Ok(bound(
                BoundCase::Case3,
                *second,
                cp.attained,
                cp.attained.then_some(cp.delta_theta),
            ))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_cases() {
        let b = case_bound(&[0.0, 40.0, 0.0, 0.0]).unwrap();
        assert_eq!(b.case, BoundCase::Case1);
        assert_eq!(b.lower, 40.0);
        assert!(b.lower_attained);
        assert_eq!(b.attained_at, Some(FRAC_PI_2));
        assert!(b.upper.is_infinite());

        let b = case_bound(&[40.0; 4]).unwrap();
        assert_eq!(b.case, BoundCase::Case2);
        assert_eq!(b.lower, 40.0);
        assert!(!b.lower_attained);

        let b = case_bound(&[60.0, 40.0, 30.0, 15.0]).unwrap();
        assert_eq!(b.case, BoundCase::Case3);
        assert_eq!(b.lower, 30.0);
        assert!((b.attained_at.unwrap().to_degrees() - 60.0).abs() < 1e-9);
        assert_eq!(b.to_string(), "CASE3: [30, inf)");
    }

    #[test]
    fn near_equal_radii_are_case2() {
        let b = case_bound(&[40.0, 40.0 * (1.0 + 1e-12), 40.0]).unwrap();
        assert_eq!(b.case, BoundCase::Case2);
    }

    #[test]
    fn errors() {
        assert!(matches!(case_bound(&[40.0]), Err(Error::TooFew { .. })));
        assert_eq!(case_bound(&[0.0, 0.0]).unwrap_err(), Error::NoMultipath);
        assert!(case_bound(&[-1.0, 3.0]).is_err());
    }

    #[test]
    fn mixed_los_and_equal_nlos_is_case3() {
        let b = case_bound(&[0.0, 40.0, 40.0]).unwrap();
        assert_eq!(b.case, BoundCase::Case3);
        assert_eq!(b.lower, 40.0);
        assert!(!b.lower_attained);
    }
}
