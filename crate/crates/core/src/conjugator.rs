//! The harmonic conjugate as the Fourier multiplier `−i·sign(k)`.
//!
//! On coefficients, `r^k cos kx ↦ r^k sin kx` and `r^k sin kx ↦ −r^k cos kx`,
//! so `Ṽ(k) = −i·sign(k)·Û(k)` with the mean sent to zero. The multiplier has
//! modulus at most one, hence `ℓ¹(Ṽ) ≤ ℓ¹(Û)` and a finite `ℓ¹` norm
//! certifies a continuous extension to the closed disc.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::trig_series::{CertifiedSeries, TrigSeries, REAL_TOL};

/// A real-valued series, its conjugate and an `ℓ¹` bound for the conjugate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConjugatePair {
    pub u_series: TrigSeries,
    pub v_series: TrigSeries,
    pub l1_certificate: f64,
}

impl ConjugatePair {
    pub fn new(u: &CertifiedSeries) -> Result<Self> {
        let v = conjugate(&u.series)?;
        let l1_certificate = v.l1_norm() + u.l1_tail;
        Ok(Self {
            u_series: u.series.clone(),
            v_series: v,
            l1_certificate,
        })
    }
}

/// Conjugate of a real-valued series; rejects series failing the
/// real-valuedness predicate at tolerance `1e-12`.
pub fn conjugate(s: &TrigSeries) -> Result<TrigSeries> {
    s.ensure_real_valued(REAL_TOL)?;
    Ok(conjugate_unchecked(s))
}

/// The multiplier applied without the real-valuedness check. For an
/// analytic-type input this is `−i·(S − Ŝ(0))`.
pub fn conjugate_unchecked(s: &TrigSeries) -> TrigSeries {
    TrigSeries::from_pairs(s.iter().filter(|&(k, _)| k != 0).map(|(k, c)| {
        let m = if k > 0 {
            Complex64::new(0.0, -1.0)
        } else {
            Complex64::new(0.0, 1.0)
        };
        (k, c * m)
    }))
}

/// Tail-preserving conjugate of a certified series: the multiplier does not
/// increase any coefficient modulus.
pub fn conjugate_certified(s: &CertifiedSeries) -> Result<CertifiedSeries> {
    Ok(CertifiedSeries {
        series: conjugate(&s.series)?,
        l1_tail: s.l1_tail,
    })
}

/// `u + i·ũ`: `2û(k)` for `k > 0`, `û(0)` at `k = 0`, nothing below.
pub fn analytic_completion(u: &TrigSeries) -> Result<TrigSeries> {
    u.ensure_real_valued(REAL_TOL)?;
    Ok(analytic_completion_unchecked(u))
}

pub fn analytic_completion_unchecked(u: &TrigSeries) -> TrigSeries {
    TrigSeries::from_pairs(
        u.iter()
            .filter(|&(k, _)| k >= 0)
            .map(|(k, c)| (k, if k == 0 { c } else { c * 2.0 })),
    )
}

/// Completion of a certified series. The kept part doubles positive
/// frequencies, and so does the tail: `|2ĉ(k)| = |ĉ(k)| + |ĉ(−k)|`.
pub fn analytic_completion_certified(u: &CertifiedSeries) -> Result<CertifiedSeries> {
    Ok(CertifiedSeries {
        series: analytic_completion(&u.series)?,
        l1_tail: u.l1_tail,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trig_series::TrigSeries;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn cos_to_sin_to_minus_cos() {
        assert_eq!(conjugate(&TrigSeries::cos()).unwrap(), TrigSeries::sin());
        assert_eq!(
            conjugate(&TrigSeries::sin()).unwrap(),
            TrigSeries::cos().scale_real(-1.0)
        );
    }

    #[test]
    fn constant_goes_to_zero() {
        assert!(conjugate(&TrigSeries::constant(c(4.0, 0.0))).unwrap().is_empty());
    }

    #[test]
    fn rejects_complex_series() {
        assert!(conjugate(&TrigSeries::monomial(1, c(1.0, 0.0))).is_err());
        let z = TrigSeries::monomial(1, c(1.0, 0.0));
        assert_eq!(conjugate_unchecked(&z), z.mul_neg_i());
    }

    #[test]
    fn completion_examples() {
        assert_eq!(
            analytic_completion(&TrigSeries::cos()).unwrap(),
            TrigSeries::monomial(1, c(1.0, 0.0))
        );
        let k = TrigSeries::constant(c(2.0, 0.0));
        assert_eq!(analytic_completion(&k).unwrap(), k);
        let f = TrigSeries::monomial(2, c(3.0, 4.0));
        assert_eq!(analytic_completion(&f.real_part()).unwrap(), f);
    }

    #[test]
    fn pair_certificate() {
        let u = CertifiedSeries {
            series: TrigSeries::cos(),
            l1_tail: 0.25,
        };
        let p = ConjugatePair::new(&u).unwrap();
        assert_eq!(p.v_series, TrigSeries::sin());
        assert_eq!(p.l1_certificate, 1.25);
    }
}
