//! Finitely supported two-sided Fourier series on the unit circle.
//!
//! A [`TrigSeries`] stores `ĉ(k)` for finitely many integer frequencies and
//! represents `θ ↦ Σ ĉ(k) e^{ikθ}` on the circle, extended harmonically to the
//! closed disc by `r^{|k|}` damping.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::fmt;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{DiscError, Result};

/// Default tolerance of the real-valuedness predicate.
pub const REAL_TOL: f64 = 1e-12;

/// Re-anchor incremental powers with a direct `cis` after this many steps.
const REANCHOR: u32 = 256;

/// A point `r·e^{ix}` of the closed unit disc.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscPoint {
    r: f64,
    x: f64,
}

impl DiscPoint {
    pub fn new(r: f64, x: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&r) {
            return Err(DiscError::InvalidParameter(format!(
                "disc radius must lie in [0, 1], got {r}"
            )));
        }
        Ok(Self { r, x })
    }

    pub fn boundary(x: f64) -> Self {
        Self { r: 1.0, x }
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn x(&self) -> f64 {
        self.x
    }
}

/// Sparse table of Fourier coefficients. Absent keys are zero and exact zeros
/// are never stored.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TrigSeries {
    coeffs: BTreeMap<i64, Complex64>,
}

impl TrigSeries {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn constant(c: Complex64) -> Self {
        Self::monomial(0, c)
    }

    pub fn monomial(k: i64, c: Complex64) -> Self {
        let mut s = Self::new();
        s.insert(k, c);
        s
    }

    /// `cos θ` as `{±1 ↦ ½}`.
    pub fn cos() -> Self {
        Self::from_pairs([(1, Complex64::new(0.5, 0.0)), (-1, Complex64::new(0.5, 0.0))])
    }

    /// `sin θ` as `{1 ↦ −i/2, −1 ↦ i/2}`.
    pub fn sin() -> Self {
        Self::from_pairs([(1, Complex64::new(0.0, -0.5)), (-1, Complex64::new(0.0, 0.5))])
    }

    /// Builds a series, accumulating repeated frequencies.
    pub fn from_pairs<I: IntoIterator<Item = (i64, Complex64)>>(pairs: I) -> Self {
        let mut s = Self::new();
        for (k, c) in pairs {
            s.add_at(k, c);
        }
        s
    }

    /// Sets `ĉ(k) = c`, removing the key when `c` is zero.
    pub fn insert(&mut self, k: i64, c: Complex64) {
        if c == Complex64::new(0.0, 0.0) {
            self.coeffs.remove(&k);
        } else {
            self.coeffs.insert(k, c);
        }
    }

    /// `ĉ(k) += c`, pruning a resulting zero.
    pub fn add_at(&mut self, k: i64, c: Complex64) {
        let v = self.get(k) + c;
        self.insert(k, v);
    }

    pub fn get(&self, k: i64) -> Complex64 {
        self.coeffs.get(&k).copied().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.coeffs.iter().map(|(&k, &c)| (k, c))
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Largest `|k|` in the support, 0 for the empty series.
    pub fn max_abs_k(&self) -> u64 {
        let lo = self.coeffs.keys().next().map_or(0, |k| k.unsigned_abs());
        let hi = self.coeffs.keys().next_back().map_or(0, |k| k.unsigned_abs());
        lo.max(hi)
    }

    /// Largest `|ĉ(−k) − conj ĉ(k)|` over the support.
    pub fn real_asymmetry(&self) -> f64 {
        self.iter()
            .map(|(k, c)| (self.get(-k) - c.conj()).norm())
            .fold(0.0, f64::max)
    }

    /// True iff `ĉ(−k) = conj ĉ(k)` for all `k`, within `tol`.
    pub fn is_real_valued(&self, tol: f64) -> bool {
        self.real_asymmetry() <= tol
    }

    /// True iff the series has no negative frequencies.
    pub fn is_analytic_type(&self) -> bool {
        self.coeffs.keys().next().is_none_or(|&k| k >= 0)
    }

    pub fn ensure_analytic(&self) -> Result<()> {
        match self.coeffs.keys().next() {
            Some(&k) if k < 0 => Err(DiscError::NotAnalytic { k }),
            _ => Ok(()),
        }
    }

    pub fn ensure_real_valued(&self, tol: f64) -> Result<()> {
        let asymmetry = self.real_asymmetry();
        if asymmetry <= tol {
            Ok(())
        } else {
            Err(DiscError::NotRealValued { asymmetry })
        }
    }

    /// `Σ ĉ(k) e^{ikθ}`, summed in ascending `|k|` with `k < 0` first on ties.
    pub fn eval_boundary(&self, theta: f64) -> Complex64 {
        self.eval_damped(1.0, theta)
    }

    /// Harmonic extension `Σ ĉ(k) r^{|k|} e^{ikx}`.
    pub fn eval_disc(&self, p: DiscPoint) -> Complex64 {
        self.eval_damped(p.r, p.x)
    }

    fn eval_damped(&self, r: f64, theta: f64) -> Complex64 {
        let z = Complex64::cis(theta);
        let mut neg = self.coeffs.range(..0).rev().map(|(&k, &c)| (k, c)).peekable();
        let mut pos = self.coeffs.range(0..).map(|(&k, &c)| (k, c)).peekable();

        let mut acc = Complex64::new(0.0, 0.0);
        let mut power = Complex64::new(1.0, 0.0);
        let mut at: u64 = 0;
        let mut steps = 0u32;
        loop {
            let next = match (neg.peek(), pos.peek()) {
                (None, None) => break,
                (Some(_), None) => neg.next(),
                (None, Some(_)) => pos.next(),
                (Some(&(kn, _)), Some(&(kp, _))) => {
                    if kn.unsigned_abs() <= kp.unsigned_abs() {
                        neg.next()
                    } else {
                        pos.next()
                    }
                }
            };
            let (k, c) = next.expect("peeked");
            let a = k.unsigned_abs();
            if a != at {
                let gap = a - at;
                if gap <= 8 && steps < REANCHOR {
                    for _ in 0..gap {
                        power *= z;
                    }
                    steps += gap as u32;
                } else {
                    power = Complex64::cis(a as f64 * theta);
                    steps = 0;
                }
                at = a;
            }
            let phase = if k < 0 { power.conj() } else { power };
            let damp = if r == 1.0 { 1.0 } else { r.powi(a as i32) };
            acc += c * phase * damp;
        }
        acc
    }

    /// Values at `θ_j = 2πj/m`, `j = 0..m`, by folding frequencies mod `m`
    /// and one inverse FFT. Exact for any support.
    pub fn sample_uniform(&self, m: usize) -> Vec<Complex64> {
        assert!(m > 0, "sample grid must be nonempty");
        let mut buf = vec![Complex64::new(0.0, 0.0); m];
        for (k, c) in self.iter() {
            buf[k.rem_euclid(m as i64) as usize] += c;
        }
        let fft = FftPlanner::new().plan_fft_inverse(m);
        fft.process(&mut buf);
        buf
    }

    /// `Σ |ĉ(k)|`, an upper bound for the sup norm on the circle.
    pub fn l1_norm(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm()).sum()
    }

    /// `Σ |ĉ(k)|²`, the mean square of the boundary function.
    pub fn parseval_l2(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm_sqr()).sum()
    }

    /// Grid lower bound for the sup norm over `grid` uniform angles.
    pub fn sup_norm_estimate(&self, grid: usize) -> Result<f64> {
        let required = 4 * (1 + self.max_abs_k() as usize);
        if grid < required {
            return Err(DiscError::GridTooSmall { grid, required });
        }
        Ok(self
            .sample_uniform(grid)
            .iter()
            .map(|v| v.norm())
            .fold(0.0, f64::max))
    }

    /// `(grid lower bound, ℓ¹ upper bound)` for the sup norm.
    pub fn sup_norm_bounds(&self, grid: usize) -> Result<(f64, f64)> {
        Ok((self.sup_norm_estimate(grid)?, self.l1_norm()))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in other.iter() {
            out.add_at(k, c);
        }
        out
    }

    pub fn subtract(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in other.iter() {
            out.add_at(k, -c);
        }
        out
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::from_pairs(self.iter().map(|(k, v)| (k, v * c)))
    }

    pub fn scale_real(&self, c: f64) -> Self {
        self.scale(Complex64::new(c, 0.0))
    }

    /// Multiplication by `i`, exact in every coefficient.
    pub fn mul_i(&self) -> Self {
        Self::from_pairs(self.iter().map(|(k, v)| (k, Complex64::new(-v.im, v.re))))
    }

    /// Multiplication by `−i`, exact in every coefficient.
    pub fn mul_neg_i(&self) -> Self {
        Self::from_pairs(self.iter().map(|(k, v)| (k, Complex64::new(v.im, -v.re))))
    }

    /// Real part on the circle, `(S + conj S(−·))/2` coefficientwise.
    pub fn real_part(&self) -> Self {
        let mut out = Self::new();
        for (k, c) in self.iter() {
            out.add_at(k, c * 0.5);
            out.add_at(-k, c.conj() * 0.5);
        }
        out
    }

    /// Imaginary part on the circle.
    pub fn imag_part(&self) -> Self {
        self.mul_neg_i().real_part()
    }

    /// Formal derivative in `θ`: `ĉ(k) ↦ ik·ĉ(k)`.
    pub fn derivative(&self) -> Self {
        Self::from_pairs(self.iter().map(|(k, c)| (k, c * Complex64::new(0.0, k as f64))))
    }

    /// Drops coefficients with `|ĉ(k)| ≤ threshold`; returns the pruned
    /// series and the `ℓ¹` mass removed.
    pub fn pruned(&self, threshold: f64) -> (Self, f64) {
        let mut removed = 0.0;
        let mut out = Self::new();
        for (k, c) in self.iter() {
            if c.norm() <= threshold {
                removed += c.norm();
            } else {
                out.insert(k, c);
            }
        }
        (out, removed)
    }
}

impl fmt::Display for TrigSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (k, c)) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{k} ↦ {c}")?;
        }
        write!(f, "}}")
    }
}

#[derive(Serialize, Deserialize)]
struct CoeffEntry {
    k: i64,
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct SeriesJson {
    coeffs: Vec<CoeffEntry>,
}

impl Serialize for TrigSeries {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        SeriesJson {
            coeffs: self
                .iter()
                .map(|(k, c)| CoeffEntry { k, re: c.re, im: c.im })
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for TrigSeries {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = SeriesJson::deserialize(deserializer)?;
        let mut s = TrigSeries::new();
        for e in raw.coeffs {
            if !(e.re.is_finite() && e.im.is_finite()) {
                return Err(D::Error::custom(format!("coefficient at k = {} is not finite", e.k)));
            }
            if s.coeffs.contains_key(&e.k) {
                return Err(D::Error::custom(format!("duplicate frequency k = {}", e.k)));
            }
            s.insert(e.k, Complex64::new(e.re, e.im));
        }
        Ok(s)
    }
}

/// A truncated series together with a bound on the `ℓ¹` mass of every
/// coefficient it omits.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CertifiedSeries {
    pub series: TrigSeries,
    pub l1_tail: f64,
}

impl CertifiedSeries {
    pub fn exact(series: TrigSeries) -> Self {
        Self { series, l1_tail: 0.0 }
    }

    /// `ℓ¹` norm of the kept part plus the tail bound; a sup-norm upper
    /// bound for the untruncated function.
    pub fn l1_bound(&self) -> f64 {
        self.series.l1_norm() + self.l1_tail
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            series: self.series.add(&other.series),
            l1_tail: self.l1_tail + other.l1_tail,
        }
    }

    pub fn subtract(&self, other: &Self) -> Self {
        Self {
            series: self.series.subtract(&other.series),
            l1_tail: self.l1_tail + other.l1_tail,
        }
    }
}

/// Uniform angles `2πj/m`, `j = 0..m`.
pub fn uniform_angles(m: usize) -> impl Iterator<Item = f64> {
    (0..m).map(move |j| TAU * j as f64 / m as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn eval_boundary_examples() {
        assert_eq!(TrigSeries::constant(c(1.0, 0.0)).eval_boundary(2.3), c(1.0, 0.0));
        assert!((TrigSeries::cos().eval_boundary(0.0) - c(1.0, 0.0)).norm() < 1e-15);
        let v = TrigSeries::cos().eval_boundary(PI / 3.0);
        assert!((v - c((PI / 3.0).cos(), 0.0)).norm() < 1e-15);
        assert!((v.re - 0.5).abs() < 1e-15);
    }

    #[test]
    fn eval_disc_examples() {
        let z = TrigSeries::monomial(1, c(1.0, 0.0));
        assert_eq!(z.eval_disc(DiscPoint::new(0.0, 1.7).unwrap()), c(0.0, 0.0));
        let k = TrigSeries::constant(c(2.0, -1.0));
        assert_eq!(k.eval_disc(DiscPoint::new(0.3, 0.4).unwrap()), c(2.0, -1.0));
        let z2 = TrigSeries::monomial(2, c(1.0, 0.0));
        let v = z2.eval_disc(DiscPoint::new(0.5, 0.0).unwrap());
        assert!((v - c(0.25, 0.0)).norm() < 1e-16);
        assert!(DiscPoint::new(1.5, 0.0).is_err());
    }

    #[test]
    fn arithmetic_prunes_zeros() {
        let a = TrigSeries::constant(c(1.0, 0.0));
        let b = TrigSeries::constant(c(-1.0, 0.0));
        assert!(a.add(&b).is_empty());
        let s = TrigSeries::monomial(1, c(2.0, 0.0)).scale_real(0.5);
        assert_eq!(s, TrigSeries::monomial(1, c(1.0, 0.0)));
        let t = TrigSeries::cos().add(&TrigSeries::sin());
        assert!(t.subtract(&t).is_empty());
    }

    #[test]
    fn norms() {
        assert_eq!(TrigSeries::cos().l1_norm(), 1.0);
        assert_eq!(TrigSeries::new().l1_norm(), 0.0);
        let s = TrigSeries::from_pairs([(0, c(3.0, 0.0)), (2, c(0.0, 4.0))]);
        assert_eq!(s.l1_norm(), 7.0);
        assert_eq!(TrigSeries::cos().parseval_l2(), 0.5);
        assert_eq!(TrigSeries::constant(c(1.0, 2.0)).parseval_l2(), 5.0);
    }

    #[test]
    fn parseval_matches_quadrature() {
        let s = TrigSeries::monomial(3, c(2.0, 0.0));
        assert_eq!(s.parseval_l2(), 4.0);
        // trapezoid rule is exact for trigonometric polynomials of low degree
        let m = 64;
        let q: f64 = uniform_angles(m).map(|t| s.eval_boundary(t).norm_sqr()).sum::<f64>() / m as f64;
        assert!((q - 4.0).abs() < 1e-12);
    }

    #[test]
    fn sup_norm_examples() {
        let five = TrigSeries::constant(c(5.0, 0.0));
        assert!((five.sup_norm_estimate(16).unwrap() - 5.0).abs() < 1e-12);
        assert!((TrigSeries::cos().sup_norm_estimate(1024).unwrap() - 1.0).abs() < 1e-12);
        let s = TrigSeries::from_pairs([(1, c(1.0, 0.0)), (2, c(1.0, 0.0))]);
        let est = s.sup_norm_estimate(4096).unwrap();
        let brute = (0..1_000_000)
            .map(|j| s.eval_boundary(TAU * j as f64 / 1e6).norm())
            .fold(0.0, f64::max);
        assert!((est - brute).abs() < 1e-6, "{est} vs {brute}");
        assert!(matches!(s.sup_norm_estimate(8), Err(DiscError::GridTooSmall { .. })));
    }

    #[test]
    fn predicates() {
        assert!(TrigSeries::cos().is_real_valued(REAL_TOL));
        assert!(!TrigSeries::monomial(1, c(1.0, 0.0)).is_real_valued(REAL_TOL));
        assert!(TrigSeries::monomial(1, c(1.0, 0.0)).is_analytic_type());
        assert!(!TrigSeries::cos().is_analytic_type());
        assert!(matches!(
            TrigSeries::cos().ensure_analytic(),
            Err(DiscError::NotAnalytic { k: -1 })
        ));
    }

    #[test]
    fn json_is_sorted_and_round_trips() {
        let s = TrigSeries::from_pairs([(3, c(0.1, 0.2)), (-2, c(1.0 / 3.0, 0.0)), (0, c(0.0, -7.5))]);
        let js = serde_json::to_string(&s).unwrap();
        assert!(js.starts_with(r#"{"coeffs":[{"k":-2,"#), "{js}");
        let back: TrigSeries = serde_json::from_str(&js).unwrap();
        assert_eq!(back, s);
        let dup = r#"{"coeffs":[{"k":1,"re":1,"im":0},{"k":1,"re":2,"im":0}]}"#;
        assert!(serde_json::from_str::<TrigSeries>(dup).is_err());
    }

    #[test]
    fn real_and_imag_parts() {
        let f = TrigSeries::monomial(2, c(3.0, 4.0));
        for t in [0.0, 0.7, 2.9] {
            let v = f.eval_boundary(t);
            assert!((f.real_part().eval_boundary(t) - c(v.re, 0.0)).norm() < 1e-14);
            assert!((f.imag_part().eval_boundary(t) - c(v.im, 0.0)).norm() < 1e-14);
        }
    }
}
