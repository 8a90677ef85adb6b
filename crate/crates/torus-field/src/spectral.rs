//! Band-limited real fields on T⁴ as Hermitian-symmetric Fourier tables,
//! with the quadratic forms of the flat-torus Paneitz calculus:
//! energy 𝔢(u,u) = (1/8π²)Σ(4π²|n|²)²|c(n)|², its inverse form
//! 𝔨(u,u) = Σ|c(n)|²/(2π²|n|⁴), and grounded Sobolev norms.

use crate::torus::{FrequencyVector, TorusPoint};
use crate::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Finite Fourier coefficient table c(n), |n|_∞ ≤ cutoff, with Hermitian
/// symmetry c(−n) = conj(c(n)) so the represented field is real. Stored as a
/// vector sorted by frequency (deterministic iteration, binary-search gets).
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    cutoff: i32,
    grounded: bool,
    coeffs: Vec<(FrequencyVector, Complex64)>,
}

impl SpectralField {
    /// Build from explicit modes; conjugate partners are filled in from the
    /// canonical representative, the zero mode is dropped when `grounded`.
    pub fn from_modes(cutoff: i32, modes: &[(FrequencyVector, Complex64)], grounded: bool) -> Self {
        let mut coeffs: Vec<(FrequencyVector, Complex64)> = Vec::new();
        for &(n, c) in modes {
            assert!(
                n.n.iter().all(|v| v.abs() <= cutoff),
                "mode outside cutoff"
            );
            if n.is_zero() {
                if !grounded {
                    coeffs.push((n, Complex64::new(c.re, 0.0)));
                }
                continue;
            }
            coeffs.push((n, c));
            coeffs.push((n.neg(), c.conj()));
        }
        coeffs.sort_by_key(|(n, _)| *n);
        coeffs.dedup_by_key(|(n, _)| *n);
        Self {
            cutoff,
            grounded,
            coeffs,
        }
    }

    /// Real cosine mode a·cos(2πn·x): coefficients a/2 at ±n.
    pub fn cosine(cutoff: i32, n: FrequencyVector, amplitude: f64) -> Self {
        Self::from_modes(
            cutoff,
            &[(n, Complex64::new(amplitude / 2.0, 0.0))],
            true,
        )
    }

    /// Internal constructor for sorted, already-symmetric tables.
    pub(crate) fn from_sorted(
        cutoff: i32,
        grounded: bool,
        coeffs: Vec<(FrequencyVector, Complex64)>,
    ) -> Self {
        debug_assert!(coeffs.windows(2).all(|w| w[0].0 < w[1].0));
        Self {
            cutoff,
            grounded,
            coeffs,
        }
    }

    pub fn cutoff(&self) -> i32 {
        self.cutoff
    }

    pub fn is_grounded(&self) -> bool {
        self.grounded
    }

    pub fn modes(&self) -> &[(FrequencyVector, Complex64)] {
        &self.coeffs
    }

    pub fn coefficient(&self, n: &FrequencyVector) -> Complex64 {
        match self.coeffs.binary_search_by_key(n, |(m, _)| *m) {
            Ok(i) => self.coeffs[i].1,
            Err(_) => Complex64::new(0.0, 0.0),
        }
    }

    /// Hermitian-symmetry defect max |c(−n) − conj(c(n))|.
    pub fn hermitian_defect(&self) -> f64 {
        self.coeffs
            .iter()
            .map(|(n, c)| (self.coefficient(&n.neg()) - c.conj()).norm())
            .fold(0.0, f64::max)
    }

    /// Pointwise evaluation Σ c(n) e^{2πi n·x} (real part; the imaginary part
    /// vanishes by Hermitian symmetry).
    pub fn eval(&self, x: &TorusPoint) -> f64 {
        let mut sum = Complex64::new(0.0, 0.0);
        for (n, c) in &self.coeffs {
            let ph = 2.0 * PI * n.dot(x);
            sum += c * Complex64::new(ph.cos(), ph.sin());
        }
        sum.re
    }

    /// L² norm via Parseval: (Σ|c(n)|²)^{1/2}.
    pub fn l2_norm(&self) -> f64 {
        self.coeffs
            .iter()
            .map(|(_, c)| c.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// L² pairing ∫ u v = Σ c_u(n) conj(c_v(n)).
    pub fn inner(&self, other: &SpectralField) -> f64 {
        self.coeffs
            .iter()
            .map(|(n, c)| (c * other.coefficient(n).conj()).re)
            .sum()
    }

    /// Apply the grounded Green operator: divide each mode by 4π²|n|².
    pub fn green_apply(&self) -> Result<SpectralField> {
        if !self.grounded && !self.coefficient(&FrequencyVector::zero()).norm_sqr().eq(&0.0) {
            return Err(Error::NotGrounded(
                self.coefficient(&FrequencyVector::zero()).re,
            ));
        }
        let coeffs = self
            .coeffs
            .iter()
            .map(|(n, c)| (*n, c / n.laplace_eigenvalue()))
            .collect();
        Ok(SpectralField::from_sorted(self.cutoff, true, coeffs))
    }
}

/// Paneitz energy on the flat torus: 𝔢(u,u) = (1/8π²)Σ(4π²|n|²)²|c(n)|².
pub fn paneitz_energy(u: &SpectralField) -> f64 {
    u.modes()
        .iter()
        .map(|(n, c)| {
            let lam = n.laplace_eigenvalue();
            lam * lam * c.norm_sqr()
        })
        .sum::<f64>()
        / (8.0 * PI * PI)
}

/// The inverse-Paneitz quadratic form 𝔨(u,u) = Σ_{n≠0}|c(n)|²/(2π²|n|⁴),
/// the covariance of ⟨h,u⟩ under the biharmonic field.
pub fn biharmonic_form(u: &SpectralField) -> f64 {
    u.modes()
        .iter()
        .filter(|(n, _)| !n.is_zero())
        .map(|(n, c)| {
            let q = n.norm_sq() as f64;
            c.norm_sqr() / (2.0 * PI * PI * q * q)
        })
        .sum()
}

/// Grounded Sobolev norm ‖u‖_{H̊^s} = (Σ (4π²|n|²)^s |c(n)|²)^{1/2}.
pub fn sobolev_norm(u: &SpectralField, s: f64) -> Result<f64> {
    if !u.is_grounded() {
        return Err(Error::NotGrounded(
            u.coefficient(&FrequencyVector::zero()).re,
        ));
    }
    Ok(u.modes()
        .iter()
        .filter(|(n, _)| !n.is_zero())
        .map(|(n, c)| n.laplace_eigenvalue().powf(s) * c.norm_sqr())
        .sum::<f64>()
        .sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e1() -> FrequencyVector {
        FrequencyVector::new(1, 0, 0, 0)
    }

    #[test]
    fn cosine_field_evaluates() {
        let u = SpectralField::cosine(4, e1(), 1.0);
        let x = TorusPoint::new(0.3, 0.9, 0.1, 0.5);
        assert!((u.eval(&x) - (2.0 * PI * 0.3).cos()).abs() < 1e-14);
        assert_eq!(u.hermitian_defect(), 0.0);
        assert!((u.l2_norm() - (0.5f64).sqrt()).abs() < 1e-14);
    }

    #[test]
    fn paneitz_energy_examples() {
        // constant field has zero energy
        let c = SpectralField::from_modes(
            2,
            &[(FrequencyVector::zero(), Complex64::new(3.0, 0.0))],
            false,
        );
        assert_eq!(paneitz_energy(&c), 0.0);
        // u = cos(2πx₁): 𝔢(u,u) = π²
        let u = SpectralField::cosine(4, e1(), 1.0);
        assert!((paneitz_energy(&u) - PI * PI).abs() < 1e-10);
    }

    #[test]
    fn sobolev_norm_examples() {
        let u = SpectralField::cosine(4, e1(), 1.0);
        // s = 0: the L² norm
        assert!((sobolev_norm(&u, 0.0).unwrap() - u.l2_norm()).abs() < 1e-14);
        // s = 1: π√2
        assert!((sobolev_norm(&u, 1.0).unwrap() - PI * std::f64::consts::SQRT_2).abs() < 1e-12);
        // monotone in s (all eigenvalues ≥ 4π² > 1)
        let mut prev = 0.0;
        for i in 0..6 {
            let s = -1.0 + i as f64 * 0.5;
            let v = sobolev_norm(&u, s).unwrap();
            assert!(v > prev);
            prev = v;
        }
    }

    #[test]
    fn parseval_duality_biharmonic_form() {
        // 𝔨(u,u) as the direct mode sum equals 8π²‖G̊u‖²_{L²}
        let s = crate::rng::SeededStream::new(99);
        let mut modes = Vec::new();
        let mut idx = 0;
        for n in crate::torus::frequency_cube(2) {
            if n.is_canonical() {
                let c = Complex64::new(s.normal(1, idx), s.normal(2, idx));
                modes.push((n, c));
                idx += 1;
            }
        }
        let u = SpectralField::from_modes(2, &modes, true);
        let direct = biharmonic_form(&u);
        let via_green = 8.0 * PI * PI * u.green_apply().unwrap().l2_norm().powi(2);
        assert!(
            (direct - via_green).abs() < 1e-12 * direct,
            "{direct} vs {via_green}"
        );
        // and equals 𝔢(𝗄u, 𝗄u) with 𝗄 = inverse Paneitz: 𝗄u modes = c/(2π²|n|⁴)
        let ku_modes: Vec<_> = u
            .modes()
            .iter()
            .filter(|(n, _)| n.is_canonical())
            .map(|(n, c)| {
                let q = n.norm_sq() as f64;
                (*n, c / (2.0 * PI * PI * q * q))
            })
            .collect();
        let ku = SpectralField::from_modes(2, &ku_modes, true);
        assert!((paneitz_energy(&ku) - direct).abs() < 1e-12 * direct);
    }

    #[test]
    fn mode_pair_variance_convention() {
        // ⟨u,h⟩ variance for u = cos(2πx₁) must be 𝔨(u,u) = 1/(4π²)
        let u = SpectralField::cosine(4, e1(), 1.0);
        assert!((biharmonic_form(&u) - 1.0 / (4.0 * PI * PI)).abs() < 1e-14);
    }
}
