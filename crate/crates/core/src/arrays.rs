//! Array responses: per-element phase shifts, steering vectors, the rank-one
//! Alice→IRS matrix `G`, the IRS phase matrix `Θ` and the two-block channel
//! rows seen by a receiver.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{LinkBudget, ReceiverPaths};
use crate::numerics::{ComplexMatrix, ComplexVector};

/// A uniform linear array: element count and spacing in wavelengths.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArraySpec {
    n_elements: usize,
    spacing_wavelengths: f64,
}

impl ArraySpec {
    pub fn new(n_elements: usize, spacing_wavelengths: f64) -> Result<Self> {
        if n_elements == 0 {
            return Err(Error::Domain("array needs at least one element".into()));
        }
        if !(spacing_wavelengths.is_finite() && spacing_wavelengths > 0.0) {
            return Err(Error::Domain(format!(
                "element spacing {spacing_wavelengths} must be positive"
            )));
        }
        Ok(ArraySpec {
            n_elements,
            spacing_wavelengths,
        })
    }

    /// Half-wavelength spacing.
    pub fn half_wave(n_elements: usize) -> Result<Self> {
        Self::new(n_elements, 0.5)
    }

    pub fn n_elements(&self) -> usize {
        self.n_elements
    }

    pub fn spacing_wavelengths(&self) -> f64 {
        self.spacing_wavelengths
    }

    /// Offset of element `n` from the array centre, in elements.
    fn centred(&self, n: usize) -> f64 {
        n as f64 - (self.n_elements as f64 - 1.0) / 2.0
    }

    fn phase_unchecked(&self, n: usize, phi: f64) -> f64 {
        -self.spacing_wavelengths * self.centred(n) * phi.cos()
    }
}

/// Phase of element `n` towards angle `phi`, in cycles:
/// `-(d/λ)(n - (N-1)/2) cos φ`.
pub fn phase_shift(n: usize, spec: &ArraySpec, phi: f64) -> Result<f64> {
    if n >= spec.n_elements {
        return Err(Error::Domain(format!(
            "element index {n} out of range for {} elements",
            spec.n_elements
        )));
    }
    Ok(spec.phase_unchecked(n, phi))
}

/// Unit-norm steering vector with entries `exp(-j2πΦ_n(φ)) / √N`.
///
/// Its Hermitian transpose is the row `[e^{j2πΦ_0}, …, e^{j2πΦ_{N-1}}] / √N`.
pub fn steering_vector(spec: &ArraySpec, phi: f64) -> ComplexVector {
    let amp = 1.0 / (spec.n_elements as f64).sqrt();
    ComplexVector::from_fn(spec.n_elements, |n| {
        Complex64::from_polar(amp, -TAU * spec.phase_unchecked(n, phi))
    })
}

/// The all-ones IRS-side response (`g_r`, `h_rb`, `h_re`).
pub fn irs_unit_response(irs: &ArraySpec) -> ComplexVector {
    ComplexVector::filled(irs.n_elements, Complex64::new(1.0, 0.0))
}

/// `G = g_r^* g_t^H`, an `N_r × N_a` rank-one matrix whose rows all equal
/// `g_t^H` with `g_t` Alice's steering vector towards the IRS.
pub fn cascade_matrix(alice: &ArraySpec, irs: &ArraySpec, phi_ar: f64) -> ComplexMatrix {
    let g_t = steering_vector(alice, phi_ar);
    ComplexMatrix::outer(&irs_unit_response(irs).conj(), &g_t)
}

/// Diagonal IRS phase matrix with entries `exp(-j2π(Φ_l(θ) - Φ_l(θ_b)))`.
///
/// Equal to the identity when `theta == theta_b`.
pub fn irs_phase_matrix(irs: &ArraySpec, theta: f64, theta_b: f64) -> ComplexMatrix {
    ComplexMatrix::diagonal(&irs_phase_diagonal(irs, theta, theta_b))
}

pub(crate) fn irs_phase_diagonal(irs: &ArraySpec, theta: f64, theta_b: f64) -> ComplexVector {
    ComplexVector::from_fn(irs.n_elements, |l| {
        let cycles = irs.phase_unchecked(l, theta) - irs.phase_unchecked(l, theta_b);
        Complex64::from_polar(1.0, -TAU * cycles)
    })
}

/// The two blocks of a receiver's channel row, each of length `N_a`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRow {
    /// `√L · h^H` for the Alice→receiver path.
    pub direct: ComplexVector,
    /// `√L · h_r^H Θ G` for the Alice→IRS→receiver path.
    pub cascaded: ComplexVector,
}

impl ChannelRow {
    /// Noise-free received amplitude `direct · x_a + cascaded · x_r`.
    pub fn apply(&self, x_a: &ComplexVector, x_r: &ComplexVector) -> Result<Complex64> {
        Ok(self.direct.dot(x_a)? + self.cascaded.dot(x_r)?)
    }
}

/// Builds the channel row of the receiver described by `rx`. The IRS phase
/// matrix is focused on Bob (`budget.theta_b`) and `G` points along
/// `budget.phi_ar`.
pub fn assemble_channel(
    budget: &LinkBudget,
    rx: &ReceiverPaths,
    alice: &ArraySpec,
    irs: &ArraySpec,
) -> Result<ChannelRow> {
    let h = steering_vector(alice, rx.direct_angle);
    let direct = h.conj().scale_real(rx.direct_loss.sqrt());

    let g = cascade_matrix(alice, irs, budget.phi_ar);
    let theta = irs_phase_matrix(irs, rx.deflection, budget.theta_b);
    let h_r = irs_unit_response(irs).conj();
    let cascaded = theta.mul(&g)?.row_mul(&h_r)?.scale_real(rx.cascade_loss.sqrt());

    Ok(ChannelRow { direct, cascaded })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Scenario;
    use crate::geometry::link_budget;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn phase_shift_values() {
        let spec = ArraySpec::new(2, 0.5).unwrap();
        assert!((phase_shift(0, &spec, 0.0).unwrap() - 0.25).abs() < 1e-15);
        let spec = ArraySpec::new(7, 0.5).unwrap();
        for n in 0..7 {
            assert!(phase_shift(n, &spec, FRAC_PI_2).unwrap().abs() < 1e-15);
        }
        assert!(matches!(phase_shift(7, &spec, 0.0), Err(Error::Domain(_))));
    }

    #[test]
    fn phase_shift_antisymmetric() {
        let spec = ArraySpec::new(9, 0.7).unwrap();
        for phi in [0.0, 0.3, 1.2, 2.9] {
            for n in 0..9 {
                let a = phase_shift(n, &spec, phi).unwrap();
                let b = phase_shift(8 - n, &spec, phi).unwrap();
                assert!((a + b).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn steering_vector_special_cases() {
        let v = steering_vector(&ArraySpec::new(1, 0.5).unwrap(), 0.4);
        assert_eq!(v.as_slice(), &[Complex64::new(1.0, 0.0)]);
        let spec = ArraySpec::new(16, 0.5).unwrap();
        let v = steering_vector(&spec, FRAC_PI_2);
        for z in v.iter() {
            assert!((z - Complex64::new(0.25, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn invalid_specs() {
        assert!(ArraySpec::new(0, 0.5).is_err());
        assert!(ArraySpec::new(4, 0.0).is_err());
        assert!(ArraySpec::new(4, f64::NAN).is_err());
    }

    #[test]
    fn cascade_matrix_shapes() {
        let one = ArraySpec::new(1, 0.5).unwrap();
        let g = cascade_matrix(&one, &one, 0.7);
        assert_eq!((g.rows(), g.cols()), (1, 1));
        assert!((g.get(0, 0) - Complex64::new(1.0, 0.0)).norm() < 1e-15);

        let alice = ArraySpec::new(16, 0.5).unwrap();
        let irs = ArraySpec::new(50, 0.5).unwrap();
        let g = cascade_matrix(&alice, &irs, 0.6435);
        assert_eq!((g.rows(), g.cols()), (50, 16));
        // G g_t = ‖g_t‖² g_r^* = all ones; brute-force loop instead of mul_vec.
        let g_t = steering_vector(&alice, 0.6435);
        for r in 0..50 {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..16 {
                acc += g.get(r, k) * g_t[k];
            }
            assert!((acc - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn phase_matrix_identity_at_focus() {
        let irs = ArraySpec::new(50, 0.5).unwrap();
        let theta = irs_phase_matrix(&irs, 1.1, 1.1);
        assert_eq!(theta, ComplexMatrix::identity(50));
    }

    #[test]
    fn bob_cascade_gain_is_nr() {
        let s = Scenario::default();
        let budget = link_budget(&s, s.bob).unwrap();
        let alice = s.alice_array().unwrap();
        let irs = s.irs_array().unwrap();
        let row = assemble_channel(&budget, &budget.bob(), &alice, &irs).unwrap();
        let w_r = steering_vector(&alice, budget.phi_ar);
        let got = row.cascaded.dot(&w_r).unwrap();
        assert!((got - Complex64::new(1.25, 0.0)).norm() < 1e-9);
        assert!((row.direct.norm() - budget.l_ab.sqrt()).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn steering_vector_unit_norm(n in 1usize..=256, d in 1e-3..=2.0f64, phi in 0.0..=PI) {
            let v = steering_vector(&ArraySpec::new(n, d).unwrap(), phi);
            prop_assert!((v.norm() - 1.0).abs() < 1e-12);
        }

        #[test]
        fn phase_matrix_unitary(n in 1usize..=64, d in 0.1..=2.0f64, t in 0.0..=PI, tb in 0.0..=PI) {
            let irs = ArraySpec::new(n, d).unwrap();
            let m = irs_phase_matrix(&irs, t, tb);
            let p = m.hermitian().mul(&m).unwrap();
            for r in 0..n {
                prop_assert!((m.get(r, r).norm() - 1.0).abs() < 1e-12);
                for c in 0..n {
                    let want = if r == c { 1.0 } else { 0.0 };
                    prop_assert!((p.get(r, c) - Complex64::new(want, 0.0)).norm() < 1e-12);
                }
            }
        }

        #[test]
        fn cascade_matrix_rank_one(na in 1usize..=16, nr in 1usize..=16, phi in 0.0..=PI) {
            let g = cascade_matrix(&ArraySpec::half_wave(na).unwrap(), &ArraySpec::half_wave(nr).unwrap(), phi);
            for r in 0..nr {
                prop_assert_eq!(g.row(r), g.row(0));
            }
            for r in 1..nr {
                for c in 1..na {
                    let minor = g.get(0, 0) * g.get(r, c) - g.get(0, c) * g.get(r, 0);
                    prop_assert!(minor.norm() < 1e-12);
                }
            }
        }
    }
}
