//! Transmit side: beamformers for both paths, the artificial-noise (AN)
//! projector and the composite signal `x = [x_a, x_r]`.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::arrays::{steering_vector, ArraySpec};
use crate::error::{Error, Result};
use crate::geometry::LinkBudget;
use crate::numerics::{ComplexMatrix, ComplexVector};

/// Unit-norm beamformers for the direct path (`w_a`) and the IRS path (`w_r`).
#[derive(Debug, Clone, PartialEq)]
pub struct Precoders {
    pub w_a: ComplexVector,
    pub w_r: ComplexVector,
}

/// Matched beamformers: `w_a` steers at Bob, `w_r` at the IRS.
pub fn make_precoders(budget: &LinkBudget, alice: &ArraySpec) -> Precoders {
    Precoders {
        w_a: steering_vector(alice, budget.phi_ab),
        w_r: steering_vector(alice, budget.phi_ar),
    }
}

/// `(I - h h^H) / ‖I - h h^H‖_F`: projects onto the orthogonal complement of
/// Bob's direct steering vector with unit Frobenius norm.
#[derive(Debug, Clone, PartialEq)]
pub struct AnProjector {
    matrix: ComplexMatrix,
}

impl AnProjector {
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// `row^T · P` for a row vector given by its entries.
    pub fn leak(&self, row: &ComplexVector) -> Result<ComplexVector> {
        self.matrix.row_mul(row)
    }
}

pub fn an_projector(h_ab: &ComplexVector) -> Result<AnProjector> {
    let n = h_ab.len();
    if n < 2 {
        return Err(Error::Domain(
            "artificial noise needs at least 2 antennas: the null space of a single antenna is empty".into(),
        ));
    }
    let complement = ComplexMatrix::identity(n).sub(&ComplexMatrix::outer(h_ab, h_ab))?;
    let norm = complement.frobenius_norm();
    if norm == 0.0 {
        return Err(Error::Domain("steering vector spans the whole space".into()));
    }
    Ok(AnProjector {
        matrix: complement.scale_real(1.0 / norm),
    })
}

/// Identifies one independent random stream: a global seed plus a stream
/// index (typically a sweep cell or Monte-Carlo draw index).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StreamSeed {
    pub seed: u64,
    pub stream: u64,
}

impl StreamSeed {
    pub fn new(seed: u64, stream: u64) -> Self {
        StreamSeed { seed, stream }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }
}

/// Draws `n` i.i.d. CN(0, 1) samples from `rng`.
pub fn sample_an_from(rng: &mut ChaCha8Rng, n: usize) -> ComplexVector {
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    ComplexVector::from_fn(n, |_| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        Complex64::new(re * scale, im * scale)
    })
}

/// `n` i.i.d. CN(0, 1) samples, determined entirely by `seed`.
pub fn sample_an(n: usize, seed: StreamSeed) -> Result<ComplexVector> {
    if n == 0 {
        return Err(Error::Domain("sample count must be at least 1".into()));
    }
    Ok(sample_an_from(&mut seed.rng(), n))
}

#[derive(Debug, Clone, PartialEq)]
pub struct TxSignal {
    pub x_a: ComplexVector,
    pub x_r: ComplexVector,
    pub alpha: f64,
}

/// `x_a = √α w_a s + √(1-α) P_a z`, `x_r = √α w_r s`.
pub fn synthesize_tx(
    precoders: &Precoders,
    projector: &AnProjector,
    s: Complex64,
    z: &ComplexVector,
    alpha: f64,
) -> Result<TxSignal> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::Domain(format!("alpha {alpha} outside [0, 1]")));
    }
    let signal = s * alpha.sqrt();
    let an = projector.matrix.mul_vec(z)?.scale_real((1.0 - alpha).sqrt());
    Ok(TxSignal {
        x_a: precoders.w_a.scale(signal).add(&an)?,
        x_r: precoders.w_r.scale(signal),
        alpha,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Scenario;
    use crate::geometry::link_budget;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn reference() -> (LinkBudget, ArraySpec, Precoders, AnProjector) {
        let s = Scenario::default();
        let budget = link_budget(&s, s.eve).unwrap();
        let alice = s.alice_array().unwrap();
        let pre = make_precoders(&budget, &alice);
        let proj = an_projector(&pre.w_a).unwrap();
        (budget, alice, pre, proj)
    }

    #[test]
    fn precoders_match_steering_vectors() {
        let (budget, alice, pre, _) = reference();
        let h_ab = steering_vector(&alice, budget.phi_ab);
        assert!((h_ab.inner(&pre.w_a).unwrap() - c(1.0, 0.0)).norm() < 1e-12);
        assert!((pre.w_r.norm() - 1.0).abs() < 1e-12);
        assert_eq!(pre.w_a, steering_vector(&ArraySpec::new(16, 0.5).unwrap(), 0.0));
    }

    #[test]
    fn projector_hand_case() {
        let h = ComplexVector::new(vec![c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        let p = an_projector(&h).unwrap();
        let want = [c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)];
        for (i, w) in want.iter().enumerate() {
            assert!((p.matrix().get(i / 2, i % 2) - w).norm() < 1e-15);
        }
    }

    #[test]
    fn projector_needs_two_antennas() {
        let h = ComplexVector::new(vec![c(1.0, 0.0)]).unwrap();
        assert!(matches!(an_projector(&h), Err(Error::Domain(_))));
    }

    #[test]
    fn an_samples_deterministic() {
        let a = sample_an(16, StreamSeed::new(7, 3)).unwrap();
        let b = sample_an(16, StreamSeed::new(7, 3)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, sample_an(16, StreamSeed::new(7, 4)).unwrap());
        assert!(sample_an(0, StreamSeed::new(0, 0)).is_err());
    }

    #[test]
    fn an_sample_moments() {
        let n = 100_000;
        let z = sample_an(n, StreamSeed::new(11, 0)).unwrap();
        let mean: Complex64 = z.iter().sum::<Complex64>() / n as f64;
        let power = z.norm_sqr() / n as f64;
        let re_var = z.iter().map(|v| v.re * v.re).sum::<f64>() / n as f64;
        assert!(mean.norm() < 0.02, "mean {mean}");
        assert!((power - 1.0).abs() < 0.02, "power {power}");
        assert!((re_var - 0.5).abs() < 0.02, "re var {re_var}");
    }

    #[test]
    fn an_streams_uncorrelated() {
        let n = 100_000;
        let a = sample_an(n, StreamSeed::new(5, 0)).unwrap();
        let b = sample_an(n, StreamSeed::new(6, 0)).unwrap();
        let cross = a.inner(&b).unwrap() / n as f64;
        assert!(cross.norm() < 0.02, "cross {cross}");
    }

    #[test]
    fn tx_boundaries() {
        let (_, _, pre, proj) = reference();
        let z = sample_an(16, StreamSeed::new(1, 0)).unwrap();
        let s = c(0.6, 0.8);
        let tx = synthesize_tx(&pre, &proj, s, &z, 1.0).unwrap();
        assert_eq!(tx.x_a, pre.w_a.scale(s));
        let tx = synthesize_tx(&pre, &proj, s, &z, 0.0).unwrap();
        assert_eq!(tx.x_a, proj.matrix().mul_vec(&z).unwrap());
        assert_eq!(tx.x_r.norm(), 0.0);
        assert!(matches!(
            synthesize_tx(&pre, &proj, s, &z, 1.5),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn tx_power_without_noise() {
        let (_, _, pre, proj) = reference();
        let z = ComplexVector::zeros(16);
        let tx = synthesize_tx(&pre, &proj, c(1.0, 0.0), &z, 0.6).unwrap();
        assert!((tx.x_a.norm_sqr() - 0.6).abs() < 1e-12);
        assert!((tx.x_r.norm_sqr() - 0.6).abs() < 1e-12);
    }

    #[test]
    fn expected_direct_power_is_one() {
        let (_, _, pre, proj) = reference();
        let mut rng = StreamSeed::new(21, 0).rng();
        let draws = 100_000;
        let mut acc = 0.0;
        for _ in 0..draws {
            let z = sample_an_from(&mut rng, 16);
            acc += synthesize_tx(&pre, &proj, c(1.0, 0.0), &z, 0.6)
                .unwrap()
                .x_a
                .norm_sqr();
        }
        let mean = acc / draws as f64;
        assert!((mean - 1.0).abs() < 0.015, "mean {mean}");
    }

    proptest! {
        #[test]
        fn projector_invariants(na in 2usize..=32, phi in 0.0..=PI, vre in prop::collection::vec(-1.0..1.0f64, 64)) {
            let h = steering_vector(&ArraySpec::half_wave(na).unwrap(), phi);
            let p = an_projector(&h).unwrap();
            let leak = p.leak(&h.conj()).unwrap();
            prop_assert!(leak.norm() <= 1e-12);
            prop_assert!((p.matrix().frobenius_norm() - 1.0).abs() < 1e-12);
            // Hermitian and positive semi-definite.
            let m = p.matrix();
            for r in 0..na {
                for c in 0..na {
                    prop_assert!((m.get(r, c) - m.get(c, r).conj()).norm() < 1e-15);
                }
            }
            let v = ComplexVector::from_fn(na, |i| Complex64::new(vre[2 * i], vre[2 * i + 1]));
            let q = v.inner(&m.mul_vec(&v).unwrap()).unwrap();
            prop_assert!(q.im.abs() < 1e-12 && q.re >= -1e-12);
        }

        #[test]
        fn an_never_reaches_bob(seed in any::<u64>(), alpha in 0.0..=1.0f64, ph in 0.0..std::f64::consts::TAU) {
            let (budget, alice, pre, proj) = reference();
            let h_ab = steering_vector(&alice, budget.phi_ab);
            let z = sample_an(16, StreamSeed::new(seed, 0)).unwrap();
            let s = Complex64::from_polar(1.0, ph);
            let tx = synthesize_tx(&pre, &proj, s, &z, alpha).unwrap();
            let got = h_ab.inner(&tx.x_a).unwrap();
            prop_assert!((got - s * alpha.sqrt()).norm() < 1e-12);
        }
    }
}
