//! Performance metrics: Bob's SNR, the eavesdropper's SINR, BER, achievable
//! rates and the secrecy rate, for the IRS-aided scheme and for the
//! direct-path-only benchmark.

use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::arrays::{cascade_matrix, irs_phase_diagonal, irs_unit_response, steering_vector, ArraySpec};
use crate::config::Scenario;
use crate::error::{Error, Result};
use crate::geometry::{link_budget, LinkBudget, Position, ReceiverPaths};
use crate::numerics::{q_function, ComplexVector};
use crate::transmitter::{
    an_projector, make_precoders, sample_an, sample_an_from, AnProjector, Precoders, StreamSeed,
};

/// How the random AN leakage `|h^H P_a z|²` enters the eavesdropper's SINR.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AnMode {
    /// Replace the leakage by its mean over `z`, `‖h^H P_a‖²`.
    #[default]
    Expected,
    /// Use one drawn realisation of `z`.
    Instantaneous,
}

impl std::str::FromStr for AnMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "expected" => Ok(AnMode::Expected),
            "instantaneous" => Ok(AnMode::Instantaneous),
            other => Err(Error::validation("an_mode", format!("unknown mode `{other}`"))),
        }
    }
}

impl std::fmt::Display for AnMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            AnMode::Expected => "expected",
            AnMode::Instantaneous => "instantaneous",
        })
    }
}

/// Linear SNR/SINR values, rates in bits per channel use and QPSK BERs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecrecyMetrics {
    pub gamma_b: f64,
    pub gamma_e: f64,
    pub rate_b: f64,
    pub rate_e: f64,
    pub rate_s: f64,
    pub ber_b: f64,
    pub ber_probe: f64,
}

impl SecrecyMetrics {
    pub fn from_sinrs(gamma_b: f64, gamma_e: f64) -> Result<Self> {
        let rate_b = rate(gamma_b)?;
        let rate_e = rate(gamma_e)?;
        Ok(SecrecyMetrics {
            gamma_b,
            gamma_e,
            rate_b,
            rate_e,
            rate_s: (rate_b - rate_e).max(0.0),
            ber_b: ber_from_snr(gamma_b, 4)?,
            ber_probe: ber_from_snr(gamma_e, 4)?,
        })
    }

    /// `(name, value)` pairs in a fixed order.
    pub fn fields(&self) -> [(&'static str, f64); 7] {
        [
            ("gamma_b", self.gamma_b),
            ("gamma_e", self.gamma_e),
            ("rate_b", self.rate_b),
            ("rate_e", self.rate_e),
            ("rate_s", self.rate_s),
            ("ber_b", self.ber_b),
            ("ber_probe", self.ber_probe),
        ]
    }
}

/// `log2(1 + γ)`.
pub fn rate(gamma: f64) -> Result<f64> {
    if gamma.is_nan() || gamma < 0.0 {
        return Err(Error::Domain(format!("SINR {gamma} must be non-negative")));
    }
    Ok(gamma.ln_1p() / LN_2)
}

/// `h_r^H Θ(θ_e) G w_r` evaluated term by term over Alice's antennas `k` and
/// the IRS elements `l`, with `w_r = g_t`.
pub fn cascaded_gain_bruteforce(
    theta_e: f64,
    theta_b: f64,
    alice: &ArraySpec,
    irs: &ArraySpec,
    phi_ar: f64,
) -> Complex64 {
    let h_r = irs_unit_response(irs);
    let theta = irs_phase_diagonal(irs, theta_e, theta_b);
    let g = cascade_matrix(alice, irs, phi_ar);
    let w_r = steering_vector(alice, phi_ar);
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..alice.n_elements() {
        for l in 0..irs.n_elements() {
            acc += h_r[l].conj() * theta[l] * g.get(l, k) * w_r[k];
        }
    }
    acc
}

/// Dirichlet-kernel form of the IRS array gain towards `theta_e` when the
/// surface is focused on `theta_b`:
/// `sin(N π δ Δ) / sin(π δ Δ)` with `Δ = cos θ_e - cos θ_b` and `δ` the
/// spacing in wavelengths. At the removable singularities the limit is
/// taken analytically; at `Δ = 0` that limit is `N`.
pub fn cascaded_gain_closed(theta_e: f64, theta_b: f64, irs: &ArraySpec) -> f64 {
    let n = irs.n_elements() as f64;
    let x = PI * irs.spacing_wavelengths() * (theta_e.cos() - theta_b.cos());
    let den = x.sin();
    if den.abs() < 1e-12 {
        // sin(Nx)/sin(x) → N cos(Nx)/cos(x) as sin(x) → 0.
        return n * (n * x).cos() / x.cos();
    }
    (n * x).sin() / den
}

/// `α P_t |√L_ab + √L_arb N_r|² / σ²` in linear units. `nr = 0` drops the
/// IRS path.
pub fn bob_snr(alpha: f64, pt_mw: f64, noise_mw: f64, l_ab: f64, l_arb: f64, nr: usize) -> f64 {
    let amp = l_ab.sqrt() + l_arb.sqrt() * nr as f64;
    alpha * pt_mw * amp * amp / noise_mw
}

pub fn snr_bob(scenario: &Scenario, budget: &LinkBudget) -> Result<f64> {
    Ok(bob_snr(
        scenario.alpha,
        scenario.transmit_power()?.mw(),
        scenario.noise_power()?.mw(),
        budget.l_ab,
        budget.l_arb,
        scenario.nr,
    ))
}

/// What Alice's direct-path beam looks like from one departure angle.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectResponse {
    /// `h^H w_a`.
    pub gain: Complex64,
    /// `h^H P_a` as a row.
    pub leak: ComplexVector,
    /// `‖h^H P_a‖²`, the mean of `|h^H P_a z|²` over `z ~ CN(0, I)`.
    pub leak_power: f64,
}

/// Everything fixed by the transmitter and the IRS focus, shared by all
/// receivers in a scene.
#[derive(Debug, Clone)]
pub struct Transmission {
    alpha: f64,
    pt_mw: f64,
    noise_mw: f64,
    alice: ArraySpec,
    irs: ArraySpec,
    theta_b: f64,
    precoders: Precoders,
    projector: AnProjector,
    /// `g_t^H w_r`.
    alice_to_irs: Complex64,
    irs_enabled: bool,
}

impl Transmission {
    pub fn new(scenario: &Scenario, budget: &LinkBudget) -> Result<Self> {
        let alice = scenario.alice_array()?;
        let precoders = make_precoders(budget, &alice);
        let projector = an_projector(&steering_vector(&alice, budget.phi_ab))?;
        Self::with_parts(scenario, budget, precoders, projector)
    }

    pub fn with_parts(
        scenario: &Scenario,
        budget: &LinkBudget,
        precoders: Precoders,
        projector: AnProjector,
    ) -> Result<Self> {
        let alice = scenario.alice_array()?;
        let irs = scenario.irs_array()?;
        if precoders.w_a.len() != alice.n_elements() || precoders.w_r.len() != alice.n_elements() {
            return Err(Error::Dimension {
                expected: alice.n_elements(),
                got: precoders.w_a.len(),
            });
        }
        let g_t = steering_vector(&alice, budget.phi_ar);
        Ok(Transmission {
            alpha: scenario.alpha,
            pt_mw: scenario.transmit_power()?.mw(),
            noise_mw: scenario.noise_power()?.mw(),
            alice,
            irs,
            theta_b: budget.theta_b,
            alice_to_irs: g_t.inner(&precoders.w_r)?,
            precoders,
            projector,
            irs_enabled: true,
        })
    }

    /// The same transmission with the IRS path removed.
    pub fn without_irs(mut self) -> Self {
        self.irs_enabled = false;
        self
    }

    pub fn n_antennas(&self) -> usize {
        self.alice.n_elements()
    }

    pub fn direct_response(&self, phi: f64) -> Result<DirectResponse> {
        let h_row = steering_vector(&self.alice, phi).conj();
        let leak = self.projector.leak(&h_row)?;
        Ok(DirectResponse {
            gain: h_row.dot(&self.precoders.w_a)?,
            leak_power: leak.norm_sqr(),
            leak,
        })
    }

    /// `h_r^H Θ(θ) G w_r`; zero when the IRS is disabled.
    pub fn cascade_response(&self, theta: f64) -> Complex64 {
        if !self.irs_enabled {
            return Complex64::new(0.0, 0.0);
        }
        self.alice_to_irs * cascaded_gain_closed(theta, self.theta_b, &self.irs)
    }

    /// SINR of a receiver whose AN leakage power (before path loss) is
    /// `leak_power`.
    pub fn sinr(
        &self,
        rx: &ReceiverPaths,
        direct: &DirectResponse,
        cascade: Complex64,
        leak_power: f64,
    ) -> f64 {
        let cascade_loss = if self.irs_enabled { rx.cascade_loss } else { 0.0 };
        let amp = direct.gain * rx.direct_loss.sqrt() + cascade * cascade_loss.sqrt();
        let signal = self.alpha * self.pt_mw * amp.norm_sqr();
        let jamming = (1.0 - self.alpha) * self.pt_mw * rx.direct_loss * leak_power;
        signal / (jamming + self.noise_mw)
    }

    pub fn expected_sinr(&self, rx: &ReceiverPaths) -> Result<f64> {
        let direct = self.direct_response(rx.direct_angle)?;
        let cascade = self.cascade_response(rx.deflection);
        Ok(self.sinr(rx, &direct, cascade, direct.leak_power))
    }

    pub fn instantaneous_sinr(&self, rx: &ReceiverPaths, z: &ComplexVector) -> Result<f64> {
        let direct = self.direct_response(rx.direct_angle)?;
        let cascade = self.cascade_response(rx.deflection);
        let leak = direct.leak.dot(z)?.norm_sqr();
        Ok(self.sinr(rx, &direct, cascade, leak))
    }

    /// Mean QPSK BER over `samples` AN draws taken in order from `seed`.
    pub fn mc_ber(&self, rx: &ReceiverPaths, samples: usize, seed: StreamSeed) -> Result<f64> {
        let direct = self.direct_response(rx.direct_angle)?;
        let cascade = self.cascade_response(rx.deflection);
        self.mc_ber_with(rx, &direct, cascade, samples, seed)
    }

    /// [`Transmission::mc_ber`] with the receiver's responses precomputed.
    pub fn mc_ber_with(
        &self,
        rx: &ReceiverPaths,
        direct: &DirectResponse,
        cascade: Complex64,
        samples: usize,
        seed: StreamSeed,
    ) -> Result<f64> {
        if samples == 0 {
            return Err(Error::Domain(
                "Monte-Carlo sample count must be at least 1".into(),
            ));
        }
        let mut rng = seed.rng();
        let mut acc = 0.0;
        for _ in 0..samples {
            let z = sample_an_from(&mut rng, self.n_antennas());
            let leak = direct.leak.dot(&z)?.norm_sqr();
            acc += ber_from_snr(self.sinr(rx, direct, cascade, leak), 4)?;
        }
        Ok(acc / samples as f64)
    }
}

/// Eavesdropper SINR at the probe described by `budget`. `z` is required in
/// instantaneous mode and ignored otherwise.
pub fn sinr_eve(
    scenario: &Scenario,
    budget: &LinkBudget,
    precoders: &Precoders,
    projector: &AnProjector,
    mode: AnMode,
    z: Option<&ComplexVector>,
) -> Result<f64> {
    let tx = Transmission::with_parts(scenario, budget, precoders.clone(), projector.clone())?;
    match (mode, z) {
        (AnMode::Expected, _) => tx.expected_sinr(&budget.probe()),
        (AnMode::Instantaneous, Some(z)) => tx.instantaneous_sinr(&budget.probe(), z),
        (AnMode::Instantaneous, None) => Err(Error::Contract(
            "instantaneous AN mode requires an AN sample".into(),
        )),
    }
}

/// M-PSK bit error rate `(2 / log2 M) Q(√(2γ) sin(π/M))`; exactly `Q(√γ)`
/// for QPSK.
pub fn ber_from_snr(gamma: f64, m: u32) -> Result<f64> {
    if gamma.is_nan() || gamma < 0.0 {
        return Err(Error::Domain(format!("SNR {gamma} must be non-negative")));
    }
    if m < 2 || !m.is_power_of_two() {
        return Err(Error::Domain(format!(
            "constellation order {m} must be a power of two ≥ 2"
        )));
    }
    if m == 4 {
        return q_function(gamma.sqrt());
    }
    mpsk_ber(gamma, m)
}

fn mpsk_ber(gamma: f64, m: u32) -> Result<f64> {
    let bits = m.trailing_zeros() as f64;
    Ok(2.0 / bits * q_function((2.0 * gamma).sqrt() * (PI / m as f64).sin())?)
}

fn probe_sinr(scenario: &Scenario, budget: &LinkBudget, tx: &Transmission, mode: AnMode) -> Result<f64> {
    match mode {
        AnMode::Expected => tx.expected_sinr(&budget.probe()),
        AnMode::Instantaneous => {
            let z = sample_an(scenario.na, StreamSeed::new(scenario.seed, 0))?;
            tx.instantaneous_sinr(&budget.probe(), &z)
        }
    }
}

/// Full pipeline for the IRS-aided scheme with the eavesdropper at `probe`.
/// Instantaneous mode draws its AN sample from stream 0 of `scenario.seed`.
pub fn secrecy_metrics(scenario: &Scenario, probe: Position, mode: AnMode) -> Result<SecrecyMetrics> {
    let budget = link_budget(scenario, probe)?;
    let tx = Transmission::new(scenario, &budget)?;
    let gamma_b = snr_bob(scenario, &budget)?;
    let gamma_e = probe_sinr(scenario, &budget, &tx, mode)?;
    SecrecyMetrics::from_sinrs(gamma_b, gamma_e)
}

/// Direct-path directional modulation without the IRS.
pub fn benchmark_no_irs(scenario: &Scenario, probe: Position) -> Result<SecrecyMetrics> {
    benchmark_no_irs_with_mode(scenario, probe, AnMode::Expected)
}

pub fn benchmark_no_irs_with_mode(
    scenario: &Scenario,
    probe: Position,
    mode: AnMode,
) -> Result<SecrecyMetrics> {
    let budget = link_budget(scenario, probe)?;
    let tx = Transmission::new(scenario, &budget)?.without_irs();
    let gamma_b = bob_snr(
        scenario.alpha,
        scenario.transmit_power()?.mw(),
        scenario.noise_power()?.mw(),
        budget.l_ab,
        budget.l_arb,
        0,
    );
    let gamma_e = probe_sinr(scenario, &budget, &tx, mode)?;
    SecrecyMetrics::from_sinrs(gamma_b, gamma_e)
}

/// Monte-Carlo QPSK BER at `probe` over `samples` instantaneous AN draws.
pub fn mc_ber(scenario: &Scenario, probe: Position, samples: usize, seed: u64) -> Result<f64> {
    let budget = link_budget(scenario, probe)?;
    let tx = Transmission::new(scenario, &budget)?;
    tx.mc_ber(&budget.probe(), samples, StreamSeed::new(seed, 0))
}
