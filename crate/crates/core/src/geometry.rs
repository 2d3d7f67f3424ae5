//! Scene geometry in the plane.
//!
//! Alice's array and the IRS element line both lie along the +x axis, so a
//! direction is described by the unsigned angle in `[0, π]` between +x and
//! the line of sight.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::config::Scenario;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Position {
    pub x: f64,
    pub y: f64,
}

impl Position {
    pub const fn new(x: f64, y: f64) -> Self {
        Position { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn offset(&self, dx: f64, dy: f64) -> Position {
        Position::new(self.x + dx, self.y + dy)
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// How the Alice→IRS→receiver path loss is formed from its two legs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PathLossCombine {
    /// `((d_ar + d_rx) / d0)^-2`: one composite distance.
    #[default]
    SumDistance,
    /// `L_ar · L_rx`: product of the per-leg losses.
    Product,
}

impl PathLossCombine {
    pub fn cascaded(self, d_ar: f64, d_rx: f64, d0: f64) -> Result<f64> {
        match self {
            PathLossCombine::SumDistance => path_loss(d_ar + d_rx, d0),
            PathLossCombine::Product => Ok(path_loss(d_ar, d0)? * path_loss(d_rx, d0)?),
        }
    }
}

pub fn distance(a: Position, b: Position) -> Result<f64> {
    let d = (b.x - a.x).hypot(b.y - a.y);
    if d == 0.0 {
        return Err(Error::DegenerateGeometry(format!("points coincide at {a}")));
    }
    Ok(d)
}

/// Unsigned angle between +x and the direction `origin → target`.
pub fn angle_of(origin: Position, target: Position) -> Result<f64> {
    distance(origin, target)?;
    Ok((target.y - origin.y).abs().atan2(target.x - origin.x))
}

/// Free-space gain `(d / d0)^-2`.
pub fn path_loss(d: f64, d0: f64) -> Result<f64> {
    if !(d > 0.0 && d.is_finite()) {
        return Err(Error::Domain(format!("distance {d} must be positive")));
    }
    if !(d0 > 0.0 && d0.is_finite()) {
        return Err(Error::Domain(format!("reference distance {d0} must be positive")));
    }
    Ok((d / d0).powi(-2))
}

/// Angles and losses seen by one receiver over both paths.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReceiverPaths {
    /// Departure angle at Alice towards the receiver.
    pub direct_angle: f64,
    pub direct_loss: f64,
    /// Departure angle at the IRS towards the receiver.
    pub deflection: f64,
    pub cascade_loss: f64,
}

/// Distances (m), angles (rad) and path-loss gains for Bob and one probe.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkBudget {
    pub d_ab: f64,
    pub d_ar: f64,
    pub d_rb: f64,
    pub d_ae: f64,
    pub d_re: f64,
    pub phi_ab: f64,
    pub phi_ar: f64,
    pub phi_ae: f64,
    pub theta_b: f64,
    pub theta_e: f64,
    pub l_ab: f64,
    pub l_arb: f64,
    pub l_ae: f64,
    pub l_are: f64,
}

impl LinkBudget {
    pub fn bob(&self) -> ReceiverPaths {
        ReceiverPaths {
            direct_angle: self.phi_ab,
            direct_loss: self.l_ab,
            deflection: self.theta_b,
            cascade_loss: self.l_arb,
        }
    }

    pub fn probe(&self) -> ReceiverPaths {
        ReceiverPaths {
            direct_angle: self.phi_ae,
            direct_loss: self.l_ae,
            deflection: self.theta_e,
            cascade_loss: self.l_are,
        }
    }
}

/// Geometry of `scenario` with the eavesdropper placed at `probe`.
///
/// The probe may coincide with Bob but not with Alice or the IRS.
pub fn link_budget(scenario: &Scenario, probe: Position) -> Result<LinkBudget> {
    let (alice, bob, irs) = (scenario.alice, scenario.bob, scenario.irs);
    let d0 = scenario.d0_m;
    let combine = scenario.path_loss_combine;

    let d_ab = distance(alice, bob)?;
    let d_ar = distance(alice, irs)?;
    let d_rb = distance(irs, bob)?;
    let d_ae = distance(alice, probe)?;
    let d_re = distance(irs, probe)?;

    Ok(LinkBudget {
        d_ab,
        d_ar,
        d_rb,
        d_ae,
        d_re,
        phi_ab: angle_of(alice, bob)?,
        phi_ar: angle_of(alice, irs)?,
        phi_ae: angle_of(alice, probe)?,
        theta_b: angle_of(irs, bob)?,
        theta_e: angle_of(irs, probe)?,
        l_ab: path_loss(d_ab, d0)?,
        l_arb: combine.cascaded(d_ar, d_rb, d0)?,
        l_ae: path_loss(d_ae, d0)?,
        l_are: combine.cascaded(d_ar, d_re, d0)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_PI_2;

    const ALICE: Position = Position::new(0.0, 0.0);
    const BOB: Position = Position::new(20.0, 0.0);
    const IRS: Position = Position::new(20.0, -15.0);

    #[test]
    fn distances() {
        assert_eq!(distance(ALICE, BOB).unwrap(), 20.0);
        assert_eq!(distance(BOB, IRS).unwrap(), 15.0);
        assert_eq!(distance(ALICE, IRS).unwrap(), 25.0);
        assert!(matches!(distance(BOB, BOB), Err(Error::DegenerateGeometry(_))));
    }

    #[test]
    fn angles() {
        assert_eq!(angle_of(ALICE, BOB).unwrap(), 0.0);
        assert!((angle_of(IRS, BOB).unwrap() - FRAC_PI_2).abs() < 1e-15);
        assert!((angle_of(ALICE, IRS).unwrap() - 0.6435011087932844).abs() < 1e-12);
        assert!(angle_of(IRS, IRS).is_err());
    }

    #[test]
    fn path_losses() {
        assert_eq!(path_loss(3.0, 3.0).unwrap(), 1.0);
        assert!((path_loss(20.0, 1.0).unwrap() - 2.5e-3).abs() < 1e-15);
        assert!((path_loss(40.0, 1.0).unwrap() - 6.25e-4).abs() < 1e-15);
        assert!(matches!(path_loss(0.0, 1.0), Err(Error::Domain(_))));
        assert!(path_loss(-1.0, 1.0).is_err());
    }

    #[test]
    fn reference_budget_at_bob() {
        let s = Scenario::default();
        let b = link_budget(&s, s.bob).unwrap();
        assert_eq!((b.d_ab, b.d_ar, b.d_rb), (20.0, 25.0, 15.0));
        assert!((b.l_ab - 2.5e-3).abs() < 1e-15);
        assert!((b.l_arb - 6.25e-4).abs() < 1e-15);
        assert_eq!(b.theta_e, b.theta_b);
        assert_eq!(b.l_are, b.l_arb);
        assert_eq!(b.bob(), b.probe());
    }

    #[test]
    fn product_rule() {
        let s = Scenario {
            path_loss_combine: PathLossCombine::Product,
            ..Scenario::default()
        };
        let b = link_budget(&s, s.bob).unwrap();
        assert!((b.l_arb - 1.0 / (625.0 * 225.0)).abs() < 1e-18);
    }

    #[test]
    fn probe_on_alice_is_degenerate() {
        let s = Scenario::default();
        assert!(matches!(
            link_budget(&s, ALICE),
            Err(Error::DegenerateGeometry(_))
        ));
        assert!(link_budget(&s, IRS).is_err());
    }

    fn scene(dx: f64, dy: f64, flip: bool) -> Scenario {
        let t = |p: Position| {
            let q = if flip { Position::new(p.x, -p.y) } else { p };
            q.offset(dx, dy)
        };
        let s = Scenario::default();
        Scenario {
            alice: t(s.alice),
            bob: t(s.bob),
            irs: t(s.irs),
            ..s
        }
    }

    fn budget_fields(b: &LinkBudget) -> [f64; 14] {
        [
            b.d_ab, b.d_ar, b.d_rb, b.d_ae, b.d_re, b.phi_ab, b.phi_ar, b.phi_ae, b.theta_b, b.theta_e,
            b.l_ab, b.l_arb, b.l_ae, b.l_are,
        ]
    }

    proptest! {
        #[test]
        fn translation_invariant(dx in -100.0..100.0f64, dy in -100.0..100.0f64,
                                 px in -40.0..60.0f64, py in -40.0..40.0f64) {
            let base = Scenario::default();
            let probe = Position::new(px, py);
            prop_assume!(distance(probe, base.alice).is_ok_and(|d| d > 1.0));
            prop_assume!(distance(probe, base.irs).is_ok_and(|d| d > 1.0));
            let a = link_budget(&base, probe).unwrap();
            let b = link_budget(&scene(dx, dy, false), probe.offset(dx, dy)).unwrap();
            for (u, v) in budget_fields(&a).iter().zip(budget_fields(&b).iter()) {
                prop_assert!((u - v).abs() <= 1e-12 * u.abs().max(1.0), "{u} vs {v}");
            }
        }

        #[test]
        fn reflection_invariant(px in -40.0..60.0f64, py in -40.0..40.0f64) {
            let base = Scenario::default();
            let probe = Position::new(px, py);
            prop_assume!(distance(probe, base.alice).is_ok_and(|d| d > 1e-3));
            prop_assume!(distance(probe, base.irs).is_ok_and(|d| d > 1e-3));
            let a = link_budget(&base, probe).unwrap();
            let b = link_budget(&scene(0.0, 0.0, true), Position::new(px, -py)).unwrap();
            prop_assert_eq!(budget_fields(&a), budget_fields(&b));
        }

        #[test]
        fn path_loss_decreasing(d in 0.01..1e4f64, step in 1e-6..10.0f64) {
            prop_assert!(path_loss(d + step, 1.0).unwrap() < path_loss(d, 1.0).unwrap());
        }
    }
}
