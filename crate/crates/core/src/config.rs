//! Scenario description and its JSON file format.
//!
//! Every field is optional in the file; missing fields take the reference
//! scene: a 16-antenna transmitter at the origin, a 50-element IRS at
//! (20, -15) and the legitimate user at (20, 0).

use serde::{Deserialize, Serialize};

use crate::arrays::ArraySpec;
use crate::error::{Error, Result};
use crate::geometry::{PathLossCombine, Position};
use crate::numerics::PowerLevel;
use crate::secrecy::AnMode;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Scenario {
    /// Transmit antennas at Alice.
    pub na: usize,
    /// Reflecting elements at the IRS.
    pub nr: usize,
    /// Alice's element spacing in wavelengths.
    pub spacing_alice: f64,
    /// IRS element spacing in wavelengths.
    pub spacing_irs: f64,
    pub pt_dbm: f64,
    pub noise_dbm: f64,
    /// Fraction of transmit power carrying the confidential symbol.
    pub alpha: f64,
    /// Path-loss reference distance in meters.
    pub d0_m: f64,
    pub alice: Position,
    pub bob: Position,
    pub irs: Position,
    /// Eavesdropper (probe) position.
    pub eve: Position,
    pub path_loss_combine: PathLossCombine,
    pub an_mode: AnMode,
    pub seed: u64,
    pub mc_samples: usize,
}

impl Default for Scenario {
    fn default() -> Self {
        Scenario {
            na: 16,
            nr: 50,
            spacing_alice: 0.5,
            spacing_irs: 0.5,
            pt_dbm: 25.0,
            noise_dbm: -20.0,
            alpha: 0.6,
            d0_m: 1.0,
            alice: Position::new(0.0, 0.0),
            bob: Position::new(20.0, 0.0),
            irs: Position::new(20.0, -15.0),
            eve: Position::new(30.0, 20.0),
            path_loss_combine: PathLossCombine::SumDistance,
            an_mode: AnMode::Expected,
            seed: 0,
            mc_samples: 1000,
        }
    }
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        if self.na < 2 {
            return Err(Error::validation(
                "na",
                "at least 2 antennas are needed to steer artificial noise",
            ));
        }
        if self.nr < 1 {
            return Err(Error::validation("nr", "must be at least 1"));
        }
        for (field, v) in [
            ("spacing_alice", self.spacing_alice),
            ("spacing_irs", self.spacing_irs),
            ("d0_m", self.d0_m),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::validation(
                    field,
                    format!("must be positive and finite, got {v}"),
                ));
            }
        }
        for (field, v) in [("pt_dbm", self.pt_dbm), ("noise_dbm", self.noise_dbm)] {
            if !v.is_finite() {
                return Err(Error::validation(field, "must be finite"));
            }
        }
        if !(0.0..=1.0).contains(&self.alpha) {
            return Err(Error::validation(
                "alpha",
                format!("must lie in [0, 1], got {}", self.alpha),
            ));
        }
        if self.mc_samples < 1 {
            return Err(Error::validation("mc_samples", "must be at least 1"));
        }
        for (field, p) in [
            ("alice", self.alice),
            ("bob", self.bob),
            ("irs", self.irs),
            ("eve", self.eve),
        ] {
            if !p.is_finite() {
                return Err(Error::validation(field, "coordinates must be finite"));
            }
        }
        let named = [("alice", self.alice), ("bob", self.bob), ("irs", self.irs)];
        for i in 0..named.len() {
            for j in i + 1..named.len() {
                if named[i].1 == named[j].1 {
                    return Err(Error::DegenerateGeometry(format!(
                        "{} and {} share position {}",
                        named[i].0, named[j].0, named[i].1
                    )));
                }
            }
        }
        // Eve may sit on Bob; she may not sit on a transmitting or reflecting node.
        for (name, p) in [("alice", self.alice), ("irs", self.irs)] {
            if self.eve == p {
                return Err(Error::DegenerateGeometry(format!("eve coincides with {name}")));
            }
        }
        Ok(())
    }

    pub fn alice_array(&self) -> Result<ArraySpec> {
        ArraySpec::new(self.na, self.spacing_alice)
    }

    pub fn irs_array(&self) -> Result<ArraySpec> {
        ArraySpec::new(self.nr, self.spacing_irs)
    }

    pub fn transmit_power(&self) -> Result<PowerLevel> {
        PowerLevel::from_dbm(self.pt_dbm)
    }

    pub fn noise_power(&self) -> Result<PowerLevel> {
        PowerLevel::from_dbm(self.noise_dbm)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes")
    }

    pub fn to_compact_json(&self) -> String {
        serde_json::to_string(self).expect("scenario serializes")
    }
}

/// Parses and validates a JSON scenario. Unknown keys are rejected.
pub fn parse_config(text: &str) -> Result<Scenario> {
    let scenario: Scenario = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    scenario.validate()?;
    Ok(scenario)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_object_gives_reference_scene() {
        let s = parse_config("{}").unwrap();
        assert_eq!(s, Scenario::default());
        assert_eq!((s.na, s.nr), (16, 50));
        assert_eq!((s.pt_dbm, s.noise_dbm, s.alpha, s.d0_m), (25.0, -20.0, 0.6, 1.0));
        assert_eq!((s.spacing_alice, s.spacing_irs), (0.5, 0.5));
        assert_eq!(s.alice, Position::new(0.0, 0.0));
        assert_eq!(s.bob, Position::new(20.0, 0.0));
        assert_eq!(s.irs, Position::new(20.0, -15.0));
    }

    #[test]
    fn alpha_out_of_range_names_field() {
        match parse_config(r#"{"alpha": 1.5}"#) {
            Err(Error::Validation { field, .. }) => assert_eq!(field, "alpha"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn missing_brace_is_parse_error() {
        match parse_config("{\n  \"nr\": 10\n") {
            Err(Error::Parse { line, .. }) => assert!(line >= 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unknown_key_rejected() {
        assert!(matches!(
            parse_config(r#"{"alhpa": 0.5}"#),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn coincident_nodes_rejected() {
        let r = parse_config(r#"{"bob": {"x": 0, "y": 0}}"#);
        assert!(matches!(r, Err(Error::DegenerateGeometry(_))));
        let r = parse_config(r#"{"eve": {"x": 20, "y": -15}}"#);
        assert!(matches!(r, Err(Error::DegenerateGeometry(_))));
        // Eve on Bob is a legal probe.
        assert!(parse_config(r#"{"eve": {"x": 20, "y": 0}}"#).is_ok());
    }

    #[test]
    fn small_arrays_rejected() {
        assert!(
            matches!(parse_config(r#"{"na": 1}"#), Err(Error::Validation { field, .. }) if field == "na")
        );
        assert!(
            matches!(parse_config(r#"{"nr": 0}"#), Err(Error::Validation { field, .. }) if field == "nr")
        );
        assert!(
            matches!(parse_config(r#"{"mc_samples": 0}"#), Err(Error::Validation { field, .. }) if field == "mc_samples")
        );
    }

    #[test]
    fn enum_fields_parse() {
        let s = parse_config(r#"{"path_loss_combine": "product", "an_mode": "instantaneous"}"#).unwrap();
        assert_eq!(s.path_loss_combine, PathLossCombine::Product);
        assert_eq!(s.an_mode, AnMode::Instantaneous);
    }

    #[test]
    fn defaults_round_trip() {
        let s = Scenario::default();
        assert_eq!(parse_config(&s.to_json()).unwrap(), s);
        assert_eq!(parse_config(&s.to_compact_json()).unwrap(), s);
    }
}
