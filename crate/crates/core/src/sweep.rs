//! The three experiment sweeps: BER over (direct angle, IRS deflection),
//! secrecy rate over the IRS size, and secrecy rate over the Alice–Bob
//! distance.
//!
//! Cells are evaluated in parallel but rows are always emitted in
//! lexicographic grid order, and any randomness in a cell comes from a
//! stream keyed by `(seed, cell index)`, so output never depends on
//! scheduling.

use rayon::prelude::*;

use crate::config::Scenario;
use crate::error::{Error, Result};
use crate::geometry::{link_budget, Position, ReceiverPaths};
use crate::numerics::to_db;
use crate::secrecy::{benchmark_no_irs_with_mode, ber_from_snr, secrecy_metrics, AnMode, Transmission};
use crate::transmitter::StreamSeed;

/// One named coordinate axis of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub name: String,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub axes: Vec<Axis>,
    /// CSV header names: axis columns first, then metric columns.
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    /// `key=value` pairs echoed as comments ahead of the CSV header.
    pub metadata: Vec<(String, String)>,
}

impl SweepResult {
    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Values of column `name` in row order.
    pub fn column_values(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.column(name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }
}

fn base_metadata(sweep: &str, scenario: &Scenario) -> Vec<(String, String)> {
    vec![
        ("generator".into(), format!("dmirs {}", env!("CARGO_PKG_VERSION"))),
        ("sweep".into(), sweep.into()),
        ("seed".into(), scenario.seed.to_string()),
        ("an_mode".into(), scenario.an_mode.to_string()),
        ("scenario".into(), scenario.to_compact_json()),
    ]
}

/// Evenly spaced points over `[0, 180]` degrees.
fn angle_axis(points: usize) -> Vec<f64> {
    (0..points)
        .map(|i| 180.0 * i as f64 / (points - 1) as f64)
        .collect()
}

/// Grid size of the angular BER map.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HeatmapGrid {
    pub phi_points: usize,
    pub theta_points: usize,
}

impl HeatmapGrid {
    pub fn new(phi_points: usize, theta_points: usize) -> Self {
        HeatmapGrid {
            phi_points,
            theta_points,
        }
    }

    /// Parses `"181x181"`.
    pub fn parse(text: &str) -> Result<Self> {
        let bad = || Error::validation("grid", format!("expected ROWSxCOLS, got `{text}`"));
        let (a, b) = text.split_once(['x', 'X']).ok_or_else(bad)?;
        Ok(HeatmapGrid::new(
            a.trim().parse().map_err(|_| bad())?,
            b.trim().parse().map_err(|_| bad())?,
        ))
    }
}

impl Default for HeatmapGrid {
    fn default() -> Self {
        HeatmapGrid::new(181, 181)
    }
}

/// QPSK BER seen by a receiver at Bob's distances but arbitrary direct
/// departure angle `φ` and IRS deflection `θ`, both swept over 0°–180°.
///
/// Columns: `phi_deg, theta_deg, sinr_db, ber`. `sinr_db` is the
/// expected-AN SINR. In instantaneous mode `ber` is a Monte-Carlo mean over
/// `scenario.mc_samples` AN draws from stream `(seed, cell index)`.
pub fn run_heatmap(scenario: &Scenario, grid: HeatmapGrid) -> Result<SweepResult> {
    scenario.validate()?;
    if grid.phi_points < 2 || grid.theta_points < 2 {
        return Err(Error::validation("grid", "need at least 2 points per axis"));
    }
    let budget = link_budget(scenario, scenario.bob)?;
    let tx = Transmission::new(scenario, &budget)?;
    let phis = angle_axis(grid.phi_points);
    let thetas = angle_axis(grid.theta_points);

    let direct = phis
        .par_iter()
        .map(|phi| tx.direct_response(phi.to_radians()))
        .collect::<Result<Vec<_>>>()?;
    let cascade: Vec<_> = thetas
        .iter()
        .map(|theta| tx.cascade_response(theta.to_radians()))
        .collect();

    let n_theta = thetas.len();
    let rows = (0..phis.len() * n_theta)
        .into_par_iter()
        .map(|cell| {
            let (i, j) = (cell / n_theta, cell % n_theta);
            let rx = ReceiverPaths {
                direct_angle: phis[i].to_radians(),
                direct_loss: budget.l_ab,
                deflection: thetas[j].to_radians(),
                cascade_loss: budget.l_arb,
            };
            let sinr = tx.sinr(&rx, &direct[i], cascade[j], direct[i].leak_power);
            let ber = match scenario.an_mode {
                AnMode::Expected => ber_from_snr(sinr, 4)?,
                AnMode::Instantaneous => tx.mc_ber_with(
                    &rx,
                    &direct[i],
                    cascade[j],
                    scenario.mc_samples,
                    StreamSeed::new(scenario.seed, cell as u64),
                )?,
            };
            Ok(vec![phis[i], thetas[j], to_db(sinr), ber])
        })
        .collect::<Result<Vec<_>>>()?;

    let mut metadata = base_metadata("heatmap", scenario);
    metadata.push((
        "probe".into(),
        format!(
            "direct distance d_ab={} m, IRS distance d_rb={} m; phi is the departure angle at alice, theta the deflection at the irs",
            budget.d_ab, budget.d_rb
        ),
    ));
    if scenario.an_mode == AnMode::Instantaneous {
        metadata.push(("mc_samples".into(), scenario.mc_samples.to_string()));
    }
    Ok(SweepResult {
        axes: vec![
            Axis {
                name: "phi_deg".into(),
                values: phis,
            },
            Axis {
                name: "theta_deg".into(),
                values: thetas,
            },
        ],
        columns: ["phi_deg", "theta_deg", "sinr_db", "ber"]
            .map(String::from)
            .to_vec(),
        rows,
        metadata,
    })
}

fn secrecy_pair(scenario: &Scenario) -> Result<(f64, f64)> {
    scenario.validate()?;
    let proposed = secrecy_metrics(scenario, scenario.eve, scenario.an_mode)?;
    let benchmark = benchmark_no_irs_with_mode(scenario, scenario.eve, scenario.an_mode)?;
    Ok((proposed.rate_s, benchmark.rate_s))
}

fn check_nonempty(field: &str, values: &[impl Sized]) -> Result<()> {
    if values.is_empty() {
        return Err(Error::validation(field, "list must not be empty"));
    }
    Ok(())
}

/// Secrecy rate of the IRS-aided scheme and of the no-IRS benchmark over
/// IRS sizes and transmit powers, with Eve fixed at `scenario.eve`.
///
/// Columns: `nr, pt_dbm, rs_proposed_bits, rs_benchmark_bits`.
pub fn run_sweep_nr(scenario: &Scenario, nr_values: &[usize], pt_dbm_values: &[f64]) -> Result<SweepResult> {
    check_nonempty("nr", nr_values)?;
    check_nonempty("pt", pt_dbm_values)?;
    let cells: Vec<(usize, f64)> = nr_values
        .iter()
        .flat_map(|&nr| pt_dbm_values.iter().map(move |&pt| (nr, pt)))
        .collect();
    let rows = cells
        .par_iter()
        .map(|&(nr, pt_dbm)| {
            let s = Scenario {
                nr,
                pt_dbm,
                ..scenario.clone()
            };
            let (p, b) = secrecy_pair(&s)?;
            Ok(vec![nr as f64, pt_dbm, p, b])
        })
        .collect::<Result<Vec<_>>>()?;

    let mut metadata = base_metadata("sweep-nr", scenario);
    metadata.push(("eve".into(), format!("{},{}", scenario.eve.x, scenario.eve.y)));
    Ok(SweepResult {
        axes: vec![
            Axis {
                name: "nr".into(),
                values: nr_values.iter().map(|&n| n as f64).collect(),
            },
            Axis {
                name: "pt_dbm".into(),
                values: pt_dbm_values.to_vec(),
            },
        ],
        columns: ["nr", "pt_dbm", "rs_proposed_bits", "rs_benchmark_bits"]
            .map(String::from)
            .to_vec(),
        rows,
        metadata,
    })
}

/// Bob placed `dab` meters from Alice along the configured Alice→Bob ray.
pub fn bob_at_distance(scenario: &Scenario, dab: f64) -> Result<Position> {
    if !(dab.is_finite() && dab > 0.0) {
        return Err(Error::validation(
            "dab",
            format!("distance {dab} must be positive"),
        ));
    }
    let (a, b) = (scenario.alice, scenario.bob);
    let d = crate::geometry::distance(a, b)?;
    Ok(Position::new(
        a.x + dab * (b.x - a.x) / d,
        a.y + dab * (b.y - a.y) / d,
    ))
}

/// Secrecy rate of both schemes as Bob moves along the Alice→Bob ray; the
/// IRS and Eve stay put and the IRS re-focuses on Bob at every distance.
///
/// Columns: `dab_m, pt_dbm, rs_proposed_bits, rs_benchmark_bits`.
pub fn run_sweep_dab(scenario: &Scenario, dab_values: &[f64], pt_dbm_values: &[f64]) -> Result<SweepResult> {
    check_nonempty("dab", dab_values)?;
    check_nonempty("pt", pt_dbm_values)?;
    let cells: Vec<(f64, f64)> = dab_values
        .iter()
        .flat_map(|&d| pt_dbm_values.iter().map(move |&pt| (d, pt)))
        .collect();
    let rows = cells
        .par_iter()
        .map(|&(dab, pt_dbm)| {
            let bob = bob_at_distance(scenario, dab)?;
            let s = Scenario {
                bob,
                pt_dbm,
                ..scenario.clone()
            };
            let (p, b) = secrecy_pair(&s)?;
            Ok(vec![dab, pt_dbm, p, b])
        })
        .collect::<Result<Vec<_>>>()?;

    let mut metadata = base_metadata("sweep-dab", scenario);
    metadata.push(("eve".into(), format!("{},{}", scenario.eve.x, scenario.eve.y)));
    metadata.push(("irs".into(), format!("{},{}", scenario.irs.x, scenario.irs.y)));
    Ok(SweepResult {
        axes: vec![
            Axis {
                name: "dab_m".into(),
                values: dab_values.to_vec(),
            },
            Axis {
                name: "pt_dbm".into(),
                values: pt_dbm_values.to_vec(),
            },
        ],
        columns: ["dab_m", "pt_dbm", "rs_proposed_bits", "rs_benchmark_bits"]
            .map(String::from)
            .to_vec(),
        rows,
        metadata,
    })
}

/// Parses either `start:stop:step` (inclusive of `stop`) or a comma list.
pub fn parse_values(field: &str, text: &str) -> Result<Vec<f64>> {
    let bad = |why: &str| Error::validation(field, format!("{why}: `{text}`"));
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| bad("not a number"));
    let parts: Vec<&str> = text.split(':').collect();
    let values = match parts.as_slice() {
        [start, stop, step] => {
            let (start, stop, step) = (num(start)?, num(stop)?, num(step)?);
            if step.is_nan() || step <= 0.0 || stop < start {
                return Err(bad("range needs step > 0 and stop ≥ start"));
            }
            let n = ((stop - start) / step + 1e-9).floor() as usize;
            (0..=n).map(|i| start + i as f64 * step).collect()
        }
        [list] => list.split(',').map(num).collect::<Result<Vec<_>>>()?,
        _ => return Err(bad("expected start:stop:step or a comma list")),
    };
    if values.iter().any(|v| !v.is_finite()) {
        return Err(bad("values must be finite"));
    }
    if values.is_empty() {
        return Err(bad("no values"));
    }
    Ok(values)
}

/// Like [`parse_values`] but every value must be a positive integer.
pub fn parse_counts(field: &str, text: &str) -> Result<Vec<usize>> {
    parse_values(field, text)?
        .into_iter()
        .map(|v| {
            if v >= 1.0 && v.fract() == 0.0 {
                Ok(v as usize)
            } else {
                Err(Error::validation(field, format!("{v} is not a positive integer")))
            }
        })
        .collect()
}

/// Index of the grid point closest to `deg` on an `angle_axis` of `points`.
pub fn nearest_angle_index(deg: f64, points: usize) -> usize {
    let step = 180.0 / (points - 1) as f64;
    ((deg / step).round() as usize).min(points - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn heatmap_row_order_and_count() {
        let s = Scenario::default();
        let r = run_heatmap(&s, HeatmapGrid::new(7, 5)).unwrap();
        assert_eq!(r.rows.len(), 35);
        for (k, row) in r.rows.iter().enumerate() {
            assert_eq!(row[0], 180.0 * (k / 5) as f64 / 6.0);
            assert_eq!(row[1], 180.0 * (k % 5) as f64 / 4.0);
        }
        assert!(run_heatmap(&s, HeatmapGrid::new(1, 5)).is_err());
    }

    #[test]
    fn heatmap_mc_is_reproducible() {
        let s = Scenario {
            an_mode: AnMode::Instantaneous,
            mc_samples: 8,
            seed: 42,
            ..Scenario::default()
        };
        let a = run_heatmap(&s, HeatmapGrid::new(13, 13)).unwrap();
        let b = run_heatmap(&s, HeatmapGrid::new(13, 13)).unwrap();
        assert_eq!(a, b);
        let c = run_heatmap(&Scenario { seed: 43, ..s }, HeatmapGrid::new(13, 13)).unwrap();
        assert_ne!(a.rows, c.rows);
    }

    #[test]
    fn nr_sweep_shape() {
        let s = Scenario::default();
        let r = run_sweep_nr(&s, &[10, 20, 30], &[10.0, 15.0]).unwrap();
        assert_eq!(r.rows.len(), 6);
        assert_eq!(r.rows[1][..2], [10.0, 15.0]);
        assert_eq!(r.rows[2][..2], [20.0, 10.0]);
        assert!(run_sweep_nr(&s, &[], &[10.0]).is_err());
    }

    #[test]
    fn dab_sweep_grid() {
        let s = Scenario::default();
        let dab = parse_values("dab", "10:50:5").unwrap();
        let r = run_sweep_dab(&s, &dab, &[10.0, 15.0]).unwrap();
        assert_eq!(r.rows.len(), 18);
        assert_eq!(bob_at_distance(&s, 35.0).unwrap(), Position::new(35.0, 0.0));
        assert!(run_sweep_dab(&s, &[0.0], &[10.0]).is_err());
    }

    #[test]
    fn value_parsing() {
        assert_eq!(parse_values("pt", "10,15").unwrap(), vec![10.0, 15.0]);
        assert_eq!(parse_values("d", "10:50:1").unwrap().len(), 41);
        assert_eq!(parse_values("d", "0:1:0.1").unwrap().len(), 11);
        assert_eq!(parse_counts("nr", "10:200:10").unwrap().len(), 20);
        assert!(parse_values("d", "1:0:1").is_err());
        assert!(parse_values("d", "1:2").is_err());
        assert!(parse_values("d", "a,b").is_err());
        assert!(parse_counts("nr", "1.5").is_err());
        assert!(parse_counts("nr", "0").is_err());
        assert_eq!(HeatmapGrid::parse("181x91").unwrap(), HeatmapGrid::new(181, 91));
        assert!(HeatmapGrid::parse("181").is_err());
    }

    #[test]
    fn nearest_index() {
        assert_eq!(nearest_angle_index(90.0, 181), 90);
        assert_eq!(nearest_angle_index(0.4, 181), 0);
        assert_eq!(nearest_angle_index(180.0, 13), 12);
    }
}
