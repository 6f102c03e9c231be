//! Scenario names, their one-line anchors, and flat dotted-key
//! configuration with documented defaults.

use num_complex::Complex64 as C64;

use crate::error::{OpdynError, Result};
use crate::dynamics::HccConfig;

use super::report::{format_c64, parse_c64};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    Ex2_1,
    Thm2_2,
    Dw,
    Ex2_4,
    Rmk2_6,
    Prop3_1,
    Prop3_2,
    Thm3_4,
    Thm4_1,
    Thm5_1,
    Ex5_3,
    Prop5_4,
    Tarbard,
}

impl Scenario {
    pub fn all() -> [Scenario; 13] {
        use Scenario::*;
        [
            Ex2_1, Thm2_2, Dw, Ex2_4, Rmk2_6, Prop3_1, Prop3_2, Thm3_4, Thm4_1,
            Thm5_1, Ex5_3, Prop5_4, Tarbard,
        ]
    }

    pub fn name(self) -> &'static str {
        match self {
            Scenario::Ex2_1 => "ex2_1",
            Scenario::Thm2_2 => "thm2_2",
            Scenario::Dw => "dw",
            Scenario::Ex2_4 => "ex2_4",
            Scenario::Rmk2_6 => "rmk2_6",
            Scenario::Prop3_1 => "prop3_1",
            Scenario::Prop3_2 => "prop3_2",
            Scenario::Thm3_4 => "thm3_4",
            Scenario::Thm4_1 => "thm4_1",
            Scenario::Thm5_1 => "thm5_1",
            Scenario::Ex5_3 => "ex5_3",
            Scenario::Prop5_4 => "prop5_4",
            Scenario::Tarbard => "tarbard",
        }
    }

    pub fn from_name(s: &str) -> Result<Scenario> {
        Scenario::all()
            .into_iter()
            .find(|sc| sc.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Scenario::all().iter().map(|s| s.name()).collect();
                OpdynError::Config(format!(
                    "unknown scenario `{s}`; expected one of: {}",
                    names.join(", ")
                ))
            })
    }

    /// One-line description printed in the report header and by `list`.
    pub fn anchor(self) -> &'static str {
        match self {
            Scenario::Ex2_1 => {
                "left-shift derivation transported through rank-one tensors; \
                 criterion and reachability probes on its lift"
            }
            Scenario::Thm2_2 => {
                "extended-backward-shift base operator: criterion probes for the \
                 derivations lifted from I+T and from exp(T)"
            }
            Scenario::Dw => {
                "identity plus dyadic weighted shift on the base space: criterion \
                 probe and kernel-range structure"
            }
            Scenario::Rmk2_6 => {
                "similarity conjugation of a derivation: intertwining diagram \
                 defect and spectrum preservation"
            }
            Scenario::Ex2_4 => {
                "right-multiplier derivation built from a forward shift, dual to \
                 the backward-shift form"
            }
            Scenario::Prop3_1 => {
                "adjoint point-spectrum obstruction for the forward/backward \
                 shift derivation"
            }
            Scenario::Prop3_2 => {
                "adjoint eigenvalue obstruction for a three-pair shift tuple with \
                 geometric witness vectors"
            }
            Scenario::Thm3_4 => {
                "derivation of a compact-model pair: discrete difference-set \
                 spectrum with an isolated component at zero"
            }
            Scenario::Thm4_1 => {
                "self-commutator identity for derivation lifts; positive \
                 semidefiniteness rules out supercyclicity"
            }
            Scenario::Thm5_1 => {
                "scalar-plus-nilpotent model algebra: the scalar functional is an \
                 adjoint eigenvector of every elementary operator"
            }
            Scenario::Ex5_3 => {
                "contrast: criterion probe on the ideal compression versus the \
                 functional obstruction on the full algebra"
            }
            Scenario::Prop5_4 => {
                "commutator maps ignore the scalar part exactly; the nilpotent \
                 commutator is spectrally obstructed"
            }
            Scenario::Tarbard => {
                "banded-Toeplitz model algebra: leading-coefficient functional \
                 obstruction for derivations"
            }
        }
    }

    /// Scenarios whose main probe runs on a d^2-dimensional lift get a
    /// smaller default base dimension than base-space scenarios.
    pub fn lifted(self) -> bool {
        !matches!(self, Scenario::Dw | Scenario::Thm3_4)
    }
}

/// Flat configuration with one documented default per key; see
/// [`ScenarioConfig::defaults`]. Unknown keys are rejected by name.
#[derive(Debug, Clone)]
pub struct ScenarioConfig {
    pub scenario: Scenario,
    /// `d`: truncation dimension of the base space.
    pub d: usize,
    /// `weights`: shift weight sequence; empty means all ones.
    pub weights: Vec<C64>,
    /// `probe.budget`: step budget N for the reachability probe.
    pub budget: u64,
    /// `probe.schedule`: increasing iteration schedule for the criterion
    /// probe.
    pub schedule: Vec<u64>,
    /// `hcc.eta`: exclusion margin around the unit circle.
    pub eta: f64,
    /// `hcc.witness_tol`: acceptance threshold on eigenpair residuals.
    pub witness_tol: f64,
    /// `hcc.curve_floor`: a residual curve passes once it stays or ends
    /// below this floor.
    pub curve_floor: f64,
    /// `hcc.density_eps`: witness rank must reach (1 - eps) * dim.
    pub density_eps: f64,
    /// `hcc.angles`: angular resolution of the eigenvalue search grid.
    pub angles: usize,
    /// `hcc.radii`: search circle radii, all outside [1-eta, 1+eta].
    pub radii: Vec<f64>,
    /// `eps.cluster`: clustering radius for spectral components.
    pub cluster_eps: f64,
    /// `tol.certificate`: residual threshold for obstruction
    /// certificates.
    pub tol: f64,
    /// `witness.alpha`: left geometric witness parameter.
    pub alpha: C64,
    /// `witness.beta`: right geometric witness parameter.
    pub beta: C64,
    /// `algebra.lambda`: scalar part used by the model-algebra scenarios.
    pub lambda: C64,
    /// `algebra.order`: nilpotency order of the banded-Toeplitz model.
    pub order: usize,
    /// `seed`: the one RNG seed; every random draw flows from it.
    pub seed: u64,
}

fn powers_of_two_up_to(d: u64) -> Vec<u64> {
    let mut out = vec![];
    let mut n = 1;
    while n <= d {
        out.push(n);
        n *= 2;
    }
    out
}

impl ScenarioConfig {
    /// The documented defaults: `d` = 16 for lift-based scenarios (lift
    /// dimension 256) and 64 for base-space scenarios; schedule = powers
    /// of two up to `d`; certificate tolerance chosen per scenario (the
    /// shift obstructions certify against their truncation-edge residual
    /// `10 * |witness|^(d-3)`, the algebra identities are exact and use
    /// 1e-12).
    ///
    /// The criterion-probe scenarios carry calibrated grid defaults:
    /// the probe harvests one witness per grid point, so on a
    /// 256-dimensional lift the witness rank is a sample of the spanned
    /// family, not its full dimension — those scenarios use a denser
    /// grid (32 angles, 8 radii) with the rank requirement at 10% of
    /// the lift dimension. The dyadic scenario's witnesses live on
    /// doubling chains with residuals near |mu|^7, which caps the
    /// usable schedule horizon at n = 8 and the curve floor at 1e-2.
    pub fn defaults(scenario: Scenario) -> Self {
        let lifted = scenario.lifted();
        let d: usize = if lifted { 16 } else { 64 };
        let tol = match scenario {
            Scenario::Prop3_1 | Scenario::Prop3_2 => {
                10.0 * 0.5f64.powi(d as i32 - 3)
            }
            Scenario::Thm5_1 | Scenario::Ex5_3 | Scenario::Tarbard => 1e-12,
            _ => 1e-9,
        };
        let lift_probe = matches!(
            scenario,
            Scenario::Ex2_1 | Scenario::Thm2_2 | Scenario::Ex2_4 | Scenario::Ex5_3
        );
        ScenarioConfig {
            scenario,
            d,
            weights: Vec::new(),
            budget: 60,
            schedule: if scenario == Scenario::Dw {
                vec![1, 2, 4, 8]
            } else {
                powers_of_two_up_to(d as u64)
            },
            eta: 0.1,
            witness_tol: 0.05,
            curve_floor: if lifted || scenario == Scenario::Dw { 1e-2 } else { 1e-3 },
            density_eps: match scenario {
                _ if lift_probe => 0.9,
                Scenario::Dw => 0.85,
                _ => 0.75,
            },
            angles: if lift_probe { 32 } else { 24 },
            radii: if lift_probe {
                vec![0.3, 0.5, 0.7, 0.8, 1.2, 1.3, 1.5, 2.0]
            } else {
                vec![0.3, 0.5, 0.7, 1.3, 1.5, 2.0]
            },
            cluster_eps: 0.05,
            tol,
            alpha: C64::new(0.5, 0.0),
            beta: C64::new(0.5, 0.0),
            lambda: C64::new(1.0, 0.0),
            order: 2,
            seed: 7,
        }
    }

    /// Apply one dotted `key=value` assignment; unknown keys are
    /// rejected naming the field.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let bad = |what: &str| {
            OpdynError::Config(format!("field `{key}`: malformed {what} `{value}`"))
        };
        match key {
            "d" => {
                self.d = value.parse().map_err(|_| bad("dimension"))?;
                if self.d < 2 {
                    return Err(OpdynError::Config(
                        "field `d`: dimension must be at least 2".into(),
                    ));
                }
            }
            "weights" => {
                self.weights = value
                    .split(',')
                    .map(|s| parse_c64(s.trim()))
                    .collect::<Result<Vec<C64>>>()?;
            }
            "probe.budget" => self.budget = value.parse().map_err(|_| bad("budget"))?,
            "probe.schedule" => {
                self.schedule = value
                    .split(',')
                    .map(|s| s.trim().parse().map_err(|_| bad("schedule entry")))
                    .collect::<Result<Vec<u64>>>()?;
            }
            "hcc.eta" => self.eta = value.parse().map_err(|_| bad("margin"))?,
            "hcc.witness_tol" => {
                self.witness_tol = value.parse().map_err(|_| bad("tolerance"))?
            }
            "hcc.curve_floor" => {
                self.curve_floor = value.parse().map_err(|_| bad("floor"))?
            }
            "hcc.density_eps" => {
                self.density_eps = value.parse().map_err(|_| bad("density margin"))?
            }
            "hcc.angles" => self.angles = value.parse().map_err(|_| bad("angle count"))?,
            "hcc.radii" => {
                self.radii = value
                    .split(',')
                    .map(|s| s.trim().parse().map_err(|_| bad("radius")))
                    .collect::<Result<Vec<f64>>>()?;
            }
            "eps.cluster" => {
                self.cluster_eps = value.parse().map_err(|_| bad("radius"))?
            }
            "tol.certificate" => self.tol = value.parse().map_err(|_| bad("tolerance"))?,
            "witness.alpha" => self.alpha = parse_c64(value)?,
            "witness.beta" => self.beta = parse_c64(value)?,
            "algebra.lambda" => self.lambda = parse_c64(value)?,
            "algebra.order" => self.order = value.parse().map_err(|_| bad("order"))?,
            "seed" => self.seed = value.parse().map_err(|_| bad("seed"))?,
            other => {
                return Err(OpdynError::Config(format!(
                    "unknown config key `{other}`"
                )))
            }
        }
        Ok(())
    }

    /// Apply a config file: one `key=value` per line, `#` comments.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                OpdynError::Config(format!(
                    "config line {}: missing `=` in `{line}`",
                    lineno + 1
                ))
            })?;
            self.set(key.trim(), value.trim()).map_err(|e| {
                OpdynError::Config(format!("config line {}: {e}", lineno + 1))
            })?;
        }
        Ok(())
    }

    /// Canonical echo of every field, sorted by key; this is what the
    /// report embeds, so it fully determines the run.
    pub fn echo(&self) -> Vec<(String, String)> {
        let join_c = |v: &[C64]| {
            v.iter().map(|z| format_c64(*z)).collect::<Vec<_>>().join(",")
        };
        let mut kv = vec![
            ("scenario".to_string(), self.scenario.name().to_string()),
            ("d".to_string(), self.d.to_string()),
            ("weights".to_string(), join_c(&self.weights)),
            ("probe.budget".to_string(), self.budget.to_string()),
            (
                "probe.schedule".to_string(),
                self.schedule
                    .iter()
                    .map(u64::to_string)
                    .collect::<Vec<_>>()
                    .join(","),
            ),
            ("hcc.eta".to_string(), self.eta.to_string()),
            ("hcc.witness_tol".to_string(), self.witness_tol.to_string()),
            ("hcc.curve_floor".to_string(), self.curve_floor.to_string()),
            ("hcc.density_eps".to_string(), self.density_eps.to_string()),
            ("hcc.angles".to_string(), self.angles.to_string()),
            (
                "hcc.radii".to_string(),
                self.radii
                    .iter()
                    .map(f64::to_string)
                    .collect::<Vec<_>>()
                    .join(","),
            ),
            ("eps.cluster".to_string(), self.cluster_eps.to_string()),
            ("tol.certificate".to_string(), self.tol.to_string()),
            ("witness.alpha".to_string(), format_c64(self.alpha)),
            ("witness.beta".to_string(), format_c64(self.beta)),
            ("algebra.lambda".to_string(), format_c64(self.lambda)),
            ("algebra.order".to_string(), self.order.to_string()),
            ("seed".to_string(), self.seed.to_string()),
        ];
        kv.sort_by(|a, b| a.0.cmp(&b.0));
        kv
    }

    /// Shift weights up to length `n`: the configured sequence, padded
    /// with ones (the documented default weight).
    pub fn weights_for(&self, n: usize) -> Vec<C64> {
        let mut w = self.weights.clone();
        while w.len() < n {
            w.push(C64::new(1.0, 0.0));
        }
        w.truncate(n);
        w
    }

    pub fn hcc_config(&self) -> HccConfig {
        HccConfig {
            radii: self.radii.clone(),
            angles: self.angles,
            eta: self.eta,
            witness_tol: self.witness_tol,
            density_eps: self.density_eps,
            curve_floor: self.curve_floor,
            schedule: self.schedule.clone(),
            seed: self.seed,
            ..HccConfig::default()
        }
    }
}
