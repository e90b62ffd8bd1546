//! Experiment configuration: flat `section.key = value` text (valid TOML),
//! SI units with the unit in the key name.
//!
//! ```text
//! pump.n = 1
//! pump.m = 0
//! pump.wavelength_m = 4.05e-7
//! pump.waist_m = 0.001
//! crystal.length_m = 0.005
//! crystal.phase_matching = "gaussian_approx"
//! grid.samples = 257
//! slits.separation_waists = 1.0
//! slits.width_waists = 0.2
//! detector2.positions_waists = [0.5]
//! output.dir = "out"
//! ```

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::biphoton::{CrystalSpec, PhaseMatching, Plane, PumpSpec, DEFAULT_BIPHOTON_SAMPLES};
use crate::error::{Error, Result};
use crate::modes::ModeIndex;
use crate::vortex::{ScanRange, SlitSpec};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PumpConfig {
    pub n: usize,
    pub m: usize,
    pub wavelength_m: f64,
    pub waist_m: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CrystalConfig {
    pub length_m: f64,
    #[serde(default = "default_phase_matching")]
    pub phase_matching: PhaseMatching,
}

fn default_phase_matching() -> PhaseMatching {
    PhaseMatching::GaussianApprox
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub samples: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            samples: DEFAULT_BIPHOTON_SAMPLES,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SlitsConfig {
    pub separation_waists: f64,
    pub width_waists: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Detector2Config {
    /// Each entry `x` produces the pair of scans at `+x` and `-x`.
    #[serde(default)]
    pub positions_waists: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanConfig {
    pub min_inv_waists: f64,
    pub max_inv_waists: f64,
    pub samples: usize,
}

impl Default for ScanConfig {
    fn default() -> Self {
        let s = ScanRange::default();
        ScanConfig {
            min_inv_waists: s.min,
            max_inv_waists: s.max,
            samples: s.samples,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: PathBuf,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig {
            dir: PathBuf::from("nlvortex-out"),
        }
    }
}

/// A complete, deterministic experiment description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub pump: PumpConfig,
    pub crystal: CrystalConfig,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub slits: Option<SlitsConfig>,
    #[serde(default)]
    pub detector2: Detector2Config,
    #[serde(default)]
    pub scan: ScanConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

fn field_error(field: &str, reason: impl Into<String>) -> Error {
    Error::Config {
        field: field.to_string(),
        reason: reason.into(),
    }
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| {
            let field = e
                .message()
                .split('`')
                .nth(1)
                .map(str::to_string)
                .unwrap_or_else(|| "<document>".to_string());
            field_error(&field, e.to_string().trim().replace('\n', " "))
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    /// Minimal config for a pump mode with the library defaults.
    pub fn for_pump(n: usize, m: usize, output_dir: impl Into<PathBuf>) -> Self {
        ExperimentConfig {
            pump: PumpConfig {
                n,
                m,
                wavelength_m: 405e-9,
                waist_m: 1e-3,
            },
            crystal: CrystalConfig {
                length_m: 5e-3,
                phase_matching: PhaseMatching::GaussianApprox,
            },
            grid: GridConfig::default(),
            slits: None,
            detector2: Detector2Config::default(),
            scan: ScanConfig::default(),
            output: OutputConfig { dir: output_dir.into() },
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.pump_spec()?;
        self.crystal_spec()?;
        if self.grid.samples < 16 {
            return Err(field_error("grid.samples", format!("need at least 16, got {}", self.grid.samples)));
        }
        self.slit_spec(Plane::X)?;
        self.scan_range()?;
        for (i, x) in self.detector2.positions_waists.iter().enumerate() {
            if !x.is_finite() || *x == 0.0 {
                return Err(field_error(
                    "detector2.positions_waists",
                    format!("entry {i} must be finite and non-zero, got {x}"),
                ));
            }
        }
        Ok(())
    }

    pub fn pump_spec(&self) -> Result<PumpSpec> {
        let p = &self.pump;
        if !(p.wavelength_m > 0.0 && p.wavelength_m.is_finite()) {
            return Err(field_error("pump.wavelength_m", format!("must be > 0, got {}", p.wavelength_m)));
        }
        if !(p.waist_m > 0.0 && p.waist_m.is_finite()) {
            return Err(field_error("pump.waist_m", format!("must be > 0, got {}", p.waist_m)));
        }
        PumpSpec::new(ModeIndex::new(p.n, p.m), p.wavelength_m, p.waist_m)
    }

    pub fn crystal_spec(&self) -> Result<CrystalSpec> {
        let c = &self.crystal;
        if !(c.length_m > 0.0 && c.length_m.is_finite()) {
            return Err(field_error("crystal.length_m", format!("must be > 0, got {}", c.length_m)));
        }
        CrystalSpec::new(c.length_m, c.phase_matching)
    }

    pub fn slit_spec(&self, plane: Plane) -> Result<SlitSpec> {
        match &self.slits {
            None => Ok(SlitSpec {
                orientation: plane,
                ..SlitSpec::default()
            }),
            Some(s) => SlitSpec::new(s.separation_waists, s.width_waists, plane)
                .map_err(|_| field_error("slits", format!(
                    "need separation_waists > width_waists > 0, got {} and {}",
                    s.separation_waists, s.width_waists
                ))),
        }
    }

    /// Detector-2 offsets; defaults to half the slit separation.
    pub fn detector2_offsets(&self) -> Result<Vec<f64>> {
        if self.detector2.positions_waists.is_empty() {
            Ok(vec![self.slit_spec(Plane::X)?.default_detector2_offset()])
        } else {
            Ok(self.detector2.positions_waists.clone())
        }
    }

    pub fn scan_range(&self) -> Result<ScanRange> {
        let s = &self.scan;
        let range = ScanRange {
            min: s.min_inv_waists,
            max: s.max_inv_waists,
            samples: s.samples,
        };
        range
            .positions()
            .map_err(|_| field_error("scan", "need max_inv_waists > min_inv_waists and samples >= 8"))?;
        Ok(range)
    }

    /// Flat dotted-key form; parses back to an equal value.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let p = &self.pump;
        let _ = writeln!(s, "pump.n = {}", p.n);
        let _ = writeln!(s, "pump.m = {}", p.m);
        let _ = writeln!(s, "pump.wavelength_m = {:?}", p.wavelength_m);
        let _ = writeln!(s, "pump.waist_m = {:?}", p.waist_m);
        let _ = writeln!(s, "crystal.length_m = {:?}", self.crystal.length_m);
        let pm = match self.crystal.phase_matching {
            PhaseMatching::ExactSinc => "exact_sinc",
            PhaseMatching::GaussianApprox => "gaussian_approx",
        };
        let _ = writeln!(s, "crystal.phase_matching = \"{pm}\"");
        let _ = writeln!(s, "grid.samples = {}", self.grid.samples);
        if let Some(sl) = &self.slits {
            let _ = writeln!(s, "slits.separation_waists = {:?}", sl.separation_waists);
            let _ = writeln!(s, "slits.width_waists = {:?}", sl.width_waists);
        }
        let pos: Vec<String> = self.detector2.positions_waists.iter().map(|x| format!("{x:?}")).collect();
        let _ = writeln!(s, "detector2.positions_waists = [{}]", pos.join(", "));
        let _ = writeln!(s, "scan.min_inv_waists = {:?}", self.scan.min_inv_waists);
        let _ = writeln!(s, "scan.max_inv_waists = {:?}", self.scan.max_inv_waists);
        let _ = writeln!(s, "scan.samples = {}", self.scan.samples);
        let dir = self.output.dir.to_string_lossy().replace('\\', "\\\\").replace('"', "\\\"");
        let _ = writeln!(s, "output.dir = \"{dir}\"");
        s
    }
}
