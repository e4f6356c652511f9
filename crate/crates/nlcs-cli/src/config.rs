//! Scenario configuration: resolved parameter bundle plus the sectioned
//! key=value config-file parser. Precedence: built-in defaults, then the
//! config file, then command-line flags.

use nlcs::fockspace::C64;
use nlcs::params::{derive_dimensionless, PhysicalParams};
use nlcs::{Error, Result};
use std::collections::BTreeMap;
use std::path::PathBuf;

/// Initial single-mode state specification.
#[derive(Debug, Clone, PartialEq)]
pub enum StateSpec {
    Vacuum,
    Fock(usize),
    Coherent(C64),
    Nlcs(C64),
    /// Explicit coefficient list (normalized by the consumer).
    Coeffs(Vec<C64>),
    /// Deformed cat: amplitude, quadratic-phase xi, linear phase phi.
    Cat { zeta: C64, xi: f64, phi: f64 },
}

impl StateSpec {
    pub fn parse(s: &str) -> Result<Self> {
        let (head, rest) = match s.split_once(':') {
            Some((h, r)) => (h, r),
            None => (s, ""),
        };
        match head {
            "vacuum" => Ok(StateSpec::Vacuum),
            "fock" => Ok(StateSpec::Fock(rest.parse().map_err(|_| bad_state(s))?)),
            "coherent" => Ok(StateSpec::Coherent(parse_complex(rest)?)),
            "nlcs" => Ok(StateSpec::Nlcs(parse_complex(rest)?)),
            "cat" => {
                let parts: Vec<&str> = rest.split(';').collect();
                if parts.is_empty() || parts.len() > 3 {
                    return Err(bad_state(s));
                }
                let zeta = parse_complex(parts[0])?;
                let xi = parts.get(1).map_or(Ok(0.25), |p| parse_f64("xi", p))?;
                let phi = parts.get(2).map_or(Ok(0.0), |p| parse_f64("phi", p))?;
                Ok(StateSpec::Cat { zeta, xi, phi })
            }
            "coeffs" => {
                let v: Result<Vec<C64>> = rest.split(';').map(parse_complex).collect();
                let v = v?;
                if v.is_empty() {
                    return Err(bad_state(s));
                }
                Ok(StateSpec::Coeffs(v))
            }
            _ => Err(bad_state(s)),
        }
    }

    /// Render back to the spec string for config echo.
    pub fn echo(&self) -> String {
        match self {
            StateSpec::Vacuum => "vacuum".into(),
            StateSpec::Fock(l) => format!("fock:{l}"),
            StateSpec::Coherent(a) => format!("coherent:{},{}", a.re, a.im),
            StateSpec::Nlcs(z) => format!("nlcs:{},{}", z.re, z.im),
            StateSpec::Coeffs(v) => format!(
                "coeffs:{}",
                v.iter().map(|c| format!("{},{}", c.re, c.im)).collect::<Vec<_>>().join(";")
            ),
            StateSpec::Cat { zeta, xi, phi } => {
                format!("cat:{},{};{};{}", zeta.re, zeta.im, xi, phi)
            }
        }
    }
}

fn bad_state(s: &str) -> Error {
    Error::Usage(format!(
        "cannot parse state spec '{s}'; expected vacuum | fock:L | coherent:RE[,IM] | \
         nlcs:RE[,IM] | cat:RE[,IM];XI;PHI | coeffs:RE,IM;RE,IM;..."
    ))
}

/// "1.5" or "1.5,-0.2" -> complex number.
pub fn parse_complex(s: &str) -> Result<C64> {
    let s = s.trim();
    let (re, im) = match s.split_once(',') {
        Some((a, b)) => (a, b),
        None => (s, "0"),
    };
    Ok(C64::new(parse_f64("re", re)?, parse_f64("im", im)?))
}

fn parse_f64(field: &str, s: &str) -> Result<f64> {
    s.trim().parse().map_err(|_| Error::Usage(format!("field {field}: not a number: '{s}'")))
}

fn parse_usize(field: &str, s: &str) -> Result<usize> {
    s.trim().parse().map_err(|_| Error::Usage(format!("field {field}: not an integer: '{s}'")))
}

/// Observable choice for the damped scenario.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum DampedObservable {
    Mandel,
    Squeezing,
    Qfunc,
}

/// Fully resolved scenario parameters.
#[derive(Debug, Clone)]
pub struct ScenarioConfig {
    pub scenario: String,
    // dimensionless physics
    pub rc: f64,
    pub eta: f64,
    pub theta: f64,
    pub beta_mag: f64,
    // time grid
    pub tau_min: f64,
    pub tau_max: f64,
    pub tau_points: usize,
    /// Single-time scenarios (qfunc, catstate) evaluate here.
    pub tau: f64,
    pub kappa: f64,
    /// Membrane dimension; 0 = auto-size where the scenario supports it.
    pub dim_m: usize,
    pub dim_f: usize,
    pub membrane: StateSpec,
    pub field: StateSpec,
    pub out_dir: PathBuf,
    // series controls
    pub series_tol: f64,
    pub series_mmax: usize,
    // scenario-specific knobs
    pub alpha: C64,
    pub pmin: f64,
    pub zeta: C64,
    pub xi: f64,
    pub phi: f64,
    pub extent: f64,
    pub points: usize,
    pub peak_threshold: f64,
    pub steps: usize,
    pub observable: DampedObservable,
    /// Pre-compensate the Kerr phase e^{iΘn²g(k)} accumulated by τ in the
    /// initial membrane state (used by the Fig. 10 presets).
    pub kerr_dress: bool,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            scenario: String::new(),
            rc: 0.95,
            eta: 0.19,
            theta: 1.0,
            beta_mag: 0.01,
            tau_min: 0.0,
            tau_max: 2.0 * std::f64::consts::PI,
            tau_points: 50,
            tau: 2.9,
            kappa: 0.0,
            dim_m: 30,
            dim_f: 5,
            membrane: StateSpec::Vacuum,
            field: StateSpec::Coherent(C64::new(1.0, 0.0)),
            out_dir: PathBuf::new(),
            series_tol: 1e-13,
            series_mmax: 40001,
            alpha: C64::new(2.0, 0.0),
            pmin: 1e-3,
            zeta: C64::new(1.8, 0.0),
            xi: 0.25,
            phi: 0.0,
            extent: 6.0,
            points: 121,
            peak_threshold: 0.1,
            steps: 800,
            observable: DampedObservable::Mandel,
            kerr_dress: false,
        }
    }
}

impl ScenarioConfig {
    /// Strictly increasing τ grid (invariant: min < max for points > 1).
    pub fn tau_grid(&self) -> Result<Vec<f64>> {
        if self.tau_points == 0 {
            return Err(Error::Usage("field tau_points: must be >= 1".into()));
        }
        if self.tau_points == 1 {
            return Ok(vec![self.tau_max]);
        }
        if !(self.tau_min < self.tau_max) {
            return Err(Error::Usage(format!(
                "field tau_min/tau_max: grid must be strictly increasing, got [{}, {}]",
                self.tau_min, self.tau_max
            )));
        }
        let h = (self.tau_max - self.tau_min) / (self.tau_points - 1) as f64;
        Ok((0..self.tau_points).map(|i| self.tau_min + h * i as f64).collect())
    }

    pub fn validate(&self) -> Result<()> {
        if self.rc <= 0.0 {
            return Err(Error::Usage(
                "field rc: r_c = 0 yields f ≡ 0, degenerate coupling; choose r_c in (0, 1)".into(),
            ));
        }
        if !(self.rc < 1.0) {
            return Err(Error::Usage(format!("field rc: must lie in (0, 1), got {}", self.rc)));
        }
        if !(self.eta > 0.0) || !(self.theta > 0.0) {
            return Err(Error::Usage(format!(
                "field eta/theta: must be > 0, got {}, {}",
                self.eta, self.theta
            )));
        }
        if self.beta_mag < 0.0 || self.kappa < 0.0 {
            return Err(Error::Usage("field beta/kappa: must be >= 0".into()));
        }
        if self.dim_f == 0 {
            return Err(Error::Usage("field dim_f: must be >= 1".into()));
        }
        if self.points < 3 {
            return Err(Error::Usage("field points: Q grid needs >= 3 points per axis".into()));
        }
        self.tau_grid().map(|_| ())
    }

    /// Key=value echo lines for the CSV metadata header.
    pub fn echo(&self) -> Vec<(String, String)> {
        let mut kv = vec![
            ("scenario".into(), self.scenario.clone()),
            ("rc".into(), format!("{}", self.rc)),
            ("eta".into(), format!("{}", self.eta)),
            ("theta".into(), format!("{}", self.theta)),
            ("beta".into(), format!("{}", self.beta_mag)),
            ("kappa".into(), format!("{}", self.kappa)),
            ("tau_min".into(), format!("{}", self.tau_min)),
            ("tau_max".into(), format!("{}", self.tau_max)),
            ("tau_points".into(), format!("{}", self.tau_points)),
            ("tau".into(), format!("{}", self.tau)),
            ("dim_m".into(), format!("{}", self.dim_m)),
            ("dim_f".into(), format!("{}", self.dim_f)),
            ("membrane".into(), self.membrane.echo()),
            ("field".into(), self.field.echo()),
            ("series_tol".into(), format!("{}", self.series_tol)),
            ("series_mmax".into(), format!("{}", self.series_mmax)),
        ];
        match self.scenario.as_str() {
            "qfunc" => kv.extend([
                ("alpha".into(), format!("{},{}", self.alpha.re, self.alpha.im)),
                ("pmin".into(), format!("{}", self.pmin)),
                ("extent".into(), format!("{}", self.extent)),
                ("points".into(), format!("{}", self.points)),
                ("peak_threshold".into(), format!("{}", self.peak_threshold)),
            ]),
            "catstate" => kv.extend([
                ("zeta".into(), format!("{},{}", self.zeta.re, self.zeta.im)),
                ("xi".into(), format!("{}", self.xi)),
                ("phi".into(), format!("{}", self.phi)),
                ("extent".into(), format!("{}", self.extent)),
                ("points".into(), format!("{}", self.points)),
                ("peak_threshold".into(), format!("{}", self.peak_threshold)),
            ]),
            "damped" => kv.extend([
                ("observable".into(), format!("{:?}", self.observable).to_lowercase()),
                ("steps".into(), format!("{}", self.steps)),
                ("kerr_dress".into(), format!("{}", self.kerr_dress)),
                ("extent".into(), format!("{}", self.extent)),
                ("points".into(), format!("{}", self.points)),
            ]),
            _ => {}
        }
        kv
    }
}

/// One parsed config file: section -> key -> value, order-preserving enough
/// for deterministic error messages.
pub struct ConfigFile {
    sections: BTreeMap<String, BTreeMap<String, String>>,
}

impl ConfigFile {
    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let mut sections: BTreeMap<String, BTreeMap<String, String>> = BTreeMap::new();
        let mut current = String::from("run");
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                let name = name.trim().to_lowercase();
                if !["physical", "dimensionless", "run"].contains(&name.as_str()) {
                    return Err(Error::Usage(format!(
                        "{origin}:{}: unknown section [{name}]; expected [physical], [dimensionless], or [run]",
                        lineno + 1
                    )));
                }
                current = name;
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                Error::Usage(format!("{origin}:{}: expected key = value, got '{line}'", lineno + 1))
            })?;
            sections
                .entry(current.clone())
                .or_default()
                .insert(k.trim().to_lowercase(), v.trim().to_string());
        }
        if sections.contains_key("physical") && sections.contains_key("dimensionless") {
            return Err(Error::Usage(format!(
                "{origin}: give either [physical] or [dimensionless], not both"
            )));
        }
        Ok(ConfigFile { sections })
    }

    /// Fold the file into `cfg`. [physical] is converted through the η/θ/|β|
    /// derivation; [dimensionless] and [run] set fields directly.
    pub fn apply(&self, cfg: &mut ScenarioConfig) -> Result<()> {
        if let Some(phys) = self.sections.get("physical") {
            let get = |k: &str| -> Result<f64> {
                let v = phys.get(k).ok_or_else(|| {
                    Error::Usage(format!("[physical] section missing required key {k}"))
                })?;
                parse_f64(k, v)
            };
            let p = PhysicalParams::new(
                get("cavity_length")?,
                get("membrane_mass")?,
                get("optical_wavelength")?,
                get("mechanical_freq")?,
                get("reflectivity")?,
            )?;
            for k in phys.keys() {
                if ![
                    "cavity_length",
                    "membrane_mass",
                    "optical_wavelength",
                    "mechanical_freq",
                    "reflectivity",
                ]
                .contains(&k.as_str())
                {
                    return Err(Error::Usage(format!("[physical] section: unknown key {k}")));
                }
            }
            let d = derive_dimensionless(&p)?;
            cfg.rc = d.reflectivity;
            cfg.eta = d.eta;
            cfg.theta = d.theta;
            cfg.beta_mag = d.beta_mag;
        }
        if let Some(dimless) = self.sections.get("dimensionless") {
            for (k, v) in dimless {
                match k.as_str() {
                    "rc" | "reflectivity" => cfg.rc = parse_f64(k, v)?,
                    "eta" => cfg.eta = parse_f64(k, v)?,
                    "theta" => cfg.theta = parse_f64(k, v)?,
                    "beta" | "beta_mag" => cfg.beta_mag = parse_f64(k, v)?,
                    _ => {
                        return Err(Error::Usage(format!("[dimensionless] section: unknown key {k}")))
                    }
                }
            }
        }
        if let Some(run) = self.sections.get("run") {
            for (k, v) in run {
                match k.as_str() {
                    "tau_min" => cfg.tau_min = parse_f64(k, v)?,
                    "tau_max" => cfg.tau_max = parse_f64(k, v)?,
                    "tau_points" => cfg.tau_points = parse_usize(k, v)?,
                    "tau" => cfg.tau = parse_f64(k, v)?,
                    "kappa" => cfg.kappa = parse_f64(k, v)?,
                    "dim_m" => cfg.dim_m = parse_usize(k, v)?,
                    "dim_f" => cfg.dim_f = parse_usize(k, v)?,
                    "membrane" => cfg.membrane = StateSpec::parse(v)?,
                    "field" => cfg.field = StateSpec::parse(v)?,
                    "out_dir" => cfg.out_dir = PathBuf::from(v),
                    "series_tol" => cfg.series_tol = parse_f64(k, v)?,
                    "series_mmax" => cfg.series_mmax = parse_usize(k, v)?,
                    "alpha" => cfg.alpha = parse_complex(v)?,
                    "pmin" => cfg.pmin = parse_f64(k, v)?,
                    "zeta" => cfg.zeta = parse_complex(v)?,
                    "xi" => cfg.xi = parse_f64(k, v)?,
                    "phi" => cfg.phi = parse_f64(k, v)?,
                    "extent" => cfg.extent = parse_f64(k, v)?,
                    "points" => cfg.points = parse_usize(k, v)?,
                    "peak_threshold" => cfg.peak_threshold = parse_f64(k, v)?,
                    "steps" => cfg.steps = parse_usize(k, v)?,
                    _ => return Err(Error::Usage(format!("[run] section: unknown key {k}"))),
                }
            }
        }
        Ok(())
    }
}
