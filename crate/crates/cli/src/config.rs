use std::fmt;

use tetrablock::tetrablock::geometry::{MembershipMode, TetrablockPoint, DEFAULT_MEMBERSHIP_TOL};
use tetrablock::{Scalar, DEFAULT_WINDOW_DEPTH};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    VerifyPal,
    VerifyAdjoint,
    VerifyToeplitzForm,
    XiCheck,
    XiSearch,
    Membership,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::VerifyPal,
        Suite::VerifyAdjoint,
        Suite::VerifyToeplitzForm,
        Suite::XiCheck,
        Suite::XiSearch,
        Suite::Membership,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::VerifyPal => "verify-pal",
            Suite::VerifyAdjoint => "verify-adjoint",
            Suite::VerifyToeplitzForm => "verify-toeplitz-form",
            Suite::XiCheck => "xi-check",
            Suite::XiSearch => "xi-search",
            Suite::Membership => "membership",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Json,
    Text,
}

impl OutputFormat {
    pub fn name(&self) -> &'static str {
        match self {
            OutputFormat::Json => "json",
            OutputFormat::Text => "text",
        }
    }
}

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_NORM_DEPTH: usize = 256;
pub const DEFAULT_GRID: usize = 1024;

/// Everything a suite run depends on. Two runs with equal configs produce
/// byte-identical JSON reports.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub suite: Suite,
    pub alpha: Scalar,
    /// Only read by the membership suite, which requires it.
    pub point: Option<TetrablockPoint>,
    pub mode: MembershipMode,
    pub window_depth: usize,
    pub norm_depth_max: usize,
    pub tol: f64,
    pub grid_size: usize,
    pub seed: u64,
    pub format: OutputFormat,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

impl RunConfig {
    /// Defaults for `suite`. The membership oracle is an optimizer, so its
    /// default tolerance is looser than that of the exact identity checks.
    pub fn new(suite: Suite) -> Self {
        RunConfig {
            suite,
            alpha: Scalar::new(0.0, 0.0),
            point: None,
            mode: MembershipMode::Closure,
            window_depth: DEFAULT_WINDOW_DEPTH,
            norm_depth_max: DEFAULT_NORM_DEPTH,
            tol: if suite == Suite::Membership { DEFAULT_MEMBERSHIP_TOL } else { DEFAULT_TOL },
            grid_size: DEFAULT_GRID,
            seed: 0,
            format: OutputFormat::Json,
        }
    }

    pub fn with_alpha(suite: Suite, alpha: Scalar) -> Self {
        RunConfig { alpha, ..RunConfig::new(suite) }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let err = |m: String| Err(ConfigError(m));
        if self.window_depth < 2 {
            return err(format!("depth must be at least 2, got {}", self.window_depth));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return err(format!("tolerance must be positive and finite, got {}", self.tol));
        }
        if self.norm_depth_max == 0 {
            return err("norm depth must be positive".into());
        }
        if self.grid_size == 0 {
            return err("grid size must be positive".into());
        }
        if !(self.alpha.re.is_finite() && self.alpha.im.is_finite()) {
            return err("alpha must be finite".into());
        }
        if self.suite == Suite::Membership && self.point.is_none() {
            return err("membership needs --point \"re,im;re,im;re,im\"".into());
        }
        Ok(())
    }
}
