//! The JSON experiment configuration and its translation into a problem.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use fracterm_core::nonlinearity::{fit_growth_constant, Application, ApplicationParams};
use fracterm_core::solver::{compute_constants, ConstantInputs};
use fracterm_core::{
    MLBoundConstants, NonlinearitySpec, ProblemSpec, Regularity, SolveMode, SpectralBasis, SpectralField, TerminalSetup, TimeGrid,
};

use crate::error::{CliError, Result};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema_version: u32,
    pub problem: ProblemBlock,
    #[serde(default)]
    pub nonlinearity: NonlinearityBlock,
    pub grid: GridBlock,
    #[serde(default)]
    pub solver: SolverBlock,
    #[serde(default)]
    pub analysis: AnalysisBlock,
    /// Output directory; `--out` overrides it.
    #[serde(default = "default_output")]
    pub output: PathBuf,
}

fn default_output() -> PathBuf {
    PathBuf::from("fracterm-out")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemBlock {
    pub alpha: f64,
    pub t_final: f64,
    pub basis: BasisBlock,
    pub f: DataPreset,
    #[serde(default)]
    pub regularity: Regularity,
    /// Guard on |E_{α,1}(-λ_j T^α)|.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps_den: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum BasisBlock {
    /// Dirichlet Laplacian on (0, length).
    Interval {
        #[serde(default = "default_length")]
        length: f64,
        modes: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        collocation: Option<usize>,
    },
    /// Dirichlet Laplacian on (0, lx) × (0, ly).
    Rectangle {
        lx: f64,
        ly: f64,
        modes: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        collocation: Option<(usize, usize)>,
    },
    /// A user spectrum (`j,lambda` CSV) with optional samples.
    File {
        spectrum: PathBuf,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        samples: Option<PathBuf>,
    },
}

fn default_length() -> f64 {
    PI
}

/// Terminal data presets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "preset", rename_all = "snake_case", deny_unknown_fields)]
pub enum DataPreset {
    /// amplitude · φ_j (1-based).
    SingleMode {
        j: usize,
        #[serde(default = "one")]
        amplitude: f64,
    },
    /// f_j = scale · λ_j^{-lambda_exponent} (j + offset)^{-exponent}.
    PowerLaw {
        exponent: f64,
        #[serde(default)]
        offset: f64,
        #[serde(default)]
        lambda_exponent: f64,
        #[serde(default = "one")]
        scale: f64,
    },
    /// Coefficients from a CSV with header `j,value`.
    File { path: PathBuf },
}

fn one() -> f64 {
    1.0
}

/// Source terms. The Lipschitz and Ginzburg-Landau kinds take either an
/// explicit constant or `admissible_fraction`, the fraction of the
/// admissibility threshold the constant should sit at.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum NonlinearityBlock {
    #[default]
    Zero,
    LinearInhomogeneous {
        source: Vec<f64>,
    },
    LipschitzScaled {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        l1: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        admissible_fraction: Option<f64>,
    },
    GinzburgLandau {
        s: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        c_rho: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        admissible_fraction: Option<f64>,
        #[serde(default)]
        b: f64,
        /// Space dimension N of the application theorem, for `validate`.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        dim: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        varrho: Option<f64>,
    },
    Burgers {
        c_rho: f64,
        #[serde(default)]
        b: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        dim: Option<f64>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridBlock {
    pub n: usize,
    #[serde(default = "default_gamma_mesh")]
    pub gamma_mesh: f64,
}

fn default_gamma_mesh() -> f64 {
    2.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeName {
    Picard,
    Path,
    Contraction,
    Forward,
    Roundtrip,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverBlock {
    #[serde(default = "default_mode")]
    pub mode: ModeName,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_max_iter")]
    pub max_iter: usize,
    /// Radius for the ball diagnostic of the contraction mode; R̂ when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    /// The forward march of a round trip runs on the grid refined by this factor.
    #[serde(default = "default_refine")]
    pub forward_refine: usize,
    /// Largest acceptable relative terminal mismatch of a round trip.
    #[serde(default = "default_roundtrip_tol")]
    pub roundtrip_tol: f64,
}

fn default_mode() -> ModeName {
    ModeName::Picard
}
fn default_tol() -> f64 {
    1e-10
}
fn default_max_iter() -> usize {
    200
}
fn default_refine() -> usize {
    2
}
fn default_roundtrip_tol() -> f64 {
    1e-3
}

impl Default for SolverBlock {
    fn default() -> Self {
        SolverBlock {
            mode: default_mode(),
            tol: default_tol(),
            max_iter: default_max_iter(),
            radius: None,
            forward_refine: default_refine(),
            roundtrip_tol: default_roundtrip_tol(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisBlock {
    /// Orders γ of the ℍ^γ norms written to trajectory.csv; ν when empty.
    #[serde(default)]
    pub norms: Vec<f64>,
    #[serde(default = "yes")]
    pub constants: bool,
    #[serde(default = "yes")]
    pub residual: bool,
    /// Calibrate the estimate envelope and verify the estimate suite.
    #[serde(default)]
    pub estimates: bool,
    /// Blow-up and Hölder exponent fits.
    #[serde(default)]
    pub regularity: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stability: Option<StabilityBlock>,
    /// Points of the Mittag-Leffler bound scans.
    #[serde(default = "default_bound_points")]
    pub bound_points: usize,
    /// Random pairs for the growth constant of critical source terms.
    #[serde(default = "default_pairs")]
    pub growth_pairs: usize,
}

fn yes() -> bool {
    true
}
fn default_bound_points() -> usize {
    2000
}
fn default_pairs() -> usize {
    200
}

impl Default for AnalysisBlock {
    fn default() -> Self {
        AnalysisBlock {
            norms: Vec::new(),
            constants: true,
            residual: true,
            estimates: false,
            regularity: false,
            stability: None,
            bound_points: default_bound_points(),
            growth_pairs: default_pairs(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StabilityBlock {
    pub deltas: Vec<f64>,
    #[serde(default = "default_trials")]
    pub trials: usize,
}

fn default_trials() -> usize {
    2
}

fn bad(field: &str, message: impl Into<String>) -> CliError {
    CliError::Config { field: field.to_string(), message: message.into() }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = serde_json::from_str(text).map_err(|e| bad("<json>", e.to_string()))?;
        cfg.check()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io { path: path.to_path_buf(), source: e })?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Field-level checks that do not need the basis.
    pub fn check(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(bad("schema_version", format!("unsupported version {}, expected {SCHEMA_VERSION}", self.schema_version)));
        }
        let p = &self.problem;
        if !(p.alpha > 1.0 && p.alpha <= 2.0) {
            return Err(bad("problem.alpha", format!("must lie in (1, 2], got {}", p.alpha)));
        }
        if !(p.t_final > 0.0 && p.t_final.is_finite()) {
            return Err(bad("problem.t_final", format!("must be positive, got {}", p.t_final)));
        }
        match &p.basis {
            BasisBlock::Interval { modes, .. } | BasisBlock::Rectangle { modes, .. } if *modes == 0 => {
                return Err(bad("problem.basis.modes", "must be at least 1"));
            }
            _ => {}
        }
        if let DataPreset::SingleMode { j: 0, .. } = p.f {
            return Err(bad("problem.f.j", "modes are numbered from 1"));
        }
        if self.grid.n < 8 {
            return Err(bad("grid.n", format!("must be at least 8, got {}", self.grid.n)));
        }
        if !(self.grid.gamma_mesh >= 1.0) {
            return Err(bad("grid.gamma_mesh", format!("must be ≥ 1, got {}", self.grid.gamma_mesh)));
        }
        if !(self.solver.tol > 0.0) {
            return Err(bad("solver.tol", format!("must be positive, got {}", self.solver.tol)));
        }
        if self.solver.max_iter == 0 {
            return Err(bad("solver.max_iter", "must be at least 1"));
        }
        if self.solver.forward_refine == 0 {
            return Err(bad("solver.forward_refine", "must be at least 1"));
        }
        match &self.nonlinearity {
            NonlinearityBlock::LipschitzScaled { l1, admissible_fraction } => {
                exactly_one("nonlinearity", ("l1", *l1), ("admissible_fraction", *admissible_fraction))?;
            }
            NonlinearityBlock::GinzburgLandau { s, c_rho, admissible_fraction, .. } => {
                if !(*s > 0.0) {
                    return Err(bad("nonlinearity.s", format!("must be positive, got {s}")));
                }
                exactly_one("nonlinearity", ("c_rho", *c_rho), ("admissible_fraction", *admissible_fraction))?;
            }
            _ => {}
        }
        if let Some(st) = &self.analysis.stability {
            if st.deltas.is_empty() || st.trials == 0 {
                return Err(bad("analysis.stability", "needs at least one delta and one trial"));
            }
        }
        Ok(())
    }

    pub fn mode(&self) -> SolveMode {
        match self.solver.mode {
            ModeName::Picard => SolveMode::Picard,
            ModeName::Path => SolveMode::Path,
            ModeName::Contraction => SolveMode::Contraction,
            ModeName::Forward => SolveMode::Forward,
            ModeName::Roundtrip => {
                if self.nonlinearity.is_critical() {
                    SolveMode::Contraction
                } else {
                    SolveMode::Picard
                }
            }
        }
    }

    pub fn grid(&self) -> Result<TimeGrid> {
        Ok(TimeGrid::new(self.problem.t_final, self.grid.n, self.grid.gamma_mesh)?)
    }

    pub fn basis(&self) -> Result<Arc<SpectralBasis>> {
        let b = match &self.problem.basis {
            BasisBlock::Interval { length, modes, collocation } => {
                let b = SpectralBasis::dirichlet_1d(*length, *modes)?;
                match collocation {
                    Some(m) => b.with_collocation(*m, true)?,
                    None => b,
                }
            }
            BasisBlock::Rectangle { lx, ly, modes, collocation } => {
                let b = SpectralBasis::dirichlet_2d(*lx, *ly, *modes)?;
                match collocation {
                    Some((mx, my)) => b.with_collocation_2d(*mx, *my, true)?,
                    None => b,
                }
            }
            BasisBlock::File { spectrum, samples } => SpectralBasis::from_spectrum_file(spectrum, samples.as_deref())?,
        };
        Ok(Arc::new(b))
    }

    pub fn setup(&self, basis: Arc<SpectralBasis>) -> Result<TerminalSetup> {
        let p = &self.problem;
        Ok(match p.eps_den {
            Some(eps) => TerminalSetup::with_guard(p.alpha, p.t_final, basis, eps)?,
            None => TerminalSetup::new(p.alpha, p.t_final, basis)?,
        })
    }

    pub fn terminal_data(&self, basis: &Arc<SpectralBasis>) -> Result<SpectralField> {
        let lambda = basis.lambdas();
        let j = basis.len();
        match &self.problem.f {
            DataPreset::SingleMode { j: k, amplitude } => {
                if *k > j {
                    return Err(bad("problem.f.j", format!("mode {k} outside 1..={j}")));
                }
                Ok(SpectralField::single_mode(basis.clone(), *k)?.scaled(*amplitude))
            }
            DataPreset::PowerLaw { exponent, offset, lambda_exponent, scale } => {
                let c = (0..j)
                    .map(|i| scale * lambda[i].powf(-lambda_exponent) * (i as f64 + 1.0 + offset).powf(-exponent))
                    .collect();
                Ok(SpectralField::new(basis.clone(), c)?)
            }
            DataPreset::File { path } => {
                let c = read_coefficients(path, j)?;
                Ok(SpectralField::new(basis.clone(), c)?)
            }
        }
    }

    /// The source term with explicit constants. Fractions of the
    /// admissibility threshold are resolved with `bounds`; critical kinds
    /// also return the fitted growth constant of the ρ ≡ 1 term.
    pub fn source(&self, problem: &ProblemSpec, bounds: Option<&MLBoundConstants>, seed: u64) -> Result<Source> {
        let r = &problem.regularity;
        let basis = problem.setup.basis();
        let with_reg = |g: NonlinearitySpec| g.with_regularity(r.nu, r.sigma, r.zeta);
        Ok(match &self.nonlinearity {
            NonlinearityBlock::Zero => Source::plain(NonlinearitySpec::zero()),
            NonlinearityBlock::LinearInhomogeneous { source } => {
                if source.len() != basis.len() {
                    return Err(bad(
                        "nonlinearity.source",
                        format!("has {} coefficients, basis has {}", source.len(), basis.len()),
                    ));
                }
                Source::plain(NonlinearitySpec::linear_inhomogeneous(source.clone()))
            }
            NonlinearityBlock::LipschitzScaled { l1, admissible_fraction } => {
                let l1 = match (l1, admissible_fraction) {
                    (Some(l), _) => *l,
                    (None, Some(frac)) => {
                        let bounds =
                            bounds.ok_or_else(|| bad("nonlinearity.admissible_fraction", "needs the bound constants"))?;
                        let c = compute_constants(&ConstantInputs::for_problem(problem, bounds))?;
                        frac / c.m1_script
                    }
                    _ => unreachable!("checked"),
                };
                Source::plain(with_reg(NonlinearitySpec::lipschitz_scaled(l1)))
            }
            NonlinearityBlock::GinzburgLandau { s, c_rho, admissible_fraction, b, .. } => {
                let unit = with_reg(NonlinearitySpec::ginzburg_landau(*s, 1.0, *b));
                let k_fit = fit_growth_constant(&unit, basis, self.analysis.growth_pairs, seed)?;
                let t = problem.setup.t_final();
                let a = problem.alpha();
                // K₀ = C_ρ K_fit T^{b+αζ} bounds ρ(t) t^{αζ} on (0, T] when b + αζ ≥ 0
                let t_b = t.powf(b + a * r.zeta);
                let c_rho = match (c_rho, admissible_fraction) {
                    (Some(c), _) => *c,
                    (None, Some(frac)) => {
                        let bounds =
                            bounds.ok_or_else(|| bad("nonlinearity.admissible_fraction", "needs the bound constants"))?;
                        let mut probe = problem.clone();
                        probe.nonlinearity = unit.clone();
                        let mut inp = ConstantInputs::for_problem(&probe, bounds);
                        inp.f_norm_critical = Some(problem.f.norm_hs(r.nu + 1.0 - r.vartheta));
                        let c = compute_constants(&inp)?;
                        let nb = c
                            .n2_script_bar
                            .ok_or_else(|| bad("problem.regularity", "the critical constants are undefined for these indices"))?;
                        let threshold = match c.n_f {
                            Some(nf) => (0.5 / nb).min(nf),
                            None => 0.5 / nb,
                        };
                        frac * threshold / (k_fit * t_b * t.powf(s * a * r.vartheta))
                    }
                    _ => unreachable!("checked"),
                };
                Source {
                    spec: with_reg(NonlinearitySpec::ginzburg_landau(*s, c_rho, *b)),
                    k0: Some(c_rho * k_fit * t_b),
                    k_fit: Some(k_fit),
                }
            }
            NonlinearityBlock::Burgers { c_rho, b, .. } => {
                let unit = with_reg(NonlinearitySpec::burgers(1.0, *b));
                let k_fit = fit_growth_constant(&unit, basis, self.analysis.growth_pairs, seed)?;
                let t_b = problem.setup.t_final().powf(b + problem.alpha() * r.zeta);
                Source {
                    spec: with_reg(NonlinearitySpec::burgers(*c_rho, *b)),
                    k0: Some(c_rho * k_fit * t_b),
                    k_fit: Some(k_fit),
                }
            }
        })
    }

    /// Parameters for the application validators, when the source term is
    /// one of the applications and a dimension was given.
    pub fn application(&self) -> Option<(Application, ApplicationParams)> {
        let r = &self.problem.regularity;
        let base = |dim: f64, s: f64, b: f64, varrho: Option<f64>| ApplicationParams {
            dim,
            alpha: self.problem.alpha,
            s,
            nu: r.nu,
            sigma: r.sigma,
            vartheta: r.vartheta,
            vartheta_prime: r.vartheta_prime,
            b,
            varrho,
        };
        match &self.nonlinearity {
            NonlinearityBlock::GinzburgLandau { s, b, dim: Some(d), varrho, .. } => {
                Some((Application::GinzburgLandau, base(*d, *s, *b, *varrho)))
            }
            NonlinearityBlock::Burgers { b, dim: Some(d), .. } => Some((Application::Burgers, base(*d, 1.0, *b, None))),
            _ => None,
        }
    }

    /// Whether a fraction of an admissibility threshold has to be resolved.
    pub fn needs_bounds_for_source(&self) -> bool {
        matches!(
            self.nonlinearity,
            NonlinearityBlock::LipschitzScaled { admissible_fraction: Some(_), .. }
                | NonlinearityBlock::GinzburgLandau { admissible_fraction: Some(_), .. }
        )
    }
}

impl NonlinearityBlock {
    pub fn is_critical(&self) -> bool {
        matches!(self, NonlinearityBlock::GinzburgLandau { .. } | NonlinearityBlock::Burgers { .. })
    }
}

/// A resolved source term.
#[derive(Debug, Clone)]
pub struct Source {
    pub spec: NonlinearitySpec,
    /// K₀ of the critical hypothesis for this term.
    pub k0: Option<f64>,
    /// Fitted growth constant of the ρ ≡ 1 term.
    pub k_fit: Option<f64>,
}

impl Source {
    fn plain(spec: NonlinearitySpec) -> Self {
        Source { spec, k0: None, k_fit: None }
    }
}

fn exactly_one(block: &str, a: (&str, Option<f64>), b: (&str, Option<f64>)) -> Result<()> {
    match (a.1, b.1) {
        (Some(_), None) | (None, Some(_)) => Ok(()),
        (None, None) => Err(bad(block, format!("one of `{}` or `{}` is required", a.0, b.0))),
        (Some(_), Some(_)) => Err(bad(block, format!("`{}` and `{}` are mutually exclusive", a.0, b.0))),
    }
}

fn read_coefficients(path: &Path, modes: usize) -> Result<Vec<f64>> {
    let field = "problem.f.path";
    let mut rdr = csv::Reader::from_path(path).map_err(|e| bad(field, format!("{}: {e}", path.display())))?;
    let headers = rdr.headers().map_err(|e| bad(field, e.to_string()))?.clone();
    if headers.iter().map(str::trim).collect::<Vec<_>>() != ["j", "value"] {
        return Err(bad(field, format!("{}: expected header `j,value`", path.display())));
    }
    let mut c = vec![0.0; modes];
    for rec in rdr.records() {
        let rec = rec.map_err(|e| bad(field, e.to_string()))?;
        let j: usize = rec[0].trim().parse().map_err(|e| bad(field, format!("bad index {:?}: {e}", &rec[0])))?;
        let v: f64 = rec[1].trim().parse().map_err(|e| bad(field, format!("bad value {:?}: {e}", &rec[1])))?;
        if j == 0 || j > modes {
            return Err(bad(field, format!("index {j} outside 1..={modes}")));
        }
        c[j - 1] = v;
    }
    Ok(c)
}
