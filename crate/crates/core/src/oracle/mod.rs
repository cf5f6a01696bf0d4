//! Finite-difference eigenvalue oracle.
//!
//! Solves `-u'' + W(r) u = E B(r) u` with Dirichlet ends on a log-mapped grid
//! `r = r_min + c (exp(s) - 1)`, `s` uniform. The variational three-point
//! stencil gives a symmetric tridiagonal `A` and a positive diagonal `M`;
//! `M^(-1/2) A M^(-1/2)` is bisected with Sturm counts below the dissociation
//! threshold. Grid doubling provides a Richardson value and an error estimate
//! for every level.

mod compare;
pub mod tridiag;

pub use compare::{compare, ComparisonReport, LevelComparison, FLAG_FACTOR};

use serde::Serialize;
use thiserror::Error;

use crate::pekeris::{gamma, pekeris_centrifugal, pekeris_inverse_r};
use crate::spectrum::{BetaParameters, Diatomic};
use tridiag::SymTridiagonal;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("invalid oracle configuration: {0}")]
    Config(String),
    #[error("mass pole inside the domain near r = {r} Å")]
    MassPole { r: f64 },
    #[error("non-finite coefficient at r = {r} Å")]
    NonFinite { r: f64 },
}

/// Treatment of `l(l+1)/r^2` or `1/r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TermMode {
    Exact,
    #[default]
    Pekeris,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MassMode {
    #[default]
    Constant,
    Pdm,
}

/// Which differential equation is discretized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Equation {
    /// `-u'' + V_eff u = (2 m(r) / hbar^2) E u` with the mass-derivative terms.
    #[default]
    Radial,
    /// The Pekeris-reduced equation solved by the closed forms,
    /// `-u'' + [a^2 (beta1 z^2 - beta2 z) + gamma a0 + V3/h0] / w^2 u = E / (h0 w^2) u`
    /// with `w = 1 - delta z`.
    Reduced,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleConfig {
    /// Inner boundary (Å); default `max(1e-3, r_e - 12/a)`, pushed outside a mass pole.
    pub r_min: Option<f64>,
    /// Outer boundary (Å); default `r_e + 25/a`.
    pub r_max: Option<f64>,
    /// Number of grid intervals on the base grid.
    pub grid_points: usize,
    pub centrifugal_mode: TermMode,
    pub inverse_r_mode: TermMode,
    pub mass_mode: MassMode,
    pub equation: Equation,
    /// Also solve on the doubled grid.
    pub richardson: bool,
    pub auto_widen: bool,
    /// Grid stretching length `c` (Å); default `0.1 / a`.
    pub grid_scale: Option<f64>,
    /// Solve at most this many levels.
    pub max_levels: Option<usize>,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            r_min: None,
            r_max: None,
            grid_points: 4000,
            centrifugal_mode: TermMode::Pekeris,
            inverse_r_mode: TermMode::Pekeris,
            mass_mode: MassMode::Constant,
            equation: Equation::Radial,
            richardson: true,
            auto_widen: true,
            grid_scale: None,
            max_levels: None,
        }
    }
}

/// Coefficients of `-u'' + W u = E B u`.
pub trait EigenProblem {
    /// `W(r)` in Å⁻².
    fn w(&self, r: f64) -> f64;
    /// `B(r) > 0` in eV⁻¹ Å⁻².
    fn b(&self, r: f64) -> f64;
    /// Energy above which states are unbound.
    fn threshold(&self) -> f64;
    /// Default domain.
    fn default_domain(&self) -> (f64, f64);
    /// Natural length used for grid stretching and widening.
    fn length_scale(&self) -> f64;
    /// Point the domain is widened around.
    fn center(&self) -> f64;
    /// Domains must stay strictly above this radius.
    fn hard_lower_bound(&self) -> f64 {
        0.0
    }
}

/// Diatomic problem in one of the oracle's modes.
#[derive(Debug, Clone, Copy)]
pub struct DiatomicProblem<'a> {
    sys: &'a Diatomic<f64>,
    l: u32,
    delta: f64,
    beta: BetaParameters<f64>,
    a0: f64,
    cfg: OracleConfig,
}

impl<'a> DiatomicProblem<'a> {
    pub fn new(sys: &'a Diatomic<f64>, l: u32, cfg: OracleConfig) -> Self {
        let delta = match cfg.mass_mode {
            MassMode::Constant => 0.0,
            MassMode::Pdm => sys.delta(),
        };
        let beta = sys.with_delta(delta).map(|s| s.beta(l)).unwrap_or_else(|_| sys.beta(l));
        let a0 = sys.pekeris().a0;
        Self { sys, l, delta, beta, a0, cfg }
    }

    fn z(&self, r: f64) -> f64 {
        self.sys.potential().z(r)
    }

    fn pole(&self) -> Option<f64> {
        (self.delta > 0.0).then(|| self.sys.potential().re() + self.delta.ln() / self.sys.potential().a())
    }

    /// `m(r) / m0` with its first two derivatives divided by `m0`.
    fn mass_ratio(&self, r: f64) -> (f64, f64, f64) {
        if self.delta == 0.0 {
            return (1.0, 0.0, 0.0);
        }
        let a = self.sys.potential().a();
        let dz = self.delta * self.z(r);
        let w = 1.0 - dz;
        (
            1.0 / (w * w),
            -2.0 * dz * a / (w * w * w),
            2.0 * dz * a * a / (w * w * w) + 6.0 * dz * dz * a * a / (w * w * w * w),
        )
    }

    fn uses_pekeris_centrifugal(&self) -> bool {
        self.cfg.equation == Equation::Reduced || self.cfg.centrifugal_mode == TermMode::Pekeris
    }
}

impl EigenProblem for DiatomicProblem<'_> {
    fn w(&self, r: f64) -> f64 {
        let p = self.sys.potential();
        let h0 = self.sys.h0();
        match self.cfg.equation {
            Equation::Reduced => {
                let beta = self.beta;
                let z = self.z(r);
                let w = 1.0 - self.delta * z;
                let a = p.a();
                (a * a * (beta.beta1 * z * z - beta.beta2 * z) + gamma(p, self.l) * self.a0 + p.v3() / h0)
                    / (w * w)
            }
            Equation::Radial => {
                let (m, m1, m2) = self.mass_ratio(r);
                let ratio = m1 / m;
                let inv_r = match self.cfg.inverse_r_mode {
                    TermMode::Exact => 1.0 / r,
                    TermMode::Pekeris => pekeris_inverse_r(p, r),
                };
                let cent = match self.cfg.centrifugal_mode {
                    TermMode::Exact => {
                        let ll = (self.l * (self.l + 1)) as f64;
                        ll / (r * r)
                    }
                    TermMode::Pekeris => pekeris_centrifugal(p, self.l, r),
                };
                -m2 / (2.0 * m) + 0.75 * ratio * ratio - ratio * inv_r + cent + m * p.morse_potential(r) / h0
            }
        }
    }

    fn b(&self, r: f64) -> f64 {
        let h0 = self.sys.h0();
        match self.cfg.equation {
            Equation::Reduced => {
                let w = 1.0 - self.delta * self.z(r);
                1.0 / (h0 * w * w)
            }
            Equation::Radial => self.mass_ratio(r).0 / h0,
        }
    }

    fn threshold(&self) -> f64 {
        let p = self.sys.potential();
        let mut t = p.v3();
        if self.uses_pekeris_centrifugal() {
            t += self.sys.h0() * gamma(p, self.l) * self.a0;
        }
        t
    }

    fn default_domain(&self) -> (f64, f64) {
        let p = self.sys.potential();
        let a = p.a();
        let mut lo = (p.re() - 12.0 / a).max(1e-3);
        if let Some(pole) = self.pole() {
            lo = lo.max(pole + 1e-6 / a);
        }
        (lo, p.re() + 25.0 / a)
    }

    fn length_scale(&self) -> f64 {
        1.0 / self.sys.potential().a()
    }

    fn center(&self) -> f64 {
        self.sys.potential().re()
    }

    fn hard_lower_bound(&self) -> f64 {
        self.pole().unwrap_or(0.0).max(0.0)
    }
}

/// Log-mapped grid `r_i = r_min + c (exp(i ds) - 1)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Grid {
    pub r_min: f64,
    pub r_max: f64,
    pub intervals: usize,
    pub scale: f64,
    ds: f64,
}

impl Grid {
    pub fn new(r_min: f64, r_max: f64, intervals: usize, scale: f64) -> Self {
        let s_max = ((r_max - r_min) / scale).ln_1p();
        Self {
            r_min,
            r_max,
            intervals,
            scale,
            ds: s_max / intervals as f64,
        }
    }

    pub fn r(&self, s: f64) -> f64 {
        self.r_min + self.scale * s.exp_m1()
    }

    fn jacobian(&self, s: f64) -> f64 {
        self.scale * s.exp()
    }

    /// Interior nodes.
    pub fn nodes(&self) -> Vec<f64> {
        (1..self.intervals).map(|i| self.r(i as f64 * self.ds)).collect()
    }

    /// Quadrature weights `dr/ds ds` at the interior nodes.
    pub fn weights(&self) -> Vec<f64> {
        (1..self.intervals).map(|i| self.jacobian(i as f64 * self.ds) * self.ds).collect()
    }
}

/// Discretized generalized problem on one grid.
struct Discrete {
    matrix: SymTridiagonal,
    mass: Vec<f64>,
}

fn discretize<P: EigenProblem>(problem: &P, grid: &Grid) -> Result<Discrete, OracleError> {
    let n = grid.intervals - 1;
    let ds = grid.ds;
    let p_half: Vec<f64> = (0..grid.intervals)
        .map(|i| 1.0 / grid.jacobian((i as f64 + 0.5) * ds))
        .collect();
    let mut diag = Vec::with_capacity(n);
    let mut mass = Vec::with_capacity(n);
    for i in 1..=n {
        let s = i as f64 * ds;
        let r = grid.r(s);
        let fp = grid.jacobian(s);
        let w = problem.w(r);
        let b = problem.b(r);
        if !(w.is_finite() && b.is_finite()) {
            return Err(OracleError::NonFinite { r });
        }
        if b <= 0.0 {
            return Err(OracleError::MassPole { r });
        }
        diag.push((p_half[i - 1] + p_half[i]) / (ds * ds) + w * fp);
        mass.push(b * fp);
    }
    let d: Vec<f64> = diag.iter().zip(&mass).map(|(a, m)| a / m).collect();
    let e: Vec<f64> = (0..n - 1)
        .map(|i| -p_half[i + 1] / (ds * ds) / (mass[i] * mass[i + 1]).sqrt())
        .collect();
    Ok(Discrete {
        matrix: SymTridiagonal::new(d, e),
        mass,
    })
}

struct RawSolution {
    energies: Vec<f64>,
    vectors: Vec<Vec<f64>>,
}

fn solve_grid<P: EigenProblem>(problem: &P, grid: &Grid, max_levels: Option<usize>, vectors: bool) -> Result<RawSolution, OracleError> {
    let disc = discretize(problem, grid)?;
    let mut count = disc.matrix.count_below(problem.threshold());
    if let Some(cap) = max_levels {
        count = count.min(cap);
    }
    let energies: Vec<f64> = (0..count).map(|k| disc.matrix.eigenvalue(k)).collect();
    let weights = grid.weights();
    let vectors = if vectors {
        energies
            .iter()
            .map(|&e| {
                let y = disc.matrix.eigenvector(e);
                let mut u: Vec<f64> = y.iter().zip(&disc.mass).map(|(y, m)| y / m.sqrt()).collect();
                let norm = u.iter().zip(&weights).map(|(u, w)| u * u * w).sum::<f64>().sqrt();
                // positive first lobe
                let peak = u.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
                let first = u.iter().find(|v| v.abs() > 1e-6 * peak).copied().unwrap_or(1.0);
                let sign = first.signum() / norm;
                u.iter_mut().for_each(|v| *v *= sign);
                u
            })
            .collect()
    } else {
        Vec::new()
    };
    Ok(RawSolution { energies, vectors })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleLevel {
    pub n: usize,
    /// Eigenvalue on the finest grid (eV).
    pub energy: f64,
    /// Richardson value from the base and doubled grids.
    pub extrapolated: Option<f64>,
    /// `|E_2N - E_N| / 3`.
    pub error_estimate: Option<f64>,
}

impl OracleLevel {
    /// Best available estimate.
    pub fn best(&self) -> f64 {
        self.extrapolated.unwrap_or(self.energy)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleSpectrum {
    pub config: OracleConfig,
    pub threshold: f64,
    pub grid: Grid,
    pub widenings: usize,
    pub levels: Vec<OracleLevel>,
    /// Interior nodes of the finest grid.
    #[serde(skip)]
    pub r: Vec<f64>,
    /// Quadrature weights matching `r`.
    #[serde(skip)]
    pub weights: Vec<f64>,
    /// Eigenvectors `u` normalized to `sum u^2 w = 1`.
    #[serde(skip)]
    pub eigenvectors: Vec<Vec<f64>>,
}

impl OracleSpectrum {
    pub fn eigenvalues(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.best()).collect()
    }

    /// Sign changes of eigenvector `k`, ignoring values below `1e-8` of its peak.
    pub fn node_count(&self, k: usize) -> usize {
        let u = &self.eigenvectors[k];
        let peak = u.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let mut last = 0.0_f64;
        let mut nodes = 0;
        for &v in u {
            if v.abs() <= 1e-8 * peak {
                continue;
            }
            if last != 0.0 && v.signum() != last.signum() {
                nodes += 1;
            }
            last = v;
        }
        nodes
    }

    /// `sum u_k f w` for a function sampled at the grid nodes.
    pub fn overlap_with<F: Fn(f64) -> f64>(&self, k: usize, f: F) -> f64 {
        self.r
            .iter()
            .zip(&self.weights)
            .zip(&self.eigenvectors[k])
            .map(|((&r, &w), &u)| u * f(r) * w)
            .sum()
    }
}

fn validate(cfg: &OracleConfig, lo: f64, hi: f64, hard: f64) -> Result<(), OracleError> {
    if cfg.grid_points < 500 {
        return Err(OracleError::Config(format!("grid_points must be at least 500, got {}", cfg.grid_points)));
    }
    if !(lo > 0.0 && lo.is_finite()) {
        return Err(OracleError::Config(format!("r_min must be positive, got {lo}")));
    }
    if !(hi > lo && hi.is_finite()) {
        return Err(OracleError::Config(format!("r_max must exceed r_min, got [{lo}, {hi}]")));
    }
    if lo <= hard {
        return Err(OracleError::MassPole { r: hard });
    }
    if let Some(c) = cfg.grid_scale {
        if !(c > 0.0 && c.is_finite()) {
            return Err(OracleError::Config(format!("grid_scale must be positive, got {c}")));
        }
    }
    Ok(())
}

/// Solves a generic problem with the configured grid handling.
pub fn solve_problem<P: EigenProblem>(problem: &P, cfg: &OracleConfig) -> Result<OracleSpectrum, OracleError> {
    let (dlo, dhi) = problem.default_domain();
    let lo = cfg.r_min.unwrap_or(dlo);
    let mut hi = cfg.r_max.unwrap_or(dhi);
    validate(cfg, lo, hi, problem.hard_lower_bound())?;
    let scale = cfg.grid_scale.unwrap_or(0.1 * problem.length_scale());
    let threshold = problem.threshold();
    let center = problem.center();
    let n = cfg.grid_points;
    let cap = 10_000.0 * problem.length_scale();

    let mut widenings = 0;
    let (grid, base) = loop {
        let grid = Grid::new(lo, hi, n, scale);
        let sol = solve_grid(problem, &grid, cfg.max_levels, cfg.auto_widen)?;
        if !cfg.auto_widen || widenings >= 6 || hi - center >= cap {
            break (grid, sol);
        }
        let Some((e_top, u_top)) = sol.energies.last().zip(sol.vectors.last()) else {
            break (grid, sol);
        };
        let peak = u_top.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let tail_start = u_top.len() * 9 / 10;
        let tail = u_top[tail_start..].iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        if tail <= 1e-8 * peak {
            break (grid, sol);
        }
        // decay length of the top level sets the new reach
        let kappa = ((threshold - e_top) * problem.b(hi)).max(0.0).sqrt();
        let reach = if kappa > 0.0 { 20.0 / kappa } else { f64::INFINITY };
        hi = (center + 2.0 * (hi - center)).max(center + reach).min(center + cap);
        widenings += 1;
    };

    let (grid, fine, coarse) = if cfg.richardson {
        let fine_grid = Grid::new(lo, hi, 2 * n, scale);
        let fine = solve_grid(problem, &fine_grid, cfg.max_levels, true)?;
        (fine_grid, fine, Some(base))
    } else if base.vectors.is_empty() && !base.energies.is_empty() {
        (grid.clone(), solve_grid(problem, &grid, cfg.max_levels, true)?, None)
    } else {
        (grid, base, None)
    };

    let levels = fine
        .energies
        .iter()
        .enumerate()
        .map(|(k, &e)| {
            let c = coarse.as_ref().and_then(|c| c.energies.get(k).copied());
            OracleLevel {
                n: k,
                energy: e,
                extrapolated: c.map(|c| (4.0 * e - c) / 3.0),
                error_estimate: c.map(|c| (e - c).abs() / 3.0),
            }
        })
        .collect();
    Ok(OracleSpectrum {
        config: *cfg,
        threshold,
        r: grid.nodes(),
        weights: grid.weights(),
        grid,
        widenings,
        levels,
        eigenvectors: fine.vectors,
    })
}

/// Bound levels of `sys` at angular momentum `l`.
pub fn solve(sys: &Diatomic<f64>, l: u32, cfg: &OracleConfig) -> Result<OracleSpectrum, OracleError> {
    solve_problem(&DiatomicProblem::new(sys, l, *cfg), cfg)
}

/// Observed order `log2((E_N - E_2N) / (E_2N - E_4N))` of level `k` on a fixed domain.
pub fn convergence_order<P: EigenProblem>(problem: &P, cfg: &OracleConfig, k: usize) -> Result<Option<f64>, OracleError> {
    let base = solve_problem(
        problem,
        &OracleConfig {
            richardson: false,
            max_levels: Some(k + 1),
            ..*cfg
        },
    )?;
    let grid = &base.grid;
    let energies: Vec<Option<f64>> = [1, 2, 4]
        .iter()
        .map(|&f| {
            let g = Grid::new(grid.r_min, grid.r_max, f * cfg.grid_points, grid.scale);
            solve_grid(problem, &g, Some(k + 1), false).map(|s| s.energies.get(k).copied())
        })
        .collect::<Result<_, _>>()?;
    Ok(match energies[..] {
        [Some(a), Some(b), Some(c)] if (b - c) != 0.0 => Some(((a - b) / (b - c)).abs().log2()),
        _ => None,
    })
}

/// `-u'' + (r - center)^2 u = E u`: levels `2k + 1`.
#[derive(Debug, Clone, Copy)]
pub struct HarmonicWell {
    pub center: f64,
    pub half_width: f64,
}

impl EigenProblem for HarmonicWell {
    fn w(&self, r: f64) -> f64 {
        (r - self.center) * (r - self.center)
    }
    fn b(&self, _r: f64) -> f64 {
        1.0
    }
    fn threshold(&self) -> f64 {
        self.half_width * self.half_width
    }
    fn default_domain(&self) -> (f64, f64) {
        (self.center - self.half_width, self.center + self.half_width)
    }
    fn length_scale(&self) -> f64 {
        self.half_width
    }
    fn center(&self) -> f64 {
        self.center
    }
}
