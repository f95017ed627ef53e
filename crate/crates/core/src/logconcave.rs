//! The log-concave function model: indicators, exponentials of gauges and
//! the isotropic Gaussian, together with their level sets `K_t(f)` and the
//! epigraph `L = {(x,t) : f(x) >= e^{-t} |f|_inf}`.
//!
//! All variants are normalized so that `|f|_inf = f(0) = 1`; general
//! rescaling adds nothing since every functional downstream is stated in
//! terms of `f / |f|_inf`.

use crate::error::{Error, Result};
use crate::geometry::{Body, Vector};
use crate::numerics::{integrate_exp_weighted, QuadratureSpec};

/// An integrable log-concave function with maximum 1 at the origin.
#[derive(Debug, Clone)]
pub enum LogConcaveFunction {
    /// Characteristic function of a convex body.
    Indicator { body: Body },
    /// `exp(-|x|_K)` for a body with the origin in its interior.
    ExpNorm { body: Body },
    /// `exp(-|x|^2 / 2)`. Not compactly supported and its level sets grow
    /// like `sqrt(t)` rather than linearly, which stresses every level-set
    /// integral downstream.
    Gaussian { dim: usize },
}

impl LogConcaveFunction {
    pub fn indicator(body: Body) -> Self {
        LogConcaveFunction::Indicator { body }
    }

    /// `exp(-|x|_K)`; the gauge is finite everywhere only when the origin
    /// is interior, which is also what pins `f(0) = 1`.
    pub fn exp_norm(body: Body) -> Result<Self> {
        if !body.origin_interior() {
            return Err(Error::InvalidFunction(
                "exp-norm functions need the origin in the interior of the body".into(),
            ));
        }
        Ok(LogConcaveFunction::ExpNorm { body })
    }

    pub fn gaussian(dim: usize) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(Error::Unsupported(format!("gaussian in dimension {dim}")));
        }
        Ok(LogConcaveFunction::Gaussian { dim })
    }

    pub fn dim(&self) -> usize {
        match self {
            LogConcaveFunction::Indicator { body } | LogConcaveFunction::ExpNorm { body } => body.dim(),
            LogConcaveFunction::Gaussian { dim } => *dim,
        }
    }

    /// `|f|_inf`, attained at the origin.
    pub fn sup_norm(&self) -> f64 {
        1.0
    }

    pub fn eval(&self, x: &Vector) -> f64 {
        match self {
            LogConcaveFunction::Indicator { body } => {
                if body.contains(x, 1e-12) {
                    1.0
                } else {
                    0.0
                }
            }
            LogConcaveFunction::ExpNorm { body } => (-body.minkowski_functional(x)).exp(),
            LogConcaveFunction::Gaussian { .. } => (-0.5 * x.norm_sq()).exp(),
        }
    }

    /// Level set `K_t(f) = {x : f(x) >= e^{-t}}`, `t >= 0`.
    ///
    /// Indicator: `K` for every `t`. ExpNorm: `t K`, with `t = 0` the
    /// degenerate set `{0}` (measure zero in every `t`-integral).
    /// Gaussian: the ball of radius `sqrt(2 t)`.
    pub fn level_set(&self, t: f64) -> Result<Body> {
        if !(t >= 0.0) {
            return Err(Error::Domain(format!("level sets need t >= 0, got {t}")));
        }
        match self {
            LogConcaveFunction::Indicator { body } => Ok(body.clone()),
            LogConcaveFunction::ExpNorm { body } => Ok(body.scale(t)),
            LogConcaveFunction::Gaussian { dim } => {
                if t == 0.0 {
                    Ok(Body::degenerate_point(*dim))
                } else {
                    Body::ball(*dim, Vector::zero(*dim), (2.0 * t).sqrt())
                }
            }
        }
    }

    /// `|f|_1 = int_0^inf e^{-t} |K_t(f)| dt` (layer cake; `|f|_inf = 1`).
    pub fn l1_norm(&self, spec: &QuadratureSpec) -> Result<f64> {
        integrate_exp_weighted(
            |t| self.level_set(t).map(|k| k.volume()).unwrap_or(0.0),
            spec,
        )
    }

    /// Smallest `r` with `f(r u) < threshold` for a unit `u`, found by
    /// doubling and bisection. Used to truncate radial integrals.
    pub fn decay_radius(&self, u: &Vector, threshold: f64) -> f64 {
        decay_radius_of(|r| self.eval(&u.scaled(r)), threshold)
    }
}

pub(crate) fn decay_radius_of(f: impl Fn(f64) -> f64, threshold: f64) -> f64 {
    let mut hi = 1.0_f64;
    let mut iter = 0;
    while f(hi) >= threshold && iter < 80 {
        hi *= 2.0;
        iter += 1;
    }
    if iter == 80 {
        return hi;
    }
    let mut lo = 0.0_f64;
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if f(mid) >= threshold {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

/// The epigraph `L = {(x,t) in R^{n+1} : f(x) >= e^{-t}}` carrying the
/// weight `e^{-t} dt dx`. Represented implicitly through `f`.
#[derive(Debug, Clone)]
pub struct Epigraph {
    f: LogConcaveFunction,
}

impl Epigraph {
    pub fn new(f: LogConcaveFunction) -> Self {
        Epigraph { f }
    }

    pub fn function(&self) -> &LogConcaveFunction {
        &self.f
    }

    pub fn dim(&self) -> usize {
        self.f.dim()
    }

    /// `int_L e^{-t} dt dx`, the normalizing constant of the probability
    /// measure `mu`. Equals `|f|_1` by Fubini.
    pub fn weight(&self, spec: &QuadratureSpec) -> Result<f64> {
        self.f.l1_norm(spec)
    }

    /// `(x, t) in L  <=>  x in K_t(f)  <=>  f(x) >= e^{-t}`.
    pub fn contains(&self, x: &Vector, t: f64) -> Result<bool> {
        if !(t >= 0.0) {
            return Err(Error::Domain("epigraph membership needs t >= 0".into()));
        }
        Ok(self.f.eval(x) >= (-t).exp())
    }
}

/// Closed-form `|f|_1` used as the quadrature oracle in tests: `|K|` for
/// indicators, `n! |K|` for exp-norms, `(2 pi)^{n/2}` for the Gaussian.
pub fn l1_closed_form(f: &LogConcaveFunction) -> f64 {
    match f {
        LogConcaveFunction::Indicator { body } => body.volume(),
        LogConcaveFunction::ExpNorm { body } => {
            let n = body.dim();
            let fact = [1.0, 1.0, 2.0, 6.0][n];
            fact * body.volume()
        }
        LogConcaveFunction::Gaussian { dim } => (2.0 * std::f64::consts::PI).powf(*dim as f64 / 2.0),
    }
}

/// Function descriptors shared with the CLI: `indicator:<preset>`,
/// `expnorm:<preset>`, `gaussian:<dim>`.
pub fn parse_function(desc: &str) -> Result<LogConcaveFunction> {
    let (kind, arg) = desc
        .split_once(':')
        .ok_or_else(|| Error::InvalidFunction(format!("malformed function descriptor '{desc}'")))?;
    match kind {
        "indicator" | "expnorm" => {
            let body = crate::geometry::preset(arg)
                .ok_or_else(|| Error::InvalidFunction(format!("unknown body preset '{arg}'")))?;
            if kind == "indicator" {
                Ok(LogConcaveFunction::indicator(body))
            } else {
                LogConcaveFunction::exp_norm(body)
            }
        }
        "gaussian" => {
            let dim: usize = arg
                .parse()
                .map_err(|_| Error::InvalidFunction(format!("bad gaussian dimension '{arg}'")))?;
            LogConcaveFunction::gaussian(dim)
        }
        _ => Err(Error::InvalidFunction(format!("unknown function kind '{kind}'"))),
    }
}
