//! Star bodies derived from log-concave functions: the covariogram
//! functional `g_f`, Ball's bodies `K~_p(g)`, the polar projection bodies
//! `Pi*(K)` and `Pi*(f)`, and the chord-power integral connecting them.

use crate::error::{Error, Result};
use crate::geometry::{Body, Direction, Vector};
use crate::logconcave::{decay_radius_of, LogConcaveFunction};
use crate::numerics::{
    fmt_sig, gamma_one_plus, integrate_exp_weighted, integrate_interval, DirectionGrid,
    QuadratureSpec,
};
use rayon::prelude::*;

/// Inputs accepted by the Ball-body integrals: any nonnegative integrable
/// log-concave field with `g(0) > 0` that we can evaluate along rays.
pub trait GFunction: Sync {
    fn dim(&self) -> usize;
    /// Field value; NaN propagates out of quadrature as a divergence.
    fn value(&self, x: &Vector) -> f64;
    /// `g(0)`, the normalizer of every Ball-body integral.
    fn at_origin(&self) -> f64;
    /// Radius beyond which `g(r u)` stays below `threshold`.
    fn ray_decay_radius(&self, u: &Direction, threshold: f64) -> f64;
}

impl GFunction for LogConcaveFunction {
    fn dim(&self) -> usize {
        LogConcaveFunction::dim(self)
    }

    fn value(&self, x: &Vector) -> f64 {
        self.eval(x)
    }

    fn at_origin(&self) -> f64 {
        1.0
    }

    fn ray_decay_radius(&self, u: &Direction, threshold: f64) -> f64 {
        self.decay_radius(u.vector(), threshold)
    }
}

/// How a covariogram functional evaluates itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CovariogramMethod {
    /// `g_f(x) = int_0^inf e^{-t} |K_t(f) cap (x + K_t(f))| dt`.
    LevelSet,
    /// `g_f(x) = int min{f(y), f(y-x)} dy` over a covering box.
    MinIntegral,
}

/// The covariogram functional of a log-concave function, with `g_f(0)`
/// computed once and cached (it normalizes every Ball-body integral).
#[derive(Debug, Clone)]
pub struct CovariogramFn {
    f: LogConcaveFunction,
    method: CovariogramMethod,
    spec: QuadratureSpec,
    g0: f64,
}

impl CovariogramFn {
    pub fn new(f: LogConcaveFunction, method: CovariogramMethod, spec: QuadratureSpec) -> Result<Self> {
        let mut cf = CovariogramFn { f, method, spec, g0: 0.0 };
        cf.g0 = cf.eval(&Vector::zero(cf.f.dim()))?;
        if !(cf.g0 > 0.0) {
            return Err(Error::InvalidFunction("covariogram has g(0) <= 0".into()));
        }
        Ok(cf)
    }

    pub fn function(&self) -> &LogConcaveFunction {
        &self.f
    }

    pub fn method(&self) -> CovariogramMethod {
        self.method
    }

    pub fn g0(&self) -> f64 {
        self.g0
    }

    pub fn eval(&self, x: &Vector) -> Result<f64> {
        covariogram_fn(&self.f, x, self.method, &self.spec)
    }

    fn eval_or_nan(&self, x: &Vector) -> f64 {
        match self.eval(x) {
            Ok(v) => v,
            Err(Error::QuadratureFailure { estimate, .. }) => estimate,
            Err(_) => f64::NAN,
        }
    }
}

impl GFunction for CovariogramFn {
    fn dim(&self) -> usize {
        self.f.dim()
    }

    fn value(&self, x: &Vector) -> f64 {
        self.eval_or_nan(x)
    }

    fn at_origin(&self) -> f64 {
        self.g0
    }

    fn ray_decay_radius(&self, u: &Direction, threshold: f64) -> f64 {
        decay_radius_of(|r| self.eval_or_nan(&u.vector().scaled(r)), threshold)
    }
}

/// Covariogram functional value at `x`.
///
/// The level-set route integrates the body covariogram of `K_t(f)` against
/// `e^{-t}`; indicators collapse to the body covariogram exactly. The
/// min-integral route is the direct `n`-dimensional quadrature of
/// `min{f(y), f(y - x)}` and serves as the independent cross-check.
pub fn covariogram_fn(
    f: &LogConcaveFunction,
    x: &Vector,
    method: CovariogramMethod,
    spec: &QuadratureSpec,
) -> Result<f64> {
    match method {
        CovariogramMethod::LevelSet => {
            if let LogConcaveFunction::Indicator { body } = f {
                // K_t = K for all t and int_0^inf e^{-t} dt = 1
                return Ok(body.covariogram_body(x));
            }
            integrate_exp_weighted(
                |t| match f.level_set(t) {
                    Ok(k) => k.covariogram_body(x),
                    Err(_) => f64::NAN,
                },
                spec,
            )
        }
        CovariogramMethod::MinIntegral => {
            let dim = f.dim();
            let cutoff = spec.exp_truncation.min(40.0);
            let k_big = f.level_set(cutoff)?;
            let bb = k_big.bounding_box();
            let bb = bb.union(&bb.translated(x));
            let g = |y: &Vector| f.eval(y).min(f.eval(&(*y - *x)));
            box_integral(dim, &bb, &g, spec)
        }
    }
}

/// Iterated adaptive quadrature of `g` over an axis-aligned box.
fn box_integral(
    dim: usize,
    bb: &crate::geometry::Aabb,
    g: &dyn Fn(&Vector) -> f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    // tolerate inner-integral failures by propagating NaN outward
    fn val(r: Result<f64>) -> f64 {
        match r {
            Ok(v) => v,
            Err(Error::QuadratureFailure { estimate, .. }) => estimate,
            Err(_) => f64::NAN,
        }
    }
    match dim {
        1 => integrate_interval(|x| g(&Vector::new1(x)), bb.lo[0], bb.hi[0], spec),
        2 => integrate_interval(
            |x0| {
                val(integrate_interval(
                    |x1| g(&Vector::new2(x0, x1)),
                    bb.lo[1],
                    bb.hi[1],
                    spec,
                ))
            },
            bb.lo[0],
            bb.hi[0],
            spec,
        ),
        _ => integrate_interval(
            |x0| {
                val(integrate_interval(
                    |x1| {
                        val(integrate_interval(
                            |x2| g(&Vector::new3(x0, x1, x2)),
                            bb.lo[2],
                            bb.hi[2],
                            spec,
                        ))
                    },
                    bb.lo[1],
                    bb.hi[1],
                    spec,
                ))
            },
            bb.lo[0],
            bb.hi[0],
            spec,
        ),
    }
}

// ---------------------------------------------------------------------------
// Star bodies
// ---------------------------------------------------------------------------

/// A star body about the origin, known through its radial function sampled
/// on a direction grid.
#[derive(Debug, Clone)]
pub struct StarBody {
    grid: DirectionGrid,
    radii: Vec<f64>,
}

impl StarBody {
    pub fn new(grid: DirectionGrid, radii: Vec<f64>) -> Result<Self> {
        if radii.len() != grid.len() {
            return Err(Error::Domain("radii must match the grid size".into()));
        }
        if !radii.iter().all(|r| r.is_finite() && *r > 0.0) {
            return Err(Error::InvalidBody("star body radii must be positive and finite".into()));
        }
        Ok(StarBody { grid, radii })
    }

    pub fn dim(&self) -> usize {
        self.grid.dim()
    }

    pub fn grid(&self) -> &DirectionGrid {
        &self.grid
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    /// `(1/n) int rho^n d sigma` on the grid.
    pub fn volume(&self) -> f64 {
        let n = self.dim() as f64;
        let mut acc = 0.0;
        for ((_, w), rho) in self.grid.iter().zip(self.radii.iter()) {
            acc += w * rho.powf(n);
        }
        acc / n
    }

    /// Dilate by `c > 0`.
    pub fn scaled(&self, c: f64) -> StarBody {
        StarBody {
            grid: self.grid.clone(),
            radii: self.radii.iter().map(|r| r * c).collect(),
        }
    }

    /// CSV emission `theta_or_index,u1,u2[,u3],rho` with 12 significant
    /// digits.
    pub fn write_radial_csv(&self, out: &mut dyn std::io::Write) -> std::io::Result<()> {
        let dim = self.dim();
        if dim == 3 {
            writeln!(out, "theta_or_index,u1,u2,u3,rho")?;
        } else {
            writeln!(out, "theta_or_index,u1,u2,rho")?;
        }
        for (i, ((u, _), rho)) in self.grid.iter().zip(self.radii.iter()).enumerate() {
            let label = if dim == 2 {
                fmt_sig(u[1].atan2(u[0]), 12)
            } else {
                format!("{i}")
            };
            let mut cols = vec![label];
            for j in 0..dim.max(2) {
                cols.push(fmt_sig(if j < dim { u[j] } else { 0.0 }, 12));
            }
            cols.push(fmt_sig(*rho, 12));
            writeln!(out, "{}", cols.join(","))?;
        }
        Ok(())
    }
}

/// Radial function of Ball's body: `rho_{K~_p(g)}(u)^p = (1/g(0)) int_0^inf
/// p r^{p-1} g(r u) dr`, `p > 0`.
pub fn ball_body_radial(g: &dyn GFunction, p: f64, u: &Direction, spec: &QuadratureSpec) -> Result<f64> {
    if !(p > 0.0) {
        return Err(Error::Domain(format!("Ball bodies need p > 0, got {p}")));
    }
    let g0 = g.at_origin();
    if !(g0 > 0.0) {
        return Err(Error::Domain("Ball bodies need g(0) > 0".into()));
    }
    let r_max = g.ray_decay_radius(u, 1e-16 * g0);
    let moment = radial_moment(g, p, u, r_max, spec)?;
    let val = p * moment / g0;
    if !(val >= 0.0) || !val.is_finite() {
        return Err(Error::Divergent(val));
    }
    Ok(val.powf(1.0 / p))
}

/// `int_0^{r_max} r^{p-1} g(r u) dr`; the `r^{p-1}` singularity for
/// `p < 1` is handled by the open-endpoint scheme.
fn radial_moment(
    g: &dyn GFunction,
    p: f64,
    u: &Direction,
    r_max: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    if r_max <= 0.0 {
        return Ok(0.0);
    }
    let integrand = |r: f64| {
        if r == 0.0 && p < 1.0 {
            f64::INFINITY
        } else {
            r.powf(p - 1.0) * g.value(&u.vector().scaled(r))
        }
    };
    integrate_interval(integrand, 0.0, r_max, spec)
}

/// Ball's body `K~_p(g)` sampled on a grid. Per-direction radial
/// integrals are independent and evaluated in parallel; the result does
/// not depend on evaluation order.
pub fn ball_body(g: &dyn GFunction, p: f64, grid: &DirectionGrid, spec: &QuadratureSpec) -> Result<StarBody> {
    if grid.dim() != g.dim() {
        return Err(Error::Domain("grid dimension must match the function".into()));
    }
    let radii: Result<Vec<f64>> = grid
        .directions()
        .par_iter()
        .map(|v| ball_body_radial(g, p, &Direction::new(*v)?, spec))
        .collect();
    StarBody::new(grid.clone(), radii?)
}

/// Polar projection body of a convex body: `rho(u) = 1 / (|u| |P_{u_perp} K|)`.
pub fn polar_projection_body(k: &Body, grid: &DirectionGrid) -> Result<StarBody> {
    if k.dim() < 2 {
        return Err(Error::Unsupported("polar projection bodies need dimension >= 2".into()));
    }
    if grid.dim() != k.dim() {
        return Err(Error::Domain("grid dimension must match the body".into()));
    }
    let radii: Result<Vec<f64>> = grid
        .directions()
        .iter()
        .map(|v| {
            let shadow = k.project_volume(&Direction::new(*v)?);
            if shadow <= 1e-12 {
                return Err(Error::InvalidBody("degenerate projection".into()));
            }
            Ok(1.0 / shadow)
        })
        .collect();
    StarBody::new(grid.clone(), radii?)
}

/// Polar projection body of a log-concave function:
/// `|u|_{Pi*(f)} = 2 int_0^inf |P_{u_perp} K_t(f)| e^{-t} dt` and
/// `rho(u) = 1 / |u|_{Pi*(f)}`.
pub fn polar_projection_fn(
    f: &LogConcaveFunction,
    grid: &DirectionGrid,
    spec: &QuadratureSpec,
) -> Result<StarBody> {
    if f.dim() < 2 {
        return Err(Error::Unsupported("polar projection bodies need dimension >= 2".into()));
    }
    if grid.dim() != f.dim() {
        return Err(Error::Domain("grid dimension must match the function".into()));
    }
    let radii: Result<Vec<f64>> = grid
        .directions()
        .par_iter()
        .map(|v| {
            let u = Direction::new(*v)?;
            let norm = polar_projection_fn_norm(f, &u, spec)?;
            if norm <= 1e-14 {
                return Err(Error::InvalidBody("degenerate functional projection".into()));
            }
            Ok(1.0 / norm)
        })
        .collect();
    StarBody::new(grid.clone(), radii?)
}

/// `|u|_{Pi*(f)}` for a unit direction.
pub fn polar_projection_fn_norm(
    f: &LogConcaveFunction,
    u: &Direction,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let inner = integrate_exp_weighted(
        |t| match f.level_set(t) {
            Ok(k) => {
                if k.is_degenerate() {
                    0.0
                } else {
                    k.project_volume(u)
                }
            }
            Err(_) => f64::NAN,
        },
        spec,
    )?;
    Ok(2.0 * inner)
}

/// The chord-power integral of the lemma connecting Ball bodies of `g_f`
/// with one-dimensional sections:
///
/// `(1/((p+1) |f|_1)) int_0^inf e^{-t} int_{P_{u_perp} K_t(f)}
///  |K_t(f) cap (y + <u>)|^{p+1} dy dt`, defined for `p > -1`.
///
/// Dimension 1 uses the counting-measure convention for the degenerate
/// projection (the inner integral is `|K_t|^{p+1}`); dimension 3 a 64x64
/// tensor midpoint rule over the shadow's bounding box (membership
/// clipping is exact since shadows of convex bodies are convex).
pub fn chord_power_integral(
    f: &LogConcaveFunction,
    u: &Direction,
    p: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    if !(p > -1.0) {
        return Err(Error::Domain(format!("chord-power integral needs p > -1, got {p}")));
    }
    let l1 = f.l1_norm(spec)?;
    let q = p + 1.0;
    let dim = f.dim();
    let inner = |t: f64| -> f64 {
        let k = match f.level_set(t) {
            Ok(k) => k,
            Err(_) => return f64::NAN,
        };
        if k.is_degenerate() {
            return 0.0;
        }
        match dim {
            1 => k.volume().powf(q),
            2 => {
                let w = u.vector().perp();
                let (s0, s1) = k.extent(&w);
                if s1 - s0 < 1e-14 {
                    return 0.0;
                }
                let line = |s: f64| k.chord_length(&w.scaled(s), u).powf(q);
                match integrate_interval(line, s0, s1, spec) {
                    Ok(v) => v,
                    Err(Error::QuadratureFailure { estimate, .. }) => estimate,
                    Err(_) => f64::NAN,
                }
            }
            _ => {
                // orthonormal basis of u_perp
                let n = u.vector();
                let e = {
                    let trial = if n[0].abs() < 0.9 {
                        Vector::new3(1.0, 0.0, 0.0)
                    } else {
                        Vector::new3(0.0, 1.0, 0.0)
                    };
                    n.cross(&trial).normalized().expect("basis")
                };
                let fv = n.cross(&e);
                let (a0, a1) = k.extent(&e);
                let (b0, b1) = k.extent(&fv);
                if a1 - a0 < 1e-14 || b1 - b0 < 1e-14 {
                    return 0.0;
                }
                const M: usize = 64;
                let da = (a1 - a0) / M as f64;
                let db = (b1 - b0) / M as f64;
                let mut acc = 0.0;
                for i in 0..M {
                    let s = a0 + (i as f64 + 0.5) * da;
                    for j in 0..M {
                        let r = b0 + (j as f64 + 0.5) * db;
                        let y = e.scaled(s) + fv.scaled(r);
                        let c = k.chord_length(&y, u);
                        if c > 0.0 {
                            acc += c.powf(q);
                        }
                    }
                }
                acc * da * db
            }
        }
    };
    let outer = integrate_exp_weighted(inner, spec)?;
    Ok(outer / (q * l1))
}

/// One row of the `p -> -1` limit check.
#[derive(Debug, Clone)]
pub struct Remark3Point {
    pub p: f64,
    pub lhs: f64,
    pub target: f64,
    pub gap: f64,
}

/// As `p -> -1+`, `chord_power_integral(f, u, p) / Gamma(1+p)` approaches
/// `|u|_{Pi*(f)} / (2 |f|_1)`. Returns `(p, lhs, target, gap)` rows for a
/// sequence of `p` in `(-1, 0)` decreasing toward -1.
pub fn remark3_limit_check(
    f: &LogConcaveFunction,
    u: &Direction,
    p_sequence: &[f64],
    spec: &QuadratureSpec,
) -> Result<Vec<Remark3Point>> {
    if p_sequence.iter().any(|p| !(*p > -1.0 && *p < 0.0)) {
        return Err(Error::Domain("p sequence must lie in (-1, 0)".into()));
    }
    if p_sequence.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::Domain("p sequence must decrease toward -1".into()));
    }
    let l1 = f.l1_norm(spec)?;
    let target = polar_projection_fn_norm(f, u, spec)? / (2.0 * l1);
    p_sequence
        .iter()
        .map(|&p| {
            let lhs = chord_power_integral(f, u, p, spec)? / gamma_one_plus(p)?;
            Ok(Remark3Point { p, lhs, target, gap: (lhs - target).abs() })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::preset;
    use crate::numerics::direction_grid;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    fn expnorm(name: &str) -> LogConcaveFunction {
        LogConcaveFunction::exp_norm(preset(name).unwrap()).unwrap()
    }

    #[test]
    fn covariogram_interval_examples() {
        let s = spec();
        let f = LogConcaveFunction::indicator(preset("interval01").unwrap());
        let v = covariogram_fn(&f, &Vector::new1(0.5), CovariogramMethod::LevelSet, &s).unwrap();
        assert_abs_diff_eq!(v, 0.5, epsilon = 1e-10);

        let g = expnorm("interval");
        let v0 = covariogram_fn(&g, &Vector::new1(0.0), CovariogramMethod::LevelSet, &s).unwrap();
        assert_relative_eq!(v0, 2.0, max_relative = 1e-7);
        // closed form: g_f(x) = 2 e^{-|x|/2} for f = e^{-|x|_{[-1,1]}}
        let v1 = covariogram_fn(&g, &Vector::new1(1.0), CovariogramMethod::LevelSet, &s).unwrap();
        assert_relative_eq!(v1, 2.0 * (-0.5_f64).exp(), max_relative = 1e-6);
    }

    #[test]
    fn covariogram_at_zero_is_l1() {
        let s = spec();
        for f in [
            LogConcaveFunction::indicator(preset("square").unwrap()),
            expnorm("square"),
            expnorm("simplex2"),
            LogConcaveFunction::gaussian(2).unwrap(),
        ] {
            let v = covariogram_fn(&f, &Vector::zero(2), CovariogramMethod::LevelSet, &s).unwrap();
            assert_relative_eq!(v, f.l1_norm(&s).unwrap(), max_relative = 1e-6);
        }
    }

    #[test]
    fn covariogram_methods_agree() {
        let s = QuadratureSpec::coarse();
        for f in [expnorm("square"), LogConcaveFunction::gaussian(2).unwrap()] {
            for x in [Vector::new2(0.7, 0.3), Vector::new2(-1.2, 0.4)] {
                let a = covariogram_fn(&f, &x, CovariogramMethod::LevelSet, &s).unwrap();
                let b = covariogram_fn(&f, &x, CovariogramMethod::MinIntegral, &s).unwrap();
                assert_relative_eq!(a, b, max_relative = 1e-3);
            }
        }
    }

    #[test]
    fn covariogram_cached_g0_and_evenness() {
        let s = QuadratureSpec::coarse();
        let cf = CovariogramFn::new(expnorm("simplex2"), CovariogramMethod::LevelSet, s).unwrap();
        assert_relative_eq!(cf.g0(), 1.0, max_relative = 1e-6);
        for x in [Vector::new2(0.4, 0.2), Vector::new2(-0.3, 0.7)] {
            let a = cf.eval(&x).unwrap();
            let b = cf.eval(&-x).unwrap();
            assert_relative_eq!(a, b, max_relative = 1e-6);
        }
    }

    #[test]
    fn covariogram_log_concavity_sampled() {
        use rand::{Rng, SeedableRng};
        let s = QuadratureSpec::coarse();
        let cf = CovariogramFn::new(expnorm("square"), CovariogramMethod::LevelSet, s).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        for _ in 0..40 {
            let x = Vector::new2(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
            let y = Vector::new2(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
            let gm = cf.eval(&(x + y).scaled(0.5)).unwrap();
            let gx = cf.eval(&x).unwrap();
            let gy = cf.eval(&y).unwrap();
            assert!(gm + 1e-9 >= (gx * gy).sqrt(), "{gm} vs {} {}", gx, gy);
        }
    }

    #[test]
    fn ball_body_radial_examples() {
        let s = spec();
        // g = e^{-|x|}: rho^2 = int 2 r e^{-r} dr = 2 -> sqrt(2)
        let g = expnorm("disk");
        let u = Direction::from_angle(0.77);
        let r = ball_body_radial(&g, 2.0, &u, &s).unwrap();
        assert_relative_eq!(r, 2.0_f64.sqrt(), max_relative = 1e-8);

        // indicator of [-1,1]: p = 1 gives rho = 1 in both directions,
        // consistent with |K~_1| = int g / g(0) = 2
        let ind = LogConcaveFunction::indicator(preset("interval").unwrap());
        for u in [Direction::basis(1, 0), Direction::basis(1, 0).flipped()] {
            let r = ball_body_radial(&ind, 1.0, &u, &s).unwrap();
            assert_relative_eq!(r, 1.0, max_relative = 1e-9);
        }
        assert!(ball_body_radial(&g, 0.0, &u, &s).is_err());
        assert!(ball_body_radial(&g, -1.0, &u, &s).is_err());
    }

    #[test]
    fn expnorm_scaling_law() {
        // K~_p(e^{-|.|_K}) = Gamma(1+p)^{1/p} K
        let s = spec();
        for name in ["square", "simplex2"] {
            let g = expnorm(name);
            let k = preset(name).unwrap();
            for p in [0.5, 1.0, 2.0, 3.0] {
                let c = gamma_one_plus(p).unwrap().powf(1.0 / p);
                for i in 0..8 {
                    let u = Direction::from_angle(0.3 + i as f64 * std::f64::consts::TAU / 8.0);
                    let r = ball_body_radial(&g, p, &u, &s).unwrap();
                    assert_relative_eq!(r, c * k.radial(&u).unwrap(), max_relative = 1e-6);
                }
            }
        }
    }

    #[test]
    fn star_volume_examples() {
        let grid = direction_grid(2, 720).unwrap();
        let unit = StarBody::new(grid.clone(), vec![1.0; 720]).unwrap();
        assert_relative_eq!(unit.volume(), std::f64::consts::PI, max_relative = 1e-9);
        let two = StarBody::new(grid, vec![2.0; 720]).unwrap();
        assert_relative_eq!(two.volume(), 4.0 * std::f64::consts::PI, max_relative = 1e-9);
        let g3 = direction_grid(3, 512).unwrap();
        let unit3 = StarBody::new(g3, vec![1.0; 512]).unwrap();
        assert_relative_eq!(unit3.volume(), 4.0 * std::f64::consts::PI / 3.0, max_relative = 1e-9);
    }

    #[test]
    fn star_body_rejects_bad_radii() {
        let grid = direction_grid(2, 8).unwrap();
        assert!(StarBody::new(grid.clone(), vec![1.0; 7]).is_err());
        let mut radii = vec![1.0; 8];
        radii[3] = 0.0;
        assert!(StarBody::new(grid, radii).is_err());
    }

    #[test]
    fn polar_projection_disk_and_square() {
        let grid = direction_grid(2, 720).unwrap();
        let disk = polar_projection_body(&preset("disk").unwrap(), &grid).unwrap();
        for r in disk.radii() {
            assert_abs_diff_eq!(*r, 0.5, epsilon = 1e-12);
        }
        assert_relative_eq!(disk.volume(), std::f64::consts::PI / 4.0, max_relative = 1e-9);

        // square: |Pi* K| = 0.5, via the 1/(1+sin 2 theta) antiderivative
        let sq = polar_projection_body(&preset("square").unwrap(), &grid).unwrap();
        let oracle = {
            let s = spec();
            // (1/8) int_0^{2pi} d theta / (1 + |sin 2 theta|) = (1/2) int_0^{pi/2} 1/(1+sin 2x) dx
            0.5 * integrate_interval(
                |x: f64| 1.0 / (1.0 + (2.0 * x).sin()),
                0.0,
                std::f64::consts::FRAC_PI_2,
                &s,
            )
            .unwrap()
        };
        assert_relative_eq!(sq.volume(), oracle, max_relative = 1e-4);
        assert_relative_eq!(sq.volume(), 0.5, max_relative = 1e-4);
    }

    #[test]
    fn zhang_product_of_triangle() {
        let grid = direction_grid(2, 720).unwrap();
        let k = preset("triangle").unwrap();
        let pp = polar_projection_body(&k, &grid).unwrap();
        let product = k.volume() * pp.volume();
        assert_abs_diff_eq!(product, 1.5, epsilon = 1e-3);
    }

    #[test]
    fn polar_projection_fn_examples() {
        let s = spec();
        let grid = direction_grid(2, 64).unwrap();
        // indicator: Pi*(chi_K) = (1/2) Pi*(K) pointwise
        let k = preset("simplex2").unwrap();
        let f = LogConcaveFunction::indicator(k.clone());
        let a = polar_projection_fn(&f, &grid, &s).unwrap();
        let b = polar_projection_body(&k, &grid).unwrap();
        for (ra, rb) in a.radii().iter().zip(b.radii().iter()) {
            assert_relative_eq!(*ra, 0.5 * rb, max_relative = 1e-8);
        }
        // expnorm(square), u = e1: |u| = 2 int 2t e^{-t} = 4, radius 1/4
        let fsq = expnorm("square");
        let norm = polar_projection_fn_norm(&fsq, &Direction::basis(2, 0), &s).unwrap();
        assert_relative_eq!(norm, 4.0, max_relative = 1e-8);
        // symmetric body: radii(u) = radii(-u)
        let star = polar_projection_fn(&fsq, &grid, &s).unwrap();
        let n = star.radii().len();
        for i in 0..n / 2 {
            assert_relative_eq!(star.radii()[i], star.radii()[i + n / 2], max_relative = 1e-9);
        }
    }

    #[test]
    fn chord_power_dim1_exact() {
        // f = e^{-|x|_{[-1,1]}}, p = 1: (1/(2*2)) int e^{-t} (2t)^2 dt = 2
        let s = spec();
        let f = expnorm("interval");
        let v = chord_power_integral(&f, &Direction::basis(1, 0), 1.0, &s).unwrap();
        assert_relative_eq!(v, 2.0, max_relative = 1e-7);
        // equals 2^p Gamma(1+p) at p = 1
        assert_relative_eq!(v, 2.0 * gamma_one_plus(1.0).unwrap(), max_relative = 1e-7);
    }

    #[test]
    fn chord_power_matches_ball_body_radial() {
        // two-sided identity, each side by an independent quadrature path
        let s = QuadratureSpec::coarse();
        let f = expnorm("square");
        let cf = CovariogramFn::new(f.clone(), CovariogramMethod::LevelSet, s).unwrap();
        for p in [0.5, 1.0, 2.0] {
            for th in [0.0, 0.9] {
                let u = Direction::from_angle(th);
                let lhs = ball_body_radial(&cf, p, &u, &s).unwrap().powf(p);
                let rhs = chord_power_integral(&f, &u, p, &s).unwrap();
                assert_relative_eq!(lhs, rhs, max_relative = 1e-3);
            }
        }
    }

    #[test]
    fn chord_power_indicator_collapses() {
        // for f = chi_K the t-integral collapses to
        // (1/((p+1)|K|)) int chord^{p+1} dy
        let s = spec();
        let k = preset("disk").unwrap();
        let f = LogConcaveFunction::indicator(k.clone());
        let u = Direction::basis(2, 0);
        let p = 1.0;
        let direct = {
            let w = u.vector().perp();
            let (s0, s1) = k.extent(&w);
            integrate_interval(
                |y: f64| k.chord_length(&w.scaled(y), &u).powf(p + 1.0),
                s0,
                s1,
                &s,
            )
            .unwrap()
                / ((p + 1.0) * k.volume())
        };
        let v = chord_power_integral(&f, &u, p, &s).unwrap();
        assert_relative_eq!(v, direct, max_relative = 1e-7);
    }

    #[test]
    fn remark3_targets() {
        let s = QuadratureSpec::coarse();
        let u = Direction::basis(2, 0);
        // expnorm(square): target = 4 / (2 * 8) = 0.25
        let f = expnorm("square");
        let rows = remark3_limit_check(&f, &u, &[-0.5, -0.9, -0.99], &s).unwrap();
        assert_relative_eq!(rows[0].target, 0.25, max_relative = 1e-6);
        assert!(rows.windows(2).all(|w| w[1].gap < w[0].gap), "gaps must shrink");
        assert!(rows.last().unwrap().gap < 0.01);

        // indicator(disk): target = 2/pi
        let fd = LogConcaveFunction::indicator(preset("disk").unwrap());
        let rows = remark3_limit_check(&fd, &u, &[-0.5, -0.9], &s).unwrap();
        assert_relative_eq!(rows[0].target, 2.0 / std::f64::consts::PI, max_relative = 1e-6);

        // invalid sequences rejected
        assert!(remark3_limit_check(&f, &u, &[-0.9, -0.5], &s).is_err());
        assert!(remark3_limit_check(&f, &u, &[0.5], &s).is_err());
    }

    #[test]
    fn remark2_sandwich_sampled() {
        let s = spec();
        let grid = direction_grid(2, 48).unwrap();
        for g in [expnorm("square"), LogConcaveFunction::gaussian(2).unwrap()] {
            for (p, q) in [(1.0, 2.0), (0.5, 3.0)] {
                let kp = ball_body(&g, p, &grid, &s).unwrap();
                let kq = ball_body(&g, q, &grid, &s).unwrap();
                let c = gamma_one_plus(p).unwrap().powf(1.0 / p)
                    / gamma_one_plus(q).unwrap().powf(1.0 / q);
                for (rp, rq) in kp.radii().iter().zip(kq.radii().iter()) {
                    assert!(c * rq <= rp * (1.0 + 1e-6), "left inclusion: {} vs {}", c * rq, rp);
                    assert!(*rp <= rq * (1.0 + 1e-6), "right inclusion: {rp} vs {rq}");
                }
            }
        }
    }

    #[test]
    fn lemma31_identity_sampled() {
        // |K~_n(g)| = int g / g(0), small grid for speed; the verification
        // suite re-runs this at 720 directions
        let s = QuadratureSpec::coarse();
        let grid = direction_grid(2, 240).unwrap();
        for g in [expnorm("square"), expnorm("simplex2"), LogConcaveFunction::gaussian(2).unwrap()] {
            let k2 = ball_body(&g, 2.0, &grid, &s).unwrap();
            let rhs = g.l1_norm(&s).unwrap();
            assert_relative_eq!(k2.volume(), rhs, max_relative = 1e-2);
        }
        // 1-dimensional instance: K~_1(e^{-|x|}) has measure 2
        let g1 = expnorm("interval");
        let grid1 = direction_grid(1, 2).unwrap();
        let k1 = ball_body(&g1, 1.0, &grid1, &s).unwrap();
        assert_relative_eq!(k1.volume(), 2.0, max_relative = 1e-6);
    }

    #[test]
    fn radial_csv_shape() {
        let grid = direction_grid(2, 4).unwrap();
        let sb = StarBody::new(grid, vec![0.5; 4]).unwrap();
        let mut buf = Vec::new();
        sb.write_radial_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "theta_or_index,u1,u2,rho");
        assert_eq!(lines.len(), 5);
        assert!(lines[1].ends_with(",0.5"));
    }
}
