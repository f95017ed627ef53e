//! Deterministic numerical primitives shared by every other module:
//! weighted quadrature, direction grids, hit-or-miss Monte Carlo and the
//! gamma function.
//!
//! All routines are pure functions of their arguments. Monte Carlo draws
//! from a private generator derived from the caller's [`RngSeed`], so
//! identical seeds give bit-identical output.

use crate::error::{Error, Result};
use crate::geometry::{Aabb, Vector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Euler-Mascheroni constant, 15 digits.
pub const EULER_MASCHERONI: f64 = 0.577215664901533;

/// Maximum interval-halving depth of the adaptive integrator.
const MAX_DEPTH: u32 = 52;

/// Seed for reproducible Monte Carlo runs. Identical seeds give identical
/// estimates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RngSeed(pub u64);

/// Tolerances and budgets for the adaptive quadrature routines.
#[derive(Debug, Clone, Copy)]
pub struct QuadratureSpec {
    /// Relative tolerance (> 0).
    pub rel_tol: f64,
    /// Absolute tolerance (> 0).
    pub abs_tol: f64,
    /// Total interval-subdivision budget per integral.
    pub max_subdivisions: usize,
    /// Upper truncation point `T` for integrals against `e^{-t}` on
    /// `[0, inf)`. Must be at least 30 (`e^{-30} < 1e-13`).
    pub exp_truncation: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            rel_tol: 1e-8,
            abs_tol: 1e-10,
            max_subdivisions: 200_000,
            exp_truncation: 50.0,
        }
    }
}

impl QuadratureSpec {
    /// A loosened spec for composed functionals where 1e-3 level accuracy
    /// suffices and the integrand is expensive.
    pub fn coarse() -> Self {
        QuadratureSpec {
            rel_tol: 1e-6,
            abs_tol: 1e-9,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) || !(self.abs_tol > 0.0) {
            return Err(Error::Domain("quadrature tolerances must be positive".into()));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::Domain("max_subdivisions must be positive".into()));
        }
        if !(self.exp_truncation >= 30.0) {
            return Err(Error::Domain(format!(
                "exp_truncation must be >= 30, got {}",
                self.exp_truncation
            )));
        }
        Ok(())
    }

    fn tol_for(&self, scale: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * scale.abs())
    }
}

/// Gamma function for positive arguments, relative error below 1e-12.
///
/// Lanczos approximation (g = 7, 9 terms) with the reflection formula for
/// arguments below 1/2; the same coefficient set the GNU Scientific
/// Library uses.
pub fn gamma_fn(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("gamma_fn requires x > 0, got {x}")));
    }
    Ok(gamma_pos(x))
}

pub(crate) fn gamma_pos(x: f64) -> f64 {
    const P: [f64; 9] = [
        0.99999999999980993,
        676.5203681218851,
        -1259.1392167224028,
        771.32342877765313,
        -176.61502916214059,
        12.507343278686905,
        -0.13857109526572012,
        9.9843695780195716e-6,
        1.5056327351493116e-7,
    ];
    if x < 0.5 {
        // reflection: sin(pi x) is safe here since 0 < x < 1/2
        std::f64::consts::PI / ((std::f64::consts::PI * x).sin() * gamma_pos(1.0 - x))
    } else {
        let z = x - 1.0;
        let mut acc = P[0];
        for (i, &p) in P.iter().enumerate().skip(1) {
            acc += p / (z + i as f64);
        }
        let w = z + 7.5;
        (2.0 * std::f64::consts::PI).sqrt() * w.powf(z + 0.5) * (-w).exp() * acc
    }
}

/// `Gamma(1+p)` for `p > -1`, used by every Berwald-type normalizer.
pub fn gamma_one_plus(p: f64) -> Result<f64> {
    gamma_fn(1.0 + p)
}

// ---------------------------------------------------------------------------
// Adaptive Simpson engine
// ---------------------------------------------------------------------------

struct Adapt<'f> {
    f: &'f dyn Fn(f64) -> f64,
    max_subdivisions: usize,
    subdivisions: usize,
    exhausted: bool,
    diverged: bool,
    err_accum: f64,
}

fn simpson(fa: f64, fm: f64, fb: f64, h: f64) -> f64 {
    h / 6.0 * (fa + 4.0 * fm + fb)
}

impl<'f> Adapt<'f> {
    fn new(f: &'f dyn Fn(f64) -> f64, max_subdivisions: usize) -> Self {
        Adapt {
            f,
            max_subdivisions,
            subdivisions: 0,
            exhausted: false,
            diverged: false,
            err_accum: 0.0,
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn rec(&mut self, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = (self.f)(lm);
        let frm = (self.f)(rm);
        if !flm.is_finite() || !frm.is_finite() {
            self.diverged = true;
            return whole;
        }
        let left = simpson(fa, flm, fm, m - a);
        let right = simpson(fm, frm, fb, b - m);
        let delta = left + right - whole;
        let refined = left + right + delta / 15.0;
        // Floor the tolerance at roundoff scale so recursion terminates.
        let tol_eff = tol.max(1e-16 * whole.abs());
        if delta.abs() <= 15.0 * tol_eff || depth >= MAX_DEPTH {
            self.err_accum += delta.abs() / 15.0;
            return refined;
        }
        if self.subdivisions >= self.max_subdivisions {
            self.exhausted = true;
            self.err_accum += delta.abs() / 15.0;
            return refined;
        }
        self.subdivisions += 1;
        let l = self.rec(a, m, fa, flm, fm, left, 0.5 * tol, depth + 1);
        if self.diverged {
            return l;
        }
        l + self.rec(m, b, fm, frm, fb, right, 0.5 * tol, depth + 1)
    }
}

/// Adaptive Simpson on `[a, b]` assuming finite values at the endpoints.
/// Returns `(value, error_bound, subdivisions_used)`.
fn adaptive_closed(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_subdivisions: usize,
) -> Result<(f64, f64, usize)> {
    if a == b {
        return Ok((0.0, 0.0, 0));
    }
    let fa = f(a);
    let fb = f(b);
    let fm = f(0.5 * (a + b));
    if !fa.is_finite() || !fb.is_finite() || !fm.is_finite() {
        return Err(Error::Divergent(0.0));
    }
    let whole = simpson(fa, fm, fb, b - a);
    let tol = abs_tol.max(rel_tol * whole.abs());
    let mut eng = Adapt::new(f, max_subdivisions);
    let v = eng.rec(a, b, fa, fm, fb, whole, tol, 0);
    if eng.diverged || !v.is_finite() {
        return Err(Error::Divergent(v));
    }
    if v.abs() > 1e12 {
        return Err(Error::Divergent(v));
    }
    if eng.exhausted {
        return Err(Error::QuadratureFailure {
            estimate: v,
            error_bound: eng.err_accum,
        });
    }
    Ok((v, eng.err_accum, eng.subdivisions))
}

/// Integrate on `[a, b]` when the integrand is unbounded (non-finite) at
/// the left endpoint but integrable, i.e. behaves like `C (x-a)^beta` with
/// `beta > -1` near `a`.
///
/// The bulk `[a+eps, b]` is handled by adaptive Simpson; `[a, a+delta]` by
/// an analytic local power-law model whose exponent is fitted from two
/// samples. `delta` is halved (absorbing each shed panel numerically)
/// until the model agrees with its own refinement, so exact power laws
/// terminate at the first scale `eps = 1e-4`.
fn adaptive_open_left(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_subdivisions: usize,
) -> Result<(f64, f64, usize)> {
    let eps = 1e-4_f64.min((b - a) / 8.0);
    let (bulk, bulk_err, mut used) =
        adaptive_closed(f, a + eps, b, 0.5 * abs_tol, 0.5 * rel_tol, max_subdivisions)?;

    // model of int_a^{a+d} f, fitted at (d, d/2); local coordinate s = x-a
    let model = |d: f64, fd: f64, fd2: f64| -> Option<f64> {
        let ratio = fd / fd2;
        if !(ratio > 0.0) || !ratio.is_finite() {
            return None;
        }
        let beta = ratio.log2();
        if beta <= -0.999 {
            return None;
        }
        Some(fd * d / (beta + 1.0))
    };

    let tol_tail = 0.5 * abs_tol.max(rel_tol * bulk.abs());
    let mut tail = 0.0_f64;
    let mut delta = eps;
    for _ in 0..200 {
        let fd = f(a + delta);
        let fd2 = f(a + 0.5 * delta);
        if !fd.is_finite() || !fd2.is_finite() {
            return Err(Error::Divergent(bulk + tail));
        }
        let rem = match model(delta, fd, fd2) {
            Some(r) => r,
            None => return Err(Error::Divergent(bulk + tail)),
        };
        let (panel, panel_err, u) = adaptive_closed(
            f,
            a + 0.5 * delta,
            a + delta,
            0.25 * tol_tail,
            rel_tol,
            max_subdivisions.saturating_sub(used),
        )?;
        used += u;
        let fd4 = f(a + 0.25 * delta);
        let rem_half = match model(0.5 * delta, fd2, fd4) {
            Some(r) => r,
            None => return Err(Error::Divergent(bulk + tail)),
        };
        let refined = panel + rem_half;
        if (refined - rem).abs() <= tol_tail || 0.5 * delta < 1e-280 {
            tail += refined;
            return Ok((bulk + tail, bulk_err + panel_err + (refined - rem).abs(), used));
        }
        tail += panel;
        delta *= 0.5;
        if used >= max_subdivisions {
            return Err(Error::QuadratureFailure {
                estimate: bulk + tail + rem_half,
                error_bound: bulk_err + (refined - rem).abs(),
            });
        }
    }
    Err(Error::QuadratureFailure {
        estimate: bulk + tail,
        error_bound: tol_tail,
    })
}

/// Adaptive integral of a bounded (or endpoint-integrably-singular)
/// function over `[a, b]`.
///
/// Endpoints are probed: a non-finite endpoint value switches that side to
/// the open-endpoint scheme. A non-finite value in the interior reports
/// [`Error::Divergent`].
pub fn integrate_interval(f: impl Fn(f64) -> f64, a: f64, b: f64, spec: &QuadratureSpec) -> Result<f64> {
    let f = &f as &dyn Fn(f64) -> f64;
    if a > b {
        return Err(Error::Domain(format!("integrate_interval requires a <= b, got [{a}, {b}]")));
    }
    if a == b {
        return Ok(0.0);
    }
    let fa = f(a);
    let fb = f(b);
    let res = match (fa.is_finite(), fb.is_finite()) {
        (true, true) => adaptive_closed(f, a, b, spec.abs_tol, spec.rel_tol, spec.max_subdivisions),
        (false, true) => adaptive_open_left(f, a, b, spec.abs_tol, spec.rel_tol, spec.max_subdivisions),
        (true, false) => {
            let g = move |x: f64| f(a + b - x);
            adaptive_open_left(&g, a, b, spec.abs_tol, spec.rel_tol, spec.max_subdivisions)
        }
        (false, false) => {
            let m = 0.5 * (a + b);
            let g = move |x: f64| f(a + m - x);
            let left = adaptive_open_left(f, a, m, 0.5 * spec.abs_tol, spec.rel_tol, spec.max_subdivisions)?;
            let right = adaptive_open_left(&g, a, m, 0.5 * spec.abs_tol, spec.rel_tol, spec.max_subdivisions)?;
            Ok((left.0 + right.0, left.1 + right.1, left.2 + right.2))
        }
    };
    res.map(|(v, _, _)| v)
}

/// `int_0^inf phi(t) e^{-t} dt`.
///
/// The integral is truncated at `spec.exp_truncation` and evaluated on
/// unit panels `[k, k+1]`, each to a share `~e^{-k}` of the absolute
/// tolerance; `phi` may be integrably singular at 0 (open-endpoint
/// scheme). This trades spectral accuracy for robustness: the integrands
/// fed through here include non-smooth chord powers and level-set volumes.
pub fn integrate_exp_weighted(phi: impl Fn(f64) -> f64, spec: &QuadratureSpec) -> Result<f64> {
    let weighted = |t: f64| phi(t) * (-t).exp();
    let t_end = spec.exp_truncation;
    let n_panels = t_end.ceil() as usize;
    let share = 1.0 - (-1.0_f64).exp(); // sum_k e^{-k} * share = 1

    let mut total = 0.0_f64;
    let mut err = 0.0_f64;
    let mut budget = spec.max_subdivisions;

    for k in 0..n_panels {
        let lo = k as f64;
        let hi = (k as f64 + 1.0).min(t_end);
        let panel_abs = spec.tol_for(total) * share * (-lo).exp();
        let first_val = weighted(lo);
        let res = if k == 0 && !first_val.is_finite() {
            adaptive_open_left(&weighted, lo, hi, panel_abs, spec.rel_tol, budget)
        } else {
            adaptive_closed(&weighted, lo, hi, panel_abs, spec.rel_tol, budget)
        };
        match res {
            Ok((v, e, used)) => {
                total += v;
                err += e;
                budget = budget.saturating_sub(used);
            }
            Err(Error::QuadratureFailure { estimate, error_bound }) => {
                return Err(Error::QuadratureFailure {
                    estimate: total + estimate,
                    error_bound: err + error_bound,
                });
            }
            Err(Error::Divergent(part)) => return Err(Error::Divergent(total + part)),
            Err(e) => return Err(e),
        }
        if budget == 0 {
            return Err(Error::QuadratureFailure {
                estimate: total,
                error_bound: err,
            });
        }
    }
    Ok(total)
}

// ---------------------------------------------------------------------------
// Direction grids
// ---------------------------------------------------------------------------

/// Unit directions with positive weights summing to the surface measure of
/// the unit sphere: 2 in dimension 1, `2 pi` in dimension 2, `4 pi` in
/// dimension 3. Discretizes `d sigma` in every polar-coordinate integral.
#[derive(Debug, Clone)]
pub struct DirectionGrid {
    dim: usize,
    directions: Vec<Vector>,
    weights: Vec<f64>,
}

impl DirectionGrid {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.directions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.directions.is_empty()
    }

    pub fn directions(&self) -> &[Vector] {
        &self.directions
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vector, f64)> {
        self.directions.iter().zip(self.weights.iter().copied())
    }

    /// Weighted sum of `f` over the grid, approximating the surface
    /// integral over the sphere.
    pub fn integrate(&self, mut f: impl FnMut(&Vector) -> f64) -> f64 {
        self.iter().map(|(u, w)| w * f(u)).sum()
    }
}

/// Build a direction grid.
///
/// Dimension 1 always yields `{+1, -1}` with unit weights; dimension 2
/// equally spaced angles starting at 0 with equal weights; dimension 3 a
/// Fibonacci sphere with equal weights `4 pi / count`.
pub fn direction_grid(dim: usize, count: usize) -> Result<DirectionGrid> {
    match dim {
        1 => Ok(DirectionGrid {
            dim,
            directions: vec![Vector::new1(1.0), Vector::new1(-1.0)],
            weights: vec![1.0, 1.0],
        }),
        2 => {
            if count < 2 {
                return Err(Error::Domain("direction grid needs count >= 2".into()));
            }
            let step = std::f64::consts::TAU / count as f64;
            let directions = (0..count)
                .map(|i| {
                    let th = i as f64 * step;
                    Vector::new2(th.cos(), th.sin())
                })
                .collect();
            Ok(DirectionGrid {
                dim,
                directions,
                weights: vec![step; count],
            })
        }
        3 => {
            if count < 2 {
                return Err(Error::Domain("direction grid needs count >= 2".into()));
            }
            // Fibonacci sphere: z stratified, azimuth stepped by the
            // golden angle.
            let golden = (1.0 + 5.0_f64.sqrt()) / 2.0;
            let directions = (0..count)
                .map(|i| {
                    let z = 1.0 - (2.0 * i as f64 + 1.0) / count as f64;
                    let r = (1.0 - z * z).max(0.0).sqrt();
                    let th = std::f64::consts::TAU * (i as f64 / golden).fract();
                    Vector::new3(r * th.cos(), r * th.sin(), z)
                })
                .collect();
            let w = 4.0 * std::f64::consts::PI / count as f64;
            Ok(DirectionGrid {
                dim,
                directions,
                weights: vec![w; count],
            })
        }
        d => Err(Error::Unsupported(format!("direction grid in dimension {d}"))),
    }
}

// ---------------------------------------------------------------------------
// Monte Carlo volume
// ---------------------------------------------------------------------------

/// Hit-or-miss volume estimate of `{x in box : membership(x)}`.
///
/// Returns `(estimate, standard_error)` with the binomial standard error.
/// Deterministic for a fixed seed.
pub fn mc_volume(
    membership: impl Fn(&Vector) -> bool,
    bbox: &Aabb,
    samples: u64,
    seed: RngSeed,
) -> Result<(f64, f64)> {
    if samples < 1000 {
        return Err(Error::Domain("mc_volume needs at least 1000 samples".into()));
    }
    let dim = bbox.dim();
    let mut sides = [0.0_f64; 3];
    for i in 0..dim {
        sides[i] = bbox.hi[i] - bbox.lo[i];
        if !(sides[i] > 0.0) {
            return Err(Error::DegenerateBox);
        }
    }
    let box_vol: f64 = sides[..dim].iter().product();
    let mut rng = ChaCha8Rng::seed_from_u64(seed.0);
    let mut hits: u64 = 0;
    let mut x = Vector::zero(dim);
    for _ in 0..samples {
        for i in 0..dim {
            let u: f64 = rng.random();
            x[i] = bbox.lo[i] + u * sides[i];
        }
        if membership(&x) {
            hits += 1;
        }
    }
    let p = hits as f64 / samples as f64;
    let est = box_vol * p;
    let se = box_vol * (p * (1.0 - p) / samples as f64).sqrt();
    Ok((est, se))
}

/// Format with `sig` significant digits, `%g`-style: positional notation
/// for moderate exponents, otherwise `<mantissa>e<exp>`. Deterministic and
/// locale-independent; used for all CSV emission.
pub fn fmt_sig(x: f64, sig: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".to_string()
        } else if x > 0.0 {
            "inf".to_string()
        } else {
            "-inf".to_string()
        };
    }
    let sci = format!("{:.*e}", sig.saturating_sub(1), x);
    let (mant, exp_str) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp_str.parse().expect("exponent");
    if exp >= -4 && exp < sig as i32 {
        let decimals = (sig as i32 - 1 - exp).max(0) as usize;
        trim_zeros(format!("{:.*}", decimals, x))
    } else {
        format!("{}e{}", trim_zeros(mant.to_string()), exp)
    }
}

fn trim_zeros(mut s: String) -> String {
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    s
}

/// Evenly spaced values from `a` to `b` inclusive.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![a];
    }
    (0..n)
        .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
        .collect()
}
