use lcg_core::functionals::*;
use lcg_core::geometry::{preset, Direction};
use lcg_core::logconcave::LogConcaveFunction;
use lcg_core::numerics::QuadratureSpec;
use std::time::Instant;

fn main() {
    let s = QuadratureSpec::coarse();
    let f = LogConcaveFunction::exp_norm(preset("square").unwrap()).unwrap();

    // count g_f evals via a wrapper
    struct Counted {
        inner: CovariogramFn,
        count: std::sync::atomic::AtomicUsize,
    }
    impl GFunction for Counted {
        fn dim(&self) -> usize { self.inner.dim() }
        fn value(&self, x: &lcg_core::geometry::Vector) -> f64 {
            self.count.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
            self.inner.value(x)
        }
        fn at_origin(&self) -> f64 { self.inner.at_origin() }
        fn ray_decay_radius(&self, u: &Direction, th: f64) -> f64 {
            self.inner.ray_decay_radius(u, th)
        }
    }

    let t0 = Instant::now();
    let cf = CovariogramFn::new(f.clone(), CovariogramMethod::LevelSet, s).unwrap();
    println!("CovariogramFn::new: {:?}", t0.elapsed());

    // single eval cost at a few radii
    for r in [0.1, 1.0, 10.0, 40.0, 100.0] {
        let x = lcg_core::geometry::Vector::new2(r, 0.0);
        let t = Instant::now();
        let v = cf.eval(&x).unwrap();
        println!("g_f({r:6.1}) = {v:.6e}   {:?}", t.elapsed());
    }

    let counted = Counted { inner: cf, count: Default::default() };
    let u = Direction::from_angle(0.9);
    let t = Instant::now();
    let rho = ball_body_radial(&counted, 0.5, &u, &s).unwrap();
    println!(
        "ball_body_radial p=0.5: rho={rho:.6} in {:?}, g_f evals = {}",
        t.elapsed(),
        counted.count.load(std::sync::atomic::Ordering::Relaxed)
    );
}
