use lcg_core::functionals::*;
use lcg_core::geometry::{preset, Direction};
use lcg_core::logconcave::LogConcaveFunction;
use lcg_core::numerics::QuadratureSpec;
use std::time::Instant;

fn main() {
    let s = QuadratureSpec::coarse();
    let f = LogConcaveFunction::exp_norm(preset("square").unwrap()).unwrap();
    for p in [0.5, 1.0, 2.0] {
        for th in [0.0_f64, 0.9] {
            let u = Direction::from_angle(th);
            let t = Instant::now();
            let v = chord_power_integral(&f, &u, p, &s).unwrap();
            println!("chord_power p={p} th={th}: {v:.6e} in {:?}", t.elapsed());
        }
    }
}
