#![allow(dead_code)]

use noma_mec::{System, SystemParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    (rng.gen_range(lo.ln()..hi.ln())).exp()
}

/// A hybrid-regime instance: `D_m` in [1, 10], `N / D_m` in [0.5, 5], gains
/// log-uniform in [0.1, 10], and `E = E1 (E2 / E1)^u` with `u` in
/// [0.01, 0.99].
pub fn hybrid_instance(rng: &mut ChaCha8Rng) -> (System, f64) {
    let d_m = rng.gen_range(1.0..10.0);
    let ratio = rng.gen_range(0.5..5.0);
    let params = SystemParams::new(
        ratio * d_m,
        d_m,
        log_uniform(rng, 0.1, 10.0),
        log_uniform(rng, 0.1, 10.0),
    )
    .unwrap();
    let sys = System::new(params).unwrap();
    let u = rng.gen_range(0.01..0.99);
    let energy = sys.e1() * (sys.e2() / sys.e1()).powf(u);
    (sys, energy)
}

pub fn hybrid_instances(seed: u64, count: usize) -> Vec<(System, f64)> {
    let mut r = rng(seed);
    (0..count).map(|_| hybrid_instance(&mut r)).collect()
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}
