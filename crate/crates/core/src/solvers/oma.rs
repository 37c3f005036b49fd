use crate::error::{Error, Result};
use crate::model::{Allocation, Mode, System};

/// Energy OMA spends at dedicated-slot power `p`: `N p / ln(1 + |h_n|^2 p)`.
/// Increasing in `p`, with limit `N |h_n|^{-2}` as `p -> 0`.
pub fn oma_energy(sys: &System, p: f64) -> f64 {
    if p == 0.0 {
        return sys.e_oma_min();
    }
    sys.n_nats() * p / sys.dedicated_rate(p)
}

const BRACKET_REL_WIDTH: f64 = 1e-12;
const MAX_DOUBLINGS: usize = 2048;

/// OMA baseline: user n idles during `D_m` and spends the whole budget in
/// its dedicated slot. Delay falls as power rises, so the budget binds and
/// the optimal power solves `oma_energy(p) = E` (bisection).
pub fn solve_oma(sys: &System, energy: f64) -> Result<Allocation> {
    if energy.is_nan() || energy <= sys.e_oma_min() {
        return Err(Error::Infeasible {
            mode: Mode::Oma,
            energy,
            reason: format!(
                "E must exceed N/|h_n|^2 = {} for a finite dedicated slot",
                sys.e_oma_min()
            ),
        });
    }
    let mut lo = 0.0;
    let mut hi = 1.0 / sys.h_n_sq();
    let mut doublings = 0;
    while oma_energy(sys, hi) <= energy {
        lo = hi;
        hi *= 2.0;
        doublings += 1;
        if doublings > MAX_DOUBLINGS || !hi.is_finite() {
            return Err(Error::Range {
                ratio: sys.n_nats() / sys.d_m(),
            });
        }
    }
    while hi - lo > BRACKET_REL_WIDTH * hi {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if oma_energy(sys, mid) > energy {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    // `lo` stays on the feasible side of the budget.
    let p = lo;
    let t_n = sys.n_nats() / sys.dedicated_rate(p);
    Ok(Allocation::oma(sys.d_m(), p, t_n))
}
