use crate::error::{Error, Result};
use crate::model::{Allocation, EnergyRegime, Mode, System};

/// Relative slack on the finish-within-`D_m` check at `E = E2`.
const CAPACITY_SLACK: f64 = 1e-9;

/// Pure NOMA: the whole budget goes into the shared slot, `P_{n,1} = E / D_m`,
/// and user n finishes within `D_m`.
pub fn solve_pure_noma(sys: &System, energy: f64) -> Result<Allocation> {
    let regime = sys.classify(energy);
    if regime != EnergyRegime::PureNoma {
        return Err(Error::Infeasible {
            mode: Mode::PureNoma,
            energy,
            reason: format!("E must be at least E2 = {}", sys.e2()),
        });
    }
    let p_n1 = energy / sys.d_m();
    let delivered = sys.shared_slot_nats(p_n1);
    if delivered < sys.n_nats() * (1.0 - CAPACITY_SLACK) {
        return Err(Error::Infeasible {
            mode: Mode::PureNoma,
            energy,
            reason: format!(
                "shared slot carries only {delivered} of {} nats",
                sys.n_nats()
            ),
        });
    }
    Ok(Allocation::pure_noma(sys.d_m(), p_n1))
}
