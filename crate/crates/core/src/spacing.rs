use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Spacing {
    #[default]
    Linear,
    Log,
}

impl Spacing {
    /// `n >= 2` points from `lo` to `hi` inclusive. Endpoints are exact.
    pub fn points(self, lo: f64, hi: f64, n: usize) -> Vec<f64> {
        assert!(n >= 2, "need at least two points");
        let last = (n - 1) as f64;
        (0..n)
            .map(|i| match (i, self) {
                (0, _) => lo,
                (i, _) if i == n - 1 => hi,
                (i, Spacing::Linear) => lo + (hi - lo) * (i as f64 / last),
                (i, Spacing::Log) => lo * (hi / lo).powf(i as f64 / last),
            })
            .collect()
    }
}
