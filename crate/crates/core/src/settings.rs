/// Numeric refinement and root-recognition knobs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Settings {
    /// First working precision in bits (`WITTSIG_PRECISION_START`).
    pub precision_start: u32,
    /// Number of precision doublings before giving up.
    pub max_refine: u32,
    /// Roots of unity of order up to this bound are recognised exactly
    /// among jump candidates.
    pub root_order_bound: u64,
    /// Angular resolution (in bits of a turn) at which numeric root
    /// clusters stop being subdivided.
    pub isolation_bits: u32,
}

impl Default for Settings {
    fn default() -> Self {
        let precision_start = std::env::var("WITTSIG_PRECISION_START")
            .ok()
            .and_then(|v| v.parse().ok())
            .filter(|&p: &u32| p >= 16)
            .unwrap_or(64);
        Settings {
            precision_start,
            max_refine: 10,
            root_order_bound: 64,
            isolation_bits: 32,
        }
    }
}

impl Settings {
    /// The doubling precision schedule.
    pub fn precisions(&self) -> impl Iterator<Item = u32> {
        let start = self.precision_start;
        (0..=self.max_refine).map(move |i| start.saturating_mul(1 << i.min(20)))
    }
}
