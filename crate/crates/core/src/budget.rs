/// Enumeration caps shared by all modules. Every exhaustive search checks the
/// relevant field and fails with [`Error::Budget`](crate::Error::Budget).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budgets {
    pub max_ideals: usize,
    pub max_chains: usize,
    pub max_degree: usize,
    pub max_fiber_nodes: usize,
    pub max_syt_cells: usize,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            max_ideals: 1 << 16,
            max_chains: 1_000_000,
            max_degree: 4,
            max_fiber_nodes: 10_000_000,
            max_syt_cells: 16,
        }
    }
}
