//! Node budgets for the exhaustive searches.

use thiserror::Error;

/// Default node budget for backtracking searches.
pub const DEFAULT_BUDGET: u64 = 20_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("search budget of {budget} nodes exceeded")]
    BudgetExceeded { budget: u64 },
}

/// A decrementing node counter shared by a search.
#[derive(Debug, Clone)]
pub struct Budget {
    total: u64,
    remaining: u64,
}

impl Budget {
    pub fn new(total: u64) -> Self {
        Budget {
            total,
            remaining: total,
        }
    }

    /// Charge `n` nodes, failing once the budget is exhausted.
    pub fn spend(&mut self, n: u64) -> Result<(), SearchError> {
        if self.remaining < n {
            return Err(SearchError::BudgetExceeded { budget: self.total });
        }
        self.remaining -= n;
        Ok(())
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::new(DEFAULT_BUDGET)
    }
}
