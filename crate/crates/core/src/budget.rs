use crate::error::{Error, Result};

/// Node counter shared by every exhaustive search in the crate.
///
/// Each search charges one unit per visited node and fails with
/// [`Error::Resource`] once the limit is reached, so a caller can always bound
/// the work done by a single request.
#[derive(Debug, Clone)]
pub struct Budget {
    limit: u64,
    used: u64,
}

impl Budget {
    pub const DEFAULT_LIMIT: u64 = 10_000_000;

    pub fn new(limit: u64) -> Self {
        Budget { limit, used: 0 }
    }

    pub fn unlimited() -> Self {
        Budget::new(u64::MAX)
    }

    #[inline]
    pub fn tick(&mut self) -> Result<()> {
        self.charge(1)
    }

    #[inline]
    pub fn charge(&mut self, nodes: u64) -> Result<()> {
        self.used = self.used.saturating_add(nodes);
        if self.used > self.limit {
            Err(Error::Resource { limit: self.limit })
        } else {
            Ok(())
        }
    }

    /// Fails up front when a search would need more than the remaining budget.
    pub fn require(&self, nodes: u128) -> Result<()> {
        if nodes > u128::from(self.limit - self.used.min(self.limit)) {
            Err(Error::Resource { limit: self.limit })
        } else {
            Ok(())
        }
    }

    pub fn used(&self) -> u64 {
        self.used
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::new(Self::DEFAULT_LIMIT)
    }
}
