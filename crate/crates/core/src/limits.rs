use crate::error::{OrderError, Result};

/// Size guards shared by every construction that can blow up.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest carrier any constructed preorder may have.
    pub max_carrier: usize,
    /// Largest element count for exhaustive enumeration of preorders.
    pub max_size: usize,
    /// Largest search space `|Y|^|X|` a hom-poset enumeration may face.
    pub max_hom_space: u128,
    /// Cap on the number of solutions collected by exhaustive structure searches.
    pub max_solutions: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_carrier: 4096,
            max_size: 5,
            max_hom_space: 1 << 24,
            max_solutions: 100_000,
        }
    }
}

impl Limits {
    pub fn with_max_carrier(mut self, max_carrier: usize) -> Self {
        self.max_carrier = max_carrier;
        self
    }

    pub fn with_max_size(mut self, max_size: usize) -> Self {
        self.max_size = max_size;
        self
    }

    pub(crate) fn check_carrier(&self, what: &'static str, size: usize) -> Result<()> {
        if size > self.max_carrier {
            return Err(OrderError::SizeLimitExceeded {
                what,
                size: size as u128,
                limit: self.max_carrier as u128,
            });
        }
        Ok(())
    }

    pub(crate) fn check_size(&self, what: &'static str, size: usize) -> Result<()> {
        if size > self.max_size {
            return Err(OrderError::SizeLimitExceeded {
                what,
                size: size as u128,
                limit: self.max_size as u128,
            });
        }
        Ok(())
    }

    pub(crate) fn check_hom_space(&self, what: &'static str, base: usize, exp: usize) -> Result<()> {
        let size = (base as u128).checked_pow(exp as u32).unwrap_or(u128::MAX);
        if size > self.max_hom_space {
            return Err(OrderError::SizeLimitExceeded {
                what,
                size,
                limit: self.max_hom_space,
            });
        }
        Ok(())
    }
}
