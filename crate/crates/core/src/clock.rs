use core::time::Duration;

/// Wall-clock deadline. Without the `std` feature there is no clock and the
/// deadline never expires.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Deadline {
    #[cfg(feature = "std")]
    at: Option<std::time::Instant>,
}

impl Deadline {
    #[cfg_attr(not(feature = "std"), allow(unused_variables))]
    pub(crate) fn after(budget: Option<Duration>) -> Self {
        Deadline {
            #[cfg(feature = "std")]
            at: budget.and_then(|b| std::time::Instant::now().checked_add(b)),
        }
    }

    pub(crate) fn expired(&self) -> bool {
        #[cfg(feature = "std")]
        {
            matches!(self.at, Some(at) if std::time::Instant::now() >= at)
        }
        #[cfg(not(feature = "std"))]
        {
            false
        }
    }
}
