use std::time::{Duration, Instant};

use thiserror::Error;

/// Caller-supplied work limits: a cap on enumeration nodes and an optional
/// wall-clock deadline.
#[derive(Clone, Copy, Debug, Default)]
pub struct Budget {
    pub max_nodes: Option<u64>,
    pub deadline: Option<Instant>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("budget exceeded: {0}")]
pub struct BudgetExceeded(pub String);

impl Budget {
    pub fn unlimited() -> Self {
        Budget::default()
    }

    pub fn nodes(max_nodes: u64) -> Self {
        Budget {
            max_nodes: Some(max_nodes),
            deadline: None,
        }
    }

    pub fn with_timeout(mut self, secs: f64) -> Self {
        self.deadline = Some(Instant::now() + Duration::from_secs_f64(secs));
        self
    }

    pub fn check_nodes(&self, needed: u128) -> Result<(), BudgetExceeded> {
        match self.max_nodes {
            Some(max) if needed > max as u128 => Err(BudgetExceeded(format!(
                "{needed} nodes needed, limit {max}"
            ))),
            _ => Ok(()),
        }
    }

    pub fn check_time(&self) -> Result<(), BudgetExceeded> {
        match self.deadline {
            Some(t) if Instant::now() > t => Err(BudgetExceeded("time limit reached".into())),
            _ => Ok(()),
        }
    }
}
