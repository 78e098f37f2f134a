//! Partially persistent union-find.
//!
//! Links are written once and stamped with the time of the union that made
//! them; a find at time `t` simply ignores younger links. Union by rank
//! without path compression keeps every chain logarithmic.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DsuError {
    #[error("node {0} out of range")]
    BadNode(usize),
    #[error("time {0} is beyond the current time {1}")]
    BadTime(u32, u32),
}

const UNLINKED: u32 = u32::MAX;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PersistentDsu {
    parent: Vec<u32>,
    linked_at: Vec<u32>,
    rank: Vec<u8>,
    time: u32,
}

impl PersistentDsu {
    pub fn new(n: usize) -> Self {
        Self {
            parent: (0..n as u32).collect(),
            linked_at: vec![UNLINKED; n],
            rank: vec![0; n],
            time: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn time(&self) -> u32 {
        self.time
    }

    fn check(&self, u: usize) -> Result<(), DsuError> {
        if u < self.parent.len() {
            Ok(())
        } else {
            Err(DsuError::BadNode(u))
        }
    }

    /// Root of `u` at time `t` and the number of links followed.
    fn root_at(&self, mut u: usize, t: u32) -> (usize, u32) {
        let mut hops = 0;
        while self.linked_at[u] != UNLINKED && self.linked_at[u] <= t {
            u = self.parent[u] as usize;
            hops += 1;
        }
        (u, hops)
    }

    /// Advances time and merges the components of `u` and `v`. Returns the
    /// new time, whether or not anything was linked.
    pub fn union(&mut self, u: usize, v: usize) -> Result<u32, DsuError> {
        self.check(u)?;
        self.check(v)?;
        self.time += 1;
        let t = self.time;
        let (ru, _) = self.root_at(u, t);
        let (rv, _) = self.root_at(v, t);
        if ru != rv {
            let (child, root) = match self.rank[ru].cmp(&self.rank[rv]) {
                std::cmp::Ordering::Less => (ru, rv),
                std::cmp::Ordering::Greater => (rv, ru),
                std::cmp::Ordering::Equal => {
                    let (lo, hi) = (ru.min(rv), ru.max(rv));
                    self.rank[lo] += 1;
                    (hi, lo)
                }
            };
            self.parent[child] = root as u32;
            self.linked_at[child] = t;
        }
        Ok(t)
    }

    pub fn find(&self, u: usize, t: u32) -> Result<usize, DsuError> {
        Ok(self.find_counted(u, t)?.0)
    }

    /// Root of `u` at time `t` with the number of parent hops taken.
    pub fn find_counted(&self, u: usize, t: u32) -> Result<(usize, u32), DsuError> {
        self.check(u)?;
        if t > self.time {
            return Err(DsuError::BadTime(t, self.time));
        }
        Ok(self.root_at(u, t))
    }

    pub fn connected(&self, u: usize, v: usize, t: u32) -> Result<bool, DsuError> {
        Ok(self.find(u, t)? == self.find(v, t)?)
    }
}
