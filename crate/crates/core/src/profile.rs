use std::fmt;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::order::{LinearOrder, Permutation};

/// One linear order per issue, indexed by the issue's position in its
/// [`IssueSpace`](crate::population::IssueSpace).
///
/// Ordering is lexicographic issue by issue, which is the canonical order
/// for enumeration and tie-breaks.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Profile {
    orders: Vec<LinearOrder>,
}

impl Profile {
    pub fn new(orders: Vec<LinearOrder>) -> Result<Self> {
        if orders.is_empty() {
            return Err(Error::invalid("a profile needs at least one issue"));
        }
        let n = orders[0].n();
        if orders.iter().any(|o| o.n() != n) {
            return Err(Error::invalid("all issues of a profile share one outcome count"));
        }
        Ok(Profile { orders })
    }

    pub fn issue_count(&self) -> usize {
        self.orders.len()
    }

    pub fn n(&self) -> usize {
        self.orders[0].n()
    }

    pub fn get(&self, issue: usize) -> &LinearOrder {
        &self.orders[issue]
    }

    pub fn orders(&self) -> &[LinearOrder] {
        &self.orders
    }

    pub fn with_issue(&self, issue: usize, order: LinearOrder) -> Profile {
        let mut orders = self.orders.clone();
        orders[issue] = order;
        Profile { orders }
    }

    /// `C ⊙_i σ`: permutes the order on `issue`, leaves every other issue alone.
    pub fn apply_local_permutation(&self, issue: usize, sigma: &Permutation) -> Result<Profile> {
        let order = self
            .orders
            .get(issue)
            .ok_or_else(|| {
                Error::invalid(format!(
                    "issue index {issue} not in a profile over {} issues",
                    self.orders.len()
                ))
            })?
            .apply(sigma)?;
        Ok(self.with_issue(issue, order))
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.orders.iter().join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lo(s: &str) -> LinearOrder {
        s.parse().unwrap()
    }

    #[test]
    fn local_permutation_touches_one_issue() {
        let c = Profile::new(vec![lo("0>1>2"), lo("2>1>0")]).unwrap();
        let t = Permutation::transposition(3, 0, 1).unwrap();
        let c2 = c.apply_local_permutation(0, &t).unwrap();
        assert_eq!(c2.get(0), &lo("1>0>2"));
        assert_eq!(c2.get(1), &lo("2>1>0"));
        assert_eq!(c2.apply_local_permutation(0, &t.inverse()).unwrap(), c);
        assert_eq!(
            c.apply_local_permutation(1, &Permutation::identity(3)).unwrap(),
            c
        );
        assert!(c.apply_local_permutation(2, &t).is_err());
    }

    #[test]
    fn rejects_mixed_outcome_counts() {
        assert!(Profile::new(vec![lo("0>1"), lo("0>1>2")]).is_err());
        assert!(Profile::new(vec![]).is_err());
    }
}
