//! 2-opt restricted to exchanges that keep the tour rainbow.

use crate::baselines::two_opt::{self, ExchangeRule, TwoOptBudget, TwoOptReport};
use crate::instance::{Coloring, Instance};

/// Allows an exchange when the two new edges have distinct colors, neither
/// of which is on the tour once the two old edges are gone.
pub struct RainbowRule<'a> {
    coloring: &'a Coloring,
    count: Vec<u32>,
}

impl<'a> RainbowRule<'a> {
    pub fn new(coloring: &'a Coloring, order: &[usize]) -> Self {
        let mut count = vec![0; coloring.q()];
        let n = order.len();
        for i in 0..n {
            count[coloring.color_of(order[i], order[(i + 1) % n]) as usize] += 1;
        }
        Self { coloring, count }
    }

    /// Whether every color on the tour occurs once.
    pub fn is_rainbow(&self) -> bool {
        self.count.iter().all(|&c| c <= 1)
    }
}

impl ExchangeRule for RainbowRule<'_> {
    fn allows(&self, p1: usize, s1: usize, p2: usize, s2: usize) -> bool {
        let col = |a, b| self.coloring.color_of(a, b);
        let (a, b) = (col(p1, p2), col(s1, s2));
        let (x, y) = (col(p1, s1), col(p2, s2));
        let after = |c: u32| self.count[c as usize] - u32::from(c == x) - u32::from(c == y);
        a != b && after(a) == 0 && after(b) == 0
    }

    fn applied(&mut self, p1: usize, s1: usize, p2: usize, s2: usize) {
        let col = |a, b| self.coloring.color_of(a, b) as usize;
        self.count[col(p1, s1)] -= 1;
        self.count[col(p2, s2)] -= 1;
        self.count[col(p1, p2)] += 1;
        self.count[col(s1, s2)] += 1;
    }
}

/// Improves a rainbow tour in place without breaking rainbowness.
pub fn rainbow_two_opt(
    instance: &Instance,
    coloring: &Coloring,
    order: &mut Vec<usize>,
    budget: TwoOptBudget,
) -> TwoOptReport {
    let mut rule = RainbowRule::new(coloring, order);
    let report = two_opt::improve(instance, order, &mut rule, budget);
    debug_assert!(rule.is_rainbow());
    report
}
