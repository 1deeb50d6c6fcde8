//! Dinic maximum flow over a [`Ring`] of capacities.

use std::collections::VecDeque;

use crate::weight::Ring;

pub struct FlowNetwork<R: Ring> {
    adj: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<R>,
}

impl<R: Ring> FlowNetwork<R> {
    pub fn new(nodes: usize) -> Self {
        FlowNetwork { adj: vec![Vec::new(); nodes], to: Vec::new(), cap: Vec::new() }
    }

    pub fn add_edge(&mut self, u: usize, v: usize, c: R) {
        self.adj[u].push(self.to.len());
        self.to.push(v);
        self.cap.push(c);
        self.adj[v].push(self.to.len());
        self.to.push(u);
        self.cap.push(R::zero());
    }

    fn positive(c: &R) -> bool {
        c.exceeds(&R::zero())
    }

    fn levels(&self, s: usize) -> Vec<usize> {
        let mut level = vec![usize::MAX; self.adj.len()];
        level[s] = 0;
        let mut q = VecDeque::from([s]);
        while let Some(u) = q.pop_front() {
            for &e in &self.adj[u] {
                let v = self.to[e];
                if level[v] == usize::MAX && Self::positive(&self.cap[e]) {
                    level[v] = level[u] + 1;
                    q.push_back(v);
                }
            }
        }
        level
    }

    fn augment(&mut self, u: usize, t: usize, limit: R, level: &[usize], it: &mut [usize]) -> R {
        if u == t {
            return limit;
        }
        while it[u] < self.adj[u].len() {
            let e = self.adj[u][it[u]];
            let v = self.to[e];
            if level[v] == level[u] + 1 && Self::positive(&self.cap[e]) {
                let push = if self.cap[e].exceeds(&limit) { limit.clone() } else { self.cap[e].clone() };
                let got = self.augment(v, t, push, level, it);
                if Self::positive(&got) {
                    self.cap[e] = self.cap[e].sub(&got);
                    self.cap[e ^ 1] = self.cap[e ^ 1].add(&got);
                    return got;
                }
            }
            it[u] += 1;
        }
        R::zero()
    }

    /// Value of a maximum `s`–`t` flow; `unbounded` must exceed every cut.
    pub fn max_flow(&mut self, s: usize, t: usize, unbounded: &R) -> R {
        let mut flow = R::zero();
        loop {
            let level = self.levels(s);
            if level[t] == usize::MAX {
                return flow;
            }
            let mut it = vec![0usize; self.adj.len()];
            loop {
                let f = self.augment(s, t, unbounded.clone(), &level, &mut it);
                if !Self::positive(&f) {
                    break;
                }
                flow.add_assign(&f);
            }
        }
    }

    /// Nodes reachable from `s` in the residual network.
    pub fn source_side(&self, s: usize) -> Vec<bool> {
        let level = self.levels(s);
        level.iter().map(|&l| l != usize::MAX).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn textbook_network() {
        let b = |x: i64| BigInt::from(x);
        let mut g = FlowNetwork::new(4);
        g.add_edge(0, 1, b(3));
        g.add_edge(0, 2, b(2));
        g.add_edge(1, 2, b(1));
        g.add_edge(1, 3, b(2));
        g.add_edge(2, 3, b(3));
        assert_eq!(g.max_flow(0, 3, &b(100)), b(5));
        let side = g.source_side(0);
        assert!(side[0] && !side[3]);
    }
}
