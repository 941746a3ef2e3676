//! Maximum flow with exact rational capacities and the flow-based dual
//! membership test for cones defined by a directed graph.

use std::collections::VecDeque;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::rational::{Rational, RationalVector};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Capacity {
    Finite(Rational),
    Infinite,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowNetwork {
    pub nodes: usize,
    pub source: usize,
    pub sink: usize,
    pub edges: Vec<(usize, usize, Capacity)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FlowValue {
    Finite(Rational),
    Infinite,
}

#[derive(Debug, Clone)]
pub struct FlowResult {
    pub value: FlowValue,
    /// Flow on each input edge (empty when the value is infinite).
    pub flow: Vec<Rational>,
    /// Source side of a minimum cut.
    pub source_side: Vec<bool>,
}

impl FlowNetwork {
    pub fn new(nodes: usize, source: usize, sink: usize) -> Self {
        assert!(source != sink && source < nodes && sink < nodes, "bad source/sink");
        FlowNetwork { nodes, source, sink, edges: Vec::new() }
    }

    pub fn add_edge(&mut self, from: usize, to: usize, cap: Capacity) {
        if let Capacity::Finite(c) = &cap {
            assert!(!c.is_negative(), "negative capacity");
        }
        self.edges.push((from, to, cap));
    }

    /// Capacity of the cut `(side, complement)`; `None` when infinite.
    pub fn cut_capacity(&self, source_side: &[bool]) -> Option<Rational> {
        let mut total = Rational::zero();
        for (u, v, c) in &self.edges {
            if source_side[*u] && !source_side[*v] {
                match c {
                    Capacity::Finite(x) => total += x,
                    Capacity::Infinite => return None,
                }
            }
        }
        Some(total)
    }
}

/// Edmonds-Karp on the residual graph. Infinite capacity is a sentinel: a
/// source-sink path made only of infinite edges makes the value infinite.
pub fn maxflow(net: &FlowNetwork) -> FlowResult {
    let n = net.nodes;
    // Residual arcs: (to, cap (None = infinite), reverse arc index).
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut to = Vec::new();
    let mut cap: Vec<Option<Rational>> = Vec::new();
    let mut edge_arc = Vec::new();
    for (u, v, c) in &net.edges {
        edge_arc.push(to.len());
        adj[*u].push(to.len());
        to.push(*v);
        cap.push(match c {
            Capacity::Finite(x) => Some(x.clone()),
            Capacity::Infinite => None,
        });
        adj[*v].push(to.len());
        to.push(*u);
        cap.push(Some(Rational::zero()));
    }
    let positive = |c: &Option<Rational>| c.as_ref().is_none_or(|x| x.is_positive());

    // An all-infinite path means unbounded flow.
    {
        let mut seen = vec![false; n];
        seen[net.source] = true;
        let mut queue = VecDeque::from([net.source]);
        while let Some(u) = queue.pop_front() {
            for &a in &adj[u] {
                if a % 2 == 0 && cap[a].is_none() && !seen[to[a]] {
                    seen[to[a]] = true;
                    queue.push_back(to[a]);
                }
            }
        }
        if seen[net.sink] {
            return FlowResult { value: FlowValue::Infinite, flow: Vec::new(), source_side: seen };
        }
    }

    let mut total = Rational::zero();
    loop {
        let mut parent: Vec<Option<usize>> = vec![None; n];
        let mut seen = vec![false; n];
        seen[net.source] = true;
        let mut queue = VecDeque::from([net.source]);
        while let Some(u) = queue.pop_front() {
            if u == net.sink {
                break;
            }
            for &a in &adj[u] {
                let v = to[a];
                if !seen[v] && positive(&cap[a]) {
                    seen[v] = true;
                    parent[v] = Some(a);
                    queue.push_back(v);
                }
            }
        }
        if !seen[net.sink] {
            let flow = net
                .edges
                .iter()
                .zip(&edge_arc)
                .map(|(_, &a)| cap[a ^ 1].clone().expect("reverse arcs are finite"))
                .collect();
            return FlowResult { value: FlowValue::Finite(total), flow, source_side: seen };
        }
        let mut bottleneck: Option<Rational> = None;
        let mut v = net.sink;
        while let Some(a) = parent[v] {
            if let Some(c) = &cap[a] {
                bottleneck = Some(match bottleneck {
                    None => c.clone(),
                    Some(b) if *c < b => c.clone(),
                    Some(b) => b,
                });
            }
            v = to[a ^ 1];
        }
        let delta = bottleneck.expect("path with a finite arc");
        let mut v = net.sink;
        while let Some(a) = parent[v] {
            if let Some(c) = cap[a].as_mut() {
                *c -= &delta;
            }
            if let Some(c) = cap[a ^ 1].as_mut() {
                *c += &delta;
            }
            v = to[a ^ 1];
        }
        total += delta;
    }
}

/// Directed graph on vertices `0..n`. An edge `(s1, s2)` encodes the
/// inequality `x_{s2} <= x_{s1}` of the cone `Q_G`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DirectedGraph {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

impl DirectedGraph {
    /// Closed under successors: `s1 in S` and `s1 -> s2` imply `s2 in S`.
    pub fn is_admissible(&self, subset: &[bool]) -> bool {
        self.edges.iter().all(|&(a, b)| !subset[a] || subset[b])
    }

    /// Halfspace form of `Q_G`: one normal `e_{s1} - e_{s2}` per edge.
    pub fn cone_normals(&self) -> Vec<RationalVector> {
        self.edges
            .iter()
            .map(|&(a, b)| {
                let mut v = crate::rational::zeros(self.n);
                v[a] += Rational::from_integer(1.into());
                v[b] -= Rational::from_integer(1.into());
                v
            })
            .collect()
    }
}

/// Membership in `Q_G*` by brute force over admissible subsets:
/// `sum x = 0` and `sum_{S'} x <= 0` for every admissible `S'`.
pub fn dual_membership_by_subsets(g: &DirectedGraph, x: &[Rational]) -> bool {
    assert_eq!(x.len(), g.n);
    assert!(g.n < 31, "subset enumeration limited to 30 vertices");
    if !crate::rational::sum(x).is_zero() {
        return false;
    }
    let mut subset = vec![false; g.n];
    for mask in 0u32..(1 << g.n) {
        for (k, s) in subset.iter_mut().enumerate() {
            *s = mask & (1 << k) != 0;
        }
        if !g.is_admissible(&subset) {
            continue;
        }
        let total = x.iter().zip(&subset).filter(|(_, &s)| s).fold(Rational::zero(), |acc, (v, _)| acc + v);
        if total.is_positive() {
            return false;
        }
    }
    true
}

/// Network of the max-flow argument: source `D -> s` with capacity `x_s + M`,
/// `s -> A` with capacity `M`, and infinite capacity along graph edges, where
/// `M = max(0, -min x)`. Returns the network and `nM`.
pub fn membership_network(g: &DirectedGraph, x: &[Rational]) -> (FlowNetwork, Rational) {
    let n = g.n;
    let big_m = x.iter().fold(Rational::zero(), |acc, v| if -v > acc { -v } else { acc });
    let (src, sink) = (n, n + 1);
    let mut net = FlowNetwork::new(n + 2, src, sink);
    for (s, xs) in x.iter().enumerate() {
        net.add_edge(src, s, Capacity::Finite(xs + &big_m));
        net.add_edge(s, sink, Capacity::Finite(big_m.clone()));
    }
    for &(a, b) in &g.edges {
        net.add_edge(a, b, Capacity::Infinite);
    }
    let target = big_m * Rational::from_integer((n as i64).into());
    (net, target)
}

/// Membership in `Q_G*` through the max-flow construction: `sum x = 0` and
/// the maximum flow saturates at `nM`.
pub fn dual_membership_by_flow(g: &DirectedGraph, x: &[Rational]) -> bool {
    assert_eq!(x.len(), g.n);
    if !crate::rational::sum(x).is_zero() {
        return false;
    }
    let (net, target) = membership_network(g, x);
    match maxflow(&net).value {
        FlowValue::Finite(v) => v == target,
        FlowValue::Infinite => false,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MembershipMethod {
    Subsets,
    Flow,
}

/// Both methods are available; callers pick one, tests require agreement.
pub fn graph_cone_dual_membership(g: &DirectedGraph, x: &[Rational], method: MembershipMethod) -> bool {
    match method {
        MembershipMethod::Subsets => dual_membership_by_subsets(g, x),
        MembershipMethod::Flow => dual_membership_by_flow(g, x),
    }
}
