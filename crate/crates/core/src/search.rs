//! Backtracking engine shared by the exhaustive placement oracles.
//!
//! Every vertex has a domain of candidate points. After each placement the
//! domains of the remaining vertices are filtered so that every value left is
//! consistent with everything already placed (forward checking), and the
//! vertex with the smallest domain is placed next.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering::Relaxed};

use rayon::prelude::*;

use crate::geom::int::{on_segment, relation, IPoint};
use crate::model::{Edge, VertexId};

pub(crate) struct Problem<'a> {
    pub pts: &'a [IPoint],
    pub domains: Vec<Vec<u32>>,
    pub graphs: Vec<Vec<Edge>>,
    /// Involution on candidate indices mapping solutions to solutions; only
    /// one representative of each mirrored pair is tried for the first vertex.
    pub mirror: Option<Vec<u32>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Outcome {
    Found(Vec<u32>),
    Exhausted { nodes: u64 },
    BudgetExceeded,
}

enum Branch {
    Found,
    Exhausted,
    Exceeded,
}

struct State<'a> {
    pts: &'a [IPoint],
    /// adj[g][v]: neighbours of v in graph g.
    adj: Vec<Vec<Vec<VertexId>>>,
    at: Vec<Option<u32>>,
    placed: Vec<Vec<(u32, u32)>>,
    placed_pts: Vec<u32>,
    words: usize,
    /// Domain bitsets, `words` u64 per vertex.
    dom: Vec<u64>,
    /// Saved domain snapshots, one per open placement.
    trail: Vec<u64>,
    fresh: Vec<Vec<(u32, u32)>>,
    /// `before[v]`: vertices that must take a smaller candidate than `v`;
    /// `after[v]` the converse. Links interchangeable vertices.
    before: Vec<Vec<VertexId>>,
    after: Vec<Vec<VertexId>>,
    nodes: u64,
    budget: u64,
}

impl<'a> State<'a> {
    fn new(p: &'a Problem<'_>, budget: u64) -> Self {
        let n = p.domains.len();
        let adj: Vec<Vec<Vec<VertexId>>> = p
            .graphs
            .iter()
            .map(|edges| {
                let mut adj = vec![Vec::new(); n];
                for &(u, v) in edges {
                    adj[u].push(v);
                    adj[v].push(u);
                }
                adj
            })
            .collect();
        let words = p.pts.len().div_ceil(64).max(1);
        let mut dom = vec![0u64; n * words];
        for (v, d) in p.domains.iter().enumerate() {
            for &c in d {
                dom[v * words + c as usize / 64] |= 1 << (c % 64);
            }
        }
        let (before, after) = interchangeable(p, &adj);
        State {
            pts: p.pts,
            before,
            after,
            adj,
            at: vec![None; n],
            placed: vec![Vec::new(); p.graphs.len()],
            placed_pts: Vec::new(),
            words,
            dom,
            trail: Vec::new(),
            fresh: vec![Vec::new(); p.graphs.len()],
            nodes: 0,
            budget,
        }
    }

    fn size(&self, v: VertexId) -> u32 {
        self.dom[v * self.words..(v + 1) * self.words].iter().map(|w| w.count_ones()).sum()
    }

    fn values(&self, v: VertexId) -> Vec<u32> {
        let mut out = Vec::new();
        for (i, &w) in self.dom[v * self.words..(v + 1) * self.words].iter().enumerate() {
            let mut w = w;
            while w != 0 {
                out.push(i as u32 * 64 + w.trailing_zeros());
                w &= w - 1;
            }
        }
        out
    }

    fn placed_degree(&self, v: VertexId) -> usize {
        self.adj.iter().map(|adj| adj[v].iter().filter(|&&u| self.at[u].is_some()).count()).sum()
    }

    fn pick(&self) -> Option<VertexId> {
        (0..self.at.len())
            .filter(|&v| self.at[v].is_none())
            .min_by_key(|&v| (self.size(v), std::cmp::Reverse(self.placed_degree(v)), v))
    }

    /// Whether candidate `q` stays consistent for unplaced `w` after `v` went to `c`.
    fn keeps(&self, w: VertexId, q: u32, v: VertexId, c: u32) -> bool {
        if q == c || (q < c && self.before[w].contains(&v)) || (q > c && self.after[w].contains(&v)) {
            return false;
        }
        let pts = self.pts;
        let pq = pts[q as usize];
        for es in &self.fresh {
            for &(a, b) in es {
                if on_segment(pq, pts[a as usize], pts[b as usize]) {
                    return false;
                }
            }
        }
        let pc = pts[c as usize];
        for (g, adj) in self.adj.iter().enumerate() {
            for &u in &adj[w] {
                let Some(cu) = self.at[u] else { continue };
                let pu = pts[cu as usize];
                if u == v {
                    // New candidate edge from v: test against everything placed.
                    for &(a, b) in &self.placed[g] {
                        if relation(pu, pq, pts[a as usize], pts[b as usize]).is_violation() {
                            return false;
                        }
                    }
                    for &r in &self.placed_pts {
                        if r != cu && on_segment(pts[r as usize], pu, pq) {
                            return false;
                        }
                    }
                } else {
                    // Older candidate edge: only what v just added can break it.
                    if on_segment(pc, pu, pq) {
                        return false;
                    }
                    for &(a, b) in &self.fresh[g] {
                        if relation(pu, pq, pts[a as usize], pts[b as usize]).is_violation() {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// Place `v` on `c` and filter the other domains. Returns false on a wipe-out.
    fn assign(&mut self, v: VertexId, c: u32) -> bool {
        self.at[v] = Some(c);
        for g in 0..self.adj.len() {
            self.fresh[g].clear();
            for i in 0..self.adj[g][v].len() {
                let u = self.adj[g][v][i];
                if let Some(cu) = self.at[u] {
                    self.fresh[g].push((cu, c));
                }
            }
            let (placed, fresh) = (&mut self.placed[g], &self.fresh[g]);
            placed.extend_from_slice(fresh);
        }
        self.placed_pts.push(c);

        for w in 0..self.at.len() {
            if self.at[w].is_some() {
                continue;
            }
            let mut any = false;
            for i in 0..self.words {
                let mut bits = self.dom[w * self.words + i];
                let mut keep = bits;
                while bits != 0 {
                    let b = bits.trailing_zeros();
                    bits &= bits - 1;
                    if !self.keeps(w, i as u32 * 64 + b, v, c) {
                        keep &= !(1 << b);
                    }
                }
                self.dom[w * self.words + i] = keep;
                any |= keep != 0;
            }
            if !any {
                return false;
            }
        }
        true
    }

    fn search(&mut self) -> Branch {
        let Some(v) = self.pick() else {
            return Branch::Found;
        };
        let candidates = self.values(v);
        self.try_values(v, &candidates)
    }

    fn try_values(&mut self, v: VertexId, candidates: &[u32]) -> Branch {
        for &c in candidates {
            if self.nodes >= self.budget {
                return Branch::Exceeded;
            }
            self.nodes += 1;
            let mark = self.trail.len();
            self.trail.extend_from_slice(&self.dom);
            let saved_edges: Vec<usize> = self.placed.iter().map(Vec::len).collect();
            if self.assign(v, c) {
                match self.search() {
                    Branch::Found => return Branch::Found,
                    Branch::Exceeded => return Branch::Exceeded,
                    Branch::Exhausted => {}
                }
            }
            self.at[v] = None;
            self.placed_pts.pop();
            for (es, len) in self.placed.iter_mut().zip(saved_edges) {
                es.truncate(len);
            }
            self.dom.copy_from_slice(&self.trail[mark..]);
            self.trail.truncate(mark);
        }
        Branch::Exhausted
    }
}

/// Vertices with equal domains and equal neighbourhoods in every graph can
/// swap places in any solution; chain each such class by candidate order.
fn interchangeable(p: &Problem<'_>, adj: &[Vec<Vec<VertexId>>]) -> (Vec<Vec<VertexId>>, Vec<Vec<VertexId>>) {
    let n = p.domains.len();
    let key = |v: VertexId| {
        let mut nb: Vec<Vec<VertexId>> = adj.iter().map(|a| a[v].clone()).collect();
        nb.iter_mut().for_each(|l| l.sort_unstable());
        let mut dom = p.domains[v].clone();
        dom.sort_unstable();
        (nb, dom)
    };
    let keys: Vec<_> = (0..n).map(key).collect();
    let mut before = vec![Vec::new(); n];
    let mut after = vec![Vec::new(); n];
    for v in 0..n {
        if let Some(u) = (0..v).rev().find(|&u| keys[u] == keys[v]) {
            before[v].push(u);
            after[u].push(v);
        }
    }
    (before, after)
}

/// Run the search. `budget` bounds the placements tried below each value of
/// the first vertex, so the outcome is independent of thread scheduling.
pub(crate) fn solve(p: &Problem<'_>, budget: u64) -> Outcome {
    let root = State::new(p, budget);
    let Some(first) = root.pick() else {
        return Outcome::Found(Vec::new());
    };
    // The mirror reduction is only combined with the interchange ordering
    // when the first vertex is not itself interchangeable.
    let mirror = p.mirror.as_ref().filter(|_| root.before[first].is_empty() && root.after[first].is_empty());
    let firsts: Vec<u32> = root
        .values(first)
        .into_iter()
        .filter(|&c| mirror.is_none_or(|m| c <= m[c as usize]))
        .collect();
    let exceeded = AtomicBool::new(false);
    let nodes = AtomicU64::new(0);
    let found = firsts.par_iter().find_map_first(|&c| {
        let mut st = State::new(p, budget);
        let branch = st.try_values(first, &[c]);
        nodes.fetch_add(st.nodes, Relaxed);
        match branch {
            Branch::Found => Some(st.at.iter().map(|a| a.expect("complete")).collect()),
            Branch::Exceeded => {
                exceeded.store(true, Relaxed);
                None
            }
            Branch::Exhausted => None,
        }
    });
    match found {
        Some(assign) => Outcome::Found(assign),
        None if exceeded.load(Relaxed) => Outcome::BudgetExceeded,
        None => Outcome::Exhausted { nodes: nodes.load(Relaxed) },
    }
}
