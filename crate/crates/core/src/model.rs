//! Trees, paths, instances and drawings over a shared dense vertex set.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::geom::Point;

pub type VertexId = usize;
pub type Edge = (VertexId, VertexId);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("vertex {0} has no position")]
    UndrawnVertex(VertexId),
    #[error("vertices {0} and {1} share a point")]
    CoincidentPoints(VertexId, VertexId),
    #[error("tree depth {depth} exceeds {limit}")]
    DepthExceeded { depth: usize, limit: usize },
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
}

/// Role labels carried by the counterexample generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Role {
    Root,
    Joint,
    Stabilizer,
    /// B-vertex at distance 1, 2 or 3 from its joint.
    BVertex(u8),
    Other,
}

impl Role {
    pub fn code(self) -> char {
        match self {
            Role::Root => 'R',
            Role::Joint => 'J',
            Role::Stabilizer => 'S',
            Role::BVertex(1) => '1',
            Role::BVertex(2) => '2',
            Role::BVertex(3) => '3',
            Role::BVertex(_) | Role::Other => 'O',
        }
    }

    pub fn from_code(c: char) -> Option<Role> {
        Some(match c {
            'R' => Role::Root,
            'J' => Role::Joint,
            'S' => Role::Stabilizer,
            '1' => Role::BVertex(1),
            '2' => Role::BVertex(2),
            '3' => Role::BVertex(3),
            'O' => Role::Other,
            _ => return None,
        })
    }
}

/// Rooted tree stored as a parent array. Construction never fails; use
/// [`validate_instance`] or [`RootedTree::check`] to find structural problems.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedTree {
    parent: Vec<Option<VertexId>>,
    roles: Vec<Role>,
}

impl RootedTree {
    pub fn from_parents(parent: Vec<Option<VertexId>>) -> Self {
        let roles = vec![Role::Other; parent.len()];
        RootedTree { parent, roles }
    }

    pub fn with_roles(parent: Vec<Option<VertexId>>, roles: Vec<Role>) -> Self {
        RootedTree { parent, roles }
    }

    /// Path `0 - 1 - ... - (n-1)` rooted at 0.
    pub fn path(n: usize) -> Self {
        RootedTree::from_parents((0..n).map(|v| v.checked_sub(1)).collect())
    }

    /// Star with `leaves` leaves rooted at its center 0.
    pub fn star(leaves: usize) -> Self {
        let mut p = vec![None];
        p.extend(std::iter::repeat_n(Some(0), leaves));
        RootedTree::from_parents(p)
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn parent(&self, v: VertexId) -> Option<VertexId> {
        self.parent[v]
    }

    pub fn parents(&self) -> &[Option<VertexId>] {
        &self.parent
    }

    pub fn roles(&self) -> &[Role] {
        &self.roles
    }

    pub fn role(&self, v: VertexId) -> Role {
        self.roles[v]
    }

    pub fn set_role(&mut self, v: VertexId, role: Role) {
        self.roles[v] = role;
    }

    pub fn has_roles(&self) -> bool {
        self.roles.iter().any(|r| *r != Role::Other)
    }

    /// The first parentless vertex.
    pub fn root(&self) -> Option<VertexId> {
        self.parent.iter().position(|p| p.is_none())
    }

    /// Edges as `(parent, child)` pairs in child order.
    pub fn edges(&self) -> Vec<Edge> {
        self.parent
            .iter()
            .enumerate()
            .filter_map(|(v, p)| p.map(|p| (p, v)))
            .collect()
    }

    pub fn children(&self) -> Vec<Vec<VertexId>> {
        let mut ch = vec![Vec::new(); self.len()];
        for (v, p) in self.parent.iter().enumerate() {
            if let Some(p) = p {
                if *p < self.len() {
                    ch[*p].push(v);
                }
            }
        }
        ch
    }

    pub fn degree(&self) -> Vec<usize> {
        let mut deg = vec![0; self.len()];
        for (p, c) in self.edges() {
            if p < self.len() {
                deg[p] += 1;
                deg[c] += 1;
            }
        }
        deg
    }

    /// Structural problems: parent out of range, root count, cycles, disconnection.
    pub fn check(&self) -> Vec<Violation> {
        let n = self.len();
        let mut out = Vec::new();
        if n == 0 {
            out.push(Violation::new("empty", "instance has no vertices"));
            return out;
        }
        if self.roles.len() != n {
            out.push(Violation::new("roles-length", format!("{} roles for {} vertices", self.roles.len(), n)));
        }
        for (v, p) in self.parent.iter().enumerate() {
            match p {
                Some(p) if *p >= n => out.push(Violation::new("parent-range", format!("parent of {v} is {p}"))),
                Some(p) if *p == v => out.push(Violation::new("tree-cycle", format!("vertex {v} is its own parent"))),
                _ => {}
            }
        }
        let roots: Vec<_> = (0..n).filter(|&v| self.parent[v].is_none()).collect();
        if roots.len() != 1 {
            out.push(Violation::new("root-count", format!("{} roots, expected exactly one", roots.len())));
        }
        if !out.iter().any(|v| v.code == "parent-range") {
            if let Some(&root) = roots.first() {
                let depth = self.depths_from(root);
                let unreached = depth.iter().filter(|d| d.is_none()).count();
                if unreached > 0 {
                    out.push(Violation::new(
                        "tree-disconnected",
                        format!("{unreached} vertices not reachable from root {root} (cycle or second component)"),
                    ));
                }
            }
        }
        out
    }

    fn depths_from(&self, root: VertexId) -> Vec<Option<usize>> {
        let ch = self.children();
        let mut depth = vec![None; self.len()];
        depth[root] = Some(0);
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &c in &ch[u] {
                if depth[c].is_none() {
                    depth[c] = Some(depth[u].unwrap() + 1);
                    queue.push_back(c);
                }
            }
        }
        depth
    }

    /// Distance of every vertex from the root (valid trees only).
    pub fn depths(&self) -> Vec<usize> {
        let root = self.root().expect("valid tree has a root");
        self.depths_from(root).into_iter().map(|d| d.expect("connected tree")).collect()
    }

    /// Root first, then breadth-first in child order.
    pub fn bfs_order(&self) -> Vec<VertexId> {
        let Some(root) = self.root() else { return Vec::new() };
        let ch = self.children();
        let mut order = vec![root];
        let mut i = 0;
        while i < order.len() {
            order.extend(ch[order[i]].iter().copied());
            i += 1;
        }
        order
    }
}

/// Maximum root-to-vertex distance. Bends along a root path are `depth - 1`.
pub fn tree_depth(t: &RootedTree) -> usize {
    if t.is_empty() {
        return 0;
    }
    t.depths().into_iter().max().unwrap_or(0)
}

/// A simple spanning path given as a vertex sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathGraph {
    order: Vec<VertexId>,
}

impl PathGraph {
    pub fn new(order: Vec<VertexId>) -> Self {
        PathGraph { order }
    }

    pub fn identity(n: usize) -> Self {
        PathGraph { order: (0..n).collect() }
    }

    pub fn order(&self) -> &[VertexId] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn edges(&self) -> Vec<Edge> {
        self.order.windows(2).map(|w| (w[0], w[1])).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub tree: RootedTree,
    pub path: PathGraph,
    pub edge_disjoint_required: bool,
}

impl Instance {
    pub fn new(tree: RootedTree, path: PathGraph) -> Self {
        Instance { tree, path, edge_disjoint_required: false }
    }

    pub fn len(&self) -> usize {
        self.tree.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tree.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub code: &'static str,
    pub detail: String,
}

impl Violation {
    pub fn new(code: &'static str, detail: impl Into<String>) -> Self {
        Violation { code, detail: detail.into() }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.code, self.detail)
    }
}

/// Violations found by a validator; empty means valid.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn push(&mut self, code: &'static str, detail: impl Into<String>) {
        self.violations.push(Violation::new(code, detail));
    }

    pub fn has(&self, code: &str) -> bool {
        self.violations.iter().any(|v| v.code == code)
    }
}

fn norm(e: Edge) -> Edge {
    if e.0 <= e.1 {
        e
    } else {
        (e.1, e.0)
    }
}

pub fn validate_instance(i: &Instance) -> ValidationReport {
    let mut report = ValidationReport { violations: i.tree.check() };
    let n = i.tree.len();
    let order = i.path.order();
    if order.len() != n {
        report.push("path-length", format!("path has {} entries, tree has {} vertices", order.len(), n));
    }
    let mut seen = vec![false; n];
    let mut repeated = Vec::new();
    for &v in order {
        if v >= n {
            report.push("path-range", format!("path vertex {v} out of range"));
        } else if seen[v] {
            repeated.push(v);
        } else {
            seen[v] = true;
        }
    }
    if !repeated.is_empty() {
        report.push("path-not-simple", format!("path not simple: repeats {repeated:?}"));
    }
    let missing = seen.iter().filter(|s| !**s).count();
    if missing > 0 {
        report.push("path-not-spanning", format!("path misses {missing} vertices"));
    }
    if i.edge_disjoint_required {
        let tree_edges: HashSet<Edge> = i.tree.edges().into_iter().map(norm).collect();
        for e in i.path.edges() {
            if tree_edges.contains(&norm(e)) {
                report.push("shared-edge", format!("shared edge ({}, {})", e.0, e.1));
            }
        }
    }
    report
}

/// Injective placement of every vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Drawing {
    pos: Vec<Point>,
}

impl Drawing {
    pub fn new(pos: Vec<Point>) -> Result<Self, ModelError> {
        let mut idx: Vec<usize> = (0..pos.len()).collect();
        idx.sort_by(|&a, &b| pos[a].cmp(&pos[b]));
        for w in idx.windows(2) {
            if pos[w[0]] == pos[w[1]] {
                let (a, b) = (w[0].min(w[1]), w[0].max(w[1]));
                return Err(ModelError::CoincidentPoints(a, b));
            }
        }
        Ok(Drawing { pos })
    }

    pub fn len(&self) -> usize {
        self.pos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pos.is_empty()
    }

    pub fn get(&self, v: VertexId) -> Option<&Point> {
        self.pos.get(v)
    }

    pub fn points(&self) -> &[Point] {
        &self.pos
    }

    pub fn point(&self, v: VertexId) -> Result<&Point, ModelError> {
        self.pos.get(v).ok_or(ModelError::UndrawnVertex(v))
    }

    /// Apply `f` to every point; fails if the image is not injective.
    pub fn map_points(&self, f: impl Fn(&Point) -> Point) -> Result<Drawing, ModelError> {
        Drawing::new(self.pos.iter().map(f).collect())
    }
}
