//! Generator for the tree/path pair that admits no simultaneous embedding,
//! at desk scale (explicit instances) or paper scale (exact counts).
//!
//! Tree: a root whose children are joints; each joint carries branches
//! (a 1-vertex, 2-vertices below it, 3-vertices below those) and
//! stabilizer leaves. Branches of a joint are grouped into cell sets of
//! `s` cells each. Path: cells are visited in the order given by the
//! [`SequencePlan`]; the root is put first and the joints last.

mod paper;
mod plan;
mod validate;

use num_bigint::BigUint;
use num_traits::One;
use thiserror::Error;

use crate::model::{validate_instance, Instance, PathGraph, Role, RootedTree, VertexId};

pub use paper::{binomial, compute_paper_parameters, ramsey_r, PaperParameters};
pub use plan::{parse_plan, schedule, write_plan, CellRecord, EfRecord, FormationRecord, SefKind, SefRecord, SequencePlan};
pub use validate::validate_structure;

pub const DEFAULT_CAP: u64 = 2_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScaleMode {
    Desk,
    PaperSymbolic,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CounterexampleError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("instance would have {vertices} vertices, cap is {cap}")]
    CapExceeded { vertices: BigUint, cap: u64 },
    #[error("generated path shares tree edge ({0}, {1})")]
    SharedEdge(VertexId, VertexId),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CounterexampleParams {
    pub s: u64,
    pub x: u64,
    pub y: u64,
    /// Number of joints.
    pub q: u64,
    pub r1: u64,
    pub r2: u64,
    pub r3: u64,
    pub r4: u64,
    pub r5: u64,
    pub mode: ScaleMode,
    /// Vertex cap for desk mode.
    pub cap: u64,
}

impl CounterexampleParams {
    /// Small constants for explicit instances: two SEFs (one of each kind).
    pub fn reduced(s: u64, x: u64) -> Self {
        let (r3, r5) = (3, 3);
        CounterexampleParams {
            s,
            x,
            y: x,
            q: 2 * 4 * x * r3,
            r1: 2,
            r2: 1,
            r3,
            r4: r5 - r5 / r3,
            r5,
            mode: ScaleMode::Desk,
            cap: DEFAULT_CAP,
        }
    }

    /// The paper's constants, evaluated symbolically.
    pub fn paper(s: u64, x: u64, y: u64, q: u64) -> Self {
        CounterexampleParams {
            s,
            x,
            y,
            q,
            r1: 37,
            r2: 4,
            r3: 12,
            r4: 110,
            r5: 120,
            mode: ScaleMode::PaperSymbolic,
            cap: DEFAULT_CAP,
        }
    }

    pub fn joints_per_sef(&self) -> u64 {
        4 * self.x * self.r3
    }

    pub fn validate(&self) -> Result<(), CounterexampleError> {
        let fail = |m: String| Err(CounterexampleError::InvalidParams(m));
        let p = self;
        if [p.s, p.x, p.y, p.q, p.r1, p.r2, p.r3, p.r4, p.r5].contains(&0) {
            return fail("all parameters must be positive".into());
        }
        if p.s < 2 {
            return fail(format!("s = {} is below 2", p.s));
        }
        if p.y % p.x != 0 {
            return fail(format!("y = {} is not divisible by x = {}", p.y, p.x));
        }
        if p.r3 < 2 {
            return fail("an SEF needs at least two EF tuples".into());
        }
        if p.r5 % p.r3 != 0 {
            return fail(format!("R5 = {} is not a multiple of R3 = {}", p.r5, p.r3));
        }
        if p.r4 != p.r5 - p.r5 / p.r3 {
            return fail(format!("R4 = {} but single-defect SEFs use R5 - R5/R3 = {} EFs per tuple", p.r4, p.r5 - p.r5 / p.r3));
        }
        if p.q % p.joints_per_sef() != 0 {
            return fail(format!("q = {} is not a multiple of 4 x R3 = {}", p.q, p.joints_per_sef()));
        }
        Ok(())
    }
}

/// Exact sizes implied by the parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SizeReport {
    pub vertices: BigUint,
    pub tree_edges: BigUint,
    pub path_edges: BigUint,
    pub cells: BigUint,
    pub cell_sets: BigUint,
    pub formations: BigUint,
    pub extended_formations: BigUint,
    pub sefs: BigUint,
    pub cells_per_formation: BigUint,
    pub cells_per_joint_per_formation: BigUint,
    /// Vertices of one cell, stabilizers included.
    pub cell_vertices: BigUint,
}

fn big(v: u64) -> BigUint {
    BigUint::from(v)
}

/// Closed-form counts, computed without building anything.
pub fn size_report(p: &CounterexampleParams) -> Result<SizeReport, CounterexampleError> {
    p.validate()?;
    let s = big(p.s);
    let s1 = big(p.s - 1);
    let s2 = big(p.s - 2);
    let one = BigUint::one();
    let sefs = big(p.q / p.joints_per_sef());
    let singles = (&sefs + &one) / 2u32;
    let doubles = &sefs / 2u32;
    let v1 = big(p.r5 - p.r5 / p.r3);
    let v2 = big(p.r5 - (2 * (p.r5 / p.r3)).min(p.r5));
    let need = big((p.y - p.y / p.x) * p.r1 * p.r2);
    let sets_per_ef = (&need + &s - &one) / &s;
    let sets_single = (&v1 * &sets_per_ef).max(one.clone());
    let sets_double = (&v2 * &sets_per_ef).max(one.clone());
    let cell_sets = big(p.joints_per_sef()) * (&singles * sets_single + &doubles * sets_double);
    let branch = &one + big(3) * &s1 * &s1;
    let branches_per_set = &s + big(3) * &s * &s1 * &s1;
    let stabs_per_cell = big(9) * s1.pow(4);
    let set_vertices = &branches_per_set * &branch + &s * &stabs_per_cell;
    let vertices = &one + big(p.q) + &cell_sets * &set_vertices;
    let efs = big(p.r3) * (&singles * &v1 + &doubles * &v2);
    let formations = &efs * big(p.y * (p.x - 1));
    let cell_vertices = &one
        + big(3) * &s1
        + big(3) * &s2 * &s1
        + big(3) * &s1 * &s1
        + big(9) * s1.pow(3)
        + big(9) * &s2 * s1.pow(3)
        + &stabs_per_cell;
    Ok(SizeReport {
        tree_edges: &vertices - &one,
        path_edges: &vertices - &one,
        vertices,
        cells: &cell_sets * &s,
        cell_sets,
        formations,
        extended_formations: efs,
        sefs,
        cells_per_formation: big(4 * p.r1 * p.r2),
        cells_per_joint_per_formation: big(p.r1 * p.r2),
        cell_vertices,
    })
}

/// Vertices of one cell, grouped as in the path's visit pattern.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellLayout {
    pub joint: usize,
    pub set: usize,
    pub r: usize,
    pub head_one: VertexId,
    pub head_two: Vec<VertexId>,
    pub head_three: Vec<VertexId>,
    pub tail_one: Vec<VertexId>,
    pub tail_two: Vec<VertexId>,
    pub tail_three: Vec<VertexId>,
    pub stabilizers: Vec<VertexId>,
}

impl CellLayout {
    /// Head 1-vertex; each head 2-/3-vertex followed by a tail 1-vertex;
    /// each tail 2-/3-vertex followed by a stabilizer.
    pub fn path(&self) -> Vec<VertexId> {
        let mut out = vec![self.head_one];
        let head = self.head_two.iter().chain(&self.head_three);
        for (w, t) in head.zip(&self.tail_one) {
            out.extend([*w, *t]);
        }
        let tail = self.tail_two.iter().chain(&self.tail_three);
        for (w, t) in tail.zip(&self.stabilizers) {
            out.extend([*w, *t]);
        }
        out
    }

    pub fn counts(&self) -> [usize; 7] {
        [
            1,
            self.head_two.len(),
            self.head_three.len(),
            self.tail_one.len(),
            self.tail_two.len(),
            self.tail_three.len(),
            self.stabilizers.len(),
        ]
    }
}

/// Expected [`CellLayout::counts`] for a given `s`.
pub fn expected_cell_counts(s: usize) -> [usize; 7] {
    let (a, b) = (s - 1, s - 2);
    [1, 3 * a, 3 * b * a, 3 * a * a, 9 * a * a * a, 9 * b * a * a * a, 9 * a * a * a * a]
}

#[derive(Debug, Clone)]
struct Branch {
    one: VertexId,
    twos: Vec<VertexId>,
    /// Children of each 2-vertex.
    threes: Vec<Vec<VertexId>>,
}

#[derive(Debug, Clone)]
struct CellSet {
    head: Vec<Branch>,
    tail: Vec<Vec<Branch>>,
    stabilizers: Vec<Vec<VertexId>>,
}

struct TreeBuilder {
    parent: Vec<Option<VertexId>>,
    roles: Vec<Role>,
}

impl TreeBuilder {
    fn add(&mut self, parent: Option<VertexId>, role: Role) -> VertexId {
        self.parent.push(parent);
        self.roles.push(role);
        self.parent.len() - 1
    }

    fn branch(&mut self, joint: VertexId, s: usize) -> Branch {
        let one = self.add(Some(joint), Role::BVertex(1));
        let twos: Vec<VertexId> = (0..3 * (s - 1)).map(|_| self.add(Some(one), Role::BVertex(2))).collect();
        let threes = twos.iter().map(|&w| (0..s - 2).map(|_| self.add(Some(w), Role::BVertex(3))).collect()).collect();
        Branch { one, twos, threes }
    }

    fn cell_set(&mut self, joint: VertexId, s: usize) -> CellSet {
        let head = (0..s).map(|_| self.branch(joint, s)).collect();
        let tail = (0..3 * (s - 1) * (s - 1)).map(|_| (0..s).map(|_| self.branch(joint, s)).collect()).collect();
        let per_cell = 9 * (s - 1).pow(4);
        let stabilizers =
            (0..s).map(|_| (0..per_cell).map(|_| self.add(Some(joint), Role::Stabilizer)).collect()).collect();
        CellSet { head, tail, stabilizers }
    }
}

/// Share of cell `r` in a group of `s` branches: the 1-vertex of branch
/// `r`, three 2-vertices of every other branch, and one child of every
/// 2-vertex that belongs neither to cell `r` nor to branch `r`. Vertices
/// are handed out in index order to cells in index order.
fn distribute(branches: &[Branch], r: usize) -> (VertexId, Vec<VertexId>, Vec<VertexId>) {
    let s = branches.len();
    let mut twos = Vec::new();
    let mut threes = Vec::new();
    for (k, b) in branches.iter().enumerate().filter(|(k, _)| *k != r) {
        let slot = if r < k { r } else { r - 1 };
        twos.extend_from_slice(&b.twos[3 * slot..3 * slot + 3]);
        for (j, children) in b.threes.iter().enumerate() {
            let owner = if j / 3 < k { j / 3 } else { j / 3 + 1 };
            if owner == r {
                continue;
            }
            let pos = (0..s).filter(|&c| c != k && c != owner).position(|c| c == r);
            threes.extend(pos.map(|p| children[p]));
        }
    }
    (branches[r].one, twos, threes)
}

fn layout(set: &CellSet, joint: usize, set_index: usize, r: usize) -> CellLayout {
    let (head_one, head_two, head_three) = distribute(&set.head, r);
    let mut tail_one = Vec::new();
    let mut tail_two = Vec::new();
    let mut tail_three = Vec::new();
    for group in &set.tail {
        let (o, t, h) = distribute(group, r);
        tail_one.push(o);
        tail_two.extend(t);
        tail_three.extend(h);
    }
    CellLayout {
        joint,
        set: set_index,
        r,
        head_one,
        head_two,
        head_three,
        tail_one,
        tail_two,
        tail_three,
        stabilizers: set.stabilizers[r].clone(),
    }
}

/// A desk-scale instance with its visit program and cell layouts (in
/// visit order).
#[derive(Debug, Clone)]
pub struct Generated {
    pub instance: Instance,
    pub plan: SequencePlan,
    pub cells: Vec<CellLayout>,
}

#[derive(Debug, Clone)]
pub enum BuildOutput {
    Desk(Box<Generated>),
    Symbolic(SizeReport),
}

pub fn build_instance(p: &CounterexampleParams) -> Result<BuildOutput, CounterexampleError> {
    match p.mode {
        ScaleMode::Desk => build_desk(p).map(|g| BuildOutput::Desk(Box::new(g))),
        ScaleMode::PaperSymbolic => size_report(p).map(BuildOutput::Symbolic),
    }
}

pub fn build_desk(p: &CounterexampleParams) -> Result<Generated, CounterexampleError> {
    let sizes = size_report(p)?;
    if sizes.vertices > big(p.cap) {
        return Err(CounterexampleError::CapExceeded { vertices: sizes.vertices, cap: p.cap });
    }
    let s = p.s as usize;
    let q = p.q as usize;
    let mut plan = schedule(p);
    let mut tb = TreeBuilder { parent: Vec::new(), roles: Vec::new() };
    let root = tb.add(None, Role::Root);
    let joints: Vec<VertexId> = (0..q).map(|_| tb.add(Some(root), Role::Joint)).collect();
    let sets: Vec<Vec<CellSet>> = (0..q)
        .map(|j| (0..plan.sets_per_joint[j]).map(|_| tb.cell_set(joints[j], s)).collect())
        .collect();

    let mut order = vec![root];
    let mut cells = Vec::with_capacity(plan.cells.len());
    for rec in &mut plan.cells {
        let cell = layout(&sets[rec.joint][rec.set], rec.joint, rec.set, rec.r);
        rec.start = order.len();
        order.extend(cell.path());
        rec.end = order.len();
        cells.push(cell);
    }
    let last_joint = order.last().and_then(|&v| tb.parent[v]).map_or(0, |j| j - joints[0]);
    order.extend((1..=q).map(|i| joints[(last_joint + i) % q]));

    let tree = RootedTree::with_roles(tb.parent, tb.roles);
    let mut instance = Instance::new(tree, PathGraph::new(order));
    instance.edge_disjoint_required = true;
    let report = validate_instance(&instance);
    if let Some(v) = report.violations.first() {
        let e = instance.path.edges().into_iter().find(|&(a, b)| {
            instance.tree.parent(a) == Some(b) || instance.tree.parent(b) == Some(a)
        });
        return match e {
            Some((a, b)) => Err(CounterexampleError::SharedEdge(a, b)),
            None => Err(CounterexampleError::InvalidParams(format!("generated instance invalid: {v}"))),
        };
    }
    Ok(Generated { instance, plan, cells })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::tree_depth;
    use num_traits::ToPrimitive;

    #[test]
    fn s2_cells_have_no_three_vertices() {
        let g = build_desk(&CounterexampleParams::reduced(2, 1)).unwrap();
        for c in &g.cells {
            assert_eq!(c.counts(), [1, 3, 0, 3, 9, 0, 9]);
        }
    }

    #[test]
    fn cell_counts_match_formulas() {
        for s in [2, 3] {
            for x in [1, 2] {
                let g = build_desk(&CounterexampleParams::reduced(s, x)).unwrap();
                for c in &g.cells {
                    assert_eq!(c.counts(), expected_cell_counts(s as usize));
                }
            }
        }
    }

    #[test]
    fn vertex_count_matches_closed_form() {
        for s in [2, 3] {
            for x in [1, 2] {
                let p = CounterexampleParams::reduced(s, x);
                let g = build_desk(&p).unwrap();
                let r = size_report(&p).unwrap();
                assert_eq!(r.vertices.to_usize(), Some(g.instance.len()));
                assert_eq!(r.cells.to_usize(), Some(g.cells.len()));
                assert_eq!(r.formations.to_usize(), Some(g.plan.formations.len()));
                assert_eq!(r.extended_formations.to_usize(), Some(g.plan.efs.len()));
            }
        }
    }

    #[test]
    fn depth_follows_s() {
        let g = build_desk(&CounterexampleParams::reduced(3, 1)).unwrap();
        assert_eq!(tree_depth(&g.instance.tree), 4);
        let g = build_desk(&CounterexampleParams::reduced(2, 1)).unwrap();
        assert_eq!(tree_depth(&g.instance.tree), 3);
    }

    #[test]
    fn paper_formation_size() {
        let r = size_report(&CounterexampleParams::paper(3, 2, 2, 96)).unwrap();
        assert_eq!(r.cells_per_formation, big(592));
        assert_eq!(r.cells_per_joint_per_formation, big(148));
    }

    #[test]
    fn cap_is_enforced() {
        let mut p = CounterexampleParams::reduced(3, 2);
        p.cap = 1000;
        assert!(matches!(build_desk(&p), Err(CounterexampleError::CapExceeded { .. })));
    }

    #[test]
    fn invalid_params_are_rejected() {
        let mut p = CounterexampleParams::reduced(2, 2);
        p.y = 3;
        assert!(p.validate().is_err());
        let mut p = CounterexampleParams::reduced(2, 2);
        p.r4 += 1;
        assert!(p.validate().is_err());
        let mut p = CounterexampleParams::reduced(2, 2);
        p.q += 1;
        assert!(p.validate().is_err());
    }

    #[test]
    fn plan_round_trips() {
        let g = build_desk(&CounterexampleParams::reduced(2, 2)).unwrap();
        let text = write_plan(&g.plan);
        assert_eq!(parse_plan(&text).unwrap(), g.plan);
    }
}
