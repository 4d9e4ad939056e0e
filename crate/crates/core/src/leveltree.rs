//! Level trees, level and region-level drawings, and exhaustive oracles for
//! their planarity.

use std::collections::HashMap;

use thiserror::Error;

use crate::geom::int::{self, IPoint};
use crate::geom::{Line, Point, Scalar};
use crate::model::{Drawing, Edge, ModelError, RootedTree, ValidationReport, VertexId};
use crate::planarity::{check_drawing, CrossingReport, PlanarityError, Strategy};
use crate::search::{solve, Outcome, Problem};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LevelError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Planarity(#[from] PlanarityError),
    #[error("invalid leveling: {0}")]
    InvalidLeveling(String),
    #[error("level {level} holds {count} vertices but the grid is only {width} wide")]
    LevelOverfull { level: usize, count: usize, width: usize },
    #[error("invalid region system: {0}")]
    InvalidRegions(String),
    #[error("candidate point {0} is not strictly inside region {1}")]
    CandidateOutsideRegion(String, usize),
    #[error("search budget exceeded")]
    BudgetExceeded,
    #[error("search returned a drawing that fails re-verification")]
    Unverified,
}

/// A tree with a leveling `phi: V -> 1..=k`; edge endpoints lie on distinct levels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelTree {
    tree: RootedTree,
    phi: Vec<usize>,
    k: usize,
}

impl LevelTree {
    pub fn new(tree: RootedTree, phi: Vec<usize>, k: usize) -> Result<Self, LevelError> {
        if phi.len() != tree.len() {
            return Err(LevelError::InvalidLeveling(format!("{} levels for {} vertices", phi.len(), tree.len())));
        }
        if let Some((v, &l)) = phi.iter().enumerate().find(|(_, &l)| l == 0 || l > k) {
            return Err(LevelError::InvalidLeveling(format!("vertex {v} on level {l} outside 1..={k}")));
        }
        if let Some((u, v)) = tree.edges().into_iter().find(|&(u, v)| phi[u] == phi[v]) {
            return Err(LevelError::InvalidLeveling(format!("edge ({u}, {v}) inside level {}", phi[u])));
        }
        Ok(LevelTree { tree, phi, k })
    }

    pub fn tree(&self) -> &RootedTree {
        &self.tree
    }

    pub fn phi(&self) -> &[usize] {
        &self.phi
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.phi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phi.is_empty()
    }

    /// Vertices per level, index 0 unused.
    pub fn levels(&self) -> Vec<Vec<VertexId>> {
        let mut out = vec![Vec::new(); self.k + 1];
        for (v, &l) in self.phi.iter().enumerate() {
            out[l].push(v);
        }
        out
    }

    /// True when every edge joins adjacent levels.
    pub fn is_proper(&self) -> bool {
        self.tree.edges().iter().all(|&(u, v)| self.phi[u].abs_diff(self.phi[v]) == 1)
    }
}

/// x-coordinate per vertex; vertex `v` is drawn at `(x[v], phi(v))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelDrawing {
    pub x: Vec<Scalar>,
}

impl LevelDrawing {
    pub fn to_drawing(&self, t: &LevelTree) -> Result<Drawing, LevelError> {
        if self.x.len() < t.len() {
            return Err(ModelError::UndrawnVertex(self.x.len()).into());
        }
        let pts = (0..t.len())
            .map(|v| Point::new(self.x[v].clone(), Scalar::from_int(t.phi[v] as i64)))
            .collect();
        Ok(Drawing::new(pts)?)
    }
}

pub fn check_level_drawing(t: &LevelTree, d: &LevelDrawing) -> Result<CrossingReport, LevelError> {
    Ok(check_drawing(&t.tree.edges(), &d.to_drawing(t)?, Strategy::Sweep)?)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LevelOutcome {
    Found(LevelDrawing),
    ExhaustedNone,
}

/// Exhaustive search over injective x-assignments from `1..=width` per level.
///
/// Only one of each pair of mirror-image drawings is explored.
pub fn search_level_planar(t: &LevelTree, width: usize, budget: u64) -> Result<LevelOutcome, LevelError> {
    let levels = t.levels();
    if let Some((level, vs)) = levels.iter().enumerate().find(|(_, vs)| vs.len() > width) {
        return Err(LevelError::LevelOverfull { level, count: vs.len(), width });
    }
    let w = width as i64;
    let pts: Vec<IPoint> = (1..=t.k as i64).flat_map(|l| (1..=w).map(move |x| (x, l))).collect();
    let idx = |x: i64, l: usize| ((l - 1) * width + (x - 1) as usize) as u32;
    let domains = t.phi.iter().map(|&l| (1..=w).map(|x| idx(x, l)).collect()).collect();
    let mirror = pts.iter().map(|&(x, l)| idx(w + 1 - x, l as usize)).collect();
    let problem = Problem { pts: &pts, domains, graphs: vec![t.tree.edges()], mirror: Some(mirror) };
    match solve(&problem, budget) {
        Outcome::Found(assign) => {
            let d = LevelDrawing { x: assign.iter().map(|&c| Scalar::from_int(pts[c as usize].0)).collect() };
            if !check_level_drawing(t, &d)?.planar {
                return Err(LevelError::Unverified);
            }
            Ok(LevelOutcome::Found(d))
        }
        Outcome::Exhausted { .. } => Ok(LevelOutcome::ExhaustedNone),
        Outcome::BudgetExceeded => Err(LevelError::BudgetExceeded),
    }
}

/// Combinatorial level-planarity test: long edges are subdivided on every
/// level they pass, and per-level vertex orders are searched so that no two
/// edges between consecutive levels are inverted. Exact over the continuum.
pub fn level_planar_by_orders(t: &LevelTree) -> bool {
    let (levels, edges) = subdivide(t);
    let n = levels.iter().map(Vec::len).sum::<usize>();
    let mut up = vec![Vec::new(); n];
    let mut has_down = vec![false; n];
    for &(a, b) in &edges {
        up[b].push(a);
        has_down[a] = true;
    }
    let mut search = OrderSearch { levels, up, has_down, pos: vec![usize::MAX; n], memo: HashMap::new() };
    search.level(1)
}

struct OrderSearch {
    levels: Vec<Vec<usize>>,
    /// Neighbours one level above.
    up: Vec<Vec<usize>>,
    has_down: Vec<bool>,
    pos: Vec<usize>,
    /// Levels below `l` only see the order of level `l` restricted to
    /// vertices with lower neighbours, so that order is the memo key.
    memo: HashMap<(usize, Vec<usize>), bool>,
}

impl OrderSearch {
    fn level(&mut self, l: usize) -> bool {
        if l == self.levels.len() {
            return true;
        }
        let mut placed = Vec::with_capacity(self.levels[l].len());
        let mut free = self.levels[l].clone();
        self.extend(l, &mut placed, &mut free)
    }

    fn extend(&mut self, l: usize, placed: &mut Vec<usize>, free: &mut Vec<usize>) -> bool {
        if free.is_empty() {
            let key: Vec<usize> = placed.iter().copied().filter(|&v| self.has_down[v]).collect();
            if let Some(&r) = self.memo.get(&(l, key.clone())) {
                return r;
            }
            let r = self.level(l + 1);
            self.memo.insert((l, key), r);
            return r;
        }
        for i in 0..free.len() {
            let w = free[i];
            // w goes right of everything placed: none of its upper neighbours
            // may lie left of an upper neighbour of a placed vertex.
            let ok = placed
                .iter()
                .all(|&u| self.up[u].iter().all(|&a| self.up[w].iter().all(|&b| self.pos[a] <= self.pos[b])));
            if !ok {
                continue;
            }
            self.pos[w] = placed.len();
            placed.push(w);
            free.remove(i);
            if self.extend(l, placed, free) {
                return true;
            }
            free.insert(i, w);
            placed.pop();
            self.pos[w] = usize::MAX;
        }
        false
    }
}

/// Proper subdivision: returns vertices per level (index 0 unused) and edges
/// `(upper-level vertex, lower-level vertex)` between adjacent levels.
fn subdivide(t: &LevelTree) -> (Vec<Vec<usize>>, Vec<Edge>) {
    let mut levels = t.levels();
    let mut next = t.len();
    let mut edges = Vec::new();
    for (u, v) in t.tree.edges() {
        let (a, b) = if t.phi[u] < t.phi[v] { (u, v) } else { (v, u) };
        let mut prev = a;
        for l in t.phi[a] + 1..t.phi[b] {
            levels[l].push(next);
            edges.push((prev, next));
            prev = next;
            next += 1;
        }
        edges.push((prev, b));
    }
    (levels, edges)
}

/// Underlying tree of the Lemma-1 gadget; vertex `i` is `v_{i+1}`.
pub fn gadget_tree() -> RootedTree {
    RootedTree::from_parents(vec![None, Some(0), Some(0), Some(0), Some(1), Some(2), Some(3), Some(1), Some(2), Some(3)])
}

/// The 48 automorphisms of the gadget tree as vertex maps: the three
/// root subtrees may be permuted and each pair of grandchildren swapped.
pub fn gadget_automorphisms() -> Vec<[usize; 10]> {
    let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let mut out = Vec::with_capacity(48);
    for p in perms {
        for flips in 0..8usize {
            let mut m = [0; 10];
            for i in 0..3 {
                let flip = flips >> i & 1 == 1;
                m[1 + i] = 1 + p[i];
                let (a, b) = if flip { (7, 4) } else { (4, 7) };
                m[4 + i] = a + p[i];
                m[7 + i] = b + p[i];
            }
            out.push(m);
        }
    }
    out
}

/// All valid 4-levelings of the gadget, one per class under `l -> 5 - l`,
/// in lexicographic order.
pub fn gadget_levelings() -> Vec<Vec<usize>> {
    let tree = gadget_tree();
    let mut out = Vec::new();
    let mut phi = vec![0; tree.len()];
    fn rec(tree: &RootedTree, phi: &mut Vec<usize>, v: usize, out: &mut Vec<Vec<usize>>) {
        if v == phi.len() {
            if *phi <= reversed(phi) {
                out.push(phi.clone());
            }
            return;
        }
        for l in 1..=4 {
            if tree.parent(v).is_some_and(|p| phi[p] == l) {
                continue;
            }
            phi[v] = l;
            rec(tree, phi, v + 1, out);
        }
    }
    rec(&tree, &mut phi, 0, &mut out);
    out
}

fn reversed(phi: &[usize]) -> Vec<usize> {
    phi.iter().map(|&l| 5 - l).collect()
}

/// Images of `phi` under every gadget automorphism and level reversal.
fn orbit(phi: &[usize]) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = gadget_automorphisms()
        .iter()
        .flat_map(|m| {
            let mut img = vec![0; phi.len()];
            for (v, &l) in phi.iter().enumerate() {
                img[m[v]] = l;
            }
            [reversed(&img), img]
        })
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Least member of each orbit of valid 4-levelings under gadget
/// automorphisms and level reversal.
pub fn gadget_orbit_representatives() -> Vec<Vec<usize>> {
    gadget_levelings().into_iter().filter(|phi| orbit(phi)[0] == *phi).collect()
}

/// Result of the leveling scan behind [`lemma1_tree`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelingScan {
    pub tree: RootedTree,
    /// Level-nonplanar 4-levelings, one per reversal class, sorted.
    pub nonplanar: Vec<Vec<usize>>,
    /// Orbit representatives that were searched, and the exhausted ones.
    pub representatives: usize,
    pub certified: Vec<Vec<usize>>,
    pub grid_width: usize,
}

/// The Lemma-1 gadget with the 4-levelings under which it is level nonplanar.
///
/// Levelings related by a tree automorphism or by level reversal have the
/// same answer, so one representative per orbit is run through
/// [`search_level_planar`] and exhausted orbits are expanded.
pub fn lemma1_scan(grid_width: usize, budget: u64) -> Result<LevelingScan, LevelError> {
    let tree = gadget_tree();
    let reps = gadget_orbit_representatives();
    let results = reps
        .iter()
        .map(|phi| {
            let t = LevelTree::new(tree.clone(), phi.clone(), 4)?;
            Ok(matches!(search_level_planar(&t, grid_width, budget)?, LevelOutcome::ExhaustedNone))
        })
        .collect::<Result<Vec<bool>, LevelError>>()?;
    let mut nonplanar: Vec<Vec<usize>> = reps
        .iter()
        .zip(&results)
        .filter(|(_, &none)| none)
        .flat_map(|(phi, _)| orbit(phi))
        .filter(|phi| *phi <= reversed(phi))
        .collect();
    nonplanar.sort();
    nonplanar.dedup();
    Ok(LevelingScan {
        tree,
        nonplanar,
        representatives: reps.len(),
        certified: reps.iter().zip(&results).filter(|(_, &none)| none).map(|(phi, _)| phi.clone()).collect(),
        grid_width,
    })
}

pub fn lemma1_tree() -> (RootedTree, Vec<Vec<usize>>) {
    let scan = lemma1_scan(10, u64::MAX).expect("gadget scan runs within an unbounded budget");
    (scan.tree, scan.nonplanar)
}

/// Relabel levels of `phi` by every permutation of `1..=4` and return the
/// first relabelling that admits a planar level drawing at `grid_width`.
pub fn planar_relabelling(phi: &[usize], grid_width: usize, budget: u64) -> Result<Option<(Vec<usize>, LevelDrawing)>, LevelError> {
    let tree = gadget_tree();
    let mut perm = [1, 2, 3, 4];
    for _ in 0..24 {
        next_permutation(&mut perm);
        let relabelled: Vec<usize> = phi.iter().map(|&l| perm[l - 1]).collect();
        let t = LevelTree::new(tree.clone(), relabelled.clone(), 4)?;
        if let LevelOutcome::Found(d) = search_level_planar(&t, grid_width, budget)? {
            return Ok(Some((relabelled, d)));
        }
    }
    Ok(None)
}

fn next_permutation(a: &mut [usize]) {
    let Some(i) = (0..a.len() - 1).rev().find(|&i| a[i] < a[i + 1]) else {
        a.reverse();
        return;
    };
    let j = (i + 1..a.len()).rev().find(|&j| a[j] > a[i]).expect("successor exists");
    a.swap(i, j);
    a[i + 1..].reverse();
}

/// Pairwise parallel lines `l_1..l_k` bounding regions `r_1..r_{k+1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegionSystem {
    pub lines: Vec<Line>,
}

impl RegionSystem {
    pub fn new(lines: Vec<Line>) -> Self {
        RegionSystem { lines }
    }

    /// Lines `y = 1, ..., y = k`.
    pub fn horizontal(k: usize) -> Self {
        RegionSystem { lines: (1..=k as i64).map(|c| Line::horizontal(Scalar::from_int(c))).collect() }
    }

    /// Region index in `1..=k+1` holding `p`, or `None` when `p` lies on a
    /// line. Meaningful only for a valid system.
    pub fn region_of(&self, p: &Point) -> Option<usize> {
        let sides: Vec<i8> = self.lines.iter().map(|l| l.side(p)).collect();
        if sides.contains(&0) {
            return None;
        }
        let rising = self.increasing();
        // Count the lines p is already past.
        let past = sides.iter().filter(|&&s| (s > 0) == rising).count();
        Some(past + 1)
    }

    fn increasing(&self) -> bool {
        match self.lines.as_slice() {
            [a, b, ..] => a.coefficients().2 < b.coefficients().2,
            _ => true,
        }
    }

    /// Candidate points strictly inside each region: `per_side` offsets
    /// across by `per_side` positions along, kept a quarter of the gap away
    /// from the bounding lines. Outer regions reuse the neighbouring gap.
    pub fn candidate_grid(&self, per_side: usize) -> Result<Vec<Vec<Point>>, LevelError> {
        let report = validate_region_system(self);
        if !report.is_clean() {
            return Err(LevelError::InvalidRegions(report.violations[0].to_string()));
        }
        if self.lines.is_empty() || per_side == 0 {
            return Err(LevelError::InvalidRegions("need at least one line and one candidate".into()));
        }
        let (a, b, _) = self.lines[0].coefficients();
        let (a, b) = (a.clone(), b.clone());
        let norm = &a * &a + &b * &b;
        let mut cs: Vec<Scalar> = self.lines.iter().map(|l| l.coefficients().2.clone()).collect();
        if !self.increasing() {
            cs.reverse();
        }
        let gap = |i: usize| -> Scalar {
            if cs.len() == 1 {
                Scalar::one()
            } else {
                &cs[i.min(cs.len() - 2) + 1] - &cs[i.min(cs.len() - 2)]
            }
        };
        let k = cs.len();
        let mut bands: Vec<(Scalar, Scalar)> = Vec::with_capacity(k + 1);
        bands.push((&cs[0] - &gap(0), cs[0].clone()));
        for i in 1..k {
            bands.push((cs[i - 1].clone(), cs[i].clone()));
        }
        bands.push((cs[k - 1].clone(), &cs[k - 1] + &gap(k - 1)));
        if !self.increasing() {
            bands.reverse();
        }
        let m = per_side as i64;
        let along = |i: i64| Scalar::from_ratio(2 * i - (m - 1), 2);
        let grid = bands
            .iter()
            .map(|(lo, hi)| {
                let width = hi - lo;
                let margin = &width / &Scalar::from_int(4);
                let inner = &width - &(&margin + &margin);
                let mut pts = Vec::new();
                for i in 0..m {
                    let v = if m == 1 {
                        lo + &(&width / &Scalar::from_int(2))
                    } else {
                        &(lo + &margin) + &(&inner * &Scalar::from_ratio(i, m - 1))
                    };
                    let base = Point::new(&a * &v / &norm, &b * &v / &norm);
                    for j in 0..m {
                        let t = along(j);
                        pts.push(Point::new(&base.x + &(&b * &t), &base.y - &(&a * &t)));
                    }
                }
                pts
            })
            .collect();
        Ok(grid)
    }
}

/// Lines must be pairwise parallel (distinct non-parallel lines cross) and
/// listed with strictly monotone offsets, so that a segment from `r_i` to
/// `r_h` cuts exactly `l_i..l_{h-1}` in order.
pub fn validate_region_system(rs: &RegionSystem) -> ValidationReport {
    let mut report = ValidationReport::default();
    for (i, l) in rs.lines.iter().enumerate() {
        for (j, m) in rs.lines.iter().enumerate().skip(i + 1) {
            if !l.is_parallel(m) {
                report.push("lines-cross", format!("l{} and l{} cross", i + 1, j + 1));
            } else if l == m {
                report.push("lines-coincide", format!("l{} and l{} coincide", i + 1, j + 1));
            }
        }
    }
    if !report.is_clean() {
        return report;
    }
    let cs: Vec<&Scalar> = rs.lines.iter().map(|l| l.coefficients().2).collect();
    let up = cs.windows(2).all(|w| w[0] < w[1]);
    let down = cs.windows(2).all(|w| w[0] > w[1]);
    if !(up || down) {
        report.push("lines-out-of-order", "offsets are not monotone along the list");
    }
    report
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridEvidence {
    pub candidates_per_region: Vec<usize>,
    pub nodes: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RegionOutcome {
    Found(Drawing),
    /// No planar drawing uses only the given candidates; not a proof over the continuum.
    ExhaustedNoneOverGrid(GridEvidence),
}

/// Exhaustive search for a planar region-level drawing whose level-`i`
/// vertices use the candidates of `grid[i - 1]` (region `r_i`).
pub fn search_region_level_planar(
    t: &LevelTree,
    rs: &RegionSystem,
    grid: &[Vec<Point>],
    budget: u64,
) -> Result<RegionOutcome, LevelError> {
    let report = validate_region_system(rs);
    if !report.is_clean() {
        return Err(LevelError::InvalidRegions(report.violations[0].to_string()));
    }
    if t.k > rs.lines.len() + 1 || grid.len() < t.k {
        return Err(LevelError::InvalidRegions(format!(
            "{} levels need {} regions and candidate lists",
            t.k, t.k
        )));
    }
    let mut all: Vec<Point> = Vec::new();
    let mut ranges = Vec::new();
    for (r, pts) in grid.iter().enumerate().take(t.k) {
        let start = all.len() as u32;
        for p in pts {
            if rs.region_of(p) != Some(r + 1) {
                return Err(LevelError::CandidateOutsideRegion(p.to_string(), r + 1));
            }
            all.push(p.clone());
        }
        ranges.push(start..all.len() as u32);
    }
    let ipts = int::scale_to_integers(&all)
        .ok_or_else(|| LevelError::InvalidRegions("candidate coordinates too large".into()))?;
    let domains = t.phi.iter().map(|&l| ranges[l - 1].clone().collect()).collect();
    let mirror = mirror_map(rs, &all);
    let problem = Problem { pts: &ipts, domains, graphs: vec![t.tree.edges()], mirror };
    match solve(&problem, budget) {
        Outcome::Found(assign) => {
            let d = Drawing::new(assign.iter().map(|&c| all[c as usize].clone()).collect())?;
            let ok = check_drawing(&t.tree.edges(), &d, Strategy::Naive)?.planar
                && (0..t.len()).all(|v| rs.region_of(&d.points()[v]) == Some(t.phi[v]));
            if !ok {
                return Err(LevelError::Unverified);
            }
            Ok(RegionOutcome::Found(d))
        }
        Outcome::Exhausted { nodes } => Ok(RegionOutcome::ExhaustedNoneOverGrid(GridEvidence {
            candidates_per_region: grid.iter().take(t.k).map(Vec::len).collect(),
            nodes,
        })),
        Outcome::BudgetExceeded => Err(LevelError::BudgetExceeded),
    }
}

/// Keep the levelings of the gadget that admit no planar region-level
/// drawing on `rs.candidate_grid(m)` for every `m` in `resolutions`, checked
/// coarse to fine so that most levelings are discarded cheaply.
pub fn region_screen(
    levelings: &[Vec<usize>],
    rs: &RegionSystem,
    resolutions: &[usize],
    budget: u64,
) -> Result<Vec<Vec<usize>>, LevelError> {
    let tree = gadget_tree();
    let mut alive = levelings.to_vec();
    for &m in resolutions {
        let grid = rs.candidate_grid(m)?;
        let mut next = Vec::new();
        for phi in alive {
            let t = LevelTree::new(tree.clone(), phi.clone(), 4)?;
            if let RegionOutcome::ExhaustedNoneOverGrid(_) = search_region_level_planar(&t, rs, &grid, budget)? {
                next.push(phi);
            }
        }
        alive = next;
    }
    Ok(alive)
}

/// Reflection across the line through the origin perpendicular to the
/// region lines, when it maps the candidate set onto itself.
fn mirror_map(rs: &RegionSystem, pts: &[Point]) -> Option<Vec<u32>> {
    let (a, b, _) = rs.lines.first()?.coefficients();
    let norm = a * a + b * b;
    let two = Scalar::from_int(2);
    pts.iter()
        .map(|p| {
            let k = &(&two * &(&(a * &p.x) + &(b * &p.y))) / &norm;
            let q = Point::new(&(&k * a) - &p.x, &(&k * b) - &p.y);
            pts.iter().position(|r| *r == q).map(|i| i as u32)
        })
        .collect()
}
