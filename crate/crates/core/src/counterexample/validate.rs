//! Structural validation of a labelled instance against the parameters.

use std::collections::{HashMap, HashSet};

use itertools::Itertools;

use crate::model::{Instance, Role, ValidationReport, VertexId};

use super::{expected_cell_counts, schedule, CounterexampleParams};

/// A cell as recovered from the path.
#[derive(Debug, Default)]
struct ParsedCell {
    joint: Option<VertexId>,
    head_one: VertexId,
    head: Vec<VertexId>,
    tail_one: Vec<VertexId>,
    tail: Vec<VertexId>,
    stabilizers: Vec<VertexId>,
}

struct Labels<'a> {
    i: &'a Instance,
    joint_of: Vec<Option<VertexId>>,
    branch_of: Vec<Option<VertexId>>,
}

impl Labels<'_> {
    fn role(&self, v: VertexId) -> Role {
        self.i.tree.role(v)
    }

    fn is_23(&self, v: VertexId) -> bool {
        matches!(self.role(v), Role::BVertex(2) | Role::BVertex(3))
    }
}

fn check_roles<'a>(i: &'a Instance, report: &mut ValidationReport) -> Labels<'a> {
    let t = &i.tree;
    let n = t.len();
    let mut joint_of = vec![None; n];
    let mut branch_of = vec![None; n];
    for v in t.bfs_order() {
        let role = t.role(v);
        let parent = t.parent(v);
        let expected = match parent.map(|p| t.role(p)) {
            None => matches!(role, Role::Root),
            Some(Role::Root) => matches!(role, Role::Joint),
            Some(Role::Joint) => matches!(role, Role::BVertex(1) | Role::Stabilizer),
            Some(Role::BVertex(1)) => matches!(role, Role::BVertex(2)),
            Some(Role::BVertex(2)) => matches!(role, Role::BVertex(3)),
            Some(_) => false,
        };
        // Stabilizers relabelled as something else show up as role errors
        // only when the label is impossible here; `Other` under a joint is
        // caught by the stabilizer totals instead.
        if !expected && !(role == Role::Other && parent.map(|p| t.role(p)) == Some(Role::Joint)) {
            report.push("role", format!("vertex {v} labelled {role:?} under {:?}", parent.map(|p| t.role(p))));
        }
        if let Some(p) = parent {
            joint_of[v] = if t.role(p) == Role::Joint { Some(p) } else { joint_of[p] };
            branch_of[v] = match role {
                Role::BVertex(1) => Some(v),
                Role::BVertex(_) => branch_of[p],
                _ => None,
            };
        }
    }
    Labels { i, joint_of, branch_of }
}

/// Splits the path into cells; anything that breaks the visit pattern is
/// reported as an interleaving violation.
fn parse_cells(l: &Labels<'_>, report: &mut ValidationReport) -> Vec<ParsedCell> {
    let order = l.i.path.order();
    let at = |k: usize| order.get(k).copied();
    let mut cells = Vec::new();
    let mut k = 0;
    while k < order.len() {
        let v = order[k];
        match l.role(v) {
            Role::Root | Role::Joint => {
                k += 1;
                continue;
            }
            Role::BVertex(1) => {}
            role => {
                report.push("interleaving", format!("path position {k}: {role:?} vertex {v} outside the cell pattern"));
                k += 1;
                continue;
            }
        }
        let mut cell = ParsedCell { head_one: v, ..Default::default() };
        k += 1;
        while let (Some(w), Some(o)) = (at(k), at(k + 1)) {
            if !(l.is_23(w) && l.role(o) == Role::BVertex(1)) {
                break;
            }
            cell.head.push(w);
            cell.tail_one.push(o);
            k += 2;
        }
        while let (Some(w), Some(o)) = (at(k), at(k + 1)) {
            if !(l.is_23(w) && l.role(o) == Role::Stabilizer) {
                break;
            }
            cell.tail.push(w);
            cell.stabilizers.push(o);
            k += 2;
        }
        cells.push(cell);
    }
    cells
}

fn sorted_by_depth(l: &Labels<'_>, vs: &[VertexId]) -> bool {
    vs.iter().map(|&v| l.role(v)).tuple_windows().all(|(a, b)| a <= b)
}

fn check_cell(l: &Labels<'_>, s: usize, idx: usize, c: &ParsedCell, report: &mut ValidationReport) {
    let t = &l.i.tree;
    let split = |vs: &[VertexId], d: u8| vs.iter().copied().filter(|&v| l.role(v) == Role::BVertex(d)).collect_vec();
    let (h2, h3) = (split(&c.head, 2), split(&c.head, 3));
    let (t2, t3) = (split(&c.tail, 2), split(&c.tail, 3));
    let counts = [1, h2.len(), h3.len(), c.tail_one.len(), t2.len(), t3.len(), c.stabilizers.len()];
    if counts != expected_cell_counts(s) {
        report.push("cell-counts", format!("cell {idx}: counts {counts:?}, expected {:?}", expected_cell_counts(s)));
    }
    if !sorted_by_depth(l, &c.head) || !sorted_by_depth(l, &c.tail) {
        report.push("interleaving", format!("cell {idx}: 3-vertices visited before 2-vertices"));
    }

    let members: Vec<VertexId> = std::iter::once(c.head_one)
        .chain(c.head.iter().copied())
        .chain(c.tail_one.iter().copied())
        .chain(c.tail.iter().copied())
        .chain(c.stabilizers.iter().copied())
        .collect();
    let joints: HashSet<Option<VertexId>> = members.iter().map(|&v| l.joint_of[v]).collect();
    if joints.len() != 1 {
        report.push("cell-joint", format!("cell {idx}: vertices below {} different joints", joints.len()));
    }
    let inside: HashSet<VertexId> = members.iter().copied().collect();
    let own = l.branch_of[c.head_one];

    let groups = h2.iter().map(|&v| l.branch_of[v]).counts();
    if groups.len() != s - 1 || groups.values().any(|&n| n != 3) || groups.contains_key(&own) {
        report.push("cell-head", format!("cell {idx}: head 2-vertices not three from each other branch"));
    }
    let head_branches: HashSet<Option<VertexId>> = groups.keys().copied().chain([own]).collect();
    let parents_ok = |vs: &[VertexId]| {
        let parents = vs.iter().map(|&v| t.parent(v)).collect_vec();
        parents.iter().all_unique() && parents.iter().flatten().all(|p| !inside.contains(p))
    };
    if !parents_ok(&h3) || h3.iter().any(|&v| l.branch_of[v] == own || !head_branches.contains(&l.branch_of[v])) {
        report.push("cell-head", format!("cell {idx}: head 3-vertices not one per foreign 2-vertex"));
    }

    let tail_branches: HashSet<Option<VertexId>> = c.tail_one.iter().map(|&v| l.branch_of[v]).collect();
    if tail_branches.len() != c.tail_one.len() || tail_branches.iter().any(|b| head_branches.contains(b)) {
        report.push("cell-tail", format!("cell {idx}: tail 1-vertices not from distinct tail branches"));
    }
    let groups = t2.iter().map(|&v| l.branch_of[v]).counts();
    if groups.values().any(|&n| n != 3) || groups.keys().any(|b| tail_branches.contains(b) || head_branches.contains(b)) {
        report.push("cell-tail", format!("cell {idx}: tail 2-vertices not three per foreign tail branch"));
    }
    if !parents_ok(&t3) {
        report.push("cell-tail", format!("cell {idx}: tail 3-vertices not one per foreign 2-vertex"));
    }
}

/// Re-derives cells from the role labels and the path, and checks them
/// against the parameters: cell contents, visit pattern, coverage,
/// stabilizer totals per joint, and the formation/EF/SEF visit order.
pub fn validate_structure(i: &Instance, p: &CounterexampleParams) -> ValidationReport {
    let mut report = ValidationReport::default();
    if let Err(e) = p.validate() {
        report.push("params", e.to_string());
        return report;
    }
    if !i.tree.has_roles() {
        report.push("role", "instance carries no role labels");
        return report;
    }
    let s = p.s as usize;
    let labels = check_roles(i, &mut report);
    let cells = parse_cells(&labels, &mut report);
    for (idx, c) in cells.iter().enumerate() {
        check_cell(&labels, s, idx, c, &mut report);
    }

    let mut covered = vec![false; i.len()];
    for c in &cells {
        let all = [c.head_one].into_iter().chain(c.head.iter().chain(&c.tail_one).chain(&c.tail).chain(&c.stabilizers).copied());
        for v in all {
            covered[v] = true;
        }
    }
    let uncovered = (0..i.len())
        .filter(|&v| matches!(i.tree.role(v), Role::BVertex(_) | Role::Stabilizer) && !covered[v])
        .count();
    if uncovered > 0 {
        report.push("uncovered", format!("{uncovered} branch vertices or stabilizers lie in no cell"));
    }

    let plan = schedule(p);
    let q = p.q as usize;
    let joints: Vec<VertexId> = (0..i.len()).filter(|&v| i.tree.role(v) == Role::Joint).collect();
    if joints.len() != q {
        report.push("joints", format!("{} joints, expected {q}", joints.len()));
        return report;
    }
    let mut cells = cells;
    for c in &mut cells {
        c.joint = labels.joint_of[c.head_one];
    }
    let stabs = (0..i.len())
        .filter(|&v| i.tree.role(v) == Role::Stabilizer)
        .filter_map(|v| i.tree.parent(v))
        .counts();
    let per_cell = expected_cell_counts(s)[6];
    for (j, &jv) in joints.iter().enumerate() {
        let expected = plan.cells_of_joint(j) * per_cell;
        let found = stabs.get(&jv).copied().unwrap_or(0);
        if found != expected {
            report.push("stabilizer-count", format!("joint {j}: {found} stabilizers, expected {expected}"));
        }
    }

    let index: HashMap<VertexId, usize> = joints.iter().enumerate().map(|(j, &v)| (v, j)).collect();
    let found: Vec<Option<usize>> = cells.iter().map(|c| c.joint.and_then(|v| index.get(&v).copied())).collect();
    let expected: Vec<Option<usize>> = plan.cells.iter().map(|c| Some(c.joint)).collect();
    if found.len() != expected.len() {
        report.push("schedule", format!("{} cells visited, expected {}", found.len(), expected.len()));
    } else if let Some(k) = (0..found.len()).find(|&k| found[k] != expected[k]) {
        let where_ = plan
            .formations
            .iter()
            .position(|f| f.cells.contains(&k))
            .map(|f| {
                let ef = &plan.efs[plan.formations[f].ef];
                format!("formation {f} (EF {} of SEF {})", plan.formations[f].ef, ef.sef)
            })
            .unwrap_or_else(|| "leftover cells".into());
        report.push(
            "schedule",
            format!("cell {k} in {where_} visits joint {:?}, expected {:?}", found[k], expected[k]),
        );
    }
    report
}
