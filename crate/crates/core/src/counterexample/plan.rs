//! The cell-visit program of the path: formations, extended formations
//! (EFs) and sequences of extended formations (SEFs), plus the `.plan`
//! sidecar format.

use std::fmt::Write as _;

use crate::format::FormatError;

use super::CounterexampleParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SefKind {
    /// One tuple missing per repetition.
    Single,
    /// Two consecutive tuples missing per repetition.
    Double,
}

impl SefKind {
    fn name(self) -> &'static str {
        match self {
            SefKind::Single => "single",
            SefKind::Double => "double",
        }
    }
}

/// A cell is the `r`-th cell of the `set`-th cell set of a joint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CellRecord {
    pub joint: usize,
    pub set: usize,
    pub r: usize,
    /// Half-open range of path positions; zero until the path is built.
    pub start: usize,
    pub end: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormationRecord {
    pub ef: usize,
    /// Index of the 4-tuple inside its EF.
    pub tuple: usize,
    /// Cell indices, in visit order.
    pub cells: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EfRecord {
    pub sef: usize,
    /// Index of the EF tuple inside its SEF.
    pub tuple: usize,
    /// How many EFs of this tuple came before.
    pub ordinal: usize,
    pub joints: Vec<usize>,
    /// Missing 4-tuple per repetition.
    pub defects: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SefRecord {
    pub kind: SefKind,
    pub joints: Vec<usize>,
    /// Missing EF tuples per repetition.
    pub skipped: Vec<Vec<usize>>,
}

/// Cells are listed in visit order; the first `planned` belong to
/// formations and the rest are leftover cells routed afterwards.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequencePlan {
    pub params: CounterexampleParams,
    pub cells: Vec<CellRecord>,
    pub planned: usize,
    pub formations: Vec<FormationRecord>,
    pub efs: Vec<EfRecord>,
    pub sefs: Vec<SefRecord>,
    /// Cell sets allocated per joint.
    pub sets_per_joint: Vec<usize>,
}

impl SequencePlan {
    pub fn cells_of_joint(&self, joint: usize) -> usize {
        self.sets_per_joint[joint] * self.params.s as usize
    }
}

struct Builder {
    s: usize,
    cells: Vec<CellRecord>,
    sets: Vec<usize>,
    used: Vec<Vec<bool>>,
}

impl Builder {
    fn fresh_set(&mut self, joint: usize) -> usize {
        self.sets[joint] += 1;
        self.used.push(vec![false; self.s]);
        self.sets[joint] - 1
    }
}

/// Joint-local cursor into the current cell set of an EF.
#[derive(Clone, Copy)]
struct Cursor {
    set: Option<usize>,
    next: usize,
}

/// Derives the visit program from the parameters alone.
pub fn schedule(p: &CounterexampleParams) -> SequencePlan {
    let s = p.s as usize;
    let (x, y) = (p.x as usize, p.y as usize);
    let (r1, r2, r3, r5) = (p.r1 as usize, p.r2 as usize, p.r3 as usize, p.r5 as usize);
    let q = p.q as usize;
    let per_sef = 4 * x * r3;
    let mut b = Builder { s, cells: Vec::new(), sets: vec![0; q], used: Vec::new() };
    // Global id of (joint, set) is needed to mark use; keep a map.
    let mut set_ids: Vec<Vec<usize>> = vec![Vec::new(); q];
    let mut formations = Vec::new();
    let mut efs = Vec::new();
    let mut sefs = Vec::new();

    for g in 0..q / per_sef {
        let kind = if g % 2 == 0 { SefKind::Single } else { SefKind::Double };
        let base = g * per_sef;
        let mut ef_count = vec![0usize; r3];
        let mut skipped_all = Vec::new();
        for k in 0..r5 {
            let m = k % r3;
            let skipped = match kind {
                SefKind::Single => vec![m],
                SefKind::Double => vec![m, (m + 1) % r3],
            };
            for i in (0..r3).filter(|i| !skipped.contains(i)) {
                let joints: Vec<usize> = (base + 4 * x * i..base + 4 * x * (i + 1)).collect();
                let ef = efs.len();
                let mut cursors = vec![Cursor { set: None, next: 0 }; 4 * x];
                let defects: Vec<usize> = (0..y).map(|k| k % x).collect();
                for &d in &defects {
                    for m in (0..x).filter(|&m| m != d) {
                        let mut cells = Vec::new();
                        let mut take = |h: usize| {
                            let local = 4 * m + h;
                            let joint = joints[local];
                            let c = &mut cursors[local];
                            if c.set.is_none() || c.next == s {
                                let set = b.fresh_set(joint);
                                set_ids[joint].push(b.used.len() - 1);
                                *c = Cursor { set: Some(set), next: 0 };
                            }
                            let set = c.set.unwrap_or_default();
                            b.used[set_ids[joint][set]][c.next] = true;
                            cells.push(b.cells.len());
                            b.cells.push(CellRecord { joint, set, r: c.next, start: 0, end: 0 });
                            c.next += 1;
                        };
                        for _ in 0..r2 {
                            for _ in 0..r1 {
                                (0..3).for_each(&mut take);
                            }
                            for _ in 0..r1 {
                                take(3);
                            }
                        }
                        formations.push(FormationRecord { ef, tuple: m, cells });
                    }
                }
                efs.push(EfRecord { sef: g, tuple: i, ordinal: ef_count[i], joints, defects });
                ef_count[i] += 1;
            }
            skipped_all.push(skipped);
        }
        sefs.push(SefRecord { kind, joints: (base..base + per_sef).collect(), skipped: skipped_all });
    }

    let planned = b.cells.len();
    for joint in 0..q {
        if b.sets[joint] == 0 {
            b.fresh_set(joint);
            set_ids[joint].push(b.used.len() - 1);
        }
        for (set, &id) in set_ids[joint].iter().enumerate() {
            for r in 0..s {
                if !b.used[id][r] {
                    b.cells.push(CellRecord { joint, set, r, start: 0, end: 0 });
                }
            }
        }
    }
    SequencePlan {
        params: p.clone(),
        cells: b.cells,
        planned,
        formations,
        efs,
        sefs,
        sets_per_joint: b.sets,
    }
}

fn join(xs: &[usize]) -> String {
    xs.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

pub fn write_plan(plan: &SequencePlan) -> String {
    let p = &plan.params;
    let mut out = String::new();
    let _ = writeln!(out, "plan 1");
    let _ = writeln!(
        out,
        "params {} {} {} {} {} {} {} {} {}",
        p.s, p.x, p.y, p.q, p.r1, p.r2, p.r3, p.r4, p.r5
    );
    let _ = writeln!(out, "sets {}", join(&plan.sets_per_joint));
    for sef in &plan.sefs {
        let skipped: Vec<String> =
            sef.skipped.iter().map(|s| s.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")).collect();
        let _ = writeln!(
            out,
            "sef {} {} {} skipped {}",
            sef.kind.name(),
            sef.joints.first().copied().unwrap_or(0),
            sef.joints.len(),
            skipped.join(" ")
        );
    }
    for ef in &plan.efs {
        let _ = writeln!(
            out,
            "ef {} {} {} joints {} defects {}",
            ef.sef,
            ef.tuple,
            ef.ordinal,
            join(&ef.joints),
            join(&ef.defects)
        );
    }
    for f in &plan.formations {
        let _ = writeln!(out, "formation {} {} cells {}", f.ef, f.tuple, join(&f.cells));
    }
    let _ = writeln!(out, "planned {}", plan.planned);
    for c in &plan.cells {
        let _ = writeln!(out, "cell {} {} {} {} {}", c.joint, c.set, c.r, c.start, c.end);
    }
    out
}

fn num(line: usize, w: &str) -> Result<usize, FormatError> {
    w.parse().map_err(|_| FormatError { line, message: format!("bad number {w:?}") })
}

fn nums(line: usize, ws: &[&str]) -> Result<Vec<usize>, FormatError> {
    ws.iter().map(|w| num(line, w)).collect()
}

fn bad(line: usize, message: impl Into<String>) -> FormatError {
    FormatError { line, message: message.into() }
}

/// Splits `words` at the keyword `key`.
fn split_at<'a>(line: usize, words: &'a [&'a str], key: &str) -> Result<(&'a [&'a str], &'a [&'a str]), FormatError> {
    let i = words.iter().position(|w| *w == key).ok_or_else(|| bad(line, format!("missing `{key}`")))?;
    Ok((&words[..i], &words[i + 1..]))
}

pub fn parse_plan(text: &str) -> Result<SequencePlan, FormatError> {
    let mut params = None;
    let mut plan = SequencePlan {
        params: CounterexampleParams::reduced(2, 1),
        cells: Vec::new(),
        planned: 0,
        formations: Vec::new(),
        efs: Vec::new(),
        sefs: Vec::new(),
        sets_per_joint: Vec::new(),
    };
    let mut seen_header = false;
    for (i, l) in text.lines().enumerate() {
        let line = i + 1;
        let l = l.split('#').next().unwrap_or("");
        let words: Vec<&str> = l.split_whitespace().collect();
        let Some((&kw, rest)) = words.split_first() else { continue };
        if !seen_header {
            if kw != "plan" || rest != ["1"] {
                return Err(bad(line, "expected `plan 1` header"));
            }
            seen_header = true;
            continue;
        }
        match kw {
            "params" => {
                let v = nums(line, rest)?;
                if v.len() != 9 {
                    return Err(bad(line, "params needs 9 values"));
                }
                let mut p = CounterexampleParams::reduced(2, 1);
                let v: Vec<u64> = v.into_iter().map(|v| v as u64).collect();
                (p.s, p.x, p.y, p.q, p.r1, p.r2, p.r3, p.r4, p.r5) =
                    (v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8]);
                params = Some(p);
            }
            "sets" => plan.sets_per_joint = nums(line, rest)?,
            "sef" => {
                let (head, skipped) = split_at(line, rest, "skipped")?;
                let [kind, first, len] = head else { return Err(bad(line, "malformed sef")) };
                let kind = match *kind {
                    "single" => SefKind::Single,
                    "double" => SefKind::Double,
                    other => return Err(bad(line, format!("unknown sef kind {other:?}"))),
                };
                let (first, len) = (num(line, first)?, num(line, len)?);
                let skipped = skipped
                    .iter()
                    .map(|w| nums(line, &w.split(',').collect::<Vec<_>>()))
                    .collect::<Result<_, _>>()?;
                plan.sefs.push(SefRecord { kind, joints: (first..first + len).collect(), skipped });
            }
            "ef" => {
                let (head, tail) = split_at(line, rest, "joints")?;
                let (joints, defects) = split_at(line, tail, "defects")?;
                let head = nums(line, head)?;
                let [sef, tuple, ordinal] = head[..] else { return Err(bad(line, "malformed ef")) };
                plan.efs.push(EfRecord {
                    sef,
                    tuple,
                    ordinal,
                    joints: nums(line, joints)?,
                    defects: nums(line, defects)?,
                });
            }
            "formation" => {
                let (head, cells) = split_at(line, rest, "cells")?;
                let head = nums(line, head)?;
                let [ef, tuple] = head[..] else { return Err(bad(line, "malformed formation")) };
                plan.formations.push(FormationRecord { ef, tuple, cells: nums(line, cells)? });
            }
            "planned" => {
                let [v] = rest else { return Err(bad(line, "malformed planned")) };
                plan.planned = num(line, v)?;
            }
            "cell" => {
                let v = nums(line, rest)?;
                let [joint, set, r, start, end] = v[..] else { return Err(bad(line, "malformed cell")) };
                plan.cells.push(CellRecord { joint, set, r, start, end });
            }
            other => return Err(bad(line, format!("unknown record {other:?}"))),
        }
    }
    if !seen_header {
        return Err(bad(0, "empty plan"));
    }
    plan.params = params.ok_or_else(|| bad(0, "missing params"))?;
    Ok(plan)
}
