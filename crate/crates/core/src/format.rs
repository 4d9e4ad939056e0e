//! Line-based text formats: instances (`.sge`), drawings (`.sgd`) and level
//! trees with optional region lines (`.slt`). Blank lines and `#` comments
//! are ignored everywhere.

use std::fmt::Write as _;
use std::str::FromStr;

use thiserror::Error;

use crate::geom::{Line, Point, Scalar};
use crate::leveltree::{LevelTree, RegionSystem};
use crate::model::{Drawing, Instance, PathGraph, Role, RootedTree, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct FormatError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> FormatError {
    FormatError { line, message: message.into() }
}

/// Non-empty, comment-stripped lines with 1-based numbers.
fn records(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("");
        let words: Vec<&str> = l.split_whitespace().collect();
        (!words.is_empty()).then_some((i + 1, words))
    })
}

fn header(line: usize, words: &[&str], magic: &str, fields: usize) -> Result<Vec<usize>, FormatError> {
    if words.first() != Some(&magic) || words.len() != fields + 1 {
        return Err(err(line, format!("expected `{magic}` header with {} fields", fields)));
    }
    let nums = words[1..]
        .iter()
        .map(|w| w.parse::<usize>().map_err(|_| err(line, format!("bad number {w:?}"))))
        .collect::<Result<Vec<_>, _>>()?;
    if nums[0] != 1 {
        return Err(err(line, format!("unsupported version {}", nums[0])));
    }
    Ok(nums)
}

fn parse_ids(line: usize, words: &[&str], n: usize) -> Result<Vec<VertexId>, FormatError> {
    if words.len() != n {
        return Err(err(line, format!("expected {n} entries, found {}", words.len())));
    }
    words.iter().map(|w| w.parse().map_err(|_| err(line, format!("bad vertex id {w:?}")))).collect()
}

fn parse_parents(line: usize, words: &[&str], n: usize) -> Result<Vec<Option<VertexId>>, FormatError> {
    if words.len() != n {
        return Err(err(line, format!("expected {n} parents, found {}", words.len())));
    }
    words
        .iter()
        .map(|&w| match w {
            "-" => Ok(None),
            _ => w.parse().map(Some).map_err(|_| err(line, format!("bad parent {w:?}"))),
        })
        .collect()
}

fn parents_line(t: &RootedTree) -> String {
    let mut s = String::from("tree");
    for p in t.parents() {
        match p {
            Some(p) => write!(s, " {p}").expect("write to string"),
            None => s.push_str(" -"),
        }
    }
    s
}

pub fn write_instance(i: &Instance) -> String {
    let mut s = format!("sge 1 {}\n{}\npath", i.tree.len(), parents_line(&i.tree));
    for v in i.path.order() {
        write!(s, " {v}").expect("write to string");
    }
    s.push('\n');
    if i.tree.has_roles() {
        s.push_str("roles");
        for r in i.tree.roles() {
            write!(s, " {}", r.code()).expect("write to string");
        }
        s.push('\n');
    }
    if i.edge_disjoint_required {
        s.push_str("flags edge-disjoint\n");
    }
    s
}

pub fn parse_instance(text: &str) -> Result<Instance, FormatError> {
    let mut recs = records(text);
    let (l0, h) = recs.next().ok_or_else(|| err(1, "empty input"))?;
    let n = header(l0, &h, "sge", 2)?[1];
    let (mut parents, mut path, mut roles, mut disjoint) = (None, None, None, false);
    for (line, words) in recs {
        match words[0] {
            "tree" => parents = Some(parse_parents(line, &words[1..], n)?),
            "path" => path = Some(parse_ids(line, &words[1..], n)?),
            "roles" => {
                if words.len() != n + 1 {
                    return Err(err(line, format!("expected {n} roles")));
                }
                let rs = words[1..]
                    .iter()
                    .map(|w| {
                        let mut cs = w.chars();
                        match (cs.next().and_then(Role::from_code), cs.next()) {
                            (Some(r), None) => Ok(r),
                            _ => Err(err(line, format!("bad role {w:?}"))),
                        }
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                roles = Some(rs);
            }
            "flags" => disjoint = words[1..].contains(&"edge-disjoint"),
            other => return Err(err(line, format!("unknown record {other:?}"))),
        }
    }
    let parents = parents.ok_or_else(|| err(l0, "missing tree record"))?;
    let path = path.ok_or_else(|| err(l0, "missing path record"))?;
    let tree = match roles {
        Some(r) => RootedTree::with_roles(parents, r),
        None => RootedTree::from_parents(parents),
    };
    let mut i = Instance::new(tree, PathGraph::new(path));
    i.edge_disjoint_required = disjoint;
    Ok(i)
}

pub fn write_drawing(d: &Drawing) -> String {
    let mut s = format!("sgd 1 {}\n", d.len());
    for (v, p) in d.points().iter().enumerate() {
        writeln!(s, "{v} {} {}", p.x.to_fraction_string(), p.y.to_fraction_string()).expect("write to string");
    }
    s
}

fn scalar(line: usize, w: &str) -> Result<Scalar, FormatError> {
    Scalar::from_str(w).map_err(|e| err(line, e.to_string()))
}

pub fn parse_drawing(text: &str) -> Result<Drawing, FormatError> {
    let mut recs = records(text);
    let (l0, h) = recs.next().ok_or_else(|| err(1, "empty input"))?;
    let n = header(l0, &h, "sgd", 2)?[1];
    let mut pos: Vec<Option<Point>> = vec![None; n];
    for (line, words) in recs {
        if words.len() != 3 {
            return Err(err(line, "expected `<id> <x> <y>`"));
        }
        let v: usize = words[0].parse().map_err(|_| err(line, format!("bad vertex id {:?}", words[0])))?;
        if v >= n {
            return Err(err(line, format!("vertex {v} out of range")));
        }
        if pos[v].is_some() {
            return Err(err(line, format!("vertex {v} listed twice")));
        }
        pos[v] = Some(Point::new(scalar(line, words[1])?, scalar(line, words[2])?));
    }
    let pts = pos
        .into_iter()
        .enumerate()
        .map(|(v, p)| p.ok_or_else(|| err(l0, format!("vertex {v} has no position"))))
        .collect::<Result<Vec<_>, _>>()?;
    Drawing::new(pts).map_err(|e| err(l0, e.to_string()))
}

pub fn write_level_tree(t: &LevelTree, regions: Option<&RegionSystem>) -> String {
    let mut s = format!("slt 1 {} {}\n{}\nphi", t.len(), t.k(), parents_line(t.tree()));
    for l in t.phi() {
        write!(s, " {l}").expect("write to string");
    }
    s.push('\n');
    for line in regions.map(|r| r.lines.as_slice()).unwrap_or_default() {
        let (a, b, c) = line.coefficients();
        writeln!(s, "line {} {} {}", a.to_fraction_string(), b.to_fraction_string(), c.to_fraction_string())
            .expect("write to string");
    }
    s
}

pub fn parse_level_tree(text: &str) -> Result<(LevelTree, Option<RegionSystem>), FormatError> {
    let mut recs = records(text);
    let (l0, h) = recs.next().ok_or_else(|| err(1, "empty input"))?;
    let nums = header(l0, &h, "slt", 3)?;
    let (n, k) = (nums[1], nums[2]);
    let (mut parents, mut phi, mut lines) = (None, None, Vec::new());
    for (line, words) in recs {
        match words[0] {
            "tree" => parents = Some(parse_parents(line, &words[1..], n)?),
            "phi" => phi = Some(parse_ids(line, &words[1..], n)?),
            "line" => {
                if words.len() != 4 {
                    return Err(err(line, "expected `line A B C`"));
                }
                let l = Line::new(scalar(line, words[1])?, scalar(line, words[2])?, scalar(line, words[3])?)
                    .map_err(|e| err(line, e.to_string()))?;
                lines.push(l);
            }
            other => return Err(err(line, format!("unknown record {other:?}"))),
        }
    }
    let parents = parents.ok_or_else(|| err(l0, "missing tree record"))?;
    let phi = phi.ok_or_else(|| err(l0, "missing phi record"))?;
    let t = LevelTree::new(RootedTree::from_parents(parents), phi, k).map_err(|e| err(l0, e.to_string()))?;
    let rs = (!lines.is_empty()).then(|| RegionSystem::new(lines));
    Ok((t, rs))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn instance_round_trip_with_roles() {
        let mut tree = RootedTree::star(3);
        tree.set_role(0, Role::Root);
        tree.set_role(2, Role::BVertex(2));
        let mut i = Instance::new(tree, PathGraph::new(vec![1, 0, 2, 3]));
        i.edge_disjoint_required = true;
        let text = write_instance(&i);
        assert!(text.starts_with("sge 1 4\ntree - 0 0 0\npath 1 0 2 3\nroles R O 2 O\n"));
        assert_eq!(parse_instance(&text).unwrap(), i);
    }

    #[test]
    fn drawing_round_trip_is_bit_exact() {
        let d = Drawing::new(vec![Point::ratio(-1, 3, 5, 1), Point::ratio(7, 4, -2, 6)]).unwrap();
        let text = write_drawing(&d);
        assert_eq!(text, "sgd 1 2\n0 -1/3 5/1\n1 7/4 -1/3\n");
        assert_eq!(parse_drawing(&text).unwrap(), d);
    }

    #[test]
    fn level_tree_with_lines() {
        let t = LevelTree::new(RootedTree::path(3), vec![1, 2, 3], 3).unwrap();
        let rs = RegionSystem::horizontal(2);
        let text = write_level_tree(&t, Some(&rs));
        let (t2, rs2) = parse_level_tree(&text).unwrap();
        assert_eq!(t2, t);
        assert_eq!(rs2, Some(rs));
    }

    #[test]
    fn malformed_inputs_are_errors() {
        assert!(parse_instance("").is_err());
        assert!(parse_instance("sge 2 1\ntree -\npath 0\n").is_err());
        assert!(parse_instance("sge 1 2\ntree - x\npath 0 1\n").is_err());
        assert!(parse_drawing("sgd 1 1\n0 1/0 2\n").is_err());
        assert!(parse_drawing("sgd 1 2\n0 1 2\n1 1 2\n").is_err());
        assert_eq!(parse_drawing("sgd 1 1 # one\n\n0 3 4\n").unwrap().len(), 1);
    }
}
