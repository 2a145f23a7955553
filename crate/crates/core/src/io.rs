//! Text formats: edge lists, colourings, partitions, decompositions, parse
//! trees, gadgets and minor witnesses. Lines starting with '#' are comments.
//!
//! Edge list: header `n m`, then m lines `u v` with 0 <= u < v < n.
//! Colouring: n lines, line i holding the colour of vertex i.
//! Partition: one block per line, space-separated vertex ids.
//! Decomposition: one line per node, `id parent_id: v1 v2 ...` (root parent -1).
//! Parse tree: one line per node, `id parent_id OP args` with OP one of
//! CREATE i | UNION | CLIQUE i j | RELAB i j.
//! Gadget: sections `F: n m` with m edge lines, `S v: ids`,
//! `P u v: interior... end_u end_v` (the last two numbers are the attachment
//! endpoints), `R: ids`.
//! Witness: one line per minor vertex, `u: ids`.

use std::fmt::Write as _;

use thiserror::Error;

use crate::dtd::{DagTreeDecomposition, TreeDecomposition};
use crate::gadget::{FGadget, MinorWitness, PathBlock};
use crate::graph::{Graph, VertexPartition};
use crate::parse_tree::{CliqueParseTree, ParseOp};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {0}: {1}")]
    Line(usize, String),
    #[error("{0}")]
    Structure(String),
    #[error(transparent)]
    Graph(#[from] crate::graph::GraphError),
}

fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_num(line_no: usize, tok: &str) -> Result<usize, FormatError> {
    tok.parse()
        .map_err(|_| FormatError::Line(line_no, format!("expected a number, got '{tok}'")))
}

pub fn parse_edge_list(text: &str) -> Result<Graph, FormatError> {
    let mut lines = data_lines(text);
    let (no, header) = lines
        .next()
        .ok_or_else(|| FormatError::Structure("empty edge list".into()))?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    if toks.len() != 2 {
        return Err(FormatError::Line(no, "header must be 'n m'".into()));
    }
    let n = parse_num(no, toks[0])?;
    let m = parse_num(no, toks[1])?;
    let mut edges = Vec::with_capacity(m);
    for (no, line) in lines {
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 2 {
            return Err(FormatError::Line(no, "edge line must be 'u v'".into()));
        }
        edges.push((parse_num(no, toks[0])?, parse_num(no, toks[1])?));
    }
    if edges.len() != m {
        return Err(FormatError::Structure(format!(
            "header promises {m} edges, found {}",
            edges.len()
        )));
    }
    Ok(Graph::new(n, &edges)?)
}

pub fn render_edge_list(g: &Graph) -> String {
    let mut s = format!("{} {}\n", g.vertex_count(), g.edge_count());
    for &(u, v) in g.edges() {
        let _ = writeln!(s, "{u} {v}");
    }
    s
}

pub fn parse_colouring(text: &str) -> Result<Vec<usize>, FormatError> {
    let mut out = Vec::new();
    for (no, line) in data_lines(text) {
        out.push(parse_num(no, line)?);
    }
    Ok(out)
}

pub fn render_colouring(colouring: &[usize]) -> String {
    let mut s = String::new();
    for &c in colouring {
        let _ = writeln!(s, "{c}");
    }
    s
}

pub fn parse_partition(text: &str, n: usize) -> Result<VertexPartition, FormatError> {
    let mut blocks = Vec::new();
    for (no, line) in data_lines(text) {
        let block: Result<Vec<usize>, _> =
            line.split_whitespace().map(|t| parse_num(no, t)).collect();
        blocks.push(block?);
    }
    VertexPartition::new(n, blocks)
        .map_err(|e| FormatError::Structure(format!("not a partition: {e}")))
}

fn parse_tree_lines(text: &str) -> Result<Vec<(usize, isize, Vec<String>)>, FormatError> {
    let mut rows = Vec::new();
    for (no, line) in data_lines(text) {
        let (head, rest) = match line.split_once(':') {
            Some((h, r)) => (h, Some(r)),
            None => (line, None),
        };
        let toks: Vec<&str> = head.split_whitespace().collect();
        if toks.len() < 2 {
            return Err(FormatError::Line(no, "expected 'id parent_id ...'".into()));
        }
        let id = parse_num(no, toks[0])?;
        let parent: isize = toks[1]
            .parse()
            .map_err(|_| FormatError::Line(no, format!("bad parent id '{}'", toks[1])))?;
        let mut args: Vec<String> = toks[2..].iter().map(|s| s.to_string()).collect();
        if let Some(rest) = rest {
            args.extend(rest.split_whitespace().map(|s| s.to_string()));
        }
        rows.push((id, parent, args));
    }
    Ok(rows)
}

/// Decomposition format, shared by dag tree decompositions and tree
/// decompositions: `id parent: v1 v2 ...`.
pub fn parse_dtd(text: &str) -> Result<DagTreeDecomposition, FormatError> {
    let rows = parse_tree_lines(text)?;
    let n = rows.len();
    if n == 0 {
        return Err(FormatError::Structure("empty decomposition".into()));
    }
    let mut parent = vec![usize::MAX; n];
    let mut bags: Vec<Option<Vec<usize>>> = vec![None; n];
    let mut root = None;
    for (id, p, args) in rows {
        if id >= n {
            return Err(FormatError::Structure(format!(
                "node ids must be 0..{n}, got {id}"
            )));
        }
        let bag: Result<Vec<usize>, _> = args.iter().map(|t| parse_num(0, t)).collect();
        bags[id] = Some(bag?);
        if p < 0 {
            root = Some(id);
            parent[id] = id;
        } else {
            parent[id] = p as usize;
        }
    }
    let root = root.ok_or_else(|| FormatError::Structure("no root (parent -1) node".into()))?;
    if root != 0 {
        return Err(FormatError::Structure("the root must be node 0".into()));
    }
    parent[0] = 0;
    let bags: Vec<Vec<usize>> = bags
        .into_iter()
        .enumerate()
        .map(|(i, b)| b.ok_or_else(|| FormatError::Structure(format!("missing node {i}"))))
        .collect::<Result<_, _>>()?;
    Ok(DagTreeDecomposition::new(parent, bags))
}

pub fn render_dtd(t: &DagTreeDecomposition) -> String {
    let mut s = String::new();
    for (i, bag) in t.bags.iter().enumerate() {
        let parent = if i == 0 { -1 } else { t.parent[i] as isize };
        let verts: Vec<String> = bag.iter().map(|v| v.to_string()).collect();
        let _ = writeln!(s, "{i} {parent}: {}", verts.join(" "));
    }
    s
}

pub fn parse_tree_decomposition(text: &str) -> Result<TreeDecomposition, FormatError> {
    let t = parse_dtd(text)?;
    Ok(TreeDecomposition { parent: t.parent, bags: t.bags })
}

pub fn parse_parse_tree(text: &str) -> Result<CliqueParseTree, FormatError> {
    let rows = parse_tree_lines(text)?;
    let n = rows.len();
    let mut parent: Vec<Option<usize>> = vec![None; n];
    let mut ops: Vec<Option<ParseOp>> = vec![None; n];
    for (id, p, args) in rows {
        if id >= n {
            return Err(FormatError::Structure(format!("node ids must be 0..{n}, got {id}")));
        }
        parent[id] = if p < 0 { None } else { Some(p as usize) };
        let op = match args.first().map(|s| s.to_uppercase()) {
            Some(ref s) if s == "CREATE" && args.len() == 2 => {
                ParseOp::Create(parse_num(0, &args[1])?)
            }
            Some(ref s) if s == "UNION" && args.len() == 1 => ParseOp::Union,
            Some(ref s) if s == "CLIQUE" && args.len() == 3 => {
                ParseOp::Clique(parse_num(0, &args[1])?, parse_num(0, &args[2])?)
            }
            Some(ref s) if s == "RELAB" && args.len() == 3 => {
                ParseOp::Relab(parse_num(0, &args[1])?, parse_num(0, &args[2])?)
            }
            _ => {
                return Err(FormatError::Structure(format!(
                    "node {id}: bad operation '{}'",
                    args.join(" ")
                )))
            }
        };
        ops[id] = Some(op);
    }
    let ops: Vec<ParseOp> = ops
        .into_iter()
        .enumerate()
        .map(|(i, o)| o.ok_or_else(|| FormatError::Structure(format!("missing node {i}"))))
        .collect::<Result<_, _>>()?;
    CliqueParseTree::new(parent, ops).map_err(|e| FormatError::Structure(e.to_string()))
}

pub fn render_parse_tree(t: &CliqueParseTree) -> String {
    let mut s = String::new();
    for i in 0..t.node_count() {
        let parent = t.parent[i].map_or(-1isize, |p| p as isize);
        let op = match t.ops[i] {
            ParseOp::Create(l) => format!("CREATE {l}"),
            ParseOp::Union => "UNION".into(),
            ParseOp::Clique(a, b) => format!("CLIQUE {a} {b}"),
            ParseOp::Relab(a, b) => format!("RELAB {a} {b}"),
        };
        let _ = writeln!(s, "{i} {parent} {op}");
    }
    s
}

pub fn parse_gadget(text: &str) -> Result<FGadget, FormatError> {
    let mut base: Option<Graph> = None;
    let mut pending_edges: Option<(usize, usize, Vec<(usize, usize)>)> = None;
    let mut s_blocks: Vec<(usize, Vec<usize>)> = Vec::new();
    let mut p_blocks: Vec<((usize, usize), Vec<usize>, usize, usize)> = Vec::new();
    let mut remainder: Vec<usize> = Vec::new();
    let mut saw_r = false;
    for (no, line) in data_lines(text) {
        if let Some((n, m, edges)) = &mut pending_edges {
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() == 2 {
                if let (Ok(u), Ok(v)) = (toks[0].parse(), toks[1].parse()) {
                    edges.push((u, v));
                    if edges.len() == *m {
                        base = Some(Graph::new(*n, edges)?);
                        pending_edges = None;
                    }
                    continue;
                }
            }
            return Err(FormatError::Line(no, "expected an edge line 'u v'".into()));
        }
        let (head, rest) = line
            .split_once(':')
            .ok_or_else(|| FormatError::Line(no, "expected a 'SECTION: ...' line".into()))?;
        let toks: Vec<&str> = head.split_whitespace().collect();
        let nums: Result<Vec<usize>, _> = rest.split_whitespace().map(|t| parse_num(no, t)).collect();
        let nums = nums?;
        match toks.as_slice() {
            ["F"] => {
                if nums.len() != 2 {
                    return Err(FormatError::Line(no, "F section needs 'F: n m'".into()));
                }
                if nums[1] == 0 {
                    base = Some(Graph::new(nums[0], &[])?);
                } else {
                    pending_edges = Some((nums[0], nums[1], Vec::new()));
                }
            }
            ["S", v] => s_blocks.push((parse_num(no, v)?, nums)),
            ["P", u, v] => {
                if nums.len() < 3 {
                    return Err(FormatError::Line(
                        no,
                        "P section needs at least one interior vertex and two endpoints".into(),
                    ));
                }
                let end_v = nums[nums.len() - 1];
                let end_u = nums[nums.len() - 2];
                let interior = nums[..nums.len() - 2].to_vec();
                p_blocks.push(((parse_num(no, u)?, parse_num(no, v)?), interior, end_u, end_v));
            }
            ["R"] => {
                remainder = nums;
                saw_r = true;
            }
            _ => return Err(FormatError::Line(no, format!("unknown section '{head}'"))),
        }
    }
    let base = base.ok_or_else(|| FormatError::Structure("missing F section".into()))?;
    let _ = saw_r;
    let nf = base.vertex_count();
    let mut s_sorted = vec![Vec::new(); nf];
    for (v, ids) in s_blocks {
        if v >= nf {
            return Err(FormatError::Structure(format!("S block for non-vertex {v}")));
        }
        s_sorted[v] = ids;
    }
    let mut p_sorted: Vec<Option<PathBlock>> = vec![None; base.edge_count()];
    for ((u, v), interior, end_u, end_v) in p_blocks {
        let ei = base
            .edge_index(u, v)
            .ok_or_else(|| FormatError::Structure(format!("P block for non-edge ({u}, {v})")))?;
        // Attachment order follows the stored edge orientation (min, max).
        let (end_u, end_v) = if u <= v { (end_u, end_v) } else { (end_v, end_u) };
        p_sorted[ei] = Some(PathBlock { interior, end_u, end_v });
    }
    let p_blocks: Vec<PathBlock> = p_sorted
        .into_iter()
        .enumerate()
        .map(|(i, p)| {
            p.ok_or_else(|| {
                FormatError::Structure(format!("missing P block for edge {:?}", base.edges()[i]))
            })
        })
        .collect::<Result<_, _>>()?;
    Ok(FGadget { base, s_blocks: s_sorted, p_blocks, remainder })
}

pub fn render_gadget(g: &FGadget) -> String {
    let mut s = format!("F: {} {}\n", g.base.vertex_count(), g.base.edge_count());
    for &(u, v) in g.base.edges() {
        let _ = writeln!(s, "{u} {v}");
    }
    for (v, block) in g.s_blocks.iter().enumerate() {
        let ids: Vec<String> = block.iter().map(|x| x.to_string()).collect();
        let _ = writeln!(s, "S {v}: {}", ids.join(" "));
    }
    for (ei, pb) in g.p_blocks.iter().enumerate() {
        let (u, v) = g.base.edges()[ei];
        let ids: Vec<String> = pb.interior.iter().map(|x| x.to_string()).collect();
        let _ = writeln!(s, "P {u} {v}: {} {} {}", ids.join(" "), pb.end_u, pb.end_v);
    }
    let ids: Vec<String> = g.remainder.iter().map(|x| x.to_string()).collect();
    let _ = writeln!(s, "R: {}", ids.join(" "));
    s
}

pub fn parse_witness(text: &str) -> Result<MinorWitness, FormatError> {
    let mut labelled: Vec<(usize, Vec<usize>)> = Vec::new();
    for (no, line) in data_lines(text) {
        let (head, rest) = line
            .split_once(':')
            .ok_or_else(|| FormatError::Line(no, "expected 'u: ids'".into()))?;
        let u = parse_num(no, head.trim())?;
        let ids: Result<Vec<usize>, _> = rest.split_whitespace().map(|t| parse_num(no, t)).collect();
        labelled.push((u, ids?));
    }
    labelled.sort_by_key(|(u, _)| *u);
    for (i, (u, _)) in labelled.iter().enumerate() {
        if *u != i {
            return Err(FormatError::Structure(format!(
                "witness blocks must cover minor vertices 0..{}, missing {i}",
                labelled.len()
            )));
        }
    }
    Ok(MinorWitness { blocks: labelled.into_iter().map(|(_, b)| b).collect() })
}

pub fn render_witness(w: &MinorWitness) -> String {
    let mut s = String::new();
    for (u, block) in w.blocks.iter().enumerate() {
        let ids: Vec<String> = block.iter().map(|x| x.to_string()).collect();
        let _ = writeln!(s, "{u}: {}", ids.join(" "));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadget::fgadget_from_subdivision;
    use crate::graph::clique;

    #[test]
    fn edge_list_round_trip() {
        let g = crate::graph::wreath(&[2, 1, 1]).unwrap();
        let text = render_edge_list(&g);
        let back = parse_edge_list(&text).unwrap();
        assert_eq!(g.edges(), back.edges());
        assert_eq!(g.vertex_count(), back.vertex_count());
    }

    #[test]
    fn edge_list_with_comments() {
        let text = "# a triangle\n3 3\n0 1\n# middle comment\n0 2\n1 2\n";
        let g = parse_edge_list(text).unwrap();
        assert_eq!(g.edge_count(), 3);
    }

    #[test]
    fn bad_edge_count_rejected() {
        assert!(parse_edge_list("2 3\n0 1\n").is_err());
    }

    #[test]
    fn colouring_round_trip() {
        let c = vec![0, 2, 1, 1];
        assert_eq!(parse_colouring(&render_colouring(&c)).unwrap(), c);
    }

    #[test]
    fn partition_parse() {
        let p = parse_partition("0 2\n1\n", 3).unwrap();
        assert_eq!(p.block_count(), 2);
        assert!(parse_partition("0\n0 1\n", 2).is_err());
    }

    #[test]
    fn dtd_round_trip() {
        let t = DagTreeDecomposition::new(vec![0, 0, 1], vec![vec![0, 1], vec![2], vec![]]);
        let text = render_dtd(&t);
        let back = parse_dtd(&text).unwrap();
        assert_eq!(t, back);
    }

    #[test]
    fn parse_tree_round_trip() {
        let g = clique(3).unwrap();
        let t = crate::parse_tree::trivial_parse_tree(&g);
        let text = render_parse_tree(&t);
        let back = parse_parse_tree(&text).unwrap();
        assert_eq!(t.ops, back.ops);
        assert_eq!(t.parent, back.parent);
    }

    #[test]
    fn gadget_round_trip() {
        let f = clique(3).unwrap();
        let (h, g) = fgadget_from_subdivision(&f, 2);
        let text = render_gadget(&g);
        let back = parse_gadget(&text).unwrap();
        assert_eq!(g, back);
        assert_eq!(crate::gadget::validate_fgadget(&f, &h, &back), Ok(()));
    }

    #[test]
    fn witness_round_trip() {
        let w = MinorWitness { blocks: vec![vec![0, 1], vec![2], vec![3, 4]] };
        let back = parse_witness(&render_witness(&w)).unwrap();
        assert_eq!(w, back);
    }
}
