use super::{GraphBuilder, WeightedGraph};
use crate::error::{Error, Result};

fn concat_labels(x: &WeightedGraph, y: &WeightedGraph) -> Option<Vec<String>> {
    let (a, b) = (x.labels()?, y.labels()?);
    Some(a.iter().chain(b).cloned().collect())
}

fn copy_into(b: &mut GraphBuilder, g: &WeightedGraph, offset: usize) {
    for e in g.edges() {
        b.add_edge(e.u + offset, e.v + offset, e.weight)
            .expect("fresh vertex block");
    }
}

fn finish(b: GraphBuilder, labels: Option<Vec<String>>) -> WeightedGraph {
    let g = b.build();
    match labels {
        Some(l) => g.with_labels(l).expect("label count matches"),
        None => g,
    }
}

/// Disjoint union; `Y`'s vertices follow `X`'s.
pub fn union(x: &WeightedGraph, y: &WeightedGraph) -> WeightedGraph {
    let nx = x.order();
    let mut b = GraphBuilder::new(nx + y.order());
    copy_into(&mut b, x, 0);
    copy_into(&mut b, y, nx);
    finish(b, concat_labels(x, y))
}

/// `X ∨ Y`: the union plus every unit-weight edge between the two parts.
pub fn join(x: &WeightedGraph, y: &WeightedGraph) -> WeightedGraph {
    let nx = x.order();
    let mut b = GraphBuilder::new(nx + y.order());
    copy_into(&mut b, x, 0);
    copy_into(&mut b, y, nx);
    for u in 0..nx {
        for v in 0..y.order() {
            b.add_edge(u, nx + v, 1.0).expect("cross edges are new");
        }
    }
    finish(b, concat_labels(x, y))
}

/// `X □ Y` with row-major ids: `(u, x) -> u * |V(Y)| + x`.
///
/// Loops of either factor are copied onto every corresponding product vertex.
pub fn cartesian_product(x: &WeightedGraph, y: &WeightedGraph) -> WeightedGraph {
    let (nx, ny) = (x.order(), y.order());
    let id = |u: usize, a: usize| u * ny + a;
    let mut adj = vec![std::collections::BTreeMap::<usize, f64>::new(); nx * ny];
    let mut put = |p: usize, q: usize, w: f64| {
        *adj[p].entry(q).or_insert(0.0) += w;
        if p != q {
            *adj[q].entry(p).or_insert(0.0) += w;
        }
    };
    for u in 0..nx {
        for e in y.edges() {
            put(id(u, e.u), id(u, e.v), e.weight);
        }
    }
    for a in 0..ny {
        for e in x.edges() {
            put(id(e.u, a), id(e.v, a), e.weight);
        }
    }
    // Loops from both factors land on the same diagonal entry and add up, which
    // keeps A(X □ Y) = A(X) ⊗ I + I ⊗ A(Y).
    let mut b = GraphBuilder::new(nx * ny);
    for (p, nbrs) in adj.iter().enumerate() {
        for (&q, &w) in nbrs.range(p..) {
            if w != 0.0 {
                b.add_edge(p, q, w).expect("accumulated once");
            }
        }
    }
    b.build()
}

/// `X × Y` with row-major ids; weights multiply.
pub fn direct_product(x: &WeightedGraph, y: &WeightedGraph) -> WeightedGraph {
    let ny = y.order();
    let id = |u: usize, a: usize| u * ny + a;
    let mut b = GraphBuilder::new(x.order() * ny);
    let oriented = |g: &WeightedGraph| -> Vec<(usize, usize, f64)> {
        g.edges()
            .flat_map(|e| {
                let fwd = (e.u, e.v, e.weight);
                if e.u == e.v {
                    vec![fwd]
                } else {
                    vec![fwd, (e.v, e.u, e.weight)]
                }
            })
            .collect()
    };
    let ex = oriented(x);
    let ey = oriented(y);
    for &(u, v, wx) in &ex {
        for &(a, c, wy) in &ey {
            let (p, q) = (id(u, a), id(v, c));
            if p <= q && !b.has_edge(p, q) {
                b.add_edge(p, q, wx * wy).expect("checked above");
            }
        }
    }
    b.build()
}

/// Complement of a simple unweighted graph.
pub fn complement(x: &WeightedGraph) -> Result<WeightedGraph> {
    if !x.is_simple() || !x.is_unweighted() {
        return Err(Error::NotSimpleUnweighted);
    }
    let n = x.order();
    let mut b = GraphBuilder::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if !x.has_edge(u, v) {
                b.add_edge(u, v, 1.0)?;
            }
        }
    }
    Ok(b.build())
}

/// Whether a blown-up part is an empty or a complete graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PartFill {
    Empty,
    Complete,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlowUpPart {
    pub size: usize,
    pub fill: PartFill,
}

impl BlowUpPart {
    pub fn empty(size: usize) -> Self {
        BlowUpPart {
            size,
            fill: PartFill::Empty,
        }
    }

    pub fn complete(size: usize) -> Self {
        BlowUpPart {
            size,
            fill: PartFill::Complete,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlowUpMode {
    Vertex,
    Edge,
}

fn fill_part(b: &mut GraphBuilder, first: usize, part: BlowUpPart) {
    if part.fill == PartFill::Complete {
        for i in 0..part.size {
            for j in i + 1..part.size {
                b.add_edge(first + i, first + j, 1.0).expect("new part");
            }
        }
    }
}

/// Vertex or edge blow-up.
///
/// Vertex mode: part `j` replaces vertex `j` and occupies a consecutive id
/// block in vertex order; parts of adjacent vertices are fully joined with the
/// original edge weight, and a loop on `v_j` is copied onto every vertex of
/// its part. Edge mode: original vertices keep ids `0..n`; each non-loop edge
/// `e_j` (canonical order) is removed and its part is appended, every part
/// vertex joined to both endpoints with `e_j`'s weight. Loops survive.
pub fn blow_up(x: &WeightedGraph, mode: BlowUpMode, parts: &[BlowUpPart]) -> Result<WeightedGraph> {
    if let Some(p) = parts.iter().find(|p| p.size == 0) {
        return Err(Error::InvalidBlowUp(format!("part size {} < 1", p.size)));
    }
    match mode {
        BlowUpMode::Vertex => {
            if parts.len() != x.order() {
                return Err(Error::InvalidBlowUp(format!(
                    "{} parts for {} vertices",
                    parts.len(),
                    x.order()
                )));
            }
            let mut starts = Vec::with_capacity(parts.len());
            let mut total = 0;
            for p in parts {
                starts.push(total);
                total += p.size;
            }
            let mut b = GraphBuilder::new(total);
            for (j, &p) in parts.iter().enumerate() {
                fill_part(&mut b, starts[j], p);
            }
            for e in x.edges() {
                if e.u == e.v {
                    for i in 0..parts[e.u].size {
                        let w = starts[e.u] + i;
                        b.add_edge(w, w, e.weight)?;
                    }
                    continue;
                }
                for i in 0..parts[e.u].size {
                    for k in 0..parts[e.v].size {
                        b.add_edge(starts[e.u] + i, starts[e.v] + k, e.weight)?;
                    }
                }
            }
            Ok(b.build())
        }
        BlowUpMode::Edge => {
            let proper: Vec<_> = x.edges().filter(|e| e.u != e.v).collect();
            if x.has_loops() && parts.len() == x.edge_count() {
                return Err(Error::InvalidBlowUp(
                    "edge blow-up parts cover non-loop edges only".into(),
                ));
            }
            if parts.len() != proper.len() {
                return Err(Error::InvalidBlowUp(format!(
                    "{} parts for {} non-loop edges",
                    parts.len(),
                    proper.len()
                )));
            }
            let mut b = GraphBuilder::new(x.order());
            for e in x.edges().filter(|e| e.u == e.v) {
                b.add_edge(e.u, e.v, e.weight)?;
            }
            for (e, &p) in proper.iter().zip(parts) {
                let first = b.add_vertices(p.size);
                fill_part(&mut b, first, p);
                for i in 0..p.size {
                    b.add_edge(e.u, first + i, e.weight)?;
                    b.add_edge(e.v, first + i, e.weight)?;
                }
            }
            Ok(b.build())
        }
    }
}

/// Appends a fresh unit-weight path of `k` vertices per attachment; the first
/// path vertex is adjacent to the root. New vertices follow existing ones in
/// attachment order.
pub fn attach_tails(x: &WeightedGraph, attachments: &[(usize, usize)]) -> Result<WeightedGraph> {
    let mut b = GraphBuilder::from_graph(x);
    for &(root, k) in attachments {
        x.check_vertex(root)?;
        if k == 0 {
            return Err(Error::InvalidArgument("tail length must be >= 1".into()));
        }
        let first = b.add_vertices(k);
        b.add_edge(root, first, 1.0)?;
        for i in 1..k {
            b.add_edge(first + i - 1, first + i, 1.0)?;
        }
    }
    Ok(b.build())
}
