use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use super::ops::{attach_tails, cartesian_product, join, union};
use super::{io, GraphBuilder, WeightedGraph};
use crate::error::{Error, Result};

/// A named graph family member.
///
/// Vertex orderings (all 0-based):
/// - `Star(n)`: centre 0, leaves `1..=n`.
/// - `CompleteMultipartite`, `Threshold`: parts in the listed order, consecutive ids.
/// - `Rook`, `Hamming`, `CartesianPower`: row-major Cartesian ids.
/// - `Lollipop(n, k)`: clique `0..n`, tail `n..n+k` rooted at vertex 0.
/// - `Barbell(n, k, m)`: `K_n` on `0..n`, `K_m` on `n..n+m`, then the `k` path
///   vertices from the vertex 0 side to vertex `n`.
/// - `DoubleStar(k, l)`: the `k` leaves of `u`, then `u`, `v`, then `v`'s `l` leaves.
/// - `Cone`: apex 0. `DoubleCone`, `CliqueJoin`, `EmptyJoin`: joined vertices first.
/// - `XTail` / `YTail`: `K_n` on `0..n`, `O_m` on `n..n+m`, then tails in
///   attachment order.
#[derive(Debug, Clone, PartialEq)]
pub enum FamilySpec {
    Complete(usize),
    Empty(usize),
    Path(usize),
    Cycle(usize),
    Star(usize),
    CompleteMultipartite(Vec<usize>),
    Rook(Vec<usize>),
    Hamming { k: usize, n: usize },
    Lollipop { n: usize, k: usize },
    Barbell { n: usize, k: usize, m: usize },
    DoubleStar { k: usize, l: usize },
    /// `((((O_{n1} ∨ K_{n2}) ∪ O_{n3}) ∨ K_{n4}) ...)`.
    Threshold(Vec<usize>),
    Cone(Box<FamilySpec>),
    DoubleCone { connected: bool, base: Box<FamilySpec> },
    XTail { n: usize, m: usize, k: usize },
    YTail { n: usize, m: usize, k: usize },
    /// `K_m ∨ base`.
    CliqueJoin { m: usize, base: Box<FamilySpec> },
    /// `O_m ∨ base`.
    EmptyJoin { m: usize, base: Box<FamilySpec> },
    /// `base □ base □ ... □ base` with `k` factors.
    CartesianPower { k: usize, base: Box<FamilySpec> },
    /// A graph read from a file at build time.
    File(PathBuf),
    /// An in-memory graph with a display name.
    Custom { name: String, graph: WeightedGraph },
}

fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidFamily(msg.into()))
}

fn complete(n: usize) -> WeightedGraph {
    let mut b = GraphBuilder::new(n);
    for u in 0..n {
        for v in u + 1..n {
            b.add_edge(u, v, 1.0).expect("fresh edge");
        }
    }
    b.build()
}

fn path(n: usize) -> WeightedGraph {
    let mut b = GraphBuilder::new(n);
    for u in 1..n {
        b.add_edge(u - 1, u, 1.0).expect("fresh edge");
    }
    b.build()
}

fn power(g: &WeightedGraph, k: usize) -> WeightedGraph {
    let mut out = g.clone();
    for _ in 1..k {
        out = cartesian_product(&out, g);
    }
    out
}

impl FamilySpec {
    pub fn custom(name: impl Into<String>, graph: WeightedGraph) -> Self {
        FamilySpec::Custom {
            name: name.into(),
            graph,
        }
    }

    /// Checks the family's parameter domain.
    pub fn validate(&self) -> Result<()> {
        use FamilySpec::*;
        match self {
            Complete(n) | Empty(n) | Path(n) if *n == 0 => invalid("order must be >= 1"),
            Cycle(n) if *n < 3 => invalid(format!("cycle needs n >= 3, got {n}")),
            Star(n) if *n == 0 => invalid("star needs n >= 1"),
            CompleteMultipartite(p) | Rook(p) | Threshold(p) if p.is_empty() => {
                invalid("part list must be non-empty")
            }
            CompleteMultipartite(p) | Rook(p) | Threshold(p) if p.contains(&0) => {
                invalid("part sizes must be >= 1")
            }
            Hamming { k, n } if *k == 0 || *n == 0 => invalid("hamming needs k, n >= 1"),
            Lollipop { n, k } if *n < 4 || *k == 0 => {
                invalid(format!("lollipop needs n >= 4 and k >= 1, got n={n}, k={k}"))
            }
            Barbell { n, k, m } if *n < 4 || *m < 4 || *k == 0 => {
                invalid(format!("barbell needs n, m >= 4 and k >= 1, got {n},{k},{m}"))
            }
            DoubleStar { k, l } if *k == 0 || *l == 0 => {
                invalid(format!("double star needs k, l >= 1, got {k},{l}"))
            }
            XTail { n, m, .. } | YTail { n, m, .. } if *n < 3 || *m < 3 => {
                invalid(format!("tail family needs n, m >= 3, got {n},{m}"))
            }
            CliqueJoin { m, .. } | EmptyJoin { m, .. } if *m == 0 => invalid("m must be >= 1"),
            CartesianPower { k, .. } if *k == 0 => invalid("power needs k >= 1"),
            Cone(b) | DoubleCone { base: b, .. } => b.validate(),
            CliqueJoin { base, .. } | EmptyJoin { base, .. } | CartesianPower { base, .. } => {
                base.validate()
            }
            _ => Ok(()),
        }
    }

    /// Builds the graph with the documented vertex ordering.
    pub fn build(&self) -> Result<WeightedGraph> {
        use FamilySpec::*;
        self.validate()?;
        Ok(match self {
            Complete(n) => complete(*n),
            Empty(n) => WeightedGraph::empty(*n),
            Path(n) => path(*n),
            Cycle(n) => {
                let mut b = GraphBuilder::from_graph(&path(*n));
                b.add_edge(n - 1, 0, 1.0)?;
                b.build()
            }
            Star(n) => join(&WeightedGraph::empty(1), &WeightedGraph::empty(*n)),
            CompleteMultipartite(parts) => parts
                .iter()
                .map(|&p| WeightedGraph::empty(p))
                .reduce(|acc, g| join(&acc, &g))
                .expect("validated non-empty"),
            Rook(parts) => parts
                .iter()
                .map(|&p| complete(p))
                .reduce(|acc, g| cartesian_product(&acc, &g))
                .expect("validated non-empty"),
            Hamming { k, n } => power(&complete(*n), *k),
            Lollipop { n, k } => attach_tails(&complete(*n), &[(0, *k)])?,
            Barbell { n, k, m } => {
                let g = attach_tails(&union(&complete(*n), &complete(*m)), &[(0, *k)])?;
                let mut b = GraphBuilder::from_graph(&g);
                b.add_edge(n + m + k - 1, *n, 1.0)?;
                b.build()
            }
            DoubleStar { k, l } => {
                let (u, v) = (*k, k + 1);
                let mut b = GraphBuilder::new(k + l + 2);
                for leaf in 0..*k {
                    b.add_edge(leaf, u, 1.0)?;
                }
                b.add_edge(u, v, 1.0)?;
                for leaf in k + 2..k + l + 2 {
                    b.add_edge(v, leaf, 1.0)?;
                }
                b.build()
            }
            Threshold(parts) => {
                let mut g = WeightedGraph::empty(parts[0]);
                for (i, &p) in parts.iter().enumerate().skip(1) {
                    g = if i % 2 == 1 {
                        join(&g, &complete(p))
                    } else {
                        union(&g, &WeightedGraph::empty(p))
                    };
                }
                g
            }
            Cone(base) => join(&WeightedGraph::empty(1), &base.build()?),
            DoubleCone { connected, base } => {
                let apexes = if *connected {
                    complete(2)
                } else {
                    WeightedGraph::empty(2)
                };
                join(&apexes, &base.build()?)
            }
            XTail { n, m, k } | YTail { n, m, k } => {
                let core = join(&complete(*n), &WeightedGraph::empty(*m));
                if *k == 0 {
                    core
                } else {
                    let roots = if matches!(self, XTail { .. }) {
                        *n..n + m
                    } else {
                        0..*n
                    };
                    let att: Vec<_> = roots.map(|r| (r, *k)).collect();
                    attach_tails(&core, &att)?
                }
            }
            CliqueJoin { m, base } => join(&complete(*m), &base.build()?),
            EmptyJoin { m, base } => join(&WeightedGraph::empty(*m), &base.build()?),
            CartesianPower { k, base } => power(&base.build()?, *k),
            File(p) => io::read_graph(p)?,
            Custom { graph, .. } => graph.clone(),
        })
    }

    /// Factor specs when this family is a Cartesian product, in id order.
    pub fn product_factors(&self) -> Option<Vec<FamilySpec>> {
        match self {
            FamilySpec::Rook(parts) if parts.len() >= 2 => {
                Some(parts.iter().map(|&p| FamilySpec::Complete(p)).collect())
            }
            FamilySpec::Hamming { k, n } if *k >= 2 => Some(vec![FamilySpec::Complete(*n); *k]),
            FamilySpec::CartesianPower { k, base } if *k >= 2 => Some(vec![(**base).clone(); *k]),
            _ => None,
        }
    }

    /// The joined-on base graph of a cone-like family.
    pub fn base(&self) -> Option<&FamilySpec> {
        match self {
            FamilySpec::Cone(b)
            | FamilySpec::DoubleCone { base: b, .. }
            | FamilySpec::CliqueJoin { base: b, .. }
            | FamilySpec::EmptyJoin { base: b, .. }
            | FamilySpec::CartesianPower { base: b, .. } => Some(b),
            _ => None,
        }
    }

    /// A representative vertex for `role`.
    pub fn role_vertex(&self, role: VertexRole) -> Result<usize> {
        use FamilySpec::*;
        use VertexRole as R;
        let found = match (role, self) {
            (R::Vertex(i), _) => Some(i),
            (R::Any, _) => Some(0),
            (R::Apex | R::Center, Star(_) | Cone(_) | DoubleCone { .. }) => Some(0),
            (R::Apex, CliqueJoin { .. } | EmptyJoin { .. }) => Some(0),
            (R::Leaf, Star(_)) => Some(1),
            (R::Leaf, DoubleStar { .. } | Path(_)) => Some(0),
            (R::Leaf, Lollipop { n, k }) => Some(n + k - 1),
            (R::Internal, DoubleStar { k, .. }) => Some(*k),
            (R::Internal, Path(n)) if *n >= 3 => Some(1),
            (R::CliquePart, CliqueJoin { .. } | XTail { .. } | YTail { .. }) => Some(0),
            (R::CliquePart, Lollipop { .. } | Barbell { .. }) => Some(1),
            (R::CliquePart, Complete(_)) => Some(0),
            (R::EmptyPart, EmptyJoin { .. }) => Some(0),
            (R::EmptyPart, XTail { n, .. } | YTail { n, .. }) => Some(*n),
            _ => None,
        };
        found.ok_or_else(|| Error::InvalidArgument(format!("role `{role}` is not defined for {self}")))
    }
}

/// Named vertex positions within a family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VertexRole {
    Any,
    Apex,
    Leaf,
    Center,
    Internal,
    CliquePart,
    EmptyPart,
    Vertex(usize),
}

impl fmt::Display for VertexRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexRole::Any => f.write_str("any"),
            VertexRole::Apex => f.write_str("apex"),
            VertexRole::Leaf => f.write_str("leaf"),
            VertexRole::Center => f.write_str("center"),
            VertexRole::Internal => f.write_str("internal"),
            VertexRole::CliquePart => f.write_str("clique"),
            VertexRole::EmptyPart => f.write_str("empty"),
            VertexRole::Vertex(i) => write!(f, "{i}"),
        }
    }
}

impl FromStr for VertexRole {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "any" => VertexRole::Any,
            "apex" => VertexRole::Apex,
            "leaf" => VertexRole::Leaf,
            "center" | "centre" => VertexRole::Center,
            "internal" => VertexRole::Internal,
            "clique" => VertexRole::CliquePart,
            "empty" => VertexRole::EmptyPart,
            _ => VertexRole::Vertex(s.parse().map_err(|_| {
                Error::InvalidArgument(format!("unknown vertex role `{s}`"))
            })?),
        })
    }
}

fn list(xs: &[usize]) -> String {
    xs.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use FamilySpec::*;
        match self {
            Complete(n) => write!(f, "complete:{n}"),
            Empty(n) => write!(f, "empty:{n}"),
            Path(n) => write!(f, "path:{n}"),
            Cycle(n) => write!(f, "cycle:{n}"),
            Star(n) => write!(f, "star:{n}"),
            CompleteMultipartite(p) => write!(f, "multipartite:{}", list(p)),
            Rook(p) => write!(f, "rook:{}", list(p)),
            Hamming { k, n } => write!(f, "hamming:{k},{n}"),
            Lollipop { n, k } => write!(f, "lollipop:{n},{k}"),
            Barbell { n, k, m } => write!(f, "barbell:{n},{k},{m}"),
            DoubleStar { k, l } => write!(f, "doublestar:{k},{l}"),
            Threshold(p) => write!(f, "threshold:{}", list(p)),
            Cone(b) => write!(f, "cone:{b}"),
            DoubleCone { connected, base } => {
                let c = if *connected { "connected" } else { "disconnected" };
                write!(f, "doublecone:{c}:{base}")
            }
            XTail { n, m, k } => write!(f, "xtail:{n},{m},{k}"),
            YTail { n, m, k } => write!(f, "ytail:{n},{m},{k}"),
            CliqueJoin { m, base } => write!(f, "cliquejoin:{m}:{base}"),
            EmptyJoin { m, base } => write!(f, "emptyjoin:{m}:{base}"),
            CartesianPower { k, base } => write!(f, "power:{k}:{base}"),
            File(p) => write!(f, "@{}", p.display()),
            Custom { name, .. } => f.write_str(name),
        }
    }
}

fn nums(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse()
                .map_err(|_| Error::InvalidFamily(format!("bad integer `{x}`")))
        })
        .collect()
}

fn exactly<const N: usize>(kind: &str, s: &str) -> Result<[usize; N]> {
    let v = nums(s)?;
    v.try_into()
        .map_err(|v: Vec<usize>| Error::InvalidFamily(format!("{kind} takes {N} parameters, got {}", v.len())))
}

/// `k=<factors>,n=<size>` keyword form accepted by `rook` and `hamming`.
fn keyword_kn(s: &str) -> Option<Result<(usize, usize)>> {
    if !s.contains('=') {
        return None;
    }
    let (mut k, mut n) = (None, None);
    for item in s.split(',') {
        let (key, val) = match item.split_once('=') {
            Some(kv) => kv,
            None => return Some(invalid(format!("expected key=value, got `{item}`"))),
        };
        let val: usize = match val.trim().parse() {
            Ok(v) => v,
            Err(_) => return Some(invalid(format!("bad integer `{val}`"))),
        };
        match key.trim() {
            "k" => k = Some(val),
            "n" => n = Some(val),
            other => return Some(invalid(format!("unknown key `{other}`"))),
        }
    }
    Some(match (k, n) {
        (Some(k), Some(n)) => Ok((k, n)),
        _ => invalid("both k= and n= are required"),
    })
}

fn split_count(kind: &str, rest: &str) -> Result<(usize, Box<FamilySpec>)> {
    let (m, base) = rest
        .split_once(':')
        .ok_or_else(|| Error::InvalidFamily(format!("{kind} expects `{kind}:<m>:<base>`")))?;
    let m = m
        .parse()
        .map_err(|_| Error::InvalidFamily(format!("bad integer `{m}`")))?;
    Ok((m, Box::new(base.parse()?)))
}

impl FromStr for FamilySpec {
    type Err = Error;

    /// Parses `kind:params`, e.g. `complete:5`, `rook:3,4`, `rook:k=2,n=5`,
    /// `cone:cycle:5`, `doublecone:disconnected:@x.graph`, `power:3:star:4`.
    fn from_str(s: &str) -> Result<Self> {
        use FamilySpec::*;
        let s = s.trim();
        if let Some(p) = s.strip_prefix('@') {
            return Ok(File(PathBuf::from(p)));
        }
        let (kind, rest) = s
            .split_once(':')
            .ok_or_else(|| Error::InvalidFamily(format!("expected `kind:params`, got `{s}`")))?;
        let spec = match kind {
            "complete" => Complete(exactly::<1>(kind, rest)?[0]),
            "empty" => Empty(exactly::<1>(kind, rest)?[0]),
            "path" => Path(exactly::<1>(kind, rest)?[0]),
            "cycle" => Cycle(exactly::<1>(kind, rest)?[0]),
            "star" => Star(exactly::<1>(kind, rest)?[0]),
            "multipartite" => CompleteMultipartite(nums(rest)?),
            "rook" => match keyword_kn(rest) {
                Some(kn) => {
                    let (k, n) = kn?;
                    Rook(vec![n; k])
                }
                None => Rook(nums(rest)?),
            },
            "hamming" => {
                let (k, n) = match keyword_kn(rest) {
                    Some(kn) => kn?,
                    None => {
                        let [k, n] = exactly::<2>(kind, rest)?;
                        (k, n)
                    }
                };
                Hamming { k, n }
            }
            "lollipop" => {
                let [n, k] = exactly::<2>(kind, rest)?;
                Lollipop { n, k }
            }
            "barbell" => {
                let [n, k, m] = exactly::<3>(kind, rest)?;
                Barbell { n, k, m }
            }
            "doublestar" => {
                let [k, l] = exactly::<2>(kind, rest)?;
                DoubleStar { k, l }
            }
            "threshold" => Threshold(nums(rest)?),
            "cone" => Cone(Box::new(rest.parse()?)),
            "doublecone" => {
                let (c, base) = rest.split_once(':').ok_or_else(|| {
                    Error::InvalidFamily("doublecone expects `doublecone:<connected|disconnected>:<base>`".into())
                })?;
                let connected = match c {
                    "connected" => true,
                    "disconnected" => false,
                    _ => return invalid(format!("unknown double cone type `{c}`")),
                };
                DoubleCone {
                    connected,
                    base: Box::new(base.parse()?),
                }
            }
            "xtail" | "ytail" => {
                let [n, m, k] = exactly::<3>(kind, rest)?;
                if kind == "xtail" {
                    XTail { n, m, k }
                } else {
                    YTail { n, m, k }
                }
            }
            "cliquejoin" => {
                let (m, base) = split_count(kind, rest)?;
                CliqueJoin { m, base }
            }
            "emptyjoin" => {
                let (m, base) = split_count(kind, rest)?;
                EmptyJoin { m, base }
            }
            "power" => {
                let (k, base) = split_count(kind, rest)?;
                CartesianPower { k, base }
            }
            _ => return invalid(format!("unknown family `{kind}`")),
        };
        spec.validate()?;
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn edges(g: &WeightedGraph) -> Vec<(usize, usize)> {
        g.edges().map(|e| (e.u, e.v)).collect()
    }

    #[test]
    fn hamming_and_rook() {
        let h = FamilySpec::Hamming { k: 2, n: 3 }.build().unwrap();
        assert_eq!(h.order(), 9);
        assert_eq!(h.regular_degree(), Some(4.0));
        let r = FamilySpec::Rook(vec![5]).build().unwrap();
        assert_eq!(edges(&r), edges(&FamilySpec::Complete(5).build().unwrap()));
        let r34 = FamilySpec::Rook(vec![3, 4]).build().unwrap();
        assert_eq!(r34.regular_degree(), Some(5.0));
    }

    #[test]
    fn double_star_layout() {
        let s = FamilySpec::DoubleStar { k: 2, l: 2 }.build().unwrap();
        assert_eq!(s.order(), 6);
        assert_eq!(edges(&s), vec![(0, 2), (1, 2), (2, 3), (3, 4), (3, 5)]);
        assert!(FamilySpec::DoubleStar { k: 0, l: 2 }.build().is_err());
    }

    #[test]
    fn threshold_example() {
        let t = FamilySpec::Threshold(vec![3, 2, 4, 1]).build().unwrap();
        assert_eq!(t.order(), 10);
        // O_3 ∨ K_2: 6 cross + 1 clique edge; ∪ O_4; ∨ K_1: 9 more.
        assert_eq!(t.edge_count(), 16);
        assert_eq!(t.valency(9), 9);
        assert_eq!(t.valency(5), 1);
        assert!(t.is_connected());
    }

    #[test]
    fn lollipop_and_tails() {
        let l = FamilySpec::Lollipop { n: 4, k: 2 }.build().unwrap();
        assert_eq!(l.order(), 6);
        assert!(FamilySpec::Lollipop { n: 3, k: 2 }.build().is_err());
        let x = FamilySpec::XTail { n: 3, m: 4, k: 2 }.build().unwrap();
        assert_eq!(x.order(), 3 + 4 + 8);
        assert_eq!(x.valency(3), 4);
        let y = FamilySpec::YTail { n: 3, m: 4, k: 2 }.build().unwrap();
        assert_eq!(y.order(), 3 + 4 + 6);
        assert_eq!(y.valency(0), 2 + 4 + 1);
        let b = FamilySpec::Barbell { n: 4, k: 1, m: 5 }.build().unwrap();
        assert_eq!(b.order(), 10);
        assert!(b.has_edge(0, 9) && b.has_edge(9, 4));
    }

    #[test]
    fn cones() {
        let c = FamilySpec::Cone(Box::new(FamilySpec::Cycle(5))).build().unwrap();
        assert_eq!(c.valency(0), 5);
        let d = FamilySpec::DoubleCone {
            connected: false,
            base: Box::new(FamilySpec::Cycle(4)),
        }
        .build()
        .unwrap();
        assert!(!d.has_edge(0, 1));
        assert_eq!(d.valency(2), 4);
    }

    #[test]
    fn parse_round_trip() {
        for s in [
            "complete:5",
            "rook:3,4",
            "hamming:2,3",
            "doublestar:2,3",
            "cone:cycle:5",
            "doublecone:disconnected:cycle:4",
            "cliquejoin:3:path:4",
            "emptyjoin:2:complete:3",
            "power:3:star:4",
            "threshold:3,2,4,1",
            "multipartite:2,3,4",
            "xtail:3,4,2",
            "@some/file.graph",
        ] {
            let spec: FamilySpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
        }
        assert_eq!(
            "rook:k=2,n=5".parse::<FamilySpec>().unwrap(),
            FamilySpec::Rook(vec![5, 5])
        );
        assert!("lollipop:3,1".parse::<FamilySpec>().is_err());
        assert!("bogus:1".parse::<FamilySpec>().is_err());
        assert!("complete".parse::<FamilySpec>().is_err());
    }

    #[test]
    fn roles() {
        let star = FamilySpec::Star(4);
        assert_eq!(star.role_vertex(VertexRole::Center).unwrap(), 0);
        assert_eq!(star.role_vertex(VertexRole::Leaf).unwrap(), 1);
        let ds = FamilySpec::DoubleStar { k: 3, l: 3 };
        assert_eq!(ds.role_vertex(VertexRole::Internal).unwrap(), 3);
        assert!(FamilySpec::Cycle(5).role_vertex(VertexRole::Apex).is_err());
        assert_eq!("apex".parse::<VertexRole>().unwrap(), VertexRole::Apex);
        assert_eq!("7".parse::<VertexRole>().unwrap(), VertexRole::Vertex(7));
    }
}
