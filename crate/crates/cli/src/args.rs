use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, ValueEnum};
use qwsed_core::graph::read_graph;
use qwsed_core::walk::DEFAULT_FALLBACK_WINDOW;
use qwsed_core::{ClassifyOptions, FamilySpec, MatrixKind, MinimizeOptions, VertexRole, WeightedGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Where the graph comes from; exactly one of the two.
#[derive(Debug, Clone, Args)]
#[group(required = true, multiple = false)]
pub struct Source {
    /// Graph file (`n m` header, then `u v w` lines)
    #[arg(long, value_name = "PATH")]
    pub graph: Option<PathBuf>,
    /// Family spec, e.g. `complete:5`, `rook:3,4`, `doublecone:disconnected:cycle:8`
    #[arg(long, value_name = "SPEC")]
    pub family: Option<String>,
}

/// A loaded graph plus how to name it.
pub struct Loaded {
    pub graph: WeightedGraph,
    pub family: Option<FamilySpec>,
    pub name: String,
}

impl Source {
    pub fn load(&self) -> Result<Loaded> {
        match (&self.graph, &self.family) {
            (Some(path), None) => {
                let graph = read_graph(path).with_context(|| format!("reading {}", path.display()))?;
                Ok(Loaded {
                    graph,
                    family: None,
                    name: path.display().to_string(),
                })
            }
            (None, Some(spec)) => load_family(spec),
            _ => bail!("give exactly one of --graph or --family"),
        }
    }
}

pub fn load_family(spec: &str) -> Result<Loaded> {
    let family: FamilySpec = spec.parse().with_context(|| format!("family `{spec}`"))?;
    let graph = family.build().with_context(|| format!("building `{spec}`"))?;
    Ok(Loaded {
        graph,
        name: family.to_string(),
        family: Some(family),
    })
}

/// Numeric knobs shared by the analysis commands.
#[derive(Debug, Clone, Args)]
pub struct Tuning {
    /// Graph matrix: adjacency, laplacian, gen:<alpha>, norm-adj, norm-lap
    #[arg(long, default_value = "adjacency", value_parser = parse_matrix)]
    pub matrix: MatrixKind,
    /// Time window [0, T]; accepts expressions such as `pi/4` or `2*pi/sqrt3`
    #[arg(long, value_name = "T", value_parser = parse_time)]
    pub window: Option<f64>,
    /// Grid intervals (sample points for `sweep`)
    #[arg(long, value_name = "N")]
    pub grid: Option<usize>,
    /// Relative eigenvalue clustering tolerance
    #[arg(long, value_name = "X", default_value_t = qwsed_core::spectral::DEFAULT_CLUSTER_TOL)]
    pub cluster_tol: f64,
}

impl Tuning {
    pub fn minimize(&self) -> MinimizeOptions {
        let mut m = MinimizeOptions::default().with_fallback(DEFAULT_FALLBACK_WINDOW);
        m.window = self.window;
        m.grid = self.grid;
        m
    }

    pub fn classify(&self, loaded: &Loaded, exhaustive: bool) -> ClassifyOptions {
        let mut o = ClassifyOptions::default();
        o.minimize.window = self.window;
        o.minimize.grid = self.grid;
        o.cluster_tol = self.cluster_tol;
        o.exhaustive_subsets = exhaustive;
        o.family = loaded.family.clone();
        o.graph_name = Some(loaded.name.clone());
        o
    }
}

pub fn parse_matrix(s: &str) -> Result<MatrixKind, String> {
    s.parse().map_err(|e: qwsed_core::Error| e.to_string())
}

/// Vertex id, label, role keyword, or `all`.
#[derive(Debug, Clone, PartialEq)]
pub enum VertexSel {
    All,
    Id(usize),
    Role(VertexRole),
    Label(String),
}

impl FromStr for VertexSel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        if s.is_empty() {
            return Err("empty vertex selector".into());
        }
        if s == "all" {
            return Ok(VertexSel::All);
        }
        if let Ok(i) = s.parse() {
            return Ok(VertexSel::Id(i));
        }
        match s.parse::<VertexRole>() {
            Ok(r) => Ok(VertexSel::Role(r)),
            Err(_) => Ok(VertexSel::Label(s.to_string())),
        }
    }
}

impl fmt::Display for VertexSel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexSel::All => f.write_str("all"),
            VertexSel::Id(i) => write!(f, "{i}"),
            VertexSel::Role(r) => write!(f, "{r}"),
            VertexSel::Label(l) => f.write_str(l),
        }
    }
}

impl VertexSel {
    pub fn resolve(&self, loaded: &Loaded) -> Result<Vec<usize>> {
        let g = &loaded.graph;
        let one = |u: usize| -> Result<Vec<usize>> {
            g.check_vertex(u)?;
            Ok(vec![u])
        };
        match self {
            VertexSel::All => Ok((0..g.order()).collect()),
            VertexSel::Id(i) => one(*i),
            VertexSel::Label(l) => match g.vertex_by_label(l) {
                Some(u) => Ok(vec![u]),
                None => bail!("no vertex labelled `{l}`"),
            },
            VertexSel::Role(r) => {
                if let Some(u) = g.vertex_by_label(&r.to_string()) {
                    return Ok(vec![u]);
                }
                let family = loaded
                    .family
                    .as_ref()
                    .ok_or_else(|| anyhow!("role `{r}` needs --family (or a vertex labelled `{r}`)"))?;
                one(family.role_vertex(*r)?)
            }
        }
    }

    pub fn resolve_one(&self, loaded: &Loaded) -> Result<usize> {
        match self.resolve(loaded)?.as_slice() {
            [u] => Ok(*u),
            _ => bail!("this command needs a single vertex, got `{self}`"),
        }
    }
}

/// Parses a time such as `1.5`, `pi`, `2pi`, `pi/4`, `3*pi/2`, `pi/(3*sqrt3)`.
pub fn parse_time(s: &str) -> Result<f64, String> {
    let mut p = Expr { s: s.as_bytes(), i: 0 };
    let v = p.expr()?;
    p.skip_ws();
    if p.i != p.s.len() {
        return Err(format!("unexpected `{}` in time `{s}`", &s[p.i..]));
    }
    if !v.is_finite() || v < 0.0 {
        return Err(format!("time must be finite and non-negative, got {v}"));
    }
    Ok(v)
}

struct Expr<'a> {
    s: &'a [u8],
    i: usize,
}

impl Expr<'_> {
    fn skip_ws(&mut self) {
        while self.s.get(self.i).is_some_and(u8::is_ascii_whitespace) {
            self.i += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.i).copied()
    }

    fn eat(&mut self, word: &str) -> bool {
        self.skip_ws();
        if self.s[self.i..].starts_with(word.as_bytes()) {
            self.i += word.len();
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<f64, String> {
        let mut v = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.i += 1;
                    v *= self.factor()?;
                }
                Some(b'/') => {
                    self.i += 1;
                    v /= self.factor()?;
                }
                _ => return Ok(v),
            }
        }
    }

    fn factor(&mut self) -> Result<f64, String> {
        if self.eat("(") {
            let v = self.expr()?;
            if !self.eat(")") {
                return Err("missing `)`".into());
            }
            return Ok(v);
        }
        if self.eat("pi") {
            return Ok(std::f64::consts::PI);
        }
        if self.eat("sqrt") {
            let x = if self.peek() == Some(b'(') { self.factor()? } else { self.number()? };
            return Ok(x.sqrt());
        }
        let n = self.number()?;
        // `2pi` and `2sqrt3` read as products.
        if self.s[self.i..].starts_with(b"pi") || self.s[self.i..].starts_with(b"sqrt") {
            return Ok(n * self.factor()?);
        }
        Ok(n)
    }

    fn number(&mut self) -> Result<f64, String> {
        self.skip_ws();
        let start = self.i;
        while self
            .s
            .get(self.i)
            .is_some_and(|c| c.is_ascii_digit() || matches!(c, b'.' | b'e' | b'E'))
        {
            self.i += 1;
        }
        let tok = std::str::from_utf8(&self.s[start..self.i]).unwrap_or_default();
        tok.parse()
            .map_err(|_| format!("expected a number at `{}`", String::from_utf8_lossy(&self.s[start..])))
    }
}
