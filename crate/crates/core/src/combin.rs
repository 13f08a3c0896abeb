//! Graphs, simplicial complexes, their facet ideals and the named graph families.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{Monomial, MonomialIdeal, VarSet};

/// A finite simple graph. Edge order is significant: it becomes the
/// generator order of the edge ideal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GraphDoc", into = "GraphDoc")]
pub struct Graph {
    vertices: Vec<String>,
    edges: Vec<(usize, usize)>,
}

#[derive(Serialize, Deserialize)]
struct GraphDoc {
    vertices: Vec<String>,
    edges: Vec<(String, String)>,
}

impl TryFrom<GraphDoc> for Graph {
    type Error = Error;

    fn try_from(doc: GraphDoc) -> Result<Self> {
        let edges: Vec<(&str, &str)> = doc.edges.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        let verts: Vec<&str> = doc.vertices.iter().map(String::as_str).collect();
        Graph::from_named(&verts, &edges)
    }
}

impl From<Graph> for GraphDoc {
    fn from(g: Graph) -> Self {
        GraphDoc {
            edges: g.edges.iter().map(|&(a, b)| (g.vertices[a].clone(), g.vertices[b].clone())).collect(),
            vertices: g.vertices,
        }
    }
}

impl Graph {
    pub fn new(vertices: Vec<String>, edges: Vec<(usize, usize)>) -> Result<Self> {
        for (i, v) in vertices.iter().enumerate() {
            if vertices[..i].contains(v) {
                return Err(Error::invalid(format!("duplicate vertex {v}")));
            }
        }
        let mut seen = BTreeSet::new();
        for &(a, b) in &edges {
            if a >= vertices.len() || b >= vertices.len() {
                return Err(Error::invalid("edge endpoint out of range"));
            }
            if a == b {
                return Err(Error::invalid(format!("loop at {}", vertices[a])));
            }
            if !seen.insert((a.min(b), a.max(b))) {
                return Err(Error::invalid(format!(
                    "repeated edge {}{}",
                    vertices[a], vertices[b]
                )));
            }
        }
        Ok(Graph { vertices, edges })
    }

    /// Builds from vertex names; edges refer to names.
    pub fn from_named<S: AsRef<str>>(vertices: &[S], edges: &[(S, S)]) -> Result<Self> {
        let names: Vec<String> = vertices.iter().map(|s| s.as_ref().to_string()).collect();
        let idx = |s: &str| {
            names
                .iter()
                .position(|n| n == s)
                .ok_or_else(|| Error::invalid(format!("unknown vertex {s}")))
        };
        let edges = edges
            .iter()
            .map(|(a, b)| Ok((idx(a.as_ref())?, idx(b.as_ref())?)))
            .collect::<Result<Vec<_>>>()?;
        Graph::new(names, edges)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Graph::try_from(serde_json::from_str::<GraphDoc>(text)?)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(GraphDoc::from(self.clone())).expect("graph serializes")
    }

    /// Adjacency list text: one `v: w1 w2 ...` line per vertex. A vertex
    /// mentioned only as a neighbour is created on first use.
    pub fn from_adjacency_text(text: &str) -> Result<Self> {
        let mut names: Vec<String> = Vec::new();
        let mut edges = BTreeSet::new();
        let mut ordered = Vec::new();
        let id = |s: &str, names: &mut Vec<String>| match names.iter().position(|n| n == s) {
            Some(i) => i,
            None => {
                names.push(s.to_string());
                names.len() - 1
            }
        };
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (head, rest) = line
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("expected `vertex: neighbours`, got {line:?}")))?;
            let a = id(head.trim(), &mut names);
            for nb in rest.split([' ', ',']).filter(|s| !s.is_empty()) {
                let b = id(nb, &mut names);
                if a == b {
                    return Err(Error::invalid(format!("loop at {nb}")));
                }
                if edges.insert((a.min(b), a.max(b))) {
                    ordered.push((a, b));
                }
            }
        }
        Graph::new(names, ordered)
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|n| n == name)
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect();
        out.sort_unstable();
        out
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        (0..self.vertices.len()).map(|v| self.neighbors(v)).collect()
    }

    /// Distances from `s` (None for unreachable vertices).
    pub fn bfs(&self, s: usize) -> Vec<Option<usize>> {
        let adj = self.adjacency();
        let mut dist = vec![None; self.vertices.len()];
        dist[s] = Some(0);
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if dist[w].is_none() {
                    dist[w] = Some(dist[v].unwrap() + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.vertices.len()];
        let mut out = Vec::new();
        for s in 0..self.vertices.len() {
            if seen[s] {
                continue;
            }
            let comp: Vec<usize> = self
                .bfs(s)
                .iter()
                .enumerate()
                .filter_map(|(v, d)| d.map(|_| v))
                .collect();
            for &v in &comp {
                seen[v] = true;
            }
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    pub fn is_tree(&self) -> bool {
        !self.vertices.is_empty() && self.is_connected() && self.edges.len() + 1 == self.vertices.len()
    }

    pub fn is_cycle(&self) -> bool {
        self.vertices.len() >= 3
            && self.is_connected()
            && self.edges.len() == self.vertices.len()
            && (0..self.vertices.len()).all(|v| self.degree(v) == 2)
    }

    /// Subgraph on the kept vertices (by index), vertex order preserved.
    pub fn induced(&self, keep: &[usize]) -> Graph {
        let mut map = vec![None; self.vertices.len()];
        let mut names = Vec::new();
        for v in 0..self.vertices.len() {
            if keep.contains(&v) {
                map[v] = Some(names.len());
                names.push(self.vertices[v].clone());
            }
        }
        let edges = self
            .edges
            .iter()
            .filter_map(|&(a, b)| Some((map[a]?, map[b]?)))
            .collect();
        Graph { vertices: names, edges }
    }

    pub fn without_vertices(&self, removed: &[usize]) -> Graph {
        let keep: Vec<usize> = (0..self.vertices.len()).filter(|v| !removed.contains(v)).collect();
        self.induced(&keep)
    }

    /// One longest path (as a vertex sequence) in a tree, via double BFS.
    pub fn tree_longest_path(&self) -> Result<Vec<usize>> {
        if !self.is_tree() {
            return Err(Error::invalid("graph is not a tree"));
        }
        let far = |d: &[Option<usize>]| {
            d.iter()
                .enumerate()
                .max_by_key(|(i, x)| (x.unwrap_or(0), std::cmp::Reverse(*i)))
                .map(|(i, _)| i)
                .unwrap()
        };
        let a = far(&self.bfs(0));
        let da = self.bfs(a);
        let b = far(&da);
        // walk back from b towards a
        let mut path = vec![b];
        let mut cur = b;
        while cur != a {
            let d = da[cur].unwrap();
            cur = self
                .neighbors(cur)
                .into_iter()
                .find(|&w| da[w] == Some(d - 1))
                .expect("bfs predecessor");
            path.push(cur);
        }
        path.reverse();
        Ok(path)
    }

    pub fn as_complex(&self) -> SimplicialComplex {
        SimplicialComplex {
            vertices: self.vertices.clone(),
            facets: self
                .edges
                .iter()
                .map(|&(a, b)| vec![a.min(b), a.max(b)])
                .collect(),
        }
    }
}

/// Longest simple path length (in edges) by exhaustive search.
fn longest_path_brute(g: &Graph) -> usize {
    fn dfs(adj: &[Vec<usize>], v: usize, used: &mut [bool]) -> usize {
        used[v] = true;
        let mut best = 0;
        for &w in &adj[v] {
            if !used[w] {
                best = best.max(1 + dfs(adj, w, used));
            }
        }
        used[v] = false;
        best
    }
    let adj = g.adjacency();
    let mut used = vec![false; g.num_vertices()];
    (0..g.num_vertices()).map(|v| dfs(&adj, v, &mut used)).max().unwrap_or(0)
}

/// Length of the longest path, maximized over components. A cycle on `n`
/// vertices counts as having diameter `n`.
pub fn graph_diameter(g: &Graph) -> usize {
    g.components()
        .iter()
        .map(|comp| {
            let sub = g.induced(comp);
            if sub.is_tree() {
                sub.tree_longest_path().map(|p| p.len() - 1).unwrap_or(0)
            } else if sub.is_cycle() {
                sub.num_vertices()
            } else {
                longest_path_brute(&sub)
            }
        })
        .max()
        .unwrap_or(0)
}

/// Edge ideal over the non-isolated vertices, one generator per edge in edge order.
pub fn edge_ideal(g: &Graph) -> MonomialIdeal {
    facet_ideal(&g.as_complex())
}

/// Simplicial complex given by its facets over a named vertex set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplicialComplex {
    vertices: Vec<String>,
    facets: Vec<Vec<usize>>,
}

impl SimplicialComplex {
    /// Faces contained in other listed faces are discarded; facet order is kept.
    pub fn new(vertices: Vec<String>, faces: Vec<Vec<usize>>) -> Result<Self> {
        let mut sets: Vec<Vec<usize>> = Vec::new();
        for f in faces {
            let mut f = f;
            f.sort_unstable();
            f.dedup();
            if f.iter().any(|&v| v >= vertices.len()) {
                return Err(Error::invalid("facet vertex out of range"));
            }
            sets.push(f);
        }
        let keep = |i: usize| {
            !sets.iter().enumerate().any(|(j, g)| {
                j != i && sets[i].iter().all(|v| g.contains(v)) && (g.len() > sets[i].len() || j < i)
            })
        };
        let facets = (0..sets.len()).filter(|&i| keep(i)).map(|i| sets[i].clone()).collect();
        Ok(SimplicialComplex { vertices, facets })
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Vec<usize>] {
        &self.facets
    }

    pub fn is_empty(&self) -> bool {
        self.facets.is_empty()
    }
}

/// Facet ideal over the vertices that lie in some facet.
pub fn facet_ideal(d: &SimplicialComplex) -> MonomialIdeal {
    let used: BTreeSet<usize> = d.facets.iter().flatten().copied().collect();
    let order: Vec<usize> = used.into_iter().collect();
    let vars = VarSet::new(order.iter().map(|&v| d.vertices[v].clone())).expect("vertex names are distinct");
    let gens = d
        .facets
        .iter()
        .map(|f| {
            let mut e = vec![0u32; order.len()];
            for v in f {
                e[order.binary_search(v).unwrap()] = 1;
            }
            Monomial::from_exponents(e)
        })
        .collect();
    MonomialIdeal::from_generators(vars, gens).expect("facet monomials live in the vertex ring")
}

/// Keeps the facets contained in `w`; the vertex set is unchanged.
pub fn facet_induced(d: &SimplicialComplex, w: &[usize]) -> SimplicialComplex {
    SimplicialComplex {
        vertices: d.vertices.clone(),
        facets: d
            .facets
            .iter()
            .filter(|f| f.iter().all(|v| w.contains(v)))
            .cloned()
            .collect(),
    }
}

/// Named graph families.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum FamilySpec {
    /// An edge xy with `a` pendants at x, `b` at y and `c` common neighbours.
    Lyubeznik { a: usize, b: usize, c: usize },
    /// Path with the given number of edges.
    Path(usize),
    Cycle(usize),
    /// Center z joined to spokes x_i, spoke i carrying `arms[i]` leaves.
    Diam4 { arms: Vec<usize> },
}

impl FamilySpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            FamilySpec::Lyubeznik { .. } => Ok(()),
            FamilySpec::Path(0) => Err(Error::invalid("a path needs at least one edge")),
            FamilySpec::Path(_) => Ok(()),
            FamilySpec::Cycle(n) if *n < 3 => Err(Error::invalid(format!("cycle C{n} needs n >= 3"))),
            FamilySpec::Cycle(_) => Ok(()),
            FamilySpec::Diam4 { arms } if arms.is_empty() => {
                Err(Error::invalid("a star of stars needs at least one spoke"))
            }
            FamilySpec::Diam4 { .. } => Ok(()),
        }
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilySpec::Lyubeznik { a, b, c } => write!(f, "L({a},{b},{c})"),
            FamilySpec::Path(d) => write!(f, "P{d}"),
            FamilySpec::Cycle(n) => write!(f, "C{n}"),
            FamilySpec::Diam4 { arms } => {
                let a: Vec<String> = arms.iter().map(|x| x.to_string()).collect();
                write!(f, "T4({};{})", arms.len(), a.join(","))
            }
        }
    }
}

fn parse_list(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|x| x.parse::<usize>().map_err(|_| Error::Parse(format!("bad integer {x:?}"))))
        .collect()
}

impl FromStr for FamilySpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::Parse(format!("unrecognized family {s:?}"));
        let spec = if let Some(body) = s.strip_prefix("L(").and_then(|r| r.strip_suffix(')')) {
            let v = parse_list(body)?;
            match v[..] {
                [a, b, c] => FamilySpec::Lyubeznik { a, b, c },
                _ => return Err(bad()),
            }
        } else if let Some(body) = s.strip_prefix("T4(").and_then(|r| r.strip_suffix(')')) {
            let (n, rest) = body.split_once(';').ok_or_else(bad)?;
            let n: usize = n.parse().map_err(|_| bad())?;
            let arms = parse_list(rest)?;
            if arms.len() != n {
                return Err(Error::Parse(format!("T4 expects {n} arm sizes, got {}", arms.len())));
            }
            FamilySpec::Diam4 { arms }
        } else if let Some(n) = s.strip_prefix('P') {
            FamilySpec::Path(n.parse().map_err(|_| bad())?)
        } else if let Some(n) = s.strip_prefix('C') {
            FamilySpec::Cycle(n.parse().map_err(|_| bad())?)
        } else {
            return Err(bad());
        };
        spec.validate()?;
        Ok(spec)
    }
}

impl TryFrom<String> for FamilySpec {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<FamilySpec> for String {
    fn from(f: FamilySpec) -> Self {
        f.to_string()
    }
}

/// Builds the family with canonical names: `x, y, x1.., y1.., z1..` for
/// `L(a,b,c)`, `x1..` for paths and cycles, `z, x1.., y{i}_{j}` for `T4`.
pub fn build_family(spec: &FamilySpec) -> Result<Graph> {
    spec.validate()?;
    let mut names: Vec<String> = Vec::new();
    let mut edges = Vec::new();
    match spec {
        FamilySpec::Lyubeznik { a, b, c } => {
            names.push("x".into());
            names.push("y".into());
            let xs: Vec<usize> = (1..=*a).map(|i| push(&mut names, format!("x{i}"))).collect();
            let ys: Vec<usize> = (1..=*b).map(|j| push(&mut names, format!("y{j}"))).collect();
            let zs: Vec<usize> = (1..=*c).map(|k| push(&mut names, format!("z{k}"))).collect();
            edges.push((0, 1));
            for z in zs {
                edges.push((0, z));
                edges.push((1, z));
            }
            edges.extend(xs.into_iter().map(|v| (0, v)));
            edges.extend(ys.into_iter().map(|v| (1, v)));
        }
        FamilySpec::Path(d) => {
            names.extend((1..=d + 1).map(|i| format!("x{i}")));
            edges.extend((0..*d).map(|i| (i, i + 1)));
        }
        FamilySpec::Cycle(n) => {
            names.extend((1..=*n).map(|i| format!("x{i}")));
            edges.extend((0..n - 1).map(|i| (i, i + 1)));
            edges.push((0, n - 1));
        }
        FamilySpec::Diam4 { arms } => {
            names.push("z".into());
            let spokes: Vec<usize> = (1..=arms.len()).map(|i| push(&mut names, format!("x{i}"))).collect();
            edges.extend(spokes.iter().map(|&x| (0, x)));
            for (i, &k) in arms.iter().enumerate() {
                for j in 1..=k {
                    let y = push(&mut names, format!("y{}_{j}", i + 1));
                    edges.push((spokes[i], y));
                }
            }
        }
    }
    Graph::new(names, edges)
}

fn push(names: &mut Vec<String>, n: String) -> usize {
    names.push(n);
    names.len() - 1
}
