//! Weighted multigraphs shared by the divisor and plumbing calculi.
//!
//! Vertices are keyed by opaque string ids; every matrix and every listing
//! uses ascending id order.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, IntMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GraphKind {
    Divisor,
    Plumbing,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Vertex {
    pub id: String,
    pub weight: i64,
    #[serde(default)]
    pub genus: i64,
    #[serde(default)]
    pub boundary: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl Vertex {
    pub fn new(id: impl Into<String>, weight: i64) -> Self {
        Vertex { id: id.into(), weight, genus: 0, boundary: 0, label: None }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn is_rational(&self) -> bool {
        self.genus == 0 && self.boundary == 0
    }
}

/// Undirected edge; endpoints are stored with `u <= v`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Edge {
    pub u: String,
    pub v: String,
    #[serde(default = "plus")]
    pub sign: i8,
}

fn plus() -> i8 {
    1
}

impl Edge {
    pub fn new(a: impl Into<String>, b: impl Into<String>, sign: i8) -> Self {
        let (a, b) = (a.into(), b.into());
        if a <= b {
            Edge { u: a, v: b, sign }
        } else {
            Edge { u: b, v: a, sign }
        }
    }

    pub fn is_loop(&self) -> bool {
        self.u == self.v
    }

    pub fn touches(&self, id: &str) -> bool {
        self.u == id || self.v == id
    }

    /// The endpoint opposite to `id` (itself for a loop).
    pub fn other(&self, id: &str) -> &str {
        if self.u == id {
            &self.v
        } else {
            &self.u
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphDoc {
    kind: GraphKind,
    vertices: Vec<Vertex>,
    #[serde(default)]
    edges: Vec<Edge>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedGraph {
    pub kind: GraphKind,
    vertices: BTreeMap<String, Vertex>,
    edges: Vec<Edge>,
}

impl WeightedGraph {
    pub fn new(kind: GraphKind) -> Self {
        WeightedGraph { kind, vertices: BTreeMap::new(), edges: Vec::new() }
    }

    /// Chain with the given weights, ids `v0, v1, ...`, all signs `+`.
    pub fn chain(kind: GraphKind, weights: &[i64]) -> Self {
        let mut g = Self::new(kind);
        let width = weights.len().to_string().len();
        let ids: Vec<String> = (0..weights.len()).map(|i| format!("v{i:0width$}")).collect();
        for (id, &w) in ids.iter().zip(weights) {
            g.add_vertex(Vertex::new(id.clone(), w)).unwrap();
        }
        for pair in ids.windows(2) {
            g.add_edge(&pair[0], &pair[1], 1).unwrap();
        }
        g
    }

    /// Cycle with the given weights in cyclic order.
    pub fn cycle(kind: GraphKind, weights: &[i64]) -> Self {
        let mut g = Self::chain(kind, weights);
        let ids = g.ids();
        if ids.len() >= 2 {
            g.add_edge(&ids[ids.len() - 1], &ids[0], 1).unwrap();
        }
        g
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn ids(&self) -> Vec<String> {
        self.vertices.keys().cloned().collect()
    }

    pub fn vertices(&self) -> impl Iterator<Item = &Vertex> {
        self.vertices.values()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn contains(&self, id: &str) -> bool {
        self.vertices.contains_key(id)
    }

    pub fn vertex(&self, id: &str) -> Result<&Vertex> {
        self.vertices.get(id).ok_or_else(|| Error::UnknownVertex(id.to_string()))
    }

    pub fn vertex_mut(&mut self, id: &str) -> Result<&mut Vertex> {
        self.vertices.get_mut(id).ok_or_else(|| Error::UnknownVertex(id.to_string()))
    }

    pub fn weight(&self, id: &str) -> Result<i64> {
        Ok(self.vertex(id)?.weight)
    }

    pub fn add_vertex(&mut self, v: Vertex) -> Result<()> {
        if self.vertices.contains_key(&v.id) {
            return Err(Error::DuplicateVertex(v.id));
        }
        self.vertices.insert(v.id.clone(), v);
        Ok(())
    }

    pub fn add_edge(&mut self, a: &str, b: &str, sign: i8) -> Result<()> {
        self.vertex(a)?;
        self.vertex(b)?;
        if sign != 1 && sign != -1 {
            return Err(Error::InvalidGraph(format!("edge sign {sign} is not +1 or -1")));
        }
        let e = Edge::new(a, b, sign);
        let pos = self.edges.partition_point(|x| *x < e);
        self.edges.insert(pos, e);
        Ok(())
    }

    /// Removes the vertex and every incident edge, returning the removed edges.
    pub fn remove_vertex(&mut self, id: &str) -> Result<(Vertex, Vec<Edge>)> {
        let v = self.vertices.remove(id).ok_or_else(|| Error::UnknownVertex(id.to_string()))?;
        let (gone, kept) = std::mem::take(&mut self.edges).into_iter().partition(|e| e.touches(id));
        self.edges = kept;
        Ok((v, gone))
    }

    /// Removes one edge between `a` and `b` (the first in sorted order).
    pub fn remove_edge(&mut self, a: &str, b: &str) -> Result<Edge> {
        let probe = Edge::new(a, b, 1);
        let pos = self
            .edges
            .iter()
            .position(|e| e.u == probe.u && e.v == probe.v)
            .ok_or_else(|| Error::UnknownEdge(a.to_string(), b.to_string()))?;
        Ok(self.edges.remove(pos))
    }

    pub fn edges_between(&self, a: &str, b: &str) -> Vec<&Edge> {
        let probe = Edge::new(a, b, 1);
        self.edges.iter().filter(|e| e.u == probe.u && e.v == probe.v).collect()
    }

    pub fn incident(&self, id: &str) -> Vec<&Edge> {
        self.edges.iter().filter(|e| e.touches(id)).collect()
    }

    /// Flips the sign of every non-loop edge at `id`.
    pub fn flip_signs_at(&mut self, id: &str) {
        for e in self.edges.iter_mut() {
            if e.touches(id) && !e.is_loop() {
                e.sign = -e.sign;
            }
        }
        self.edges.sort();
    }

    pub(crate) fn set_edge_signs(&mut self, f: impl Fn(&Edge) -> i8) {
        for e in self.edges.iter_mut() {
            e.sign = f(e);
        }
        self.edges.sort();
    }

    /// Distinct neighbours other than `id` itself, ascending.
    pub fn neighbors(&self, id: &str) -> Vec<String> {
        let set: BTreeSet<&str> =
            self.edges.iter().filter(|e| e.touches(id) && !e.is_loop()).map(|e| e.other(id)).collect();
        set.into_iter().map(str::to_string).collect()
    }

    pub fn has_loop(&self, id: &str) -> bool {
        self.edges.iter().any(|e| e.is_loop() && e.u == id)
    }

    /// Smallest id of the form `{prefix}{k}`, k >= 1, not in use.
    pub fn fresh_id(&self, prefix: &str) -> String {
        (1..).map(|k| format!("{prefix}{k}")).find(|id| !self.contains(id)).unwrap()
    }

    /// Number of edge endpoints at `id`; a loop counts twice.
    pub fn branching_number(&self, id: &str) -> Result<usize> {
        self.vertex(id)?;
        Ok(self.edges.iter().map(|e| (e.u == id) as usize + (e.v == id) as usize).sum())
    }

    pub(crate) fn beta(&self, id: &str) -> usize {
        self.branching_number(id).unwrap_or(0)
    }

    /// Checks endpoint references and, for divisor graphs, the snc shape.
    pub fn validate(&self) -> Result<()> {
        for e in &self.edges {
            for x in [&e.u, &e.v] {
                if !self.contains(x) {
                    return Err(Error::InvalidGraph(format!("edge endpoint `{x}` is not a vertex")));
                }
            }
            if e.sign != 1 && e.sign != -1 {
                return Err(Error::InvalidGraph(format!("edge sign {} is not +1 or -1", e.sign)));
            }
        }
        if self.kind == GraphKind::Divisor {
            let mut seen = BTreeSet::new();
            for e in &self.edges {
                if e.is_loop() {
                    return Err(Error::InvalidGraph(format!("divisor graph has a loop at `{}`", e.u)));
                }
                if e.sign != 1 {
                    return Err(Error::InvalidGraph(format!(
                        "divisor graph edge `{}`-`{}` has sign -1",
                        e.u, e.v
                    )));
                }
                if !seen.insert((e.u.as_str(), e.v.as_str())) {
                    return Err(Error::InvalidGraph(format!(
                        "divisor graph has a multi-edge `{}`-`{}`",
                        e.u, e.v
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: GraphDoc = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let mut g = WeightedGraph::new(doc.kind);
        for v in doc.vertices {
            g.add_vertex(v)?;
        }
        for e in doc.edges {
            if !g.contains(&e.u) {
                return Err(Error::InvalidGraph(format!("edge endpoint `{}` is not a vertex", e.u)));
            }
            if !g.contains(&e.v) {
                return Err(Error::InvalidGraph(format!("edge endpoint `{}` is not a vertex", e.v)));
            }
            g.add_edge(&e.u, &e.v, e.sign)?;
        }
        g.validate()?;
        Ok(g)
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let doc = GraphDoc {
            kind: self.kind,
            vertices: self.vertices.values().cloned().collect(),
            edges: self.edges.clone(),
        };
        serde_json::to_value(doc).expect("graph serializes")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("graph serializes")
    }

    /// Graphviz rendering: vertex weight, genus and boundary in the label,
    /// `-` edges dashed.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph G {\n");
        for v in self.vertices.values() {
            let mut label = format!("{}\\n{}", v.label.as_deref().unwrap_or(&v.id), v.weight);
            if v.genus != 0 {
                label.push_str(&format!(" [g={}]", v.genus));
            }
            if v.boundary != 0 {
                label.push_str(&format!(" [r={}]", v.boundary));
            }
            out.push_str(&format!("  \"{}\" [label=\"{}\"];\n", v.id, label));
        }
        for e in &self.edges {
            let style = if e.sign < 0 { " [style=dashed, label=\"-\"]" } else { "" };
            out.push_str(&format!("  \"{}\" -- \"{}\"{};\n", e.u, e.v, style));
        }
        out.push_str("}\n");
        out
    }

    /// Induced subgraph on `keep`.
    pub fn induced(&self, keep: &BTreeSet<String>) -> WeightedGraph {
        let mut g = WeightedGraph::new(self.kind);
        for (id, v) in &self.vertices {
            if keep.contains(id) {
                g.vertices.insert(id.clone(), v.clone());
            }
        }
        g.edges = self.edges.iter().filter(|e| keep.contains(&e.u) && keep.contains(&e.v)).cloned().collect();
        g
    }

    /// Connected components, each sorted, listed by smallest id.
    pub fn components(&self) -> Vec<Vec<String>> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for id in self.vertices.keys() {
            if seen.contains(id) {
                continue;
            }
            let mut comp = BTreeSet::new();
            let mut queue = VecDeque::from([id.clone()]);
            seen.insert(id.clone());
            while let Some(x) = queue.pop_front() {
                for y in self.neighbors(&x) {
                    if seen.insert(y.clone()) {
                        queue.push_back(y);
                    }
                }
                comp.insert(x);
            }
            out.push(comp.into_iter().collect());
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// `#edges - #vertices + #components`.
    pub fn first_betti(&self) -> usize {
        self.edges.len() + self.components().len() - self.vertices.len()
    }

    /// Intersection matrix over `subset` (default: all vertices), rows in
    /// ascending id order. Off-diagonal entries are signed edge counts; each
    /// loop adds `2 * sign` to its diagonal entry.
    pub fn intersection_matrix(&self, subset: Option<&[String]>) -> Result<IntMatrix> {
        let ids: Vec<String> = match subset {
            None => self.ids(),
            Some(s) => {
                let set: BTreeSet<String> = s.iter().cloned().collect();
                for id in &set {
                    self.vertex(id)?;
                }
                set.into_iter().collect()
            }
        };
        let index: BTreeMap<&str, usize> = ids.iter().enumerate().map(|(i, id)| (id.as_str(), i)).collect();
        let mut m = vec![vec![0i64; ids.len()]; ids.len()];
        for (i, id) in ids.iter().enumerate() {
            m[i][i] = self.vertices[id].weight;
        }
        for e in &self.edges {
            if let (Some(&i), Some(&j)) = (index.get(e.u.as_str()), index.get(e.v.as_str())) {
                if i == j {
                    m[i][i] += 2 * e.sign as i64;
                } else {
                    m[i][j] += e.sign as i64;
                    m[j][i] += e.sign as i64;
                }
            }
        }
        Ok(IntMatrix::from_rows(&m))
    }

    /// Sylvester criterion on the intersection matrix of `subset`.
    pub fn is_negative_definite(&self, subset: Option<&[String]>) -> Result<bool> {
        let m = self.intersection_matrix(subset)?;
        for k in 1..=m.rows() {
            let idx: Vec<usize> = (0..k).collect();
            let d = m.submatrix(&idx).determinant();
            // (-1)^k d_k > 0
            let ok = if k % 2 == 0 { d > 0.into() } else { d < 0.into() };
            if !ok {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Branching set: vertices with `beta >= 3` or nonzero genus/boundary.
    pub fn branching_set(&self) -> BTreeSet<String> {
        self.vertices
            .values()
            .filter(|v| self.beta(&v.id) >= 3 || v.genus != 0 || v.boundary != 0)
            .map(|v| v.id.clone())
            .collect()
    }

    /// Splits the graph at its branching set.
    pub fn classify_segments(&self) -> SegmentDecomposition {
        let branching = self.branching_set();
        let rest: BTreeSet<String> = self.vertices.keys().filter(|id| !branching.contains(*id)).cloned().collect();
        let sub = self.induced(&rest);
        let mut segments = Vec::new();
        for comp in sub.components() {
            segments.push(self.segment_of(&sub, comp, &branching));
        }
        SegmentDecomposition { branching, segments }
    }

    fn segment_of(&self, sub: &WeightedGraph, comp: Vec<String>, branching: &BTreeSet<String>) -> Segment {
        let comp_set: BTreeSet<String> = comp.iter().cloned().collect();
        let inner_edges = sub.edges.iter().filter(|e| comp_set.contains(&e.u)).count();
        let attachments: Vec<String> = comp
            .iter()
            .flat_map(|id| {
                self.edges
                    .iter()
                    .filter(move |e| e.touches(id) && branching.contains(e.other(id)))
                    .map(move |e| e.other(id).to_string())
            })
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let circular = inner_edges == comp.len();
        let order = if circular {
            walk_cycle(sub, &comp)
        } else {
            // a path: start at the free tip if exactly one end is free
            let ends: Vec<&String> = comp.iter().filter(|id| sub.beta(id) <= 1).collect();
            let start = if comp.len() == 1 {
                comp[0].clone()
            } else {
                let free: Vec<&&String> = ends.iter().filter(|id| self.beta(id) == 1).collect();
                if free.len() == 1 {
                    (*free[0]).clone()
                } else {
                    ends[0].clone()
                }
            };
            walk_path(sub, &start)
        };
        let entries = order.iter().map(|id| -self.vertices[id].weight).collect();
        let crossing = self.edges.iter().filter(|e| comp_set.contains(&e.u) != comp_set.contains(&e.v)).count();
        let is_twig = !circular && crossing == 1;
        Segment { vertices: order, chain_type: ChainType { entries, circular }, is_twig, attachments }
    }

    /// Maximal twigs: chains that meet the rest of the graph by a single edge
    /// at one end and end in a tip. Vertices are listed tip first.
    pub fn twigs(&self) -> Vec<Segment> {
        self.classify_segments().segments.into_iter().filter(|s| s.is_twig).collect()
    }
}

fn walk_path(g: &WeightedGraph, start: &str) -> Vec<String> {
    let mut order = vec![start.to_string()];
    let mut prev: Option<String> = None;
    let mut cur = start.to_string();
    loop {
        let next = g.neighbors(&cur).into_iter().find(|n| Some(n) != prev.as_ref() && !order.contains(n));
        match next {
            Some(n) => {
                order.push(n.clone());
                prev = Some(cur);
                cur = n;
            }
            None => return order,
        }
    }
}

fn walk_cycle(g: &WeightedGraph, comp: &[String]) -> Vec<String> {
    let start = comp[0].clone();
    let mut order = vec![start.clone()];
    let mut cur = start;
    while order.len() < comp.len() {
        let next = g.neighbors(&cur).into_iter().find(|n| !order.contains(n));
        match next {
            Some(n) => {
                order.push(n.clone());
                cur = n;
            }
            None => break,
        }
    }
    order
}

impl fmt::Display for WeightedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vs: Vec<String> = self.vertices.values().map(|v| format!("{}({})", v.id, v.weight)).collect();
        let es: Vec<String> = self
            .edges
            .iter()
            .map(|e| format!("{}{}{}", e.u, if e.sign > 0 { "+" } else { "-" }, e.v))
            .collect();
        write!(f, "{{{}; {}}}", vs.join(" "), es.join(" "))
    }
}

/// Sequence of types (negated weights), linear or circular.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ChainType {
    pub entries: Vec<i64>,
    pub circular: bool,
}

impl ChainType {
    pub fn chain(entries: Vec<i64>) -> Self {
        ChainType { entries, circular: false }
    }

    pub fn circular(entries: Vec<i64>) -> Self {
        ChainType { entries, circular: true }
    }

    pub fn reversed(&self) -> Self {
        let mut entries = self.entries.clone();
        entries.reverse();
        ChainType { entries, circular: self.circular }
    }
}

impl fmt::Display for ChainType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        let mut i = 0;
        while i < self.entries.len() {
            let a = self.entries[i];
            let mut k = 1;
            while i + k < self.entries.len() && self.entries[i + k] == a {
                k += 1;
            }
            if k == 1 {
                parts.push(a.to_string());
            } else {
                parts.push(format!("({a})_{k}"));
            }
            i += k;
        }
        let body = parts.join(",");
        if self.circular {
            write!(f, "(({body}))")
        } else {
            write!(f, "[{body}]")
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Segment {
    /// Vertex ids in chain order; tip first for twigs.
    pub vertices: Vec<String>,
    pub chain_type: ChainType,
    pub is_twig: bool,
    /// Branching vertices adjacent to the segment.
    pub attachments: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SegmentDecomposition {
    pub branching: BTreeSet<String>,
    pub segments: Vec<Segment>,
}

/// Cokernel of the intersection matrix plus `Z^{b_1}`.
pub fn graph_homology(g: &WeightedGraph) -> linalg::AbelianGroup {
    let m = g.intersection_matrix(None).expect("all ids known");
    linalg::cokernel(&m).direct_sum(&linalg::AbelianGroup::free(g.first_betti()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn four_cycle(w: [i64; 4]) -> WeightedGraph {
        WeightedGraph::cycle(GraphKind::Divisor, &w)
    }

    #[test]
    fn matrices() {
        let g = WeightedGraph::chain(GraphKind::Divisor, &[-2]);
        assert_eq!(g.intersection_matrix(None).unwrap().to_i64_rows(), vec![vec![-2]]);
        let g = WeightedGraph::chain(GraphKind::Divisor, &[-2, -2]);
        assert_eq!(g.intersection_matrix(None).unwrap().to_i64_rows(), vec![vec![-2, 1], vec![1, -2]]);
        let m = four_cycle([0, 0, -1, -1]).intersection_matrix(None).unwrap();
        assert_eq!(
            m.to_i64_rows(),
            vec![vec![0, 1, 0, 1], vec![1, 0, 1, 0], vec![0, 1, -1, 1], vec![1, 0, 1, -1]]
        );
        assert_eq!(m.determinant(), BigInt::from(-1));
        assert!(g.intersection_matrix(Some(&["nope".into()])).is_err());
    }

    #[test]
    fn loops_on_the_diagonal() {
        let mut g = WeightedGraph::new(GraphKind::Plumbing);
        g.add_vertex(Vertex::new("a", 1)).unwrap();
        g.add_edge("a", "a", -1).unwrap();
        assert_eq!(g.intersection_matrix(None).unwrap().to_i64_rows(), vec![vec![-1]]);
        assert_eq!(g.branching_number("a").unwrap(), 2);
        assert_eq!(g.first_betti(), 1);
    }

    #[test]
    fn branching() {
        let g = WeightedGraph::chain(GraphKind::Divisor, &[-2, -2, -2]);
        assert_eq!(g.branching_number("v0").unwrap(), 1);
        assert_eq!(g.branching_number("v1").unwrap(), 2);
        let single = WeightedGraph::chain(GraphKind::Divisor, &[0]);
        assert_eq!(single.branching_number("v0").unwrap(), 0);
        assert!(g.branching_number("x").is_err());
    }

    #[test]
    fn segments_of_cycle_and_star() {
        let d = four_cycle([0, 0, 0, 0]).classify_segments();
        assert!(d.branching.is_empty());
        assert_eq!(d.segments.len(), 1);
        assert!(d.segments[0].chain_type.circular);

        let mut star = WeightedGraph::new(GraphKind::Divisor);
        star.add_vertex(Vertex::new("c", -1)).unwrap();
        for (i, w) in [-2, -3, -6].into_iter().enumerate() {
            let id = format!("t{i}");
            star.add_vertex(Vertex::new(id.clone(), w)).unwrap();
            star.add_edge("c", &id, 1).unwrap();
        }
        let d = star.classify_segments();
        assert_eq!(d.branching, BTreeSet::from(["c".to_string()]));
        assert_eq!(d.segments.len(), 3);
        assert!(d.segments.iter().all(|s| s.is_twig));
    }

    #[test]
    fn chain_type_rendering() {
        assert_eq!(ChainType::chain(vec![4, 2, 2]).to_string(), "[4,(2)_2]");
        assert_eq!(ChainType::circular(vec![0, 0, 1, 1]).to_string(), "(((0)_2,(1)_2))");
        assert_eq!(ChainType::chain(vec![]).to_string(), "[]");
    }

    #[test]
    fn negative_definite() {
        let g = WeightedGraph::chain(GraphKind::Divisor, &[-2]);
        assert!(g.is_negative_definite(None).unwrap());
        let g = WeightedGraph::chain(GraphKind::Divisor, &[-2; 5]);
        assert!(g.is_negative_definite(None).unwrap());
        let g = WeightedGraph::chain(GraphKind::Divisor, &[0]);
        assert!(!g.is_negative_definite(None).unwrap());
    }

    #[test]
    fn betti() {
        assert_eq!(WeightedGraph::chain(GraphKind::Divisor, &[1, 2, 3]).first_betti(), 0);
        assert_eq!(four_cycle([0, 0, 0, 0]).first_betti(), 1);
    }

    #[test]
    fn json_round_trip() {
        let mut g = four_cycle([0, 0, -1, -1]);
        g.vertex_mut("v0").unwrap().label = Some("L".into());
        let back = WeightedGraph::from_json(&g.to_json()).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn json_rejects() {
        let unknown = r#"{"kind":"divisor","vertices":[{"id":"a","weight":0,"colour":1}],"edges":[]}"#;
        assert!(matches!(WeightedGraph::from_json(unknown), Err(Error::Parse(_))));
        let dangling = r#"{"kind":"divisor","vertices":[{"id":"a","weight":0}],"edges":[{"u":"a","v":"b","sign":1}]}"#;
        assert!(matches!(WeightedGraph::from_json(dangling), Err(Error::InvalidGraph(_))));
        let looped = r#"{"kind":"divisor","vertices":[{"id":"a","weight":0}],"edges":[{"u":"a","v":"a","sign":1}]}"#;
        assert!(matches!(WeightedGraph::from_json(looped), Err(Error::InvalidGraph(_))));
        let extra = r#"{"kind":"divisor","vertices":[],"edges":[],"x":1}"#;
        assert!(WeightedGraph::from_json(extra).is_err());
    }

    #[test]
    fn homology_of_chain() {
        let g = WeightedGraph::chain(GraphKind::Plumbing, &[-2, -2]);
        assert_eq!(graph_homology(&g).to_string(), "Z/3");
    }
}
