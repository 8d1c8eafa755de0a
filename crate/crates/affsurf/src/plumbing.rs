//! Plumbing calculus on graph manifolds: moves R1 and R3, normal forms,
//! orientation reversal, Seifert data and `H1`.
//!
//! Edge signs are tracked everywhere; only their products around cycles are
//! invariants, and [`canonicalize_signs`] makes every spanning-forest edge
//! positive.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::divisor::BlowupCenter;
use crate::error::{precondition, Error, Result};
use crate::graph::{graph_homology, ChainType, GraphKind, Vertex, WeightedGraph};
use crate::iso::canonical_order;
use crate::linalg::AbelianGroup;

/// Cap on R1/R3 applications in [`normalize`].
pub const NORMALIZE_BUDGET: usize = 10_000;

/// Same graph as a plumbing graph with every edge labelled `+`.
pub fn from_divisor_graph(g: &WeightedGraph) -> WeightedGraph {
    let mut p = g.clone();
    p.kind = GraphKind::Plumbing;
    p.set_edge_signs(|_| 1);
    p
}

/// Flips signs so that a spanning forest, grown from the smallest id of each
/// component, has only `+` edges.
pub fn canonicalize_signs(g: &WeightedGraph) -> WeightedGraph {
    let mut h = g.clone();
    let mut seen = BTreeSet::new();
    for root in g.ids() {
        if !seen.insert(root.clone()) {
            continue;
        }
        let mut stack = vec![root];
        while let Some(x) = stack.pop() {
            for y in h.neighbors(&x) {
                if seen.insert(y.clone()) {
                    // the first edge in sorted order is the tree edge
                    if h.edges_between(&x, &y)[0].sign < 0 {
                        h.flip_signs_at(&y);
                    }
                    stack.push(y);
                }
            }
        }
    }
    h
}

fn check_rational(g: &WeightedGraph, v: &str) -> Result<()> {
    let x = g.vertex(v)?;
    if x.is_rational() {
        Ok(())
    } else {
        precondition(format!("`{v}` has genus or boundary"))
    }
}

/// R1: blows down a rational vertex of weight `ε = ±1` with at most two edge
/// endpoints and no loop. Each neighbour loses `ε` per removed edge; two
/// neighbours are joined by an edge of sign `-ε s1 s2`.
pub fn move_r1(g: &WeightedGraph, v: &str) -> Result<WeightedGraph> {
    check_rational(g, v)?;
    let eps = g.weight(v)?;
    if eps.abs() != 1 {
        return precondition(format!("R1 needs weight +-1 at `{v}`, found {eps}"));
    }
    if g.has_loop(v) {
        return precondition(format!("R1 at `{v}`: vertex carries a loop"));
    }
    if g.beta(v) > 2 {
        return precondition(format!("R1 at `{v}`: branching vertex"));
    }
    let mut h = g.clone();
    let (_, edges) = h.remove_vertex(v)?;
    for e in &edges {
        h.vertex_mut(e.other(v))?.weight -= eps;
    }
    if let [e1, e2] = edges.as_slice() {
        h.add_edge(e1.other(v), e2.other(v), (-eps as i8) * e1.sign * e2.sign)?;
    }
    Ok(h)
}

/// R3: absorbs a rational 0-vertex with two edges to distinct vertices `u`,
/// `w`. The one with the larger id is merged into the other; weights, genus
/// and boundary add up. When the removed signs multiply to `+1` the merged
/// vertex's edges are flipped first, which keeps the sign product of every
/// cycle through `v` equal to that of the matching cycle after the merge.
pub fn move_r3(g: &WeightedGraph, v: &str) -> Result<WeightedGraph> {
    check_rational(g, v)?;
    if g.weight(v)? != 0 {
        return precondition(format!("R3 needs weight 0 at `{v}`"));
    }
    if g.has_loop(v) || g.beta(v) != 2 {
        return precondition(format!("R3 at `{v}`: needs exactly two edges and no loop"));
    }
    let edges: Vec<_> = g.incident(v).into_iter().cloned().collect();
    let (a, b) = (edges[0].other(v).to_string(), edges[1].other(v).to_string());
    if a == b {
        return precondition(format!("R3 at `{v}`: both edges lead to `{a}`, self-absorption is out of scope"));
    }
    let (keep, gone) = if a < b { (a, b) } else { (b, a) };
    let mut h = g.clone();
    h.remove_vertex(v)?;
    if edges[0].sign * edges[1].sign == 1 {
        h.flip_signs_at(&gone);
    }
    let (gv, gone_edges) = h.remove_vertex(&gone)?;
    let k = h.vertex_mut(&keep)?;
    k.weight += gv.weight;
    k.genus += gv.genus;
    k.boundary += gv.boundary;
    for e in gone_edges {
        let other = if e.is_loop() { keep.clone() } else { e.other(&gone).to_string() };
        h.add_edge(&keep, &other, e.sign)?;
    }
    Ok(h)
}

/// Inverse of R1: a new `±1` vertex on a vertex (as a leaf) or inside an edge.
pub fn blow_up_plumbing(g: &WeightedGraph, center: &BlowupCenter, eps: i64) -> Result<(WeightedGraph, String)> {
    if eps.abs() != 1 {
        return precondition("blowup weight must be +1 or -1");
    }
    let mut h = g.clone();
    let new = h.fresh_id("P");
    h.add_vertex(Vertex::new(new.clone(), eps))?;
    match center {
        BlowupCenter::OnVertex(x) => {
            h.vertex_mut(x)?.weight += eps;
            h.add_edge(x, &new, 1)?;
        }
        BlowupCenter::OnEdge(x, y) => {
            let s = h.edges_between(x, y).first().map(|e| e.sign).ok_or_else(|| Error::UnknownEdge(x.clone(), y.clone()))?;
            h.remove_edge(x, y)?;
            for z in [x, y] {
                h.vertex_mut(z)?.weight += eps;
            }
            h.add_edge(x, &new, 1)?;
            h.add_edge(&new, y, (-eps as i8) * s)?;
        }
    }
    Ok((h, new))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NormalityReport {
    pub normal: bool,
    pub violations: Vec<String>,
}

/// Checks that non-branching vertices have weight at most -2, that a
/// trivalent vertex with two `[2]` leaves only occurs in a fork, and that a
/// cycle of (-2)-vertices carries at least two `-` edges.
pub fn is_normal(g: &WeightedGraph) -> Result<NormalityReport> {
    if let Some(v) = g.vertices().find(|v| v.genus != 0) {
        return Err(Error::OutOfScope(format!("vertex `{}` has nonzero genus", v.id)));
    }
    let mut violations = Vec::new();
    for v in g.vertices() {
        if g.beta(&v.id) <= 2 && v.boundary == 0 && v.weight > -2 {
            violations.push(format!("non-branching vertex `{}` has weight {}", v.id, v.weight));
        }
    }
    let is_two_leaf = |x: &str| g.beta(x) == 1 && g.weight(x) == Ok(-2) && g.vertex(x).map(|v| v.is_rational()).unwrap_or(false);
    for v in g.vertices() {
        if g.beta(&v.id) != 3 || v.boundary != 0 {
            continue;
        }
        let leaves = g.neighbors(&v.id).into_iter().filter(|n| is_two_leaf(n)).count();
        if leaves >= 2 && !is_fork(g) {
            violations.push(format!("`{}` meets two [2]-twigs outside a fork", v.id));
        }
    }
    if is_cycle_graph(g) && g.vertices().all(|v| v.weight == -2) {
        let negative = g.edges().iter().filter(|e| e.sign < 0).count();
        if negative < 2 {
            violations.push(format!("cycle of (-2)-vertices with {negative} negative edges"));
        }
    }
    Ok(NormalityReport { normal: violations.is_empty(), violations })
}

/// Tree with a single branching vertex of valence three.
fn is_fork(g: &WeightedGraph) -> bool {
    let branching: Vec<String> = g.ids().into_iter().filter(|v| g.beta(v) >= 3).collect();
    g.is_connected() && g.first_betti() == 0 && branching.len() == 1 && g.beta(&branching[0]) == 3
}

/// Connected, nonempty, every vertex with exactly two edge endpoints.
fn is_cycle_graph(g: &WeightedGraph) -> bool {
    !g.is_empty() && g.is_connected() && g.ids().iter().all(|v| g.beta(v) == 2)
}

/// Vertices of a cycle graph in cyclic order with the signs of the edges
/// leaving each of them.
fn walk_cycle(g: &WeightedGraph) -> Vec<(String, i8)> {
    let ids = g.ids();
    let start = ids[0].clone();
    let mut used = vec![false; g.edges().len()];
    let mut out = Vec::new();
    let mut cur = start.clone();
    loop {
        let k = (0..g.edges().len()).find(|&k| !used[k] && g.edges()[k].touches(&cur)).expect("cycle edge");
        used[k] = true;
        let e = &g.edges()[k];
        out.push((cur.clone(), e.sign));
        cur = e.other(&cur).to_string();
        if cur == start {
            return out;
        }
    }
}

/// Monodromy `ε ∏ [[-e_i, 1], [-1, 0]]` of the torus bundle of a cycle graph,
/// with `ε` the product of the edge signs.
pub fn cycle_monodromy(g: &WeightedGraph) -> Option<[[i64; 2]; 2]> {
    if !is_cycle_graph(g) {
        return None;
    }
    let mut a = [[1i64, 0], [0, 1]];
    let mut eps = 1i64;
    for (v, s) in walk_cycle(g) {
        let e = g.weight(&v).ok()?;
        let m = [[-e, 1], [-1, 0]];
        a = [
            [a[0][0] * m[0][0] + a[0][1] * m[1][0], a[0][0] * m[0][1] + a[0][1] * m[1][1]],
            [a[1][0] * m[0][0] + a[1][1] * m[1][0], a[1][0] * m[0][1] + a[1][1] * m[1][1]],
        ];
        eps *= s as i64;
    }
    Some(a.map(|row| row.map(|x| eps * x)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Certificate {
    Generic,
    SeifertSpecial,
}

/// Seifert invariants `M(g, r; f_1, ..., f_k)` with central weight `e`. A
/// twig with continued fraction `α/β` contributes `f = (α - β)/α`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeifertData {
    pub base_genus: i64,
    pub boundary_count: u32,
    /// sorted in decreasing order
    pub exceptional: Vec<BigRational>,
    pub central_weight: i64,
}

impl SeifertData {
    pub fn new(base_genus: i64, boundary_count: u32, mut exceptional: Vec<BigRational>, central_weight: i64) -> Self {
        exceptional.sort_by(|a, b| b.cmp(a));
        SeifertData { base_genus, boundary_count, exceptional, central_weight }
    }

    /// `e + Σ (1 - f_i)`.
    pub fn euler_number(&self) -> BigRational {
        self.exceptional
            .iter()
            .fold(BigRational::from_integer(self.central_weight.into()), |acc, f| acc + BigRational::one() - f)
    }
}

impl fmt::Display for SeifertData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fibers: Vec<String> = self.exceptional.iter().map(|x| x.to_string()).collect();
        write!(f, "M({},{};{})", self.base_genus, self.boundary_count, fibers.join(","))
    }
}

impl Serialize for SeifertData {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("SeifertData", 5)?;
        st.serialize_field("base_genus", &self.base_genus)?;
        st.serialize_field("boundary_count", &self.boundary_count)?;
        let fibers: Vec<String> = self.exceptional.iter().map(|x| x.to_string()).collect();
        st.serialize_field("exceptional", &fibers)?;
        st.serialize_field("central_weight", &self.central_weight)?;
        st.serialize_field("euler_number", &self.euler_number().to_string())?;
        st.end()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalForm {
    pub graph: WeightedGraph,
    /// canonical vertex order
    pub order: Vec<String>,
    pub certificate: Certificate,
    /// present whenever the graph is a star
    pub seifert: Option<SeifertData>,
}

impl NormalForm {
    fn finish(graph: WeightedGraph, certificate: Certificate) -> Self {
        let graph = canonicalize_signs(&graph);
        let order = canonical_order(&graph);
        let seifert = seifert_from_star(&graph, None).ok();
        NormalForm { graph, order, certificate, seifert }
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::json!({
            "graph": self.graph.to_json_value(),
            "order": self.order,
            "certificate": self.certificate,
            "seifert": self.seifert,
        })
    }
}

fn r1_candidate(g: &WeightedGraph) -> Option<String> {
    g.vertices()
        .find(|v| v.is_rational() && v.weight.abs() == 1 && !g.has_loop(&v.id) && g.beta(&v.id) <= 2)
        .map(|v| v.id.clone())
}

fn r3_candidate(g: &WeightedGraph) -> Option<String> {
    g.vertices()
        .find(|v| v.is_rational() && v.weight == 0 && !g.has_loop(&v.id) && g.beta(&v.id) == 2 && g.neighbors(&v.id).len() == 2)
        .map(|v| v.id.clone())
}

/// Center `-2` with twigs `[2]`, `[2,2]`, `[(2)_5]`.
fn e9_star() -> WeightedGraph {
    star(-2, &[vec![2], vec![2, 2], vec![2; 5]])
}

/// Star with the given center weight and twig types read outward.
fn star(center: i64, twigs: &[Vec<i64>]) -> WeightedGraph {
    let mut g = WeightedGraph::new(GraphKind::Plumbing);
    g.add_vertex(Vertex::new("c", center)).unwrap();
    for (i, t) in twigs.iter().enumerate() {
        let mut prev = "c".to_string();
        for (k, &a) in t.iter().enumerate() {
            let id = format!("t{}_{}", i + 1, k + 1);
            g.add_vertex(Vertex::new(id.clone(), -a)).unwrap();
            g.add_edge(&prev, &id, 1).unwrap();
            prev = id;
        }
    }
    g
}

/// Applies R1 and R3 until neither applies, then certifies the result.
/// Cycle graphs of order-6 monodromy with trace 1 are replaced by the
/// matching Seifert star. Anything the implemented moves cannot bring to a
/// normal graph is reported as out of scope.
pub fn normalize(g: &WeightedGraph) -> Result<NormalForm> {
    if g.is_empty() || !g.is_connected() {
        return precondition("normalize needs a connected nonempty graph");
    }
    if let Some(v) = g.vertices().find(|v| v.genus != 0) {
        return Err(Error::OutOfScope(format!("vertex `{}` has nonzero genus", v.id)));
    }
    let mut h = g.clone();
    h.kind = GraphKind::Plumbing;
    let mut steps = 0;
    loop {
        if steps >= NORMALIZE_BUDGET {
            return Err(Error::Budget(NORMALIZE_BUDGET));
        }
        steps += 1;
        if let Some(v) = r1_candidate(&h) {
            h = move_r1(&h, &v)?;
            continue;
        }
        if let Some(v) = r3_candidate(&h) {
            h = move_r3(&h, &v)?;
            continue;
        }
        break;
    }
    if let Some(a) = cycle_monodromy(&h) {
        let trace = a[0][0] + a[1][1];
        if trace.abs() < 2 {
            return match (trace, a[1][0].signum()) {
                (1, 1) => Ok(NormalForm::finish(e9_star(), Certificate::SeifertSpecial)),
                (1, -1) => Ok(NormalForm::finish(star(-1, &[vec![2], vec![3], vec![6]]), Certificate::SeifertSpecial)),
                _ => Err(Error::OutOfScope(format!("periodic torus bundle with monodromy {a:?}"))),
            };
        }
    }
    let report = is_normal(&h)?;
    if !report.normal {
        return Err(Error::OutOfScope(format!("reduced graph {h} is not normal: {}", report.violations.join("; "))));
    }
    Ok(NormalForm::finish(h, Certificate::Generic))
}

/// Twig types read from the attachment outward.
fn twig_types(seg: &crate::graph::Segment) -> Vec<i64> {
    seg.chain_type.entries.iter().rev().copied().collect()
}

/// `-M`: edge signs negate, a twig `α/β` becomes `α/(α-β)` and a vertex
/// with `k` twigs gets weight `-e - k`. A chain `p/q` becomes `p/(p-q)`.
pub fn reverse_orientation(nf: &NormalForm) -> Result<NormalForm> {
    let g = &nf.graph;
    let mut h = WeightedGraph::new(GraphKind::Plumbing);
    if g.is_empty() {
        return Ok(NormalForm::finish(h, nf.certificate));
    }
    if g.first_betti() == 0 && g.ids().iter().all(|v| g.beta(v) <= 2) && g.vertices().all(Vertex::is_rational) {
        let ordered = chain_order(g);
        let types: Vec<i64> = ordered.iter().map(|v| -g.weight(v).unwrap()).collect();
        let (p, q) = continued_fraction_eval(&ChainType::chain(types.clone()));
        if types.iter().any(|&a| a < 2) {
            return Err(Error::OutOfScope(format!("chain {} is not a lens space chain", ChainType::chain(types))));
        }
        let rev = continued_fraction_expand(p, p - q)?;
        let mut prev: Option<String> = None;
        for (k, a) in rev.entries.iter().enumerate() {
            let id = ordered.get(k).cloned().unwrap_or_else(|| h.fresh_id("R"));
            h.add_vertex(Vertex::new(id.clone(), -a))?;
            if let Some(p) = prev {
                h.add_edge(&p, &id, 1)?;
            }
            prev = Some(id);
        }
        return Ok(NormalForm::finish(h, nf.certificate));
    }
    let twigs = g.twigs();
    let twig_vertices: BTreeSet<String> = twigs.iter().flat_map(|t| t.vertices.iter().cloned()).collect();
    let mut twig_count: BTreeMap<String, i64> = BTreeMap::new();
    for t in &twigs {
        *twig_count.entry(t.attachments[0].clone()).or_default() += 1;
    }
    for v in g.vertices().filter(|v| !twig_vertices.contains(&v.id)) {
        let mut w = v.clone();
        w.weight = -v.weight - twig_count.get(&v.id).copied().unwrap_or(0);
        h.add_vertex(w)?;
    }
    for e in g.edges() {
        if !twig_vertices.contains(&e.u) && !twig_vertices.contains(&e.v) {
            h.add_edge(&e.u, &e.v, -e.sign)?;
        }
    }
    for t in &twigs {
        let types = twig_types(t);
        if types.iter().any(|&a| a < 2) {
            return Err(Error::OutOfScope(format!("twig {} has an entry below 2", ChainType::chain(types))));
        }
        let (alpha, beta) = continued_fraction_eval(&ChainType::chain(types));
        let rev = continued_fraction_expand(alpha, alpha - beta)?;
        let mut old: Vec<String> = t.vertices.iter().rev().cloned().collect();
        let mut prev = t.attachments[0].clone();
        for (k, a) in rev.entries.iter().enumerate() {
            let id = if k < old.len() { std::mem::take(&mut old[k]) } else { h.fresh_id("R") };
            h.add_vertex(Vertex::new(id.clone(), -a))?;
            h.add_edge(&prev, &id, 1)?;
            prev = id;
        }
    }
    let report = is_normal(&h)?;
    if !report.normal {
        return Err(Error::OutOfScope(format!("reversed graph is not normal: {}", report.violations.join("; "))));
    }
    Ok(NormalForm::finish(h, nf.certificate))
}

/// Vertices of a path graph from its smaller end.
fn chain_order(g: &WeightedGraph) -> Vec<String> {
    let ids = g.ids();
    let start = ids.iter().find(|v| g.beta(v) <= 1).cloned().unwrap_or_else(|| ids[0].clone());
    let mut order = vec![start.clone()];
    let mut cur = start;
    while let Some(n) = g.neighbors(&cur).into_iter().find(|n| !order.contains(n)) {
        order.push(n.clone());
        cur = n;
    }
    order
}

/// A connected nonempty graph is a prime manifold; the empty graph is `S^3`.
pub fn is_prime(g: &WeightedGraph) -> bool {
    !g.is_empty() && g.is_connected()
}

/// `(p, q)` of `L(p, q)` when `g` is a rational chain; `(1, 0)` when empty.
pub fn is_lens_space(g: &WeightedGraph) -> Option<(i64, i64)> {
    if g.is_empty() {
        return Some((1, 0));
    }
    let path = g.is_connected() && g.first_betti() == 0 && g.ids().iter().all(|v| g.beta(v) <= 2);
    if !path || !g.vertices().all(Vertex::is_rational) {
        return None;
    }
    let types = chain_order(g).iter().map(|v| -g.weight(v).unwrap()).collect();
    Some(continued_fraction_eval(&ChainType::chain(types)))
}

/// Negative continued fraction `p/q = a_1 - 1/(a_2 - ...)`, all `a_i >= 2`.
pub fn continued_fraction_expand(p: i64, q: i64) -> Result<ChainType> {
    if q < 1 || p <= q || p.gcd(&q) != 1 {
        return precondition(format!("{p}/{q} needs p > q >= 1 coprime"));
    }
    let (mut p, mut q) = (p, q);
    let mut out = Vec::new();
    while q != 0 {
        let a = Integer::div_ceil(&p, &q);
        out.push(a);
        (p, q) = (q, a * q - p);
    }
    Ok(ChainType::chain(out))
}

/// Inverse of [`continued_fraction_expand`]; the empty chain is `1/0`.
pub fn continued_fraction_eval(c: &ChainType) -> (i64, i64) {
    c.entries.iter().rev().fold((1, 0), |(p, q), &a| (a * p - q, p))
}

/// Seifert data of a star. Without an explicit center the unique vertex with
/// boundary or genus is used, else the unique branching vertex, else the
/// only vertex.
pub fn seifert_from_star(g: &WeightedGraph, center: Option<&str>) -> Result<SeifertData> {
    let center = match center {
        Some(c) => {
            g.vertex(c)?;
            c.to_string()
        }
        None => {
            let marked: Vec<String> = g.vertices().filter(|v| !v.is_rational()).map(|v| v.id.clone()).collect();
            let branching: Vec<String> = g.ids().into_iter().filter(|v| g.beta(v) >= 3).collect();
            match (marked.as_slice(), branching.as_slice(), g.len()) {
                ([c], _, _) => c.clone(),
                ([], [c], _) => c.clone(),
                ([], [], 1) => g.ids()[0].clone(),
                _ => return precondition("no unique star center"),
            }
        }
    };
    if g.has_loop(&center) || !g.is_connected() {
        return precondition("not a star");
    }
    let c = g.vertex(&center)?;
    let rest: BTreeSet<String> = g.ids().into_iter().filter(|v| *v != center).collect();
    let sub = g.induced(&rest);
    let mut fibers = Vec::new();
    for comp in sub.components() {
        let attach: Vec<String> = comp.iter().filter(|v| !g.edges_between(v, &center).is_empty()).cloned().collect();
        let ok_shape = sub.induced(&comp.iter().cloned().collect()).first_betti() == 0
            && comp.iter().all(|v| sub.beta(v) <= 2 && g.vertex(v).map(Vertex::is_rational).unwrap_or(false))
            && attach.len() == 1
            && g.edges_between(&attach[0], &center).len() == 1
            && sub.beta(&attach[0]) <= 1;
        if !ok_shape {
            return precondition("not a star: a branch is not a twig");
        }
        let mut order = vec![attach[0].clone()];
        let mut cur = attach[0].clone();
        while let Some(n) = sub.neighbors(&cur).into_iter().find(|n| !order.contains(n)) {
            order.push(n.clone());
            cur = n;
        }
        let types: Vec<i64> = order.iter().map(|v| -g.weight(v).unwrap()).collect();
        let (alpha, beta) = continued_fraction_eval(&ChainType::chain(types));
        if alpha <= 0 {
            return precondition("twig with nonpositive continued fraction");
        }
        fibers.push(BigRational::new(BigInt::from(alpha - beta), BigInt::from(alpha)));
    }
    Ok(SeifertData::new(c.genus, c.boundary, fibers, c.weight))
}

/// Cuts the family normal forms along their cycle edges (loops and multiple
/// edges), adds two boundary circles per cut edge end pair and returns the
/// Seifert pieces in id order of their centers.
pub fn jsj_cut(nf: &NormalForm) -> Result<Vec<SeifertData>> {
    if nf.certificate == Certificate::SeifertSpecial {
        return nf.seifert.clone().map(|s| vec![s]).ok_or_else(|| Error::Precondition("missing Seifert data".into()));
    }
    let g = &nf.graph;
    let mut cut = g.clone();
    let mut touched = BTreeSet::new();
    let mut groups: BTreeMap<(String, String), usize> = BTreeMap::new();
    for e in g.edges() {
        *groups.entry((e.u.clone(), e.v.clone())).or_default() += 1;
    }
    for ((u, v), n) in groups {
        if u == v || n >= 2 {
            for _ in 0..n {
                cut.remove_edge(&u, &v)?;
            }
            touched.insert(u.clone());
            touched.insert(v.clone());
        }
    }
    if touched.is_empty() || cut.first_betti() != 0 {
        return precondition("unrecognized shape for the JSJ cut");
    }
    for v in &touched {
        cut.vertex_mut(v)?.boundary += 2;
    }
    let mut pieces = Vec::new();
    for v in &touched {
        let comp = cut.components().into_iter().find(|c| c.contains(v)).expect("component");
        let piece = cut.induced(&comp.into_iter().collect());
        pieces.push(seifert_from_star(&piece, Some(v))?);
    }
    Ok(pieces)
}

/// `Z^{b_1} ⊕ coker` of the intersection matrix.
pub fn h1_from_graph(g: &WeightedGraph) -> Result<AbelianGroup> {
    if let Some(v) = g.vertices().find(|v| !v.is_rational()) {
        return precondition(format!("`{}` has genus or boundary", v.id));
    }
    Ok(graph_homology(g))
}
