//! Birational rewriting of snc divisor dual graphs.
//!
//! Weights are self-intersections; chain types are negated weights. Every
//! composite operation records its elementary moves in a [`RewriteLog`] that
//! [`replay`] reproduces exactly.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{precondition, Error, Result};
use crate::graph::{ChainType, GraphKind, Vertex, WeightedGraph};
use crate::linalg::{solve_rational, IntMatrix};

/// Upper bound on the number of moves a single rewriting run may apply.
pub const MOVE_BUDGET: usize = 100_000;

/// Point blown up: a free point of a vertex (outer) or a node (inner).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BlowupCenter {
    #[serde(rename = "vertex")]
    OnVertex(String),
    #[serde(rename = "edge")]
    OnEdge(String, String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "move", rename_all = "lowercase")]
pub enum Move {
    Blowup {
        #[serde(flatten)]
        center: BlowupCenter,
        new: String,
    },
    Blowdown {
        vertex: String,
    },
    Flow {
        vertex: String,
        toward: String,
    },
}

/// Ordered moves; serialises as a bare JSON array.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RewriteLog {
    pub moves: Vec<Move>,
}

impl RewriteLog {
    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("log serialises")
    }
}

/// Rational coefficient per twig vertex.
pub type BarkVector = BTreeMap<String, BigRational>;

fn require_divisor(g: &WeightedGraph) -> Result<()> {
    if g.kind != GraphKind::Divisor {
        return precondition("operation needs a divisor graph");
    }
    Ok(())
}

/// Blows up `c`, naming the exceptional vertex with a fresh `E{k}` id.
pub fn blow_up(g: &WeightedGraph, c: &BlowupCenter) -> Result<WeightedGraph> {
    blow_up_as(g, c, &g.fresh_id("E"))
}

/// Blows up `c`; the exceptional vertex gets id `new_id` and weight -1.
pub fn blow_up_as(g: &WeightedGraph, c: &BlowupCenter, new_id: &str) -> Result<WeightedGraph> {
    require_divisor(g)?;
    if g.contains(new_id) {
        return Err(Error::DuplicateVertex(new_id.to_string()));
    }
    let mut h = g.clone();
    match c {
        BlowupCenter::OnVertex(v) => {
            h.vertex_mut(v)?.weight -= 1;
            h.add_vertex(Vertex::new(new_id, -1))?;
            h.add_edge(v, new_id, 1)?;
        }
        BlowupCenter::OnEdge(a, b) => {
            h.vertex(a)?;
            h.vertex(b)?;
            h.remove_edge(a, b)?;
            h.vertex_mut(a)?.weight -= 1;
            h.vertex_mut(b)?.weight -= 1;
            h.add_vertex(Vertex::new(new_id, -1))?;
            h.add_edge(a, new_id, 1)?;
            h.add_edge(b, new_id, 1)?;
        }
    }
    Ok(h)
}

/// Contracts the (-1)-vertex `v`; its neighbours gain 1 and become adjacent.
pub fn blow_down(g: &WeightedGraph, v: &str) -> Result<WeightedGraph> {
    let x = g.vertex(v)?;
    if x.weight != -1 {
        return precondition(format!("`{v}` has weight {}, not -1", x.weight));
    }
    if x.genus != 0 {
        return precondition(format!("`{v}` has genus {}", x.genus));
    }
    if g.has_loop(v) {
        return precondition(format!("`{v}` carries a loop"));
    }
    let nbrs = g.neighbors(v);
    if g.incident(v).len() != nbrs.len() {
        return precondition(format!("`{v}` meets a neighbour more than once"));
    }
    if nbrs.len() > 2 {
        return precondition(format!("`{v}` has branching number {} > 2", nbrs.len()));
    }
    if g.kind == GraphKind::Divisor && nbrs.len() == 2 && !g.edges_between(&nbrs[0], &nbrs[1]).is_empty() {
        return precondition(format!("neighbours of `{v}` already meet; the image is not snc"));
    }
    let mut h = g.clone();
    let (_, edges) = h.remove_vertex(v)?;
    for n in &nbrs {
        h.vertex_mut(n)?.weight += 1;
    }
    if nbrs.len() == 2 {
        h.add_edge(&nbrs[0], &nbrs[1], edges[0].sign * edges[1].sign)?;
    }
    Ok(h)
}

/// A (-1)-vertex whose contraction keeps the graph snc and nonempty-branched.
pub fn is_superfluous(g: &WeightedGraph, v: &str) -> bool {
    let Ok(x) = g.vertex(v) else { return false };
    if x.weight != -1 || x.genus != 0 || g.has_loop(v) {
        return false;
    }
    let nbrs = g.neighbors(v);
    if g.incident(v).len() != nbrs.len() || nbrs.is_empty() || nbrs.len() > 2 {
        return false;
    }
    nbrs.len() == 1 || g.edges_between(&nbrs[0], &nbrs[1]).is_empty()
}

fn first_superfluous(g: &WeightedGraph) -> Option<String> {
    g.vertices().map(|v| v.id.clone()).find(|id| is_superfluous(g, id))
}

/// Contracts superfluous (-1)-vertices, lowest id first, until none remain.
pub fn snc_minimalize(g: &WeightedGraph) -> Result<(WeightedGraph, RewriteLog)> {
    require_divisor(g)?;
    let mut s = Session::new(g.clone());
    s.minimalize()?;
    Ok((s.g, s.log))
}

/// Flow on the 0-vertex `zero`; the type of `toward` drops by one.
///
/// At an interior 0-vertex this is `[a,0,b] -> [a+1,0,b-1]` with `b` the type
/// of `toward`. At a tip it is the outer blowup followed by contracting the
/// old tip: the new tip keeps the id `zero` and weight 0, `toward` gains 1.
pub fn elementary_flow(g: &WeightedGraph, zero: &str, toward: &str) -> Result<WeightedGraph> {
    let z = g.vertex(zero)?;
    g.vertex(toward)?;
    if z.weight != 0 || z.genus != 0 || g.has_loop(zero) {
        return precondition(format!("`{zero}` is not a rational 0-vertex without loops"));
    }
    let nbrs = g.neighbors(zero);
    if g.incident(zero).len() != nbrs.len() || nbrs.is_empty() || nbrs.len() > 2 {
        return precondition(format!("`{zero}` must meet one or two neighbours once each"));
    }
    if !nbrs.iter().any(|n| n == toward) {
        return precondition(format!("`{toward}` is not a neighbour of `{zero}`"));
    }
    let mut h = g.clone();
    h.vertex_mut(toward)?.weight += 1;
    if let Some(other) = nbrs.iter().find(|n| *n != toward) {
        h.vertex_mut(other)?.weight -= 1;
    }
    Ok(h)
}

pub fn apply_move(g: &WeightedGraph, m: &Move) -> Result<WeightedGraph> {
    match m {
        Move::Blowup { center, new } => blow_up_as(g, center, new),
        Move::Blowdown { vertex } => blow_down(g, vertex),
        Move::Flow { vertex, toward } => elementary_flow(g, vertex, toward),
    }
}

pub fn replay(g: &WeightedGraph, log: &RewriteLog) -> Result<WeightedGraph> {
    log.moves.iter().try_fold(g.clone(), |h, m| apply_move(&h, m))
}

/// Verdict for one connected component of `D - B`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SegmentVerdict {
    pub vertices: Vec<String>,
    pub chain_type: ChainType,
    pub standard: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StandardReport {
    pub standard: bool,
    pub segments: Vec<SegmentVerdict>,
}

fn linear_is_standard(e: &[i64]) -> bool {
    let z = e.iter().take_while(|&&a| a == 0).count();
    // [(0)_n] is standard for every n: odd n by the first pattern, even n with l = 0
    z == e.len() || (z % 2 == 0 && e[z..].iter().all(|&a| a >= 2))
}

fn circular_linear_is_standard(e: &[i64]) -> bool {
    let z = e.iter().take_while(|&&a| a == 0).count();
    let rest = &e[z..];
    if z == e.len() {
        return true;
    }
    (z % 2 == 0 && rest.iter().all(|&a| a >= 2))
        || (rest.len() == 1 && rest[0] >= 0)
        || (z % 2 == 0 && rest == [1, 1])
}

/// Whether a chain or circular type matches a standard pattern, in either
/// orientation and, for circular types, any rotation.
pub fn chain_type_is_standard(t: &ChainType) -> bool {
    let e = &t.entries;
    if !t.circular {
        let mut r = e.clone();
        r.reverse();
        return linear_is_standard(e) || linear_is_standard(&r);
    }
    let n = e.len();
    (0..n.max(1)).any(|s| {
        let rot: Vec<i64> = (0..n).map(|i| e[(s + i) % n]).collect();
        let mut rev = rot.clone();
        rev.reverse();
        circular_linear_is_standard(&rot) || circular_linear_is_standard(&rev)
    })
}

/// Checks every component of `D - B` against the standard patterns.
pub fn is_standard(g: &WeightedGraph) -> StandardReport {
    let segments: Vec<SegmentVerdict> = g
        .classify_segments()
        .segments
        .into_iter()
        .map(|s| SegmentVerdict { standard: chain_type_is_standard(&s.chain_type), vertices: s.vertices, chain_type: s.chain_type })
        .collect();
    StandardReport { standard: segments.iter().all(|s| s.standard), segments }
}

/// Brings `g` to a standard form by flows, blowups and blowdowns.
///
/// An already standard graph is returned unchanged with an empty log.
/// Otherwise the graph is minimalized and each non-standard segment is swept
/// from one end (the tip, for twigs) keeping the processed prefix of the form
/// `[(0)_{2k}, a_1..a_j]` with `a_i >= 2` or `[(0)_{odd}]`:
/// - after an odd zero run the next type is set to 0 by alternating flows;
/// - a 1 is blown down and the previous entry is reconsidered;
/// - a negative type `-m` becomes `[0,1,(2)_{m-1}]` by `m` blowups;
/// - a 0 after some `a_i` turns `a_j` into 0 by flows, and the resulting zero
///   pair slides left past the `a_i` to join the run.
///
/// Circular segments are cut open at each vertex in turn until the sweep of
/// the remaining chain yields a standard cycle.
pub fn standardize(g: &WeightedGraph) -> Result<(WeightedGraph, RewriteLog)> {
    require_divisor(g)?;
    if is_standard(g).standard {
        return Ok((g.clone(), RewriteLog::default()));
    }
    let mut s = Session::new(g.clone());
    for _ in 0..64 {
        s.minimalize()?;
        let report = is_standard(&s.g);
        if report.standard {
            return Ok((s.g, s.log));
        }
        let dec = s.g.classify_segments();
        for seg in dec.segments {
            if chain_type_is_standard(&seg.chain_type) {
                continue;
            }
            if seg.chain_type.circular {
                s.standardize_cycle(&seg.vertices)?;
            } else {
                let ends = chain_ends(&s.g, &seg.vertices, &dec.branching);
                let mut chain = seg.vertices.clone();
                s.sweep(&mut chain, ends.0.as_deref(), ends.1.as_deref()).map_err(out_of_scope)?;
            }
        }
        if is_standard(&s.g).standard {
            return Ok((s.g, s.log));
        }
    }
    Err(Error::OutOfScope("standardization did not converge".into()))
}

fn out_of_scope(e: Error) -> Error {
    match e {
        Error::Precondition(m) => Error::OutOfScope(format!("segment sweep blocked: {m}")),
        other => other,
    }
}

/// Branching neighbours at the two ends of a chain segment.
fn chain_ends(
    g: &WeightedGraph,
    chain: &[String],
    branching: &std::collections::BTreeSet<String>,
) -> (Option<String>, Option<String>) {
    let outer = |id: &str| -> Vec<String> { g.neighbors(id).into_iter().filter(|n| branching.contains(n)).collect() };
    if chain.len() == 1 {
        let b = outer(&chain[0]);
        return match b.len() {
            0 => (None, None),
            1 => (None, Some(b[0].clone())),
            _ => (Some(b[0].clone()), Some(b[1].clone())),
        };
    }
    (outer(&chain[0]).into_iter().next(), outer(&chain[chain.len() - 1]).into_iter().next())
}

/// Graph under rewriting plus the moves applied so far.
struct Session {
    g: WeightedGraph,
    log: RewriteLog,
}

impl Session {
    fn new(g: WeightedGraph) -> Self {
        Session { g, log: RewriteLog::default() }
    }

    fn push(&mut self, m: Move) -> Result<()> {
        if self.log.len() >= MOVE_BUDGET {
            return Err(Error::Budget(MOVE_BUDGET));
        }
        self.g = apply_move(&self.g, &m)?;
        self.log.moves.push(m);
        Ok(())
    }

    fn blowup(&mut self, center: BlowupCenter) -> Result<String> {
        let new = self.g.fresh_id("E");
        self.push(Move::Blowup { center, new: new.clone() })?;
        Ok(new)
    }

    fn blowdown(&mut self, v: &str) -> Result<()> {
        self.push(Move::Blowdown { vertex: v.to_string() })
    }

    fn flow(&mut self, v: &str, toward: &str) -> Result<()> {
        self.push(Move::Flow { vertex: v.to_string(), toward: toward.to_string() })
    }

    fn ty(&self, v: &str) -> i64 {
        -self.g.weight(v).expect("tracked vertex exists")
    }

    fn minimalize(&mut self) -> Result<()> {
        while let Some(v) = first_superfluous(&self.g) {
            self.blowdown(&v)?;
        }
        Ok(())
    }

    /// Changes the type of `chain[r]` by one, `chain[..r]` being an odd run
    /// of zeros; `up` raises the type.
    fn shift_after_odd_run(&mut self, chain: &mut [String], r: usize, left: Option<&str>, up: bool) -> Result<()> {
        if !up {
            for i in (0..r).step_by(2) {
                self.flow(&chain[i].clone(), &chain[i + 1].clone())?;
            }
            return Ok(());
        }
        match left {
            Some(b) => self.flow(&chain[0].clone(), b)?,
            None => {
                // flow at a tip in the opposite direction: inner blowup at the
                // node, then contract the old tip
                let (c, n) = (chain[0].clone(), chain[1].clone());
                let e = self.blowup(BlowupCenter::OnEdge(c.clone(), n))?;
                self.blowdown(&c)?;
                chain[0] = e;
            }
        }
        for i in (2..r).step_by(2) {
            self.flow(&chain[i].clone(), &chain[i - 1].clone())?;
        }
        Ok(())
    }

    /// Turns the negative type `-m` of `chain[p]` into `[0, 1, (2)_{m-1}]`.
    fn raise_negative(&mut self, chain: &mut Vec<String>, p: usize, right: Option<&str>) -> Result<()> {
        let x = chain[p].clone();
        let m = -self.ty(&x);
        for _ in 0..m {
            let center = match chain.get(p + 1).map(String::as_str).or(right) {
                Some(y) => BlowupCenter::OnEdge(x.clone(), y.to_string()),
                None => BlowupCenter::OnVertex(x.clone()),
            };
            let e = self.blowup(center)?;
            chain.insert(p + 1, e);
        }
        Ok(())
    }

    /// Moves the zero pair at `q, q+1` to `q-1, q`, carrying `chain[q-1]`'s
    /// type to `chain[q+1]`.
    fn slide_left(&mut self, chain: &[String], q: usize) -> Result<()> {
        let (z, a) = (chain[q].clone(), chain[q - 1].clone());
        for _ in 0..self.ty(&a) {
            self.flow(&z, &a)?;
        }
        Ok(())
    }

    /// Sweeps a chain segment from `chain[0]` to the end. `left`/`right` are
    /// the branching vertices beyond each end, if any.
    fn sweep(&mut self, chain: &mut Vec<String>, left: Option<&str>, right: Option<&str>) -> Result<()> {
        // chain[..z] zeros, chain[z..p] types >= 2; if z is odd then z == p
        let (mut z, mut p) = (0usize, 0usize);
        while p < chain.len() {
            let t = self.ty(&chain[p]);
            if z == p && z % 2 == 1 {
                for _ in 0..t.abs() {
                    self.shift_after_odd_run(chain, z, left, t < 0)?;
                }
                z += 1;
                p += 1;
                continue;
            }
            match t {
                t if t >= 2 => p += 1,
                0 if z == p => {
                    z += 1;
                    p += 1;
                }
                0 => {
                    let (x, a) = (chain[p].clone(), chain[p - 1].clone());
                    for _ in 0..self.ty(&a) {
                        self.flow(&x, &a)?;
                    }
                    for q in (z + 1..p).rev() {
                        self.slide_left(chain, q)?;
                    }
                    z += 2;
                    p += 1;
                }
                1 => {
                    let x = chain.remove(p);
                    self.blowdown(&x)?;
                    if p > 0 {
                        p -= 1;
                        z = z.min(p);
                    }
                }
                _ => self.raise_negative(chain, p, right)?,
            }
        }
        Ok(())
    }

    /// Cuts the cycle open at each vertex in turn and sweeps the rest.
    fn standardize_cycle(&mut self, cycle: &[String]) -> Result<()> {
        let n = cycle.len();
        for c in 0..n {
            let b = cycle[c].clone();
            let mut chain: Vec<String> = (1..n).map(|i| cycle[(c + i) % n].clone()).collect();
            let mut trial = Session { g: self.g.clone(), log: self.log.clone() };
            if trial.sweep(&mut chain, Some(&b), Some(&b)).is_err() {
                continue;
            }
            let mut ids = chain.clone();
            ids.push(b);
            let entries = ids.iter().map(|v| trial.ty(v)).collect();
            if chain_type_is_standard(&ChainType::circular(entries)) {
                *self = trial;
                return Ok(());
            }
        }
        Err(Error::OutOfScope(format!("no standard form found for circular segment {cycle:?}")))
    }
}

/// Bark of an admissible twig listed tip first: the solution `c` of
/// `M c = (-1, 0, .., 0)` with `M` the twig's intersection matrix.
pub fn bark(g: &WeightedGraph, twig: &[String]) -> Result<BarkVector> {
    if twig.is_empty() {
        return precondition("empty twig");
    }
    for (i, id) in twig.iter().enumerate() {
        let v = g.vertex(id)?;
        if v.weight > -2 || !v.is_rational() {
            return precondition(format!("twig vertex `{id}` is not rational of weight <= -2"));
        }
        let beta = g.beta(id);
        let max_beta = if i == 0 { 1 } else { 2 };
        if beta > max_beta || g.has_loop(id) {
            return precondition(format!("`{id}` has branching number {beta} inside the twig"));
        }
        if i + 1 < twig.len() && g.edges_between(id, &twig[i + 1]).len() != 1 {
            return precondition(format!("`{id}` and `{}` are not consecutive", twig[i + 1]));
        }
    }
    let n = twig.len();
    let mut m = IntMatrix::zeros(n, n);
    for i in 0..n {
        m.set(i, i, BigInt::from(g.weight(&twig[i])?));
        if i + 1 < n {
            m.set(i, i + 1, BigInt::one());
            m.set(i + 1, i, BigInt::one());
        }
    }
    let mut rhs = vec![BigRational::zero(); n];
    rhs[0] = -BigRational::one();
    let c = solve_rational(&m, &rhs).ok_or_else(|| Error::InvalidGraph("singular twig matrix".into()))?;
    let zero = BigRational::zero();
    let one = BigRational::one();
    if c.iter().any(|x| *x <= zero || *x >= one) {
        return Err(Error::InvalidGraph("bark coefficient outside (0,1)".into()));
    }
    Ok(twig.iter().cloned().zip(c).collect())
}

/// Coefficients of `D# = D - Bk D`: `1 - bark` on maximal admissible twigs,
/// 1 elsewhere.
pub fn d_sharp_coefficients(g: &WeightedGraph) -> Result<BTreeMap<String, BigRational>> {
    if !g.is_connected() {
        return precondition("graph is not connected");
    }
    if let Some(v) = first_superfluous(g) {
        return precondition(format!("graph is not snc-minimal (`{v}` is superfluous)"));
    }
    if g.is_negative_definite(None)? {
        return precondition("graph is negative definite");
    }
    let mut out: BTreeMap<String, BigRational> = g.ids().into_iter().map(|id| (id, BigRational::one())).collect();
    for t in g.twigs() {
        let admissible = t.chain_type.entries.iter().all(|&a| a >= 2) && t.vertices.iter().all(|v| g.vertex(v).unwrap().is_rational());
        if admissible {
            for (id, c) in bark(g, &t.vertices)? {
                out.insert(id, BigRational::one() - c);
            }
        }
    }
    Ok(out)
}

/// Contracts the (-1)-tip `a`, then keeps contracting its image while that
/// image is a (-1)-tip: the exceptional chain `[1,(2)_k]` of the twig side.
pub fn half_point_attach(g: &WeightedGraph, a: &str) -> Result<(WeightedGraph, RewriteLog)> {
    require_divisor(g)?;
    let v = g.vertex(a)?;
    if v.weight != -1 {
        return precondition(format!("`{a}` has weight {}, not -1", v.weight));
    }
    if g.incident(a).len() != 1 {
        return precondition(format!("`{a}` must meet the rest of the graph exactly once"));
    }
    let mut s = Session::new(g.clone());
    let mut cur = a.to_string();
    loop {
        let next = s.g.neighbors(&cur).into_iter().next();
        s.blowdown(&cur)?;
        match next {
            Some(n) if is_superfluous(&s.g, &n) && s.g.beta(&n) <= 1 => cur = n,
            _ => break,
        }
    }
    Ok((s.g, s.log))
}
