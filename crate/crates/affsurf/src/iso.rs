//! Isomorphism search and canonical labelling for small weighted graphs.
//!
//! Colour refinement prunes a backtracking search; graphs here have at most a
//! few dozen vertices.

use std::collections::BTreeMap;

use crate::graph::WeightedGraph;

/// How edge signs take part in a comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SignMode {
    /// Signed edge multisets must correspond exactly.
    Strict,
    /// Signs may differ by flipping all edges at some vertices.
    UpToFlips,
}

type Witness = BTreeMap<String, String>;

/// Indexed view of a graph: vertex data plus pairwise edge multisets.
struct Indexed {
    ids: Vec<String>,
    base: Vec<(i64, i64, u32)>,
    /// pair[i][j]: sorted signs of edges between i and j (loops on the diagonal)
    pair: Vec<Vec<Vec<i8>>>,
}

impl Indexed {
    fn new(g: &WeightedGraph) -> Self {
        let ids = g.ids();
        let index: BTreeMap<&str, usize> = ids.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
        let n = ids.len();
        let mut pair = vec![vec![Vec::new(); n]; n];
        for e in g.edges() {
            let (i, j) = (index[e.u.as_str()], index[e.v.as_str()]);
            pair[i][j].push(e.sign);
            if i != j {
                pair[j][i].push(e.sign);
            }
        }
        for row in pair.iter_mut() {
            for cell in row.iter_mut() {
                cell.sort();
            }
        }
        let base = g.vertices().map(|v| (v.weight, v.genus, v.boundary)).collect();
        Indexed { ids, base, pair }
    }

    fn n(&self) -> usize {
        self.ids.len()
    }

    fn edge_key(&self, i: usize, j: usize, mode: SignMode) -> Vec<i8> {
        match mode {
            SignMode::Strict => self.pair[i][j].clone(),
            SignMode::UpToFlips => {
                if i == j {
                    self.pair[i][j].clone()
                } else {
                    vec![0; self.pair[i][j].len()]
                }
            }
        }
    }
}

/// Joint colour refinement over several graphs so colours are comparable.
fn refine(graphs: &[&Indexed], initial: Vec<Vec<usize>>, mode: SignMode) -> Vec<Vec<usize>> {
    let mut colors = initial;
    loop {
        let mut interner: BTreeMap<(usize, Vec<(usize, Vec<i8>)>), usize> = BTreeMap::new();
        let mut sigs = Vec::new();
        for (gi, g) in graphs.iter().enumerate() {
            let mut row = Vec::new();
            for i in 0..g.n() {
                let mut nb: Vec<(usize, Vec<i8>)> = (0..g.n())
                    .filter(|&j| !g.pair[i][j].is_empty())
                    .map(|j| (colors[gi][j], g.edge_key(i, j, mode)))
                    .collect();
                nb.sort();
                row.push((colors[gi][i], nb));
            }
            sigs.push(row);
        }
        for row in &sigs {
            for s in row {
                let next = interner.len();
                interner.entry(s.clone()).or_insert(next);
            }
        }
        // renumber in sorted signature order so colours are canonical
        let rank: BTreeMap<_, usize> = interner.keys().enumerate().map(|(r, k)| (k.clone(), r)).collect();
        let new: Vec<Vec<usize>> = sigs.iter().map(|row| row.iter().map(|s| rank[s]).collect()).collect();
        let classes = |c: &Vec<Vec<usize>>| {
            c.iter().flatten().collect::<std::collections::BTreeSet<_>>().len()
        };
        if classes(&new) == classes(&colors) {
            return new;
        }
        colors = new;
    }
}

fn initial_colors(graphs: &[&Indexed], mode: SignMode) -> Vec<Vec<usize>> {
    let mut keys = std::collections::BTreeSet::new();
    let key = |g: &Indexed, i: usize| {
        let degree: usize = (0..g.n()).map(|j| g.pair[i][j].len() * if i == j { 2 } else { 1 }).sum();
        (g.base[i], degree, g.edge_key(i, i, mode))
    };
    for g in graphs {
        for i in 0..g.n() {
            keys.insert(key(g, i));
        }
    }
    let rank: BTreeMap<_, usize> = keys.into_iter().enumerate().map(|(r, k)| (k, r)).collect();
    graphs.iter().map(|g| (0..g.n()).map(|i| rank[&key(g, i)]).collect()).collect()
}

/// Finds an isomorphism `g1 -> g2` preserving weight, genus, boundary and
/// edge multisets (with signs per `mode`). Returns the vertex map.
pub fn find_isomorphism(g1: &WeightedGraph, g2: &WeightedGraph, mode: SignMode) -> Option<Witness> {
    if g1.len() != g2.len() || g1.edges().len() != g2.edges().len() {
        return None;
    }
    let (a, b) = (Indexed::new(g1), Indexed::new(g2));
    let init = initial_colors(&[&a, &b], mode);
    let colors = refine(&[&a, &b], init, mode);
    let mut ca = colors[0].clone();
    let mut cb = colors[1].clone();
    ca.sort();
    cb.sort();
    if ca != cb {
        return None;
    }
    let order = search_order(&a, &colors[0]);
    let mut map = vec![usize::MAX; a.n()];
    let mut used = vec![false; b.n()];
    let mut found = None;
    backtrack(&a, &b, &colors, &order, 0, &mut map, &mut used, mode, &mut found);
    found.map(|m| m.iter().enumerate().map(|(i, &j)| (a.ids[i].clone(), b.ids[j].clone())).collect())
}

/// Visit order: rarest colour first, then neighbours of placed vertices.
fn search_order(a: &Indexed, colors: &[usize]) -> Vec<usize> {
    let mut count: BTreeMap<usize, usize> = BTreeMap::new();
    for &c in colors {
        *count.entry(c).or_default() += 1;
    }
    let mut order: Vec<usize> = Vec::new();
    let mut placed = vec![false; a.n()];
    while order.len() < a.n() {
        let next = (0..a.n())
            .filter(|&i| !placed[i])
            .min_by_key(|&i| {
                let linked = order.iter().any(|&j| !a.pair[i][j].is_empty());
                (!linked, count[&colors[i]], i)
            })
            .unwrap();
        placed[next] = true;
        order.push(next);
    }
    order
}

#[allow(clippy::too_many_arguments)]
fn backtrack(
    a: &Indexed,
    b: &Indexed,
    colors: &[Vec<usize>],
    order: &[usize],
    depth: usize,
    map: &mut Vec<usize>,
    used: &mut Vec<bool>,
    mode: SignMode,
    found: &mut Option<Vec<usize>>,
) {
    if found.is_some() {
        return;
    }
    if depth == order.len() {
        if mode == SignMode::Strict || signs_reconcile(a, b, map) {
            *found = Some(map.clone());
        }
        return;
    }
    let i = order[depth];
    for j in 0..b.n() {
        if used[j] || colors[1][j] != colors[0][i] {
            continue;
        }
        let consistent = order[..depth]
            .iter()
            .chain(std::iter::once(&i))
            .all(|&k| a.edge_key(i, k, mode) == b.edge_key(j, if k == i { j } else { map[k] }, mode));
        if !consistent {
            continue;
        }
        map[i] = j;
        used[j] = true;
        backtrack(a, b, colors, order, depth + 1, map, used, mode, found);
        used[j] = false;
        map[i] = usize::MAX;
        if found.is_some() {
            return;
        }
    }
}

/// Whether vertex flips `f` exist with `sign2(map e) = f(u) f(v) sign1(e)`.
fn signs_reconcile(a: &Indexed, b: &Indexed, map: &[usize]) -> bool {
    let n = a.n();
    // constraints: f(i) * f(j) must equal p for pairs with a forced product
    let mut adj: Vec<Vec<(usize, i8)>> = vec![Vec::new(); n];
    for i in 0..n {
        for j in i + 1..n {
            let s1 = &a.pair[i][j];
            if s1.is_empty() {
                continue;
            }
            let s2 = &b.pair[map[i]][map[j]];
            let flipped: Vec<i8> = {
                let mut f: Vec<i8> = s1.iter().map(|s| -s).collect();
                f.sort();
                f
            };
            let keep = s1 == s2;
            let flip = &flipped == s2;
            match (keep, flip) {
                (true, true) => {}
                (true, false) => {
                    adj[i].push((j, 1));
                    adj[j].push((i, 1));
                }
                (false, true) => {
                    adj[i].push((j, -1));
                    adj[j].push((i, -1));
                }
                (false, false) => return false,
            }
        }
    }
    let mut f = vec![0i8; n];
    for s in 0..n {
        if f[s] != 0 {
            continue;
        }
        f[s] = 1;
        let mut stack = vec![s];
        while let Some(x) = stack.pop() {
            for &(y, p) in &adj[x] {
                let want = f[x] * p;
                if f[y] == 0 {
                    f[y] = want;
                    stack.push(y);
                } else if f[y] != want {
                    return false;
                }
            }
        }
    }
    true
}

/// Isomorphism with exact edge signs.
pub fn graphs_isomorphic(g1: &WeightedGraph, g2: &WeightedGraph) -> Option<Witness> {
    find_isomorphism(g1, g2, SignMode::Strict)
}

/// Isomorphism up to flipping edge signs at vertices (plumbing equivalence).
pub fn plumbing_isomorphic(g1: &WeightedGraph, g2: &WeightedGraph) -> Option<Witness> {
    find_isomorphism(g1, g2, SignMode::UpToFlips)
}

type Encoding = (Vec<(i64, i64, u32)>, Vec<(usize, usize, Vec<i8>)>);

/// Canonical vertex order: the labelling whose encoding is lexicographically
/// smallest among the leaves of an individualisation-refinement search.
pub fn canonical_order(g: &WeightedGraph) -> Vec<String> {
    let a = Indexed::new(g);
    if a.n() == 0 {
        return Vec::new();
    }
    let init = initial_colors(&[&a], SignMode::Strict);
    let colors = refine(&[&a], init, SignMode::Strict).remove(0);
    let mut best: Option<(Encoding, Vec<usize>)> = None;
    canon_search(&a, colors, &mut best);
    let (_, perm) = best.unwrap();
    perm.into_iter().map(|i| a.ids[i].clone()).collect()
}

fn canon_search(a: &Indexed, colors: Vec<usize>, best: &mut Option<(Encoding, Vec<usize>)>) {
    let mut cells: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, &c) in colors.iter().enumerate() {
        cells.entry(c).or_default().push(i);
    }
    let target = cells.values().find(|c| c.len() > 1).cloned();
    match target {
        None => {
            let mut perm: Vec<usize> = (0..a.n()).collect();
            perm.sort_by_key(|&i| colors[i]);
            let enc = encode(a, &perm);
            if best.as_ref().is_none_or(|(b, _)| enc < *b) {
                *best = Some((enc, perm));
            }
        }
        Some(cell) => {
            for &v in &cell {
                // individualise v: give it a colour just below its cell
                let mut c: Vec<usize> = colors.iter().map(|&x| 2 * x + 1).collect();
                c[v] -= 1;
                let refined = refine(&[a], vec![c], SignMode::Strict).remove(0);
                canon_search(a, refined, best);
            }
        }
    }
}

fn encode(a: &Indexed, perm: &[usize]) -> Encoding {
    let pos: BTreeMap<usize, usize> = perm.iter().enumerate().map(|(p, &i)| (i, p)).collect();
    let verts = perm.iter().map(|&i| a.base[i]).collect();
    let mut edges = Vec::new();
    for i in 0..a.n() {
        for j in i..a.n() {
            if !a.pair[i][j].is_empty() {
                let (p, q) = (pos[&i], pos[&j]);
                edges.push((p.min(q), p.max(q), a.pair[i][j].clone()));
            }
        }
    }
    edges.sort();
    (verts, edges)
}
