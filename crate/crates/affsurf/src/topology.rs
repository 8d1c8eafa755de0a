//! Fundamental group at infinity, finite quotient counts, handle homology and
//! the knot invariants of the family.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{precondition, Error, Result};
use crate::laurent::{rat, LaurentPoly1};
use crate::linalg::{cokernel, kernel_rank, AbelianGroup, IntMatrix};

/// Default cap on the number of generator assignments `count_homs` visits.
pub const HOM_BUDGET: u128 = 100_000_000;

/// Letter `±(i + 1)` stands for generator `i` or its inverse.
pub type Word = Vec<i64>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupPresentation {
    pub generators: Vec<String>,
    pub relators: Vec<Word>,
}

/// Cancels adjacent inverse letters.
pub fn free_reduce(w: &[i64]) -> Word {
    let mut out: Word = Vec::with_capacity(w.len());
    for &x in w {
        if out.last() == Some(&-x) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    out
}

pub fn inverse_word(w: &[i64]) -> Word {
    w.iter().rev().map(|x| -x).collect()
}

/// `[a, b] = a b a^-1 b^-1`.
pub fn commutator(a: &[i64], b: &[i64]) -> Word {
    [a, b, &inverse_word(a), &inverse_word(b)].concat()
}

fn power(w: &[i64], n: usize) -> Word {
    w.repeat(n)
}

impl GroupPresentation {
    pub fn new(generators: Vec<String>, relators: Vec<Word>) -> Result<Self> {
        if generators.is_empty() && !relators.is_empty() {
            return precondition("relators need at least one generator");
        }
        let n = generators.len() as i64;
        if let Some(x) = relators.iter().flatten().find(|&&x| x == 0 || x.abs() > n) {
            return precondition(format!("letter {x} does not name a generator"));
        }
        Ok(GroupPresentation { generators, relators })
    }

    pub fn word_to_string(&self, w: &[i64]) -> String {
        if w.is_empty() {
            return "1".into();
        }
        let letters: Vec<String> = w
            .iter()
            .map(|&x| {
                let g = &self.generators[(x.unsigned_abs() - 1) as usize];
                if x > 0 {
                    g.clone()
                } else {
                    format!("{g}^-1")
                }
            })
            .collect();
        letters.join(" ")
    }
}

impl fmt::Display for GroupPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rels: Vec<String> = self.relators.iter().map(|r| self.word_to_string(r)).collect();
        write!(f, "< {} | {} >", self.generators.join(", "), rels.join(", "))
    }
}

/// `<δ1, δ2, λ | δ1 [γ2, λ^-1]^-1, δ2 [γ1, λ]^-1, [γ1, γ2]>` with
/// `γ_j = δ_j^{d_j}`.
pub fn pi1_presentation(d1: usize, d2: usize) -> Result<GroupPresentation> {
    if d1 == 0 || d2 == 0 {
        return precondition("d1 and d2 must be positive");
    }
    let (delta1, delta2, lambda) = (vec![1], vec![2], vec![3]);
    let gamma1 = power(&delta1, d1);
    let gamma2 = power(&delta2, d2);
    let r1 = [delta1.clone(), inverse_word(&commutator(&gamma2, &inverse_word(&lambda)))].concat();
    let r2 = [delta2.clone(), inverse_word(&commutator(&gamma1, &lambda))].concat();
    let r3 = commutator(&gamma1, &gamma2);
    GroupPresentation::new(vec!["δ1".into(), "δ2".into(), "λ".into()], vec![r1, r2, r3])
}

/// `Z^gens` modulo the exponent sums of the relators.
pub fn abelianization(p: &GroupPresentation) -> AbelianGroup {
    let n = p.generators.len();
    if p.relators.is_empty() {
        return AbelianGroup::free(n);
    }
    let mut m = IntMatrix::zeros(n, p.relators.len());
    for (j, r) in p.relators.iter().enumerate() {
        for &x in r {
            let i = (x.unsigned_abs() - 1) as usize;
            let cur = m.get(i, j).clone();
            m.set(i, j, cur + BigInt::from(x.signum()));
        }
    }
    cokernel(&m)
}

/// Multiplication table of a finite group, identity at index 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroupTable {
    pub name: String,
    table: Vec<Vec<usize>>,
    inverse: Vec<usize>,
}

#[derive(Deserialize)]
struct TableFile {
    order: usize,
    table: Vec<Vec<usize>>,
    #[serde(default)]
    name: Option<String>,
}

impl FiniteGroupTable {
    /// Checks closure, identity at 0, inverses and associativity.
    pub fn new(name: impl Into<String>, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 || table.iter().any(|row| row.len() != n || row.iter().any(|&x| x >= n)) {
            return precondition("group table must be a square table over 0..n");
        }
        if (0..n).any(|a| table[0][a] != a || table[a][0] != a) {
            return precondition("index 0 is not the identity");
        }
        let mut inverse = Vec::with_capacity(n);
        for a in 0..n {
            match (0..n).find(|&b| table[a][b] == 0 && table[b][a] == 0) {
                Some(b) => inverse.push(b),
                None => return precondition(format!("element {a} has no inverse")),
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return precondition(format!("not associative at ({a}, {b}, {c})"));
                    }
                }
            }
        }
        Ok(FiniteGroupTable { name: name.into(), table, inverse })
    }

    /// `{"order": n, "table": [[...]]}`, optionally with a `"name"`.
    pub fn from_json(s: &str) -> Result<Self> {
        let f: TableFile = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        if f.table.len() != f.order {
            return precondition(format!("order {} does not match table size {}", f.order, f.table.len()));
        }
        Self::new(f.name.unwrap_or_else(|| format!("G{}", f.order)), f.table)
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.table[a][b] == self.table[b][a]))
    }

    pub fn cyclic(n: usize) -> Self {
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::new(format!("Z{n}"), table).expect("cyclic table")
    }

    /// `<a, x | a^n = 1, x^2 = a^twist, x a x^-1 = a^-1>` on `a^k x^e`, stored
    /// as `k + n e`. `twist = 0` gives the dihedral group of order `2n`,
    /// `twist = n/2` the dicyclic one.
    fn semidirect_flip(name: String, n: usize, twist: usize) -> Self {
        let idx = |k: usize, e: usize| k % n + n * e;
        let mut table = vec![vec![0; 2 * n]; 2 * n];
        for (a, row) in table.iter_mut().enumerate() {
            let (k, e) = (a % n, a / n);
            for (b, slot) in row.iter_mut().enumerate() {
                let (m, f) = (b % n, b / n);
                let k2 = if e == 0 { k + m } else { k + n - m };
                *slot = if e == 1 && f == 1 { idx(k2 + twist, 0) } else { idx(k2, e + f) };
            }
        }
        Self::new(name, table).expect("metacyclic table")
    }

    /// Symmetries of the `n`-gon, order `2n`.
    pub fn dihedral(n: usize) -> Self {
        Self::semidirect_flip(format!("D{n}"), n, 0)
    }

    /// Dicyclic group of order `4m`; `m = 2` is the quaternion group.
    pub fn dicyclic(m: usize) -> Self {
        let name = if m == 2 { "Q8".to_string() } else { format!("Dic{m}") };
        Self::semidirect_flip(name, 2 * m, m)
    }

    pub fn product(a: &Self, b: &Self) -> Self {
        let (na, nb) = (a.order(), b.order());
        let table = (0..na * nb)
            .map(|x| (0..na * nb).map(|y| a.mul(x / nb, y / nb) * nb + b.mul(x % nb, y % nb)).collect())
            .collect();
        Self::new(format!("{}x{}", a.name, b.name), table).expect("product table")
    }

    /// Closure of the given permutations of `0..degree`, identity first.
    pub fn from_permutations(name: impl Into<String>, degree: usize, gens: &[Vec<usize>]) -> Result<Self> {
        let id: Vec<usize> = (0..degree).collect();
        let compose = |p: &[usize], q: &[usize]| -> Vec<usize> { q.iter().map(|&i| p[i]).collect() };
        let mut elems = vec![id.clone()];
        let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(id, 0)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for g in gens {
                if g.len() != degree {
                    return precondition("permutation of the wrong degree");
                }
                let p = compose(&elems[i], g);
                if !index.contains_key(&p) {
                    index.insert(p.clone(), elems.len());
                    queue.push_back(elems.len());
                    elems.push(p);
                }
            }
        }
        let table = elems.iter().map(|p| elems.iter().map(|q| index[&compose(p, q)]).collect()).collect();
        Self::new(name, table)
    }

    pub fn alternating4() -> Self {
        Self::from_permutations("A4", 4, &[vec![1, 2, 0, 3], vec![1, 0, 3, 2]]).expect("A4")
    }

    /// One group per isomorphism class of order at most 12.
    pub fn catalog() -> Vec<Self> {
        let z = Self::cyclic;
        let mut out: Vec<Self> = (1..=12).map(z).collect();
        out.extend([
            Self::product(&z(2), &z(2)),
            Self::dihedral(3),
            Self::product(&z(2), &z(4)),
            Self::product(&Self::product(&z(2), &z(2)), &z(2)),
            Self::dihedral(4),
            Self::dicyclic(2),
            Self::product(&z(3), &z(3)),
            Self::dihedral(5),
            Self::product(&z(2), &z(6)),
            Self::alternating4(),
            Self::dihedral(6),
            Self::dicyclic(3),
        ]);
        out
    }

    fn eval(&self, word: &[i64], images: &[usize]) -> usize {
        word.iter().fold(0, |acc, &x| {
            let g = images[(x.unsigned_abs() - 1) as usize];
            self.mul(acc, if x > 0 { g } else { self.inv(g) })
        })
    }
}

/// Number of homomorphisms `p -> group`, by exhaustive enumeration.
pub fn count_homs(p: &GroupPresentation, group: &FiniteGroupTable) -> Result<u64> {
    let order: Vec<usize> = (0..p.generators.len()).collect();
    count_homs_in_order(p, group, &order, HOM_BUDGET)
}

/// Enumerates generator images as an odometer whose fastest digit is
/// `order[0]`; the result does not depend on `order`.
pub fn count_homs_in_order(p: &GroupPresentation, group: &FiniteGroupTable, order: &[usize], budget: u128) -> Result<u64> {
    let k = p.generators.len();
    let mut sorted = order.to_vec();
    sorted.sort_unstable();
    if sorted != (0..k).collect::<Vec<_>>() {
        return precondition("enumeration order must permute the generators");
    }
    let n = group.order();
    let total = (n as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    if total > budget {
        return Err(Error::Budget(budget.min(usize::MAX as u128) as usize));
    }
    let relators: Vec<Word> = p.relators.iter().map(|r| free_reduce(r)).collect();
    let mut images = vec![0usize; k];
    let mut count = 0u64;
    loop {
        if relators.iter().all(|r| group.eval(r, &images) == 0) {
            count += 1;
        }
        let mut pos = 0;
        loop {
            if pos == k {
                return Ok(count);
            }
            let g = order[pos];
            images[g] += 1;
            if images[g] < n {
                break;
            }
            images[g] = 0;
            pos += 1;
        }
    }
}

/// `count_homs` of the family presentation into every catalog group.
pub fn hom_fingerprint(d1: usize, d2: usize) -> Result<BTreeMap<String, u64>> {
    let p = pi1_presentation(d1, d2)?;
    FiniteGroupTable::catalog().iter().map(|g| Ok((g.name.clone(), count_homs(&p, g)?))).collect()
}

/// Handle decomposition of `S`: one 0-handle, 1-handles `c1`, `c2`, 2-handles
/// `h`, `a1`, `a2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HandleData {
    /// number of 0-, 1-, 2- and 3-handles
    pub counts: [usize; 4],
    pub two_handles: Vec<String>,
    pub framings: Vec<i64>,
    /// `runs[i][k]`: algebraic number of times 2-handle `i` runs over 1-handle `k`
    pub runs: Vec<Vec<i64>>,
}

impl HandleData {
    pub fn euler_characteristic(&self) -> i64 {
        self.counts.iter().enumerate().map(|(k, &c)| if k % 2 == 0 { c as i64 } else { -(c as i64) }).sum()
    }
}

pub fn kirby_handle_data(d1: usize, d2: usize) -> Result<HandleData> {
    if d1 == 0 || d2 == 0 {
        return precondition("d1 and d2 must be positive");
    }
    Ok(HandleData {
        counts: [1, 2, 3, 0],
        two_handles: vec!["h".into(), "a1".into(), "a2".into()],
        framings: vec![0, -(d1 as i64), -(d2 as i64)],
        runs: vec![vec![0, 0], vec![1, 0], vec![0, 1]],
    })
}

/// `(H0, H1, H2)` of the cellular chain complex; a single 0-handle makes
/// `∂1` zero and the absence of 3-handles makes `H2 = ker ∂2`.
pub fn chain_complex_homology(h: &HandleData) -> Result<[AbelianGroup; 3]> {
    let [c0, c1, c2, c3] = h.counts;
    if c0 != 1 || c3 != 0 {
        return precondition("expected one 0-handle and no 3-handles");
    }
    if h.runs.len() != c2 || h.runs.iter().any(|r| r.len() != c1) {
        return precondition("runs must be a (2-handles x 1-handles) table");
    }
    let mut d2 = IntMatrix::zeros(c1, c2);
    for (i, row) in h.runs.iter().enumerate() {
        for (k, &x) in row.iter().enumerate() {
            d2.set(k, i, x.into());
        }
    }
    Ok([AbelianGroup::free(1), cokernel(&d2), AbelianGroup::free(kernel_rank(&d2))])
}

/// `H1` of the surgery on a framed link with this linking matrix.
pub fn surgery_h1(linking: &IntMatrix) -> AbelianGroup {
    cokernel(linking)
}

/// `(p, q)` for `K_{[2 d1, 2 d2]}` read as `p/q = 2 d1 - 1/(2 d2)`, so that
/// `p = 4 d1 d2 - 1 = |Δ(-1)|` and `(1, 1)` is the trefoil `3/2 ~ 3/1`.
pub fn two_bridge_fraction(d1: usize, d2: usize) -> Result<(u64, u64)> {
    if d1 == 0 || d2 == 0 {
        return precondition("d1 and d2 must be positive");
    }
    let (a, b) = (d1 as u64, d2 as u64);
    Ok((4 * a * b - 1, 2 * b))
}

/// 2-bridge classes agree: `p = p'` and `q' ≡ ±q^{±1} (mod p)`.
pub fn two_bridge_equivalent((p, q): (u64, u64), (p2, q2): (u64, u64)) -> bool {
    if p != p2 {
        return false;
    }
    let m = p as i128;
    let r = |x: u64| (x as i128).rem_euclid(m);
    let q_inv = (1..m).find(|&x| (x * r(q)).rem_euclid(m) == 1);
    let target = r(q2);
    let mut candidates = vec![r(q), (-r(q)).rem_euclid(m)];
    if let Some(i) = q_inv {
        candidates.extend([i, (-i).rem_euclid(m)]);
    }
    candidates.contains(&target)
}

/// `det(V - t V^T)` for the Seifert matrix `V = [[-d1, 1], [0, -d2]]`,
/// normalized to be symmetric with positive leading coefficient.
pub fn alexander_polynomial(d1: usize, d2: usize) -> Result<LaurentPoly1> {
    if d1 == 0 || d2 == 0 {
        return precondition("d1 and d2 must be positive");
    }
    let v = [[-(d1 as i64), 1], [0, -(d2 as i64)]];
    let t = LaurentPoly1::t();
    let entry = |i: usize, j: usize| {
        &LaurentPoly1::constant(rat(v[i][j])) - &(&t * &LaurentPoly1::constant(rat(v[j][i])))
    };
    let det = &(&entry(0, 0) * &entry(1, 1)) - &(&entry(0, 1) * &entry(1, 0));
    Ok(det.normalize_unit())
}
