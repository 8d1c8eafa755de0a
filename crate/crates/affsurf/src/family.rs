//! The surfaces `S_{p1,p2}`: boundary graphs, Picard checks and torus charts.
//!
//! Vertex ids: `L1inf`, `L2inf`, `L10`, `L20` for the four lines, `Tj_i` for
//! the (-2)-twig on `Lj0` (with `Tj_1` meeting `Aj`), `A1`, `A2` for the last
//! exceptional curves. The boundary `D` is everything except `A1`, `A2`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::divisor::{replay, BlowupCenter, Move, RewriteLog};
use crate::error::{precondition, Error, Result};
use crate::graph::{GraphKind, Vertex, WeightedGraph};
use crate::laurent::LaurentPoly2;
use crate::linalg::AbelianGroup;
use crate::topology;

/// Monic polynomials `p1`, `p2` with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyParams {
    /// ascending: `p[i]` is the coefficient of `t^i`
    p: [Vec<BigRational>; 2],
}

impl FamilyParams {
    /// Coefficients are listed from the leading term down, e.g. `[1, 3, 5]`
    /// for `t^2 + 3t + 5`.
    pub fn new(p1: &[BigRational], p2: &[BigRational]) -> Result<Self> {
        let asc = |p: &[BigRational], j: usize| -> Result<Vec<BigRational>> {
            let first = p.iter().position(|c| !c.is_zero());
            match first {
                Some(i) if p[i].is_one() => Ok(p[i..].iter().rev().cloned().collect()),
                _ => precondition(format!("p{j} must be monic")),
            }
        };
        Ok(FamilyParams { p: [asc(p1, 1)?, asc(p2, 2)?] })
    }

    pub fn from_ints(p1: &[i64], p2: &[i64]) -> Result<Self> {
        let conv = |p: &[i64]| p.iter().map(|&c| BigRational::from_integer(c.into())).collect::<Vec<_>>();
        Self::new(&conv(p1), &conv(p2))
    }

    /// Comma-separated coefficient lists such as `1,0,-2` or `1,1/2`.
    pub fn parse(p1: &str, p2: &str) -> Result<Self> {
        let list = |s: &str| -> Result<Vec<BigRational>> {
            s.split(',')
                .map(|c| c.trim().parse::<BigRational>().map_err(|_| Error::Parse(format!("bad coefficient `{c}` in `{s}`"))))
                .collect()
        };
        Self::new(&list(p1)?, &list(p2)?)
    }

    /// `p1 = t^{d1-1}`, `p2 = t^{d2-1}`.
    pub fn monomials(d1: usize, d2: usize) -> Result<Self> {
        if d1 == 0 || d2 == 0 {
            return precondition("d1 and d2 must be positive");
        }
        let mono = |d: usize| {
            let mut p = vec![0i64; d];
            p[0] = 1;
            p
        };
        Self::from_ints(&mono(d1), &mono(d2))
    }

    /// `d_j = deg p_j + 1`.
    pub fn d(&self, j: usize) -> usize {
        self.p[j - 1].len()
    }

    pub fn is_unit(&self, j: usize) -> bool {
        self.p[j - 1].len() == 1
    }

    /// Ascending coefficients of `p_j`.
    pub fn coefficients(&self, j: usize) -> &[BigRational] {
        &self.p[j - 1]
    }

    /// Ascending coefficients of `t^{d_j-1} p_j(1/t)`.
    pub fn hat(&self, j: usize) -> Vec<BigRational> {
        self.p[j - 1].iter().rev().cloned().collect()
    }
}

/// Graph of `D + A1 + A2` with its degrees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyGraph {
    pub graph: WeightedGraph,
    pub d1: usize,
    pub d2: usize,
}

impl FamilyGraph {
    pub fn attachment_ids() -> [&'static str; 2] {
        ["A1", "A2"]
    }

    /// Twig `T_j`, listed from `Tj_1` (next to `Aj`) to the vertex on `Lj0`.
    pub fn twig_ids(&self, j: usize) -> Vec<String> {
        let d = if j == 1 { self.d1 } else { self.d2 };
        (1..d).map(|i| format!("T{j}_{i}")).collect()
    }

    /// The boundary divisor `D`: all vertices but `A1`, `A2`.
    pub fn d_part(&self) -> WeightedGraph {
        let keep: BTreeSet<String> =
            self.graph.ids().into_iter().filter(|id| !Self::attachment_ids().contains(&id.as_str())).collect();
        self.graph.induced(&keep)
    }
}

fn labelled(id: &str, weight: i64) -> Vertex {
    let label = match id {
        "L1inf" => "L_{1,∞}".to_string(),
        "L2inf" => "L_{2,∞}".to_string(),
        "L10" => "L_{1,0}".to_string(),
        "L20" => "L_{2,0}".to_string(),
        "A1" => "A_1".to_string(),
        "A2" => "A_2".to_string(),
        t => {
            let (j, i) = t[1..].split_once('_').expect("twig id");
            format!("T_{{{j},{i}}}")
        }
    };
    Vertex::new(id, weight).with_label(label)
}

fn four_lines() -> WeightedGraph {
    let mut g = WeightedGraph::new(GraphKind::Divisor);
    for id in ["L1inf", "L2inf", "L10", "L20"] {
        g.add_vertex(labelled(id, 0)).unwrap();
    }
    for (a, b) in [("L1inf", "L2inf"), ("L2inf", "L10"), ("L10", "L20"), ("L20", "L1inf")] {
        g.add_edge(a, b, 1).unwrap();
    }
    g
}

/// Direct construction: the 4-cycle `(0,0,-1,-1)` with the chain
/// `[(2)_{d_j-1}]` and then `A_j` hanging on `L_{j,0}`.
pub fn build_boundary_graph(d1: usize, d2: usize) -> Result<FamilyGraph> {
    if d1 == 0 || d2 == 0 {
        return precondition("d1 and d2 must be positive");
    }
    let mut g = four_lines();
    for (j, d) in [(1usize, d1), (2, d2)] {
        let l0 = format!("L{j}0");
        g.vertex_mut(&l0)?.weight = -1;
        let mut prev = l0;
        for i in (1..d).rev() {
            let t = format!("T{j}_{i}");
            g.add_vertex(labelled(&t, -2))?;
            g.add_edge(&prev, &t, 1)?;
            prev = t;
        }
        let a = format!("A{j}");
        g.add_vertex(labelled(&a, -1))?;
        g.add_edge(&prev, &a, 1)?;
    }
    Ok(FamilyGraph { graph: g, d1, d2 })
}

/// Replays the `d1 + d2` blowups from the four lines: for each `j` an outer
/// blowup on `L_{j,0}` followed by `d_j - 1` outer blowups, each on the
/// previous exceptional vertex. The graph depends only on the degrees.
pub fn build_by_blowups(params: &FamilyParams) -> Result<(FamilyGraph, RewriteLog)> {
    let start = four_lines();
    let mut log = RewriteLog::default();
    for j in 1..=2usize {
        let d = params.d(j);
        let mut center = format!("L{j}0");
        for m in 1..=d {
            let new = if m == d { format!("A{j}") } else { format!("T{j}_{}", d - m) };
            log.moves.push(Move::Blowup { center: BlowupCenter::OnVertex(center), new: new.clone() });
            center = new;
        }
    }
    let mut g = replay(&start, &log)?;
    let ids = g.ids();
    for id in ids {
        let w = g.weight(&id)?;
        *g.vertex_mut(&id)? = labelled(&id, w);
    }
    Ok((FamilyGraph { graph: g, d1: params.d(1), d2: params.d(2) }, log))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PicardReport {
    pub unimodular: bool,
    #[serde(serialize_with = "crate::linalg::serialize_bigint")]
    pub det: BigInt,
    pub relations_verified: bool,
}

/// Unimodularity of `D` and the fibre relations `A_j + T_j + L_{j,0} ~ L_{j,∞}`
/// checked against every vertex of `D + A1 + A2`.
pub fn picard_check(fg: &FamilyGraph) -> Result<PicardReport> {
    let d = fg.d_part();
    let det = d.intersection_matrix(None)?.determinant();
    let unimodular = det.abs().is_one();
    let full = &fg.graph;
    let ids = full.ids();
    let m = full.intersection_matrix(None)?.to_i64_rows();
    let index = |id: &str| ids.iter().position(|x| x == id).ok_or_else(|| Error::UnknownVertex(id.to_string()));
    let mut relations_verified = true;
    for j in 1..=2usize {
        let mut fibre = vec![0i64; ids.len()];
        fibre[index(&format!("A{j}"))?] += 1;
        fibre[index(&format!("L{j}0"))?] += 1;
        for t in fg.twig_ids(j) {
            fibre[index(&t)?] += 1;
        }
        let line = index(&format!("L{j}inf"))?;
        let pair = |v: &[i64], k: usize| -> i64 { v.iter().zip(&m[k]).map(|(a, b)| a * b).sum() };
        let self_int: i64 = (0..ids.len()).map(|k| fibre[k] * pair(&fibre, k)).sum();
        let matches = (0..ids.len()).all(|k| pair(&fibre, k) == m[line][k]);
        relations_verified &= self_int == 0 && matches;
    }
    Ok(PicardReport { unimodular, det, relations_verified })
}

/// Moves turning the D-part with exactly one `d_j = 1` into a standard graph:
/// an inner blowup at `L_{1,∞} ∩ L_{2,∞}`, then the two (-1) cycle
/// neighbours of the twig-carrying `L_{j,0}` are contracted.
pub fn mixed_case_script(d1: usize, d2: usize) -> Result<RewriteLog> {
    let (a, b) = match (d1 == 1, d2 == 1) {
        (true, false) => ("L1inf", "L10"),
        (false, true) => ("L2inf", "L20"),
        _ => return precondition("exactly one of d1, d2 must be 1"),
    };
    Ok(RewriteLog {
        moves: vec![
            Move::Blowup { center: BlowupCenter::OnEdge("L1inf".into(), "L2inf".into()), new: "E1".into() },
            Move::Blowdown { vertex: a.into() },
            Move::Blowdown { vertex: b.into() },
        ],
    })
}

/// Standard boundary `D`: the D-part itself, or its image under
/// [`mixed_case_script`] when exactly one `d_j` is 1.
pub fn standard_boundary(d1: usize, d2: usize) -> Result<(WeightedGraph, RewriteLog)> {
    let d = build_boundary_graph(d1, d2)?.d_part();
    if (d1 == 1) != (d2 == 1) {
        let log = mixed_case_script(d1, d2)?;
        return Ok((replay(&d, &log)?, log));
    }
    Ok((d, RewriteLog::default()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurfaceHomology {
    pub chi: i64,
    pub h0: AbelianGroup,
    pub h1: AbelianGroup,
    pub h2: AbelianGroup,
}

/// Homology of the handle decomposition with framings `0, -d1, -d2`.
pub fn surface_homology(d1: usize, d2: usize) -> Result<SurfaceHomology> {
    let h = topology::kirby_handle_data(d1, d2)?;
    let groups = topology::chain_complex_homology(&h)?;
    Ok(SurfaceHomology { chi: h.euler_characteristic(), h0: groups[0].clone(), h1: groups[1].clone(), h2: groups[2].clone() })
}

/// Open tori `U ≅ C* × C*` in `S`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Chart {
    /// complement of `A1 + A2`
    AA,
    /// complement of `A_j + L_{j,1}`, needs `p_{3-j} = 1`
    AL(usize),
    /// complement of `C + L_{j,1}`, needs `p1 = p2 = 1`
    LC(usize),
}

impl Chart {
    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "aa" => Ok(Chart::AA),
            "al1" => Ok(Chart::AL(1)),
            "al2" => Ok(Chart::AL(2)),
            "lc1" => Ok(Chart::LC(1)),
            "lc2" => Ok(Chart::LC(2)),
            other => Err(Error::Parse(format!("unknown chart `{other}`"))),
        }
    }
}

/// Images `σ(x1), σ(x2), σ(y1), σ(y2)` in `Q[v1^±, v2^±]`.
pub fn chart_images(chart: Chart, params: &FamilyParams) -> Result<[LaurentPoly2; 4]> {
    let v = |i: usize| LaurentPoly2::var(i);
    let one = LaurentPoly2::one();
    let mut x = [LaurentPoly2::zero(), LaurentPoly2::zero()];
    let mut y = [LaurentPoly2::zero(), LaurentPoly2::zero()];
    match chart {
        Chart::AA => {
            for j in 1..=2 {
                let k = 3 - j;
                let d = params.d(j) as i64;
                let vj_inv_d = LaurentPoly2::monomial(BigRational::one(), if j == 1 { (-d, 0) } else { (0, -d) });
                x[j - 1] = v(j);
                y[j - 1] = &(&v(k) - &v(j).compose(&params.hat(j))) * &vj_inv_d;
            }
        }
        Chart::AL(j) => {
            check_index(j)?;
            let k = 3 - j;
            if !params.is_unit(k) {
                return precondition(format!("chart AL{j} needs p{k} = 1"));
            }
            let d = params.d(j) as i64;
            let inv = |i: usize, e: i64| LaurentPoly2::monomial(BigRational::one(), if i == 1 { (e, 0) } else { (0, e) });
            x[j - 1] = v(j);
            x[k - 1] = &(&v(j) - &one) * &inv(k, -1);
            let hat = v(j).compose(&params.hat(j));
            y[j - 1] = &(&(&v(j) - &one) - &(&hat * &v(k))) * &(&inv(j, -d) * &inv(k, -1));
            y[k - 1] = v(k);
        }
        Chart::LC(j) => {
            check_index(j)?;
            if !(params.is_unit(1) && params.is_unit(2)) {
                return precondition("chart LC needs p1 = p2 = 1");
            }
            let k = 3 - j;
            x[j - 1] = -&(&(&v(2) + &one) * &LaurentPoly2::mono(1, -1, 0));
            x[k - 1] = -&(&(&(&v(1) + &v(2)) + &one) * &LaurentPoly2::mono(1, -1, -1));
            y[j - 1] = &(&v(1) + &one) * &LaurentPoly2::mono(1, 0, -1);
            y[k - 1] = v(2);
        }
    }
    let [x1, x2] = x;
    let [y1, y2] = y;
    Ok([x1, x2, y1, y2])
}

fn check_index(j: usize) -> Result<()> {
    if j == 1 || j == 2 {
        Ok(())
    } else {
        precondition(format!("chart index {j} is not 1 or 2"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChartReport {
    /// `σ` applied to `y1 x1^{d1} - x2 + p̂1(x1)` and `y2 x2^{d2} - x1 + p̂2(x2)`
    pub residuals: [LaurentPoly2; 2],
    /// the stated inverse sends the images back to `(v1, v2)`
    pub inverse_ok: bool,
}

impl ChartReport {
    pub fn ok(&self) -> bool {
        self.residuals.iter().all(LaurentPoly2::is_zero) && self.inverse_ok
    }
}

pub fn verify_chart(chart: Chart, params: &FamilyParams) -> Result<ChartReport> {
    let [x1, x2, y1, y2] = chart_images(chart, params)?;
    let r1 = &(&(&y1 * &x1.pow(params.d(1) as u32)) - &x2) + &x1.compose(&params.hat(1));
    let r2 = &(&(&y2 * &x2.pow(params.d(2) as u32)) - &x1) + &x2.compose(&params.hat(2));
    let back = match chart {
        Chart::AA => [x1.clone(), x2.clone()],
        Chart::AL(j) => {
            let (xs, ys) = ([&x1, &x2], [&y1, &y2]);
            let mut b = [LaurentPoly2::zero(), LaurentPoly2::zero()];
            b[j - 1] = xs[j - 1].clone();
            b[2 - j] = ys[2 - j].clone();
            b
        }
        Chart::LC(j) => {
            let ys = [&y1, &y2];
            [&(&y1 * &y2) - &LaurentPoly2::one(), ys[2 - j].clone()]
        }
    };
    let inverse_ok = back[0] == LaurentPoly2::var(1) && back[1] == LaurentPoly2::var(2);
    Ok(ChartReport { residuals: [r1, r2], inverse_ok })
}

/// The sign `s` with `J · v1 v2 = s · σ(x1) σ(x2)`, `J` the Jacobian of
/// `(σ(x1), σ(x2))` in `(v1, v2)`; `None` when no such sign exists.
pub fn volume_form_sign(chart: Chart, params: &FamilyParams) -> Result<Option<i64>> {
    let [x1, x2, _, _] = chart_images(chart, params)?;
    let jac = &(&x1.derivative(1) * &x2.derivative(2)) - &(&x1.derivative(2) * &x2.derivative(1));
    let lhs = &jac * &LaurentPoly2::mono(1, 1, 1);
    let rhs = &x1 * &x2;
    Ok(if lhs == rhs {
        Some(1)
    } else if lhs == -&rhs {
        Some(-1)
    } else {
        None
    })
}

pub fn verify_volume_form(chart: Chart, params: &FamilyParams) -> Result<bool> {
    Ok(volume_form_sign(chart, params)?.is_some())
}
