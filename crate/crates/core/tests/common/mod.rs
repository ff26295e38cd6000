//! Independent oracles shared by the integration tests. None of them calls the
//! library's Bruhat order, length functions, polygon enumerator or Hasse
//! diagram.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap, VecDeque};

use eostrata::affine::ExtAffineElt;
use eostrata::eo_order::EOPoset;
use eostrata::rootdata::RootSystem;
use eostrata::weyl::WeylElt;
use num_rational::Rational64;
use petgraph::algo::toposort;
use petgraph::algo::tred::{dag_to_toposorted_adjacency_list, dag_transitive_reduction_closure};
use petgraph::graph::{DiGraph, NodeIndex};
use petgraph::visit::IntoNeighbors;

fn compose(a: &[u8], b: &[u8]) -> Vec<u8> {
    b.iter().map(|&i| a[i as usize]).collect()
}

/// Cayley graph distances from the identity, with a reduced word for every
/// element, built from the simple reflections' permutations alone.
pub struct CayleyOracle {
    pub words: HashMap<Vec<u8>, Vec<usize>>,
    gens: Vec<Vec<u8>>,
}

impl CayleyOracle {
    pub fn new(rs: &RootSystem) -> Self {
        let gens: Vec<Vec<u8>> = rs.simple_reflections().iter().map(|s| s.perm.clone()).collect();
        let id: Vec<u8> = (0..rs.dim() as u8).collect();
        let mut words = HashMap::from([(id.clone(), Vec::new())]);
        let mut queue = VecDeque::from([id]);
        while let Some(w) = queue.pop_front() {
            let word = words[&w].clone();
            for (k, s) in gens.iter().enumerate() {
                let ws = compose(&w, s);
                if !words.contains_key(&ws) {
                    let mut nw = word.clone();
                    nw.push(k);
                    words.insert(ws.clone(), nw);
                    queue.push_back(ws);
                }
            }
        }
        CayleyOracle { words, gens }
    }

    pub fn length(&self, w: &WeylElt) -> usize {
        self.words[&w.0].len()
    }

    /// Products of all subwords of a reduced word of `w`.
    pub fn subword_set(&self, w: &WeylElt) -> BTreeSet<Vec<u8>> {
        let id: Vec<u8> = (0..w.0.len() as u8).collect();
        let mut out = BTreeSet::from([id]);
        for &k in &self.words[&w.0] {
            let extended: Vec<Vec<u8>> = out.iter().map(|u| compose(u, &self.gens[k])).collect();
            out.extend(extended);
        }
        out
    }
}

/// Number of affine root hyperplanes separating the base alcove
/// `{-1 < <α,v> < 0 : α > 0}` from its image under `v ↦ w(v + λ)`.
pub fn alcove_length(rs: &RootSystem, x: &ExtAffineElt) -> usize {
    let mut p = vec![Rational64::from(0); rs.dim()];
    for b in rs.blocks() {
        let denom = b.width as i64 + 1;
        for i in 0..b.width {
            p[b.offset + i] = Rational64::new(i as i64 + 1, denom);
        }
    }
    let moved: Vec<Rational64> = p.iter().zip(&x.lambda).map(|(a, l)| a + Rational64::from(*l)).collect();
    let mut image = moved.clone();
    for (i, v) in moved.iter().enumerate() {
        image[x.w.0[i] as usize] = *v;
    }
    rs.positive_roots()
        .iter()
        .map(|r| {
            let (a, b) = (r.pair_q(&p), r.pair_q(&image));
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            (hi.ceil().to_integer() - lo.floor().to_integer() - 1).max(0) as usize
        })
        .sum()
}

/// `x` as a monomial matrix: column `j` holds `p^{λ_j}` in row `w(j)`.
pub type Monomial = Vec<Option<i64>>;

pub fn to_monomial(x: &ExtAffineElt) -> (usize, Monomial) {
    let n = x.lambda.len();
    let mut m = vec![None; n * n];
    for j in 0..n {
        m[x.w.0[j] as usize * n + j] = Some(x.lambda[j]);
    }
    (n, m)
}

pub fn monomial_mul(n: usize, a: &Monomial, b: &Monomial) -> Monomial {
    let mut out = vec![None; n * n];
    for i in 0..n {
        for k in 0..n {
            for j in 0..n {
                if let (Some(x), Some(y)) = (a[i * n + j], b[j * n + k]) {
                    out[i * n + k] = Some(x + y);
                }
            }
        }
    }
    out
}

/// Newton points of `GL(n)^{(d)}`-type data by brute force over vertex sets:
/// choose breakpoints `0 < x_1 < ... < n` and integral heights, keep strictly
/// concave polygons ending at `(n, total)`, and return `polygon slopes / r`.
/// With `symmetric = Some(c)` only vectors with `ν_i + ν_{n+1-i} = c` survive.
pub fn brute_polygons(n: usize, total: i64, r: i64, max_slope: i64, symmetric: Option<Rational64>) -> BTreeSet<Vec<Rational64>> {
    let mut out = BTreeSet::new();
    for mask in 0u32..(1 << (n - 1)) {
        let xs: Vec<usize> = (1..n).filter(|x| mask >> (x - 1) & 1 == 1).chain([n]).collect();
        let inner = xs.len() - 1;
        let span = (max_slope * n as i64 + 1) as u64;
        for code in 0..span.pow(inner as u32) {
            let mut ys = Vec::with_capacity(xs.len());
            let mut c = code;
            for _ in 0..inner {
                ys.push((c % span) as i64);
                c /= span;
            }
            ys.push(total);
            let mut slopes = Vec::new();
            let (mut px, mut py) = (0usize, 0i64);
            for (&x, &y) in xs.iter().zip(&ys) {
                slopes.push((Rational64::new(y - py, (x - px) as i64), x - px));
                px = x;
                py = y;
            }
            let concave = slopes.windows(2).all(|s| s[1].0 < s[0].0);
            let in_range = slopes.iter().all(|s| s.0 >= Rational64::from(0) && s.0 <= Rational64::from(max_slope));
            if !concave || !in_range {
                continue;
            }
            let nu: Vec<Rational64> =
                slopes.iter().flat_map(|&(s, len)| std::iter::repeat_n(s / r, len)).collect();
            if let Some(c) = symmetric {
                if (0..n).any(|i| nu[i] + nu[n - 1 - i] != c) {
                    continue;
                }
            }
            out.insert(nu);
        }
    }
    out
}

/// `ν ≤ μ` by partial sums (equal totals).
pub fn partial_sums_leq(nu: &[Rational64], mu: &[Rational64]) -> bool {
    let (mut a, mut b) = (Rational64::from(0), Rational64::from(0));
    for (x, y) in nu.iter().zip(mu) {
        a += x;
        b += y;
        if a > b {
            return false;
        }
    }
    a == b
}

/// Cover relations of `⪯` via petgraph's transitive reduction, as index pairs.
pub fn petgraph_covers(poset: &EOPoset) -> BTreeSet<(usize, usize)> {
    let n = poset.len();
    let mut g: DiGraph<(), ()> = DiGraph::new();
    let nodes: Vec<NodeIndex> = (0..n).map(|_| g.add_node(())).collect();
    for i in 0..n {
        for j in 0..n {
            if i != j && poset.leq_idx(i, j) {
                g.add_edge(nodes[i], nodes[j], ());
            }
        }
    }
    let topo = toposort(&g, None).expect("the order is acyclic");
    let (list, revmap) = dag_to_toposorted_adjacency_list::<_, u32>(&g, &topo);
    let (red, _) = dag_transitive_reduction_closure(&list);
    let mut out = BTreeSet::new();
    for i in 0..n {
        let ti = revmap[i];
        for tj in red.neighbors(ti) {
            out.insert((i, topo[tj as usize].index()));
        }
    }
    out
}
