//! The index set `ᴶW` of Ekedahl-Oort strata with the specialization order
//! `w' ⪯ w  <=>  y w' x φ(y⁻¹) x⁻¹ <= w` for some `y ∈ W_J`, where
//! `x = w₀ w_{0,φ(J)}`.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rootdata::{Coweight, RootSystem};
use crate::weyl::{Side, SimpleSet, WeylElt};

/// Which parabolic type is attached to `mu`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum JConvention {
    /// `{s : <α_s, μ> = 0}`, the type of the Levi centralizing `μ`.
    FromMu,
    /// `{s : <α_s, -w₀μ> = 0}`, the same set conjugated by the opposition
    /// involution.
    FromMuInverse,
    /// `φ⁻¹` of the `FromMu` set, so that `φ(J)` is the type of `μ` and
    /// `x = w₀ w_{0,φ(J)}` satisfies `x·t^μ ∈ Ω`. Agrees with `FromMu` whenever
    /// Frobenius fixes that type (split groups, equal `μ` on cycled copies).
    FrobeniusTwisted,
}

pub fn eo_type(rs: &RootSystem, mu: &Coweight, conv: JConvention) -> SimpleSet {
    let lambda = match conv {
        JConvention::FromMu | JConvention::FrobeniusTwisted => mu.clone(),
        JConvention::FromMuInverse => rs.dominant(&mu.iter().map(|v| -v).collect::<Vec<_>>()),
    };
    let j: SimpleSet = rs
        .simple_reflections()
        .iter()
        .enumerate()
        .filter(|(_, s)| s.root.pair(&lambda) == 0)
        .map(|(i, _)| i)
        .collect();
    if conv != JConvention::FrobeniusTwisted {
        return j;
    }
    (0..rs.simple_reflections().len()).filter(|&s| j.contains(&rs.phi_simple(s))).collect()
}

/// Fixed-width bit rows for the order relation.
#[derive(Clone, Debug)]
struct BitMatrix {
    words: usize,
    bits: Vec<u64>,
}

impl BitMatrix {
    fn new(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        BitMatrix { words, bits: vec![0; n * words] }
    }

    fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    fn set(&mut self, i: usize, j: usize) {
        self.bits[i * self.words + j / 64] |= 1 << (j % 64);
    }

    fn row(&self, i: usize) -> &[u64] {
        &self.bits[i * self.words..(i + 1) * self.words]
    }
}

#[derive(Clone, Debug)]
pub struct EOPoset {
    rs: RootSystem,
    j: SimpleSet,
    k: SimpleSet,
    x: WeylElt,
    elements: Vec<WeylElt>,
    index: HashMap<WeylElt, usize>,
    leq: BitMatrix,
    dim_par_j: usize,
    orbit_of: Vec<usize>,
    orbits: Vec<Vec<usize>>,
}

impl EOPoset {
    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }

    pub fn j(&self) -> &SimpleSet {
        &self.j
    }

    pub fn k(&self) -> &SimpleSet {
        &self.k
    }

    pub fn x(&self) -> &WeylElt {
        &self.x
    }

    /// `ᴶW`, sorted by length then one-line notation.
    pub fn elements(&self) -> &[WeylElt] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn index_of(&self, w: &WeylElt) -> Result<usize> {
        self.index.get(w).copied().ok_or_else(|| Error::NotInJW(self.rs.fmt_weyl(w)))
    }

    /// `elements[i] ⪯ elements[j]`.
    pub fn leq_idx(&self, i: usize, j: usize) -> bool {
        self.leq.get(i, j)
    }

    pub fn leq(&self, a: &WeylElt, b: &WeylElt) -> Result<bool> {
        Ok(self.leq_idx(self.index_of(a)?, self.index_of(b)?))
    }

    pub fn dim_par_j(&self) -> usize {
        self.dim_par_j
    }

    /// The minimum, `1`.
    pub fn bottom(&self) -> WeylElt {
        self.rs.identity()
    }

    /// The maximum, `ᵘw = w_{0,J} w₀`.
    pub fn top(&self) -> WeylElt {
        self.rs.longest_element(&self.j).mul(&self.rs.w0())
    }

    pub fn closure(&self, w: &WeylElt) -> Result<Vec<WeylElt>> {
        let i = self.index_of(w)?;
        Ok((0..self.len()).filter(|&k| self.leq_idx(k, i)).map(|k| self.elements[k].clone()).collect())
    }

    pub fn dimension(&self, w: &WeylElt) -> Result<usize> {
        self.index_of(w)?;
        Ok(self.rs.length(w))
    }

    pub fn codimension(&self, w: &WeylElt) -> Result<usize> {
        Ok(self.dim_par_j - self.dimension(w)?)
    }

    /// Orbits of `⟨φⁿ⟩` on `ᴶW` as index lists, ordered by smallest member.
    pub fn galois_orbits(&self) -> &[Vec<usize>] {
        &self.orbits
    }

    pub fn orbit_id(&self, i: usize) -> usize {
        self.orbit_of[i]
    }

    fn galois_image(&self, i: usize) -> usize {
        let w = self.rs.phi_pow(&self.elements[i], self.rs.kappa_degree());
        self.index[&w]
    }

    /// `w' ⪯ w  <=>  φⁿ(w') ⪯ φⁿ(w)` for all pairs.
    pub fn galois_compatible(&self) -> bool {
        let img: Vec<usize> = (0..self.len()).map(|i| self.galois_image(i)).collect();
        (0..self.len()).all(|a| (0..self.len()).all(|b| self.leq_idx(a, b) == self.leq_idx(img[a], img[b])))
    }

    /// Order on Galois orbits: `A ⪯ B` iff some member of `A` is below some
    /// member of `B`.
    pub fn quotient_leq(&self, a: usize, b: usize) -> bool {
        self.orbits[a].iter().any(|&i| self.orbits[b].iter().any(|&j| self.leq_idx(i, j)))
    }

    /// Upward closed under `⪯`.
    pub fn is_open(&self, s: &BTreeSet<usize>) -> bool {
        s.iter().all(|&i| (0..self.len()).all(|j| !self.leq_idx(i, j) || s.contains(&j)))
    }

    pub fn is_closed(&self, s: &BTreeSet<usize>) -> bool {
        let complement: BTreeSet<usize> = (0..self.len()).filter(|i| !s.contains(i)).collect();
        self.is_open(&complement)
    }

    /// Downward saturation.
    pub fn specialization_closure(&self, s: &BTreeSet<usize>) -> BTreeSet<usize> {
        (0..self.len()).filter(|&j| s.iter().any(|&i| self.leq_idx(j, i))).collect()
    }

    /// Covering relations `(lower, upper)`, sorted.
    pub fn hasse_diagram(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut edges = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i == j || !self.leq_idx(i, j) {
                    continue;
                }
                let between = (0..n).any(|k| k != i && k != j && self.leq_idx(i, k) && self.leq_idx(k, j));
                if !between {
                    edges.push((i, j));
                }
            }
        }
        edges
    }

    /// Checks reflexivity, antisymmetry, transitivity and the strict grading
    /// by length.
    pub fn check_order_axioms(&self) -> Result<()> {
        let n = self.len();
        let name = |i: usize| self.rs.fmt_weyl(&self.elements[i]);
        for i in 0..n {
            if !self.leq_idx(i, i) {
                return Err(Error::Integrity(format!("⪯ not reflexive at {}", name(i))));
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && self.leq_idx(i, j) {
                    if self.leq_idx(j, i) {
                        return Err(Error::Integrity(format!("⪯ not antisymmetric: {} {}", name(i), name(j))));
                    }
                    if self.rs.length(&self.elements[i]) >= self.rs.length(&self.elements[j]) {
                        return Err(Error::Integrity(format!("⪯ not graded: {} ⪯ {}", name(i), name(j))));
                    }
                    // row(j) ⊆ row(i)
                    if self.leq.row(j).iter().zip(self.leq.row(i)).any(|(rj, ri)| rj & !ri != 0) {
                        return Err(Error::Integrity(format!("⪯ not transitive through {} ⪯ {}", name(i), name(j))));
                    }
                }
            }
        }
        Ok(())
    }

    /// Hasse diagram in Graphviz DOT; nodes are labeled `w | ℓ(w)`.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph eo {\n  rankdir=BT;\n  node [shape=box];\n");
        for (i, w) in self.elements.iter().enumerate() {
            out.push_str(&format!("  n{} [label=\"{} | {}\"];\n", i, self.rs.fmt_weyl(w), self.rs.length(w)));
        }
        for (a, b) in self.hasse_diagram() {
            out.push_str(&format!("  n{} -> n{};\n", a, b));
        }
        out.push_str("}\n");
        out
    }

    /// Hasse diagram as JSON: node list plus adjacency of covering relations.
    pub fn to_json(&self) -> serde_json::Value {
        let nodes: Vec<serde_json::Value> = self
            .elements
            .iter()
            .enumerate()
            .map(|(i, w)| {
                serde_json::json!({
                    "id": i,
                    "w": self.rs.fmt_weyl(w),
                    "length": self.rs.length(w),
                    "orbit": self.orbit_of[i],
                })
            })
            .collect();
        let mut covers: Vec<Vec<usize>> = vec![Vec::new(); self.len()];
        for (a, b) in self.hasse_diagram() {
            covers[a].push(b);
        }
        serde_json::json!({
            "J": self.rs.fmt_simple_set(&self.j),
            "x": self.rs.fmt_weyl(&self.x),
            "dim_par_J": self.dim_par_j,
            "nodes": nodes,
            "covers": covers,
        })
    }
}

/// Builds `ᴶW` with `⪯` from the defining existential over `W_J`, then checks
/// the order axioms, the shape of `x`, the extremal elements and the
/// representative-independence of the quotient order.
pub fn build_eo_poset(rs: &RootSystem, j: &SimpleSet) -> Result<EOPoset> {
    let n = rs.kappa_degree();
    let mut jn = j.clone();
    for _ in 0..n {
        jn = rs.phi_simple_set(&jn);
    }
    if &jn != j {
        return Err(Error::NotGaloisStable(rs.fmt_simple_set(j)));
    }
    let w0 = rs.w0();
    let phi_j = rs.phi_simple_set(j);
    let x = w0.mul(&rs.longest_element(&phi_j));
    let mut k = SimpleSet::new();
    for &s in &phi_j {
        let c = w0.mul(&rs.simple_elt(s)).mul(&w0);
        let idx = (0..rs.simple_reflections().len())
            .find(|&t| rs.simple_elt(t) == c)
            .ok_or_else(|| Error::Integrity("w₀ does not normalize the simple reflections".into()))?;
        k.insert(idx);
    }
    if rs.longest_element(&k).mul(&w0) != x {
        return Err(Error::Integrity("x = w_{0,K} w₀ fails".into()));
    }

    let elements = rs.min_coset_reps(j, Side::Left);
    let index: HashMap<WeylElt, usize> = elements.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
    let wj = rs.parabolic_subgroup(j);
    let x_inv = x.inverse();
    let size = elements.len();
    let mut leq = BitMatrix::new(size);
    for (a, wp) in elements.iter().enumerate() {
        let twisted: Vec<WeylElt> = wj
            .iter()
            .map(|y| y.mul(wp).mul(&x).mul(&rs.phi_apply(&y.inverse())).mul(&x_inv))
            .collect();
        for (b, w) in elements.iter().enumerate() {
            if twisted.iter().any(|t| rs.bruhat_leq(t, w)) {
                leq.set(a, b);
            }
        }
    }

    let dim_par_j = rs.length(&w0) - rs.length(&rs.longest_element(j));
    let mut poset = EOPoset {
        rs: rs.clone(),
        j: j.clone(),
        k,
        x,
        elements,
        index,
        leq,
        dim_par_j,
        orbit_of: Vec::new(),
        orbits: Vec::new(),
    };

    let mut orbit_of = vec![usize::MAX; size];
    let mut orbits = Vec::new();
    for i in 0..size {
        if orbit_of[i] != usize::MAX {
            continue;
        }
        let id = orbits.len();
        let mut orbit = vec![i];
        orbit_of[i] = id;
        let mut cur = poset.galois_image(i);
        while cur != i {
            orbit_of[cur] = id;
            orbit.push(cur);
            cur = poset.galois_image(cur);
        }
        orbit.sort_unstable();
        orbits.push(orbit);
    }
    poset.orbit_of = orbit_of;
    poset.orbits = orbits;

    poset.check_order_axioms()?;
    let bottom = poset.index_of(&poset.bottom())?;
    let top = poset.index_of(&poset.top())?;
    if !(0..size).all(|i| poset.leq_idx(bottom, i) && poset.leq_idx(i, top)) {
        return Err(Error::Integrity("1 and ᵘw are not the extremal elements".into()));
    }
    for a in 0..poset.orbits.len() {
        for b in 0..poset.orbits.len() {
            let answers: BTreeSet<bool> = poset.orbits[a]
                .iter()
                .map(|&i| poset.orbits[b].iter().any(|&j| poset.leq_idx(i, j)))
                .collect();
            if answers.len() > 1 {
                return Err(Error::Integrity("quotient order depends on the representative".into()));
            }
        }
    }
    Ok(poset)
}
