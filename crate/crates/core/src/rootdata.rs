//! Based root data for products of `GL(n)` and `GSp(2g)` factors, each
//! possibly restricted from an unramified extension of degree `d`.
//!
//! Every factor copy is a block of coordinates. A `GL(n)` copy has `n`
//! coordinates; a `GSp` copy of genus `g` has `2g` coordinates and coweights
//! satisfy `a_i + a_{2g+1-i} = c`. Roots are stored as pairs `(a, b)` of flat
//! coordinate indices meaning `e_a - e_b`; in a symplectic block `e_a - e_b`
//! and `e_{m(b)} - e_{m(a)}` (with `m` the mirror) are the same root and the
//! lexicographically smaller pair is kept.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Coweight = Vec<i64>;
pub type RationalCoweight = Vec<Rational64>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FactorKind {
    GL,
    GSp,
}

fn one() -> usize {
    1
}

fn is_false(b: &bool) -> bool {
    !*b
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorSpec {
    pub kind: FactorKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<usize>,
    #[serde(default = "one")]
    pub copies: usize,
    #[serde(default, skip_serializing_if = "is_false")]
    pub flip: bool,
}

impl FactorSpec {
    pub fn gl(n: usize, copies: usize) -> Self {
        FactorSpec { kind: FactorKind::GL, n: Some(n), g: None, copies, flip: false }
    }

    pub fn gsp(g: usize, copies: usize) -> Self {
        FactorSpec { kind: FactorKind::GSp, n: None, g: Some(g), copies, flip: false }
    }

    pub fn flipped(mut self) -> Self {
        self.flip = true;
        self
    }

    /// Rank parameter: `n` for GL, `g` for GSp.
    pub fn rank(&self) -> usize {
        match self.kind {
            FactorKind::GL => self.n.unwrap_or(0),
            FactorKind::GSp => self.g.unwrap_or(0),
        }
    }

    /// Number of coordinates of one copy.
    pub fn width(&self) -> usize {
        match self.kind {
            FactorKind::GL => self.rank(),
            FactorKind::GSp => 2 * self.rank(),
        }
    }

    fn describe(&self) -> String {
        let base = match self.kind {
            FactorKind::GL => format!("GL({})", self.rank()),
            FactorKind::GSp => format!("GSp(g={})", self.rank()),
        };
        let mut s = base;
        if self.copies != 1 {
            s.push_str(&format!(" x{}", self.copies));
        }
        if self.flip {
            s.push_str(" flip");
        }
        s
    }

    fn check(&self, index: usize) -> Result<()> {
        let err = |msg: &str| Error::InvalidFactor { index, desc: self.describe(), msg: msg.to_string() };
        match self.kind {
            FactorKind::GL => {
                if self.g.is_some() {
                    return Err(err("GL factor takes \"n\", not \"g\""));
                }
                match self.n {
                    None => return Err(err("missing rank \"n\"")),
                    Some(0) => return Err(err("rank n must be at least 1")),
                    _ => {}
                }
            }
            FactorKind::GSp => {
                if self.n.is_some() {
                    return Err(err("GSp factor takes \"g\", not \"n\""));
                }
                match self.g {
                    None => return Err(err("missing genus \"g\"")),
                    Some(0) => return Err(err("genus g must be at least 1")),
                    _ => {}
                }
                if self.flip {
                    return Err(err("GSp factors admit no outer involution (flip must be false)"));
                }
            }
        }
        if self.copies == 0 {
            return Err(err("copies must be at least 1"));
        }
        if self.width() * self.copies > 250 {
            return Err(err("too many coordinates"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    pub factors: Vec<FactorSpec>,
    #[serde(default = "one")]
    pub kappa_degree: usize,
    /// One integer vector per factor copy, in factor order then copy order.
    pub mu: Vec<Vec<i64>>,
}

impl GroupSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            column: e.column(),
            msg: e.to_string(),
        })
    }

    /// Compact JSON with a fixed field order; used for hashing and reports.
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("group spec serializes")
    }

    /// True when every factor has a single copy and no flip, i.e. Frobenius
    /// acts trivially.
    pub fn is_split(&self) -> bool {
        self.factors.iter().all(|f| f.copies == 1 && !f.flip)
    }

    pub fn gl(n: usize, mu: Vec<i64>) -> Self {
        GroupSpec { factors: vec![FactorSpec::gl(n, 1)], kappa_degree: 1, mu: vec![mu] }
    }

    pub fn gsp(g: usize, mu: Vec<i64>) -> Self {
        GroupSpec { factors: vec![FactorSpec::gsp(g, 1)], kappa_degree: 1, mu: vec![mu] }
    }

    /// Siegel case: `GSp(2g)` with `mu = (1^g, 0^g)`.
    pub fn siegel(g: usize) -> Self {
        let mut mu = vec![1; g];
        mu.extend(vec![0; g]);
        Self::gsp(g, mu)
    }

    /// Hilbert-Blumenthal type: `d` copies of `GL(2)` cycled by Frobenius,
    /// `mu = (1,0)` in every copy.
    pub fn hilbert_blumenthal(d: usize) -> Self {
        GroupSpec {
            factors: vec![FactorSpec::gl(2, d)],
            kappa_degree: 1,
            mu: vec![vec![1, 0]; d],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Block {
    pub factor: usize,
    pub copy: usize,
    pub kind: FactorKind,
    /// `n` for GL, `g` for GSp.
    pub rank: usize,
    pub offset: usize,
    pub width: usize,
}

impl Block {
    pub fn coords(&self) -> std::ops::Range<usize> {
        self.offset..self.offset + self.width
    }

    /// Number of simple reflections in this block.
    pub fn semisimple_rank(&self) -> usize {
        match self.kind {
            FactorKind::GL => self.rank - 1,
            FactorKind::GSp => self.rank,
        }
    }
}

/// The root `e_a - e_b` on flat coordinates, stored canonically.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Root {
    pub a: usize,
    pub b: usize,
}

impl Root {
    pub fn is_positive(&self) -> bool {
        self.a < self.b
    }

    pub fn pair(&self, lambda: &[i64]) -> i64 {
        lambda[self.a] - lambda[self.b]
    }

    pub fn pair_q(&self, nu: &[Rational64]) -> Rational64 {
        nu[self.a] - nu[self.b]
    }
}

#[derive(Clone, Debug)]
pub struct SimpleReflection {
    pub block: usize,
    /// 1-based index inside its block.
    pub local: usize,
    pub root: Root,
    pub coroot: Coweight,
    /// The reflection as a permutation of flat coordinates.
    pub perm: Vec<u8>,
}

/// Image of `lambda` in `pi_1(G)_Gamma`, one entry per factor.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Pi1Class(pub Vec<i64>);

impl fmt::Display for Pi1Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

#[derive(Clone, Debug)]
pub struct RootSystem {
    factors: Vec<FactorSpec>,
    kappa_degree: usize,
    blocks: Vec<Block>,
    coord_block: Vec<usize>,
    dim: usize,
    roots: Vec<Root>,
    root_index: HashMap<Root, usize>,
    positive: Vec<usize>,
    simple: Vec<SimpleReflection>,
    frob_coord: Vec<usize>,
    frob_sign: Vec<i64>,
    frob_simple: Vec<usize>,
    frob_order: usize,
}

/// Validates `spec` (factors and `mu`) and builds its root system.
pub fn build_root_system(spec: &GroupSpec) -> Result<RootSystem> {
    let rs = RootSystem::new(&spec.factors, spec.kappa_degree)?;
    rs.check_mu(&spec.mu)?;
    Ok(rs)
}

impl RootSystem {
    /// Root system of the given factors, without any `mu`.
    pub fn new(factors: &[FactorSpec], kappa_degree: usize) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidSpec("at least one factor is required".into()));
        }
        if kappa_degree == 0 {
            return Err(Error::InvalidSpec("kappa_degree must be at least 1".into()));
        }
        for (i, f) in factors.iter().enumerate() {
            f.check(i)?;
        }
        let mut blocks = Vec::new();
        let mut offset = 0;
        for (fi, f) in factors.iter().enumerate() {
            for copy in 0..f.copies {
                blocks.push(Block { factor: fi, copy, kind: f.kind, rank: f.rank(), offset, width: f.width() });
                offset += f.width();
            }
        }
        let dim = offset;
        let mut coord_block = vec![0; dim];
        for (bi, b) in blocks.iter().enumerate() {
            for c in b.coords() {
                coord_block[c] = bi;
            }
        }

        let mut rs = RootSystem {
            factors: factors.to_vec(),
            kappa_degree,
            blocks,
            coord_block,
            dim,
            roots: Vec::new(),
            root_index: HashMap::new(),
            positive: Vec::new(),
            simple: Vec::new(),
            frob_coord: Vec::new(),
            frob_sign: Vec::new(),
            frob_simple: Vec::new(),
            frob_order: 1,
        };

        let mut roots = BTreeSet::new();
        for b in &rs.blocks {
            for i in b.coords() {
                for j in b.coords() {
                    if i != j && !(b.kind == FactorKind::GSp && rs.mirror(i) == i) {
                        roots.insert(rs.canon(i, j));
                    }
                }
            }
        }
        rs.roots = roots.into_iter().collect();
        rs.root_index = rs.roots.iter().enumerate().map(|(i, r)| (*r, i)).collect();
        rs.positive = (0..rs.roots.len()).filter(|&i| rs.roots[i].is_positive()).collect();

        for (bi, b) in rs.blocks.clone().iter().enumerate() {
            for local in 1..=b.semisimple_rank() {
                let o = b.offset;
                let (root, swaps, coroot_terms): (Root, Vec<(usize, usize)>, Vec<(usize, i64)>) = match b.kind {
                    FactorKind::GL => (
                        Root { a: o + local - 1, b: o + local },
                        vec![(o + local - 1, o + local)],
                        vec![(o + local - 1, 1), (o + local, -1)],
                    ),
                    FactorKind::GSp => {
                        let g = b.rank;
                        if local < g {
                            // s_i = tau_i tau_{2g-i}
                            (
                                Root { a: o + local - 1, b: o + local },
                                vec![(o + local - 1, o + local), (o + 2 * g - local - 1, o + 2 * g - local)],
                                vec![
                                    (o + local - 1, 1),
                                    (o + local, -1),
                                    (o + 2 * g - local - 1, 1),
                                    (o + 2 * g - local, -1),
                                ],
                            )
                        } else {
                            (Root { a: o + g - 1, b: o + g }, vec![(o + g - 1, o + g)], vec![(o + g - 1, 1), (o + g, -1)])
                        }
                    }
                };
                let mut perm: Vec<u8> = (0..dim as u8).collect();
                for (x, y) in swaps {
                    perm.swap(x, y);
                }
                let mut coroot = vec![0; dim];
                for (c, v) in coroot_terms {
                    coroot[c] += v;
                }
                rs.simple.push(SimpleReflection { block: bi, local, root, coroot, perm });
            }
        }

        // Frobenius on coordinates: copy tau -> tau+1; on wrap-around the
        // flip (if any) reverses coordinates and negates.
        let mut frob_coord = vec![0; dim];
        let mut frob_sign = vec![1; dim];
        for b in &rs.blocks {
            let f = &rs.factors[b.factor];
            let next_copy = (b.copy + 1) % f.copies;
            let target = rs
                .blocks
                .iter()
                .find(|t| t.factor == b.factor && t.copy == next_copy)
                .copied()
                .expect("block exists");
            let wrap = next_copy == 0;
            for k in 0..b.width {
                if wrap && f.flip {
                    frob_coord[b.offset + k] = target.offset + b.width - 1 - k;
                    frob_sign[b.offset + k] = -1;
                } else {
                    frob_coord[b.offset + k] = target.offset + k;
                }
            }
        }
        rs.frob_coord = frob_coord;
        rs.frob_sign = frob_sign;
        rs.frob_order = rs
            .factors
            .iter()
            .map(|f| f.copies * if f.flip { 2 } else { 1 })
            .fold(1, |acc, k| acc.lcm(&k));
        let mut frob_simple = Vec::new();
        for s in &rs.simple {
            let img = rs.phi_root(s.root);
            let idx = rs
                .simple
                .iter()
                .position(|t| t.root == img)
                .ok_or_else(|| Error::Integrity("Frobenius does not preserve simple roots".into()))?;
            frob_simple.push(idx);
        }
        rs.frob_simple = frob_simple;
        Ok(rs)
    }

    pub fn factors(&self) -> &[FactorSpec] {
        &self.factors
    }

    pub fn kappa_degree(&self) -> usize {
        self.kappa_degree
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn block_of(&self, coord: usize) -> &Block {
        &self.blocks[self.coord_block[coord]]
    }

    /// Total number of coordinates.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_split(&self) -> bool {
        self.frob_order == 1
    }

    /// Order of Frobenius acting on coweights.
    pub fn frobenius_order(&self) -> usize {
        self.frob_order
    }

    /// Mirror coordinate inside a symplectic block; identity for GL blocks.
    pub fn mirror(&self, c: usize) -> usize {
        let b = self.block_of(c);
        match b.kind {
            FactorKind::GL => c,
            FactorKind::GSp => b.offset + b.width - 1 - (c - b.offset),
        }
    }

    /// Canonical representative of `e_a - e_b`.
    pub fn canon(&self, a: usize, b: usize) -> Root {
        let r = Root { a, b };
        match self.block_of(a).kind {
            FactorKind::GL => r,
            FactorKind::GSp => {
                let m = Root { a: self.mirror(b), b: self.mirror(a) };
                r.min(m)
            }
        }
    }

    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn root_index(&self, r: Root) -> usize {
        self.root_index[&r]
    }

    pub fn positive_roots(&self) -> Vec<Root> {
        self.positive.iter().map(|&i| self.roots[i]).collect()
    }

    pub fn num_positive_roots(&self) -> usize {
        self.positive.len()
    }

    pub fn simple_reflections(&self) -> &[SimpleReflection] {
        &self.simple
    }

    pub fn simple_roots(&self) -> Vec<Root> {
        self.simple.iter().map(|s| s.root).collect()
    }

    pub fn simple_coroots(&self) -> Vec<Coweight> {
        self.simple.iter().map(|s| s.coroot.clone()).collect()
    }

    /// All simple reflection indices.
    pub fn all_simple(&self) -> BTreeSet<usize> {
        (0..self.simple.len()).collect()
    }

    pub fn neg_root(&self, r: Root) -> Root {
        self.canon(r.b, r.a)
    }

    pub fn pairing(&self, alpha: Root, lambda: &[i64]) -> Result<i64> {
        self.check_len(lambda.len())?;
        self.check_root(alpha)?;
        Ok(alpha.pair(lambda))
    }

    pub fn pairing_q(&self, alpha: Root, nu: &[Rational64]) -> Result<Rational64> {
        self.check_len(nu.len())?;
        self.check_root(alpha)?;
        Ok(alpha.pair_q(nu))
    }

    fn check_root(&self, alpha: Root) -> Result<()> {
        if self.root_index.contains_key(&alpha) {
            Ok(())
        } else {
            Err(Error::Shape(format!("({}, {}) is not a canonical root of this system", alpha.a, alpha.b)))
        }
    }

    pub(crate) fn check_len(&self, len: usize) -> Result<()> {
        if len == self.dim {
            Ok(())
        } else {
            Err(Error::Shape(format!("expected {} coordinates, got {}", self.dim, len)))
        }
    }

    /// Checks the similitude constraint of symplectic blocks.
    pub fn is_valid_coweight(&self, lambda: &[i64]) -> bool {
        lambda.len() == self.dim
            && self.blocks.iter().filter(|b| b.kind == FactorKind::GSp).all(|b| {
                let c = lambda[b.offset] + lambda[b.offset + b.width - 1];
                b.coords().all(|i| lambda[i] + lambda[self.mirror(i)] == c)
            })
    }

    /// Concatenates per-copy vectors into a flat coweight.
    pub fn flatten(&self, per_copy: &[Vec<i64>]) -> Result<Coweight> {
        if per_copy.len() != self.blocks.len() {
            return Err(Error::Shape(format!(
                "expected {} per-copy vectors, got {}",
                self.blocks.len(),
                per_copy.len()
            )));
        }
        let mut out = Vec::with_capacity(self.dim);
        for (b, v) in self.blocks.iter().zip(per_copy) {
            if v.len() != b.width {
                return Err(Error::InvalidFactor {
                    index: b.factor,
                    desc: self.factors[b.factor].describe(),
                    msg: format!("copy {} needs a vector of length {}, got {}", b.copy, b.width, v.len()),
                });
            }
            out.extend_from_slice(v);
        }
        Ok(out)
    }

    /// Splits a flat vector into per-copy vectors.
    pub fn split<T: Clone>(&self, flat: &[T]) -> Vec<Vec<T>> {
        self.blocks.iter().map(|b| flat[b.coords()].to_vec()).collect()
    }

    fn check_mu(&self, mu: &[Vec<i64>]) -> Result<()> {
        let flat = self.flatten(mu)?;
        for b in &self.blocks {
            let err = |msg: String| Error::InvalidFactor {
                index: b.factor,
                desc: self.factors[b.factor].describe(),
                msg: format!("copy {}: {}", b.copy, msg),
            };
            let v = &flat[b.coords()];
            if b.kind == FactorKind::GSp {
                let c = v[0] + v[b.width - 1];
                if (0..b.width).any(|i| v[i] + v[b.width - 1 - i] != c) {
                    return Err(err(format!("mu {:?} violates a_i + a_(2g+1-i) = c", v)));
                }
                if c != 1 {
                    return Err(err(format!("mu {:?} has similitude {} (must be 1)", v, c)));
                }
            }
            if v.windows(2).any(|w| w[0] < w[1]) {
                return Err(err(format!("mu {:?} is not dominant", v)));
            }
            if v[0] - v[b.width - 1] > 1 {
                return Err(err(format!("mu {:?} is not minuscule", v)));
            }
        }
        Ok(())
    }

    /// `phi` on a flat integer coweight.
    pub fn phi_coweight(&self, lambda: &[i64]) -> Coweight {
        let mut out = vec![0; self.dim];
        for i in 0..self.dim {
            out[self.frob_coord[i]] = self.frob_sign[i] * lambda[i];
        }
        out
    }

    pub fn phi_coweight_q(&self, nu: &[Rational64]) -> RationalCoweight {
        let mut out = vec![Rational64::zero(); self.dim];
        for i in 0..self.dim {
            out[self.frob_coord[i]] = nu[i] * Rational64::from(self.frob_sign[i]);
        }
        out
    }

    pub fn phi_root(&self, r: Root) -> Root {
        let (a, b) = (self.frob_coord[r.a], self.frob_coord[r.b]);
        if self.frob_sign[r.a] > 0 {
            self.canon(a, b)
        } else {
            self.canon(b, a)
        }
    }

    /// `phi` on simple reflection indices.
    pub fn phi_simple(&self, s: usize) -> usize {
        self.frob_simple[s]
    }

    pub fn phi_simple_set(&self, j: &BTreeSet<usize>) -> BTreeSet<usize> {
        j.iter().map(|&s| self.frob_simple[s]).collect()
    }

    /// Frobenius on coordinates (ignoring signs), used to conjugate Weyl
    /// group elements.
    pub(crate) fn frob_coord(&self) -> &[usize] {
        &self.frob_coord
    }

    pub fn is_dominant(&self, lambda: &[i64]) -> bool {
        self.simple.iter().all(|s| s.root.pair(lambda) >= 0)
    }

    pub fn is_dominant_q(&self, nu: &[Rational64]) -> bool {
        self.simple.iter().all(|s| !s.root.pair_q(nu).is_negative())
    }

    pub fn is_minuscule(&self, lambda: &[i64]) -> bool {
        self.roots.iter().all(|r| r.pair(lambda).abs() <= 1)
    }

    /// Coefficients of `delta` in the simple coroots, or `None` when `delta`
    /// is not in their rational span.
    pub fn simple_coroot_coefficients(&self, delta: &[Rational64]) -> Option<Vec<Rational64>> {
        let mut coeffs = vec![Rational64::zero(); self.simple.len()];
        for (bi, b) in self.blocks.iter().enumerate() {
            let v = &delta[b.coords()];
            let half = match b.kind {
                FactorKind::GL => {
                    if !v.iter().copied().sum::<Rational64>().is_zero() {
                        return None;
                    }
                    b.width - 1
                }
                FactorKind::GSp => {
                    if (0..b.width).any(|i| !(v[i] + v[b.width - 1 - i]).is_zero()) {
                        return None;
                    }
                    b.rank
                }
            };
            let mut partial = Rational64::zero();
            for k in 0..half {
                partial += v[k];
                let idx = self
                    .simple
                    .iter()
                    .position(|s| s.block == bi && s.local == k + 1)
                    .expect("simple reflection exists");
                coeffs[idx] = partial;
            }
        }
        Some(coeffs)
    }

    /// `nu1 <= nu2` in the dominance order on dominant rational coweights.
    pub fn dominance_leq(&self, nu1: &[Rational64], nu2: &[Rational64]) -> Result<bool> {
        self.check_len(nu1.len())?;
        self.check_len(nu2.len())?;
        for nu in [nu1, nu2] {
            if !self.is_dominant_q(nu) {
                return Err(Error::NotDominant(fmt_q(nu)));
            }
        }
        let delta: Vec<Rational64> = nu2.iter().zip(nu1).map(|(a, b)| a - b).collect();
        Ok(match self.simple_coroot_coefficients(&delta) {
            Some(c) => c.iter().all(|x| !x.is_negative()),
            None => false,
        })
    }

    /// Image of `lambda` in `pi_1(G)_Gamma`: per factor, the sum of all
    /// entries (GL), the sum of similitudes (GSp); flipped GL factors have
    /// coinvariants `Z/2`.
    pub fn pi1_image(&self, lambda: &[i64]) -> Pi1Class {
        let mut out = vec![0; self.factors.len()];
        for b in &self.blocks {
            let v = &lambda[b.coords()];
            out[b.factor] += match b.kind {
                FactorKind::GL => v.iter().sum(),
                FactorKind::GSp => v[0] + v[b.width - 1],
            };
        }
        for (fi, f) in self.factors.iter().enumerate() {
            if f.flip {
                out[fi] = out[fi].rem_euclid(2);
            }
        }
        Pi1Class(out)
    }

    pub fn pi1_add(&self, x: &Pi1Class, y: &Pi1Class) -> Pi1Class {
        let mut out: Vec<i64> = x.0.iter().zip(&y.0).map(|(a, b)| a + b).collect();
        for (fi, f) in self.factors.iter().enumerate() {
            if f.flip {
                out[fi] = out[fi].rem_euclid(2);
            }
        }
        Pi1Class(out)
    }

    /// `w . lambda` for a permutation `w` of flat coordinates.
    pub fn act_coweight<T: Clone>(&self, w: &[u8], lambda: &[T]) -> Vec<T> {
        let mut out = lambda.to_vec();
        for (i, x) in lambda.iter().enumerate() {
            out[w[i] as usize] = x.clone();
        }
        out
    }

    pub fn act_root(&self, w: &[u8], r: Root) -> Root {
        self.canon(w[r.a] as usize, w[r.b] as usize)
    }

    /// The W-orbit of `mu`, sorted lexicographically in decreasing order.
    pub fn minuscule_orbit(&self, mu: &[i64]) -> Vec<Coweight> {
        let mut seen: BTreeSet<Coweight> = BTreeSet::new();
        let mut queue = VecDeque::from([mu.to_vec()]);
        seen.insert(mu.to_vec());
        while let Some(l) = queue.pop_front() {
            for s in &self.simple {
                let m = self.act_coweight(&s.perm, &l);
                if seen.insert(m.clone()) {
                    queue.push_back(m);
                }
            }
        }
        seen.into_iter().rev().collect()
    }

    /// Dominant representative of the W-orbit of a rational coweight.
    pub fn dominant_q(&self, nu: &[Rational64]) -> RationalCoweight {
        let mut out = nu.to_vec();
        for b in &self.blocks {
            out[b.coords()].sort_by(|x, y| y.cmp(x));
        }
        out
    }

    pub fn dominant(&self, lambda: &[i64]) -> Coweight {
        let mut out = lambda.to_vec();
        for b in &self.blocks {
            out[b.coords()].sort_by(|x, y| y.cmp(x));
        }
        out
    }

    /// Average of `mu` over its Frobenius orbit.
    pub fn gamma_average(&self, mu: &[i64]) -> RationalCoweight {
        let r = self.frob_order;
        let mut acc = vec![Rational64::zero(); self.dim];
        let mut cur = mu.to_vec();
        for _ in 0..r {
            for (a, c) in acc.iter_mut().zip(&cur) {
                *a += Rational64::from(*c);
            }
            cur = self.phi_coweight(&cur);
        }
        let denom = Rational64::from(r as i64);
        acc.into_iter().map(|x| x / denom).collect()
    }
}

pub fn to_q(lambda: &[i64]) -> RationalCoweight {
    lambda.iter().map(|&x| Rational64::from(x)).collect()
}

pub fn fmt_q(nu: &[Rational64]) -> String {
    let parts: Vec<String> = nu.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}
