//! Finite Weyl group of a [`RootSystem`]: elements are permutations of the
//! flat coordinates that preserve every block (and, in symplectic blocks,
//! commute with the mirror `i -> 2g+1-i`).

use std::collections::{BTreeSet, HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::rootdata::{FactorKind, RootSystem};

/// `w` as the images `w(0), w(1), ...` of flat coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeylElt(pub Vec<u8>);

impl WeylElt {
    pub fn identity(dim: usize) -> Self {
        WeylElt((0..dim as u8).collect())
    }

    /// `self * other`, i.e. first `other`, then `self`.
    pub fn mul(&self, other: &WeylElt) -> WeylElt {
        WeylElt(other.0.iter().map(|&i| self.0[i as usize]).collect())
    }

    pub fn inverse(&self) -> WeylElt {
        let mut out = vec![0u8; self.0.len()];
        for (i, &v) in self.0.iter().enumerate() {
            out[v as usize] = i as u8;
        }
        WeylElt(out)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &v)| i == v as usize)
    }

    pub fn image(&self, i: usize) -> usize {
        self.0[i] as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// `ᴶW`: minimal in `W_J w`.
    Left,
    /// `Wᴶ`: minimal in `w W_J`.
    Right,
}

pub type SimpleSet = BTreeSet<usize>;

impl RootSystem {
    pub fn identity(&self) -> WeylElt {
        WeylElt::identity(self.dim())
    }

    pub fn simple_elt(&self, s: usize) -> WeylElt {
        WeylElt(self.simple_reflections()[s].perm.clone())
    }

    pub fn is_valid_weyl(&self, w: &WeylElt) -> bool {
        if w.0.len() != self.dim() {
            return false;
        }
        let mut seen = vec![false; self.dim()];
        for (i, &v) in w.0.iter().enumerate() {
            let v = v as usize;
            if v >= self.dim() || seen[v] || !self.block_of(i).coords().contains(&v) {
                return false;
            }
            seen[v] = true;
            if self.block_of(i).kind == FactorKind::GSp && self.mirror(v) != w.image(self.mirror(i)) {
                return false;
            }
        }
        true
    }

    /// Coxeter length: the number of positive roots sent to negative roots.
    pub fn length(&self, w: &WeylElt) -> usize {
        self.roots().iter().filter(|r| r.is_positive() && w.0[r.a] > w.0[r.b]).count()
    }

    /// Length by the closed forms: inversions for GL blocks,
    /// `#{i<j<=g : w(i)>w(j)} + #{i<=j<=g : w(i)+w(j) > 2g+1}` for GSp blocks.
    pub fn length_closed_form(&self, w: &WeylElt) -> usize {
        let mut total = 0;
        for b in self.blocks() {
            let loc: Vec<usize> = b.coords().map(|c| w.image(c) - b.offset + 1).collect();
            match b.kind {
                FactorKind::GL => {
                    for i in 0..b.width {
                        for j in i + 1..b.width {
                            if loc[i] > loc[j] {
                                total += 1;
                            }
                        }
                    }
                }
                FactorKind::GSp => {
                    let g = b.rank;
                    for i in 0..g {
                        for j in i..g {
                            if j > i && loc[i] > loc[j] {
                                total += 1;
                            }
                            if loc[i] + loc[j] > 2 * g + 1 {
                                total += 1;
                            }
                        }
                    }
                }
            }
        }
        total
    }

    /// `l(s w) < l(w)`.
    pub fn is_left_descent(&self, w: &WeylElt, s: usize) -> bool {
        let r = self.simple_reflections()[s].root;
        let inv = w.inverse();
        inv.0[r.a] > inv.0[r.b]
    }

    /// `l(w s) < l(w)`.
    pub fn is_right_descent(&self, w: &WeylElt, s: usize) -> bool {
        let r = self.simple_reflections()[s].root;
        w.0[r.a] > w.0[r.b]
    }

    /// Bruhat order by sorted prefixes: all prefixes for GL blocks, the
    /// prefixes of length at most `g` for symplectic blocks.
    pub fn bruhat_leq(&self, u: &WeylElt, w: &WeylElt) -> bool {
        let mut pu = Vec::new();
        let mut pw = Vec::new();
        for b in self.blocks() {
            let top = match b.kind {
                FactorKind::GL => b.width.saturating_sub(1),
                FactorKind::GSp => b.rank,
            };
            pu.clear();
            pw.clear();
            for k in 0..top {
                let c = b.offset + k;
                let (x, y) = (u.0[c], w.0[c]);
                pu.insert(pu.partition_point(|&v| v < x), x);
                pw.insert(pw.partition_point(|&v| v < y), y);
                if pu.iter().zip(&pw).any(|(a, b)| a > b) {
                    return false;
                }
            }
        }
        true
    }

    /// Sort key for the global ordering rule: length, then one-line notation.
    pub fn sort_key(&self, w: &WeylElt) -> (usize, Vec<u8>) {
        (self.length(w), w.0.clone())
    }

    pub fn sort_elements(&self, v: &mut [WeylElt]) {
        v.sort_by_cached_key(|w| self.sort_key(w));
    }

    /// The subgroup generated by the simple reflections in `j`, sorted.
    pub fn parabolic_subgroup(&self, j: &SimpleSet) -> Vec<WeylElt> {
        let gens: Vec<WeylElt> = j.iter().map(|&s| self.simple_elt(s)).collect();
        let id = self.identity();
        let mut seen: HashSet<WeylElt> = HashSet::from([id.clone()]);
        let mut queue = VecDeque::from([id]);
        while let Some(w) = queue.pop_front() {
            for s in &gens {
                let ws = w.mul(s);
                if seen.insert(ws.clone()) {
                    queue.push_back(ws);
                }
            }
        }
        let mut out: Vec<WeylElt> = seen.into_iter().collect();
        self.sort_elements(&mut out);
        out
    }

    /// All of `W`, sorted.
    pub fn elements(&self) -> Vec<WeylElt> {
        self.parabolic_subgroup(&self.all_simple())
    }

    pub fn min_coset_reps(&self, j: &SimpleSet, side: Side) -> Vec<WeylElt> {
        self.elements()
            .into_iter()
            .filter(|w| {
                j.iter().all(|&s| match side {
                    Side::Left => !self.is_left_descent(w, s),
                    Side::Right => !self.is_right_descent(w, s),
                })
            })
            .collect()
    }

    pub fn is_min_left(&self, w: &WeylElt, j: &SimpleSet) -> bool {
        j.iter().all(|&s| !self.is_left_descent(w, s))
    }

    /// `w = w'_J * ᴶw` with `w'_J` in `W_J` and `ᴶw` in `ᴶW`.
    pub fn coset_decompose(&self, w: &WeylElt, j: &SimpleSet) -> (WeylElt, WeylElt) {
        let mut v = w.clone();
        let mut y = self.identity();
        'outer: loop {
            for &s in j {
                if self.is_left_descent(&v, s) {
                    let se = self.simple_elt(s);
                    v = se.mul(&v);
                    y = y.mul(&se);
                    continue 'outer;
                }
            }
            return (y, v);
        }
    }

    /// Minimal representatives of `W_J \ W / W_K`: `ᴶW ∩ Wᴷ`.
    pub fn double_coset_reps(&self, j: &SimpleSet, k: &SimpleSet) -> Vec<WeylElt> {
        self.min_coset_reps(j, Side::Left)
            .into_iter()
            .filter(|w| k.iter().all(|&s| !self.is_right_descent(w, s)))
            .collect()
    }

    /// Minimal representative of the double coset `W_J w W_K`.
    pub fn double_coset_min(&self, w: &WeylElt, j: &SimpleSet, k: &SimpleSet) -> WeylElt {
        let mut v = w.clone();
        'outer: loop {
            for &s in j {
                if self.is_left_descent(&v, s) {
                    v = self.simple_elt(s).mul(&v);
                    continue 'outer;
                }
            }
            for &s in k {
                if self.is_right_descent(&v, s) {
                    v = v.mul(&self.simple_elt(s));
                    continue 'outer;
                }
            }
            return v;
        }
    }

    pub fn longest_element(&self, j: &SimpleSet) -> WeylElt {
        let mut w = self.identity();
        'outer: loop {
            for &s in j {
                if !self.is_right_descent(&w, s) {
                    w = w.mul(&self.simple_elt(s));
                    continue 'outer;
                }
            }
            return w;
        }
    }

    pub fn w0(&self) -> WeylElt {
        self.longest_element(&self.all_simple())
    }

    /// Frobenius on `W`: conjugation by the coordinate map.
    pub fn phi_apply(&self, w: &WeylElt) -> WeylElt {
        let pi = self.frob_coord();
        let mut out = vec![0u8; self.dim()];
        for i in 0..self.dim() {
            out[pi[i]] = pi[w.image(i)] as u8;
        }
        WeylElt(out)
    }

    pub fn phi_pow(&self, w: &WeylElt, k: usize) -> WeylElt {
        let mut out = w.clone();
        for _ in 0..k % self.frobenius_order() {
            out = self.phi_apply(&out);
        }
        out
    }

    /// Reduced word by greedy removal of left descents: `w = s_{i_1} ... s_{i_k}`.
    pub fn reduced_word(&self, w: &WeylElt) -> Vec<usize> {
        let mut v = w.clone();
        let mut word = Vec::new();
        'outer: while !v.is_identity() {
            for s in 0..self.simple_reflections().len() {
                if self.is_left_descent(&v, s) {
                    v = self.simple_elt(s).mul(&v);
                    word.push(s);
                    continue 'outer;
                }
            }
            unreachable!("non-identity element has a descent");
        }
        word
    }

    pub fn from_word(&self, word: &[usize]) -> WeylElt {
        word.iter().fold(self.identity(), |acc, &s| acc.mul(&self.simple_elt(s)))
    }

    /// One-line notation per block, 1-based, blocks separated by `|`.
    pub fn fmt_weyl(&self, w: &WeylElt) -> String {
        let parts: Vec<String> = self
            .blocks()
            .iter()
            .map(|b| {
                b.coords()
                    .map(|c| (w.image(c) - b.offset + 1).to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect();
        format!("[{}]", parts.join("|"))
    }

    pub fn parse_weyl(&self, text: &str) -> Result<WeylElt> {
        let bad = || Error::Shape(format!("cannot parse Weyl group element {text:?}"));
        let inner = text.trim().strip_prefix('[').and_then(|t| t.strip_suffix(']')).ok_or_else(bad)?;
        let parts: Vec<&str> = inner.split('|').collect();
        if parts.len() != self.blocks().len() {
            return Err(bad());
        }
        let mut out = Vec::with_capacity(self.dim());
        for (b, p) in self.blocks().iter().zip(parts) {
            let vals: Vec<usize> = p
                .split(',')
                .map(|x| x.trim().parse::<usize>().map_err(|_| bad()))
                .collect::<Result<_>>()?;
            if vals.len() != b.width || vals.iter().any(|&v| v == 0 || v > b.width) {
                return Err(bad());
            }
            out.extend(vals.iter().map(|v| (b.offset + v - 1) as u8));
        }
        let w = WeylElt(out);
        if self.is_valid_weyl(&w) {
            Ok(w)
        } else {
            Err(bad())
        }
    }

    /// Human-readable name of a set of simple reflections, e.g. `{s1,s3}`.
    pub fn fmt_simple_set(&self, j: &SimpleSet) -> String {
        let multi = self.blocks().len() > 1;
        let names: Vec<String> = j
            .iter()
            .map(|&s| {
                let sr = &self.simple_reflections()[s];
                if multi {
                    format!("s{}.{}", sr.block + 1, sr.local)
                } else {
                    format!("s{}", sr.local)
                }
            })
            .collect();
        format!("{{{}}}", names.join(","))
    }
}
