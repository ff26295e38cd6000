//! Extended affine Weyl group `W̃ = W ⋉ X_*(T)`.
//!
//! Elements are written `w·t^λ` with
//! `(w·t^λ)(w'·t^λ') = (ww')·t^{w'⁻¹λ + λ'}`; as a monomial matrix this is
//! `e_j ↦ p^{λ_j} e_{w(j)}`. The Iwahori subgroup is the preimage of the upper
//! Borel, so `U_α ∩ I = U_α(ε^{c(α)} O)` with `c(α) = 0` for positive and
//! `c(α) = 1` for negative roots, and `x (U_α ∩ I) x⁻¹ = U_{wα}(ε^{c(α)+⟨α,λ⟩} O)`.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::Signed;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rootdata::{Coweight, FactorKind, FactorSpec, Pi1Class, RationalCoweight, Root, RootSystem};
use crate::strata::NewtonPoint;
use crate::weyl::{Side, SimpleSet, WeylElt};

/// `w·t^λ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExtAffineElt {
    pub w: WeylElt,
    pub lambda: Coweight,
}

impl ExtAffineElt {
    pub fn new(w: WeylElt, lambda: Coweight) -> Self {
        ExtAffineElt { w, lambda }
    }

    pub fn is_translation(&self) -> bool {
        self.w.is_identity()
    }
}

/// `c(α)`: 0 on positive roots, 1 on negative roots.
pub fn iwahori_level(alpha: Root) -> i64 {
    if alpha.is_positive() {
        0
    } else {
        1
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum RootPart {
    Levi,
    Unipotent,
    Opposite,
}

/// A parabolic containing `T`, given by a coweight `h`: `Φ_M = {⟨α,h⟩ = 0}`,
/// `Φ_N = {⟨α,h⟩ > 0}`, `Φ_N̄ = {⟨α,h⟩ < 0}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SemistandardParabolic {
    pub level: Coweight,
    /// `RootPart` for every root, indexed like `RootSystem::roots`.
    parts: Vec<RootPart>,
}

impl SemistandardParabolic {
    pub fn from_level(rs: &RootSystem, level: Coweight) -> Self {
        let parts = rs
            .roots()
            .iter()
            .map(|r| match r.pair(&level).signum() {
                0 => RootPart::Levi,
                1 => RootPart::Unipotent,
                _ => RootPart::Opposite,
            })
            .collect();
        SemistandardParabolic { level, parts }
    }

    /// The standard parabolic of type `J'`.
    pub fn standard(rs: &RootSystem, jp: &SimpleSet) -> Self {
        let mut level = vec![0i64; rs.dim()];
        for (bi, b) in rs.blocks().iter().enumerate() {
            let off = |s: usize| !jp.contains(&s);
            let idx = |local: usize| {
                rs.simple_reflections().iter().position(|s| s.block == bi && s.local == local).expect("simple")
            };
            match b.kind {
                FactorKind::GL => {
                    for i in 0..b.width {
                        level[b.offset + i] = (i + 1..b.width).filter(|&k| off(idx(k))).count() as i64;
                    }
                }
                FactorKind::GSp => {
                    let g = b.rank;
                    for i in 0..g {
                        let v = 2 * (i + 1..g).filter(|&k| off(idx(k))).count() as i64 + i64::from(off(idx(g)));
                        level[b.offset + i] = v;
                        level[b.offset + 2 * g - 1 - i] = -v;
                    }
                }
            }
        }
        Self::from_level(rs, level)
    }

    pub fn conjugate(&self, rs: &RootSystem, u: &WeylElt) -> Self {
        Self::from_level(rs, rs.act_coweight(&u.0, &self.level))
    }

    pub fn part(&self, root_index: usize) -> RootPart {
        self.parts[root_index]
    }

    pub fn parts(&self) -> &[RootPart] {
        &self.parts
    }

    pub fn is_whole_group(&self) -> bool {
        self.parts.iter().all(|&p| p == RootPart::Levi)
    }

    pub fn levi_roots(&self, rs: &RootSystem) -> Vec<Root> {
        self.roots_in(rs, RootPart::Levi)
    }

    pub fn unipotent_roots(&self, rs: &RootSystem) -> Vec<Root> {
        self.roots_in(rs, RootPart::Unipotent)
    }

    /// Coordinates joined by Levi roots get the same label (the smallest
    /// coordinate of their class).
    pub fn levi_labels(&self, rs: &RootSystem) -> Vec<usize> {
        let mut label: Vec<usize> = (0..rs.dim()).collect();
        loop {
            let mut changed = false;
            for r in self.levi_roots(rs) {
                let m = label[r.a].min(label[r.b]);
                if label[r.a] != m || label[r.b] != m {
                    label[r.a] = m;
                    label[r.b] = m;
                    changed = true;
                }
            }
            if !changed {
                return label;
            }
        }
    }

    fn roots_in(&self, rs: &RootSystem, part: RootPart) -> Vec<Root> {
        rs.roots().iter().zip(&self.parts).filter(|(_, &p)| p == part).map(|(r, _)| *r).collect()
    }

    /// Compact description: per root, `M`, `N` or `-`.
    pub fn describe(&self, rs: &RootSystem) -> String {
        if self.is_whole_group() {
            return "G".into();
        }
        let n: Vec<String> = self.unipotent_roots(rs).iter().map(|r| format!("e{}-e{}", r.a + 1, r.b + 1)).collect();
        format!("N={{{}}}", n.join(","))
    }
}

impl RootSystem {
    pub fn translation(&self, lambda: Coweight) -> ExtAffineElt {
        ExtAffineElt::new(self.identity(), lambda)
    }

    pub fn finite(&self, w: WeylElt) -> ExtAffineElt {
        ExtAffineElt::new(w, vec![0; self.dim()])
    }

    pub fn multiply(&self, x: &ExtAffineElt, y: &ExtAffineElt) -> ExtAffineElt {
        let moved = self.act_coweight(&y.w.inverse().0, &x.lambda);
        let lambda = moved.iter().zip(&y.lambda).map(|(a, b)| a + b).collect();
        ExtAffineElt::new(x.w.mul(&y.w), lambda)
    }

    pub fn invert(&self, x: &ExtAffineElt) -> ExtAffineElt {
        let moved = self.act_coweight(&x.w.0, &x.lambda);
        ExtAffineElt::new(x.w.inverse(), moved.iter().map(|v| -v).collect())
    }

    pub fn sigma(&self, x: &ExtAffineElt) -> ExtAffineElt {
        ExtAffineElt::new(self.phi_apply(&x.w), self.phi_coweight(&x.lambda))
    }

    pub fn sigma_pow(&self, x: &ExtAffineElt, k: usize) -> ExtAffineElt {
        let mut out = x.clone();
        for _ in 0..k % self.frobenius_order() {
            out = self.sigma(&out);
        }
        out
    }

    /// `y · x · σ(y)⁻¹`.
    pub fn sigma_conjugate(&self, y: &ExtAffineElt, x: &ExtAffineElt) -> ExtAffineElt {
        self.multiply(&self.multiply(y, x), &self.invert(&self.sigma(y)))
    }

    /// `ℓ(w·t^λ) = Σ_{α>0, wα>0} |⟨α,λ⟩| + Σ_{α>0, wα<0} |⟨α,λ⟩ − 1|`.
    pub fn affine_length(&self, x: &ExtAffineElt) -> usize {
        self.roots()
            .iter()
            .filter(|r| r.is_positive())
            .map(|r| {
                let p = r.pair(&x.lambda);
                if x.w.0[r.a] < x.w.0[r.b] {
                    p.unsigned_abs() as usize
                } else {
                    (p - 1).unsigned_abs() as usize
                }
            })
            .sum()
    }

    /// `x I x⁻¹ = I` at root level: `c(α) + ⟨α,λ⟩ = c(wα)` for all roots.
    pub fn is_in_omega(&self, x: &ExtAffineElt) -> bool {
        self.roots()
            .iter()
            .all(|&r| iwahori_level(r) + r.pair(&x.lambda) == iwahori_level(self.act_root(&x.w.0, r)))
    }

    /// `(c, m)` with `m` a multiple of the Frobenius order and
    /// `x σ(x) ⋯ σ^{m-1}(x) = t^c`.
    pub fn newton_data(&self, x: &ExtAffineElt) -> Result<(Coweight, usize)> {
        let r = self.frobenius_order();
        let mut q = self.translation(vec![0; self.dim()]);
        for k in 0..r {
            q = self.multiply(&q, &self.sigma_pow(x, k));
        }
        let bound = 4 * self.dim().max(2).pow(3) + 64;
        let mut p = q.clone();
        for o in 1..=bound {
            if p.is_translation() {
                return Ok((p.lambda, o * r));
            }
            p = self.multiply(&p, &q);
        }
        Err(Error::BoundExceeded(format!("no pure translation among the first {bound} powers")))
    }

    /// Average translation `c/m`, before taking the dominant representative.
    pub fn newton_vector(&self, x: &ExtAffineElt) -> Result<RationalCoweight> {
        let (c, m) = self.newton_data(x)?;
        Ok(c.iter().map(|&v| Rational64::new(v, m as i64)).collect())
    }

    pub fn newton_point(&self, x: &ExtAffineElt) -> Result<RationalCoweight> {
        Ok(self.dominant_q(&self.newton_vector(x)?))
    }

    pub fn kappa_point(&self, x: &ExtAffineElt) -> Pi1Class {
        self.pi1_image(&x.lambda)
    }

    pub fn newton_class(&self, x: &ExtAffineElt) -> Result<NewtonPoint> {
        Ok(NewtonPoint { nu: self.newton_point(x)?, kappa: self.kappa_point(x) })
    }

    /// The root map of `xσ`, `α ↦ w(φα)`, and the defect
    /// `c(φα) + ⟨φα,λ⟩ − c(w(φα))`, per root index. This is the operator whose
    /// powers `(xσ)^m` give the Newton vector.
    fn twisted_root_data(&self, x: &ExtAffineElt) -> Vec<(usize, i64)> {
        self.roots()
            .iter()
            .map(|&r| {
                let (img, defect) = self.twisted_root(x, r);
                (self.root_index(img), defect)
            })
            .collect()
    }

    fn twisted_root(&self, x: &ExtAffineElt, r: Root) -> (Root, i64) {
        let fr = self.phi_root(r);
        let img = self.act_root(&x.w.0, fr);
        (img, iwahori_level(fr) + fr.pair(&x.lambda) - iwahori_level(img))
    }

    pub fn is_p_fundamental(&self, x: &ExtAffineElt, p: &SemistandardParabolic) -> bool {
        p_fundamental_on(&self.twisted_root_data(x), p)
    }

    /// `b σ(I_M) b⁻¹ = I_M` for the Levi whose roots are those joining
    /// coordinates with equal `levi` labels.
    pub fn stabilizes_levi_iwahori(&self, x: &ExtAffineElt, levi: &[usize]) -> bool {
        self.roots().iter().filter(|r| levi[r.a] == levi[r.b]).all(|&r| {
            let (img, defect) = self.twisted_root(x, r);
            levi[img.a] == levi[img.b] && defect == 0
        })
    }

    /// Simple affine reflections: the reflections `s_α t^{kα∨}` of length 1.
    pub fn affine_simple_reflections(&self) -> Vec<ExtAffineElt> {
        let mut out = BTreeSet::new();
        for r in self.roots().iter().filter(|r| r.is_positive()) {
            let (w, coroot) = self.reflection(*r);
            for k in -2i64..=2 {
                let x = ExtAffineElt::new(w.clone(), coroot.iter().map(|v| k * v).collect());
                if self.affine_length(&x) == 1 {
                    out.insert(x);
                }
            }
        }
        out.into_iter().collect()
    }

    /// Reflection and coroot of a root.
    pub fn reflection(&self, r: Root) -> (WeylElt, Coweight) {
        let mut perm: Vec<u8> = (0..self.dim() as u8).collect();
        let mut coroot = vec![0; self.dim()];
        perm.swap(r.a, r.b);
        coroot[r.a] += 1;
        coroot[r.b] -= 1;
        if self.block_of(r.a).kind == FactorKind::GSp && self.mirror(r.a) != r.b {
            let (ma, mb) = (self.mirror(r.a), self.mirror(r.b));
            perm.swap(ma, mb);
            coroot[mb] += 1;
            coroot[ma] -= 1;
        }
        (WeylElt(perm), coroot)
    }

    /// `v = s_1 ⋯ s_k · ω` with simple affine `s_i` and `ω ∈ Ω`.
    pub fn affine_reduced_decomposition(&self, v: &ExtAffineElt) -> (Vec<ExtAffineElt>, ExtAffineElt) {
        let simple = self.affine_simple_reflections();
        let mut cur = v.clone();
        let mut word = Vec::new();
        'outer: loop {
            let l = self.affine_length(&cur);
            if l == 0 {
                return (word, cur);
            }
            for s in &simple {
                let sc = self.multiply(s, &cur);
                if self.affine_length(&sc) < l {
                    word.push(s.clone());
                    cur = sc;
                    continue 'outer;
                }
            }
            unreachable!("element of positive length has a descent");
        }
    }

    /// `{z : IzI ⊆ IuI·IvI}`.
    pub fn demazure_support(&self, u: &ExtAffineElt, v: &ExtAffineElt) -> BTreeSet<ExtAffineElt> {
        let (word, omega) = self.affine_reduced_decomposition(v);
        let mut cur: BTreeSet<ExtAffineElt> = BTreeSet::from([u.clone()]);
        for s in &word {
            let mut next = BTreeSet::new();
            for z in &cur {
                let zs = self.multiply(z, s);
                if self.affine_length(&zs) < self.affine_length(z) {
                    next.insert(z.clone());
                }
                next.insert(zs);
            }
            cur = next;
        }
        cur.iter().map(|z| self.multiply(z, &omega)).collect()
    }

    /// Length-zero elements `w·t^λ` with `λ ∈ {0,1}^N`: representatives of
    /// `Ω` modulo central translations.
    pub fn omega_representatives(&self) -> Vec<ExtAffineElt> {
        let n = self.dim();
        let weyl = self.elements();
        let mut out = Vec::new();
        for mask in 0u64..(1u64 << n) {
            let lambda: Coweight = (0..n).map(|i| ((mask >> i) & 1) as i64).collect();
            if !self.is_valid_coweight(&lambda) {
                continue;
            }
            for w in &weyl {
                let x = ExtAffineElt::new(w.clone(), lambda.clone());
                if self.affine_length(&x) == 0 {
                    out.push(x);
                }
            }
        }
        out
    }

    /// Serialization `{"w": one-line, "lambda": per-copy vectors}`.
    pub fn affine_to_json(&self, x: &ExtAffineElt) -> serde_json::Value {
        serde_json::json!({ "w": self.fmt_weyl(&x.w), "lambda": self.split(&x.lambda) })
    }

    pub fn fmt_affine(&self, x: &ExtAffineElt) -> String {
        let lam: Vec<String> = self
            .split(&x.lambda)
            .iter()
            .map(|v| v.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(","))
            .collect();
        format!("{}·t^({})", self.fmt_weyl(&x.w), lam.join("|"))
    }
}

fn p_fundamental_on(data: &[(usize, i64)], p: &SemistandardParabolic) -> bool {
    data.iter().enumerate().all(|(i, &(img, defect))| {
        let part = p.part(i);
        part == p.part(img)
            && match part {
                RootPart::Levi => defect == 0,
                RootPart::Unipotent => defect >= 0,
                RootPart::Opposite => defect <= 0,
            }
    })
}

/// Precomputed semistandard parabolics and Weyl group for fundamentality
/// searches.
#[derive(Clone, Debug)]
pub struct FundamentalTester {
    rs: RootSystem,
    parabolics: Vec<SemistandardParabolic>,
    weyl: Vec<WeylElt>,
}

/// All semistandard parabolics: `u P_{J'} u⁻¹` for standard `J'` (largest
/// first) and `u ∈ W^{J'}`, deduplicated by root partition.
pub fn enumerate_parabolics(rs: &RootSystem) -> Vec<SemistandardParabolic> {
    let all: Vec<usize> = rs.all_simple().into_iter().collect();
    let mut subsets: Vec<SimpleSet> = (0u64..(1u64 << all.len()))
        .map(|m| all.iter().enumerate().filter(|(i, _)| (m >> i) & 1 == 1).map(|(_, &s)| s).collect())
        .collect();
    subsets.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    let mut seen: HashSet<Vec<RootPart>> = HashSet::new();
    let mut out = Vec::new();
    for jp in &subsets {
        let std = SemistandardParabolic::standard(rs, jp);
        for u in rs.min_coset_reps(jp, Side::Right) {
            let p = std.conjugate(rs, &u);
            if seen.insert(p.parts.clone()) {
                out.push(p);
            }
        }
    }
    out
}

impl FundamentalTester {
    pub fn new(rs: &RootSystem) -> Self {
        FundamentalTester { rs: rs.clone(), parabolics: enumerate_parabolics(rs), weyl: rs.elements() }
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }

    pub fn parabolics(&self) -> &[SemistandardParabolic] {
        &self.parabolics
    }

    /// A semistandard parabolic for which `x` is P-fundamental, if any.
    pub fn is_fundamental(&self, x: &ExtAffineElt) -> Option<&SemistandardParabolic> {
        let data = self.rs.twisted_root_data(x);
        self.parabolics.iter().find(|p| p_fundamental_on(&data, p))
    }

    /// A W-σ-conjugate `y x σ(y)⁻¹` of `x` that is fundamental, with witness.
    pub fn fundamental_conjugate(&self, x: &ExtAffineElt) -> Option<(ExtAffineElt, &SemistandardParabolic)> {
        self.weyl.iter().find_map(|y| {
            let c = self.rs.sigma_conjugate(&self.rs.finite(y.clone()), x);
            self.is_fundamental(&c).map(|p| (c, p))
        })
    }

    /// Candidates `w·t^{μ'}` (`w ∈ W`, `μ' ∈ Wμ`) that are fundamental,
    /// grouped by Newton class. The candidate set is closed under
    /// W-σ-conjugation, so every class with a fundamental W-σ-conjugate shows up.
    pub fn fundamental_search(&self, mu: &Coweight) -> Result<BTreeMap<NewtonPoint, Vec<ExtAffineElt>>> {
        let mut out: BTreeMap<NewtonPoint, Vec<ExtAffineElt>> = BTreeMap::new();
        for m in self.rs.minuscule_orbit(mu) {
            for w in &self.weyl {
                let x = ExtAffineElt::new(w.clone(), m.clone());
                if self.is_fundamental(&x).is_some() {
                    out.entry(self.rs.newton_class(&x)?).or_default().push(x);
                }
            }
        }
        for v in out.values_mut() {
            v.sort_by_cached_key(|x| (self.rs.affine_length(x), x.clone()));
        }
        Ok(out)
    }
}

/// Superbasic monomial element of `Res_d GL_n`:
/// `e_{τ,l} ↦ e_{τ, l + ⌊τq/d⌋ − ⌊(τ−1)q/d⌋}` with `e_{τ,l+n} = p·e_{τ,l}`.
/// Returns the finite part and translation on `n·d` coordinates, copy by copy.
pub fn superbasic_rep(q: i64, n: usize, d: usize) -> Result<(Vec<u8>, Coweight)> {
    if n == 0 || d == 0 || q < 0 {
        return Err(Error::Shape("superbasic element needs n, d >= 1 and q >= 0".into()));
    }
    let (ni, di) = (n as i64, d as i64);
    let mut perm = Vec::with_capacity(n * d);
    let mut lambda = Vec::with_capacity(n * d);
    for tau in 1..=di {
        let shift = (tau * q).div_euclid(di) - ((tau - 1) * q).div_euclid(di);
        let base = ((tau - 1) * ni) as usize;
        for l in 0..ni {
            let target = l + shift;
            perm.push((base + target.rem_euclid(ni) as usize) as u8);
            lambda.push(target.div_euclid(ni));
        }
    }
    Ok((perm, lambda))
}

/// Embeds blocks `(q_i, n_i)` of superbasic elements along the diagonal of
/// `Res_d GL_N`, `N = Σ n_i`. Returns the element and the Levi labels.
pub fn superbasic_embedding(rs: &RootSystem, blocks: &[(i64, usize)]) -> Result<(ExtAffineElt, Vec<usize>)> {
    let n_total: usize = blocks.iter().map(|b| b.1).sum();
    if rs.blocks().iter().any(|b| b.kind != FactorKind::GL || b.width != n_total) {
        return Err(Error::Shape("ambient group must consist of GL(N) copies with N = Σ n_i".into()));
    }
    let d = rs.blocks().len();
    let mut perm = vec![0u8; rs.dim()];
    let mut lambda = vec![0i64; rs.dim()];
    let mut levi = vec![0usize; rs.dim()];
    let mut start = 0;
    for (bi, &(q, n)) in blocks.iter().enumerate() {
        let (p, l) = superbasic_rep(q, n, d)?;
        for tau in 0..d {
            for k in 0..n {
                let src = tau * n + k;
                let dst_copy = p[src] as usize / n;
                let dst_local = p[src] as usize % n;
                let from = rs.blocks()[tau].offset + start + k;
                let to = rs.blocks()[dst_copy].offset + start + dst_local;
                perm[from] = to as u8;
                lambda[from] = l[src];
                levi[from] = bi;
            }
        }
        start += n;
    }
    Ok((ExtAffineElt::new(WeylElt(perm), lambda), levi))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropertyViolation {
    pub property: u8,
    /// `m` for the partial product `x σ(x) ⋯ σ^m(x)`; `None` for `x` itself.
    pub m: Option<usize>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuperbasicReport {
    pub window: usize,
    pub violations: Vec<PropertyViolation>,
}

impl SuperbasicReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

fn sort_within(levi: &[usize], v: &mut [Rational64]) {
    let labels: BTreeSet<usize> = levi.iter().copied().collect();
    for l in labels {
        let idx: Vec<usize> = (0..v.len()).filter(|&i| levi[i] == l).collect();
        let mut vals: Vec<Rational64> = idx.iter().map(|&i| v[i]).collect();
        vals.sort_by(|a, b| b.cmp(a));
        for (i, val) in idx.into_iter().zip(vals) {
            v[i] = val;
        }
    }
}

/// Checks the five properties of the superbasic construction for `x` in the
/// Levi `M` given by `levi` labels (coordinates with equal labels, within one
/// copy, belong to the same block; the unipotent radical joins a smaller label
/// to a larger one):
/// (1) `x ∈ W̃_M`; (2) `|⟨α, μ_x − ν_x⟩| < 2` for all roots; (3) `μ_x` is
/// minuscule in `G`; (4) `⟨α, μ_x⟩ ≥ −1` for `α ∈ Φ_N`; (5) (1), (2) and (4)
/// for `x σ(x) ⋯ σ^m(x)`, `1 ≤ m ≤ window`, whose Newton vector is `(m+1)ν_x`.
pub fn check_superbasic_properties(
    rs: &RootSystem,
    x: &ExtAffineElt,
    levi: &[usize],
    window: usize,
) -> Result<SuperbasicReport> {
    let label = |c: usize| (rs.block_of(c).copy, rs.block_of(c).factor, levi[c]);
    let in_m = |r: &Root| label(r.a) == label(r.b);
    let in_n = |r: &Root| rs.block_of(r.a).copy == rs.block_of(r.b).copy && levi[r.a] < levi[r.b];
    let mut nu = rs.newton_vector(x)?;
    sort_within(levi, &mut nu);
    let mut violations = Vec::new();

    let check = |violations: &mut Vec<PropertyViolation>, y: &ExtAffineElt, m: Option<usize>, scale: i64, full: bool| {
        if (0..rs.dim()).any(|c| levi[c] != levi[y.w.image(c)]) {
            violations.push(PropertyViolation { property: 1, m, detail: format!("{} leaves M", rs.fmt_weyl(&y.w)) });
            return;
        }
        let mut mu_x: Vec<Rational64> = y.lambda.iter().map(|&v| Rational64::from(v)).collect();
        sort_within(levi, &mut mu_x);
        let s = Rational64::from(scale);
        for r in rs.roots() {
            let diff = r.pair_q(&mu_x) - r.pair_q(&nu) * s;
            if diff.abs() >= Rational64::from(2) {
                violations.push(PropertyViolation {
                    property: 2,
                    m,
                    detail: format!("root e{}-e{}: ⟨α, μ_x − ν_x⟩ = {}", r.a + 1, r.b + 1, diff),
                });
            }
            let p = r.pair_q(&mu_x);
            if full && p.abs() > Rational64::from(1) {
                violations.push(PropertyViolation {
                    property: 3,
                    m,
                    detail: format!("root e{}-e{}: ⟨α, μ_x⟩ = {}", r.a + 1, r.b + 1, p),
                });
            }
            if in_n(r) && !in_m(r) && p < Rational64::from(-1) {
                violations.push(PropertyViolation {
                    property: 4,
                    m,
                    detail: format!("root e{}-e{} in N: ⟨α, μ_x⟩ = {}", r.a + 1, r.b + 1, p),
                });
            }
        }
    };

    check(&mut violations, x, None, 1, true);
    let mut prod = x.clone();
    for m in 1..=window {
        prod = rs.multiply(&prod, &rs.sigma_pow(x, m));
        let before = violations.len();
        check(&mut violations, &prod, Some(m), m as i64 + 1, false);
        for v in &mut violations[before..] {
            v.property = 5;
            v.detail = format!("(product) {}", v.detail);
        }
    }
    Ok(SuperbasicReport { window, violations })
}

/// One isoclinic part: slope `n/h` with multiplicity `mult`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Slope {
    pub n: usize,
    pub h: usize,
    pub mult: usize,
}

pub type SlopeData = Vec<Slope>;

pub fn validate_slopes(slopes: &SlopeData, symplectic: bool) -> Result<usize> {
    let mut seen = BTreeSet::new();
    for s in slopes {
        if s.h == 0 || s.mult == 0 || s.n > s.h || s.n.gcd(&s.h) != 1 {
            return Err(Error::Shape(format!("invalid slope {}/{} x{}", s.n, s.h, s.mult)));
        }
        if !seen.insert((s.n, s.h)) {
            return Err(Error::Shape(format!("slope {}/{} listed twice", s.n, s.h)));
        }
    }
    if symplectic {
        for s in slopes {
            let dual = slopes.iter().find(|t| t.h == s.h && t.n == s.h - s.n);
            if dual.map(|t| t.mult) != Some(s.mult) {
                return Err(Error::Shape(format!("slope {}/{} lacks its dual with equal multiplicity", s.n, s.h)));
            }
        }
    }
    Ok(slopes.iter().map(|s| s.h * s.mult).sum())
}

/// Monomial matrix of `F` for the minimal isocrystal with the given slopes, in
/// the basis `f_j = e_{h+1−j}` of each simple part (`F e_j = e_{j+n}`,
/// `e_{j+h} = p·e_j`), parts ordered by decreasing slope. Returns the element
/// on `Σ h_i·mult_i` coordinates and the Levi labels of the parts.
pub fn oort_minimal_rep(slopes: &SlopeData, symplectic: bool) -> Result<(ExtAffineElt, Vec<usize>)> {
    let height = validate_slopes(slopes, symplectic)?;
    let mut parts: Vec<Slope> = slopes.clone();
    parts.sort_by(|a, b| (b.n * a.h).cmp(&(a.n * b.h)));
    let mut perm = vec![0u8; height];
    let mut lambda = vec![0i64; height];
    let mut levi = vec![0usize; height];
    let mut start = 0;
    let mut label = 0;
    for s in parts {
        for _ in 0..s.mult {
            let h = s.h;
            for j in 1..=h {
                // F f_j = e_{h+1-j+n} = p^wraps e_{k'} = p^wraps f_{h+1-k'}
                let k = h + 1 - j + s.n;
                let kp = (k - 1) % h + 1;
                let wraps = (k - kp) / h;
                perm[start + j - 1] = (start + h - kp) as u8;
                lambda[start + j - 1] = wraps as i64;
                levi[start + j - 1] = label;
            }
            start += h;
            label += 1;
        }
    }
    Ok((ExtAffineElt::new(WeylElt(perm), lambda), levi))
}

/// The ambient group of an Oort-minimal element: `GL_h`, or `GSp_h` when
/// symplectic.
pub fn oort_root_system(slopes: &SlopeData, symplectic: bool) -> Result<RootSystem> {
    let height = validate_slopes(slopes, symplectic)?;
    let f = if symplectic { FactorSpec::gsp(height / 2, 1) } else { FactorSpec::gl(height, 1) };
    RootSystem::new(&[f], 1)
}

/// A fundamental trivialization `b' = y b σ(y)⁻¹` (`y ∈ W`) of the
/// Oort-minimal Dieudonné module, with its parabolic. The block-diagonal `b`
/// itself only normalizes `I_M`; it need not be fundamental when slopes repeat
/// or when the Hodge pattern of one block sits below that of the next.
pub fn oort_fundamental_rep(
    tester: &FundamentalTester,
    slopes: &SlopeData,
    symplectic: bool,
) -> Result<(ExtAffineElt, SemistandardParabolic)> {
    let (b, _) = oort_minimal_rep(slopes, symplectic)?;
    if b.lambda.len() != tester.root_system().dim() {
        return Err(Error::Shape("tester does not match the height of the slope data".into()));
    }
    tester
        .fundamental_conjugate(&b)
        .map(|(c, p)| (c, p.clone()))
        .ok_or_else(|| Error::Integrity(format!("no fundamental W-σ-conjugate of {}", tester.root_system().fmt_affine(&b))))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum MeetResult {
    /// A witness `y` with `x_w ∈ I y⁻¹ I x_b I σ(y) I`.
    Yes { y: String },
    NoWithinBound,
    /// The search was cut off before exhausting the bound.
    Unknown,
}

/// Whether `I x_w I` meets the σ-conjugacy class of the fundamental `x_b`,
/// searching `y = ω·a` with `a` in the affine Weyl group, `ℓ(a) ≤ bound`, and
/// `ω` among the `Ω` representatives.
pub fn eo_newton_meets(
    rs: &RootSystem,
    x_w: &ExtAffineElt,
    x_b: &ExtAffineElt,
    bound: usize,
) -> Result<MeetResult> {
    if !rs.is_split() {
        return Err(Error::Unsupported("the Newton meeting test is implemented for split groups only".into()));
    }
    const CAP: usize = 200_000;
    let simple = rs.affine_simple_reflections();
    let omegas = rs.omega_representatives();
    let id = rs.translation(vec![0; rs.dim()]);
    let mut level: Vec<ExtAffineElt> = vec![id.clone()];
    let mut seen: HashSet<ExtAffineElt> = HashSet::from([id]);
    let mut truncated = false;
    for len in 0..=bound {
        for a in &level {
            for om in &omegas {
                let y = rs.multiply(om, a);
                let y_inv = rs.invert(&y);
                let sy = rs.sigma(&y);
                for z in rs.demazure_support(&y_inv, x_b) {
                    if rs.demazure_support(&z, &sy).contains(x_w) {
                        return Ok(MeetResult::Yes { y: rs.fmt_affine(&y) });
                    }
                }
            }
        }
        if len == bound {
            break;
        }
        let mut next = Vec::new();
        for a in &level {
            for s in &simple {
                let b = rs.multiply(a, s);
                if rs.affine_length(&b) == len + 1 && seen.insert(b.clone()) {
                    next.push(b);
                }
            }
        }
        if seen.len() > CAP {
            truncated = true;
            break;
        }
        level = next;
    }
    Ok(if truncated { MeetResult::Unknown } else { MeetResult::NoWithinBound })
}

/// Default search bound `ℓ(w₀) + 2·Σ_{α>0} ⟨α, μ⟩`.
pub fn default_meet_bound(rs: &RootSystem, mu: &Coweight) -> usize {
    let two_rho: i64 = rs.roots().iter().filter(|r| r.is_positive()).map(|r| r.pair(mu)).sum();
    rs.length(&rs.w0()) + 2 * two_rho as usize
}
