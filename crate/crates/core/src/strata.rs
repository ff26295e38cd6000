//! Newton points, `B(G,μ)`, and the atlas relating Ekedahl-Oort strata to
//! Newton strata through fundamental distinguished elements.

use std::collections::BTreeSet;

use num_rational::Rational64;
use num_traits::Zero;
use serde_json::{json, Value};

use crate::affine::{iwahori_level, ExtAffineElt, FundamentalTester, SemistandardParabolic};
use crate::eo_order::{build_eo_poset, eo_type, EOPoset, JConvention};
use crate::error::{Error, Result};
use crate::rootdata::{
    build_root_system, fmt_q, Coweight, FactorKind, FactorSpec, GroupSpec, Pi1Class, RationalCoweight, RootSystem,
};
use crate::siegel::Siegel;
use crate::weyl::WeylElt;

/// `(ν, κ)`; `ν` dominant.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NewtonPoint {
    pub nu: RationalCoweight,
    pub kappa: Pi1Class,
}

impl NewtonPoint {
    /// Slopes of the first copy of every factor (all copies agree).
    pub fn describe(&self, rs: &RootSystem) -> String {
        let mut parts = Vec::new();
        let mut seen = BTreeSet::new();
        for b in rs.blocks() {
            if seen.insert(b.factor) {
                parts.push(fmt_q(&self.nu[b.coords()]));
            }
        }
        format!("{} κ={}", parts.join(" × "), self.kappa)
    }

    pub fn to_json(&self, rs: &RootSystem) -> Value {
        let per_copy: Vec<String> = rs.split(&self.nu).iter().map(|v| fmt_q(v)).collect();
        json!({ "nu": per_copy, "kappa": self.kappa.0, "label": self.describe(rs) })
    }
}

pub fn newton_leq(rs: &RootSystem, b1: &NewtonPoint, b2: &NewtonPoint) -> Result<bool> {
    Ok(b1.kappa == b2.kappa && rs.dominance_leq(&b1.nu, &b2.nu)?)
}

#[derive(Clone, Debug)]
pub struct BGmu {
    /// Lexicographically increasing in `ν`, a linear extension of `≤`.
    pub elements: Vec<NewtonPoint>,
    /// `order[i][j]` iff `elements[i] ≤ elements[j]`.
    pub order: Vec<Vec<bool>>,
    pub basic: usize,
    pub mu_ordinary: usize,
}

impl BGmu {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn index_of(&self, b: &NewtonPoint) -> Option<usize> {
        self.elements.iter().position(|e| e == b)
    }

    /// Cover relations of `≤`.
    pub fn hasse(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i != j && self.order[i][j] && !(0..n).any(|k| k != i && k != j && self.order[i][k] && self.order[k][j]) {
                    out.push((i, j));
                }
            }
        }
        out
    }
}

/// Descending slope vectors of length `n` whose polygon from `(0,0)` to
/// `(n, total)` has integral breakpoints and slopes in `[lo, hi]`.
fn lattice_polygons(n: usize, total: i64, lo: Rational64, hi: Rational64) -> Vec<Vec<Rational64>> {
    fn rec(
        n: usize,
        total: i64,
        lo: Rational64,
        hi: Rational64,
        y: i64,
        prev: Option<Rational64>,
        cur: &mut Vec<Rational64>,
        out: &mut Vec<Vec<Rational64>>,
    ) {
        let x = cur.len();
        if x == n {
            if y == total {
                out.push(cur.clone());
            }
            return;
        }
        for len in 1..=n - x {
            let l = len as i64;
            let h_lo = (lo * l).ceil().to_integer();
            let h_hi = (hi * l).floor().to_integer();
            for h in h_lo..=h_hi {
                let s = Rational64::new(h, l);
                if prev.is_some_and(|p| s >= p) {
                    continue;
                }
                let rem = (n - x - len) as i64;
                let left = Rational64::from(total - y - h);
                if left < lo * rem || left > s * rem {
                    continue;
                }
                cur.extend(std::iter::repeat_n(s, len));
                rec(n, total, lo, hi, y + h, Some(s), cur, out);
                cur.truncate(x);
            }
        }
    }
    let mut out = Vec::new();
    rec(n, total, lo, hi, 0, None, &mut Vec::new(), &mut out);
    out
}

/// `B(G,μ)` by lattice-polygon enumeration per factor. A factor with `d`
/// copies (doubled under the involution) has period `r`, and `r·ν` restricted
/// to one copy must have integral breakpoints.
pub fn enumerate_bgmu(rs: &RootSystem, mu: &Coweight) -> Result<BGmu> {
    if !rs.is_dominant(mu) || !rs.is_minuscule(mu) {
        return Err(Error::NotDominant(format!("{mu:?} must be dominant and minuscule")));
    }
    let mu_bar = rs.gamma_average(mu);
    let kappa = rs.pi1_image(mu);
    let mut per_factor: Vec<Vec<Vec<Rational64>>> = Vec::new();
    for (fi, f) in rs.factors().iter().enumerate() {
        let b = rs.blocks().iter().find(|b| b.factor == fi).expect("factor has a block");
        let v = &mu_bar[b.coords()];
        let r = (f.copies * if f.flip { 2 } else { 1 }) as i64;
        let sum: Rational64 = v.iter().copied().sum::<Rational64>() * r;
        if !sum.is_integer() {
            return Err(Error::Integrity(format!("factor {fi}: r·Σμ̄ = {sum} is not integral")));
        }
        let lo = *v.iter().min().expect("nonempty") * r;
        let hi = *v.iter().max().expect("nonempty") * r;
        let rq = Rational64::from(r);
        let cands = lattice_polygons(b.width, sum.to_integer(), lo, hi)
            .into_iter()
            .map(|p| p.into_iter().map(|s| s / rq).collect::<Vec<_>>())
            .filter(|nu| symmetric_for(f, nu))
            .collect();
        per_factor.push(cands);
    }
    let mut elements = Vec::new();
    let mut choice = vec![0usize; per_factor.len()];
    if per_factor.iter().all(|c| !c.is_empty()) {
        loop {
            let mut nu = vec![Rational64::zero(); rs.dim()];
            for b in rs.blocks() {
                nu[b.coords()].clone_from_slice(&per_factor[b.factor][choice[b.factor]]);
            }
            if rs.dominance_leq(&nu, &mu_bar)? {
                elements.push(NewtonPoint { nu, kappa: kappa.clone() });
            }
            let mut k = 0;
            while k < choice.len() {
                choice[k] += 1;
                if choice[k] < per_factor[k].len() {
                    break;
                }
                choice[k] = 0;
                k += 1;
            }
            if k == choice.len() {
                break;
            }
        }
    }
    elements.sort();
    let order: Vec<Vec<bool>> = elements
        .iter()
        .map(|a| elements.iter().map(|b| newton_leq(rs, a, b)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    let n = elements.len();
    let basic = (0..n).find(|&i| (0..n).all(|j| order[i][j]));
    let top = (0..n).find(|&i| (0..n).all(|j| order[j][i]));
    match (basic, top) {
        (Some(basic), Some(mu_ordinary)) if elements[mu_ordinary].nu == mu_bar => {
            Ok(BGmu { elements, order, basic, mu_ordinary })
        }
        _ => Err(Error::Integrity("B(G,μ) lacks a unique minimum or a maximum equal to μ̄".into())),
    }
}

fn symmetric_for(f: &FactorSpec, nu: &[Rational64]) -> bool {
    let n = nu.len();
    match f.kind {
        FactorKind::GSp => {
            let c = nu[0] + nu[n - 1];
            (0..n).all(|i| nu[i] + nu[n - 1 - i] == c)
        }
        FactorKind::GL if f.flip => (0..n).all(|i| (nu[i] + nu[n - 1 - i]).is_zero()),
        FactorKind::GL => true,
    }
}

/// `x_w = w·x·t^μ`.
pub fn distinguished_element(eo: &EOPoset, w: &WeylElt, mu: &Coweight) -> Result<ExtAffineElt> {
    eo.index_of(w)?;
    Ok(ExtAffineElt::new(w.mul(eo.x()), mu.clone()))
}

/// `c(α) + ⟨α,μ⟩ = c(xα)` for every root, `x = w₀ w_{0,φ(J)}`; this is
/// `w₀ w_{0,J}` whenever Frobenius fixes `J`.
pub fn minimal_basic_root_identity(rs: &RootSystem, eo: &EOPoset, mu: &Coweight) -> bool {
    let w = eo.x();
    rs.roots().iter().all(|&a| iwahori_level(a) + a.pair(mu) == iwahori_level(rs.act_root(&w.0, a)))
}

#[derive(Clone, Debug)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn new(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        CheckResult { name: name.into(), passed, detail: detail.into() }
    }
}

/// Everything computed for one configuration; immutable after construction.
#[derive(Clone, Debug)]
pub struct StrataAtlas {
    rs: RootSystem,
    mu: Coweight,
    eo: EOPoset,
    bg: BGmu,
    tester: FundamentalTester,
    x_w: Vec<ExtAffineElt>,
    b_w: Vec<NewtonPoint>,
    witness: Vec<Option<(ExtAffineElt, SemistandardParabolic)>>,
}

pub fn build_atlas(spec: &GroupSpec, conv: JConvention) -> Result<StrataAtlas> {
    let rs = build_root_system(spec)?;
    let mu = rs.flatten(&spec.mu)?;
    let eo = build_eo_poset(&rs, &eo_type(&rs, &mu, conv))?;
    let bg = enumerate_bgmu(&rs, &mu)?;
    let tester = FundamentalTester::new(&rs);
    let mut x_w = Vec::with_capacity(eo.len());
    let mut b_w = Vec::with_capacity(eo.len());
    let mut witness = Vec::with_capacity(eo.len());
    for w in eo.elements() {
        let x = distinguished_element(&eo, w, &mu)?;
        b_w.push(rs.newton_class(&x)?);
        witness.push(tester.fundamental_conjugate(&x).map(|(c, p)| (c, p.clone())));
        x_w.push(x);
    }
    Ok(StrataAtlas { rs, mu, eo, bg, tester, x_w, b_w, witness })
}

impl StrataAtlas {
    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }

    pub fn mu(&self) -> &Coweight {
        &self.mu
    }

    pub fn eo(&self) -> &EOPoset {
        &self.eo
    }

    pub fn bg(&self) -> &BGmu {
        &self.bg
    }

    pub fn tester(&self) -> &FundamentalTester {
        &self.tester
    }

    pub fn is_split(&self) -> bool {
        self.rs.is_split()
    }

    pub fn distinguished(&self, i: usize) -> &ExtAffineElt {
        &self.x_w[i]
    }

    /// `(ν, κ)(x_w)` for `w = eo.elements()[i]`.
    pub fn b_w(&self, i: usize) -> &NewtonPoint {
        &self.b_w[i]
    }

    /// A fundamental W-σ-conjugate of `x_w` and its parabolic, if any.
    pub fn witness(&self, i: usize) -> Option<&(ExtAffineElt, SemistandardParabolic)> {
        self.witness[i].as_ref()
    }

    pub fn is_fundamental_idx(&self, i: usize) -> bool {
        self.witness[i].is_some()
    }

    /// Indices into `eo.elements()`.
    pub fn fundamental_strata(&self) -> Vec<usize> {
        (0..self.eo.len()).filter(|&i| self.is_fundamental_idx(i)).collect()
    }

    fn require_split(&self, what: &str) -> Result<()> {
        if self.is_split() {
            Ok(())
        } else {
            Err(Error::Unsupported(format!("{what} is split-only")))
        }
    }

    /// Index of `w(b)`.
    pub fn w_of_b(&self, b: &NewtonPoint) -> Result<usize> {
        self.require_split("w(b)")?;
        let hits: Vec<usize> = self.fundamental_strata().into_iter().filter(|&i| &self.b_w[i] == b).collect();
        match hits.as_slice() {
            [i] => Ok(*i),
            _ => Err(Error::Integrity(format!(
                "{} fundamental strata with Newton point {}",
                hits.len(),
                b.describe(&self.rs)
            ))),
        }
    }

    /// `Min(w)`: fundamental `w' ⪯ w`.
    pub fn min_set(&self, i: usize) -> Result<Vec<usize>> {
        self.require_split("Min(w)")?;
        Ok(self.fundamental_strata().into_iter().filter(|&k| self.eo.leq_idx(k, i)).collect())
    }

    /// Maximal `b` with `w(b) ∈ Min(w)`; all of them when there is a tie.
    pub fn generic_newton(&self, i: usize) -> Result<Vec<NewtonPoint>> {
        let cands: Vec<&NewtonPoint> = self.min_set(i)?.into_iter().map(|k| &self.b_w[k]).collect();
        let mut out = Vec::new();
        for &b in &cands {
            let mut maximal = true;
            for &c in &cands {
                if c != b && newton_leq(&self.rs, b, c)? {
                    maximal = false;
                }
            }
            if maximal && !out.contains(b) {
                out.push(b.clone());
            }
        }
        Ok(out)
    }

    /// `b' ≤ b ⟺ w(b') ⪯ w(b)` over all pairs; returns the failing pairs.
    pub fn verify_order_correspondence(&self) -> Result<Vec<String>> {
        self.require_split("the order correspondence")?;
        let ws: Vec<usize> = self.bg.elements.iter().map(|b| self.w_of_b(b)).collect::<Result<_>>()?;
        let mut bad = Vec::new();
        for (i, bi) in self.bg.elements.iter().enumerate() {
            for (j, bj) in self.bg.elements.iter().enumerate() {
                if self.bg.order[i][j] != self.eo.leq_idx(ws[i], ws[j]) {
                    bad.push(format!("{} vs {}", bi.describe(&self.rs), bj.describe(&self.rs)));
                }
            }
        }
        Ok(bad)
    }

    /// Number of `w` whose distinguished element has basic Newton point.
    pub fn basic_distinguished_count(&self) -> usize {
        let basic = &self.bg.elements[self.bg.basic];
        self.b_w.iter().filter(|b| *b == basic).count()
    }

    /// The invariant checks relating the two stratifications. Split-only
    /// checks are skipped (not failed) for non-split groups.
    pub fn verify(&self) -> Result<Vec<CheckResult>> {
        let rs = &self.rs;
        let mut out = Vec::new();
        let fund = self.fundamental_strata();
        let bg_set: BTreeSet<&NewtonPoint> = self.bg.elements.iter().collect();

        let in_bg = self.b_w.iter().all(|b| bg_set.contains(b));
        out.push(CheckResult::new("newton points of distinguished elements lie in B(G,mu)", in_bg, ""));
        out.push(CheckResult::new("minimal-basic root identity", minimal_basic_root_identity(rs, &self.eo, &self.mu), ""));
        let bottom = self.eo.index_of(&self.eo.bottom())?;
        let top = self.eo.index_of(&self.eo.top())?;
        out.push(CheckResult::new(
            "w = 1 and the top stratum are fundamental",
            self.is_fundamental_idx(bottom) && self.is_fundamental_idx(top),
            "",
        ));
        out.push(CheckResult::new("x_1 lies in Omega", rs.is_in_omega(&self.x_w[bottom]), ""));
        let mut consistent = true;
        for (c, p) in self.witness.iter().flatten() {
            let nu = rs.newton_vector(c)?;
            consistent &= p.levi_roots(rs).iter().all(|a| a.pair_q(&nu).is_zero());
        }
        out.push(CheckResult::new("Newton vector of witnesses is central in M", consistent, ""));

        if !self.is_split() {
            return Ok(out);
        }
        let found: BTreeSet<&NewtonPoint> = fund.iter().map(|&i| &self.b_w[i]).collect();
        out.push(CheckResult::new(
            "fundamental Newton points equal B(G,mu)",
            found == bg_set && fund.len() == self.bg.len(),
            format!("{} fundamental strata, |B(G,mu)| = {}", fund.len(), self.bg.len()),
        ));
        let w_basic = self.w_of_b(&self.bg.elements[self.bg.basic]);
        let w_ord = self.w_of_b(&self.bg.elements[self.bg.mu_ordinary]);
        out.push(CheckResult::new(
            "w(basic) = 1 and w(mu-ordinary) = top",
            w_basic.as_ref().ok() == Some(&bottom) && w_ord.as_ref().ok() == Some(&top),
            "",
        ));
        let mut shadow = Vec::new();
        for i in 0..self.eo.len() {
            match self.w_of_b(&self.b_w[i]) {
                Ok(k) if self.eo.leq_idx(k, i) => {}
                _ => shadow.push(rs.fmt_weyl(&self.eo.elements()[i])),
            }
        }
        out.push(CheckResult::new("w(b_w) ⪯ w", shadow.is_empty(), shadow.join(" ")));
        let bad = self.verify_order_correspondence().unwrap_or_else(|e| vec![e.to_string()]);
        out.push(CheckResult::new("b' ≤ b iff w(b') ⪯ w(b)", bad.is_empty(), bad.join("; ")));
        let mut generic_ok = true;
        for i in 0..self.eo.len() {
            for g in self.generic_newton(i)? {
                generic_ok &= newton_leq(rs, &self.b_w[i], &g)?;
            }
        }
        out.push(CheckResult::new("generic Newton point dominates b_w", generic_ok, ""));
        Ok(out)
    }

    fn siegel(&self) -> Option<Siegel> {
        let f = self.rs.factors();
        if f.len() == 1 && f[0].kind == FactorKind::GSp && f[0].copies == 1 {
            let s = Siegel::new(f[0].rank()).ok()?;
            (s.j() == self.eo.j()).then_some(s)
        } else {
            None
        }
    }

    /// Per-`w` and per-`b` records.
    pub fn report_json(&self) -> Result<Value> {
        let rs = &self.rs;
        let siegel = self.siegel();
        let mut strata = Vec::new();
        for (i, w) in self.eo.elements().iter().enumerate() {
            let eps = match &siegel {
                Some(s) => json!(s.w_to_eps(w)?.iter().map(|e| e.to_string()).collect::<String>()),
                None => Value::Null,
            };
            let generic = if self.is_split() {
                json!(self.generic_newton(i)?.iter().map(|b| b.to_json(rs)).collect::<Vec<_>>())
            } else {
                Value::Null
            };
            strata.push(json!({
                "w": rs.fmt_weyl(w),
                "length": rs.length(w),
                "eps": eps,
                "fundamental": self.is_fundamental_idx(i),
                "x_w": rs.affine_to_json(&self.x_w[i]),
                "b_w": self.b_w[i].to_json(rs),
                "generic_newton": generic,
            }));
        }
        let mut newton = Vec::new();
        for b in &self.bg.elements {
            let wb = if self.is_split() { json!(rs.fmt_weyl(&self.eo.elements()[self.w_of_b(b)?])) } else { Value::Null };
            let mut rec = b.to_json(rs);
            rec["w_b"] = wb;
            newton.push(rec);
        }
        Ok(json!({
            "split": self.is_split(),
            "J": rs.fmt_simple_set(self.eo.j()),
            "strata": strata,
            "newton": newton,
        }))
    }
}

/// The Hilbert-Blumenthal example: two fundamental elements in one
/// σ-conjugacy class that are not related by the Galois action.
#[derive(Clone, Debug)]
pub struct HbFixture {
    pub rs: RootSystem,
    pub x: ExtAffineElt,
    pub x_prime: ExtAffineElt,
    pub y: ExtAffineElt,
    pub p: SemistandardParabolic,
    pub p_prime: SemistandardParabolic,
    pub checks: Vec<CheckResult>,
}

/// Orientation of the Borel in each copy, propagated along Frobenius: copy
/// `τ < g` is lower triangular iff an odd number of `φ₂` occur among copies
/// `1..=τ`, copy `g` is upper. For `g = 6` this gives lower triangular copies
/// {1, 3} for `x` and {1, 4} for `x'`.
fn lower_copies(phi1: &[usize], g: usize) -> Vec<usize> {
    let mut lower = false;
    let mut out = Vec::new();
    for tau in 1..g {
        if !phi1.contains(&tau) {
            lower = !lower;
        }
        if lower {
            out.push(tau);
        }
    }
    out
}

/// `g ≥ 6` copies of `GL(2)` cycled by Frobenius. `φ₁ = t^{(1,0)}`,
/// `φ₂ = s·t^{(1,0)}`; `x` has `φ₁` in copies 5, 6 and `x'` in copies 3, 6;
/// `y = s` in copy 3 and `s·t^{(1,-1)}` in copy 4. `P` and `P'` come from
/// `lower_copies`. With an odd number of extra copies the Newton point becomes
/// basic and the fundamentality checks fail; they are reported, not hidden.
pub fn hb_fixture(g: usize) -> Result<HbFixture> {
    if g < 6 {
        return Err(Error::Shape(format!("the fixture needs at least 6 copies, got {g}")));
    }
    let rs = RootSystem::new(&[FactorSpec::gl(2, g)], 1)?;
    let swap = |perm: &mut Vec<u8>, tau: usize| perm.swap(2 * (tau - 1), 2 * (tau - 1) + 1);
    let build = |phi1: &[usize]| {
        let mut perm: Vec<u8> = (0..2 * g as u8).collect();
        let mut lambda = vec![0i64; 2 * g];
        for tau in 1..=g {
            lambda[2 * (tau - 1)] = 1;
            if !phi1.contains(&tau) {
                swap(&mut perm, tau);
            }
        }
        ExtAffineElt::new(WeylElt(perm), lambda)
    };
    let x = build(&[5, 6]);
    let x_prime = build(&[3, 6]);
    let mut perm: Vec<u8> = (0..2 * g as u8).collect();
    swap(&mut perm, 3);
    swap(&mut perm, 4);
    let mut lambda = vec![0i64; 2 * g];
    lambda[6] = 1;
    lambda[7] = -1;
    let y = ExtAffineElt::new(WeylElt(perm), lambda);
    let parabolic = |lower: &[usize]| {
        let level: Vec<i64> =
            (0..2 * g).map(|c| i64::from((c % 2 == 0) != lower.contains(&(c / 2 + 1)))).collect();
        SemistandardParabolic::from_level(&rs, level)
    };
    let p = parabolic(&lower_copies(&[5, 6], g));
    let p_prime = parabolic(&lower_copies(&[3, 6], g));

    let conj = rs.multiply(&rs.multiply(&rs.invert(&y), &x_prime), &rs.sigma(&y));
    let orbit_distinct = (0..g).all(|k| rs.sigma_pow(&x, k) != x_prime);
    let same_class = rs.newton_class(&x)? == rs.newton_class(&x_prime)?;
    let checks = vec![
        CheckResult::new("x = y⁻¹ x' σ(y)", conj == x, rs.fmt_affine(&conj)),
        CheckResult::new("x is P-fundamental", rs.is_p_fundamental(&x, &p), p.describe(&rs)),
        CheckResult::new("x' is P'-fundamental", rs.is_p_fundamental(&x_prime, &p_prime), p_prime.describe(&rs)),
        CheckResult::new("x, x' in distinct Galois orbits", orbit_distinct, ""),
        CheckResult::new("x, x' have the same (ν, κ)", same_class, rs.newton_class(&x)?.describe(&rs)),
    ];
    Ok(HbFixture { rs, x, x_prime, y, p, p_prime, checks })
}
