//! The Siegel case `GSp(2g)`, `J = {s_1, ..., s_{g-1}}`: the `{0,1}^g`
//! encoding of `ᴶW`, elementary sequences, lengths and a-numbers.

use std::collections::BTreeSet;

use crate::eo_order::EOPoset;
use crate::error::{Error, Result};
use crate::rootdata::{FactorSpec, RootSystem};
use crate::weyl::{SimpleSet, WeylElt};

pub type EpsVector = Vec<u8>;

/// `φ(0), ..., φ(g)` with `φ(0) = 0`.
pub type ElementarySequence = Vec<usize>;

#[derive(Clone, Debug)]
pub struct Siegel {
    rs: RootSystem,
    g: usize,
    j: SimpleSet,
}

impl Siegel {
    pub fn new(g: usize) -> Result<Self> {
        let rs = RootSystem::new(&[FactorSpec::gsp(g, 1)], 1)?;
        let j = (0..g - 1).collect();
        Ok(Siegel { rs, g, j })
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }

    pub fn g(&self) -> usize {
        self.g
    }

    pub fn j(&self) -> &SimpleSet {
        &self.j
    }

    /// `ᴶW` membership: `w⁻¹(1) < ... < w⁻¹(g)`.
    pub fn in_jw(&self, w: &WeylElt) -> bool {
        let inv = w.inverse();
        (1..self.g).all(|a| inv.image(a - 1) < inv.image(a))
    }

    fn check(&self, w: &WeylElt) -> Result<()> {
        if self.rs.is_valid_weyl(w) && self.in_jw(w) {
            Ok(())
        } else {
            Err(Error::NotInJW(self.rs.fmt_weyl(w)))
        }
    }

    /// `ε_i = 0` if `i ∈ {w⁻¹(1), ..., w⁻¹(g)}`, else `1`.
    pub fn w_to_eps(&self, w: &WeylElt) -> Result<EpsVector> {
        self.check(w)?;
        let inv = w.inverse();
        let s: BTreeSet<usize> = (0..self.g).map(|a| inv.image(a) + 1).collect();
        Ok((1..=self.g).map(|i| u8::from(!s.contains(&i))).collect())
    }

    pub fn eps_to_w(&self, eps: &[u8]) -> Result<WeylElt> {
        self.check_eps(eps)?;
        let g = self.g;
        let mut s: Vec<usize> = (1..=g)
            .map(|i| if eps[i - 1] == 0 { i } else { 2 * g + 1 - i })
            .collect();
        s.sort_unstable();
        let mut inv = vec![0u8; 2 * g];
        for (a, &v) in s.iter().enumerate() {
            inv[a] = (v - 1) as u8;
            inv[2 * g - 1 - a] = (2 * g - v) as u8;
        }
        Ok(WeylElt(inv).inverse())
    }

    fn check_eps(&self, eps: &[u8]) -> Result<()> {
        if eps.len() == self.g && eps.iter().all(|&e| e <= 1) {
            Ok(())
        } else {
            Err(Error::Shape(format!("expected a 0/1 vector of length {}, got {:?}", self.g, eps)))
        }
    }

    /// `ℓ(ε) = Σ_{i=1}^g i·ε_{g+1-i}`.
    pub fn length_eps(&self, eps: &[u8]) -> Result<usize> {
        self.check_eps(eps)?;
        Ok((1..=self.g).map(|i| i * eps[self.g - i] as usize).sum())
    }

    /// `φ_w(i) = i − #{1 ≤ a ≤ g : w⁻¹(a) ≤ i}`.
    pub fn elem_seq(&self, w: &WeylElt) -> Result<ElementarySequence> {
        self.check(w)?;
        let inv = w.inverse();
        Ok((0..=self.g).map(|i| i - (0..self.g).filter(|&a| inv.image(a) < i).count()).collect())
    }

    pub fn elem_seq_to_w(&self, phi: &[usize]) -> Result<WeylElt> {
        if phi.len() != self.g + 1 || phi[0] != 0 || phi.windows(2).any(|p| p[1] < p[0] || p[1] > p[0] + 1) {
            return Err(Error::Shape(format!("{:?} is not an elementary sequence", phi)));
        }
        let eps: Vec<u8> = phi.windows(2).map(|p| (p[1] - p[0]) as u8).collect();
        self.eps_to_w(&eps)
    }

    /// Bruhat order on `ᴶW` by componentwise comparison of elementary sequences.
    pub fn bruhat_on_jw(&self, a: &WeylElt, b: &WeylElt) -> Result<bool> {
        let (pa, pb) = (self.elem_seq(a)?, self.elem_seq(b)?);
        Ok(pa.iter().zip(&pb).all(|(x, y)| x <= y))
    }

    /// `a = g − #{i : ε_i = 1}`.
    pub fn a_number(&self, eps: &[u8]) -> Result<usize> {
        self.check_eps(eps)?;
        Ok(self.g - eps.iter().filter(|&&e| e == 1).count())
    }

    /// Relative position in `ᴶW^J ≅ {0..g}`: the number of ones in the
    /// ε-vector of the minimal double coset representative.
    pub fn relative_position(&self, w: &WeylElt) -> Result<usize> {
        self.check(w)?;
        let d = self.rs.double_coset_min(w, &self.j, &self.j);
        Ok(self.w_to_eps(&d)?.iter().filter(|&&e| e == 1).count())
    }

    /// All vectors of `{0,1}^g` in lexicographic order.
    pub fn all_eps(&self) -> Vec<EpsVector> {
        (0..1usize << self.g)
            .map(|m| (0..self.g).map(|i| ((m >> (self.g - 1 - i)) & 1) as u8).collect())
            .collect()
    }

    /// The table `ε, ℓ, a, φ_w, closure size` as CSV, one row per element of
    /// `ᴶW` in the poset's order.
    pub fn table_csv(&self, poset: &EOPoset) -> Result<String> {
        let mut out = String::from("eps,length,a,elementary_sequence,closure_size\n");
        for w in poset.elements() {
            let eps = self.w_to_eps(w)?;
            let phi = self.elem_seq(w)?;
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                eps.iter().map(|e| e.to_string()).collect::<String>(),
                self.rs.length(w),
                self.a_number(&eps)?,
                phi.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" "),
                poset.closure(w)?.len()
            ));
        }
        Ok(out)
    }
}
