//! Report builders behind the `eostrata` binary. Every command turns a
//! validated group spec into a deterministic text report.

pub mod cache;

use std::collections::BTreeSet;

use eostrata::affine::{ExtAffineElt, FundamentalTester};
use eostrata::eo_order::{build_eo_poset, eo_type, EOPoset, JConvention};
use eostrata::rootdata::{build_root_system, FactorKind, GroupSpec, RootSystem};
use eostrata::siegel::Siegel;
use eostrata::strata::{build_atlas, enumerate_bgmu, CheckResult, StrataAtlas};
use eostrata::{Error, Result};
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Dot,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Convention {
    /// J = {s : <α_s, μ> = 0}
    Mu,
    /// J = {s : <α_s, -w₀μ> = 0}
    MuInverse,
    /// J = φ⁻¹{s : <α_s, μ> = 0}; equals `mu` when Frobenius fixes that set
    Twisted,
}

impl From<Convention> for JConvention {
    fn from(c: Convention) -> Self {
        match c {
            Convention::Mu => JConvention::FromMu,
            Convention::MuInverse => JConvention::FromMuInverse,
            Convention::Twisted => JConvention::FrobeniusTwisted,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Options {
    pub format: Format,
    pub hasse: bool,
    pub convention: Convention,
}

impl Options {
    /// Stable description of the flags, part of the cache key.
    pub fn fingerprint(&self) -> String {
        format!("format={:?};hasse={};j={:?}", self.format, self.hasse, self.convention)
    }
}

/// A finished report and the process exit status it implies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub output: String,
    pub code: u8,
}

impl Outcome {
    fn ok(output: String) -> Self {
        Outcome { output, code: 0 }
    }
}

pub const EXIT_VERIFY_FAILED: u8 = 1;
pub const EXIT_PARSE: u8 = 2;
pub const EXIT_UNSUPPORTED: u8 = 3;

pub fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Parse { .. }
        | Error::InvalidFactor { .. }
        | Error::InvalidSpec(_)
        | Error::Shape(_)
        | Error::NotDominant(_)
        | Error::NotInJW(_) => EXIT_PARSE,
        Error::Unsupported(_) | Error::NotGaloisStable(_) => EXIT_UNSUPPORTED,
        Error::BoundExceeded(_) | Error::Integrity(_) => EXIT_VERIFY_FAILED,
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}

fn group_value(spec: &GroupSpec) -> Value {
    serde_json::from_str(&spec.canonical_json()).expect("canonical spec is JSON")
}

fn poset_for(spec: &GroupSpec, conv: Convention) -> Result<(RootSystem, EOPoset)> {
    let rs = build_root_system(spec)?;
    let mu = rs.flatten(&spec.mu)?;
    let poset = build_eo_poset(&rs, &eo_type(&rs, &mu, conv.into()))?;
    Ok((rs, poset))
}

fn siegel_of(rs: &RootSystem, poset: &EOPoset) -> Option<Siegel> {
    let f = rs.factors();
    if f.len() != 1 || f[0].kind != FactorKind::GSp || f[0].copies != 1 {
        return None;
    }
    Siegel::new(f[0].rank()).ok().filter(|s| s.j() == poset.j())
}

/// `ᴶW` with lengths, Galois orbits and (Siegel case) ε-vectors.
pub fn cmd_eo(spec: &GroupSpec, opts: &Options) -> Result<Outcome> {
    let (rs, poset) = poset_for(spec, opts.convention)?;
    let siegel = siegel_of(&rs, &poset);
    if opts.format == Format::Dot {
        return Ok(Outcome::ok(poset.to_dot()));
    }
    let mut rows = Vec::new();
    for (i, w) in poset.elements().iter().enumerate() {
        let mut row = json!({
            "w": rs.fmt_weyl(w),
            "length": rs.length(w),
            "codimension": poset.codimension(w)?,
            "orbit": poset.orbit_id(i),
        });
        if let Some(s) = &siegel {
            let eps = s.w_to_eps(w)?;
            row["eps"] = json!(eps.iter().map(|e| e.to_string()).collect::<String>());
            // φ(1), ..., φ(g); the leading φ(0) = 0 is implicit
            row["elementary_sequence"] = json!(s.elem_seq(w)?[1..]);
            row["a_number"] = json!(s.a_number(&eps)?);
        }
        rows.push(row);
    }
    if opts.format == Format::Json {
        let mut v = json!({ "group": group_value(spec), "J": rs.fmt_simple_set(poset.j()), "strata": rows });
        if opts.hasse {
            v["hasse"] = poset.to_json();
        }
        return Ok(Outcome::ok(pretty(&v)));
    }
    let mut out = String::from(if siegel.is_some() {
        "w,length,codimension,orbit,eps,elementary_sequence,a_number\n"
    } else {
        "w,length,codimension,orbit\n"
    });
    for r in &rows {
        out.push_str(&format!("\"{}\",{},{},{}", r["w"].as_str().unwrap_or(""), r["length"], r["codimension"], r["orbit"]));
        if siegel.is_some() {
            let seq: Vec<String> = r["elementary_sequence"]
                .as_array()
                .map(|a| a.iter().map(|v| v.to_string()).collect())
                .unwrap_or_default();
            out.push_str(&format!(",{},{},{}", r["eps"].as_str().unwrap_or(""), seq.join(" "), r["a_number"]));
        }
        out.push('\n');
    }
    if opts.hasse {
        out.push_str("\nlower,upper\n");
        for (a, b) in poset.hasse_diagram() {
            out.push_str(&format!(
                "\"{}\",\"{}\"\n",
                rs.fmt_weyl(&poset.elements()[a]),
                rs.fmt_weyl(&poset.elements()[b])
            ));
        }
    }
    Ok(Outcome::ok(out))
}

/// `B(G,μ)` with its order.
pub fn cmd_newton(spec: &GroupSpec, opts: &Options) -> Result<Outcome> {
    let rs = build_root_system(spec)?;
    let mu = rs.flatten(&spec.mu)?;
    let bg = enumerate_bgmu(&rs, &mu)?;
    let hasse = bg.hasse();
    let output = match opts.format {
        Format::Dot => {
            let mut out = String::from("digraph newton {\n  rankdir=BT;\n  node [shape=box];\n");
            for (i, b) in bg.elements.iter().enumerate() {
                out.push_str(&format!("  b{} [label=\"{}\"];\n", i, b.describe(&rs)));
            }
            for (a, b) in &hasse {
                out.push_str(&format!("  b{a} -> b{b};\n"));
            }
            out.push_str("}\n");
            out
        }
        Format::Json => {
            let rows: Vec<Value> = bg
                .elements
                .iter()
                .enumerate()
                .map(|(i, b)| {
                    let mut v = b.to_json(&rs);
                    v["id"] = json!(i);
                    v["basic"] = json!(i == bg.basic);
                    v["mu_ordinary"] = json!(i == bg.mu_ordinary);
                    v
                })
                .collect();
            pretty(&json!({ "group": group_value(spec), "newton": rows, "covers": hasse }))
        }
        Format::Csv => {
            let mut out = String::from("id,nu,kappa,basic,mu_ordinary\n");
            for (i, b) in bg.elements.iter().enumerate() {
                let label = b.describe(&rs);
                let nu = label.split(" κ=").next().unwrap_or("");
                out.push_str(&format!(
                    "{},\"{}\",\"{}\",{},{}\n",
                    i,
                    nu,
                    b.kappa,
                    i == bg.basic,
                    i == bg.mu_ordinary
                ));
            }
            out.push_str("\nlower,upper\n");
            for (a, b) in &hasse {
                out.push_str(&format!("{a},{b}\n"));
            }
            out
        }
    };
    Ok(Outcome::ok(output))
}

fn newton_cell(atlas: &StrataAtlas, i: usize) -> String {
    atlas.b_w(i).describe(atlas.root_system())
}

/// The map `b ↦ w(b)` with `Min(w)` and generic Newton points; split only.
pub fn cmd_map(spec: &GroupSpec, opts: &Options) -> Result<Outcome> {
    if !spec.is_split() {
        return Err(Error::Unsupported("the map b -> w(b) is split-only".into()));
    }
    let atlas = build_atlas(spec, opts.convention.into())?;
    let rs = atlas.root_system();
    let els = atlas.eo().elements();
    if opts.format == Format::Json {
        return Ok(Outcome::ok(pretty(&atlas.report_json()?)));
    }
    if opts.format == Format::Dot {
        return Err(Error::Unsupported("the map report has no DOT form; use csv or json".into()));
    }
    let mut out = String::from("b,w_b,length\n");
    for b in &atlas.bg().elements {
        let i = atlas.w_of_b(b)?;
        out.push_str(&format!("\"{}\",\"{}\",{}\n", b.describe(rs), rs.fmt_weyl(&els[i]), rs.length(&els[i])));
    }
    out.push_str("\nw,length,fundamental,b_w,min_set,generic_newton\n");
    for (i, w) in els.iter().enumerate() {
        let min: Vec<String> = atlas.min_set(i)?.iter().map(|&k| rs.fmt_weyl(&els[k])).collect();
        let generic: Vec<String> = atlas.generic_newton(i)?.iter().map(|b| b.describe(rs)).collect();
        out.push_str(&format!(
            "\"{}\",{},{},\"{}\",\"{}\",\"{}\"\n",
            rs.fmt_weyl(w),
            rs.length(w),
            atlas.is_fundamental_idx(i),
            newton_cell(&atlas, i),
            min.join(" "),
            generic.join(" ; ")
        ));
    }
    Ok(Outcome::ok(out))
}

fn check(name: &str, passed: bool, detail: impl Into<String>) -> CheckResult {
    CheckResult { name: name.into(), passed, detail: detail.into() }
}

/// Invariants of the affine Weyl group on the candidates `w·t^{μ'}`.
fn affine_checks(rs: &RootSystem, mu: &[i64]) -> Result<Vec<CheckResult>> {
    let tester = FundamentalTester::new(rs);
    let gens: Vec<ExtAffineElt> = (0..rs.simple_reflections().len()).map(|s| rs.finite(rs.simple_elt(s))).collect();
    let (mut omega_ok, mut conj_ok, mut omega_fund) = (true, true, true);
    let mut first_bad = String::new();
    for m in rs.minuscule_orbit(mu) {
        for w in rs.elements() {
            let x = ExtAffineElt::new(w, m.clone());
            let in_omega = rs.is_in_omega(&x);
            if (rs.affine_length(&x) == 0) != in_omega {
                omega_ok = false;
                first_bad = rs.fmt_affine(&x);
            }
            if in_omega && !tester.is_fundamental(&x).is_some_and(|p| p.is_whole_group()) {
                omega_fund = false;
            }
            let b = rs.newton_class(&x)?;
            for y in &gens {
                if rs.newton_class(&rs.sigma_conjugate(y, &x))? != b {
                    conj_ok = false;
                    first_bad = rs.fmt_affine(&x);
                }
            }
        }
    }
    Ok(vec![
        check("length zero iff Omega", omega_ok, first_bad.clone()),
        check("Newton point invariant under W-σ-conjugation", conj_ok, first_bad),
        check("Omega elements are fundamental for G", omega_fund, ""),
    ])
}

/// Signature `(1, n-1)` unitary data: one flipped GL factor with a single 1.
fn unitary_rank(spec: &GroupSpec) -> Option<usize> {
    match (spec.factors.as_slice(), spec.mu.as_slice()) {
        ([f], [mu]) if f.kind == FactorKind::GL && f.flip && f.copies == 1 && mu.iter().sum::<i64>() == 1 => {
            Some(f.rank())
        }
        _ => None,
    }
}

/// Runs the invariant suite; exit status 1 when anything fails.
pub fn cmd_verify(spec: &GroupSpec, opts: &Options) -> Result<Outcome> {
    let atlas = build_atlas(spec, opts.convention.into())?;
    let rs = atlas.root_system();
    let poset = atlas.eo();
    let mut checks = vec![
        check("EO order axioms", poset.check_order_axioms().is_ok(), ""),
        check("EO order is Galois compatible", poset.galois_compatible(), ""),
        check(
            "1 is the minimum and the top element the maximum",
            poset.closure(&poset.top())?.len() == poset.len() && poset.closure(&poset.bottom())?.len() == 1,
            "",
        ),
    ];
    checks.extend(affine_checks(rs, atlas.mu())?);
    checks.extend(atlas.verify()?);
    let mut notes = Vec::new();
    if !atlas.is_split() {
        notes.push("split-only checks skipped (group is not split)".to_string());
        let fund: BTreeSet<_> = atlas.fundamental_strata().into_iter().map(|i| atlas.b_w(i).clone()).collect();
        notes.push(format!(
            "{} fundamental strata over {} of {} Newton points (reported, not asserted)",
            atlas.fundamental_strata().len(),
            fund.len(),
            atlas.bg().len()
        ));
    }
    if let Some(n) = unitary_rank(spec) {
        notes.push(format!(
            "distinguished elements with basic Newton point: {} (expected basic EO count [(n-1)/2] = {}, not asserted)",
            atlas.basic_distinguished_count(),
            (n - 1) / 2
        ));
    }
    let failed = checks.iter().any(|c| !c.passed);
    let output = if opts.format == Format::Json {
        let list: Vec<Value> =
            checks.iter().map(|c| json!({ "name": c.name, "passed": c.passed, "detail": c.detail })).collect();
        pretty(&json!({ "group": group_value(spec), "checks": list, "notes": notes }))
    } else {
        let mut out = String::new();
        for c in &checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            if c.detail.is_empty() || c.passed {
                out.push_str(&format!("{tag} {}\n", c.name));
            } else {
                out.push_str(&format!("{tag} {}: {}\n", c.name, c.detail));
            }
        }
        for n in &notes {
            out.push_str(&format!("note {n}\n"));
        }
        let passed = checks.iter().filter(|c| c.passed).count();
        out.push_str(&format!("{passed}/{} checks passed\n", checks.len()));
        out
    };
    Ok(Outcome { output, code: if failed { EXIT_VERIFY_FAILED } else { 0 } })
}
