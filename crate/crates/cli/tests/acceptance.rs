//! Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
//! criterion fails. Reference values come from the brute-force oracles shared
//! with the core test suite.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use common::{brute_polygons, partial_sums_leq, CayleyOracle};
use eostrata::affine::{
    check_superbasic_properties, iwahori_level, oort_fundamental_rep, oort_minimal_rep, oort_root_system,
    superbasic_embedding, FundamentalTester, Slope, SlopeData,
};
use eostrata::eo_order::{build_eo_poset, eo_type, JConvention};
use eostrata::rootdata::{build_root_system, FactorSpec, GroupSpec, RootSystem};
use eostrata::siegel::Siegel;
use eostrata::strata::{build_atlas, enumerate_bgmu, hb_fixture, newton_leq, StrataAtlas};
use num_rational::Rational64;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn gl(n: usize, k: usize) -> GroupSpec {
    let mut mu = vec![1i64; k];
    mu.extend(vec![0; n - k]);
    GroupSpec::gl(n, mu)
}

/// GL(n ≤ 4) with every non-central minuscule μ, and GSp(g ≤ 3).
fn split_configs() -> Vec<GroupSpec> {
    let mut out = Vec::new();
    for n in 2..=4 {
        for k in 1..n {
            out.push(gl(n, k));
        }
    }
    for g in 1..=3 {
        out.push(GroupSpec::siegel(g));
    }
    out
}

fn atlases() -> Result<Vec<StrataAtlas>, String> {
    split_configs()
        .iter()
        .map(|s| build_atlas(s, JConvention::FromMu).map_err(|e| format!("{}: {e}", s.canonical_json())))
        .collect()
}

fn label(spec: &GroupSpec) -> String {
    spec.canonical_json()
}

fn siegel_tables() -> Outcome {
    for g in 1..=4 {
        let s = Siegel::new(g).map_err(|e| e.to_string())?;
        let rs = s.root_system();
        let poset = build_eo_poset(rs, s.j()).map_err(|e| e.to_string())?;
        ensure(poset.len() == 1 << g, || format!("g={g}: |JW| = {}", poset.len()))?;
        let oracle = CayleyOracle::new(rs);
        for eps in s.all_eps() {
            let w = s.eps_to_w(&eps).map_err(|e| e.to_string())?;
            let l = s.length_eps(&eps).map_err(|e| e.to_string())?;
            ensure(l == oracle.length(&w), || format!("g={g} eps={eps:?}: {l} vs {}", oracle.length(&w)))?;
        }
        let top = rs.length(&poset.top());
        ensure(top == g * (g + 1) / 2 && top == poset.dim_par_j(), || format!("g={g}: top length {top}"))?;
    }
    Ok("g = 1..4".into())
}

fn bruhat_oracle() -> Outcome {
    let mut pairs = 0usize;
    let systems: Vec<RootSystem> = (1..=4)
        .map(|n| RootSystem::new(&[FactorSpec::gl(n, 1)], 1))
        .chain((1..=3).map(|g| RootSystem::new(&[FactorSpec::gsp(g, 1)], 1)))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    for rs in &systems {
        let oracle = CayleyOracle::new(rs);
        let ws = rs.elements();
        for w in &ws {
            let below = oracle.subword_set(w);
            for u in &ws {
                pairs += 1;
                ensure(rs.bruhat_leq(u, w) == below.contains(&u.0), || {
                    format!("{:?}: {} vs {}", rs.factors(), rs.fmt_weyl(u), rs.fmt_weyl(w))
                })?;
            }
        }
    }
    Ok(format!("{pairs} pairs"))
}

fn order_soundness() -> Outcome {
    let mut cases: Vec<(RootSystem, BTreeSet<usize>)> = Vec::new();
    for g in 1..=4 {
        let s = Siegel::new(g).map_err(|e| e.to_string())?;
        cases.push((s.root_system().clone(), s.j().clone()));
    }
    for n in 1..=4 {
        let rs = RootSystem::new(&[FactorSpec::gl(n, 1)], 1).map_err(|e| e.to_string())?;
        let all: Vec<usize> = rs.all_simple().into_iter().collect();
        for m in 0u32..(1 << all.len()) {
            let j = all.iter().enumerate().filter(|(i, _)| m >> i & 1 == 1).map(|(_, &s)| s).collect();
            cases.push((rs.clone(), j));
        }
    }
    for d in 1..=6 {
        let spec = GroupSpec::hilbert_blumenthal(d);
        let rs = build_root_system(&spec).map_err(|e| e.to_string())?;
        let mu = rs.flatten(&spec.mu).map_err(|e| e.to_string())?;
        let j = eo_type(&rs, &mu, JConvention::FromMu);
        cases.push((rs, j));
    }
    let count = cases.len();
    for (rs, j) in cases {
        let p = build_eo_poset(&rs, &j).map_err(|e| e.to_string())?;
        let ctx = || format!("{:?} J={}", rs.factors(), rs.fmt_simple_set(&j));
        let n = p.len();
        let els = p.elements();
        let galois = |w: &eostrata::weyl::WeylElt| {
            let mut v = w.clone();
            for _ in 0..rs.kappa_degree() {
                v = rs.phi_apply(&v);
            }
            p.index_of(&v).ok()
        };
        for a in 0..n {
            for b in 0..n {
                let ab = p.leq_idx(a, b);
                ensure(!(ab && p.leq_idx(b, a)) || a == b, || format!("{}: antisymmetry", ctx()))?;
                if rs.bruhat_leq(&els[a], &els[b]) {
                    ensure(ab, || format!("{}: Bruhat does not imply ⪯", ctx()))?;
                }
                let (ga, gb) = (galois(&els[a]), galois(&els[b]));
                ensure(ga.zip(gb).is_some_and(|(x, y)| p.leq_idx(x, y) == ab), || format!("{}: Galois", ctx()))?;
                if ab {
                    for c in 0..n {
                        ensure(!p.leq_idx(b, c) || p.leq_idx(a, c), || format!("{}: transitivity", ctx()))?;
                    }
                }
            }
        }
    }
    Ok(format!("{count} (group, J) cases"))
}

fn bgmu_counts() -> Outcome {
    let q = |a: i64| Rational64::from(a);
    let cases = [
        (gl(2, 1), brute_polygons(2, 1, 1, 1, None), 2),
        (gl(4, 2), brute_polygons(4, 2, 1, 1, None), 5),
        (GroupSpec::siegel(2), brute_polygons(4, 2, 1, 1, Some(q(1))), 3),
    ];
    let mut counts = Vec::new();
    for (spec, brute, expected) in cases {
        let rs = build_root_system(&spec).map_err(|e| e.to_string())?;
        let mu = rs.flatten(&spec.mu).map_err(|e| e.to_string())?;
        let bg = enumerate_bgmu(&rs, &mu).map_err(|e| e.to_string())?;
        let ours: BTreeSet<Vec<Rational64>> = bg.elements.iter().map(|b| b.nu.clone()).collect();
        ensure(ours == brute && bg.len() == expected, || {
            format!("{}: {} elements, brute force {}", label(&spec), bg.len(), brute.len())
        })?;
        counts.push(bg.len().to_string());
    }
    Ok(format!("counts {}", counts.join("/")))
}

fn master_check() -> Outcome {
    for atlas in atlases()? {
        let fund = atlas.fundamental_strata();
        let found: BTreeSet<_> = fund.iter().map(|&i| atlas.b_w(i).clone()).collect();
        let all: BTreeSet<_> = atlas.bg().elements.iter().cloned().collect();
        ensure(found == all && fund.len() == all.len(), || {
            format!("{:?}: {} fundamental strata, |B| = {}", atlas.root_system().factors(), fund.len(), all.len())
        })?;
        for &i in &fund {
            let (c, p) = atlas.witness(i).ok_or("missing witness")?;
            let rs = atlas.root_system();
            ensure(rs.is_p_fundamental(c, p) && rs.newton_class(c).ok().as_ref() == Some(atlas.b_w(i)), || {
                format!("witness for {}", rs.fmt_weyl(&atlas.eo().elements()[i]))
            })?;
        }
    }
    Ok(format!("{} split configurations", split_configs().len()))
}

fn endpoints() -> Outcome {
    for atlas in atlases()? {
        let rs = atlas.root_system();
        let eo = atlas.eo();
        let bg = atlas.bg();
        let top = rs.longest_element(eo.j()).mul(&rs.w0());
        let w_basic = atlas.w_of_b(&bg.elements[bg.basic]).map_err(|e| e.to_string())?;
        let w_ord = atlas.w_of_b(&bg.elements[bg.mu_ordinary]).map_err(|e| e.to_string())?;
        ensure(eo.elements()[w_basic].is_identity(), || format!("{:?}: w(basic)", rs.factors()))?;
        ensure(eo.elements()[w_ord] == top, || format!("{:?}: w(mu-ordinary)", rs.factors()))?;
    }
    Ok("w(basic) = 1, w(mu-ordinary) = w_{0,J} w_0".into())
}

fn shipped_specs() -> Result<Vec<(String, GroupSpec)>, String> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../specs");
    let mut files: Vec<PathBuf> = std::fs::read_dir(&dir)
        .map_err(|e| e.to_string())?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    files
        .into_iter()
        .map(|p| {
            let text = std::fs::read_to_string(&p).map_err(|e| e.to_string())?;
            let name = p.file_name().unwrap().to_string_lossy().into_owned();
            GroupSpec::from_json(&text).map(|s| (name.clone(), s)).map_err(|e| format!("{name}: {e}"))
        })
        .collect()
}

fn minimal_basic_root() -> Outcome {
    let specs = shipped_specs()?;
    for (name, spec) in &specs {
        let rs = build_root_system(spec).map_err(|e| e.to_string())?;
        let mu = rs.flatten(&spec.mu).map_err(|e| e.to_string())?;
        let j = eo_type(&rs, &mu, JConvention::FrobeniusTwisted);
        let x = rs.w0().mul(&rs.longest_element(&rs.phi_simple_set(&j)));
        for &a in rs.roots() {
            let img = rs.act_root(&x.0, a);
            ensure(iwahori_level(a) + a.pair(&mu) == iwahori_level(img), || {
                format!("{name}: root e{}-e{}", a.a + 1, a.b + 1)
            })?;
        }
    }
    Ok(format!("{} shipped specs", specs.len()))
}

fn shadow() -> Outcome {
    let mut n = 0;
    for atlas in atlases()? {
        for i in 0..atlas.eo().len() {
            n += 1;
            let k = atlas.w_of_b(atlas.b_w(i)).map_err(|e| e.to_string())?;
            ensure(atlas.eo().leq_idx(k, i), || {
                format!("{:?}: w = {}", atlas.root_system().factors(), atlas.root_system().fmt_weyl(&atlas.eo().elements()[i]))
            })?;
        }
    }
    Ok(format!("{n} strata"))
}

fn order_correspondence() -> Outcome {
    let mut n = 0;
    for atlas in atlases()? {
        let rs = atlas.root_system();
        let bg = atlas.bg();
        for b1 in &bg.elements {
            for b2 in &bg.elements {
                n += 1;
                let oracle = partial_sums_leq(&b1.nu, &b2.nu) && b1.kappa == b2.kappa;
                let ours = newton_leq(rs, b1, b2).map_err(|e| e.to_string())?;
                let (w1, w2) = (atlas.w_of_b(b1).map_err(|e| e.to_string())?, atlas.w_of_b(b2).map_err(|e| e.to_string())?);
                ensure(oracle == ours && ours == atlas.eo().leq_idx(w1, w2), || {
                    format!("{:?}: {} vs {}", rs.factors(), b1.describe(rs), b2.describe(rs))
                })?;
            }
        }
    }
    Ok(format!("{n} pairs"))
}

fn hilbert_blumenthal() -> Outcome {
    let hb = hb_fixture(6).map_err(|e| e.to_string())?;
    let failed: Vec<String> = hb.checks.iter().filter(|c| !c.passed).map(|c| c.name.clone()).collect();
    ensure(failed.is_empty() && hb.checks.len() == 5, || failed.join("; "))?;
    Ok("5/5 checks".into())
}

fn slope_data(max_height: usize) -> Vec<SlopeData> {
    let simple: Vec<(usize, usize)> =
        (1..=max_height).flat_map(|h| (0..=h).map(move |n| (n, h))).filter(|&(n, h)| num_integer::gcd(n, h) == 1).collect();
    fn rec(c: &[(usize, usize)], i: usize, left: usize, cur: &mut Vec<Slope>, out: &mut Vec<SlopeData>) {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        for k in i..c.len() {
            let (n, h) = c[k];
            for mult in 1..=left / h {
                cur.push(Slope { n, h, mult });
                rec(c, k + 1, left - mult * h, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(&simple, 0, max_height, &mut Vec::new(), &mut out);
    out
}

fn construction_suites() -> Outcome {
    let mut superbasic = 0;
    for n in 1..=6usize {
        for d in 1..=6 / n {
            for q in 0..=(n * d) as i64 {
                if num_integer::gcd(q, n as i64) != 1 {
                    continue;
                }
                let rs = RootSystem::new(&[FactorSpec::gl(n, d)], 1).map_err(|e| e.to_string())?;
                let (x, levi) = superbasic_embedding(&rs, &[(q, n)]).map_err(|e| e.to_string())?;
                let report = check_superbasic_properties(&rs, &x, &levi, 2 * n * d).map_err(|e| e.to_string())?;
                ensure(report.passed(), || format!("(q,n,d) = ({q},{n},{d}): {:?}", report.violations))?;
                superbasic += 1;
            }
        }
    }

    let (mut oort, mut literal) = (0, 0);
    let mut testers: Vec<Option<FundamentalTester>> = vec![None; 14];
    for slopes in slope_data(6) {
        for symplectic in [false, true] {
            if eostrata::affine::validate_slopes(&slopes, symplectic).is_err() {
                continue;
            }
            let rs = oort_root_system(&slopes, symplectic).map_err(|e| e.to_string())?;
            let key = rs.dim() + if symplectic { 7 } else { 0 };
            let tester = testers[key].get_or_insert_with(|| FundamentalTester::new(&rs));
            let ctx = || format!("{slopes:?} symplectic={symplectic}");
            let (b, levi) = oort_minimal_rep(&slopes, symplectic).map_err(|e| e.to_string())?;
            ensure(rs.stabilizes_levi_iwahori(&b, &levi), || format!("{}: b I_M b⁻¹ ≠ I_M", ctx()))?;
            let mut expected: Vec<Rational64> = slopes
                .iter()
                .flat_map(|s| std::iter::repeat_n(Rational64::new(s.n as i64, s.h as i64), s.h * s.mult))
                .collect();
            expected.sort_by(|a, b| b.cmp(a));
            ensure(rs.newton_point(&b).ok() == Some(expected), || format!("{}: Newton point", ctx()))?;
            literal += usize::from(tester.is_fundamental(&b).is_some());
            let (b2, p) = oort_fundamental_rep(tester, &slopes, symplectic).map_err(|e| format!("{}: {e}", ctx()))?;
            ensure(
                rs.is_p_fundamental(&b2, &p)
                    && rs.stabilizes_levi_iwahori(&b2, &p.levi_labels(&rs))
                    && rs.newton_class(&b2).ok() == rs.newton_class(&b).ok(),
                || format!("{}: fundamental trivialization", ctx()),
            )?;
            oort += 1;
        }
    }
    Ok(format!(
        "{superbasic} superbasic cases; {oort} slope data, block-diagonal b literally fundamental in {literal}, \
         fundamental trivialization found in all"
    ))
}

fn cli_determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let specs = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../specs");
    let run = |args: &[&str], cache: bool| -> Result<Vec<u8>, String> {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_eostrata"));
        cmd.args(args);
        if cache {
            cmd.env("EOSTRATA_CACHE_DIR", dir.path());
        } else {
            cmd.arg("--no-cache");
        }
        let out = cmd.output().map_err(|e| e.to_string())?;
        ensure(out.status.success(), || format!("{args:?} exited with {:?}", out.status.code()))?;
        Ok(out.stdout)
    };
    let mut runs = 0;
    for spec in ["siegel2.json", "gl4_2.json", "hilbert_blumenthal6.json"] {
        let path = specs.join(spec);
        let p = path.to_str().unwrap();
        let mut commands: Vec<Vec<&str>> = vec![
            vec!["eo", "--hasse", p],
            vec!["eo", "--format", "json", "--hasse", p],
            vec!["eo", "--format", "dot", p],
            vec!["newton", p],
            vec!["newton", "--format", "json", p],
            vec!["verify", p],
        ];
        if spec != "hilbert_blumenthal6.json" {
            commands.push(vec!["map", p]);
            commands.push(vec!["map", "--format", "json", p]);
        }
        for args in commands {
            let a = run(&args, false)?;
            let b = run(&args, false)?;
            let miss = run(&args, true)?;
            let hit = run(&args, true)?;
            ensure(a == b, || format!("{args:?}: two fresh runs differ"))?;
            ensure(a == miss && a == hit, || format!("{args:?}: cached output differs"))?;
            runs += 4;
        }
    }
    Ok(format!("{runs} runs byte-identical"))
}

fn main() {
    let criteria: Vec<(&str, Option<Duration>, fn() -> Outcome)> = vec![
        ("Siegel tables", Some(Duration::from_secs(10)), siegel_tables),
        ("Bruhat order agrees with the subword oracle", Some(Duration::from_secs(60)), bruhat_oracle),
        ("specialization order is a Galois-equivariant order refining Bruhat", Some(Duration::from_secs(120)), order_soundness),
        ("B(G,mu) counts against brute-force polygons", Some(Duration::from_secs(10)), bgmu_counts),
        ("fundamental Newton points equal B(G,mu), one w per b", Some(Duration::from_secs(300)), master_check),
        ("endpoint identities", None, endpoints),
        ("minimal-basic root identity", None, minimal_basic_root),
        ("w(b_w) ⪯ w", None, shadow),
        ("b' ≤ b iff w(b') ⪯ w(b)", None, order_correspondence),
        ("Hilbert-Blumenthal fixture, g = 6", Some(Duration::from_secs(5)), hilbert_blumenthal),
        ("superbasic and Oort-minimal constructions", Some(Duration::from_secs(120)), construction_suites),
        ("CLI determinism and cache transparency", None, cli_determinism),
    ];
    let mut failures = 0;
    for (i, (title, limit, f)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let elapsed = start.elapsed();
        let over = limit.is_some_and(|l| elapsed > l);
        match (&outcome, over) {
            (Ok(detail), false) => println!("criterion {}: PASS {title} ({detail}; {elapsed:.2?})", i + 1),
            (Ok(detail), true) => {
                failures += 1;
                println!("criterion {}: FAIL {title} ({detail}; {elapsed:.2?} exceeds {:?})", i + 1, limit.unwrap());
            }
            (Err(e), _) => {
                failures += 1;
                println!("criterion {}: FAIL {title}: {e} ({elapsed:.2?})", i + 1);
            }
        }
    }
    if failures > 0 {
        println!("{failures} criteria failed");
        std::process::exit(1);
    }
}
