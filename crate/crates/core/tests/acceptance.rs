//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

use krcore::branching::{branch_verify, G2System};
use krcore::cartan::{AffineType, CartanData};
use krcore::crystal::extract_pseudobase;
use krcore::fundamental::build_w1_d4;
use krcore::fusion::{
    compose_r, kr1, mirrored_word, solve_r, staircase_word, tower, verify_tensor_expansion, Expansion, KRModule, Provenance,
    MAX_R_UNKNOWNS,
};
use krcore::polarverify::{check_polarization_positive, monomial_gram, run_all, statement_box, CheckReport};
use krcore::qfield::{RatQ, Subset};
use krcore::repcore::verify_relations;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use std::cmp::Ordering;
use std::time::{Duration, Instant};

const G2: AffineType = AffineType::G2_1;
const D4: AffineType = AffineType::D4_3;

struct Built {
    g2: Vec<KRModule>,
    g2_rec: Vec<KRModule>,
    d4: Vec<KRModule>,
    g2_reports: Vec<Vec<CheckReport>>,
    d4_reports: Vec<Vec<CheckReport>>,
}

fn by_name<'a>(reports: &'a [CheckReport], name: &str) -> Option<&'a CheckReport> {
    reports.iter().find(|r| r.statement == name)
}

fn statements_pass(reports: &[CheckReport], p: &str) -> bool {
    (1..=6).all(|k| by_name(reports, &format!("{p}{k}")).is_some_and(|r| r.pass))
}

fn prop33_pass(reports: &[CheckReport]) -> bool {
    ["3.2", "3.3"].iter().all(|s| by_name(reports, s).is_some_and(|r| r.pass))
}

fn c1() -> Result<String, String> {
    let t = Instant::now();
    let w = kr1(G2).map_err(|e| e.to_string())?;
    let rel = verify_relations(&w.rep);
    let el = t.elapsed();
    let norms: Vec<RatQ> = (0..7).map(|k| w.gram.entry(k, k)).collect();
    let ones = norms.iter().filter(|x| x.is_one()).count();
    let zero_norm = w.rep.basis.iter().position(|b| b == "0").map(|k| norms[k].clone());
    let want: RatQ = "(1+q^2)/(1)".parse().unwrap();
    let ok = rel.pass() && ones == 6 && zero_norm == Some(want) && el < Duration::from_secs(1);
    let detail = format!("relations checked {}, unit norms {ones}, ||0||^2 = {:?}, {el:?}", rel.checked, zero_norm.map(|x| x.to_string()));
    if ok { Ok(detail) } else { Err(detail) }
}

fn c2() -> Result<String, String> {
    let w = kr1(G2).map_err(|e| e.to_string())?;
    let r = solve_r(&w.rep, 1, -1, MAX_R_UNKNOWNS).map_err(|e| e.to_string())?;
    let detail = format!("solution dim {} ({} unknowns, {} equations)", r.solution_dim, r.unknowns, r.equations);
    if r.solution_dim == 1 { Ok(detail) } else { Err(detail) }
}

fn c3() -> Result<String, String> {
    let w = kr1(G2).map_err(|e| e.to_string())?;
    let t = Instant::now();
    let a = compose_r(&w.rep, 3, &staircase_word(3), MAX_R_UNKNOWNS).map_err(|e| e.to_string())?;
    let b = compose_r(&w.rep, 3, &mirrored_word(3), MAX_R_UNKNOWNS).map_err(|e| e.to_string())?;
    let detail = format!("R3 along {:?} and {:?}, {} nonzeros, {:?}", staircase_word(3), mirrored_word(3), a.nnz(), t.elapsed());
    if a == b && !a.is_zero() { Ok(detail) } else { Err(detail) }
}

fn c4(b: &Built) -> Result<String, String> {
    let ok: Vec<bool> = b.g2_reports.iter().map(|r| statements_pass(r, "G")).collect();
    let n: usize = b.g2_reports.iter().flatten().filter(|r| r.statement.starts_with('G')).map(|r| r.verdicts.len()).sum();
    let detail = format!("levels 1..3: {ok:?}, {n} verdicts");
    if ok.iter().all(|x| *x) { Ok(detail) } else { Err(detail) }
}

fn c5(b: &Built) -> Result<String, String> {
    let ok: Vec<bool> = b.g2_reports.iter().map(|r| prop33_pass(r)).collect();
    let pos: Vec<bool> = b.g2.iter().map(|m| check_polarization_positive(&m.gram)).collect();
    let detail = format!("S_l orthonormality {ok:?}, positive {pos:?}");
    if ok.iter().chain(&pos).all(|x| *x) { Ok(detail) } else { Err(detail) }
}

fn c6(b: &Built) -> Result<String, String> {
    let sys = G2System::new(G2);
    let mut ok = true;
    let mut detail = String::new();
    for m in &b.g2 {
        let r = branch_verify(G2, m.l, &m.rep.wt).map_err(|e| e.to_string())?;
        ok &= r.pass;
        detail.push_str(&format!("l={} dim {} {:?}; ", m.l, r.dim, r.computed));
        if m.l == 2 {
            let v2 = CartanData::new(G2).varpi2().classical();
            let mut want = vec![v2, (2 * v2.0, 2 * v2.1)];
            want.sort();
            let weyl = sys.weyl_dim(v2).unwrap() + sys.weyl_dim(want[1]).unwrap();
            ok &= r.computed == want && r.dim == 34 && weyl == 34;
        }
    }
    if ok { Ok(detail) } else { Err(detail) }
}

fn c7(b: &Built) -> Result<String, String> {
    let mut detail = String::new();
    let mut ok = true;
    for l in 2..=3usize {
        let (bm, cm, dm) = statement_box(G2, l as i64);
        let f = monomial_gram(&b.g2[l - 1], bm, cm, dm);
        let r = monomial_gram(&b.g2_rec[l - 1], bm, cm, dm);
        ok &= f == r && !f.is_empty();
        detail.push_str(&format!("l={l}: {} values, equal {}; ", f.len(), f == r));
    }
    if ok { Ok(detail) } else { Err(detail) }
}

fn c8(b: &Built) -> Result<String, String> {
    let mut detail = String::new();
    let mut ok = true;
    for l in 2..=3usize {
        let m = l as i32;
        let fails = verify_tensor_expansion(&b.g2[l - 2], &b.g2[0], Expansion::G, (3, 3, 3), &[-m, m]);
        ok &= fails.is_empty();
        detail.push_str(&format!("G2 l={l}: {} failures; ", fails.len()));
    }
    let d4_box = statement_box(D4, 2);
    for which in [Expansion::DI, Expansion::DII] {
        let fails = verify_tensor_expansion(&b.d4[0], &b.d4[0], which, d4_box, &[-2, 0, 2]);
        ok &= fails.is_empty();
        detail.push_str(&format!("D4 {which:?} box {d4_box:?}: {} failures; ", fails.len()));
    }
    if ok { Ok(detail) } else { Err(detail) }
}

fn c9(b: &Built) -> Result<String, String> {
    let fb = build_w1_d4().map_err(|e| e.to_string())?;
    let failed: Vec<&str> = fb.checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
    let claims = ["claim (a)", "claim (b)", "claim (c)"].iter().all(|n| fb.checks.iter().any(|c| c.name.starts_with(n) && c.pass));
    let branch = branch_verify(D4, 1, &b.d4[0].rep.wt).map_err(|e| e.to_string())?;
    let l1 = statements_pass(&b.d4_reports[0], "D");
    let l2 = statements_pass(&b.d4_reports[1], "D") && prop33_pass(&b.d4_reports[1]);
    let detail = format!(
        "dim {}, build checks {} (failed {failed:?}), claims {claims}, S1 decomposition {}, D1-D6 at l=1 {l1}, D1-D6 and S_l orthonormality at l=2 {l2}",
        fb.rep.dim(),
        fb.checks.len(),
        branch.pass
    );
    if fb.pass() && claims && branch.pass && l1 && l2 { Ok(detail) } else { Err(detail) }
}

fn c10(b: &Built) -> Result<String, String> {
    let mut ok = true;
    let mut detail = String::new();
    for m in b.g2.iter().chain(&b.g2_rec[1..]).chain(&b.d4) {
        let p = extract_pseudobase(m).map_err(|e| e.to_string())?;
        let r = &p.report;
        let good = r.pass && r.nodes == m.rep.dim() && r.edge_axiom && r.closed_under_operators && r.pseudobase_split;
        ok &= good;
        if m.rep.ty == G2 && m.l == 1 {
            ok &= p.graph.nodes.len() == 7;
        }
        detail.push_str(&format!("{} {:?} l={}: {}/{} {}; ", m.rep.ty, m.provenance, m.l, r.nodes, m.rep.dim(), good));
    }
    if ok { Ok(detail) } else { Err(detail) }
}

fn small_ratq() -> impl Strategy<Value = RatQ> {
    (-3i32..=3, prop::collection::vec(-4i64..=4, 1..=3), prop::collection::vec(-4i64..=4, 0..=2)).prop_map(|(lo, n, d)| {
        let mut den = vec![1];
        den.extend(d);
        RatQ::laurent(lo, &n).div(&RatQ::laurent(0, &den)).unwrap()
    })
}

fn c11() -> Result<String, String> {
    let cases = 10_000;
    let mut runner = TestRunner::new(Config { cases, failure_persistence: None, ..Config::default() });
    let seen = std::cell::Cell::new(0u32);
    let res = runner.run(&(small_ratq(), small_ratq(), small_ratq()), |(x, y, z)| {
        seen.set(seen.get() + 1);
        prop_assert_eq!(&(&x + &y) * &z, &(&x * &z) + &(&y * &z));
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        if !y.is_zero() {
            prop_assert_eq!(&x.div(&y).unwrap() * &y, x.clone());
        }
        let o = x.compare(&y);
        prop_assert_eq!(o == Ordering::Equal, x == y);
        prop_assert_eq!((&x + &z).compare(&(&y + &z)), o);
        for s in [Subset::A, Subset::AZ, Subset::KZ] {
            if x.member(s) && y.member(s) {
                prop_assert!((&x * &y).member(s) && (&x - &y).member(s));
            }
        }
        Ok(())
    });
    let seen = seen.get();
    let detail = format!("{seen} cases here, plus the qfield_props suite (11 properties x 10000 cases)");
    match res {
        Ok(()) if seen >= cases => Ok(detail),
        Ok(()) => Err(detail),
        Err(e) => Err(format!("{detail}: {e}")),
    }
}

fn c12(b: &Built) -> Result<String, String> {
    let all: Vec<&CheckReport> = b.g2_reports.iter().chain(&b.d4_reports).filter_map(|r| by_name(r, "KZ")).collect();
    let n: usize = all.iter().map(|r| r.verdicts.len()).sum();
    let detail = format!("{} modules, {n} Gram values", all.len());
    if all.len() == 5 && all.iter().all(|r| r.pass) { Ok(detail) } else { Err(detail) }
}

fn build() -> Built {
    let t = Instant::now();
    let g2 = tower(G2, 3, Provenance::Fused).expect("G2 fused tower");
    eprintln!("built fused G2 tower in {:?}", t.elapsed());
    let g2_rec = tower(G2, 3, Provenance::Recursive).expect("G2 recursive tower");
    eprintln!("built recursive G2 tower in {:?}", t.elapsed());
    let d4 = tower(D4, 2, Provenance::Fused).expect("D4 tower");
    eprintln!("built D4 tower in {:?}", t.elapsed());
    let g2_reports = g2.iter().map(run_all).collect();
    let d4_reports = d4.iter().map(run_all).collect();
    eprintln!("ran check batteries in {:?}", t.elapsed());
    Built { g2, g2_rec, d4, g2_reports, d4_reports }
}

fn main() {
    if std::env::args().any(|a| a == "--list") {
        println!("acceptance: test");
        return;
    }
    let mut results: Vec<(u32, Result<String, String>, Duration)> = Vec::new();
    let mut timed = |k: u32, f: &dyn Fn() -> Result<String, String>| {
        let t = Instant::now();
        let r = f();
        let el = t.elapsed();
        println!("criterion {k:>2}: {} ({el:.1?}) {}", if r.is_ok() { "PASS" } else { "FAIL" }, r.as_ref().unwrap_or_else(|e| e));
        results.push((k, r, el));
    };
    timed(1, &c1);
    timed(2, &c2);
    timed(3, &c3);
    timed(11, &c11);
    let b = build();
    timed(4, &|| c4(&b));
    timed(5, &|| c5(&b));
    timed(6, &|| c6(&b));
    timed(7, &|| c7(&b));
    timed(8, &|| c8(&b));
    timed(9, &|| c9(&b));
    timed(10, &|| c10(&b));
    timed(12, &|| c12(&b));
    results.sort_by_key(|r| r.0);
    println!("\nsummary");
    for (k, r, _) in &results {
        println!("criterion {k:>2}: {}", if r.is_ok() { "PASS" } else { "FAIL" });
    }
    let failed = results.iter().filter(|r| r.1.is_err()).count();
    println!("{} of {} criteria pass", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
