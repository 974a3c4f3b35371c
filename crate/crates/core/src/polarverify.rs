//! Machine checks of the vanishing and norm statements on monomial vectors
//! e^{(a,b,c,d)} v_ℓ, of the almost-orthonormality estimates, and of
//! positivity of a Gram matrix.

use crate::branching::{enumerate_s, Tuple};
use crate::cartan::AffineType;
use crate::fusion::KRModule;
use crate::linalg::{leading_pivots, SVec};
use crate::qfield::{RatQ, Subset};
use crate::repcore::{Gen, Gram};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct Verdict {
    pub tuple: Vec<i64>,
    pub value: RatQ,
    /// e.g. "q^-2 A", "1+qA", "= 0", "!= 0"
    pub class: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagnosis: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CheckReport {
    pub statement: String,
    #[serde(rename = "type")]
    pub ty: AffineType,
    pub level: i64,
    /// inclusive ranges for each tuple coordinate
    #[serde(rename = "box")]
    pub bounds: Vec<(i64, i64)>,
    pub verdicts: Vec<Verdict>,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl CheckReport {
    fn new(statement: &str, m: &KRModule, bounds: Vec<(i64, i64)>, verdicts: Vec<Verdict>) -> CheckReport {
        let pass = verdicts.iter().all(|v| v.pass);
        CheckReport { statement: statement.into(), ty: m.rep.ty, level: m.l, bounds, verdicts, pass, notes: vec![] }
    }

    pub fn failures(&self) -> impl Iterator<Item = &Verdict> {
        self.verdicts.iter().filter(|v| !v.pass)
    }
}

pub const BOUNDED_HEADER: &str =
    "note: these are finite checks at the stated level and box only; they do not establish the statements for all levels";

pub fn reports_to_text(reports: &[CheckReport]) -> String {
    let mut s = format!("{BOUNDED_HEADER}\n");
    for r in reports {
        let nfail = r.failures().count();
        s.push_str(&format!(
            "{:<6} {} l={} box={:?} tuples={} failures={} {}\n",
            r.statement,
            r.ty,
            r.level,
            r.bounds,
            r.verdicts.len(),
            nfail,
            if r.pass { "PASS" } else { "FAIL" }
        ));
        for v in r.failures().take(20) {
            s.push_str(&format!(
                "    {:?}: value {} expected {} {}\n",
                v.tuple,
                v.value,
                v.class,
                v.diagnosis.as_deref().unwrap_or("")
            ));
        }
        for n in &r.notes {
            s.push_str(&format!("    {n}\n"));
        }
    }
    s
}

fn diagnose(x: &RatQ) -> String {
    match x.val() {
        None => "value is 0".into(),
        Some(v) => {
            let (n, d) = x.lead();
            format!("valuation {v}, leading coefficient {n}/{d}")
        }
    }
}

fn member_verdict(tuple: Vec<i64>, value: RatQ, set: Subset) -> Verdict {
    let pass = value.member(set);
    let class = match set {
        Subset::A => "A".to_string(),
        Subset::QA => "qA".to_string(),
        Subset::QPowA(n) => format!("q^{n} A"),
        Subset::OnePlusQA => "1+qA".to_string(),
        Subset::AZ => "A_Z".to_string(),
        Subset::KZ => "K_Z".to_string(),
    };
    let diagnosis = (!pass).then(|| diagnose(&value));
    Verdict { tuple, value, class, pass, diagnosis }
}

/// e^{(a,b,c,d)} v_ℓ for a box of (b,c,d), built by sharing prefixes.
pub struct Monomials<'a> {
    m: &'a KRModule,
    pub bmax: i64,
    pub cmax: i64,
    pub dmax: i64,
    x: HashMap<(i64, i64, i64), SVec>,
}

impl<'a> Monomials<'a> {
    pub fn new(m: &'a KRModule, bmax: i64, cmax: i64, dmax: i64) -> Monomials<'a> {
        let rep = &m.rep;
        let cd = rep.cartan();
        let step = |i: usize, k: i64, x: &SVec| -> SVec {
            if x.is_zero() {
                return SVec::zero();
            }
            rep.act(Gen::E, i, x).scale(&RatQ::q_int(k, cd.s[i]).inv().unwrap())
        };
        let mut x = HashMap::new();
        let mut z0 = m.v.clone();
        let mut z = m.v.clone();
        for d in 0..=dmax {
            if d > 0 {
                z0 = step(0, d, &z0);
                z = z0.clone();
                for k in 1..=d {
                    z = step(1, k, &z);
                }
            }
            let mut w = z.clone();
            for c in 0..=cmax {
                if c > 0 {
                    w = step(2, c, &w);
                }
                let mut u = w.clone();
                for b in 0..=bmax {
                    if b > 0 {
                        u = step(1, b, &u);
                    }
                    x.insert((b, c, d), u.clone());
                }
            }
        }
        Monomials { m, bmax, cmax, dmax, x }
    }

    /// e^{(0,b,c,d)} v_ℓ; zero outside the nonnegative orthant.
    pub fn get(&self, b: i64, c: i64, d: i64) -> SVec {
        if b < 0 || c < 0 || d < 0 {
            return SVec::zero();
        }
        self.x.get(&(b, c, d)).cloned().unwrap_or_else(|| self.m.rep.apply_e_monomial((0, b, c, d), &self.m.v))
    }

    pub fn e2(&self, b: i64, c: i64, d: i64) -> SVec {
        self.m.rep.act(Gen::E, 2, &self.get(b, c, d))
    }

    pub fn full(&self, t: Tuple) -> SVec {
        let (a, b, c, d) = t;
        self.m.rep.act_divided(Gen::E, 0, a, &self.get(b, c, d))
    }

    fn boxes(&self) -> Vec<(i64, i64, i64)> {
        let mut v = Vec::new();
        for b in 0..=self.bmax {
            for c in 0..=self.cmax {
                for d in 0..=self.dmax {
                    v.push((b, c, d));
                }
            }
        }
        v
    }

    fn bounds(&self) -> Vec<(i64, i64)> {
        vec![(0, self.bmax), (0, self.cmax), (0, self.dmax)]
    }
}

fn pair(g: &Gram, u: &SVec, v: &SVec) -> RatQ {
    if u.is_zero() || v.is_zero() {
        return RatQ::zero();
    }
    g.pair(u, v)
}

/// Pairwise Gram values of all e^{(0,b,c,d)} v_ℓ in the box with equal
/// weight; distinct-weight pairs are omitted (they vanish).
pub fn monomial_gram(m: &KRModule, bmax: i64, cmax: i64, dmax: i64) -> Vec<((i64, i64, i64), (i64, i64, i64), RatQ)> {
    let mono = Monomials::new(m, bmax, cmax, dmax);
    let tuples = mono.boxes();
    let mut out = Vec::new();
    for (k, &s) in tuples.iter().enumerate() {
        for &t in &tuples[k..] {
            let (x, y) = (mono.get(s.0, s.1, s.2), mono.get(t.0, t.1, t.2));
            if !x.is_zero() && !y.is_zero() && m.rep.weight_of(&x) == m.rep.weight_of(&y) {
                out.push((s, t, pair(&m.gram, &x, &y)));
            }
        }
    }
    out
}

/// The box of (b,c,d) used for the statement checks: every coordinate runs
/// one step beyond the largest value the vanishing condition allows.
pub fn statement_box(ty: AffineType, l: i64) -> (i64, i64, i64) {
    match ty {
        AffineType::G2_1 => (l + 1, 2 * l + 1, l + 1),
        AffineType::D4_3 => (3 * l + 1, 2 * l + 1, 3 * l + 1),
    }
}

fn nonzero_condition(ty: AffineType, l: i64, b: i64, c: i64, d: i64) -> bool {
    match ty {
        AffineType::G2_1 => 2 * b <= c && c <= 2 * d && 2 * d <= 2 * l,
        AffineType::D4_3 => 2 * b <= 3 * c && 3 * c <= 2 * d && 2 * d <= 6 * l,
    }
}

/// (G1)–(G6) or (D1)–(D6) at the level of `m`.
pub fn check_statements(m: &KRModule) -> Vec<CheckReport> {
    let ty = m.rep.ty;
    let l = m.l;
    let (bm, cm, dm) = statement_box(ty, l);
    let mono = Monomials::new(m, bm, cm, dm);
    let g = &m.gram;
    let tuples = mono.boxes();
    let p = if ty == AffineType::G2_1 { "G" } else { "D" };
    let tv = |t: (i64, i64, i64)| vec![t.0, t.1, t.2];
    let mut out = Vec::new();

    // 1: vanishing iff
    let v1: Vec<Verdict> = tuples
        .iter()
        .map(|&(b, c, d)| {
            let want = nonzero_condition(ty, l, b, c, d);
            let x = mono.get(b, c, d);
            let pass = want != x.is_zero();
            Verdict {
                tuple: tv((b, c, d)),
                value: if x.is_zero() { RatQ::zero() } else { RatQ::one() },
                class: if want { "!= 0".into() } else { "= 0".into() },
                pass,
                diagnosis: (!pass).then(|| format!("vector has {} nonzero coordinates", x.len())),
            }
        })
        .collect();
    out.push(CheckReport::new(&format!("{p}1"), m, mono.bounds(), v1));

    // 2: norms in 1 + qA
    let v2: Vec<Verdict> = tuples
        .par_iter()
        .filter(|&&(b, c, d)| nonzero_condition(ty, l, b, c, d))
        .map(|&(b, c, d)| {
            let x = mono.get(b, c, d);
            member_verdict(tv((b, c, d)), pair(g, &x, &x), Subset::OnePlusQA)
        })
        .collect();
    out.push(CheckReport::new(&format!("{p}2"), m, mono.bounds(), v2));

    // 3: orthogonality of distinct tuples (only equal weights can pair)
    let nz: Vec<((i64, i64, i64), SVec)> =
        tuples.iter().map(|&t| (t, mono.get(t.0, t.1, t.2))).filter(|(_, x)| !x.is_zero()).collect();
    let mut pairs = Vec::new();
    for (k, (s, x)) in nz.iter().enumerate() {
        for (t, y) in &nz[k + 1..] {
            if m.rep.weight_of(x) == m.rep.weight_of(y) {
                pairs.push((*s, x, *t, y));
            }
        }
    }
    let v3: Vec<Verdict> = pairs
        .par_iter()
        .map(|(s, x, t, y)| {
            let val = pair(g, x, y);
            let pass = val.is_zero();
            Verdict {
                tuple: [tv(*s), tv(*t)].concat(),
                diagnosis: (!pass).then(|| diagnose(&val)),
                value: val,
                class: "= 0".into(),
                pass,
            }
        })
        .collect();
    let mut r3 = CheckReport::new(&format!("{p}3"), m, mono.bounds(), v3);
    r3.notes.push(format!("{} equal-weight pairs of nonzero vectors; all other pairs vanish by weight", pairs.len()));
    out.push(r3);

    // 4: ‖e2 e^{(b,c,d)} v‖²
    let mut stronger_held = 0;
    let mut stronger_tested = 0;
    let v4: Vec<(Verdict, Option<bool>)> = tuples
        .par_iter()
        .map(|&(b, c, d)| {
            let y = mono.e2(b, c, d);
            let val = pair(g, &y, &y);
            let full = (6 * b - 2 * c).min(-2 * c + 6 * d - 2 * l).min(0);
            match ty {
                AffineType::G2_1 => (member_verdict(tv((b, c, d)), val, Subset::QPowA(full as i32)), None),
                AffineType::D4_3 => {
                    let weak = (6 * b - 6 * c).min(0);
                    let strong = weak.min(-6 * c + 6 * d - 6 * l);
                    if b < 3 {
                        let extra = val.member(Subset::QPowA(strong as i32));
                        (member_verdict(tv((b, c, d)), val, Subset::QPowA(weak as i32)), Some(extra))
                    } else {
                        (member_verdict(tv((b, c, d)), val, Subset::QPowA(strong as i32)), None)
                    }
                }
            }
        })
        .collect();
    let mut verdicts = Vec::new();
    for (v, extra) in v4 {
        if let Some(e) = extra {
            stronger_tested += 1;
            stronger_held += e as usize;
        }
        verdicts.push(v);
    }
    let mut r4 = CheckReport::new(&format!("{p}4"), m, mono.bounds(), verdicts);
    if ty == AffineType::D4_3 {
        r4.notes.push(format!(
            "for b < 3 the b >= 3 bound also holds at {stronger_held} of {stronger_tested} tuples"
        ));
    }
    out.push(r4);

    // 5: (e^{(b-k,c-2,d-k)} v, e2 e^{(b,c,d)} v)
    let v5: Vec<Verdict> = tuples
        .par_iter()
        .map(|&(b, c, d)| {
            let (k, n) = match ty {
                AffineType::G2_1 => (1, -c + 3 * d - l),
                AffineType::D4_3 => (3, -3 * c + 3 * d - 3 * l),
            };
            let val = pair(g, &mono.get(b - k, c - 2, d - k), &mono.e2(b, c, d));
            member_verdict(tv((b, c, d)), val, Subset::QPowA(n as i32))
        })
        .collect();
    out.push(CheckReport::new(&format!("{p}5"), m, mono.bounds(), v5));

    // 6: (e^{(b,c,d)} v, e2 e^{(b,c-1,d)} v)
    let v6: Vec<Verdict> = tuples
        .par_iter()
        .map(|&(b, c, d)| {
            let n = match ty {
                AffineType::G2_1 => 3 * b - c + 1,
                AffineType::D4_3 => 3 * b - 3 * c + 3,
            };
            let val = pair(g, &mono.get(b, c, d), &mono.e2(b, c - 1, d));
            member_verdict(tv((b, c, d)), val, Subset::QPowA(n as i32))
        })
        .collect();
    out.push(CheckReport::new(&format!("{p}6"), m, mono.bounds(), v6));
    out
}

/// Almost-orthonormality on S_ℓ (reported as "3.2") and the norm bound
/// (reported as "3.3").
pub fn check_prop33(m: &KRModule) -> Vec<CheckReport> {
    let ty = m.rep.ty;
    let cd = m.rep.cartan();
    let s = enumerate_s(ty, m.l);
    let (bm, cm, dm) = s.iter().fold((0, 0, 0), |acc, t| (acc.0.max(t.1), acc.1.max(t.2), acc.2.max(t.3)));
    let mono = Monomials::new(m, bm, cm, dm);
    let vecs: Vec<(Tuple, SVec)> = s.iter().map(|&t| (t, mono.full(t))).collect();
    let bounds = vec![(0, s.iter().map(|t| t.0).max().unwrap_or(0)), (0, bm), (0, cm), (0, dm)];
    let tv = |t: Tuple| vec![t.0, t.1, t.2, t.3];

    let mut pairs = Vec::new();
    for (k, (t, x)) in vecs.iter().enumerate() {
        for (u, y) in &vecs[k..] {
            pairs.push((*t, x, *u, y));
        }
    }
    let v32: Vec<Verdict> = pairs
        .par_iter()
        .map(|(t, x, u, y)| {
            let same_weight = m.rep.weight_of(x) == m.rep.weight_of(y);
            let val = if same_weight { pair(&m.gram, x, y) } else { RatQ::zero() };
            let set = if t == u { Subset::OnePlusQA } else { Subset::QA };
            member_verdict([tv(*t), tv(*u)].concat(), val, set)
        })
        .collect();
    let mut r32 = CheckReport::new("3.2", m, bounds.clone(), v32);
    r32.notes.push(format!("{} tuples, {} pairs", s.len(), pairs.len()));

    let v33: Vec<Verdict> = vecs
        .par_iter()
        .flat_map(|(t, x)| {
            let wt = m.rep.weight_of(x);
            (1..=2)
                .map(|i| {
                    let y = m.rep.act(Gen::E, i, x);
                    let val = pair(&m.gram, &y, &y);
                    let h = wt.map_or(0, |w| w.0[i]);
                    let n = cd.s[i] as i64 * (-2 * h - 2) + 1;
                    let mut v = member_verdict([tv(*t), vec![i as i64]].concat(), val, Subset::QPowA(n as i32));
                    v.class = format!("q_{i}^({}) qA", -2 * h - 2);
                    v
                })
                .collect::<Vec<_>>()
        })
        .collect();
    let r33 = CheckReport::new("3.3", m, bounds, v33);
    vec![r32, r33]
}

/// All equal-weight monomial Gram values over the statement box lie in K_Z.
pub fn check_kz_integrality(m: &KRModule) -> CheckReport {
    let (bm, cm, dm) = statement_box(m.rep.ty, m.l);
    let verdicts = monomial_gram(m, bm, cm, dm)
        .into_iter()
        .map(|(s, t, val)| member_verdict(vec![s.0, s.1, s.2, t.0, t.1, t.2], val, Subset::KZ))
        .collect();
    CheckReport::new("KZ", m, vec![(0, bm), (0, cm), (0, dm)], verdicts)
}

/// Every leading principal minor of every weight block is positive.
pub fn check_polarization_positive(g: &Gram) -> bool {
    g.blocks.iter().all(|b| match leading_pivots(&b.m) {
        Some(p) => p.iter().all(|x| x.is_positive()),
        None => false,
    })
}

pub fn run_all(m: &KRModule) -> Vec<CheckReport> {
    log::info!("{} W^{}: statement battery", m.rep.ty, m.l);
    let mut r = check_statements(m);
    log::info!("{} W^{}: orthonormality on S_l", m.rep.ty, m.l);
    r.extend(check_prop33(m));
    log::info!("{} W^{}: K_Z integrality", m.rep.ty, m.l);
    r.push(check_kz_integrality(m));
    let pos = check_polarization_positive(&m.gram);
    r.push(CheckReport {
        statement: "positive".into(),
        ty: m.rep.ty,
        level: m.l,
        bounds: vec![],
        verdicts: vec![Verdict {
            tuple: vec![],
            value: if pos { RatQ::one() } else { RatQ::zero() },
            class: "leading principal minors > 0".into(),
            pass: pos,
            diagnosis: None,
        }],
        pass: pos,
        notes: vec![],
    });
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::Weight;

    fn one_by_one(x: RatQ) -> Gram {
        let mut g = Gram::new(&[Weight::ZERO]);
        g.set(0, 0, x);
        g
    }

    #[test]
    fn positivity_of_scalars() {
        assert!(check_polarization_positive(&one_by_one(RatQ::qpow(-1))));
        assert!(!check_polarization_positive(&one_by_one(RatQ::mono(-1, 1))));
        assert!(!check_polarization_positive(&one_by_one(RatQ::zero())));
    }

    #[test]
    fn indefinite_block_is_rejected() {
        let mut g = Gram::new(&[Weight::ZERO, Weight::ZERO]);
        g.set(0, 0, RatQ::one());
        g.set(1, 1, RatQ::one());
        g.set(0, 1, RatQ::int(2));
        g.set(1, 0, RatQ::int(2));
        assert!(!check_polarization_positive(&g));
        g.set(0, 1, RatQ::qpow(1));
        g.set(1, 0, RatQ::qpow(1));
        assert!(check_polarization_positive(&g));
    }

    #[test]
    fn membership_diagnosis_reports_valuation() {
        let v = member_verdict(vec![0], RatQ::mono(3, -2), Subset::A);
        assert!(!v.pass);
        assert_eq!(v.diagnosis.unwrap(), "valuation -2, leading coefficient 3/1");
    }
}
