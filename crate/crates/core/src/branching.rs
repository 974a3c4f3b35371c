//! Branching to U_q(g0) (type G2): tuple sets S_ℓ, Weyl dimension and
//! Freudenthal characters, and character peeling of built modules.

use crate::cartan::{classical_change_of_basis, AffineType, CartanData, Weight};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

pub type Tuple = (i64, i64, i64, i64);
/// classical weight (m1, m2) in ϖ-coordinates
pub type Cw = (i64, i64);

/// The finite G2 root system in the labeling of a given affine type.
#[derive(Clone, Debug)]
pub struct G2System {
    pub cd: CartanData,
    /// columns: α1, α2 in ϖ-coordinates
    m: [[i64; 2]; 2],
    inv: [[i64; 2]; 2],
    pub positive_roots: Vec<Cw>,
}

impl G2System {
    pub fn new(ty: AffineType) -> G2System {
        let cd = CartanData::new(ty);
        let (m, inv) = classical_change_of_basis(&cd);
        let mut sys = G2System { cd, m, inv, positive_roots: Vec::new() };
        let simple = [sys.alpha(1), sys.alpha(2)];
        let mut roots: BTreeSet<Cw> = simple.iter().copied().collect();
        loop {
            let mut grown = false;
            for r in roots.clone() {
                for i in 1..=2 {
                    let s = sys.reflect(i, r);
                    grown |= roots.insert(s);
                }
            }
            if !grown {
                break;
            }
        }
        sys.positive_roots = roots.into_iter().filter(|r| {
            let (a, b) = sys.alpha_coords(*r);
            a >= 0 && b >= 0
        }).collect();
        sys
    }

    pub fn alpha(&self, i: usize) -> Cw {
        (self.cd.root_cl[i][0], self.cd.root_cl[i][1])
    }

    pub fn reflect(&self, i: usize, mu: Cw) -> Cw {
        let k = if i == 1 { mu.0 } else { mu.1 };
        let a = self.alpha(i);
        (mu.0 - k * a.0, mu.1 - k * a.1)
    }

    /// μ in the (α1, α2) basis.
    pub fn alpha_coords(&self, mu: Cw) -> (i64, i64) {
        (self.inv[0][0] * mu.0 + self.inv[0][1] * mu.1, self.inv[1][0] * mu.0 + self.inv[1][1] * mu.1)
    }

    pub fn from_alpha_coords(&self, n: (i64, i64)) -> Cw {
        (self.m[0][0] * n.0 + self.m[0][1] * n.1, self.m[1][0] * n.0 + self.m[1][1] * n.1)
    }

    /// W-invariant form with (α_i, α_i) = 2 s_i.
    pub fn inner(&self, l: Cw, mu: Cw) -> i64 {
        let n = self.alpha_coords(mu);
        n.0 * l.0 * self.cd.s[1] as i64 + n.1 * l.1 * self.cd.s[2] as i64
    }

    pub fn dominant_conjugate(&self, mut mu: Cw) -> Cw {
        loop {
            if mu.0 < 0 {
                mu = self.reflect(1, mu);
            } else if mu.1 < 0 {
                mu = self.reflect(2, mu);
            } else {
                return mu;
            }
        }
    }

    pub fn orbit(&self, mu: Cw) -> BTreeSet<Cw> {
        let mut seen: BTreeSet<Cw> = [mu].into();
        let mut stack = vec![mu];
        while let Some(x) = stack.pop() {
            for i in 1..=2 {
                let y = self.reflect(i, x);
                if seen.insert(y) {
                    stack.push(y);
                }
            }
        }
        seen
    }

    /// λ - μ is a nonnegative combination of simple roots.
    pub fn dominates(&self, lambda: Cw, mu: Cw) -> bool {
        let n = self.alpha_coords((lambda.0 - mu.0, lambda.1 - mu.1));
        n.0 >= 0 && n.1 >= 0
    }

    /// μ lies in the convex hull of the Weyl orbit of the dominant λ.
    pub fn in_hull(&self, lambda: Cw, mu: Cw) -> bool {
        self.dominates(lambda, self.dominant_conjugate(mu))
    }

    pub fn height(&self, mu: Cw) -> i64 {
        let n = self.alpha_coords(mu);
        n.0 + n.1
    }

    pub fn weyl_dim(&self, lambda: Cw) -> Result<u64, BranchError> {
        if lambda.0 < 0 || lambda.1 < 0 {
            return Err(BranchError::NotDominant(lambda));
        }
        let rho = (1, 1);
        let lr = (lambda.0 + 1, lambda.1 + 1);
        let (mut num, mut den) = (1i128, 1i128);
        for &a in &self.positive_roots {
            num *= self.inner(lr, a) as i128;
            den *= self.inner(rho, a) as i128;
        }
        Ok((num / den) as u64)
    }

    /// Full character of V0(λ) by Freudenthal's recursion.
    pub fn character(&self, lambda: Cw) -> Result<BTreeMap<Cw, u64>, BranchError> {
        if lambda.0 < 0 || lambda.1 < 0 {
            return Err(BranchError::NotDominant(lambda));
        }
        let rho = (1, 1);
        let add = |x: Cw, y: Cw| (x.0 + y.0, x.1 + y.1);
        let norm = |x: Cw| self.inner(x, x);
        let top = norm(add(lambda, rho));
        // candidates λ - n1 α1 - n2 α2 inside the hull, by increasing depth
        let lowest = self.orbit(lambda).into_iter().map(|w| self.alpha_coords((lambda.0 - w.0, lambda.1 - w.1))).fold((0, 0), |a, b| (a.0.max(b.0), a.1.max(b.1)));
        let mut layers: BTreeMap<i64, Vec<Cw>> = BTreeMap::new();
        for n1 in 0..=lowest.0 {
            for n2 in 0..=lowest.1 {
                let d = self.from_alpha_coords((n1, n2));
                let mu = (lambda.0 - d.0, lambda.1 - d.1);
                if self.in_hull(lambda, mu) {
                    layers.entry(n1 + n2).or_default().push(mu);
                }
            }
        }
        let mut mult: BTreeMap<Cw, u64> = BTreeMap::new();
        mult.insert(lambda, 1);
        for (_, mus) in layers.into_iter().skip(1) {
            for mu in mus {
                let mut s: i128 = 0;
                for &a in &self.positive_roots {
                    let mut k = 1;
                    loop {
                        let x = (mu.0 + k * a.0, mu.1 + k * a.1);
                        if !self.in_hull(lambda, x) {
                            break;
                        }
                        if let Some(&m) = mult.get(&x) {
                            s += m as i128 * self.inner(x, a) as i128;
                        }
                        k += 1;
                    }
                }
                let d = (top - norm(add(mu, rho))) as i128;
                let m = 2 * s / d;
                if m > 0 {
                    mult.insert(mu, m as u64);
                }
            }
        }
        Ok(mult)
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum BranchError {
    #[error("weight {0:?} is not classically dominant")]
    NotDominant(Cw),
    #[error("character peeling went negative at weight {0:?}")]
    NegativeMultiplicity(Cw),
}

/// S_ℓ of the branching rule.
pub fn enumerate_s(ty: AffineType, l: i64) -> Vec<Tuple> {
    let mut out = Vec::new();
    match ty {
        AffineType::G2_1 => {
            for d in 0..=l {
                for b in 0..=d {
                    for c in 0..=b + d {
                        for a in 0..=b {
                            if 3 * b <= c && c <= b + d && a <= b && -c + 3 * d <= l {
                                out.push((a, b, c, d));
                            }
                        }
                    }
                }
            }
        }
        AffineType::D4_3 => {
            for c in 0..=l {
                for d in 0..=2 * l {
                    for b in 0..=c {
                        for a in 0..=b {
                            if 3 * c <= b + d && a <= b && b <= c && -c + d <= l {
                                out.push((a, b, c, d));
                            }
                        }
                    }
                }
            }
        }
    }
    out.sort();
    out
}

/// ℓϖ2 + (a+d)α0 + (b+d)α1 + cα2
pub fn tuple_weight(ty: AffineType, l: i64, t: Tuple) -> Weight {
    let cd = CartanData::new(ty);
    let (a, b, c, d) = t;
    cd.varpi2().scale(l) + cd.alpha(0).scale(a + d) + cd.alpha(1).scale(b + d) + cd.alpha(2).scale(c)
}

/// The T_ℓ sets of the fermionic rewriting with their classical weights.
pub fn t_set(ty: AffineType, l: i64) -> Vec<((i64, i64, i64, i64), Cw)> {
    let mut out = Vec::new();
    for r1 in 0..=l {
        for r2 in 0..=l {
            for r3 in 0..=l {
                for r4 in 0..=l {
                    match ty {
                        AffineType::G2_1 => {
                            if r4 <= r2 && 2 * r1 + 3 * r2 + 3 * r3 <= l {
                                out.push(((r1, r2, r3, r4), (r2 + r3 - r4, l - r1 - 3 * r2 - 3 * r3)));
                            }
                        }
                        AffineType::D4_3 => {
                            if r3 <= r1 && r1 + r2 + r3 + r4 <= l {
                                out.push(((r1, r2, r3, r4), (r1 + r2 - r3, l - r1 - r2 - r4)));
                            }
                        }
                    }
                }
            }
        }
    }
    out.sort();
    out
}

/// Image of a tuple of S_ℓ under the substitution into T_ℓ.
pub fn substitute(ty: AffineType, t: Tuple) -> (i64, i64, i64, i64) {
    let (a, b, c, d) = t;
    match ty {
        AffineType::G2_1 => (-3 * b + c, a + b - c + d, -a + b, a),
        AffineType::D4_3 => (-2 * c + d, -a + b, -b + c, a),
    }
}

/// Check that the substitution maps S_ℓ bijectively onto T_ℓ preserving weights.
pub fn cross_check_t(ty: AffineType, l: i64) -> Result<(), String> {
    let t: BTreeMap<_, _> = t_set(ty, l).into_iter().collect();
    let s = enumerate_s(ty, l);
    if s.len() != t.len() {
        return Err(format!("|S| = {} but |T| = {}", s.len(), t.len()));
    }
    let mut hit = BTreeSet::new();
    for tup in s {
        let r = substitute(ty, tup);
        let Some(w) = t.get(&r) else { return Err(format!("{tup:?} maps outside T: {r:?}")) };
        if tuple_weight(ty, l, tup).classical() != *w {
            return Err(format!("{tup:?}: weight mismatch"));
        }
        if !hit.insert(r) {
            return Err(format!("substitution not injective at {r:?}"));
        }
    }
    Ok(())
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct BranchReport {
    pub level: i64,
    #[serde(rename = "type")]
    pub ty: AffineType,
    pub tuples: Vec<(Tuple, Cw)>,
    pub computed: Vec<Cw>,
    pub expected: Vec<Cw>,
    pub dim: usize,
    pub expected_dim: u64,
    pub pass: bool,
}

/// Peel irreducible characters off a weight multiset. `tie` picks among
/// candidates of maximal height.
pub fn peel(sys: &G2System, mults: &BTreeMap<Cw, i64>, reverse_ties: bool) -> Result<Vec<Cw>, BranchError> {
    let mut m = mults.clone();
    let mut out = Vec::new();
    loop {
        m.retain(|_, v| *v != 0);
        if let Some((w, _)) = m.iter().find(|(_, v)| **v < 0) {
            return Err(BranchError::NegativeMultiplicity(*w));
        }
        let Some(h) = m.keys().map(|w| sys.height(*w)).max() else { break };
        let mut cands: Vec<Cw> = m.keys().copied().filter(|w| sys.height(*w) == h).collect();
        cands.sort();
        let top = if reverse_ties { *cands.last().unwrap() } else { cands[0] };
        let ch = sys.character(top)?;
        let k = m[&top];
        for (w, x) in ch {
            *m.entry(w).or_insert(0) -= k * x as i64;
        }
        for _ in 0..k {
            out.push(top);
        }
    }
    out.sort();
    Ok(out)
}

pub fn branch_verify(ty: AffineType, l: i64, weights: &[Weight]) -> Result<BranchReport, BranchError> {
    let sys = G2System::new(ty);
    let mut mults: BTreeMap<Cw, i64> = BTreeMap::new();
    for w in weights {
        *mults.entry(w.classical()).or_insert(0) += 1;
    }
    let computed = peel(&sys, &mults, false)?;
    let tuples: Vec<(Tuple, Cw)> = enumerate_s(ty, l).into_iter().map(|t| (t, tuple_weight(ty, l, t).classical())).collect();
    let mut expected: Vec<Cw> = tuples.iter().map(|x| x.1).collect();
    expected.sort();
    let mut expected_dim = 0;
    for w in &expected {
        expected_dim += sys.weyl_dim(*w)?;
    }
    let pass = computed == expected && expected_dim == weights.len() as u64;
    Ok(BranchReport { level: l, ty, tuples, computed, expected, dim: weights.len(), expected_dim, pass })
}

/// S_ℓ as CSV: a,b,c,d,m1,m2
pub fn s_csv(ty: AffineType, l: i64) -> String {
    let mut s = String::from("a,b,c,d,m1,m2\n");
    for t in enumerate_s(ty, l) {
        let w = tuple_weight(ty, l, t).classical();
        s.push_str(&format!("{},{},{},{},{},{}\n", t.0, t.1, t.2, t.3, w.0, w.1));
    }
    s
}
