//! Finite-dimensional modules over U'_q(g): generator actions, divided
//! powers, spectral shifts, tensor products, relation checks and Gram
//! matrices from a cyclic vector.

use crate::cartan::{AffineType, CartanData, Weight};
use crate::linalg::{solve, Echelon, Reduced, SMat, SVec, SolveError};
use crate::qfield::RatQ;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, VecDeque};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Gen {
    E,
    F,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum RepError {
    #[error("type mismatch: {0} vs {1}")]
    TypeMismatch(AffineType, AffineType),
    #[error("no prepolarization with the requested normalization exists")]
    Inconsistent,
    #[error("vector is not cyclic: Gram system has a {0}-dimensional solution space")]
    Underdetermined(usize),
    #[error("malformed module JSON: {0}")]
    Json(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rep {
    pub ty: AffineType,
    pub basis: Vec<String>,
    pub wt: Vec<Weight>,
    pub e: [SMat; 3],
    pub f: [SMat; 3],
    /// The module is twisted as M_{q^shift}: e0 scaled by q^shift, f0 by q^-shift.
    pub shift: i32,
    pub cyclic: Option<usize>,
}

impl Rep {
    pub fn cartan(&self) -> CartanData {
        CartanData::new(self.ty)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn mat(&self, g: Gen, i: usize) -> &SMat {
        match g {
            Gen::E => &self.e[i],
            Gen::F => &self.f[i],
        }
    }

    /// Same module with `shift` added to the spectral shift.
    pub fn twisted(&self, m: i32) -> Rep {
        let mut r = self.clone();
        r.shift += m;
        r
    }

    /// Fold the spectral shift into the index-0 matrices.
    pub fn baked(&self) -> Rep {
        if self.shift == 0 {
            return self.clone();
        }
        let mut r = self.clone();
        r.e[0] = self.e[0].scale(&RatQ::qpow(self.shift));
        r.f[0] = self.f[0].scale(&RatQ::qpow(-self.shift));
        r.shift = 0;
        r
    }

    /// Twist by an arbitrary nonzero scalar c: e0 -> c e0, f0 -> c^-1 f0.
    pub fn scalar_twist(&self, c: &RatQ) -> Rep {
        let mut r = self.baked();
        r.e[0] = r.e[0].scale(c);
        r.f[0] = r.f[0].scale(&c.inv().expect("nonzero twist"));
        r
    }

    /// Weight blocks in increasing weight order.
    pub fn blocks(&self) -> BTreeMap<Weight, Vec<usize>> {
        let mut b: BTreeMap<Weight, Vec<usize>> = BTreeMap::new();
        for (i, w) in self.wt.iter().enumerate() {
            b.entry(*w).or_default().push(i);
        }
        b
    }

    pub fn weight_of(&self, v: &SVec) -> Option<Weight> {
        v.lead().map(|(i, _)| self.wt[i])
    }

    /// One application of a generator, including the spectral shift.
    pub fn act(&self, g: Gen, i: usize, v: &SVec) -> SVec {
        let out = self.mat(g, i).apply(v);
        if i == 0 && self.shift != 0 {
            let k = if g == Gen::E { self.shift } else { -self.shift };
            return out.scale(&RatQ::qpow(k));
        }
        out
    }

    /// Divided power X_i^{(k)} v; zero for k < 0.
    pub fn act_divided(&self, g: Gen, i: usize, k: i64, v: &SVec) -> SVec {
        if k < 0 {
            return SVec::zero();
        }
        let mut out = v.clone();
        for _ in 0..k {
            if out.is_zero() {
                return out;
            }
            out = self.act(g, i, &out);
        }
        if k >= 2 {
            let s = self.cartan().s[i];
            out = out.scale(&RatQ::q_fact(k, s).unwrap().inv().unwrap());
        }
        out
    }

    /// e^{(a,b,c,d)} v = e0^{(a)} e1^{(b)} e2^{(c)} e1^{(d)} e0^{(d)} v
    pub fn apply_e_monomial(&self, t: (i64, i64, i64, i64), v: &SVec) -> SVec {
        let (a, b, c, d) = t;
        let mut x = v.clone();
        for (i, k) in [(0, d), (1, d), (2, c), (1, b), (0, a)] {
            x = self.act_divided(Gen::E, i, k, &x);
            if x.is_zero() {
                break;
            }
        }
        x
    }

    /// Apply a word of (generator, index, divided-power exponent), rightmost first.
    pub fn apply_word(&self, word: &[(Gen, usize, i64)], v: &SVec) -> SVec {
        let mut x = v.clone();
        for &(g, i, k) in word.iter().rev() {
            x = self.act_divided(g, i, k, &x);
        }
        x
    }

    /// The one-dimensional module with all generators zero.
    pub fn trivial(ty: AffineType) -> Rep {
        Rep {
            ty,
            basis: vec!["1".into()],
            wt: vec![Weight::ZERO],
            e: std::array::from_fn(|_| SMat::zero(1, 1)),
            f: std::array::from_fn(|_| SMat::zero(1, 1)),
            shift: 0,
            cyclic: Some(0),
        }
    }

    /// Restrict to the span of a basis that is stable under all generators.
    pub fn restrict(&self, span: &SpanBasis, labels: Option<Vec<String>>) -> Rep {
        let n = span.len();
        let wt: Vec<Weight> = span.vecs.iter().map(|r| self.weight_of(r).expect("nonzero basis vector")).collect();
        let mk = |g: Gen, i: usize| SMat {
            nrows: n,
            cols: span.vecs.iter().map(|r| span.coords(&self.act(g, i, r)).expect("span is not a submodule")).collect(),
        };
        let e = std::array::from_fn(|i| mk(Gen::E, i));
        let f = std::array::from_fn(|i| mk(Gen::F, i));
        Rep {
            ty: self.ty,
            basis: labels.unwrap_or_else(|| (0..n).map(|k| format!("b{k}")).collect()),
            wt,
            e,
            f,
            shift: 0,
            cyclic: None,
        }
    }

    /// The submodule generated by `seeds`, spanned by generated vectors
    /// taken breadth first.
    pub fn closure(&self, seeds: &[SVec], gens: &[(Gen, usize)]) -> SpanBasis {
        let mut span = SpanBasis::new();
        let mut queue = VecDeque::new();
        for s in seeds {
            if span.add(s, &SVec::zero()) {
                queue.push_back(s.clone());
            }
        }
        while let Some(v) = queue.pop_front() {
            for &(g, i) in gens {
                let w = self.act(g, i, &v);
                if !w.is_zero() && span.add(&w, &SVec::zero()) {
                    queue.push_back(w);
                }
            }
        }
        span
    }
}

/// A basis of generated vectors, each with an optional companion vector
/// (e.g. a preimage under an intertwiner), and an echelon form for
/// membership and coordinates.
#[derive(Clone, Debug, Default)]
pub struct SpanBasis {
    pub vecs: Vec<SVec>,
    pub twins: Vec<SVec>,
    // row twins hold coordinates in `vecs`
    ech: Echelon,
}

impl SpanBasis {
    pub fn new() -> SpanBasis {
        SpanBasis::default()
    }

    pub fn len(&self) -> usize {
        self.vecs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vecs.is_empty()
    }

    pub fn rank(&self) -> usize {
        self.vecs.len()
    }

    /// Add v if it is independent of the current basis.
    pub fn add(&mut self, v: &SVec, twin: &SVec) -> bool {
        let k = self.vecs.len();
        match self.ech.insert(v, &SVec::unit(k)) {
            Reduced::Inserted(_) => {
                self.vecs.push(v.clone());
                self.twins.push(twin.clone());
                true
            }
            Reduced::Dependent { .. } => false,
        }
    }

    /// Coordinates of v in `vecs`, if v lies in the span.
    pub fn coords(&self, v: &SVec) -> Option<SVec> {
        let (r, _, c) = self.ech.reduce(v, &SVec::zero());
        if !r.is_zero() {
            return None;
        }
        let mut out = SVec::zero();
        for (p, x) in c {
            out = out.axpy(&x, &self.ech.row(p).unwrap().1);
        }
        Some(out)
    }
}

pub const ALL_GENS: [(Gen, usize); 6] = [(Gen::E, 0), (Gen::E, 1), (Gen::E, 2), (Gen::F, 0), (Gen::F, 1), (Gen::F, 2)];
pub const CLASSICAL_GENS: [(Gen, usize); 4] = [(Gen::E, 1), (Gen::E, 2), (Gen::F, 1), (Gen::F, 2)];

/// a ⊗ b with the coproduct Δ(e_i) = e_i ⊗ t_i^-1 + 1 ⊗ e_i,
/// Δ(f_i) = f_i ⊗ 1 + t_i ⊗ f_i. Factor shifts are folded in.
pub fn tensor_with_shifts(a: &Rep, b: &Rep) -> Result<Rep, RepError> {
    if a.ty != b.ty {
        return Err(RepError::TypeMismatch(a.ty, b.ty));
    }
    let cd = a.cartan();
    let (a, b) = (a.baked(), b.baked());
    let (na, nb) = (a.dim(), b.dim());
    let n = na * nb;
    let idx = |p: usize, r: usize| p * nb + r;
    let mut basis = Vec::with_capacity(n);
    let mut wt = Vec::with_capacity(n);
    for p in 0..na {
        for r in 0..nb {
            basis.push(format!("{}⊗{}", a.basis[p], b.basis[r]));
            wt.push(a.wt[p] + b.wt[r]);
        }
    }
    let build = |g: Gen, i: usize| -> SMat {
        let ma = a.mat(g, i);
        let mb = b.mat(g, i);
        let mut cols = Vec::with_capacity(n);
        for p in 0..na {
            for r in 0..nb {
                let mut terms = Vec::new();
                match g {
                    Gen::E => {
                        let t = RatQ::qpow(-cd.t_exp(i, &b.wt[r]));
                        for (pp, x) in &ma.cols[p].0 {
                            terms.push((idx(*pp, r), x * &t));
                        }
                        for (rr, x) in &mb.cols[r].0 {
                            terms.push((idx(p, *rr), x.clone()));
                        }
                    }
                    Gen::F => {
                        for (pp, x) in &ma.cols[p].0 {
                            terms.push((idx(*pp, r), x.clone()));
                        }
                        let t = RatQ::qpow(cd.t_exp(i, &a.wt[p]));
                        for (rr, x) in &mb.cols[r].0 {
                            terms.push((idx(p, *rr), x * &t));
                        }
                    }
                }
                cols.push(SVec::from_terms(terms));
            }
        }
        SMat { nrows: n, cols }
    };
    let e = std::array::from_fn(|i| build(Gen::E, i));
    let f = std::array::from_fn(|i| build(Gen::F, i));
    let cyclic = match (a.cyclic, b.cyclic) {
        (Some(x), Some(y)) => Some(idx(x, y)),
        _ => None,
    };
    Ok(Rep { ty: a.ty, basis, wt, e, f, shift: 0, cyclic })
}

/// Iterated tensor product of shifted copies of w.
pub fn tensor_power(w: &Rep, shifts: &[i32]) -> Rep {
    let mut it = shifts.iter();
    let mut acc = w.twisted(*it.next().expect("nonempty")).baked();
    for &m in it {
        acc = tensor_with_shifts(&acc, &w.twisted(m)).unwrap();
    }
    acc
}

/// Δ(e_i^{(k)})(x ⊗ y) by the closed formula
/// Σ_j q_i^{j(k-j)} e_i^{(k-j)} x ⊗ t_i^{-k+j} e_i^{(j)} y.
pub fn coproduct_divided_e(a: &Rep, b: &Rep, i: usize, k: i64, x: &SVec, y: &SVec) -> SVec {
    let cd = a.cartan();
    let s = cd.s[i] as i32;
    let nb = b.dim();
    let mut terms = Vec::new();
    for j in 0..=k {
        let ex = a.act_divided(Gen::E, i, k - j, x);
        let ey = b.act_divided(Gen::E, i, j, y);
        if ex.is_zero() || ey.is_zero() {
            continue;
        }
        let c = RatQ::qpow(s * (j * (k - j)) as i32);
        for (p, xp) in &ex.0 {
            for (r, yr) in &ey.0 {
                let t = RatQ::qpow(cd.t_exp(i, &b.wt[*r]) * (j - k) as i32);
                terms.push((p * nb + r, &(&c * xp) * &(yr * &t)));
            }
        }
    }
    SVec::from_terms(terms)
}

pub fn kron(x: &SVec, y: &SVec, nb: usize) -> SVec {
    let mut t = Vec::with_capacity(x.len() * y.len());
    for (p, a) in &x.0 {
        for (r, b) in &y.0 {
            t.push((p * nb + r, a * b));
        }
    }
    SVec(t)
}

#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq, Eq)]
pub struct RelationReport {
    pub checked: usize,
    pub violations: Vec<String>,
}

impl RelationReport {
    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Weight compatibility, [e_i, f_j] = δ_ij [<h_i, λ>]_{q_i}, and both Serre
/// relations, checked as exact identities on every basis vector.
pub fn verify_relations(rep: &Rep) -> RelationReport {
    verify_relations_on(rep, &[0, 1, 2])
}

/// The same checks restricted to the generators with index in `idx`
/// (e.g. [1, 2] for the classical subalgebra).
pub fn verify_relations_on(rep: &Rep, idx: &[usize]) -> RelationReport {
    let cd = rep.cartan();
    let n = rep.dim();
    let mut rep_out = RelationReport::default();
    let bad = |s: String, r: &mut RelationReport| {
        if r.violations.len() < 200 {
            r.violations.push(s);
        }
    };
    for &i in idx {
        let a = cd.alpha(i);
        for (g, sign) in [(Gen::E, 1), (Gen::F, -1)] {
            for (j, col) in rep.mat(g, i).cols.iter().enumerate() {
                for (r, _) in &col.0 {
                    rep_out.checked += 1;
                    if rep.wt[*r] != rep.wt[j] + a.scale(sign) {
                        bad(format!("weight: {g:?}{i} maps {} into {}", rep.basis[j], rep.basis[*r]), &mut rep_out);
                    }
                }
            }
        }
    }
    for k in 0..n {
        let v = SVec::unit(k);
        for &i in idx {
            for &j in idx {
                let ef = rep.act(Gen::E, i, &rep.act(Gen::F, j, &v));
                let fe = rep.act(Gen::F, j, &rep.act(Gen::E, i, &v));
                let mut lhs = ef.sub(&fe);
                if i == j {
                    let c = RatQ::q_int(rep.wt[k].0[i], cd.s[i]);
                    lhs = lhs.axpy(&-c, &v);
                }
                rep_out.checked += 1;
                if !lhs.is_zero() {
                    bad(format!("[e{i},f{j}] on {}", rep.basis[k]), &mut rep_out);
                }
            }
        }
        for &i in idx {
            for &j in idx {
                if i == j {
                    continue;
                }
                let m = 1 - cd.cartan[i][j];
                for g in [Gen::E, Gen::F] {
                    let mut tot = SVec::zero();
                    for kk in 0..=m {
                        let x = rep.act_divided(g, i, m - kk, &v);
                        let x = rep.act(g, j, &x);
                        let x = rep.act_divided(g, i, kk, &x);
                        let sgn = if kk % 2 == 0 { RatQ::one() } else { RatQ::int(-1) };
                        tot = tot.axpy(&sgn, &x);
                    }
                    rep_out.checked += 1;
                    if !tot.is_zero() {
                        bad(format!("Serre {g:?}({i},{j}) on {}", rep.basis[k]), &mut rep_out);
                    }
                }
            }
        }
    }
    rep_out
}

/// A bilinear form (or pairing) stored per weight block as dense matrices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gram {
    /// basis index -> (block id, position in block)
    pub loc: Vec<(usize, usize)>,
    pub blocks: Vec<GramBlock>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GramBlock {
    pub weight: Weight,
    pub idx: Vec<usize>,
    pub m: Vec<Vec<RatQ>>,
}

impl Gram {
    pub fn new(wt: &[Weight]) -> Gram {
        let mut map: BTreeMap<Weight, Vec<usize>> = BTreeMap::new();
        for (i, w) in wt.iter().enumerate() {
            map.entry(*w).or_default().push(i);
        }
        let mut loc = vec![(0, 0); wt.len()];
        let mut blocks = Vec::new();
        for (b, (w, idx)) in map.into_iter().enumerate() {
            for (k, &i) in idx.iter().enumerate() {
                loc[i] = (b, k);
            }
            let n = idx.len();
            blocks.push(GramBlock { weight: w, idx, m: vec![vec![RatQ::zero(); n]; n] });
        }
        Gram { loc, blocks }
    }

    pub fn dim(&self) -> usize {
        self.loc.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> RatQ {
        let (bi, ki) = self.loc[i];
        let (bj, kj) = self.loc[j];
        if bi != bj {
            return RatQ::zero();
        }
        self.blocks[bi].m[ki][kj].clone()
    }

    pub fn set(&mut self, i: usize, j: usize, x: RatQ) {
        let (bi, ki) = self.loc[i];
        let (bj, kj) = self.loc[j];
        assert_eq!(bi, bj, "Gram entry across weight blocks");
        self.blocks[bi].m[ki][kj] = x;
    }

    /// (u, v)
    pub fn pair(&self, u: &SVec, v: &SVec) -> RatQ {
        let mut acc = RatQ::zero();
        for (i, a) in &u.0 {
            let (bi, ki) = self.loc[*i];
            let row = &self.blocks[bi].m[ki];
            for (j, b) in &v.0 {
                let (bj, kj) = self.loc[*j];
                if bi == bj && !row[kj].is_zero() {
                    acc = &acc + &(&(a * &row[kj]) * b);
                }
            }
        }
        acc
    }

    pub fn is_symmetric(&self) -> bool {
        self.blocks.iter().all(|b| {
            let n = b.idx.len();
            (0..n).all(|i| (0..i).all(|j| b.m[i][j] == b.m[j][i]))
        })
    }

    /// Kronecker product: the pairing (x⊗y, x'⊗y') = (x,x')_a (y,y')_b.
    pub fn kron(a: &Gram, b: &Gram, wt: &[Weight]) -> Gram {
        let nb = b.dim();
        let mut g = Gram::new(wt);
        for blk in 0..g.blocks.len() {
            let idx = g.blocks[blk].idx.clone();
            for (k1, &i) in idx.iter().enumerate() {
                for (k2, &j) in idx.iter().enumerate() {
                    let x = a.entry(i / nb, j / nb);
                    if x.is_zero() {
                        continue;
                    }
                    let y = b.entry(i % nb, j % nb);
                    if !y.is_zero() {
                        g.blocks[blk].m[k1][k2] = &x * &y;
                    }
                }
            }
        }
        g
    }
}

/// The admissibility defect of a pairing between two modules on basis vectors:
/// returns every failing (i, u, v) of (e_i u, v) = (u, q_i^-1 t_i^-1 f_i v).
pub fn admissibility_failures(m: &Rep, n: &Rep, g: &Gram) -> Vec<String> {
    let cd = m.cartan();
    let mut bad = Vec::new();
    for i in 0..3 {
        for u in 0..m.dim() {
            let eu = m.act(Gen::E, i, &SVec::unit(u));
            let target = m.wt[u] + cd.alpha(i);
            for v in 0..n.dim() {
                if n.wt[v] != target {
                    continue;
                }
                let fv = n.act(Gen::F, i, &SVec::unit(v));
                let lhs = g.pair(&eu, &SVec::unit(v));
                let c = RatQ::qpow(-(cd.s[i] as i32) - cd.t_exp(i, &m.wt[u]));
                let rhs = &c * &g.pair(&SVec::unit(u), &fv);
                if lhs != rhs {
                    bad.push(format!("e{i}: ({}, {})", m.basis[u], n.basis[v]));
                }
            }
        }
    }
    bad
}

/// The unique symmetric form with (v0, v0) = norm satisfying the admissibility
/// adjointness, found by a global linear solve over the block entries.
pub fn gram_from_cyclic(rep: &Rep, v0: &SVec, norm: &RatQ) -> Result<Gram, RepError> {
    let cd = rep.cartan();
    let mut g = Gram::new(&rep.wt);
    // unknown numbering: upper-triangular entries of each block
    let mut var_of: BTreeMap<(usize, usize, usize), usize> = BTreeMap::new();
    let mut nvars = 0;
    for (b, blk) in g.blocks.iter().enumerate() {
        let n = blk.idx.len();
        for i in 0..n {
            for j in i..n {
                var_of.insert((b, i, j), nvars);
                nvars += 1;
            }
        }
    }
    let loc = g.loc.clone();
    let var = |i: usize, j: usize| -> usize {
        let (bi, ki) = loc[i];
        let (_, kj) = loc[j];
        let (a, b) = if ki <= kj { (ki, kj) } else { (kj, ki) };
        var_of[&(bi, a, b)]
    };
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for i in 0..3 {
        for u in 0..rep.dim() {
            let eu = rep.act(Gen::E, i, &SVec::unit(u));
            let target = rep.wt[u] + cd.alpha(i);
            let c = RatQ::qpow(-(cd.s[i] as i32) - cd.t_exp(i, &rep.wt[u]));
            for v in 0..rep.dim() {
                if rep.wt[v] != target {
                    continue;
                }
                let fv = rep.act(Gen::F, i, &SVec::unit(v));
                let mut terms = Vec::new();
                for (x, a) in &eu.0 {
                    terms.push((var(*x, v), a.clone()));
                }
                for (y, b) in &fv.0 {
                    terms.push((var(u, *y), -(&c * b)));
                }
                let r = SVec::from_terms(terms);
                if !r.is_zero() {
                    rows.push(r);
                    rhs.push(RatQ::zero());
                }
            }
        }
    }
    let mut terms = Vec::new();
    for (x, a) in &v0.0 {
        for (y, b) in &v0.0 {
            if rep.wt[*x] == rep.wt[*y] {
                terms.push((var(*x, *y), a * b));
            }
        }
    }
    rows.push(SVec::from_terms(terms));
    rhs.push(norm.clone());
    let (x, null) = solve(&rows, &rhs, nvars).map_err(|SolveError::Inconsistent| RepError::Inconsistent)?;
    if !null.is_empty() {
        return Err(RepError::Underdetermined(null.len()));
    }
    for i in 0..rep.dim() {
        for j in 0..rep.dim() {
            if rep.wt[i] == rep.wt[j] {
                g.set(i, j, x[var(i, j)].clone());
            }
        }
    }
    Ok(g)
}

#[derive(Serialize, Deserialize)]
struct RepJson {
    #[serde(rename = "type")]
    ty: AffineType,
    shift: i32,
    basis: Vec<String>,
    weights: Vec<[i64; 3]>,
    e: BTreeMap<String, Vec<(usize, usize, RatQ)>>,
    f: BTreeMap<String, Vec<(usize, usize, RatQ)>>,
    cyclic: Option<usize>,
}

impl Rep {
    pub fn to_json(&self) -> String {
        let mats = |ms: &[SMat; 3]| -> BTreeMap<String, Vec<(usize, usize, RatQ)>> {
            (0..3)
                .map(|i| (i.to_string(), ms[i].entries().map(|(r, c, x)| (r, c, x.clone())).collect()))
                .collect()
        };
        let j = RepJson {
            ty: self.ty,
            shift: self.shift,
            basis: self.basis.clone(),
            weights: self.wt.iter().map(|w| w.0).collect(),
            e: mats(&self.e),
            f: mats(&self.f),
            cyclic: self.cyclic,
        };
        serde_json::to_string(&j).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Rep, RepError> {
        let j: RepJson = serde_json::from_str(s).map_err(|e| RepError::Json(e.to_string()))?;
        let n = j.basis.len();
        if j.weights.len() != n {
            return Err(RepError::Json("weights and basis lengths differ".into()));
        }
        let mats = |m: &BTreeMap<String, Vec<(usize, usize, RatQ)>>| -> Result<[SMat; 3], RepError> {
            let mut out: [SMat; 3] = std::array::from_fn(|_| SMat::zero(n, n));
            for (k, ent) in m {
                let i: usize = k.parse().map_err(|_| RepError::Json(format!("bad generator index {k}")))?;
                if i > 2 {
                    return Err(RepError::Json(format!("generator index {i} out of range")));
                }
                if ent.iter().any(|(r, c, _)| *r >= n || *c >= n) {
                    return Err(RepError::Json("matrix entry out of range".into()));
                }
                out[i] = SMat::from_entries(n, n, ent.clone());
            }
            Ok(out)
        };
        Ok(Rep {
            ty: j.ty,
            basis: j.basis,
            wt: j.weights.into_iter().map(Weight).collect(),
            e: mats(&j.e)?,
            f: mats(&j.f)?,
            shift: j.shift,
            cyclic: j.cyclic,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_module_passes() {
        for t in AffineType::ALL {
            assert!(verify_relations(&Rep::trivial(t)).pass());
        }
    }

    #[test]
    fn negative_divided_power_is_zero() {
        let r = Rep::trivial(AffineType::G2_1);
        assert!(r.act_divided(Gen::E, 1, -1, &SVec::unit(0)).is_zero());
        assert_eq!(r.apply_e_monomial((0, 0, 0, 0), &SVec::unit(0)), SVec::unit(0));
    }
}
