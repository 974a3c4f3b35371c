//! R-matrices, the fusion map R_ℓ and the two models of W^ℓ = W^{2,ℓ}.

use crate::cartan::AffineType;
use crate::fundamental::{build_w1_d4, build_w1_g2, BuildError};
use crate::linalg::{nullspace, SMat, SVec};
use crate::qfield::RatQ;
use crate::repcore::{kron, tensor_power, tensor_with_shifts, Gen, Gram, Rep, SpanBasis, ALL_GENS};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap, VecDeque};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Fused,
    Recursive,
}

#[derive(Clone, Debug)]
pub struct KRModule {
    pub rep: Rep,
    pub v: SVec,
    pub gram: Gram,
    pub l: i64,
    pub provenance: Provenance,
}

#[derive(Debug, thiserror::Error)]
pub enum FusionError {
    #[error("intertwiner space is empty")]
    NoIntertwiner,
    #[error("intertwiner space has dimension {0}, expected 1")]
    NotUnique(usize),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("resource bound exceeded: {0}")]
    Resource(String),
    #[error("fundamental module: {0}")]
    Build(#[from] BuildError),
    #[error("inconsistent construction: {0}")]
    Inconsistent(String),
}

/// W¹ with its prepolarization and distinguished vector.
pub fn kr1(ty: AffineType) -> Result<KRModule, FusionError> {
    let r = match ty {
        AffineType::G2_1 => build_w1_g2()?,
        AffineType::D4_3 => build_w1_d4()?,
    };
    let mut rep = r.rep;
    rep.cyclic = Some(r.w);
    Ok(KRModule { rep, v: SVec::unit(r.w), gram: r.gram, l: 1, provenance: Provenance::Fused })
}

#[derive(Clone, Debug)]
pub struct RSolution {
    pub mat: SMat,
    pub unknowns: usize,
    pub equations: usize,
    pub solution_dim: usize,
}

/// The intertwiner W_{q^ma} ⊗ W_{q^mb} -> W_{q^mb} ⊗ W_{q^ma} fixing u ⊗ u,
/// from the full linear system; the solution space must be a line.
pub fn solve_r(w: &Rep, ma: i32, mb: i32, max_unknowns: usize) -> Result<RSolution, FusionError> {
    if ma < mb {
        return Err(FusionError::Precondition(format!("shift ratio q^{} is not in A", ma - mb)));
    }
    let n = w.dim();
    let u = w.cyclic.ok_or_else(|| FusionError::Precondition("module has no distinguished vector".into()))?;
    if ma == mb {
        return Ok(RSolution { mat: SMat::identity(n * n), unknowns: 0, equations: 0, solution_dim: 1 });
    }
    let src = tensor_with_shifts(&w.twisted(ma), &w.twisted(mb)).unwrap();
    let tgt = tensor_with_shifts(&w.twisted(mb), &w.twisted(ma)).unwrap();
    let nn = n * n;
    let blocks = tgt.blocks();
    let mut var: HashMap<(usize, usize), usize> = HashMap::new();
    let mut pos = Vec::new();
    for c in 0..nn {
        for &r in &blocks[&src.wt[c]] {
            var.insert((r, c), pos.len());
            pos.push((r, c));
        }
    }
    if pos.len() > max_unknowns {
        return Err(FusionError::Resource(format!("{} unknowns in the intertwiner system", pos.len())));
    }
    let mut eqs: BTreeMap<(usize, usize, usize), Vec<(usize, RatQ)>> = BTreeMap::new();
    for (gi, &(g, i)) in ALL_GENS.iter().enumerate() {
        let xs = src.mat(g, i);
        let xt = tgt.mat(g, i);
        // rows of X_S: k -> [(c, x)]
        let mut xs_rows: Vec<Vec<(usize, RatQ)>> = vec![Vec::new(); nn];
        for (k, c, x) in xs.entries() {
            xs_rows[k].push((c, x.clone()));
        }
        for (vi, &(r, k)) in pos.iter().enumerate() {
            // (R X_S)[r][c] gets R[r][k] X_S[k][c]
            for (c, x) in &xs_rows[k] {
                eqs.entry((gi, r, *c)).or_default().push((vi, x.clone()));
            }
            // (X_T R)[r'][k] gets X_T[r'][r] R[r][k]
            for (r2, x) in &xt.cols[r].0 {
                eqs.entry((gi, *r2, k)).or_default().push((vi, -x));
            }
        }
    }
    let rows: Vec<SVec> = eqs.into_values().map(SVec::from_terms).filter(|r| !r.is_zero()).collect();
    let neq = rows.len();
    let null = nullspace(&rows, pos.len());
    match null.len() {
        0 => return Err(FusionError::NoIntertwiner),
        1 => {}
        k => return Err(FusionError::NotUnique(k)),
    }
    let sol = &null[0];
    let uu = u * n + u;
    let c = sol[var[&(uu, uu)]].clone();
    if c.is_zero() {
        return Err(FusionError::Inconsistent("intertwiner kills u ⊗ u".into()));
    }
    let inv = c.inv().unwrap();
    let ent = pos.iter().zip(sol).filter(|(_, x)| !x.is_zero()).map(|(&(r, c), x)| (r, c, x * &inv)).collect();
    Ok(RSolution { mat: SMat::from_entries(nn, nn, ent), unknowns: pos.len(), equations: neq, solution_dim: 1 })
}

/// Shifts k(ℓ-1), k(ℓ-3), ..., k(1-ℓ).
pub fn ladder(k: i64, l: i64) -> Vec<i32> {
    (0..l).map(|j| (k * (l - 1 - 2 * j)) as i32).collect()
}

/// Positions of adjacent transpositions, in order of application, for the
/// staircase reduced word of the longest permutation.
pub fn staircase_word(l: usize) -> Vec<usize> {
    let mut w = Vec::new();
    for i in 1..l {
        for p in (0..i).rev() {
            w.push(p);
        }
    }
    w
}

/// The mirror word (p -> ℓ-2-p), also reduced.
pub fn mirrored_word(l: usize) -> Vec<usize> {
    staircase_word(l).into_iter().map(|p| l - 2 - p).collect()
}

/// Apply a d²×d² matrix to factors p, p+1 of an ℓ-fold tensor.
fn apply_local(r: &SMat, p: usize, l: usize, d: usize, v: &SVec) -> SVec {
    let suf = d.pow((l - p - 2) as u32);
    let mut terms = Vec::new();
    for (idx, x) in &v.0 {
        let pre = idx / (suf * d * d);
        let pair = (idx / suf) % (d * d);
        let s = idx % suf;
        for (j, y) in &r.cols[pair].0 {
            terms.push(((pre * d * d + j) * suf + s, x * y));
        }
    }
    SVec::from_terms(terms)
}

/// R_ℓ on the whole ℓ-fold tensor power, composed along `word`.
pub fn compose_r(w: &Rep, l: usize, word: &[usize], max_unknowns: usize) -> Result<SMat, FusionError> {
    let cd = w.cartan();
    let d = w.dim();
    let mut shifts = ladder(cd.fusion_k, l as i64);
    let n = d.pow(l as u32);
    let mut cache: HashMap<i32, SMat> = HashMap::new();
    let mut cols: Vec<SVec> = (0..n).map(SVec::unit).collect();
    for &p in word {
        let (a, b) = (shifts[p], shifts[p + 1]);
        if !cache.contains_key(&(a - b)) {
            cache.insert(a - b, solve_r(w, a, b, max_unknowns)?.mat);
        }
        let r = &cache[&(a - b)];
        log::info!("R_{l}: applying the factor at position {p} (shift difference {})", a - b);
        cols = cols.iter().map(|c| apply_local(r, p, l, d, c)).collect();
        shifts.swap(p, p + 1);
    }
    Ok(SMat { nrows: n, cols })
}

/// ℓ-fold product of the W¹ Gram on the tensor basis.
fn product_gram(g1: &Gram, rep1: &Rep, l: usize) -> (Gram, Vec<crate::cartan::Weight>) {
    let mut g = g1.clone();
    let mut wt = rep1.wt.clone();
    for _ in 1..l {
        let mut w2 = Vec::with_capacity(wt.len() * rep1.dim());
        for a in &wt {
            for b in &rep1.wt {
                w2.push(*a + *b);
            }
        }
        g = Gram::kron(&g, g1, &w2);
        wt = w2;
    }
    (g, wt)
}

/// Submodule spanned by `span` inside `target`, with the Gram
/// (x_j, x_k) = (t_j, x_k)_pairing where t_j is the twin (preimage) of x_j.
fn assemble(target: &Rep, span: &SpanBasis, pairing: &Gram, seed: &SVec, l: i64, provenance: Provenance) -> Result<KRModule, FusionError> {
    let mut rep = target.restrict(span, None);
    let v = span.coords(seed).ok_or_else(|| FusionError::Inconsistent("seed outside the image".into()))?;
    let mut gram = Gram::new(&rep.wt);
    let blocks = rep.blocks();
    for (bi, (w, idx)) in blocks.iter().enumerate() {
        log::info!("W^{l} Gram: weight block {}/{} {:?} of size {}", bi + 1, blocks.len(), w.0, idx.len());
        for &j in idx {
            for &k in idx {
                gram.set(j, k, pairing.pair(&span.twins[j], &span.vecs[k]));
            }
        }
    }
    if !gram.is_symmetric() {
        return Err(FusionError::Inconsistent("image Gram is not symmetric".into()));
    }
    rep.cyclic = v.lead().map(|(i, _)| i).filter(|_| v.len() == 1);
    Ok(KRModule { rep, v, gram, l, provenance })
}

/// Closure of `seed` in `target` under all generators, breadth first,
/// carrying preimages in `source` along.
pub fn closure_with_twins(target: &Rep, source: &Rep, seed: &SVec, twin: &SVec) -> SpanBasis {
    let mut span = SpanBasis::new();
    let mut queue = VecDeque::new();
    if span.add(seed, twin) {
        queue.push_back((seed.clone(), twin.clone()));
    }
    while let Some((x, t)) = queue.pop_front() {
        for &(g, i) in &ALL_GENS {
            let gx = target.act(g, i, &x);
            if gx.is_zero() {
                continue;
            }
            let gt = source.act(g, i, &t);
            if span.add(&gx, &gt) {
                if span.len() % 64 == 0 {
                    log::info!("closure: {} vectors", span.len());
                }
                queue.push_back((gx, gt));
            }
        }
    }
    span
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    /// compose full R-matrices along the staircase word
    Composition,
    /// generator closure of w^{⊗ℓ} in the image, preimages carried along
    Closure,
}

/// Default bound on unknowns in a single intertwiner solve.
pub const MAX_R_UNKNOWNS: usize = 4000;

/// W^ℓ as the image of R_ℓ.
pub fn fuse(w1: &KRModule, l: i64, route: Route) -> Result<KRModule, FusionError> {
    if l < 1 {
        return Err(FusionError::Precondition("level must be positive".into()));
    }
    if l == 1 {
        return Ok(w1.clone());
    }
    let cd = w1.rep.cartan();
    let lu = l as usize;
    let shifts = ladder(cd.fusion_k, l);
    let rev: Vec<i32> = shifts.iter().rev().copied().collect();
    let target = tensor_power(&w1.rep, &rev);
    let (pairing, _) = product_gram(&w1.gram, &w1.rep, lu);
    let d = w1.rep.dim();
    let mut seed = w1.v.clone();
    for _ in 1..lu {
        seed = kron(&seed, &w1.v, d);
    }
    let ech = match route {
        Route::Composition => {
            let r = compose_r(&w1.rep, lu, &staircase_word(lu), MAX_R_UNKNOWNS)?;
            let mut span = SpanBasis::new();
            for (j, c) in r.cols.iter().enumerate() {
                if j % 1024 == 0 {
                    log::info!("image of R_{l}: column {j}/{}, rank {}", r.cols.len(), span.len());
                }
                if !c.is_zero() {
                    span.add(c, &SVec::unit(j));
                }
            }
            span
        }
        Route::Closure => {
            let source = tensor_power(&w1.rep, &shifts);
            closure_with_twins(&target, &source, &seed, &seed)
        }
    };
    assemble(&target, &ech, &pairing, &seed, l, Provenance::Fused)
}

/// W^ℓ inside (W^{ℓ-1})_{q^{-k}} ⊗ (W¹)_{q^{k(ℓ-1)}}, generated by v_{ℓ-1} ⊗ v_1,
/// with preimages in (W^{ℓ-1})_{q^k} ⊗ (W¹)_{q^{-k(ℓ-1)}}.
pub fn kr_recursive(prev: &KRModule, w1: &KRModule) -> Result<KRModule, FusionError> {
    let l = prev.l + 1;
    let k = w1.rep.cartan().fusion_k;
    let (a, b) = (k as i32, (k * (l - 1)) as i32);
    let target = tensor_with_shifts(&prev.rep.twisted(-a), &w1.rep.twisted(b)).unwrap();
    let source = tensor_with_shifts(&prev.rep.twisted(a), &w1.rep.twisted(-b)).unwrap();
    let seed = kron(&prev.v, &w1.v, w1.rep.dim());
    let pairing = Gram::kron(&prev.gram, &w1.gram, &target.wt);
    let ech = closure_with_twins(&target, &source, &seed, &seed);
    assemble(&target, &ech, &pairing, &seed, l, Provenance::Recursive)
}

/// Composition for G2 (its R-matrices are small); closure for D4, whose
/// R_ℓ would act on 29^ℓ columns.
pub fn default_route(ty: AffineType) -> Route {
    match ty {
        AffineType::G2_1 => Route::Composition,
        AffineType::D4_3 => Route::Closure,
    }
}

/// Models W¹, ..., W^ℓ of one construction.
pub fn tower(ty: AffineType, l: i64, provenance: Provenance) -> Result<Vec<KRModule>, FusionError> {
    let w1 = kr1(ty)?;
    let mut out = vec![w1.clone()];
    for j in 2..=l {
        let m = match provenance {
            Provenance::Recursive => kr_recursive(out.last().unwrap(), &w1)?,
            Provenance::Fused => fuse(&w1, j, default_route(ty))?,
        };
        out.push(m);
    }
    Ok(out)
}

/// One term of a closed-form expansion: q^{exp} · [factor] · (e2?) e^{(b+db, c+dc, d+dd)} v ⊗ e^{right} w
struct Term {
    exp: [i64; 5],
    factor: Option<(i64, u32)>,
    e2: bool,
    shift: (i64, i64, i64),
    right: (i64, i64, i64),
}

const fn t(exp: [i64; 5], e2: bool, shift: (i64, i64, i64), right: (i64, i64, i64)) -> Term {
    Term { exp, factor: None, e2, shift, right }
}

// exponent = e[0] b + e[1] c + e[2] d + e[3] m + e[4]
const LEMMA_G: [Term; 5] = [
    t([0, -1, 3, 0, 0], false, (0, 0, 0), (0, 0, 0)),
    t([0, 0, 0, 1, 0], false, (-1, -2, -1), (1, 2, 1)),
    t([3, 0, 0, 1, 0], false, (0, -2, -1), (0, 2, 1)),
    t([0, 1, 0, 1, -1], false, (0, -1, -1), (0, 1, 1)),
    t([-3, 2, 0, 1, 0], false, (0, 0, -1), (0, 0, 1)),
];

const LEMMA_D_I: [Term; 12] = [
    t([0, -3, 3, 0, 0], false, (0, 0, 0), (0, 0, 0)),
    t([-1, 0, 2, 1, -2], false, (0, 0, -1), (0, 0, 1)),
    t([-2, 3, 1, 2, -2], false, (0, 0, -2), (0, 0, 2)),
    t([1, 0, 1, 2, -2], false, (0, -1, -2), (0, 1, 2)),
    t([0, 0, 1, 2, -2], false, (-1, -1, -2), (1, 1, 2)),
    t([-3, 6, 0, 3, 0], false, (0, 0, -3), (0, 0, 3)),
    t([0, 3, 0, 3, -3], false, (0, -1, -3), (0, 1, 3)),
    t([-1, 3, 0, 3, -2], false, (-1, -1, -3), (1, 1, 3)),
    t([3, 0, 0, 3, 0], false, (0, -2, -3), (0, 2, 3)),
    t([2, 0, 0, 3, -2], false, (-1, -2, -3), (1, 2, 3)),
    t([1, 0, 0, 3, -2], false, (-2, -2, -3), (2, 2, 3)),
    t([0, 0, 0, 3, 0], false, (-3, -2, -3), (3, 2, 3)),
];

const LEMMA_D_II: [Term; 17] = [
    t([0, -3, 3, 0, -3], true, (0, 0, 0), (0, 0, 0)),
    t([0, 0, 0, 3, 0], false, (-3, -2, -3), (0, 0, 0)),
    t([-1, 0, 2, 1, -2], true, (0, 0, -1), (0, 0, 1)),
    t([-2, 3, 1, 2, 1], true, (0, 0, -2), (0, 0, 2)),
    t([-2, 3, 1, 2, -2], false, (0, 0, -2), (0, 1, 2)),
    t([1, 0, 1, 2, -5], true, (0, -1, -2), (0, 1, 2)),
    t([0, 0, 1, 2, -2], true, (-1, -1, -2), (1, 1, 2)),
    t([-3, 6, 0, 3, 6], true, (0, 0, -3), (0, 0, 3)),
    t([-3, 6, 0, 3, 0], false, (0, 0, -3), (0, 1, 3)),
    t([0, 3, 0, 3, -3], true, (0, -1, -3), (0, 1, 3)),
    t([-1, 3, 0, 3, 1], true, (-1, -1, -3), (1, 1, 3)),
    Term { exp: [0, 3, 0, 3, -3], factor: Some((2, 3)), e2: false, shift: (0, -1, -3), right: (0, 2, 3) },
    t([3, 0, 0, 3, -6], true, (0, -2, -3), (0, 2, 3)),
    t([-1, 3, 0, 3, -2], false, (-1, -1, -3), (1, 2, 3)),
    t([2, 0, 0, 3, -5], true, (-1, -2, -3), (1, 2, 3)),
    t([1, 0, 0, 3, -2], true, (-2, -2, -3), (2, 2, 3)),
    t([0, 0, 0, 3, 3], true, (-3, -2, -3), (3, 2, 3)),
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Expansion {
    /// e^{(b,c,d)} (v ⊗ w_{q^m}), type G2(1)
    G,
    /// e^{(b,c,d)} (v ⊗ w_{q^m}), type D4(3)
    DI,
    /// e2 e^{(b,c,d)} (v ⊗ w_{q^m}), type D4(3)
    DII,
}

fn e_mono(rep: &Rep, v: &SVec, b: i64, c: i64, d: i64) -> SVec {
    if b < 0 || c < 0 || d < 0 {
        return SVec::zero();
    }
    rep.apply_e_monomial((0, b, c, d), v)
}

/// Compare both sides of a tensor expansion identity at one (b,c,d) and m.
/// Returns the difference (zero when the identity holds).
pub fn tensor_expansion_defect(prev: &KRModule, w1: &KRModule, which: Expansion, bcd: (i64, i64, i64), m: i32) -> SVec {
    let (b, c, d) = bcd;
    let tw = w1.rep.twisted(m);
    let t = tensor_with_shifts(&prev.rep, &tw).unwrap();
    let nb = w1.rep.dim();
    let seed = kron(&prev.v, &w1.v, nb);
    let mut lhs = e_mono(&t, &seed, b, c, d);
    if which == Expansion::DII {
        lhs = t.act(Gen::E, 2, &lhs);
    }
    let terms: &[Term] = match which {
        Expansion::G => &LEMMA_G,
        Expansion::DI => &LEMMA_D_I,
        Expansion::DII => &LEMMA_D_II,
    };
    let mut rhs = SVec::zero();
    for term in terms {
        let mut left = e_mono(&prev.rep, &prev.v, b + term.shift.0, c + term.shift.1, d + term.shift.2);
        if term.e2 {
            left = prev.rep.act(Gen::E, 2, &left);
        }
        if left.is_zero() {
            continue;
        }
        let right = e_mono(&w1.rep, &w1.v, term.right.0, term.right.1, term.right.2);
        if right.is_zero() {
            continue;
        }
        let e = term.exp;
        let pw = e[0] * b + e[1] * c + e[2] * d + e[3] * m as i64 + e[4];
        let mut coef = RatQ::qpow(pw as i32);
        if let Some((n, s)) = term.factor {
            coef = &coef * &RatQ::q_int(n, s);
        }
        rhs = rhs.axpy(&coef, &kron(&left, &right, nb));
    }
    lhs.sub(&rhs)
}

/// Every (b,c,d) in the box and m in `ms` at which the identity fails.
pub fn verify_tensor_expansion(
    prev: &KRModule,
    w1: &KRModule,
    which: Expansion,
    bound: (i64, i64, i64),
    ms: &[i32],
) -> Vec<((i64, i64, i64), i32)> {
    use rayon::prelude::*;
    let mut cases = Vec::new();
    for &m in ms {
        for b in 0..=bound.0 {
            for c in 0..=bound.1 {
                for d in 0..=bound.2 {
                    cases.push(((b, c, d), m));
                }
            }
        }
    }
    cases.into_par_iter().filter(|&(bcd, m)| !tensor_expansion_defect(prev, w1, which, bcd, m).is_zero()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn words_are_permutations_of_the_right_length() {
        assert_eq!(staircase_word(3), vec![0, 1, 0]);
        assert_eq!(mirrored_word(3), vec![1, 0, 1]);
        assert_eq!(staircase_word(4).len(), 6);
        assert_eq!(ladder(1, 3), vec![2, 0, -2]);
    }

    #[test]
    fn equal_shifts_give_identity() {
        let w = kr1(AffineType::G2_1).unwrap();
        let r = solve_r(&w.rep, 0, 0, 10).unwrap();
        assert_eq!(r.mat, SMat::identity(49));
    }

    #[test]
    fn wrong_order_is_rejected() {
        let w = kr1(AffineType::G2_1).unwrap();
        assert!(matches!(solve_r(&w.rep, -1, 1, 10_000), Err(FusionError::Precondition(_))));
    }

    #[test]
    fn trivial_expansion_case() {
        let w = kr1(AffineType::G2_1).unwrap();
        for m in [-3, 0, 2] {
            assert!(tensor_expansion_defect(&w, &w, Expansion::G, (0, 0, 0), m).is_zero());
        }
    }
}
