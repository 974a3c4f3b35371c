//! Kashiwara operators, the crystal lattice generated from v_ℓ, the
//! pseudobase mod qL, and graph export.

use crate::cartan::Weight;
use crate::fusion::KRModule;
use crate::qfield::RatQ;
use crate::linalg::{SMat, SVec};
use crate::repcore::{Gen, Gram, Rep};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dir {
    Raise,
    Lower,
}

/// Split v into weight components.
fn by_weight(rep: &Rep, v: &SVec) -> BTreeMap<Weight, SVec> {
    let mut parts: BTreeMap<Weight, Vec<(usize, RatQ)>> = BTreeMap::new();
    for (k, x) in &v.0 {
        parts.entry(rep.wt[*k]).or_default().push((*k, x.clone()));
    }
    parts.into_iter().map(|(w, t)| (w, SVec(t))).collect()
}

/// v = Σ_k f_i^{(k)} u_k with e_i u_k = 0, for a weight vector v. Returns
/// (k, f-chain of u_k up to f^{(k+1)} u_k).
fn strings(rep: &Rep, i: usize, v: &SVec) -> Vec<(i64, Vec<SVec>)> {
    let s = rep.cartan().s[i];
    let Some(wt) = rep.weight_of(v) else { return vec![] };
    let n = wt.0[i];
    // chain[j] = e_i^{(j)} v
    let mut chain = vec![v.clone()];
    loop {
        let j = chain.len() as i64;
        let next = rep.act(Gen::E, i, chain.last().unwrap()).scale(&RatQ::q_int(j, s).inv().unwrap());
        if next.is_zero() {
            break;
        }
        chain.push(next);
    }
    let mut out = Vec::new();
    for k in (0..chain.len() as i64).rev() {
        let top = &chain[k as usize];
        if top.is_zero() {
            continue;
        }
        // e^{(k)} f^{(k)} u = [n_u choose k] u with n_u = n + 2k
        let u = top.scale(&RatQ::q_binom(n + 2 * k, k, s).inv().expect("nonzero binomial"));
        let mut fs = vec![u];
        for m in 1..=k + 1 {
            let x = rep.act(Gen::F, i, fs.last().unwrap()).scale(&RatQ::q_int(m, s).inv().unwrap());
            fs.push(x);
        }
        // e^{(j)} f^{(k)} u = [n_u - k + j choose j] f^{(k-j)} u
        for j in 0..=k {
            let c = RatQ::q_binom(n + k + j, j, s);
            let idx = (k - j) as usize;
            chain[j as usize] = chain[j as usize].axpy(&-&c, &fs[idx]);
        }
        out.push((k, fs));
    }
    out
}

/// v = Σ_k f_i^{(k)} u_k with e_i u_k = 0, for a weight vector v.
pub fn string_decomposition(rep: &Rep, i: usize, v: &SVec) -> Vec<(i64, SVec)> {
    strings(rep, i, v).into_iter().map(|(k, fs)| (k, fs[0].clone())).collect()
}

/// (ẽ_i v, f̃_i v) from one decomposition.
fn kashiwara_both(rep: &Rep, i: usize, v: &SVec) -> (SVec, SVec) {
    let (mut up, mut down) = (SVec::zero(), SVec::zero());
    for (_, part) in by_weight(rep, v) {
        for (k, fs) in strings(rep, i, &part) {
            let k = k as usize;
            if k >= 1 {
                up = up.add(&fs[k - 1]);
            }
            down = down.add(&fs[k + 1]);
        }
    }
    (up, down)
}

/// ẽ_i or f̃_i.
pub fn kashiwara(rep: &Rep, i: usize, dir: Dir, v: &SVec) -> SVec {
    let (up, down) = kashiwara_both(rep, i, v);
    match dir {
        Dir::Raise => up,
        Dir::Lower => down,
    }
}

/// Matrices of ẽ_i (index [i][0]) and f̃_i (index [i][1]); both are
/// Q(q)-linear.
pub fn kashiwara_matrices(rep: &Rep) -> Vec<[SMat; 2]> {
    let n = rep.dim();
    (0..3)
        .map(|i| {
            log::info!("Kashiwara operators for i = {i}");
            let (mut e, mut f) = (SMat::zero(n, n), SMat::zero(n, n));
            for k in 0..n {
                let (up, down) = kashiwara_both(rep, i, &SVec::unit(k));
                e.cols[k] = up;
                f.cols[k] = down;
            }
            [e, f]
        })
        .collect()
}

/// An orthogonal A-basis b_k of each weight space with norms N_k of
/// valuation 0 or 1, and dual vectors d_k = G b_k / N_k, so that the k-th
/// coordinate of x is x · d_k.
#[derive(Clone, Debug, Default)]
pub struct LatticeBasis {
    pub blocks: BTreeMap<Weight, Vec<LatticeVector>>,
}

#[derive(Clone, Debug)]
pub struct LatticeVector {
    pub b: SVec,
    pub norm: RatQ,
    dual: SVec,
}

fn dot(x: &SVec, y: &SVec) -> RatQ {
    let mut acc = RatQ::zero();
    let (mut i, mut j) = (0, 0);
    while i < x.0.len() && j < y.0.len() {
        match x.0[i].0.cmp(&y.0[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                acc = &acc + &(&x.0[i].1 * &y.0[j].1);
                i += 1;
                j += 1;
            }
        }
    }
    acc
}

fn gram_apply(gram: &Gram, idx: &[usize], b: &SVec) -> SVec {
    SVec::from_terms(idx.iter().map(|&k| (k, gram.pair(&SVec::unit(k), b))).collect())
}

impl LatticeBasis {
    /// L = {u : (u,u) ∈ A}, by Gram-Schmidt in each weight block. Since the
    /// pairing is positive, val (u,u) = min_k (2 val c_k + val n_k) for
    /// u = Σ c_k u*_k, so L has the A-basis q^{⌈-val n_k / 2⌉} u*_k.
    pub fn polarization(rep: &Rep, gram: &Gram) -> Result<LatticeBasis, CrystalError> {
        let mut blocks = BTreeMap::new();
        for (w, idx) in rep.blocks() {
            let mut orth: Vec<LatticeVector> = Vec::new();
            for &k in &idx {
                let mut u = SVec::unit(k);
                for lv in &orth {
                    let c = lv.dual.get(k);
                    if !c.is_zero() {
                        u = u.axpy(&-&c, &lv.b);
                    }
                }
                let gu = gram_apply(gram, &idx, &u);
                let n = dot(&u, &gu);
                if !n.is_positive() {
                    return Err(CrystalError::NotPositive(w));
                }
                let s = (-n.val().unwrap()).div_euclid(2) + (-n.val().unwrap()).rem_euclid(2);
                let q = RatQ::qpow(s);
                let norm = n.shift(2 * s);
                let dual = gu.scale(&q.div(&norm).unwrap());
                orth.push(LatticeVector { b: u.scale(&q), norm, dual });
            }
            blocks.insert(w, orth);
        }
        Ok(LatticeBasis { blocks })
    }

    pub fn coords(&self, wt: Weight, v: &SVec) -> Option<Vec<RatQ>> {
        Some(self.blocks.get(&wt)?.iter().map(|lv| dot(v, &lv.dual)).collect())
    }

    pub fn contains(&self, rep: &Rep, v: &SVec) -> bool {
        by_weight(rep, v).into_iter().all(|(w, part)| {
            self.coords(w, &part).is_some_and(|c| c.iter().all(|x| x.val().map_or(true, |k| k >= 0)))
        })
    }

    pub fn rank(&self) -> usize {
        self.blocks.values().map(|b| b.len()).sum()
    }

    pub fn vectors(&self) -> impl Iterator<Item = &LatticeVector> {
        self.blocks.values().flatten()
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CrystalError {
    #[error("pairing is not positive on the weight space {0:?}")]
    NotPositive(Weight),
    #[error("v_ℓ does not lie in the lattice")]
    SeedOutside,
}

/// The lattice {u : (u,u) ∈ A}. It contains v_ℓ, and once it is shown to
/// be stable under all ẽ_i, f̃_i with dim-many orthonormal Kashiwara
/// monomial classes, Nakayama identifies it with the A-span of the
/// Kashiwara monomials applied to v_ℓ.
pub fn crystal_lattice(m: &KRModule) -> Result<LatticeBasis, CrystalError> {
    let lat = LatticeBasis::polarization(&m.rep, &m.gram)?;
    if !lat.contains(&m.rep, &m.v) {
        return Err(CrystalError::SeedOutside);
    }
    Ok(lat)
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct Node {
    pub id: usize,
    pub weight: Weight,
    pub sign: i8,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq, PartialOrd, Ord)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub i: usize,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq, Eq)]
pub struct CrystalGraph {
    pub nodes: Vec<Node>,
    pub edges: Vec<Edge>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CrystalReport {
    pub dim: usize,
    pub nodes: usize,
    pub lattice_rank: usize,
    pub weight_graded: bool,
    pub closed_under_operators: bool,
    pub edge_axiom: bool,
    pub pseudobase_split: bool,
    pub self_pairing_one: bool,
    pub orthonormal_mod_q: bool,
    pub lattice_norms_in_a: bool,
    pub pass: bool,
}

pub struct Pseudobase {
    pub lattice: LatticeBasis,
    pub graph: CrystalGraph,
    /// representative in L of each node
    pub reps: Vec<SVec>,
    pub report: CrystalReport,
}

fn const_at_zero(x: &RatQ) -> RatQ {
    let (n, d) = x.at_zero().expect("in A");
    RatQ::from_int(n).div(&RatQ::from_int(d)).unwrap()
}

/// The lattice, the classes of Kashiwara monomials on v_ℓ mod qL up to
/// sign, and the crystal graph, with the axioms checked exhaustively.
/// Classes are handled as rational coordinate vectors in the orthogonal
/// lattice basis, where ẽ_i, f̃_i act at q = 0 by rational matrices.
pub fn extract_pseudobase(m: &KRModule) -> Result<Pseudobase, CrystalError> {
    let rep = &m.rep;
    let lat = crystal_lattice(m)?;
    let n = rep.dim();
    let mut offset = BTreeMap::new();
    let mut flat: Vec<(Weight, &LatticeVector)> = Vec::new();
    for (w, vs) in &lat.blocks {
        offset.insert(*w, flat.len());
        flat.extend(vs.iter().map(|lv| (*w, lv)));
    }
    let lcoords = |x: &SVec| -> Option<Vec<(usize, RatQ)>> {
        let mut out = Vec::new();
        for (w, part) in by_weight(rep, x) {
            let c = lat.coords(w, &part)?;
            out.extend(c.into_iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(k, x)| (offset[&w] + k, x)));
        }
        Some(out)
    };
    // ẽ_i, f̃_i in lattice coordinates; L is stable iff all entries lie in A
    let km = kashiwara_matrices(rep);
    let mut closed = true;
    let mut weight_graded = true;
    let mut ops0: Vec<[SMat; 2]> = vec![[SMat::zero(n, n), SMat::zero(n, n)]; 3];
    for (j, (_, lv)) in flat.iter().enumerate() {
        for i in 0..3 {
            for d in 0..2 {
                let x = km[i][d].apply(&lv.b);
                weight_graded &= by_weight(rep, &x).len() <= 1;
                let c = lcoords(&x).expect("weight spaces are spanned");
                closed &= c.iter().all(|(_, x)| x.val().is_some_and(|v| v >= 0));
                ops0[i][d].cols[j] = SVec::from_terms(
                    c.iter().filter(|(_, x)| x.val() == Some(0)).map(|(k, x)| (*k, const_at_zero(x))).collect(),
                );
            }
        }
    }
    let n0: Vec<RatQ> = flat.iter().map(|(_, lv)| const_at_zero(&lv.norm)).collect();
    let weight_of = |c: &SVec| flat[c.lead().unwrap().0].0;
    let pair0 = |x: &SVec, y: &SVec| {
        let mut acc = RatQ::zero();
        for (k, a) in &x.0 {
            let b = y.get(*k);
            if !b.is_zero() {
                acc = &acc + &(&(a * &b) * &n0[*k]);
            }
        }
        acc
    };
    let seed = lcoords(&m.v).ok_or(CrystalError::SeedOutside)?;
    if seed.iter().any(|(_, x)| x.val().map_or(false, |v| v < 0)) {
        return Err(CrystalError::SeedOutside);
    }
    let c0 = SVec::from_terms(seed.iter().filter(|(_, x)| x.val() == Some(0)).map(|(k, x)| (*k, const_at_zero(x))).collect());
    let mut classes: HashMap<SVec, (usize, i8)> = HashMap::new();
    let mut cls: Vec<SVec> = Vec::new();
    let mut nodes = Vec::new();
    let mut edges = Vec::new();
    // (node, i, lower) -> signed target, None for zero
    let mut action: BTreeMap<(usize, usize, bool), Option<(usize, i8)>> = BTreeMap::new();
    if !c0.is_zero() {
        classes.insert(c0.neg(), (0, -1));
        classes.insert(c0.clone(), (0, 1));
        nodes.push(Node { id: 0, weight: weight_of(&c0), sign: 1 });
        cls.push(c0);
    }
    let mut k = 0;
    while k < cls.len() {
        for i in 0..3 {
            for d in 0..2 {
                let x = ops0[i][d].apply(&cls[k]);
                let tgt = if x.is_zero() {
                    None
                } else if let Some(&t) = classes.get(&x) {
                    Some(t)
                } else {
                    let id = cls.len();
                    classes.insert(x.neg(), (id, -1));
                    classes.insert(x.clone(), (id, 1));
                    nodes.push(Node { id, weight: weight_of(&x), sign: 1 });
                    cls.push(x);
                    Some((id, 1))
                };
                action.insert((k, i, d == 1), tgt);
                if let (1, Some((t, _))) = (d, tgt) {
                    edges.push(Edge { from: k, to: t, i });
                }
            }
        }
        k += 1;
    }
    edges.sort();
    // (iv) holds by construction once L is stable: every image of a node is
    // 0 or ± a node. (v): f̃_i b = ±b' iff ẽ_i b' = ±b with the same sign.
    let mut edge_axiom = true;
    for (&(b, i, lower), &t) in &action {
        if let Some((b2, s)) = t {
            if action.get(&(b2, i, !lower)) != Some(&Some((b, s))) {
                edge_axiom = false;
            }
        }
    }
    weight_graded &= cls.iter().all(|c| c.0.iter().all(|(k, _)| flat[*k].0 == weight_of(c)));
    let mut self_one = true;
    let mut ortho = true;
    for (a, x) in cls.iter().enumerate() {
        for (b, y) in cls.iter().enumerate().skip(a) {
            if nodes[a].weight != nodes[b].weight {
                continue;
            }
            let p = pair0(x, y);
            if a == b {
                self_one &= p.is_one();
            } else {
                ortho &= p.is_zero();
            }
        }
    }
    // B′ and -B′ are disjoint
    let split = classes.len() == 2 * cls.len();
    let norms_in_a = lat.vectors().all(|lv| lv.norm.val().is_some_and(|v| v >= 0));
    let reps: Vec<SVec> = cls
        .iter()
        .map(|c| c.0.iter().fold(SVec::zero(), |acc, (k, x)| acc.axpy(x, &flat[*k].1.b)))
        .collect();
    let report = CrystalReport {
        dim: n,
        nodes: cls.len(),
        lattice_rank: lat.rank(),
        weight_graded,
        closed_under_operators: closed,
        edge_axiom,
        pseudobase_split: split,
        self_pairing_one: self_one,
        orthonormal_mod_q: ortho,
        lattice_norms_in_a: norms_in_a,
        pass: cls.len() == n && weight_graded && closed && edge_axiom && split && self_one && ortho && norms_in_a,
    };
    Ok(Pseudobase { lattice: lat, graph: CrystalGraph { nodes, edges }, reps, report })
}

impl CrystalGraph {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("graph serializes")
    }

    pub fn from_json(s: &str) -> Result<CrystalGraph, serde_json::Error> {
        serde_json::from_str(s)
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph crystal {\n");
        for n in &self.nodes {
            let w = n.weight.0;
            s.push_str(&format!("  n{} [label=\"{}: ({},{},{})\"];\n", n.id, n.id, w[0], w[1], w[2]));
        }
        for e in &self.edges {
            s.push_str(&format!("  n{} -> n{} [label=\"{}\"];\n", e.from, e.to, e.i));
        }
        s.push_str("}\n");
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::AffineType;
    use crate::fusion::kr1;

    #[test]
    fn operators_on_the_seven_dimensional_module() {
        let w = kr1(AffineType::G2_1).unwrap();
        for i in 1..=2 {
            assert!(kashiwara(&w.rep, i, Dir::Raise, &SVec::unit(0)).is_zero());
        }
        assert_eq!(kashiwara(&w.rep, 2, Dir::Lower, &SVec::unit(2)), SVec::unit(3));
        // f̃2 0 = 3bar although f2 0 = [2] 3bar
        assert_eq!(kashiwara(&w.rep, 2, Dir::Lower, &SVec::unit(3)), SVec::unit(4));
        assert_eq!(kashiwara(&w.rep, 2, Dir::Raise, &SVec::unit(4)), SVec::unit(3));
    }

    #[test]
    fn graph_of_w1() {
        let w = kr1(AffineType::G2_1).unwrap();
        let p = extract_pseudobase(&w).unwrap();
        assert!(p.report.pass, "{:?}", p.report);
        assert_eq!(p.graph.nodes.len(), 7);
        assert!(p.graph.edges.iter().all(|e| e.i <= 2));
        let back = CrystalGraph::from_json(&p.graph.to_json()).unwrap();
        assert_eq!(back, p.graph);
        assert_eq!(p.graph.to_dot().matches("->").count(), p.graph.edges.len());
    }

    #[test]
    fn empty_graph_exports() {
        let g = CrystalGraph::default();
        assert_eq!(g.to_dot(), "digraph crystal {\n}\n");
        assert_eq!(CrystalGraph::from_json(&g.to_json()).unwrap(), g);
    }
}
