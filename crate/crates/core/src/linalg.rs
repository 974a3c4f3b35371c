//! Sparse exact linear algebra over Q(q).

use crate::qfield::RatQ;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Sparse vector: sorted (index, coefficient) pairs, no stored zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SVec(pub Vec<(usize, RatQ)>);

impl SVec {
    pub fn zero() -> SVec {
        SVec(Vec::new())
    }

    pub fn unit(i: usize) -> SVec {
        SVec(vec![(i, RatQ::one())])
    }

    pub fn single(i: usize, c: RatQ) -> SVec {
        if c.is_zero() {
            SVec::zero()
        } else {
            SVec(vec![(i, c)])
        }
    }

    /// Sum duplicate indices and drop zeros.
    pub fn from_terms(mut t: Vec<(usize, RatQ)>) -> SVec {
        if t.len() <= 1 {
            t.retain(|(_, c)| !c.is_zero());
            return SVec(t);
        }
        t.sort_by_key(|(i, _)| *i);
        let mut out: Vec<(usize, RatQ)> = Vec::with_capacity(t.len());
        for (i, c) in t {
            match out.last_mut() {
                Some((j, d)) if *j == i => *d = &*d + &c,
                _ => out.push((i, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        SVec(out)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> RatQ {
        match self.0.binary_search_by_key(&i, |(j, _)| *j) {
            Ok(k) => self.0[k].1.clone(),
            Err(_) => RatQ::zero(),
        }
    }

    pub fn lead(&self) -> Option<(usize, &RatQ)> {
        self.0.first().map(|(i, c)| (*i, c))
    }

    pub fn scale(&self, c: &RatQ) -> SVec {
        if c.is_zero() {
            return SVec::zero();
        }
        if c.is_one() {
            return self.clone();
        }
        SVec(self.0.iter().map(|(i, x)| (*i, x * c)).collect())
    }

    pub fn neg(&self) -> SVec {
        SVec(self.0.iter().map(|(i, x)| (*i, -x)).collect())
    }

    /// self + c * o
    pub fn axpy(&self, c: &RatQ, o: &SVec) -> SVec {
        if c.is_zero() || o.is_zero() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.0.len() + o.0.len());
        let (mut a, mut b) = (0, 0);
        while a < self.0.len() || b < o.0.len() {
            let ia = self.0.get(a).map(|x| x.0).unwrap_or(usize::MAX);
            let ib = o.0.get(b).map(|x| x.0).unwrap_or(usize::MAX);
            if ia < ib {
                out.push(self.0[a].clone());
                a += 1;
            } else if ib < ia {
                out.push((ib, c * &o.0[b].1));
                b += 1;
            } else {
                let s = &self.0[a].1 + &(c * &o.0[b].1);
                if !s.is_zero() {
                    out.push((ia, s));
                }
                a += 1;
                b += 1;
            }
        }
        SVec(out)
    }

    pub fn add(&self, o: &SVec) -> SVec {
        self.axpy(&RatQ::one(), o)
    }

    pub fn sub(&self, o: &SVec) -> SVec {
        self.axpy(&RatQ::int(-1), o)
    }

    pub fn dense(&self, n: usize) -> Vec<RatQ> {
        let mut d = vec![RatQ::zero(); n];
        for (i, c) in &self.0 {
            d[*i] = c.clone();
        }
        d
    }

    pub fn from_dense(d: &[RatQ]) -> SVec {
        SVec(d.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i, c.clone())).collect())
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().map(|(i, _)| *i)
    }
}

/// Sparse matrix stored by columns: `cols[j]` is the image of basis vector j.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SMat {
    pub nrows: usize,
    pub cols: Vec<SVec>,
}

impl SMat {
    pub fn zero(nrows: usize, ncols: usize) -> SMat {
        SMat { nrows, cols: vec![SVec::zero(); ncols] }
    }

    pub fn identity(n: usize) -> SMat {
        SMat { nrows: n, cols: (0..n).map(SVec::unit).collect() }
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn apply(&self, v: &SVec) -> SVec {
        let mut terms = Vec::new();
        for (j, c) in &v.0 {
            for (i, x) in &self.cols[*j].0 {
                terms.push((*i, c * x));
            }
        }
        SVec::from_terms(terms)
    }

    /// self ∘ o
    pub fn compose(&self, o: &SMat) -> SMat {
        SMat { nrows: self.nrows, cols: o.cols.iter().map(|c| self.apply(c)).collect() }
    }

    pub fn scale(&self, c: &RatQ) -> SMat {
        SMat { nrows: self.nrows, cols: self.cols.iter().map(|v| v.scale(c)).collect() }
    }

    /// self + c * o
    pub fn axpy(&self, c: &RatQ, o: &SMat) -> SMat {
        SMat { nrows: self.nrows, cols: self.cols.iter().zip(&o.cols).map(|(a, b)| a.axpy(c, b)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.is_zero())
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(|c| c.len()).sum()
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &RatQ)> {
        self.cols.iter().enumerate().flat_map(|(j, c)| c.0.iter().map(move |(i, x)| (*i, j, x)))
    }

    pub fn from_entries(nrows: usize, ncols: usize, ent: Vec<(usize, usize, RatQ)>) -> SMat {
        let mut cols: Vec<Vec<(usize, RatQ)>> = vec![Vec::new(); ncols];
        for (i, j, x) in ent {
            cols[j].push((i, x));
        }
        SMat { nrows, cols: cols.into_iter().map(SVec::from_terms).collect() }
    }
}

/// Row echelon form built incrementally. Each stored row has coefficient 1
/// at its pivot and no entries at smaller indices. An optional twin vector
/// is carried through every row operation.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: BTreeMap<usize, (SVec, SVec)>,
}

pub enum Reduced {
    /// reduced to zero; the twin residue and the coordinates used
    Dependent { twin: SVec, coords: Vec<(usize, RatQ)> },
    /// a new pivot row was inserted at the given pivot
    Inserted(usize),
}

impl Echelon {
    pub fn new() -> Echelon {
        Echelon::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    pub fn row(&self, p: usize) -> Option<&(SVec, SVec)> {
        self.rows.get(&p)
    }

    pub fn rows(&self) -> impl Iterator<Item = (usize, &(SVec, SVec))> {
        self.rows.iter().map(|(k, v)| (*k, v))
    }

    /// Reduce v (and its twin) against the stored rows.
    /// Returns the residue pair and the multiples subtracted, by pivot.
    pub fn reduce(&self, v: &SVec, twin: &SVec) -> (SVec, SVec, Vec<(usize, RatQ)>) {
        let mut v = v.clone();
        let mut t = twin.clone();
        let mut coords = Vec::new();
        let mut from = 0usize;
        loop {
            let next = v.0.iter().find(|(i, _)| *i >= from && self.rows.contains_key(i)).map(|(i, c)| (*i, c.clone()));
            let Some((p, c)) = next else { break };
            let (r, rt) = &self.rows[&p];
            let m = -&c;
            v = v.axpy(&m, r);
            if !rt.is_zero() {
                t = t.axpy(&m, rt);
            }
            coords.push((p, c));
            from = p + 1;
        }
        (v, t, coords)
    }

    /// Reduce and insert if independent.
    pub fn insert(&mut self, v: &SVec, twin: &SVec) -> Reduced {
        let (r, t, coords) = self.reduce(v, twin);
        match r.lead() {
            None => Reduced::Dependent { twin: t, coords },
            Some((p, c)) => {
                let inv = c.inv().expect("nonzero lead");
                let (r, t) = (r.scale(&inv), t.scale(&inv));
                self.rows.insert(p, (r, t));
                Reduced::Inserted(p)
            }
        }
    }

    /// Coordinates of v in terms of the stored rows (by pivot), if v lies in their span.
    pub fn coords(&self, v: &SVec) -> Option<Vec<(usize, RatQ)>> {
        let (r, _, c) = self.reduce(v, &SVec::zero());
        if r.is_zero() {
            Some(c)
        } else {
            None
        }
    }

    /// Back-substitute so every row is zero at every other pivot.
    pub fn fully_reduce(&mut self) {
        let keys: Vec<usize> = self.rows.keys().rev().copied().collect();
        for &p in &keys {
            let (mut r, mut t) = self.rows[&p].clone();
            let hits: Vec<(usize, RatQ)> =
                r.0.iter().filter(|(i, _)| *i != p && self.rows.contains_key(i)).map(|(i, c)| (*i, c.clone())).collect();
            for (q, c) in hits {
                let (rq, tq) = &self.rows[&q];
                let m = -&c;
                r = r.axpy(&m, rq);
                t = t.axpy(&m, tq);
            }
            self.rows.insert(p, (r, t));
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveError {
    Inconsistent,
}

/// Solve the sparse system rows · x = rhs. Returns a particular solution and
/// a basis of the nullspace.
pub fn solve(rows: &[SVec], rhs: &[RatQ], nvars: usize) -> Result<(Vec<RatQ>, Vec<Vec<RatQ>>), SolveError> {
    let mut ech = Echelon::new();
    for (r, b) in rows.iter().zip(rhs) {
        let mut v = r.clone();
        if !b.is_zero() {
            v.0.push((nvars, b.clone()));
        }
        if let Reduced::Inserted(p) = ech.insert(&v, &SVec::zero()) {
            if p == nvars {
                return Err(SolveError::Inconsistent);
            }
        }
    }
    ech.fully_reduce();
    let pivots: Vec<usize> = ech.pivots().collect();
    let is_pivot = {
        let mut m = vec![false; nvars];
        for &p in &pivots {
            m[p] = true;
        }
        m
    };
    let mut x = vec![RatQ::zero(); nvars];
    for &p in &pivots {
        x[p] = ech.row(p).unwrap().0.get(nvars);
    }
    let mut null = Vec::new();
    for fcol in (0..nvars).filter(|&j| !is_pivot[j]) {
        let mut n = vec![RatQ::zero(); nvars];
        n[fcol] = RatQ::one();
        for &p in &pivots {
            n[p] = -ech.row(p).unwrap().0.get(fcol);
        }
        null.push(n);
    }
    Ok((x, null))
}

pub fn nullspace(rows: &[SVec], nvars: usize) -> Vec<Vec<RatQ>> {
    let rhs = vec![RatQ::zero(); rows.len()];
    solve(rows, &rhs, nvars).expect("homogeneous systems are consistent").1
}

/// Pivots of Gaussian elimination without row exchanges on a dense
/// symmetric matrix; None if a zero pivot appears.
pub fn leading_pivots(m: &[Vec<RatQ>]) -> Option<Vec<RatQ>> {
    let n = m.len();
    let mut a: Vec<Vec<RatQ>> = m.to_vec();
    let mut piv = Vec::with_capacity(n);
    for k in 0..n {
        let p = a[k][k].clone();
        if p.is_zero() {
            return None;
        }
        let inv = p.inv().unwrap();
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] * &inv;
            for j in k..n {
                if !a[k][j].is_zero() {
                    a[i][j] = &a[i][j] - &(&f * &a[k][j]);
                }
            }
        }
        piv.push(p);
    }
    Some(piv)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> RatQ {
        s.parse().unwrap()
    }

    #[test]
    fn solve_small_system() {
        // x0 + q x1 = 1, x1 - x2 = 0
        let rows = vec![
            SVec(vec![(0, RatQ::one()), (1, RatQ::qpow(1))]),
            SVec(vec![(1, RatQ::one()), (2, RatQ::int(-1))]),
        ];
        let (x, null) = solve(&rows, &[RatQ::one(), RatQ::zero()], 3).unwrap();
        assert_eq!(null.len(), 1);
        assert_eq!(&x[0] + &(RatQ::qpow(1) * x[1].clone()), RatQ::one());
        let n = &null[0];
        assert!((&n[0] + &(RatQ::qpow(1) * n[1].clone())).is_zero());
        assert_eq!(n[1], n[2]);
    }

    #[test]
    fn inconsistent_system() {
        let rows = vec![SVec::unit(0), SVec(vec![(0, r("1+q"))])];
        assert_eq!(solve(&rows, &[RatQ::one(), RatQ::one()], 1), Err(SolveError::Inconsistent));
    }

    #[test]
    fn echelon_twin_tracking() {
        let mut e = Echelon::new();
        let a = SVec(vec![(0, RatQ::one()), (1, RatQ::int(2))]);
        let b = SVec(vec![(1, RatQ::qpow(1))]);
        e.insert(&a, &SVec::unit(5));
        e.insert(&b, &SVec::unit(6));
        let v = a.scale(&RatQ::int(3)).add(&b);
        match e.insert(&v, &SVec(vec![(5, RatQ::int(3)), (6, RatQ::one())])) {
            Reduced::Dependent { twin, .. } => assert!(twin.is_zero()),
            _ => panic!("should be dependent"),
        }
        assert_eq!(e.rank(), 2);
    }

    #[test]
    fn pivots_of_diagonal() {
        let m = vec![vec![RatQ::one(), RatQ::zero()], vec![RatQ::zero(), r("1+q^2")]];
        assert_eq!(leading_pivots(&m).unwrap()[1], r("1+q^2"));
    }
}
