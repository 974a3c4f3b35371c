//! Cartan data for G2(1) and D4(3), and weights in P_cl as coroot triples.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AffineType {
    #[serde(rename = "G2_1")]
    G2_1,
    #[serde(rename = "D4_3")]
    D4_3,
}

impl AffineType {
    pub const ALL: [AffineType; 2] = [AffineType::G2_1, AffineType::D4_3];

    pub fn cli_name(self) -> &'static str {
        match self {
            AffineType::G2_1 => "g2-1",
            AffineType::D4_3 => "d4-3",
        }
    }
}

impl fmt::Display for AffineType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AffineType::G2_1 => "G2_1",
            AffineType::D4_3 => "D4_3",
        })
    }
}

impl FromStr for AffineType {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "g2-1" => Ok(AffineType::G2_1),
            "d4-3" => Ok(AffineType::D4_3),
            _ => Err(format!("unknown affine type '{s}' (expected g2-1 or d4-3)")),
        }
    }
}

/// (<h0,λ>, <h1,λ>, <h2,λ>)
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Weight(pub [i64; 3]);

impl Weight {
    pub const ZERO: Weight = Weight([0, 0, 0]);

    pub fn pairing(&self, i: usize) -> i64 {
        self.0[i]
    }

    pub fn scale(&self, k: i64) -> Weight {
        Weight([self.0[0] * k, self.0[1] * k, self.0[2] * k])
    }

    pub fn classical(&self) -> (i64, i64) {
        (self.0[1], self.0[2])
    }

    pub fn dominant_classical(&self) -> bool {
        self.0[1] >= 0 && self.0[2] >= 0
    }
}

impl Add for Weight {
    type Output = Weight;
    fn add(self, o: Weight) -> Weight {
        Weight([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }
}

impl Sub for Weight {
    type Output = Weight;
    fn sub(self, o: Weight) -> Weight {
        Weight([self.0[0] - o.0[0], self.0[1] - o.0[1], self.0[2] - o.0[2]])
    }
}

impl Neg for Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        self.scale(-1)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.0[0], self.0[1], self.0[2])
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CartanData {
    pub ty: AffineType,
    pub cartan: [[i64; 3]; 3],
    /// q_i = q^{s_i}
    pub s: [u32; 3],
    /// classical (ϖ1, ϖ2)-coordinates of α0, α1, α2
    pub root_cl: [[i64; 2]; 3],
    /// <h0, ϖ1>, <h0, ϖ2>
    pub h0_pairings: [i64; 2],
    pub fusion_k: i64,
}

impl CartanData {
    pub fn new(ty: AffineType) -> CartanData {
        let (cartan, s, root_cl) = match ty {
            AffineType::G2_1 => (
                [[2, -1, 0], [-1, 2, -1], [0, -3, 2]],
                [3, 3, 1],
                [[-1, 0], [2, -3], [-1, 2]],
            ),
            AffineType::D4_3 => (
                [[2, -1, 0], [-1, 2, -3], [0, -1, 2]],
                [1, 1, 3],
                [[-1, 0], [2, -1], [-3, 2]],
            ),
        };
        let h0_pairings = derive_h0_pairings(&cartan, &root_cl);
        // k = (α2,α2)/2 = s2 for G2(1); twisted types use 1
        let fusion_k = match ty {
            AffineType::G2_1 => s[2] as i64,
            AffineType::D4_3 => 1,
        };
        CartanData { ty, cartan, s, root_cl, h0_pairings, fusion_k }
    }

    /// Coroot triple of a level-zero weight from its classical coordinates.
    pub fn weight_from_classical(&self, m1: i64, m2: i64) -> Weight {
        Weight([m1 * self.h0_pairings[0] + m2 * self.h0_pairings[1], m1, m2])
    }

    /// cl(α_j) as a triple, recomputed from root_cl and h0_pairings.
    pub fn alpha(&self, j: usize) -> Weight {
        let [a, b] = self.root_cl[j];
        self.weight_from_classical(a, b)
    }

    pub fn varpi2(&self) -> Weight {
        self.weight_from_classical(0, 1)
    }

    pub fn varpi1(&self) -> Weight {
        self.weight_from_classical(1, 0)
    }

    /// Exponent e with t_i acting on weight λ as q^e.
    pub fn t_exp(&self, i: usize, wt: &Weight) -> i32 {
        (self.s[i] as i64 * wt.0[i]) as i32
    }

    /// Every failed structural invariant, as text.
    pub fn invariant_violations(&self) -> Vec<String> {
        let mut bad = Vec::new();
        let c = &self.cartan;
        for i in 0..3 {
            if c[i][i] != 2 {
                bad.push(format!("c_{i}{i} = {} != 2", c[i][i]));
            }
            for j in 0..3 {
                if i != j && c[i][j] > 0 {
                    bad.push(format!("c_{i}{j} = {} > 0", c[i][j]));
                }
                if self.s[i] as i64 * c[i][j] != self.s[j] as i64 * c[j][i] {
                    bad.push(format!("s_{i} c_{i}{j} != s_{j} c_{j}{i}"));
                }
            }
        }
        for j in 0..3 {
            let a = self.alpha(j);
            for i in 0..3 {
                if a.0[i] != c[i][j] {
                    bad.push(format!("<h_{i}, cl(α_{j})> = {} but c_{i}{j} = {}", a.0[i], c[i][j]));
                }
            }
        }
        bad
    }

    /// SHA-256 over the serialized tables; part of every cache key.
    pub fn table_hash(&self) -> String {
        let mut h = Sha256::new();
        h.update(serde_json::to_vec(self).expect("cartan data serializes"));
        hex::encode(h.finalize())
    }
}

/// Express ϖ1, ϖ2 in the classical α1, α2 basis and apply row 0 of the
/// Cartan matrix.
fn derive_h0_pairings(cartan: &[[i64; 3]; 3], root_cl: &[[i64; 2]; 3]) -> [i64; 2] {
    // columns: α1, α2 in ϖ-coordinates
    let m = [[root_cl[1][0], root_cl[2][0]], [root_cl[1][1], root_cl[2][1]]];
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    assert!(det == 1 || det == -1, "classical root matrix not unimodular");
    let inv = [[m[1][1] * det, -m[0][1] * det], [-m[1][0] * det, m[0][0] * det]];
    // ϖ_k = Σ_j inv[j][k] α_{j+1}
    let mut out = [0; 2];
    for (k, o) in out.iter_mut().enumerate() {
        *o = inv[0][k] * cartan[0][1] + inv[1][k] * cartan[0][2];
    }
    out
}

/// The 2x2 change of basis (α1, α2) -> (ϖ1, ϖ2) and its integer inverse.
pub fn classical_change_of_basis(cd: &CartanData) -> ([[i64; 2]; 2], [[i64; 2]; 2]) {
    let m = [[cd.root_cl[1][0], cd.root_cl[2][0]], [cd.root_cl[1][1], cd.root_cl[2][1]]];
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let inv = [[m[1][1] * det, -m[0][1] * det], [-m[1][0] * det, m[0][0] * det]];
    (m, inv)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tables_pass_invariants() {
        for t in AffineType::ALL {
            let cd = CartanData::new(t);
            assert!(cd.invariant_violations().is_empty(), "{t}: {:?}", cd.invariant_violations());
            assert_eq!(cd.alpha(0).pairing(0), 2);
            assert_eq!(cd.fusion_k, 1);
        }
    }

    #[test]
    fn derived_h0_pairings() {
        let g = CartanData::new(AffineType::G2_1);
        assert_eq!(g.s, [3, 3, 1]);
        assert_eq!(g.h0_pairings, [-2, -1]);
        assert_eq!(g.alpha(2), Weight([0, -1, 2]));
        let d = CartanData::new(AffineType::D4_3);
        assert_eq!(d.s, [1, 1, 3]);
        assert_eq!(d.h0_pairings, [-2, -3]);
        assert_eq!(d.alpha(1), Weight([-1, 2, -1]));
    }

    #[test]
    fn change_of_basis_is_unimodular() {
        for t in AffineType::ALL {
            let (m, inv) = classical_change_of_basis(&CartanData::new(t));
            for i in 0..2 {
                for j in 0..2 {
                    let e: i64 = (0..2).map(|k| m[i][k] * inv[k][j]).sum();
                    assert_eq!(e, (i == j) as i64);
                }
            }
        }
    }

    #[test]
    fn weight_ops() {
        let g = CartanData::new(AffineType::G2_1);
        let w2 = g.varpi2();
        assert_eq!(w2.pairing(2), 1);
        assert_eq!(w2 + Weight::ZERO, w2);
        assert!((g.varpi1() + w2).dominant_classical());
        assert!(!(-w2).dominant_classical());
        assert_eq!("d4_3".parse::<AffineType>().unwrap(), AffineType::D4_3);
    }
}
