//! Weight combinatorics for G2: Casimir numbers, twists, tensoring with the
//! 7-dimensional module V, and quantum dimensions.
//!
//! Weights are written `(a, b)` in fundamental-weight coordinates, so
//! `(1, 0)` is V itself and `(0, 1)` is the 14-dimensional adjoint module.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::qscalar::QScalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "[u32; 2]", from = "[u32; 2]")]
pub struct Weight {
    pub a: u32,
    pub b: u32,
}

impl Weight {
    pub const ZERO: Weight = Weight { a: 0, b: 0 };
    pub const V: Weight = Weight { a: 1, b: 0 };

    pub const fn new(a: u32, b: u32) -> Self {
        Weight { a, b }
    }

    fn from_signed(a: i64, b: i64) -> Option<Self> {
        (a >= 0 && b >= 0).then(|| Weight::new(a as u32, b as u32))
    }
}

impl From<Weight> for [u32; 2] {
    fn from(w: Weight) -> Self {
        [w.a, w.b]
    }
}

impl From<[u32; 2]> for Weight {
    fn from(x: [u32; 2]) -> Self {
        Weight::new(x[0], x[1])
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.a, self.b)
    }
}

impl FromStr for Weight {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let (a, b) = s
            .trim()
            .trim_start_matches('(')
            .trim_end_matches(')')
            .split_once(',')
            .ok_or_else(|| format!("expected \"a,b\", got {s:?}"))?;
        let p = |x: &str| {
            x.trim()
                .parse::<u32>()
                .map_err(|_| format!("bad weight coordinate {x:?}"))
        };
        Ok(Weight::new(p(a)?, p(b)?))
    }
}

/// Short roots of G2 in fundamental-weight coordinates; together with 0
/// these are the weights of V.
pub const SHORT_ROOTS: [(i64, i64); 6] = [(1, 0), (-1, 0), (2, -1), (-2, 1), (-1, 1), (1, -1)];

/// `C_λ = 2a² + 6b² + 6ab + 10a + 18b`, normalized so that C_V = 12.
pub fn casimir(w: Weight) -> i64 {
    let (a, b) = (w.a as i64, w.b as i64);
    2 * a * a + 6 * b * b + 6 * a * b + 10 * a + 18 * b
}

/// The ribbon element acts on V_λ by `q^twist_exponent(λ)`.
pub fn twist_exponent(w: Weight) -> i64 {
    casimir(w)
}

/// Summands of `V_λ ⊗ V` in lexicographic order: the dominant corners of
/// the hexagon around λ, plus λ itself unless `a = 0`.
pub fn tensor_neighbors(w: Weight) -> Vec<Weight> {
    let (a, b) = (w.a as i64, w.b as i64);
    let mut out: Vec<Weight> = SHORT_ROOTS
        .iter()
        .filter_map(|&(da, db)| Weight::from_signed(a + da, b + db))
        .collect();
    if w.a > 0 {
        out.push(w);
    }
    out.sort();
    out
}

/// Quantum dimension via the product formula in ε-coordinates
/// `λ₁ = a + b`, `λ₂ = b`.
pub fn qdim(w: Weight) -> QScalar {
    let l1 = (w.a + w.b) as i64;
    let l2 = w.b as i64;
    let num = [
        l1 - l2 + 1,
        2 * l1 + l2 + 5,
        l1 + 2 * l2 + 4,
        3 * l1 + 6,
        3 * l2 + 3,
        3 * (l1 + l2) + 9,
    ];
    let den = [1, 5, 4, 6, 3, 9];
    let mut acc = QScalar::one();
    for k in num {
        acc = acc * QScalar::qint(k);
    }
    for k in den {
        acc = acc / QScalar::qint(k);
    }
    acc
}

/// Scalar by which the full twist on n strands acts on paths ending at λ:
/// `q^(C_λ - 12 n)`.
pub fn central_scalar(w: Weight, n: usize) -> QScalar {
    QScalar::q_pow(casimir(w) - casimir(Weight::V) * n as i64)
}

/// Classical Weyl dimension.
pub fn classical_dim(w: Weight) -> u64 {
    let l1 = (w.a + w.b) as u64;
    let l2 = w.b as u64;
    let num = (l1 - l2 + 1)
        * (2 * l1 + l2 + 5)
        * (l1 + 2 * l2 + 4)
        * (3 * l1 + 6)
        * (3 * l2 + 3)
        * (3 * (l1 + l2) + 9);
    num / (5 * 4 * 6 * 3 * 9)
}

type Character = BTreeMap<(i64, i64), i64>;

fn v_weights() -> Vec<(i64, i64)> {
    let mut w = SHORT_ROOTS.to_vec();
    w.push((0, 0));
    w
}

/// Formal character of the channel `γ ⊂ V ⊗ V`, for γ one of (0,0), (1,0),
/// (2,0), (0,1). Built as Sym²V − 1 and Λ²V − V.
fn channel_character(g: Weight) -> Character {
    let vw = v_weights();
    let mut ch = Character::new();
    let mut bump = |k: (i64, i64), d: i64| *ch.entry(k).or_default() += d;
    match (g.a, g.b) {
        (0, 0) => bump((0, 0), 1),
        (1, 0) => vw.iter().for_each(|&w| bump(w, 1)),
        (2, 0) | (0, 1) => {
            let sym = g.a == 2;
            for (i, x) in vw.iter().enumerate() {
                for y in &vw[i..] {
                    if sym || x != y {
                        bump((x.0 + y.0, x.1 + y.1), 1);
                    }
                }
            }
            if sym {
                bump((0, 0), -1);
            } else {
                vw.iter().for_each(|&w| bump(w, -1));
            }
        }
        _ => panic!("{g} is not a summand of V ⊗ V"),
    }
    ch.retain(|_, m| *m != 0);
    ch
}

/// Brings `w + ρ` into the dominant chamber by simple reflections; returns
/// the resulting dominant weight and the sign of the Weyl element, or None
/// if `w + ρ` lies on a wall.
fn dot_dominant(w: (i64, i64)) -> Option<(Weight, i64)> {
    let mut x = (w.0 + 1, w.1 + 1);
    let mut sign = 1;
    loop {
        if x.0 < 0 {
            x = (-x.0, x.1 + x.0);
        } else if x.1 < 0 {
            x = (x.0 + 3 * x.1, -x.1);
        } else {
            break;
        }
        sign = -sign;
    }
    if x.0 == 0 || x.1 == 0 {
        return None;
    }
    Some((Weight::new(x.0 as u32 - 1, x.1 as u32 - 1), sign))
}

/// Multiplicity of V_λ in V_δ ⊗ V_γ for a channel γ of V ⊗ V
/// (Brauer–Klimyk).
pub fn channel_multiplicity(lambda: Weight, delta: Weight, gamma: Weight) -> u32 {
    let mut tot = 0i64;
    for (w, m) in channel_character(gamma) {
        if let Some((d, s)) = dot_dominant((delta.a as i64 + w.0, delta.b as i64 + w.1)) {
            if d == lambda {
                tot += s * m;
            }
        }
    }
    assert!(tot >= 0, "negative tensor multiplicity");
    tot as u32
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(a: u32, b: u32) -> Weight {
        Weight::new(a, b)
    }

    // C_λ = (λ + 2ρ, λ) computed in ε-coordinates, scaled so (Λ₁,Λ₁) = 2.
    fn casimir_oracle(x: Weight) -> i64 {
        let eps = |a: i64, b: i64| [a + b, b, -a - 2 * b];
        let l = eps(x.a as i64, x.b as i64);
        let r = eps(1, 1);
        let v = [l[0] + 2 * r[0], l[1] + 2 * r[1], l[2] + 2 * r[2]];
        v[0] * l[0] + v[1] * l[1] + v[2] * l[2]
    }

    #[test]
    fn casimir_values() {
        assert_eq!(casimir(w(0, 0)), 0);
        assert_eq!(casimir(w(1, 0)), 12);
        assert_eq!(casimir(w(2, 0)), 28);
        assert_eq!(casimir(w(1, 1)), 42);
        assert_eq!(casimir(w(0, 1)), 24);
        assert_eq!(casimir(w(3, 3)), 210);
        for a in 0..8 {
            for b in 0..8 {
                assert_eq!(casimir(w(a, b)), casimir_oracle(w(a, b)));
            }
        }
    }

    #[test]
    fn neighbors_examples() {
        assert_eq!(tensor_neighbors(w(0, 0)), vec![w(1, 0)]);
        assert_eq!(
            tensor_neighbors(w(1, 0)),
            vec![w(0, 0), w(0, 1), w(1, 0), w(2, 0)]
        );
        assert_eq!(tensor_neighbors(w(0, 1)), vec![w(1, 0), w(1, 1), w(2, 0)]);
        let dims: u64 = tensor_neighbors(w(0, 1)).into_iter().map(classical_dim).sum();
        assert_eq!(dims, 7 * 14);
    }

    #[test]
    fn qdim_of_v_is_character_sum() {
        // Σ q^(2ρ, μ) over the seven weights μ of V, pairing in ε-coordinates
        // (the same form that gives C(1,0) = (λ, λ + 2ρ) = 12).
        let eps = |a: i64, b: i64| [a + b, b, -a - 2 * b];
        let rho = eps(1, 1);
        let oracle = v_weights().into_iter().fold(QScalar::zero(), |acc, (a, b)| {
            let e = eps(a, b);
            acc + QScalar::q_pow(2 * (e[0] * rho[0] + e[1] * rho[1] + e[2] * rho[2]))
        });
        let expect = [10, 8, 2, 0, -2, -8, -10]
            .iter()
            .fold(QScalar::zero(), |acc, &k| acc + QScalar::q_pow(k));
        assert_eq!(qdim(w(1, 0)), expect);
        assert_eq!(qdim(w(1, 0)), oracle);
        assert_eq!(qdim(w(0, 0)), QScalar::one());
    }

    #[test]
    fn central_scalar_examples() {
        assert_eq!(central_scalar(w(1, 0), 3), QScalar::q_pow(-24));
        assert_eq!(central_scalar(w(1, 0), 1), QScalar::one());
        assert_eq!(central_scalar(w(0, 0), 2), QScalar::q_pow(-24));
    }

    #[test]
    fn channel_multiplicities_match_small_cases() {
        let chans = [w(0, 0), w(1, 0), w(2, 0), w(0, 1)];
        // V ⊗ V at δ = 0: each channel appears once, in itself.
        for g in chans {
            assert_eq!(channel_multiplicity(g, w(0, 0), g), 1);
        }
        assert_eq!(channel_multiplicity(w(1, 0), w(1, 0), w(1, 0)), 1);
        assert_eq!(channel_multiplicity(w(0, 1), w(0, 1), w(1, 0)), 0);
        assert_eq!(channel_multiplicity(w(1, 1), w(1, 1), w(2, 0)), 2);
        // The big block at (1,0) sees every channel once.
        for g in chans {
            assert_eq!(channel_multiplicity(w(1, 0), w(1, 0), g), 1);
        }
    }

    #[test]
    fn parse_and_display() {
        assert_eq!("3,2".parse::<Weight>().unwrap(), w(3, 2));
        assert_eq!("(0, 1)".parse::<Weight>().unwrap(), w(0, 1));
        assert!("3".parse::<Weight>().is_err());
        assert_eq!(w(4, 1).to_string(), "4,1");
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(48))]

            #[test]
            fn tensoring_with_v_is_symmetric(a in 0u32..12, b in 0u32..12) {
                let l = w(a, b);
                for m in tensor_neighbors(l) {
                    prop_assert!(tensor_neighbors(m).contains(&l), "{} -> {} not reversible", l, m);
                }
            }

            #[test]
            fn dimensions_add_up(a in 0u32..12, b in 0u32..12) {
                let l = w(a, b);
                let total: u64 = tensor_neighbors(l).into_iter().map(classical_dim).sum();
                prop_assert_eq!(total, 7 * classical_dim(l));
            }

            #[test]
            fn qdim_is_multiplicative_on_neighbours(a in 0u32..5, b in 0u32..5) {
                let l = w(a, b);
                let sum = tensor_neighbors(l).into_iter().fold(QScalar::zero(), |acc, m| acc + qdim(m));
                prop_assert_eq!(sum, qdim(l) * qdim(Weight::V));
            }

            #[test]
            fn casimir_is_even_and_matches_oracle(a in 0u32..20, b in 0u32..20) {
                prop_assert_eq!(casimir(w(a, b)), casimir_oracle(w(a, b)));
                prop_assert!(casimir(w(a, b)) % 2 == 0);
            }
        }
    }
}
