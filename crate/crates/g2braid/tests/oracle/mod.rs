//! Independent G2 oracles for the integration tests. Nothing here calls the
//! library's weight code: tensor products come from Klimyk's formula with
//! Weyl-group reflections, dimensions from the Weyl product formula and
//! Casimirs from the invariant form.

#![allow(dead_code)]

use std::collections::BTreeMap;

/// Simple roots in fundamental coordinates (rows of the Cartan matrix,
/// α₁ short).
const ALPHA: [(i64, i64); 2] = [(2, -1), (-3, 2)];

/// Weights of the 7-dimensional module: the short roots and zero.
pub fn v_weights() -> Vec<(i64, i64)> {
    let a1 = ALPHA[0];
    let a2 = ALPHA[1];
    let add = |x: (i64, i64), y: (i64, i64)| (x.0 + y.0, x.1 + y.1);
    let s1 = a1;
    let s2 = add(a1, a2);
    let s3 = add(add(a1, a1), a2);
    let mut w = vec![(0, 0)];
    for s in [s1, s2, s3] {
        w.push(s);
        w.push((-s.0, -s.1));
    }
    w
}

/// Reflects x into the dominant chamber. Returns the sign of the Weyl
/// element used, or None if x lies on a wall.
fn to_dominant(mut x: (i64, i64)) -> Option<((i64, i64), i64)> {
    let mut sign = 1;
    loop {
        if x.0 == 0 || x.1 == 0 {
            return None;
        }
        if x.0 < 0 {
            x = (x.0 - x.0 * ALPHA[0].0, x.1 - x.0 * ALPHA[0].1);
            sign = -sign;
        } else if x.1 < 0 {
            x = (x.0 - x.1 * ALPHA[1].0, x.1 - x.1 * ALPHA[1].1);
            sign = -sign;
        } else {
            return Some((x, sign));
        }
    }
}

/// Decomposition of V_λ ⊗ V by Klimyk's formula.
pub fn tensor_v(l: (u32, u32)) -> BTreeMap<(u32, u32), i64> {
    let mut out: BTreeMap<(u32, u32), i64> = BTreeMap::new();
    for w in v_weights() {
        let x = (l.0 as i64 + w.0 + 1, l.1 as i64 + w.1 + 1);
        if let Some((d, s)) = to_dominant(x) {
            *out.entry(((d.0 - 1) as u32, (d.1 - 1) as u32)).or_default() += s;
        }
    }
    out.retain(|_, m| *m != 0);
    out
}

/// Multiplicities of the simple summands of V^{⊗n}.
pub fn tensor_power(n: usize) -> BTreeMap<(u32, u32), i64> {
    tensor_power_from((0, 0), n)
}

/// Multiplicities of the simple summands of V_δ ⊗ V^{⊗n}.
pub fn tensor_power_from(d: (u32, u32), n: usize) -> BTreeMap<(u32, u32), i64> {
    let mut cur: BTreeMap<(u32, u32), i64> = [(d, 1)].into();
    for _ in 0..n {
        let mut next: BTreeMap<(u32, u32), i64> = BTreeMap::new();
        for (l, m) in &cur {
            for (mu, k) in tensor_v(*l) {
                *next.entry(mu).or_default() += m * k;
            }
        }
        cur = next;
    }
    cur
}

/// Number of length-k paths δ → λ where each step is a summand of ⊗V.
pub fn path_count(d: (u32, u32), l: (u32, u32), k: usize) -> i64 {
    let mut cur: BTreeMap<(u32, u32), i64> = [(d, 1)].into();
    for _ in 0..k {
        let mut next = BTreeMap::new();
        for (x, m) in &cur {
            for (y, c) in tensor_v(*x) {
                *next.entry(y).or_default() += m * c;
            }
        }
        cur = next;
    }
    cur.get(&l).copied().unwrap_or(0)
}

/// Weyl dimension formula for G2 in fundamental coordinates.
pub fn weyl_dim(a: u64, b: u64) -> u64 {
    (a + 1) * (b + 1) * (a + b + 2) * (a + 2 * b + 3) * (a + 3 * b + 4) * (2 * a + 3 * b + 5) / 120
}

/// Gram matrix of the fundamental weights with short roots of squared
/// length 2.
const GRAM3: [[i64; 2]; 2] = [[2, 3], [3, 6]];

fn form3(x: (i64, i64), y: (i64, i64)) -> i64 {
    x.0 * (GRAM3[0][0] * y.0 + GRAM3[0][1] * y.1) + x.1 * (GRAM3[1][0] * y.0 + GRAM3[1][1] * y.1)
}

/// (λ, λ + 2ρ), normalized so that V gets 12.
pub fn casimir(l: (u32, u32)) -> i64 {
    let x = (l.0 as i64, l.1 as i64);
    let c = form3(x, (x.0 + 2, x.1 + 2));
    let cv = form3((1, 0), (3, 2));
    c * 12 / cv
}
