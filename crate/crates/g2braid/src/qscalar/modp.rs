//! Arithmetic modulo the Mersenne prime 2^61 - 1, used to find independent
//! rows of large linear systems before solving them exactly.

use num_bigint::BigInt;
use num_integer::Integer;

pub const P: u64 = (1 << 61) - 1;

/// Image of q. Values whose denominator vanishes here have no residue.
pub const Q_POINT: u64 = 1_234_567_891;

pub fn add(a: u64, b: u64) -> u64 {
    (a + b) % P
}

pub fn sub(a: u64, b: u64) -> u64 {
    (a + P - b) % P
}

pub fn mul(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % P as u128) as u64
}

pub fn pow(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul(r, a);
        }
        a = mul(a, a);
        e >>= 1;
    }
    r
}

pub fn inv(a: u64) -> Option<u64> {
    (a != 0).then(|| pow(a, P - 2))
}

pub fn from_bigint(n: &BigInt) -> u64 {
    let r = n.mod_floor(&BigInt::from(P));
    u64::try_from(r).expect("reduced below P")
}
