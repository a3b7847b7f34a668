//! Integer polynomial multiplication.
//!
//! Small products use the schoolbook loop. Larger ones pack each operand
//! into a single big integer (Kronecker substitution) and multiply with GMP.

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::Zero;
use rug::integer::Order;
use rug::Integer;

const SCHOOLBOOK_CUTOFF: usize = 24;

/// Product of two integer coefficient vectors (index = degree).
pub fn conv(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    if a.len().min(b.len()) <= SCHOOLBOOK_CUTOFF {
        return schoolbook(a, b);
    }
    let a_neg = a.iter().any(|x| x.sign() == Sign::Minus);
    let b_neg = b.iter().any(|x| x.sign() == Sign::Minus);
    if !a_neg && !b_neg {
        let au: Vec<BigUint> = a.iter().map(|x| x.magnitude().clone()).collect();
        let bu: Vec<BigUint> = b.iter().map(|x| x.magnitude().clone()).collect();
        return kron_unsigned(&au, &bu)
            .into_iter()
            .map(BigInt::from)
            .collect();
    }
    // Split into positive and negative halves: (a+ - a-)(b+ - b-).
    let (ap, an) = split_sign(a);
    let (bp, bn) = split_sign(b);
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (x, y, s) in [(&ap, &bp, 1), (&ap, &bn, -1), (&an, &bp, -1), (&an, &bn, 1)] {
        if x.iter().all(|v| v.is_zero()) || y.iter().all(|v| v.is_zero()) {
            continue;
        }
        for (i, v) in kron_unsigned(x, y).into_iter().enumerate() {
            if s > 0 {
                out[i] += BigInt::from(v);
            } else {
                out[i] -= BigInt::from(v);
            }
        }
    }
    out
}

fn split_sign(a: &[BigInt]) -> (Vec<BigUint>, Vec<BigUint>) {
    let mut pos = Vec::with_capacity(a.len());
    let mut neg = Vec::with_capacity(a.len());
    for x in a {
        match x.sign() {
            Sign::Minus => {
                pos.push(BigUint::zero());
                neg.push(x.magnitude().clone());
            }
            _ => {
                pos.push(x.magnitude().clone());
                neg.push(BigUint::zero());
            }
        }
    }
    (pos, neg)
}

fn schoolbook(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

fn kron_unsigned(a: &[BigUint], b: &[BigUint]) -> Vec<BigUint> {
    let ba = a.iter().map(|x| x.bits()).max().unwrap_or(0) as usize;
    let bb = b.iter().map(|x| x.bits()).max().unwrap_or(0) as usize;
    let n = a.len().min(b.len());
    let slot = ba + bb + (usize::BITS - n.leading_zeros()) as usize + 1;
    let pa = Integer::from_digits(&pack(a, slot), Order::Lsf);
    let pb = Integer::from_digits(&pack(b, slot), Order::Lsf);
    let prod = Integer::from(&pa * &pb);
    unpack(&prod.to_digits::<u64>(Order::Lsf), slot, a.len() + b.len() - 1)
}

fn pack(cs: &[BigUint], slot: usize) -> Vec<u64> {
    let total = cs.len() * slot;
    let mut limbs = vec![0u64; total / 64 + 2];
    for (i, c) in cs.iter().enumerate() {
        let off = i * slot;
        for (k, d) in c.iter_u64_digits().enumerate() {
            let bit = off + 64 * k;
            let (li, sh) = (bit / 64, bit % 64);
            limbs[li] |= d << sh;
            if sh > 0 {
                limbs[li + 1] |= d >> (64 - sh);
            }
        }
    }
    limbs
}

fn unpack(limbs: &[u64], slot: usize, count: usize) -> Vec<BigUint> {
    let get = |i: usize| -> u64 { limbs.get(i).copied().unwrap_or(0) };
    let words = slot.div_ceil(64);
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let off = i * slot;
        let (li, sh) = (off / 64, off % 64);
        let mut w = Vec::with_capacity(words);
        for k in 0..words {
            let lo = get(li + k) >> sh;
            let hi = if sh > 0 { get(li + k + 1) << (64 - sh) } else { 0 };
            w.push(lo | hi);
        }
        let rem = slot % 64;
        if rem > 0 {
            let last = w.len() - 1;
            w[last] &= (1u64 << rem) - 1;
        }
        out.push(from_u64_limbs(&w));
    }
    out
}

fn from_u64_limbs(limbs: &[u64]) -> BigUint {
    let mut digits = Vec::with_capacity(limbs.len() * 2);
    for &l in limbs {
        digits.push(l as u32);
        digits.push((l >> 32) as u32);
    }
    BigUint::new(digits)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn matches_schoolbook_on_signed_input() {
        let a: Vec<i64> = (0..60).map(|i| (i * 7919 % 113) - 50).collect();
        let b: Vec<i64> = (0..45).map(|i| (i * 104729 % 997) - 400).collect();
        let (a, b) = (ints(&a), ints(&b));
        assert_eq!(conv(&a, &b), schoolbook(&a, &b));
    }

    #[test]
    fn large_coefficients() {
        let big = BigInt::from(3u32).pow(200);
        let a: Vec<BigInt> = (0..40).map(|i| &big + i).collect();
        let b: Vec<BigInt> = (0..50).map(|i| &big * 2 + i).collect();
        assert_eq!(conv(&a, &b), schoolbook(&a, &b));
    }
}
