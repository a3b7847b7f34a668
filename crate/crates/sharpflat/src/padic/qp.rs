use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::PadicError;
use crate::kron;

/// Precision value standing for "no truncation".
pub const EXACT: i64 = 1 << 40;

pub(crate) fn sat(x: i64) -> i64 {
    x.min(EXACT)
}

/// `prec + shift`, keeping `EXACT` absorbing.
pub(crate) fn prec_add(prec: i64, d: i64) -> i64 {
    if prec >= EXACT {
        EXACT
    } else {
        sat(prec + d)
    }
}

thread_local! {
    static POW: RefCell<HashMap<(u64, i64), BigInt>> = RefCell::new(HashMap::new());
}

/// `p^e` for `e >= 0`, memoised per thread.
pub fn ppow(p: u64, e: i64) -> BigInt {
    assert!(e >= 0, "negative exponent {e}");
    if e == 0 {
        return BigInt::one();
    }
    POW.with(|m| {
        m.borrow_mut()
            .entry((p, e))
            .or_insert_with(|| BigInt::from(p).pow(e as u32))
            .clone()
    })
}

/// p-adic valuation of a nonzero integer, capped at `cap`.
pub fn vp_int(p: u64, n: &BigInt, cap: i64) -> i64 {
    if n.is_zero() {
        return cap;
    }
    // Strip the largest power of p that fits in a machine word at a time.
    let (mut e, mut pe) = (0i64, 1u64);
    while let Some(x) = pe.checked_mul(p) {
        pe = x;
        e += 1;
    }
    let mut m = n.magnitude().clone();
    let mut v = 0;
    while v < cap {
        let r = (&m % pe).to_u64().expect("remainder fits a word");
        if r != 0 {
            let mut r = r;
            while r % p == 0 && v < cap {
                r /= p;
                v += 1;
            }
            return v.min(cap);
        }
        m /= pe;
        v += e;
    }
    v.min(cap)
}

/// Polynomial over Q_p with one absolute precision for all coefficients.
///
/// Coefficient `i` is `c[i]·p^shift`, known modulo `p^prec`. Unless the
/// polynomial is exact (`prec == EXACT`), every stored integer lies in
/// `[0, p^(prec - shift))`.
#[derive(Clone, Debug)]
pub struct QpPoly {
    p: u64,
    shift: i64,
    prec: i64,
    c: Vec<BigInt>,
}

impl QpPoly {
    pub fn zero(p: u64, prec: i64) -> Self {
        QpPoly { p, shift: prec.min(0), prec: sat(prec), c: Vec::new() }
    }

    pub fn from_ints(p: u64, c: Vec<BigInt>, prec: i64) -> Self {
        QpPoly { p, shift: 0, prec: sat(prec), c }.normalized()
    }

    pub fn from_i64s(p: u64, c: &[i64], prec: i64) -> Self {
        Self::from_ints(p, c.iter().map(|&x| BigInt::from(x)).collect(), prec)
    }

    /// Build from scalar coefficients; precision is the minimum over them.
    pub fn from_coeffs(p: u64, cs: &[Qp]) -> Self {
        let mut out = QpPoly::zero(p, EXACT);
        for (i, x) in cs.iter().enumerate() {
            out = out.add(&QpPoly::constant(x).mul_xk(i));
        }
        out
    }

    pub fn constant(x: &Qp) -> Self {
        x.0.clone()
    }

    /// The exact polynomial `X`.
    pub fn x(p: u64) -> Self {
        Self::from_i64s(p, &[0, 1], EXACT)
    }

    pub(crate) fn raw(p: u64, shift: i64, prec: i64, c: Vec<BigInt>) -> Self {
        QpPoly { p, shift, prec: sat(prec), c }.normalized()
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.prec >= EXACT
    }

    pub(crate) fn shift(&self) -> i64 {
        self.shift
    }

    pub(crate) fn ints(&self) -> &[BigInt] {
        &self.c
    }

    /// Number of stored coefficients (degree + 1 for a nonzero polynomial).
    pub fn len(&self) -> usize {
        self.c.len()
    }

    pub fn is_empty(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.c.is_empty() {
            None
        } else {
            Some(self.c.len() - 1)
        }
    }

    fn normalized(mut self) -> Self {
        // Anything this large came from arithmetic on EXACT.
        if self.prec >= EXACT / 2 {
            self.prec = EXACT;
        }
        if self.prec < EXACT {
            let m = self.prec - self.shift;
            if m <= 0 {
                self.c.clear();
                self.shift = self.prec;
                return self;
            }
            let md = ppow(self.p, m);
            for x in self.c.iter_mut() {
                if x.is_negative() || *x >= md {
                    *x = x.mod_floor(&md);
                }
            }
        }
        while self.c.last().is_some_and(|x| x.is_zero()) {
            self.c.pop();
        }
        self
    }

    /// Move the common power of `p` out of the integer coefficients.
    pub(crate) fn compact(mut self) -> Self {
        if self.c.is_empty() {
            return self;
        }
        let cap = if self.is_exact() { 1 << 20 } else { self.prec - self.shift };
        let mut v = cap;
        for x in &self.c {
            if !x.is_zero() {
                v = v.min(vp_int(self.p, x, v));
                if v == 0 {
                    return self;
                }
            }
        }
        if v > 0 && v < cap {
            let d = ppow(self.p, v);
            for x in self.c.iter_mut() {
                *x = &*x / &d;
            }
            self.shift += v;
        }
        self
    }

    /// Minimal valuation of a coefficient; `prec` when everything is zero.
    pub fn val(&self) -> i64 {
        let cap = if self.is_exact() { EXACT } else { self.prec - self.shift };
        let mut v = cap;
        for x in &self.c {
            if !x.is_zero() {
                v = v.min(vp_int(self.p, x, v));
                if v == 0 {
                    break;
                }
            }
        }
        if v >= cap {
            self.prec
        } else {
            self.shift + v
        }
    }

    /// True when every coefficient is zero at the working precision.
    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    /// Proven lower bound for the valuation: `min(val, prec)`.
    pub fn proven_val(&self) -> i64 {
        self.val().min(self.prec)
    }

    pub fn coeff(&self, i: usize) -> Qp {
        let v = self.c.get(i).cloned().unwrap_or_default();
        Qp(QpPoly { p: self.p, shift: self.shift, prec: self.prec, c: vec![v] }.normalized())
    }

    pub fn coeffs(&self) -> Vec<Qp> {
        (0..self.c.len()).map(|i| self.coeff(i)).collect()
    }

    /// Lower the precision to `prec` (never raises it).
    pub fn with_prec(&self, prec: i64) -> Self {
        let mut out = self.clone();
        if prec < out.prec {
            out.prec = prec;
            out = out.normalized();
        }
        out
    }

    fn align(&self, shift: i64) -> Vec<BigInt> {
        if shift == self.shift {
            return self.c.clone();
        }
        let f = ppow(self.p, self.shift - shift);
        self.c.iter().map(|x| x * &f).collect()
    }

    pub fn add(&self, o: &Self) -> Self {
        debug_assert_eq!(self.p, o.p);
        let shift = self.shift.min(o.shift);
        let prec = self.prec.min(o.prec);
        let mut a = self.align(shift);
        let b = o.align(shift);
        if a.len() < b.len() {
            a.resize(b.len(), BigInt::zero());
        }
        for (x, y) in a.iter_mut().zip(b) {
            *x += y;
        }
        QpPoly { p: self.p, shift, prec, c: a }.normalized()
    }

    pub fn neg(&self) -> Self {
        let c = self.c.iter().map(|x| -x).collect();
        QpPoly { p: self.p, shift: self.shift, prec: self.prec, c }.normalized()
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        debug_assert_eq!(self.p, o.p);
        let (va, vb) = (self.val(), o.val());
        let prec = prec_add(self.prec, vb).min(prec_add(o.prec, va));
        let shift = self.shift + o.shift;
        if self.c.is_empty() || o.c.is_empty() {
            return QpPoly::zero(self.p, prec);
        }
        let c = kron::conv(&self.c, &o.c);
        QpPoly { p: self.p, shift, prec, c }.normalized()
    }

    pub fn scale(&self, x: &Qp) -> Self {
        self.mul(&x.0)
    }

    pub fn scale_i64(&self, x: i64) -> Self {
        self.mul(&QpPoly::from_i64s(self.p, &[x], EXACT))
    }

    /// Multiply by `p^e` (any sign); exact, no precision change in relative terms.
    pub fn mul_p_pow(&self, e: i64) -> Self {
        let mut out = self.clone();
        out.shift += e;
        out.prec = if out.prec >= EXACT { EXACT } else { out.prec + e };
        out
    }

    pub fn mul_xk(&self, k: usize) -> Self {
        if self.c.is_empty() || k == 0 {
            return self.clone();
        }
        let mut c = vec![BigInt::zero(); k];
        c.extend(self.c.iter().cloned());
        QpPoly { p: self.p, shift: self.shift, prec: self.prec, c }
    }

    /// Reduce modulo `X^n`.
    pub fn truncate(&self, n: usize) -> Self {
        let mut out = self.clone();
        out.c.truncate(n);
        out.normalized()
    }

    /// Coefficients `lo..hi` as a new polynomial starting at degree 0.
    pub fn slice(&self, lo: usize, hi: usize) -> Self {
        let hi = hi.min(self.c.len());
        let c = if lo < hi { self.c[lo..hi].to_vec() } else { Vec::new() };
        QpPoly { p: self.p, shift: self.shift, prec: self.prec, c }.normalized()
    }

    /// `Σ_i parts[i]·X^{i·stride}`; each part has at most `stride` coefficients.
    pub fn interleave(p: u64, parts: &[QpPoly], stride: usize) -> Self {
        let shift = parts.iter().filter(|x| !x.c.is_empty()).map(|x| x.shift).min().unwrap_or(0);
        let prec = parts.iter().map(|x| x.prec).min().unwrap_or(EXACT);
        let mut c = vec![BigInt::zero(); parts.len() * stride];
        for (i, x) in parts.iter().enumerate() {
            assert!(x.c.len() <= stride, "part {i} longer than the stride");
            if x.c.is_empty() {
                continue;
            }
            for (k, v) in x.align(shift).into_iter().enumerate() {
                c[i * stride + k] = v;
            }
        }
        QpPoly { p, shift, prec, c }.normalized()
    }

    /// Reverse the first `n` coefficients: `X^(n-1)·F(1/X)`.
    pub fn reverse(&self, n: usize) -> Self {
        let mut c: Vec<BigInt> = (0..n).map(|i| self.c.get(i).cloned().unwrap_or_default()).collect();
        c.reverse();
        QpPoly { p: self.p, shift: self.shift, prec: self.prec, c }.normalized()
    }

    pub fn eval(&self, x: &Qp) -> Qp {
        let mut acc = Qp::zero(self.p, EXACT);
        for i in (0..self.c.len()).rev() {
            acc = acc.mul(x).add(&self.coeff(i));
        }
        if self.c.is_empty() {
            acc = Qp::zero(self.p, self.prec);
        }
        acc
    }

    /// Formal derivative.
    pub fn derivative(&self) -> Self {
        let c = self.c.iter().enumerate().skip(1).map(|(i, x)| x * BigInt::from(i)).collect();
        QpPoly { p: self.p, shift: self.shift, prec: self.prec, c }.normalized()
    }

    /// Exact equality of representatives at the common precision.
    pub fn same_as(&self, o: &Self) -> bool {
        self.sub(o).is_zero()
    }
}

/// Element of Q_p with tracked absolute precision.
#[derive(Clone, Debug)]
pub struct Qp(pub(crate) QpPoly);

impl Qp {
    pub fn zero(p: u64, prec: i64) -> Self {
        Qp(QpPoly::zero(p, prec))
    }

    pub fn one(p: u64) -> Self {
        Self::from_i64(p, 1, EXACT)
    }

    pub fn from_i64(p: u64, v: i64, prec: i64) -> Self {
        Qp(QpPoly::from_i64s(p, &[v], prec))
    }

    pub fn from_int(p: u64, v: BigInt, prec: i64) -> Self {
        Qp(QpPoly::from_ints(p, vec![v], prec))
    }

    /// `m·p^shift` known modulo `p^prec`.
    pub fn from_parts(p: u64, m: BigInt, shift: i64, prec: i64) -> Self {
        Qp(QpPoly::raw(p, shift, prec, vec![m]))
    }

    pub fn p(&self) -> u64 {
        self.0.p
    }

    pub fn prec(&self) -> i64 {
        self.0.prec
    }

    pub fn val(&self) -> i64 {
        self.0.val()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_exact(&self) -> bool {
        self.0.is_exact()
    }

    pub fn with_prec(&self, prec: i64) -> Self {
        Qp(self.0.with_prec(prec))
    }

    pub fn add(&self, o: &Self) -> Self {
        Qp(self.0.add(&o.0))
    }

    pub fn sub(&self, o: &Self) -> Self {
        Qp(self.0.sub(&o.0))
    }

    pub fn neg(&self) -> Self {
        Qp(self.0.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        Qp(self.0.mul(&o.0))
    }

    pub fn mul_p_pow(&self, e: i64) -> Self {
        Qp(self.0.mul_p_pow(e))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Qp::one(self.p());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Integer mantissa and exponent: value = m·p^e with `p ∤ m` (zero gives `None`).
    pub fn unit_split(&self) -> Option<(BigInt, i64)> {
        let c = self.0.clone().compact();
        let m = c.c.first()?.clone();
        if m.is_zero() {
            return None;
        }
        Some((m, c.shift))
    }

    /// Multiplicative inverse. Loses `2·val` digits of absolute precision.
    pub fn inv(&self) -> Result<Self, PadicError> {
        let p = self.p();
        let (m, e) = self.unit_split().ok_or(PadicError::DivisionByZero)?;
        if self.is_exact() {
            if m.abs().is_one() {
                return Ok(Qp::from_parts(p, m, -e, EXACT));
            }
            return Err(PadicError::UnboundedPrecision);
        }
        let rel = self.prec() - e;
        let md = ppow(p, rel);
        let inv = mod_inverse(&m.mod_floor(&md), &md).ok_or(PadicError::DivisionByZero)?;
        Ok(Qp::from_parts(p, inv, -e, rel - e))
    }

    /// Quotient. Dividing by an element of valuation `v` costs exactly `v` digits.
    pub fn div(&self, o: &Self) -> Result<Self, PadicError> {
        let vo = o.val();
        if o.is_zero() {
            return Err(PadicError::DivisionByZero);
        }
        if o.is_exact() {
            if let Some((m, e)) = o.unit_split() {
                if m.abs().is_one() {
                    return Ok(self.mul(&Qp::from_parts(self.p(), m, -e, EXACT)));
                }
            }
            if self.is_exact() {
                return Err(PadicError::UnboundedPrecision);
            }
        }
        let rel_self = self.prec() - self.val().min(self.prec());
        let o2 = o.with_prec(vo + rel_self.max(1));
        let q = self.mul(&o2.inv()?);
        Ok(q.with_prec(self.prec() - vo))
    }

    pub fn to_i64_mod(&self) -> Option<i64> {
        self.residue()?.to_i64()
    }

    /// Integer representative `x ≡ self mod p^prec` (requires nonnegative valuation).
    pub fn residue(&self) -> Option<BigInt> {
        let c = &self.0;
        let m = c.c.first().cloned().unwrap_or_default();
        if c.shift >= 0 {
            return Some(m * ppow(c.p, c.shift));
        }
        // The mantissa may still carry the factor that makes the value integral.
        let (q, r) = m.div_rem(&ppow(c.p, -c.shift));
        r.is_zero().then_some(q)
    }

    /// Base-p digits of the mantissa relative to `shift` (value = p^shift · Σ d_i p^i).
    ///
    /// Exact negative values have no finite digit expansion and are refused.
    pub fn digits(&self, shift: i64) -> Result<Vec<u64>, PadicError> {
        let c = &self.0;
        let m = c.c.first().cloned().unwrap_or_default();
        if m.is_zero() {
            return Ok(Vec::new());
        }
        if shift > c.shift {
            return Err(PadicError::InvalidInput(format!("digit shift {shift} above valuation")));
        }
        let m = m * ppow(c.p, c.shift - shift);
        if m.is_negative() {
            return Err(PadicError::UnboundedPrecision);
        }
        let pb = BigInt::from(c.p);
        let mut m = m;
        let mut out = Vec::new();
        while !m.is_zero() {
            let (q, r) = m.div_rem(&pb);
            out.push(r.to_u64().unwrap_or(0));
            m = q;
        }
        Ok(out)
    }

    pub fn same_as(&self, o: &Self) -> bool {
        self.sub(o).is_zero()
    }

}

impl fmt::Display for Qp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.unit_split() {
            None => write!(f, "O({}^{})", self.p(), self.prec()),
            Some((m, e)) => {
                if self.is_exact() {
                    write!(f, "{}*{}^{}", m, self.p(), e)
                } else {
                    write!(f, "{}*{}^{} + O({}^{})", m, self.p(), e, self.p(), self.prec())
                }
            }
        }
    }
}

/// Inverse of `a` modulo `m` via the extended Euclidean algorithm.
pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    if !e.gcd.is_one() {
        return None;
    }
    Some(e.x.mod_floor(m))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_and_precision() {
        let x = Qp::from_i64(5, 2 * 25, 20);
        let y = x.inv().unwrap();
        assert_eq!(y.val(), -2);
        assert_eq!(y.prec(), 20 - 4);
        assert!(x.mul(&y).same_as(&Qp::one(5)));
    }

    #[test]
    fn quotient_has_integer_residue() {
        let q = Qp::from_i64(5, 50, 10).div(&Qp::from_i64(5, 25, 10)).unwrap();
        assert_eq!(q.to_i64_mod(), Some(2));
        assert_eq!(Qp::from_i64(5, 1, 10).div(&Qp::from_i64(5, 5, 10)).unwrap().residue(), None);
    }

    #[test]
    fn zero_at_precision() {
        let x = Qp::from_i64(3, 81, 4);
        assert!(x.is_zero());
        assert_eq!(x.val(), 4);
    }

    #[test]
    fn poly_mul_precision_tracks_valuations() {
        let a = QpPoly::from_i64s(3, &[3, 1], 10);
        let b = QpPoly::from_i64s(3, &[9, 0, 9], 10);
        let c = a.mul(&b);
        assert_eq!(c.prec(), 10);
        assert_eq!(c.val(), 2);
    }
}
