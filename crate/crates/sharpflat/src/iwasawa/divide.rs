use std::cell::RefCell;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::kron::conv;
use crate::padic::{ppow, Qp, QpPoly, EXACT};

use super::{IwasawaError, TruncPoly};

const SCHOOLBOOK_WORK: usize = 200_000;

/// A monic integral divisor with a cached inverse of its reversal.
///
/// Reducing many polynomials modulo the same `ω_{n,h}` is the inner loop of
/// every suite, so the Newton inverse is computed once and reused.
#[derive(Debug)]
pub struct Modulus {
    m: QpPoly,
    deg: usize,
    /// Inverse of the original leading coefficient.
    lead_inv: Qp,
    /// (length, digits, inverse integers) of `rev(m)^{-1} mod X^length`.
    inv: RefCell<Option<(usize, i64, Vec<BigInt>)>>,
}

impl Clone for Modulus {
    fn clone(&self) -> Self {
        Modulus { m: self.m.clone(), deg: self.deg, lead_inv: self.lead_inv.clone(), inv: RefCell::new(self.inv.borrow().clone()) }
    }
}

impl Modulus {
    /// Wrap a polynomial whose leading coefficient is a p-adic unit.
    pub fn new(m: &QpPoly) -> Result<Self, IwasawaError> {
        let deg = m.degree().ok_or(IwasawaError::ZeroDivisor)?;
        let lead = m.coeff(deg);
        if lead.val() != 0 {
            return Err(IwasawaError::BadDivisor("leading coefficient is not a unit".into()));
        }
        let p = m.p();
        let li = if lead.is_exact() {
            if lead.same_as(&Qp::one(p)) || lead.same_as(&Qp::one(p).neg()) {
                lead.clone()
            } else {
                return Err(IwasawaError::BadDivisor("exact divisor needs leading coefficient ±1".into()));
            }
        } else {
            lead.inv().map_err(|_| IwasawaError::ZeroDivisor)?
        };
        let monic = m.scale(&li);
        if monic.val() < 0 {
            return Err(IwasawaError::BadDivisor("divisor is not integral after normalisation".into()));
        }
        // Re-express with shift 0 so the integer vector is the coefficient vector.
        let monic = rebase(&monic);
        Ok(Modulus { m: monic, deg, lead_inv: li, inv: RefCell::new(None) })
    }

    pub fn poly(&self) -> &QpPoly {
        &self.m
    }

    pub fn degree(&self) -> usize {
        self.deg
    }

    /// Inverse of the leading coefficient of the polynomial passed to [`Modulus::new`].
    pub fn lead_inv(&self) -> &Qp {
        &self.lead_inv
    }

    fn inverse(&self, len: usize, digits: i64) -> Vec<BigInt> {
        if let Some((l, d, v)) = self.inv.borrow().as_ref() {
            if *l >= len && *d >= digits {
                let mut v = v.clone();
                v.truncate(len);
                if *d > digits {
                    let md = ppow(self.m.p(), digits);
                    v.iter_mut().for_each(|x| *x = x.mod_floor(&md));
                }
                return v;
            }
        }
        let md = ppow(self.m.p(), digits);
        let rev: Vec<BigInt> = self.m.ints().iter().rev().cloned().collect();
        let mut g = vec![BigInt::one()];
        let mut cur = 1usize;
        while cur < len {
            let next = (2 * cur).min(len);
            let f: Vec<BigInt> = rev.iter().take(next).cloned().collect();
            let mut fg = conv(&f, &g);
            fg.truncate(next);
            // 2 - f g
            let mut t: Vec<BigInt> = fg.into_iter().map(|x| -x).collect();
            t.resize(next, BigInt::zero());
            t[0] += 2;
            let mut ng = conv(&g, &t);
            ng.truncate(next);
            ng.iter_mut().for_each(|x| *x = x.mod_floor(&md));
            g = ng;
            cur = next;
        }
        g.resize(len, BigInt::zero());
        *self.inv.borrow_mut() = Some((len, digits, g.clone()));
        g
    }

    /// Quotient and remainder of `a` by the modulus.
    pub fn divrem(&self, a: &QpPoly) -> (QpPoly, QpPoly) {
        let p = a.p();
        if a.len() <= self.deg {
            return (QpPoly::zero(p, a.prec()), a.clone());
        }
        let a = a.clone().compact();
        let va = a.val();
        let prec = a.prec().min(crate::padic::prec_add(self.m.prec(), va));
        let s = a.shift();
        let qlen = a.len() - self.deg;
        if prec >= EXACT {
            return self.divrem_school(&a, None);
        }
        let digits = prec - s;
        if digits <= 0 {
            return (QpPoly::zero(p, prec), QpPoly::zero(p, prec));
        }
        if qlen.saturating_mul(self.deg) <= SCHOOLBOOK_WORK || qlen < 32 {
            let a = a.with_prec(prec);
            return self.divrem_school(&a, Some(digits));
        }
        let md = ppow(p, digits);
        let inv = self.inverse(qlen, digits);
        let ai = a.ints();
        let rev_a: Vec<BigInt> = ai.iter().rev().take(qlen).cloned().collect();
        let mut qr = conv(&rev_a, &inv);
        qr.truncate(qlen);
        qr.resize(qlen, BigInt::zero());
        qr.reverse();
        let q: Vec<BigInt> = qr.into_iter().map(|x| x.mod_floor(&md)).collect();
        let qm = conv(&q, self.m.ints());
        let r: Vec<BigInt> = (0..self.deg)
            .map(|i| {
                let x = ai.get(i).cloned().unwrap_or_default() - qm.get(i).cloned().unwrap_or_default();
                x.mod_floor(&md)
            })
            .collect();
        (QpPoly::raw(p, s, prec, q), QpPoly::raw(p, s, prec, r))
    }

    fn divrem_school(&self, a: &QpPoly, digits: Option<i64>) -> (QpPoly, QpPoly) {
        let p = a.p();
        let md = digits.map(|d| ppow(p, d));
        let m = self.m.ints();
        let mut r: Vec<BigInt> = a.ints().to_vec();
        let qlen = r.len() - self.deg;
        let mut q = vec![BigInt::zero(); qlen];
        for i in (self.deg..r.len()).rev() {
            let qi = match &md {
                Some(md) => r[i].mod_floor(md),
                None => r[i].clone(),
            };
            if !qi.is_zero() {
                for j in 0..self.deg {
                    let t = &qi * &m[j];
                    r[i - self.deg + j] -= t;
                }
            }
            q[i - self.deg] = qi;
        }
        r.truncate(self.deg);
        let prec = a.prec();
        (QpPoly::raw(p, a.shift(), prec, q), QpPoly::raw(p, a.shift(), prec, r))
    }

    pub fn rem(&self, a: &QpPoly) -> QpPoly {
        self.divrem(a).1
    }

    /// Remainders of many polynomials at a common precision, with one packed
    /// product for all quotients and one for all corrections.
    pub fn rem_many(&self, rows: &[QpPoly]) -> Vec<QpPoly> {
        let Some(first) = rows.first() else { return Vec::new() };
        let p = first.p();
        let len = rows.iter().map(|r| r.len()).max().unwrap_or(0);
        let prec = rows.iter().map(|r| r.prec()).min().unwrap_or(EXACT);
        if len <= self.deg || prec >= EXACT || rows.len() < 4 {
            return rows.iter().map(|r| self.rem(r)).collect();
        }
        let rows: Vec<QpPoly> = rows.iter().map(|r| r.clone().compact()).collect();
        let s = rows.iter().filter(|r| !r.is_zero()).map(|r| r.shift()).min().unwrap_or(prec);
        let prec = prec.min(crate::padic::prec_add(self.m.prec(), s));
        let digits = prec - s;
        if digits <= 0 {
            return rows.iter().map(|_| QpPoly::zero(p, prec)).collect();
        }
        let md = ppow(p, digits);
        let aligned: Vec<Vec<BigInt>> = rows
            .iter()
            .map(|r| {
                if r.is_zero() {
                    return vec![BigInt::zero(); len];
                }
                let f = ppow(p, r.shift() - s);
                let mut v: Vec<BigInt> = r.ints().iter().map(|x| x * &f).collect();
                v.resize(len, BigInt::zero());
                v
            })
            .collect();
        let qlen = len - self.deg;
        let inv = self.inverse(qlen, digits);
        let st = 2 * qlen - 1;
        let mut packed = vec![BigInt::zero(); st * rows.len()];
        for (i, a) in aligned.iter().enumerate() {
            for (j, x) in a[self.deg..].iter().rev().enumerate() {
                packed[i * st + j] = x.clone();
            }
        }
        let qr = conv(&packed, &inv);
        let st2 = qlen + self.deg;
        let mut qpack = vec![BigInt::zero(); st2 * rows.len()];
        for i in 0..rows.len() {
            for j in 0..qlen {
                let x = qr.get(i * st + qlen - 1 - j).cloned().unwrap_or_default();
                qpack[i * st2 + j] = x.mod_floor(&md);
            }
        }
        let qm = conv(&qpack, self.m.ints());
        aligned
            .iter()
            .enumerate()
            .map(|(i, a)| {
                let r = (0..self.deg)
                    .map(|j| (&a[j] - qm.get(i * st2 + j).cloned().unwrap_or_default()).mod_floor(&md))
                    .collect();
                QpPoly::raw(p, s, prec, r)
            })
            .collect()
    }

    /// Reduce both coordinates of an L-polynomial.
    pub fn rem_l(&self, a: &TruncPoly) -> TruncPoly {
        TruncPoly { a: self.rem(&a.a), b: self.rem(&a.b) }
    }

    pub fn divrem_l(&self, a: &TruncPoly) -> (TruncPoly, TruncPoly) {
        let (qa, ra) = self.divrem(&a.a);
        let (qb, rb) = self.divrem(&a.b);
        (TruncPoly { a: qa, b: qb }, TruncPoly { a: ra, b: rb })
    }
}

/// Same polynomial, stored with shift 0 (requires nonnegative valuation).
fn rebase(x: &QpPoly) -> QpPoly {
    let s = x.shift();
    if s == 0 {
        return x.clone();
    }
    if s > 0 {
        let f = ppow(x.p(), s);
        let c = x.ints().iter().map(|v| v * &f).collect();
        return QpPoly::raw(x.p(), 0, x.prec(), c);
    }
    let x = x.clone().compact();
    let s = x.shift();
    let f = ppow(x.p(), s.max(0));
    let c = x.ints().iter().map(|v| v * &f).collect();
    QpPoly::raw(x.p(), 0, x.prec(), c)
}

/// Outcome of an exact division.
#[derive(Clone, Debug)]
pub struct Division {
    pub quotient: TruncPoly,
    /// Digits of absolute precision lost between dividend and quotient.
    pub precision_loss: i64,
}

/// Divide `f` by `g`, insisting that the remainder vanish.
///
/// The remainder counts as zero when its proven valuation reaches `thresh`
/// (default: the remainder's own precision, i.e. zero at working precision).
///
/// ```
/// use sharpflat::iwasawa::{exact_divide, gadget_omega, gadget_phi, TruncPoly};
/// let w1 = TruncPoly::from_qp(gadget_omega(3, 1));
/// let phi1 = TruncPoly::from_qp(gadget_phi(3, 1));
/// let q = exact_divide(&w1, &phi1, None).unwrap().quotient;
/// assert_eq!(q.a.degree(), Some(1)); // ω_1 / Φ_1 = X
/// ```
pub fn exact_divide(f: &TruncPoly, g: &TruncPoly, thresh: Option<i64>) -> Result<Division, IwasawaError> {
    if !g.b.is_zero() {
        return Err(IwasawaError::BadDivisor("divisor must have coefficients in Q_p".into()));
    }
    let deg = g.a.degree().ok_or(IwasawaError::ZeroDivisor)?;
    let lead = g.a.coeff(deg);
    let vl = lead.val();
    // Scale so the leading coefficient is a unit.
    let gs = g.a.mul_p_pow(-vl);
    let m = Modulus::new(&gs)?;
    let mut d = exact_divide_by(f, &m, thresh)?;
    d.quotient = d.quotient.mul_p_pow(-vl);
    d.precision_loss = (f.a.prec().min(f.b.prec()) - d.quotient.prec()).max(0);
    Ok(d)
}

/// [`exact_divide`] by a prepared modulus, reusing its cached inverse.
pub fn exact_divide_by(f: &TruncPoly, m: &Modulus, thresh: Option<i64>) -> Result<Division, IwasawaError> {
    let (q, r) = m.divrem_l(f);
    let rv = r.a.proven_val().min(r.b.proven_val());
    let t = thresh.unwrap_or_else(|| r.a.prec().min(r.b.prec()));
    if !(r.a.is_zero() && r.b.is_zero()) && rv < t {
        return Err(IwasawaError::NotDivisible { residual_val: rv, threshold: t });
    }
    let q = q.scale_qp(m.lead_inv());
    let before = f.a.prec().min(f.b.prec());
    let after = q.a.prec().min(q.b.prec());
    Ok(Division { quotient: q, precision_loss: (before - after).max(0) })
}
