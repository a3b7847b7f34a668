use crate::padic::{Extension, FieldConfig, HalfVal, Lx, Qp, QpPoly, EXACT};

/// Polynomial over L, stored as `a(X) + b(X)·α` in the basis `{1, α}`.
///
/// For L = Q_p the `b` part is an exact zero. The two coordinates carry their
/// own absolute precision; [`TruncPoly::prec_half`] combines them.
#[derive(Clone, Debug)]
pub struct TruncPoly {
    pub a: QpPoly,
    pub b: QpPoly,
}

impl TruncPoly {
    pub fn zero(p: u64, prec: i64) -> Self {
        TruncPoly { a: QpPoly::zero(p, prec), b: QpPoly::zero(p, EXACT) }
    }

    pub fn from_qp(a: QpPoly) -> Self {
        let p = a.p();
        TruncPoly { a, b: QpPoly::zero(p, EXACT) }
    }

    pub fn constant(x: &Lx) -> Self {
        TruncPoly { a: QpPoly::constant(&x.a), b: QpPoly::constant(&x.b) }
    }

    pub fn x(p: u64) -> Self {
        Self::from_qp(QpPoly::x(p))
    }

    pub fn p(&self) -> u64 {
        self.a.p()
    }

    /// Smaller of the two coordinate precisions (in digits of Q_p).
    pub fn prec(&self) -> i64 {
        self.a.prec().min(self.b.prec())
    }

    /// Absolute precision as an element of L, in half units.
    pub fn prec_half(&self, f: &FieldConfig) -> HalfVal {
        let pa = 2 * self.a.prec().min(EXACT / 4);
        if !f.is_quadratic() {
            return HalfVal(pa);
        }
        let pb = 2 * self.b.prec().min(EXACT / 4) + f.alpha_val().0;
        HalfVal(pa.min(pb))
    }

    /// Gauss valuation `min_i v(c_i)` in half units (precision if zero).
    pub fn val(&self, f: &FieldConfig) -> HalfVal {
        let va = 2 * self.a.val().min(self.a.prec()).min(EXACT / 4);
        let vb = if f.is_quadratic() {
            2 * self.b.val().min(self.b.prec()).min(EXACT / 4) + f.alpha_val().0
        } else {
            i64::MAX
        };
        HalfVal(va.min(vb).min(self.prec_half(f).0))
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn len(&self) -> usize {
        self.a.len().max(self.b.len())
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn degree(&self) -> Option<usize> {
        match (self.a.degree(), self.b.degree()) {
            (None, None) => None,
            (x, y) => Some(x.unwrap_or(0).max(y.unwrap_or(0))),
        }
    }

    pub fn coeff(&self, i: usize) -> Lx {
        Lx { a: self.a.coeff(i), b: self.b.coeff(i) }
    }

    pub fn add(&self, o: &Self) -> Self {
        TruncPoly { a: self.a.add(&o.a), b: self.b.add(&o.b) }
    }

    pub fn sub(&self, o: &Self) -> Self {
        TruncPoly { a: self.a.sub(&o.a), b: self.b.sub(&o.b) }
    }

    pub fn neg(&self) -> Self {
        TruncPoly { a: self.a.neg(), b: self.b.neg() }
    }

    pub fn mul(&self, o: &Self, f: &FieldConfig) -> Self {
        match &f.ext {
            Extension::Trivial => TruncPoly::from_qp(self.a.mul(&o.a)),
            Extension::Quadratic { t, nrm } => {
                let aa = self.a.mul(&o.a);
                if self.b.is_zero() && o.b.is_zero() && self.b.is_exact() && o.b.is_exact() {
                    return TruncPoly { a: aa, b: QpPoly::zero(self.p(), EXACT) };
                }
                let bb = self.b.mul(&o.b);
                let ab = self.a.mul(&o.b).add(&self.b.mul(&o.a));
                TruncPoly { a: aa.sub(&bb.scale(nrm)), b: ab.add(&bb.scale(t)) }
            }
        }
    }

    /// Multiply by a polynomial with coefficients in Q_p.
    pub fn mul_qp(&self, g: &QpPoly) -> Self {
        TruncPoly { a: self.a.mul(g), b: self.b.mul(g) }
    }

    pub fn scale(&self, x: &Lx, f: &FieldConfig) -> Self {
        self.mul(&TruncPoly::constant(x), f)
    }

    pub fn scale_qp(&self, x: &Qp) -> Self {
        TruncPoly { a: self.a.scale(x), b: self.b.scale(x) }
    }

    pub fn mul_p_pow(&self, e: i64) -> Self {
        TruncPoly { a: self.a.mul_p_pow(e), b: self.b.mul_p_pow(e) }
    }

    pub fn mul_xk(&self, k: usize) -> Self {
        TruncPoly { a: self.a.mul_xk(k), b: self.b.mul_xk(k) }
    }

    /// Reduce modulo `X^n`.
    pub fn truncate(&self, n: usize) -> Self {
        TruncPoly { a: self.a.truncate(n), b: self.b.truncate(n) }
    }

    pub fn with_prec(&self, prec: i64) -> Self {
        TruncPoly { a: self.a.with_prec(prec), b: self.b.with_prec(prec) }
    }

    /// Apply a Q_p-linear map to both coordinates.
    pub fn map(&self, g: impl Fn(&QpPoly) -> QpPoly) -> Self {
        TruncPoly { a: g(&self.a), b: g(&self.b) }
    }

    /// Value at a point of the unit disc of Q_p.
    pub fn eval(&self, x: &Qp) -> Lx {
        Lx { a: self.a.eval(x), b: self.b.eval(x) }
    }

    pub fn same_as(&self, o: &Self) -> bool {
        self.sub(o).is_zero()
    }

    /// Largest `s` with `ϖ^s·self` integral, in units of the uniformizer.
    pub fn denominator_exponent(&self, f: &FieldConfig) -> i64 {
        let v = self.val(f);
        if v.0 >= 0 {
            return 0;
        }
        // ϖ has valuation 1/e, so ϖ^s has valuation s/e = s·(2/e) half units.
        let unit = 2 / f.e as i64;
        (-v.0 + unit - 1) / unit
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::make_context;

    #[test]
    fn quadratic_product_matches_scalar_product() {
        let h = make_context(3, 2, 3, 1, 1, 20).unwrap();
        let f = &h.field;
        let x = TruncPoly { a: QpPoly::from_i64s(3, &[1, 2], 20), b: QpPoly::from_i64s(3, &[0, 1], 20) };
        let y = TruncPoly { a: QpPoly::from_i64s(3, &[5, 0, 1], 20), b: QpPoly::from_i64s(3, &[7], 20) };
        let z = x.mul(&y, f);
        let pt = Qp::from_i64(3, 6, 20);
        let lhs = z.eval(&pt);
        let rhs = f.mul(&x.eval(&pt), &y.eval(&pt));
        assert!(lhs.same_as(&rhs));
    }

    #[test]
    fn denominator_of_alpha_inverse() {
        let h = make_context(3, 2, 3, 1, 1, 20).unwrap();
        let f = &h.field;
        let ai = f.inv(&h.alpha).unwrap();
        let t = TruncPoly::constant(&ai);
        assert_eq!(t.val(f), HalfVal(-1));
        assert_eq!(t.denominator_exponent(f), 1);
    }
}
