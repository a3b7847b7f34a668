use super::{HalfVal, PadicError, Qp, EXACT};

/// Shape of the coefficient field L.
#[derive(Clone, Debug)]
pub enum Extension {
    /// L = Q_p.
    Trivial,
    /// L = Q_p(α) with α² = t·α − nrm, totally ramified.
    Quadratic { t: Qp, nrm: Qp },
}

/// The coefficient field L together with the working precision.
#[derive(Clone, Debug)]
pub struct FieldConfig {
    pub p: u64,
    /// Absolute precision N, in digits of the prime field.
    pub prec: i64,
    pub ext: Extension,
    /// Ramification index (1 or 2).
    pub e: u32,
    /// Valuation of the generator α (only meaningful for `Quadratic`).
    alpha_val: HalfVal,
}

/// Element `a + b·α` of L; `b` is an exact zero when L = Q_p.
#[derive(Clone, Debug)]
pub struct Lx {
    pub a: Qp,
    pub b: Qp,
}

impl Lx {
    pub fn add(&self, o: &Lx) -> Lx {
        Lx { a: self.a.add(&o.a), b: self.b.add(&o.b) }
    }

    pub fn sub(&self, o: &Lx) -> Lx {
        Lx { a: self.a.sub(&o.a), b: self.b.sub(&o.b) }
    }

    pub fn neg(&self) -> Lx {
        Lx { a: self.a.neg(), b: self.b.neg() }
    }

    pub fn scale(&self, x: &Qp) -> Lx {
        Lx { a: self.a.mul(x), b: self.b.mul(x) }
    }

    pub fn mul_p_pow(&self, e: i64) -> Lx {
        Lx { a: self.a.mul_p_pow(e), b: self.b.mul_p_pow(e) }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn with_prec(&self, prec: i64) -> Lx {
        Lx { a: self.a.with_prec(prec), b: self.b.with_prec(prec) }
    }

    pub fn same_as(&self, o: &Lx) -> bool {
        self.sub(o).is_zero()
    }
}

impl FieldConfig {
    pub fn trivial(p: u64, prec: i64) -> Self {
        FieldConfig { p, prec, ext: Extension::Trivial, e: 1, alpha_val: HalfVal(0) }
    }

    /// Quadratic ramified extension cut out by `X² − tX + nrm`, `v(nrm)` odd.
    pub fn quadratic(p: u64, prec: i64, t: Qp, nrm: Qp) -> Self {
        let alpha_val = HalfVal(nrm.val());
        FieldConfig { p, prec, ext: Extension::Quadratic { t, nrm }, e: 2, alpha_val }
    }

    pub fn is_quadratic(&self) -> bool {
        matches!(self.ext, Extension::Quadratic { .. })
    }

    pub fn zero(&self) -> Lx {
        self.from_qp(Qp::zero(self.p, EXACT))
    }

    pub fn one(&self) -> Lx {
        self.from_qp(Qp::one(self.p))
    }

    pub fn from_qp(&self, a: Qp) -> Lx {
        Lx { a, b: Qp::zero(self.p, EXACT) }
    }

    pub fn from_i64(&self, v: i64) -> Lx {
        self.from_qp(Qp::from_i64(self.p, v, self.prec))
    }

    /// The basis element α of a quadratic extension.
    pub fn generator(&self) -> Option<Lx> {
        match self.ext {
            Extension::Trivial => None,
            Extension::Quadratic { .. } => Some(Lx { a: Qp::zero(self.p, EXACT), b: Qp::one(self.p) }),
        }
    }

    /// A fixed uniformizer ϖ of O_L.
    pub fn uniformizer(&self) -> Lx {
        match self.ext {
            Extension::Trivial => self.from_qp(Qp::from_i64(self.p, self.p as i64, EXACT)),
            Extension::Quadratic { .. } => {
                let s = (self.alpha_val.0 - 1) / 2;
                Lx { a: Qp::zero(self.p, EXACT), b: Qp::one(self.p).mul_p_pow(-s) }
            }
        }
    }

    pub fn mul(&self, x: &Lx, y: &Lx) -> Lx {
        match &self.ext {
            Extension::Trivial => self.from_qp(x.a.mul(&y.a)),
            Extension::Quadratic { t, nrm } => {
                let bd = x.b.mul(&y.b);
                let a = x.a.mul(&y.a).sub(&nrm.mul(&bd));
                let b = x.a.mul(&y.b).add(&x.b.mul(&y.a)).add(&t.mul(&bd));
                Lx { a, b }
            }
        }
    }

    pub fn pow(&self, x: &Lx, e: u32) -> Lx {
        let mut acc = self.one();
        let mut base = x.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Galois conjugate (identity on Q_p).
    pub fn conj(&self, x: &Lx) -> Lx {
        match &self.ext {
            Extension::Trivial => x.clone(),
            Extension::Quadratic { t, .. } => Lx { a: x.a.add(&x.b.mul(t)), b: x.b.neg() },
        }
    }

    /// Norm down to Q_p.
    pub fn norm(&self, x: &Lx) -> Qp {
        match &self.ext {
            Extension::Trivial => x.a.clone(),
            Extension::Quadratic { .. } => self.mul(x, &self.conj(x)).a,
        }
    }

    pub fn inv(&self, x: &Lx) -> Result<Lx, PadicError> {
        match &self.ext {
            Extension::Trivial => Ok(self.from_qp(x.a.inv()?)),
            Extension::Quadratic { .. } => {
                let n = self.norm(x);
                let c = self.conj(x);
                Ok(Lx { a: c.a.div(&n)?, b: c.b.div(&n)? })
            }
        }
    }

    pub fn div(&self, x: &Lx, y: &Lx) -> Result<Lx, PadicError> {
        match &self.ext {
            Extension::Trivial => Ok(self.from_qp(x.a.div(&y.a)?)),
            Extension::Quadratic { .. } => {
                let n = self.norm(y);
                let num = self.mul(x, &self.conj(y));
                Ok(Lx { a: num.a.div(&n)?, b: num.b.div(&n)? })
            }
        }
    }

    /// Valuation normalised so that `v(p) = 1`; `None` when zero at precision.
    pub fn val_opt(&self, x: &Lx) -> Option<HalfVal> {
        if x.is_zero() {
            return None;
        }
        Some(self.val(x))
    }

    /// Valuation, or the precision when the element is zero at precision.
    pub fn val(&self, x: &Lx) -> HalfVal {
        match &self.ext {
            Extension::Trivial => HalfVal(2 * x.a.val().min(x.a.prec())),
            Extension::Quadratic { .. } => {
                let va = 2 * x.a.val().min(x.a.prec());
                let vb = 2 * x.b.val().min(x.b.prec()) + self.alpha_val.0;
                HalfVal(va.min(vb).min(self.prec_of(x).0))
            }
        }
    }

    /// Absolute precision of `x`, in halves of `ord_p`.
    pub fn prec_of(&self, x: &Lx) -> HalfVal {
        match &self.ext {
            Extension::Trivial => HalfVal(2 * x.a.prec().min(EXACT / 4)),
            Extension::Quadratic { .. } => {
                let pa = 2 * x.a.prec().min(EXACT / 4);
                let pb = 2 * x.b.prec().min(EXACT / 4) + self.alpha_val.0;
                HalfVal(pa.min(pb))
            }
        }
    }

    /// Valuation of the generator α (half units).
    pub fn alpha_val(&self) -> HalfVal {
        self.alpha_val
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ram() -> FieldConfig {
        let t = Qp::from_i64(3, 3, 30);
        let nrm = Qp::from_i64(3, 3, 30);
        FieldConfig::quadratic(3, 30, t, nrm)
    }

    #[test]
    fn generator_satisfies_minimal_polynomial() {
        let f = ram();
        let a = f.generator().unwrap();
        let a2 = f.mul(&a, &a);
        // α² = 3α − 3
        let rhs = Lx { a: Qp::from_i64(3, -3, 30), b: Qp::from_i64(3, 3, 30) };
        assert!(a2.same_as(&rhs));
        assert_eq!(f.val(&a), HalfVal(1));
    }

    #[test]
    fn inverse_roundtrip() {
        let f = ram();
        let x = Lx { a: Qp::from_i64(3, 7, 30), b: Qp::from_i64(3, 5, 30) };
        let y = f.inv(&x).unwrap();
        assert!(f.mul(&x, &y).same_as(&f.one()));
    }

    #[test]
    fn division_by_uniformizer_costs_half_a_digit() {
        let f = ram();
        let x = Lx { a: Qp::from_i64(3, 2, 10), b: Qp::from_i64(3, 1, 10) };
        let before = f.prec_of(&x);
        let q = f.div(&x, &f.generator().unwrap()).unwrap();
        assert_eq!(f.prec_of(&q), before - HalfVal(1));
    }
}
