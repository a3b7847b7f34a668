use crate::padic::{Qp, QpPoly};

use super::{gadget_omega, twist_subst, IwasawaError, Modulus, TruncPoly};

/// Result of [`crt_assemble`].
#[derive(Clone, Debug)]
pub struct CrtOutput {
    pub poly: TruncPoly,
    /// p-adic valuation of the largest constant divided by.
    pub denom_exponent: i64,
}

/// `ω_n(u^{−j}(1+X) − 1) = u^{−jp^n}(1+X)^{p^n} − 1`.
fn twisted_omega(u: &Qp, n: u32, j: i64) -> Result<QpPoly, IwasawaError> {
    let w = TruncPoly::from_qp(gadget_omega(u.p(), n));
    Ok(twist_subst(&w, -j, u)?.a)
}

/// The unique `P` of degree `< h·p^n` with
/// `P ≡ Q_j(u^{−j}(1+X) − 1) mod ω_n(u^{−j}(1+X) − 1)` for `j < h`.
///
/// Modulo the `j`-th modulus, `(1+X)^{p^n} ≡ u^{jp^n}`, so every other
/// modulus is the constant `u^{(j−j')p^n} − 1` there and the CRT idempotent
/// needs no polynomial inverse.
pub fn crt_assemble(blocks: &[TruncPoly], n: u32, u: &Qp) -> Result<CrtOutput, IwasawaError> {
    let p = u.p();
    let h = blocks.len();
    if h == 0 {
        return Err(IwasawaError::InvalidInput("no blocks".into()));
    }
    if h == 1 {
        return Ok(CrtOutput { poly: blocks[0].clone(), denom_exponent: 0 });
    }
    let pn = p.pow(n);
    let moduli: Vec<QpPoly> = (0..h as i64).map(|j| twisted_omega(u, n, j)).collect::<Result<_, _>>()?;
    let mut acc = TruncPoly::zero(p, u.prec());
    let mut denom = 0;
    for j in 0..h {
        let mut nj = QpPoly::from_i64s(p, &[1], i64::MAX);
        let mut cj = Qp::one(p);
        for jj in 0..h {
            if jj == j {
                continue;
            }
            nj = nj.mul(&moduli[jj]);
            let e = (j as i64 - jj as i64) * pn as i64;
            let ue = if e > 0 { u.pow(e as u32) } else { u.pow((-e) as u32).inv().map_err(|_| IwasawaError::ModuliNotCoprime)? };
            cj = cj.mul(&ue.sub(&Qp::one(p)));
        }
        if cj.is_zero() {
            return Err(IwasawaError::ModuliNotCoprime);
        }
        denom = denom.max(cj.val());
        let ci = cj.inv().map_err(|_| IwasawaError::ModuliNotCoprime)?;
        let tj = twist_subst(&blocks[j], -(j as i64), u)?;
        acc = acc.add(&tj.mul_qp(&nj).scale_qp(&ci));
    }
    Ok(CrtOutput { poly: acc, denom_exponent: denom })
}

/// Inverse of [`crt_assemble`]: `Q_j(Z) = P(u^j(1+Z) − 1) mod ω_n(Z)`.
pub fn extract_blocks(poly: &TruncPoly, n: u32, h: usize, u: &Qp) -> Result<Vec<TruncPoly>, IwasawaError> {
    let m = Modulus::new(&gadget_omega(u.p(), n))?;
    (0..h as i64).map(|j| Ok(m.rem_l(&twist_subst(poly, j, u)?))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_block_is_identity() {
        let u = Qp::from_i64(5, 6, 30);
        let q = TruncPoly::from_qp(QpPoly::from_i64s(5, &[1, 2, 3], 30));
        let out = crt_assemble(std::slice::from_ref(&q), 1, &u).unwrap();
        assert!(out.poly.same_as(&q));
        assert_eq!(out.denom_exponent, 0);
    }

    #[test]
    fn roundtrip_three_blocks() {
        let p = 7;
        let u = Qp::from_i64(p, 8, 40);
        let n = 1;
        let cs: Vec<i64> = (0..21).map(|i| (i * i * 31 + 5 * i + 2) % 1000).collect();
        let poly = TruncPoly::from_qp(QpPoly::from_i64s(p, &cs, 40));
        let blocks = extract_blocks(&poly, n, 3, &u).unwrap();
        let back = crt_assemble(&blocks, n, &u).unwrap();
        assert_eq!(back.denom_exponent, 2 * (n as i64 + 1));
        assert!(back.poly.same_as(&poly));
        // The constants are only known to precision 40, so their inverses cost twice.
        assert!(back.poly.prec() >= 40 - 2 * back.denom_exponent);
    }
}
