use crate::padic::{teichmuller, PadicError, Qp};

use super::TruncPoly;

/// Element of `Λ_L(Γ₀^cyc)` stored by isotypic components.
///
/// `components[i]` is the `ω^i`-part, where `ω` is the Teichmüller character
/// of the torsion subgroup `Δ ≅ (Z/p)^×`.
#[derive(Clone, Debug)]
pub struct GroupRingElem {
    pub components: Vec<TruncPoly>,
}

fn teich_table(p: u64, prec: i64) -> Result<Vec<Qp>, PadicError> {
    (1..p as i64).map(|r| teichmuller(p, r, prec)).collect()
}

impl GroupRingElem {
    /// From the coefficients `F_r` of the group elements `[r]`, `r = 1..p−1`:
    /// the `ω^i`-component is `Σ_r ω(r)^i F_r`.
    pub fn decompose(by_element: &[TruncPoly], prec: i64) -> Result<Self, PadicError> {
        let p = by_element.first().map(|f| f.p()).ok_or_else(|| PadicError::InvalidInput("empty".into()))?;
        if by_element.len() != p as usize - 1 {
            return Err(PadicError::InvalidInput(format!("expected {} components", p - 1)));
        }
        let w = teich_table(p, prec)?;
        let mut components = Vec::with_capacity(p as usize - 1);
        for i in 0..p - 1 {
            let mut acc = TruncPoly::zero(p, prec);
            for (r, fr) in by_element.iter().enumerate() {
                acc = acc.add(&fr.scale_qp(&w[r].pow(i as u32)));
            }
            components.push(acc);
        }
        Ok(GroupRingElem { components })
    }

    /// Inverse of [`GroupRingElem::decompose`]:
    /// `F_r = (p−1)^{−1} Σ_i ω(r)^{−i} F^{(i)}`.
    pub fn reassemble(&self, prec: i64) -> Result<Vec<TruncPoly>, PadicError> {
        let p = self.components.first().map(|f| f.p()).ok_or_else(|| PadicError::InvalidInput("empty".into()))?;
        let w = teich_table(p, prec)?;
        let inv = Qp::from_i64(p, p as i64 - 1, prec).inv()?;
        let mut out = Vec::with_capacity(p as usize - 1);
        for wr in &w {
            let mut acc = TruncPoly::zero(p, prec);
            for (i, fi) in self.components.iter().enumerate() {
                let e = ((p - 1) as usize - i) % (p as usize - 1);
                acc = acc.add(&fi.scale_qp(&wr.pow(e as u32)));
            }
            out.push(acc.scale_qp(&inv));
        }
        Ok(out)
    }

    pub fn component(&self, i: usize) -> &TruncPoly {
        &self.components[i]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::QpPoly;

    #[test]
    fn decompose_then_reassemble() {
        let p = 5;
        let els: Vec<TruncPoly> =
            (0..4).map(|r| TruncPoly::from_qp(QpPoly::from_i64s(p, &[r + 1, 2 * r, 7], 30))).collect();
        let g = GroupRingElem::decompose(&els, 30).unwrap();
        let back = g.reassemble(30).unwrap();
        for (x, y) in els.iter().zip(&back) {
            assert!(x.same_as(y));
        }
    }
}
