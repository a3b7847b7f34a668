use num_rational::Ratio;
use serde_json::{json, Value};

use crate::padic::{FieldConfig, Qp};

use super::{omega_block, IwasawaError, Modulus, TruncPoly};

/// `log_p` of a norm; `None` stands for the norm of zero.
pub type LogNorm = Option<Ratio<i64>>;

/// Bracket `lower ≤ log_p ‖F‖_ρ ≤ upper`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormBound {
    pub lower: LogNorm,
    pub upper: LogNorm,
}

fn max_log(a: LogNorm, b: Ratio<i64>) -> LogNorm {
    Some(match a {
        None => b,
        Some(x) => x.max(b),
    })
}

fn ratio_str(r: &LogNorm) -> Value {
    match r {
        None => Value::Null,
        Some(x) => Value::String(x.to_string()),
    }
}

impl NormBound {
    /// Lower and upper bounds as `p^{lower}`, `p^{upper}` floats (for display).
    pub fn to_f64(&self, p: u64) -> (f64, f64) {
        let f = |r: &LogNorm| match r {
            None => 0.0,
            Some(x) => (p as f64).powf(*x.numer() as f64 / *x.denom() as f64),
        };
        (f(&self.lower), f(&self.upper))
    }
}

/// Exponent of `ρ_t = p^{−1/(p^{t−1}(p−1))}` as a rational, `t ≥ 1`.
fn rho_exp(p: u64, t: u32) -> Ratio<i64> {
    let d = (p as i64).pow(t.saturating_sub(1)) * (p as i64 - 1);
    Ratio::new(-1, d)
}

/// Bracket for `‖F‖_{ρ_t}` (`t = 0` gives the Gauss norm `‖F‖`).
///
/// A coefficient that is zero at its precision contributes only to the
/// upper bound, at the size of its uncertainty.
pub fn sup_norm_at(f: &TruncPoly, t: u32, fc: &FieldConfig) -> NormBound {
    let p = f.p();
    let r = if t == 0 { Ratio::from_integer(0) } else { rho_exp(p, t) };
    let mut lower: LogNorm = None;
    let mut upper: LogNorm = None;
    let prec = f.prec_half(fc);
    for i in 0..f.len() {
        let c = f.coeff(i);
        let pos = r * i as i64;
        if c.is_zero() {
            continue;
        }
        let v = fc.val(&c);
        let term = Ratio::new(-v.0, 2) + pos;
        lower = max_log(lower, term);
        upper = max_log(upper, term);
    }
    if prec.0 < crate::padic::EXACT / 4 {
        // Unknown digits below the precision; ρ ≤ 1, so degree 0 is the worst place.
        upper = max_log(upper, Ratio::new(-prec.0, 2));
    }
    NormBound { lower, upper }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Consistent,
    Inconsistent,
}

/// Finite-level evidence for `F = O(log_p^r)`.
#[derive(Clone, Debug)]
pub struct GrowthEstimate {
    pub order: Ratio<i64>,
    /// `(t, upper bound of log_p(p^{−tr}‖F‖_{ρ_t}))`.
    pub witnesses: Vec<(u32, LogNorm)>,
    pub verdict: Verdict,
}

impl GrowthEstimate {
    /// Verdict: the last witness does not exceed the earlier maximum by more
    /// than a factor `p`. Raising `r` lowers later witnesses more, so the
    /// verdict is monotone in `r`.
    pub fn from_witnesses(order: Ratio<i64>, witnesses: Vec<(u32, LogNorm)>) -> Self {
        let verdict = match witnesses.split_last() {
            Some(((_, Some(last)), rest)) if !rest.is_empty() => {
                let prev = rest.iter().filter_map(|(_, w)| *w).max();
                match prev {
                    Some(m) if *last > m + 1 => Verdict::Inconsistent,
                    _ => Verdict::Consistent,
                }
            }
            _ => Verdict::Consistent,
        };
        GrowthEstimate { order, witnesses, verdict }
    }

    /// Largest witness, the constant `C` (as `log_p C`).
    pub fn constant(&self) -> LogNorm {
        self.witnesses.iter().filter_map(|(_, w)| *w).max()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "order": self.order.to_string(),
            "witnesses": self.witnesses.iter().map(|(t, w)| json!([t, ratio_str(w)])).collect::<Vec<_>>(),
            "log_constant": ratio_str(&self.constant()),
            "verdict": if self.verdict == Verdict::Consistent { "consistent with O(log^r)" } else { "inconsistent" },
        })
    }
}

/// Limit of a Perrin-Riou sequence `P_{n0}, P_{n0+1}, …`.
///
/// Checks `P_{n+1} ≡ P_n mod ω_{n,h}` (to `thresh` digits, default the working
/// precision) and that `‖p^{rn}P_n‖` does not blow up, then returns the last
/// term with a growth estimate at order `r`.
pub fn pr_limit(
    seq: &[TruncPoly],
    n0: u32,
    h: u32,
    r: Ratio<i64>,
    u: &Qp,
    fc: &FieldConfig,
    thresh: Option<i64>,
) -> Result<(TruncPoly, GrowthEstimate), IwasawaError> {
    let last = seq.last().ok_or_else(|| IwasawaError::InvalidInput("empty sequence".into()))?;
    for (i, w) in seq.windows(2).enumerate() {
        let n = n0 + i as u32;
        let m = Modulus::new(&omega_block(u, n, h)?)?;
        let d = m.rem_l(&w[1].sub(&w[0]));
        let t = thresh.unwrap_or_else(|| d.prec());
        let v = d.a.proven_val().min(d.b.proven_val());
        if !d.is_zero() && v < t {
            return Err(IwasawaError::CongruenceFailure(n as usize));
        }
    }
    let mut norms: Vec<LogNorm> = Vec::new();
    for (i, pn) in seq.iter().enumerate() {
        let n = (n0 + i as u32) as i64;
        let g = sup_norm_at(pn, 0, fc).lower.map(|x| x - r * n);
        if let (Some(cur), Some(prev)) = (g, norms.iter().filter_map(|x| *x).max()) {
            if cur > prev + 1 {
                return Err(IwasawaError::NormBlowup(n as usize));
            }
        }
        norms.push(g);
    }
    let n_max = n0 + seq.len() as u32 - 1;
    let witnesses = (1..=n_max.max(1))
        .map(|t| (t, sup_norm_at(last, t, fc).upper.map(|x| x - r * t as i64)))
        .collect();
    Ok((last.clone(), GrowthEstimate::from_witnesses(r, witnesses)))
}
