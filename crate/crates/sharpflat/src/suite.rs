//! Seeded verification suites and machine-readable reports.
//!
//! Every trial draws from its own generator, seeded from `(seed, suite, level,
//! trial)`, so a failing check can be replayed alone from its witness.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use thiserror::Error;

use crate::image::{
    construct_coleman_pair, construct_pr_pair, image_membership, xi_factor, Bullet, ColemanNorm, Divisor, EtaClass,
    Factor, Mode, RatioEntry, RatioTable,
};
use crate::iwasawa::{delta, exact_divide_by, GrowthEstimate, TruncPoly, Verdict};
use crate::json::{eigen_json, matrix_json, signed_json, trunc_json};
use crate::logmat::{CnRep, LogMatrix};
use crate::padic::{make_context_with_u, ContextJson, HeckeData, Lx, Qp, QpPoly, EXACT};
use crate::signed::{factor_block, guard, in_kernel, synth_pair, SignedPair};
use crate::twovar::{synthesize_direct, Labels, Mat2x2, TruncPoly2, TwoVarLevel};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SuiteError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("I/O error: {0}")]
    Io(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SuiteKind {
    MatrixIdentities,
    Roundtrip,
    Image,
    TwoVar,
    Growth,
}

impl SuiteKind {
    pub const ALL: [SuiteKind; 5] =
        [SuiteKind::MatrixIdentities, SuiteKind::Roundtrip, SuiteKind::Image, SuiteKind::TwoVar, SuiteKind::Growth];

    pub fn name(self) -> &'static str {
        match self {
            SuiteKind::MatrixIdentities => "matrix-identities",
            SuiteKind::Roundtrip => "roundtrip",
            SuiteKind::Image => "image",
            SuiteKind::TwoVar => "twovar",
            SuiteKind::Growth => "growth",
        }
    }

    fn tag(self) -> u64 {
        self as u64 + 1
    }
}

impl fmt::Display for SuiteKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SuiteKind {
    type Err = SuiteError;
    fn from_str(s: &str) -> Result<Self, SuiteError> {
        SuiteKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| SuiteError::Config(format!("unknown suite {s:?}")))
    }
}

/// Everything a run depends on.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub p: u64,
    pub k: u32,
    pub ap: i64,
    pub eps: i64,
    pub c: i64,
    /// Defaults to `1 + p`.
    pub u: Option<i64>,
    pub prec: i64,
    pub n_max: u32,
    pub trials: usize,
    /// Two-variable trials are far more expensive; counted separately.
    pub twovar_trials: usize,
    pub twovar_level: u32,
    pub seed: u64,
    pub suites: Vec<SuiteKind>,
    /// Replaces `guard(h, n)` in the round-trip and two-variable thresholds.
    pub guard: Option<i64>,
    pub rep: CnRep,
    /// Test hook: corrupt `C_n` at this level before running.
    pub fault_level: Option<u32>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            p: 3,
            k: 2,
            ap: 3,
            eps: 1,
            c: 1,
            u: None,
            prec: 40,
            n_max: 3,
            trials: 50,
            twovar_trials: 2,
            twovar_level: 2,
            seed: 7,
            suites: SuiteKind::ALL.to_vec(),
            guard: None,
            rep: CnRep::Compatible,
            fault_level: None,
        }
    }
}

impl RunConfig {
    pub fn context(&self) -> Result<HeckeData, SuiteError> {
        let u = self.u.unwrap_or(1 + self.p as i64);
        make_context_with_u(self.p, self.k, self.ap, self.eps, self.c, u, self.prec)
            .map_err(|e| SuiteError::Config(e.to_string()))
    }

    fn threshold(&self, h: &HeckeData, n: u32, copies: i64) -> i64 {
        h.prec - copies * self.guard.unwrap_or_else(|| guard(h, n))
    }
}

/// One verdict with its measurements; a failure carries what is needed to replay it.
#[derive(Clone, Debug)]
pub struct Check {
    pub suite: SuiteKind,
    pub name: String,
    pub pass: bool,
    pub measured: Value,
    pub witness: Option<Value>,
}

impl Check {
    fn new(suite: SuiteKind, name: impl Into<String>, pass: bool, measured: Value, witness: Option<Value>) -> Self {
        Check { suite, name: name.into(), pass, measured, witness }
    }

    fn error(suite: SuiteKind, name: impl Into<String>, e: impl fmt::Display) -> Self {
        Check::new(suite, name, false, Value::Null, Some(json!({ "error": e.to_string() })))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "suite": self.suite.name(),
            "name": self.name,
            "verdict": if self.pass { "PASS" } else { "FAIL" },
            "measured": self.measured,
            "witness": self.witness,
        })
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub context: Option<ContextJson>,
    pub checks: Vec<Check>,
    /// Wall-clock milliseconds per suite; excluded from [`Report::to_json`].
    pub timings_ms: BTreeMap<String, u64>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn find(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Deterministic part of the report.
    pub fn to_json(&self) -> Value {
        json!({
            "context": self.context,
            "checks": self.checks.iter().map(Check::to_json).collect::<Vec<_>>(),
            "all_pass": self.passed(),
        })
    }

    pub fn to_json_with_timings(&self) -> Value {
        let mut v = self.to_json();
        v["timings_ms"] = json!(self.timings_ms);
        v
    }

    pub fn summary(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let tag = if c.pass { "PASS" } else { "FAIL" };
            out.push_str(&format!("{tag}  {:<18} {:<34} {}\n", c.suite.name(), c.name, c.measured));
            if let Some(w) = &c.witness {
                out.push_str(&format!("      witness: {w}\n"));
            }
        }
        let fails = self.failures().count();
        out.push_str(&format!("{} checks, {} failed\n", self.checks.len(), fails));
        out
    }
}

/// Generator for one trial.
pub fn trial_rng(seed: u64, suite: SuiteKind, n: u32, trial: usize) -> ChaCha8Rng {
    let mix = seed
        .wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(suite.tag() << 48)
        .wrapping_add((n as u64) << 32)
        .wrapping_add(trial as u64);
    ChaCha8Rng::seed_from_u64(mix)
}

fn random_zp(rng: &mut ChaCha8Rng, h: &HeckeData) -> Qp {
    let mut m = BigInt::from(0);
    for _ in 0..h.prec {
        m = m * h.p + rng.gen_range(0..h.p);
    }
    Qp::from_int(h.p, m, h.prec)
}

/// Uniform element of `O_L` modulo `p^N`.
pub fn random_scalar(rng: &mut ChaCha8Rng, h: &HeckeData) -> Lx {
    let a = random_zp(rng, h);
    let b = if h.field.is_quadratic() { random_zp(rng, h) } else { Qp::zero(h.p, EXACT) };
    Lx { a, b }
}

/// Polynomial of degree `< len` with coefficients uniform in `O_L` mod `p^N`.
pub fn random_series(rng: &mut ChaCha8Rng, h: &HeckeData, len: usize) -> TruncPoly {
    let xs: Vec<Lx> = (0..len).map(|_| random_scalar(rng, h)).collect();
    let a: Vec<QpPoly> = xs.iter().map(|x| QpPoly::constant(&x.a)).collect();
    let b: Vec<QpPoly> = xs.iter().map(|x| QpPoly::constant(&x.b)).collect();
    TruncPoly { a: QpPoly::interleave(h.p, &a, 1), b: QpPoly::interleave(h.p, &b, 1) }
}

/// A unit of `Z_p` drawn from `1..p`.
pub fn random_unit(rng: &mut ChaCha8Rng, h: &HeckeData) -> Lx {
    h.lx(rng.gen_range(1..h.p as i64))
}

pub fn random_grid(rng: &mut ChaCha8Rng, h: &HeckeData, caps: (usize, usize)) -> TruncPoly2 {
    let rows = (0..caps.1).map(|_| random_series(rng, h, caps.0)).collect();
    TruncPoly2::from_rows(h.p, rows, caps, Labels::PPc)
}

pub fn random_matrix(rng: &mut ChaCha8Rng, h: &HeckeData, caps: (usize, usize)) -> Mat2x2 {
    [[random_grid(rng, h, caps), random_grid(rng, h, caps)], [random_grid(rng, h, caps), random_grid(rng, h, caps)]]
}

/// Add a unit to one random coefficient of one random entry.
pub fn perturb_matrix(rng: &mut ChaCha8Rng, h: &HeckeData, s: &Mat2x2) -> (Mat2x2, Value) {
    let (i, l) = (rng.gen_range(0..2), rng.gen_range(0..2));
    let caps = s[i][l].caps;
    let (a, b) = (rng.gen_range(0..caps.0), rng.gen_range(0..caps.1));
    let e = random_unit(rng, h);
    let mut out = s.clone();
    let mono = TruncPoly::constant(&e).mul_xk(a);
    out[i][l].rows[b] = out[i][l].rows[b].add(&mono);
    (out, json!({ "entry": [i, l], "monomial": [a, b] }))
}

/// Degree bound `(k−1)p^n` for level-`n` data.
pub fn level_cap(h: &HeckeData, n: u32) -> usize {
    (h.k as usize - 1) * (h.p as usize).pow(n)
}

fn distinct_classes(h: &HeckeData) -> Vec<EtaClass> {
    let mut v = EtaClass::all(h);
    v.sort();
    v.dedup();
    v
}

/// Run the selected suites; errors inside a suite become failed checks.
pub fn run_suite(cfg: &RunConfig) -> Result<Report, SuiteError> {
    let mut report = Report { context: None, checks: Vec::new(), timings_ms: BTreeMap::new() };
    if cfg.suites.is_empty() {
        return Ok(report);
    }
    let h = cfg.context()?;
    report.context = Some(h.to_json());
    let n_max = cfg.n_max.max(cfg.twovar_level).max(1);
    let mut lm = LogMatrix::new(&h, cfg.rep, n_max).map_err(|e| SuiteError::Config(e.to_string()))?;
    if let Some(n) = cfg.fault_level {
        lm.inject_fault(n);
    }
    let mut suites = cfg.suites.clone();
    suites.sort();
    suites.dedup();
    for s in suites {
        let t = Instant::now();
        let checks = match s {
            SuiteKind::MatrixIdentities => matrix_identities(cfg, &lm),
            SuiteKind::Roundtrip => roundtrip(cfg, &lm),
            SuiteKind::Image => image_suite(cfg, &lm),
            SuiteKind::TwoVar => twovar_suite(cfg, &lm),
            SuiteKind::Growth => growth_suite(&lm),
        };
        report.checks.extend(checks);
        report.timings_ms.insert(s.name().to_string(), t.elapsed().as_millis() as u64);
    }
    Ok(report)
}

fn matrix_identities(cfg: &RunConfig, lm: &LogMatrix) -> Vec<Check> {
    let s = SuiteKind::MatrixIdentities;
    let h = &lm.h;
    let f = &h.field;
    let km1 = h.km1();
    let mut out = Vec::new();
    let t = h.prec - h.v_alpha_minus_beta().0 - km1;
    match lm.diagonalization_residual() {
        Ok(r) => {
            let v = r.min_val(f).floor();
            out.push(Check::new(s, "diagonalization", v >= t, json!({ "residual_val": v, "threshold": t }), None));
        }
        Err(e) => out.push(Check::error(s, "diagonalization", e)),
    }
    for n in 1..=cfg.n_max {
        let cn = match lm.cn(n) {
            Ok(c) => c,
            Err(e) => {
                out.push(Check::error(s, format!("C_{n} build"), e));
                continue;
            }
        };
        let cap = level_cap(h, n);
        let deg = cn.max_len();
        out.push(Check::new(s, format!("degree bound n={n}"), deg <= cap, json!({ "len": deg, "cap": cap }), None));
        let row2 = lm.phi_modulus(n).map(|m| {
            (0..2).map(|j| exact_divide_by(&cn.e[1][j], m, None).is_ok()).collect::<Vec<_>>()
        });
        match row2 {
            Ok(ok) => out.push(Check::new(
                s,
                format!("row 2 divisible n={n}"),
                ok.iter().all(|x| *x),
                json!({ "entries": ok }),
                None,
            )),
            Err(e) => out.push(Check::error(s, format!("row 2 divisible n={n}"), e)),
        }
        match lm.verify_det(n) {
            Ok(d) => {
                let pass = match cfg.rep {
                    CnRep::Compatible => d.unit,
                    CnRep::Product => d.exact_eps_power,
                };
                let witness = (!pass).then(|| json!({ "n": n, "quotient": trunc_json(&d.quotient, cap, f, h.prec) }));
                out.push(Check::new(
                    s,
                    format!("determinant n={n}"),
                    pass,
                    json!({ "unit_quotient": d.unit, "exact_eps_power": d.exact_eps_power }),
                    witness,
                ));
            }
            Err(e) => out.push(Check::new(
                s,
                format!("determinant n={n}"),
                false,
                Value::Null,
                Some(json!({ "n": n, "error": e.to_string() })),
            )),
        }
    }
    for n in 1..=cfg.n_max {
        for m in 0..n {
            let name = format!("compatibility m={m} n={n}");
            let t = h.prec - (n - m) as i64 * km1;
            match lm.compatibility_residual(m, n) {
                Ok(r) => {
                    let v = if r.is_zero() { r.min_prec() } else { r.row_val(0, f).min(r.row_val(1, f)).floor() };
                    let witness = (v < t).then(|| json!({ "m": m, "n": n }));
                    out.push(Check::new(s, name, v >= t, json!({ "residual_val": v, "threshold": t }), witness));
                }
                Err(e) => out.push(Check::error(s, name, e)),
            }
        }
    }
    out
}

fn roundtrip(cfg: &RunConfig, lm: &LogMatrix) -> Vec<Check> {
    let s = SuiteKind::Roundtrip;
    let h = &lm.h;
    let mut out = Vec::new();
    for n in 1..=cfg.n_max {
        let cap = level_cap(h, n);
        let t = cfg.threshold(h, n, 1);
        let mut exps = BTreeSet::new();
        let mut worst = i64::MAX;
        let mut witness = None;
        for trial in 0..cfg.trials {
            let mut rng = trial_rng(cfg.seed, s, n, trial);
            let x = SignedPair::new(random_series(&mut rng, h, cap), random_series(&mut rng, h, cap), n, h);
            let res = synth_pair(lm, &x, n)
                .and_then(|ep| factor_block(lm, &ep, n))
                .and_then(|y| Ok((in_kernel(lm, &y.sub(&x, h), n)?.1, y.denom_exponent)));
            match res {
                Ok((v, e)) => {
                    worst = worst.min(v);
                    exps.insert(e);
                    if v < t && witness.is_none() {
                        witness = Some(json!({ "n": n, "trial": trial, "seed": cfg.seed, "residual_val": v }));
                    }
                }
                Err(e) => {
                    if witness.is_none() {
                        witness = Some(json!({ "n": n, "trial": trial, "seed": cfg.seed, "error": e.to_string() }));
                    }
                }
            }
        }
        let pass = witness.is_none() && exps.len() <= 1;
        let witness = witness.or_else(|| (exps.len() > 1).then(|| json!({ "n": n, "s_values": exps })));
        out.push(Check::new(
            s,
            format!("factor/synth n={n}"),
            pass,
            json!({ "trials": cfg.trials, "s": exps, "worst_residual_val": worst, "threshold": t }),
            witness,
        ));
    }
    out
}

fn image_suite(cfg: &RunConfig, lm: &LogMatrix) -> Vec<Check> {
    let s = SuiteKind::Image;
    let h = &lm.h;
    let k = h.k;
    let mut out = Vec::new();
    let delta_div = Divisor::delta(k - 1);
    for eta in distinct_classes(h) {
        let sharp = xi_factor(eta, Bullet::Sharp, h);
        let flat = xi_factor(eta, Bullet::Flat, h);
        let quotient = delta_div.checked_div(&flat);
        let mut pass = sharp.is_unit() && quotient.as_ref().is_some_and(|q| q.mul(&flat) == delta_div);
        if k == 2 {
            let want = if matches!(eta, EtaClass::Power(0)) {
                Divisor::unit()
            } else {
                Divisor::from_factors([Factor::Lin(0)])
            };
            pass &= flat == want;
        }
        out.push(Check::new(
            s,
            format!("xi eta={eta}"),
            pass,
            json!({ "sharp": sharp.to_string(), "flat": flat.to_string() }),
            None,
        ));
    }
    let n = cfg.n_max.min(2).max(1);
    for mode in [Mode::Coleman, Mode::PerrinRiou] {
        let mname = if mode == Mode::Coleman { "coleman" } else { "perrin-riou" };
        let table = match RatioTable::build(h, mode, ColemanNorm::Ratio) {
            Ok(t) => t,
            Err(e) => {
                out.push(Check::error(s, format!("{mname} table"), e));
                continue;
            }
        };
        let (mut acc, mut rej, mut tot) = (0usize, 0usize, 0usize);
        let mut witness = None;
        let classes = distinct_classes(h);
        for trial in 0..cfg.trials {
            let eta = classes[trial % classes.len()];
            let mut rng = trial_rng(cfg.seed, s, n + 10 * (mode == Mode::PerrinRiou) as u32, trial);
            let cap = level_cap(h, n);
            let f1 = random_series(&mut rng, h, cap);
            let noise = random_series(&mut rng, h, cap.saturating_sub(k as usize - 1).max(1));
            let pair = match mode {
                Mode::Coleman => construct_coleman_pair(&f1, &noise, eta, &table, h),
                Mode::PerrinRiou => construct_pr_pair(lm, &f1, &noise, eta, n),
            };
            let (a, b) = match pair {
                Ok(x) => x,
                Err(e) => {
                    witness.get_or_insert(json!({ "trial": trial, "eta": eta.to_string(), "error": e.to_string() }));
                    continue;
                }
            };
            let e = random_unit(&mut rng, h);
            // Odd trials of the Perrin-Riou mode perturb by δ·e, invisible to the tame conditions.
            let bump = match delta(&h.u_pow(1), k - 1) {
                Ok(d) if mode == Mode::PerrinRiou && trial % 2 == 1 => TruncPoly::from_qp(d).scale(&e, &h.field),
                _ => TruncPoly::constant(&e),
            };
            let (pa, pb) = match mode {
                // F_2 is unconstrained at u^0−1 when the ratio there is infinite.
                Mode::Coleman if matches!(table.get(0, eta), RatioEntry::Infinite) => (a.add(&bump), b.clone()),
                Mode::Coleman => (a.clone(), b.add(&bump)),
                Mode::PerrinRiou => (a.add(&bump), b.clone()),
            };
            tot += 1;
            match (image_membership(&a, &b, eta, h, mode, n), image_membership(&pa, &pb, eta, h, mode, n)) {
                (Ok(good), Ok(bad)) => {
                    acc += good.accepted as usize;
                    rej += (!bad.accepted) as usize;
                    if (!good.accepted || bad.accepted) && witness.is_none() {
                        witness = Some(json!({
                            "trial": trial,
                            "eta": eta.to_string(),
                            "constructed_accepted": good.accepted,
                            "perturbed_accepted": bad.accepted,
                            "reason": good.witness.map(|w| w.to_string()),
                        }));
                    }
                }
                (Err(e), _) | (_, Err(e)) => {
                    witness.get_or_insert(json!({ "trial": trial, "eta": eta.to_string(), "error": e.to_string() }));
                }
            }
        }
        let pass = witness.is_none() && acc == cfg.trials && rej == cfg.trials;
        out.push(Check::new(
            s,
            format!("{mname} membership"),
            pass,
            json!({ "trials": tot, "accepted": acc, "perturbed_rejected": rej, "level": n }),
            witness,
        ));
    }
    out
}

fn twovar_suite(cfg: &RunConfig, lm: &LogMatrix) -> Vec<Check> {
    let s = SuiteKind::TwoVar;
    let h = &lm.h;
    let n = cfg.twovar_level;
    let level = match TwoVarLevel::new(lm, n) {
        Ok(l) => l,
        Err(e) => return vec![Check::error(s, format!("level n={n}"), e)],
    };
    let t = cfg.threshold(h, n, 2).max(1);
    let caps = level.caps();
    let (mut ok, mut slice_ok, mut rejected) = (0, 0, 0);
    let mut worst = i64::MAX;
    let mut witness = None;
    for trial in 0..cfg.twovar_trials {
        let mut rng = trial_rng(cfg.seed, s, n, trial);
        let m = random_matrix(&mut rng, h, caps);
        let run = || -> Result<(bool, bool, bool, i64, Value), crate::twovar::TwoVarError> {
            let analytic = synthesize_direct(lm, &m, n)?;
            let r = level.verify(&analytic, &m)?;
            let sl = level.verify_slice(&analytic, &m)?;
            let mut prng = trial_rng(cfg.seed ^ 0x5151, s, n, trial);
            let (bad, where_) = perturb_matrix(&mut prng, h, &m);
            let rb = level.verify(&analytic, &bad)?;
            Ok((r.worst_val >= t, sl.worst_val >= t, rb.worst_val < t, r.worst_val.min(sl.worst_val), where_))
        };
        match run() {
            Ok((a, b, c, v, where_)) => {
                ok += a as usize;
                slice_ok += b as usize;
                rejected += c as usize;
                worst = worst.min(v);
                if !(a && b && c) && witness.is_none() {
                    witness = Some(json!({
                        "trial": trial, "seed": cfg.seed, "identity": a, "slice": b,
                        "perturbation_rejected": c, "perturbation": where_,
                    }));
                }
            }
            Err(e) => {
                witness.get_or_insert(json!({ "trial": trial, "seed": cfg.seed, "error": e.to_string() }));
            }
        }
    }
    let pass = witness.is_none();
    vec![Check::new(
        s,
        format!("doubly-signed n={n}"),
        pass,
        json!({
            "trials": cfg.twovar_trials, "identity_pass": ok, "slice_pass": slice_ok,
            "perturbed_rejected": rejected, "worst_residual_val": worst, "threshold": t,
        }),
        witness,
    )]
}

fn estimate_json(g: &GrowthEstimate) -> Value {
    g.to_json()
}

fn growth_suite(lm: &LogMatrix) -> Vec<Check> {
    let s = SuiteKind::Growth;
    match lm.verify_growth() {
        Ok(g) => {
            let pass = g.row1.verdict == Verdict::Consistent && g.row2.verdict == Verdict::Consistent;
            vec![Check::new(
                s,
                "bounded rows",
                pass,
                json!({
                    "row1": estimate_json(&g.row1),
                    "row2": estimate_json(&g.row2),
                    "swapped_row1": estimate_json(&g.swapped_row1),
                }),
                None,
            )]
        }
        Err(e) => vec![Check::error(s, "bounded rows", e)],
    }
}

/// Write deterministic synthetic inputs into `dir`; returns the files written.
pub fn gen_synthetic(cfg: &RunConfig, dir: &Path) -> Result<Vec<PathBuf>, SuiteError> {
    let io = |e: std::io::Error| SuiteError::Io(e.to_string());
    let h = cfg.context()?;
    let n = cfg.n_max.max(1);
    let lm = LogMatrix::new(&h, cfg.rep, n.max(cfg.twovar_level)).map_err(|e| SuiteError::Config(e.to_string()))?;
    fs::create_dir_all(dir).map_err(io)?;
    let f = &h.field;
    let cap = level_cap(&h, n);
    let mut written = Vec::new();
    let mut put = |name: &str, v: &Value| -> Result<(), SuiteError> {
        let path = dir.join(name);
        let text = serde_json::to_string_pretty(v).map_err(|e| SuiteError::Io(e.to_string()))?;
        fs::write(&path, text + "\n").map_err(io)?;
        written.push(path);
        Ok(())
    };
    put("context.json", &serde_json::to_value(h.to_json()).map_err(|e| SuiteError::Io(e.to_string()))?)?;

    let mut pairs = Vec::new();
    let mut eigen = Vec::new();
    for trial in 0..cfg.trials {
        let mut rng = trial_rng(cfg.seed, SuiteKind::Roundtrip, n, trial);
        let x = SignedPair::new(random_series(&mut rng, &h, cap), random_series(&mut rng, &h, cap), n, &h);
        let ep = synth_pair(&lm, &x, n).map_err(|e| SuiteError::Config(e.to_string()))?;
        pairs.push(signed_json(&x, &h));
        eigen.push(eigen_json(&ep, &h));
    }
    put("signed_pairs.json", &json!({ "level": n, "pairs": pairs }))?;
    put("eigen_pairs.json", &json!({ "level": n, "pairs": eigen }))?;

    let table = RatioTable::build(&h, Mode::Coleman, ColemanNorm::Ratio).map_err(|e| SuiteError::Config(e.to_string()))?;
    let classes = distinct_classes(&h);
    let mut image = Vec::new();
    for trial in 0..cfg.trials {
        let eta = classes[trial % classes.len()];
        let mut rng = trial_rng(cfg.seed, SuiteKind::Image, n, trial);
        let f1 = random_series(&mut rng, &h, cap);
        let noise = random_series(&mut rng, &h, cap.saturating_sub(h.k as usize - 1).max(1));
        let (a, b) = construct_coleman_pair(&f1, &noise, eta, &table, &h).map_err(|e| SuiteError::Config(e.to_string()))?;
        let len = a.len().max(b.len());
        image.push(json!({
            "eta": eta.to_string(),
            "mode": "coleman",
            "f1": trunc_json(&a, len, f, h.prec),
            "f2": trunc_json(&b, len, f, h.prec),
        }));
    }
    put("image_pairs.json", &json!({ "pairs": image }))?;

    let lv = TwoVarLevel::new(&lm, cfg.twovar_level).map_err(|e| SuiteError::Config(e.to_string()))?;
    let mut mats = Vec::new();
    for trial in 0..cfg.twovar_trials {
        let mut rng = trial_rng(cfg.seed, SuiteKind::TwoVar, cfg.twovar_level, trial);
        let m = random_matrix(&mut rng, &h, lv.caps());
        mats.push(mat2x2_json(&m, &h));
    }
    put("doubly_signed.json", &json!({ "level": cfg.twovar_level, "matrices": mats }))?;

    let pn = lm.mlog_approx(n).map_err(|e| SuiteError::Config(e.to_string()))?;
    put("matrix.json", &matrix_json(&pn.e, cap, f, h.prec))?;
    Ok(written)
}

pub fn mat2x2_json(m: &Mat2x2, h: &HeckeData) -> Value {
    let e = |i: usize, j: usize| m[i][j].to_json(&h.field, h.prec);
    json!({ "entries": [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]] })
}

pub fn mat2x2_from_json(v: &Value, h: &HeckeData) -> Result<Mat2x2, crate::json::JsonError> {
    let e = |i: usize, j: usize| TruncPoly2::from_json(&v["entries"][i][j], &h.field);
    Ok([[e(0, 0)?, e(0, 1)?], [e(1, 0)?, e(1, 1)?]])
}
