use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context as _, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use sharpflat::image::{image_membership, xi_factor, Bullet, EtaClass, Mode};
use sharpflat::iwasawa::{gadget, Gadget};
use sharpflat::json::{eigen_from_json, matrix_json, signed_json, trunc_from_json, trunc_json};
use sharpflat::logmat::{CnRep, LogMatrix};
use sharpflat::padic::{make_context_with_u, ppow, ContextJson, HeckeData, Qp, EXACT};
use sharpflat::signed::factor_block;
use sharpflat::suite::{gen_synthetic, level_cap, mat2x2_from_json, mat2x2_json, run_suite, RunConfig, SuiteKind};
use sharpflat::twovar::{derived_on_ac, synthesize_direct, to_cyc_ac, Labels, TruncPoly2, TwoVarLevel};

#[derive(Parser)]
#[command(name = "sharpflat", version, about = "Signed factorisation suites for supersingular logarithm matrices")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct Ctx {
    /// Read the context from a JSON file instead of the flags below.
    #[arg(long)]
    context: Option<PathBuf>,
    #[arg(long, default_value_t = 3)]
    p: u64,
    #[arg(long, default_value_t = 2)]
    k: u32,
    #[arg(long, default_value_t = 3, allow_hyphen_values = true)]
    ap: i64,
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    eps: i64,
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    c: i64,
    /// Topological generator of 1 + pZ_p; defaults to 1 + p.
    #[arg(long)]
    u: Option<i64>,
    /// Working precision N in p-adic digits.
    #[arg(long, default_value_t = 40)]
    prec: i64,
}

impl Ctx {
    fn load(&self) -> Result<HeckeData> {
        if let Some(path) = &self.context {
            let j: ContextJson = serde_json::from_value(read_json(path)?).context("context JSON")?;
            return HeckeData::from_json(&j).map_err(|e| anyhow!("{e}"));
        }
        let u = self.u.unwrap_or(1 + self.p as i64);
        make_context_with_u(self.p, self.k, self.ap, self.eps, self.c, u, self.prec).map_err(|e| anyhow!("{e}"))
    }

    fn config(&self) -> Result<RunConfig> {
        let h = self.load()?;
        Ok(RunConfig { p: h.p, k: h.k, ap: h.ap, eps: h.eps, c: h.c, u: Some(h.u), prec: h.prec, ..RunConfig::default() })
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Coleman,
    PerrinRiou,
}

#[derive(Clone, Copy, ValueEnum)]
enum BulletArg {
    Sharp,
    Flat,
}

#[derive(Clone, Copy, ValueEnum)]
enum GadgetArg {
    Phi,
    Omega,
    PhiBlock,
    OmegaBlock,
    Delta,
}

#[derive(Subcommand)]
enum Cmd {
    /// Logarithm-matrix approximant P_n and its precision ledger.
    GenMatrix {
        #[command(flatten)]
        ctx: Ctx,
        #[arg(long, default_value_t = 3)]
        n: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Coefficients of Φ_n, ω_n, their weight-h blocks and δ_h.
    Gadget {
        #[command(flatten)]
        ctx: Ctx,
        #[arg(long, value_enum)]
        kind: GadgetArg,
        #[arg(long, default_value_t = 1)]
        n: u32,
        /// Block width h (defaults to k − 1).
        #[arg(long)]
        h: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Factor an eigen-pair (or a file of them) into signed pairs.
    Factor {
        #[command(flatten)]
        ctx: Ctx,
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 3)]
        n: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Seeded synth/factor round trips.
    Roundtrip {
        #[command(flatten)]
        ctx: Ctx,
        #[arg(long, default_value_t = 3)]
        n: u32,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Membership of a pair in the image lattice.
    ImageCheck {
        #[command(flatten)]
        ctx: Ctx,
        #[arg(long)]
        pair: PathBuf,
        /// Class j of ω^j, or "none".
        #[arg(long)]
        eta: String,
        #[arg(long, value_enum, default_value = "coleman")]
        mode: ModeArg,
        #[arg(long, default_value_t = 2)]
        n: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The divisor ξ_{η,•}.
    Xi {
        #[command(flatten)]
        ctx: Ctx,
        #[arg(long)]
        eta: String,
        #[arg(long, value_enum)]
        bullet: BulletArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the doubly-signed factorisation of a signed 2×2 matrix.
    TwovarVerify {
        #[command(flatten)]
        ctx: Ctx,
        #[arg(long)]
        signed: PathBuf,
        /// Analytic side; recomputed independently when omitted.
        #[arg(long)]
        analytic: Option<PathBuf>,
        #[arg(long, default_value_t = 2)]
        n: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Derivative along the anticyclotomic line, as a T-series.
    DeriveAc {
        #[command(flatten)]
        ctx: Ctx,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run verification suites and write a report.
    RunSuite {
        #[command(flatten)]
        ctx: Ctx,
        #[arg(long, default_value_t = 3)]
        n: u32,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, default_value_t = 2)]
        twovar_trials: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Comma-separated subset of matrix-identities,roundtrip,image,twovar,growth;
        /// pass an empty string for none.
        #[arg(long)]
        suites: Option<String>,
        /// Override the guard valuation in the round-trip and two-variable thresholds.
        #[arg(long)]
        guard: Option<i64>,
        /// Use the literal product for C_n.
        #[arg(long)]
        product_rep: bool,
        /// Corrupt C_n at this level (fault-injection hook).
        #[arg(long)]
        fault_level: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write seeded synthetic inputs for the suites.
    GenSynthetic {
        #[command(flatten)]
        ctx: Ctx,
        #[arg(long, default_value_t = 2)]
        n: u32,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        twovar_trials: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

fn read_json(path: &Path) -> Result<Value> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn emit(v: &Value, out: Option<&Path>) -> Result<()> {
    let text = serde_json::to_string_pretty(v)? + "\n";
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn eta_arg(s: &str, h: &HeckeData) -> Result<EtaClass> {
    let s = s.trim_start_matches('j');
    EtaClass::parse(s, h).ok_or_else(|| anyhow!("bad --eta {s:?}: expected 0..{} or none", h.p - 2))
}

fn run(cmd: Cmd) -> Result<bool> {
    match cmd {
        Cmd::GenMatrix { ctx, n, out } => {
            let h = ctx.load()?;
            let lm = LogMatrix::new(&h, CnRep::Compatible, n).map_err(|e| anyhow!("{e}"))?;
            let pn = lm.mlog_approx(n).map_err(|e| anyhow!("{e}"))?;
            let cap = level_cap(&h, n);
            let mut v = matrix_json(&pn.e, cap, &h.field, h.prec);
            let det = lm.verify_det(n).map_err(|e| anyhow!("{e}"))?;
            v["context"] = json!(h.to_json());
            v["ledger"] = json!({
                "n": n,
                "deg_cap": cap,
                "min_prec": pn.min_prec().min(h.prec),
                "precision_loss": h.prec - pn.min_prec().min(h.prec),
                "det_unit_quotient": det.unit,
                "det_exact_eps_power": det.exact_eps_power,
            });
            emit(&v, out.as_deref())?;
            Ok(true)
        }
        Cmd::Gadget { ctx, kind, n, h: width, out } => {
            let h = ctx.load()?;
            let w = width.unwrap_or(h.k - 1);
            let kind = match kind {
                GadgetArg::Phi => Gadget::Phi(n),
                GadgetArg::Omega => Gadget::Omega(n),
                GadgetArg::PhiBlock => Gadget::PhiBlock(n, w),
                GadgetArg::OmegaBlock => Gadget::OmegaBlock(n, w),
                GadgetArg::Delta => Gadget::Delta(w),
            };
            // Twisted blocks involve u^{-j} and are only known to N digits.
            let exact = matches!(kind, Gadget::Phi(_) | Gadget::Omega(_)) || w == 1;
            let u = Qp::from_i64(h.p, h.u, if exact { EXACT } else { h.prec });
            let cap = kind.degree(h.p).unwrap_or(0);
            let g = gadget(kind, &u, cap).map_err(|e| anyhow!("{e}"))?;
            let m = ppow(h.p, h.prec);
            let coeffs: Vec<String> = g
                .coeffs()
                .iter()
                .map(|c| {
                    let r = c.residue().unwrap_or_default();
                    if exact { r } else { ((r % &m) + &m) % &m }.to_string()
                })
                .collect();
            let prec = if exact { Value::Null } else { json!(h.prec) };
            emit(
                &json!({ "p": h.p, "u": h.u, "kind": format!("{kind:?}"), "coeffs": coeffs, "prec": prec }),
                out.as_deref(),
            )?;
            Ok(true)
        }
        Cmd::Factor { ctx, input, n, out } => {
            let h = ctx.load()?;
            let lm = LogMatrix::new(&h, CnRep::Compatible, n).map_err(|e| anyhow!("{e}"))?;
            let v = read_json(&input)?;
            let items: Vec<Value> = match v.get("pairs") {
                Some(Value::Array(a)) => a.clone(),
                _ => vec![v],
            };
            let mut res = Vec::new();
            let mut ok = true;
            for item in &items {
                let ep = eigen_from_json(item, &h)?;
                match factor_block(&lm, &ep, n) {
                    Ok(sp) => res.push(signed_json(&sp, &h)),
                    Err(e) => {
                        ok = false;
                        res.push(json!({ "error": e.to_string() }));
                    }
                }
            }
            let out_v = if res.len() == 1 { res.pop().unwrap() } else { json!({ "level": n, "pairs": res }) };
            emit(&out_v, out.as_deref())?;
            Ok(ok)
        }
        Cmd::Roundtrip { ctx, n, trials, seed, out } => {
            let cfg = RunConfig { n_max: n, trials, seed, suites: vec![SuiteKind::Roundtrip], ..ctx.config()? };
            let r = run_suite(&cfg)?;
            eprint!("{}", r.summary());
            emit(&r.to_json(), out.as_deref())?;
            Ok(r.passed())
        }
        Cmd::ImageCheck { ctx, pair, eta, mode, n, out } => {
            let h = ctx.load()?;
            let eta = eta_arg(&eta, &h)?;
            let v = read_json(&pair)?;
            let f1 = trunc_from_json(&v["f1"], &h.field)?.0;
            let f2 = trunc_from_json(&v["f2"], &h.field)?.0;
            let mode = match mode {
                ModeArg::Coleman => Mode::Coleman,
                ModeArg::PerrinRiou => Mode::PerrinRiou,
            };
            let m = image_membership(&f1, &f2, eta, &h, mode, n)?;
            emit(
                &json!({
                    "eta": eta.to_string(),
                    "accepted": m.accepted,
                    "witness": m.witness.map(|w| w.to_string()),
                }),
                out.as_deref(),
            )?;
            Ok(m.accepted)
        }
        Cmd::Xi { ctx, eta, bullet, out } => {
            let h = ctx.load()?;
            let eta = eta_arg(&eta, &h)?;
            let b = match bullet {
                BulletArg::Sharp => Bullet::Sharp,
                BulletArg::Flat => Bullet::Flat,
            };
            emit(&xi_factor(eta, b, &h).to_json(), out.as_deref())?;
            Ok(true)
        }
        Cmd::TwovarVerify { ctx, signed, analytic, n, out } => {
            let h = ctx.load()?;
            let lm = LogMatrix::new(&h, CnRep::Compatible, n).map_err(|e| anyhow!("{e}"))?;
            let v = read_json(&signed)?;
            let sv = match v.get("matrices") {
                Some(Value::Array(a)) => a.first().cloned().ok_or_else(|| anyhow!("no matrices"))?,
                _ => v,
            };
            let s = mat2x2_from_json(&sv, &h)?;
            let level = TwoVarLevel::new(&lm, n)?;
            let l = match analytic {
                Some(p) => mat2x2_from_json(&read_json(&p)?, &h)?,
                None => synthesize_direct(&lm, &s, n)?,
            };
            let r = level.verify(&l, &s)?;
            let sl = level.verify_slice(&l, &s)?;
            let report = json!({
                "identity": if r.ok { "PASS" } else { "FAIL" },
                "slice": if sl.ok { "PASS" } else { "FAIL" },
                "worst_residual_val": r.worst_val.min(sl.worst_val),
                "threshold": r.threshold,
                "failing_entry": r.failing.or(sl.failing),
            });
            emit(&report, None)?;
            if let Some(o) = out {
                emit(&mat2x2_json(&l, &h), Some(&o))?;
            }
            Ok(r.ok && sl.ok)
        }
        Cmd::DeriveAc { ctx, input, out } => {
            let h = ctx.load()?;
            let g = TruncPoly2::from_json(&read_json(&input)?, &h.field)?;
            let g = if g.labels == Labels::PPc { to_cyc_ac(&g, &h.field)? } else { g };
            let d = derived_on_ac(&g, &h)?;
            let cap = g.caps.1;
            emit(&json!({ "variable": "T", "series": trunc_json(&d, cap, &h.field, h.prec) }), out.as_deref())?;
            Ok(true)
        }
        Cmd::RunSuite { ctx, n, trials, twovar_trials, seed, suites, guard, product_rep, fault_level, out } => {
            let suites = match suites {
                None => SuiteKind::ALL.to_vec(),
                Some(s) => s
                    .split(',')
                    .map(str::trim)
                    .filter(|x| !x.is_empty())
                    .map(str::parse)
                    .collect::<Result<Vec<SuiteKind>, _>>()?,
            };
            let base = if suites.is_empty() { RunConfig::default() } else { ctx.config()? };
            let cfg = RunConfig {
                n_max: n,
                trials,
                twovar_trials,
                twovar_level: n.min(2),
                seed,
                suites,
                guard,
                rep: if product_rep { CnRep::Product } else { CnRep::Compatible },
                fault_level,
                ..base
            };
            let r = run_suite(&cfg)?;
            print!("{}", r.summary());
            if let Some(o) = out {
                emit(&r.to_json(), Some(&o))?;
            }
            Ok(r.passed())
        }
        Cmd::GenSynthetic { ctx, n, trials, twovar_trials, seed, out } => {
            let cfg = RunConfig { n_max: n, trials, twovar_trials, twovar_level: n.min(2), seed, ..ctx.config()? };
            for p in gen_synthetic(&cfg, &out)? {
                println!("{}", p.display());
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
