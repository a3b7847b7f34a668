//! Worked examples checked against oracles computed here, independently of
//! the library code paths they test.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use sharpflat::image::{
    coleman_ratio, error_charideal, image_membership, pr_ratio, xi_factor, Bullet, Divisor, EtaClass, Factor,
    ImageWitness, Mode, RatioEntry,
};
use sharpflat::iwasawa::{gadget_omega, gadget_phi, sup_norm_at, TruncPoly};
use sharpflat::logmat::{build_aphi, build_q, CnRep, LogMatrix};
use sharpflat::padic::{log_of_u, make_context, teichmuller, HalfVal, HeckeData, Lx, Qp, QpPoly, EXACT};
use sharpflat::signed::{
    check_compatibility, constant_pair, factor_block, factor_limit, in_kernel, synth_pair, EigenPair, SignedError,
    SignedPair,
};

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn ratpow(x: i64, e: u32) -> BigRational {
    BigRational::from_integer(BigInt::from(x).pow(e))
}

/// Embed a rational in the context field.
fn embed(r: &BigRational, h: &HeckeData) -> Lx {
    let n = Qp::from_int(h.p, r.numer().clone(), h.prec);
    let d = Qp::from_int(h.p, r.denom().clone(), h.prec);
    h.field.from_qp(n.div(&d).unwrap())
}

fn poly(h: &HeckeData, cs: &[i64]) -> TruncPoly {
    TruncPoly::from_qp(QpPoly::from_i64s(h.p, cs, EXACT))
}

fn zero_to(x: &TruncPoly, h: &HeckeData, digits: i64) -> bool {
    x.is_zero() || x.val(&h.field).floor() >= digits
}

#[test]
fn ramified_context_has_half_slopes() {
    // X² − 3X + 3: discriminant −3, Newton polygon a single segment of slope 1/2.
    let h = make_context(3, 2, 3, 1, 1, 40).unwrap();
    let f = &h.field;
    assert!(f.is_quadratic());
    assert_eq!(h.ord_alpha, HalfVal(1));
    assert_eq!(h.ord_beta, HalfVal(1));
    assert!(h.alpha.add(&h.beta).sub(&h.lx(3)).is_zero());
    assert!(f.mul(&h.alpha, &h.beta).sub(&h.lx(3)).is_zero());
}

#[test]
fn split_contexts_have_distinct_slopes() {
    // X² − 5X + 125 over Q_5: Newton polygon vertices (0,3), (1,1), (2,0).
    let h = make_context(5, 4, 5, 1, 1, 40).unwrap();
    assert!(!h.field.is_quadratic());
    let mut s = [h.ord_alpha, h.ord_beta];
    s.sort();
    assert_eq!(s, [HalfVal(2), HalfVal(4)]);
}

#[test]
fn teichmuller_of_two_mod_25() {
    // Brute force: the lift of 2 mod 5 with t⁴ ≡ 1 mod 25.
    let t = (0..25).find(|t| t % 5 == 2 && (t * t * t * t) % 25 == 1).unwrap();
    assert_eq!(t, 7);
    let w = teichmuller(5, 2, 10).unwrap();
    assert_eq!(w.residue().unwrap() % 25, BigInt::from(t));
}

#[test]
fn log_valuation_matches_series() {
    // log(1+x) = Σ (−1)^{i+1} x^i / i with x = 25, summed in Q and reduced.
    let p = 5u64;
    let l = log_of_u(&Qp::from_i64(p, 26, 30)).unwrap();
    assert_eq!(l.val(), 2);
    let mut s = BigRational::zero();
    for i in 1..=20i64 {
        let term = ratpow(25, i as u32) / BigRational::from_integer(BigInt::from(i));
        s += if i % 2 == 1 { term } else { -term };
    }
    let want = Qp::from_int(p, s.numer().clone(), 30).div(&Qp::from_int(p, s.denom().clone(), 30)).unwrap();
    assert!(l.sub(&want).is_zero() || l.sub(&want).val() >= 28);
}

#[test]
fn phi_one_at_u_minus_one() {
    // Φ_1(1+3) = (4³ − 1)/3 = 21.
    let phi = gadget_phi(3, 1);
    let v = phi.eval(&Qp::from_i64(3, 3, EXACT));
    assert_eq!(v.residue().unwrap(), BigInt::from((4i64.pow(3) - 1) / 3));
}

#[test]
fn omega_is_binomial() {
    let w = gadget_omega(3, 2);
    let c = |i: usize| w.coeff(i).residue().unwrap();
    assert_eq!(c(0), BigInt::zero());
    assert_eq!(c(1), BigInt::from(9));
    assert_eq!(c(2), BigInt::from(36));
    assert_eq!(c(9), BigInt::one());
}

#[test]
fn phi_norm_at_first_radius() {
    // ‖X² + 3X + 3‖ at ρ = 3^{−1/2}: max(ρ², ρ/3, 1/3) = 1/3.
    let h = make_context(3, 2, 3, 1, 1, 40).unwrap();
    let b = sup_norm_at(&poly(&h, &[3, 3, 1]), 1, &h.field);
    assert_eq!(b.upper, Some(num_rational::Ratio::from_integer(-1)));
    assert_eq!(b.lower, b.upper);
}

#[test]
fn aphi_small_context() {
    let h = make_context(3, 2, 3, 1, 1, 40).unwrap();
    let a = build_aphi(&h);
    let want = [[rat(0, 1), rat(-1, 3)], [rat(1, 1), rat(1, 1)]];
    for i in 0..2 {
        for j in 0..2 {
            assert!(a.e[i][j].same_as(&embed(&want[i][j], &h)) || a.e[i][j].sub(&embed(&want[i][j], &h)).is_zero());
        }
    }
}

fn contexts() -> Vec<HeckeData> {
    let mut out = Vec::new();
    for (p, k, ap) in [(3, 2, 3), (5, 2, 0), (5, 4, 5), (7, 4, 7)] {
        for eps in [1, -1] {
            for c in [1, 2] {
                out.push(make_context(p, k, ap, eps, c, 40).unwrap());
            }
        }
    }
    out
}

#[test]
fn determinants_of_aphi_and_q() {
    for h in contexts() {
        let f = &h.field;
        // det A_φ = c²/(εp^{k−1}), det Q = εp^{k−1}(α − β).
        let pk = ratpow(h.p as i64, h.k - 1) * rat(h.eps, 1);
        let want = embed(&(rat(h.c * h.c, 1) / pk.clone()), &h);
        let d = build_aphi(&h).det(f);
        assert!(d.sub(&want).is_zero(), "det A_φ at {:?}", (h.p, h.k, h.ap, h.eps, h.c));
        let dq = build_q(&h).det(f);
        let want = f.mul(&embed(&pk, &h), &h.alpha.sub(&h.beta));
        assert!(dq.sub(&want).is_zero());
    }
}

#[test]
fn first_approximant_small_context() {
    // k = 2 makes the unit factor trivial: C_1 = [[a_p, 1], [−εΦ_1, 0]].
    let h = make_context(3, 2, 3, 1, 1, 40).unwrap();
    let lm = LogMatrix::new(&h, CnRep::Compatible, 1).unwrap();
    let c = lm.cn(1).unwrap();
    let want = [[poly(&h, &[3]), poly(&h, &[1])], [poly(&h, &[-3, -3, -1]), poly(&h, &[0])]];
    for i in 0..2 {
        for j in 0..2 {
            assert!(zero_to(&c.e[i][j].sub(&want[i][j]), &h, 40), "entry ({i},{j})");
        }
    }
    // det C_1 = Φ_1 by cofactor expansion.
    let det = c.e[0][0].mul(&c.e[1][1], &h.field).sub(&c.e[0][1].mul(&c.e[1][0], &h.field));
    assert!(zero_to(&det.sub(&poly(&h, &[3, 3, 1])), &h, 40));
}

#[test]
fn second_determinant_quotient_is_eps_squared() {
    for eps in [1, -1] {
        let h = make_context(3, 2, 3, eps, 1, 40).unwrap();
        let lm = LogMatrix::new(&h, CnRep::Compatible, 2).unwrap();
        let r = lm.verify_det(2).unwrap();
        assert!(r.unit);
        assert!(r.exact_eps_power);
        assert!(zero_to(&r.quotient.sub(&poly(&h, &[1])), &h, 30));
    }
}

#[test]
fn coleman_ratio_examples() {
    // (1 − 3)/(3 − 3 + 3) = −2/3.
    let h = make_context(3, 2, 3, 1, 1, 30).unwrap();
    let RatioEntry::Scalar(c) = coleman_ratio(0, true, &h).unwrap() else { panic!("expected a scalar") };
    assert!(c.sub(&embed(&rat(-2, 3), &h)).is_zero());
    assert!(coleman_ratio(0, false, &h).unwrap().is_zero_flag());

    // j = k − 2, a_p = 0: c(1−p)/(p + ε^{−1}p^{k−1}c²).
    for (eps, cc) in [(1i64, 1i64), (-1, 2), (1, 2)] {
        let h = make_context(5, 2, 0, eps, cc, 30).unwrap();
        let want = rat(cc * (1 - 5), 1) / (rat(5, 1) + rat(5 * cc * cc, eps));
        let RatioEntry::Scalar(c) = coleman_ratio(0, true, &h).unwrap() else { panic!("expected a scalar") };
        assert!(c.sub(&embed(&want, &h)).is_zero(), "ε={eps} c={cc}");
    }
}

/// `r + 1/r` for the trivial-branch Perrin-Riou ratio, from `α + β` and `αβ`
/// alone: with `N = (1−α/x)(1−y/β)` and `D` its conjugate, `r + 1/r =
/// ((N+D)² − 2ND)/(ND)` and both `N + D` and `ND` are symmetric.
fn pr_trace_oracle(h: &HeckeData, j: u32) -> BigRational {
    let s1 = rat(h.ap, 1);
    let s2 = ratpow(h.p as i64, h.k - 1) * rat(h.eps, 1);
    let x = ratpow(h.p as i64, j) * rat(h.c, 1);
    let y = ratpow(h.p as i64, j + 1) * rat(h.c, 1);
    let one = BigRational::one();
    let nd = (&one - &s1 / &x + &s2 / (&x * &x)) * (&one - &y * &s1 / &s2 + &y * &y / &s2);
    let sq = &s1 * &s1 - rat(2, 1) * &s2;
    let sum = rat(2, 1) - &s1 / &x - &y * &s1 / &s2 + (&y / &x) * sq / &s2;
    (&sum * &sum - rat(2, 1) * &nd) / nd
}

#[test]
fn pr_ratio_trivial_branch_against_symmetric_oracle() {
    for h in [make_context(3, 2, 3, 1, 1, 30).unwrap(), make_context(5, 4, 5, 1, 2, 30).unwrap()] {
        let f = &h.field;
        for j in 0..h.k - 1 {
            let r = match pr_ratio(j, 1, true, &h) {
                Ok(r) => r,
                Err(_) => continue,
            };
            let t = r.add(&f.inv(&r).unwrap());
            let d = t.sub(&embed(&pr_trace_oracle(&h, j), &h));
            assert!(d.is_zero() || f.val(&d).floor() >= 20, "j={j}");
        }
    }
    // For (3,2,3), j = 0 the trace is −1, so r is a primitive cube root of unity.
    let h = make_context(3, 2, 3, 1, 1, 30).unwrap();
    assert_eq!(pr_trace_oracle(&h, 0), rat(-1, 1));
    let f = &h.field;
    let r = pr_ratio(0, 1, true, &h).unwrap();
    let cube = f.mul(&r, &r).add(&r).add(&f.one());
    assert!(cube.is_zero() || f.val(&cube).floor() >= 20);
}

#[test]
fn pr_ratio_nontrivial_branch() {
    let h = make_context(5, 4, 5, 1, 1, 30).unwrap();
    let f = &h.field;
    let r = pr_ratio(0, 1, false, &h).unwrap();
    assert!(f.mul(&r, &h.alpha).sub(&h.beta).is_zero());
    // a_p = 0 gives β = −α, so (β/α)² = 1.
    let h = make_context(5, 2, 0, 1, 1, 30).unwrap();
    let r = pr_ratio(0, 2, false, &h).unwrap();
    assert!(r.sub(&h.field.one()).is_zero());
}

#[test]
fn xi_weight_two_examples() {
    let h = make_context(3, 2, 3, 1, 1, 30).unwrap();
    let triv = EtaClass::of_power(0, &h);
    let other = EtaClass::Outside;
    assert!(xi_factor(triv, Bullet::Flat, &h).is_unit());
    assert_eq!(xi_factor(other, Bullet::Flat, &h), Divisor::from_factors([Factor::Lin(0)]));
    for eta in [triv, other] {
        assert!(xi_factor(eta, Bullet::Sharp, &h).is_unit());
        assert_eq!(error_charideal(eta, &h, Mode::PerrinRiou), Divisor::from_factors([Factor::LogBlock(1)]));
    }
    assert_eq!(error_charideal(triv, &h, Mode::Coleman), Divisor::from_factors([Factor::Lin(0)]));
    assert!(error_charideal(other, &h, Mode::Coleman).is_unit());
}

#[test]
fn membership_of_trivial_and_constant_pairs() {
    let h = make_context(3, 2, 3, 1, 1, 30).unwrap();
    let z = poly(&h, &[0]);
    let one = poly(&h, &[1]);
    let eta = EtaClass::of_power(0, &h);
    assert!(image_membership(&z, &z, eta, &h, Mode::Coleman, 1).unwrap().accepted);
    // F_2(0) = 1 while C·F_1(0) = 0.
    let m = image_membership(&z, &one, eta, &h, Mode::Coleman, 1).unwrap();
    assert!(!m.accepted);
    assert!(matches!(m.witness, Some(ImageWitness::Tame { j: 0, .. })));
}

#[test]
fn constants_are_incompatible_at_level_one() {
    let h = make_context(3, 2, 3, 1, 1, 40).unwrap();
    let lm = LogMatrix::new(&h, CnRep::Compatible, 2).unwrap();
    let ep = EigenPair::new(poly(&h, &[1]), poly(&h, &[0]), 2, &h);
    let w = check_compatibility(&lm, &ep, 2).unwrap().expect("constants are incompatible");
    assert_eq!(w.m, 1);
}

#[test]
fn unit_signed_pair_round_trips() {
    for h in [make_context(3, 2, 3, 1, 1, 40).unwrap(), make_context(5, 4, 5, 1, 1, 40).unwrap()] {
        let lm = LogMatrix::new(&h, CnRep::Compatible, 2).unwrap();
        for n in 1..=2 {
            let sp = constant_pair(&h, 1, 0, n);
            let ep = synth_pair(&lm, &sp, n).unwrap();
            assert!(check_compatibility(&lm, &ep, n).unwrap().is_none());
            let back = factor_block(&lm, &ep, n).unwrap();
            assert!(in_kernel(&lm, &back.sub(&sp, &h), n).unwrap().0, "p={} n={n}", h.p);
        }
    }
}

#[test]
fn unit_pair_two_ways() {
    // P_1·(1,0)ᵀ mod ω_1 computed through A_φ²C_1 and through diag·Q^{−1}C_1.
    let h = make_context(3, 2, 3, 1, 1, 40).unwrap();
    let lm = LogMatrix::new(&h, CnRep::Compatible, 1).unwrap();
    let a = lm.mlog_approx(1).unwrap().clone();
    let b = lm.mlog_approx_via_aphi(1).unwrap();
    let m = lm.omega(1).unwrap();
    for i in 0..2 {
        let d = m.rem_l(&a.e[i][0]).sub(&m.rem_l(&b.e[i][0]));
        assert!(zero_to(&d, &h, 40 - sharpflat::signed::guard(&h, 1)), "row {i}");
    }
}

#[test]
fn tower_with_a_corrupted_level() {
    let h = make_context(3, 2, 3, 1, 1, 40).unwrap();
    let lm = LogMatrix::new(&h, CnRep::Compatible, 3).unwrap();
    let sp = |n| SignedPair::new(poly(&h, &[1, 2, 0, 1, 2, 1]), poly(&h, &[2, 0, 1, 1, 0, 2]), n, &h);
    let levels: Vec<EigenPair> = (1..=3).map(|n| synth_pair(&lm, &sp(n), n).unwrap()).collect();
    let (_, certs) = factor_limit(&lm, &levels).unwrap();
    assert_eq!(certs.len(), 2);

    let mut bad = levels.clone();
    bad[2].f_alpha = bad[2].f_alpha.add(&poly(&h, &[1]));
    assert!(matches!(factor_limit(&lm, &bad), Err(SignedError::InconsistentLevels(3))));
}

#[test]
fn growth_bounds_and_swapped_control() {
    use sharpflat::iwasawa::Verdict;
    let h = make_context(3, 2, 3, 1, 1, 40).unwrap();
    let g = LogMatrix::new(&h, CnRep::Compatible, 4).unwrap().verify_growth().unwrap();
    assert_eq!(g.row1.verdict, Verdict::Consistent);
    assert_eq!(g.row2.verdict, Verdict::Consistent);
    // Distinct slopes: measured against β, row 1 drifts upward by
    // ord β − ord α at every level while the true row stays flat.
    let h = make_context(5, 4, 5, 1, 1, 40).unwrap();
    let g = LogMatrix::new(&h, CnRep::Compatible, 4).unwrap().verify_growth().unwrap();
    assert_eq!(g.row1.verdict, Verdict::Consistent);
    let gap = num_rational::Ratio::new((h.ord_beta.0 - h.ord_alpha.0).abs(), 2);
    let flat: Vec<_> = g.row1.witnesses.iter().map(|w| w.1.unwrap()).collect();
    assert!(flat.windows(2).all(|w| w[0] == w[1]));
    let drift: Vec<_> = g.swapped_row1.witnesses.iter().map(|w| w.1.unwrap()).collect();
    assert!(drift.windows(2).all(|w| w[1] - w[0] == gap), "{drift:?}");
}
