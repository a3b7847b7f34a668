use proptest::prelude::*;

use sharpflat::image::{
    construct_coleman_pair, error_charideal, image_membership, xi_factor, Bullet, ColemanNorm, Divisor, EtaClass, Mode,
    RatioTable,
};
use sharpflat::iwasawa::{crt_assemble, extract_blocks, twist_subst, TruncPoly};
use sharpflat::json::{scalar_from_json, scalar_json, trunc_from_json, trunc_json};
use sharpflat::logmat::{CnRep, LogMatrix};
use sharpflat::padic::{make_context, HeckeData, Lx, QpPoly};
use sharpflat::signed::{factor_block, in_kernel, synth_pair, SignedPair};
use sharpflat::suite::{random_series, random_unit, trial_rng, SuiteKind};
use sharpflat::twovar::{twist_halfweight, untwist_halfweight, Labels, TruncPoly2};

const N: i64 = 30;

fn ctx(which: usize) -> HeckeData {
    match which % 3 {
        0 => make_context(3, 2, 3, 1, 1, N).unwrap(),
        1 => make_context(5, 2, 0, -1, 2, N).unwrap(),
        _ => make_context(5, 4, 5, 1, 1, N).unwrap(),
    }
}

fn series(h: &HeckeData, cs: &[i64]) -> TruncPoly {
    TruncPoly::from_qp(QpPoly::from_i64s(h.p, cs, h.prec))
}

fn scalar(h: &HeckeData, a: i64, b: i64) -> Lx {
    match h.field.generator() {
        Some(g) => h.lx(a).add(&h.field.mul(&g, &h.lx(b))),
        None => h.lx(a),
    }
}

fn vanishes_to(x: &TruncPoly, h: &HeckeData, digits: i64) -> bool {
    x.is_zero() || x.val(&h.field).floor() >= digits
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 32, .. ProptestConfig::default() })]

    #[test]
    fn field_ring_axioms(which in 0usize..3, a in -500i64..500, b in -500i64..500, c in -500i64..500, d in -500i64..500) {
        let h = ctx(which);
        let f = &h.field;
        let x = scalar(&h, a, b);
        let y = scalar(&h, c, d);
        prop_assert!(f.mul(&x, &y).sub(&f.mul(&y, &x)).is_zero());
        prop_assert!(x.add(&y).sub(&y).sub(&x).is_zero());
        if !y.is_zero() {
            let q = f.div(&x, &y).unwrap();
            let back = f.mul(&q, &y).sub(&x);
            prop_assert!(back.is_zero() || f.val(&back).floor() >= N - 2 * f.val(&y).floor() - 2);
        }
    }

    #[test]
    fn scalar_json_roundtrip(which in 0usize..3, a in any::<i32>(), b in any::<i32>(), s in -3i64..3) {
        let h = ctx(which);
        let x = scalar(&h, a as i64, b as i64).mul_p_pow(s);
        let v = scalar_json(&x, &h.field, N);
        let y = scalar_from_json(&v, &h.field).unwrap();
        let d = y.sub(&x);
        prop_assert!(d.is_zero() || h.field.val(&d).floor() >= y.a.prec().min(y.b.prec()));
        // Canonical: encoding the decoded value gives the same JSON.
        prop_assert_eq!(scalar_json(&y, &h.field, N), v);
    }

    #[test]
    fn series_json_roundtrip(which in 0usize..3, cs in prop::collection::vec(-1000i64..1000, 0..12)) {
        let h = ctx(which);
        let t = series(&h, &cs);
        let v = trunc_json(&t, cs.len().max(1), &h.field, N);
        let (back, cap) = trunc_from_json(&v, &h.field).unwrap();
        prop_assert_eq!(cap, cs.len().max(1));
        prop_assert!(vanishes_to(&back.sub(&t), &h, N));
    }

    #[test]
    fn twist_then_untwist(which in 0usize..3, j in -3i64..4, cs in prop::collection::vec(-50i64..50, 1..11)) {
        let h = ctx(which);
        let u = h.u_pow(1);
        let t = series(&h, &cs);
        let back = twist_subst(&twist_subst(&t, j, &u).unwrap(), -j, &u).unwrap();
        prop_assert!(vanishes_to(&back.sub(&t), &h, N - 2));
    }

    #[test]
    fn halfweight_twist_roundtrip(cs in prop::collection::vec(-50i64..50, 1..11)) {
        let h = ctx(2);
        let t = series(&h, &cs);
        let back = untwist_halfweight(&twist_halfweight(&t, &h).unwrap(), &h).unwrap();
        prop_assert!(vanishes_to(&back.sub(&t), &h, N - 2));
    }

    #[test]
    fn crt_blocks_reassemble(n in 1u32..3, blocks in 1usize..4, seed in any::<u64>()) {
        let h = ctx(0);
        let u = h.u_pow(1);
        let mut rng = trial_rng(seed, SuiteKind::Roundtrip, n, 0);
        let len = blocks * (h.p as usize).pow(n);
        let poly = random_series(&mut rng, &h, len);
        let parts = extract_blocks(&poly, n, blocks, &u).unwrap();
        let out = crt_assemble(&parts, n, &u).unwrap();
        prop_assert!(vanishes_to(&out.poly.sub(&poly), &h, N - 2 * out.denom_exponent - 2));
    }

    #[test]
    fn membership_is_lambda_linear(which in 0usize..3, seed in any::<u64>()) {
        // Multiplying an image pair by a common unit series keeps it in the image.
        let h = ctx(which);
        let mut rng = trial_rng(seed, SuiteKind::Image, 1, 0);
        let table = RatioTable::build(&h, Mode::Coleman, ColemanNorm::Ratio).unwrap();
        for eta in EtaClass::all(&h) {
            let f1 = random_series(&mut rng, &h, 6);
            let noise = random_series(&mut rng, &h, 3);
            let (a, b) = construct_coleman_pair(&f1, &noise, eta, &table, &h).unwrap();
            prop_assert!(image_membership(&a, &b, eta, &h, Mode::Coleman, 1).unwrap().accepted);
            let w = TruncPoly::constant(&random_unit(&mut rng, &h)).add(&random_series(&mut rng, &h, 4).mul_p_pow(1));
            let (a, b) = (a.mul(&w, &h.field), b.mul(&w, &h.field));
            prop_assert!(image_membership(&a, &b, eta, &h, Mode::Coleman, 1).unwrap().accepted, "{eta}");
        }
    }

    #[test]
    fn synth_then_factor_recovers_class(seed in any::<u64>(), n in 1u32..3) {
        let h = ctx(0);
        let lm = LogMatrix::new(&h, CnRep::Compatible, 2).unwrap();
        let mut rng = trial_rng(seed, SuiteKind::Roundtrip, n, 0);
        let len = (h.km1() as usize) * (h.p as usize).pow(n);
        let sp = SignedPair::new(random_series(&mut rng, &h, len), random_series(&mut rng, &h, len), n, &h);
        let ep = synth_pair(&lm, &sp, n).unwrap();
        let back = factor_block(&lm, &ep, n).unwrap();
        prop_assert!(in_kernel(&lm, &back.sub(&sp, &h), n).unwrap().0);
    }

    #[test]
    fn first_variable_product_matches_full_product(seed in any::<u64>()) {
        let h = ctx(2);
        let f = &h.field;
        let mut rng = trial_rng(seed, SuiteKind::TwoVar, 1, 0);
        let caps = (6, 5);
        let rows: Vec<TruncPoly> = (0..caps.1).map(|_| random_series(&mut rng, &h, caps.0)).collect();
        let g = TruncPoly2::from_rows(h.p, rows, caps, Labels::PPc);
        let a = random_series(&mut rng, &h, 3);
        let via_full = g.mul_trunc(&TruncPoly2::from_first(&a, caps, Labels::PPc), f).unwrap();
        let packed = g.mul_first(&a, f).truncate(caps);
        prop_assert!(via_full.sub(&packed).unwrap().is_zero() || via_full.sub(&packed).unwrap().proven_val(f) >= N - 1);
        let b = random_series(&mut rng, &h, 3);
        let via_full = g.mul_trunc(&TruncPoly2::from_second(&b, caps, Labels::PPc), f).unwrap();
        let packed = g.mul_second(&b, f).truncate(caps);
        prop_assert!(via_full.sub(&packed).unwrap().is_zero() || via_full.sub(&packed).unwrap().proven_val(f) >= N - 1);
    }
}

#[test]
fn xi_times_error_is_delta_for_every_class() {
    for which in 0..3 {
        let h = ctx(which);
        let mut classes = EtaClass::all(&h);
        classes.push(EtaClass::Outside);
        classes.sort();
        classes.dedup();
        for eta in classes {
            let xi = xi_factor(eta, Bullet::Flat, &h);
            let d = Divisor::delta(h.k - 1);
            assert_eq!(xi.mul(&error_charideal(eta, &h, Mode::Coleman)), d);
            // At most one linear factor is removed.
            let removed = d.degree(h.p).unwrap() - xi.degree(h.p).unwrap();
            assert!(removed <= 1);
        }
    }
}

#[test]
fn coleman_kernel_forces_vanishing() {
    // (F_1, 0) is in the image for trivial η only if F_1(u^j − 1) = 0 where C ≠ 0.
    let h = ctx(0);
    let eta = EtaClass::of_power(0, &h);
    // k = 2: the only twist is j = 0, the point X = 0.
    let x = series(&h, &[0, 1, 4]);
    assert!(image_membership(&x, &series(&h, &[0]), eta, &h, Mode::Coleman, 1).unwrap().accepted);
    let shifted = x.add(&series(&h, &[1]));
    assert!(!image_membership(&shifted, &series(&h, &[0]), eta, &h, Mode::Coleman, 1).unwrap().accepted);
}
