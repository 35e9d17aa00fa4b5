//! Acceptance report: one PASS/FAIL line per criterion.

mod common;

use std::time::Instant;

use common::*;
use mero_core::bialg::{bialgebraicity_rank_test, Family, RankTestOptions};
use mero_core::error::Error;
use mero_core::json::rational_string;
use mero_core::mpf::{with_precision, Mpf};
use mero_core::periods::{algebraic_period_part, closed_form_period, default_path, default_paths, period_vector, tracked_pole_logs, quadrature_period};
use mero_core::scalar::{gq, ComplexExt, Real, Scalar};
use mero_core::strata::{residues, validate_signature, DiffConfig, Normalization};
use mero_core::torus::{embed, twisted_period_map};
use mero_core::varieties::arithmetic::{arithmetic_point_check, ArithmeticCase, RootOfUnity};
use mero_core::varieties::linear::{sm_membership, LinearVarietySpec};
use mero_core::BigComplex;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::Rng;

/// Criteria that cannot hold as stated; they are reported as FAIL without
/// failing the run.
const KNOWN_UNATTAINABLE: &[u32] = &[6];

struct Report {
    unexpected: Vec<u32>,
}

impl Report {
    fn line(&mut self, n: u32, ok: bool, detail: String) {
        let known = !ok && KNOWN_UNATTAINABLE.contains(&n);
        let tag = if ok { "PASS" } else { "FAIL" };
        let note = if known { " [known: see README]" } else { "" };
        println!("criterion {n:>2}: {tag}  {detail}{note}");
        if !ok && !known {
            self.unexpected.push(n);
        }
    }
}

const SIMPLE: [&[i64]; 3] = [&[1, 1, -1, -1, -1, -1], &[2, 1, -1, -1, -1, -1, -1], &[1, -1, -1, -1]];
const HIGHER: [&[i64]; 4] = [&[1, 1, -2, -2], &[1, 1, -1, -1, -2], &[2, 1, -3, -1, -1], &[2, -1, -1, -2]];

fn criterion_1() -> (bool, String) {
    let sigs: Vec<&[i64]> = SIMPLE.iter().chain(HIGHER.iter()).copied().collect();
    let mut r = rng(101);
    let mut count = 0;
    let mut bad = 0;
    for i in 0..1050 {
        let cfg = random_config(&mut r, sigs[i % sigs.len()], false);
        if !residues(&cfg).unwrap().total().is_zero() {
            bad += 1;
        }
        count += 1;
    }
    (bad == 0, format!("residue sum exactly 0 on {}/{count} configs over {} signatures", count - bad, sigs.len()))
}

fn criterion_2() -> (bool, String) {
    with_precision(256, || {
        let mut r = rng(102);
        let mut worst = [0f64; 2];
        let mut counts = [0usize; 2];
        for (class, sigs) in [&SIMPLE[..], &HIGHER[..]].iter().enumerate() {
            for i in 0..104 {
                let cfg = random_config(&mut r, sigs[i % sigs.len()], false);
                worst[class] = worst[class].max(max_oracle_gap(&cfg));
                counts[class] += 1;
            }
        }
        let sig = validate_signature(&[1, 1, -2, -2]).unwrap();
        let fixed = DiffConfig::new(sig, gq(1, 1), vec![gq(0, 1), gq(1, 1)], vec![gq(2, 1)], Normalization::Free).unwrap();
        let path = default_path::<_, Mpf>(&fixed, 1);
        let closed = closed_form_period(&fixed, 1, &path).unwrap();
        let quad = quadrature_period(&fixed, &path, &Mpf::from_f64(1e-15)).unwrap();
        let want = antiderivative_value();
        let fixed_gap = ComplexExt::abs(&(closed - BigComplex::new(want.clone(), Mpf::from_i64(0)))).to_f64();
        let quad_gap = ComplexExt::abs(&(quad - BigComplex::new(want.clone(), Mpf::from_i64(0)))).to_f64();
        let literal = (want.to_f64() + 0.0794415417).abs();

        // Keeping an extra factor λ on the log part disagrees with quadrature.
        let mut with_lambda = f64::INFINITY;
        for _ in 0..10 {
            let mut cfg = random_config(&mut r, SIMPLE[0], false);
            cfg.lambda = gq(3, 1) * cfg.lambda.clone();
            let path = default_path::<_, Mpf>(&cfg, 1);
            let closed = closed_form_period(&cfg, 1, &path).unwrap();
            let falg: BigComplex = algebraic_period_part(&cfg).unwrap()[0].to_complex();
            let variant = falg.clone() + cfg.lambda.to_complex::<Mpf>() * (closed - falg);
            let quad = quadrature_period(&cfg, &path, &Mpf::from_f64(1e-12)).unwrap();
            with_lambda = with_lambda.min(ComplexExt::abs(&(variant - quad)).to_f64());
        }
        let ok = counts[0] >= 100 && counts[1] >= 100 && worst[0] < 1e-9 && worst[1] < 1e-9 && fixed_gap < 1e-10 && quad_gap < 1e-10 && literal < 1e-10;
        (
            ok,
            format!(
                "max gap {:.1e} on {} simple-pole, {:.1e} on {} higher-order configs; 2 - 3 ln 2 off by {:.1e}; λ-on-log variant off by ≥ {:.1e}",
                worst[0], counts[0], worst[1], counts[1], fixed_gap.max(quad_gap), with_lambda
            ),
        )
    })
}

fn criterion_3() -> (bool, String) {
    with_precision(128, || {
        let mut r = rng(103);
        let mut worst = 0f64;
        let mut loops = 0;
        for i in 0..10 {
            let cfg = random_config(&mut r, [SIMPLE[0], HIGHER[1]][i % 2], false);
            let res = residues(&cfg).unwrap().finite;
            for k in 0..cfg.poles.len() {
                let want = <BigComplex as ComplexExt<Mpf>>::two_pi_i() * res[k].to_complex::<Mpf>();
                worst = worst.max(ComplexExt::abs(&(branch_shift(&cfg, 1, k) - want)).to_f64());
                loops += 1;
            }
        }
        (worst < 1e-9, format!("{loops} loops on 10 configs, max |shift - 2πi R_k| = {worst:.1e}"))
    })
}

fn criterion_4() -> (bool, String) {
    let mut r = rng(104);
    let mut closure_ok = 0;
    let mut total = 0;
    for i in 0..200 {
        let mu = [SIMPLE[0], SIMPLE[1], HIGHER[1], HIGHER[2]][i % 4];
        let cfg = random_config(&mut r, mu, true);
        total += 1;
        if embed(&cfg).unwrap().closure_relations_hold() {
            closure_ok += 1;
        }
    }
    let mut family_ok = 0;
    for _ in 0..50 {
        let cfg = example_family(random_alpha(&mut r), gq(1, 1)).canonicalize().unwrap();
        let tp = embed(&cfg).unwrap();
        total += 1;
        if tp.closure_relations_hold() {
            closure_ok += 1;
        }
        if tp.w[0][0] == gq(-1, 1) && tp.w[0][1].clone() * tp.w[0][2].clone() == gq(1, 1) {
            family_ok += 1;
        }
    }
    (
        closure_ok == total && family_ok == 50,
        format!("closure relations exact on {closure_ok}/{total}; w_1 = -1, w_2 w_3 = 1 on {family_ok}/50 example configs"),
    )
}

fn criterion_5() -> (bool, String) {
    with_precision(256, || {
        let mut r = rng(105);
        let mut worst = 0f64;
        for i in 0..50 {
            let cfg = random_config(&mut r, [SIMPLE[0], HIGHER[1], HIGHER[2]][i % 3], true);
            let paths = default_paths::<_, Mpf>(&cfg);
            let tpi = <BigComplex as ComplexExt<Mpf>>::two_pi_i();
            let v: Vec<Vec<BigComplex>> = paths
                .iter()
                .enumerate()
                .map(|(j, p)| tracked_pole_logs(&cfg, j + 1, p).unwrap().0.into_iter().map(|l| l / tpi.clone()).collect())
                .collect();
            let a = twisted_period_map(&cfg, &v).unwrap();
            let phi = period_vector(&cfg, &paths).unwrap().coordinates();
            for (x, y) in a.iter().zip(&phi) {
                worst = worst.max(ComplexExt::abs(&(x.clone() - y.clone())).to_f64());
            }
        }
        (worst < 1e-9, format!("50 canonical configs, max |A - φ| = {worst:.1e}"))
    })
}

fn criterion_6() -> (bool, String) {
    with_precision(256, || {
        // The stated member: q = (1), x_1 = 1/2, y_1 = -1/2. With one zero
        // beyond x_0 and two finite poles the order at ∞ is -2.
        let sig = validate_signature(&[1, 1, -1, -1, -2]).unwrap();
        let stated = DiffConfig::new(sig, gq(1, 1), vec![gq(0, 1), gq(1, 2)], vec![gq(1, 1), gq(-1, 2)], Normalization::Canonical).unwrap();
        let spec = LinearVarietySpec::new(vec![vec![q(1, 1)]], vec![vec![gq(0, 1), gq(0, 1)]], vec![q(1, 1)]).unwrap();
        let res = residues(&stated).unwrap().finite;
        let stated_ok = match sm_membership(&stated, &spec, &default_paths::<_, Mpf>(&stated)) {
            Ok(v) => v.algebraic && v.numeric_residual < 1e-10,
            Err(_) => false,
        };
        let stated_note = match sm_membership(&stated, &spec, &default_paths::<_, Mpf>(&stated)) {
            Err(Error::NotSimplePole) => format!("stated point lies in St(1,1,-1,-1,-2), not a simple-pole stratum, and R_1/R_0 = {} where q_1 = 1", rational_string(&(res[1].clone() / res[0].clone()).re)),
            Err(e) => format!("stated point: {e}"),
            Ok(v) => format!("stated point: algebraic = {}, residual {:.1e}", v.algebraic, v.numeric_residual),
        };

        let mut r = rng(106);
        let (mut members, mut member_ok, mut worst) = (0, 0, 0f64);
        let (mut others, mut other_fail) = (0, 0);
        while members < 20 {
            let (q1, q2) = (r.gen_range(1..=3), r.gen_range(1..=3));
            let y1 = random_y1(&mut r);
            let Some((cfg, spec)) = zh_member(&y1, q1, q2) else { continue };
            let v = sm_membership(&cfg, &spec, &default_paths::<_, Mpf>(&cfg)).unwrap();
            members += 1;
            worst = worst.max(v.numeric_residual);
            if v.algebraic && v.numeric_residual < 1e-10 {
                member_ok += 1;
            }
            let perturbed = if others % 2 == 0 {
                residue_variety_point(&(y1 + g(q(1, 500), q(0, 1))), &q(q1, 1), &q(q2, 1), &gq(1, 1)).unwrap()
            } else {
                let mut p = cfg.clone();
                p.zeros[1] = p.zeros[1].clone() + g(q(0, 1), q(1, 500));
                p
            };
            let v = sm_membership(&perturbed, &spec, &default_paths::<_, Mpf>(&perturbed)).unwrap();
            others += 1;
            if !v.algebraic {
                other_fail += 1;
            }
        }
        (
            stated_ok && member_ok == 20 && other_fail == 20,
            format!(
                "{stated_note}; Z_H members pass {member_ok}/20 (max residual {worst:.1e}); perturbed non-members fail {other_fail}/{others}"
            ),
        )
    })
}

fn criterion_7() -> (bool, String) {
    with_precision(128, || {
        let mut r = rng(107);
        let (mut residue_ok, mut identity_worst, mut rank_ok) = (0, 0f64, 0);
        let mut errors = Vec::new();
        for _ in 0..20 {
            let base = random_cover_base(&mut r);
            match check_cover_residues(&base) {
                Ok(()) => residue_ok += 1,
                Err(e) => errors.push(e),
            }
            identity_worst = identity_worst.max(pullback_gap(&base, &square_cover(), &mpf_c(0.31, 0.17), &mpf_c(1.7, 0.9)));
            match bialgebraicity_rank_test(&Family::Cover { base, cover: square_cover() }, None, &RankTestOptions::default()) {
                Ok(v) if v.dim_s == 2 && v.fib == 0 => rank_ok += 1,
                Ok(v) => errors.push(format!("dim_S = {}, fib = {}", v.dim_s, v.fib)),
                Err(e) => errors.push(e.to_string()),
            }
        }
        let ok = residue_ok == 20 && identity_worst < 1e-9 && rank_ok == 20;
        let mut detail = format!(
            "exact residues {residue_ok}/20; pullback identity max gap {identity_worst:.1e}; dim_S = 2, fib = 0 on {rank_ok}/20"
        );
        if let Some(e) = errors.first() {
            detail.push_str(&format!("; first error: {e}"));
        }
        (ok, detail)
    })
}

fn criterion_8() -> (bool, String) {
    with_precision(192, || {
        let mut r = rng(108);
        let mut ok = 0;
        let mut first = None;
        for _ in 0..20 {
            let (zeros, poles, c) = random_map(&mut r);
            match check_dlog(&zeros, &poles, &c) {
                Ok(()) => ok += 1,
                Err(e) => {
                    first.get_or_insert(e);
                }
            }
        }
        let mut detail = format!("integer residues = orders and zero orders = local degree - 1 on {ok}/20 maps");
        if let Some(e) = first {
            detail.push_str(&format!("; first error: {e}"));
        }
        (ok == 20, detail)
    })
}

fn criterion_9() -> (bool, String) {
    let mut r = rng(109);
    let mut family_ok = 0;
    for _ in 0..10 {
        let alpha = random_alpha(&mut r) + g(q(0, 1), q(r.gen_range(-3..=3), 5));
        let lambda = g(q(r.gen_range(1..=9), 2), q(r.gen_range(-9..=9), 2));
        let v = arithmetic_point_check(&example_family(alpha, lambda)).unwrap();
        let c = &v.certificate;
        let root = c.roots_of_unity.contains(&RootOfUnity { j: 1, k: 0, order: 2 });
        let pair = c.relations.iter().any(|rel| {
            let e = &rel.exponents;
            e[0].is_zero() && e[1] == e[2] && e[1].abs() == BigInt::from(1)
        });
        if v.arithmetic && c.case == ArithmeticCase::LogStratum && root && pair {
            family_ok += 1;
        }
    }
    let mut negative_ok = 0;
    let mut negatives = 0;
    while negatives < 10 {
        // Signatures with at least one relative period.
        let cfg = random_config(&mut r, HIGHER[negatives % 3], false);
        let falg_nonzero = algebraic_period_part(&cfg).unwrap().iter().any(|f| !f.is_zero());
        let res_nonzero = !residues(&cfg).unwrap().is_zero();
        if !(falg_nonzero && res_nonzero) {
            continue;
        }
        negatives += 1;
        if !arithmetic_point_check(&cfg).unwrap().arithmetic {
            negative_ok += 1;
        }
    }
    let mut exact_ok = 0;
    for i in 0..10 {
        let a = q(r.gen_range(-8..=8), 3);
        let b = loop {
            let b = q(r.gen_range(-8..=8), 2);
            if b != a {
                break b;
            }
        };
        let lambda = gq(r.gen_range(1..=7), 1);
        let (mu, zero): (&[i64], usize) = if i % 2 == 0 { (&[2, -4, 0], 2) } else { (&[1, -3, 0], 1) };
        let sig = validate_signature(mu).unwrap();
        let cfg = DiffConfig::new(sig, lambda, vec![g(a, q(0, 1))], vec![g(b, q(0, 1))], Normalization::Free).unwrap();
        debug_assert_eq!(cfg.signature.zero_orders()[0], zero);
        let v = arithmetic_point_check(&cfg).unwrap();
        if v.arithmetic && v.certificate.case == ArithmeticCase::ExactDifferential {
            exact_ok += 1;
        }
    }
    (
        family_ok == 10 && negative_ok == 10 && exact_ok == 10,
        format!(
            "example configs arithmetic with certificate {family_ok}/10; nonzero F^alg rejected {negative_ok}/10; exact differentials accepted {exact_ok}/10"
        ),
    )
}

fn criterion_10() -> (bool, String) {
    let mut r = rng(110);
    let mut ok = 0;
    let mut runs = 0;
    let mut first = None;
    let sigs: [&[i64]; 2] = [&[1, 1, -1, -1, -1, -1], &[1, 1, 1, -1, -1, -1, -1, -1]];
    for i in 0..6 {
        let base = random_config(&mut r, sigs[i % 2], true);
        runs += 1;
        match bialgebraicity_rank_test(&Family::ResidueFiber { base }, None, &RankTestOptions { seed: i as u64, ..Default::default() }) {
            Ok(v) if v.dim_asv == v.dim_s && v.inequalities_hold => ok += 1,
            Ok(v) => {
                first.get_or_insert(format!("dim_S = {}, dim_ASV = {}, inequalities {}", v.dim_s, v.dim_asv, v.inequalities_hold));
            }
            Err(e) => {
                first.get_or_insert(e.to_string());
            }
        }
    }
    let mut detail = format!("residue fibers with dim_ASV = dim_S, inequalities at every sample, ranks equal at 256 and 512 bits: {ok}/{runs}");
    if let Some(e) = first {
        detail.push_str(&format!("; first failure: {e}"));
    }
    (ok == runs, detail)
}

fn main() {
    let start = Instant::now();
    let mut report = Report { unexpected: Vec::new() };
    let criteria: [fn() -> (bool, String); 10] = [
        criterion_1,
        criterion_2,
        criterion_3,
        criterion_4,
        criterion_5,
        criterion_6,
        criterion_7,
        criterion_8,
        criterion_9,
        criterion_10,
    ];
    for (i, c) in criteria.iter().enumerate() {
        let (ok, detail) = c();
        report.line(i as u32 + 1, ok, detail);
    }
    println!("acceptance finished in {:.1} s", start.elapsed().as_secs_f64());
    if !report.unexpected.is_empty() {
        eprintln!("unexpected failures: {:?}", report.unexpected);
        std::process::exit(1);
    }
}
