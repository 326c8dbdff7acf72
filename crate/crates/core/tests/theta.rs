use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;

use indeftheta::families::zagier;
use indeftheta::poly::{hat, GaussRat, HomPoly};
use indeftheta::qform::{classify_vector, ConeVector, QuadraticForm};
use indeftheta::qseries::{EvalPoint, TailBound};
use indeftheta::rat::{int, rat, vec_int, Rat};
use indeftheta::special::beta_half;
use indeftheta::theta::{
    almost_holo_eval, coset_reps, holomorphic_expansion, nonholo_eval, p_c_eval, verify_exact, verify_modularity,
    Characteristics, EvalOptions, Move, ThetaSpec,
};

fn plane() -> (QuadraticForm, Vec<Rat>) {
    (QuadraticForm::new(vec![vec![0, 1], vec![1, 0]]).unwrap(), vec_int(&[-1, 1]))
}

fn cone(qf: &QuadraticForm, c0: &[Rat], v: &[i64]) -> ConeVector {
    classify_vector(qf, c0, &vec_int(v)).unwrap()
}

fn plane_spec(c1: &[i64], c2: &[i64], f: HomPoly) -> ThetaSpec {
    let (qf, c0) = plane();
    let chars = Characteristics::new(vec![rat(1, 5), rat(2, 7)], vec![rat(1, 3), rat(1, 5)]).unwrap();
    ThetaSpec::new(qf.clone(), c0.clone(), f, cone(&qf, &c0, c1), cone(&qf, &c0, c2), chars, false).unwrap()
}

/// Splits the kernel of a plane cone vector at `n` into `(sign, decaying part, majorant exponent)`
/// with `rho = sign - decaying part`.
fn kernel(c: &[f64; 2], n: &[f64; 2], y: f64) -> (f64, f64, f64) {
    let bc = c[0] * n[1] + c[1] * n[0];
    let qc = c[0] * c[1];
    let sg = if bc > 0.0 { 1.0 } else if bc < 0.0 { -1.0 } else { 0.0 };
    if qc == 0.0 {
        return (sg, 0.0, f64::INFINITY);
    }
    let z2 = bc * bc * y / -qc;
    (sg, sg * beta_half(z2).unwrap(), n[0] * n[1] * y + z2 / 2.0)
}

fn box_sum(c1: [f64; 2], c2: [f64; 2], pt: &EvalPoint, r: i64) -> Complex64 {
    let (a, b) = ([0.2, 2.0 / 7.0], [1.0 / 3.0, 0.2]);
    let mut s = Complex64::new(0.0, 0.0);
    for k1 in -r..=r {
        for k2 in -r..=r {
            let n = [a[0] + k1 as f64, a[1] + k2 as f64];
            let q = n[0] * n[1];
            let (s1, d1, m1) = kernel(&c1, &n, pt.y);
            let (s2, d2, m2) = kernel(&c2, &n, pt.y);
            let mut w = 0.0;
            if s1 != s2 && q * pt.y < 6.0 {
                w += s1 - s2;
            }
            if m1 < 6.0 {
                w -= d1;
            }
            if m2 < 6.0 {
                w += d2;
            }
            if w == 0.0 {
                continue;
            }
            let ph = 2.0 * PI * (q * pt.x + n[0] * b[1] + n[1] * b[0]);
            s += w * Complex64::from_polar((-2.0 * PI * q * pt.y).exp(), ph);
        }
    }
    s
}

#[test]
fn two_cusps_agree_three_ways() {
    let s = plane_spec(&[0, 1], &[-1, 0], HomPoly::constant(2, GaussRat::one()));
    let pt = EvalPoint::new(0.15, 0.8).unwrap();
    let opts = EvalOptions::with_tol(1e-11);
    let nh = nonholo_eval(&s, &pt, &opts).unwrap().value;
    let ah = almost_holo_eval(&s, &pt, &opts).unwrap().value;
    let ex = holomorphic_expansion(&s, &int(20)).unwrap().evaluate(&pt, &TailBound::new(2, 4.0), 1e-11).unwrap().value;
    let bx = box_sum([0.0, 1.0], [-1.0, 0.0], &pt, 400);
    for v in [ah, ex, bx] {
        assert!((nh - v).norm() < 1e-9, "{nh} vs {v}");
    }
}

#[test]
fn interior_cones_match_box_sum() {
    let pt = EvalPoint::new(-0.2, 0.7).unwrap();
    let opts = EvalOptions::with_tol(1e-11);
    for (c1, c2) in [([-1, 3], [-1, 1]), ([-1, 3], [-1, 0]), ([-2, 1], [0, 1])] {
        let s = plane_spec(&c1, &c2, HomPoly::constant(2, GaussRat::one()));
        let nh = nonholo_eval(&s, &pt, &opts).unwrap().value;
        let f = |c: [i64; 2]| [c[0] as f64, c[1] as f64];
        let bx = box_sum(f(c1), f(c2), &pt, 120);
        assert!((nh - bx).norm() < 1e-9, "{c1:?} {c2:?}: {nh} vs {bx}");
    }
}

#[test]
fn steep_slab_lines_stay_accurate() {
    let x = rat(1, 3);
    let t = rat(1, 50);
    let a = vec![t.clone(), &t * rat(2, 3), &t * rat(1, 2)];
    let b = vec![&t * rat(1, 3), t.clone(), &t * rat(3, 4)];
    let spec = zagier::zagier_spec(zagier::SeriesKind::T, 4, &x, a, b).unwrap();
    let e = holomorphic_expansion(&spec, &int(12)).unwrap();
    for y in [0.9, 1.5, 3.0] {
        let pt = EvalPoint::new(0.1, y).unwrap();
        let nh = nonholo_eval(&spec, &pt, &EvalOptions::with_tol(1e-9)).unwrap();
        let ex = e.evaluate_unchecked(&pt, &TailBound::new(0, 0.0));
        assert!((nh.value - ex.value).norm() < 1e-8 * (1.0 + ex.value.norm()), "y = {y}: {:?} vs {:?}", nh.value, ex.value);
    }
}

#[test]
fn s_law_on_the_plane() {
    let s = plane_spec(&[-1, 3], &[-1, 0], HomPoly::monomial(vec![1, 0], GaussRat::one()));
    for pt in [EvalPoint::new(0.3, 0.9).unwrap(), EvalPoint::new(-0.1, 1.3).unwrap()] {
        let r = verify_modularity(&s, &Move::S, &pt, 1e-8).unwrap();
        assert!(r.pass, "{r:?}");
    }
}

#[test]
fn coset_representatives() {
    let qf = QuadraticForm::new(vec![vec![0, 0, -4], vec![0, 2, 0], vec![-4, 0, 0]]).unwrap();
    let reps = coset_reps(&qf);
    assert_eq!(reps.len() as i64, qf.det().abs());
    for (i, r) in reps.iter().enumerate() {
        let image: Vec<Rat> = qf.matrix_rat().iter().map(|row| row.iter().zip(r).map(|(x, y)| x * y).sum()).collect();
        assert!(image.iter().all(|v| v.is_integer()));
        for s in &reps[..i] {
            let d: Vec<Rat> = r.iter().zip(s).map(|(x, y)| x - y).collect();
            assert!(!d.iter().all(|v| v.is_integer()), "{r:?} and {s:?} coincide");
        }
    }
}

#[test]
fn completion_kernel_parity() {
    let (qf, c0) = plane();
    let cones = [cone(&qf, &c0, &[-1, 3]), cone(&qf, &c0, &[0, 1])];
    for d in 0..4u32 {
        let f = HomPoly::monomial(vec![d, 0], GaussRat::one());
        let fh = hat(&qf, &f).unwrap();
        for c in &cones {
            for v in [[0.3, -0.7], [1.1, 0.4], [-2.0, 0.25]] {
                let p = p_c_eval(&qf, c, &fh, &v);
                let m = p_c_eval(&qf, c, &fh, &[-v[0], -v[1]]);
                let s = if d % 2 == 0 { -1.0 } else { 1.0 };
                assert!((m - s * p).norm() < 1e-13, "d = {d}");
            }
        }
    }
}

#[test]
fn inadmissible_cusp_needs_override() {
    let (qf, c0) = plane();
    let c1 = cone(&qf, &c0, &[0, 1]);
    let c2 = cone(&qf, &c0, &[-1, 0]);
    let one = HomPoly::constant(2, GaussRat::one());
    let chars = Characteristics::zero(2);
    assert!(ThetaSpec::new(qf.clone(), c0.clone(), one.clone(), c1.clone(), c2.clone(), chars.clone(), false).is_err());
    assert!(ThetaSpec::new(qf, c0, one, c1, c2, chars, true).is_ok());
}

fn zagier_lattice_spec(a: Vec<Rat>, b: Vec<Rat>, c1: &[i64]) -> Option<ThetaSpec> {
    let qf = QuadraticForm::new(vec![vec![0, 0, -4], vec![0, 2, 0], vec![-4, 0, 0]]).unwrap();
    let c0 = vec_int(&[-1, 0, -1]);
    let c1 = classify_vector(&qf, &c0, &vec_int(c1))?;
    let c2 = classify_vector(&qf, &c0, &vec_int(&[0, 0, -1]))?;
    let f = HomPoly::linear(&[int(1), int(0), int(1)]);
    ThetaSpec::new(qf, c0, f, c1, c2, Characteristics::new(a, b).ok()?, false).ok()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn exact_laws_hold(
        an in prop::collection::vec(1i64..12, 3),
        bn in prop::collection::vec(0i64..12, 3),
        c1 in prop::sample::select(vec![[-1i64, 0, -1], [-1, 2, -1], [-4, 4, -1], [-1, 0, 0]]),
    ) {
        let a: Vec<Rat> = an.iter().map(|&k| rat(k, 13)).collect();
        let b: Vec<Rat> = bn.iter().map(|&k| rat(k, 11)).collect();
        if let Some(s) = zagier_lattice_spec(a, b, &c1) {
            let order = int(6);
            for mv in [
                Move::ShiftA(vec![1, -1, 2]),
                Move::ShiftB(vec![rat(1, 4), rat(1, 2), int(0)]),
                Move::Negate,
                Move::T,
            ] {
                prop_assert!(verify_exact(&s, &mv, &order).unwrap(), "{}", mv.name());
            }
        }
    }

    #[test]
    fn expansion_matches_evaluation(x in -0.5f64..0.5, y in 0.6f64..1.5) {
        let s = plane_spec(&[0, 1], &[-1, 0], HomPoly::constant(2, GaussRat::one()));
        let pt = EvalPoint::new(x, y).unwrap();
        let opts = EvalOptions::with_tol(1e-10);
        let v = nonholo_eval(&s, &pt, &opts).unwrap().value;
        let e = holomorphic_expansion(&s, &int(12)).unwrap().evaluate_unchecked(&pt, &TailBound::new(0, 0.0)).value;
        prop_assert!((v - e).norm() < 1e-8 * (1.0 + v.norm()));
    }
}
