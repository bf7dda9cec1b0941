use super::*;
use num_bigint::BigInt;
use crate::field_arith::{embeddings_g0, CyclotomicNumber};
use crate::forms::{extend_constant, make_canonical, make_metabolic, CanonicalBlock};
use crate::funcfield::parse_expression;
use crate::rational::{int, rat};

fn line(m: u64, eps: i8, s: &str) -> WittElement {
    let x = parse_expression(m, s).unwrap();
    WittElement::from_form(HermitianForm::diagonal(m, eps, &[x]).unwrap())
}

fn block(n: u64, j: u64, r: i64) -> WittElement {
    make_canonical(&int(0), &[CanonicalBlock { n, j, r: int(r) }]).unwrap()
}

fn ex(n: u64, j: i64) -> CirclePoint {
    CirclePoint::exact(n, j).unwrap()
}

fn ints(v: &[i64]) -> Vec<BigRational> {
    v.iter().map(|&x| int(x)).collect()
}

#[test]
fn exact_points_are_normalized() {
    assert_eq!(ex(8, 2), CirclePoint::Exact { n: 4, j: 1 });
    assert_eq!(ex(8, 0), CirclePoint::Exact { n: 1, j: 0 });
    assert_eq!(ex(6, -3), CirclePoint::Exact { n: 2, j: 1 });
}

#[test]
fn gaussian_block_step_function() {
    let w = block(4, 1, 1);
    let rho = Embedding::identity(4);
    let s = signature_step_function(&w, &rho).unwrap();
    assert_eq!(s.candidates(), &[ex(1, 0), ex(4, 3)]);
    assert_eq!(s.arc_values(), ints(&[-1, 1]).as_slice());
    assert_eq!(s.jump_values(), ints(&[-2, 2]));
    assert_eq!(s.samples(), &[ex(8, 1), ex(8, 7)]);
    assert_eq!(s.value_at(&rat(1, 2)), Some(int(-1)));
    assert_eq!(s.value_at(&rat(7, 8)), Some(int(1)));
    assert_eq!(s.value_at(&rat(3, 4)), None);
    let csv = s.to_csv();
    assert_eq!(csv, "angle_turns_lo,angle_turns_hi,value\n0/1,3/4,-1/1\n3/4,1/1,1/1\n");
    let tripled = signature_step_function(&block(4, 1, 3), &rho).unwrap();
    assert_eq!(tripled.jumps().into_iter().map(|x| x.1).collect::<Vec<_>>(), ints(&[-6, 6]));
}

#[test]
fn block_zero_sits_at_conjugate_point() {
    // zero of the block is -(1 - conj z)/(1 - z) = conj z
    for (n, j) in [(3u64, 1u64), (5, 2), (6, 1), (8, 3), (12, 5)] {
        let w = block(n, j, 2);
        let rho = Embedding::identity(w.conductor());
        let s = signature_step_function(&w, &rho).unwrap();
        let jumps = s.jumps();
        assert_eq!(jumps.len(), 2, "{n} {j}");
        let at = |p: &CirclePoint| jumps.iter().find(|x| &x.0 == p).map(|x| x.1.clone());
        assert_eq!(at(&ex(n, -(j as i64))), Some(int(4)));
        assert_eq!(at(&ex(1, 0)), Some(int(-4)));
    }
}

#[test]
fn trivial_examples() {
    let one = line(1, 1, "1");
    let s = signature_step_function(&one, &Embedding::identity(1)).unwrap();
    assert!(s.candidates().is_empty());
    assert_eq!(s.arc_values(), ints(&[1]).as_slice());
    assert!(s.jumps().is_empty());
    assert_eq!(s.to_csv(), "angle_turns_lo,angle_turns_hi,value\n0/1,1/1,1/1\n");

    let gram = vec![
        vec![parse_expression(1, "0").unwrap(), parse_expression(1, "t").unwrap()],
        vec![parse_expression(1, "t^-1").unwrap(), parse_expression(1, "1").unwrap()],
    ];
    let hyp = WittElement::from_form(HermitianForm::new(1, 1, gram).unwrap());
    assert!(jump_candidates(&hyp, &Embedding::identity(1)).unwrap().is_empty());
    let s = signature_step_function(&hyp, &Embedding::identity(1)).unwrap();
    assert!(s.is_zero() && s.jumps().is_empty());
}

#[test]
fn evaluation_examples() {
    let id = WittElement::from_form(HermitianForm::diagonal(1, 1, &[RationalFunction::one(1), RationalFunction::one(1)]).unwrap());
    for z in [ex(1, 0), ex(5, 2), ex(12, 7)] {
        assert_eq!(evaluate_class_at(&id, &Embedding::identity(1), &z).unwrap(), int(2));
    }
    let w = block(4, 1, 1);
    assert_eq!(evaluate_class_at(&w, &Embedding::identity(4), &ex(2, 1)).unwrap(), int(-1));
    let c = &CyclotomicNumber::zeta_power(3, 1) + &CyclotomicNumber::zeta_power(3, 2);
    let f = extend_constant(&ConstantForm::diagonal(3, 1, &[c]).unwrap());
    let w3 = WittElement::from_form(f);
    for rho in embeddings_g0(3) {
        assert_eq!(evaluate_class_at(&w3, &rho, &ex(7, 3)).unwrap(), int(-1));
    }
    let iso = CirclePoint::Isolated { lo: rat(1, 8), hi: rat(1, 4), summand: 0 };
    assert!(evaluate_class_at(&w, &Embedding::identity(4), &iso).is_err());
}

#[test]
fn pole_candidates_and_errors() {
    // 1 / (t + 1/t) = 1 / (2 cos), poles at +-i
    let w = line(1, 1, "1/(t + t^-1)");
    let rho = Embedding::identity(1);
    let s = signature_step_function(&w, &rho).unwrap();
    assert_eq!(s.candidates(), &[ex(4, 1), ex(4, 3)]);
    assert_eq!(s.arc_values(), ints(&[-1, 1]).as_slice());
    assert_eq!(
        evaluate_class_at(&w, &rho, &ex(4, 1)),
        Err(Error::SummandPole { summand: 0, n: 4, j: 1 })
    );
}

#[test]
fn isolated_zeros_off_the_lattice() {
    // 3t - 2 + 3/t = 6 cos - 2 vanishes at +-arccos(1/3)
    let w = line(1, 1, "3*t - 2 + 3*t^-1");
    let s = signature_step_function(&w, &Embedding::identity(1)).unwrap();
    assert_eq!(s.candidates().len(), 2);
    assert!(s.candidates().iter().all(|c| !c.is_exact()));
    assert_eq!(s.arc_values(), ints(&[-1, 1]).as_slice());
    let a = (1.0f64 / 3.0).acos() / std::f64::consts::TAU;
    assert!((midpoint_turns(&s.candidates()[0]) - a).abs() < 1e-8);
    let json = serde_json::to_value(&s).unwrap();
    assert_eq!(json["candidates"][0]["type"], "isolated");
    assert_eq!(json["arc_values"], serde_json::json!(["-1/1", "1/1"]));
}

#[test]
fn skew_forms_are_twisted() {
    // i * <i> = <-1>
    let w = line(4, -1, "i");
    let s = signature_step_function(&w, &Embedding::identity(4)).unwrap();
    assert_eq!(s.arc_values(), ints(&[-1]).as_slice());
    // <t - 1/t> over Q, skew; i (t - 1/t) = -2 sin, negative on the upper half
    let w = line(1, -1, "t - t^-1");
    let s = signature_step_function(&w, &Embedding::identity(1)).unwrap();
    assert_eq!(s.candidates(), &[ex(1, 0), ex(2, 1)]);
    assert_eq!(s.arc_values(), ints(&[-1, 1]).as_slice());
    assert_eq!(evaluate_class_at(&w, &Embedding::identity(1), &ex(4, 1)).unwrap(), int(-1));
}

#[test]
fn conjugate_embedding_mirrors() {
    let w = line(5, 1, "z*t + z^-1*t^-1 + 1/2");
    let rho = Embedding::new(5, 1).unwrap();
    let bar = rho.conjugate();
    let s = signature_step_function(&w, &bar).unwrap();
    for (p, v) in s.samples().iter().zip(s.arc_values()) {
        if let CirclePoint::Exact { n, j } = p {
            let mirrored = ex(*n, -(*j as i64));
            assert_eq!(&evaluate_class_at(&w, &rho, &mirrored).unwrap(), v);
        }
    }
}

#[test]
fn consistency_and_local_constancy() {
    let w = line(12, 1, "z*t + z^-1*t^-1 - 1/2").direct_sum(&block(3, 1, 1)).unwrap();
    for rho in embeddings_g0(w.conductor()) {
        let s = signature_step_function(&w, &rho).unwrap();
        for (i, p) in s.samples().iter().enumerate() {
            assert_eq!(evaluate_class_at(&w, &rho, p).unwrap(), s.arc_values()[i]);
        }
        for (i, (lo, hi, v)) in s.arcs().into_iter().enumerate() {
            // a second root of unity in the same arc
            let mut n = 64u64;
            let p = loop {
                let j: BigInt = (&lo * BigRational::from_integer(n.into())).floor().to_integer() + 1;
                let q = BigRational::new(j.clone(), n.into());
                if q < hi && CirclePoint::exact(n, j.to_i64().unwrap()).unwrap() != s.samples()[i] {
                    break CirclePoint::exact(n, j.to_i64().unwrap()).unwrap();
                }
                n *= 2;
            };
            assert_eq!(&evaluate_class_at(&w, &rho, &p).unwrap(), v);
        }
    }
}

#[test]
fn additivity_and_scaling() {
    let a = block(4, 1, 1);
    let b = make_canonical(&int(1), &[CanonicalBlock { n: 2, j: 1, r: int(2) }]).unwrap();
    let rho = Embedding::identity(4);
    let sa = signature_step_function(&a, &rho).unwrap();
    let sb = signature_step_function(&b, &rho).unwrap();
    let sum = signature_step_function(&a.direct_sum(&b).unwrap(), &rho).unwrap();
    for p in sum.samples() {
        let x = p.angle_lo();
        assert_eq!(sum.value_at(&x).unwrap(), sa.value_at(&x).unwrap() + sb.value_at(&x).unwrap());
    }
    for r in [rat(1, 2), int(-3)] {
        let sc = signature_step_function(&a.scale(&r), &rho).unwrap();
        assert_eq!(sc.candidates(), sa.candidates());
        let scaled: Vec<_> = sa.arc_values().iter().map(|v| v * &r).collect();
        assert_eq!(sc.arc_values(), scaled.as_slice());
    }
}

#[test]
fn spurious_candidates_merge_away() {
    let w = block(4, 1, 1);
    let rho = Embedding::identity(4);
    let extra: Vec<_> = (0..16).map(|j| ex(16, j)).collect();
    let plain = signature_step_function(&w, &rho).unwrap();
    let noisy = signature_step_function_with(&w, &rho, &Settings::default(), &extra).unwrap();
    assert_eq!(noisy.candidates().len(), 16);
    let (a, b) = (plain.merged(), noisy.merged());
    assert_eq!(a.candidates(), b.candidates());
    assert_eq!(a.arc_values(), b.arc_values());
}

#[test]
fn metabolic_forms_vanish() {
    for (m, seed) in [(1u64, 7u64), (4, 1), (5, 2)] {
        let w = WittElement::from_form(make_metabolic(m, 2, 1, seed).unwrap());
        for rho in embeddings_g0(m) {
            let s = signature_step_function(&w, &rho).unwrap();
            assert!(s.is_zero(), "m = {m}, seed = {seed}");
        }
    }
}

#[test]
fn numeric_matches_exact() {
    let w = block(4, 1, 1).direct_sum(&line(4, 1, "t + t^-1 + 1")).unwrap();
    let rho = Embedding::identity(4);
    for (n, j) in [(8u64, 1i64), (8, 7), (2, 1), (5, 2), (12, 11)] {
        let z = ex(n, j);
        let exact = evaluate_class_at(&w, &rho, &z).unwrap();
        assert_eq!(numeric_class_at(&w, &rho, &z, 64).unwrap(), Some(exact));
    }
}

#[test]
fn singular_summand_reported() {
    let gram = vec![
        vec![parse_expression(1, "1").unwrap(), parse_expression(1, "1").unwrap()],
        vec![parse_expression(1, "1").unwrap(), parse_expression(1, "1").unwrap()],
    ];
    let w = line(1, 1, "1").direct_sum(&WittElement::from_form(HermitianForm::new(1, 1, gram).unwrap())).unwrap();
    assert!(matches!(
        signature_step_function(&w, &Embedding::identity(1)),
        Err(Error::Singular { .. })
    ));
}
