mod common;

use common::{element, field, EXAMPLES, SQRT2, TEN};
use num_traits::ToPrimitive;
use proptest::prelude::*;
use rauzy_core::embedding::contraction_moduli;
use rauzy_core::{EmbeddedPoint, FieldElement, PisotField, RepresentationSpace};

fn all_fields() -> Vec<&'static [i64]> {
    let mut v = EXAMPLES.to_vec();
    v.push(TEN);
    v
}

fn space(k: &PisotField) -> RepresentationSpace {
    RepresentationSpace::places(k).unwrap()
}

fn pair() -> impl Strategy<Value = (FieldElement, FieldElement)> {
    prop::sample::select(all_fields()).prop_map(field).prop_flat_map(|k| (element(k.clone()), element(k)))
}

fn product(s: &RepresentationSpace, a: &EmbeddedPoint, b: &EmbeddedPoint) -> EmbeddedPoint {
    EmbeddedPoint {
        arch: a.arch.iter().zip(&b.arch).map(|(x, y)| x * y).collect(),
        arch_err: 0.0,
        padic: s.padic.iter().zip(a.padic.iter().zip(&b.padic)).map(|(p, (x, y))| p.mul(x, y)).collect(),
        real: None,
    }
}

/// Arch distance allowed between two evaluations of size about `scale`.
fn arch_tol(scale: f64, errs: &[f64]) -> f64 {
    64.0 * f64::EPSILON * (1.0 + scale) + errs.iter().sum::<f64>() * (1.0 + scale)
}

/// One unit in the last stored digit, relative to a value of norm `scale`.
fn padic_tol(s: &RepresentationSpace, v: usize, scale: f64) -> f64 {
    let p = &s.padic[v];
    let last = (p.p as f64).powf(-((p.precision - 1) as f64) / p.e as f64);
    last * scale.max(1.0)
}

/// `scales[v]` is the p-adic size of the inputs at p-adic place `v`.
fn check_close(
    s: &RepresentationSpace,
    got: &EmbeddedPoint,
    want: &EmbeddedPoint,
    tol: f64,
    scales: &[f64],
) -> Result<(), TestCaseError> {
    let na = s.arch.len();
    for (i, d) in s.place_distances(got, want).into_iter().enumerate() {
        let limit = if i < na { tol } else { padic_tol(s, i - na, scales[i - na]) };
        prop_assert!(d <= limit, "place {i}: {d:e} > {limit:e}");
    }
    Ok(())
}

fn norms(s: &RepresentationSpace, a: &EmbeddedPoint) -> Vec<f64> {
    s.padic.iter().zip(&a.padic).map(|(p, x)| p.norm(x)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn delta_is_additive((x, y) in pair()) {
        let s = space(x.field());
        let (dx, dy, dxy) = (s.delta(&x).unwrap(), s.delta(&y).unwrap(), s.delta(&(&x + &y)).unwrap());
        let scale = dx.arch.iter().chain(&dy.arch).map(|z| z.norm()).fold(0.0, f64::max);
        let scales: Vec<f64> = norms(&s, &dx).iter().zip(norms(&s, &dy)).map(|(a, b)| a.max(b)).collect();
        check_close(&s, &s.add(&dx, &dy), &dxy, arch_tol(scale, &[dx.arch_err, dy.arch_err, dxy.arch_err]), &scales)?;
    }

    #[test]
    fn delta_is_multiplicative((x, y) in pair()) {
        let s = space(x.field());
        let (dx, dy, dxy) = (s.delta(&x).unwrap(), s.delta(&y).unwrap(), s.delta(&(&x * &y)).unwrap());
        let mx = dx.arch.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let my = dy.arch.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let tol = arch_tol(mx * my, &[]) + mx * dy.arch_err + my * dx.arch_err + dx.arch_err * dy.arch_err + dxy.arch_err;
        let (nx, ny) = (norms(&s, &dx), norms(&s, &dy));
        let scales: Vec<f64> = nx.iter().zip(&ny).map(|(a, b)| a.max(1.0) * b.max(1.0)).collect();
        check_close(&s, &product(&s, &dx, &dy), &dxy, tol, &scales)?;
    }

    #[test]
    fn partial_sums_obey_the_tail_bound(which in 0..5usize, raw in prop::collection::vec(any::<u32>(), 40)) {
        let k = field(all_fields()[which]);
        let s = space(&k);
        let top = k.floor_beta().to_u32().unwrap();
        let beta = k.beta();
        let digits: Vec<u32> = raw.iter().map(|d| d % (top + 1)).collect();
        let mut sums = vec![k.zero()];
        let mut pow = k.one();
        for &d in &digits {
            let next = sums.last().unwrap() + &(&pow * &k.from_int(d as i64));
            sums.push(next);
            pow = &pow * &beta;
        }
        let full = s.delta(sums.last().unwrap()).unwrap();
        let rates = s.contraction_rates();
        for (n, partial) in sums.iter().enumerate().skip(1) {
            let p = s.delta(partial).unwrap();
            for (v, d) in s.place_distances(&full, &p).into_iter().enumerate() {
                let r = rates[v];
                let bound = top as f64 * r.powi(n as i32) / (1.0 - r);
                prop_assert!(d <= bound * (1.0 + 1e-9) + 1e-9, "place {v}, n {n}: {d:e} > {bound:e}");
            }
        }
    }
}

#[test]
fn every_place_contracts() {
    for c in all_fields() {
        let s = space(&field(c));
        assert!(s.contraction_rates().iter().all(|&r| r < 1.0), "{c:?}");
    }
}

#[test]
fn moduli_multiply_to_inverse_beta() {
    for c in all_fields() {
        let k = field(c);
        let prod: f64 = contraction_moduli(&space(&k)).iter().product();
        assert!((prod - 1.0 / k.beta_f64()).abs() < 1e-8, "{c:?}");
    }
    let m = contraction_moduli(&space(&field(SQRT2)));
    assert_eq!(m[1], 0.5);
}
