//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
//! failure.

use std::time::{Duration, Instant};

use num_integer::Integer;
use rauzy_core::betaexpand::classify_parry;
use rauzy_core::embedding::contraction_moduli;
use rauzy_core::periodicity::{
    check_commutation, cross_check, is_purely_periodic_exact, reduced_fractions, sample_field_elements,
    sample_two_sided_words, summarize,
};
use rauzy_core::rauzy::{
    angle_degrees, apply_terms, hausdorff_within, ifs_terms, iterate_ifs, measure_estimate, perron_vector, IfsTerm,
};
use rauzy_core::sofic::{
    build_automaton, build_substitution, char_poly, factor_char_poly, format_factorization, incidence,
    is_pisot_type, transpose,
};
use rauzy_core::{CylinderSet, MembershipConfig, ParryKind, PisotField, RepresentationSpace};

const GOLDEN: &[i64] = &[-1, -1, 1];
const TRIBONACCI: &[i64] = &[-1, -1, -1, 1];
const SMALLEST: &[i64] = &[-1, -1, 0, 1];
const SQRT2: &[i64] = &[2, -4, 1];
const TEN: &[i64] = &[-10, 1];

struct Outcome {
    ok: bool,
    detail: String,
}

fn field(c: &[i64]) -> PisotField {
    PisotField::new(c).expect("example field")
}

fn run(n: usize, name: &str, limit: Duration, f: impl FnOnce() -> Outcome) -> bool {
    let t = Instant::now();
    let out = f();
    let el = t.elapsed();
    let in_time = el <= limit;
    let ok = out.ok && in_time;
    println!(
        "criterion {n} [{}] {name}: {} ({:.2}s of {}s){}",
        if ok { "PASS" } else { "FAIL" },
        out.detail,
        el.as_secs_f64(),
        limit.as_secs(),
        if in_time { "" } else { " time limit exceeded" }
    );
    ok
}

fn c1() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, c, expect) in [("golden", GOLDEN, "11"), ("tribonacci", TRIBONACCI, "111"), ("smallest", SMALLEST, "10001")] {
        let p = classify_parry(&field(c)).unwrap();
        let s = p.d_beta_one.to_string();
        ok &= s == expect && p.kind == ParryKind::SimpleParry;
        parts.push(format!("{name} {s}"));
    }
    let p = classify_parry(&field(SQRT2)).unwrap();
    let s = p.d_beta_one.to_string();
    ok &= s == "31^∞" && p.kind == ParryKind::NonSimpleParry && p.n == 1 && p.p == 1;
    parts.push(format!("2+√2 {s} n={} p={}", p.n, p.p));
    Outcome { ok, detail: parts.join(", ") }
}

fn c2() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for (c, images, d) in [
        (GOLDEN, "1->12 2->1", 2),
        (TRIBONACCI, "1->12 2->13 3->1", 3),
        (SMALLEST, "1->12 2->3 3->4 4->5 5->1", 5),
        (SQRT2, "1->1112 2->12", 2),
    ] {
        let p = classify_parry(&field(c)).unwrap();
        let aut = build_automaton(&p);
        let sub = build_substitution(&p);
        let got = sub.to_string();
        let inc_ok = incidence(&sub) == transpose(&aut.adjacency());
        ok &= got == images && aut.states == d && p.d == d && inc_ok;
        parts.push(format!("{got} (d={})", aut.states));
    }
    let k = field(SMALLEST);
    let p = classify_parry(&k).unwrap();
    let cp = char_poly(&incidence(&build_substitution(&p)));
    let fac = format_factorization(&factor_char_poly(&cp, k.minpoly()));
    let pisot_type = is_pisot_type(&cp);
    ok &= fac == "(X^3 - X - 1)(X^2 - X + 1)" && !pisot_type;
    parts.push(format!("smallest char poly {fac}, Pisot type {pisot_type}"));
    Outcome { ok, detail: parts.join("; ") }
}

/// The expected union equations of the examples, pieces numbered from 1.
fn expected_system(c: &[i64]) -> Vec<IfsTerm> {
    let t = |piece: usize, source: usize, label: u32| IfsTerm { piece: piece - 1, source: source - 1, label };
    let mut v = if c == TRIBONACCI {
        vec![t(1, 1, 0), t(1, 2, 0), t(1, 3, 0), t(2, 1, 1), t(3, 2, 1)]
    } else if c == SMALLEST {
        vec![t(1, 1, 0), t(1, 5, 0), t(2, 1, 1), t(3, 2, 0), t(4, 3, 0), t(5, 4, 0)]
    } else {
        vec![t(1, 1, 0), t(1, 1, 1), t(1, 1, 2), t(1, 2, 0), t(2, 1, 3), t(2, 2, 1)]
    };
    v.sort();
    v
}

fn c3(c: &[i64], name: &str) -> Outcome {
    let k = field(c);
    let p = classify_parry(&k).unwrap();
    let space = RepresentationSpace::places(&k).unwrap();
    let aut = build_automaton(&p);
    let cyl = CylinderSet::new(&space, &p);
    let terms = expected_system(c);
    let structural = ifs_terms(&aut) == terms;
    let mut within = true;
    for depth in 8..=12 {
        let approx = iterate_ifs(&space, &aut, depth);
        let rhs = apply_terms(&space, &terms, &approx.pieces);
        let tol = 2.0 * cyl.diameter(depth);
        within &= approx.pieces.iter().zip(&rhs).all(|(l, r)| hausdorff_within(&space, l, r, tol));
    }
    Outcome { ok: structural && within, detail: format!("{name} system={structural} hausdorff(8..12)={within}") }
}

fn c4(c: &[i64], name: &str) -> Outcome {
    let k = field(c);
    let p = classify_parry(&k).unwrap();
    let space = RepresentationSpace::places(&k).unwrap();
    let aut = build_automaton(&p);
    let approx = iterate_ifs(&space, &aut, 14);
    let est = measure_estimate(&space, &approx, 1.0 / 64.0);
    let perron = perron_vector(&incidence(&build_substitution(&p)));
    let angle = angle_degrees(&est.measures, &perron);
    let positive = est.measures.iter().all(|&m| m > 0.0);
    Outcome {
        ok: positive && angle < 5.0,
        detail: format!(
            "{name} measures {:?} angle {angle:.3}° to Perron vector{}",
            est.measures.iter().map(|m| format!("{m:.4}")).collect::<Vec<_>>(),
            if est.undersampled { " (cloud coarser than grid)" } else { "" }
        ),
    }
}

fn c5() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, c) in [("golden", GOLDEN), ("tribonacci", TRIBONACCI), ("smallest", SMALLEST), ("2+√2", SQRT2), ("base 10", TEN)] {
        let k = field(c);
        let p = classify_parry(&k).unwrap();
        let space = RepresentationSpace::new(&k, 1e-12, 32).unwrap();
        let words = sample_two_sided_words(&p, 1000, 32, 2024);
        let elems = sample_field_elements(&k, 1000, 2024);
        let rep = check_commutation(&space, &p, &words, &elems).unwrap();
        let good = words.len() >= 1000 && rep.max_deviation() < 1e-8;
        ok &= good;
        parts.push(format!(
            "{name} n={} prop1={:.1e} prop2={:.1e} minus={:.1e}",
            words.len(),
            rep.prop1,
            rep.prop2,
            rep.minus
        ));
    }
    Outcome { ok, detail: parts.join("; ") }
}

fn c6(c: &[i64], name: &str) -> Outcome {
    let k = field(c);
    let p = classify_parry(&k).unwrap();
    let space = RepresentationSpace::places(&k).unwrap();
    let cyl = CylinderSet::new(&space, &p);
    let cfg = MembershipConfig { depth: 16, ..MembershipConfig::default() };
    let extra = sample_field_elements(&k, 200, 6);
    let reports = cross_check(&cyl, 50, &extra, &cfg).unwrap();
    let s = summarize(&reports);
    let frac = s.undecided as f64 / s.tested as f64;
    Outcome {
        ok: s.conflicts == 0 && frac <= 0.20,
        detail: format!(
            "{name} tested={} agree={} undecided={} ({:.1}%) conflicts={} purely periodic={}",
            s.tested,
            s.agree,
            s.undecided,
            100.0 * frac,
            s.conflicts,
            s.purely_periodic
        ),
    }
}

fn c7() -> Outcome {
    let k = field(TEN);
    let mut bad = Vec::new();
    let fr = reduced_fractions(100);
    for &(p, q) in &fr {
        let x = k.from_ratio(p.into(), q.into()).unwrap();
        let (pp, _) = is_purely_periodic_exact(&x).unwrap();
        if pp != (q.gcd(&10) == 1) {
            bad.push(format!("{p}/{q}"));
        }
    }
    Outcome { ok: bad.is_empty(), detail: format!("{} fractions, mismatches {:?}", fr.len(), bad) }
}

fn c8() -> Outcome {
    let k = field(GOLDEN);
    let fr = reduced_fractions(50);
    let not_pp: Vec<String> = fr
        .iter()
        .filter(|&&(p, q)| !is_purely_periodic_exact(&k.from_ratio(p.into(), q.into()).unwrap()).unwrap().0)
        .map(|(p, q)| format!("{p}/{q}"))
        .collect();
    Outcome { ok: not_pp.is_empty(), detail: format!("{} fractions, not purely periodic {:?}", fr.len(), not_pp) }
}

fn c9() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, c) in [("golden", GOLDEN), ("tribonacci", TRIBONACCI), ("smallest", SMALLEST), ("2+√2", SQRT2)] {
        let k = field(c);
        let space = RepresentationSpace::places(&k).unwrap();
        let m = contraction_moduli(&space);
        let prod: f64 = m.iter().product();
        let err = (prod - 1.0 / k.beta_f64()).abs();
        ok &= err < 1e-8;
        if c == SQRT2 {
            ok &= m.len() == 2 && m[1] == 0.5;
        }
        parts.push(format!("{name} {:?} err {err:.1e}", m.iter().map(|x| format!("{x:.6}")).collect::<Vec<_>>()));
    }
    Outcome { ok, detail: parts.join("; ") }
}

fn main() {
    let s = Duration::from_secs;
    let mut ok = true;
    ok &= run(1, "Parry classification", s(1), c1);
    ok &= run(2, "substitutions and automata", s(1), c2);
    for (c, name) in [(TRIBONACCI, "tribonacci"), (SMALLEST, "smallest"), (SQRT2, "2+√2")] {
        ok &= run(3, "IFS union equations", s(30), || c3(c, name));
    }
    for (c, name) in [(GOLDEN, "golden"), (TRIBONACCI, "tribonacci"), (SMALLEST, "smallest")] {
        ok &= run(4, "nonzero measure", s(120), || c4(c, name));
    }
    ok &= run(5, "commutation relations", s(60), c5);
    for (c, name) in [(GOLDEN, "golden"), (TRIBONACCI, "tribonacci"), (SMALLEST, "smallest"), (SQRT2, "2+√2")] {
        ok &= run(6, "periodicity cross-check", s(300), || c6(c, name));
    }
    ok &= run(7, "decimal sanity", s(5), c7);
    ok &= run(8, "golden totality", s(10), c8);
    ok &= run(9, "contraction product", s(1), c9);
    if !ok {
        std::process::exit(1);
    }
}
