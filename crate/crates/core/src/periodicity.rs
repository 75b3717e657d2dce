//! The natural extension `T̃_β(a, b) = (h_β(a) − [βb]δ_β(1), βb − [βb])` on
//! `K_β × ℝ`, its commutation relations with the two-sided shift, and the
//! exact and geometric deciders for purely periodic expansions.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::betaexpand::{
    admissible_infinite, expand, series_value, value_of_periodic, Digit, EventuallyPeriodicWord, ExpandError,
    ParryData, DEFAULT_MAX_STEPS,
};
use crate::embedding::{EmbedError, EmbeddedPoint, RealCoord, RepresentationSpace};
use crate::numberfield::{FieldElement, PisotField};
use crate::rauzy::{CylinderSet, MembershipConfig, MembershipVerdict, Verdict};
use crate::sofic::{build_automaton, SoficAutomaton};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PeriodicityError {
    #[error("integer part of βb is undecidable at this precision")]
    FloorUndecidable,
    #[error("real coordinate outside [0, 1)")]
    OutOfRange,
    #[error(transparent)]
    Expand(#[from] ExpandError),
    #[error(transparent)]
    Embed(#[from] EmbedError),
}

/// `T̃_β` on a point of `K_β × ℝ` with real coordinate in `[0, 1)`.
pub fn natural_extension_step(
    space: &RepresentationSpace,
    s: &EmbeddedPoint,
) -> Result<EmbeddedPoint, PeriodicityError> {
    let real = s.real.as_ref().ok_or(PeriodicityError::OutOfRange)?;
    let (k, next_real) = match &real.exact {
        Some(b) => {
            if b.floor() != BigInt::from(0) {
                return Err(PeriodicityError::OutOfRange);
            }
            let y = &space.field().beta() * b;
            let k = y.floor();
            let next = &y - &space.field().from_integer(k.clone());
            let approx = next.to_f64();
            (k.to_i64().expect("digit fits"), RealCoord { approx, exact: Some(next) })
        }
        None => {
            if !(0.0..1.0).contains(&real.approx) {
                return Err(PeriodicityError::OutOfRange);
            }
            let y = space.field().beta_f64() * real.approx;
            let k = y.floor();
            if (y - k).min(k + 1.0 - y) < 8.0 * f64::EPSILON * y.max(1.0) {
                return Err(PeriodicityError::FloorUndecidable);
            }
            (k as i64, RealCoord { approx: y - k, exact: None })
        }
    };
    let one = space.delta(&space.field().one())?;
    let mut out = space.sub(&space.h_beta(s), &space.scale_int(&one, k));
    out.real = Some(next_real);
    Ok(out)
}

/// The explicit inverse `(a, b) ↦ (h_β^{-1}(a + w_0 δ(1)), (b + w_0)/β)`,
/// i.e. the image under `φ̃_β ∘ S^{-1}` when the left word starts with `w_0`.
pub fn natural_extension_inverse(
    space: &RepresentationSpace,
    s: &EmbeddedPoint,
    w0: Digit,
) -> Result<EmbeddedPoint, PeriodicityError> {
    let real = s.real.as_ref().ok_or(PeriodicityError::OutOfRange)?;
    let one = space.delta(&space.field().one())?;
    let shifted = space.add(s, &space.scale_int(&one, w0 as i64));
    let mut out = space.h_beta_inv(&shifted);
    let beta = space.field().beta();
    out.real = Some(match &real.exact {
        Some(b) => {
            let v = (b + &space.field().from_int(w0 as i64)).checked_div(&beta).expect("β ≠ 0");
            RealCoord { approx: v.to_f64(), exact: Some(v) }
        }
        None => RealCoord { approx: (real.approx + w0 as f64) / space.field().beta_f64(), exact: None },
    });
    Ok(out)
}

/// A two-sided word `… w_1 w_0 . u_1 u_2 …` with a finite left part
/// (`left[i] = w_i`) and an eventually periodic right part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoSidedWord {
    pub left: Vec<Digit>,
    pub right: EventuallyPeriodicWord,
}

impl TwoSidedWord {
    /// `S(w, u) = (u_1 w_0 w_1 …, u_2 u_3 …)`.
    pub fn shift(&self) -> TwoSidedWord {
        let u1 = self.right.digit(0);
        let mut left = Vec::with_capacity(self.left.len() + 1);
        left.push(u1);
        left.extend_from_slice(&self.left);
        TwoSidedWord { left, right: self.right.suffix(1) }
    }

    /// `S^{-1}(w, u) = (w_1 w_2 …, w_0 u_1 u_2 …)`.
    pub fn unshift(&self) -> TwoSidedWord {
        let w0 = self.left[0];
        let r = &self.right;
        let mut pre = vec![w0];
        pre.extend_from_slice(&r.preperiod);
        TwoSidedWord {
            left: self.left[1..].to_vec(),
            right: EventuallyPeriodicWord::new(pre, r.period.clone()),
        }
    }
}

/// `Σ w_i β^i` as an exact element.
pub fn left_value(field: &PisotField, left: &[Digit]) -> FieldElement {
    let beta = field.beta();
    left.iter()
        .rev()
        .fold(field.zero(), |acc, &d| &(&acc * &beta) + &field.from_int(d as i64))
}

/// `φ̃_β(w, u) = (−δ_β(Σ w_i β^i), Σ u_i β^{-i})`.
pub fn phi_tilde(space: &RepresentationSpace, w: &TwoSidedWord) -> Result<EmbeddedPoint, PeriodicityError> {
    let a = space.delta(&left_value(space.field(), &w.left))?;
    let b = series_value(space.field(), &w.right.preperiod, &w.right.period);
    let mut pt = space.neg(&a);
    pt.arch_err = a.arch_err;
    pt.real = Some(RealCoord { approx: b.to_f64(), exact: Some(b) });
    Ok(pt)
}

/// Sup distance over places plus the real coordinate.
pub fn two_sided_distance(space: &RepresentationSpace, a: &EmbeddedPoint, b: &EmbeddedPoint) -> f64 {
    let real = match (&a.real, &b.real) {
        (Some(x), Some(y)) => match (&x.exact, &y.exact) {
            (Some(p), Some(q)) if p == q => 0.0,
            (Some(p), Some(q)) => (p - q).to_f64().abs(),
            _ => (x.approx - y.approx).abs(),
        },
        _ => 0.0,
    };
    space.distance(a, b).max(real)
}

/// Random admissible two-sided words: a path of `M_β` of length `left_len`
/// read backwards as the left part, continued by a finite walk, a `0` back to
/// `a_1` and a cycle through `a_1` repeated forever. Words whose right part
/// is not strictly admissible are dropped, so fewer than `n` may return.
pub fn sample_two_sided_words(parry: &ParryData, n: usize, left_len: usize, seed: u64) -> Vec<TwoSidedWord> {
    let aut = build_automaton(parry);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    let mut attempts = 0;
    while out.len() < n && attempts < 20 * n {
        attempts += 1;
        let (forward, s) = random_walk(&aut, 0, left_len, &mut rng);
        let left: Vec<Digit> = forward.into_iter().rev().collect();
        let (mut pre, s2) = random_walk(&aut, s, rng.gen_range(0..8), &mut rng);
        let back = aut.out_edges(s2).find(|e| e.label == 0 && e.to == 0);
        let period = match back {
            Some(_) => {
                pre.push(0);
                random_cycle(&aut, &mut rng)
            }
            None => Vec::new(),
        };
        let right = EventuallyPeriodicWord::new(pre, period);
        if admissible_infinite(parry, &right, true) {
            out.push(TwoSidedWord { left, right });
        }
    }
    out
}

fn random_walk(aut: &SoficAutomaton, start: usize, len: usize, rng: &mut ChaCha8Rng) -> (Vec<Digit>, usize) {
    let mut s = start;
    let mut labels = Vec::with_capacity(len);
    for _ in 0..len {
        let edges: Vec<_> = aut.out_edges(s).collect();
        let e = edges[rng.gen_range(0..edges.len())];
        labels.push(e.label);
        s = e.to;
    }
    (labels, s)
}

/// A random closed walk from `a_1`, of length at most 12, possibly all zeros.
fn random_cycle(aut: &SoficAutomaton, rng: &mut ChaCha8Rng) -> Vec<Digit> {
    let (mut w, mut s) = random_walk(aut, 0, rng.gen_range(1..8), rng);
    while s != 0 {
        let e = aut
            .out_edges(s)
            .find(|e| e.to == 0 && e.label == 0)
            .or_else(|| aut.out_edges(s).next())
            .expect("every state has an out-edge");
        w.push(e.label);
        s = e.to;
        if w.len() > 12 {
            return vec![0];
        }
    }
    w
}

/// Random elements of `Q(β) ∩ [0, 1)`: fractional parts of `aβ + b` with
/// small rationals `a ≠ 0` and `b`.
pub fn sample_field_elements(field: &PisotField, n: usize, seed: u64) -> Vec<FieldElement> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let beta = field.beta();
    (0..n)
        .map(|_| {
            let mut a = 0;
            while a == 0 {
                a = rng.gen_range(-9i64..=9);
            }
            let qa = rng.gen_range(1i64..=12);
            let b = rng.gen_range(-9i64..=9);
            let qb = rng.gen_range(1i64..=12);
            let x = &(&beta * &field.from_ratio(a.into(), qa.into()).expect("nonzero"))
                + &field.from_ratio(b.into(), qb.into()).expect("nonzero");
            &x - &field.from_integer(x.floor())
        })
        .collect()
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct CommutationReport {
    pub samples: usize,
    /// Samples dropped because `u_2 u_3 …` is not strictly below `d*_β(1)`.
    pub excluded: usize,
    /// `max |φ̃(S(w,u)) − T̃(φ̃(w,u))|`.
    pub prop1: f64,
    /// `max |T̃(δ(x), x) − (δ(T x), T x)|`.
    pub prop2: f64,
    /// Backward step: `max |φ̃(S^{-1}(w,u)) − inverse(φ̃(w,u))|` and
    /// `max |T̃(inverse(s)) − s|`.
    pub minus: f64,
}

impl CommutationReport {
    pub fn max_deviation(&self) -> f64 {
        self.prop1.max(self.prop2).max(self.minus)
    }
}

/// Evaluates both sides of the shift relation on each word and of the
/// conjugacy `T̃ ∘ (δ, Id) = (δ, Id) ∘ T_β` on each element.
pub fn check_commutation(
    space: &RepresentationSpace,
    parry: &ParryData,
    words: &[TwoSidedWord],
    elements: &[FieldElement],
) -> Result<CommutationReport, PeriodicityError> {
    let word_devs: Vec<Option<(f64, f64)>> = words
        .par_iter()
        .map(|w| -> Result<Option<(f64, f64)>, PeriodicityError> {
            if !admissible_infinite(parry, &w.right, true) {
                return Ok(None);
            }
            let p = phi_tilde(space, w)?;
            let lhs = phi_tilde(space, &w.shift())?;
            let rhs = natural_extension_step(space, &p)?;
            let d1 = two_sided_distance(space, &lhs, &rhs);
            let mut dm = 0.0f64;
            if !w.left.is_empty() {
                let back = natural_extension_inverse(space, &p, w.left[0])?;
                dm = dm.max(two_sided_distance(space, &back, &phi_tilde(space, &w.unshift())?));
                dm = dm.max(two_sided_distance(space, &natural_extension_step(space, &back)?, &p));
            }
            Ok(Some((d1, dm)))
        })
        .collect::<Result<_, _>>()?;
    let prop2: Vec<f64> = elements
        .par_iter()
        .map(|x| -> Result<f64, PeriodicityError> {
            let s = space.delta_two_sided(x)?;
            let lhs = natural_extension_step(space, &s)?;
            let tx = crate::betaexpand::t_beta(x)?;
            Ok(two_sided_distance(space, &lhs, &space.delta_two_sided(&tx)?))
        })
        .collect::<Result<_, _>>()?;
    let kept: Vec<(f64, f64)> = word_devs.iter().flatten().cloned().collect();
    Ok(CommutationReport {
        samples: kept.len() + prop2.len(),
        excluded: words.len() - kept.len(),
        prop1: kept.iter().map(|d| d.0).fold(0.0, f64::max),
        prop2: prop2.into_iter().fold(0.0, f64::max),
        minus: kept.iter().map(|d| d.1).fold(0.0, f64::max),
    })
}

/// `(purely periodic, period length)` from the exact orbit of `x ∈ [0, 1)`.
pub fn is_purely_periodic_exact(x: &FieldElement) -> Result<(bool, usize), ExpandError> {
    let e = expand(x, DEFAULT_MAX_STEPS)?;
    Ok((e.purely_periodic, e.period.len()))
}

/// Checks `x = (a_1 β^{L-1} + … + a_L)/(β^L − 1)` for the detected period.
pub fn closed_form_matches(parry: &ParryData, x: &FieldElement) -> Result<bool, ExpandError> {
    let e = expand(x, DEFAULT_MAX_STEPS)?;
    if !e.purely_periodic {
        return Ok(false);
    }
    Ok(&value_of_periodic(parry, &[], &e.period)? == x)
}

/// `(δ_β(x), x) ∈ R̃_β`.
pub fn is_purely_periodic_geometric(
    cyl: &CylinderSet,
    x: &FieldElement,
    cfg: &MembershipConfig,
) -> Result<MembershipVerdict, EmbedError> {
    let pt = cyl.space.delta_two_sided(x)?;
    Ok(cyl.membership(&pt, cfg))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Agreement {
    Agree,
    GeometricUndecided,
    Conflict,
}

#[derive(Clone, Debug)]
pub struct PeriodicityReport {
    pub x: FieldElement,
    /// `(p, q)` when `x = p/q`.
    pub fraction: Option<(i64, i64)>,
    pub exact_verdict: bool,
    pub exact_period: usize,
    pub geometric: MembershipVerdict,
    pub agreement: Agreement,
}

fn agreement(exact: bool, geometric: Verdict) -> Agreement {
    match (exact, geometric) {
        (_, Verdict::BoundaryUnknown) => Agreement::GeometricUndecided,
        (true, Verdict::In) | (false, Verdict::Out) => Agreement::Agree,
        _ => Agreement::Conflict,
    }
}

pub fn decide(
    cyl: &CylinderSet,
    x: &FieldElement,
    fraction: Option<(i64, i64)>,
    cfg: &MembershipConfig,
) -> Result<PeriodicityReport, PeriodicityError> {
    let (exact_verdict, exact_period) = is_purely_periodic_exact(x)?;
    let geometric = is_purely_periodic_geometric(cyl, x, cfg)?;
    Ok(PeriodicityReport {
        x: x.clone(),
        fraction,
        exact_verdict,
        exact_period,
        agreement: agreement(exact_verdict, geometric.verdict),
        geometric,
    })
}

/// Reduced fractions `p/q ∈ [0, 1)` with `q ≤ q_max`, ordered by `(q, p)`.
pub fn reduced_fractions(q_max: i64) -> Vec<(i64, i64)> {
    let mut out = vec![(0, 1)];
    for q in 2..=q_max {
        out.extend((1..q).filter(|p| p.gcd(&q) == 1).map(|p| (p, q)));
    }
    out
}

/// Runs both deciders on every reduced `p/q ∈ [0, 1)` with `q ≤ q_max`
/// (sorted by `(q, p)`), followed by `extra` in the given order.
pub fn cross_check(
    cyl: &CylinderSet,
    q_max: i64,
    extra: &[FieldElement],
    cfg: &MembershipConfig,
) -> Result<Vec<PeriodicityReport>, PeriodicityError> {
    let field = cyl.space.field();
    let mut inputs: Vec<(FieldElement, Option<(i64, i64)>)> = reduced_fractions(q_max)
        .into_iter()
        .map(|(p, q)| (field.from_ratio(p.into(), q.into()).expect("q > 0"), Some((p, q))))
        .collect();
    inputs.extend(extra.iter().map(|x| (x.clone(), None)));
    inputs
        .par_iter()
        .map(|(x, f)| decide(cyl, x, *f, cfg))
        .collect()
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CrossCheckSummary {
    pub tested: usize,
    pub agree: usize,
    pub undecided: usize,
    pub conflicts: usize,
    pub purely_periodic: usize,
}

pub fn summarize(reports: &[PeriodicityReport]) -> CrossCheckSummary {
    let mut s = CrossCheckSummary { tested: reports.len(), ..Default::default() };
    for r in reports {
        match r.agreement {
            Agreement::Agree => s.agree += 1,
            Agreement::GeometricUndecided => s.undecided += 1,
            Agreement::Conflict => s.conflicts += 1,
        }
        if r.exact_verdict {
            s.purely_periodic += 1;
        }
    }
    s
}
