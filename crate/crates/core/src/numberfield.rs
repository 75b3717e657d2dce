//! Exact arithmetic in `Q(β)` for a Pisot number `β`, with certified
//! evaluation at the real embedding.
//!
//! Elements are stored as `(c_0 + c_1 β + … + c_{r-1} β^{r-1}) / D` with
//! integer coefficients, reduced so that the gcd of all coefficients and `D`
//! is one. Equality and hashing use that canonical form.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::poly;
use crate::roots::{self, RootDisc};

/// Bits of precision kept for the dominant root interval.
const BETA_BITS: u64 = 256;
const MAX_ISOLATION_BITS: u64 = 1 << 14;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FieldError {
    #[error("not a Pisot number: {0}")]
    NotPisot(String),
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("elements belong to different fields")]
    FieldMismatch,
    #[error("cannot parse {0:?}")]
    Parse(String),
}

struct FieldData {
    minpoly: Vec<BigInt>,
    degree: usize,
    beta_lo: BigRational,
    beta_hi: BigRational,
    conjugates: Vec<RootDisc>,
    conj_f64: Vec<Complex64>,
    beta_f64: f64,
    powers_f64: Vec<f64>,
    floor_beta: BigInt,
}

/// `Q(β)` for a Pisot number `β` given by its minimal polynomial.
///
/// Cloning is cheap; clones share the same data.
#[derive(Clone)]
pub struct PisotField(Arc<FieldData>);

impl fmt::Debug for PisotField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PisotField({})", poly::format(&self.0.minpoly))
    }
}

impl PartialEq for PisotField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.minpoly == other.0.minpoly
    }
}

impl Eq for PisotField {}

impl PisotField {
    /// Builds the field from minimal-polynomial coefficients, constant term
    /// first.
    ///
    /// Square-freeness and the absence of rational roots are checked;
    /// irreducibility in degree four and above is the caller's
    /// responsibility.
    pub fn new(coeffs: &[i64]) -> Result<Self, FieldError> {
        let c: Vec<BigInt> = coeffs.iter().map(|&x| BigInt::from(x)).collect();
        Self::from_bigint(&c)
    }

    pub fn from_bigint(coeffs: &[BigInt]) -> Result<Self, FieldError> {
        let mut p = coeffs.to_vec();
        poly::trim(&mut p);
        let r = match poly::degree(&p) {
            None => return Err(FieldError::DegenerateInput("zero polynomial".into())),
            Some(0) => return Err(FieldError::DegenerateInput("constant polynomial".into())),
            Some(r) => r,
        };
        if !p[r].is_one() {
            return Err(FieldError::DegenerateInput("polynomial is not monic".into()));
        }
        if r > 1 && p[0].is_zero() {
            return Err(FieldError::DegenerateInput("rational root 0".into()));
        }
        if !poly::is_squarefree(&p) {
            return Err(FieldError::DegenerateInput("polynomial is not square-free".into()));
        }
        if r > 1 && poly::has_unit_circle_root(&p) {
            return Err(FieldError::NotPisot("a root lies on the unit circle".into()));
        }

        let mut bits = 64;
        let discs = loop {
            let discs = roots::isolate(&p, bits)
                .map_err(|e| FieldError::DegenerateInput(e.to_string()))?;
            if discs.iter().all(|d| d.modulus_vs_one() != Ordering::Equal) {
                break discs;
            }
            if bits >= MAX_ISOLATION_BITS {
                return Err(FieldError::NotPisot("root moduli could not be separated from 1".into()));
            }
            bits *= 2;
        };

        if r > 1 {
            for d in discs.iter().filter(|d| d.is_real()) {
                let lo = (&d.re - &d.radius).ceil().to_integer();
                let hi = (&d.re + &d.radius).floor().to_integer();
                let mut k = lo;
                while k <= hi {
                    if poly::eval_q(&p, &BigRational::from_integer(k.clone())).is_zero() {
                        return Err(FieldError::DegenerateInput(format!("rational root {k}")));
                    }
                    k += 1;
                }
            }
        }

        let (outside, inside): (Vec<RootDisc>, Vec<RootDisc>) = discs
            .into_iter()
            .partition(|d| d.modulus_vs_one() == Ordering::Greater);
        if outside.len() != 1 {
            return Err(FieldError::NotPisot(format!(
                "{} roots of modulus greater than one",
                outside.len()
            )));
        }
        let dom = &outside[0];
        if !dom.is_real() || dom.re <= BigRational::one() {
            return Err(FieldError::NotPisot("dominant root is not a real number > 1".into()));
        }

        let (beta_lo, beta_hi) = refine_real_root(&p, &dom.re - &dom.radius, &dom.re + &dom.radius, BETA_BITS);
        let mid = (&beta_lo + &beta_hi) / BigRational::from_integer(2.into());
        let beta_f64 = roots::to_f64(&mid);
        let conjugates = if inside.is_empty() {
            inside
        } else {
            roots::refine(&p, &inside_with_dominant(&inside, dom), 96)
                .map(|all| all.into_iter().filter(|d| d.modulus_vs_one() == Ordering::Less).collect())
                .unwrap_or(inside)
        };
        let conj_f64 = conjugates.iter().map(|d| d.center_f64()).collect();
        let mut powers_f64 = Vec::with_capacity(r);
        let mut pw = BigRational::one();
        for _ in 0..r {
            powers_f64.push(roots::to_f64(&pw));
            pw = &pw * &mid;
        }
        let floor_beta = beta_lo.floor().to_integer();
        debug_assert_eq!(floor_beta, beta_hi.floor().to_integer());

        Ok(PisotField(Arc::new(FieldData {
            minpoly: p,
            degree: r,
            beta_lo,
            beta_hi,
            conjugates,
            conj_f64,
            beta_f64,
            powers_f64,
            floor_beta,
        })))
    }

    pub fn minpoly(&self) -> &[BigInt] {
        &self.0.minpoly
    }

    pub fn degree(&self) -> usize {
        self.0.degree
    }

    pub fn beta_f64(&self) -> f64 {
        self.0.beta_f64
    }

    /// `⌊β⌋`, the largest digit of `A_β`.
    pub fn floor_beta(&self) -> &BigInt {
        &self.0.floor_beta
    }

    /// Certified rational interval around `β` of width at most `2^-256`.
    pub fn beta_interval(&self) -> (&BigRational, &BigRational) {
        (&self.0.beta_lo, &self.0.beta_hi)
    }

    /// Certified discs around every conjugate `β_j ≠ β`, both members of
    /// each complex pair included.
    pub fn conjugate_discs(&self) -> &[RootDisc] {
        &self.0.conjugates
    }

    pub fn conjugates_f64(&self) -> &[Complex64] {
        &self.0.conj_f64
    }

    /// `β^i` as `f64` for `i < r`.
    pub(crate) fn powers_f64(&self) -> &[f64] {
        &self.0.powers_f64
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::raw(self.clone(), vec![BigInt::zero(); self.0.degree], BigInt::one())
    }

    pub fn one(&self) -> FieldElement {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> FieldElement {
        self.from_ratio(BigInt::from(n), BigInt::one()).expect("nonzero denominator")
    }

    pub fn from_integer(&self, n: BigInt) -> FieldElement {
        let mut c = vec![BigInt::zero(); self.0.degree];
        c[0] = n;
        FieldElement::raw(self.clone(), c, BigInt::one())
    }

    pub fn from_ratio(&self, p: BigInt, q: BigInt) -> Result<FieldElement, FieldError> {
        let mut c = vec![BigInt::zero(); self.0.degree];
        c[0] = p;
        self.element(c, q)
    }

    /// The generator `β`.
    pub fn beta(&self) -> FieldElement {
        let mut c = vec![BigInt::zero(); self.0.degree + 1];
        c[1] = BigInt::one();
        FieldElement::new(self.clone(), c, BigInt::one())
    }

    /// `(Σ c_i β^i) / denom`; coefficients of any length, reduced modulo the
    /// minimal polynomial.
    pub fn element(&self, coeffs: Vec<BigInt>, denom: BigInt) -> Result<FieldElement, FieldError> {
        if denom.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(FieldElement::new(self.clone(), coeffs, denom))
    }

    pub fn element_i64(&self, coeffs: &[i64], denom: i64) -> Result<FieldElement, FieldError> {
        self.element(coeffs.iter().map(|&c| BigInt::from(c)).collect(), BigInt::from(denom))
    }

    /// Parses `"p/q"`, `"n"`, or `"c0,c1,…,c_{r-1}/D"` (coefficients of
    /// powers of `β`, constant term first).
    pub fn parse_element(&self, s: &str) -> Result<FieldElement, FieldError> {
        let err = || FieldError::Parse(s.to_string());
        let s = s.trim();
        let (num, den) = match s.split_once('/') {
            Some((a, b)) => (a.trim(), b.trim().parse::<BigInt>().map_err(|_| err())?),
            None => (s, BigInt::one()),
        };
        let coeffs = num
            .split(',')
            .map(|t| t.trim().parse::<BigInt>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| err())?;
        if coeffs.is_empty() {
            return Err(err());
        }
        self.element(coeffs, den)
    }

    fn reduce(&self, mut c: Vec<BigInt>) -> Vec<BigInt> {
        let r = self.0.degree;
        let p = &self.0.minpoly;
        while c.len() > r {
            let top = c.pop().expect("nonempty");
            if top.is_zero() {
                continue;
            }
            let shift = c.len() - r;
            for i in 0..r {
                c[shift + i] -= &top * &p[i];
            }
        }
        c.resize(r, BigInt::zero());
        c
    }

    /// Interval of `Σ c_i β^i / d` for `β ∈ [lo, hi]`, `lo > 0`, `d > 0`.
    fn eval_interval(c: &[BigInt], d: &BigInt, lo: &BigRational, hi: &BigRational) -> (BigRational, BigRational) {
        let mut pos_lo = BigRational::zero();
        let mut pos_hi = BigRational::zero();
        let mut neg_lo = BigRational::zero();
        let mut neg_hi = BigRational::zero();
        let mut pl = BigRational::one();
        let mut ph = BigRational::one();
        for ci in c {
            let q = BigRational::from_integer(ci.clone());
            if ci.is_positive() {
                pos_lo += &q * &pl;
                pos_hi += &q * &ph;
            } else if ci.is_negative() {
                neg_lo += &q * &ph;
                neg_hi += &q * &pl;
            }
            pl = &pl * lo;
            ph = &ph * hi;
        }
        let dd = BigRational::from_integer(d.clone());
        ((pos_lo + neg_lo) / &dd, (pos_hi + neg_hi) / dd)
    }

    fn beta_bracket(&self, bits: u64) -> (BigRational, BigRational) {
        if bits <= BETA_BITS {
            (self.0.beta_lo.clone(), self.0.beta_hi.clone())
        } else {
            refine_real_root(&self.0.minpoly, self.0.beta_lo.clone(), self.0.beta_hi.clone(), bits)
        }
    }

    /// `⌊(Σ c_i β^i)/d⌋` for small integer data, via a certified `f64`
    /// evaluation with exact fallback.
    pub(crate) fn floor_i64(&self, c: &[i64], d: i64) -> i64 {
        debug_assert!(d > 0);
        let pw = &self.0.powers_f64;
        let mut s = 0.0_f64;
        let mut mag = 0.0_f64;
        let mut exact_ints = true;
        for (ci, bi) in c.iter().zip(pw) {
            if ci.unsigned_abs() >= 1 << 52 {
                exact_ints = false;
            }
            let t = *ci as f64 * bi;
            s += t;
            mag += t.abs();
        }
        if exact_ints {
            let err = mag * f64::EPSILON * (c.len() as f64 + 3.0) + f64::MIN_POSITIVE;
            let y = s / d as f64;
            let ey = err / d as f64 + y.abs() * f64::EPSILON;
            let k = y.floor();
            if y - k > 2.0 * ey && k + 1.0 - y > 2.0 * ey && k.abs() < 9.0e15 {
                return k as i64;
            }
        }
        let e = FieldElement::new(
            self.clone(),
            c.iter().map(|&x| BigInt::from(x)).collect(),
            BigInt::from(d),
        );
        e.floor().to_i64().expect("floor fits in i64")
    }
}

/// Bisects a root bracket of a square-free polynomial down to width
/// `2^-bits`.
fn refine_real_root(p: &[BigInt], mut lo: BigRational, mut hi: BigRational, bits: u64) -> (BigRational, BigRational) {
    let target = BigRational::new(BigInt::one(), BigInt::one() << bits);
    let mut slo = poly::eval_q(p, &lo).signum();
    if slo.is_zero() {
        return (lo.clone(), lo);
    }
    let two = BigRational::from_integer(2.into());
    while &hi - &lo > target {
        let mid = (&lo + &hi) / &two;
        let mid = roots::round_dyadic(&mid, bits + 2);
        if mid <= lo || mid >= hi {
            break;
        }
        let sm = poly::eval_q(p, &mid).signum();
        if sm.is_zero() {
            return (mid.clone(), mid);
        }
        if sm == slo {
            lo = mid;
            slo = sm;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}

fn inside_with_dominant(inside: &[RootDisc], dom: &RootDisc) -> Vec<RootDisc> {
    let mut all = inside.to_vec();
    all.push(dom.clone());
    all
}

/// An element of `Q(β)` in canonical form.
#[derive(Clone)]
pub struct FieldElement {
    field: PisotField,
    numer: Vec<BigInt>,
    denom: BigInt,
}

impl FieldElement {
    fn new(field: PisotField, coeffs: Vec<BigInt>, denom: BigInt) -> Self {
        let numer = field.reduce(coeffs);
        Self::raw(field, numer, denom).canonical()
    }

    fn raw(field: PisotField, numer: Vec<BigInt>, denom: BigInt) -> Self {
        FieldElement { field, numer, denom }
    }

    fn canonical(mut self) -> Self {
        let mut g = self.denom.clone();
        for c in &self.numer {
            g = g.gcd(c);
        }
        if self.denom.is_negative() {
            g = -g;
        }
        if !g.is_one() {
            for c in self.numer.iter_mut() {
                *c = &*c / &g;
            }
            self.denom = &self.denom / &g;
        }
        self
    }

    pub fn field(&self) -> &PisotField {
        &self.field
    }

    /// Coefficients of `1, β, …, β^{r-1}` of the numerator.
    pub fn numer(&self) -> &[BigInt] {
        &self.numer
    }

    pub fn denom(&self) -> &BigInt {
        &self.denom
    }

    pub fn is_zero(&self) -> bool {
        self.numer.iter().all(|c| c.is_zero())
    }

    /// `Some(n)` when the element is the integer `n`.
    pub fn as_integer(&self) -> Option<BigInt> {
        if self.denom.is_one() && self.numer[1..].iter().all(|c| c.is_zero()) {
            Some(self.numer[0].clone())
        } else {
            None
        }
    }

    /// `Some(q)` when the element is rational.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.numer[1..].iter().all(|c| c.is_zero()) {
            Some(BigRational::new(self.numer[0].clone(), self.denom.clone()))
        } else {
            None
        }
    }

    fn check(&self, other: &Self) -> Result<(), FieldError> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(FieldError::FieldMismatch)
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        let numer = self
            .numer
            .iter()
            .zip(&other.numer)
            .map(|(a, b)| a * &other.denom + b * &self.denom)
            .collect();
        Ok(Self::raw(self.field.clone(), numer, &self.denom * &other.denom).canonical())
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, FieldError> {
        self.checked_add(&other.neg_ref())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        let prod = poly::mul(&self.numer, &other.numer);
        Ok(Self::new(self.field.clone(), prod, &self.denom * &other.denom))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, FieldError> {
        self.checked_mul(&other.inv()?)
    }

    fn neg_ref(&self) -> Self {
        Self::raw(
            self.field.clone(),
            self.numer.iter().map(|c| -c).collect(),
            self.denom.clone(),
        )
    }

    /// Multiplicative inverse, via the extended Euclidean algorithm against
    /// the minimal polynomial.
    pub fn inv(&self) -> Result<Self, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let m = poly::to_rational(self.field.minpoly());
        let a = poly::to_rational(&self.numer);
        let (g, u) = xgcd_q(&a, &m);
        if g.len() != 1 {
            // a shares a factor with the minimal polynomial: a zero divisor
            return Err(FieldError::DivisionByZero);
        }
        // u·a ≡ g (mod m), g a nonzero constant
        let scale = BigRational::from_integer(self.denom.clone()) / &g[0];
        let coeffs: Vec<BigRational> = u.iter().map(|c| c * &scale).collect();
        Ok(from_rational_coeffs(&self.field, &coeffs))
    }

    pub fn pow(&self, mut n: u32) -> Self {
        let mut base = self.clone();
        let mut acc = self.field.one();
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            n >>= 1;
        }
        acc
    }

    pub fn mul_int(&self, k: &BigInt) -> Self {
        Self::raw(
            self.field.clone(),
            self.numer.iter().map(|c| c * k).collect(),
            self.denom.clone(),
        )
        .canonical()
    }

    /// Certified interval `[lo, hi]` of width at most `eps` containing the
    /// real value (image under `β ↦` dominant root).
    pub fn real_value(&self, eps: &BigRational) -> (BigRational, BigRational) {
        if let Some(q) = self.as_rational() {
            return (q.clone(), q);
        }
        let mut bits = 64;
        loop {
            let (lo, hi) = self.field.beta_bracket(bits);
            let (a, b) = FieldData::eval(self, &lo, &hi);
            if &(&b - &a) <= eps {
                return (a, b);
            }
            bits *= 2;
        }
    }

    pub fn to_f64(&self) -> f64 {
        let pw = self.field.powers_f64();
        let d = self.denom.to_f64().unwrap_or(f64::NAN);
        let s: f64 = self
            .numer
            .iter()
            .zip(pw)
            .map(|(c, b)| c.to_f64().unwrap_or(f64::NAN) * b)
            .sum();
        if s.is_finite() && d.is_finite() {
            s / d
        } else {
            let eps = BigRational::new(BigInt::one(), BigInt::one() << 60);
            roots::to_f64(&self.real_value(&eps).0)
        }
    }

    /// `⌊x⌋` for the real value `x`, exact.
    pub fn floor(&self) -> BigInt {
        if let Some(q) = self.as_rational() {
            return q.floor().to_integer();
        }
        let mut bits = 64;
        loop {
            let (lo, hi) = self.field.beta_bracket(bits);
            let (a, b) = FieldData::eval(self, &lo, &hi);
            let fa = a.floor().to_integer();
            // a non-rational element never equals an integer
            if fa == b.floor().to_integer() && BigRational::from_integer(fa.clone()) != a {
                return fa;
            }
            bits *= 2;
        }
    }

    /// Value at an arbitrary complex point.
    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.numer.iter().rev() {
            acc = acc * z + c.to_f64().unwrap_or(f64::NAN);
        }
        acc / self.denom.to_f64().unwrap_or(f64::NAN)
    }

    /// Certified comparison of real values.
    pub fn cmp_real(&self, other: &Self) -> Ordering {
        let d = self - other;
        if d.is_zero() {
            return Ordering::Equal;
        }
        let mut bits = 64;
        loop {
            let (lo, hi) = d.field.beta_bracket(bits);
            let (a, b) = FieldData::eval(&d, &lo, &hi);
            if a.is_positive() {
                return Ordering::Greater;
            }
            if b.is_negative() {
                return Ordering::Less;
            }
            bits *= 2;
        }
    }
}

impl FieldData {
    fn eval(x: &FieldElement, lo: &BigRational, hi: &BigRational) -> (BigRational, BigRational) {
        PisotField::eval_interval(&x.numer, &x.denom, lo, hi)
    }
}

fn from_rational_coeffs(field: &PisotField, c: &[BigRational]) -> FieldElement {
    let mut l = BigInt::one();
    for q in c {
        l = l.lcm(q.denom());
    }
    let numer = c.iter().map(|q| q.numer() * (&l / q.denom())).collect();
    FieldElement::new(field.clone(), numer, l)
}

/// Returns `(g, u)` with `u·a ≡ g (mod m)`, `g = gcd(a, m)`.
fn xgcd_q(a: &[BigRational], m: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut r0 = m.to_vec();
    let mut r1 = a.to_vec();
    poly::trim(&mut r1);
    let mut s0: Vec<BigRational> = Vec::new();
    let mut s1: Vec<BigRational> = vec![BigRational::one()];
    while !r1.is_empty() {
        let (q, r) = poly::divrem_q(&r0, &r1);
        let qs = mul_q(&q, &s1);
        let mut s2 = s0.clone();
        if s2.len() < qs.len() {
            s2.resize(qs.len(), BigRational::zero());
        }
        for (i, c) in qs.into_iter().enumerate() {
            s2[i] -= c;
        }
        poly::trim(&mut s2);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
    }
    (r0, s0)
}

fn mul_q(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.denom == other.denom && self.numer == other.numer && self.field == other.field
    }
}

impl Eq for FieldElement {}

impl Hash for FieldElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.numer.hash(state);
        self.denom.hash(state);
    }
}

impl fmt::Display for FieldElement {
    /// `p/q` for rationals, `c0,c1,…/D` otherwise.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(q) = self.as_rational() {
            return write!(f, "{q}");
        }
        let parts: Vec<String> = self.numer.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join(","))?;
        if !self.denom.is_one() {
            write!(f, "/{}", self.denom)?;
        }
        Ok(())
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldElement({self})")
    }
}

macro_rules! forward_op {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&FieldElement> for &FieldElement {
            type Output = FieldElement;
            /// Panics if the operands live in different fields.
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                self.$checked(rhs).expect("operands in the same field")
            }
        }
        impl $tr<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_op!(Add, add, checked_add);
forward_op!(Sub, sub, checked_sub);
forward_op!(Mul, mul, checked_mul);

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        self.neg_ref()
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        self.neg_ref()
    }
}
