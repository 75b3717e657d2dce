//! Certified isolation of all complex roots of a monic square-free integer
//! polynomial.
//!
//! Approximations come from a floating-point Aberth iteration and are then
//! refined by simultaneous Weierstrass (Durand–Kerner) steps carried out in
//! exact dyadic rational arithmetic. Each refinement step also produces a
//! certificate: with Weierstrass corrections `W_i = p(z_i) / ∏_{j≠i}(z_i - z_j)`
//! the roots of `p` are the eigenvalues of `diag(z) - 1·Wᵀ`, so by
//! Gerschgorin's theorem on columns they lie in the discs centred at
//! `z_i - W_i` with radius `(n-1)|W_i|`, and every connected component of the
//! union contains as many roots as discs. Once the discs are pairwise
//! disjoint, each encloses exactly one root.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;

use crate::poly;

const MAX_ROUNDS: usize = 400;
const MAX_BITS: u64 = 1 << 16;

#[derive(Debug, thiserror::Error)]
pub enum RootError {
    #[error("polynomial must be monic of degree at least 1")]
    NotMonic,
    #[error("root isolation did not separate the roots (is the polynomial square-free?)")]
    NotSeparated,
}

/// A closed disc with dyadic rational centre and rational radius that
/// contains exactly one root.
#[derive(Clone, Debug, PartialEq)]
pub struct RootDisc {
    pub re: BigRational,
    pub im: BigRational,
    pub radius: BigRational,
}

impl RootDisc {
    /// The centre lies on the real axis, which for an isolated disc of a real
    /// polynomial certifies a real root.
    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// The disc misses the real axis, so the root is non-real.
    pub fn is_nonreal(&self) -> bool {
        self.im.abs() > self.radius
    }

    pub fn center_f64(&self) -> Complex64 {
        Complex64::new(to_f64(&self.re), to_f64(&self.im))
    }

    /// `|z|^2` of the centre.
    fn center_norm_sq(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Certified comparison of the root modulus with one: `Less` if every
    /// point of the disc has modulus < 1, `Greater` if every point has
    /// modulus > 1, `Equal` while undecided.
    pub fn modulus_vs_one(&self) -> Ordering {
        let one = BigRational::one();
        let n = self.center_norm_sq();
        if self.radius < one {
            let inner = &one - &self.radius;
            if n < &inner * &inner {
                return Ordering::Less;
            }
        }
        let outer = &one + &self.radius;
        if n > &outer * &outer {
            return Ordering::Greater;
        }
        Ordering::Equal
    }

    /// Rational bounds `lo ≤ |root| ≤ hi`.
    pub fn modulus_bounds(&self) -> (BigRational, BigRational) {
        let n = self.center_norm_sq();
        let up = sqrt_upper(&n, 80);
        let down = sqrt_lower(&n, 80);
        let lo = &down - &self.radius;
        let lo = if lo.is_negative() { BigRational::zero() } else { lo };
        (lo, up + &self.radius)
    }

    fn disjoint_from(&self, other: &RootDisc) -> bool {
        let dr = &self.re - &other.re;
        let di = &self.im - &other.im;
        let d2 = &dr * &dr + &di * &di;
        let s = &self.radius + &other.radius;
        d2 > &s * &s
    }
}

pub(crate) fn to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Upper bound on `sqrt(q)` accurate to about `2^-bits` relative.
pub(crate) fn sqrt_upper(q: &BigRational, bits: u64) -> BigRational {
    if q.is_zero() {
        return BigRational::zero();
    }
    let scale = BigInt::one() << (2 * bits);
    let scaled = (q.numer() * &scale) / q.denom();
    let s = scaled.sqrt() + BigInt::one();
    BigRational::new(s, BigInt::one() << bits)
}

pub(crate) fn sqrt_lower(q: &BigRational, bits: u64) -> BigRational {
    if q.is_zero() {
        return BigRational::zero();
    }
    let scale = BigInt::one() << (2 * bits);
    let scaled = (q.numer() * &scale) / q.denom();
    BigRational::new(scaled.sqrt(), BigInt::one() << bits)
}

/// Nearest multiple of `2^-bits`.
pub(crate) fn round_dyadic(q: &BigRational, bits: u64) -> BigRational {
    let scaled = q * BigRational::from_integer(BigInt::one() << bits);
    BigRational::new(scaled.round().to_integer(), BigInt::one() << bits)
}

pub(crate) fn dyadic_from_f64(x: f64) -> BigRational {
    BigRational::from_float(x).unwrap_or_else(BigRational::zero)
}

#[derive(Clone, Debug)]
struct Cq {
    re: BigRational,
    im: BigRational,
}

impl Cq {
    fn zero() -> Self {
        Cq { re: BigRational::zero(), im: BigRational::zero() }
    }
    fn sub(&self, o: &Cq) -> Cq {
        Cq { re: &self.re - &o.re, im: &self.im - &o.im }
    }
    fn mul(&self, o: &Cq) -> Cq {
        Cq {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
    fn norm_sq(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }
    fn div(&self, o: &Cq) -> Cq {
        let n = o.norm_sq();
        let re = (&self.re * &o.re + &self.im * &o.im) / &n;
        let im = (&self.im * &o.re - &self.re * &o.im) / &n;
        Cq { re, im }
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

fn eval_cq(p: &[BigInt], z: &Cq) -> Cq {
    let mut acc = Cq::zero();
    for c in p.iter().rev() {
        acc = acc.mul(z);
        acc.re += BigRational::from_integer(c.clone());
    }
    acc
}

/// Floating-point Aberth–Ehrlich iteration used only to seed the certified
/// refinement.
fn aberth_seed(p: &[BigInt]) -> Vec<Complex64> {
    let n = p.len() - 1;
    let c: Vec<f64> = p.iter().map(|x| x.to_f64().unwrap_or(0.0)).collect();
    let bound = 1.0
        + c[..n]
            .iter()
            .map(|x| x.abs())
            .fold(0.0_f64, f64::max);
    let radius = bound.min(
        // Fujiwara-style bound is often much tighter
        2.0 * (0..n)
            .map(|k| c[k].abs().powf(1.0 / (n - k) as f64))
            .fold(0.0_f64, f64::max),
    );
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let t = 2.0 * std::f64::consts::PI * (k as f64) / (n as f64) + 0.4;
            Complex64::from_polar(radius.max(0.5), t)
        })
        .collect();
    let eval = |x: Complex64| -> (Complex64, Complex64) {
        let mut v = Complex64::new(0.0, 0.0);
        let mut d = Complex64::new(0.0, 0.0);
        for &ck in c.iter().rev() {
            d = d * x + v;
            v = v * x + ck;
        }
        (v, d)
    };
    for _ in 0..500 {
        let mut moved = 0.0_f64;
        for i in 0..n {
            let (v, d) = eval(z[i]);
            if v.norm() == 0.0 {
                continue;
            }
            let ratio = v / d;
            let s: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| Complex64::new(1.0, 0.0) / (z[i] - z[j]))
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if step.is_finite() {
                z[i] -= step;
                moved = moved.max(step.norm() / (1.0 + z[i].norm()));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

/// Isolates all roots of a monic square-free integer polynomial, with every
/// disc radius at most `2^-precision_bits`.
pub fn isolate(p: &[BigInt], precision_bits: u64) -> Result<Vec<RootDisc>, RootError> {
    let mut p = p.to_vec();
    poly::trim(&mut p);
    let n = match poly::degree(&p) {
        Some(d) if d >= 1 && p[d].is_one() => d,
        _ => return Err(RootError::NotMonic),
    };
    let seeds: Vec<Cq> = aberth_seed(&p)
        .into_iter()
        .map(|z| Cq {
            re: dyadic_from_f64(z.re),
            im: dyadic_from_f64(z.im),
        })
        .collect();
    refine_from(&p, n, seeds, precision_bits)
}

/// Re-isolates at higher precision starting from existing discs.
pub fn refine(p: &[BigInt], discs: &[RootDisc], precision_bits: u64) -> Result<Vec<RootDisc>, RootError> {
    let n = discs.len();
    let seeds = discs
        .iter()
        .map(|d| Cq { re: d.re.clone(), im: d.im.clone() })
        .collect();
    refine_from(p, n, seeds, precision_bits)
}

fn refine_from(p: &[BigInt], n: usize, mut z: Vec<Cq>, precision_bits: u64) -> Result<Vec<RootDisc>, RootError> {
    let target = BigRational::new(BigInt::one(), BigInt::one() << precision_bits);
    let n_minus_1 = BigRational::from_integer(BigInt::from(n as u64 - 1));
    let mut bits: u64 = 64;
    for _ in 0..MAX_ROUNDS {
        // nudge coincident approximations apart
        for i in 0..n {
            for j in 0..i {
                if z[i].sub(&z[j]).is_zero() {
                    z[i].re += BigRational::new(BigInt::one(), BigInt::one() << (bits / 2).max(8));
                    z[i].im += BigRational::new(BigInt::from(3), BigInt::one() << (bits / 2).max(8));
                }
            }
        }
        let mut discs = Vec::with_capacity(n);
        for i in 0..n {
            let mut denom = Cq { re: BigRational::one(), im: BigRational::zero() };
            for j in 0..n {
                if j != i {
                    denom = denom.mul(&z[i].sub(&z[j]));
                }
            }
            let w = eval_cq(p, &z[i]).div(&denom);
            let exact_center = z[i].sub(&w);
            let re = round_dyadic(&exact_center.re, bits);
            let mut im = round_dyadic(&exact_center.im, bits);
            let round_err = Cq { re: &re - &exact_center.re, im: &im - &exact_center.im };
            let w_norm = sqrt_upper(&w.norm_sq(), bits + 8);
            let mut radius = &n_minus_1 * &w_norm + sqrt_upper(&round_err.norm_sq(), bits + 8);
            if im.abs() <= radius {
                // symmetric about the real axis: the disc still contains the root
                radius += im.abs();
                im = BigRational::zero();
            }
            discs.push(RootDisc { re, im, radius });
        }
        let isolated = (0..n).all(|i| (0..i).all(|j| discs[i].disjoint_from(&discs[j])));
        let widest = discs
            .iter()
            .map(|d| d.radius.clone())
            .max()
            .unwrap_or_else(BigRational::zero);
        if isolated && widest <= target {
            return Ok(discs);
        }
        // grow the working precision with the quadratic convergence
        let achieved = if widest.is_zero() {
            bits
        } else {
            let w = to_f64(&widest);
            if w > 0.0 { (-w.log2()).max(0.0) as u64 } else { bits }
        };
        bits = (2 * achieved + 32).clamp(64, MAX_BITS.max(precision_bits + 64));
        z = discs
            .iter()
            .map(|d| Cq { re: d.re.clone(), im: d.im.clone() })
            .collect();
    }
    Err(RootError::NotSeparated)
}
