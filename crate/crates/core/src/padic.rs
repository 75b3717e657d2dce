//! p-adic places of `Q(β)` at which `β` contracts, with fixed-precision
//! arithmetic in their rings of integers.
//!
//! For a prime `p` dividing the constant term of the minimal polynomial `P`,
//! the factor `A` of `P` over `Z_p` whose roots have positive valuation is
//! obtained by Hensel lifting `P ≡ X^k · B (mod p)`. Two shapes of `A` are
//! handled:
//!
//! * Eisenstein (`v_p(A(0)) = 1`): one totally ramified place with `e = k`,
//!   uniformizer `θ = β`;
//! * a single integer slope `v` whose residual polynomial
//!   `A(p^v Y)/p^{vk} mod p` is square-free of degree ≤ 3: one unramified
//!   place per irreducible factor, generated by `θ = β/p^v`.
//!
//! In both cases `Z_p[θ]` is the full ring of integers, so a value is stored
//! as `p^{-shift} Σ c_j θ^j` with `c_j` known modulo `p^M`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::numberfield::FieldElement;

/// Largest modulus used for working precision.
const MAX_MODULUS_BITS: u32 = 62;
/// Largest prime for which residual polynomials are factored by search.
const MAX_SEARCH_PRIME: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PadicError {
    #[error("unsupported ramification at p = {p}: {reason}")]
    UnsupportedRamification { p: u64, reason: String },
    #[error("denominator divisible by p^{shift} exhausts the p-adic precision at p = {p}")]
    PrecisionExhausted { p: u64, shift: u32 },
}

#[inline]
fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

#[inline]
fn addmod(a: u64, b: u64, m: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % m as u128) as u64
}

#[inline]
fn submod(a: u64, b: u64, m: u64) -> u64 {
    addmod(a, m - b % m, m)
}

fn reduce_bigint(x: &BigInt, m: u64) -> u64 {
    let r = x.mod_floor(&BigInt::from(m));
    r.to_u64().expect("reduced below modulus")
}

/// Inverse of `a` modulo `m` when `gcd(a, m) = 1`.
fn invmod(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    if r0 != 1 {
        return None;
    }
    Some(s0.rem_euclid(m as i128) as u64)
}

fn pow_u64(p: u64, k: u32) -> u64 {
    p.checked_pow(k).expect("p^k fits")
}

fn vp(mut x: u64, p: u64, cap: u32) -> u32 {
    if x == 0 {
        return cap;
    }
    let mut v = 0;
    while x % p == 0 && v < cap {
        x /= p;
        v += 1;
    }
    v
}

// Polynomials modulo m, constant term first.

fn ptrim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn pmul(a: &[u64], b: &[u64], m: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = addmod(out[i + j], mulmod(x, y, m), m);
        }
    }
    out
}

/// Division by a monic polynomial.
fn pdivrem_monic(a: &[u64], b: &[u64], m: u64) -> (Vec<u64>, Vec<u64>) {
    let db = b.len() - 1;
    let mut r = a.to_vec();
    ptrim(&mut r);
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![0u64; r.len() - db];
    for i in (db..r.len()).rev() {
        let c = r[i];
        if c == 0 {
            continue;
        }
        q[i - db] = c;
        for j in 0..=db {
            r[i - db + j] = submod(r[i - db + j], mulmod(c, b[j], m), m);
        }
    }
    r.truncate(db);
    ptrim(&mut r);
    (q, r)
}

/// Division over the field `F_p` by any nonzero polynomial.
fn pdivrem_field(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let mut b = b.to_vec();
    ptrim(&mut b);
    let lead = *b.last().expect("nonzero divisor");
    let inv = invmod(lead, p).expect("field");
    let monic: Vec<u64> = b.iter().map(|&c| mulmod(c, inv, p)).collect();
    let (q, r) = pdivrem_monic(a, &monic, p);
    (q.iter().map(|&c| mulmod(c, inv, p)).collect(), r)
}

fn psub(a: &[u64], b: &[u64], m: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out: Vec<u64> = (0..n)
        .map(|i| submod(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0), m))
        .collect();
    ptrim(&mut out);
    out
}

/// `u` with `u·b ≡ 1 (mod g)` over `F_p`.
fn pinv_mod(b: &[u64], g: &[u64], p: u64) -> Option<Vec<u64>> {
    let (mut r0, mut r1) = (g.to_vec(), b.to_vec());
    ptrim(&mut r0);
    ptrim(&mut r1);
    let (mut s0, mut s1): (Vec<u64>, Vec<u64>) = (Vec::new(), vec![1]);
    while !r1.is_empty() {
        let (q, r) = pdivrem_field(&r0, &r1, p);
        let s2 = psub(&s0, &pmul(&q, &s1, p), p);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
    }
    if r0.len() != 1 {
        return None;
    }
    let inv = invmod(r0[0], p)?;
    let (_, u) = pdivrem_field(&s0.iter().map(|&c| mulmod(c, inv, p)).collect::<Vec<_>>(), g, p);
    Some(u)
}

fn eval_mod(a: &[u64], x: u64, p: u64) -> u64 {
    a.iter().rev().fold(0, |acc, &c| addmod(mulmod(acc, x, p), c, p))
}

/// Lifts a monic factor `g` of `f mod p` (coprime to its cofactor) to a
/// monic factor of `f` modulo `p^w`.
fn hensel_lift(f: &[u64], g: &[u64], p: u64, w: u32) -> Option<Vec<u64>> {
    let m = pow_u64(p, w);
    let fp: Vec<u64> = f.iter().map(|&c| c % p).collect();
    let (h, rem) = pdivrem_monic(&fp, g, p);
    if !rem.is_empty() {
        return None;
    }
    let t = pinv_mod(&h, g, p)?;
    let mut lifted = g.to_vec();
    let mut pk = p;
    for _ in 1..w {
        let (_, r) = pdivrem_monic(f, &lifted, m);
        let e: Vec<u64> = r.iter().map(|&c| (c / pk) % p).collect();
        debug_assert!(r.iter().all(|&c| c % pk == 0));
        let (_, a) = pdivrem_monic(&pmul(&t, &e, p), g, p);
        for (i, &ai) in a.iter().enumerate() {
            lifted[i] = addmod(lifted[i], mulmod(ai, pk, m), m);
        }
        pk = pk.saturating_mul(p);
    }
    Some(lifted)
}

/// Monic irreducible factors over `F_p` of a polynomial of degree at most
/// 3; an empty list signals a repeated root.
fn factor_small(a: &[u64], p: u64) -> Option<Vec<Vec<u64>>> {
    let deg = a.len() - 1;
    if deg <= 1 {
        return Some(vec![a.to_vec()]);
    }
    if deg > 3 || p > MAX_SEARCH_PRIME {
        return None;
    }
    let roots: Vec<u64> = (0..p).filter(|&x| eval_mod(a, x, p) == 0).collect();
    let deriv: Vec<u64> = a.iter().enumerate().skip(1).map(|(i, &c)| mulmod(c, i as u64 % p, p)).collect();
    if roots.iter().any(|&x| eval_mod(&deriv, x, p) == 0) {
        return Some(Vec::new());
    }
    let mut factors: Vec<Vec<u64>> = roots.iter().map(|&r| vec![(p - r) % p, 1]).collect();
    let mut rest = a.to_vec();
    for f in &factors {
        rest = pdivrem_monic(&rest, f, p).0;
    }
    if rest.len() > 1 {
        factors.push(rest);
    }
    Some(factors)
}

fn factor_prime(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// A value `p^{-shift} Σ c_j θ^j` of a p-adic place.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PadicValue {
    pub shift: u32,
    pub coeffs: Vec<u64>,
}

/// One p-adic completion `K_I` of `Q(β)` with `|β|_I < 1`.
#[derive(Clone, Debug)]
pub struct PadicPlace {
    pub p: u64,
    pub e: u32,
    pub f: u32,
    /// Digits of `p` kept per coordinate.
    pub precision: u32,
    modulus: u64,
    /// Monic defining polynomial of `θ` modulo `p^precision`.
    factor: Vec<u64>,
    beta: Vec<u64>,
    /// `v_π(β)` in units of the uniformizer.
    beta_valuation: u32,
    powers: Vec<Vec<u64>>,
}

impl PadicPlace {
    pub fn degree(&self) -> usize {
        self.factor.len() - 1
    }

    /// Size `q = p^f` of the residue field.
    pub fn residue_size(&self) -> u64 {
        pow_u64(self.p, self.f)
    }

    /// `|β|` at this place: `p^{-v_π(β)/e}`.
    pub fn contraction(&self) -> f64 {
        (self.p as f64).powf(-(self.beta_valuation as f64) / self.e as f64)
    }

    /// Scaling of Haar measure under multiplication by `β`:
    /// `|N_{K_I/Q_p}(β)|_p = p^{-f v_π(β)}`.
    pub fn haar_module(&self) -> f64 {
        (self.p as f64).powf(-((self.f * self.beta_valuation) as f64))
    }

    pub fn defining_factor(&self) -> &[u64] {
        &self.factor
    }

    pub fn zero(&self) -> PadicValue {
        PadicValue { shift: 0, coeffs: vec![0; self.degree()] }
    }

    pub fn from_int(&self, n: i64) -> PadicValue {
        let mut c = vec![0; self.degree()];
        c[0] = reduce_bigint(&BigInt::from(n), self.modulus);
        PadicValue { shift: 0, coeffs: c }
    }

    /// Image of `β`.
    pub fn beta(&self) -> PadicValue {
        PadicValue { shift: 0, coeffs: self.beta.clone() }
    }

    fn reduce(&self, mut c: Vec<u64>) -> Vec<u64> {
        let g = self.degree();
        let m = self.modulus;
        while c.len() > g {
            let top = c.pop().expect("nonempty");
            if top == 0 {
                continue;
            }
            let s = c.len() - g;
            for i in 0..g {
                c[s + i] = submod(c[s + i], mulmod(top, self.factor[i], m), m);
            }
        }
        c.resize(g, 0);
        c
    }

    fn rescale(&self, a: &PadicValue, shift: u32) -> Vec<u64> {
        let k = shift - a.shift;
        if k == 0 {
            return a.coeffs.clone();
        }
        let s = if k >= self.precision { 0 } else { pow_u64(self.p, k) };
        a.coeffs.iter().map(|&c| mulmod(c, s, self.modulus)).collect()
    }

    pub fn add(&self, a: &PadicValue, b: &PadicValue) -> PadicValue {
        let s = a.shift.max(b.shift);
        let (x, y) = (self.rescale(a, s), self.rescale(b, s));
        PadicValue {
            shift: s,
            coeffs: x.iter().zip(&y).map(|(&u, &v)| addmod(u, v, self.modulus)).collect(),
        }
    }

    pub fn neg(&self, a: &PadicValue) -> PadicValue {
        PadicValue {
            shift: a.shift,
            coeffs: a.coeffs.iter().map(|&c| submod(0, c, self.modulus)).collect(),
        }
    }

    pub fn sub(&self, a: &PadicValue, b: &PadicValue) -> PadicValue {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &PadicValue, b: &PadicValue) -> PadicValue {
        self.normalize(PadicValue {
            shift: a.shift + b.shift,
            coeffs: self.reduce(pmul(&a.coeffs, &b.coeffs, self.modulus)),
        })
    }

    /// Removes common factors of `p` from the coefficients while the shift
    /// is positive.
    fn normalize(&self, mut a: PadicValue) -> PadicValue {
        while a.shift > 0 && a.coeffs.iter().all(|&c| c % self.p == 0) {
            for c in a.coeffs.iter_mut() {
                *c /= self.p;
            }
            a.shift -= 1;
        }
        a
    }

    pub fn mul_int(&self, a: &PadicValue, k: i64) -> PadicValue {
        let k = reduce_bigint(&BigInt::from(k), self.modulus);
        PadicValue {
            shift: a.shift,
            coeffs: a.coeffs.iter().map(|&c| mulmod(c, k, self.modulus)).collect(),
        }
    }

    /// `c + β·a` for an integral `a` and small integer `c`, the step of the
    /// graph-directed iteration.
    pub fn affine_step(&self, a: &[u64], c: u64, out: &mut [u64]) {
        let g = self.degree();
        let m = self.modulus;
        for o in out.iter_mut() {
            *o = 0;
        }
        let mut prod = vec![0u64; 2 * g];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in self.beta.iter().enumerate() {
                prod[i + j] = addmod(prod[i + j], mulmod(x, y, m), m);
            }
        }
        prod.truncate(2 * g - 1);
        let red = self.reduce(prod);
        out.copy_from_slice(&red);
        out[0] = addmod(out[0], c % m, m);
    }

    /// `v_π` of a value, or `None` if it is zero to the available precision.
    pub fn valuation(&self, a: &PadicValue) -> Option<i64> {
        let cap = self.precision;
        let e = self.e as i64;
        let mut best: Option<i64> = None;
        for (j, &c) in a.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let v = vp(c, self.p, cap) as i64;
            let w = e * v + if self.e > 1 { j as i64 } else { 0 };
            best = Some(best.map_or(w, |b: i64| b.min(w)));
        }
        best.map(|b| b - e * a.shift as i64)
    }

    /// `|a|` at this place; values that vanish to the working precision get
    /// the precision floor `p^{-(M - shift)}`.
    pub fn norm(&self, a: &PadicValue) -> f64 {
        let p = self.p as f64;
        match self.valuation(a) {
            Some(v) => p.powf(-(v as f64) / self.e as f64),
            None => p.powf(-((self.precision as f64) - a.shift as f64)),
        }
    }

    pub fn distance(&self, a: &PadicValue, b: &PadicValue) -> f64 {
        self.norm(&self.sub(a, b))
    }

    /// `i`-th digit of the π-adic expansion (as an integer below `q`) of an
    /// integral value. Digits beyond the precision read as zero.
    pub fn digit(&self, a: &[u64], i: usize) -> u64 {
        let p = self.p;
        if self.e > 1 {
            let e = self.e as usize;
            let (m, j) = (i / e, i % e);
            if m as u32 >= self.precision {
                return 0;
            }
            (a[j] / pow_u64(p, m as u32)) % p
        } else {
            if i as u32 >= self.precision {
                return 0;
            }
            let pm = pow_u64(p, i as u32);
            let mut d = 0u64;
            for j in (0..a.len()).rev() {
                d = d * p + (a[j] / pm) % p;
            }
            d
        }
    }

    /// Number of π-adic digits carried by an integral value.
    pub fn digit_count(&self) -> usize {
        (self.precision * self.e) as usize
    }

    /// Real projection `Σ d_i q^{-i-1}` of an integral value.
    pub fn project(&self, a: &[u64]) -> f64 {
        let q = self.residue_size() as f64;
        let mut s = 0.0;
        let mut scale = 1.0 / q;
        for i in 0..self.digit_count() {
            if scale < 1e-18 {
                break;
            }
            s += self.digit(a, i) as f64 * scale;
            scale /= q;
        }
        s
    }

    /// Key shared exactly by integral values within distance `q^{-len/f}`,
    /// i.e. agreeing on their first `len` π-adic digits.
    pub fn prefix_key(&self, a: &[u64], len: usize) -> Vec<u64> {
        let e = self.e as usize;
        a.iter()
            .enumerate()
            .map(|(j, &c)| {
                let digits = if self.e > 1 { (len + e - 1 - j) / e } else { len };
                let digits = digits.min(self.precision as usize) as u32;
                if digits >= self.precision {
                    c
                } else {
                    c % pow_u64(self.p, digits)
                }
            })
            .collect()
    }

    /// Whether `a` and `b` agree on their first `len` π-adic digits.
    pub fn same_prefix(&self, a: &[u64], b: &[u64], len: usize) -> bool {
        let e = self.e as usize;
        a.iter().zip(b).enumerate().all(|(j, (&x, &y))| {
            let digits = if self.e > 1 { (len + e - 1 - j) / e } else { len };
            let digits = digits.min(self.precision as usize) as u32;
            if digits >= self.precision {
                x == y
            } else {
                let m = pow_u64(self.p, digits);
                x % m == y % m
            }
        })
    }

    /// Number of leading π-adic digits two values must share to be within
    /// distance `r`.
    pub fn digits_for_radius(&self, r: f64) -> usize {
        if r >= 1.0 {
            return 0;
        }
        let per_digit = (self.p as f64).ln() / self.e as f64;
        let n = ((-r.ln()) / per_digit - 1e-9).ceil().max(0.0) as usize;
        n.min(self.digit_count())
    }

    /// `δ(x)` at this place.
    pub fn embed(&self, x: &FieldElement) -> Result<PadicValue, PadicError> {
        let m = self.modulus;
        let mut acc = vec![0u64; self.degree()];
        for (a, pw) in x.numer().iter().zip(&self.powers) {
            let a = reduce_bigint(a, m);
            for (o, &c) in acc.iter_mut().zip(pw) {
                *o = addmod(*o, mulmod(a, c, m), m);
            }
        }
        let mut d = x.denom().clone();
        let p = BigInt::from(self.p);
        let mut shift = 0u32;
        while (&d % &p).is_zero() {
            d /= &p;
            shift += 1;
        }
        if shift >= self.precision {
            return Err(PadicError::PrecisionExhausted { p: self.p, shift });
        }
        let dinv = invmod(reduce_bigint(&d, m), m).expect("unit modulo p^M");
        Ok(PadicValue {
            shift,
            coeffs: acc.iter().map(|&c| mulmod(c, dinv, m)).collect(),
        })
    }
}

/// All p-adic places of `Q(β)` at which `β` contracts, with `n_p` digits of
/// precision (capped so that `p^{n_p}` fits in a machine word).
pub fn padic_places(minpoly: &[BigInt], n_p: u32) -> Result<Vec<PadicPlace>, PadicError> {
    let c0 = minpoly[0].abs();
    let Some(c0) = c0.to_u64() else {
        return Err(PadicError::UnsupportedRamification {
            p: 0,
            reason: "constant term too large to factor".into(),
        });
    };
    let mut out = Vec::new();
    for p in factor_prime(c0) {
        out.extend(places_at(minpoly, p, n_p)?);
    }
    Ok(out)
}

fn places_at(minpoly: &[BigInt], p: u64, n_p: u32) -> Result<Vec<PadicPlace>, PadicError> {
    let unsupported = |reason: &str| PadicError::UnsupportedRamification { p, reason: reason.to_string() };
    let max_digits = (MAX_MODULUS_BITS as f64 / (p as f64).log2()).floor() as u32;
    let r = minpoly.len() - 1;
    let k = minpoly
        .iter()
        .position(|c| !(c % BigInt::from(p)).is_zero())
        .expect("monic");
    let big_v = {
        let mut v = 0u32;
        let mut c = minpoly[0].abs();
        while (&c % BigInt::from(p)).is_zero() {
            c /= p;
            v += 1;
        }
        v
    };
    if max_digits <= big_v + 8 {
        return Err(unsupported("insufficient machine precision for this prime"));
    }
    let w = max_digits;
    let precision = n_p.min(w - big_v);
    let mw = pow_u64(p, w);
    let f: Vec<u64> = minpoly.iter().map(|c| reduce_bigint(c, mw)).collect();

    // factor with roots of positive valuation
    let a = if k == r {
        f.clone()
    } else {
        let mut xk = vec![0u64; k + 1];
        xk[k] = 1;
        hensel_lift(&f, &xk, p, w).ok_or_else(|| unsupported("Hensel lifting failed"))?
    };
    let vals: Vec<u32> = a.iter().map(|&c| vp(c, p, w)).collect();
    debug_assert_eq!(vals[0], big_v);
    let kk = k as u64;
    let single_segment = (0..=k).all(|i| vals[i] as u64 * kk >= big_v as u64 * (kk - i as u64));
    if !single_segment {
        return Err(unsupported("Newton polygon of the contracting factor has several slopes"));
    }

    let mp = pow_u64(p, precision);
    if big_v == 1 {
        // Eisenstein: totally ramified, θ = β
        let factor: Vec<u64> = a.iter().map(|&c| c % mp).collect();
        let mut beta = vec![0u64; 2];
        beta[1] = 1;
        let place = finish_place(p, k as u32, 1, precision, factor, beta, 1, r);
        return Ok(vec![place]);
    }
    if big_v as usize % k != 0 {
        return Err(unsupported("ramified contracting factor is not Eisenstein"));
    }
    let v = big_v / k as u32;
    // residual polynomial A(p^v Y)/p^{vk}, known modulo p^{w - vk}
    let mres = pow_u64(p, w - big_v);
    let av: Vec<u64> = (0..=k)
        .map(|i| {
            let vi = v * i as u32;
            let c = a[i];
            if vi >= big_v {
                mulmod(c, pow_u64(p, vi - big_v), mres)
            } else {
                (c / pow_u64(p, big_v - vi)) % mres
            }
        })
        .collect();
    let av_p: Vec<u64> = av.iter().map(|&c| c % p).collect();
    let factors = factor_small(&av_p, p).ok_or_else(|| unsupported("residual polynomial of degree > 3"))?;
    if factors.is_empty() {
        return Err(unsupported("residual polynomial is not square-free"));
    }
    let beta_scale = pow_u64(p, v);
    let mut out = Vec::new();
    for g in factors {
        let lifted = if g.len() == av.len() {
            av.clone()
        } else {
            hensel_lift(&av, &g, p, w - big_v).ok_or_else(|| unsupported("Hensel lifting failed"))?
        };
        let factor: Vec<u64> = lifted.iter().map(|&c| c % mp).collect();
        let fdeg = (factor.len() - 1) as u32;
        let beta = vec![0, beta_scale % mp];
        out.push(finish_place(p, 1, fdeg, precision, factor, beta, v, r));
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn finish_place(
    p: u64,
    e: u32,
    f: u32,
    precision: u32,
    factor: Vec<u64>,
    beta_poly: Vec<u64>,
    beta_valuation: u32,
    r: usize,
) -> PadicPlace {
    let modulus = pow_u64(p, precision);
    let mut place = PadicPlace {
        p,
        e,
        f,
        precision,
        modulus,
        factor,
        beta: Vec::new(),
        beta_valuation,
        powers: Vec::new(),
    };
    place.beta = place.reduce(beta_poly);
    let mut pw = place.from_int(1).coeffs;
    for _ in 0..r {
        place.powers.push(pw.clone());
        pw = place.reduce(pmul(&pw, &place.beta, modulus));
    }
    place
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numberfield::PisotField;

    fn big(c: &[i64]) -> Vec<BigInt> {
        c.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn modular_helpers() {
        assert_eq!(invmod(3, 16), Some(11));
        assert_eq!(invmod(2, 16), None);
        assert_eq!(vp(40, 2, 10), 3);
        assert_eq!(factor_prime(360), vec![2, 3, 5]);
    }

    #[test]
    fn hensel_lift_splits_off_roots() {
        // X^2 - X - 6 = (X - 3)(X + 2); at p = 5, X - 3 ≡ X + 2 fails, use p = 7
        let f: Vec<u64> = vec![(7u64.pow(10) - 6), 7u64.pow(10) - 1, 1];
        let g = vec![4, 1]; // X - 3 mod 7
        let lifted = hensel_lift(&f, &g, 7, 10).unwrap();
        assert_eq!(lifted, vec![7u64.pow(10) - 3, 1]);
    }

    #[test]
    fn units_have_no_places() {
        assert!(padic_places(&big(&[-1, -1, 1]), 32).unwrap().is_empty());
        assert!(padic_places(&big(&[-1, -1, -1, 1]), 32).unwrap().is_empty());
    }

    #[test]
    fn sqrt2_is_ramified_at_two() {
        let pl = padic_places(&big(&[2, -4, 1]), 32).unwrap();
        assert_eq!(pl.len(), 1);
        let q = &pl[0];
        assert_eq!((q.p, q.e, q.f, q.degree()), (2, 2, 1, 2));
        assert!((q.contraction() - 0.5f64.sqrt()).abs() < 1e-15);
        assert_eq!(q.haar_module(), 0.5);
        assert_eq!(q.norm(&q.beta()), 0.5f64.sqrt());
        assert_eq!(q.norm(&q.from_int(2)), 0.5);
    }

    #[test]
    fn base_ten_has_two_places() {
        let pl = padic_places(&big(&[-10, 1]), 32).unwrap();
        assert_eq!(pl.iter().map(|q| q.p).collect::<Vec<_>>(), vec![2, 5]);
        let k = PisotField::new(&[-10, 1]).unwrap();
        let third = k.from_ratio(1.into(), 3.into()).unwrap();
        for q in &pl {
            let t = q.embed(&third).unwrap();
            assert_eq!(q.mul_int(&t, 3), q.from_int(1));
        }
        let half = k.from_ratio(1.into(), 2.into()).unwrap();
        assert_eq!(pl[0].norm(&pl[0].embed(&half).unwrap()), 2.0);
    }

    #[test]
    fn unramified_quadratic_place() {
        // X^2 - 6X + 4 at p = 2: β = 2γ with γ^2 - 3γ + 1 = 0 irreducible mod 2
        let pl = padic_places(&big(&[4, -6, 1]), 32).unwrap();
        assert_eq!(pl.len(), 1);
        let q = &pl[0];
        assert_eq!((q.e, q.f), (1, 2));
        assert_eq!(q.contraction(), 0.5);
        assert_eq!(q.haar_module(), 0.25);
        let b = q.beta();
        let lhs = q.add(&q.mul(&b, &b), &q.from_int(4));
        assert_eq!(lhs, q.mul_int(&b, 6));
    }

    #[test]
    fn unsupported_shapes() {
        // root valuation 3/2
        assert!(matches!(
            padic_places(&big(&[8, -12, 1]), 32),
            Err(PadicError::UnsupportedRamification { .. })
        ));
        // two slopes
        assert!(matches!(
            padic_places(&big(&[8, -10, 1]), 32),
            Err(PadicError::UnsupportedRamification { .. })
        ));
    }

    #[test]
    fn embedding_is_a_ring_map() {
        let k = PisotField::new(&[2, -4, 1]).unwrap();
        let q = &padic_places(k.minpoly(), 32).unwrap()[0];
        let x = k.element_i64(&[3, -1], 5).unwrap();
        let y = k.element_i64(&[1, 7], 4).unwrap();
        let dx = q.embed(&x).unwrap();
        let dy = q.embed(&y).unwrap();
        assert!(q.distance(&q.mul(&dx, &dy), &q.embed(&(&x * &y)).unwrap()) < 1e-8);
        assert!(q.distance(&q.add(&dx, &dy), &q.embed(&(&x + &y)).unwrap()) < 1e-8);
    }

    #[test]
    fn digits_and_projection() {
        let q = &padic_places(&big(&[2, -4, 1]), 32).unwrap()[0];
        // β = π has digit string 0 1 0 0 …
        let b = q.beta().coeffs;
        assert_eq!((q.digit(&b, 0), q.digit(&b, 1), q.digit(&b, 2)), (0, 1, 0));
        assert_eq!(q.project(&b), 0.25);
        assert_eq!(q.digits_for_radius(0.5), 2);
        let one = q.from_int(1).coeffs;
        let three = q.from_int(3).coeffs;
        // 3 - 1 = 2 has valuation 2 in π-units, so they share 2 digits
        assert_eq!(q.prefix_key(&one, 2), q.prefix_key(&three, 2));
        assert_ne!(q.prefix_key(&one, 3), q.prefix_key(&three, 3));
    }
}
