//! Dense univariate polynomials over Z and Q.
//!
//! Coefficient vectors are stored constant term first, matching the field
//! descriptor format. Trailing zero coefficients are trimmed by every routine
//! that returns a polynomial, so `p.len() - 1` is the degree of a nonzero `p`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub(crate) fn trim<T: Zero>(p: &mut Vec<T>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

/// Degree of a polynomial, `None` for the zero polynomial.
pub fn degree<T: Zero>(p: &[T]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

pub fn to_rational(p: &[BigInt]) -> Vec<BigRational> {
    p.iter().map(|c| BigRational::from_integer(c.clone())).collect()
}

/// Clears denominators and divides by the content; the leading coefficient
/// of the result is positive.
pub fn primitive_part(p: &[BigRational]) -> Vec<BigInt> {
    let mut p = p.to_vec();
    trim(&mut p);
    if p.is_empty() {
        return Vec::new();
    }
    let lcm = p
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let mut out: Vec<BigInt> = p
        .iter()
        .map(|c| c.numer() * (&lcm / c.denom()))
        .collect();
    let content = out.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if !content.is_zero() {
        for c in out.iter_mut() {
            *c = &*c / &content;
        }
    }
    if out.last().is_some_and(|c| c.is_negative()) {
        for c in out.iter_mut() {
            *c = -&*c;
        }
    }
    out
}

pub fn derivative(p: &[BigInt]) -> Vec<BigInt> {
    let mut d: Vec<BigInt> = p
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * BigInt::from(k))
        .collect();
    trim(&mut d);
    d
}

pub fn mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

fn sub(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    let mut out: Vec<BigInt> = (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_default();
            let y = b.get(i).cloned().unwrap_or_default();
            x - y
        })
        .collect();
    trim(&mut out);
    out
}

/// Quotient and remainder over Q. Panics if `b` is zero.
pub fn divrem_q(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let db = degree(b).expect("division by the zero polynomial");
    let mut r = a.to_vec();
    trim(&mut r);
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![BigRational::zero(); r.len() - db];
    let lead = &b[db];
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let c = &r[dr] / lead;
        let shift = dr - db;
        for (i, bi) in b.iter().enumerate().take(db + 1) {
            r[i + shift] -= &c * bi;
        }
        q[shift] = c;
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

/// Monic greatest common divisor over Q.
pub fn gcd_q(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let (_, r) = divrem_q(&x, &y);
        x = y;
        y = r;
    }
    if let Some(lead) = x.last().cloned() {
        for c in x.iter_mut() {
            *c = &*c / &lead;
        }
    }
    x
}

/// Primitive integer gcd of two integer polynomials.
pub fn gcd(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    primitive_part(&gcd_q(&to_rational(a), &to_rational(b)))
}

/// `p / gcd(p, p')`, as a primitive integer polynomial.
pub fn squarefree_part(p: &[BigInt]) -> Vec<BigInt> {
    let g = gcd(p, &derivative(p));
    if degree(&g).unwrap_or(0) == 0 {
        return primitive_part(&to_rational(p));
    }
    let (q, _) = divrem_q(&to_rational(p), &to_rational(&g));
    primitive_part(&q)
}

pub fn is_squarefree(p: &[BigInt]) -> bool {
    degree(&gcd(p, &derivative(p))).unwrap_or(0) == 0
}

/// `X^deg p · p(1/X)`.
pub fn reciprocal(p: &[BigInt]) -> Vec<BigInt> {
    let mut r: Vec<BigInt> = p.iter().rev().cloned().collect();
    trim(&mut r);
    r
}

/// Exact division by a monic integer polynomial; `None` if the remainder is
/// nonzero.
pub fn div_exact_monic(a: &[BigInt], m: &[BigInt]) -> Option<Vec<BigInt>> {
    let dm = degree(m)?;
    debug_assert!(m[dm].is_one());
    let mut r = a.to_vec();
    trim(&mut r);
    if r.is_empty() {
        return Some(Vec::new());
    }
    if r.len() <= dm {
        return None;
    }
    let mut q = vec![BigInt::zero(); r.len() - dm];
    while let Some(dr) = degree(&r) {
        if dr < dm {
            break;
        }
        let c = r[dr].clone();
        let shift = dr - dm;
        for (i, mi) in m.iter().enumerate().take(dm + 1) {
            r[i + shift] -= &c * mi;
        }
        q[shift] = c;
        trim(&mut r);
    }
    if r.is_empty() {
        trim(&mut q);
        Some(q)
    } else {
        None
    }
}

pub fn eval_q(p: &[BigInt], x: &BigRational) -> BigRational {
    p.iter()
        .rev()
        .fold(BigRational::zero(), |acc, c| acc * x + BigRational::from_integer(c.clone()))
}

fn eval_qq(p: &[BigRational], x: &BigRational) -> BigRational {
    p.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
}

fn sign_changes(values: &[BigRational]) -> usize {
    let signs: Vec<bool> = values
        .iter()
        .filter(|v| !v.is_zero())
        .map(|v| v.is_positive())
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Number of distinct real roots of a square-free `p` in the half-open
/// interval `(a, b]`, by Sturm's theorem.
pub fn sturm_count(p: &[BigInt], a: &BigRational, b: &BigRational) -> usize {
    let mut seq = vec![to_rational(p), to_rational(&derivative(p))];
    loop {
        let n = seq.len();
        if seq[n - 1].is_empty() {
            seq.pop();
            break;
        }
        let (_, r) = divrem_q(&seq[n - 2], &seq[n - 1]);
        if r.is_empty() {
            break;
        }
        seq.push(r.into_iter().map(|c| -c).collect());
    }
    let at = |x: &BigRational| -> Vec<BigRational> { seq.iter().map(|s| eval_qq(s, x)).collect() };
    sign_changes(&at(a)).saturating_sub(sign_changes(&at(b)))
}

/// Decides exactly whether a square-free integer polynomial has a root of
/// modulus one.
///
/// Such a root `z` satisfies `1/z = conj(z)`, so it is a common root of `p`
/// and its reciprocal. After removing the roots `±1`, the common factor is
/// palindromic of even degree `2k` and equals `X^k H(X + 1/X)`; unit-circle
/// roots correspond to real roots of `H` inside `(-2, 2)`.
pub fn has_unit_circle_root(p: &[BigInt]) -> bool {
    let mut g = gcd(p, &reciprocal(p));
    let Some(dg) = degree(&g) else { return false };
    if dg == 0 {
        return false;
    }
    for r in [BigInt::one(), -BigInt::one()] {
        if eval_q(&g, &BigRational::from_integer(r)).is_zero() {
            return true;
        }
    }
    // zero is never a root of gcd(p, p*) unless p(0) = 0, which callers exclude
    if g[0].is_zero() {
        trim(&mut g);
        while g.first().is_some_and(|c| c.is_zero()) {
            g.remove(0);
        }
        if degree(&g).unwrap_or(0) == 0 {
            return false;
        }
    }
    let dg = degree(&g).unwrap();
    if dg % 2 == 1 {
        // a palindromic polynomial of odd degree has the root -1, excluded above
        return false;
    }
    let k = dg / 2;
    // Dickson-type polynomials D_j(y) = x^j + x^{-j}
    let mut dick: Vec<Vec<BigInt>> = vec![vec![BigInt::from(2)], vec![BigInt::zero(), BigInt::one()]];
    for j in 2..=k {
        let shifted: Vec<BigInt> = std::iter::once(BigInt::zero())
            .chain(dick[j - 1].iter().cloned())
            .collect();
        dick.push(sub(&shifted, &dick[j - 2]));
    }
    let mut h = vec![g[k].clone()];
    for (j, dj) in dick.iter().enumerate().take(k + 1).skip(1) {
        let c = &g[k + j];
        for (i, di) in dj.iter().enumerate() {
            if h.len() <= i {
                h.resize(i + 1, BigInt::zero());
            }
            h[i] += c * di;
        }
    }
    trim(&mut h);
    if degree(&h).unwrap_or(0) == 0 {
        return false;
    }
    let h = squarefree_part(&h);
    let two = BigRational::from_integer(BigInt::from(2));
    // roots at exactly ±2 correspond to x = ±1, which were excluded
    let lo = -two.clone();
    let inner = sturm_count(&h, &lo, &two);
    let at_two = usize::from(eval_q(&h, &two).is_zero());
    inner > at_two
}

/// Characteristic polynomial `det(X·I - M)` of a square integer matrix, by
/// fraction-free Bareiss elimination over `Z[X]`.
///
/// Every pivot is a leading principal minor of `X·I - M`, hence monic, so
/// all divisions are exact divisions by monic polynomials.
pub fn char_poly(m: &[Vec<i64>]) -> Vec<BigInt> {
    let n = m.len();
    if n == 0 {
        return vec![BigInt::one()];
    }
    let mut a: Vec<Vec<Vec<BigInt>>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut e = vec![BigInt::from(-m[i][j])];
                    if i == j {
                        e.push(BigInt::one());
                    }
                    trim(&mut e);
                    e
                })
                .collect()
        })
        .collect();
    let mut prev = vec![BigInt::one()];
    for k in 0..n - 1 {
        for i in k + 1..n {
            for j in k + 1..n {
                let num = sub(&mul(&a[k][k], &a[i][j]), &mul(&a[i][k], &a[k][j]));
                a[i][j] = div_exact_monic(&num, &prev).expect("Bareiss division is exact");
            }
        }
        prev = a[k][k].clone();
    }
    a[n - 1][n - 1].clone()
}

/// Human-readable rendering, highest degree first, e.g. `X^3 - X - 1`.
pub fn format(p: &[BigInt]) -> String {
    let Some(d) = degree(p) else { return "0".into() };
    let mut out = String::new();
    for k in (0..=d).rev() {
        let c = &p[k];
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let mag = c.abs();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mono = match k {
            0 => String::new(),
            1 => "X".to_string(),
            _ => format!("X^{k}"),
        };
        if k == 0 || !mag.is_one() {
            out.push_str(&mag.to_string());
        }
        out.push_str(&mono);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> Vec<BigInt> {
        c.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn formats_highest_degree_first() {
        assert_eq!(format(&p(&[-1, -1, 0, 1])), "X^3 - X - 1");
        assert_eq!(format(&p(&[1, -1, 1])), "X^2 - X + 1");
        assert_eq!(format(&p(&[-2, 1])), "X - 2");
        assert_eq!(format(&p(&[])), "0");
    }

    #[test]
    fn char_poly_of_small_matrices() {
        assert_eq!(char_poly(&[vec![1, 1], vec![1, 0]]), p(&[-1, -1, 1]));
        assert_eq!(char_poly(&[vec![7]]), p(&[-7, 1]));
        // companion-style 3x3 (tribonacci incidence)
        let m = vec![vec![1, 1, 1], vec![1, 0, 0], vec![0, 1, 0]];
        assert_eq!(char_poly(&m), p(&[-1, -1, -1, 1]));
    }

    #[test]
    fn char_poly_with_zero_leading_entry() {
        // pivot structure must not rely on nonzero constant entries
        let m = vec![vec![0, 1], vec![1, 0]];
        assert_eq!(char_poly(&m), p(&[-1, 0, 1]));
    }

    #[test]
    fn gcd_and_squarefree() {
        let a = mul(&p(&[-1, 1]), &p(&[-1, 1]));
        let a = mul(&a, &p(&[2, 1]));
        assert_eq!(squarefree_part(&a), mul(&p(&[-1, 1]), &p(&[2, 1])));
        assert!(!is_squarefree(&a));
        assert!(is_squarefree(&p(&[-1, -1, 1])));
        assert_eq!(gcd(&p(&[-1, 0, 1]), &p(&[1, 1])), p(&[1, 1]));
    }

    #[test]
    fn sturm_counts_real_roots() {
        let q = p(&[-2, 0, 1]); // ±√2
        let lo = BigRational::from_integer((-10).into());
        let hi = BigRational::from_integer(10.into());
        assert_eq!(sturm_count(&q, &lo, &hi), 2);
        assert_eq!(sturm_count(&q, &BigRational::zero(), &hi), 1);
        assert_eq!(sturm_count(&p(&[1, 0, 1]), &lo, &hi), 0);
    }

    #[test]
    fn unit_circle_detection() {
        assert!(has_unit_circle_root(&p(&[1, -1, 1])));
        assert!(has_unit_circle_root(&mul(&p(&[-1, -1, 0, 1]), &p(&[1, -1, 1]))));
        assert!(!has_unit_circle_root(&p(&[-1, -1, 1])));
        assert!(!has_unit_circle_root(&p(&[-1, -1, -1, 1])));
        assert!(has_unit_circle_root(&p(&[1, 1])));
        // reciprocal pair off the circle: X^2 - 3X + 1
        assert!(!has_unit_circle_root(&p(&[1, -3, 1])));
        // Salem-type quartic X^4 - X^3 - X^2 - X + 1 has two roots on the circle
        assert!(has_unit_circle_root(&p(&[1, -1, -1, -1, 1])));
    }

    #[test]
    fn exact_division() {
        let a = mul(&p(&[-1, -1, 0, 1]), &p(&[1, -1, 1]));
        assert_eq!(div_exact_monic(&a, &p(&[-1, -1, 0, 1])), Some(p(&[1, -1, 1])));
        assert_eq!(div_exact_monic(&a, &p(&[-1, 1])), None);
    }
}
