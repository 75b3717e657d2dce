//! The automaton `M_β` recognising the factors of the β-shift, its
//! reversal, the β-substitution with its incidence matrix, and the linear
//! numeration system `U_k`.
//!
//! States are numbered `0 … d-1` internally and shown as `a_1 … a_d`;
//! substitution letters are likewise `0 … d-1` internally and `1 … d` when
//! displayed.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use crate::betaexpand::{Digit, ParryData, ParryKind};
use crate::poly;
use crate::roots;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SoficError {
    #[error("index {index} is not below U_{n} = {bound}")]
    IndexOutOfRange { index: u128, n: usize, bound: u128 },
    #[error("U_{0} overflows 128 bits")]
    Overflow(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub from: usize,
    pub label: Digit,
    pub to: usize,
}

/// A finite automaton in which every state is initial and accepting.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SoficAutomaton {
    pub states: usize,
    /// Sorted by `(from, label, to)`.
    pub edges: Vec<Edge>,
}

/// Chain automaton of Fig. 1 built from `t_1 … t_d`: edge `a_i → a_{i+1}`
/// labelled `t_i`, edges `a_i → a_1` labelled `0 … t_i - 1`, and for a
/// non-simple Parry number the closing edge `a_d → a_{n+1}` labelled `t_d`.
pub fn build_automaton(parry: &ParryData) -> SoficAutomaton {
    let d = parry.d;
    let mut edges = Vec::new();
    for (i, &ti) in parry.t.iter().enumerate() {
        for label in 0..ti {
            edges.push(Edge { from: i, label, to: 0 });
        }
        if i + 1 < d {
            edges.push(Edge { from: i, label: ti, to: i + 1 });
        } else if parry.kind == ParryKind::NonSimpleParry {
            edges.push(Edge { from: i, label: ti, to: parry.n });
        }
    }
    SoficAutomaton::new(d, edges)
}

impl SoficAutomaton {
    pub fn new(states: usize, mut edges: Vec<Edge>) -> Self {
        edges.sort();
        edges.dedup();
        SoficAutomaton { states, edges }
    }

    /// Same states, every edge reversed.
    pub fn reverse(&self) -> Self {
        let edges = self
            .edges
            .iter()
            .map(|e| Edge { from: e.to, label: e.label, to: e.from })
            .collect();
        Self::new(self.states, edges)
    }

    pub fn out_edges(&self, state: usize) -> impl Iterator<Item = &Edge> {
        let start = self.edges.partition_point(|e| e.from < state);
        self.edges[start..].iter().take_while(move |e| e.from == state)
    }

    pub fn is_deterministic(&self) -> bool {
        self.edges
            .windows(2)
            .all(|w| (w[0].from, w[0].label) != (w[1].from, w[1].label))
    }

    /// `w` labels a path starting anywhere.
    pub fn is_factor(&self, w: &[Digit]) -> bool {
        let mut current: BTreeSet<usize> = (0..self.states).collect();
        for &c in w {
            current = current
                .iter()
                .flat_map(|&s| self.out_edges(s).filter(move |e| e.label == c).map(|e| e.to))
                .collect();
            if current.is_empty() {
                return false;
            }
        }
        true
    }

    /// `A[i][j]` = number of edges from state `i` to state `j`.
    pub fn adjacency(&self) -> Vec<Vec<i64>> {
        let mut a = vec![vec![0i64; self.states]; self.states];
        for e in &self.edges {
            a[e.from][e.to] += 1;
        }
        a
    }

    /// Graphviz description with the digit as edge label.
    pub fn to_dot(&self, name: &str) -> String {
        let mut s = format!("digraph {name} {{\n");
        for i in 0..self.states {
            s.push_str(&format!("  a{} [label=\"a{}\"];\n", i + 1, i + 1));
        }
        for e in &self.edges {
            s.push_str(&format!("  a{} -> a{} [label=\"{}\"];\n", e.from + 1, e.to + 1, e.label));
        }
        s.push_str("}\n");
        s
    }
}

/// A substitution on the letters `0 … d-1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Substitution {
    pub images: Vec<Vec<usize>>,
}

/// `i ↦ 1^{t_i}(i+1)` for `i < d`; the last letter maps to `1^{t_d}`
/// (simple) or `1^{t_d}(n+1)` (non-simple).
pub fn build_substitution(parry: &ParryData) -> Substitution {
    let d = parry.d;
    let images = parry
        .t
        .iter()
        .enumerate()
        .map(|(i, &ti)| {
            let mut img = vec![0usize; ti as usize];
            if i + 1 < d {
                img.push(i + 1);
            } else if parry.kind == ParryKind::NonSimpleParry {
                img.push(parry.n);
            }
            img
        })
        .collect();
    Substitution { images }
}

impl Substitution {
    pub fn size(&self) -> usize {
        self.images.len()
    }

    /// `M[i][j]` = occurrences of letter `i` in `σ(j)`.
    pub fn incidence(&self) -> Vec<Vec<i64>> {
        let d = self.size();
        let mut m = vec![vec![0i64; d]; d];
        for (j, img) in self.images.iter().enumerate() {
            for &i in img {
                m[i][j] += 1;
            }
        }
        m
    }

    /// `σ^k(letter)`.
    pub fn iterate(&self, letter: usize, k: usize) -> Vec<usize> {
        let mut w = vec![letter];
        for _ in 0..k {
            w = w.iter().flat_map(|&a| self.images[a].iter().copied()).collect();
        }
        w
    }

    /// One `i -> word` line per letter, letters shown from 1.
    pub fn listing(&self) -> String {
        let mut s = String::new();
        for (i, img) in self.images.iter().enumerate() {
            s.push_str(&format!("{} -> {}\n", i + 1, format_letters(img)));
        }
        s
    }
}

fn format_letters(w: &[usize]) -> String {
    w.iter()
        .map(|&a| if a < 9 { (a + 1).to_string() } else { format!("[{}]", a + 1) })
        .collect()
}

impl fmt::Display for Substitution {
    /// `1->12 2->13 3->1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .images
            .iter()
            .enumerate()
            .map(|(i, img)| format!("{}->{}", i + 1, format_letters(img)))
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

pub fn incidence(sub: &Substitution) -> Vec<Vec<i64>> {
    sub.incidence()
}

pub fn transpose(m: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = m.len();
    (0..n).map(|i| (0..n).map(|j| m[j][i]).collect()).collect()
}

pub fn char_poly(m: &[Vec<i64>]) -> Vec<BigInt> {
    poly::char_poly(m)
}

/// The dominant root is real, simple and `> 1`, and every other root is
/// nonzero with modulus `< 1`.
pub fn is_pisot_type(cp: &[BigInt]) -> bool {
    let mut p = cp.to_vec();
    poly::trim(&mut p);
    let Some(deg) = poly::degree(&p) else { return false };
    if deg == 0 || p[0].is_zero() || !p[deg].is_one() {
        return false;
    }
    let sq = poly::squarefree_part(&p);
    if poly::has_unit_circle_root(&sq) {
        return false;
    }
    let Some(discs) = decided_discs(&sq) else { return false };
    let outside: Vec<_> = discs.iter().filter(|d| d.modulus_vs_one() == Ordering::Greater).collect();
    if outside.len() != 1 || !outside[0].is_real() || !outside[0].re.is_positive() {
        return false;
    }
    // a repeated root of p is a root of gcd(p, p')
    let g = poly::gcd(&p, &poly::derivative(&p));
    if poly::degree(&g).unwrap_or(0) > 0 {
        let gsq = poly::squarefree_part(&g);
        match decided_discs(&gsq) {
            Some(gd) if gd.iter().all(|d| d.modulus_vs_one() == Ordering::Less) => {}
            _ => return false,
        }
    }
    true
}

/// Root discs refined until each is certified inside or outside the unit
/// circle; the polynomial must have no root of modulus one.
fn decided_discs(p: &[BigInt]) -> Option<Vec<roots::RootDisc>> {
    let mut bits = 64;
    loop {
        let discs = roots::isolate(p, bits).ok()?;
        if discs.iter().all(|d| d.modulus_vs_one() != Ordering::Equal) {
            return Some(discs);
        }
        if bits > 1 << 14 {
            return None;
        }
        bits *= 2;
    }
}

/// `Φ_n` by exact division of `X^n - 1` by the `Φ_d`, `d | n`, `d < n`.
pub fn cyclotomic(n: usize) -> Vec<BigInt> {
    let mut p = vec![BigInt::zero(); n + 1];
    p[0] = -BigInt::one();
    p[n] = BigInt::one();
    for d in 1..n {
        if n % d == 0 {
            p = poly::div_exact_monic(&p, &cyclotomic(d)).expect("Φ_d divides X^n - 1");
        }
    }
    p
}

/// Splits `cp` into powers of `minpoly`, of `X`, of cyclotomic polynomials,
/// and one remaining factor. Returns `(factor, multiplicity)` pairs.
pub fn factor_char_poly(cp: &[BigInt], minpoly: &[BigInt]) -> Vec<(Vec<BigInt>, usize)> {
    let mut rest = cp.to_vec();
    poly::trim(&mut rest);
    let mut out = Vec::new();
    let mut take = |rest: &mut Vec<BigInt>, f: &[BigInt]| {
        let mut k = 0;
        while poly::degree(rest).unwrap_or(0) >= poly::degree(f).unwrap_or(0) {
            match poly::div_exact_monic(rest, f) {
                Some(q) => {
                    *rest = q;
                    k += 1;
                }
                None => break,
            }
        }
        if k > 0 {
            out.push((f.to_vec(), k));
        }
    };
    take(&mut rest, minpoly);
    take(&mut rest, &[BigInt::zero(), BigInt::one()]);
    // φ(n) ≥ √(n/2), so only n ≤ 2·deg² can contribute
    let deg = poly::degree(&rest).unwrap_or(0);
    let mut n = 1;
    while poly::degree(&rest).unwrap_or(0) > 0 && n <= 2 * deg * deg {
        let phi = cyclotomic(n);
        if phi != minpoly {
            take(&mut rest, &phi);
        }
        n += 1;
    }
    if poly::degree(&rest).unwrap_or(0) > 0 {
        out.push((rest, 1));
    }
    out
}

/// `(X^3 - X - 1)(X^2 - X + 1)`.
pub fn format_factorization(factors: &[(Vec<BigInt>, usize)]) -> String {
    if factors.len() == 1 && factors[0].1 == 1 {
        return poly::format(&factors[0].0);
    }
    factors
        .iter()
        .map(|(f, k)| {
            if *k == 1 {
                format!("({})", poly::format(f))
            } else {
                format!("({})^{k}", poly::format(f))
            }
        })
        .collect()
}

/// `U_0 … U_n` with `U_0 = 1`, `U_k = t*_1 U_{k-1} + … + t*_k U_0 + 1`,
/// `t*` the digits of `d*_β(1)`.
pub fn numeration(parry: &ParryData, n: usize) -> Result<Vec<u128>, SoficError> {
    let mut u: Vec<u128> = vec![1];
    for k in 1..=n {
        let mut s: u128 = 1;
        for j in 1..=k {
            let t = u128::from(parry.d_star.digit(j - 1));
            s = t
                .checked_mul(u[k - j])
                .and_then(|x| x.checked_add(s))
                .ok_or(SoficError::Overflow(k))?;
        }
        u.push(s);
    }
    Ok(u)
}

/// Greedy representation of `i < U_n` as `w_{n-1} … w_0` with
/// `i = Σ w_k U_k`, most significant digit first.
pub fn greedy_rep(parry: &ParryData, i: u128, n: usize) -> Result<Vec<Digit>, SoficError> {
    let u = numeration(parry, n)?;
    if i >= u[n] {
        return Err(SoficError::IndexOutOfRange { index: i, n, bound: u[n] });
    }
    let mut rem = i;
    let mut w = Vec::with_capacity(n);
    for k in (0..n).rev() {
        let q = rem / u[k];
        rem -= q * u[k];
        w.push(q as Digit);
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::betaexpand::classify_parry;
    use crate::numberfield::PisotField;

    fn parry(c: &[i64]) -> ParryData {
        classify_parry(&PisotField::new(c).unwrap()).unwrap()
    }

    fn e(from: usize, label: Digit, to: usize) -> Edge {
        Edge { from, label, to }
    }

    #[test]
    fn golden_automaton() {
        let a = build_automaton(&parry(&[-1, -1, 1]));
        assert_eq!(a.states, 2);
        assert_eq!(a.edges, vec![e(0, 0, 0), e(0, 1, 1), e(1, 0, 0)]);
        let r = a.reverse();
        assert_eq!(r.out_edges(1).copied().collect::<Vec<_>>(), vec![e(1, 1, 0)]);
        assert_eq!(r.reverse(), a);
    }

    #[test]
    fn sqrt2_automaton() {
        let a = build_automaton(&parry(&[2, -4, 1]));
        assert_eq!(
            a.edges,
            vec![e(0, 0, 0), e(0, 1, 0), e(0, 2, 0), e(0, 3, 1), e(1, 0, 0), e(1, 1, 1)]
        );
        assert!(a.is_deterministic());
    }

    #[test]
    fn smallest_pisot_automaton() {
        let a = build_automaton(&parry(&[-1, -1, 0, 1]));
        assert_eq!(a.states, 5);
        assert_eq!(
            a.edges,
            vec![e(0, 0, 0), e(0, 1, 1), e(1, 0, 2), e(2, 0, 3), e(3, 0, 4), e(4, 0, 0)]
        );
    }

    #[test]
    fn factors() {
        let a = build_automaton(&parry(&[-1, -1, -1, 1]));
        assert!(a.is_factor(&[1, 1, 0]));
        assert!(!a.is_factor(&[1, 1, 1]));
        assert!(a.is_factor(&[]));
    }

    #[test]
    fn substitutions() {
        assert_eq!(build_substitution(&parry(&[-1, -1, -1, 1])).to_string(), "1->12 2->13 3->1");
        assert_eq!(
            build_substitution(&parry(&[-1, -1, 0, 1])).to_string(),
            "1->12 2->3 3->4 4->5 5->1"
        );
        assert_eq!(build_substitution(&parry(&[2, -4, 1])).to_string(), "1->1112 2->12");
        assert_eq!(build_substitution(&parry(&[-3, 1])).to_string(), "1->111");
    }

    #[test]
    fn incidence_is_transposed_adjacency() {
        for c in [&[-1, -1, 1][..], &[-1, -1, -1, 1], &[-1, -1, 0, 1], &[2, -4, 1], &[-10, 1]] {
            let p = parry(c);
            let m = build_substitution(&p).incidence();
            assert_eq!(m, transpose(&build_automaton(&p).adjacency()));
        }
    }

    #[test]
    fn smallest_pisot_is_not_pisot_type() {
        let p = parry(&[-1, -1, 0, 1]);
        let cp = char_poly(&build_substitution(&p).incidence());
        let f = factor_char_poly(&cp, p.field.minpoly());
        assert_eq!(format_factorization(&f), "(X^3 - X - 1)(X^2 - X + 1)");
        assert!(!is_pisot_type(&cp));
    }

    #[test]
    fn pisot_type_cases() {
        let fib = char_poly(&[vec![1, 1], vec![1, 0]]);
        assert_eq!(poly::format(&fib), "X^2 - X - 1");
        assert!(is_pisot_type(&fib));
        assert!(is_pisot_type(&char_poly(&[vec![3]])));
        // zero eigenvalue
        assert!(!is_pisot_type(&char_poly(&[vec![1, 1], vec![0, 0]])));
        // repeated dominant eigenvalue
        assert!(!is_pisot_type(&char_poly(&[vec![2, 0], vec![0, 2]])));
        let s2 = parry(&[2, -4, 1]);
        assert!(is_pisot_type(&char_poly(&build_substitution(&s2).incidence())));
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(poly::format(&cyclotomic(1)), "X - 1");
        assert_eq!(poly::format(&cyclotomic(6)), "X^2 - X + 1");
        assert_eq!(poly::format(&cyclotomic(12)), "X^4 - X^2 + 1");
    }

    #[test]
    fn golden_numeration() {
        let p = parry(&[-1, -1, 1]);
        assert_eq!(numeration(&p, 5).unwrap(), vec![1, 2, 3, 5, 8, 13]);
        assert_eq!(greedy_rep(&p, 4, 3).unwrap(), vec![1, 0, 1]);
        assert_eq!(greedy_rep(&p, 0, 4).unwrap(), vec![0; 4]);
        assert!(matches!(greedy_rep(&p, 5, 3), Err(SoficError::IndexOutOfRange { .. })));
    }

    #[test]
    fn dot_export() {
        let dot = build_automaton(&parry(&[-1, -1, 1])).to_dot("golden");
        assert_eq!(dot.matches("->").count(), 3);
        assert!(dot.contains("a1 -> a2 [label=\"1\"]"));
    }
}
