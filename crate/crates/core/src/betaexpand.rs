//! The β-transformation `T_β(x) = βx mod 1`, greedy β-expansions with exact
//! cycle detection, the Parry classification of `d_β(1)`, and admissibility
//! of digit words.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use crate::numberfield::{FieldElement, FieldError, PisotField};
use crate::sofic;

pub type Digit = u32;

pub const DEFAULT_MAX_STEPS: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExpandError {
    #[error("x must lie in [0, 1)")]
    OutOfRange,
    #[error("no cycle found within {0} steps")]
    OrbitBudgetExceeded(usize),
    #[error("digit word is not admissible")]
    InadmissibleWord,
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// `preperiod · period^∞`; an empty period stands for the tail `0^∞`.
///
/// Constructed words are canonical: the period is primitive and the
/// preperiod as short as possible.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EventuallyPeriodicWord {
    pub preperiod: Vec<Digit>,
    pub period: Vec<Digit>,
}

impl EventuallyPeriodicWord {
    pub fn new(mut preperiod: Vec<Digit>, mut period: Vec<Digit>) -> Self {
        if period.iter().all(|&d| d == 0) {
            period.clear();
            while preperiod.last() == Some(&0) {
                preperiod.pop();
            }
            return EventuallyPeriodicWord { preperiod, period };
        }
        let l = period.len();
        if let Some(k) = (1..=l).find(|&k| l % k == 0 && (k..l).all(|i| period[i] == period[i - k])) {
            period.truncate(k);
        }
        while let Some(&last) = preperiod.last() {
            if last != *period.last().expect("nonempty period") {
                break;
            }
            preperiod.pop();
            period.rotate_right(1);
        }
        EventuallyPeriodicWord { preperiod, period }
    }

    pub fn finite(w: Vec<Digit>) -> Self {
        Self::new(w, Vec::new())
    }

    pub fn purely_periodic(period: Vec<Digit>) -> Self {
        Self::new(Vec::new(), period)
    }

    pub fn is_finite(&self) -> bool {
        self.period.is_empty()
    }

    /// Digit at 0-based position `i`.
    pub fn digit(&self, i: usize) -> Digit {
        if i < self.preperiod.len() {
            self.preperiod[i]
        } else if self.period.is_empty() {
            0
        } else {
            self.period[(i - self.preperiod.len()) % self.period.len()]
        }
    }

    /// Suffix starting at position `k`.
    pub fn suffix(&self, k: usize) -> Self {
        if k <= self.preperiod.len() {
            return Self::new(self.preperiod[k..].to_vec(), self.period.clone());
        }
        if self.period.is_empty() {
            return Self::finite(Vec::new());
        }
        let mut per = self.period.clone();
        per.rotate_left((k - self.preperiod.len()) % self.period.len());
        Self::new(Vec::new(), per)
    }

    /// Lexicographic comparison of the infinite words.
    pub fn lex_cmp(&self, other: &Self) -> Ordering {
        let pl = self.period.len().max(1);
        let ql = other.period.len().max(1);
        let horizon = self.preperiod.len() + other.preperiod.len() + pl.lcm(&ql) + 1;
        for i in 0..horizon {
            match self.digit(i).cmp(&other.digit(i)) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    }
}

fn fmt_digit(d: Digit, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if d < 10 {
        write!(f, "{d}")
    } else {
        write!(f, "[{d}]")
    }
}

impl fmt::Display for EventuallyPeriodicWord {
    /// `31^∞`, `(10)^∞`, `11`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &d in &self.preperiod {
            fmt_digit(d, f)?;
        }
        match self.period.len() {
            0 if self.preperiod.is_empty() => write!(f, "0^∞"),
            0 => Ok(()),
            1 => {
                fmt_digit(self.period[0], f)?;
                write!(f, "^∞")
            }
            _ => {
                write!(f, "(")?;
                for &d in &self.period {
                    fmt_digit(d, f)?;
                }
                write!(f, ")^∞")
            }
        }
    }
}

/// Parses digit strings: single decimal characters, or `[n]` for digits
/// above nine.
pub fn parse_digits(s: &str) -> Option<Vec<Digit>> {
    let mut out = Vec::new();
    let mut chars = s.trim().chars();
    while let Some(c) = chars.next() {
        if c == '[' {
            let n: String = chars.by_ref().take_while(|&c| c != ']').collect();
            out.push(n.parse().ok()?);
        } else {
            out.push(c.to_digit(10)?);
        }
    }
    Some(out)
}

pub fn format_digits(w: &[Digit]) -> String {
    w.iter()
        .map(|&d| if d < 10 { d.to_string() } else { format!("[{d}]") })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParryKind {
    SimpleParry,
    NonSimpleParry,
}

/// `d_β(1)`, `d*_β(1)` and the shape of the automaton they determine.
#[derive(Clone, Debug)]
pub struct ParryData {
    pub field: PisotField,
    pub d_beta_one: EventuallyPeriodicWord,
    pub d_star: EventuallyPeriodicWord,
    pub kind: ParryKind,
    /// Preperiod length (the number of digits when `d_β(1)` is finite).
    pub n: usize,
    /// Period length, zero for simple Parry numbers.
    pub p: usize,
    /// Number of states of `M_β`.
    pub d: usize,
    /// `t_1 … t_d`.
    pub t: Vec<Digit>,
    /// `T_β^{i}(1)` computed by the `d_β(1)` recursion, `i = 0 … d-1`.
    pub tails: Vec<FieldElement>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpansionResult {
    pub preperiod: Vec<Digit>,
    pub period: Vec<Digit>,
    pub purely_periodic: bool,
}

impl ExpansionResult {
    pub fn word(&self) -> EventuallyPeriodicWord {
        EventuallyPeriodicWord::new(self.preperiod.clone(), self.period.clone())
    }
}

fn check_unit_interval(x: &FieldElement) -> Result<(), ExpandError> {
    if x.floor().is_zero() {
        Ok(())
    } else {
        Err(ExpandError::OutOfRange)
    }
}

/// `T_β(x) = βx - ⌊βx⌋` for `x ∈ [0, 1)`.
pub fn t_beta(x: &FieldElement) -> Result<FieldElement, ExpandError> {
    check_unit_interval(x)?;
    let y = &x.field().beta() * x;
    let k = y.floor();
    Ok(&y - &x.field().from_integer(k))
}

/// Greedy β-expansion of `x ∈ [0, 1)`, split into preperiod and period at
/// the first repeated orbit point.
pub fn expand(x: &FieldElement, max_steps: usize) -> Result<ExpansionResult, ExpandError> {
    check_unit_interval(x)?;
    if let Some(r) = expand_small(x, max_steps) {
        return r;
    }
    let mut seen: HashMap<FieldElement, usize> = HashMap::new();
    let mut digits = Vec::new();
    let beta = x.field().beta();
    let mut cur = x.clone();
    for step in 0..=max_steps {
        if let Some(&j) = seen.get(&cur) {
            return Ok(split(digits, j));
        }
        seen.insert(cur.clone(), step);
        let y = &beta * &cur;
        let k = y.floor();
        digits.push(k.to_u32().expect("digit fits in u32"));
        cur = &y - &x.field().from_integer(k);
    }
    Err(ExpandError::OrbitBudgetExceeded(max_steps))
}

fn split(mut digits: Vec<Digit>, j: usize) -> ExpansionResult {
    let period = digits.split_off(j);
    ExpansionResult {
        purely_periodic: j == 0,
        preperiod: digits,
        period,
    }
}

/// The orbit over a fixed denominator with machine integers; `None` when the
/// data does not fit.
fn expand_small(x: &FieldElement, max_steps: usize) -> Option<Result<ExpansionResult, ExpandError>> {
    let field = x.field();
    let r = field.degree();
    let d = x.denom().to_i64()?;
    let mut c: Vec<i64> = x.numer().iter().map(|v| v.to_i64()).collect::<Option<_>>()?;
    let p: Vec<i64> = field.minpoly()[..r].iter().map(|v| v.to_i64()).collect::<Option<_>>()?;
    let mut seen: HashMap<Vec<i64>, usize> = HashMap::new();
    let mut digits = Vec::new();
    let mut next = vec![0i64; r];
    for step in 0..=max_steps {
        if let Some(&j) = seen.get(&c) {
            return Some(Ok(split(digits, j)));
        }
        seen.insert(c.clone(), step);
        // multiply by β modulo the minimal polynomial
        let top = c[r - 1];
        for i in 0..r {
            let lower = if i == 0 { 0 } else { c[i - 1] };
            next[i] = lower.checked_sub(top.checked_mul(p[i])?)?;
        }
        let k = field.floor_i64(&next, d);
        next[0] = next[0].checked_sub(k.checked_mul(d)?)?;
        digits.push(u32::try_from(k).ok()?);
        std::mem::swap(&mut c, &mut next);
    }
    Some(Err(ExpandError::OrbitBudgetExceeded(max_steps)))
}

/// Runs the `d_β(1)` recursion `r_0 = 1`, `t_i = ⌊β r_{i-1}⌋`,
/// `r_i = β r_{i-1} - t_i` until it stops (simple Parry number) or cycles.
pub fn classify_parry(field: &PisotField) -> Result<ParryData, ExpandError> {
    classify_parry_with_budget(field, DEFAULT_MAX_STEPS)
}

pub fn classify_parry_with_budget(field: &PisotField, max_steps: usize) -> Result<ParryData, ExpandError> {
    let beta = field.beta();
    let mut tails = vec![field.one()];
    let mut seen: HashMap<FieldElement, usize> = HashMap::new();
    let mut t: Vec<Digit> = Vec::new();
    for _ in 0..max_steps {
        let y = &beta * tails.last().expect("nonempty");
        let k = y.floor();
        t.push(k.to_u32().expect("digit fits in u32"));
        let rem = &y - &field.from_integer(k);
        if rem.is_zero() {
            let n = t.len();
            let mut star = t.clone();
            star[n - 1] -= 1;
            return Ok(ParryData {
                field: field.clone(),
                d_beta_one: EventuallyPeriodicWord::finite(t.clone()),
                d_star: EventuallyPeriodicWord::purely_periodic(star),
                kind: ParryKind::SimpleParry,
                n,
                p: 0,
                d: n,
                t,
                tails,
            });
        }
        if let Some(&j) = seen.get(&rem) {
            // rem = r_j, so the digits t_{j+1}… repeat
            let i = t.len();
            let word = EventuallyPeriodicWord {
                preperiod: t[..j].to_vec(),
                period: t[j..].to_vec(),
            };
            return Ok(ParryData {
                field: field.clone(),
                d_star: word.clone(),
                d_beta_one: word,
                kind: ParryKind::NonSimpleParry,
                n: j,
                p: i - j,
                d: i,
                t,
                tails,
            });
        }
        seen.insert(rem.clone(), tails.len());
        tails.push(rem);
    }
    Err(ExpandError::OrbitBudgetExceeded(max_steps))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// Every suffix of `w·0^∞` is `≤ d*_β(1)`.
    Right,
    /// `w` labels a path of the automaton (equivalently its reversal is a
    /// path of the reversed automaton).
    LeftFactor,
}

pub fn admissible(parry: &ParryData, w: &[Digit], side: Side) -> bool {
    match side {
        Side::Right => (0..w.len()).all(|k| {
            let s = &w[k..];
            for (i, &d) in s.iter().enumerate() {
                match d.cmp(&parry.d_star.digit(i)) {
                    Ordering::Less => return true,
                    Ordering::Greater => return false,
                    Ordering::Equal => {}
                }
            }
            // then 0^∞ against a tail of d* that is never all zero
            true
        }),
        Side::LeftFactor => sofic::build_automaton(parry).is_factor(w),
    }
}

/// Every suffix of the infinite word is `≤ d*_β(1)`, or `< d*_β(1)` when
/// `strict` (the condition for being a β-expansion of some `x ∈ [0, 1)`).
pub fn admissible_infinite(parry: &ParryData, w: &EventuallyPeriodicWord, strict: bool) -> bool {
    let starts = w.preperiod.len() + w.period.len().max(1);
    (0..starts).all(|k| match w.suffix(k).lex_cmp(&parry.d_star) {
        Ordering::Less => true,
        Ordering::Equal => !strict,
        Ordering::Greater => false,
    })
}

/// `Σ a_i β^{-i}` over the preperiod plus `β^{-m}(b_1 β^{L-1} + … + b_L)/(β^L - 1)`
/// for the period, without admissibility checks.
pub fn series_value(field: &PisotField, preperiod: &[Digit], period: &[Digit]) -> FieldElement {
    let beta = field.beta();
    let beta_inv = beta.inv().expect("β ≠ 0");
    let mut acc = field.zero();
    let mut scale = field.one();
    for &a in preperiod {
        scale = &scale * &beta_inv;
        acc = &acc + &scale.mul_int(&BigInt::from(a));
    }
    if !period.is_empty() {
        let mut num = field.zero();
        for &b in period {
            num = &(&num * &beta) + &field.from_int(i64::from(b));
        }
        let den = &beta.pow(period.len() as u32) - &field.one();
        let tail = num.checked_div(&den).expect("β^L ≠ 1");
        acc = &acc + &(&tail * &scale);
    }
    acc
}

/// The exact element whose expansion-like series is `preperiod · period^∞`;
/// the word must satisfy the shift condition (every suffix `≤ d*_β(1)`).
pub fn value_of_periodic(
    parry: &ParryData,
    preperiod: &[Digit],
    period: &[Digit],
) -> Result<FieldElement, ExpandError> {
    let w = EventuallyPeriodicWord {
        preperiod: preperiod.to_vec(),
        period: period.to_vec(),
    };
    let top = parry.field.floor_beta().to_u32().unwrap_or(u32::MAX);
    if w.preperiod.iter().chain(&w.period).any(|&d| d > top) || !admissible_infinite(parry, &w, false) {
        return Err(ExpandError::InadmissibleWord);
    }
    Ok(series_value(&parry.field, preperiod, period))
}

/// Largest digit allowed in expansions of `x ∈ [0, 1)`.
pub fn max_digit(field: &PisotField) -> Digit {
    let f = field.floor_beta();
    let as_int = field.beta().as_integer();
    let top = if as_int.is_some() { f - BigInt::one() } else { f.clone() };
    top.to_u32().expect("digit fits in u32")
}
