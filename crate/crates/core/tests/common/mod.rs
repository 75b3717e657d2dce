#![allow(dead_code)]

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use proptest::prelude::*;
use rauzy_core::{Digit, EventuallyPeriodicWord, FieldElement, PisotField, SoficAutomaton};

pub const GOLDEN: &[i64] = &[-1, -1, 1];
pub const TRIBONACCI: &[i64] = &[-1, -1, -1, 1];
pub const SMALLEST: &[i64] = &[-1, -1, 0, 1];
pub const SQRT2: &[i64] = &[2, -4, 1];
pub const TEN: &[i64] = &[-10, 1];

/// The four non-integer example bases.
pub const EXAMPLES: [&[i64]; 4] = [GOLDEN, TRIBONACCI, SMALLEST, SQRT2];

/// Fields are built once per test binary; root certification dominates
/// the cost of a single case otherwise.
pub fn field(c: &[i64]) -> PisotField {
    static CACHE: OnceLock<Mutex<HashMap<Vec<i64>, PisotField>>> = OnceLock::new();
    let mut cache = CACHE.get_or_init(Default::default).lock().expect("cache lock");
    cache
        .entry(c.to_vec())
        .or_insert_with(|| PisotField::new(c).expect("example field"))
        .clone()
}

/// Small random elements `(Σ c_i β^i)/q` of a fixed field.
pub fn element(k: PisotField) -> impl Strategy<Value = FieldElement> {
    let n = k.degree();
    (prop::collection::vec(-20i64..=20, n), 1i64..=12)
        .prop_map(move |(c, q)| k.element_i64(&c, q).expect("nonzero denominator"))
}

/// Elements of `[0, 1)`: fractional parts of small random elements.
pub fn unit_element(k: PisotField) -> impl Strategy<Value = FieldElement> {
    element(k).prop_map(|x| &x - &x.field().from_integer(x.floor()))
}

/// Follows `choices` through the automaton from `start`, taking the
/// `c mod outdegree`-th edge each time.
pub fn walk(aut: &SoficAutomaton, start: usize, choices: &[usize]) -> (Vec<Digit>, usize) {
    let mut s = start;
    let mut w = Vec::with_capacity(choices.len());
    for &c in choices {
        let edges: Vec<_> = aut.out_edges(s).collect();
        let e = edges[c % edges.len()];
        w.push(e.label);
        s = e.to;
    }
    (w, s)
}

/// Labels of a shortest nonempty path from `from` to `to`.
pub fn shortest_path(aut: &SoficAutomaton, from: usize, to: usize) -> Vec<Digit> {
    let mut prev: Vec<Option<(usize, Digit)>> = vec![None; aut.states];
    let mut queue = std::collections::VecDeque::new();
    for e in aut.out_edges(from) {
        if prev[e.to].is_none() {
            prev[e.to] = Some((from, e.label));
            queue.push_back(e.to);
        }
    }
    while let Some(s) = queue.pop_front() {
        if s == to {
            break;
        }
        for e in aut.out_edges(s) {
            if prev[e.to].is_none() {
                prev[e.to] = Some((s, e.label));
                queue.push_back(e.to);
            }
        }
    }
    let mut labels = Vec::new();
    let mut s = to;
    loop {
        let (p, l) = prev[s].expect("automaton is strongly connected");
        labels.push(l);
        if p == from {
            break;
        }
        s = p;
    }
    labels.reverse();
    labels
}

/// An eventually periodic word labelling an infinite path from `a_1`.
pub fn admissible_word(aut: &SoficAutomaton, pre: &[usize], cyc: &[usize]) -> EventuallyPeriodicWord {
    let (preperiod, s) = walk(aut, 0, pre);
    let (mut period, r) = walk(aut, s, cyc);
    if period.is_empty() || r != s {
        period.extend(shortest_path(aut, r, s));
    }
    EventuallyPeriodicWord::new(preperiod, period)
}
