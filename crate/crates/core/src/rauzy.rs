//! Generalized Rauzy fractals: the pieces `R_β(i)` as attractors of the
//! graph-directed IFS
//!
//! `R_β(i) = ∪_{a_j --l--> a_i in M_β} (l + h_β(R_β(j)))`,
//!
//! the cylinders `(−R_β(i)) × [0, h_i)` of the two-sided set, membership
//! testing, box-counting measures and rendering.

use std::collections::{BTreeSet, HashSet};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::betaexpand::{Digit, ParryData};
use crate::embedding::{Axis, EmbeddedPoint, RealCoord, RepresentationSpace};
use crate::numberfield::FieldElement;
use crate::padic::PadicValue;
use crate::sofic::{build_automaton, SoficAutomaton};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RauzyError {
    #[error("no plottable axes: {0}")]
    NoPlottableAxes(String),
}

/// Rounding grid for deduplication.
const DEDUP_GRID: f64 = 1e-12;

/// Points of `K_β` in flat storage: per point, `(re, im)` for every
/// Archimedean place followed by the coefficients of every p-adic place.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PointCloud {
    arch_stride: usize,
    padic_stride: usize,
    pub arch: Vec<f64>,
    pub padic: Vec<u64>,
}

impl PointCloud {
    pub fn empty(space: &RepresentationSpace) -> Self {
        PointCloud {
            arch_stride: 2 * space.arch.len(),
            padic_stride: space.padic.iter().map(|p| p.degree()).sum(),
            arch: Vec::new(),
            padic: Vec::new(),
        }
    }

    pub fn origin(space: &RepresentationSpace) -> Self {
        let mut c = Self::empty(space);
        c.arch.resize(c.arch_stride, 0.0);
        c.padic.resize(c.padic_stride, 0);
        c
    }

    pub fn len(&self) -> usize {
        self.arch
            .len()
            .checked_div(self.arch_stride)
            .or_else(|| self.padic.len().checked_div(self.padic_stride))
            .unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn arch_of(&self, i: usize) -> &[f64] {
        &self.arch[i * self.arch_stride..(i + 1) * self.arch_stride]
    }

    pub fn padic_of(&self, i: usize) -> &[u64] {
        &self.padic[i * self.padic_stride..(i + 1) * self.padic_stride]
    }

    fn push(&mut self, arch: &[f64], padic: &[u64]) {
        self.arch.extend_from_slice(arch);
        self.padic.extend_from_slice(padic);
    }

    fn append(&mut self, other: &PointCloud) {
        self.arch.extend_from_slice(&other.arch);
        self.padic.extend_from_slice(&other.padic);
    }

    pub fn point(&self, space: &RepresentationSpace, i: usize) -> EmbeddedPoint {
        let a = self.arch_of(i);
        let arch = (0..space.arch.len()).map(|k| Complex64::new(a[2 * k], a[2 * k + 1])).collect();
        let mut off = 0;
        let pd = self.padic_of(i);
        let padic = space
            .padic
            .iter()
            .map(|p| {
                let g = p.degree();
                let v = PadicValue { shift: 0, coeffs: pd[off..off + g].to_vec() };
                off += g;
                v
            })
            .collect();
        EmbeddedPoint { arch, arch_err: 0.0, padic, real: None }
    }

    /// Value of a coordinate axis at point `i`.
    pub fn axis_value(&self, space: &RepresentationSpace, i: usize, axis: Axis) -> f64 {
        match axis {
            Axis::Real(k) | Axis::Re(k) => self.arch_of(i)[2 * k],
            Axis::Im(k) => self.arch_of(i)[2 * k + 1],
            Axis::Padic(k) => {
                let off: usize = space.padic[..k].iter().map(|p| p.degree()).sum();
                let g = space.padic[k].degree();
                space.padic[k].project(&self.padic_of(i)[off..off + g])
            }
        }
    }

    fn key(&self, i: usize) -> Vec<i64> {
        self.arch_of(i)
            .iter()
            .map(|&x| (x / DEDUP_GRID).round() as i64)
            .chain(self.padic_of(i).iter().map(|&c| c as i64))
            .collect()
    }

    /// Removes points that agree after rounding and sorts canonically.
    pub fn dedup_sorted(&self) -> PointCloud {
        let n = self.len();
        let keys: Vec<Vec<i64>> = (0..n).into_par_iter().map(|i| self.key(i)).collect();
        let mut idx: Vec<usize> = (0..n).collect();
        idx.par_sort_by(|&a, &b| keys[a].cmp(&keys[b]));
        idx.dedup_by(|a, b| keys[*a] == keys[*b]);
        let mut out = PointCloud {
            arch_stride: self.arch_stride,
            padic_stride: self.padic_stride,
            arch: Vec::with_capacity(idx.len() * self.arch_stride),
            padic: Vec::with_capacity(idx.len() * self.padic_stride),
        };
        for i in idx {
            out.push(self.arch_of(i), self.padic_of(i));
        }
        out
    }
}

/// Depth-`k` approximations of the pieces `R_β(1..d)`: piece `i` holds the
/// points `δ(Σ_{m<k} w_m β^m)` over length-`k` paths of `M̃_β` from `a_i`.
#[derive(Clone, Debug)]
pub struct FractalApprox {
    pub depth: usize,
    pub pieces: Vec<PointCloud>,
}

impl FractalApprox {
    pub fn total_points(&self) -> usize {
        self.pieces.iter().map(|p| p.len()).sum()
    }
}

/// Applies `z ↦ l + h_β(z)` to every point of `src`, appending to `dst`.
fn affine_image(space: &RepresentationSpace, src: &PointCloud, label: Digit, dst: &mut PointCloud) {
    let roots: Vec<Complex64> = space.arch.iter().map(|a| a.root).collect();
    let l = label as f64;
    let mut arch = vec![0.0; src.arch_stride];
    let mut padic = vec![0u64; src.padic_stride];
    for i in 0..src.len() {
        let a = src.arch_of(i);
        for (k, r) in roots.iter().enumerate() {
            let z = Complex64::new(a[2 * k], a[2 * k + 1]) * r;
            arch[2 * k] = z.re + l;
            arch[2 * k + 1] = if space.arch[k].real { 0.0 } else { z.im };
        }
        let pd = src.padic_of(i);
        let mut off = 0;
        for p in &space.padic {
            let g = p.degree();
            p.affine_step(&pd[off..off + g], label as u64, &mut padic[off..off + g]);
            off += g;
        }
        dst.push(&arch, &padic);
    }
}

/// One IFS step: `new_i = ∪_{j --l--> i} (l + h_β(old_j))`.
pub fn ifs_step(
    space: &RepresentationSpace,
    automaton: &SoficAutomaton,
    old: &[PointCloud],
    dedup: bool,
) -> Vec<PointCloud> {
    (0..automaton.states)
        .into_par_iter()
        .map(|i| {
            let mut out = PointCloud::empty(space);
            for e in automaton.edges.iter().filter(|e| e.to == i) {
                affine_image(space, &old[e.from], e.label, &mut out);
            }
            if dedup {
                out.dedup_sorted()
            } else {
                out
            }
        })
        .collect()
}

/// Iterates the graph-directed IFS from `{0}` in every piece, deduplicating
/// after each step.
pub fn iterate_ifs(space: &RepresentationSpace, automaton: &SoficAutomaton, depth: usize) -> FractalApprox {
    iterate_ifs_with(space, automaton, depth, true)
}

pub fn iterate_ifs_with(
    space: &RepresentationSpace,
    automaton: &SoficAutomaton,
    depth: usize,
    dedup: bool,
) -> FractalApprox {
    let mut pieces: Vec<PointCloud> = (0..automaton.states).map(|_| PointCloud::origin(space)).collect();
    for _ in 0..depth {
        pieces = ifs_step(space, automaton, &pieces, dedup);
    }
    FractalApprox { depth, pieces }
}

/// Labels `w_0 w_1 …` of the length-`depth` paths of `M̃_β` from
/// `a_piece`, one word per path, in lexicographic order. `M̃_β` need not be
/// deterministic, so a word may repeat.
pub fn path_words(automaton: &SoficAutomaton, piece: usize, depth: usize) -> Vec<Vec<Digit>> {
    let rev = automaton.reverse();
    let mut out = Vec::new();
    let mut word = Vec::with_capacity(depth);
    fn rec(rev: &SoficAutomaton, s: usize, depth: usize, word: &mut Vec<Digit>, out: &mut Vec<Vec<Digit>>) {
        if word.len() == depth {
            out.push(word.clone());
            return;
        }
        for e in rev.out_edges(s) {
            word.push(e.label);
            rec(rev, e.to, depth, word, out);
            word.pop();
        }
    }
    rec(&rev, piece, depth, &mut word, &mut out);
    out.sort();
    out
}

/// The same word sets produced by the IFS recursion
/// `W_i(k+1) = ∪_{j --l--> i} l·W_j(k)`.
pub fn ifs_words(automaton: &SoficAutomaton, depth: usize) -> Vec<BTreeSet<Vec<Digit>>> {
    let mut cur: Vec<BTreeSet<Vec<Digit>>> = (0..automaton.states).map(|_| BTreeSet::from([Vec::new()])).collect();
    for _ in 0..depth {
        cur = (0..automaton.states)
            .map(|i| {
                let mut s = BTreeSet::new();
                for e in automaton.edges.iter().filter(|e| e.to == i) {
                    for w in &cur[e.from] {
                        let mut v = Vec::with_capacity(w.len() + 1);
                        v.push(e.label);
                        v.extend_from_slice(w);
                        s.insert(v);
                    }
                }
                s
            })
            .collect();
    }
    cur
}

/// `δ(Σ w_m β^m)` for each word.
pub fn embed_words(space: &RepresentationSpace, words: &[Vec<Digit>]) -> PointCloud {
    let mut out = PointCloud::empty(space);
    for w in words {
        let mut c = PointCloud::origin(space);
        for &l in w.iter().rev() {
            let mut next = PointCloud::empty(space);
            affine_image(space, &c, l, &mut next);
            c = next;
        }
        out.append(&c);
    }
    out
}

/// Number of length-`k` paths of `M̃_β` from each state: the row sums of
/// `(A^T)^k`.
pub fn piece_counts(automaton: &SoficAutomaton, k: usize) -> Vec<u128> {
    let at = crate::sofic::transpose(&automaton.adjacency());
    let d = automaton.states;
    let mut v = vec![1u128; d];
    for _ in 0..k {
        v = (0..d)
            .map(|i| (0..d).map(|j| at[i][j] as u128 * v[j]).sum())
            .collect();
    }
    v
}

/// Perron eigenvector of a non-negative matrix, normalised to sum 1.
pub fn perron_vector(m: &[Vec<i64>]) -> Vec<f64> {
    let d = m.len();
    let mut v = vec![1.0 / d as f64; d];
    for _ in 0..10_000 {
        // shifted power iteration, robust to periodicity
        let mut w: Vec<f64> = (0..d).map(|i| v[i] + (0..d).map(|j| m[i][j] as f64 * v[j]).sum::<f64>()).collect();
        let s: f64 = w.iter().sum();
        w.iter_mut().for_each(|x| *x /= s);
        let delta: f64 = w.iter().zip(&v).map(|(a, b)| (a - b).abs()).sum();
        v = w;
        if delta < 1e-15 {
            break;
        }
    }
    v
}

/// Angle in degrees between two vectors.
pub fn angle_degrees(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    (dot / (na * nb)).clamp(-1.0, 1.0).acos().to_degrees()
}

/// `h_i = T_β^{i-1}(1)`, the value of the maximal admissible future from
/// state `a_i`.
pub fn cylinder_heights(parry: &ParryData) -> Vec<FieldElement> {
    parry.tails.clone()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    In,
    Out,
    BoundaryUnknown,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MembershipVerdict {
    pub verdict: Verdict,
    pub distance: f64,
    pub depth: usize,
    pub tol_in: f64,
    pub tol_out: f64,
}

const CONFIRM_STEP: usize = 4;
const MAX_CONFIRM_EXTRA: usize = 200;

#[derive(Clone, Copy, Debug)]
pub struct MembershipConfig {
    pub depth: usize,
    /// An `In` verdict is re-checked at deeper levels until the cylinder
    /// diameter has shrunk by this factor; `1.0` disables confirmation.
    pub confirm_shrink: f64,
    pub node_budget: usize,
}

impl Default for MembershipConfig {
    fn default() -> Self {
        MembershipConfig { depth: 16, confirm_shrink: 1e-3, node_budget: 20_000_000 }
    }
}

/// The two-sided set `∪_i (−R_β(i)) × [0, h_i)`.
#[derive(Clone, Debug)]
pub struct CylinderSet {
    pub space: RepresentationSpace,
    pub automaton: SoficAutomaton,
    pub heights: Vec<FieldElement>,
    /// `radii[j][v]` bounds `|z|_v` over `z ∈ R_β(j)`.
    pub radii: Vec<Vec<f64>>,
}

impl CylinderSet {
    pub fn new(space: &RepresentationSpace, parry: &ParryData) -> Self {
        let automaton = build_automaton(parry);
        let radii = piece_radii(space, &automaton);
        CylinderSet { space: space.clone(), automaton, heights: cylinder_heights(parry), radii }
    }

    pub fn heights_f64(&self) -> Vec<f64> {
        self.heights.iter().map(|h| h.to_f64()).collect()
    }

    /// `diam_k = max_{j,v} ρ_v^k r_j^v`: every point of a depth-`k`
    /// cylinder lies this close to the cylinder's base point.
    pub fn diameter(&self, k: usize) -> f64 {
        let rates = self.space.contraction_rates();
        self.radii
            .iter()
            .flat_map(|r| r.iter().zip(&rates).map(|(c, rho)| c * rho.powi(k as i32)))
            .fold(0.0, f64::max)
    }

    /// Pieces whose height interval contains the real coordinate.
    fn pieces_for(&self, real: &RealCoord) -> Vec<usize> {
        (0..self.heights.len())
            .filter(|&i| match &real.exact {
                Some(x) => !x.is_negative_real() && x.cmp_real(&self.heights[i]).is_lt(),
                None => real.approx >= 0.0 && real.approx < self.heights[i].to_f64(),
            })
            .collect()
    }

    /// Tests `pt ∈ R̃_β` with thresholds `tol_in = diam_k`,
    /// `tol_out = 3·diam_k`. An `In` verdict is re-checked every
    /// `CONFIRM_STEP` levels until `diam` has shrunk by `confirm_shrink`.
    /// A deeper `Out` is returned at once; otherwise the deepest verdict
    /// decides between `In` and `BoundaryUnknown`. Points of the
    /// set stay `In` at every depth, so confirmation only removes near misses.
    pub fn membership(&self, pt: &EmbeddedPoint, cfg: &MembershipConfig) -> MembershipVerdict {
        let v = self.membership_at(pt, cfg.depth, cfg.node_budget);
        if v.verdict != Verdict::In {
            return v;
        }
        let target = self.diameter(cfg.depth) * cfg.confirm_shrink;
        let mut k = cfg.depth;
        let mut last = v;
        while k < cfg.depth + MAX_CONFIRM_EXTRA && self.diameter(k) > target {
            k += CONFIRM_STEP;
            last = self.membership_at(pt, k, cfg.node_budget);
            if last.verdict == Verdict::Out {
                return last;
            }
        }
        if last.verdict == Verdict::In {
            v
        } else {
            last
        }
    }

    pub fn membership_at(&self, pt: &EmbeddedPoint, depth: usize, node_budget: usize) -> MembershipVerdict {
        let tol_in = self.diameter(depth);
        let tol_out = 3.0 * tol_in;
        let pieces = match &pt.real {
            Some(r) => self.pieces_for(r),
            None => (0..self.heights.len()).collect(),
        };
        let target = self.space.neg(pt);
        let mut search = Search::new(self, &target, depth, tol_in, tol_out, node_budget);
        for i in pieces {
            search.run_from(i);
            if search.best <= tol_in {
                break;
            }
        }
        let lower = search.best.min(search.pruned);
        let (verdict, distance) = if search.best <= tol_in {
            (Verdict::In, search.best)
        } else if !search.exhausted && lower >= tol_out {
            (Verdict::Out, lower)
        } else {
            (Verdict::BoundaryUnknown, search.best)
        };
        MembershipVerdict { verdict, distance, depth, tol_in, tol_out }
    }
}

impl FieldElement {
    fn is_negative_real(&self) -> bool {
        self.cmp_real(&self.field().zero()).is_lt()
    }
}

/// Greatest solution of `r_i = max_{i --l--> j in M̃} (|l|_v + ρ_v r_j)`
/// below the crude bound `⌊β⌋/(1−ρ_v)`; p-adic pieces lie in the unit ball.
fn piece_radii(space: &RepresentationSpace, automaton: &SoficAutomaton) -> Vec<Vec<f64>> {
    let d = automaton.states;
    let crude = space.tail_constants();
    let rates = space.contraction_rates();
    let na = space.arch.len();
    let mut r: Vec<Vec<f64>> = (0..d).map(|_| crude.clone()).collect();
    for v in 0..na {
        for _ in 0..10_000 {
            let mut changed = false;
            for i in 0..d {
                let m = automaton
                    .edges
                    .iter()
                    .filter(|e| e.to == i)
                    .map(|e| e.label as f64 + rates[v] * r[e.from][v])
                    .fold(0.0, f64::max);
                if m < r[i][v] - 1e-15 {
                    r[i][v] = m;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
    }
    for ri in r.iter_mut() {
        for x in ri.iter_mut().take(na) {
            *x = *x * (1.0 + 1e-9) + 1e-12;
        }
    }
    r
}

/// `(lower bound, state, Archimedean partial sum, p-adic partial sum)`.
type Child = (f64, usize, Vec<Complex64>, Vec<Vec<u64>>);

/// Branch-and-bound search for the depth-`k` cylinder base point nearest to
/// a target.
struct Search<'a> {
    cyl: &'a CylinderSet,
    rev: SoficAutomaton,
    depth: usize,
    tol_in: f64,
    tol_out: f64,
    budget: usize,
    nodes: usize,
    exhausted: bool,
    best: f64,
    pruned: f64,
    target_arch: Vec<Complex64>,
    target_padic: Vec<Vec<u64>>,
    /// `|t|` at places where the target is not integral.
    padic_floor: f64,
    arch_pow: Vec<Vec<Complex64>>,
    padic_pow: Vec<Vec<Vec<u64>>>,
    rates: Vec<f64>,
}

impl<'a> Search<'a> {
    fn new(
        cyl: &'a CylinderSet,
        target: &EmbeddedPoint,
        depth: usize,
        tol_in: f64,
        tol_out: f64,
        budget: usize,
    ) -> Self {
        let space = &cyl.space;
        let mut padic_floor: f64 = 0.0;
        let mut target_padic = Vec::new();
        for (v, p) in target.padic.iter().zip(&space.padic) {
            if v.shift > 0 {
                padic_floor = padic_floor.max(p.norm(v));
                target_padic.push(vec![0; p.degree()]);
            } else {
                target_padic.push(v.coeffs.clone());
            }
        }
        let arch_pow = (0..depth)
            .map(|m| space.arch.iter().map(|a| a.root.powi(m as i32)).collect())
            .collect();
        let padic_pow = space
            .padic
            .iter()
            .map(|p| {
                let b = p.beta();
                let mut cur = p.from_int(1);
                (0..depth)
                    .map(|_| {
                        let c = cur.coeffs.clone();
                        cur = p.mul(&cur, &b);
                        c
                    })
                    .collect()
            })
            .collect();
        Search {
            cyl,
            rev: cyl.automaton.reverse(),
            depth,
            tol_in,
            tol_out,
            budget,
            nodes: 0,
            exhausted: false,
            best: f64::INFINITY,
            pruned: f64::INFINITY,
            target_arch: target.arch.clone(),
            target_padic,
            padic_floor,
            arch_pow,
            padic_pow,
            rates: space.contraction_rates(),
        }
    }

    fn padic_dist(&self, v: usize, coeffs: &[u64]) -> f64 {
        let p = &self.cyl.space.padic[v];
        let a = PadicValue { shift: 0, coeffs: self.target_padic[v].clone() };
        let b = PadicValue { shift: 0, coeffs: coeffs.to_vec() };
        p.distance(&a, &b)
    }

    /// Lower bound on the distance from the target to the cylinder
    /// `P + β^m R_β(state)`, and the distance to `P` itself.
    fn bounds(&self, state: usize, m: usize, arch: &[Complex64], padic: &[Vec<u64>]) -> (f64, f64) {
        let na = arch.len();
        let mut lb = self.padic_floor;
        let mut d = self.padic_floor;
        for (k, (z, t)) in arch.iter().zip(&self.target_arch).enumerate() {
            let dist = (z - t).norm();
            let tail = self.rates[k].powi(m as i32) * self.cyl.radii[state][k];
            lb = lb.max(dist - tail);
            d = d.max(dist);
        }
        for (v, c) in padic.iter().enumerate() {
            let dist = self.padic_dist(v, c);
            let tail = self.rates[na + v].powi(m as i32);
            if dist > tail {
                lb = lb.max(dist);
            }
            d = d.max(dist);
        }
        (lb, d)
    }

    fn run_from(&mut self, piece: usize) {
        let space = &self.cyl.space;
        let arch = vec![Complex64::new(0.0, 0.0); space.arch.len()];
        let padic: Vec<Vec<u64>> = space.padic.iter().map(|p| vec![0; p.degree()]).collect();
        self.visit(piece, 0, arch, padic);
    }

    fn visit(&mut self, state: usize, m: usize, arch: Vec<Complex64>, padic: Vec<Vec<u64>>) {
        if self.best <= self.tol_in || self.exhausted {
            return;
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            self.exhausted = true;
            return;
        }
        let (lb, d) = self.bounds(state, m, &arch, &padic);
        if lb > self.tol_out {
            self.pruned = self.pruned.min(lb);
            return;
        }
        if lb >= self.best {
            return;
        }
        if m == self.depth {
            self.best = self.best.min(d);
            return;
        }
        let mut children: Vec<Child> = Vec::new();
        let edges: Vec<(usize, Digit)> = self.rev.out_edges(state).map(|e| (e.to, e.label)).collect();
        for (to, label) in edges {
            let l = label as f64;
            let na: Vec<Complex64> = arch.iter().zip(&self.arch_pow[m]).map(|(z, w)| z + w * l).collect();
            let np: Vec<Vec<u64>> = padic
                .iter()
                .enumerate()
                .map(|(v, c)| {
                    let place = &self.cyl.space.padic[v];
                    let a = PadicValue { shift: 0, coeffs: c.clone() };
                    let b = PadicValue { shift: 0, coeffs: self.padic_pow[v][m].clone() };
                    place.add(&a, &place.mul_int(&b, label as i64)).coeffs
                })
                .collect();
            let (clb, _) = self.bounds(to, m + 1, &na, &np);
            children.push((clb, to, na, np));
        }
        children.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite bound"));
        for (_, to, na, np) in children {
            self.visit(to, m + 1, na, np);
        }
    }
}

/// Whether every point of `a` lies within `r` of some point of `b`, in the
/// sup metric over the places of `K_β`.
pub fn directed_within(space: &RepresentationSpace, a: &PointCloud, b: &PointCloud, r: f64) -> bool {
    let na = space.arch.len();
    let prefix: Vec<usize> = space.padic.iter().map(|p| p.digits_for_radius(r)).collect();
    // Archimedean cells of side r/√2, so two points sharing a cell are within
    // r; the p-adic prefix is folded into the cell hash and checked exactly.
    let side = r / std::f64::consts::SQRT_2;
    let padic_hash = |c: &PointCloud, i: usize| -> u64 {
        let pd = c.padic_of(i);
        let mut h = 0u64;
        let mut off = 0;
        for (p, &len) in space.padic.iter().zip(&prefix) {
            let g = p.degree();
            for d in p.prefix_key(&pd[off..off + g], len) {
                h = mix(h ^ d);
            }
            off += g;
        }
        h
    };
    let cells = |c: &PointCloud, i: usize| -> Vec<i64> { c.arch_of(i).iter().map(|&x| (x / side).floor() as i64).collect() };
    let hash = |cells: &[i64], h: u64| cells.iter().fold(h, |h, &x| mix(h ^ x as u64));
    let same_padic = |i: usize, j: usize| {
        let (pa, pb) = (a.padic_of(i), b.padic_of(j));
        let mut off = 0;
        space.padic.iter().zip(&prefix).all(|(p, &len)| {
            let g = p.degree();
            let same = p.same_prefix(&pa[off..off + g], &pb[off..off + g], len);
            off += g;
            same
        })
    };
    let mut index: Vec<(u64, usize)> = (0..b.len()).map(|j| (hash(&cells(b, j), padic_hash(b, j)), j)).collect();
    index.sort_unstable();
    let dims = 2 * na;
    let mut offsets: Vec<Vec<i64>> = vec![Vec::new()];
    for _ in 0..dims {
        offsets = offsets
            .into_iter()
            .flat_map(|v| {
                (-2..=2).map(move |o| {
                    let mut w = v.clone();
                    w.push(o);
                    w
                })
            })
            .collect();
    }
    // the point's own cell is the likeliest hit
    offsets.sort_by_key(|o| o.iter().map(|x| x.abs()).sum::<i64>());
    (0..a.len()).into_par_iter().all(|i| {
        let home = cells(a, i);
        let ph = padic_hash(a, i);
        let mut cell = home.clone();
        let pa = a.arch_of(i);
        offsets.iter().any(|o| {
            for (k, d) in o.iter().enumerate() {
                cell[k] = home[k] + d;
            }
            let h = hash(&cell, ph);
            let start = index.partition_point(|&(x, _)| x < h);
            index[start..].iter().take_while(|&&(x, _)| x == h).any(|&(_, j)| {
                let pb = b.arch_of(j);
                (0..na).all(|k| {
                    let dz = Complex64::new(pa[2 * k] - pb[2 * k], pa[2 * k + 1] - pb[2 * k + 1]);
                    dz.norm() <= r
                }) && same_padic(i, j)
            })
        })
    })
}

/// A 64-bit finalizer (splitmix64).
fn mix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Whether the Hausdorff distance between `a` and `b` is at most `r`.
pub fn hausdorff_within(space: &RepresentationSpace, a: &PointCloud, b: &PointCloud, r: f64) -> bool {
    directed_within(space, a, b, r) && directed_within(space, b, a, r)
}

/// One term `l + h_β(R(j))` of a union equation for piece `i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IfsTerm {
    pub piece: usize,
    pub source: usize,
    pub label: Digit,
}

/// The union equations read off `M_β`.
pub fn ifs_terms(automaton: &SoficAutomaton) -> Vec<IfsTerm> {
    let mut t: Vec<IfsTerm> = automaton
        .edges
        .iter()
        .map(|e| IfsTerm { piece: e.to, source: e.from, label: e.label })
        .collect();
    t.sort();
    t
}

/// Right-hand sides of a union-equation system applied to the clouds.
pub fn apply_terms(space: &RepresentationSpace, terms: &[IfsTerm], clouds: &[PointCloud]) -> Vec<PointCloud> {
    (0..clouds.len())
        .map(|i| {
            let mut out = PointCloud::empty(space);
            for t in terms.iter().filter(|t| t.piece == i) {
                affine_image(space, &clouds[t.source], t.label, &mut out);
            }
            out.dedup_sorted()
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct MeasureEstimate {
    pub measures: Vec<f64>,
    pub occupied: Vec<usize>,
    pub cell_volume: f64,
    /// The cloud is coarser than the grid, so the estimate approaches a
    /// point count rather than a volume.
    pub undersampled: bool,
}

/// Box-counting estimate of the Haar measure of every piece over all axes of
/// `K_β` (p-adic coordinates through the rendering projection).
pub fn measure_estimate(space: &RepresentationSpace, approx: &FractalApprox, resolution: f64) -> MeasureEstimate {
    let axes = space.axes();
    let cell_volume = resolution.powi(axes.len() as i32);
    let occupied: Vec<usize> = approx
        .pieces
        .par_iter()
        .map(|c| {
            let mut cells: HashSet<Vec<i64>> = HashSet::new();
            for i in 0..c.len() {
                cells.insert(axes.iter().map(|&ax| (c.axis_value(space, i, ax) / resolution).floor() as i64).collect());
            }
            cells.len()
        })
        .collect();
    let points: usize = approx.total_points();
    let cells: usize = occupied.iter().sum();
    MeasureEstimate {
        measures: occupied.iter().map(|&n| n as f64 * cell_volume).collect(),
        cell_volume,
        undersampled: space.diameter_bound(approx.depth) > resolution || points < 2 * cells,
        occupied,
    }
}

/// An indexed raster: `0` is background, `i + 1` marks piece `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Raster {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<u8>,
    pub pieces: usize,
}

impl Raster {
    /// Grey level for an index: white background, darker shades per piece.
    pub fn shade(&self, idx: u8) -> u8 {
        if idx == 0 {
            255
        } else {
            let step = 200 / self.pieces.max(1);
            (200 - step * (idx as usize - 1)).min(200) as u8
        }
    }

    pub fn distinct_shades(&self) -> usize {
        self.pixels.iter().filter(|&&p| p != 0).collect::<HashSet<_>>().len()
    }
}

/// Chooses two axes: the requested ones, or the first two available.
pub fn select_axes(space: &RepresentationSpace, requested: Option<(Axis, Axis)>) -> Result<(Axis, Axis), RauzyError> {
    let axes = space.axes();
    match requested {
        Some((a, b)) if axes.contains(&a) && axes.contains(&b) && a != b => Ok((a, b)),
        Some(_) => Err(RauzyError::NoPlottableAxes("requested axes are not axes of K_β".into())),
        None if axes.len() >= 2 => Ok((axes[0], axes[1])),
        None => Err(RauzyError::NoPlottableAxes(format!("K_β has {} axis", axes.len()))),
    }
}

fn bounding_box(vals: impl Iterator<Item = (f64, f64)>) -> (f64, f64, f64, f64) {
    vals.fold((f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY), |b, (x, y)| {
        (b.0.min(x), b.1.max(x), b.2.min(y), b.3.max(y))
    })
}

fn paint(points: &[(f64, f64, u8)], size: usize, pieces: usize) -> Raster {
    let (x0, x1, y0, y1) = bounding_box(points.iter().map(|p| (p.0, p.1)));
    let span = (x1 - x0).max(y1 - y0);
    let mut pixels = vec![0u8; size * size];
    for &(x, y, idx) in points {
        let (px, py) = if span > 0.0 {
            (
                (((x - x0) / span) * (size - 1) as f64).round() as usize,
                (((y1 - y) / span) * (size - 1) as f64).round() as usize,
            )
        } else {
            (0, 0)
        };
        pixels[py.min(size - 1) * size + px.min(size - 1)] = idx;
    }
    Raster { width: size, height: size, pixels, pieces }
}

/// Shaded picture of the pieces along two axes of `K_β`.
pub fn render(space: &RepresentationSpace, approx: &FractalApprox, axes: (Axis, Axis), size: usize) -> Raster {
    let mut pts = Vec::new();
    for (i, c) in approx.pieces.iter().enumerate() {
        for k in 0..c.len() {
            pts.push((c.axis_value(space, k, axes.0), c.axis_value(space, k, axes.1), (i + 1) as u8));
        }
    }
    paint(&pts, size, approx.pieces.len())
}

/// Picture of the two-sided set: `−R_β(i)` along one axis against the
/// interval `[0, h_i)`.
pub fn render_two_sided(
    space: &RepresentationSpace,
    approx: &FractalApprox,
    heights: &[f64],
    axis: Axis,
    size: usize,
) -> Raster {
    let mut pts = Vec::new();
    let hmax = heights.iter().cloned().fold(0.0, f64::max);
    let steps = size.max(2);
    for (i, c) in approx.pieces.iter().enumerate() {
        for k in 0..c.len() {
            let x = -c.axis_value(space, k, axis);
            for s in 0..steps {
                let y = hmax * s as f64 / (steps - 1) as f64;
                if y < heights[i] || s == 0 {
                    pts.push((x, y, (i + 1) as u8));
                }
            }
        }
    }
    paint(&pts, size, approx.pieces.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::betaexpand::classify_parry;
    use crate::numberfield::PisotField;

    fn setup(c: &[i64]) -> (RepresentationSpace, ParryData, SoficAutomaton) {
        let k = PisotField::new(c).unwrap();
        let parry = classify_parry(&k).unwrap();
        let aut = build_automaton(&parry);
        (RepresentationSpace::places(&k).unwrap(), parry, aut)
    }

    #[test]
    fn depth_zero_is_origin() {
        let (s, _, aut) = setup(&[-1, -1, -1, 1]);
        let a = iterate_ifs(&s, &aut, 0);
        assert!(a.pieces.iter().all(|p| p.len() == 1 && p.arch.iter().all(|&x| x == 0.0)));
    }

    #[test]
    fn counts_match_matrix_powers() {
        let (s, _, aut) = setup(&[2, -4, 1]);
        for k in 0..7 {
            let a = iterate_ifs_with(&s, &aut, k, false);
            let lens: Vec<u128> = a.pieces.iter().map(|p| p.len() as u128).collect();
            assert_eq!(lens, piece_counts(&aut, k));
        }
    }

    #[test]
    fn tribonacci_prefixes() {
        let (_, _, aut) = setup(&[-1, -1, -1, 1]);
        assert!(path_words(&aut, 1, 6).iter().all(|w| w[..2] == [1, 0]));
        assert!(path_words(&aut, 2, 6).iter().all(|w| w[..2] == [1, 1]));
        assert!(path_words(&aut, 0, 6).iter().all(|w| w[0] == 0));
    }

    #[test]
    fn word_constructions_agree() {
        let (_, _, aut) = setup(&[2, -4, 1]);
        let ifs = ifs_words(&aut, 6);
        for (i, set) in ifs.iter().enumerate() {
            assert_eq!(set, &path_words(&aut, i, 6).into_iter().collect::<BTreeSet<_>>());
        }
    }

    #[test]
    fn heights() {
        let (_, parry, _) = setup(&[-1, -1, 1]);
        let h: Vec<f64> = cylinder_heights(&parry).iter().map(|x| x.to_f64()).collect();
        assert!((h[0] - 1.0).abs() < 1e-15 && (h[1] - 0.6180339887498949).abs() < 1e-15);
        let (_, parry, _) = setup(&[2, -4, 1]);
        assert!((cylinder_heights(&parry)[1].to_f64() - (2f64.sqrt() - 1.0)).abs() < 1e-15);
    }

    #[test]
    fn membership_examples() {
        let (s, parry, _) = setup(&[-1, -1, 1]);
        let cyl = CylinderSet::new(&s, &parry);
        let cfg = MembershipConfig::default();
        let zero = s.delta_two_sided(&s.field().zero()).unwrap();
        assert_eq!(cyl.membership(&zero, &cfg).verdict, Verdict::In);
        let half = s.delta_two_sided(&s.field().from_ratio(1.into(), 2.into()).unwrap()).unwrap();
        assert_eq!(cyl.membership(&half, &cfg).verdict, Verdict::In);
        let mut far = s.delta_two_sided(&s.field().from_ratio(99.into(), 100.into()).unwrap()).unwrap();
        far.arch[0] = Complex64::new(50.0, 0.0);
        assert_eq!(cyl.membership(&far, &cfg).verdict, Verdict::Out);
    }

    #[test]
    fn base_ten_membership() {
        let (s, parry, _) = setup(&[-10, 1]);
        let cyl = CylinderSet::new(&s, &parry);
        let cfg = MembershipConfig::default();
        let x = |p: i64, q: i64| s.delta_two_sided(&s.field().from_ratio(p.into(), q.into()).unwrap()).unwrap();
        assert_eq!(cyl.membership(&x(1, 3), &cfg).verdict, Verdict::In);
        assert_eq!(cyl.membership(&x(1, 2), &cfg).verdict, Verdict::Out);
        assert_eq!(cyl.membership(&x(1, 6), &cfg).verdict, Verdict::Out);
    }

    #[test]
    fn union_equations_hold() {
        let (s, parry, aut) = setup(&[-1, -1, -1, 1]);
        let cyl = CylinderSet::new(&s, &parry);
        let a = iterate_ifs(&s, &aut, 9);
        let rhs = apply_terms(&s, &ifs_terms(&aut), &a.pieces);
        for (l, r) in a.pieces.iter().zip(&rhs) {
            assert!(hausdorff_within(&s, l, r, 2.0 * cyl.diameter(9)));
        }
    }

    #[test]
    fn render_depth_zero_single_pixel() {
        let (s, _, aut) = setup(&[-1, -1, -1, 1]);
        let a = iterate_ifs(&s, &aut, 0);
        let ax = select_axes(&s, None).unwrap();
        let r = render(&s, &a, ax, 16);
        assert_eq!(r.pixels.iter().filter(|&&p| p != 0).count(), 1);
        let (g, _, _) = setup(&[-1, -1, 1]);
        assert!(select_axes(&g, None).is_err());
    }
}
