//! The representation space `K_β = ℝ^{r-1} × ℂ^s × ∏ K_I`, the canonical
//! embedding `δ_β`, and multiplication by `β` on it.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::numberfield::{FieldElement, PisotField};
use crate::padic::{padic_places, PadicError, PadicPlace, PadicValue};
use crate::roots::RootDisc;

pub const DEFAULT_EPS: f64 = 1e-12;
pub const DEFAULT_PADIC_DIGITS: u32 = 32;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EmbedError {
    #[error("{0}")]
    UnsupportedRamification(String),
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
}

impl From<PadicError> for EmbedError {
    fn from(e: PadicError) -> Self {
        match e {
            PadicError::UnsupportedRamification { .. } => EmbedError::UnsupportedRamification(e.to_string()),
            PadicError::PrecisionExhausted { .. } => EmbedError::PrecisionExhausted(e.to_string()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PlaceKind {
    RealConjugate,
    ComplexConjugate,
    PadicFactor,
}

/// An Archimedean place: a conjugate `β_j` of modulus < 1. Complex places
/// keep the representative with positive imaginary part.
#[derive(Clone, Debug)]
pub struct ArchPlace {
    pub disc: RootDisc,
    pub root: Complex64,
    pub real: bool,
}

#[derive(Clone, Debug)]
pub enum PlaceDescriptor {
    Archimedean(ArchPlace),
    Padic(PadicPlace),
}

impl PlaceDescriptor {
    pub fn kind(&self) -> PlaceKind {
        match self {
            PlaceDescriptor::Archimedean(a) if a.real => PlaceKind::RealConjugate,
            PlaceDescriptor::Archimedean(_) => PlaceKind::ComplexConjugate,
            PlaceDescriptor::Padic(_) => PlaceKind::PadicFactor,
        }
    }

    /// `|β|` at this place.
    pub fn contraction(&self) -> f64 {
        match self {
            PlaceDescriptor::Archimedean(a) => a.root.norm(),
            PlaceDescriptor::Padic(p) => p.contraction(),
        }
    }

    pub fn label(&self) -> String {
        match self {
            PlaceDescriptor::Archimedean(a) if a.real => format!("real({:.6})", a.root.re),
            PlaceDescriptor::Archimedean(a) => format!("complex({:.6}{:+.6}i)", a.root.re, a.root.im),
            PlaceDescriptor::Padic(p) => format!("{}-adic(e={},f={})", p.p, p.e, p.f),
        }
    }
}

/// The `ℝ` coordinate of `K̃_β`, kept exact when it comes from `Q(β)`.
#[derive(Clone, Debug)]
pub struct RealCoord {
    pub approx: f64,
    pub exact: Option<FieldElement>,
}

/// A point of `K_β` (or `K̃_β` when `real` is set).
#[derive(Clone, Debug)]
pub struct EmbeddedPoint {
    pub arch: Vec<Complex64>,
    /// Bound on the error of every Archimedean coordinate.
    pub arch_err: f64,
    pub padic: Vec<PadicValue>,
    pub real: Option<RealCoord>,
}

/// One plotting axis of `K_β`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    Real(usize),
    Re(usize),
    Im(usize),
    Padic(usize),
}

#[derive(Clone, Debug)]
pub struct RepresentationSpace {
    field: PisotField,
    pub arch: Vec<ArchPlace>,
    pub padic: Vec<PadicPlace>,
    pub eps: f64,
    pub padic_digits: u32,
    beta_inv_padic: Vec<PadicValue>,
}

const ULP: f64 = f64::EPSILON;

impl RepresentationSpace {
    /// All places with the default precision policy.
    pub fn places(field: &PisotField) -> Result<Self, EmbedError> {
        Self::new(field, DEFAULT_EPS, DEFAULT_PADIC_DIGITS)
    }

    pub fn new(field: &PisotField, eps: f64, padic_digits: u32) -> Result<Self, EmbedError> {
        let mut arch: Vec<ArchPlace> = field
            .conjugate_discs()
            .iter()
            .filter(|d| d.is_real() || d.im.is_positive())
            .map(|d| ArchPlace { disc: d.clone(), root: d.center_f64(), real: d.is_real() })
            .collect();
        arch.sort_by(|a, b| {
            (!a.real, a.root.re, a.root.im)
                .partial_cmp(&(!b.real, b.root.re, b.root.im))
                .expect("finite roots")
        });
        let padic = padic_places(field.minpoly(), padic_digits)?;
        let beta_inv = field.beta().inv().expect("β ≠ 0");
        let beta_inv_padic = padic
            .iter()
            .map(|p| p.embed(&beta_inv))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(RepresentationSpace {
            field: field.clone(),
            arch,
            padic,
            eps,
            padic_digits,
            beta_inv_padic,
        })
    }

    pub fn field(&self) -> &PisotField {
        &self.field
    }

    pub fn descriptors(&self) -> Vec<PlaceDescriptor> {
        self.arch
            .iter()
            .cloned()
            .map(PlaceDescriptor::Archimedean)
            .chain(self.padic.iter().cloned().map(PlaceDescriptor::Padic))
            .collect()
    }

    pub fn place_count(&self) -> usize {
        self.arch.len() + self.padic.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.place_count() == 0
    }

    pub fn axes(&self) -> Vec<Axis> {
        let mut out = Vec::new();
        for (i, a) in self.arch.iter().enumerate() {
            if a.real {
                out.push(Axis::Real(i));
            } else {
                out.push(Axis::Re(i));
                out.push(Axis::Im(i));
            }
        }
        out.extend((0..self.padic.len()).map(Axis::Padic));
        out
    }

    pub fn axis_label(&self, axis: Axis) -> String {
        match axis {
            Axis::Real(i) => format!("real[{i}]"),
            Axis::Re(i) => format!("re[{i}]"),
            Axis::Im(i) => format!("im[{i}]"),
            Axis::Padic(i) => format!("{}-adic[{i}]", self.padic[i].p),
        }
    }

    /// Per-place Lipschitz constant `|β|_v` of `h_β`.
    pub fn contraction_rates(&self) -> Vec<f64> {
        self.arch
            .iter()
            .map(|a| a.root.norm())
            .chain(self.padic.iter().map(|p| p.contraction()))
            .collect()
    }

    /// Bound `C_v` with `|δ(Σ_{i≥k} w_i β^i)|_v ≤ C_v ρ_v^k` for admissible
    /// digits.
    pub fn tail_constants(&self) -> Vec<f64> {
        let b = self.field.floor_beta().to_f64().unwrap_or(f64::MAX);
        self.arch
            .iter()
            .map(|a| b / (1.0 - a.root.norm()))
            .chain(self.padic.iter().map(|_| 1.0))
            .collect()
    }

    /// `max_v C_v ρ_v^k`, the diameter of a depth-`k` cylinder.
    pub fn diameter_bound(&self, k: usize) -> f64 {
        self.tail_constants()
            .iter()
            .zip(self.contraction_rates())
            .map(|(c, r)| c * r.powi(k as i32))
            .fold(0.0, f64::max)
    }

    pub fn zero(&self) -> EmbeddedPoint {
        EmbeddedPoint {
            arch: vec![Complex64::new(0.0, 0.0); self.arch.len()],
            arch_err: 0.0,
            padic: self.padic.iter().map(|p| p.zero()).collect(),
            real: None,
        }
    }

    /// `δ_β(x)`.
    pub fn delta(&self, x: &FieldElement) -> Result<EmbeddedPoint, EmbedError> {
        let mut arch = Vec::with_capacity(self.arch.len());
        let mut arch_err: f64 = 0.0;
        for place in &self.arch {
            let (z, err) = eval_arch(place, x);
            let (z, err) = if err <= self.eps { (z, err) } else { eval_arch_exact(place, x) };
            if err > self.eps {
                return Err(EmbedError::PrecisionExhausted(format!(
                    "Archimedean error {err:e} exceeds eps {:e}",
                    self.eps
                )));
            }
            arch.push(z);
            arch_err = arch_err.max(err);
        }
        let padic = self.padic.iter().map(|p| p.embed(x)).collect::<Result<Vec<_>, _>>()?;
        Ok(EmbeddedPoint { arch, arch_err, padic, real: None })
    }

    /// `(δ_β(x), x)` in `K̃_β`.
    pub fn delta_two_sided(&self, x: &FieldElement) -> Result<EmbeddedPoint, EmbedError> {
        let mut pt = self.delta(x)?;
        pt.real = Some(RealCoord { approx: x.to_f64(), exact: Some(x.clone()) });
        Ok(pt)
    }

    /// Multiplication by `β` on `K_β`; the real coordinate is untouched.
    pub fn h_beta(&self, pt: &EmbeddedPoint) -> EmbeddedPoint {
        let arch: Vec<Complex64> = pt.arch.iter().zip(&self.arch).map(|(z, a)| z * a.root).collect();
        let mag = pt.arch.iter().map(|z| z.norm()).fold(0.0, f64::max);
        EmbeddedPoint {
            arch,
            arch_err: pt.arch_err + 4.0 * ULP * mag,
            padic: pt
                .padic
                .iter()
                .zip(&self.padic)
                .map(|(v, p)| p.mul(v, &p.beta()))
                .collect(),
            real: pt.real.clone(),
        }
    }

    /// Multiplication by `β^{-1}` on `K_β`.
    pub fn h_beta_inv(&self, pt: &EmbeddedPoint) -> EmbeddedPoint {
        let arch: Vec<Complex64> = pt.arch.iter().zip(&self.arch).map(|(z, a)| z / a.root).collect();
        let rho = self.arch.iter().map(|a| a.root.norm()).fold(f64::INFINITY, f64::min);
        let mag = arch.iter().map(|z| z.norm()).fold(0.0, f64::max);
        EmbeddedPoint {
            arch,
            arch_err: pt.arch_err / rho.min(1.0) + 8.0 * ULP * mag,
            padic: pt
                .padic
                .iter()
                .zip(&self.padic)
                .zip(&self.beta_inv_padic)
                .map(|((v, p), bi)| p.mul(v, bi))
                .collect(),
            real: pt.real.clone(),
        }
    }

    pub fn add(&self, a: &EmbeddedPoint, b: &EmbeddedPoint) -> EmbeddedPoint {
        let arch: Vec<Complex64> = a.arch.iter().zip(&b.arch).map(|(x, y)| x + y).collect();
        let mag = arch.iter().map(|z| z.norm()).fold(0.0, f64::max);
        EmbeddedPoint {
            arch,
            arch_err: a.arch_err + b.arch_err + 2.0 * ULP * mag,
            padic: a
                .padic
                .iter()
                .zip(&b.padic)
                .zip(&self.padic)
                .map(|((x, y), p)| p.add(x, y))
                .collect(),
            real: None,
        }
    }

    pub fn neg(&self, a: &EmbeddedPoint) -> EmbeddedPoint {
        EmbeddedPoint {
            arch: a.arch.iter().map(|z| -z).collect(),
            arch_err: a.arch_err,
            padic: a.padic.iter().zip(&self.padic).map(|(x, p)| p.neg(x)).collect(),
            real: None,
        }
    }

    pub fn sub(&self, a: &EmbeddedPoint, b: &EmbeddedPoint) -> EmbeddedPoint {
        self.add(a, &self.neg(b))
    }

    pub fn scale_int(&self, a: &EmbeddedPoint, k: i64) -> EmbeddedPoint {
        let arch: Vec<Complex64> = a.arch.iter().map(|z| z * k as f64).collect();
        let mag = arch.iter().map(|z| z.norm()).fold(0.0, f64::max);
        EmbeddedPoint {
            arch,
            arch_err: a.arch_err * (k.unsigned_abs() as f64) + 2.0 * ULP * mag,
            padic: a.padic.iter().zip(&self.padic).map(|(x, p)| p.mul_int(x, k)).collect(),
            real: None,
        }
    }

    /// Per-place distances in `K_β`, Archimedean places first.
    pub fn place_distances(&self, a: &EmbeddedPoint, b: &EmbeddedPoint) -> Vec<f64> {
        a.arch
            .iter()
            .zip(&b.arch)
            .map(|(x, y)| (x - y).norm())
            .chain(
                a.padic
                    .iter()
                    .zip(&b.padic)
                    .zip(&self.padic)
                    .map(|((x, y), p)| p.distance(x, y)),
            )
            .collect()
    }

    /// Sup distance over all places of `K_β`.
    pub fn distance(&self, a: &EmbeddedPoint, b: &EmbeddedPoint) -> f64 {
        self.place_distances(a, b).into_iter().fold(0.0, f64::max)
    }

    /// Coordinate of an integral point along a plotting axis.
    pub fn axis_value(&self, pt: &EmbeddedPoint, axis: Axis) -> f64 {
        match axis {
            Axis::Real(i) | Axis::Re(i) => pt.arch[i].re,
            Axis::Im(i) => pt.arch[i].im,
            Axis::Padic(i) => self.padic[i].project(&pt.padic[i].coeffs),
        }
    }

    /// Serialises a point: Archimedean coordinates as decimal pairs, p-adic
    /// coordinates as π-adic digit strings (least significant first), then
    /// the real coordinate.
    pub fn format_point(&self, pt: &EmbeddedPoint) -> String {
        let mut parts: Vec<String> = pt.arch.iter().map(|z| format!("{:.15e},{:.15e}", z.re, z.im)).collect();
        for (v, p) in pt.padic.iter().zip(&self.padic) {
            let digits: Vec<String> = (0..p.digit_count()).map(|i| p.digit(&v.coeffs, i).to_string()).collect();
            parts.push(format!("{}:{}", v.shift, digits.join(".")));
        }
        if let Some(r) = &pt.real {
            parts.push(format!("{:.15e}", r.approx));
        }
        parts.join(" ")
    }
}

/// Haar-measure scaling of `h_β` at each place: `|β_j|` for real places,
/// `|β_j|²` for complex places and `|N_{K_I/Q_p}(β)|_p` for p-adic places.
/// Their product is `1/β`.
pub fn contraction_moduli(space: &RepresentationSpace) -> Vec<f64> {
    space
        .arch
        .iter()
        .map(|a| if a.real { a.root.norm() } else { a.root.norm_sqr() })
        .chain(space.padic.iter().map(|p| p.haar_module()))
        .collect()
}

/// Horner evaluation at the `f64` root with a forward error bound.
fn eval_arch(place: &ArchPlace, x: &FieldElement) -> (Complex64, f64) {
    let z = place.root;
    let r = z.norm();
    let d = x.denom().to_f64().unwrap_or(f64::INFINITY);
    let mut acc = Complex64::new(0.0, 0.0);
    let mut bound = 0.0;
    let n = x.numer().len();
    for c in x.numer().iter().rev() {
        let cf = c.to_f64().unwrap_or(f64::INFINITY);
        acc = acc * z + cf;
        bound = bound * r + cf.abs();
    }
    // rounding of coefficients, the root and each Horner step
    let root_err = place_radius(place) + 2.0 * ULP;
    let deriv_bound: f64 = x
        .numer()
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c.to_f64().unwrap_or(f64::INFINITY).abs() * i as f64 * (r + root_err).powi(i as i32 - 1))
        .sum();
    let err = (bound * (4.0 * n as f64 + 2.0) * ULP + deriv_bound * root_err) / d;
    (acc / d, err)
}

fn place_radius(place: &ArchPlace) -> f64 {
    place.disc.radius.to_f64().unwrap_or(f64::INFINITY)
}

/// Exact evaluation at the rational disc centre, then rounded.
fn eval_arch_exact(place: &ArchPlace, x: &FieldElement) -> (Complex64, f64) {
    let (cr, ci) = (&place.disc.re, &place.disc.im);
    let mut ar = BigRational::zero();
    let mut ai = BigRational::zero();
    for c in x.numer().iter().rev() {
        let nr = &ar * cr - &ai * ci + BigRational::from_integer(c.clone());
        let ni = &ar * ci + &ai * cr;
        ar = nr;
        ai = ni;
    }
    let d = BigRational::from_integer(x.denom().clone());
    let (ar, ai) = (ar / &d, ai / &d);
    let r = place.root.norm() + place_radius(place);
    let dsum: BigRational = x
        .numer()
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| {
            let m = BigRational::from_integer(c.abs() * BigInt::from(i));
            m * BigRational::from_float(r.powi(i as i32 - 1)).unwrap_or_else(BigRational::one)
        })
        .fold(BigRational::zero(), |a, b| a + b);
    let err = (dsum * &place.disc.radius / d).to_f64().unwrap_or(f64::INFINITY);
    let z = Complex64::new(ar.to_f64().unwrap_or(f64::NAN), ai.to_f64().unwrap_or(f64::NAN));
    (z, err * 1.01 + 2.0 * ULP * z.norm())
}
