//! Shared inputs for the benchmarks.

use rauzy_core::{classify_parry, CylinderSet, ParryData, PisotField, RepresentationSpace};

pub const TRIBONACCI: &[i64] = &[-1, -1, -1, 1];
pub const SMALLEST: &[i64] = &[-1, -1, 0, 1];
pub const SQRT2: &[i64] = &[2, -4, 1];

pub struct Setup {
    pub field: PisotField,
    pub parry: ParryData,
    pub space: RepresentationSpace,
}

pub fn setup(c: &[i64]) -> Setup {
    let field = PisotField::new(c).expect("example field");
    let parry = classify_parry(&field).expect("Parry number");
    let space = RepresentationSpace::places(&field).expect("supported places");
    Setup { field, parry, space }
}

impl Setup {
    pub fn cylinders(&self) -> CylinderSet {
        CylinderSet::new(&self.space, &self.parry)
    }
}
