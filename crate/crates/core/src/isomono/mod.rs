//! Isomonodromic families: exact integrability of matrix one-forms, the
//! deformation equation for their coefficients, and numerical monodromy
//! conjugacy between family members.

pub mod conjugacy;
pub mod family;
pub mod monodromy;
pub mod symbolic;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use conjugacy::{conjugacy_check, ConjugacyReport};
pub use family::{
    check_integrability, corrected_basis, corrected_family, displayed_basis, displayed_family, unipotent_n,
    verify_deformation_equation, FamilyDocument, IntegrabilityReport, IsoFamily, MatrixOneForm, ParameterReading,
};
pub use monodromy::{monodromy_data, numerical_monodromy, standard_loops, Loop, MonodromyData, MonodromyMatrix, PolynomialSystem};
pub use symbolic::{SymExpr, SymMatrix};

use crate::error::Result;
use crate::exact::rational::format_rational;
use crate::exact::Rational;

/// Parameter values of the two-parameter family.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyParameters {
    #[serde(with = "crate::exact::rational::serde_rational")]
    pub a: Rational,
    #[serde(with = "crate::exact::rational::serde_rational")]
    pub b: Rational,
    #[serde(with = "crate::exact::rational::serde_rational")]
    pub c: Rational,
}

impl FamilyParameters {
    pub fn as_map(&self) -> BTreeMap<String, Rational> {
        [("a", &self.a), ("b", &self.b), ("c", &self.c)]
            .into_iter()
            .map(|(k, v)| (k.to_string(), v.clone()))
            .collect()
    }
}

/// Monodromy around the standard loops at one parameter value.
pub fn family_monodromy(family: &IsoFamily, params: &FamilyParameters, t: &Rational, digits: usize) -> Result<MonodromyData> {
    let m = family.system_at(t, &params.as_map())?;
    let sys = PolynomialSystem::new(&m)?;
    monodromy_data(&sys, &standard_loops(), digits)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyRun {
    pub family: String,
    pub integrability: IntegrabilityReport,
    /// Deformation-equation check for each basis element.
    pub basis_checks: Vec<bool>,
    pub t0: String,
    pub t1: String,
    pub monodromy_t0: MonodromyData,
    pub monodromy_t1: MonodromyData,
    pub conjugacy: ConjugacyReport,
}

/// Integrability, basis and conjugacy checks for one family.
pub fn run_family(
    family: &IsoFamily,
    basis: &[SymMatrix],
    params: &FamilyParameters,
    t0: &Rational,
    t1: &Rational,
    digits: usize,
) -> Result<FamilyRun> {
    let integrability = check_integrability(&family.omega);
    let n = unipotent_n();
    let basis_checks = basis
        .iter()
        .map(|w| verify_deformation_equation(w, &n))
        .collect::<Result<Vec<_>>>()?;
    let (m0, m1) = rayon::join(
        || family_monodromy(family, params, t0, digits),
        || family_monodromy(family, params, t1, digits),
    );
    let (m0, m1) = (m0?, m1?);
    let l0: Vec<_> = m0.matrices.iter().map(MonodromyMatrix::to_c64).collect();
    let l1: Vec<_> = m1.matrices.iter().map(MonodromyMatrix::to_c64).collect();
    let conjugacy = conjugacy_check(&l0, &l1)?;
    Ok(FamilyRun {
        family: family.name.clone(),
        integrability,
        basis_checks,
        t0: format_rational(t0),
        t1: format_rational(t1),
        monodromy_t0: m0,
        monodromy_t1: m1,
        conjugacy,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{int, rat};

    fn params() -> FamilyParameters {
        FamilyParameters { a: rat(1, 2), b: rat(1, 3), c: int(1) }
    }

    #[test]
    fn corrected_family_traces_are_constant() {
        let f = corrected_family();
        let m1 = family_monodromy(&f, &params(), &int(1), 20).unwrap();
        let m2 = family_monodromy(&f, &params(), &int(2), 20).unwrap();
        let tr = |m: &MonodromyMatrix| {
            let c = m.to_c64();
            c[0][0] + c[1][1]
        };
        for (a, b) in m1.matrices.iter().zip(&m2.matrices) {
            assert!((tr(a) - tr(b)).norm() < 1e-8);
            assert!(a.liouville_defect < 1e-6);
        }
        assert!((tr(&m1.matrices[0]).re - 8.914593205).abs() < 1e-6);
    }
}
