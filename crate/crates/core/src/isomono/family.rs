//! Matrix one-forms in `(z, x)`, their integrability residual, the
//! deformation equation for the coefficient matrices, and the two-parameter
//! family with poles at `z = 0` (order two), `z = 1` and `z = infinity`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::symbolic::{SymExpr, SymMatrix};
use crate::error::{Error, Result};
use crate::exact::{Rational, RationalFunction};

/// `omega = dz_part dz + dx_part dx` acting by `dY = omega Y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixOneForm {
    pub dz_part: SymMatrix,
    pub dx_part: SymMatrix,
    pub params: Vec<String>,
}

impl MatrixOneForm {
    pub fn size(&self) -> usize {
        self.dz_part.size()
    }

    /// The `dz ^ dx` coefficient of `d(omega) - omega ^ omega`:
    /// `d/dz(dx_part) - d/dx(dz_part) - [dz_part, dx_part]`, canonicalized.
    pub fn integrability_residual(&self) -> SymMatrix {
        self.dx_part
            .d_dz()
            .sub(&self.dz_part.d_dx())
            .sub(&self.dz_part.commutator(&self.dx_part))
            .canonical()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntegrabilityReport {
    pub integrable: bool,
    /// Residual entries as strings; all `"0"` when integrable.
    pub residual: Vec<Vec<String>>,
}

pub fn check_integrability(omega: &MatrixOneForm) -> IntegrabilityReport {
    let r = omega.integrability_residual();
    IntegrabilityReport {
        integrable: r.is_zero(),
        residual: r.to_strings(),
    }
}

/// Exact check of `dW/dx = [W, N] / x`.
pub fn verify_deformation_equation(w: &SymMatrix, n: &SymMatrix) -> Result<bool> {
    if w.0.iter().flatten().any(SymExpr::depends_on_z) {
        return Err(Error::SymbolicDomain("W must depend on x only".into()));
    }
    if w.size() != n.size() {
        return Err(Error::Dimension("W and N differ in size".into()));
    }
    let lhs = w.d_dx();
    let rhs = w.commutator(n).scale_by(&SymExpr::x_pow(-1));
    Ok(lhs.sub(&rhs).is_zero())
}

/// `[[1, 1], [0, 1]]`.
pub fn unipotent_n() -> SymMatrix {
    SymMatrix::from_ints(&[&[1, 1], &[0, 1]])
}

/// How the family parameter `t` enters the coefficient matrices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParameterReading {
    /// Matrices are polynomials in `x` and `t` is the value of `x`.
    Literal,
    /// Matrices are polynomials in `log x` and `t` is the value of `log x`.
    LogCoordinate,
}

/// A family of Fuchsian-at-one, order-two-at-zero systems
/// `dY/dz = (A/z^2 + B/z + C/(z-1)) Y` with symbolic parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsoFamily {
    pub name: String,
    pub omega: MatrixOneForm,
    pub reading: ParameterReading,
}

/// JSON form: entries are expressions in `z`, `x`, `log(x)` and the declared
/// parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyDocument {
    pub name: String,
    pub params: Vec<String>,
    pub reading: ParameterReading,
    pub dz_part: Vec<Vec<String>>,
    pub dx_part: Vec<Vec<String>>,
}

impl FamilyDocument {
    pub fn build(&self) -> Result<IsoFamily> {
        let p: Vec<&str> = self.params.iter().map(String::as_str).collect();
        let dz = SymMatrix::parse(&self.dz_part, &p)?;
        let dx = SymMatrix::parse(&self.dx_part, &p)?;
        if dz.size() != dx.size() {
            return Err(Error::Dimension("dz and dx parts differ in size".into()));
        }
        Ok(IsoFamily {
            name: self.name.clone(),
            omega: MatrixOneForm {
                dz_part: dz,
                dx_part: dx,
                params: self.params.clone(),
            },
            reading: self.reading,
        })
    }
}

impl IsoFamily {
    pub fn to_document(&self) -> FamilyDocument {
        FamilyDocument {
            name: self.name.clone(),
            params: self.omega.params.clone(),
            reading: self.reading,
            dz_part: self.omega.dz_part.to_strings(),
            dx_part: self.omega.dx_part.to_strings(),
        }
    }

    /// `dY/dz = M(z) Y` at parameter value `t` and parameter values.
    pub fn system_at(&self, t: &Rational, params: &BTreeMap<String, Rational>) -> Result<Vec<Vec<RationalFunction>>> {
        match self.reading {
            ParameterReading::Literal => self.omega.dz_part.specialize(Some(t), None, params),
            ParameterReading::LogCoordinate => self.omega.dz_part.specialize(None, Some(t), params),
        }
    }
}

fn family_dz(b22: &str, lead12: &str) -> Vec<Vec<String>> {
    let entries = [
        ["a/z^2 + (1 - T)/z + 1/(z-1)".to_string(), format!("{lead12}/z^2 - T^2/z + c/(z-1)")],
        ["1/z".to_string(), format!("b/z^2 + {b22}/z + 1/(z-1)")],
    ];
    entries.iter().map(|r| r.to_vec()).collect()
}

fn family_doc(name: &str, t: &str, b22: &str, dx_sign: &str, reading: ParameterReading) -> FamilyDocument {
    let dz = family_dz(b22, "(a - b)*T")
        .into_iter()
        .map(|r| r.into_iter().map(|s| s.replace('T', t)).collect())
        .collect();
    let dx = vec![
        vec![format!("{dx_sign}1/x"), format!("{dx_sign}1/x")],
        vec!["0".to_string(), format!("{dx_sign}1/x")],
    ];
    FamilyDocument {
        name: name.into(),
        params: vec!["a".into(), "b".into(), "c".into()],
        reading,
        dz_part: dz,
        dx_part: dx,
    }
}

/// The family exactly as printed: `A(x) = [[a, (a-b)x], [0, b]]`,
/// `B(x) = [[1-x, -x^2], [1, 1]]`, `C = [[1, c], [0, 1]]`, with
/// `dx_part = N / x`.
pub fn displayed_family() -> IsoFamily {
    family_doc("displayed", "x", "1", "", ParameterReading::Literal)
        .build()
        .expect("built-in family parses")
}

/// The integrable repair: matrices written in `t = log x`, `B(2,2) = 1 + t`,
/// and `dx_part = -N / x` (the sign that makes `dW/dx = [W, N]/x` the
/// integrability condition under `dY = omega Y`).
pub fn corrected_family() -> IsoFamily {
    family_doc("corrected", "log(x)", "(1 + log(x))", "-", ParameterReading::LogCoordinate)
        .build()
        .expect("built-in family parses")
}

fn w(rows: [[&str; 2]; 2]) -> SymMatrix {
    let rows: Vec<Vec<String>> = rows.iter().map(|r| r.iter().map(|s| s.to_string()).collect()).collect();
    SymMatrix::parse(&rows, &[]).expect("built-in matrix parses")
}

/// The four solutions of the deformation equation as printed.
pub fn displayed_basis() -> Vec<SymMatrix> {
    vec![
        w([["1", "log(x)"], ["0", "0"]]),
        w([["0", "1"], ["0", "0"]]),
        w([["-log(x)", "-log(x)^2"], ["1", "0"]]),
        w([["0", "-log(x)"], ["0", "1"]]),
    ]
}

/// The printed basis with the third element repaired to
/// `[[-log x, -log^2 x], [1, log x]]`.
pub fn corrected_basis() -> Vec<SymMatrix> {
    let mut b = displayed_basis();
    b[2] = w([["-log(x)", "-log(x)^2"], ["1", "log(x)"]]);
    b
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn displayed_family_is_not_integrable() {
        let r = check_integrability(&displayed_family().omega);
        assert!(!r.integrable);
    }

    #[test]
    fn corrected_family_is_integrable() {
        let r = check_integrability(&corrected_family().omega);
        assert!(r.integrable, "{:?}", r.residual);
        assert!(r.residual.iter().flatten().all(|e| e == "0"));
    }

    #[test]
    fn perturbation_breaks_integrability() {
        let mut f = corrected_family();
        f.omega.dz_part.0[0][0] = f.omega.dz_part.0[0][0].add(&SymExpr::z_pow(-1));
        assert!(!check_integrability(&f.omega).integrable);
    }

    #[test]
    fn x_independent_form_is_integrable() {
        let dz = SymMatrix::parse(&[vec!["1/z".into(), "z".into()], vec!["0".into(), "1/(z-1)".into()]], &[]).unwrap();
        let omega = MatrixOneForm {
            dz_part: dz,
            dx_part: SymMatrix::zero(2),
            params: vec![],
        };
        assert!(check_integrability(&omega).integrable);
    }

    #[test]
    fn deformation_basis() {
        let n = unipotent_n();
        let printed: Vec<bool> = displayed_basis().iter().map(|w| verify_deformation_equation(w, &n).unwrap()).collect();
        assert_eq!(printed, vec![true, true, false, true]);
        assert!(corrected_basis().iter().all(|w| verify_deformation_equation(w, &n).unwrap()));
        assert!(verify_deformation_equation(&SymMatrix::from_ints(&[&[1, 0], &[0, 1]]), &n).unwrap());
        let xw = SymMatrix::parse(&[vec!["x".into(), "0".into()], vec!["0".into(), "0".into()]], &[]).unwrap();
        assert!(!verify_deformation_equation(&xw, &n).unwrap());
    }

    #[test]
    fn document_round_trip() {
        let f = corrected_family();
        let doc = f.to_document();
        let json = serde_json::to_string(&doc).unwrap();
        let back: FamilyDocument = serde_json::from_str(&json).unwrap();
        let g = back.build().unwrap();
        assert!(g.omega.dz_part.sub(&f.omega.dz_part).is_zero());
    }
}
