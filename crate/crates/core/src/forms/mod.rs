//! Affine-linear form systems, convex bodies and the count of lattice
//! points at which every form takes a friable value.

mod body;
mod count;
mod parse;

pub use body::{BoxBody, ConvexBody, HPolytope, LatticePoints, Volume};
pub use count::{
    conjecture_prediction, count_friable_values, count_friable_values_with_bounds, main_term,
    validate_domain, MainTerm,
};
pub use parse::{parse_body, parse_forms};

use serde::Serialize;

use crate::error::{Error, Result};

/// `x -> <coeffs, x> + constant` with integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct AffineForm {
    coeffs: Vec<i64>,
    constant: i64,
}

impl AffineForm {
    pub fn new(coeffs: Vec<i64>, constant: i64) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::arg("an affine form needs at least one variable"));
        }
        if coeffs.iter().all(|&c| c == 0) {
            return Err(Error::arg("affine form is constant"));
        }
        Ok(AffineForm { coeffs, constant })
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn constant(&self) -> i64 {
        self.constant
    }

    /// Largest absolute non-constant coefficient.
    pub fn coefficient_bound(&self) -> u64 {
        self.coeffs.iter().map(|c| c.unsigned_abs()).max().unwrap_or(0)
    }

    /// Overflow-checked value at an integer point.
    pub fn evaluate(&self, point: &[i64]) -> Result<i64> {
        if point.len() != self.dim() {
            return Err(Error::arg(format!(
                "point of dimension {} for a form in {} variables",
                point.len(),
                self.dim()
            )));
        }
        let overflow = || Error::Arithmetic(format!("evaluating {self} at {point:?}"));
        self.coeffs
            .iter()
            .zip(point)
            .try_fold(self.constant, |acc, (&c, &x)| {
                c.checked_mul(x).and_then(|p| acc.checked_add(p))
            })
            .ok_or_else(overflow)
    }

    /// Value in 128-bit arithmetic; cannot overflow for 64-bit inputs in
    /// fewer than 2^62 variables.
    #[inline]
    pub(crate) fn evaluate_wide(&self, point: &[i64]) -> i128 {
        self.coeffs
            .iter()
            .zip(point)
            .fold(self.constant as i128, |acc, (&c, &x)| acc + c as i128 * x as i128)
    }

    /// The form `x -> F(x - shift)`.
    pub fn shifted(&self, shift: &[i64]) -> Result<Self> {
        let delta = self.evaluate(shift)? - self.constant;
        let constant = self
            .constant
            .checked_sub(delta)
            .ok_or_else(|| Error::Arithmetic("shifted constant".into()))?;
        Ok(AffineForm {
            coeffs: self.coeffs.clone(),
            constant,
        })
    }

    /// `true` iff the coefficient vectors are rationally proportional.
    pub fn is_parallel_to(&self, other: &AffineForm) -> bool {
        if self.dim() != other.dim() {
            return false;
        }
        let (a, b) = (&self.coeffs, &other.coeffs);
        (0..a.len()).all(|i| {
            (i + 1..a.len()).all(|j| {
                a[i] as i128 * b[j] as i128 == a[j] as i128 * b[i] as i128
            })
        })
    }
}

impl std::fmt::Display for AffineForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "-" } else if first { "" } else { "+" };
            let mag = c.unsigned_abs();
            if mag == 1 {
                write!(f, "{sign}x{}", i + 1)?;
            } else {
                write!(f, "{sign}{mag}*x{}", i + 1)?;
            }
            first = false;
        }
        match self.constant {
            0 => Ok(()),
            c if c < 0 => write!(f, "-{}", c.unsigned_abs()),
            c => write!(f, "+{c}"),
        }
    }
}

/// `t` affine-linear forms in `d` variables.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FormSystem {
    dim: usize,
    forms: Vec<AffineForm>,
    bound: u64,
}

impl FormSystem {
    pub fn new(forms: Vec<AffineForm>) -> Result<Self> {
        let first = forms
            .first()
            .ok_or_else(|| Error::arg("a form system needs at least one form"))?;
        let dim = first.dim();
        if let Some(bad) = forms.iter().find(|f| f.dim() != dim) {
            return Err(Error::arg(format!(
                "form {bad} has {} variables, expected {dim}",
                bad.dim()
            )));
        }
        let bound = forms.iter().map(AffineForm::coefficient_bound).max().unwrap_or(0);
        Ok(FormSystem { dim, forms, bound })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }

    pub fn forms(&self) -> &[AffineForm] {
        &self.forms
    }

    /// `L`: the largest absolute non-constant coefficient.
    pub fn coefficient_bound(&self) -> u64 {
        self.bound
    }

    /// The system `x -> F_i(x - shift)`.
    pub fn shifted(&self, shift: &[i64]) -> Result<Self> {
        FormSystem::new(
            self.forms
                .iter()
                .map(|f| f.shifted(shift))
                .collect::<Result<Vec<_>>>()?,
        )
    }

    /// `true` iff no two forms have proportional coefficient vectors.
    pub fn check_pairwise_affine_independence(&self) -> bool {
        self.forms.iter().enumerate().all(|(i, f)| {
            self.forms[i + 1..].iter().all(|g| !f.is_parallel_to(g))
        })
    }
}

impl std::fmt::Display for FormSystem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (i, form) in self.forms.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{form}")?;
        }
        Ok(())
    }
}

/// See [`AffineForm::evaluate`].
pub fn evaluate(form: &AffineForm, point: &[i64]) -> Result<i64> {
    form.evaluate(point)
}

/// See [`FormSystem::check_pairwise_affine_independence`].
pub fn check_pairwise_affine_independence(system: &FormSystem) -> bool {
    system.check_pairwise_affine_independence()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn form(coeffs: &[i64], c: i64) -> AffineForm {
        AffineForm::new(coeffs.to_vec(), c).unwrap()
    }

    #[test]
    fn evaluation() {
        assert_eq!(form(&[2, 3], 1).evaluate(&[1, 1]).unwrap(), 6);
        assert_eq!(form(&[1, 1], 0).evaluate(&[3, 4]).unwrap(), 7);
        assert_eq!(form(&[5, -7, 2], -11).evaluate(&[0, 0, 0]).unwrap(), -11);
        assert!(matches!(
            form(&[i64::MAX, 1], 0).evaluate(&[2, 0]),
            Err(Error::Arithmetic(_))
        ));
        assert!(matches!(form(&[1, 1], 0).evaluate(&[1]), Err(Error::Argument(_))));
    }

    #[test]
    fn constant_forms_rejected() {
        assert!(AffineForm::new(vec![0, 0], 3).is_err());
        assert!(AffineForm::new(vec![], 3).is_err());
    }

    #[test]
    fn independence() {
        let s = FormSystem::new(vec![form(&[1], 0), form(&[2], 1)]).unwrap();
        assert!(!s.check_pairwise_affine_independence());
        let harper = FormSystem::new(vec![form(&[1, 0], 0), form(&[0, 1], 0), form(&[1, 1], 0)]).unwrap();
        assert!(harper.check_pairwise_affine_independence());
        let s = FormSystem::new(vec![form(&[1, 1], 0), form(&[2, 2], 5)]).unwrap();
        assert!(!s.check_pairwise_affine_independence());
        let s = FormSystem::new(vec![form(&[1, 0], 0), form(&[-3, 0], 7)]).unwrap();
        assert!(!s.check_pairwise_affine_independence());
        let s = FormSystem::new(vec![form(&[1, 2], 0), form(&[2, 1], 0)]).unwrap();
        assert!(s.check_pairwise_affine_independence());
    }

    #[test]
    fn bound_and_dimension_checks() {
        let s = FormSystem::new(vec![form(&[1, -4], 0), form(&[3, 1], 9)]).unwrap();
        assert_eq!(s.coefficient_bound(), 4);
        assert_eq!(s.dim(), 2);
        assert!(FormSystem::new(vec![form(&[1], 0), form(&[1, 1], 0)]).is_err());
        assert!(FormSystem::new(vec![]).is_err());
    }

    #[test]
    fn shifting_composes_translation() {
        let f = form(&[2, -3], 5);
        let g = f.shifted(&[1, 2]).unwrap();
        for p in [[0i64, 0], [4, -1], [7, 9]] {
            let q = [p[0] - 1, p[1] - 2];
            assert_eq!(g.evaluate(&p).unwrap(), f.evaluate(&q).unwrap());
        }
    }

    #[test]
    fn display() {
        assert_eq!(form(&[1, -2, 0], -3).to_string(), "x1-2*x2-3");
        assert_eq!(form(&[0, 1], 4).to_string(), "x2+4");
    }
}
