//! Symmetry operations on Hermitian matrices: conjugation by a unitary,
//! optionally composed with entrywise complex conjugation.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::herm::HermitianOperator;
use crate::{C64, Error, Result};

const UNITARITY_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flag {
    Unitary,
    Antiunitary,
}

/// A unitary U together with a flag selecting between the conjugation
/// A -> U A U^dagger and its antiunitary variant A -> U conj(A) U^dagger.
#[derive(Clone, Debug)]
pub struct SymmetryOp {
    flag: Flag,
    u: DMatrix<C64>,
}

impl SymmetryOp {
    pub fn new(flag: Flag, u: DMatrix<C64>) -> Result<Self> {
        if u.nrows() != u.ncols() {
            return Err(Error::NotSquare {
                rows: u.nrows(),
                cols: u.ncols(),
            });
        }
        let n = u.nrows();
        if n < 2 {
            return Err(Error::DimensionTooSmall(n));
        }
        let defect = (u.adjoint() * &u - DMatrix::<C64>::identity(n, n)).norm();
        if defect > UNITARITY_TOL {
            return Err(Error::UnitarityViolation(defect));
        }
        Ok(Self { flag, u })
    }

    pub fn flag(&self) -> Flag {
        self.flag
    }

    pub fn unitary(&self) -> &DMatrix<C64> {
        &self.u
    }

    pub fn dim(&self) -> usize {
        self.u.nrows()
    }

    pub fn apply_to(&self, a: &HermitianOperator) -> HermitianOperator {
        let inner = match self.flag {
            Flag::Unitary => a.matrix().clone(),
            Flag::Antiunitary => a.matrix().conjugate(),
        };
        let mat = &self.u * inner * self.u.adjoint();
        HermitianOperator::new(mat).expect("conjugation preserves Hermiticity and size")
    }
}
