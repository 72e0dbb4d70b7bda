//! Abstract connected-abelian-Lie-group data and minimal generator counts.
//!
//! The count for a connected group of dimension `n` with maximal torus of
//! dimension `t` is `n - t + 1`; a finite component group contributes via
//! the max formula. The per-class table stores the ambient real dimension
//! and torus dimension and recomputes every published count from
//! `1 + dim V - dim T`, asserting agreement with the stored value.

use crate::exactreal::{Rat, RationalMatrix};
use crate::Error;

/// Data of an abelian Lie group with finitely many components: Lie algebra
/// dimension `n`, maximal torus dimension `t` with a rational basis of the
/// lattice `Γ = ker exp`, and the component group's order and minimal
/// generator count.
#[derive(Clone, Debug, PartialEq)]
pub struct AbelianGroupSpec {
    n: usize,
    t: usize,
    gamma_basis: Vec<Vec<Rat>>,
    component_count: usize,
    component_gens: usize,
}

impl AbelianGroupSpec {
    pub fn new(
        n: usize,
        t: usize,
        gamma_basis: Vec<Vec<Rat>>,
        component_count: usize,
        component_gens: usize,
    ) -> Result<Self, Error> {
        if t > n {
            return Err(Error::Input(format!(
                "torus dimension {t} exceeds group dimension {n}"
            )));
        }
        if gamma_basis.len() != t {
            return Err(Error::Input(format!(
                "expected {t} lattice basis vectors, got {}",
                gamma_basis.len()
            )));
        }
        if gamma_basis.iter().any(|v| v.len() != n) {
            return Err(Error::Dimension(
                "lattice basis vector of wrong length".to_string(),
            ));
        }
        if t > 0 {
            let m = RationalMatrix::from_rows(gamma_basis.clone())?;
            if m.rank() != t {
                return Err(Error::Input(
                    "lattice basis is rank deficient".to_string(),
                ));
            }
        }
        if component_count == 0 {
            return Err(Error::Input("component count must be at least 1".into()));
        }
        if (component_gens == 0) != (component_count == 1) {
            return Err(Error::Input(
                "component generator count must be 0 exactly for a connected group".to_string(),
            ));
        }
        Ok(AbelianGroupSpec {
            n,
            t,
            gamma_basis,
            component_count,
            component_gens,
        })
    }

    /// A connected group: trivial component data.
    pub fn connected(n: usize, t: usize, gamma_basis: Vec<Vec<Rat>>) -> Result<Self, Error> {
        Self::new(n, t, gamma_basis, 1, 0)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn torus_dim(&self) -> usize {
        self.t
    }

    pub fn gamma_basis(&self) -> &[Vec<Rat>] {
        &self.gamma_basis
    }

    pub fn component_count(&self) -> usize {
        self.component_count
    }

    pub fn component_gens(&self) -> usize {
        self.component_gens
    }

    pub fn is_connected(&self) -> bool {
        self.component_count == 1
    }
}

/// Minimal number of elements generating a dense subsemigroup (equivalently
/// subgroup) of the group described by `spec`: `max(n - t + 1,
/// component generators)`, degenerating to the component count data when the
/// identity component is trivial, and 0 for the trivial group.
pub fn min_generators(spec: &AbelianGroupSpec) -> usize {
    if spec.n == 0 {
        return spec.component_gens;
    }
    (spec.n - spec.t + 1).max(spec.component_gens)
}

/// Matrix classes with known minimal hypercyclic generator counts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatrixClass {
    /// All invertible complex matrices.
    GlC,
    /// Any group between the complex diagonal torus and GL(n, ℂ).
    DiagCToGlC,
    /// All invertible real matrices, even size.
    GlREven,
    /// All invertible real matrices, odd size.
    GlROdd,
    /// Invertible upper-triangular complex Toeplitz matrices.
    ToeplitzC,
    /// Invertible upper-triangular real Toeplitz matrices.
    ToeplitzR,
    /// Invertible upper-triangular real matrices (non-diagonalizable tuples).
    TriangularR,
    /// Invertible upper-triangular complex matrices (non-diagonalizable tuples).
    TriangularC,
    /// Invertible real diagonal matrices.
    DiagR,
}

impl MatrixClass {
    pub fn name(&self) -> &'static str {
        match self {
            MatrixClass::GlC => "GL_C",
            MatrixClass::DiagCToGlC => "DiagC_to_GLC",
            MatrixClass::GlREven => "GL_R_even",
            MatrixClass::GlROdd => "GL_R_odd",
            MatrixClass::ToeplitzC => "ToeplitzC",
            MatrixClass::ToeplitzR => "ToeplitzR",
            MatrixClass::TriangularR => "TriangularR",
            MatrixClass::TriangularC => "TriangularC",
            MatrixClass::DiagR => "DiagR",
        }
    }
}

/// Count data for one class at one size: the minimal generator count, the
/// ambient real dimension, the torus dimension, and descriptions of the
/// torus `T` and the connected abelian group `H` realizing the count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassCount {
    pub count: usize,
    pub real_dim: usize,
    pub torus_dim: usize,
    pub torus: String,
    pub dense_in: String,
}

/// Minimal number of commuting generators of a subsemigroup of the class
/// with a somewhere dense orbit, recomputed from `1 + dim_ℝ V - dim T` and
/// checked against the stored published value.
pub fn m_of_g(class: MatrixClass, n: usize) -> Result<ClassCount, Error> {
    if n == 0 {
        return Err(Error::Input("matrix size must be at least 1".into()));
    }
    let (real_dim, torus_dim, stored, torus, dense_in): (usize, usize, usize, String, String) =
        match class {
            MatrixClass::GlC | MatrixClass::DiagCToGlC => (
                2 * n,
                n,
                n + 1,
                format!("(S^1)^{n}"),
                format!("(C*)^{n}"),
            ),
            MatrixClass::GlREven => {
                if n % 2 != 0 {
                    return Err(Error::Parity {
                        class: class.name().to_string(),
                        requirement: "an even size".to_string(),
                        n,
                    });
                }
                let m = n / 2;
                (
                    n,
                    m,
                    m + 1,
                    format!("SO(2)^{m}"),
                    format!("(R_{{>0}}·SO(2))^{m}"),
                )
            }
            MatrixClass::GlROdd => {
                if n % 2 != 1 {
                    return Err(Error::Parity {
                        class: class.name().to_string(),
                        requirement: "an odd size".to_string(),
                        n,
                    });
                }
                let m = (n - 1) / 2;
                (
                    n,
                    m,
                    m + 2,
                    format!("SO(2)^{m}"),
                    format!("(R_{{>0}}·SO(2))^{m} × R_{{>0}}"),
                )
            }
            MatrixClass::ToeplitzC => (
                2 * n,
                1,
                2 * n,
                "S^1".to_string(),
                "complex Toeplitz group".to_string(),
            ),
            MatrixClass::ToeplitzR => (
                n,
                0,
                n + 1,
                "1".to_string(),
                "positive-diagonal real Toeplitz group".to_string(),
            ),
            MatrixClass::TriangularR => (
                n,
                0,
                n + 1,
                "1".to_string(),
                "real Toeplitz group".to_string(),
            ),
            MatrixClass::TriangularC => (
                2 * n,
                n - 1,
                n + 2,
                format!("(S^1)^{}", n - 1),
                "diagonal × 2×2 complex Toeplitz block group".to_string(),
            ),
            MatrixClass::DiagR => (
                n,
                0,
                n + 1,
                "1".to_string(),
                format!("(R_{{>0}})^{n}"),
            ),
        };
    let computed = 1 + real_dim - torus_dim;
    if computed != stored {
        return Err(Error::Internal(format!(
            "count formula disagrees with stored table value for {} at n = {n}: {computed} vs {stored}",
            class.name()
        )));
    }
    Ok(ClassCount {
        count: stored,
        real_dim,
        torus_dim,
        torus,
        dense_in: dense_in.to_string(),
    })
}
