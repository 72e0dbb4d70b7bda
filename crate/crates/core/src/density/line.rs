//! Classification of finitely generated subsemigroups of the additive reals:
//! with generators of both signs the semigroup is either a discrete cyclic
//! group or dense; one-sided semigroups have no accumulation point.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::exactreal::{Rat, RationalMatrix, Sign, SymReal};
use crate::Error;

/// Closure type of a one-dimensional finitely generated semigroup.
#[derive(Clone, Debug, PartialEq)]
pub enum LineClass {
    DenseInR,
    /// The semigroup is `g·ℤ`; the generator is the unique positive one.
    DiscreteCyclic(SymReal),
    /// All generators share one sign; the semigroup is discrete and one-sided.
    OneSidedDiscrete(Sign),
}

/// Classifies the semigroup generated by the given reals. Zero generators
/// are dropped first.
pub fn classify_line_semigroup(gens: &[SymReal]) -> Result<LineClass, Error> {
    let nonzero: Vec<&SymReal> = gens.iter().filter(|g| !g.is_zero()).collect();
    if nonzero.is_empty() {
        return Err(Error::Input(
            "no nonzero generators to classify".to_string(),
        ));
    }
    let mut pos = false;
    let mut neg = false;
    for g in &nonzero {
        match g.sign()? {
            Sign::Positive => pos = true,
            Sign::Negative => neg = true,
            Sign::Zero => unreachable!("zeros were dropped"),
        }
    }
    if !(pos && neg) {
        return Ok(LineClass::OneSidedDiscrete(if pos {
            Sign::Positive
        } else {
            Sign::Negative
        }));
    }

    // mixed signs: dense unless all pairwise ratios are rational, i.e. the
    // coefficient matrix has rank 1
    let m = RationalMatrix::from_rows(nonzero.iter().map(|g| g.coeffs().to_vec()).collect())?;
    if m.rank() >= 2 {
        return Ok(LineClass::DenseInR);
    }

    // rank 1: every generator is a rational multiple of the first
    let v = nonzero[0];
    let pivot = v
        .coeffs()
        .iter()
        .position(|c| !c.is_zero())
        .expect("nonzero generator");
    let ratios: Vec<Rat> = nonzero
        .iter()
        .map(|g| g.coeff(pivot) / v.coeff(pivot))
        .collect();
    debug_assert!(nonzero
        .iter()
        .zip(&ratios)
        .all(|(g, q)| **g == v.scale(q)));

    // subgroup of ℚ generated by the ratios is cyclic: gcd of numerators
    // over the lcm of denominators
    let mut den = BigInt::one();
    for q in &ratios {
        den = den.lcm(q.denom());
    }
    let mut num = BigInt::zero();
    for q in &ratios {
        num = num.gcd(&(q.numer() * (&den / q.denom())));
    }
    let g = v.scale(&Rat::new(num, den));
    let g = match g.sign()? {
        Sign::Negative => -&g,
        _ => g,
    };
    Ok(LineClass::DiscreteCyclic(g))
}
