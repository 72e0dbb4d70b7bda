//! Exact arithmetic for real numbers lying in a finite-dimensional ℚ-vector
//! space with a declared, ℚ-linearly independent symbol basis.
//!
//! A [`SymReal`] is a vector of exact rational coefficients over the symbols
//! of an ambient [`SymbolBasis`]; symbol 0 is always the constant 1. Equality
//! with zero and ℚ-linear (in)dependence are decided exactly from the
//! coefficients. Signs of nonzero values are decided from the float shadow,
//! with a hard error inside a dead zone — never silently.

pub mod rational;

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::Error;
pub use rational::{
    clear_denominators, gcd_reduce, hermite_normal_form, primitive_integer_vector, rat, rat_int,
    Rat, RationalMatrix,
};

/// Dead zone for float-shadow sign decisions. A nonzero value whose shadow
/// has magnitude below this bound is reported as [`Error::AmbiguousSign`].
pub const SIGN_DEAD_ZONE: f64 = 1e-9;

/// One declared real number: a name, a float shadow, and (for members of the
/// quadratic family) the rational whose positive square root it denotes.
#[derive(Clone, Debug, PartialEq)]
pub struct Symbol {
    pub name: String,
    pub value: f64,
    pub square: Option<Rat>,
}

/// An ordered list of declared reals asserted to be ℚ-linearly independent.
/// Symbol 0 is always the constant `1`.
#[derive(Debug, PartialEq)]
pub struct SymbolBasis {
    symbols: Vec<Symbol>,
}

impl SymbolBasis {
    /// The basis containing only the constant 1: plain rational arithmetic.
    pub fn rationals_only() -> Arc<Self> {
        Arc::new(SymbolBasis {
            symbols: vec![Symbol {
                name: "1".into(),
                value: 1.0,
                square: Some(Rat::one()),
            }],
        })
    }

    /// `(1, √2, √3, √5, …)`: square roots of the first `count` primes.
    /// Their ℚ-linear independence is classical.
    pub fn sqrt_primes(count: usize) -> Arc<Self> {
        let mut b = Builder::new();
        for p in first_primes(count) {
            b = b.sqrt(p);
        }
        b.build()
    }

    pub fn builder() -> Builder {
        Builder::new()
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        false // symbol 0 always present
    }

    pub fn symbol(&self, i: usize) -> &Symbol {
        &self.symbols[i]
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s.name == name)
    }

    /// Index of the symbol denoting √d for squarefree `d`, if declared.
    fn index_of_square(&self, d: &Rat) -> Option<usize> {
        self.symbols
            .iter()
            .position(|s| s.square.as_ref() == Some(d))
    }

    fn compatible(a: &Arc<SymbolBasis>, b: &Arc<SymbolBasis>) -> bool {
        Arc::ptr_eq(a, b) || a.symbols == b.symbols
    }
}

/// Incremental construction of a basis. Duplicate names are rejected at
/// build time by panicking (bases are built from program constants).
pub struct Builder {
    symbols: Vec<Symbol>,
}

impl Builder {
    fn new() -> Self {
        Builder {
            symbols: vec![Symbol {
                name: "1".into(),
                value: 1.0,
                square: Some(Rat::one()),
            }],
        }
    }

    pub fn from_basis(basis: &SymbolBasis) -> Self {
        Builder {
            symbols: basis.symbols.clone(),
        }
    }

    /// Declares √d for a squarefree positive integer `d` (name `sqrt<d>`).
    /// Adding an already-present square is a no-op.
    pub fn sqrt(mut self, d: u64) -> Self {
        let sq = Rat::from_integer(BigInt::from(d));
        if self.symbols.iter().any(|s| s.square.as_ref() == Some(&sq)) {
            return self;
        }
        self.symbols.push(Symbol {
            name: format!("sqrt{d}"),
            value: (d as f64).sqrt(),
            square: Some(sq),
        });
        self
    }

    /// Declares an opaque symbol: a named real with a float shadow whose
    /// ℚ-independence from the rest of the basis is asserted by the caller.
    pub fn opaque(mut self, name: &str, value: f64) -> Self {
        if self.symbols.iter().any(|s| s.name == name) {
            panic!("duplicate symbol name {name:?}");
        }
        self.symbols.push(Symbol {
            name: name.into(),
            value,
            square: None,
        });
        self
    }

    pub fn build(self) -> Arc<SymbolBasis> {
        let mut names: Vec<&str> = self.symbols.iter().map(|s| s.name.as_str()).collect();
        names.sort_unstable();
        names.dedup();
        assert_eq!(names.len(), self.symbols.len(), "duplicate symbol names");
        Arc::new(SymbolBasis {
            symbols: self.symbols,
        })
    }
}

/// Looks up an opaque symbol by name, or extends the basis with it. An
/// existing symbol must carry the same float value.
pub fn with_opaque_symbol(
    basis: &Arc<SymbolBasis>,
    name: &str,
    value: f64,
) -> Result<(Arc<SymbolBasis>, usize), Error> {
    if let Some(idx) = basis.index_of(name) {
        if (basis.symbol(idx).value - value).abs() > 1e-12 * value.abs().max(1.0) {
            return Err(Error::Input(format!(
                "symbol {name:?} already declared with a different value"
            )));
        }
        return Ok((Arc::clone(basis), idx));
    }
    let wider = Builder::from_basis(basis).opaque(name, value).build();
    let idx = wider.len() - 1;
    Ok((wider, idx))
}

/// The first `count` primes.
pub fn first_primes(count: usize) -> Vec<u64> {
    let mut primes = Vec::with_capacity(count);
    let mut n = 2u64;
    while primes.len() < count {
        if primes.iter().all(|p| n % p != 0) {
            primes.push(n);
        }
        n += 1;
    }
    primes
}

/// Sign of an exact value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

/// An exact real: rational coefficients over the ambient basis.
#[derive(Clone, Debug)]
pub struct SymReal {
    basis: Arc<SymbolBasis>,
    coeffs: Vec<Rat>,
}

impl PartialEq for SymReal {
    fn eq(&self, other: &Self) -> bool {
        SymbolBasis::compatible(&self.basis, &other.basis) && self.coeffs == other.coeffs
    }
}

impl SymReal {
    pub fn zero(basis: &Arc<SymbolBasis>) -> Self {
        SymReal {
            basis: Arc::clone(basis),
            coeffs: vec![Rat::zero(); basis.len()],
        }
    }

    pub fn one(basis: &Arc<SymbolBasis>) -> Self {
        Self::from_rational(basis, Rat::one())
    }

    pub fn from_rational(basis: &Arc<SymbolBasis>, q: Rat) -> Self {
        let mut x = Self::zero(basis);
        x.coeffs[0] = q;
        x
    }

    pub fn from_int(basis: &Arc<SymbolBasis>, n: i64) -> Self {
        Self::from_rational(basis, rat_int(n))
    }

    /// `q * symbol(idx)`.
    pub fn term(basis: &Arc<SymbolBasis>, idx: usize, q: Rat) -> Self {
        assert!(idx < basis.len(), "symbol index out of range");
        let mut x = Self::zero(basis);
        x.coeffs[idx] = q;
        x
    }

    pub fn basis(&self) -> &Arc<SymbolBasis> {
        &self.basis
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &Rat {
        &self.coeffs[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// The value as a rational if it has no irrational component.
    pub fn as_rational(&self) -> Option<&Rat> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    /// Float shadow: Σ coeffs[i] · value[i]. Used for sign checks and
    /// simulation only, never for independence decisions.
    pub fn eval(&self) -> f64 {
        self.coeffs
            .iter()
            .zip(self.basis.symbols())
            .map(|(c, s)| c.to_f64().unwrap_or(f64::NAN) * s.value)
            .sum()
    }

    /// Exact-zero-or-shadow-sign with the default dead zone.
    pub fn sign(&self) -> Result<Sign, Error> {
        self.sign_with_tol(SIGN_DEAD_ZONE)
    }

    pub fn sign_with_tol(&self, tol: f64) -> Result<Sign, Error> {
        if self.is_zero() {
            return Ok(Sign::Zero);
        }
        let shadow = self.eval();
        if !shadow.is_finite() || shadow.abs() < tol {
            return Err(Error::AmbiguousSign { shadow, tol });
        }
        Ok(if shadow > 0.0 {
            Sign::Positive
        } else {
            Sign::Negative
        })
    }

    pub fn scale(&self, q: &Rat) -> Self {
        SymReal {
            basis: Arc::clone(&self.basis),
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    /// Exact product when it stays inside the declared span: always when one
    /// factor is rational, and within the quadratic family when the product
    /// of squares reduces to a declared (or rational) square root.
    pub fn try_mul(&self, other: &SymReal) -> Option<SymReal> {
        assert!(
            SymbolBasis::compatible(&self.basis, &other.basis),
            "mismatched bases in try_mul"
        );
        let mut out = SymReal::zero(&self.basis);
        for (s, cs) in self.coeffs.iter().enumerate() {
            if cs.is_zero() {
                continue;
            }
            for (t, ct) in other.coeffs.iter().enumerate() {
                if ct.is_zero() {
                    continue;
                }
                let c = cs * ct;
                if s == 0 {
                    out.coeffs[t] += c;
                } else if t == 0 {
                    out.coeffs[s] += c;
                } else {
                    let qs = self.basis.symbol(s).square.clone()?;
                    let qt = self.basis.symbol(t).square.clone()?;
                    let (r, d) = split_square(&(qs * qt))?;
                    if d.is_one() {
                        out.coeffs[0] += c * r;
                    } else {
                        let u = self.basis.index_of_square(&d)?;
                        out.coeffs[u] += c * r;
                    }
                }
            }
        }
        Some(out)
    }

    /// Reinterprets this value over an extended basis whose leading symbols
    /// match the current one.
    pub fn extended_to(&self, wider: &Arc<SymbolBasis>) -> Result<SymReal, Error> {
        if Arc::ptr_eq(&self.basis, wider) {
            return Ok(self.clone());
        }
        if wider.len() < self.basis.len()
            || wider.symbols()[..self.basis.len()] != *self.basis.symbols()
        {
            return Err(Error::MismatchedBasis);
        }
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(wider.len(), Rat::zero());
        Ok(SymReal {
            basis: Arc::clone(wider),
            coeffs,
        })
    }

    /// Parses the text syntax: terms joined by `+`, each term a rational
    /// literal (`3/4`, `-2`), a symbol (`sqrt2`, `-sqrt5`), or a product
    /// (`-1/3*sqrt5`).
    pub fn parse(basis: &Arc<SymbolBasis>, input: &str) -> Result<SymReal, Error> {
        let mut out = SymReal::zero(basis);
        let mut offset = 0;
        for piece in input.split('+') {
            let term = parse_term(basis, piece, offset)?;
            out = &out + &term;
            offset += piece.len() + 1;
        }
        Ok(out)
    }
}

fn split_square(q: &Rat) -> Option<(Rat, Rat)> {
    // √(n/d) = √(n·d)/d; factor n·d = r²·m with m squarefree
    if q.is_negative() || q.is_zero() {
        return None;
    }
    let nd = q.numer() * q.denom();
    let (r, m) = squarefree_decomposition(&nd)?;
    Some((Rat::new(r, q.denom().clone()), Rat::from_integer(m)))
}

/// `n = r² · m` with `m` squarefree, by trial division. Returns `None` for
/// values too large to factor cheaply.
fn squarefree_decomposition(n: &BigInt) -> Option<(BigInt, BigInt)> {
    let mut n = n.to_u128()?;
    if n == 0 {
        return None;
    }
    let mut r: u128 = 1;
    let mut m: u128 = 1;
    let mut p: u128 = 2;
    while p * p <= n {
        if p > 1_000_000 {
            return None;
        }
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        for _ in 0..e / 2 {
            r = r.checked_mul(p)?;
        }
        if e % 2 == 1 {
            m = m.checked_mul(p)?;
        }
        p += 1;
    }
    m = m.checked_mul(n)?; // leftover n is prime (or 1)
    Some((BigInt::from(r), BigInt::from(m)))
}

fn parse_term(basis: &Arc<SymbolBasis>, piece: &str, base_offset: usize) -> Result<SymReal, Error> {
    let err = |msg: &str, local: usize| Error::Parse {
        offset: base_offset + local,
        message: msg.to_string(),
    };
    let trimmed = piece.trim();
    if trimmed.is_empty() {
        return Err(err("empty term", piece.len() - piece.trim_start().len()));
    }
    let local = piece.find(trimmed).unwrap_or(0);
    let (negative, body) = match trimmed.strip_prefix('-') {
        Some(rest) => (true, rest.trim_start()),
        None => (false, trimmed),
    };
    let (coeff_str, symbol_str) = match body.split_once('*') {
        Some((c, s)) => (Some(c.trim()), Some(s.trim())),
        None => {
            if body.starts_with(|ch: char| ch.is_ascii_digit()) {
                (Some(body), None)
            } else {
                (None, Some(body))
            }
        }
    };
    let mut coeff = match coeff_str {
        Some(c) => parse_rational(c).ok_or_else(|| err("invalid rational literal", local))?,
        None => Rat::one(),
    };
    if negative {
        coeff = -coeff;
    }
    match symbol_str {
        None => Ok(SymReal::from_rational(basis, coeff)),
        Some(name) => {
            if name.is_empty() {
                return Err(err("missing symbol after '*'", local));
            }
            let idx = basis
                .index_of(name)
                .ok_or_else(|| err(&format!("unknown symbol {name:?}"), local))?;
            Ok(SymReal::term(basis, idx, coeff))
        }
    }
}

fn parse_rational(s: &str) -> Option<Rat> {
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(Rat::new(n, d))
            }
        }
        None => {
            let n: BigInt = s.trim().parse().ok()?;
            Some(Rat::from_integer(n))
        }
    }
}

impl fmt::Display for SymReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if i == 0 {
                terms.push(format!("{c}"));
            } else {
                let name = &self.basis.symbol(i).name;
                if c.is_one() {
                    terms.push(name.clone());
                } else if (-c).is_one() {
                    terms.push(format!("-{name}"));
                } else {
                    terms.push(format!("{c}*{name}"));
                }
            }
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

macro_rules! same_basis {
    ($a:expr, $b:expr) => {
        assert!(
            SymbolBasis::compatible(&$a.basis, &$b.basis),
            "mismatched symbol bases"
        )
    };
}

impl std::ops::Add for &SymReal {
    type Output = SymReal;
    fn add(self, other: &SymReal) -> SymReal {
        same_basis!(self, other);
        SymReal {
            basis: Arc::clone(&self.basis),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl std::ops::Sub for &SymReal {
    type Output = SymReal;
    fn sub(self, other: &SymReal) -> SymReal {
        same_basis!(self, other);
        SymReal {
            basis: Arc::clone(&self.basis),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl std::ops::Neg for &SymReal {
    type Output = SymReal;
    fn neg(self) -> SymReal {
        SymReal {
            basis: Arc::clone(&self.basis),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

/// Float shadow of a value (spec operation name).
pub fn sym_eval(x: &SymReal) -> f64 {
    x.eval()
}

/// Sign with exact zero detection and the default dead zone.
pub fn sym_sign(x: &SymReal) -> Result<Sign, Error> {
    x.sign()
}

/// Exact rank of a rational matrix over ℚ.
pub fn rational_rank(m: &RationalMatrix) -> usize {
    m.rank()
}

/// Outcome of a ℚ-linear independence test. A dependence always carries a
/// nonzero integer relation `b` with `Σ bᵢ·xᵢ = 0` exactly.
#[derive(Clone, Debug, PartialEq)]
pub enum QIndependence {
    Independent,
    Dependent { relation: Vec<BigInt> },
}

impl QIndependence {
    pub fn is_independent(&self) -> bool {
        matches!(self, QIndependence::Independent)
    }
}

/// Tests ℚ-linear independence of the given values exactly. All inputs must
/// share one basis.
pub fn is_q_independent(xs: &[SymReal]) -> Result<QIndependence, Error> {
    if xs.is_empty() {
        return Ok(QIndependence::Independent);
    }
    let basis = xs[0].basis();
    for x in xs {
        if !SymbolBasis::compatible(basis, x.basis()) {
            return Err(Error::MismatchedBasis);
        }
    }
    // coefficient matrix: one row per value, one column per symbol
    let m = RationalMatrix::from_rows(xs.iter().map(|x| x.coeffs().to_vec()).collect())?;
    if m.rank() == xs.len() {
        return Ok(QIndependence::Independent);
    }
    // a relation is a left kernel vector of the coefficient matrix
    let y = m
        .left_kernel_vector()
        .expect("rank-deficient matrix has a left kernel vector");
    let relation = primitive_integer_vector(&clear_denominators(&y));
    debug_assert!({
        let mut acc = SymReal::zero(basis);
        for (b, x) in relation.iter().zip(xs) {
            acc = &acc + &x.scale(&Rat::from_integer(b.clone()));
        }
        acc.is_zero()
    });
    Ok(QIndependence::Dependent { relation })
}
