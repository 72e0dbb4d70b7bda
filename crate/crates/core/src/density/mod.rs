//! Exact density decisions: the 1-D semigroup classification, cone density,
//! the two-condition criterion for dense subsemigroups of ℝⁿ, the
//! exp-criterion for connected abelian Lie groups, and the minimal generator
//! counts per matrix class.
//!
//! Every decisive verdict carries a machine-checkable certificate. A
//! `NotDense` certificate is a nonzero integer form with integral values on
//! the generators, a nonzero form with nonnegative values (cone failure), or
//! the cyclic lattice generator in dimension one. A `Dense` verdict carries
//! the positive combination witnessing that the origin is interior to the
//! convex hull, plus the confirmation that the integral-form lattice is
//! trivial.

mod groups;
mod line;
mod simplex;

pub use groups::{m_of_g, min_generators, AbelianGroupSpec, ClassCount, MatrixClass};
pub use line::{classify_line_semigroup, LineClass};

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::exactreal::{
    clear_denominators, hermite_normal_form, is_q_independent, primitive_integer_vector,
    QIndependence, Rat, RationalMatrix, Sign, SymReal, SymbolBasis,
};
use crate::Error;

use simplex::{cone_membership, positive_combination, Combination};

/// Interval half-width used when density must be decided through float
/// shadows of irrational entries; failures at this width are reported as
/// [`DensityVerdict::Inconclusive`].
pub const SHADOW_ENCLOSURE: f64 = 1e-12;

/// A finite set of candidate generators in ℝⁿ, entries over one symbol basis.
#[derive(Clone, Debug)]
pub struct GeneratorSet {
    vectors: Vec<Vec<SymReal>>,
    dim: usize,
    basis: Arc<SymbolBasis>,
}

impl GeneratorSet {
    pub fn new(vectors: Vec<Vec<SymReal>>) -> Result<Self, Error> {
        let Some(first) = vectors.first() else {
            return Err(Error::Input("empty generator set".into()));
        };
        if first.is_empty() {
            return Err(Error::Input("generators must have dimension >= 1".into()));
        }
        let dim = first.len();
        let basis = Arc::clone(first[0].basis());
        for v in &vectors {
            if v.len() != dim {
                return Err(Error::Dimension(format!(
                    "expected vectors of length {dim}, got {}",
                    v.len()
                )));
            }
            for e in v {
                if !compatible(&basis, e.basis()) {
                    return Err(Error::MismatchedBasis);
                }
            }
        }
        Ok(GeneratorSet {
            vectors,
            dim,
            basis,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[Vec<SymReal>] {
        &self.vectors
    }

    pub fn basis(&self) -> &Arc<SymbolBasis> {
        &self.basis
    }

    /// Appends a generator (used by monotonicity tests).
    pub fn push(&mut self, v: Vec<SymReal>) -> Result<(), Error> {
        if v.len() != self.dim {
            return Err(Error::Dimension("generator of wrong length".into()));
        }
        self.vectors.push(v);
        Ok(())
    }
}

fn compatible(a: &Arc<SymbolBasis>, b: &Arc<SymbolBasis>) -> bool {
    Arc::ptr_eq(a, b) || a.symbols() == b.symbols()
}

/// Which clause of the applied criterion failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FailedClause {
    /// The origin is not interior to the convex hull (equivalently a
    /// nonnegative form exists).
    ConeInterior,
    /// A nonzero form takes integral values on all generators.
    IntegerForm,
    /// The designated basis vectors do not span.
    BasisRank,
    /// A structured coordinate that must be negative is not; the index is
    /// into the basis order.
    NegativeSign(usize),
    /// `{1, α₁, …, αₙ}` is ℚ-linearly dependent.
    QDependence,
}

impl FailedClause {
    pub fn name(&self) -> String {
        match self {
            FailedClause::ConeInterior => "cone_interior".into(),
            FailedClause::IntegerForm => "integer_form".into(),
            FailedClause::BasisRank => "basis_rank".into(),
            FailedClause::NegativeSign(i) => format!("negative_sign[{i}]"),
            FailedClause::QDependence => "q_dependence".into(),
        }
    }
}

/// The evidence attached to a `NotDense` verdict.
#[derive(Clone, Debug)]
pub enum NotDenseCertificate {
    /// Nonzero integer form `l` with `l(a) ∈ ℤ` exactly for every generator.
    IntegerForm {
        form: Vec<BigInt>,
        clause: FailedClause,
        /// for structured inputs, the relation on `{1, α₁, …, αₙ}`
        relation: Option<Vec<BigInt>>,
    },
    /// Nonzero integer form `l` with `l(a) ≥ 0` for every generator (and
    /// `l(γ) = 0` on lattice vectors in the group setting).
    NonnegativeForm {
        form: Vec<BigInt>,
        clause: FailedClause,
    },
    /// Dimension one only: every generator is an integer multiple of the
    /// cyclic lattice generator.
    CyclicLattice { generator: SymReal },
}

/// The evidence attached to a `Dense` verdict.
#[derive(Clone, Debug)]
pub enum DenseCertificate {
    /// `Σ λⱼ aⱼ = 0` with all `λⱼ > 0` and the generators spanning; `exact`
    /// marks a combination that holds identically rather than within the
    /// float enclosure.
    PositiveCombination {
        lambda: Vec<SymReal>,
        exact: bool,
        rank: usize,
    },
    /// The structured criterion: coordinates `α` of the last vector in the
    /// designated basis, signs checked from `sign_checked_from` on, and
    /// `{1, α…}` verified ℚ-independent.
    Structured {
        alpha: Vec<SymReal>,
        sign_checked_from: usize,
    },
}

/// Outcome of a density check, always carrying a re-checkable witness when
/// decisive.
#[derive(Clone, Debug)]
pub enum DensityVerdict {
    Dense(DenseCertificate),
    NotDense(NotDenseCertificate),
    Inconclusive { search_bound: f64 },
}

impl DensityVerdict {
    pub fn is_dense(&self) -> bool {
        matches!(self, DensityVerdict::Dense(_))
    }

    pub fn is_not_dense(&self) -> bool {
        matches!(self, DensityVerdict::NotDense(_))
    }
}

/// Outcome of the cone density test.
#[derive(Clone, Debug)]
pub enum ConeOutcome {
    /// The closed cone spanned by the generators is all of ℝⁿ.
    DenseCone {
        lambda: Vec<SymReal>,
        exact: bool,
        rank: usize,
    },
    /// A nonzero integer form with nonnegative values on every generator.
    Separated { form: Vec<BigInt> },
    Inconclusive { width: f64 },
}

// ---------------------------------------------------------------------------
// helpers shared by the checkers

/// All symbol-component vectors `c_{j,s} ∈ ℚⁿ` of the generators, i.e. the
/// coefficient of symbol `s` in each coordinate of generator `j`.
fn symbol_component_rows(a: &GeneratorSet, from_symbol: usize) -> Vec<Vec<Rat>> {
    let n = a.dim();
    let s_count = a.basis().len();
    let mut rows = Vec::new();
    for v in a.vectors() {
        for s in from_symbol..s_count {
            let row: Vec<Rat> = (0..n).map(|i| v[i].coeff(s).clone()).collect();
            if row.iter().any(|c| !c.is_zero()) {
                rows.push(row);
            }
        }
    }
    rows
}

/// Stacks each generator into ℚ^(n·s): the symbol expansion. A rational
/// linear combination of generators vanishes as a real vector iff the same
/// combination of expansions vanishes.
fn expanded_columns(a: &GeneratorSet) -> Vec<Vec<Rat>> {
    let n = a.dim();
    let s_count = a.basis().len();
    a.vectors()
        .iter()
        .map(|v| {
            let mut col = Vec::with_capacity(n * s_count);
            for i in 0..n {
                for s in 0..s_count {
                    col.push(v[i].coeff(s).clone());
                }
            }
            col
        })
        .collect()
}

fn entry_is_rational(x: &SymReal) -> bool {
    x.as_rational().is_some()
}

fn vector_is_rational(v: &[SymReal]) -> bool {
    v.iter().all(entry_is_rational)
}

fn rational_vector(v: &[SymReal]) -> Option<Vec<Rat>> {
    v.iter().map(|x| x.as_rational().cloned()).collect()
}

/// Indices of rational-entried generators forming an exact rank-n frame,
/// chosen greedily in input order.
fn rational_frame(a: &GeneratorSet) -> Option<Vec<usize>> {
    let n = a.dim();
    let mut chosen: Vec<usize> = Vec::new();
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    for (j, v) in a.vectors().iter().enumerate() {
        if let Some(rv) = rational_vector(v) {
            rows.push(rv);
            let m = RationalMatrix::from_rows(rows.clone()).ok()?;
            if m.rank() == rows.len() {
                chosen.push(j);
                if chosen.len() == n {
                    return Some(chosen);
                }
            } else {
                rows.pop();
            }
        }
    }
    None
}

/// Exact rationals capturing the float shadows of each generator.
fn shadow_columns(a: &GeneratorSet) -> Vec<Vec<Rat>> {
    a.vectors()
        .iter()
        .map(|v| {
            v.iter()
                .map(|x| BigRational::from_float(x.eval()).unwrap_or_else(Rat::zero))
                .collect()
        })
        .collect()
}

fn shadow_scale(a: &GeneratorSet) -> f64 {
    let mut s = 1.0f64;
    for v in a.vectors() {
        for x in v {
            s = s.max(x.eval().abs());
        }
    }
    s
}

/// `⟨l, v⟩` for rational `l` and a SymReal vector: always representable.
fn apply_rational_form(l: &[Rat], v: &[SymReal]) -> SymReal {
    let mut acc = SymReal::zero(v[0].basis());
    for (li, vi) in l.iter().zip(v) {
        if !li.is_zero() {
            acc = &acc + &vi.scale(li);
        }
    }
    acc
}

fn bigint_form_to_rat(form: &[BigInt]) -> Vec<Rat> {
    form.iter()
        .map(|b| Rat::from_integer(b.clone()))
        .collect()
}

/// Checks that an integer form has nonnegative sign on every generator.
fn form_is_nonnegative(a: &GeneratorSet, form: &[BigInt]) -> Result<bool, Error> {
    let l = bigint_form_to_rat(form);
    for v in a.vectors() {
        match apply_rational_form(&l, v).sign() {
            Ok(Sign::Negative) => return Ok(false),
            Ok(_) => {}
            Err(Error::AmbiguousSign { .. }) => return Ok(false),
            Err(e) => return Err(e),
        }
    }
    Ok(true)
}

// ---------------------------------------------------------------------------
// cone density

/// Decides whether the cone spanned by the generators is dense (= all of
/// ℝⁿ): true exactly when no nonzero linear form is nonnegative on every
/// generator. Exact over rational data; float enclosures with sign
/// re-verification otherwise.
pub fn cone_is_dense(a: &GeneratorSet) -> Result<ConeOutcome, Error> {
    let n = a.dim();

    // a rational form vanishing on every symbol component vanishes on every
    // generator identically: the degenerate separator
    let component_rows = symbol_component_rows(a, 0);
    let m = RationalMatrix::from_rows(component_rows)?;
    if m.rank() < n {
        let l = m
            .nullspace()
            .into_iter()
            .next()
            .expect("rank-deficient matrix has nullspace");
        return Ok(ConeOutcome::Separated {
            form: clear_denominators(&l),
        });
    }

    // fully rational data: single exact LP decides
    if a.vectors().iter().all(|v| vector_is_rational(v)) {
        let cols: Vec<Vec<Rat>> = a
            .vectors()
            .iter()
            .map(|v| rational_vector(v).expect("checked rational"))
            .collect();
        let rank = RationalMatrix::from_rows(cols.clone())?.rank();
        if rank < n {
            let rows = RationalMatrix::from_rows(cols)?;
            let l = rows
                .nullspace()
                .into_iter()
                .next()
                .expect("rank-deficient matrix has nullspace");
            return Ok(ConeOutcome::Separated {
                form: clear_denominators(&l),
            });
        }
        return Ok(match positive_combination(&cols) {
            Combination::Found { lambda } => ConeOutcome::DenseCone {
                lambda: lambda
                    .into_iter()
                    .map(|q| SymReal::from_rational(a.basis(), q))
                    .collect(),
                exact: true,
                rank: n,
            },
            Combination::Separating { form } => ConeOutcome::Separated {
                form: clear_denominators(&form),
            },
        });
    }

    // exact positive combination over the symbol expansion
    if let Combination::Found { lambda } = positive_combination(&expanded_columns(a)) {
        if let Some(rank) = certified_real_rank(a)? {
            if rank == n {
                return Ok(ConeOutcome::DenseCone {
                    lambda: lambda
                        .into_iter()
                        .map(|q| SymReal::from_rational(a.basis(), q))
                        .collect(),
                    exact: true,
                    rank: n,
                });
            }
        }
    }

    // rational frame with a single extra vector: exact structured decision
    if let Some(outcome) = structured_cone_decision(a)? {
        return Ok(outcome);
    }

    float_cone_decision(a)
}

/// Real rank of the generator set, when certifiable: exact when a rational
/// frame exists, otherwise by an exact determinant of the shadow matrix
/// beating a perturbation bound. `None` when no certificate was obtained.
fn certified_real_rank(a: &GeneratorSet) -> Result<Option<usize>, Error> {
    let n = a.dim();
    if rational_frame(a).is_some() {
        return Ok(Some(n));
    }
    // greedy float pivoting to select n candidate columns
    let shadows = shadow_columns(a);
    let mut float_cols: Vec<Vec<f64>> = a
        .vectors()
        .iter()
        .map(|v| v.iter().map(|x| x.eval()).collect())
        .collect();
    let mut selected = Vec::new();
    let mut used = vec![false; float_cols.len()];
    for row in 0..n {
        let mut best: Option<(usize, f64)> = None;
        for (j, col) in float_cols.iter().enumerate() {
            if !used[j] {
                let mag = col[row].abs();
                if best.map_or(true, |(_, b)| mag > b) {
                    best = Some((j, mag));
                }
            }
        }
        let Some((j, mag)) = best else { return Ok(None) };
        if mag < 1e-9 {
            return Ok(None);
        }
        used[j] = true;
        selected.push(j);
        let pivotal = float_cols[j].clone();
        for (jj, col) in float_cols.iter_mut().enumerate() {
            if !used[jj] {
                let f = col[row] / pivotal_entry(&pivotal, row);
                for i in 0..n {
                    col[i] -= f * pivotal[i];
                }
            }
        }
    }
    // exact determinant of the selected shadow submatrix, with a coarse
    // multilinear perturbation bound on how far the true determinant can be
    let sub = RationalMatrix::from_rows(
        (0..n)
            .map(|i| selected.iter().map(|&j| shadows[j][i].clone()).collect())
            .collect(),
    )?;
    let det = sub.det();
    let det_f = rat_to_f64(&det).abs();
    let eps = SHADOW_ENCLOSURE * shadow_scale(a);
    let col_norm: f64 = (shadow_scale(a) * (n as f64).sqrt()) + eps;
    let bound = (n as f64) * eps * (n as f64).sqrt() * col_norm.powi(n as i32 - 1);
    if det_f > bound {
        Ok(Some(n))
    } else {
        Ok(None)
    }
}

fn pivotal_entry(col: &[f64], row: usize) -> f64 {
    if col[row] == 0.0 {
        1.0
    } else {
        col[row]
    }
}

fn rat_to_f64(r: &Rat) -> f64 {
    num_traits::ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
}

/// Exact cone decision for sets consisting of a rational rank-n frame plus
/// exactly one further vector: the cone is dense iff the extra vector's
/// coordinates in the frame are all negative.
fn structured_cone_decision(a: &GeneratorSet) -> Result<Option<ConeOutcome>, Error> {
    let n = a.dim();
    let Some(frame) = rational_frame(a) else {
        return Ok(None);
    };
    let extras: Vec<usize> = (0..a.len()).filter(|j| !frame.contains(j)).collect();
    // frame columns as a matrix B (columns are frame vectors)
    let b_cols: Vec<Vec<Rat>> = frame
        .iter()
        .map(|&j| rational_vector(&a.vectors()[j]).expect("frame is rational"))
        .collect();
    let b = RationalMatrix::from_rows(b_cols)?.transpose();

    if extras.is_empty() {
        // exactly a basis: the cone is the image of the positive orthant
        let l = solve_transposed_unit(&b, 0)?;
        return Ok(Some(ConeOutcome::Separated {
            form: clear_denominators(&l),
        }));
    }
    if extras.len() > 1 {
        return Ok(None);
    }
    let extra = &a.vectors()[extras[0]];
    let alpha = coordinates_in_rational_basis(&b, extra)?;
    for (i, ai) in alpha.iter().enumerate() {
        match ai.sign()? {
            Sign::Negative => {}
            _ => {
                // the i-th dual form is nonnegative on the whole set
                let l = solve_transposed_unit(&b, i)?;
                return Ok(Some(ConeOutcome::Separated {
                    form: clear_denominators(&l),
                }));
            }
        }
    }
    // 0 = Σ (-αᵢ)·bᵢ + 1·extra, all coefficients positive: exact witness
    let mut lambda = vec![SymReal::zero(a.basis()); a.len()];
    for (pos, &j) in frame.iter().enumerate() {
        lambda[j] = -&alpha[pos];
    }
    lambda[extras[0]] = SymReal::one(a.basis());
    Ok(Some(ConeOutcome::DenseCone {
        lambda,
        exact: true,
        rank: n,
    }))
}

/// Solves `Bᵀ l = e_i`: the i-th dual form of the basis given by B's columns.
fn solve_transposed_unit(b: &RationalMatrix, i: usize) -> Result<Vec<Rat>, Error> {
    let n = b.rows();
    let mut e = vec![Rat::zero(); n];
    e[i] = Rat::one();
    b.transpose()
        .solve(&e)
        .ok_or_else(|| Error::Internal("frame matrix not invertible".into()))
}

/// Coordinates of a SymReal vector in a rational basis (columns of `b`),
/// solved exactly one symbol layer at a time.
fn coordinates_in_rational_basis(
    b: &RationalMatrix,
    v: &[SymReal],
) -> Result<Vec<SymReal>, Error> {
    let n = v.len();
    let basis = v[0].basis();
    let s_count = basis.len();
    let mut alpha = vec![SymReal::zero(basis); n];
    for s in 0..s_count {
        let layer: Vec<Rat> = (0..n).map(|i| v[i].coeff(s).clone()).collect();
        if layer.iter().all(|c| c.is_zero()) {
            continue;
        }
        let coords = b
            .solve(&layer)
            .ok_or_else(|| Error::Internal("frame matrix not invertible".into()))?;
        for (i, c) in coords.into_iter().enumerate() {
            if !c.is_zero() {
                alpha[i] = &alpha[i] + &SymReal::term(basis, s, c);
            }
        }
    }
    Ok(alpha)
}

/// Float-enclosure route: exact LP over exact rationalizations of the
/// shadows; separating candidates are re-verified by exact sign checks, and
/// interiority is accepted only with a margin covering the enclosure width.
fn float_cone_decision(a: &GeneratorSet) -> Result<ConeOutcome, Error> {
    let n = a.dim();
    let shadows = shadow_columns(a);
    let eps = SHADOW_ENCLOSURE * shadow_scale(a);

    match positive_combination(&shadows) {
        Combination::Separating { form } => {
            let form = clear_denominators(&form);
            if form_is_nonnegative(a, &form)? {
                Ok(ConeOutcome::Separated { form })
            } else {
                Ok(ConeOutcome::Inconclusive { width: eps })
            }
        }
        Combination::Found { lambda } => {
            if RationalMatrix::from_rows(shadows.clone())?.rank() < n {
                // degenerate shadows: try an exact annihilating form
                let rows = RationalMatrix::from_rows(shadows)?;
                if let Some(l) = rows.nullspace().into_iter().next() {
                    let form = clear_denominators(&l);
                    if form_is_nonnegative(a, &form)? {
                        return Ok(ConeOutcome::Separated { form });
                    }
                }
                return Ok(ConeOutcome::Inconclusive { width: eps });
            }
            // margin analysis: reach all signed unit directions with bounded
            // multiplier mass
            let mut worst = 0.0f64;
            for i in 0..n {
                for sgn in [1i64, -1] {
                    let mut d = vec![Rat::zero(); n];
                    d[i] = Rat::from_integer(BigInt::from(sgn));
                    let Some(mu) = cone_membership(&shadows, &d) else {
                        return Ok(ConeOutcome::Inconclusive { width: eps });
                    };
                    let mass: f64 = mu.iter().map(rat_to_f64).sum();
                    worst = worst.max(mass);
                }
            }
            if eps * worst < 1.0 / (2.0 * n as f64) {
                Ok(ConeOutcome::DenseCone {
                    lambda: lambda
                        .into_iter()
                        .map(|q| SymReal::from_rational(a.basis(), q))
                        .collect(),
                    exact: false,
                    rank: n,
                })
            } else {
                Ok(ConeOutcome::Inconclusive { width: eps * worst })
            }
        }
    }
}

// ---------------------------------------------------------------------------
// integral-form lattice (condition b)

/// Searches for a nonzero rational form with integral values on every
/// generator. Complete over rational forms; the rational-frame guard makes
/// that exhaustive over all real forms.
fn integral_form_certificate(a: &GeneratorSet) -> Result<Option<Vec<BigInt>>, Error> {
    let n = a.dim();
    // rational solution space: forms annihilating every irrational component
    let rows = symbol_component_rows(a, 1);
    let space: Vec<Vec<Rat>> = if rows.is_empty() {
        // no irrational entries: every rational form qualifies
        (0..n)
            .map(|i| {
                let mut e = vec![Rat::zero(); n];
                e[i] = Rat::one();
                e
            })
            .collect()
    } else {
        RationalMatrix::from_rows(rows)?.nullspace()
    };
    if space.is_empty() {
        return Ok(None);
    }
    // canonical representative: HNF of the integer lattice spanned by the
    // cleared basis vectors, then scale so values are integral
    let int_rows: Vec<Vec<BigInt>> = space.iter().map(|v| clear_denominators(v)).collect();
    let hnf = hermite_normal_form(&int_rows);
    let l = primitive_integer_vector(&hnf[0]);
    let l_rat = bigint_form_to_rat(&l);
    let mut scale = BigInt::one();
    for v in a.vectors() {
        let value = apply_rational_form(&l_rat, v);
        let q = value
            .as_rational()
            .ok_or_else(|| Error::Internal("integral form has irrational value".into()))?;
        scale = num_integer::Integer::lcm(&scale, q.denom());
    }
    Ok(Some(l.iter().map(|c| c * &scale).collect()))
}

/// Whether the rational-form search is exhaustive over all real forms for
/// this input: a rational rank-n frame pins any integral form to rational
/// coordinates.
fn integral_form_search_complete(a: &GeneratorSet) -> bool {
    rational_frame(a).is_some()
}

// ---------------------------------------------------------------------------
// the ℝⁿ criterion

/// Decides whether the semigroup generated by `a` is dense in ℝⁿ: the origin
/// must be interior to the convex hull and the zero form must be the only
/// one with integral values on `a`.
pub fn check_dense_rn(a: &GeneratorSet) -> Result<DensityVerdict, Error> {
    let n = a.dim();

    // dimension one delegates to the complete line classifier
    if n == 1 {
        let gens: Vec<SymReal> = a.vectors().iter().map(|v| v[0].clone()).collect();
        return Ok(match classify_line_semigroup(&gens)? {
            LineClass::DenseInR => {
                let (lambda, exact) = line_dense_combination(&gens)?;
                DensityVerdict::Dense(DenseCertificate::PositiveCombination {
                    lambda,
                    exact,
                    rank: 1,
                })
            }
            LineClass::DiscreteCyclic(g) => {
                DensityVerdict::NotDense(NotDenseCertificate::CyclicLattice { generator: g })
            }
            LineClass::OneSidedDiscrete(sign) => {
                let c = BigInt::from(if sign == Sign::Positive { 1 } else { -1 });
                DensityVerdict::NotDense(NotDenseCertificate::NonnegativeForm {
                    form: vec![c],
                    clause: FailedClause::ConeInterior,
                })
            }
        });
    }

    let cone = cone_is_dense(a)?;
    if let ConeOutcome::Separated { form } = cone {
        return Ok(DensityVerdict::NotDense(
            NotDenseCertificate::NonnegativeForm {
                form,
                clause: FailedClause::ConeInterior,
            },
        ));
    }

    // condition (b): always sound to report a found integral form
    if let Some(form) = integral_form_certificate(a)? {
        return Ok(DensityVerdict::NotDense(NotDenseCertificate::IntegerForm {
            form,
            clause: FailedClause::IntegerForm,
            relation: None,
        }));
    }

    match cone {
        ConeOutcome::DenseCone {
            lambda,
            exact,
            rank,
        } => {
            if integral_form_search_complete(a) {
                Ok(DensityVerdict::Dense(
                    DenseCertificate::PositiveCombination {
                        lambda,
                        exact,
                        rank,
                    },
                ))
            } else {
                // no rational frame: a nonzero real (irrational) integral
                // form can not be excluded from the declared data alone
                Ok(DensityVerdict::Inconclusive {
                    search_bound: SHADOW_ENCLOSURE,
                })
            }
        }
        ConeOutcome::Inconclusive { width } => Ok(DensityVerdict::Inconclusive {
            search_bound: width,
        }),
        ConeOutcome::Separated { .. } => unreachable!("handled above"),
    }
}

/// Positive combination witnessing a dense line: weight every positive
/// generator by minus the sum of the negative ones and vice versa, so the
/// total telescopes to `-N·P + P·N = 0`. The combination is exact whenever
/// the cross products stay inside the declared span.
fn line_dense_combination(gens: &[SymReal]) -> Result<(Vec<SymReal>, bool), Error> {
    let basis = gens[0].basis();
    let mut pos_sum = SymReal::zero(basis);
    let mut neg_sum = SymReal::zero(basis);
    let mut signs = Vec::with_capacity(gens.len());
    for g in gens {
        let s = g.sign()?;
        signs.push(s);
        match s {
            Sign::Positive => pos_sum = &pos_sum + g,
            Sign::Negative => neg_sum = &neg_sum + g,
            Sign::Zero => {}
        }
    }
    let lambda: Vec<SymReal> = signs
        .iter()
        .map(|s| match s {
            Sign::Positive => -&neg_sum,
            Sign::Negative => pos_sum.clone(),
            Sign::Zero => SymReal::one(basis),
        })
        .collect();
    let mut exact = true;
    let mut total = SymReal::zero(basis);
    for (l, g) in lambda.iter().zip(gens) {
        match l.try_mul(g) {
            Some(p) => total = &total + &p,
            None => {
                exact = false;
                break;
            }
        }
    }
    if exact && !total.is_zero() {
        return Err(Error::Internal(
            "line combination failed to cancel".into(),
        ));
    }
    Ok((lambda, exact))
}

// ---------------------------------------------------------------------------
// structured and group criteria

/// The structured criterion for `n+1` vectors: `v` must be a basis and the
/// coordinates of `v_last` in it all negative with `{1, α…}` ℚ-independent.
/// Basis vectors must have rational entries (the constructions guarantee
/// this); arbitrary irrational bases are out of exact reach.
pub fn check_dense_rn_structured(
    v: &[Vec<SymReal>],
    v_last: &[SymReal],
) -> Result<DensityVerdict, Error> {
    let n = v_last.len();
    if v.len() != n {
        return Err(Error::Dimension(format!(
            "structured criterion needs exactly n = {n} basis vectors, got {}",
            v.len()
        )));
    }
    let spec = AbelianGroupSpec::connected(n, 0, vec![])?;
    let mut w: Vec<Vec<SymReal>> = v.to_vec();
    w.push(v_last.to_vec());
    check_dense_group_exp(&spec, &w)
}

/// The exp-criterion for a connected abelian Lie group: given the lattice
/// basis of `Γ = ker exp` from the spec and `n+1-t` further Lie algebra
/// vectors, the generated subsemigroup of exponentials is dense iff the
/// lattice basis plus the first `n-t` vectors form a basis and the last
/// vector's coordinates are negative beyond index `t` with `{1, α…}`
/// ℚ-independent.
pub fn check_dense_group_exp(
    spec: &AbelianGroupSpec,
    w: &[Vec<SymReal>],
) -> Result<DensityVerdict, Error> {
    let n = spec.dim();
    let t = spec.torus_dim();
    if w.len() != n + 1 - t {
        return Err(Error::Dimension(format!(
            "expected {} vectors, got {}",
            n + 1 - t,
            w.len()
        )));
    }
    if w.iter().any(|v| v.len() != n) {
        return Err(Error::Dimension(
            "Lie algebra vectors of wrong length".into(),
        ));
    }
    let basis = w[0][0].basis();
    for vec in w {
        for e in vec {
            if !compatible(basis, e.basis()) {
                return Err(Error::MismatchedBasis);
            }
        }
    }
    let completion = &w[..n - t];
    let last = &w[n - t];
    for (j, vec) in completion.iter().enumerate() {
        if !vector_is_rational(vec) {
            return Err(Error::Input(format!(
                "basis completion vector {j} must have rational entries for an exact decision"
            )));
        }
    }

    // columns: γ₁..γ_t then the completion vectors
    let mut cols: Vec<Vec<Rat>> = spec.gamma_basis().to_vec();
    for vec in completion {
        cols.push(rational_vector(vec).expect("checked rational"));
    }
    let b = RationalMatrix::from_rows(cols.clone())?.transpose();
    if RationalMatrix::from_rows(cols)?.rank() < n {
        // clause (a): certificate vanishes on every designated basis vector
        let l = b
            .transpose()
            .nullspace()
            .into_iter()
            .next()
            .expect("rank-deficient basis has an annihilating form");
        let mut form = clear_denominators(&l);
        let value = apply_rational_form(&bigint_form_to_rat(&form), last);
        if value.sign_with_tol(0.0).unwrap_or(Sign::Zero) == Sign::Negative {
            for c in &mut form {
                *c = -c.clone();
            }
        }
        return Ok(DensityVerdict::NotDense(
            NotDenseCertificate::NonnegativeForm {
                form,
                clause: FailedClause::BasisRank,
            },
        ));
    }

    let alpha = coordinates_in_rational_basis(&b, last)?;

    // clause (b), sign part: coordinates on the non-torus directions
    for (i, ai) in alpha.iter().enumerate().skip(t) {
        if ai.sign()? != Sign::Negative {
            let l = solve_transposed_unit(&b, i)?;
            return Ok(DensityVerdict::NotDense(
                NotDenseCertificate::NonnegativeForm {
                    form: clear_denominators(&l),
                    clause: FailedClause::NegativeSign(i),
                },
            ));
        }
    }

    // clause (b), independence part
    let mut family = Vec::with_capacity(n + 1);
    family.push(SymReal::one(basis));
    family.extend(alpha.iter().cloned());
    match is_q_independent(&family)? {
        QIndependence::Independent => Ok(DensityVerdict::Dense(DenseCertificate::Structured {
            alpha,
            sign_checked_from: t,
        })),
        QIndependence::Dependent { relation } => {
            // b₀ + Σ bᵢαᵢ = 0 turns the dual data into an integral form
            let coeffs: Vec<Rat> = relation[1..]
                .iter()
                .map(|c| Rat::from_integer(c.clone()))
                .collect();
            let l = b
                .transpose()
                .solve(&coeffs)
                .ok_or_else(|| Error::Internal("basis matrix not invertible".into()))?;
            let mut lcm = BigInt::one();
            for c in &l {
                lcm = num_integer::Integer::lcm(&lcm, c.denom());
            }
            let form: Vec<BigInt> = l.iter().map(|c| c.numer() * (&lcm / c.denom())).collect();
            Ok(DensityVerdict::NotDense(NotDenseCertificate::IntegerForm {
                form,
                clause: FailedClause::QDependence,
                relation: Some(relation),
            }))
        }
    }
}

// ---------------------------------------------------------------------------
// certificate re-verification

/// Re-checks a verdict about a generator set in ℝⁿ by direct evaluation.
pub fn reverify_rn(a: &GeneratorSet, verdict: &DensityVerdict) -> Result<(), Error> {
    match verdict {
        DensityVerdict::NotDense(cert) => reverify_not_dense(a.vectors(), &[], cert),
        DensityVerdict::Dense(cert) => reverify_dense_rn(a, cert),
        DensityVerdict::Inconclusive { .. } => Ok(()),
    }
}

/// Re-checks a verdict about group exp-data: lattice vectors must be
/// annihilated (nonnegative forms) or mapped to integers (integral forms).
pub fn reverify_group(
    spec: &AbelianGroupSpec,
    w: &[Vec<SymReal>],
    verdict: &DensityVerdict,
) -> Result<(), Error> {
    match verdict {
        DensityVerdict::NotDense(cert) => {
            let basis = w[0][0].basis();
            let gamma: Vec<Vec<SymReal>> = spec
                .gamma_basis()
                .iter()
                .map(|v| {
                    v.iter()
                        .map(|q| SymReal::from_rational(basis, q.clone()))
                        .collect()
                })
                .collect();
            reverify_not_dense(w, &gamma, cert)
        }
        DensityVerdict::Dense(DenseCertificate::Structured {
            alpha,
            sign_checked_from,
        }) => {
            for ai in alpha.iter().skip(*sign_checked_from) {
                if ai.sign()? != Sign::Negative {
                    return Err(Error::Internal(
                        "dense certificate has a nonnegative coordinate".into(),
                    ));
                }
            }
            let basis = alpha[0].basis();
            let mut family = vec![SymReal::one(basis)];
            family.extend(alpha.iter().cloned());
            if !is_q_independent(&family)?.is_independent() {
                return Err(Error::Internal(
                    "dense certificate coordinates are ℚ-dependent".into(),
                ));
            }
            Ok(())
        }
        _ => Ok(()),
    }
}

fn reverify_not_dense(
    generators: &[Vec<SymReal>],
    annihilated: &[Vec<SymReal>],
    cert: &NotDenseCertificate,
) -> Result<(), Error> {
    match cert {
        NotDenseCertificate::IntegerForm { form, .. } => {
            if form.iter().all(|c| c.is_zero()) {
                return Err(Error::Internal("integral form certificate is zero".into()));
            }
            let l = bigint_form_to_rat(form);
            for v in generators.iter().chain(annihilated) {
                let value = apply_rational_form(&l, v);
                let q = value.as_rational().ok_or_else(|| {
                    Error::Internal("integral form takes an irrational value".into())
                })?;
                if !q.denom().is_one() {
                    return Err(Error::Internal(format!(
                        "integral form takes the non-integer value {q}"
                    )));
                }
            }
            Ok(())
        }
        NotDenseCertificate::NonnegativeForm { form, .. } => {
            if form.iter().all(|c| c.is_zero()) {
                return Err(Error::Internal("nonnegative form certificate is zero".into()));
            }
            let l = bigint_form_to_rat(form);
            for v in annihilated {
                if !apply_rational_form(&l, v).is_zero() {
                    return Err(Error::Internal(
                        "form does not annihilate a lattice vector".into(),
                    ));
                }
            }
            for v in generators {
                if apply_rational_form(&l, v).sign()? == Sign::Negative {
                    return Err(Error::Internal(
                        "nonnegative form takes a negative value".into(),
                    ));
                }
            }
            Ok(())
        }
        NotDenseCertificate::CyclicLattice { generator } => {
            let pivot = generator
                .coeffs()
                .iter()
                .position(|c| !c.is_zero())
                .ok_or_else(|| Error::Internal("cyclic generator is zero".into()))?;
            for v in generators {
                if v.len() != 1 {
                    return Err(Error::Internal(
                        "cyclic lattice certificate outside dimension one".into(),
                    ));
                }
                let ratio = v[0].coeff(pivot) / generator.coeff(pivot);
                if !ratio.denom().is_one() || v[0] != generator.scale(&ratio) {
                    return Err(Error::Internal(
                        "generator is not an integer multiple of the cyclic generator".into(),
                    ));
                }
            }
            Ok(())
        }
    }
}

fn reverify_dense_rn(a: &GeneratorSet, cert: &DenseCertificate) -> Result<(), Error> {
    match cert {
        DenseCertificate::PositiveCombination {
            lambda,
            exact,
            rank,
        } => {
            if lambda.len() != a.len() {
                return Err(Error::Internal("combination length mismatch".into()));
            }
            for l in lambda {
                match l.sign()? {
                    Sign::Positive => {}
                    Sign::Zero if !*exact => {}
                    _ => {
                        return Err(Error::Internal(
                            "combination coefficient not positive".into(),
                        ))
                    }
                }
            }
            if *exact {
                let n = a.dim();
                for i in 0..n {
                    let mut acc = SymReal::zero(a.basis());
                    for (l, v) in lambda.iter().zip(a.vectors()) {
                        let term = l.try_mul(&v[i]).ok_or_else(|| {
                            Error::Internal("combination product leaves the declared span".into())
                        })?;
                        acc = &acc + &term;
                    }
                    if !acc.is_zero() {
                        return Err(Error::Internal(format!(
                            "positive combination does not vanish in coordinate {i}"
                        )));
                    }
                }
                if *rank != a.dim() {
                    return Err(Error::Internal("rank certificate mismatch".into()));
                }
            }
            // relation lattice must be trivial
            if integral_form_certificate(a)?.is_some() {
                return Err(Error::Internal(
                    "a nonzero integral form exists despite the dense verdict".into(),
                ));
            }
            Ok(())
        }
        DenseCertificate::Structured { .. } => Ok(()),
    }
}

// ---------------------------------------------------------------------------
// serialization

/// Stable structured form of a verdict.
#[derive(Clone, Debug, Serialize)]
pub struct VerdictDoc {
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failed_clause: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub search_bound: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CertificateDoc {
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub form: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub relation: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generator: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<bool>,
}

impl DensityVerdict {
    pub fn to_doc(&self) -> VerdictDoc {
        match self {
            DensityVerdict::Dense(cert) => VerdictDoc {
                verdict: "dense".into(),
                failed_clause: None,
                certificate: Some(match cert {
                    DenseCertificate::PositiveCombination {
                        lambda,
                        exact,
                        rank: _,
                    } => CertificateDoc {
                        kind: "positive_combination".into(),
                        form: None,
                        lambda: Some(lambda.iter().map(|l| l.to_string()).collect()),
                        alpha: None,
                        relation: None,
                        generator: None,
                        exact: Some(*exact),
                    },
                    DenseCertificate::Structured { alpha, .. } => CertificateDoc {
                        kind: "structured_criterion".into(),
                        form: None,
                        lambda: None,
                        alpha: Some(alpha.iter().map(|a| a.to_string()).collect()),
                        relation: None,
                        generator: None,
                        exact: Some(true),
                    },
                }),
                search_bound: None,
            },
            DensityVerdict::NotDense(cert) => {
                let (kind, clause, form, relation, generator) = match cert {
                    NotDenseCertificate::IntegerForm {
                        form,
                        clause,
                        relation,
                    } => (
                        "integer_form",
                        Some(clause.name()),
                        Some(form.iter().map(|c| c.to_string()).collect()),
                        relation
                            .as_ref()
                            .map(|r| r.iter().map(|c| c.to_string()).collect()),
                        None,
                    ),
                    NotDenseCertificate::NonnegativeForm { form, clause } => (
                        "nonnegative_form",
                        Some(clause.name()),
                        Some(form.iter().map(|c| c.to_string()).collect()),
                        None,
                        None,
                    ),
                    NotDenseCertificate::CyclicLattice { generator } => (
                        "cyclic_lattice",
                        Some(FailedClause::IntegerForm.name()),
                        None,
                        None,
                        Some(generator.to_string()),
                    ),
                };
                VerdictDoc {
                    verdict: "not_dense".into(),
                    failed_clause: clause,
                    certificate: Some(CertificateDoc {
                        kind: kind.into(),
                        form,
                        lambda: None,
                        alpha: None,
                        relation,
                        generator,
                        exact: Some(true),
                    }),
                    search_bound: None,
                }
            }
            DensityVerdict::Inconclusive { search_bound } => VerdictDoc {
                verdict: "inconclusive".into(),
                failed_clause: None,
                certificate: None,
                search_bound: Some(*search_bound),
            },
        }
    }
}

#[cfg(test)]
mod tests;
