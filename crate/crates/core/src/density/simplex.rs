//! Exact rational phase-1 simplex with Farkas certificates.
//!
//! Decides feasibility of `{x ≥ 0 : Ax = b}` over the rationals. Bland's
//! rule guarantees termination; everything is exact, so an infeasibility
//! certificate `y` satisfies `yᵀA ≤ 0` and `yᵀb > 0` identically.

use num_traits::{One, Signed, Zero};

use crate::exactreal::{Rat, RationalMatrix};

/// Outcome of a feasibility run.
#[derive(Clone, Debug)]
pub enum Phase1 {
    Feasible(Vec<Rat>),
    /// Farkas certificate: `yᵀA ≤ 0` componentwise and `yᵀb > 0`.
    Infeasible { farkas: Vec<Rat> },
}

/// Decides `∃ x ≥ 0 : A x = b` exactly.
pub fn solve_eq_nonneg(a: &RationalMatrix, b: &[Rat]) -> Phase1 {
    let m = a.rows();
    let k = a.cols();
    assert_eq!(b.len(), m);

    // flip rows so the right-hand side is nonnegative
    let flip: Vec<bool> = b.iter().map(|v| v.is_negative()).collect();
    let cols = k + m + 1;
    let rhs = cols - 1;
    let mut t = vec![vec![Rat::zero(); cols]; m];
    for i in 0..m {
        let s = if flip[i] { -Rat::one() } else { Rat::one() };
        for j in 0..k {
            t[i][j] = &a[(i, j)] * &s;
        }
        t[i][k + i] = Rat::one();
        t[i][rhs] = &b[i] * &s;
    }
    let mut basis: Vec<usize> = (k..k + m).collect();
    let cost = |j: usize| -> Rat {
        if j >= k {
            Rat::one()
        } else {
            Rat::zero()
        }
    };

    loop {
        // reduced costs rc_j = c_j - Σ_i c_{basis(i)} t[i][j]
        let mut entering = None;
        for j in 0..cols - 1 {
            let mut rc = cost(j);
            for i in 0..m {
                if !cost(basis[i]).is_zero() && !t[i][j].is_zero() {
                    rc -= &cost(basis[i]) * &t[i][j];
                }
            }
            if rc.is_negative() {
                entering = Some(j);
                break; // Bland: lowest index
            }
        }
        let Some(e) = entering else { break };

        // ratio test, ties broken by lowest basic variable index (Bland)
        let mut leave: Option<(usize, Rat)> = None;
        for i in 0..m {
            if t[i][e].is_positive() {
                let ratio = &t[i][rhs] / &t[i][e];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let (l, _) = leave.expect("phase-1 objective is bounded; a pivot row must exist");

        // pivot on (l, e)
        let p = t[l][e].clone();
        for j in 0..cols {
            t[l][j] /= &p;
        }
        for i in 0..m {
            if i != l && !t[i][e].is_zero() {
                let f = t[i][e].clone();
                for j in 0..cols {
                    let sub = &f * &t[l][j];
                    t[i][j] -= sub;
                }
            }
        }
        basis[l] = e;
    }

    let optimum: Rat = (0..m)
        .filter(|&i| basis[i] >= k)
        .map(|i| t[i][rhs].clone())
        .sum();

    if optimum.is_zero() {
        let mut x = vec![Rat::zero(); k];
        for i in 0..m {
            if basis[i] < k {
                x[basis[i]] = t[i][rhs].clone();
            }
        }
        debug_assert!({
            (0..m).all(|i| {
                let lhs: Rat = (0..k).map(|j| &a[(i, j)] * &x[j]).sum();
                lhs == b[i]
            })
        });
        Phase1::Feasible(x)
    } else {
        // y = c_B B⁻¹, read off the artificial block which holds B⁻¹
        let mut y = vec![Rat::zero(); m];
        for (j, yj) in y.iter_mut().enumerate() {
            for i in 0..m {
                if basis[i] >= k {
                    *yj += &t[i][k + j];
                }
            }
            if flip[j] {
                *yj = -yj.clone();
            }
        }
        debug_assert!({
            let ytb: Rat = (0..m).map(|i| &y[i] * &b[i]).sum();
            ytb.is_positive()
                && (0..k).all(|j| {
                    let yta: Rat = (0..m).map(|i| &y[i] * &a[(i, j)]).sum();
                    !yta.is_positive()
                })
        });
        Phase1::Infeasible { farkas: y }
    }
}

/// Outcome of a strictly-positive combination search over column vectors.
#[derive(Clone, Debug)]
pub enum Combination {
    /// `Σ λⱼ vⱼ = 0` with every `λⱼ ≥ 1`.
    Found { lambda: Vec<Rat> },
    /// A form with `⟨l, vⱼ⟩ ≥ 0` for all `j`, strictly positive for some `j`.
    Separating { form: Vec<Rat> },
}

/// Searches for rationals `λⱼ ≥ 1` with `Σ λⱼ vⱼ = 0`; on failure returns
/// the Farkas separating form.
pub fn positive_combination(columns: &[Vec<Rat>]) -> Combination {
    let k = columns.len();
    let dim = columns.first().map_or(0, |c| c.len());
    let mut a = RationalMatrix::zeros(dim, k);
    let mut b = vec![Rat::zero(); dim];
    for (j, col) in columns.iter().enumerate() {
        assert_eq!(col.len(), dim);
        for i in 0..dim {
            a[(i, j)] = col[i].clone();
            b[i] -= &col[i]; // rhs = -Σ columns  (λ = 1 + µ substitution)
        }
    }
    match solve_eq_nonneg(&a, &b) {
        Phase1::Feasible(mu) => Combination::Found {
            lambda: mu.into_iter().map(|m| m + Rat::one()).collect(),
        },
        Phase1::Infeasible { farkas } => Combination::Separating {
            form: farkas.into_iter().map(|y| -y).collect(),
        },
    }
}

/// Decides `∃ µ ≥ 0 : Σ µⱼ vⱼ = d`, returning the multipliers.
pub fn cone_membership(columns: &[Vec<Rat>], d: &[Rat]) -> Option<Vec<Rat>> {
    let k = columns.len();
    let dim = d.len();
    let mut a = RationalMatrix::zeros(dim, k);
    for (j, col) in columns.iter().enumerate() {
        assert_eq!(col.len(), dim);
        for i in 0..dim {
            a[(i, j)] = col[i].clone();
        }
    }
    match solve_eq_nonneg(&a, d) {
        Phase1::Feasible(mu) => Some(mu),
        Phase1::Infeasible { .. } => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactreal::rat_int;

    fn cols(v: &[&[i64]]) -> Vec<Vec<Rat>> {
        v.iter()
            .map(|c| c.iter().map(|&x| rat_int(x)).collect())
            .collect()
    }

    #[test]
    fn simplex_symmetric_triangle() {
        match positive_combination(&cols(&[&[1, 0], &[0, 1], &[-1, -1]])) {
            Combination::Found { lambda } => {
                assert_eq!(lambda.len(), 3);
                for l in &lambda {
                    assert!(*l >= rat_int(1));
                }
            }
            _ => panic!("expected positive combination"),
        }
    }

    #[test]
    fn simplex_one_sided() {
        match positive_combination(&cols(&[&[1, 0], &[0, 1], &[1, 1]])) {
            Combination::Separating { form } => {
                // l(v_j) ≥ 0 for all j, strict somewhere
                let vs = cols(&[&[1, 0], &[0, 1], &[1, 1]]);
                let mut strict = false;
                for v in &vs {
                    let val: Rat = form.iter().zip(v).map(|(a, b)| a * b).sum();
                    assert!(!val.is_negative());
                    strict |= val.is_positive();
                }
                assert!(strict);
            }
            _ => panic!("expected separating form"),
        }
    }

    #[test]
    fn membership() {
        let c = cols(&[&[1, 0], &[0, 1], &[-1, -1]]);
        assert!(cone_membership(&c, &[rat_int(-3), rat_int(5)]).is_some());
        let half = cols(&[&[1, 0], &[0, 1]]);
        assert!(cone_membership(&half, &[rat_int(-1), rat_int(0)]).is_none());
    }
}
