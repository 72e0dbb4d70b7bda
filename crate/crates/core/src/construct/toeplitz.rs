//! The backward shift, Toeplitz recognition through three independent
//! predicates, and exact exponentials of upper-triangular Toeplitz matrices.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;

use super::matrix::SymMatrix;
use crate::exactreal::{rat_int, with_opaque_symbol, Rat, SymReal, SymbolBasis};
use crate::Error;

/// The nilpotent backward shift: `σ e_i = e_{i-1}`, `σ e_1 = 0`; as a matrix
/// the single superdiagonal of ones.
pub fn backward_shift(basis: &Arc<SymbolBasis>, n: usize) -> SymMatrix {
    let mut m = SymMatrix::zero(basis, n);
    for i in 0..n.saturating_sub(1) {
        *m.get_mut(i, i + 1) = SymReal::one(basis);
    }
    m
}

/// Builds the upper-triangular Toeplitz matrix with the given diagonal
/// profile: entry `(i, j) = profile[j - i]` for `j ≥ i`.
pub fn toeplitz_matrix(profile: &[SymReal]) -> SymMatrix {
    let n = profile.len();
    let basis = profile[0].basis();
    SymMatrix::from_fn(n, |i, j| {
        if j >= i {
            profile[j - i].clone()
        } else {
            SymReal::zero(basis)
        }
    })
}

/// The three equivalent Toeplitz characterizations, evaluated independently:
/// commuting with the shift, decomposing as a polynomial in the shift, and
/// the entry pattern (constant superdiagonals, zero below the diagonal).
pub fn toeplitz_predicates(m: &SymMatrix) -> (bool, bool, bool) {
    let n = m.size();
    let basis = m.basis();
    let sigma = backward_shift(basis, n);

    let commutes = match (sigma.try_mul(m), m.try_mul(&sigma)) {
        (Some(sm), Some(ms)) => sm.sub(&ms).is_zero(),
        _ => unreachable!("products with a 0/1 matrix are always representable"),
    };

    let polynomial = {
        let profile: Vec<SymReal> = (0..n).map(|k| m.get(0, k).clone()).collect();
        toeplitz_matrix(&profile) == *m
    };

    let pattern = {
        let mut ok = true;
        for i in 0..n {
            for j in 0..n {
                if i > j && !m.get(i, j).is_zero() {
                    ok = false;
                }
                if i + 1 < n && j + 1 < n && m.get(i + 1, j + 1) != m.get(i, j) {
                    ok = false;
                }
            }
        }
        ok
    };

    (commutes, polynomial, pattern)
}

/// Whether the matrix is upper-triangular Toeplitz, requiring the three
/// predicates to agree.
pub fn is_toeplitz(m: &SymMatrix) -> Result<bool, Error> {
    let (a, b, c) = toeplitz_predicates(m);
    if a != b || b != c {
        return Err(Error::Internal(format!(
            "Toeplitz predicates disagree: commutes={a}, polynomial={b}, pattern={c}"
        )));
    }
    Ok(a)
}

/// Result of a Toeplitz exponential: the diagonal profile of `exp`, over a
/// basis possibly extended by minted symbols.
#[derive(Clone, Debug)]
pub struct ToeplitzExp {
    pub basis: Arc<SymbolBasis>,
    pub profile: Vec<SymReal>,
}

impl ToeplitzExp {
    pub fn matrix(&self) -> SymMatrix {
        toeplitz_matrix(&self.profile)
    }
}

/// `exp(c₀·I + N)` with `N = Σ_{k≥1} c_k σᵏ` nilpotent: the nilpotent factor
/// is the finite series `Σ Nᵏ/k!`, computed exactly whenever the entry
/// products stay in the declared span; the scalar `exp(c₀)` is carried as a
/// fresh positive symbol when `c₀ ≠ 0`. Slots whose exact value leaves the
/// span are minted as opaque symbols named `<tag>_c<k>`.
pub fn exp_toeplitz(profile: &[SymReal], tag: &str) -> Result<ToeplitzExp, Error> {
    let n = profile.len();
    if n == 0 {
        return Err(Error::Input("empty Toeplitz profile".into()));
    }
    let basis = profile[0].basis();
    let c0 = &profile[0];

    // nilpotent factor: series over shift degrees 1..n-1
    let nil: Vec<SymReal> = profile[1..].to_vec();
    let exact_nil = nilpotent_exp_exact(basis, &nil);

    // scalar factor
    let (mut out_basis, scalar) = if c0.is_zero() {
        (Arc::clone(basis), None)
    } else {
        let name = format!("exp_{}", sanitize(&c0.to_string()));
        let (wider, idx) = with_opaque_symbol(basis, &name, c0.eval().exp())?;
        (wider, Some(idx))
    };

    let mut out = Vec::with_capacity(n);
    match scalar {
        None => match exact_nil {
            Some(p) => {
                out = p;
            }
            None => {
                let floats = nilpotent_exp_float(&nil);
                out.push(SymReal::one(&out_basis));
                for (k, v) in floats.iter().enumerate().skip(1) {
                    let (b2, x) = mint_value(&out_basis, tag, k, *v)?;
                    out_basis = b2;
                    out.push(x);
                }
            }
        },
        Some(sidx) => {
            let s = SymReal::term(&out_basis, sidx, Rat::one());
            let exact = exact_nil
                .map(|p| {
                    p.iter()
                        .map(|x| x.extended_to(&out_basis))
                        .collect::<Result<Vec<_>, _>>()
                })
                .transpose()?;
            let floats = nilpotent_exp_float(&nil);
            let scalar_f = c0.eval().exp();
            out.push(s.clone());
            for k in 1..n {
                let exact_slot = exact.as_ref().and_then(|p| s.try_mul(&p[k]));
                match exact_slot {
                    Some(x) => out.push(x),
                    None => {
                        let (b2, x) = mint_value(&out_basis, tag, k, scalar_f * floats[k])?;
                        out_basis = b2;
                        out.push(x);
                    }
                }
            }
        }
    }
    // everything over the final basis
    let profile = out
        .into_iter()
        .map(|x| x.extended_to(&out_basis))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ToeplitzExp {
        basis: out_basis,
        profile,
    })
}

/// `Σ Nᵏ/k!` as a shift-degree profile `(1, p₁, …, p_{n-1})`, or `None` when
/// a product leaves the declared span.
fn nilpotent_exp_exact(basis: &Arc<SymbolBasis>, nil: &[SymReal]) -> Option<Vec<SymReal>> {
    let deg = nil.len(); // shift degrees 1..deg
    let mut total = vec![SymReal::zero(basis); deg + 1];
    total[0] = SymReal::one(basis);
    let mut power: Vec<SymReal> = nil.to_vec(); // N^j over degrees j..deg
    let mut factorial = BigInt::one();
    for j in 1..=deg {
        factorial *= BigInt::from(j as i64);
        let inv = Rat::new(BigInt::one(), factorial.clone());
        for (offset, v) in power.iter().enumerate() {
            let k = j + offset;
            if k <= deg {
                total[k] = &total[k] + &v.scale(&inv);
            }
        }
        if j == deg {
            break;
        }
        // next power: one more convolution with N
        let mut next = vec![SymReal::zero(basis); deg.saturating_sub(j + 1) + 1];
        let mut any = false;
        for (o1, a) in power.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (o2, b) in nil.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let k = (j + o1) + (1 + o2);
                if k <= deg {
                    let prod = a.try_mul(b)?;
                    next[k - (j + 1)] = &next[k - (j + 1)] + &prod;
                    any = true;
                }
            }
        }
        if !any {
            break;
        }
        power = next;
    }
    Some(total)
}

fn nilpotent_exp_float(nil: &[SymReal]) -> Vec<f64> {
    let deg = nil.len();
    let nil_f: Vec<f64> = nil.iter().map(|x| x.eval()).collect();
    let mut total = vec![0.0; deg + 1];
    total[0] = 1.0;
    let mut power = nil_f.clone(); // degrees j..deg
    let mut factorial = 1.0f64;
    for j in 1..=deg {
        factorial *= j as f64;
        for (offset, v) in power.iter().enumerate() {
            let k = j + offset;
            if k <= deg {
                total[k] += v / factorial;
            }
        }
        if j == deg {
            break;
        }
        let mut next = vec![0.0; deg.saturating_sub(j + 1) + 1];
        for (o1, a) in power.iter().enumerate() {
            for (o2, b) in nil_f.iter().enumerate() {
                let k = (j + o1) + (1 + o2);
                if k <= deg {
                    next[k - (j + 1)] += a * b;
                }
            }
        }
        power = next;
    }
    total
}

fn mint_value(
    basis: &Arc<SymbolBasis>,
    tag: &str,
    slot: usize,
    value: f64,
) -> Result<(Arc<SymbolBasis>, SymReal), Error> {
    if value == 0.0 {
        return Ok((Arc::clone(basis), SymReal::zero(basis)));
    }
    let name = format!("{tag}_c{slot}");
    let (wider, idx) = with_opaque_symbol(basis, &name, value)?;
    let x = SymReal::term(&wider, idx, rat_int(1));
    Ok((wider, x))
}

/// Symbol-name-safe rendering of a value's display form.
pub fn sanitize(s: &str) -> String {
    s.chars()
        .filter_map(|c| match c {
            ' ' => None,
            '+' => Some('p'),
            '-' => Some('m'),
            '*' => Some('x'),
            '/' => Some('d'),
            c => Some(c),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactreal::rat;

    fn basis() -> Arc<SymbolBasis> {
        SymbolBasis::sqrt_primes(3)
    }

    fn sym(b: &Arc<SymbolBasis>, s: &str) -> SymReal {
        SymReal::parse(b, s).unwrap()
    }

    #[test]
    fn shift_matrix() {
        let b = basis();
        let s1 = backward_shift(&b, 1);
        assert!(s1.is_zero());
        let s2 = backward_shift(&b, 2);
        assert_eq!(*s2.get(0, 1), SymReal::one(&b));
        assert!(s2.get(0, 0).is_zero() && s2.get(1, 0).is_zero() && s2.get(1, 1).is_zero());
        // nilpotency: σⁿ = 0
        for n in 1..5 {
            let s = backward_shift(&b, n);
            let mut p = SymMatrix::identity(&b, n);
            for _ in 0..n {
                p = p.try_mul(&s).unwrap();
            }
            assert!(p.is_zero(), "σ^{n} should vanish");
        }
    }

    #[test]
    fn predicates_agree() {
        let b = basis();
        assert!(is_toeplitz(&SymMatrix::identity(&b, 3)).unwrap());
        assert!(is_toeplitz(&backward_shift(&b, 3)).unwrap());
        let mut lower = SymMatrix::identity(&b, 2);
        *lower.get_mut(1, 0) = SymReal::one(&b);
        assert!(!is_toeplitz(&lower).unwrap());
        // all three must reject a pattern break
        let mut broken = toeplitz_matrix(&[sym(&b, "1"), sym(&b, "sqrt2")]);
        *broken.get_mut(1, 1) = sym(&b, "2");
        let (p1, p2, p3) = toeplitz_predicates(&broken);
        assert!(!p1 && !p2 && !p3);
    }

    #[test]
    fn exp_nilpotent_small() {
        let b = basis();
        // c = (0, 1) at n = 2: exp = [[1,1],[0,1]]
        let e = exp_toeplitz(&[sym(&b, "0"), sym(&b, "1")], "t").unwrap();
        assert_eq!(e.profile, vec![sym(&b, "1"), sym(&b, "1")]);
        // c = (0, 1, 0) at n = 3: I + σ + σ²/2
        let e = exp_toeplitz(&[sym(&b, "0"), sym(&b, "1"), sym(&b, "0")], "t").unwrap();
        assert_eq!(
            e.profile,
            vec![
                sym(&b, "1"),
                sym(&b, "1"),
                SymReal::from_rational(&b, rat(1, 2))
            ]
        );
    }

    #[test]
    fn exp_homomorphism_rational_profiles() {
        let b = basis();
        let c = [sym(&b, "0"), sym(&b, "2"), sym(&b, "-1/3"), sym(&b, "1")];
        let d = [sym(&b, "0"), sym(&b, "-1/2"), sym(&b, "3"), sym(&b, "0")];
        let sum: Vec<SymReal> = c.iter().zip(&d).map(|(x, y)| x + y).collect();
        let ec = exp_toeplitz(&c, "t").unwrap().matrix();
        let ed = exp_toeplitz(&d, "t").unwrap().matrix();
        let esum = exp_toeplitz(&sum, "t").unwrap().matrix();
        assert_eq!(ec.try_mul(&ed).unwrap(), esum);
    }

    #[test]
    fn exp_inverse_rational_profiles() {
        let b = basis();
        let c = [sym(&b, "0"), sym(&b, "5"), sym(&b, "-2"), sym(&b, "1/7")];
        let neg: Vec<SymReal> = c.iter().map(|x| -x).collect();
        let prod = exp_toeplitz(&c, "t")
            .unwrap()
            .matrix()
            .try_mul(&exp_toeplitz(&neg, "t").unwrap().matrix())
            .unwrap();
        assert_eq!(prod, SymMatrix::identity(&b, 3));
    }

    #[test]
    fn exp_scalar_minted() {
        let b = basis();
        let e = exp_toeplitz(&[sym(&b, "1"), sym(&b, "1")], "t").unwrap();
        // scalar symbol exp_1 carries e; profile = e·(1, 1)
        let idx = e.basis.index_of("exp_1").expect("scalar symbol minted");
        assert!((e.basis.symbol(idx).value - 1f64.exp()).abs() < 1e-12);
        assert_eq!(e.profile[0], e.profile[1]);
        assert!((e.profile[0].eval() - 1f64.exp()).abs() < 1e-12);
    }

    #[test]
    fn exp_sqrt_profile_exact_with_products() {
        // with sqrt15 declared, exp of (0, -sqrt3, -sqrt5, 0) stays exact
        let b = SymbolBasis::builder().sqrt(3).sqrt(5).sqrt(15).build();
        let profile = [
            SymReal::parse(&b, "0").unwrap(),
            SymReal::parse(&b, "-sqrt3").unwrap(),
            SymReal::parse(&b, "-sqrt5").unwrap(),
            SymReal::parse(&b, "0").unwrap(),
        ];
        let e = exp_toeplitz(&profile, "t").unwrap();
        assert!(Arc::ptr_eq(&e.basis, &b), "no minting needed");
        // slot 2: (-sqrt5) + (sqrt3)²/2 = 3/2 - sqrt5
        let expected = SymReal::parse(&b, "3/2 + -sqrt5").unwrap();
        assert_eq!(e.profile[2], expected);
        // slot 3: cross term sqrt3·sqrt5 = sqrt15: (2·sqrt15)/2 - sqrt3³/6 … check float
        let direct = nilpotent_exp_float(&[
            SymReal::parse(&b, "-sqrt3").unwrap(),
            SymReal::parse(&b, "-sqrt5").unwrap(),
            SymReal::parse(&b, "0").unwrap(),
        ]);
        assert!((e.profile[3].eval() - direct[3]).abs() < 1e-12);
    }

    #[test]
    fn exp_minted_slots_when_products_leave_span() {
        let b = basis(); // no sqrt15
        let profile = [
            sym(&b, "0"),
            sym(&b, "-sqrt3"),
            sym(&b, "-sqrt5"),
            sym(&b, "0"),
        ];
        let e = exp_toeplitz(&profile, "gX").unwrap();
        // minted opaque slots carry the correct float values
        let direct = nilpotent_exp_float(&profile[1..]);
        for k in 1..4 {
            assert!((e.profile[k].eval() - direct[k]).abs() < 1e-10);
        }
        assert!(e.basis.index_of("gX_c3").is_some());
    }
}
