//! Exact coefficients: rationals, `(q, π)`-Laurent polynomials, and graded
//! super dimension bookkeeping.

use num::rational::Ratio;
use num::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// Exact rational scalar used throughout the crate.
pub type Rat = Ratio<i128>;

pub fn rat(num: i128, den: i128) -> Rat {
    Ratio::new(num, den)
}

pub fn rint(n: i128) -> Rat {
    Ratio::from_integer(n)
}

/// A Laurent polynomial in `q` and `π` with rational coefficients, where
/// `π² = 1`.  Keys are `(q_exponent, π_exponent)` with `π_exponent ∈ {0, 1}`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct QPiLaurent {
    terms: BTreeMap<(i64, u8), Rat>,
}

impl QPiLaurent {
    pub fn zero() -> Self {
        QPiLaurent::default()
    }

    pub fn one() -> Self {
        QPiLaurent::monomial(0, 0, Rat::one())
    }

    /// `c · q^a π^e`.
    pub fn monomial(q_exp: i64, pi_exp: u8, coeff: Rat) -> Self {
        let mut p = QPiLaurent::default();
        p.add_term(q_exp, pi_exp, coeff);
        p
    }

    pub fn from_rat(c: Rat) -> Self {
        QPiLaurent::monomial(0, 0, c)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, q_exp: i64, pi_exp: u8, coeff: Rat) {
        assert!(pi_exp <= 1, "π exponent must be 0 or 1");
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry((q_exp, pi_exp)).or_insert_with(Rat::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&(q_exp, pi_exp));
        }
    }

    pub fn coeff(&self, q_exp: i64, pi_exp: u8) -> Rat {
        self.terms.get(&(q_exp, pi_exp)).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(i64, u8), &Rat)> {
        self.terms.iter()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&(a, e), c) in &other.terms {
            out.add_term(a, e, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let mut out = QPiLaurent::default();
        for (&(a, e), c) in &self.terms {
            out.add_term(a, e, -c.clone());
        }
        out
    }

    pub fn scale(&self, s: &Rat) -> Self {
        let mut out = QPiLaurent::default();
        for (&(a, e), c) in &self.terms {
            out.add_term(a, e, c.clone() * s.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = QPiLaurent::default();
        for (&(a1, e1), c1) in &self.terms {
            for (&(a2, e2), c2) in &other.terms {
                out.add_term(a1 + a2, (e1 + e2) % 2, c1.clone() * c2.clone());
            }
        }
        out
    }

    /// Substitute concrete rational values for `q` (must be nonzero if any
    /// negative exponent occurs) and `π` (typically `±1`).
    pub fn specialize(&self, q: &Rat, pi: &Rat) -> Rat {
        let mut total = Rat::zero();
        for (&(a, e), c) in &self.terms {
            let mut qc = Rat::one();
            let abs = a.unsigned_abs();
            for _ in 0..abs {
                if a >= 0 {
                    qc *= q.clone();
                } else {
                    assert!(!q.is_zero(), "cannot specialize q = 0 with negative exponents");
                    qc /= q.clone();
                }
            }
            let pc = if e == 1 { pi.clone() } else { Rat::one() };
            total += c.clone() * qc * pc;
        }
        total
    }
}

fn fmt_rat_coeff(c: &Rat, lead: bool, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if c.is_negative() {
        write!(f, "{}", if lead { "-" } else { " - " })?;
    } else if !lead {
        write!(f, " + ")?;
    }
    let a = c.abs();
    if !a.is_one() {
        if a.is_integer() {
            write!(f, "{}", a.numer())?;
        } else {
            write!(f, "{}/{}", a.numer(), a.denom())?;
        }
        write!(f, "*")?;
    }
    Ok(())
}

impl fmt::Display for QPiLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut lead = true;
        for (&(a, e), c) in &self.terms {
            fmt_rat_coeff(c, lead, f)?;
            let monos: Vec<String> = [
                match a {
                    0 => None,
                    1 => Some("q".to_string()),
                    _ => Some(format!("q^{a}")),
                },
                if e == 1 { Some("pi".to_string()) } else { None },
            ]
            .into_iter()
            .flatten()
            .collect();
            if monos.is_empty() {
                let ab = c.abs();
                if ab.is_one() {
                    write!(f, "1")?;
                }
            } else {
                write!(f, "{}", monos.join("*"))?;
            }
            lead = false;
        }
        Ok(())
    }
}

/// Dimensions of a `ℤ × ℤ₂`-graded vector space: `dims[(degree, parity)]`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct GradedSuperVectorSpace {
    dims: BTreeMap<(i64, u8), usize>,
}

impl GradedSuperVectorSpace {
    pub fn new() -> Self {
        GradedSuperVectorSpace::default()
    }

    pub fn add_dim(&mut self, degree: i64, parity: u8, dim: usize) {
        assert!(parity <= 1);
        if dim == 0 {
            return;
        }
        *self.dims.entry((degree, parity)).or_insert(0) += dim;
    }

    pub fn dim(&self, degree: i64, parity: u8) -> usize {
        self.dims.get(&(degree, parity)).copied().unwrap_or(0)
    }

    pub fn total_dim(&self) -> usize {
        self.dims.values().sum()
    }

    pub fn components(&self) -> impl Iterator<Item = (&(i64, u8), &usize)> {
        self.dims.iter()
    }

    /// Graded dimension as an element of `ℤ[q, q⁻¹, π]`.
    pub fn grdim(&self) -> QPiLaurent {
        let mut p = QPiLaurent::zero();
        for (&(d, e), &n) in &self.dims {
            p.add_term(d, e, rint(n as i128));
        }
        p
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&(d, e), &n) in &other.dims {
            out.add_dim(d, e, n);
        }
        out
    }

    pub fn tensor(&self, other: &Self) -> Self {
        let mut out = GradedSuperVectorSpace::new();
        for (&(d1, e1), &n1) in &self.dims {
            for (&(d2, e2), &n2) in &other.dims {
                out.add_dim(d1 + d2, (e1 + e2) % 2, n1 * n2);
            }
        }
        out
    }

    /// `ΠV`: flip the parity of every component.
    pub fn parity_shift(&self) -> Self {
        let mut out = GradedSuperVectorSpace::new();
        for (&(d, e), &n) in &self.dims {
            out.add_dim(d, 1 - e, n);
        }
        out
    }

    /// Shift the `ℤ`-degree by `s` and (if `flip`) the parity.
    pub fn shifted(&self, s: i64, flip: bool) -> Self {
        let mut out = GradedSuperVectorSpace::new();
        for (&(d, e), &n) in &self.dims {
            out.add_dim(d + s, if flip { 1 - e } else { e }, n);
        }
        out
    }
}

/// Truncated power series in `t` with `QPiLaurent` coefficients; used only to
/// extract symmetric/exterior power dimensions, so we keep degrees `≤ cap`.
#[derive(Clone, Debug)]
struct TruncSeries {
    cap: usize,
    coeffs: Vec<QPiLaurent>,
}

impl TruncSeries {
    fn one(cap: usize) -> Self {
        let mut coeffs = vec![QPiLaurent::zero(); cap + 1];
        coeffs[0] = QPiLaurent::one();
        TruncSeries { cap, coeffs }
    }

    fn mul(&self, other: &Self) -> Self {
        let cap = self.cap;
        let mut coeffs = vec![QPiLaurent::zero(); cap + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if i + j > cap || b.is_zero() {
                    continue;
                }
                coeffs[i + j] = coeffs[i + j].add(&a.mul(b));
            }
        }
        TruncSeries { cap, coeffs }
    }
}

/// `(1 - m t)^{-1} = Σ_k m^k t^k`, truncated.
fn geometric(cap: usize, m: &QPiLaurent) -> TruncSeries {
    let mut coeffs = vec![QPiLaurent::zero(); cap + 1];
    let mut acc = QPiLaurent::one();
    for c in coeffs.iter_mut() {
        *c = acc.clone();
        acc = acc.mul(m);
    }
    TruncSeries { cap, coeffs }
}

/// `1 + m t`, truncated.
fn linear(cap: usize, m: &QPiLaurent) -> TruncSeries {
    let mut coeffs = vec![QPiLaurent::zero(); cap + 1];
    coeffs[0] = QPiLaurent::one();
    if cap >= 1 {
        coeffs[1] = m.clone();
    }
    TruncSeries { cap, coeffs }
}

/// Graded dimension of the `k`-th super symmetric power `S^k(V)`.
///
/// Even components of degree `d` contribute a factor `(1 - q^d t)^{-1}` to the
/// generating function, odd components a factor `(1 + π q^d t)`; the answer is
/// the coefficient of `t^k`.
pub fn grdim_sym_power(v: &GradedSuperVectorSpace, k: usize) -> QPiLaurent {
    let mut series = TruncSeries::one(k);
    for (&(d, e), &n) in &v.dims {
        let q_d = QPiLaurent::monomial(d, 0, Rat::one());
        for _ in 0..n {
            let factor = if e == 0 {
                geometric(k, &q_d)
            } else {
                linear(k, &q_d.mul(&QPiLaurent::monomial(0, 1, Rat::one())))
            };
            series = series.mul(&factor);
        }
    }
    series.coeffs[k].clone()
}

/// Graded dimension of the `k`-th super exterior power `Λ^k(V) = S^k(ΠV)`
/// up to a parity twist: even components contribute `(1 + q^d t)`, odd
/// components `(1 - π q^d t)^{-1}`; the answer is the coefficient of `t^k`.
pub fn grdim_ext_power(v: &GradedSuperVectorSpace, k: usize) -> QPiLaurent {
    let mut series = TruncSeries::one(k);
    let pi = QPiLaurent::monomial(0, 1, Rat::one());
    for (&(d, e), &n) in &v.dims {
        let q_d = QPiLaurent::monomial(d, 0, Rat::one());
        for _ in 0..n {
            let factor = if e == 0 {
                linear(k, &q_d)
            } else {
                geometric(k, &q_d.mul(&pi))
            };
            series = series.mul(&factor);
        }
    }
    series.coeffs[k].clone()
}

/// Row-reduce an exact rational matrix in place; returns its rank.
pub fn row_reduce(mat: &mut Vec<Vec<Rat>>) -> usize {
    let cols = mat.first().map_or(0, Vec::len);
    row_reduce_cols(mat, cols)
}

/// Row-reduce, choosing pivots only among the first `pivot_cols` columns;
/// returns the rank of that left block.
pub fn row_reduce_cols(mat: &mut Vec<Vec<Rat>>, pivot_cols: usize) -> usize {
    let rows = mat.len();
    if rows == 0 {
        return 0;
    }
    let cols = mat[0].len();
    let mut rank = 0;
    for col in 0..pivot_cols.min(cols) {
        if rank >= rows {
            break;
        }
        let pivot = (rank..rows).find(|&r| !mat[r][col].is_zero());
        let Some(p) = pivot else { continue };
        mat.swap(rank, p);
        let inv = mat[rank][col].clone();
        for x in mat[rank].iter_mut() {
            *x /= inv.clone();
        }
        for r in 0..rows {
            if r != rank && !mat[r][col].is_zero() {
                let factor = mat[r][col].clone();
                for c in 0..cols {
                    let sub = factor.clone() * mat[rank][c].clone();
                    mat[r][c] -= sub;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Invert an exact rational square matrix; `None` if singular.
pub fn invert_matrix(mat: &[Vec<Rat>]) -> Option<Vec<Vec<Rat>>> {
    let n = mat.len();
    let mut aug: Vec<Vec<Rat>> = mat
        .iter()
        .enumerate()
        .map(|(i, row)| {
            assert_eq!(row.len(), n, "matrix must be square");
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }));
            r
        })
        .collect();
    let rank = row_reduce_cols(&mut aug, n);
    if rank < n {
        return None;
    }
    Some(aug.into_iter().map(|row| row[n..].to_vec()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn laurent_arithmetic() {
        let p = QPiLaurent::monomial(1, 0, rint(2)).add(&QPiLaurent::monomial(-1, 1, rint(3)));
        let q = QPiLaurent::monomial(0, 1, rint(1));
        // (2q + 3 q⁻¹ π) · π = 2qπ + 3q⁻¹          (π² = 1)
        let prod = p.mul(&q);
        assert_eq!(prod.coeff(1, 1), rint(2));
        assert_eq!(prod.coeff(-1, 0), rint(3));
        assert!(p.sub(&p).is_zero());
        assert_eq!(p.specialize(&rint(2), &rint(-1)), rat(5, 2));
    }

    #[test]
    fn laurent_display() {
        let p = QPiLaurent::monomial(-2, 0, rint(1))
            .add(&QPiLaurent::monomial(0, 1, rint(-3)))
            .add(&QPiLaurent::monomial(1, 0, rat(1, 2)));
        assert_eq!(p.to_string(), "q^-2 - 3*pi + 1/2*q");
        assert_eq!(QPiLaurent::zero().to_string(), "0");
        assert_eq!(QPiLaurent::one().to_string(), "1");
    }

    #[test]
    fn space_operations() {
        // Dual numbers F[x]/x² with deg x = 1, even:  1 + q.
        let mut v = GradedSuperVectorSpace::new();
        v.add_dim(0, 0, 1);
        v.add_dim(1, 0, 1);
        assert_eq!(v.grdim().to_string(), "1 + q");
        let t = v.tensor(&v);
        assert_eq!(t.grdim(), v.grdim().mul(&v.grdim()));
        assert_eq!(v.parity_shift().dim(1, 1), 1);
        assert_eq!(v.shifted(2, false).dim(2, 0), 1);
    }

    #[test]
    fn sym_ext_dual_numbers() {
        // V = span{1, x}, deg x = 1, both even.
        let mut v = GradedSuperVectorSpace::new();
        v.add_dim(0, 0, 1);
        v.add_dim(1, 0, 1);
        // S²(V): 1·1, 1·x, x·x  →  1 + q + q².
        let s2 = grdim_sym_power(&v, 2);
        assert_eq!(s2.to_string(), "1 + q + q^2");
        // Λ²(V): 1∧x  →  q.
        let e2 = grdim_ext_power(&v, 2);
        assert_eq!(e2.to_string(), "q");
        assert_eq!(grdim_sym_power(&v, 0), QPiLaurent::one());
        assert_eq!(grdim_ext_power(&v, 3), QPiLaurent::zero());
    }

    #[test]
    fn sym_ext_odd_line() {
        // V = span{c}, degree 0, odd.
        let mut v = GradedSuperVectorSpace::new();
        v.add_dim(0, 1, 1);
        // S²: c·c = 0 in the super symmetric algebra.
        assert_eq!(grdim_sym_power(&v, 2), QPiLaurent::zero());
        assert_eq!(grdim_sym_power(&v, 1).coeff(0, 1), rint(1));
        // Λ²: divided powers of an odd vector survive, with π-weight.
        assert_eq!(grdim_ext_power(&v, 2).coeff(0, 0), rint(1));
        assert_eq!(grdim_ext_power(&v, 1).coeff(0, 1), rint(1));
    }

    #[test]
    fn linear_algebra_helpers() {
        let mut m = vec![
            vec![rint(1), rint(2), rint(3)],
            vec![rint(2), rint(4), rint(6)],
            vec![rint(0), rint(1), rint(1)],
        ];
        assert_eq!(row_reduce(&mut m), 2);
        let a = vec![vec![rint(2), rint(1)], vec![rint(1), rint(1)]];
        let inv = invert_matrix(&a).unwrap();
        assert_eq!(inv[0][0], rint(1));
        assert_eq!(inv[0][1], rint(-1));
        assert!(invert_matrix(&[vec![rint(1), rint(1)], vec![rint(1), rint(1)]]).is_none());
    }
}
