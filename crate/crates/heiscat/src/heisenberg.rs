//! The Heisenberg algebra 𝔥_B attached to a graded Frobenius superalgebra B:
//! generator symbols P_i^{(n)}, P_i^{(1ⁿ)}, Q_i^{(n)}, Q_i^{(1ⁿ)} for a chosen
//! family of degree-(0,0) idempotents e_i of B, the four normal-ordering
//! presentations, even-power reduction for type-Q indices, the coproduct on
//! generators, the bilinear-form pairing values with a brute-force wreath
//! oracle, the Fock module, and the shape-swap involution ω.

use crate::coeff::{grdim_ext_power, grdim_sym_power, GradedSuperVectorSpace, QPiLaurent, Rat};
use crate::frobenius::FrobeniusAlgebra;
use crate::wreath::{self, multiply, symmetrizer_idempotent, Shape as WShape, WreathElement};
use num::{One, Zero};
use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Side {
    P,
    Q,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum SymShape {
    Row,
    Column,
}

/// A generator symbol: `P_i^{(n)}` (row) or `P_i^{(1ⁿ)}` (column), and the
/// `Q`-side counterparts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GeneratorSymbol {
    pub side: Side,
    pub idem_index: usize,
    pub shape: SymShape,
    pub size: usize,
}

impl GeneratorSymbol {
    pub fn new(side: Side, idem_index: usize, shape: SymShape, size: usize) -> Self {
        GeneratorSymbol {
            side,
            idem_index,
            shape,
            size,
        }
    }
}

/// Canonical sort key inside a commutative monomial: (idem_index, shape, size).
fn sym_key(s: &GeneratorSymbol) -> (usize, SymShape, usize) {
    (s.idem_index, s.shape, s.size)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Presentation {
    /// P row, Q row.
    RowRow,
    /// P column, Q column.
    ColumnColumn,
    /// P row, Q column.
    RowColumn,
    /// P column, Q row.
    ColumnRow,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairShape {
    Sym,
    Ext,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HeisenbergError {
    UnknownGenerator(String),
    NotTypeQ,
    NotEven,
    NotIdempotent,
    IndexOutOfRange,
    SizeLimit,
}

impl std::fmt::Display for HeisenbergError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            HeisenbergError::UnknownGenerator(s) => write!(f, "unknown generator: {s}"),
            HeisenbergError::NotTypeQ => write!(f, "index is not flagged type Q"),
            HeisenbergError::NotEven => write!(f, "generator size is not even"),
            HeisenbergError::NotIdempotent => write!(f, "element is not a degree-(0,0) idempotent"),
            HeisenbergError::IndexOutOfRange => write!(f, "idempotent index out of range"),
            HeisenbergError::SizeLimit => write!(f, "size exceeds the oracle limit"),
        }
    }
}

impl std::error::Error for HeisenbergError {}

/// The data binding 𝔥_B to a concrete algebra: the idempotent family {e_i}
/// (defaulting to {1}) and the per-index type-Q flags.
pub struct HeisenbergContext<'a> {
    pub alg: &'a FrobeniusAlgebra,
    pub idems: Vec<Vec<Rat>>,
    pub type_q: Vec<bool>,
}

impl<'a> HeisenbergContext<'a> {
    pub fn new(alg: &'a FrobeniusAlgebra) -> Self {
        HeisenbergContext {
            alg,
            idems: vec![alg.unit().to_vec()],
            type_q: vec![false],
        }
    }

    pub fn with_idempotents(
        alg: &'a FrobeniusAlgebra,
        idems: Vec<Vec<Rat>>,
        type_q: Vec<bool>,
    ) -> Result<Self, HeisenbergError> {
        if idems.len() != type_q.len() || idems.is_empty() {
            return Err(HeisenbergError::IndexOutOfRange);
        }
        for f in &idems {
            if alg.mult(f, f) != *f {
                return Err(HeisenbergError::NotIdempotent);
            }
            for (k, c) in f.iter().enumerate() {
                if !c.is_zero() && (alg.deg(k) != 0 || alg.par(k) != 0) {
                    return Err(HeisenbergError::NotIdempotent);
                }
            }
        }
        Ok(HeisenbergContext { alg, idems, type_q })
    }

    fn check_index(&self, i: usize) -> Result<(), HeisenbergError> {
        if i < self.idems.len() {
            Ok(())
        } else {
            Err(HeisenbergError::IndexOutOfRange)
        }
    }

    /// The graded super vector space e_i·B·e_j.
    pub fn hom_space(&self, i: usize, j: usize) -> GradedSuperVectorSpace {
        let alg = self.alg;
        // e_i b e_j is homogeneous of b's degree; group basis products by
        // component and count ranks.
        let mut by_comp: BTreeMap<(i64, u8), Vec<Vec<Rat>>> = BTreeMap::new();
        for b in 0..alg.dim {
            let v = alg.mult(&alg.mult(&self.idems[i], &alg.basis_vec(b)), &self.idems[j]);
            if v.iter().any(|c| !c.is_zero()) {
                by_comp
                    .entry((alg.deg(b), alg.par(b)))
                    .or_default()
                    .push(v);
            }
        }
        let mut out = GradedSuperVectorSpace::new();
        for ((d, p), mut vecs) in by_comp {
            let rank = crate::coeff::row_reduce(&mut vecs);
            out.add_dim(d, p, rank);
        }
        out
    }

    /// `grdim S^k` or `grdim Λ^k` of e_i·B·e_j.
    pub fn pairing(
        &self,
        i: usize,
        j: usize,
        k: usize,
        shape: PairShape,
    ) -> Result<QPiLaurent, HeisenbergError> {
        self.check_index(i)?;
        self.check_index(j)?;
        let v = self.hom_space(i, j);
        Ok(match shape {
            PairShape::Sym => grdim_sym_power(&v, k),
            PairShape::Ext => grdim_ext_power(&v, k),
        })
    }

    /// Brute-force oracle for [`Self::pairing`]: the graded dimension of the
    /// wreath-algebra slice e_{e_i,λ}·A_k·e_{e_j,(k)} with λ = (k) for the
    /// symmetric shape and λ = (1^k) for the exterior shape.
    pub fn oracle_pairing(
        &self,
        i: usize,
        j: usize,
        k: usize,
        shape: PairShape,
    ) -> Result<QPiLaurent, HeisenbergError> {
        self.check_index(i)?;
        self.check_index(j)?;
        if k == 0 {
            return Ok(QPiLaurent::one());
        }
        let alg = self.alg;
        if k > 3 || wreath::dim_a_n(alg, k) > 4000 {
            return Err(HeisenbergError::SizeLimit);
        }
        let left_shape = match shape {
            PairShape::Sym => WShape::Row,
            PairShape::Ext => WShape::Column,
        };
        let e_left = symmetrizer_idempotent(alg, &self.idems[i], left_shape, k);
        let e_right = symmetrizer_idempotent(alg, &self.idems[j], WShape::Row, k);
        // Slice every basis element of A_k; group the images by the (degree,
        // parity) of the source basis element and count ranks.
        let dim = wreath::dim_a_n(alg, k);
        let tdim = alg.dim.pow(k as u32);
        let mut by_comp: BTreeMap<(i64, u8), Vec<Vec<Rat>>> = BTreeMap::new();
        for idx in 0..dim {
            let perm = wreath::perm_unrank(k, idx / tdim);
            let mut rem = idx % tdim;
            let mut tensor = vec![0u8; k];
            for slot in (0..k).rev() {
                tensor[slot] = (rem % alg.dim) as u8;
                rem /= alg.dim;
            }
            let (d, p) = tensor.iter().fold((0i64, 0u8), |(d, p), &b| {
                (d + alg.deg(b as usize), p ^ alg.par(b as usize))
            });
            let x = WreathElement::from_term(k, (tensor, perm), Rat::one());
            let img = multiply(alg, &multiply(alg, &e_left, &x), &e_right);
            if img.is_zero() {
                continue;
            }
            let mut dense = vec![Rat::zero(); dim];
            for (t, c) in &img.terms {
                dense[wreath::term_index(alg, t)] = c.clone();
            }
            by_comp.entry((d, p)).or_default().push(dense);
        }
        let mut v = GradedSuperVectorSpace::new();
        for ((d, p), mut vecs) in by_comp {
            let rank = crate::coeff::row_reduce(&mut vecs);
            v.add_dim(d, p, rank);
        }
        Ok(v.grdim())
    }

    /// Identify row/column for type-Q indices and reject bad indices.
    fn canonical_sym(&self, s: &GeneratorSymbol) -> Result<GeneratorSymbol, HeisenbergError> {
        self.check_index(s.idem_index)?;
        let mut s = *s;
        if self.type_q[s.idem_index] {
            s.shape = SymShape::Row;
        }
        Ok(s)
    }
}

/// A normal-ordered element: each term is (P-monomial, Q-monomial) with both
/// monomials sorted (the two subalgebras H⁺ and H⁻ are commutative).
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct HeisenbergElement {
    pub terms: BTreeMap<(Vec<(usize, SymShape, usize)>, Vec<(usize, SymShape, usize)>), QPiLaurent>,
}

impl HeisenbergElement {
    pub fn zero() -> Self {
        HeisenbergElement::default()
    }

    pub fn one() -> Self {
        let mut e = HeisenbergElement::default();
        e.terms.insert((Vec::new(), Vec::new()), QPiLaurent::one());
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(
        &mut self,
        key: (Vec<(usize, SymShape, usize)>, Vec<(usize, SymShape, usize)>),
        c: QPiLaurent,
    ) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(key.clone()).or_insert_with(QPiLaurent::zero);
        *e = e.add(&c);
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.neg());
        }
        out
    }

    pub fn scale(&self, s: &QPiLaurent) -> Self {
        let mut out = HeisenbergElement::zero();
        for (k, c) in &self.terms {
            out.add_term(k.clone(), c.mul(s));
        }
        out
    }

    /// Rebuild the flat generator word P-part then Q-part of one term.
    fn term_word(key: &(Vec<(usize, SymShape, usize)>, Vec<(usize, SymShape, usize)>)) -> Vec<GeneratorSymbol> {
        let mut w = Vec::new();
        for &(i, sh, n) in &key.0 {
            w.push(GeneratorSymbol::new(Side::P, i, sh, n));
        }
        for &(i, sh, n) in &key.1 {
            w.push(GeneratorSymbol::new(Side::Q, i, sh, n));
        }
        w
    }

    /// The # product, normal-ordered.
    pub fn mul(&self, ctx: &HeisenbergContext, other: &Self) -> Result<Self, HeisenbergError> {
        let mut out = HeisenbergElement::zero();
        for (ka, ca) in &self.terms {
            for (kb, cb) in &other.terms {
                let mut word = Self::term_word(ka);
                word.extend(Self::term_word(kb));
                let prod = normal_order_word(ctx, &word)?;
                out = out.add(&prod.scale(&ca.mul(cb)));
            }
        }
        Ok(out)
    }
}

/// One generator as an element (already canonicalized: type-Q even sizes are
/// expanded through the even-power reduction).
pub fn generator(
    ctx: &HeisenbergContext,
    sym: GeneratorSymbol,
) -> Result<HeisenbergElement, HeisenbergError> {
    let s = ctx.canonical_sym(&sym)?;
    if s.size == 0 {
        return Ok(HeisenbergElement::one());
    }
    if ctx.type_q[s.idem_index] && s.size % 2 == 0 {
        return even_reduce(ctx, &s);
    }
    let mut e = HeisenbergElement::zero();
    let key = match s.side {
        Side::P => (vec![sym_key(&s)], Vec::new()),
        Side::Q => (Vec::new(), vec![sym_key(&s)]),
    };
    e.add_term(key, QPiLaurent::one());
    Ok(e)
}

/// Multiply a list of same-side generators as a commutative monomial, with
/// type-Q even sizes reduced.
fn monomial(
    ctx: &HeisenbergContext,
    syms: &[GeneratorSymbol],
) -> Result<HeisenbergElement, HeisenbergError> {
    let mut out = HeisenbergElement::one();
    for s in syms {
        let g = generator(ctx, *s)?;
        // Same-side products never create inversions: multiply directly.
        let mut next = HeisenbergElement::zero();
        for (ka, ca) in &out.terms {
            for (kb, cb) in &g.terms {
                let mut p = ka.0.clone();
                p.extend(kb.0.iter().cloned());
                p.sort();
                let mut q = ka.1.clone();
                q.extend(kb.1.iter().cloned());
                q.sort();
                next.add_term((p, q), ca.mul(cb));
            }
        }
        out = next;
    }
    Ok(out)
}

/// Even-power reduction for a type-Q index:
/// `X^{(2m)} = ½(−1)^{m−1}(X^{(m)})² + Σ_{r=1}^{m−1}(−1)^{r−1}X^{(r)}X^{(2m−r)}`,
/// applied recursively until only odd sizes remain.
pub fn even_reduce(
    ctx: &HeisenbergContext,
    sym: &GeneratorSymbol,
) -> Result<HeisenbergElement, HeisenbergError> {
    let s = ctx.canonical_sym(sym)?;
    if !ctx.type_q[s.idem_index] {
        return Err(HeisenbergError::NotTypeQ);
    }
    if s.size % 2 != 0 || s.size == 0 {
        return Err(HeisenbergError::NotEven);
    }
    let m = s.size / 2;
    let half = |n: usize| GeneratorSymbol::new(s.side, s.idem_index, s.shape, n);
    let sign = |r: usize| {
        if r % 2 == 1 {
            QPiLaurent::one()
        } else {
            QPiLaurent::one().neg()
        }
    };
    // ½(−1)^{m−1}(X^{(m)})²
    let mut out = monomial(ctx, &[half(m), half(m)])?
        .scale(&sign(m).mul(&QPiLaurent::from_rat(crate::coeff::rat(1, 2))));
    for r in 1..m {
        out = out.add(&monomial(ctx, &[half(r), half(2 * m - r)])?.scale(&sign(r)));
    }
    Ok(out)
}

/// Normal-order an arbitrary word of generator symbols: rewrite every
/// Q-before-P inversion with the presentation relation determined by the
/// shapes of the colliding pair (equal shapes use `grdim S^k`, opposite shapes
/// use `grdim Λ^k` of e_i·B·e_j).
fn normal_order_word(
    ctx: &HeisenbergContext,
    word: &[GeneratorSymbol],
) -> Result<HeisenbergElement, HeisenbergError> {
    // Find the first inversion.
    let canon: Vec<GeneratorSymbol> = word
        .iter()
        .map(|s| ctx.canonical_sym(s))
        .collect::<Result<_, _>>()?;
    let inv = canon
        .windows(2)
        .position(|w| w[0].side == Side::Q && w[1].side == Side::P);
    let Some(t) = inv else {
        // Ordered: all P's precede all Q's.
        let split = canon.iter().position(|s| s.side == Side::Q).unwrap_or(canon.len());
        let p = monomial(ctx, &canon[..split])?;
        let q = monomial(ctx, &canon[split..])?;
        let mut out = HeisenbergElement::zero();
        for (kp, cp) in &p.terms {
            for (kq, cq) in &q.terms {
                out.add_term((kp.0.clone(), kq.1.clone()), cp.mul(cq));
            }
        }
        return Ok(out);
    };
    let qg = canon[t];
    let pg = canon[t + 1];
    let (i, n) = (qg.idem_index, qg.size);
    let (j, m) = (pg.idem_index, pg.size);
    let shape = if qg.shape == pg.shape {
        PairShape::Sym
    } else {
        PairShape::Ext
    };
    let mut out = HeisenbergElement::zero();
    for k in 0..=n.min(m) {
        let coeff = ctx.pairing(i, j, k, shape)?;
        if coeff.is_zero() {
            continue;
        }
        let mut next: Vec<GeneratorSymbol> = canon[..t].to_vec();
        if m - k > 0 {
            next.push(GeneratorSymbol::new(Side::P, j, pg.shape, m - k));
        }
        if n - k > 0 {
            next.push(GeneratorSymbol::new(Side::Q, i, qg.shape, n - k));
        }
        next.extend_from_slice(&canon[t + 2..]);
        out = out.add(&normal_order_word(ctx, &next)?.scale(&coeff));
    }
    Ok(out)
}

/// Normal-order a word written in one of the four presentations. The
/// presentation fixes which shapes are allowed on each side; symbols outside
/// it are rejected.
pub fn normal_order(
    ctx: &HeisenbergContext,
    word: &[GeneratorSymbol],
    presentation: Presentation,
) -> Result<HeisenbergElement, HeisenbergError> {
    let (p_shape, q_shape) = match presentation {
        Presentation::RowRow => (SymShape::Row, SymShape::Row),
        Presentation::ColumnColumn => (SymShape::Column, SymShape::Column),
        Presentation::RowColumn => (SymShape::Row, SymShape::Column),
        Presentation::ColumnRow => (SymShape::Column, SymShape::Row),
    };
    for s in word {
        ctx.check_index(s.idem_index)?;
        // Type-Q indices identify row and column, so either shape is fine.
        if !ctx.type_q[s.idem_index] {
            let want = match s.side {
                Side::P => p_shape,
                Side::Q => q_shape,
            };
            if s.shape != want {
                return Err(HeisenbergError::UnknownGenerator(format!("{s:?}")));
            }
        }
    }
    normal_order_word(ctx, word)
}

/// `Δ(X_i^{(n)}) = Σ_{k=0}^n X_i^{(n−k)} ⊠ X_i^{(k)}` (same-shape pieces);
/// size-0 factors are the unit.
pub fn coproduct_generator(sym: &GeneratorSymbol) -> Vec<(GeneratorSymbol, GeneratorSymbol)> {
    (0..=sym.size)
        .map(|k| {
            (
                GeneratorSymbol::new(sym.side, sym.idem_index, sym.shape, sym.size - k),
                GeneratorSymbol::new(sym.side, sym.idem_index, sym.shape, k),
            )
        })
        .collect()
}

/// Fock action: multiply, normal-order, and kill every term with a nonempty
/// Q-part (the lowest-weight realization induced from the trivial H⁻-module).
pub fn fock_apply(
    ctx: &HeisenbergContext,
    h: &HeisenbergElement,
    v: &HeisenbergElement,
) -> Result<HeisenbergElement, HeisenbergError> {
    let prod = h.mul(ctx, v)?;
    let mut out = HeisenbergElement::zero();
    for (k, c) in &prod.terms {
        if k.1.is_empty() {
            out.add_term(k.clone(), c.clone());
        }
    }
    Ok(out)
}

/// The involution ω: swap row ↔ column on every generator symbol.
pub fn omega(ctx: &HeisenbergContext, x: &HeisenbergElement) -> HeisenbergElement {
    let flip = |(i, sh, n): &(usize, SymShape, usize)| {
        let sh = if ctx.type_q[*i] {
            SymShape::Row
        } else {
            match sh {
                SymShape::Row => SymShape::Column,
                SymShape::Column => SymShape::Row,
            }
        };
        (*i, sh, *n)
    };
    let mut out = HeisenbergElement::zero();
    for (k, c) in &x.terms {
        let mut p: Vec<_> = k.0.iter().map(flip).collect();
        let mut q: Vec<_> = k.1.iter().map(flip).collect();
        p.sort();
        q.sort();
        out.add_term((p, q), c.clone());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::rat;
    use crate::frobenius::builtin;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn p(n: usize) -> GeneratorSymbol {
        GeneratorSymbol::new(Side::P, 0, SymShape::Row, n)
    }

    fn q(n: usize) -> GeneratorSymbol {
        GeneratorSymbol::new(Side::Q, 0, SymShape::Row, n)
    }

    #[test]
    fn pairing_matches_oracle_all_builtins() {
        for name in [
            "trivial",
            "clifford",
            "dual_numbers",
            "exterior_line",
            "truncated_poly_3",
            "zigzag_a2",
        ] {
            let alg = builtin(name).unwrap();
            let ctx = if name == "zigzag_a2" {
                let e1 = alg.basis_vec(0);
                let e2 = alg.basis_vec(1);
                HeisenbergContext::with_idempotents(&alg, vec![e1, e2], vec![false, false]).unwrap()
            } else {
                HeisenbergContext::new(&alg)
            };
            let kmax = if name == "zigzag_a2" { 2 } else { 3 };
            for i in 0..ctx.idems.len() {
                for j in 0..ctx.idems.len() {
                    for k in 0..=kmax {
                        for shape in [PairShape::Sym, PairShape::Ext] {
                            let got = ctx.pairing(i, j, k, shape).unwrap();
                            let want = ctx.oracle_pairing(i, j, k, shape).unwrap();
                            assert_eq!(got, want, "{name} i={i} j={j} k={k} {shape:?}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn khovanov_specialization() {
        // Over the one-dimensional algebra all S^k coefficients are 1:
        // Q^{(n)}P^{(m)} = Σ_k P^{(m−k)}Q^{(n−k)}.
        let alg = builtin("trivial").unwrap();
        let ctx = HeisenbergContext::new(&alg);
        for n in 1..=4usize {
            for m in 1..=4usize {
                let x = normal_order(&ctx, &[q(n), p(m)], Presentation::RowRow).unwrap();
                let mut want = HeisenbergElement::zero();
                for k in 0..=n.min(m) {
                    let pk = if m - k > 0 { vec![(0, SymShape::Row, m - k)] } else { vec![] };
                    let qk = if n - k > 0 { vec![(0, SymShape::Row, n - k)] } else { vec![] };
                    want.add_term((pk, qk), QPiLaurent::one());
                }
                assert_eq!(x, want, "n={n} m={m}");
            }
        }
    }

    #[test]
    fn normal_order_dual_numbers_example() {
        // Q^{(1)}P^{(2)} = P^{(2)}Q^{(1)} + (1+q)P^{(1)}.
        let alg = builtin("dual_numbers").unwrap();
        let ctx = HeisenbergContext::new(&alg);
        let x = normal_order(&ctx, &[q(1), p(2)], Presentation::RowRow).unwrap();
        let mut want = HeisenbergElement::zero();
        want.add_term(
            (vec![(0, SymShape::Row, 2)], vec![(0, SymShape::Row, 1)]),
            QPiLaurent::one(),
        );
        let mut c = QPiLaurent::one();
        c.add_term(1, 0, rat(1, 1));
        want.add_term((vec![(0, SymShape::Row, 1)], vec![]), c);
        assert_eq!(x, want);
    }

    #[test]
    fn even_reduce_examples() {
        let alg = builtin("clifford").unwrap();
        let ctx =
            HeisenbergContext::with_idempotents(&alg, vec![alg.unit().to_vec()], vec![true]).unwrap();
        // Q^{(2)} = ½(Q^{(1)})².
        let r = even_reduce(&ctx, &q(2)).unwrap();
        let mut want = HeisenbergElement::zero();
        want.add_term(
            (vec![], vec![(0, SymShape::Row, 1), (0, SymShape::Row, 1)]),
            QPiLaurent::from_rat(rat(1, 2)),
        );
        assert_eq!(r, want);
        // Q^{(4)} = −½(Q^{(2)})² + Q^{(1)}Q^{(3)}, inner Q^{(2)} reduced:
        // −⅛(Q^{(1)})⁴ + Q^{(1)}Q^{(3)}.
        let r4 = even_reduce(&ctx, &q(4)).unwrap();
        let mut want4 = HeisenbergElement::zero();
        want4.add_term(
            (vec![], vec![(0, SymShape::Row, 1); 4]),
            QPiLaurent::from_rat(rat(-1, 8)),
        );
        want4.add_term(
            (vec![], vec![(0, SymShape::Row, 1), (0, SymShape::Row, 3)]),
            QPiLaurent::one(),
        );
        assert_eq!(r4, want4);
        // Reducing twice equals reducing once: the output has only odd sizes.
        for k in &r4.terms {
            assert!(k.0 .1.iter().all(|&(_, _, n)| n % 2 == 1));
        }
        // Errors.
        assert_eq!(even_reduce(&ctx, &q(3)), Err(HeisenbergError::NotEven));
        let ctx_m = HeisenbergContext::new(&alg);
        assert_eq!(even_reduce(&ctx_m, &q(2)), Err(HeisenbergError::NotTypeQ));
    }

    #[test]
    fn coproduct_and_fock() {
        let alg = builtin("trivial").unwrap();
        let ctx = HeisenbergContext::new(&alg);
        let terms = coproduct_generator(&p(3));
        assert_eq!(terms.len(), 4);
        assert_eq!(terms[0].1.size, 0);
        assert_eq!(terms[3].0.size, 0);
        // Q^{(n)}·1 = 0.
        let one = HeisenbergElement::one();
        for n in 1..=3 {
            let g = generator(&ctx, q(n)).unwrap();
            assert!(fock_apply(&ctx, &g, &one).unwrap().is_zero());
        }
        // Q^{(1)}·P^{(1)} = 1.
        let gq = generator(&ctx, q(1)).unwrap();
        let gp = generator(&ctx, p(1)).unwrap();
        assert_eq!(fock_apply(&ctx, &gq, &gp).unwrap(), HeisenbergElement::one());
        // P^{(1)}·1 = P^{(1)}.
        assert_eq!(fock_apply(&ctx, &gp, &one).unwrap(), gp);
    }

    fn random_element(
        _ctx: &HeisenbergContext,
        rng: &mut StdRng,
        shape: SymShape,
    ) -> HeisenbergElement {
        let mut e = HeisenbergElement::zero();
        for _ in 0..3 {
            let np = rng.gen_range(0..3);
            let nq = rng.gen_range(0..3);
            let mut pm: Vec<_> = (0..np)
                .map(|_| (0usize, shape, rng.gen_range(1..4usize)))
                .collect();
            let mut qm: Vec<_> = (0..nq)
                .map(|_| (0usize, shape, rng.gen_range(1..4usize)))
                .collect();
            pm.sort();
            qm.sort();
            e.add_term(
                (pm, qm),
                QPiLaurent::from_rat(rat(rng.gen_range(-3i128..=3), 1)),
            );
        }
        e
    }

    #[test]
    fn omega_involution_and_naturality() {
        let alg = builtin("dual_numbers").unwrap();
        let ctx = HeisenbergContext::new(&alg);
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..100 {
            let x = random_element(&ctx, &mut rng, SymShape::Row);
            assert_eq!(omega(&ctx, &omega(&ctx, &x)), x);
        }
        // ω intertwines the row-row and column-column presentations: ordering
        // Q^{(n)}P^{(m)} and then applying ω equals ordering the ω-image.
        for n in 1..=3usize {
            for m in 1..=3usize {
                let a = normal_order(&ctx, &[q(n), p(m)], Presentation::RowRow).unwrap();
                let qc = GeneratorSymbol::new(Side::Q, 0, SymShape::Column, n);
                let pc = GeneratorSymbol::new(Side::P, 0, SymShape::Column, m);
                let b = normal_order(&ctx, &[qc, pc], Presentation::ColumnColumn).unwrap();
                assert_eq!(omega(&ctx, &a), b, "n={n} m={m}");
            }
        }
    }

    #[test]
    fn product_associativity() {
        let alg = builtin("dual_numbers").unwrap();
        let ctx = HeisenbergContext::new(&alg);
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..20 {
            let a = random_element(&ctx, &mut rng, SymShape::Row);
            let b = random_element(&ctx, &mut rng, SymShape::Row);
            let c = random_element(&ctx, &mut rng, SymShape::Row);
            let ab_c = a.mul(&ctx, &b).unwrap().mul(&ctx, &c).unwrap();
            let a_bc = a.mul(&ctx, &b.mul(&ctx, &c).unwrap()).unwrap();
            assert_eq!(ab_c, a_bc);
        }
    }

    #[test]
    fn presentation_shape_guard() {
        let alg = builtin("trivial").unwrap();
        let ctx = HeisenbergContext::new(&alg);
        let qc = GeneratorSymbol::new(Side::Q, 0, SymShape::Column, 1);
        assert!(matches!(
            normal_order(&ctx, &[qc, p(1)], Presentation::RowRow),
            Err(HeisenbergError::UnknownGenerator(_))
        ));
        // Mixed presentation accepts it.
        assert!(normal_order(&ctx, &[qc, p(1)], Presentation::RowColumn).is_ok());
    }
}
