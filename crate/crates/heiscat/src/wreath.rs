//! Arithmetic in the wreath product algebras `A_n = B^⊗n ⋊ S_n`:
//! superpermutation signs, the trace `tr_n`, the Nakayama automorphism `ψ_n`,
//! Jucys–Murphy elements, Frobenius-extension data, and the (anti)symmetrizer
//! idempotents.

use crate::coeff::Rat;
#[cfg(test)]
use crate::coeff::rint;
use crate::frobenius::FrobeniusAlgebra;
use itertools::Itertools;
use num::{One, Zero};
use std::collections::BTreeMap;

/// A permutation of `{1, …, n}` in one-line notation, stored 0-based:
/// `i ↦ images[i]`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Perm(pub Vec<u8>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n as u8).collect())
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &v)| i as u8 == v)
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i] as usize
    }

    /// Adjacent transposition `s_i` (1-based, swaps `i` and `i+1`) in `S_n`.
    pub fn s(i: usize, n: usize) -> Self {
        assert!(i >= 1 && i < n);
        let mut p = Perm::identity(n);
        p.0.swap(i - 1, i);
        p
    }

    /// Transposition `(i, j)` with 1-based indices.
    pub fn transposition(i: usize, j: usize, n: usize) -> Self {
        assert!(i >= 1 && j >= 1 && i <= n && j <= n && i != j);
        let mut p = Perm::identity(n);
        p.0.swap(i - 1, j - 1);
        p
    }

    /// `self ∘ other`: first `other`, then `self`.
    pub fn compose(&self, other: &Perm) -> Perm {
        assert_eq!(self.n(), other.n());
        Perm(other.0.iter().map(|&i| self.0[i as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u8; self.n()];
        for (i, &v) in self.0.iter().enumerate() {
            inv[v as usize] = i as u8;
        }
        Perm(inv)
    }

    /// Coxeter length = number of inversions.
    pub fn length(&self) -> usize {
        let n = self.n();
        (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .filter(|&(i, j)| self.0[i] > self.0[j])
            .count()
    }

    /// A reduced word in the generators `s_i` (1-based indices), such that the
    /// product `s_{w_1} ⋯ s_{w_ℓ}` equals `self`.
    pub fn reduced_word(&self) -> Vec<usize> {
        // Bubble sort: repeatedly remove descents of the one-line form.
        let mut p = self.0.clone();
        let mut word = Vec::new();
        let n = p.len();
        loop {
            let mut swapped = false;
            for i in 0..n.saturating_sub(1) {
                if p[i] > p[i + 1] {
                    p.swap(i, i + 1);
                    word.push(i + 1);
                    swapped = true;
                }
            }
            if !swapped {
                break;
            }
        }
        // Sorting w = id by right-multiplications s_i means w = s_{i_ℓ}⋯s_{i_1}
        // read in reverse order of the swaps.
        word.reverse();
        word
    }

    pub fn sign(&self) -> Rat {
        if self.length() % 2 == 1 {
            -Rat::one()
        } else {
            Rat::one()
        }
    }

    /// Whether the last point `n` is fixed, so the permutation restricts to
    /// `S_{n−1}`.
    pub fn fixes_last(&self) -> bool {
        let n = self.n();
        n == 0 || self.0[n - 1] == (n - 1) as u8
    }

    /// Restrict to `S_m` (requires all points `> m` fixed).
    pub fn truncate(&self, m: usize) -> Perm {
        assert!(self.0[m..].iter().enumerate().all(|(k, &v)| v as usize == m + k));
        Perm(self.0[..m].to_vec())
    }

    /// Extend to `S_m` fixing the new points.
    pub fn extend(&self, m: usize) -> Perm {
        assert!(m >= self.n());
        let mut v = self.0.clone();
        v.extend(self.n() as u8..m as u8);
        Perm(v)
    }
}

/// One basis term `(b_1 ⊗ ⋯ ⊗ b_n)·τ` of `A_n`: tensor factors are indices
/// into the basis of `B`.
pub type Tensor = Vec<u8>;
pub type Term = (Tensor, Perm);

/// An element of `A_n = B^⊗n ⋊ S_n` as a sparse rational combination of
/// basis terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WreathElement {
    pub n: usize,
    pub terms: BTreeMap<Term, Rat>,
}

impl WreathElement {
    pub fn zero(n: usize) -> Self {
        WreathElement {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, t: Term, c: Rat) {
        if c.is_zero() {
            return;
        }
        debug_assert_eq!(t.0.len(), self.n);
        debug_assert_eq!(t.1.n(), self.n);
        let e = self.terms.entry(t).or_insert_with(Rat::zero);
        *e += c;
        if e.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn from_term(n: usize, t: Term, c: Rat) -> Self {
        let mut e = WreathElement::zero(n);
        e.add_term(t, c);
        e
    }

    pub fn from_perm(n: usize, p: Perm, unit_tensor: Tensor) -> Self {
        WreathElement::from_term(n, (unit_tensor, p), Rat::one())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let mut out = self.clone();
        for (t, c) in &other.terms {
            out.add_term(t.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rat::one()))
    }

    pub fn scale(&self, s: &Rat) -> Self {
        if s.is_zero() {
            return WreathElement::zero(self.n);
        }
        WreathElement {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(t, c)| (t.clone(), c.clone() * s.clone()))
                .collect(),
        }
    }
}

/// The identity `1_n` of `A_n`; the unit of `B` need not be a basis element,
/// so this can have several terms.
pub fn one(alg: &FrobeniusAlgebra, n: usize) -> WreathElement {
    let mut out = WreathElement::zero(n);
    for (tensor, coeff) in unit_tensors(alg, n) {
        out.add_term((tensor, Perm::identity(n)), coeff);
    }
    out
}

/// Expand `1^{⊗n}` over the basis of `B^{⊗n}`.
fn unit_tensors(alg: &FrobeniusAlgebra, n: usize) -> Vec<(Tensor, Rat)> {
    let mut acc: Vec<(Tensor, Rat)> = vec![(Vec::new(), Rat::one())];
    for _ in 0..n {
        let mut next = Vec::new();
        for (t, c) in &acc {
            for (k, u) in alg.unit().iter().enumerate() {
                if u.is_zero() {
                    continue;
                }
                let mut t2 = t.clone();
                t2.push(k as u8);
                next.push((t2, c.clone() * u.clone()));
            }
        }
        acc = next;
    }
    acc
}

/// Expand an element `v ∈ B` placed at slot `pos` (0-based) with units in the
/// other slots of `B^{⊗n}`.
pub fn insert_at(alg: &FrobeniusAlgebra, n: usize, pos: usize, v: &[Rat]) -> Vec<(Tensor, Rat)> {
    let mut out = Vec::new();
    for (t, c) in unit_tensors(alg, n - 1) {
        for (k, ck) in v.iter().enumerate() {
            if ck.is_zero() {
                continue;
            }
            let mut t2 = t.clone();
            t2.insert(pos, k as u8);
            out.push((t2, c.clone() * ck.clone()));
        }
    }
    out
}

/// The parity (mod 2) of a pure tensor.
pub fn tensor_parity(alg: &FrobeniusAlgebra, t: &[u8]) -> u8 {
    t.iter().map(|&k| alg.par(k as usize)).sum::<u8>() % 2
}

pub fn term_degree(alg: &FrobeniusAlgebra, t: &Term) -> (i64, u8) {
    (
        t.0.iter().map(|&k| alg.deg(k as usize)).sum(),
        tensor_parity(alg, &t.0),
    )
}

/// Degree of a homogeneous element; `None` for 0, panics on inhomogeneity.
pub fn element_degree(alg: &FrobeniusAlgebra, a: &WreathElement) -> Option<(i64, u8)> {
    let mut deg = None;
    for t in a.terms.keys() {
        let d = term_degree(alg, t);
        match deg {
            None => deg = Some(d),
            Some(d0) => assert_eq!(d0, d, "element is not homogeneous"),
        }
    }
    deg
}

/// Act by `τ` on a pure tensor with the Koszul sign
/// `(−1)^{Σ_{i<j, τ(i)>τ(j)} \bar b_i \bar b_j}`; the factor originally in
/// slot `i` moves to slot `τ(i)`.
pub fn super_permute(alg: &FrobeniusAlgebra, tau: &Perm, t: &[u8]) -> (Rat, Tensor) {
    let n = t.len();
    assert_eq!(tau.n(), n);
    let mut exp = 0u32;
    for i in 0..n {
        for j in i + 1..n {
            if tau.0[i] > tau.0[j] {
                exp += (alg.par(t[i] as usize) * alg.par(t[j] as usize)) as u32;
            }
        }
    }
    let mut out = vec![0u8; n];
    for (i, &b) in t.iter().enumerate() {
        out[tau.0[i] as usize] = b;
    }
    let sign = if exp % 2 == 1 { -Rat::one() } else { Rat::one() };
    (sign, out)
}

/// Multiply two basis terms and accumulate into `out`.
fn term_multiply(
    alg: &FrobeniusAlgebra,
    t1: &Term,
    c1: &Rat,
    t2: &Term,
    c2: &Rat,
    out: &mut WreathElement,
) {
    let (psign, moved) = super_permute(alg, &t1.1, &t2.0);
    // Pure-tensor product sign: (b_1⊗⋯)(c_1⊗⋯) picks up
    // (−1)^{Σ_{i>j} \bar b_i \bar c_j}.
    let mut exp = 0u32;
    let mut suffix_par = 0u8; // parity of c_1…c_{i-1} as i grows
    let n = t1.0.len();
    let mut prefix: Vec<u8> = Vec::new();
    // Compute exponent Σ_{i>j} par(b_i)·par(c_j) = Σ_i par(b_i)·par(c_1…c_{i−1}).
    for i in 0..n {
        exp += (alg.par(t1.0[i] as usize) * suffix_par) as u32;
        suffix_par = (suffix_par + alg.par(moved[i] as usize)) % 2;
    }
    let _ = &mut prefix;
    let base = c1.clone()
        * c2.clone()
        * psign
        * if exp % 2 == 1 { -Rat::one() } else { Rat::one() };
    let perm = t1.1.compose(&t2.1);
    // Expand the factorwise products in B.
    let mut partial: Vec<(Tensor, Rat)> = vec![(Vec::with_capacity(n), base)];
    for i in 0..n {
        let prods = alg.mult_basis(t1.0[i] as usize, moved[i] as usize);
        if prods.is_empty() {
            return;
        }
        let mut next = Vec::with_capacity(partial.len() * prods.len());
        for (t, c) in &partial {
            for (k, ck) in prods {
                let mut t2v = t.clone();
                t2v.push(*k as u8);
                next.push((t2v, c.clone() * ck.clone()));
            }
        }
        partial = next;
    }
    for (t, c) in partial {
        out.add_term((t, perm.clone()), c);
    }
}

pub fn multiply(alg: &FrobeniusAlgebra, a: &WreathElement, b: &WreathElement) -> WreathElement {
    assert_eq!(a.n, b.n, "rank mismatch in wreath multiplication");
    let mut out = WreathElement::zero(a.n);
    for (t1, c1) in &a.terms {
        for (t2, c2) in &b.terms {
            term_multiply(alg, t1, c1, t2, c2, &mut out);
        }
    }
    out
}

/// `tr_n`: kills terms with nontrivial permutation, takes the product of the
/// factorwise traces otherwise.
pub fn trace_n(alg: &FrobeniusAlgebra, a: &WreathElement) -> Rat {
    let mut total = Rat::zero();
    for (t, c) in &a.terms {
        if !t.1.is_identity() {
            continue;
        }
        let mut prod = c.clone();
        for &k in &t.0 {
            prod *= alg.trace_basis(k as usize);
            if prod.is_zero() {
                break;
            }
        }
        total += prod;
    }
    total
}

/// `ψ_n`: factorwise `ψ_B` on tensors, `(−1)^σ` per adjacent transposition.
pub fn nakayama_n(alg: &FrobeniusAlgebra, a: &WreathElement) -> WreathElement {
    let mut out = WreathElement::zero(a.n);
    for (t, c) in &a.terms {
        let psign = if alg.sigma == 1 && t.1.length() % 2 == 1 {
            -Rat::one()
        } else {
            Rat::one()
        };
        let mut partial: Vec<(Tensor, Rat)> = vec![(Vec::with_capacity(a.n), c.clone() * psign)];
        for &k in &t.0 {
            let image = &alg.nakayama[k as usize];
            let mut next = Vec::new();
            for (tv, cv) in &partial {
                for (m, cm) in image.iter().enumerate() {
                    if cm.is_zero() {
                        continue;
                    }
                    let mut t2 = tv.clone();
                    t2.push(m as u8);
                    next.push((t2, cv.clone() * cm.clone()));
                }
            }
            partial = next;
        }
        for (tv, cv) in partial {
            out.add_term((tv, t.1.clone()), cv);
        }
    }
    out
}

/// Embed `A_n ↪ A_m` (append tensor factors `1`, fix the new points).
pub fn embed(alg: &FrobeniusAlgebra, a: &WreathElement, m: usize) -> WreathElement {
    assert!(m >= a.n);
    let mut out = WreathElement::zero(m);
    for (t, c) in &a.terms {
        for (ext, ce) in unit_tensors(alg, m - a.n) {
            let mut t2 = t.0.clone();
            t2.extend(ext);
            out.add_term((t2, t.1.extend(m)), c.clone() * ce.clone());
        }
    }
    out
}

/// The Jucys–Murphy element `J_n ∈ A_{n+1}`:
/// `J_n = Σ_{b,i} (−1)^{σ \bar b^∨} (b^∨ at i, b at n+1)·(i, n+1)`;
/// zero for `n ≤ 0`.
pub fn jucys_murphy(alg: &FrobeniusAlgebra, n: i64) -> WreathElement {
    let rank = if n <= 0 { 1 } else { n as usize + 1 };
    let mut out = WreathElement::zero(rank);
    if n <= 0 {
        return out;
    }
    let n = n as usize;
    for b in 0..alg.dim {
        let dual_par = alg.dual_par(b);
        let sign = if alg.sigma * dual_par == 1 {
            -Rat::one()
        } else {
            Rat::one()
        };
        for i in 1..=n {
            pair_insert(
                alg,
                rank,
                i - 1,
                &alg.dual_basis[b],
                n,
                b,
                &Perm::transposition(i, n + 1, rank),
                &sign,
                &mut out,
            );
        }
    }
    out
}

/// Accumulate `coeff · (v at slot i ⊗ b_{fixed} at slot j) · τ` where `v` is a
/// coordinate vector, all other slots unit.
#[allow(clippy::too_many_arguments)]
fn pair_insert(
    alg: &FrobeniusAlgebra,
    rank: usize,
    slot_v: usize,
    v: &[Rat],
    slot_b: usize,
    b: usize,
    tau: &Perm,
    coeff: &Rat,
    out: &mut WreathElement,
) {
    // Build tensors with v expanded at slot_v, basis b at slot_b, units elsewhere.
    let mut partial: Vec<(Tensor, Rat)> = vec![(Vec::with_capacity(rank), coeff.clone())];
    for slot in 0..rank {
        let choices: Vec<(u8, Rat)> = if slot == slot_v {
            v.iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| (k as u8, c.clone()))
                .collect()
        } else if slot == slot_b {
            vec![(b as u8, Rat::one())]
        } else {
            alg.unit()
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| (k as u8, c.clone()))
                .collect()
        };
        let mut next = Vec::new();
        for (tv, cv) in &partial {
            for (k, ck) in &choices {
                let mut t2 = tv.clone();
                t2.push(*k);
                next.push((t2, cv.clone() * ck.clone()));
            }
        }
        partial = next;
    }
    for (t, c) in partial {
        out.add_term((t, tau.clone()), c);
    }
}

/// `t_{i,j} = Σ_b (−1)^{σ\bar b + σ} (b^∨ at i, b at j)·(i, j) ∈ A_n`,
/// `1 ≤ i < j ≤ n`.
pub fn t_elem(alg: &FrobeniusAlgebra, i: usize, j: usize, n: usize) -> WreathElement {
    assert!(1 <= i && i < j && j <= n, "t_elem indices out of range");
    let mut out = WreathElement::zero(n);
    for b in 0..alg.dim {
        let exp = alg.sigma * alg.par(b) + alg.sigma;
        let sign = if exp % 2 == 1 { -Rat::one() } else { Rat::one() };
        pair_insert(
            alg,
            n,
            i - 1,
            &alg.dual_basis[b],
            j - 1,
            b,
            &Perm::transposition(i, j, n),
            &sign,
            &mut out,
        );
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    Row,
    Column,
}

/// `e_{f,(n)} = (f⊗⋯⊗f)·(1/n!)Σ_w w` (row) or with `(−1)^{ℓ(w)}` (column).
pub fn symmetrizer_idempotent(
    alg: &FrobeniusAlgebra,
    f: &[Rat],
    shape: Shape,
    n: usize,
) -> WreathElement {
    assert_eq!(
        alg.mult(f, f),
        f.to_vec(),
        "symmetrizer requires an idempotent"
    );
    for (k, c) in f.iter().enumerate() {
        assert!(
            c.is_zero() || (alg.deg(k) == 0 && alg.par(k) == 0),
            "symmetrizer requires a degree-(0,0) idempotent"
        );
    }
    // Expand f⊗⋯⊗f.
    let mut tensors: Vec<(Tensor, Rat)> = vec![(Vec::new(), Rat::one())];
    for _ in 0..n {
        let mut next = Vec::new();
        for (t, c) in &tensors {
            for (k, ck) in f.iter().enumerate() {
                if ck.is_zero() {
                    continue;
                }
                let mut t2 = t.clone();
                t2.push(k as u8);
                next.push((t2, c.clone() * ck.clone()));
            }
        }
        tensors = next;
    }
    let mut fact = 1i128;
    for k in 2..=n as i128 {
        fact *= k;
    }
    let inv = Rat::new(1, fact);
    let mut out = WreathElement::zero(n);
    for w in (0..n as u8).permutations(n) {
        let p = Perm(w);
        let s = match shape {
            Shape::Row => Rat::one(),
            Shape::Column => p.sign(),
        };
        for (t, c) in &tensors {
            out.add_term((t.clone(), p.clone()), c.clone() * s.clone() * inv.clone());
        }
    }
    out
}

/// `x_{b,i} = (1^{⊗n} ⊗ b)·s_n ⋯ s_i ∈ A_{n+1}` for `1 ≤ i ≤ n+1`
/// (the empty product when `i = n+1`).
pub fn x_elem(alg: &FrobeniusAlgebra, b: usize, i: usize, n: usize) -> WreathElement {
    assert!(1 <= i && i <= n + 1);
    let rank = n + 1;
    let mut out = WreathElement::zero(rank);
    for (t, c) in insert_at(alg, rank, rank - 1, &alg.basis_vec(b)) {
        out.add_term((t, Perm::identity(rank)), c);
    }
    multiply_by_perm_right(alg, &out, &word_perm(i, n, rank))
}

/// The group element `s_n s_{n−1} ⋯ s_i` of `S_{rank}` (`rank = n+1`),
/// i.e. the cycle sending `i ↦ n+1` and `m ↦ m−1` for `m > i`.
fn word_perm(i: usize, n: usize, rank: usize) -> Perm {
    let _ = n;
    let mut q: Vec<u8> = (0..rank as u8).collect();
    for (m, v) in q.iter_mut().enumerate() {
        *v = if m + 1 == i {
            rank as u8 - 1
        } else if m + 1 > i {
            (m - 1) as u8
        } else {
            m as u8
        };
    }
    Perm(q)
}

fn multiply_by_perm_right(
    alg: &FrobeniusAlgebra,
    a: &WreathElement,
    p: &Perm,
) -> WreathElement {
    let _ = alg;
    let mut out = WreathElement::zero(a.n);
    for (t, c) in &a.terms {
        out.add_term((t.0.clone(), t.1.compose(p)), c.clone());
    }
    out
}

/// `y_{b,i} = s_i ⋯ s_n · (1^{⊗n} ⊗ b^∨) ∈ A_{n+1}`.
pub fn y_elem(alg: &FrobeniusAlgebra, b: usize, i: usize, n: usize) -> WreathElement {
    assert!(1 <= i && i <= n + 1);
    let rank = n + 1;
    let perm = word_perm(i, n, rank).inverse(); // s_i ⋯ s_n = (s_n ⋯ s_i)⁻¹
    let mut tensor = WreathElement::zero(rank);
    for (t, c) in insert_at(alg, rank, rank - 1, &alg.dual_basis[b]) {
        tensor.add_term((t, Perm::identity(rank)), c);
    }
    let mut perm_elem = WreathElement::zero(rank);
    for (t, c) in unit_tensors(alg, rank) {
        perm_elem.add_term((t, perm.clone()), c);
    }
    multiply(alg, &perm_elem, &tensor)
}

/// `z_{b,i} = s_i ⋯ s_n · (1^{⊗n} ⊗ b)`: the canonical free right
/// `A_n`-module basis of `A_{n+1}` used for bimodule cells.
pub fn cell_elem(alg: &FrobeniusAlgebra, b: usize, i: usize, n: usize) -> WreathElement {
    assert!(1 <= i && i <= n + 1);
    let rank = n + 1;
    let perm = word_perm(i, n, rank).inverse();
    let mut tensor = WreathElement::zero(rank);
    for (t, c) in insert_at(alg, rank, rank - 1, &alg.basis_vec(b)) {
        tensor.add_term((t, Perm::identity(rank)), c);
    }
    let mut perm_elem = WreathElement::zero(rank);
    for (t, c) in unit_tensors(alg, rank) {
        perm_elem.add_term((t, perm.clone()), c);
    }
    multiply(alg, &perm_elem, &tensor)
}

/// The dual generating sets `{x_{b,i}}` and `{y_{b,i}}` for the Frobenius
/// extension `A_n ⊂ A_{n+1}`, indexed by `(b, i)`.
pub fn frobext_dual_sets(
    alg: &FrobeniusAlgebra,
    n: usize,
) -> (Vec<((usize, usize), WreathElement)>, Vec<((usize, usize), WreathElement)>) {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for b in 0..alg.dim {
        for i in 1..=n + 1 {
            xs.push(((b, i), x_elem(alg, b, i, n)));
            ys.push(((b, i), y_elem(alg, b, i, n)));
        }
    }
    (xs, ys)
}

/// The Frobenius-extension trace `A_{n+1} → A_n`:
/// `(𝐛)τ ↦ (−1)^{σ(\bar b_1 + ⋯ + \bar b_n)} tr_B(b_{n+1}) (b_1⊗⋯⊗b_n)τ`
/// when `τ` fixes `n+1`, and `0` otherwise.
pub fn extension_trace(alg: &FrobeniusAlgebra, a: &WreathElement) -> WreathElement {
    assert!(a.n >= 1);
    let n = a.n - 1;
    let mut out = WreathElement::zero(n);
    for (t, c) in &a.terms {
        if !t.1.fixes_last() {
            continue;
        }
        let tb = alg.trace_basis(t.0[n] as usize);
        if tb.is_zero() {
            continue;
        }
        let head_par: u8 = t.0[..n].iter().map(|&k| alg.par(k as usize)).sum::<u8>() % 2;
        let sign = if alg.sigma * head_par == 1 {
            -Rat::one()
        } else {
            Rat::one()
        };
        out.add_term((t.0[..n].to_vec(), t.1.truncate(n)), c.clone() * tb * sign);
    }
    out
}

/// Decompose a basis term `u = (𝐛, τ) ∈ A_{n+1}` as
/// `u = sign · z_{b,i} · (𝐜, τ′)` with `(𝐜, τ′) ∈ A_n` a basis term:
/// returns `(b, i, tail_term, sign)`.  Exact and monomial for every `B`.
pub fn right_decompose_term(
    alg: &FrobeniusAlgebra,
    t: &Term,
) -> (usize, usize, Term, Rat) {
    let rank = t.0.len();
    assert!(rank >= 1);
    let n = rank - 1;
    let i = t.1.apply(n) + 1; // 1-based slot receiving strand n+1
    let b = t.0[i - 1] as usize;
    let d_i = word_perm(i, n, rank).inverse();
    let tail_perm = d_i.inverse().compose(&t.1).truncate(n);
    let mut tail_tensor = t.0.clone();
    tail_tensor.remove(i - 1);
    let tail: Term = (tail_tensor, tail_perm);
    // Determine the sign by multiplying back: only unit products occur, so
    // the product is a single term ±u.
    let z = cell_elem(alg, b, i, n);
    let tail_elem = embed(
        alg,
        &WreathElement::from_term(n, tail.clone(), Rat::one()),
        rank,
    );
    let prod = multiply(alg, &z, &tail_elem);
    let mut sign = Rat::zero();
    for (pt, pc) in &prod.terms {
        if pt == t {
            sign = pc.clone();
        } else {
            assert!(
                pc.is_zero(),
                "straightening produced an unexpected extra term"
            );
        }
    }
    assert!(
        sign.clone() * sign.clone() == Rat::one(),
        "straightening sign must be ±1"
    );
    (b, i, tail, sign)
}

/// Enumerate the full standard basis of `A_n` in a deterministic order.
pub fn basis(alg: &FrobeniusAlgebra, n: usize) -> Vec<Term> {
    let mut tensors: Vec<Tensor> = vec![Vec::new()];
    for _ in 0..n {
        tensors = tensors
            .into_iter()
            .flat_map(|t| {
                (0..alg.dim as u8).map(move |k| {
                    let mut t2 = t.clone();
                    t2.push(k);
                    t2
                })
            })
            .collect();
    }
    let perms: Vec<Perm> = (0..n as u8).permutations(n).map(Perm).collect();
    let mut out = Vec::with_capacity(tensors.len() * perms.len());
    for t in &tensors {
        for p in &perms {
            out.push((t.clone(), p.clone()));
        }
    }
    out
}

/// dim `A_n` = (dim B)^n · n!.
pub fn dim_a_n(alg: &FrobeniusAlgebra, n: usize) -> usize {
    (1..=n).map(|k| alg.dim * k).product()
}

/// Lexicographic rank of a permutation among all of `S_n` (factorial number
/// system), matching the enumeration order of [`basis`].
pub fn perm_rank(p: &Perm) -> usize {
    let n = p.n();
    let mut rank = 0usize;
    let mut fact: usize = (1..n.max(1)).product();
    for i in 0..n {
        let smaller = (i + 1..n).filter(|&j| p.0[j] < p.0[i]).count();
        rank += smaller * fact;
        if n - i > 1 {
            fact /= n - i - 1;
        }
    }
    rank
}

pub fn perm_unrank(n: usize, mut rank: usize) -> Perm {
    let mut avail: Vec<u8> = (0..n as u8).collect();
    let mut fact: usize = (1..n.max(1)).product();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let idx = rank / fact;
        rank %= fact;
        out.push(avail.remove(idx));
        if n - i > 1 {
            fact /= n - i - 1;
        }
    }
    Perm(out)
}

/// Index of a basis term in the enumeration order of [`basis`].
pub fn term_index(alg: &FrobeniusAlgebra, t: &Term) -> usize {
    let n = t.0.len();
    let nfact: usize = (1..=n).product();
    let mut tensor_id = 0usize;
    for &k in &t.0 {
        tensor_id = tensor_id * alg.dim + k as usize;
    }
    tensor_id * nfact + perm_rank(&t.1)
}

pub fn term_unindex(alg: &FrobeniusAlgebra, n: usize, idx: usize) -> Term {
    let nfact: usize = (1..=n).product();
    let perm = perm_unrank(n, idx % nfact);
    let mut tensor_id = idx / nfact;
    let mut tensor = vec![0u8; n];
    for slot in (0..n).rev() {
        tensor[slot] = (tensor_id % alg.dim) as u8;
        tensor_id /= alg.dim;
    }
    (tensor, perm)
}

/// The documented rank cap for explicit basis-level computations with this
/// algebra; override with the `HEISCAT_SIZE_CAP` environment variable.
pub fn rank_cap(alg: &FrobeniusAlgebra) -> usize {
    if let Ok(v) = std::env::var("HEISCAT_SIZE_CAP") {
        if let Ok(n) = v.parse::<usize>() {
            return n;
        }
    }
    if alg.dim <= 2 {
        4
    } else {
        3
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frobenius::builtin;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn term1(n: usize, t: Tensor, p: Perm) -> WreathElement {
        WreathElement::from_term(n, (t, p), Rat::one())
    }

    #[test]
    fn perm_basics() {
        let s1 = Perm::s(1, 3);
        let s2 = Perm::s(2, 3);
        let w = s1.compose(&s2); // s1∘s2: 1→... check length 2
        assert_eq!(w.length(), 2);
        assert_eq!(w.compose(&w.inverse()), Perm::identity(3));
        // reduced_word reassembles the permutation.
        for p in (0..4u8).permutations(4).map(Perm) {
            let mut acc = Perm::identity(4);
            for i in p.reduced_word() {
                acc = acc.compose(&Perm::s(i, 4));
            }
            assert_eq!(acc, p, "reduced word fails for {:?}", p);
            assert_eq!(p.reduced_word().len(), p.length());
        }
    }

    #[test]
    fn super_permute_examples() {
        let cl = builtin("clifford").unwrap();
        // s₁·(c⊗c) = −(c⊗c).
        let (s, t) = super_permute(&cl, &Perm::s(1, 2), &[1, 1]);
        assert_eq!((s, t), (-rint(1), vec![1, 1]));
        // s₁·(1⊗c) = c⊗1, no sign.
        let (s, t) = super_permute(&cl, &Perm::s(1, 2), &[0, 1]);
        assert_eq!((s, t), (rint(1), vec![1, 0]));
    }

    #[test]
    fn super_permute_reduced_word_independence() {
        // Closed-form inversion sign agrees with sequential application of
        // adjacent transpositions along a reduced word.
        let cl = builtin("clifford").unwrap();
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..50 {
            let n = rng.gen_range(1..=4);
            let mut img: Vec<u8> = (0..n as u8).collect();
            for i in (1..n).rev() {
                img.swap(i, rng.gen_range(0..=i));
            }
            let p = Perm(img);
            let t: Tensor = (0..n).map(|_| rng.gen_range(0..2u8)).collect();
            let (sign, moved) = super_permute(&cl, &p, &t);
            // Sequential: apply adjacent swaps left factor first.
            let mut cur = t.clone();
            let mut s = Rat::one();
            // p = s_{w_1} ∘ ⋯ ∘ s_{w_ℓ}: rightmost acts first on the tensor.
            for &i in p.reduced_word().iter().rev() {
                if cl.par(cur[i - 1] as usize) * cl.par(cur[i] as usize) == 1 {
                    s = -s;
                }
                cur.swap(i - 1, i);
            }
            assert_eq!((sign, moved), (s, cur));
        }
    }

    #[test]
    fn multiply_examples() {
        let cl = builtin("clifford").unwrap();
        // 1·a = a.
        let a = term1(2, vec![1, 0], Perm::s(1, 2));
        assert_eq!(multiply(&cl, &one(&cl, 2), &a), a);
        assert_eq!(multiply(&cl, &a, &one(&cl, 2)), a);
        // (c⊗1)s₁ · (c⊗1)s₁ = (c⊗1)(1⊗c)s₁² = c⊗c.
        let cs = term1(2, vec![1, 0], Perm::s(1, 2));
        let sq = multiply(&cl, &cs, &cs);
        assert_eq!(sq, term1(2, vec![1, 1], Perm::identity(2)));
        // Dual numbers: s₁·(x⊗1) = (1⊗x)s₁.
        let dn = builtin("dual_numbers").unwrap();
        let s1 = term1(2, vec![0, 0], Perm::s(1, 2));
        let x1 = term1(2, vec![1, 0], Perm::identity(2));
        let lhs = multiply(&dn, &s1, &x1);
        assert_eq!(lhs, term1(2, vec![0, 1], Perm::s(1, 2)));
    }

    fn random_element(
        alg: &FrobeniusAlgebra,
        n: usize,
        rng: &mut StdRng,
        nterms: usize,
    ) -> WreathElement {
        let b = basis(alg, n);
        let mut e = WreathElement::zero(n);
        for _ in 0..nterms {
            let t = b[rng.gen_range(0..b.len())].clone();
            let c = rint(rng.gen_range(-3i128..=3));
            e.add_term(t, c);
        }
        e
    }

    #[test]
    fn associativity_random() {
        let mut rng = StdRng::seed_from_u64(11);
        for name in ["clifford", "zigzag_a2"] {
            let alg = builtin(name).unwrap();
            let n = 2;
            for _ in 0..10 {
                let a = random_element(&alg, n, &mut rng, 3);
                let b = random_element(&alg, n, &mut rng, 3);
                let c = random_element(&alg, n, &mut rng, 3);
                let lhs = multiply(&alg, &multiply(&alg, &a, &b), &c);
                let rhs = multiply(&alg, &a, &multiply(&alg, &b, &c));
                assert_eq!(lhs, rhs, "{name}: associativity fails");
            }
        }
    }

    #[test]
    fn trace_examples() {
        let triv = builtin("trivial").unwrap();
        // tr₂(s₁) = 0.
        assert_eq!(
            trace_n(&triv, &term1(2, vec![0, 0], Perm::s(1, 2))),
            rint(0)
        );
        // dual numbers: tr₂(x⊗x) = 1.
        let dn = builtin("dual_numbers").unwrap();
        assert_eq!(
            trace_n(&dn, &term1(2, vec![1, 1], Perm::identity(2))),
            rint(1)
        );
        // tr₁(1) = tr_B(1).
        assert_eq!(trace_n(&triv, &one(&triv, 1)), rint(1));
    }

    #[test]
    fn nakayama_examples_and_law() {
        let cl = builtin("clifford").unwrap();
        // ψ₂(s₁) = −s₁ for Cl (σ=1).
        let s1 = term1(2, vec![0, 0], Perm::s(1, 2));
        assert_eq!(nakayama_n(&cl, &s1), s1.scale(&-rint(1)));
        // exterior_line: ψ₂((ξ⊗1)s₁) = −(ξ⊗1)s₁.
        let el = builtin("exterior_line").unwrap();
        let a = term1(2, vec![1, 0], Perm::s(1, 2));
        assert_eq!(nakayama_n(&el, &a), a.scale(&-rint(1)));
        // Nakayama law on random pairs: tr(ab) = (−1)^{āb̄} tr(b ψ(a)).
        let mut rng = StdRng::seed_from_u64(23);
        for name in ["clifford", "dual_numbers", "exterior_line", "zigzag_a2"] {
            let alg = builtin(name).unwrap();
            for (t1, _) in basis(&alg, 2).iter().map(|t| (t, ())).take(60) {
                let a = WreathElement::from_term(2, t1.clone(), Rat::one());
                let bt = basis(&alg, 2);
                let t2 = bt[rng.gen_range(0..bt.len())].clone();
                let b = WreathElement::from_term(2, t2.clone(), Rat::one());
                let pa = term_degree(&alg, t1).1;
                let pb = term_degree(&alg, &t2).1;
                let lhs = trace_n(&alg, &multiply(&alg, &a, &b));
                let s = if pa * pb == 1 { -rint(1) } else { rint(1) };
                let rhs = s * trace_n(&alg, &multiply(&alg, &b, &nakayama_n(&alg, &a)));
                assert_eq!(lhs, rhs, "{name}: wreath Nakayama law fails");
            }
        }
    }

    #[test]
    fn jucys_murphy_examples() {
        let triv = builtin("trivial").unwrap();
        assert!(jucys_murphy(&triv, 0).is_zero());
        // B=𝔽, n=1 → s₁.
        assert_eq!(
            jucys_murphy(&triv, 1),
            term1(2, vec![0, 0], Perm::s(1, 2))
        );
        // B=𝔽, n=2 → (1,3) + (2,3).
        let j2 = jucys_murphy(&triv, 2);
        let expect = term1(3, vec![0, 0, 0], Perm::transposition(1, 3, 3))
            .add(&term1(3, vec![0, 0, 0], Perm::transposition(2, 3, 3)));
        assert_eq!(j2, expect);
    }

    #[test]
    fn jucys_murphy_commutes_with_a_n() {
        for name in ["clifford", "dual_numbers"] {
            let alg = builtin(name).unwrap();
            let n = 2;
            let j = jucys_murphy(&alg, n as i64);
            // J_n has parity σ, so it super-commutes with the image of A_n.
            for t in basis(&alg, n) {
                let pa = term_degree(&alg, &t).1;
                let a = embed(
                    &alg,
                    &WreathElement::from_term(n, t, Rat::one()),
                    n + 1,
                );
                let s = if alg.sigma * pa == 1 { -rint(1) } else { rint(1) };
                assert_eq!(
                    multiply(&alg, &j, &a),
                    multiply(&alg, &a, &j).scale(&s),
                    "{name}: J_n fails to super-commute with A_n"
                );
            }
        }
    }

    #[test]
    fn t_elem_decomposition() {
        // Σ_{i<n} t_{i,n} = J_{n−1} embedded in A_n.
        let triv = builtin("trivial").unwrap();
        let n = 3;
        let mut sum = WreathElement::zero(n);
        for i in 1..n {
            sum = sum.add(&t_elem(&triv, i, n, n));
        }
        assert_eq!(sum, jucys_murphy(&triv, (n - 1) as i64));
        let cl = builtin("clifford").unwrap();
        let n = 2;
        let mut sum = WreathElement::zero(n);
        for i in 1..n {
            sum = sum.add(&t_elem(&cl, i, n, n));
        }
        assert_eq!(sum, jucys_murphy(&cl, (n - 1) as i64));
    }

    #[test]
    fn symmetrizer() {
        let triv = builtin("trivial").unwrap();
        // f=1, n=2, row → ½(1 + s₁).
        let e = symmetrizer_idempotent(&triv, triv.unit(), Shape::Row, 2);
        let expect = one(&triv, 2)
            .add(&term1(2, vec![0, 0], Perm::s(1, 2)))
            .scale(&Rat::new(1, 2));
        assert_eq!(e, expect);
        assert_eq!(multiply(&triv, &e, &e), e);

        // zigzag e₁, n=2, column: idempotent, absorbs crossings with sign.
        let zz = builtin("zigzag_a2").unwrap();
        let f = zz.basis_vec(0);
        let e = symmetrizer_idempotent(&zz, &f, Shape::Column, 2);
        assert_eq!(multiply(&zz, &e, &e), e);
        let s1 = WreathElement::from_term(
            2,
            (vec![0, 0], Perm::s(1, 2)),
            Rat::one(),
        );
        // e·(e₁⊗e₁)s₁ = −e (column shape).
        assert_eq!(multiply(&zz, &e, &s1), e.scale(&-rint(1)));
        assert_eq!(multiply(&zz, &s1, &e), e.scale(&-rint(1)));
        // Row shape absorbs without sign.
        let er = symmetrizer_idempotent(&zz, &f, Shape::Row, 2);
        assert_eq!(multiply(&zz, &er, &s1), er);
    }

    #[test]
    fn frobext_pairing() {
        // extension_trace(x_{b,i} · y_{c,j}) = δ_{ij} δ_{bc} · 1_n.
        for name in ["trivial", "clifford", "dual_numbers"] {
            let alg = builtin(name).unwrap();
            for n in 0..=2usize {
                let (xs, ys) = frobext_dual_sets(&alg, n);
                for ((bx, ix), x) in &xs {
                    for ((by, iy), y) in &ys {
                        let p = extension_trace(&alg, &multiply(&alg, x, y));
                        let expect = if bx == by && ix == iy {
                            one(&alg, n)
                        } else {
                            WreathElement::zero(n)
                        };
                        assert_eq!(
                            p, expect,
                            "{name}: pairing fails at x_{{{bx},{ix}}}, y_{{{by},{iy}}}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn frobext_examples() {
        // B=𝔽, n=1: x-set = {s₁, 1}.
        let triv = builtin("trivial").unwrap();
        let (xs, _) = frobext_dual_sets(&triv, 1);
        assert_eq!(xs[0].1, term1(2, vec![0, 0], Perm::s(1, 2)));
        assert_eq!(xs[1].1, one(&triv, 2));
        // extension_trace(1_{n+1}) = tr_B(1)·1_n.
        let cl = builtin("clifford").unwrap();
        assert_eq!(
            extension_trace(&cl, &one(&cl, 3)),
            one(&cl, 2).scale(&cl.trace(cl.unit()))
        );
        // dual numbers: extension_trace(1⊗⋯⊗1⊗x) = 1_n.
        let dn = builtin("dual_numbers").unwrap();
        let mut a = WreathElement::zero(3);
        for (t, c) in insert_at(&dn, 3, 2, &dn.basis_vec(1)) {
            a.add_term((t, Perm::identity(3)), c);
        }
        assert_eq!(extension_trace(&dn, &a), one(&dn, 2));
    }

    #[test]
    fn right_decomposition_bijective() {
        for name in ["clifford", "zigzag_a2"] {
            let alg = builtin(name).unwrap();
            for n in 1..=2usize {
                let mut seen = std::collections::BTreeSet::new();
                for t in basis(&alg, n + 1) {
                    let (b, i, tail, sign) = right_decompose_term(&alg, &t);
                    assert!(seen.insert((b, i, tail.clone())), "decomposition not injective");
                    // Reconstruct.
                    let z = cell_elem(&alg, b, i, n);
                    let a = embed(
                        &alg,
                        &WreathElement::from_term(n, tail, sign),
                        n + 1,
                    );
                    assert_eq!(
                        multiply(&alg, &z, &a),
                        WreathElement::from_term(n + 1, t, Rat::one()),
                        "{name}: decomposition fails to reconstruct"
                    );
                }
                assert_eq!(seen.len(), dim_a_n(&alg, n + 1) / 1, "wrong count");
            }
        }
    }

    #[test]
    fn term_indexing_round_trip() {
        let zz = builtin("zigzag_a2").unwrap();
        for n in 0..=2usize {
            for (i, t) in basis(&zz, n).iter().enumerate() {
                assert_eq!(term_index(&zz, t), i);
                assert_eq!(&term_unindex(&zz, n, i), t);
            }
        }
    }

    #[test]
    fn x_set_is_left_basis() {
        // A_{n+1} = ⊕_{b,i} A_n·x_{b,i}: exact rank check.
        for name in ["clifford", "dual_numbers"] {
            let alg = builtin(name).unwrap();
            for n in 0..=2usize {
                let full = basis(&alg, n + 1);
                let index: std::collections::BTreeMap<Term, usize> = full
                    .iter()
                    .cloned()
                    .enumerate()
                    .map(|(i, t)| (t, i))
                    .collect();
                let (xs, _) = frobext_dual_sets(&alg, n);
                let mut rows = Vec::new();
                for (_, x) in &xs {
                    for a in basis(&alg, n) {
                        let ae = embed(
                            &alg,
                            &WreathElement::from_term(n, a, Rat::one()),
                            n + 1,
                        );
                        let prod = multiply(&alg, &ae, x);
                        let mut row = vec![Rat::zero(); full.len()];
                        for (t, c) in &prod.terms {
                            row[index[t]] = c.clone();
                        }
                        rows.push(row);
                    }
                }
                let rank = crate::coeff::row_reduce(&mut rows);
                assert_eq!(rank, full.len(), "{name}: x-set is not a left basis at n={n}");
            }
        }
    }
}
