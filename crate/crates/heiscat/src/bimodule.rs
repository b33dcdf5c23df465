//! Concrete realization of the induction/restriction bimodules between the
//! wreath algebras and their tensor products over intermediate `A_k`.
//!
//! A word in the letters `P`, `Q` evaluated with rightmost region label `n`
//! denotes the tensor product of the regular bimodules `(k+1)_k` (for `P`)
//! and `ₖ₋₁(k)` (for `Q`).  Tensoring over `A_k` is performed structurally:
//! `A_{k+1}` is a free right `A_k`-module on the cells
//! `z_{b,i} = s_i ⋯ s_k (1^{⊗k} ⊗ b)`, so a word bimodule has canonical basis
//! `cells(P letters) × basis(A_n)` and no row reduction is ever needed.

use crate::coeff::Rat;
use crate::frobenius::FrobeniusAlgebra;
use crate::wreath::{
    self, cell_elem, dim_a_n, element_degree, embed, extension_trace, multiply,
    right_decompose_term, term_degree, term_index, term_unindex, Term, WreathElement,
};
use num::{One, Zero};
use std::collections::BTreeMap;
use std::sync::Arc;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Letter {
    P,
    Q,
}

/// A word bimodule `F(word)` evaluated at rightmost region label `n`.
#[derive(Clone, Debug)]
pub struct WordBimodule {
    pub word: Vec<Letter>,
    pub right_rank: usize,
    pub left_rank: usize,
    pub shift: (i64, u8),
    pub is_zero: bool,
    pub dim: usize,
    /// Region label to the right of each letter.
    labels: Vec<usize>,
    /// Cell radix per letter: `(k+1)·dim B` for `P` at label `k`, `1` for `Q`.
    radices: Vec<usize>,
    tail_dim: usize,
    dim_b: usize,
}

impl PartialEq for WordBimodule {
    fn eq(&self, other: &Self) -> bool {
        self.word == other.word
            && self.right_rank == other.right_rank
            && self.shift == other.shift
            && self.is_zero == other.is_zero
    }
}
impl Eq for WordBimodule {}

/// Sparse element of a word bimodule in the canonical basis.
pub type ModElt = BTreeMap<usize, Rat>;

pub fn word_bimodule(alg: &FrobeniusAlgebra, word: &[Letter], n: usize) -> WordBimodule {
    let mut labels = vec![0usize; word.len()];
    let mut radices = vec![1usize; word.len()];
    let mut cur = n as i64;
    let mut zero = false;
    for j in (0..word.len()).rev() {
        labels[j] = cur.max(0) as usize;
        match word[j] {
            Letter::P => {
                radices[j] = (cur.max(0) as usize + 1) * alg.dim;
                cur += 1;
            }
            Letter::Q => {
                if cur == 0 {
                    zero = true;
                }
                cur -= 1;
            }
        }
        if cur < 0 {
            zero = true;
        }
    }
    let tail_dim = dim_a_n(alg, n);
    let dim = if zero {
        0
    } else {
        radices.iter().product::<usize>() * tail_dim
    };
    WordBimodule {
        word: word.to_vec(),
        right_rank: n,
        left_rank: if zero { 0 } else { cur.max(0) as usize },
        shift: (0, 0),
        is_zero: zero,
        dim,
        labels,
        radices,
        tail_dim,
        dim_b: alg.dim,
    }
}

/// The regular bimodule of a single letter (or the unit word).
pub fn regular_bimodule(
    alg: &FrobeniusAlgebra,
    letter: Option<Letter>,
    right_label: usize,
) -> WordBimodule {
    match letter {
        None => word_bimodule(alg, &[], right_label),
        Some(l) => word_bimodule(alg, &[l], right_label),
    }
}

impl WordBimodule {
    /// Region label to the right of letter `j`.
    pub fn label_right(&self, j: usize) -> usize {
        self.labels[j]
    }

    /// Region label to the left of letter `j` (= `right_rank` for `j = len`).
    pub fn label_left(&self, j: usize) -> usize {
        if j == self.word.len() {
            return self.right_rank;
        }
        match self.word[j] {
            Letter::P => self.labels[j] + 1,
            Letter::Q => self.labels[j] - 1,
        }
    }

    /// Decode a basis index into per-letter cell codes and the tail term.
    pub fn decode(&self, alg: &FrobeniusAlgebra, idx: usize) -> (Vec<u32>, Term) {
        assert!(idx < self.dim);
        let tail = term_unindex(alg, self.right_rank, idx % self.tail_dim);
        let mut rest = idx / self.tail_dim;
        let mut cells = vec![0u32; self.word.len()];
        for j in (0..self.word.len()).rev() {
            cells[j] = (rest % self.radices[j]) as u32;
            rest /= self.radices[j];
        }
        (cells, tail)
    }

    pub fn encode(&self, alg: &FrobeniusAlgebra, cells: &[u32], tail: &Term) -> usize {
        let mut idx = 0usize;
        for (j, &c) in cells.iter().enumerate() {
            idx = idx * self.radices[j] + c as usize;
        }
        idx * self.tail_dim + term_index(alg, tail)
    }

    /// `(b, i)` of a cell code at a `P` letter (`i` is 1-based).
    pub fn cell_parts(&self, code: u32) -> (usize, usize) {
        (
            (code as usize) % self.dim_b,
            (code as usize) / self.dim_b + 1,
        )
    }

    pub fn cell_code(&self, b: usize, i: usize) -> u32 {
        ((i - 1) * self.dim_b + b) as u32
    }

    /// Degree (including shift) of a basis vector.
    pub fn degree_of(&self, alg: &FrobeniusAlgebra, idx: usize) -> (i64, u8) {
        let (cells, tail) = self.decode(alg, idx);
        let (mut d, mut p) = term_degree(alg, &tail);
        for (j, &c) in cells.iter().enumerate() {
            if self.word[j] == Letter::P {
                let (b, _) = self.cell_parts(c);
                d += alg.deg(b);
                p = (p + alg.par(b)) % 2;
            }
        }
        (d + self.shift.0, (p + self.shift.1) % 2)
    }

    /// Parity of the cells at letters `< j` of a basis vector (used for
    /// Koszul signs when an odd local operation is applied at stage `j`).
    pub fn prefix_parity(&self, alg: &FrobeniusAlgebra, cells: &[u32], j: usize) -> u8 {
        let mut p = 0u8;
        for (l, &c) in cells.iter().enumerate().take(j) {
            if self.word[l] == Letter::P {
                let (b, _) = self.cell_parts(c);
                p = (p + alg.par(b)) % 2;
            }
        }
        p
    }
}

fn add_into(out: &mut ModElt, idx: usize, c: Rat) {
    if c.is_zero() {
        return;
    }
    let e = out.entry(idx).or_insert_with(Rat::zero);
    *e += c;
    if e.is_zero() {
        out.remove(&idx);
    }
}

pub fn elt_add(a: &ModElt, b: &ModElt) -> ModElt {
    let mut out = a.clone();
    for (&i, c) in b {
        add_into(&mut out, i, c.clone());
    }
    out
}

pub fn elt_scale(a: &ModElt, s: &Rat) -> ModElt {
    if s.is_zero() {
        return ModElt::new();
    }
    a.iter().map(|(&i, c)| (i, c.clone() * s.clone())).collect()
}

/// Core recursion: act with `a ∈ A_{label_left(j)}` on the part of a basis
/// vector from letter `j` rightward (existing cells `cells[j..]`, tail).
/// Produces `(new cells for letters ≥ j, new tail, coefficient)` triples.
pub fn distribute(
    alg: &FrobeniusAlgebra,
    m: &WordBimodule,
    j: usize,
    a: &WreathElement,
    cells_suffix: &[u32],
    tail: &Term,
    coeff: &Rat,
    out: &mut Vec<(Vec<u32>, Term, Rat)>,
) {
    if coeff.is_zero() || a.is_zero() {
        return;
    }
    if j == m.word.len() {
        let tail_elt = WreathElement::from_term(m.right_rank, tail.clone(), Rat::one());
        let prod = multiply(alg, a, &tail_elt);
        for (t, c) in &prod.terms {
            out.push((Vec::new(), t.clone(), coeff.clone() * c.clone()));
        }
        return;
    }
    match m.word[j] {
        Letter::Q => {
            let k = m.labels[j];
            debug_assert_eq!(a.n, k - 1);
            let lifted = embed(alg, a, k);
            let mut inner = Vec::new();
            distribute(alg, m, j + 1, &lifted, &cells_suffix[1..], tail, coeff, &mut inner);
            for (mut cells, t, c) in inner {
                cells.insert(0, 0);
                out.push((cells, t, c));
            }
        }
        Letter::P => {
            let k = m.labels[j];
            debug_assert_eq!(a.n, k + 1);
            let (b, i) = m.cell_parts(cells_suffix[0]);
            let z = cell_elem(alg, b, i, k);
            let u = multiply(alg, a, &z);
            for (t, c) in &u.terms {
                let (b2, i2, tail2, sign) = right_decompose_term(alg, t);
                let rest = WreathElement::from_term(k, tail2, Rat::one());
                let mut inner = Vec::new();
                distribute(
                    alg,
                    m,
                    j + 1,
                    &rest,
                    &cells_suffix[1..],
                    tail,
                    &(coeff.clone() * c.clone() * sign),
                    &mut inner,
                );
                for (mut cells, t3, c3) in inner {
                    cells.insert(0, m.cell_code(b2, i2));
                    out.push((cells, t3, c3));
                }
            }
        }
    }
}

/// Decompose an element `a ∈ A_{label_left(j)}` into cells and tail from
/// letter `j` rightward, with no pre-existing cells (letters `≥ j` must fully
/// absorb it: used e.g. to decompose `A_{n+1}` into an all-fresh suffix).
pub fn resolve(
    alg: &FrobeniusAlgebra,
    m: &WordBimodule,
    j: usize,
    a: &WreathElement,
    out: &mut Vec<(Vec<u32>, Term, Rat)>,
) {
    if a.is_zero() {
        return;
    }
    if j == m.word.len() {
        debug_assert_eq!(a.n, m.right_rank);
        for (t, c) in &a.terms {
            out.push((Vec::new(), t.clone(), c.clone()));
        }
        return;
    }
    match m.word[j] {
        Letter::Q => {
            let k = m.labels[j];
            let lifted = embed(alg, a, k);
            let mut inner = Vec::new();
            resolve(alg, m, j + 1, &lifted, &mut inner);
            for (mut cells, t, c) in inner {
                cells.insert(0, 0);
                out.push((cells, t, c));
            }
        }
        Letter::P => {
            let k = m.labels[j];
            debug_assert_eq!(a.n, k + 1);
            for (t, c) in &a.terms {
                let (b2, i2, tail2, sign) = right_decompose_term(alg, t);
                let rest = WreathElement::from_term(k, tail2, sign * c.clone());
                let mut inner = Vec::new();
                resolve(alg, m, j + 1, &rest, &mut inner);
                for (mut cells, t3, c3) in inner {
                    cells.insert(0, m.cell_code(b2, i2));
                    out.push((cells, t3, c3));
                }
            }
        }
    }
}

/// Left action of `a ∈ A_{left_rank}`.
pub fn left_act(
    alg: &FrobeniusAlgebra,
    m: &WordBimodule,
    a: &WreathElement,
    v: &ModElt,
) -> ModElt {
    act_at(alg, m, 0, a, v)
}

/// Act with `a ∈ A_{label_left(j)}` at stage `j` on every basis vector of
/// `v`, leaving cells of letters `< j` untouched.  No Koszul sign for moving
/// `a` past the prefix is applied here; callers inserting odd elements at an
/// inner stage must add `(−1)^{ā · prefix_parity}` themselves.
pub fn act_at(
    alg: &FrobeniusAlgebra,
    m: &WordBimodule,
    j: usize,
    a: &WreathElement,
    v: &ModElt,
) -> ModElt {
    let mut out = ModElt::new();
    for (&idx, coeff) in v {
        let (cells, tail) = m.decode(alg, idx);
        let mut results = Vec::new();
        distribute(alg, m, j, a, &cells[j..], &tail, coeff, &mut results);
        for (new_suffix, new_tail, c) in results {
            let mut full = cells[..j].to_vec();
            full.extend(new_suffix);
            add_into(&mut out, m.encode(alg, &full, &new_tail), c);
        }
    }
    out
}

/// Right action of `a ∈ A_{right_rank}` (affects only the tail; no signs).
pub fn right_act(
    alg: &FrobeniusAlgebra,
    m: &WordBimodule,
    v: &ModElt,
    a: &WreathElement,
) -> ModElt {
    let mut out = ModElt::new();
    for (&idx, coeff) in v {
        let (cells, tail) = m.decode(alg, idx);
        let tail_elt = WreathElement::from_term(m.right_rank, tail, coeff.clone());
        let prod = multiply(alg, &tail_elt, a);
        for (t, c) in &prod.terms {
            add_into(&mut out, m.encode(alg, &cells, t), c.clone());
        }
    }
    out
}

/// Reconstruct the underlying wreath element of a basis vector of an all-`P`
/// word bimodule (which is `A_{left_rank}` as a space).
pub fn all_p_to_wreath(alg: &FrobeniusAlgebra, m: &WordBimodule, v: &ModElt) -> WreathElement {
    assert!(m.word.iter().all(|&l| l == Letter::P));
    let top = m.left_rank;
    let mut out = WreathElement::zero(top);
    for (&idx, coeff) in v {
        let (cells, tail) = m.decode(alg, idx);
        let mut acc = embed(
            alg,
            &WreathElement::from_term(m.right_rank, tail, coeff.clone()),
            top,
        );
        for j in (0..m.word.len()).rev() {
            let (b, i) = m.cell_parts(cells[j]);
            let z = embed(alg, &cell_elem(alg, b, i, m.labels[j]), top);
            acc = multiply(alg, &z, &acc);
        }
        out = out.add(&acc);
    }
    out
}

pub fn all_p_from_wreath(alg: &FrobeniusAlgebra, m: &WordBimodule, u: &WreathElement) -> ModElt {
    assert!(m.word.iter().all(|&l| l == Letter::P));
    assert_eq!(u.n, m.left_rank);
    let mut out = ModElt::new();
    let mut results = Vec::new();
    resolve(alg, m, 0, u, &mut results);
    for (cells, tail, c) in results {
        add_into(&mut out, m.encode(alg, &cells, &tail), c);
    }
    out
}

/// A degree-homogeneous bimodule map stored column-wise in the canonical
/// bases.  Odd maps super-commute past the left action:
/// `f(a·v) = (−1)^{ā·f̄} a·f(v)`.
#[derive(Clone, Debug)]
pub struct BimoduleMap {
    pub source: Arc<WordBimodule>,
    pub target: Arc<WordBimodule>,
    pub degree: (i64, u8),
    pub cols: Vec<ModElt>,
}

impl BimoduleMap {
    pub fn from_fn(
        source: Arc<WordBimodule>,
        target: Arc<WordBimodule>,
        degree: (i64, u8),
        f: impl Fn(usize) -> ModElt,
    ) -> Self {
        let cols = (0..source.dim).map(f).collect();
        BimoduleMap {
            source,
            target,
            degree,
            cols,
        }
    }

    pub fn identity(m: &Arc<WordBimodule>) -> Self {
        BimoduleMap::from_fn(m.clone(), m.clone(), (0, 0), |i| {
            ModElt::from([(i, Rat::one())])
        })
    }

    pub fn zero_map(source: Arc<WordBimodule>, target: Arc<WordBimodule>, degree: (i64, u8)) -> Self {
        BimoduleMap::from_fn(source, target, degree, |_| ModElt::new())
    }

    pub fn apply(&self, v: &ModElt) -> ModElt {
        let mut out = ModElt::new();
        for (&i, c) in v {
            for (&j, d) in &self.cols[i] {
                add_into(&mut out, j, c.clone() * d.clone());
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.is_empty())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.source, other.source);
        assert_eq!(self.target, other.target);
        let cols = self
            .cols
            .iter()
            .zip(&other.cols)
            .map(|(a, b)| elt_add(a, b))
            .collect();
        BimoduleMap {
            source: self.source.clone(),
            target: self.target.clone(),
            degree: self.degree,
            cols,
        }
    }

    pub fn scale(&self, s: &Rat) -> Self {
        BimoduleMap {
            source: self.source.clone(),
            target: self.target.clone(),
            degree: self.degree,
            cols: self.cols.iter().map(|c| elt_scale(c, s)).collect(),
        }
    }
}

/// `f ∘ g` (apply `g` first).
pub fn compose(f: &BimoduleMap, g: &BimoduleMap) -> BimoduleMap {
    assert_eq!(
        *g.target, *f.source,
        "compose: inner bimodules do not match"
    );
    let cols = g.cols.iter().map(|col| f.apply(col)).collect();
    BimoduleMap {
        source: g.source.clone(),
        target: f.target.clone(),
        degree: (
            f.degree.0 + g.degree.0,
            (f.degree.1 + g.degree.1) % 2,
        ),
        cols,
    }
}

/// Concatenate two word bimodules (tensor over the shared boundary algebra).
pub fn concat(alg: &FrobeniusAlgebra, a: &WordBimodule, b: &WordBimodule) -> WordBimodule {
    if !a.is_zero && !b.is_zero {
        assert_eq!(
            a.right_rank, b.left_rank,
            "concat: boundary ranks do not match"
        );
    }
    let mut word = a.word.clone();
    word.extend(&b.word);
    let mut m = word_bimodule(alg, &word, b.right_rank);
    m.is_zero = m.is_zero || a.is_zero || b.is_zero;
    if m.is_zero {
        m.dim = 0;
    }
    m
}

/// The canonical image of a pure tensor `m ⊗ v` in the concatenated module.
pub fn pure_tensor(
    alg: &FrobeniusAlgebra,
    left: &WordBimodule,
    right: &WordBimodule,
    result: &WordBimodule,
    m_idx: usize,
    v_idx: usize,
) -> ModElt {
    let (cells_l, tail_l) = left.decode(alg, m_idx);
    let (cells_r, tail_r) = right.decode(alg, v_idx);
    let tail_elt = WreathElement::from_term(left.right_rank, tail_l, Rat::one());
    let moved = act_at(
        alg,
        right,
        0,
        &tail_elt,
        &ModElt::from([(right.encode(alg, &cells_r, &tail_r), Rat::one())]),
    );
    let mut out = ModElt::new();
    for (&i, c) in &moved {
        let (cells2, tail2) = right.decode(alg, i);
        let mut full = cells_l.clone();
        full.extend(cells2);
        add_into(&mut out, result.encode(alg, &full, &tail2), c.clone());
    }
    out
}

/// `f ⊗ g` with the Koszul sign `(−1)^{π(g)·π(m)}` on pure tensors `m ⊗ v`.
pub fn tensor_maps(alg: &FrobeniusAlgebra, f: &BimoduleMap, g: &BimoduleMap) -> BimoduleMap {
    let source = Arc::new(concat(alg, &f.source, &g.source));
    let target = Arc::new(concat(alg, &f.target, &g.target));
    let degree = (
        f.degree.0 + g.degree.0,
        (f.degree.1 + g.degree.1) % 2,
    );
    if source.is_zero || target.is_zero {
        return BimoduleMap::zero_map(source, target, degree);
    }
    let nl = f.source.word.len();
    BimoduleMap::from_fn(source.clone(), target.clone(), degree, |idx| {
        let (cells, tail) = source.decode(alg, idx);
        let (cells_l, cells_r) = cells.split_at(nl);
        // The basis vector is m ⊗ v with m = (cells_l, 1) ∈ f.source (unit
        // tail, expanded over the basis) and v = (cells_r, tail) ∈ g.source.
        let m_par = f.source.prefix_parity(alg, cells_l, nl);
        let sign = if g.degree.1 * m_par == 1 {
            -Rat::one()
        } else {
            Rat::one()
        };
        let v_idx = g.source.encode(alg, cells_r, &tail);
        let gv = &g.cols[v_idx];
        // f(m): expand the unit tail of m over A_{boundary}.
        let mut fm = ModElt::new();
        for (unit_t, unit_c) in unit_terms(alg, f.source.right_rank) {
            let m_idx = f.source.encode(alg, cells_l, &unit_t);
            for (&r, c) in &f.cols[m_idx] {
                add_into(&mut fm, r, c.clone() * unit_c.clone());
            }
        }
        // Recombine: (cells', tail') ⊗ gv ↦ cells' ++ (tail' · gv).
        let mut out = ModElt::new();
        for (&fi, fc) in &fm {
            let (fcells, ftail) = f.target.decode(alg, fi);
            let tail_elt =
                WreathElement::from_term(f.target.right_rank, ftail, Rat::one());
            let moved = act_at(alg, &g.target, 0, &tail_elt, gv);
            for (&gi, gc) in &moved {
                let (gcells, gtail) = g.target.decode(alg, gi);
                let mut full = fcells.clone();
                full.extend(gcells);
                add_into(
                    &mut out,
                    target.encode(alg, &full, &gtail),
                    sign.clone() * fc.clone() * gc.clone(),
                );
            }
        }
        out
    })
}

fn unit_terms(alg: &FrobeniusAlgebra, n: usize) -> Vec<(Term, Rat)> {
    wreath::one(alg, n)
        .terms
        .iter()
        .map(|(t, c)| (t.clone(), c.clone()))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// `⊳a: v ↦ a·v` (left) or `⊲a: v ↦ (−1)^{ā·v̄} v·a` (right), for `a` in the
/// algebra acting on the chosen side.
pub fn mult_operator(
    alg: &FrobeniusAlgebra,
    side: Side,
    a: &WreathElement,
    m: &Arc<WordBimodule>,
) -> BimoduleMap {
    let deg = element_degree(alg, a).unwrap_or((0, 0));
    BimoduleMap::from_fn(m.clone(), m.clone(), deg, |idx| {
        let v = ModElt::from([(idx, Rat::one())]);
        match side {
            Side::Left => left_act(alg, m, a, &v),
            Side::Right => {
                let vp = m.degree_of(alg, idx).1;
                let s = if deg.1 * vp == 1 { -Rat::one() } else { Rat::one() };
                elt_scale(&right_act(alg, m, &v, a), &s)
            }
        }
    })
}

/// Right multiplication `⊲a` by an element of the *left* algebra on an
/// all-`P` word bimodule (e.g. `⊲s_{n+1}` on `(n+2)_n`).
pub fn regular_right_mult(
    alg: &FrobeniusAlgebra,
    a: &WreathElement,
    m: &Arc<WordBimodule>,
) -> BimoduleMap {
    let deg = element_degree(alg, a).unwrap_or((0, 0));
    BimoduleMap::from_fn(m.clone(), m.clone(), deg, |idx| {
        let v = ModElt::from([(idx, Rat::one())]);
        let u = all_p_to_wreath(alg, m, &v);
        let vp = m.degree_of(alg, idx).1;
        let s = if deg.1 * vp == 1 { -Rat::one() } else { Rat::one() };
        elt_scale(&all_p_from_wreath(alg, m, &multiply(alg, &u, a)), &s)
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AdjKind {
    EpsR,
    EtaR,
    EpsL,
    EtaL,
}

/// The four adjunction maps at ambient label `n`:
/// - `EpsR: F(PQ)@n → F(∅)@n`, multiplication, degree (0,0);
/// - `EtaR: F(∅)@n → F(QP)@n`, inclusion `A_n ↪ A_{n+1}`, degree (0,0);
/// - `EpsL: F(QP)@n → F(∅)@n`, the Frobenius-extension trace, degree (−δ,σ);
/// - `EtaL: F(∅)@n → F(PQ)@n`, the dual-sets coevaluation, degree (δ,σ).
pub fn adjunction_map(alg: &FrobeniusAlgebra, kind: AdjKind, n: usize) -> BimoduleMap {
    let unit = Arc::new(word_bimodule(alg, &[], n));
    match kind {
        AdjKind::EpsR => {
            let source = Arc::new(word_bimodule(alg, &[Letter::P, Letter::Q], n));
            if source.is_zero {
                return BimoduleMap::zero_map(source, unit, (0, 0));
            }
            let s = source.clone();
            BimoduleMap::from_fn(source, unit.clone(), (0, 0), move |idx| {
                let (cells, tail) = s.decode(alg, idx);
                let (b, i) = s.cell_parts(cells[0]);
                let z = cell_elem(alg, b, i, n - 1);
                let prod = multiply(
                    alg,
                    &z,
                    &WreathElement::from_term(n, tail, Rat::one()),
                );
                let mut out = ModElt::new();
                for (t, c) in &prod.terms {
                    add_into(&mut out, term_index(alg, t), c.clone());
                }
                out
            })
        }
        AdjKind::EtaR => {
            let target = Arc::new(word_bimodule(alg, &[Letter::Q, Letter::P], n));
            let t = target.clone();
            BimoduleMap::from_fn(unit.clone(), target, (0, 0), move |idx| {
                let tail = term_unindex(alg, n, idx);
                let lifted = embed(
                    alg,
                    &WreathElement::from_term(n, tail, Rat::one()),
                    n + 1,
                );
                let mut results = Vec::new();
                resolve(alg, &t, 1, &lifted, &mut results);
                let mut out = ModElt::new();
                for (mut cells, tl, c) in results {
                    cells.insert(0, 0);
                    add_into(&mut out, t.encode(alg, &cells, &tl), c);
                }
                out
            })
        }
        AdjKind::EpsL => {
            let source = Arc::new(word_bimodule(alg, &[Letter::Q, Letter::P], n));
            let s = source.clone();
            let deg = (-alg.delta, alg.sigma);
            BimoduleMap::from_fn(source, unit.clone(), deg, move |idx| {
                let (cells, tail) = s.decode(alg, idx);
                let (b, i) = s.cell_parts(cells[1]);
                let z = cell_elem(alg, b, i, n);
                let u = multiply(
                    alg,
                    &z,
                    &embed(alg, &WreathElement::from_term(n, tail, Rat::one()), n + 1),
                );
                let tr = extension_trace(alg, &u);
                let mut out = ModElt::new();
                for (t, c) in &tr.terms {
                    add_into(&mut out, term_index(alg, t), c.clone());
                }
                out
            })
        }
        AdjKind::EtaL => {
            let target = Arc::new(word_bimodule(alg, &[Letter::P, Letter::Q], n));
            let deg = (alg.delta, alg.sigma);
            if target.is_zero {
                return BimoduleMap::zero_map(unit, target, deg);
            }
            let t = target.clone();
            BimoduleMap::from_fn(unit.clone(), target, deg, move |idx| {
                let tail = term_unindex(alg, n, idx);
                let a = WreathElement::from_term(n, tail.clone(), Rat::one());
                let a_par = term_degree(alg, &tail).1;
                let global = if alg.sigma * a_par == 1 {
                    -Rat::one()
                } else {
                    Rat::one()
                };
                let mut out = ModElt::new();
                for b in 0..alg.dim {
                    let s = if alg.sigma * alg.dual_par(b) == 1 {
                        -Rat::one()
                    } else {
                        Rat::one()
                    };
                    for i in 1..=n {
                        let y = wreath::y_elem(alg, b, i, n - 1);
                        let x = wreath::x_elem(alg, b, i, n - 1);
                        let ay = multiply(alg, &a, &y);
                        for (ty, cy) in &ay.terms {
                            let (b2, i2, mid, sign) = right_decompose_term(alg, ty);
                            let midx = multiply(
                                alg,
                                &embed(
                                    alg,
                                    &WreathElement::from_term(n - 1, mid, Rat::one()),
                                    n,
                                ),
                                &x,
                            );
                            for (tx, cx) in &midx.terms {
                                add_into(
                                    &mut out,
                                    t.encode(alg, &[t.cell_code(b2, i2), 0], tx),
                                    global.clone()
                                        * s.clone()
                                        * cy.clone()
                                        * sign.clone()
                                        * cx.clone(),
                                );
                            }
                        }
                    }
                }
                out
            })
        }
    }
}

/// Check that `f` intertwines the left action (with the super sign for odd
/// maps) and the right action, on algebra generators × all basis vectors.
pub fn is_bimodule_map(alg: &FrobeniusAlgebra, f: &BimoduleMap) -> bool {
    if f.source.is_zero || f.target.is_zero {
        return true;
    }
    if f.source.left_rank != f.target.left_rank
        || f.source.right_rank != f.target.right_rank
    {
        return false;
    }
    let ml = f.source.left_rank;
    let mr = f.source.right_rank;
    let mut left_gens: Vec<WreathElement> = Vec::new();
    let mut right_gens: Vec<WreathElement> = Vec::new();
    for (rank, gens) in [(ml, &mut left_gens), (mr, &mut right_gens)] {
        if rank == 0 {
            continue;
        }
        for b in 0..alg.dim {
            let mut e = WreathElement::zero(rank);
            for (t, c) in wreath::insert_at(alg, rank, 0, &alg.basis_vec(b)) {
                e.add_term((t, wreath::Perm::identity(rank)), c);
            }
            gens.push(e);
        }
        for i in 1..rank {
            let mut e = WreathElement::zero(rank);
            for (t, c) in unit_terms(alg, rank) {
                e.add_term((t.0, wreath::Perm::s(i, rank).compose(&t.1)), c);
            }
            gens.push(e);
        }
    }
    for idx in 0..f.source.dim {
        let v = ModElt::from([(idx, Rat::one())]);
        let fv = &f.cols[idx];
        for g in &left_gens {
            let gpar = element_degree(alg, g).map_or(0, |d| d.1);
            let lhs = f.apply(&left_act(alg, &f.source, g, &v));
            let s = if gpar * f.degree.1 == 1 {
                -Rat::one()
            } else {
                Rat::one()
            };
            let rhs = elt_scale(&left_act(alg, &f.target, g, fv), &s);
            if lhs != rhs {
                return false;
            }
        }
        for g in &right_gens {
            let lhs = f.apply(&right_act(alg, &f.source, &v, g));
            let rhs = right_act(alg, &f.target, fv, g);
            if lhs != rhs {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::rint;
    use crate::frobenius::builtin;
    use crate::wreath::{basis, Perm};

    #[test]
    fn dimensions() {
        let triv = builtin("trivial").unwrap();
        let cl = builtin("clifford").unwrap();
        // P@0 → A₁, dim = dim B.
        assert_eq!(regular_bimodule(&triv, Some(Letter::P), 0).dim, 1);
        assert_eq!(regular_bimodule(&cl, Some(Letter::P), 0).dim, 2);
        // Q@0 → zero bimodule.
        assert!(regular_bimodule(&triv, Some(Letter::Q), 0).is_zero);
        // P@1 over 𝔽 → A₂, dim 2.
        assert_eq!(regular_bimodule(&triv, Some(Letter::P), 1).dim, 2);
        // PP@0 over Cl ≅ A₂, dim 8.
        assert_eq!(word_bimodule(&cl, &[Letter::P, Letter::P], 0).dim, 8);
        // Unit word at n ≅ A_n.
        assert_eq!(word_bimodule(&cl, &[], 2).dim, 8);
        // QQ@1 → zero (inner label would be −1).
        assert!(word_bimodule(&triv, &[Letter::Q, Letter::Q], 1).is_zero);
        // Shifted labels: QP ≠ zero at n = 1.
        assert_eq!(word_bimodule(&triv, &[Letter::Q, Letter::P], 1).dim, 2);
    }

    #[test]
    fn actions_commute_and_associate() {
        for name in ["clifford", "dual_numbers"] {
            let alg = builtin(name).unwrap();
            let m = word_bimodule(&alg, &[Letter::P, Letter::Q], 2);
            assert_eq!(m.left_rank, 2);
            let gens_l: Vec<_> = basis(&alg, 2)
                .into_iter()
                .map(|t| WreathElement::from_term(2, t, Rat::one()))
                .collect();
            for idx in 0..m.dim {
                let v = ModElt::from([(idx, Rat::one())]);
                for a in gens_l.iter().take(6) {
                    for b in gens_l.iter().take(6) {
                        // (ab)·v = a·(b·v)
                        let lhs = left_act(&alg, &m, &multiply(&alg, a, b), &v);
                        let rhs = left_act(&alg, &m, a, &left_act(&alg, &m, b, &v));
                        assert_eq!(lhs, rhs, "{name}: left action not associative");
                        // a·(v·b) = (a·v)·b
                        let lhs = left_act(&alg, &m, a, &right_act(&alg, &m, &v, b));
                        let rhs = right_act(&alg, &m, &left_act(&alg, &m, a, &v), b);
                        assert_eq!(lhs, rhs, "{name}: actions do not commute");
                    }
                }
            }
        }
    }

    /// Naive quotient dimension of `A_{k+1} ⊗_{A_k} V` by row-reducing the
    /// relation span; oracle for the structured (cells × tail) basis.
    fn naive_induction_dim(alg: &FrobeniusAlgebra, k: usize, v: &WordBimodule) -> usize {
        let top = basis(alg, k + 1);
        let mid = basis(alg, k);
        let total = top.len() * v.dim;
        let index = |ti: usize, vi: usize| ti * v.dim + vi;
        let mut rows = Vec::new();
        for (ti, t) in top.iter().enumerate() {
            let u = WreathElement::from_term(k + 1, t.clone(), Rat::one());
            for a in &mid {
                let ae = WreathElement::from_term(k, a.clone(), Rat::one());
                let ua = multiply(alg, &u, &embed(alg, &ae, k + 1));
                for vi in 0..v.dim {
                    let mut row = vec![Rat::zero(); total];
                    for (t2, c2) in &ua.terms {
                        let ti2 = top.iter().position(|x| x == t2).unwrap();
                        row[index(ti2, vi)] += c2.clone();
                    }
                    let av = left_act(alg, v, &ae, &ModElt::from([(vi, Rat::one())]));
                    for (&vi2, c2) in &av {
                        row[index(ti, vi2)] -= c2.clone();
                    }
                    if row.iter().any(|c| !c.is_zero()) {
                        rows.push(row);
                    }
                }
            }
        }
        let rank = crate::coeff::row_reduce(&mut rows);
        total - rank
    }

    #[test]
    fn structured_tensor_matches_naive_quotient() {
        // B = 𝔽: A₃ ⊗_{A₂} A₃ (word PQ@3) — structured dim 3·6 = 18.
        let triv = builtin("trivial").unwrap();
        let v = word_bimodule(&triv, &[Letter::Q], 3);
        let m = word_bimodule(&triv, &[Letter::P, Letter::Q], 3);
        assert_eq!(m.dim, 18);
        assert_eq!(naive_induction_dim(&triv, 2, &v), m.dim);
        // B = Cl: A₂ ⊗_{A₁} A₂ (word PQ@2) — structured dim 4·8 = 32.
        let cl = builtin("clifford").unwrap();
        let v = word_bimodule(&cl, &[Letter::Q], 2);
        let m = word_bimodule(&cl, &[Letter::P, Letter::Q], 2);
        assert_eq!(m.dim, 32);
        assert_eq!(naive_induction_dim(&cl, 1, &v), m.dim);
    }

    #[test]
    fn mult_operator_examples() {
        let cl = builtin("clifford").unwrap();
        let m = Arc::new(word_bimodule(&cl, &[Letter::P], 0));
        // ⊳1 = id.
        let id = mult_operator(&cl, Side::Left, &wreath::one(&cl, 1), &m);
        assert_eq!(id.cols, BimoduleMap::identity(&m).cols);
        // ⊲c on A₁ over Cl: basis {1, c} (cells z_{b,1} = b): 1 ↦ c, c ↦ −1.
        let c_elt = WreathElement::from_term(1, (vec![1], Perm::identity(1)), Rat::one());
        let f = regular_right_mult(&cl, &c_elt, &m);
        let i1 = m.encode(&cl, &[m.cell_code(0, 1)], &(vec![], Perm::identity(0)));
        let ic = m.encode(&cl, &[m.cell_code(1, 1)], &(vec![], Perm::identity(0)));
        assert_eq!(f.cols[i1], ModElt::from([(ic, rint(1))]));
        assert_eq!(f.cols[ic], ModElt::from([(i1, -rint(1))]));

        // ⊲s_{n+1} on (n+2)_n is an (A_{n+2}, A_n)-bimodule map.
        for n in 0..=1usize {
            let m2 = Arc::new(word_bimodule(&cl, &[Letter::P, Letter::P], n));
            let mut s = WreathElement::zero(n + 2);
            for (t, c) in unit_terms(&cl, n + 2) {
                s.add_term((t.0, Perm::s(n + 1, n + 2).compose(&t.1)), c);
            }
            let f = regular_right_mult(&cl, &s, &m2);
            assert!(is_bimodule_map(&cl, &f), "⊲s_{{n+1}} not a bimodule map");
        }
    }

    #[test]
    fn all_p_round_trip() {
        let zz = builtin("zigzag_a2").unwrap();
        let m = word_bimodule(&zz, &[Letter::P, Letter::P], 1);
        assert_eq!(m.dim, dim_a_n(&zz, 3));
        for t in basis(&zz, 3).into_iter().step_by(97) {
            let u = WreathElement::from_term(3, t, Rat::one());
            let v = all_p_from_wreath(&zz, &m, &u);
            assert_eq!(all_p_to_wreath(&zz, &m, &v), u);
        }
    }

    #[test]
    fn adjunction_maps_intertwine() {
        for name in ["trivial", "clifford", "dual_numbers"] {
            let alg = builtin(name).unwrap();
            for n in 0..=2usize {
                for kind in [AdjKind::EpsR, AdjKind::EtaR, AdjKind::EpsL, AdjKind::EtaL] {
                    let f = adjunction_map(&alg, kind, n);
                    assert!(
                        is_bimodule_map(&alg, &f),
                        "{name}: {kind:?} at n={n} fails to intertwine"
                    );
                }
            }
        }
    }

    #[test]
    fn snake_identities() {
        for name in ["trivial", "clifford", "dual_numbers"] {
            let alg = builtin(name).unwrap();
            let sigma_sign = if alg.sigma == 1 { -rint(1) } else { rint(1) };
            for n in 0..=2usize {
                let p_n = Arc::new(word_bimodule(&alg, &[Letter::P], n));
                let q_n = Arc::new(word_bimodule(&alg, &[Letter::Q], n));

                // (ε_R ⊗ id) ∘ (id ⊗ η_R) = id on F(P)@n.
                let a = tensor_maps(
                    &alg,
                    &BimoduleMap::identity(&p_n),
                    &adjunction_map(&alg, AdjKind::EtaR, n),
                );
                let b = tensor_maps(
                    &alg,
                    &adjunction_map(&alg, AdjKind::EpsR, n + 1),
                    &BimoduleMap::identity(&p_n),
                );
                let snake = compose(&b, &a);
                assert_eq!(
                    snake.cols,
                    BimoduleMap::identity(&p_n).cols,
                    "{name}: right snake on P fails at n={n}"
                );

                // (id ⊗ ε_R) ∘ (η_R ⊗ id) = id on F(Q)@n.
                if n >= 1 {
                    let a = tensor_maps(
                        &alg,
                        &adjunction_map(&alg, AdjKind::EtaR, n - 1),
                        &BimoduleMap::identity(&q_n),
                    );
                    let b = tensor_maps(
                        &alg,
                        &BimoduleMap::identity(&q_n),
                        &adjunction_map(&alg, AdjKind::EpsR, n),
                    );
                    let snake = compose(&b, &a);
                    assert_eq!(
                        snake.cols,
                        BimoduleMap::identity(&q_n).cols,
                        "{name}: right snake on Q fails at n={n}"
                    );
                }

                // (ε_L ⊗ id) ∘ (id ⊗ η_L) = (−1)^σ id on F(Q)@n.
                if n >= 1 {
                    let a = tensor_maps(
                        &alg,
                        &BimoduleMap::identity(&q_n),
                        &adjunction_map(&alg, AdjKind::EtaL, n),
                    );
                    let b = tensor_maps(
                        &alg,
                        &adjunction_map(&alg, AdjKind::EpsL, n - 1),
                        &BimoduleMap::identity(&q_n),
                    );
                    let snake = compose(&b, &a);
                    let expect = BimoduleMap::identity(&q_n).scale(&sigma_sign);
                    assert_eq!(
                        snake.cols, expect.cols,
                        "{name}: left snake on Q fails at n={n}"
                    );
                }

                // (id ⊗ ε_L) ∘ (η_L ⊗ id) = id on F(P)@n.
                let a = tensor_maps(
                    &alg,
                    &adjunction_map(&alg, AdjKind::EtaL, n + 1),
                    &BimoduleMap::identity(&p_n),
                );
                let b = tensor_maps(
                    &alg,
                    &BimoduleMap::identity(&p_n),
                    &adjunction_map(&alg, AdjKind::EpsL, n),
                );
                let snake = compose(&b, &a);
                assert_eq!(
                    snake.cols,
                    BimoduleMap::identity(&p_n).cols,
                    "{name}: left snake on P fails at n={n}"
                );
            }
        }
    }

    #[test]
    fn interchange_sign_for_odd_maps() {
        // Two odd maps over Cl (σ = 1, so ε_L and η_L are odd):
        // (f⊗id)∘(id⊗g) = −(id⊗g)∘(f⊗id).
        let cl = builtin("clifford").unwrap();
        let f = adjunction_map(&cl, AdjKind::EpsL, 1); // [Q,P]@1 → []@1
        let g = adjunction_map(&cl, AdjKind::EtaL, 1); // []@1 → [P,Q]@1
        assert_eq!(f.degree.1, 1);
        assert_eq!(g.degree.1, 1);
        let id_fs = BimoduleMap::identity(&f.source);
        let id_ft = BimoduleMap::identity(&f.target);
        let id_gs = BimoduleMap::identity(&g.source);
        let id_gt = BimoduleMap::identity(&g.target);
        let lhs = compose(
            &tensor_maps(&cl, &f, &id_gt),
            &tensor_maps(&cl, &id_fs, &g),
        );
        let rhs = compose(
            &tensor_maps(&cl, &id_ft, &g),
            &tensor_maps(&cl, &f, &id_gs),
        );
        assert!(!lhs.is_zero(), "interchange test is vacuous");
        assert_eq!(lhs.cols, rhs.scale(&-rint(1)).cols);
    }
}
