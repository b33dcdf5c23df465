//! The generalized degenerate affine Hecke algebra `D_m = 𝔽[x₁,…,x_m] ⊗ A_m^op`
//! attached to B: PBW normal forms, the defining cross relations, the
//! evaluation homomorphism `χ′_{m,n}: D_m → A_{n+m}^op`, the m-disturbance
//! filtration, graded products of the transposition elements `t_{i,j}`, and
//! desk-scale injectivity certification by exact rank.

use crate::coeff::{row_reduce, Rat};
use crate::derived::{nakayama_power, sgn_exp};
use crate::frobenius::FrobeniusAlgebra;
use crate::wreath::{
    self, dim_a_n, embed, jucys_murphy, multiply, t_elem, tensor_parity, term_index, Perm, Tensor,
    Term, WreathElement,
};
use num::{One, Zero};
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DahgError {
    RankMismatch,
    IndexOutOfRange,
    SizeLimit,
}

impl std::fmt::Display for DahgError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DahgError::RankMismatch => write!(f, "elements live in different ranks"),
            DahgError::IndexOutOfRange => write!(f, "generator index out of range"),
            DahgError::SizeLimit => write!(f, "requested size exceeds the exact-computation cap"),
        }
    }
}

impl std::error::Error for DahgError {}

/// An element of `D_m` in PBW form. Each key `(𝐚, u)` stands for the product
/// `x₁^{a₁}⋯x_m^{a_m}·op(u)`, where `op(u)` is the element of the subalgebra
/// `A_m^op` whose underlying vector is the `A_m` basis element `u`. This
/// indexes the same PBW basis as `x(𝐚,β,τ) = x^𝐚·β·τ` (the two labelings are
/// related by the bijection `β·τ ↦ op(τβ)`).
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct DmElement {
    pub m: usize,
    pub terms: BTreeMap<(Vec<usize>, Term), Rat>,
}

impl DmElement {
    pub fn zero(m: usize) -> Self {
        DmElement {
            m,
            terms: BTreeMap::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term_pub(&mut self, key: (Vec<usize>, Term), c: Rat) { self.add_term(key, c) }

    fn add_term(&mut self, key: (Vec<usize>, Term), c: Rat) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(key.clone()).or_insert_with(Rat::zero);
        *e += c;
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
            out.add_term(k.clone(), -c.clone());
        }
        out
    }

    pub fn scale(&self, s: &Rat) -> Self {
        let mut out = DmElement::zero(self.m);
        for (k, c) in &self.terms {
            out.add_term(k.clone(), c.clone() * s.clone());
        }
        out
    }

    /// The unit of `D_m`.
    pub fn one(alg: &FrobeniusAlgebra, m: usize) -> Self {
        Self::from_wreath_op(&wreath::one(alg, m))
    }

    /// The generator `x_i` (1-based).
    pub fn x(alg: &FrobeniusAlgebra, m: usize, i: usize) -> Self {
        assert!((1..=m).contains(&i));
        let mut exps = vec![0usize; m];
        exps[i - 1] = 1;
        let mut out = DmElement::zero(m);
        for ((_, u), c) in Self::one(alg, m).terms {
            out.add_term((exps.clone(), u), c);
        }
        out
    }

    /// The simple reflection `s_i ∈ A_m^op` (1-based, `1 ≤ i < m`).
    pub fn s(alg: &FrobeniusAlgebra, m: usize, i: usize) -> Self {
        assert!((1..m).contains(&i));
        let mut out = DmElement::zero(m);
        for (t, c) in tensor_choices(alg, m, &[]) {
            out.add_term((vec![0; m], (t, Perm::s(i, m))), c);
        }
        out
    }

    /// A pure tensor `v₁⊗⋯⊗v_m ∈ B^{⊗m} ⊂ A_m^op`.
    pub fn tensor(alg: &FrobeniusAlgebra, vs: &[Vec<Rat>]) -> Self {
        let m = vs.len();
        let slots: Vec<(usize, Vec<Rat>)> =
            vs.iter().cloned().enumerate().collect();
        let mut out = DmElement::zero(m);
        for (t, c) in tensor_choices(alg, m, &slots) {
            out.add_term((vec![0; m], (t, Perm::identity(m))), c);
        }
        out
    }

    /// Embed an element of `A_m` (as an `A_m^op` vector) into `D_m`.
    pub fn from_wreath_op(u: &WreathElement) -> Self {
        let mut out = DmElement::zero(u.n);
        for (t, c) in &u.terms {
            out.add_term((vec![0; u.n], t.clone()), c.clone());
        }
        out
    }
}

/// Expand `v₁,…` placed at the given 0-based slots (units elsewhere) into
/// basis tensors with coefficients.
fn tensor_choices(
    alg: &FrobeniusAlgebra,
    m: usize,
    slots: &[(usize, Vec<Rat>)],
) -> Vec<(Tensor, Rat)> {
    let mut acc: Vec<(Tensor, Rat)> = vec![(Vec::new(), Rat::one())];
    for pos in 0..m {
        let v = slots
            .iter()
            .find(|(p, _)| *p == pos)
            .map(|(_, v)| v.clone())
            .unwrap_or_else(|| alg.unit().to_vec());
        let mut next = Vec::new();
        for (t, c) in &acc {
            for (k, vc) in v.iter().enumerate() {
                if vc.is_zero() {
                    continue;
                }
                let mut t2 = t.clone();
                t2.push(k as u8);
                next.push((t2, c.clone() * vc.clone()));
            }
        }
        acc = next;
    }
    acc
}

/// One letter of a `D_m` word (product read left to right in `D_m`).
#[derive(Clone, Debug)]
enum Item {
    X(usize),
    S(usize),
    T(Tensor),
}

fn word_of_key(m: usize, key: &(Vec<usize>, Term)) -> Vec<Item> {
    let (exps, (t, p)) = key;
    let mut w = Vec::new();
    for i in 1..=m {
        for _ in 0..exps[i - 1] {
            w.push(Item::X(i));
        }
    }
    // op(u) for the basis element u = t·p of A_m factors in D_m as the
    // reversed reduced word of p followed by the tensor.
    for &i in p.reduced_word().iter().rev() {
        w.push(Item::S(i));
    }
    w.push(Item::T(t.clone()));
    w
}

/// `A_m` value of a suffix word containing no `x` letters: the product in
/// `A_m` of the items in reversed order (the op product in written order),
/// with the Koszul sign contributed by each pair of odd items.  Composing
/// homogeneous right-multiplication operators reverses the written product
/// and picks up exactly these signs, so this valuation is the one compatible
/// with the evaluation homomorphism.
fn suffix_value(alg: &FrobeniusAlgebra, m: usize, items: &[Item]) -> WreathElement {
    let mut acc = wreath::one(alg, m);
    let mut psum = 0u8;
    for it in items.iter().rev() {
        let (v, p) = match it {
            Item::S(i) => {
                let mut e = WreathElement::zero(m);
                for (t, c) in tensor_choices(alg, m, &[]) {
                    e.add_term((t, Perm::s(*i, m)), c);
                }
                (e, 0u8)
            }
            Item::T(t) => (
                WreathElement::from_term(m, (t.clone(), Perm::identity(m)), Rat::one()),
                tensor_parity(alg, t),
            ),
            Item::X(_) => unreachable!("suffix contains no x letters"),
        };
        acc = multiply(alg, &acc, &v).scale(&sgn_exp((p * psum) as i64));
        psum ^= p;
    }
    acc
}

/// Rewrite a linear combination of words to PBW normal form.
fn normalize(alg: &FrobeniusAlgebra, m: usize, words: Vec<(Rat, Vec<Item>)>) -> DmElement {
    let mut out = DmElement::zero(m);
    let mut queue = words;
    while let Some((coeff, word)) = queue.pop() {
        if coeff.is_zero() {
            continue;
        }
        // Find the first S/T letter immediately followed by an X letter.
        let pat = word
            .windows(2)
            .position(|w| !matches!(w[0], Item::X(_)) && matches!(w[1], Item::X(_)));
        let Some(idx) = pat else {
            // All x letters form a prefix: sort them into x₁^{a₁}⋯x_m^{a_m}
            // with the (−1)^σ sign per swap of distinct letters, then
            // evaluate the suffix in A_m^op.
            let split = word
                .iter()
                .position(|it| !matches!(it, Item::X(_)))
                .unwrap_or(word.len());
            let xs: Vec<usize> = word[..split]
                .iter()
                .map(|it| match it {
                    Item::X(i) => *i,
                    _ => unreachable!(),
                })
                .collect();
            let mut inv = 0usize;
            for a in 0..xs.len() {
                for b in a + 1..xs.len() {
                    if xs[a] > xs[b] {
                        inv += 1;
                    }
                }
            }
            let sign = sgn_exp(alg.sigma as i64 * inv as i64);
            let mut exps = vec![0usize; m];
            for &i in &xs {
                exps[i - 1] += 1;
            }
            let suffix = suffix_value(alg, m, &word[split..]);
            for (t, c) in &suffix.terms {
                out.add_term((exps.clone(), t.clone()), coeff.clone() * sign.clone() * c.clone());
            }
            continue;
        };
        let tail = |head: Vec<Item>| {
            let mut w: Vec<Item> = word[..idx].to_vec();
            w.extend(head);
            w.extend(word[idx + 2..].iter().cloned());
            w
        };
        match (&word[idx], &word[idx + 1]) {
            (Item::S(i), Item::X(j)) => {
                let (i, j) = (*i, *j);
                if j == i {
                    // s_i x_i = x_{i+1} s_i + Σ_b (−1)^{b̄} b_i ⊗ b^∨_{i+1}.  The sign is
                    // forced by the evaluation homomorphism: composing the dotted right
                    // curl with a crossing in the endomorphism algebra of an all-up word
                    // produces exactly this correction term (see the diagram oracle test).
                    queue.push((coeff.clone(), tail(vec![Item::X(i + 1), Item::S(i)])));
                    for b in 0..alg.dim {
                        let bb = alg.par(b) as usize;
                        let sign = sgn_exp(bb as i64);
                        for (t, c) in tensor_choices(
                            alg,
                            m,
                            &[(i - 1, alg.basis_vec(b)), (i, alg.dual_basis[b].clone())],
                        ) {
                            queue.push((coeff.clone() * sign.clone() * c, tail(vec![Item::T(t)])));
                        }
                    }
                } else if j == i + 1 {
                    // s_i x_{i+1} = x_i s_i − Σ_b (−1)^{σb̄} b^∨_i ⊗ b_{i+1}, the inverse
                    // of x_i s_i = s_i x_{i+1} + Σ_b (−1)^{σb̄} b^∨_i ⊗ b_{i+1}.
                    queue.push((coeff.clone(), tail(vec![Item::X(i), Item::S(i)])));
                    for b in 0..alg.dim {
                        let sign = sgn_exp(alg.sigma as i64 * alg.par(b) as i64);
                        for (t, c) in tensor_choices(
                            alg,
                            m,
                            &[(i - 1, alg.dual_basis[b].clone()), (i, alg.basis_vec(b))],
                        ) {
                            queue.push((-coeff.clone() * sign.clone() * c, tail(vec![Item::T(t)])));
                        }
                    }
                } else {
                    queue.push((coeff, tail(vec![Item::X(j), Item::S(i)])));
                }
            }
            (Item::T(t), Item::X(i)) => {
                // t x_i = (−1)^{σ·p(t)} x_i (t with ψ⁻¹ applied in slot i).
                let i = *i;
                let sign = sgn_exp(alg.sigma as i64 * tensor_parity(alg, t) as i64);
                let inv = nakayama_power(alg, -1, &alg.basis_vec(t[i - 1] as usize));
                for (k, c) in inv.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let mut t2 = t.clone();
                    t2[i - 1] = k as u8;
                    queue.push((
                        coeff.clone() * sign.clone() * c.clone(),
                        tail(vec![Item::X(i), Item::T(t2)]),
                    ));
                }
            }
            _ => unreachable!(),
        }
    }
    out
}

/// Product in `D_m` (PBW-normalized).
pub fn dm_multiply(
    alg: &FrobeniusAlgebra,
    a: &DmElement,
    b: &DmElement,
) -> Result<DmElement, DahgError> {
    if a.m != b.m {
        return Err(DahgError::RankMismatch);
    }
    let m = a.m;
    let mut words = Vec::new();
    for (ka, ca) in &a.terms {
        for (kb, cb) in &b.terms {
            let mut w = word_of_key(m, ka);
            w.extend(word_of_key(m, kb));
            words.push((ca.clone() * cb.clone(), w));
        }
    }
    Ok(normalize(alg, m, words))
}

/// Shift an `A_m` basis term `n` slots to the right inside `A_{n+m}`
/// (`shift_n(β) = 1^{⊗n}⊗β`, permutation fixing `1..n`).
fn shift_term(alg: &FrobeniusAlgebra, n: usize, (t, p): &Term) -> WreathElement {
    let m = t.len();
    let mut images: Vec<u8> = (0..n as u8).collect();
    for i in 0..m {
        images.push((n + p.apply(i)) as u8);
    }
    let perm = Perm(images);
    let mut out = WreathElement::zero(n + m);
    for (pre, c) in tensor_choices(alg, n, &[]) {
        let mut full = pre;
        full.extend(t.iter().cloned());
        out.add_term((full, perm.clone()), c);
    }
    out
}

/// The evaluation `χ′_{m,n}: D_m → A_{n+m}^op`, returned as the underlying
/// `A_{n+m}` value: `x_i ↦ J_{n+m−i}` and `A_m^op ∋ u ↦ shift_n(u)`. Since
/// the target is the opposite algebra (right-multiplication operators),
/// `χ′(ab)` equals `χ′(b)·χ′(a)` as `A_{n+m}` values.
pub fn chi_prime(
    alg: &FrobeniusAlgebra,
    m: usize,
    n: usize,
    a: &DmElement,
) -> Result<WreathElement, DahgError> {
    if a.m != m {
        return Err(DahgError::RankMismatch);
    }
    if dim_a_n(alg, n + m) > 500_000 {
        return Err(DahgError::SizeLimit);
    }
    let mut out = WreathElement::zero(n + m);
    for ((exps, u), c) in &a.terms {
        // A-value of χ′(x^𝐚 ∘ op(u)): the op product reverses, giving
        // shift(u)·J_n^{a_m}·J_{n+1}^{a_{m−1}}⋯J_{n+m−1}^{a_1}, times the
        // Koszul sign accumulated when composing the corresponding chain of
        // homogeneous right-multiplication operators (each x-factor has
        // parity σ, the tensor factor has its own parity).
        let total: usize = exps.iter().sum();
        let pu = tensor_parity(alg, &u.0) as usize;
        let koszul = alg.sigma as usize * (total * (total.saturating_sub(1)) / 2 + total * pu);
        let mut acc = shift_term(alg, n, u).scale(&sgn_exp(koszul as i64));
        for i in (1..=m).rev() {
            let j = embed(alg, &jucys_murphy(alg, (n + m - i) as i64), n + m);
            for _ in 0..exps[i - 1] {
                acc = multiply(alg, &acc, &j);
            }
        }
        out = out.add(&acc.scale(c));
    }
    Ok(out)
}

/// `dist_m(τ) = |{1 ≤ i ≤ n : τ(i) ≠ i}|` (the count of disturbed points
/// among the first `n`).
pub fn disturbance(tau: &Perm, n: usize) -> usize {
    (0..n.min(tau.n())).filter(|&i| tau.apply(i) != i).count()
}

/// Product `t_{i_ℓ,j}⋯t_{i_1,j}` in `A_j`, reduced to the associated graded
/// algebra of the m-disturbance filtration: only terms of disturbance exactly
/// `ℓ` survive.
pub fn tij_graded_product(
    alg: &FrobeniusAlgebra,
    indices: &[usize],
    j: usize,
    n: usize,
) -> Result<WreathElement, DahgError> {
    if j <= n || indices.iter().any(|&i| i < 1 || i > n) {
        return Err(DahgError::IndexOutOfRange);
    }
    let mut acc = wreath::one(alg, j);
    for &i in indices {
        acc = multiply(alg, &t_elem(alg, i, j, j), &acc);
    }
    let mut out = WreathElement::zero(j);
    for (t, c) in &acc.terms {
        if disturbance(&t.1, n) == indices.len() {
            out.add_term(t.clone(), c.clone());
        }
    }
    Ok(out)
}

/// Certificate that `χ′_{m,n}` is injective on the PBW truncation with
/// `Σaᵢ ≤ x_degree_cap`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InjectivityReport {
    pub m: usize,
    pub n: usize,
    pub x_degree_cap: usize,
    pub basis_count: usize,
    pub rank: usize,
    pub injective: bool,
}

fn exponent_tuples(m: usize, cap: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..m {
        let mut next = Vec::new();
        for t in &out {
            let used: usize = t.iter().sum();
            for a in 0..=(cap - used) {
                let mut t2 = t.clone();
                t2.push(a);
                next.push(t2);
            }
        }
        out = next;
    }
    out
}

/// Enumerate the PBW basis with `Σaᵢ ≤ x_degree_cap`, image everything under
/// `χ′_{m,n}`, and compute the exact rank.
pub fn certify_injectivity(
    alg: &FrobeniusAlgebra,
    m: usize,
    n: usize,
    x_degree_cap: usize,
) -> Result<InjectivityReport, DahgError> {
    let dim = dim_a_n(alg, n + m);
    if dim > 4000 || dim_a_n(alg, m) > 400 {
        return Err(DahgError::SizeLimit);
    }
    let mut vecs = Vec::new();
    let mut count = 0usize;
    for exps in exponent_tuples(m, x_degree_cap) {
        for idx in 0..dim_a_n(alg, m) {
            let u = wreath::term_unindex(alg, m, idx);
            let mut e = DmElement::zero(m);
            e.add_term((exps.clone(), u), Rat::one());
            let img = chi_prime(alg, m, n, &e)?;
            count += 1;
            let mut dense = vec![Rat::zero(); dim];
            for (t, c) in &img.terms {
                dense[term_index(alg, t)] = c.clone();
            }
            vecs.push(dense);
        }
    }
    let rank = row_reduce(&mut vecs);
    Ok(InjectivityReport {
        m,
        n,
        x_degree_cap,
        basis_count: count,
        rank,
        injective: rank == count,
    })
}
