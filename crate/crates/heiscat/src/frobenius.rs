//! Graded Frobenius superalgebras: ingestion, validation, and enrichment
//! (dual basis, Nakayama automorphism, trace degree data).

use crate::coeff::{invert_matrix, rint, Rat};
use num::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisElem {
    pub label: String,
    pub degree: i64,
    pub parity: u8,
}

/// Raw description of an algebra: basis with grading data, unit and trace
/// coordinate vectors, and the multiplication structure constants.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraSpec {
    pub name: String,
    pub basis: Vec<BasisElem>,
    pub unit: Vec<Rat>,
    /// `mult[i][j]` = coordinates of `b_i · b_j`.
    pub mult: Vec<Vec<Vec<Rat>>>,
    pub trace: Vec<Rat>,
    pub declared_delta: Option<i64>,
    pub declared_sigma: Option<u8>,
}

#[derive(Clone, Debug, thiserror::Error, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("multiplication is not associative at basis triple ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    #[error("declared unit fails at basis index {0}")]
    NotUnital(usize),
    #[error("trace pairing is degenerate (Gram matrix is singular)")]
    TraceDegenerate,
    #[error("trace is not homogeneous: basis indices {0} and {1} both have nonzero trace but different (degree, parity)")]
    TraceNotHomogeneous(usize, usize),
    #[error("grading violated by product of basis elements ({0}, {1})")]
    GradingViolation(usize, usize),
    #[error("unknown builtin algebra `{0}`")]
    UnknownBuiltin(String),
    #[error("malformed algebra spec: {0}")]
    Malformed(String),
}

/// A validated Frobenius superalgebra with derived structure.
#[derive(Debug)]
pub struct FrobeniusAlgebra {
    pub spec: AlgebraSpec,
    pub dim: usize,
    /// Row `k` = coordinates of `b_k^∨`.
    pub dual_basis: Vec<Vec<Rat>>,
    /// Row `k` = coordinates of `ψ_B(b_k)`.
    pub nakayama: Vec<Vec<Rat>>,
    pub delta: i64,
    pub sigma: u8,
    /// Sparse structure constants: `mult_sparse[i][j] = [(k, coeff), ...]`.
    mult_sparse: Vec<Vec<Vec<(usize, Rat)>>>,
    /// Whether ψ_B is the identity matrix.
    pub nakayama_is_identity: bool,
}

impl FrobeniusAlgebra {
    pub fn deg(&self, i: usize) -> i64 {
        self.spec.basis[i].degree
    }

    pub fn par(&self, i: usize) -> u8 {
        self.spec.basis[i].parity
    }

    pub fn label(&self, i: usize) -> &str {
        &self.spec.basis[i].label
    }

    /// Degree of `b_i^∨` is `δ − deg b_i`; parity is `par b_i + σ`.
    pub fn dual_deg(&self, i: usize) -> i64 {
        self.delta - self.deg(i)
    }

    pub fn dual_par(&self, i: usize) -> u8 {
        (self.par(i) + self.sigma) % 2
    }

    pub fn mult_basis(&self, i: usize, j: usize) -> &[(usize, Rat)] {
        &self.mult_sparse[i][j]
    }

    pub fn mult(&self, a: &[Rat], b: &[Rat]) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); self.dim];
        for (i, ca) in a.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            for (j, cb) in b.iter().enumerate() {
                if cb.is_zero() {
                    continue;
                }
                let s = ca.clone() * cb.clone();
                for (k, c) in &self.mult_sparse[i][j] {
                    out[*k] += s.clone() * c.clone();
                }
            }
        }
        out
    }

    pub fn trace(&self, v: &[Rat]) -> Rat {
        v.iter()
            .zip(&self.spec.trace)
            .map(|(c, t)| c.clone() * t.clone())
            .sum()
    }

    pub fn trace_basis(&self, i: usize) -> Rat {
        self.spec.trace[i].clone()
    }

    pub fn unit(&self) -> &[Rat] {
        &self.spec.unit
    }

    pub fn basis_vec(&self, i: usize) -> Vec<Rat> {
        let mut v = vec![Rat::zero(); self.dim];
        v[i] = Rat::one();
        v
    }

    /// Linear extension of `b_k ↦ b_k^∨`.
    pub fn dual(&self, v: &[Rat]) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); self.dim];
        for (k, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (m, d) in self.dual_basis[k].iter().enumerate() {
                out[m] += c.clone() * d.clone();
            }
        }
        out
    }

    pub fn apply_nakayama(&self, v: &[Rat]) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); self.dim];
        for (k, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (m, d) in self.nakayama[k].iter().enumerate() {
                out[m] += c.clone() * d.clone();
            }
        }
        out
    }

    /// Pretty-print a coordinate vector using basis labels.
    pub fn show(&self, v: &[Rat]) -> String {
        let mut parts = Vec::new();
        for (k, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if c.is_one() {
                parts.push(self.label(k).to_string());
            } else {
                parts.push(format!("{}*{}", c, self.label(k)));
            }
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }
}

fn vec_is_homogeneous(spec: &AlgebraSpec, v: &[Rat], deg: i64, par: u8) -> bool {
    v.iter().enumerate().all(|(k, c)| {
        c.is_zero() || (spec.basis[k].degree == deg && spec.basis[k].parity == par)
    })
}

/// Validate a raw spec and derive the dual basis, Nakayama automorphism, and
/// the trace degree `(−δ, σ)`.
pub fn validate(spec: AlgebraSpec) -> Result<FrobeniusAlgebra, AlgebraError> {
    let dim = spec.basis.len();
    if dim == 0 {
        return Err(AlgebraError::Malformed("empty basis".into()));
    }
    {
        let mut seen = HashMap::new();
        for (i, b) in spec.basis.iter().enumerate() {
            if let Some(j) = seen.insert(b.label.clone(), i) {
                return Err(AlgebraError::Malformed(format!(
                    "duplicate basis label `{}` at indices {j} and {i}",
                    b.label
                )));
            }
            if b.parity > 1 {
                return Err(AlgebraError::Malformed(format!(
                    "parity of basis element {i} must be 0 or 1"
                )));
            }
            if b.degree < 0 {
                return Err(AlgebraError::Malformed(format!(
                    "degree of basis element {i} must be nonnegative"
                )));
            }
        }
    }
    for field in [&spec.unit, &spec.trace] {
        if field.len() != dim {
            return Err(AlgebraError::Malformed(
                "unit/trace vector length does not match basis".into(),
            ));
        }
    }
    if spec.mult.len() != dim || spec.mult.iter().any(|r| r.len() != dim)
        || spec.mult.iter().flatten().any(|v| v.len() != dim)
    {
        return Err(AlgebraError::Malformed(
            "multiplication table shape does not match basis".into(),
        ));
    }

    // Grading of products.
    for i in 0..dim {
        for j in 0..dim {
            let deg = spec.basis[i].degree + spec.basis[j].degree;
            let par = (spec.basis[i].parity + spec.basis[j].parity) % 2;
            if !vec_is_homogeneous(&spec, &spec.mult[i][j], deg, par) {
                return Err(AlgebraError::GradingViolation(i, j));
            }
        }
    }

    let mult = |a: &[Rat], b: &[Rat]| -> Vec<Rat> {
        let mut out = vec![Rat::zero(); dim];
        for (i, ca) in a.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            for (j, cb) in b.iter().enumerate() {
                if cb.is_zero() {
                    continue;
                }
                for (k, c) in spec.mult[i][j].iter().enumerate() {
                    out[k] += ca.clone() * cb.clone() * c.clone();
                }
            }
        }
        out
    };
    let basis_vec = |i: usize| -> Vec<Rat> {
        let mut v = vec![Rat::zero(); dim];
        v[i] = Rat::one();
        v
    };

    // Unit.
    for i in 0..dim {
        let e = basis_vec(i);
        if mult(&spec.unit, &e) != e || mult(&e, &spec.unit) != e {
            return Err(AlgebraError::NotUnital(i));
        }
    }

    // Associativity.
    for i in 0..dim {
        for j in 0..dim {
            for k in 0..dim {
                let lhs = mult(&spec.mult[i][j], &basis_vec(k));
                let rhs = mult(&basis_vec(i), &spec.mult[j][k]);
                if lhs != rhs {
                    return Err(AlgebraError::NotAssociative(i, j, k));
                }
            }
        }
    }

    // Trace homogeneity: all basis elements with nonzero trace share (δ, σ).
    let mut support: Option<(usize, i64, u8)> = None;
    for (i, t) in spec.trace.iter().enumerate() {
        if t.is_zero() {
            continue;
        }
        let (d, p) = (spec.basis[i].degree, spec.basis[i].parity);
        match support {
            None => support = Some((i, d, p)),
            Some((i0, d0, p0)) => {
                if (d, p) != (d0, p0) {
                    return Err(AlgebraError::TraceNotHomogeneous(i0, i));
                }
            }
        }
    }
    let Some((_, delta, sigma)) = support else {
        return Err(AlgebraError::TraceDegenerate);
    };
    if let Some(dd) = spec.declared_delta {
        if dd != delta {
            return Err(AlgebraError::Malformed(format!(
                "declared delta {dd} disagrees with computed {delta}"
            )));
        }
    }
    if let Some(ds) = spec.declared_sigma {
        if ds != sigma {
            return Err(AlgebraError::Malformed(format!(
                "declared sigma {ds} disagrees with computed {sigma}"
            )));
        }
    }

    // Gram matrix G_{kℓ} = tr(b_k b_ℓ); nondegeneracy ⇔ invertibility.
    let trace_of = |v: &[Rat]| -> Rat {
        v.iter()
            .zip(&spec.trace)
            .map(|(c, t)| c.clone() * t.clone())
            .sum()
    };
    let gram: Vec<Vec<Rat>> = (0..dim)
        .map(|k| (0..dim).map(|l| trace_of(&spec.mult[k][l])).collect())
        .collect();
    let gram_inv = invert_matrix(&gram).ok_or(AlgebraError::TraceDegenerate)?;

    // Dual basis: tr(b_k b_ℓ^∨) = δ_{kℓ}, so b_ℓ^∨ = Σ_m (G⁻¹)_{mℓ} b_m.
    let dual_basis: Vec<Vec<Rat>> = (0..dim)
        .map(|l| (0..dim).map(|m| gram_inv[m][l].clone()).collect())
        .collect();

    // Nakayama: ψ(b_i) solves tr(b_k ψ(b_i)) = (−1)^{ī k̄} tr(b_i b_k) ∀k,
    // i.e. G · ψ(b_i) = rhs.
    let mut nakayama = Vec::with_capacity(dim);
    for i in 0..dim {
        let rhs: Vec<Rat> = (0..dim)
            .map(|k| {
                let sign = if spec.basis[i].parity * spec.basis[k].parity == 1 {
                    -Rat::one()
                } else {
                    Rat::one()
                };
                sign * trace_of(&spec.mult[i][k])
            })
            .collect();
        let v: Vec<Rat> = (0..dim)
            .map(|m| {
                (0..dim)
                    .map(|k| gram_inv[m][k].clone() * rhs[k].clone())
                    .sum()
            })
            .collect();
        nakayama.push(v);
    }

    // Internal consistency checks (cheap; run on every construction).
    let sign_pow = |e: u8| if e % 2 == 1 { -Rat::one() } else { Rat::one() };
    for k in 0..dim {
        // ψ preserves grading.
        assert!(
            vec_is_homogeneous(&spec, &nakayama[k], spec.basis[k].degree, spec.basis[k].parity),
            "Nakayama automorphism fails to preserve grading"
        );
        // Dual basis degree: tr((b_k)(b_k^∨)) ≠ 0 forces the product to sit in
        // degree (δ, σ), hence deg b_k^∨ = δ − deg b_k.
        assert!(
            vec_is_homogeneous(
                &spec,
                &dual_basis[k],
                delta - spec.basis[k].degree,
                (spec.basis[k].parity + sigma) % 2
            ),
            "dual basis element is not homogeneous of the expected degree"
        );
        // Double-dual law: (b^∨)^∨ = (−1)^{σb̄+b̄} ψ(b).
        let mut ddual = vec![Rat::zero(); dim];
        for (m, c) in dual_basis[k].iter().enumerate() {
            for (r, d) in dual_basis[m].iter().enumerate() {
                ddual[r] += c.clone() * d.clone();
            }
        }
        let s = sign_pow(sigma * spec.basis[k].parity + spec.basis[k].parity);
        let expect: Vec<Rat> = nakayama[k].iter().map(|c| s.clone() * c.clone()).collect();
        assert_eq!(ddual, expect, "double-dual law fails");
    }
    // Nakayama is an algebra automorphism.
    {
        let apply = |mat: &[Vec<Rat>], v: &[Rat]| -> Vec<Rat> {
            let mut out = vec![Rat::zero(); dim];
            for (k, c) in v.iter().enumerate() {
                for (m, d) in mat[k].iter().enumerate() {
                    out[m] += c.clone() * d.clone();
                }
            }
            out
        };
        assert_eq!(apply(&nakayama, &spec.unit), spec.unit, "ψ(1) ≠ 1");
        for i in 0..dim {
            for j in 0..dim {
                let lhs = apply(&nakayama, &spec.mult[i][j]);
                let rhs = mult(&nakayama[i], &nakayama[j]);
                assert_eq!(lhs, rhs, "Nakayama map is not multiplicative");
            }
        }
        assert!(
            invert_matrix(&nakayama).is_some(),
            "Nakayama map is not invertible"
        );
    }
    // Casimir basis-independence: Σ b⊗b^∨ = Σ (−1)^{σb̄+b̄} b^∨⊗ψ(b).
    {
        let mut lhs = vec![vec![Rat::zero(); dim]; dim];
        let mut rhs = vec![vec![Rat::zero(); dim]; dim];
        for k in 0..dim {
            for (m, c) in dual_basis[k].iter().enumerate() {
                lhs[k][m] += c.clone();
            }
            let s = sign_pow(sigma * spec.basis[k].parity + spec.basis[k].parity);
            for (m, c) in dual_basis[k].iter().enumerate() {
                for (r, d) in nakayama[k].iter().enumerate() {
                    rhs[m][r] += s.clone() * c.clone() * d.clone();
                }
            }
        }
        assert_eq!(lhs, rhs, "Casimir element depends on the basis");
    }

    let mult_sparse: Vec<Vec<Vec<(usize, Rat)>>> = (0..dim)
        .map(|i| {
            (0..dim)
                .map(|j| {
                    spec.mult[i][j]
                        .iter()
                        .enumerate()
                        .filter(|(_, c)| !c.is_zero())
                        .map(|(k, c)| (k, c.clone()))
                        .collect()
                })
                .collect()
        })
        .collect();
    let nakayama_is_identity = (0..dim).all(|k| {
        nakayama[k]
            .iter()
            .enumerate()
            .all(|(m, c)| if m == k { c.is_one() } else { c.is_zero() })
    });

    Ok(FrobeniusAlgebra {
        spec,
        dim,
        dual_basis,
        nakayama,
        delta,
        sigma,
        mult_sparse,
        nakayama_is_identity,
    })
}

// ---------------------------------------------------------------------------
// Builtins.
// ---------------------------------------------------------------------------

struct SpecBuilder {
    name: String,
    basis: Vec<BasisElem>,
    unit: Vec<(usize, Rat)>,
    mult: Vec<(usize, usize, Vec<(usize, Rat)>)>,
    trace: Vec<(usize, Rat)>,
}

impl SpecBuilder {
    fn new(name: &str, basis: &[(&str, i64, u8)]) -> Self {
        SpecBuilder {
            name: name.to_string(),
            basis: basis
                .iter()
                .map(|&(l, d, p)| BasisElem {
                    label: l.to_string(),
                    degree: d,
                    parity: p,
                })
                .collect(),
            unit: Vec::new(),
            mult: Vec::new(),
            trace: Vec::new(),
        }
    }

    fn unit1(mut self, terms: &[usize]) -> Self {
        self.unit = terms.iter().map(|&k| (k, Rat::one())).collect();
        self
    }

    fn prod(mut self, i: usize, j: usize, out: &[(usize, i128)]) -> Self {
        self.mult
            .push((i, j, out.iter().map(|&(k, c)| (k, rint(c))).collect()));
        self
    }

    fn tr(mut self, terms: &[(usize, i128)]) -> Self {
        self.trace = terms.iter().map(|&(k, c)| (k, rint(c))).collect();
        self
    }

    fn build(self) -> AlgebraSpec {
        let dim = self.basis.len();
        let dense = |sparse: &[(usize, Rat)]| -> Vec<Rat> {
            let mut v = vec![Rat::zero(); dim];
            for (k, c) in sparse {
                v[*k] = c.clone();
            }
            v
        };
        let mut mult = vec![vec![vec![Rat::zero(); dim]; dim]; dim];
        for (i, j, out) in &self.mult {
            mult[*i][*j] = dense(out);
        }
        AlgebraSpec {
            name: self.name,
            basis: self.basis,
            unit: dense(&self.unit),
            mult,
            trace: dense(&self.trace),
            declared_delta: None,
            declared_sigma: None,
        }
    }
}

/// Construct one of the built-in validated example algebras.
///
/// Recognized names: `trivial`, `clifford`, `dual_numbers`,
/// `truncated_poly_<k>` (e.g. `truncated_poly_3`), `exterior_line`,
/// `zigzag_a2`.
pub fn builtin(name: &str) -> Result<FrobeniusAlgebra, AlgebraError> {
    let spec = match name {
        "trivial" => SpecBuilder::new("trivial", &[("1", 0, 0)])
            .unit1(&[0])
            .prod(0, 0, &[(0, 1)])
            .tr(&[(0, 1)])
            .build(),
        "clifford" => SpecBuilder::new("clifford", &[("1", 0, 0), ("c", 0, 1)])
            .unit1(&[0])
            .prod(0, 0, &[(0, 1)])
            .prod(0, 1, &[(1, 1)])
            .prod(1, 0, &[(1, 1)])
            .prod(1, 1, &[(0, 1)])
            .tr(&[(1, 1)])
            .build(),
        "dual_numbers" => SpecBuilder::new("dual_numbers", &[("1", 0, 0), ("x", 1, 0)])
            .unit1(&[0])
            .prod(0, 0, &[(0, 1)])
            .prod(0, 1, &[(1, 1)])
            .prod(1, 0, &[(1, 1)])
            .tr(&[(1, 1)])
            .build(),
        "exterior_line" => SpecBuilder::new("exterior_line", &[("1", 0, 0), ("xi", 1, 1)])
            .unit1(&[0])
            .prod(0, 0, &[(0, 1)])
            .prod(0, 1, &[(1, 1)])
            .prod(1, 0, &[(1, 1)])
            .tr(&[(1, 1)])
            .build(),
        "zigzag_a2" => {
            // Basis order: e1, e2, a12, a21, w1, w2.
            // a12 ∈ e1·B·e2, a21 ∈ e2·B·e1, a12·a21 = w1, a21·a12 = w2.
            let (e1, e2, a12, a21, w1, w2) = (0usize, 1usize, 2usize, 3usize, 4usize, 5usize);
            let mut b = SpecBuilder::new(
                "zigzag_a2",
                &[
                    ("e1", 0, 0),
                    ("e2", 0, 0),
                    ("a12", 1, 0),
                    ("a21", 1, 0),
                    ("w1", 2, 0),
                    ("w2", 2, 0),
                ],
            )
            .unit1(&[e1, e2])
            .tr(&[(w1, 1), (w2, 1)]);
            b = b
                .prod(e1, e1, &[(e1, 1)])
                .prod(e2, e2, &[(e2, 1)])
                .prod(e1, a12, &[(a12, 1)])
                .prod(a12, e2, &[(a12, 1)])
                .prod(e2, a21, &[(a21, 1)])
                .prod(a21, e1, &[(a21, 1)])
                .prod(a12, a21, &[(w1, 1)])
                .prod(a21, a12, &[(w2, 1)])
                .prod(e1, w1, &[(w1, 1)])
                .prod(w1, e1, &[(w1, 1)])
                .prod(e2, w2, &[(w2, 1)])
                .prod(w2, e2, &[(w2, 1)]);
            b.build()
        }
        _ => {
            if let Some(kstr) = name.strip_prefix("truncated_poly_") {
                let k: usize = kstr
                    .parse()
                    .map_err(|_| AlgebraError::UnknownBuiltin(name.to_string()))?;
                if k == 0 {
                    return Err(AlgebraError::UnknownBuiltin(name.to_string()));
                }
                let labels: Vec<String> = (0..k)
                    .map(|i| match i {
                        0 => "1".to_string(),
                        1 => "x".to_string(),
                        _ => format!("x^{i}"),
                    })
                    .collect();
                let basis: Vec<(&str, i64, u8)> = labels
                    .iter()
                    .enumerate()
                    .map(|(i, l)| (l.as_str(), i as i64, 0))
                    .collect();
                let mut b = SpecBuilder::new(name, &basis)
                    .unit1(&[0])
                    .tr(&[(k - 1, 1)]);
                for i in 0..k {
                    for j in 0..k {
                        if i + j < k {
                            b = b.prod(i, j, &[(i + j, 1)]);
                        }
                    }
                }
                b.build()
            } else {
                return Err(AlgebraError::UnknownBuiltin(name.to_string()));
            }
        }
    };
    validate(spec)
}

// ---------------------------------------------------------------------------
// Spec-file (de)serialization: the on-disk JSON container.
// ---------------------------------------------------------------------------

/// On-disk representation: sparse vectors as `[k, num, den]` triples and the
/// multiplication table as `[i, j, [[k, num, den], ...]]` rows.
#[derive(Serialize, Deserialize)]
struct FileSpec {
    name: String,
    basis: Vec<BasisElem>,
    unit: Vec<(usize, i128, i128)>,
    mult: Vec<(usize, usize, Vec<(usize, i128, i128)>)>,
    trace: Vec<(usize, i128, i128)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    delta: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    sigma: Option<u8>,
}

fn dense_from_triples(
    dim: usize,
    triples: &[(usize, i128, i128)],
) -> Result<Vec<Rat>, AlgebraError> {
    let mut v = vec![Rat::zero(); dim];
    for &(k, num, den) in triples {
        if k >= dim {
            return Err(AlgebraError::Malformed(format!(
                "coordinate index {k} out of range"
            )));
        }
        if den == 0 {
            return Err(AlgebraError::Malformed("zero denominator".into()));
        }
        v[k] += Rat::new(num, den);
    }
    Ok(v)
}

impl AlgebraSpec {
    pub fn from_json_str(s: &str) -> Result<AlgebraSpec, AlgebraError> {
        let file: FileSpec =
            serde_json::from_str(s).map_err(|e| AlgebraError::Malformed(e.to_string()))?;
        let dim = file.basis.len();
        let unit = dense_from_triples(dim, &file.unit)?;
        let trace = dense_from_triples(dim, &file.trace)?;
        let mut mult = vec![vec![vec![Rat::zero(); dim]; dim]; dim];
        for (i, j, triples) in &file.mult {
            if *i >= dim || *j >= dim {
                return Err(AlgebraError::Malformed(format!(
                    "multiplication row ({i}, {j}) out of range"
                )));
            }
            mult[*i][*j] = dense_from_triples(dim, triples)?;
        }
        Ok(AlgebraSpec {
            name: file.name,
            basis: file.basis,
            unit,
            mult,
            trace,
            declared_delta: file.delta,
            declared_sigma: file.sigma,
        })
    }

    pub fn to_json_string(&self) -> String {
        let sparse = |v: &[Rat]| -> Vec<(usize, i128, i128)> {
            v.iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| (k, *c.numer(), *c.denom()))
                .collect()
        };
        let mut mult = Vec::new();
        for (i, row) in self.mult.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                let s = sparse(v);
                if !s.is_empty() {
                    mult.push((i, j, s));
                }
            }
        }
        let file = FileSpec {
            name: self.name.clone(),
            basis: self.basis.clone(),
            unit: sparse(&self.unit),
            mult,
            trace: sparse(&self.trace),
            delta: self.declared_delta,
            sigma: self.declared_sigma,
        };
        serde_json::to_string_pretty(&file).expect("spec serialization cannot fail")
    }
}

/// Load an algebra either by builtin name or from a spec file on disk.
pub fn load(name_or_path: &str) -> Result<FrobeniusAlgebra, AlgebraError> {
    match builtin(name_or_path) {
        Ok(a) => Ok(a),
        Err(AlgebraError::UnknownBuiltin(_)) => {
            let text = std::fs::read_to_string(name_or_path).map_err(|e| {
                AlgebraError::Malformed(format!(
                    "`{name_or_path}` is not a builtin and could not be read as a file: {e}"
                ))
            })?;
            validate(AlgebraSpec::from_json_str(&text)?)
        }
        Err(e) => Err(e),
    }
}
