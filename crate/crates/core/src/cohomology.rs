//! The deformation complex of a cocommutative rack bialgebra, the Loday
//! complex of a right Leibniz algebra and the embedding between them, plus
//! first-order deformations over dual numbers.
//!
//! A cochain `ω: C^{⊗n} → C` is stored as a vector of length `d^{n+1}` with
//! the entry for input `(i_1,…,i_n)` and output `o` at `flatten(i)·d + o`.

use serde::Serialize;

use crate::coalgebra::FinCoalgebra;
use crate::error::{Error, Result};
use crate::linalg::{kernel, rank, SparseMat, SparseVec, Subspace, TrackedBasis};
use crate::rack::{from_leibniz, LeibnizAlgebra, RackBialgebra, RackReport};
use crate::report::Verdict;
use crate::scalar::{DualScalar, Ring, Scalar};
#[cfg(test)]
use crate::scalar::Field;
use crate::tensor::{flatten, multi_indices, power_dim, unflatten};

type Vector = SparseVec<Scalar>;
type Matrix = SparseMat<Scalar>;

/// `μⁿ: C^{⊗n} → C`
pub fn mu_n(r: &RackBialgebra<Scalar>, n: usize) -> Result<Matrix> {
    if n == 0 {
        return Err(Error::InvalidStructure("μⁿ needs n ≥ 1".into()));
    }
    let d = r.dim();
    power_dim(d, n)?;
    Ok(SparseMat::from_columns(d, multi_indices(d, n).map(|idx| r.mu_basis(&idx)).collect()))
}

/// A cochain as a matrix `C^{⊗n} → C`.
pub fn cochain_matrix(omega: &Vector, d: usize, n: usize) -> Matrix {
    let mut cols = vec![SparseVec::zero(d); d.pow(n as u32)];
    for (f, c) in omega.iter() {
        cols[f / d].add_term(f % d, c.clone());
    }
    SparseMat::from_columns(d, cols)
}

pub fn cochain_vector(m: &Matrix) -> Vector {
    let d = m.rows();
    let mut out = SparseVec::zero(m.cols() * d);
    for (j, col) in m.columns().iter().enumerate() {
        for (i, c) in col.iter() {
            out.add_term(j * d + i, c.clone());
        }
    }
    out
}

/// The deformation complex of a cocommutative rack bialgebra.
#[derive(Clone, Debug)]
pub struct DeformationComplex {
    rack: RackBialgebra<Scalar>,
}

impl DeformationComplex {
    pub fn new(rack: RackBialgebra<Scalar>) -> Result<Self> {
        if let Some(w) = rack.coalgebra().check_cocommutative().counterexample {
            return Err(Error::NotCocommutative(w.join(",")));
        }
        Ok(DeformationComplex { rack })
    }

    pub fn rack(&self) -> &RackBialgebra<Scalar> {
        &self.rack
    }

    fn d(&self) -> usize {
        self.rack.dim()
    }

    /// Dimension of `Hom(C^{⊗n}, C)`.
    pub fn hom_dim(&self, n: usize) -> Result<usize> {
        power_dim(self.d(), n + 1)
    }

    /// Evaluates a cochain of arity `n` on arbitrary arguments.
    pub fn eval(&self, omega: &Matrix, args: &[Vector]) -> Vector {
        let mut t = SparseVec::from_pairs(1, [(0, Scalar::one())]);
        for a in args {
            t = t.tensor(a);
        }
        omega.apply(&t)
    }

    /// Matrix of `ω ↦ Δω − (ω⊗μⁿ + μⁿ⊗ω)Δ_{C^{⊗n}}` on `Hom(C^{⊗n}, C)`.
    pub fn coderivation_condition(&self, n: usize) -> Result<Matrix> {
        let d = self.d();
        let hom = self.hom_dim(n)?;
        let inputs = power_dim(d, n)?;
        let rows = inputs * d * d;
        let co = self.rack.coalgebra();
        let mut cols = vec![SparseVec::zero(rows); hom];
        for (ri, r) in multi_indices(d, n).enumerate() {
            let base = ri * d * d;
            // Δω(r): column (r, o) gets Δ(e_o)
            for o in 0..d {
                for (f, c) in co.comul(o).iter() {
                    cols[ri * d + o].add_term(base + f, c.clone());
                }
            }
            for (a, b, c) in co.tensor_coproduct_of(&r) {
                let (fa, fb) = (flatten(&a, d), flatten(&b, d));
                // ω(a)⊗μ(b): column (a, o) gets e_o⊗μ(b)
                for (p, x) in self.rack.mu_basis(&b).iter() {
                    for o in 0..d {
                        cols[fa * d + o].add_term(base + o * d + p, -(c.clone() * x.clone()));
                    }
                }
                for (p, x) in self.rack.mu_basis(&a).iter() {
                    for o in 0..d {
                        cols[fb * d + o].add_term(base + p * d + o, -(c.clone() * x.clone()));
                    }
                }
            }
        }
        Ok(SparseMat::from_columns(rows, cols))
    }

    /// `Coder(C^{⊗n}, C, μⁿ)` inside `Hom(C^{⊗n}, C)`.
    pub fn coderivation_space(&self, n: usize) -> Result<Subspace<Scalar>> {
        Ok(kernel(&self.coderivation_condition(n)?))
    }

    pub fn is_coderivation(&self, omega: &Vector, n: usize) -> Result<bool> {
        Ok(self.coderivation_condition(n)?.apply(omega).is_zero())
    }

    /// `d^n ω` on the whole of `Hom(C^{⊗n}, C)`.
    pub fn differential_of(&self, omega: &Vector, n: usize) -> Result<Vector> {
        let d = self.d();
        let r = &self.rack;
        let co = r.coalgebra();
        let om = cochain_matrix(omega, d, n);
        let e = |k: usize| r.basis(k);
        let mut out = SparseVec::zero(self.hom_dim(n + 1)?);
        for (ri, rr) in multi_indices(d, n + 1).enumerate() {
            let mut val = SparseVec::zero(d);
            for i in 1..=n {
                let sign = if i % 2 == 1 { Scalar::one() } else { -Scalar::one() };
                // d_{i,1}: ω(r_1..r_{i−1}, r_{i+1}'..) ◁ μ(r_i, r_{i+1}''..)
                for (a, b, c) in co.tensor_coproduct_of(&rr[i..]) {
                    let mut args: Vec<Vector> = rr[..i - 1].iter().map(|k| e(*k)).collect();
                    args.extend(a.iter().map(|k| e(*k)));
                    let w = self.eval(&om, &args);
                    let mut m = vec![rr[i - 1]];
                    m.extend_from_slice(&b);
                    val.add_scaled(&r.act_vec(&w, &r.mu_basis(&m)), &(sign.clone() * c));
                }
                // d_{i,0}: ω(r_1◁t_1, …, r_{i−1}◁t_{i−1}, r_{i+1}, …)
                let t = co.iterated_coproduct_of(&e(rr[i - 1]), i - 1)?;
                for (f, c) in t.iter() {
                    let legs = unflatten(f, d, i - 1);
                    let mut args: Vec<Vector> = (0..i - 1).map(|k| r.act(rr[k], legs[k]).clone()).collect();
                    args.extend(rr[i..].iter().map(|k| e(*k)));
                    val.add_scaled(&self.eval(&om, &args), &-(sign.clone() * c.clone()));
                }
            }
            // d_{n+1}: μⁿ(r_1, r_3'..) ◁ ω(r_2, r_3''..)
            let sign = if n % 2 == 1 { Scalar::one() } else { -Scalar::one() };
            for (a, b, c) in co.tensor_coproduct_of(&rr[2.min(rr.len())..]) {
                let mut m = vec![rr[0]];
                m.extend_from_slice(&a);
                let mut args = vec![e(rr[1])];
                args.extend(b.iter().map(|k| e(*k)));
                let w = self.eval(&om, &args);
                val.add_scaled(&r.act_vec(&r.mu_basis(&m), &w), &(sign.clone() * c));
            }
            for (o, c) in val.iter() {
                out.add_term(ri * d + o, c.clone());
            }
        }
        Ok(out)
    }

    /// `d^n` on the whole of `Hom(C^{⊗n}, C)`.
    pub fn full_differential(&self, n: usize) -> Result<Matrix> {
        let hom = self.hom_dim(n)?;
        let cols = (0..hom)
            .map(|k| self.differential_of(&SparseVec::unit(hom, k), n))
            .collect::<Result<Vec<_>>>()?;
        Ok(SparseMat::from_columns(self.hom_dim(n + 1)?, cols))
    }

    /// `d^n` between coderivation bases. Fails if an image is not a coderivation.
    pub fn differential(&self, n: usize) -> Result<CoderDifferential> {
        let source = self.coderivation_space(n)?.basis();
        let target = self.coderivation_space(n + 1)?.basis();
        let mut tb = TrackedBasis::new(self.hom_dim(n + 1)?);
        for v in &target {
            tb.push(v.clone());
        }
        let mut cols = Vec::with_capacity(source.len());
        for (k, v) in source.iter().enumerate() {
            let dv = self.differential_of(v, n)?;
            let coords = tb
                .coordinates(&dv)
                .ok_or_else(|| Error::ImageEscapes(format!("d^{n} of coderivation basis element {k}")))?;
            cols.push(coords);
        }
        Ok(CoderDifferential { n, source, target, matrix: SparseMat::from_columns(tb.len(), cols) })
    }

    /// A coderivation `ω` with `dω = 0`.
    pub fn is_special_cocycle(&self, omega: &Vector, n: usize) -> Result<bool> {
        Ok(self.is_coderivation(omega, n)? && self.differential_of(omega, n)?.is_zero())
    }

    /// `d^n∘d^{n−1} = 0` on coderivations, for `n ≥ 2`.
    pub fn d_squared_zero(&self, n: usize) -> Result<bool> {
        if n < 2 {
            return Ok(true);
        }
        let a = self.differential(n - 1)?;
        let b = self.differential(n)?;
        Ok(b.matrix.compose(&a.matrix).is_zero())
    }

    /// `dim Hⁿ = dim ker dⁿ − rank dⁿ⁻¹`.
    pub fn betti(&self, n: usize) -> Result<usize> {
        let dn = self.differential(n)?;
        let incoming = if n <= 1 { 0 } else { rank(&self.differential(n - 1)?.matrix) };
        if !self.d_squared_zero(n)? {
            return Err(Error::AxiomViolation(format!("d^{n}∘d^{} ≠ 0", n - 1)));
        }
        Ok(dn.source.len() - rank(&dn.matrix) - incoming)
    }

    /// Coderivation dims, ranks, `d∘d` and Betti numbers for `n = 1..=max_n`.
    pub fn report(&self, max_n: usize) -> Result<ComplexReport> {
        let mut diffs = Vec::new();
        for n in 1..=max_n {
            diffs.push(self.differential(n)?);
        }
        let mut dims: Vec<usize> = diffs.iter().map(|d| d.source.len()).collect();
        if let Some(last) = diffs.last() {
            dims.push(last.target.len());
        }
        let ranks: Vec<usize> = diffs.iter().map(|d| rank(&d.matrix)).collect();
        let mut dd = Vec::new();
        for w in diffs.windows(2) {
            dd.push(w[1].matrix.compose(&w[0].matrix).is_zero());
        }
        if let Some(k) = dd.iter().position(|ok| !ok) {
            return Err(Error::AxiomViolation(format!("d^{}∘d^{} ≠ 0", k + 2, k + 1)));
        }
        let betti = (0..diffs.len())
            .map(|k| dims[k] - ranks[k] - if k == 0 { 0 } else { ranks[k - 1] })
            .collect();
        Ok(ComplexReport { coderivation_dims: dims, ranks, d_squared_zero: dd, betti })
    }
}

/// `d^n` written in bases of `Coder^n` and `Coder^{n+1}`.
#[derive(Clone, Debug)]
pub struct CoderDifferential {
    pub n: usize,
    pub source: Vec<Vector>,
    pub target: Vec<Vector>,
    pub matrix: Matrix,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComplexReport {
    /// `dim Coder^n` for `n = 1..=max_n+1`
    pub coderivation_dims: Vec<usize>,
    /// `rank d^n` for `n = 1..=max_n`
    pub ranks: Vec<usize>,
    /// `d^{n}∘d^{n−1} = 0` for `n = 2..=max_n`
    pub d_squared_zero: Vec<bool>,
    /// `dim Hⁿ` for `n = 1..=max_n`
    pub betti: Vec<usize>,
}

/// The Loday differential of `Hom(𝔥^{⊗n}, 𝔥)` with adjoint coefficients.
pub fn loday_differential(l: &LeibnizAlgebra<Scalar>, n: usize) -> Result<Matrix> {
    let h = l.dim();
    let dom = power_dim(h, n + 1)?;
    let cod = power_dim(h, n + 2)?;
    let e = |k: usize| SparseVec::unit(h, k);
    let mut cols = Vec::with_capacity(dom);
    for k in 0..dom {
        let f = cochain_matrix(&SparseVec::unit(dom, k), h, n);
        let eval = |args: &[Vector]| {
            let mut t = SparseVec::from_pairs(1, [(0, Scalar::one())]);
            for a in args {
                t = t.tensor(a);
            }
            f.apply(&t)
        };
        let mut out = SparseVec::zero(cod);
        for (xi, x) in multi_indices(h, n + 1).enumerate() {
            let mut val = SparseVec::zero(h);
            for i in 1..=n {
                let sign = if i % 2 == 1 { Scalar::one() } else { -Scalar::one() };
                let rest: Vec<Vector> = (0..=n).filter(|m| *m != i - 1).map(|m| e(x[m])).collect();
                // [f(x_1..x̂_i..x_{n+1}), x_i]
                val.add_scaled(&l.bracket_vec(&eval(&rest), &e(x[i - 1])), &sign);
                // f(x_1, …, [x_k, x_i], …, x̂_i, …)
                for k in 1..i {
                    let mut args = rest.clone();
                    args[k - 1] = l.bracket(x[k - 1], x[i - 1]).clone();
                    val.add_scaled(&eval(&args), &-sign.clone());
                }
            }
            let sign = if n % 2 == 1 { Scalar::one() } else { -Scalar::one() };
            let tail: Vec<Vector> = x[1..].iter().map(|k| e(*k)).collect();
            val.add_scaled(&l.bracket_vec(&e(x[0]), &eval(&tail)), &sign);
            for (o, c) in val.iter() {
                out.add_term(xi * h + o, c.clone());
            }
        }
        cols.push(out);
    }
    Ok(SparseMat::from_columns(cod, cols))
}

/// Betti numbers of the Loday complex for `n = 1..=max_n`.
pub fn loday_betti(l: &LeibnizAlgebra<Scalar>, max_n: usize) -> Result<Vec<usize>> {
    let h = l.dim();
    let mut ranks = Vec::new();
    for n in 1..=max_n {
        ranks.push(rank(&loday_differential(l, n)?));
    }
    let mut out = Vec::new();
    for n in 1..=max_n {
        let dim = power_dim(h, n + 1)?;
        let incoming = if n == 1 { 0 } else { ranks[n - 2] };
        out.push(dim - ranks[n - 1] - incoming);
    }
    Ok(out)
}

/// Extension of `f: 𝔥^{⊗n} → 𝔥` by zero on every unit leg of `C = k1 ⊕ 𝔥`.
pub fn embed_leibniz(r: &RackBialgebra<Scalar>, f: &Vector, n: usize) -> Result<Vector> {
    let idx = r.reduced_indices();
    let (h, d) = (idx.len(), r.dim());
    let expected = power_dim(h, n + 1)?;
    if f.dim() != expected {
        return Err(Error::DimensionMismatch { expected, found: f.dim() });
    }
    let mut out = SparseVec::zero(power_dim(d, n + 1)?);
    for (k, c) in f.iter() {
        let (inp, o) = (k / h, k % h);
        let legs: Vec<usize> = unflatten(inp, h, n).into_iter().map(|a| idx[a]).collect();
        out.add_term(flatten(&legs, d) * d + idx[o], c.clone());
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EmbeddingReport {
    pub coderivations: Verdict,
    pub injective: bool,
    pub chain_map: Verdict,
}

impl EmbeddingReport {
    pub fn holds(&self) -> bool {
        self.coderivations.holds && self.injective && self.chain_map.holds
    }
}

/// Checks that extension by zero lands in coderivations, is injective and
/// satisfies `d_C(embed f) = embed(d_L f)` on a basis of `Hom(𝔥^{⊗n}, 𝔥)`.
pub fn check_embedding_chain_map(l: &LeibnizAlgebra<Scalar>, n: usize) -> Result<EmbeddingReport> {
    let r = from_leibniz(l)?;
    let cx = DeformationComplex::new(r.clone())?;
    let cond = cx.coderivation_condition(n)?;
    let dl = loday_differential(l, n)?;
    let dom = power_dim(l.dim(), n + 1)?;
    let mut coder = Verdict::new();
    let mut chain = Verdict::new();
    let mut images = Vec::with_capacity(dom);
    for k in 0..dom {
        let f = SparseVec::unit(dom, k);
        let w = embed_leibniz(&r, &f, n)?;
        coder.record(cond.apply(&w).is_zero(), || vec![format!("basis cochain {k}")]);
        let lhs = cx.differential_of(&w, n)?;
        let rhs = embed_leibniz(&r, &dl.apply(&f), n + 1)?;
        chain.record(lhs == rhs, || vec![format!("basis cochain {k}")]);
        images.push(w);
    }
    let injective = rank(&SparseMat::from_columns(cx.hom_dim(n)?, images)) == dom;
    Ok(EmbeddingReport { coderivations: coder, injective, chain_map: chain })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeformationReport {
    pub coassociativity: Verdict,
    pub counit: Verdict,
    pub unit: Verdict,
    pub rack: RackReport,
}

impl DeformationReport {
    pub fn all_hold(&self) -> bool {
        self.coassociativity.holds && self.counit.holds && self.unit.holds && self.rack.all_hold()
    }
}

/// `Δ_ε = Δ₀ + ε·δΔ` and `◁_ε = ◁₀ + ε·δ◁` over `k[ε]/(ε²)`.
pub fn deform(r0: &RackBialgebra<Scalar>, d_comul: &[Vector], d_rack: &[Vector]) -> Result<RackBialgebra<DualScalar>> {
    let d = r0.dim();
    if d_comul.len() != d {
        return Err(Error::DimensionMismatch { expected: d, found: d_comul.len() });
    }
    if d_rack.len() != d * d {
        return Err(Error::DimensionMismatch { expected: d * d, found: d_rack.len() });
    }
    if let Some(v) = d_comul.iter().find(|v| v.dim() != d * d) {
        return Err(Error::DimensionMismatch { expected: d * d, found: v.dim() });
    }
    if let Some(v) = d_rack.iter().find(|v| v.dim() != d) {
        return Err(Error::DimensionMismatch { expected: d, found: v.dim() });
    }
    let lift = |v: &Vector| v.map_ring(|c| DualScalar::new(Scalar::zero(), c.clone()));
    let base = r0.map_ring(DualScalar::from_scalar);
    let delta: Vec<_> = d_comul.iter().map(lift).collect();
    let co: FinCoalgebra<DualScalar> = base.coalgebra().perturbed(&delta)?;
    let rack = base.rack_entries().iter().zip(d_rack).map(|(a, b)| a.plus(&lift(b))).collect();
    RackBialgebra::new(co, rack)
}

/// Runs every rack bialgebra axiom on the first-order deformation.
pub fn first_order_deformation_check(
    r0: &RackBialgebra<Scalar>,
    d_comul: &[Vector],
    d_rack: &[Vector],
) -> Result<(RackBialgebra<DualScalar>, DeformationReport)> {
    let r = deform(r0, d_comul, d_rack)?;
    let co = r.coalgebra();
    let rep = DeformationReport {
        coassociativity: co.check_coassociative(),
        counit: co.check_counit(),
        unit: co.check_unit(),
        rack: r.check(),
    };
    Ok((r, rep))
}

/// `(Δ⊗id)Δ − (id⊗Δ)Δ` applied to `e_k`, the order-ε part of which a
/// perturbation must cancel.
pub fn coassociator<R: Ring>(c: &FinCoalgebra<R>, k: usize) -> SparseVec<R> {
    let dk = c.comul(k);
    c.comul_on_leg(dk, 2, 0).minus(&c.comul_on_leg(dk, 2, 1))
}
