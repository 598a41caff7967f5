//! Finite-dimensional coalgebras given by structure constants.

use crate::error::{Error, Result};
use crate::linalg::{kernel, SparseMat, SparseVec, Subspace};
use crate::report::Verdict;
use crate::scalar::{Ring, Scalar};
use crate::tensor::{flatten, power_dim, unflatten};

/// A coalgebra on a labelled basis `e_0, …, e_{d-1}`.
///
/// `comul[k]` is `Δ(e_k)` flattened into `C⊗C` (index `i·d + j` for `e_i⊗e_j`).
/// The counit is absent for reduced coalgebras; `unit` marks the distinguished
/// group-like `1` of a coaugmented coalgebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinCoalgebra<R> {
    labels: Vec<String>,
    comul: Vec<SparseVec<R>>,
    counit: Option<Vec<R>>,
    unit: Option<usize>,
}

impl<R: Ring> FinCoalgebra<R> {
    pub fn new(
        labels: Vec<String>,
        comul: Vec<SparseVec<R>>,
        counit: Option<Vec<R>>,
        unit: Option<usize>,
    ) -> Result<Self> {
        let d = labels.len();
        if comul.len() != d {
            return Err(Error::DimensionMismatch { expected: d, found: comul.len() });
        }
        for v in &comul {
            if v.dim() != d * d {
                return Err(Error::DimensionMismatch { expected: d * d, found: v.dim() });
            }
        }
        if let Some(eps) = &counit {
            if eps.len() != d {
                return Err(Error::DimensionMismatch { expected: d, found: eps.len() });
            }
        }
        if let Some(u) = unit {
            if u >= d {
                return Err(Error::InvalidStructure(format!("unit index {u} out of range {d}")));
            }
        }
        let mut seen = std::collections::BTreeSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(Error::InvalidStructure(format!("duplicate basis label {l:?}")));
            }
        }
        Ok(FinCoalgebra { labels, comul, counit, unit })
    }

    /// Builds a coalgebra from `(left, right, coefficient)` triples per basis element.
    pub fn from_terms(
        labels: Vec<String>,
        terms: Vec<Vec<(usize, usize, R)>>,
        counit: Option<Vec<R>>,
        unit: Option<usize>,
    ) -> Result<Self> {
        let d = labels.len();
        let mut comul = Vec::with_capacity(terms.len());
        for t in terms {
            let mut v = SparseVec::zero(d * d);
            for (i, j, c) in t {
                if i >= d || j >= d {
                    return Err(Error::InvalidStructure(format!("coproduct term ({i},{j}) out of range")));
                }
                v.add_term(i * d + j, c);
            }
            comul.push(v);
        }
        FinCoalgebra::new(labels, comul, counit, unit)
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn unit(&self) -> Option<usize> {
        self.unit
    }

    pub fn require_unit(&self) -> Result<usize> {
        self.unit.ok_or(Error::MissingUnit)
    }

    pub fn counit(&self) -> Option<&[R]> {
        self.counit.as_deref()
    }

    pub fn require_counit(&self) -> Result<&[R]> {
        self.counit.as_deref().ok_or(Error::MissingCounit)
    }

    pub fn comul(&self, k: usize) -> &SparseVec<R> {
        &self.comul[k]
    }

    /// `Δ(e_k)` as `(i, j, c)` triples.
    pub fn terms(&self, k: usize) -> impl Iterator<Item = (usize, usize, &R)> + '_ {
        let d = self.dim();
        self.comul[k].iter().map(move |(f, c)| (f / d, f % d, c))
    }

    pub fn basis(&self, i: usize) -> SparseVec<R> {
        SparseVec::unit(self.dim(), i)
    }

    pub fn apply_counit(&self, v: &SparseVec<R>) -> Result<R> {
        let eps = self.require_counit()?;
        let mut acc = R::zero();
        for (i, c) in v.iter() {
            acc += c.clone() * eps[i].clone();
        }
        Ok(acc)
    }

    pub fn apply_comul(&self, v: &SparseVec<R>) -> SparseVec<R> {
        let mut out = SparseVec::zero(self.dim() * self.dim());
        for (i, c) in v.iter() {
            out.add_scaled(&self.comul[i], c);
        }
        out
    }

    pub fn comul_matrix(&self) -> SparseMat<R> {
        SparseMat::from_columns(self.dim() * self.dim(), self.comul.clone())
    }

    pub fn counit_matrix(&self) -> Result<SparseMat<R>> {
        let eps = self.require_counit()?;
        Ok(SparseMat::from_columns(1, eps.iter().map(|e| SparseVec::from_pairs(1, [(0, e.clone())])).collect()))
    }

    /// Applies `Δ` to the leg `leg` of an element of `C^{⊗n}`, producing an element of `C^{⊗(n+1)}`.
    pub fn comul_on_leg(&self, v: &SparseVec<R>, n: usize, leg: usize) -> SparseVec<R> {
        let d = self.dim();
        let out_dim = d.pow(n as u32 + 1);
        let mut out = SparseVec::zero(out_dim);
        for (f, c) in v.iter() {
            let idx = unflatten(f, d, n);
            for (i, j, x) in self.terms(idx[leg]) {
                let mut nidx = Vec::with_capacity(n + 1);
                nidx.extend_from_slice(&idx[..leg]);
                nidx.push(i);
                nidx.push(j);
                nidx.extend_from_slice(&idx[leg + 1..]);
                out.add_term(flatten(&nidx, d), c.clone() * x.clone());
            }
        }
        out
    }

    /// Applies `ε` to leg `leg` of an element of `C^{⊗n}`.
    pub fn counit_on_leg(&self, v: &SparseVec<R>, n: usize, leg: usize) -> Result<SparseVec<R>> {
        let eps = self.require_counit()?;
        let d = self.dim();
        let mut out = SparseVec::zero(d.pow(n as u32 - 1));
        for (f, c) in v.iter() {
            let mut idx = unflatten(f, d, n);
            let e = idx.remove(leg);
            out.add_term(flatten(&idx, d), c.clone() * eps[e].clone());
        }
        Ok(out)
    }

    /// `(Δ⊗id)Δ = (id⊗Δ)Δ`, checked on every basis element.
    pub fn check_coassociative(&self) -> Verdict {
        let mut v = Verdict::new();
        for k in 0..self.dim() {
            let left = self.comul_on_leg(&self.comul[k], 2, 0);
            let right = self.comul_on_leg(&self.comul[k], 2, 1);
            v.record(left == right, || vec![self.labels[k].clone()]);
        }
        v
    }

    /// `(ε⊗id)Δ = id = (id⊗ε)Δ`; fails outright when there is no counit.
    pub fn check_counit(&self) -> Verdict {
        if self.counit.is_none() {
            return Verdict::failed(vec!["<no counit>".into()]);
        }
        let mut v = Verdict::new();
        for k in 0..self.dim() {
            let e = self.basis(k);
            let l = self.counit_on_leg(&self.comul[k], 2, 0).expect("counit present");
            let r = self.counit_on_leg(&self.comul[k], 2, 1).expect("counit present");
            v.record(l == e && r == e, || vec![self.labels[k].clone()]);
        }
        v
    }

    pub fn check_cocommutative(&self) -> Verdict {
        let d = self.dim();
        let mut v = Verdict::new();
        for k in 0..d {
            let flipped = self.comul[k].reindex(d * d, |f| Some((f % d) * d + f / d));
            v.record(flipped == self.comul[k], || vec![self.labels[k].clone()]);
        }
        v
    }

    pub fn is_cocommutative(&self) -> bool {
        self.check_cocommutative().holds
    }

    /// `Δ(1) = 1⊗1` and `ε(1) = 1` for the declared unit.
    pub fn check_unit(&self) -> Verdict {
        let Some(u) = self.unit else {
            return Verdict::failed(vec!["<no unit>".into()]);
        };
        let mut v = Verdict::new();
        let d = self.dim();
        let ok = self.comul[u] == SparseVec::unit(d * d, u * d + u)
            && self.counit.as_ref().is_some_and(|e| e[u] == R::one());
        v.record(ok, || vec![self.labels[u].clone()]);
        v
    }

    /// `(ε⊗ε)Δ = ε`
    pub fn check_counit_squared(&self) -> Verdict {
        let mut v = Verdict::new();
        let Some(eps) = &self.counit else {
            return Verdict::failed(vec!["<no counit>".into()]);
        };
        for k in 0..self.dim() {
            let mut acc = R::zero();
            for (i, j, c) in self.terms(k) {
                acc += c.clone() * eps[i].clone() * eps[j].clone();
            }
            v.record(acc == eps[k], || vec![self.labels[k].clone()]);
        }
        v
    }

    /// Coassociativity, counit law and (if declared) the unit conditions.
    pub fn check_all(&self) -> Verdict {
        let mut v = self.check_coassociative();
        v.merge(self.check_counit());
        if self.unit.is_some() {
            v.merge(self.check_unit());
        }
        v
    }

    /// The reduced coalgebra on `ker ε` with `Δ̌(c) = Δc − 1⊗c − c⊗1`.
    ///
    /// The basis is `ě_i = e_i − ε(e_i)·1` for `i ≠ unit`, keeping the labels.
    pub fn reduce(&self) -> Result<FinCoalgebra<R>> {
        let u = self.require_unit()?;
        self.require_counit()?;
        let d = self.dim();
        let keep: Vec<usize> = (0..d).filter(|i| *i != u).collect();
        let pos = |i: usize| keep.iter().position(|k| *k == i);
        let m = keep.len();
        let mut comul = Vec::with_capacity(m);
        for &k in &keep {
            // Δ(ě_k) − 1⊗ě_k − ě_k⊗1, expressed in the basis {ě_i} ∪ {1}; the ě⊗ě
            // coefficients coincide with the e⊗e coefficients of Δ(e_k) for non-unit legs.
            let v = self.comul[k].reindex(m * m, |f| {
                let (i, j) = (f / d, f % d);
                Some(pos(i)? * m + pos(j)?)
            });
            comul.push(v);
        }
        FinCoalgebra::new(keep.iter().map(|i| self.labels[*i].clone()).collect(), comul, None, None)
    }

    /// Adjoins a group-like unit labelled `1`: `Δ̂x = Δx + 1⊗x + x⊗1`, `ε̂ = 0` on the old basis.
    pub fn counitise(&self) -> Result<FinCoalgebra<R>> {
        self.counitise_with_label("1")
    }

    pub fn counitise_with_label(&self, unit_label: &str) -> Result<FinCoalgebra<R>> {
        if self.index_of(unit_label).is_some() {
            return Err(Error::InvalidStructure(format!("label {unit_label:?} already in use")));
        }
        let d = self.dim();
        let n = d + 1;
        let mut labels = Vec::with_capacity(n);
        labels.push(unit_label.to_string());
        labels.extend(self.labels.iter().cloned());
        let mut comul = vec![SparseVec::unit(n * n, 0)];
        for k in 0..d {
            let mut v = self.comul[k].reindex(n * n, |f| Some((f / d + 1) * n + f % d + 1));
            v.add_term(k + 1, R::one());
            v.add_term((k + 1) * n, R::one());
            comul.push(v);
        }
        let mut counit = vec![R::zero(); n];
        counit[0] = R::one();
        FinCoalgebra::new(labels, comul, Some(counit), Some(0))
    }

    /// `Δ^{(n)}: C → C^{⊗n}`, left-nested; `n = 0` is the counit.
    pub fn iterated_coproduct_of(&self, v: &SparseVec<R>, n: usize) -> Result<SparseVec<R>> {
        power_dim(self.dim(), n)?;
        if n == 0 {
            return Ok(SparseVec::from_pairs(1, [(0, self.apply_counit(v)?)]));
        }
        let mut cur = v.clone();
        for m in 1..n {
            cur = self.comul_on_leg(&cur, m, 0);
        }
        Ok(cur)
    }

    pub fn iterated_coproduct(&self, n: usize) -> Result<SparseMat<R>> {
        if n == 0 {
            return self.counit_matrix();
        }
        let rows = power_dim(self.dim(), n)?;
        let cols = (0..self.dim())
            .map(|k| self.iterated_coproduct_of(&self.basis(k), n))
            .collect::<Result<Vec<_>>>()?;
        Ok(SparseMat::from_columns(rows, cols))
    }

    /// Coproduct of the tensor-power coalgebra on a basis tensor, with legs
    /// ordered as all first Sweedler legs followed by all second ones.
    pub fn tensor_coproduct_of(&self, index: &[usize]) -> Vec<(Vec<usize>, Vec<usize>, R)> {
        let mut acc: Vec<(Vec<usize>, Vec<usize>, R)> = vec![(Vec::new(), Vec::new(), R::one())];
        for &k in index {
            let mut next = Vec::new();
            for (a, b, c) in &acc {
                for (i, j, x) in self.terms(k) {
                    let mut a2 = a.clone();
                    a2.push(i);
                    let mut b2 = b.clone();
                    b2.push(j);
                    next.push((a2, b2, c.clone() * x.clone()));
                }
            }
            acc = next;
        }
        acc
    }

    pub fn tensor_coproduct(&self, n: usize) -> Result<SparseMat<R>> {
        let d = self.dim();
        let dom = power_dim(d, n)?;
        let cod = power_dim(d, 2 * n)?;
        let mut cols = Vec::with_capacity(dom);
        for f in 0..dom {
            let idx = unflatten(f, d, n);
            let dn = dom;
            cols.push(SparseVec::from_pairs(
                cod,
                self.tensor_coproduct_of(&idx)
                    .into_iter()
                    .map(|(a, b, c)| (flatten(&a, d) * dn + flatten(&b, d), c)),
            ));
        }
        Ok(SparseMat::from_columns(cod, cols))
    }

    /// Basis indices `i` with `Δe_i = e_i⊗e_i` and `ε(e_i) = 1`.
    pub fn group_like_basis(&self) -> Vec<usize> {
        (0..self.dim()).filter(|i| self.is_group_like(&self.basis(*i))).collect()
    }

    pub fn is_group_like(&self, v: &SparseVec<R>) -> bool {
        let Some(_) = &self.counit else { return false };
        !v.is_zero()
            && self.apply_counit(v).is_ok_and(|e| e == R::one())
            && self.apply_comul(v) == v.tensor(v)
    }

    pub fn is_primitive(&self, v: &SparseVec<R>) -> Result<bool> {
        let u = self.require_unit()?;
        let one = self.basis(u);
        let expected = one.tensor(v).plus(&v.tensor(&one));
        Ok(self.apply_comul(v) == expected)
    }

    pub fn map_ring<S: Ring>(&self, f: impl Fn(&R) -> S) -> FinCoalgebra<S> {
        FinCoalgebra {
            labels: self.labels.clone(),
            comul: self.comul.iter().map(|v| v.map_ring(&f)).collect(),
            counit: self.counit.as_ref().map(|e| e.iter().map(&f).collect()),
            unit: self.unit,
        }
    }

    /// Replaces `Δ(e_k)` by `Δ(e_k) + δ_k` for every `k`.
    pub fn perturbed(&self, delta: &[SparseVec<R>]) -> Result<FinCoalgebra<R>> {
        if delta.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: delta.len() });
        }
        let comul = self.comul.iter().zip(delta).map(|(a, b)| a.plus(b)).collect();
        FinCoalgebra::new(self.labels.clone(), comul, self.counit.clone(), self.unit)
    }

    /// Formats a vector of `C^{⊗n}` as a sum of labelled tensors.
    pub fn format_tensor(&self, v: &SparseVec<R>, n: usize) -> String {
        format_tensor(&self.labels, v, n)
    }
}

pub fn format_tensor<R: Ring>(labels: &[String], v: &SparseVec<R>, n: usize) -> String {
    if v.is_zero() {
        return "0".into();
    }
    let d = labels.len();
    let terms: Vec<String> = v
        .iter()
        .map(|(f, c)| {
            let idx = unflatten(f, d, n);
            let t = idx.iter().map(|i| labels[*i].as_str()).collect::<Vec<_>>().join("⊗");
            if *c == R::one() {
                t
            } else {
                format!("({c}){t}")
            }
        })
        .collect();
    terms.join(" + ")
}

impl FinCoalgebra<Scalar> {
    /// Primitive elements: the kernel of `x ↦ Δx − 1⊗x − x⊗1`.
    pub fn primitives(&self) -> Result<Subspace<Scalar>> {
        let u = self.require_unit()?;
        let d = self.dim();
        let one = self.basis(u);
        let cols = (0..d)
            .map(|k| {
                let e = self.basis(k);
                self.comul[k].minus(&one.tensor(&e)).minus(&e.tensor(&one))
            })
            .collect();
        Ok(kernel(&SparseMat::from_columns(d * d, cols)))
    }
}
