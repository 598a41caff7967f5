//! Filtered, possibly truncated bialgebras and Hopf algebras over `Q`.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::coalgebra::FinCoalgebra;
use crate::error::{Error, Result};
use crate::linalg::{SparseMat, SparseVec, TrackedBasis};
use crate::rack::RackBialgebra;
use crate::report::Verdict;
use crate::scalar::{Ring, Scalar};

/// A bialgebra on a basis carrying filtration degrees, truncated at degree
/// `truncation`. Products of basis elements that would leave the truncation
/// are stored as `None`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilteredBialgebra {
    labels: Vec<String>,
    degrees: Vec<usize>,
    truncation: usize,
    unit: usize,
    counit: Vec<Scalar>,
    product: Vec<Option<SparseVec<Scalar>>>,
    coproduct: Option<Vec<SparseVec<Scalar>>>,
    antipode: Option<Vec<Option<SparseVec<Scalar>>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BialgebraReport {
    pub associativity: Verdict,
    pub unit: Verdict,
    pub counit_mult: Verdict,
    pub coassociativity: Verdict,
    pub counit: Verdict,
    pub comul_mult: Verdict,
    pub filtration: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub antipode: Option<Verdict>,
}

impl BialgebraReport {
    pub fn all_hold(&self) -> bool {
        [
            &self.associativity,
            &self.unit,
            &self.counit_mult,
            &self.coassociativity,
            &self.counit,
            &self.comul_mult,
            &self.filtration,
        ]
        .iter()
        .all(|v| v.holds)
            && self.antipode.as_ref().is_none_or(|v| v.holds)
    }
}

impl FilteredBialgebra {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        labels: Vec<String>,
        degrees: Vec<usize>,
        truncation: usize,
        unit: usize,
        counit: Vec<Scalar>,
        product: Vec<Option<SparseVec<Scalar>>>,
        coproduct: Option<Vec<SparseVec<Scalar>>>,
    ) -> Result<Self> {
        let n = labels.len();
        let mismatch = |expected, found| Err(Error::DimensionMismatch { expected, found });
        if degrees.len() != n {
            return mismatch(n, degrees.len());
        }
        if counit.len() != n {
            return mismatch(n, counit.len());
        }
        if product.len() != n * n {
            return mismatch(n * n, product.len());
        }
        if let Some(v) = product.iter().flatten().find(|v| v.dim() != n) {
            return mismatch(n, v.dim());
        }
        if let Some(cp) = &coproduct {
            if cp.len() != n {
                return mismatch(n, cp.len());
            }
            if let Some(v) = cp.iter().find(|v| v.dim() != n * n) {
                return mismatch(n * n, v.dim());
            }
        }
        if unit >= n {
            return Err(Error::InvalidStructure(format!("unit index {unit} out of range {n}")));
        }
        Ok(FilteredBialgebra { labels, degrees, truncation, unit, counit, product, coproduct, antipode: None })
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

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn degree(&self, i: usize) -> usize {
        self.degrees[i]
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn counit(&self) -> &[Scalar] {
        &self.counit
    }

    pub fn basis(&self, i: usize) -> SparseVec<Scalar> {
        SparseVec::unit(self.dim(), i)
    }

    pub fn one(&self) -> SparseVec<Scalar> {
        self.basis(self.unit)
    }

    /// Top filtration degree of `v` (0 for the zero vector).
    pub fn top_degree(&self, v: &SparseVec<Scalar>) -> usize {
        v.indices().map(|i| self.degrees[i]).max().unwrap_or(0)
    }

    /// Indices of basis elements of degree at most `k`.
    pub fn basis_up_to(&self, k: usize) -> Vec<usize> {
        (0..self.dim()).filter(|i| self.degrees[*i] <= k).collect()
    }

    pub fn has_coproduct(&self) -> bool {
        self.coproduct.is_some()
    }

    pub fn coproduct(&self, i: usize) -> Result<&SparseVec<Scalar>> {
        Ok(&self.coproduct.as_ref().ok_or(Error::CoproductUnavailable)?[i])
    }

    pub fn comul(&self, v: &SparseVec<Scalar>) -> Result<SparseVec<Scalar>> {
        let cp = self.coproduct.as_ref().ok_or(Error::CoproductUnavailable)?;
        let n = self.dim();
        let mut out = SparseVec::zero(n * n);
        for (i, c) in v.iter() {
            out.add_scaled(&cp[i], c);
        }
        Ok(out)
    }

    /// `Δ(e_k)` as `(i, j, c)` triples.
    pub fn coproduct_terms(&self, k: usize) -> Result<Vec<(usize, usize, Scalar)>> {
        let n = self.dim();
        Ok(self.coproduct(k)?.iter().map(|(f, c)| (f / n, f % n, c.clone())).collect())
    }

    pub fn apply_counit(&self, v: &SparseVec<Scalar>) -> Scalar {
        let mut acc = Scalar::zero();
        for (i, c) in v.iter() {
            acc += c.clone() * self.counit[i].clone();
        }
        acc
    }

    pub fn mul_basis(&self, a: usize, b: usize) -> Result<&SparseVec<Scalar>> {
        self.product[a * self.dim() + b].as_ref().ok_or(Error::TruncationOverflow {
            degree: self.degrees[a] + self.degrees[b],
            limit: self.truncation,
        })
    }

    pub fn mul(&self, u: &SparseVec<Scalar>, v: &SparseVec<Scalar>) -> Result<SparseVec<Scalar>> {
        let mut out = SparseVec::zero(self.dim());
        for (a, x) in u.iter() {
            for (b, y) in v.iter() {
                out.add_scaled(self.mul_basis(a, b)?, &(x.clone() * y.clone()));
            }
        }
        Ok(out)
    }

    pub fn mul_all(&self, factors: &[SparseVec<Scalar>]) -> Result<SparseVec<Scalar>> {
        let mut cur = self.one();
        for f in factors {
            cur = self.mul(&cur, f)?;
        }
        Ok(cur)
    }

    /// Product in `H⊗H`: `(a⊗b)(c⊗d) = ac⊗bd`.
    pub fn mul_tensor(&self, u: &SparseVec<Scalar>, v: &SparseVec<Scalar>) -> Result<SparseVec<Scalar>> {
        let n = self.dim();
        let mut out = SparseVec::zero(n * n);
        for (f, x) in u.iter() {
            for (g, y) in v.iter() {
                let l = self.mul_basis(f / n, g / n)?;
                let r = self.mul_basis(f % n, g % n)?;
                out.add_scaled(&l.tensor(r), &(x.clone() * y.clone()));
            }
        }
        Ok(out)
    }

    pub fn antipode(&self) -> Option<&[Option<SparseVec<Scalar>>]> {
        self.antipode.as_deref()
    }

    pub fn antipode_of(&self, i: usize) -> Result<&SparseVec<Scalar>> {
        self.antipode
            .as_ref()
            .and_then(|s| s[i].as_ref())
            .ok_or_else(|| Error::MissingAntipode(self.labels[i].clone()))
    }

    pub fn apply_antipode(&self, v: &SparseVec<Scalar>) -> Result<SparseVec<Scalar>> {
        let mut out = SparseVec::zero(self.dim());
        for (i, c) in v.iter() {
            out.add_scaled(self.antipode_of(i)?, c);
        }
        Ok(out)
    }

    pub fn with_antipode(mut self, antipode: Vec<Option<SparseVec<Scalar>>>) -> Result<Self> {
        if antipode.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: antipode.len() });
        }
        self.antipode = Some(antipode);
        Ok(self)
    }

    /// Solves `S(h₁)h₂ = ε(h)1` recursively, using that the coefficient of
    /// `h⊗1` in `Δh` is 1 when the counit is supported on the unit. Entries
    /// whose recursion overflows the truncation or runs into a cycle stay `None`.
    pub fn with_computed_antipode(self) -> Self {
        let n = self.dim();
        let supported = (0..n).all(|i| self.counit[i] == if i == self.unit { Scalar::one() } else { Scalar::zero() });
        let antipode = if supported && self.coproduct.is_some() {
            let mut memo: HashMap<usize, Option<SparseVec<Scalar>>> = HashMap::new();
            let mut visiting = vec![false; n];
            (0..n).map(|h| self.antipode_rec(h, &mut memo, &mut visiting)).collect()
        } else {
            vec![None; n]
        };
        FilteredBialgebra { antipode: Some(antipode), ..self }
    }

    fn antipode_rec(
        &self,
        h: usize,
        memo: &mut HashMap<usize, Option<SparseVec<Scalar>>>,
        visiting: &mut [bool],
    ) -> Option<SparseVec<Scalar>> {
        if let Some(s) = memo.get(&h) {
            return s.clone();
        }
        if visiting[h] {
            return None;
        }
        visiting[h] = true;
        let result = (|| {
            let mut s = self.one().scaled(&self.counit[h]);
            for (i, j, c) in self.coproduct_terms(h).ok()? {
                if j == self.unit {
                    if i != h {
                        return None;
                    }
                    if c != Scalar::one() {
                        return None;
                    }
                    continue;
                }
                let si = self.antipode_rec(i, memo, visiting)?;
                let t = self.mul(&si, &self.basis(j)).ok()?;
                s.add_scaled(&t, &-c);
            }
            Some(s)
        })();
        visiting[h] = false;
        memo.insert(h, result.clone());
        result
    }

    /// `a◁b = S(b₁) a b₂`
    pub fn adjoint_action(&self, a: &SparseVec<Scalar>, b: &SparseVec<Scalar>) -> Result<SparseVec<Scalar>> {
        let mut out = SparseVec::zero(self.dim());
        for (bi, c) in b.iter() {
            for (i, j, x) in self.coproduct_terms(bi)? {
                let t = self.mul(&self.mul(self.antipode_of(i)?, a)?, &self.basis(j))?;
                out.add_scaled(&t, &(c.clone() * x));
            }
        }
        Ok(out)
    }

    /// The underlying coalgebra, when the coproduct is available.
    pub fn coalgebra(&self) -> Result<FinCoalgebra<Scalar>> {
        let cp = self.coproduct.clone().ok_or(Error::CoproductUnavailable)?;
        FinCoalgebra::new(self.labels.clone(), cp, Some(self.counit.clone()), Some(self.unit))
    }

    pub fn is_cocommutative(&self) -> bool {
        self.coalgebra().is_ok_and(|c| c.is_cocommutative())
    }

    fn names(&self, idx: &[usize]) -> Vec<String> {
        idx.iter().map(|i| self.labels[*i].clone()).collect()
    }

    pub fn check_associativity(&self) -> Verdict {
        let n = self.dim();
        let mut v = Verdict::new();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let l = self.mul_basis(a, b).and_then(|ab| self.mul(ab, &self.basis(c)));
                    let r = self.mul_basis(b, c).and_then(|bc| self.mul(&self.basis(a), bc));
                    match (l, r) {
                        (Ok(l), Ok(r)) => v.record(l == r, || self.names(&[a, b, c])),
                        _ => v.skip(),
                    }
                }
            }
        }
        v
    }

    pub fn check_unit(&self) -> Verdict {
        let mut v = Verdict::new();
        for a in 0..self.dim() {
            let e = self.basis(a);
            let ok = self.mul_basis(self.unit, a).is_ok_and(|x| *x == e)
                && self.mul_basis(a, self.unit).is_ok_and(|x| *x == e);
            v.record(ok, || self.names(&[a]));
        }
        v
    }

    pub fn check_counit_mult(&self) -> Verdict {
        let n = self.dim();
        let mut v = Verdict::new();
        for a in 0..n {
            for b in 0..n {
                match self.mul_basis(a, b) {
                    Ok(ab) => v.record(
                        self.apply_counit(ab) == self.counit[a].clone() * self.counit[b].clone(),
                        || self.names(&[a, b]),
                    ),
                    Err(_) => v.skip(),
                }
            }
        }
        v
    }

    /// `Δ(ab) = Δ(a)Δ(b)` wherever every product involved is defined.
    pub fn check_comul_mult(&self) -> Verdict {
        let n = self.dim();
        let mut v = Verdict::new();
        if self.coproduct.is_none() {
            return Verdict::failed(vec!["<no coproduct>".into()]);
        }
        for a in 0..n {
            for b in 0..n {
                let lhs = self.mul_basis(a, b).and_then(|ab| self.comul(ab));
                let rhs = self
                    .coproduct(a)
                    .and_then(|da| self.coproduct(b).and_then(|db| self.mul_tensor(da, db)));
                match (lhs, rhs) {
                    (Ok(l), Ok(r)) => v.record(l == r, || self.names(&[a, b])),
                    _ => v.skip(),
                }
            }
        }
        v
    }

    /// `deg(ab) ≤ deg a + deg b` and `Δ(F_n) ⊆ F_n⊗F_n`.
    pub fn check_filtration(&self) -> Verdict {
        let n = self.dim();
        let mut v = Verdict::new();
        for a in 0..n {
            for b in 0..n {
                if let Ok(ab) = self.mul_basis(a, b) {
                    v.record(self.top_degree(ab) <= self.degrees[a] + self.degrees[b], || self.names(&[a, b]));
                }
            }
            if let Ok(terms) = self.coproduct_terms(a) {
                let ok = terms.iter().all(|(i, j, _)| self.degrees[*i].max(self.degrees[*j]) <= self.degrees[a]);
                v.record(ok, || self.names(&[a]));
            }
        }
        v
    }

    /// `S(h₁)h₂ = ε(h)1 = h₁S(h₂)` on basis elements with a defined antipode.
    pub fn check_antipode(&self) -> Option<Verdict> {
        let s = self.antipode.as_ref()?;
        let mut v = Verdict::new();
        for h in 0..self.dim() {
            if s[h].is_none() {
                v.skip();
                continue;
            }
            let eval = || -> Result<(SparseVec<Scalar>, SparseVec<Scalar>)> {
                let mut l = SparseVec::zero(self.dim());
                let mut r = SparseVec::zero(self.dim());
                for (i, j, c) in self.coproduct_terms(h)? {
                    l.add_scaled(&self.mul(self.antipode_of(i)?, &self.basis(j))?, &c);
                    r.add_scaled(&self.mul(&self.basis(i), self.antipode_of(j)?)?, &c);
                }
                Ok((l, r))
            };
            match eval() {
                Ok((l, r)) => {
                    let e = self.one().scaled(&self.counit[h]);
                    v.record(l == e && r == e, || self.names(&[h]));
                }
                Err(_) => v.skip(),
            }
        }
        Some(v)
    }

    pub fn check(&self) -> BialgebraReport {
        let (coassociativity, counit) = match self.coalgebra() {
            Ok(c) => (c.check_coassociative(), c.check_counit()),
            Err(_) => (Verdict::failed(vec!["<no coproduct>".into()]), Verdict::failed(vec!["<no coproduct>".into()])),
        };
        BialgebraReport {
            associativity: self.check_associativity(),
            unit: self.check_unit(),
            counit_mult: self.check_counit_mult(),
            coassociativity,
            counit,
            comul_mult: self.check_comul_mult(),
            filtration: self.check_filtration(),
            antipode: self.check_antipode(),
        }
    }

    /// Compact label for a linear combination, e.g. `X-2*YZ`.
    pub fn format_element(&self, v: &SparseVec<Scalar>) -> String {
        format_combination(&self.labels, v)
    }
}

/// Writes `v` as `a+2*b-c`; no commas or spaces.
pub fn format_combination(labels: &[String], v: &SparseVec<Scalar>) -> String {
    if v.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, c) in v.iter() {
        let neg = c.numerator().sign() == num_bigint::Sign::Minus;
        let abs = if neg { -c.clone() } else { c.clone() };
        if neg {
            out.push('-');
        } else if !out.is_empty() {
            out.push('+');
        }
        if abs != Scalar::one() {
            out.push_str(&format!("{abs}*"));
        }
        out.push_str(&labels[i]);
    }
    out
}

/// Group algebra of a finite group given by its multiplication table.
pub fn group_algebra(labels: Vec<String>, mult: &[Vec<usize>]) -> Result<FilteredBialgebra> {
    let n = labels.len();
    if mult.len() != n || mult.iter().any(|r| r.len() != n) {
        return Err(Error::NotAGroup(format!("table must be {n}×{n}")));
    }
    if mult.iter().flatten().any(|k| *k >= n) {
        return Err(Error::NotAGroup("table entry out of range".into()));
    }
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if mult[mult[a][b]][c] != mult[a][mult[b][c]] {
                    return Err(Error::NotAGroup(format!(
                        "associativity fails at ({}, {}, {})",
                        labels[a], labels[b], labels[c]
                    )));
                }
            }
        }
    }
    let e = (0..n)
        .find(|e| (0..n).all(|a| mult[*e][a] == a && mult[a][*e] == a))
        .ok_or_else(|| Error::NotAGroup("no identity element".into()))?;
    let mut inverse = Vec::with_capacity(n);
    for a in 0..n {
        let inv = (0..n)
            .find(|b| mult[a][*b] == e && mult[*b][a] == e)
            .ok_or_else(|| Error::NotAGroup(format!("{} has no inverse", labels[a])))?;
        inverse.push(inv);
    }
    let product = (0..n * n).map(|ab| Some(SparseVec::unit(n, mult[ab / n][ab % n]))).collect();
    let coproduct = (0..n).map(|g| SparseVec::unit(n * n, g * n + g)).collect();
    let h = FilteredBialgebra::new(labels, vec![0; n], 0, e, vec![Scalar::one(); n], product, Some(coproduct))?;
    let antipode = inverse.iter().map(|i| Some(SparseVec::unit(n, *i))).collect();
    h.with_antipode(antipode)
}

/// Multiplication table of `Z/n` on `0..n`.
pub fn cyclic_table(n: usize) -> Vec<Vec<usize>> {
    (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect()
}

pub fn cyclic_group_algebra(n: usize) -> Result<FilteredBialgebra> {
    let labels = (0..n).map(|k| if k == 0 { "e".to_string() } else { format!("g{k}") }).collect();
    group_algebra(labels, &cyclic_table(n))
}

/// Permutations of `{0,1,2}` in a fixed order with labels.
pub fn s3_elements() -> Vec<(&'static str, [usize; 3])> {
    vec![
        ("e", [0, 1, 2]),
        ("s01", [1, 0, 2]),
        ("s02", [2, 1, 0]),
        ("s12", [0, 2, 1]),
        ("r1", [1, 2, 0]),
        ("r2", [2, 0, 1]),
    ]
}

/// Multiplication table of `S₃`; `(pq)(i) = p(q(i))`.
pub fn s3_table() -> Vec<Vec<usize>> {
    let el = s3_elements();
    let compose = |p: &[usize; 3], q: &[usize; 3]| [p[q[0]], p[q[1]], p[q[2]]];
    el.iter()
        .map(|(_, p)| el.iter().map(|(_, q)| el.iter().position(|(_, r)| *r == compose(p, q)).expect("closed")).collect())
        .collect()
}

pub fn s3_group_algebra() -> Result<FilteredBialgebra> {
    group_algebra(s3_elements().iter().map(|(l, _)| l.to_string()).collect(), &s3_table())
}

type Monomial = Vec<u32>;

/// Polynomial bialgebra `k[vars]` truncated at total degree `degree`, with
/// the coproduct of each variable given as a list of `(left, right, c)`
/// monomial terms and extended multiplicatively.
pub fn polynomial_bialgebra(
    vars: &[&str],
    degree: usize,
    generator_coproducts: &[Vec<(Monomial, Monomial, Scalar)>],
) -> Result<FilteredBialgebra> {
    let nv = vars.len();
    if generator_coproducts.len() != nv {
        return Err(Error::DimensionMismatch { expected: nv, found: generator_coproducts.len() });
    }
    let mut monomials: Vec<Monomial> = vec![vec![0; nv]];
    for total in 1..=degree {
        let mut layer = Vec::new();
        exponent_vectors(nv, total as u32, &mut vec![], &mut layer);
        layer.sort_by(|a, b| b.cmp(a));
        monomials.extend(layer);
    }
    let index: HashMap<Monomial, usize> = monomials.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
    let n = monomials.len();
    let deg = |m: &Monomial| m.iter().sum::<u32>() as usize;
    let labels: Vec<String> = monomials.iter().map(|m| monomial_label(vars, m)).collect();
    let degrees: Vec<usize> = monomials.iter().map(deg).collect();
    let mut product = Vec::with_capacity(n * n);
    for a in &monomials {
        for b in &monomials {
            let m: Monomial = a.iter().zip(b).map(|(x, y)| x + y).collect();
            product.push(index.get(&m).map(|k| SparseVec::unit(n, *k)));
        }
    }
    let mut counit = vec![Scalar::zero(); n];
    counit[0] = Scalar::one();
    // Δ of each variable in H⊗H, as maps monomial pair -> coefficient
    type Tensor = BTreeMap<(Monomial, Monomial), Scalar>;
    let tensor_mul = |u: &Tensor, v: &Tensor| -> Tensor {
        let mut out: Tensor = BTreeMap::new();
        for ((a1, a2), x) in u {
            for ((b1, b2), y) in v {
                let l: Monomial = a1.iter().zip(b1).map(|(p, q)| p + q).collect();
                let r: Monomial = a2.iter().zip(b2).map(|(p, q)| p + q).collect();
                let e = out.entry((l, r)).or_insert_with(Scalar::zero);
                *e += x.clone() * y.clone();
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    };
    let gens: Vec<Tensor> = generator_coproducts
        .iter()
        .map(|terms| {
            let mut t: Tensor = BTreeMap::new();
            for (l, r, c) in terms {
                let e = t.entry((l.clone(), r.clone())).or_insert_with(Scalar::zero);
                *e += c.clone();
            }
            t
        })
        .collect();
    let mut coproduct = Vec::with_capacity(n);
    for m in &monomials {
        let mut acc: Tensor = BTreeMap::new();
        acc.insert((vec![0; nv], vec![0; nv]), Scalar::one());
        for (v, e) in m.iter().enumerate() {
            for _ in 0..*e {
                acc = tensor_mul(&acc, &gens[v]);
            }
        }
        let mut vec = SparseVec::zero(n * n);
        for ((l, r), c) in acc {
            let (Some(i), Some(j)) = (index.get(&l), index.get(&r)) else {
                return Err(Error::TruncationOverflow { degree: deg(&l).max(deg(&r)), limit: degree });
            };
            vec.add_term(i * n + j, c);
        }
        coproduct.push(vec);
    }
    let h = FilteredBialgebra::new(labels, degrees, degree, 0, counit, product, Some(coproduct))?;
    Ok(h.with_computed_antipode())
}

fn exponent_vectors(nv: usize, total: u32, prefix: &mut Vec<u32>, out: &mut Vec<Monomial>) {
    if prefix.len() + 1 == nv {
        let mut m = prefix.clone();
        m.push(total);
        out.push(m);
        return;
    }
    if nv == 0 {
        return;
    }
    for e in 0..=total {
        prefix.push(e);
        exponent_vectors(nv, total - e, prefix, out);
        prefix.pop();
    }
}

fn monomial_label(vars: &[&str], m: &[u32]) -> String {
    let mut s = String::new();
    for (v, e) in vars.iter().zip(m) {
        match e {
            0 => {}
            1 => s.push_str(v),
            e => s.push_str(&format!("{v}^{e}")),
        }
    }
    if s.is_empty() {
        "1".into()
    } else {
        s
    }
}

fn unit_monomial(nv: usize, k: usize) -> Monomial {
    let mut m = vec![0; nv];
    m[k] = 1;
    m
}

/// `k[vars]` with every variable primitive: the enveloping algebra of an abelian Lie algebra.
pub fn polynomial_primitive(vars: &[&str], degree: usize) -> Result<FilteredBialgebra> {
    let nv = vars.len();
    let zero = vec![0; nv];
    let gens: Vec<_> = (0..nv)
        .map(|k| vec![(zero.clone(), unit_monomial(nv, k), Scalar::one()), (unit_monomial(nv, k), zero.clone(), Scalar::one())])
        .collect();
    polynomial_bialgebra(vars, degree, &gens)
}

/// `k[X,Y,Z]` with `Δ(X) = 1⊗X + X⊗1 + Y⊗Z` and `Y, Z` primitive.
pub fn polynomial_hopf_k3(degree: usize) -> Result<FilteredBialgebra> {
    if degree == 0 {
        return Err(Error::InvalidStructure("degree must be at least 1".into()));
    }
    let m = |x, y, z| vec![x, y, z];
    let one = Scalar::one();
    let gens = vec![
        vec![(m(0, 0, 0), m(1, 0, 0), one.clone()), (m(1, 0, 0), m(0, 0, 0), one.clone()), (m(0, 1, 0), m(0, 0, 1), one.clone())],
        vec![(m(0, 0, 0), m(0, 1, 0), one.clone()), (m(0, 1, 0), m(0, 0, 0), one.clone())],
        vec![(m(0, 0, 0), m(0, 0, 1), one.clone()), (m(0, 0, 1), m(0, 0, 0), one)],
    ];
    polynomial_bialgebra(&["X", "Y", "Z"], degree, &gens)
}

/// A rack bialgebra obtained inside a Hopf algebra, with its inclusion.
#[derive(Clone, Debug)]
pub struct HopfRack {
    pub rack: RackBialgebra<Scalar>,
    /// Columns are the images of the basis of `C` in `H`.
    pub inclusion: SparseMat<Scalar>,
}

/// `C = k1 ⊕ W` where `W` is the closure of `seed ⊆ ker ε` under the adjoint
/// action, with `◁` the adjoint action.
pub fn rack_from_hopf(h: &FilteredBialgebra, seed: &[SparseVec<Scalar>]) -> Result<HopfRack> {
    let co = h.coalgebra()?;
    let cc = co.check_cocommutative();
    if let Some(w) = cc.counterexample {
        return Err(Error::NotCocommutative(w.join(",")));
    }
    let n = h.dim();
    for s in seed {
        if s.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, found: s.dim() });
        }
        if !h.apply_counit(s).is_zero() {
            return Err(Error::InvalidStructure(format!("seed element {} is not in ker ε", h.format_element(s))));
        }
    }
    // The degree ≤ 1 part generates H as an algebra for every carrier built here,
    // and the adjoint action is an action, so closing under it suffices.
    let generators = h.basis_up_to(1);
    let mut basis = TrackedBasis::new(n);
    basis.push(h.one());
    let mut queue = Vec::new();
    for s in seed {
        if let Some(i) = basis.push(s.clone()) {
            queue.push(i);
        }
    }
    while let Some(i) = queue.pop() {
        let v = basis.vectors()[i].clone();
        for &g in &generators {
            let w = h.adjoint_action(&v, &h.basis(g))?;
            if let Some(k) = basis.push(w) {
                if basis.len() > n {
                    return Err(Error::ResourceBound { what: "adjoint closure".into(), size: basis.len(), limit: n });
                }
                queue.push(k);
            }
        }
    }
    let vectors = basis.vectors().to_vec();
    let m = vectors.len();
    let coords = basis.coordinate_map();
    let incl = SparseMat::from_columns(n, vectors.clone());
    let mut labels = vec!["1".to_string()];
    labels.extend(vectors[1..].iter().map(|v| h.format_element(v)));
    let mut comul = Vec::with_capacity(m);
    let coords2 = coords.kron(&coords);
    let incl2 = incl.kron(&incl);
    for (k, v) in vectors.iter().enumerate() {
        let dv = h.comul(v)?;
        let c = coords2.apply(&dv);
        if incl2.apply(&c) != dv {
            return Err(Error::InvalidStructure(format!("Δ({}) leaves the closure", labels[k])));
        }
        comul.push(c);
    }
    let counit = vectors.iter().map(|v| h.apply_counit(v)).collect();
    let c = FinCoalgebra::new(labels.clone(), comul, Some(counit), Some(0))?;
    let mut rack = Vec::with_capacity(m * m);
    for a in &vectors {
        for b in &vectors {
            let ab = h.adjoint_action(a, b)?;
            let x = coords.apply(&ab);
            if incl.apply(&x) != ab {
                return Err(Error::InvalidStructure("adjoint action leaves the closure".into()));
            }
            rack.push(x);
        }
    }
    let rack = RackBialgebra::new(c, rack)?;
    let report = rack.check();
    if let Some((name, v)) = report.verdicts().into_iter().find(|(_, v)| !v.holds) {
        return Err(Error::AxiomViolation(format!("{name} at {:?}", v.counterexample)));
    }
    Ok(HopfRack { rack, inclusion: incl })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Scalar {
        Scalar::from_integer(n)
    }

    #[test]
    fn trivial_and_cyclic_group_algebras() {
        let k = cyclic_group_algebra(1).unwrap();
        assert_eq!(k.dim(), 1);
        assert_eq!(k.antipode_of(0).unwrap(), &k.one());
        assert!(k.check().all_hold());

        let z2 = cyclic_group_algebra(2).unwrap();
        for g in 0..2 {
            assert_eq!(z2.antipode_of(g).unwrap(), &z2.basis(g));
        }
        let rep = z2.check();
        assert!(rep.all_hold(), "{rep:?}");
        assert!(z2.is_cocommutative());
        // abelian: g◁h = g
        for g in 0..2 {
            for h in 0..2 {
                assert_eq!(z2.adjoint_action(&z2.basis(g), &z2.basis(h)).unwrap(), z2.basis(g));
            }
        }
    }

    #[test]
    fn s3_antipode_and_conjugation() {
        let h = s3_group_algebra().unwrap();
        assert_eq!(h.dim(), 6);
        let rep = h.check();
        assert!(rep.all_hold(), "{rep:?}");
        let t = s3_table();
        let inv = |b: usize| (0..6).find(|c| t[b][*c] == 0).unwrap();
        for g in 0..6 {
            assert_eq!(h.antipode_of(g).unwrap(), &h.basis(inv(g)));
            for k in 0..6 {
                let want = h.basis(t[t[inv(k)][g]][k]);
                assert_eq!(h.adjoint_action(&h.basis(g), &h.basis(k)).unwrap(), want);
                // ε(g◁h) = ε(g)ε(h)
                assert_eq!(h.apply_counit(&want), q(1));
            }
        }
    }

    #[test]
    fn cocommutative_exactly_when_abelian() {
        // group algebras are always cocommutative; the non-abelian one is not commutative
        let z2 = cyclic_group_algebra(2).unwrap();
        let s3 = s3_group_algebra().unwrap();
        assert!(z2.is_cocommutative() && s3.is_cocommutative());
        let commutative = |h: &FilteredBialgebra| {
            (0..h.dim()).all(|a| (0..h.dim()).all(|b| h.mul_basis(a, b).unwrap() == h.mul_basis(b, a).unwrap()))
        };
        assert!(commutative(&z2));
        assert!(!commutative(&s3));
    }

    #[test]
    fn non_group_tables_rejected() {
        let labels = vec!["a".to_string(), "b".to_string()];
        assert!(matches!(group_algebra(labels.clone(), &[vec![0, 0], vec![0, 0]]), Err(Error::NotAGroup(_))));
        assert!(matches!(group_algebra(labels, &[vec![0, 1], vec![1, 1]]), Err(Error::NotAGroup(_))));
    }

    #[test]
    fn polynomial_k3_structure() {
        let h = polynomial_hopf_k3(2).unwrap();
        assert_eq!(h.dim(), 10);
        let (x, y, z) = (h.index_of("X").unwrap(), h.index_of("Y").unwrap(), h.index_of("Z").unwrap());
        let one = h.unit();
        let n = h.dim();
        let dy = h.coproduct(y).unwrap();
        assert_eq!(dy, &SparseVec::from_pairs(n * n, [(one * n + y, q(1)), (y * n + one, q(1))]));
        assert_eq!(h.coproduct(x).unwrap().coeff(y * n + z), q(1));
        let yz = h.index_of("YZ").unwrap();
        let sx = SparseVec::from_pairs(n, [(x, q(-1)), (yz, q(1))]);
        assert_eq!(h.antipode_of(x).unwrap(), &sx);
        assert_eq!(h.antipode_of(y).unwrap(), &h.basis(y).scaled(&q(-1)));
        assert!(!h.is_cocommutative());
        let rep = h.check();
        assert!(rep.all_hold(), "{rep:?}");
    }

    #[test]
    fn polynomial_k3_coassociative_up_to_four() {
        for d in 1..=4 {
            let h = polynomial_hopf_k3(d).unwrap();
            let rep = h.check();
            assert!(rep.coassociativity.holds && rep.comul_mult.holds && rep.associativity.holds, "d={d}");
            assert!(rep.antipode.unwrap().holds);
        }
        // at degree 1, S(X) = −X + YZ does not fit
        let h = polynomial_hopf_k3(1).unwrap();
        assert!(matches!(h.antipode_of(h.index_of("X").unwrap()), Err(Error::MissingAntipode(_))));
    }

    #[test]
    fn filtration_of_k3() {
        let h = polynomial_hopf_k3(3).unwrap();
        assert!(h.check_filtration().holds);
        // Δ(X) has the Y⊗Z term whose leg degrees sum to 2 > deg X
        let n = h.dim();
        let (x, y, z) = (h.index_of("X").unwrap(), h.index_of("Y").unwrap(), h.index_of("Z").unwrap());
        assert!(h.coproduct(x).unwrap().get(y * n + z).is_some());
    }

    #[test]
    fn overflow_is_typed() {
        let h = polynomial_primitive(&["x"], 2).unwrap();
        let x = h.index_of("x").unwrap();
        let x2 = h.index_of("x^2").unwrap();
        assert!(matches!(h.mul_basis(x, x2), Err(Error::TruncationOverflow { degree: 3, limit: 2 })));
    }

    #[test]
    fn abelian_enveloping_adjoint_is_trivial() {
        let h = polynomial_primitive(&["x", "y"], 4).unwrap();
        let eps = h.counit().to_vec();
        for a in h.basis_up_to(2) {
            for b in h.basis_up_to(2) {
                let got = h.adjoint_action(&h.basis(a), &h.basis(b)).unwrap();
                assert_eq!(got, h.basis(a).scaled(&eps[b]));
            }
        }
    }

    #[test]
    fn hopf_rack_from_z2() {
        let h = cyclic_group_algebra(2).unwrap();
        let seed = SparseVec::from_pairs(2, [(1, q(1)), (0, q(-1))]);
        let hr = rack_from_hopf(&h, &[seed]).unwrap();
        assert_eq!(hr.rack.dim(), 2);
        assert!(hr.rack.check().all_hold());
        assert!(hr.rack.is_trivial());
        assert_eq!(hr.rack.label(1), "-e+g1");
    }

    #[test]
    fn hopf_rack_from_s3_transposition() {
        let h = s3_group_algebra().unwrap();
        let s = h.index_of("s01").unwrap();
        let seed = h.basis(s).minus(&h.one());
        let hr = rack_from_hopf(&h, &[seed]).unwrap();
        // conjugacy class of a transposition has three elements
        assert_eq!(hr.rack.dim(), 4);
        let class: Vec<usize> = ["s01", "s02", "s12"].iter().map(|l| h.index_of(l).unwrap()).collect();
        for &c in &class {
            let v = h.basis(c).minus(&h.one());
            let mut tb = TrackedBasis::new(h.dim());
            for col in hr.inclusion.columns() {
                tb.push(col.clone());
            }
            assert!(tb.contains(&v));
        }
        // on group-likes 1 + (τ−1) the product is conjugation
        let incl = &hr.inclusion;
        let r = &hr.rack;
        let t = s3_table();
        let inv = |b: usize| (0..6).find(|c| t[b][*c] == 0).unwrap();
        let grouplike = |k: usize| r.basis(0).plus(&r.basis(k));
        for a in 1..4 {
            for b in 1..4 {
                let prod = incl.apply(&r.act_vec(&grouplike(a), &grouplike(b)));
                let find = |v: SparseVec<Scalar>| (0..6).find(|g| v == h.basis(*g)).unwrap();
                let ga = find(incl.apply(&grouplike(a)));
                let gb = find(incl.apply(&grouplike(b)));
                assert_eq!(prod, h.basis(t[t[inv(gb)][ga]][gb]));
            }
        }
    }

    #[test]
    fn hopf_rack_from_line() {
        // F₂ ∩ ker ε of k[x]: span{x, x²}; carrier needs room for x²·x
        let h = polynomial_primitive(&["x"], 4).unwrap();
        let seed = vec![h.basis(h.index_of("x").unwrap()), h.basis(h.index_of("x^2").unwrap())];
        let hr = rack_from_hopf(&h, &seed).unwrap();
        assert_eq!(hr.rack.dim(), 3);
        assert!(hr.rack.is_trivial());
        assert_eq!(hr.rack.labels(), &["1".to_string(), "x".into(), "x^2".into()]);
    }

    #[test]
    fn hopf_rack_rejects_bad_input() {
        let h = polynomial_hopf_k3(3).unwrap();
        let seed = vec![h.basis(h.index_of("Y").unwrap())];
        assert!(matches!(rack_from_hopf(&h, &seed), Err(Error::NotCocommutative(_))));
        let z2 = cyclic_group_algebra(2).unwrap();
        assert!(matches!(rack_from_hopf(&z2, &[z2.basis(1)]), Err(Error::InvalidStructure(_))));
    }
}
