//! Sparse exact linear algebra: vectors, matrices, row reduction and subspaces.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::scalar::{Field, Ring, Scalar};

/// Sparse vector. Stored entries are never zero and indices are kept sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseVec<R> {
    dim: usize,
    entries: BTreeMap<usize, R>,
}

impl<R: Ring> SparseVec<R> {
    pub fn zero(dim: usize) -> Self {
        SparseVec { dim, entries: BTreeMap::new() }
    }

    pub fn unit(dim: usize, index: usize) -> Self {
        assert!(index < dim, "basis index {index} out of range {dim}");
        let mut entries = BTreeMap::new();
        entries.insert(index, R::one());
        SparseVec { dim, entries }
    }

    /// Builds a vector from `(index, coefficient)` pairs, summing repeats.
    pub fn from_pairs(dim: usize, pairs: impl IntoIterator<Item = (usize, R)>) -> Self {
        let mut v = SparseVec::zero(dim);
        for (i, c) in pairs {
            v.add_term(i, c);
        }
        v
    }

    pub fn from_dense(values: &[R]) -> Self {
        SparseVec::from_pairs(values.len(), values.iter().cloned().enumerate())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, index: usize) -> Option<&R> {
        self.entries.get(&index)
    }

    pub fn coeff(&self, index: usize) -> R {
        self.entries.get(&index).cloned().unwrap_or_else(R::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &R)> + '_ {
        self.entries.iter().map(|(i, c)| (*i, c))
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries.keys().copied()
    }

    pub fn first(&self) -> Option<(usize, &R)> {
        self.entries.iter().next().map(|(i, c)| (*i, c))
    }

    pub fn add_term(&mut self, index: usize, c: R) {
        assert!(index < self.dim, "index {index} out of range {}", self.dim);
        if c.is_zero() {
            return;
        }
        match self.entries.get_mut(&index) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.entries.remove(&index);
                }
            }
            None => {
                self.entries.insert(index, c);
            }
        }
    }

    /// `self += c * other`
    pub fn add_scaled(&mut self, other: &SparseVec<R>, c: &R) {
        assert_eq!(self.dim, other.dim, "dimension mismatch in add_scaled");
        if c.is_zero() {
            return;
        }
        for (i, x) in other.iter() {
            self.add_term(i, c.clone() * x.clone());
        }
    }

    pub fn scaled(&self, c: &R) -> SparseVec<R> {
        if c.is_zero() {
            return SparseVec::zero(self.dim);
        }
        SparseVec::from_pairs(self.dim, self.iter().map(|(i, x)| (i, c.clone() * x.clone())))
    }

    pub fn plus(&self, other: &SparseVec<R>) -> SparseVec<R> {
        let mut out = self.clone();
        out.add_scaled(other, &R::one());
        out
    }

    pub fn minus(&self, other: &SparseVec<R>) -> SparseVec<R> {
        let mut out = self.clone();
        out.add_scaled(other, &-R::one());
        out
    }

    pub fn to_dense(&self) -> Vec<R> {
        let mut out = vec![R::zero(); self.dim];
        for (i, c) in self.iter() {
            out[i] = c.clone();
        }
        out
    }

    pub fn map_ring<S: Ring>(&self, f: impl Fn(&R) -> S) -> SparseVec<S> {
        SparseVec::from_pairs(self.dim, self.iter().map(|(i, c)| (i, f(c))))
    }

    /// Reindexes into a space of dimension `dim`; entries mapped to `None` are dropped.
    pub fn reindex(&self, dim: usize, f: impl Fn(usize) -> Option<usize>) -> SparseVec<R> {
        SparseVec::from_pairs(dim, self.iter().filter_map(|(i, c)| f(i).map(|j| (j, c.clone()))))
    }

    /// Tensor product with big-endian flattening `(i, j) ↦ i·dim(other) + j`.
    pub fn tensor(&self, other: &SparseVec<R>) -> SparseVec<R> {
        let mut out = SparseVec::zero(self.dim * other.dim);
        for (i, a) in self.iter() {
            for (j, b) in other.iter() {
                out.add_term(i * other.dim + j, a.clone() * b.clone());
            }
        }
        out
    }
}

impl<R: Ring> SparseVec<R> {
    pub fn dot(&self, other: &SparseVec<R>) -> R {
        let mut acc = R::zero();
        for (i, a) in self.iter() {
            if let Some(b) = other.get(i) {
                acc += a.clone() * b.clone();
            }
        }
        acc
    }
}

/// Sparse matrix stored by columns: column `j` is the image of basis vector `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMat<R> {
    rows: usize,
    columns: Vec<SparseVec<R>>,
}

impl<R: Ring> SparseMat<R> {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseMat { rows, columns: vec![SparseVec::zero(rows); cols] }
    }

    pub fn identity(n: usize) -> Self {
        SparseMat { rows: n, columns: (0..n).map(|i| SparseVec::unit(n, i)).collect() }
    }

    pub fn from_columns(rows: usize, columns: Vec<SparseVec<R>>) -> Self {
        for c in &columns {
            assert_eq!(c.dim(), rows, "column dimension mismatch");
        }
        SparseMat { rows, columns }
    }

    pub fn from_rows(cols: usize, rows: &[SparseVec<R>]) -> Self {
        let mut m = SparseMat::zero(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(row.dim(), cols, "row dimension mismatch");
            for (c, x) in row.iter() {
                m.columns[c].add_term(r, x.clone());
            }
        }
        m
    }

    pub fn from_dense(rows: &[Vec<R>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let rows: Vec<_> = rows.iter().map(|r| SparseVec::from_dense(r)).collect();
        SparseMat::from_rows(cols, &rows)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, j: usize) -> &SparseVec<R> {
        &self.columns[j]
    }

    pub fn columns(&self) -> &[SparseVec<R>] {
        &self.columns
    }

    pub fn get(&self, row: usize, col: usize) -> R {
        self.columns[col].coeff(row)
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(SparseVec::is_zero)
    }

    pub fn apply(&self, v: &SparseVec<R>) -> SparseVec<R> {
        assert_eq!(v.dim(), self.cols(), "matrix/vector dimension mismatch");
        let mut out = SparseVec::zero(self.rows);
        for (j, c) in v.iter() {
            out.add_scaled(&self.columns[j], c);
        }
        out
    }

    /// `self ∘ other`
    pub fn compose(&self, other: &SparseMat<R>) -> SparseMat<R> {
        assert_eq!(self.cols(), other.rows, "composition dimension mismatch");
        SparseMat { rows: self.rows, columns: other.columns.iter().map(|c| self.apply(c)).collect() }
    }

    pub fn plus(&self, other: &SparseMat<R>) -> SparseMat<R> {
        assert_eq!((self.rows, self.cols()), (other.rows, other.cols()));
        SparseMat {
            rows: self.rows,
            columns: self.columns.iter().zip(&other.columns).map(|(a, b)| a.plus(b)).collect(),
        }
    }

    pub fn minus(&self, other: &SparseMat<R>) -> SparseMat<R> {
        assert_eq!((self.rows, self.cols()), (other.rows, other.cols()));
        SparseMat {
            rows: self.rows,
            columns: self.columns.iter().zip(&other.columns).map(|(a, b)| a.minus(b)).collect(),
        }
    }

    pub fn scaled(&self, c: &R) -> SparseMat<R> {
        SparseMat { rows: self.rows, columns: self.columns.iter().map(|v| v.scaled(c)).collect() }
    }

    /// Kronecker product matching [`SparseVec::tensor`].
    pub fn kron(&self, other: &SparseMat<R>) -> SparseMat<R> {
        let mut columns = Vec::with_capacity(self.cols() * other.cols());
        for a in &self.columns {
            for b in &other.columns {
                columns.push(a.tensor(b));
            }
        }
        SparseMat { rows: self.rows * other.rows, columns }
    }

    pub fn transpose(&self) -> SparseMat<R> {
        let mut t = SparseMat::zero(self.cols(), self.rows);
        for (j, col) in self.columns.iter().enumerate() {
            for (i, x) in col.iter() {
                t.columns[i].add_term(j, x.clone());
            }
        }
        t
    }

    pub fn row_vectors(&self) -> Vec<SparseVec<R>> {
        self.transpose().columns
    }

    pub fn map_ring<S: Ring>(&self, f: impl Fn(&R) -> S) -> SparseMat<S> {
        SparseMat { rows: self.rows, columns: self.columns.iter().map(|c| c.map_ring(&f)).collect() }
    }
}

/// Reduced row echelon form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref<F> {
    /// Same shape as the input; zero rows at the bottom.
    pub matrix: SparseMat<F>,
    pub pivots: Vec<usize>,
    pub rank: usize,
}

pub fn rref<F: Field>(m: &SparseMat<F>) -> Rref<F> {
    let mut space = Subspace::new(m.cols());
    for row in m.row_vectors() {
        space.insert(row);
    }
    let pivots = space.pivots();
    let rank = pivots.len();
    let mut rows: Vec<SparseVec<F>> = space.basis();
    rows.resize(m.rows().max(rank), SparseVec::zero(m.cols()));
    Rref { matrix: SparseMat::from_rows(m.cols(), &rows), pivots, rank }
}

/// Row reduction for matrices over an arbitrary ring; fails unless the ring is a field.
pub fn rref_checked<R: Ring>(m: &SparseMat<R>) -> Result<Rref<Scalar>> {
    let mut columns = Vec::with_capacity(m.cols());
    for c in m.columns() {
        let mut v = SparseVec::zero(m.rows());
        for (i, x) in c.iter() {
            v.add_term(i, x.to_field().ok_or(Error::NotAField)?);
        }
        columns.push(v);
    }
    Ok(rref(&SparseMat::from_columns(m.rows(), columns)))
}

pub fn rank<F: Field>(m: &SparseMat<F>) -> usize {
    rref(m).rank
}

/// A subspace kept as fully reduced echelon rows keyed by pivot column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace<F> {
    ambient: usize,
    rows: BTreeMap<usize, SparseVec<F>>,
}

impl<F: Field> Subspace<F> {
    pub fn new(ambient: usize) -> Self {
        Subspace { ambient, rows: BTreeMap::new() }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace::spanned_by(ambient, (0..ambient).map(|i| SparseVec::unit(ambient, i)))
            .expect("unit vectors have the ambient dimension")
    }

    pub fn spanned_by(
        ambient: usize,
        generators: impl IntoIterator<Item = SparseVec<F>>,
    ) -> Result<Self> {
        let mut s = Subspace::new(ambient);
        for g in generators {
            if g.dim() != ambient {
                return Err(Error::DimensionMismatch { expected: ambient, found: g.dim() });
            }
            s.insert(g);
        }
        Ok(s)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows.keys().copied().collect()
    }

    pub fn is_pivot(&self, index: usize) -> bool {
        self.rows.contains_key(&index)
    }

    pub fn basis(&self) -> Vec<SparseVec<F>> {
        self.rows.values().cloned().collect()
    }

    pub fn rows(&self) -> impl Iterator<Item = (usize, &SparseVec<F>)> + '_ {
        self.rows.iter().map(|(p, r)| (*p, r))
    }

    /// Remainder of `v` modulo the subspace; zero at every pivot column, so it
    /// is a canonical representative of the coset `v + self`.
    pub fn reduce(&self, v: &SparseVec<F>) -> SparseVec<F> {
        assert_eq!(v.dim(), self.ambient, "subspace dimension mismatch");
        let mut out = v.clone();
        let hits: Vec<usize> = v.indices().filter(|i| self.rows.contains_key(i)).collect();
        for p in hits {
            if let Some(c) = out.get(p).cloned() {
                out.add_scaled(&self.rows[&p], &-c);
            }
        }
        out
    }

    pub fn contains(&self, v: &SparseVec<F>) -> bool {
        self.reduce(v).is_zero()
    }

    /// Adds a vector; returns `true` if the dimension grew.
    pub fn insert(&mut self, v: SparseVec<F>) -> bool {
        let r = self.reduce(&v);
        let Some((pivot, lead)) = r.first() else {
            return false;
        };
        let inv = lead.inverse().expect("pivot is nonzero");
        let r = r.scaled(&inv);
        for row in self.rows.values_mut() {
            if let Some(c) = row.get(pivot).cloned() {
                row.add_scaled(&r, &-c);
            }
        }
        self.rows.insert(pivot, r);
        true
    }

    /// Adds many vectors at once. Rows are kept in echelon form while
    /// inserting and fully reduced once at the end, which avoids touching
    /// every stored row on each insertion.
    pub fn extend(&mut self, vs: impl IntoIterator<Item = SparseVec<F>>) {
        for v in vs {
            assert_eq!(v.dim(), self.ambient, "subspace dimension mismatch");
            let mut out = v;
            let mut from = 0;
            loop {
                let hit = out
                    .entries
                    .range(from..)
                    .find(|(i, _)| self.rows.contains_key(i))
                    .map(|(i, c)| (*i, c.clone()));
                let Some((p, c)) = hit else { break };
                out.add_scaled(&self.rows[&p], &-c);
                from = p + 1;
            }
            if let Some((pivot, lead)) = out.first() {
                let inv = lead.inverse().expect("pivot is nonzero");
                let r = out.scaled(&inv);
                self.rows.insert(pivot, r);
            }
        }
        let pivots: Vec<usize> = self.rows.keys().rev().copied().collect();
        for p in pivots {
            let mut row = self.rows.remove(&p).expect("pivot row");
            let hits: Vec<(usize, F)> = row
                .entries
                .range(p + 1..)
                .filter(|(i, _)| self.rows.contains_key(i))
                .map(|(i, c)| (*i, c.clone()))
                .collect();
            for (q, c) in hits {
                row.add_scaled(&self.rows[&q], &-c);
            }
            self.rows.insert(p, row);
        }
    }

    pub fn sum(&self, other: &Subspace<F>) -> Result<Subspace<F>> {
        self.check_same_ambient(other)?;
        let mut s = self.clone();
        for r in other.rows.values() {
            s.insert(r.clone());
        }
        Ok(s)
    }

    /// Intersection via the kernel of the concatenated generator matrix `[A | -B]`.
    pub fn intersection(&self, other: &Subspace<F>) -> Result<Subspace<F>> {
        self.check_same_ambient(other)?;
        let a = self.basis();
        let b = other.basis();
        let mut columns = a.clone();
        columns.extend(b.iter().map(|v| v.scaled(&-F::one())));
        let m = SparseMat::from_columns(self.ambient, columns);
        let k = kernel(&m);
        let mut out = Subspace::new(self.ambient);
        for coeffs in k.basis() {
            let mut v = SparseVec::zero(self.ambient);
            for (i, c) in coeffs.iter() {
                if i < a.len() {
                    v.add_scaled(&a[i], c);
                }
            }
            out.insert(v);
        }
        Ok(out)
    }

    pub fn is_subspace_of(&self, other: &Subspace<F>) -> bool {
        self.ambient == other.ambient && self.rows.values().all(|r| other.contains(r))
    }

    fn check_same_ambient(&self, other: &Subspace<F>) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch { expected: self.ambient, found: other.ambient });
        }
        Ok(())
    }
}

/// Kernel of `m` as a subspace of its domain.
pub fn kernel<F: Field>(m: &SparseMat<F>) -> Subspace<F> {
    let n = m.cols();
    let mut space = Subspace::new(n);
    for row in m.row_vectors() {
        space.insert(row);
    }
    let mut k = Subspace::new(n);
    for free in (0..n).filter(|c| !space.is_pivot(*c)) {
        let mut v = SparseVec::unit(n, free);
        for (p, row) in space.rows() {
            if let Some(c) = row.get(free) {
                v.add_term(p, -c.clone());
            }
        }
        k.insert(v);
    }
    k
}

/// Image of `m` as a subspace of its codomain.
pub fn image<F: Field>(m: &SparseMat<F>) -> Subspace<F> {
    Subspace::spanned_by(m.rows(), m.columns().iter().cloned())
        .expect("columns have the codomain dimension")
}

/// Basis that remembers how each echelon row combines the vectors pushed so
/// far, so that coordinates of members can be read off.
#[derive(Clone, Debug)]
pub struct TrackedBasis<F> {
    ambient: usize,
    vectors: Vec<SparseVec<F>>,
    // pivot -> (echelon row, combination of `vectors`)
    rows: BTreeMap<usize, (SparseVec<F>, BTreeMap<usize, F>)>,
}

impl<F: Field> TrackedBasis<F> {
    pub fn new(ambient: usize) -> Self {
        TrackedBasis { ambient, vectors: Vec::new(), rows: BTreeMap::new() }
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[SparseVec<F>] {
        &self.vectors
    }

    fn reduce_tracked(&self, v: &SparseVec<F>) -> (SparseVec<F>, BTreeMap<usize, F>) {
        let mut rem = v.clone();
        let mut comb: BTreeMap<usize, F> = BTreeMap::new();
        let hits: Vec<usize> = v.indices().filter(|i| self.rows.contains_key(i)).collect();
        for p in hits {
            let Some(c) = rem.get(p).cloned() else { continue };
            let (row, rc) = &self.rows[&p];
            rem.add_scaled(row, &-c.clone());
            for (k, x) in rc {
                let e = comb.entry(*k).or_insert_with(F::zero);
                *e += c.clone() * x.clone();
            }
        }
        comb.retain(|_, x| !x.is_zero());
        (rem, comb)
    }

    /// Pushes `v` if it is independent of the vectors so far; returns its index.
    pub fn push(&mut self, v: SparseVec<F>) -> Option<usize> {
        assert_eq!(v.dim(), self.ambient, "basis dimension mismatch");
        let (rem, comb) = self.reduce_tracked(&v);
        let (pivot, lead) = rem.first().map(|(p, c)| (p, c.clone()))?;
        let idx = self.vectors.len();
        self.vectors.push(v);
        // rem = v - Σ comb·vectors
        let mut rc: BTreeMap<usize, F> = comb.into_iter().map(|(k, x)| (k, -x)).collect();
        rc.insert(idx, F::one());
        let inv = lead.inverse().expect("pivot is nonzero");
        let row = rem.scaled(&inv);
        let rc: BTreeMap<usize, F> = rc.into_iter().map(|(k, x)| (k, x * inv.clone())).collect();
        for (other, oc) in self.rows.values_mut() {
            if let Some(c) = other.get(pivot).cloned() {
                other.add_scaled(&row, &-c.clone());
                for (k, x) in &rc {
                    let e = oc.entry(*k).or_insert_with(F::zero);
                    *e -= c.clone() * x.clone();
                }
                oc.retain(|_, x| !x.is_zero());
            }
        }
        self.rows.insert(pivot, (row, rc));
        Some(idx)
    }

    /// Coordinates of `v` with respect to the pushed vectors, if `v` is in their span.
    pub fn coordinates(&self, v: &SparseVec<F>) -> Option<SparseVec<F>> {
        let (rem, comb) = self.reduce_tracked(v);
        if !rem.is_zero() {
            return None;
        }
        Some(SparseVec::from_pairs(self.vectors.len(), comb))
    }

    pub fn contains(&self, v: &SparseVec<F>) -> bool {
        self.reduce_tracked(v).0.is_zero()
    }
    /// A left inverse of the pushed vectors: a map `ambient → k^len` sending
    /// each pushed vector to its unit vector. Outside the span it is arbitrary.
    pub fn coordinate_map(&self) -> SparseMat<F> {
        let m = self.vectors.len();
        let mut cols = vec![SparseVec::zero(m); self.ambient];
        for (p, (_, comb)) in &self.rows {
            cols[*p] = SparseVec::from_pairs(m, comb.iter().map(|(k, x)| (*k, x.clone())));
        }
        SparseMat::from_columns(m, cols)
    }
}
