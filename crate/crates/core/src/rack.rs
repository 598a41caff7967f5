//! Rack bialgebras by structure constants and Leibniz algebras.

use serde::Serialize;

use crate::coalgebra::FinCoalgebra;
use crate::error::{Error, Result};
use crate::linalg::{SparseMat, SparseVec};
use crate::report::Verdict;
use crate::scalar::Ring;
use crate::tensor::unflatten;

/// A coaugmented coalgebra with a rack product `◁`.
///
/// `rack[a·d + b]` holds `e_a ◁ e_b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RackBialgebra<R> {
    coalgebra: FinCoalgebra<R>,
    rack: Vec<SparseVec<R>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RackReport {
    pub selfdist: Verdict,
    pub morphism: Verdict,
    pub counit_mult: Verdict,
    pub unit_right: Verdict,
    pub unit_left: Verdict,
}

impl RackReport {
    pub fn all_hold(&self) -> bool {
        self.verdicts().iter().all(|(_, v)| v.holds)
    }

    pub fn verdicts(&self) -> [(&'static str, &Verdict); 5] {
        [
            ("selfdist", &self.selfdist),
            ("morphism", &self.morphism),
            ("counit_mult", &self.counit_mult),
            ("unit_right", &self.unit_right),
            ("unit_left", &self.unit_left),
        ]
    }
}

impl<R: Ring> RackBialgebra<R> {
    pub fn new(coalgebra: FinCoalgebra<R>, rack: Vec<SparseVec<R>>) -> Result<Self> {
        coalgebra.require_unit()?;
        coalgebra.require_counit()?;
        let d = coalgebra.dim();
        if rack.len() != d * d {
            return Err(Error::DimensionMismatch { expected: d * d, found: rack.len() });
        }
        for v in &rack {
            if v.dim() != d {
                return Err(Error::DimensionMismatch { expected: d, found: v.dim() });
            }
        }
        Ok(RackBialgebra { coalgebra, rack })
    }

    /// Builds the product from a function on basis pairs.
    pub fn from_fn(
        coalgebra: FinCoalgebra<R>,
        f: impl Fn(usize, usize) -> SparseVec<R>,
    ) -> Result<Self> {
        let d = coalgebra.dim();
        let rack = (0..d * d).map(|ab| f(ab / d, ab % d)).collect();
        RackBialgebra::new(coalgebra, rack)
    }

    pub fn coalgebra(&self) -> &FinCoalgebra<R> {
        &self.coalgebra
    }

    pub fn dim(&self) -> usize {
        self.coalgebra.dim()
    }

    pub fn labels(&self) -> &[String] {
        self.coalgebra.labels()
    }

    pub fn label(&self, i: usize) -> &str {
        self.coalgebra.label(i)
    }

    pub fn unit(&self) -> usize {
        self.coalgebra.unit().expect("rack bialgebras carry a unit")
    }

    pub fn counit(&self) -> &[R] {
        self.coalgebra.counit().expect("rack bialgebras carry a counit")
    }

    pub fn basis(&self, i: usize) -> SparseVec<R> {
        self.coalgebra.basis(i)
    }

    /// `e_a ◁ e_b`
    pub fn act(&self, a: usize, b: usize) -> &SparseVec<R> {
        &self.rack[a * self.dim() + b]
    }

    pub fn rack_entries(&self) -> &[SparseVec<R>] {
        &self.rack
    }

    pub fn act_vec(&self, u: &SparseVec<R>, v: &SparseVec<R>) -> SparseVec<R> {
        let mut out = SparseVec::zero(self.dim());
        for (a, x) in u.iter() {
            for (b, y) in v.iter() {
                out.add_scaled(self.act(a, b), &(x.clone() * y.clone()));
            }
        }
        out
    }

    /// `μ` on an element of `C⊗C`.
    pub fn act_tensor(&self, w: &SparseVec<R>) -> SparseVec<R> {
        let d = self.dim();
        let mut out = SparseVec::zero(d);
        for (f, c) in w.iter() {
            out.add_scaled(self.act(f / d, f % d), c);
        }
        out
    }

    /// `μⁿ(v_1, …, v_n) = (…(v_1◁v_2)◁…)◁v_n`
    pub fn mu(&self, args: &[SparseVec<R>]) -> SparseVec<R> {
        let mut cur = args[0].clone();
        for v in &args[1..] {
            cur = self.act_vec(&cur, v);
        }
        cur
    }

    /// `μⁿ` on a basis tensor.
    pub fn mu_basis(&self, index: &[usize]) -> SparseVec<R> {
        let mut cur = self.basis(index[0]);
        for &b in &index[1..] {
            let mut next = SparseVec::zero(self.dim());
            for (a, x) in cur.iter() {
                next.add_scaled(self.act(a, b), x);
            }
            cur = next;
        }
        cur
    }

    pub fn rack_matrix(&self) -> SparseMat<R> {
        SparseMat::from_columns(self.dim(), self.rack.clone())
    }

    fn names(&self, idx: &[usize]) -> Vec<String> {
        idx.iter().map(|i| self.label(*i).to_string()).collect()
    }

    /// `(x◁y)◁z = (x◁z₁)◁(y◁z₂)` on basis triples.
    pub fn check_selfdist(&self) -> Verdict {
        let d = self.dim();
        let co = &self.coalgebra;
        let mut v = Verdict::new();
        for x in 0..d {
            for y in 0..d {
                let xy = self.act(x, y);
                for z in 0..d {
                    let lhs = self.act_vec(xy, &self.basis(z));
                    let mut rhs = SparseVec::zero(d);
                    for (z1, z2, c) in co.terms(z) {
                        let t = self.act_vec(self.act(x, z1), self.act(y, z2));
                        rhs.add_scaled(&t, c);
                    }
                    v.record(lhs == rhs, || self.names(&[x, y, z]));
                }
            }
        }
        v
    }

    /// `Δ(x◁y) = (x₁◁y₁)⊗(x₂◁y₂)` on basis pairs.
    pub fn check_morphism(&self) -> Verdict {
        let d = self.dim();
        let co = &self.coalgebra;
        let mut v = Verdict::new();
        for x in 0..d {
            for y in 0..d {
                let lhs = co.apply_comul(self.act(x, y));
                let mut rhs = SparseVec::zero(d * d);
                for (x1, x2, a) in co.terms(x) {
                    for (y1, y2, b) in co.terms(y) {
                        let t = self.act(x1, y1).tensor(self.act(x2, y2));
                        rhs.add_scaled(&t, &(a.clone() * b.clone()));
                    }
                }
                v.record(lhs == rhs, || self.names(&[x, y]));
            }
        }
        v
    }

    /// `ε(x◁y) = ε(x)ε(y)`
    pub fn check_counit_mult(&self) -> Verdict {
        let d = self.dim();
        let eps = self.counit();
        let mut v = Verdict::new();
        for x in 0..d {
            for y in 0..d {
                let lhs = self.coalgebra.apply_counit(self.act(x, y)).expect("counit present");
                v.record(lhs == eps[x].clone() * eps[y].clone(), || self.names(&[x, y]));
            }
        }
        v
    }

    /// `x◁1 = x`
    pub fn check_unit_right(&self) -> Verdict {
        let u = self.unit();
        let mut v = Verdict::new();
        for x in 0..self.dim() {
            v.record(self.act(x, u) == &self.basis(x), || self.names(&[x, u]));
        }
        v
    }

    /// `1◁x = ε(x)1`
    pub fn check_unit_left(&self) -> Verdict {
        let u = self.unit();
        let eps = self.counit();
        let mut v = Verdict::new();
        for x in 0..self.dim() {
            v.record(self.act(u, x) == &self.basis(u).scaled(&eps[x]), || self.names(&[u, x]));
        }
        v
    }

    pub fn check(&self) -> RackReport {
        RackReport {
            selfdist: self.check_selfdist(),
            morphism: self.check_morphism(),
            counit_mult: self.check_counit_mult(),
            unit_right: self.check_unit_right(),
            unit_left: self.check_unit_left(),
        }
    }

    /// `τ(x⊗y) = y₁⊗(x◁y₂)` as a matrix on `C⊗C`.
    pub fn braiding(&self) -> SparseMat<R> {
        let d = self.dim();
        let mut cols = Vec::with_capacity(d * d);
        for x in 0..d {
            for y in 0..d {
                let mut col = SparseVec::zero(d * d);
                for (y1, y2, c) in self.coalgebra.terms(y) {
                    col.add_scaled(&self.basis(y1).tensor(self.act(x, y2)), c);
                }
                cols.push(col);
            }
        }
        SparseMat::from_columns(d * d, cols)
    }

    /// `(τ⊗id)(id⊗τ)(τ⊗id) = (id⊗τ)(τ⊗id)(id⊗τ)` on basis triples.
    pub fn check_braid_relation(&self) -> Verdict {
        let d = self.dim();
        let tau = self.braiding();
        let id = SparseMat::identity(d);
        let t12 = tau.kron(&id);
        let t23 = id.kron(&tau);
        let mut v = Verdict::new();
        for f in 0..d * d * d {
            let e = SparseVec::unit(d * d * d, f);
            let lhs = t12.apply(&t23.apply(&t12.apply(&e)));
            let rhs = t23.apply(&t12.apply(&t23.apply(&e)));
            v.record(lhs == rhs, || self.names(&unflatten(f, d, 3)));
        }
        v
    }

    /// True when `◁` vanishes on `Č⊗Č`, i.e. `a◁b = ε(b)a`.
    pub fn is_trivial(&self) -> bool {
        let d = self.dim();
        let eps = self.counit();
        (0..d).all(|a| (0..d).all(|b| self.act(a, b) == &self.basis(a).scaled(&eps[b])))
    }

    /// Returns a copy with `e_a ◁ e_b` replaced.
    pub fn with_product(&self, a: usize, b: usize, value: SparseVec<R>) -> Result<Self> {
        let mut rack = self.rack.clone();
        rack[a * self.dim() + b] = value;
        RackBialgebra::new(self.coalgebra.clone(), rack)
    }

    pub fn with_coalgebra(&self, coalgebra: FinCoalgebra<R>) -> Result<Self> {
        RackBialgebra::new(coalgebra, self.rack.clone())
    }

    pub fn map_ring<S: Ring>(&self, f: impl Fn(&R) -> S) -> RackBialgebra<S> {
        RackBialgebra {
            coalgebra: self.coalgebra.map_ring(&f),
            rack: self.rack.iter().map(|v| v.map_ring(&f)).collect(),
        }
    }

    /// Indices of the basis of `Č`, i.e. every index except the unit.
    pub fn reduced_indices(&self) -> Vec<usize> {
        let u = self.unit();
        (0..self.dim()).filter(|i| *i != u).collect()
    }

    /// Basis vector `ě_i = e_i − ε(e_i)1` of `Č` inside `C`.
    pub fn reduced_basis(&self, i: usize) -> SparseVec<R> {
        let mut v = self.basis(i);
        v.add_term(self.unit(), -self.counit()[i].clone());
        v
    }
}

/// `a◁b = ε(b)a` on a coaugmented coalgebra.
pub fn trivial_rack<R: Ring>(coalgebra: FinCoalgebra<R>) -> Result<RackBialgebra<R>> {
    let eps = coalgebra.require_counit()?.to_vec();
    let d = coalgebra.dim();
    RackBialgebra::from_fn(coalgebra, |a, b| SparseVec::unit(d, a).scaled(&eps[b]))
}

/// Group-like basis `1, g_0, …` with `g_a ◁ g_b = g_{table[a][b]}` for rack
/// elements. Entries of `table` index the full basis, so `0` means the unit.
pub fn from_group_likes<R: Ring>(names: &[String], table: &[Vec<usize>]) -> Result<RackBialgebra<R>> {
    let n = names.len();
    let d = n + 1;
    if table.len() != n || table.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidStructure(format!("rack table must be {n}×{n}")));
    }
    if table.iter().flatten().any(|k| *k >= d) {
        return Err(Error::InvalidStructure("rack table entry out of range".into()));
    }
    let mut labels = vec!["1".to_string()];
    labels.extend(names.iter().cloned());
    let terms = (0..d).map(|k| vec![(k, k, R::one())]).collect();
    let co = FinCoalgebra::from_terms(labels, terms, Some(vec![R::one(); d]), Some(0))?;
    RackBialgebra::from_fn(co, |a, b| match (a, b) {
        (a, 0) => SparseVec::unit(d, a),
        (0, _) => SparseVec::unit(d, 0),
        (a, b) => SparseVec::unit(d, table[a - 1][b - 1]),
    })
}

/// Linearised counitisation of a set-theoretic shelf given by its
/// composition table on `0..n`.
pub fn from_pointed_rack<R: Ring>(names: &[String], table: &[Vec<usize>]) -> Result<RackBialgebra<R>> {
    let n = names.len();
    if table.len() != n || table.iter().any(|r| r.len() != n) || table.iter().flatten().any(|k| *k >= n) {
        return Err(Error::InvalidStructure(format!("rack table must be {n}×{n} with entries below {n}")));
    }
    if let Some((a, b, c)) = set_selfdist_failure(table) {
        return Err(Error::NotSelfDistributive(names[a].clone(), names[b].clone(), names[c].clone()));
    }
    let shifted: Vec<Vec<usize>> = table.iter().map(|r| r.iter().map(|k| k + 1).collect()).collect();
    from_group_likes(names, &shifted)
}

/// First triple violating `(a◁b)◁c = (a◁c)◁(b◁c)`.
pub fn set_selfdist_failure(table: &[Vec<usize>]) -> Option<(usize, usize, usize)> {
    let n = table.len();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if table[table[a][b]][c] != table[table[a][c]][table[b][c]] {
                    return Some((a, b, c));
                }
            }
        }
    }
    None
}

/// Conjugation rack `a◁b = b⁻¹ab` of a group given by its multiplication table.
pub fn conjugation_table(mult: &[Vec<usize>], identity: usize) -> Vec<Vec<usize>> {
    let n = mult.len();
    let inv = |b: usize| (0..n).find(|c| mult[b][*c] == identity).expect("group element has an inverse");
    (0..n).map(|a| (0..n).map(|b| mult[mult[inv(b)][a]][b]).collect()).collect()
}

/// `[e_a, e_b] = Σ c e_k` as `(a, b, [(k, c)])`.
pub type BracketEntry<R> = (usize, usize, Vec<(usize, R)>);

/// A Leibniz algebra on a labelled basis; `bracket[a·d + b] = [e_a, e_b]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeibnizAlgebra<R> {
    labels: Vec<String>,
    bracket: Vec<SparseVec<R>>,
}

impl<R: Ring> LeibnizAlgebra<R> {
    pub fn new(labels: Vec<String>, bracket: Vec<SparseVec<R>>) -> Result<Self> {
        let d = labels.len();
        if bracket.len() != d * d {
            return Err(Error::DimensionMismatch { expected: d * d, found: bracket.len() });
        }
        if let Some(v) = bracket.iter().find(|v| v.dim() != d) {
            return Err(Error::DimensionMismatch { expected: d, found: v.dim() });
        }
        Ok(LeibnizAlgebra { labels, bracket })
    }

    /// From `(a, b, [(k, c)])` entries; unlisted brackets are zero.
    pub fn from_entries(labels: Vec<String>, entries: &[BracketEntry<R>]) -> Result<Self> {
        let d = labels.len();
        let mut bracket = vec![SparseVec::zero(d); d * d];
        for (a, b, v) in entries {
            if *a >= d || *b >= d || v.iter().any(|(k, _)| *k >= d) {
                return Err(Error::InvalidStructure("bracket entry out of range".into()));
            }
            bracket[a * d + b] = SparseVec::from_pairs(d, v.iter().cloned());
        }
        LeibnizAlgebra::new(labels, bracket)
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn bracket(&self, a: usize, b: usize) -> &SparseVec<R> {
        &self.bracket[a * self.dim() + b]
    }

    pub fn bracket_vec(&self, u: &SparseVec<R>, v: &SparseVec<R>) -> SparseVec<R> {
        let mut out = SparseVec::zero(self.dim());
        for (a, x) in u.iter() {
            for (b, y) in v.iter() {
                out.add_scaled(self.bracket(a, b), &(x.clone() * y.clone()));
            }
        }
        out
    }

    /// `[[x,y],z] = [[x,z],y] + [x,[y,z]]` on basis triples.
    pub fn check_right_leibniz(&self) -> Verdict {
        let d = self.dim();
        let mut v = Verdict::new();
        for x in 0..d {
            for y in 0..d {
                for z in 0..d {
                    let e = |i| SparseVec::unit(d, i);
                    let lhs = self.bracket_vec(self.bracket(x, y), &e(z));
                    let rhs = self
                        .bracket_vec(self.bracket(x, z), &e(y))
                        .plus(&self.bracket_vec(&e(x), self.bracket(y, z)));
                    v.record(lhs == rhs, || {
                        [x, y, z].iter().map(|i| self.labels[*i].clone()).collect()
                    });
                }
            }
        }
        v
    }

    pub fn is_lie(&self) -> bool {
        let d = self.dim();
        (0..d).all(|a| (0..d).all(|b| self.bracket(a, b).plus(self.bracket(b, a)).is_zero()))
    }

    /// Matrix of the bracket `𝔥⊗𝔥 → 𝔥`.
    pub fn bracket_matrix(&self) -> SparseMat<R> {
        SparseMat::from_columns(self.dim(), self.bracket.clone())
    }

    pub fn map_ring<S: Ring>(&self, f: impl Fn(&R) -> S) -> LeibnizAlgebra<S> {
        LeibnizAlgebra {
            labels: self.labels.clone(),
            bracket: self.bracket.iter().map(|v| v.map_ring(&f)).collect(),
        }
    }
}

/// `C = k1 ⊕ 𝔥` with `𝔥` primitive, `x◁y = [x,y]`, `x◁1 = x`, `1◁x = ε(x)1`.
pub fn from_leibniz<R: Ring>(l: &LeibnizAlgebra<R>) -> Result<RackBialgebra<R>> {
    let check = l.check_right_leibniz();
    if let Some(w) = check.counterexample {
        return Err(Error::NotLeibniz(w[0].clone(), w[1].clone(), w[2].clone()));
    }
    let n = l.dim();
    let d = n + 1;
    let mut labels = vec!["1".to_string()];
    labels.extend(l.labels().iter().cloned());
    let mut terms = vec![vec![(0, 0, R::one())]];
    for k in 1..d {
        terms.push(vec![(0, k, R::one()), (k, 0, R::one())]);
    }
    let mut eps = vec![R::zero(); d];
    eps[0] = R::one();
    let co = FinCoalgebra::from_terms(labels, terms, Some(eps), Some(0))?;
    RackBialgebra::from_fn(co, |a, b| match (a, b) {
        (a, 0) => SparseVec::unit(d, a),
        (0, _) => SparseVec::zero(d),
        (a, b) => l.bracket(a - 1, b - 1).reindex(d, |k| Some(k + 1)),
    })
}

/// Reads the bracket back off a rack bialgebra whose reduced part is primitive.
pub fn leibniz_of<R: Ring>(r: &RackBialgebra<R>) -> Result<LeibnizAlgebra<R>> {
    let idx = r.reduced_indices();
    let u = r.unit();
    let n = idx.len();
    let pos = |i: usize| idx.iter().position(|k| *k == i);
    let mut bracket = Vec::with_capacity(n * n);
    for &a in &idx {
        for &b in &idx {
            let v = r.act(a, b);
            if v.get(u).is_some() {
                return Err(Error::InvalidStructure("bracket has a unit component".into()));
            }
            bracket.push(v.reindex(n, pos));
        }
    }
    LeibnizAlgebra::new(idx.iter().map(|i| r.label(*i).to_string()).collect(), bracket)
}

/// The five-dimensional non-cocommutative example: basis `1, x, y, z, t` with
/// `Δx = 1⊗x + x⊗1 + y⊗z`, `y, z, t` primitive, `x◁y = x◁z = t` and every
/// other product of reduced elements zero.
pub fn nc5<R: Ring>() -> RackBialgebra<R> {
    nc5_with_coproduct(true)
}

/// The same products on the cocommutative coalgebra where `x` is primitive too.
pub fn nc5_cocommutative<R: Ring>() -> RackBialgebra<R> {
    nc5_with_coproduct(false)
}

fn nc5_with_coproduct<R: Ring>(twisted: bool) -> RackBialgebra<R> {
    let labels: Vec<String> = ["1", "x", "y", "z", "t"].iter().map(|s| s.to_string()).collect();
    let prim = |k: usize| vec![(0, k, R::one()), (k, 0, R::one())];
    let mut x = prim(1);
    if twisted {
        x.push((2, 3, R::one()));
    }
    let terms = vec![vec![(0, 0, R::one())], x, prim(2), prim(3), prim(4)];
    let mut eps = vec![R::zero(); 5];
    eps[0] = R::one();
    let co = FinCoalgebra::from_terms(labels, terms, Some(eps), Some(0)).expect("static structure");
    RackBialgebra::from_fn(co, |a, b| match (a, b) {
        (a, 0) => SparseVec::unit(5, a),
        (0, _) => SparseVec::zero(5),
        (1, 2) | (1, 3) => SparseVec::unit(5, 4),
        _ => SparseVec::zero(5),
    })
    .expect("static structure")
}
