//! JSON structure-constant files and canonical report serialization.
//!
//! A structure file lists the basis, the unit, the counit, an explicit
//! coproduct for every basis element and, optionally, the rack product on
//! basis pairs. Scalars are strings so that nothing passes through floats.

use std::collections::BTreeMap;
use std::fmt;
use std::marker::PhantomData;

use serde::de::{self, MapAccess, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::coalgebra::FinCoalgebra;
use crate::error::{Error, Result};
use crate::linalg::SparseVec;
use crate::rack::RackBialgebra;
use crate::scalar::{parse_scalar, Ring};

/// A string-keyed map that rejects duplicate keys and serializes sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniqueMap<V>(pub BTreeMap<String, V>);

impl<V> Default for UniqueMap<V> {
    fn default() -> Self {
        UniqueMap(BTreeMap::new())
    }
}

impl<V> UniqueMap<V> {
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl<V: Serialize> Serialize for UniqueMap<V> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl<'de, V: Deserialize<'de>> Deserialize<'de> for UniqueMap<V> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V_<V>(PhantomData<V>);
        impl<'de, V: Deserialize<'de>> Visitor<'de> for V_<V> {
            type Value = UniqueMap<V>;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a map with unique keys")
            }
            fn visit_map<A: MapAccess<'de>>(self, mut a: A) -> std::result::Result<Self::Value, A::Error> {
                let mut out = BTreeMap::new();
                while let Some((k, v)) = a.next_entry::<String, V>()? {
                    if out.contains_key(&k) {
                        return Err(de::Error::custom(format!("duplicate key {k:?}")));
                    }
                    out.insert(k, v);
                }
                Ok(UniqueMap(out))
            }
        }
        d.deserialize_map(V_(PhantomData))
    }
}

/// On-disk form of a coalgebra or rack bialgebra. Fields are declared in
/// sorted order so the serialized file has sorted keys.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureFile {
    pub basis: Vec<String>,
    /// `label → [[left, right, scalar], …]`
    pub coproduct: UniqueMap<Vec<(String, String, String)>>,
    /// `label → scalar`, missing labels are 0; absent means no counit
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counit: Option<UniqueMap<String>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub metadata: BTreeMap<String, serde_json::Value>,
    /// `"a,b" → [[label, scalar], …]`, missing pairs are 0
    #[serde(default, skip_serializing_if = "UniqueMap::is_empty")]
    pub rack: UniqueMap<Vec<(String, String)>>,
    pub ring: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<String>,
}

/// A parsed file: a rack bialgebra when there is a rack section.
#[derive(Clone, Debug)]
pub enum Structure<R> {
    Coalgebra(FinCoalgebra<R>),
    Rack(RackBialgebra<R>),
}

impl<R: Ring> Structure<R> {
    pub fn coalgebra(&self) -> &FinCoalgebra<R> {
        match self {
            Structure::Coalgebra(c) => c,
            Structure::Rack(r) => r.coalgebra(),
        }
    }

    pub fn into_rack(self) -> Result<RackBialgebra<R>> {
        match self {
            Structure::Rack(r) => Ok(r),
            Structure::Coalgebra(_) => Err(Error::parse("rack", "structure has no rack section")),
        }
    }
}

struct Labels<'a> {
    index: BTreeMap<&'a str, usize>,
}

impl<'a> Labels<'a> {
    fn new(basis: &'a [String]) -> Result<Self> {
        let mut index = BTreeMap::new();
        for (i, l) in basis.iter().enumerate() {
            if l.is_empty() || l.contains(',') {
                return Err(Error::parse(format!("basis[{i}]"), format!("label {l:?} must be nonempty without commas")));
            }
            if index.insert(l.as_str(), i).is_some() {
                return Err(Error::parse(format!("basis[{i}]"), format!("duplicate label {l:?}")));
            }
        }
        Ok(Labels { index })
    }

    fn get(&self, field: &str, l: &str) -> Result<usize> {
        self.index.get(l).copied().ok_or_else(|| Error::parse(field, format!("unknown label {l:?}")))
    }
}

fn parse_comul_map<R: Ring>(
    section: &str,
    map: &UniqueMap<Vec<(String, String, String)>>,
    labels: &Labels,
    d: usize,
    require_all: bool,
) -> Result<Vec<SparseVec<R>>> {
    let mut out = vec![SparseVec::zero(d * d); d];
    let mut seen = vec![false; d];
    for (k, terms) in &map.0 {
        let at = labels.get(&format!("{section}.{k}"), k)?;
        seen[at] = true;
        for (n, (l, r, c)) in terms.iter().enumerate() {
            let field = format!("{section}.{k}[{n}]");
            let i = labels.get(&field, l)?;
            let j = labels.get(&field, r)?;
            if out[at].get(i * d + j).is_some() {
                return Err(Error::parse(field, format!("duplicate entry {l}⊗{r}")));
            }
            let c: R = parse_scalar(&field, c)?;
            if c.is_zero() {
                return Err(Error::parse(field, "zero coefficients are not listed"));
            }
            out[at].add_term(i * d + j, c);
        }
    }
    if require_all {
        if let Some(k) = seen.iter().position(|s| !s) {
            return Err(Error::parse(section, format!("missing entry for basis element {:?}", labels_of(labels)[k])));
        }
    }
    Ok(out)
}

fn parse_rack_map<R: Ring>(map: &UniqueMap<Vec<(String, String)>>, labels: &Labels, d: usize) -> Result<Vec<SparseVec<R>>> {
    let mut out = vec![SparseVec::zero(d); d * d];
    for (pair, terms) in &map.0 {
        let field = format!("rack.{pair}");
        let (a, b) = pair
            .split_once(',')
            .ok_or_else(|| Error::parse(&field, "key must be \"a,b\""))?;
        let ab = labels.get(&field, a)? * d + labels.get(&field, b)?;
        for (n, (l, c)) in terms.iter().enumerate() {
            let field = format!("rack.{pair}[{n}]");
            let k = labels.get(&field, l)?;
            if out[ab].get(k).is_some() {
                return Err(Error::parse(field, format!("duplicate entry {l}")));
            }
            let c: R = parse_scalar(&field, c)?;
            if c.is_zero() {
                return Err(Error::parse(field, "zero coefficients are not listed"));
            }
            out[ab].add_term(k, c);
        }
    }
    Ok(out)
}

fn labels_of<'a>(labels: &'a Labels) -> Vec<&'a str> {
    let mut v: Vec<(&str, usize)> = labels.index.iter().map(|(k, i)| (*k, *i)).collect();
    v.sort_by_key(|(_, i)| *i);
    v.into_iter().map(|(k, _)| k).collect()
}

impl StructureFile {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("structure files always serialize");
        s.push('\n');
        s
    }

    pub fn parse<R: Ring>(&self) -> Result<Structure<R>> {
        if self.ring != R::RING_TAG {
            return Err(Error::parse("ring", format!("expected {:?}, found {:?}", R::RING_TAG, self.ring)));
        }
        let labels = Labels::new(&self.basis)?;
        let d = self.basis.len();
        let comul = parse_comul_map("coproduct", &self.coproduct, &labels, d, true)?;
        let counit = match &self.counit {
            None => None,
            Some(m) => {
                let mut eps = vec![R::zero(); d];
                for (k, c) in &m.0 {
                    let field = format!("counit.{k}");
                    eps[labels.get(&field, k)?] = parse_scalar(&field, c)?;
                }
                Some(eps)
            }
        };
        let unit = self.unit.as_deref().map(|u| labels.get("unit", u)).transpose()?;
        let co = FinCoalgebra::new(self.basis.clone(), comul, counit, unit)?;
        if self.rack.is_empty() {
            return Ok(Structure::Coalgebra(co));
        }
        let rack = parse_rack_map(&self.rack, &labels, d)?;
        Ok(Structure::Rack(RackBialgebra::new(co, rack)?))
    }

    pub fn from_coalgebra<R: Ring>(c: &FinCoalgebra<R>) -> Self {
        let l = c.labels();
        let coproduct = (0..c.dim())
            .map(|k| (l[k].clone(), c.terms(k).map(|(i, j, x)| (l[i].clone(), l[j].clone(), x.to_string())).collect()))
            .collect();
        let counit = c.counit().map(|eps| {
            UniqueMap(
                eps.iter()
                    .enumerate()
                    .filter(|(_, x)| !x.is_zero())
                    .map(|(k, x)| (l[k].clone(), x.to_string()))
                    .collect(),
            )
        });
        StructureFile {
            basis: l.to_vec(),
            coproduct: UniqueMap(coproduct),
            counit,
            metadata: BTreeMap::new(),
            rack: UniqueMap::default(),
            ring: R::RING_TAG.to_string(),
            unit: c.unit().map(|u| l[u].clone()),
        }
    }

    pub fn from_rack<R: Ring>(r: &RackBialgebra<R>) -> Self {
        let mut f = StructureFile::from_coalgebra(r.coalgebra());
        let d = r.dim();
        let l = r.labels();
        for (ab, v) in r.rack_entries().iter().enumerate() {
            if !v.is_zero() {
                let key = format!("{},{}", l[ab / d], l[ab % d]);
                f.rack.0.insert(key, v.iter().map(|(k, x)| (l[k].clone(), x.to_string())).collect());
            }
        }
        f
    }
}

pub fn parse_structure<R: Ring>(text: &str) -> Result<Structure<R>> {
    StructureFile::from_json(text)?.parse()
}

pub fn parse_rack<R: Ring>(text: &str) -> Result<RackBialgebra<R>> {
    parse_structure(text)?.into_rack()
}

pub fn serialize_rack<R: Ring>(r: &RackBialgebra<R>) -> String {
    StructureFile::from_rack(r).to_json()
}

pub fn serialize_coalgebra<R: Ring>(c: &FinCoalgebra<R>) -> String {
    StructureFile::from_coalgebra(c).to_json()
}

/// A coproduct perturbation file: `label → [[left, right, scalar], …]`.
pub fn parse_comul_perturbation<R: Ring>(text: &str, basis: &[String]) -> Result<Vec<SparseVec<R>>> {
    let map: UniqueMap<Vec<(String, String, String)>> = serde_json::from_str(text)?;
    parse_comul_map("dcomul", &map, &Labels::new(basis)?, basis.len(), false)
}

/// A rack perturbation file: `"a,b" → [[label, scalar], …]`.
pub fn parse_rack_perturbation<R: Ring>(text: &str, basis: &[String]) -> Result<Vec<SparseVec<R>>> {
    let map: UniqueMap<Vec<(String, String)>> = serde_json::from_str(text)?;
    parse_rack_map(&map, &Labels::new(basis)?, basis.len())
}

/// Pretty JSON with every object's keys sorted.
pub fn canonical_json<T: Serialize>(value: &T) -> Result<String> {
    let v = serde_json::to_value(value)?;
    let mut s = serde_json::to_string_pretty(&v)?;
    s.push('\n');
    Ok(s)
}
