//! Sparse tensors on R^n: totally symmetric (sorted keys), alternating
//! (strictly sorted keys) and connection elements in so(n) (x) R^n.
//!
//! Storage is 0-based; JSON is 1-based.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scalar::{multinomial, Scalar};

/// Number of index pairs `a < b` in `0..n`.
pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Lexicographic index of the pair `a < b`.
pub fn pair_index(n: usize, a: usize, b: usize) -> usize {
    debug_assert!(a < b && b < n);
    a * n - a * (a + 1) / 2 + (b - a - 1)
}

pub fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect()
}

/// Sort a key in place and return the permutation sign.
pub fn sort_with_sign<const R: usize>(key: &mut [u8; R]) -> i32 {
    let mut sign = 1;
    for i in 1..R {
        let mut j = i;
        while j > 0 && key[j - 1] > key[j] {
            key.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    sign
}

/// Totally symmetric rank-`R` tensor; only sorted index tuples are stored.
#[derive(Clone, Debug, PartialEq)]
pub struct SymTensor<S, const R: usize> {
    n: usize,
    entries: BTreeMap<[u8; R], S>,
}

pub type UpsilonTensor<S> = SymTensor<S, 3>;
pub type Sym4Tensor<S> = SymTensor<S, 4>;

impl<S: Scalar, const R: usize> SymTensor<S, R> {
    pub fn zeros(n: usize) -> Self {
        SymTensor {
            n,
            entries: BTreeMap::new(),
        }
    }

    pub fn from_sorted_entries(n: usize, entries: BTreeMap<[u8; R], S>) -> Result<Self> {
        for k in entries.keys() {
            if k.windows(2).any(|w| w[0] > w[1]) || k.iter().any(|&i| i as usize >= n) {
                return Err(Error::Invalid(format!("bad symmetric index {k:?} for n = {n}")));
            }
        }
        let entries = entries.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        Ok(SymTensor { n, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &BTreeMap<[u8; R], S> {
        &self.entries
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Component at an arbitrary (unsorted) index tuple.
    pub fn value(&self, idx: [usize; R]) -> S {
        let mut k = idx.map(|i| i as u8);
        k.sort_unstable();
        self.entries.get(&k).cloned().unwrap_or_else(S::zero)
    }

    /// Add `v` to the component at a sorted key.
    pub fn add_sorted(&mut self, key: [u8; R], v: S) {
        if v.is_zero() {
            return;
        }
        let slot = self.entries.entry(key).or_insert_with(S::zero);
        *slot = slot.clone() + v;
        if slot.is_zero() {
            self.entries.remove(&key);
        }
    }

    pub fn scale(&self, k: &S) -> Self {
        SymTensor {
            n: self.n,
            entries: self
                .entries
                .iter()
                .map(|(i, v)| (*i, k.clone() * v.clone()))
                .filter(|(_, v)| !v.is_zero())
                .collect(),
        }
    }

    pub fn map<T: Scalar, F: Fn(&S) -> T>(&self, f: F) -> SymTensor<T, R> {
        SymTensor {
            n: self.n,
            entries: self
                .entries
                .iter()
                .map(|(i, v)| (*i, f(v)))
                .filter(|(_, v)| !v.is_zero())
                .collect(),
        }
    }

    pub fn to_f64(&self) -> SymTensor<f64, R> {
        self.map(|v| v.to_f64())
    }

    /// Frobenius norm squared over all ordered index tuples.
    pub fn norm2(&self) -> S {
        self.entries.iter().fold(S::zero(), |acc, (k, v)| {
            acc + S::from_int(multinomial(k)) * v.clone() * v.clone()
        })
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.values().map(|v| v.to_f64().abs()).fold(0.0, f64::max)
    }
}

impl<S: Scalar> SymTensor<S, 3> {
    pub fn get(&self, i: usize, j: usize, k: usize) -> S {
        self.value([i, j, k])
    }

    /// `F(a) = Y_ijk a_i a_j a_k` as a polynomial.
    pub fn cubic_polynomial(&self) -> Poly<S> {
        Poly::from_terms(
            self.entries
                .iter()
                .map(|(k, v)| (k.iter().copied().collect(), S::from_int(multinomial(k)) * v.clone())),
        )
    }

    /// `(i, j) -> [(k, Y_ijk)]` over all ordered pairs, `k` ascending.
    pub fn adjacency(&self) -> Vec<Vec<(usize, S)>> {
        let n = self.n;
        let mut adj: Vec<Vec<(usize, S)>> = vec![Vec::new(); n * n];
        for (k, v) in &self.entries {
            let [a, b, c] = k.map(|x| x as usize);
            let mut perms = vec![[a, b, c], [a, c, b], [b, a, c], [b, c, a], [c, a, b], [c, b, a]];
            perms.sort_unstable();
            perms.dedup();
            for [x, y, z] in perms {
                adj[x * n + y].push((z, v.clone()));
            }
        }
        for l in adj.iter_mut() {
            l.sort_by_key(|e| e.0);
        }
        adj
    }

    pub fn to_json(&self, normalization: &str) -> serde_json::Value {
        let entries: Vec<EntryJson<S>> = self
            .entries
            .iter()
            .map(|(k, v)| EntryJson {
                ijk: k.map(|i| i as usize + 1),
                value: v.clone(),
            })
            .collect();
        serde_json::json!({
            "n": self.n,
            "normalization": normalization,
            "entries": entries,
        })
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let raw: TensorJson<S> = serde_json::from_value(value.clone())?;
        let mut map = BTreeMap::new();
        for e in raw.entries {
            let idx = checked_indices(raw.n, e.ijk)?;
            let mut k = idx.map(|i| i as u8);
            k.sort_unstable();
            map.insert(k, e.value);
        }
        Self::from_sorted_entries(raw.n, map)
    }
}

fn checked_indices(n: usize, ijk: [usize; 3]) -> Result<[usize; 3]> {
    if ijk.iter().any(|&i| i == 0 || i > n) {
        return Err(Error::Invalid(format!("index {ijk:?} out of range 1..={n}")));
    }
    Ok(ijk.map(|i| i - 1))
}

#[derive(Serialize, Deserialize)]
struct EntryJson<S> {
    ijk: [usize; 3],
    value: S,
}

#[derive(Deserialize)]
#[serde(bound = "S: Scalar")]
struct TensorJson<S> {
    n: usize,
    entries: Vec<EntryJson<S>>,
}

/// Alternating rank-3 tensor; strictly sorted keys.
#[derive(Clone, Debug, PartialEq)]
pub struct ThreeForm<S> {
    n: usize,
    entries: BTreeMap<[u8; 3], S>,
}

impl<S: Scalar> ThreeForm<S> {
    pub fn zeros(n: usize) -> Self {
        ThreeForm {
            n,
            entries: BTreeMap::new(),
        }
    }

    /// Accumulate components given at arbitrary index orders.
    pub fn from_terms<I: IntoIterator<Item = ([usize; 3], S)>>(n: usize, terms: I) -> Self {
        let mut t = ThreeForm::zeros(n);
        for (idx, v) in terms {
            t.add(idx, v);
        }
        t
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &BTreeMap<[u8; 3], S> {
        &self.entries
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> S {
        let mut key = [i as u8, j as u8, k as u8];
        let sign = sort_with_sign(&mut key);
        if key[0] == key[1] || key[1] == key[2] {
            return S::zero();
        }
        let v = self.entries.get(&key).cloned().unwrap_or_else(S::zero);
        if sign < 0 {
            -v
        } else {
            v
        }
    }

    /// `T_{ijk} += v` at an arbitrary order (with the antisymmetric images).
    pub fn add(&mut self, idx: [usize; 3], v: S) {
        let mut key = idx.map(|i| i as u8);
        let sign = sort_with_sign(&mut key);
        if key[0] == key[1] || key[1] == key[2] || v.is_zero() {
            return;
        }
        let v = if sign < 0 { -v } else { v };
        let slot = self.entries.entry(key).or_insert_with(S::zero);
        *slot = slot.clone() + v;
        if slot.is_zero() {
            self.entries.remove(&key);
        }
    }

    /// Sum over sorted triples.
    pub fn dot(&self, other: &Self) -> S {
        self.entries
            .iter()
            .fold(S::zero(), |acc, (k, v)| match other.entries.get(k) {
                Some(w) => acc + v.clone() * w.clone(),
                None => acc,
            })
    }

    pub fn norm2(&self) -> S {
        self.dot(self)
    }

    pub fn scale(&self, k: &S) -> Self {
        ThreeForm::from_terms(
            self.n,
            self.entries
                .iter()
                .map(|(i, v)| (i.map(|x| x as usize), k.clone() * v.clone())),
        )
    }

    pub fn map<T: Scalar, F: Fn(&S) -> T>(&self, f: F) -> ThreeForm<T> {
        ThreeForm::from_terms(self.n, self.entries.iter().map(|(i, v)| (i.map(|x| x as usize), f(v))))
    }

    pub fn to_f64(&self) -> ThreeForm<f64> {
        self.map(|v| v.to_f64())
    }

    /// Coordinates in the basis of sorted triples, lexicographic.
    pub fn to_coords(&self) -> Vec<S> {
        let idx = triple_indexer(self.n);
        let mut out = vec![S::zero(); idx.len()];
        for (k, v) in &self.entries {
            out[idx[k]] = v.clone();
        }
        out
    }

    pub fn from_coords(n: usize, coords: &[S]) -> Self {
        let triples = triples(n);
        ThreeForm {
            n,
            entries: triples
                .into_iter()
                .zip(coords)
                .filter(|(_, v)| !v.is_zero())
                .map(|(t, v)| (t.map(|x| x as u8), v.clone()))
                .collect(),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let entries: Vec<EntryJson<S>> = self
            .entries
            .iter()
            .map(|(k, v)| EntryJson {
                ijk: k.map(|i| i as usize + 1),
                value: v.clone(),
            })
            .collect();
        serde_json::json!({ "n": self.n, "entries": entries })
    }
}

/// Strictly increasing triples of `0..n`, lexicographic.
pub fn triples(n: usize) -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                out.push([a, b, c]);
            }
        }
    }
    out
}

pub fn triple_indexer(n: usize) -> std::collections::HashMap<[u8; 3], usize> {
    triples(n)
        .into_iter()
        .enumerate()
        .map(|(i, t)| (t.map(|x| x as u8), i))
        .collect()
}

/// Element of so(n) (x) R^n, components `C[(a, b), l]` for `a < b`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConnElement<S> {
    n: usize,
    comps: Vec<S>,
}

impl<S: Scalar> ConnElement<S> {
    pub fn zeros(n: usize) -> Self {
        ConnElement {
            n,
            comps: vec![S::zero(); pair_count(n) * n],
        }
    }

    pub fn from_comps(n: usize, comps: Vec<S>) -> Result<Self> {
        let expected = pair_count(n) * n;
        if comps.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: comps.len(),
            });
        }
        Ok(ConnElement { n, comps })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.comps.len()
    }

    pub fn comps(&self) -> &[S] {
        &self.comps
    }

    pub fn index(n: usize, a: usize, b: usize, l: usize) -> usize {
        pair_index(n, a, b) * n + l
    }

    /// `C_{ab|l}` with skew symmetry in `(a, b)`.
    pub fn get(&self, a: usize, b: usize, l: usize) -> S {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => self.comps[Self::index(self.n, a, b, l)].clone(),
            std::cmp::Ordering::Greater => -self.comps[Self::index(self.n, b, a, l)].clone(),
            std::cmp::Ordering::Equal => S::zero(),
        }
    }

    pub fn set(&mut self, a: usize, b: usize, l: usize, v: S) {
        if a < b {
            let i = Self::index(self.n, a, b, l);
            self.comps[i] = v;
        } else if b < a {
            let i = Self::index(self.n, b, a, l);
            self.comps[i] = -v;
        }
    }

    /// The skew matrix `C_{..|l}` in pair coordinates.
    pub fn slice(&self, l: usize) -> Vec<S> {
        (0..pair_count(self.n))
            .map(|p| self.comps[p * self.n + l].clone())
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        ConnElement {
            n: self.n,
            comps: self
                .comps
                .iter()
                .zip(&other.comps)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        ConnElement {
            n: self.n,
            comps: self
                .comps
                .iter()
                .zip(&other.comps)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        }
    }

    pub fn scale(&self, k: &S) -> Self {
        ConnElement {
            n: self.n,
            comps: self.comps.iter().map(|a| k.clone() * a.clone()).collect(),
        }
    }

    pub fn dot(&self, other: &Self) -> S {
        self.comps
            .iter()
            .zip(&other.comps)
            .fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
    }

    pub fn norm2(&self) -> S {
        self.dot(self)
    }

    pub fn to_f64(&self) -> ConnElement<f64> {
        ConnElement {
            n: self.n,
            comps: self.comps.iter().map(|v| v.to_f64()).collect(),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let n = self.n;
        let mut comps = Vec::new();
        for (p, (a, b)) in pairs(n).into_iter().enumerate() {
            for l in 0..n {
                let v = &self.comps[p * n + l];
                if !v.is_zero() {
                    comps.push(serde_json::json!({
                        "pair": [a + 1, b + 1],
                        "frame": l + 1,
                        "value": v,
                    }));
                }
            }
        }
        serde_json::json!({ "n": n, "comps": comps })
    }
}

#[derive(Deserialize)]
struct ConnCompJson {
    pair: [usize; 2],
    frame: usize,
    value: f64,
}

#[derive(Deserialize)]
struct ConnJson {
    n: usize,
    comps: Vec<ConnCompJson>,
}

impl ConnElement<f64> {
    /// Parse `{"n": 5, "comps": [{"pair": [a, b], "frame": l, "value": x}, ...]}`
    /// (1-based, `a < b`); repeated components accumulate.
    pub fn from_json_str(s: &str) -> Result<Self> {
        let raw: ConnJson = serde_json::from_str(s)?;
        let n = raw.n;
        if n < 2 {
            return Err(Error::Invalid(format!("dimension {n} too small")));
        }
        let mut c = ConnElement::zeros(n);
        for e in raw.comps {
            let [a, b] = e.pair;
            if !(1 <= a && a < b && b <= n && 1 <= e.frame && e.frame <= n) {
                return Err(Error::Invalid(format!(
                    "component pair {:?} frame {} out of range for n = {n}",
                    e.pair, e.frame
                )));
            }
            let i = Self::index(n, a - 1, b - 1, e.frame - 1);
            c.comps[i] += e.value;
        }
        Ok(c)
    }
}
