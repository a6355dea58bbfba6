//! Finite matrix groups: closure enumeration, conjugacy classes, subgroup
//! tests, power maps and conjugation actions.
//!
//! Elements are 2×2 or 3×3 cyclotomic matrices with a sign flag, so that
//! Pin₊(3) ≅ SU(2) × C₂ fits the same machinery as plain matrix groups.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::{Arc, Mutex};

use num_integer::Integer;
use num_rational::BigRational;
use thiserror::Error;

use crate::Cyc;

pub const DEFAULT_CAP: usize = 10_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("closure exceeded {cap} elements (generator of infinite order or group too large)")]
    TooLarge { cap: usize },
    #[error("bad generator: {0}")]
    BadGenerator(String),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("{0} is not a subgroup of {1}")]
    NotSubgroup(String, String),
    #[error("element does not normalize {0}")]
    NotNormalizing(String),
}

/// Canonical key: flag followed by all entry coordinates at a fixed conductor.
pub type Key = Vec<BigRational>;

/// A square cyclotomic matrix with a central sign flag.
#[derive(Clone, Debug)]
pub struct GradedMatrix {
    dim: usize,
    /// Row-major, all entries over the same conductor.
    entries: Vec<Cyc>,
    flag: i8,
}

impl GradedMatrix {
    pub fn new(rows: Vec<Vec<Cyc>>, flag: i8) -> Self {
        let dim = rows.len();
        assert!(rows.iter().all(|r| r.len() == dim), "matrix must be square");
        assert!(flag == 1 || flag == -1);
        let entries: Vec<Cyc> = rows.into_iter().flatten().collect();
        let m = entries.iter().fold(1u64, |m, e| m.lcm(&e.conductor()));
        GradedMatrix {
            dim,
            entries: entries.iter().map(|e| e.lift(m)).collect(),
            flag,
        }
    }

    pub fn plain(rows: Vec<Vec<Cyc>>) -> Self {
        Self::new(rows, 1)
    }

    pub fn identity(dim: usize) -> Self {
        Self::scalar(dim, Cyc::one())
    }

    pub fn scalar(dim: usize, s: Cyc) -> Self {
        let rows = (0..dim)
            .map(|i| {
                (0..dim)
                    .map(|j| if i == j { s.clone() } else { Cyc::from_int(0) })
                    .collect()
            })
            .collect();
        Self::plain(rows)
    }

    pub fn diag(d: Vec<Cyc>) -> Self {
        let n = d.len();
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { d[i].clone() } else { Cyc::from_int(0) })
                    .collect()
            })
            .collect();
        Self::plain(rows)
    }

    /// The pure sign element (𝟙, -1).
    pub fn flag_element(dim: usize) -> Self {
        let mut m = Self::identity(dim);
        m.flag = -1;
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn flag(&self) -> i8 {
        self.flag
    }

    pub fn get(&self, i: usize, j: usize) -> &Cyc {
        &self.entries[i * self.dim + j]
    }

    pub fn rows(&self) -> Vec<Vec<Cyc>> {
        self.entries.chunks(self.dim).map(|r| r.to_vec()).collect()
    }

    pub fn conductor(&self) -> u64 {
        self.entries[0].conductor()
    }

    pub fn lift(&self, m: u64) -> Self {
        GradedMatrix {
            dim: self.dim,
            entries: self.entries.iter().map(|e| e.lift(m)).collect(),
            flag: self.flag,
        }
    }

    pub fn key(&self, m: u64) -> Key {
        let mut k = Vec::with_capacity(1 + self.entries.len() * 8);
        k.push(BigRational::from_integer(self.flag.into()));
        for e in &self.entries {
            k.extend(e.lift(m).coeffs().iter().cloned());
        }
        k
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.dim;
        assert_eq!(n, other.dim, "dimension mismatch");
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = self.get(i, 0).mul_ref(other.get(0, j));
                for k in 1..n {
                    acc = acc.add_ref(&self.get(i, k).mul_ref(other.get(k, j)));
                }
                entries.push(acc);
            }
        }
        GradedMatrix {
            dim: n,
            entries,
            flag: self.flag * other.flag,
        }
    }

    pub fn neg(&self) -> Self {
        GradedMatrix {
            dim: self.dim,
            entries: self.entries.iter().map(Cyc::neg_ref).collect(),
            flag: self.flag,
        }
    }

    pub fn scale(&self, s: &Cyc) -> Self {
        GradedMatrix {
            dim: self.dim,
            entries: self.entries.iter().map(|e| e.mul_ref(s)).collect(),
            flag: self.flag,
        }
    }

    pub fn pow(&self, e: u64) -> Self {
        let mut out = Self::identity(self.dim);
        out.flag = 1;
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    pub fn trace(&self) -> Cyc {
        (0..self.dim).fold(Cyc::from_int(0), |acc, i| acc.add_ref(self.get(i, i)))
    }

    pub fn det(&self) -> Cyc {
        let g = |i, j| self.get(i, j);
        match self.dim {
            1 => g(0, 0).clone(),
            2 => g(0, 0).mul_ref(g(1, 1)).sub_ref(&g(0, 1).mul_ref(g(1, 0))),
            3 => {
                let minor = |a: usize, b: usize, c: usize, d: usize| {
                    g(1, a).mul_ref(g(2, b)).sub_ref(&g(1, c).mul_ref(g(2, d)))
                };
                g(0, 0)
                    .mul_ref(&minor(1, 2, 2, 1))
                    .sub_ref(&g(0, 1).mul_ref(&minor(0, 2, 2, 0)))
                    .add_ref(&g(0, 2).mul_ref(&minor(0, 1, 1, 0)))
            }
            n => panic!("determinant of {n}x{n} not supported"),
        }
    }

    /// Conjugate transpose (flag unchanged).
    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(self.get(j, i).conj());
            }
        }
        GradedMatrix {
            dim: n,
            entries,
            flag: self.flag,
        }
    }

    pub fn transpose(&self) -> Self {
        let n = self.dim;
        let entries = (0..n * n).map(|t| self.get(t % n, t / n).clone()).collect();
        GradedMatrix {
            dim: n,
            entries,
            flag: self.flag,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.flag == 1 && self.matrix_is_identity()
    }

    fn matrix_is_identity(&self) -> bool {
        (0..self.dim).all(|i| {
            (0..self.dim).all(|j| {
                let e = self.get(i, j);
                if i == j {
                    e.is_one()
                } else {
                    e.is_zero()
                }
            })
        })
    }

    /// M·M* = 𝟙.
    pub fn is_unitary(&self) -> bool {
        self.mul(&self.adjoint()).matrix_is_identity()
    }

    pub fn inverse(&self) -> Result<Self, GroupError> {
        let d = self.det();
        let dinv = d
            .inv()
            .map_err(|_| GroupError::BadGenerator("singular matrix".into()))?;
        let n = self.dim;
        let g = |i: usize, j: usize| self.get(i, j).clone();
        let adj: Vec<Cyc> = match n {
            1 => vec![Cyc::one()],
            2 => vec![g(1, 1), g(0, 1).neg_ref(), g(1, 0).neg_ref(), g(0, 0)],
            3 => {
                let mut out = Vec::with_capacity(9);
                for i in 0..3 {
                    for j in 0..3 {
                        // cofactor of (j, i)
                        let r: Vec<usize> = (0..3).filter(|&r| r != j).collect();
                        let c: Vec<usize> = (0..3).filter(|&c| c != i).collect();
                        let m = g(r[0], c[0])
                            .mul_ref(&g(r[1], c[1]))
                            .sub_ref(&g(r[0], c[1]).mul_ref(&g(r[1], c[0])));
                        out.push(if (i + j) % 2 == 0 { m } else { m.neg_ref() });
                    }
                }
                out
            }
            _ => return Err(GroupError::BadGenerator(format!("{n}x{n} matrix"))),
        };
        let entries = adj.iter().map(|e| e.mul_ref(&dinv)).collect();
        Ok(GradedMatrix {
            dim: n,
            entries,
            flag: self.flag,
        })
    }

    /// s · self · s⁻¹.
    pub fn conjugate_by(&self, s: &Self) -> Result<Self, GroupError> {
        Ok(s.mul(self).mul(&s.inverse()?))
    }
}

impl PartialEq for GradedMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.flag == other.flag && self.entries == other.entries
    }
}

impl Eq for GradedMatrix {}

impl fmt::Display for GradedMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows()
            .iter()
            .map(|r| {
                let cells: Vec<String> = r.iter().map(|c| c.to_string()).collect();
                format!("[{}]", cells.join(", "))
            })
            .collect();
        write!(f, "[{}]", rows.join(", "))?;
        if self.flag == -1 {
            write!(f, " x")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjClass {
    pub rep: usize,
    pub size: usize,
    pub order: usize,
    pub members: Vec<usize>,
}

/// An enumerated finite group with its full multiplication table.
#[derive(Debug)]
pub struct FiniteGroup {
    pub name: Option<String>,
    dim: usize,
    conductor: u64,
    gens: Vec<GradedMatrix>,
    elements: Vec<GradedMatrix>,
    keys: Vec<Key>,
    index: HashMap<Key, usize>,
    /// Indices at other conductors, built on demand for foreign lookups.
    foreign: Mutex<HashMap<u64, Arc<HashMap<Key, usize>>>>,
    /// Index of each generator in `elements`.
    gen_idx: Vec<usize>,
    mul: Vec<u32>,
    inv: Vec<usize>,
    orders: Vec<usize>,
    classes: Vec<ConjClass>,
    class_of: Vec<usize>,
}

/// BFS closure of `gens` with the default cap.
pub fn generate(gens: &[GradedMatrix]) -> Result<FiniteGroup, GroupError> {
    generate_capped(gens, DEFAULT_CAP)
}

/// Breadth-first closure of `gens`; element 0 is the identity and elements
/// appear in discovery order with generators tried in the given order.
pub fn generate_capped(gens: &[GradedMatrix], cap: usize) -> Result<FiniteGroup, GroupError> {
    let dim = gens
        .first()
        .map(GradedMatrix::dim)
        .ok_or_else(|| GroupError::BadGenerator("empty generator list".into()))?;
    for g in gens {
        if g.dim() != dim {
            return Err(GroupError::DimensionMismatch(dim, g.dim()));
        }
        if g.det().is_zero() {
            return Err(GroupError::BadGenerator(format!("singular matrix {g}")));
        }
    }
    let conductor = gens.iter().fold(1u64, |m, g| m.lcm(&g.conductor()));
    let gens: Vec<GradedMatrix> = gens.iter().map(|g| g.lift(conductor)).collect();
    let id = GradedMatrix::identity(dim).lift(conductor);

    let mut elements = vec![id.clone()];
    let mut keys = vec![id.key(conductor)];
    let mut index = HashMap::from([(keys[0].clone(), 0usize)]);
    // right_mul[k][x] = index of elements[x] * gens[k]
    let mut right_mul: Vec<Vec<usize>> = vec![Vec::new(); gens.len()];
    let mut parent = vec![usize::MAX];
    let mut via = vec![usize::MAX];
    let mut queue = VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        for (k, g) in gens.iter().enumerate() {
            let y = elements[x].mul(g);
            let key = y.key(conductor);
            let idx = match index.get(&key) {
                Some(&i) => i,
                None => {
                    if elements.len() >= cap {
                        return Err(GroupError::TooLarge { cap });
                    }
                    let i = elements.len();
                    index.insert(key.clone(), i);
                    elements.push(y);
                    keys.push(key);
                    parent.push(x);
                    via.push(k);
                    queue.push_back(i);
                    i
                }
            };
            let row = &mut right_mul[k];
            if row.len() <= x {
                row.resize(x + 1, usize::MAX);
            }
            row[x] = idx;
        }
    }
    let n = elements.len();
    // mul[i][j] with j = parent[j]·g: mul[i][j] = mul[i][parent[j]]·g
    let mut mul = vec![0u32; n * n];
    for i in 0..n {
        mul[i * n] = i as u32;
        for j in 1..n {
            let p = mul[i * n + parent[j]] as usize;
            mul[i * n + j] = right_mul[via[j]][p] as u32;
        }
    }
    let mut inv = vec![0usize; n];
    for i in 0..n {
        inv[i] = (0..n).find(|&j| mul[i * n + j] == 0).expect("finite group");
    }
    let mut orders = vec![1usize; n];
    for (i, o) in orders.iter_mut().enumerate() {
        let mut p = i;
        while p != 0 {
            p = mul[p * n + i] as usize;
            *o += 1;
        }
    }
    let gen_idx: Vec<usize> = gens.iter().map(|g| index[&g.key(conductor)]).collect();

    let mut g = FiniteGroup {
        name: None,
        dim,
        conductor,
        gens,
        elements,
        keys,
        index,
        foreign: Mutex::new(HashMap::new()),
        gen_idx,
        mul,
        inv,
        orders,
        classes: Vec::new(),
        class_of: Vec::new(),
    };
    g.compute_classes();
    Ok(g)
}

impl FiniteGroup {
    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn label(&self) -> String {
        self.name.clone().unwrap_or_else(|| format!("<group of order {}>", self.order()))
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn generators(&self) -> &[GradedMatrix] {
        &self.gens
    }

    pub fn generator_indices(&self) -> &[usize] {
        &self.gen_idx
    }

    pub fn elements(&self) -> &[GradedMatrix] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &GradedMatrix {
        &self.elements[i]
    }

    pub fn key(&self, i: usize) -> &Key {
        &self.keys[i]
    }

    pub fn mul(&self, i: usize, j: usize) -> usize {
        self.mul[i * self.order() + j] as usize
    }

    pub fn inv(&self, i: usize) -> usize {
        self.inv[i]
    }

    pub fn pow(&self, i: usize, k: i64) -> usize {
        let base = if k < 0 { self.inv[i] } else { i };
        let e = k.unsigned_abs() as usize % self.orders[i];
        (0..e).fold(0, |acc, _| self.mul(acc, base))
    }

    pub fn element_order(&self, i: usize) -> usize {
        self.orders[i]
    }

    /// Least common multiple of element orders.
    pub fn exponent(&self) -> usize {
        self.orders.iter().fold(1, |e, &o| e.lcm(&o))
    }

    pub fn classes(&self) -> &[ConjClass] {
        &self.classes
    }

    pub fn class_of(&self, i: usize) -> usize {
        self.class_of[i]
    }

    /// Index of the element equal to `m`, if present.
    pub fn locate(&self, m: &GradedMatrix) -> Option<usize> {
        if m.dim() != self.dim {
            return None;
        }
        let mc = m.conductor();
        if self.conductor.is_multiple_of(mc) {
            return self.index.get(&m.key(self.conductor)).copied();
        }
        let l = self.conductor.lcm(&mc);
        let table = {
            let mut cache = self.foreign.lock().unwrap();
            cache
                .entry(l)
                .or_insert_with(|| {
                    Arc::new(
                        self.elements
                            .iter()
                            .enumerate()
                            .map(|(i, e)| (e.key(l), i))
                            .collect(),
                    )
                })
                .clone()
        };
        table.get(&m.key(l)).copied()
    }

    pub fn contains(&self, m: &GradedMatrix) -> bool {
        self.locate(m).is_some()
    }

    fn compute_classes(&mut self) {
        let n = self.order();
        let mut class_id = vec![usize::MAX; n];
        let mut raw: Vec<Vec<usize>> = Vec::new();
        for start in 0..n {
            if class_id[start] != usize::MAX {
                continue;
            }
            let c = raw.len();
            class_id[start] = c;
            let mut members = vec![start];
            let mut q = VecDeque::from([start]);
            while let Some(x) = q.pop_front() {
                for &s in &self.gen_idx {
                    let y = self.mul(self.mul(self.inv[s], x), s);
                    if class_id[y] == usize::MAX {
                        class_id[y] = c;
                        members.push(y);
                        q.push_back(y);
                    }
                }
            }
            members.sort_unstable();
            raw.push(members);
        }
        let mut classes: Vec<ConjClass> = raw
            .into_iter()
            .map(|members| {
                let rep = *members
                    .iter()
                    .min_by(|&&a, &&b| self.keys[a].cmp(&self.keys[b]))
                    .unwrap();
                ConjClass {
                    rep,
                    size: members.len(),
                    order: self.orders[rep],
                    members,
                }
            })
            .collect();
        classes.sort_by(|a, b| {
            (a.order, a.size)
                .cmp(&(b.order, b.size))
                .then_with(|| self.keys[a.rep].cmp(&self.keys[b.rep]))
        });
        self.class_of = vec![0; n];
        for (ci, c) in classes.iter().enumerate() {
            for &m in &c.members {
                self.class_of[m] = ci;
            }
        }
        self.classes = classes;
    }

    /// Multiset of (element order, class size), sorted.
    pub fn class_profile(&self) -> Vec<(usize, usize)> {
        let mut p: Vec<_> = self.classes.iter().map(|c| (c.order, c.size)).collect();
        p.sort_unstable();
        p
    }

    /// Class of g^k for g in each class.
    pub fn power_class_map(&self, k: i64) -> Vec<usize> {
        self.classes
            .iter()
            .map(|c| self.class_of[self.pow(c.rep, k)])
            .collect()
    }

    /// Class permutation induced by g ↦ s g s⁻¹ for a normalizing element s.
    pub fn conjugation_class_action(&self, s: &GradedMatrix) -> Result<Vec<usize>, GroupError> {
        let sinv = s.inverse()?;
        for g in &self.gens {
            if !self.contains(&s.mul(g).mul(&sinv)) {
                return Err(GroupError::NotNormalizing(self.label()));
            }
        }
        Ok(self
            .classes
            .iter()
            .map(|c| {
                let img = s.mul(&self.elements[c.rep]).mul(&sinv);
                self.class_of[self.locate(&img).expect("normalizer checked on generators")]
            })
            .collect())
    }

    /// Subgroup generated by the given element indices.
    pub fn subgroup(&self, idx: &[usize]) -> Result<FiniteGroup, GroupError> {
        let gens: Vec<GradedMatrix> = idx.iter().map(|&i| self.elements[i].clone()).collect();
        generate(&gens)
    }
}

/// Literal containment: every element of `h` is an element of `g`.
pub fn is_subgroup(h: &FiniteGroup, g: &FiniteGroup) -> bool {
    h.dim == g.dim && h.order() <= g.order() && h.elements.iter().all(|e| g.contains(e))
}

/// gHg⁻¹ = H for every generator g of `g`; requires H ⊂ G.
pub fn is_normal(h: &FiniteGroup, g: &FiniteGroup) -> bool {
    if !is_subgroup(h, g) {
        return false;
    }
    g.gens.iter().all(|s| {
        let sinv = s.inverse().expect("group elements are invertible");
        h.gens.iter().all(|x| h.contains(&s.mul(x).mul(&sinv)))
    })
}

pub fn index(h: &FiniteGroup, g: &FiniteGroup) -> Result<usize, GroupError> {
    if !is_subgroup(h, g) {
        return Err(GroupError::NotSubgroup(h.label(), g.label()));
    }
    Ok(g.order() / h.order())
}

pub fn class_profile(g: &FiniteGroup) -> Vec<(usize, usize)> {
    g.class_profile()
}

/// Searches for an isomorphism `a → b`, returned as an index map. Images
/// of `a`'s generators range over elements of matching order; each
/// candidate assignment is extended along the BFS tree and accepted when it
/// respects every generator edge and is injective.
pub fn find_isomorphism(a: &FiniteGroup, b: &FiniteGroup) -> Option<Vec<usize>> {
    if a.order() != b.order() || a.class_profile() != b.class_profile() {
        return None;
    }
    let n = a.order();
    // BFS tree of `a` in terms of generator indices
    let mut parent = vec![usize::MAX; n];
    let mut via = vec![usize::MAX; n];
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut order = vec![0usize];
    let mut q = VecDeque::from([0usize]);
    while let Some(x) = q.pop_front() {
        for (k, &s) in a.gen_idx.iter().enumerate() {
            let y = a.mul(x, s);
            if !seen[y] {
                seen[y] = true;
                parent[y] = x;
                via[y] = k;
                order.push(y);
                q.push_back(y);
            }
        }
    }
    let candidates: Vec<Vec<usize>> = a
        .gen_idx
        .iter()
        .map(|&s| (0..n).filter(|&t| b.orders[t] == a.orders[s]).collect())
        .collect();
    let mut choice = vec![0usize; a.gen_idx.len()];
    loop {
        let images: Vec<usize> = choice
            .iter()
            .enumerate()
            .map(|(k, &c)| candidates[k][c])
            .collect();
        if let Some(phi) = extend_hom(a, b, &images, &parent, &via, &order) {
            return Some(phi);
        }
        // odometer
        let mut k = 0;
        loop {
            if k == choice.len() {
                return None;
            }
            choice[k] += 1;
            if choice[k] < candidates[k].len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

fn extend_hom(
    a: &FiniteGroup,
    b: &FiniteGroup,
    images: &[usize],
    parent: &[usize],
    via: &[usize],
    order: &[usize],
) -> Option<Vec<usize>> {
    let n = a.order();
    let mut phi = vec![usize::MAX; n];
    phi[0] = 0;
    let mut hit = vec![false; n];
    hit[0] = true;
    for &y in &order[1..] {
        let v = b.mul(phi[parent[y]], images[via[y]]);
        if hit[v] {
            return None;
        }
        hit[v] = true;
        phi[y] = v;
    }
    for x in 0..n {
        for (k, &s) in a.gen_idx.iter().enumerate() {
            if phi[a.mul(x, s)] != b.mul(phi[x], images[k]) {
                return None;
            }
        }
    }
    Some(phi)
}

/// Looks for an invertible C with C·h·C⁻¹ ∈ G for every element h of H.
/// Used when two catalog groups are related by an inclusion that only holds
/// up to conjugacy in the ambient group.
pub fn find_conjugate_embedding(h: &FiniteGroup, g: &FiniteGroup) -> Option<GradedMatrix> {
    if h.dim != g.dim || !g.order().is_multiple_of(h.order()) {
        return None;
    }
    let hg: Vec<usize> = h.gen_idx.clone();
    let signature = |grp: &FiniteGroup, i: usize| {
        let e = &grp.elements[i];
        (grp.orders[i], e.flag(), e.trace(), e.det())
    };
    let cands: Vec<Vec<usize>> = hg
        .iter()
        .enumerate()
        .map(|(k, &x)| {
            let sig = signature(h, x);
            let pool: Vec<usize> = if k == 0 {
                g.classes.iter().map(|c| c.rep).collect()
            } else {
                (0..g.order()).collect()
            };
            pool.into_iter().filter(|&y| signature(g, y) == sig).collect()
        })
        .collect();
    // traces of pairwise products must agree
    let pair_trace_h: Vec<Vec<Cyc>> = hg
        .iter()
        .map(|&x| hg.iter().map(|&y| h.elements[h.mul(x, y)].trace()).collect())
        .collect();
    let mut chosen: Vec<usize> = Vec::new();
    search_images(h, g, &hg, &cands, &pair_trace_h, &mut chosen)
}

fn search_images(
    h: &FiniteGroup,
    g: &FiniteGroup,
    hg: &[usize],
    cands: &[Vec<usize>],
    pair_trace_h: &[Vec<Cyc>],
    chosen: &mut Vec<usize>,
) -> Option<GradedMatrix> {
    let k = chosen.len();
    if k == hg.len() {
        let hs: Vec<&GradedMatrix> = hg.iter().map(|&x| &h.elements[x]).collect();
        let gs: Vec<&GradedMatrix> = chosen.iter().map(|&y| &g.elements[y]).collect();
        let c = intertwiner(&hs, &gs)?;
        let cinv = c.inverse().ok()?;
        let ok = h
            .elements
            .iter()
            .all(|e| g.contains(&c.mul(e).mul(&cinv)));
        return ok.then_some(c);
    }
    for &y in &cands[k] {
        let consistent = (0..k).all(|j| {
            g.elements[g.mul(chosen[j], y)].trace() == pair_trace_h[j][k]
                && g.elements[g.mul(y, chosen[j])].trace() == pair_trace_h[k][j]
        });
        if !consistent {
            continue;
        }
        chosen.push(y);
        if let Some(c) = search_images(h, g, hg, cands, pair_trace_h, chosen) {
            return Some(c);
        }
        chosen.pop();
    }
    None
}

/// An invertible C with C·a_i = b_i·C for all i, if the solution space
/// contains one reachable by small integer combinations of a basis.
fn intertwiner(a: &[&GradedMatrix], b: &[&GradedMatrix]) -> Option<GradedMatrix> {
    let n = a[0].dim();
    let nn = n * n;
    // unknown c_{pq} at position p*n+q; equation (C a - b C)_{rs} = 0
    let mut rows: Vec<Vec<Cyc>> = Vec::new();
    for (x, y) in a.iter().zip(b) {
        for r in 0..n {
            for s in 0..n {
                let mut row = vec![Cyc::from_int(0); nn];
                for t in 0..n {
                    // (C a)_{rs} = Σ_t c_{rt} a_{ts}
                    row[r * n + t] = row[r * n + t].add_ref(x.get(t, s));
                    // (b C)_{rs} = Σ_t b_{rt} c_{ts}
                    row[t * n + s] = row[t * n + s].sub_ref(y.get(r, t));
                }
                rows.push(row);
            }
        }
    }
    let basis = nullspace(rows, nn);
    if basis.is_empty() {
        return None;
    }
    let to_matrix = |v: &[Cyc]| {
        GradedMatrix::plain(v.chunks(n).map(|r| r.to_vec()).collect())
    };
    for v in &basis {
        let m = to_matrix(v);
        if !m.det().is_zero() {
            return Some(m);
        }
    }
    // small integer combinations
    let coeffs = [1i64, 2, -1, 3, -2, 5];
    for trial in 0..64usize {
        let mut v = vec![Cyc::from_int(0); nn];
        for (j, b) in basis.iter().enumerate() {
            let c = Cyc::from_int(coeffs[(trial / (j + 1) + j * 7) % coeffs.len()]);
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi = vi.add_ref(&bi.mul_ref(&c));
            }
        }
        let m = to_matrix(&v);
        if !m.det().is_zero() {
            return Some(m);
        }
    }
    None
}

/// Basis of {x : rows·x = 0} by Gauss–Jordan elimination over Q(ζ).
pub fn nullspace(mut rows: Vec<Vec<Cyc>>, ncols: usize) -> Vec<Vec<Cyc>> {
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].inv().expect("nonzero pivot");
        rows[r] = rows[r].iter().map(|x| x.mul_ref(&inv)).collect();
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                let pivot_row = rows[r].clone();
                for (x, p) in rows[i].iter_mut().zip(&pivot_row) {
                    *x = x.sub_ref(&p.mul_ref(&f));
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Cyc::from_int(0); ncols];
            v[f] = Cyc::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = rows[i][f].neg_ref();
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(n: i64) -> Cyc {
        Cyc::from_int(n)
    }

    fn z(m: u64, k: i64) -> Cyc {
        Cyc::root(m, k)
    }

    /// Quaternion group as ⟨diag(i, -i), [[0, 1], [-1, 0]]⟩.
    fn q8() -> FiniteGroup {
        let a = GradedMatrix::diag(vec![z(4, 1), z(4, 3)]);
        let b = GradedMatrix::plain(vec![vec![c(0), c(1)], vec![c(-1), c(0)]]);
        generate(&[a, b]).unwrap()
    }

    fn cyclic(n: u64) -> FiniteGroup {
        generate(&[GradedMatrix::diag(vec![z(n, 1), z(n, -1)])]).unwrap()
    }

    #[test]
    fn trivial_group() {
        let g = generate(&[GradedMatrix::identity(2)]).unwrap();
        assert_eq!(g.order(), 1);
        assert_eq!(g.classes().len(), 1);
        assert_eq!(g.class_profile(), vec![(1, 1)]);
    }

    #[test]
    fn quaternion_group() {
        let g = q8();
        assert_eq!(g.order(), 8);
        assert_eq!(
            g.class_profile(),
            vec![(1, 1), (2, 1), (4, 2), (4, 2), (4, 2)]
        );
        assert_eq!(g.power_class_map(1), (0..5).collect::<Vec<_>>());
        let sq = g.power_class_map(2);
        assert_eq!(sq[1], 0);
        assert!(sq[2..].iter().all(|&k| k == 1));
    }

    #[test]
    fn closure_and_inverses() {
        let g = q8();
        for i in 0..g.order() {
            assert_eq!(g.mul(i, g.inv(i)), 0);
            for j in 0..g.order() {
                let p = g.element(i).mul(g.element(j));
                assert_eq!(g.locate(&p), Some(g.mul(i, j)));
            }
        }
    }

    #[test]
    fn generator_order_does_not_matter() {
        let a = GradedMatrix::diag(vec![z(4, 1), z(4, 3)]);
        let b = GradedMatrix::plain(vec![vec![c(0), c(1)], vec![c(-1), c(0)]]);
        let g1 = generate(&[a.clone(), b.clone()]).unwrap();
        let g2 = generate(&[b, a]).unwrap();
        let mut k1: Vec<_> = (0..8).map(|i| g1.key(i).clone()).collect();
        let mut k2: Vec<_> = (0..8).map(|i| g2.key(i).clone()).collect();
        k1.sort();
        k2.sort();
        assert_eq!(k1, k2);
    }

    #[test]
    fn cap_and_bad_generators() {
        let infinite = GradedMatrix::plain(vec![vec![c(1), c(1)], vec![c(0), c(1)]]);
        assert_eq!(
            generate_capped(&[infinite], 50).unwrap_err(),
            GroupError::TooLarge { cap: 50 }
        );
        let singular = GradedMatrix::plain(vec![vec![c(1), c(1)], vec![c(1), c(1)]]);
        assert!(matches!(
            generate(&[singular]),
            Err(GroupError::BadGenerator(_))
        ));
    }

    #[test]
    fn subgroups_and_index() {
        let g = q8();
        let h = cyclic(4);
        assert!(is_subgroup(&h, &g));
        assert!(is_normal(&h, &g));
        assert_eq!(index(&h, &g).unwrap(), 2);
        assert_eq!(index(&g, &g).unwrap(), 1);
        let k = cyclic(8);
        assert!(!is_subgroup(&k, &g));
        assert!(index(&k, &g).is_err());
    }

    #[test]
    fn conjugation_action() {
        let g = cyclic(3);
        let id = GradedMatrix::identity(2);
        assert_eq!(g.conjugation_class_action(&id).unwrap(), vec![0, 1, 2]);
        let swap = GradedMatrix::plain(vec![vec![c(0), c(1)], vec![c(-1), c(0)]]);
        let act = g.conjugation_class_action(&swap).unwrap();
        assert_eq!(act, vec![0, 2, 1]);
        let bad = GradedMatrix::plain(vec![vec![c(1), c(1)], vec![c(0), c(1)]]);
        assert!(g.conjugation_class_action(&bad).is_err());
    }

    #[test]
    fn flags_multiply() {
        let x = GradedMatrix::flag_element(2);
        let g = generate(&[x.clone(), GradedMatrix::scalar(2, c(-1))]).unwrap();
        assert_eq!(g.order(), 4);
        assert!(x.mul(&x).is_identity());
    }

    #[test]
    fn conjugate_embedding_found() {
        // ⟨diag(i,-i)⟩ and ⟨[[0,1],[-1,0]]⟩ are conjugate inside Q8's normalizer
        let h = generate(&[GradedMatrix::plain(vec![
            vec![c(0), z(4, 1)],
            vec![z(4, 1), c(0)],
        ])])
        .unwrap();
        let g = cyclic(4);
        assert!(!is_subgroup(&h, &g));
        let cm = find_conjugate_embedding(&h, &g).unwrap();
        let cinv = cm.inverse().unwrap();
        for e in h.elements() {
            assert!(g.contains(&cm.mul(e).mul(&cinv)));
        }
    }

    #[test]
    fn isomorphism_search() {
        let a = q8();
        let b = generate(&[
            GradedMatrix::plain(vec![vec![c(0), c(1)], vec![c(-1), c(0)]]),
            GradedMatrix::diag(vec![z(4, 1), z(4, 3)]),
        ])
        .unwrap();
        let phi = find_isomorphism(&a, &b).unwrap();
        for i in 0..8 {
            for j in 0..8 {
                assert_eq!(phi[a.mul(i, j)], b.mul(phi[i], phi[j]));
            }
        }
        assert!(find_isomorphism(&a, &cyclic(8)).is_none());
    }

    #[test]
    fn inverse_3x3() {
        let m = GradedMatrix::plain(vec![
            vec![c(2), c(0), c(1)],
            vec![c(1), c(3), c(0)],
            vec![c(0), c(1), c(1)],
        ]);
        assert!(m.mul(&m.inverse().unwrap()).is_identity());
    }
}
