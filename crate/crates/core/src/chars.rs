//! Character tables by Dixon's method, tensor decomposition and the
//! natural 2-dimensional character.
//!
//! Class sums act on the centre of the group algebra; their common
//! eigenvectors modulo a prime p ≡ 1 (mod exponent) are the central
//! characters. Character values are recovered mod p and then lifted to
//! Q(ζ_e) through the eigenvalue multiplicities of each class
//! representative.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::ToPrimitive;
use thiserror::Error;

use crate::grp::FiniteGroup;
use crate::Cyc;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CharError {
    #[error("Dixon splitting failed for every prime tried")]
    SplitFailed,
    #[error("inconsistent character data: {0}")]
    Inconsistent(String),
}

#[derive(Clone, Debug)]
pub struct CharacterTable {
    pub group_order: usize,
    pub class_sizes: Vec<usize>,
    pub class_orders: Vec<usize>,
    /// Class of g⁻¹ for g in each class.
    pub inverse_class: Vec<usize>,
    /// Class of g² for g in each class.
    pub square_class: Vec<usize>,
    /// chars[i][c] = χ_i on class c; row 0 is the trivial character.
    pub chars: Vec<Vec<Cyc>>,
    pub degrees: Vec<usize>,
    pub exponent: usize,
    pub prime: u64,
}

fn mod_pow(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn mod_inv(a: u64, p: u64) -> u64 {
    mod_pow(a, p - 2, p)
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// Primes p ≡ 1 (mod e) with p > 2√order, in increasing order.
fn admissible_primes(e: u64, order: u64) -> impl Iterator<Item = u64> {
    (1..)
        .map(move |k| k * e + 1)
        .filter(move |&p| p * p > 4 * order && is_prime(p))
}

/// An element of multiplicative order exactly e mod p.
fn root_of_unity_mod(e: u64, p: u64) -> u64 {
    let factors: Vec<u64> = (2..p).filter(|&q| (p - 1).is_multiple_of(q) && is_prime(q)).collect();
    let g = (2..p)
        .find(|&g| factors.iter().all(|&q| mod_pow(g, (p - 1) / q, p) != 1))
        .expect("primitive root exists");
    mod_pow(g, (p - 1) / e, p)
}

/// Left nullspace of a square matrix mod p: row vectors c with c·m = 0.
fn left_nullspace(m: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let d = m.len();
    // transpose, then ordinary right nullspace
    let mut a: Vec<Vec<u64>> = (0..d).map(|i| (0..d).map(|j| m[j][i]).collect()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..d {
        let Some(piv) = (r..d).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(r, piv);
        let inv = mod_inv(a[r][c], p);
        for x in a[r].iter_mut() {
            *x = *x * inv % p;
        }
        for i in 0..d {
            if i != r && a[i][c] != 0 {
                let f = a[i][c];
                for j in 0..d {
                    a[i][j] = (a[i][j] + p - f * a[r][j] % p) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (0..d)
        .filter(|c| !pivots.contains(c))
        .map(|f| {
            let mut v = vec![0u64; d];
            v[f] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = (p - a[i][f]) % p;
            }
            v
        })
        .collect()
}

/// Row-reduces a set of vectors; returns the basis and its pivot columns.
fn rref(mut rows: Vec<Vec<u64>>, p: u64) -> (Vec<Vec<u64>>, Vec<usize>) {
    let n = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(piv) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, piv);
        let inv = mod_inv(rows[r][c], p);
        for x in rows[r].iter_mut() {
            *x = *x * inv % p;
        }
        for i in 0..rows.len() {
            if i != r && rows[i][c] != 0 {
                let f = rows[i][c];
                for j in 0..n {
                    rows[i][j] = (rows[i][j] + p - f * rows[r][j] % p) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    (rows, pivots)
}

struct Modular {
    p: u64,
    z: u64,
    /// values[i][c] = χ_i(c) mod p
    values: Vec<Vec<u64>>,
    degrees: Vec<usize>,
}

/// a[j][k][l] = #{x ∈ C_j : x⁻¹·z_l ∈ C_k} for the representative z_l.
fn structure_constants(g: &FiniteGroup) -> Vec<Vec<Vec<u64>>> {
    let r = g.classes().len();
    let mut a = vec![vec![vec![0u64; r]; r]; r];
    for (l, cl) in g.classes().iter().enumerate() {
        for x in 0..g.order() {
            let j = g.class_of(x);
            let k = g.class_of(g.mul(g.inv(x), cl.rep));
            a[j][k][l] += 1;
        }
    }
    a
}

fn dixon_mod_p(
    g: &FiniteGroup,
    a: &[Vec<Vec<u64>>],
    e: u64,
    p: u64,
    inverse_class: &[usize],
) -> Option<Modular> {
    let r = a.len();
    let order = g.order() as u64;
    let mut spaces: Vec<Vec<Vec<u64>>> = vec![(0..r)
        .map(|i| {
            let mut v = vec![0u64; r];
            v[i] = 1;
            v
        })
        .collect()];
    for j in 1..r {
        if spaces.iter().all(|s| s.len() == 1) {
            break;
        }
        let mut next = Vec::new();
        for basis in spaces {
            if basis.len() == 1 {
                next.push(basis);
                continue;
            }
            let (basis, piv) = rref(basis, p);
            let d = basis.len();
            // image of each basis vector under M_j, in basis coordinates
            let rmat: Vec<Vec<u64>> = basis
                .iter()
                .map(|v| {
                    let w: Vec<u64> = (0..r)
                        .map(|k| (0..r).map(|l| a[j][k][l] * v[l] % p).sum::<u64>() % p)
                        .collect();
                    piv.iter().map(|&pc| w[pc]).collect()
                })
                .collect();
            let mut found = 0;
            for lam in 0..p {
                let shifted: Vec<Vec<u64>> = (0..d)
                    .map(|t| {
                        (0..d)
                            .map(|s| {
                                if s == t {
                                    (rmat[t][s] + p - lam) % p
                                } else {
                                    rmat[t][s]
                                }
                            })
                            .collect()
                    })
                    .collect();
                let ns = left_nullspace(&shifted, p);
                if ns.is_empty() {
                    continue;
                }
                found += ns.len();
                let sub: Vec<Vec<u64>> = ns
                    .iter()
                    .map(|c| {
                        (0..r)
                            .map(|k| (0..d).map(|t| c[t] * basis[t][k] % p).sum::<u64>() % p)
                            .collect()
                    })
                    .collect();
                next.push(sub);
                if found == d {
                    break;
                }
            }
            if found != d {
                return None;
            }
        }
        spaces = next;
    }
    if spaces.iter().any(|s| s.len() != 1) {
        return None;
    }
    let sizes: Vec<u64> = g.classes().iter().map(|c| c.size as u64).collect();
    let mut values = Vec::with_capacity(r);
    let mut degrees = Vec::with_capacity(r);
    for s in spaces {
        let v = &s[0];
        if v[0] == 0 {
            return None;
        }
        let inv0 = mod_inv(v[0], p);
        let omega: Vec<u64> = v.iter().map(|x| x * inv0 % p).collect();
        let sum = (0..r)
            .map(|k| omega[k] * omega[inverse_class[k]] % p * mod_inv(sizes[k] % p, p) % p)
            .sum::<u64>()
            % p;
        if sum == 0 {
            return None;
        }
        let d2 = order % p * mod_inv(sum, p) % p;
        let d = (1..=order).take_while(|d| d * d <= order).find(|d| d * d % p == d2)?;
        degrees.push(d as usize);
        values.push(
            (0..r)
                .map(|k| d % p * omega[k] % p * mod_inv(sizes[k] % p, p) % p)
                .collect(),
        );
    }
    Some(Modular {
        p,
        z: root_of_unity_mod(e, p),
        values,
        degrees,
    })
}

/// Lifts χ mod p to Q(ζ_e) through eigenvalue multiplicities.
fn lift(
    g: &FiniteGroup,
    m: &Modular,
    e: u64,
    power_maps: &[Vec<usize>],
) -> Option<Vec<Vec<Cyc>>> {
    let p = m.p;
    let inv_e = mod_inv(e % p, p);
    let mut rows = Vec::with_capacity(m.values.len());
    for (vals, &deg) in m.values.iter().zip(&m.degrees) {
        let mut row = Vec::with_capacity(vals.len());
        for k in 0..g.classes().len() {
            let mut coeffs = Vec::new();
            let mut total = 0u64;
            for j in 0..e {
                let mut s = 0u64;
                for l in 0..e {
                    let val = vals[power_maps[l as usize][k]];
                    let zz = mod_pow(m.z, (e - (j * l) % e) % e, p);
                    s = (s + val * zz) % p;
                }
                let mult = s * inv_e % p;
                if mult > deg as u64 {
                    return None;
                }
                total += mult;
                if mult > 0 {
                    coeffs.push((j as i64, crate::cyclo::q(mult as i64, 1)));
                }
            }
            if total != deg as u64 {
                return None;
            }
            row.push(Cyc::from_exponent_sum(e, &coeffs));
        }
        rows.push(row);
    }
    Some(rows)
}

fn row_cmp(a: &[Cyc], b: &[Cyc]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        let o = x.canonical_cmp(y);
        if o != Ordering::Equal {
            return o;
        }
    }
    Ordering::Equal
}

/// Complete character table of `g`.
pub fn character_table(g: &FiniteGroup) -> Result<CharacterTable, CharError> {
    let r = g.classes().len();
    let e = g.exponent() as u64;
    let inverse_class = g.power_class_map(-1);
    let power_maps: Vec<Vec<usize>> = (0..e as i64).map(|l| g.power_class_map(l)).collect();
    let a = structure_constants(g);
    for p in admissible_primes(e, g.order() as u64).take(12) {
        let Some(m) = dixon_mod_p(g, &a, e, p, &inverse_class) else {
            continue;
        };
        let Some(rows) = lift(g, &m, e, &power_maps) else {
            continue;
        };
        let mut rows: Vec<(usize, Vec<Cyc>)> = m.degrees.iter().copied().zip(rows).collect();
        rows.sort_by(|(da, ra), (db, rb)| {
            let trivial = |r: &[Cyc]| r.iter().all(Cyc::is_one);
            trivial(rb)
                .cmp(&trivial(ra))
                .then(da.cmp(db))
                .then_with(|| row_cmp(ra, rb))
        });
        let table = CharacterTable {
            group_order: g.order(),
            class_sizes: g.classes().iter().map(|c| c.size).collect(),
            class_orders: g.classes().iter().map(|c| c.order).collect(),
            inverse_class: inverse_class.clone(),
            square_class: g.power_class_map(2),
            degrees: rows.iter().map(|(d, _)| *d).collect(),
            chars: rows.into_iter().map(|(_, r)| r).collect(),
            exponent: e as usize,
            prime: p,
        };
        debug_assert_eq!(table.chars.len(), r);
        return Ok(table);
    }
    Err(CharError::SplitFailed)
}

type TableCache = Mutex<HashMap<usize, (Arc<FiniteGroup>, Arc<CharacterTable>)>>;

fn table_cache() -> &'static TableCache {
    static CACHE: OnceLock<TableCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Memoized [`character_table`] keyed by group identity.
pub fn table_of(g: &Arc<FiniteGroup>) -> Result<Arc<CharacterTable>, CharError> {
    let key = Arc::as_ptr(g) as usize;
    if let Some((_, t)) = table_cache().lock().unwrap().get(&key) {
        return Ok(t.clone());
    }
    let t = Arc::new(character_table(g)?);
    table_cache()
        .lock()
        .unwrap()
        .insert(key, (g.clone(), t.clone()));
    Ok(t)
}

impl CharacterTable {
    pub fn num_classes(&self) -> usize {
        self.class_sizes.len()
    }

    /// (1/|G|) Σ_c |c|·a(c)·conj(b(c)).
    pub fn inner(&self, a: &[Cyc], b: &[Cyc]) -> Cyc {
        let mut s = Cyc::from_int(0);
        for c in 0..self.num_classes() {
            let term = a[c].mul_ref(&b[c].conj());
            s = s.add_ref(&term.scale(&crate::cyclo::q(self.class_sizes[c] as i64, 1)));
        }
        s.scale(&crate::cyclo::q(1, self.group_order as i64))
    }

    /// Multiplicities of each irreducible in a class function.
    pub fn decompose(&self, f: &[Cyc]) -> Result<Vec<i64>, CharError> {
        self.chars
            .iter()
            .map(|chi| {
                let v = self.inner(f, chi);
                let q = v.as_rational().ok_or_else(|| {
                    CharError::Inconsistent(format!("non-rational multiplicity {v}"))
                })?;
                if !q.is_integer() {
                    return Err(CharError::Inconsistent(format!("non-integral multiplicity {v}")));
                }
                q.to_integer()
                    .to_i64()
                    .ok_or_else(|| CharError::Inconsistent("multiplicity overflow".into()))
            })
            .collect()
    }

    pub fn product(&self, i: usize, j: usize) -> Vec<Cyc> {
        self.chars[i]
            .iter()
            .zip(&self.chars[j])
            .map(|(a, b)| a.mul_ref(b))
            .collect()
    }

    /// Multiplicity of each row in χ_i ⊗ χ_j.
    pub fn tensor_decompose(&self, i: usize, j: usize) -> Result<Vec<i64>, CharError> {
        let m = self.decompose(&self.product(i, j))?;
        if m.iter().any(|&x| x < 0) {
            return Err(CharError::Inconsistent(format!("negative multiplicity in χ{i}⊗χ{j}")));
        }
        let total: i64 = m.iter().zip(&self.degrees).map(|(a, &d)| a * d as i64).sum();
        if total != (self.degrees[i] * self.degrees[j]) as i64 {
            return Err(CharError::Inconsistent("degree mismatch in tensor product".into()));
        }
        Ok(m)
    }

    /// Checks row orthogonality, column orthogonality and Σd² = |G| exactly.
    pub fn verify(&self) -> Result<(), CharError> {
        let r = self.num_classes();
        if self.chars.len() != r {
            return Err(CharError::Inconsistent("table is not square".into()));
        }
        let dsum: usize = self.degrees.iter().map(|d| d * d).sum();
        if dsum != self.group_order {
            return Err(CharError::Inconsistent(format!("Σd² = {dsum} ≠ |G|")));
        }
        for i in 0..r {
            for j in i..r {
                let v = self.inner(&self.chars[i], &self.chars[j]);
                let want = if i == j { Cyc::one() } else { Cyc::from_int(0) };
                if v != want {
                    return Err(CharError::Inconsistent(format!("<χ{i},χ{j}> = {v}")));
                }
            }
        }
        for c in 0..r {
            for c2 in c..r {
                let mut s = Cyc::from_int(0);
                for row in &self.chars {
                    s = s.add_ref(&row[c].mul_ref(&row[c2].conj()));
                }
                let want = if c == c2 {
                    Cyc::from_int((self.group_order / self.class_sizes[c]) as i64)
                } else {
                    Cyc::from_int(0)
                };
                if s != want {
                    return Err(CharError::Inconsistent(format!("column {c},{c2} sum {s}")));
                }
            }
        }
        Ok(())
    }
}

/// The defining 2-dimensional character and its decomposition.
#[derive(Clone, Debug)]
pub struct NaturalCharacter {
    pub values: Vec<Cyc>,
    pub decomposition: Vec<i64>,
    /// Set when the natural character is irreducible.
    pub row: Option<usize>,
}

/// Trace of the matrix part of each class representative; the Pin₊ sign
/// flag does not enter the defining representation.
pub fn natural_character(g: &FiniteGroup, t: &CharacterTable) -> Result<NaturalCharacter, CharError> {
    let values: Vec<Cyc> = g
        .classes()
        .iter()
        .map(|c| g.element(c.rep).trace())
        .collect();
    let decomposition = t.decompose(&values)?;
    let row = match decomposition.iter().filter(|&&m| m != 0).count() {
        1 => decomposition.iter().position(|&m| m == 1),
        _ => None,
    };
    Ok(NaturalCharacter {
        values,
        decomposition,
        row,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{self, Family, GroupSpec};

    fn table(spec: &str) -> (Arc<FiniteGroup>, CharacterTable) {
        let g = catalog::build(&spec.parse::<GroupSpec>().unwrap()).unwrap();
        let t = character_table(&g).unwrap();
        (g, t)
    }

    #[test]
    fn cyclic_two() {
        let (_, t) = table("C_2");
        assert_eq!(t.chars.len(), 2);
        assert!(t.chars[0].iter().all(Cyc::is_one));
        assert_eq!(t.chars[1], vec![Cyc::from_int(1), Cyc::from_int(-1)]);
    }

    #[test]
    fn quaternion_table() {
        let (_, t) = table("BD_8");
        t.verify().unwrap();
        assert_eq!(t.degrees, vec![1, 1, 1, 1, 2]);
        let two = &t.chars[4];
        let want: Vec<Cyc> = [2, -2, 0, 0, 0].iter().map(|&x| Cyc::from_int(x)).collect();
        assert_eq!(two, &want);
    }

    #[test]
    fn modular_helpers() {
        assert!(is_prime(97) && !is_prime(91));
        let p = admissible_primes(12, 24).next().unwrap();
        assert_eq!(p, 13);
        let z = root_of_unity_mod(12, p);
        assert_eq!(mod_pow(z, 12, p), 1);
        assert!((1..12).all(|k| mod_pow(z, k, p) != 1));
    }

    #[test]
    fn binary_tetrahedral_natural_character() {
        let (g, t) = table("BT_24");
        t.verify().unwrap();
        let nat = natural_character(&g, &t).unwrap();
        let row = nat.row.unwrap();
        assert_eq!(t.degrees[row], 2);
    }

    #[test]
    fn cyclic_natural_character_splits() {
        for n in 3..6 {
            let (g, t) = table(&format!("C_{n}"));
            let nat = natural_character(&g, &t).unwrap();
            assert_eq!(nat.row, None);
            assert_eq!(nat.decomposition.iter().sum::<i64>(), 2);
        }
        let (g, t) = table("C_1");
        assert_eq!(natural_character(&g, &t).unwrap().decomposition, vec![2]);
    }

    #[test]
    fn tensor_with_trivial_is_identity() {
        let (_, t) = table("BO_48");
        for i in 0..t.chars.len() {
            let m = t.tensor_decompose(i, 0).unwrap();
            let mut e = vec![0; t.chars.len()];
            e[i] = 1;
            assert_eq!(m, e);
        }
    }

    #[test]
    fn deterministic() {
        let g = catalog::build(&GroupSpec::new(Family::BD, 5)).unwrap();
        let a = character_table(&g).unwrap();
        let b = character_table(&g).unwrap();
        assert_eq!(a.chars, b.chars);
        assert_eq!(a.prime, b.prime);
    }
}
