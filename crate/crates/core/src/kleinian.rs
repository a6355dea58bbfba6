//! Invariants of the binary dihedral group acting on C[u, v] and the
//! relation between them.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::catalog::{self, CatalogError, Family, GroupSpec};
use crate::grp::{GradedMatrix, GroupError};
use crate::Cyc;

/// Polynomial in u, v keyed by (deg_u, deg_v); zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct BiPoly {
    terms: BTreeMap<(u32, u32), Cyc>,
}

impl BiPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(c: Cyc, du: u32, dv: u32) -> Self {
        let mut p = Self::zero();
        p.add_term((du, dv), c);
        p
    }

    pub fn u() -> Self {
        Self::monomial(Cyc::one(), 1, 0)
    }

    pub fn v() -> Self {
        Self::monomial(Cyc::one(), 0, 1)
    }

    pub fn constant(c: Cyc) -> Self {
        Self::monomial(c, 0, 0)
    }

    fn add_term(&mut self, k: (u32, u32), c: Cyc) {
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.remove(&k) {
            Some(old) => old + c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(k, sum);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Cyc)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|(a, b)| a + b).max()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut p = self.clone();
        for (&k, c) in &o.terms {
            p.add_term(k, c.clone());
        }
        p
    }

    pub fn scale(&self, s: &Cyc) -> Self {
        let mut p = Self::zero();
        for (&k, c) in &self.terms {
            p.add_term(k, c.mul_ref(s));
        }
        p
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&Cyc::from_int(-1)))
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut p = Self::zero();
        for (&(a, b), c) in &self.terms {
            for (&(x, y), d) in &o.terms {
                p.add_term((a + x, b + y), c.mul_ref(d));
            }
        }
        p
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::constant(Cyc::one()), |acc, _| acc.mul(self))
    }

    /// Substitutes u ↦ a, v ↦ b.
    pub fn substitute(&self, a: &Self, b: &Self) -> Self {
        let mut out = Self::zero();
        let mut pa: Vec<Self> = vec![Self::constant(Cyc::one())];
        let mut pb: Vec<Self> = vec![Self::constant(Cyc::one())];
        for (&(du, dv), c) in &self.terms {
            while pa.len() <= du as usize {
                let next = pa.last().unwrap().mul(a);
                pa.push(next);
            }
            while pb.len() <= dv as usize {
                let next = pb.last().unwrap().mul(b);
                pb.push(next);
            }
            out = out.add(&pa[du as usize].mul(&pb[dv as usize]).scale(c));
        }
        out
    }
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mono = |d: u32, x: &str| match d {
            0 => String::new(),
            1 => x.to_string(),
            _ => format!("{x}^{d}"),
        };
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(&(a, b), c)| {
                let m = format!("{}{}", mono(a, "u"), mono(b, "v"));
                match (m.is_empty(), c.to_string().as_str()) {
                    (true, s) => s.to_string(),
                    (false, "1") => m,
                    (false, "-1") => format!("-{m}"),
                    (false, s) => format!("({s}){m}"),
                }
            })
            .collect();
        let mut out = String::new();
        for (k, p) in parts.iter().enumerate() {
            match (k, p.strip_prefix('-')) {
                (0, _) => out.push_str(p),
                (_, Some(rest)) => out.push_str(&format!(" - {rest}")),
                (_, None) => out.push_str(&format!(" + {p}")),
            }
        }
        f.write_str(&out)
    }
}

/// Action of g on functions: p ↦ p ∘ g⁻¹, so act(gh) = act(g) ∘ act(h).
pub fn act(g: &GradedMatrix, p: &BiPoly) -> Result<BiPoly, GroupError> {
    if g.dim() != 2 {
        return Err(GroupError::DimensionMismatch(g.dim(), 2));
    }
    let m = g.inverse()?;
    let lin = |r: usize| {
        BiPoly::u()
            .scale(m.get(r, 0))
            .add(&BiPoly::v().scale(m.get(r, 1)))
    };
    Ok(p.substitute(&lin(0), &lin(1)))
}

/// x = uv(u^{2n} − v^{2n}), y = u^{2n} + v^{2n}, z = (uv)².
pub fn bd_invariants(n: u32) -> (BiPoly, BiPoly, BiPoly) {
    let one = Cyc::one();
    let un = BiPoly::monomial(one.clone(), 2 * n, 0);
    let vn = BiPoly::monomial(one.clone(), 0, 2 * n);
    let uv = BiPoly::monomial(one.clone(), 1, 1);
    (uv.mul(&un.sub(&vn)), un.add(&vn), uv.pow(2))
}

#[derive(Clone, Debug, Serialize)]
pub struct SyzygyReport {
    pub n: u32,
    pub group: String,
    pub group_order: usize,
    /// Generators x, y, z fixed by every group element.
    pub invariant: [bool; 3],
    /// k with x² − z·y² + 4·z^k = 0, if the remainder has that shape.
    pub exponent: Option<u32>,
    pub holds: bool,
    /// x′ = x/2, y′ = (i/2)·y, z′ = z turn the relation into x′² + y′²z′ + z′^k.
    pub rescaled: String,
    pub rescaled_holds: bool,
    /// Whether the rescaled relation also vanishes with exponent n.
    pub holds_with_exponent_n: bool,
}

fn is_power_of_z(p: &BiPoly, coeff: &Cyc) -> Option<u32> {
    let mut it = p.terms();
    match (it.next(), it.next()) {
        (Some((&(a, b), c)), None) if a == b && a % 2 == 0 && c == coeff => Some(a / 2),
        _ => None,
    }
}

pub fn check_syzygy(n: u32) -> Result<SyzygyReport, CatalogError> {
    let spec = GroupSpec::new(Family::BD, n);
    let g = catalog::build(&spec)?;
    let (x, y, z) = bd_invariants(n);
    let mut invariant = [true; 3];
    for e in g.elements() {
        for (k, p) in [&x, &y, &z].into_iter().enumerate() {
            if invariant[k] && act(e, p)? != *p {
                invariant[k] = false;
            }
        }
    }
    let rest = x.pow(2).sub(&z.mul(&y.pow(2)));
    let exponent = is_power_of_z(&rest, &Cyc::from_int(-4));
    let k = exponent.unwrap_or(n + 1);
    let relation = rest.add(&z.pow(k).scale(&Cyc::from_int(4)));
    let xs = x.scale(&Cyc::from_frac(1, 2));
    let ys = y.scale(&crate::cyclo::parse("1/2*i").expect("literal"));
    let monic = |e: u32| xs.pow(2).add(&ys.pow(2).mul(&z)).add(&z.pow(e));
    Ok(SyzygyReport {
        n,
        group: spec.to_string(),
        group_order: g.order(),
        invariant,
        exponent,
        holds: relation.is_zero(),
        rescaled: format!("x'^2 + y'^2 z' + z'^{k} = 0 with x' = x/2, y' = (i/2) y, z' = z"),
        rescaled_holds: monic(k).is_zero(),
        holds_with_exponent_n: monic(n).is_zero(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::su2;

    #[test]
    fn identity_and_generators() {
        let (x, _, _) = bd_invariants(2);
        assert_eq!(act(&GradedMatrix::identity(2), &x).unwrap(), x);
        let uv = BiPoly::monomial(Cyc::one(), 1, 1);
        assert_eq!(act(&su2::b(), &uv).unwrap(), uv.scale(&Cyc::from_int(-1)));
        let u4 = BiPoly::monomial(Cyc::one(), 4, 0);
        assert_eq!(act(&su2::a(4), &u4).unwrap(), u4);
    }

    #[test]
    fn degrees() {
        let (x, y, z) = bd_invariants(1);
        assert_eq!(x.degree(), Some(4));
        assert_eq!(y.degree(), Some(2));
        assert_eq!(z.degree(), Some(4));
        assert_eq!(x.pow(2).degree(), z.pow(2).degree());
    }

    #[test]
    fn action_is_a_homomorphism() {
        let (x, y, _) = bd_invariants(2);
        let p = x.add(&BiPoly::u().mul(&y));
        let (g, h) = (su2::a(8), su2::y());
        let gh = g.mul(&h);
        assert_eq!(act(&gh, &p).unwrap(), act(&g, &act(&h, &p).unwrap()).unwrap());
    }

    #[test]
    fn relation_for_small_n() {
        for n in 1..=3 {
            let r = check_syzygy(n).unwrap();
            assert_eq!(r.invariant, [true; 3]);
            assert_eq!(r.exponent, Some(n + 1));
            assert!(r.holds && r.rescaled_holds && !r.holds_with_exponent_n);
        }
    }
}
