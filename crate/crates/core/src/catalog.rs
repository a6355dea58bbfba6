//! Named constructors for the finite subgroups of O(3), SU(2) and Pin±(3),
//! the containment edge lists and the index-2 gradings.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use thiserror::Error;

use crate::grp::{self, FiniteGroup, GradedMatrix, GroupError};
use crate::Cyc;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CatalogError {
    #[error("unknown group name {0:?}")]
    UnknownName(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("catalog integrity: {0}")]
    Integrity(String),
    #[error(transparent)]
    Group(#[from] GroupError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ambient {
    O3,
    SU2,
    PinMinus,
    PinPlus,
}

impl Ambient {
    pub fn token(self) -> &'static str {
        match self {
            Ambient::O3 => "O3",
            Ambient::SU2 => "SU2",
            Ambient::PinMinus => "Pin-",
            Ambient::PinPlus => "Pin+",
        }
    }
}

macro_rules! families {
    ($($v:ident => $tok:literal, $coef:expr, $axial:expr;)*) => {
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum Family { $($v),* }

        impl Family {
            pub const ALL: &'static [Family] = &[$(Family::$v),*];

            /// ASCII token used in names, e.g. `Bm2T`.
            pub fn token(self) -> &'static str {
                match self { $(Family::$v => $tok),* }
            }

            /// Order is `coef * n` for axial families and `coef` otherwise.
            fn coefficient(self) -> usize {
                match self { $(Family::$v => $coef),* }
            }

            pub fn is_axial(self) -> bool {
                match self { $(Family::$v => $axial),* }
            }
        }
    };
}

families! {
    C => "C", 1, true;
    TwoC => "2C", 2, true;
    CC => "CC", 2, true;
    D => "D", 2, true;
    CD => "CD", 2, true;
    DD => "DD", 4, true;
    TwoD => "2D", 4, true;
    T => "T", 12, false;
    TwoT => "2T", 24, false;
    O => "O", 24, false;
    TO => "TO", 24, false;
    TwoO => "2O", 48, false;
    I => "I", 60, false;
    TwoI => "2I", 120, false;
    BC => "BC", 2, true;
    BD => "BD", 4, true;
    BT => "BT", 24, false;
    BO => "BO", 48, false;
    BI => "BI", 120, false;
    Bm2C => "Bm2C", 4, true;
    Bp2C => "Bp2C", 4, true;
    BmCC => "BmCC", 4, true;
    BpCC => "BpCC", 4, true;
    BmCD => "BmCD", 4, true;
    BpCD => "BpCD", 4, true;
    BmDD => "BmDD", 8, true;
    BpDD => "BpDD", 8, true;
    Bm2D => "Bm2D", 8, true;
    Bp2D => "Bp2D", 8, true;
    Bm2T => "Bm2T", 48, false;
    Bp2T => "Bp2T", 48, false;
    BmTO => "BmTO", 48, false;
    BpTO => "BpTO", 48, false;
    Bm2O => "Bm2O", 96, false;
    Bp2O => "Bp2O", 96, false;
    Bm2I => "Bm2I", 240, false;
    Bp2I => "Bp2I", 240, false;
}

impl Family {
    /// Ambient groups in which the family is defined, preferred one first.
    pub fn ambients(self) -> &'static [Ambient] {
        use Family::*;
        match self {
            C | TwoC => &[Ambient::SU2, Ambient::O3],
            CC | D | CD | DD | TwoD | T | TwoT | O | TO | TwoO | I | TwoI => &[Ambient::O3],
            BC | BD | BT | BO | BI => &[Ambient::SU2],
            Bm2C | BmCC | BmCD | BmDD | Bm2D | Bm2T | BmTO | Bm2O | Bm2I => &[Ambient::PinMinus],
            Bp2C | BpCC | BpCD | BpDD | Bp2D | Bp2T | BpTO | Bp2O | Bp2I => &[Ambient::PinPlus],
        }
    }

    pub fn from_token(s: &str) -> Option<Family> {
        let norm = s
            .replace("B₋", "Bm")
            .replace("B₊", "Bp")
            .replace("B-", "Bm")
            .replace("B+", "Bp");
        Family::ALL.iter().copied().find(|f| f.token() == norm)
    }
}

/// A catalog group: family, index parameter and ambient group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupSpec {
    pub family: Family,
    /// Index parameter; 0 for polyhedral families.
    pub n: u32,
    pub ambient: Ambient,
}

impl GroupSpec {
    pub fn new(family: Family, n: u32) -> Self {
        GroupSpec {
            family,
            n: if family.is_axial() { n } else { 0 },
            ambient: family.ambients()[0],
        }
    }

    pub fn poly(family: Family) -> Self {
        Self::new(family, 0)
    }

    pub fn in_ambient(family: Family, n: u32, ambient: Ambient) -> Self {
        GroupSpec {
            ambient,
            ..Self::new(family, n)
        }
    }

    /// Order predicted by the subscript.
    pub fn expected_order(&self) -> usize {
        if self.family.is_axial() {
            self.family.coefficient() * self.n as usize
        } else {
            self.family.coefficient()
        }
    }

    pub fn dim(&self) -> usize {
        if self.ambient == Ambient::O3 {
            3
        } else {
            2
        }
    }

    fn validate(&self) -> Result<(), CatalogError> {
        if !self.family.ambients().contains(&self.ambient) {
            return Err(CatalogError::InvalidParameter(format!(
                "{} is not defined in {}",
                self.family.token(),
                self.ambient.token()
            )));
        }
        if self.family.is_axial() && self.n == 0 {
            return Err(CatalogError::InvalidParameter(format!(
                "{} needs n >= 1",
                self.family.token()
            )));
        }
        if self.family == Family::TwoC && self.ambient == Ambient::SU2 && self.n.is_multiple_of(2) {
            return Err(CatalogError::InvalidParameter(
                "2C_2n in SU2 exists only for odd n".into(),
            ));
        }
        Ok(())
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ambient != self.family.ambients()[0] {
            write!(f, "{}/", self.ambient.token())?;
        }
        write!(f, "{}_{}", self.family.token(), self.expected_order())
    }
}

impl FromStr for GroupSpec {
    type Err = CatalogError;

    /// Accepts `BD_12`, `BD_4n:n=3`, `O3/C_5`, `Bm2T_48`, `B-2T_48`, `BT`.
    fn from_str(src: &str) -> Result<Self, CatalogError> {
        let unknown = || CatalogError::UnknownName(src.to_string());
        let (ambient, rest) = match src.split_once('/') {
            Some((a, r)) => {
                let amb = match a {
                    "O3" => Ambient::O3,
                    "SU2" => Ambient::SU2,
                    "Pin-" | "Pinm" => Ambient::PinMinus,
                    "Pin+" | "Pinp" => Ambient::PinPlus,
                    _ => return Err(unknown()),
                };
                (Some(amb), r)
            }
            None => (None, src),
        };
        let (body, param) = match rest.split_once(':') {
            Some((b, p)) => {
                let v = p
                    .strip_prefix("n=")
                    .and_then(|v| v.parse::<u32>().ok())
                    .ok_or_else(unknown)?;
                (b, Some(v))
            }
            None => (rest, None),
        };
        let (tok, sub) = match body.split_once('_') {
            Some((t, s)) => (t, Some(s)),
            None => (body, None),
        };
        let family = Family::from_token(tok).ok_or_else(unknown)?;
        let ambient = ambient.unwrap_or(family.ambients()[0]);
        let coef = family.coefficient();
        let spec = if family.is_axial() {
            let n = match (sub, param) {
                (Some(s), Some(n)) if s.ends_with('n') => {
                    let c = &s[..s.len() - 1];
                    if !(c.is_empty() && coef == 1 || c.parse::<usize>().ok() == Some(coef)) {
                        return Err(unknown());
                    }
                    n
                }
                (Some(s), None) => {
                    let order: usize = s.parse().map_err(|_| unknown())?;
                    if order == 0 || !order.is_multiple_of(coef) {
                        return Err(CatalogError::InvalidParameter(format!(
                            "{src}: order must be a positive multiple of {coef}"
                        )));
                    }
                    (order / coef) as u32
                }
                (None, Some(n)) => n,
                _ => return Err(unknown()),
            };
            GroupSpec::in_ambient(family, n, ambient)
        } else {
            if param.is_some() {
                return Err(unknown());
            }
            if let Some(s) = sub {
                if s.parse::<usize>().ok() != Some(coef) {
                    return Err(unknown());
                }
            }
            GroupSpec::in_ambient(family, 0, ambient)
        };
        spec.validate()?;
        Ok(spec)
    }
}

fn z(m: u64, k: i64) -> Cyc {
    Cyc::root(m, k)
}

fn int(n: i64) -> Cyc {
    Cyc::from_int(n)
}

fn i_unit() -> Cyc {
    z(4, 1)
}

/// √5 = μ − μ² − μ³ + μ⁴ for μ = ζ₅.
pub fn sqrt5() -> Cyc {
    z(5, 1) - z(5, 2) - z(5, 3) + z(5, 4)
}

/// Generators shared by the 2×2 (SU(2) and Pin) families.
pub mod su2 {
    use super::*;

    /// diag(ζ_m, ζ_m⁻¹).
    pub fn a(m: u64) -> GradedMatrix {
        GradedMatrix::diag(vec![z(m, 1), z(m, -1)])
    }

    pub fn b() -> GradedMatrix {
        GradedMatrix::plain(vec![vec![int(0), int(1)], vec![int(-1), int(0)]])
    }

    pub fn y() -> GradedMatrix {
        let i = i_unit();
        let half = Cyc::from_frac(1, 2);
        let p = |re: i64, im: i64| int(re).add_ref(&i.scale(&crate::cyclo::q(im, 1))).mul_ref(&half);
        GradedMatrix::plain(vec![vec![p(-1, 1), p(1, 1)], vec![p(-1, 1), p(-1, -1)]])
    }

    /// Spin lift of the quarter turn; its square is diag(i, -i).
    pub fn i() -> GradedMatrix {
        a(8)
    }

    pub fn x() -> GradedMatrix {
        let s = sqrt5().inv().expect("nonzero");
        let mu = |k| z(5, k);
        let e = |a: Cyc| a.mul_ref(&s);
        GradedMatrix::plain(vec![
            vec![e(mu(4) - mu(1)), e(mu(2) - mu(3))],
            vec![e(mu(2) - mu(3)), e(mu(1) - mu(4))],
        ])
    }

    pub fn zz() -> GradedMatrix {
        GradedMatrix::diag(vec![z(5, 3).neg_ref(), z(5, 2).neg_ref()])
    }

    /// Central order-4 lift of the inversion in Pin₋(3).
    pub fn w() -> GradedMatrix {
        GradedMatrix::scalar(2, i_unit())
    }

    /// Central order-2 lift of the inversion in Pin₊(3).
    pub fn flag() -> GradedMatrix {
        GradedMatrix::flag_element(2)
    }

    pub fn minus_one() -> GradedMatrix {
        GradedMatrix::scalar(2, int(-1))
    }
}

/// Generators of the 3×3 orthogonal families.
pub mod o3 {
    use super::*;

    /// Rotation by 2π/m about the third axis.
    pub fn rot(m: u64) -> GradedMatrix {
        let two = crate::cyclo::q(1, 2);
        let c = (z(m, 1) + z(m, -1)).scale(&two);
        // sin = (ζ − ζ⁻¹)/(2i) = -i(ζ − ζ⁻¹)/2
        let s = (z(m, 1) - z(m, -1)).mul_ref(&z(4, 3)).scale(&two);
        GradedMatrix::plain(vec![
            vec![c.clone(), s.neg_ref(), int(0)],
            vec![s, c, int(0)],
            vec![int(0), int(0), int(1)],
        ])
    }

    pub fn b() -> GradedMatrix {
        GradedMatrix::diag(vec![int(-1), int(1), int(-1)])
    }

    pub fn y() -> GradedMatrix {
        GradedMatrix::plain(vec![
            vec![int(0), int(0), int(1)],
            vec![int(1), int(0), int(0)],
            vec![int(0), int(1), int(0)],
        ])
    }

    pub fn i() -> GradedMatrix {
        GradedMatrix::plain(vec![
            vec![int(1), int(0), int(0)],
            vec![int(0), int(0), int(1)],
            vec![int(0), int(-1), int(0)],
        ])
    }

    pub fn x() -> GradedMatrix {
        let s = sqrt5().inv().expect("nonzero");
        GradedMatrix::plain(vec![
            vec![int(-1), int(0), int(0)],
            vec![int(0), s.neg_ref(), s.scale(&crate::cyclo::q(2, 1))],
            vec![int(0), s.scale(&crate::cyclo::q(2, 1)), s.clone()],
        ])
    }

    pub fn zz() -> GradedMatrix {
        rot(5)
    }

    pub fn minus_one() -> GradedMatrix {
        GradedMatrix::scalar(3, int(-1))
    }
}

/// Generators for a spec, with a short label for each one.
pub fn generators(spec: &GroupSpec) -> Result<Vec<(String, GradedMatrix)>, CatalogError> {
    use Family::*;
    spec.validate()?;
    let n = spec.n as u64;
    let l = |s: &str, m: GradedMatrix| (s.to_string(), m);
    let gens = if spec.ambient == Ambient::O3 {
        use o3::*;
        let a = || rot(n.max(1));
        let a_half = || rot(2 * n);
        let m1 = minus_one;
        match spec.family {
            C => vec![l("A", a())],
            TwoC => vec![l("A", a()), l("-1", m1())],
            CC => vec![l("-A'", a_half().neg())],
            D => vec![l("A", a()), l("B", b())],
            CD => vec![l("A", a()), l("-B", b().neg())],
            DD => vec![l("-A'", a_half().neg()), l("B", b())],
            TwoD => vec![l("A", a()), l("B", b()), l("-1", m1())],
            T => vec![l("I^2", i().mul(&i())), l("Y", y())],
            TwoT => vec![l("I^2", i().mul(&i())), l("Y", y()), l("-1", m1())],
            O => vec![l("I", i()), l("Y", y())],
            TO => vec![l("-I", i().neg()), l("Y", y())],
            TwoO => vec![l("I", i()), l("Y", y()), l("-1", m1())],
            I => vec![l("X", x()), l("Z", zz())],
            TwoI => vec![l("X", x()), l("Z", zz()), l("-1", m1())],
            _ => unreachable!("validated"),
        }
    } else {
        use su2::*;
        let i2 = || i().mul(&i());
        let ap = || a(4 * n);
        let ad = || a(2 * n);
        let xf = flag;
        match spec.family {
            C => vec![l("A", a(n))],
            TwoC => vec![l("A", a(n)), l("-1", minus_one())],
            BC => vec![l("A", ad())],
            BD => vec![l("A", ad()), l("B", b())],
            BT => vec![l("I^2", i2()), l("Y", y())],
            BO => vec![l("I", i()), l("Y", y())],
            BI => vec![l("X", x()), l("Z", zz())],
            Bm2C => vec![l("A", ad()), l("W", w())],
            Bp2C => vec![l("A", ad()), l("x", xf())],
            // ⟨A'W⟩ alone has order 2n for odd n; -1 completes the preimage
            BmCC => vec![l("A'W", ap().mul(&w())), l("-1", minus_one())],
            BpCC => vec![l("xA'", xf().mul(&ap()))],
            BmCD => vec![l("A", ad()), l("BW", b().mul(&w()))],
            BpCD => vec![l("A", ad()), l("xB", xf().mul(&b()))],
            BmDD => vec![l("A'W", ap().mul(&w())), l("B", b())],
            BpDD => vec![l("xA'", xf().mul(&ap())), l("B", b())],
            Bm2D => vec![l("A", ad()), l("B", b()), l("W", w())],
            Bp2D => vec![l("A", ad()), l("B", b()), l("x", xf())],
            Bm2T => vec![l("I^2", i2()), l("Y", y()), l("W", w())],
            Bp2T => vec![l("I^2", i2()), l("Y", y()), l("x", xf())],
            BmTO => vec![l("IW", i().mul(&w())), l("Y", y())],
            BpTO => vec![l("xI", xf().mul(&i())), l("Y", y())],
            Bm2O => vec![l("I", i()), l("Y", y()), l("W", w())],
            Bp2O => vec![l("I", i()), l("Y", y()), l("x", xf())],
            Bm2I => vec![l("X", x()), l("Z", zz()), l("W", w())],
            Bp2I => vec![l("X", x()), l("Z", zz()), l("x", xf())],
            _ => unreachable!("validated"),
        }
    };
    Ok(gens)
}

fn cache() -> &'static Mutex<HashMap<GroupSpec, Arc<FiniteGroup>>> {
    static CACHE: OnceLock<Mutex<HashMap<GroupSpec, Arc<FiniteGroup>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Builds (and memoizes) the group, checking its order against the subscript.
pub fn build(spec: &GroupSpec) -> Result<Arc<FiniteGroup>, CatalogError> {
    if let Some(g) = cache().lock().unwrap().get(spec) {
        return Ok(g.clone());
    }
    if spec.expected_order() > grp::DEFAULT_CAP {
        return Err(GroupError::TooLarge { cap: grp::DEFAULT_CAP }.into());
    }
    let gens: Vec<GradedMatrix> = generators(spec)?.into_iter().map(|(_, m)| m).collect();
    let g = grp::generate(&gens)?.with_name(spec.to_string());
    if g.order() != spec.expected_order() {
        return Err(CatalogError::Integrity(format!(
            "{spec} has order {} but the subscript says {}",
            g.order(),
            spec.expected_order()
        )));
    }
    let g = Arc::new(g);
    cache().lock().unwrap().insert(*spec, g.clone());
    Ok(g)
}

/// Every polyhedral spec and every axial spec for the given n values.
pub fn all_specs(ns: impl IntoIterator<Item = u32> + Clone) -> Vec<GroupSpec> {
    let mut out = Vec::new();
    for &f in Family::ALL {
        for &amb in f.ambients() {
            if f.is_axial() {
                for n in ns.clone() {
                    let s = GroupSpec::in_ambient(f, n, amb);
                    if s.validate().is_ok() {
                        out.push(s);
                    }
                }
            } else {
                out.push(GroupSpec::in_ambient(f, 0, amb));
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Figure {
    Fig1,
    Fig2,
    Fig3,
    Fig7,
    Fig8,
}

impl Figure {
    pub const ALL: [Figure; 5] = [Figure::Fig1, Figure::Fig2, Figure::Fig3, Figure::Fig7, Figure::Fig8];

    pub fn id(self) -> &'static str {
        match self {
            Figure::Fig1 => "fig1",
            Figure::Fig2 => "fig2",
            Figure::Fig3 => "fig3",
            Figure::Fig7 => "fig7",
            Figure::Fig8 => "fig8",
        }
    }

    pub fn parse(s: &str) -> Option<Figure> {
        let s = s.to_ascii_lowercase();
        let s = s.strip_prefix('f').map(|r| r.trim_start_matches("ig"))?;
        match s {
            "1" => Some(Figure::Fig1),
            "2" => Some(Figure::Fig2),
            "3" => Some(Figure::Fig3),
            "7" => Some(Figure::Fig7),
            "8" => Some(Figure::Fig8),
            _ => None,
        }
    }

    pub fn is_axial(self) -> bool {
        matches!(self, Figure::Fig2 | Figure::Fig3 | Figure::Fig8)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    Any,
    Odd,
    Even,
}

impl Parity {
    pub fn admits(self, n: u32) -> bool {
        match self {
            Parity::Any => true,
            Parity::Odd => n % 2 == 1,
            Parity::Even => n.is_multiple_of(2),
        }
    }
}

/// One arrow of a containment figure. Axial arrows are templates in n;
/// `sub_half` marks the dashed arrows whose source is indexed by m = n/2.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EdgeTemplate {
    pub figure: Figure,
    pub sub: (Family, Ambient),
    pub sup: (Family, Ambient),
    pub index: usize,
    pub parity: Parity,
    pub sub_half: bool,
}

impl EdgeTemplate {
    pub fn instantiate(&self, n: u32) -> Option<(GroupSpec, GroupSpec)> {
        let axial = self.sub.0.is_axial() || self.sup.0.is_axial();
        if axial && !self.parity.admits(n) {
            return None;
        }
        let m = if self.sub_half { n / 2 } else { n };
        let sub = GroupSpec::in_ambient(self.sub.0, m, self.sub.1);
        let sup = GroupSpec::in_ambient(self.sup.0, n, self.sup.1);
        (sub.validate().is_ok() && sup.validate().is_ok()).then_some((sub, sup))
    }

    pub fn describe(&self) -> String {
        let fam = |(f, a): (Family, Ambient), v: &str| {
            let pre = if a != f.ambients()[0] { format!("{}/", a.token()) } else { String::new() };
            if f.is_axial() {
                let c = f.coefficient();
                let c = if c == 1 { String::new() } else { c.to_string() };
                format!("{pre}{}_{c}{v}", f.token())
            } else {
                format!("{pre}{}_{}", f.token(), f.coefficient())
            }
        };
        let cond = match self.parity {
            Parity::Any => "",
            Parity::Odd => " (n odd)",
            Parity::Even => " (n even)",
        };
        format!(
            "{} < {} [index {}]{cond}",
            fam(self.sub, if self.sub_half { "m" } else { "n" }),
            fam(self.sup, "n"),
            self.index
        )
    }
}

/// Machine-readable transcription of a containment figure.
pub fn containment_edges(figure: Figure) -> Vec<EdgeTemplate> {
    use Ambient as A;
    use Family::*;
    let e = |sub: (Family, Ambient), sup: (Family, Ambient), index: usize| EdgeTemplate {
        figure,
        sub,
        sup,
        index,
        parity: Parity::Any,
        sub_half: false,
    };
    let odd = |t: EdgeTemplate| EdgeTemplate { parity: Parity::Odd, ..t };
    let half = |t: EdgeTemplate| EdgeTemplate {
        parity: Parity::Even,
        sub_half: true,
        ..t
    };
    let o = |f| (f, A::O3);
    let s = |f| (f, A::SU2);
    let pm = |f| (f, A::PinMinus);
    let pp = |f| (f, A::PinPlus);
    match figure {
        Figure::Fig1 => vec![
            e(o(T), o(O), 2),
            e(o(T), o(TO), 2),
            e(o(T), o(I), 5),
            e(o(T), o(TwoT), 2),
            e(o(TwoT), o(TwoO), 2),
            e(o(TO), o(TwoO), 2),
            e(o(O), o(TwoO), 2),
            e(o(I), o(TwoI), 2),
            e(o(TwoT), o(TwoI), 5),
        ],
        Figure::Fig2 => vec![
            e(o(C), o(CD), 2),
            e(o(C), o(D), 2),
            e(o(C), o(CC), 2),
            e(o(C), o(TwoC), 2),
            e(o(D), o(DD), 2),
            e(o(CD), o(DD), 2),
            e(o(CC), o(DD), 2),
            e(o(TwoC), o(TwoD), 2),
            e(o(CD), o(TwoD), 2),
            e(o(D), o(TwoD), 2),
            half(e(o(CC), o(TwoC), 2)),
            half(e(o(DD), o(TwoD), 2)),
            half(e(o(D), o(D), 2)),
            half(e(o(CD), o(CD), 2)),
            half(e(o(C), o(C), 2)),
            half(e(o(TwoC), o(TwoC), 2)),
            half(e(o(TwoD), o(TwoD), 2)),
        ],
        Figure::Fig3 => vec![
            e(s(BT), s(BO), 2),
            e(s(BT), s(BI), 5),
            e(s(BC), s(BD), 2),
            e(s(C), s(BC), 2),
            odd(e(s(C), s(TwoC), 2)),
            odd(e(s(TwoC), s(BD), 2)),
            half(e(s(BD), s(BD), 2)),
        ],
        Figure::Fig7 => vec![
            e(s(BT), s(BO), 2),
            e(s(BT), s(BI), 5),
            e(s(BT), pm(BmTO), 2),
            e(s(BO), pm(Bm2O), 2),
            e(pm(BmTO), pm(Bm2O), 2),
            e(pm(Bm2T), pm(Bm2O), 2),
            e(s(BT), pm(Bm2T), 2),
            e(s(BT), pp(BpTO), 2),
            e(s(BT), pp(Bp2T), 2),
            e(s(BI), pm(Bm2I), 2),
            e(s(BI), pp(Bp2I), 2),
            e(pp(Bp2T), pp(Bp2I), 5),
            e(pm(Bm2T), pm(Bm2I), 5),
            e(pp(BpTO), pp(Bp2O), 2),
            e(s(BO), pp(Bp2O), 2),
            e(pp(Bp2T), pp(Bp2O), 2),
        ],
        Figure::Fig8 => vec![
            e(s(BC), pp(BpCD), 2),
            e(s(BC), s(BD), 2),
            e(s(BC), pp(BpCC), 2),
            e(s(C), s(BC), 2),
            e(s(BD), pp(BpDD), 2),
            e(pp(Bp2C), pp(Bp2D), 2),
            e(pp(BpCD), pp(Bp2D), 2),
            e(s(BD), pp(Bp2D), 2),
            e(s(BC), pp(Bp2C), 2),
            e(pp(BpCC), pp(BpDD), 2),
            e(pp(BpCD), pp(BpDD), 2),
            half(e(pp(BpCC), pp(Bp2C), 2)),
            half(e(pp(BpDD), pp(Bp2D), 2)),
            e(s(BC), pm(BmCD), 2),
            e(s(BC), pm(BmCC), 2),
            e(s(BC), pm(Bm2C), 2),
            half(e(pm(BmCC), pm(Bm2C), 2)),
            half(e(pm(BmDD), pm(Bm2D), 2)),
            e(pm(BmCD), pm(BmDD), 2),
            e(s(BD), pm(BmDD), 2),
            e(pm(BmCC), pm(BmDD), 2),
            e(pm(Bm2C), pm(Bm2D), 2),
            e(pm(BmCD), pm(Bm2D), 2),
            e(s(BD), pm(Bm2D), 2),
            half(e(s(BD), s(BD), 2)),
            half(e(pp(BpCD), pp(BpCD), 2)),
            half(e(pm(BmCD), pm(BmCD), 2)),
            half(e(pm(Bm2D), pm(Bm2D), 2)),
            half(e(pp(Bp2D), pp(Bp2D), 2)),
            half(e(pm(Bm2C), pm(Bm2C), 2)),
            half(e(pp(Bp2C), pp(Bp2C), 2)),
        ],
    }
}

/// `h` placed inside `g`: literally when possible, otherwise conjugated.
#[derive(Clone, Debug)]
pub struct Embedding {
    pub sub: Arc<FiniteGroup>,
    pub literal: bool,
    pub conjugator: Option<GradedMatrix>,
}

/// Realizes `h ⊂ g`, falling back to a conjugate of `h` when the catalog
/// generators do not give a literal inclusion.
pub fn embed(h: &Arc<FiniteGroup>, g: &FiniteGroup) -> Option<Embedding> {
    if grp::is_subgroup(h, g) {
        return Some(Embedding {
            sub: h.clone(),
            literal: true,
            conjugator: None,
        });
    }
    let c = grp::find_conjugate_embedding(h, g)?;
    let cinv = c.inverse().ok()?;
    let gens: Vec<GradedMatrix> = h.generators().iter().map(|x| c.mul(x).mul(&cinv)).collect();
    let conj = grp::generate(&gens).ok()?.with_name(h.label());
    Some(Embedding {
        sub: Arc::new(conj),
        literal: false,
        conjugator: Some(c),
    })
}

#[derive(Clone, Debug)]
pub struct EdgeCheck {
    pub sub: GroupSpec,
    pub sup: GroupSpec,
    pub expected_index: usize,
    pub contained: bool,
    pub literal: bool,
    pub index: Option<usize>,
    /// Checked only for index-2 edges.
    pub normal: Option<bool>,
}

impl EdgeCheck {
    pub fn ok(&self) -> bool {
        self.contained && self.index == Some(self.expected_index) && self.normal != Some(false)
    }
}

pub fn check_edge(sub: &GroupSpec, sup: &GroupSpec, expected_index: usize) -> Result<EdgeCheck, CatalogError> {
    let h = build(sub)?;
    let g = build(sup)?;
    let emb = embed(&h, &g);
    let (contained, literal, index, normal) = match &emb {
        Some(e) => {
            let idx = grp::index(&e.sub, &g).ok();
            let normal = (expected_index == 2).then(|| grp::is_normal(&e.sub, &g));
            (true, e.literal, idx, normal)
        }
        None => (false, false, None, None),
    };
    Ok(EdgeCheck {
        sub: *sub,
        sup: *sup,
        expected_index,
        contained,
        literal,
        index,
        normal,
    })
}

/// An index-2 normal pair G ◁ Ĝ with a fixed odd-coset representative.
#[derive(Clone, Debug)]
pub struct Grading {
    pub sub: GroupSpec,
    pub sup: GroupSpec,
    pub g: Arc<FiniteGroup>,
    pub ghat: Arc<FiniteGroup>,
    pub odd_rep: GradedMatrix,
    pub odd_label: String,
    pub literal: bool,
}

impl Grading {
    pub fn new(sub: GroupSpec, sup: GroupSpec) -> Result<Grading, CatalogError> {
        let h = build(&sub)?;
        let ghat = build(&sup)?;
        let emb = embed(&h, &ghat).ok_or_else(|| {
            CatalogError::Integrity(format!("{sub} does not embed in {sup}"))
        })?;
        let g = emb.sub;
        if grp::index(&g, &ghat)? != 2 || !grp::is_normal(&g, &ghat) {
            return Err(CatalogError::Integrity(format!(
                "{sub} is not an index-2 normal subgroup of {sup}"
            )));
        }
        let (odd_label, odd_rep) = generators(&sup)?
            .into_iter()
            .find(|(_, m)| !g.contains(m))
            .ok_or_else(|| CatalogError::Integrity(format!("no odd generator in {sup}")))?;
        Ok(Grading {
            sub,
            sup,
            g,
            ghat,
            odd_rep,
            odd_label,
            literal: emb.literal,
        })
    }

    pub fn name(&self) -> String {
        format!("{}<{}", self.sub, self.sup)
    }

    /// Indices (in Ĝ) of the odd coset Ĝ \ G.
    pub fn odd_coset(&self) -> Vec<usize> {
        (0..self.ghat.order())
            .filter(|&i| !self.g.contains(self.ghat.element(i)))
            .collect()
    }
}

impl FromStr for Grading {
    type Err = CatalogError;

    /// `BT_24<BO_48`; also accepts `◁` or `<|` as the separator.
    fn from_str(s: &str) -> Result<Self, CatalogError> {
        let s = s.replace('◁', "<").replace("<|", "<");
        let (a, b) = s
            .split_once('<')
            .ok_or_else(|| CatalogError::UnknownName(s.to_string()))?;
        Grading::new(a.trim().parse()?, b.trim().parse()?)
    }
}

/// Index-2 pairs whose indicator tables are reproduced.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GradingTemplate {
    pub sub: Family,
    pub sup: Family,
}

impl GradingTemplate {
    pub fn instantiate(&self, n: u32) -> (GroupSpec, GroupSpec) {
        (GroupSpec::new(self.sub, n), GroupSpec::new(self.sup, n))
    }

    pub fn is_axial(&self) -> bool {
        self.sup.is_axial()
    }
}

pub fn polyhedral_grading_templates() -> Vec<GradingTemplate> {
    use Family::*;
    let t = |sub, sup| GradingTemplate { sub, sup };
    vec![
        t(BT, BO),
        t(BT, BpTO),
        t(BT, Bp2T),
        t(BT, BmTO),
        t(BT, Bm2T),
        t(BI, Bp2I),
        t(BI, Bm2I),
        t(BO, Bp2O),
        t(BO, Bm2O),
        t(BpTO, Bp2O),
        t(BmTO, Bm2O),
        t(Bp2T, Bp2O),
        t(Bm2T, Bm2O),
    ]
}

pub fn axial_grading_templates() -> Vec<GradingTemplate> {
    use Family::*;
    let t = |sub, sup| GradingTemplate { sub, sup };
    vec![
        t(C, BC),
        t(BC, BD),
        t(BC, BpCD),
        t(BC, BmCD),
        t(BC, BpCC),
        t(BC, Bp2C),
        t(BC, BmCC),
        t(BC, Bm2C),
        t(BD, BpDD),
        t(BpCD, BpDD),
        t(BpCC, BpDD),
        t(BD, BmDD),
        t(BmCD, BmDD),
        t(BmCC, BmDD),
        t(BD, Bp2D),
        t(BpCD, Bp2D),
        t(Bp2C, Bp2D),
        t(BD, Bm2D),
        t(BmCD, Bm2D),
        t(Bm2C, Bm2D),
    ]
}

/// All gradings: polyhedral ones plus the axial templates at the given n.
pub fn gradings(ns: impl IntoIterator<Item = u32> + Clone) -> Result<Vec<Grading>, CatalogError> {
    let mut out = Vec::new();
    for t in polyhedral_grading_templates() {
        let (a, b) = t.instantiate(0);
        out.push(Grading::new(a, b)?);
    }
    for t in axial_grading_templates() {
        for n in ns.clone() {
            let (a, b) = t.instantiate(n);
            out.push(Grading::new(a, b)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(s: &str) -> GroupSpec {
        s.parse().unwrap()
    }

    #[test]
    fn parse_names() {
        assert_eq!(spec("BD_4n:n=3"), GroupSpec::new(Family::BD, 3));
        assert_eq!(spec("BD_12"), GroupSpec::new(Family::BD, 3));
        assert_eq!(spec("Bm2T_48"), GroupSpec::poly(Family::Bm2T));
        assert_eq!(spec("B-2T_48"), GroupSpec::poly(Family::Bm2T));
        assert_eq!(spec("C_n:n=1"), GroupSpec::new(Family::C, 1));
        assert_eq!(spec("O3/C_5").ambient, Ambient::O3);
        assert_eq!(spec("BT").to_string(), "BT_24");
        assert_eq!(spec("O3/2C_6").to_string(), "O3/2C_6");
        assert!(matches!("XX_3".parse::<GroupSpec>(), Err(CatalogError::UnknownName(_))));
        assert!("BT_25".parse::<GroupSpec>().is_err());
        assert!("2C_4".parse::<GroupSpec>().is_err());
    }

    #[test]
    fn generators_are_unitary() {
        for s in all_specs([1u32, 2, 3, 4]) {
            for (label, g) in generators(&s).unwrap() {
                assert!(g.is_unitary(), "{s} generator {label} not unitary");
                let d = g.det();
                match s.ambient {
                    Ambient::SU2 | Ambient::PinPlus => assert!(d.is_one(), "{s} {label}"),
                    Ambient::PinMinus => {
                        assert!(d.is_one() || d == Cyc::from_int(-1), "{s} {label}")
                    }
                    Ambient::O3 => {
                        assert!(g.transpose().mul(&g).is_identity(), "{s} {label}");
                    }
                }
            }
        }
    }

    #[test]
    fn small_orders() {
        assert_eq!(build(&spec("C_n:n=1")).unwrap().order(), 1);
        assert_eq!(build(&spec("BD_8")).unwrap().order(), 8);
        assert_eq!(build(&spec("BT_24")).unwrap().order(), 24);
        assert_eq!(build(&spec("BI_120")).unwrap().order(), 120);
        assert_eq!(build(&spec("O3/I_60")).unwrap().order(), 60);
    }

    #[test]
    fn pin_minus_central_order_four() {
        let g = build(&spec("Bm2T_48")).unwrap();
        let w = su2::w();
        assert!(g.contains(&w));
        let i = g.locate(&w).unwrap();
        assert_eq!(g.element_order(i), 4);
        assert_eq!(g.classes()[g.class_of(i)].size, 1);
    }

    #[test]
    fn odd_diplo_cyclic_contains_minus_one() {
        for n in [1u32, 3, 5, 7] {
            let g = build(&GroupSpec::new(Family::TwoC, n)).unwrap();
            assert_eq!(g.order(), 2 * n as usize);
            assert!(g.contains(&su2::minus_one()));
        }
    }

    #[test]
    fn grading_odd_reps() {
        let g = Grading::new(spec("BT_24"), spec("BO_48")).unwrap();
        assert_eq!(g.odd_label, "I");
        let g = Grading::new(GroupSpec::new(Family::BC, 3), GroupSpec::new(Family::BD, 3)).unwrap();
        assert_eq!(g.odd_label, "B");
        assert!(Grading::new(spec("BT_24"), spec("BT_24")).is_err());
    }

    #[test]
    fn figure_ids() {
        assert_eq!(Figure::parse("fig3"), Some(Figure::Fig3));
        assert_eq!(Figure::parse("F8"), Some(Figure::Fig8));
        assert_eq!(Figure::parse("fig4"), None);
        let fig3 = containment_edges(Figure::Fig3);
        assert!(fig3.iter().any(|e| e.sub.0 == Family::BT && e.sup.0 == Family::BI && e.index == 5));
    }
}
