//! Complex and Real Frobenius–Schur indicators of C₂-graded pairs G ◁ Ĝ and
//! the Dyson A-block type they determine.

use std::fmt;
use std::str::FromStr;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catalog::Grading;
use crate::chars::{self, CharError, CharacterTable};
use crate::grp::GroupError;
use crate::mckay::{self, McKayGraph};
use crate::Cyc;

#[derive(Debug, Error)]
pub enum DysonError {
    #[error("indicator of row {row} is {value}, not in {{1, 0, -1}}")]
    Range { row: usize, value: String },
    #[error("row {0}: indicators (0, 0) but the twisted character is the conjugate")]
    Unclassifiable(usize),
    #[error("square of an odd element is not in the subgroup")]
    NotGraded,
    #[error(transparent)]
    Char(#[from] CharError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

macro_rules! dyson_types {
    ($($v:ident $dl:literal $fc:literal $fr:literal),* $(,)?) => {
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
        pub enum DysonType { $($v),* }

        impl DysonType {
            pub const ALL: [DysonType; 10] = [$(DysonType::$v),*];

            pub fn roman(self) -> &'static str {
                match self { $(DysonType::$v => stringify!($v)),* }
            }

            /// Division-algebra label.
            pub fn dl(self) -> &'static str {
                match self { $(DysonType::$v => $dl),* }
            }

            pub fn fc(self) -> i8 {
                match self { $(DysonType::$v => $fc),* }
            }

            pub fn fr(self) -> i8 {
                match self { $(DysonType::$v => $fr),* }
            }
        }
    };
}

dyson_types! {
    I "RR" 1 1,
    II "QR" 1 -1,
    III "CR" 1 0,
    IV "CC2" 0 0,
    V "RC" 0 1,
    VI "QC" 0 -1,
    VII "CC1" 0 0,
    VIII "QQ" -1 -1,
    IX "RQ" -1 1,
    X "CQ" -1 0,
}

impl DysonType {
    /// The unique type with these indicators, or `None` for (0, 0).
    pub fn from_indicators(fc: i8, fr: i8) -> Option<DysonType> {
        if (fc, fr) == (0, 0) {
            return None;
        }
        DysonType::ALL.into_iter().find(|t| t.fc() == fc && t.fr() == fr)
    }

    /// Fixed fill colour for graph export; I is black.
    pub fn colour(self) -> &'static str {
        match self {
            DysonType::I => "#000000",
            DysonType::II => "#e41a1c",
            DysonType::III => "#377eb8",
            DysonType::IV => "#4daf4a",
            DysonType::V => "#984ea3",
            DysonType::VI => "#ff7f00",
            DysonType::VII => "#ffff33",
            DysonType::VIII => "#a65628",
            DysonType::IX => "#f781bf",
            DysonType::X => "#999999",
        }
    }
}

impl fmt::Display for DysonType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.roman())
    }
}

impl FromStr for DysonType {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        DysonType::ALL
            .into_iter()
            .find(|t| t.roman() == s || t.dl() == s)
            .ok_or_else(|| format!("unknown Dyson type {s}"))
    }
}

/// How conjugation by an odd element moves a character.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Twist {
    Fixed,
    Conjugate,
    Moved,
}

/// Which twist outcome is read as type IV when both indicators vanish.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    FixedIsIV,
    MovedIsIV,
}

/// Calibrated once against B₋2T₄₈ ◁ B₋2O₉₆, where IV and VII both occur.
pub const ORIENTATION: Orientation = Orientation::FixedIsIV;

fn to_indicator(row: usize, v: &Cyc) -> Result<i8, DysonError> {
    v.as_rational()
        .filter(|r| r.is_integer())
        .and_then(|r| r.to_integer().to_i8())
        .filter(|x| (-1..=1).contains(x))
        .ok_or_else(|| DysonError::Range {
            row,
            value: v.to_string(),
        })
}

/// (1/|G|) Σ_{g∈G} χ(g²).
pub fn fs_complex(t: &CharacterTable, row: usize) -> Result<i8, DysonError> {
    let mut s = Cyc::zero(1);
    for (c, &sq) in t.square_class.iter().enumerate() {
        s = s + t.chars[row][sq].scale(&crate::cyclo::q(t.class_sizes[c] as i64, 1));
    }
    let s = s.scale(&crate::cyclo::q(1, t.group_order as i64));
    to_indicator(row, &s)
}

/// Number of odd elements whose square lies in each class of G.
pub fn odd_square_counts(gr: &Grading) -> Result<Vec<usize>, DysonError> {
    let g = &gr.g;
    let mut counts = vec![0usize; g.classes().len()];
    for i in gr.odd_coset() {
        let sq = gr.ghat.element(gr.ghat.mul(i, i));
        let j = g.locate(sq).ok_or(DysonError::NotGraded)?;
        counts[g.class_of(j)] += 1;
    }
    Ok(counts)
}

/// (1/|G|) Σ_{g∈Ĝ∖G} χ(g²), from precomputed odd-square counts.
pub fn fs_real_with(t: &CharacterTable, counts: &[usize], row: usize) -> Result<i8, DysonError> {
    let mut s = Cyc::zero(1);
    for (c, &k) in counts.iter().enumerate() {
        if k > 0 {
            s = s + t.chars[row][c].scale(&crate::cyclo::q(k as i64, 1));
        }
    }
    let s = s.scale(&crate::cyclo::q(1, t.group_order as i64));
    to_indicator(row, &s)
}

pub fn fs_real(gr: &Grading, t: &CharacterTable, row: usize) -> Result<i8, DysonError> {
    fs_real_with(t, &odd_square_counts(gr)?, row)
}

/// Compares χ^σ with χ and χ̄ for σ the grading's odd representative.
pub fn twist(t: &CharacterTable, action: &[usize], row: usize) -> Twist {
    let chi = &t.chars[row];
    let moved: Vec<&Cyc> = action.iter().map(|&c| &chi[c]).collect();
    if moved.iter().zip(chi).all(|(a, b)| *a == b) {
        Twist::Fixed
    } else if moved.iter().zip(chi).all(|(a, b)| **a == b.conj()) {
        Twist::Conjugate
    } else {
        Twist::Moved
    }
}

fn resolve(orientation: Orientation, tw: Twist, row: usize) -> Result<DysonType, DysonError> {
    match (orientation, tw) {
        (_, Twist::Conjugate) => Err(DysonError::Unclassifiable(row)),
        (Orientation::FixedIsIV, Twist::Fixed) | (Orientation::MovedIsIV, Twist::Moved) => {
            Ok(DysonType::IV)
        }
        _ => Ok(DysonType::VII),
    }
}

/// Indicators and types for every row, using `σ` to split the (0, 0) case.
pub fn classify(
    gr: &Grading,
    t: &CharacterTable,
    sigma: &crate::grp::GradedMatrix,
    orientation: Orientation,
) -> Result<Vec<DysonType>, DysonError> {
    let counts = odd_square_counts(gr)?;
    let action = gr.g.conjugation_class_action(sigma)?;
    (0..t.chars.len())
        .map(|row| {
            let fc = fs_complex(t, row)?;
            let fr = fs_real_with(t, &counts, row)?;
            match DysonType::from_indicators(fc, fr) {
                Some(d) => Ok(d),
                None => resolve(orientation, twist(t, &action, row), row),
            }
        })
        .collect()
}

pub fn dyson_types(gr: &Grading) -> Result<Vec<DysonType>, DysonError> {
    let t = chars::table_of(&gr.g)?;
    classify(gr, &t, &gr.odd_rep, ORIENTATION)
}

pub fn dyson_type(gr: &Grading, t: &CharacterTable, row: usize) -> Result<DysonType, DysonError> {
    Ok(classify(gr, t, &gr.odd_rep, ORIENTATION)?[row])
}

/// Tests whether a column of types could come from some index-2 extension
/// of the group of `t`. The complex indicators are fixed by the table, and
/// by orthogonality h ↦ Σ_k F_R(χ_k)·χ_k(h) counts the odd elements squaring
/// to h, so it must be a non-negative integer with Σ_h = |G|.
pub fn realizable(t: &CharacterTable, types: &[DysonType]) -> Result<(), String> {
    if types.len() != t.chars.len() {
        return Err(format!("{} types for {} characters", types.len(), t.chars.len()));
    }
    for (row, ty) in types.iter().enumerate() {
        let fc = fs_complex(t, row).map_err(|e| e.to_string())?;
        if fc != ty.fc() {
            return Err(format!(
                "row {} has complex indicator {fc} but type {ty} needs {}",
                row + 1,
                ty.fc()
            ));
        }
    }
    let mut total = 0i64;
    for c in 0..t.num_classes() {
        let mut s = Cyc::zero(1);
        for (row, ty) in types.iter().enumerate() {
            s = s + t.chars[row][c].scale(&crate::cyclo::q(ty.fr() as i64, 1));
        }
        let count = s
            .as_rational()
            .filter(|r| r.is_integer())
            .and_then(|r| r.to_integer().to_i64())
            .filter(|&k| k >= 0)
            .ok_or_else(|| format!("odd elements squaring into class {} would number {s}", c + 1))?;
        total += count * t.class_sizes[c] as i64;
    }
    if total != t.group_order as i64 {
        return Err(format!("implied odd coset has {total} elements, not {}", t.group_order));
    }
    Ok(())
}

/// A McKay graph whose vertices carry Dyson types.
#[derive(Clone, Debug)]
pub struct Decorated {
    pub name: String,
    pub graph: McKayGraph,
    pub types: Vec<DysonType>,
}

pub fn decorate(gr: &Grading) -> Result<Decorated, DysonError> {
    let t = chars::table_of(&gr.g)?;
    Ok(Decorated {
        name: gr.name(),
        graph: mckay::mckay_from_table(&gr.g, &t)?,
        types: classify(gr, &t, &gr.odd_rep, ORIENTATION)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use DysonType::*;

    fn grading(s: &str) -> Grading {
        s.parse().unwrap()
    }

    #[test]
    fn table_rows() {
        assert_eq!(DysonType::from_indicators(1, 1), Some(I));
        assert_eq!(DysonType::from_indicators(-1, 0), Some(X));
        assert_eq!(DysonType::from_indicators(0, 0), None);
        assert_eq!(VII.dl(), "CC1");
        assert_eq!("QC".parse::<DysonType>().unwrap(), VI);
    }

    #[test]
    fn tetrahedral_in_octahedral() {
        let gr = grading("BT_24<BO_48");
        let t = chars::table_of(&gr.g).unwrap();
        let fc: Vec<i8> = (0..7).map(|i| fs_complex(&t, i).unwrap()).collect();
        let fr: Vec<i8> = (0..7).map(|i| fs_real(&gr, &t, i).unwrap()).collect();
        let mut pairs: Vec<(usize, i8, i8)> = (0..7).map(|i| (t.degrees[i], fc[i], fr[i])).collect();
        pairs.sort();
        assert_eq!(
            pairs,
            vec![(1, 0, 1), (1, 0, 1), (1, 1, 1), (2, -1, -1), (2, 0, -1), (2, 0, -1), (3, 1, 1)]
        );
    }

    #[test]
    fn quaternion_row_is_quaternionic() {
        let g = crate::catalog::build(&"BD_8".parse().unwrap()).unwrap();
        let t = chars::table_of(&g).unwrap();
        assert_eq!(fs_complex(&t, 4).unwrap(), -1);
        assert_eq!(fs_complex(&t, 0).unwrap(), 1);
    }

    #[test]
    fn trivial_subgroup() {
        let gr = grading("C_1<BC_2");
        assert_eq!(dyson_types(&gr).unwrap(), vec![I]);
    }

    #[test]
    fn both_zero_types_in_one_grading() {
        let gr = grading("B-2T_48<B-2O_96");
        let types = dyson_types(&gr).unwrap();
        assert_eq!(types.iter().filter(|&&d| d == IV).count(), 2);
        assert_eq!(types.iter().filter(|&&d| d == VII).count(), 4);
    }

    #[test]
    fn computed_columns_are_realizable() {
        for s in ["BT_24<BO_48", "BO_48<B-2O_96", "BC_6<B-CD_12"] {
            let gr = grading(s);
            let t = chars::table_of(&gr.g).unwrap();
            realizable(&t, &dyson_types(&gr).unwrap()).unwrap();
        }
    }

    #[test]
    fn antipode_of_quaternionic_real_type_is_unrealizable() {
        let gr = grading("BC_6<B-CD_12");
        let t = chars::table_of(&gr.g).unwrap();
        let mut types = dyson_types(&gr).unwrap();
        let k = types.iter().rposition(|&d| d == I).unwrap();
        types[k] = II;
        assert!(realizable(&t, &types).is_err());
    }
}
