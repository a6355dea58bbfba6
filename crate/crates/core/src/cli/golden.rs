//! Embedded reference data and its typed views.

use std::collections::BTreeMap;

use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::{cyclo, Cyc};

macro_rules! golden_files {
    ($($id:literal => $file:literal),* $(,)?) => {
        /// Raw JSON of the reference file for a reproduce id.
        pub fn source(id: &str) -> Option<&'static str> {
            match id {
                $($id => Some(include_str!(concat!("../../golden/", $file))),)*
                _ => None,
            }
        }
    };
}

golden_files! {
    "T3" => "t3.json",
    "T5" => "t5.json",
    "T6" => "t6.json",
    "T7" => "t7.json",
    "T8" => "t8.json",
    "T13" => "t13.json",
    "T14" => "t14.json",
    "T15" => "t15.json",
    "T16" => "t16.json",
    "T17" => "t17.json",
    "T18" => "t18.json",
    "T19" => "t19.json",
    "F4" => "f4.json",
    "F6" => "f6.json",
    "F9" => "f9.json",
    "F10" => "f10.json",
}

pub fn load<T: DeserializeOwned>(id: &str) -> Result<T, String> {
    let src = source(&id.to_ascii_uppercase()).ok_or_else(|| format!("no reference data for {id}"))?;
    serde_json::from_str(src).map_err(|e| format!("reference data for {id}: {e}"))
}

#[derive(Clone, Debug, Deserialize)]
pub struct Table {
    pub comment: String,
    pub group: String,
    #[serde(default)]
    pub symbols: BTreeMap<String, String>,
    pub sizes: Vec<usize>,
    pub orders: Vec<usize>,
    pub rows: Vec<Vec<String>>,
    #[serde(default)]
    pub deviations: Vec<EntryDeviation>,
}

/// A printed entry known to be wrong; row and column are 1-based.
#[derive(Clone, Debug, Deserialize)]
pub struct EntryDeviation {
    pub row: usize,
    pub column: usize,
    pub printed: String,
    pub computed: String,
    pub note: String,
}

impl Table {
    /// Entry values with the documented deviations replaced.
    pub fn corrected(&self) -> Result<Vec<Vec<Cyc>>, String> {
        let mut fixed = self.clone();
        for d in &self.deviations {
            let cell = fixed
                .rows
                .get_mut(d.row.wrapping_sub(1))
                .and_then(|r| r.get_mut(d.column.wrapping_sub(1)))
                .ok_or_else(|| format!("deviation at row {} column {} is out of range", d.row, d.column))?;
            if *cell != d.printed {
                return Err(format!("deviation at row {} column {} does not match the entry", d.row, d.column));
            }
            *cell = d.computed.clone();
        }
        fixed.values()
    }

    /// Entry values, with named symbols such as `zeta^5` or `-zeta` expanded.
    pub fn values(&self) -> Result<Vec<Vec<Cyc>>, String> {
        let mut symbols = BTreeMap::new();
        for (name, def) in &self.symbols {
            let v: Cyc = cyclo::parse(def).map_err(|e| format!("symbol {name}: {e}"))?;
            symbols.insert(name.as_str(), v);
        }
        let entry = |s: &str| -> Result<Cyc, String> {
            let (neg, body) = match s.strip_prefix('-') {
                Some(b) => (true, b),
                None => (false, s),
            };
            let (base, exp) = match body.split_once('^') {
                Some((b, e)) => (b, e.parse::<u64>().ok()),
                None => (body, Some(1)),
            };
            let v = match (symbols.get(base), exp) {
                (Some(v), Some(e)) => v.pow(e),
                _ => return cyclo::parse(s).map_err(|e| format!("entry {s:?}: {e}")),
            };
            Ok(if neg { -v } else { v })
        };
        self.rows
            .iter()
            .map(|r| r.iter().map(|s| entry(s)).collect())
            .collect()
    }
}

#[derive(Clone, Debug, Deserialize)]
pub struct Indicators {
    pub comment: String,
    pub grading: String,
    pub rows_from: String,
    pub fc: Vec<i8>,
    pub fr: Vec<i8>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct Column {
    pub sub: Option<String>,
    pub sup: String,
    pub rows_from: Option<String>,
    pub types: Vec<String>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct CellDeviation {
    pub sup: String,
    /// 1-based row in the reference ordering.
    pub row: usize,
    pub printed: String,
    pub computed: String,
    pub note: String,
}

#[derive(Clone, Debug, Deserialize)]
pub struct Columns {
    pub comment: String,
    pub sub: Option<String>,
    pub columns: Vec<Column>,
    pub deviations: Vec<CellDeviation>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct LabelledGraph {
    pub grading: String,
    pub labels: Vec<String>,
    #[serde(default)]
    pub edges: Vec<(usize, usize)>,
    #[serde(default)]
    pub arcs: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct LabelledGraphs {
    pub comment: String,
    pub graphs: Vec<LabelledGraph>,
    #[serde(default)]
    pub deviations: Vec<GraphDeviation>,
}

/// A drawn graph whose shape cannot be the McKay graph of its grading.
#[derive(Clone, Debug, Deserialize)]
pub struct GraphDeviation {
    pub grading: String,
    pub note: String,
}

/// A family of decorated graphs described by labels at each distance from
/// the trivial vertex.
#[derive(Clone, Debug, Deserialize)]
pub struct AxialRow {
    pub sub: String,
    pub sup: String,
    pub parity: String,
    pub shape: String,
    /// Cycle length as a multiple of n.
    pub length: Option<u32>,
    pub copies: Option<usize>,
    pub directed: Option<bool>,
    pub trivial: String,
    pub odd: String,
    pub even: String,
    pub last: String,
    pub antipode: Option<String>,
    pub left: Option<String>,
    pub right: Option<String>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct AxialDeviation {
    pub sub: String,
    pub sup: String,
    pub parity: String,
    pub cells: Vec<String>,
    pub note: String,
}

#[derive(Clone, Debug, Deserialize)]
pub struct Axial {
    pub comment: String,
    pub rows: Vec<AxialRow>,
    pub deviations: Vec<AxialDeviation>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct TensorRule {
    pub left: usize,
    pub right: usize,
    pub sum: Vec<usize>,
}

/// A drawn McKay graph; vertex k is ρ_{vertices[k]}.
#[derive(Clone, Debug, Deserialize)]
pub struct Drawn {
    pub comment: String,
    pub group: String,
    pub rows_from: Option<String>,
    pub trivial: Option<usize>,
    pub natural: usize,
    pub vertices: Vec<usize>,
    #[serde(default)]
    pub edges: Vec<(usize, usize)>,
    #[serde(default)]
    pub arcs: Vec<(usize, usize)>,
    #[serde(default)]
    pub tensor: Vec<TensorRule>,
}

impl Drawn {
    /// Adjacency indexed by vertex position; edges count in both directions.
    pub fn adjacency(&self) -> Vec<Vec<i64>> {
        let n = self.vertices.len();
        let mut m = vec![vec![0i64; n]; n];
        for &(a, b) in &self.edges {
            m[a][b] += 1;
            m[b][a] += 1;
        }
        for &(a, b) in &self.arcs {
            m[a][b] += 1;
        }
        m
    }

    pub fn position(&self, rho: usize) -> Option<usize> {
        self.vertices.iter().position(|&v| v == rho)
    }
}

#[derive(Clone, Debug, Deserialize)]
pub struct FamilyShape {
    pub family: String,
    pub n: (u32, u32),
    pub ade: String,
    pub offset: i64,
}

#[derive(Clone, Debug, Deserialize)]
pub struct GroupShape {
    pub group: String,
    pub ade: String,
}

#[derive(Clone, Debug, Deserialize)]
pub struct Shapes {
    pub comment: String,
    pub families: Vec<FamilyShape>,
    pub groups: Vec<GroupShape>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_file_parses() {
        for id in ["T3", "T8"] {
            let t: Table = load(id).unwrap();
            let v = t.values().unwrap();
            assert_eq!(v.len(), t.sizes.len());
            assert!(v.iter().all(|r| r.len() == t.sizes.len()));
        }
        load::<Indicators>("T5").unwrap();
        for id in ["T6", "T7", "T13", "T14", "T15"] {
            load::<Columns>(id).unwrap();
        }
        load::<LabelledGraphs>("T16").unwrap();
        for id in ["T17", "T18", "T19"] {
            load::<Axial>(id).unwrap();
        }
        for id in ["F4", "F9", "F10"] {
            load::<Drawn>(id).unwrap();
        }
        load::<Shapes>("F6").unwrap();
        assert!(source("T4").is_none());
    }

    #[test]
    fn zeta_symbol() {
        let t: Table = load("T8").unwrap();
        let v = t.values().unwrap();
        let zeta: Cyc = cyclo::parse("i*w+i").unwrap();
        assert_eq!(zeta.pow(12), Cyc::one());
        assert!(v.iter().flatten().any(|x| *x == zeta.pow(5)));
    }
}
