//! Serializable report documents. Rationals travel as `"p/q"` strings,
//! subsets as sorted lists and the collapsed state as `"X"`.

use std::fmt;

use semihier::{rational, Matrix, Rational};
use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Exact(pub Rational);

impl Serialize for Exact {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&rational::to_pq(&self.0))
    }
}

impl<'de> Deserialize<'de> for Exact {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        rational::parse(&text).map(Exact).map_err(de::Error::custom)
    }
}

impl fmt::Display for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub fn exact_vec(values: &[Rational]) -> Vec<Exact> {
    values.iter().cloned().map(Exact).collect()
}

pub fn exact_rows(m: &Matrix) -> Vec<Vec<Exact>> {
    m.to_rows().iter().map(|r| exact_vec(r)).collect()
}

/// A state label at some level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StateLabel {
    Subset(Vec<usize>),
    Collapsed,
}

impl Serialize for StateLabel {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            StateLabel::Subset(members) => members.serialize(s),
            StateLabel::Collapsed => s.serialize_str("X"),
        }
    }
}

impl<'de> Deserialize<'de> for StateLabel {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Members(Vec<usize>),
            Tag(String),
        }
        match Raw::deserialize(d)? {
            Raw::Members(m) => Ok(StateLabel::Subset(m)),
            Raw::Tag(t) if t == "X" => Ok(StateLabel::Collapsed),
            Raw::Tag(t) => Err(de::Error::custom(format!("unknown state label {t:?}"))),
        }
    }
}

impl fmt::Display for StateLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateLabel::Subset(m) => {
                let digits: Vec<String> = m.iter().map(ToString::to_string).collect();
                let sep = if m.iter().any(|&v| v > 9) { "," } else { "" };
                write!(f, "{}", digits.join(sep))
            }
            StateLabel::Collapsed => write!(f, "X"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemEcho {
    pub n: usize,
    pub colors: Vec<Vec<usize>>,
    pub weights: Vec<Exact>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub input: SystemEcho,
    #[serde(flatten)]
    pub payload: Payload,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "command", content = "result", rename_all = "lowercase")]
pub enum Payload {
    Hierarchy(HierarchyReport),
    Kernel(KernelReport),
    Limits(LimitsReport),
    Fields(FieldsReport),
    Rank(RankReport),
    RightGroup(RightGroupReport),
    Construct(ConstructReport),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HierarchyReport {
    pub level: usize,
    pub augmented: bool,
    pub labels: Vec<StateLabel>,
    pub matrices: Vec<ColorMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle_agrees: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inclusion: Option<InclusionBlock>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColorMatrix {
    pub color: Vec<usize>,
    pub rows: Vec<Vec<Exact>>,
}

/// The operator from a level down to the one below it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InclusionBlock {
    pub from: usize,
    pub to: usize,
    pub column_labels: Vec<StateLabel>,
    pub rows: Vec<Vec<Exact>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelReport {
    pub semigroup_size: usize,
    pub kernel_size: usize,
    pub rank: usize,
    pub group_order: usize,
    pub partitions: Vec<Vec<Vec<usize>>>,
    pub ranges: Vec<Vec<usize>>,
    /// `idempotents[x][y]` has partition `x` and range `y`.
    pub idempotents: Vec<Vec<Vec<usize>>>,
    pub local_group_abelian: bool,
    pub local_group_orders: Vec<usize>,
    pub right_group: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LimitsReport {
    pub kernel_size: usize,
    pub group_order: usize,
    pub alpha: Vec<Exact>,
    pub beta: Vec<Exact>,
    pub lambda: Vec<WeightedElement>,
    pub idempotent: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightedElement {
    pub element: Vec<usize>,
    pub weight: Exact,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldsReport {
    pub rank: usize,
    pub stationary: Vec<Exact>,
    pub levels: Vec<LevelFields>,
}

/// `raw` entries are the column or row sums of the level projection;
/// `values` are normalized to sum one (π) or maximum one (u).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelFields {
    pub level: usize,
    pub labels: Vec<StateLabel>,
    pub pi_raw: Vec<Exact>,
    pub pi: Vec<Exact>,
    pub u_raw: Vec<Exact>,
    pub u: Vec<Exact>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankReport {
    pub rank: usize,
    pub witness: Vec<Exact>,
    pub kernel_rank: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RightGroupReport {
    pub right_group: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partition: Option<Vec<Vec<usize>>>,
    pub pair_labels: Vec<StateLabel>,
    pub u2: Vec<Exact>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructReport {
    pub case: String,
    pub system: SystemEcho,
    pub classification: Classification,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub case: String,
    pub doubleton: Vec<usize>,
    pub relabel: Vec<usize>,
    pub q: Exact,
    pub max_in_degree: usize,
    pub max_in_neighbours: usize,
    pub right_group: bool,
    pub consistent: bool,
    pub pi: Vec<Exact>,
    pub beta: Vec<Exact>,
    pub ranges: Vec<Vec<usize>>,
    pub u2: Vec<Exact>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_round_trip() {
        let labels = vec![StateLabel::Subset(vec![1, 3]), StateLabel::Collapsed];
        let text = serde_json::to_string(&labels).unwrap();
        assert_eq!(text, r#"[[1,3],"X"]"#);
        assert_eq!(serde_json::from_str::<Vec<StateLabel>>(&text).unwrap(), labels);
        assert!(serde_json::from_str::<StateLabel>(r#""Y""#).is_err());
    }

    #[test]
    fn rationals_serialize_as_fractions() {
        let v = exact_vec(&[rational::ratio(2, 6), rational::int(3)]);
        let text = serde_json::to_string(&v).unwrap();
        assert_eq!(text, r#"["1/3","3/1"]"#);
        assert_eq!(serde_json::from_str::<Vec<Exact>>(&text).unwrap(), v);
    }
}
