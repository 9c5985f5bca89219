//! JSON file formats.
//!
//! Identities are `{"n", "flavor", "classes", ["domain"], ["labels"]}` with every
//! subset written as its ascending element list. Colorings are either an
//! explicit table keyed by `"x,y"` or a builtin recipe. Catalogs carry each
//! entry's construction trace so that loading can replay and verify it.

use std::collections::BTreeMap;
use std::fmt;

use identity_lab_core::criterion::{CriterionVerdict, Rejection};
use identity_lab_core::families::LabeledIdentity;
use identity_lab_core::oracle::{self, Coloring, Realization};
use identity_lab_core::{BitString, Catalog, CatalogEntry, Flavor, Identity, Step, SubsetCode};
use serde::de::{self, MapAccess, Visitor};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Value};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Core(#[from] identity_lab_core::Error),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T, E = FormatError> = std::result::Result<T, E>;

fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(FormatError::Invalid(msg.into()))
}

fn subset_out(s: SubsetCode) -> Vec<usize> {
    s.to_vec()
}

fn subset_in(elems: &[usize]) -> Result<SubsetCode> {
    let s = SubsetCode::from_elems(elems.iter().copied())
        .ok_or_else(|| FormatError::Invalid(format!("element out of range in {elems:?}")))?;
    if s.len() != elems.len() {
        return invalid(format!("repeated element in {elems:?}"));
    }
    Ok(s)
}

/// Point labels, written as a map whose keys appear in numeric order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Labels(pub Vec<String>);

impl Serialize for Labels {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = ser.serialize_map(Some(self.0.len()))?;
        for (i, l) in self.0.iter().enumerate() {
            m.serialize_entry(&i.to_string(), l)?;
        }
        m.end()
    }
}

impl<'de> Deserialize<'de> for Labels {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let raw = BTreeMap::<String, String>::deserialize(de)?;
        let mut keyed = BTreeMap::new();
        for (k, v) in raw {
            let i: usize = k.parse().map_err(|_| de::Error::custom(format!("label key {k:?} is not a point")))?;
            keyed.insert(i, v);
        }
        if keyed.keys().copied().ne(0..keyed.len()) {
            return Err(de::Error::custom("label keys must be 0..n-1"));
        }
        Ok(Labels(keyed.into_values().collect()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdentityJson {
    pub n: usize,
    pub flavor: String,
    pub classes: Vec<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Labels>,
}

fn flavor_in(s: &str) -> Result<Flavor> {
    match s {
        "full" => Ok(Flavor::Full),
        "partial" => Ok(Flavor::Partial),
        "pairs" => Ok(Flavor::Pairs),
        other => invalid(format!("unknown flavor {other:?}")),
    }
}

impl IdentityJson {
    pub fn from_identity(s: &Identity) -> Self {
        IdentityJson {
            n: s.n(),
            flavor: s.flavor().as_str().to_string(),
            classes: s.classes().iter().map(|c| c.iter().map(|&m| subset_out(m)).collect()).collect(),
            domain: s.domain().map(|d| {
                let mut d: Vec<Vec<usize>> = d.iter().map(|&m| subset_out(m)).collect();
                d.sort();
                d
            }),
            labels: None,
        }
    }

    pub fn from_labeled(s: &LabeledIdentity) -> Self {
        let mut out = Self::from_identity(s.base());
        out.labels = Some(Labels(s.labels().iter().map(|l| l.to_string()).collect()));
        out
    }

    pub fn to_identity(&self) -> Result<Identity> {
        let flavor = flavor_in(&self.flavor)?;
        let classes = self
            .classes
            .iter()
            .map(|c| c.iter().map(|m| subset_in(m)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let domain = match &self.domain {
            Some(d) => Some(d.iter().map(|m| subset_in(m)).collect::<Result<Vec<_>>>()?),
            None => None,
        };
        Ok(Identity::from_parts(self.n, flavor, classes, domain).map_err(identity_lab_core::Error::from)?)
    }

    pub fn to_labeled(&self) -> Result<Option<LabeledIdentity>> {
        let Some(labels) = &self.labels else { return Ok(None) };
        let strings = labels
            .0
            .iter()
            .map(|l| BitString::parse(l).ok_or_else(|| FormatError::Invalid(format!("label {l:?} is not a binary string"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(Some(LabeledIdentity::new(self.to_identity()?, strings)?))
    }
}

pub fn identity_to_string(s: &Identity) -> String {
    serde_json::to_string(&IdentityJson::from_identity(s)).expect("identity serializes")
}

pub fn parse_identity(text: &str) -> Result<Identity> {
    serde_json::from_str::<IdentityJson>(text)?.to_identity()
}

/// A construction step, written `["dup", m]` or `["res", [points]]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepJson(pub Step);

impl Serialize for StepJson {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        match &self.0 {
            Step::Dup(m) => json!(["dup", m]),
            Step::Res(keep) => json!(["res", keep]),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for StepJson {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let v = Value::deserialize(de)?;
        let bad = || de::Error::custom(format!("bad trace step {v}"));
        let arr = v.as_array().filter(|a| a.len() == 2).ok_or_else(bad)?;
        match arr[0].as_str() {
            Some("dup") => Ok(StepJson(Step::Dup(arr[1].as_u64().ok_or_else(bad)? as usize))),
            Some("res") => {
                let keep: Vec<usize> = serde_json::from_value(arr[1].clone()).map_err(|_| bad())?;
                Ok(StepJson(Step::Res(keep)))
            }
            _ => Err(bad()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CatalogEntryJson {
    pub identity: IdentityJson,
    pub trace: Vec<StepJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CatalogJson {
    pub max_n: usize,
    pub entries: Vec<CatalogEntryJson>,
}

impl CatalogJson {
    pub fn from_catalog(cat: &Catalog) -> Self {
        CatalogJson {
            max_n: cat.max_n(),
            entries: cat
                .entries()
                .iter()
                .map(|e| CatalogEntryJson {
                    identity: IdentityJson::from_identity(&e.identity),
                    trace: e.trace.iter().cloned().map(StepJson).collect(),
                })
                .collect(),
        }
    }

    /// Rebuilds the catalog, replaying every trace.
    pub fn to_catalog(&self) -> Result<Catalog> {
        let entries = self
            .entries
            .iter()
            .map(|e| {
                Ok(CatalogEntry {
                    identity: e.identity.to_identity()?,
                    trace: e.trace.iter().map(|s| s.0.clone()).collect(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let flavor = entries.first().map_or(Flavor::Pairs, |e| e.identity.flavor());
        Ok(Catalog::from_entries(self.max_n, flavor, entries)?)
    }
}

/// How a coloring is specified in a file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ColoringSpec {
    Table { n: usize, arity: usize, table: Vec<(SubsetCode, u32)>, vertex: Option<Vec<u32>> },
    MinPair { n: usize },
    Constant { n: usize },
    Random { n: usize, colors: u32, seed: u64 },
    SierpinskiLen { len: usize },
    SierpinskiStrings { strings: Vec<String> },
    Product(Box<ColoringSpec>, Box<ColoringSpec>),
}

fn table_key(s: SubsetCode) -> String {
    s.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

struct TableMap<'a>(&'a [(SubsetCode, u32)]);

impl Serialize for TableMap<'_> {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = ser.serialize_map(Some(self.0.len()))?;
        for (s, c) in self.0 {
            m.serialize_entry(&table_key(*s), c)?;
        }
        m.end()
    }
}

/// Reads a table map keeping file order (keys are re-sorted by subset later).
struct RawTable(Vec<(String, u32)>);

impl<'de> Deserialize<'de> for RawTable {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = RawTable;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a map from \"x,y\" to color ids")
            }
            fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> std::result::Result<RawTable, A::Error> {
                let mut out = Vec::new();
                while let Some((k, v)) = map.next_entry::<String, u32>()? {
                    out.push((k, v));
                }
                Ok(RawTable(out))
            }
        }
        de.deserialize_map(V)
    }
}

impl ColoringSpec {
    pub fn to_value(&self) -> Value {
        match self {
            ColoringSpec::Table { n, arity, table, vertex } => {
                let mut v = json!({"n": n, "arity": arity, "table": serde_json::to_value(TableMap(table)).unwrap()});
                if let Some(vx) = vertex {
                    v["vertex"] = json!(vx);
                }
                v
            }
            ColoringSpec::MinPair { n } => json!({"builtin": "min_pair", "n": n}),
            ColoringSpec::Constant { n } => json!({"builtin": "constant", "n": n}),
            ColoringSpec::Random { n, colors, seed } => {
                json!({"builtin": "random", "n": n, "colors": colors, "seed": seed})
            }
            ColoringSpec::SierpinskiLen { len } => json!({"builtin": "sierpinski_meet", "len": len}),
            ColoringSpec::SierpinskiStrings { strings } => json!({"builtin": "sierpinski_meet", "strings": strings}),
            ColoringSpec::Product(a, b) => json!({"builtin": "product", "of": [a.to_value(), b.to_value()]}),
        }
    }

    pub fn from_value(v: &Value) -> Result<Self> {
        let obj = v.as_object().ok_or_else(|| FormatError::Invalid("a coloring must be a JSON object".into()))?;
        let int = |key: &str| -> Result<u64> {
            obj.get(key)
                .and_then(Value::as_u64)
                .ok_or_else(|| FormatError::Invalid(format!("coloring needs integer field {key:?}")))
        };
        let allowed = |keys: &[&str]| -> Result<()> {
            match obj.keys().find(|k| !keys.contains(&k.as_str())) {
                Some(k) => invalid(format!("unexpected coloring field {k:?}")),
                None => Ok(()),
            }
        };
        let Some(kind) = obj.get("builtin") else {
            allowed(&["n", "arity", "table", "vertex"])?;
            let n = int("n")? as usize;
            let arity = obj.get("arity").map_or(Ok(2), |_| int("arity"))? as usize;
            let raw: RawTable = serde_json::from_value(obj.get("table").cloned().unwrap_or(Value::Null))?;
            let mut table = Vec::with_capacity(raw.0.len());
            for (k, c) in raw.0 {
                let elems = k
                    .split(',')
                    .map(|t| t.trim().parse::<usize>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|_| FormatError::Invalid(format!("bad table key {k:?}")))?;
                table.push((subset_in(&elems)?, c));
            }
            table.sort_by_key(|&(s, _)| (s.len(), s));
            if table.windows(2).any(|w| w[0].0 == w[1].0) {
                return invalid("repeated table key");
            }
            let vertex = match obj.get("vertex") {
                Some(x) => Some(serde_json::from_value(x.clone())?),
                None => None,
            };
            return Ok(ColoringSpec::Table { n, arity, table, vertex });
        };
        match kind.as_str() {
            Some("min_pair") => {
                allowed(&["builtin", "n"])?;
                Ok(ColoringSpec::MinPair { n: int("n")? as usize })
            }
            Some("constant") => {
                allowed(&["builtin", "n"])?;
                Ok(ColoringSpec::Constant { n: int("n")? as usize })
            }
            Some("random") => {
                allowed(&["builtin", "n", "colors", "seed"])?;
                let colors = u32::try_from(int("colors")?).map_err(|_| FormatError::Invalid("too many colors".into()))?;
                Ok(ColoringSpec::Random { n: int("n")? as usize, colors, seed: int("seed")? })
            }
            Some("sierpinski_meet") => {
                allowed(&["builtin", "len", "strings"])?;
                match obj.get("strings") {
                    Some(s) => Ok(ColoringSpec::SierpinskiStrings { strings: serde_json::from_value(s.clone())? }),
                    None => Ok(ColoringSpec::SierpinskiLen { len: int("len")? as usize }),
                }
            }
            Some("product") => {
                allowed(&["builtin", "of"])?;
                let parts = obj
                    .get("of")
                    .and_then(Value::as_array)
                    .filter(|a| a.len() == 2)
                    .ok_or_else(|| FormatError::Invalid("product needs \"of\": [a, b]".into()))?;
                Ok(ColoringSpec::Product(
                    Box::new(Self::from_value(&parts[0])?),
                    Box::new(Self::from_value(&parts[1])?),
                ))
            }
            _ => invalid(format!("unknown builtin coloring {kind}")),
        }
    }

    pub fn build(&self) -> Result<Coloring> {
        Ok(match self {
            ColoringSpec::Table { n, arity, table, vertex } => {
                Coloring::new(*n, *arity, table.iter().copied().collect(), vertex.clone())?
            }
            ColoringSpec::MinPair { n } => oracle::min_pair(*n)?,
            ColoringSpec::Constant { n } => oracle::constant(*n)?,
            ColoringSpec::Random { n, colors, seed } => oracle::random(*n, *colors, *seed)?,
            ColoringSpec::SierpinskiLen { len } => oracle::sierpinski_meet_len(*len)?,
            ColoringSpec::SierpinskiStrings { strings } => {
                let parsed = strings
                    .iter()
                    .map(|s| BitString::parse(s).ok_or_else(|| FormatError::Invalid(format!("{s:?} is not a binary string"))))
                    .collect::<Result<Vec<_>>>()?;
                oracle::sierpinski_meet(parsed)?
            }
            ColoringSpec::Product(a, b) => oracle::product(&a.build()?, &b.build()?)?,
        })
    }

    /// The explicit table form of a built coloring.
    pub fn from_coloring(c: &Coloring) -> Self {
        let mut table: Vec<(SubsetCode, u32)> = c.table().iter().map(|(&s, &c)| (s, c)).collect();
        table.sort_by_key(|&(s, _)| (s.len(), s));
        ColoringSpec::Table { n: c.n(), arity: c.arity(), table, vertex: c.vertex().map(<[u32]>::to_vec) }
    }
}

pub fn parse_coloring(text: &str) -> Result<ColoringSpec> {
    ColoringSpec::from_value(&serde_json::from_str(text)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum RejectionJson {
    SupportCycle { cycle: Vec<usize> },
    Separation { a: usize, b: usize },
    NoEndpointOrder,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerdictJson {
    pub accepted: bool,
    pub strengthened: bool,
    pub classes: Vec<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub endpoints: Option<Vec<[Vec<usize>; 2]>>,
    pub edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rejection: Option<RejectionJson>,
    pub prefixes: u64,
}

impl VerdictJson {
    pub fn from_verdict(v: &CriterionVerdict) -> Self {
        VerdictJson {
            accepted: v.accepted,
            strengthened: v.strengthened,
            classes: v.classes.iter().map(|c| c.iter().map(|&m| subset_out(m)).collect()).collect(),
            order: v.order.clone(),
            h: v.h.clone(),
            endpoints: v.endpoints.as_ref().map(|e| e.iter().map(|&(a, b)| [subset_out(a), subset_out(b)]).collect()),
            edges: v.edges.clone(),
            rejection: v.rejection.as_ref().map(|r| match r {
                Rejection::SupportCycle(c) => RejectionJson::SupportCycle { cycle: c.clone() },
                Rejection::Separation { a, b } => RejectionJson::Separation { a: *a, b: *b },
                Rejection::NoEndpointOrder => RejectionJson::NoEndpointOrder,
            }),
            prefixes: v.prefixes,
        }
    }

    pub fn to_verdict(&self) -> Result<CriterionVerdict> {
        let subsets = |v: &[Vec<usize>]| v.iter().map(|m| subset_in(m)).collect::<Result<Vec<_>>>();
        Ok(CriterionVerdict {
            accepted: self.accepted,
            strengthened: self.strengthened,
            classes: self.classes.iter().map(|c| subsets(c)).collect::<Result<Vec<_>>>()?,
            order: self.order.clone(),
            h: self.h.clone(),
            endpoints: match &self.endpoints {
                Some(e) => Some(
                    e.iter()
                        .map(|[a, b]| Ok((subset_in(a)?, subset_in(b)?)))
                        .collect::<Result<Vec<_>>>()?,
                ),
                None => None,
            },
            edges: self.edges.clone(),
            rejection: self.rejection.as_ref().map(|r| match r {
                RejectionJson::SupportCycle { cycle } => Rejection::SupportCycle(cycle.clone()),
                RejectionJson::Separation { a, b } => Rejection::Separation { a: *a, b: *b },
                RejectionJson::NoEndpointOrder => Rejection::NoEndpointOrder,
            }),
            prefixes: self.prefixes,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RealizationJson {
    pub embedding: Vec<usize>,
    pub ordered: bool,
    pub pulled_colors: Vec<u32>,
}

impl RealizationJson {
    pub fn from_realization(r: &Realization) -> Self {
        RealizationJson {
            embedding: r.embedding.map().to_vec(),
            ordered: r.embedding.is_ordered(),
            pulled_colors: r.pulled_colors.clone(),
        }
    }

    pub fn to_realization(&self) -> Result<Realization> {
        Ok(Realization {
            embedding: identity_lab_core::Embedding::new(self.embedding.clone(), self.ordered)?,
            pulled_colors: self.pulled_colors.clone(),
        })
    }
}
