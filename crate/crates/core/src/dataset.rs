//! Schemas, objects, labels, and the specification built from them.
//!
//! Objects arrive as attribute maps in a JSON dataset; nothing here looks at
//! pixels. A dataset is validated once on load and is immutable afterwards.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::dsl::Action;
use crate::error::{Error, Result};

/// Name of the attribute added by identifier injection.
pub const IDENTIFIER_ATTRIBUTE: &str = "Id";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AttributeKind {
    Categorical { domain: Vec<String> },
    Numeric {
        #[serde(rename = "min")]
        lower_bound: f64,
        #[serde(rename = "max")]
        upper_bound: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttributeSchema {
    pub name: String,
    #[serde(flatten)]
    pub kind: AttributeKind,
}

impl AttributeSchema {
    pub fn categorical<S: Into<String>>(name: &str, domain: impl IntoIterator<Item = S>) -> Self {
        AttributeSchema {
            name: name.to_string(),
            kind: AttributeKind::Categorical {
                domain: domain.into_iter().map(Into::into).collect(),
            },
        }
    }

    pub fn numeric(name: &str, lower_bound: f64, upper_bound: f64) -> Self {
        AttributeSchema {
            name: name.to_string(),
            kind: AttributeKind::Numeric {
                lower_bound,
                upper_bound,
            },
        }
    }

    fn validate(&self, class: &str) -> Result<()> {
        let context = format!("class `{class}`, attribute `{}`", self.name);
        match &self.kind {
            AttributeKind::Categorical { domain } => {
                if domain.is_empty() {
                    return Err(Error::schema(context, "categorical domain is empty"));
                }
                let mut seen = BTreeSet::new();
                for symbol in domain {
                    if !seen.insert(symbol) {
                        return Err(Error::schema(context, format!("duplicate symbol `{symbol}`")));
                    }
                }
            }
            AttributeKind::Numeric {
                lower_bound,
                upper_bound,
            } => {
                if !(lower_bound.is_finite() && upper_bound.is_finite()) {
                    return Err(Error::schema(context, "numeric bounds must be finite"));
                }
                if lower_bound >= upper_bound {
                    return Err(Error::schema(
                        context,
                        format!("lower bound {lower_bound} is not below upper bound {upper_bound}"),
                    ));
                }
            }
        }
        Ok(())
    }
}

/// The attribute universe of one object class. Attribute order is the
/// canonical coordinate order of the class lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassSchema {
    pub class_name: String,
    pub attributes: Vec<AttributeSchema>,
}

impl ClassSchema {
    pub fn new(class_name: &str, attributes: Vec<AttributeSchema>) -> Result<Self> {
        let schema = ClassSchema {
            class_name: class_name.to_string(),
            attributes,
        };
        schema.validate()?;
        Ok(schema)
    }

    fn validate(&self) -> Result<()> {
        let mut names = BTreeSet::new();
        for attr in &self.attributes {
            if !names.insert(attr.name.as_str()) {
                return Err(Error::schema(
                    format!("class `{}`", self.class_name),
                    format!("attribute `{}` declared twice", attr.name),
                ));
            }
            attr.validate(&self.class_name)?;
        }
        Ok(())
    }

    pub fn attribute(&self, name: &str) -> Option<&AttributeSchema> {
        self.attributes.iter().find(|a| a.name == name)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Value {
    Number(f64),
    Symbol(String),
}

impl Value {
    pub fn as_number(&self) -> Option<f64> {
        match self {
            Value::Number(n) => Some(*n),
            Value::Symbol(_) => None,
        }
    }

    pub fn as_symbol(&self) -> Option<&str> {
        match self {
            Value::Symbol(s) => Some(s),
            Value::Number(_) => None,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Number(n) => write!(f, "{n}"),
            Value::Symbol(s) => f.write_str(s),
        }
    }
}

/// Axis-aligned bounding box in pixels.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Region {
    pub x: f64,
    pub y: f64,
    pub w: f64,
    pub h: f64,
}

impl Region {
    pub fn contains(&self, px: f64, py: f64) -> bool {
        px >= self.x && px <= self.x + self.w && py >= self.y && py <= self.y + self.h
    }

    pub fn area(&self) -> f64 {
        self.w * self.h
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ObjectRecord {
    pub id: String,
    #[serde(rename = "class")]
    pub class_name: String,
    pub region: Region,
    pub attributes: BTreeMap<String, Value>,
}

impl ObjectRecord {
    pub fn value(&self, attribute: &str) -> Option<&Value> {
        self.attributes.get(attribute)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub schemas: BTreeMap<String, ClassSchema>,
    pub objects: Vec<ObjectRecord>,
}

// Wire format. Kept separate so validation happens in exactly one place.

#[derive(Deserialize, Serialize)]
struct RawDataset {
    schemas: BTreeMap<String, RawClassSchema>,
    #[serde(default)]
    objects: Vec<RawObject>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    inject_identifier: bool,
}

#[derive(Deserialize, Serialize)]
struct RawClassSchema {
    attributes: Vec<AttributeSchema>,
}

#[derive(Deserialize, Serialize)]
struct RawObject {
    id: String,
    #[serde(rename = "class")]
    class_name: String,
    #[serde(default)]
    region: Region,
    #[serde(default)]
    attributes: BTreeMap<String, RawValue>,
}

#[derive(Deserialize, Serialize)]
#[serde(untagged)]
enum RawValue {
    Bool(bool),
    Number(f64),
    Symbol(String),
}

impl From<RawValue> for Value {
    fn from(raw: RawValue) -> Self {
        match raw {
            RawValue::Bool(b) => Value::Symbol(b.to_string()),
            RawValue::Number(n) => Value::Number(n),
            RawValue::Symbol(s) => Value::Symbol(s),
        }
    }
}

/// Parses and validates a dataset from its JSON form.
pub fn load_dataset(source: &[u8]) -> Result<Dataset> {
    let raw: RawDataset =
        serde_json::from_slice(source).map_err(|e| Error::Parse(e.to_string()))?;
    let mut schemas = BTreeMap::new();
    for (name, raw_schema) in raw.schemas {
        let schema = ClassSchema::new(&name, raw_schema.attributes)?;
        schemas.insert(name, schema);
    }
    let objects = raw
        .objects
        .into_iter()
        .map(|o| ObjectRecord {
            id: o.id,
            class_name: o.class_name,
            region: o.region,
            attributes: o.attributes.into_iter().map(|(k, v)| (k, v.into())).collect(),
        })
        .collect();
    let mut dataset = Dataset { schemas, objects };
    if raw.inject_identifier {
        dataset.inject_identifier()?;
    }
    dataset.validate()?;
    Ok(dataset)
}

impl Dataset {
    pub fn new(schemas: Vec<ClassSchema>, objects: Vec<ObjectRecord>) -> Result<Self> {
        let dataset = Dataset {
            schemas: schemas
                .into_iter()
                .map(|s| (s.class_name.clone(), s))
                .collect(),
            objects,
        };
        for schema in dataset.schemas.values() {
            schema.validate()?;
        }
        dataset.validate()?;
        Ok(dataset)
    }

    pub fn to_json(&self) -> String {
        let raw = RawDataset {
            schemas: self
                .schemas
                .iter()
                .map(|(name, s)| {
                    (
                        name.clone(),
                        RawClassSchema {
                            attributes: s.attributes.clone(),
                        },
                    )
                })
                .collect(),
            objects: self
                .objects
                .iter()
                .map(|o| RawObject {
                    id: o.id.clone(),
                    class_name: o.class_name.clone(),
                    region: o.region,
                    attributes: o
                        .attributes
                        .iter()
                        .map(|(k, v)| {
                            let raw = match v {
                                Value::Number(n) => RawValue::Number(*n),
                                Value::Symbol(s) => RawValue::Symbol(s.clone()),
                            };
                            (k.clone(), raw)
                        })
                        .collect(),
                })
                .collect(),
            inject_identifier: false,
        };
        serde_json::to_string_pretty(&raw).expect("dataset serialization cannot fail")
    }

    pub fn schema(&self, class: &str) -> Option<&ClassSchema> {
        self.schemas.get(class)
    }

    pub fn object(&self, id: &str) -> Option<&ObjectRecord> {
        self.objects.iter().find(|o| o.id == id)
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.objects.iter().position(|o| o.id == id)
    }

    /// Adds a categorical `Id` attribute to every class whose domain is the
    /// ids of that class's objects. Makes every object uniquely identifiable.
    pub fn inject_identifier(&mut self) -> Result<()> {
        for schema in self.schemas.values_mut() {
            if schema.attribute(IDENTIFIER_ATTRIBUTE).is_some() {
                return Err(Error::schema(
                    format!("class `{}`", schema.class_name),
                    format!("cannot inject `{IDENTIFIER_ATTRIBUTE}`: attribute already declared"),
                ));
            }
            let domain: Vec<String> = self
                .objects
                .iter()
                .filter(|o| o.class_name == schema.class_name)
                .map(|o| o.id.clone())
                .collect();
            if domain.is_empty() {
                continue;
            }
            schema
                .attributes
                .push(AttributeSchema::categorical(IDENTIFIER_ATTRIBUTE, domain));
        }
        for object in &mut self.objects {
            let has_id = self
                .schemas
                .get(&object.class_name)
                .is_some_and(|s| s.attribute(IDENTIFIER_ATTRIBUTE).is_some());
            if has_id {
                object.attributes.insert(
                    IDENTIFIER_ATTRIBUTE.to_string(),
                    Value::Symbol(object.id.clone()),
                );
            }
        }
        Ok(())
    }

    fn validate(&self) -> Result<()> {
        let mut ids = BTreeSet::new();
        let mut signatures: HashMap<(&str, String), &str> = HashMap::new();
        for object in &self.objects {
            if !ids.insert(object.id.as_str()) {
                return Err(Error::object(&object.id, "duplicate object id"));
            }
            let schema = self.schemas.get(&object.class_name).ok_or_else(|| {
                Error::object(&object.id, format!("class `{}` has no schema", object.class_name))
            })?;
            for name in object.attributes.keys() {
                if schema.attribute(name).is_none() {
                    return Err(Error::object(
                        &object.id,
                        format!("attribute `{name}` is not declared for class `{}`", schema.class_name),
                    ));
                }
            }
            for attr in &schema.attributes {
                let value = object.attributes.get(&attr.name).ok_or_else(|| {
                    Error::object(&object.id, format!("missing attribute `{}`", attr.name))
                })?;
                check_value(&object.id, attr, value)?;
            }
            // Attribute maps are BTreeMaps, so the debug form is canonical.
            let signature = format!("{:?}", object.attributes);
            if let Some(first) =
                signatures.insert((object.class_name.as_str(), signature), object.id.as_str())
            {
                return Err(Error::DuplicateAttributes {
                    class: object.class_name.clone(),
                    first: first.to_string(),
                    second: object.id.clone(),
                });
            }
        }
        Ok(())
    }
}

fn check_value(object: &str, attr: &AttributeSchema, value: &Value) -> Result<()> {
    match (&attr.kind, value) {
        (AttributeKind::Categorical { domain }, Value::Symbol(s)) => {
            if domain.iter().any(|d| d == s) {
                Ok(())
            } else {
                Err(Error::object(
                    object,
                    format!("value `{s}` of `{}` is not in its domain", attr.name),
                ))
            }
        }
        (
            AttributeKind::Numeric {
                lower_bound,
                upper_bound,
            },
            Value::Number(n),
        ) => {
            if n.is_finite() && n >= lower_bound && n <= upper_bound {
                Ok(())
            } else {
                Err(Error::object(
                    object,
                    format!(
                        "value {n} of `{}` is outside [{lower_bound}, {upper_bound}]",
                        attr.name
                    ),
                ))
            }
        }
        (AttributeKind::Categorical { .. }, Value::Number(n)) => Err(Error::object(
            object,
            format!("categorical attribute `{}` has numeric value {n}", attr.name),
        )),
        (AttributeKind::Numeric { .. }, Value::Symbol(s)) => Err(Error::object(
            object,
            format!("numeric attribute `{}` has symbol value `{s}`", attr.name),
        )),
    }
}

/// The bundled attribute schemas for the Person, Vehicle and Text classes.
///
/// Parameterized text predicates such as `StartsWith(s)` are not part of the
/// defaults; datasets add them as boolean categorical attributes (for
/// example `StartsWith_A` with domain `["false", "true"]`).
pub fn default_schemas() -> Vec<ClassSchema> {
    const SOURCES: [&str; 3] = [
        include_str!("../schemas/person.json"),
        include_str!("../schemas/vehicle.json"),
        include_str!("../schemas/text.json"),
    ];
    SOURCES
        .iter()
        .flat_map(|src| {
            load_dataset(src.as_bytes())
                .expect("bundled schema files are valid")
                .schemas
                .into_values()
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Labels and specifications

#[derive(Debug, Clone, PartialEq)]
pub enum Label {
    Object(String),
    Click { x: f64, y: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct EditRequest {
    pub action: Action,
    pub positive: Vec<Label>,
    pub negative: Vec<Label>,
}

/// The labels file: object ids and/or click points for each polarity.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct LabelsFile {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub positive: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub negative: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub positive_clicks: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub negative_clicks: Vec<[f64; 2]>,
}

impl LabelsFile {
    pub fn parse(source: &[u8]) -> Result<Self> {
        serde_json::from_slice(source).map_err(|e| Error::Parse(format!("labels: {e}")))
    }

    pub fn into_edit(self, action: Action) -> EditRequest {
        fn labels(ids: Vec<String>, clicks: Vec<[f64; 2]>) -> Vec<Label> {
            ids.into_iter()
                .map(Label::Object)
                .chain(clicks.into_iter().map(|[x, y]| Label::Click { x, y }))
                .collect()
        }
        EditRequest {
            action,
            positive: labels(self.positive, self.positive_clicks),
            negative: labels(self.negative, self.negative_clicks),
        }
    }
}

/// For each point, the index of the object it labels, or `None` when the
/// point hits no region. Among nested regions the smallest area wins; equal
/// areas resolve to the earlier object.
pub fn resolve_clicks(dataset: &Dataset, points: &[(f64, f64)]) -> Vec<Option<usize>> {
    points
        .iter()
        .map(|&(px, py)| {
            dataset
                .objects
                .iter()
                .enumerate()
                .filter(|(_, o)| o.region.contains(px, py))
                .min_by(|(ia, a), (ib, b)| {
                    a.region
                        .area()
                        .total_cmp(&b.region.area())
                        .then(ia.cmp(ib))
                })
                .map(|(i, _)| i)
        })
        .collect()
}

/// Ω = (Π, Π⁺, Π⁻). Label sets are indices into `dataset.objects`, sorted.
#[derive(Debug, Clone, PartialEq)]
pub struct Specification<'a> {
    pub dataset: &'a Dataset,
    pub positives: Vec<usize>,
    pub negatives: Vec<usize>,
}

impl<'a> Specification<'a> {
    pub fn new(dataset: &'a Dataset, positives: Vec<usize>, negatives: Vec<usize>) -> Result<Self> {
        let positives: BTreeSet<usize> = positives.into_iter().collect();
        let negatives: BTreeSet<usize> = negatives.into_iter().collect();
        let overlap: Vec<String> = positives
            .intersection(&negatives)
            .map(|&i| dataset.objects[i].id.clone())
            .collect();
        if !overlap.is_empty() {
            return Err(Error::LabelOverlap(overlap));
        }
        if positives.is_empty() {
            return Err(Error::EmptyPositives);
        }
        Ok(Specification {
            dataset,
            positives: positives.into_iter().collect(),
            negatives: negatives.into_iter().collect(),
        })
    }

    /// Objects carrying neither label (Π°).
    pub fn neutral(&self) -> Vec<usize> {
        (0..self.dataset.objects.len())
            .filter(|i| self.positives.binary_search(i).is_err())
            .filter(|i| self.negatives.binary_search(i).is_err())
            .collect()
    }

    pub fn positive_ids(&self) -> Vec<&str> {
        self.positives
            .iter()
            .map(|&i| self.dataset.objects[i].id.as_str())
            .collect()
    }

    pub fn negative_ids(&self) -> Vec<&str> {
        self.negatives
            .iter()
            .map(|&i| self.dataset.objects[i].id.as_str())
            .collect()
    }
}

fn resolve_labels(dataset: &Dataset, labels: &[Label]) -> Result<Vec<usize>> {
    let mut out = Vec::with_capacity(labels.len());
    for label in labels {
        match label {
            Label::Object(id) => {
                out.push(
                    dataset
                        .index_of(id)
                        .ok_or_else(|| Error::UnknownObject(id.clone()))?,
                );
            }
            // A mark outside every region labels nothing.
            Label::Click { x, y } => out.extend(resolve_clicks(dataset, &[(*x, *y)])[0]),
        }
    }
    Ok(out)
}

pub fn build_specification<'a>(dataset: &'a Dataset, edit: &EditRequest) -> Result<Specification<'a>> {
    let positives = resolve_labels(dataset, &edit.positive)?;
    let negatives = resolve_labels(dataset, &edit.negative)?;
    Specification::new(dataset, positives, negatives)
}

/// Class-restricted label sets.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ClassLabels {
    pub positives: Vec<usize>,
    pub negatives: Vec<usize>,
}

/// Splits the labels by class. Only classes with at least one positive get
/// an entry; negatives of other classes are never selected because every
/// clause is guarded by its class.
pub fn partition_by_class(spec: &Specification<'_>) -> BTreeMap<String, ClassLabels> {
    let objects = &spec.dataset.objects;
    let mut out: BTreeMap<String, ClassLabels> = BTreeMap::new();
    for &i in &spec.positives {
        out.entry(objects[i].class_name.clone())
            .or_default()
            .positives
            .push(i);
    }
    for &i in &spec.negatives {
        if let Some(entry) = out.get_mut(&objects[i].class_name) {
            entry.negatives.push(i);
        }
    }
    out
}
