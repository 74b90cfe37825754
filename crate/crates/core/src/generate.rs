//! Seeded synthetic datasets for stress tests and benchmark suites.

use std::collections::{BTreeMap, HashSet};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dataset::{AttributeSchema, ClassSchema, Dataset, LabelsFile, ObjectRecord, Region, Value};
use crate::error::{Error, Result};

pub const GENERATED_CLASS: &str = "Item";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub attrs: usize,
    /// Values per attribute: domain size for categorical attributes, integer
    /// values `0..range` for numeric ones.
    pub range: usize,
    pub pos: usize,
    pub neg: usize,
    #[serde(default)]
    pub neutral: usize,
    /// Fraction of attributes that are numeric; they come last.
    #[serde(default)]
    pub numeric_frac: f64,
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn new(attrs: usize, range: usize, pos: usize, neg: usize, seed: u64) -> Self {
        GeneratorSpec {
            attrs,
            range,
            pos,
            neg,
            neutral: 0,
            numeric_frac: 0.0,
            seed,
        }
    }

    pub fn numeric_count(&self) -> usize {
        ((self.attrs as f64) * self.numeric_frac.clamp(0.0, 1.0)).round() as usize
    }

    fn validate(&self) -> Result<()> {
        if self.attrs == 0 {
            return Err(Error::Generator("at least one attribute is required".into()));
        }
        if self.range == 0 {
            return Err(Error::Generator("range must be at least 1".into()));
        }
        if self.pos == 0 {
            return Err(Error::Generator("at least one positive is required".into()));
        }
        if !(0.0..=1.0).contains(&self.numeric_frac) {
            return Err(Error::Generator("numeric fraction must lie in [0, 1]".into()));
        }
        let total = self.pos + self.neg + self.neutral;
        let capacity = (self.range as u128).checked_pow(self.attrs as u32).unwrap_or(u128::MAX);
        if total as u128 > capacity {
            return Err(Error::Generator(format!(
                "{total} objects cannot have distinct attribute maps with {} attributes of range {}",
                self.attrs, self.range
            )));
        }
        Ok(())
    }

    pub fn schema(&self) -> ClassSchema {
        let numeric_from = self.attrs - self.numeric_count();
        let attributes = (0..self.attrs)
            .map(|i| {
                let name = format!("a{i}");
                if i >= numeric_from {
                    AttributeSchema::numeric(&name, 0.0, (self.range.max(2) - 1) as f64)
                } else {
                    AttributeSchema::categorical(&name, (0..self.range).map(|v| format!("v{v}")))
                }
            })
            .collect();
        ClassSchema::new(GENERATED_CLASS, attributes).expect("generated schema is valid")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratedCase {
    pub dataset: Dataset,
    pub labels: LabelsFile,
}

/// Uniformly random objects with distinct attribute maps. The first `pos`
/// objects are positive, the next `neg` negative, the rest unlabeled.
pub fn generate(spec: &GeneratorSpec) -> Result<GeneratedCase> {
    spec.validate()?;
    let schema = spec.schema();
    let numeric_from = spec.attrs - spec.numeric_count();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let total = spec.pos + spec.neg + spec.neutral;
    let mut seen: HashSet<Vec<usize>> = HashSet::with_capacity(total);
    let mut objects = Vec::with_capacity(total);
    while objects.len() < total {
        let values: Vec<usize> = (0..spec.attrs).map(|_| rng.gen_range(0..spec.range)).collect();
        if !seen.insert(values.clone()) {
            continue;
        }
        let i = objects.len();
        let attributes: BTreeMap<String, Value> = values
            .iter()
            .enumerate()
            .map(|(a, &v)| {
                let value = if a >= numeric_from {
                    Value::Number(v as f64)
                } else {
                    Value::Symbol(format!("v{v}"))
                };
                (format!("a{a}"), value)
            })
            .collect();
        objects.push(ObjectRecord {
            id: format!("o{i}"),
            class_name: GENERATED_CLASS.to_string(),
            region: Region {
                x: (i % 10) as f64 * 60.0,
                y: (i / 10) as f64 * 60.0,
                w: 50.0,
                h: 50.0,
            },
            attributes,
        });
    }
    let ids: Vec<String> = objects.iter().map(|o| o.id.clone()).collect();
    let dataset = Dataset::new(vec![schema], objects)?;
    Ok(GeneratedCase {
        dataset,
        labels: LabelsFile {
            positive: ids[..spec.pos].to_vec(),
            negative: ids[spec.pos..spec.pos + spec.neg].to_vec(),
            ..Default::default()
        },
    })
}
