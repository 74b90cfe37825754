//! Small bundled datasets used by tests, docs and the benchmark suite.

use crate::dataset::{load_dataset, Dataset, EditRequest, LabelsFile};
use crate::dsl::Action;

pub const MOTIVATING_DATASET: &str = include_str!("../fixtures/motivating/dataset.json");
pub const MOTIVATING_LABELS: &str = include_str!("../fixtures/motivating/labels.json");

/// Six labeled people: three positives (pi7, pi10, pi14) and three negatives.
pub fn motivating_dataset() -> Dataset {
    load_dataset(MOTIVATING_DATASET.as_bytes()).expect("bundled fixture is valid")
}

pub fn motivating_labels() -> LabelsFile {
    LabelsFile::parse(MOTIVATING_LABELS.as_bytes()).expect("bundled fixture is valid")
}

pub fn motivating_edit() -> EditRequest {
    motivating_labels().into_edit(Action::Remove)
}

/// People and vehicles in one scene.
pub fn mixed_dataset() -> Dataset {
    let src = r#"{
      "schemas": {
        "Person": {"attributes": [
          {"name": "TopStyle", "kind": "categorical", "domain": ["NoStyle", "Stride", "Logo"]},
          {"name": "Age", "kind": "numeric", "min": 0, "max": 100}]},
        "Vehicle": {"attributes": [
          {"name": "Color", "kind": "categorical", "domain": ["Red", "Blue", "White"]}]}
      },
      "objects": [
        {"id": "p1", "class": "Person", "region": {"x": 0, "y": 0, "w": 10, "h": 20}, "attributes": {"TopStyle": "NoStyle", "Age": 30}},
        {"id": "p2", "class": "Person", "region": {"x": 20, "y": 0, "w": 10, "h": 20}, "attributes": {"TopStyle": "Logo", "Age": 30}},
        {"id": "p3", "class": "Person", "region": {"x": 40, "y": 0, "w": 10, "h": 20}, "attributes": {"TopStyle": "Stride", "Age": 55}},
        {"id": "car1", "class": "Vehicle", "region": {"x": 60, "y": 0, "w": 40, "h": 20}, "attributes": {"Color": "Red"}},
        {"id": "car2", "class": "Vehicle", "region": {"x": 110, "y": 0, "w": 40, "h": 20}, "attributes": {"Color": "Blue"}},
        {"id": "car3", "class": "Vehicle", "region": {"x": 160, "y": 0, "w": 40, "h": 20}, "attributes": {"Color": "White"}}
      ]
    }"#;
    load_dataset(src.as_bytes()).expect("inline fixture is valid")
}
