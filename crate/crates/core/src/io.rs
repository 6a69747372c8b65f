//! JSON interchange for complexes and maps.
//!
//! Serialization is canonical: generators keep their declared order,
//! boundary and matrix keys are sorted, supports are sorted, and generators
//! with zero differential are omitted from `boundary`. Re-serializing a
//! parsed document is byte-identical.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::complex::FilteredComplex;
use crate::error::Error;
use crate::map::{FilteredLinearMap, FilteredMap};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComplexFile {
    pub name: String,
    pub generators: Vec<GeneratorEntry>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub boundary: BTreeMap<String, Vec<String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GeneratorEntry {
    pub id: String,
    pub filtration: f64,
}

/// A complex referenced inline or by path (relative paths resolve against
/// the referencing file's directory).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ComplexRef {
    Path(String),
    Inline(ComplexFile),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MapFile {
    pub source: ComplexRef,
    pub target: ComplexRef,
    pub shift: f64,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub matrix: BTreeMap<String, Vec<String>>,
}

impl ComplexFile {
    pub fn from_complex(complex: &FilteredComplex) -> ComplexFile {
        let generators = complex
            .generators()
            .iter()
            .map(|g| GeneratorEntry { id: g.id.clone(), filtration: g.filtration })
            .collect();
        let mut boundary = BTreeMap::new();
        for i in 0..complex.len() {
            let mut support: Vec<String> =
                complex.boundary(i).iter_ones().map(|t| complex.id(t).to_string()).collect();
            if !support.is_empty() {
                support.sort();
                boundary.insert(complex.id(i).to_string(), support);
            }
        }
        ComplexFile { name: complex.name().to_string(), generators, boundary }
    }

    /// Structural conversion; axiom violations are reported by
    /// [`FilteredComplex::validate`], not here.
    pub fn into_complex(self) -> Result<FilteredComplex, Error> {
        let generators =
            self.generators.into_iter().map(|g| (g.id, g.filtration)).collect();
        let boundary: Vec<(String, Vec<String>)> = self.boundary.into_iter().collect();
        Ok(FilteredComplex::new(self.name, generators, &boundary)?)
    }
}

impl MapFile {
    /// Serialize a map with both endpoint complexes inline.
    pub fn from_map(map: &FilteredMap) -> MapFile {
        let mut matrix = BTreeMap::new();
        for g in 0..map.source().len() {
            let mut support: Vec<String> = map
                .column(g)
                .iter_ones()
                .map(|t| map.target().id(t).to_string())
                .collect();
            if !support.is_empty() {
                support.sort();
                matrix.insert(map.source().id(g).to_string(), support);
            }
        }
        MapFile {
            source: ComplexRef::Inline(ComplexFile::from_complex(map.source())),
            target: ComplexRef::Inline(ComplexFile::from_complex(map.target())),
            shift: map.shift(),
            matrix,
        }
    }

    pub fn into_map(self, base_dir: &Path) -> Result<FilteredMap, Error> {
        let source = self.source.resolve(base_dir)?;
        let target = self.target.resolve(base_dir)?;
        let matrix: Vec<(String, Vec<String>)> = self.matrix.into_iter().collect();
        let linear =
            FilteredLinearMap::from_entries(source, target, self.shift, &matrix)?;
        Ok(FilteredMap::new(linear))
    }
}

impl ComplexRef {
    pub fn resolve(self, base_dir: &Path) -> Result<FilteredComplex, Error> {
        match self {
            ComplexRef::Inline(file) => file.into_complex(),
            ComplexRef::Path(p) => {
                let path = if Path::new(&p).is_absolute() {
                    PathBuf::from(&p)
                } else {
                    base_dir.join(&p)
                };
                load_complex(&path)
            }
        }
    }
}

fn read_to_string(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path)
        .map_err(|source| Error::Io { path: path.display().to_string(), source })
}

pub fn parse_complex(text: &str, origin: &str) -> Result<FilteredComplex, Error> {
    let file: ComplexFile = serde_json::from_str(text)
        .map_err(|source| Error::Parse { path: origin.to_string(), source })?;
    file.into_complex()
}

pub fn load_complex(path: &Path) -> Result<FilteredComplex, Error> {
    parse_complex(&read_to_string(path)?, &path.display().to_string())
}

pub fn load_map(path: &Path) -> Result<FilteredMap, Error> {
    let text = read_to_string(path)?;
    let file: MapFile = serde_json::from_str(&text)
        .map_err(|source| Error::Parse { path: path.display().to_string(), source })?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    file.into_map(base)
}

pub fn complex_to_json(complex: &FilteredComplex) -> String {
    let mut out = serde_json::to_string_pretty(&ComplexFile::from_complex(complex))
        .expect("complex serialization cannot fail");
    out.push('\n');
    out
}

pub fn map_to_json(map: &FilteredMap) -> String {
    let mut out =
        serde_json::to_string_pretty(&MapFile::from_map(map)).expect("map serialization");
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_round_trip_is_canonical() {
        let c = FilteredComplex::point("g", 0.0).direct_sum(&FilteredComplex::interval(1.0, 4.0));
        let text = complex_to_json(&c);
        let parsed = parse_complex(&text, "test").unwrap();
        assert!(parsed.same_shape(&c));
        assert_eq!(complex_to_json(&parsed), text);
    }

    #[test]
    fn unknown_boundary_id_names_the_id() {
        let text = r#"{"name":"c","generators":[{"id":"x","filtration":0}],"boundary":{"x":["ghost"]}}"#;
        let err = parse_complex(text, "test").unwrap_err().to_string();
        assert!(err.contains("ghost"), "{err}");
    }

    #[test]
    fn invalid_complex_parses_then_fails_validation() {
        let text = r#"{
  "name": "bad",
  "generators": [
    {"id": "x", "filtration": 0.0},
    {"id": "y", "filtration": 0.0},
    {"id": "z", "filtration": 0.0}
  ],
  "boundary": {"y": ["x"], "z": ["y"]}
}"#;
        let c = parse_complex(text, "test").unwrap();
        assert!(!c.is_valid());
    }

    #[test]
    fn map_file_round_trips_through_temp_files() {
        let dir = std::env::temp_dir().join(format!("filtra-io-test-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let a = FilteredComplex::interval(1.0, 4.0);
        std::fs::write(dir.join("a.json"), complex_to_json(&a)).unwrap();

        let map_doc = r#"{
  "source": "a.json",
  "target": "a.json",
  "shift": 0.0,
  "matrix": {"x": ["x"], "y": ["y"]}
}"#;
        let map_path = dir.join("id.json");
        std::fs::write(&map_path, map_doc).unwrap();
        let map = load_map(&map_path).unwrap();
        let report = map.validate();
        assert!(report.ok());
        assert_eq!(report.minimal_shift, 0.0);
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn interval_file_pipeline_reaches_the_barcode() {
        let text = complex_to_json(&FilteredComplex::interval(1.0, 4.0));
        let c = parse_complex(&text, "test").unwrap();
        let bc = crate::persistence::barcode(&c).unwrap();
        assert_eq!(bc.bars().len(), 1);
        assert_eq!((bc.bars()[0].birth, bc.bars()[0].death), (1.0, 4.0));
    }
}
