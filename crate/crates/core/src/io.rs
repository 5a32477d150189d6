//! JSON documents for spaces, functions, families and maps.
//!
//! References to other documents are either inline objects or paths, which
//! are resolved against the directory of the referring file.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functions::{format_rational, parse_rational, FnFamily, ScalarFn, ValueGrid};
use crate::morphisms::CompatMap;
use crate::topology::{FiniteSpace, PointSet, SpaceMap};

/// `{"n": 3, "opens": [[0], [0, 1]]}`; the empty and full sets are implied.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceDoc {
    pub n: usize,
    pub opens: Vec<Vec<usize>>,
}

impl SpaceDoc {
    pub fn from_space(space: &FiniteSpace) -> Self {
        SpaceDoc {
            n: space.len(),
            opens: space.opens().iter().map(PointSet::to_vec).collect(),
        }
    }

    pub fn to_space(&self) -> Result<FiniteSpace> {
        if self.n > crate::topology::MAX_POINTS {
            return Err(Error::TooManyPoints(self.n));
        }
        let mut opens = vec![PointSet::empty(self.n), PointSet::full(self.n)];
        for o in &self.opens {
            opens.push(PointSet::from_points(self.n, o.iter().copied())?);
        }
        FiniteSpace::new(self.n, opens)
    }
}

/// `{"values": ["1", "-1/2"]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionDoc {
    pub values: Vec<String>,
}

impl FunctionDoc {
    pub fn from_function(f: &ScalarFn) -> Self {
        FunctionDoc {
            values: f.values().iter().map(format_rational).collect(),
        }
    }

    pub fn to_function(&self, space: &Arc<FiniteSpace>) -> Result<ScalarFn> {
        let values = self.values.iter().map(|v| parse_rational(v)).collect::<Result<Vec<_>>>()?;
        ScalarFn::new(space.clone(), values)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DocRef<T> {
    Path(String),
    Inline(T),
}

/// A family: every continuous function into `grid`, or an explicit list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyDoc {
    pub space: DocRef<SpaceDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub functions: Option<Vec<FunctionDoc>>,
}

/// `{"source": family, "target": family, "assignment": [..]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapDoc {
    pub source: DocRef<FamilyDoc>,
    pub target: DocRef<FamilyDoc>,
    pub assignment: Vec<usize>,
}

/// A point map, `{"assignment": [..]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointMapDoc {
    pub assignment: Vec<usize>,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn base_dir(path: &Path) -> PathBuf {
    path.parent().map(Path::to_path_buf).unwrap_or_default()
}

fn resolve<T>(r: &DocRef<T>, base: &Path) -> Result<(T, PathBuf)>
where
    T: for<'de> Deserialize<'de> + Clone,
{
    match r {
        DocRef::Inline(doc) => Ok((doc.clone(), base.to_path_buf())),
        DocRef::Path(p) => {
            let path = base.join(p);
            let doc = serde_json::from_str(&read(&path)?)?;
            Ok((doc, base_dir(&path)))
        }
    }
}

pub fn parse_space(text: &str) -> Result<FiniteSpace> {
    serde_json::from_str::<SpaceDoc>(text)?.to_space()
}

pub fn load_space(path: &Path) -> Result<FiniteSpace> {
    parse_space(&read(path)?)
}

/// Reads a JSON array of functions, or a single function object.
pub fn load_functions(path: &Path, space: &Arc<FiniteSpace>) -> Result<Vec<ScalarFn>> {
    let value: serde_json::Value = serde_json::from_str(&read(path)?)?;
    let docs: Vec<FunctionDoc> = if value.is_array() {
        serde_json::from_value(value)?
    } else {
        vec![serde_json::from_value(value)?]
    };
    docs.iter().map(|d| d.to_function(space)).collect()
}

fn family_from_doc(doc: &FamilyDoc, base: &Path) -> Result<FnFamily> {
    let (space_doc, _) = resolve(&doc.space, base)?;
    let space = Arc::new(space_doc.to_space()?);
    match (&doc.grid, &doc.functions) {
        (Some(grid), None) => FnFamily::from_grid(space, grid.parse::<ValueGrid>()?),
        (None, Some(fs)) => {
            let functions = fs.iter().map(|f| f.to_function(&space)).collect::<Result<Vec<_>>>()?;
            FnFamily::from_functions(space, functions)
        }
        _ => Err(Error::Json("a family needs exactly one of `grid` and `functions`".into())),
    }
}

pub fn load_family(path: &Path) -> Result<FnFamily> {
    let doc: FamilyDoc = serde_json::from_str(&read(path)?)?;
    family_from_doc(&doc, &base_dir(path))
}

pub fn load_map(path: &Path) -> Result<CompatMap> {
    let doc: MapDoc = serde_json::from_str(&read(path)?)?;
    let base = base_dir(path);
    let (src, src_base) = resolve(&doc.source, &base)?;
    let source = Arc::new(family_from_doc(&src, &src_base)?);
    let target = if doc.source == doc.target {
        source.clone()
    } else {
        let (tgt, tgt_base) = resolve(&doc.target, &base)?;
        Arc::new(family_from_doc(&tgt, &tgt_base)?)
    };
    CompatMap::new(source, target, doc.assignment)
}

pub fn load_point_map(path: &Path, source: &FiniteSpace, target: &FiniteSpace) -> Result<SpaceMap> {
    let doc: PointMapDoc = serde_json::from_str(&read(path)?)?;
    SpaceMap::new(source.clone(), target.clone(), doc.assignment)
}

pub fn family_doc(family: &FnFamily) -> FamilyDoc {
    let space = DocRef::Inline(SpaceDoc::from_space(family.space()));
    match family.grid() {
        Some(g) => FamilyDoc {
            space,
            grid: Some(g.to_string().trim_matches(['{', '}']).to_string()),
            functions: None,
        },
        None => FamilyDoc {
            space,
            grid: None,
            functions: Some(family.functions().iter().map(FunctionDoc::from_function).collect()),
        },
    }
}

pub fn map_doc(map: &CompatMap) -> MapDoc {
    MapDoc {
        source: DocRef::Inline(family_doc(map.source())),
        target: DocRef::Inline(family_doc(map.target())),
        assignment: map.assignment().to_vec(),
    }
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    fs::write(path, text + "\n").map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scratch(name: &str) -> PathBuf {
        let dir = std::env::temp_dir().join(format!("compat-io-{}-{name}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        dir
    }

    #[test]
    fn space_round_trip() {
        let s = FiniteSpace::sierpinski();
        let doc = SpaceDoc::from_space(&s);
        assert_eq!(doc.to_space().unwrap(), s);
        let text = r#"{"n": 2, "opens": [[0]]}"#;
        assert_eq!(parse_space(text).unwrap(), s);
        assert!(matches!(parse_space(r#"{"n": 2, "opens": [[0], [1], [5]]}"#), Err(Error::PointOutOfRange { .. })));
        assert!(matches!(parse_space(r#"{"n": 2}"#), Err(Error::Json(_))));
    }

    #[test]
    fn discontinuous_function_names_fiber() {
        let s = Arc::new(FiniteSpace::sierpinski());
        let doc = FunctionDoc {
            values: vec!["0".into(), "1/2".into()],
        };
        match doc.to_function(&s) {
            Err(Error::Discontinuous { fiber, .. }) => assert_eq!(fiber, vec![1]),
            other => panic!("{other:?}"),
        }
        let ok = FunctionDoc {
            values: vec!["-3/4".into(), "-6/8".into()],
        };
        assert_eq!(ok.to_function(&s).unwrap().values(), &[crate::functions::ratio(-3, 4), crate::functions::ratio(-3, 4)]);
    }

    #[test]
    fn map_with_relative_paths() {
        let dir = scratch("map");
        write_json(&dir.join("d2.json"), &SpaceDoc::from_space(&FiniteSpace::discrete(2))).unwrap();
        let fam = FamilyDoc {
            space: DocRef::Path("d2.json".into()),
            grid: Some("0,1".into()),
            functions: None,
        };
        write_json(&dir.join("fam.json"), &fam).unwrap();
        let text = r#"{"source": "fam.json", "target": "fam.json", "assignment": [0, 2, 1, 3]}"#;
        fs::write(dir.join("map.json"), text).unwrap();
        let map = load_map(&dir.join("map.json")).unwrap();
        assert!(map.is_compat_iso());
        assert_eq!(map.source().len(), 4);

        let inline = map_doc(&map);
        let back: MapDoc = serde_json::from_str(&serde_json::to_string(&inline).unwrap()).unwrap();
        assert_eq!(back, inline);
        fs::remove_dir_all(dir).unwrap();
    }
}
