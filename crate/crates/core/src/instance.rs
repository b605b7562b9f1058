//! JSON instance files.
//!
//! Vector instance:
//!
//! ```json
//! {
//!   "field": "real",
//!   "dimension": 3,
//!   "vectors": [[1, 0, 0], [0, 1, 0]],
//!   "index": [0, 1],
//!   "x": [0.5, 0.3, 0.2],
//!   "box_x": {"lower": [0, 0], "upper": [1, 1]},
//!   "y": [0.2, 0.6, 0.1],
//!   "box_y": {"lower": [0, 0], "upper": [1, 1]}
//! }
//! ```
//!
//! `vectors` holds the orthonormal family. Entries are bare numbers or
//! `[re, im]` pairs; complex-field files are always written with pairs.
//! `index` is zero-based and defaults to the whole family. `y` and `box_y`
//! are only needed for two-vector bounds.
//!
//! L² instance:
//!
//! ```json
//! {
//!   "kind": "periodic-trapezoid",
//!   "nodes": [...], "weights": [...], "rho": [...],
//!   "functions": {"f": [...], "g": [...]},
//!   "family": {"kind": "trig", "count": 1},
//!   "index": [0],
//!   "boxes": {"f": {"lower": [...], "upper": [...]}}
//! }
//! ```
//!
//! An explicit `members` list of sampled functions replaces `family`.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::bounds::CoefficientBox;
use crate::error::{Error, Result};
use crate::l2::{build_family, DiscretizedMeasure, FamilyKind, MeasureKind, WeightedL2Space};
use crate::space::{
    CoordinateSpace, Field, IndexSet, OrthonormalFamily, Scalar, Vector, DEFAULT_ORTHONORMAL_TOL,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Real(f64),
    Complex([f64; 2]),
}

impl Entry {
    pub fn to_scalar(self) -> Scalar {
        match self {
            Entry::Real(re) => Complex64::new(re, 0.0),
            Entry::Complex([re, im]) => Complex64::new(re, im),
        }
    }

    pub fn from_scalar(v: Scalar, field: Field) -> Self {
        match field {
            Field::Real => Entry::Real(v.re),
            Field::Complex => Entry::Complex([v.re, v.im]),
        }
    }
}

pub fn encode(values: &[Scalar], field: Field) -> Vec<Entry> {
    values
        .iter()
        .map(|&v| Entry::from_scalar(v, field))
        .collect()
}

pub fn decode(entries: &[Entry]) -> Vec<Scalar> {
    entries.iter().map(|e| e.to_scalar()).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxFile {
    pub lower: Vec<Entry>,
    pub upper: Vec<Entry>,
}

impl BoxFile {
    pub fn encode(bx: &CoefficientBox, field: Field) -> Self {
        Self {
            lower: encode(bx.lower(), field),
            upper: encode(bx.upper(), field),
        }
    }

    pub fn decode(&self, index: IndexSet) -> Result<CoefficientBox> {
        CoefficientBox::new(index, decode(&self.lower), decode(&self.upper))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub field: Field,
    pub dimension: usize,
    pub vectors: Vec<Vec<Entry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub index: Option<Vec<usize>>,
    pub x: Vec<Entry>,
    pub box_x: BoxFile,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<Vec<Entry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub box_y: Option<BoxFile>,
    /// Orthonormality tolerance for the family; defaults to 1e-10.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
}

/// A decoded, validated vector instance.
#[derive(Debug, Clone)]
pub struct Problem {
    pub space: CoordinateSpace,
    pub family: OrthonormalFamily,
    pub x: Vector,
    pub box_x: CoefficientBox,
    pub y: Option<Vector>,
    pub box_y: Option<CoefficientBox>,
}

impl Problem {
    pub fn index(&self) -> &IndexSet {
        self.box_x.index()
    }
}

impl InstanceFile {
    pub fn from_parts(
        space: &CoordinateSpace,
        family: &OrthonormalFamily,
        x: &Vector,
        box_x: &CoefficientBox,
        second: Option<(&Vector, &CoefficientBox)>,
    ) -> Self {
        use crate::space::InnerProductSpace;
        let field = space.field();
        Self {
            field,
            dimension: space.dimension(),
            vectors: family
                .members()
                .iter()
                .map(|m| encode(m.as_slice(), field))
                .collect(),
            index: Some(box_x.index().as_slice().to_vec()),
            x: encode(x.as_slice(), field),
            box_x: BoxFile::encode(box_x, field),
            y: second.map(|(y, _)| encode(y.as_slice(), field)),
            box_y: second.map(|(_, b)| BoxFile::encode(b, field)),
            tolerance: Some(family.tolerance()),
        }
    }

    pub fn from_problem(p: &Problem) -> Self {
        let second = p.y.as_ref().zip(p.box_y.as_ref());
        Self::from_parts(&p.space, &p.family, &p.x, &p.box_x, second)
    }

    /// Decodes and certifies the family. The family must already be
    /// orthonormal to the file's tolerance.
    pub fn to_problem(&self) -> Result<Problem> {
        let space = CoordinateSpace::new(self.field, self.dimension)?;
        let members = self
            .vectors
            .iter()
            .map(|v| Vector::new(decode(v)))
            .collect();
        let family = OrthonormalFamily::certify(
            &space,
            members,
            self.tolerance.unwrap_or(DEFAULT_ORTHONORMAL_TOL),
        )?;
        let index = match &self.index {
            Some(ix) => IndexSet::new(ix.clone(), family.len())?,
            None => IndexSet::all(family.len())?,
        };
        let box_x = self.box_x.decode(index.clone())?;
        let box_y = self.box_y.as_ref().map(|b| b.decode(index)).transpose()?;
        Ok(Problem {
            space,
            family,
            x: Vector::new(decode(&self.x)),
            box_x,
            y: self.y.as_ref().map(|y| Vector::new(decode(y))),
            box_y,
        })
    }

    /// SHA-256 of the compact JSON encoding, hex encoded.
    pub fn digest(&self) -> String {
        digest_json(self)
    }
}

pub(crate) fn digest_json<T: Serialize>(value: &T) -> String {
    let bytes = serde_json::to_vec(value).expect("instance types serialize infallibly");
    hex::encode(Sha256::digest(&bytes))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub kind: FamilyKind,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct L2InstanceFile {
    pub kind: MeasureKind,
    #[serde(default = "default_field")]
    pub field: Field,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub rho: Vec<f64>,
    pub functions: BTreeMap<String, Vec<Entry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<FamilySpec>,
    /// Explicit sampled family members; take precedence over `family`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub members: Option<Vec<Vec<Entry>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub index: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub boxes: BTreeMap<String, BoxFile>,
}

fn default_field() -> Field {
    Field::Real
}

impl L2InstanceFile {
    pub fn space(&self) -> Result<WeightedL2Space> {
        let measure =
            DiscretizedMeasure::from_rule(self.kind, self.nodes.clone(), self.weights.clone())?;
        WeightedL2Space::new(measure, self.rho.clone(), self.field)
    }

    pub fn function(&self, name: &str) -> Result<Vector> {
        self.functions
            .get(name)
            .map(|v| Vector::new(decode(v)))
            .ok_or_else(|| Error::InvalidParameter(format!("no function named {name:?}")))
    }

    /// The explicit members certified to `tol`, or else the built family.
    pub fn family(&self, space: &WeightedL2Space, tol: f64) -> Result<OrthonormalFamily> {
        match (&self.members, self.family) {
            (Some(m), _) => OrthonormalFamily::certify(
                space,
                m.iter().map(|v| Vector::new(decode(v))).collect(),
                tol,
            ),
            (None, Some(spec)) => build_family(space, spec.kind, spec.count, tol),
            (None, None) => Err(Error::InvalidParameter(
                "l2 instance has neither members nor family".into(),
            )),
        }
    }

    /// Index set over the family, all members when absent.
    pub fn index_set(&self, family_len: usize) -> Result<IndexSet> {
        match &self.index {
            Some(ix) => IndexSet::new(ix.clone(), family_len),
            None => IndexSet::all(family_len),
        }
    }

    pub fn from_space(space: &WeightedL2Space) -> Self {
        use crate::space::InnerProductSpace;
        let m = space.measure();
        Self {
            kind: m.kind(),
            field: space.field(),
            nodes: m.nodes().to_vec(),
            weights: m.weights().to_vec(),
            rho: space.rho().to_vec(),
            functions: BTreeMap::new(),
            family: None,
            members: None,
            index: None,
            boxes: BTreeMap::new(),
        }
    }

    pub fn digest(&self) -> String {
        digest_json(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"{
        "field": "real",
        "dimension": 3,
        "vectors": [[1, 0, 0], [0, 1, 0]],
        "x": [0.5, 0.3, 0.2],
        "box_x": {"lower": [0, 0], "upper": [1, 1]}
    }"#;

    #[test]
    fn parses_real_file_with_bare_numbers() {
        let file: InstanceFile = serde_json::from_str(SAMPLE).unwrap();
        let p = file.to_problem().unwrap();
        assert_eq!(p.index().as_slice(), &[0, 1]);
        assert_eq!(p.x, Vector::from_real(&[0.5, 0.3, 0.2]));
        assert!(p.y.is_none());
    }

    #[test]
    fn complex_files_write_pairs() {
        let space = CoordinateSpace::complex(2).unwrap();
        let fam = OrthonormalFamily::certify(&space, space.standard_basis(), 1e-10).unwrap();
        let bx = CoefficientBox::uniform_real(IndexSet::all(2).unwrap(), -1.0, 1.0).unwrap();
        let x = Vector::from_pairs(&[(0.1, 0.2), (0.0, -0.3)]);
        let file = InstanceFile::from_parts(&space, &fam, &x, &bx, None);
        let json = serde_json::to_value(&file).unwrap();
        assert_eq!(json["x"][0], serde_json::json!([0.1, 0.2]));
        assert_eq!(json["field"], "complex");
        let back: InstanceFile = serde_json::from_value(json).unwrap();
        assert_eq!(back.to_problem().unwrap().x, x);
    }

    #[test]
    fn rejects_non_orthonormal_family() {
        let mut file: InstanceFile = serde_json::from_str(SAMPLE).unwrap();
        file.vectors[1] = vec![Entry::Real(1.0), Entry::Real(1.0), Entry::Real(0.0)];
        assert!(matches!(
            file.to_problem(),
            Err(Error::NotOrthonormal { .. })
        ));
    }

    #[test]
    fn digest_is_stable_and_content_sensitive() {
        let file: InstanceFile = serde_json::from_str(SAMPLE).unwrap();
        assert_eq!(file.digest(), file.clone().digest());
        assert_eq!(file.digest().len(), 64);
        let mut other = file.clone();
        other.x[2] = Entry::Real(0.25);
        assert_ne!(file.digest(), other.digest());
    }

    #[test]
    fn l2_file_roundtrip() {
        let m = DiscretizedMeasure::counting_points(3).unwrap();
        let space = WeightedL2Space::unweighted(m, Field::Real).unwrap();
        let mut file = L2InstanceFile::from_space(&space);
        file.functions.insert(
            "f".into(),
            vec![Entry::Real(1.0), Entry::Real(2.0), Entry::Real(3.0)],
        );
        let json = serde_json::to_string(&file).unwrap();
        assert!(json.contains("\"kind\":\"counting\""));
        let back: L2InstanceFile = serde_json::from_str(&json).unwrap();
        assert_eq!(back.space().unwrap(), space);
        assert_eq!(
            back.function("f").unwrap(),
            Vector::from_real(&[1.0, 2.0, 3.0])
        );
        assert!(back.function("g").is_err());
    }
}
