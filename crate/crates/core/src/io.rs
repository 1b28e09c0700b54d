//! JSON interchange files for codes and q-systems.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::code::RankCode;
use crate::error::{Error, Result};
use crate::geometry::QSystem;
use crate::gf::{Elem, FieldCtx, FieldSpec};
use crate::hamming::HammingCode;

pub const SCHEMA_VERSION: u32 = 1;

/// An element as written by hand: its integer encoding, `"0"`, `"g^i"` or a decimal string.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ElemRepr {
    Int(u64),
    Text(String),
}

impl ElemRepr {
    pub fn resolve(&self, ctx: &FieldCtx) -> Result<Elem> {
        match self {
            ElemRepr::Int(x) => ctx.elem_from_u64(*x),
            ElemRepr::Text(s) => ctx.parse_elem(s),
        }
    }
}

impl From<Elem> for ElemRepr {
    fn from(x: Elem) -> Self {
        ElemRepr::Int(x.0 as u64)
    }
}

fn default_schema() -> u32 {
    SCHEMA_VERSION
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Rank,
    Hamming,
}

fn default_metric() -> Metric {
    Metric::Rank
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeFile {
    #[serde(default = "default_schema")]
    pub schema_version: u32,
    #[serde(default = "default_metric")]
    pub metric: Metric,
    pub field: FieldSpec,
    pub n: usize,
    pub k: usize,
    pub generator: Vec<Vec<ElemRepr>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemFile {
    #[serde(default = "default_schema")]
    pub schema_version: u32,
    pub field: FieldSpec,
    pub k: usize,
    pub basis: Vec<Vec<ElemRepr>>,
}

#[derive(Debug, Clone)]
pub enum Document {
    Rank(RankCode),
    Hamming(HammingCode),
    System(QSystem),
}

fn check_schema(v: u32) -> Result<()> {
    if v != SCHEMA_VERSION {
        return Err(Error::Parse(format!("unsupported schema_version {v}")));
    }
    Ok(())
}

fn resolve_matrix(ctx: &FieldCtx, rows: &[Vec<ElemRepr>]) -> Result<Vec<Vec<Elem>>> {
    rows.iter()
        .map(|r| r.iter().map(|x| x.resolve(ctx)).collect())
        .collect()
}

fn check_shape(rows: &[Vec<ElemRepr>], nrows: usize, ncols: usize, what: &str) -> Result<()> {
    if rows.len() != nrows {
        return Err(Error::Parse(format!("{what}: {} rows, expected {nrows}", rows.len())));
    }
    if let Some(r) = rows.iter().find(|r| r.len() != ncols) {
        return Err(Error::Parse(format!("{what}: row of length {}, expected {ncols}", r.len())));
    }
    Ok(())
}

impl CodeFile {
    pub fn from_rank(c: &RankCode) -> Self {
        CodeFile {
            schema_version: SCHEMA_VERSION,
            metric: Metric::Rank,
            field: c.ctx().spec(),
            n: c.n(),
            k: c.k(),
            generator: c.generator().iter().map(|r| r.iter().map(|&x| x.into()).collect()).collect(),
        }
    }

    pub fn from_hamming(c: &HammingCode) -> Self {
        CodeFile {
            schema_version: SCHEMA_VERSION,
            metric: Metric::Hamming,
            field: c.ctx().spec(),
            n: c.n(),
            k: c.k(),
            generator: c.generator().iter().map(|r| r.iter().map(|&x| x.into()).collect()).collect(),
        }
    }

    pub fn into_document(self) -> Result<Document> {
        check_schema(self.schema_version)?;
        let ctx = Arc::new(self.field.build()?);
        check_shape(&self.generator, self.k, self.n, "generator")?;
        let g = resolve_matrix(&ctx, &self.generator)?;
        Ok(match self.metric {
            Metric::Rank => Document::Rank(RankCode::new(ctx, self.n, g)?),
            Metric::Hamming => Document::Hamming(HammingCode::new(ctx, self.n, g)?),
        })
    }
}

impl SystemFile {
    pub fn from_system(u: &QSystem) -> Self {
        SystemFile {
            schema_version: SCHEMA_VERSION,
            field: u.ctx().spec(),
            k: u.k(),
            basis: u.vectors().iter().map(|r| r.iter().map(|&x| x.into()).collect()).collect(),
        }
    }

    pub fn into_system(self) -> Result<QSystem> {
        check_schema(self.schema_version)?;
        let ctx = Arc::new(self.field.build()?);
        let n = self.basis.len();
        check_shape(&self.basis, n, self.k, "basis")?;
        let vectors = resolve_matrix(&ctx, &self.basis)?;
        let u = QSystem::new(ctx, self.k, &vectors)?;
        if u.dim() != n {
            return Err(Error::DependentBasis);
        }
        Ok(u)
    }
}

/// Reads a code file or a system file, told apart by a `generator` or `basis` key.
pub fn parse_document(text: &str) -> Result<Document> {
    let value: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let obj = value
        .as_object()
        .ok_or_else(|| Error::Parse("expected a JSON object".into()))?;
    if obj.contains_key("basis") {
        let f: SystemFile = serde_json::from_value(value).map_err(|e| Error::Parse(e.to_string()))?;
        Ok(Document::System(f.into_system()?))
    } else if obj.contains_key("generator") {
        let f: CodeFile = serde_json::from_value(value).map_err(|e| Error::Parse(e.to_string()))?;
        f.into_document()
    } else {
        Err(Error::Parse("expected a \"generator\" or \"basis\" key".into()))
    }
}

pub fn to_json<T: Serialize>(x: &T) -> String {
    serde_json::to_string_pretty(x).expect("serializable value")
}
