//! The on-disk algebra document: a versioned JSON format with sparse
//! 1-based structure-constant entries, exact values as `p/q` strings, float
//! values as decimals with an explicit tolerance field.
//!
//! Files use the paper-style 1-based index convention; everything in memory
//! is 0-based. The translation lives entirely in this module.

use crate::error::{CliError, CliResult};
use kproj_core::p_algebra::ConstructionMeta;
use kproj_core::{
    Backend, BasisMode, MultMatrix, PAlgebra, Scalar, SemisimpleData, Tensor, ZeroOneMatrix,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

pub const FORMAT_TAG: &str = "kproj/1";

/// Scalar value as it appears in files: `"p/q"` (or `"p"`) for exact
/// rationals, a decimal number for real floats, a two-element array for
/// complex floats.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScalarRepr {
    Exact(String),
    Real(f64),
    Complex([f64; 2]),
}

impl ScalarRepr {
    pub fn encode(s: &Scalar) -> Self {
        match s {
            Scalar::Exact(_) => ScalarRepr::Exact(s.to_string()),
            Scalar::Float { value, .. } => {
                if value.im == 0.0 {
                    ScalarRepr::Real(value.re)
                } else {
                    ScalarRepr::Complex([value.re, value.im])
                }
            }
        }
    }

    pub fn decode(&self, backend: Backend) -> CliResult<Scalar> {
        match self {
            ScalarRepr::Exact(text) => {
                let rational = parse_rational(text)?;
                Ok(match backend {
                    Backend::Exact => Scalar::from_rational(rational),
                    Backend::Float { eps } => {
                        let num = rational_to_f64(&rational);
                        Scalar::from_f64(num, eps)
                    }
                })
            }
            ScalarRepr::Real(x) => match backend {
                Backend::Exact => Err(CliError::parse(format!(
                    "decimal value {x} in an exact document; use a p/q string"
                ))),
                Backend::Float { eps } => Ok(Scalar::from_f64(*x, eps)),
            },
            ScalarRepr::Complex([re, im]) => match backend {
                Backend::Exact => Err(CliError::parse(
                    "complex value in an exact document".to_string(),
                )),
                Backend::Float { eps } => Ok(Scalar::from_complex(
                    num_complex::Complex64::new(*re, *im),
                    eps,
                )),
            },
        }
    }
}

fn parse_rational(text: &str) -> CliResult<BigRational> {
    let parse_int = |t: &str| {
        t.trim()
            .parse::<BigInt>()
            .map_err(|_| CliError::parse(format!("not an integer: {t:?}")))
    };
    match text.split_once('/') {
        None => Ok(BigRational::from_integer(parse_int(text)?)),
        Some((num, den)) => {
            let den = parse_int(den)?;
            if den == BigInt::from(0) {
                return Err(CliError::parse("zero denominator".to_string()));
            }
            Ok(BigRational::new(parse_int(num)?, den))
        }
    }
}

fn rational_to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

/// One sparse structure-constant entry: 1-based `[i, j, k, value]`.
pub type Entry = (usize, usize, usize, ScalarRepr);

/// One sparse coefficient of a semisimple block: 1-based
/// `[i, j, t, q, value]`.
pub type BlockEntry = (usize, usize, usize, usize, ScalarRepr);

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QBlockRepr {
    pub alpha: usize,
    pub beta: usize,
    pub entries: Vec<BlockEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "recipe", rename_all = "kebab-case")]
pub enum MetaRepr {
    ZeroOne {
        r_matrix: Vec<Vec<u8>>,
    },
    Semisimple {
        l_dims: Vec<usize>,
        m_dims: Vec<usize>,
        q_blocks: Vec<QBlockRepr>,
    },
    IdempotentBasis {
        mode: String,
        matrices: Vec<Vec<Vec<ScalarRepr>>>,
    },
}

/// The versioned algebra file.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AlgebraDocument {
    pub format: String,
    pub backend: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub epsilon: Option<f64>,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub label: Option<String>,
    pub product: Vec<Entry>,
    pub coproduct: Vec<Entry>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub metadata: Option<MetaRepr>,
}

impl AlgebraDocument {
    pub fn backend(&self) -> CliResult<Backend> {
        match self.backend.as_str() {
            "exact" => Ok(Backend::Exact),
            "float" => {
                let eps = self.epsilon.unwrap_or(kproj_core::DEFAULT_EPSILON);
                if eps <= 0.0 {
                    return Err(CliError::parse("epsilon must be positive".to_string()));
                }
                Ok(Backend::Float { eps })
            }
            other => Err(CliError::parse(format!("unknown backend {other:?}"))),
        }
    }

    pub fn from_json(text: &str) -> CliResult<Self> {
        let doc: AlgebraDocument =
            serde_json::from_str(text).map_err(|e| CliError::parse(e.to_string()))?;
        if doc.format != FORMAT_TAG {
            return Err(CliError::parse(format!(
                "unsupported format {:?}, expected {FORMAT_TAG:?}",
                doc.format
            )));
        }
        if doc.n == 0 {
            return Err(CliError::parse("dimension must be positive".to_string()));
        }
        Ok(doc)
    }

    /// Pretty JSON with leaf arrays kept on one line, so sparse entry lists
    /// stay one entry per line and files diff cleanly.
    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self).expect("document serializes");
        let mut out = String::new();
        render_value(&value, 0, &mut out);
        out
    }

    /// Decodes the two structure tensors without validating the axioms;
    /// verification is the caller's business.
    pub fn tensors(&self) -> CliResult<(Tensor, Tensor)> {
        let backend = self.backend()?;
        let c = decode_entries(&self.product, self.n, backend)?;
        let s = decode_entries(&self.coproduct, self.n, backend)?;
        Ok((c, s))
    }

    /// Decodes and validates into a P-algebra, reattaching construction
    /// metadata when present.
    pub fn to_algebra(&self) -> CliResult<PAlgebra> {
        let (c, s) = self.tensors()?;
        let mut p = PAlgebra::new(c, s)?;
        if let Some(meta) = &self.metadata {
            p.set_meta(Some(self.decode_meta(meta)?));
        }
        p.set_label(self.label.clone());
        Ok(p)
    }

    fn decode_meta(&self, meta: &MetaRepr) -> CliResult<ConstructionMeta> {
        let backend = self.backend()?;
        match meta {
            MetaRepr::ZeroOne { r_matrix } => {
                let r = ZeroOneMatrix::from_rows(r_matrix)?;
                Ok(ConstructionMeta::ZeroOne { r })
            }
            MetaRepr::Semisimple {
                l_dims,
                m_dims,
                q_blocks,
            } => {
                let data = decode_semisimple(l_dims.clone(), m_dims.clone(), q_blocks, backend)?;
                Ok(ConstructionMeta::Semisimple { data })
            }
            MetaRepr::IdempotentBasis { mode, matrices } => {
                let mode = decode_mode(mode)?;
                let mats = matrices
                    .iter()
                    .map(|rows| decode_dense_matrix(rows, backend))
                    .collect::<CliResult<Vec<_>>>()?;
                Ok(ConstructionMeta::IdempotentBasis { mode, mats })
            }
        }
    }

    /// Serializes a validated P-algebra, carrying its metadata along.
    pub fn from_algebra(p: &PAlgebra) -> Self {
        let backend = p.backend();
        let (backend_tag, epsilon) = match backend {
            Backend::Exact => ("exact", None),
            Backend::Float { eps } => ("float", Some(eps)),
        };
        let metadata = p.meta().map(|meta| match meta {
            ConstructionMeta::ZeroOne { r } => MetaRepr::ZeroOne {
                r_matrix: r.rows().map(<[u8]>::to_vec).collect(),
            },
            ConstructionMeta::Semisimple { data } => encode_semisimple(data),
            ConstructionMeta::IdempotentBasis { mode, mats } => MetaRepr::IdempotentBasis {
                mode: match mode {
                    BasisMode::Example3 => "example3".to_string(),
                    BasisMode::Example4 => "example4".to_string(),
                },
                matrices: mats.iter().map(encode_dense_matrix).collect(),
            },
        });
        AlgebraDocument {
            format: FORMAT_TAG.to_string(),
            backend: backend_tag.to_string(),
            epsilon,
            n: p.n(),
            label: p.label().map(str::to_string),
            product: encode_entries(p.product()),
            coproduct: encode_entries(p.coproduct()),
            metadata,
        }
    }
}

fn is_leaf(v: &serde_json::Value) -> bool {
    !matches!(
        v,
        serde_json::Value::Array(_) | serde_json::Value::Object(_)
    )
}

fn render_value(value: &serde_json::Value, indent: usize, out: &mut String) {
    use serde_json::Value;
    let pad = "  ".repeat(indent);
    let inner_pad = "  ".repeat(indent + 1);
    match value {
        Value::Array(items) if items.iter().all(is_leaf) => {
            out.push('[');
            for (k, item) in items.iter().enumerate() {
                if k > 0 {
                    out.push_str(", ");
                }
                out.push_str(&item.to_string());
            }
            out.push(']');
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (k, item) in items.iter().enumerate() {
                out.push_str(&inner_pad);
                render_value(item, indent + 1, out);
                if k + 1 < items.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            out.push_str(&pad);
            out.push(']');
        }
        Value::Object(map) => {
            out.push_str("{\n");
            for (k, (key, item)) in map.iter().enumerate() {
                out.push_str(&inner_pad);
                out.push_str(&serde_json::Value::String(key.clone()).to_string());
                out.push_str(": ");
                render_value(item, indent + 1, out);
                if k + 1 < map.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            out.push_str(&pad);
            out.push('}');
        }
        leaf => out.push_str(&leaf.to_string()),
    }
}

fn encode_entries(t: &Tensor) -> Vec<Entry> {
    let n = t.shape()[0];
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let v = t.get(&[i, j, k]);
                if !v.is_zero() {
                    out.push((i + 1, j + 1, k + 1, ScalarRepr::encode(v)));
                }
            }
        }
    }
    out
}

fn decode_entries(entries: &[Entry], n: usize, backend: Backend) -> CliResult<Tensor> {
    let mut t = Tensor::zeros(vec![n, n, n], backend);
    let mut seen = std::collections::HashSet::new();
    for (i, j, k, value) in entries {
        for idx in [i, j, k] {
            if *idx == 0 || *idx > n {
                return Err(CliError::parse(format!("index {idx} out of range 1..={n}")));
            }
        }
        if !seen.insert((*i, *j, *k)) {
            return Err(CliError::parse(format!("duplicate entry ({i}, {j}, {k})")));
        }
        t.set(&[i - 1, j - 1, k - 1], value.decode(backend)?);
    }
    Ok(t)
}

fn encode_dense_matrix(m: &Tensor) -> Vec<Vec<ScalarRepr>> {
    (0..m.shape()[0])
        .map(|i| {
            (0..m.shape()[1])
                .map(|j| ScalarRepr::encode(m.get(&[i, j])))
                .collect()
        })
        .collect()
}

fn decode_dense_matrix(rows: &[Vec<ScalarRepr>], backend: Backend) -> CliResult<Tensor> {
    let decoded: Vec<Vec<Scalar>> = rows
        .iter()
        .map(|row| {
            row.iter()
                .map(|v| v.decode(backend))
                .collect::<CliResult<Vec<_>>>()
        })
        .collect::<CliResult<Vec<_>>>()?;
    Tensor::from_rows(decoded).map_err(CliError::from)
}

fn encode_semisimple(data: &SemisimpleData) -> MetaRepr {
    let mut q_blocks = Vec::new();
    for alpha in 0..data.l_dims().len() {
        for beta in 0..data.m_dims().len() {
            let block = data.block(alpha, beta);
            let (k, m) = (data.l_dims()[alpha], data.m_dims()[beta]);
            let mut entries = Vec::new();
            for i in 0..k {
                for j in 0..k {
                    for t in 0..m {
                        for q in 0..m {
                            let v = block.get(&[i, j, t, q]);
                            if !v.is_zero() {
                                entries.push((i + 1, j + 1, t + 1, q + 1, ScalarRepr::encode(v)));
                            }
                        }
                    }
                }
            }
            if !entries.is_empty() {
                q_blocks.push(QBlockRepr {
                    alpha: alpha + 1,
                    beta: beta + 1,
                    entries,
                });
            }
        }
    }
    MetaRepr::Semisimple {
        l_dims: data.l_dims().to_vec(),
        m_dims: data.m_dims().to_vec(),
        q_blocks,
    }
}

pub fn decode_semisimple(
    l_dims: Vec<usize>,
    m_dims: Vec<usize>,
    q_blocks: &[QBlockRepr],
    backend: Backend,
) -> CliResult<SemisimpleData> {
    if l_dims.is_empty() || m_dims.is_empty() || l_dims.iter().chain(&m_dims).any(|&d| d == 0) {
        return Err(CliError::parse(
            "family dimensions must be positive".to_string(),
        ));
    }
    let mut blocks: Vec<Vec<Tensor>> = l_dims
        .iter()
        .map(|&k| {
            m_dims
                .iter()
                .map(|&m| Tensor::zeros(vec![k, k, m, m], backend))
                .collect()
        })
        .collect();
    for qb in q_blocks {
        if qb.alpha == 0 || qb.alpha > l_dims.len() || qb.beta == 0 || qb.beta > m_dims.len() {
            return Err(CliError::parse(format!(
                "block ({}, {}) out of range",
                qb.alpha, qb.beta
            )));
        }
        let (k, m) = (l_dims[qb.alpha - 1], m_dims[qb.beta - 1]);
        for (i, j, t, q, value) in &qb.entries {
            if *i == 0 || *i > k || *j == 0 || *j > k || *t == 0 || *t > m || *q == 0 || *q > m {
                return Err(CliError::parse(format!(
                    "coefficient ({i}, {j}, {t}, {q}) out of range in block ({}, {})",
                    qb.alpha, qb.beta
                )));
            }
            blocks[qb.alpha - 1][qb.beta - 1]
                .set(&[i - 1, j - 1, t - 1, q - 1], value.decode(backend)?);
        }
    }
    SemisimpleData::new(l_dims, m_dims, blocks).map_err(CliError::from)
}

fn decode_mode(mode: &str) -> CliResult<BasisMode> {
    match mode {
        "example3" => Ok(BasisMode::Example3),
        "example4" => Ok(BasisMode::Example4),
        other => Err(CliError::parse(format!("unknown basis mode {other:?}"))),
    }
}

// ---- parameter files for the construct command ------------------------------

#[derive(Debug, Deserialize)]
pub struct ZeroOneParams {
    pub matrix: Vec<Vec<u8>>,
}

#[derive(Debug, Deserialize)]
pub struct SemisimpleParams {
    pub l_dims: Vec<usize>,
    pub m_dims: Vec<usize>,
    pub q_blocks: Vec<QBlockRepr>,
}

#[derive(Debug, Deserialize)]
pub struct IdempotentBasisParams {
    pub mode: String,
    #[serde(default)]
    pub n: Option<usize>,
    #[serde(default)]
    pub matrices: Option<Vec<Vec<Vec<ScalarRepr>>>>,
    /// Blocks of the two-block completion recipe, used when
    /// `mode = "example5"`.
    #[serde(default)]
    pub a: Option<Vec<Vec<ScalarRepr>>>,
    #[serde(default)]
    pub b: Option<Vec<Vec<ScalarRepr>>>,
}

#[derive(Debug, Deserialize)]
pub struct MultiplicityFile {
    pub multiplicities: Vec<Vec<u64>>,
}

pub fn parse_params<T: serde::de::DeserializeOwned>(text: &str) -> CliResult<T> {
    serde_json::from_str(text).map_err(|e| CliError::parse(e.to_string()))
}

pub fn decode_idempotent_params(
    params: &IdempotentBasisParams,
    backend: Backend,
) -> CliResult<kproj_core::IdempotentBasis> {
    match params.mode.as_str() {
        "example5" => {
            let (Some(a), Some(b)) = (&params.a, &params.b) else {
                return Err(CliError::parse(
                    "example5 mode needs blocks \"a\" and \"b\"".to_string(),
                ));
            };
            let a = decode_dense_matrix(a, backend)?;
            let b = decode_dense_matrix(b, backend)?;
            let blocks = kproj_core::example5_block(&a, &b)?;
            blocks.into_basis().map_err(CliError::from)
        }
        mode => {
            let mode = decode_mode(mode)?;
            let (Some(n), Some(matrices)) = (params.n, &params.matrices) else {
                return Err(CliError::parse(
                    "idempotent-basis params need \"n\" and \"matrices\"".to_string(),
                ));
            };
            let mats = matrices
                .iter()
                .map(|rows| decode_dense_matrix(rows, backend))
                .collect::<CliResult<Vec<_>>>()?;
            kproj_core::IdempotentBasis::new(n, mats, mode).map_err(CliError::from)
        }
    }
}

/// Multiplicities come either from a JSON file or inline as rows separated
/// by semicolons, entries by commas: `"1,0;0,1"`.
pub fn parse_multiplicities(spec: &str) -> CliResult<MultMatrix> {
    let inline_like = spec
        .chars()
        .all(|c| c.is_ascii_digit() || ",; ".contains(c));
    let rows: Vec<Vec<u64>> = if inline_like {
        spec.split(';')
            .map(|row| {
                row.split(',')
                    .map(|v| {
                        v.trim()
                            .parse::<u64>()
                            .map_err(|_| CliError::parse(format!("bad multiplicity {v:?}")))
                    })
                    .collect::<CliResult<Vec<u64>>>()
            })
            .collect::<CliResult<Vec<_>>>()?
    } else {
        let text = std::fs::read_to_string(spec)
            .map_err(|e| CliError::parse(format!("cannot read {spec}: {e}")))?;
        parse_params::<MultiplicityFile>(&text)?.multiplicities
    };
    MultMatrix::from_rows(&rows).map_err(CliError::from)
}
