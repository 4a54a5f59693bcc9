//! The JSON instance format.
//!
//! Scalars are strings such as `"-1"` or `"2/3"`. JSON integers are accepted
//! on input and written back as strings; any other number is rejected as
//! inexact. Structure constants and actions are sparse lists of
//! `[i, j, [v₀, …]]` entries, matrices are dense lists of rows.

use mrbad_core::cohomology::CochainMrbad;
use mrbad_core::deformation::TruncatedDeformation;
use mrbad_core::extension::{AbelianExtension, CocycleTriple};
use mrbad_core::structures::{Algebra, Bimodule, MrbPair};
use mrbad_core::{Field, Matrix, MultiTensor, Scalar};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::Error;

/// A list of rows of scalars.
pub type MatrixJson = Vec<Vec<Value>>;
/// Sparse multilinear map: entries `[i₁, …, iₖ, [v…]]`.
pub type TensorJson = Vec<Vec<Value>>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub field: String,
    pub kappa: Value,
    pub dim: usize,
    pub mu: TensorJson,
    #[serde(rename = "R")]
    pub r: MatrixJson,
    pub d: MatrixJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bimodule: Option<BimoduleBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub deformation: Option<DeformationBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extension: Option<ExtensionBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cocycle: Option<CocycleBlock>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BimoduleBlock {
    pub dim_m: usize,
    /// Left action `A ⊗ M → M`, entries `[a, m, vec]`.
    pub l: TensorJson,
    /// Right action `M ⊗ A → M`, entries `[m, a, vec]`.
    pub r: TensorJson,
    #[serde(rename = "R_M")]
    pub r_m: MatrixJson,
    #[serde(rename = "d_M")]
    pub d_m: MatrixJson,
}

/// Coefficients of `t¹ … tᴺ`; the `t⁰` terms are the pair itself.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeformationBlock {
    pub order: usize,
    pub mu: Vec<TensorJson>,
    #[serde(rename = "R")]
    pub r: Vec<MatrixJson>,
    pub d: Vec<MatrixJson>,
}

/// The pair of the file is the total space; `i : M → Â`, `p : Â → A`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtensionBlock {
    pub i: MatrixJson,
    pub p: MatrixJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub section: Option<MatrixJson>,
}

/// `Θ : A⊗A → M` sparse, `ξ, χ : A → M` as `dim_m × dim` matrices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CocycleBlock {
    pub theta: TensorJson,
    pub xi: MatrixJson,
    pub chi: MatrixJson,
}

/// Typed contents of an instance file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub pair: MrbPair,
    pub bimodule: Option<Bimodule>,
    pub deformation: Option<TruncatedDeformation>,
    pub extension: Option<ExtensionData>,
    pub cocycle: Option<CocycleTriple>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionData {
    pub inclusion: Matrix,
    pub projection: Matrix,
    pub section: Option<Matrix>,
}

impl Instance {
    pub fn new(pair: MrbPair) -> Instance {
        Instance {
            pair,
            bimodule: None,
            deformation: None,
            extension: None,
            cocycle: None,
        }
    }

    /// The file's pair read as the total space of its extension block.
    pub fn abelian_extension(&self) -> Result<AbelianExtension, Error> {
        let e = self.extension.as_ref().ok_or(Error::Missing("extension"))?;
        Ok(AbelianExtension::from_total(&self.pair, &e.inclusion, &e.projection)?)
    }

    /// The coefficients: the bimodule block, or the adjoint bimodule.
    pub fn coefficients(&self) -> Bimodule {
        self.bimodule
            .clone()
            .unwrap_or_else(|| mrbad_core::structures::adjoint_bimodule(&self.pair))
    }
}

pub fn parse_field(text: &str) -> Result<Field, Error> {
    Ok(text.parse::<Field>()?)
}

pub fn scalar_from_json(field: Field, v: &Value) -> Result<Scalar, Error> {
    match v {
        Value::String(s) => Ok(field.parse(s)?),
        Value::Number(n) => match n.as_i64() {
            Some(i) => Ok(field.int(i)),
            None if n.is_u64() => Ok(field.parse(&n.to_string())?),
            None => Err(mrbad_core::Error::InexactScalar(n.to_string()).into()),
        },
        other => Err(Error::Format(format!("expected a scalar, found {other}"))),
    }
}

pub fn scalar_to_json(s: &Scalar) -> Value {
    Value::String(s.to_exact_string())
}

pub fn vector_from_json(field: Field, v: &Value, len: usize, what: &str) -> Result<Vec<Scalar>, Error> {
    let items = v
        .as_array()
        .ok_or_else(|| Error::Format(format!("{what}: expected a list of scalars")))?;
    if items.len() != len {
        return Err(Error::Format(format!("{what}: expected {len} scalars, found {}", items.len())));
    }
    items.iter().map(|x| scalar_from_json(field, x)).collect()
}

pub fn vector_to_json(v: &[Scalar]) -> Value {
    Value::Array(v.iter().map(scalar_to_json).collect())
}

pub fn matrix_from_json(field: Field, rows: &MatrixJson, n_rows: usize, n_cols: usize, what: &str) -> Result<Matrix, Error> {
    if rows.len() != n_rows {
        return Err(Error::Format(format!("{what}: expected {n_rows} rows, found {}", rows.len())));
    }
    let mut entries = Vec::with_capacity(n_rows * n_cols);
    for row in rows {
        if row.len() != n_cols {
            return Err(Error::Format(format!("{what}: expected rows of length {n_cols}")));
        }
        for x in row {
            entries.push(scalar_from_json(field, x)?);
        }
    }
    Ok(Matrix::from_entries(field, n_rows, n_cols, entries)?)
}

pub fn matrix_to_json(m: &Matrix) -> MatrixJson {
    (0..m.rows()).map(|r| m.row(r).iter().map(scalar_to_json).collect()).collect()
}

/// Entries listed more than once are summed.
pub fn tensor_from_json(field: Field, entries: &TensorJson, shape: &[usize], cod: usize, what: &str) -> Result<MultiTensor, Error> {
    let mut t = MultiTensor::zeros(field, shape, cod)?;
    for e in entries {
        if e.len() != shape.len() + 1 {
            return Err(Error::Format(format!(
                "{what}: entries are [{} indices, vector]",
                shape.len()
            )));
        }
        let mut idx = Vec::with_capacity(shape.len());
        for (k, x) in e[..shape.len()].iter().enumerate() {
            let i = x
                .as_u64()
                .ok_or_else(|| Error::Format(format!("{what}: indices are non-negative integers")))?
                as usize;
            if i >= shape[k] {
                return Err(Error::IndexOutOfRange {
                    what: what.to_string(),
                    index: i,
                    bound: shape[k],
                });
            }
            idx.push(i);
        }
        let v = vector_from_json(field, &e[shape.len()], cod, what)?;
        for (slot, x) in t.value_mut(&idx).iter_mut().zip(&v) {
            *slot += x;
        }
    }
    Ok(t)
}

/// Nonzero entries in lexicographic index order.
pub fn tensor_to_json(t: &MultiTensor) -> TensorJson {
    let mut out = Vec::new();
    for idx in mrbad_core::tensor::BasisTuples::new(t.shape()) {
        let v = t.value(&idx);
        if v.iter().all(Scalar::is_zero) {
            continue;
        }
        let mut e: Vec<Value> = idx.iter().map(|i| Value::from(*i as u64)).collect();
        e.push(vector_to_json(v));
        out.push(e);
    }
    out
}

pub fn parse_instance(bytes: &[u8]) -> Result<Instance, Error> {
    let file: InstanceFile = serde_json::from_slice(bytes)?;
    instance_from_file(&file)
}

pub fn read_instance(path: &std::path::Path) -> Result<Instance, Error> {
    let bytes = std::fs::read(path).map_err(|e| Error::Io(path.display().to_string(), e))?;
    parse_instance(&bytes)
}

pub fn instance_from_file(file: &InstanceFile) -> Result<Instance, Error> {
    let f = parse_field(&file.field)?;
    let n = file.dim;
    let mu = tensor_from_json(f, &file.mu, &[n, n], n, "mu")?;
    let pair = MrbPair::new(
        Algebra::new(mu)?,
        matrix_from_json(f, &file.r, n, n, "R")?,
        matrix_from_json(f, &file.d, n, n, "d")?,
        scalar_from_json(f, &file.kappa)?,
    )?;
    let mut inst = Instance::new(pair);
    if let Some(b) = &file.bimodule {
        let m = b.dim_m;
        inst.bimodule = Some(Bimodule::new(
            tensor_from_json(f, &b.l, &[n, m], m, "bimodule.l")?,
            tensor_from_json(f, &b.r, &[m, n], m, "bimodule.r")?,
            matrix_from_json(f, &b.r_m, m, m, "bimodule.R_M")?,
            matrix_from_json(f, &b.d_m, m, m, "bimodule.d_M")?,
        )?);
    }
    if let Some(d) = &file.deformation {
        let k = d.order;
        if d.mu.len() != k || d.r.len() != k || d.d.len() != k {
            return Err(Error::Format(format!("deformation: expected {k} coefficients of each kind")));
        }
        let mu = d
            .mu
            .iter()
            .map(|t| tensor_from_json(f, t, &[n, n], n, "deformation.mu"))
            .collect::<Result<Vec<_>, _>>()?;
        let r = d
            .r
            .iter()
            .map(|m| matrix_from_json(f, m, n, n, "deformation.R"))
            .collect::<Result<Vec<_>, _>>()?;
        let dd = d
            .d
            .iter()
            .map(|m| matrix_from_json(f, m, n, n, "deformation.d"))
            .collect::<Result<Vec<_>, _>>()?;
        inst.deformation = Some(TruncatedDeformation::new(&inst.pair, mu, r, dd)?);
    }
    if let Some(e) = &file.extension {
        let base = e.p.len();
        if base > n {
            return Err(Error::Format("extension.p has more rows than dim".into()));
        }
        let m = n - base;
        inst.extension = Some(ExtensionData {
            inclusion: matrix_from_json(f, &e.i, n, m, "extension.i")?,
            projection: matrix_from_json(f, &e.p, base, n, "extension.p")?,
            section: e
                .section
                .as_ref()
                .map(|s| matrix_from_json(f, s, n, base, "extension.section"))
                .transpose()?,
        });
    }
    if let Some(c) = &file.cocycle {
        let m = match &inst.bimodule {
            Some(b) => b.dim(),
            None => n,
        };
        inst.cocycle = Some(CocycleTriple {
            theta: tensor_from_json(f, &c.theta, &[n, n], m, "cocycle.theta")?,
            xi: MultiTensor::from_matrix(&matrix_from_json(f, &c.xi, m, n, "cocycle.xi")?),
            chi: MultiTensor::from_matrix(&matrix_from_json(f, &c.chi, m, n, "cocycle.chi")?),
        });
    }
    Ok(inst)
}

pub fn pair_to_file(pair: &MrbPair) -> InstanceFile {
    InstanceFile {
        field: pair.field().to_string(),
        kappa: scalar_to_json(&pair.kappa),
        dim: pair.dim(),
        mu: tensor_to_json(pair.algebra.mu()),
        r: matrix_to_json(&pair.r),
        d: matrix_to_json(&pair.d),
        bimodule: None,
        deformation: None,
        extension: None,
        cocycle: None,
    }
}

pub fn bimodule_to_block(b: &Bimodule) -> BimoduleBlock {
    BimoduleBlock {
        dim_m: b.dim(),
        l: tensor_to_json(&b.left),
        r: tensor_to_json(&b.right),
        r_m: matrix_to_json(&b.r_m),
        d_m: matrix_to_json(&b.d_m),
    }
}

pub fn cocycle_to_block(c: &CocycleTriple) -> CocycleBlock {
    CocycleBlock {
        theta: tensor_to_json(&c.theta),
        xi: matrix_to_json(&c.xi.to_matrix()),
        chi: matrix_to_json(&c.chi.to_matrix()),
    }
}

pub fn instance_to_file(inst: &Instance) -> InstanceFile {
    let mut file = pair_to_file(&inst.pair);
    file.bimodule = inst.bimodule.as_ref().map(bimodule_to_block);
    file.deformation = inst.deformation.as_ref().map(|d| DeformationBlock {
        order: d.order(),
        mu: (1..=d.order()).map(|k| tensor_to_json(d.mu_coeff(k))).collect(),
        r: (1..=d.order()).map(|k| matrix_to_json(d.r_coeff(k))).collect(),
        d: (1..=d.order()).map(|k| matrix_to_json(d.d_coeff(k))).collect(),
    });
    file.extension = inst.extension.as_ref().map(|e| ExtensionBlock {
        i: matrix_to_json(&e.inclusion),
        p: matrix_to_json(&e.projection),
        section: e.section.as_ref().map(matrix_to_json),
    });
    file.cocycle = inst.cocycle.as_ref().map(cocycle_to_block);
    file
}

/// An extension as an instance file: total pair plus `i`, `p`.
pub fn extension_to_file(ext: &AbelianExtension) -> InstanceFile {
    let mut file = pair_to_file(&ext.total);
    file.extension = Some(ExtensionBlock {
        i: matrix_to_json(&ext.inclusion),
        p: matrix_to_json(&ext.projection),
        section: None,
    });
    file
}

/// Components of a cochain, keyed `f`, `g`, `h`, `k` for
/// `((f, g), (h, k))`.
pub fn cochain_to_json(c: &CochainMrbad) -> Value {
    let mut map = serde_json::Map::new();
    map.insert("f".into(), serde_json::to_value(tensor_to_json(&c.top.f)).expect("plain data"));
    if let Some(g) = &c.top.g {
        map.insert("g".into(), serde_json::to_value(tensor_to_json(g)).expect("plain data"));
    }
    if let Some(b) = &c.bottom {
        map.insert("h".into(), serde_json::to_value(tensor_to_json(&b.f)).expect("plain data"));
        if let Some(k) = &b.g {
            map.insert("k".into(), serde_json::to_value(tensor_to_json(k)).expect("plain data"));
        }
    }
    Value::Object(map)
}

pub fn to_pretty_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("plain data")
}
