//! JSON interchange. Complex numbers are `[re, im]` pairs and matrices are
//! row-major arrays of rows. Every float written out is rounded to 12
//! significant digits so reports are byte-stable across runs.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::approx::OverlapReport;
use crate::bochner::{BochnerReport, GnsResult};
use crate::channel::QuantumChannel;
use crate::equivalence::{EquivalenceVerdict, GramMatrix, Status};
use crate::error::{Error, Result};
use crate::group::{from_name, GroupJson, GroupTable};
use crate::linalg::{CMat, CVec};
use crate::rep::{regular_rep, weight_rep, IrrepDecomposition, UnitaryRep};
use crate::state::{CharFunction, IrrepReduction, QuantumState, StateKind, WeightState};

pub type JsonComplex = [f64; 2];
pub type JsonMatrix = Vec<Vec<JsonComplex>>;

/// Round to 12 significant digits; `-0` becomes `0`.
pub fn round12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { 0.0 } else { x };
    }
    let r: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    if r == 0.0 { 0.0 } else { r }
}

pub fn num(x: f64) -> Value {
    json!(round12(x))
}

pub fn complex_value(z: Complex64) -> Value {
    json!([round12(z.re), round12(z.im)])
}

pub fn vector_value(v: &[Complex64]) -> Value {
    Value::Array(v.iter().map(|&z| complex_value(z)).collect())
}

pub fn matrix_value(m: &CMat) -> Value {
    Value::Array(
        (0..m.nrows())
            .map(|i| Value::Array((0..m.ncols()).map(|j| complex_value(m[(i, j)])).collect()))
            .collect(),
    )
}

pub fn matrix_from_json(m: &JsonMatrix) -> Result<CMat> {
    let rows = m.len();
    let cols = m.first().map(Vec::len).unwrap_or(0);
    if m.iter().any(|r| r.len() != cols) {
        return Err(Error::Format("matrix rows must have equal length".into()));
    }
    Ok(CMat::from_fn(rows, cols, |i, j| Complex64::new(m[i][j][0], m[i][j][1])))
}

pub fn vector_from_json(v: &[JsonComplex]) -> CVec {
    CVec::from_iterator(v.len(), v.iter().map(|z| Complex64::new(z[0], z[1])))
}

fn parse<T: for<'de> Deserialize<'de>>(text: &str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Format(format!("malformed {what} JSON: {e}")))
}

/// A group given by name (`"symmetric:3"`) or by table.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupSpec {
    Name(String),
    Named { name: String },
    Table(GroupJson),
}

impl GroupSpec {
    pub fn build(&self) -> Result<GroupTable> {
        match self {
            GroupSpec::Name(n) | GroupSpec::Named { name: n } => from_name(n),
            GroupSpec::Table(t) => GroupTable::from_json(t.clone()),
        }
    }
}

pub fn group_from_json(text: &str) -> Result<GroupTable> {
    parse::<GroupSpec>(text, "group")?.build()
}

pub fn group_value(g: &GroupTable) -> Value {
    let classes: Vec<Vec<usize>> = g.conjugacy_classes().to_vec();
    json!({
        "order": g.order(),
        "mul": g.table(),
        "labels": (0..g.order()).map(|x| g.label(x)).collect::<Vec<_>>(),
        "abelian": g.is_abelian(),
        "conjugacy_classes": classes,
    })
}

/// Representation file: a group plus either explicit `mats`, `"regular":
/// true`, or cyclic-group `weights`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RepJson {
    pub group: GroupSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mats: Option<Vec<JsonMatrix>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub regular: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<i64>>,
}

pub fn rep_from_json(text: &str) -> Result<UnitaryRep> {
    rep_from_spec(&parse::<RepJson>(text, "representation")?)
}

pub fn rep_from_spec(spec: &RepJson) -> Result<UnitaryRep> {
    let group = Arc::new(spec.group.build()?);
    let given = [spec.mats.is_some(), spec.regular == Some(true), spec.weights.is_some()];
    if given.iter().filter(|&&x| x).count() != 1 {
        return Err(Error::Format(
            "representation needs exactly one of \"mats\", \"regular\": true, \"weights\"".into(),
        ));
    }
    if let Some(mats) = &spec.mats {
        let mats = mats.iter().map(matrix_from_json).collect::<Result<Vec<_>>>()?;
        return UnitaryRep::new(group, mats);
    }
    if let Some(w) = &spec.weights {
        return weight_rep(group, w);
    }
    Ok(regular_rep(group))
}

pub fn rep_value(r: &UnitaryRep) -> Value {
    json!({
        "group": r.group().to_json(),
        "mats": r.mats().iter().map(matrix_value).collect::<Vec<_>>(),
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct StateJson {
    kind: StateKind,
    data: Value,
}

pub fn state_from_json(text: &str) -> Result<QuantumState> {
    let s: StateJson = parse(text, "state")?;
    match s.kind {
        StateKind::Pure => {
            let v: Vec<JsonComplex> = serde_json::from_value(s.data)
                .map_err(|e| Error::Format(format!("pure state data must be [re,im] pairs: {e}")))?;
            QuantumState::pure(vector_from_json(&v))
        }
        StateKind::Mixed => {
            let m: JsonMatrix = serde_json::from_value(s.data)
                .map_err(|e| Error::Format(format!("mixed state data must be a matrix: {e}")))?;
            QuantumState::mixed(matrix_from_json(&m)?)
        }
    }
}

pub fn state_value(s: &QuantumState) -> Value {
    match s.vector() {
        Some(v) => json!({ "kind": "pure", "data": vector_value(v.as_slice()) }),
        None => json!({ "kind": "mixed", "data": matrix_value(&s.density()) }),
    }
}

pub fn weight_state_from_json(text: &str) -> Result<WeightState> {
    let w: WeightState = parse(text, "weight state")?;
    w.validate()?;
    Ok(w)
}

pub fn weight_state_value(w: &WeightState) -> Value {
    let weights: BTreeMap<String, Value> = w.weights.iter().map(|(n, p)| (n.to_string(), num(*p))).collect();
    json!({ "weights": weights })
}

/// Function file: a bare array of `[re, im]` per element, or an object with
/// a `values` array.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum FuncJson {
    Bare(Vec<JsonComplex>),
    Wrapped { values: Vec<JsonComplex> },
}

pub fn func_from_json(text: &str, group: Arc<GroupTable>) -> Result<CharFunction> {
    let values = match parse::<FuncJson>(text, "function")? {
        FuncJson::Bare(v) | FuncJson::Wrapped { values: v } => v,
    };
    CharFunction::new(group, values.iter().map(|z| Complex64::new(z[0], z[1])).collect())
}

pub fn charfunc_value(f: &CharFunction) -> Value {
    let g = f.group();
    json!({
        "labels": g.elements().map(|x| g.label(x)).collect::<Vec<_>>(),
        "values": vector_value(f.values()),
    })
}

pub fn decomposition_value(dec: &IrrepDecomposition, residual: f64, with_basis: bool) -> Value {
    let blocks: Vec<Value> = dec
        .blocks()
        .iter()
        .zip(dec.offsets())
        .map(|(b, off)| {
            json!({
                "label": b.label,
                "dim": b.dim,
                "mult": b.mult,
                "offset": off,
                "character": vector_value(&b.character),
            })
        })
        .collect();
    let mut v = json!({
        "seed": dec.seed(),
        "dim": dec.dim(),
        "blocks": blocks,
        "reconstruction_residual": num(residual),
    });
    if with_basis {
        v["basis"] = matrix_value(dec.basis());
    }
    v
}

pub fn reduction_value(red: &IrrepReduction, dec: &IrrepDecomposition) -> Value {
    let blocks: Vec<Value> = red
        .blocks()
        .iter()
        .zip(dec.blocks())
        .map(|(f, b)| json!({ "label": b.label, "dim": b.dim, "F": matrix_value(f) }))
        .collect();
    json!({ "blocks": blocks, "total_trace": num(red.total_trace()) })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChannelJson {
    pub d_in: usize,
    pub d_out: usize,
    pub kraus: Vec<JsonMatrix>,
}

pub fn channel_from_json(text: &str) -> Result<QuantumChannel> {
    let c: ChannelJson = parse(text, "channel")?;
    let kraus = c.kraus.iter().map(matrix_from_json).collect::<Result<Vec<_>>>()?;
    if kraus.iter().any(|k| k.shape() != (c.d_out, c.d_in)) {
        return Err(Error::InvalidChannel(format!(
            "every Kraus operator must be d_out × d_in = {} × {}",
            c.d_out, c.d_in
        )));
    }
    QuantumChannel::new(kraus)
}

pub fn channel_value(c: &QuantumChannel) -> Value {
    json!({
        "d_in": c.d_in(),
        "d_out": c.d_out(),
        "kraus": c.kraus().iter().map(matrix_value).collect::<Vec<_>>(),
    })
}

pub fn status_str(s: Status) -> &'static str {
    match s {
        Status::Equivalent => "Equivalent",
        Status::NotEquivalent => "NotEquivalent",
        Status::Inconclusive => "Inconclusive",
    }
}

pub fn verdict_value(v: &EquivalenceVerdict) -> Value {
    json!({
        "status": status_str(v.status),
        "witness": v.witness.as_ref().map(matrix_value),
        "one_dim_rep": v.one_dim_rep.as_ref().map(|w| vector_value(w)),
        "certificate": v.certificate,
    })
}

pub fn gram_value(g: &GramMatrix) -> Value {
    matrix_value(&g.matrix)
}

pub fn overlap_value(r: &OverlapReport) -> Value {
    json!({
        "optimal": num(r.optimal),
        "per_mu_fidelity": r.per_mu_fidelity.iter().map(|&x| num(x)).collect::<Vec<_>>(),
        "bound_trace": num(r.bound_trace),
        "bound_charfunc_global": num(r.bound_charfunc_global),
        "bound_charfunc_per_mu": num(r.bound_charfunc_per_mu),
        "witness": matrix_value(&r.witness),
    })
}

pub fn bochner_value(r: &BochnerReport, dec: &IrrepDecomposition) -> Value {
    json!({
        "positive_definite": r.positive_definite,
        "normalized": r.normalized,
        "min_eigenvalue": num(r.min_eigenvalue),
        "min_block": r.min_block,
        "min_block_trivial": dec.block(r.min_block).is_trivial(),
        "per_block_min": r.per_block_min.iter().map(|&x| num(x)).collect::<Vec<_>>(),
        "hermitian_residual": num(r.hermitian_residual),
    })
}

pub fn gns_value(r: &GnsResult) -> Value {
    json!({
        "dim": r.dim,
        "state": state_value(&r.state),
        "rep": rep_value(&r.rep),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::make_symmetric;
    use crate::linalg;
    use crate::random;

    #[test]
    fn rounding() {
        assert_eq!(round12(-0.0).to_bits(), 0.0f64.to_bits());
        assert_eq!(round12(std::f64::consts::FRAC_1_SQRT_2), 0.707106781187);
        assert_eq!(round12(1e-17), 1e-17);
        assert_eq!(round12(123456.7890123456), 123456.789012);
    }

    #[test]
    fn group_round_trip() {
        let g = make_symmetric(3).unwrap();
        let text = serde_json::to_string(&g.to_json()).unwrap();
        assert_eq!(group_from_json(&text).unwrap(), g);
        assert_eq!(group_from_json("\"symmetric:3\"").unwrap(), g);
        assert_eq!(group_from_json("{\"name\": \"S:3\"}").unwrap(), g);
        let bad = r#"{"order": 2, "mul": [[0,1],[1,1]]}"#;
        assert!(group_from_json(bad).unwrap_err().to_string().contains("permutation"));
    }

    #[test]
    fn rep_variants() {
        let r = rep_from_json(r#"{"group": "cyclic:4", "regular": true}"#).unwrap();
        assert_eq!(r.dim(), 4);
        let w = rep_from_json(r#"{"group": "cyclic:8", "weights": [0, 1, 2]}"#).unwrap();
        assert_eq!(w.dim(), 3);
        let text = serde_json::to_string(&rep_value(&r)).unwrap();
        let back = rep_from_json(&text).unwrap();
        assert!(r.mats().iter().zip(back.mats()).all(|(a, b)| linalg::max_abs(&(a - b)) < 1e-12));
        assert!(rep_from_json(r#"{"group": "cyclic:4"}"#).is_err());
    }

    #[test]
    fn state_round_trip() {
        let mut rng = random::rng(0);
        let p = QuantumState::pure(random::random_pure_vector(3, &mut rng)).unwrap();
        let back = state_from_json(&state_value(&p).to_string()).unwrap();
        assert!((back.vector().unwrap() - p.vector().unwrap()).norm() < 1e-11);
        let m = QuantumState::mixed(random::random_density(3, 2, &mut rng)).unwrap();
        let back = state_from_json(&state_value(&m).to_string()).unwrap();
        assert!(linalg::max_abs(&(back.density() - m.density())) < 1e-11);
        let bad = r#"{"kind": "pure", "data": [[1,0],[1,0]]}"#;
        assert!(state_from_json(bad).unwrap_err().to_string().contains("‖vec‖ = 1"));
    }

    #[test]
    fn channel_and_function_parsing() {
        let c = channel_from_json(r#"{"d_in": 1, "d_out": 1, "kraus": [[[[1,0]]]]}"#).unwrap();
        assert_eq!(c.kraus().len(), 1);
        let g = Arc::new(make_symmetric(2).unwrap());
        let f = func_from_json("[[1,0],[-3,0]]", g.clone()).unwrap();
        assert_eq!(f.at(1), Complex64::new(-3.0, 0.0));
        let f = func_from_json(r#"{"values": [[1,0],[0,0]]}"#, g.clone()).unwrap();
        assert_eq!(f.at(1), Complex64::new(0.0, 0.0));
        assert!(func_from_json("[[1,0]]", g).is_err());
        let w = weight_state_from_json(r#"{"weights": {"0": 0.5, "1": 0.5}}"#).unwrap();
        assert_eq!(w.p(1), 0.5);
    }
}
