//! Report builders for each subcommand. Every report is a `serde_json::Value`
//! whose maps are key-sorted, so serialization is byte-stable.

use fracmirror::cohom::{
    align_scale, b_series, deformed_solution, eps_graded_json, frobenius_residue,
    i_function_mirror_map, i_function_untwisted, i_function_weights, CohomRing,
};
use fracmirror::gkz::{build_gkz, holo_solution, GkzData, KernelShape};
use fracmirror::json::{NefJson, PolytopeJson};
use fracmirror::lattice::{lattice_transform, smith_relations, IntegerMatrix};
use fracmirror::mirror::{a_model_correlation, frobenius_pair, is_integral, mirror_map};
use fracmirror::picard_fuchs::{conjugate_factored, theta_conjugate, ThetaOperator};
use fracmirror::rational::{fmt_q, int};
use fracmirror::series::Coeff;
use fracmirror::topology::{euler_double_cover, hodge_middle_error, CoverTopology};
use fracmirror::{Error, NefPartitionData, Result};
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

/// The rank-one quantum data shared by the series subcommands.
pub struct Quantum {
    pub gkz: GkzData,
    pub ell: Vec<i64>,
    pub shape: KernelShape,
    pub op: ThetaOperator,
}

impl Quantum {
    pub fn new(data: &NefPartitionData) -> Result<Self> {
        let gkz = build_gkz(data)?;
        if gkz.kernel.len() != 1 {
            return Err(Error::MultiparameterUnsupported(gkz.kernel.len()));
        }
        let ell = gkz.principal_kernel_vector()?;
        let shape = gkz.shape(&ell)?;
        let op = theta_conjugate(&shape)?;
        Ok(Quantum {
            gkz,
            ell,
            shape,
            op,
        })
    }
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}

pub fn dual_nef(data: &NefPartitionData) -> Result<Value> {
    let dual = data.dual()?;
    Ok(json!({
        "input": to_value(&NefJson::from_data(data)),
        "nabla": to_value(&PolytopeJson::from_polytope(data.nabla())),
        "nabla_dual": to_value(&PolytopeJson::from_polytope(data.nabla_dual())),
        "nabla_parts": data.nabla_parts().iter().map(|p| to_value(&PolytopeJson::from_polytope(p))).collect::<Vec<_>>(),
        "dual": to_value(&NefJson::from_data(&dual)),
        "checks": to_value(&data.validate()),
    }))
}

pub fn euler(t: &CoverTopology) -> Value {
    to_value(t)
}

pub fn hodge(t: &CoverTopology) -> Result<Value> {
    for table in [&t.hodge, &t.hodge_dual] {
        if let Some(e) = hodge_middle_error(table) {
            return Err(e);
        }
    }
    Ok(json!({
        "n": t.n,
        "chi_y": t.chi_y,
        "chi_y_dual": t.chi_y_dual,
        "hodge": to_value(&t.hodge),
        "hodge_dual": to_value(&t.hodge_dual),
    }))
}

pub fn gkz(q: &Quantum) -> Result<Value> {
    let (rows, beta) = q.gkz.display_form();
    let mut v = q.gkz.to_json();
    v["display"] = json!({
        "rows": rows,
        "beta": beta.iter().map(fmt_q).collect::<Vec<_>>(),
    });
    v["volume"] = json!(q.gkz.volume()?.to_string());
    v["principal_kernel_vector"] = json!(q.ell);
    Ok(v)
}

pub fn pf(q: &Quantum, n: usize) -> Result<Value> {
    let factored = conjugate_factored(&q.shape)?;
    let annihilates = q.op.apply(&holo_solution(&q.shape, n)).is_zero();
    Ok(json!({
        "operator": q.op.to_json(),
        "expanded": q.op.to_string(),
        "factored": factored.to_string(),
        "annihilates_omega0": annihilates,
    }))
}

pub fn mirror(q: &Quantum, n: usize) -> Result<Value> {
    let pair = frobenius_pair(&q.shape, n)?;
    let mm = mirror_map(&pair)?;
    Ok(json!({
        "N": n,
        "scale": pair.scale.to_string(),
        "omega0": pair.omega0.to_json(),
        "tau": pair.tau.to_json(),
        "q_of_z": mm.q_of_z.to_json(),
        "z_of_q": mm.z_of_q.to_json(),
    }))
}

/// `C = 2 (H|_X)³` where `H = −K_X / Σkᵢ`, so `H³ = vol(Δ) / (Σkᵢ)³`.
pub fn default_normalization(data: &NefPartitionData, q: &Quantum) -> Result<BigRational> {
    let vol = data.delta().normalized_volume()?;
    let vol = vol.to_i64().ok_or(Error::Overflow("normalized volume"))?;
    let k = i64::from(q.shape.total_k());
    Ok(int(2 * vol) / int(k.pow(data.n() as u32)))
}

pub fn yukawa(q: &Quantum, n: usize, c: &BigRational) -> Result<Value> {
    // one extra order so the A-model series reaches q^N
    let pair = frobenius_pair(&q.shape, n + 1)?;
    let y = a_model_correlation(&q.op, &pair, c)?;
    let mut v = y.to_json();
    v["N"] = json!(n);
    v["integral"] = json!(is_integral(&y.k_q));
    Ok(v)
}

pub fn ifunction(q: &Quantum, n: usize) -> Result<Value> {
    let m = q.op.degree();
    let (num, den) = i_function_weights(&q.shape)?;
    let i = i_function_untwisted(&num, &den, m, n);
    let mm = i_function_mirror_map(&i)?;
    let pair = frobenius_pair(&q.shape, n)?;
    let s = align_scale(&mm.a, &pair.omega0)?;
    let agrees = pair.tau.div(&pair.omega0)?.rescale(&s) == mm.b_over_a;
    Ok(json!({
        "N": n,
        "nilpotency": m,
        "numerator_weights": num,
        "denominator_weights": den,
        "i_function": eps_graded_json(&i, m),
        "b_over_a": mm.b_over_a.to_json(),
        "exp_t": mm.exp_t.to_json(),
        "scale": fmt_q(&s),
        "agrees_with_frobenius": agrees,
    }))
}

pub fn bseries(q: &Quantum, n: usize, c: &BigRational) -> Result<Value> {
    let m = q.op.degree();
    let ring = CohomRing::from_kernel(&q.ell, m, c.clone());
    if !ring.relations_hold(&q.gkz) {
        return Err(Error::Assertion(
            "divisor classes violate the linear relations".into(),
        ));
    }
    let b = b_series(&ring, &q.gkz, &q.ell, n)?;
    let annihilated = q.op.apply_log(&b).is_zero();
    if !annihilated {
        return Err(Error::Assertion(
            "B-series is not annihilated modulo ε^d".into(),
        ));
    }
    let residue = frobenius_residue(&q.op, &deformed_solution(&q.shape, n, m + 1), m + 1)?;
    Ok(json!({
        "N": n,
        "nilpotency": m,
        "divisors": ring.divisors.iter().map(fmt_q).collect::<Vec<_>>(),
        "b_series": eps_graded_json(&b, m),
        "annihilated": annihilated,
        "frobenius_residue": residue.coeff(0).to_json(),
    }))
}

pub fn all(data: &NefPartitionData, n: usize, c: Option<&BigRational>) -> Result<Value> {
    let t = euler_double_cover(data)?;
    let mut v = json!({
        "dual_nef": dual_nef(data)?,
        "euler": euler(&t),
    });
    if hodge_middle_error(&t.hodge).is_none() && hodge_middle_error(&t.hodge_dual).is_none() {
        v["hodge"] = hodge(&t)?;
    }
    let q = Quantum::new(data)?;
    v["gkz"] = gkz(&q)?;
    v["pf"] = pf(&q, n)?;
    v["mirror_map"] = mirror(&q, n)?;
    v["ifunction"] = ifunction(&q, n)?;
    if q.op.degree() == 4 {
        let c = match c {
            Some(c) => c.clone(),
            None => default_normalization(data, &q)?,
        };
        v["yukawa"] = yukawa(&q, n, &c)?;
        v["bseries"] = bseries(&q, n, &c)?;
    }
    Ok(v)
}

#[derive(serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransitionJson {
    pub delta_1: PolytopeJson,
    pub nabla_1: PolytopeJson,
    pub delta_2: PolytopeJson,
    pub rho: Vec<Vec<i64>>,
    pub transform: Vec<Vec<i64>>,
    pub nu: Vec<Vec<i64>>,
}

pub fn transition(t: &TransitionJson) -> Result<Value> {
    let delta_1 = t.delta_1.to_polytope()?;
    let nabla_1 = t.nabla_1.to_polytope()?;
    let delta_2 = t.delta_2.to_polytope()?;
    let rel = smith_relations(&IntegerMatrix::from_columns(&t.rho)?);
    let u = IntegerMatrix::from_rows(&t.transform)?;
    let image = lattice_transform(&u, &t.rho)?;
    let nabla_2 =
        fracmirror::LatticePolytope::convex_hull(&image, t.nu.first().map_or(0, Vec::len))?;
    let nabla_2_dual = nabla_2.polar_dual()?;
    let checks = json!({
        "delta_1_reflexive": delta_1.is_reflexive(),
        "nabla_1_is_polar_of_delta_1": delta_1.polar_dual()? == nabla_1,
        "transform_maps_rho_to_nu": image == t.nu,
        "nabla_2_reflexive": nabla_2.is_reflexive(),
        "delta_2_is_polar_of_nabla_2": nabla_2_dual == delta_2,
    });
    if checks
        .as_object()
        .is_some_and(|m| m.values().any(|b| b == &json!(false)))
    {
        return Err(Error::Assertion(format!(
            "transition checks failed: {checks}"
        )));
    }
    Ok(json!({
        "relations": rel.kernel.iter().map(|v| v.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "index": rel.index.to_string(),
        "nu": image,
        "nabla_2": to_value(&PolytopeJson::from_polytope(&nabla_2)),
        "delta_2": to_value(&PolytopeJson::from_polytope(&nabla_2_dual)),
        "checks": checks,
    }))
}
