//! Combinators moving impredictability witnesses between rates and sets.

use std::collections::BTreeMap;
use std::fmt::Display;

use num_bigint::BigUint;
use serde::Serialize;

use super::rate::RateFunction;
use super::skeleton::Skeleton;
use super::RecursionError;
use crate::subshift::OraclePrefix;

/// A total `ψ` given by finitely many assigned values and a default, tagged
/// with the rate it witnesses.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PsiHandle {
    pub rate: RateFunction,
    #[serde(serialize_with = "crate::serde_util::biguint_map")]
    pub values: BTreeMap<u64, BigUint>,
    #[serde(serialize_with = "crate::serde_util::biguint")]
    pub default: BigUint,
}

impl PsiHandle {
    pub fn from_skeleton(skel: &Skeleton) -> PsiHandle {
        PsiHandle {
            rate: skel.phi.clone(),
            values: skel.assignments().iter().map(|(&p, &v)| (p, BigUint::from(v))).collect(),
            default: BigUint::from(skel.psi(u64::MAX)),
        }
    }

    pub fn get(&self, p: u64) -> &BigUint {
        self.values.get(&p).unwrap_or(&self.default)
    }
}

/// The same `ψ`, now claimed for the slower rate `φ ≤ φ'`.
pub fn restrict_rate(
    handle: &PsiHandle,
    phi_prime: &RateFunction,
    phi: &RateFunction,
    range: u64,
) -> Result<PsiHandle, RecursionError> {
    if handle.rate != *phi_prime {
        return Err(RecursionError::Rate(format!("handle witnesses {}, not {phi_prime}", handle.rate)));
    }
    if let Some(n) = (0..=range).find(|&n| phi.eval(n) > phi_prime.eval(n)) {
        return Err(RecursionError::Rate(format!("{phi}({n}) exceeds {phi_prime}({n})")));
    }
    Ok(PsiHandle { rate: phi.clone(), ..handle.clone() })
}

/// `ψ' = f ∘ ψ` for a many-one reduction `f` of `A` to `B` and a wtt
/// reduction `g` of `B` to `A` with rate `β`. Every probe prefix `w` must give
/// `|g(w)| ≥ β(|w|)`, and `β` must not be constant on `0..=range`.
pub fn transport_impredictability<F, G, E>(
    f: F,
    g: G,
    beta: &RateFunction,
    handle: &PsiHandle,
    probes: &[OraclePrefix],
    range: u64,
) -> Result<PsiHandle, RecursionError>
where
    F: Fn(&BigUint) -> Result<BigUint, E>,
    G: Fn(&OraclePrefix) -> Result<Vec<bool>, E>,
    E: Display,
{
    if beta.eval(range) <= beta.eval(0) {
        return Err(RecursionError::Rate(format!("rate {beta} does not grow on 0..={range}")));
    }
    for w in probes {
        let out = g(w).map_err(|e| RecursionError::Transport(e.to_string()))?;
        let need = beta.eval(w.len() as u64);
        if (out.len() as u64) < need {
            return Err(RecursionError::Rate(format!(
                "reducer output of length {} on a {}-bit prefix, rate requires {need}",
                out.len(),
                w.len()
            )));
        }
    }
    let tr = |x: &BigUint| f(x).map_err(|e| RecursionError::Transport(e.to_string()));
    let values = handle.values.iter().map(|(&p, v)| Ok((p, tr(v)?))).collect::<Result<_, RecursionError>>()?;
    Ok(PsiHandle {
        rate: RateFunction::compose(beta.clone(), handle.rate.clone()),
        values,
        default: tr(&handle.default)?,
    })
}
