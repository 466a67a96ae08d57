//! Rank-one tests on flattenings and the recursive last-site factorization.
//!
//! A state is partially separable at site `s` iff its flattening at `s` has
//! rank one, i.e. every 2x2 minor vanishes. Rank decisions use the same
//! absolute threshold as the indicator binarization.

use num_complex::Complex64;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::indicators::EPS_ZERO;
use crate::state::{Flattening, PureState};
use crate::statefile::{amps_to_pairs, state_value};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Witness {
    pub row_pair: (usize, usize),
    pub col_pair: (usize, usize),
    pub magnitude: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankDecision {
    pub rank_one: bool,
    /// First violating minor in (column pair, row pair) order.
    pub witness: Option<Witness>,
    pub max_minor: f64,
    /// Every entry is at or below the threshold.
    pub degenerate: bool,
    /// `max_minor` lies within a factor of ten of the threshold.
    pub marginal: bool,
}

pub fn matrix_rank_one(flat: &Flattening) -> RankDecision {
    matrix_rank_one_with(flat, EPS_ZERO)
}

pub fn matrix_rank_one_with(flat: &Flattening, eps: f64) -> RankDecision {
    let (rows, cols) = (flat.rows(), flat.cols());
    let mut max_minor = 0.0f64;
    let mut witness = None;
    for c1 in 0..cols {
        for c2 in c1 + 1..cols {
            for r1 in 0..rows {
                for r2 in r1 + 1..rows {
                    let det = flat.get(r1, c1) * flat.get(r2, c2) - flat.get(r2, c1) * flat.get(r1, c2);
                    let magnitude = det.norm();
                    if magnitude > eps && witness.is_none() {
                        witness = Some(Witness {
                            row_pair: (r1, r2),
                            col_pair: (c1, c2),
                            magnitude,
                        });
                    }
                    max_minor = max_minor.max(magnitude);
                }
            }
        }
    }
    let degenerate = flat.entries().iter().all(|e| e.norm() <= eps);
    RankDecision {
        rank_one: max_minor <= eps,
        witness,
        max_minor,
        degenerate,
        marginal: max_minor >= eps / 10.0 && max_minor <= eps * 10.0,
    }
}

/// Scales `v` to unit norm with its largest-magnitude component real positive.
fn canonical_factor(v: &[Complex64]) -> Vec<Complex64> {
    let norm: f64 = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    let pivot = v
        .iter()
        .enumerate()
        .fold((0, 0.0f64), |best, (i, x)| if x.norm() > best.1 { (i, x.norm()) } else { best })
        .0;
    let phase = v[pivot].conj() / v[pivot].norm();
    v.iter().map(|x| x * phase / norm).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct PartialSplit {
    pub separable: bool,
    /// Unit vector spanning the image of the flattening.
    pub factor: Option<Vec<Complex64>>,
    /// Unit-norm state on the other sites; absent for single-site input.
    pub remainder: Option<PureState>,
    pub decision: RankDecision,
}

pub fn partially_separable(state: &PureState, site: usize) -> Result<PartialSplit> {
    partially_separable_with(state, site, EPS_ZERO)
}

pub fn partially_separable_with(state: &PureState, site: usize, eps: f64) -> Result<PartialSplit> {
    let flat = state.flatten(site)?;
    if state.is_zero() {
        return Err(Error::Degenerate("cannot split the zero vector".into()));
    }
    let decision = matrix_rank_one_with(&flat, eps);
    if !decision.rank_one {
        return Ok(PartialSplit { separable: false, factor: None, remainder: None, decision });
    }

    let column_norm = |c: usize| (0..flat.rows()).map(|r| flat.get(r, c).norm_sqr()).sum::<f64>();
    let best = (0..flat.cols())
        .fold((0, -1.0f64), |acc, c| {
            let n = column_norm(c);
            if n > acc.1 { (c, n) } else { acc }
        })
        .0;
    let factor = canonical_factor(&flat.column(best));

    let remainder = if state.num_sites() > 1 {
        let amps: Vec<Complex64> = (0..flat.cols())
            .map(|c| (0..flat.rows()).map(|r| factor[r].conj() * flat.get(r, c)).sum())
            .collect();
        let mut dims = state.dims().to_vec();
        dims.remove(site - 1);
        Some(PureState::new(dims, amps)?.normalize()?)
    } else {
        None
    };
    Ok(PartialSplit { separable: true, factor: Some(factor), remainder, decision })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Factorization {
    /// Factors split off from site `n` inward: `factors[0]` is site `n`.
    pub factors: Vec<Vec<Complex64>>,
    /// Entangled block on sites `1..=core_sites`, when one remains.
    pub core: Option<PureState>,
    pub core_sites: usize,
    pub marginal: bool,
}

impl Factorization {
    pub fn is_complete(&self) -> bool {
        self.core.is_none()
    }

    /// Re-tensors the core (if any) with the factors in site order.
    pub fn reconstruct(&self) -> Result<PureState> {
        let mut pieces = self.factors.iter().rev().map(|f| PureState::new(vec![f.len()], f.clone()));
        let mut acc = match &self.core {
            Some(core) => core.clone(),
            None => pieces
                .next()
                .ok_or_else(|| Error::Validation("empty factorization".into()))??,
        };
        for piece in pieces {
            acc = acc.tensor_product(&piece?);
        }
        Ok(acc)
    }

    pub fn to_value(&self) -> Value {
        let n = self.core_sites + self.factors.len();
        let factors: Vec<Value> = self
            .factors
            .iter()
            .enumerate()
            .map(|(k, f)| json!({ "site": n - k, "amps": amps_to_pairs(f) }))
            .collect();
        json!({
            "factors": factors,
            "core": self.core.as_ref().map(state_value),
            "core_sites": self.core_sites,
            "marginal": self.marginal,
        })
    }
}

pub fn factorize(state: &PureState) -> Result<Factorization> {
    factorize_with(state, EPS_ZERO)
}

pub fn factorize_with(state: &PureState, eps: f64) -> Result<Factorization> {
    let mut current = state.normalize()?;
    let mut factors = Vec::new();
    let mut marginal = false;
    loop {
        let n = current.num_sites();
        if n == 1 {
            factors.push(canonical_factor(current.amps()));
            return Ok(Factorization { factors, core: None, core_sites: 0, marginal });
        }
        let split = partially_separable_with(&current, n, eps)?;
        marginal |= split.decision.marginal;
        if !split.separable {
            return Ok(Factorization { factors, core: Some(current), core_sites: n, marginal });
        }
        factors.push(split.factor.expect("separable split has a factor"));
        current = split.remainder.expect("multi-site split has a remainder");
    }
}

pub fn completely_separable(state: &PureState) -> Result<bool> {
    completely_separable_with(state, EPS_ZERO)
}

pub fn completely_separable_with(state: &PureState, eps: f64) -> Result<bool> {
    for site in 1..=state.num_sites() {
        if !partially_separable_with(state, site, eps)?.separable {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeparabilityReport {
    pub completely_separable: bool,
    pub per_site_separable: Vec<bool>,
    pub per_site_marginal: Vec<bool>,
    pub factorization: Factorization,
}

impl SeparabilityReport {
    pub fn to_value(&self) -> Value {
        json!({
            "completely_separable": self.completely_separable,
            "per_site_separable": self.per_site_separable,
            "per_site_marginal": self.per_site_marginal,
            "factorization": self.factorization.to_value(),
        })
    }
}

pub fn classify(state: &PureState) -> Result<SeparabilityReport> {
    classify_with(state, EPS_ZERO)
}

pub fn classify_with(state: &PureState, eps: f64) -> Result<SeparabilityReport> {
    let state = state.normalize()?;
    let splits = (1..=state.num_sites())
        .map(|s| partially_separable_with(&state, s, eps))
        .collect::<Result<Vec<_>>>()?;
    let per_site_separable: Vec<bool> = splits.iter().map(|s| s.separable).collect();
    Ok(SeparabilityReport {
        completely_separable: per_site_separable.iter().all(|&b| b),
        per_site_marginal: splits.iter().map(|s| s.decision.marginal).collect(),
        per_site_separable,
        factorization: factorize_with(&state, eps)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ket::parse_state;
    use crate::random::{random_product_state, random_state};

    fn state(text: &str) -> PureState {
        parse_state(text, None).unwrap().normalize().unwrap()
    }

    const GHZ: &str = "(1/sqrt(2))(|000>+|111>)";
    const W: &str = "(1/sqrt(3))(|001>+|010>+|100>)";

    #[test]
    fn product_flattening_is_rank_one() {
        let x = random_state(&[2], 1).unwrap();
        let y = random_state(&[2], 2).unwrap();
        let d = matrix_rank_one(&x.tensor_product(&y).flatten(2).unwrap());
        assert!(d.rank_one && d.witness.is_none() && !d.degenerate);
    }

    #[test]
    fn ghz_witness() {
        let d = matrix_rank_one(&state(GHZ).flatten(3).unwrap());
        assert!(!d.rank_one);
        let w = d.witness.unwrap();
        assert_eq!((w.col_pair, w.row_pair), ((0, 3), (0, 1)));
        assert!((w.magnitude - 0.5).abs() < 1e-15);
    }

    #[test]
    fn qutrit_product_pair() {
        let s = random_product_state(&[3, 3], 9).unwrap();
        let d = matrix_rank_one(&s.flatten(2).unwrap());
        assert!(d.rank_one);
    }

    #[test]
    fn zero_matrix_is_degenerate_rank_one() {
        let z = PureState::new(vec![2, 2], vec![Complex64::new(0.0, 0.0); 4]).unwrap();
        let d = matrix_rank_one(&z.flatten(1).unwrap());
        assert!(d.rank_one && d.degenerate);
        assert!(matches!(partially_separable(&z, 1), Err(Error::Degenerate(_))));
        assert!(matches!(factorize(&z), Err(Error::Degenerate(_))));
    }

    #[test]
    fn middle_site_split() {
        let v = random_state(&[2], 4).unwrap();
        let z = random_state(&[3], 5).unwrap();
        let w = random_state(&[2], 6).unwrap();
        let u = v.tensor_product(&z).tensor_product(&w);
        let split = partially_separable(&u, 2).unwrap();
        assert!(split.separable);
        let factor = PureState::new(vec![3], split.factor.unwrap()).unwrap();
        assert!(factor.deviation_up_to_scalar(&z).unwrap() < 1e-12);
        let rem = split.remainder.unwrap();
        assert!(rem.deviation_up_to_scalar(&v.tensor_product(&w)).unwrap() < 1e-12);
        // Reinsert the factor at site 2.
        let rebuilt = rem.tensor_product(&factor).permute_sites(&[1, 3, 2]).unwrap();
        assert!(u.deviation_up_to_scalar(&rebuilt).unwrap() < 1e-12);
    }

    #[test]
    fn w_is_nowhere_separable() {
        for site in 1..=3 {
            assert!(!partially_separable(&state(W), site).unwrap().separable);
        }
    }

    #[test]
    fn bell_times_zero() {
        let s = state("|000>+|110>");
        let verdicts: Vec<bool> =
            (1..=3).map(|k| partially_separable(&s, k).unwrap().separable).collect();
        assert_eq!(verdicts, vec![false, false, true]);
    }

    #[test]
    fn factor_phase_convention() {
        let s = state("i|00>+2i|01>");
        let split = partially_separable(&s, 2).unwrap();
        let f = split.factor.unwrap();
        assert!(f[1].im.abs() < 1e-15 && f[1].re > 0.0);
    }

    #[test]
    fn factorize_random_product() {
        let s = random_product_state(&[2; 5], 42).unwrap();
        let f = factorize(&s).unwrap();
        assert_eq!(f.factors.len(), 5);
        assert!(f.is_complete());
        assert!(s.deviation_up_to_scalar(&f.reconstruct().unwrap()).unwrap() < 1e-9);
    }

    #[test]
    fn factorize_ghz_times_one() {
        let s = state(GHZ).tensor_product(&state("|1>"));
        let f = factorize(&s).unwrap();
        assert_eq!(f.factors.len(), 1);
        assert!((f.factors[0][1] - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert_eq!(f.core_sites, 3);
        assert!(f.core.as_ref().unwrap().deviation_up_to_scalar(&state(GHZ)).unwrap() < 1e-15);
        assert!(s.deviation_up_to_scalar(&f.reconstruct().unwrap()).unwrap() < 1e-12);
    }

    #[test]
    fn factorize_w_keeps_everything() {
        let f = factorize(&state(W)).unwrap();
        assert!(f.factors.is_empty());
        assert_eq!(f.core_sites, 3);
    }

    #[test]
    fn complete_separability() {
        assert!(completely_separable(&random_product_state(&[3, 3, 3], 1).unwrap()).unwrap());
        let cluster = state("(1/sqrt(8))(|000>+|001>+|010>-|011>+|100>+|101>-|110>+|111>)");
        assert!(!completely_separable(&cluster).unwrap());
        assert!(completely_separable(&state("0.6|00>+0|11>")).unwrap());
    }

    #[test]
    fn classify_examples() {
        let r = classify(&state("(1/sqrt(2))(|000>+|011>)")).unwrap();
        assert_eq!(r.per_site_separable, vec![true, false, false]);
        assert!(!r.completely_separable);
        assert_eq!(classify(&state(GHZ)).unwrap().per_site_separable, vec![false; 3]);
        let basis = classify(&state("|000>")).unwrap();
        assert_eq!(basis.per_site_separable, vec![true; 3]);
        assert!(basis.completely_separable && basis.factorization.is_complete());
    }

    #[test]
    fn marginal_flag_near_threshold() {
        // minor = 1e-10 * 0.5 sits inside [eps/10, 10 eps].
        let s = PureState::new(
            vec![2, 2],
            vec![
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(5e-11, 0.0),
            ],
        )
        .unwrap();
        let d = matrix_rank_one(&s.flatten(2).unwrap());
        assert!(d.rank_one && d.marginal);
        assert!(classify(&s).unwrap().per_site_marginal.iter().all(|&m| m));
    }
}
