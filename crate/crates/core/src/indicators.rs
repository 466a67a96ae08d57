//! Determinantal entanglement indicators.
//!
//! At level `m` the sites `m+1..n` are fixed to every outcome tuple (a
//! branch). Each branch slice is read as a `d_m x prod_{i<m} d_i` matrix and
//! all of its 2x2 minors are recorded. Level `n` has a single empty branch and
//! is the flattening at the last site.

use num_complex::Complex64;
use num_rational::Ratio;
use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::state::{digits_of, PureState};

/// Absolute threshold below which a minor counts as zero.
pub const EPS_ZERO: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CoarseMode {
    #[default]
    Binary,
    Raw,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MinorRecord {
    pub level: usize,
    /// Outcomes `(b_n, b_{n-1}, ..., b_{m+1})`.
    pub branch: Vec<usize>,
    pub row_pair: (usize, usize),
    pub col_pair: (usize, usize),
    pub value: Complex64,
    pub magnitude: f64,
    pub binary: u8,
}

impl Serialize for MinorRecord {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("MinorRecord", 7)?;
        s.serialize_field("branch", &self.branch)?;
        s.serialize_field("row_pair", &[self.row_pair.0, self.row_pair.1])?;
        s.serialize_field("col_pair", &[self.col_pair.0, self.col_pair.1])?;
        s.serialize_field("re", &self.value.re)?;
        s.serialize_field("im", &self.value.im)?;
        s.serialize_field("magnitude", &self.magnitude)?;
        s.serialize_field("binary", &self.binary)?;
        s.end()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelReport {
    pub level: usize,
    pub count: u64,
    pub nonzero: u64,
    pub coarse_binary: f64,
    pub coarse_raw: f64,
    pub branch_probabilities: Vec<f64>,
    pub minors: Vec<MinorRecord>,
}

impl LevelReport {
    pub fn binary_pattern(&self) -> Vec<u8> {
        self.minors.iter().map(|m| m.binary).collect()
    }

    /// `nonzero / count`, reduced.
    pub fn coarse_ratio(&self) -> Ratio<u64> {
        Ratio::new(self.nonzero, self.count)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Hyperdeterminant {
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoarseVectors {
    pub binary: Vec<f64>,
    pub raw: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub dims: Vec<usize>,
    pub tolerance: f64,
    /// Levels `n, n-1, ..., 2`.
    pub levels: Vec<LevelReport>,
    pub coarse: CoarseVectors,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub concurrence: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cayley: Option<Hyperdeterminant>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tangle: Option<f64>,
}

impl AnalysisReport {
    pub fn level(&self, m: usize) -> Option<&LevelReport> {
        self.levels.iter().find(|l| l.level == m)
    }

    pub fn coarse(&self, mode: CoarseMode) -> &[f64] {
        match mode {
            CoarseMode::Binary => &self.coarse.binary,
            CoarseMode::Raw => &self.coarse.raw,
        }
    }
}

fn binomial2(k: u128) -> u128 {
    k * k.saturating_sub(1) / 2
}

fn check_level(sites: usize, m: usize) -> Result<()> {
    if m < 2 || m > sites {
        return Err(Error::LevelOutOfRange { level: m, sites });
    }
    Ok(())
}

/// Number of minors emitted at level `m`:
/// `prod_{j>m} d_j * C(d_m, 2) * C(prod_{i<m} d_i, 2)`.
pub fn minor_count(dims: &[usize], m: usize) -> Result<u128> {
    check_level(dims.len(), m)?;
    let overflow = || Error::Dimension(format!("minor count at level {m} exceeds 128 bits"));
    let prod = |ds: &[usize]| ds.iter().try_fold(1u128, |a, &d| a.checked_mul(d as u128));
    let branches = prod(&dims[m..]).ok_or_else(overflow)?;
    let cols = prod(&dims[..m - 1]).ok_or_else(overflow)?;
    let pairs = cols.checked_mul(cols.saturating_sub(1)).ok_or_else(overflow)? / 2;
    branches
        .checked_mul(binomial2(dims[m - 1] as u128))
        .and_then(|x| x.checked_mul(pairs))
        .ok_or_else(overflow)
}

/// Minors per level with the branch multiplicity removed, summed over
/// `m = 2..=n`: the number of distinct 2x2 determinants that decide complete
/// separability.
pub fn distinct_minor_total(dims: &[usize]) -> Result<u128> {
    if dims.len() < 2 {
        return Err(Error::Dimension("need at least two sites".into()));
    }
    let mut total = 0u128;
    for m in 2..=dims.len() {
        let branches: u128 = dims[m..].iter().map(|&d| d as u128).product();
        total = total
            .checked_add(minor_count(dims, m)? / branches)
            .ok_or_else(|| Error::Dimension("minor total exceeds 128 bits".into()))?;
    }
    Ok(total)
}

/// `sum_{m=2..N} C(2^(m-1), 2)` for `N` qubits, cross-checked against the
/// closed form `(2^N - 1)(2^(N-1) - 1) / 3`.
pub fn total_distinct_minors(qubits: u32) -> Result<u128> {
    if !(2..=63).contains(&qubits) {
        return Err(Error::Dimension(format!("qubit count {qubits} outside 2..=63")));
    }
    let sum: u128 = (2..=qubits).map(|m| binomial2(1u128 << (m - 1))).sum();
    let closed = ((1u128 << qubits) - 1) * ((1u128 << (qubits - 1)) - 1) / 3;
    assert_eq!(sum, closed, "minor total disagrees with its closed form");
    Ok(sum)
}

pub fn level_minors(state: &PureState, m: usize) -> Result<LevelReport> {
    level_minors_with(state, m, EPS_ZERO)
}

pub fn level_minors_with(state: &PureState, m: usize, eps: f64) -> Result<LevelReport> {
    let dims = state.dims();
    check_level(dims.len(), m)?;
    let rows = dims[m - 1];
    let cols: usize = dims[..m - 1].iter().product();
    let slice_len = rows * cols;
    let branch_dims = &dims[m..];
    let branch_count: usize = branch_dims.iter().product();
    let amps = state.amps();

    let per_branch = binomial2(rows as u128) as usize * binomial2(cols as u128) as usize;
    let mut minors = Vec::with_capacity(branch_count * per_branch);
    let mut probabilities = Vec::with_capacity(branch_count);
    let mut slice = vec![Complex64::new(0.0, 0.0); slice_len];
    let mut digits = vec![0usize; branch_dims.len()];

    // bi enumerates (b_n, ..., b_{m+1}) with b_n most significant.
    let reversed: Vec<usize> = branch_dims.iter().rev().copied().collect();
    for bi in 0..branch_count {
        digits_of(&reversed, bi, &mut digits);
        let mut tail = 0usize;
        for (k, &d) in branch_dims.iter().enumerate() {
            tail = tail * d + digits[branch_dims.len() - 1 - k];
        }
        for (p, slot) in slice.iter_mut().enumerate() {
            *slot = amps[p * branch_count + tail];
        }
        probabilities.push(slice.iter().map(|a| a.norm_sqr()).sum());

        // Slice offset p = c * rows + r.
        let entry = |r: usize, c: usize| slice[c * rows + r];
        for c1 in 0..cols {
            for c2 in c1 + 1..cols {
                for r1 in 0..rows {
                    for r2 in r1 + 1..rows {
                        let value = entry(r1, c1) * entry(r2, c2) - entry(r2, c1) * entry(r1, c2);
                        let magnitude = value.norm();
                        minors.push(MinorRecord {
                            level: m,
                            branch: digits.clone(),
                            row_pair: (r1, r2),
                            col_pair: (c1, c2),
                            value,
                            magnitude,
                            binary: u8::from(magnitude > eps),
                        });
                    }
                }
            }
        }
    }

    let count = minors.len() as u64;
    let nonzero = minors.iter().filter(|r| r.binary == 1).count() as u64;
    let raw_sum: f64 = minors.iter().map(|r| r.magnitude).sum();
    Ok(LevelReport {
        level: m,
        count,
        nonzero,
        coarse_binary: nonzero as f64 / count as f64,
        coarse_raw: raw_sum / count as f64,
        branch_probabilities: probabilities,
        minors,
    })
}

/// Mean over all minors of the binarized or raw magnitudes.
pub fn coarse_indicator(report: &LevelReport, mode: CoarseMode) -> f64 {
    match mode {
        CoarseMode::Binary => report.coarse_binary,
        CoarseMode::Raw => report.coarse_raw,
    }
}

pub fn full_profile(state: &PureState) -> Result<AnalysisReport> {
    full_profile_with(state, EPS_ZERO)
}

pub fn full_profile_with(state: &PureState, eps: f64) -> Result<AnalysisReport> {
    let n = state.num_sites();
    if n < 2 {
        return Err(Error::Dimension("analysis needs at least two sites".into()));
    }
    let levels = (2..=n)
        .rev()
        .map(|m| level_minors_with(state, m, eps))
        .collect::<Result<Vec<_>>>()?;
    let coarse = CoarseVectors {
        binary: levels.iter().map(|l| l.coarse_binary).collect(),
        raw: levels.iter().map(|l| l.coarse_raw).collect(),
    };
    let concurrence = (state.dims() == [2, 2]).then(|| concurrence(state)).transpose()?;
    let (cayley, tangle) = if state.dims() == [2, 2, 2] {
        let det = cayley_hyperdet(state)?;
        (Some(Hyperdeterminant { re: det.re, im: det.im }), Some(tangle(det)))
    } else {
        (None, None)
    };
    Ok(AnalysisReport {
        dims: state.dims().to_vec(),
        tolerance: eps,
        levels,
        coarse,
        concurrence,
        cayley,
        tangle,
    })
}

fn require_shape(state: &PureState, dims: &[usize], what: &str) -> Result<()> {
    if state.dims() != dims {
        return Err(Error::Shape(format!(
            "{what} requires dims {dims:?}, got {:?}",
            state.dims()
        )));
    }
    Ok(())
}

/// `2 |x00 x11 - x01 x10|` for a two-qubit state.
pub fn concurrence(state: &PureState) -> Result<f64> {
    require_shape(state, &[2, 2], "concurrence")?;
    let x = state.amps();
    Ok(2.0 * (x[0] * x[3] - x[1] * x[2]).norm())
}

/// Cayley's 2x2x2 hyperdeterminant of the raw amplitudes.
pub fn cayley_hyperdet(state: &PureState) -> Result<Complex64> {
    require_shape(state, &[2, 2, 2], "the Cayley hyperdeterminant")?;
    let a = state.amps();
    let (x000, x001, x010, x011) = (a[0], a[1], a[2], a[3]);
    let (x100, x101, x110, x111) = (a[4], a[5], a[6], a[7]);
    let squares = x000 * x000 * x111 * x111
        + x001 * x001 * x110 * x110
        + x010 * x010 * x101 * x101
        + x100 * x100 * x011 * x011;
    let pairs = x000 * x001 * x110 * x111
        + x000 * x010 * x101 * x111
        + x000 * x011 * x100 * x111
        + x001 * x010 * x101 * x110
        + x001 * x011 * x100 * x110
        + x010 * x011 * x101 * x100;
    let quads = x000 * x011 * x101 * x110 + x001 * x010 * x100 * x111;
    Ok(squares - 2.0 * pairs + 4.0 * quads)
}

/// The three-tangle `4 |Det|`.
pub fn tangle(det: Complex64) -> f64 {
    4.0 * det.norm()
}

/// The hyperdeterminant rebuilt from the six level-3 minors in canonical
/// order: `d3^2 + d4^2 - 2 d2 d5 - 2 d1 d6`.
pub fn hyperdet_from_minors(d: [Complex64; 6]) -> Complex64 {
    let [d1, d2, d3, d4, d5, d6] = d;
    d3 * d3 + d4 * d4 - 2.0 * d2 * d5 - 2.0 * d1 * d6
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ket::parse_state;

    fn state(text: &str) -> PureState {
        parse_state(text, None).unwrap().normalize().unwrap()
    }

    const GHZ: &str = "(1/sqrt(2))(|000>+|111>)";
    const W: &str = "(1/sqrt(3))(|001>+|010>+|100>)";

    #[test]
    fn ghz_level_three() {
        let r = level_minors(&state(GHZ), 3).unwrap();
        assert_eq!(r.binary_pattern(), vec![0, 0, 1, 0, 0, 0]);
        assert!((r.minors[2].value - Complex64::new(0.5, 0.0)).norm() < 1e-15);
        assert_eq!(r.minors[2].col_pair, (0, 3));
        assert_eq!(coarse_indicator(&r, CoarseMode::Binary), 1.0 / 6.0);
        assert!((coarse_indicator(&r, CoarseMode::Raw) - 1.0 / 12.0).abs() < 1e-15);
    }

    #[test]
    fn w_level_two() {
        let r = level_minors(&state(W), 2).unwrap();
        assert_eq!(r.binary_pattern(), vec![1, 0]);
        assert!((r.minors[0].value - Complex64::new(-1.0 / 3.0, 0.0)).norm() < 1e-15);
        assert_eq!(r.minors[1].value, Complex64::new(0.0, 0.0));
        assert_eq!(r.minors[0].branch, vec![0]);
        assert_eq!(r.coarse_ratio(), Ratio::new(1, 2));
        let p = &r.branch_probabilities;
        assert!((p[0] - 2.0 / 3.0).abs() < 1e-15 && (p[1] - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn psi_level_three() {
        let r = level_minors(&state("(1/2)(|001>+|010>+|100>+|111>)"), 3).unwrap();
        assert_eq!(r.binary_pattern(), vec![1, 1, 0, 0, 1, 1]);
    }

    #[test]
    fn four_qubit_w_level_three() {
        let r = level_minors(&state("(1/sqrt(4))(|0001>+|0010>+|0100>+|1000>)"), 3).unwrap();
        assert_eq!(r.binary_pattern(), vec![1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0]);
        assert_eq!(r.minors[0].branch, vec![0]);
        assert_eq!(r.minors[11].branch, vec![1]);
    }

    #[test]
    fn branch_order_puts_last_site_first() {
        // Only the branch (b4, b3) = (0, 1) is realizable.
        let s = state("(1/sqrt(2))(|0010>+|1110>)");
        let r = level_minors(&s, 2).unwrap();
        let branches: Vec<_> = r.minors.iter().map(|m| m.branch.clone()).collect();
        assert_eq!(branches, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
        assert_eq!(r.binary_pattern(), vec![0, 1, 0, 0]);
        let p = &r.branch_probabilities;
        assert_eq!((p[0], p[2], p[3]), (0.0, 0.0, 0.0));
        assert!((p[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn counts() {
        assert_eq!(minor_count(&[2, 2, 2], 3).unwrap(), 6);
        assert_eq!(minor_count(&[2, 2, 2], 2).unwrap(), 2);
        let l: Vec<u128> = (2..=4).rev().map(|m| minor_count(&[2; 4], m).unwrap()).collect();
        assert_eq!(l, vec![28, 12, 4]);
        assert_eq!(minor_count(&[3, 3], 2).unwrap(), 9);
        assert_eq!(minor_count(&[3, 3, 3], 3).unwrap(), 108);
        assert!(minor_count(&[2, 2], 1).is_err());
        assert!(minor_count(&[2, 2], 3).is_err());
        assert!(matches!(minor_count(&[1 << 40; 4], 4), Err(Error::Dimension(_))));
        assert_eq!(total_distinct_minors(2).unwrap(), 1);
        assert_eq!(total_distinct_minors(3).unwrap(), 7);
        assert_eq!(total_distinct_minors(4).unwrap(), 35);
        assert_eq!(distinct_minor_total(&[2; 4]).unwrap(), 35);
    }

    #[test]
    fn qutrit_pair_level_two() {
        let s = state("|00>+|01>+|02>+|10>+|11>+|12>+|20>+|21>+|22>");
        let r = level_minors(&s, 2).unwrap();
        assert_eq!(r.count, 9);
        assert_eq!(r.nonzero, 0);
    }

    #[test]
    fn concurrence_values() {
        assert!((concurrence(&state("|00>+|11>")).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(concurrence(&state("|0>+|1>").tensor_product(&state("|1>"))).unwrap(), 0.0);
        assert_eq!(concurrence(&state("(1/2)(|00>+|01>+|10>+|11>)")).unwrap(), 0.0);
        assert!(matches!(concurrence(&state(GHZ)), Err(Error::Shape(_))));
    }

    #[test]
    fn hyperdeterminants() {
        assert_eq!(cayley_hyperdet(&state(W)).unwrap(), Complex64::new(0.0, 0.0));
        let ghz = cayley_hyperdet(&state(GHZ)).unwrap();
        assert!((ghz - Complex64::new(0.25, 0.0)).norm() < 1e-15);
        assert!((tangle(ghz) - 1.0).abs() < 1e-14);
        let zero = Complex64::new(0.0, 0.0);
        let half = Complex64::new(0.5, 0.0);
        assert_eq!(hyperdet_from_minors([zero, zero, half, zero, zero, zero]), half * half);
        assert_eq!(hyperdet_from_minors([zero; 6]), zero);
        assert!(matches!(cayley_hyperdet(&state("|00>")), Err(Error::Shape(_))));
    }

    #[test]
    fn hyperdet_matches_minor_identity_on_random_states() {
        for seed in 0..50 {
            let s = crate::random::random_state(&[2, 2, 2], seed).unwrap();
            let r = level_minors(&s, 3).unwrap();
            let d: [Complex64; 6] = std::array::from_fn(|k| r.minors[k].value);
            let diff = (hyperdet_from_minors(d) - cayley_hyperdet(&s).unwrap()).norm();
            assert!(diff <= 1e-9, "seed {seed}: {diff}");
        }
    }

    #[test]
    fn product_state_profile_is_zero() {
        let s = crate::random::random_product_state(&[2, 3, 2, 2], 3).unwrap();
        let p = full_profile(&s).unwrap();
        assert!(p.coarse.binary.iter().all(|&c| c == 0.0));
        assert_eq!(p.levels.len(), 3);
        assert!(p.concurrence.is_none() && p.cayley.is_none());
    }

    #[test]
    fn cluster_profile() {
        let s = state("(1/sqrt(8))(|000>+|001>+|010>-|011>+|100>+|101>-|110>+|111>)");
        let p = full_profile(&s).unwrap();
        assert_eq!(p.level(3).unwrap().binary_pattern(), vec![1, 0, 1, 1, 0, 1]);
        assert_eq!(p.level(2).unwrap().binary_pattern(), vec![1, 1]);
        assert_eq!(p.coarse.binary, vec![2.0 / 3.0, 1.0]);
        assert!(p.cayley.is_some() && p.tangle.is_some());
    }

    #[test]
    fn unrealizable_branches_give_zero_minors() {
        let s = state("|0000>");
        for m in 2..=4 {
            let r = level_minors(&s, m).unwrap();
            assert!(r.minors.iter().all(|x| x.magnitude == 0.0 && !x.value.re.is_nan()));
        }
        assert!(level_minors(&s, 5).is_err());
        assert!(full_profile(&state("|0>")).is_err());
    }

    #[test]
    fn json_field_names() {
        let r = level_minors(&state(GHZ), 3).unwrap();
        let v = serde_json::to_value(&r.minors[2]).unwrap();
        let keys: Vec<&str> = v.as_object().unwrap().keys().map(|k| k.as_str()).collect();
        for k in ["branch", "row_pair", "col_pair", "re", "im", "magnitude", "binary"] {
            assert!(keys.contains(&k), "{k}");
        }
    }
}
