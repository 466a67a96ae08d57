//! Dense multipartite pure states.
//!
//! Amplitudes are stored row-major with site 1 most significant: the
//! coefficient of `|b1 b2 ... bn>` lives at offset `sum_i b_i * prod_{j>i} d_j`.
//! Sites are numbered from 1 in every public signature.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerance on `u u^dagger = 1` and on unit-norm measurement directions.
pub const UNITARY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    dims: Vec<usize>,
    amps: Vec<Complex64>,
}

/// The `d_site x (prod of other dims)` matrix of the map from the dual of the
/// other sites onto the distinguished site.
#[derive(Debug, Clone, PartialEq)]
pub struct Flattening {
    rows: usize,
    cols: usize,
    site: usize,
    source_dims: Vec<usize>,
    entries: Vec<Complex64>,
}

/// Raw result of fixing or projecting one site. The state is never
/// renormalized; `probability` is its squared norm.
#[derive(Debug, Clone, PartialEq)]
pub struct Reduced {
    pub state: PureState,
    pub probability: f64,
}

impl Reduced {
    fn new(state: PureState) -> Self {
        let probability = state.norm_sqr();
        Reduced { state, probability }
    }

    /// A branch whose raw slice is identically zero.
    pub fn is_unrealizable(&self) -> bool {
        self.probability == 0.0
    }
}

pub(crate) fn check_dims(dims: &[usize]) -> Result<usize> {
    if dims.is_empty() {
        return Err(Error::Dimension("at least one site is required".into()));
    }
    if let Some(d) = dims.iter().find(|&&d| d < 2) {
        return Err(Error::Dimension(format!(
            "local dimensions must be at least 2, got {d}"
        )));
    }
    dims.iter()
        .try_fold(1usize, |acc, &d| acc.checked_mul(d))
        .ok_or_else(|| Error::Dimension("total dimension overflows".into()))
}

fn check_finite(amps: &[Complex64]) -> Result<()> {
    match amps.iter().position(|a| !a.re.is_finite() || !a.im.is_finite()) {
        Some(i) => Err(Error::Validation(format!("amplitude {i} is not finite"))),
        None => Ok(()),
    }
}

impl PureState {
    /// Builds a state verbatim, without normalizing.
    pub fn new(dims: Vec<usize>, amps: Vec<Complex64>) -> Result<Self> {
        let total = check_dims(&dims)?;
        if amps.len() != total {
            return Err(Error::Dimension(format!(
                "expected {total} amplitudes for dims {dims:?}, got {}",
                amps.len()
            )));
        }
        check_finite(&amps)?;
        Ok(PureState { dims, amps })
    }

    /// The computational basis state `|digits>`.
    pub fn basis(dims: Vec<usize>, digits: &[usize]) -> Result<Self> {
        let total = check_dims(&dims)?;
        if digits.len() != dims.len() {
            return Err(Error::Dimension(format!(
                "{} digits for {} sites",
                digits.len(),
                dims.len()
            )));
        }
        for (i, (&b, &d)) in digits.iter().zip(&dims).enumerate() {
            if b >= d {
                return Err(Error::OutcomeOutOfRange { site: i + 1, outcome: b, dim: d });
            }
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); total];
        amps[offset_of(&dims, digits)] = Complex64::new(1.0, 0.0);
        Ok(PureState { dims, amps })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn num_sites(&self) -> usize {
        self.dims.len()
    }

    pub fn amp(&self, digits: &[usize]) -> Complex64 {
        self.amps[offset_of(&self.dims, digits)]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.amps.iter().all(|a| a.re == 0.0 && a.im == 0.0)
    }

    /// Returns `amps / norm`. Fails on the zero vector.
    pub fn normalize(&self) -> Result<PureState> {
        let norm = self.norm();
        if norm.is_nan() || norm <= 0.0 || norm.is_infinite() {
            return Err(Error::Degenerate("cannot normalize the zero vector".into()));
        }
        let amps = self.amps.iter().map(|a| a / norm).collect();
        Ok(PureState { dims: self.dims.clone(), amps })
    }

    fn check_site(&self, site: usize) -> Result<usize> {
        if site == 0 || site > self.dims.len() {
            return Err(Error::SiteOutOfRange { site, sites: self.dims.len() });
        }
        Ok(site - 1)
    }

    /// Splits the amplitude offset space around `site` as
    /// `(outer, d, inner)`: offset = (o * d + b) * inner + i.
    fn split_at(&self, idx: usize) -> (usize, usize, usize) {
        let outer = self.dims[..idx].iter().product();
        let inner = self.dims[idx + 1..].iter().product();
        (outer, self.dims[idx], inner)
    }

    pub fn flatten(&self, site: usize) -> Result<Flattening> {
        let idx = self.check_site(site)?;
        let (outer, d, inner) = self.split_at(idx);
        let cols = outer * inner;
        let mut entries = vec![Complex64::new(0.0, 0.0); d * cols];
        for o in 0..outer {
            for b in 0..d {
                for i in 0..inner {
                    entries[b * cols + o * inner + i] = self.amps[(o * d + b) * inner + i];
                }
            }
        }
        Ok(Flattening {
            rows: d,
            cols,
            site,
            source_dims: self.dims.clone(),
            entries,
        })
    }

    fn removed_dims(&self, idx: usize) -> Result<Vec<usize>> {
        if self.dims.len() < 2 {
            return Err(Error::Validation(
                "cannot remove the only site of a single-site state".into(),
            ));
        }
        let mut dims = self.dims.clone();
        dims.remove(idx);
        Ok(dims)
    }

    /// Fixes `site` to `outcome`, keeping the raw coefficients.
    pub fn collapse(&self, site: usize, outcome: usize) -> Result<Reduced> {
        let idx = self.check_site(site)?;
        let (outer, d, inner) = self.split_at(idx);
        if outcome >= d {
            return Err(Error::OutcomeOutOfRange { site, outcome, dim: d });
        }
        let dims = self.removed_dims(idx)?;
        let mut amps = Vec::with_capacity(outer * inner);
        for o in 0..outer {
            let start = (o * d + outcome) * inner;
            amps.extend_from_slice(&self.amps[start..start + inner]);
        }
        Ok(Reduced::new(PureState { dims, amps }))
    }

    /// Contracts `site` with `<direction|`, keeping the raw coefficients.
    ///
    /// Zero components of the direction are skipped and unit components copy
    /// their slice, so basis directions reproduce [`PureState::collapse`]
    /// bit for bit.
    pub fn project_site(&self, site: usize, direction: &[Complex64]) -> Result<Reduced> {
        let idx = self.check_site(site)?;
        let (outer, d, inner) = self.split_at(idx);
        if direction.len() != d {
            return Err(Error::Shape(format!(
                "direction has {} components, site {site} has dimension {d}",
                direction.len()
            )));
        }
        check_finite(direction)?;
        let norm: f64 = direction.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > UNITARY_TOLERANCE {
            return Err(Error::Validation(format!(
                "measurement direction must be a unit vector (norm {norm})"
            )));
        }
        let dims = self.removed_dims(idx)?;
        let one = Complex64::new(1.0, 0.0);
        let mut amps = Vec::with_capacity(outer * inner);
        for o in 0..outer {
            for i in 0..inner {
                let mut acc: Option<Complex64> = None;
                for (b, c) in direction.iter().enumerate() {
                    if c.re == 0.0 && c.im == 0.0 {
                        continue;
                    }
                    let x = self.amps[(o * d + b) * inner + i];
                    let term = if *c == one { x } else { c.conj() * x };
                    acc = Some(match acc {
                        Some(a) => a + term,
                        None => term,
                    });
                }
                amps.push(acc.unwrap_or_default());
            }
        }
        Ok(Reduced::new(PureState { dims, amps }))
    }

    /// Applies the `d_site x d_site` unitary `u` (given as rows) to one site.
    pub fn apply_local_unitary(&self, site: usize, u: &[Vec<Complex64>]) -> Result<PureState> {
        let idx = self.check_site(site)?;
        let (outer, d, inner) = self.split_at(idx);
        if u.len() != d || u.iter().any(|row| row.len() != d) {
            return Err(Error::Shape(format!(
                "operator on site {site} must be {d}x{d}"
            )));
        }
        for row in u {
            check_finite(row)?;
        }
        check_unitary(u)?;
        let mut amps = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        for o in 0..outer {
            for i in 0..inner {
                for (r, row) in u.iter().enumerate() {
                    amps[(o * d + r) * inner + i] = row
                        .iter()
                        .enumerate()
                        .map(|(b, &ub)| ub * self.amps[(o * d + b) * inner + i])
                        .sum();
                }
            }
        }
        Ok(PureState { dims: self.dims.clone(), amps })
    }

    pub fn tensor_product(&self, other: &PureState) -> PureState {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        let amps = self
            .amps
            .iter()
            .flat_map(|a| other.amps.iter().map(move |b| a * b))
            .collect();
        PureState { dims, amps }
    }

    /// Reorders sites so that new site `k` is old site `order[k - 1]`
    /// (both 1-based).
    pub fn permute_sites(&self, order: &[usize]) -> Result<PureState> {
        let n = self.dims.len();
        let mut seen = vec![false; n];
        if order.len() != n {
            return Err(Error::Validation(format!(
                "permutation of length {} for {n} sites",
                order.len()
            )));
        }
        for &s in order {
            if s == 0 || s > n || seen[s - 1] {
                return Err(Error::Validation(format!("{order:?} is not a permutation")));
            }
            seen[s - 1] = true;
        }
        let dims: Vec<usize> = order.iter().map(|&s| self.dims[s - 1]).collect();
        let mut amps = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        let mut digits = vec![0usize; n];
        let mut old = vec![0usize; n];
        for (new_offset, slot) in amps.iter_mut().enumerate() {
            digits_of(&dims, new_offset, &mut digits);
            for (k, &s) in order.iter().enumerate() {
                old[s - 1] = digits[k];
            }
            *slot = self.amps[offset_of(&self.dims, &old)];
        }
        Ok(PureState { dims, amps })
    }

    /// Largest per-amplitude deviation `|self - lambda * other|` after fitting
    /// the best global complex scalar `lambda`.
    pub fn deviation_up_to_scalar(&self, other: &PureState) -> Result<f64> {
        if self.dims != other.dims {
            return Err(Error::Dimension(format!(
                "dims {:?} and {:?} differ",
                self.dims, other.dims
            )));
        }
        let denom = other.norm_sqr();
        if denom == 0.0 {
            return Ok(self.amps.iter().map(|a| a.norm()).fold(0.0, f64::max));
        }
        let overlap: Complex64 = other
            .amps
            .iter()
            .zip(&self.amps)
            .map(|(o, s)| o.conj() * s)
            .sum();
        let lambda = overlap / denom;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(s, o)| (s - lambda * o).norm())
            .fold(0.0, f64::max))
    }
}

fn check_unitary(u: &[Vec<Complex64>]) -> Result<()> {
    let d = u.len();
    for r in 0..d {
        for c in 0..d {
            let dot: Complex64 = (0..d).map(|k| u[r][k] * u[c][k].conj()).sum();
            let expected = if r == c { 1.0 } else { 0.0 };
            if (dot - expected).norm() > UNITARY_TOLERANCE {
                return Err(Error::Validation(format!(
                    "operator is not unitary: (u u^dagger)[{r}][{c}] = {dot}"
                )));
            }
        }
    }
    Ok(())
}

pub(crate) fn offset_of(dims: &[usize], digits: &[usize]) -> usize {
    digits
        .iter()
        .zip(dims)
        .fold(0, |acc, (&b, &d)| acc * d + b)
}

pub(crate) fn digits_of(dims: &[usize], mut offset: usize, out: &mut [usize]) {
    for (slot, &d) in out.iter_mut().zip(dims).rev() {
        *slot = offset % d;
        offset /= d;
    }
}

impl Flattening {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn site(&self) -> usize {
        self.site
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.cols + col]
    }

    pub fn column(&self, col: usize) -> Vec<Complex64> {
        (0..self.rows).map(|r| self.get(r, col)).collect()
    }

    /// Reassembles the source state.
    pub fn unflatten(&self) -> PureState {
        let idx = self.site - 1;
        let d = self.rows;
        let outer: usize = self.source_dims[..idx].iter().product();
        let inner: usize = self.source_dims[idx + 1..].iter().product();
        let mut amps = vec![Complex64::new(0.0, 0.0); self.entries.len()];
        for o in 0..outer {
            for b in 0..d {
                for i in 0..inner {
                    amps[(o * d + b) * inner + i] = self.entries[b * self.cols + o * inner + i];
                }
            }
        }
        PureState { dims: self.source_dims.clone(), amps }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn ghz() -> PureState {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let mut amps = vec![c(0.0); 8];
        amps[0] = c(h);
        amps[7] = c(h);
        PureState::new(vec![2, 2, 2], amps).unwrap()
    }

    fn w3() -> PureState {
        let t = 1.0 / 3f64.sqrt();
        let mut amps = vec![c(0.0); 8];
        amps[1] = c(t);
        amps[2] = c(t);
        amps[4] = c(t);
        PureState::new(vec![2, 2, 2], amps).unwrap()
    }

    #[test]
    fn make_state_checks_length_and_finiteness() {
        let s = PureState::new(vec![2, 2], vec![c(1.0), c(0.0), c(0.0), c(0.0)]).unwrap();
        assert_eq!(s, PureState::basis(vec![2, 2], &[0, 0]).unwrap());
        assert!(matches!(
            PureState::new(vec![2], vec![c(1.0), c(0.0), c(0.0)]),
            Err(Error::Dimension(_))
        ));
        assert!(matches!(
            PureState::new(vec![2], vec![c(f64::NAN), c(0.0)]),
            Err(Error::Validation(_))
        ));
        assert!(matches!(
            PureState::new(vec![1, 2], vec![c(1.0), c(0.0)]),
            Err(Error::Dimension(_))
        ));
        assert!(PureState::new(vec![], vec![c(1.0)]).is_err());
    }

    #[test]
    fn index_convention_site_one_most_significant() {
        let s = PureState::basis(vec![2, 3, 2], &[1, 2, 0]).unwrap();
        // 1*6 + 2*2 + 0
        assert_eq!(s.amps()[10], c(1.0));
        assert_eq!(s.amp(&[1, 2, 0]), c(1.0));
    }

    #[test]
    fn normalize_scales_and_rejects_zero() {
        let s = PureState::new(vec![2, 2], vec![c(2.0), c(0.0), c(0.0), c(0.0)]).unwrap();
        assert_eq!(s.normalize().unwrap().amps()[0], c(1.0));

        let mut amps = vec![c(0.0); 8];
        amps[0] = c(1.0);
        amps[7] = c(1.0);
        let n = PureState::new(vec![2, 2, 2], amps).unwrap().normalize().unwrap();
        assert!((n.amps()[0].re - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((n.norm_sqr() - 1.0).abs() < 1e-12);

        let z = PureState::new(vec![2, 2], vec![c(0.0); 4]).unwrap();
        assert!(matches!(z.normalize(), Err(Error::Degenerate(_))));
    }

    #[test]
    fn flatten_last_site_matches_column_layout() {
        let f = ghz().flatten(3).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert_eq!((f.rows(), f.cols()), (2, 4));
        let expected = [h, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, h];
        for (e, x) in f.entries().iter().zip(expected) {
            assert_eq!(*e, c(x));
        }
    }

    #[test]
    fn flatten_bipartite_product() {
        let (a, b, cc, d) = (c(0.6), c(0.8), c(0.28), c(0.96));
        let x = PureState::new(vec![2], vec![a, b]).unwrap();
        let y = PureState::new(vec![2], vec![cc, d]).unwrap();
        let f = x.tensor_product(&y).flatten(2).unwrap();
        assert_eq!(f.entries(), &[a * cc, b * cc, a * d, b * d]);
    }

    #[test]
    fn flatten_middle_site_keeps_relative_order() {
        let s = PureState::basis(vec![2, 3, 2], &[1, 2, 0]).unwrap();
        let f = s.flatten(2).unwrap();
        assert_eq!((f.rows(), f.cols()), (3, 4));
        // remaining (site1, site3) = (1, 0) -> column 2
        assert_eq!(f.get(2, 2), c(1.0));
        assert_eq!(f.unflatten(), s);
        assert!(matches!(s.flatten(4), Err(Error::SiteOutOfRange { .. })));
        assert!(matches!(s.flatten(0), Err(Error::SiteOutOfRange { .. })));
    }

    #[test]
    fn collapse_ghz_and_w() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let r = ghz().collapse(1, 0).unwrap();
        assert_eq!(r.state.dims(), &[2, 2]);
        assert_eq!(r.state.amps(), &[c(h), c(0.0), c(0.0), c(0.0)]);
        assert!((r.probability - 0.5).abs() < 1e-15);

        let t = 1.0 / 3f64.sqrt();
        let one = w3().collapse(3, 1).unwrap();
        assert_eq!(one.state.amps(), &[c(t), c(0.0), c(0.0), c(0.0)]);
        let zero = w3().collapse(3, 0).unwrap();
        assert_eq!(zero.state.amps(), &[c(0.0), c(t), c(t), c(0.0)]);

        assert!(matches!(ghz().collapse(1, 2), Err(Error::OutcomeOutOfRange { .. })));
        let single = PureState::basis(vec![2], &[0]).unwrap();
        assert!(single.collapse(1, 0).is_err());
    }

    #[test]
    fn unrealizable_branch_is_zero_not_error() {
        let r = PureState::basis(vec![2, 2], &[0, 0]).unwrap().collapse(2, 1).unwrap();
        assert!(r.is_unrealizable());
        assert!(r.state.is_zero());
    }

    #[test]
    fn project_ghz_on_x_plus() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let r = ghz().project_site(1, &[c(h), c(h)]).unwrap();
        let half = h * h;
        for (a, e) in r.state.amps().iter().zip([half, 0.0, 0.0, half]) {
            assert!((a.re - e).abs() < 1e-15 && a.im == 0.0);
        }
        assert!(ghz().project_site(1, &[c(1.0), c(1.0)]).is_err());
        assert!(ghz().project_site(1, &[c(1.0)]).is_err());
    }

    #[test]
    fn project_on_basis_equals_collapse() {
        let s = ghz().apply_local_unitary(2, &hadamard()).unwrap();
        for site in 1..=3 {
            assert_eq!(
                s.project_site(site, &[c(1.0), c(0.0)]).unwrap(),
                s.collapse(site, 0).unwrap()
            );
            assert_eq!(
                s.project_site(site, &[c(0.0), c(1.0)]).unwrap(),
                s.collapse(site, 1).unwrap()
            );
        }
    }

    fn hadamard() -> Vec<Vec<Complex64>> {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        vec![vec![c(h), c(h)], vec![c(h), c(-h)]]
    }

    #[test]
    fn local_unitaries() {
        let s = ghz();
        let id = vec![vec![c(1.0), c(0.0)], vec![c(0.0), c(1.0)]];
        assert_eq!(s.apply_local_unitary(2, &id).unwrap(), s);

        let x = vec![vec![c(0.0), c(1.0)], vec![c(1.0), c(0.0)]];
        let zero = PureState::basis(vec![2, 2, 2], &[0, 0, 0]).unwrap();
        assert_eq!(
            zero.apply_local_unitary(3, &x).unwrap(),
            PureState::basis(vec![2, 2, 2], &[0, 0, 1]).unwrap()
        );

        let not_unitary = vec![vec![c(1.0), c(1.0)], vec![c(0.0), c(1.0)]];
        assert!(matches!(
            s.apply_local_unitary(1, &not_unitary),
            Err(Error::Validation(_))
        ));
        assert!(matches!(s.apply_local_unitary(1, &[vec![c(1.0)]]), Err(Error::Shape(_))));
    }

    #[test]
    fn tensor_products() {
        let zero = PureState::basis(vec![2], &[0]).unwrap();
        let one = PureState::basis(vec![2], &[1]).unwrap();
        assert_eq!(zero.tensor_product(&one), PureState::basis(vec![2, 2], &[0, 1]).unwrap());

        let (alpha, beta) = (c(0.6), Complex64::new(0.0, 0.8));
        let q = PureState::new(vec![2], vec![alpha, beta]).unwrap();
        let prod = q.tensor_product(&zero);
        assert_eq!(prod.amps(), &[alpha, c(0.0), beta, c(0.0)]);
    }

    #[test]
    fn permute_moves_site_to_end() {
        let s = PureState::basis(vec![2, 3, 2], &[1, 2, 0]).unwrap();
        let p = s.permute_sites(&[1, 3, 2]).unwrap();
        assert_eq!(p.dims(), &[2, 2, 3]);
        assert_eq!(p, PureState::basis(vec![2, 2, 3], &[1, 0, 2]).unwrap());
        assert!(s.permute_sites(&[1, 1, 2]).is_err());
    }

    #[test]
    fn deviation_ignores_global_phase() {
        let s = ghz();
        let phase = Complex64::from_polar(0.3, 1.1);
        let scaled =
            PureState::new(s.dims().to_vec(), s.amps().iter().map(|a| a * phase).collect())
                .unwrap();
        assert!(s.deviation_up_to_scalar(&scaled).unwrap() < 1e-15);
        assert!(s.deviation_up_to_scalar(&w3()).unwrap() > 0.1);
    }
}
