//! Characters of the full shift and Fourier coefficients of shift-invariant
//! measures.
//!
//! A character of `G^Z` is a finite configuration `chi` over `G^ ~ G`, acting by
//! `x -> prod_z chi_z(x_z)`. Under an abelian CA it evolves through the dual:
//! `chi . F^t` is the configuration `F^^t(chi)`.

use num_complex::Complex64;
use rustfft::{FftDirection, FftPlanner};

use crate::ca::{AbelianCA, FiniteConfiguration};
use crate::error::{Error, Result};
use crate::group::{char_eval_unchecked, subgroups, GroupElement, GroupSpec, PhaseValue};
use crate::modular::Subgroup;

/// A character of the full shift, stored as a configuration over `G^ ~ G`.
pub type CharacterConfig = FiniteConfiguration;

/// Largest `|G|^|S|` handled by [`cylinder_distribution`].
pub const CYLINDER_CAP: u64 = 1 << 20;
/// Largest `|G|` for which elementary coefficients are tabulated up front.
const TABLE_CAP: u64 = 4096;

const WEIGHT_TOL: f64 = 1e-12;
const DIST_TOL: f64 = 1e-9;
/// Coefficients below this modulus count as zero.
pub const ZERO_COEFF: f64 = 1e-12;

/// Trivial character (all cells neutral).
pub fn trivial_character(spec: &GroupSpec) -> CharacterConfig {
    FiniteConfiguration::zero(spec)
}

/// Character `chi_a` placed at one position.
pub fn elementary_character(spec: &GroupSpec, position: i64, a: GroupElement) -> Result<CharacterConfig> {
    FiniteConfiguration::single(spec, position, a)
}

/// Exact phase of `chi(x) = prod_z chi_z(x_z)`.
pub fn pairing(chi: &CharacterConfig, x: &FiniteConfiguration) -> Result<PhaseValue> {
    if chi.spec() != x.spec() {
        return Err(Error::SpecMismatch {
            expected: chi.spec().to_string(),
            found: x.spec().to_string(),
        });
    }
    let spec = chi.spec();
    let mut acc = PhaseValue::ZERO;
    let (Some((a, b)), Some((c, d))) = (chi.support_range(), x.support_range()) else {
        return Ok(acc);
    };
    for z in a.max(c)..=b.min(d) {
        let p = char_eval_unchecked(spec, chi.get(z).residues(), x.get(z).residues());
        acc = acc.add(p);
    }
    Ok(acc)
}

/// `chi . F^t`, by `t` applications of the dual automaton.
pub fn char_compose(f: &AbelianCA, chi: &CharacterConfig, t: u64) -> Result<CharacterConfig> {
    f.dual().iterate(chi, t)
}

#[derive(Clone, Debug, PartialEq)]
pub enum MeasureKind {
    /// Independent cells; weight per element in lexicographic element order.
    Bernoulli { weights: Vec<f64> },
    /// Two-step Markov chain with row-stochastic transition matrix.
    Markov {
        transition: Vec<Vec<f64>>,
        stationary: Vec<f64>,
    },
}

/// Shift-invariant Bernoulli or Markov measure on `G^Z`.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasureSpec {
    spec: GroupSpec,
    kind: MeasureKind,
    /// Elementary Fourier coefficients `mu[chi_a]`, by element index.
    table: Option<Vec<Complex64>>,
}

impl MeasureSpec {
    pub fn bernoulli(spec: &GroupSpec, weights: Vec<f64>) -> Result<Self> {
        check_distribution(spec, &weights, "Bernoulli weights")?;
        Ok(Self::with_table(spec, MeasureKind::Bernoulli { weights }))
    }

    /// Uniform measure `lambda`.
    pub fn uniform(spec: &GroupSpec) -> Result<Self> {
        let n = spec.size_checked(crate::group::ENUMERATION_CAP, "uniform measure")?;
        Self::bernoulli(spec, vec![1.0 / n as f64; n as usize])
    }

    /// Weight `p0` on the neutral element, the rest spread evenly.
    pub fn zero_biased(spec: &GroupSpec, p0: f64) -> Result<Self> {
        let n = spec.size_checked(crate::group::ENUMERATION_CAP, "Bernoulli measure")? as usize;
        if !(0.0..=1.0).contains(&p0) {
            return Err(Error::InvalidMeasure(format!("p0 = {p0} outside [0, 1]")));
        }
        let mut w = vec![(1.0 - p0) / (n - 1) as f64; n];
        w[0] = p0;
        Self::bernoulli(spec, w)
    }

    pub fn markov(spec: &GroupSpec, transition: Vec<Vec<f64>>, stationary: Vec<f64>) -> Result<Self> {
        let n = check_distribution(spec, &stationary, "stationary vector")?;
        if transition.len() != n || transition.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidMeasure(format!(
                "transition matrix must be {n}x{n}"
            )));
        }
        for (i, row) in transition.iter().enumerate() {
            check_weights(row, &format!("transition row {i}"))?;
        }
        for j in 0..n {
            let v: f64 = (0..n).map(|i| stationary[i] * transition[i][j]).sum();
            if (v - stationary[j]).abs() > WEIGHT_TOL {
                return Err(Error::InvalidMeasure(format!(
                    "stationary vector is not invariant at state {j}: {v} vs {}",
                    stationary[j]
                )));
            }
        }
        Ok(Self::with_table(
            spec,
            MeasureKind::Markov {
                transition,
                stationary,
            },
        ))
    }

    /// Markov measure whose stationary vector is solved for, when unique.
    pub fn markov_stationary(spec: &GroupSpec, transition: Vec<Vec<f64>>) -> Result<Self> {
        let pi = stationary_vector(&transition)?;
        Self::markov(spec, transition, pi)
    }

    fn with_table(spec: &GroupSpec, kind: MeasureKind) -> Self {
        let mut m = Self {
            spec: spec.clone(),
            kind,
            table: None,
        };
        if spec.size().is_some_and(|n| n <= TABLE_CAP) {
            let n = spec.size().unwrap();
            m.table = Some(
                (0..n)
                    .map(|i| m.compute_elementary(spec.element_at(i).residues()))
                    .collect(),
            );
        }
        m
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn kind(&self) -> &MeasureKind {
        &self.kind
    }

    pub fn is_bernoulli(&self) -> bool {
        matches!(self.kind, MeasureKind::Bernoulli { .. })
    }

    /// One-cell marginal.
    pub fn marginal(&self) -> &[f64] {
        match &self.kind {
            MeasureKind::Bernoulli { weights } => weights,
            MeasureKind::Markov { stationary, .. } => stationary,
        }
    }

    fn compute_elementary(&self, a: &[u64]) -> Complex64 {
        self.marginal()
            .iter()
            .enumerate()
            .filter(|(_, &w)| w != 0.0)
            .map(|(i, &w)| {
                let b = self.spec.element_at(i as u64);
                w * char_eval_unchecked(&self.spec, a, b.residues()).to_complex()
            })
            .sum()
    }

    /// `mu[chi_a]` for a single-cell character.
    pub fn elementary_coefficient(&self, a: &GroupElement) -> Result<Complex64> {
        self.spec.check(a)?;
        Ok(self.elementary_raw(a.residues()))
    }

    fn elementary_raw(&self, a: &[u64]) -> Complex64 {
        if a.iter().all(|&x| x == 0) {
            return Complex64::new(1.0, 0.0);
        }
        match &self.table {
            Some(t) => t[index_of_raw(&self.spec, a) as usize],
            None => self.compute_elementary(a),
        }
    }

    /// Coefficient of a character given as flat residues, `k` per cell.
    fn coefficient_of_cells(&self, cells: &[u64]) -> Complex64 {
        let k = self.spec.rank();
        let nonzero = |c: &[u64]| c.iter().any(|&x| x != 0);
        let mut chunks: Vec<&[u64]> = cells.chunks(k).collect();
        while chunks.last().is_some_and(|c| !nonzero(c)) {
            chunks.pop();
        }
        let lead = chunks.iter().take_while(|c| !nonzero(c)).count();
        let chunks = &chunks[lead..];
        if chunks.is_empty() {
            return Complex64::new(1.0, 0.0);
        }
        match &self.kind {
            MeasureKind::Bernoulli { .. } => chunks
                .iter()
                .filter(|c| nonzero(c))
                .map(|c| self.elementary_raw(c))
                .product(),
            MeasureKind::Markov {
                transition,
                stationary,
            } => {
                let n = stationary.len();
                let mut v: Vec<Complex64> = Vec::with_capacity(n);
                let diag = |c: &[u64]| -> Vec<Complex64> {
                    (0..n as u64)
                        .map(|g| {
                            let b = self.spec.element_at(g);
                            char_eval_unchecked(&self.spec, c, b.residues()).to_complex()
                        })
                        .collect()
                };
                let first = diag(chunks[0]);
                v.extend(stationary.iter().zip(&first).map(|(&p, &d)| p * d));
                for c in &chunks[1..] {
                    let mut next = vec![Complex64::new(0.0, 0.0); n];
                    for (i, &vi) in v.iter().enumerate() {
                        if vi == Complex64::new(0.0, 0.0) {
                            continue;
                        }
                        for (j, nj) in next.iter_mut().enumerate() {
                            *nj += vi * transition[i][j];
                        }
                    }
                    if nonzero(c) {
                        for (nj, d) in next.iter_mut().zip(diag(c)) {
                            *nj *= d;
                        }
                    }
                    v = next;
                }
                v.into_iter().sum()
            }
        }
    }
}

fn check_weights(w: &[f64], what: &str) -> Result<()> {
    if w.iter().any(|&x| !(x >= 0.0) || !x.is_finite()) {
        return Err(Error::InvalidMeasure(format!("{what} must be nonnegative")));
    }
    let s: f64 = w.iter().sum();
    if (s - 1.0).abs() > WEIGHT_TOL {
        return Err(Error::InvalidMeasure(format!("{what} sum to {s}, not 1")));
    }
    Ok(())
}

fn check_distribution(spec: &GroupSpec, w: &[f64], what: &str) -> Result<usize> {
    let n = spec.size_checked(crate::group::ENUMERATION_CAP, what)? as usize;
    if w.len() != n {
        return Err(Error::InvalidMeasure(format!(
            "{what}: expected {n} entries for ({spec}), got {}",
            w.len()
        )));
    }
    check_weights(w, what)?;
    Ok(n)
}

/// Solves `pi P = pi`, `sum pi = 1` by Gaussian elimination.
pub fn stationary_vector(transition: &[Vec<f64>]) -> Result<Vec<f64>> {
    let n = transition.len();
    if n == 0 || transition.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidMeasure("transition matrix must be square".into()));
    }
    // Rows: (P^T - I) pi = 0, last row replaced by sum = 1.
    let mut a: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let mut row: Vec<f64> = (0..n).map(|j| transition[j][i]).collect();
            row[i] -= 1.0;
            row.push(0.0);
            row
        })
        .collect();
    a[n - 1] = vec![1.0; n + 1];
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))
            .unwrap();
        if a[piv][col].abs() < 1e-14 {
            return Err(Error::InvalidMeasure(
                "stationary vector is not unique".into(),
            ));
        }
        a.swap(col, piv);
        for r in 0..n {
            if r != col {
                let f = a[r][col] / a[col][col];
                if f != 0.0 {
                    for c in col..=n {
                        a[r][c] -= f * a[col][c];
                    }
                }
            }
        }
    }
    Ok((0..n).map(|i| a[i][n] / a[i][i]).collect())
}

fn index_of_raw(spec: &GroupSpec, a: &[u64]) -> u64 {
    a.iter()
        .zip(spec.orders())
        .fold(0u64, |acc, (&x, &m)| acc * m + x)
}

/// `mu[chi]`.
pub fn fourier_coefficient(mu: &MeasureSpec, chi: &CharacterConfig) -> Result<Complex64> {
    if chi.spec() != mu.spec() {
        return Err(Error::SpecMismatch {
            expected: mu.spec().to_string(),
            found: chi.spec().to_string(),
        });
    }
    let flat: Vec<u64> = chi
        .cells()
        .iter()
        .flat_map(|c| c.residues().iter().copied())
        .collect();
    Ok(mu.coefficient_of_cells(&flat))
}

/// `F^t mu [chi] = mu[chi . F^t]`.
pub fn evolved_fourier(
    f: &AbelianCA,
    mu: &MeasureSpec,
    chi: &CharacterConfig,
    t: u64,
) -> Result<Complex64> {
    fourier_coefficient(mu, &char_compose(f, chi, t)?)
}

/// Probabilities of all words on a window, indexed lexicographically
/// (first cell most significant).
#[derive(Clone, Debug, PartialEq)]
pub struct CylinderTable {
    spec: GroupSpec,
    start: i64,
    len: usize,
    probabilities: Vec<f64>,
    max_imag_residue: f64,
}

impl CylinderTable {
    pub fn start(&self) -> i64 {
        self.start
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    /// Largest imaginary part seen before taking real parts.
    pub fn max_imag_residue(&self) -> f64 {
        self.max_imag_residue
    }

    pub fn word(&self, index: usize) -> Vec<GroupElement> {
        let n = self.spec.size().unwrap();
        let mut rest = index as u64;
        let mut cells = vec![self.spec.zero(); self.len];
        for cell in cells.iter_mut().rev() {
            *cell = self.spec.element_at(rest % n);
            rest /= n;
        }
        cells
    }

    pub fn index_of(&self, word: &[GroupElement]) -> Result<usize> {
        if word.len() != self.len {
            return Err(Error::InvalidElement(format!(
                "word of length {} for a window of length {}",
                word.len(),
                self.len
            )));
        }
        let n = self.spec.size().unwrap();
        let mut idx = 0u64;
        for c in word {
            self.spec.check(c)?;
            idx = idx * n + self.spec.index_of(c);
        }
        Ok(idx as usize)
    }

    pub fn probability(&self, word: &[GroupElement]) -> Result<f64> {
        Ok(self.probabilities[self.index_of(word)?])
    }

    /// `max_u |P(u) - |G|^{-|S|}|`.
    pub fn max_deviation_from_uniform(&self) -> f64 {
        let u = 1.0 / self.probabilities.len() as f64;
        self.probabilities
            .iter()
            .map(|p| (p - u).abs())
            .fold(0.0, f64::max)
    }
}

/// Exact `F^t mu([u]_S)` for every word `u` on `S = [a, b]`, by Fourier inversion.
pub fn cylinder_distribution(
    f: &AbelianCA,
    mu: &MeasureSpec,
    window: (i64, i64),
    t: u64,
) -> Result<CylinderTable> {
    let spec = f.spec();
    if mu.spec() != spec {
        return Err(Error::SpecMismatch {
            expected: spec.to_string(),
            found: mu.spec().to_string(),
        });
    }
    let (a, b) = window;
    if b < a {
        return Err(Error::OutOfRange(format!("empty window {a}:{b}")));
    }
    let len = (b - a + 1) as usize;
    let g = spec.size();
    let total = g.and_then(|g| g.checked_pow(len as u32));
    let total = match total {
        Some(n) if n <= CYLINDER_CAP => n as usize,
        _ => {
            return Err(Error::CapacityExceeded(format!(
                "|G|^{len} exceeds {CYLINDER_CAP} for window {a}:{b}"
            )))
        }
    };
    let k = spec.rank();
    let orders = spec.orders();

    // Images of the basis characters e_j at cell 0.
    let dual = f.dual();
    let basis: Vec<FiniteConfiguration> = (0..k)
        .map(|j| {
            let mut e = vec![0u64; k];
            e[j] = 1;
            let chi = FiniteConfiguration::single(spec, 0, GroupElement(e)).unwrap();
            dual.iterate(&chi, t).unwrap()
        })
        .collect();
    let mut lo = a;
    let mut hi = b;
    for e in &basis {
        if let Some((s, d)) = e.support_range() {
            lo = lo.min(s + a);
            hi = hi.max(d + b);
        }
    }
    let width = (hi - lo + 1) as usize;
    // Dense image of basis (cell, j), as offsets into the accumulator.
    let coords: Vec<(usize, u64)> = (0..len)
        .flat_map(|s| (0..k).map(move |j| (s, orders[j])))
        .collect();
    let images: Vec<Vec<(usize, u64)>> = coords
        .iter()
        .enumerate()
        .map(|(ci, &(s, _))| {
            let e = &basis[ci % k];
            let z0 = a + s as i64;
            let mut out = Vec::new();
            if let Some((start, _)) = e.support_range() {
                for (jj, cell) in e.cells().iter().enumerate() {
                    let pos = (start + jj as i64 + z0 - lo) as usize;
                    for (l, &r) in cell.residues().iter().enumerate() {
                        if r != 0 {
                            out.push((pos * k + l, r));
                        }
                    }
                }
            }
            out
        })
        .collect();

    let mut acc = vec![0u64; width * k];
    let mut coeffs: Vec<Complex64> = Vec::with_capacity(total);
    enumerate_characters(0, &coords, &images, orders, k, &mut acc, &mut |cells| {
        coeffs.push(mu.coefficient_of_cells(cells));
    });
    debug_assert_eq!(coeffs.len(), total);

    // Separable inverse transform: forward DFT along each coordinate axis.
    let mut planner = FftPlanner::<f64>::new();
    let mut stride = total;
    for &(_, m) in &coords {
        let m = m as usize;
        stride /= m;
        let fft = planner.plan_fft(m, FftDirection::Forward);
        let mut line = vec![Complex64::new(0.0, 0.0); m];
        for block in (0..total).step_by(stride * m) {
            for off in 0..stride {
                for (r, slot) in line.iter_mut().enumerate() {
                    *slot = coeffs[block + off + r * stride];
                }
                fft.process(&mut line);
                for (r, v) in line.iter().enumerate() {
                    coeffs[block + off + r * stride] = *v;
                }
            }
        }
    }
    let scale = 1.0 / total as f64;
    let mut max_imag: f64 = 0.0;
    let mut probabilities = Vec::with_capacity(total);
    for c in &coeffs {
        let c = c * scale;
        max_imag = max_imag.max(c.im.abs());
        if c.re < -DIST_TOL || c.re > 1.0 + DIST_TOL {
            return Err(Error::VerificationFailed(format!(
                "cylinder probability {} outside [0, 1]",
                c.re
            )));
        }
        probabilities.push(c.re.clamp(0.0, 1.0));
    }
    let sum: f64 = probabilities.iter().sum();
    if (sum - 1.0).abs() > DIST_TOL || max_imag > DIST_TOL {
        return Err(Error::VerificationFailed(format!(
            "cylinder table sums to {sum}, imaginary residue {max_imag}"
        )));
    }
    Ok(CylinderTable {
        spec: spec.clone(),
        start: a,
        len,
        probabilities,
        max_imag_residue: max_imag,
    })
}

/// Visits every character supported on the window in lexicographic order,
/// maintaining its evolved image incrementally.
fn enumerate_characters(
    coord: usize,
    coords: &[(usize, u64)],
    images: &[Vec<(usize, u64)>],
    orders: &[u64],
    k: usize,
    acc: &mut [u64],
    visit: &mut dyn FnMut(&[u64]),
) {
    if coord == coords.len() {
        visit(acc);
        return;
    }
    let m = coords[coord].1;
    for v in 0..m {
        if v > 0 {
            add_image(acc, &images[coord], orders, k);
        }
        enumerate_characters(coord + 1, coords, images, orders, k, acc, visit);
    }
    // m * image = 0, so one more addition restores the accumulator.
    add_image(acc, &images[coord], orders, k);
}

fn add_image(acc: &mut [u64], image: &[(usize, u64)], orders: &[u64], k: usize) {
    for &(pos, r) in image {
        let m = orders[pos % k];
        acc[pos] = (acc[pos] + r) % m;
    }
}

/// `sum_{k <= K} 2^{-k} max_u |F^t mu([u]_{-k..k}) - lambda([u])|`.
pub fn distance_to_uniform(f: &AbelianCA, mu: &MeasureSpec, t: u64, truncation: usize) -> Result<f64> {
    let mut total = 0.0;
    for k in 0..=truncation as i64 {
        let table = cylinder_distribution(f, mu, (-k, k), t)?;
        total += table.max_deviation_from_uniform() / (1u64 << k) as f64;
    }
    Ok(total)
}

/// `max |mu[chi_a]|` over nontrivial elementary characters.
pub fn harmonic_mixing_bound(mu: &MeasureSpec) -> Result<f64> {
    if !mu.is_bernoulli() {
        return Err(Error::Unsupported(
            "harmonic mixing bound is only available for Bernoulli measures".into(),
        ));
    }
    let n = mu.spec.size_checked(crate::group::ENUMERATION_CAP, "harmonic bound")?;
    Ok((1..n)
        .map(|i| mu.elementary_raw(mu.spec.element_at(i).residues()).norm())
        .fold(0.0, f64::max))
}

/// Smallest nontrivial elementary coefficient modulus.
pub fn min_elementary_modulus(mu: &MeasureSpec) -> Result<f64> {
    let n = mu.spec.size_checked(crate::group::ENUMERATION_CAP, "elementary coefficients")?;
    Ok((1..n)
        .map(|i| mu.elementary_raw(mu.spec.element_at(i).residues()).norm())
        .fold(f64::INFINITY, f64::min))
}

/// Every elementary Fourier coefficient is nonzero.
pub fn is_strongly_nonuniform(mu: &MeasureSpec) -> Result<bool> {
    if !mu.is_bernoulli() {
        return Err(Error::Unsupported(
            "strong nonuniformity is only decided for Bernoulli measures".into(),
        ));
    }
    Ok(min_elementary_modulus(mu)? > ZERO_COEFF)
}

/// The support of the weights meets at least two cosets of every proper subgroup.
pub fn is_nondegenerate(mu: &MeasureSpec) -> Result<bool> {
    if !mu.is_bernoulli() {
        return Err(Error::Unsupported(
            "nondegeneracy is only decided for Bernoulli measures".into(),
        ));
    }
    let spec = &mu.spec;
    let subs = subgroups(spec)?;
    let full = spec.size().unwrap() as usize;
    let support: Vec<GroupElement> = mu
        .marginal()
        .iter()
        .enumerate()
        .filter(|(_, &w)| w > 0.0)
        .map(|(i, _)| spec.element_at(i as u64))
        .collect();
    for h in subs.iter().filter(|h| h.len() < full) {
        let members: std::collections::HashSet<&GroupElement> = h.iter().collect();
        let base = &support[0];
        let one_coset = support.iter().all(|s| {
            let d = spec.add_unchecked(s, &spec.neg(base));
            members.contains(&d)
        });
        if one_coset {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Subgroup generated by the differences of the support; the measure is
/// nondegenerate exactly when this is the whole group.
pub fn support_difference_subgroup(mu: &MeasureSpec) -> Subgroup {
    let spec = &mu.spec;
    let support: Vec<GroupElement> = mu
        .marginal()
        .iter()
        .enumerate()
        .filter(|(_, &w)| w > 0.0)
        .map(|(i, _)| spec.element_at(i as u64))
        .collect();
    let gens: Vec<Vec<u64>> = support
        .iter()
        .map(|s| spec.add_unchecked(s, &spec.neg(&support[0])).residues().to_vec())
        .collect();
    Subgroup::generated_by(spec.orders().to_vec(), &gens)
}

/// One row of a [`SpectralTrace`].
#[derive(Clone, Debug, PartialEq)]
pub struct TraceRecord {
    pub t: u64,
    pub rank: usize,
    pub support: Option<(i64, i64)>,
    pub coefficient: Option<Complex64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectralTrace {
    pub records: Vec<TraceRecord>,
}

impl SpectralTrace {
    pub fn ranks(&self) -> Vec<usize> {
        self.records.iter().map(|r| r.rank).collect()
    }

    pub fn coefficients(&self) -> Vec<Complex64> {
        self.records.iter().filter_map(|r| r.coefficient).collect()
    }
}

/// `rank(chi . F^t)` for `t = 0..=T`.
pub fn rank_trace(f: &AbelianCA, chi: &CharacterConfig, horizon: u64) -> Result<SpectralTrace> {
    spectral_trace(f, None, chi, horizon)
}

/// Rank trace, with the evolved coefficient when a measure is given.
pub fn spectral_trace(
    f: &AbelianCA,
    mu: Option<&MeasureSpec>,
    chi: &CharacterConfig,
    horizon: u64,
) -> Result<SpectralTrace> {
    if chi.spec() != f.spec() {
        return Err(Error::SpecMismatch {
            expected: f.spec().to_string(),
            found: chi.spec().to_string(),
        });
    }
    let dual = f.dual();
    let mut cur = chi.clone();
    let mut records = Vec::with_capacity(horizon as usize + 1);
    for t in 0..=horizon {
        if t > 0 {
            cur = dual.apply(&cur)?;
        }
        let coefficient = mu.map(|m| fourier_coefficient(m, &cur)).transpose()?;
        records.push(TraceRecord {
            t,
            rank: cur.rank(),
            support: cur.support_range(),
            coefficient,
        });
    }
    Ok(SpectralTrace { records })
}

/// Minimum of `values[t]` over each dyadic window `[2^k, 2^{k+1})` lying
/// inside the data.
pub fn dyadic_window_minima(values: &[usize]) -> Vec<(u32, usize)> {
    let mut out = Vec::new();
    let mut k = 0u32;
    while (1usize << (k + 1)) <= values.len() {
        let lo = 1usize << k;
        let hi = 1usize << (k + 1);
        out.push((k, values[lo..hi].iter().copied().min().unwrap()));
        k += 1;
    }
    out
}

/// Running averages and small-coefficient densities of a coefficient sequence.
#[derive(Clone, Debug, PartialEq)]
pub struct CesaroStats {
    /// `(1/(n+1)) sum_{t<=n} c_t`.
    pub running_mean: Vec<Complex64>,
    /// `(1/(n+1)) sum_{t<=n} |c_t|`.
    pub running_mean_abs: Vec<f64>,
    /// Fraction of `t <= n` with `|c_t| < threshold`.
    pub small_fraction: Vec<f64>,
    /// Minimum of `small_fraction[n]` over `n >= T/2`.
    pub lower_density: f64,
}

pub fn cesaro_statistics(coefficients: &[Complex64], threshold: f64) -> CesaroStats {
    let mut sum = Complex64::new(0.0, 0.0);
    let mut sum_abs = 0.0;
    let mut small = 0usize;
    let mut running_mean = Vec::with_capacity(coefficients.len());
    let mut running_mean_abs = Vec::with_capacity(coefficients.len());
    let mut small_fraction = Vec::with_capacity(coefficients.len());
    for (n, c) in coefficients.iter().enumerate() {
        sum += c;
        sum_abs += c.norm();
        if c.norm() < threshold {
            small += 1;
        }
        let count = (n + 1) as f64;
        running_mean.push(sum / count);
        running_mean_abs.push(sum_abs / count);
        small_fraction.push(small as f64 / count);
    }
    let half = coefficients.len() / 2;
    let lower_density = small_fraction[half.min(small_fraction.len().saturating_sub(1))..]
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    CesaroStats {
        running_mean,
        running_mean_abs,
        small_fraction,
        lower_density: if lower_density.is_finite() { lower_density } else { 0.0 },
    }
}
