//! Abelian cellular automata `F = sum_i phi_i . sigma^i` and their configurations.
//!
//! The shift is `sigma(x)_z = x_{z+1}`, so `F(x)_z = sum_i phi_i(x_{z+i})`.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::group::{Endomorphism, GroupElement, GroupSpec};
use crate::modular::ModularMatrix;

/// Largest `n * rank(G)` accepted by [`AbelianCA::periodic_fixed_count`].
pub const PERIODIC_CAPACITY: usize = 1024;

/// Finite-support configuration over a group alphabet, zero outside its window.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FiniteConfiguration {
    spec: GroupSpec,
    offset: i64,
    cells: Vec<GroupElement>,
}

impl FiniteConfiguration {
    /// Cells `cells[j]` at positions `offset + j`; the result is trimmed.
    pub fn new(spec: &GroupSpec, offset: i64, cells: Vec<GroupElement>) -> Result<Self> {
        for c in &cells {
            spec.check(c)?;
        }
        Ok(Self::trimmed(spec, offset, cells))
    }

    /// Parses residue rows, one per cell.
    pub fn from_residues(spec: &GroupSpec, offset: i64, cells: &[Vec<u64>]) -> Result<Self> {
        let cells = cells
            .iter()
            .map(|r| spec.element(r.clone()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::trimmed(spec, offset, cells))
    }

    pub(crate) fn trimmed(spec: &GroupSpec, mut offset: i64, mut cells: Vec<GroupElement>) -> Self {
        let lead = cells.iter().take_while(|c| c.is_zero()).count();
        if lead == cells.len() {
            return Self::zero(spec);
        }
        let tail = cells.iter().rev().take_while(|c| c.is_zero()).count();
        cells.truncate(cells.len() - tail);
        cells.drain(..lead);
        offset += lead as i64;
        Self {
            spec: spec.clone(),
            offset,
            cells,
        }
    }

    pub fn zero(spec: &GroupSpec) -> Self {
        Self {
            spec: spec.clone(),
            offset: 0,
            cells: Vec::new(),
        }
    }

    /// One nonzero cell `a` at `position`.
    pub fn single(spec: &GroupSpec, position: i64, a: GroupElement) -> Result<Self> {
        Self::new(spec, position, vec![a])
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    /// Position of the first stored cell (0 for the zero configuration).
    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn cells(&self) -> &[GroupElement] {
        &self.cells
    }

    pub fn is_zero(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn get(&self, z: i64) -> GroupElement {
        let j = z - self.offset;
        if j >= 0 && (j as usize) < self.cells.len() {
            self.cells[j as usize].clone()
        } else {
            self.spec.zero()
        }
    }

    fn get_ref(&self, z: i64) -> Option<&GroupElement> {
        let j = z - self.offset;
        if j >= 0 {
            self.cells.get(j as usize)
        } else {
            None
        }
    }

    /// Cells at positions `a..b`.
    pub fn window(&self, a: i64, b: i64) -> Vec<GroupElement> {
        (a..b).map(|z| self.get(z)).collect()
    }

    /// First and last nonzero positions.
    pub fn support_range(&self) -> Option<(i64, i64)> {
        if self.cells.is_empty() {
            None
        } else {
            Some((self.offset, self.offset + self.cells.len() as i64 - 1))
        }
    }

    pub fn support(&self) -> Vec<i64> {
        self.cells
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, _)| self.offset + j as i64)
            .collect()
    }

    /// Number of nonzero cells.
    pub fn rank(&self) -> usize {
        self.cells.iter().filter(|c| !c.is_zero()).count()
    }

    /// `max(support) - min(support)`, 0 for the zero configuration.
    pub fn diameter(&self) -> usize {
        self.cells.len().saturating_sub(1)
    }

    /// `sigma^q(self)`, i.e. the cell at `z` moves to `z - q`.
    pub fn shifted(&self, q: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        Self {
            spec: self.spec.clone(),
            offset: self.offset - q,
            cells: self.cells.clone(),
        }
    }

    fn check_spec(&self, other: &FiniteConfiguration) -> Result<()> {
        if self.spec == other.spec {
            Ok(())
        } else {
            Err(Error::SpecMismatch {
                expected: self.spec.to_string(),
                found: other.spec.to_string(),
            })
        }
    }

    pub fn add(&self, other: &FiniteConfiguration) -> Result<FiniteConfiguration> {
        self.check_spec(other)?;
        let (Some((a0, a1)), Some((b0, b1))) = (self.support_range(), other.support_range()) else {
            return Ok(if self.is_zero() { other.clone() } else { self.clone() });
        };
        let (lo, hi) = (a0.min(b0), a1.max(b1));
        let cells = (lo..=hi)
            .map(|z| self.spec.add_unchecked(&self.get(z), &other.get(z)))
            .collect();
        Ok(Self::trimmed(&self.spec, lo, cells))
    }

    pub fn neg(&self) -> FiniteConfiguration {
        Self::trimmed(
            &self.spec,
            self.offset,
            self.cells.iter().map(|c| self.spec.neg(c)).collect(),
        )
    }

    pub fn sub(&self, other: &FiniteConfiguration) -> Result<FiniteConfiguration> {
        self.add(&other.neg())
    }

    /// Residues of the cells at positions `a..b`, cell-major.
    pub fn flatten(&self, a: i64, b: i64) -> Vec<u64> {
        (a..b)
            .flat_map(|z| self.get(z).residues().to_vec())
            .collect()
    }
}

impl fmt::Display for FiniteConfiguration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        write!(f, "@{}:", self.offset)?;
        for c in &self.cells {
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for FiniteConfiguration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Config({}; {self})", self.spec)
    }
}

/// Spatially periodic configuration, `x_{z+n} = x_z`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PeriodicConfiguration {
    spec: GroupSpec,
    cells: Vec<GroupElement>,
}

impl PeriodicConfiguration {
    pub fn new(spec: &GroupSpec, cells: Vec<GroupElement>) -> Result<Self> {
        if cells.is_empty() {
            return Err(Error::OutOfRange("period must be at least 1".into()));
        }
        for c in &cells {
            spec.check(c)?;
        }
        Ok(Self {
            spec: spec.clone(),
            cells,
        })
    }

    pub fn period(&self) -> usize {
        self.cells.len()
    }

    pub fn cells(&self) -> &[GroupElement] {
        &self.cells
    }

    pub fn get(&self, z: i64) -> &GroupElement {
        &self.cells[z.rem_euclid(self.cells.len() as i64) as usize]
    }
}

/// Outcome of [`AbelianCA::bipermutivity`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bipermutivity {
    Bipermutive,
    NotBipermutive {
        left_bijective: bool,
        right_bijective: bool,
    },
    /// The neighborhood has a single offset, so the notion does not apply.
    SingleOffset,
    Zero,
}

/// Abelian cellular automaton over a finite abelian group.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AbelianCA {
    spec: GroupSpec,
    coefficients: BTreeMap<i64, Endomorphism>,
}

impl AbelianCA {
    /// Zero coefficients are dropped.
    pub fn new(spec: &GroupSpec, coefficients: BTreeMap<i64, Endomorphism>) -> Result<Self> {
        for h in coefficients.values() {
            if h.spec() != spec {
                return Err(Error::SpecMismatch {
                    expected: spec.to_string(),
                    found: h.spec().to_string(),
                });
            }
        }
        Ok(Self::from_map(spec, coefficients))
    }

    fn from_map(spec: &GroupSpec, mut coefficients: BTreeMap<i64, Endomorphism>) -> Self {
        coefficients.retain(|_, h| !h.is_zero());
        Self {
            spec: spec.clone(),
            coefficients,
        }
    }

    /// Builds from `(offset, integer matrix)` pairs; repeated offsets add up.
    pub fn from_matrices(spec: &GroupSpec, terms: &[(i64, Vec<Vec<i64>>)]) -> Result<Self> {
        let mut map: BTreeMap<i64, Endomorphism> = BTreeMap::new();
        for (offset, rows) in terms {
            let h = Endomorphism::new(spec, rows)?;
            let entry = map
                .entry(*offset)
                .or_insert_with(|| Endomorphism::zero(spec));
            *entry = entry.add_unchecked(&h);
        }
        Ok(Self::from_map(spec, map))
    }

    /// Scalar coefficients over a cyclic or product group.
    pub fn from_scalars(spec: &GroupSpec, terms: &[(i64, i64)]) -> Self {
        let mut map: BTreeMap<i64, Endomorphism> = BTreeMap::new();
        for &(offset, n) in terms {
            let entry = map
                .entry(offset)
                .or_insert_with(|| Endomorphism::zero(spec));
            *entry = entry.add_unchecked(&Endomorphism::scalar(spec, n));
        }
        Self::from_map(spec, map)
    }

    pub fn identity(spec: &GroupSpec) -> Self {
        Self::shift(spec, 0)
    }

    pub fn zero(spec: &GroupSpec) -> Self {
        Self::from_map(spec, BTreeMap::new())
    }

    /// `sigma^q`.
    pub fn shift(spec: &GroupSpec, q: i64) -> Self {
        Self::from_map(spec, BTreeMap::from([(q, Endomorphism::identity(spec))]))
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn coefficients(&self) -> &BTreeMap<i64, Endomorphism> {
        &self.coefficients
    }

    pub fn coefficient(&self, offset: i64) -> Endomorphism {
        self.coefficients
            .get(&offset)
            .cloned()
            .unwrap_or_else(|| Endomorphism::zero(&self.spec))
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// Smallest and largest offset with a nonzero coefficient.
    pub fn offset_range(&self) -> Option<(i64, i64)> {
        let lo = *self.coefficients.keys().next()?;
        let hi = *self.coefficients.keys().next_back()?;
        Some((lo, hi))
    }

    /// `max |offset|`.
    pub fn radius(&self) -> u64 {
        self.coefficients
            .keys()
            .map(|i| i.unsigned_abs())
            .max()
            .unwrap_or(0)
    }

    /// `max offset - min offset`.
    pub fn diameter(&self) -> u64 {
        self.offset_range()
            .map(|(lo, hi)| (hi - lo) as u64)
            .unwrap_or(0)
    }

    fn check_spec(&self, spec: &GroupSpec) -> Result<()> {
        if &self.spec == spec {
            Ok(())
        } else {
            Err(Error::SpecMismatch {
                expected: self.spec.to_string(),
                found: spec.to_string(),
            })
        }
    }

    pub fn apply(&self, x: &FiniteConfiguration) -> Result<FiniteConfiguration> {
        self.check_spec(x.spec())?;
        Ok(self.apply_unchecked(x))
    }

    pub(crate) fn apply_unchecked(&self, x: &FiniteConfiguration) -> FiniteConfiguration {
        let (Some((a, b)), Some((lo, hi))) = (x.support_range(), self.offset_range()) else {
            return FiniteConfiguration::zero(&self.spec);
        };
        let start = a - hi;
        let end = b - lo;
        let k = self.spec.rank();
        let mut cells = Vec::with_capacity((end - start + 1) as usize);
        let mut acc = vec![0u64; k];
        for z in start..=end {
            acc.iter_mut().for_each(|v| *v = 0);
            for (&i, h) in &self.coefficients {
                if let Some(c) = x.get_ref(z + i) {
                    h.apply_add_into(c.residues(), &mut acc);
                }
            }
            cells.push(GroupElement(acc.clone()));
        }
        FiniteConfiguration::trimmed(&self.spec, start, cells)
    }

    /// `t`-fold application.
    pub fn iterate(&self, x: &FiniteConfiguration, t: u64) -> Result<FiniteConfiguration> {
        self.check_spec(x.spec())?;
        let mut y = x.clone();
        for _ in 0..t {
            y = self.apply_unchecked(&y);
        }
        Ok(y)
    }

    pub fn apply_periodic(&self, x: &PeriodicConfiguration) -> Result<PeriodicConfiguration> {
        self.check_spec(&x.spec)?;
        let k = self.spec.rank();
        let n = x.period() as i64;
        let cells = (0..n)
            .map(|z| {
                let mut acc = vec![0u64; k];
                for (&i, h) in &self.coefficients {
                    h.apply_add_into(x.get(z + i).residues(), &mut acc);
                }
                GroupElement(acc)
            })
            .collect();
        PeriodicConfiguration::new(&self.spec, cells)
    }

    /// `self . other`: coefficient at `k` is `sum_{i+j=k} phi_i psi_j`.
    pub fn compose(&self, other: &AbelianCA) -> Result<AbelianCA> {
        self.check_spec(&other.spec)?;
        Ok(self.compose_unchecked(other))
    }

    pub(crate) fn compose_unchecked(&self, other: &AbelianCA) -> AbelianCA {
        let mut map: BTreeMap<i64, Endomorphism> = BTreeMap::new();
        for (&i, phi) in &self.coefficients {
            for (&j, psi) in &other.coefficients {
                let term = phi.compose_unchecked(psi);
                match map.entry(i + j) {
                    std::collections::btree_map::Entry::Vacant(e) => {
                        e.insert(term);
                    }
                    std::collections::btree_map::Entry::Occupied(mut e) => {
                        let sum = e.get().add_unchecked(&term);
                        e.insert(sum);
                    }
                }
            }
        }
        Self::from_map(&self.spec, map)
    }

    pub fn add(&self, other: &AbelianCA) -> Result<AbelianCA> {
        self.check_spec(&other.spec)?;
        let mut map = self.coefficients.clone();
        for (&j, psi) in &other.coefficients {
            let entry = map
                .entry(j)
                .or_insert_with(|| Endomorphism::zero(&self.spec));
            *entry = entry.add_unchecked(psi);
        }
        Ok(Self::from_map(&self.spec, map))
    }

    pub fn neg(&self) -> AbelianCA {
        let map = self
            .coefficients
            .iter()
            .map(|(&i, h)| (i, h.neg()))
            .collect();
        Self::from_map(&self.spec, map)
    }

    /// `F^t` by iterated convolution.
    pub fn power(&self, t: u64) -> AbelianCA {
        let mut acc = Self::identity(&self.spec);
        for _ in 0..t {
            acc = acc.compose_unchecked(self);
        }
        acc
    }

    /// `F^t` by repeated squaring, for large exponents.
    pub fn power_fast(&self, mut t: u64) -> AbelianCA {
        let mut result = Self::identity(&self.spec);
        let mut base = self.clone();
        while t > 0 {
            if t & 1 == 1 {
                result = result.compose_unchecked(&base);
            }
            t >>= 1;
            if t > 0 {
                base = base.compose_unchecked(&base);
            }
        }
        result
    }

    /// `F x G` acting on `G_1 x G_2` with block-diagonal coefficients.
    pub fn product(&self, other: &AbelianCA) -> AbelianCA {
        let spec = self.spec.product(&other.spec);
        let k1 = self.spec.rank();
        let k = spec.rank();
        let offsets: std::collections::BTreeSet<i64> = self
            .coefficients
            .keys()
            .chain(other.coefficients.keys())
            .copied()
            .collect();
        let mut map = BTreeMap::new();
        for i in offsets {
            let mut entries = vec![0u64; k * k];
            if let Some(h) = self.coefficients.get(&i) {
                for r in 0..k1 {
                    for c in 0..k1 {
                        entries[r * k + c] = h.entry(r, c);
                    }
                }
            }
            if let Some(h) = other.coefficients.get(&i) {
                for r in 0..k - k1 {
                    for c in 0..k - k1 {
                        entries[(k1 + r) * k + k1 + c] = h.entry(r, c);
                    }
                }
            }
            map.insert(i, Endomorphism::from_reduced(&spec, entries));
        }
        Self::from_map(&spec, map)
    }

    /// `sigma^q . F`: offsets translated by `q`.
    pub fn shift_compose(&self, q: i64) -> AbelianCA {
        let map = self
            .coefficients
            .iter()
            .map(|(&i, h)| (i + q, h.clone()))
            .collect();
        Self::from_map(&self.spec, map)
    }

    /// Dual CA on `G^ ~ G`: coefficient at `-i` is the adjoint of `phi_i`.
    pub fn dual(&self) -> AbelianCA {
        let map = self
            .coefficients
            .iter()
            .map(|(&i, h)| (-i, h.dual()))
            .collect();
        Self::from_map(&self.spec, map)
    }

    /// Conjugate by the flip `x_z -> x_{-z}`.
    pub fn mirror(&self) -> AbelianCA {
        let map = self
            .coefficients
            .iter()
            .map(|(&i, h)| (-i, h.clone()))
            .collect();
        Self::from_map(&self.spec, map)
    }

    /// Conjugate by a group automorphism `u`: `u . F . u^{-1}`, given `u` and its inverse.
    pub fn conjugate(&self, u: &Endomorphism, u_inv: &Endomorphism) -> Result<AbelianCA> {
        let map = self
            .coefficients
            .iter()
            .map(|(&i, h)| Ok((i, u.compose(h)?.compose(u_inv)?)))
            .collect::<Result<BTreeMap<_, _>>>()?;
        Ok(Self::from_map(&self.spec, map))
    }

    pub fn coefficients_commute(&self) -> bool {
        let coeffs: Vec<&Endomorphism> = self.coefficients.values().collect();
        coeffs
            .iter()
            .enumerate()
            .all(|(a, h)| coeffs[a + 1..].iter().all(|g| h.commutes_with(g)))
    }

    pub fn bipermutivity(&self) -> Bipermutivity {
        match self.offset_range() {
            None => Bipermutivity::Zero,
            Some((lo, hi)) if lo == hi => Bipermutivity::SingleOffset,
            Some((lo, hi)) => {
                let left_bijective = self.coefficients[&lo].is_bijective();
                let right_bijective = self.coefficients[&hi].is_bijective();
                if left_bijective && right_bijective {
                    Bipermutivity::Bipermutive
                } else {
                    Bipermutivity::NotBipermutive {
                        left_bijective,
                        right_bijective,
                    }
                }
            }
        }
    }

    pub fn is_bipermutive(&self) -> bool {
        self.bipermutivity() == Bipermutivity::Bipermutive
    }

    /// Matrix of `x -> F(x) - x` on `n`-periodic configurations, as an
    /// endomorphism of `G^n`.
    pub fn periodic_map(&self, n: usize) -> Result<Endomorphism> {
        if n == 0 {
            return Err(Error::OutOfRange("period must be at least 1".into()));
        }
        let k = self.spec.rank();
        if n * k > PERIODIC_CAPACITY {
            return Err(Error::CapacityExceeded(format!(
                "periodic system of size {} exceeds {PERIODIC_CAPACITY}",
                n * k
            )));
        }
        let big = self
            .spec
            .power(n)
            .map_err(|e| Error::CapacityExceeded(format!("G^{n}: {e}")))?;
        let dim = n * k;
        let mut rows = vec![vec![0i64; dim]; dim];
        let orders = self.spec.orders();
        for z in 0..n {
            for (&i, h) in &self.coefficients {
                let src = (z as i64 + i).rem_euclid(n as i64) as usize;
                for r in 0..k {
                    for c in 0..k {
                        let cell = &mut rows[z * k + r][src * k + c];
                        *cell = ((*cell as u64 + h.entry(r, c)) % orders[r]) as i64;
                    }
                }
            }
            for r in 0..k {
                let cell = &mut rows[z * k + r][z * k + r];
                *cell -= 1;
            }
        }
        Endomorphism::new(&big, &rows)
    }

    /// `|X_{F,n}|`, the number of `n`-periodic fixed points.
    pub fn periodic_fixed_count(&self, n: usize) -> Result<u128> {
        let h = self.periodic_map(n)?;
        let m: ModularMatrix = h.as_modular_matrix();
        m.cokernel_order()
            .ok_or_else(|| Error::CapacityExceeded("fixed-point count overflows".into()))
    }

    /// Rows `Delta_F(t, .)` for `t = 0..=T`.
    pub fn dependency_table(&self, horizon: usize) -> DependencyTable {
        let mut rows = Vec::with_capacity(horizon + 1);
        let mut power = Self::identity(&self.spec);
        for t in 0..=horizon {
            if t > 0 {
                power = power.compose_unchecked(self);
            }
            rows.push(
                power
                    .coefficients
                    .iter()
                    .map(|(&i, h)| (-i, h.clone()))
                    .collect(),
            );
        }
        DependencyTable {
            spec: self.spec.clone(),
            rows,
        }
    }
}

impl fmt::Display for AbelianCA {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0 over ({})", self.spec);
        }
        let terms: Vec<String> = self
            .coefficients
            .iter()
            .map(|(i, h)| format!("{h}*s^{i}"))
            .collect();
        write!(f, "{} over ({})", terms.join(" + "), self.spec)
    }
}

impl fmt::Debug for AbelianCA {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AbelianCA({self})")
    }
}

/// `Delta_F(t, z)` for `t <= T`: the coefficient of `F^t` at offset `-z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DependencyTable {
    spec: GroupSpec,
    rows: Vec<BTreeMap<i64, Endomorphism>>,
}

impl DependencyTable {
    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    /// Largest stored `t`.
    pub fn horizon(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn row(&self, t: usize) -> Result<&BTreeMap<i64, Endomorphism>> {
        self.rows.get(t).ok_or_else(|| {
            Error::OutOfRange(format!("t = {t} beyond table horizon {}", self.horizon()))
        })
    }

    pub fn get(&self, t: usize, z: i64) -> Result<Endomorphism> {
        Ok(self
            .row(t)?
            .get(&z)
            .cloned()
            .unwrap_or_else(|| Endomorphism::zero(&self.spec)))
    }

    /// `d(t)`: number of nonzero dependencies.
    pub fn d(&self, t: usize) -> Result<usize> {
        Ok(self.row(t)?.len())
    }

    /// Number of bijective dependencies at time `t`.
    pub fn bijective_count(&self, t: usize) -> Result<usize> {
        Ok(self.row(t)?.values().filter(|h| h.is_bijective()).count())
    }

    /// `s_k(t)`: bijective `Delta(t, z)` with `Delta(t, z + i) = 0` for `1 <= i <= k`.
    pub fn s(&self, k: usize, t: usize) -> Result<usize> {
        let row = self.row(t)?;
        Ok(row
            .iter()
            .filter(|(&z, h)| {
                (k == 0 || row.range(z + 1..=z + k as i64).next().is_none()) && h.is_bijective()
            })
            .count())
    }

    /// `F^t(x)_z = sum_j Delta(t, z - j)(x_j)`.
    pub fn reconstruct(&self, x: &FiniteConfiguration, t: usize) -> Result<FiniteConfiguration> {
        if x.spec() != &self.spec {
            return Err(Error::SpecMismatch {
                expected: self.spec.to_string(),
                found: x.spec().to_string(),
            });
        }
        let row = self.row(t)?;
        let (Some((a, b)), Some((&zlo, _)), Some((&zhi, _))) =
            (x.support_range(), row.iter().next(), row.iter().next_back())
        else {
            return Ok(FiniteConfiguration::zero(&self.spec));
        };
        let k = self.spec.rank();
        let cells = (a + zlo..=b + zhi)
            .map(|z| {
                let mut acc = vec![0u64; k];
                for (j, c) in (a..=b).zip(x.cells()) {
                    if let Some(h) = row.get(&(z - j)) {
                        h.apply_add_into(c.residues(), &mut acc);
                    }
                }
                GroupElement(acc)
            })
            .collect();
        Ok(FiniteConfiguration::trimmed(&self.spec, a + zlo, cells))
    }
}
