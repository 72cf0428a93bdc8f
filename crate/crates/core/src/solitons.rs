//! Solitons `F^p(c) = sigma^q(c)`, finite fixed points, and the randomization
//! decider for automata with commuting coefficients.
//!
//! A configuration `c` is a soliton with parameters `(p, q)` exactly when it is
//! a finite fixed point of `sigma^{-q} . F^p`, so soliton search reduces to
//! kernels of integer matrices over a window.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use serde_json::{json, Value};

use crate::ca::{AbelianCA, FiniteConfiguration};
use crate::error::{Error, Result};
use crate::group::{primary_decompose, GroupElement, GroupSpec};
use crate::modular::{ModularMatrix, Subgroup};

/// Largest number of unknowns (`w * rank(G)`) in a fixed-point system.
pub const FIXED_POINT_CAPACITY: usize = 2048;
/// Largest `p`-component handled by the decider.
pub const DECIDER_COMPONENT_CAP: u64 = 1 << 16;
/// Largest `N * diameter` for which the decider expands `F^N`.
pub const DECIDER_POWER_CAP: u64 = 1 << 22;

/// A verified soliton.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolitonWitness {
    configuration: FiniteConfiguration,
    period: u64,
    shift: i64,
    orbit_diameter: usize,
}

impl SolitonWitness {
    /// Checks `F^p(c) = sigma^q(c)` by simulation before accepting.
    pub fn new(f: &AbelianCA, c: FiniteConfiguration, p: u64, q: i64) -> Result<Self> {
        let check = verify_soliton(f, &c, p, q)?;
        if !check.valid {
            return Err(Error::VerificationFailed(
                check.reason.unwrap_or_else(|| "not a soliton".into()),
            ));
        }
        Ok(Self {
            configuration: c,
            period: p,
            shift: q,
            orbit_diameter: check.orbit_diameter,
        })
    }

    pub fn configuration(&self) -> &FiniteConfiguration {
        &self.configuration
    }

    pub fn period(&self) -> u64 {
        self.period
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    /// Largest support diameter over one period of the orbit.
    pub fn orbit_diameter(&self) -> usize {
        self.orbit_diameter
    }

    pub fn rank(&self) -> usize {
        self.configuration.rank()
    }

    /// `cells`, `offset`, `p`, `q`, `orbit_diameter`, `group`.
    pub fn to_json(&self) -> Value {
        let cells: Vec<Vec<u64>> = self
            .configuration
            .cells()
            .iter()
            .map(|c| c.residues().to_vec())
            .collect();
        json!({
            "cells": cells,
            "group": self.configuration.spec().to_string(),
            "offset": self.configuration.offset(),
            "orbit_diameter": self.orbit_diameter,
            "p": self.period,
            "q": self.shift,
        })
    }
}

/// Result of [`verify_soliton`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolitonCheck {
    pub valid: bool,
    pub orbit_diameter: usize,
    pub reason: Option<String>,
}

pub fn verify_soliton(f: &AbelianCA, c: &FiniteConfiguration, p: u64, q: i64) -> Result<SolitonCheck> {
    if c.spec() != f.spec() {
        return Err(Error::SpecMismatch {
            expected: f.spec().to_string(),
            found: c.spec().to_string(),
        });
    }
    let reject = |reason: String, d: usize| SolitonCheck {
        valid: false,
        orbit_diameter: d,
        reason: Some(reason),
    };
    if c.is_zero() {
        return Ok(reject("the zero configuration is not a soliton".into(), 0));
    }
    if p == 0 {
        return Ok(reject("period must be at least 1".into(), c.diameter()));
    }
    let mut y = c.clone();
    let mut diameter = c.diameter();
    for _ in 0..p {
        y = f.apply(&y)?;
        diameter = diameter.max(y.diameter());
    }
    if y == c.shifted(q) {
        Ok(SolitonCheck {
            valid: true,
            orbit_diameter: diameter,
            reason: None,
        })
    } else {
        Ok(reject(
            format!("F^{p}(c) = {y} differs from sigma^{q}(c) = {}", c.shifted(q)),
            diameter,
        ))
    }
}

/// Finite fixed points supported on `[0, w)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedPointSpace {
    spec: GroupSpec,
    width: usize,
    kernel: Subgroup,
}

impl FixedPointSpace {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn is_trivial(&self) -> bool {
        self.kernel.is_trivial()
    }

    /// Number of fixed points in the window (including zero), if it fits.
    pub fn size(&self) -> Option<u128> {
        self.kernel.order()
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.kernel
    }

    fn to_config(&self, residues: &[u64]) -> FiniteConfiguration {
        let k = self.spec.rank();
        let cells = residues
            .chunks(k)
            .map(|c| GroupElement(c.to_vec()))
            .collect();
        FiniteConfiguration::trimmed(&self.spec, 0, cells)
    }

    /// Generators of the solution group.
    pub fn basis(&self) -> Vec<FiniteConfiguration> {
        self.kernel
            .generators()
            .iter()
            .map(|g| self.to_config(g))
            .collect()
    }

    /// Least nonzero solution, comparing cell-major residue vectors.
    pub fn lex_min(&self) -> Option<FiniteConfiguration> {
        self.kernel.lex_min_nonzero().map(|v| self.to_config(&v))
    }

    pub fn contains(&self, x: &FiniteConfiguration) -> bool {
        match x.support_range() {
            None => true,
            Some((a, b)) if a >= 0 && b < self.width as i64 => {
                self.kernel.contains(&x.flatten(0, self.width as i64))
            }
            _ => false,
        }
    }
}

/// Configurations `x` supported on `[0, w)` with `F(x) = x`.
pub fn finite_fixed_points(f: &AbelianCA, w: usize) -> Result<FixedPointSpace> {
    if w == 0 {
        return Err(Error::OutOfRange("window width must be at least 1".into()));
    }
    let spec = f.spec();
    let k = spec.rank();
    if w * k > FIXED_POINT_CAPACITY {
        return Err(Error::CapacityExceeded(format!(
            "fixed-point system with {} unknowns exceeds {FIXED_POINT_CAPACITY}",
            w * k
        )));
    }
    let (lo, hi) = f.offset_range().unwrap_or((0, 0));
    // F(x) - x can only be nonzero on [-hi, w - 1 - lo], widened to cover [0, w).
    let zmin = (-hi).min(0);
    let zmax = (w as i64 - 1 - lo).max(w as i64 - 1);
    let orders = spec.orders();
    let nrows = (zmax - zmin + 1) as usize * k;
    let ncols = w * k;
    let mut entries = vec![0u64; nrows * ncols];
    for z in zmin..=zmax {
        for r in 0..k {
            let row = ((z - zmin) as usize * k + r) * ncols;
            let m = orders[r];
            for c in 0..w {
                let i = c as i64 - z;
                let h = f.coefficients().get(&i);
                for s in 0..k {
                    let mut v = h.map_or(0, |h| h.entry(r, s));
                    if z == c as i64 && r == s {
                        v = (v + m - 1) % m;
                    }
                    entries[row + c * k + s] = v;
                }
            }
        }
    }
    let row_moduli: Vec<u64> = (0..nrows).map(|i| orders[i % k]).collect();
    let col_moduli: Vec<u64> = (0..ncols).map(|i| orders[i % k]).collect();
    let m = ModularMatrix::from_reduced(row_moduli, col_moduli, entries);
    let space = FixedPointSpace {
        spec: spec.clone(),
        width: w,
        kernel: m.kernel(),
    };
    for x in space.basis() {
        if f.apply(&x)? != x {
            return Err(Error::VerificationFailed(format!(
                "kernel vector {x} is not fixed"
            )));
        }
    }
    Ok(space)
}

/// Limits for [`soliton_search`]. Shifts range over `-max_shift..=max_shift`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    pub max_width: usize,
    pub max_period: u64,
    pub max_shift: u64,
    pub time_limit: Option<Duration>,
}

impl SearchBudget {
    pub fn new(max_width: usize, max_period: u64, max_shift: u64) -> Self {
        Self {
            max_width,
            max_period,
            max_shift,
            time_limit: None,
        }
    }

    pub fn with_time_limit(mut self, limit: Duration) -> Self {
        self.time_limit = Some(limit);
        self
    }
}

/// Outcome of a bounded search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOutcome {
    pub witness: Option<SolitonWitness>,
    /// Number of `(w, p, q)` systems solved.
    pub systems_solved: usize,
    /// False when the time limit stopped the search early.
    pub completed: bool,
}

impl SearchOutcome {
    pub fn to_json(&self) -> Value {
        json!({
            "completed": self.completed,
            "systems_solved": self.systems_solved,
            "witness": self.witness.as_ref().map(|w| w.to_json()),
        })
    }
}

/// Iterative deepening over `s = w + p + |q|`; within a level, smaller `p`,
/// then smaller `|q|`, then the lexicographically least configuration wins.
pub fn soliton_search(f: &AbelianCA, budget: &SearchBudget) -> Result<SearchOutcome> {
    let start = Instant::now();
    let mut powers: Vec<AbelianCA> = vec![AbelianCA::identity(f.spec())];
    let mut solved = 0;
    let max_level = budget.max_width as u64 + budget.max_period + budget.max_shift;
    for s in 2..=max_level {
        for p in 1..=budget.max_period.min(s - 1) {
            for aq in 0..=budget.max_shift.min(s - 1 - p) {
                let w = (s - p - aq) as usize;
                if w == 0 || w > budget.max_width {
                    continue;
                }
                if budget.time_limit.is_some_and(|lim| start.elapsed() > lim) {
                    return Ok(SearchOutcome {
                        witness: None,
                        systems_solved: solved,
                        completed: false,
                    });
                }
                while powers.len() <= p as usize {
                    let next = powers.last().unwrap().compose_unchecked(f);
                    powers.push(next);
                }
                let fp = &powers[p as usize];
                let shifts: Vec<i64> = if aq == 0 {
                    vec![0]
                } else {
                    vec![-(aq as i64), aq as i64]
                };
                let mut best: Option<(Vec<u64>, FiniteConfiguration, i64)> = None;
                for q in shifts {
                    let g = fp.shift_compose(-q);
                    let space = finite_fixed_points(&g, w)?;
                    solved += 1;
                    if let Some(c) = space.lex_min() {
                        let key = c.flatten(0, w as i64);
                        if best.as_ref().is_none_or(|(k, _, _)| key < *k) {
                            best = Some((key, c, q));
                        }
                    }
                }
                if let Some((_, c, q)) = best {
                    let witness = SolitonWitness::new(f, c, p, q)?;
                    return Ok(SearchOutcome {
                        witness: Some(witness),
                        systems_solved: solved,
                        completed: true,
                    });
                }
            }
        }
    }
    Ok(SearchOutcome {
        witness: None,
        systems_solved: solved,
        completed: true,
    })
}

/// Looks for `F^t(x) = sigma^s(F^u(x))` with `u < t <= T`.
pub fn orbit_shift_detect(f: &AbelianCA, x: &FiniteConfiguration, horizon: u64) -> Result<Option<SolitonWitness>> {
    if x.is_zero() {
        return Ok(None);
    }
    let mut seen: HashMap<Vec<GroupElement>, (u64, i64)> = HashMap::new();
    let mut orbit = vec![x.clone()];
    seen.insert(x.cells().to_vec(), (0, x.offset()));
    let mut y = x.clone();
    for t in 1..=horizon {
        y = f.apply(&y)?;
        if y.is_zero() {
            return Ok(None);
        }
        if let Some(&(u, offset_u)) = seen.get(y.cells()) {
            let q = offset_u - y.offset();
            let c = orbit[u as usize].clone();
            return SolitonWitness::new(f, c, t - u, q).map(Some);
        }
        seen.insert(y.cells().to_vec(), (t, y.offset()));
        orbit.push(y.clone());
    }
    Ok(None)
}

/// Rank statistics of one seed's orbit.
#[derive(Clone, Debug, PartialEq)]
pub struct DiffusivityReport {
    /// `rank(F^t(seed))` for `t = 0..=T`.
    pub ranks: Vec<usize>,
    /// Minimum rank over each `[2^k, 2^{k+1})` inside the horizon.
    pub window_minima: Vec<(u32, usize)>,
    /// For `m = 1..=rank_cap`, the fraction of `t in 1..=T` with rank at least `m`.
    pub threshold_fractions: Vec<(usize, f64)>,
}

pub fn diffusivity_probe(
    f: &AbelianCA,
    seeds: &[FiniteConfiguration],
    horizon: u64,
    rank_cap: usize,
) -> Result<Vec<DiffusivityReport>> {
    seeds
        .iter()
        .map(|seed| {
            let mut ranks = Vec::with_capacity(horizon as usize + 1);
            let mut y = seed.clone();
            ranks.push(y.rank());
            for _ in 0..horizon {
                y = f.apply(&y)?;
                ranks.push(y.rank());
            }
            Ok(rank_statistics(ranks, rank_cap))
        })
        .collect()
}

/// Window minima and threshold fractions of a rank sequence.
pub fn rank_statistics(ranks: Vec<usize>, rank_cap: usize) -> DiffusivityReport {
    let window_minima = crate::spectral::dyadic_window_minima(&ranks);
    let later = &ranks[1.min(ranks.len())..];
    let threshold_fractions = (1..=rank_cap)
        .map(|m| {
            let hits = later.iter().filter(|&&r| r >= m).count();
            let frac = if later.is_empty() {
                0.0
            } else {
                hits as f64 / later.len() as f64
            };
            (m, frac)
        })
        .collect();
    DiffusivityReport {
        ranks,
        window_minima,
        threshold_fractions,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerdictStatus {
    RandomizesInDensity,
    NotRandomizing,
    Inconclusive,
}

impl VerdictStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            VerdictStatus::RandomizesInDensity => "randomizes_in_density",
            VerdictStatus::NotRandomizing => "not_randomizing",
            VerdictStatus::Inconclusive => "inconclusive",
        }
    }
}

/// Why a component received its status.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Evidence {
    /// `F^N` kills the single cell `g`; the automaton is not surjective.
    NonSurjective { cell: GroupElement },
    /// `F^N` maps the single cell `g` to a single cell.
    RankOne {
        cell: GroupElement,
        witness: Option<SolitonWitness>,
    },
    /// Every single cell has image rank at least `min_rank`.
    RankCertificate { min_rank: usize },
    TooLarge { reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentVerdict {
    pub prime: u64,
    pub spec: GroupSpec,
    pub threshold: Option<u64>,
    pub status: VerdictStatus,
    pub evidence: Evidence,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RandomizationVerdict {
    pub status: VerdictStatus,
    pub components: Vec<ComponentVerdict>,
    /// Soliton of the whole automaton, lifted from a component.
    pub witness: Option<SolitonWitness>,
}

impl RandomizationVerdict {
    pub fn to_json(&self) -> Value {
        let components: Vec<Value> = self
            .components
            .iter()
            .map(|c| {
                let evidence = match &c.evidence {
                    Evidence::NonSurjective { cell } => json!({
                        "case": "non_surjective",
                        "cell": cell.residues(),
                    }),
                    Evidence::RankOne { cell, witness } => json!({
                        "case": "rank_one",
                        "cell": cell.residues(),
                        "witness": witness.as_ref().map(|w| w.to_json()),
                    }),
                    Evidence::RankCertificate { min_rank } => json!({
                        "case": "rank_certificate",
                        "min_rank": min_rank,
                    }),
                    Evidence::TooLarge { reason } => json!({
                        "case": "too_large",
                        "reason": reason,
                    }),
                };
                json!({
                    "N": c.threshold,
                    "evidence": evidence,
                    "group": c.spec.to_string(),
                    "prime": c.prime,
                    "status": c.status.as_str(),
                })
            })
            .collect();
        json!({
            "components": components,
            "status": self.status.as_str(),
            "witness": self.witness.as_ref().map(|w| w.to_json()),
        })
    }
}

/// `N = p^{n0 + l - 1}`, with `p^l` the exponent of a `p`-group of order
/// `size` and `n0` least such that `p^{n0} > size`.
pub fn commuting_threshold(prime: u64, size: u64, exponent: u64) -> Option<u64> {
    let mut l = 0u32;
    let mut e = 1u64;
    while e < exponent {
        e = e.checked_mul(prime)?;
        l += 1;
    }
    let mut n0 = 0u32;
    let mut v = 1u64;
    while v <= size {
        v = v.checked_mul(prime)?;
        n0 += 1;
    }
    prime.checked_pow(n0 + l - 1)
}

/// Randomization in density for automata whose coefficients commute.
pub fn decide_randomization_commuting(f: &AbelianCA) -> Result<RandomizationVerdict> {
    if !f.coefficients_commute() {
        return Err(Error::NonCommuting);
    }
    let decomposition = primary_decompose(f.spec());
    let mut components = Vec::new();
    let mut lifted: Option<SolitonWitness> = None;
    for (ci, comp) in decomposition.components().iter().enumerate() {
        let coeffs = f
            .coefficients()
            .iter()
            .map(|(&i, h)| Ok((i, decomposition.restrict(ci, h)?)))
            .collect::<Result<_>>()?;
        let fc = AbelianCA::new(&comp.spec, coeffs)?;
        let verdict = decide_component(&fc, comp.prime)?;
        if let Evidence::RankOne {
            witness: Some(w), ..
        } = &verdict.evidence
        {
            if lifted.is_none() {
                let cells = w
                    .configuration()
                    .cells()
                    .iter()
                    .map(|c| decomposition.embed(ci, c))
                    .collect::<Result<Vec<_>>>()?;
                let c = FiniteConfiguration::new(f.spec(), w.configuration().offset(), cells)?;
                lifted = Some(SolitonWitness::new(f, c, w.period(), w.shift())?);
            }
        }
        components.push(verdict);
    }
    let status = if components
        .iter()
        .any(|c| c.status == VerdictStatus::NotRandomizing)
    {
        VerdictStatus::NotRandomizing
    } else if components
        .iter()
        .any(|c| c.status == VerdictStatus::Inconclusive)
    {
        VerdictStatus::Inconclusive
    } else {
        VerdictStatus::RandomizesInDensity
    };
    Ok(RandomizationVerdict {
        status,
        components,
        witness: lifted,
    })
}

fn decide_component(f: &AbelianCA, prime: u64) -> Result<ComponentVerdict> {
    let spec = f.spec().clone();
    let inconclusive = |threshold, reason: String| ComponentVerdict {
        prime,
        spec: spec.clone(),
        threshold,
        status: VerdictStatus::Inconclusive,
        evidence: Evidence::TooLarge { reason },
    };
    let size = match spec.size() {
        Some(n) if n <= DECIDER_COMPONENT_CAP => n,
        _ => {
            return Ok(inconclusive(
                None,
                format!("component ({spec}) larger than {DECIDER_COMPONENT_CAP}"),
            ))
        }
    };
    let Some(n) = commuting_threshold(prime, size, spec.exponent()) else {
        return Ok(inconclusive(None, "threshold overflows".into()));
    };
    if n.saturating_mul(f.diameter().max(1)) > DECIDER_POWER_CAP {
        return Ok(inconclusive(
            Some(n),
            format!("F^{n} too wide to expand"),
        ));
    }
    let power = f.power_fast(n);
    let mut min_rank = usize::MAX;
    for idx in 1..size {
        let g = spec.element_at(idx);
        let rank = power
            .coefficients()
            .values()
            .filter(|h| !h.apply(&g).unwrap().is_zero())
            .count();
        if rank == 0 {
            return Ok(ComponentVerdict {
                prime,
                spec,
                threshold: Some(n),
                status: VerdictStatus::NotRandomizing,
                evidence: Evidence::NonSurjective { cell: g },
            });
        }
        if rank == 1 {
            let witness = rank_one_witness(f, n)?;
            return Ok(ComponentVerdict {
                prime,
                spec,
                threshold: Some(n),
                status: VerdictStatus::NotRandomizing,
                evidence: Evidence::RankOne { cell: g, witness },
            });
        }
        min_rank = min_rank.min(rank);
    }
    Ok(ComponentVerdict {
        prime,
        spec,
        threshold: Some(n),
        status: VerdictStatus::RandomizesInDensity,
        evidence: Evidence::RankCertificate { min_rank },
    })
}

/// Soliton search tuned to the single-cell orbits a rank-one power implies.
fn rank_one_witness(f: &AbelianCA, n: u64) -> Result<Option<SolitonWitness>> {
    let r = f.radius().max(1);
    let narrow = SearchBudget::new(1, n.min(64), r * n.min(64));
    if let Some(w) = soliton_search(f, &narrow)?.witness {
        return Ok(Some(w));
    }
    let wide = SearchBudget::new(4, n.min(16), r * n.min(16));
    Ok(soliton_search(f, &wide)?.witness)
}

/// Soliton search on `F` and on its dual with the same budget.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrosscheckReport {
    pub primal: SearchOutcome,
    pub dual: SearchOutcome,
}

impl CrosscheckReport {
    /// Both found or both did not; disagreement only reflects the budget.
    pub fn agree(&self) -> bool {
        self.primal.witness.is_some() == self.dual.witness.is_some()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "agree": self.agree(),
            "dual": self.dual.to_json(),
            "primal": self.primal.to_json(),
        })
    }
}

pub fn dual_soliton_crosscheck(f: &AbelianCA, budget: &SearchBudget) -> Result<CrosscheckReport> {
    Ok(CrosscheckReport {
        primal: soliton_search(f, budget)?,
        dual: soliton_search(&f.dual(), budget)?,
    })
}
