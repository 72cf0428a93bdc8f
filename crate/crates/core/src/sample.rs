//! Random groups, endomorphisms, automata and configurations.

use std::collections::BTreeMap;

use rand::Rng;

use crate::ca::{AbelianCA, FiniteConfiguration};
use crate::group::{gcd, Endomorphism, GroupElement, GroupSpec};

pub fn element<R: Rng + ?Sized>(spec: &GroupSpec, rng: &mut R) -> GroupElement {
    GroupElement(spec.orders().iter().map(|&m| rng.gen_range(0..m)).collect())
}

pub fn nonzero_element<R: Rng + ?Sized>(spec: &GroupSpec, rng: &mut R) -> GroupElement {
    loop {
        let a = element(spec, rng);
        if !a.is_zero() {
            return a;
        }
    }
}

/// Uniform over all endomorphisms: entry `(i, j)` is a multiple of
/// `m_i / gcd(m_i, m_j)`.
pub fn endomorphism<R: Rng + ?Sized>(spec: &GroupSpec, rng: &mut R) -> Endomorphism {
    let orders = spec.orders();
    let k = orders.len();
    let mut entries = Vec::with_capacity(k * k);
    for &mi in orders {
        for &mj in orders {
            let g = gcd(mi, mj);
            entries.push(rng.gen_range(0..g) * (mi / g));
        }
    }
    Endomorphism::from_reduced(spec, entries)
}

/// Random automaton with offsets in `[-radius, radius]`; each offset carries a
/// coefficient with probability `density`.
pub fn automaton<R: Rng + ?Sized>(spec: &GroupSpec, radius: i64, density: f64, rng: &mut R) -> AbelianCA {
    let mut map = BTreeMap::new();
    for i in -radius..=radius {
        if rng.gen_bool(density) {
            map.insert(i, endomorphism(spec, rng));
        }
    }
    AbelianCA::new(spec, map).expect("coefficients share the group")
}

/// Random automaton whose coefficients are polynomials in one endomorphism,
/// hence pairwise commuting.
pub fn commuting_automaton<R: Rng + ?Sized>(spec: &GroupSpec, radius: i64, rng: &mut R) -> AbelianCA {
    let base = endomorphism(spec, rng);
    let mut powers = vec![Endomorphism::identity(spec)];
    for _ in 0..spec.rank() {
        let next = powers.last().unwrap().compose_unchecked(&base);
        powers.push(next);
    }
    let mut map = BTreeMap::new();
    for i in -radius..=radius {
        let mut h = Endomorphism::zero(spec);
        for p in &powers {
            let c = rng.gen_range(0..spec.exponent().min(1 << 16)) as i64;
            h = h.add_unchecked(&Endomorphism::scalar(spec, c).compose_unchecked(p));
        }
        map.insert(i, h);
    }
    AbelianCA::new(spec, map).expect("coefficients share the group")
}

/// Random configuration on `[offset, offset + width)`, each cell nonzero
/// with probability `density`.
pub fn configuration<R: Rng + ?Sized>(
    spec: &GroupSpec,
    offset: i64,
    width: usize,
    density: f64,
    rng: &mut R,
) -> FiniteConfiguration {
    let cells = (0..width)
        .map(|_| {
            if rng.gen_bool(density) {
                nonzero_element(spec, rng)
            } else {
                spec.zero()
            }
        })
        .collect();
    FiniteConfiguration::trimmed(spec, offset, cells)
}

/// Random nonzero configuration of exact diameter `width - 1` starting at `offset`.
pub fn configuration_of_width<R: Rng + ?Sized>(
    spec: &GroupSpec,
    offset: i64,
    width: usize,
    rng: &mut R,
) -> FiniteConfiguration {
    assert!(width >= 1);
    let mut cells: Vec<GroupElement> = (0..width).map(|_| element(spec, rng)).collect();
    cells[0] = nonzero_element(spec, rng);
    cells[width - 1] = nonzero_element(spec, rng);
    FiniteConfiguration::trimmed(spec, offset, cells)
}
