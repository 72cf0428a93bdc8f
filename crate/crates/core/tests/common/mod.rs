//! Independent reference implementations used as test oracles.
//!
//! Nothing here goes through the library's convolution, duality or Fourier
//! code: words are plain residue vectors and the local rule is evaluated cell
//! by cell from the coefficient matrices.

#![allow(dead_code)]

use std::collections::BTreeMap;

use abca_core::spectral::MeasureKind;
use abca_core::{AbelianCA, FiniteConfiguration, GroupSpec};
use abca_core::spectral::MeasureSpec;

pub type Word = Vec<Vec<u64>>;

/// Coefficients as plain integer matrices.
pub fn raw_rule(f: &AbelianCA) -> BTreeMap<i64, Vec<Vec<u64>>> {
    f.coefficients()
        .iter()
        .map(|(&i, h)| (i, h.rows()))
        .collect()
}

fn apply_matrix(m: &[Vec<u64>], x: &[u64], orders: &[u64], acc: &mut [u64]) {
    for (r, row) in m.iter().enumerate() {
        let mut s = acc[r];
        for (a, b) in row.iter().zip(x) {
            s = (s + a * b) % orders[r];
        }
        acc[r] = s;
    }
}

/// One step on a finite word: output cell `z` uses input cells
/// `z + i - lo` for every offset `i`, so the output is shorter by the
/// neighbourhood diameter.
pub fn naive_step(rule: &BTreeMap<i64, Vec<Vec<u64>>>, orders: &[u64], word: &[Vec<u64>]) -> Word {
    if rule.is_empty() {
        return vec![vec![0; orders.len()]; word.len()];
    }
    let lo = *rule.keys().next().unwrap();
    let hi = *rule.keys().next_back().unwrap();
    let d = (hi - lo) as usize;
    let k = orders.len();
    if word.len() <= d {
        return Vec::new();
    }
    (0..word.len() - d)
        .map(|z| {
            let mut acc = vec![0u64; k];
            for (&i, m) in rule {
                apply_matrix(m, &word[z + (i - lo) as usize], orders, &mut acc);
            }
            acc
        })
        .collect()
}

/// Full-line simulation on a dense window `[start, start + len)` that is
/// assumed large enough to contain the orbit.
pub fn naive_orbit_step(
    rule: &BTreeMap<i64, Vec<Vec<u64>>>,
    orders: &[u64],
    start: i64,
    cells: &[Vec<u64>],
) -> (i64, Word) {
    let k = orders.len();
    if rule.is_empty() {
        return (start, vec![vec![0; k]; cells.len()]);
    }
    let lo = *rule.keys().next().unwrap();
    let hi = *rule.keys().next_back().unwrap();
    let new_start = start - hi;
    let new_len = cells.len() + (hi - lo) as usize;
    let get = |z: i64| -> Option<&Vec<u64>> {
        let j = z - start;
        (j >= 0 && (j as usize) < cells.len()).then(|| &cells[j as usize])
    };
    let out = (0..new_len as i64)
        .map(|jj| {
            let z = new_start + jj;
            let mut acc = vec![0u64; k];
            for (&i, m) in rule {
                if let Some(c) = get(z + i) {
                    apply_matrix(m, c, orders, &mut acc);
                }
            }
            acc
        })
        .collect();
    (new_start, out)
}

/// `F^t(x)` by naive simulation, returned as a library configuration for comparison.
pub fn naive_iterate(f: &AbelianCA, x: &FiniteConfiguration, t: u64) -> FiniteConfiguration {
    let rule = raw_rule(f);
    let orders = f.spec().orders().to_vec();
    let Some((a, b)) = x.support_range() else {
        return x.clone();
    };
    let mut start = a;
    let mut cells: Word = (a..=b).map(|z| x.get(z).residues().to_vec()).collect();
    for _ in 0..t {
        (start, cells) = naive_orbit_step(&rule, &orders, start, &cells);
    }
    FiniteConfiguration::from_residues(f.spec(), start, &cells).unwrap()
}

/// Mixed-radix index of a word, first cell and first component most significant.
pub fn word_index(word: &[Vec<u64>], orders: &[u64]) -> usize {
    let mut idx = 0usize;
    for cell in word {
        for (x, &m) in cell.iter().zip(orders) {
            idx = idx * m as usize + *x as usize;
        }
    }
    idx
}

pub fn element_residues(index: usize, orders: &[u64]) -> Vec<u64> {
    let mut rest = index;
    let mut out = vec![0u64; orders.len()];
    for (slot, &m) in out.iter_mut().zip(orders).rev() {
        *slot = (rest % m as usize) as u64;
        rest /= m as usize;
    }
    out
}

/// `(initial distribution, transition)` view of a Bernoulli or Markov measure.
pub fn chain_of(mu: &MeasureSpec) -> (Vec<f64>, Vec<Vec<f64>>) {
    match mu.kind() {
        MeasureKind::Bernoulli { weights } => (weights.clone(), vec![weights.clone(); weights.len()]),
        MeasureKind::Markov {
            transition,
            stationary,
        } => (stationary.clone(), transition.clone()),
    }
}

/// Pushforward of `mu` by `F^t` on a window of `len` cells, by enumerating
/// every input word of length `len + D t`. `None` when that is too many.
pub fn pushforward_enumerate(f: &AbelianCA, mu: &MeasureSpec, len: usize, t: u64, cap: usize) -> Option<Vec<f64>> {
    let rule = raw_rule(f);
    let orders = f.spec().orders().to_vec();
    let g = f.spec().size().unwrap() as usize;
    let d = f.diameter() as usize;
    let input_len = len + d * t as usize;
    let count = g.checked_pow(input_len as u32)?;
    if count > cap {
        return None;
    }
    let (init, trans) = chain_of(mu);
    let mut out = vec![0.0; g.pow(len as u32)];
    for idx in 0..count {
        let mut rest = idx;
        let mut symbols = vec![0usize; input_len];
        for s in symbols.iter_mut().rev() {
            *s = rest % g;
            rest /= g;
        }
        let mut p = init[symbols[0]];
        for w in symbols.windows(2) {
            p *= trans[w[0]][w[1]];
        }
        if p == 0.0 {
            continue;
        }
        let mut word: Word = symbols.iter().map(|&s| element_residues(s, &orders)).collect();
        for _ in 0..t {
            word = naive_step(&rule, &orders, &word);
        }
        out[word_index(&word, &orders)] += p;
    }
    Some(out)
}

/// Same pushforward by dynamic programming over input cells, using that the
/// output word is a sum of per-cell contributions obtained by simulating
/// single-cell seeds.
pub fn pushforward_dp(f: &AbelianCA, mu: &MeasureSpec, len: usize, t: u64) -> Vec<f64> {
    let rule = raw_rule(f);
    let orders = f.spec().orders().to_vec();
    let k = orders.len();
    let g = f.spec().size().unwrap() as usize;
    let d = f.diameter() as usize;
    let input_len = len + d * t as usize;
    let outputs = g.pow(len as u32);

    // contribution[j][s]: output word index produced by symbol s alone at input cell j.
    let contribution: Vec<Vec<Word>> = (0..input_len)
        .map(|j| {
            (0..g)
                .map(|s| {
                    let mut word: Word = vec![vec![0; k]; input_len];
                    word[j] = element_residues(s, &orders);
                    for _ in 0..t {
                        word = naive_step(&rule, &orders, &word);
                    }
                    word
                })
                .collect()
        })
        .collect();
    let add_words = |a: usize, b: &Word| -> usize {
        let mut wa: Word = (0..len)
            .map(|c| element_residues((a / g.pow((len - 1 - c) as u32)) % g, &orders))
            .collect();
        for (ca, cb) in wa.iter_mut().zip(b) {
            for ((x, y), &m) in ca.iter_mut().zip(cb).zip(&orders) {
                *x = (*x + y) % m;
            }
        }
        word_index(&wa, &orders)
    };

    let (init, trans) = chain_of(mu);
    // state[(partial sum, last symbol)]
    let mut state = vec![vec![0.0; g]; outputs];
    for s in 0..g {
        if init[s] > 0.0 {
            let idx = add_words(0, &contribution[0][s]);
            state[idx][s] += init[s];
        }
    }
    for cells in contribution.iter().skip(1) {
        let mut next = vec![vec![0.0; g]; outputs];
        for (sum, row) in state.iter().enumerate() {
            for (last, &p) in row.iter().enumerate() {
                if p == 0.0 {
                    continue;
                }
                for s in 0..g {
                    let q = p * trans[last][s];
                    if q > 0.0 {
                        next[add_words(sum, &cells[s])][s] += q;
                    }
                }
            }
        }
        state = next;
    }
    state.iter().map(|row| row.iter().sum()).collect()
}

/// `|{x : h x = 0}|` by enumeration.
pub fn brute_kernel_size(h: &abca_core::Endomorphism) -> u128 {
    let spec = h.spec();
    spec.elements()
        .unwrap()
        .iter()
        .filter(|a| h.apply(a).unwrap().is_zero())
        .count() as u128
}

/// `|X_{F,n}|` by enumerating all `n`-periodic configurations.
pub fn brute_periodic_fixed(f: &AbelianCA, n: usize) -> u128 {
    let rule = raw_rule(f);
    let orders = f.spec().orders().to_vec();
    let g = f.spec().size().unwrap() as usize;
    let total = g.pow(n as u32);
    let k = orders.len();
    let mut count = 0u128;
    for idx in 0..total {
        let mut rest = idx;
        let cells: Word = (0..n)
            .map(|_| {
                let e = element_residues(rest % g, &orders);
                rest /= g;
                e
            })
            .collect();
        let fixed = (0..n).all(|z| {
            let mut acc = vec![0u64; k];
            for (&i, m) in &rule {
                let src = (z as i64 + i).rem_euclid(n as i64) as usize;
                apply_matrix(m, &cells[src], &orders, &mut acc);
            }
            acc == cells[z]
        });
        if fixed {
            count += 1;
        }
    }
    count
}

/// `Delta_F(t, z)` column by column from simulated single-cell seeds.
pub fn naive_dependency(f: &AbelianCA, t: u64, z: i64) -> Vec<Vec<u64>> {
    let spec: &GroupSpec = f.spec();
    let k = spec.rank();
    let mut cols = Vec::with_capacity(k);
    for l in 0..k {
        let mut e = vec![0u64; k];
        e[l] = 1;
        let x = FiniteConfiguration::from_residues(spec, 0, &[e]).unwrap();
        cols.push(naive_iterate(f, &x, t).get(z).residues().to_vec());
    }
    (0..k).map(|r| (0..k).map(|c| cols[c][r]).collect()).collect()
}

/// Exact phase `sum_z <chi_z, x_z>` as a reduced fraction, computed over the
/// common denominator lcm(orders) with plain integers.
pub fn naive_pairing(orders: &[u64], chi: &FiniteConfiguration, x: &FiniteConfiguration) -> (u64, u64) {
    let l = orders.iter().fold(1u64, |a, &m| a / gcd(a, m) * m);
    let (Some((a, b)), Some((c, d))) = (chi.support_range(), x.support_range()) else {
        return (0, 1);
    };
    let mut num = 0u128;
    for z in a.max(c)..=b.min(d) {
        for ((&u, &v), &m) in chi.get(z).residues().iter().zip(x.get(z).residues()).zip(orders) {
            num += (u as u128 * v as u128 % m as u128) * (l / m) as u128;
        }
    }
    let num = (num % l as u128) as u64;
    let g = gcd(num, l);
    (num / g, l / g)
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `mu[chi]` by summing `chi(u) mu([u])` over every word `u` on the support window.
pub fn naive_fourier(mu: &MeasureSpec, chi: &FiniteConfiguration) -> (f64, f64) {
    let spec = mu.spec();
    let orders = spec.orders().to_vec();
    let Some((a, b)) = chi.support_range() else {
        return (1.0, 0.0);
    };
    let len = (b - a + 1) as usize;
    let g = spec.size().unwrap() as usize;
    let (init, trans) = chain_of(mu);
    let (mut re, mut im) = (0.0, 0.0);
    for idx in 0..g.pow(len as u32) {
        let mut rest = idx;
        let mut symbols = vec![0usize; len];
        for s in symbols.iter_mut().rev() {
            *s = rest % g;
            rest /= g;
        }
        let mut p = init[symbols[0]];
        for w in symbols.windows(2) {
            p *= trans[w[0]][w[1]];
        }
        let cells: Word = symbols.iter().map(|&s| element_residues(s, &orders)).collect();
        let x = FiniteConfiguration::from_residues(spec, a, &cells).unwrap();
        let (num, den) = naive_pairing(&orders, chi, &x);
        let angle = std::f64::consts::TAU * num as f64 / den as f64;
        re += p * angle.cos();
        im += p * angle.sin();
    }
    (re, im)
}
