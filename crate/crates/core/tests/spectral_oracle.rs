mod common;

use abca_core::builtins::{self, builtin};
use abca_core::sample;
use abca_core::spectral::{
    char_compose, cylinder_distribution, distance_to_uniform, elementary_character, evolved_fourier,
    fourier_coefficient, harmonic_mixing_bound, is_nondegenerate, is_strongly_nonuniform,
    min_elementary_modulus, rank_trace, support_difference_subgroup, trivial_character, MeasureSpec,
};
use abca_core::{AbelianCA, FiniteConfiguration, GroupSpec};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_weights<R: Rng>(n: usize, rng: &mut R) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..1.0)).collect();
    let s: f64 = raw.iter().sum();
    raw.iter().map(|w| w / s).collect()
}

fn random_measure<R: Rng>(spec: &GroupSpec, rng: &mut R) -> MeasureSpec {
    let n = spec.size().unwrap() as usize;
    if rng.gen_bool(0.5) {
        MeasureSpec::bernoulli(spec, random_weights(n, rng)).unwrap()
    } else {
        let p = (0..n).map(|_| random_weights(n, rng)).collect();
        MeasureSpec::markov_stationary(spec, p).unwrap()
    }
}

fn oracle(f: &AbelianCA, mu: &MeasureSpec, len: usize, t: u64) -> Vec<f64> {
    common::pushforward_enumerate(f, mu, len, t, 1 << 18)
        .unwrap_or_else(|| common::pushforward_dp(f, mu, len, t))
}

fn assert_close(a: &[f64], b: &[f64], tol: f64) -> Result<(), TestCaseError> {
    prop_assert_eq!(a.len(), b.len());
    for (i, (x, y)) in a.iter().zip(b).enumerate() {
        prop_assert!((x - y).abs() <= tol, "word {}: {} vs {}", i, x, y);
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn cylinders_match_pushforward(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spec = GroupSpec::parse(["2", "3", "4", "2,2"][rng.gen_range(0..4)]).unwrap();
        let f = sample::automaton(&spec, 1, 0.7, &mut rng);
        let mu = random_measure(&spec, &mut rng);
        let len = rng.gen_range(1..=3usize);
        let t = rng.gen_range(0..=6u64);
        let a = rng.gen_range(-3..3);
        let table = cylinder_distribution(&f, &mu, (a, a + len as i64 - 1), t).unwrap();
        assert_close(table.probabilities(), &oracle(&f, &mu, len, t), 1e-9)?;
        prop_assert!(table.max_imag_residue() <= 1e-9);
        let total: f64 = table.probabilities().iter().sum();
        prop_assert!((total - 1.0).abs() <= 1e-9);
        prop_assert!(table.probabilities().iter().all(|&p| p >= 0.0));
    }

    #[test]
    fn fourier_matches_word_sum(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spec = GroupSpec::parse(["2", "3", "4", "2,2", "6"][rng.gen_range(0..5)]).unwrap();
        let mu = random_measure(&spec, &mut rng);
        let chi = sample::configuration(&spec, rng.gen_range(-3..3), rng.gen_range(0..5), 0.7, &mut rng);
        let c = fourier_coefficient(&mu, &chi).unwrap();
        let (re, im) = common::naive_fourier(&mu, &chi);
        prop_assert!((c.re - re).abs() < 1e-12 && (c.im - im).abs() < 1e-12, "{} vs {}+{}i", c, re, im);
    }

    #[test]
    fn harmonic_mixing_inequality(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spec = GroupSpec::parse(["2", "3", "4", "2,2", "2,4", "9"][rng.gen_range(0..6)]).unwrap();
        let n = spec.size().unwrap() as usize;
        let mu = MeasureSpec::bernoulli(&spec, random_weights(n, &mut rng)).unwrap();
        let m = harmonic_mixing_bound(&mu).unwrap();
        prop_assert!(m < 1.0);
        let chi = sample::configuration(&spec, 0, rng.gen_range(0..9), 0.6, &mut rng);
        let c = fourier_coefficient(&mu, &chi).unwrap();
        prop_assert!(c.norm() <= m.powi(chi.rank() as i32) + 1e-12);
    }

    #[test]
    fn evolved_coefficient_is_the_composed_coefficient(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spec = GroupSpec::parse(["2", "4", "2,2"][rng.gen_range(0..3)]).unwrap();
        let f = sample::automaton(&spec, 1, 0.7, &mut rng);
        let mu = random_measure(&spec, &mut rng);
        let chi = sample::configuration(&spec, 0, rng.gen_range(1..3), 0.8, &mut rng);
        let t = rng.gen_range(0..4u64);
        let c = evolved_fourier(&f, &mu, &chi, t).unwrap();
        // Integrate chi over the pushforward measure on the support window.
        let Some((a, b)) = chi.support_range() else { return Ok(()); };
        let len = (b - a + 1) as usize;
        let probs = oracle(&f, &mu, len, t);
        let orders = spec.orders().to_vec();
        let g = spec.size().unwrap() as usize;
        let (mut re, mut im) = (0.0, 0.0);
        for (idx, p) in probs.iter().enumerate() {
            let cells: Vec<Vec<u64>> = (0..len)
                .map(|c| common::element_residues(idx / g.pow((len - 1 - c) as u32) % g, &orders))
                .collect();
            let x = FiniteConfiguration::from_residues(&spec, a, &cells).unwrap();
            let (num, den) = common::naive_pairing(&orders, &chi, &x);
            let angle = std::f64::consts::TAU * num as f64 / den as f64;
            re += p * angle.cos();
            im += p * angle.sin();
        }
        prop_assert!((c.re - re).abs() < 1e-9 && (c.im - im).abs() < 1e-9);
    }
}

#[test]
fn measure_examples() {
    let z2 = GroupSpec::cyclic(2).unwrap();
    let mu = MeasureSpec::bernoulli(&z2, vec![0.95, 0.05]).unwrap();
    let chi1 = elementary_character(&z2, 0, z2.element(vec![1]).unwrap()).unwrap();
    assert!((fourier_coefficient(&mu, &chi1).unwrap().re - 0.9).abs() < 1e-12);
    assert_eq!(fourier_coefficient(&mu, &trivial_character(&z2)).unwrap().re, 1.0);
    assert!((harmonic_mixing_bound(&mu).unwrap() - 0.9).abs() < 1e-12);
    let lambda = MeasureSpec::uniform(&z2).unwrap();
    assert!(harmonic_mixing_bound(&lambda).unwrap() < 1e-15);
    let degenerate = MeasureSpec::bernoulli(&z2, vec![1.0, 0.0]).unwrap();
    assert_eq!(harmonic_mixing_bound(&degenerate).unwrap(), 1.0);

    let add2 = builtins::add2();
    let table = cylinder_distribution(&add2, &mu, (0, 0), 1).unwrap();
    assert!((table.probabilities()[0] - 0.905).abs() < 1e-12);
    assert!((distance_to_uniform(&add2, &mu, 1, 0).unwrap() - 0.405).abs() < 1e-12);
    assert!(distance_to_uniform(&add2, &lambda, 5, 2).unwrap() < 1e-12);
    let e1 = evolved_fourier(&add2, &mu, &chi1, 1).unwrap();
    let e3 = evolved_fourier(&add2, &mu, &chi1, 3).unwrap();
    assert!((e1.re - 0.81).abs() < 1e-12 && (e3.re - 0.6561).abs() < 1e-12);

    let t0 = cylinder_distribution(&add2, &mu, (0, 1), 0).unwrap();
    let expected = [0.95 * 0.95, 0.95 * 0.05, 0.05 * 0.95, 0.05 * 0.05];
    for (p, q) in t0.probabilities().iter().zip(expected) {
        assert!((p - q).abs() < 1e-12);
    }
}

#[test]
fn uniform_measure_is_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for name in ["add2", "F2", "H2", "IG:3"] {
        let f = builtin(name).unwrap();
        let lambda = MeasureSpec::uniform(f.spec()).unwrap();
        for t in 0..4 {
            let table = cylinder_distribution(&f, &lambda, (0, 1), t).unwrap();
            assert!(table.max_deviation_from_uniform() < 1e-12, "{name} t={t}");
            let chi = sample::configuration_of_width(f.spec(), 0, 2, &mut rng);
            assert!(evolved_fourier(&f, &lambda, &chi, t).unwrap().norm() < 1e-12);
        }
    }
}

#[test]
fn nonuniformity_predicates() {
    let v = GroupSpec::parse("2,2").unwrap();
    let one_off = MeasureSpec::bernoulli(&v, vec![0.4, 0.2, 0.2, 0.2]).unwrap();
    assert!(is_strongly_nonuniform(&one_off).unwrap());
    // (0.7, 0.3) on the first factor times uniform on the second.
    let product = MeasureSpec::bernoulli(&v, vec![0.35, 0.35, 0.15, 0.15]).unwrap();
    assert!(!is_strongly_nonuniform(&product).unwrap());
    assert!(!is_strongly_nonuniform(&MeasureSpec::uniform(&v).unwrap()).unwrap());

    assert!(is_nondegenerate(&one_off).unwrap());
    assert!(is_nondegenerate(&MeasureSpec::uniform(&v).unwrap()).unwrap());
    let sub = MeasureSpec::bernoulli(&v, vec![0.5, 0.0, 0.5, 0.0]).unwrap();
    assert!(!is_nondegenerate(&sub).unwrap());

    let markov = MeasureSpec::markov_stationary(&GroupSpec::cyclic(2).unwrap(), vec![vec![0.9, 0.1], vec![0.3, 0.7]]).unwrap();
    assert!(harmonic_mixing_bound(&markov).is_err());
    assert!(is_nondegenerate(&markov).is_err());
}

#[test]
fn nondegeneracy_agrees_with_support_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for text in ["2,2", "4", "2,4", "6", "3,3"] {
        let spec = GroupSpec::parse(text).unwrap();
        let n = spec.size().unwrap() as usize;
        for _ in 0..40 {
            let mut w: Vec<f64> = (0..n).map(|_| if rng.gen_bool(0.4) { rng.gen_range(0.1..1.0) } else { 0.0 }).collect();
            if w.iter().all(|&x| x == 0.0) {
                w[rng.gen_range(0..n)] = 1.0;
            }
            let s: f64 = w.iter().sum();
            let mu = MeasureSpec::bernoulli(&spec, w.iter().map(|x| x / s).collect()).unwrap();
            let full = support_difference_subgroup(&mu).order() == Some(n as u128);
            assert_eq!(is_nondegenerate(&mu).unwrap(), full, "{text} {w:?}");
            if full {
                assert!(harmonic_mixing_bound(&mu).unwrap() < 1.0 - 1e-12);
            } else {
                assert!((harmonic_mixing_bound(&mu).unwrap() - 1.0).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn add2_coefficient_law() {
    let z2 = GroupSpec::cyclic(2).unwrap();
    let mu = MeasureSpec::bernoulli(&z2, vec![0.95, 0.05]).unwrap();
    let f = builtins::add2();
    let chi1 = elementary_character(&z2, 0, z2.element(vec![1]).unwrap()).unwrap();
    let mut cur = chi1.clone();
    let dual = f.dual();
    for t in 0..=128u32 {
        let c = fourier_coefficient(&mu, &cur).unwrap();
        let expected = 0.9f64.powi(1 << t.count_ones());
        assert!((c.norm() - expected).abs() < 1e-12, "t={t}");
        cur = dual.apply(&cur).unwrap();
    }
}

#[test]
fn ig_rank_lower_bound() {
    for base in ["2", "3", "2,2"] {
        let f = builtin(&format!("IG:{base}")).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..5 {
            let chi = sample::configuration_of_width(f.spec(), 0, 1, &mut rng);
            let trace = rank_trace(&f, &chi, 40).unwrap();
            for (t, r) in trace.ranks().iter().enumerate().skip(1) {
                assert!(*r >= 2 * t - 1, "IG:{base} t={t} rank={r}");
            }
        }
    }
}

#[test]
fn ig2_eta_stays_small() {
    let f = builtin("IGn:2:2").unwrap();
    let spec = f.spec().clone();
    let eta = FiniteConfiguration::from_residues(&spec, 0, &[vec![1, 0], vec![0, 0], vec![0, 1]]).unwrap();
    let ranks = rank_trace(&f, &eta, 200).unwrap().ranks();
    assert!(ranks.iter().all(|&r| r <= 2));
    assert_eq!(char_compose(&f, &eta, 1).unwrap(), eta.shifted(2));
}

#[test]
fn soliton_obstruction() {
    // The H2 soliton word is a soliton of the dual as well (H2 is self-dual).
    let f = builtin("H2").unwrap();
    let v = f.spec().clone();
    let chi = FiniteConfiguration::from_residues(&v, 0, &[vec![0, 1], vec![1, 0]]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..10 {
        let mu = MeasureSpec::bernoulli(&v, random_weights(4, &mut rng)).unwrap();
        if !is_strongly_nonuniform(&mu).unwrap() {
            continue;
        }
        let eps = min_elementary_modulus(&mu).unwrap();
        let trace = rank_trace(&f, &chi, 100).unwrap();
        let m = *trace.ranks().iter().max().unwrap();
        assert_eq!(m, 2);
        for t in 0..=100 {
            let c = evolved_fourier(&f, &mu, &chi, t).unwrap();
            assert!(c.norm() >= eps.powi(m as i32) - 1e-12, "t={t}");
        }
    }
}

#[test]
fn window_cap_is_enforced() {
    let f = builtin("H2").unwrap();
    let mu = MeasureSpec::uniform(f.spec()).unwrap();
    assert!(cylinder_distribution(&f, &mu, (0, 10), 1).is_err());
    assert!(cylinder_distribution(&f, &mu, (3, 2), 1).is_err());
}
