//! Named automata.
//!
//! | name | alphabet | rule |
//! |------|----------|------|
//! | `add2` | `Z_2` | `x_z + x_{z+1}` |
//! | `F2`, `Fp:<p>` | `Z_p^2` | `(x_z^2 + x_{z+1}^1, x_z^1)` |
//! | `Fp_inv:<p>` | `Z_p^2` | inverse of `Fp:<p>` |
//! | `Gp:<p>` | `Z_p^2` | `(x_z^1 + x_z^2 + x_{z+1}^1, x_z^1)` |
//! | `H2`, `IG:<orders>` | `G^2` | `(-x_{z-1}^1 - x_{z+1}^1 - x_z^2, x_z^1)` |
//! | `IGn:<orders>:<n>` | `G^2` | as `IG` with neighbours at `z -+ n` |
//! | `sec4` | `Z_2^2` | `A x_z + B x_{z+1}` with a rank-one fixed cell |
//! | `sec4_dual` | `Z_2^2` | dual of `sec4` |
//! | `improperZ4` | `Z_4` | `2 x_z + x_{z+1}` |
//! | `bipermutive` | `Z_2^2` | `A x_z + A^T x_{z+1}`, `A = [[1,1],[0,1]]` |
//! | `identity:<orders>` | any | `x_z` |
//! | `shift:<orders>:<q>` | any | `x_{z+q}` |
//!
//! Superscripts denote components.

use crate::ca::AbelianCA;
use crate::error::{Error, Result};
use crate::group::{is_prime, GroupSpec};

/// Every accepted name pattern, for help texts.
pub const NAMES: &[&str] = &[
    "add2",
    "F2",
    "H2",
    "Fp:<p>",
    "Fp_inv:<p>",
    "Gp:<p>",
    "IG:<orders>",
    "IGn:<orders>:<n>",
    "sec4",
    "sec4_dual",
    "improperZ4",
    "bipermutive",
    "identity:<orders>",
    "shift:<orders>:<q>",
];

pub fn builtin(name: &str) -> Result<AbelianCA> {
    let (head, rest) = match name.split_once(':') {
        Some((h, r)) => (h, Some(r)),
        None => (name, None),
    };
    match (head, rest) {
        ("add2", None) => Ok(add2()),
        ("F2", None) => fp(2),
        ("H2", None) => ig(&GroupSpec::cyclic(2)?, 1),
        ("Fp", Some(p)) => fp(parse_prime(p)?),
        ("Fp_inv", Some(p)) => fp_inv(parse_prime(p)?),
        ("Gp", Some(p)) => gp(parse_prime(p)?),
        ("IG", Some(orders)) => ig(&GroupSpec::parse(orders)?, 1),
        ("IGn", Some(rest)) => {
            let (orders, n) = rest
                .rsplit_once(':')
                .ok_or_else(|| Error::Parse(format!("expected IGn:<orders>:<n>, got `{name}`")))?;
            let n: i64 = parse_int(n)?;
            if n < 1 {
                return Err(Error::Parse(format!("IGn distance must be positive, got {n}")));
            }
            ig(&GroupSpec::parse(orders)?, n)
        }
        ("sec4", None) => Ok(sec4()),
        ("sec4_dual", None) => Ok(sec4().dual()),
        ("improperZ4", None) => Ok(improper_z4()),
        ("bipermutive", None) => Ok(bipermutive_example()),
        ("identity", Some(orders)) => Ok(AbelianCA::identity(&GroupSpec::parse(orders)?)),
        ("shift", Some(rest)) => {
            let (orders, q) = rest
                .rsplit_once(':')
                .ok_or_else(|| Error::Parse(format!("expected shift:<orders>:<q>, got `{name}`")))?;
            Ok(AbelianCA::shift(&GroupSpec::parse(orders)?, parse_int(q)?))
        }
        _ => Err(Error::Parse(format!(
            "unknown automaton `{name}`; known: {}",
            NAMES.join(", ")
        ))),
    }
}

fn parse_int(text: &str) -> Result<i64> {
    text.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad integer `{text}`")))
}

fn parse_prime(text: &str) -> Result<u64> {
    let p = parse_int(text)?;
    if p < 2 || !is_prime(p as u64) {
        return Err(Error::Parse(format!("`{text}` is not a prime")));
    }
    Ok(p as u64)
}

fn pair(p: u64) -> GroupSpec {
    GroupSpec::new(vec![p, p]).expect("valid prime")
}

/// `x_z + x_{z+1}` over `Z_2`.
pub fn add2() -> AbelianCA {
    AbelianCA::from_scalars(&GroupSpec::cyclic(2).unwrap(), &[(0, 1), (1, 1)])
}

pub fn fp(p: u64) -> Result<AbelianCA> {
    AbelianCA::from_matrices(
        &pair(p),
        &[
            (0, vec![vec![0, 1], vec![1, 0]]),
            (1, vec![vec![1, 0], vec![0, 0]]),
        ],
    )
}

pub fn fp_inv(p: u64) -> Result<AbelianCA> {
    AbelianCA::from_matrices(
        &pair(p),
        &[
            (0, vec![vec![0, 1], vec![1, 0]]),
            (1, vec![vec![0, 0], vec![0, -1]]),
        ],
    )
}

pub fn gp(p: u64) -> Result<AbelianCA> {
    AbelianCA::from_matrices(
        &pair(p),
        &[
            (0, vec![vec![1, 1], vec![1, 0]]),
            (1, vec![vec![1, 0], vec![0, 0]]),
        ],
    )
}

/// `I_{G,n}` on `G x G`.
pub fn ig(base: &GroupSpec, n: i64) -> Result<AbelianCA> {
    let k = base.rank();
    let spec = base.product(base);
    let mut outer = vec![vec![0i64; 2 * k]; 2 * k];
    let mut centre = vec![vec![0i64; 2 * k]; 2 * k];
    for i in 0..k {
        outer[i][i] = -1;
        centre[i][k + i] = -1;
        centre[k + i][i] = 1;
    }
    AbelianCA::from_matrices(&spec, &[(-n, outer.clone()), (0, centre), (n, outer)])
}

/// `A x_z + B x_{z+1}` with `A = [[1,1],[0,1]]`, `B = [[0,0],[0,1]]`; it fixes
/// every configuration whose second components vanish.
pub fn sec4() -> AbelianCA {
    AbelianCA::from_matrices(
        &pair(2),
        &[
            (0, vec![vec![1, 1], vec![0, 1]]),
            (1, vec![vec![0, 0], vec![0, 1]]),
        ],
    )
    .unwrap()
}

pub fn improper_z4() -> AbelianCA {
    AbelianCA::from_scalars(&GroupSpec::cyclic(4).unwrap(), &[(0, 2), (1, 1)])
}

pub fn bipermutive_example() -> AbelianCA {
    AbelianCA::from_matrices(
        &pair(2),
        &[
            (0, vec![vec![1, 1], vec![0, 1]]),
            (1, vec![vec![1, 0], vec![1, 1]]),
        ],
    )
    .unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_listed_family_parses() {
        for name in [
            "add2",
            "F2",
            "H2",
            "Fp:3",
            "Fp_inv:5",
            "Gp:2",
            "IG:2",
            "IG:3,3",
            "IGn:2:2",
            "sec4",
            "sec4_dual",
            "improperZ4",
            "bipermutive",
            "identity:2,4",
            "shift:3:-2",
        ] {
            builtin(name).unwrap_or_else(|e| panic!("{name}: {e}"));
        }
    }

    #[test]
    fn bad_names_are_parse_errors() {
        for name in ["nope", "Fp:4", "Fp:x", "IGn:2", "IGn:2:0", "IG:1", "Fp"] {
            assert!(matches!(builtin(name), Err(Error::Parse(_) | Error::InvalidGroup(_))), "{name}");
        }
    }

    #[test]
    fn aliases() {
        assert_eq!(builtin("F2").unwrap(), builtin("Fp:2").unwrap());
        assert_eq!(builtin("H2").unwrap(), builtin("IG:2").unwrap());
        assert_eq!(builtin("IGn:2:1").unwrap(), builtin("H2").unwrap());
    }

    #[test]
    fn fp_inverse_really_inverts() {
        for p in [2, 3, 5, 7] {
            let f = fp(p).unwrap();
            let g = fp_inv(p).unwrap();
            let id = AbelianCA::identity(f.spec());
            assert_eq!(f.compose(&g).unwrap(), id);
            assert_eq!(g.compose(&f).unwrap(), id);
        }
    }

    #[test]
    fn f2_on_single_cell() {
        use crate::ca::FiniteConfiguration;
        let f = fp(2).unwrap();
        let spec = f.spec().clone();
        let x = FiniteConfiguration::from_residues(&spec, 0, &[vec![1, 0]]).unwrap();
        let y = f.apply(&x).unwrap();
        let expected =
            FiniteConfiguration::from_residues(&spec, -1, &[vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(y, expected);
    }
}
