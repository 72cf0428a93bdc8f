//! Finite abelian groups presented as products of cyclic groups.
//!
//! A [`GroupSpec`] is `Z_{m_1} x ... x Z_{m_k}`. Elements are residue vectors,
//! endomorphisms are `k x k` integer matrices whose entry `(i, j)` is a map
//! `Z_{m_j} -> Z_{m_i}`, which forces `m_i | a_ij * m_j`.
//!
//! Characters are never a separate type: the element `a` stands for the
//! character `b -> exp(2 pi i * sum_j a_j b_j / m_j)`, see [`char_eval`].

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::modular::{self, ModularMatrix};

/// Largest cyclic factor order accepted.
pub const MAX_ORDER: u64 = 1 << 32;
/// Largest group for which [`subgroups`] enumerates.
pub const SUBGROUP_CAP: u64 = 4096;
/// Largest group whose elements may be listed.
pub const ENUMERATION_CAP: u64 = 1 << 20;

/// Product of cyclic groups `Z_{m_1} x ... x Z_{m_k}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupSpec {
    orders: Arc<[u64]>,
}

impl GroupSpec {
    pub fn new(orders: Vec<u64>) -> Result<Self> {
        if orders.is_empty() {
            return Err(Error::InvalidGroup("no cyclic factors".into()));
        }
        for &m in &orders {
            if !(2..=MAX_ORDER).contains(&m) {
                return Err(Error::InvalidGroup(format!(
                    "factor order {m} outside [2, {MAX_ORDER}]"
                )));
            }
        }
        let mut lcm: u128 = 1;
        for &m in &orders {
            lcm = lcm / gcd_u128(lcm, m as u128) * m as u128;
            if lcm > (1u128 << 63) {
                return Err(Error::InvalidGroup("group exponent exceeds 2^63".into()));
            }
        }
        if orders
            .iter()
            .try_fold(1u128, |acc, &m| acc.checked_mul(m as u128))
            .is_none()
        {
            return Err(Error::InvalidGroup("group order exceeds 128 bits".into()));
        }
        Ok(Self {
            orders: orders.into(),
        })
    }

    pub fn cyclic(m: u64) -> Result<Self> {
        Self::new(vec![m])
    }

    /// Parses the textual form `"2,2"`.
    pub fn parse(text: &str) -> Result<Self> {
        let orders = text
            .split(',')
            .map(|part| {
                part.trim()
                    .parse::<u64>()
                    .map_err(|_| Error::Parse(format!("bad group order `{part}` in `{text}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(orders)
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    /// Number of cyclic factors.
    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    /// Group order, if it fits in 64 bits.
    pub fn size(&self) -> Option<u64> {
        self.orders
            .iter()
            .try_fold(1u64, |acc, &m| acc.checked_mul(m))
    }

    pub fn size_checked(&self, cap: u64, what: &str) -> Result<u64> {
        match self.size() {
            Some(n) if n <= cap => Ok(n),
            _ => Err(Error::CapacityExceeded(format!(
                "{what}: |G| for ({self}) exceeds {cap}"
            ))),
        }
    }

    /// Least common multiple of the factor orders.
    pub fn exponent(&self) -> u64 {
        self.orders
            .iter()
            .fold(1u64, |acc, &m| acc / gcd(acc, m) * m)
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement(vec![0; self.rank()])
    }

    pub fn product(&self, other: &GroupSpec) -> GroupSpec {
        let mut orders = self.orders.to_vec();
        orders.extend_from_slice(&other.orders);
        GroupSpec::new(orders).expect("product of valid groups")
    }

    /// `k`-fold power `G^k`.
    pub fn power(&self, k: usize) -> Result<GroupSpec> {
        let mut orders = Vec::with_capacity(self.rank() * k);
        for _ in 0..k {
            orders.extend_from_slice(&self.orders);
        }
        GroupSpec::new(orders)
    }

    /// Builds an element, rejecting residues out of range.
    pub fn element(&self, residues: Vec<u64>) -> Result<GroupElement> {
        let e = GroupElement(residues);
        self.check(&e)?;
        Ok(e)
    }

    /// Builds an element from arbitrary integers, reducing each residue.
    pub fn reduce(&self, values: &[i64]) -> Result<GroupElement> {
        if values.len() != self.rank() {
            return Err(Error::InvalidElement(format!(
                "expected {} residues, got {}",
                self.rank(),
                values.len()
            )));
        }
        Ok(GroupElement(
            values
                .iter()
                .zip(self.orders.iter())
                .map(|(&v, &m)| v.rem_euclid(m as i64) as u64)
                .collect(),
        ))
    }

    pub fn contains(&self, a: &GroupElement) -> bool {
        a.0.len() == self.rank() && a.0.iter().zip(self.orders.iter()).all(|(&x, &m)| x < m)
    }

    pub fn check(&self, a: &GroupElement) -> Result<()> {
        if self.contains(a) {
            Ok(())
        } else {
            Err(Error::SpecMismatch {
                expected: self.to_string(),
                found: format!("element {a}"),
            })
        }
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.add_unchecked(a, b))
    }

    pub(crate) fn add_unchecked(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        GroupElement(
            a.0.iter()
                .zip(&b.0)
                .zip(self.orders.iter())
                .map(|((&x, &y), &m)| add_mod(x, y, m))
                .collect(),
        )
    }

    pub fn neg(&self, a: &GroupElement) -> GroupElement {
        GroupElement(
            a.0.iter()
                .zip(self.orders.iter())
                .map(|(&x, &m)| if x == 0 { 0 } else { m - x })
                .collect(),
        )
    }

    pub fn sub(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.add(a, &self.neg(b))
    }

    /// `n * a`.
    pub fn scale(&self, n: i64, a: &GroupElement) -> GroupElement {
        GroupElement(
            a.0.iter()
                .zip(self.orders.iter())
                .map(|(&x, &m)| mul_mod(n.rem_euclid(m as i64) as u64, x, m))
                .collect(),
        )
    }

    /// Order of an element.
    pub fn element_order(&self, a: &GroupElement) -> u64 {
        a.0.iter()
            .zip(self.orders.iter())
            .fold(1u64, |acc, (&x, &m)| {
                let o = m / gcd(x, m);
                acc / gcd(acc, o) * o
            })
    }

    /// Mixed-radix index, first factor most significant (lexicographic).
    pub fn index_of(&self, a: &GroupElement) -> u64 {
        a.0.iter()
            .zip(self.orders.iter())
            .fold(0u64, |acc, (&x, &m)| acc.wrapping_mul(m).wrapping_add(x))
    }

    pub fn element_at(&self, mut index: u64) -> GroupElement {
        let mut residues = vec![0; self.rank()];
        for (slot, &m) in residues.iter_mut().zip(self.orders.iter()).rev() {
            *slot = index % m;
            index /= m;
        }
        GroupElement(residues)
    }

    /// All elements in lexicographic order.
    pub fn elements(&self) -> Result<Vec<GroupElement>> {
        let n = self.size_checked(ENUMERATION_CAP, "element listing")?;
        Ok((0..n).map(|i| self.element_at(i)).collect())
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.orders.iter().map(|m| m.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

impl fmt::Debug for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupSpec({self})")
    }
}

/// Residue vector of an element; residue `i` lies in `[0, m_i)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement(pub(crate) Vec<u64>);

impl GroupElement {
    pub fn residues(&self) -> &[u64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|m| m.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Endomorphism of a [`GroupSpec`] as a reduced integer matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Endomorphism {
    spec: GroupSpec,
    entries: Vec<u64>,
}

impl Endomorphism {
    /// Builds from integer rows; entry `(i, j)` is reduced modulo `m_i` and
    /// must satisfy `m_i | a_ij * m_j`.
    pub fn new(spec: &GroupSpec, rows: &[Vec<i64>]) -> Result<Self> {
        let k = spec.rank();
        if rows.len() != k || rows.iter().any(|r| r.len() != k) {
            return Err(Error::InvalidEndomorphism(format!(
                "expected a {k}x{k} matrix for ({spec})"
            )));
        }
        let mut entries = Vec::with_capacity(k * k);
        for (i, row) in rows.iter().enumerate() {
            let mi = spec.orders[i];
            for (j, &v) in row.iter().enumerate() {
                let mj = spec.orders[j];
                let a = v.rem_euclid(mi as i64) as u64;
                if (a as u128 * mj as u128) % mi as u128 != 0 {
                    return Err(Error::InvalidEndomorphism(format!(
                        "entry ({i},{j}) = {v} is not a homomorphism Z_{mj} -> Z_{mi}"
                    )));
                }
                entries.push(a);
            }
        }
        Ok(Self {
            spec: spec.clone(),
            entries,
        })
    }

    pub(crate) fn from_reduced(spec: &GroupSpec, entries: Vec<u64>) -> Self {
        debug_assert_eq!(entries.len(), spec.rank() * spec.rank());
        Self {
            spec: spec.clone(),
            entries,
        }
    }

    pub fn identity(spec: &GroupSpec) -> Self {
        Self::scalar(spec, 1)
    }

    pub fn zero(spec: &GroupSpec) -> Self {
        Self::from_reduced(spec, vec![0; spec.rank() * spec.rank()])
    }

    /// Multiplication by an integer.
    pub fn scalar(spec: &GroupSpec, n: i64) -> Self {
        let k = spec.rank();
        let mut entries = vec![0; k * k];
        for i in 0..k {
            let m = spec.orders[i];
            entries[i * k + i] = n.rem_euclid(m as i64) as u64;
        }
        Self::from_reduced(spec, entries)
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn entry(&self, i: usize, j: usize) -> u64 {
        self.entries[i * self.spec.rank() + j]
    }

    pub fn rows(&self) -> Vec<Vec<u64>> {
        self.entries
            .chunks(self.spec.rank().max(1))
            .map(|r| r.to_vec())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&x| x == 0)
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

    pub fn apply(&self, a: &GroupElement) -> Result<GroupElement> {
        self.spec.check(a)?;
        let mut out = vec![0; self.spec.rank()];
        self.apply_add_into(&a.0, &mut out);
        Ok(GroupElement(out))
    }

    /// `acc += self(a)` on raw residue slices.
    pub(crate) fn apply_add_into(&self, a: &[u64], acc: &mut [u64]) {
        let k = self.spec.rank();
        for i in 0..k {
            let m = self.spec.orders[i];
            let row = &self.entries[i * k..(i + 1) * k];
            let mut s = acc[i] as u128;
            for (&e, &x) in row.iter().zip(a) {
                if e != 0 && x != 0 {
                    s += e as u128 * x as u128;
                }
            }
            acc[i] = (s % m as u128) as u64;
        }
    }

    /// Matrix product `self . other`, i.e. the map `x -> self(other(x))`.
    pub fn compose(&self, other: &Endomorphism) -> Result<Endomorphism> {
        self.check_spec(&other.spec)?;
        Ok(self.compose_unchecked(other))
    }

    pub(crate) fn compose_unchecked(&self, other: &Endomorphism) -> Endomorphism {
        let k = self.spec.rank();
        let mut entries = vec![0u64; k * k];
        for i in 0..k {
            let m = self.spec.orders[i] as u128;
            for j in 0..k {
                let mut s: u128 = 0;
                for l in 0..k {
                    let a = self.entries[i * k + l];
                    let b = other.entries[l * k + j];
                    if a != 0 && b != 0 {
                        s = (s + a as u128 * b as u128) % m;
                    }
                }
                entries[i * k + j] = s as u64;
            }
        }
        Endomorphism::from_reduced(&self.spec, entries)
    }

    pub fn add(&self, other: &Endomorphism) -> Result<Endomorphism> {
        self.check_spec(&other.spec)?;
        Ok(self.add_unchecked(other))
    }

    pub(crate) fn add_unchecked(&self, other: &Endomorphism) -> Endomorphism {
        let k = self.spec.rank();
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .enumerate()
            .map(|(idx, (&a, &b))| add_mod(a, b, self.spec.orders[idx / k]))
            .collect();
        Endomorphism::from_reduced(&self.spec, entries)
    }

    pub fn neg(&self) -> Endomorphism {
        let k = self.spec.rank();
        let entries = self
            .entries
            .iter()
            .enumerate()
            .map(|(idx, &a)| {
                let m = self.spec.orders[idx / k];
                if a == 0 {
                    0
                } else {
                    m - a
                }
            })
            .collect();
        Endomorphism::from_reduced(&self.spec, entries)
    }

    pub fn sub(&self, other: &Endomorphism) -> Result<Endomorphism> {
        self.add(&other.neg())
    }

    /// Adjoint under the pairing of [`char_eval`]:
    /// `(dual)_{ji} = a_ij * m_j / m_i  (mod m_j)`.
    pub fn dual(&self) -> Endomorphism {
        let k = self.spec.rank();
        let orders = &self.spec.orders;
        let mut entries = vec![0u64; k * k];
        for i in 0..k {
            for j in 0..k {
                let a = self.entries[i * k + j] as u128;
                let v = a * orders[j] as u128 / orders[i] as u128;
                entries[j * k + i] = (v % orders[j] as u128) as u64;
            }
        }
        Endomorphism::from_reduced(&self.spec, entries)
    }

    pub fn commutes_with(&self, other: &Endomorphism) -> bool {
        self.spec == other.spec && self.compose_unchecked(other) == other.compose_unchecked(self)
    }

    pub(crate) fn as_modular_matrix(&self) -> ModularMatrix {
        ModularMatrix::from_reduced(
            self.spec.orders.to_vec(),
            self.spec.orders.to_vec(),
            self.entries.clone(),
        )
    }

    /// `|ker h|`, via triangularisation of `[h | diag(orders)]`.
    pub fn kernel_size(&self) -> u128 {
        self.as_modular_matrix()
            .cokernel_order()
            .expect("cokernel of an endomorphism is bounded by |G|")
    }

    pub fn is_bijective(&self) -> bool {
        self.kernel_size() == 1
    }
}

impl fmt::Display for Endomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows()
            .iter()
            .map(|r| {
                let cells: Vec<String> = r.iter().map(|x| x.to_string()).collect();
                format!("[{}]", cells.join(","))
            })
            .collect();
        write!(f, "[{}]", rows.join(","))
    }
}

impl fmt::Debug for Endomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Endo({}; {self})", self.spec)
    }
}

/// Exact character value `exp(2 pi i * numerator / denominator)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct PhaseValue {
    numerator: u64,
    denominator: u64,
}

impl PhaseValue {
    pub const ZERO: PhaseValue = PhaseValue {
        numerator: 0,
        denominator: 1,
    };

    /// Reduces `numerator / denominator` modulo 1.
    pub fn new(numerator: u64, denominator: u64) -> Self {
        assert!(denominator > 0, "phase denominator must be positive");
        let n = numerator % denominator;
        let g = gcd(n, denominator);
        Self {
            numerator: n / g,
            denominator: denominator / g,
        }
    }

    pub fn numerator(&self) -> u64 {
        self.numerator
    }

    pub fn denominator(&self) -> u64 {
        self.denominator
    }

    pub fn is_zero(&self) -> bool {
        self.numerator == 0
    }

    pub fn add(self, other: PhaseValue) -> PhaseValue {
        let d = self.denominator / gcd(self.denominator, other.denominator) * other.denominator;
        let a = self.numerator as u128 * (d / self.denominator) as u128;
        let b = other.numerator as u128 * (d / other.denominator) as u128;
        PhaseValue::new(((a + b) % d as u128) as u64, d)
    }

    pub fn neg(self) -> PhaseValue {
        PhaseValue::new(self.denominator - self.numerator, self.denominator)
    }

    pub fn to_complex(self) -> Complex64 {
        let angle = std::f64::consts::TAU * self.numerator as f64 / self.denominator as f64;
        Complex64::from_polar(1.0, angle)
    }
}

impl fmt::Display for PhaseValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numerator, self.denominator)
    }
}

/// Value of the character `a` at `b`: phase `sum_j a_j b_j / m_j mod 1`.
pub fn char_eval(spec: &GroupSpec, a: &GroupElement, b: &GroupElement) -> Result<PhaseValue> {
    spec.check(a)?;
    spec.check(b)?;
    Ok(char_eval_unchecked(spec, &a.0, &b.0))
}

pub(crate) fn char_eval_unchecked(spec: &GroupSpec, a: &[u64], b: &[u64]) -> PhaseValue {
    let l = spec.exponent() as u128;
    let mut acc: u128 = 0;
    for ((&x, &y), &m) in a.iter().zip(b).zip(spec.orders.iter()) {
        if x == 0 || y == 0 {
            continue;
        }
        let prod = (x as u128 * y as u128) % m as u128;
        acc = (acc + prod * (l / m as u128)) % l;
    }
    PhaseValue::new(acc as u64, l as u64)
}

/// All subgroups, each as a sorted element list, ordered by size then content.
pub fn subgroups(spec: &GroupSpec) -> Result<Vec<Vec<GroupElement>>> {
    let n = spec.size_checked(SUBGROUP_CAP, "subgroup enumeration")? as usize;
    let elems: Vec<GroupElement> = (0..n as u64).map(|i| spec.element_at(i)).collect();
    let words = n.div_ceil(64);

    let set_of = |members: &[usize]| {
        let mut bits = vec![0u64; words];
        for &i in members {
            bits[i / 64] |= 1 << (i % 64);
        }
        bits
    };
    let members_of = |bits: &[u64]| -> Vec<usize> {
        (0..n).filter(|&i| bits[i / 64] >> (i % 64) & 1 == 1).collect()
    };

    // Distinct cyclic subgroups.
    let mut cyclic: Vec<Vec<usize>> = Vec::new();
    let mut cyclic_seen = BTreeSet::new();
    for g in &elems {
        let mut members = Vec::new();
        let mut x = spec.zero();
        loop {
            members.push(spec.index_of(&x) as usize);
            x = spec.add_unchecked(&x, g);
            if x.is_zero() {
                break;
            }
        }
        members.sort_unstable();
        if cyclic_seen.insert(members.clone()) {
            cyclic.push(members);
        }
    }

    let mut found: HashMap<Vec<u64>, Vec<usize>> = HashMap::new();
    let trivial = vec![0usize];
    found.insert(set_of(&trivial), trivial.clone());
    let mut queue = vec![trivial];
    while let Some(h) = queue.pop() {
        let hbits = set_of(&h);
        for c in &cyclic {
            if c.iter().all(|&i| hbits[i / 64] >> (i % 64) & 1 == 1) {
                continue;
            }
            let mut bits = vec![0u64; words];
            for &i in &h {
                for &j in c {
                    let s = spec.add_unchecked(&elems[i], &elems[j]);
                    let idx = spec.index_of(&s) as usize;
                    bits[idx / 64] |= 1 << (idx % 64);
                }
            }
            if !found.contains_key(&bits) {
                let members = members_of(&bits);
                found.insert(bits, members.clone());
                queue.push(members);
            }
        }
    }

    let mut out: Vec<Vec<GroupElement>> = found
        .into_values()
        .map(|members| members.into_iter().map(|i| elems[i].clone()).collect())
        .collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(out)
}

/// A `p`-primary component of a group: one prime-power factor per original
/// factor divisible by `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimaryComponent {
    pub prime: u64,
    pub spec: GroupSpec,
    /// Original factor index for each factor of `spec`.
    pub source_factors: Vec<usize>,
}

/// CRT decomposition of a group into its primary components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimaryDecomposition {
    spec: GroupSpec,
    components: Vec<PrimaryComponent>,
}

pub fn primary_decompose(spec: &GroupSpec) -> PrimaryDecomposition {
    let mut by_prime: std::collections::BTreeMap<u64, Vec<(usize, u64)>> = Default::default();
    for (idx, &m) in spec.orders().iter().enumerate() {
        for (p, e) in factorize(m) {
            by_prime.entry(p).or_default().push((idx, p.pow(e)));
        }
    }
    let components = by_prime
        .into_iter()
        .map(|(prime, factors)| PrimaryComponent {
            prime,
            spec: GroupSpec::new(factors.iter().map(|f| f.1).collect())
                .expect("prime powers of valid orders"),
            source_factors: factors.into_iter().map(|f| f.0).collect(),
        })
        .collect();
    PrimaryDecomposition {
        spec: spec.clone(),
        components,
    }
}

impl PrimaryDecomposition {
    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn components(&self) -> &[PrimaryComponent] {
        &self.components
    }

    /// Projection of `a` onto every component.
    pub fn split(&self, a: &GroupElement) -> Result<Vec<GroupElement>> {
        self.spec.check(a)?;
        Ok(self
            .components
            .iter()
            .map(|c| {
                GroupElement(
                    c.source_factors
                        .iter()
                        .zip(c.spec.orders())
                        .map(|(&src, &q)| a.0[src] % q)
                        .collect(),
                )
            })
            .collect())
    }

    /// Inverse of [`split`](Self::split).
    pub fn merge(&self, parts: &[GroupElement]) -> Result<GroupElement> {
        if parts.len() != self.components.len() {
            return Err(Error::InvalidElement(format!(
                "expected {} components, got {}",
                self.components.len(),
                parts.len()
            )));
        }
        let mut out = vec![0u64; self.spec.rank()];
        for (c, part) in self.components.iter().zip(parts) {
            c.spec.check(part)?;
            for ((&src, &q), &r) in c.source_factors.iter().zip(c.spec.orders()).zip(&part.0) {
                let m = self.spec.orders()[src];
                let idem = crt_idempotent(m, q);
                out[src] = add_mod(out[src], mul_mod(r, idem, m), m);
            }
        }
        Ok(GroupElement(out))
    }

    /// Embeds a single component element into the full group.
    pub fn embed(&self, component: usize, part: &GroupElement) -> Result<GroupElement> {
        let parts: Vec<GroupElement> = self
            .components
            .iter()
            .enumerate()
            .map(|(i, c)| {
                if i == component {
                    part.clone()
                } else {
                    c.spec.zero()
                }
            })
            .collect();
        self.merge(&parts)
    }

    /// The endomorphism induced by `h` on one component.
    pub fn restrict(&self, component: usize, h: &Endomorphism) -> Result<Endomorphism> {
        if h.spec() != &self.spec {
            return Err(Error::SpecMismatch {
                expected: self.spec.to_string(),
                found: h.spec().to_string(),
            });
        }
        let c = &self.components[component];
        let k = c.spec.rank();
        let mut rows = vec![vec![0i64; k]; k];
        for j in 0..k {
            let mut basis = c.spec.zero();
            basis.0[j] = 1;
            let image = h.apply(&self.embed(component, &basis)?)?;
            let projected = &self.split(&image)?[component];
            for (i, row) in rows.iter_mut().enumerate() {
                row[j] = projected.0[i] as i64;
            }
        }
        Endomorphism::new(&c.spec, &rows)
    }
}

/// Element of `Z_m` that is 1 modulo `q` and 0 modulo `m / q` (with `gcd(q, m/q) = 1`).
fn crt_idempotent(m: u64, q: u64) -> u64 {
    let rest = m / q;
    if rest == 1 {
        return 1 % m;
    }
    let inv = modular::mod_inverse(rest % q, q).expect("coprime CRT factors");
    mul_mod(rest, inv, m)
}

pub(crate) fn factorize(mut m: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= m {
        if m % p == 0 {
            let mut e = 0;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        out.push((m, 1));
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n) == vec![(n, 1)]
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub(crate) fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 + b as u128) % m as u128) as u64
}

pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}
