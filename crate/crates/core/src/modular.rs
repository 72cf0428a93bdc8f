//! Exact linear algebra for homomorphisms between products of cyclic groups.
//!
//! Everything runs on a Hermite-style echelon over `Z`, where coordinate `c`
//! of the ambient group carries the implicit lattice generator `m_c * e_c`.
//! Residues stay reduced, so with orders below `2^32` all intermediate
//! products fit comfortably in `i128`.

use crate::error::{Error, Result};

/// Matrix of a homomorphism `Z_{n_1} x ... x Z_{n_c} -> Z_{m_1} x ... x Z_{m_r}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModularMatrix {
    row_moduli: Vec<u64>,
    col_moduli: Vec<u64>,
    entries: Vec<u64>,
}

impl ModularMatrix {
    /// Validates the homomorphism constraint `m_i | a_ij * n_j`.
    pub fn new(row_moduli: Vec<u64>, col_moduli: Vec<u64>, rows: &[Vec<i64>]) -> Result<Self> {
        if rows.len() != row_moduli.len() || rows.iter().any(|r| r.len() != col_moduli.len()) {
            return Err(Error::InvalidEndomorphism(format!(
                "expected a {}x{} matrix",
                row_moduli.len(),
                col_moduli.len()
            )));
        }
        if row_moduli.iter().chain(&col_moduli).any(|&m| m < 1) {
            return Err(Error::InvalidGroup("moduli must be positive".into()));
        }
        let mut entries = Vec::with_capacity(row_moduli.len() * col_moduli.len());
        for (i, row) in rows.iter().enumerate() {
            let mi = row_moduli[i];
            for (j, &v) in row.iter().enumerate() {
                let a = v.rem_euclid(mi as i64) as u64;
                if (a as u128 * col_moduli[j] as u128) % mi as u128 != 0 {
                    return Err(Error::InvalidEndomorphism(format!(
                        "entry ({i},{j}) = {v} is not a homomorphism Z_{} -> Z_{mi}",
                        col_moduli[j]
                    )));
                }
                entries.push(a);
            }
        }
        Ok(Self {
            row_moduli,
            col_moduli,
            entries,
        })
    }

    pub(crate) fn from_reduced(row_moduli: Vec<u64>, col_moduli: Vec<u64>, entries: Vec<u64>) -> Self {
        debug_assert_eq!(entries.len(), row_moduli.len() * col_moduli.len());
        Self {
            row_moduli,
            col_moduli,
            entries,
        }
    }

    pub fn nrows(&self) -> usize {
        self.row_moduli.len()
    }

    pub fn ncols(&self) -> usize {
        self.col_moduli.len()
    }

    pub fn row_moduli(&self) -> &[u64] {
        &self.row_moduli
    }

    pub fn col_moduli(&self) -> &[u64] {
        &self.col_moduli
    }

    pub fn entry(&self, i: usize, j: usize) -> u64 {
        self.entries[i * self.ncols() + j]
    }

    pub fn apply(&self, x: &[u64]) -> Vec<u64> {
        let n = self.ncols();
        (0..self.nrows())
            .map(|i| {
                let m = self.row_moduli[i] as u128;
                let row = &self.entries[i * n..(i + 1) * n];
                let s = row
                    .iter()
                    .zip(x)
                    .fold(0u128, |acc, (&a, &b)| (acc + a as u128 * b as u128) % m);
                s as u64
            })
            .collect()
    }

    fn column(&self, j: usize) -> Vec<i128> {
        (0..self.nrows()).map(|i| self.entry(i, j) as i128).collect()
    }

    /// `|target / image|`; `None` if it overflows `u128`.
    pub fn cokernel_order(&self) -> Option<u128> {
        let vectors = (0..self.ncols()).map(|j| self.column(j)).collect();
        let moduli: Vec<i128> = self.row_moduli.iter().map(|&m| m as i128).collect();
        let ech = echelon(vectors, &moduli, moduli.len());
        ech.pivots
            .iter()
            .try_fold(1u128, |acc, p| acc.checked_mul(p.value as u128))
    }

    /// `|image|`; `None` if it overflows `u128`.
    pub fn image_order(&self) -> Option<u128> {
        let target = self
            .row_moduli
            .iter()
            .try_fold(1u128, |acc, &m| acc.checked_mul(m as u128))?;
        Some(target / self.cokernel_order()?)
    }

    /// Kernel as a subgroup of the source group.
    pub fn kernel(&self) -> Subgroup {
        let r = self.nrows();
        let n = self.ncols();
        let vectors: Vec<Vec<i128>> = (0..n)
            .map(|j| {
                let mut v = self.column(j);
                v.extend((0..n).map(|l| (l == j) as i128));
                v
            })
            .collect();
        let moduli: Vec<i128> = self
            .row_moduli
            .iter()
            .chain(&self.col_moduli)
            .map(|&m| m as i128)
            .collect();
        let ech = echelon(vectors, &moduli, r);
        let bottoms: Vec<Vec<i128>> = ech.rest.into_iter().map(|v| v[r..].to_vec()).collect();
        Subgroup::from_generators_i128(self.col_moduli.clone(), bottoms)
    }
}

/// Subgroup of `Z_{m_1} x ... x Z_{m_k}` in Hermite normal form.
///
/// Row `c` has zeros before coordinate `c` and the value `g_c | m_c` at `c`;
/// `g_c = m_c` means the row is zero in the group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    moduli: Vec<u64>,
    pivots: Vec<u64>,
    rows: Vec<Vec<u64>>,
}

impl Subgroup {
    /// Subgroup generated by the given residue vectors.
    pub fn generated_by(moduli: Vec<u64>, generators: &[Vec<u64>]) -> Self {
        let vecs = generators
            .iter()
            .map(|g| g.iter().map(|&x| x as i128).collect())
            .collect();
        Self::from_generators_i128(moduli, vecs)
    }

    fn from_generators_i128(moduli: Vec<u64>, generators: Vec<Vec<i128>>) -> Self {
        let k = moduli.len();
        let m: Vec<i128> = moduli.iter().map(|&x| x as i128).collect();
        let ech = echelon(generators, &m, k);
        let mut rows: Vec<Vec<i128>> = ech.pivots.iter().map(|p| p.row.clone()).collect();
        let pivots: Vec<i128> = ech.pivots.iter().map(|p| p.value).collect();
        // Back-substitution: entry (i, c) reduced into [0, g_c).
        for i in 0..k {
            for c in i + 1..k {
                let g = pivots[c];
                let q = rows[i][c].div_euclid(g);
                if q != 0 {
                    let (head, tail) = rows.split_at_mut(c);
                    let src = &tail[0];
                    for l in c..k {
                        head[i][l] = (head[i][l] - q * src[l]).rem_euclid(m[l]);
                    }
                }
            }
        }
        let rows = rows
            .into_iter()
            .map(|r| {
                r.iter()
                    .zip(&m)
                    .map(|(&x, &mm)| x.rem_euclid(mm) as u64)
                    .collect()
            })
            .collect();
        Self {
            moduli,
            pivots: pivots.into_iter().map(|p| p as u64).collect(),
            rows,
        }
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    pub fn pivots(&self) -> &[u64] {
        &self.pivots
    }

    /// Order `prod m_c / g_c`; `None` on `u128` overflow.
    pub fn order(&self) -> Option<u128> {
        self.moduli
            .iter()
            .zip(&self.pivots)
            .try_fold(1u128, |acc, (&m, &g)| acc.checked_mul((m / g) as u128))
    }

    /// `log2 |H|`, useful when the order overflows.
    pub fn log2_order(&self) -> f64 {
        self.moduli
            .iter()
            .zip(&self.pivots)
            .map(|(&m, &g)| ((m / g) as f64).log2())
            .sum()
    }

    pub fn is_trivial(&self) -> bool {
        self.moduli.iter().zip(&self.pivots).all(|(m, g)| m == g)
    }

    /// Nonzero Hermite rows; they generate the subgroup.
    pub fn generators(&self) -> Vec<Vec<u64>> {
        self.rows
            .iter()
            .zip(self.moduli.iter().zip(&self.pivots))
            .filter(|(_, (m, g))| g < m)
            .map(|(r, _)| r.clone())
            .collect()
    }

    pub fn contains(&self, x: &[u64]) -> bool {
        if x.len() != self.moduli.len() {
            return false;
        }
        let mut v: Vec<u128> = x.iter().map(|&a| a as u128).collect();
        for c in 0..v.len() {
            let m = self.moduli[c] as u128;
            let g = self.pivots[c] as u128;
            let xc = v[c] % m;
            if xc % g != 0 {
                return false;
            }
            let q = xc / g;
            if q != 0 {
                for l in c..v.len() {
                    let ml = self.moduli[l] as u128;
                    let sub = (q * self.rows[c][l] as u128) % ml;
                    v[l] = (v[l] % ml + ml - sub) % ml;
                }
            }
        }
        true
    }

    /// Lexicographically least nonzero element, if any.
    pub fn lex_min_nonzero(&self) -> Option<Vec<u64>> {
        (0..self.moduli.len())
            .rev()
            .find(|&c| self.pivots[c] < self.moduli[c])
            .map(|c| self.rows[c].clone())
    }

    /// All elements, in no particular order; `None` if larger than `cap`.
    pub fn elements(&self, cap: u128) -> Option<Vec<Vec<u64>>> {
        if self.order()? > cap {
            return None;
        }
        let gens: Vec<(Vec<u64>, u64)> = self
            .rows
            .iter()
            .zip(self.moduli.iter().zip(&self.pivots))
            .filter(|(_, (m, g))| g < m)
            .map(|(r, (m, g))| (r.clone(), m / g))
            .collect();
        let mut out = vec![vec![0u64; self.moduli.len()]];
        for (row, count) in gens {
            let mut next = Vec::with_capacity(out.len() * count as usize);
            for base in &out {
                let mut cur = base.clone();
                for _ in 0..count {
                    next.push(cur.clone());
                    for (l, x) in cur.iter_mut().enumerate() {
                        *x = ((*x as u128 + row[l] as u128) % self.moduli[l] as u128) as u64;
                    }
                }
            }
            out = next;
        }
        Some(out)
    }
}

struct Pivot {
    value: i128,
    row: Vec<i128>,
}

struct Echelon {
    /// One pivot per processed coordinate.
    pivots: Vec<Pivot>,
    /// Remaining lattice vectors, zero on every processed coordinate.
    rest: Vec<Vec<i128>>,
}

/// Echelon of the lattice spanned by `vectors` and every `m_c e_c`, over the
/// first `upto` coordinates.
fn echelon(vectors: Vec<Vec<i128>>, moduli: &[i128], upto: usize) -> Echelon {
    let len = moduli.len();
    let reduce = |v: &mut Vec<i128>| {
        for (x, &m) in v.iter_mut().zip(moduli) {
            *x = x.rem_euclid(m);
        }
    };
    let mut active: Vec<Vec<i128>> = vectors
        .into_iter()
        .map(|mut v| {
            reduce(&mut v);
            v
        })
        .filter(|v| v.iter().any(|&x| x != 0))
        .collect();
    let mut pivots = Vec::with_capacity(upto);

    for c in 0..upto {
        let m = moduli[c];
        let mut pivot: Option<Vec<i128>> = None;
        let mut next = Vec::with_capacity(active.len() + 1);
        for v in active.drain(..) {
            if v[c] == 0 {
                next.push(v);
                continue;
            }
            match pivot.take() {
                None => pivot = Some(v),
                Some(p) => {
                    let (a, b) = (p[c], v[c]);
                    let (g, u, w) = ext_gcd(a, b);
                    let mut np: Vec<i128> =
                        p.iter().zip(&v).map(|(&x, &y)| u * x + w * y).collect();
                    let mut nq: Vec<i128> = p
                        .iter()
                        .zip(&v)
                        .map(|(&x, &y)| (a / g) * y - (b / g) * x)
                        .collect();
                    reduce(&mut np);
                    reduce(&mut nq);
                    if nq.iter().any(|&x| x != 0) {
                        next.push(nq);
                    }
                    pivot = Some(np);
                }
            }
        }
        let entry = match pivot {
            None => {
                let mut row = vec![0i128; len];
                row[c] = m;
                Pivot { value: m, row }
            }
            Some(p) => {
                let a = p[c];
                let (g, u, _) = ext_gcd(a, m);
                let mut row: Vec<i128> = p.iter().map(|&x| u * x).collect();
                row[c] = g;
                let mut leftover: Vec<i128> = p.iter().map(|&x| -(m / g) * x).collect();
                leftover[c] = 0;
                for (l, (x, &ml)) in row.iter_mut().zip(moduli).enumerate() {
                    if l != c {
                        *x = x.rem_euclid(ml);
                    }
                }
                reduce(&mut leftover);
                if leftover.iter().any(|&x| x != 0) {
                    next.push(leftover);
                }
                Pivot { value: g, row }
            }
        };
        pivots.push(entry);
        active = next;
    }
    Echelon {
        pivots,
        rest: active,
    }
}

/// `(g, u, v)` with `u a + v b = g = gcd(a, b) >= 0`.
fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (g, u, _) = ext_gcd(a as i128, m as i128);
    (g == 1).then(|| u.rem_euclid(m as i128) as u64)
}
