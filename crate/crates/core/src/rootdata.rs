//! Cartan data, root tables and the fixed longest word for classical types.
//!
//! Weights are stored in fundamental-weight coordinates. Elements of the root
//! lattice are also handled in simple-root coordinates (`RootVec`) where that
//! is more natural (gradings, partitions).

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;
use thiserror::Error;

pub type Coords = SmallVec<[i64; 6]>;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum RootDataError {
    #[error("invalid rank {rank} for type {lie_type}")]
    InvalidRank { lie_type: LieType, rank: usize },
    #[error("unknown Lie type '{0}'")]
    UnknownType(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LieType {
    A,
    B,
    C,
    D,
}

impl fmt::Display for LieType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            LieType::A => "A",
            LieType::B => "B",
            LieType::C => "C",
            LieType::D => "D",
        };
        f.write_str(s)
    }
}

impl FromStr for LieType {
    type Err = RootDataError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(LieType::A),
            "B" => Ok(LieType::B),
            "C" => Ok(LieType::C),
            "D" => Ok(LieType::D),
            other => Err(RootDataError::UnknownType(other.to_string())),
        }
    }
}

/// Weight in fundamental-weight coordinates: `λ = Σ c_i ω_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Weight(pub Coords);

impl Weight {
    pub fn zero(rank: usize) -> Self {
        Weight(SmallVec::from_elem(0, rank))
    }

    pub fn from_slice(c: &[i64]) -> Self {
        Weight(SmallVec::from_slice(c))
    }

    pub fn fundamental(rank: usize, i: usize) -> Self {
        let mut w = Self::zero(rank);
        w.0[i] = 1;
        w
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn add(&self, o: &Weight) -> Weight {
        Weight(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, o: &Weight) -> Weight {
        Weight(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> Weight {
        Weight(self.0.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, k: i64) -> Weight {
        Weight(self.0.iter().map(|a| a * k).collect())
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// Element of the root lattice in simple-root coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RootVec(pub Coords);

impl RootVec {
    pub fn zero(rank: usize) -> Self {
        RootVec(SmallVec::from_elem(0, rank))
    }

    pub fn simple(rank: usize, i: usize) -> Self {
        let mut v = Self::zero(rank);
        v.0[i] = 1;
        v
    }

    pub fn from_slice(c: &[i64]) -> Self {
        RootVec(SmallVec::from_slice(c))
    }

    pub fn height(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn is_nonneg(&self) -> bool {
        self.0.iter().all(|&x| x >= 0)
    }

    pub fn add(&self, o: &RootVec) -> RootVec {
        RootVec(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, o: &RootVec) -> RootVec {
        RootVec(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> RootVec {
        RootVec(self.0.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, k: i64) -> RootVec {
        RootVec(self.0.iter().map(|a| a * k).collect())
    }
}

impl fmt::Display for RootVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, &c) in self.0.iter().enumerate() {
            match c {
                0 => {}
                1 => parts.push(format!("a{}", i + 1)),
                _ => parts.push(format!("{}a{}", c, i + 1)),
            }
        }
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join("+"))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootDatum {
    pub lie_type: LieType,
    pub rank: usize,
    /// `cartan[i][j] = ⟨α_i^∨, α_j⟩`.
    pub cartan: Vec<Vec<i64>>,
    pub d: Vec<i64>,
    /// `pairing[i][j] = ⟨ω_i, ω_j⟩`.
    pub pairing: Vec<Vec<Ratio<i64>>>,
    /// q = s^m; clears every denominator of `pairing`.
    pub root_order: u32,
}

fn cartan_matrix(t: LieType, n: usize) -> (Vec<Vec<i64>>, Vec<i64>) {
    let mut a = vec![vec![0i64; n]; n];
    for i in 0..n {
        a[i][i] = 2;
        if i + 1 < n {
            a[i][i + 1] = -1;
            a[i + 1][i] = -1;
        }
    }
    let d = match t {
        LieType::A => vec![1; n],
        LieType::B => {
            a[n - 1][n - 2] = -2;
            let mut d = vec![2; n];
            d[n - 1] = 1;
            d
        }
        LieType::C => {
            a[n - 2][n - 1] = -2;
            let mut d = vec![1; n];
            d[n - 1] = 2;
            d
        }
        LieType::D => {
            a[n - 2][n - 1] = 0;
            a[n - 1][n - 2] = 0;
            a[n - 3][n - 1] = -1;
            a[n - 1][n - 3] = -1;
            vec![1; n]
        }
    };
    (a, d)
}

fn invert_integer_matrix(a: &[Vec<i64>]) -> Vec<Vec<Ratio<i64>>> {
    let n = a.len();
    let mut m: Vec<Vec<Ratio<i64>>> = (0..n)
        .map(|i| {
            (0..2 * n)
                .map(|j| {
                    if j < n {
                        Ratio::from_integer(a[i][j])
                    } else {
                        Ratio::from_integer((j - n == i) as i64)
                    }
                })
                .collect()
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| m[r][c] != Ratio::from_integer(0)).expect("singular Cartan matrix");
        m.swap(c, p);
        let pv = m[c][c];
        for x in m[c].iter_mut() {
            *x /= pv;
        }
        for r in 0..n {
            if r != c && m[r][c] != Ratio::from_integer(0) {
                let f = m[r][c];
                let prow = m[c].clone();
                for (x, y) in m[r].iter_mut().zip(prow) {
                    *x -= f * y;
                }
            }
        }
    }
    m.into_iter().map(|row| row[n..].to_vec()).collect()
}

pub fn make_root_datum(lie_type: LieType, rank: usize) -> Result<RootDatum, RootDataError> {
    let min = match lie_type {
        LieType::A => 1,
        LieType::B | LieType::C => 2,
        LieType::D => 3,
    };
    if rank < min || rank > 12 {
        return Err(RootDataError::InvalidRank { lie_type, rank });
    }
    let (cartan, d) = cartan_matrix(lie_type, rank);
    let at: Vec<Vec<i64>> = (0..rank).map(|i| (0..rank).map(|j| cartan[j][i]).collect()).collect();
    let inv = invert_integer_matrix(&at);
    let pairing: Vec<Vec<Ratio<i64>>> = (0..rank)
        .map(|i| (0..rank).map(|j| inv[i][j] * Ratio::from_integer(d[j])).collect())
        .collect();
    let mut m = 1i64;
    for row in &pairing {
        for x in row {
            m = m.lcm(x.denom());
        }
    }
    Ok(RootDatum { lie_type, rank, cartan, d, pairing, root_order: m as u32 })
}

impl RootDatum {
    pub fn name(&self) -> String {
        format!("{}{}", self.lie_type, self.rank)
    }

    /// α_j in fundamental-weight coordinates (column j of the Cartan matrix).
    pub fn alpha(&self, j: usize) -> Weight {
        Weight((0..self.rank).map(|k| self.cartan[k][j]).collect())
    }

    pub fn root_to_weight(&self, b: &RootVec) -> Weight {
        let mut w = Weight::zero(self.rank);
        for (j, &c) in b.0.iter().enumerate() {
            if c != 0 {
                for k in 0..self.rank {
                    w.0[k] += c * self.cartan[k][j];
                }
            }
        }
        w
    }

    /// Inverse of [`Self::root_to_weight`]; `None` off the root lattice.
    pub fn weight_to_root(&self, w: &Weight) -> Option<RootVec> {
        let at: Vec<Vec<i64>> = self.cartan.clone();
        let inv = invert_integer_matrix(&at);
        let mut out = RootVec::zero(self.rank);
        for j in 0..self.rank {
            let mut acc = Ratio::from_integer(0);
            for k in 0..self.rank {
                acc += inv[j][k] * Ratio::from_integer(w.0[k]);
            }
            if !acc.is_integer() {
                return None;
            }
            out.0[j] = acc.to_integer();
        }
        Some(out)
    }

    pub fn in_root_lattice(&self, w: &Weight) -> bool {
        self.weight_to_root(w).is_some()
    }

    pub fn pair(&self, a: &Weight, b: &Weight) -> Ratio<i64> {
        let mut acc = Ratio::from_integer(0);
        for i in 0..self.rank {
            if a.0[i] == 0 {
                continue;
            }
            for j in 0..self.rank {
                if b.0[j] != 0 {
                    acc += self.pairing[i][j] * Ratio::from_integer(a.0[i] * b.0[j]);
                }
            }
        }
        acc
    }

    /// ⟨λ, β⟩ with β in simple-root coordinates; always an integer.
    pub fn pair_wr(&self, lam: &Weight, b: &RootVec) -> i64 {
        (0..self.rank).map(|j| self.d[j] * lam.0[j] * b.0[j]).sum()
    }

    /// ⟨β, γ⟩ for root-lattice elements, `Σ β_i d_i a_ij γ_j`.
    pub fn pair_rr(&self, a: &RootVec, b: &RootVec) -> i64 {
        let mut acc = 0;
        for i in 0..self.rank {
            if a.0[i] == 0 {
                continue;
            }
            for j in 0..self.rank {
                acc += a.0[i] * self.d[i] * self.cartan[i][j] * b.0[j];
            }
        }
        acc
    }

    /// r_i(λ) = λ − ⟨α_i^∨, λ⟩ α_i.
    pub fn reflect(&self, i: usize, w: &Weight) -> Weight {
        let li = w.0[i];
        if li == 0 {
            return w.clone();
        }
        w.sub(&self.alpha(i).scale(li))
    }

    pub fn reflect_root(&self, i: usize, b: &RootVec) -> RootVec {
        let c: i64 = (0..self.rank).map(|j| self.cartan[i][j] * b.0[j]).sum();
        let mut out = b.clone();
        out.0[i] -= c;
        out
    }

    pub fn positive_roots(&self) -> Vec<RootVec> {
        let t = build_root_table(self);
        t.ordered().map(|r| r.root.clone()).collect()
    }
}

/// One entry β_{ij} of the displayed root table (indices are 1-based).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRoot {
    pub i: usize,
    pub j: usize,
    pub root: RootVec,
    pub weight: Weight,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootTable {
    pub lie_type: LieType,
    pub rank: usize,
    /// Table entries in row-major (i, j) order.
    pub roots: Vec<TableRoot>,
    /// Reduced expression of the longest Weyl element (0-based indices).
    pub reduced_word: Vec<usize>,
    /// `sweep[k]` is the table entry equal to β_k = r_{i_1}···r_{i_{k-1}}α_{i_k}.
    pub sweep: Vec<usize>,
    /// Inverse of `sweep`: position of each table entry under ≺.
    pub order_index: Vec<usize>,
}

fn interval(n: usize, a: usize, b: usize) -> RootVec {
    // Σ_{k=a}^{b} α_k, 1-based, empty when a > b
    let mut v = RootVec::zero(n);
    for k in a..=b {
        if k >= 1 && k <= n {
            v.0[k - 1] += 1;
        }
    }
    v
}

impl RootTable {
    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    /// j' as used by the table (identity for type A).
    pub fn jprime(&self, j: usize) -> usize {
        jprime(self.lie_type, self.rank, j)
    }

    pub fn find(&self, i: usize, j: usize) -> Option<usize> {
        self.roots.iter().position(|r| r.i == i && r.j == j)
    }

    /// Roots in ≺-order.
    pub fn ordered(&self) -> impl Iterator<Item = &TableRoot> {
        self.sweep.iter().map(move |&k| &self.roots[k])
    }

    /// Position under ≺ of the positive root `b`.
    pub fn position_of(&self, b: &RootVec) -> Option<usize> {
        self.sweep.iter().position(|&k| self.roots[k].root == *b)
    }

    /// Dimension of the vector representation whose matrix coefficients index the table.
    pub fn vector_dim(&self) -> usize {
        vector_dim(self.lie_type, self.rank)
    }
}

pub fn vector_dim(t: LieType, n: usize) -> usize {
    match t {
        LieType::A => n + 1,
        LieType::B => 2 * n + 1,
        LieType::C | LieType::D => 2 * n,
    }
}

pub fn jprime(t: LieType, n: usize, j: usize) -> usize {
    match t {
        LieType::A => j,
        LieType::B => 2 * n + 2 - j,
        LieType::C | LieType::D => 2 * n + 1 - j,
    }
}

/// The displayed β_{ij} table, row-major.
pub fn table_entries(t: LieType, n: usize) -> Vec<(usize, usize, RootVec)> {
    let mut out = Vec::new();
    match t {
        LieType::A => {
            for i in 1..=n {
                for j in i + 1..=n + 1 {
                    out.push((i, j, interval(n, i, j - 1)));
                }
            }
        }
        LieType::B => {
            for i in 1..=n {
                for j in i + 1..jprime(t, n, i) {
                    let v = if j <= n + 1 {
                        interval(n, i, j - 1)
                    } else {
                        interval(n, i, n).add(&interval(n, jprime(t, n, j), n))
                    };
                    out.push((i, j, v));
                }
            }
        }
        LieType::C => {
            for i in 1..=n {
                for j in i + 1..=jprime(t, n, i) {
                    let v = if j <= n + 1 {
                        interval(n, i, j - 1)
                    } else {
                        interval(n, i, n).add(&interval(n, jprime(t, n, j), n - 1))
                    };
                    out.push((i, j, v));
                }
            }
        }
        LieType::D => {
            for i in 1..n {
                for j in i + 1..jprime(t, n, i) {
                    let v = if j <= n {
                        interval(n, i, j - 1)
                    } else if j == n + 1 {
                        interval(n, i, n - 2).add(&RootVec::simple(n, n - 1))
                    } else if j == n + 2 {
                        interval(n, i, n)
                    } else {
                        interval(n, i, n).add(&interval(n, jprime(t, n, j), n - 2))
                    };
                    out.push((i, j, v));
                }
            }
        }
    }
    out
}

/// The longest word as the product of the factors a_N, ..., a_1 (1-based letters).
pub fn longest_word(t: LieType, n: usize) -> Vec<usize> {
    let mut word = Vec::new();
    for k in (1..=n).rev() {
        match t {
            LieType::A => word.extend(1..=k),
            LieType::B | LieType::C => {
                word.extend(k..=n);
                word.extend((k..n).rev());
            }
            LieType::D => {
                if k == n {
                    continue;
                }
                if (n - k) % 2 == 1 {
                    word.extend(k..=n - 2);
                    word.push(n);
                    word.extend((k..n).rev());
                } else {
                    word.extend(k..n);
                    word.push(n);
                    word.extend((k..=n - 2).rev());
                }
            }
        }
    }
    word
}

/// The ordering as displayed next to the longest word, on table indices.
pub fn displayed_prec(t: LieType, n: usize, a: (usize, usize), b: (usize, usize)) -> bool {
    let ((i, j), (k, l)) = (a, b);
    match t {
        LieType::A => i < k || (i == k && j < l),
        LieType::B | LieType::D => k < i || (i == k && l < j),
        LieType::C => {
            k < i
                || (i == k && j == n + 1 && l != n + 1)
                || (i == k && l < j && j != n + 1 && l != n + 1)
        }
    }
}

pub fn build_root_table(datum: &RootDatum) -> RootTable {
    let (t, n) = (datum.lie_type, datum.rank);
    let roots: Vec<TableRoot> = table_entries(t, n)
        .into_iter()
        .map(|(i, j, root)| {
            let weight = datum.root_to_weight(&root);
            TableRoot { i, j, root, weight }
        })
        .collect();
    let reduced_word: Vec<usize> = longest_word(t, n).into_iter().map(|x| x - 1).collect();
    let lookup: HashMap<RootVec, usize> =
        roots.iter().enumerate().map(|(k, r)| (r.root.clone(), k)).collect();
    let mut sweep = Vec::with_capacity(reduced_word.len());
    for k in 0..reduced_word.len() {
        let b = sweep_root(datum, &reduced_word, k);
        let idx = *lookup.get(&b).unwrap_or_else(|| panic!("word sweep produced non-table root {}", b));
        sweep.push(idx);
    }
    let mut order_index = vec![usize::MAX; roots.len()];
    for (pos, &k) in sweep.iter().enumerate() {
        order_index[k] = pos;
    }
    assert!(order_index.iter().all(|&x| x != usize::MAX), "word does not sweep every table root");
    RootTable { lie_type: t, rank: n, roots, reduced_word, sweep, order_index }
}

/// β_k = r_{i_1}···r_{i_{k-1}} α_{i_k} for a word of 0-based letters.
pub fn sweep_root(datum: &RootDatum, word: &[usize], k: usize) -> RootVec {
    let mut b = RootVec::simple(datum.rank, word[k]);
    for &i in word[..k].iter().rev() {
        b = datum.reflect_root(i, &b);
    }
    b
}

/// Number of ways to write `lam` as an ℕ₀-combination of positive roots.
pub fn kostant_partitions(roots: &[RootVec], lam: &RootVec) -> u64 {
    fn go(roots: &[RootVec], lam: &RootVec, memo: &mut HashMap<(usize, RootVec), u64>) -> u64 {
        if lam.is_zero() {
            return 1;
        }
        if roots.is_empty() || !lam.is_nonneg() {
            return 0;
        }
        let key = (roots.len(), lam.clone());
        if let Some(&v) = memo.get(&key) {
            return v;
        }
        // either never use roots[0] again, or use it once more
        let mut total = go(&roots[1..], lam, memo);
        let rest = lam.sub(&roots[0]);
        if rest.is_nonneg() {
            total += go(roots, &rest, memo);
        }
        memo.insert(key, total);
        total
    }
    go(roots, lam, &mut HashMap::new())
}

/// All ℕ₀-combinations of simple roots with the given height.
pub fn nonneg_of_height(rank: usize, h: i64) -> Vec<RootVec> {
    fn go(rank: usize, idx: usize, left: i64, cur: &mut Vec<i64>, out: &mut Vec<RootVec>) {
        if idx + 1 == rank {
            cur.push(left);
            out.push(RootVec::from_slice(cur));
            cur.pop();
            return;
        }
        for c in (0..=left).rev() {
            cur.push(c);
            go(rank, idx + 1, left - c, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(rank, 0, h, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rv(c: &[i64]) -> RootVec {
        RootVec::from_slice(c)
    }

    #[test]
    fn a1_pairing() {
        let d = make_root_datum(LieType::A, 1).unwrap();
        assert_eq!(d.cartan, vec![vec![2]]);
        assert_eq!(d.pairing[0][0], Ratio::new(1, 2));
        assert_eq!(d.root_order, 2);
    }

    #[test]
    fn b2_cartan() {
        let d = make_root_datum(LieType::B, 2).unwrap();
        assert_eq!(d.cartan, vec![vec![2, -1], vec![-2, 2]]);
        assert_eq!(d.d, vec![2, 1]);
    }

    #[test]
    fn rank_bounds() {
        assert!(make_root_datum(LieType::D, 2).is_err());
        assert!(make_root_datum(LieType::B, 1).is_err());
        assert!(make_root_datum(LieType::A, 0).is_err());
    }

    #[test]
    fn a2_table() {
        let d = make_root_datum(LieType::A, 2).unwrap();
        let t = build_root_table(&d);
        assert_eq!(t.reduced_word, vec![0, 1, 0]);
        let seq: Vec<_> = t.ordered().map(|r| (r.i, r.j)).collect();
        assert_eq!(seq, vec![(1, 2), (1, 3), (2, 3)]);
    }

    #[test]
    fn b2_table_order() {
        let d = make_root_datum(LieType::B, 2).unwrap();
        let t = build_root_table(&d);
        assert_eq!(t.reduced_word, vec![1, 0, 1, 0]);
        let seq: Vec<_> = t.ordered().map(|r| r.root.clone()).collect();
        assert_eq!(seq, vec![rv(&[0, 1]), rv(&[1, 2]), rv(&[1, 1]), rv(&[1, 0])]);
        let seq: Vec<_> = t.ordered().map(|r| (r.i, r.j)).collect();
        assert_eq!(seq, vec![(2, 3), (1, 4), (1, 3), (1, 2)]);
    }

    #[test]
    fn c2_has_jprime_entry() {
        let d = make_root_datum(LieType::C, 2).unwrap();
        let t = build_root_table(&d);
        assert_eq!(t.jprime(1), 4);
        assert!(t.find(1, 4).is_some());
    }

    #[test]
    fn kostant_small() {
        let d = make_root_datum(LieType::A, 2).unwrap();
        let roots = d.positive_roots();
        assert_eq!(kostant_partitions(&roots, &rv(&[1, 0])), 1);
        assert_eq!(kostant_partitions(&roots, &rv(&[1, 1])), 2);
        assert_eq!(kostant_partitions(&roots, &rv(&[0, 0])), 1);
    }
}
