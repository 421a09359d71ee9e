//! Graded bases of U(n_+) (and, through E_i ↦ F_i, of U(n_-)).
//!
//! Each weight component gets a basis of generator words, chosen as the
//! lexicographically first independent words of the form `j · b` with `b` a
//! basis word one step lower. Independence is decided through the skew
//! derivations `r_i`, characterised by `r_i(E_j) = δ_ij` and
//! `r_i(E_j x) = E_j r_i(x) + δ_ij q^{⟨α_i, wt x⟩} x`. For a nonzero weight an
//! element vanishes iff all `r_i` of it vanish, so the vector `(r_i(x))_i`
//! written in lower bases is a faithful coordinate system.
//!
//! The data stored per component are the basis words, their derivation
//! vectors, and the matrices of left multiplication by each `E_j` from the
//! component one step below. Reducing a word is a product of those matrices.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use smallvec::SmallVec;

use crate::linalg::Matrix;
use crate::rootdata::{kostant_partitions, RootDatum, RootVec};
use crate::scalar::QField;
use crate::uqg::UqgError;

/// Word in the generators, 0-based letters.
pub type Word = SmallVec<[u8; 16]>;

pub fn word_weight(rank: usize, w: &[u8]) -> RootVec {
    let mut v = RootVec::zero(rank);
    for &l in w {
        v.0[l as usize] += 1;
    }
    v
}


pub struct Component<S> {
    pub weight: RootVec,
    pub basis: Vec<Word>,
    pub index: HashMap<Word, usize>,
    /// `phi[b][i]`: coordinates of `r_i(basis[b])` one step below, if that weight exists.
    phi: Vec<Vec<Option<Vec<S>>>>,
    /// `left[j]`: matrix of `x ↦ E_j x` from weight − α_j into this component.
    left: Vec<Option<Matrix<S>>>,
}

impl<S: QField> Component<S> {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn left(&self, j: usize) -> Option<&Matrix<S>> {
        self.left[j].as_ref()
    }
}

pub struct GradedBasis<S> {
    datum: RootDatum,
    roots: Vec<RootVec>,
    comps: RwLock<HashMap<RootVec, Arc<Component<S>>>>,
}

impl<S: QField> GradedBasis<S> {
    pub fn new(datum: &RootDatum) -> Self {
        let roots = datum.positive_roots();
        let zero = RootVec::zero(datum.rank);
        let mut empty = Word::new();
        empty.clear();
        let mut index = HashMap::new();
        index.insert(empty.clone(), 0);
        let c0 = Component {
            weight: zero.clone(),
            basis: vec![empty],
            index,
            phi: vec![vec![None; datum.rank]],
            left: vec![None; datum.rank],
        };
        let mut comps = HashMap::new();
        comps.insert(zero, Arc::new(c0));
        GradedBasis { datum: datum.clone(), roots, comps: RwLock::new(comps) }
    }

    pub fn datum(&self) -> &RootDatum {
        &self.datum
    }

    pub fn cached(&self) -> usize {
        self.comps.read().unwrap().len()
    }

    /// Component at `mu`; `None` when `mu` is not an ℕ₀-combination of simple roots.
    pub fn component(&self, mu: &RootVec) -> Result<Option<Arc<Component<S>>>, UqgError> {
        if !mu.is_nonneg() {
            return Ok(None);
        }
        if let Some(c) = self.comps.read().unwrap().get(mu) {
            return Ok(Some(c.clone()));
        }
        let n = self.datum.rank;
        let mut lower: Vec<Option<Arc<Component<S>>>> = Vec::with_capacity(n);
        for j in 0..n {
            let below = mu.sub(&RootVec::simple(n, j));
            lower.push(self.component(&below)?);
        }
        let comp = Arc::new(self.build(mu, &lower)?);
        let mut w = self.comps.write().unwrap();
        Ok(Some(w.entry(mu.clone()).or_insert(comp).clone()))
    }

    pub fn dim(&self, mu: &RootVec) -> Result<usize, UqgError> {
        Ok(self.component(mu)?.map_or(0, |c| c.dim()))
    }

    fn build(&self, mu: &RootVec, lower: &[Option<Arc<Component<S>>>]) -> Result<Component<S>, UqgError> {
        let n = self.datum.rank;
        let m = self.datum.root_order;
        // Left-multiplication data two steps down: E_j from mu-a_i-a_j into mu-a_i.
        struct Cand {
            j: usize,
            b: usize,
            word: Word,
        }
        let mut cands: Vec<Cand> = Vec::new();
        for j in 0..n {
            if let Some(lc) = &lower[j] {
                for (b, w) in lc.basis.iter().enumerate() {
                    let mut word = Word::new();
                    word.push(j as u8);
                    word.extend_from_slice(w);
                    cands.push(Cand { j, b, word });
                }
            }
        }
        cands.sort_by(|a, b| a.word.cmp(&b.word));

        let mut offsets = vec![usize::MAX; n];
        let mut total = 0;
        for i in 0..n {
            if let Some(lc) = &lower[i] {
                offsets[i] = total;
                total += lc.dim();
            }
        }

        let mut cand_phi: Vec<Vec<Option<Vec<S>>>> = Vec::with_capacity(cands.len());
        let mut mat = Matrix::<S>::zeros(total, cands.len());
        for (ci, c) in cands.iter().enumerate() {
            let lc = lower[c.j].as_ref().unwrap();
            let mut blocks: Vec<Option<Vec<S>>> = vec![None; n];
            for i in 0..n {
                let Some(target) = &lower[i] else { continue };
                let mut v = vec![S::zero(); target.dim()];
                if let Some(rb) = &lc.phi[c.b][i] {
                    // E_j r_i(b): r_i(b) lives at mu - a_j - a_i, E_j lands in mu - a_i
                    let lj = target.left[c.j].as_ref().expect("left multiplication matrix");
                    v = lj.apply(rb);
                }
                if i == c.j {
                    let below = mu.sub(&RootVec::simple(n, c.j));
                    let e = self.datum.pair_rr(&RootVec::simple(n, i), &below);
                    v[c.b] += &S::q_int_pow(e, m);
                }
                for (r, x) in v.iter().enumerate() {
                    mat[(offsets[i] + r, ci)] = x.clone();
                }
                blocks[i] = Some(v);
            }
            cand_phi.push(blocks);
        }

        let pivots = mat.rref();
        let expected = kostant_partitions(&self.roots, mu) as usize;
        if pivots.len() != expected {
            return Err(UqgError::Integrity(format!(
                "dimension of U^{}(n+) is {} but the Kostant count is {}",
                mu,
                pivots.len(),
                expected
            )));
        }
        let basis: Vec<Word> = pivots.iter().map(|&p| cands[p].word.clone()).collect();
        let index: HashMap<Word, usize> = basis.iter().cloned().enumerate().map(|(k, w)| (w, k)).collect();
        let phi: Vec<Vec<Option<Vec<S>>>> = pivots.iter().map(|&p| cand_phi[p].clone()).collect();

        let mut left: Vec<Option<Matrix<S>>> = vec![None; n];
        for j in 0..n {
            if let Some(lc) = &lower[j] {
                left[j] = Some(Matrix::zeros(basis.len(), lc.dim()));
            }
        }
        for (ci, c) in cands.iter().enumerate() {
            let lm = left[c.j].as_mut().unwrap();
            for (r, _) in pivots.iter().enumerate() {
                lm[(r, c.b)] = mat[(r, ci)].clone();
            }
        }
        Ok(Component { weight: mu.clone(), basis, index, phi, left })
    }

    /// Coordinates of a word in the basis of its weight component.
    pub fn reduce_word(&self, w: &[u8]) -> Result<(RootVec, Vec<S>), UqgError> {
        let n = self.datum.rank;
        let mut mu = RootVec::zero(n);
        let mut v = vec![S::one()];
        for &l in w.iter().rev() {
            mu.0[l as usize] += 1;
            let c = self.component(&mu)?.expect("nonnegative weight");
            v = c.left(l as usize).expect("letter present").apply(&v);
        }
        Ok((mu, v))
    }

    /// Coordinates of `E_j · x` for `x` given in the basis at `mu`.
    pub fn left_mul(&self, j: usize, mu: &RootVec, x: &[S]) -> Result<Vec<S>, UqgError> {
        let up = mu.add(&RootVec::simple(self.datum.rank, j));
        let c = self.component(&up)?.expect("nonnegative weight");
        Ok(c.left(j).expect("letter present").apply(x))
    }

    /// Coordinates of `r_i(basis[b])` at weight `mu`, if defined.
    pub fn derivation(&self, mu: &RootVec, b: usize, i: usize) -> Result<Option<Vec<S>>, UqgError> {
        let c = self.component(mu)?.expect("nonnegative weight");
        Ok(c.phi[b][i].clone())
    }

    pub fn basis_words(&self, mu: &RootVec) -> Result<Vec<Word>, UqgError> {
        Ok(self.component(mu)?.map_or_else(Vec::new, |c| c.basis.clone()))
    }
}

/// Linear combination of free words.
pub type FreeElement<S> = Vec<(Word, S)>;

/// The Serre element for (i, j): Σ_r (−1)^r [1−a_ij choose r]_{q_i} X_i^{1−a_ij−r} X_j X_i^r.
pub fn serre_element<S: QField>(datum: &RootDatum, i: usize, j: usize) -> FreeElement<S> {
    let a = datum.cartan[i][j];
    let top = (1 - a) as u32;
    let mut out = Vec::new();
    for r in 0..=top {
        let mut c = crate::scalar::q_binomial::<S>(top, r, datum.d[i], datum.root_order);
        if r % 2 == 1 {
            c = -c;
        }
        let mut w = Word::new();
        for _ in 0..top - r {
            w.push(i as u8);
        }
        w.push(j as u8);
        for _ in 0..r {
            w.push(i as u8);
        }
        out.push((w, c));
    }
    out
}

/// All words with the given letter multiplicities, in lexicographic order.
pub fn words_of_weight(mu: &RootVec) -> Vec<Word> {
    fn go(left: &mut Vec<i64>, cur: &mut Word, out: &mut Vec<Word>) {
        if left.iter().all(|&x| x == 0) {
            out.push(cur.clone());
            return;
        }
        for l in 0..left.len() {
            if left[l] > 0 {
                left[l] -= 1;
                cur.push(l as u8);
                go(left, cur, out);
                cur.pop();
                left[l] += 1;
            }
        }
    }
    let mut out = Vec::new();
    let mut left: Vec<i64> = mu.0.to_vec();
    if left.iter().any(|&x| x < 0) {
        return out;
    }
    go(&mut left, &mut Word::new(), &mut out);
    out
}

/// Spanning set of the weight-`mu` part of the two-sided ideal generated by
/// the Serre elements: all `m1 · s · m2` of total weight `mu`.
pub fn serre_ideal_component<S: QField>(datum: &RootDatum, mu: &RootVec) -> Vec<FreeElement<S>> {
    let n = datum.rank;
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let s = serre_element::<S>(datum, i, j);
            let sw = word_weight(n, &s[0].0);
            let rest = mu.sub(&sw);
            if !rest.is_nonneg() {
                continue;
            }
            for left_w in nonneg_below(&rest) {
                let right_w = rest.sub(&left_w);
                for l in words_of_weight(&left_w) {
                    for r in words_of_weight(&right_w) {
                        let elem: FreeElement<S> = s
                            .iter()
                            .map(|(w, c)| {
                                let mut full = l.clone();
                                full.extend_from_slice(w);
                                full.extend_from_slice(&r);
                                (full, c.clone())
                            })
                            .collect();
                        out.push(elem);
                    }
                }
            }
        }
    }
    out
}

fn nonneg_below(mu: &RootVec) -> Vec<RootVec> {
    let mut out = vec![RootVec::zero(mu.0.len())];
    for k in 0..mu.0.len() {
        let mut next = Vec::new();
        for v in &out {
            for c in 0..=mu.0[k] {
                let mut w = v.clone();
                w.0[k] = c;
                next.push(w);
            }
        }
        out = next;
    }
    out
}

/// Dimension of (free algebra / Serre ideal) at `mu`, by row reduction.
pub fn serre_quotient_dim<S: QField>(datum: &RootDatum, mu: &RootVec) -> usize {
    let words = words_of_weight(mu);
    let idx: HashMap<&Word, usize> = words.iter().enumerate().map(|(k, w)| (w, k)).collect();
    let gens = serre_ideal_component::<S>(datum, mu);
    let mut span = crate::linalg::EchelonSpan::<S>::new(words.len());
    for g in gens {
        let mut v = vec![S::zero(); words.len()];
        for (w, c) in g {
            v[idx[&w]] += &c;
        }
        span.insert(&v);
    }
    words.len() - span.rank()
}
