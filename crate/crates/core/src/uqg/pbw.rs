//! Root vectors, PBW coordinates, and the straightening constants between
//! products of root vectors.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use super::{Mono, UElem, Uqg, UqgError, Word};
use crate::linalg::Matrix;
use crate::rootdata::{RootVec, Weight};
use crate::scalar::{EvalQ, QField};

/// Root vectors in ≺-order: `e[k] = E_{β_k}`, `f[k] = F_{β_k}`.
#[derive(Clone)]
pub struct RootVectors<S> {
    pub roots: Vec<RootVec>,
    pub e: Vec<UElem<S>>,
    pub f: Vec<UElem<S>>,
}

/// PBW monomial `K_λ F_{β_1}^{i_1}···F_{β_n}^{i_n} E_{β_1}^{j_1}···E_{β_n}^{j_n}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PbwMonomial {
    pub kappa: Weight,
    pub fexp: Vec<u32>,
    pub eexp: Vec<u32>,
}

impl PbwMonomial {
    pub fn degree(&self, roots: &[RootVec]) -> RootVec {
        let mut v = RootVec::zero(self.kappa.0.len());
        for (k, r) in roots.iter().enumerate() {
            v = v.add(&r.scale(self.eexp[k] as i64)).sub(&r.scale(self.fexp[k] as i64));
        }
        v
    }

    pub fn total_degree(&self) -> u32 {
        self.fexp.iter().sum::<u32>() + self.eexp.iter().sum::<u32>()
    }
}

impl fmt::Display for PbwMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if !self.kappa.is_zero() {
            parts.push(format!("K{}", self.kappa));
        }
        for (tag, exps) in [("F", &self.fexp), ("E", &self.eexp)] {
            for (k, &x) in exps.iter().enumerate() {
                match x {
                    0 => {}
                    1 => parts.push(format!("{}b{}", tag, k + 1)),
                    _ => parts.push(format!("{}b{}^{}", tag, k + 1, x)),
                }
            }
        }
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join("*"))
        }
    }
}

#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PbwElement<S> {
    pub terms: BTreeMap<PbwMonomial, S>,
}

impl<S: QField> PbwElement<S> {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, m: PbwMonomial, c: S) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(m).or_insert_with(S::zero);
        *e += &c;
        if e.is_zero() {
            // re-find to remove; keeps the map free of zeros
            let k = self.terms.iter().find(|(_, v)| v.is_zero()).map(|(k, _)| k.clone());
            if let Some(k) = k {
                self.terms.remove(&k);
            }
        }
    }
}

impl<S: QField> fmt::Display for PbwElement<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| if *c == S::one() { m.to_string() } else { format!("({})*{}", c, m) })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl<S: QField> fmt::Debug for PbwElement<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Change of basis at one weight between basis words and ordered PBW monomials.
pub struct PbwChange<S> {
    pub exps: Vec<Vec<u32>>,
    /// Column k: coordinates of PBW monomial `exps[k]` in the word basis.
    pub to_words: Matrix<S>,
    to_pbw: OnceLock<Matrix<S>>,
}

impl<S: QField> PbwChange<S> {
    /// Inverse change of basis, built on first use.
    pub fn to_pbw(&self) -> &Matrix<S> {
        self.to_pbw
            .get_or_init(|| self.to_words.inverse().expect("independence was certified at construction"))
    }

    /// PBW coordinates of a word-basis vector.
    pub fn solve(&self, coords: &[S]) -> Vec<S> {
        match self.to_pbw.get() {
            Some(inv) => inv.apply(coords),
            None => self.to_words.solve(coords).expect("square invertible system"),
        }
    }

    /// PBW coordinates using only the columns accepted by `keep`, if the
    /// vector lies in their span.
    pub fn solve_within<F: Fn(&[u32]) -> bool>(&self, coords: &[S], keep: F) -> Option<Vec<(Vec<u32>, S)>> {
        let cols: Vec<usize> = (0..self.exps.len()).filter(|&c| keep(&self.exps[c])).collect();
        if cols.is_empty() {
            return if coords.iter().all(|c| c.is_zero()) { Some(Vec::new()) } else { None };
        }
        let mut sub = Matrix::zeros(self.to_words.rows(), cols.len());
        for r in 0..self.to_words.rows() {
            for (k, &c) in cols.iter().enumerate() {
                sub[(r, k)] = self.to_words[(r, c)].clone();
            }
        }
        let x = sub.solve(coords)?;
        Some(cols.iter().map(|&c| self.exps[c].clone()).zip(x).filter(|(_, c)| !c.is_zero()).collect())
    }
}

/// Full rank check, exact at `s = 2` first (a nonzero minor there is a
/// nonzero minor over ℚ(s)), falling back to ℚ(s).
fn certify_invertible<S: QField>(m: &Matrix<S>) -> bool {
    let n = m.rows();
    if n != m.cols() {
        return false;
    }
    let mut probe = Matrix::<EvalQ>::zeros(n, n);
    let mut ok = true;
    'outer: for r in 0..n {
        for c in 0..n {
            match m[(r, c)].specialize() {
                Some(v) => probe[(r, c)] = EvalQ(v),
                None => {
                    ok = false;
                    break 'outer;
                }
            }
        }
    }
    if ok && probe.rank() == n {
        return true;
    }
    m.rank() == n
}

/// All exponent vectors over `roots` (in order) summing to `mu`.
pub fn pbw_exponents(roots: &[RootVec], mu: &RootVec) -> Vec<Vec<u32>> {
    fn go(roots: &[RootVec], k: usize, left: &RootVec, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if k == roots.len() {
            if left.is_zero() {
                out.push(cur.clone());
            }
            return;
        }
        let mut rest = left.clone();
        let mut c = 0;
        loop {
            cur.push(c);
            go(roots, k + 1, &rest, cur, out);
            cur.pop();
            rest = rest.sub(&roots[k]);
            if !rest.is_nonneg() {
                break;
            }
            c += 1;
        }
    }
    let mut out = Vec::new();
    go(roots, 0, mu, &mut Vec::new(), &mut out);
    out
}

impl<S: QField> Uqg<S> {
    pub fn root_vectors(&self) -> Result<&RootVectors<S>, UqgError> {
        self.root_vectors
            .get_or_init(|| self.build_root_vectors())
            .as_ref()
            .map_err(|e| e.clone())
    }

    /// Installs previously computed root vectors (e.g. from a cache) before
    /// first use. Returns false, leaving the algebra untouched, if they were
    /// already built or do not have the weights of the sweep.
    pub fn seed_root_vectors(&self, rv: RootVectors<S>) -> bool {
        let word = &self.table.reduced_word;
        let n = self.rank();
        if rv.roots.len() != word.len() || rv.e.len() != word.len() || rv.f.len() != word.len() {
            return false;
        }
        for k in 0..word.len() {
            let beta = crate::rootdata::sweep_root(&self.datum, word, k);
            let ok_e = rv.e[k].terms.keys().all(|m| m.k.is_zero() && m.f.is_empty() && m.degree(n) == beta);
            let ok_f = rv.f[k].terms.keys().all(|m| m.k.is_zero() && m.e.is_empty() && m.degree(n) == beta.neg());
            if rv.roots[k] != beta || !ok_e || !ok_f || rv.e[k].is_zero() || rv.f[k].is_zero() {
                return false;
            }
        }
        self.root_vectors.set(Ok(rv)).is_ok()
    }

    fn build_root_vectors(&self) -> Result<RootVectors<S>, UqgError> {
        let word = self.table.reduced_word.clone();
        let mut roots = Vec::new();
        let mut es = Vec::new();
        let mut fs = Vec::new();
        for k in 0..word.len() {
            let beta = crate::rootdata::sweep_root(&self.datum, &word, k);
            let mut xe = self.e(word[k]);
            let mut xf = self.f(word[k]);
            for &i in word[..k].iter().rev() {
                xe = self.braid_t(i, &xe)?;
                xf = self.braid_t(i, &xf)?;
            }
            let n = self.rank();
            for (m, _) in &xe.terms {
                if !m.k.is_zero() || !m.f.is_empty() || m.degree(n) != beta {
                    return Err(UqgError::Integrity(format!("E root vector {} left U^{}(n+)", k + 1, beta)));
                }
            }
            for (m, _) in &xf.terms {
                if !m.k.is_zero() || !m.e.is_empty() || m.degree(n) != beta.neg() {
                    return Err(UqgError::Integrity(format!("F root vector {} left U^-{}(n-)", k + 1, beta)));
                }
            }
            if xe.is_zero() || xf.is_zero() {
                return Err(UqgError::Integrity(format!("root vector {} vanishes", k + 1)));
            }
            roots.push(beta);
            es.push(xe);
            fs.push(xf);
        }
        Ok(RootVectors { roots, e: es, f: fs })
    }

    /// Coordinates of a pure E-element (or F-element when `minus`) at weight `mu`.
    pub fn pure_coords(&self, x: &UElem<S>, mu: &RootVec, minus: bool) -> Result<Vec<S>, UqgError> {
        let comp = self
            .graded
            .component(mu)?
            .ok_or_else(|| UqgError::Invalid(format!("weight {} not in the positive cone", mu)))?;
        let mut v = vec![S::zero(); comp.dim()];
        for (m, c) in &x.terms {
            let (w, other) = if minus { (&m.f, &m.e) } else { (&m.e, &m.f) };
            if !m.k.is_zero() || !other.is_empty() {
                return Err(UqgError::Invalid(format!("{} is not a pure {} element", m, if minus { "F" } else { "E" })));
            }
            let idx = *comp
                .index
                .get(w)
                .ok_or_else(|| UqgError::Invalid(format!("monomial {} has the wrong weight", m)))?;
            v[idx] += c;
        }
        Ok(v)
    }

    pub fn pbw_change(&self, mu: &RootVec, minus: bool) -> Result<Arc<PbwChange<S>>, UqgError> {
        if let Some(c) = self.pbw_change.read().unwrap().get(&(minus, mu.clone())) {
            return Ok(c.clone());
        }
        let rv = self.root_vectors()?;
        let exps = pbw_exponents(&rv.roots, mu);
        let dim = self.graded.dim(mu)?;
        if exps.len() != dim {
            return Err(UqgError::Integrity(format!(
                "{} PBW monomials against dimension {} at {}",
                exps.len(),
                dim,
                mu
            )));
        }
        let mut cols: Vec<Vec<S>> = Vec::with_capacity(dim);
        for ex in &exps {
            let el = self.pbw_product(ex, minus)?;
            cols.push(self.pure_coords(&el, mu, minus)?);
        }
        let mut to_words = Matrix::zeros(dim, dim);
        for (c, col) in cols.iter().enumerate() {
            for (r, x) in col.iter().enumerate() {
                to_words[(r, c)] = x.clone();
            }
        }
        if !certify_invertible(&to_words) {
            return Err(UqgError::Integrity(format!("PBW monomials at {} are dependent", mu)));
        }
        let ch = Arc::new(PbwChange { exps, to_words, to_pbw: OnceLock::new() });
        self.pbw_change.write().unwrap().insert((minus, mu.clone()), ch.clone());
        Ok(ch)
    }

    /// Ordered product of root-vector powers.
    pub fn pbw_product(&self, exps: &[u32], minus: bool) -> Result<UElem<S>, UqgError> {
        let rv = self.root_vectors()?;
        let gens = if minus { &rv.f } else { &rv.e };
        let mut acc = self.one();
        for k in (0..exps.len()).rev() {
            for _ in 0..exps[k] {
                acc = self.mul(&gens[k], &acc)?;
            }
        }
        Ok(acc)
    }

    pub fn from_pbw(&self, p: &PbwElement<S>) -> Result<UElem<S>, UqgError> {
        let mut out = UElem::zero();
        for (m, c) in &p.terms {
            let fpart = self.pbw_product(&m.fexp, true)?;
            let epart = self.pbw_product(&m.eexp, false)?;
            let prod = self.left_mul_k(&m.kappa, &self.mul(&fpart, &epart)?);
            out.add_assign(&prod.scale(c));
        }
        Ok(out)
    }

    pub fn to_pbw(&self, x: &UElem<S>) -> Result<PbwElement<S>, UqgError> {
        let n = self.rank();
        let mut out = PbwElement { terms: BTreeMap::new() };
        for (m, c) in &x.terms {
            let fw = super::graded::word_weight(n, &m.f);
            let ew = super::graded::word_weight(n, &m.e);
            let fres = self.pbw_coords_of_word(&m.f, &fw, true)?;
            let eres = self.pbw_coords_of_word(&m.e, &ew, false)?;
            for (fe, fc) in &fres {
                for (ee, ec) in &eres {
                    let pm = PbwMonomial { kappa: m.k.clone(), fexp: fe.clone(), eexp: ee.clone() };
                    out.add_term(pm, c.mul_ref(fc).mul_ref(ec));
                }
            }
        }
        Ok(out)
    }

    fn pbw_coords_of_word(&self, w: &Word, mu: &RootVec, minus: bool) -> Result<Vec<(Vec<u32>, S)>, UqgError> {
        let ch = self.pbw_change(mu, minus)?;
        let comp = self.graded.component(mu)?.expect("nonnegative");
        let idx = comp.index[w];
        let inv = ch.to_pbw();
        let mut out = Vec::new();
        for (r, ex) in ch.exps.iter().enumerate() {
            let c = inv[(r, idx)].clone();
            if !c.is_zero() {
                out.push((ex.clone(), c));
            }
        }
        Ok(out)
    }

    /// `E_{β_i}E_{β_j} − q^{⟨β_i,β_j⟩}E_{β_j}E_{β_i}` (or the same expression
    /// in the F_β) in PBW coordinates, keyed by exponent vectors.
    ///
    /// With T_i acting on F_j in the mirrored order, the F root vectors obey
    /// the relation with the same exponent q^{+⟨β_i,β_j⟩}; with q^{−⟨β_i,β_j⟩}
    /// the left side picks up F_{β_i}F_{β_j} itself.
    pub fn ls_constants(&self, i: usize, j: usize, minus: bool) -> Result<BTreeMap<Vec<u32>, S>, UqgError> {
        if i >= j {
            return Err(UqgError::Invalid(format!("ls_constants needs i < j, got {} and {}", i + 1, j + 1)));
        }
        let rv = self.root_vectors()?;
        let (bi, bj) = (&rv.roots[i], &rv.roots[j]);
        let p = self.datum.pair_rr(bi, bj);
        let gens = if minus { &rv.f } else { &rv.e };
        let scalar = self.q(p);
        let lhs = self
            .mul(&gens[i], &gens[j])?
            .sub(&self.mul(&gens[j], &gens[i])?.scale(&scalar));
        let mu = bi.add(bj);
        let coords = self.pure_coords(&lhs, &mu, minus)?;
        let ch = self.pbw_change(&mu, minus)?;
        // Try the expected support first; PBW monomials are independent, so a
        // solution there is the expansion.
        let between = |ex: &[u32]| ex.iter().enumerate().all(|(k, &x)| x == 0 || (k > i && k < j));
        if let Some(sol) = ch.solve_within(&coords, between) {
            return Ok(sol.into_iter().collect());
        }
        let pc = ch.solve(&coords);
        Ok(ch.exps.iter().cloned().zip(pc).filter(|(_, c)| !c.is_zero()).collect())
    }

    /// E-element from word coordinates at `mu`.
    pub fn from_coords(&self, mu: &RootVec, coords: &[S], minus: bool) -> Result<UElem<S>, UqgError> {
        let words = self.graded.basis_words(mu)?;
        let mut out = UElem::zero();
        for (w, c) in words.into_iter().zip(coords) {
            let mut m = Mono::one(self.rank());
            if minus {
                m.f = w;
            } else {
                m.e = w;
            }
            out.add_term(m, c.clone());
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::{make_root_datum, LieType};
    use crate::scalar::ScalarQ;

    #[test]
    fn root_vectors_have_root_weights() {
        for (t, n) in [(LieType::A, 2), (LieType::B, 2), (LieType::C, 2), (LieType::A, 3), (LieType::C, 3)] {
            let u: Uqg<ScalarQ> = Uqg::new(&make_root_datum(t, n).unwrap());
            let rv = u.root_vectors().unwrap();
            assert_eq!(rv.roots.len(), u.datum().positive_roots().len());
        }
    }

    #[test]
    fn pbw_round_trip_b2() {
        let u: Uqg<ScalarQ> = Uqg::new(&make_root_datum(LieType::B, 2).unwrap());
        let x = u.mul_all(&[&u.f(0), &u.f(1), &u.f(1), &u.e(1), &u.e(0)]).unwrap();
        let p = u.to_pbw(&x).unwrap();
        assert_eq!(u.from_pbw(&p).unwrap(), x);
    }

    #[test]
    fn a2_straightening() {
        let u: Uqg<ScalarQ> = Uqg::new(&make_root_datum(LieType::A, 2).unwrap());
        // β1 and β3 are simple, β2 is their sum
        let c = u.ls_constants(0, 2, false).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c.keys().next().unwrap(), &vec![0, 1, 0]);
    }
}
