//! The algebra U_q(g): normal form, Hopf structure, braid action, root vectors.
//!
//! Elements are stored in the triangular form `K_λ · F_w · E_v` where `w` and
//! `v` are basis words of the graded components of U(n_-) and U(n_+). PBW
//! coordinates in root vectors are derived from this form on demand (see
//! [`pbw`]).

pub mod braid;
pub mod graded;
pub mod hopf;
pub mod pbw;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rootdata::{build_root_table, RootDatum, RootTable, RootVec, Weight};
use crate::scalar::{q_diff, QField, ScalarError};

pub use braid::BraidConvention;
pub use graded::{GradedBasis, Word};
pub use hopf::Tensor;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum UqgError {
    #[error("integrity error: {0}")]
    Integrity(String),
    #[error("scalar error: {0}")]
    Scalar(#[from] ScalarError),
    #[error("invalid input: {0}")]
    Invalid(String),
}

/// Monomial `K_λ F_w E_v` with `w`, `v` basis words.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Mono {
    pub k: Weight,
    pub f: Word,
    pub e: Word,
}

impl Mono {
    pub fn one(rank: usize) -> Self {
        Mono { k: Weight::zero(rank), f: Word::new(), e: Word::new() }
    }

    pub fn cartan(k: Weight) -> Self {
        Mono { k, f: Word::new(), e: Word::new() }
    }

    pub fn is_cartan(&self) -> bool {
        self.f.is_empty() && self.e.is_empty()
    }

    /// Q-degree: wt(E-part) − wt(F-part).
    pub fn degree(&self, rank: usize) -> RootVec {
        let mut v = RootVec::zero(rank);
        for &l in &self.e {
            v.0[l as usize] += 1;
        }
        for &l in &self.f {
            v.0[l as usize] -= 1;
        }
        v
    }
}

/// Finite linear combination of monomials.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UElem<S> {
    pub terms: BTreeMap<Mono, S>,
}

impl<S: QField> Default for UElem<S> {
    fn default() -> Self {
        UElem { terms: BTreeMap::new() }
    }
}

impl<S: QField> UElem<S> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn mono(m: Mono, c: S) -> Self {
        let mut e = Self::zero();
        e.add_term(m, c);
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn add_term(&mut self, m: Mono, c: S) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_assign(&mut self, o: &Self) {
        for (m, c) in &o.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        r.add_assign(o);
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), -c.clone());
        }
        r
    }

    pub fn scale(&self, c: &S) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        UElem { terms: self.terms.iter().map(|(m, x)| (m.clone(), x.mul_ref(c))).collect() }
    }

    pub fn neg(&self) -> Self {
        UElem { terms: self.terms.iter().map(|(m, x)| (m.clone(), -x.clone())).collect() }
    }

    pub fn coeff(&self, m: &Mono) -> S {
        self.terms.get(m).cloned().unwrap_or_else(S::zero)
    }

    /// Distinct Q-degrees occurring.
    pub fn degrees(&self, rank: usize) -> Vec<RootVec> {
        let mut v: Vec<RootVec> = self.terms.keys().map(|m| m.degree(rank)).collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn is_homogeneous(&self, rank: usize) -> bool {
        self.degrees(rank).len() <= 1
    }

    /// `Some(c)` with `self = c · other`, if such a scalar exists.
    pub fn ratio_to(&self, other: &Self) -> Option<S> {
        let (m, c) = other.terms.iter().next()?;
        let x = self.coeff(m).div(c).ok()?;
        if self.sub(&other.scale(&x)).is_zero() {
            Some(x)
        } else {
            None
        }
    }

    /// Multiply every Cartan factor on the right by `K_μ`, given the scalar
    /// produced by moving `K_μ` to the front of each monomial.
    pub fn map_monos<F: Fn(&Mono) -> (Mono, S)>(&self, f: F) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let (m2, c2) = f(m);
            out.add_term(m2, c.mul_ref(&c2));
        }
        out
    }
}

fn fmt_word(prefix: char, w: &[u8], out: &mut Vec<String>) {
    let mut k = 0;
    while k < w.len() {
        let mut run = 1;
        while k + run < w.len() && w[k + run] == w[k] {
            run += 1;
        }
        if run == 1 {
            out.push(format!("{}{}", prefix, w[k] + 1));
        } else {
            out.push(format!("{}{}^{}", prefix, w[k] + 1, run));
        }
        k += run;
    }
}

impl Mono {
    pub fn factors(&self) -> Vec<String> {
        let mut parts = Vec::new();
        if !self.k.is_zero() {
            parts.push(format!("K{}", self.k));
        }
        fmt_word('F', &self.f, &mut parts);
        fmt_word('E', &self.e, &mut parts);
        parts
    }
}

impl fmt::Display for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts = self.factors();
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join("*"))
        }
    }
}

impl<S: QField> fmt::Display for UElem<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let parts = m.factors();
            if parts.is_empty() {
                write!(f, "({})", c)?;
            } else if *c == S::one() {
                write!(f, "{}", parts.join("*"))?;
            } else {
                write!(f, "({})*{}", c, parts.join("*"))?;
            }
        }
        Ok(())
    }
}

impl<S: QField> fmt::Debug for UElem<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

type WordReduction<S> = Arc<Vec<(Word, S)>>;

/// U_q(g) for one root datum, with its build-once caches.
pub struct Uqg<S> {
    datum: RootDatum,
    table: RootTable,
    graded: GradedBasis<S>,
    words: RwLock<HashMap<Word, WordReduction<S>>>,
    convention: BraidConvention,
    root_vectors: OnceLock<Result<pbw::RootVectors<S>, UqgError>>,
    pbw_change: RwLock<HashMap<(bool, RootVec), Arc<pbw::PbwChange<S>>>>,
}

impl<S: QField> Uqg<S> {
    pub fn new(datum: &RootDatum) -> Self {
        Self::with_convention(datum, BraidConvention::default())
    }

    pub fn with_convention(datum: &RootDatum, convention: BraidConvention) -> Self {
        Uqg {
            datum: datum.clone(),
            table: build_root_table(datum),
            graded: GradedBasis::new(datum),
            words: RwLock::new(HashMap::new()),
            convention,
            root_vectors: OnceLock::new(),
            pbw_change: RwLock::new(HashMap::new()),
        }
    }

    pub fn datum(&self) -> &RootDatum {
        &self.datum
    }

    pub fn table(&self) -> &RootTable {
        &self.table
    }

    pub fn graded(&self) -> &GradedBasis<S> {
        &self.graded
    }

    pub fn convention(&self) -> BraidConvention {
        self.convention
    }

    pub fn rank(&self) -> usize {
        self.datum.rank
    }

    /// q^n.
    pub fn q(&self, n: i64) -> S {
        S::q_int_pow(n, self.datum.root_order)
    }

    /// q_i^n = q^{d_i n}.
    pub fn qi(&self, i: usize, n: i64) -> S {
        self.q(self.datum.d[i] * n)
    }

    fn simple(&self, i: usize) -> RootVec {
        RootVec::simple(self.datum.rank, i)
    }

    // -- constructors

    pub fn one(&self) -> UElem<S> {
        UElem::mono(Mono::one(self.rank()), S::one())
    }

    pub fn scalar(&self, c: S) -> UElem<S> {
        UElem::mono(Mono::one(self.rank()), c)
    }

    pub fn k(&self, lam: &Weight) -> UElem<S> {
        UElem::mono(Mono::cartan(lam.clone()), S::one())
    }

    pub fn k_root(&self, b: &RootVec) -> UElem<S> {
        self.k(&self.datum.root_to_weight(b))
    }

    pub fn e(&self, i: usize) -> UElem<S> {
        let mut m = Mono::one(self.rank());
        m.e.push(i as u8);
        UElem::mono(m, S::one())
    }

    pub fn f(&self, i: usize) -> UElem<S> {
        let mut m = Mono::one(self.rank());
        m.f.push(i as u8);
        UElem::mono(m, S::one())
    }

    /// E_{w_1}···E_{w_h} in normal form.
    pub fn e_word(&self, w: &[u8]) -> Result<UElem<S>, UqgError> {
        let mut out = UElem::zero();
        for (b, c) in self.reduce_word(w)?.iter() {
            out.add_term(Mono { k: Weight::zero(self.rank()), f: Word::new(), e: b.clone() }, c.clone());
        }
        Ok(out)
    }

    pub fn f_word(&self, w: &[u8]) -> Result<UElem<S>, UqgError> {
        let mut out = UElem::zero();
        for (b, c) in self.reduce_word(w)?.iter() {
            out.add_term(Mono { k: Weight::zero(self.rank()), f: b.clone(), e: Word::new() }, c.clone());
        }
        Ok(out)
    }

    /// Basis expansion of an arbitrary word (same table for E and F words).
    pub fn reduce_word(&self, w: &[u8]) -> Result<WordReduction<S>, UqgError> {
        if let Some(r) = self.words.read().unwrap().get(w) {
            return Ok(r.clone());
        }
        let (mu, coords) = self.graded.reduce_word(w)?;
        let basis = self.graded.basis_words(&mu)?;
        let red: Vec<(Word, S)> = basis
            .into_iter()
            .zip(coords)
            .filter(|(_, c)| !c.is_zero())
            .collect();
        let red = Arc::new(red);
        self.words.write().unwrap().insert(Word::from_slice(w), red.clone());
        Ok(red)
    }

    // -- multiplication

    pub fn left_mul_k(&self, lam: &Weight, y: &UElem<S>) -> UElem<S> {
        let mut out = UElem::zero();
        for (m, c) in &y.terms {
            out.add_term(Mono { k: m.k.add(lam), f: m.f.clone(), e: m.e.clone() }, c.clone());
        }
        out
    }

    pub fn left_mul_f(&self, i: usize, y: &UElem<S>) -> Result<UElem<S>, UqgError> {
        let mut out = UElem::zero();
        for (m, c) in &y.terms {
            let coef = c.mul_ref(&self.q(self.datum.pair_wr(&m.k, &self.simple(i))));
            let mut w = Word::new();
            w.push(i as u8);
            w.extend_from_slice(&m.f);
            for (b, x) in self.reduce_word(&w)?.iter() {
                out.add_term(Mono { k: m.k.clone(), f: b.clone(), e: m.e.clone() }, coef.mul_ref(x));
            }
        }
        Ok(out)
    }

    pub fn left_mul_e(&self, i: usize, y: &UElem<S>) -> Result<UElem<S>, UqgError> {
        let n = self.rank();
        let ai = self.simple(i);
        let alpha_w = self.datum.alpha(i);
        let inv_diff = q_diff::<S>(self.datum.d[i], self.datum.root_order).inv()?;
        let mut out = UElem::zero();
        for (m, c) in &y.terms {
            let coef = c.mul_ref(&self.q(-self.datum.pair_wr(&m.k, &ai)));
            // F_w (E_i E_v)
            let mut v = Word::new();
            v.push(i as u8);
            v.extend_from_slice(&m.e);
            for (b, x) in self.reduce_word(&v)?.iter() {
                out.add_term(Mono { k: m.k.clone(), f: m.f.clone(), e: b.clone() }, coef.mul_ref(x));
            }
            // commutator terms
            let mut prefix = RootVec::zero(n);
            for p in 0..m.f.len() {
                let l = m.f[p] as usize;
                if l == i {
                    let ex = self.datum.pair_rr(&ai, &prefix);
                    let mut rest = Word::new();
                    rest.extend_from_slice(&m.f[..p]);
                    rest.extend_from_slice(&m.f[p + 1..]);
                    let base = coef.mul_ref(&inv_diff);
                    let kp = m.k.add(&alpha_w);
                    let km = m.k.sub(&alpha_w);
                    for (b, x) in self.reduce_word(&rest)?.iter() {
                        let t = base.mul_ref(x);
                        out.add_term(
                            Mono { k: kp.clone(), f: b.clone(), e: m.e.clone() },
                            t.mul_ref(&self.q(ex)),
                        );
                        out.add_term(
                            Mono { k: km.clone(), f: b.clone(), e: m.e.clone() },
                            -t.mul_ref(&self.q(-ex)),
                        );
                    }
                }
                prefix.0[l] += 1;
            }
        }
        Ok(out)
    }

    /// `m · y` for a single monomial `m`.
    pub fn mono_mul(&self, m: &Mono, y: &UElem<S>) -> Result<UElem<S>, UqgError> {
        let mut z = y.clone();
        for &l in m.e.iter().rev() {
            z = self.left_mul_e(l as usize, &z)?;
        }
        for &l in m.f.iter().rev() {
            z = self.left_mul_f(l as usize, &z)?;
        }
        Ok(self.left_mul_k(&m.k, &z))
    }

    pub fn mul(&self, x: &UElem<S>, y: &UElem<S>) -> Result<UElem<S>, UqgError> {
        let mut out = UElem::zero();
        for (m, c) in &x.terms {
            let z = self.mono_mul(m, y)?;
            out.add_assign(&z.scale(c));
        }
        Ok(out)
    }

    pub fn mul_all(&self, xs: &[&UElem<S>]) -> Result<UElem<S>, UqgError> {
        let mut acc = self.one();
        for x in xs.iter().rev() {
            acc = self.mul(x, &acc)?;
        }
        Ok(acc)
    }

    pub fn pow(&self, x: &UElem<S>, n: u32) -> Result<UElem<S>, UqgError> {
        let mut acc = self.one();
        for _ in 0..n {
            acc = self.mul(x, &acc)?;
        }
        Ok(acc)
    }

    pub fn commutator(&self, x: &UElem<S>, y: &UElem<S>) -> Result<UElem<S>, UqgError> {
        Ok(self.mul(x, y)?.sub(&self.mul(y, x)?))
    }

    /// Element from a generator word: letters `('E'|'F', i)` or Cartan weights.
    pub fn from_letters(&self, letters: &[Letter]) -> Result<UElem<S>, UqgError> {
        let mut acc = self.one();
        for l in letters.iter().rev() {
            acc = match l {
                Letter::E(i) => self.left_mul_e(*i, &acc)?,
                Letter::F(i) => self.left_mul_f(*i, &acc)?,
                Letter::K(w) => self.left_mul_k(w, &acc),
            };
        }
        Ok(acc)
    }

    pub fn check_index(&self, i: usize) -> Result<(), UqgError> {
        if i >= self.rank() {
            return Err(UqgError::Invalid(format!("generator index {} out of range 1..={}", i + 1, self.rank())));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Letter {
    E(usize),
    F(usize),
    K(Weight),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::{make_root_datum, LieType};
    use crate::scalar::ScalarQ;

    fn alg(t: LieType, n: usize) -> Uqg<ScalarQ> {
        Uqg::new(&make_root_datum(t, n).unwrap())
    }

    #[test]
    fn a1_ef_relation() {
        let u = alg(LieType::A, 1);
        let ef = u.mul(&u.e(0), &u.f(0)).unwrap();
        let fe = u.mul(&u.f(0), &u.e(0)).unwrap();
        let a = u.datum().alpha(0);
        let kk = u.k(&a).sub(&u.k(&a.neg()));
        let c = q_diff::<ScalarQ>(1, u.datum().root_order).inv().unwrap();
        assert_eq!(ef.sub(&fe), kk.scale(&c));
    }

    #[test]
    fn unit_is_neutral() {
        let u = alg(LieType::A, 2);
        let x = u.mul(&u.f(1), &u.e(0)).unwrap();
        assert_eq!(u.mul(&u.one(), &x).unwrap(), x);
        assert_eq!(u.mul(&x, &u.one()).unwrap(), x);
    }

    #[test]
    fn k_commutes_with_grading() {
        let u = alg(LieType::B, 2);
        let lam = Weight::from_slice(&[1, 0]);
        let lhs = u.mul(&u.mul(&u.k(&lam), &u.e(1)).unwrap(), &u.k(&lam.neg())).unwrap();
        let e = u.datum().pair_wr(&lam, &RootVec::simple(2, 1));
        assert_eq!(lhs, u.e(1).scale(&u.q(e)));
    }

    #[test]
    fn serre_relation_vanishes() {
        let u = alg(LieType::A, 2);
        let s = graded::serre_element::<ScalarQ>(u.datum(), 0, 1);
        let mut acc = UElem::zero();
        for (w, c) in s {
            acc.add_assign(&u.e_word(&w).unwrap().scale(&c));
        }
        assert!(acc.is_zero());
    }
}
