//! Coproduct, counit and antipode, plus tensor powers of U_q(g).
//!
//! Δ(K_λ) = K_λ⊗K_λ, Δ(E_i) = E_i⊗K_i + 1⊗E_i, Δ(F_i) = F_i⊗1 + K_i^{-1}⊗F_i,
//! S(E_i) = −E_iK_i^{-1}, S(F_i) = −K_iF_i, S(K_λ) = K_{−λ}.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use super::{Mono, UElem, Uqg, UqgError, Word};
use crate::rootdata::{RootVec, Weight};
use crate::scalar::QField;

pub type TensorKey = SmallVec<[Mono; 3]>;

/// Element of U^{⊗n}.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tensor<S> {
    pub arity: usize,
    pub terms: BTreeMap<TensorKey, S>,
}

/// Element of U⊗U.
pub type TensorU<S> = Tensor<S>;

impl<S: QField> Tensor<S> {
    pub fn zero(arity: usize) -> Self {
        Tensor { arity, terms: BTreeMap::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, k: TensorKey, c: S) {
        debug_assert_eq!(k.len(), self.arity);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(k) {
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
        for (k, c) in &o.terms {
            self.add_term(k.clone(), c.clone());
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        r.add_assign(o);
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (k, c) in &o.terms {
            r.add_term(k.clone(), -c.clone());
        }
        r
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut r = Self::zero(self.arity);
        for (k, x) in &self.terms {
            r.add_term(k.clone(), x.mul_ref(c));
        }
        r
    }

    /// a ⊗ b for elements of U.
    pub fn pure(a: &UElem<S>, b: &UElem<S>) -> Self {
        let mut r = Self::zero(2);
        for (m1, c1) in &a.terms {
            for (m2, c2) in &b.terms {
                r.add_term(SmallVec::from_vec(vec![m1.clone(), m2.clone()]), c1.mul_ref(c2));
            }
        }
        r
    }

    /// Extend by one more tensor factor on the right.
    pub fn tensor_right(&self, b: &UElem<S>) -> Self {
        let mut r = Self::zero(self.arity + 1);
        for (k, c1) in &self.terms {
            for (m2, c2) in &b.terms {
                let mut key = k.clone();
                key.push(m2.clone());
                r.add_term(key, c1.mul_ref(c2));
            }
        }
        r
    }

    /// Q^n-degrees of the terms.
    pub fn degrees(&self, rank: usize) -> Vec<Vec<RootVec>> {
        let mut v: Vec<Vec<RootVec>> =
            self.terms.keys().map(|k| k.iter().map(|m| m.degree(rank)).collect()).collect();
        v.sort();
        v.dedup();
        v
    }

    /// Leg `i` as a list of (other legs, element) is rarely needed; this
    /// flips a 2-tensor.
    pub fn flip(&self) -> Self {
        assert_eq!(self.arity, 2);
        let mut r = Self::zero(2);
        for (k, c) in &self.terms {
            r.add_term(SmallVec::from_vec(vec![k[1].clone(), k[0].clone()]), c.clone());
        }
        r
    }

    /// `Some(c)` with `self = c · other`.
    pub fn ratio_to(&self, other: &Self) -> Option<S> {
        let (k, c) = other.terms.iter().next()?;
        let x = self.terms.get(k)?.div(c).ok()?;
        if self.sub(&other.scale(&x)).is_zero() {
            Some(x)
        } else {
            None
        }
    }
}

impl<S: QField> fmt::Display for Tensor<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in &self.terms {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let legs: Vec<String> = k.iter().map(|m| format!("({})", m)).collect();
            if *c == S::one() {
                write!(f, "{}", legs.join(" | "))?;
            } else {
                write!(f, "({})*{}", c, legs.join(" | "))?;
            }
        }
        Ok(())
    }
}

impl<S: QField> fmt::Debug for Tensor<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// One term of Δ of a pure F- or E-word: `K_{left k}·(left word) ⊗ K_{right k}·(right word)`.
struct SplitTerm {
    exp: i64,
    left_k: RootVec,
    left: Word,
    right_k: RootVec,
    right: Word,
}

impl<S: QField> Uqg<S> {
    fn split_f(&self, w: &[u8]) -> Vec<SplitTerm> {
        let n = self.rank();
        let h = w.len();
        let mut out = Vec::with_capacity(1 << h);
        for mask in 0u32..(1u32 << h) {
            // bit set: F goes to the right leg, left leg gets K_i^{-1}
            let mut exp = 0;
            let mut left_k = RootVec::zero(n);
            let mut left = Word::new();
            let mut right = Word::new();
            let mut kept = RootVec::zero(n);
            for t in 0..h {
                let l = w[t] as usize;
                let a = RootVec::simple(n, l);
                if mask >> t & 1 == 1 {
                    exp -= self.datum.pair_rr(&a, &kept);
                    left_k.0[l] -= 1;
                    right.push(w[t]);
                } else {
                    left.push(w[t]);
                    kept.0[l] += 1;
                }
            }
            out.push(SplitTerm { exp, left_k, left, right_k: RootVec::zero(n), right });
        }
        out
    }

    fn split_e(&self, v: &[u8]) -> Vec<SplitTerm> {
        let n = self.rank();
        let h = v.len();
        let mut out = Vec::with_capacity(1 << h);
        for mask in 0u32..(1u32 << h) {
            // bit set: E goes to the left leg, right leg gets K_i
            let mut exp = 0;
            let mut right_k = RootVec::zero(n);
            let mut left = Word::new();
            let mut right = Word::new();
            let mut kept = RootVec::zero(n);
            for t in 0..h {
                let l = v[t] as usize;
                let a = RootVec::simple(n, l);
                if mask >> t & 1 == 1 {
                    exp -= self.datum.pair_rr(&a, &kept);
                    right_k.0[l] += 1;
                    left.push(v[t]);
                } else {
                    right.push(v[t]);
                    kept.0[l] += 1;
                }
            }
            out.push(SplitTerm { exp, left_k: RootVec::zero(n), left, right_k, right });
        }
        out
    }

    pub fn coproduct_mono(&self, m: &Mono) -> Result<Tensor<S>, UqgError> {
        let n = self.rank();
        let mut out = Tensor::zero(2);
        let fs = self.split_f(&m.f);
        let es = self.split_e(&m.e);
        for a in &fs {
            let lf = self.reduce_word(&a.left)?;
            let rf = self.reduce_word(&a.right)?;
            for b in &es {
                // right leg: K_λ F_{w2} K_b E_{v2} = q^{<b, wt w2>} K_{λ+b} F_{w2} E_{v2}
                let w2 = super::graded::word_weight(n, &a.right);
                let exp = a.exp + b.exp + self.datum.pair_rr(&b.right_k, &w2);
                let coef = self.q(exp);
                let lk = m.k.add(&self.datum.root_to_weight(&a.left_k));
                let rk = m.k.add(&self.datum.root_to_weight(&b.right_k));
                let le = self.reduce_word(&b.left)?;
                let re = self.reduce_word(&b.right)?;
                for (fw1, c1) in lf.iter() {
                    for (ev1, c2) in le.iter() {
                        let c12 = coef.mul_ref(c1).mul_ref(c2);
                        let left = Mono { k: lk.clone(), f: fw1.clone(), e: ev1.clone() };
                        for (fw2, c3) in rf.iter() {
                            for (ev2, c4) in re.iter() {
                                let right = Mono { k: rk.clone(), f: fw2.clone(), e: ev2.clone() };
                                out.add_term(
                                    SmallVec::from_vec(vec![left.clone(), right]),
                                    c12.mul_ref(c3).mul_ref(c4),
                                );
                            }
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn coproduct(&self, x: &UElem<S>) -> Result<Tensor<S>, UqgError> {
        let mut out = Tensor::zero(2);
        for (m, c) in &x.terms {
            out.add_assign(&self.coproduct_mono(m)?.scale(c));
        }
        Ok(out)
    }

    /// Apply Δ to leg `leg` of a tensor.
    pub fn coproduct_leg(&self, t: &Tensor<S>, leg: usize) -> Result<Tensor<S>, UqgError> {
        let mut out = Tensor::zero(t.arity + 1);
        for (k, c) in &t.terms {
            let d = self.coproduct_mono(&k[leg])?;
            for (dk, dc) in &d.terms {
                let mut key: TensorKey = SmallVec::new();
                key.extend(k[..leg].iter().cloned());
                key.extend(dk.iter().cloned());
                key.extend(k[leg + 1..].iter().cloned());
                out.add_term(key, c.mul_ref(dc));
            }
        }
        Ok(out)
    }

    pub fn counit(&self, x: &UElem<S>) -> S {
        let mut acc = S::zero();
        for (m, c) in &x.terms {
            if m.is_cartan() {
                acc += c;
            }
        }
        acc
    }

    pub fn antipode_mono(&self, m: &Mono) -> Result<UElem<S>, UqgError> {
        // S(K F_w E_v) = S(E_v) S(F_w) K_{-λ}, S reverses words
        let mut acc = self.k(&m.k.neg());
        for &l in m.f.iter() {
            let i = l as usize;
            let sf = self.mul(&self.k(&self.datum.alpha(i)), &self.f(i))?.neg();
            acc = self.mul(&sf, &acc)?;
        }
        for &l in m.e.iter() {
            let i = l as usize;
            let se = self.mul(&self.e(i), &self.k(&self.datum.alpha(i).neg()))?.neg();
            acc = self.mul(&se, &acc)?;
        }
        Ok(acc)
    }

    pub fn antipode(&self, x: &UElem<S>) -> Result<UElem<S>, UqgError> {
        let mut out = UElem::zero();
        for (m, c) in &x.terms {
            out.add_assign(&self.antipode_mono(m)?.scale(c));
        }
        Ok(out)
    }

    /// Multiply all legs of a tensor into U.
    pub fn multiply_legs(&self, t: &Tensor<S>) -> Result<UElem<S>, UqgError> {
        let mut out = UElem::zero();
        for (k, c) in &t.terms {
            let mut acc = self.one();
            for m in k.iter().rev() {
                acc = self.mono_mul(m, &acc)?;
            }
            out.add_assign(&acc.scale(c));
        }
        Ok(out)
    }

    /// Legwise product in U^{⊗n}.
    pub fn tensor_mul(&self, a: &Tensor<S>, b: &Tensor<S>) -> Result<Tensor<S>, UqgError> {
        assert_eq!(a.arity, b.arity);
        let mut out = Tensor::zero(a.arity);
        for (ka, ca) in &a.terms {
            for (kb, cb) in &b.terms {
                let mut legs: Vec<UElem<S>> = Vec::with_capacity(a.arity);
                for (ma, mb) in ka.iter().zip(kb.iter()) {
                    legs.push(self.mono_mul(ma, &UElem::mono(mb.clone(), S::one()))?);
                }
                let c = ca.mul_ref(cb);
                let mut partial: Vec<(TensorKey, S)> = vec![(SmallVec::new(), c)];
                for leg in legs {
                    let mut next = Vec::new();
                    for (k, c) in &partial {
                        for (m, x) in &leg.terms {
                            let mut k2 = k.clone();
                            k2.push(m.clone());
                            next.push((k2, c.mul_ref(x)));
                        }
                    }
                    partial = next;
                }
                for (k, c) in partial {
                    out.add_term(k, c);
                }
            }
        }
        Ok(out)
    }

    /// Apply a linear map to one leg.
    pub fn map_leg<F>(&self, t: &Tensor<S>, leg: usize, f: F) -> Result<Tensor<S>, UqgError>
    where
        F: Fn(&Mono) -> Result<UElem<S>, UqgError>,
    {
        let mut out = Tensor::zero(t.arity);
        for (k, c) in &t.terms {
            let img = f(&k[leg])?;
            for (m, x) in &img.terms {
                let mut key = k.clone();
                key[leg] = m.clone();
                out.add_term(key, c.mul_ref(x));
            }
        }
        Ok(out)
    }

    /// K_λ ⊗ K_μ as a tensor.
    pub fn kk(&self, a: &Weight, b: &Weight) -> Tensor<S> {
        Tensor::pure(&self.k(a), &self.k(b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::{make_root_datum, LieType};
    use crate::scalar::ScalarQ;

    #[test]
    fn coproduct_of_e_has_two_terms() {
        let u: Uqg<ScalarQ> = Uqg::new(&make_root_datum(LieType::A, 1).unwrap());
        let d = u.coproduct(&u.e(0)).unwrap();
        let expect = Tensor::pure(&u.e(0), &u.k(&u.datum().alpha(0))).add(&Tensor::pure(&u.one(), &u.e(0)));
        assert_eq!(d, expect);
    }

    #[test]
    fn coproduct_is_multiplicative_on_ef() {
        let u: Uqg<ScalarQ> = Uqg::new(&make_root_datum(LieType::A, 2).unwrap());
        let x = u.mul(&u.e(0), &u.f(0)).unwrap();
        let lhs = u.coproduct(&x).unwrap();
        let rhs = u
            .tensor_mul(&u.coproduct(&u.e(0)).unwrap(), &u.coproduct(&u.f(0)).unwrap())
            .unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn antipode_law_on_e() {
        let u: Uqg<ScalarQ> = Uqg::new(&make_root_datum(LieType::A, 1).unwrap());
        let d = u.coproduct(&u.e(0)).unwrap();
        let s = u.map_leg(&d, 0, |m| u.antipode_mono(m)).unwrap();
        assert!(u.multiply_legs(&s).unwrap().is_zero());
    }
}
