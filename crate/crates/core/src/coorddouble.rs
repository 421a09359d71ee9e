//! Words in the matrix coefficients `u^i_j`, the r-form on words, the
//! double A⋈A, the maps ι∘θ°, ι∘m° and ζ′, and the type-A relation ideal.
//!
//! Elements of A are free words; relations are only imposed inside
//! [`RelationIdeal`].

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::lfun::{LKind, Lfun, RMatrixVV, VectorRep};
use crate::linalg::{EchelonSpan, Matrix};
use crate::rootdata::{LieType, RootVec};
use crate::scalar::QField;
use crate::uqg::{Mono, Tensor, UElem, Uqg, UqgError};

/// `u^{i_1}_{j_1}···u^{i_n}_{j_n}`, 0-based.
pub type CoordWord = Vec<(u8, u8)>;

pub fn word_counit(w: &[(u8, u8)]) -> bool {
    w.iter().all(|&(i, j)| i == j)
}

/// All terms `w_(1) ⊗ w_(2)` of Δ(w).
pub fn splits(w: &[(u8, u8)], n: usize) -> Vec<(CoordWord, CoordWord)> {
    let mut out = vec![(Vec::new(), Vec::new())];
    for &(i, j) in w {
        let mut next = Vec::with_capacity(out.len() * n);
        for (a, b) in &out {
            for k in 0..n as u8 {
                let mut a2 = a.clone();
                let mut b2 = b.clone();
                a2.push((i, k));
                b2.push((k, j));
                next.push((a2, b2));
            }
        }
        out = next;
    }
    out
}

/// Terms of Δ^{(2)}(w).
pub fn splits3(w: &[(u8, u8)], n: usize) -> Vec<(CoordWord, CoordWord, CoordWord)> {
    let mut out = Vec::new();
    for (a, bc) in splits(w, n) {
        for (b, c) in splits(&bc, n) {
            out.push((a.clone(), b, c));
        }
    }
    out
}

pub fn format_word(w: &[(u8, u8)]) -> String {
    if w.is_empty() {
        return "1".into();
    }
    w.iter().map(|&(i, j)| format!("u{}_{}", i + 1, j + 1)).collect::<Vec<_>>().join("*")
}

/// Finite linear combination of words.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoordElement<S> {
    pub terms: BTreeMap<CoordWord, S>,
}

impl<S: QField> CoordElement<S> {
    pub fn zero() -> Self {
        CoordElement { terms: BTreeMap::new() }
    }

    pub fn word(w: CoordWord) -> Self {
        let mut e = Self::zero();
        e.add_term(w, S::one());
        e
    }

    pub fn one() -> Self {
        Self::word(Vec::new())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, w: CoordWord, c: S) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(w.clone()).or_insert_with(S::zero);
        *e += &c;
        if e.is_zero() {
            self.terms.remove(&w);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (w, c) in &o.terms {
            r.add_term(w.clone(), c.clone());
        }
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&-S::one()))
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut r = Self::zero();
        for (w, x) in &self.terms {
            r.add_term(w.clone(), x.mul_ref(c));
        }
        r
    }

    /// Concatenation product.
    pub fn mul(&self, o: &Self) -> Self {
        let mut r = Self::zero();
        for (a, x) in &self.terms {
            for (b, y) in &o.terms {
                let mut w = a.clone();
                w.extend_from_slice(b);
                r.add_term(w, x.mul_ref(y));
            }
        }
        r
    }

    pub fn max_len(&self) -> usize {
        self.terms.keys().map(|w| w.len()).max().unwrap_or(0)
    }
}

impl<S: QField> fmt::Display for CoordElement<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(w, c)| if *c == S::one() { format_word(w) } else { format!("({})*{}", c, format_word(w)) })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl<S: QField> fmt::Debug for CoordElement<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

type Memo<S> = Mutex<HashMap<(CoordWord, CoordWord), S>>;

/// The r-form and its convolution inverse r̄ on free words, from R on V⊗V.
///
/// Extension laws:
///   r(ab⊗c) = r(a⊗c_(1)) r(b⊗c_(2)),   r(x⊗cd) = r(x_(1)⊗d) r(x_(2)⊗c),
///   r̄(cd⊗x) = r̄(d⊗x_(1)) r̄(c⊗x_(2)),  r̄(x⊗cd) = r̄(x_(1)⊗c) r̄(x_(2)⊗d).
pub struct RForm<S> {
    pub n: usize,
    r: Matrix<S>,
    rinv: Matrix<S>,
    memo_r: Memo<S>,
    memo_rbar: Memo<S>,
}

impl<S: QField> RForm<S> {
    pub fn new(r: &RMatrixVV<S>) -> Self {
        RForm {
            n: r.dim,
            r: r.matrix.clone(),
            rinv: r.inverse.clone(),
            memo_r: Mutex::new(HashMap::new()),
            memo_rbar: Mutex::new(HashMap::new()),
        }
    }

    fn base(&self, m: &Matrix<S>, a: (u8, u8), b: (u8, u8)) -> S {
        let n = self.n;
        let (i, j, k, l) = (a.0 as usize, a.1 as usize, b.0 as usize, b.1 as usize);
        m[(i * n + k, j * n + l)].clone()
    }

    fn eps(w: &[(u8, u8)]) -> S {
        if word_counit(w) {
            S::one()
        } else {
            S::zero()
        }
    }

    pub fn r(&self, a: &[(u8, u8)], b: &[(u8, u8)]) -> S {
        if a.is_empty() {
            return Self::eps(b);
        }
        if b.is_empty() {
            return Self::eps(a);
        }
        if a.len() == 1 && b.len() == 1 {
            return self.base(&self.r, a[0], b[0]);
        }
        let key = (a.to_vec(), b.to_vec());
        if let Some(v) = self.memo_r.lock().unwrap().get(&key) {
            return v.clone();
        }
        let mut acc = S::zero();
        if b.len() >= 2 {
            let (c, d) = (&b[..1], &b[1..]);
            for (x1, x2) in splits(a, self.n) {
                let t = self.r(&x1, d);
                if t.is_zero() {
                    continue;
                }
                acc += &t.mul_ref(&self.r(&x2, c));
            }
        } else {
            let (x, y) = (&a[..1], &a[1..]);
            for (c1, c2) in splits(b, self.n) {
                let t = self.r(x, &c1);
                if t.is_zero() {
                    continue;
                }
                acc += &t.mul_ref(&self.r(y, &c2));
            }
        }
        self.memo_r.lock().unwrap().insert(key, acc.clone());
        acc
    }

    pub fn rbar(&self, a: &[(u8, u8)], b: &[(u8, u8)]) -> S {
        if a.is_empty() {
            return Self::eps(b);
        }
        if b.is_empty() {
            return Self::eps(a);
        }
        if a.len() == 1 && b.len() == 1 {
            return self.base(&self.rinv, a[0], b[0]);
        }
        let key = (a.to_vec(), b.to_vec());
        if let Some(v) = self.memo_rbar.lock().unwrap().get(&key) {
            return v.clone();
        }
        let mut acc = S::zero();
        if a.len() >= 2 {
            let (c, d) = (&a[..1], &a[1..]);
            for (x1, x2) in splits(b, self.n) {
                let t = self.rbar(d, &x1);
                if t.is_zero() {
                    continue;
                }
                acc += &t.mul_ref(&self.rbar(c, &x2));
            }
        } else {
            let (c, d) = (&b[..1], &b[1..]);
            for (x1, x2) in splits(a, self.n) {
                let t = self.rbar(&x1, c);
                if t.is_zero() {
                    continue;
                }
                acc += &t.mul_ref(&self.rbar(&x2, d));
            }
        }
        self.memo_rbar.lock().unwrap().insert(key, acc.clone());
        acc
    }

    /// Bilinear extension to elements.
    pub fn r_elem(&self, a: &CoordElement<S>, b: &CoordElement<S>) -> S {
        let mut acc = S::zero();
        for (x, c) in &a.terms {
            for (y, d) in &b.terms {
                acc += &self.r(x, y).mul_ref(c).mul_ref(d);
            }
        }
        acc
    }

    pub fn rbar_elem(&self, a: &CoordElement<S>, b: &CoordElement<S>) -> S {
        let mut acc = S::zero();
        for (x, c) in &a.terms {
            for (y, d) in &b.terms {
                acc += &self.rbar(x, y).mul_ref(c).mul_ref(d);
            }
        }
        acc
    }

    /// `(r̄ ∗ r)(a⊗b) = Σ r̄(a_(1)⊗b_(1)) r(a_(2)⊗b_(2))`, and `r ∗ r̄`.
    pub fn convolutions(&self, a: &[(u8, u8)], b: &[(u8, u8)]) -> (S, S) {
        let mut x = S::zero();
        let mut y = S::zero();
        for (a1, a2) in splits(a, self.n) {
            for (b1, b2) in splits(b, self.n) {
                x += &self.rbar(&a1, &b1).mul_ref(&self.r(&a2, &b2));
                y += &self.r(&a1, &b1).mul_ref(&self.rbar(&a2, &b2));
            }
        }
        (x, y)
    }

    /// Collapsed form `Σ r̄(c_(1)d_(1)⊗a) r(b⊗c_(2)d_(2))`.
    pub fn hat_r(&self, a: &[(u8, u8)], b: &[(u8, u8)], c: &[(u8, u8)], d: &[(u8, u8)]) -> S {
        let mut cd = c.to_vec();
        cd.extend_from_slice(d);
        let mut acc = S::zero();
        for (x1, x2) in splits(&cd, self.n) {
            let t = self.rbar(&x1, a);
            if !t.is_zero() {
                acc += &t.mul_ref(&self.r(b, &x2));
            }
        }
        acc
    }

    /// Four-factor form `r̄_41 r̄_31 r_24 r_23` evaluated on a⊗b⊗c⊗d.
    pub fn hat_r_four(&self, a: &[(u8, u8)], b: &[(u8, u8)], c: &[(u8, u8)], d: &[(u8, u8)]) -> S {
        let n = self.n;
        let mut acc = S::zero();
        for (a1, a2) in splits(a, n) {
            for (b1, b2) in splits(b, n) {
                for (c1, c2) in splits(c, n) {
                    for (d1, d2) in splits(d, n) {
                        let t = self.rbar(&d1, &a1);
                        if t.is_zero() {
                            continue;
                        }
                        let t = t.mul_ref(&self.rbar(&c1, &a2));
                        if t.is_zero() {
                            continue;
                        }
                        let t = t.mul_ref(&self.r(&b1, &d2));
                        if t.is_zero() {
                            continue;
                        }
                        acc += &t.mul_ref(&self.r(&b2, &c2));
                    }
                }
            }
        }
        acc
    }
}

/// Element of A⋈A on word pairs.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DoubleElement<S> {
    pub terms: BTreeMap<(CoordWord, CoordWord), S>,
}

impl<S: QField> DoubleElement<S> {
    pub fn zero() -> Self {
        DoubleElement { terms: BTreeMap::new() }
    }

    pub fn pure(a: CoordWord, b: CoordWord) -> Self {
        let mut e = Self::zero();
        e.add_term((a, b), S::one());
        e
    }

    pub fn one() -> Self {
        Self::pure(Vec::new(), Vec::new())
    }

    pub fn add_term(&mut self, k: (CoordWord, CoordWord), c: S) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(k.clone()).or_insert_with(S::zero);
        *e += &c;
        if e.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (k, c) in &o.terms {
            r.add_term(k.clone(), c.clone());
        }
        r
    }
}

impl<S: QField> fmt::Debug for DoubleElement<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> =
            self.terms.iter().map(|((a, b), c)| format!("({})*{} ⊗ {}", c, format_word(a), format_word(b))).collect();
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// `(a⊗b)(c⊗d) = Σ a c_(2) ⊗ b_(2) d · r̄(b_(1)⊗c_(1)) r(b_(3)⊗c_(3))`.
pub fn double_product<S: QField>(rf: &RForm<S>, x: &DoubleElement<S>, y: &DoubleElement<S>) -> DoubleElement<S> {
    let n = rf.n;
    let mut out = DoubleElement::zero();
    for ((a, b), cx) in &x.terms {
        let bs = splits3(b, n);
        for ((c, d), cy) in &y.terms {
            let cs = splits3(c, n);
            let coef = cx.mul_ref(cy);
            for (b1, b2, b3) in &bs {
                for (c1, c2, c3) in &cs {
                    let t = rf.rbar(b1, c1);
                    if t.is_zero() {
                        continue;
                    }
                    let t = t.mul_ref(&rf.r(b3, c3));
                    if t.is_zero() {
                        continue;
                    }
                    let mut left = a.clone();
                    left.extend_from_slice(c2);
                    let mut right = b2.clone();
                    right.extend_from_slice(d);
                    out.add_term((left, right), t.mul_ref(&coef));
                }
            }
        }
    }
    out
}

/// `ι∘θ°(a) = Σ l^−(a_(1)) ⊗ l^+(a_(2))`.
pub fn iota_theta<S: QField>(lf: &Lfun<S>, a: &CoordElement<S>) -> Result<Tensor<S>, UqgError> {
    let n = lf.dim();
    let mut out = Tensor::zero(2);
    for (w, c) in &a.terms {
        for (w1, w2) in splits(w, n) {
            let pairs1: Vec<(usize, usize)> = w1.iter().map(|&(i, j)| (i as usize, j as usize)).collect();
            let pairs2: Vec<(usize, usize)> = w2.iter().map(|&(i, j)| (i as usize, j as usize)).collect();
            let x = lf.l_word(LKind::Minus, &pairs1)?;
            if x.is_zero() {
                continue;
            }
            let y = lf.l_word(LKind::Plus, &pairs2)?;
            if y.is_zero() {
                continue;
            }
            out.add_assign(&Tensor::pure(&x, &y).scale(c));
        }
    }
    Ok(out)
}

/// `ι∘m°(f) = Δ(f)`.
pub fn iota_m<S: QField>(u: &Uqg<S>, f: &UElem<S>) -> Result<Tensor<S>, UqgError> {
    u.coproduct(f)
}

/// `ζ′(a⊗f) = ι∘θ°(a) · Δ(f)`.
pub fn zeta_prime<S: QField>(lf: &Lfun<S>, a: &CoordElement<S>, f: &UElem<S>) -> Result<Tensor<S>, UqgError> {
    let t = iota_theta(lf, a)?;
    lf.u.tensor_mul(&t, &iota_m(&lf.u, f)?)
}

/// `⟨x, w⟩` for x ∈ U_q(g) and a word w, through the vector representation.
pub fn pairing<S: QField>(u: &Uqg<S>, rep: &VectorRep<S>, x: &UElem<S>, w: &[(u8, u8)]) -> Result<S, UqgError> {
    match w.len() {
        0 => Ok(u.counit(x)),
        1 => Ok(rep.rho(x)[(w[0].0 as usize, w[0].1 as usize)].clone()),
        _ => {
            let mut acc = S::zero();
            for (k, c) in &u.coproduct(x)?.terms {
                let a = UElem::mono(k[0].clone(), S::one());
                let p = pairing(u, rep, &a, &w[..1])?;
                if p.is_zero() {
                    continue;
                }
                let b = UElem::mono(k[1].clone(), S::one());
                acc += &p.mul_ref(&pairing(u, rep, &b, &w[1..])?).mul_ref(c);
            }
            Ok(acc)
        }
    }
}

/// Element of A^op ⋈ U_q(g), keyed by (word, normal-form monomial).
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MixedElement<S> {
    pub terms: BTreeMap<(CoordWord, Mono), S>,
}

impl<S: QField> MixedElement<S> {
    pub fn zero() -> Self {
        MixedElement { terms: BTreeMap::new() }
    }

    pub fn pure(a: &CoordElement<S>, f: &UElem<S>) -> Self {
        let mut out = Self::zero();
        for (w, c) in &a.terms {
            for (m, d) in &f.terms {
                out.add_term((w.clone(), m.clone()), c.mul_ref(d));
            }
        }
        out
    }

    pub fn add_term(&mut self, k: (CoordWord, Mono), c: S) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(k.clone()).or_insert_with(S::zero);
        *e += &c;
        if e.is_zero() {
            self.terms.remove(&k);
        }
    }
}

impl<S: QField> fmt::Debug for MixedElement<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> =
            self.terms.iter().map(|((a, m), c)| format!("({})*{} ⊗ {}", c, format_word(a), m)).collect();
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// `(a⊗f)(b⊗g) = Σ b_(2)a ⊗ f_(2)g · ⟨S(f_(1)), b_(1)⟩⟨f_(3), b_(3)⟩`
/// (the A-factor multiplies in A^op).
pub fn mixed_product<S: QField>(lf: &Lfun<S>, x: &MixedElement<S>, y: &MixedElement<S>) -> Result<MixedElement<S>, UqgError> {
    let u = &lf.u;
    let n = lf.dim();
    let mut out = MixedElement::zero();
    for ((a, f), cx) in &x.terms {
        let d2 = u.coproduct_leg(&u.coproduct(&UElem::mono(f.clone(), S::one()))?, 1)?;
        for ((b, g), cy) in &y.terms {
            let coef = cx.mul_ref(cy);
            let gel = UElem::mono(g.clone(), S::one());
            for (k, c) in &d2.terms {
                let f1 = u.antipode(&UElem::mono(k[0].clone(), S::one()))?;
                let f3 = UElem::mono(k[2].clone(), S::one());
                let f2g = u.mono_mul(&k[1], &gel)?;
                for (b1, b2, b3) in splits3(b, n) {
                    let p = pairing(u, &lf.rep, &f1, &b1)?;
                    if p.is_zero() {
                        continue;
                    }
                    let p = p.mul_ref(&pairing(u, &lf.rep, &f3, &b3)?);
                    if p.is_zero() {
                        continue;
                    }
                    let mut w = b2.clone();
                    w.extend_from_slice(a);
                    let t = p.mul_ref(c).mul_ref(&coef);
                    for (m, d) in &f2g.terms {
                        out.add_term((w.clone(), m.clone()), t.mul_ref(d));
                    }
                }
            }
        }
    }
    Ok(out)
}

/// ζ′ on a mixed element.
pub fn zeta_prime_mixed<S: QField>(lf: &Lfun<S>, x: &MixedElement<S>) -> Result<Tensor<S>, UqgError> {
    let mut out = Tensor::zero(2);
    for ((a, f), c) in &x.terms {
        let t = zeta_prime(lf, &CoordElement::word(a.clone()), &UElem::mono(f.clone(), S::one()))?;
        out.add_assign(&t.scale(c));
    }
    Ok(out)
}

/// Q×Q-homogeneity of a 2-tensor, with the list of bidegrees.
pub fn is_homogeneous<S: QField>(t: &Tensor<S>, rank: usize) -> (bool, Vec<Vec<RootVec>>) {
    let d = t.degrees(rank);
    (d.len() <= 1, d)
}

/// All words of length exactly `len` over n×n generators.
pub fn words_of_len(n: usize, len: usize) -> Vec<CoordWord> {
    let mut out: Vec<CoordWord> = vec![Vec::new()];
    for _ in 0..len {
        let mut next = Vec::with_capacity(out.len() * n * n);
        for w in &out {
            for i in 0..n as u8 {
                for j in 0..n as u8 {
                    let mut w2 = w.clone();
                    w2.push((i, j));
                    next.push(w2);
                }
            }
        }
        out = next;
    }
    out
}

pub fn words_up_to(n: usize, d: usize) -> Vec<CoordWord> {
    (0..=d).flat_map(|l| words_of_len(n, l)).collect()
}

/// RTT elements `Σ R^{ik}_{ab} u^a_j u^b_l − Σ u^k_b u^i_a R^{ab}_{jl}`.
pub fn rtt_relations<S: QField>(rf: &RForm<S>) -> Vec<CoordElement<S>> {
    let n = rf.n;
    let mut out = Vec::new();
    for i in 0..n {
        for k in 0..n {
            for j in 0..n {
                for l in 0..n {
                    let mut e = CoordElement::zero();
                    for a in 0..n {
                        for b in 0..n {
                            let x = rf.base(&rf.r, (i as u8, a as u8), (k as u8, b as u8));
                            e.add_term(vec![(a as u8, j as u8), (b as u8, l as u8)], x);
                            let y = rf.base(&rf.r, (a as u8, j as u8), (b as u8, l as u8));
                            e.add_term(vec![(k as u8, b as u8), (i as u8, a as u8)], -y);
                        }
                    }
                    if !e.is_zero() {
                        out.push(e);
                    }
                }
            }
        }
    }
    out
}

/// Quantum determinant from the invariant line of V^{⊗(N+1)}, normalized to pair
/// to 1 with the invariant covector.
pub fn quantum_determinant<S: QField>(rep: &VectorRep<S>) -> Result<CoordElement<S>, UqgError> {
    let datum = &rep.datum;
    if datum.lie_type != LieType::A {
        return Err(UqgError::Invalid("quantum determinant is only built for type A".into()));
    }
    let n = rep.dim();
    let k = n;
    let big = n.pow(k as u32);
    let id = Matrix::<S>::identity(n);
    // Generators on V^{⊗k}: Δ^{(k)}(E) = Σ_t 1^{t}⊗E⊗K^{k-t-1}, Δ^{(k)}(F) = Σ_t (K^{-1})^{t}⊗F⊗1^{k-t-1}.
    let mut stack: Vec<Matrix<S>> = Vec::new();
    for i in 0..datum.rank {
        let a = datum.alpha(i);
        let kp = rep.rho_k(&a);
        let km = rep.rho_k(&a.neg());
        for (g, before, after) in [(&rep.e[i], &id, &kp), (&rep.f[i], &km, &id)] {
            let mut tot = Matrix::zeros(big, big);
            for t in 0..k {
                let mut m = Matrix::identity(1);
                for s in 0..k {
                    let f = if s < t {
                        before
                    } else if s == t {
                        g
                    } else {
                        after
                    };
                    m = m.kron(f);
                }
                tot = tot.add(&m);
            }
            stack.push(tot);
        }
    }
    let mut rows: Vec<Vec<S>> = Vec::new();
    let mut rows_t: Vec<Vec<S>> = Vec::new();
    for m in &stack {
        for r in 0..big {
            rows.push(m.row(r).to_vec());
        }
        let mt = m.transpose();
        for r in 0..big {
            rows_t.push(mt.row(r).to_vec());
        }
    }
    let v = Matrix::from_rows(rows).nullspace();
    let phi = Matrix::from_rows(rows_t).nullspace();
    // the trivial isotypic part sits in total weight zero; both spaces must be lines
    if v.len() != 1 || phi.len() != 1 {
        return Err(UqgError::Integrity(format!(
            "invariant subspace of V^⊗{} has dimension {} (covectors {}), expected 1",
            k,
            v.len(),
            phi.len()
        )));
    }
    let (v, phi) = (&v[0], &phi[0]);
    let mut norm = S::zero();
    for x in 0..big {
        norm += &v[x].mul_ref(&phi[x]);
    }
    let norm = norm.inv()?;
    let digits = |mut x: usize| -> Vec<u8> {
        let mut d = vec![0u8; k];
        for s in (0..k).rev() {
            d[s] = (x % n) as u8;
            x /= n;
        }
        d
    };
    let mut det = CoordElement::zero();
    for a in 0..big {
        if phi[a].is_zero() {
            continue;
        }
        for b in 0..big {
            if v[b].is_zero() {
                continue;
            }
            let (ia, jb) = (digits(a), digits(b));
            let w: CoordWord = ia.into_iter().zip(jb).collect();
            det.add_term(w, phi[a].mul_ref(&v[b]).mul_ref(&norm));
        }
    }
    Ok(det)
}

/// Span of the relation ideal inside words of length ≤ D, in the word basis.
pub struct RelationIdeal<S> {
    pub words: Vec<CoordWord>,
    pub index: HashMap<CoordWord, usize>,
    pub span: EchelonSpan<S>,
    /// Spanning elements that were independent when inserted.
    pub basis: Vec<CoordElement<S>>,
}

impl<S: QField> RelationIdeal<S> {
    pub fn dim(&self) -> usize {
        self.span.rank()
    }

    pub fn quotient_dim(&self) -> usize {
        self.words.len() - self.dim()
    }

    pub fn coords(&self, x: &CoordElement<S>) -> Vec<S> {
        let mut v = vec![S::zero(); self.words.len()];
        for (w, c) in &x.terms {
            v[self.index[w]] += c;
        }
        v
    }
}

/// Ideal generated by the RTT relations and `det_q − 1`, cut to words of
/// length ≤ `degree` (products m₁·rel·m₂ of total length ≤ `degree`).
pub fn relation_ideal_a<S: QField>(rf: &RForm<S>, rep: &VectorRep<S>, degree: usize) -> Result<RelationIdeal<S>, UqgError> {
    let n = rf.n;
    let words = words_up_to(n, degree);
    let index: HashMap<CoordWord, usize> = words.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
    let mut rels = rtt_relations(rf);
    let det = quantum_determinant(rep)?.sub(&CoordElement::one());
    rels.push(det);
    let mut ideal = RelationIdeal { words: words.clone(), index, span: EchelonSpan::new(words.len()), basis: Vec::new() };
    for rel in &rels {
        let rl = rel.max_len();
        if rl > degree {
            continue;
        }
        let room = degree - rl;
        for l1 in 0..=room {
            for l2 in 0..=room - l1 {
                for m1 in words_of_len(n, l1) {
                    for m2 in words_of_len(n, l2) {
                        let x = CoordElement::word(m1.clone()).mul(rel).mul(&CoordElement::word(m2));
                        let v = ideal.coords(&x);
                        if ideal.span.insert(&v) {
                            ideal.basis.push(x);
                        }
                    }
                }
            }
        }
    }
    Ok(ideal)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::make_root_datum;
    use crate::scalar::ScalarQ;
    use num_traits::{One, Zero};
    use std::sync::Arc;

    fn lf(t: LieType, n: usize) -> Lfun<ScalarQ> {
        Lfun::new(Arc::new(Uqg::new(&make_root_datum(t, n).unwrap()))).unwrap()
    }

    fn w(x: &[(u8, u8)]) -> CoordWord {
        x.to_vec()
    }

    #[test]
    fn r_matches_l_plus_and_rbar_matches_l_minus() {
        let l = lf(LieType::A, 2);
        let rf = RForm::new(&l.r);
        let n = l.dim();
        for word in words_of_len(n, 2).into_iter().step_by(7) {
            let pairs: Vec<(usize, usize)> = word.iter().map(|&(a, b)| (a as usize, b as usize)).collect();
            let lp = l.rep.rho(&l.l_word(LKind::Plus, &pairs).unwrap());
            let lm = l.rep.rho(&l.l_word(LKind::Minus, &pairs).unwrap());
            for i in 0..n {
                for j in 0..n {
                    let x = w(&[(i as u8, j as u8)]);
                    assert_eq!(rf.r(&x, &word), lp[(i, j)]);
                    assert_eq!(rf.rbar(&word, &x), lm[(i, j)]);
                }
            }
        }
    }

    #[test]
    fn convolution_inverse() {
        let l = lf(LieType::A, 1);
        let rf = RForm::new(&l.r);
        let ws = words_up_to(2, 2);
        for a in ws.iter().step_by(3) {
            for b in ws.iter().step_by(5) {
                let (x, y) = rf.convolutions(a, b);
                let e = if word_counit(a) && word_counit(b) { ScalarQ::one() } else { ScalarQ::zero() };
                assert_eq!(x, e);
                assert_eq!(y, e);
            }
        }
    }

    #[test]
    fn hat_r_forms_agree() {
        let l = lf(LieType::A, 1);
        let rf = RForm::new(&l.r);
        let ws = words_up_to(2, 1);
        for a in &ws {
            for b in &ws {
                for c in ws.iter().step_by(2) {
                    for d in ws.iter().step_by(2) {
                        assert_eq!(rf.hat_r(a, b, c, d), rf.hat_r_four(a, b, c, d));
                    }
                }
            }
        }
    }

    #[test]
    fn double_is_associative_with_unit() {
        let l = lf(LieType::A, 1);
        let rf = RForm::new(&l.r);
        let x = DoubleElement::pure(w(&[(0, 1)]), w(&[(1, 0)]));
        let y = DoubleElement::pure(w(&[(1, 1)]), w(&[(0, 1)]));
        let z = DoubleElement::pure(w(&[(1, 0)]), w(&[(0, 0)]));
        let one = DoubleElement::one();
        assert_eq!(double_product(&rf, &one, &x), x);
        assert_eq!(double_product(&rf, &x, &one), x);
        let l1 = double_product(&rf, &double_product(&rf, &x, &y), &z);
        let r1 = double_product(&rf, &x, &double_product(&rf, &y, &z));
        assert_eq!(l1, r1);
    }

    #[test]
    fn zeta_prime_is_multiplicative_on_generators() {
        for (t, r) in [(LieType::A, 1), (LieType::A, 2)] {
            let l = lf(t, r);
            let u = l.u.clone();
            let n = l.dim() as u8;
            let mut gens = u.generators();
            gens.push(u.k(&l.rep.weights[0]));
            for f in &gens {
                for i in 0..n {
                    for j in 0..n {
                        let a = CoordElement::word(w(&[(i, j)]));
                        let one_f = MixedElement::pure(&CoordElement::one(), f);
                        let a_one = MixedElement::pure(&a, &u.one());
                        let prod = mixed_product(&l, &one_f, &a_one).unwrap();
                        let lhs = zeta_prime_mixed(&l, &prod).unwrap();
                        let rhs = u.tensor_mul(&u.coproduct(f).unwrap(), &iota_theta(&l, &a).unwrap()).unwrap();
                        assert_eq!(lhs, rhs);
                        let prod = mixed_product(&l, &a_one, &one_f).unwrap();
                        assert_eq!(prod, MixedElement::pure(&a, f));
                    }
                }
            }
        }
    }

    #[test]
    fn sl2_relation_ideal() {
        let l = lf(LieType::A, 1);
        let rf = RForm::new(&l.r);
        let rtt = rtt_relations(&rf);
        let mut sp = EchelonSpan::<ScalarQ>::new(16);
        let deg2 = words_of_len(2, 2);
        for r in &rtt {
            let v: Vec<ScalarQ> =
                deg2.iter().map(|x| r.terms.get(x).cloned().unwrap_or_else(ScalarQ::zero)).collect();
            sp.insert(&v);
        }
        assert_eq!(sp.rank(), 6);
        let ideal = relation_ideal_a(&rf, &l.rep, 2).unwrap();
        assert_eq!(ideal.words.len(), 21);
        assert_eq!(ideal.quotient_dim(), 14);
        for rel in &ideal.basis {
            assert!(iota_theta(&l, rel).unwrap().terms.is_empty(), "{}", rel);
        }
    }
}
