//! L^± with entries in U_q(g).
//!
//! `(l^+)^i_j = (id⊗u^i_j)(ℛ)` and `(l^−)^i_j = (u^i_j⊗id)(ℛ^{-1})`, computed
//! from the same ordered product that gives R on V⊗V.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::rmatrix::{root_degree, theta_coeff, RMatrixVV, ThetaOrder};
use super::VectorRep;
use crate::rootdata::{RootVec, Weight};
use crate::scalar::{q_diff, QField};
use crate::uqg::{Tensor, UElem, Uqg, UqgError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LKind {
    Plus,
    Minus,
}

type MatU<S> = Vec<Vec<UElem<S>>>;

fn matu_mul<S: QField>(u: &Uqg<S>, a: &MatU<S>, b: &MatU<S>) -> Result<MatU<S>, UqgError> {
    let n = a.len();
    let mut out = vec![vec![UElem::zero(); n]; n];
    for i in 0..n {
        for l in 0..n {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..n {
                if b[l][j].is_zero() {
                    continue;
                }
                out[i][j].add_assign(&u.mul(&a[i][l], &b[l][j])?);
            }
        }
    }
    Ok(out)
}

fn matu_identity<S: QField>(u: &Uqg<S>, n: usize) -> MatU<S> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { u.one() } else { UElem::zero() }).collect())
        .collect()
}

pub struct Lfun<S> {
    pub u: Arc<Uqg<S>>,
    pub rep: VectorRep<S>,
    pub r: RMatrixVV<S>,
    /// `plus[i][j] = (l^+)^i_j`, 0-based.
    pub plus: MatU<S>,
    pub minus: MatU<S>,
    /// Orders tried before the accepted one, with the failed identity.
    pub rejected: Vec<(ThetaOrder, String)>,
}

impl<S: QField> Lfun<S> {
    /// Builds R and L^±, trying Θ in ≺-descending order first and the
    /// reversed order if any identity of the battery fails.
    pub fn new(u: Arc<Uqg<S>>) -> Result<Self, UqgError> {
        let rep = VectorRep::new(u.datum())?;
        let mut rejected = Vec::new();
        for order in [ThetaOrder::Descending, ThetaOrder::Ascending] {
            match Self::try_order(&u, &rep, order)? {
                Ok((r, plus, minus)) => {
                    return Ok(Lfun { u, rep, r, plus, minus, rejected });
                }
                Err(why) => rejected.push((order, why)),
            }
        }
        let why: Vec<String> = rejected.iter().map(|(o, w)| format!("{}: {}", o.name(), w)).collect();
        Err(UqgError::Integrity(format!("no Θ ordering passes ({})", why.join("; "))))
    }

    #[allow(clippy::type_complexity)]
    fn try_order(
        u: &Uqg<S>,
        rep: &VectorRep<S>,
        order: ThetaOrder,
    ) -> Result<Result<(RMatrixVV<S>, MatU<S>, MatU<S>), String>, UqgError> {
        let r = match RMatrixVV::build(u, rep, order) {
            Ok(r) => r,
            Err(UqgError::Integrity(m)) => return Ok(Err(m)),
            Err(e) => return Err(e),
        };
        if !r.check_qybe() {
            return Ok(Err("quantum Yang-Baxter equation".into()));
        }
        if let Some(g) = r.check_intertwiner(u, rep)? {
            return Ok(Err(format!("R·Δ({}) = Δ^op({})·R", g, g)));
        }
        let (plus, minus) = l_matrices(u, rep, order)?;
        let n = rep.dim();
        for (mat, tag) in [(&plus, "+"), (&minus, "-")] {
            for i in 0..n {
                for j in 0..n {
                    let lhs = u.coproduct(&mat[i][j])?;
                    let mut rhs = Tensor::zero(2);
                    for k in 0..n {
                        rhs.add_assign(&Tensor::pure(&mat[i][k], &mat[k][j]));
                    }
                    if lhs != rhs {
                        return Ok(Err(format!("Δ(l^{}(u^{}_{})) = Σ l^{}⊗l^{}", tag, i + 1, j + 1, tag, tag)));
                    }
                }
            }
        }
        // U-valued entries must reproduce R and R^{-1} under ρ.
        for k in 0..n {
            for l in 0..n {
                let p = rep.rho(&plus[k][l]);
                let m = rep.rho(&minus[k][l]);
                for i in 0..n {
                    for j in 0..n {
                        if p[(i, j)] != *r.entry(i, j, k, l) {
                            return Ok(Err(format!("ρ(l^+(u^{}_{})) against R", k + 1, l + 1)));
                        }
                        if m[(i, j)] != *r.inv_entry(k, l, i, j) {
                            return Ok(Err(format!("ρ(l^-(u^{}_{})) against R^-1", k + 1, l + 1)));
                        }
                    }
                }
            }
        }
        Ok(Ok((r, plus, minus)))
    }

    pub fn dim(&self) -> usize {
        self.rep.dim()
    }

    pub fn order(&self) -> ThetaOrder {
        self.r.order
    }

    /// `l^±(u^i_j)`, 0-based.
    pub fn entry(&self, kind: LKind, i: usize, j: usize) -> &UElem<S> {
        match kind {
            LKind::Plus => &self.plus[i][j],
            LKind::Minus => &self.minus[i][j],
        }
    }

    /// `l^±` of a word `u^{i_1}_{j_1}···u^{i_n}_{j_n}`; the extension is
    /// antimultiplicative.
    pub fn l_word(&self, kind: LKind, word: &[(usize, usize)]) -> Result<UElem<S>, UqgError> {
        let mut acc = self.u.one();
        for &(i, j) in word {
            acc = self.u.mul(self.entry(kind, i, j), &acc)?;
        }
        Ok(acc)
    }

    /// Residual of `(q_ε−q_ε^{-1})(l^+)^i_j + [(l^+)^i_k, (l^+)^k_j](l^−)^k_k`
    /// for 1-based `i < k < j` with `k ≠ i′, j′`, where `q_ε = q^{(ε,ε)}`
    /// (q² for type B, q otherwise).
    pub fn recurrence_residual(&self, i: usize, k: usize, j: usize) -> Result<UElem<S>, UqgError> {
        let n = self.dim();
        let table = self.u.table();
        if !(1 <= i && i < k && k < j && j <= n) || k == table.jprime(i) || k == table.jprime(j) {
            return Err(UqgError::Invalid(format!("recurrence needs i<k<j with k ≠ i′, j′; got ({},{},{})", i, k, j)));
        }
        let (i, k, j) = (i - 1, k - 1, j - 1);
        let u = &self.u;
        let lhs = self.plus[i][j].scale(&q_diff::<S>(super::eps_norm(u.datum()), u.datum().root_order));
        let comm = u.commutator(&self.plus[i][k], &self.plus[k][j])?;
        let rhs = u.mul(&comm, &self.minus[k][k])?;
        Ok(lhs.add(&rhs))
    }

    pub fn check_recurrence(&self, i: usize, k: usize, j: usize) -> Result<bool, UqgError> {
        Ok(self.recurrence_residual(i, k, j)?.is_zero())
    }

    /// All admissible 1-based (i, k, j).
    pub fn recurrence_triples(&self) -> Vec<(usize, usize, usize)> {
        let n = self.dim();
        let t = self.u.table();
        let mut out = Vec::new();
        for i in 1..=n {
            for j in i + 2..=n {
                for k in i + 1..j {
                    if k != t.jprime(i) && k != t.jprime(j) {
                        out.push((i, k, j));
                    }
                }
            }
        }
        out
    }

    /// 0-based matrix position (a, b) of the table entry β_ij, with
    /// `w_b − w_a = β_ij`. Type A lists V by increasing weight while the
    /// table is indexed by ε_1, …, ε_{N+1}, so its indices are reflected.
    pub fn table_matrix_index(&self, i: usize, j: usize) -> Result<(usize, usize), UqgError> {
        let t = self.u.table();
        let e = t
            .find(i, j)
            .ok_or_else(|| UqgError::Invalid(format!("({},{}) is not a table entry", i, j)))?;
        let n = self.dim();
        let (a, b) = if t.lie_type == crate::rootdata::LieType::A { (n - j, n - i) } else { (i - 1, j - 1) };
        let w = self.rep.weights[b].sub(&self.rep.weights[a]);
        if self.u.datum().weight_to_root(&w).as_ref() != Some(&t.roots[e].root) {
            return Err(UqgError::Integrity(format!("table entry ({},{}) does not match w_b − w_a", i, j)));
        }
        Ok((a, b))
    }

    /// Root vector `E_{β_ij}` (or `F_{β_ij}`) for the 1-based table entry (i, j).
    pub fn table_root_vector(&self, i: usize, j: usize, minus: bool) -> Result<(RootVec, UElem<S>), UqgError> {
        let t = self.u.table();
        let e = t
            .find(i, j)
            .ok_or_else(|| UqgError::Invalid(format!("({},{}) is not a table entry", i, j)))?;
        let pos = t.order_index[e];
        let rv = self.u.root_vectors()?;
        let x = if minus { rv.f[pos].clone() } else { rv.e[pos].clone() };
        Ok((rv.roots[pos].clone(), x))
    }
}

/// Compute L^± for one Θ ordering (no validation).
pub fn l_matrices<S: QField>(u: &Uqg<S>, rep: &VectorRep<S>, order: ThetaOrder) -> Result<(MatU<S>, MatU<S>), UqgError> {
    let rv = u.root_vectors()?;
    let n = rep.dim();
    let idx = order.indices(rv.roots.len());
    // (id⊗ρ)(Θ): U on the first leg, matrix on the second.
    let mut theta = matu_identity(u, n);
    // (ρ⊗id)(Θ^{-1}): matrix on the first leg, U on the second.
    let mut theta_inv = matu_identity(u, n);
    for &k in &idx {
        let d = root_degree(u, &rv.roots[k]);
        let fm = rep.rho(&rv.f[k]);
        let em = rep.rho(&rv.e[k]);
        let mut fac = matu_identity(u, n);
        let mut fac_inv = matu_identity(u, n);
        let mut fpow = fm.clone();
        let mut epow = em.clone();
        let mut ue = rv.e[k].clone();
        let mut uf = rv.f[k].clone();
        let mut m = 1u32;
        while !fpow.is_zero() || !epow.is_zero() {
            let c = theta_coeff::<S>(u, d, m, false)?;
            let ci = theta_coeff::<S>(u, d, m, true)?;
            for a in 0..n {
                for b in 0..n {
                    if !fpow[(a, b)].is_zero() {
                        fac[a][b].add_assign(&ue.scale(&c.mul_ref(&fpow[(a, b)])));
                    }
                    if !epow[(a, b)].is_zero() {
                        fac_inv[a][b].add_assign(&uf.scale(&ci.mul_ref(&epow[(a, b)])));
                    }
                }
            }
            m += 1;
            fpow = fpow.mul(&fm);
            epow = epow.mul(&em);
            ue = u.mul(&ue, &rv.e[k])?;
            uf = u.mul(&uf, &rv.f[k])?;
        }
        theta = matu_mul(u, &theta, &fac)?;
        theta_inv = matu_mul(u, &fac_inv, &theta_inv)?;
    }
    let ws = &rep.weights;
    let mut plus = theta;
    for (i, row) in plus.iter_mut().enumerate() {
        for x in row.iter_mut() {
            *x = u.left_mul_k(&ws[i], x);
        }
    }
    let mut minus = theta_inv;
    for row in minus.iter_mut() {
        for (j, x) in row.iter_mut().enumerate() {
            *x = u.mul(x, &u.k(&ws[j].neg()))?;
        }
    }
    Ok((plus, minus))
}

/// Split `x = f·K_μ` with `f` in U(n_+) (`Plus`) or U(n_−) (`Minus`).
/// `None` for zero; an error if `x` is not of that shape.
pub fn f_extract<S: QField>(u: &Uqg<S>, x: &UElem<S>, kind: LKind) -> Result<Option<(UElem<S>, Weight)>, UqgError> {
    let mut mu: Option<Weight> = None;
    let mut f = UElem::zero();
    let n = u.rank();
    for (m, c) in &x.terms {
        match &mu {
            None => mu = Some(m.k.clone()),
            Some(w) if *w != m.k => {
                return Err(UqgError::Invalid(format!("mixed Cartan factors {} and {}", w, m.k)));
            }
            _ => {}
        }
        let wrong = match kind {
            LKind::Plus => !m.f.is_empty(),
            LKind::Minus => !m.e.is_empty(),
        };
        if wrong {
            return Err(UqgError::Invalid(format!("monomial {} is not in the expected Borel part", m)));
        }
        // K_μ X = q^{⟨μ, deg X⟩} X K_μ
        let deg = m.degree(n);
        let scalar = u.q(u.datum().pair_wr(&m.k, &deg));
        let mut mm = m.clone();
        mm.k = Weight::zero(n);
        f.add_term(mm, c.mul_ref(&scalar));
    }
    Ok(mu.map(|w| (f, w)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::{make_root_datum, LieType};
    use crate::scalar::ScalarQ;

    fn lf(t: LieType, n: usize) -> Lfun<ScalarQ> {
        Lfun::new(Arc::new(Uqg::new(&make_root_datum(t, n).unwrap()))).unwrap()
    }

    #[test]
    fn diagonal_is_cartan() {
        for (t, n) in [(LieType::A, 1), (LieType::A, 2), (LieType::B, 2), (LieType::C, 2)] {
            let l = lf(t, n);
            eprintln!("{}{} order {:?} rejected {:?}", t, n, l.order(), l.rejected);
            for k in 0..l.dim() {
                assert_eq!(l.plus[k][k], l.u.k(&l.rep.weights[k]));
                assert_eq!(l.minus[k][k], l.u.k(&l.rep.weights[k].neg()));
            }
        }
    }

    #[test]
    fn a1_off_diagonal() {
        let l = lf(LieType::A, 1);
        assert!(l.plus[1][0].is_zero());
        let (f, mu) = f_extract(&l.u, &l.plus[0][1], LKind::Plus).unwrap().unwrap();
        assert_eq!(mu, l.rep.weights[0]);
        assert!(f.ratio_to(&l.u.e(0)).is_some());
    }

    #[test]
    fn recurrence() {
        for (t, n) in [(LieType::A, 2), (LieType::A, 3), (LieType::B, 2), (LieType::C, 2)] {
            let l = lf(t, n);
            for (i, k, j) in l.recurrence_triples() {
                assert!(l.check_recurrence(i, k, j).unwrap(), "{}{} ({},{},{})", t, n, i, k, j);
            }
        }
    }

    #[test]
    fn recurrence_rejects_primed_middle() {
        let l = lf(LieType::C, 2);
        // 2′ = 3 in C2
        assert!(l.recurrence_residual(1, 3, 4).is_ok());
        assert!(l.recurrence_residual(2, 3, 4).is_err());
    }
}
