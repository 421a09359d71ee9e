//! R on V⊗V as κ·Θ, with Θ an ordered product of truncated q-exponentials
//! in root vectors.

use serde::{Deserialize, Serialize};

use super::VectorRep;
use crate::linalg::Matrix;
use crate::rootdata::{RootVec, Weight};
use crate::scalar::{q_diff, q_factorial, QField};
use crate::uqg::{Mono, Tensor, UElem, Uqg, UqgError};

/// Order of the factors of Θ relative to ≺.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ThetaOrder {
    Descending,
    Ascending,
}

impl ThetaOrder {
    pub fn indices(&self, n: usize) -> Vec<usize> {
        match self {
            ThetaOrder::Ascending => (0..n).collect(),
            ThetaOrder::Descending => (0..n).rev().collect(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ThetaOrder::Descending => "descending",
            ThetaOrder::Ascending => "ascending",
        }
    }
}

/// `d_β` with `q_β = q^{d_β}`.
pub fn root_degree<S: QField>(u: &Uqg<S>, b: &RootVec) -> i64 {
    u.datum().pair_rr(b, b) / 2
}

/// Coefficient of `E_β^m ⊗ F_β^m` in Θ_β, or in Θ_β^{-1} when `inverse`.
pub fn theta_coeff<S: QField>(u: &Uqg<S>, d: i64, m: u32, inverse: bool) -> Result<S, UqgError> {
    let ro = u.datum().root_order;
    let mut c = S::one();
    let diff = q_diff::<S>(d, ro);
    for _ in 0..m {
        c = c.mul_ref(&diff);
    }
    c = c.div(&q_factorial::<S>(m, d, ro))?;
    let tri = d * (m as i64) * (m as i64 - 1) / 2;
    if inverse {
        c = c.mul_ref(&u.q(-tri));
        if m % 2 == 1 {
            c = -c;
        }
    } else {
        c = c.mul_ref(&u.q(tri));
    }
    Ok(c)
}

pub struct RMatrixVV<S> {
    pub dim: usize,
    pub order: ThetaOrder,
    pub matrix: Matrix<S>,
    pub inverse: Matrix<S>,
}

fn mpow<S: QField>(a: &Matrix<S>, m: u32) -> Matrix<S> {
    let mut r = Matrix::identity(a.rows());
    for _ in 0..m {
        r = r.mul(a);
    }
    r
}

/// Diagonal of κ on V⊗V (or κ^{-1}).
fn kappa<S: QField>(rep: &VectorRep<S>, sign: i64) -> Matrix<S> {
    let n = rep.dim();
    let mut k = Matrix::zeros(n * n, n * n);
    for a in 0..n {
        for b in 0..n {
            let e = rep.datum.pair(&rep.weights[a], &rep.weights[b]) * num_rational::Ratio::from_integer(sign);
            k[(a * n + b, a * n + b)] = S::q_pow(e, rep.datum.root_order).expect("pairing denominators divide m");
        }
    }
    k
}

impl<S: QField> RMatrixVV<S> {
    pub fn build(u: &Uqg<S>, rep: &VectorRep<S>, order: ThetaOrder) -> Result<Self, UqgError> {
        let rv = u.root_vectors()?;
        let n = rep.dim();
        let nn = n * n;
        let es: Vec<Matrix<S>> = rv.e.iter().map(|x| rep.rho(x)).collect();
        let fs: Vec<Matrix<S>> = rv.f.iter().map(|x| rep.rho(x)).collect();
        let idx = order.indices(rv.roots.len());
        let factor = |k: usize, inverse: bool| -> Result<Matrix<S>, UqgError> {
            let d = root_degree(u, &rv.roots[k]);
            let mut x = Matrix::identity(nn);
            let mut m = 1;
            loop {
                let t = mpow(&es[k], m).kron(&mpow(&fs[k], m));
                if t.is_zero() {
                    break;
                }
                x = x.add(&t.scale(&theta_coeff(u, d, m, inverse)?));
                m += 1;
            }
            Ok(x)
        };
        let mut theta = Matrix::identity(nn);
        let mut theta_inv = Matrix::identity(nn);
        for &k in &idx {
            theta = theta.mul(&factor(k, false)?);
            theta_inv = factor(k, true)?.mul(&theta_inv);
        }
        let matrix = kappa(rep, 1).mul(&theta);
        let inverse = theta_inv.mul(&kappa(rep, -1));
        if !matrix.mul(&inverse).is_identity() {
            return Err(UqgError::Integrity("R·R^{-1} is not the identity".into()));
        }
        let top = n - 1;
        let expect = S::q_pow(rep.datum.pair(&rep.weights[top], &rep.weights[top]), rep.datum.root_order)?;
        if matrix[(top * n + top, top * n + top)] != expect {
            return Err(UqgError::Integrity("R is not normalized on the highest weight vector".into()));
        }
        Ok(RMatrixVV { dim: n, order, matrix, inverse })
    }

    /// R_{12}R_{13}R_{23} = R_{23}R_{13}R_{12} on V⊗V⊗V.
    pub fn check_qybe(&self) -> bool {
        let n = self.dim;
        let id = Matrix::<S>::identity(n);
        let r12 = self.matrix.kron(&id);
        let r23 = id.kron(&self.matrix);
        let mut p23 = Matrix::<S>::zeros(n * n * n, n * n * n);
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    p23[(a * n * n + c * n + b, a * n * n + b * n + c)] = S::one();
                }
            }
        }
        let r13 = p23.mul(&r12).mul(&p23);
        r12.mul(&r13).mul(&r23) == r23.mul(&r13).mul(&r12)
    }

    /// R·Δ(x) = Δ^op(x)·R on V⊗V for the generators; returns the first failure.
    pub fn check_intertwiner(&self, u: &Uqg<S>, rep: &VectorRep<S>) -> Result<Option<String>, UqgError> {
        let n = u.rank();
        let mut gens: Vec<(String, UElem<S>)> = Vec::new();
        for i in 0..n {
            gens.push((format!("E{}", i + 1), u.e(i)));
            gens.push((format!("F{}", i + 1), u.f(i)));
            gens.push((format!("K{}", Weight::fundamental(n, i)), UElem::mono(Mono::cartan(Weight::fundamental(n, i)), S::one())));
        }
        for (name, g) in gens {
            let d = u.coproduct(&g)?;
            let lhs = self.matrix.mul(&rep.rho2(&d));
            let rhs = rep.rho2(&d.flip()).mul(&self.matrix);
            if lhs != rhs {
                return Ok(Some(name));
            }
        }
        Ok(None)
    }

    /// Entry `r(u^i_j ⊗ u^k_l)`, 0-based.
    pub fn entry(&self, i: usize, j: usize, k: usize, l: usize) -> &S {
        &self.matrix[(i * self.dim + k, j * self.dim + l)]
    }

    /// Entry `r̄(u^i_j ⊗ u^k_l)`.
    pub fn inv_entry(&self, i: usize, j: usize, k: usize, l: usize) -> &S {
        &self.inverse[(i * self.dim + k, j * self.dim + l)]
    }
}

/// (ρ⊗ρ)Δ(x) helper used by tests and checks.
pub fn rho_coproduct<S: QField>(u: &Uqg<S>, rep: &VectorRep<S>, x: &UElem<S>) -> Result<Matrix<S>, UqgError> {
    let d: Tensor<S> = u.coproduct(x)?;
    Ok(rep.rho2(&d))
}
