//! The vector representation, the R-matrix on V⊗V and the l-functional
//! matrices L^± with entries in U_q(g).
//!
//! The basis of V is ordered by increasing weight, so L^+ is upper and L^−
//! lower triangular and `(l^+)^i_j` carries the Cartan factor `K_{w_i}`.

pub mod lmatrix;
pub mod rmatrix;

use crate::linalg::Matrix;
use crate::rootdata::{LieType, RootDatum, Weight};
use crate::scalar::{q_diff, q_int, QField};
use crate::uqg::{graded::serre_element, Mono, Tensor, UElem, UqgError};

pub use lmatrix::{Lfun, LKind};
pub use rmatrix::{RMatrixVV, ThetaOrder};

/// Weights of the vector representation in increasing order, ω-coordinates.
pub fn vector_weights(datum: &RootDatum) -> Vec<Weight> {
    let n = datum.rank;
    let t = datum.lie_type;
    let dim_eps = if t == LieType::A { n + 1 } else { n };
    // simple roots in ε-coordinates
    let mut alphas: Vec<Vec<i64>> = Vec::new();
    let chain = if t == LieType::A { n } else { n - 1 };
    for i in 0..chain {
        let mut v = vec![0; dim_eps];
        v[i] = 1;
        v[i + 1] = -1;
        alphas.push(v);
    }
    match t {
        LieType::A => {}
        LieType::B => {
            let mut v = vec![0; dim_eps];
            v[n - 1] = 1;
            alphas.push(v);
        }
        LieType::C => {
            let mut v = vec![0; dim_eps];
            v[n - 1] = 2;
            alphas.push(v);
        }
        LieType::D => {
            let mut v = vec![0; dim_eps];
            v[n - 2] = 1;
            v[n - 1] = 1;
            alphas.push(v);
        }
    }
    let eps = |k: usize, sign: i64| -> Vec<i64> { (0..dim_eps).map(|i| if i == k { sign } else { 0 }).collect() };
    let mut ws: Vec<Vec<i64>> = Vec::new();
    match t {
        LieType::A => {
            for k in (0..=n).rev() {
                ws.push(eps(k, 1));
            }
        }
        _ => {
            for k in 0..n {
                ws.push(eps(k, -1));
            }
            if t == LieType::B {
                ws.push(vec![0; dim_eps]);
            }
            for k in (0..n).rev() {
                ws.push(eps(k, 1));
            }
        }
    }
    let dot = |a: &[i64], b: &[i64]| -> i64 { a.iter().zip(b).map(|(x, y)| x * y).sum() };
    ws.iter()
        .map(|w| {
            let c: Vec<i64> = alphas
                .iter()
                .map(|a| {
                    let num = 2 * dot(w, a);
                    let den = dot(a, a);
                    assert_eq!(num % den, 0);
                    num / den
                })
                .collect();
            Weight::from_slice(&c)
        })
        .collect()
}

/// `(ε_k, ε_k)` in the normalization of the root datum.
pub fn eps_norm(datum: &RootDatum) -> i64 {
    if datum.lie_type == LieType::B {
        2
    } else {
        1
    }
}

/// The vector representation.
pub struct VectorRep<S> {
    pub datum: RootDatum,
    pub weights: Vec<Weight>,
    pub e: Vec<Matrix<S>>,
    pub f: Vec<Matrix<S>>,
}

impl<S: QField> VectorRep<S> {
    pub fn new(datum: &RootDatum) -> Result<Self, UqgError> {
        let ws = vector_weights(datum);
        let dim = ws.len();
        let m = datum.root_order;
        let mut es = Vec::new();
        let mut fs = Vec::new();
        for i in 0..datum.rank {
            let a = datum.alpha(i);
            let mut f = Matrix::<S>::zeros(dim, dim);
            for b in 0..dim {
                let tgt = ws[b].sub(&a);
                for c in 0..dim {
                    if ws[c] == tgt {
                        f[(c, b)] = S::one();
                    }
                }
            }
            // Solve [E_i, F_i] = [⟨w, α_i^∨⟩]_{q_i} along α_i-strings, top down.
            let mut e = Matrix::<S>::zeros(dim, dim);
            let mut order: Vec<usize> = (0..dim).collect();
            order.sort_by_key(|&b| -ws[b].0[i]);
            for b in order {
                let target: S = q_int(ws[b].0[i], datum.d[i], m);
                let mut fe = S::zero();
                for x in 0..dim {
                    if !e[(x, b)].is_zero() {
                        fe += &e[(x, b)].mul_ref(&f[(b, x)]);
                    }
                }
                let below: Vec<usize> = (0..dim).filter(|&c| !f[(c, b)].is_zero()).collect();
                match below.first() {
                    Some(&c) => e[(b, c)] = target + fe,
                    None => {
                        if !(target + fe).is_zero() {
                            return Err(UqgError::Integrity(format!(
                                "vector representation: no solution for E_{} on basis vector {}",
                                i + 1,
                                b + 1
                            )));
                        }
                    }
                }
            }
            es.push(e);
            fs.push(f);
        }
        let rep = VectorRep { datum: datum.clone(), weights: ws, e: es, f: fs };
        rep.check_relations()?;
        Ok(rep)
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn rho_k(&self, lam: &Weight) -> Matrix<S> {
        let n = self.dim();
        let mut m = Matrix::zeros(n, n);
        for k in 0..n {
            m[(k, k)] = S::q_pow(self.datum.pair(lam, &self.weights[k]), self.datum.root_order)
                .expect("pairings have denominators dividing the root order");
        }
        m
    }

    pub fn rho_mono(&self, mono: &Mono) -> Matrix<S> {
        let mut acc = self.rho_k(&mono.k);
        for &l in &mono.f {
            acc = acc.mul(&self.f[l as usize]);
        }
        for &l in &mono.e {
            acc = acc.mul(&self.e[l as usize]);
        }
        acc
    }

    pub fn rho(&self, x: &UElem<S>) -> Matrix<S> {
        let n = self.dim();
        let mut out = Matrix::zeros(n, n);
        for (m, c) in &x.terms {
            out = out.add(&self.rho_mono(m).scale(c));
        }
        out
    }

    /// (ρ⊗ρ) of a 2-tensor, in the `a·n + b` basis of V⊗V.
    pub fn rho2(&self, t: &Tensor<S>) -> Matrix<S> {
        let n = self.dim();
        let mut out = Matrix::zeros(n * n, n * n);
        for (k, c) in &t.terms {
            out = out.add(&self.rho_mono(&k[0]).kron(&self.rho_mono(&k[1])).scale(c));
        }
        out
    }

    fn check_relations(&self) -> Result<(), UqgError> {
        let n = self.datum.rank;
        let m = self.datum.root_order;
        for i in 0..n {
            for j in 0..n {
                let comm = self.e[i].mul(&self.f[j]).sub(&self.f[j].mul(&self.e[i]));
                let expect = if i == j {
                    let a = self.datum.alpha(i);
                    let inv = q_diff::<S>(self.datum.d[i], m).inv()?;
                    self.rho_k(&a).sub(&self.rho_k(&a.neg())).scale(&inv)
                } else {
                    Matrix::zeros(self.dim(), self.dim())
                };
                if comm != expect {
                    return Err(UqgError::Integrity(format!(
                        "vector representation violates [E_{}, F_{}]",
                        i + 1,
                        j + 1
                    )));
                }
                if i != j {
                    for (gens, tag) in [(&self.e, "E"), (&self.f, "F")] {
                        let mut acc = Matrix::zeros(self.dim(), self.dim());
                        for (w, c) in serre_element::<S>(&self.datum, i, j) {
                            let mut p = Matrix::identity(self.dim());
                            for &l in &w {
                                p = p.mul(&gens[l as usize]);
                            }
                            acc = acc.add(&p.scale(&c));
                        }
                        if !acc.is_zero() {
                            return Err(UqgError::Integrity(format!(
                                "vector representation violates the Serre relation for {}_{}, {}_{}",
                                tag,
                                i + 1,
                                tag,
                                j + 1
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::make_root_datum;
    use crate::scalar::ScalarQ;

    #[test]
    fn weights_a2_increasing() {
        let d = make_root_datum(LieType::A, 2).unwrap();
        let ws = vector_weights(&d);
        // ε_3, ε_2, ε_1
        assert_eq!(ws[0], Weight::from_slice(&[0, -1]));
        assert_eq!(ws[1], Weight::from_slice(&[-1, 1]));
        assert_eq!(ws[2], Weight::from_slice(&[1, 0]));
    }

    #[test]
    fn b2_has_zero_weight() {
        let d = make_root_datum(LieType::B, 2).unwrap();
        let ws = vector_weights(&d);
        assert_eq!(ws.len(), 5);
        assert!(ws[2].is_zero());
    }

    #[test]
    fn relations_hold() {
        for (t, n) in [(LieType::A, 1), (LieType::A, 3), (LieType::B, 3), (LieType::C, 3), (LieType::D, 4)] {
            VectorRep::<ScalarQ>::new(&make_root_datum(t, n).unwrap()).unwrap();
        }
    }
}
