//! Lusztig's braid automorphisms T_i.
//!
//! Two mutually inverse families are available. `Standard` is
//!
//!   T_i(E_i) = −F_iK_i,  T_i(F_i) = −K_i^{-1}E_i,
//!   T_i(E_j) = Σ_r (−1)^r q_i^{−r} E_i^{(m−r)} E_j E_i^{(r)},
//!   T_i(F_j) = Σ_r (−1)^r q_i^{r} F_i^{(r)} F_j F_i^{(m−r)},   m = −a_ij,
//!
//! and `Inverse` uses its inverse as the basic operator. Root vectors and
//! everything built from them use the convention chosen at construction
//! (default `Standard`).

use serde::{Deserialize, Serialize};

use super::{Mono, UElem, Uqg, UqgError};
use crate::scalar::{q_factorial, QField};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum BraidConvention {
    #[default]
    Standard,
    Inverse,
}

impl BraidConvention {
    pub fn name(&self) -> &'static str {
        match self {
            BraidConvention::Standard => "standard",
            BraidConvention::Inverse => "inverse",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Family {
    Forward,
    Backward,
}

impl<S: QField> Uqg<S> {
    fn divided_power_e(&self, i: usize, n: u32) -> Result<UElem<S>, UqgError> {
        let x = self.pow(&self.e(i), n)?;
        let f = q_factorial::<S>(n, self.datum.d[i], self.datum.root_order);
        Ok(x.scale(&f.inv()?))
    }

    fn divided_power_f(&self, i: usize, n: u32) -> Result<UElem<S>, UqgError> {
        let x = self.pow(&self.f(i), n)?;
        let f = q_factorial::<S>(n, self.datum.d[i], self.datum.root_order);
        Ok(x.scale(&f.inv()?))
    }

    fn family_on_e(&self, fam: Family, i: usize, j: usize) -> Result<UElem<S>, UqgError> {
        let ai = self.datum.alpha(i);
        if i == j {
            return Ok(match fam {
                Family::Forward => self.mul(&self.f(i), &self.k(&ai))?.neg(),
                Family::Backward => self.mul(&self.k(&ai.neg()), &self.f(i))?.neg(),
            });
        }
        let m = (-self.datum.cartan[i][j]) as u32;
        let mut out = UElem::zero();
        for r in 0..=m {
            let sign = if r % 2 == 1 { -S::one() } else { S::one() };
            let c = sign.mul_ref(&self.qi(i, -(r as i64)));
            let (a, b) = match fam {
                Family::Forward => (m - r, r),
                Family::Backward => (r, m - r),
            };
            let t = self.mul_all(&[&self.divided_power_e(i, a)?, &self.e(j), &self.divided_power_e(i, b)?])?;
            out.add_assign(&t.scale(&c));
        }
        Ok(out)
    }

    fn family_on_f(&self, fam: Family, i: usize, j: usize) -> Result<UElem<S>, UqgError> {
        let ai = self.datum.alpha(i);
        if i == j {
            return Ok(match fam {
                Family::Forward => self.mul(&self.k(&ai.neg()), &self.e(i))?.neg(),
                Family::Backward => self.mul(&self.e(i), &self.k(&ai))?.neg(),
            });
        }
        let m = (-self.datum.cartan[i][j]) as u32;
        let mut out = UElem::zero();
        for r in 0..=m {
            let sign = if r % 2 == 1 { -S::one() } else { S::one() };
            let c = sign.mul_ref(&self.qi(i, r as i64));
            let (a, b) = match fam {
                Family::Forward => (r, m - r),
                Family::Backward => (m - r, r),
            };
            let t = self.mul_all(&[&self.divided_power_f(i, a)?, &self.f(j), &self.divided_power_f(i, b)?])?;
            out.add_assign(&t.scale(&c));
        }
        Ok(out)
    }

    fn family(&self, inverse: bool) -> Family {
        let forward = match self.convention {
            BraidConvention::Standard => !inverse,
            BraidConvention::Inverse => inverse,
        };
        if forward {
            Family::Forward
        } else {
            Family::Backward
        }
    }

    fn braid_apply(&self, i: usize, x: &UElem<S>, inverse: bool) -> Result<UElem<S>, UqgError> {
        let fam = self.family(inverse);
        let n = self.rank();
        let mut e_img: Vec<Option<UElem<S>>> = vec![None; n];
        let mut f_img: Vec<Option<UElem<S>>> = vec![None; n];
        let mut out = UElem::zero();
        for (m, c) in &x.terms {
            let mut acc = self.one();
            for &l in m.e.iter().rev() {
                let l = l as usize;
                if e_img[l].is_none() {
                    e_img[l] = Some(self.family_on_e(fam, i, l)?);
                }
                acc = self.mul(e_img[l].as_ref().unwrap(), &acc)?;
            }
            for &l in m.f.iter().rev() {
                let l = l as usize;
                if f_img[l].is_none() {
                    f_img[l] = Some(self.family_on_f(fam, i, l)?);
                }
                acc = self.mul(f_img[l].as_ref().unwrap(), &acc)?;
            }
            acc = self.left_mul_k(&self.datum.reflect(i, &m.k), &acc);
            out.add_assign(&acc.scale(c));
        }
        Ok(out)
    }

    /// T_i under the active convention.
    pub fn braid_t(&self, i: usize, x: &UElem<S>) -> Result<UElem<S>, UqgError> {
        self.braid_apply(i, x, false)
    }

    pub fn braid_t_inv(&self, i: usize, x: &UElem<S>) -> Result<UElem<S>, UqgError> {
        self.braid_apply(i, x, true)
    }

    pub fn braid_word(&self, word: &[usize], x: &UElem<S>) -> Result<UElem<S>, UqgError> {
        let mut acc = x.clone();
        for &i in word.iter().rev() {
            acc = self.braid_t(i, &acc)?;
        }
        Ok(acc)
    }

    /// Generators E_i, F_i, K_{ω_i} for automorphism tests.
    pub fn generators(&self) -> Vec<UElem<S>> {
        let n = self.rank();
        let mut out = Vec::new();
        for i in 0..n {
            out.push(self.e(i));
            out.push(self.f(i));
            out.push(UElem::mono(Mono::cartan(crate::rootdata::Weight::fundamental(n, i)), S::one()));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::{make_root_datum, LieType};
    use crate::scalar::ScalarQ;

    #[test]
    fn standard_t1_on_e1() {
        let u: Uqg<ScalarQ> = Uqg::with_convention(&make_root_datum(LieType::A, 2).unwrap(), BraidConvention::Standard);
        let t = u.braid_t(0, &u.e(0)).unwrap();
        let expect = u.mul(&u.f(0), &u.k(&u.datum().alpha(0))).unwrap().neg();
        assert_eq!(t, expect);
    }

    #[test]
    fn t_and_inverse_cancel() {
        for conv in [BraidConvention::Standard, BraidConvention::Inverse] {
            let u: Uqg<ScalarQ> = Uqg::with_convention(&make_root_datum(LieType::B, 2).unwrap(), conv);
            for g in u.generators() {
                for i in 0..2 {
                    let y = u.braid_t_inv(i, &u.braid_t(i, &g).unwrap()).unwrap();
                    assert_eq!(y, g);
                }
            }
        }
    }
}
