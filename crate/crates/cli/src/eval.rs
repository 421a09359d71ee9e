//! Evaluation of parsed expressions in U_q(g), its tensor powers and the
//! free algebra on the u^i_j.

use num_bigint::BigInt;
use num_rational::BigRational;
use qgw_core::coorddouble::CoordElement;
use qgw_core::rootdata::Weight;
use qgw_core::uqg::hopf::TensorKey;
use qgw_core::{Mono, QField, Tensor, UElem, Uqg};
use smallvec::SmallVec;
use thiserror::Error;

use crate::expr::Expr;

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("{0}")]
    Type(String),
    #[error("{0}")]
    Index(String),
    #[error(transparent)]
    Core(#[from] qgw_core::UqgError),
    #[error(transparent)]
    Scalar(#[from] qgw_core::ScalarError),
}

#[derive(Clone, PartialEq)]
pub enum Value<S> {
    Scalar(S),
    U(UElem<S>),
    Coord(CoordElement<S>),
    Tensor(Tensor<S>),
}

impl<S: QField> std::fmt::Debug for Value<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Value::Scalar(c) => write!(f, "Scalar({})", c),
            Value::U(x) => write!(f, "U({})", x),
            Value::Coord(x) => write!(f, "Coord({})", x),
            Value::Tensor(t) => write!(f, "Tensor({:?})", t),
        }
    }
}

impl<S: QField> Value<S> {
    pub fn kind(&self) -> &'static str {
        match self {
            Value::Scalar(_) => "scalar",
            Value::U(_) => "U_q(g) element",
            Value::Coord(_) => "coordinate element",
            Value::Tensor(_) => "tensor",
        }
    }
}

/// Evaluation context: the algebra and the dimension of the vector
/// representation (range of the u^i_j indices).
pub struct Ctx<'a, S> {
    pub u: &'a Uqg<S>,
    pub dim: usize,
}

impl<'a, S: QField> Ctx<'a, S> {
    pub fn new(u: &'a Uqg<S>) -> Self {
        let dim = qgw_core::lfun::vector_weights(u.datum()).len();
        Ctx { u, dim }
    }

    pub fn eval(&self, e: &Expr) -> Result<Value<S>, EvalError> {
        let u = self.u;
        Ok(match e {
            Expr::Num(n) => Value::Scalar(S::from_rational(&BigRational::from_integer(BigInt::from(n.clone())))),
            Expr::Q => Value::Scalar(u.q(1)),
            Expr::E(i) | Expr::F(i) => {
                if *i == 0 || *i > u.rank() {
                    return Err(EvalError::Index(format!("{}: generator index out of range 1..={}", e, u.rank())));
                }
                Value::U(if matches!(e, Expr::E(_)) { u.e(i - 1) } else { u.f(i - 1) })
            }
            Expr::K(w) => {
                if w.len() != u.rank() {
                    return Err(EvalError::Index(format!("{}: weight needs {} coordinates", e, u.rank())));
                }
                Value::U(u.k(&Weight::from_slice(w)))
            }
            Expr::U(i, j) => {
                if *i == 0 || *j == 0 || *i > self.dim || *j > self.dim {
                    return Err(EvalError::Index(format!("{}: indices out of range 1..={}", e, self.dim)));
                }
                Value::Coord(CoordElement::word(vec![((i - 1) as u8, (j - 1) as u8)]))
            }
            Expr::Sum(terms) => {
                let mut acc: Option<Value<S>> = None;
                for (neg, t) in terms {
                    let mut v = self.eval(t)?;
                    if *neg {
                        v = self.scale(v, &-S::one());
                    }
                    acc = Some(match acc {
                        None => v,
                        Some(a) => self.add(a, v)?,
                    });
                }
                acc.expect("sums are nonempty")
            }
            Expr::Product(factors) => {
                let mut acc = self.eval(&factors[0].1)?;
                for (div, x) in &factors[1..] {
                    let v = self.eval(x)?;
                    acc = if *div {
                        let Value::Scalar(c) = v else {
                            return Err(EvalError::Type(format!("cannot divide by a {}", v.kind())));
                        };
                        self.scale(acc, &c.inv()?)
                    } else {
                        self.mul(acc, v)?
                    };
                }
                acc
            }
            Expr::Pow(b, ex) => {
                if **b == Expr::Q {
                    return Ok(Value::Scalar(S::q_pow(*ex, u.datum().root_order)?));
                }
                if !ex.is_integer() {
                    return Err(EvalError::Type(format!("{}: fractional exponents apply to q only", e)));
                }
                let n = ex.to_integer();
                let base = self.eval(b)?;
                self.pow(base, n)?
            }
            Expr::Tensor(legs) => {
                let mut acc: Option<Tensor<S>> = None;
                for l in legs {
                    let t = match self.eval(l)? {
                        Value::Scalar(c) => one_leg(&UElem::mono(Mono::one(u.rank()), c)),
                        Value::U(x) => one_leg(&x),
                        Value::Tensor(t) => t,
                        Value::Coord(_) => {
                            return Err(EvalError::Type("tensor legs must lie in U_q(g)".into()));
                        }
                    };
                    acc = Some(match acc {
                        None => t,
                        Some(a) => concat(&a, &t),
                    });
                }
                Value::Tensor(acc.expect("tensors have legs"))
            }
        })
    }

    fn scale(&self, v: Value<S>, c: &S) -> Value<S> {
        match v {
            Value::Scalar(x) => Value::Scalar(x.mul_ref(c)),
            Value::U(x) => Value::U(x.scale(c)),
            Value::Coord(x) => Value::Coord(x.scale(c)),
            Value::Tensor(x) => Value::Tensor(x.scale(c)),
        }
    }

    fn unit_tensor(&self, arity: usize, c: S) -> Tensor<S> {
        let mut t = Tensor::zero(arity);
        t.add_term((0..arity).map(|_| Mono::one(self.u.rank())).collect(), c);
        t
    }

    fn add(&self, a: Value<S>, b: Value<S>) -> Result<Value<S>, EvalError> {
        let u = self.u;
        Ok(match (a, b) {
            (Value::Scalar(x), Value::Scalar(y)) => Value::Scalar(x + y),
            (Value::Scalar(c), Value::U(x)) | (Value::U(x), Value::Scalar(c)) => Value::U(x.add(&u.scalar(c))),
            (Value::U(x), Value::U(y)) => Value::U(x.add(&y)),
            (Value::Scalar(c), Value::Coord(x)) | (Value::Coord(x), Value::Scalar(c)) => {
                Value::Coord(x.add(&CoordElement::one().scale(&c)))
            }
            (Value::Coord(x), Value::Coord(y)) => Value::Coord(x.add(&y)),
            (Value::Scalar(c), Value::Tensor(x)) | (Value::Tensor(x), Value::Scalar(c)) => {
                let one = self.unit_tensor(x.arity, c);
                Value::Tensor(x.add(&one))
            }
            (Value::Tensor(x), Value::Tensor(y)) if x.arity == y.arity => Value::Tensor(x.add(&y)),
            (a, b) => return Err(EvalError::Type(format!("cannot add a {} and a {}", a.kind(), b.kind()))),
        })
    }

    fn mul(&self, a: Value<S>, b: Value<S>) -> Result<Value<S>, EvalError> {
        let u = self.u;
        Ok(match (a, b) {
            (Value::Scalar(c), v) | (v, Value::Scalar(c)) => self.scale(v, &c),
            (Value::U(x), Value::U(y)) => Value::U(u.mul(&x, &y)?),
            (Value::Coord(x), Value::Coord(y)) => Value::Coord(x.mul(&y)),
            (Value::Tensor(x), Value::Tensor(y)) if x.arity == y.arity => Value::Tensor(u.tensor_mul(&x, &y)?),
            (a, b) => return Err(EvalError::Type(format!("cannot multiply a {} by a {}", a.kind(), b.kind()))),
        })
    }

    fn pow(&self, base: Value<S>, n: i64) -> Result<Value<S>, EvalError> {
        if n < 0 {
            let inv = match base {
                Value::Scalar(c) => Value::Scalar(c.inv()?),
                Value::U(x) => Value::U(self.invert_cartan(&x)?),
                v => return Err(EvalError::Type(format!("negative power of a {}", v.kind()))),
            };
            return self.pow(inv, -n);
        }
        let mut acc = match &base {
            Value::Scalar(_) => Value::Scalar(S::one()),
            Value::U(_) => Value::U(self.u.one()),
            Value::Coord(_) => Value::Coord(CoordElement::one()),
            Value::Tensor(t) => Value::Tensor(self.unit_tensor(t.arity, S::one())),
        };
        for _ in 0..n {
            acc = self.mul(acc, base.clone())?;
        }
        Ok(acc)
    }

    /// Inverse of c·K_λ; nothing else is invertible here.
    fn invert_cartan(&self, x: &UElem<S>) -> Result<UElem<S>, EvalError> {
        if x.terms.len() == 1 {
            let (m, c) = x.terms.iter().next().unwrap();
            if m.is_cartan() {
                return Ok(UElem::mono(Mono::cartan(m.k.neg()), c.inv()?));
            }
        }
        Err(EvalError::Type(format!("{} is not invertible (only c·K_λ is)", x)))
    }
}

fn one_leg<S: QField>(x: &UElem<S>) -> Tensor<S> {
    let mut t = Tensor::zero(1);
    for (m, c) in &x.terms {
        let k: TensorKey = SmallVec::from_elem(m.clone(), 1);
        t.add_term(k, c.clone());
    }
    t
}

fn concat<S: QField>(a: &Tensor<S>, b: &Tensor<S>) -> Tensor<S> {
    let mut t = Tensor::zero(a.arity + b.arity);
    for (ka, ca) in &a.terms {
        for (kb, cb) in &b.terms {
            let k: TensorKey = ka.iter().chain(kb.iter()).cloned().collect();
            t.add_term(k, ca.mul_ref(cb));
        }
    }
    t
}

/// Evaluates to a U_q(g) element, accepting scalars.
pub fn expect_u<S: QField>(ctx: &Ctx<S>, e: &Expr) -> Result<UElem<S>, EvalError> {
    match ctx.eval(e)? {
        Value::U(x) => Ok(x),
        Value::Scalar(c) => Ok(ctx.u.scalar(c)),
        v => Err(EvalError::Type(format!("expected a U_q(g) element, got a {}", v.kind()))),
    }
}

/// Evaluates to an element of the free algebra on the u^i_j, accepting scalars.
pub fn expect_coord<S: QField>(ctx: &Ctx<S>, e: &Expr) -> Result<CoordElement<S>, EvalError> {
    match ctx.eval(e)? {
        Value::Coord(x) => Ok(x),
        Value::Scalar(c) => Ok(CoordElement::one().scale(&c)),
        v => Err(EvalError::Type(format!("expected a coordinate element, got a {}", v.kind()))),
    }
}
