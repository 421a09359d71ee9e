//! Exact scalars for the workbench.
//!
//! The coefficient field is ℚ(q^{1/m}), realized as rational functions in a
//! formal variable `s` with `q = s^m`. Every algebra in this crate is generic
//! over [`QField`], so the same code also runs over [`EvalQ`], the exact
//! specialization `s = 2`, which is used as a fast probabilistic cross-check.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("exponent {0} is not representable with root order m = {1}")]
    FractionalExponent(String, u32),
    #[error("incompatible root orders {0} and {1}")]
    IncompatibleRootOrder(u32, u32),
    #[error("malformed scalar encoding: {0}")]
    Malformed(String),
}

/// Field operations required by the algebra code.
///
/// `s_pow(k, m)` is the element `s^k` in the field where `q = s^m`.
pub trait QField:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
    + for<'a> MulAssign<&'a Self>
{
    fn s_pow(k: i64, m: u32) -> Self;
    fn from_int(n: i64) -> Self;
    fn from_rational(r: &BigRational) -> Self;
    fn inv(&self) -> Result<Self, ScalarError>;

    fn mul_ref(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out *= other;
        out
    }

    fn div(&self, other: &Self) -> Result<Self, ScalarError> {
        Ok(self.mul_ref(&other.inv()?))
    }

    /// `q^e` for a rational exponent; `m·e` must be an integer.
    fn q_pow(e: Ratio<i64>, m: u32) -> Result<Self, ScalarError> {
        let scaled = e * Ratio::from_integer(m as i64);
        if !scaled.is_integer() {
            return Err(ScalarError::FractionalExponent(e.to_string(), m));
        }
        Ok(Self::s_pow(scaled.to_integer(), m))
    }

    /// Rough size measure used to pick pivots during elimination.
    fn weight(&self) -> usize {
        0
    }

    /// Exact value at `s = 2`, if defined there.
    fn specialize(&self) -> Option<BigRational>;

    /// `q^n` for an integer exponent.
    fn q_int_pow(n: i64, m: u32) -> Self {
        Self::s_pow(n * m as i64, m)
    }
}

// ---------------------------------------------------------------------------
// Laurent polynomials

/// Laurent polynomial in `s`, stored densely from the lowest exponent.
///
/// Invariant: either `coeffs` is empty (the zero polynomial, `low == 0`) or
/// both the first and last coefficient are nonzero.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct LaurentPoly {
    low: i64,
    coeffs: Vec<BigRational>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: BigRational) -> Self {
        Self::monomial(0, c)
    }

    pub fn monomial(exp: i64, c: BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentPoly { low: exp, coeffs: vec![c] }
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, BigRational)>>(terms: I) -> Self {
        let terms: Vec<_> = terms.into_iter().collect();
        if terms.is_empty() {
            return Self::zero();
        }
        let low = terms.iter().map(|t| t.0).min().unwrap();
        let high = terms.iter().map(|t| t.0).max().unwrap();
        let mut coeffs = vec![BigRational::zero(); (high - low + 1) as usize];
        for (e, c) in terms {
            coeffs[(e - low) as usize] += c;
        }
        Self::from_dense(low, coeffs)
    }

    fn from_dense(mut low: i64, mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        let lead_zeros = coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead_zeros == coeffs.len() {
            return Self::zero();
        }
        if lead_zeros > 0 {
            coeffs.drain(..lead_zeros);
            low += lead_zeros as i64;
        }
        LaurentPoly { low, coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.low == 0 && self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// True when the polynomial does not involve `s`.
    pub fn is_constant(&self) -> bool {
        self.is_zero() || (self.low == 0 && self.coeffs.len() == 1)
    }

    pub fn low(&self) -> i64 {
        self.low
    }

    pub fn high(&self) -> i64 {
        self.low + self.coeffs.len() as i64 - 1
    }

    pub fn coeff(&self, exp: i64) -> BigRational {
        if exp < self.low || exp > self.high() || self.is_zero() {
            return BigRational::zero();
        }
        self.coeffs[(exp - self.low) as usize].clone()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigRational)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.low + i as i64, c))
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn shift(&self, k: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        LaurentPoly { low: self.low + k, coeffs: self.coeffs.clone() }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentPoly { low: self.low, coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    pub fn neg(&self) -> Self {
        LaurentPoly { low: self.low, coeffs: self.coeffs.iter().map(|x| -x).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let low = self.low.min(other.low);
        let high = self.high().max(other.high());
        let mut coeffs = vec![BigRational::zero(); (high - low + 1) as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[(self.low - low) as usize + i] += c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            coeffs[(other.low - low) as usize + i] += c;
        }
        Self::from_dense(low, coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if other.coeffs.len() == 1 {
            return LaurentPoly {
                low: self.low + other.low,
                coeffs: self.coeffs.iter().map(|x| x * &other.coeffs[0]).collect(),
            };
        }
        if self.coeffs.len() == 1 {
            return other.mul(self);
        }
        let mut coeffs = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        Self::from_dense(self.low + other.low, coeffs)
    }

    pub fn eval(&self, s: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * s + c;
        }
        acc * pow_rational(s, self.low)
    }

    /// Coefficient vector of the ordinary polynomial `s^{-low} · self`.
    fn dense(&self) -> &[BigRational] {
        &self.coeffs
    }
}

fn pow_rational(s: &BigRational, k: i64) -> BigRational {
    match k.cmp(&0) {
        Ordering::Equal => BigRational::one(),
        Ordering::Greater => num_traits::pow(s.clone(), k as usize),
        Ordering::Less => num_traits::pow(s.recip(), (-k) as usize),
    }
}

// Ordinary dense polynomial helpers (index = degree).

fn trim(mut p: Vec<BigRational>) -> Vec<BigRational> {
    while p.last().map_or(false, |c| c.is_zero()) {
        p.pop();
    }
    p
}

fn poly_divrem(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let b = trim(b.to_vec());
    assert!(!b.is_empty(), "polynomial division by zero");
    let mut r = trim(a.to_vec());
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let lead_inv = b.last().unwrap().recip();
    let mut q = vec![BigRational::zero(); r.len() - b.len() + 1];
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let c = r.last().unwrap() * &lead_inv;
        for (i, bc) in b.iter().enumerate() {
            r[shift + i] -= &c * bc;
        }
        q[shift] = c;
        r.pop();
        r = trim(r);
    }
    (trim(q), r)
}

fn poly_monic(p: Vec<BigRational>) -> Vec<BigRational> {
    match p.last() {
        None => p,
        Some(l) if l.is_one() => p,
        Some(l) => {
            let inv = l.recip();
            p.iter().map(|c| c * &inv).collect()
        }
    }
}

fn poly_gcd(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut x = poly_monic(trim(a.to_vec()));
    let mut y = poly_monic(trim(b.to_vec()));
    while !y.is_empty() {
        let (_, r) = poly_divrem(&x, &y);
        x = y;
        y = poly_monic(r);
    }
    x
}

// ---------------------------------------------------------------------------
// Rational functions

/// Element of ℚ(s), `q = s^m`.
///
/// Canonical form: `den` is an ordinary polynomial with nonzero constant term
/// and leading coefficient 1, coprime to `num`; all powers of `s` live in
/// `num`. `m == 0` marks a value that does not involve `s` and is compatible
/// with every root order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: LaurentPoly,
    den: LaurentPoly,
    m: u32,
}

/// The workbench's symbolic scalar.
pub type ScalarQ = RatFunc;

fn merge_m(a: u32, b: u32) -> u32 {
    match (a, b) {
        (0, x) | (x, 0) => x,
        (x, y) if x == y => x,
        (x, y) => panic!("{}", ScalarError::IncompatibleRootOrder(x, y)),
    }
}

impl RatFunc {
    pub fn new(num: LaurentPoly, den: LaurentPoly, m: u32) -> Result<Self, ScalarError> {
        if den.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Self::normalize(num, den, m))
    }

    pub fn from_poly(num: LaurentPoly, m: u32) -> Self {
        Self::normalize(num, LaurentPoly::constant(BigRational::one()), m)
    }

    fn normalize(num: LaurentPoly, den: LaurentPoly, m: u32) -> Self {
        if num.is_zero() {
            return RatFunc { num, den: LaurentPoly::constant(BigRational::one()), m: 0 };
        }
        let shift = den.low();
        let mut num = num.shift(-shift);
        let mut den = den.shift(-shift);
        if den.coeffs.len() > 1 && num.coeffs.len() > 1 {
            let g = poly_gcd(num.dense(), den.dense());
            if g.len() > 1 {
                let (qn, _) = poly_divrem(num.dense(), &g);
                let (qd, _) = poly_divrem(den.dense(), &g);
                num = LaurentPoly::from_dense(num.low(), qn);
                den = LaurentPoly::from_dense(0, qd);
            }
        }
        let lead = den.leading().unwrap().clone();
        if !lead.is_one() {
            let inv = lead.recip();
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        let m = if num.is_constant() && den.is_constant() { 0 } else { m };
        RatFunc { num, den, m }
    }

    pub fn num(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn den(&self) -> &LaurentPoly {
        &self.den
    }

    /// Root order; 0 when the value is a rational constant.
    pub fn root_order(&self) -> u32 {
        self.m
    }

    pub fn is_laurent(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        if self.num.is_zero() {
            return Some(BigRational::zero());
        }
        if self.num.is_constant() && self.den.is_one() {
            return Some(self.num.coeff(0));
        }
        None
    }

    /// Substitute an exact rational for `s`; `None` if the denominator vanishes.
    pub fn eval(&self, s: &BigRational) -> Option<BigRational> {
        let d = self.den.eval(s);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(s) / d)
    }

    pub fn to_eval(&self) -> EvalQ {
        EvalQ(self.eval(&EvalQ::point()).expect("denominator vanishes at the evaluation point"))
    }

    fn add_impl(&self, other: &Self, negate: bool) -> Self {
        let m = merge_m(self.m, other.m);
        let on = if negate { other.num.neg() } else { other.num.clone() };
        if self.den == other.den {
            return Self::normalize(self.num.add(&on), self.den.clone(), m);
        }
        let num = self.num.mul(&other.den).add(&on.mul(&self.den));
        Self::normalize(num, self.den.mul(&other.den), m)
    }

    fn mul_impl(&self, other: &Self) -> Self {
        let m = merge_m(self.m, other.m);
        if self.num.is_zero() || other.num.is_zero() {
            return RatFunc::zero();
        }
        if self.den.is_one() && other.den.is_one() {
            let num = self.num.mul(&other.num);
            let m = if num.is_constant() { 0 } else { m };
            return RatFunc { num, den: self.den.clone(), m };
        }
        Self::normalize(self.num.mul(&other.num), self.den.mul(&other.den), m)
    }

    fn fmt_q_exp(&self, k: i64) -> String {
        let m = self.m.max(1) as i64;
        let r = Ratio::new(k, m);
        if r.is_integer() {
            r.to_integer().to_string()
        } else {
            format!("({}/{})", r.numer(), r.denom())
        }
    }

    fn fmt_laurent(&self, p: &LaurentPoly, latex: bool) -> String {
        let mut out = String::new();
        let terms: Vec<_> = p.terms().collect();
        for (idx, (e, c)) in terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let var = if *e == 0 {
                String::new()
            } else if *e == self.m.max(1) as i64 {
                "q".to_string()
            } else if latex {
                let m = self.m.max(1) as i64;
                let r = Ratio::new(*e, m);
                if r.is_integer() {
                    format!("q^{{{}}}", r)
                } else {
                    format!("q^{{{}/{}}}", r.numer(), r.denom())
                }
            } else {
                format!("q^{}", self.fmt_q_exp(*e))
            };
            let coef = fmt_rational(&abs, latex);
            if var.is_empty() {
                out.push_str(&coef);
            } else if abs.is_one() {
                out.push_str(&var);
            } else if latex {
                out.push_str(&format!("{} {}", coef, var));
            } else {
                out.push_str(&format!("{}*{}", coef, var));
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }

    pub fn to_latex(&self) -> String {
        let n = self.fmt_laurent(&self.num, true);
        if self.den.is_one() {
            n
        } else {
            format!("\\frac{{{}}}{{{}}}", n, self.fmt_laurent(&self.den, true))
        }
    }
}

fn fmt_rational(r: &BigRational, latex: bool) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else if latex {
        format!("\\tfrac{{{}}}{{{}}}", r.numer(), r.denom())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.fmt_laurent(&self.num, false);
        if self.den.is_one() {
            write!(f, "{}", n)
        } else {
            write!(f, "({})/({})", n, self.fmt_laurent(&self.den, false))
        }
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl Zero for RatFunc {
    fn zero() -> Self {
        RatFunc {
            num: LaurentPoly::zero(),
            den: LaurentPoly::constant(BigRational::one()),
            m: 0,
        }
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for RatFunc {
    fn one() -> Self {
        RatFunc {
            num: LaurentPoly::constant(BigRational::one()),
            den: LaurentPoly::constant(BigRational::one()),
            m: 0,
        }
    }
}

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { num: self.num.neg(), den: self.den, m: self.m }
    }
}

impl<'a> Neg for &'a RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { num: self.num.neg(), den: self.den.clone(), m: self.m }
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl<'a, 'b> $tr<&'b RatFunc> for &'a RatFunc {
            type Output = RatFunc;
            fn $method(self, rhs: &'b RatFunc) -> RatFunc {
                $body(self, rhs)
            }
        }
        impl $tr<RatFunc> for RatFunc {
            type Output = RatFunc;
            fn $method(self, rhs: RatFunc) -> RatFunc {
                $body(&self, &rhs)
            }
        }
        impl<'b> $tr<&'b RatFunc> for RatFunc {
            type Output = RatFunc;
            fn $method(self, rhs: &'b RatFunc) -> RatFunc {
                $body(&self, rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a: &RatFunc, b: &RatFunc| a.add_impl(b, false));
forward_binop!(Sub, sub, |a: &RatFunc, b: &RatFunc| a.add_impl(b, true));
forward_binop!(Mul, mul, |a: &RatFunc, b: &RatFunc| a.mul_impl(b));

impl<'a> AddAssign<&'a RatFunc> for RatFunc {
    fn add_assign(&mut self, rhs: &'a RatFunc) {
        *self = self.add_impl(rhs, false);
    }
}

impl<'a> SubAssign<&'a RatFunc> for RatFunc {
    fn sub_assign(&mut self, rhs: &'a RatFunc) {
        *self = self.add_impl(rhs, true);
    }
}

impl<'a> MulAssign<&'a RatFunc> for RatFunc {
    fn mul_assign(&mut self, rhs: &'a RatFunc) {
        *self = self.mul_impl(rhs);
    }
}

impl QField for RatFunc {
    fn s_pow(k: i64, m: u32) -> Self {
        let num = LaurentPoly::monomial(k, BigRational::one());
        RatFunc {
            num,
            den: LaurentPoly::constant(BigRational::one()),
            m: if k == 0 { 0 } else { m },
        }
    }

    fn from_int(n: i64) -> Self {
        Self::from_rational(&BigRational::from_integer(BigInt::from(n)))
    }

    fn from_rational(r: &BigRational) -> Self {
        RatFunc {
            num: LaurentPoly::constant(r.clone()),
            den: LaurentPoly::constant(BigRational::one()),
            m: 0,
        }
    }

    fn inv(&self) -> Result<Self, ScalarError> {
        if self.num.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Self::normalize(self.den.clone(), self.num.clone(), self.m))
    }

    fn specialize(&self) -> Option<BigRational> {
        self.eval(&EvalQ::point())
    }

    fn mul_ref(&self, other: &Self) -> Self {
        self.mul_impl(other)
    }

    fn weight(&self) -> usize {
        let size = |p: &LaurentPoly| -> usize {
            p.coeffs.iter().map(|c| (c.numer().bits() + c.denom().bits()) as usize + 1).sum()
        };
        size(&self.num) + size(&self.den)
    }

    fn div(&self, other: &Self) -> Result<Self, ScalarError> {
        if other.num.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        let m = merge_m(self.m, other.m);
        Ok(Self::normalize(self.num.mul(&other.den), self.den.mul(&other.num), m))
    }
}

// JSON: {"num": [[exp, "p/r"], ...], "den": [...], "m": m}

#[derive(Serialize, Deserialize)]
struct RatFuncJson {
    num: Vec<(i64, String)>,
    den: Vec<(i64, String)>,
    m: u32,
}

fn poly_to_json(p: &LaurentPoly) -> Vec<(i64, String)> {
    p.terms().map(|(e, c)| (e, c.to_string())).collect()
}

fn poly_from_json(terms: &[(i64, String)]) -> Result<LaurentPoly, ScalarError> {
    let mut out = Vec::with_capacity(terms.len());
    for (e, c) in terms {
        let r: BigRational = c.parse().map_err(|_| ScalarError::Malformed(c.clone()))?;
        out.push((*e, r));
    }
    Ok(LaurentPoly::from_terms(out))
}

impl Serialize for RatFunc {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        RatFuncJson { num: poly_to_json(&self.num), den: poly_to_json(&self.den), m: self.m }
            .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for RatFunc {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let j = RatFuncJson::deserialize(de)?;
        let num = poly_from_json(&j.num).map_err(serde::de::Error::custom)?;
        let den = poly_from_json(&j.den).map_err(serde::de::Error::custom)?;
        RatFunc::new(num, den, j.m).map_err(serde::de::Error::custom)
    }
}

// ---------------------------------------------------------------------------
// Specialization s = 2

/// Exact specialization of ℚ(s) at `s = 2`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct EvalQ(pub BigRational);

impl EvalQ {
    pub fn point() -> BigRational {
        BigRational::from_integer(BigInt::from(2))
    }
}

impl fmt::Display for EvalQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Zero for EvalQ {
    fn zero() -> Self {
        EvalQ(BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl One for EvalQ {
    fn one() -> Self {
        EvalQ(BigRational::one())
    }
}

impl Neg for EvalQ {
    type Output = EvalQ;
    fn neg(self) -> EvalQ {
        EvalQ(-self.0)
    }
}

impl Add for EvalQ {
    type Output = EvalQ;
    fn add(self, rhs: EvalQ) -> EvalQ {
        EvalQ(self.0 + rhs.0)
    }
}

impl Sub for EvalQ {
    type Output = EvalQ;
    fn sub(self, rhs: EvalQ) -> EvalQ {
        EvalQ(self.0 - rhs.0)
    }
}

impl Mul for EvalQ {
    type Output = EvalQ;
    fn mul(self, rhs: EvalQ) -> EvalQ {
        EvalQ(self.0 * rhs.0)
    }
}

impl<'a> AddAssign<&'a EvalQ> for EvalQ {
    fn add_assign(&mut self, rhs: &'a EvalQ) {
        self.0 += &rhs.0;
    }
}

impl<'a> SubAssign<&'a EvalQ> for EvalQ {
    fn sub_assign(&mut self, rhs: &'a EvalQ) {
        self.0 -= &rhs.0;
    }
}

impl<'a> MulAssign<&'a EvalQ> for EvalQ {
    fn mul_assign(&mut self, rhs: &'a EvalQ) {
        self.0 *= &rhs.0;
    }
}

impl QField for EvalQ {
    fn s_pow(k: i64, _m: u32) -> Self {
        EvalQ(pow_rational(&Self::point(), k))
    }
    fn from_int(n: i64) -> Self {
        EvalQ(BigRational::from_integer(BigInt::from(n)))
    }
    fn from_rational(r: &BigRational) -> Self {
        EvalQ(r.clone())
    }
    fn inv(&self) -> Result<Self, ScalarError> {
        if self.0.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(EvalQ(self.0.recip()))
    }
    fn specialize(&self) -> Option<BigRational> {
        Some(self.0.clone())
    }
    fn mul_ref(&self, other: &Self) -> Self {
        EvalQ(&self.0 * &other.0)
    }
}

// ---------------------------------------------------------------------------
// q-numbers

/// `[n]_{q^d} = (q^{dn} - q^{-dn}) / (q^d - q^{-d})`, expanded as a Laurent polynomial.
pub fn q_int<S: QField>(n: i64, d: i64, m: u32) -> S {
    let mut acc = S::zero();
    for k in 0..n.abs() {
        acc += &S::q_int_pow(d * (n.abs() - 1 - 2 * k), m);
    }
    if n < 0 {
        -acc
    } else {
        acc
    }
}

pub fn q_factorial<S: QField>(n: u32, d: i64, m: u32) -> S {
    let mut acc = S::one();
    for k in 1..=n as i64 {
        acc *= &q_int::<S>(k, d, m);
    }
    acc
}

/// Gaussian binomial `[n choose k]_{q^d}`, computed by the q-Pascal rule so it
/// stays a Laurent polynomial.
pub fn q_binomial<S: QField>(n: u32, k: u32, d: i64, m: u32) -> S {
    if k > n {
        return S::zero();
    }
    // [n,k] = q^{-dk}[n-1,k] + q^{d(n-k)}[n-1,k-1]
    let mut row: Vec<S> = vec![S::one()];
    for i in 1..=n {
        let mut next = vec![S::zero(); i as usize + 1];
        for j in 0..=i {
            let mut v = S::zero();
            if j < i {
                v += &row[j as usize].mul_ref(&S::q_int_pow(-d * j as i64, m));
            }
            if j >= 1 {
                v += &row[j as usize - 1].mul_ref(&S::q_int_pow(d * (i - j) as i64, m));
            }
            next[j as usize] = v;
        }
        row = next;
    }
    row[k as usize].clone()
}

/// `q^d - q^{-d}`.
pub fn q_diff<S: QField>(d: i64, m: u32) -> S {
    S::q_int_pow(d, m) - S::q_int_pow(-d, m)
}

pub fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Small helper for exponents coming out of pairings.
pub fn ratio_to_i64(r: &BigRational) -> Option<Ratio<i64>> {
    Some(Ratio::new(r.numer().to_i64()?, r.denom().to_i64()?))
}

pub fn gcd_i64(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(m: u32) -> ScalarQ {
        ScalarQ::q_int_pow(1, m)
    }

    fn qi(m: u32) -> ScalarQ {
        ScalarQ::q_int_pow(-1, m)
    }

    #[test]
    fn additive_inverse_cancels() {
        let a = q(1) - qi(1);
        let b = qi(1) - q(1);
        assert!((a + b).is_zero());
    }

    #[test]
    fn polynomial_division_is_exact() {
        let num = ScalarQ::q_int_pow(2, 1) - ScalarQ::q_int_pow(-2, 1);
        let den = q(1) - qi(1);
        let r = num.div(&den).unwrap();
        assert_eq!(r, q(1) + qi(1));
        assert!(r.is_laurent());
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(q(1).div(&ScalarQ::zero()), Err(ScalarError::DivisionByZero));
        assert_eq!(ScalarQ::zero().inv(), Err(ScalarError::DivisionByZero));
    }

    #[test]
    fn q_pow_cases() {
        assert_eq!(ScalarQ::q_pow(Ratio::new(0, 1), 2).unwrap(), ScalarQ::one());
        assert_eq!(ScalarQ::q_pow(Ratio::new(1, 1), 3).unwrap(), ScalarQ::s_pow(3, 3));
        assert_eq!(ScalarQ::q_pow(Ratio::new(1, 2), 2).unwrap(), ScalarQ::s_pow(1, 2));
        assert!(matches!(
            ScalarQ::q_pow(Ratio::new(1, 3), 2),
            Err(ScalarError::FractionalExponent(_, 2))
        ));
    }

    #[test]
    fn q_numbers() {
        assert!(q_int::<ScalarQ>(0, 1, 1).is_zero());
        assert_eq!(q_int::<ScalarQ>(2, 1, 1), q(1) + qi(1));
        assert_eq!(q_int::<ScalarQ>(-2, 1, 1), -(q(1) + qi(1)));
        assert_eq!(q_binomial::<ScalarQ>(2, 1, 1, 1), q(1) + qi(1));
        // [4 choose 2] from factorials
        let via_fact = q_factorial::<ScalarQ>(4, 1, 1)
            .div(&(q_factorial::<ScalarQ>(2, 1, 1) * q_factorial::<ScalarQ>(2, 1, 1)))
            .unwrap();
        assert_eq!(q_binomial::<ScalarQ>(4, 2, 1, 1), via_fact);
    }

    #[test]
    fn canonical_form_unique() {
        // (q^2 - 1)/(q - 1) and (q + 1) must be identical structures.
        let a = (ScalarQ::q_int_pow(2, 1) - ScalarQ::one())
            .div(&(q(1) - ScalarQ::one()))
            .unwrap();
        assert_eq!(a, q(1) + ScalarQ::one());
        // 1/(2q) keeps s-powers in the numerator.
        let b = ScalarQ::from_int(2).mul_ref(&q(1)).inv().unwrap();
        assert!(b.den().is_one());
        assert_eq!(b.num().low(), -1);
    }

    #[test]
    fn constants_are_compatible_with_any_root_order() {
        let c = ScalarQ::from_int(3);
        assert_eq!(c.root_order(), 0);
        assert_eq!((c + q(4)).root_order(), 4);
        assert_eq!((q(2) - q(2)).root_order(), 0);
    }

    #[test]
    #[should_panic]
    fn incompatible_root_orders_panic() {
        let _ = q(2) + q(3);
    }

    #[test]
    fn json_round_trip() {
        let x = (q(2) + ScalarQ::from_rational(&rational(3, 7)))
            .div(&(q(2) - ScalarQ::one()))
            .unwrap();
        let s = serde_json::to_string(&x).unwrap();
        assert!(s.contains("\"m\":2"));
        let y: ScalarQ = serde_json::from_str(&s).unwrap();
        assert_eq!(x, y);
    }

    #[test]
    fn display() {
        let x = q(1) + qi(1);
        assert_eq!(x.to_string(), "q + q^-1");
        assert_eq!(ScalarQ::s_pow(1, 2).to_string(), "q^(1/2)");
    }
}
