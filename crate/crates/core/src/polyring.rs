//! Exact univariate polynomials over ℤ in the formal variable `q`, plus a
//! lazily-multiplied quotient type used to evaluate product formulas.
//!
//! Everything is dense: the coefficient of `q^j` sits at index `j`, and the
//! zero polynomial is the empty vector.

use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().copied().map(BigInt::from).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::new(vec![c.into()])
    }

    /// `c·q^j`
    pub fn monomial(c: impl Into<BigInt>, j: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); j + 1];
        coeffs[j] = c.into();
        Self::new(coeffs)
    }

    /// `q^j`
    pub fn q_pow(j: usize) -> Self {
        Self::monomial(1, j)
    }

    /// `1 - q^e`; the zero polynomial when `e = 0`.
    pub fn one_minus_q_pow(e: usize) -> Self {
        Self::one() - Self::q_pow(e)
    }

    /// `1 + q + ... + q^m`, or zero when `m < 0`.
    pub fn geometric(m: i64) -> Self {
        if m < 0 {
            return Self::zero();
        }
        IntPoly {
            coeffs: vec![BigInt::one(); m as usize + 1],
        }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    pub fn coeff(&self, j: usize) -> BigInt {
        self.coeffs.get(j).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficient symmetry `c_j = c_{deg-j}`; vacuously true for zero.
    pub fn is_palindromic(&self) -> bool {
        self.coeffs.iter().eq(self.coeffs.iter().rev())
    }

    pub fn evaluate(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    /// Sum of coefficients (value at `q = 1`).
    pub fn euler(&self) -> BigInt {
        self.coeffs.iter().sum()
    }

    /// Lowest-degree negative coefficient, if any.
    pub fn first_negative(&self) -> Option<(usize, &BigInt)> {
        self.coeffs
            .iter()
            .enumerate()
            .find(|(_, c)| c.is_negative())
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).map(|_| self.clone()).product()
    }

    /// Exact quotient `self / den`. Synthetic long division from the top
    /// degree down; every step must divide over ℤ.
    pub fn exact_div(&self, den: &IntPoly) -> Result<IntPoly> {
        let Some(den_deg) = den.degree() else {
            return Err(Error::DivisionByZero);
        };
        if self.is_zero() {
            return Ok(Self::zero());
        }
        let non_exact = |rem: Vec<BigInt>| Error::NonExactDivision {
            numerator: self.clone(),
            denominator: den.clone(),
            remainder: IntPoly::new(rem),
        };
        let num_deg = self.coeffs.len() - 1;
        if num_deg < den_deg {
            return Err(non_exact(self.coeffs.clone()));
        }
        let lead = &den.coeffs[den_deg];
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); num_deg - den_deg + 1];
        for shift in (0..quot.len()).rev() {
            let top = &rem[shift + den_deg];
            if top.is_zero() {
                continue;
            }
            if !(top % lead).is_zero() {
                return Err(non_exact(rem));
            }
            let c = top / lead;
            for (i, d) in den.coeffs.iter().enumerate() {
                rem[shift + i] -= &c * d;
            }
            quot[shift] = c;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return Err(non_exact(rem));
        }
        Ok(IntPoly::new(quot))
    }
}

impl From<i64> for IntPoly {
    fn from(c: i64) -> Self {
        IntPoly::constant(c)
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            first = false;
            match (j, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => f.write_str("q")?,
                (1, false) => write!(f, "{mag}q")?,
                (_, true) => write!(f, "q^{j}")?,
                (_, false) => write!(f, "{mag}q^{j}")?,
            }
        }
        Ok(())
    }
}

fn add_coeffs(a: &[BigInt], b: &[BigInt], negate_b: bool) -> IntPoly {
    let len = a.len().max(b.len());
    let mut out = Vec::with_capacity(len);
    for j in 0..len {
        let x = a.get(j).cloned().unwrap_or_default();
        let y = b.get(j).cloned().unwrap_or_default();
        out.push(if negate_b { x - y } else { x + y });
    }
    IntPoly::new(out)
}

fn mul_coeffs(a: &[BigInt], b: &[BigInt]) -> IntPoly {
    if a.is_empty() || b.is_empty() {
        return IntPoly::zero();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    IntPoly::new(out)
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl $trait<&IntPoly> for &IntPoly {
            type Output = IntPoly;
            fn $method(self, rhs: &IntPoly) -> IntPoly {
                $body(self, rhs)
            }
        }
        impl $trait<IntPoly> for IntPoly {
            type Output = IntPoly;
            fn $method(self, rhs: IntPoly) -> IntPoly {
                $body(&self, &rhs)
            }
        }
        impl $trait<&IntPoly> for IntPoly {
            type Output = IntPoly;
            fn $method(self, rhs: &IntPoly) -> IntPoly {
                $body(&self, rhs)
            }
        }
        impl $trait<IntPoly> for &IntPoly {
            type Output = IntPoly;
            fn $method(self, rhs: IntPoly) -> IntPoly {
                $body(self, &rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a: &IntPoly, b: &IntPoly| add_coeffs(
    &a.coeffs, &b.coeffs, false
));
forward_binop!(Sub, sub, |a: &IntPoly, b: &IntPoly| add_coeffs(
    &a.coeffs, &b.coeffs, true
));
forward_binop!(Mul, mul, |a: &IntPoly, b: &IntPoly| mul_coeffs(
    &a.coeffs, &b.coeffs
));

impl AddAssign<&IntPoly> for IntPoly {
    fn add_assign(&mut self, rhs: &IntPoly) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&IntPoly> for IntPoly {
    fn sub_assign(&mut self, rhs: &IntPoly) {
        *self = &*self - rhs;
    }
}

impl Neg for IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly {
            coeffs: self.coeffs.into_iter().map(Neg::neg).collect(),
        }
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        -self.clone()
    }
}

impl Sum for IntPoly {
    fn sum<I: Iterator<Item = IntPoly>>(iter: I) -> Self {
        iter.fold(IntPoly::zero(), |acc, p| acc + p)
    }
}

impl<'a> Sum<&'a IntPoly> for IntPoly {
    fn sum<I: Iterator<Item = &'a IntPoly>>(iter: I) -> Self {
        iter.fold(IntPoly::zero(), |acc, p| acc + p)
    }
}

impl Product for IntPoly {
    fn product<I: Iterator<Item = IntPoly>>(iter: I) -> Self {
        iter.fold(IntPoly::one(), |acc, p| acc * p)
    }
}

impl<'a> Product<&'a IntPoly> for IntPoly {
    fn product<I: Iterator<Item = &'a IntPoly>>(iter: I) -> Self {
        iter.fold(IntPoly::one(), |acc, p| acc * p)
    }
}

/// A quotient of products of polynomials, kept as factor lists until
/// [`RatExpr::to_poly`] performs one exact division at the end.
#[derive(Clone, Debug)]
pub struct RatExpr {
    num: Vec<IntPoly>,
    den: Vec<IntPoly>,
}

impl RatExpr {
    pub fn new(num: IntPoly, den: IntPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(RatExpr {
            num: vec![num],
            den: vec![den],
        })
    }

    pub fn poly(p: IntPoly) -> Self {
        RatExpr {
            num: vec![p],
            den: Vec::new(),
        }
    }

    /// `∏ num / ∏ den`; fails if any denominator factor is zero.
    pub fn from_factors(num: Vec<IntPoly>, den: Vec<IntPoly>) -> Result<Self> {
        if den.iter().any(IntPoly::is_zero) {
            return Err(Error::DivisionByZero);
        }
        Ok(RatExpr { num, den })
    }

    /// `∏_{i=lo}^{hi} (1 - q^{f(i)})`; an empty range (hi < lo) is 1.
    pub fn q_product(lo: i64, hi: i64, exponent: impl Fn(i64) -> i64) -> Result<Vec<IntPoly>> {
        (lo..=hi)
            .map(|i| {
                let e = exponent(i);
                usize::try_from(e)
                    .map(IntPoly::one_minus_q_pow)
                    .map_err(|_| Error::invalid(format!("negative exponent {e} in (1 - q^e)")))
            })
            .collect()
    }

    pub fn numerator(&self) -> IntPoly {
        self.num.iter().product()
    }

    pub fn denominator(&self) -> IntPoly {
        self.den.iter().product()
    }

    pub fn mul_poly(mut self, rhs: IntPoly) -> RatExpr {
        self.num.push(rhs);
        self
    }

    fn combine(self, rhs: RatExpr, negate: bool) -> RatExpr {
        let sign = |p: IntPoly| if negate { -p } else { p };
        if self.den == rhs.den {
            let num = self.numerator() + sign(rhs.numerator());
            return RatExpr {
                num: vec![num],
                den: self.den,
            };
        }
        let lhs_den = self.denominator();
        let rhs_den = rhs.denominator();
        let num = self.numerator() * &rhs_den + sign(rhs.numerator() * &lhs_den);
        let mut den = self.den;
        den.extend(rhs.den);
        RatExpr {
            num: vec![num],
            den,
        }
    }

    /// Exact reduction to a polynomial.
    pub fn to_poly(&self) -> Result<IntPoly> {
        self.numerator().exact_div(&self.denominator())
    }
}

impl From<IntPoly> for RatExpr {
    fn from(p: IntPoly) -> Self {
        RatExpr::poly(p)
    }
}

impl Mul for RatExpr {
    type Output = RatExpr;

    fn mul(mut self, rhs: RatExpr) -> RatExpr {
        self.num.extend(rhs.num);
        self.den.extend(rhs.den);
        self
    }
}

impl Add for RatExpr {
    type Output = RatExpr;

    fn add(self, rhs: RatExpr) -> RatExpr {
        self.combine(rhs, false)
    }
}

impl Sub for RatExpr {
    type Output = RatExpr;

    fn sub(self, rhs: RatExpr) -> RatExpr {
        self.combine(rhs, true)
    }
}
