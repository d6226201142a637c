//! Closed-form Poincaré polynomials of the named spaces that appear in the
//! surgery formulas: projective and weighted projective spaces,
//! Grassmannians, their Fano schemes of lines and planes, the space of
//! lines through a point, and the Kontsevich spaces of conics and cubics.
//!
//! Conventions: `P(Z) = Σ b_{2j} q^j` (all spaces here have vanishing odd
//! cohomology), an empty index range in a product is 1, and a Grassmannian
//! `Gr(k, n)` with `k < 0` or `k > n` is the empty space, i.e. the zero
//! polynomial.

use std::ops::Mul;
use std::sync::LazyLock;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::polyring::{IntPoly, RatExpr};

/// Poincaré polynomial of a (possibly empty) space with vanishing odd
/// cohomology. Coefficients are always nonnegative.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PoincarePoly {
    poly: IntPoly,
}

impl PoincarePoly {
    /// Wraps `poly`, rejecting negative Betti numbers. `label` names the
    /// space in the error.
    pub fn new(poly: IntPoly, label: &str) -> Result<Self> {
        if let Some((degree, value)) = poly.first_negative() {
            return Err(Error::NegativeBetti {
                label: label.to_owned(),
                degree,
                value: value.to_string(),
            });
        }
        Ok(PoincarePoly { poly })
    }

    pub(crate) fn trusted(poly: IntPoly) -> Self {
        debug_assert!(
            poly.first_negative().is_none(),
            "negative Betti number in {poly}"
        );
        PoincarePoly { poly }
    }

    pub fn empty() -> Self {
        PoincarePoly {
            poly: IntPoly::zero(),
        }
    }

    pub fn point() -> Self {
        PoincarePoly {
            poly: IntPoly::one(),
        }
    }

    pub fn poly(&self) -> &IntPoly {
        &self.poly
    }

    pub fn into_poly(self) -> IntPoly {
        self.poly
    }

    pub fn is_empty(&self) -> bool {
        self.poly.is_zero()
    }

    /// Complex dimension; `None` for the empty space.
    pub fn dim(&self) -> Option<usize> {
        self.poly.degree()
    }

    /// Number of connected components (the constant coefficient `b_0`).
    pub fn components(&self) -> BigInt {
        self.poly.coeff(0)
    }

    pub fn euler(&self) -> BigInt {
        self.poly.euler()
    }

    pub fn is_palindromic(&self) -> bool {
        self.poly.is_palindromic()
    }

    /// Betti numbers `b_0, b_1, ..., b_{2 dim}` with the odd ones zero.
    pub fn betti(&self) -> Vec<BigInt> {
        let mut out = Vec::new();
        for (j, c) in self.poly.coeffs().iter().enumerate() {
            if j > 0 {
                out.push(BigInt::default());
            }
            out.push(c.clone());
        }
        out
    }

    /// Total space of a fibration with this base and the given fiber.
    pub fn times(&self, fiber: &PoincarePoly) -> PoincarePoly {
        PoincarePoly::trusted(&self.poly * &fiber.poly)
    }

    pub fn disjoint_union(&self, other: &PoincarePoly) -> PoincarePoly {
        PoincarePoly::trusted(&self.poly + &other.poly)
    }

    /// `P(Z) - 1`, the factor a fiber contributes to a blow-up correction.
    pub fn reduced(&self) -> IntPoly {
        &self.poly - IntPoly::one()
    }
}

impl std::fmt::Display for PoincarePoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.poly.fmt(f)
    }
}

/// The four auxiliary polynomials of the closed form for cubics.
#[derive(Debug)]
pub struct MartinPolynomials {
    pub f1: IntPoly,
    pub f2: IntPoly,
    pub f3: IntPoly,
    pub f4: IntPoly,
}

static MARTIN: LazyLock<MartinPolynomials> = LazyLock::new(|| {
    let m = MartinPolynomials {
        f1: IntPoly::from_i64s(&[1, 0, 2, 3, 3, -1, 1, -3, -3, -2, 0, -1]),
        f2: IntPoly::from_i64s(&[1, 0, 5, 2, -2, -5, 0, -1]),
        f3: IntPoly::from_i64s(&[2, 0, 3, 1, -1, -3, 0, -2]),
        f4: IntPoly::from_i64s(&[1, 6, 3, 2, -2, -3, -6, -1]),
    };
    assert_eq!(
        [&m.f1, &m.f2, &m.f3, &m.f4].map(IntPoly::degree),
        [Some(11), Some(7), Some(7), Some(7)]
    );
    m
});

impl MartinPolynomials {
    pub fn get() -> &'static MartinPolynomials {
        &MARTIN
    }
}

fn check_k_range(what: &str, k: i64, n: i64) -> Result<()> {
    if 1 <= k && k < n {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "{what} needs 1 <= k <= n-1, got Gr({k},{n})"
        )))
    }
}

fn expect_degree(what: String, p: &PoincarePoly, expected: i64) -> Result<()> {
    match p.dim() {
        Some(d) if d as i64 == expected => Ok(()),
        found => Err(Error::DegreeMismatch {
            what,
            expected: expected.max(0) as usize,
            found: found.map_or_else(|| "-inf".to_owned(), |d| d.to_string()),
        }),
    }
}

/// The Gaussian-binomial product `∏_{i=1}^{k} (1-q^{n-i+1})/(1-q^i)` as an
/// unreduced quotient; zero for `k < 0` or `k > n`.
pub fn gaussian_factors(k: i64, n: i64) -> RatExpr {
    if k < 0 || k > n {
        return RatExpr::poly(IntPoly::zero());
    }
    let num = RatExpr::q_product(1, k, |i| n - i + 1).expect("exponents are positive for k <= n");
    let den = RatExpr::q_product(1, k, |i| i).expect("exponents are positive");
    RatExpr::from_factors(num, den).expect("1 - q^i is nonzero for i >= 1")
}

/// `(1 - q^e)/(1 - q) = P(P^{e-1})` as an unreduced quotient.
pub(crate) fn geometric_ratio(e: i64) -> Result<RatExpr> {
    let e = usize::try_from(e).map_err(|_| Error::invalid(format!("negative exponent {e}")))?;
    RatExpr::new(IntPoly::one_minus_q_pow(e), IntPoly::one_minus_q_pow(1))
}

pub fn projective(m: u32) -> PoincarePoly {
    PoincarePoly::trusted(IntPoly::geometric(m.into()))
}

/// Rational cohomology of `P(w_0, ..., w_m)`, which agrees with `P^m`.
pub fn weighted_projective(weights: &[u32]) -> Result<PoincarePoly> {
    if weights.is_empty() || weights.contains(&0) {
        return Err(Error::invalid(format!(
            "weighted projective space needs positive weights, got {weights:?}"
        )));
    }
    Ok(projective(weights.len() as u32 - 1))
}

pub fn grassmannian(k: i64, n: i64) -> PoincarePoly {
    let p = gaussian_factors(k, n)
        .to_poly()
        .expect("Gaussian binomials are polynomials");
    PoincarePoly::trusted(p)
}

/// Fano scheme of lines: a `Gr(k-1,k+1)`-bundle over `Gr(k+1,n)`.
pub fn f1_gr(k: i64, n: i64) -> Result<PoincarePoly> {
    check_k_range("F1(Gr)", k, n)?;
    let p = gaussian_factors(k + 1, n)
        .mul(gaussian_factors(k - 1, k + 1))
        .to_poly()?;
    let p = PoincarePoly::new(p, "F1(Gr)")?;
    expect_degree(
        format!("F1(Gr({k},{n}))"),
        &p,
        (k + 1) * (n - k - 1) + 2 * (k - 1),
    )?;
    Ok(p)
}

/// Fano scheme of planes. Two families: a `Gr(k-2,k+1)`-bundle over
/// `Gr(k+1,n)` (present iff `k >= 2`) and a `Gr(k-1,k+2)`-bundle over
/// `Gr(k+2,n)` (present iff `n >= k+2`). Zero if both are absent.
pub fn f2_gr(k: i64, n: i64) -> Result<PoincarePoly> {
    check_k_range("F2(Gr)", k, n)?;
    let mut total = PoincarePoly::empty();
    if k >= 2 {
        total = total.disjoint_union(&grassmannian(k - 2, k + 1).times(&grassmannian(k + 1, n)));
    }
    if n >= k + 2 {
        total = total.disjoint_union(&grassmannian(k - 1, k + 2).times(&grassmannian(k + 2, n)));
    }
    Ok(total)
}

/// Lines through a fixed point of `Gr(k,n)`: `P^{k-1} × P^{n-k-1}`.
pub fn fx_gr(k: i64, n: i64) -> Result<PoincarePoly> {
    check_k_range("Fx(Gr)", k, n)?;
    let num = vec![
        IntPoly::one_minus_q_pow((n - k) as usize),
        IntPoly::one_minus_q_pow(k as usize),
    ];
    let den = vec![IntPoly::one_minus_q_pow(1), IntPoly::one_minus_q_pow(1)];
    let p = RatExpr::from_factors(num, den)?.to_poly()?;
    let p = PoincarePoly::new(p, "Fx(Gr)")?;
    expect_degree(format!("Fx(Gr({k},{n}))"), &p, n - 2)?;
    Ok(p)
}

/// Kontsevich space of degree-`d` maps to `P^1`, for `d ∈ {2, 3}`.
pub fn mbar_p1(d: i64) -> Result<PoincarePoly> {
    match d {
        2 => Ok(PoincarePoly::trusted(IntPoly::from_i64s(&[1, 1, 1]))),
        3 => Ok(PoincarePoly::trusted(IntPoly::from_i64s(&[1, 1, 2, 1, 1]))),
        _ => Err(Error::invalid(format!(
            "MbarP1 is only tabulated for d = 2, 3, got {d}"
        ))),
    }
}

/// Kontsevich compactification of degree-`d` rational curves in `Gr(k,n)`,
/// `d ∈ {2, 3}`, from the closed forms.
pub fn martin_m(k: i64, n: i64, d: i64) -> Result<PoincarePoly> {
    check_k_range("M(Gr,d)", k, n)?;
    if n < 3 {
        return Err(Error::invalid(format!("M(Gr,d) needs n >= 3, got n = {n}")));
    }
    let q = IntPoly::q_pow;
    let one = IntPoly::one;
    let (ku, nu) = (k as usize, n as usize);
    let expr = match d {
        2 => {
            let lead =
                (one() + q(nu)) * (one() + q(3)) - q(1) * (one() + q(1)) * (q(ku) + q(nu - ku));
            let mut num = vec![lead];
            num.extend(RatExpr::q_product(k, n, |i| i)?);
            let mut den = vec![
                IntPoly::one_minus_q_pow(1).pow(2),
                IntPoly::one_minus_q_pow(2).pow(2),
            ];
            den.extend(RatExpr::q_product(1, n - k - 1, |i| i)?);
            RatExpr::from_factors(num, den)?
        }
        3 => martin_cubic_bracket(k, n)?
            .mul(gaussian_factors(k + 1, n))
            .mul(gaussian_factors(k - 1, k + 1)),
        _ => {
            return Err(Error::invalid(format!(
                "M(Gr,d) is only available for d = 2, 3, got {d}"
            )))
        }
    };
    let p = PoincarePoly::new(expr.to_poly()?, &format!("M(Gr({k},{n}),{d})"))?;
    expect_degree(format!("M(Gr({k},{n}),{d})"), &p, k * (n - k) + d * n - 3)?;
    Ok(p)
}

/// The F_1..F_4 quotient of the cubic formula, before the `P(F_1(Gr))`
/// factor. Shared with the closed form for the Simpson space of cubics.
pub(crate) fn martin_cubic_bracket(k: i64, n: i64) -> Result<RatExpr> {
    let MartinPolynomials { f1, f2, f3, f4 } = MartinPolynomials::get();
    let q = IntPoly::q_pow;
    let one = IntPoly::one;
    let (ku, nu) = (k as usize, n as usize);
    let sym = |a: usize, b: usize| q(a) + q(b);
    let inner = f2 * q(nu) * (one() + q(2)) - f3 * q(1) * (one() + q(nu)) * sym(ku, nu - ku);
    let num = f1 * (one() + q(2 * nu))
        + (one() + q(1)).pow(2) * inner
        + f4 * q(2) * sym(2 * ku, 2 * nu - 2 * ku);
    let den = IntPoly::one_minus_q_pow(1)
        * IntPoly::one_minus_q_pow(2).pow(2)
        * IntPoly::one_minus_q_pow(3).pow(2);
    RatExpr::new(num, den)
}
