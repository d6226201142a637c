//! Poincaré polynomials of the Simpson (`S`) and Hilbert (`H`)
//! compactifications of conics and twisted cubics in `Gr(k,n)`.
//!
//! Every space is computed two ways: from its closed product formula
//! ([`Mode::Closed`]), and by replaying the blow-up/blow-down chain that
//! relates it to the Kontsevich space ([`Mode::Pipeline`]). The two routes
//! share only the Kontsevich closed form and the Grassmannian building
//! blocks, so their agreement is a real check.

use std::fmt;
use std::ops::{Add, Mul, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::catalog::{
    f1_gr, fx_gr, geometric_ratio, grassmannian, martin_cubic_bracket, martin_m, mbar_p1,
    projective, weighted_projective, PoincarePoly,
};
use crate::error::{Error, Result};
use crate::polyring::{IntPoly, RatExpr};
use crate::surgery::{blowup_apply, bundle_total, Pipeline, PipelineRun};

/// `P(S(P^2, 3))`, displayed in closed form alongside the cubic formula.
pub const S_PLANE_CUBICS: [i64; 9] = [1, 2, 3, 3, 3, 3, 3, 2, 1];

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Compactification {
    /// Kontsevich stable maps.
    M,
    /// Simpson semistable sheaves.
    S,
    /// Hilbert scheme.
    H,
}

impl Compactification {
    pub fn as_str(self) -> &'static str {
        match self {
            Compactification::M => "M",
            Compactification::S => "S",
            Compactification::H => "H",
        }
    }
}

impl fmt::Display for Compactification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Compactification {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "M" | "m" => Ok(Compactification::M),
            "S" | "s" => Ok(Compactification::S),
            "H" | "h" => Ok(Compactification::H),
            other => Err(Error::invalid(format!(
                "unknown compactification `{other}`"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Closed,
    Pipeline,
}

/// A degree-`d` compactification of rational curves in `Gr(k,n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModuliKey {
    pub k: i64,
    pub n: i64,
    pub d: i64,
    pub compactification: Compactification,
}

impl ModuliKey {
    /// Builds a key, enforcing the domain guard.
    pub fn new(k: i64, n: i64, d: i64, compactification: Compactification) -> Result<Self> {
        let key = ModuliKey {
            k,
            n,
            d,
            compactification,
        };
        key.validate()?;
        Ok(key)
    }

    pub fn validate(&self) -> Result<()> {
        let ModuliKey {
            k,
            n,
            d,
            compactification,
        } = *self;
        if !(1 <= k && k < n) {
            return Err(Error::invalid(format!(
                "need 1 <= k <= n-1, got Gr({k},{n})"
            )));
        }
        if !matches!(d, 2 | 3) {
            return Err(Error::invalid(format!(
                "only degrees 2 and 3 are supported, got d = {d}"
            )));
        }
        if n < 3 {
            return Err(Error::invalid(format!(
                "Gr({k},{n}) = P^1 has no degree-{d} curves of this kind; need n >= 3"
            )));
        }
        if compactification == Compactification::H {
            if d != 3 {
                return Err(Error::invalid(
                    "the Hilbert compactification is only computed for d = 3",
                ));
            }
            if self.normalized().k == 1 && n == 3 {
                return Err(Error::invalid(
                    "H(Gr(1,3),3) is not covered: in P^2 every cubic is planar, so the \
                     planar locus is all of S and the blow-up degenerates",
                ));
            }
        }
        Ok(())
    }

    /// The same key with `k` replaced by `min(k, n-k)` (`Gr(k,n) ≅ Gr(n-k,n)`).
    pub fn normalized(&self) -> Self {
        ModuliKey {
            k: self.k.min(self.n - self.k),
            ..*self
        }
    }

    pub fn dual(&self) -> Self {
        ModuliKey {
            k: self.n - self.k,
            ..*self
        }
    }

    pub fn dim_expected(&self) -> usize {
        dim_expected(self.k, self.n, self.d)
    }
}

impl fmt::Display for ModuliKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}(Gr({},{}),{})",
            self.compactification, self.k, self.n, self.d
        )
    }
}

/// `k(n-k) + d·n - 3`.
pub fn dim_expected(k: i64, n: i64, d: i64) -> usize {
    usize::try_from(k * (n - k) + d * n - 3).unwrap_or(0)
}

fn check_basic(what: &str, k: i64, n: i64) -> Result<()> {
    if 1 <= k && k < n && n >= 3 {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "{what} needs 1 <= k <= n-1 and n >= 3, got Gr({k},{n})"
        )))
    }
}

fn finish(p: IntPoly, what: String, expected_dim: usize) -> Result<PoincarePoly> {
    let p = PoincarePoly::new(p, &what)?;
    if p.dim() != Some(expected_dim) {
        return Err(Error::DegreeMismatch {
            what,
            expected: expected_dim,
            found: p.dim().map_or_else(|| "-inf".to_owned(), |d| d.to_string()),
        });
    }
    Ok(p)
}

/// Evaluates a validated key on its normalized form.
pub fn evaluate(key: &ModuliKey, mode: Mode) -> Result<PoincarePoly> {
    key.validate()?;
    let ModuliKey {
        k,
        n,
        d,
        compactification,
    } = key.normalized();
    match (compactification, d) {
        (Compactification::M, _) => martin_m(k, n, d),
        (Compactification::S, 2) => s2(k, n, mode),
        (Compactification::S, 3) => s3(k, n, mode),
        (Compactification::H, 3) => h3(k, n, mode),
        _ => unreachable!("rejected by validate"),
    }
}

/// The surgery chain for a validated key, if it has one (`M` does not).
pub fn pipeline_for(key: &ModuliKey) -> Result<Option<Pipeline>> {
    key.validate()?;
    let ModuliKey {
        k,
        n,
        d,
        compactification,
    } = key.normalized();
    match (compactification, d) {
        (Compactification::M, _) => Ok(None),
        (Compactification::S, 2) => s2_pipeline(k, n).map(Some),
        (Compactification::S, 3) => s3_pipeline(k, n).map(Some),
        (Compactification::H, 3) => h3_pipeline(k, n).map(Some),
        _ => unreachable!("rejected by validate"),
    }
}

fn run(p: Pipeline, what: String, expected_dim: usize) -> Result<PoincarePoly> {
    let PipelineRun { result, .. } = p.run()?;
    finish(result.into_poly(), what, expected_dim)
}

// ---- conics ----------------------------------------------------------------

/// Simpson compactification of conics in `Gr(k,n)`.
pub fn s2(k: i64, n: i64, mode: Mode) -> Result<PoincarePoly> {
    check_basic("S(Gr,2)", k, n)?;
    let what = format!("S(Gr({k},{n}),2)");
    let dim = dim_expected(k, n, 2);
    match mode {
        Mode::Closed => finish(s2_closed(k, n)?, what, dim),
        Mode::Pipeline => run(s2_pipeline(k, n)?, what, dim),
    }
}

fn s2_closed(k: i64, n: i64) -> Result<IntPoly> {
    let q = IntPoly::q_pow;
    let one = IntPoly::one;
    let (ku, nu) = (k as usize, n as usize);
    let bracket = (one() + q(nu)) * (one() + q(3)) - q(1) * (one() + q(1)) * (q(ku) + q(nu - ku))
        + IntPoly::one_minus_q_pow(2) * (q(3) - q(nu - 2));
    let mut num = vec![bracket];
    num.extend(RatExpr::q_product(n - k, n, |i| i)?);
    let mut den = vec![
        IntPoly::one_minus_q_pow(1).pow(2),
        IntPoly::one_minus_q_pow(2).pow(2),
    ];
    den.extend(RatExpr::q_product(1, k - 1, |i| i)?);
    RatExpr::from_factors(num, den)?.to_poly()
}

/// Blow up `M` along the `M(P^1,2)`-bundle over `F_1` (normal fiber
/// `P^{n-3}`), then blow down the exceptional divisor onto the
/// `P^{n-3}`-bundle over `F_1` in `S` (fiber `P^2`).
pub fn s2_pipeline(k: i64, n: i64) -> Result<Pipeline> {
    check_basic("S(Gr,2)", k, n)?;
    let f1 = f1_gr(k, n)?;
    let t = (n - 2) as usize;
    Pipeline::new(martin_m(k, n, 2)?)
        .blowup("Γ¹(X)", bundle_total(&f1, &mbar_p1(2)?), t)?
        .blowdown(
            "Γ¹₂(X)",
            bundle_total(&f1, &projective(t as u32 - 1)),
            projective(2),
        )
}

// ---- twisted cubics --------------------------------------------------------

/// Simpson compactification of twisted cubics in `Gr(k,n)`.
pub fn s3(k: i64, n: i64, mode: Mode) -> Result<PoincarePoly> {
    check_basic("S(Gr,3)", k, n)?;
    let what = format!("S(Gr({k},{n}),3)");
    let dim = dim_expected(k, n, 3);
    match mode {
        Mode::Closed => finish(s3_closed(k, n)?, what, dim),
        Mode::Pipeline => run(s3_pipeline(k, n)?, what, dim),
    }
}

/// `P(P^{e-1}) - 1` as `(1 - q^e)/(1 - q) - 1`.
fn reduced_ratio(e: i64) -> Result<RatExpr> {
    Ok(geometric_ratio(e)?.sub(RatExpr::poly(IntPoly::one())))
}

fn s3_closed(k: i64, n: i64) -> Result<IntPoly> {
    let g = geometric_ratio;
    let poly = |c: &[i64]| RatExpr::poly(IntPoly::from_i64s(c));
    let one = || RatExpr::poly(IntPoly::one());
    let mbar3 = || poly(&[1, 1, 2, 1, 1]);
    let mbar2 = || poly(&[1, 1, 1]);
    let lines_through_point = RatExpr::from_factors(
        vec![
            IntPoly::one_minus_q_pow((n - k) as usize),
            IntPoly::one_minus_q_pow(k as usize),
        ],
        vec![IntPoly::one_minus_q_pow(1).pow(2)],
    )?;
    // ev^{-1}(x) + P^{n-3} - 1
    let diag = || -> Result<RatExpr> { Ok(lines_through_point.clone().add(g(n - 2)?).sub(one())) };

    let mut brace = martin_cubic_bracket(k, n)?;
    brace = brace.add(mbar3().mul(reduced_ratio(2 * n - 4)?));
    brace = brace.add(g(2)?.mul(diag()?).mul(mbar2()).mul(reduced_ratio(n - 1)?));
    let two_lines = poly(&[1, 1])
        .mul(mbar3())
        .add(poly(&[0, 1]).mul(poly(&[1, 1])).mul(mbar2()));
    brace = brace.add(g(n - 2)?.mul(two_lines).mul(reduced_ratio(n - 2)?));
    let inner = g(n - 1)?
        .mul(diag()?)
        .add(g(2)?.mul(g(n - 2)?).mul(reduced_ratio(n - 2)?));
    brace = brace.sub(g(2)?.mul(inner).mul(reduced_ratio(3)?));
    brace = brace.sub(g(2)?.mul(g(n - 2)?).mul(g(n - 2)?).mul(reduced_ratio(5)?));
    let gr2 = RatExpr::new(
        IntPoly::one_minus_q_pow((n - 3) as usize),
        IntPoly::one_minus_q_pow(2),
    )?;
    brace = brace.sub(g(n - 2)?.mul(gr2).mul(reduced_ratio(8)?));

    let lines = RatExpr::from_factors(
        RatExpr::q_product(1, k + 1, |i| n - i + 1)?,
        RatExpr::q_product(1, k + 1, |i| i)?,
    )?
    .mul(RatExpr::from_factors(
        RatExpr::q_product(1, k - 1, |i| k - i + 2)?,
        RatExpr::q_product(1, k - 1, |i| i)?,
    )?);
    brace.mul(lines).to_poly()
}

/// `bl_Δ(F × F)` for `F = ev^{-1}(x)`: the diagonal has codimension
/// `dim F = n - 2`.
fn diagonal_blowup(k: i64, n: i64) -> Result<PoincarePoly> {
    let fx = fx_gr(k, n)?;
    blowup_apply(&bundle_total(&fx, &fx), &fx, (n - 2) as usize)
}

/// Three blow-ups of `M` (along the loci of maps onto a line, onto a pair
/// of lines, and the triple-line stratum) followed by three blow-downs onto
/// the corresponding loci of `S`.
pub fn s3_pipeline(k: i64, n: i64) -> Result<Pipeline> {
    check_basic("S(Gr,3)", k, n)?;
    let x = grassmannian(k, n);
    let f1 = f1_gr(k, n)?;
    let fx = fx_gr(k, n)?;
    let p1 = projective(1);
    let t = (n - 2) as u32;
    let pt_minus = projective(t - 1); // P^{n-3}
    let pt = projective(t); // P^{n-2}
    let bl = diagonal_blowup(k, n)?;

    let line_pair_fiber = blowup_apply(
        &bundle_total(&p1, &mbar_p1(3)?),
        &bundle_total(&p1, &mbar_p1(2)?),
        2,
    )?;
    let planar_center = blowup_apply(
        &bundle_total(&bl, &pt),
        &bundle_total(&bundle_total(&p1, &fx), &pt_minus),
        t as usize,
    )?;

    Pipeline::new(martin_m(k, n, 3)?)
        .blowup("Γ¹₀", bundle_total(&f1, &mbar_p1(3)?), 2 * t as usize)?
        .blowup(
            "Γ²₁",
            bundle_total(&bundle_total(&x, &bl), &mbar_p1(2)?),
            t as usize + 1,
        )?
        .blowup(
            "Γ³₂",
            bundle_total(&bundle_total(&f1, &pt_minus), &line_pair_fiber),
            t as usize,
        )?
        .blowdown(
            "Γ²₃",
            bundle_total(&x, &planar_center),
            weighted_projective(&[1, 2, 2])?,
        )?
        .blowdown(
            "Γ³₄",
            bundle_total(&bundle_total(&f1, &bundle_total(&p1, &pt_minus)), &pt_minus),
            weighted_projective(&[1, 2, 2, 3, 3])?,
        )?
        .blowdown(
            "Γ¹₅",
            bundle_total(&f1, &grassmannian(2, n - 2)),
            projective(7),
        )
}

/// Hilbert compactification of twisted cubics in `Gr(k,n)`: the blow-up of
/// `S` along the locus of planar sheaves, an `S(P^2,3)`-bundle over the
/// Fano scheme of planes. Each of the two plane families contributes only
/// when nonempty.
pub fn h3(k: i64, n: i64, mode: Mode) -> Result<PoincarePoly> {
    check_plane_case(k, n)?;
    let what = format!("H(Gr({k},{n}),3)");
    let dim = dim_expected(k, n, 3);
    match mode {
        Mode::Closed => finish(h3_closed(k, n)?, what, dim),
        Mode::Pipeline => run(h3_pipeline(k, n)?, what, dim),
    }
}

fn check_plane_case(k: i64, n: i64) -> Result<()> {
    check_basic("H(Gr,3)", k, n)?;
    if n == 3 {
        return Err(Error::invalid(
            "H(Gr(1,3),3) is not covered: in P^2 every cubic is planar, so the planar \
             locus is all of S and the blow-up degenerates",
        ));
    }
    Ok(())
}

fn h3_closed(k: i64, n: i64) -> Result<IntPoly> {
    let s = RatExpr::poly(s3_closed(k, n)?);
    let plane_cubics = || RatExpr::poly(IntPoly::from_i64s(&S_PLANE_CUBICS));
    let mut total = s;
    if k >= 2 {
        let family = RatExpr::from_factors(
            RatExpr::q_product(1, k + 1, |i| n - i + 1)?,
            RatExpr::q_product(1, k + 1, |i| i)?,
        )?
        .mul(RatExpr::from_factors(
            RatExpr::q_product(1, k - 2, |i| k - i + 2)?,
            RatExpr::q_product(1, k - 2, |i| i)?,
        )?);
        total = total.add(
            plane_cubics()
                .mul(family)
                .mul(reduced_ratio(2 * n - k - 4)?),
        );
    }
    if n >= k + 2 {
        let family = RatExpr::from_factors(
            RatExpr::q_product(1, k + 2, |i| n - i + 1)?,
            RatExpr::q_product(1, k + 2, |i| i)?,
        )?
        .mul(RatExpr::from_factors(
            RatExpr::q_product(1, k - 1, |i| k - i + 3)?,
            RatExpr::q_product(1, k - 1, |i| i)?,
        )?);
        total = total.add(plane_cubics().mul(family).mul(reduced_ratio(n + k - 4)?));
    }
    total.to_poly()
}

/// The cubic Simpson chain followed by the blow-up along each nonempty
/// component of the planar locus.
pub fn h3_pipeline(k: i64, n: i64) -> Result<Pipeline> {
    check_plane_case(k, n)?;
    let plane_cubics = s3(1, 3, Mode::Pipeline)?;
    let mut p = s3_pipeline(k, n)?;
    if k >= 2 {
        let planes = bundle_total(&grassmannian(k + 1, n), &grassmannian(k - 2, k + 1));
        p = p.blowup(
            "Δ(X)ᴬ",
            bundle_total(&planes, &plane_cubics),
            (2 * n - k - 4) as usize,
        )?;
    }
    if n >= k + 2 {
        let planes = bundle_total(&grassmannian(k + 2, n), &grassmannian(k - 1, k + 2));
        p = p.blowup(
            "Δ(X)ᴮ",
            bundle_total(&planes, &plane_cubics),
            (n + k - 4) as usize,
        )?;
    }
    Ok(p)
}

// ---- verification ----------------------------------------------------------

/// First coefficient where the closed and pipeline results disagree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoeffDiff {
    pub degree: usize,
    pub closed: BigInt,
    pub pipeline: BigInt,
}

#[derive(Clone, Debug)]
pub struct PairReport {
    pub key: ModuliKey,
    pub closed: Option<PoincarePoly>,
    /// `None` when the key has no surgery chain (`M`).
    pub modes_agree: Option<bool>,
    pub degree_ok: bool,
    pub palindromic: bool,
    pub nonnegative: bool,
    pub constant_one: bool,
    pub euler: Option<BigInt>,
    pub first_difference: Option<CoeffDiff>,
    pub error: Option<String>,
}

impl PairReport {
    pub fn passed(&self) -> bool {
        self.error.is_none()
            && self.modes_agree != Some(false)
            && self.degree_ok
            && self.palindromic
            && self.nonnegative
            && self.constant_one
    }
}

fn first_difference(a: &IntPoly, b: &IntPoly) -> Option<CoeffDiff> {
    let len = a.coeffs().len().max(b.coeffs().len());
    (0..len).find_map(|j| {
        let (x, y) = (a.coeff(j), b.coeff(j));
        (x != y).then_some(CoeffDiff {
            degree: j,
            closed: x,
            pipeline: y,
        })
    })
}

/// Runs both modes (where available) on the key as given, without
/// normalizing `k`, and records every structural check.
pub fn verify_pair(key: &ModuliKey) -> PairReport {
    let mut report = PairReport {
        key: *key,
        closed: None,
        modes_agree: None,
        degree_ok: false,
        palindromic: false,
        nonnegative: false,
        constant_one: false,
        euler: None,
        first_difference: None,
        error: None,
    };
    let closed = match raw(key, Mode::Closed) {
        Ok(p) => p,
        Err(e) => {
            report.error = Some(e.to_string());
            return report;
        }
    };
    report.degree_ok = closed.dim() == Some(key.dim_expected());
    report.palindromic = closed.is_palindromic();
    report.nonnegative = closed.poly().first_negative().is_none();
    report.constant_one = closed.components() == BigInt::from(1);
    report.euler = Some(closed.euler());
    if key.compactification != Compactification::M {
        match raw(key, Mode::Pipeline) {
            Ok(piped) => {
                report.first_difference = first_difference(closed.poly(), piped.poly());
                report.modes_agree = Some(report.first_difference.is_none());
            }
            Err(e) => {
                report.modes_agree = Some(false);
                report.error = Some(format!("pipeline: {e}"));
            }
        }
    }
    report.closed = Some(closed);
    report
}

/// Dispatch on the key exactly as given (no duality normalization).
fn raw(key: &ModuliKey, mode: Mode) -> Result<PoincarePoly> {
    let ModuliKey {
        k,
        n,
        d,
        compactification,
    } = *key;
    match (compactification, d) {
        (Compactification::M, _) => martin_m(k, n, d),
        (Compactification::S, 2) => s2(k, n, mode),
        (Compactification::S, 3) => s3(k, n, mode),
        (Compactification::H, 3) => h3(k, n, mode),
        (c, d) => Err(Error::invalid(format!("no formula for {c} in degree {d}"))),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    Duality,
    Pipeline,
    Special,
    Symmetry,
}

impl Suite {
    pub const ALL: [Suite; 4] = [
        Suite::Duality,
        Suite::Pipeline,
        Suite::Special,
        Suite::Symmetry,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Suite::Duality => "duality",
            Suite::Pipeline => "pipeline",
            Suite::Special => "special",
            Suite::Symmetry => "symmetry",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.as_str() == s)
            .ok_or_else(|| Error::invalid(format!("unknown suite `{s}`")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub suite: Suite,
    pub subject: String,
    pub passed: bool,
    pub detail: Option<String>,
}

#[derive(Clone, Debug, Default)]
pub struct SuiteReport {
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> usize {
        self.checks.iter().filter(|c| c.passed).count()
    }

    pub fn failed(&self) -> usize {
        self.checks.len() - self.passed()
    }

    pub fn count(&self, suite: Suite) -> usize {
        self.checks.iter().filter(|c| c.suite == suite).count()
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// A rectangular-ish sweep of `(k, n)`, expanded into every valid key.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grid {
    pub k: (i64, i64),
    /// Lower bound for `n` is `k + n_offset` when `n_from_k` is set.
    pub n_lo: i64,
    pub n_from_k: bool,
    pub n_hi: i64,
}

impl Default for Grid {
    /// `k = 1..4, n = k+1..10`.
    fn default() -> Self {
        Grid {
            k: (1, 4),
            n_lo: 1,
            n_from_k: true,
            n_hi: 10,
        }
    }
}

impl Grid {
    pub fn points(&self) -> Vec<(i64, i64)> {
        let mut out = Vec::new();
        for k in self.k.0..=self.k.1 {
            let lo = if self.n_from_k {
                k + self.n_lo
            } else {
                self.n_lo
            };
            for n in lo..=self.n_hi {
                out.push((k, n));
            }
        }
        out
    }

    /// Every key passing the domain guard, in `(k, n, d, compactification)` order.
    pub fn keys(&self) -> Vec<ModuliKey> {
        use Compactification::*;
        let mut out = Vec::new();
        for (k, n) in self.points() {
            for (d, c) in [(2, M), (2, S), (3, M), (3, S), (3, H)] {
                if let Ok(key) = ModuliKey::new(k, n, d, c) {
                    out.push(key);
                }
            }
        }
        out
    }
}

impl FromStr for Grid {
    type Err = Error;

    /// Parses `k=A..B,n=C..D`, where `C` may be `k+j`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::invalid(format!("bad grid `{s}`; expected e.g. `k=1..4,n=k+1..10`"));
        let mut k = None;
        let mut n = None;
        for part in s.split(',') {
            let (name, range) = part.trim().split_once('=').ok_or_else(bad)?;
            let (lo, hi) = range.split_once("..").ok_or_else(bad)?;
            let hi: i64 = hi.trim().parse().map_err(|_| bad())?;
            match name.trim() {
                "k" => k = Some((lo.trim().parse().map_err(|_| bad())?, hi)),
                "n" => {
                    let lo = lo.trim();
                    n = Some(match lo.strip_prefix('k') {
                        Some("") => (0, true, hi),
                        Some(off) => {
                            let off = off.strip_prefix('+').ok_or_else(bad)?;
                            (off.trim().parse().map_err(|_| bad())?, true, hi)
                        }
                        None => (lo.parse().map_err(|_| bad())?, false, hi),
                    })
                }
                _ => return Err(bad()),
            }
        }
        let (k, (n_lo, n_from_k, n_hi)) = (k.ok_or_else(bad)?, n.ok_or_else(bad)?);
        Ok(Grid {
            k,
            n_lo,
            n_from_k,
            n_hi,
        })
    }
}

fn check(suite: Suite, subject: String, result: std::result::Result<(), String>) -> Check {
    match result {
        Ok(()) => Check {
            suite,
            subject,
            passed: true,
            detail: None,
        },
        Err(detail) => Check {
            suite,
            subject,
            passed: false,
            detail: Some(detail),
        },
    }
}

fn duality_check(key: &ModuliKey) -> Check {
    let r = verify_pair(key);
    let result = if let Some(e) = &r.error {
        Err(e.clone())
    } else if !r.degree_ok {
        Err(format!(
            "degree {:?}, expected {}",
            r.closed.as_ref().and_then(PoincarePoly::dim),
            key.dim_expected()
        ))
    } else if !r.palindromic {
        Err("not palindromic".into())
    } else if !r.nonnegative {
        Err("negative coefficient".into())
    } else if !r.constant_one {
        Err("constant term is not 1".into())
    } else {
        Ok(())
    };
    check(Suite::Duality, key.to_string(), result)
}

fn pipeline_check(key: &ModuliKey) -> Check {
    let r = verify_pair(key);
    let result = match (&r.error, &r.first_difference) {
        (Some(e), _) => Err(e.clone()),
        (None, Some(d)) => Err(format!(
            "q^{}: closed {} vs pipeline {}",
            d.degree, d.closed, d.pipeline
        )),
        (None, None) => Ok(()),
    };
    check(Suite::Pipeline, key.to_string(), result)
}

fn symmetry_check(key: &ModuliKey) -> Check {
    let dual = key.dual();
    let modes: &[Mode] = if key.compactification == Compactification::M {
        &[Mode::Closed]
    } else {
        &[Mode::Closed, Mode::Pipeline]
    };
    let result = modes.iter().try_for_each(|&mode| {
        let a = raw(key, mode).map_err(|e| e.to_string())?;
        let b = raw(&dual, mode).map_err(|e| format!("{dual}: {e}"))?;
        if a == b {
            Ok(())
        } else {
            Err(format!("{mode:?}: {a} vs {dual}: {b}"))
        }
    });
    check(Suite::Symmetry, format!("{key} vs k -> n-k"), result)
}

fn special_checks(grid: &Grid) -> Vec<Check> {
    let points = grid.points();
    if points.is_empty() {
        return Vec::new();
    }
    let mut ns: Vec<i64> = points.iter().map(|&(_, n)| n).filter(|&n| n >= 4).collect();
    ns.sort_unstable();
    ns.dedup();

    let mut out = Vec::new();
    for n in ns {
        let result = s2(1, n, Mode::Closed)
            .map_err(|e| e.to_string())
            .and_then(|s| {
                let conics = bundle_total(&grassmannian(3, n), &projective(5));
                (s == conics)
                    .then_some(())
                    .ok_or_else(|| format!("{s} != {conics}"))
            });
        out.push(check(
            Suite::Special,
            format!("S(Gr(1,{n}),2) = P^5-bundle over Gr(3,{n})"),
            result,
        ));
    }
    let result = (|| {
        let (h, s) = (h3(1, 4, Mode::Closed)?, s3(1, 4, Mode::Closed)?);
        Ok::<_, Error>((h == s).then_some(()).ok_or_else(|| format!("{h} != {s}")))
    })()
    .unwrap_or_else(|e| Err(e.to_string()));
    out.push(check(Suite::Special, "H(P^3,3) = S(P^3,3)".into(), result));

    let printed = IntPoly::from_i64s(&S_PLANE_CUBICS);
    let result = [Mode::Closed, Mode::Pipeline].iter().try_for_each(|&mode| {
        let s = s3(1, 3, mode).map_err(|e| e.to_string())?;
        if s.poly() == &printed {
            Ok(())
        } else {
            Err(format!("{mode:?}: {s}"))
        }
    });
    out.push(check(
        Suite::Special,
        "S(P^2,3) matches the tabulated polynomial".into(),
        result,
    ));
    out
}

/// Runs the selected suites over every valid key of the grid. Keys are
/// checked in parallel; the report order is deterministic.
pub fn verify_suite(grid: &Grid, suites: &[Suite]) -> SuiteReport {
    let keys = grid.keys();
    let mut checks = Vec::new();
    let mut suites = suites.to_vec();
    suites.sort_unstable();
    suites.dedup();
    for suite in suites {
        match suite {
            Suite::Duality => checks.extend(keys.par_iter().map(duality_check).collect::<Vec<_>>()),
            Suite::Pipeline => checks.extend(
                keys.par_iter()
                    .filter(|k| k.compactification != Compactification::M)
                    .map(pipeline_check)
                    .collect::<Vec<_>>(),
            ),
            Suite::Symmetry => {
                checks.extend(keys.par_iter().map(symmetry_check).collect::<Vec<_>>())
            }
            Suite::Special => checks.extend(special_checks(grid)),
        }
    }
    SuiteReport { checks }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Compactification::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    fn both(f: fn(i64, i64, Mode) -> Result<PoincarePoly>, k: i64, n: i64) -> PoincarePoly {
        let a = f(k, n, Mode::Closed).unwrap();
        let b = f(k, n, Mode::Pipeline).unwrap();
        assert_eq!(a, b, "closed vs pipeline at Gr({k},{n})");
        a
    }

    #[test]
    fn dims() {
        assert_eq!(dim_expected(1, 4, 3), 12);
        assert_eq!(dim_expected(2, 4, 2), 9);
        assert_eq!(dim_expected(1, 3, 3), 8);
    }

    #[test]
    fn key_guard() {
        assert!(ModuliKey::new(1, 3, 3, S).is_ok());
        assert!(ModuliKey::new(1, 3, 3, M).is_ok());
        assert!(ModuliKey::new(1, 3, 3, H).is_err());
        assert!(ModuliKey::new(2, 3, 3, H).is_err());
        assert!(ModuliKey::new(1, 4, 3, H).is_ok());
        assert!(ModuliKey::new(1, 2, 2, S).is_err());
        assert!(ModuliKey::new(0, 4, 2, S).is_err());
        assert!(ModuliKey::new(4, 4, 2, S).is_err());
        assert!(ModuliKey::new(1, 4, 4, S).is_err());
        assert!(ModuliKey::new(1, 4, 2, H).is_err());
        let msg = ModuliKey::new(1, 3, 3, H).unwrap_err().to_string();
        assert!(msg.contains("planar"), "{msg}");
        assert_eq!(ModuliKey::new(3, 5, 2, S).unwrap().normalized().k, 2);
    }

    #[test]
    fn s2_examples() {
        assert_eq!(both(s2, 1, 3), projective(5));
        assert_eq!(both(s2, 1, 4).poly(), &p(&[1, 2, 3, 4, 4, 4, 3, 2, 1]));
        let g24 = both(s2, 2, 4);
        assert_eq!(g24.dim(), Some(9));
        assert!(g24.is_palindromic());
    }

    #[test]
    fn s2_pipeline_matches_hand_assembled_chain() {
        // net correction: F1 · (P(P^{n-3}) - P(P^2))
        let m = martin_m(1, 4, 2).unwrap();
        let f1 = f1_gr(1, 4).unwrap();
        let expect = m.poly() + f1.poly() * (projective(1).poly() - projective(2).poly());
        assert_eq!(s2(1, 4, Mode::Pipeline).unwrap().poly(), &expect);
    }

    #[test]
    fn s3_examples() {
        assert_eq!(both(s3, 1, 3).poly(), &p(&S_PLANE_CUBICS));
        let s = both(s3, 1, 4);
        assert_eq!(s.dim(), Some(12));
        assert!(s.is_palindromic());
        assert_eq!(both(s3, 2, 4), s3(2, 4, Mode::Closed).unwrap());
        assert_eq!(both(s3, 1, 5), both(s3, 4, 5));
    }

    #[test]
    fn h3_examples() {
        assert_eq!(both(h3, 1, 4), both(s3, 1, 4));
        let correction = grassmannian(3, 5).poly() * p(&S_PLANE_CUBICS) * p(&[0, 1]);
        assert_eq!(both(h3, 1, 5).poly(), &(both(s3, 1, 5).poly() + correction));
        // both plane families of the quadric Gr(2,4), each with a P^1 fiber
        let fam_a = grassmannian(3, 4).times(&grassmannian(0, 3));
        let fam_b = grassmannian(4, 4).times(&grassmannian(1, 4));
        let correction = (fam_a.poly() + fam_b.poly()) * p(&S_PLANE_CUBICS) * p(&[0, 1]);
        assert_eq!(both(h3, 2, 4).poly(), &(both(s3, 2, 4).poly() + correction));
        assert!(h3(1, 3, Mode::Closed).is_err());
        assert!(h3(2, 3, Mode::Pipeline).is_err());
    }

    #[test]
    fn pipeline_traces_stay_nonnegative() {
        for (k, n) in Grid::default().points() {
            for key in [(2, S), (3, S), (3, H)] {
                let Ok(key) = ModuliKey::new(k, n, key.0, key.1) else {
                    continue;
                };
                let run = pipeline_for(&key).unwrap().unwrap().run().unwrap();
                for rec in &run.trace {
                    assert!(
                        rec.cumulative.first_negative().is_none(),
                        "{key} after {}: {}",
                        rec.label,
                        rec.cumulative
                    );
                }
            }
        }
    }

    #[test]
    fn euler_difference_consistent() {
        for (k, n) in Grid::default().points() {
            if ModuliKey::new(k, n, 3, S).is_err() {
                continue;
            }
            let run = s3_pipeline(k, n).unwrap().run().unwrap();
            let from_trace: BigInt = run.trace.iter().map(|r| r.correction.euler()).sum();
            let closed = s3(k, n, Mode::Closed).unwrap().euler();
            let m = martin_m(k, n, 3).unwrap().euler();
            assert_eq!(from_trace, closed - m);
        }
    }

    #[test]
    fn verify_pair_reports() {
        let r = verify_pair(&ModuliKey::new(2, 5, 3, S).unwrap());
        assert!(r.passed(), "{r:?}");
        let r = verify_pair(&ModuliKey::new(1, 4, 2, S).unwrap());
        assert!(r.passed());
        assert_eq!(r.euler, Some(BigInt::from(24)));
        assert_eq!(r.modes_agree, Some(true));
        let r = verify_pair(&ModuliKey::new(1, 4, 3, M).unwrap());
        assert_eq!(r.modes_agree, None);
        assert!(r.passed());

        // guard bypassed: the failure lands in the report
        let bogus = ModuliKey {
            k: 1,
            n: 2,
            d: 2,
            compactification: S,
        };
        let r = verify_pair(&bogus);
        assert!(!r.passed());
        assert!(r.error.is_some());
    }

    #[test]
    fn grid_parsing() {
        let g: Grid = "k=1..4,n=k+1..10".parse().unwrap();
        assert_eq!(g, Grid::default());
        let g: Grid = "k=1..1,n=4..4".parse().unwrap();
        assert_eq!(g.points(), vec![(1, 4)]);
        assert_eq!(
            g.keys().iter().filter(|k| k.compactification != M).count(),
            3
        );
        assert!("k=1..4".parse::<Grid>().is_err());
        assert!("k=1..4,n=q+1..3".parse::<Grid>().is_err());
    }

    #[test]
    fn suite_selection() {
        let grid: Grid = "k=1..1,n=4..4".parse().unwrap();
        let r = verify_suite(&grid, &[Suite::Special]);
        assert_eq!(r.count(Suite::Special), 3);
        assert_eq!(r.failed(), 0);
        let r = verify_suite(&grid, &[Suite::Pipeline]);
        assert_eq!(r.checks.len(), 3);
        let empty = Grid {
            k: (1, 0),
            ..Grid::default()
        };
        assert!(verify_suite(&empty, &Suite::ALL).checks.is_empty());
    }
}
