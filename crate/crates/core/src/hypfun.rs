//! Exact and floating evaluation of 1F1, the two-variable Humbert Ψ2 and its
//! three-variable extension, plus the contiguous differential relations of 1F1.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{factorial, pochhammer, ExactScalar};
use crate::series::{Frame, MultiSeries, Var};

/// Default cap on the number of terms a floating-point sum may use.
pub const DEFAULT_TERM_CAP: usize = 10_000;

fn check_denominator(name: &str, v: &ExactScalar) -> Result<()> {
    if v.is_nonpositive_integer() {
        Err(Error::DegenerateParameter(format!(
            "{name} = {v} is zero or a negative integer"
        )))
    } else {
        Ok(())
    }
}

/// Parameters `(a; b)` of 1F1; `b` avoids 0, -1, -2, ...
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Params1F1 {
    a: ExactScalar,
    b: ExactScalar,
}

impl Params1F1 {
    pub fn new(a: ExactScalar, b: ExactScalar) -> Result<Self> {
        check_denominator("b", &b)?;
        Ok(Params1F1 { a, b })
    }

    pub fn a(&self) -> &ExactScalar {
        &self.a
    }

    pub fn b(&self) -> &ExactScalar {
        &self.b
    }

    pub fn shifted(&self, da: i64, db: i64) -> Result<Self> {
        Self::new(&self.a + da, &self.b + db)
    }
}

impl fmt::Display for Params1F1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a={}, b={}", self.a, self.b)
    }
}

/// Parameters `(a; b, c)` of Ψ2; `b` and `c` avoid 0, -1, -2, ...
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamsPsi2 {
    a: ExactScalar,
    b: ExactScalar,
    c: ExactScalar,
}

impl ParamsPsi2 {
    pub fn new(a: ExactScalar, b: ExactScalar, c: ExactScalar) -> Result<Self> {
        check_denominator("b", &b)?;
        check_denominator("c", &c)?;
        Ok(ParamsPsi2 { a, b, c })
    }

    pub fn a(&self) -> &ExactScalar {
        &self.a
    }

    pub fn b(&self) -> &ExactScalar {
        &self.b
    }

    pub fn c(&self) -> &ExactScalar {
        &self.c
    }

    pub fn shifted(&self, da: i64, db: i64, dc: i64) -> Result<Self> {
        Self::new(&self.a + da, &self.b + db, &self.c + dc)
    }
}

impl fmt::Display for ParamsPsi2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a={}, b={}, c={}", self.a, self.b, self.c)
    }
}

/// `(a)_s / (s! (b)_s)`.
pub fn f11_coeff(p: &Params1F1, s: u32) -> ExactScalar {
    pochhammer(&p.a, s) / (factorial(s) * pochhammer(&p.b, s))
}

/// Coefficients `(a)_s/(s!(b)_s)` for `s = 0..=order`, built by the term ratio.
fn f11_coeffs(a: &ExactScalar, b: &ExactScalar, order: u32) -> Vec<ExactScalar> {
    let mut out = Vec::with_capacity(order as usize + 1);
    let mut c = ExactScalar::one();
    out.push(c.clone());
    for s in 1..=order {
        let s1 = i64::from(s - 1);
        c = c * (a + s1) / ((b + s1) * i64::from(s));
        out.push(c.clone());
    }
    out
}

/// Partial sum `Σ_{s ≤ order} f11_coeff(s) x^s` with cap `x ≤ order`.
pub fn f11_series(p: &Params1F1, order: u32) -> MultiSeries {
    let frame = Frame::new(&[(Var::X, order)]);
    let coeffs = f11_coeffs(&p.a, &p.b, order);
    MultiSeries::from_terms(
        &frame,
        coeffs
            .into_iter()
            .enumerate()
            .map(|(s, c)| (vec![(Var::X, s as u32)], c))
            .collect::<Vec<_>>()
            .iter()
            .map(|(pw, c)| (pw.as_slice(), c.clone())),
    )
    .expect("frame contains x")
}

/// Exact partial sum of 1F1 at a rational point.
pub fn f11_eval_exact(p: &Params1F1, x: &ExactScalar, order: u32) -> ExactScalar {
    // Horner on the partial sum
    f11_coeffs(&p.a, &p.b, order)
        .into_iter()
        .rev()
        .fold(ExactScalar::zero(), |acc, c| acc * x + c)
}

/// Floating-point value together with the number of terms summed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FloatEval {
    pub value: f64,
    pub terms_used: usize,
}

/// Sums `term(0) + term(1) + ...` until two consecutive terms are below
/// `rel_tol · |partial sum|` and the index exceeds `min_index`.
pub fn sum_until_negligible(
    mut term: impl FnMut(usize) -> Result<f64>,
    rel_tol: f64,
    min_index: f64,
    term_cap: usize,
) -> Result<FloatEval> {
    let mut sum = 0.0;
    let mut quiet = 0;
    for s in 0..term_cap {
        let t = term(s)?;
        sum += t;
        if !sum.is_finite() {
            return Err(Error::NoConvergence(s + 1));
        }
        if t.abs() <= rel_tol * sum.abs() {
            quiet += 1;
        } else {
            quiet = 0;
        }
        if quiet >= 2 && (s as f64) > min_index {
            return Ok(FloatEval {
                value: sum,
                terms_used: s + 1,
            });
        }
    }
    Err(Error::NoConvergence(term_cap))
}

/// Floating 1F1 with raw parameters; the caller guarantees `b` is admissible.
pub fn f11_float(a: f64, b: f64, x: f64, rel_tol: f64, term_cap: usize) -> Result<FloatEval> {
    if x == 0.0 {
        return Ok(FloatEval {
            value: 1.0,
            terms_used: 1,
        });
    }
    let mut t = 1.0;
    sum_until_negligible(
        |s| {
            if s > 0 {
                let k = (s - 1) as f64;
                t *= (a + k) * x / ((b + k) * s as f64);
            }
            Ok(t)
        },
        rel_tol,
        x.abs() + a.abs(),
        term_cap,
    )
}

pub fn f11_eval_float(p: &Params1F1, x: f64, rel_tol: f64, term_cap: usize) -> Result<FloatEval> {
    if rel_tol <= 0.0 {
        return Err(Error::Config("rel_tol must be positive".into()));
    }
    f11_float(p.a.to_f64(), p.b.to_f64(), x, rel_tol, term_cap)
}

/// Ψ2 coefficient `(a)_{m+n} / (m! n! (b)_m (c)_n)`.
pub fn psi2_coeff(p: &ParamsPsi2, m: u32, n: u32) -> ExactScalar {
    pochhammer(&p.a, m + n)
        / (factorial(m) * factorial(n) * pochhammer(&p.b, m) * pochhammer(&p.c, n))
}

/// Truncated double series of Ψ2 in `(x, y)`.
pub fn psi2_series(p: &ParamsPsi2, mx: u32, my: u32) -> MultiSeries {
    let frame = Frame::new(&[(Var::X, mx), (Var::Y, my)]);
    let bx = f11_like(&p.b, mx);
    let cy = f11_like(&p.c, my);
    let mut terms = Vec::new();
    for m in 0..=mx {
        for n in 0..=my {
            let c = pochhammer(&p.a, m + n) * &bx[m as usize] * &cy[n as usize];
            terms.push((vec![(Var::X, m), (Var::Y, n)], c));
        }
    }
    MultiSeries::from_terms(&frame, terms.iter().map(|(pw, c)| (pw.as_slice(), c.clone())))
        .expect("frame contains x, y")
}

/// Truncated triple series `Σ (a)_{ℓ+m+n} x^m y^n z^ℓ / (ℓ! m! n! (b)_m (c)_n)`.
pub fn psi2_3var_series(p: &ParamsPsi2, mx: u32, my: u32, mz: u32) -> MultiSeries {
    let frame = Frame::new(&[(Var::X, mx), (Var::Y, my), (Var::Z, mz)]);
    let bx = f11_like(&p.b, mx);
    let cy = f11_like(&p.c, my);
    let lz: Vec<ExactScalar> = (0..=mz).map(|l| factorial(l).recip()).collect();
    let mut terms = Vec::new();
    for m in 0..=mx {
        for n in 0..=my {
            for l in 0..=mz {
                let c = pochhammer(&p.a, l + m + n) * &bx[m as usize] * &cy[n as usize] * &lz[l as usize];
                terms.push((vec![(Var::X, m), (Var::Y, n), (Var::Z, l)], c));
            }
        }
    }
    MultiSeries::from_terms(&frame, terms.iter().map(|(pw, c)| (pw.as_slice(), c.clone())))
        .expect("frame contains x, y, z")
}

/// `1 / (k! (b)_k)` for `k = 0..=order`.
fn f11_like(b: &ExactScalar, order: u32) -> Vec<ExactScalar> {
    (0..=order)
        .map(|k| (factorial(k) * pochhammer(b, k)).recip())
        .collect()
}

/// Exact partial double sum of Ψ2 at a rational point.
pub fn psi2_eval_exact(p: &ParamsPsi2, x: &ExactScalar, y: &ExactScalar, mx: u32, my: u32) -> ExactScalar {
    psi2_series(p, mx, my)
        .eval(&[(Var::X, x.clone()), (Var::Y, y.clone())])
        .expect("point covers x, y")
}

/// Floating Ψ2 via `Σ_n (a)_n y^n / (n! (c)_n) · 1F1(a+n; b; x)`.
pub fn psi2_float(a: f64, b: f64, c: f64, x: f64, y: f64, rel_tol: f64, term_cap: usize) -> Result<FloatEval> {
    let mut w = 1.0;
    let mut inner_terms = 0;
    let mut out = sum_until_negligible(
        |n| {
            if n > 0 {
                let k = (n - 1) as f64;
                w *= (a + k) * y / ((c + k) * n as f64);
            }
            if w == 0.0 {
                return Ok(0.0);
            }
            let inner = f11_float(a + n as f64, b, x, rel_tol, term_cap)?;
            inner_terms += inner.terms_used;
            Ok(w * inner.value)
        },
        rel_tol,
        y.abs() + a.abs(),
        term_cap,
    )?;
    out.terms_used += inner_terms;
    Ok(out)
}

pub fn psi2_eval_float(p: &ParamsPsi2, x: f64, y: f64, rel_tol: f64, term_cap: usize) -> Result<FloatEval> {
    psi2_float(p.a.to_f64(), p.b.to_f64(), p.c.to_f64(), x, y, rel_tol, term_cap)
}

/// Floating three-variable Ψ2 via `Σ_ℓ (a)_ℓ z^ℓ / ℓ! · Ψ2(a+ℓ; b, c; x, y)`.
#[allow(clippy::too_many_arguments)]
pub fn psi2_3var_float(
    a: f64,
    b: f64,
    c: f64,
    x: f64,
    y: f64,
    z: f64,
    rel_tol: f64,
    term_cap: usize,
) -> Result<FloatEval> {
    let mut w = 1.0;
    let mut inner_terms = 0;
    let mut out = sum_until_negligible(
        |l| {
            if l > 0 {
                let k = (l - 1) as f64;
                w *= (a + k) * z / l as f64;
            }
            if w == 0.0 {
                return Ok(0.0);
            }
            let inner = psi2_float(a + l as f64, b, c, x, y, rel_tol, term_cap)?;
            inner_terms += inner.terms_used;
            Ok(w * inner.value)
        },
        rel_tol,
        z.abs() + a.abs(),
        term_cap,
    )?;
    out.terms_used += inner_terms;
    Ok(out)
}

/// The five contiguous differential relations of 1F1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Recursion {
    /// `D F = (a/b) F(a+1; b+1)`
    #[serde(rename = "D-raise")]
    DRaise,
    /// `(D - 1) F = ((a-b)/b) F(a; b+1)`
    #[serde(rename = "Dminus1-raise-b")]
    DMinus1RaiseB,
    /// `(Θ + a) F = a F(a+1; b)`
    #[serde(rename = "Theta-raise-a")]
    ThetaRaiseA,
    /// `(Θ + b - 1) F = (b-1) F(a; b-1)`
    #[serde(rename = "Theta-lower-b")]
    ThetaLowerB,
    /// `(Θ + b - a - x) F = (b-a) F(a-1; b)`
    #[serde(rename = "lower-a")]
    LowerA,
}

impl Recursion {
    pub const ALL: [Recursion; 5] = [
        Recursion::DRaise,
        Recursion::DMinus1RaiseB,
        Recursion::ThetaRaiseA,
        Recursion::ThetaLowerB,
        Recursion::LowerA,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Recursion::DRaise => "D-raise",
            Recursion::DMinus1RaiseB => "Dminus1-raise-b",
            Recursion::ThetaRaiseA => "Theta-raise-a",
            Recursion::ThetaLowerB => "Theta-lower-b",
            Recursion::LowerA => "lower-a",
        }
    }

    pub fn formula(self) -> &'static str {
        match self {
            Recursion::DRaise => "D F(a;b) = (a/b) F(a+1;b+1)",
            Recursion::DMinus1RaiseB => "(D-1) F(a;b) = ((a-b)/b) F(a;b+1)",
            Recursion::ThetaRaiseA => "(Θ+a) F(a;b) = a F(a+1;b)",
            Recursion::ThetaLowerB => "(Θ+b-1) F(a;b) = (b-1) F(a;b-1)",
            Recursion::LowerA => "(Θ+b-a-x) F(a;b) = (b-a) F(a-1;b)",
        }
    }
}

impl fmt::Display for Recursion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Recursion {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Recursion::ALL
            .into_iter()
            .find(|r| r.id() == s)
            .ok_or_else(|| Error::UnknownId(s.to_string()))
    }
}

/// `LHS - RHS` of a contiguous relation, trusted (and truncated) to `x ≤ order-1`.
pub fn verify_recursion(rel: Recursion, p: &Params1F1, order: u32) -> Result<MultiSeries> {
    if order == 0 {
        return Err(Error::CapUnderflow("recursion check needs order ≥ 1".into()));
    }
    let (a, b) = (p.a(), p.b());
    let f = f11_series(p, order);
    let df = f.derivative(Var::X)?;
    let trusted = df.frame().clone();
    let fx = f.truncate(&trusted)?;
    let theta = df.mul_var_power(Var::X, 1)?;

    let (lhs, coeff, shifted) = match rel {
        Recursion::DRaise => (df, a / b, p.shifted(1, 1)?),
        Recursion::DMinus1RaiseB => (df.sub(&fx)?, (a - b) / b, p.shifted(0, 1)?),
        Recursion::ThetaRaiseA => (theta.add(&fx.scale(a))?, a.clone(), p.shifted(1, 0)?),
        Recursion::ThetaLowerB => {
            let shifted = p.shifted(0, -1)?;
            let bm1 = b - 1;
            (theta.add(&fx.scale(&bm1))?, bm1, shifted)
        }
        Recursion::LowerA => {
            let gap = b - a;
            let xf = fx.mul_var_power(Var::X, 1)?;
            (theta.add(&fx.scale(&gap))?.sub(&xf)?, gap, p.shifted(-1, 0)?)
        }
    };
    let rhs = f11_series(&shifted, order).truncate(&trusted)?.scale(&coeff);
    lhs.sub(&rhs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> ExactScalar {
        ExactScalar::new(n, d)
    }

    fn p11(a: ExactScalar, b: ExactScalar) -> Params1F1 {
        Params1F1::new(a, b).unwrap()
    }

    #[test]
    fn rejects_degenerate_denominators() {
        assert!(Params1F1::new(q(1, 2), q(0, 1)).is_err());
        assert!(Params1F1::new(q(1, 2), q(-3, 1)).is_err());
        assert!(Params1F1::new(q(1, 2), q(-3, 2)).is_ok());
        assert!(ParamsPsi2::new(q(1, 1), q(1, 1), q(-2, 1)).is_err());
    }

    #[test]
    fn coefficient_examples() {
        assert_eq!(f11_coeff(&p11(q(5, 7), q(4, 3)), 0), q(1, 1));
        assert_eq!(f11_coeff(&p11(q(1, 1), q(2, 1)), 2), q(1, 6));
        for s in 0..8 {
            assert_eq!(f11_coeff(&p11(q(1, 1), q(1, 1)), s), factorial(s).recip());
        }
    }

    #[test]
    fn series_examples() {
        assert_eq!(f11_series(&p11(q(3, 2), q(4, 3)), 0).to_string(), "1");
        assert_eq!(
            f11_series(&p11(q(1, 1), q(1, 1)), 3).to_string(),
            "1 + x + 1/2*x^2 + 1/6*x^3"
        );
        assert_eq!(
            f11_series(&p11(q(1, 1), q(2, 1)), 3).to_string(),
            "1 + 1/2*x + 1/6*x^2 + 1/24*x^3"
        );
    }

    #[test]
    fn series_coefficients_match_closed_form() {
        let p = p11(q(1, 2), q(4, 3));
        let s = f11_series(&p, 10);
        for k in 0..=10 {
            assert_eq!(s.coeff(&[(Var::X, k)]), f11_coeff(&p, k));
        }
    }

    #[test]
    fn exact_eval_examples() {
        let e = p11(q(1, 1), q(1, 1));
        assert_eq!(f11_eval_exact(&p11(q(1, 2), q(4, 3)), &q(0, 1), 9), q(1, 1));
        assert_eq!(f11_eval_exact(&e, &q(1, 1), 5), q(163, 60));
        assert_eq!(f11_eval_exact(&p11(q(2, 1), q(2, 1)), &q(1, 1), 5), q(163, 60));
    }

    #[test]
    fn float_eval_examples() {
        let e = p11(q(1, 1), q(1, 1));
        let r = f11_eval_float(&e, 1.0, 1e-14, DEFAULT_TERM_CAP).unwrap();
        assert!((r.value - std::f64::consts::E).abs() < 1e-13);
        let r = f11_eval_float(&e, 0.0, 1e-14, DEFAULT_TERM_CAP).unwrap();
        assert_eq!(r.value, 1.0);

        let p = p11(q(1, 2), q(4, 3));
        let exact = f11_eval_exact(&p, &q(1, 4), 30).to_f64();
        let r = f11_eval_float(&p, 0.25, 1e-15, DEFAULT_TERM_CAP).unwrap();
        assert!(((r.value - exact) / exact).abs() < 1e-12);
    }

    #[test]
    fn float_eval_reports_no_convergence() {
        let e = p11(q(1, 1), q(1, 1));
        assert_eq!(f11_eval_float(&e, 50.0, 1e-14, 10), Err(Error::NoConvergence(10)));
    }

    #[test]
    fn psi2_examples() {
        let p = ParamsPsi2::new(q(1, 2), q(4, 3), q(5, 7)).unwrap();
        assert_eq!(psi2_series(&p, 0, 0).to_string(), "1");
        let slice = psi2_series(&p, 5, 0);
        let f = f11_series(&p11(q(1, 2), q(4, 3)), 5);
        for k in 0..=5 {
            assert_eq!(slice.coeff(&[(Var::X, k)]), f.coeff(&[(Var::X, k)]));
        }
        let ones = ParamsPsi2::new(q(1, 1), q(1, 1), q(1, 1)).unwrap();
        assert_eq!(psi2_series(&ones, 1, 1).to_string(), "1 + x + y + 2*x*y");
    }

    #[test]
    fn psi2_3var_examples() {
        let p = ParamsPsi2::new(q(1, 2), q(4, 3), q(5, 7)).unwrap();
        assert_eq!(psi2_3var_series(&p, 0, 0, 0).to_string(), "1");
        let flat = psi2_3var_series(&p, 3, 2, 0);
        let two = psi2_series(&p, 3, 2);
        for m in 0..=3 {
            for n in 0..=2 {
                assert_eq!(
                    flat.coeff(&[(Var::X, m), (Var::Y, n)]),
                    two.coeff(&[(Var::X, m), (Var::Y, n)])
                );
            }
        }
        let ones = ParamsPsi2::new(q(1, 1), q(1, 1), q(1, 1)).unwrap();
        assert_eq!(psi2_3var_series(&ones, 1, 0, 1).to_string(), "1 + x + z + 2*x*z");
    }

    #[test]
    fn recursion_examples() {
        let p = p11(q(1, 2), q(4, 3));
        assert!(verify_recursion(Recursion::ThetaRaiseA, &p, 12).unwrap().is_zero());
        let e = p11(q(1, 1), q(1, 1));
        assert!(verify_recursion(Recursion::DRaise, &e, 8).unwrap().is_zero());
        let p = p11(q(3, 2), q(4, 3));
        assert!(verify_recursion(Recursion::LowerA, &p, 10).unwrap().is_zero());
    }

    #[test]
    fn recursion_residual_is_trusted_to_order_minus_one() {
        let p = p11(q(1, 2), q(4, 3));
        let r = verify_recursion(Recursion::DMinus1RaiseB, &p, 7).unwrap();
        assert_eq!(r.frame().cap(Var::X), Some(6));
    }

    #[test]
    fn recursion_degenerate_shift() {
        let p = p11(q(1, 2), q(1, 1));
        assert!(matches!(
            verify_recursion(Recursion::ThetaLowerB, &p, 6),
            Err(Error::DegenerateParameter(_))
        ));
        assert!(matches!(
            verify_recursion(Recursion::DRaise, &p, 0),
            Err(Error::CapUnderflow(_))
        ));
    }

    #[test]
    fn recursion_ids_round_trip() {
        for r in Recursion::ALL {
            assert_eq!(r.id().parse::<Recursion>().unwrap(), r);
        }
    }
}
