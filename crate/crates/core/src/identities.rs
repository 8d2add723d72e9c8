//! Generating relations and reduction formulas of the 1F1 and Ψ2 families,
//! each stored as data (as stated, plus corrected candidates where the
//! stated form is wrong) and verified coefficient-wise as a series in the
//! deformation parameter χ, or numerically at sample values of χ.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{factorial, pochhammer, ExactScalar};
use crate::hypfun::{
    f11_coeff, f11_eval_float, f11_float, f11_series, psi2_3var_float, psi2_coeff, psi2_eval_float, psi2_float,
    psi2_series, psi2_3var_series, sum_until_negligible, Params1F1, ParamsPsi2, DEFAULT_TERM_CAP,
};
use crate::liealg::{Family, Shift};
use crate::series::{geometric_substitute, Frame, MultiSeries, Var};

/// Relative tolerance used for every inner float sum.
pub const INNER_TOL: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IdentityId {
    F11RaiseA,
    F11RaiseB,
    F11LowerA,
    F11LowerB,
    F11Shift,
    Psi2Reduction,
    Psi2LowerB,
    Psi2LowerC,
    Psi2ShiftX,
    Psi2ShiftY,
}

impl IdentityId {
    pub const ALL: [IdentityId; 10] = [
        IdentityId::F11RaiseA,
        IdentityId::F11RaiseB,
        IdentityId::F11LowerA,
        IdentityId::F11LowerB,
        IdentityId::F11Shift,
        IdentityId::Psi2Reduction,
        IdentityId::Psi2LowerB,
        IdentityId::Psi2LowerC,
        IdentityId::Psi2ShiftX,
        IdentityId::Psi2ShiftY,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            IdentityId::F11RaiseA => "I-F11-RAISE-A",
            IdentityId::F11RaiseB => "I-F11-RAISE-B",
            IdentityId::F11LowerA => "I-F11-LOWER-A",
            IdentityId::F11LowerB => "I-F11-LOWER-B",
            IdentityId::F11Shift => "I-F11-SHIFT",
            IdentityId::Psi2Reduction => "I-PSI2-REDUCTION",
            IdentityId::Psi2LowerB => "I-PSI2-LOWER-B",
            IdentityId::Psi2LowerC => "I-PSI2-LOWER-C",
            IdentityId::Psi2ShiftX => "I-PSI2-SHIFT-X",
            IdentityId::Psi2ShiftY => "I-PSI2-SHIFT-Y",
        }
    }

    pub fn family(self) -> Family {
        match self {
            IdentityId::F11RaiseA
            | IdentityId::F11RaiseB
            | IdentityId::F11LowerA
            | IdentityId::F11LowerB
            | IdentityId::F11Shift => Family::F11,
            _ => Family::Psi2,
        }
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for IdentityId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        IdentityId::ALL
            .into_iter()
            .find(|i| i.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownId(s.to_string()))
    }
}

impl Serialize for IdentityId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for IdentityId {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    AsStated,
    CorrectedCandidate,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::AsStated => "as_stated",
            Variant::CorrectedCandidate => "corrected_candidate",
        })
    }
}

impl FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "as_stated" | "as-stated" => Ok(Variant::AsStated),
            "corrected_candidate" | "corrected-candidate" | "corrected" => Ok(Variant::CorrectedCandidate),
            other => Err(Error::UnknownId(other.to_string())),
        }
    }
}

/// Region of χ (and x) where both sides converge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Validity {
    Entire,
    UnitDisk,
    /// `|χ| < 1` and `|χ(1−x)| < 1`
    UnitDiskShifted,
}

impl Validity {
    pub fn contains(self, chi: f64, x: f64) -> bool {
        match self {
            Validity::Entire => chi.is_finite(),
            Validity::UnitDisk => chi.abs() < 1.0,
            Validity::UnitDiskShifted => chi.abs() < 1.0 && (chi * (1.0 - x)).abs() < 1.0,
        }
    }

    pub fn describe(self) -> &'static str {
        match self {
            Validity::Entire => "all χ",
            Validity::UnitDisk => "|χ| < 1",
            Validity::UnitDiskShifted => "|χ| < 1, |χ(1-x)| < 1",
        }
    }
}

/// Parameter point; `c` is only read by Ψ2 records.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamPoint {
    pub a: ExactScalar,
    pub b: ExactScalar,
    pub c: Option<ExactScalar>,
}

impl ParamPoint {
    pub fn new(a: ExactScalar, b: ExactScalar, c: Option<ExactScalar>) -> Self {
        ParamPoint { a, b, c }
    }

    /// The three points of the default suite.
    pub fn defaults() -> Vec<ParamPoint> {
        let r = ExactScalar::new;
        vec![
            ParamPoint::new(r(1, 2), r(4, 3), Some(r(5, 7))),
            ParamPoint::new(r(3, 2), r(7, 3), Some(r(11, 6))),
            ParamPoint::new(r(2, 5), r(9, 4), Some(r(5, 7))),
        ]
    }

    fn c(&self) -> Result<&ExactScalar> {
        self.c.as_ref().ok_or_else(|| Error::Config("parameter c is required for Ψ2 records".into()))
    }

    pub fn f11(&self, (da, db, _): Shift) -> Result<Params1F1> {
        Params1F1::new(&self.a + da, &self.b + db)
    }

    pub fn psi2(&self, (da, db, dc): Shift) -> Result<ParamsPsi2> {
        ParamsPsi2::new(&self.a + da, &self.b + db, self.c()? + dc)
    }

    /// The point as seen by a family: Ψ2 keeps `c`, 1F1 drops it.
    pub fn for_family(&self, family: Family) -> ParamPoint {
        match family {
            Family::F11 => ParamPoint::new(self.a.clone(), self.b.clone(), None),
            Family::Psi2 => self.clone(),
        }
    }
}

impl fmt::Display for ParamPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a={}, b={}", self.a, self.b)?;
        if let Some(c) = &self.c {
            write!(f, ", c={c}")?;
        }
        Ok(())
    }
}

/// χ-order `N` and inner order `M` (both x and y caps for Ψ2).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Orders {
    #[serde(rename = "N")]
    pub n: u32,
    #[serde(rename = "M")]
    pub m: u32,
}

impl Orders {
    pub fn new(n: u32, m: u32) -> Self {
        Orders { n, m }
    }

    pub fn default_for(family: Family) -> Self {
        match family {
            Family::F11 => Orders::new(6, 12),
            Family::Psi2 => Orders::new(4, 6),
        }
    }
}

/// Inputs of a formal builder.
pub struct FormalCtx<'a> {
    pub point: &'a ParamPoint,
    pub orders: Orders,
    pub frame: Frame,
}

impl FormalCtx<'_> {
    fn var(&self, v: Var) -> MultiSeries {
        MultiSeries::var(&self.frame, v).expect("frame variable")
    }

    fn one(&self) -> MultiSeries {
        MultiSeries::one(&self.frame)
    }

    fn chi(&self) -> MultiSeries {
        self.var(Var::Chi)
    }

    /// `1 + s·χ`
    fn one_plus(&self, s: i64) -> MultiSeries {
        self.one().add(&self.chi().scale(&ExactScalar::from_int(s))).unwrap()
    }

    fn f11_of(&self, arg: &MultiSeries) -> Result<MultiSeries> {
        let p = self.point.f11((0, 0, 0))?;
        arg.compose(|s| f11_coeff(&p, s))
    }

    fn psi2_of(&self, ax: &MultiSeries, ay: &MultiSeries) -> Result<MultiSeries> {
        let p = self.point.psi2((0, 0, 0))?;
        MultiSeries::compose2(ax, ay, |m, n| psi2_coeff(&p, m, n))
    }
}

/// Inputs of a float builder.
pub struct NumCtx<'a> {
    pub point: &'a ParamPoint,
    pub x: f64,
    pub y: f64,
    pub chi: f64,
    pub term_cap: usize,
}

impl NumCtx<'_> {
    fn a(&self) -> f64 {
        self.point.a.to_f64()
    }

    fn b(&self) -> f64 {
        self.point.b.to_f64()
    }

    fn c(&self) -> Result<f64> {
        Ok(self.point.c()?.to_f64())
    }

    fn f11(&self, x: f64) -> Result<f64> {
        Ok(f11_eval_float(&self.point.f11((0, 0, 0))?, x, INNER_TOL, self.term_cap)?.value)
    }

    fn psi2(&self, x: f64, y: f64) -> Result<f64> {
        Ok(psi2_eval_float(&self.point.psi2((0, 0, 0))?, x, y, INNER_TOL, self.term_cap)?.value)
    }
}

type FormalBuilder = fn(&FormalCtx) -> Result<MultiSeries>;
type FloatBuilder = fn(&NumCtx) -> Result<f64>;
type Coefficient = fn(&ParamPoint, u32) -> Result<ExactScalar>;

/// One side of an identity.
#[derive(Clone, Copy)]
pub enum Side {
    /// A closed expression in x (y) and χ.
    Closed { formal: FormalBuilder, float: FloatBuilder },
    /// `Σ_ℓ coefficient(ℓ) · Φ(params + shift(ℓ); x[, y]) · χ^ℓ`
    ChiSum { coefficient: Coefficient, shift: fn(u32) -> Shift },
}

impl fmt::Debug for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::Closed { .. } => f.write_str("Closed"),
            Side::ChiSum { .. } => f.write_str("ChiSum"),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct IdentityRecord {
    pub id: IdentityId,
    pub variant: Variant,
    /// Where the relation comes from, in words.
    pub anchor: &'static str,
    pub formula: &'static str,
    pub validity: Validity,
    pub lhs: Side,
    pub rhs: Side,
}

impl IdentityRecord {
    pub fn family(&self) -> Family {
        self.id.family()
    }
}

fn int(n: i64) -> ExactScalar {
    ExactScalar::from_int(n)
}

fn l64(l: u32) -> i64 {
    i64::from(l)
}

// -- closed sides, 1F1 ------------------------------------------------------

fn f11_raise_a_lhs(c: &FormalCtx) -> Result<MultiSeries> {
    let one_minus = c.one_plus(-1);
    let arg = geometric_substitute(Var::X, Var::Chi, &one_minus)?;
    c.f11_of(&arg)?.mul(&one_minus.pow_rational(&-&c.point.a)?)
}

fn f11_raise_a_lhs_f(c: &NumCtx) -> Result<f64> {
    Ok((1.0 - c.chi).powf(-c.a()) * c.f11(c.x / (1.0 - c.chi))?)
}

fn f11_scaled_lhs(c: &FormalCtx, exponent: &ExactScalar) -> Result<MultiSeries> {
    let one_plus = c.one_plus(1);
    let arg = c.var(Var::X).mul(&one_plus)?;
    c.f11_of(&arg)?.mul(&one_plus.pow_rational(exponent)?)
}

fn f11_raise_b_stated_lhs(c: &FormalCtx) -> Result<MultiSeries> {
    f11_scaled_lhs(c, &(&c.point.b - 1))
}

fn f11_raise_b_stated_lhs_f(c: &NumCtx) -> Result<f64> {
    Ok(c.f11(c.x * (1.0 + c.chi))? * (1.0 + c.chi).powf(c.b() - 1.0))
}

fn f11_raise_b_corrected_lhs(c: &FormalCtx) -> Result<MultiSeries> {
    let arg = c.var(Var::X).add(&c.chi())?;
    c.f11_of(&arg)?.mul(&c.chi().neg().exp()?)
}

fn f11_raise_b_corrected_lhs_f(c: &NumCtx) -> Result<f64> {
    Ok((-c.chi).exp() * c.f11(c.x + c.chi)?)
}

fn f11_lower_a_stated_lhs(c: &FormalCtx) -> Result<MultiSeries> {
    let (a, b) = (&c.point.a, &c.point.b);
    // 1 − χ(1 − x)
    let denom = c.one_plus(-1).add(&c.chi().mul(&c.var(Var::X))?)?;
    let arg = geometric_substitute(Var::X, Var::Chi, &denom)?;
    c.f11_of(&arg)?
        .mul(&c.one_plus(-1).pow_rational(&(a + b))?)?
        .mul(&denom.pow_rational(&-b)?)
}

fn f11_lower_a_stated_lhs_f(c: &NumCtx) -> Result<f64> {
    let denom = 1.0 - c.chi * (1.0 - c.x);
    let ratio = (1.0 - c.chi) / denom;
    Ok(c.f11(c.x / denom)? * ratio.powf(c.b()) * (1.0 - c.chi).powf(c.a()))
}

fn f11_lower_a_corrected_lhs(c: &FormalCtx) -> Result<MultiSeries> {
    let (a, b) = (&c.point.a, &c.point.b);
    let one_minus = c.one_plus(-1);
    let arg = geometric_substitute(Var::X, Var::Chi, &one_minus)?;
    let damping = arg.mul_var_power(Var::Chi, 1)?.neg().exp()?;
    c.f11_of(&arg)?.mul(&damping)?.mul(&one_minus.pow_rational(&(a - b))?)
}

fn f11_lower_a_corrected_lhs_f(c: &NumCtx) -> Result<f64> {
    let arg = c.x / (1.0 - c.chi);
    Ok((-arg * c.chi).exp() * (1.0 - c.chi).powf(c.a() - c.b()) * c.f11(arg)?)
}

fn f11_lower_b_stated_lhs(c: &FormalCtx) -> Result<MultiSeries> {
    f11_scaled_lhs(c, &c.point.b)
}

fn f11_lower_b_stated_lhs_f(c: &NumCtx) -> Result<f64> {
    Ok(c.f11(c.x * (1.0 + c.chi))? * (1.0 + c.chi).powf(c.b()))
}

fn f11_shift_lhs(c: &FormalCtx) -> Result<MultiSeries> {
    c.f11_of(&c.var(Var::X).add(&c.chi())?)
}

fn f11_shift_lhs_f(c: &NumCtx) -> Result<f64> {
    c.f11(c.x + c.chi)
}

// -- closed sides, Ψ2 -------------------------------------------------------

fn psi2_reduction_lhs(c: &FormalCtx) -> Result<MultiSeries> {
    let p = c.point.psi2((0, 0, 0))?;
    psi2_3var_series(&p, c.orders.m, c.orders.m, c.orders.n).rename(Var::Z, Var::Chi)
}

fn psi2_reduction_lhs_f(c: &NumCtx) -> Result<f64> {
    Ok(psi2_3var_float(c.a(), c.b(), c.c()?, c.x, c.y, c.chi, INNER_TOL, c.term_cap)?.value)
}

fn psi2_reduction_rhs(c: &FormalCtx) -> Result<MultiSeries> {
    let one_minus = c.one_plus(-1);
    let ax = geometric_substitute(Var::X, Var::Chi, &one_minus)?;
    let ay = geometric_substitute(Var::Y, Var::Chi, &one_minus)?;
    c.psi2_of(&ax, &ay)?.mul(&one_minus.pow_rational(&-&c.point.a)?)
}

fn psi2_reduction_rhs_f(c: &NumCtx) -> Result<f64> {
    let s = 1.0 - c.chi;
    Ok(s.powf(-c.a()) * c.psi2(c.x / s, c.y / s)?)
}

fn psi2_lower_b_lhs(c: &FormalCtx) -> Result<MultiSeries> {
    let one_plus = c.one_plus(1);
    let ax = c.var(Var::X).mul(&one_plus)?;
    c.psi2_of(&ax, &c.var(Var::Y))?.mul(&one_plus.pow_rational(&(&c.point.b - 1))?)
}

fn psi2_lower_b_lhs_f(c: &NumCtx) -> Result<f64> {
    Ok(c.psi2(c.x * (1.0 + c.chi), c.y)? * (1.0 + c.chi).powf(c.b() - 1.0))
}

fn psi2_lower_c_lhs(c: &FormalCtx) -> Result<MultiSeries> {
    let one_plus = c.one_plus(1);
    let ay = c.var(Var::Y).mul(&one_plus)?;
    c.psi2_of(&c.var(Var::X), &ay)?.mul(&one_plus.pow_rational(&(c.point.c()? - 1))?)
}

fn psi2_lower_c_lhs_f(c: &NumCtx) -> Result<f64> {
    Ok(c.psi2(c.x, c.y * (1.0 + c.chi))? * (1.0 + c.chi).powf(c.c()? - 1.0))
}

fn psi2_shift_x_lhs(c: &FormalCtx) -> Result<MultiSeries> {
    c.psi2_of(&c.var(Var::X).add(&c.chi())?, &c.var(Var::Y))
}

fn psi2_shift_x_lhs_f(c: &NumCtx) -> Result<f64> {
    c.psi2(c.x + c.chi, c.y)
}

fn psi2_shift_y_lhs(c: &FormalCtx) -> Result<MultiSeries> {
    c.psi2_of(&c.var(Var::X), &c.var(Var::Y).add(&c.chi())?)
}

fn psi2_shift_y_lhs_f(c: &NumCtx) -> Result<f64> {
    c.psi2(c.x, c.y + c.chi)
}

// -- χ-sum coefficients ------------------------------------------------------

fn raise_a_coeff(p: &ParamPoint, l: u32) -> Result<ExactScalar> {
    Ok(pochhammer(&p.a, l) / factorial(l))
}

fn raise_b_coeff(p: &ParamPoint, l: u32) -> Result<ExactScalar> {
    let sign = if l.is_multiple_of(2) { int(1) } else { int(-1) };
    Ok(sign * pochhammer(&(&p.b - &p.a), l) / (factorial(l) * pochhammer(&p.b, l)))
}

fn lower_a_coeff(p: &ParamPoint, l: u32) -> Result<ExactScalar> {
    Ok(pochhammer(&(&p.b - &p.a), l) / factorial(l))
}

fn lower_b_coeff(p: &ParamPoint, l: u32) -> Result<ExactScalar> {
    Ok(pochhammer(&(&p.b - l64(l)), l) / factorial(l))
}

fn lower_c_coeff(p: &ParamPoint, l: u32) -> Result<ExactScalar> {
    Ok(pochhammer(&(p.c()? - l64(l)), l) / factorial(l))
}

fn shift_b_coeff(p: &ParamPoint, l: u32) -> Result<ExactScalar> {
    Ok(pochhammer(&p.a, l) / (factorial(l) * pochhammer(&p.b, l)))
}

fn shift_c_coeff(p: &ParamPoint, l: u32) -> Result<ExactScalar> {
    Ok(pochhammer(&p.a, l) / (factorial(l) * pochhammer(p.c()?, l)))
}

fn up_a(l: u32) -> Shift {
    (l64(l), 0, 0)
}

fn down_a(l: u32) -> Shift {
    (-l64(l), 0, 0)
}

fn up_b(l: u32) -> Shift {
    (0, l64(l), 0)
}

fn down_b(l: u32) -> Shift {
    (0, -l64(l), 0)
}

fn down_c(l: u32) -> Shift {
    (0, 0, -l64(l))
}

fn up_ab(l: u32) -> Shift {
    (l64(l), l64(l), 0)
}

fn up_ac(l: u32) -> Shift {
    (l64(l), 0, l64(l))
}

const fn closed(formal: FormalBuilder, float: FloatBuilder) -> Side {
    Side::Closed { formal, float }
}

const fn chi_sum(coefficient: Coefficient, shift: fn(u32) -> Shift) -> Side {
    Side::ChiSum { coefficient, shift }
}

/// Every record, as-stated forms first within each id.
pub fn catalogue() -> Vec<IdentityRecord> {
    use IdentityId::*;
    use Variant::*;
    vec![
        IdentityRecord {
            id: F11RaiseA,
            variant: AsStated,
            anchor: "1F1 generating relation from the E_a flow",
            formula: "(1-χ)^(-a) 1F1(a;b;x/(1-χ)) = Σ_ℓ (a)_ℓ/ℓ! 1F1(a+ℓ;b;x) χ^ℓ",
            validity: Validity::UnitDisk,
            lhs: closed(f11_raise_a_lhs, f11_raise_a_lhs_f),
            rhs: chi_sum(raise_a_coeff, up_a),
        },
        IdentityRecord {
            id: F11RaiseB,
            variant: AsStated,
            anchor: "1F1 generating relation from the E_b flow",
            formula: "1F1(a;b;x(1+χ)) (1+χ)^(b-1) = Σ_ℓ (b-a)_ℓ/(ℓ!(b)_ℓ) 1F1(a;b+ℓ;x) (-χ)^ℓ",
            validity: Validity::UnitDisk,
            lhs: closed(f11_raise_b_stated_lhs, f11_raise_b_stated_lhs_f),
            rhs: chi_sum(raise_b_coeff, up_b),
        },
        IdentityRecord {
            id: F11RaiseB,
            variant: CorrectedCandidate,
            anchor: "exp(χ(∂x - 1)) applied to 1F1(a;b;x)",
            formula: "e^(-χ) 1F1(a;b;x+χ) = Σ_ℓ (b-a)_ℓ/(ℓ!(b)_ℓ) 1F1(a;b+ℓ;x) (-χ)^ℓ",
            validity: Validity::Entire,
            lhs: closed(f11_raise_b_corrected_lhs, f11_raise_b_corrected_lhs_f),
            rhs: chi_sum(raise_b_coeff, up_b),
        },
        IdentityRecord {
            id: F11LowerA,
            variant: AsStated,
            anchor: "1F1 generating relation from the E_a' flow",
            formula: "1F1(a;b;x/(1-χ(1-x))) ((1-χ)/(1-χ(1-x)))^b (1-χ)^a = Σ_ℓ (b-a)_ℓ/ℓ! 1F1(a-ℓ;b;x) χ^ℓ",
            validity: Validity::UnitDiskShifted,
            lhs: closed(f11_lower_a_stated_lhs, f11_lower_a_stated_lhs_f),
            rhs: chi_sum(lower_a_coeff, down_a),
        },
        IdentityRecord {
            id: F11LowerA,
            variant: CorrectedCandidate,
            anchor: "E_a' flow x -> x/(1-χ) with multiplier exp(-xχ/(1-χ))",
            formula: "exp(-xχ/(1-χ)) (1-χ)^(a-b) 1F1(a;b;x/(1-χ)) = Σ_ℓ (b-a)_ℓ/ℓ! 1F1(a-ℓ;b;x) χ^ℓ",
            validity: Validity::UnitDisk,
            lhs: closed(f11_lower_a_corrected_lhs, f11_lower_a_corrected_lhs_f),
            rhs: chi_sum(lower_a_coeff, down_a),
        },
        IdentityRecord {
            id: F11LowerB,
            variant: AsStated,
            anchor: "1F1 generating relation from the E_b' flow",
            formula: "1F1(a;b;x(1+χ)) (1+χ)^b = Σ_ℓ (b-ℓ)_ℓ/ℓ! 1F1(a;b-ℓ;x) χ^ℓ",
            validity: Validity::UnitDisk,
            lhs: closed(f11_lower_b_stated_lhs, f11_lower_b_stated_lhs_f),
            rhs: chi_sum(lower_b_coeff, down_b),
        },
        IdentityRecord {
            id: F11LowerB,
            variant: CorrectedCandidate,
            anchor: "E_b' flow with multiplier z/(z+α)",
            formula: "1F1(a;b;x(1+χ)) (1+χ)^(b-1) = Σ_ℓ (b-ℓ)_ℓ/ℓ! 1F1(a;b-ℓ;x) χ^ℓ",
            validity: Validity::UnitDisk,
            lhs: closed(f11_raise_b_stated_lhs, f11_raise_b_stated_lhs_f),
            rhs: chi_sum(lower_b_coeff, down_b),
        },
        IdentityRecord {
            id: F11Shift,
            variant: AsStated,
            anchor: "1F1 generating relation from the E_ab flow",
            formula: "1F1(a;b;x+χ) = Σ_ℓ (a)_ℓ/(ℓ!(b)_ℓ) 1F1(a+ℓ;b+ℓ;x) χ^ℓ",
            validity: Validity::Entire,
            lhs: closed(f11_shift_lhs, f11_shift_lhs_f),
            rhs: chi_sum(shift_b_coeff, up_ab),
        },
        IdentityRecord {
            id: Psi2Reduction,
            variant: AsStated,
            anchor: "Ψ2 reduction from the E_a flow",
            formula: "Ψ2(a;b,c;x,y,χ) = (1-χ)^(-a) Ψ2(a;b,c;x/(1-χ),y/(1-χ))",
            validity: Validity::UnitDisk,
            lhs: closed(psi2_reduction_lhs, psi2_reduction_lhs_f),
            rhs: closed(psi2_reduction_rhs, psi2_reduction_rhs_f),
        },
        IdentityRecord {
            id: Psi2LowerB,
            variant: AsStated,
            anchor: "Ψ2 generating relation from the E_b flow",
            formula: "Ψ2(a;b,c;x(1+χ),y) (1+χ)^(b-1) = Σ_ℓ (b-ℓ)_ℓ/ℓ! Ψ2(a;b-ℓ,c;x,y) χ^ℓ",
            validity: Validity::UnitDisk,
            lhs: closed(psi2_lower_b_lhs, psi2_lower_b_lhs_f),
            rhs: chi_sum(lower_b_coeff, down_b),
        },
        IdentityRecord {
            id: Psi2LowerC,
            variant: AsStated,
            anchor: "Ψ2 generating relation from the E_c flow",
            formula: "Ψ2(a;b,c;x,y(1+χ)) (1+χ)^(c-1) = Σ_ℓ (c-ℓ)_ℓ/ℓ! Ψ2(a;b,c-ℓ;x,y) χ^ℓ",
            validity: Validity::UnitDisk,
            lhs: closed(psi2_lower_c_lhs, psi2_lower_c_lhs_f),
            rhs: chi_sum(lower_c_coeff, down_c),
        },
        IdentityRecord {
            id: Psi2ShiftX,
            variant: AsStated,
            anchor: "Ψ2 generating relation from the E_ab flow",
            formula: "Ψ2(a;b,c;x+χ,y) = Σ_ℓ (a)_ℓ/(ℓ!(b)_ℓ) Ψ2(a+ℓ;b+ℓ,c;x,y) χ^ℓ",
            validity: Validity::Entire,
            lhs: closed(psi2_shift_x_lhs, psi2_shift_x_lhs_f),
            rhs: chi_sum(shift_b_coeff, up_ab),
        },
        IdentityRecord {
            id: Psi2ShiftY,
            variant: AsStated,
            anchor: "Ψ2 generating relation from the E_ac flow",
            formula: "Ψ2(a;b,c;x,y+χ) = Σ_ℓ (a)_ℓ/(ℓ!(c)_ℓ) Ψ2(a+ℓ;b,c+ℓ;x,y) χ^ℓ",
            validity: Validity::Entire,
            lhs: closed(psi2_shift_y_lhs, psi2_shift_y_lhs_f),
            rhs: chi_sum(shift_c_coeff, up_ac),
        },
    ]
}

/// Looks up one record.
pub fn record(id: IdentityId, variant: Variant) -> Result<IdentityRecord> {
    catalogue()
        .into_iter()
        .find(|r| r.id == id && r.variant == variant)
        .ok_or_else(|| Error::UnknownId(format!("{id} {variant}")))
}

/// Frame of a record's series: (x, χ) or (x, y, χ).
pub fn formal_frame(family: Family, orders: Orders) -> Frame {
    match family {
        Family::F11 => Frame::new(&[(Var::X, orders.m), (Var::Chi, orders.n)]),
        Family::Psi2 => Frame::new(&[(Var::X, orders.m), (Var::Y, orders.m), (Var::Chi, orders.n)]),
    }
}

/// The undeformed family member with shifted parameters, in x (and y).
pub fn family_series(family: Family, point: &ParamPoint, shift: Shift, order: u32) -> Result<MultiSeries> {
    Ok(match family {
        Family::F11 => f11_series(&point.f11(shift)?, order),
        Family::Psi2 => psi2_series(&point.psi2(shift)?, order, order),
    })
}

fn build_side(side: &Side, family: Family, ctx: &FormalCtx) -> Result<MultiSeries> {
    match side {
        Side::Closed { formal, .. } => formal(ctx),
        Side::ChiSum { coefficient, shift } => {
            let mut out = MultiSeries::zero(&ctx.frame);
            for l in 0..=ctx.orders.n {
                let c = coefficient(ctx.point, l)?;
                let term = family_series(family, ctx.point, shift(l), ctx.orders.m)?
                    .embed(&ctx.frame)?
                    .mul_var_power(Var::Chi, l)?;
                out = out.add(&term.scale(&c))?;
            }
            Ok(out)
        }
    }
}

/// Both sides of a record as series in the record's frame.
pub fn build_sides(rec: &IdentityRecord, point: &ParamPoint, orders: Orders) -> Result<(MultiSeries, MultiSeries)> {
    if orders.m == 0 {
        return Err(Error::CapUnderflow(format!("{}: inner order M = 0", rec.id)));
    }
    let family = rec.family();
    let point = point.for_family(family);
    match family {
        Family::F11 => point.f11((0, 0, 0)).map(|_| ())?,
        Family::Psi2 => point.psi2((0, 0, 0)).map(|_| ())?,
    }
    let ctx = FormalCtx {
        point: &point,
        orders,
        frame: formal_frame(family, orders),
    };
    let lhs = build_side(&rec.lhs, family, &ctx)?;
    let rhs = build_side(&rec.rhs, family, &ctx)?;
    if lhs.frame() != rhs.frame() {
        return Err(Error::CapMismatch {
            left: lhs.frame().to_string(),
            right: rhs.frame().to_string(),
        });
    }
    Ok((lhs, rhs))
}

/// First disagreeing coefficient of a comparison.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub monomial: String,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Verified,
    Mismatch(Witness),
}

impl Outcome {
    pub fn is_verified(&self) -> bool {
        matches!(self, Outcome::Verified)
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Outcome::Verified => None,
            Outcome::Mismatch(w) => Some(w),
        }
    }
}

/// Nonzero exponent vectors of `s` ordered by χ-degree, then total degree of
/// the remaining variables, then earlier variables first.
fn chi_major_first(s: &MultiSeries) -> Option<Vec<u32>> {
    let ichi = s.frame().index(Var::Chi)?;
    s.terms()
        .map(|(e, _)| e.to_vec())
        .min_by(|a, b| {
            let key = |e: &Vec<u32>| (e[ichi], e.iter().sum::<u32>() - e[ichi]);
            key(a).cmp(&key(b)).then_with(|| b.cmp(a))
        })
}

/// `lhs − rhs` of a record.
pub fn formal_residual(rec: &IdentityRecord, point: &ParamPoint, orders: Orders) -> Result<MultiSeries> {
    let (lhs, rhs) = build_sides(rec, point, orders)?;
    lhs.sub(&rhs)
}

/// Exact comparison of both sides up to χ^N and inner order M.
pub fn verify_formal(rec: &IdentityRecord, point: &ParamPoint, orders: Orders) -> Result<Outcome> {
    let (lhs, rhs) = build_sides(rec, point, orders)?;
    let diff = lhs.sub(&rhs)?;
    Ok(match chi_major_first(&diff) {
        None => Outcome::Verified,
        Some(e) => Outcome::Mismatch(Witness {
            monomial: diff.monomial_string(&e),
            lhs: lhs.coeff_exps(&e).to_string(),
            rhs: rhs.coeff_exps(&e).to_string(),
        }),
    })
}

/// Evaluation point for numeric checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NumericPoint {
    pub x: f64,
    pub y: f64,
}

impl Default for NumericPoint {
    fn default() -> Self {
        NumericPoint { x: 0.25, y: 0.2 }
    }
}

fn eval_side(side: &Side, family: Family, ctx: &NumCtx) -> Result<f64> {
    match side {
        Side::Closed { float, .. } => float(ctx),
        Side::ChiSum { coefficient, shift } => {
            let out = sum_until_negligible(
                |l| {
                    let l = l as u32;
                    let weight = ctx.chi.powi(l as i32);
                    if weight == 0.0 {
                        return Ok(0.0);
                    }
                    let c = coefficient(ctx.point, l)?.to_f64();
                    let inner = match family {
                        Family::F11 => {
                            let p = ctx.point.f11(shift(l))?;
                            f11_float(p.a().to_f64(), p.b().to_f64(), ctx.x, INNER_TOL, ctx.term_cap)?
                        }
                        Family::Psi2 => {
                            let p = ctx.point.psi2(shift(l))?;
                            psi2_float(p.a().to_f64(), p.b().to_f64(), p.c().to_f64(), ctx.x, ctx.y, INNER_TOL, ctx.term_cap)?
                        }
                    };
                    Ok(c * inner.value * weight)
                },
                INNER_TOL,
                1.0,
                ctx.term_cap,
            )?;
            Ok(out.value)
        }
    }
}

/// Float value of both sides at χ.
pub fn numeric_sides(rec: &IdentityRecord, point: &ParamPoint, at: NumericPoint, chi: f64, term_cap: usize) -> Result<(f64, f64)> {
    if !rec.validity.contains(chi, at.x) {
        return Err(Error::DomainViolation {
            chi,
            domain: rec.validity.describe().to_string(),
        });
    }
    let family = rec.family();
    let point = point.for_family(family);
    let ctx = NumCtx {
        point: &point,
        x: at.x,
        y: at.y,
        chi,
        term_cap,
    };
    Ok((eval_side(&rec.lhs, family, &ctx)?, eval_side(&rec.rhs, family, &ctx)?))
}

/// Relative float comparison of both sides at χ.
pub fn verify_numeric(rec: &IdentityRecord, point: &ParamPoint, at: NumericPoint, chi: f64, tol: f64, term_cap: usize) -> Result<Outcome> {
    if !tol.is_finite() || tol <= 0.0 {
        return Err(Error::Config(format!("tolerance must be positive, got {tol}")));
    }
    let (lhs, rhs) = numeric_sides(rec, point, at, chi, term_cap)?;
    let scale = lhs.abs().max(rhs.abs()).max(f64::MIN_POSITIVE);
    Ok(if (lhs - rhs).abs() <= tol * scale {
        Outcome::Verified
    } else {
        Outcome::Mismatch(Witness {
            monomial: format!("χ={chi}"),
            lhs: format!("{lhs:.17e}"),
            rhs: format!("{rhs:.17e}"),
        })
    })
}

/// Independent check of the shift records: the χ^ℓ coefficient of the sum
/// side must equal the ℓ-th Taylor coefficient `∂^ℓ Φ / ℓ!` of the base
/// function in the shifted variable.
pub fn taylor_crosscheck(id: IdentityId, point: &ParamPoint, orders: Orders) -> Result<Outcome> {
    let var = match id {
        IdentityId::F11Shift | IdentityId::Psi2ShiftX => Var::X,
        IdentityId::Psi2ShiftY => Var::Y,
        other => return Err(Error::UnknownId(format!("{other} has no Taylor cross-check"))),
    };
    let rec = record(id, Variant::AsStated)?;
    let Side::ChiSum { coefficient, shift } = rec.rhs else {
        return Err(Error::UnknownId(format!("{id} has no χ-sum side")));
    };
    let family = id.family();
    let point = point.for_family(family);
    let base = family_series(family, &point, (0, 0, 0), orders.m + orders.n)?;
    let target = family_series(family, &point, (0, 0, 0), orders.m)?.frame().clone();
    let mut deriv = base;
    for l in 0..=orders.n {
        if l > 0 {
            deriv = deriv.derivative(var)?;
        }
        // the derivative only lowers the cap in `var`; cut every cap to M
        let spec: Vec<(Var, u32)> = deriv.frame().vars().iter().map(|&v| (v, orders.m)).collect();
        let taylor = deriv.truncate(&Frame::new(&spec))?.scale(&factorial(l).recip());
        let sum_term = family_series(family, &point, shift(l), orders.m)?.scale(&coefficient(&point, l)?);
        let diff = taylor.sub(&sum_term)?;
        if let Some((e, _)) = diff.graded_terms().first() {
            return Ok(Outcome::Mismatch(Witness {
                monomial: format!("χ^{l} {}", diff.monomial_string(e)),
                lhs: taylor.coeff_exps(e).to_string(),
                rhs: sum_term.coeff_exps(e).to_string(),
            }));
        }
        debug_assert_eq!(taylor.frame(), &target);
    }
    Ok(Outcome::Verified)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Formal,
    Numeric,
    Both,
}

impl FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "formal" => Ok(Mode::Formal),
            "numeric" => Ok(Mode::Numeric),
            "both" => Ok(Mode::Both),
            other => Err(Error::Config(format!("unknown mode {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowMode {
    Formal,
    Numeric,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Verified,
    Mismatch,
    Error,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub id: IdentityId,
    pub variant: Variant,
    pub mode: RowMode,
    pub params: ParamPoint,
    pub orders: Option<Orders>,
    pub chi: Option<f64>,
    pub status: Status,
    pub witness: Option<Witness>,
    pub error: Option<String>,
    pub elapsed_ms: f64,
}

impl ReportRow {
    /// Identity of the check, ignoring variant and outcome.
    fn check_key(&self) -> (IdentityId, RowMode, &ParamPoint, Option<Orders>, Option<u64>) {
        (self.id, self.mode, &self.params, self.orders, self.chi.map(f64::to_bits))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub rows: usize,
    pub verified: usize,
    pub mismatched: usize,
    pub errors: usize,
    pub as_stated_verified: usize,
    pub as_stated_mismatched: usize,
    pub corrected_verified: usize,
    pub unresolved: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub engine_version: String,
    pub records: Vec<ReportRow>,
    pub summary: Summary,
    /// Rows that fail without a verified corrected candidate for the same check.
    pub unresolved: Vec<String>,
    pub elapsed_ms: f64,
}

impl VerificationReport {
    pub fn invariant_holds(&self) -> bool {
        self.unresolved.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SuiteError {
    #[error(transparent)]
    Engine(#[from] Error),
    #[error("{} unresolved discrepancies", .0.unresolved.len())]
    Failure(Box<VerificationReport>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub points: Vec<ParamPoint>,
    pub orders_f11: Orders,
    pub orders_psi2: Orders,
    pub mode: Mode,
    pub chi_grid: Vec<f64>,
    pub at: NumericPoint,
    pub tol: f64,
    pub term_cap: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            points: ParamPoint::defaults(),
            orders_f11: Orders::default_for(Family::F11),
            orders_psi2: Orders::default_for(Family::Psi2),
            mode: Mode::Both,
            chi_grid: vec![0.1, 0.25],
            at: NumericPoint::default(),
            tol: 1e-8,
            term_cap: DEFAULT_TERM_CAP,
        }
    }
}

impl SuiteConfig {
    pub fn orders(&self, family: Family) -> Orders {
        match family {
            Family::F11 => self.orders_f11,
            Family::Psi2 => self.orders_psi2,
        }
    }
}

struct Task<'a> {
    rec: &'a IdentityRecord,
    point: ParamPoint,
    mode: RowMode,
    chi: Option<f64>,
    orders: Option<Orders>,
}

fn run_task(task: &Task, cfg: &SuiteConfig) -> ReportRow {
    let start = Instant::now();
    let outcome = match task.mode {
        RowMode::Formal => verify_formal(task.rec, &task.point, task.orders.unwrap()),
        RowMode::Numeric => verify_numeric(task.rec, &task.point, cfg.at, task.chi.unwrap(), cfg.tol, cfg.term_cap),
    };
    let (status, witness, error) = match outcome {
        Ok(Outcome::Verified) => (Status::Verified, None, None),
        Ok(Outcome::Mismatch(w)) => (Status::Mismatch, Some(w), None),
        Err(e) => (Status::Error, None, Some(e.to_string())),
    };
    ReportRow {
        id: task.rec.id,
        variant: task.rec.variant,
        mode: task.mode,
        params: task.point.clone(),
        orders: task.orders,
        chi: task.chi,
        status,
        witness,
        error,
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    }
}

#[cfg(feature = "parallel")]
fn run_tasks(tasks: &[Task], cfg: &SuiteConfig) -> Vec<ReportRow> {
    use rayon::prelude::*;
    tasks.par_iter().map(|t| run_task(t, cfg)).collect()
}

#[cfg(not(feature = "parallel"))]
fn run_tasks(tasks: &[Task], cfg: &SuiteConfig) -> Vec<ReportRow> {
    tasks.iter().map(|t| run_task(t, cfg)).collect()
}

/// Every record × point × (formal | numeric χ) over the whole catalogue.
pub fn run_suite(cfg: &SuiteConfig) -> std::result::Result<VerificationReport, SuiteError> {
    run_suite_with(&catalogue(), cfg)
}

/// [`run_suite`] over an explicit record list.
pub fn run_suite_with(records: &[IdentityRecord], cfg: &SuiteConfig) -> std::result::Result<VerificationReport, SuiteError> {
    let start = Instant::now();
    if cfg.points.is_empty() {
        return Err(Error::Config("no parameter points".into()).into());
    }
    let mut tasks = Vec::new();
    for rec in records {
        for point in &cfg.points {
            let point = point.for_family(rec.family());
            if matches!(cfg.mode, Mode::Formal | Mode::Both) {
                tasks.push(Task {
                    rec,
                    point: point.clone(),
                    mode: RowMode::Formal,
                    chi: None,
                    orders: Some(cfg.orders(rec.family())),
                });
            }
            if matches!(cfg.mode, Mode::Numeric | Mode::Both) {
                for &chi in &cfg.chi_grid {
                    tasks.push(Task {
                        rec,
                        point: point.clone(),
                        mode: RowMode::Numeric,
                        chi: Some(chi),
                        orders: None,
                    });
                }
            }
        }
    }
    let rows = run_tasks(&tasks, cfg);
    let report = assemble(rows, start.elapsed().as_secs_f64() * 1e3);
    if report.invariant_holds() {
        Ok(report)
    } else {
        Err(SuiteError::Failure(Box::new(report)))
    }
}

fn describe(row: &ReportRow) -> String {
    let at = match (row.orders, row.chi) {
        (Some(o), _) => format!("N={}, M={}", o.n, o.m),
        (_, Some(chi)) => format!("χ={chi}"),
        _ => String::new(),
    };
    let why = match (&row.witness, &row.error) {
        (Some(w), _) => format!("{}: {} vs {}", w.monomial, w.lhs, w.rhs),
        (_, Some(e)) => e.clone(),
        _ => String::new(),
    };
    format!("{} {} [{}; {}] {}", row.id, row.variant, row.params, at, why)
}

/// Summarizes rows and pairs every as-stated failure with a verified
/// corrected candidate for the same check.
pub fn assemble(records: Vec<ReportRow>, elapsed_ms: f64) -> VerificationReport {
    let mut summary = Summary {
        rows: records.len(),
        ..Summary::default()
    };
    let mut unresolved = Vec::new();
    for row in &records {
        match row.status {
            Status::Verified => summary.verified += 1,
            Status::Mismatch => summary.mismatched += 1,
            Status::Error => summary.errors += 1,
        }
        match (row.variant, row.status) {
            (Variant::AsStated, Status::Verified) => summary.as_stated_verified += 1,
            (Variant::AsStated, Status::Mismatch) => summary.as_stated_mismatched += 1,
            (Variant::CorrectedCandidate, Status::Verified) => summary.corrected_verified += 1,
            _ => {}
        }
        if row.status == Status::Verified {
            continue;
        }
        let paired = row.variant == Variant::AsStated
            && row.status == Status::Mismatch
            && records.iter().any(|other| {
                other.variant == Variant::CorrectedCandidate
                    && other.status == Status::Verified
                    && other.check_key() == row.check_key()
            });
        if !paired {
            unresolved.push(describe(row));
        }
    }
    summary.unresolved = unresolved.len();
    VerificationReport {
        engine_version: env!("CARGO_PKG_VERSION").to_string(),
        records,
        summary,
        unresolved,
        elapsed_ms,
    }
}
