//! Truncated multivariate formal power series over exact rationals.
//!
//! Every series carries a [`Frame`]: an ordered set of variables, each with
//! its own truncation cap. Terms above a cap are discarded by every
//! operation, and operations that lose information at the top order (the
//! formal derivative) lower the cap instead of silently keeping untrusted
//! coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::ExactScalar;

/// Names of the series and prefactor variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Var {
    X,
    Y,
    Z,
    U,
    T,
    Chi,
}

impl Var {
    pub const ALL: [Var; 6] = [Var::X, Var::Y, Var::Z, Var::U, Var::T, Var::Chi];

    pub fn name(self) -> &'static str {
        match self {
            Var::X => "x",
            Var::Y => "y",
            Var::Z => "z",
            Var::U => "u",
            Var::T => "t",
            Var::Chi => "χ",
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Var {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "x" => Ok(Var::X),
            "y" => Ok(Var::Y),
            "z" => Ok(Var::Z),
            "u" => Ok(Var::U),
            "t" => Ok(Var::T),
            "chi" | "χ" => Ok(Var::Chi),
            other => Err(Error::UnknownId(other.to_string())),
        }
    }
}

/// Variables of a series (kept in canonical [`Var`] order) and their caps.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Frame {
    vars: Vec<Var>,
    caps: Vec<u32>,
}

impl Frame {
    pub fn new(spec: &[(Var, u32)]) -> Self {
        let mut pairs = spec.to_vec();
        pairs.sort_by_key(|&(v, _)| v);
        pairs.dedup_by_key(|&mut (v, _)| v);
        assert_eq!(pairs.len(), spec.len(), "duplicate variable in frame");
        Frame {
            vars: pairs.iter().map(|&(v, _)| v).collect(),
            caps: pairs.iter().map(|&(_, c)| c).collect(),
        }
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn caps(&self) -> &[u32] {
        &self.caps
    }

    pub fn index(&self, v: Var) -> Option<usize> {
        self.vars.iter().position(|&w| w == v)
    }

    pub fn contains(&self, v: Var) -> bool {
        self.index(v).is_some()
    }

    pub fn cap(&self, v: Var) -> Option<u32> {
        self.index(v).map(|i| self.caps[i])
    }

    pub fn with_cap(&self, v: Var, cap: u32) -> Result<Frame> {
        let i = self.index(v).ok_or(Error::UnknownVariable(v))?;
        let mut f = self.clone();
        f.caps[i] = cap;
        Ok(f)
    }

    /// Componentwise minimum of the caps of two frames over the same variables.
    pub fn meet(&self, other: &Frame) -> Result<Frame> {
        if self.vars != other.vars {
            return Err(self.mismatch(other));
        }
        Ok(Frame {
            vars: self.vars.clone(),
            caps: self.caps.iter().zip(&other.caps).map(|(a, b)| *a.min(b)).collect(),
        })
    }

    fn admits(&self, exps: &[u32]) -> bool {
        exps.iter().zip(&self.caps).all(|(e, c)| e <= c)
    }

    fn mismatch(&self, other: &Frame) -> Error {
        Error::CapMismatch {
            left: self.to_string(),
            right: other.to_string(),
        }
    }
}

impl fmt::Display for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .vars
            .iter()
            .zip(&self.caps)
            .map(|(v, c)| format!("{v}≤{c}"))
            .collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// Sparse truncated power series. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiSeries {
    frame: Frame,
    terms: BTreeMap<Vec<u32>, ExactScalar>,
}

impl MultiSeries {
    pub fn zero(frame: &Frame) -> Self {
        MultiSeries {
            frame: frame.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(frame: &Frame, c: ExactScalar) -> Self {
        let mut s = Self::zero(frame);
        s.insert(vec![0; frame.vars.len()], c);
        s
    }

    pub fn one(frame: &Frame) -> Self {
        Self::constant(frame, ExactScalar::one())
    }

    /// `coeff * Π v^k` for the listed powers; empty if a power exceeds its cap.
    pub fn monomial(frame: &Frame, powers: &[(Var, u32)], coeff: ExactScalar) -> Result<Self> {
        let exps = exponent_vector(frame, powers)?;
        let mut s = Self::zero(frame);
        if frame.admits(&exps) {
            s.insert(exps, coeff);
        }
        Ok(s)
    }

    pub fn var(frame: &Frame, v: Var) -> Result<Self> {
        Self::monomial(frame, &[(v, 1)], ExactScalar::one())
    }

    /// Builds a series from `(powers, coefficient)` pairs; repeated monomials add up.
    pub fn from_terms<'a, I>(frame: &Frame, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a [(Var, u32)], ExactScalar)>,
    {
        let mut s = Self::zero(frame);
        for (powers, c) in terms {
            let exps = exponent_vector(frame, powers)?;
            if frame.admits(&exps) {
                s.accumulate(exps, &c);
            }
        }
        Ok(s)
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &ExactScalar)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn coeff(&self, powers: &[(Var, u32)]) -> ExactScalar {
        match exponent_vector(&self.frame, powers) {
            Ok(e) => self.coeff_exps(&e),
            Err(_) => ExactScalar::zero(),
        }
    }

    pub fn coeff_exps(&self, exps: &[u32]) -> ExactScalar {
        self.terms.get(exps).cloned().unwrap_or_else(ExactScalar::zero)
    }

    pub fn constant_term(&self) -> ExactScalar {
        self.coeff_exps(&vec![0; self.frame.vars.len()])
    }

    fn insert(&mut self, exps: Vec<u32>, c: ExactScalar) {
        if !c.is_zero() {
            self.terms.insert(exps, c);
        }
    }

    fn accumulate(&mut self, exps: Vec<u32>, c: &ExactScalar) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exps) {
            Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn check_frame(&self, other: &MultiSeries) -> Result<()> {
        if self.frame != other.frame {
            return Err(self.frame.mismatch(&other.frame));
        }
        Ok(())
    }

    pub fn add(&self, other: &MultiSeries) -> Result<MultiSeries> {
        self.check_frame(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.accumulate(e.clone(), c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &MultiSeries) -> Result<MultiSeries> {
        self.check_frame(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.accumulate(e.clone(), &-c);
        }
        Ok(out)
    }

    pub fn neg(&self) -> MultiSeries {
        self.scale(&-ExactScalar::one())
    }

    pub fn scale(&self, k: &ExactScalar) -> MultiSeries {
        if k.is_zero() {
            return Self::zero(&self.frame);
        }
        MultiSeries {
            frame: self.frame.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * k)).collect(),
        }
    }

    /// Truncated Cauchy product.
    pub fn mul(&self, other: &MultiSeries) -> Result<MultiSeries> {
        self.check_frame(other)?;
        let mut out = Self::zero(&self.frame);
        let mut exps = vec![0u32; self.frame.vars.len()];
        for (e1, c1) in &self.terms {
            'inner: for (e2, c2) in &other.terms {
                for (i, slot) in exps.iter_mut().enumerate() {
                    *slot = e1[i] + e2[i];
                    if *slot > self.frame.caps[i] {
                        continue 'inner;
                    }
                }
                out.accumulate(exps.clone(), &(c1 * c2));
            }
        }
        Ok(out)
    }

    /// Multiplies by `v^k`, dropping terms pushed over the cap.
    pub fn mul_var_power(&self, v: Var, k: u32) -> Result<MultiSeries> {
        let i = self.frame.index(v).ok_or(Error::UnknownVariable(v))?;
        let mut out = Self::zero(&self.frame);
        for (e, c) in &self.terms {
            let mut e = e.clone();
            e[i] += k;
            if e[i] <= self.frame.caps[i] {
                out.insert(e, c.clone());
            }
        }
        Ok(out)
    }

    /// Restricts to a frame over the same variables with caps no larger.
    pub fn truncate(&self, frame: &Frame) -> Result<MultiSeries> {
        if frame.vars != self.frame.vars || !frame.caps.iter().zip(&self.frame.caps).all(|(a, b)| a <= b) {
            return Err(self.frame.mismatch(frame));
        }
        Ok(MultiSeries {
            frame: frame.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| frame.admits(e))
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        })
    }

    /// Re-expresses the series in a frame whose variables are a superset.
    /// Caps come from the target frame; terms above them are dropped.
    pub fn embed(&self, frame: &Frame) -> Result<MultiSeries> {
        let map: Vec<usize> = self
            .frame
            .vars
            .iter()
            .map(|&v| frame.index(v).ok_or(Error::UnknownVariable(v)))
            .collect::<Result<_>>()?;
        let mut out = Self::zero(frame);
        for (e, c) in &self.terms {
            let mut target = vec![0u32; frame.vars.len()];
            for (k, &i) in map.iter().enumerate() {
                target[i] = e[k];
            }
            if frame.admits(&target) {
                out.insert(target, c.clone());
            }
        }
        Ok(out)
    }

    /// Renames variable `from` to `to` (which must not already be present).
    pub fn rename(&self, from: Var, to: Var) -> Result<MultiSeries> {
        if self.frame.contains(to) {
            return Err(Error::Config(format!("variable {to} already in frame")));
        }
        self.frame.index(from).ok_or(Error::UnknownVariable(from))?;
        let spec: Vec<(Var, u32)> = self
            .frame
            .vars
            .iter()
            .zip(&self.frame.caps)
            .map(|(&v, &c)| (if v == from { to } else { v }, c))
            .collect();
        let frame = Frame::new(&spec);
        let old = &self.frame;
        let mut out = Self::zero(&frame);
        for (e, c) in &self.terms {
            let mut target = vec![0u32; e.len()];
            for (k, &v) in old.vars.iter().enumerate() {
                let name = if v == from { to } else { v };
                target[frame.index(name).unwrap()] = e[k];
            }
            out.insert(target, c.clone());
        }
        Ok(out)
    }

    /// Coefficient of `v^k`, as a series in the remaining variables (same frame,
    /// with `v` forced to degree zero).
    pub fn slice(&self, v: Var, k: u32) -> Result<MultiSeries> {
        let i = self.frame.index(v).ok_or(Error::UnknownVariable(v))?;
        let frame = self.frame.with_cap(v, 0)?;
        let mut out = Self::zero(&frame);
        for (e, c) in &self.terms {
            if e[i] == k {
                let mut e = e.clone();
                e[i] = 0;
                out.insert(e, c.clone());
            }
        }
        Ok(out)
    }

    /// Formal partial derivative. The cap of `v` drops by one because the
    /// top-order coefficient of the result is unknown.
    pub fn derivative(&self, v: Var) -> Result<MultiSeries> {
        let i = self.frame.index(v).ok_or(Error::UnknownVariable(v))?;
        let cap = self.frame.caps[i];
        if cap == 0 {
            return Err(Error::CapUnderflow(format!("derivative in {v} at cap 0")));
        }
        let frame = self.frame.with_cap(v, cap - 1)?;
        let mut out = Self::zero(&frame);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[i] -= 1;
            out.insert(e2, c * i64::from(e[i]));
        }
        Ok(out)
    }

    /// Repeated products `s^0, s^1, ...` up to the first power that truncates
    /// to zero (or `limit` powers). Requires a zero constant term.
    fn powers(&self, limit: usize) -> Result<Vec<MultiSeries>> {
        if !self.constant_term().is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let mut out = vec![Self::one(&self.frame)];
        while out.len() < limit {
            let next = out.last().unwrap().mul(self)?;
            if next.is_zero() {
                break;
            }
            out.push(next);
        }
        Ok(out)
    }

    /// `Σ_k coeff(k) · self^k`; the argument must have zero constant term.
    pub fn compose(&self, mut coeff: impl FnMut(u32) -> ExactScalar) -> Result<MultiSeries> {
        let mut out = Self::zero(&self.frame);
        for (k, p) in self.powers(usize::MAX)?.iter().enumerate() {
            let c = coeff(k as u32);
            out = out.add(&p.scale(&c))?;
        }
        Ok(out)
    }

    /// `Σ_{m,n} coeff(m, n) · first^m · second^n`; both arguments must have zero
    /// constant term.
    pub fn compose2(
        first: &MultiSeries,
        second: &MultiSeries,
        coeff: impl Fn(u32, u32) -> ExactScalar,
    ) -> Result<MultiSeries> {
        first.check_frame(second)?;
        let pf = first.powers(usize::MAX)?;
        let ps = second.powers(usize::MAX)?;
        let mut out = Self::zero(&first.frame);
        for (m, a) in pf.iter().enumerate() {
            for (n, b) in ps.iter().enumerate() {
                let c = coeff(m as u32, n as u32);
                if c.is_zero() {
                    continue;
                }
                out = out.add(&a.mul(b)?.scale(&c))?;
            }
        }
        Ok(out)
    }

    /// Generalized binomial series `Σ_k C(γ,k) (s-1)^k`.
    pub fn pow_rational(&self, gamma: &ExactScalar) -> Result<MultiSeries> {
        let c0 = self.constant_term();
        if !c0.is_one() {
            return Err(Error::NonUnitConstantTerm(c0.to_string()));
        }
        let d = self.sub(&Self::one(&self.frame))?;
        let mut binom = ExactScalar::one();
        d.compose(|k| {
            if k > 0 {
                binom = &binom * &(gamma - i64::from(k - 1)) / i64::from(k);
            }
            binom.clone()
        })
    }

    /// `exp(s)` for a series with zero constant term.
    pub fn exp(&self) -> Result<MultiSeries> {
        self.compose(|k| crate::exactnum::factorial(k).recip())
    }

    /// Exact value at a rational point; every frame variable must be assigned.
    pub fn eval(&self, point: &[(Var, ExactScalar)]) -> Result<ExactScalar> {
        let mut values = Vec::with_capacity(self.frame.vars.len());
        for &v in &self.frame.vars {
            let x = point
                .iter()
                .find(|(w, _)| *w == v)
                .map(|(_, x)| x.clone())
                .ok_or(Error::UnknownVariable(v))?;
            values.push(x);
        }
        Ok(self
            .terms
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .zip(&values)
                    .fold(c.clone(), |acc, (&k, x)| acc * x.pow(k as i32))
            })
            .sum())
    }

    /// Terms in graded-lex order: total degree ascending, then earlier
    /// variables first.
    pub fn graded_terms(&self) -> Vec<(&[u32], &ExactScalar)> {
        let mut v: Vec<_> = self.terms().collect();
        v.sort_by(|(a, _), (b, _)| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            da.cmp(&db).then_with(|| b.cmp(a))
        });
        v
    }

    pub fn monomial_string(&self, exps: &[u32]) -> String {
        monomial_string(&self.frame, exps)
    }
}

fn exponent_vector(frame: &Frame, powers: &[(Var, u32)]) -> Result<Vec<u32>> {
    let mut exps = vec![0u32; frame.vars.len()];
    for &(v, k) in powers {
        let i = frame.index(v).ok_or(Error::UnknownVariable(v))?;
        exps[i] += k;
    }
    Ok(exps)
}

pub(crate) fn monomial_string(frame: &Frame, exps: &[u32]) -> String {
    let parts: Vec<String> = frame
        .vars
        .iter()
        .zip(exps)
        .filter(|(_, &k)| k > 0)
        .map(|(v, &k)| if k == 1 { v.to_string() } else { format!("{v}^{k}") })
        .collect();
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("*")
    }
}

/// Canonical rendering, e.g. `1 + 1/2*x - 3/8*x^2*χ`. The alternate flag
/// (`{:#}`) appends the frame.
impl fmt::Display for MultiSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.graded_terms();
        if terms.is_empty() {
            f.write_str("0")?;
        }
        for (k, (e, c)) in terms.into_iter().enumerate() {
            let negative = c < &ExactScalar::zero();
            let mag = c.abs();
            let mono = monomial_string(&self.frame, e);
            let body = match (mono.as_str(), mag.is_one()) {
                ("1", _) => mag.to_string(),
                (m, true) => m.to_string(),
                (m, false) => format!("{mag}*{m}"),
            };
            match (k, negative) {
                (0, false) => write!(f, "{body}")?,
                (0, true) => write!(f, "-{body}")?,
                (_, false) => write!(f, " + {body}")?,
                (_, true) => write!(f, " - {body}")?,
            }
        }
        if f.alternate() {
            write!(f, " {}", self.frame)?;
        }
        Ok(())
    }
}

/// `v · factor^{-1}`, the argument rescaling produced by projective flows
/// such as `x ↦ x/(1-χ)`. Every non-constant term of `factor` must contain
/// the deformation variable `w`.
pub fn geometric_substitute(v: Var, w: Var, factor: &MultiSeries) -> Result<MultiSeries> {
    let frame = factor.frame();
    let iw = frame.index(w).ok_or(Error::UnknownVariable(w))?;
    let c0 = factor.constant_term();
    if !c0.is_one() {
        return Err(Error::NonUnitConstantTerm(c0.to_string()));
    }
    if factor.terms().any(|(e, _)| e.iter().any(|&k| k > 0) && e[iw] == 0) {
        return Err(Error::NotADeformation(w));
    }
    let recip = factor.pow_rational(&-ExactScalar::one())?;
    recip.mul_var_power(v, 1)
}

/// A series times a monomial with rational exponents, e.g. `F(x) · y^a z^b`.
#[derive(Debug, Clone)]
pub struct PrefactorSeries {
    pub body: MultiSeries,
    prefactor: BTreeMap<Var, ExactScalar>,
}

impl PrefactorSeries {
    pub fn new(body: MultiSeries, prefactor: &[(Var, ExactScalar)]) -> Self {
        PrefactorSeries {
            body,
            prefactor: prefactor.iter().cloned().collect(),
        }
    }

    pub fn prefactor(&self) -> &BTreeMap<Var, ExactScalar> {
        &self.prefactor
    }

    pub fn exponent(&self, v: Var) -> ExactScalar {
        self.prefactor.get(&v).cloned().unwrap_or_else(ExactScalar::zero)
    }

    fn knows(&self, v: Var) -> bool {
        self.body.frame().contains(v) || self.prefactor.contains_key(&v)
    }

    pub fn prefactor_multiply(&self, v: Var, k: &ExactScalar) -> PrefactorSeries {
        let mut out = self.clone();
        let e = out.prefactor.entry(v).or_insert_with(ExactScalar::zero);
        *e += k;
        out
    }

    /// Product rule `∂_v(S·v^α) = (v ∂_v S + α S)·v^{α-1}` when `v` carries a
    /// prefactor exponent; a plain body derivative otherwise.
    pub fn prefactor_derivative(&self, v: Var) -> Result<PrefactorSeries> {
        if !self.knows(v) {
            return Err(Error::UnknownVariable(v));
        }
        let in_body = self.body.frame().contains(v);
        let Some(alpha) = self.prefactor.get(&v) else {
            return Ok(PrefactorSeries {
                body: self.body.derivative(v)?,
                prefactor: self.prefactor.clone(),
            });
        };
        let body = if in_body {
            let euler = self.body.derivative(v)?.mul_var_power(v, 1)?;
            let scaled = self.body.scale(alpha).truncate(euler.frame())?;
            euler.add(&scaled)?
        } else {
            self.body.scale(alpha)
        };
        Ok(PrefactorSeries {
            body,
            prefactor: self.prefactor.clone(),
        }
        .prefactor_multiply(v, &-ExactScalar::one()))
    }

    pub fn scale(&self, k: &ExactScalar) -> PrefactorSeries {
        PrefactorSeries {
            body: self.body.scale(k),
            prefactor: self.prefactor.clone(),
        }
    }

    fn normalized_prefactor(&self) -> BTreeMap<Var, ExactScalar> {
        self.prefactor
            .iter()
            .filter(|(_, e)| !e.is_zero())
            .map(|(v, e)| (*v, e.clone()))
            .collect()
    }

    pub fn same_prefactor(&self, other: &PrefactorSeries) -> bool {
        self.normalized_prefactor() == other.normalized_prefactor()
    }

    pub fn truncate(&self, frame: &Frame) -> Result<PrefactorSeries> {
        Ok(PrefactorSeries {
            body: self.body.truncate(frame)?,
            prefactor: self.prefactor.clone(),
        })
    }

    /// Sum after cutting both bodies to their common caps.
    pub fn add_aligned(&self, other: &PrefactorSeries) -> Result<PrefactorSeries> {
        if !self.same_prefactor(other) {
            return Err(Error::PrefactorMismatch(
                self.prefactor_string(),
                other.prefactor_string(),
            ));
        }
        let frame = self.body.frame().meet(other.body.frame())?;
        Ok(PrefactorSeries {
            body: self.body.truncate(&frame)?.add(&other.body.truncate(&frame)?)?,
            prefactor: self.prefactor.clone(),
        })
    }

    pub fn prefactor_string(&self) -> String {
        let parts: Vec<String> = self
            .normalized_prefactor()
            .iter()
            .map(|(v, e)| format!("{v}^({e})"))
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

impl PartialEq for PrefactorSeries {
    fn eq(&self, other: &Self) -> bool {
        self.same_prefactor(other) && self.body == other.body
    }
}

impl fmt::Display for PrefactorSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) * {}", self.body, self.prefactor_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> ExactScalar {
        ExactScalar::new(n, d)
    }

    fn fx(cap: u32) -> Frame {
        Frame::new(&[(Var::X, cap)])
    }

    fn poly_x(cap: u32, coeffs: &[ExactScalar]) -> MultiSeries {
        let f = fx(cap);
        let mut s = MultiSeries::zero(&f);
        for (k, c) in coeffs.iter().enumerate() {
            s = s
                .add(&MultiSeries::monomial(&f, &[(Var::X, k as u32)], c.clone()).unwrap())
                .unwrap();
        }
        s
    }

    fn ints(v: &[i64]) -> Vec<ExactScalar> {
        v.iter().map(|&k| q(k, 1)).collect()
    }

    #[test]
    fn add_examples() {
        let s = poly_x(3, &ints(&[1, 1])).add(&poly_x(3, &ints(&[1, -1]))).unwrap();
        assert_eq!(s, MultiSeries::constant(&fx(3), q(2, 1)));
        let s = poly_x(3, &[q(1, 1), q(1, 2)]).add(&poly_x(3, &[q(1, 2), q(1, 3)])).unwrap();
        assert_eq!(s, poly_x(3, &[q(3, 2), q(5, 6)]));

        let f = Frame::new(&[(Var::X, 2), (Var::Chi, 2)]);
        let s = MultiSeries::var(&f, Var::X).unwrap().add(&MultiSeries::var(&f, Var::Chi).unwrap()).unwrap();
        assert_eq!(s.add(&MultiSeries::zero(&f)).unwrap(), s);
    }

    #[test]
    fn add_rejects_cap_mismatch() {
        let e = poly_x(3, &ints(&[1])).add(&poly_x(2, &ints(&[1])));
        assert!(matches!(e, Err(Error::CapMismatch { .. })));
    }

    #[test]
    fn mul_examples() {
        let p = poly_x(2, &ints(&[1, 1])).mul(&poly_x(2, &ints(&[1, -1]))).unwrap();
        assert_eq!(p, poly_x(2, &ints(&[1, 0, -1])));
        let p = poly_x(2, &ints(&[1, 1, 1])).mul(&poly_x(2, &ints(&[1, 1]))).unwrap();
        assert_eq!(p, poly_x(2, &ints(&[1, 2, 2])));
        let s = poly_x(4, &[q(1, 3), q(-2, 7), q(5, 1)]);
        assert_eq!(s.mul(&MultiSeries::one(&fx(4))).unwrap(), s);
    }

    #[test]
    fn derivative_examples() {
        let d = poly_x(3, &ints(&[0, 0, 0, 1])).derivative(Var::X).unwrap();
        assert_eq!(d, poly_x(2, &ints(&[0, 0, 3])));
        let d = MultiSeries::constant(&fx(3), q(5, 1)).derivative(Var::X).unwrap();
        assert!(d.is_zero());
        assert_eq!(d.frame().cap(Var::X), Some(2));
        let e = poly_x(3, &[q(1, 1), q(1, 1), q(1, 2), q(1, 6)]);
        assert_eq!(e.derivative(Var::X).unwrap(), poly_x(2, &[q(1, 1), q(1, 1), q(1, 2)]));
        assert_eq!(e.derivative(Var::Y), Err(Error::UnknownVariable(Var::Y)));
    }

    #[test]
    fn pow_rational_examples() {
        let f = Frame::new(&[(Var::Chi, 3)]);
        let one_minus = MultiSeries::one(&f)
            .sub(&MultiSeries::var(&f, Var::Chi).unwrap())
            .unwrap();
        let g = one_minus.pow_rational(&q(-1, 1)).unwrap();
        for k in 0..=3 {
            assert_eq!(g.coeff(&[(Var::Chi, k)]), q(1, 1));
        }
        let one_plus = MultiSeries::one(&f).add(&MultiSeries::var(&f, Var::Chi).unwrap()).unwrap();
        let sq = one_plus.pow_rational(&q(2, 1)).unwrap();
        assert_eq!(sq.to_string(), "1 + 2*χ + χ^2");

        let f2 = Frame::new(&[(Var::Chi, 2)]);
        let h = one_minus.truncate(&f2).unwrap().pow_rational(&q(-1, 2)).unwrap();
        assert_eq!(h.to_string(), "1 + 1/2*χ + 3/8*χ^2");

        let bad = MultiSeries::constant(&f, q(2, 1)).pow_rational(&q(1, 2));
        assert!(matches!(bad, Err(Error::NonUnitConstantTerm(_))));
    }

    #[test]
    fn geometric_substitute_examples() {
        let f = Frame::new(&[(Var::X, 3), (Var::Chi, 2)]);
        let chi = MultiSeries::var(&f, Var::Chi).unwrap();
        let x = MultiSeries::var(&f, Var::X).unwrap();
        let one = MultiSeries::one(&f);

        let g = geometric_substitute(Var::X, Var::Chi, &one.sub(&chi).unwrap()).unwrap();
        assert_eq!(g.to_string(), "x + x*χ + x*χ^2");
        assert_eq!(geometric_substitute(Var::X, Var::Chi, &one).unwrap(), x);

        // x / (1 - χ(1-x)) with x ≤ 2, χ ≤ 2
        let f = Frame::new(&[(Var::X, 2), (Var::Chi, 2)]);
        let chi = MultiSeries::var(&f, Var::Chi).unwrap();
        let x = MultiSeries::var(&f, Var::X).unwrap();
        let one = MultiSeries::one(&f);
        let factor = one.sub(&chi.mul(&one.sub(&x).unwrap()).unwrap()).unwrap();
        let g = geometric_substitute(Var::X, Var::Chi, &factor).unwrap();
        assert_eq!(g.coeff(&[(Var::X, 1)]), q(1, 1));
        assert_eq!(g.coeff(&[(Var::X, 1), (Var::Chi, 1)]), q(1, 1));
        assert_eq!(g.coeff(&[(Var::X, 2), (Var::Chi, 1)]), q(-1, 1));
        assert_eq!(g.coeff(&[(Var::X, 1), (Var::Chi, 2)]), q(1, 1));
        assert_eq!(g.coeff(&[(Var::X, 2), (Var::Chi, 2)]), q(-2, 1));
        assert_eq!(g.len(), 5);

        let bad = one.add(&x).unwrap();
        assert_eq!(
            geometric_substitute(Var::X, Var::Chi, &bad),
            Err(Error::NotADeformation(Var::Chi))
        );
    }

    #[test]
    fn exp_matches_factorials() {
        let e = MultiSeries::var(&fx(5), Var::X).unwrap().exp().unwrap();
        for k in 0..=5u32 {
            assert_eq!(e.coeff(&[(Var::X, k)]), crate::exactnum::factorial(k).recip());
        }
    }

    #[test]
    fn prefactor_multiply_bookkeeping() {
        let (a, b) = (q(1, 2), q(4, 3));
        let body = poly_x(3, &ints(&[1, 2]));
        let p = PrefactorSeries::new(body.clone(), &[(Var::Y, a.clone()), (Var::Z, b.clone())]);
        let down = p.prefactor_multiply(Var::Y, &q(-1, 1));
        assert_eq!(down.exponent(Var::Y), &a - 1);
        assert_eq!(down.body, body);
        assert_eq!(p.prefactor_multiply(Var::Y, &q(0, 1)), p);
        let round = p.prefactor_multiply(Var::Z, &q(1, 1)).prefactor_multiply(Var::Z, &q(-1, 1));
        assert_eq!(round, p);
    }

    #[test]
    fn prefactor_derivative_examples() {
        let a = q(1, 2);
        let p = PrefactorSeries::new(MultiSeries::one(&fx(2)), &[(Var::Y, a.clone())]);
        let d = p.prefactor_derivative(Var::Y).unwrap();
        assert_eq!(d.body, MultiSeries::constant(&fx(2), a.clone()));
        assert_eq!(d.exponent(Var::Y), &a - 1);

        let p = PrefactorSeries::new(poly_x(3, &ints(&[0, 0, 1])), &[(Var::Y, a.clone())]);
        let d = p.prefactor_derivative(Var::X).unwrap();
        assert_eq!(d.body, poly_x(2, &ints(&[0, 2])));
        assert_eq!(d.exponent(Var::Y), a);

        let b = q(4, 3);
        let fz = Frame::new(&[(Var::Z, 2)]);
        let body = MultiSeries::one(&fz).add(&MultiSeries::var(&fz, Var::Z).unwrap()).unwrap();
        let p = PrefactorSeries::new(body, &[(Var::Z, b.clone())]);
        let d = p.prefactor_derivative(Var::Z).unwrap();
        assert_eq!(d.exponent(Var::Z), &b - 1);
        assert_eq!(d.body.coeff(&[]), b);
        assert_eq!(d.body.coeff(&[(Var::Z, 1)]), &b + 1);
        assert_eq!(d.body.frame().cap(Var::Z), Some(1));

        assert_eq!(p.prefactor_derivative(Var::T), Err(Error::UnknownVariable(Var::T)));
    }

    #[test]
    fn rendering_is_graded_lex() {
        let f = Frame::new(&[(Var::X, 2), (Var::Y, 2)]);
        let s = MultiSeries::from_terms(
            &f,
            [
                (&[(Var::Y, 2)][..], q(1, 1)),
                (&[(Var::X, 1), (Var::Y, 1)][..], q(-3, 8)),
                (&[][..], q(1, 1)),
                (&[(Var::Y, 1)][..], q(1, 1)),
                (&[(Var::X, 1)][..], q(1, 1)),
                (&[(Var::X, 2)][..], q(2, 1)),
            ],
        )
        .unwrap();
        assert_eq!(s.to_string(), "1 + x + y + 2*x^2 - 3/8*x*y + y^2");
        assert_eq!(format!("{s:#}"), "1 + x + y + 2*x^2 - 3/8*x*y + y^2 [x≤2, y≤2]");
    }

    #[test]
    fn rename_and_slice() {
        let f = Frame::new(&[(Var::X, 2), (Var::Z, 2)]);
        let s = MultiSeries::from_terms(&f, [(&[(Var::X, 1), (Var::Z, 2)][..], q(3, 1))]).unwrap();
        let r = s.rename(Var::Z, Var::Chi).unwrap();
        assert_eq!(r.coeff(&[(Var::X, 1), (Var::Chi, 2)]), q(3, 1));
        let sl = r.slice(Var::Chi, 2).unwrap();
        assert_eq!(sl.coeff(&[(Var::X, 1)]), q(3, 1));
        assert!(r.slice(Var::Chi, 1).unwrap().is_zero());
    }
}
