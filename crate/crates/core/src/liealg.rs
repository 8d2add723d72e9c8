//! First-order differential operators with Laurent-monomial coefficients:
//! the raising/lowering and maintenance operators of the 1F1 and Ψ2 basis
//! families, their action on realized basis elements, exact commutators,
//! span membership, and the one-parameter flows they generate.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{basis_constant_ratio, ExactScalar};
use crate::hypfun::{f11_series, psi2_series, Params1F1, ParamsPsi2};
use crate::series::{MultiSeries, PrefactorSeries, Var};

/// Laurent monomial: variable → nonzero integer exponent.
pub type Monomial = BTreeMap<Var, i32>;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct TermKey {
    derivative: Option<Var>,
    monomial: Vec<(Var, i32)>,
}

impl TermKey {
    fn new(monomial: &Monomial, derivative: Option<Var>) -> Self {
        TermKey {
            derivative,
            monomial: monomial.iter().filter(|(_, &k)| k != 0).map(|(&v, &k)| (v, k)).collect(),
        }
    }

    fn monomial(&self) -> Monomial {
        self.monomial.iter().copied().collect()
    }
}

/// One term `coefficient · monomial · ∂_derivative` (no derivative: a
/// multiplication operator).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpTerm {
    pub coefficient: ExactScalar,
    pub monomial: Monomial,
    pub derivative: Option<Var>,
}

/// First-order operator stored as merged terms in canonical order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DiffOperator {
    terms: BTreeMap<TermKey, ExactScalar>,
}

fn mono_mul(a: &[(Var, i32)], b: &[(Var, i32)]) -> Monomial {
    let mut m: Monomial = a.iter().copied().collect();
    for &(v, k) in b {
        *m.entry(v).or_insert(0) += k;
    }
    m.retain(|_, k| *k != 0);
    m
}

fn mono_string(m: &[(Var, i32)]) -> String {
    m.iter()
        .map(|&(v, k)| if k == 1 { v.to_string() } else { format!("{v}^{k}") })
        .collect::<Vec<_>>()
        .join("*")
}

impl DiffOperator {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn scalar(c: ExactScalar) -> Self {
        Self::term(c, &[], None)
    }

    pub fn term(c: ExactScalar, monomial: &[(Var, i32)], derivative: Option<Var>) -> Self {
        let mut op = Self::zero();
        op.accumulate(TermKey::new(&monomial.iter().copied().collect(), derivative), c);
        op
    }

    fn accumulate(&mut self, key: TermKey, c: ExactScalar) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(key.clone()).or_insert_with(ExactScalar::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
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

    pub fn terms(&self) -> impl Iterator<Item = OpTerm> + '_ {
        self.terms.iter().map(|(k, c)| OpTerm {
            coefficient: c.clone(),
            monomial: k.monomial(),
            derivative: k.derivative,
        })
    }

    pub fn add(&self, other: &DiffOperator) -> DiffOperator {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.accumulate(k.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &DiffOperator) -> DiffOperator {
        self.add(&other.scale(&-ExactScalar::one()))
    }

    pub fn scale(&self, k: &ExactScalar) -> DiffOperator {
        let mut out = Self::zero();
        for (key, c) in &self.terms {
            out.accumulate(key.clone(), c * k);
        }
        out
    }

    /// Multiplies every coefficient by a Laurent monomial.
    pub fn times_monomial(&self, m: &[(Var, i32)]) -> DiffOperator {
        let mut out = Self::zero();
        for (key, c) in &self.terms {
            let mono = mono_mul(&key.monomial, m);
            out.accumulate(TermKey::new(&mono, key.derivative), c.clone());
        }
        out
    }

    /// Exact commutator `self∘other − other∘self`. Second-order parts must
    /// cancel; a surviving one is an internal error.
    pub fn commutator(&self, other: &DiffOperator) -> Result<DiffOperator> {
        let mut first = SecondOrder::compose(self, other);
        first.subtract(&SecondOrder::compose(other, self));
        first.into_first_order()
    }

    /// Coefficient functions `ξ_v` of `∂_v` and the zeroth-order part `μ`,
    /// evaluated at a floating point.
    pub fn evaluate_parts(&self, point: &BTreeMap<Var, f64>) -> Result<(BTreeMap<Var, f64>, f64)> {
        let mut xi = BTreeMap::new();
        let mut mu = 0.0;
        for (key, c) in &self.terms {
            let mut val = c.to_f64();
            for &(v, k) in &key.monomial {
                let x = *point.get(&v).ok_or(Error::UnknownVariable(v))?;
                val *= x.powi(k);
            }
            match key.derivative {
                Some(v) => *xi.entry(v).or_insert(0.0) += val,
                None => mu += val,
            }
        }
        Ok((xi, mu))
    }

    pub fn variables(&self) -> Vec<Var> {
        let mut vs: Vec<Var> = self
            .terms
            .keys()
            .flat_map(|k| k.monomial.iter().map(|&(v, _)| v).chain(k.derivative))
            .collect();
        vs.sort();
        vs.dedup();
        vs
    }
}

/// Canonical rendering, e.g. `x*y*∂x + y^2*∂y - y^-1*x`.
impl fmt::Display for DiffOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (key, c)) in self.terms.iter().enumerate() {
            let negative = c < &ExactScalar::zero();
            let mag = c.abs();
            let mut factors = Vec::new();
            if !mag.is_one() {
                factors.push(mag.to_string());
            }
            if !key.monomial.is_empty() {
                factors.push(mono_string(&key.monomial));
            }
            if let Some(v) = key.derivative {
                factors.push(format!("∂{v}"));
            }
            if factors.is_empty() {
                factors.push("1".into());
            }
            let body = factors.join("*");
            match (i, negative) {
                (0, false) => write!(f, "{body}")?,
                (0, true) => write!(f, "-{body}")?,
                (_, false) => write!(f, " + {body}")?,
                (_, true) => write!(f, " - {body}")?,
            }
        }
        Ok(())
    }
}

/// Monomial and the (sorted) derivatives applied after it.
type SecondKey = (Vec<(Var, i32)>, Vec<Var>);

/// Operators with up to two derivatives, used only inside the commutator.
#[derive(Default)]
struct SecondOrder {
    terms: BTreeMap<SecondKey, ExactScalar>,
}

impl SecondOrder {
    fn push(&mut self, mono: Monomial, mut derivs: Vec<Var>, c: ExactScalar) {
        if c.is_zero() {
            return;
        }
        derivs.sort();
        let key = (mono.into_iter().collect::<Vec<_>>(), derivs);
        let slot = self.terms.entry(key.clone()).or_insert_with(ExactScalar::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    /// `A∘B` term by term: `c m ∂_v (c' m' ∂_w) = c c' m (∂_v m') ∂_w + c c' m m' ∂_v ∂_w`.
    fn compose(a: &DiffOperator, b: &DiffOperator) -> SecondOrder {
        let mut out = SecondOrder::default();
        for (ka, ca) in &a.terms {
            for (kb, cb) in &b.terms {
                let c = ca * cb;
                let mono = mono_mul(&ka.monomial, &kb.monomial);
                let inner: Vec<Var> = kb.derivative.into_iter().collect();
                match ka.derivative {
                    None => out.push(mono, inner, c),
                    Some(v) => {
                        let k = kb.monomial.iter().find(|(w, _)| *w == v).map_or(0, |&(_, k)| k);
                        if k != 0 {
                            let lowered = mono_mul(&mono.iter().map(|(&w, &e)| (w, e)).collect::<Vec<_>>(), &[(v, -1)]);
                            out.push(lowered, inner.clone(), &c * i64::from(k));
                        }
                        let mut both = inner;
                        both.push(v);
                        out.push(mono, both, c);
                    }
                }
            }
        }
        out
    }

    fn subtract(&mut self, other: &SecondOrder) {
        for ((mono, derivs), c) in &other.terms {
            self.push(mono.iter().copied().collect(), derivs.clone(), -c);
        }
    }

    fn into_first_order(self) -> Result<DiffOperator> {
        let mut out = DiffOperator::zero();
        let mut leftover = Vec::new();
        for ((mono, derivs), c) in self.terms {
            match derivs.as_slice() {
                [] => out.accumulate(TermKey { derivative: None, monomial: mono }, c),
                [v] => out.accumulate(TermKey { derivative: Some(*v), monomial: mono }, c),
                _ => leftover.push(format!("{c}*{}*∂{}∂{}", mono_string(&mono), derivs[0], derivs[1])),
            }
        }
        if leftover.is_empty() {
            Ok(out)
        } else {
            Err(Error::InternalSimplificationFailure(leftover.join(" + ")))
        }
    }
}

/// Result of testing span membership.
#[derive(Debug, Clone, PartialEq)]
pub enum SpanResult {
    InSpan(Vec<ExactScalar>),
    NotInSpan { residual: DiffOperator },
}

/// Expresses `op` as a rational combination of `basis`, or returns the
/// normal form of `op` modulo their span.
pub fn express_in_span(op: &DiffOperator, basis: &[DiffOperator]) -> SpanResult {
    // echelon vectors with their combination over the basis, reduced in
    // insertion order so later pivots never reintroduce earlier pivot keys
    let n = basis.len();
    let mut echelon: Vec<(TermKey, DiffOperator, Vec<ExactScalar>)> = Vec::new();
    let reduce = |v: &mut DiffOperator, combo: &mut Vec<ExactScalar>, echelon: &[(TermKey, DiffOperator, Vec<ExactScalar>)], sign: i64| {
        for (pivot, vec, pcombo) in echelon {
            if let Some(c) = v.terms.get(pivot).cloned() {
                let f = c / &vec.terms[pivot];
                *v = v.sub(&vec.scale(&f));
                for (slot, pc) in combo.iter_mut().zip(pcombo) {
                    *slot += &(&f * pc * sign);
                }
            }
        }
    };
    for (i, b) in basis.iter().enumerate() {
        let mut v = b.clone();
        let mut combo = vec![ExactScalar::zero(); n];
        combo[i] = ExactScalar::one();
        reduce(&mut v, &mut combo, &echelon, -1);
        if let Some(pivot) = v.terms.keys().next().cloned() {
            echelon.push((pivot, v, combo));
        }
    }
    let mut rem = op.clone();
    let mut coeffs = vec![ExactScalar::zero(); n];
    reduce(&mut rem, &mut coeffs, &echelon, 1);
    if rem.is_zero() {
        SpanResult::InSpan(coeffs)
    } else {
        SpanResult::NotInSpan { residual: rem }
    }
}

/// The two basis families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "f11")]
    F11,
    #[serde(rename = "psi2")]
    Psi2,
}

impl Family {
    pub const ALL: [Family; 2] = [Family::F11, Family::Psi2];

    pub fn name(self) -> &'static str {
        match self {
            Family::F11 => "f11",
            Family::Psi2 => "psi2",
        }
    }

    /// Variables the family's basis elements depend on.
    pub fn variables(self) -> &'static [Var] {
        match self {
            Family::F11 => &[Var::X, Var::Y, Var::Z],
            Family::Psi2 => &[Var::X, Var::Y, Var::Z, Var::U, Var::T],
        }
    }

    pub fn operators(self) -> &'static [OperatorId] {
        use OperatorId::*;
        match self {
            Family::F11 => &[Ea, EaPrime, Eb, EbPrime, Eab, Ia, Ib, Identity],
            Family::Psi2 => &[Ea, Eb, Ec, Eab, Eac, Ia, Ib, Ic, Identity],
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "f11" | "1F1" => Ok(Family::F11),
            "psi2" => Ok(Family::Psi2),
            other => Err(Error::UnknownId(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum OperatorId {
    #[serde(rename = "E_a")]
    Ea,
    #[serde(rename = "E_a'")]
    EaPrime,
    #[serde(rename = "E_b")]
    Eb,
    #[serde(rename = "E_b'")]
    EbPrime,
    #[serde(rename = "E_c")]
    Ec,
    #[serde(rename = "E_ab")]
    Eab,
    #[serde(rename = "E_ac")]
    Eac,
    #[serde(rename = "I_a")]
    Ia,
    #[serde(rename = "I_b")]
    Ib,
    #[serde(rename = "I_c")]
    Ic,
    #[serde(rename = "I")]
    Identity,
}

impl OperatorId {
    pub const ALL: [OperatorId; 11] = [
        OperatorId::Ea,
        OperatorId::EaPrime,
        OperatorId::Eb,
        OperatorId::EbPrime,
        OperatorId::Ec,
        OperatorId::Eab,
        OperatorId::Eac,
        OperatorId::Ia,
        OperatorId::Ib,
        OperatorId::Ic,
        OperatorId::Identity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            OperatorId::Ea => "E_a",
            OperatorId::EaPrime => "E_a'",
            OperatorId::Eb => "E_b",
            OperatorId::EbPrime => "E_b'",
            OperatorId::Ec => "E_c",
            OperatorId::Eab => "E_ab",
            OperatorId::Eac => "E_ac",
            OperatorId::Ia => "I_a",
            OperatorId::Ib => "I_b",
            OperatorId::Ic => "I_c",
            OperatorId::Identity => "I",
        }
    }
}

impl fmt::Display for OperatorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for OperatorId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        OperatorId::ALL
            .into_iter()
            .find(|o| o.name() == s || o.name().replace('_', "") == s)
            .ok_or_else(|| Error::UnknownId(s.to_string()))
    }
}

fn q(n: i64) -> ExactScalar {
    ExactScalar::from_int(n)
}

fn t(c: i64, mono: &[(Var, i32)], d: Option<Var>) -> DiffOperator {
    DiffOperator::term(q(c), mono, d)
}

fn sum(parts: &[DiffOperator]) -> DiffOperator {
    parts.iter().fold(DiffOperator::zero(), |acc, p| acc.add(p))
}

/// The operator installed for `(family, id)`, or `None` if the family has no
/// such operator.
pub fn operator(family: Family, id: OperatorId) -> Option<DiffOperator> {
    use OperatorId::*;
    use Var::*;
    let op = match (family, id) {
        // y(x∂x + y∂y): the form whose action raises a
        (Family::F11, Ea) => sum(&[t(1, &[(X, 1), (Y, 1)], Some(X)), t(1, &[(Y, 2)], Some(Y))]),
        // (1/y)(x∂x − y∂y + z∂z − x)
        (Family::F11, EaPrime) => sum(&[t(1, &[(X, 1)], Some(X)), t(-1, &[(Y, 1)], Some(Y)), t(1, &[(Z, 1)], Some(Z)), t(-1, &[(X, 1)], None)])
            .times_monomial(&[(Y, -1)]),
        // z(∂x − 1)
        (Family::F11, Eb) => sum(&[t(1, &[(Z, 1)], Some(X)), t(-1, &[(Z, 1)], None)]),
        // (1/z)(x∂x + z∂z − 1)
        (Family::F11, EbPrime) => sum(&[t(1, &[(X, 1)], Some(X)), t(1, &[(Z, 1)], Some(Z)), t(-1, &[], None)])
            .times_monomial(&[(Z, -1)]),
        (Family::F11, Eab) => t(1, &[(Y, 1), (Z, 1)], Some(X)),
        (Family::F11, Ia) => t(1, &[(Y, 1)], Some(Y)),
        (Family::F11, Ib) => t(1, &[(Z, 1)], Some(Z)),
        // z(x∂x + y∂y + z∂z)
        (Family::Psi2, Ea) => sum(&[t(1, &[(X, 1)], Some(X)), t(1, &[(Y, 1)], Some(Y)), t(1, &[(Z, 1)], Some(Z))])
            .times_monomial(&[(Z, 1)]),
        // (1/u)(x∂x + u∂u − 1)
        (Family::Psi2, Eb) => sum(&[t(1, &[(X, 1)], Some(X)), t(1, &[(U, 1)], Some(U)), t(-1, &[], None)])
            .times_monomial(&[(U, -1)]),
        // (1/t)(y∂y + t∂t − 1)
        (Family::Psi2, Ec) => sum(&[t(1, &[(Y, 1)], Some(Y)), t(1, &[(T, 1)], Some(T)), t(-1, &[], None)])
            .times_monomial(&[(T, -1)]),
        (Family::Psi2, Eab) => t(1, &[(U, 1), (Z, 1)], Some(X)),
        (Family::Psi2, Eac) => t(1, &[(Z, 1), (T, 1)], Some(Y)),
        (Family::Psi2, Ia) => t(1, &[(Z, 1)], Some(Z)),
        (Family::Psi2, Ib) => t(1, &[(U, 1)], Some(U)),
        (Family::Psi2, Ic) => t(1, &[(T, 1)], Some(T)),
        (_, Identity) => DiffOperator::scalar(q(1)),
        _ => return None,
    };
    Some(op)
}

/// E_a of the 1F1 family as typeset, `y(∂x + y∂y)`; kept only so the
/// discrepancy report can show that it does not raise `a`.
pub fn displayed_f11_ea() -> DiffOperator {
    use Var::*;
    sum(&[t(1, &[(Y, 1)], Some(X)), t(1, &[(Y, 2)], Some(Y))])
}

/// Every installed operator, keyed by family and id.
pub fn build_catalogue() -> BTreeMap<(Family, OperatorId), DiffOperator> {
    Family::ALL
        .iter()
        .flat_map(|&f| f.operators().iter().map(move |&id| ((f, id), operator(f, id).unwrap())))
        .collect()
}

/// A concrete basis family: `1F1(a;b;x) y^a z^b` (without the gamma
/// normalization constant) or `Ψ2(a;b,c;x,y) z^a u^b t^c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BasisFamily {
    F11Normalized(Params1F1),
    Psi2(ParamsPsi2),
}

/// Parameter shift `(da, db, dc)`; `dc` is always zero for 1F1.
pub type Shift = (i64, i64, i64);

impl BasisFamily {
    pub fn family(&self) -> Family {
        match self {
            BasisFamily::F11Normalized(_) => Family::F11,
            BasisFamily::Psi2(_) => Family::Psi2,
        }
    }

    pub fn shifted(&self, (da, db, dc): Shift) -> Result<BasisFamily> {
        Ok(match self {
            BasisFamily::F11Normalized(p) => BasisFamily::F11Normalized(p.shifted(da, db)?),
            BasisFamily::Psi2(p) => BasisFamily::Psi2(p.shifted(da, db, dc)?),
        })
    }

    /// Series realization with body caps `order` in every body variable.
    pub fn realize(&self, order: u32) -> PrefactorSeries {
        match self {
            BasisFamily::F11Normalized(p) => PrefactorSeries::new(
                f11_series(p, order),
                &[(Var::Y, p.a().clone()), (Var::Z, p.b().clone())],
            ),
            BasisFamily::Psi2(p) => PrefactorSeries::new(
                psi2_series(p, order, order),
                &[(Var::Z, p.a().clone()), (Var::U, p.b().clone()), (Var::T, p.c().clone())],
            ),
        }
    }

    pub fn params_string(&self) -> String {
        match self {
            BasisFamily::F11Normalized(p) => p.to_string(),
            BasisFamily::Psi2(p) => p.to_string(),
        }
    }
}

/// Applies an operator term by term to a prefactor series. Monomial factors
/// in body variables multiply the body; all others go to the prefactor.
pub fn apply(op: &DiffOperator, f: &PrefactorSeries) -> Result<PrefactorSeries> {
    let mut acc: Option<PrefactorSeries> = None;
    for term in op.terms() {
        let mut g = match term.derivative {
            Some(v) => f.prefactor_derivative(v)?,
            None => f.clone(),
        };
        for (&v, &k) in &term.monomial {
            if g.body.frame().contains(v) {
                if k < 0 {
                    return Err(Error::NegativeBodyPower(v));
                }
                g.body = g.body.mul_var_power(v, k as u32)?;
            } else {
                g = g.prefactor_multiply(v, &q(i64::from(k)));
            }
        }
        let g = g.scale(&term.coefficient);
        acc = Some(match acc {
            None => g,
            Some(prev) if prev.body.is_zero() => g.truncate(&g.body.frame().meet(prev.body.frame())?)?,
            Some(prev) if g.body.is_zero() => prev.truncate(&prev.body.frame().meet(g.body.frame())?)?,
            Some(prev) => prev.add_aligned(&g)?,
        });
    }
    Ok(acc.unwrap_or_else(|| PrefactorSeries::new(MultiSeries::zero(f.body.frame()), &[]).prefactor_like(f)))
}

impl PrefactorSeries {
    fn prefactor_like(mut self, other: &PrefactorSeries) -> PrefactorSeries {
        for (v, e) in other.prefactor() {
            self = self.prefactor_multiply(*v, e);
        }
        self
    }
}

/// Expected action `op f = coefficient · f_shifted` on a basis family.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ActionRule {
    pub operator: OperatorId,
    pub family: Family,
    pub shift: Shift,
    pub coefficient: ExactScalar,
}

/// Action coefficient as printed for the gamma-normalized 1F1 basis, as a
/// function of `(a, b)`, with the parameter shift.
fn f11_printed_action(id: OperatorId, a: &ExactScalar, b: &ExactScalar) -> Option<(ExactScalar, Shift)> {
    use OperatorId::*;
    Some(match id {
        Ea => (b - a - 1, (1, 0, 0)),
        EaPrime => (a - 1, (-1, 0, 0)),
        Eb => (q(-1), (0, 1, 0)),
        EbPrime => (b - a - 1, (0, -1, 0)),
        Eab => (q(1), (1, 1, 0)),
        Ia => (a.clone(), (0, 0, 0)),
        Ib => (b.clone(), (0, 0, 0)),
        Identity => (q(1), (0, 0, 0)),
        _ => return None,
    })
}

/// Shift and coefficient of `op` on `family`. For 1F1 the printed
/// gamma-normalized coefficient is converted to the unnormalized basis by
/// the constant ratio `C(a+da, b+db) / C(a, b)`.
pub fn expected_action(id: OperatorId, family: &BasisFamily) -> Result<ActionRule> {
    use OperatorId::*;
    let unknown = || Error::UnknownId(format!("{id} on {}", family.family()));
    let (coefficient, shift) = match family {
        BasisFamily::F11Normalized(p) => {
            let (a, b) = (p.a(), p.b());
            let (printed, shift) = f11_printed_action(id, a, b).ok_or_else(unknown)?;
            let ratio = basis_constant_ratio(a, b, shift.0, shift.1)?;
            (printed * ratio, shift)
        }
        BasisFamily::Psi2(p) => {
            let (a, b, c) = (p.a(), p.b(), p.c());
            match id {
                Ea => (a.clone(), (1, 0, 0)),
                Eb => (b - 1, (0, -1, 0)),
                Ec => (c - 1, (0, 0, -1)),
                Eab => (a / b, (1, 1, 0)),
                Eac => (a / c, (1, 0, 1)),
                Ia => (a.clone(), (0, 0, 0)),
                Ib => (b.clone(), (0, 0, 0)),
                Ic => (c.clone(), (0, 0, 0)),
                Identity => (q(1), (0, 0, 0)),
                _ => return Err(unknown()),
            }
        }
    };
    family.shifted(shift)?;
    Ok(ActionRule {
        operator: id,
        family: family.family(),
        shift,
        coefficient,
    })
}

/// First coefficient where two sides disagree.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TermWitness {
    pub monomial: String,
    pub lhs: ExactScalar,
    pub rhs: ExactScalar,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ActionReport {
    pub rule: ActionRule,
    pub order: u32,
    pub trusted_cap: u32,
    pub witness: Option<TermWitness>,
}

impl ActionReport {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

/// Compares `op` applied to the realized family against the expected rule,
/// up to the caps the application leaves trusted.
pub fn verify_action(id: OperatorId, family: &BasisFamily, order: u32) -> Result<ActionReport> {
    let op = operator(family.family(), id).ok_or_else(|| Error::UnknownId(id.to_string()))?;
    verify_action_with(&op, expected_action(id, family)?, family, order)
}

/// Same as [`verify_action`] for an arbitrary operator against a given rule.
pub fn verify_action_with(op: &DiffOperator, rule: ActionRule, family: &BasisFamily, order: u32) -> Result<ActionReport> {
    let lhs = apply(op, &family.realize(order))?;
    let rhs = family.shifted(rule.shift)?.realize(order).scale(&rule.coefficient);
    let frame = lhs.body.frame().clone();
    let trusted_cap = frame.caps().iter().copied().min().unwrap_or(0);
    let rhs_body = rhs.body.truncate(&frame)?;
    let witness = if !lhs.body.is_zero() && !rhs_body.is_zero() && !lhs.same_prefactor(&rhs) {
        Some(TermWitness {
            monomial: format!("prefactor {} vs {}", lhs.prefactor_string(), rhs.prefactor_string()),
            lhs: lhs.body.constant_term(),
            rhs: rhs_body.constant_term(),
        })
    } else {
        let diff = lhs.body.sub(&rhs_body)?;
        diff.graded_terms().first().map(|(e, _)| TermWitness {
            monomial: diff.monomial_string(e),
            lhs: lhs.body.coeff_exps(e),
            rhs: rhs_body.coeff_exps(e),
        })
    };
    Ok(ActionReport {
        rule,
        order,
        trusted_cap,
        witness,
    })
}

/// Characteristic flow of a first-order operator `Σ ξ_v ∂_v + μ`:
/// `dv/dα = ξ_v`, and the multiplier obeys `dM/dα = μ M` with `M(0) = 1`.
#[derive(Debug, Clone)]
pub struct FlowSpec {
    pub family: Family,
    pub operator: OperatorId,
    pub generator: DiffOperator,
}

/// Start point of a flow; unused coordinates are ignored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlowPoint {
    pub x: ExactScalar,
    pub y: ExactScalar,
    pub z: ExactScalar,
    pub u: ExactScalar,
    pub t: ExactScalar,
}

impl FlowPoint {
    pub fn new(coords: [ExactScalar; 5]) -> Self {
        let [x, y, z, u, t] = coords;
        FlowPoint { x, y, z, u, t }
    }

    fn get(&self, v: Var) -> f64 {
        match v {
            Var::X => self.x.to_f64(),
            Var::Y => self.y.to_f64(),
            Var::Z => self.z.to_f64(),
            Var::U => self.u.to_f64(),
            Var::T => self.t.to_f64(),
            Var::Chi => 0.0,
        }
    }
}

/// Denominators closer to zero than this are treated as singular.
pub const DEFAULT_SINGULAR_MARGIN: f64 = 1e-6;

impl FlowSpec {
    pub fn new(family: Family, id: OperatorId) -> Result<Self> {
        let generator = operator(family, id).ok_or_else(|| Error::UnknownId(format!("{id} on {family}")))?;
        Ok(FlowSpec {
            family,
            operator: id,
            generator,
        })
    }

    pub fn all() -> Vec<FlowSpec> {
        Family::ALL
            .iter()
            .flat_map(|&f| f.operators().iter().map(move |&id| FlowSpec::new(f, id).unwrap()))
            .collect()
    }

    /// Right-hand sides of the characteristic system, one line per variable
    /// plus the multiplier.
    pub fn characteristic_system(&self) -> Vec<String> {
        let mut lines = Vec::new();
        let mut mu = DiffOperator::zero();
        let mut xi: BTreeMap<Var, DiffOperator> = BTreeMap::new();
        for term in self.generator.terms() {
            let mono: Vec<(Var, i32)> = term.monomial.iter().map(|(&v, &k)| (v, k)).collect();
            let part = DiffOperator::term(term.coefficient.clone(), &mono, None);
            match term.derivative {
                Some(v) => {
                    let e = xi.entry(v).or_default();
                    *e = e.add(&part);
                }
                None => mu = mu.add(&part),
            }
        }
        for &v in self.family.variables() {
            let rhs = xi.get(&v).map_or("0".to_string(), |o| o.to_string());
            lines.push(format!("d{v}/dα = {rhs}"));
        }
        lines.push(format!("dM/dα = ({mu})·M"));
        lines
    }

    fn state(&self, p: &FlowPoint) -> Vec<f64> {
        let mut s: Vec<f64> = self.family.variables().iter().map(|&v| p.get(v)).collect();
        s.push(1.0);
        s
    }

    fn derivative(&self, s: &[f64]) -> Result<Vec<f64>> {
        let vars = self.family.variables();
        let point: BTreeMap<Var, f64> = vars.iter().copied().zip(s.iter().copied()).collect();
        let (xi, mu) = self.generator.evaluate_parts(&point)?;
        let mut out: Vec<f64> = vars.iter().map(|v| xi.get(v).copied().unwrap_or(0.0)).collect();
        out.push(mu * s[vars.len()]);
        Ok(out)
    }

    /// Closed-form flow `(variables..., multiplier)` at parameter `alpha`.
    pub fn closed_form(&self, p: &FlowPoint, alpha: f64, margin: f64) -> Result<Vec<f64>> {
        use OperatorId::*;
        let guard = |name: &str, d: f64| -> Result<f64> {
            if d.abs() < margin {
                Err(Error::SingularFlow(format!("{name} = {d} at α = {alpha}")))
            } else {
                Ok(d)
            }
        };
        let (x, y, z, u, t) = (p.get(Var::X), p.get(Var::Y), p.get(Var::Z), p.get(Var::U), p.get(Var::T));
        let e = alpha.exp();
        let out = match (self.family, self.operator) {
            (Family::F11, Ea) => {
                let s = guard("1 - αy", 1.0 - alpha * y)?;
                vec![x / s, y / s, z, 1.0]
            }
            (Family::F11, EaPrime) => {
                let y0 = guard("y", y)?;
                let s = guard("y - α", y - alpha)?;
                vec![x * y0 / s, s, z * y0 / s, (-x * alpha / s).exp()]
            }
            (Family::F11, Eb) => vec![x + alpha * z, y, z, (-alpha * z).exp()],
            (Family::F11, EbPrime) => {
                let z0 = guard("z", z)?;
                let s = guard("z + α", z + alpha)?;
                vec![x * s / z0, y, s, z0 / s]
            }
            (Family::F11, Eab) => vec![x + alpha * y * z, y, z, 1.0],
            (Family::F11, Ia) => vec![x, y * e, z, 1.0],
            (Family::F11, Ib) => vec![x, y, z * e, 1.0],
            (Family::F11, Identity) => vec![x, y, z, e],
            (Family::Psi2, Ea) => {
                let s = guard("1 - αz", 1.0 - alpha * z)?;
                vec![x / s, y / s, z / s, u, t, 1.0]
            }
            (Family::Psi2, Eb) => {
                let u0 = guard("u", u)?;
                let s = guard("u + α", u + alpha)?;
                vec![x * s / u0, y, z, s, t, u0 / s]
            }
            (Family::Psi2, Ec) => {
                let t0 = guard("t", t)?;
                let s = guard("t + α", t + alpha)?;
                vec![x, y * s / t0, z, u, s, t0 / s]
            }
            (Family::Psi2, Eab) => vec![x + alpha * u * z, y, z, u, t, 1.0],
            (Family::Psi2, Eac) => vec![x, y + alpha * z * t, z, u, t, 1.0],
            (Family::Psi2, Ia) => vec![x, y, z * e, u, t, 1.0],
            (Family::Psi2, Ib) => vec![x, y, z, u * e, t, 1.0],
            (Family::Psi2, Ic) => vec![x, y, z, u, t * e, 1.0],
            (Family::Psi2, Identity) => vec![x, y, z, u, t, e],
            (f, id) => return Err(Error::UnknownId(format!("{id} on {f}"))),
        };
        Ok(out)
    }

    /// Classical RK4 trajectory `(α_k, state_k)` on `[0, alpha_max]` with
    /// `ceil(alpha_max / step)` equal steps.
    pub fn rk4_trajectory(&self, p: &FlowPoint, alpha_max: f64, step: f64) -> Result<Vec<(f64, Vec<f64>)>> {
        if !step.is_finite() || step <= 0.0 || !alpha_max.is_finite() {
            return Err(Error::Config(format!("bad flow step {step} or horizon {alpha_max}")));
        }
        let n = (alpha_max.abs() / step).ceil() as usize;
        let h = if n == 0 { 0.0 } else { alpha_max / n as f64 };
        let mut s = self.state(p);
        let mut out = vec![(0.0, s.clone())];
        let axpy = |s: &[f64], k: &[f64], c: f64| -> Vec<f64> { s.iter().zip(k).map(|(a, b)| a + c * b).collect() };
        for i in 0..n {
            let k1 = self.derivative(&s)?;
            let k2 = self.derivative(&axpy(&s, &k1, h / 2.0))?;
            let k3 = self.derivative(&axpy(&s, &k2, h / 2.0))?;
            let k4 = self.derivative(&axpy(&s, &k3, h))?;
            for j in 0..s.len() {
                s[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
            }
            out.push(((i + 1) as f64 * h, s.clone()));
        }
        Ok(out)
    }
}

/// Max over the RK4 grid of the absolute deviation from the closed-form flow,
/// over every variable and the multiplier.
pub fn flow_check(spec: &FlowSpec, start: &FlowPoint, alpha_max: f64, step: f64) -> Result<f64> {
    flow_check_with_margin(spec, start, alpha_max, step, DEFAULT_SINGULAR_MARGIN)
}

pub fn flow_check_with_margin(spec: &FlowSpec, start: &FlowPoint, alpha_max: f64, step: f64, margin: f64) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for (alpha, state) in spec.rk4_trajectory(start, alpha_max, step)? {
        let exact = spec.closed_form(start, alpha, margin)?;
        for (a, b) in state.iter().zip(&exact) {
            worst = worst.max((a - b).abs());
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> ExactScalar {
        ExactScalar::new(n, d)
    }

    fn f11(a: ExactScalar, b: ExactScalar) -> BasisFamily {
        BasisFamily::F11Normalized(Params1F1::new(a, b).unwrap())
    }

    fn psi(a: ExactScalar, b: ExactScalar, c: ExactScalar) -> BasisFamily {
        BasisFamily::Psi2(ParamsPsi2::new(a, b, c).unwrap())
    }

    #[test]
    fn catalogue_examples() {
        let cat = build_catalogue();
        assert_eq!(cat.len(), 17);
        let eab = &cat[&(Family::F11, OperatorId::Eab)];
        let terms: Vec<OpTerm> = eab.terms().collect();
        assert_eq!(terms.len(), 1);
        assert_eq!(terms[0].coefficient, r(1, 1));
        assert_eq!(terms[0].monomial, [(Var::Y, 1), (Var::Z, 1)].into_iter().collect());
        assert_eq!(terms[0].derivative, Some(Var::X));

        assert_eq!(cat[&(Family::Psi2, OperatorId::Identity)], DiffOperator::scalar(r(1, 1)));

        let ebp = &cat[&(Family::F11, OperatorId::EbPrime)];
        let expected = DiffOperator::term(r(1, 1), &[(Var::X, 1), (Var::Z, -1)], Some(Var::X))
            .add(&DiffOperator::term(r(1, 1), &[], Some(Var::Z)))
            .add(&DiffOperator::term(r(-1, 1), &[(Var::Z, -1)], None));
        assert_eq!(ebp, &expected);
        assert_eq!(ebp.to_string(), "-z^-1 + x*z^-1*∂x + ∂z");
    }

    #[test]
    fn apply_maintenance_picks_exponent() {
        let a = r(1, 2);
        let f = PrefactorSeries::new(MultiSeries::one(&crate::series::Frame::new(&[(Var::X, 3)])), &[(Var::Z, a.clone())]);
        let g = apply(&operator(Family::Psi2, OperatorId::Ia).unwrap(), &f).unwrap();
        assert_eq!(g.body.constant_term(), a);
        assert_eq!(g.exponent(Var::Z), a);
    }

    #[test]
    fn apply_eab_raises_both() {
        let fam = f11(r(1, 2), r(4, 3));
        let g = apply(&operator(Family::F11, OperatorId::Eab).unwrap(), &fam.realize(6)).unwrap();
        let want = fam.shifted((1, 1, 0)).unwrap().realize(6).scale(&r(3, 8));
        assert_eq!(g.body.frame().cap(Var::X), Some(5));
        assert_eq!(g, want.truncate(g.body.frame()).unwrap());
    }

    #[test]
    fn apply_zero_operator() {
        let fam = f11(r(1, 2), r(4, 3));
        let g = apply(&DiffOperator::zero(), &fam.realize(4)).unwrap();
        assert!(g.body.is_zero());
    }

    #[test]
    fn expected_action_examples() {
        let rule = expected_action(OperatorId::Ea, &psi(r(1, 2), r(4, 3), r(5, 7))).unwrap();
        assert_eq!((rule.coefficient, rule.shift), (r(1, 2), (1, 0, 0)));
        let rule = expected_action(OperatorId::EbPrime, &f11(r(1, 2), r(4, 3))).unwrap();
        assert_eq!((rule.coefficient, rule.shift), (r(1, 3), (0, -1, 0)));
        let rule = expected_action(OperatorId::Eab, &f11(r(1, 2), r(4, 3))).unwrap();
        assert_eq!((rule.coefficient, rule.shift), (r(3, 8), (1, 1, 0)));
    }

    #[test]
    fn normalized_f11_coefficients_have_closed_forms() {
        let (a, b) = (r(2, 5), r(9, 4));
        let fam = f11(a.clone(), b.clone());
        let want = [
            (OperatorId::Ea, a.clone()),
            (OperatorId::EaPrime, &b - &a),
            (OperatorId::Eb, (&a - &b) / &b),
            (OperatorId::EbPrime, &b - 1),
            (OperatorId::Eab, &a / &b),
        ];
        for (id, c) in want {
            assert_eq!(expected_action(id, &fam).unwrap().coefficient, c, "{id}");
        }
    }

    #[test]
    fn verify_action_examples() {
        assert!(verify_action(OperatorId::Ea, &f11(r(1, 2), r(4, 3)), 12).unwrap().passed());
        assert!(verify_action(OperatorId::Eac, &psi(r(1, 2), r(4, 3), r(5, 7)), 8).unwrap().passed());
        let rep = verify_action(OperatorId::Identity, &psi(r(1, 2), r(4, 3), r(5, 7)), 5).unwrap();
        assert!(rep.passed());
        assert_eq!((rep.rule.coefficient.clone(), rep.rule.shift), (r(1, 1), (0, 0, 0)));
    }

    #[test]
    fn displayed_ea_fails_its_action() {
        let fam = f11(r(1, 2), r(4, 3));
        let rule = expected_action(OperatorId::Ea, &fam).unwrap();
        let rep = verify_action_with(&displayed_f11_ea(), rule, &fam, 8).unwrap();
        assert!(!rep.passed());
    }

    #[test]
    fn verify_action_degenerate_shift() {
        // b - 1 = 0 is not an admissible lower parameter
        let fam = f11(r(1, 2), r(1, 1));
        assert!(matches!(
            verify_action(OperatorId::EbPrime, &fam, 6),
            Err(Error::DegenerateParameter(_))
        ));
    }

    #[test]
    fn commutator_examples() {
        let cat = build_catalogue();
        let ea = &cat[&(Family::Psi2, OperatorId::Ea)];
        let ia = &cat[&(Family::Psi2, OperatorId::Ia)];
        assert!(ea.commutator(ea).unwrap().is_zero());
        assert_eq!(&ia.commutator(ea).unwrap(), ea);
        let id = &cat[&(Family::F11, OperatorId::Identity)];
        for op in cat.values() {
            assert!(id.commutator(op).unwrap().is_zero());
        }
    }

    #[test]
    fn span_examples() {
        let cat = build_catalogue();
        let basis: Vec<DiffOperator> = Family::Psi2.operators().iter().map(|&id| cat[&(Family::Psi2, id)].clone()).collect();
        let ea_index = Family::Psi2.operators().iter().position(|&o| o == OperatorId::Ea).unwrap();

        let mut unit = vec![r(0, 1); basis.len()];
        unit[ea_index] = r(1, 1);
        assert_eq!(express_in_span(&basis[ea_index], &basis), SpanResult::InSpan(unit.clone()));
        assert_eq!(express_in_span(&DiffOperator::zero(), &basis), SpanResult::InSpan(vec![r(0, 1); basis.len()]));

        let ia = &cat[&(Family::Psi2, OperatorId::Ia)];
        let br = ia.commutator(&basis[ea_index]).unwrap();
        assert_eq!(express_in_span(&br, &basis), SpanResult::InSpan(unit));

        let outside = DiffOperator::term(r(1, 1), &[(Var::X, 2)], Some(Var::X));
        assert!(matches!(express_in_span(&outside, &basis), SpanResult::NotInSpan { .. }));
    }

    #[test]
    fn span_combination_reconstructs_operator() {
        let cat = build_catalogue();
        let basis: Vec<DiffOperator> = Family::F11.operators().iter().map(|&id| cat[&(Family::F11, id)].clone()).collect();
        let target = basis[0].scale(&r(3, 2)).add(&basis[4].scale(&r(-1, 7))).add(&basis[7]);
        let SpanResult::InSpan(c) = express_in_span(&target, &basis) else { panic!("not in span") };
        let rebuilt = basis.iter().zip(&c).fold(DiffOperator::zero(), |acc, (b, k)| acc.add(&b.scale(k)));
        assert_eq!(rebuilt, target);
    }

    fn start() -> FlowPoint {
        FlowPoint::new([r(1, 1), r(2, 1), r(3, 1), r(1, 2), r(1, 3)])
    }

    #[test]
    fn flow_examples() {
        let mut p = start();
        p.y = r(1, 1);
        let ea = FlowSpec::new(Family::F11, OperatorId::Ea).unwrap();
        let closed = ea.closed_form(&p, 0.1, DEFAULT_SINGULAR_MARGIN).unwrap();
        assert!((closed[1] - 10.0 / 9.0).abs() < 1e-15);
        assert!(flow_check(&ea, &p, 0.1, 1e-3).unwrap() <= 1e-10);

        let eb = FlowSpec::new(Family::F11, OperatorId::Eb).unwrap();
        assert_eq!(flow_check(&eb, &start(), 0.0, 1e-3).unwrap(), 0.0);

        let eab = FlowSpec::new(Family::F11, OperatorId::Eab).unwrap();
        let closed = eab.closed_form(&start(), 0.1, DEFAULT_SINGULAR_MARGIN).unwrap();
        assert!((closed[0] - 1.6).abs() < 1e-15);
        assert!(flow_check(&eab, &start(), 0.1, 1e-3).unwrap() <= 1e-12);
    }

    #[test]
    fn flow_identity_at_zero() {
        for spec in FlowSpec::all() {
            let c = spec.closed_form(&start(), 0.0, DEFAULT_SINGULAR_MARGIN).unwrap();
            let s = spec.state(&start());
            assert_eq!(c, s, "{} {}", spec.family, spec.operator);
        }
    }

    #[test]
    fn flow_detects_singularity() {
        let mut p = start();
        p.y = r(10, 1);
        let ea = FlowSpec::new(Family::F11, OperatorId::Ea).unwrap();
        assert!(matches!(flow_check(&ea, &p, 0.1, 1e-3), Err(Error::SingularFlow(_))));
    }

    #[test]
    fn characteristic_system_rendering() {
        let spec = FlowSpec::new(Family::F11, OperatorId::EbPrime).unwrap();
        let sys = spec.characteristic_system();
        assert_eq!(sys[0], "dx/dα = x*z^-1");
        assert_eq!(sys[2], "dz/dα = 1");
        assert_eq!(sys[3], "dM/dα = (-z^-1)·M");
    }
}
