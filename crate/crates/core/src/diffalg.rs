//! Commutative differential polynomials in the unknowns `u_m`, with
//! coefficients that are Laurent monomials in `x` times scalars in `Q(a)`.
//!
//! Derivation axes are `x`, `y = t2` and `t = t3`. A factor `u_m` carries a
//! multi-index of derivative orders along these axes. Terms are kept in a
//! canonical order (total factor degree, then the sorted factor list, then
//! the power of `x`), so structural equality is mathematical equality.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{q, q_str, Q};
use crate::scalar::{ParamScalar, QPoly};

pub const AXIS_X: usize = 0;
pub const AXIS_Y: usize = 1;
pub const AXIS_T: usize = 2;
const AXIS_NAMES: [char; 3] = ['x', 'y', 't'];

/// `∂^deriv u_m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Factor {
    pub m: u32,
    pub deriv: [u32; 3],
}

impl Factor {
    pub fn new(m: u32, deriv: [u32; 3]) -> Self {
        Factor { m, deriv }
    }

    pub fn bumped(self, axis: usize) -> Self {
        let mut d = self.deriv;
        d[axis] += 1;
        Factor {
            m: self.m,
            deriv: d,
        }
    }
}

impl Ord for Factor {
    fn cmp(&self, o: &Self) -> Ordering {
        self.m
            .cmp(&o.m)
            .then(o.deriv[AXIS_T].cmp(&self.deriv[AXIS_T]))
            .then(o.deriv[AXIS_Y].cmp(&self.deriv[AXIS_Y]))
            .then(self.deriv[AXIS_X].cmp(&o.deriv[AXIS_X]))
    }
}

impl PartialOrd for Factor {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "u{}", self.m)?;
        if self.deriv.iter().any(|&d| d > 0) {
            f.write_str("_")?;
            for (axis, &k) in self.deriv.iter().enumerate() {
                for _ in 0..k {
                    write!(f, "{}", AXIS_NAMES[axis])?;
                }
            }
        }
        Ok(())
    }
}

/// Monomial shape: `x^xpow · Π factors`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonoKey {
    pub factors: Vec<Factor>,
    pub xpow: i32,
}

impl Ord for MonoKey {
    fn cmp(&self, o: &Self) -> Ordering {
        self.factors
            .len()
            .cmp(&o.factors.len())
            .then_with(|| self.factors.cmp(&o.factors))
            .then(self.xpow.cmp(&o.xpow))
    }
}

impl PartialOrd for MonoKey {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl MonoKey {
    fn times(&self, o: &MonoKey) -> MonoKey {
        let mut factors = Vec::with_capacity(self.factors.len() + o.factors.len());
        factors.extend_from_slice(&self.factors);
        factors.extend_from_slice(&o.factors);
        factors.sort();
        MonoKey {
            factors,
            xpow: self.xpow + o.xpow,
        }
    }
}

/// A single term, as produced by [`DiffPoly::terms`].
#[derive(Clone, Debug, PartialEq)]
pub struct DiffMonomial {
    pub coef: ParamScalar,
    pub xpow: i32,
    pub factors: Vec<Factor>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct DiffPoly {
    terms: BTreeMap<MonoKey, ParamScalar>,
}

impl DiffPoly {
    /// Canonical form of a raw term list: sorts factors, merges like terms
    /// and drops zero coefficients.
    pub fn normalize<I>(raw: I) -> Self
    where
        I: IntoIterator<Item = (ParamScalar, i32, Vec<Factor>)>,
    {
        let mut p = DiffPoly::zero();
        for (c, xpow, mut factors) in raw {
            factors.sort();
            p.add_term(MonoKey { factors, xpow }, c);
        }
        p
    }

    fn add_term(&mut self, key: MonoKey, c: ParamScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(e) => {
                *e = e.clone() + c;
                if e.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    pub fn constant(c: ParamScalar) -> Self {
        Self::normalize([(c, 0, vec![])])
    }

    pub fn int(n: i64) -> Self {
        Self::constant(ParamScalar::int(n))
    }

    pub fn rational(c: Q) -> Self {
        Self::constant(ParamScalar::rational(c))
    }

    /// The deformation parameter `a` as a constant polynomial.
    pub fn param() -> Self {
        Self::constant(ParamScalar::theta())
    }

    pub fn x_pow(e: i32) -> Self {
        Self::normalize([(ParamScalar::one(), e, vec![])])
    }

    /// `∂_x^dx ∂_y^dy ∂_t^dt u_m`.
    pub fn var(m: u32, deriv: [u32; 3]) -> Self {
        Self::normalize([(ParamScalar::one(), 0, vec![Factor::new(m, deriv)])])
    }

    /// `u_m` differentiated `k` times in `x`.
    pub fn u(m: u32, k: u32) -> Self {
        Self::var(m, [k, 0, 0])
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

    pub fn terms(&self) -> impl Iterator<Item = DiffMonomial> + '_ {
        self.terms.iter().map(|(k, c)| DiffMonomial {
            coef: c.clone(),
            xpow: k.xpow,
            factors: k.factors.clone(),
        })
    }

    pub fn raw_terms(&self) -> impl Iterator<Item = (&MonoKey, &ParamScalar)> {
        self.terms.iter()
    }

    /// Coefficient of `x^xpow · Π factors`.
    pub fn coeff_of(&self, xpow: i32, factors: &[Factor]) -> ParamScalar {
        let mut f = factors.to_vec();
        f.sort();
        self.terms
            .get(&MonoKey { factors: f, xpow })
            .cloned()
            .unwrap_or_else(ParamScalar::zero)
    }

    /// Largest unknown index occurring, if any.
    pub fn max_unknown(&self) -> Option<u32> {
        self.terms
            .keys()
            .flat_map(|k| k.factors.iter().map(|f| f.m))
            .max()
    }

    pub fn mentions(&self, m: u32) -> bool {
        self.terms
            .keys()
            .any(|k| k.factors.iter().any(|f| f.m == m))
    }

    /// Constant-in-unknowns part restricted to `x`-powers: true when no
    /// unknown occurs.
    pub fn is_x_laurent(&self) -> bool {
        self.terms.keys().all(|k| k.factors.is_empty())
    }

    pub fn scale(&self, c: &ParamScalar) -> Self {
        if c.is_zero() {
            return DiffPoly::zero();
        }
        DiffPoly {
            terms: self.terms.iter().map(|(k, x)| (k.clone(), x * c)).collect(),
        }
    }

    /// Multiply by `x^e`.
    pub fn shift_x(&self, e: i32) -> Self {
        DiffPoly {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| {
                    (
                        MonoKey {
                            factors: k.factors.clone(),
                            xpow: k.xpow + e,
                        },
                        c.clone(),
                    )
                })
                .collect(),
        }
    }

    /// Total derivative in `x`.
    pub fn ddx(&self) -> Self {
        let mut out = DiffPoly::zero();
        for (k, c) in &self.terms {
            if k.xpow != 0 {
                out.add_term(
                    MonoKey {
                        factors: k.factors.clone(),
                        xpow: k.xpow - 1,
                    },
                    c.clone() * ParamScalar::int(k.xpow as i64),
                );
            }
            for i in 0..k.factors.len() {
                let mut f = k.factors.clone();
                f[i] = f[i].bumped(AXIS_X);
                f.sort();
                out.add_term(
                    MonoKey {
                        factors: f,
                        xpow: k.xpow,
                    },
                    c.clone(),
                );
            }
        }
        out
    }

    /// Derivative along `axis`; `x` is independent of `y` and `t`.
    pub fn d(&self, axis: usize) -> Self {
        if axis == AXIS_X {
            return self.ddx();
        }
        let mut out = DiffPoly::zero();
        for (k, c) in &self.terms {
            for i in 0..k.factors.len() {
                let mut f = k.factors.clone();
                f[i] = f[i].bumped(axis);
                f.sort();
                out.add_term(
                    MonoKey {
                        factors: f,
                        xpow: k.xpow,
                    },
                    c.clone(),
                );
            }
        }
        out
    }

    /// Apply `∂_x^d[0] ∂_y^d[1] ∂_t^d[2]`.
    pub fn derive(&self, deriv: [u32; 3]) -> Self {
        let mut p = self.clone();
        for (axis, &k) in deriv.iter().enumerate() {
            for _ in 0..k {
                p = p.d(axis);
            }
        }
        p
    }

    pub fn ddx_n(&self, k: u32) -> Self {
        self.derive([k, 0, 0])
    }

    /// Replace factors by polynomials. `rule` returns `None` to keep a factor.
    pub fn substitute(&self, rule: &dyn Fn(&Factor) -> Option<DiffPoly>) -> Self {
        let mut out = DiffPoly::zero();
        for (k, c) in &self.terms {
            let mut acc = DiffPoly::normalize([(c.clone(), k.xpow, vec![])]);
            for f in &k.factors {
                let r = rule(f).unwrap_or_else(|| DiffPoly::var(f.m, f.deriv));
                acc = &acc * &r;
                if acc.is_zero() {
                    break;
                }
            }
            out = out + acc;
        }
        out
    }

    /// Specialize the parameter `a` to a rational value.
    pub fn subs_param(&self, value: &Q) -> Self {
        Self::normalize(self.terms.iter().map(|(k, c)| {
            let v = c
                .eval(value)
                .expect("parameter value is a pole of a coefficient");
            (ParamScalar::rational(v), k.xpow, k.factors.clone())
        }))
    }

    /// `∂/∂t_n` using the evolution equations `∂_n u_m = rhs`, prolonged to
    /// derivatives of `u_m` by commuting `∂_n` with the axis derivations.
    pub fn dtn(&self, n: u32, eqs: &[HierarchyEquation]) -> Result<Self> {
        let mut out = DiffPoly::zero();
        for (k, c) in &self.terms {
            for i in 0..k.factors.len() {
                let f = k.factors[i];
                let eq = eqs
                    .iter()
                    .find(|e| e.n == n && e.m == f.m)
                    .ok_or(Error::MissingEquation { n, m: f.m })?;
                let mut rest = k.factors.clone();
                rest.remove(i);
                let cofactor = DiffPoly::normalize([(c.clone(), k.xpow, rest)]);
                out = out + &cofactor * &eq.rhs.derive(f.deriv);
            }
        }
        Ok(out)
    }

    /// An `x`-antiderivative `Q` with `ddx(Q) = self`, found by peeling off
    /// the factor of highest `x`-order; `None` if the peeling gets stuck.
    pub fn integrate_x(&self) -> Option<DiffPoly> {
        let mut rest = self.clone();
        let mut acc = DiffPoly::zero();
        while let Some((key, c)) = rest
            .terms
            .iter()
            .max_by_key(|(k, _)| k.factors.iter().map(|f| f.deriv[AXIS_X]).max().unwrap_or(0))
            .map(|(k, c)| (k.clone(), c.clone()))
        {
            if key.xpow != 0 {
                return None;
            }
            let (idx, top) = key
                .factors
                .iter()
                .enumerate()
                .max_by_key(|(_, f)| f.deriv[AXIS_X])?;
            if top.deriv[AXIS_X] == 0 || key.factors.iter().filter(|f| *f == top).count() != 1 {
                return None;
            }
            let mut factors = key.factors.clone();
            let mut lowered = *top;
            lowered.deriv[AXIS_X] -= 1;
            factors[idx] = lowered;
            let cand = DiffPoly::normalize([(c, 0, factors)]);
            rest = &rest - &cand.ddx();
            acc = acc + cand;
            if acc.len() > 64 {
                return None;
            }
        }
        Some(acc)
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl Zero for DiffPoly {
    fn zero() -> Self {
        DiffPoly {
            terms: BTreeMap::new(),
        }
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for DiffPoly {
    fn one() -> Self {
        DiffPoly::int(1)
    }
}

impl Add<&DiffPoly> for &DiffPoly {
    type Output = DiffPoly;
    fn add(self, o: &DiffPoly) -> DiffPoly {
        let mut out = self.clone();
        for (k, c) in &o.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }
}

impl Add for DiffPoly {
    type Output = DiffPoly;
    fn add(mut self, o: DiffPoly) -> DiffPoly {
        for (k, c) in o.terms {
            self.add_term(k, c);
        }
        self
    }
}

impl Neg for DiffPoly {
    type Output = DiffPoly;
    fn neg(self) -> DiffPoly {
        DiffPoly {
            terms: self.terms.into_iter().map(|(k, c)| (k, -c)).collect(),
        }
    }
}

impl Neg for &DiffPoly {
    type Output = DiffPoly;
    fn neg(self) -> DiffPoly {
        -self.clone()
    }
}

impl Sub<&DiffPoly> for &DiffPoly {
    type Output = DiffPoly;
    fn sub(self, o: &DiffPoly) -> DiffPoly {
        self + &(-o)
    }
}

impl Sub for DiffPoly {
    type Output = DiffPoly;
    fn sub(self, o: DiffPoly) -> DiffPoly {
        self + (-o)
    }
}

impl Mul<&DiffPoly> for &DiffPoly {
    type Output = DiffPoly;
    fn mul(self, o: &DiffPoly) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (ka, ca) in &self.terms {
            for (kb, cb) in &o.terms {
                out.add_term(ka.times(kb), ca * cb);
            }
        }
        out
    }
}

impl Mul for DiffPoly {
    type Output = DiffPoly;
    fn mul(self, o: DiffPoly) -> DiffPoly {
        &self * &o
    }
}

impl Mul<i64> for DiffPoly {
    type Output = DiffPoly;
    fn mul(self, n: i64) -> DiffPoly {
        self.scale(&ParamScalar::int(n))
    }
}

impl Mul<Q> for DiffPoly {
    type Output = DiffPoly;
    fn mul(self, c: Q) -> DiffPoly {
        self.scale(&ParamScalar::rational(c))
    }
}

fn render_term(key: &MonoKey, c: &ParamScalar, first: bool) -> String {
    let negative = c.is_negative_display();
    let mag = if negative { -c.clone() } else { c.clone() };
    let mut parts: Vec<String> = Vec::new();
    let has_rest = key.xpow != 0 || !key.factors.is_empty();
    match mag.as_rational() {
        Some(r) if r == q(1) && has_rest => {}
        Some(r) => parts.push(q_str(&r)),
        None => {
            if mag.is_compound() {
                parts.push(format!("({mag})"));
            } else {
                parts.push(mag.to_string());
            }
        }
    }
    match key.xpow {
        0 => {}
        1 => parts.push("x".into()),
        e => parts.push(format!("x^{e}")),
    }
    let mut i = 0;
    while i < key.factors.len() {
        let f = key.factors[i];
        let mut j = i;
        while j < key.factors.len() && key.factors[j] == f {
            j += 1;
        }
        if j - i == 1 {
            parts.push(f.to_string());
        } else {
            parts.push(format!("{f}^{}", j - i));
        }
        i = j;
    }
    let body = parts.join("*");
    match (first, negative) {
        (true, false) => body,
        (true, true) => format!("-{body}"),
        (false, false) => format!(" + {body}"),
        (false, true) => format!(" - {body}"),
    }
}

impl fmt::Display for DiffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (k, c)) in self.terms.iter().enumerate() {
            f.write_str(&render_term(k, c, i == 0))?;
        }
        Ok(())
    }
}

/// `∂_n u_m = rhs`.
#[derive(Clone, Debug, PartialEq)]
pub struct HierarchyEquation {
    pub n: u32,
    pub m: u32,
    pub rhs: DiffPoly,
}

impl fmt::Display for HierarchyEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "d/dt{} u{} = {}", self.n, self.m, self.rhs)
    }
}

/// `lhs = rhs` between differential polynomials.
#[derive(Clone, Debug, PartialEq)]
pub struct Equation {
    pub lhs: DiffPoly,
    pub rhs: DiffPoly,
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

/// `(inner)_x = rhs`, the printed shape of KP-type equations.
#[derive(Clone, Debug, PartialEq)]
pub struct DerivedEquation {
    pub inner: DiffPoly,
    pub rhs: DiffPoly,
}

impl DerivedEquation {
    pub fn expanded(&self) -> Equation {
        Equation {
            lhs: self.inner.ddx(),
            rhs: self.rhs.clone(),
        }
    }

    pub fn subs_param(&self, value: &Q) -> Self {
        DerivedEquation {
            inner: self.inner.subs_param(value),
            rhs: self.rhs.subs_param(value),
        }
    }
}

impl fmt::Display for DerivedEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})_x = {}", self.inner, self.rhs)
    }
}

/// JSON-friendly view of a polynomial: one entry per term.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermRecord {
    /// Coefficient numerator and denominator in `a`, each as a list of
    /// exact rationals indexed by power.
    pub num: Vec<String>,
    pub den: Vec<String>,
    pub xpow: i32,
    /// `[m, dx, dy, dt]` per factor.
    pub factors: Vec<[u32; 4]>,
}

impl DiffPoly {
    pub fn to_records(&self) -> Vec<TermRecord> {
        self.terms
            .iter()
            .map(|(k, c)| TermRecord {
                num: c.numer().coeffs().iter().map(q_str).collect(),
                den: c.denom().coeffs().iter().map(q_str).collect(),
                xpow: k.xpow,
                factors: k
                    .factors
                    .iter()
                    .map(|f| [f.m, f.deriv[0], f.deriv[1], f.deriv[2]])
                    .collect(),
            })
            .collect()
    }

    pub fn from_records(recs: &[TermRecord]) -> Option<Self> {
        let parse = |v: &[String]| -> Option<QPoly> {
            Some(QPoly::new(
                v.iter()
                    .map(|s| crate::field::parse_q(s))
                    .collect::<Option<Vec<_>>>()?,
            ))
        };
        let mut raw = Vec::new();
        for r in recs {
            let den = parse(&r.den)?;
            if num_traits::Zero::is_zero(&den) {
                return None;
            }
            raw.push((
                ParamScalar::new(parse(&r.num)?, den),
                r.xpow,
                r.factors
                    .iter()
                    .map(|f| Factor::new(f[0], [f[1], f[2], f[3]]))
                    .collect(),
            ));
        }
        Some(DiffPoly::normalize(raw))
    }
}
