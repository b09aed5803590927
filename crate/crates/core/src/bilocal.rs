//! Truncated double Laurent series `k((t))((u))` with the rank-2 valuation
//! `(ν, ν̄)`, series roots, and echelon bases of subspaces spanned by them.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::echelon::SubspaceEchelon;
use crate::error::{Error, Result};
use crate::field::{q, q_str, Field, Q};
use crate::laurent::{padd, Laurent, EXACT};

pub type TSeries = Laurent<Q>;

/// `t^i u^j`, ordered by `j` then `i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Monomial2 {
    pub i: i32,
    pub j: i32,
}

impl Monomial2 {
    pub fn new(i: i32, j: i32) -> Self {
        Monomial2 { i, j }
    }
}

impl Ord for Monomial2 {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        (self.j, self.i).cmp(&(o.j, o.i))
    }
}

impl PartialOrd for Monomial2 {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Display for Monomial2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t^{} u^{}", self.i, self.j)
    }
}

/// Box of monomials `imin ≤ i ≤ imax`, `jmin ≤ j ≤ jmax`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub imin: i32,
    pub imax: i32,
    pub jmin: i32,
    pub jmax: i32,
}

impl Window {
    pub fn new(imin: i32, imax: i32, jmin: i32, jmax: i32) -> Self {
        Window {
            imin,
            imax,
            jmin,
            jmax,
        }
    }

    pub fn contains(&self, m: Monomial2) -> bool {
        (self.imin..=self.imax).contains(&m.i) && (self.jmin..=self.jmax).contains(&m.j)
    }
}

/// Default precision: rows `u^0..u^8`, each through `t^48`.
pub const DEFAULT_J: i32 = 8;
pub const DEFAULT_T: i32 = 48;

/// `Σ_j f_j(t) u^j`. Rows `j ≥ uprec` are unknown; a missing row below
/// `uprec` is zero. Each row carries its own `t`-precision.
#[derive(Clone, Debug, PartialEq)]
pub struct DoubleSeries {
    rows: BTreeMap<i32, TSeries>,
    uprec: i32,
}

impl DoubleSeries {
    pub fn new<I: IntoIterator<Item = (i32, TSeries)>>(rows: I, uprec: i32) -> Self {
        let mut map: BTreeMap<i32, TSeries> = BTreeMap::new();
        for (j, r) in rows {
            if j >= uprec {
                continue;
            }
            let r = match map.remove(&j) {
                Some(prev) => prev.add(&r),
                None => r,
            };
            map.insert(j, r);
        }
        map.retain(|_, r| !r.is_exact_zero());
        DoubleSeries { rows: map, uprec }
    }

    pub fn exact<I: IntoIterator<Item = (i32, TSeries)>>(rows: I) -> Self {
        Self::new(rows, EXACT)
    }

    pub fn zero() -> Self {
        Self::exact([])
    }

    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        Self::exact([(0, Laurent::constant(c))])
    }

    /// `c · t^i u^j`.
    pub fn monomial(c: Q, i: i32, j: i32) -> Self {
        Self::exact([(j, Laurent::monomial(c, i))])
    }

    pub fn t() -> Self {
        Self::monomial(Q::one(), 1, 0)
    }

    pub fn u() -> Self {
        Self::monomial(Q::one(), 0, 1)
    }

    /// A series in `t` alone.
    pub fn from_t(f: TSeries) -> Self {
        Self::exact([(0, f)])
    }

    /// From integer terms `(c, i, j)`.
    pub fn from_terms(terms: &[(i64, i32, i32)]) -> Self {
        let mut acc = DoubleSeries::zero();
        for &(c, i, j) in terms {
            acc = acc.add(&Self::monomial(q(c), i, j));
        }
        acc
    }

    pub fn uprec(&self) -> i32 {
        self.uprec
    }

    pub fn rows(&self) -> impl Iterator<Item = (i32, &TSeries)> {
        self.rows.iter().map(|(j, r)| (*j, r))
    }

    /// Row `j`, or `None` beyond the `u`-precision.
    pub fn row(&self, j: i32) -> Option<TSeries> {
        if j >= self.uprec {
            return None;
        }
        Some(self.rows.get(&j).cloned().unwrap_or_else(Laurent::zero))
    }

    pub fn coeff(&self, i: i32, j: i32) -> Option<Q> {
        self.row(j)?.coeff(i)
    }

    fn low(&self) -> i32 {
        self.rows.keys().next().copied().unwrap_or(self.uprec)
    }

    /// Smallest `t`-precision over the rows below `uprec`.
    pub fn tprec(&self) -> i32 {
        self.rows.values().map(|r| r.prec()).min().unwrap_or(EXACT)
    }

    pub fn is_exact(&self) -> bool {
        self.uprec == EXACT && self.rows.values().all(|r| r.is_exact())
    }

    pub fn truncate(&self, uprec: i32, tprec: i32) -> Self {
        DoubleSeries::new(
            self.rows.iter().map(|(j, r)| (*j, r.truncate(tprec))),
            self.uprec.min(uprec),
        )
    }

    pub fn add(&self, o: &Self) -> Self {
        DoubleSeries::new(
            self.rows
                .iter()
                .chain(o.rows.iter())
                .map(|(j, r)| (*j, r.clone())),
            self.uprec.min(o.uprec),
        )
    }

    pub fn neg(&self) -> Self {
        DoubleSeries {
            rows: self.rows.iter().map(|(j, r)| (*j, r.neg())).collect(),
            uprec: self.uprec,
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &Q) -> Self {
        DoubleSeries::new(self.rows.iter().map(|(j, r)| (*j, r.scale(c))), self.uprec)
    }

    /// Multiply by `t^i u^j`.
    pub fn shift(&self, i: i32, j: i32) -> Self {
        DoubleSeries::new(
            self.rows.iter().map(|(k, r)| (k + j, r.shift(i))),
            padd(self.uprec, j),
        )
    }

    pub fn mul(&self, o: &Self) -> Self {
        let uprec = padd(self.uprec, o.low()).min(padd(o.uprec, self.low()));
        let mut rows: BTreeMap<i32, TSeries> = BTreeMap::new();
        for (ja, ra) in &self.rows {
            for (jb, rb) in &o.rows {
                let j = ja + jb;
                if j >= uprec {
                    break;
                }
                let p = ra.mul(rb);
                let slot = rows.entry(j).or_insert_with(Laurent::zero);
                *slot = slot.add(&p);
            }
        }
        DoubleSeries::new(rows, uprec)
    }

    /// Multiplicative inverse with `u`-rows capped at `ucap` and each
    /// `t`-series at `tcap`.
    pub fn inverse(&self, ucap: i32, tcap: i32) -> Result<Self> {
        let (nu, lead) = match self.rows.iter().next() {
            Some((j, r)) if !r.is_zero_known() => (*j, r.clone()),
            _ => return Err(Error::NotAUnit),
        };
        let g0 = lead.inverse(tcap).ok_or(Error::NotAUnit)?;
        let uprec = padd(self.uprec, -2 * nu).min(ucap);
        let mut g: Vec<TSeries> = vec![g0.clone()];
        let mut n = 1;
        while padd(-nu, n) < uprec {
            let mut acc = Laurent::zero();
            for k in 1..=n {
                if let Some(f) = self.rows.get(&(nu + k)) {
                    acc = acc.add(&f.mul(&g[(n - k) as usize]));
                }
            }
            g.push(acc.mul(&g0).neg());
            n += 1;
        }
        Ok(DoubleSeries::new(
            g.into_iter().enumerate().map(|(k, r)| (k as i32 - nu, r)),
            uprec,
        ))
    }

    pub fn div(&self, o: &Self, ucap: i32, tcap: i32) -> Result<Self> {
        Ok(self.mul(&o.inverse(ucap, tcap)?))
    }

    pub fn pow(&self, n: i32, ucap: i32, tcap: i32) -> Result<Self> {
        let base = if n < 0 {
            self.inverse(ucap, tcap)?
        } else {
            self.clone()
        };
        let mut acc = DoubleSeries::one();
        for _ in 0..n.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    /// Square root with constant term `+1` of a series `1 + …` with
    /// `ν = 0` and row 0 of the form `1 + O(t)`.
    pub fn sqrt_unit(&self, ucap: i32, tcap: i32) -> Result<Self> {
        if self.low() < 0 {
            return Err(Error::NotUnitOne);
        }
        let f0 = self.row(0).ok_or(Error::NotUnitOne)?;
        let g0 = f0.sqrt_one(tcap).ok_or(Error::NotUnitOne)?;
        let half_inv = g0
            .inverse(tcap)
            .expect("square root with constant term 1 is a unit")
            .scale(&Q::new(1.into(), 2.into()));
        let uprec = self.uprec.min(ucap);
        let mut g: Vec<TSeries> = vec![g0];
        let mut n = 1;
        while n < uprec {
            let mut acc = self.rows.get(&n).cloned().unwrap_or_else(Laurent::zero);
            for i in 1..n {
                acc = acc.sub(&g[i as usize].mul(&g[(n - i) as usize]));
            }
            g.push(acc.mul(&half_inv));
            n += 1;
        }
        Ok(DoubleSeries::new(
            g.into_iter().enumerate().map(|(k, r)| (k as i32, r)),
            uprec,
        ))
    }

    /// Leading monomial and its coefficient under the order `(j, i)`.
    pub fn leading_term(&self) -> Result<(Monomial2, Q)> {
        for (j, r) in &self.rows {
            match r.leading() {
                Some((i, c)) => return Ok((Monomial2::new(i, *j), c.clone())),
                None => return Err(Error::ZeroWithinPrecision),
            }
        }
        Err(Error::ZeroWithinPrecision)
    }

    pub fn leading(&self) -> Result<Monomial2> {
        Ok(self.leading_term()?.0)
    }

    pub fn nu(&self) -> Result<i32> {
        Ok(self.leading()?.j)
    }

    pub fn nubar(&self) -> Result<i32> {
        Ok(self.leading()?.i)
    }

    /// Equality on everything both sides know.
    pub fn agrees_with(&self, o: &Self) -> bool {
        let uprec = self.uprec.min(o.uprec);
        let keys: std::collections::BTreeSet<i32> = self
            .rows
            .keys()
            .chain(o.rows.keys())
            .copied()
            .filter(|j| *j < uprec)
            .collect();
        keys.into_iter()
            .all(|j| self.row(j).unwrap().agrees_with(&o.row(j).unwrap()))
    }

    /// Exponent map `j → i → "p/q"` for serialization.
    pub fn to_map(&self) -> BTreeMap<i32, BTreeMap<i32, String>> {
        self.rows
            .iter()
            .map(|(j, r)| (*j, r.terms().map(|(i, c)| (i, q_str(c))).collect()))
            .collect()
    }
}

impl fmt::Display for DoubleSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (j, r) in &self.rows {
            let body = r.fmt_with("t");
            let single = r.num_terms() <= 1 && r.is_exact();
            parts.push(match j {
                0 => body,
                _ => {
                    let u = if *j == 1 {
                        "u".to_string()
                    } else {
                        format!("u^{j}")
                    };
                    if body == "1" {
                        u
                    } else if single {
                        format!("{body}*{u}")
                    } else {
                        format!("({body})*{u}")
                    }
                }
            });
        }
        if self.uprec != EXACT {
            parts.push(format!("O(u^{})", self.uprec));
        }
        if parts.is_empty() {
            return f.write_str("0");
        }
        f.write_str(&parts.join(" + "))
    }
}

/// Evaluates `Σ c_k y^k`.
pub fn eval_poly(poly: &[DoubleSeries], y: &DoubleSeries) -> DoubleSeries {
    let mut acc = DoubleSeries::zero();
    for c in poly.iter().rev() {
        acc = acc.mul(y).add(c);
    }
    acc
}

fn derivative_poly(poly: &[DoubleSeries]) -> Vec<DoubleSeries> {
    poly.iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c.scale(&q(k as i64)))
        .collect()
}

fn row0_poly(poly: &[DoubleSeries]) -> Vec<TSeries> {
    poly.iter()
        .map(|c| c.row(0).unwrap_or_else(Laurent::zero))
        .collect()
}

fn eval_t(poly: &[TSeries], y: &TSeries) -> TSeries {
    let mut acc = Laurent::zero();
    for c in poly.iter().rev() {
        acc = acc.mul(y).add(c);
    }
    acc
}

fn t_valuation(f: &TSeries) -> i32 {
    f.valuation().unwrap_or(f.prec())
}

/// The root `y ≡ seed (mod u)` of `Σ poly[k] y^k = 0`, lifted first in `t`
/// by Newton's method and then row by row in `u`. Returns rows `0..=jmax`,
/// each known as far as the arithmetic certifies (at most `tmax`).
pub fn solve_branch(
    poly: &[DoubleSeries],
    seed: &TSeries,
    jmax: i32,
    tmax: i32,
) -> Result<DoubleSeries> {
    let p0 = row0_poly(poly);
    let dp = derivative_poly(poly);
    let dp0 = row0_poly(&dp);
    let seed = seed.truncate(EXACT);
    let value = eval_t(&p0, &seed);
    let slope = eval_t(&dp0, &seed);
    if slope.is_zero_known() || t_valuation(&value) <= 2 * t_valuation(&slope) {
        return Err(Error::NotSimpleRoot);
    }
    let target = tmax + 1;
    let cap = target + 2 * (t_valuation(&seed).abs() + t_valuation(&slope).abs()) + 8;

    // Newton in k((t)): |root − y| = |P(y)/P'(y)| under the Hensel condition.
    let mut y = seed;
    let mut y0 = None;
    for _ in 0..64 {
        let v = eval_t(&p0, &y);
        let d = eval_t(&dp0, &y).inverse(cap).ok_or(Error::NotSimpleRoot)?;
        let step = v.mul(&d);
        // Under the Hensel condition the root differs from y by a series of
        // the same valuation as the step.
        if t_valuation(&step) >= target {
            let prec = t_valuation(&step).min(target);
            y0 = Some(Laurent::from_terms(
                y.terms().map(|(e, c)| (e, c.clone())),
                prec,
            ));
            break;
        }
        let next = y.sub(&step).truncate(cap);
        y = Laurent::from_terms(next.terms().map(|(e, c)| (e, c.clone())), EXACT);
    }
    let y0 = y0.ok_or(Error::NotConverged(64))?;

    let slope0 = eval_t(&dp0, &y0);
    let slope_inv = slope0.inverse(cap).ok_or(Error::NotSimpleRoot)?;
    let mut sol = DoubleSeries::new([(0, y0)], 1);
    for n in 1..=jmax {
        let trial = DoubleSeries::new(sol.rows.clone(), n + 1);
        let residual = eval_poly(poly, &trial)
            .row(n)
            .ok_or_else(|| Error::PrecisionExhausted(format!("row {n} of the residual")))?;
        let yn = residual.mul(&slope_inv).neg().truncate(target);
        let mut rows = sol.rows.clone();
        rows.insert(n, yn);
        sol = DoubleSeries::new(rows, n + 1);
    }
    Ok(sol)
}

/// Reduced echelon basis of a span of double series, with pivots at leading
/// monomials. Vectors are truncated to rows `j ≤ jmax` and `t`-exponents
/// `i ≤ imax` of the window; pivots below `imin` are kept for reduction.
#[derive(Clone, Debug, PartialEq)]
pub struct EchelonBasis2 {
    vectors: BTreeMap<Monomial2, DoubleSeries>,
    window: Window,
}

enum Lead {
    Zero,
    At(Monomial2, Q),
}

fn lead_in(v: &DoubleSeries, w: &Window) -> Result<Lead> {
    for j in v.rows.keys().copied().chain(std::iter::once(v.uprec)) {
        if j > w.jmax {
            return Ok(Lead::Zero);
        }
        if j >= v.uprec {
            return Err(Error::PrecisionExhausted(format!(
                "u-precision {} below window row {}",
                v.uprec, w.jmax
            )));
        }
        let r = &v.rows[&j];
        match r.leading() {
            Some((i, c)) => return Ok(Lead::At(Monomial2::new(i, j), c.clone())),
            None if r.prec() > w.imax => continue,
            None => {
                return Err(Error::PrecisionExhausted(format!(
                    "row {j} cancels to O(t^{}) inside the window",
                    r.prec()
                )))
            }
        }
    }
    Ok(Lead::Zero)
}

impl EchelonBasis2 {
    pub fn new(gens: &[DoubleSeries], window: Window) -> Result<Self> {
        let mut basis = EchelonBasis2 {
            vectors: BTreeMap::new(),
            window,
        };
        for g in gens {
            basis.insert(g)?;
        }
        Ok(basis)
    }

    fn cut(&self, v: &DoubleSeries) -> DoubleSeries {
        v.truncate(self.window.jmax + 1, self.window.imax + 1)
    }

    fn reduce(&self, v: &DoubleSeries) -> Result<DoubleSeries> {
        let mut v = self.cut(v);
        loop {
            match lead_in(&v, &self.window)? {
                Lead::Zero => return Ok(v),
                Lead::At(m, c) => match self.vectors.get(&m) {
                    Some(b) => v = v.sub(&b.scale(&c)),
                    None => break,
                },
            }
        }
        // Clear the remaining pivot positions above the leading monomial.
        let pivots: Vec<Monomial2> = self.vectors.keys().copied().collect();
        for p in pivots {
            if let Some(c) = v.coeff(p.i, p.j) {
                if !c.is_zero() {
                    v = v.sub(&self.vectors[&p].scale(&c));
                }
            }
        }
        Ok(v)
    }

    /// Adds a generator; returns the new pivot, if any.
    pub fn insert(&mut self, g: &DoubleSeries) -> Result<Option<Monomial2>> {
        let v = self.reduce(g)?;
        let Lead::At(p, c) = lead_in(&v, &self.window)? else {
            return Ok(None);
        };
        let v = v.scale(&c.inv());
        for b in self.vectors.values_mut() {
            if let Some(x) = b.coeff(p.i, p.j) {
                if !x.is_zero() {
                    *b = b.sub(&v.scale(&x));
                }
            }
        }
        self.vectors.insert(p, v);
        Ok(Some(p))
    }

    /// Whether `v` lies in the span, as far as the window decides.
    pub fn contains(&self, v: &DoubleSeries) -> Result<bool> {
        Ok(matches!(
            lead_in(&self.reduce(v)?, &self.window)?,
            Lead::Zero
        ))
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    /// All pivots, including those outside the window.
    pub fn pivots(&self) -> Vec<Monomial2> {
        self.vectors.keys().copied().collect()
    }

    pub fn vectors(&self) -> impl Iterator<Item = (&Monomial2, &DoubleSeries)> {
        self.vectors.iter()
    }
}

/// Pivot monomials inside the window, sorted by `(j, i)`.
pub fn support(b: &EchelonBasis2) -> Vec<Monomial2> {
    b.vectors
        .keys()
        .copied()
        .filter(|m| b.window.contains(*m))
        .collect()
}

/// `W(n)`: the `uⁿ`-coefficients of elements with `ν ≥ n`, as a subspace of
/// `k((t))` on the `t`-range of the window.
pub fn graded_piece(b: &EchelonBasis2, n: i32) -> Result<SubspaceEchelon<Q>> {
    let w = b.window;
    if n > w.jmax || n < w.jmin {
        return Err(Error::PrecisionExhausted(format!(
            "row {n} outside window rows [{}, {}]",
            w.jmin, w.jmax
        )));
    }
    let rows: Vec<TSeries> = b
        .vectors
        .iter()
        .filter(|(p, _)| p.j == n)
        .map(|(_, v)| v.row(n).unwrap())
        .collect();
    SubspaceEchelon::from_generators(&rows, w.imin, w.imax).map_err(|e| match e {
        Error::DepthExhausted(s) => Error::PrecisionExhausted(s),
        other => other,
    })
}

/// `ν̄(f) ≤ −ν(f)`.
pub fn remark2_member(f: &DoubleSeries) -> Result<bool> {
    let m = f.leading()?;
    Ok(m.i <= -m.j)
}

/// Whether the elements with `ν > −N` span at most `π N²` dimensions.
pub fn delta_dim_check(elems: &[DoubleSeries], n: i32, pi: &Q, window: Window) -> Result<bool> {
    let mut chosen = Vec::new();
    for e in elems {
        let m = e.leading()?;
        let bound = -(pi * q(m.j as i64));
        if m.i < 0 || q(m.i as i64) > bound {
            return Err(Error::PreconditionViolated(format!(
                "element with leading {m} violates 0 ≤ ν̄ ≤ −πν"
            )));
        }
        if m.j > -n {
            chosen.push(e.clone());
        }
    }
    let dim = EchelonBasis2::new(&chosen, window)?.dim();
    Ok(q(dim as i64) <= pi * q((n as i64) * (n as i64)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::qf;

    fn ds(terms: &[(i64, i32, i32)]) -> DoubleSeries {
        DoubleSeries::from_terms(terms)
    }

    #[test]
    fn arithmetic() {
        let a = ds(&[(1, 0, 0), (1, 0, 1)]);
        let b = ds(&[(1, 0, 0), (-1, 0, 1)]);
        assert_eq!(a.mul(&b), ds(&[(1, 0, 0), (-1, 0, 2)]));
        assert_eq!(
            ds(&[(1, 1, 0)]).mul(&ds(&[(1, -1, 0)])),
            DoubleSeries::one()
        );
        let f = ds(&[(1, 2, 0), (-1, 0, 1)]);
        let g = f.inverse(6, 30).unwrap();
        for k in 0..6 {
            assert_eq!(g.coeff(-2 - 2 * k, k), Some(q(1)));
        }
        assert!(f.mul(&g).agrees_with(&DoubleSeries::one()));
        assert_eq!(DoubleSeries::zero().inverse(3, 3), Err(Error::NotAUnit));
    }

    #[test]
    fn square_roots() {
        assert!(DoubleSeries::one()
            .sqrt_unit(5, 10)
            .unwrap()
            .agrees_with(&DoubleSeries::one()));
        let f = ds(&[(1, 0, 0), (1, 0, 1)]);
        let s = f.sqrt_unit(6, 10).unwrap();
        assert_eq!(s.coeff(0, 1), Some(qf(1, 2)));
        assert_eq!(s.coeff(0, 2), Some(qf(-1, 8)));
        assert!(s.mul(&s).agrees_with(&f));
        let g = ds(&[(1, 0, 0), (1, 0, 1), (-1, 2, 0)]);
        let s = g.sqrt_unit(6, 20).unwrap();
        assert_eq!(s.coeff(2, 0), Some(qf(-1, 2)));
        assert_eq!(s.coeff(0, 1), Some(qf(1, 2)));
        assert!(s.mul(&s).agrees_with(&g));
        assert_eq!(ds(&[(2, 0, 0)]).sqrt_unit(3, 3), Err(Error::NotUnitOne));
    }

    #[test]
    fn valuations() {
        let f = ds(&[(1, -3, 2)]);
        assert_eq!((f.nu().unwrap(), f.nubar().unwrap()), (2, -3));
        let g = ds(&[(1, -1, 0), (1, 0, 1)]);
        assert_eq!(g.leading().unwrap(), Monomial2::new(-1, 0));
        assert_eq!(DoubleSeries::zero().nu(), Err(Error::ZeroWithinPrecision));
    }

    #[test]
    fn branches() {
        // y² = 1 + u
        let poly = [
            ds(&[(-1, 0, 0), (-1, 0, 1)]),
            DoubleSeries::zero(),
            DoubleSeries::one(),
        ];
        let y = solve_branch(&poly, &Laurent::one(), 5, 10).unwrap();
        let s = ds(&[(1, 0, 0), (1, 0, 1)]).sqrt_unit(6, 11).unwrap();
        assert!(y.agrees_with(&s));
        // (y − t⁻¹)(y − 2)
        let poly = [
            ds(&[(2, -1, 0)]),
            ds(&[(-1, -1, 0), (-2, 0, 0)]),
            DoubleSeries::one(),
        ];
        let seed = Laurent::monomial(q(1), -1);
        let y = solve_branch(&poly, &seed, 4, 10).unwrap();
        assert!(y.agrees_with(&DoubleSeries::monomial(q(1), -1, 0)));
        assert_eq!(y.row(0).unwrap().prec(), 11);
        // a double root is rejected
        let poly = [DoubleSeries::one(), ds(&[(-2, 0, 0)]), DoubleSeries::one()];
        assert_eq!(
            solve_branch(&poly, &Laurent::one(), 3, 5),
            Err(Error::NotSimpleRoot)
        );
    }

    #[test]
    fn echelon_examples() {
        let w = Window::new(-10, 10, 0, 3);
        let b = EchelonBasis2::new(&[ds(&[(1, 0, 0), (1, 0, 1)]), DoubleSeries::one()], w).unwrap();
        assert_eq!(
            support(&b),
            vec![Monomial2::new(0, 0), Monomial2::new(0, 1)]
        );
        let b = EchelonBasis2::new(&[ds(&[(1, -1, 0), (1, 0, 0)]), ds(&[(1, -1, 0)])], w).unwrap();
        assert_eq!(
            support(&b),
            vec![Monomial2::new(-1, 0), Monomial2::new(0, 0)]
        );
        let b = EchelonBasis2::new(&[ds(&[(1, -1, 1)]), ds(&[(1, -2, 1)])], w).unwrap();
        assert_eq!(
            support(&b),
            vec![Monomial2::new(-2, 1), Monomial2::new(-1, 1)]
        );
        assert!(b.contains(&ds(&[(3, -1, 1), (-2, -2, 1)])).unwrap());
        assert!(!b.contains(&ds(&[(1, -3, 1)])).unwrap());
    }

    #[test]
    fn unknown_row_is_reported() {
        let w = Window::new(-5, 5, 0, 2);
        let short = DoubleSeries::new([(0, Laurent::from_terms([(0, q(1))], 3))], 3);
        let other = DoubleSeries::one();
        let err = EchelonBasis2::new(&[other, short], w);
        assert!(matches!(err, Err(Error::PrecisionExhausted(_))));
    }

    #[test]
    fn remark2() {
        assert!(remark2_member(&ds(&[(1, -1, 1)])).unwrap());
        assert!(!remark2_member(&ds(&[(1, 1, 1)])).unwrap());
        for k in 1..=5 {
            assert!(remark2_member(&ds(&[(1, -k, k)])).unwrap());
        }
    }

    #[test]
    fn delta_dimension() {
        let w = Window::new(-20, 20, -5, 5);
        let mut elems = Vec::new();
        for nu in -4..=0 {
            for nubar in 0..=-nu {
                elems.push(ds(&[(1, nubar, nu)]));
            }
        }
        assert!(delta_dim_check(&elems, 3, &q(1), w).unwrap());
        assert!(delta_dim_check(&[], 3, &q(1), w).unwrap());
        assert!(!delta_dim_check(&elems, 3, &qf(1, 2), w).is_ok_and(|x| x));
    }
}
