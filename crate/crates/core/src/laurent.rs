//! Truncated Laurent series in one variable, with tracked precision.
//!
//! A series is known exactly for all exponents below `prec`; everything at or
//! above `prec` is unknown. `prec == EXACT` marks a series known completely
//! (a Laurent polynomial). Precision propagates through arithmetic so that no
//! operation reports a coefficient it cannot justify.

use std::collections::BTreeMap;
use std::fmt;

use crate::field::Field;

/// Sentinel precision of an exactly known series.
pub const EXACT: i32 = i32::MAX;

/// `p + d`, keeping `EXACT` absorbing.
pub fn padd(p: i32, d: i32) -> i32 {
    if p == EXACT || d == EXACT {
        EXACT
    } else {
        p.saturating_add(d).min(EXACT - 1)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Laurent<F> {
    terms: BTreeMap<i32, F>,
    prec: i32,
}

impl<F: Field> Laurent<F> {
    pub fn from_terms<I: IntoIterator<Item = (i32, F)>>(terms: I, prec: i32) -> Self {
        let mut map = BTreeMap::new();
        for (e, c) in terms {
            if e >= prec || c.is_zero() {
                continue;
            }
            map.insert(e, c);
        }
        Laurent { terms: map, prec }
    }

    pub fn exact<I: IntoIterator<Item = (i32, F)>>(terms: I) -> Self {
        Self::from_terms(terms, EXACT)
    }

    pub fn zero() -> Self {
        Laurent {
            terms: BTreeMap::new(),
            prec: EXACT,
        }
    }

    /// The unknown series `O(var^prec)`.
    pub fn big_o(prec: i32) -> Self {
        Laurent {
            terms: BTreeMap::new(),
            prec,
        }
    }

    pub fn one() -> Self {
        Self::monomial(F::one(), 0)
    }

    pub fn monomial(c: F, e: i32) -> Self {
        Self::exact([(e, c)])
    }

    pub fn constant(c: F) -> Self {
        Self::monomial(c, 0)
    }

    pub fn prec(&self) -> i32 {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.prec == EXACT
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &F)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Coefficient at `e`, or `None` when `e` is beyond the known range.
    pub fn coeff(&self, e: i32) -> Option<F> {
        if e >= self.prec {
            None
        } else {
            Some(self.terms.get(&e).cloned().unwrap_or_else(F::zero))
        }
    }

    pub fn coeff_ref(&self, e: i32) -> Option<&F> {
        self.terms.get(&e)
    }

    /// Lowest exponent carrying a known nonzero coefficient.
    pub fn valuation(&self) -> Option<i32> {
        self.terms.keys().next().copied()
    }

    pub fn top_exponent(&self) -> Option<i32> {
        self.terms.keys().next_back().copied()
    }

    pub fn leading(&self) -> Option<(i32, &F)> {
        self.terms.iter().next().map(|(e, c)| (*e, c))
    }

    /// True when no nonzero coefficient is known (exact zero or `O(..)`).
    pub fn is_zero_known(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_exact_zero(&self) -> bool {
        self.terms.is_empty() && self.prec == EXACT
    }

    /// Lowest exponent at which the series could be nonzero.
    fn low(&self) -> i32 {
        self.valuation().unwrap_or(self.prec)
    }

    pub fn truncate(&self, prec: i32) -> Self {
        let p = self.prec.min(prec);
        Laurent {
            terms: self
                .terms
                .range(..p)
                .map(|(e, c)| (*e, c.clone()))
                .collect(),
            prec: p,
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let prec = self.prec.min(o.prec);
        let mut terms: BTreeMap<i32, F> = self
            .terms
            .range(..prec)
            .map(|(e, c)| (*e, c.clone()))
            .collect();
        for (e, c) in o.terms.range(..prec) {
            let entry = terms.entry(*e).or_insert_with(F::zero);
            *entry = entry.clone() + c.clone();
            if entry.is_zero() {
                terms.remove(e);
            }
        }
        Laurent { terms, prec }
    }

    pub fn neg(&self) -> Self {
        Laurent {
            terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect(),
            prec: self.prec,
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Laurent::big_o(self.prec);
        }
        Laurent {
            terms: self
                .terms
                .iter()
                .map(|(e, x)| (*e, x.clone() * c.clone()))
                .collect(),
            prec: self.prec,
        }
    }

    /// Multiply by `var^d`.
    pub fn shift(&self, d: i32) -> Self {
        Laurent {
            terms: self.terms.iter().map(|(e, c)| (e + d, c.clone())).collect(),
            prec: padd(self.prec, d),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let prec = padd(self.prec, o.low()).min(padd(o.prec, self.low()));
        let mut terms: BTreeMap<i32, F> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &o.terms {
                let e = ea + eb;
                if e >= prec {
                    break;
                }
                let entry = terms.entry(e).or_insert_with(F::zero);
                *entry = entry.clone() + ca.clone() * cb.clone();
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Laurent { terms, prec }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Laurent::one();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Laurent::from_terms(
            self.terms
                .iter()
                .map(|(e, c)| (e - 1, c.clone() * F::from_i64(*e as i64))),
            padd(self.prec, -1),
        )
    }

    /// Multiplicative inverse, truncated at `cap` when the input is exact.
    pub fn inverse(&self, cap: i32) -> Option<Self> {
        let (v, lead) = self.leading()?;
        let lead_inv = lead.inv();
        if self.prec == EXACT && self.terms.len() == 1 {
            return Some(Laurent::exact([(-v, lead_inv)]));
        }
        let prec = padd(self.prec, -2 * v).min(cap);
        let mut out: BTreeMap<i32, F> = BTreeMap::new();
        // g_{-v+k} = -lead^{-1} Σ_{i=1..k} f_{v+i} g_{-v+k-i}
        let mut k = 0;
        while -v + k < prec {
            let mut acc = if k == 0 { F::one() } else { F::zero() };
            if k > 0 {
                for (e, c) in self.terms.range(v + 1..=v + k) {
                    if let Some(g) = out.get(&(-v + k - (e - v))) {
                        acc = acc - c.clone() * g.clone();
                    }
                }
            }
            let g = acc * lead_inv.clone();
            if !g.is_zero() {
                out.insert(-v + k, g);
            }
            k += 1;
        }
        Some(Laurent { terms: out, prec })
    }

    /// Square root of a series of the form `1 + (positive powers)`, with
    /// constant term `+1`.
    pub fn sqrt_one(&self, cap: i32) -> Option<Self> {
        if self.valuation() != Some(0) || !self.terms[&0].is_one() {
            return None;
        }
        let prec = self.prec.min(cap);
        let two = F::from_i64(2);
        let mut s: BTreeMap<i32, F> = BTreeMap::new();
        s.insert(0, F::one());
        let mut n = 1;
        while n < prec {
            let mut acc = self.terms.get(&n).cloned().unwrap_or_else(F::zero);
            for i in 1..n {
                if let (Some(a), Some(b)) = (s.get(&i), s.get(&(n - i))) {
                    acc = acc - a.clone() * b.clone();
                }
            }
            let c = acc / two.clone();
            if !c.is_zero() {
                s.insert(n, c);
            }
            n += 1;
        }
        Some(Laurent { terms: s, prec })
    }

    pub fn map_coeffs<G: Field>(&self, f: impl Fn(&F) -> G) -> Laurent<G> {
        Laurent::from_terms(self.terms.iter().map(|(e, c)| (*e, f(c))), self.prec)
    }

    /// Equality on the exponents both sides know.
    pub fn agrees_with(&self, o: &Self) -> bool {
        let p = self.prec.min(o.prec);
        self.truncate(p) == o.truncate(p)
    }

    pub fn fmt_with(&self, var: &str) -> String {
        let mut out = String::new();
        for (e, c) in &self.terms {
            let mut cs = c.to_string();
            let neg = !cs.contains(' ') && cs.starts_with('-');
            if neg {
                cs.remove(0);
            }
            let cs = if cs.contains(' ') {
                format!("({cs})")
            } else {
                cs
            };
            let mono = match e {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{e}"),
            };
            let term = match (cs.as_str(), mono.is_empty()) {
                (_, true) => cs,
                ("1", false) => mono,
                _ => format!("{cs}*{mono}"),
            };
            match (out.is_empty(), neg) {
                (true, true) => out.push('-'),
                (true, false) => {}
                (false, true) => out.push_str(" - "),
                (false, false) => out.push_str(" + "),
            }
            out.push_str(&term);
        }
        if self.prec != EXACT {
            if !out.is_empty() {
                out.push_str(" + ");
            }
            out.push_str(&format!("O({var}^{})", self.prec));
        }
        if out.is_empty() {
            "0".into()
        } else {
            out
        }
    }
}

impl<F: Field> fmt::Display for Laurent<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_with("z"))
    }
}
