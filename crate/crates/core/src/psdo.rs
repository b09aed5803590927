//! Pseudo-differential operators `Σ a_i(x) ∂^i`, the Sato map `E → E/Ex`,
//! standard subspaces and the γ-embedding of the projective line.
//!
//! Conventions: `∂⁻¹` maps to `z`, so `∂^i` maps to `z^{−i}`, and
//! `W₀ = span{z^{−l} : l ≥ 0}`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::echelon::SubspaceEchelon;
use crate::error::{Error, Result};
use crate::field::{binomial, falling, Field, Q};
use crate::laurent::{Laurent, EXACT};
use crate::scalar::ParamScalar;

/// Truncated power series in `x` (or Laurent series, for elements of `P`).
pub type XSeries = Laurent<ParamScalar>;
/// Element of `V = k((z))`.
pub type VVector = Laurent<ParamScalar>;

/// Default depth in the `∂⁻¹` direction, in `x` and in `z`.
pub const DEFAULT_DEPTH: i32 = 12;
/// Floor of an operator with finitely many terms, all known.
pub const EXACT_FLOOR: i32 = i32::MIN;

fn fadd(floor: i32, d: i32) -> i32 {
    if floor == EXACT_FLOOR {
        EXACT_FLOOR
    } else {
        floor.saturating_add(d)
    }
}

/// `Σ a_i(x) ∂^i`; coefficients of `∂^i` with `i < floor` are unknown.
#[derive(Clone, Debug, PartialEq)]
pub struct PDOp {
    coeffs: BTreeMap<i32, XSeries>,
    floor: i32,
}

impl PDOp {
    pub fn new<I: IntoIterator<Item = (i32, XSeries)>>(coeffs: I, floor: i32) -> Self {
        let mut map: BTreeMap<i32, XSeries> = BTreeMap::new();
        for (i, c) in coeffs {
            if i < floor {
                continue;
            }
            let c = match map.remove(&i) {
                Some(prev) => prev.add(&c),
                None => c,
            };
            map.insert(i, c);
        }
        map.retain(|_, c| !c.is_exact_zero());
        PDOp { coeffs: map, floor }
    }

    pub fn exact<I: IntoIterator<Item = (i32, XSeries)>>(coeffs: I) -> Self {
        Self::new(coeffs, EXACT_FLOOR)
    }

    pub fn zero() -> Self {
        Self::exact([])
    }

    pub fn one() -> Self {
        Self::scalar(ParamScalar::one())
    }

    pub fn scalar(c: ParamScalar) -> Self {
        Self::exact([(0, Laurent::constant(c))])
    }

    /// `∂^i`.
    pub fn d_pow(i: i32) -> Self {
        Self::exact([(i, Laurent::one())])
    }

    /// `x^j`.
    pub fn x_pow(j: i32) -> Self {
        Self::exact([(0, Laurent::monomial(ParamScalar::one(), j))])
    }

    /// `c · x^j · ∂^i`.
    pub fn monomial(c: ParamScalar, j: i32, i: i32) -> Self {
        Self::exact([(i, Laurent::monomial(c, j))])
    }

    /// Multiplication by a function of `x`.
    pub fn function(f: XSeries) -> Self {
        Self::exact([(0, f)])
    }

    pub fn floor(&self) -> i32 {
        self.floor
    }

    pub fn is_exact(&self) -> bool {
        self.floor == EXACT_FLOOR && self.coeffs.values().all(|c| c.is_exact())
    }

    /// Highest `∂`-exponent with a coefficient that is not known to vanish.
    pub fn top(&self) -> Option<i32> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (i32, &XSeries)> {
        self.coeffs.iter().rev().map(|(i, c)| (*i, c))
    }

    /// Coefficient of `∂^i`, or `None` below the floor.
    pub fn coeff(&self, i: i32) -> Option<XSeries> {
        if i < self.floor {
            return None;
        }
        Some(self.coeffs.get(&i).cloned().unwrap_or_else(Laurent::zero))
    }

    /// `a_{j,i}`: the coefficient of `x^j ∂^{−i}`.
    pub fn a(&self, j: i32, i: i32) -> Option<ParamScalar> {
        self.coeff(-i)?.coeff(j)
    }

    pub fn add(&self, o: &PDOp) -> PDOp {
        PDOp::new(
            self.coeffs
                .iter()
                .chain(o.coeffs.iter())
                .map(|(i, c)| (*i, c.clone())),
            self.floor.max(o.floor),
        )
    }

    pub fn neg(&self) -> PDOp {
        PDOp {
            coeffs: self.coeffs.iter().map(|(i, c)| (*i, c.neg())).collect(),
            floor: self.floor,
        }
    }

    pub fn sub(&self, o: &PDOp) -> PDOp {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &ParamScalar) -> PDOp {
        PDOp::new(
            self.coeffs.iter().map(|(i, s)| (*i, s.scale(c))),
            self.floor,
        )
    }

    pub fn truncate(&self, floor: i32) -> PDOp {
        PDOp::new(
            self.coeffs.iter().map(|(i, c)| (*i, c.clone())),
            self.floor.max(floor),
        )
    }

    /// Agreement on every coefficient both operators know.
    pub fn agrees_with(&self, o: &PDOp) -> bool {
        let floor = self.floor.max(o.floor);
        let keys: std::collections::BTreeSet<i32> = self
            .coeffs
            .keys()
            .chain(o.coeffs.keys())
            .copied()
            .filter(|i| *i >= floor)
            .collect();
        keys.into_iter()
            .all(|i| self.coeff(i).unwrap().agrees_with(&o.coeff(i).unwrap()))
    }

    /// Leibniz product `∂^i ∘ f = Σ_r C(i, r) f^{(r)} ∂^{i−r}`. Coefficients
    /// of `∂^e` with `e < −depth` are dropped.
    pub fn mul(&self, rhs: &PDOp, depth: i32) -> PDOp {
        let natural = match (self.top(), rhs.top()) {
            (Some(ta), Some(tb)) => fadd(self.floor, tb).max(fadd(rhs.floor, ta)),
            _ => self.floor.max(rhs.floor),
        };
        let floor = natural.max(-depth);
        let mut truncated = false;
        let mut out: BTreeMap<i32, XSeries> = BTreeMap::new();
        for (&i, a) in &self.coeffs {
            for (&j, b) in &rhs.coeffs {
                let mut deriv = b.clone();
                let mut r: u32 = 0;
                loop {
                    if deriv.is_exact_zero() {
                        break;
                    }
                    let e = i + j - r as i32;
                    if e < floor {
                        truncated = true;
                        break;
                    }
                    let c = binomial(i as i64, r);
                    if c.is_zero() {
                        break;
                    }
                    let term = a.mul(&deriv).scale(&ParamScalar::rational(c));
                    let slot = out.entry(e).or_insert_with(Laurent::zero);
                    *slot = slot.add(&term);
                    deriv = deriv.derivative();
                    r += 1;
                }
            }
        }
        let floor = if natural == EXACT_FLOOR && !truncated {
            EXACT_FLOOR
        } else {
            floor
        };
        PDOp::new(out, floor)
    }

    /// Inverse of a degree-zero operator with invertible leading coefficient
    /// `a₀`, as `(1 + N)⁻¹ a₀⁻¹` with `N = a₀⁻¹(A − a₀)`. Power series in `x`
    /// are cut at `xcap`, the `∂⁻¹` direction at `depth`.
    pub fn invert(&self, depth: i32, xcap: i32) -> Result<PDOp> {
        if self.top() != Some(0) {
            return Err(Error::NotInvertible(format!(
                "degree {:?}, expected 0",
                self.top()
            )));
        }
        let a0 = &self.coeffs[&0];
        let a0_inv = a0
            .inverse(xcap)
            .ok_or_else(|| Error::NotInvertible("leading coefficient is zero".into()))?;
        let lead = PDOp::function(a0.clone());
        let n = PDOp::function(a0_inv.clone()).mul(&self.sub(&lead), depth);
        let minus_n = n.neg();
        let mut term = PDOp::one();
        let mut sum = PDOp::one();
        for _ in 0..depth.max(0) {
            term = term.mul(&minus_n, depth);
            if term.coeffs.is_empty() && term.floor == EXACT_FLOOR {
                break;
            }
            sum = sum.add(&term);
        }
        Ok(sum.mul(&PDOp::function(a0_inv), depth))
    }

    /// True when every known coefficient is a power series in `x`.
    pub fn in_e(&self) -> bool {
        self.coeffs
            .values()
            .all(|c| c.valuation().map_or(true, |v| v >= 0))
    }

    /// Image in `V = E/Ex`: `x^j ∂^i ≡ (−1)^j i(i−1)…(i−j+1) ∂^{i−j} ↦ z^{j−i}`.
    pub fn sato_reduce(&self) -> Result<VVector> {
        let mut prec = if self.floor == EXACT_FLOOR {
            EXACT
        } else {
            1i32.saturating_sub(self.floor)
        };
        let mut terms: BTreeMap<i32, ParamScalar> = BTreeMap::new();
        for (&i, s) in &self.coeffs {
            if !(s.is_exact() || (i >= 0 && s.prec() > i)) {
                prec = prec.min(s.prec() - i);
            }
            for (j, c) in s.terms() {
                if j < 0 {
                    return Err(Error::NotInE);
                }
                let mut f = falling(i as i64, j as u32);
                if j % 2 == 1 {
                    f = -f;
                }
                if f.is_zero() {
                    continue;
                }
                let slot = terms.entry(j - i).or_insert_with(ParamScalar::zero);
                *slot = slot.clone() + c.clone() * ParamScalar::rational(f);
            }
        }
        Ok(Laurent::from_terms(terms, prec))
    }

    /// Lift of `Σ c_e z^e` to `Σ c_e ∂^{−e}`.
    pub fn lift(v: &VVector) -> PDOp {
        let floor = if v.is_exact() {
            EXACT_FLOOR
        } else {
            1i32.saturating_sub(v.prec())
        };
        PDOp::new(
            v.terms().map(|(e, c)| (-e, Laurent::constant(c.clone()))),
            floor,
        )
    }
}

impl fmt::Display for PDOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        for (i, s) in self.coeffs() {
            let d = match i {
                0 => String::new(),
                1 => "D".to_string(),
                _ => format!("D^{i}"),
            };
            let text = s.fmt_with("x");
            let single = s.num_terms() == 1 && s.is_exact();
            parts.push(match (text.as_str(), d.is_empty()) {
                (_, true) => text,
                ("1", false) => d,
                ("-1", false) => format!("-{d}"),
                _ if single => format!("{text}*{d}"),
                _ => format!("({text})*{d}"),
            });
        }
        if self.floor != EXACT_FLOOR {
            parts.push(format!("O(D^{})", self.floor - 1));
        }
        if parts.is_empty() {
            return f.write_str("0");
        }
        let mut out = parts[0].clone();
        for p in &parts[1..] {
            match p.strip_prefix('-') {
                Some(rest) => {
                    out.push_str(" - ");
                    out.push_str(rest);
                }
                None => {
                    out.push_str(" + ");
                    out.push_str(p);
                }
            }
        }
        f.write_str(&out)
    }
}

/// Least shift `j − i` over the known terms `x^j ∂^i`: every monomial `z^e`
/// is sent into `z^{e+shift}`-and-above.
fn least_shift(a: &PDOp) -> Option<i32> {
    a.coeffs
        .iter()
        .filter_map(|(i, s)| {
            s.valuation()
                .or((!s.is_exact()).then(|| s.prec()))
                .map(|v| v - i)
        })
        .min()
}

/// Whether the leading coefficient of `A z^e`, at `z^{e+s}`, is nonzero for
/// every integer `e < below`. `None` if this cannot be decided.
fn leading_nonvanishing(a: &PDOp, s: i32, below: i32) -> Option<bool> {
    // P(e) = Σ c (−1)^j (i−e)(i−e−1)…(i−e−j+1) over terms with j − i = s.
    let mut poly: Vec<ParamScalar> = vec![ParamScalar::zero()];
    for (&i, ser) in &a.coeffs {
        let Some(c) = ser.coeff(s + i) else {
            return None;
        };
        let j = s + i;
        if c.is_zero() || j < 0 {
            continue;
        }
        let mut p = vec![c];
        for t in 0..j {
            // multiply by (i − t − e)
            let k = ParamScalar::int((i - t) as i64);
            let mut next = vec![ParamScalar::zero(); p.len() + 1];
            for (d, pc) in p.iter().enumerate() {
                next[d] = next[d].clone() + pc.clone() * k.clone();
                next[d + 1] = next[d + 1].clone() - pc.clone();
            }
            p = next;
        }
        if j % 2 == 1 {
            p = p.into_iter().map(|x| -x).collect();
        }
        if poly.len() < p.len() {
            poly.resize(p.len(), ParamScalar::zero());
        }
        for (d, pc) in p.into_iter().enumerate() {
            poly[d] = poly[d].clone() + pc;
        }
    }
    while poly.len() > 1 && poly.last().unwrap().is_zero() {
        poly.pop();
    }
    if poly.len() == 1 {
        return Some(!poly[0].is_zero());
    }
    let coeffs: Option<Vec<Q>> = poly.iter().map(|c| c.as_rational()).collect();
    let coeffs = coeffs?;
    let lead = coeffs.last().unwrap().clone();
    let bound = coeffs
        .iter()
        .map(|c| (c / &lead).abs())
        .fold(Q::zero(), |m, x| if x > m { x } else { m });
    let bound = bound.ceil().to_integer();
    let bound: i64 = i64::try_from(bound).ok()? + 1;
    let eval = |e: i64| {
        coeffs
            .iter()
            .rev()
            .fold(Q::zero(), |acc, c| acc * Q::from_i64(e) + c)
    };
    Some(((-bound - 1)..(below as i64)).all(|e| !eval(e).is_zero()))
}

/// `A · W` for the subspace `W` with echelon basis `b`, on the largest window
/// the truncations certify. `W` is assumed to contain every monomial below
/// the window of `b`.
pub fn act(a: &PDOp, b: &SubspaceEchelon<ParamScalar>) -> Result<SubspaceEchelon<ParamScalar>> {
    if !a.in_e() {
        return Err(Error::NotInE);
    }
    let (lo, hi) = b.window();
    if !b.deep_complete(2) {
        return Err(Error::DepthExhausted(format!(
            "input basis is not complete at the bottom of [{lo}, {hi}]"
        )));
    }
    let Some(s) = least_shift(a) else {
        return SubspaceEchelon::from_generators(&[], lo, hi);
    };
    if a.floor != EXACT_FLOOR && 1i32.saturating_sub(a.floor) <= s {
        return Err(Error::DepthExhausted(
            "operator truncated above its leading shift".into(),
        ));
    }
    match leading_nonvanishing(a, s, lo) {
        Some(true) => {}
        _ => {
            return Err(Error::DepthExhausted(format!(
                "cannot certify leading terms of images below z^{lo}"
            )))
        }
    }
    let mut images = Vec::with_capacity(b.dim());
    let mut top = hi.saturating_add(s);
    for v in b.vectors() {
        let img = a.mul(&PDOp::lift(v), i32::MAX / 4).sato_reduce()?;
        top = top.min(img.prec().saturating_sub(1));
        images.push(img);
    }
    let lo_out = lo + s;
    if top < lo_out {
        return Err(Error::DepthExhausted(format!(
            "no certified window: [{lo_out}, {top}]"
        )));
    }
    SubspaceEchelon::from_generators(&images, lo_out, top)
}

/// `A · span(gens)` restricted to `[lo, hi]`, where `gens(lo', hi')` must
/// produce generators of a subspace known on any requested window.
pub fn act_span(
    a: &PDOp,
    gens: &dyn Fn(i32, i32) -> Vec<VVector>,
    lo: i32,
    hi: i32,
) -> Result<SubspaceEchelon<ParamScalar>> {
    let s = least_shift(a).unwrap_or(0);
    let top = a.top().unwrap_or(0).max(0);
    let lo_in = lo - s;
    let hi_in = hi + top + 1;
    let input = SubspaceEchelon::from_generators(&gens(lo_in, hi_in), lo_in, hi_in)?;
    let out = act(a, &input)?;
    let (l, h) = out.window();
    if l > lo || h < hi {
        return Err(Error::DepthExhausted(format!(
            "certified window [{l}, {h}] does not cover [{lo}, {hi}]"
        )));
    }
    Ok(out.restrict(lo, hi))
}

/// Generators `z^{−l}` (`l ≥ 0`) of `W₀` reaching down to `lo`.
pub fn w0_gens(lo: i32, _hi: i32) -> Vec<VVector> {
    (0..=(-lo).max(0))
        .map(|l| Laurent::monomial(ParamScalar::one(), -l))
        .collect()
}

pub fn w0(lo: i32, hi: i32) -> Result<SubspaceEchelon<ParamScalar>> {
    SubspaceEchelon::from_generators(&w0_gens(lo, hi), lo, hi)
}

/// `W(α,β) = span{z^{−l} : l ≥ 1} ⊕ k(α + βz)`.
pub fn w_alpha_beta_gens(alpha: &ParamScalar, beta: &ParamScalar, lo: i32) -> Vec<VVector> {
    let mut g: Vec<VVector> = (1..=(-lo).max(1))
        .map(|l| Laurent::monomial(ParamScalar::one(), -l))
        .collect();
    g.push(Laurent::exact([(0, alpha.clone()), (1, beta.clone())]));
    g
}

pub fn w_alpha_beta(
    alpha: &ParamScalar,
    beta: &ParamScalar,
    lo: i32,
    hi: i32,
) -> Result<SubspaceEchelon<ParamScalar>> {
    SubspaceEchelon::from_generators(&w_alpha_beta_gens(alpha, beta, lo), lo, hi)
}

/// `S̃(α,β) = α + βx + β∂⁻¹`.
pub fn s_tilde(alpha: &ParamScalar, beta: &ParamScalar) -> PDOp {
    PDOp::exact([
        (0, Laurent::exact([(0, alpha.clone()), (1, beta.clone())])),
        (-1, Laurent::constant(beta.clone())),
    ])
}

/// `S(α,β) = α⁻¹ S̃(α,β) (1 + (β/α)x)⁻¹`, for `α ≠ 0`.
pub fn s_operator(alpha: &ParamScalar, beta: &ParamScalar, depth: i32, xcap: i32) -> Result<PDOp> {
    if alpha.is_zero() {
        return Err(Error::PreconditionViolated("S(α,β) needs α ≠ 0".into()));
    }
    let c = beta.clone() / alpha.clone();
    let f = Laurent::exact([(0, ParamScalar::one()), (1, c)])
        .inverse(xcap)
        .expect("1 + cx is a unit");
    Ok(s_tilde(alpha, beta)
        .mul(&PDOp::function(f), depth)
        .scale(&(ParamScalar::one() / alpha.clone())))
}

/// `1 + ∂⁻¹x⁻¹`, whose inverse is `H(α,β)`.
pub fn h_inverse(depth: i32) -> PDOp {
    PDOp::one().add(&PDOp::d_pow(-1).mul(&PDOp::x_pow(-1), depth))
}

/// The operator `W` with `γ(W) = W(α,β)`: `S(α,β)⁻¹` for `α ≠ 0`, and
/// `H(α,β) = (1 + ∂⁻¹x⁻¹)⁻¹` for `α = 0`.
pub fn gamma_point(alpha: &ParamScalar, beta: &ParamScalar, depth: i32) -> Result<PDOp> {
    let xcap = depth;
    if alpha.is_zero() {
        if beta.is_zero() {
            return Err(Error::PreconditionViolated("(α, β) = (0, 0)".into()));
        }
        return h_inverse(depth).invert(depth, xcap);
    }
    s_operator(alpha, beta, depth, xcap)?.invert(depth, xcap)
}

/// `γ(W) = (W⁻¹xⁿ)W₀` on the window `[lo, hi]`.
pub fn gamma_image(
    w: &PDOp,
    n: u32,
    depth: i32,
    lo: i32,
    hi: i32,
) -> Result<SubspaceEchelon<ParamScalar>> {
    let op = w.invert(depth, depth)?.mul(&PDOp::x_pow(n as i32), depth);
    act_span(&op, &w0_gens, lo, hi)
}

/// Least `m ≤ mmax` with `x^m A ∈ E` and least `n ≤ nmax` with `A⁻¹xⁿ ∈ E`,
/// judged on the known coefficients.
pub fn quasiregular_check(
    a: &PDOp,
    mmax: u32,
    nmax: u32,
    depth: i32,
) -> Result<Option<(u32, u32)>> {
    let m = (0..=mmax).find(|&m| PDOp::x_pow(m as i32).mul(a, depth).in_e());
    let inv = a.invert(depth, depth)?;
    let n = (0..=nmax).find(|&n| inv.mul(&PDOp::x_pow(n as i32), depth).in_e());
    Ok(m.zip(n))
}

/// `χ(W) = dim W∩O − dim V/(W+O)` with `O = k[[z]]`.
pub fn chi_1d(b: &SubspaceEchelon<ParamScalar>, margin: i32) -> Result<i64> {
    b.chi(margin)
}

/// Monomials `z^d`, `d ∈ [dmin, dmax]`, with `z^d·W ⊆ W` as far as the
/// window decides.
pub fn stabilizer_sample_1d(b: &SubspaceEchelon<ParamScalar>, dmin: i32, dmax: i32) -> Vec<i32> {
    b.stabilizer_sample(dmin, dmax)
}

/// `S = {σ(0), σ(−1), …}` with `σ(−l) = −l` from some point on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexSet {
    values: Vec<i64>,
}

impl IndexSet {
    /// `values[l] = σ(−l)`; the identity is assumed past the list.
    pub fn new(mut values: Vec<i64>) -> Result<Self> {
        while let Some(&v) = values.last() {
            if v == -(values.len() as i64 - 1) {
                values.pop();
            } else {
                break;
            }
        }
        let n = values.len() as i64;
        let mut seen = std::collections::BTreeSet::new();
        for &v in &values {
            if !seen.insert(v) {
                return Err(Error::PreconditionViolated(format!(
                    "σ takes the value {v} twice"
                )));
            }
            if v <= -n {
                return Err(Error::PreconditionViolated(format!(
                    "σ value {v} collides with the identity tail"
                )));
            }
        }
        Ok(IndexSet { values })
    }

    pub fn standard() -> Self {
        IndexSet { values: vec![] }
    }

    /// Parses `"σ(0),σ(−1),…"`.
    pub fn parse(s: &str) -> Result<Self> {
        let vals: std::result::Result<Vec<i64>, _> =
            s.split(',').map(|t| t.trim().parse::<i64>()).collect();
        Self::new(vals.map_err(|e| Error::Config(format!("bad index set {s:?}: {e}")))?)
    }

    pub fn sigma(&self, l: usize) -> i64 {
        self.values.get(l).copied().unwrap_or(-(l as i64))
    }

    /// Largest `l` with `σ(−l) ≠ −l`.
    pub fn m(&self) -> Option<usize> {
        self.values.len().checked_sub(1)
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    /// Generators `z^{σ(−l)}` of `V^S` reaching down to `lo`.
    pub fn gens(&self, lo: i32) -> Vec<VVector> {
        let count = self.values.len().max((-lo).max(0) as usize + 1);
        (0..count)
            .map(|l| Laurent::monomial(ParamScalar::one(), self.sigma(l) as i32))
            .collect()
    }

    pub fn echelon(&self, lo: i32, hi: i32) -> Result<SubspaceEchelon<ParamScalar>> {
        SubspaceEchelon::from_generators(&self.gens(lo), lo, hi)
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<String> = self.values.iter().map(|x| x.to_string()).collect();
        write!(f, "{{{}}}", v.join(","))
    }
}

fn r_product(s: &IndexSet, constant: impl Fn(usize) -> i64) -> PDOp {
    let Some(m) = s.m() else {
        return PDOp::one();
    };
    let mut acc = PDOp::d_pow(-(m as i32) - 1);
    for l in 0..=m {
        let factor = PDOp::monomial(ParamScalar::one(), 1, 1)
            .sub(&PDOp::scalar(ParamScalar::int(constant(l))));
        acc = acc.mul(&factor, i32::MAX / 4);
    }
    acc
}

/// `R = ∂^{−m−1} Π_{l=0..m} (x∂ − (σ(−l) − 1))`, which sends `V^S` onto
/// `W₀`; `x∂` acts on `z^e` by `e − 1`.
pub fn r_operator(s: &IndexSet) -> PDOp {
    r_product(s, |l| s.sigma(l) - 1)
}

/// The product with constants `σ(−l) + l`, as printed in the literature
/// for the convention `S₀ = {−1, −2, …}`.
pub fn r_operator_printed(s: &IndexSet) -> PDOp {
    r_product(s, |l| s.sigma(l) + l as i64)
}

/// Whether `R · V^S = W₀` on `[lo, hi]`.
pub fn r_verifies(r: &PDOp, s: &IndexSet, lo: i32, hi: i32) -> Result<bool> {
    let image = act_span(r, &|l, _| s.gens(l), lo, hi)?;
    Ok(image == w0(lo, hi)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{q, qf};

    fn ps(n: i64) -> ParamScalar {
        ParamScalar::int(n)
    }

    fn d(i: i32) -> PDOp {
        PDOp::d_pow(i)
    }

    fn x(j: i32) -> PDOp {
        PDOp::x_pow(j)
    }

    #[test]
    fn leibniz_examples() {
        assert_eq!(d(1).mul(&x(1), 20).to_string(), "x*D + 1");
        let p = d(-1).mul(&x(1), 20);
        assert_eq!(p.to_string(), "x*D^-1 - D^-2");
        assert!(p.is_exact());
        assert_eq!(d(1).mul(&p, 20), x(1));
        let a = PDOp::monomial(ps(3), 2, -1).add(&x(-1));
        assert_eq!(a.mul(&PDOp::one(), 20), a);
    }

    #[test]
    fn inverse_of_one_plus_dinv_xinv() {
        let h = h_inverse(10).invert(10, 10).unwrap();
        let exact_h = PDOp::one().sub(&PDOp::monomial(ps(1), -1, -1));
        assert!(h.agrees_with(&exact_h));
        assert_eq!(h.floor(), -10);
        assert_eq!(h.a(-1, 1), Some(ps(-1)));
        let back = h.invert(10, 10).unwrap();
        assert!(back.agrees_with(&h_inverse(10)));
    }

    #[test]
    fn sato_examples() {
        let z = |e| Laurent::monomial(ParamScalar::one(), e);
        assert_eq!(d(-1).sato_reduce().unwrap(), z(1));
        assert!(x(1).sato_reduce().unwrap().is_exact_zero());
        assert_eq!(
            PDOp::monomial(ps(1), 1, 1).sato_reduce().unwrap(),
            Laurent::constant(ps(-1))
        );
        assert_eq!(x(-1).sato_reduce(), Err(Error::NotInE));
    }

    #[test]
    fn x_fixes_w0() {
        let out = act_span(&x(1), &w0_gens, -12, 12).unwrap();
        assert_eq!(out, w0(-12, 12).unwrap());
        let id = act_span(&PDOp::one(), &w0_gens, -12, 12).unwrap();
        assert_eq!(id, w0(-12, 12).unwrap());
    }

    #[test]
    fn s_tilde_maps_w0_to_w_alpha_beta() {
        for (al, be) in [
            (ps(1), ps(1)),
            (ps(2), ps(-3)),
            (ps(0), ps(1)),
            (ps(1), ParamScalar::theta()),
        ] {
            let out = act_span(&s_tilde(&al, &be), &w0_gens, -10, 10).unwrap();
            assert_eq!(out, w_alpha_beta(&al, &be, -10, 10).unwrap());
        }
    }

    #[test]
    fn gamma_coefficients() {
        let c = ParamScalar::theta();
        let w = gamma_point(&ps(1), &c, 8).unwrap();
        assert_eq!(w.a(0, 1), Some(-c.clone()));
        assert_eq!(w.a(-1, 1), Some(ParamScalar::zero()));
        assert_eq!(w.a(1, 1), Some(c.clone() * c.clone()));
        let h = gamma_point(&ps(0), &ps(5), 8).unwrap();
        assert_eq!(h.a(-1, 1), Some(ps(-1)));
        assert_eq!(h.a(0, 1), Some(ParamScalar::zero()));
        for eps in [q(1), qf(1, 2), qf(1, 10)] {
            let w = gamma_point(&ParamScalar::rational(eps.clone()), &ps(1), 6).unwrap();
            assert_eq!(w.a(0, 1), Some(ParamScalar::rational(-(Q::one() / eps))));
        }
    }

    #[test]
    fn gamma_images() {
        for (al, be) in [(ps(1), ps(1)), (ps(3), ps(2)), (ps(0), ps(1))] {
            let w = gamma_point(&al, &be, 14).unwrap();
            let (m, n) = quasiregular_check(&w, 3, 3, 14).unwrap().unwrap();
            let img = gamma_image(&w, n, 14, -6, 4).unwrap();
            assert_eq!(img, w_alpha_beta(&al, &be, -6, 4).unwrap());
            let img2 = gamma_image(&w, n + 1, 14, -6, 4).unwrap();
            assert_eq!(img, img2);
            if al.is_zero() {
                assert_eq!((m, n), (1, 1));
            }
        }
    }

    #[test]
    fn quasiregular_examples() {
        assert_eq!(
            quasiregular_check(&PDOp::one(), 3, 3, 8).unwrap(),
            Some((0, 0))
        );
        assert_eq!(quasiregular_check(&h_inverse(8), 3, 3, 8).unwrap(), None);
    }

    #[test]
    fn r_operator_oracle() {
        let cases = [vec![1], vec![2], vec![3, 1], vec![-1, 0]];
        for v in cases {
            let s = IndexSet::new(v.clone()).unwrap();
            let r = r_operator(&s);
            assert!(r_verifies(&r, &s, -12, 12).unwrap(), "{v:?}");
        }
        let s = IndexSet::new(vec![1]).unwrap();
        assert_eq!(r_operator(&s).to_string(), "x - D^-1");
        assert!(!r_verifies(&r_operator_printed(&s), &s, -12, 12).unwrap());
        assert_eq!(r_operator(&IndexSet::standard()), PDOp::one());
    }

    #[test]
    fn index_set_validation() {
        assert!(IndexSet::new(vec![0, 0]).is_err());
        assert!(IndexSet::new(vec![-2]).is_err());
        assert_eq!(IndexSet::parse("2,-1").unwrap().values(), &[2]);
        assert!(IndexSet::parse("a").is_err());
    }

    #[test]
    fn chi_and_stabilizer() {
        assert_eq!(chi_1d(&w0(-12, 12).unwrap(), 3), Ok(1));
        let w11 = w_alpha_beta(&ps(1), &ps(1), -12, 12).unwrap();
        assert_eq!(chi_1d(&w11, 3), Ok(1));
        assert_eq!(stabilizer_sample_1d(&w11, -1, 1), vec![0]);
        let w = w0(-12, 12).unwrap();
        assert_eq!(stabilizer_sample_1d(&w, -3, 1), vec![-3, -2, -1, 0]);
    }
}
