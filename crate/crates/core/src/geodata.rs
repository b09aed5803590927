//! Krichever subspaces of `k((t))((u))` coming from curves on the plane:
//! a line, a conic and a plane cubic, each with `F = O` and the point
//! `p = (1:0:0)`.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bilocal::{
    graded_piece, solve_branch, support, DoubleSeries, EchelonBasis2, Monomial2, Window,
};
use crate::error::{Error, Result};
use crate::field::{q, Field, Q};
use crate::laurent::Laurent;

/// `W = k[generators]((pivot))` together with the curve data it encodes.
#[derive(Clone, Debug, PartialEq)]
pub struct GeoSubspace {
    pub name: String,
    /// Degree of the curve.
    pub m: i32,
    pub genus: i32,
    pub gaps: Vec<i32>,
    pub generators: Vec<DoubleSeries>,
    pub pivot: DoubleSeries,
    /// `b = −m²`.
    pub slope: i32,
    /// Precision the series were built with: rows `0..=j`, `t` through `tmax`.
    pub jmax: i32,
    pub tmax: i32,
}

fn check_shape(g: &GeoSubspace) -> Result<()> {
    for s in &g.generators {
        if s.nu()? != 0 || s.nubar()? >= 0 {
            return Err(Error::PreconditionViolated(format!(
                "{}: generator with leading {}",
                g.name,
                s.leading()?
            )));
        }
    }
    if g.pivot.nu()? != 1 {
        return Err(Error::PreconditionViolated(format!(
            "{}: pivot with ν = {}",
            g.name,
            g.pivot.nu()?
        )));
    }
    Ok(())
}

/// `W = k[t⁻¹]((t⁻¹u))`.
pub fn build_line() -> GeoSubspace {
    GeoSubspace {
        name: "line".into(),
        m: 1,
        genus: 0,
        gaps: vec![],
        generators: vec![DoubleSeries::monomial(q(1), -1, 0)],
        pivot: DoubleSeries::monomial(q(1), -1, 1),
        slope: -1,
        jmax: i32::MAX,
        tmax: i32::MAX,
    }
}

/// `α = t(1 + s)/(t² − u)` with `s = (1 + u − t²)^{1/2}`.
pub fn quadric_alpha(jmax: i32, tmax: i32) -> Result<DoubleSeries> {
    let cap_t = tmax + 8;
    let s =
        DoubleSeries::from_terms(&[(1, 0, 0), (1, 0, 1), (-1, 2, 0)]).sqrt_unit(jmax + 1, cap_t)?;
    let num = DoubleSeries::t().mul(&DoubleSeries::one().add(&s));
    let den = DoubleSeries::from_terms(&[(1, 2, 0), (-1, 0, 1)]);
    Ok(num.div(&den, jmax + 1, cap_t)?.truncate(jmax + 1, tmax + 1))
}

/// Conic `y² + z² − 2xz = 0`: `W = k[α]((α²u/t²))`.
pub fn build_quadric(jmax: i32, tmax: i32) -> Result<GeoSubspace> {
    let alpha = quadric_alpha(jmax, tmax)?;
    let pivot = alpha.mul(&alpha).shift(-2, 1).truncate(jmax + 1, tmax + 1);
    let g = GeoSubspace {
        name: "quadric".into(),
        m: 2,
        genus: 0,
        gaps: vec![],
        generators: vec![alpha],
        pivot,
        slope: -4,
        jmax,
        tmax,
    };
    check_shape(&g)?;
    Ok(g)
}

/// Coefficients of `β²(t³ − u) − β + 1` as a polynomial in `β`.
pub fn cubic_beta_poly() -> Vec<DoubleSeries> {
    vec![
        DoubleSeries::one(),
        DoubleSeries::constant(q(-1)),
        DoubleSeries::from_terms(&[(1, 3, 0), (-1, 0, 1)]),
    ]
}

/// `β = x/z` on the cubic, as the Hensel lift of the branch with a pole of
/// order 3 at `u = 0`.
pub fn cubic_beta(jmax: i32, tmax: i32) -> Result<DoubleSeries> {
    let seed = Laurent::exact([(-3, q(1)), (0, q(-1))]);
    solve_branch(&cubic_beta_poly(), &seed, jmax, tmax)
}

/// `β = (1 + (1 − 4(t³ − u))^{1/2}) / (2(t³ − u))`.
pub fn cubic_beta_closed(jmax: i32, tmax: i32) -> Result<DoubleSeries> {
    let cap_t = tmax + 8;
    let root =
        DoubleSeries::from_terms(&[(1, 0, 0), (-4, 3, 0), (4, 0, 1)]).sqrt_unit(jmax + 1, cap_t)?;
    let den = DoubleSeries::from_terms(&[(2, 3, 0), (-2, 0, 1)]);
    Ok(DoubleSeries::one()
        .add(&root)
        .div(&den, jmax + 1, cap_t)?
        .truncate(jmax + 1, tmax + 1))
}

/// Homogeneous polynomial in `(x, y, z)` with rational coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly3(BTreeMap<[u32; 3], Q>);

impl Poly3 {
    pub fn from_terms(terms: &[(i64, [u32; 3])]) -> Self {
        let mut m = BTreeMap::new();
        for (c, e) in terms {
            let slot = m.entry(*e).or_insert_with(Q::zero);
            *slot += q(*c);
        }
        m.retain(|_, c: &mut Q| !c.is_zero());
        Poly3(m)
    }

    pub fn partial(&self, var: usize) -> Self {
        let mut m = BTreeMap::new();
        for (e, c) in &self.0 {
            if e[var] > 0 {
                let mut d = *e;
                d[var] -= 1;
                m.insert(d, c * q(e[var] as i64));
            }
        }
        Poly3(m)
    }

    pub fn eval(&self, p: [Q; 3]) -> Q {
        self.0.iter().fold(Q::zero(), |acc, (e, c)| {
            let mut v = c.clone();
            for k in 0..3 {
                for _ in 0..e[k] {
                    v *= &p[k];
                }
            }
            acc + v
        })
    }

    /// Sets `var = 0`.
    pub fn restrict_zero(&self, var: usize) -> Self {
        Poly3(
            self.0
                .iter()
                .filter(|(e, _)| e[var] == 0)
                .map(|(e, c)| (*e, c.clone()))
                .collect(),
        )
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32; 3], &Q)> {
        self.0.iter()
    }
}

fn det(mut a: Vec<Vec<Q>>) -> Q {
    let n = a.len();
    let mut d = Q::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Q::zero();
        };
        if p != col {
            a.swap(p, col);
            d = -d;
        }
        let pivot = a[col][col].clone();
        d *= &pivot;
        for r in col + 1..n {
            let f = &a[r][col] / &pivot;
            if f.is_zero() {
                continue;
            }
            for c in col..n {
                let x = &a[col][c] * &f;
                a[r][c] -= x;
            }
        }
    }
    d
}

/// Resultant of two binary forms given by coefficient lists in one chart.
fn resultant(f: &[Q], g: &[Q]) -> Q {
    let (m, n) = (f.len() - 1, g.len() - 1);
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for k in 0..n {
        let mut r = vec![Q::zero(); size];
        for (i, c) in f.iter().enumerate() {
            r[k + i] = c.clone();
        }
        rows.push(r);
    }
    for k in 0..m {
        let mut r = vec![Q::zero(); size];
        for (i, c) in g.iter().enumerate() {
            r[k + i] = c.clone();
        }
        rows.push(r);
    }
    det(rows)
}

/// Facts about the cubic `y³ − x²z + xz²`, checked symbolically.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CubicFacts {
    pub passes_through_p: bool,
    pub tangent_is_z: bool,
    pub tangent_meets_with_multiplicity_3: bool,
    pub smooth: bool,
}

impl CubicFacts {
    pub fn all(&self) -> bool {
        self.passes_through_p
            && self.tangent_is_z
            && self.tangent_meets_with_multiplicity_3
            && self.smooth
    }
}

pub fn cubic_curve() -> Poly3 {
    Poly3::from_terms(&[(1, [0, 3, 0]), (-1, [2, 0, 1]), (1, [1, 0, 2])])
}

pub fn cubic_facts() -> CubicFacts {
    let f = cubic_curve();
    let p = [q(1), q(0), q(0)];
    let grad: Vec<Q> = (0..3).map(|v| f.partial(v).eval(p.clone())).collect();
    let on_line = f.restrict_zero(2);
    let triple = on_line.terms().count() == 1
        && on_line
            .terms()
            .all(|(e, c)| *e == [0, 3, 0] && !c.is_zero());
    // Singular points need ∂_y F = 3y² = 0, so y = 0; the remaining partials
    // restricted to y = 0 are binary forms in (x, z) whose resultant must not
    // vanish. In characteristic 0 Euler's relation gives F = 0 there as well.
    let fy_only_y = f.partial(1).terms().all(|(e, _)| e[0] == 0 && e[2] == 0);
    let binary = |p: &Poly3| -> Vec<Q> {
        let p = p.restrict_zero(1);
        let deg = p.terms().map(|(e, _)| e[0] + e[2]).max().unwrap_or(0);
        (0..=deg)
            .map(|k| {
                p.terms()
                    .filter(|(e, _)| e[0] == k)
                    .map(|(_, c)| c.clone())
                    .fold(Q::zero(), |a, c| a + c)
            })
            .collect()
    };
    let res = resultant(&binary(&f.partial(0)), &binary(&f.partial(2)));
    CubicFacts {
        passes_through_p: f.eval(p).is_zero(),
        tangent_is_z: grad[0].is_zero() && grad[1].is_zero() && !grad[2].is_zero(),
        tangent_meets_with_multiplicity_3: triple,
        smooth: fy_only_y && !res.is_zero(),
    }
}

/// Plane cubic `y³ − x²z + xz² = 0`: `W = k[β, βt]((β³u))`.
pub fn build_cubic(jmax: i32, tmax: i32) -> Result<GeoSubspace> {
    if !cubic_facts().all() {
        return Err(Error::PreconditionViolated(
            "cubic is not smooth with a triple tangent at p".into(),
        ));
    }
    let beta = cubic_beta(jmax, tmax)?;
    let beta_t = beta.shift(1, 0);
    let pivot = beta
        .mul(&beta)
        .mul(&beta)
        .shift(0, 1)
        .truncate(jmax + 1, tmax + 1);
    let g = GeoSubspace {
        name: "cubic".into(),
        m: 3,
        genus: 1,
        gaps: gaps(3),
        generators: vec![beta, beta_t],
        pivot,
        slope: -9,
        jmax,
        tmax,
    };
    check_shape(&g)?;
    Ok(g)
}

/// Builds an example by name with the given precision.
pub fn build(name: &str, jmax: i32, tmax: i32) -> Result<GeoSubspace> {
    match name {
        "line" => Ok(build_line()),
        "quadric" => build_quadric(jmax, tmax),
        "cubic" => build_cubic(jmax, tmax),
        other => Err(Error::Config(format!("unknown example {other:?}"))),
    }
}

pub const EXAMPLES: [&str; 3] = ["line", "quadric", "cubic"];

/// Positive integers outside the semigroup `⟨m, m−1⟩`.
pub fn gaps(m: i32) -> Vec<i32> {
    if m < 2 {
        return vec![];
    }
    let a = m - 1;
    let frob = m * a - m - a;
    (1..=frob.max(0))
        .filter(|&n| !(0..=n / m).any(|k| (n - k * m) % a == 0))
        .collect()
}

/// Monomials `t^i u^j` with `i ≤ −m²j`, minus `t^{−α−m²j}u^j` for gaps `α`.
pub fn predicted_support(g: &GeoSubspace, w: Window) -> Vec<Monomial2> {
    let m2 = g.m * g.m;
    let mut out = Vec::new();
    for j in w.jmin..=w.jmax {
        for i in w.imin..=w.imax.min(-m2 * j) {
            if g.gaps.iter().any(|a| i == -a - m2 * j) {
                continue;
            }
            out.push(Monomial2::new(i, j));
        }
    }
    out.sort();
    out
}

/// Products `Π gen^e · pivot^j` whose leading monomial, read off the
/// factors, lies in the window, with the exponent data that produced them.
pub struct Enumeration {
    pub elements: Vec<DoubleSeries>,
    pub exponents: Vec<(Vec<u32>, i32)>,
}

pub fn enumerate(g: &GeoSubspace, w: Window) -> Result<Enumeration> {
    let leads: Vec<i32> = g
        .generators
        .iter()
        .map(|s| s.nubar())
        .collect::<Result<_>>()?;
    let pivot_lead = g.pivot.nubar()?;
    let ucap = w.jmax - w.jmin + 2;
    let tcap = g
        .tmax
        .min(w.imax.saturating_add(g.m * g.m * (w.jmax - w.jmin + 1)) + 16);
    let mut pivot_pows: HashMap<i32, DoubleSeries> = HashMap::new();
    let mut gen_pows: Vec<Vec<DoubleSeries>> = vec![vec![DoubleSeries::one()]; g.generators.len()];
    let mut out = Enumeration {
        elements: vec![],
        exponents: vec![],
    };
    for j in w.jmin..=w.jmax {
        let base = j * pivot_lead;
        if base < w.imin {
            continue;
        }
        let pj = match pivot_pows.get(&j) {
            Some(p) => p.clone(),
            None => {
                let p = g.pivot.pow(j, ucap, tcap)?;
                pivot_pows.insert(j, p.clone());
                p
            }
        };
        let mut stack: Vec<(usize, Vec<u32>, i32)> = vec![(0, vec![], base)];
        while let Some((k, exps, lead)) = stack.pop() {
            if k == g.generators.len() {
                if lead > w.imax {
                    continue;
                }
                let mut prod = pj.clone();
                for (gi, &e) in exps.iter().enumerate() {
                    while gen_pows[gi].len() <= e as usize {
                        let next = gen_pows[gi].last().unwrap().mul(&g.generators[gi]);
                        gen_pows[gi].push(next);
                    }
                    prod = prod.mul(&gen_pows[gi][e as usize]);
                }
                out.elements.push(prod);
                out.exponents.push((exps, j));
                continue;
            }
            let mut e = 0u32;
            loop {
                let l = lead + e as i32 * leads[k];
                if l < w.imin {
                    break;
                }
                let mut next = exps.clone();
                next.push(e);
                stack.push((k + 1, next, l));
                e += 1;
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupportReport {
    pub example: String,
    pub window: Window,
    pub support_match: bool,
    /// Monomials predicted but not found.
    pub missing: Vec<Monomial2>,
    /// Monomials found but not predicted.
    pub unexpected: Vec<Monomial2>,
    pub computed: Vec<Monomial2>,
    pub elements: usize,
}

pub fn verify_support(g: &GeoSubspace, w: Window) -> Result<SupportReport> {
    let en = enumerate(g, w)?;
    let basis = EchelonBasis2::new(&en.elements, w)?;
    let computed = support(&basis);
    let predicted = predicted_support(g, w);
    let cs: BTreeSet<Monomial2> = computed.iter().copied().collect();
    let ps: BTreeSet<Monomial2> = predicted.iter().copied().collect();
    let missing: Vec<Monomial2> = ps.difference(&cs).copied().collect();
    let unexpected: Vec<Monomial2> = cs.difference(&ps).copied().collect();
    Ok(SupportReport {
        example: g.name.clone(),
        window: w,
        support_match: missing.is_empty() && unexpected.is_empty(),
        missing,
        unexpected,
        computed,
        elements: en.elements.len(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilizerReport {
    pub example: String,
    pub window: Window,
    pub slope: i32,
    pub basis_checked: usize,
    pub combinations_checked: usize,
}

/// `ν̄(a) ≤ bν(a)` for enumerated elements and random combinations of them.
pub fn stabilizer_inequality_check(
    g: &GeoSubspace,
    w: Window,
    samples: usize,
    seed: u64,
) -> Result<StabilizerReport> {
    let en = enumerate(g, w)?;
    let b = g.slope;
    let check = |f: &DoubleSeries, what: &str| -> Result<()> {
        let m = f.leading()?;
        if m.i > b * m.j {
            return Err(Error::CounterexampleFound(format!(
                "{what} has leading {m}, violating ν̄ ≤ {b}ν"
            )));
        }
        Ok(())
    };
    for (f, (e, j)) in en.elements.iter().zip(&en.exponents) {
        check(f, &format!("product {e:?} · pivot^{j}"))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = en.elements.len();
    let mut done = 0;
    if n > 0 {
        for _ in 0..samples {
            let k = rng.gen_range(1..=n.min(4));
            let mut acc = DoubleSeries::zero();
            let mut picked = Vec::new();
            for _ in 0..k {
                let idx = rng.gen_range(0..n);
                let c = rng.gen_range(1..=5) * if rng.gen_bool(0.5) { 1 } else { -1 };
                acc = acc.add(&en.elements[idx].scale(&q(c)));
                picked.push((idx, c));
            }
            let cut = acc.truncate(w.jmax + 1, w.imax + 1);
            match cut.leading() {
                Ok(_) => {
                    check(&cut, &format!("combination {picked:?}"))?;
                    done += 1;
                }
                Err(Error::ZeroWithinPrecision) => {}
                Err(e) => return Err(e),
            }
        }
    }
    Ok(StabilizerReport {
        example: g.name.clone(),
        window: w,
        slope: b,
        basis_checked: n,
        combinations_checked: done,
    })
}

/// Rows below the lowest expected pivot that must be complete for χ.
pub const CHI_MARGIN: i32 = 4;

/// Window used to read off `χ(W(n))` for `n = 0..=nmax`.
pub fn chi_window(g: &GeoSubspace, nmax: i32, margin: i32) -> Window {
    let frob = g.gaps.iter().copied().max().unwrap_or(0);
    Window::new(-g.m * g.m * nmax - frob - margin - 1, 1, 0, nmax)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChiFit {
    pub chi: Vec<i64>,
    pub a: i64,
    pub b: i64,
}

/// `χ(W(n))` for `n = 0..=nmax` and the affine fit `a + bn`.
pub fn chi_fit(g: &GeoSubspace, nmax: i32) -> Result<ChiFit> {
    if nmax < 0 {
        return Err(Error::Config(format!("nmax = {nmax} is negative")));
    }
    let margin = CHI_MARGIN;
    let w = chi_window(g, nmax, margin);
    let en = enumerate(g, w)?;
    let basis = EchelonBasis2::new(&en.elements, w)?;
    let chi: Vec<i64> = (0..=nmax)
        .map(|n| graded_piece(&basis, n)?.chi(margin))
        .collect::<Result<_>>()?;
    let a = chi[0];
    let b = if chi.len() > 1 { chi[1] - chi[0] } else { 0 };
    if chi.iter().enumerate().any(|(n, c)| *c != a + b * n as i64) {
        return Err(Error::NotAffine(chi));
    }
    Ok(ChiFit { chi, a, b })
}

fn rank(mut rows: Vec<Vec<Q>>) -> usize {
    let mut r = 0;
    let cols = rows.first().map_or(0, |x| x.len());
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&k| !rows[k][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].inv();
        for k in r + 1..rows.len() {
            let f = &rows[k][c] * &inv;
            if f.is_zero() {
                continue;
            }
            for cc in c..cols {
                let x = &rows[r][cc] * &f;
                rows[k][cc] -= x;
            }
        }
        r += 1;
    }
    r
}

fn h0_in_window(g: &GeoSubspace, w: Window) -> Result<usize> {
    let en = enumerate(g, w)?;
    let basis = EchelonBasis2::new(&en.elements, w)?;
    // In a reduced basis only vectors with pivot in O₁ ∩ O₂ can combine to
    // an element of O₂; the rest have a negative-t pivot coefficient.
    let cands: Vec<&DoubleSeries> = basis
        .vectors()
        .filter(|(p, _)| p.j >= 0 && p.i >= 0 && w.contains(**p))
        .map(|(_, v)| v)
        .collect();
    if cands.is_empty() {
        return Ok(0);
    }
    let mut cols: BTreeSet<(i32, i32)> = BTreeSet::new();
    for v in &cands {
        for (j, r) in v.rows() {
            if j < 0 || j > w.jmax {
                continue;
            }
            for (i, _) in r.terms() {
                if i < 0 {
                    cols.insert((j, i));
                }
            }
        }
    }
    let cols: Vec<(i32, i32)> = cols.into_iter().collect();
    // Kernel of cands → negative-t coefficients, as (#cands − rank of the
    // transposed system).
    let matrix: Vec<Vec<Q>> = cols
        .iter()
        .map(|&(j, i)| {
            cands
                .iter()
                .map(|v| v.coeff(i, j).unwrap_or_else(Q::zero))
                .collect()
        })
        .collect();
    let r = if matrix.is_empty() { 0 } else { rank(matrix) };
    Ok(cands.len() - r)
}

/// `dim W ∩ O₁ ∩ O₂`, required to agree on `w` and on a window one row
/// and `m²` columns larger.
pub fn h0_dim(g: &GeoSubspace, w: Window) -> Result<usize> {
    let m2 = g.m * g.m;
    let bigger = Window::new(w.imin - m2, w.imax + 1, w.jmin, w.jmax + 1);
    let d1 = h0_in_window(g, w)?;
    let d2 = h0_in_window(g, bigger)?;
    if d1 != d2 {
        return Err(Error::NotStabilized(vec![d1, d2]));
    }
    Ok(d1)
}

/// Default support window: `t^i u^j` with `i ∈ [−24, 8]`, `j ∈ [−1, 3]`.
pub fn default_window() -> Window {
    Window::new(-24, 8, -1, 3)
}

/// Precision `(rows, t-order)` that certifies [`default_window`] and the
/// χ and H⁰ windows used by the checks.
pub fn default_precision(name: &str) -> (i32, i32) {
    match name {
        "line" => (8, 48),
        "quadric" => (6, 60),
        _ => (6, 90),
    }
}

/// Monomials of [`predicted_support`]'s excluded rows that fall in `w`.
pub fn excluded_monomials(g: &GeoSubspace, w: Window) -> Vec<Monomial2> {
    let m2 = g.m * g.m;
    let mut out: Vec<Monomial2> = (w.jmin..=w.jmax)
        .flat_map(|j| g.gaps.iter().map(move |a| Monomial2::new(-a - m2 * j, j)))
        .filter(|m| w.contains(*m))
        .collect();
    out.sort();
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub i: i32,
    pub j: i32,
    /// `"missing"` or `"unexpected"`.
    pub kind: String,
}

/// Report for one example; checks that were not run are left empty.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct KricheverReport {
    pub example: String,
    pub window: Option<Window>,
    pub support_match: Option<bool>,
    pub mismatches: Vec<Mismatch>,
    pub excluded: Vec<Monomial2>,
    pub chi: Vec<i64>,
    pub a: Option<i64>,
    pub b: Option<i64>,
    pub h0: Option<usize>,
    pub stabilizer_checked: Option<usize>,
}

impl KricheverReport {
    pub fn new(example: &str) -> Self {
        KricheverReport {
            example: example.into(),
            ..Default::default()
        }
    }

    pub fn with_support(mut self, g: &GeoSubspace, r: &SupportReport) -> Self {
        self.window = Some(r.window);
        self.support_match = Some(r.support_match);
        self.mismatches = r
            .missing
            .iter()
            .map(|m| (m, "missing"))
            .chain(r.unexpected.iter().map(|m| (m, "unexpected")))
            .map(|(m, k)| Mismatch {
                i: m.i,
                j: m.j,
                kind: k.into(),
            })
            .collect();
        self.excluded = excluded_monomials(g, r.window);
        self
    }

    pub fn with_chi(mut self, f: &ChiFit) -> Self {
        self.chi = f.chi.clone();
        self.a = Some(f.a);
        self.b = Some(f.b);
        self
    }
}
