//! Rational functions in one formal parameter over the rationals.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::field::{q, q_str, Field, Q};

/// Dense univariate polynomial over `Q`; `coeffs[k]` multiplies `θ^k`.
/// Trailing zeros are always trimmed, so the zero polynomial is empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct QPoly {
    coeffs: Vec<Q>,
}

impl QPoly {
    pub fn new(mut coeffs: Vec<Q>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn constant(c: Q) -> Self {
        Self::new(vec![c])
    }

    /// The parameter θ itself.
    pub fn theta() -> Self {
        Self::new(vec![Q::zero(), Q::one()])
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&Q> {
        self.coeffs.last()
    }

    pub fn as_constant(&self) -> Option<Q> {
        match self.coeffs.len() {
            0 => Some(Q::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    pub fn scale(&self, c: &Q) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn eval(&self, at: &Q) -> Q {
        self.coeffs
            .iter()
            .rev()
            .fold(Q::zero(), |acc, c| acc * at + c)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &QPoly) -> (QPoly, QPoly) {
        let dd = d.degree().expect("division by zero polynomial");
        let lead = d.lead().unwrap().clone();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (QPoly::zero(), self.clone());
        }
        let mut quot = vec![Q::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] / &lead;
            if !c.is_zero() {
                for (i, dc) in d.coeffs.iter().enumerate() {
                    rem[k + i] = &rem[k + i] - &c * dc;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (QPoly::new(quot), QPoly::new(rem))
    }

    pub fn monic(&self) -> QPoly {
        match self.lead() {
            Some(l) => self.scale(&(Q::one() / l)),
            None => self.clone(),
        }
    }

    pub fn gcd(a: &QPoly, b: &QPoly) -> QPoly {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn fmt_with(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = *c < Q::zero();
            let mag = if neg { -c.clone() } else { c.clone() };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = match k {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{k}"),
            };
            if mono.is_empty() {
                out.push_str(&q_str(&mag));
            } else if mag.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{}*{}", q_str(&mag), mono));
            }
        }
        out
    }
}

impl Zero for QPoly {
    fn zero() -> Self {
        QPoly { coeffs: vec![] }
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl One for QPoly {
    fn one() -> Self {
        QPoly::constant(Q::one())
    }
}

impl Add for &QPoly {
    type Output = QPoly;
    fn add(self, o: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let z = Q::zero();
        QPoly::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&z) + o.coeffs.get(i).unwrap_or(&z))
                .collect(),
        )
    }
}

impl Add for QPoly {
    type Output = QPoly;
    fn add(self, o: QPoly) -> QPoly {
        &self + &o
    }
}

impl Neg for QPoly {
    type Output = QPoly;
    fn neg(self) -> QPoly {
        QPoly::new(self.coeffs.into_iter().map(|c| -c).collect())
    }
}

impl Sub for &QPoly {
    type Output = QPoly;
    fn sub(self, o: &QPoly) -> QPoly {
        self + &(-o.clone())
    }
}

impl Sub for QPoly {
    type Output = QPoly;
    fn sub(self, o: QPoly) -> QPoly {
        &self - &o
    }
}

impl Mul for &QPoly {
    type Output = QPoly;
    fn mul(self, o: &QPoly) -> QPoly {
        if self.is_zero() || o.is_zero() {
            return QPoly::zero();
        }
        let mut out = vec![Q::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        QPoly::new(out)
    }
}

impl Mul for QPoly {
    type Output = QPoly;
    fn mul(self, o: QPoly) -> QPoly {
        &self * &o
    }
}

/// An element of `Q(θ)` kept in canonical form: coprime numerator and
/// monic denominator. Structural equality is mathematical equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ParamScalar {
    num: QPoly,
    den: QPoly,
}

impl ParamScalar {
    pub fn new(num: QPoly, den: QPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Self::zero();
        }
        if den.degree() == Some(0) {
            let d = den.coeffs()[0].clone();
            return ParamScalar {
                num: num.scale(&(Q::one() / d)),
                den: QPoly::one(),
            };
        }
        let g = QPoly::gcd(&num, &den);
        let (num, den) = if g.degree() == Some(0) {
            (num, den)
        } else {
            (num.div_rem(&g).0, den.div_rem(&g).0)
        };
        let l = den.lead().unwrap().clone();
        let inv = Q::one() / l;
        ParamScalar {
            num: num.scale(&inv),
            den: den.scale(&inv),
        }
    }

    pub fn from_poly(p: QPoly) -> Self {
        ParamScalar {
            num: p,
            den: QPoly::one(),
        }
    }

    pub fn rational(c: Q) -> Self {
        Self::from_poly(QPoly::constant(c))
    }

    pub fn int(n: i64) -> Self {
        Self::rational(q(n))
    }

    /// The formal parameter θ (printed as `a`).
    pub fn theta() -> Self {
        Self::from_poly(QPoly::theta())
    }

    pub fn numer(&self) -> &QPoly {
        &self.num
    }

    pub fn denom(&self) -> &QPoly {
        &self.den
    }

    pub fn as_rational(&self) -> Option<Q> {
        if self.den.is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// Substitute a rational value for θ. Returns `None` at a pole.
    pub fn eval(&self, at: &Q) -> Option<Q> {
        let d = self.den.eval(at);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(at) / d)
        }
    }

    pub fn fmt_with(&self, var: &str) -> String {
        if self.den.is_one() {
            self.num.fmt_with(var)
        } else {
            format!("({})/({})", self.num.fmt_with(var), self.den.fmt_with(var))
        }
    }

    /// Whether printing needs parentheses when used as a product factor.
    pub fn is_compound(&self) -> bool {
        !self.den.is_one() || self.num.coeffs().iter().filter(|c| !c.is_zero()).count() > 1
    }

    /// True if the scalar is a negative rational or its leading numerator
    /// coefficient is negative (used to pick a " - " separator).
    pub fn is_negative_display(&self) -> bool {
        !self.is_compound() && self.num.lead().map_or(false, |l| *l < Q::zero())
    }
}

impl Zero for ParamScalar {
    fn zero() -> Self {
        ParamScalar {
            num: QPoly::zero(),
            den: QPoly::one(),
        }
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for ParamScalar {
    fn one() -> Self {
        Self::from_poly(QPoly::one())
    }
}

impl Add for ParamScalar {
    type Output = ParamScalar;
    fn add(self, o: ParamScalar) -> ParamScalar {
        if self.den == o.den {
            if self.den.is_one() {
                return ParamScalar::from_poly(&self.num + &o.num);
            }
            return ParamScalar::new(&self.num + &o.num, self.den);
        }
        ParamScalar::new(
            &(&self.num * &o.den) + &(&o.num * &self.den),
            &self.den * &o.den,
        )
    }
}

impl Sub for ParamScalar {
    type Output = ParamScalar;
    fn sub(self, o: ParamScalar) -> ParamScalar {
        self + (-o)
    }
}

impl Neg for ParamScalar {
    type Output = ParamScalar;
    fn neg(self) -> ParamScalar {
        ParamScalar {
            num: -self.num,
            den: self.den,
        }
    }
}

impl Mul for ParamScalar {
    type Output = ParamScalar;
    fn mul(self, o: ParamScalar) -> ParamScalar {
        if self.den.is_one() && o.den.is_one() {
            return ParamScalar::from_poly(&self.num * &o.num);
        }
        ParamScalar::new(&self.num * &o.num, &self.den * &o.den)
    }
}

impl Div for ParamScalar {
    type Output = ParamScalar;
    fn div(self, o: ParamScalar) -> ParamScalar {
        assert!(!o.is_zero(), "division by zero scalar");
        ParamScalar::new(&self.num * &o.den, &self.den * &o.num)
    }
}

impl<'a> Add<&'a ParamScalar> for &'a ParamScalar {
    type Output = ParamScalar;
    fn add(self, o: &ParamScalar) -> ParamScalar {
        self.clone() + o.clone()
    }
}

impl<'a> Mul<&'a ParamScalar> for &'a ParamScalar {
    type Output = ParamScalar;
    fn mul(self, o: &ParamScalar) -> ParamScalar {
        self.clone() * o.clone()
    }
}

impl fmt::Display for ParamScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_with("a"))
    }
}

impl Field for ParamScalar {
    fn from_i64(n: i64) -> Self {
        ParamScalar::int(n)
    }

    fn from_q(c: &Q) -> Self {
        ParamScalar::rational(c.clone())
    }
}
