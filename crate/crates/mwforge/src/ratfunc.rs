//! Dense univariate polynomials and reduced rational functions over any
//! [`FieldCtx`].
//!
//! These realize the function fields `K = k(t)` and `K_d = k(u)`: a
//! function-field [`FieldElement`](crate::fields::FieldElement) wraps a
//! [`RatFunc`] in canonical form.  Canonical form means numerator and
//! denominator are coprime and the denominator is monic; reduction happens
//! eagerly on every construction so that [`RatFunc::naive_height`] (the
//! degree height `max(deg num, deg den)`) is always meaningful.
//!
//! The zero polynomial has degree `None`, never `-1`.

use std::fmt;

use crate::fields::{FieldCtx, FieldElement};
use crate::{Error, Result};

/// Dense polynomial; `coeffs[i]` is the degree-`i` coefficient and the
/// leading coefficient is nonzero (empty vector = zero polynomial).
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    ctx: FieldCtx,
    coeffs: Vec<FieldElement>,
}

/// Multiplications switch from schoolbook to Karatsuba above this length.
const KARATSUBA_MIN: usize = 64;

impl Poly {
    pub fn zero(ctx: &FieldCtx) -> Self {
        Poly { ctx: ctx.clone(), coeffs: Vec::new() }
    }

    pub fn one(ctx: &FieldCtx) -> Self {
        Poly::constant(ctx.one())
    }

    /// The variable itself, as a polynomial.
    pub fn var(ctx: &FieldCtx) -> Self {
        Poly::monomial(ctx.one(), 1)
    }

    pub fn constant(c: FieldElement) -> Self {
        let ctx = c.ctx().clone();
        Poly::from_coeffs(&ctx, vec![c])
    }

    pub fn monomial(c: FieldElement, deg: usize) -> Self {
        let ctx = c.ctx().clone();
        let mut coeffs = vec![ctx.zero(); deg + 1];
        coeffs[deg] = c;
        Poly::from_coeffs(&ctx, coeffs)
    }

    /// Build from coefficients (low degree first); trailing zeros trimmed.
    pub fn from_coeffs(ctx: &FieldCtx, mut coeffs: Vec<FieldElement>) -> Self {
        while coeffs.last().is_some_and(FieldElement::is_zero) {
            coeffs.pop();
        }
        Poly { ctx: ctx.clone(), coeffs }
    }

    /// Convenience constructor from integer coefficients, low degree first.
    pub fn from_integers(ctx: &FieldCtx, coeffs: &[i64]) -> Self {
        Poly::from_coeffs(ctx, coeffs.iter().map(|&c| ctx.from_integer(c)).collect())
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn coeff(&self, i: usize) -> FieldElement {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.ctx.zero())
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&FieldElement> {
        self.coeffs.last()
    }

    pub fn scale(&self, c: &FieldElement) -> Self {
        if c.is_zero() {
            return Poly::zero(&self.ctx);
        }
        Poly::from_coeffs(&self.ctx, self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Divide by the leading coefficient.
    pub fn monic(&self) -> Self {
        match self.leading() {
            None => self.clone(),
            Some(l) if l.is_one() => self.clone(),
            Some(l) => self.scale(&l.inv().expect("leading coefficient nonzero")),
        }
    }

    fn add_impl(&self, other: &Self, negate_rhs: bool) -> Self {
        assert_eq!(self.ctx, other.ctx, "polynomial ctx mismatch");
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.coeff(i);
            let b = other.coeff(i);
            out.push(if negate_rhs { &a - &b } else { &a + &b });
        }
        Poly::from_coeffs(&self.ctx, out)
    }

    fn mul_schoolbook(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(&self.ctx);
        }
        let mut out = vec![self.ctx.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Poly::from_coeffs(&self.ctx, out)
    }

    fn mul_impl(&self, other: &Self) -> Self {
        assert_eq!(self.ctx, other.ctx, "polynomial ctx mismatch");
        let (n, m) = (self.coeffs.len(), other.coeffs.len());
        if n.min(m) < KARATSUBA_MIN {
            return self.mul_schoolbook(other);
        }
        // Karatsuba: split both at half the longer length.
        let half = n.max(m) / 2;
        let split = |p: &Poly| -> (Poly, Poly) {
            if p.coeffs.len() <= half {
                (p.clone(), Poly::zero(&p.ctx))
            } else {
                (
                    Poly::from_coeffs(&p.ctx, p.coeffs[..half].to_vec()),
                    Poly::from_coeffs(&p.ctx, p.coeffs[half..].to_vec()),
                )
            }
        };
        let (a0, a1) = split(self);
        let (b0, b1) = split(other);
        let low = a0.mul_impl(&b0);
        let high = a1.mul_impl(&b1);
        let mid = a0.add_impl(&a1, false).mul_impl(&b0.add_impl(&b1, false));
        let mid = mid.add_impl(&low, true).add_impl(&high, true);
        let mut out = vec![self.ctx.zero(); n + m - 1];
        for (i, c) in low.coeffs.into_iter().enumerate() {
            out[i] = c;
        }
        for (i, c) in mid.coeffs.into_iter().enumerate() {
            out[half + i] = &out[half + i] + &c;
        }
        for (i, c) in high.coeffs.into_iter().enumerate() {
            out[2 * half + i] = &out[2 * half + i] + &c;
        }
        Poly::from_coeffs(&self.ctx, out)
    }

    pub fn pow(&self, exp: usize) -> Self {
        let mut acc = Poly::one(&self.ctx);
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_impl(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_impl(&base);
            }
        }
        acc
    }

    /// Quotient and remainder; errors on a zero divisor or ctx mismatch.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self)> {
        if self.ctx != divisor.ctx {
            return Err(Error::CtxMismatch);
        }
        let d = divisor.degree().ok_or(Error::DivisionByZero)?;
        let lead_inv = divisor.leading().unwrap().inv()?;
        let mut rem = self.coeffs.clone();
        let mut quo = vec![self.ctx.zero(); self.coeffs.len().saturating_sub(d)];
        while rem.len() > d {
            let k = rem.len() - 1 - d;
            let c = rem.last().unwrap() * &lead_inv;
            if !c.is_zero() {
                for (i, b) in divisor.coeffs.iter().enumerate() {
                    rem[k + i] = &rem[k + i] - &(&c * b);
                }
            }
            quo[k] = c;
            while rem.last().is_some_and(FieldElement::is_zero) {
                rem.pop();
            }
            if rem.is_empty() {
                break;
            }
        }
        Ok((
            Poly::from_coeffs(&self.ctx, quo),
            Poly::from_coeffs(&self.ctx, rem),
        ))
    }

    /// Exact division; errors if the remainder is nonzero.
    pub fn exact_div(&self, divisor: &Self) -> Result<Self> {
        let (q, r) = self.div_rem(divisor)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::InexactDivision)
        }
    }

    /// Monic Euclidean gcd.  `gcd(a, 0)` is the monic scaling of `a`.
    pub fn gcd(a: &Self, b: &Self) -> Result<Self> {
        if a.ctx != b.ctx {
            return Err(Error::CtxMismatch);
        }
        let (mut r0, mut r1) = (a.clone(), b.clone());
        while !r1.is_zero() {
            let (_, r2) = r0.div_rem(&r1)?;
            r0 = r1;
            r1 = r2;
        }
        Ok(r0.monic())
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &FieldElement) -> Result<FieldElement> {
        if *x.ctx() != self.ctx {
            return Err(Error::CtxMismatch);
        }
        let mut acc = self.ctx.zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        Ok(acc)
    }

    /// The polynomial `p(c * v)`: coefficient `i` is multiplied by `c^i`.
    pub fn substitute_scale(&self, c: &FieldElement) -> Result<Self> {
        if *c.ctx() != self.ctx {
            return Err(Error::CtxMismatch);
        }
        let mut power = self.ctx.one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for (i, a) in self.coeffs.iter().enumerate() {
            if i > 0 {
                power = &power * c;
            }
            out.push(a * &power);
        }
        Ok(Poly::from_coeffs(&self.ctx, out))
    }

    /// Render with the given variable name, e.g. `u^3 + 2*u + 1`.
    pub fn render(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mut s = c.to_string();
            let neg = s.starts_with('-');
            if neg {
                s = s[1..].to_string();
            }
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let needs_parens = if i == 0 {
                s.contains(['+', ' '])
            } else {
                s.contains(['+', '-', '*', '/', ' '])
            };
            let coef = if needs_parens { format!("({s})") } else { s };
            match i {
                0 => out.push_str(&coef),
                _ => {
                    if coef != "1" {
                        out.push_str(&coef);
                        out.push('*');
                    }
                    out.push_str(var);
                    if i > 1 {
                        out.push_str(&format!("^{i}"));
                    }
                }
            }
        }
        out
    }

    /// Parse the grammar produced by [`Poly::render`] with integer or
    /// `a/b` fraction coefficients, e.g. `u^3 - 2*u + 1/2`.
    pub fn parse(ctx: &FieldCtx, var: &str, input: &str) -> Result<Self> {
        let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse("empty input".into()));
        }
        let mut terms: Vec<(bool, String)> = Vec::new();
        let mut cur = String::new();
        let mut sign = false;
        let mut chars = s.chars().peekable();
        if chars.peek() == Some(&'-') {
            sign = true;
            chars.next();
        } else if chars.peek() == Some(&'+') {
            chars.next();
        }
        for ch in chars {
            if ch == '+' || ch == '-' {
                terms.push((sign, std::mem::take(&mut cur)));
                sign = ch == '-';
            } else {
                cur.push(ch);
            }
        }
        terms.push((sign, cur));

        let mut acc = Poly::zero(ctx);
        for (neg, term) in terms {
            if term.is_empty() {
                return Err(Error::Parse("empty term".into()));
            }
            let (coef_str, deg) = match term.find(var) {
                None => (term.as_str(), 0usize),
                Some(pos) => {
                    let after = &term[pos + var.len()..];
                    let deg = if after.is_empty() {
                        1
                    } else if let Some(exp) = after.strip_prefix('^') {
                        exp.parse::<usize>()
                            .map_err(|_| Error::Parse(format!("bad exponent: {after}")))?
                    } else {
                        return Err(Error::Parse(format!("unexpected suffix: {after}")));
                    };
                    let before = term[..pos].trim_end_matches('*');
                    (before, deg)
                }
            };
            let coef = if coef_str.is_empty() {
                ctx.one()
            } else if let Some((n, d)) = coef_str.split_once('/') {
                let n: i64 = n.parse().map_err(|_| Error::Parse(format!("bad numerator {n}")))?;
                let d: i64 = d.parse().map_err(|_| Error::Parse(format!("bad denominator {d}")))?;
                ctx.from_integer(n).checked_div(&ctx.from_integer(d))?
            } else {
                let n: i64 = coef_str
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad coefficient {coef_str}")))?;
                ctx.from_integer(n)
            };
            let coef = if neg { -coef } else { coef };
            acc = &acc + &Poly::monomial(coef, deg);
        }
        Ok(acc)
    }
}

macro_rules! poly_binop {
    ($trait:ident, $method:ident, $impl:expr) => {
        impl std::ops::$trait for &Poly {
            type Output = Poly;
            fn $method(self, rhs: &Poly) -> Poly {
                let f: fn(&Poly, &Poly) -> Poly = $impl;
                f(self, rhs)
            }
        }
    };
}

poly_binop!(Add, add, |a, b| a.add_impl(b, false));
poly_binop!(Sub, sub, |a, b| a.add_impl(b, true));
poly_binop!(Mul, mul, |a, b| a.mul_impl(b));

impl std::ops::Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::from_coeffs(&self.ctx, self.coeffs.iter().map(|c| -c).collect())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render("x"))
    }
}

/// A rational function in canonical form: coprime numerator/denominator,
/// monic denominator.
#[derive(Clone, PartialEq, Eq)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    /// Construct and reduce to canonical form.
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if num.ctx() != den.ctx() {
            return Err(Error::CtxMismatch);
        }
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        if num.is_zero() {
            return Ok(RatFunc { den: Poly::one(num.ctx()), num });
        }
        let g = Poly::gcd(&num, &den)?;
        let (mut num, mut den) = if g.is_one() {
            (num, den)
        } else {
            (num.exact_div(&g)?, den.exact_div(&g)?)
        };
        let lead = den.leading().expect("nonzero denominator").clone();
        if !lead.is_one() {
            let inv = lead.inv()?;
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        Ok(RatFunc { num, den })
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFunc { den: Poly::one(p.ctx()), num: p }
    }

    pub fn constant(c: FieldElement) -> Self {
        RatFunc::from_poly(Poly::constant(c))
    }

    pub fn zero(ctx: &FieldCtx) -> Self {
        RatFunc::from_poly(Poly::zero(ctx))
    }

    pub fn one(ctx: &FieldCtx) -> Self {
        RatFunc::from_poly(Poly::one(ctx))
    }

    pub fn ctx(&self) -> &FieldCtx {
        self.num.ctx()
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// True when the denominator is 1.
    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        RatFunc::new(&self.num * &other.den, &self.den * &other.num)
    }

    /// Evaluate at `c`; errors if `c` is a pole.
    pub fn eval(&self, c: &FieldElement) -> Result<FieldElement> {
        let den = self.den.eval(c)?;
        if den.is_zero() {
            return Err(Error::EvalAtPole);
        }
        self.num.eval(c)?.checked_div(&den)
    }

    /// The function `r(c * u)`; requires `c != 0` so poles stay finite.
    pub fn substitute_scale(&self, c: &FieldElement) -> Result<Self> {
        if c.is_zero() {
            return Err(Error::ZeroScale);
        }
        RatFunc::new(self.num.substitute_scale(c)?, self.den.substitute_scale(c)?)
    }

    /// Degree height `max(deg num, deg den)`; zero has height 0.
    pub fn naive_height(&self) -> u64 {
        let n = self.num.degree().unwrap_or(0);
        let d = self.den.degree().unwrap_or(0);
        n.max(d) as u64
    }

    pub fn render(&self, var: &str) -> String {
        if self.den.is_one() {
            self.num.render(var)
        } else {
            format!("({})/({})", self.num.render(var), self.den.render(var))
        }
    }

    /// Parse `poly` or `(poly)/(poly)` in the rendered grammar.
    pub fn parse(ctx: &FieldCtx, var: &str, input: &str) -> Result<Self> {
        let s = input.trim();
        if let Some((a, b)) = s.split_once(")/(") {
            let a = a.strip_prefix('(').ok_or_else(|| Error::Parse("expected '('".into()))?;
            let b = b.strip_suffix(')').ok_or_else(|| Error::Parse("expected ')'".into()))?;
            RatFunc::new(Poly::parse(ctx, var, a)?, Poly::parse(ctx, var, b)?)
        } else {
            Ok(RatFunc::from_poly(Poly::parse(ctx, var, s)?))
        }
    }
}

macro_rules! ratfunc_binop {
    ($trait:ident, $method:ident, $impl:expr) => {
        impl std::ops::$trait for &RatFunc {
            type Output = RatFunc;
            fn $method(self, rhs: &RatFunc) -> RatFunc {
                let f: fn(&RatFunc, &RatFunc) -> RatFunc = $impl;
                f(self, rhs)
            }
        }
    };
}

ratfunc_binop!(Add, add, |a, b| {
    RatFunc::new(
        &(&a.num * &b.den) + &(&b.num * &a.den),
        &a.den * &b.den,
    )
    .expect("nonzero denominator")
});
ratfunc_binop!(Sub, sub, |a, b| {
    RatFunc::new(
        &(&a.num * &b.den) - &(&b.num * &a.den),
        &a.den * &b.den,
    )
    .expect("nonzero denominator")
});
ratfunc_binop!(Mul, mul, |a, b| {
    RatFunc::new(&a.num * &b.num, &a.den * &b.den).expect("nonzero denominator")
});

impl std::ops::Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render("x"))
    }
}
