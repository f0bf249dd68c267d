//! Exact arithmetic for every coefficient field used in the crate.
//!
//! A [`FieldCtx`] describes one of four kinds of field:
//!
//! * `F_p` — a prime field with `u64` residues,
//! * `F_{p^m}` — an extension field `F_p[z]/(modulus)` with a deterministic
//!   modulus (the lexicographically smallest monic irreducible of degree
//!   `m`, coefficients compared low-degree first),
//! * `Q` — arbitrary-precision rationals,
//! * `k(v)` — a rational-function field over any of the above (nesting
//!   gives towers such as `Q(a)(t)`).
//!
//! A [`FieldElement`] pairs a context with a representation.  Contexts are
//! immutable and cheaply clonable (`Arc` inside), elements are plain
//! values; both are `Send + Sync`.
//!
//! Determinism conventions: elements of a finite field are ordered by
//! their coefficient vectors compared low-degree first (residues for prime
//! fields), primitive roots are found by a linear scan in that order, and
//! `root_of_unity(d)` is the `(order-1)/d`-th power of the least primitive
//! root.  Two constructions of the same field always agree exactly.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::ratfunc::RatFunc;
use crate::{Error, Result};

/// Arithmetic mod `p` and polynomial arithmetic over `F_p` on raw `u64`
/// coefficient slices.  Used for modulus construction and extension-field
/// elements; everything else goes through [`FieldElement`].
pub(crate) mod fp {
    pub fn add(a: u64, b: u64, p: u64) -> u64 {
        let s = a + b;
        if s >= p {
            s - p
        } else {
            s
        }
    }

    pub fn sub(a: u64, b: u64, p: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + p - b
        }
    }

    pub fn mul(a: u64, b: u64, p: u64) -> u64 {
        ((a as u128 * b as u128) % p as u128) as u64
    }

    /// Inverse mod prime `p` by the extended Euclidean algorithm.
    pub fn inv(a: u64, p: u64) -> Option<u64> {
        if a % p == 0 {
            return None;
        }
        let (mut r0, mut r1) = (p as i128, (a % p) as i128);
        let (mut s0, mut s1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        debug_assert_eq!(r0, 1);
        Some(s0.rem_euclid(p as i128) as u64)
    }

    pub fn trim(v: &mut Vec<u64>) {
        while v.last() == Some(&0) {
            v.pop();
        }
    }

    pub fn poly_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                out[i + j] = add(out[i + j], mul(ai, bj, p), p);
            }
        }
        trim(&mut out);
        out
    }

    /// Remainder of `a` by `b`; `b` need not be monic but must be nonzero.
    pub fn poly_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut r: Vec<u64> = a.to_vec();
        trim(&mut r);
        let db = b.len() - 1;
        let lead_inv = inv(b[db], p).expect("nonzero leading coefficient");
        while r.len() > db {
            let k = r.len() - 1 - db;
            let c = mul(*r.last().unwrap(), lead_inv, p);
            for (i, &bi) in b.iter().enumerate() {
                r[k + i] = sub(r[k + i], mul(c, bi, p), p);
            }
            trim(&mut r);
            if r.is_empty() {
                break;
            }
        }
        r
    }

    /// Inverse of `a` modulo the monic polynomial `f`, if coprime.
    pub fn poly_inv_mod(a: &[u64], f: &[u64], p: u64) -> Option<Vec<u64>> {
        let mut r0: Vec<u64> = f.to_vec();
        let mut r1: Vec<u64> = a.to_vec();
        trim(&mut r1);
        if r1.is_empty() {
            return None;
        }
        let mut s0: Vec<u64> = Vec::new();
        let mut s1: Vec<u64> = vec![1];
        while !r1.is_empty() {
            // r0 = q*r1 + r2
            let mut q = vec![0u64; r0.len().saturating_sub(r1.len()) + 1];
            let mut rem = r0.clone();
            let db = r1.len() - 1;
            let lead_inv = inv(r1[db], p).expect("nonzero");
            while rem.len() > db {
                let k = rem.len() - 1 - db;
                let c = mul(*rem.last().unwrap(), lead_inv, p);
                q[k] = c;
                for (i, &bi) in r1.iter().enumerate() {
                    rem[k + i] = sub(rem[k + i], mul(c, bi, p), p);
                }
                trim(&mut rem);
                if rem.is_empty() {
                    break;
                }
            }
            trim(&mut q);
            // s2 = s0 - q*s1
            let qs1 = poly_mul(&q, &s1, p);
            let n = s0.len().max(qs1.len());
            let mut s2 = vec![0u64; n];
            for (i, c) in s2.iter_mut().enumerate() {
                let x = s0.get(i).copied().unwrap_or(0);
                let y = qs1.get(i).copied().unwrap_or(0);
                *c = sub(x, y, p);
            }
            trim(&mut s2);
            r0 = r1;
            r1 = rem;
            s0 = s1;
            s1 = s2;
        }
        if r0.len() != 1 {
            return None; // gcd not a unit
        }
        let c = inv(r0[0], p)?;
        let mut out: Vec<u64> = s0.iter().map(|&x| mul(x, c, p)).collect();
        trim(&mut out);
        Some(poly_rem(&out, f, p))
    }

    /// Trial division against every monic polynomial of degree `<= deg/2`.
    pub fn is_irreducible(f: &[u64], p: u64) -> bool {
        let deg = f.len() - 1;
        if deg == 0 {
            return false;
        }
        if deg == 1 {
            return true;
        }
        for e in 1..=deg / 2 {
            let count = p.pow(e as u32);
            for idx in 0..count {
                let mut g = vec![0u64; e + 1];
                g[e] = 1;
                let mut k = idx;
                for c in g.iter_mut().take(e) {
                    *c = k % p;
                    k /= p;
                }
                if poly_rem(f, &g, p).is_empty() {
                    return false;
                }
            }
        }
        true
    }
}

/// Trial-division primality test; adequate for desk-scale inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Prime factorization by trial division, as `(prime, exponent)` pairs.
pub(crate) fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Order of `q` in `(Z/e)^x`.  Requires `gcd(q, e) = 1`.
pub fn multiplicative_order_mod(q: u64, e: u64) -> Result<u64> {
    if e == 0 {
        return Err(Error::OutOfRange("modulus must be positive".into()));
    }
    if num_integer::gcd(q, e) != 1 {
        return Err(Error::ZeroHasNoOrder);
    }
    let target = 1 % e;
    let mut x = q % e;
    let mut ord = 1u64;
    while x != target {
        x = fp::mul(x, q % e, e);
        ord += 1;
    }
    Ok(ord)
}

#[derive(Debug, PartialEq, Eq)]
enum CtxKind {
    Prime {
        p: u64,
    },
    Extension {
        p: u64,
        m: usize,
        /// Monic irreducible over `F_p`; coefficients low to high, length `m + 1`.
        modulus: Vec<u64>,
    },
    Rationals,
    FunctionField {
        base: FieldCtx,
        var: String,
    },
}

/// An immutable description of a field; cheap to clone and share.
#[derive(Clone)]
pub struct FieldCtx(Arc<CtxKind>);

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for FieldCtx {}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.0 {
            CtxKind::Prime { p } => write!(f, "F_{p}"),
            CtxKind::Extension { p, m, .. } => write!(f, "F_{{{}^{}}}", p, m),
            CtxKind::Rationals => write!(f, "Q"),
            CtxKind::FunctionField { base, var } => write!(f, "{base}({var})"),
        }
    }
}

impl FieldCtx {
    /// The prime field `F_p`.
    pub fn prime(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(FieldCtx(Arc::new(CtxKind::Prime { p })))
    }

    /// The extension field `F_{p^m}` with the lexicographically smallest
    /// monic irreducible modulus of degree `m` (coefficients compared
    /// low-degree first).  For `m = 1` this is the prime field itself.
    pub fn extension(p: u64, m: usize) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if m == 0 {
            return Err(Error::OutOfRange("extension degree must be >= 1".into()));
        }
        if m == 1 {
            return Self::prime(p);
        }
        let order = (p as u128).checked_pow(m as u32);
        if order.map_or(true, |o| o > 1 << 32) {
            return Err(Error::OutOfRange(format!("field order {p}^{m} too large")));
        }
        let count = p.pow(m as u32);
        // Enumerate lower-coefficient vectors in lexicographic order,
        // c_0 most significant.
        for idx in 0..count {
            let mut modulus = vec![0u64; m + 1];
            modulus[m] = 1;
            let mut k = idx;
            let mut weight = count / p;
            for c in modulus.iter_mut().take(m) {
                *c = k / weight;
                k %= weight;
                weight = (weight / p).max(1);
            }
            if fp::is_irreducible(&modulus, p) {
                return Ok(FieldCtx(Arc::new(CtxKind::Extension { p, m, modulus })));
            }
        }
        unreachable!("an irreducible polynomial of every degree exists over F_p")
    }

    /// The field of rational numbers.
    pub fn rationals() -> Self {
        FieldCtx(Arc::new(CtxKind::Rationals))
    }

    /// The rational-function field `base(var)`.
    pub fn function_field(base: &FieldCtx, var: &str) -> Self {
        FieldCtx(Arc::new(CtxKind::FunctionField {
            base: base.clone(),
            var: var.to_string(),
        }))
    }

    /// Characteristic of the field (`0` for `Q` and anything built on it).
    pub fn characteristic(&self) -> u64 {
        match &*self.0 {
            CtxKind::Prime { p } => *p,
            CtxKind::Extension { p, .. } => *p,
            CtxKind::Rationals => 0,
            CtxKind::FunctionField { base, .. } => base.characteristic(),
        }
    }

    /// Number of elements, for finite fields.
    pub fn order(&self) -> Option<u64> {
        match &*self.0 {
            CtxKind::Prime { p } => Some(*p),
            CtxKind::Extension { p, m, .. } => Some(p.pow(*m as u32)),
            _ => None,
        }
    }

    /// Modulus of an extension field (monic, coefficients low to high).
    pub fn modulus(&self) -> Option<&[u64]> {
        match &*self.0 {
            CtxKind::Extension { modulus, .. } => Some(modulus),
            _ => None,
        }
    }

    /// Coefficient field of a function field.
    pub fn base(&self) -> Option<&FieldCtx> {
        match &*self.0 {
            CtxKind::FunctionField { base, .. } => Some(base),
            _ => None,
        }
    }

    /// Variable name of a function field.
    pub fn var(&self) -> Option<&str> {
        match &*self.0 {
            CtxKind::FunctionField { var, .. } => Some(var),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.order().is_some()
    }

    /// The additive identity.
    pub fn zero(&self) -> FieldElement {
        let repr = match &*self.0 {
            CtxKind::Prime { .. } => Repr::Prime(0),
            CtxKind::Extension { m, .. } => Repr::Ext(vec![0; *m]),
            CtxKind::Rationals => Repr::Rat(BigRational::zero()),
            CtxKind::FunctionField { base, .. } => Repr::Fn(Box::new(RatFunc::zero(base))),
        };
        FieldElement { ctx: self.clone(), repr }
    }

    /// The multiplicative identity.
    pub fn one(&self) -> FieldElement {
        self.from_integer(1)
    }

    /// Image of an integer under the canonical map `Z -> field`.
    pub fn from_integer(&self, n: i64) -> FieldElement {
        let repr = match &*self.0 {
            CtxKind::Prime { p } => Repr::Prime(n.rem_euclid(*p as i64) as u64),
            CtxKind::Extension { p, m, .. } => {
                let mut v = vec![0; *m];
                v[0] = n.rem_euclid(*p as i64) as u64;
                Repr::Ext(v)
            }
            CtxKind::Rationals => Repr::Rat(BigRational::from_integer(BigInt::from(n))),
            CtxKind::FunctionField { base, .. } => {
                Repr::Fn(Box::new(RatFunc::constant(base.from_integer(n))))
            }
        };
        FieldElement { ctx: self.clone(), repr }
    }

    /// Element of a prime field from a residue.
    pub fn from_residue(&self, r: u64) -> Result<FieldElement> {
        match &*self.0 {
            CtxKind::Prime { p } => Ok(FieldElement {
                ctx: self.clone(),
                repr: Repr::Prime(r % p),
            }),
            _ => Err(Error::CtxMismatch),
        }
    }

    /// Element of an extension field from its coefficient vector
    /// (low degree first; short vectors are zero-padded).
    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<FieldElement> {
        match &*self.0 {
            CtxKind::Extension { p, m, .. } => {
                if coeffs.len() > *m {
                    return Err(Error::OutOfRange("coefficient vector too long".into()));
                }
                let mut v = vec![0u64; *m];
                for (i, &c) in coeffs.iter().enumerate() {
                    v[i] = c % p;
                }
                Ok(FieldElement { ctx: self.clone(), repr: Repr::Ext(v) })
            }
            _ => Err(Error::CtxMismatch),
        }
    }

    /// Exact rational as a field element (rationals context only).
    pub fn from_rational(&self, r: BigRational) -> Result<FieldElement> {
        match &*self.0 {
            CtxKind::Rationals => Ok(FieldElement { ctx: self.clone(), repr: Repr::Rat(r) }),
            _ => Err(Error::CtxMismatch),
        }
    }

    /// Wrap a rational function as an element of this function field.
    pub fn from_ratfunc(&self, r: RatFunc) -> Result<FieldElement> {
        match &*self.0 {
            CtxKind::FunctionField { base, .. } if r.ctx() == base => {
                Ok(FieldElement { ctx: self.clone(), repr: Repr::Fn(Box::new(r)) })
            }
            _ => Err(Error::CtxMismatch),
        }
    }

    /// The class of `z` in `F_p[z]/(modulus)`.
    pub fn generator(&self) -> Result<FieldElement> {
        match &*self.0 {
            CtxKind::Extension { m, .. } => {
                let mut v = vec![0u64; *m];
                v[1] = 1;
                Ok(FieldElement { ctx: self.clone(), repr: Repr::Ext(v) })
            }
            _ => Err(Error::CtxMismatch),
        }
    }

    /// `idx`-th element of a finite field in the deterministic order
    /// (coefficient vectors compared low-degree first).
    pub fn nth_element(&self, idx: u64) -> Result<FieldElement> {
        match &*self.0 {
            CtxKind::Prime { p } => {
                if idx >= *p {
                    return Err(Error::OutOfRange(format!("index {idx} >= {p}")));
                }
                Ok(FieldElement { ctx: self.clone(), repr: Repr::Prime(idx) })
            }
            CtxKind::Extension { p, m, .. } => {
                let order = p.pow(*m as u32);
                if idx >= order {
                    return Err(Error::OutOfRange(format!("index {idx} >= {order}")));
                }
                let mut v = vec![0u64; *m];
                let mut k = idx;
                let mut weight = order / p;
                for c in v.iter_mut() {
                    *c = k / weight;
                    k %= weight;
                    weight = (weight / p).max(1);
                }
                Ok(FieldElement { ctx: self.clone(), repr: Repr::Ext(v) })
            }
            _ => Err(Error::CtxMismatch),
        }
    }

    /// Least primitive root under the deterministic element order.
    pub fn least_primitive_root(&self) -> Result<FieldElement> {
        let order = self.order().ok_or(Error::CtxMismatch)?;
        let group = order - 1;
        for idx in 1..order {
            let g = self.nth_element(idx)?;
            if g.multiplicative_order()? == group {
                return Ok(g);
            }
        }
        unreachable!("finite field multiplicative groups are cyclic")
    }

    /// A primitive `d`-th root of unity: the `(order-1)/d`-th power of the
    /// least primitive root.  Fails when `d` does not divide `order - 1`.
    pub fn root_of_unity(&self, d: u64) -> Result<FieldElement> {
        let order = self.order().ok_or(Error::CtxMismatch)?;
        if d == 0 || (order - 1) % d != 0 {
            return Err(Error::FieldTooSmall { order, d });
        }
        let g = self.least_primitive_root()?;
        g.pow_u64((order - 1) / d)
    }
}

#[derive(Clone, PartialEq, Eq)]
enum Repr {
    Prime(u64),
    Ext(Vec<u64>),
    Rat(BigRational),
    Fn(Box<RatFunc>),
}

/// An element of the field described by its context.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    ctx: FieldCtx,
    repr: Repr,
}

impl FieldElement {
    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        match &self.repr {
            Repr::Prime(r) => *r == 0,
            Repr::Ext(v) => v.iter().all(|&c| c == 0),
            Repr::Rat(r) => r.is_zero(),
            Repr::Fn(r) => r.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        *self == self.ctx.one()
    }

    /// Residue of a prime-field element.
    pub fn residue(&self) -> Option<u64> {
        match &self.repr {
            Repr::Prime(r) => Some(*r),
            _ => None,
        }
    }

    /// Coefficient vector of an extension-field element.
    pub fn coeffs(&self) -> Option<&[u64]> {
        match &self.repr {
            Repr::Ext(v) => Some(v),
            _ => None,
        }
    }

    /// The wrapped rational number, if this is an element of `Q`.
    pub fn rational(&self) -> Option<&BigRational> {
        match &self.repr {
            Repr::Rat(r) => Some(r),
            _ => None,
        }
    }

    /// The wrapped rational function, if this is a function-field element.
    pub fn ratfunc(&self) -> Option<&RatFunc> {
        match &self.repr {
            Repr::Fn(r) => Some(r),
            _ => None,
        }
    }

    fn check_ctx(&self, other: &Self) -> Result<()> {
        if self.ctx == other.ctx {
            Ok(())
        } else {
            Err(Error::CtxMismatch)
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_ctx(other)?;
        let repr = match (&self.repr, &other.repr) {
            (Repr::Prime(a), Repr::Prime(b)) => {
                Repr::Prime(fp::add(*a, *b, self.ctx.characteristic()))
            }
            (Repr::Ext(a), Repr::Ext(b)) => {
                let p = self.ctx.characteristic();
                Repr::Ext(a.iter().zip(b).map(|(&x, &y)| fp::add(x, y, p)).collect())
            }
            (Repr::Rat(a), Repr::Rat(b)) => Repr::Rat(a + b),
            (Repr::Fn(a), Repr::Fn(b)) => Repr::Fn(Box::new(a.as_ref() + b.as_ref())),
            _ => return Err(Error::CtxMismatch),
        };
        Ok(FieldElement { ctx: self.ctx.clone(), repr })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.checked_neg())
    }

    pub fn checked_neg(&self) -> Self {
        let repr = match &self.repr {
            Repr::Prime(a) => {
                let p = self.ctx.characteristic();
                Repr::Prime(if *a == 0 { 0 } else { p - a })
            }
            Repr::Ext(v) => {
                let p = self.ctx.characteristic();
                Repr::Ext(v.iter().map(|&c| if c == 0 { 0 } else { p - c }).collect())
            }
            Repr::Rat(r) => Repr::Rat(-r),
            Repr::Fn(r) => Repr::Fn(Box::new(-r.as_ref())),
        };
        FieldElement { ctx: self.ctx.clone(), repr }
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_ctx(other)?;
        let repr = match (&self.repr, &other.repr) {
            (Repr::Prime(a), Repr::Prime(b)) => {
                Repr::Prime(fp::mul(*a, *b, self.ctx.characteristic()))
            }
            (Repr::Ext(a), Repr::Ext(b)) => {
                let p = self.ctx.characteristic();
                let modulus = self.ctx.modulus().expect("extension ctx");
                let prod = fp::poly_mul(a, b, p);
                let mut rem = fp::poly_rem(&prod, modulus, p);
                rem.resize(a.len(), 0);
                Repr::Ext(rem)
            }
            (Repr::Rat(a), Repr::Rat(b)) => Repr::Rat(a * b),
            (Repr::Fn(a), Repr::Fn(b)) => Repr::Fn(Box::new(a.as_ref() * b.as_ref())),
            _ => return Err(Error::CtxMismatch),
        };
        Ok(FieldElement { ctx: self.ctx.clone(), repr })
    }

    /// Multiplicative inverse; errors on zero.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let repr = match &self.repr {
            Repr::Prime(a) => {
                Repr::Prime(fp::inv(*a, self.ctx.characteristic()).expect("nonzero"))
            }
            Repr::Ext(v) => {
                let p = self.ctx.characteristic();
                let modulus = self.ctx.modulus().expect("extension ctx");
                let mut inv = fp::poly_inv_mod(v, modulus, p).expect("irreducible modulus");
                inv.resize(v.len(), 0);
                Repr::Ext(inv)
            }
            Repr::Rat(r) => Repr::Rat(r.recip()),
            Repr::Fn(r) => Repr::Fn(Box::new(r.inv()?)),
        };
        Ok(FieldElement { ctx: self.ctx.clone(), repr })
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.checked_mul(&other.inv()?)
    }

    /// Square-and-multiply with an arbitrary-precision exponent; negative
    /// exponents invert first.
    pub fn pow(&self, exp: &BigInt) -> Result<Self> {
        if exp.is_negative() {
            return self.inv()?.pow(&-exp);
        }
        let mut acc = self.ctx.one();
        let mut base = self.clone();
        let bits = exp.bits();
        for i in 0..bits {
            if exp.bit(i) {
                acc = acc.checked_mul(&base)?;
            }
            if i + 1 < bits {
                base = base.checked_mul(&base)?;
            }
        }
        Ok(acc)
    }

    pub fn pow_u64(&self, exp: u64) -> Result<Self> {
        self.pow(&BigInt::from(exp))
    }

    /// Least `n >= 1` with `self^n = 1`; requires a nonzero element of a
    /// finite field.  Divides `order - 1`.
    pub fn multiplicative_order(&self) -> Result<u64> {
        if self.is_zero() {
            return Err(Error::ZeroHasNoOrder);
        }
        let order = self.ctx.order().ok_or(Error::CtxMismatch)?;
        let group = order - 1;
        let mut ord = group;
        for (q, _) in factor_u64(group) {
            while ord % q == 0 && self.pow_u64(ord / q)?.is_one() {
                ord /= q;
            }
        }
        debug_assert!(self.pow_u64(ord)?.is_one());
        Ok(ord)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl std::ops::$trait for &FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                self.$checked(rhs).expect("field operation")
            }
        }
        impl std::ops::$trait for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                (&self).$checked(&rhs).expect("field operation")
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl std::ops::Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        self.checked_neg()
    }
}

impl std::ops::Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        self.checked_neg()
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Prime(r) => write!(f, "{r}"),
            Repr::Ext(v) => {
                let terms: Vec<String> = v
                    .iter()
                    .enumerate()
                    .rev()
                    .filter(|(_, &c)| c != 0)
                    .map(|(i, &c)| match (i, c) {
                        (0, c) => format!("{c}"),
                        (1, 1) => "z".to_string(),
                        (1, c) => format!("{c}*z"),
                        (i, 1) => format!("z^{i}"),
                        (i, c) => format!("{c}*z^{i}"),
                    })
                    .collect();
                if terms.is_empty() {
                    write!(f, "0")
                } else {
                    write!(f, "{}", terms.join(" + "))
                }
            }
            Repr::Rat(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Repr::Fn(r) => {
                let var = self.ctx.var().unwrap_or("u");
                write!(f, "{}", r.render(var))
            }
        }
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} in {}", self.ctx)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    #[test]
    fn extension_degree_one_is_prime_field() {
        let k = FieldCtx::extension(2, 1).unwrap();
        assert_eq!(k, FieldCtx::prime(2).unwrap());
        assert_eq!(k.order(), Some(2));
    }

    #[test]
    fn smallest_modulus_f4() {
        // Brute force: the four monic quadratics over F_2 are z^2, z^2+1,
        // z^2+z, z^2+z+1; only the last has no root and no linear factor.
        for (c0, c1) in [(0u64, 0u64), (0, 1), (1, 0)] {
            assert!(!fp::is_irreducible(&[c0, c1, 1], 2));
        }
        assert!(fp::is_irreducible(&[1, 1, 1], 2));
        let k = FieldCtx::extension(2, 2).unwrap();
        assert_eq!(k.modulus().unwrap(), &[1, 1, 1]);
    }

    #[test]
    fn smallest_modulus_f9() {
        // z^2 + 1 has no root in F_3: 0^2+1=1, 1^2+1=2, 2^2+1=2.
        for r in 0..3u64 {
            assert_ne!((r * r + 1) % 3, 0);
        }
        let k = FieldCtx::extension(3, 2).unwrap();
        assert_eq!(k.modulus().unwrap(), &[1, 0, 1]);
    }

    #[test]
    fn modulus_construction_is_deterministic() {
        for (p, m) in [(2, 6), (3, 4), (5, 2), (7, 2)] {
            let a = FieldCtx::extension(p, m).unwrap();
            let b = FieldCtx::extension(p, m).unwrap();
            assert_eq!(a.modulus().unwrap(), b.modulus().unwrap());
        }
    }

    #[test]
    fn root_of_unity_examples() {
        let f2 = FieldCtx::prime(2).unwrap();
        assert!(f2.root_of_unity(1).unwrap().is_one());

        // F_4: the generator z has order 3; enumerate orders to confirm the
        // returned root is primitive.
        let f4 = FieldCtx::extension(2, 2).unwrap();
        let z3 = f4.root_of_unity(3).unwrap();
        assert_eq!(z3.multiplicative_order().unwrap(), 3);
        let orders: Vec<u64> = (1..4)
            .map(|i| f4.nth_element(i).unwrap().multiplicative_order().unwrap())
            .collect();
        assert!(orders.contains(&3));

        // F_9: an order-4 element squares to -1.
        let f9 = FieldCtx::extension(3, 2).unwrap();
        let z4 = f9.root_of_unity(4).unwrap();
        assert_eq!(z4.multiplicative_order().unwrap(), 4);
        assert_eq!(z4.checked_mul(&z4).unwrap(), f9.from_integer(-1));
    }

    #[test]
    fn root_of_unity_requires_divisibility() {
        let f4 = FieldCtx::extension(2, 2).unwrap();
        assert_eq!(
            f4.root_of_unity(5),
            Err(Error::FieldTooSmall { order: 4, d: 5 })
        );
    }

    #[test]
    fn multiplicative_orders() {
        let f3 = FieldCtx::prime(3).unwrap();
        assert_eq!(f3.one().multiplicative_order().unwrap(), 1);
        assert_eq!(f3.from_integer(-1).multiplicative_order().unwrap(), 2);
        assert_eq!(f3.zero().multiplicative_order(), Err(Error::ZeroHasNoOrder));

        // Enumerate powers of the F_9 primitive root by hand.
        let f9 = FieldCtx::extension(3, 2).unwrap();
        let g = f9.least_primitive_root().unwrap();
        let mut x = g.clone();
        let mut n = 1;
        while !x.is_one() {
            x = x.checked_mul(&g).unwrap();
            n += 1;
        }
        assert_eq!(n, 8);
        assert_eq!(g.multiplicative_order().unwrap(), 8);
    }

    #[test]
    fn arithmetic_examples() {
        let f5 = FieldCtx::prime(5).unwrap();
        assert_eq!(
            f5.from_integer(2).checked_mul(&f5.from_integer(3)).unwrap(),
            f5.one()
        );

        let q = FieldCtx::rationals();
        let half = q.from_integer(1).checked_div(&q.from_integer(2)).unwrap();
        let third = q.from_integer(1).checked_div(&q.from_integer(3)).unwrap();
        let sum = half.checked_add(&third).unwrap();
        assert_eq!(
            sum.rational().unwrap(),
            &BigRational::new(BigInt::from(5), BigInt::from(6))
        );

        // F_4 with modulus z^2+z+1: z*z = z+1.
        let f4 = FieldCtx::extension(2, 2).unwrap();
        let z = f4.generator().unwrap();
        let z2 = z.checked_mul(&z).unwrap();
        assert_eq!(z2.coeffs().unwrap(), &[1, 1]);
    }

    #[test]
    fn ctx_mismatch_and_zero_division() {
        let f5 = FieldCtx::prime(5).unwrap();
        let f7 = FieldCtx::prime(7).unwrap();
        assert_eq!(
            f5.one().checked_add(&f7.one()),
            Err(Error::CtxMismatch)
        );
        assert_eq!(f5.one().checked_div(&f5.zero()), Err(Error::DivisionByZero));
        assert_eq!(FieldCtx::prime(6).unwrap_err(), Error::NotPrime(6));
        assert_eq!(FieldCtx::extension(4, 2).unwrap_err(), Error::NotPrime(4));
    }

    #[test]
    fn pow_with_bigint_exponents() {
        let f7 = FieldCtx::prime(7).unwrap();
        let three = f7.from_integer(3);
        assert_eq!(three.pow(&BigInt::from(6)).unwrap(), f7.one());
        assert_eq!(
            three.pow(&BigInt::from(-1)).unwrap(),
            three.inv().unwrap()
        );
        // Fermat with a large exponent reduced only by the arithmetic itself.
        let big = BigInt::from(6) * BigInt::from(10u64.pow(12)) + 2;
        assert_eq!(three.pow(&big).unwrap(), three.pow_u64(2).unwrap());
    }

    fn random_element(ctx: &FieldCtx, rng: &mut StdRng) -> FieldElement {
        match (ctx.order(), ctx.var()) {
            (Some(o), _) => ctx.nth_element(rng.gen_range(0..o)).unwrap(),
            (None, None) => {
                let n = rng.gen_range(-50i64..50);
                let d = rng.gen_range(1i64..20);
                ctx.from_integer(n)
                    .checked_div(&ctx.from_integer(d))
                    .unwrap()
            }
            (None, Some(_)) => {
                let base = ctx.base().unwrap().clone();
                let num = crate::ratfunc::Poly::from_coeffs(
                    &base,
                    (0..3).map(|_| random_element(&base, rng)).collect(),
                );
                let mut den = crate::ratfunc::Poly::zero(&base);
                while den.is_zero() {
                    den = crate::ratfunc::Poly::from_coeffs(
                        &base,
                        (0..2).map(|_| random_element(&base, rng)).collect(),
                    );
                }
                ctx.from_ratfunc(RatFunc::new(num, den).unwrap()).unwrap()
            }
        }
    }

    #[test]
    fn field_axioms_hold_for_random_triples() {
        let contexts = vec![
            FieldCtx::prime(101).unwrap(),
            FieldCtx::extension(3, 3).unwrap(),
            FieldCtx::rationals(),
            FieldCtx::function_field(&FieldCtx::prime(5).unwrap(), "t"),
        ];
        let mut rng = StdRng::seed_from_u64(0x6d77_666f_7267_6531);
        for ctx in contexts {
            for _ in 0..250 {
                let a = random_element(&ctx, &mut rng);
                let b = random_element(&ctx, &mut rng);
                let c = random_element(&ctx, &mut rng);
                assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
                assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
                assert_eq!(&a * &b, &b * &a);
                if !a.is_zero() {
                    assert!((&a * &a.inv().unwrap()).is_one());
                }
            }
        }
    }

    #[test]
    fn frobenius_is_additive() {
        let k = FieldCtx::extension(2, 6).unwrap();
        let p = k.characteristic();
        let mut rng = StdRng::seed_from_u64(0xfe1d);
        for _ in 0..200 {
            let a = k.nth_element(rng.gen_range(0..64)).unwrap();
            let b = k.nth_element(rng.gen_range(0..64)).unwrap();
            let lhs = (&a + &b).pow_u64(p).unwrap();
            let rhs = &a.pow_u64(p).unwrap() + &b.pow_u64(p).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn roots_of_unity_have_exact_order() {
        for (p, m, d) in [(2, 2, 3), (3, 2, 4), (3, 2, 8), (2, 4, 5), (5, 2, 6)] {
            let k = FieldCtx::extension(p, m).unwrap();
            let z = k.root_of_unity(d).unwrap();
            assert!(z.pow_u64(d).unwrap().is_one());
            for e in 1..d {
                assert!(!z.pow_u64(e).unwrap().is_one(), "order < {d} at {e}");
            }
        }
    }

    #[test]
    fn integer_order_mod_e() {
        assert_eq!(multiplicative_order_mod(2, 3).unwrap(), 2);
        assert_eq!(multiplicative_order_mod(3, 4).unwrap(), 2);
        assert_eq!(multiplicative_order_mod(4, 5).unwrap(), 2);
        assert_eq!(multiplicative_order_mod(2, 7).unwrap(), 3);
        assert_eq!(multiplicative_order_mod(7, 1).unwrap(), 1);
        assert!(multiplicative_order_mod(2, 4).is_err());
    }
}
