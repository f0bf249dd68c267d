//! Elliptic curves in long Weierstrass form over any field in the tower.
//!
//! The long form `y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6` is used
//! everywhere — never the short form — so that a single code path is valid
//! in all characteristics, including 2 and 3.  Points are affine pairs or
//! the point at infinity; all arithmetic is exact.

use crate::fields::{FieldCtx, FieldElement};
use crate::{Error, Result};

/// `[a1, a2, a3, a4, a6]` model over a fixed field context.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WeierstrassCurve {
    ctx: FieldCtx,
    a1: FieldElement,
    a2: FieldElement,
    a3: FieldElement,
    a4: FieldElement,
    a6: FieldElement,
}

/// A point of the curve: infinity or an affine pair.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum CurvePoint {
    Infinity,
    Affine { x: FieldElement, y: FieldElement },
}

impl CurvePoint {
    pub fn affine(x: FieldElement, y: FieldElement) -> Self {
        CurvePoint::Affine { x, y }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, CurvePoint::Infinity)
    }

    pub fn xy(&self) -> Option<(&FieldElement, &FieldElement)> {
        match self {
            CurvePoint::Infinity => None,
            CurvePoint::Affine { x, y } => Some((x, y)),
        }
    }
}

/// The `b`/`c`-quantities and discriminant of a model; `j` only when the
/// model is nonsingular.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CurveInvariants {
    pub b2: FieldElement,
    pub b4: FieldElement,
    pub b6: FieldElement,
    pub b8: FieldElement,
    pub c4: FieldElement,
    pub c6: FieldElement,
    pub disc: FieldElement,
    pub j: Option<FieldElement>,
}

impl WeierstrassCurve {
    /// Checked constructor: rejects singular models and mixed contexts.
    pub fn new(
        a1: FieldElement,
        a2: FieldElement,
        a3: FieldElement,
        a4: FieldElement,
        a6: FieldElement,
    ) -> Result<Self> {
        let curve = Self::new_unchecked(a1, a2, a3, a4, a6)?;
        if curve.invariants().disc.is_zero() {
            return Err(Error::SingularCurve);
        }
        Ok(curve)
    }

    /// Constructor that allows a vanishing discriminant; used only to print
    /// invariants of singular models.
    pub fn new_unchecked(
        a1: FieldElement,
        a2: FieldElement,
        a3: FieldElement,
        a4: FieldElement,
        a6: FieldElement,
    ) -> Result<Self> {
        let ctx = a1.ctx().clone();
        for c in [&a2, &a3, &a4, &a6] {
            if *c.ctx() != ctx {
                return Err(Error::CtxMismatch);
            }
        }
        Ok(WeierstrassCurve { ctx, a1, a2, a3, a4, a6 })
    }

    /// Model `y^2 = x^3 - (c4/48) x - (c6/864)` with the prescribed `c4`,
    /// `c6` invariants; characteristic 2 and 3 excluded.
    pub fn from_c4_c6(c4: FieldElement, c6: FieldElement) -> Result<Self> {
        let ctx = c4.ctx().clone();
        if *c6.ctx() != ctx {
            return Err(Error::CtxMismatch);
        }
        let p = ctx.characteristic();
        if p == 2 || p == 3 {
            return Err(Error::BadCharacteristic(p));
        }
        let a4 = -c4.checked_div(&ctx.from_integer(48))?;
        let a6 = -c6.checked_div(&ctx.from_integer(864))?;
        WeierstrassCurve::new(ctx.zero(), ctx.zero(), ctx.zero(), a4, a6)
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn coefficients(&self) -> [&FieldElement; 5] {
        [&self.a1, &self.a2, &self.a3, &self.a4, &self.a6]
    }

    /// Standard quantities: `b2 = a1^2 + 4 a2`, `b4 = 2 a4 + a1 a3`,
    /// `b6 = a3^2 + 4 a6`, `b8 = a1^2 a6 + 4 a2 a6 - a1 a3 a4 + a2 a3^2 - a4^2`,
    /// `c4 = b2^2 - 24 b4`, `c6 = -b2^3 + 36 b2 b4 - 216 b6`,
    /// `disc = -b2^2 b8 - 8 b4^3 - 27 b6^2 + 9 b2 b4 b6`, `j = c4^3 / disc`.
    pub fn invariants(&self) -> CurveInvariants {
        let k = &self.ctx;
        let n = |v: i64| k.from_integer(v);
        let (a1, a2, a3, a4, a6) = (&self.a1, &self.a2, &self.a3, &self.a4, &self.a6);
        let b2 = &(a1 * a1) + &(&n(4) * a2);
        let b4 = &(&n(2) * a4) + &(a1 * a3);
        let b6 = &(a3 * a3) + &(&n(4) * a6);
        let b8 = &(&(&(&(&(a1 * a1) * a6) + &(&(&n(4) * a2) * a6)) - &(&(a1 * a3) * a4))
            + &(&(a2 * a3) * a3))
            - &(a4 * a4);
        let c4 = &(&b2 * &b2) - &(&n(24) * &b4);
        let c6 = &(&(&n(36) * &(&b2 * &b4)) - &(&(&b2 * &b2) * &b2)) - &(&n(216) * &b6);
        let disc = &(&(&-(&(&(&b2 * &b2) * &b8)) - &(&n(8) * &(&(&b4 * &b4) * &b4)))
            - &(&n(27) * &(&b6 * &b6)))
            + &(&n(9) * &(&(&b2 * &b4) * &b6));
        let j = if disc.is_zero() {
            None
        } else {
            Some(
                (&(&c4 * &c4) * &c4)
                    .checked_div(&disc)
                    .expect("nonzero discriminant"),
            )
        };
        CurveInvariants { b2, b4, b6, b8, c4, c6, disc, j }
    }

    /// Exact check of the curve equation (infinity always passes).
    pub fn contains(&self, point: &CurvePoint) -> bool {
        match point {
            CurvePoint::Infinity => true,
            CurvePoint::Affine { x, y } => {
                if *x.ctx() != self.ctx || *y.ctx() != self.ctx {
                    return false;
                }
                self.equation_lhs(x, y) == self.equation_rhs(x, y)
            }
        }
    }

    /// `y^2 + a1 xy + a3 y`.
    pub fn equation_lhs(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        &(&(y * y) + &(&(&self.a1 * x) * y)) + &(&self.a3 * y)
    }

    /// `x^3 + a2 x^2 + a4 x + a6`.
    pub fn equation_rhs(&self, x: &FieldElement, _y: &FieldElement) -> FieldElement {
        let x2 = x * x;
        &(&(&(&x2 * x) + &(&self.a2 * &x2)) + &(&self.a4 * x)) + &self.a6
    }

    /// Long-form negation `(x, y) -> (x, -y - a1 x - a3)`.
    pub fn neg(&self, point: &CurvePoint) -> CurvePoint {
        match point {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine { x, y } => CurvePoint::Affine {
                x: x.clone(),
                y: &(&-y - &(&self.a1 * x)) - &self.a3,
            },
        }
    }

    /// Chord-and-tangent addition.  Validates that both operands satisfy
    /// the curve equation and share the curve's context.
    pub fn add(&self, p: &CurvePoint, q: &CurvePoint) -> Result<CurvePoint> {
        for pt in [p, q] {
            if let Some((x, y)) = pt.xy() {
                if *x.ctx() != self.ctx || *y.ctx() != self.ctx {
                    return Err(Error::CtxMismatch);
                }
            }
            if !self.contains(pt) {
                return Err(Error::PointNotOnCurve);
            }
        }
        Ok(self.add_unchecked(p, q))
    }

    /// Addition without the on-curve validation; used in inner loops after
    /// the operands have been validated once.
    pub(crate) fn add_unchecked(&self, p: &CurvePoint, q: &CurvePoint) -> CurvePoint {
        let (x1, y1) = match p.xy() {
            None => return q.clone(),
            Some(v) => v,
        };
        let (x2, y2) = match q.xy() {
            None => return p.clone(),
            Some(v) => v,
        };
        let (lambda, nu) = if x1 != x2 {
            let dx = &(x2 - x1);
            let lambda = &(y2 - y1) * &dx.inv().expect("distinct x");
            let nu = &(&(y1 * x2) - &(y2 * x1)) * &dx.inv().expect("distinct x");
            (lambda, nu)
        } else {
            // Same x: either opposite points or the tangent case.
            let neg_y1 = &(&-y1 - &(&self.a1 * x1)) - &self.a3;
            if *y2 == neg_y1 {
                return CurvePoint::Infinity;
            }
            // lambda = (3x^2 + 2 a2 x + a4 - a1 y) / (2y + a1 x + a3)
            let k = &self.ctx;
            let denom = &(&(&k.from_integer(2) * y1) + &(&self.a1 * x1)) + &self.a3;
            let denom_inv = denom.inv().expect("non 2-torsion tangent");
            let num_l = &(&(&(&k.from_integer(3) * &(x1 * x1)) + &(&(&k.from_integer(2) * &self.a2) * x1))
                + &self.a4)
                - &(&self.a1 * y1);
            // nu = (-x^3 + a4 x + 2 a6 - a3 y) / (2y + a1 x + a3)
            let x3 = &(x1 * x1) * x1;
            let num_n = &(&(&-(&x3) + &(&self.a4 * x1)) + &(&k.from_integer(2) * &self.a6))
                - &(&self.a3 * y1);
            (&num_l * &denom_inv, &num_n * &denom_inv)
        };
        let x3 = &(&(&(&lambda * &lambda) + &(&self.a1 * &lambda)) - &self.a2) - &(x1 + x2);
        let y3 = &(&-(&(&(&lambda + &self.a1) * &x3)) - &nu) - &self.a3;
        CurvePoint::Affine { x: x3, y: y3 }
    }

    /// `n * P` by double-and-add; `n` may be negative.
    pub fn mul_scalar(&self, n: i64, p: &CurvePoint) -> Result<CurvePoint> {
        if !self.contains(p) {
            return Err(Error::PointNotOnCurve);
        }
        let (mut k, base) = if n < 0 {
            (n.unsigned_abs(), self.neg(p))
        } else {
            (n as u64, p.clone())
        };
        let mut acc = CurvePoint::Infinity;
        let mut pow = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add_unchecked(&acc, &pow);
            }
            k >>= 1;
            if k > 0 {
                pow = self.add_unchecked(&pow, &pow);
            }
        }
        Ok(acc)
    }

    /// Least `1 <= n <= bound` with `n P = infinity`, or `None` when the
    /// order exceeds the bound.
    pub fn point_order(&self, p: &CurvePoint, bound: u64) -> Result<Option<u64>> {
        if !self.contains(p) {
            return Err(Error::PointNotOnCurve);
        }
        let mut acc = p.clone();
        for n in 1..=bound {
            if acc.is_infinity() {
                return Ok(Some(n));
            }
            acc = self.add_unchecked(&acc, p);
        }
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::FieldCtx;
    use crate::ratfunc::{Poly, RatFunc};
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    /// y^2 + xy + ty = x^3 + tx^2 over Q(t).
    fn pencil_curve() -> (FieldCtx, WeierstrassCurve) {
        let q = FieldCtx::rationals();
        let qt = FieldCtx::function_field(&q, "t");
        let t = qt
            .from_ratfunc(RatFunc::from_poly(Poly::var(&q)))
            .unwrap();
        let e = WeierstrassCurve::new(qt.one(), t.clone(), t, qt.zero(), qt.zero()).unwrap();
        (qt, e)
    }

    #[test]
    fn pencil_discriminant_and_j() {
        let (qt, e) = pencil_curve();
        let inv = e.invariants();
        let q = FieldCtx::rationals();
        // t^4 (1 - 16t)
        let disc_expected = qt
            .from_ratfunc(RatFunc::from_poly(Poly::parse(&q, "t", "t^4 - 16*t^5").unwrap()))
            .unwrap();
        assert_eq!(inv.disc, disc_expected);
        // j = (16t^2 - 16t + 1)^3 / disc
        let c4_expected = qt
            .from_ratfunc(RatFunc::from_poly(
                Poly::parse(&q, "t", "16*t^2 - 16*t + 1").unwrap(),
            ))
            .unwrap();
        assert_eq!(inv.c4, c4_expected);
        let j_expected = (&(&c4_expected * &c4_expected) * &c4_expected)
            .checked_div(&disc_expected)
            .unwrap();
        assert_eq!(inv.j.unwrap(), j_expected);
    }

    #[test]
    fn invariant_identities() {
        // 4 b8 = b2 b6 - b4^2 and 1728 disc = c4^3 - c6^2, including over
        // a function field.
        let (qt, e) = pencil_curve();
        let inv = e.invariants();
        assert_eq!(
            &qt.from_integer(4) * &inv.b8,
            &(&inv.b2 * &inv.b6) - &(&inv.b4 * &inv.b4)
        );
        assert_eq!(
            &qt.from_integer(1728) * &inv.disc,
            &(&(&inv.c4 * &inv.c4) * &inv.c4) - &(&inv.c6 * &inv.c6)
        );

        let q = FieldCtx::rationals();
        let e2 = WeierstrassCurve::new(
            q.zero(),
            q.zero(),
            q.zero(),
            q.one(),
            q.zero(),
        )
        .unwrap();
        let inv2 = e2.invariants();
        assert_eq!(inv2.disc, q.from_integer(-64));
        assert_eq!(inv2.c4, q.from_integer(-48));
        assert_eq!(
            &q.from_integer(4) * &inv2.b8,
            &(&inv2.b2 * &inv2.b6) - &(&inv2.b4 * &inv2.b4)
        );
    }

    #[test]
    fn c4_c6_reconstruction() {
        let q = FieldCtx::rationals();
        let c4 = q.from_integer(48);
        let c6 = q.from_integer(-864);
        let e = WeierstrassCurve::from_c4_c6(c4.clone(), c6.clone()).unwrap();
        let inv = e.invariants();
        assert_eq!(inv.c4, c4);
        assert_eq!(inv.c6, c6);
        assert_eq!(inv.disc, q.from_integer(-368)); // (48^3 - 864^2)/1728

        let f2 = FieldCtx::prime(2).unwrap();
        assert_eq!(
            WeierstrassCurve::from_c4_c6(f2.one(), f2.one()),
            Err(Error::BadCharacteristic(2))
        );
    }

    #[test]
    fn singular_model_rejected_but_unchecked_allows() {
        let q = FieldCtx::rationals();
        // y^2 = x^3 is singular.
        let singular = WeierstrassCurve::new(q.zero(), q.zero(), q.zero(), q.zero(), q.zero());
        assert_eq!(singular.unwrap_err(), Error::SingularCurve);
        let model =
            WeierstrassCurve::new_unchecked(q.zero(), q.zero(), q.zero(), q.zero(), q.zero())
                .unwrap();
        let inv = model.invariants();
        assert!(inv.disc.is_zero());
        assert!(inv.j.is_none());
    }

    #[test]
    fn torsion_point_arithmetic_on_pencil() {
        let (qt, e) = pencil_curve();
        let t = e.coefficients()[1].clone();
        let q0 = CurvePoint::affine(qt.zero(), qt.zero());
        assert!(e.contains(&q0));
        assert!(e.contains(&CurvePoint::Infinity));
        assert!(!e.contains(&CurvePoint::affine(qt.one(), qt.one())));

        // 2Q = (-t, 0), 3Q = (0, -t), 4Q = infinity.
        let q2 = e.add(&q0, &q0).unwrap();
        assert_eq!(q2, CurvePoint::affine(-&t, qt.zero()));
        let q3 = e.mul_scalar(3, &q0).unwrap();
        assert_eq!(q3, CurvePoint::affine(qt.zero(), -&t));
        assert!(e.mul_scalar(4, &q0).unwrap().is_infinity());
        assert_eq!(e.point_order(&q0, 24).unwrap(), Some(4));
        assert_eq!(e.point_order(&CurvePoint::Infinity, 5).unwrap(), Some(1));
    }

    #[test]
    fn identity_and_inverse_laws() {
        let (qt, e) = pencil_curve();
        let q0 = CurvePoint::affine(qt.zero(), qt.zero());
        assert_eq!(e.add(&q0, &CurvePoint::Infinity).unwrap(), q0);
        assert_eq!(e.add(&CurvePoint::Infinity, &q0).unwrap(), q0);
        let sum = e.add(&q0, &e.neg(&q0)).unwrap();
        assert!(sum.is_infinity());
    }

    #[test]
    fn off_curve_inputs_are_rejected() {
        let (qt, e) = pencil_curve();
        let bad = CurvePoint::affine(qt.one(), qt.one());
        assert_eq!(e.add(&bad, &CurvePoint::Infinity), Err(Error::PointNotOnCurve));
        assert_eq!(e.point_order(&bad, 4), Err(Error::PointNotOnCurve));
    }

    #[test]
    fn group_law_is_associative_and_commutative() {
        // Random multiples of a generator on a small prime-field curve.
        let f = FieldCtx::prime(19).unwrap();
        let e = WeierstrassCurve::new(
            f.one(),
            f.from_integer(2),
            f.from_integer(3),
            f.from_integer(4),
            f.from_integer(5),
        )
        .unwrap();
        // Find a point by scanning x.
        let mut gen = None;
        'outer: for xi in 0..19 {
            for yi in 0..19 {
                let pt = CurvePoint::affine(f.from_integer(xi), f.from_integer(yi));
                if e.contains(&pt) {
                    gen = Some(pt);
                    break 'outer;
                }
            }
        }
        let gen = gen.expect("curve has a rational point");
        let mut rng = StdRng::seed_from_u64(0x1a7e);
        for _ in 0..200 {
            let a = e.mul_scalar(rng.gen_range(-10..=10), &gen).unwrap();
            let b = e.mul_scalar(rng.gen_range(-10..=10), &gen).unwrap();
            let c = e.mul_scalar(rng.gen_range(-10..=10), &gen).unwrap();
            let ab_c = e.add(&e.add(&a, &b).unwrap(), &c).unwrap();
            let a_bc = e.add(&a, &e.add(&b, &c).unwrap()).unwrap();
            assert_eq!(ab_c, a_bc);
            assert_eq!(e.add(&a, &b).unwrap(), e.add(&b, &a).unwrap());
            assert!(e.contains(&ab_c));
        }
    }
}
