//! Explicit point families on `y^2 + xy + ty = x^3 + tx^2` over
//! `F_{p^{2n}}(u)`, where `t = u^d` and `d = p^n + 1`.
//!
//! Writing `q = p^n`, the curve acquires the points
//!
//! ```text
//!   p = 2:  P(u) = ( u^q (u^q - u),  u^{2q} (u^2 + u^4 + ... + u^{2^n}) )
//!   p > 2:  P(u) = ( u^q (u^q - u) / (1+4u)^q,
//!                    u^{2q}(1 + 2u + 2u^q) / (2 (1+4u)^{(3q-1)/2})
//!                      - u^{2q} / (2 (1+4u)^{q-1}) )
//! ```
//!
//! together with their Galois translates `P_i = P(zeta_d^i u)`.  The
//! ground field `F_{p^{2n}}` is the smallest one containing the `d`-th
//! roots of unity, since `d | p^{2n} - 1`.  This module builds the family
//! and runs all point-level verifications: the curve equation for every
//! `P_i`, the torsion subgroup generated by `Q = (0, 0)`, the relation
//! sums, and a closed-form identity for both sides of the Weierstrass
//! equation at `P(u)` in odd characteristic.

use crate::ellcurve::{CurvePoint, WeierstrassCurve};
use crate::fields::{is_prime, FieldCtx, FieldElement};
use crate::ratfunc::{Poly, RatFunc};
use crate::{Error, Result};

/// Largest field order accepted by [`ExplicitFamily::build`].
pub const MAX_FIELD_ORDER: u64 = 1 << 20;

/// The curve, the scaling root of unity, and the `d` explicit points.
#[derive(Clone, Debug)]
pub struct ExplicitFamily {
    pub p: u64,
    pub n: u32,
    /// `q = p^n`.
    pub q: u64,
    /// `d = q + 1`.
    pub d: u64,
    /// `F_{p^{2n}}`.
    pub base_ctx: FieldCtx,
    /// `F_{p^{2n}}(u)`.
    pub fn_ctx: FieldCtx,
    /// Primitive `d`-th root of unity in the base field.
    pub zeta: FieldElement,
    /// `y^2 + xy + u^d y = x^3 + u^d x^2`.
    pub curve: WeierstrassCurve,
    /// `P_0, ..., P_{d-1}`.
    pub points: Vec<CurvePoint>,
    /// The torsion generator `Q = (0, 0)`.
    pub q_tors: CurvePoint,
}

/// Outcome of one named check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub pass: bool,
}

impl Check {
    fn new(name: impl Into<String>, pass: bool) -> Self {
        Check { name: name.into(), pass }
    }
}

/// A list of named pass/fail outcomes.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn push(&mut self, name: impl Into<String>, pass: bool) {
        self.checks.push(Check::new(name, pass));
    }
}

impl ExplicitFamily {
    /// Construct the family for prime `p` and `n >= 1`, with the desk-scale
    /// guard `p^{2n} <= 2^20`.
    pub fn build(p: u64, n: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if n == 0 {
            return Err(Error::OutOfRange("n must be >= 1".into()));
        }
        let order = (p as u128).checked_pow(2 * n);
        if order.map_or(true, |o| o > MAX_FIELD_ORDER as u128) {
            return Err(Error::OutOfRange(format!(
                "field order {p}^{} exceeds {MAX_FIELD_ORDER}",
                2 * n
            )));
        }
        let q = p.pow(n);
        let d = q + 1;
        let base_ctx = FieldCtx::extension(p, 2 * n as usize)?;
        let fn_ctx = FieldCtx::function_field(&base_ctx, "u");
        let zeta = base_ctx.root_of_unity(d)?;

        let t_poly = Poly::monomial(base_ctx.one(), d as usize);
        let t = fn_ctx.from_ratfunc(RatFunc::from_poly(t_poly))?;
        let curve = WeierstrassCurve::new(
            fn_ctx.one(),
            t.clone(),
            t,
            fn_ctx.zero(),
            fn_ctx.zero(),
        )?;

        let (x0, y0) = base_point(&base_ctx, p, n, q)?;
        let mut points = Vec::with_capacity(d as usize);
        for i in 0..d {
            let factor = zeta.pow_u64(i)?;
            let xi = fn_ctx.from_ratfunc(x0.substitute_scale(&factor)?)?;
            let yi = fn_ctx.from_ratfunc(y0.substitute_scale(&factor)?)?;
            let pt = CurvePoint::affine(xi, yi);
            if !curve.contains(&pt) {
                return Err(Error::PointNotOnCurve);
            }
            points.push(pt);
        }
        let q_tors = CurvePoint::affine(fn_ctx.zero(), fn_ctx.zero());
        let family = ExplicitFamily {
            p,
            n,
            q,
            d,
            base_ctx,
            fn_ctx,
            zeta,
            curve,
            points,
            q_tors,
        };
        if family.curve.point_order(&family.q_tors, 8)? != Some(4) {
            return Err(Error::DataInvariant("Q = (0,0) must have order 4".into()));
        }
        Ok(family)
    }

    /// `t = u^d` as an element of the function field.
    pub fn t(&self) -> FieldElement {
        self.curve.coefficients()[1].clone()
    }

    /// Checks the curve equation for every point of the family.
    pub fn verify_points_on_curve(&self) -> VerifyReport {
        let mut report = VerifyReport::default();
        for (i, pt) in self.points.iter().enumerate() {
            report.push(format!("P_{i} on curve"), self.curve.contains(pt));
        }
        report
    }

    /// In odd characteristic, both sides of the Weierstrass equation at
    /// `P(u)` equal `u^{4q}(u^{2q} - 2u^{q+1} + u^2) / (1+4u)^{3q-1}`
    /// exactly; checks both equalities.
    pub fn verify_equation_identity(&self) -> Result<VerifyReport> {
        if self.p == 2 {
            return Err(Error::Inapplicable("identity check needs odd characteristic"));
        }
        let q = self.q as usize;
        let (x, y) = self.points[0].xy().expect("affine base point");
        let lhs = self.curve.equation_lhs(x, y);
        let rhs = self.curve.equation_rhs(x, y);

        let ctx = &self.base_ctx;
        let u = Poly::var(ctx);
        // u^{4q} (u^{2q} - 2 u^{q+1} + u^2)
        let inner = &(&u.pow(2 * q) - &u.pow(q + 1).scale(&ctx.from_integer(2))) + &u.pow(2);
        let num = &u.pow(4 * q) * &inner;
        let den = one_plus_4u(ctx).pow(3 * q - 1);
        let quoted = self.fn_ctx.from_ratfunc(RatFunc::new(num, den)?)?;

        let mut report = VerifyReport::default();
        report.push("lhs equals quoted form", lhs == quoted);
        report.push("rhs equals quoted form", rhs == quoted);
        Ok(report)
    }

    /// `sum P_i` is torsion, and for odd `p` so is `sum (-1)^i P_i`;
    /// torsion is certified by an order below the bound 24.
    pub fn verify_torsion_relations(&self) -> Result<VerifyReport> {
        let mut report = VerifyReport::default();
        let mut sum = CurvePoint::Infinity;
        for pt in &self.points {
            sum = self.curve.add(&sum, pt)?;
        }
        let order = self.curve.point_order(&sum, 24)?;
        report.push(
            format!("sum of points is torsion (order {:?})", order),
            order.is_some(),
        );
        if self.p != 2 {
            let mut alt = CurvePoint::Infinity;
            for (i, pt) in self.points.iter().enumerate() {
                let term = if i % 2 == 0 { pt.clone() } else { self.curve.neg(pt) };
                alt = self.curve.add(&alt, &term)?;
            }
            let order = self.curve.point_order(&alt, 24)?;
            report.push(
                format!("alternating sum is torsion (order {:?})", order),
                order.is_some(),
            );
        }
        Ok(report)
    }

    /// `Q = (0,0)` has order exactly 4 with `2Q = (-t, 0)` and `3Q = (0, -t)`.
    pub fn torsion_subgroup_report(&self) -> Result<VerifyReport> {
        let mut report = VerifyReport::default();
        let t = self.t();
        let order = self.curve.point_order(&self.q_tors, 24)?;
        report.push("Q has order 4", order == Some(4));
        let q2 = self.curve.mul_scalar(2, &self.q_tors)?;
        report.push(
            "2Q = (-t, 0)",
            q2 == CurvePoint::affine(-&t, self.fn_ctx.zero()),
        );
        let q3 = self.curve.mul_scalar(3, &self.q_tors)?;
        report.push(
            "3Q = (0, -t)",
            q3 == CurvePoint::affine(self.fn_ctx.zero(), -&t),
        );
        let q4 = self.curve.mul_scalar(4, &self.q_tors)?;
        report.push("4Q = infinity", q4.is_infinity());
        Ok(report)
    }

    /// Runs every verification and concatenates the outcomes.
    pub fn verify_all(&self) -> Result<VerifyReport> {
        let mut report = self.verify_points_on_curve();
        let torsion = self.torsion_subgroup_report()?;
        report.checks.extend(torsion.checks);
        if self.p != 2 {
            let identity = self.verify_equation_identity()?;
            report.checks.extend(identity.checks);
        }
        let relations = self.verify_torsion_relations()?;
        report.checks.extend(relations.checks);
        Ok(report)
    }
}

fn one_plus_4u(ctx: &FieldCtx) -> Poly {
    Poly::from_coeffs(ctx, vec![ctx.one(), ctx.from_integer(4)])
}

/// The coordinates of `P(u)` as reduced rational functions over the base
/// field.
fn base_point(ctx: &FieldCtx, p: u64, n: u32, q: u64) -> Result<(RatFunc, RatFunc)> {
    let q = q as usize;
    let u = Poly::var(ctx);
    // u^q (u^q - u) = u^{2q} - u^{q+1}
    let x_num = &u.pow(2 * q) - &u.pow(q + 1);
    if p == 2 {
        let x = RatFunc::from_poly(x_num);
        let mut spread = Poly::zero(ctx);
        for j in 1..=n {
            spread = &spread + &u.pow(1 << j);
        }
        let y = RatFunc::from_poly(&u.pow(2 * q) * &spread);
        Ok((x, y))
    } else {
        let c = one_plus_4u(ctx);
        let x = RatFunc::new(x_num, c.pow(q))?;
        let two = Poly::constant(ctx.from_integer(2));
        let y1 = RatFunc::new(
            &u.pow(2 * q)
                * &Poly::from_coeffs(
                    ctx,
                    {
                        // 1 + 2u + 2u^q
                        let mut coeffs = vec![ctx.zero(); q + 1];
                        coeffs[0] = ctx.one();
                        coeffs[1] = &coeffs[1] + &ctx.from_integer(2);
                        coeffs[q] = &coeffs[q] + &ctx.from_integer(2);
                        coeffs
                    },
                ),
            &two * &c.pow((3 * q - 1) / 2),
        )?;
        let y2 = RatFunc::new(u.pow(2 * q), &two * &c.pow(q - 1))?;
        Ok((x, &y1 - &y2))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_point_for_p2_n1() {
        let fam = ExplicitFamily::build(2, 1).unwrap();
        assert_eq!(fam.d, 3);
        let (x, y) = fam.points[0].xy().unwrap();
        // P(u) = (u^4 - u^3, u^6); over F_2 the minus is a plus.
        let expected_x = RatFunc::from_poly(Poly::from_integers(
            &fam.base_ctx,
            &[0, 0, 0, 1, 1],
        ));
        let expected_y = RatFunc::from_poly(Poly::from_integers(
            &fam.base_ctx,
            &[0, 0, 0, 0, 0, 0, 1],
        ));
        assert_eq!(x.ratfunc().unwrap(), &expected_x);
        assert_eq!(y.ratfunc().unwrap(), &expected_y);
    }

    #[test]
    fn base_point_for_p3_n1() {
        let fam = ExplicitFamily::build(3, 1).unwrap();
        assert_eq!(fam.d, 4);
        let (x, _) = fam.points[0].xy().unwrap();
        // In characteristic 3, 1 + 4u = 1 + u, and the fraction
        // u^3(u^3 - u)/(1 + u)^3 reduces: u^3 - u = u(u-1)(u+1) shares the
        // root -1 with the denominator.  Reduced form: u^4(u-1)/(u+1)^2.
        let ctx = &fam.base_ctx;
        let u = Poly::var(ctx);
        let num = &u.pow(4) * &(&u - &Poly::one(ctx));
        let den = Poly::from_integers(ctx, &[1, 1]).pow(2);
        let expected = RatFunc::new(num, den).unwrap();
        assert_eq!(x.ratfunc().unwrap(), &expected);
    }

    #[test]
    fn x_heights_match_the_degree_count() {
        // p = 2: x(P) is a polynomial of degree 2q.  p odd: the closed form
        // has degree 2q but always reduces by one factor of (1+4u), since
        // -1/4 lies in F_p and is a simple root of u^q - u; the canonical
        // height of the fraction is therefore 2q - 1.
        for (p, n) in [(2u64, 1u32), (2, 2), (2, 3)] {
            let fam = ExplicitFamily::build(p, n).unwrap();
            let (x, _) = fam.points[0].xy().unwrap();
            assert_eq!(x.ratfunc().unwrap().naive_height(), 2 * fam.q);
        }
        for (p, n) in [(3u64, 1u32), (3, 2), (5, 1), (7, 1)] {
            let fam = ExplicitFamily::build(p, n).unwrap();
            let (x, _) = fam.points[0].xy().unwrap();
            assert_eq!(x.ratfunc().unwrap().naive_height(), 2 * fam.q - 1);
        }
    }

    #[test]
    fn all_points_pass_on_curve() {
        for (p, n) in [(2u64, 1u32), (3, 1), (2, 2)] {
            let fam = ExplicitFamily::build(p, n).unwrap();
            let report = fam.verify_points_on_curve();
            assert_eq!(report.checks.len(), fam.d as usize);
            assert!(report.all_pass());
        }
    }

    #[test]
    fn tampered_point_fails() {
        let fam = ExplicitFamily::build(2, 1).unwrap();
        let (x, y) = fam.points[0].xy().unwrap();
        let bad = CurvePoint::affine(&x.clone() + &fam.fn_ctx.one(), y.clone());
        assert!(!fam.curve.contains(&bad));
    }

    #[test]
    fn dropping_the_denominator_breaks_the_formula() {
        // Negative control: with (1+4u) replaced by 1 the odd-p formula
        // does not satisfy the curve equation.
        let fam = ExplicitFamily::build(3, 1).unwrap();
        let ctx = &fam.base_ctx;
        let q = fam.q as usize;
        let u = Poly::var(ctx);
        let x = RatFunc::from_poly(&u.pow(2 * q) - &u.pow(q + 1));
        let half_inv = ctx.from_integer(2).inv().unwrap();
        let y_poly = &(&u.pow(2 * q)
            * &Poly::from_coeffs(ctx, {
                let mut cs = vec![ctx.zero(); q + 1];
                cs[0] = ctx.one();
                cs[1] = ctx.from_integer(2);
                cs[q] = &cs[q] + &ctx.from_integer(2);
                cs
            }))
            .scale(&half_inv)
            - &u.pow(2 * q).scale(&half_inv);
        let y = RatFunc::from_poly(y_poly);
        let pt = CurvePoint::affine(
            fam.fn_ctx.from_ratfunc(x).unwrap(),
            fam.fn_ctx.from_ratfunc(y).unwrap(),
        );
        assert!(!fam.curve.contains(&pt));
    }

    #[test]
    fn equation_identity_for_odd_p() {
        for (p, n) in [(3u64, 1u32), (5, 1)] {
            let fam = ExplicitFamily::build(p, n).unwrap();
            assert!(fam.verify_equation_identity().unwrap().all_pass());
        }
        let fam2 = ExplicitFamily::build(2, 1).unwrap();
        assert!(matches!(
            fam2.verify_equation_identity(),
            Err(Error::Inapplicable(_))
        ));
    }

    #[test]
    fn galois_translation_permutes_the_family() {
        let fam = ExplicitFamily::build(3, 1).unwrap();
        for i in 0..fam.d as usize {
            let (x, y) = fam.points[i].xy().unwrap();
            let xs = x.ratfunc().unwrap().substitute_scale(&fam.zeta).unwrap();
            let ys = y.ratfunc().unwrap().substitute_scale(&fam.zeta).unwrap();
            let next = &fam.points[(i + 1) % fam.d as usize];
            let (nx, ny) = next.xy().unwrap();
            assert_eq!(&xs, nx.ratfunc().unwrap());
            assert_eq!(&ys, ny.ratfunc().unwrap());
        }
    }

    #[test]
    fn torsion_and_relations() {
        for (p, n) in [(2u64, 1u32), (3, 1)] {
            let fam = ExplicitFamily::build(p, n).unwrap();
            assert!(fam.torsion_subgroup_report().unwrap().all_pass());
            assert!(fam.verify_torsion_relations().unwrap().all_pass());
        }
    }

    #[test]
    fn base_point_is_not_torsion() {
        let fam = ExplicitFamily::build(2, 1).unwrap();
        assert_eq!(fam.curve.point_order(&fam.points[0], 16).unwrap(), None);
    }

    #[test]
    fn build_rejects_bad_parameters() {
        assert_eq!(ExplicitFamily::build(4, 1).unwrap_err(), Error::NotPrime(4));
        assert!(matches!(
            ExplicitFamily::build(2, 11),
            Err(Error::OutOfRange(_))
        ));
        assert!(matches!(
            ExplicitFamily::build(2, 0),
            Err(Error::OutOfRange(_))
        ));
    }
}
