//! Numerical invariants of Berger's construction and the rank formula.
//!
//! The construction starts from rational functions `f` on a curve of genus
//! `g_C` and `g` on a curve of genus `g_D`, with zero/pole multiplicities
//! `a_i / a'_{i'}` and `b_j / b'_{j'}`, and considers the pencil
//! `f - t g = 0` together with its pullbacks under `t -> t^{1/d}`.
//! Everything here is integer combinatorics on the multiplicities:
//! blow-up counts, the genus of the generic fiber, component counts of
//! Kummer covers `z^d = f`, the correction terms `c1(d)`, `c2(d)`, the
//! dimension of the `K/k`-trace, and the Mordell-Weil rank assembled from
//! a supplied homomorphism-module rank.
//!
//! `rk Hom(J_{C_d}, J_{D_d})^{mu_d}` itself is an arithmetic input that
//! this module does not compute; the presets below cover the cases whose
//! values are known in closed form.

use num_integer::Integer;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::fields::multiplicative_order_mod;
use crate::{Error, Result};

/// Multiplicity and genus data defining one instance of the construction.
///
/// `c1_base` is the geometric input `sum_{v != 0,inf} (f_{1,v} - 1)`:
/// the number of extra fiber components away from `0` and `infinity`,
/// which depends on the positions of the zeroes and poles and is supplied
/// by the caller (in the worked examples it is 0 and 1).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BergerData {
    #[serde(rename = "gC")]
    pub g_c: u64,
    #[serde(rename = "gD")]
    pub g_d: u64,
    /// Zero multiplicities of `f`.
    pub a: Vec<u64>,
    /// Pole multiplicities of `f`.
    pub ap: Vec<u64>,
    /// Zero multiplicities of `g`.
    pub b: Vec<u64>,
    /// Pole multiplicities of `g`.
    pub bp: Vec<u64>,
    /// Characteristic of the ground field (0 or prime).
    pub p: u64,
    pub c1_base: u64,
}

impl BergerData {
    pub fn new(
        g_c: u64,
        g_d: u64,
        a: Vec<u64>,
        ap: Vec<u64>,
        b: Vec<u64>,
        bp: Vec<u64>,
        p: u64,
        c1_base: u64,
    ) -> Result<Self> {
        let data = BergerData { g_c, g_d, a, ap, b, bp, p, c1_base };
        data.validate()?;
        Ok(data)
    }

    /// `f(x) = x(x-1)`, `g(y) = y^2/(1-y)` on two projective lines.
    pub fn example1(p: u64) -> Self {
        BergerData {
            g_c: 0,
            g_d: 0,
            a: vec![1, 1],
            ap: vec![2],
            b: vec![2],
            bp: vec![1, 1],
            p,
            c1_base: 0,
        }
    }

    /// `f(x) = x(x-1)(x-a) = g`, over characteristic 0.
    pub fn example2() -> Self {
        BergerData {
            g_c: 0,
            g_d: 0,
            a: vec![1, 1, 1],
            ap: vec![3],
            b: vec![1, 1, 1],
            bp: vec![3],
            p: 0,
            c1_base: 1,
        }
    }

    /// `f(x) = x^2`, `g` a quadratic with distinct zeroes and poles; the
    /// smallest case whose trace alternates with the parity of `d`.
    pub fn square_pencil() -> Self {
        BergerData {
            g_c: 0,
            g_d: 0,
            a: vec![2],
            ap: vec![2],
            b: vec![1, 1],
            bp: vec![1, 1],
            p: 0,
            c1_base: 0,
        }
    }

    /// Preset lookup by CLI name.
    pub fn preset(name: &str) -> Option<Self> {
        match name {
            "example1" => Some(Self::example1(0)),
            "example2" => Some(Self::example2()),
            "berger-square" => Some(Self::square_pencil()),
            _ => None,
        }
    }

    /// Check the divisor-degree balance and the gcd hypothesis; the error
    /// message names the violated clause.
    pub fn validate(&self) -> Result<()> {
        let all = [&self.a, &self.ap, &self.b, &self.bp];
        if all.iter().any(|v| v.is_empty()) {
            return Err(Error::DataInvariant(
                "each multiplicity list must be non-empty".into(),
            ));
        }
        if all.iter().flat_map(|v| v.iter()).any(|&m| m == 0) {
            return Err(Error::DataInvariant("multiplicities must be positive".into()));
        }
        let sum = |v: &[u64]| v.iter().sum::<u64>();
        if sum(&self.a) != sum(&self.ap) {
            return Err(Error::DataInvariant(
                "divisor of f must have degree 0: sum(a) != sum(ap)".into(),
            ));
        }
        if sum(&self.b) != sum(&self.bp) {
            return Err(Error::DataInvariant(
                "divisor of g must have degree 0: sum(b) != sum(bp)".into(),
            ));
        }
        let g = all
            .iter()
            .flat_map(|v| v.iter())
            .fold(0u64, |acc, &m| acc.gcd(&m));
        if g != 1 {
            return Err(Error::DataInvariant(format!(
                "gcd of all multiplicities must be 1, found {g}"
            )));
        }
        if self.p != 0 && !crate::fields::is_prime(self.p) {
            return Err(Error::DataInvariant(format!(
                "characteristic must be 0 or prime, found {}",
                self.p
            )));
        }
        if self.p != 0 {
            for &ai in &self.a {
                for &bj in &self.b {
                    if ai.gcd(&bj) % self.p == 0 {
                        return Err(Error::DataInvariant(format!(
                            "characteristic {} divides gcd({ai},{bj}) at a base point",
                            self.p
                        )));
                    }
                }
            }
            for &ai in &self.ap {
                for &bj in &self.bp {
                    if ai.gcd(&bj) % self.p == 0 {
                        return Err(Error::DataInvariant(format!(
                            "characteristic {} divides gcd({ai},{bj}) at a base point at infinity",
                            self.p
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// `m = sum a_i` (= `sum a'_{i'}`).
    pub fn deg_f(&self) -> u64 {
        self.a.iter().sum()
    }

    /// `n = sum b_j`.
    pub fn deg_g(&self) -> u64 {
        self.b.iter().sum()
    }

    fn f_mults(&self) -> impl Iterator<Item = u64> + '_ {
        self.a.iter().chain(self.ap.iter()).copied()
    }

    fn g_mults(&self) -> impl Iterator<Item = u64> + '_ {
        self.b.iter().chain(self.bp.iter()).copied()
    }

    /// Number of components of the degree-`d` cover `z^d = f`: the largest
    /// divisor `e | d` such that `f` is an `e`-th power, which over an
    /// algebraically closed field with a rational base curve equals
    /// `gcd(d, a_1, ..., a'_{k'})`.
    pub fn e_f(&self, d: u64) -> u64 {
        self.f_mults().fold(d, |acc, m| acc.gcd(&m))
    }

    /// Same for `w^d = g`.
    pub fn e_g(&self, d: u64) -> u64 {
        self.g_mults().fold(d, |acc, m| acc.gcd(&m))
    }

    /// Least common multiple of every multiplicity; `c2` is periodic in `d`
    /// with period dividing this.
    pub fn mult_lcm(&self) -> u64 {
        self.f_mults().chain(self.g_mults()).fold(1u64, |acc, m| acc.lcm(&m))
    }
}

/// Number of subtract-smaller-from-larger steps from `(a, b)` down to
/// `(gcd, 0)`; this counts the blow-ups needed at a base point with local
/// equation `t x^a = y^b`.
pub fn blowup_steps(a: u64, b: u64) -> Result<u64> {
    if a == 0 || b == 0 {
        return Err(Error::OutOfRange("blowup_steps needs positive inputs".into()));
    }
    let (mut a, mut b) = (a, b);
    let mut steps = 0u64;
    while a != 0 && b != 0 {
        if a >= b {
            steps += a / b;
            a %= b;
        } else {
            steps += b / a;
            b %= a;
        }
    }
    Ok(steps)
}

/// Genus drop `(ab - a - b + gcd(a,b)) / 2` contributed by a base point.
pub fn genus_drop(a: u64, b: u64) -> u64 {
    let s = a * b + a.gcd(&b) - a - b;
    debug_assert_eq!(s % 2, 0, "ab - a - b + gcd(a,b) is always even");
    s / 2
}

/// Genus of the smooth proper model of `f - t g = 0`:
/// `m g_D + n g_C + (m-1)(n-1) - sum delta(a_i, b_j) - sum delta(a'_i, b'_j)`.
pub fn genus_x(data: &BergerData) -> Result<u64> {
    data.validate()?;
    let m = data.deg_f();
    let n = data.deg_g();
    let mut g = (m * data.g_d + n * data.g_c + (m - 1) * (n - 1)) as i64;
    for &ai in &data.a {
        for &bj in &data.b {
            g -= genus_drop(ai, bj) as i64;
        }
    }
    for &ai in &data.ap {
        for &bj in &data.bp {
            g -= genus_drop(ai, bj) as i64;
        }
    }
    debug_assert!(g >= 0);
    Ok(g as u64)
}

/// Largest divisor of `d` dividing every multiplicity in `mults`
/// (the component count of the cyclic cover for a rational base curve
/// over an algebraically closed field).
pub fn cover_components(d: u64, mults: &[u64]) -> u64 {
    mults.iter().fold(d, |acc, m| acc.gcd(m))
}

/// `c1(d) = d * c1_base`: extra fiber components away from 0 and infinity
/// simply pull back through the degree-`d` base change.
pub fn c1(d: u64, data: &BergerData) -> i64 {
    (d * data.c1_base) as i64
}

/// The combinatorial correction term
/// `c2(d) = sum t_{d,i,j} - sum gcd(a_i, e_g) - sum gcd(b_j, e_f) + 1`
/// plus the same expression for the pole multiplicities, where
/// `t_{d,i,j} = gcd(a_i, b_j, d)`.
pub fn c2(d: u64, data: &BergerData) -> i64 {
    let ef = data.e_f(d);
    let eg = data.e_g(d);
    let line = |zeros_f: &[u64], zeros_g: &[u64]| -> i64 {
        let mut total: i64 = 1;
        for &ai in zeros_f {
            for &bj in zeros_g {
                total += ai.gcd(&bj).gcd(&d) as i64;
            }
            total -= ai.gcd(&eg) as i64;
        }
        for &bj in zeros_g {
            total -= bj.gcd(&ef) as i64;
        }
        total
    };
    line(&data.a, &data.b) + line(&data.ap, &data.bp)
}

/// Genus of the cyclic cover `z^d = f` of a curve of genus `base_genus`
/// branched where `f` has zeroes/poles of the given multiplicities, by
/// Riemann-Hurwitz: `2g - 2 = d(2 base_genus - 2) + sum (d - gcd(m, d))`.
/// Requires the cover to be irreducible (`gcd(d, mults) = 1`).
pub fn kummer_genus(d: u64, base_genus: u64, branch_mults: &[u64]) -> Result<u64> {
    if d == 0 {
        return Err(Error::OutOfRange("cover degree must be positive".into()));
    }
    if cover_components(d, branch_mults) != 1 {
        return Err(Error::ReducibleCover);
    }
    let mut two_g_minus_2 = (d as i64) * (2 * base_genus as i64 - 2);
    for &m in branch_mults {
        two_g_minus_2 += (d - m.gcd(&d)) as i64;
    }
    let two_g = two_g_minus_2 + 2;
    if two_g % 2 != 0 {
        return Err(Error::GenusParity);
    }
    if two_g < 0 {
        return Err(Error::DataInvariant("negative genus from branch data".into()));
    }
    Ok((two_g / 2) as u64)
}

/// Dimension of the `K/k`-trace of the Jacobian in layer `d`: the trace is
/// the product of the Jacobians of the covers `z^{e_g} = f^{1/e_f}` and
/// `w^{e_f} = g^{1/e_g}` (note the crossing of the two indices).
pub fn trace_dimension(d: u64, data: &BergerData) -> Result<u64> {
    data.validate()?;
    let ef = data.e_f(d);
    let eg = data.e_g(d);
    let f_reduced: Vec<u64> = data.f_mults().map(|m| m / ef).collect();
    let g_reduced: Vec<u64> = data.g_mults().map(|m| m / eg).collect();
    let dim_c = kummer_genus(eg, data.g_c, &f_reduced)?;
    let dim_d = kummer_genus(ef, data.g_d, &g_reduced)?;
    Ok(dim_c + dim_d)
}

/// `rk MW(J_d) = hom_rank - c1(d) + c2(d)`.
pub fn mordell_weil_rank(d: u64, hom_rank: i64, data: &BergerData) -> i64 {
    hom_rank - c1(d, data) + c2(d, data)
}

/// Known closed forms for the homomorphism-module rank.
pub mod hom_rank {
    /// `rk End(J_{C_d})^{anti-mu_d}` for the quadratic pencil when the
    /// ground field contains the `d`-th roots of unity and `d = p^n + 1`:
    /// `p^n - 1` for odd `p` and `p^n` for `p = 2`.
    pub fn quadratic_pencil_full(p: u64, n: u32) -> i64 {
        let q = p.pow(n) as i64;
        if p == 2 {
            q
        } else {
            q - 1
        }
    }

    /// Minimum of `rk End(J_{C_d})^{mu_d}`: the cyclotomic algebra alone
    /// contributes `d - 1`.
    pub fn cyclotomic_minimum(d: u64) -> i64 {
        d as i64 - 1
    }

    /// The CM case of the cubic pencil: `phi(d) + d - 1`.
    pub fn cubic_pencil_cm(d: u64) -> i64 {
        super::euler_phi(d) as i64 + d as i64 - 1
    }
}

/// Euler's totient by trial-division factorization.
pub fn euler_phi(n: u64) -> u64 {
    let mut phi = n;
    for (p, _) in crate::fields::factor_u64(n) {
        phi = phi / p * (p - 1);
    }
    phi
}

/// Divisors of `n` in increasing order, by trial division.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            if d != n / d {
                out.push(n / d);
            }
        }
        d += 1;
    }
    out.sort_unstable();
    out
}

/// The two worked pencil families, named by the degree of `f`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PencilFamily {
    /// `f(x) = x(x-1)`: new parts vanish for `e <= 2` and have dimension
    /// `phi(e)/2` beyond that.
    Quadratic,
    /// `f(x) = x(x-1)(x-a)`: new part has dimension `phi(e)` for `e > 3`
    /// and 1 for `e = 2, 3`.
    Cubic,
}

/// Dimension of the new part of `J_{C_e}` for each divisor `e | d`.
/// The dimensions sum to the genus of `C_d`.
pub fn new_part_dimensions(d: u64, family: PencilFamily) -> Vec<(u64, u64)> {
    divisors(d)
        .into_iter()
        .map(|e| {
            let dim = match family {
                PencilFamily::Quadratic => {
                    if e <= 2 {
                        0
                    } else {
                        euler_phi(e) / 2
                    }
                }
                PencilFamily::Cubic => match e {
                    1 => 0,
                    2 | 3 => 1,
                    _ => euler_phi(e),
                },
            };
            (e, dim)
        })
        .collect()
}

/// Branch multiplicities of the defining function of each family.
pub fn family_branch_mults(family: PencilFamily) -> &'static [u64] {
    match family {
        PencilFamily::Quadratic => &[1, 1, 2],
        PencilFamily::Cubic => &[1, 1, 1, 3],
    }
}

/// Exact lower bound data for the quadratic pencil over `F_q`, `q = p^n`,
/// in the layer `d = q + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankBound {
    /// `sum_{e | d, e > 2} phi(e) / o_e(q)` as an exact rational.
    pub divisor_sum: BigRational,
    /// `(p^n - 1) / 2n`.
    pub floor_bound: BigRational,
}

/// Computes both sides of the bound
/// `rank >= sum_{e|d, e>2} phi(e)/o_e(q) >= (p^n - 1)/2n` and checks the
/// second inequality.
pub fn rank_lower_bound(p: u64, n: u32) -> Result<RankBound> {
    if !crate::fields::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let q = p
        .checked_pow(n)
        .ok_or_else(|| Error::OutOfRange(format!("{p}^{n} overflows")))?;
    let d = q + 1;
    let mut sum = BigRational::from_integer(0.into());
    for e in divisors(d) {
        if e <= 2 {
            continue;
        }
        let order = multiplicative_order_mod(q % e, e)?;
        sum += BigRational::new(euler_phi(e).into(), order.into());
    }
    let floor_bound = BigRational::new((q - 1).into(), (2 * n as u64).into());
    debug_assert!(sum >= floor_bound);
    Ok(RankBound { divisor_sum: sum, floor_bound })
}

/// Per-layer invariant summary for one `BergerData` instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantReport {
    pub d: u64,
    pub e_f: u64,
    pub e_g: u64,
    /// `r_{d,i} = gcd(a_i, d)` — points of `C_d` over each zero of `f`.
    pub r: Vec<u64>,
    pub rp: Vec<u64>,
    pub s: Vec<u64>,
    pub sp: Vec<u64>,
    /// `t_{d,i,j} = gcd(a_i, b_j, d)` in row-major `(i, j)` order.
    pub t: Vec<u64>,
    pub tp: Vec<u64>,
    pub genus: u64,
    pub c1: i64,
    pub c2: i64,
    pub trace_dim: u64,
    /// Present only when a homomorphism rank was supplied.
    pub rank: Option<i64>,
}

/// Assemble every layer-`d` invariant of the construction.
pub fn invariant_report(d: u64, data: &BergerData, hom_rank: Option<i64>) -> Result<InvariantReport> {
    data.validate()?;
    if d == 0 || d > 10_000 {
        return Err(Error::OutOfRange(format!("d = {d} outside 1..=10^4")));
    }
    if data.p != 0 && d % data.p == 0 {
        return Err(Error::DataInvariant(format!(
            "layer d = {d} must be prime to the characteristic {}",
            data.p
        )));
    }
    let gcd_d = |v: &[u64]| v.iter().map(|&m| m.gcd(&d)).collect::<Vec<_>>();
    let pairs = |xs: &[u64], ys: &[u64]| {
        xs.iter()
            .flat_map(|&x| ys.iter().map(move |&y| x.gcd(&y).gcd(&d)))
            .collect::<Vec<_>>()
    };
    Ok(InvariantReport {
        d,
        e_f: data.e_f(d),
        e_g: data.e_g(d),
        r: gcd_d(&data.a),
        rp: gcd_d(&data.ap),
        s: gcd_d(&data.b),
        sp: gcd_d(&data.bp),
        t: pairs(&data.a, &data.b),
        tp: pairs(&data.ap, &data.bp),
        genus: genus_x(data)?,
        c1: c1(d, data),
        c2: c2(d, data),
        trace_dim: trace_dimension(d, data)?,
        rank: hom_rank.map(|h| mordell_weil_rank(d, h, data)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn blowup_step_counts() {
        assert_eq!(blowup_steps(1, 1).unwrap(), 1);
        assert_eq!(blowup_steps(2, 3).unwrap(), 3);
        assert_eq!(blowup_steps(5, 1).unwrap(), 5);
        assert_eq!(blowup_steps(7, 7).unwrap(), 1);
        assert!(blowup_steps(0, 3).is_err());
        // Recursion: gamma(a, b) = gamma(a - b, b) + 1 for a > b.
        for a in 1..=30u64 {
            for b in 1..a {
                assert_eq!(
                    blowup_steps(a, b).unwrap(),
                    blowup_steps(a - b, b).unwrap() + 1
                );
                assert_eq!(blowup_steps(a, b).unwrap(), blowup_steps(b, a).unwrap());
                assert!(blowup_steps(a, b).unwrap() >= 1);
            }
        }
    }

    #[test]
    fn genus_drop_values() {
        assert_eq!(genus_drop(1, 1), 0);
        assert_eq!(genus_drop(2, 3), 1);
        assert_eq!(genus_drop(3, 3), 3);
        // Integrality over a grid: ab - a - b + gcd is always even.
        for a in 1..=50u64 {
            for b in 1..=50u64 {
                let s = a * b + a.gcd(&b) - a - b;
                assert_eq!(s % 2, 0, "odd at ({a},{b})");
            }
        }
    }

    #[test]
    fn genus_of_both_examples_is_one() {
        assert_eq!(genus_x(&BergerData::example1(0)).unwrap(), 1);
        assert_eq!(genus_x(&BergerData::example2()).unwrap(), 1);
        // m = n = 1: all delta terms vanish and (m-1)(n-1) = 0.
        let trivial = BergerData {
            g_c: 0,
            g_d: 0,
            a: vec![1],
            ap: vec![1],
            b: vec![1],
            bp: vec![1],
            p: 0,
            c1_base: 0,
        };
        assert_eq!(genus_x(&trivial).unwrap(), 0);
    }

    #[test]
    fn component_counts() {
        // Quadratic pencil: mults (1,1,2) force e = 1 for every d.
        assert_eq!(cover_components(6, &[1, 1, 2]), 1);
        // f = x^2: e_{d,f} = gcd(2, d).
        assert_eq!(cover_components(4, &[2, 2]), 2);
        assert_eq!(cover_components(7, &[2, 2]), 1);
        assert_eq!(cover_components(1, &[5, 10]), 1);
    }

    #[test]
    fn correction_terms_for_the_examples() {
        let ex1 = BergerData::example1(0);
        let ex2 = BergerData::example2();
        for d in 1..=24 {
            assert_eq!(c1(d, &ex1), 0);
            assert_eq!(c2(d, &ex1), 0);
            assert_eq!(c1(d, &ex2), d as i64);
            assert_eq!(c2(d, &ex2), if d % 3 == 0 { 6 } else { 4 });
        }
        assert_eq!(c2(2, &ex2), 4);
        assert_eq!(c2(3, &ex2), 6);
        assert_eq!(c1(7, &ex1), 0);
        assert_eq!(c1(5, &ex2), 5);
        assert_eq!(c1(1, &ex2), 1);
    }

    #[test]
    fn c2_is_periodic_and_bounded_below() {
        for data in [
            BergerData::example1(0),
            BergerData::example2(),
            BergerData::square_pencil(),
        ] {
            let period = data.mult_lcm();
            let base = c2(1, &data);
            for d in 1..=4 * period {
                assert!(c2(d, &data) >= base);
                let reduced = if d % period == 0 { period } else { d % period };
                assert_eq!(c2(d, &data), c2(reduced, &data), "period failure at d={d}");
            }
        }
    }

    #[test]
    fn c2_closed_form_for_coprime_d() {
        // For d prime to every multiplicity,
        // c2(d) = (k-1)(l-1) + (k'-1)(l'-1).
        let data = BergerData::example2();
        let k = data.a.len() as i64;
        let l = data.b.len() as i64;
        let kp = data.ap.len() as i64;
        let lp = data.bp.len() as i64;
        let expected = (k - 1) * (l - 1) + (kp - 1) * (lp - 1);
        for d in [1u64, 2, 5, 7, 11] {
            assert_eq!(c2(d, &data), expected);
        }
    }

    #[test]
    fn kummer_genera() {
        // Quadratic pencil: genus (d-1)/2 for odd d, (d-2)/2 for even d.
        assert_eq!(kummer_genus(5, 0, &[1, 1, 2]).unwrap(), 2);
        assert_eq!(kummer_genus(6, 0, &[1, 1, 2]).unwrap(), 2);
        // Cubic pencil: genus d-1 when 3 does not divide d, d-2 otherwise.
        assert_eq!(kummer_genus(5, 0, &[1, 1, 1, 3]).unwrap(), 4);
        assert_eq!(kummer_genus(6, 0, &[1, 1, 1, 3]).unwrap(), 4);
        // Trivial cover keeps the base genus.
        assert_eq!(kummer_genus(1, 7, &[1, 1]).unwrap(), 7);
        // Reducible covers are rejected.
        assert_eq!(kummer_genus(2, 0, &[2, 2]), Err(Error::ReducibleCover));
    }

    #[test]
    fn trace_dimension_cases() {
        // Square pencil: B_d = 0 for odd d, an elliptic curve for even d.
        let sq = BergerData::square_pencil();
        for d in 1..=12u64 {
            let expected = if d % 2 == 0 { 1 } else { 0 };
            assert_eq!(trace_dimension(d, &sq).unwrap(), expected, "d = {d}");
        }
        // Both worked examples have trivial trace in every layer.
        for d in 1..=12u64 {
            assert_eq!(trace_dimension(d, &BergerData::example1(0)).unwrap(), 0);
            assert_eq!(trace_dimension(d, &BergerData::example2()).unwrap(), 0);
        }
    }

    #[test]
    fn rank_formula_assembly() {
        let ex1 = BergerData::example1(2);
        assert_eq!(mordell_weil_rank(3, 2, &ex1), 2);
        let ex2 = BergerData::example2();
        assert_eq!(mordell_weil_rank(5, 8, &ex2), 7);
        // hom_rank = c1 - c2 gives rank 0.
        let h = c1(6, &ex2) - c2(6, &ex2);
        assert_eq!(mordell_weil_rank(6, h, &ex2), 0);
    }

    #[test]
    fn lower_bounds_for_small_fields() {
        let half = BigRational::new(1.into(), 2.into());
        let b = rank_lower_bound(2, 1).unwrap();
        assert_eq!(b.divisor_sum, BigRational::from_integer(1.into()));
        assert_eq!(b.floor_bound, half);

        let b = rank_lower_bound(3, 1).unwrap();
        assert_eq!(b.divisor_sum, BigRational::from_integer(1.into()));
        assert_eq!(b.floor_bound, BigRational::from_integer(1.into()));

        let b = rank_lower_bound(2, 2).unwrap();
        assert_eq!(b.divisor_sum, BigRational::from_integer(2.into()));
        assert_eq!(b.floor_bound, BigRational::new(3.into(), 4.into()));

        assert!(rank_lower_bound(4, 1).is_err());
    }

    #[test]
    fn new_part_dimensions_sum_to_cover_genus() {
        for family in [PencilFamily::Quadratic, PencilFamily::Cubic] {
            let mults = family_branch_mults(family);
            for d in 1..=24u64 {
                let total: u64 = new_part_dimensions(d, family).iter().map(|(_, m)| m).sum();
                assert_eq!(total, kummer_genus(d, 0, mults).unwrap(), "d = {d}");
            }
        }
        // Spot values.
        assert_eq!(new_part_dimensions(5, PencilFamily::Quadratic), vec![(1, 0), (5, 2)]);
        assert_eq!(new_part_dimensions(2, PencilFamily::Quadratic), vec![(1, 0), (2, 0)]);
        assert_eq!(
            new_part_dimensions(6, PencilFamily::Cubic),
            vec![(1, 0), (2, 1), (3, 1), (6, 2)]
        );
    }

    #[test]
    fn validation_rejects_bad_data() {
        // Unbalanced divisor degree.
        let bad = BergerData {
            g_c: 0, g_d: 0,
            a: vec![2],
            ap: vec![1],
            b: vec![1],
            bp: vec![1],
            p: 0,
            c1_base: 0,
        };
        assert!(matches!(bad.validate(), Err(Error::DataInvariant(_))));

        // gcd of all multiplicities > 1.
        let bad = BergerData {
            g_c: 0, g_d: 0,
            a: vec![2],
            ap: vec![2],
            b: vec![2],
            bp: vec![2],
            p: 0,
            c1_base: 0,
        };
        let err = bad.validate().unwrap_err();
        assert!(matches!(err, Error::DataInvariant(ref m) if m.contains("gcd")));

        // Characteristic dividing a base-point gcd.
        let bad = BergerData {
            g_c: 0, g_d: 0,
            a: vec![2, 1],
            ap: vec![3],
            b: vec![2, 1],
            bp: vec![3],
            p: 2,
            c1_base: 0,
        };
        let err = bad.validate().unwrap_err();
        assert!(matches!(err, Error::DataInvariant(ref m) if m.contains("characteristic 2")));

        // Characteristic must be 0 or prime.
        let bad = BergerData { p: 6, ..BergerData::example1(0) };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn report_assembles_all_invariants() {
        let data = BergerData::example2();
        let rep = invariant_report(3, &data, Some(hom_rank::cubic_pencil_cm(3))).unwrap();
        assert_eq!(rep.e_f, 1);
        assert_eq!(rep.e_g, 1);
        assert_eq!(rep.genus, 1);
        assert_eq!(rep.c1, 3);
        assert_eq!(rep.c2, 6);
        assert_eq!(rep.t, vec![1; 9]);
        assert_eq!(rep.tp, vec![3]);
        // phi(3) + 3 - 1 - 3 + 6 = 7
        assert_eq!(rep.rank, Some(7));
        // Layers divisible by the characteristic are rejected.
        let ex1 = BergerData::example1(2);
        assert!(invariant_report(4, &ex1, None).is_err());
    }

    #[test]
    fn json_schema_round_trip() {
        let json = r#"{"gC":0,"gD":0,"a":[1,1],"ap":[2],"b":[2],"bp":[1,1],"p":2,"c1_base":0}"#;
        let data: BergerData = serde_json::from_str(json).unwrap();
        assert_eq!(data, BergerData::example1(2));
        let back = serde_json::to_string(&data).unwrap();
        let again: BergerData = serde_json::from_str(&back).unwrap();
        assert_eq!(again, data);
    }
}
