//! Mordell-Weil lattice analysis: closed-form height Gram matrices, exact
//! rank and kernel over the rationals, identification with scaled `A_n*`
//! lattices, and an independent height oracle.
//!
//! The oracle uses the doubling limit of the degree height: for a point
//! `P` of the curve over `k(u)` the sequence
//!
//! ```text
//!     L_n = naive_height(x([2^n] P)) / 4^n
//! ```
//!
//! converges to the height pairing `<P, P>`, and the pairing polarizes as
//! `<P, Q> = (L(P+Q) - L(P) - L(Q)) / 2`.  Iteration happens on the
//! `x`-coordinate alone via the duplication formula
//!
//! ```text
//!     x(2P) = (x^4 - b4 x^2 - 2 b6 x - b8) / (4 x^3 + b2 x^2 + 2 b4 x + b6),
//! ```
//!
//! valid in every characteristic, with one rational-function reduction per
//! doubling.  A universal calibration constant `kappa` (measured once,
//! reported, and expected to be 1 up to truncation error) converts oracle
//! values to the closed-form normalization.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::ellcurve::{CurvePoint, WeierstrassCurve};
use crate::explicit_points::ExplicitFamily;
use crate::ratfunc::RatFunc;
use crate::{Error, Result};

/// How a Gram matrix was produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    ClosedForm,
    Oracle,
}

/// Symmetric matrix of exact rational height pairings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GramMatrix {
    dim: usize,
    entries: Vec<BigRational>,
    pub provenance: Provenance,
}

/// Exact rank/kernel data of a Gram matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeReport {
    pub rank: usize,
    /// Primitive integer kernel vectors, first nonzero entry positive.
    pub kernel: Vec<Vec<BigInt>>,
}

fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl GramMatrix {
    pub fn from_entries(dim: usize, entries: Vec<BigRational>, provenance: Provenance) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch);
        }
        Ok(GramMatrix { dim, entries, provenance })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, i: usize, j: usize) -> &BigRational {
        &self.entries[i * self.dim + j]
    }

    pub fn entries(&self) -> &[BigRational] {
        &self.entries
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.dim).all(|i| (0..i).all(|j| self.entry(i, j) == self.entry(j, i)))
    }

    /// Closed-form Gram matrix of the explicit point family in degree
    /// `d = p^n + 1`.  For `p = 2` the entries are `(d-1)^2/d` on the
    /// diagonal and `(1-d)/d` off it; for odd `p` they are
    /// `(d-1)(d-2)/d`, `2(1-d)/d` for even nonzero `i - j`, and `0` for
    /// odd `i - j`.
    pub fn closed_form(p: u64, d: u64) -> Result<Self> {
        if !crate::fields::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let mut q = p;
        let special = loop {
            if q + 1 == d {
                break true;
            }
            if q + 1 > d {
                break false;
            }
            q = q.checked_mul(p).ok_or(Error::NotSpecialDegree { p, d })?;
        };
        if !special || d < 3 {
            return Err(Error::NotSpecialDegree { p, d });
        }
        let dd = d as i64;
        let n = d as usize;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let delta = (i as i64 - j as i64).rem_euclid(2);
                let value = if i == j {
                    if p == 2 {
                        rational((dd - 1) * (dd - 1), dd)
                    } else {
                        rational((dd - 1) * (dd - 2), dd)
                    }
                } else if p == 2 {
                    rational(1 - dd, dd)
                } else if delta == 0 {
                    rational(2 * (1 - dd), dd)
                } else {
                    rational(0, 1)
                };
                entries.push(value);
            }
        }
        Ok(GramMatrix { dim: n, entries, provenance: Provenance::ClosedForm })
    }

    /// Gram matrix of the dual lattice `A_m*`: `m/(m+1)` on the diagonal
    /// and `-1/(m+1)` off it; determinant `1/(m+1)`.
    pub fn dual_a(m: usize) -> Self {
        let mm = m as i64;
        let mut entries = Vec::with_capacity(m * m);
        for i in 0..m {
            for j in 0..m {
                entries.push(if i == j {
                    rational(mm, mm + 1)
                } else {
                    rational(-1, mm + 1)
                });
            }
        }
        GramMatrix { dim: m, entries, provenance: Provenance::ClosedForm }
    }

    /// Exact determinant by fraction Gaussian elimination.
    pub fn det(&self) -> BigRational {
        let n = self.dim;
        let mut m: Vec<Vec<BigRational>> = (0..n)
            .map(|i| (0..n).map(|j| self.entry(i, j).clone()).collect())
            .collect();
        let mut det = BigRational::one();
        for c in 0..n {
            let pivot = match (c..n).find(|&r| !m[r][c].is_zero()) {
                None => return BigRational::zero(),
                Some(r) => r,
            };
            if pivot != c {
                m.swap(pivot, c);
                det = -det;
            }
            det *= m[c][c].clone();
            let inv = m[c][c].clone();
            for r in c + 1..n {
                if m[r][c].is_zero() {
                    continue;
                }
                let factor = &m[r][c] / &inv;
                for k in c..n {
                    let sub = &factor * &m[c][k];
                    m[r][k] -= sub;
                }
            }
        }
        det
    }

    /// Exact rank and primitive integer kernel basis, by fraction-free
    /// (Bareiss) elimination on the matrix with cleared denominators and
    /// deterministic first-nonzero pivoting.
    pub fn rank_report(&self) -> Result<LatticeReport> {
        if !self.is_symmetric() {
            return Err(Error::NonSymmetricMatrix);
        }
        let n = self.dim;
        let scale = self
            .entries
            .iter()
            .fold(BigInt::one(), |acc, e| acc.lcm(e.denom()));
        let mut m: Vec<Vec<BigInt>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let e = self.entry(i, j);
                        e.numer() * (&scale / e.denom())
                    })
                    .collect()
            })
            .collect();

        // Bareiss fraction-free row echelon.
        let mut pivot_cols = Vec::new();
        let mut prev = BigInt::one();
        let mut row = 0usize;
        for col in 0..n {
            let Some(p_row) = (row..n).find(|&r| !m[r][col].is_zero()) else {
                continue;
            };
            m.swap(row, p_row);
            for r in row + 1..n {
                for c in col + 1..n {
                    let v = (&m[row][col] * &m[r][c] - &m[r][col] * &m[row][c]) / &prev;
                    m[r][c] = v;
                }
                m[r][col] = BigInt::zero();
            }
            prev = m[row][col].clone();
            pivot_cols.push(col);
            row += 1;
            if row == n {
                break;
            }
        }
        let rank = pivot_cols.len();

        // Back-substitute one kernel vector per free column.
        let free_cols: Vec<usize> = (0..n).filter(|c| !pivot_cols.contains(c)).collect();
        let mut kernel = Vec::with_capacity(free_cols.len());
        for &f in &free_cols {
            let mut x: Vec<BigRational> = vec![BigRational::zero(); n];
            x[f] = BigRational::one();
            for (r, &pc) in pivot_cols.iter().enumerate().rev() {
                let mut acc = BigRational::zero();
                for c in pc + 1..n {
                    if !m[r][c].is_zero() && !x[c].is_zero() {
                        acc += BigRational::from(m[r][c].clone()) * &x[c];
                    }
                }
                x[pc] = -acc / BigRational::from(m[r][pc].clone());
            }
            // Clear denominators and normalize the sign.
            let denom_lcm = x.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
            let mut v: Vec<BigInt> = x
                .iter()
                .map(|r| r.numer() * (&denom_lcm / r.denom()))
                .collect();
            let content = v
                .iter()
                .fold(BigInt::zero(), |acc, c| acc.gcd(c));
            if !content.is_zero() && !content.is_one() {
                for c in v.iter_mut() {
                    *c = &*c / &content;
                }
            }
            if let Some(first) = v.iter().find(|c| !c.is_zero()) {
                if first.is_negative() {
                    for c in v.iter_mut() {
                        *c = -&*c;
                    }
                }
            }
            kernel.push(v);
        }
        Ok(LatticeReport { rank, kernel })
    }

    /// Whether `v` lies in the kernel: `G v = 0` exactly.
    pub fn annihilates(&self, v: &[BigInt]) -> bool {
        if v.len() != self.dim {
            return false;
        }
        (0..self.dim).all(|i| {
            let mut acc = BigRational::zero();
            for (j, c) in v.iter().enumerate() {
                acc += self.entry(i, j) * BigRational::from(c.clone());
            }
            acc.is_zero()
        })
    }

    /// Identification with a scaling of the dual `A` lattice.
    ///
    /// For `p = 2` the sublattice spanned by `P_1, ..., P_{d-1}` must have
    /// Gram exactly `(d-1) * A_{d-1}*`.  For odd `p` the even- and
    /// odd-index points pair to zero with each other, and each parity
    /// class (with one point dropped) must have Gram
    /// `(d-1) * A_{d/2-1}*`.  Exact equality entrywise.
    pub fn matches_scaled_dual_a(&self, p: u64) -> Result<bool> {
        let d = self.dim;
        let scale = BigRational::from(BigInt::from(d as i64 - 1));
        if p == 2 {
            let model = GramMatrix::dual_a(d - 1);
            Ok((1..d).all(|i| {
                (1..d).all(|j| *self.entry(i, j) == &scale * model.entry(i - 1, j - 1))
            }))
        } else {
            if d % 2 != 0 {
                return Err(Error::DimensionMismatch);
            }
            let evens: Vec<usize> = (0..d).step_by(2).collect();
            let odds: Vec<usize> = (1..d).step_by(2).collect();
            for &i in &evens {
                for &j in &odds {
                    if !self.entry(i, j).is_zero() {
                        return Ok(false);
                    }
                }
            }
            let model = GramMatrix::dual_a(d / 2 - 1);
            for class in [&evens, &odds] {
                for (a, &i) in class.iter().enumerate().skip(1) {
                    for (b, &j) in class.iter().enumerate().skip(1) {
                        if *self.entry(i, j) != &scale * model.entry(a - 1, b - 1) {
                            return Ok(false);
                        }
                    }
                }
            }
            Ok(true)
        }
    }
}

/// Result of iterating the doubling map on a point's `x`-coordinate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DoublingEstimate {
    /// `L_0, ..., L_iters`.
    Converging(Vec<BigRational>),
    /// Doubling reached infinity at the given iteration: the point is
    /// torsion and has no height limit.
    Torsion { iter: u32 },
}

/// Hard cap on oracle iterations (degree growth is `4^iters`).
pub const MAX_ORACLE_ITERS: u32 = 6;

struct DuplicationMap {
    b2: RatFunc,
    b4: RatFunc,
    b6: RatFunc,
    b8: RatFunc,
}

impl DuplicationMap {
    fn for_curve(curve: &WeierstrassCurve) -> Result<Self> {
        let inv = curve.invariants();
        let unwrap = |e: &crate::fields::FieldElement| -> Result<RatFunc> {
            e.ratfunc().cloned().ok_or(Error::CtxMismatch)
        };
        Ok(DuplicationMap {
            b2: unwrap(&inv.b2)?,
            b4: unwrap(&inv.b4)?,
            b6: unwrap(&inv.b6)?,
            b8: unwrap(&inv.b8)?,
        })
    }

    fn all_polynomial(&self) -> bool {
        [&self.b2, &self.b4, &self.b6, &self.b8]
            .iter()
            .all(|b| b.is_polynomial())
    }

    /// One step `x -> x(2P)`; `None` when the denominator vanishes
    /// identically, i.e. doubling lands at infinity.
    fn step(&self, x: &RatFunc) -> Result<Option<RatFunc>> {
        let ctx = x.ctx();
        let two = ctx.from_integer(2);
        let four = ctx.from_integer(4);
        if self.all_polynomial() {
            let a = x.num();
            let b = x.den();
            let a2 = a * a;
            let b2 = b * b;
            let ab = a * b;
            let a4 = &a2 * &a2;
            let a2b2 = &a2 * &b2;
            let ab3 = &ab * &b2;
            let b4 = &b2 * &b2;
            let a3b = &a2 * &ab;
            let num = &(&(&a4 - &(self.b4.num() * &a2b2))
                - &(&(self.b6.num() * &ab3).scale(&two)))
                - &(self.b8.num() * &b4);
            let den = &(&(&a3b.scale(&four) + &(self.b2.num() * &a2b2))
                + &(&(self.b4.num() * &ab3).scale(&two)))
                + &(self.b6.num() * &b4);
            if den.is_zero() {
                return Ok(None);
            }
            Ok(Some(RatFunc::new(num, den)?))
        } else {
            let two = RatFunc::constant(two);
            let four = RatFunc::constant(four);
            let x2 = x * x;
            let x3 = &x2 * x;
            let num = &(&(&(&x2 * &x2) - &(&self.b4 * &x2)) - &(&(&two * &self.b6) * x)) - &self.b8;
            let den = &(&(&(&four * &x3) + &(&self.b2 * &x2)) + &(&(&two * &self.b4) * x)) + &self.b6;
            if den.is_zero() {
                return Ok(None);
            }
            num.checked_div(&den).map(Some)
        }
    }
}

/// The sequence `L_n = naive_height(x([2^n] P)) / 4^n` for `n = 0..iters`,
/// or the iteration at which doubling hit infinity.
pub fn height_sequence(
    curve: &WeierstrassCurve,
    point: &CurvePoint,
    iters: u32,
) -> Result<DoublingEstimate> {
    if iters > MAX_ORACLE_ITERS {
        return Err(Error::OutOfRange(format!("iters > {MAX_ORACLE_ITERS}")));
    }
    if !curve.contains(point) {
        return Err(Error::PointNotOnCurve);
    }
    let Some((x, _)) = point.xy() else {
        return Ok(DoublingEstimate::Torsion { iter: 0 });
    };
    let mut x = x.ratfunc().cloned().ok_or(Error::CtxMismatch)?;
    let map = DuplicationMap::for_curve(curve)?;
    let mut seq = Vec::with_capacity(iters as usize + 1);
    let mut denom = BigInt::one();
    seq.push(BigRational::new(BigInt::from(x.naive_height()), denom.clone()));
    for n in 1..=iters {
        match map.step(&x)? {
            None => return Ok(DoublingEstimate::Torsion { iter: n }),
            Some(next) => x = next,
        }
        denom *= 4;
        seq.push(BigRational::new(BigInt::from(x.naive_height()), denom.clone()));
    }
    Ok(DoublingEstimate::Converging(seq))
}

/// Final estimate `L_iters(P)`; torsion is an error here.
fn height_limit(curve: &WeierstrassCurve, point: &CurvePoint, iters: u32) -> Result<BigRational> {
    match height_sequence(curve, point, iters)? {
        DoublingEstimate::Converging(seq) => Ok(seq.into_iter().last().expect("nonempty")),
        DoublingEstimate::Torsion { iter } => Err(Error::TorsionEncountered { iter }),
    }
}

/// Polarized pairing estimate `(L(P+Q) - L(P) - L(Q)) / 2` with shared
/// iteration depth; symmetric in its arguments.
///
/// When `P + Q` itself is torsion (detected by the doubling chain hitting
/// infinity) its height limit is exactly 0 and that value is used; torsion
/// in either operand is an error, since the polarization then has no
/// height to converge to.
pub fn pairing_estimate(
    curve: &WeierstrassCurve,
    p: &CurvePoint,
    q: &CurvePoint,
    iters: u32,
) -> Result<BigRational> {
    let sum = curve.add(p, q)?;
    let l_sum = match height_sequence(curve, &sum, iters)? {
        DoublingEstimate::Converging(seq) => seq.into_iter().last().expect("nonempty"),
        DoublingEstimate::Torsion { .. } => BigRational::zero(),
    };
    let l_p = height_limit(curve, p, iters)?;
    let l_q = height_limit(curve, q, iters)?;
    Ok((l_sum - l_p - l_q) / BigRational::from(BigInt::from(2)))
}

/// Measure the calibration constant on one family:
/// `kappa = <P_0, P_0>_closed / L_iters(P_0)`.
pub fn calibrate_kappa(family: &ExplicitFamily, iters: u32) -> Result<BigRational> {
    let gram = GramMatrix::closed_form(family.p, family.d)?;
    let l = height_limit(&family.curve, &family.points[0], iters)?;
    if l.is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok(gram.entry(0, 0) / l)
}

/// Round to the nearest integer, ties to even.
pub fn round_half_even(r: &BigRational) -> BigInt {
    let floor = r.floor().to_integer();
    let frac = r - BigRational::from(floor.clone());
    let half = rational(1, 2);
    if frac < half {
        floor
    } else if frac > half {
        floor + 1
    } else if floor.is_even() {
        floor
    } else {
        floor + 1
    }
}

/// Oracle run over a whole family, compared against the closed form.
#[derive(Clone, Debug)]
pub struct OracleReport {
    /// Calibration constant used (measured once on a reference family).
    pub kappa: BigRational,
    /// `<P_0,P_0>_closed / L(P_0)` measured on this family.
    pub family_kappa: BigRational,
    /// `|family_kappa - kappa| <= 1/100`.
    pub kappa_consistent: bool,
    /// Raw (uncalibrated) pairing estimates, row-major `d x d`.
    pub estimates: Vec<BigRational>,
    /// `max |kappa * estimate - gram|` over all entries.
    pub max_deviation: BigRational,
    /// Max deviation within `1/10`.
    pub within_tolerance: bool,
    /// `round(kappa * d * estimate) = d * gram` for every entry.
    pub rounding_matches: bool,
    pub iters: u32,
}

/// Run the pairing oracle on every `(i, j)` of a family and compare with
/// [`GramMatrix::closed_form`].  Pairs are evaluated in parallel.
pub fn oracle_report(
    family: &ExplicitFamily,
    iters: u32,
    kappa: &BigRational,
) -> Result<OracleReport> {
    let d = family.d as usize;
    let gram = GramMatrix::closed_form(family.p, family.d)?;
    let pairs: Vec<(usize, usize)> = (0..d)
        .flat_map(|i| (i..d).map(move |j| (i, j)))
        .collect();
    let computed: Vec<((usize, usize), Result<BigRational>)> = pairs
        .par_iter()
        .map(|&(i, j)| {
            (
                (i, j),
                pairing_estimate(&family.curve, &family.points[i], &family.points[j], iters),
            )
        })
        .collect();
    let mut estimates = vec![BigRational::zero(); d * d];
    for ((i, j), value) in computed {
        let v = value?;
        estimates[i * d + j] = v.clone();
        estimates[j * d + i] = v;
    }

    let family_kappa = calibrate_kappa(family, iters)?;
    let kappa_consistent = (&family_kappa - kappa).abs() <= rational(1, 100);

    let mut max_deviation = BigRational::zero();
    let mut rounding_matches = true;
    let dd = BigRational::from(BigInt::from(d as i64));
    for i in 0..d {
        for j in 0..d {
            let calibrated = kappa * &estimates[i * d + j];
            let deviation = (&calibrated - gram.entry(i, j)).abs();
            if deviation > max_deviation {
                max_deviation = deviation;
            }
            let scaled_true = gram.entry(i, j) * &dd;
            debug_assert!(scaled_true.is_integer());
            if BigRational::from(round_half_even(&(&calibrated * &dd))) != scaled_true {
                rounding_matches = false;
            }
        }
    }
    let within_tolerance = max_deviation <= rational(1, 10);
    Ok(OracleReport {
        kappa: kappa.clone(),
        family_kappa,
        kappa_consistent,
        estimates,
        max_deviation,
        within_tolerance,
        rounding_matches,
        iters,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_entries() {
        let g = GramMatrix::closed_form(2, 3).unwrap();
        assert_eq!(*g.entry(0, 0), rational(4, 3));
        assert_eq!(*g.entry(0, 1), rational(-2, 3));
        assert!(g.is_symmetric());

        let g = GramMatrix::closed_form(3, 4).unwrap();
        assert_eq!(*g.entry(0, 0), rational(3, 2));
        assert_eq!(*g.entry(0, 2), rational(-3, 2));
        assert_eq!(*g.entry(0, 1), rational(0, 1));

        let g = GramMatrix::closed_form(2, 5).unwrap();
        assert_eq!(*g.entry(0, 0), rational(16, 5));
        assert_eq!(*g.entry(0, 1), rational(-4, 5));

        assert!(matches!(
            GramMatrix::closed_form(2, 4),
            Err(Error::NotSpecialDegree { .. })
        ));
        assert!(matches!(
            GramMatrix::closed_form(5, 7),
            Err(Error::NotSpecialDegree { .. })
        ));
    }

    #[test]
    fn scaled_entries_are_integers_and_rows_sum_to_zero() {
        for (p, d) in [(2u64, 3u64), (2, 5), (2, 9), (3, 4), (3, 10), (5, 6), (7, 8)] {
            let g = GramMatrix::closed_form(p, d).unwrap();
            let dd = BigRational::from(BigInt::from(d as i64));
            for i in 0..g.dim() {
                let mut row_sum = BigRational::zero();
                let mut alt_sum = BigRational::zero();
                for j in 0..g.dim() {
                    assert!((g.entry(i, j) * &dd).is_integer());
                    row_sum += g.entry(i, j);
                    if j % 2 == 0 {
                        alt_sum += g.entry(i, j);
                    } else {
                        alt_sum -= g.entry(i, j);
                    }
                }
                assert!(row_sum.is_zero(), "row {i} of ({p},{d})");
                if p != 2 {
                    assert!(alt_sum.is_zero(), "alternating row {i} of ({p},{d})");
                }
            }
        }
    }

    #[test]
    fn rank_and_kernel_p2() {
        let g = GramMatrix::closed_form(2, 3).unwrap();
        let rep = g.rank_report().unwrap();
        assert_eq!(rep.rank, 2);
        assert_eq!(rep.kernel, vec![vec![
            BigInt::from(1),
            BigInt::from(1),
            BigInt::from(1)
        ]]);
    }

    #[test]
    fn rank_and_kernel_p_odd() {
        let g = GramMatrix::closed_form(3, 4).unwrap();
        let rep = g.rank_report().unwrap();
        assert_eq!(rep.rank, 2);
        assert_eq!(rep.kernel.len(), 2);
        // The all-ones and alternating vectors must be annihilated and the
        // kernel has exactly their span's dimension.
        let ones: Vec<BigInt> = vec![BigInt::one(); 4];
        let alternating: Vec<BigInt> =
            (0..4).map(|i| if i % 2 == 0 { BigInt::one() } else { -BigInt::one() }).collect();
        assert!(g.annihilates(&ones));
        assert!(g.annihilates(&alternating));
        for v in &rep.kernel {
            assert!(g.annihilates(v));
        }
    }

    #[test]
    fn zero_matrix_rank() {
        let g = GramMatrix::from_entries(
            4,
            vec![BigRational::zero(); 16],
            Provenance::ClosedForm,
        )
        .unwrap();
        let rep = g.rank_report().unwrap();
        assert_eq!(rep.rank, 0);
        assert_eq!(rep.kernel.len(), 4);
    }

    #[test]
    fn non_symmetric_rejected() {
        let mut entries = vec![BigRational::zero(); 4];
        entries[1] = BigRational::one();
        let g = GramMatrix::from_entries(2, entries, Provenance::ClosedForm).unwrap();
        assert_eq!(g.rank_report().unwrap_err(), Error::NonSymmetricMatrix);
    }

    #[test]
    fn dual_a_determinants() {
        assert_eq!(*GramMatrix::dual_a(1).entry(0, 0), rational(1, 2));
        let a2 = GramMatrix::dual_a(2);
        assert_eq!(*a2.entry(0, 0), rational(2, 3));
        assert_eq!(*a2.entry(0, 1), rational(-1, 3));
        for m in 1..=12usize {
            let det = GramMatrix::dual_a(m).det();
            assert_eq!(det, rational(1, m as i64 + 1), "m = {m}");
        }
    }

    #[test]
    fn scaled_dual_a_identification() {
        // 2,3: quotient Gram = 2 * A_2*; 3,4: two blocks of 3 * A_1*;
        // 2,5: scale 4.
        for (p, d) in [(2u64, 3u64), (3, 4), (2, 5), (5, 6), (2, 9), (3, 10), (7, 8)] {
            let g = GramMatrix::closed_form(p, d).unwrap();
            assert!(g.matches_scaled_dual_a(p).unwrap(), "({p},{d})");
        }
        // A wrong scale must fail.
        let mut g = GramMatrix::closed_form(2, 3).unwrap();
        g.entries[4] = rational(5, 3);
        assert!(!g.matches_scaled_dual_a(2).unwrap());
    }

    #[test]
    fn ranks_match_the_lattice_claims() {
        for (p, d) in [(2u64, 3u64), (2, 5), (3, 4), (5, 6), (7, 8)] {
            let g = GramMatrix::closed_form(p, d).unwrap();
            let rep = g.rank_report().unwrap();
            let expected = if p == 2 { d - 1 } else { d - 2 } as usize;
            assert_eq!(rep.rank, expected, "({p},{d})");
            assert_eq!(rep.rank + rep.kernel.len(), d as usize);
        }
    }

    #[test]
    fn torsion_is_detected_by_the_doubling_map() {
        let fam = ExplicitFamily::build(2, 1).unwrap();
        match height_sequence(&fam.curve, &fam.q_tors, 4).unwrap() {
            DoublingEstimate::Torsion { iter } => assert_eq!(iter, 2), // 4Q = infinity
            other => panic!("expected torsion, got {other:?}"),
        }
        assert!(matches!(
            height_sequence(&fam.curve, &CurvePoint::Infinity, 4).unwrap(),
            DoublingEstimate::Torsion { iter: 0 }
        ));
    }

    #[test]
    fn doubling_estimates_converge_to_the_diagonal() {
        let fam = ExplicitFamily::build(2, 1).unwrap();
        let seq = match height_sequence(&fam.curve, &fam.points[0], 4).unwrap() {
            DoublingEstimate::Converging(seq) => seq,
            other => panic!("unexpected {other:?}"),
        };
        assert_eq!(seq.len(), 5);
        assert_eq!(seq[0], BigRational::from(BigInt::from(4)));
        let diag = rational(4, 3);
        let last = seq.last().unwrap();
        assert!((last - &diag).abs() <= rational(1, 10), "L_4 = {last}");
    }

    #[test]
    fn pairing_oracle_is_symmetric_and_matches_off_diagonals() {
        let fam = ExplicitFamily::build(2, 1).unwrap();
        let e01 = pairing_estimate(&fam.curve, &fam.points[0], &fam.points[1], 4).unwrap();
        let e10 = pairing_estimate(&fam.curve, &fam.points[1], &fam.points[0], 4).unwrap();
        assert_eq!(e01, e10);
        let kappa = calibrate_kappa(&fam, 4).unwrap();
        let calibrated = &kappa * &e01;
        assert!((calibrated - rational(-2, 3)).abs() <= rational(1, 10));
    }

    #[test]
    fn pairing_with_own_negative_is_minus_the_diagonal() {
        // P + (-P) is the identity, whose height limit is exactly 0, so the
        // polarization returns -L(P).
        let fam = ExplicitFamily::build(2, 1).unwrap();
        let minus = fam.curve.neg(&fam.points[0]);
        let est = pairing_estimate(&fam.curve, &fam.points[0], &minus, 4).unwrap();
        let kappa = calibrate_kappa(&fam, 4).unwrap();
        assert!((&kappa * &est + rational(4, 3)).abs() <= rational(1, 10));
    }

    #[test]
    fn torsion_operand_is_an_error() {
        let fam = ExplicitFamily::build(2, 1).unwrap();
        assert!(matches!(
            pairing_estimate(&fam.curve, &fam.q_tors, &fam.points[0], 4),
            Err(Error::TorsionEncountered { .. })
        ));
    }

    #[test]
    fn torsion_sums_pair_exactly() {
        // For p = 3, d = 4 the sum P_0 + P_2 is itself torsion and the
        // pairing estimate must still produce <P_0, P_2> ~ -3/2.
        let fam = ExplicitFamily::build(3, 1).unwrap();
        let est = pairing_estimate(&fam.curve, &fam.points[0], &fam.points[2], 4).unwrap();
        let kappa = calibrate_kappa(&fam, 4).unwrap();
        assert!((&kappa * &est + rational(3, 2)).abs() <= rational(1, 10));
    }

    #[test]
    fn oracle_report_on_smallest_family() {
        let fam = ExplicitFamily::build(2, 1).unwrap();
        let kappa = calibrate_kappa(&fam, 4).unwrap();
        let report = oracle_report(&fam, 4, &kappa).unwrap();
        assert!(report.within_tolerance, "max dev {}", report.max_deviation);
        assert!(report.rounding_matches);
        assert!(report.kappa_consistent);
    }

    #[test]
    fn iteration_cap_enforced() {
        let fam = ExplicitFamily::build(2, 1).unwrap();
        assert!(matches!(
            height_sequence(&fam.curve, &fam.points[0], 7),
            Err(Error::OutOfRange(_))
        ));
    }

    #[test]
    fn rounding_ties_go_to_even() {
        assert_eq!(round_half_even(&rational(5, 2)), BigInt::from(2));
        assert_eq!(round_half_even(&rational(7, 2)), BigInt::from(4));
        assert_eq!(round_half_even(&rational(-5, 2)), BigInt::from(-2));
        assert_eq!(round_half_even(&rational(1, 3)), BigInt::from(0));
        assert_eq!(round_half_even(&rational(2, 3)), BigInt::from(1));
        assert_eq!(round_half_even(&rational(-2, 3)), BigInt::from(-1));
    }
}
