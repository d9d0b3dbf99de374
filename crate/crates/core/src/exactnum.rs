//! Exact scalars: rationals, Laurent polynomials in `u = 1/(2πi)`, and
//! polynomial-exponential functions of a real variable `τ`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};

/// Arbitrary-precision rational, always reduced with positive denominator.
pub type Rational = num_rational::BigRational;

/// Builds `num / den` as an exact rational.
pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// `Σ c_p u^p` with `u = 1/(2πi)`. Zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LaurentU {
    terms: BTreeMap<i32, Rational>,
}

impl LaurentU {
    pub fn constant(c: Rational) -> Self {
        Self::monomial(c, 0)
    }

    pub fn monomial(c: Rational, power: i32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(power, c);
        }
        Self { terms }
    }

    /// The symbol `u` itself.
    pub fn u() -> Self {
        Self::monomial(Rational::one(), 1)
    }

    pub fn from_integer(n: i64) -> Self {
        Self::constant(Rational::from_integer(BigInt::from(n)))
    }

    /// Nonzero terms in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i32, &Rational)> {
        self.terms.iter().map(|(p, c)| (*p, c))
    }

    pub fn coefficient(&self, power: i32) -> Rational {
        self.terms.get(&power).cloned().unwrap_or_else(Rational::zero)
    }

    /// `Some((c, p))` when the value is a single term `c·u^p`.
    pub fn as_monomial(&self) -> Option<(&Rational, i32)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(p, c)| (c, *p))
        } else {
            None
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(p, x)| (*p, x * c)).collect(),
        }
    }

    /// Multiplies by `u^k`.
    pub fn shift(&self, k: i32) -> Self {
        Self {
            terms: self.terms.iter().map(|(p, x)| (p + k, x.clone())).collect(),
        }
    }

    fn add_term(&mut self, power: i32, c: &Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(power).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&power);
        }
    }

    /// Numeric value with `u = −i/(2π)`.
    pub fn to_complex(&self) -> Complex64 {
        let u = Complex64::new(0.0, -1.0 / (2.0 * std::f64::consts::PI));
        self.terms
            .iter()
            .map(|(p, c)| u.powi(*p) * rational_to_f64(c))
            .sum()
    }
}

fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Ratio of huge integers: fall back to scaled division.
        let shift = r.numer().bits().max(r.denom().bits()) as i64 - 60;
        let n = (r.numer() >> shift.max(0)).to_f64().unwrap_or(f64::NAN);
        let d = (r.denom() >> shift.max(0)).to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Free-function form of [`LaurentU::to_complex`].
pub fn laurent_to_complex(x: &LaurentU) -> Complex64 {
    x.to_complex()
}

impl Zero for LaurentU {
    fn zero() -> Self {
        Self::default()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for LaurentU {
    fn one() -> Self {
        Self::from_integer(1)
    }
}

impl<'a> Add<&'a LaurentU> for &LaurentU {
    type Output = LaurentU;
    fn add(self, rhs: &'a LaurentU) -> LaurentU {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for LaurentU {
    type Output = LaurentU;
    fn add(mut self, rhs: LaurentU) -> LaurentU {
        self += &rhs;
        self
    }
}

impl<'a> AddAssign<&'a LaurentU> for LaurentU {
    fn add_assign(&mut self, rhs: &'a LaurentU) {
        for (p, c) in &rhs.terms {
            self.add_term(*p, c);
        }
    }
}

impl Neg for LaurentU {
    type Output = LaurentU;
    fn neg(self) -> LaurentU {
        Self {
            terms: self.terms.into_iter().map(|(p, c)| (p, -c)).collect(),
        }
    }
}

impl Neg for &LaurentU {
    type Output = LaurentU;
    fn neg(self) -> LaurentU {
        -self.clone()
    }
}

impl<'a> Sub<&'a LaurentU> for &LaurentU {
    type Output = LaurentU;
    fn sub(self, rhs: &'a LaurentU) -> LaurentU {
        self + &(-rhs)
    }
}

impl Sub for LaurentU {
    type Output = LaurentU;
    fn sub(self, rhs: LaurentU) -> LaurentU {
        &self - &rhs
    }
}

impl<'a> Mul<&'a LaurentU> for &LaurentU {
    type Output = LaurentU;
    fn mul(self, rhs: &'a LaurentU) -> LaurentU {
        let mut out = LaurentU::zero();
        for (p, a) in &self.terms {
            for (q, b) in &rhs.terms {
                out.add_term(p + q, &(a * b));
            }
        }
        out
    }
}

impl Mul for LaurentU {
    type Output = LaurentU;
    fn mul(self, rhs: LaurentU) -> LaurentU {
        &self * &rhs
    }
}

impl fmt::Display for LaurentU {
    /// Terms printed as `r * u^p`, joined by ` + `; zero prints as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(p, c)| format!("{c} * u^{p}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// `Σ_q p_q(τ)·e^{2πiqτ}`; each `p_q` is a coefficient list in ascending powers of `τ`.
///
/// Invariant: no frequency maps to an identically zero polynomial, and no
/// polynomial has a trailing zero coefficient.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PolyExp {
    terms: BTreeMap<i64, Vec<LaurentU>>,
}

impl PolyExp {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::term(0, vec![LaurentU::one()])
    }

    /// `p(τ)·e^{2πiqτ}` with `poly[i]` the coefficient of `τ^i`.
    pub fn term(q: i64, poly: Vec<LaurentU>) -> Self {
        let mut out = Self::zero();
        out.add_poly(q, &poly);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &[LaurentU])> {
        self.terms.iter().map(|(q, p)| (*q, p.as_slice()))
    }

    fn add_poly(&mut self, q: i64, poly: &[LaurentU]) {
        let entry = self.terms.entry(q).or_default();
        if entry.len() < poly.len() {
            entry.resize(poly.len(), LaurentU::zero());
        }
        for (slot, c) in entry.iter_mut().zip(poly) {
            *slot += c;
        }
        while entry.last().is_some_and(Zero::is_zero) {
            entry.pop();
        }
        if entry.is_empty() {
            self.terms.remove(&q);
        }
    }

    pub fn add(&self, other: &PolyExp) -> PolyExp {
        let mut out = self.clone();
        for (q, p) in &other.terms {
            out.add_poly(*q, p);
        }
        out
    }

    pub fn scale(&self, c: &LaurentU) -> PolyExp {
        let mut out = PolyExp::zero();
        for (q, p) in &self.terms {
            let scaled: Vec<LaurentU> = p.iter().map(|x| x * c).collect();
            out.add_poly(*q, &scaled);
        }
        out
    }

    /// Multiplies by `e^{2πikτ}`.
    pub fn shift_frequency(&self, k: i64) -> PolyExp {
        PolyExp {
            terms: self.terms.iter().map(|(q, p)| (q + k, p.clone())).collect(),
        }
    }

    /// `τ ↦ ∫_0^τ f`.
    pub fn integrate(&self) -> PolyExp {
        let mut out = PolyExp::zero();
        for (&q, poly) in &self.terms {
            if q == 0 {
                let mut anti = vec![LaurentU::zero()];
                for (p, c) in poly.iter().enumerate() {
                    anti.push(c.scale(&rational(1, p as i64 + 1)));
                }
                out.add_poly(0, &anti);
                continue;
            }
            // ∫_0^τ t^p e^{ct} dt with 1/c = u/q:
            //   e^{cτ} Σ_r (−1)^r p!/(p−r)! τ^{p−r} c^{−r−1}  −  (−1)^p p! c^{−p−1}
            let mut osc = vec![LaurentU::zero(); poly.len()];
            let mut constant = LaurentU::zero();
            for (p, c) in poly.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let mut falling = BigInt::one();
                for r in 0..=p {
                    if r > 0 {
                        falling *= BigInt::from((p - r + 1) as i64);
                    }
                    let sign = if r % 2 == 0 { 1 } else { -1 };
                    let coef = Rational::new(
                        BigInt::from(sign) * &falling,
                        BigInt::from(q).pow(r as u32 + 1),
                    );
                    let contrib = c.shift(r as i32 + 1).scale(&coef);
                    osc[p - r] += &contrib;
                    if r == p {
                        constant += &(-contrib);
                    }
                }
            }
            out.add_poly(q, &osc);
            out.add_poly(0, &[constant]);
        }
        out
    }

    /// Formal `d/dτ`, using `d/dτ e^{2πiqτ} = q·u⁻¹·e^{2πiqτ}`.
    pub fn differentiate(&self) -> PolyExp {
        let mut out = PolyExp::zero();
        for (&q, poly) in &self.terms {
            let mut d: Vec<LaurentU> = (1..poly.len())
                .map(|p| poly[p].scale(&rational(p as i64, 1)))
                .collect();
            if q != 0 {
                d.resize(poly.len(), LaurentU::zero());
                let qq = rational(q, 1);
                for (slot, c) in d.iter_mut().zip(poly) {
                    *slot += &c.shift(-1).scale(&qq);
                }
            }
            out.add_poly(q, &d);
        }
        out
    }

    /// Value at `τ = 1`, where every `e^{2πiq}` equals 1.
    pub fn eval_at_one(&self) -> LaurentU {
        let mut acc = LaurentU::zero();
        for poly in self.terms.values() {
            for c in poly {
                acc += c;
            }
        }
        acc
    }

    /// Numeric value at real `τ`.
    pub fn eval(&self, tau: f64) -> Complex64 {
        let mut acc = Complex64::zero();
        for (&q, poly) in &self.terms {
            let phase = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * q as f64 * tau);
            let mut p = Complex64::zero();
            for c in poly.iter().rev() {
                p = p * tau + c.to_complex();
            }
            acc += p * phase;
        }
        acc
    }
}

/// Free-function form of [`PolyExp::integrate`].
pub fn polyexp_integrate(f: &PolyExp) -> PolyExp {
    f.integrate()
}

/// Free-function form of [`PolyExp::eval_at_one`].
pub fn polyexp_eval_at_one(f: &PolyExp) -> LaurentU {
    f.eval_at_one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn approx(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() <= 1e-14 * (1.0 + b.norm())
    }

    #[test]
    fn u_is_minus_i_over_two_pi() {
        assert!(approx(LaurentU::u().to_complex(), Complex64::new(0.0, -1.0 / (2.0 * PI))));
        assert_eq!(LaurentU::zero().to_complex(), Complex64::zero());
        let x = LaurentU::monomial(rational(-2, 1), 1);
        assert!(approx(x.to_complex(), Complex64::new(0.0, 1.0 / PI)));
    }

    #[test]
    fn integrate_examples() {
        // e^{2πiτ} ↦ u(e^{2πiτ} − 1)
        let f = PolyExp::term(1, vec![LaurentU::one()]);
        let expected = PolyExp::term(1, vec![LaurentU::u()]).add(&PolyExp::term(0, vec![-LaurentU::u()]));
        assert_eq!(f.integrate(), expected);
        assert!(f.integrate().eval_at_one().is_zero());

        // 1 ↦ τ
        assert_eq!(
            PolyExp::one().integrate(),
            PolyExp::term(0, vec![LaurentU::zero(), LaurentU::one()])
        );

        // τ ↦ τ²/2
        let tau = PolyExp::term(0, vec![LaurentU::zero(), LaurentU::one()]);
        let half = LaurentU::constant(rational(1, 2));
        assert_eq!(
            tau.integrate(),
            PolyExp::term(0, vec![LaurentU::zero(), LaurentU::zero(), half.clone()])
        );
        assert_eq!(tau.integrate().eval_at_one(), half);
    }

    #[test]
    fn eval_at_one_mixed() {
        let f = PolyExp::term(0, vec![LaurentU::zero(), LaurentU::one()])
            .add(&PolyExp::term(1, vec![LaurentU::u()]));
        assert_eq!(f.eval_at_one(), LaurentU::one() + LaurentU::u());
    }

    #[test]
    fn integral_matches_numeric_derivative() {
        let f = PolyExp::term(2, vec![LaurentU::one(), LaurentU::from_integer(3)])
            .add(&PolyExp::term(-1, vec![LaurentU::zero(), LaurentU::zero(), LaurentU::u()]));
        let big_f = f.integrate();
        assert!(big_f.eval(0.0).norm() < 1e-14);
        let (t, h) = (0.37, 1e-5);
        let slope = (big_f.eval(t + h) - big_f.eval(t - h)) / (2.0 * h);
        assert!((slope - f.eval(t)).norm() < 1e-7);
    }

    #[test]
    fn display_format() {
        assert_eq!(LaurentU::zero().to_string(), "0");
        assert_eq!(LaurentU::monomial(rational(2, 1), 1).to_string(), "2 * u^1");
        assert_eq!(LaurentU::monomial(rational(-1, 3), 2).to_string(), "-1/3 * u^2");
    }
}
