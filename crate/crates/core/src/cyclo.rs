//! Exact arithmetic in cyclotomic fields Q(zeta_m).
//!
//! Elements are polynomials in `zeta_m` with rational coefficients, kept in
//! the unique reduced form modulo the m-th cyclotomic polynomial `Phi_m`.
//! Since `Phi_m` is irreducible over Q, equality is coefficient-wise equality
//! and every nonzero element is invertible. All arithmetic within one order
//! is exact; mixed orders are rejected rather than coerced.

use std::collections::HashMap;
use std::f64::consts::TAU;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Arbitrary-precision rational scalar; always reduced, denominator positive.
pub type Rational = BigRational;

/// Shorthand for a rational from an integer pair.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Rational from an integer.
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses "p/q" or "p" into a rational.
pub fn parse_rational(s: &str) -> Result<Rational, CycloError> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num
        .parse()
        .map_err(|_| CycloError::ParseError(s.to_string()))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| CycloError::ParseError(s.to_string()))?;
    if den.is_zero() {
        return Err(CycloError::ParseError(s.to_string()));
    }
    Ok(Rational::new(num, den))
}

/// Renders a rational as "p" or "p/q" with positive q.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CycloError {
    #[error("cyclotomic order mismatch: {0} vs {1}")]
    OrderMismatch(u32, u32),
    #[error("division by zero in Q(zeta_{0})")]
    DivisionByZero(u32),
    #[error("invalid cyclotomic order {0}")]
    InvalidOrder(u32),
    #[error("cannot parse rational {0:?}")]
    ParseError(String),
    #[error("coefficient vector of length {got} exceeds degree phi({order}) = {expect}")]
    BadCoeffLength { order: u32, expect: usize, got: usize },
}

/// Euler's totient.
pub fn euler_phi(m: u32) -> u32 {
    let mut n = m;
    let mut result = m;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

// Cyclotomic polynomials have integer coefficients; cache them per order.
// Monic, stored lowest degree first, length phi(m) + 1.
fn phi_cache() -> &'static Mutex<HashMap<u32, Arc<Vec<BigInt>>>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<BigInt>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The m-th cyclotomic polynomial, computed by dividing x^m - 1 by the
/// cyclotomic polynomials of the proper divisors of m.
pub fn cyclotomic_polynomial(m: u32) -> Arc<Vec<BigInt>> {
    if let Some(p) = phi_cache().lock().unwrap().get(&m) {
        return Arc::clone(p);
    }
    assert!(m >= 1, "order must be positive");
    // x^m - 1
    let mut num = vec![BigInt::zero(); m as usize + 1];
    num[0] = BigInt::from(-1);
    num[m as usize] = BigInt::one();
    for d in 1..m {
        if m % d == 0 {
            let phi_d = cyclotomic_polynomial(d);
            num = int_poly_div_exact(&num, &phi_d);
        }
    }
    let result = Arc::new(num);
    phi_cache()
        .lock()
        .unwrap()
        .insert(m, Arc::clone(&result));
    result
}

// Exact division of integer polynomials, divisor monic. Panics on nonzero
// remainder (cannot happen for cyclotomic factors).
fn int_poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dd = den.len() - 1;
    debug_assert!(den[dd].is_one());
    let mut rem = num.to_vec();
    let nd = rem.len() - 1;
    let mut quot = vec![BigInt::zero(); nd - dd + 1];
    for k in (0..=nd - dd).rev() {
        let c = rem[k + dd].clone();
        if !c.is_zero() {
            for (i, d) in den.iter().enumerate() {
                rem[k + i] -= &c * d;
            }
        }
        quot[k] = c;
    }
    debug_assert!(rem.iter().all(|c| c.is_zero()));
    quot
}

/// An exact element of Q(zeta_m): the reduced residue of a polynomial in
/// zeta_m modulo Phi_m. `coeffs` has length phi(m), lowest degree first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CycloElement {
    order: u32,
    coeffs: Vec<Rational>,
}

impl CycloElement {
    /// Builds an element from coefficients of a polynomial in zeta_m of any
    /// degree below m; reduces modulo Phi_m.
    pub fn new(order: u32, coeffs: Vec<Rational>) -> Result<Self, CycloError> {
        if order == 0 {
            return Err(CycloError::InvalidOrder(order));
        }
        if coeffs.len() > order as usize {
            return Err(CycloError::BadCoeffLength {
                order,
                expect: order as usize,
                got: coeffs.len(),
            });
        }
        Ok(Self::reduce(order, coeffs))
    }

    fn reduce(order: u32, mut poly: Vec<Rational>) -> Self {
        let phi = euler_phi(order) as usize;
        let modulus = cyclotomic_polynomial(order);
        // Divide by the monic modulus; keep the remainder.
        while poly.len() > phi {
            let lead = poly.pop().unwrap();
            if lead.is_zero() {
                continue;
            }
            let shift = poly.len() - phi;
            for (i, c) in modulus.iter().take(phi).enumerate() {
                poly[shift + i] -= &lead * c;
            }
        }
        poly.resize(phi, Rational::zero());
        CycloElement { order, coeffs: poly }
    }

    pub fn zero(order: u32) -> Self {
        CycloElement {
            order,
            coeffs: vec![Rational::zero(); euler_phi(order) as usize],
        }
    }

    pub fn one(order: u32) -> Self {
        Self::from_rational(order, Rational::one())
    }

    pub fn from_rational(order: u32, r: Rational) -> Self {
        let mut e = Self::zero(order);
        if euler_phi(order) == 0 {
            unreachable!()
        }
        e.coeffs[0] = r;
        // phi(1) = 1, and Phi_1 = x - 1 means zeta_1 = 1; constant term works
        // for every order.
        e
    }

    pub fn from_int(order: u32, n: i64) -> Self {
        Self::from_rational(order, rat_int(n))
    }

    /// zeta_m^k.
    pub fn zeta_pow(order: u32, k: u32) -> Self {
        let k = (k % order) as usize;
        let mut poly = vec![Rational::zero(); k + 1];
        poly[k] = Rational::one();
        Self::reduce(order, poly)
    }

    /// zeta_m.
    pub fn zeta(order: u32) -> Self {
        Self::zeta_pow(order, 1)
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// True when the element lies in the rational subfield.
    pub fn is_rational(&self) -> bool {
        self.coeffs.iter().skip(1).all(|c| c.is_zero())
    }

    /// The rational value, when `is_rational`.
    pub fn as_rational(&self) -> Option<&Rational> {
        if self.is_rational() {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    fn check_order(&self, other: &Self) -> Result<(), CycloError> {
        if self.order != other.order {
            Err(CycloError::OrderMismatch(self.order, other.order))
        } else {
            Ok(())
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, CycloError> {
        self.check_order(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(CycloElement {
            order: self.order,
            coeffs,
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, CycloError> {
        self.check_order(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Ok(CycloElement {
            order: self.order,
            coeffs,
        })
    }

    pub fn neg(&self) -> Self {
        CycloElement {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, CycloError> {
        self.check_order(other)?;
        let n = self.coeffs.len();
        if n == 0 {
            return Ok(self.clone());
        }
        let mut prod = vec![Rational::zero(); 2 * n - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        Ok(Self::reduce(self.order, prod))
    }

    pub fn scale(&self, r: &Rational) -> Self {
        CycloElement {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    /// Multiplicative inverse via the extended Euclidean algorithm on the
    /// representing polynomial and Phi_m.
    pub fn inv(&self) -> Result<Self, CycloError> {
        if self.is_zero() {
            return Err(CycloError::DivisionByZero(self.order));
        }
        if let Some(r) = self.as_rational() {
            return Ok(Self::from_rational(self.order, r.recip()));
        }
        let modulus: Vec<Rational> = cyclotomic_polynomial(self.order)
            .iter()
            .map(|c| Rational::from_integer(c.clone()))
            .collect();
        // Invariants: r0 = s0 * a (mod Phi), r1 = s1 * a (mod Phi).
        let mut r0 = modulus;
        let mut r1 = trim(self.coeffs.clone());
        let mut s0 = vec![];
        let mut s1 = vec![Rational::one()];
        while !r1.is_empty() {
            let (q, rem) = rat_poly_divmod(&r0, &r1);
            let s2 = rat_poly_sub(&s0, &rat_poly_mul(&q, &s1));
            r0 = r1;
            r1 = rem;
            s0 = s1;
            s1 = s2;
        }
        // r0 is a nonzero constant (Phi_m is irreducible, a is nonzero).
        debug_assert_eq!(r0.len(), 1);
        let scale = r0[0].recip();
        let coeffs = s0.iter().map(|c| c * &scale).collect();
        Ok(Self::reduce(self.order, coeffs))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self, CycloError> {
        self.try_mul(&other.inv()?)
    }

    /// Complex conjugation: zeta_m -> zeta_m^(m-1). An involutive field
    /// automorphism.
    pub fn conj(&self) -> Self {
        let m = self.order as usize;
        let mut poly = vec![Rational::zero(); m];
        for (k, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                poly[k * (m - 1) % m] += c;
            }
        }
        Self::reduce(self.order, poly)
    }

    /// Hermitian square a * conj(a); fixed by conjugation, hence real.
    pub fn norm_sqr(&self) -> Self {
        self.try_mul(&self.conj()).expect("same order")
    }

    /// Numeric embedding at zeta_m = exp(2*pi*i/m), with an absolute error
    /// bound propagated from coefficient magnitudes.
    pub fn embed(&self) -> ComplexApprox {
        let m = self.order as f64;
        let mut re = 0.0;
        let mut im = 0.0;
        let mut total_abs = 0.0;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let v = c.to_f64().expect("rational to f64");
            let theta = TAU * (k as f64) / m;
            re += v * theta.cos();
            im += v * theta.sin();
            total_abs += v.abs();
        }
        // Per-term rounding: coefficient conversion, angle, sin/cos, and the
        // accumulated sums. A uniform bound in terms of the coefficient mass
        // covers all of it with room to spare.
        let n = self.coeffs.len() as f64;
        let err = total_abs * (n + 8.0) * 4.0 * f64::EPSILON;
        ComplexApprox { re, im, err }
    }

    /// Textual form: coefficient strings "p/q", lowest degree first,
    /// length phi(m).
    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(format_rational).collect()
    }

    /// Parses the textual form; shorter vectors are zero-padded.
    pub fn from_strings(order: u32, strings: &[String]) -> Result<Self, CycloError> {
        let phi = euler_phi(order) as usize;
        if strings.len() > phi {
            return Err(CycloError::BadCoeffLength {
                order,
                expect: phi,
                got: strings.len(),
            });
        }
        let mut coeffs = Vec::with_capacity(phi);
        for s in strings {
            coeffs.push(parse_rational(s)?);
        }
        coeffs.resize(phi, Rational::zero());
        Ok(CycloElement {
            order,
            coeffs,
        })
    }
}

impl fmt::Display for CycloElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if k == 0 {
                write!(f, "{}", format_rational(c))?;
            } else if c.is_one() {
                write!(f, "z^{k}")?;
            } else {
                write!(f, "{}*z^{k}", format_rational(c))?;
            }
        }
        Ok(())
    }
}

// Small rational-polynomial helpers for the extended Euclidean algorithm.
// Polynomials are coefficient vectors, lowest degree first, no trailing zeros.

fn trim(mut p: Vec<Rational>) -> Vec<Rational> {
    while p.last().map_or(false, |c| c.is_zero()) {
        p.pop();
    }
    p
}

fn rat_poly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = a.len().max(b.len());
    let zero = Rational::zero();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        out.push(a.get(i).unwrap_or(&zero) - b.get(i).unwrap_or(&zero));
    }
    trim(out)
}

fn rat_poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn rat_poly_divmod(num: &[Rational], den: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let lead = &den[dd];
    if rem.len() <= dd {
        return (vec![], trim(rem));
    }
    let mut quot = vec![Rational::zero(); rem.len() - dd];
    for k in (0..quot.len()).rev() {
        let c = &rem[k + dd] / lead;
        if !c.is_zero() {
            for (i, d) in den.iter().enumerate() {
                let t = &c * d;
                rem[k + i] -= t;
            }
        }
        quot[k] = c;
    }
    (trim(quot), trim(rem))
}

/// Double-precision approximation of a field element with an explicit bound
/// on the absolute error. Exact code paths never consume this; it exists for
/// numeric cross-checks and the Hopf-side predicates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexApprox {
    pub re: f64,
    pub im: f64,
    pub err: f64,
}

impl ComplexApprox {
    pub fn abs(&self) -> f64 {
        self.re.hypot(self.im)
    }
}
