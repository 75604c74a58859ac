//! Exact rationals and elements of a single quadratic extension `Q(sqrt(d))`.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Arbitrary-precision rational, always kept in lowest terms with a
/// positive denominator.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumError {
    #[error("inverse of zero")]
    ZeroInverse,
    #[error("field mismatch: sqrt({0}) vs sqrt({1})")]
    FieldMismatch(i64, i64),
    #[error("radicand {0} must be a nonzero integer other than a square")]
    BadRadicand(i64),
    #[error("cannot parse number at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
}

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Squarefree part of a nonzero integer together with the square factor,
/// so that `n = f^2 * s`.
pub fn squarefree_decompose(n: i64) -> (i64, i64) {
    assert!(n != 0);
    let sign = n.signum();
    let mut m = n.unsigned_abs();
    let mut square = 1u64;
    let mut core = 1u64;
    let mut p = 2u64;
    while p * p <= m {
        let mut e = 0;
        while m % p == 0 {
            m /= p;
            e += 1;
        }
        square *= p.pow(e / 2);
        if e % 2 == 1 {
            core *= p;
        }
        p += 1;
    }
    core *= m;
    (square as i64, sign * core as i64)
}

/// Exact square root of a rational, if it is a perfect square.
pub fn rational_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer();
    let d = q.denom();
    let rn = n.sqrt();
    let rd = d.sqrt();
    if &(&rn * &rn) == n && &(&rd * &rd) == d {
        Some(Rational::new(rn, rd))
    } else {
        None
    }
}

/// Exact cube root of a rational, if it exists in `Q`.
pub fn rational_cbrt(q: &Rational) -> Option<Rational> {
    let n = q.numer();
    let d = q.denom();
    let rn = n.cbrt();
    let rd = d.cbrt();
    if &(&rn * &rn * &rn) == n && &(&rd * &rd * &rd) == d {
        Some(Rational::new(rn, rd))
    } else {
        None
    }
}

/// `a + b*sqrt(d)`. Pure rationals carry `b = 0` and the marker `d = 1`;
/// irrational values carry a squarefree `d` outside `{0, 1}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadraticNumber {
    a: Rational,
    b: Rational,
    d: i64,
}

impl QuadraticNumber {
    /// Builds `a + b*sqrt(d)`, normalizing `d` to its squarefree part.
    pub fn new(a: Rational, b: Rational, d: i64) -> Result<Self, NumError> {
        if d == 0 {
            return Err(NumError::BadRadicand(d));
        }
        let (f, core) = squarefree_decompose(d);
        let b = b * rat(f);
        if core == 1 {
            return Ok(Self::rational(a + b));
        }
        Ok(Self::raw(a, b, core))
    }

    fn raw(a: Rational, b: Rational, d: i64) -> Self {
        if b.is_zero() {
            Self { a, b, d: 1 }
        } else {
            Self { a, b, d }
        }
    }

    pub fn rational(a: Rational) -> Self {
        Self { a, b: Rational::zero(), d: 1 }
    }

    pub fn int(n: i64) -> Self {
        Self::rational(rat(n))
    }

    pub fn frac(n: i64, d: i64) -> Self {
        Self::rational(ratio(n, d))
    }

    /// `sqrt(d)` itself.
    pub fn sqrt_of(d: i64) -> Result<Self, NumError> {
        Self::new(Rational::zero(), Rational::one(), d)
    }

    pub fn zero() -> Self {
        Self::int(0)
    }

    pub fn one() -> Self {
        Self::int(1)
    }

    /// The imaginary unit `sqrt(-1)`.
    pub fn i() -> Self {
        Self::raw(Rational::zero(), Rational::one(), -1)
    }

    pub fn rational_part(&self) -> &Rational {
        &self.a
    }

    pub fn irrational_part(&self) -> &Rational {
        &self.b
    }

    /// The radicand, or `None` for a pure rational.
    pub fn radicand(&self) -> Option<i64> {
        (self.d != 1).then_some(self.d)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.is_rational().then_some(&self.a)
    }

    pub fn is_positive_rational(&self) -> bool {
        self.is_rational() && self.a.is_positive()
    }

    fn common_field(&self, other: &Self) -> Result<i64, NumError> {
        match (self.radicand(), other.radicand()) {
            (Some(x), Some(y)) if x != y => Err(NumError::FieldMismatch(x, y)),
            (Some(x), _) | (_, Some(x)) => Ok(x),
            (None, None) => Ok(1),
        }
    }

    /// True when both values live in a common `Q(sqrt(d))`.
    pub fn compatible(&self, other: &Self) -> bool {
        self.common_field(other).is_ok()
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, NumError> {
        let d = self.common_field(other)?;
        Ok(Self::raw(&self.a + &other.a, &self.b + &other.b, d))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, NumError> {
        let d = self.common_field(other)?;
        Ok(Self::raw(&self.a - &other.a, &self.b - &other.b, d))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, NumError> {
        let d = self.common_field(other)?;
        let a = &self.a * &other.a + &self.b * &other.b * rat(d);
        let b = &self.a * &other.b + &self.b * &other.a;
        Ok(Self::raw(a, b, d))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self, NumError> {
        self.try_mul(&other.inv()?)
    }

    pub fn conjugate(&self) -> Self {
        Self::raw(self.a.clone(), -self.b.clone(), self.d)
    }

    /// `a^2 - d*b^2`.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - &self.b * &self.b * rat(self.d)
    }

    pub fn trace(&self) -> Rational {
        &self.a + &self.a
    }

    pub fn inv(&self) -> Result<Self, NumError> {
        let n = self.norm();
        if n.is_zero() {
            return Err(NumError::ZeroInverse);
        }
        Ok(Self::raw(&self.a / &n, -&self.b / &n, self.d))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Square root inside the same field (or in `Q(sqrt(r))` when `self` is
    /// a rational `r`), if one exists.
    pub fn sqrt(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(Self::zero());
        }
        if self.is_rational() {
            if let Some(r) = rational_sqrt(&self.a) {
                return Some(Self::rational(r));
            }
            // sqrt(p/q) = sqrt(p*q)/q
            let pq = (self.a.numer() * self.a.denom()).to_i64()?;
            let den = Rational::from_integer(self.a.denom().clone());
            return Self::new(Rational::zero(), den.recip(), pq).ok();
        }
        // (x + y sqrt d)^2 = a + b sqrt d  =>  x^2 + d y^2 = a, 2xy = b
        let disc = rational_sqrt(&self.norm())?;
        let two = rat(2);
        for s in [disc.clone(), -disc] {
            let x2 = (&self.a + &s) / &two;
            if let Some(x) = rational_sqrt(&x2) {
                if x.is_zero() {
                    continue;
                }
                let y = &self.b / (&two * &x);
                let cand = Self::raw(x, y, self.d);
                if &(&cand * &cand) == self {
                    return Some(cand);
                }
            }
        }
        None
    }
}

impl fmt::Debug for QuadraticNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

fn fmt_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for QuadraticNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            return write!(f, "{}", fmt_rational(&self.a));
        }
        let c = self.a.denom().lcm(self.b.denom());
        let cq = Rational::from_integer(c.clone());
        let top_a = (&self.a * &cq).to_integer();
        let top_b = (&self.b * &cq).to_integer();
        let sign = if top_b.sign() == Sign::Minus { '-' } else { '+' };
        let mag = top_b.abs();
        let coeff = if mag.is_one() { String::new() } else { format!("{mag}*") };
        write!(f, "({top_a}{sign}{coeff}sqrt({}))", self.d)?;
        if !c.is_one() {
            write!(f, "/{c}")?;
        }
        Ok(())
    }
}

/// Byte-level cursor shared by the number grammar; the polynomial parser
/// reuses [`parse_quadratic_prefix`].
struct Cursor<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), NumError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(format!("expected '{}'", c as char)))
        }
    }

    fn err(&self, msg: String) -> NumError {
        NumError::Syntax { pos: self.pos, msg }
    }

    fn signed_int(&mut self) -> Result<BigInt, NumError> {
        let neg = if self.eat(b'-') {
            true
        } else {
            self.eat(b'+');
            false
        };
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected integer".into()));
        }
        let text = std::str::from_utf8(&self.s[start..self.pos]).expect("ascii digits");
        let v: BigInt = text.parse().expect("digits parse");
        Ok(if neg { -v } else { v })
    }

    fn keyword(&mut self, kw: &str) -> bool {
        self.skip_ws();
        if self.s[self.pos..].starts_with(kw.as_bytes()) {
            self.pos += kw.len();
            true
        } else {
            false
        }
    }
}

/// Parses the exact number grammar: `a`, `a/b`, or
/// `(a+b*sqrt(d))/c` (the `b*` factor and `/c` are optional, `-` allowed).
/// Returns the value and the number of bytes consumed.
pub fn parse_quadratic_prefix(text: &str) -> Result<(QuadraticNumber, usize), NumError> {
    let mut cur = Cursor { s: text.as_bytes(), pos: 0 };
    let v = parse_number(&mut cur)?;
    Ok((v, cur.pos))
}

fn parse_number(cur: &mut Cursor<'_>) -> Result<QuadraticNumber, NumError> {
    let value = if cur.eat(b'(') {
        let a = cur.signed_int()?;
        let neg = if cur.eat(b'-') {
            true
        } else {
            cur.expect(b'+')?;
            false
        };
        let b = if cur.keyword("sqrt") {
            BigInt::one()
        } else {
            let b = cur.signed_int()?;
            cur.expect(b'*')?;
            if !cur.keyword("sqrt") {
                return Err(cur.err("expected sqrt".into()));
            }
            b
        };
        cur.expect(b'(')?;
        let d = cur.signed_int()?;
        cur.expect(b')')?;
        cur.expect(b')')?;
        let d = d.to_i64().ok_or_else(|| cur.err("radicand too large".into()))?;
        let b = if neg { -b } else { b };
        QuadraticNumber::new(Rational::from_integer(a), Rational::from_integer(b), d)?
    } else {
        QuadraticNumber::rational(Rational::from_integer(cur.signed_int()?))
    };
    if cur.eat(b'/') {
        let c = cur.signed_int()?;
        if c.is_zero() {
            return Err(cur.err("zero denominator".into()));
        }
        return Ok(&value / &QuadraticNumber::rational(Rational::from_integer(c)));
    }
    Ok(value)
}

impl FromStr for QuadraticNumber {
    type Err = NumError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut cur = Cursor { s: s.as_bytes(), pos: 0 };
        let v = parse_number(&mut cur)?;
        if cur.peek().is_some() {
            return Err(cur.err("trailing input".into()));
        }
        Ok(v)
    }
}

// Operator impls panic on field mismatch; the `try_*` methods are the
// checked entry points.
macro_rules! binop {
    ($trait:ident, $method:ident, $try:ident) => {
        impl $trait<&QuadraticNumber> for &QuadraticNumber {
            type Output = QuadraticNumber;
            fn $method(self, rhs: &QuadraticNumber) -> QuadraticNumber {
                self.$try(rhs).expect("quadratic field mismatch")
            }
        }
        impl $trait for QuadraticNumber {
            type Output = QuadraticNumber;
            fn $method(self, rhs: QuadraticNumber) -> QuadraticNumber {
                (&self).$try(&rhs).expect("quadratic field mismatch")
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);
binop!(Div, div, try_div);

impl Neg for &QuadraticNumber {
    type Output = QuadraticNumber;
    fn neg(self) -> QuadraticNumber {
        QuadraticNumber::raw(-self.a.clone(), -self.b.clone(), self.d)
    }
}

impl Neg for QuadraticNumber {
    type Output = QuadraticNumber;
    fn neg(self) -> QuadraticNumber {
        -&self
    }
}

impl From<Rational> for QuadraticNumber {
    fn from(q: Rational) -> Self {
        Self::rational(q)
    }
}

impl From<i64> for QuadraticNumber {
    fn from(n: i64) -> Self {
        Self::int(n)
    }
}

// Serialized through the text grammar so reports stay exact.
impl serde::Serialize for QuadraticNumber {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for QuadraticNumber {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

pub fn qn_add(x: &QuadraticNumber, y: &QuadraticNumber) -> Result<QuadraticNumber, NumError> {
    x.try_add(y)
}

pub fn qn_mul(x: &QuadraticNumber, y: &QuadraticNumber) -> Result<QuadraticNumber, NumError> {
    x.try_mul(y)
}

pub fn qn_neg(x: &QuadraticNumber) -> QuadraticNumber {
    -x
}

pub fn qn_inv(x: &QuadraticNumber) -> Result<QuadraticNumber, NumError> {
    x.inv()
}

pub fn qn_norm(x: &QuadraticNumber) -> Rational {
    x.norm()
}

/// Quadratic fields only contain roots of unity of order 1, 2, 3, 4 or 6.
pub const ROOT_OF_UNITY_SEARCH_BOUND: u32 = 12;

/// Smallest `k <= 12` with `x^k = 1`.
pub fn root_of_unity_order(x: &QuadraticNumber) -> Option<u32> {
    let mut acc = x.clone();
    for k in 1..=ROOT_OF_UNITY_SEARCH_BOUND {
        if acc.is_one() {
            return Some(k);
        }
        acc = &acc * x;
    }
    None
}

/// Roots of `t^2 + p t + q = 0`, the `+` root first.
pub fn solve_monic_quadratic(p: &Rational, q: &Rational) -> (QuadraticNumber, QuadraticNumber) {
    let disc = p * p - rat(4) * q;
    let half = ratio(1, 2);
    let center = -p * &half;
    if let Some(r) = rational_sqrt(&disc) {
        let off = r * &half;
        return (
            QuadraticNumber::rational(&center + &off),
            QuadraticNumber::rational(center - off),
        );
    }
    // disc = n/m  =>  sqrt(disc) = sqrt(n*m)/m
    let nm = disc.numer() * disc.denom();
    let nm = nm.to_i64().expect("discriminant fits in i64");
    let m = Rational::from_integer(disc.denom().clone());
    let root = QuadraticNumber::new(Rational::zero(), m.recip() * &half, nm)
        .expect("nonsquare discriminant is a valid radicand");
    let c = QuadraticNumber::rational(center);
    (&c + &root, &c - &root)
}

/// Roots of `t^2 + p t + q` for field coefficients; `None` if the
/// discriminant has no square root in the field.
pub fn solve_quadratic_in_field(
    p: &QuadraticNumber,
    q: &QuadraticNumber,
) -> Result<Option<(QuadraticNumber, QuadraticNumber)>, NumError> {
    if let (Some(pr), Some(qr)) = (p.as_rational(), q.as_rational()) {
        return Ok(Some(solve_monic_quadratic(pr, qr)));
    }
    let disc = p.try_mul(p)?.try_sub(&q.try_mul(&QuadraticNumber::int(4))?)?;
    let Some(root) = disc.sqrt() else {
        return Ok(None);
    };
    let half = QuadraticNumber::frac(1, 2);
    let center = &(-p) * &half;
    let off = root.try_mul(&half)?;
    Ok(Some((center.try_add(&off)?, center.try_sub(&off)?)))
}
