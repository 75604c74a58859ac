use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use super::poly::Poly2;
use crate::exactnum::{NumError, QuadraticNumber as QN};

/// Quotient of two bivariate polynomials in lowest terms, denominator monic.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFn2 {
    num: Poly2,
    den: Poly2,
}

impl RationalFn2 {
    /// Panics if `den` is zero.
    pub fn new(num: Poly2, den: Poly2) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Self { num, den: Poly2::one() };
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = if g.is_constant() {
            (num, den)
        } else {
            (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
        };
        let (_, lc) = den.leading().expect("nonzero");
        let inv = lc.inv().expect("nonzero");
        num = num.scale(&inv);
        den = den.scale(&inv);
        Self { num, den }
    }

    pub fn from_poly(p: Poly2) -> Self {
        Self { num: p, den: Poly2::one() }
    }

    pub fn constant(c: QN) -> Self {
        Self::from_poly(Poly2::constant(c))
    }

    pub fn x() -> Self {
        Self::from_poly(Poly2::x())
    }

    pub fn y() -> Self {
        Self::from_poly(Poly2::y())
    }

    pub fn zero() -> Self {
        Self::from_poly(Poly2::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(Poly2::one())
    }

    pub fn num(&self) -> &Poly2 {
        &self.num
    }

    pub fn den(&self) -> &Poly2 {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn as_poly(&self) -> Option<&Poly2> {
        self.den.is_constant().then_some(&self.num)
    }

    pub fn field(&self) -> Result<Option<i64>, NumError> {
        let a = self.num.field()?;
        let b = self.den.field()?;
        match (a, b) {
            (Some(x), Some(y)) if x != y => Err(NumError::FieldMismatch(x, y)),
            (Some(x), _) | (_, Some(x)) => Ok(Some(x)),
            _ => Ok(None),
        }
    }

    pub fn recip(&self) -> Self {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn pow(&self, e: u32) -> Self {
        Self { num: self.num.pow(e), den: self.den.pow(e) }
    }

    pub fn partial_x(&self) -> Self {
        let n = &(&self.num.partial_x() * &self.den) - &(&self.num * &self.den.partial_x());
        Self::new(n, &self.den * &self.den)
    }

    pub fn partial_y(&self) -> Self {
        let n = &(&self.num.partial_y() * &self.den) - &(&self.num * &self.den.partial_y());
        Self::new(n, &self.den * &self.den)
    }

    /// Value at a point, `None` where the denominator vanishes.
    pub fn eval(&self, x: &QN, y: &QN) -> Result<Option<QN>, NumError> {
        let d = self.den.eval(x, y)?;
        if d.is_zero() {
            return Ok(None);
        }
        Ok(Some(self.num.eval(x, y)?.try_div(&d)?))
    }

    /// `self(fx, fy)`.
    pub fn compose(&self, fx: &RationalFn2, fy: &RationalFn2) -> Self {
        let n = compose_poly(&self.num, fx, fy);
        let d = compose_poly(&self.den, fx, fy);
        &n / &d
    }
}

/// `p(fx, fy)` as a rational function.
pub fn compose_poly(p: &Poly2, fx: &RationalFn2, fy: &RationalFn2) -> RationalFn2 {
    if p.is_zero() {
        return RationalFn2::zero();
    }
    let dx = p.degree_x();
    let dy = p.degree_y();
    let mut xn = vec![Poly2::one()];
    let mut xd = vec![Poly2::one()];
    let mut yn = vec![Poly2::one()];
    let mut yd = vec![Poly2::one()];
    for k in 1..=dx as usize {
        xn.push(&xn[k - 1] * &fx.num);
        xd.push(&xd[k - 1] * &fx.den);
    }
    for k in 1..=dy as usize {
        yn.push(&yn[k - 1] * &fy.num);
        yd.push(&yd[k - 1] * &fy.den);
    }
    let mut num = Poly2::zero();
    for (&(i, j), c) in p.terms() {
        let (i, j) = (i as usize, j as usize);
        let t = &(&xn[i] * &xd[dx as usize - i]) * &(&yn[j] * &yd[dy as usize - j]);
        num = &num + &t.scale(c);
    }
    RationalFn2::new(num, &xd[dx as usize] * &yd[dy as usize])
}

impl Add for &RationalFn2 {
    type Output = RationalFn2;
    fn add(self, rhs: &RationalFn2) -> RationalFn2 {
        if self.den == rhs.den {
            return RationalFn2::new(&self.num + &rhs.num, self.den.clone());
        }
        RationalFn2::new(&(&self.num * &rhs.den) + &(&rhs.num * &self.den), &self.den * &rhs.den)
    }
}

impl Sub for &RationalFn2 {
    type Output = RationalFn2;
    fn sub(self, rhs: &RationalFn2) -> RationalFn2 {
        self + &(-rhs)
    }
}

impl Mul for &RationalFn2 {
    type Output = RationalFn2;
    fn mul(self, rhs: &RationalFn2) -> RationalFn2 {
        RationalFn2::new(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Div for &RationalFn2 {
    type Output = RationalFn2;
    fn div(self, rhs: &RationalFn2) -> RationalFn2 {
        assert!(!rhs.is_zero(), "division by zero rational function");
        RationalFn2::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }
}

impl Neg for &RationalFn2 {
    type Output = RationalFn2;
    fn neg(self) -> RationalFn2 {
        RationalFn2 { num: -&self.num, den: self.den.clone() }
    }
}

impl fmt::Display for RationalFn2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() && self.den.constant_term().is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RationalFn2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduces_to_lowest_terms() {
        let x = Poly2::x();
        let y = Poly2::y();
        let r = RationalFn2::new(&x * &y, (&x * &x).scale(&QN::int(2)));
        assert_eq!(r.num(), &y.scale(&QN::frac(1, 2)));
        assert_eq!(r.den(), &x);
    }

    #[test]
    fn composition_of_inversions() {
        let inv_x = RationalFn2::x().recip();
        let back = inv_x.compose(&inv_x, &RationalFn2::y());
        assert_eq!(back, RationalFn2::x());
    }

    #[test]
    fn quotient_rule() {
        let r = RationalFn2::y().recip();
        let d = r.partial_y();
        assert_eq!(d, &RationalFn2::constant(QN::int(-1)) / &RationalFn2::y().pow(2));
    }
}
