use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::exactnum::{NumError, QuadraticNumber as QN};

/// Exponent pair `(i, j)` of the monomial `x^i y^j`. The derived ordering
/// is lexicographic with `x > y`, which is the division order.
pub type Monomial = (u32, u32);

/// Sparse bivariate polynomial over one quadratic field.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly2 {
    terms: BTreeMap<Monomial, QN>,
}

impl Poly2 {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(QN::one())
    }

    pub fn constant(c: QN) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn monomial(c: QN, i: u32, j: u32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((i, j), c);
        }
        Self { terms }
    }

    pub fn x() -> Self {
        Self::monomial(QN::one(), 1, 0)
    }

    pub fn y() -> Self {
        Self::monomial(QN::one(), 0, 1)
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, QN)>>(it: I) -> Self {
        let mut p = Self::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: QN) {
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.get(&m) {
            Some(old) => old + &c,
            None => c,
        };
        if sum.is_zero() {
            self.terms.remove(&m);
        } else {
            self.terms.insert(m, sum);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &QN)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, i: u32, j: u32) -> QN {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(QN::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|&(i, j)| i == 0 && j == 0)
    }

    pub fn constant_term(&self) -> QN {
        self.coeff(0, 0)
    }

    pub fn degree_x(&self) -> u32 {
        self.terms.keys().map(|m| m.0).max().unwrap_or(0)
    }

    pub fn degree_y(&self) -> u32 {
        self.terms.keys().map(|m| m.1).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.0 + m.1).max().unwrap_or(0)
    }

    /// Leading term in lex order.
    pub fn leading(&self) -> Option<(Monomial, &QN)> {
        self.terms.iter().next_back().map(|(m, c)| (*m, c))
    }

    /// Radicand shared by the coefficients, if any is irrational.
    pub fn field(&self) -> Result<Option<i64>, NumError> {
        let mut field = None;
        for c in self.terms.values() {
            if let Some(d) = c.radicand() {
                match field {
                    Some(f) if f != d => return Err(NumError::FieldMismatch(f, d)),
                    _ => field = Some(d),
                }
            }
        }
        Ok(field)
    }

    pub fn check_compatible(&self, other: &Self) -> Result<(), NumError> {
        match (self.field()?, other.field()?) {
            (Some(a), Some(b)) if a != b => Err(NumError::FieldMismatch(a, b)),
            _ => Ok(()),
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, NumError> {
        self.check_compatible(other)?;
        Ok(self + other)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, NumError> {
        self.check_compatible(other)?;
        Ok(self * other)
    }

    pub fn scale(&self, c: &QN) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(m, v)| (*m, v * c)).collect() }
    }

    pub fn shift(&self, di: u32, dj: u32) -> Self {
        Self { terms: self.terms.iter().map(|(&(i, j), v)| ((i + di, j + dj), v.clone())).collect() }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn eval(&self, x: &QN, y: &QN) -> Result<QN, NumError> {
        let mut acc = QN::zero();
        for (&(i, j), c) in &self.terms {
            acc = acc.try_add(&c.try_mul(&x.pow(i))?.try_mul(&y.pow(j))?)?;
        }
        Ok(acc)
    }

    pub fn partial_x(&self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|(m, _)| m.0 > 0)
                .map(|(&(i, j), c)| ((i - 1, j), c * &QN::int(i as i64))),
        )
    }

    pub fn partial_y(&self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|(m, _)| m.1 > 0)
                .map(|(&(i, j), c)| ((i, j - 1), c * &QN::int(j as i64))),
        )
    }

    pub fn swap_xy(&self) -> Self {
        Self { terms: self.terms.iter().map(|(&(i, j), c)| ((j, i), c.clone())).collect() }
    }

    /// Substitutes a polynomial for each variable.
    pub fn compose(&self, px: &Poly2, py: &Poly2) -> Self {
        let mut out = Self::zero();
        let mut xp: Vec<Poly2> = vec![Self::one()];
        let mut yp: Vec<Poly2> = vec![Self::one()];
        for (&(i, j), c) in &self.terms {
            while xp.len() <= i as usize {
                let next = xp.last().unwrap() * px;
                xp.push(next);
            }
            while yp.len() <= j as usize {
                let next = yp.last().unwrap() * py;
                yp.push(next);
            }
            out = &out + &(&xp[i as usize] * &yp[j as usize]).scale(c);
        }
        out
    }

    /// Largest `k` with `x^k` dividing `self`.
    pub fn x_adic_order(&self) -> u32 {
        self.terms.keys().map(|m| m.0).min().unwrap_or(0)
    }

    pub fn y_adic_order(&self) -> u32 {
        self.terms.keys().map(|m| m.1).min().unwrap_or(0)
    }

    /// Divides out `x^a y^b`; the caller guarantees divisibility.
    pub fn unshift(&self, a: u32, b: u32) -> Self {
        Self { terms: self.terms.iter().map(|(&(i, j), c)| ((i - a, j - b), c.clone())).collect() }
    }

    /// Scales so that the lex-leading coefficient is 1.
    pub fn monic(&self) -> Self {
        match self.leading() {
            Some((_, c)) => {
                let inv = c.inv().expect("leading coefficient is nonzero");
                self.scale(&inv)
            }
            None => Self::zero(),
        }
    }

    /// Multivariate division with remainder by a single divisor, lex order.
    pub fn div_rem(&self, divisor: &Poly2) -> (Poly2, Poly2) {
        let (lm, lc) = divisor.leading().expect("division by zero polynomial");
        let lc_inv = lc.inv().expect("nonzero");
        let mut quotient = Poly2::zero();
        let mut remainder = Poly2::zero();
        let mut p = self.clone();
        while let Some(((i, j), c)) = p.leading().map(|(m, c)| (m, c.clone())) {
            if i >= lm.0 && j >= lm.1 {
                let t = Poly2::monomial(&c * &lc_inv, i - lm.0, j - lm.1);
                p = &p - &(&t * divisor);
                quotient = &quotient + &t;
            } else {
                remainder.add_term((i, j), c.clone());
                p.terms.remove(&(i, j));
            }
        }
        (quotient, remainder)
    }

    pub fn divides(&self, other: &Poly2) -> bool {
        other.div_rem(self).1.is_zero()
    }

    pub fn div_exact(&self, divisor: &Poly2) -> Option<Poly2> {
        let (q, r) = self.div_rem(divisor);
        r.is_zero().then_some(q)
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Poly2) -> Poly2 {
        if self.is_zero() {
            return other.monic();
        }
        if other.is_zero() {
            return self.monic();
        }
        if coprime(self, other) {
            return Poly2::one();
        }
        // split off the contents in x and in y before running the sequence
        let (cx, f, g) = split_content(self, other);
        let (cy, f, g) = split_content(&f.swap_xy(), &g.swap_xy());
        let (f, g) = (f.swap_xy(), g.swap_xy());
        let rest = if coprime(&f, &g) {
            Poly2::one()
        } else {
            interpolated_gcd(&f, &g).unwrap_or_else(|| primitive_prs(&f, &g))
        };
        let contents = &Poly2::from_univariate_x(&cx) * &Poly2::from_univariate_x(&cy).swap_xy();
        (&contents * &rest).monic()
    }

    /// Gcd of all coefficients viewed as polynomials in `x`.
    pub fn content_in_x(&self) -> UniPoly {
        ycontent(&to_ypoly(self))
    }

    /// Returns `Some(u)` if the polynomial does not involve `y`.
    pub fn as_univariate_x(&self) -> Option<UniPoly> {
        if self.degree_y() > 0 {
            return None;
        }
        Some(UniPoly::from_coeffs(
            (0..=self.degree_x()).map(|i| self.coeff(i, 0)).collect(),
        ))
    }

    pub fn from_univariate_x(u: &UniPoly) -> Self {
        Self::from_terms(u.coeffs.iter().enumerate().map(|(i, c)| ((i as u32, 0), c.clone())))
    }

    /// `self(x, 0)` or `self(0, y)` style restriction to an axis.
    pub fn restrict_x_zero(&self) -> UniPoly {
        UniPoly::from_coeffs((0..=self.degree_y()).map(|j| self.coeff(0, j)).collect())
    }

    pub fn restrict_y_zero(&self) -> UniPoly {
        UniPoly::from_coeffs((0..=self.degree_x()).map(|i| self.coeff(i, 0)).collect())
    }
}

impl Add for &Poly2 {
    type Output = Poly2;
    fn add(self, rhs: &Poly2) -> Poly2 {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl Sub for &Poly2 {
    type Output = Poly2;
    fn sub(self, rhs: &Poly2) -> Poly2 {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, -c);
        }
        out
    }
}

impl Mul for &Poly2 {
    type Output = Poly2;
    fn mul(self, rhs: &Poly2) -> Poly2 {
        let mut out = Poly2::zero();
        for (&(i, j), a) in &self.terms {
            for (&(k, l), b) in &rhs.terms {
                out.add_term((i + k, j + l), a * b);
            }
        }
        out
    }
}

impl Neg for &Poly2 {
    type Output = Poly2;
    fn neg(self) -> Poly2 {
        Poly2 { terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect() }
    }
}

macro_rules! owned_ops {
    ($t:ty) => {
        impl Add for $t {
            type Output = $t;
            fn add(self, rhs: $t) -> $t {
                &self + &rhs
            }
        }
        impl Sub for $t {
            type Output = $t;
            fn sub(self, rhs: $t) -> $t {
                &self - &rhs
            }
        }
        impl Mul for $t {
            type Output = $t;
            fn mul(self, rhs: $t) -> $t {
                &self * &rhs
            }
        }
        impl Neg for $t {
            type Output = $t;
            fn neg(self) -> $t {
                -&self
            }
        }
    };
}

owned_ops!(Poly2);

fn coeff_text(c: &QN) -> String {
    let s = c.to_string();
    if s.starts_with('(') || !s.contains('/') {
        s
    } else {
        format!("({s})")
    }
}

impl fmt::Display for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&(i, j), c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mut factors = Vec::new();
            let unit = c.is_one() && (i > 0 || j > 0);
            if !unit {
                factors.push(coeff_text(c));
            }
            match i {
                0 => {}
                1 => factors.push("x".into()),
                _ => factors.push(format!("x^{i}")),
            }
            match j {
                0 => {}
                1 => factors.push("y".into()),
                _ => factors.push(format!("y^{j}")),
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Dense univariate polynomial, lowest degree first, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct UniPoly {
    coeffs: Vec<QN>,
}

impl UniPoly {
    pub fn from_coeffs(mut coeffs: Vec<QN>) -> Self {
        while coeffs.last().is_some_and(QN::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_coeffs(vec![QN::one()])
    }

    pub fn x() -> Self {
        Self::from_coeffs(vec![QN::zero(), QN::one()])
    }

    pub fn monomial(c: QN, k: usize) -> Self {
        let mut v = vec![QN::zero(); k + 1];
        v[k] = c;
        Self::from_coeffs(v)
    }

    pub fn coeffs(&self) -> &[QN] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> QN {
        self.coeffs.get(k).cloned().unwrap_or_else(QN::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `deg 0 = 0`.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> QN {
        self.coeffs.last().cloned().unwrap_or_else(QN::zero)
    }

    /// Order of vanishing at 0; `None` for the zero polynomial.
    pub fn order_at_zero(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn eval(&self, t: &QN) -> QN {
        self.coeffs.iter().rev().fold(QN::zero(), |acc, c| &(&acc * t) + c)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::from_coeffs((0..n).map(|k| &self.coeff(k) + &other.coeff(k)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::from_coeffs((0..n).map(|k| &self.coeff(k) - &other.coeff(k)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut v = vec![QN::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                v[i + j] = &v[i + j] + &(a * b);
            }
        }
        Self::from_coeffs(v)
    }

    pub fn scale(&self, c: &QN) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::from_coeffs(
            self.coeffs.iter().enumerate().skip(1).map(|(k, c)| c * &QN::int(k as i64)).collect(),
        )
    }

    pub fn div_rem(&self, other: &Self) -> (Self, Self) {
        assert!(!other.is_zero(), "division by zero polynomial");
        let lead_inv = other.leading().inv().expect("nonzero");
        let dn = other.degree();
        let mut r = self.clone();
        let mut q = vec![QN::zero(); self.coeffs.len().saturating_sub(dn).max(1)];
        while !r.is_zero() && r.degree() >= dn {
            let shift = r.degree() - dn;
            let c = &r.leading() * &lead_inv;
            q[shift] = c.clone();
            r = r.sub(&other.mul(&Self::monomial(c, shift)));
        }
        (Self::from_coeffs(q), r)
    }

    /// Divides out `x^k`; caller guarantees divisibility.
    pub fn shift_down(&self, k: usize) -> Self {
        Self::from_coeffs(self.coeffs.iter().skip(k).cloned().collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        self.scale(&self.leading().inv().expect("nonzero"))
    }

    /// Monic gcd; remainders are kept monic to limit coefficient growth.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.monic(), other.monic());
        while !b.is_zero() {
            if b.degree() == 0 {
                return Self::one();
            }
            let r = a.div_rem(&b).1.monic();
            a = b;
            b = r;
        }
        a
    }

    /// Number of distinct complex roots.
    pub fn distinct_root_count(&self) -> usize {
        if self.degree() == 0 {
            return 0;
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.degree()
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", Poly2::from_univariate_x(self))
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

// Polynomials in y with coefficients in K[x], indexed by y-degree.
type YPoly = Vec<UniPoly>;

/// `p(x, a)`.
fn at_y(p: &Poly2, a: &QN) -> UniPoly {
    let mut coeffs = vec![QN::zero(); p.degree_x() as usize + 1];
    for (&(i, j), c) in p.terms() {
        coeffs[i as usize] = &coeffs[i as usize] + &(c * &a.pow(j));
    }
    UniPoly::from_coeffs(coeffs)
}

/// True when a specialization `y = a` shows that `gcd(f, g)` does not
/// involve `x`. The x-leading coefficients must survive the specialization.
fn coprime_in(f: &Poly2, g: &Poly2) -> bool {
    let (df, dg) = (f.degree_x(), g.degree_x());
    if df == 0 || dg == 0 {
        return true;
    }
    for a in (0..8).map(QN::int) {
        let (fa, ga) = (at_y(f, &a), at_y(g, &a));
        if fa.degree() == df as usize && ga.degree() == dg as usize {
            return fa.gcd(&ga).degree() == 0;
        }
    }
    false
}

fn coprime(f: &Poly2, g: &Poly2) -> bool {
    coprime_in(f, g) && coprime_in(&f.swap_xy(), &g.swap_xy())
}

/// Gcd of the contents in `x`, and both primitive parts.
fn split_content(f: &Poly2, g: &Poly2) -> (UniPoly, Poly2, Poly2) {
    let (f, g) = (to_ypoly(f), to_ypoly(g));
    let c = ycontent(&f).gcd(&ycontent(&g));
    (c, from_ypoly(&yprimitive(&f)), from_ypoly(&yprimitive(&g)))
}

/// Gcd of two polynomials with trivial content in `x`: univariate gcds in
/// `y` at integer values of `x`, scaled by the gcd of the leading
/// coefficients and interpolated. `None` if no candidate divides both.
fn interpolated_gcd(f: &Poly2, g: &Poly2) -> Option<Poly2> {
    let (fy, gy) = (to_ypoly(f), to_ypoly(g));
    let (lf, lg) = (&fy[ydeg(&fy)], &gy[ydeg(&gy)]);
    let gamma = lf.gcd(lg);
    let needed = gamma.degree() + f.degree_x().min(g.degree_x()) as usize + 1;
    let at = |v: &YPoly, a: &QN| UniPoly::from_coeffs(v.iter().map(|u| u.eval(a)).collect());
    let mut best: Option<usize> = None;
    let mut samples: Vec<(QN, UniPoly)> = Vec::new();
    let candidates = (1..).map(|k: i64| if k % 2 == 0 { k / 2 } else { -(k / 2) });
    for a in candidates.take(4 * needed + 20).map(QN::int) {
        if lf.eval(&a).is_zero() || lg.eval(&a).is_zero() {
            continue;
        }
        let h = at(&fy, &a).gcd(&at(&gy, &a));
        let d = h.degree();
        if d == 0 {
            return Some(Poly2::one());
        }
        match best {
            Some(b) if d > b => continue,
            Some(b) if d == b => {}
            _ => {
                best = Some(d);
                samples.clear();
            }
        }
        samples.push((a.clone(), h.scale(&gamma.eval(&a))));
        if samples.len() >= needed {
            let candidate = interpolate_y(&samples, d);
            if candidate.divides(f) && candidate.divides(g) {
                return Some(candidate);
            }
        }
    }
    None
}

/// Interpolates each `y`-coefficient in `x` and returns the primitive part.
fn interpolate_y(samples: &[(QN, UniPoly)], deg_y: usize) -> Poly2 {
    let xs: Vec<QN> = samples.iter().map(|(a, _)| a.clone()).collect();
    let v: YPoly = (0..=deg_y)
        .map(|j| newton(&xs, &samples.iter().map(|(_, h)| h.coeff(j)).collect::<Vec<_>>()))
        .collect();
    from_ypoly(&yprimitive(&v)).monic()
}

/// The polynomial of degree below `xs.len()` through the given values.
fn newton(xs: &[QN], ys: &[QN]) -> UniPoly {
    let mut coef = ys.to_vec();
    for k in 1..xs.len() {
        for i in (k..xs.len()).rev() {
            coef[i] = &(&coef[i] - &coef[i - 1]) / &(&xs[i] - &xs[i - k]);
        }
    }
    let mut out = UniPoly::zero();
    for i in (0..xs.len()).rev() {
        let lin = UniPoly::from_coeffs(vec![-&xs[i], QN::one()]);
        out = out.mul(&lin).add(&UniPoly::from_coeffs(vec![coef[i].clone()]));
    }
    out
}

/// Primitive remainder sequence in `y`; inputs have trivial content.
fn primitive_prs(f: &Poly2, g: &Poly2) -> Poly2 {
    let mut a = to_ypoly(f);
    let mut b = to_ypoly(g);
    if ydeg(&a) < ydeg(&b) {
        std::mem::swap(&mut a, &mut b);
    }
    while ydeg(&b) > 0 {
        let r = prem(&a, &b);
        if ytrim_is_zero(&r) {
            break;
        }
        a = b;
        b = yprimitive(&r);
    }
    if ydeg(&b) == 0 {
        Poly2::one()
    } else {
        from_ypoly(&yprimitive(&b))
    }
}

fn to_ypoly(p: &Poly2) -> YPoly {
    let mut v = vec![UniPoly::zero(); p.degree_y() as usize + 1];
    for (&(i, j), c) in p.terms() {
        v[j as usize] = v[j as usize].add(&UniPoly::monomial(c.clone(), i as usize));
    }
    v
}

fn from_ypoly(v: &[UniPoly]) -> Poly2 {
    let mut p = Poly2::zero();
    for (j, u) in v.iter().enumerate() {
        for (i, c) in u.coeffs().iter().enumerate() {
            p.add_term((i as u32, j as u32), c.clone());
        }
    }
    p
}

fn ytrim(mut v: YPoly) -> YPoly {
    while v.len() > 1 && v.last().is_some_and(UniPoly::is_zero) {
        v.pop();
    }
    v
}

fn ytrim_is_zero(v: &YPoly) -> bool {
    v.iter().all(UniPoly::is_zero)
}

fn ydeg(v: &YPoly) -> usize {
    v.iter().rposition(|u| !u.is_zero()).unwrap_or(0)
}

fn ycontent(v: &YPoly) -> UniPoly {
    let mut acc = UniPoly::zero();
    for u in v {
        acc = acc.gcd(u);
        if acc.degree() == 0 && !acc.is_zero() {
            break;
        }
    }
    acc
}

fn yprimitive(v: &YPoly) -> YPoly {
    let c = ycontent(v);
    if c.is_zero() {
        return v.clone();
    }
    ytrim(v.iter().map(|u| u.div_rem(&c).0).collect())
}

fn prem(a: &YPoly, b: &YPoly) -> YPoly {
    let db = ydeg(b);
    let lb = b[db].clone();
    let mut r = ytrim(a.clone());
    while !ytrim_is_zero(&r) && ydeg(&r) >= db {
        let dr = ydeg(&r);
        let lr = r[dr].clone();
        let mut next: YPoly = r.iter().map(|u| u.mul(&lb)).collect();
        for (k, u) in b.iter().enumerate() {
            let idx = k + dr - db;
            next[idx] = next[idx].sub(&u.mul(&lr));
        }
        r = ytrim(next);
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(terms: &[((u32, u32), i64)]) -> Poly2 {
        Poly2::from_terms(terms.iter().map(|&(m, c)| (m, QN::int(c))))
    }

    #[test]
    fn basic_arithmetic() {
        let x = Poly2::x();
        let y = Poly2::y();
        assert_eq!(&(&x + &y) * &(&x - &y), p(&[((2, 0), 1), ((0, 2), -1)]));
        let q = &(&x * &x) + &y;
        assert_eq!(q.eval(&QN::int(2), &QN::int(3)).unwrap(), QN::int(7));
        let lam: QN = "(1+sqrt(-3))/2".parse().unwrap();
        assert!(y.scale(&lam).partial_x().is_zero());
    }

    #[test]
    fn gcd_recovers_common_factor() {
        let x = Poly2::x();
        let y = Poly2::y();
        let f = &(&x + &y) * &(&(&x * &y) - &Poly2::one());
        let g = &(&x + &y) * &(&x - &(&y * &y));
        assert_eq!(f.gcd(&g), (&x + &y).monic());
        assert_eq!(x.gcd(&y), Poly2::one());
        let xy2 = &x * &(&y * &y);
        assert_eq!(xy2.gcd(&(&x * &y)), &x * &y);
    }

    #[test]
    fn gcd_over_quadratic_field() {
        let lam: QN = "(1+sqrt(-3))/2".parse().unwrap();
        let x = Poly2::x();
        let y = Poly2::y();
        let h = &x - &y.scale(&lam);
        let f = &h * &(&x + &Poly2::one());
        let g = &h * &(&y * &y);
        assert_eq!(f.gcd(&g), h.monic());
    }

    #[test]
    fn division_with_remainder() {
        let x = Poly2::x();
        let y = Poly2::y();
        let f = &x + &y;
        let h = &(&x * &x) - &(&y * &y);
        assert_eq!(h.div_exact(&f), Some(&x - &y));
        assert!(!f.divides(&(&x * &x)));
    }

    #[test]
    fn univariate_helpers() {
        let u = UniPoly::from_coeffs(vec![QN::zero(), QN::zero(), QN::zero(), QN::one(), QN::zero(), QN::one()]);
        assert_eq!(u.order_at_zero(), Some(3));
        let sq = UniPoly::from_coeffs(vec![QN::one(), QN::int(2), QN::one()]);
        assert_eq!(sq.distinct_root_count(), 1);
        assert_eq!(UniPoly::from_coeffs(vec![QN::zero(), QN::int(2)]).distinct_root_count(), 1);
    }
}
