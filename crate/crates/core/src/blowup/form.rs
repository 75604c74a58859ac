use serde::Serialize;

use super::BlowupError;
use crate::exactnum::{solve_quadratic_in_field, QuadraticNumber as QN};
use crate::symalg::{pullback_form, wedge, OneForm, Poly2, RationalFn2, RationalMap2, UniPoly};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlowupResult {
    /// Power of the exceptional coordinate divided out of the pullback.
    pub multiplicity: u32,
    /// Coordinates `(u, v)` with `x = u`, `y = uv`; chart label `<chart>.1`.
    #[serde(serialize_with = "display")]
    pub chart1_form: OneForm,
    /// Coordinates `(s, t)` with `x = st`, `y = t`; chart label `<chart>.2`.
    #[serde(serialize_with = "display")]
    pub chart2_form: OneForm,
    /// True when the exceptional divisor is not invariant.
    pub dicritical: bool,
    /// Number of distinct singular points on the exceptional divisor.
    pub exceptional_singularities: usize,
    /// `v`-coordinates of the chart-1 singularities on `{u = 0}`, when all of
    /// them lie in the coefficient field.
    pub chart1_points: Option<Vec<QN>>,
    /// Whether the chart-2 origin (`v = ∞`) is singular.
    pub chart2_origin_singular: bool,
}

fn display<S: serde::Serializer, T: std::fmt::Display>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

pub fn chart1_label(chart: &str) -> String {
    format!("{chart}.1")
}

pub fn chart2_label(chart: &str) -> String {
    format!("{chart}.2")
}

/// Blow-up of the origin; the origin must be singular.
pub fn blow_up_form(omega: &OneForm) -> Result<BlowupResult, BlowupError> {
    if !omega.a().constant_term().is_zero() || !omega.b().constant_term().is_zero() {
        return Err(BlowupError::NotSingular);
    }
    blow_up_form_at_any_point(omega)
}

/// Same as [`blow_up_form`] without the singularity check.
pub fn blow_up_form_at_any_point(omega: &OneForm) -> Result<BlowupResult, BlowupError> {
    let (a, b) = (omega.a(), omega.b());
    let (x, y) = (Poly2::x(), Poly2::y());
    let xy = &x * &y;

    // chart 1: dx = du, dy = v du + u dv
    let a_1 = a.compose(&x, &xy);
    let b_1 = b.compose(&x, &xy);
    let c1_a = &a_1 + &(&y * &b_1);
    let c1_b = &x * &b_1;
    let m = adic_order(&c1_a, &c1_b, Poly2::x_adic_order);
    let (c1_a, c1_b) = (c1_a.unshift(m, 0), c1_b.unshift(m, 0));

    // chart 2: dx = t ds + s dt, dy = dt
    let a_2 = a.compose(&xy, &y);
    let b_2 = b.compose(&xy, &y);
    let c2_a = &y * &a_2;
    let c2_b = &(&x * &a_2) + &b_2;
    let m2 = adic_order(&c2_a, &c2_b, Poly2::y_adic_order);
    let (c2_a, c2_b) = (c2_a.unshift(0, m2), c2_b.unshift(0, m2));
    debug_assert_eq!(m, m2);

    let dicritical = !Poly2::x().divides(&c1_b);

    // singular points on {u = 0} in chart 1, as a polynomial in v
    let on_e = c1_a.restrict_x_zero().gcd(&c1_b.restrict_x_zero());
    let chart2_origin_singular = c2_a.constant_term().is_zero() && c2_b.constant_term().is_zero();
    let (finite, chart1_points) = if on_e.is_zero() {
        // the whole divisor is singular; cannot happen for a primitive form
        (0, Some(Vec::new()))
    } else {
        (on_e.distinct_root_count(), roots_in_field(&on_e))
    };

    let chart = omega.chart();
    Ok(BlowupResult {
        multiplicity: m,
        chart1_form: OneForm::new(c1_a, c1_b, chart1_label(chart))?,
        chart2_form: OneForm::new(c2_a, c2_b, chart2_label(chart))?,
        dicritical,
        exceptional_singularities: finite + usize::from(chart2_origin_singular),
        chart1_points,
        chart2_origin_singular,
    })
}

fn adic_order(p: &Poly2, q: &Poly2, ord: fn(&Poly2) -> u32) -> u32 {
    match (p.is_zero(), q.is_zero()) {
        (true, _) => ord(q),
        (_, true) => ord(p),
        _ => ord(p).min(ord(q)),
    }
}

fn roots_in_field(p: &UniPoly) -> Option<Vec<QN>> {
    let sq = p.div_rem(&p.gcd(&p.derivative())).0.monic();
    match sq.degree() {
        0 => Some(Vec::new()),
        1 => Some(vec![-&sq.coeff(0)]),
        2 => {
            let (r1, r2) = solve_quadratic_in_field(&sq.coeff(1), &sq.coeff(0)).ok()??;
            Some(vec![r1, r2])
        }
        _ => None,
    }
}

/// `(s, t) -> (u, v) = (st, 1/s)`, from chart 2 to chart 1.
pub fn chart_transition(chart: &str) -> RationalMap2 {
    let s = RationalFn2::x();
    let t = RationalFn2::y();
    RationalMap2::new(&s * &t, s.recip(), chart2_label(chart), chart1_label(chart))
        .expect("nonconstant")
}

/// Whether the two chart forms define the same foliation on the overlap.
pub fn gluing_consistent(result: &BlowupResult) -> Result<bool, BlowupError> {
    let base = result
        .chart1_form
        .chart()
        .strip_suffix(".1")
        .ok_or_else(|| BlowupError::BadChart(result.chart1_form.chart().to_string()))?;
    let pulled = pullback_form(&chart_transition(base), &result.chart1_form)?;
    Ok(wedge(&pulled, &result.chart2_form)?.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symalg::parse_form;

    fn lam() -> QN {
        "(1+sqrt(-3))/2".parse().unwrap()
    }

    #[test]
    fn linear_corner_blowup() {
        let l = lam();
        let w = OneForm::new(Poly2::y().scale(&l), -&Poly2::x(), "U").unwrap();
        let r = blow_up_form(&w).unwrap();
        assert_eq!(r.multiplicity, 1);
        assert!(!r.dicritical);
        let expected =
            OneForm::new(Poly2::y().scale(&(&l - &QN::one())), -&Poly2::x(), "U.1").unwrap();
        assert!(r.chart1_form.is_proportional(&expected));
        assert_eq!(r.exceptional_singularities, 2);
        assert_eq!(r.chart1_points, Some(vec![QN::zero()]));
        assert!(r.chart2_origin_singular);
        assert!(gluing_consistent(&r).unwrap());
    }

    #[test]
    fn radial_point_is_dicritical() {
        let w = parse_form("y*dx - x*dy", "U").unwrap();
        let r = blow_up_form(&w).unwrap();
        assert!(r.dicritical);
        assert_eq!(r.multiplicity, 2);
        assert!(r.chart1_form.is_proportional(&OneForm::dy("U.1")));
        assert_eq!(r.exceptional_singularities, 0);
        assert!(gluing_consistent(&r).unwrap());
    }

    #[test]
    fn product_saddle() {
        let w = parse_form("x*dy + y*dx", "U").unwrap();
        let r = blow_up_form(&w).unwrap();
        assert_eq!(r.multiplicity, 1);
        assert!(!r.dicritical);
        assert_eq!(r.exceptional_singularities, 2);
        assert!(gluing_consistent(&r).unwrap());
    }

    #[test]
    fn regular_point_needs_the_flag() {
        let w = parse_form("dy + x*dx", "U").unwrap();
        assert_eq!(blow_up_form(&w), Err(BlowupError::NotSingular));
        let r = blow_up_form_at_any_point(&w).unwrap();
        assert!(!r.dicritical);
        assert_eq!(r.multiplicity, 0);
        assert_eq!(r.exceptional_singularities, 1);
        assert!(gluing_consistent(&r).unwrap());
    }

    #[test]
    fn tangent_directions_in_the_quadratic_field() {
        // restriction to E is 3v² - 2, roots ±sqrt(6)/3
        let w = parse_form("(y^2 - 2*x^2)*dx + 2*x*y*dy", "U").unwrap();
        let r = blow_up_form(&w).unwrap();
        assert!(!r.dicritical);
        assert_eq!(r.multiplicity, 2);
        let root: QN = "(0+sqrt(6))/3".parse().unwrap();
        let mut pts = r.chart1_points.clone().unwrap();
        pts.sort_by_key(|p| p.to_string());
        assert_eq!(pts, vec![root.clone(), -&root]);
        assert_eq!(r.exceptional_singularities, 3);
        assert!(gluing_consistent(&r).unwrap());
    }
}
