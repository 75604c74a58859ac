use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::charts::{blown_up_plane_charts, plane_charts, quadric_charts, transition, Chart, MonomialMap};
use super::ConstructionError;
use crate::blowup::CurveConfig;
use crate::exactnum::QuadraticNumber as QN;
use crate::localfol::{cs_corner_index, Axis};
use crate::symalg::{parse_form, parse_poly, pullback_form, OneForm, Poly2, RationalMap2};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Surface {
    P2,
    P1xP1,
    /// `base` blown up at the origins of the listed charts.
    BlowupTower { base: Box<Surface>, centers: Vec<String> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    fn apply(self, q: QN) -> QN {
        match self {
            Sign::Plus => q,
            Sign::Minus => q.conjugate(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum CurveSource {
    /// Strict transform of `z[i] = 0`.
    Hyperplane(usize),
    /// Exceptional curve over the origin of the named chart.
    Exceptional(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleCurve {
    pub id: u32,
    pub name: String,
    pub source: CurveSource,
}

impl CycleCurve {
    /// Monic defining polynomial in `chart`, if the curve meets it.
    pub fn equation(&self, chart: &Chart) -> Option<Poly2> {
        match &self.source {
            CurveSource::Hyperplane(i) => chart.hyperplane(*i),
            CurveSource::Exceptional(base) => chart.exceptional(base),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelAutomorphism {
    pub name: String,
    pub map: MonomialMap,
    pub order: u32,
}

/// A crossing of the cycle placed at the origin of a chart where both
/// curves are coordinate axes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Corner {
    pub a: u32,
    pub b: u32,
    pub chart: String,
    /// The axis carrying curve `a`.
    pub axis_a: Axis,
}

impl Corner {
    pub fn axis_b(&self) -> Axis {
        match self.axis_a {
            Axis::Vertical => Axis::Horizontal,
            Axis::Horizontal => Axis::Vertical,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoliationModel {
    pub name: String,
    pub surface: Surface,
    /// The first chart is the base chart.
    pub charts: Vec<Chart>,
    pub lambda: QN,
    pub forms: BTreeMap<String, OneForm>,
    /// Cycle curves in cyclic order; ids match `cycle`.
    pub curves: Vec<CycleCurve>,
    pub cycle: CurveConfig,
    pub automorphisms: Vec<ModelAutomorphism>,
    pub pencil: Option<Pencil>,
    /// Exchanges the two sign choices.
    pub swap: Option<MonomialMap>,
    /// Sets of disjoint curves whose contraction is checked.
    pub contractions: Vec<Vec<u32>>,
}

impl FoliationModel {
    pub fn base_chart(&self) -> &Chart {
        &self.charts[0]
    }

    pub fn chart(&self, label: &str) -> Result<&Chart, ConstructionError> {
        self.charts.iter().find(|c| c.label == label).ok_or_else(|| ConstructionError::UnknownChart(label.into()))
    }

    pub fn form(&self, label: &str) -> Result<&OneForm, ConstructionError> {
        self.forms.get(label).ok_or_else(|| ConstructionError::UnknownChart(label.into()))
    }

    pub fn curve(&self, id: u32) -> Option<&CycleCurve> {
        self.curves.iter().find(|c| c.id == id)
    }

    /// For every crossing of the cycle, the first chart in which the two
    /// curves are the coordinate axes.
    pub fn corners(&self) -> Vec<Option<Corner>> {
        self.cycle
            .crossings
            .iter()
            .map(|x| {
                let (ca, cb) = (self.curve(x.a)?, self.curve(x.b)?);
                self.charts.iter().find_map(|ch| {
                    let (ea, eb) = (ca.equation(ch)?, cb.equation(ch)?);
                    let axis_a = if ea == Poly2::x() && eb == Poly2::y() {
                        Axis::Vertical
                    } else if ea == Poly2::y() && eb == Poly2::x() {
                        Axis::Horizontal
                    } else {
                        return None;
                    };
                    Some(Corner { a: x.a, b: x.b, chart: ch.label.clone(), axis_a })
                })
            })
            .collect()
    }

    pub fn document(&self) -> ModelDocument {
        ModelDocument {
            name: self.name.clone(),
            surface: self.surface.clone(),
            charts: self.charts.clone(),
            lambda: self.lambda.clone(),
            forms: self.forms.iter().map(|(k, w)| (k.clone(), w.to_string())).collect(),
            curves: self
                .curves
                .iter()
                .map(|c| CurveDocument {
                    curve: c.clone(),
                    equations: self
                        .charts
                        .iter()
                        .filter_map(|ch| Some((ch.label.clone(), c.equation(ch)?.to_string())))
                        .collect(),
                })
                .collect(),
            cycle: self.cycle.to_string(),
            automorphisms: self
                .automorphisms
                .iter()
                .map(|a| AutomorphismDocument {
                    formula: a.map.to_string(),
                    expressions: chart_expressions(&a.map, &self.charts)
                        .iter()
                        .map(|e| (format!("{} -> {}", e.source, e.target), e.to_string()))
                        .collect(),
                    automorphism: a.clone(),
                })
                .collect(),
            pencil: self.pencil.as_ref().map(Pencil::texts),
            swap: self.swap.clone(),
            contractions: self.contractions.clone(),
        }
    }

    pub fn from_document(doc: &ModelDocument) -> Result<Self, ConstructionError> {
        if doc.charts.is_empty() {
            return Err(ConstructionError::UnknownChart(String::new()));
        }
        let forms = doc
            .forms
            .iter()
            .map(|(k, t)| Ok((k.clone(), parse_form(t, k)?)))
            .collect::<Result<_, ConstructionError>>()?;
        let pencil = doc.pencil.as_ref().map(Pencil::parse).transpose()?;
        Ok(Self {
            name: doc.name.clone(),
            surface: doc.surface.clone(),
            charts: doc.charts.clone(),
            lambda: doc.lambda.clone(),
            forms,
            curves: doc.curves.iter().map(|c| c.curve.clone()).collect(),
            cycle: doc.cycle.parse()?,
            automorphisms: doc.automorphisms.iter().map(|a| a.automorphism.clone()).collect(),
            pencil,
            swap: doc.swap.clone(),
            contractions: doc.contractions.clone(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveDocument {
    #[serde(flatten)]
    pub curve: CycleCurve,
    pub equations: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutomorphismDocument {
    #[serde(flatten)]
    pub automorphism: ModelAutomorphism,
    pub formula: String,
    pub expressions: BTreeMap<String, String>,
}

/// Textual form of a model: forms in the polynomial grammar and the cycle
/// in the configuration format.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelDocument {
    pub name: String,
    pub surface: Surface,
    pub charts: Vec<Chart>,
    pub lambda: QN,
    pub forms: BTreeMap<String, String>,
    pub curves: Vec<CurveDocument>,
    pub cycle: String,
    pub automorphisms: Vec<AutomorphismDocument>,
    /// `[[A_p, B_p], [A_q, B_q]]`.
    pub pencil: Option<[[String; 2]; 2]>,
    pub swap: Option<MonomialMap>,
    pub contractions: Vec<Vec<u32>>,
}

/// Expressions of `map` between every ordered pair of charts where it is
/// defined at generic points.
pub fn chart_expressions(map: &MonomialMap, charts: &[Chart]) -> Vec<RationalMap2> {
    charts.iter().flat_map(|a| charts.iter().filter_map(move |b| map.in_charts(a, b))).collect()
}

/// A birational map of a surface together with its chart expressions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChartwiseMap {
    pub name: String,
    pub map: MonomialMap,
    pub expressions: Vec<RationalMap2>,
}

impl ChartwiseMap {
    pub fn new(name: &str, map: MonomialMap, charts: &[Chart]) -> Self {
        let expressions = chart_expressions(&map, charts);
        Self { name: name.into(), map, expressions }
    }

    pub fn get(&self, source: &str, target: &str) -> Option<&RationalMap2> {
        self.expressions.iter().find(|e| e.source == source && e.target == target)
    }
}

/// Smallest `k ≤ bound` with `φ^k = id`, composing the expression of `map`
/// from `chart` to itself.
pub fn automorphism_order(map: &MonomialMap, chart: &Chart, bound: u32) -> Option<u32> {
    let phi = map.in_charts(chart, chart)?;
    let mut power = phi.clone();
    for k in 1..=bound {
        if power.is_identity() {
            return Some(k);
        }
        power = phi.after(&power).ok()?;
    }
    None
}

/// Base form `λ·p + q` in the base chart, with `p` and `q` given by their
/// coefficient pairs `(A, B)` and not normalized.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pencil {
    pub p: [Poly2; 2],
    pub q: [Poly2; 2],
}

impl Pencil {
    pub fn at(&self, lambda: &QN, chart: &str) -> Result<OneForm, ConstructionError> {
        let [(pa, pb), (qa, qb)] = [(&self.p[0], &self.p[1]), (&self.q[0], &self.q[1])];
        Ok(OneForm::new(&pa.scale(lambda) + qa, &pb.scale(lambda) + qb, chart)?)
    }

    fn texts(&self) -> [[String; 2]; 2] {
        [self.p.clone().map(|c| c.to_string()), self.q.clone().map(|c| c.to_string())]
    }

    fn parse(t: &[[String; 2]; 2]) -> Result<Self, ConstructionError> {
        let pair = |r: &[String; 2]| -> Result<[Poly2; 2], ConstructionError> { Ok([parse_poly(&r[0])?, parse_poly(&r[1])?]) };
        Ok(Self { p: pair(&t[0])?, q: pair(&t[1])? })
    }
}

/// `y dx` and `-x dy`.
fn linear_pencil() -> Pencil {
    Pencil { p: [Poly2::y(), Poly2::zero()], q: [Poly2::zero(), -&Poly2::x()] }
}

fn linear_form(lambda: &QN, chart: &str) -> OneForm {
    OneForm::new(Poly2::y().scale(lambda), -&Poly2::x(), chart).expect("nonzero")
}

fn translate(omega: &OneForm, from: &Chart, to: &Chart) -> Result<OneForm, ConstructionError> {
    let t = transition(to, from).ok_or_else(|| ConstructionError::UnknownChart(to.label.clone()))?;
    Ok(pullback_form(&t, omega)?.normalized())
}

struct Spec {
    name: String,
    surface: Surface,
    charts: Vec<Chart>,
    lambda: QN,
    base_form: OneForm,
    curves: Vec<CycleCurve>,
    selfs: Vec<i64>,
    automorphisms: Vec<ModelAutomorphism>,
    pencil: Option<Pencil>,
    swap: Option<MonomialMap>,
    contractions: Vec<Vec<u32>>,
}

fn assemble(s: Spec) -> Result<FoliationModel, ConstructionError> {
    let base = &s.charts[0];
    let mut forms = BTreeMap::new();
    for ch in &s.charts {
        let w = if ch == base { s.base_form.normalized() } else { translate(&s.base_form, base, ch)? };
        forms.insert(ch.label.clone(), w);
    }
    let mut model = FoliationModel {
        name: s.name,
        surface: s.surface,
        charts: s.charts,
        lambda: s.lambda,
        forms,
        curves: s.curves,
        cycle: CurveConfig::cycle_with(&s.selfs),
        automorphisms: s.automorphisms,
        pencil: s.pencil,
        swap: s.swap,
        contractions: s.contractions,
    };
    // record the index of the branch of `a` on each crossing
    let corners = model.corners();
    for (x, corner) in model.cycle.crossings.iter_mut().zip(corners) {
        if let Some(c) = corner {
            x.lambda = cs_corner_index(&model.forms[&c.chart], &(QN::zero(), QN::zero()), c.axis_a).ok();
        }
    }
    Ok(model)
}

fn hyperplanes(names: &[(&str, usize)]) -> Vec<CycleCurve> {
    names
        .iter()
        .enumerate()
        .map(|(i, &(name, k))| CycleCurve { id: i as u32 + 1, name: name.into(), source: CurveSource::Hyperplane(k) })
        .collect()
}

/// `λ = (1 ± √-3)/2`.
pub fn l_lambda(sign: Sign) -> QN {
    sign.apply("(1+sqrt(-3))/2".parse().expect("literal"))
}

/// `λ = ±√-1`.
pub fn m_lambda(sign: Sign) -> QN {
    sign.apply(QN::i())
}

pub fn gamma() -> MonomialMap {
    MonomialMap::permutation(&[2, 0, 1])
}

pub fn beta() -> MonomialMap {
    MonomialMap::permutation(&[2, 3, 1, 0])
}

pub fn cremona() -> MonomialMap {
    MonomialMap::new(vec![QN::one(); 3], vec![vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]])
}

/// The lift of `f ∘ γ` to the plane blown up at the coordinate points.
pub fn alpha() -> MonomialMap {
    cremona().after(&gamma())
}

/// The linear foliation `λ y dx - x dy` on the plane, its cycle of three
/// coordinate lines and the rotation `γ`.
pub fn build_l(sign: Sign) -> Result<FoliationModel, ConstructionError> {
    let charts = plane_charts();
    let lambda = l_lambda(sign);
    assemble(Spec {
        name: "L".into(),
        surface: Surface::P2,
        base_form: linear_form(&lambda, &charts[0].label),
        pencil: Some(linear_pencil()),
        charts,
        lambda,
        curves: hyperplanes(&[("C1", 0), ("C2", 1), ("C3", 2)]),
        selfs: vec![1, 1, 1],
        automorphisms: vec![ModelAutomorphism { name: "gamma".into(), map: gamma(), order: 3 }],
        swap: Some(MonomialMap::permutation(&[1, 0, 2])),
        contractions: Vec::new(),
    })
}

/// The linear foliation `λ y dx - x dy` on `P1 x P1`, its square of lines
/// `x = 0, y = 0, x = ∞, y = ∞` and the automorphism `β`.
pub fn build_m(sign: Sign) -> Result<FoliationModel, ConstructionError> {
    let charts = quadric_charts();
    let lambda = m_lambda(sign);
    assemble(Spec {
        name: "M".into(),
        surface: Surface::P1xP1,
        base_form: linear_form(&lambda, &charts[0].label),
        pencil: Some(linear_pencil()),
        charts,
        lambda,
        curves: hyperplanes(&[("x=0", 0), ("y=0", 2), ("x=inf", 1), ("y=inf", 3)]),
        selfs: vec![0, 0, 0, 0],
        automorphisms: vec![ModelAutomorphism { name: "beta".into(), map: beta(), order: 4 }],
        swap: Some(MonomialMap::permutation(&[2, 3, 0, 1])),
        contractions: Vec::new(),
    })
}

/// The pull-back of `build_l(Plus)` to the plane blown up at the three
/// corners, with its hexagon of `(-1)`-curves and the automorphism `α`.
pub fn build_n() -> Result<FoliationModel, ConstructionError> {
    let charts = blown_up_plane_charts();
    let lambda = l_lambda(Sign::Plus);
    let u3 = &plane_charts()[0];
    let base_form = translate(&linear_form(&lambda, &u3.label), u3, &charts[0])?;
    let exc = |id: u32, name: &str, base: &str| CycleCurve {
        id,
        name: name.into(),
        source: CurveSource::Exceptional(base.into()),
    };
    let hyp = |id: u32, name: &str, i: usize| CycleCurve { id, name: name.into(), source: CurveSource::Hyperplane(i) };
    assemble(Spec {
        name: "N".into(),
        surface: Surface::BlowupTower {
            base: Box::new(Surface::P2),
            centers: vec!["U3".into(), "U1".into(), "U2".into()],
        },
        charts,
        lambda,
        base_form,
        curves: vec![
            hyp(1, "C1~", 0),
            exc(2, "E2", "U2"),
            hyp(3, "C3~", 2),
            exc(4, "E1", "U1"),
            hyp(5, "C2~", 1),
            exc(6, "E3", "U3"),
        ],
        selfs: vec![-1; 6],
        automorphisms: vec![ModelAutomorphism { name: "alpha".into(), map: alpha(), order: 6 }],
        pencil: None,
        swap: None,
        contractions: vec![vec![1, 3, 5], vec![2, 4, 6]],
    })
}

/// The standard quadratic involution `(z1:z2:z3) ↦ (z2z3:z1z3:z1z2)` on the
/// three standard charts of the plane.
pub fn build_cremona() -> ChartwiseMap {
    ChartwiseMap::new("f", cremona(), &plane_charts())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symalg::{wedge, RationalFn2};

    #[test]
    fn l_has_three_lines() {
        let m = build_l(Sign::Plus).unwrap();
        assert_eq!(m.cycle.curves.iter().map(|c| c.self_intersection).collect::<Vec<_>>(), vec![1, 1, 1]);
        assert_eq!(m.forms.len(), 3);
        let corners = m.corners();
        assert!(corners.iter().all(|c| c.is_some()));
        assert_eq!(corners[0].as_ref().unwrap().chart, "U3");
        // C1 = {x = 0} carries the reciprocal index
        assert_eq!(m.cycle.crossings[0].lambda, Some(m.lambda.inv().unwrap()));
    }

    #[test]
    fn cremona_expressions() {
        let f = build_cremona();
        let e = f.get("U3", "U3").unwrap();
        assert_eq!((e.fx.clone(), e.fy.clone()), (RationalFn2::x().recip(), RationalFn2::y().recip()));
        assert_eq!(e.fx.eval(&QN::zero(), &QN::zero()), Ok(None));
        assert!(e.after(e).unwrap().is_identity());
        assert_eq!(automorphism_order(&f.map, &plane_charts()[0], 12), Some(2));
        let l = build_l(Sign::Plus).unwrap();
        let w = l.form("U3").unwrap();
        assert!(wedge(w, &pullback_form(e, w).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn orders() {
        let p = &plane_charts()[0];
        assert_eq!(automorphism_order(&gamma(), p, 12), Some(3));
        assert_eq!(automorphism_order(&beta(), &quadric_charts()[0], 12), Some(4));
        let n = &blown_up_plane_charts()[0];
        assert_eq!(automorphism_order(&alpha(), n, 12), Some(6));
        assert_eq!(automorphism_order(&cremona(), n, 12), Some(2));
    }

    #[test]
    fn documents_round_trip() {
        for m in [build_l(Sign::Minus).unwrap(), build_m(Sign::Plus).unwrap(), build_n().unwrap()] {
            let doc = m.document();
            let json = serde_json::to_string(&doc).unwrap();
            let back: ModelDocument = serde_json::from_str(&json).unwrap();
            assert_eq!(FoliationModel::from_document(&back).unwrap(), m);
        }
    }
}
