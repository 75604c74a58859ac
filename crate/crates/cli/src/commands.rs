use std::collections::{BTreeMap, HashMap};

use nodal_core::blowup::{blow_down_config, blow_up_form_at_any_point, gluing_consistent, leading_principal_minors};
use nodal_core::blowup::grauert_is_contractible;
use nodal_core::constructions::{build_l, build_m, build_n, verify_model, Claim, FoliationModel, Sign};
use nodal_core::exactnum::QuadraticNumber as QN;
use nodal_core::localfol::{classify_lambda, cs_node_index, LambdaKind};
use nodal_core::riccati::{corollary_set_contains, kl_cycle_feasible, replay, CycleSpec, FeasibilityReport};
use nodal_core::symalg::{parse_form_with, OneForm, Poly2};
use serde_json::{json, Value};

/// Input problems, reported with exit status 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

fn usage(msg: impl std::fmt::Display) -> UsageError {
    UsageError(msg.to_string())
}

pub struct Outcome {
    pub notes: Vec<String>,
    pub claims: Vec<Claim>,
    pub data: Value,
}

type Evidence = BTreeMap<String, String>;

fn ev<const N: usize>(pairs: [(&str, String); N]) -> Evidence {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Model {
    /// Six (-1)-curves on the plane blown up three times, with α of order 6.
    F1,
    /// Four 0-curves on P1 x P1, with β of order 4.
    F2,
    /// Three lines in the plane, with γ of order 3.
    F3,
}

fn build(model: Model) -> Result<FoliationModel, UsageError> {
    match model {
        Model::F1 => build_n(),
        Model::F2 => build_m(Sign::Plus),
        Model::F3 => build_l(Sign::Plus),
    }
    .map_err(usage)
}

/// Contracting the exceptional curves of the hexagon gives back the
/// annotated triangle of lines, indices included.
fn contraction_replay(n: &FoliationModel) -> Result<Claim, UsageError> {
    let l = build_l(Sign::Plus).map_err(usage)?;
    let mut cfg = n.cycle.clone();
    for c in [2, 4, 6] {
        cfg = blow_down_config(&cfg, c).map_err(usage)?;
    }
    let relabelled = cfg.relabel(&BTreeMap::from([(1, 1), (5, 2), (3, 3)]));
    let ok = relabelled.same_up_to_points(&l.cycle);
    Ok(Claim::new(
        "f1.contraction-replay",
        "contracting the exceptional curves recovers the three lines",
        ok,
        ev([
            ("contracted".into(), relabelled.to_string().trim_end().replace('\n', "; ")),
            ("lines".into(), l.cycle.to_string().trim_end().replace('\n', "; ")),
        ]),
    ))
}

pub fn verify(model: Model) -> Result<Outcome, UsageError> {
    let m = build(model)?;
    let report = verify_model(&m);
    let mut claims = report.claims.clone();
    if model == Model::F1 {
        claims.push(contraction_replay(&m)?);
    }
    let data = json!({ "model": m.document(), "report": report });
    Ok(Outcome { notes: vec![format!("model {}, lambda = {}", m.name, m.lambda)], claims, data })
}

fn kind_text(kind: LambdaKind) -> String {
    match kind {
        LambdaKind::PrimitiveRoot { order } => format!("-lambda is a primitive root of unity of order {order}"),
        LambdaKind::Unit => "lambda = 1".into(),
        LambdaKind::PositiveIrrational => "positive irrational".into(),
    }
}

pub fn classify(n: u32) -> Result<Outcome, UsageError> {
    let c = classify_lambda(n).map_err(usage)?;
    let (r1, r2) = &c.roots;
    let mut evidence = ev([
        ("roots".into(), format!("{r1}, {r2}")),
        ("kind".into(), kind_text(c.kind)),
    ]);
    if c.kind == LambdaKind::Unit {
        evidence.insert("flag".into(), "not reduced nondegenerate".into());
    }
    let indices: Vec<QN> = [r1, r2].iter().map(|r| cs_node_index(r)).collect::<Result<_, _>>().map_err(usage)?;
    let index_ok = indices.iter().all(|i| *i == QN::int(n.into()));
    let claims = vec![
        Claim::new("lambda.classification", "roots of the node equation and their case", true, evidence),
        Claim::new(
            "lambda.cs-index",
            "the node index of each root equals n",
            index_ok,
            ev([("indices".into(), indices.iter().map(QN::to_string).collect::<Vec<_>>().join(", "))]),
        ),
    ];
    let data = json!({ "n": n, "roots": [r1, r2], "kind": c.kind });
    Ok(Outcome { notes: Vec::new(), claims, data })
}

fn feasibility(k: u32, l: i64) -> Result<FeasibilityReport, UsageError> {
    if k < 2 {
        return Err(usage(format!("a cycle needs k > 1 curves, got {k}")));
    }
    kl_cycle_feasible(CycleSpec { k, l }).map_err(usage)
}

pub fn cycle_feasible(k: u32, l: i64) -> Result<Outcome, UsageError> {
    let r = feasibility(k, l)?;
    let replayed = replay(&r);
    let conclusion = serde_json::to_value(&r.conclusion).expect("serializable");
    let claims = vec![
        Claim::new(
            "cycle.feasible",
            "the cycle carries a foliation of the required kind",
            r.feasible,
            ev([
                ("conclusion".into(), conclusion.to_string()),
                ("trace_length".into(), r.trace.len().to_string()),
                ("explored".into(), r.explored.to_string()),
            ]),
        ),
        Claim::new(
            "cycle.replay",
            "the trace replays step by step",
            replayed.is_ok(),
            ev([("replay".into(), replayed.map_or_else(|e| e.to_string(), |_| "ok".into()))]),
        ),
    ];
    let data = serde_json::to_value(&r).expect("serializable");
    Ok(Outcome { notes: Vec::new(), claims, data })
}

pub fn enumerate(kmax: u32, lmin: i64, lmax: i64) -> Result<Outcome, UsageError> {
    if kmax < 2 || lmin > lmax {
        return Err(usage("need kmax > 1 and lmin <= lmax"));
    }
    let mut rows = Vec::new();
    let mut feasible = Vec::new();
    let mut mismatches = Vec::new();
    let mut replay_failures = Vec::new();
    let mut notes = vec![format!("{:>4} {}", "k\\l", (lmin..=lmax).map(|l| format!("{l:>3}")).collect::<String>())];
    for k in 2..=kmax {
        let mut line = format!("{k:>4} ");
        for l in lmin..=lmax {
            let r = feasibility(k, l)?;
            if r.feasible {
                feasible.push((k, l));
            }
            if r.feasible != corollary_set_contains(k, l) {
                mismatches.push(format!("({k},{l})"));
            }
            if replay(&r).is_err() {
                replay_failures.push(format!("({k},{l})"));
            }
            line.push_str(if r.feasible { "  Y" } else { "  ." });
            rows.push(json!({ "k": k, "l": l, "feasible": r.feasible, "conclusion": r.conclusion }));
        }
        notes.push(line);
    }
    let set = feasible.iter().map(|(k, l)| format!("({k},{l})")).collect::<Vec<_>>().join(", ");
    let claims = vec![
        Claim::new(
            "enumerate.closed-form",
            "feasible cycles are exactly the listed exceptions and even cycles of 0-curves",
            mismatches.is_empty(),
            ev([("feasible".into(), set), ("mismatches".into(), format!("{mismatches:?}"))]),
        ),
        Claim::new(
            "enumerate.replay",
            "every verdict replays",
            replay_failures.is_empty(),
            ev([("checked".into(), rows.len().to_string()), ("failures".into(), format!("{replay_failures:?}"))]),
        ),
    ];
    Ok(Outcome { notes, claims, data: json!({ "rows": rows, "feasible": feasible }) })
}

/// Constants available in forms without `--const`.
pub fn default_constants() -> HashMap<String, QN> {
    HashMap::from([("L".to_string(), "(1+sqrt(-3))/2".parse().expect("literal"))])
}

pub fn parse_const(text: &str) -> Result<(String, QN), String> {
    let (name, value) = text.split_once('=').ok_or("expected NAME=VALUE")?;
    let q = value.trim().parse::<QN>().map_err(|e| e.to_string())?;
    Ok((name.trim().to_string(), q))
}

pub fn parse_point(text: &str) -> Result<(QN, QN), String> {
    let (x, y) = text.split_once(',').ok_or("expected x,y")?;
    let p = |s: &str| s.trim().parse::<QN>().map_err(|e| format!("{s}: {e}"));
    Ok((p(x)?, p(y)?))
}

/// Moves `point` to the origin.
fn recentre(omega: &OneForm, (px, py): &(QN, QN)) -> Result<OneForm, UsageError> {
    let sx = &Poly2::x() + &Poly2::constant(px.clone());
    let sy = &Poly2::y() + &Poly2::constant(py.clone());
    OneForm::new(omega.a().compose(&sx, &sy), omega.b().compose(&sx, &sy), omega.chart()).map_err(usage)
}

pub fn blowup(form: &str, point: &(QN, QN), consts: &[(String, QN)]) -> Result<Outcome, UsageError> {
    let mut table = default_constants();
    table.extend(consts.iter().cloned());
    let omega = parse_form_with(form, &table, "U").map_err(|e| usage(format!("form: {e}")))?;
    let centred = recentre(&omega, point)?;
    let r = blow_up_form_at_any_point(&centred).map_err(usage)?;
    let glued = gluing_consistent(&r).map_err(usage)?;
    let evidence = ev([
        ("multiplicity".into(), r.multiplicity.to_string()),
        ("dicritical".into(), r.dicritical.to_string()),
        ("chart1".into(), r.chart1_form.to_string()),
        ("chart2".into(), r.chart2_form.to_string()),
        ("singularities_on_exceptional".into(), r.exceptional_singularities.to_string()),
    ]);
    let claims = vec![Claim::new("blowup.gluing", "the two chart forms agree on the overlap", glued, evidence)];
    let notes = vec![format!("centred form: {centred}")];
    Ok(Outcome { notes, claims, data: serde_json::to_value(&r).expect("serializable") })
}

/// Parses `[a,b;c,d]`: rows separated by `;`, entries by `,`.
pub fn parse_matrix(text: &str) -> Result<Vec<Vec<i64>>, String> {
    let t = text.trim();
    let inner = t
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| "matrix must be enclosed in [ ]".to_string())?;
    let offset = text.find('[').unwrap_or(0) + 1;
    let mut rows = Vec::new();
    let mut pos = offset;
    for row in inner.split(';') {
        let mut entries = Vec::new();
        let mut p = pos;
        for e in row.split(',') {
            let v = e.trim().parse::<i64>().map_err(|_| format!("bad entry '{}' at byte {p}", e.trim()))?;
            entries.push(v);
            p += e.len() + 1;
        }
        rows.push(entries);
        pos += row.len() + 1;
    }
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(format!("matrix must be square, got {n} rows of lengths {:?}", rows.iter().map(Vec::len).collect::<Vec<_>>()));
    }
    Ok(rows)
}

pub fn grauert(matrix: &[Vec<i64>]) -> Result<Outcome, UsageError> {
    let minors = leading_principal_minors(matrix).map_err(usage)?;
    let ok = grauert_is_contractible(matrix).map_err(usage)?;
    let shown: Vec<String> = minors.iter().map(ToString::to_string).collect();
    let claims = vec![Claim::new(
        "grauert.contractible",
        "the intersection matrix is negative definite",
        ok,
        ev([("leading_minors".into(), shown.join(", ")), ("size".into(), matrix.len().to_string())]),
    )];
    Ok(Outcome { notes: Vec::new(), claims, data: json!({ "matrix": matrix, "minors": shown, "contractible": ok }) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrices_parse() {
        assert_eq!(parse_matrix("[-1,1;1,-2]").unwrap(), vec![vec![-1, 1], vec![1, -2]]);
        assert_eq!(parse_matrix(" [ 1 ] ").unwrap(), vec![vec![1]]);
        assert!(parse_matrix("[1,2;3]").unwrap_err().contains("square"));
        assert_eq!(parse_matrix("[1,x]").unwrap_err(), "bad entry 'x' at byte 3");
        assert!(parse_matrix("1,2").is_err());
    }

    #[test]
    fn points_and_constants() {
        assert_eq!(parse_point("0, 1/2").unwrap(), (QN::zero(), QN::frac(1, 2)));
        assert!(parse_point("0").is_err());
        assert_eq!(parse_const("K=(0+sqrt(2))").unwrap().0, "K");
    }

    #[test]
    fn off_origin_blowup() {
        let out = blowup("(x-1)*dy - y*dx", &(QN::one(), QN::zero()), &[]).unwrap();
        assert!(out.claims[0].passed());
        assert_eq!(out.claims[0].evidence["multiplicity"], "2");
        assert_eq!(out.claims[0].evidence["dicritical"], "true");
    }
}
