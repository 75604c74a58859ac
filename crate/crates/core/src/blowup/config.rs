use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::BlowupError;
use crate::exactnum::QuadraticNumber as QN;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Curve {
    pub id: u32,
    pub self_intersection: i64,
    pub rational: bool,
    pub invariant: bool,
}

/// Transverse crossing of two branches. `lambda` is the Camacho-Sad index
/// of the branch of `a` (the branch of `b` has index `1/lambda`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Crossing {
    pub a: u32,
    pub b: u32,
    pub point: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<QN>,
}

impl Crossing {
    pub fn is_node(&self) -> bool {
        self.a == self.b
    }

    pub fn involves(&self, id: u32) -> bool {
        self.a == id || self.b == id
    }

    /// The other curve, if `id` is one end.
    pub fn other(&self, id: u32) -> Option<u32> {
        if self.a == id {
            Some(self.b)
        } else if self.b == id {
            Some(self.a)
        } else {
            None
        }
    }

    /// Index of the branch of `id` at this crossing.
    pub fn index_of(&self, id: u32) -> Option<QN> {
        let l = self.lambda.as_ref()?;
        if self.a == id {
            Some(l.clone())
        } else if self.b == id {
            l.inv().ok()
        } else {
            None
        }
    }

    fn oriented(mut self) -> Self {
        if self.a > self.b {
            std::mem::swap(&mut self.a, &mut self.b);
            self.lambda = self.lambda.and_then(|l| l.inv().ok());
        }
        self
    }
}

/// A smooth point on one curve, away from all crossings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mark {
    pub curve: u32,
    pub point: u32,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveConfig {
    pub curves: Vec<Curve>,
    pub crossings: Vec<Crossing>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub marks: Vec<Mark>,
}

impl CurveConfig {
    pub fn new() -> Self {
        Self::default()
    }

    /// One rational curve with a single node.
    pub fn link(n: i64, lambda: Option<QN>) -> Self {
        let mut c = Self::new();
        c.add_curve(1, n, true);
        c.add_crossing(1, 1, lambda);
        c
    }

    /// Cycle of `k` smooth rational curves `1..=k`, all with self-intersection `l`.
    pub fn cycle(k: u32, l: i64) -> Self {
        Self::cycle_with(&vec![l; k as usize])
    }

    pub fn cycle_with(selfs: &[i64]) -> Self {
        let mut c = Self::new();
        let k = selfs.len() as u32;
        for (i, &s) in selfs.iter().enumerate() {
            c.add_curve(i as u32 + 1, s, true);
        }
        if k == 2 {
            c.add_crossing(1, 2, None);
            c.add_crossing(1, 2, None);
        } else if k > 2 {
            for i in 1..=k {
                c.add_crossing(i, i % k + 1, None);
            }
        }
        c
    }

    /// Chain of smooth rational curves `1..`, consecutive ones crossing once.
    pub fn chain(selfs: &[i64]) -> Self {
        let mut c = Self::new();
        for (i, &s) in selfs.iter().enumerate() {
            c.add_curve(i as u32 + 1, s, true);
            if i > 0 {
                c.add_crossing(i as u32, i as u32 + 1, None);
            }
        }
        c
    }

    pub fn add_curve(&mut self, id: u32, self_intersection: i64, rational: bool) -> &mut Self {
        self.curves.push(Curve { id, self_intersection, rational, invariant: true });
        self
    }

    /// Adds a crossing at a fresh point and returns the point id.
    pub fn add_crossing(&mut self, a: u32, b: u32, lambda: Option<QN>) -> u32 {
        let point = self.next_point_id();
        self.crossings.push(Crossing { a, b, point, lambda }.oriented());
        point
    }

    /// Marks a fresh smooth point on `curve` and returns its id.
    pub fn add_mark(&mut self, curve: u32) -> u32 {
        let point = self.next_point_id();
        self.marks.push(Mark { curve, point });
        point
    }

    pub fn curve(&self, id: u32) -> Option<&Curve> {
        self.curves.iter().find(|c| c.id == id)
    }

    pub fn curve_mut(&mut self, id: u32) -> Option<&mut Curve> {
        self.curves.iter_mut().find(|c| c.id == id)
    }

    pub fn ids(&self) -> Vec<u32> {
        self.curves.iter().map(|c| c.id).collect()
    }

    pub fn next_curve_id(&self) -> u32 {
        self.curves.iter().map(|c| c.id).max().map_or(1, |m| m + 1)
    }

    pub fn next_point_id(&self) -> u32 {
        self.crossings
            .iter()
            .map(|c| c.point)
            .chain(self.marks.iter().map(|m| m.point))
            .max()
            .map_or(1, |m| m + 1)
    }

    /// All point ids carrying a crossing or a mark, ascending.
    pub fn points(&self) -> Vec<u32> {
        let set: BTreeSet<u32> =
            self.crossings.iter().map(|c| c.point).chain(self.marks.iter().map(|m| m.point)).collect();
        set.into_iter().collect()
    }

    pub fn crossings_at(&self, point: u32) -> impl Iterator<Item = &Crossing> {
        self.crossings.iter().filter(move |c| c.point == point)
    }

    pub fn crossings_of(&self, id: u32) -> impl Iterator<Item = &Crossing> {
        self.crossings.iter().filter(move |c| c.involves(id))
    }

    pub fn self_crossings(&self, id: u32) -> usize {
        self.crossings.iter().filter(|c| c.a == id && c.b == id).count()
    }

    /// Number of crossings between two distinct curves.
    pub fn meets(&self, a: u32, b: u32) -> usize {
        self.crossings.iter().filter(|c| !c.is_node() && c.involves(a) && c.involves(b)).count()
    }

    /// Distinct curves crossing `id`, excluding itself.
    pub fn neighbours(&self, id: u32) -> Vec<u32> {
        let set: BTreeSet<u32> =
            self.crossings_of(id).filter_map(|c| c.other(id)).filter(|&o| o != id).collect();
        set.into_iter().collect()
    }

    /// One rational curve with exactly one node and positive self-intersection.
    pub fn is_link(&self) -> bool {
        match self.curves.as_slice() {
            [c] => c.rational && c.self_intersection > 0 && self.crossings.len() == 1 && self.self_crossings(c.id) == 1,
            _ => false,
        }
    }

    /// Sub-configuration on the given curves, in the given order.
    pub fn restrict(&self, ids: &[u32]) -> Result<Self, BlowupError> {
        let mut curves = Vec::with_capacity(ids.len());
        for &id in ids {
            curves.push(self.curve(id).ok_or(BlowupError::UnknownCurve(id))?.clone());
        }
        let keep: BTreeSet<u32> = ids.iter().copied().collect();
        Ok(Self {
            curves,
            crossings: self
                .crossings
                .iter()
                .filter(|c| keep.contains(&c.a) && keep.contains(&c.b))
                .cloned()
                .collect(),
            marks: self.marks.iter().filter(|m| keep.contains(&m.curve)).cloned().collect(),
        })
    }

    /// Renames curve ids via `map`; unmapped ids are kept.
    pub fn relabel(&self, map: &BTreeMap<u32, u32>) -> Self {
        let f = |id: u32| *map.get(&id).unwrap_or(&id);
        let mut out = Self {
            curves: self.curves.iter().map(|c| Curve { id: f(c.id), ..c.clone() }).collect(),
            crossings: self
                .crossings
                .iter()
                .map(|c| Crossing { a: f(c.a), b: f(c.b), ..c.clone() }.oriented())
                .collect(),
            marks: self.marks.iter().map(|m| Mark { curve: f(m.curve), point: m.point }).collect(),
        };
        out.sort_records();
        out
    }

    fn sort_records(&mut self) {
        self.crossings.sort_by(|x, y| (x.a, x.b, x.point).cmp(&(y.a, y.b, y.point)));
        self.marks.sort_by_key(|m| (m.curve, m.point));
    }

    /// Renumbers points `1..` in order of first appearance after sorting the
    /// records by content, so that configurations differing only in point
    /// names compare equal.
    pub fn canonical(&self) -> Self {
        let mut c = self.clone();
        for x in c.crossings.iter_mut() {
            *x = x.clone().oriented();
        }
        let key = |x: &Crossing| (x.a, x.b, x.lambda.as_ref().map(|l| l.to_string()));
        c.crossings.sort_by(|x, y| key(x).cmp(&key(y)).then(x.point.cmp(&y.point)));
        c.marks.sort_by_key(|m| (m.curve, m.point));
        let mut names = BTreeMap::new();
        let order: Vec<u32> = c.crossings.iter().map(|x| x.point).chain(c.marks.iter().map(|m| m.point)).collect();
        for p in order {
            let next = names.len() as u32 + 1;
            names.entry(p).or_insert(next);
        }
        for x in c.crossings.iter_mut() {
            x.point = names[&x.point];
        }
        for m in c.marks.iter_mut() {
            m.point = names[&m.point];
        }
        c
    }

    pub fn same_up_to_points(&self, other: &Self) -> bool {
        let (mut a, mut b) = (self.canonical(), other.canonical());
        a.curves.sort_by_key(|c| c.id);
        b.curves.sort_by_key(|c| c.id);
        a == b
    }

    pub fn validate(&self) -> Result<(), BlowupError> {
        let mut seen = BTreeSet::new();
        for c in &self.curves {
            if !seen.insert(c.id) {
                return Err(BlowupError::DuplicateCurve(c.id));
            }
        }
        for x in &self.crossings {
            for id in [x.a, x.b] {
                if !seen.contains(&id) {
                    return Err(BlowupError::UnknownCurve(id));
                }
            }
            if x.lambda.as_ref().is_some_and(QN::is_zero) {
                return Err(BlowupError::Parse { line: 0, msg: "zero index at a crossing".into() });
            }
        }
        for m in &self.marks {
            if !seen.contains(&m.curve) {
                return Err(BlowupError::UnknownCurve(m.curve));
            }
        }
        Ok(())
    }

    /// SHA-256 of the canonical text form, hex encoded.
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.canonical().to_string().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

impl fmt::Display for CurveConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.curves {
            writeln!(
                f,
                "curve {} self={} rational={} invariant={}",
                c.id,
                c.self_intersection,
                u8::from(c.rational),
                u8::from(c.invariant)
            )?;
        }
        for x in &self.crossings {
            write!(f, "cross {} {} point={}", x.a, x.b, x.point)?;
            if let Some(l) = &x.lambda {
                write!(f, " lambda={l}")?;
            }
            writeln!(f)?;
        }
        for m in &self.marks {
            writeln!(f, "mark {} point={}", m.curve, m.point)?;
        }
        Ok(())
    }
}

impl FromStr for CurveConfig {
    type Err = BlowupError;

    /// Line format, `#` starts a comment:
    ///
    /// ```text
    /// curve <id> self=<int> rational=<0|1> [invariant=<0|1>]
    /// cross <id1> <id2> [point=<id>] [lambda=<number>]
    /// mark <id> [point=<id>]
    /// ```
    fn from_str(text: &str) -> Result<Self, BlowupError> {
        let mut cfg = CurveConfig::new();
        let mut pending: Vec<(usize, Crossing, bool)> = Vec::new();
        let mut pending_marks: Vec<(Mark, bool)> = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line_no = n + 1;
            let err = |msg: String| BlowupError::Parse { line: line_no, msg };
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut words = line.split_whitespace();
            let kind = words.next().expect("nonempty");
            let mut positional = Vec::new();
            let mut keys = BTreeMap::new();
            for w in words {
                match w.split_once('=') {
                    Some((k, v)) => {
                        if keys.insert(k, v).is_some() {
                            return Err(err(format!("repeated key '{k}'")));
                        }
                    }
                    None => positional.push(w),
                }
            }
            let int = |s: &str| s.parse::<i64>().map_err(|_| err(format!("bad integer '{s}'")));
            let id = |s: &str| s.parse::<u32>().map_err(|_| err(format!("bad id '{s}'")));
            let flag = |k: &str, default: Option<bool>| match keys.get(k) {
                Some(&"0") => Ok(false),
                Some(&"1") => Ok(true),
                Some(v) => Err(err(format!("{k} must be 0 or 1, got '{v}'"))),
                None => default.ok_or_else(|| err(format!("missing {k}="))),
            };
            let allowed: &[&str] = match kind {
                "curve" => &["self", "rational", "invariant"],
                "cross" => &["point", "lambda"],
                "mark" => &["point"],
                other => return Err(err(format!("unknown record '{other}'"))),
            };
            if let Some(k) = keys.keys().find(|k| !allowed.contains(k)) {
                return Err(err(format!("unknown key '{k}'")));
            }
            let want = if kind == "cross" { 2 } else { 1 };
            if positional.len() != want {
                return Err(err(format!("'{kind}' takes {want} id(s)")));
            }
            let point = keys.get("point").map(|p| id(p)).transpose()?;
            match kind {
                "curve" => {
                    let s = keys.get("self").ok_or_else(|| err("missing self=".into()))?;
                    cfg.curves.push(Curve {
                        id: id(positional[0])?,
                        self_intersection: int(s)?,
                        rational: flag("rational", None)?,
                        invariant: flag("invariant", Some(true))?,
                    });
                }
                "cross" => {
                    let lambda = keys
                        .get("lambda")
                        .map(|l| l.parse::<QN>().map_err(|e| err(e.to_string())))
                        .transpose()?;
                    let x = Crossing { a: id(positional[0])?, b: id(positional[1])?, point: point.unwrap_or(0), lambda };
                    pending.push((line_no, x, point.is_some()));
                }
                _ => {
                    pending_marks.push((Mark { curve: id(positional[0])?, point: point.unwrap_or(0) }, point.is_some()));
                }
            }
        }
        let mut next = pending
            .iter()
            .filter(|p| p.2)
            .map(|p| p.1.point)
            .chain(pending_marks.iter().filter(|m| m.1).map(|m| m.0.point))
            .max()
            .unwrap_or(0)
            + 1;
        for (_, mut x, explicit) in pending {
            if !explicit {
                x.point = next;
                next += 1;
            }
            cfg.crossings.push(x.oriented());
        }
        for (mut m, explicit) in pending_marks {
            if !explicit {
                m.point = next;
                next += 1;
            }
            cfg.marks.push(m);
        }
        cfg.validate()?;
        Ok(cfg)
    }
}
