//! Trivalent configurations of rational curves: components with node marks
//! and punctures, nodes joining three branches, and line bundle degrees.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact_linalg::{parse_rat, rat, Rat};

/// A point of the projective line in a component chart.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Point {
    Finite(Rat),
    Inf,
}

impl Point {
    pub fn finite(&self) -> Option<&Rat> {
        match self {
            Point::Finite(q) => Some(q),
            Point::Inf => None,
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Finite(q) => write!(f, "{q}"),
            Point::Inf => f.write_str("inf"),
        }
    }
}

impl FromStr for Point {
    type Err = Error;

    fn from_str(s: &str) -> Result<Point> {
        let t = s.trim();
        if t == "inf" || t == "∞" {
            return Ok(Point::Inf);
        }
        parse_rat(t).map(Point::Finite).ok_or_else(|| Error::Parse(format!("bad point '{s}'")))
    }
}

impl Serialize for Point {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Point, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    pub id: String,
    #[serde(default)]
    pub punctures: Vec<Point>,
    #[serde(default)]
    pub marks: Vec<Point>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Node {
    pub id: String,
    pub branches: Vec<(String, Point)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Configuration {
    pub components: Vec<Component>,
    pub nodes: Vec<Node>,
    #[serde(default)]
    pub bundle: BTreeMap<String, i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distinguished: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum Variant {
    Closed,
    Nodal { l: usize },
    Open { k: usize },
}

impl FromStr for Variant {
    type Err = Error;

    /// Accepts `closed`, `nodal:l`, `open:k`.
    fn from_str(s: &str) -> Result<Variant> {
        let (head, arg) = s.split_once(':').unwrap_or((s, ""));
        let num = || {
            arg.trim()
                .trim_start_matches(|c: char| c.is_alphabetic() || c == '=')
                .parse::<usize>()
                .map_err(|_| Error::Parse(format!("variant '{s}' needs a count")))
        };
        match head.trim() {
            "closed" => Ok(Variant::Closed),
            "nodal" => Ok(Variant::Nodal { l: if arg.is_empty() { 1 } else { num()? } }),
            "open" => Ok(Variant::Open { k: if arg.is_empty() { 1 } else { num()? } }),
            other => Err(Error::Parse(format!("unknown variant '{other}'"))),
        }
    }
}

/// Builder spec such as `nodal:g=3,l=1` or `open:g=2,k=1`.
pub fn parse_builder(spec: &str) -> Result<(usize, Variant)> {
    let (head, rest) = spec.split_once(':').unwrap_or((spec, ""));
    let mut g = None;
    let mut count = None;
    for part in rest.split(',').filter(|p| !p.trim().is_empty()) {
        let (k, v) =
            part.split_once('=').ok_or_else(|| Error::Parse(format!("builder field '{part}' is not key=value")))?;
        let v: usize = v.trim().parse().map_err(|_| Error::Parse(format!("builder field '{part}' is not a count")))?;
        match k.trim() {
            "g" => g = Some(v),
            "l" | "k" => count = Some(v),
            other => return Err(Error::Parse(format!("unknown builder field '{other}'"))),
        }
    }
    let g = g.ok_or_else(|| Error::Parse(format!("builder '{spec}' is missing g")))?;
    let variant = match head.trim() {
        "closed" => Variant::Closed,
        "nodal" => Variant::Nodal { l: count.unwrap_or(1) },
        "open" => Variant::Open { k: count.unwrap_or(1) },
        other => return Err(Error::Parse(format!("unknown builder '{other}'"))),
    };
    Ok((g, variant))
}

fn comp(id: &str, marks: Vec<Point>) -> Component {
    Component { id: id.into(), punctures: Vec::new(), marks }
}

fn zero() -> Point {
    Point::Finite(Rat::zero())
}

/// Necklace mirror of a genus `g` surface.
///
/// Nodes `a_i, b_i` for `i < g`; components `D{i}a`, `D{i}b` run from `a_i`
/// (mark 0) to `b_i` (mark inf); connector `E{i}` runs from `b_i` to
/// `a_{i+1}` cyclically. The line bundle has degree 1 on `D1a`.
pub fn build_mirror(g: usize, variant: Variant) -> Result<Configuration> {
    if g < 2 {
        return Err(Error::InvalidScenario(format!("genus must be at least 2, got {g}")));
    }
    let n = g - 1;
    let mut components = Vec::new();
    let mut nodes: Vec<Node> = Vec::new();
    for i in 1..=n {
        components.push(comp(&format!("D{i}a"), vec![zero(), Point::Inf]));
        components.push(comp(&format!("D{i}b"), vec![zero(), Point::Inf]));
        components.push(comp(&format!("E{i}"), vec![zero(), Point::Inf]));
    }
    for i in 1..=n {
        let prev = if i == 1 { n } else { i - 1 };
        nodes.push(Node {
            id: format!("a{i}"),
            branches: vec![(format!("D{i}a"), zero()), (format!("D{i}b"), zero()), (format!("E{prev}"), Point::Inf)],
        });
        nodes.push(Node {
            id: format!("b{i}"),
            branches: vec![(format!("D{i}a"), Point::Inf), (format!("D{i}b"), Point::Inf), (format!("E{i}"), zero())],
        });
    }
    let punctured = match variant {
        Variant::Closed => 0,
        Variant::Nodal { l } => {
            if l == 0 || l > n {
                return Err(Error::InvalidScenario(format!("nodal variant needs 1 <= l <= g-1, got l={l}")));
            }
            l
        }
        Variant::Open { .. } => 1,
    };
    for i in 1..=punctured {
        components[3 * (i - 1)].punctures.push(Point::Finite(rat(-1)));
    }
    if let Variant::Open { k } = variant {
        if k == 0 {
            return Err(Error::InvalidScenario("open variant needs k >= 1".into()));
        }
        // Split E1 into a chain E1_0 .. E1_k joined at new nodes n_j, each
        // carrying an affine line T{j}.
        let e = components.iter().position(|c| c.id == "E1").expect("connector");
        components.remove(e);
        let head = nodes
            .iter_mut()
            .flat_map(|nd| nd.branches.iter_mut())
            .find(|(c, m)| c == "E1" && *m == Point::Inf)
            .expect("connector head");
        head.0 = format!("E1_{k}");
        let tail = nodes
            .iter_mut()
            .flat_map(|nd| nd.branches.iter_mut())
            .find(|(c, m)| c == "E1" && *m == zero())
            .expect("connector tail");
        tail.0 = "E1_0".into();
        for j in 0..=k {
            components.push(comp(&format!("E1_{j}"), vec![zero(), Point::Inf]));
        }
        for j in 1..=k {
            components.push(Component { id: format!("T{j}"), punctures: vec![Point::Inf], marks: vec![zero()] });
            nodes.push(Node {
                id: format!("n{j}"),
                branches: vec![
                    (format!("E1_{}", j - 1), Point::Inf),
                    (format!("E1_{j}"), zero()),
                    (format!("T{j}"), zero()),
                ],
            });
        }
    }
    let mut bundle = BTreeMap::new();
    bundle.insert("D1a".to_string(), 1);
    let cfg = Configuration { components, nodes, bundle, distinguished: Some("D1a".into()) };
    cfg.validate().map_err(Error::InvalidConfiguration)?;
    Ok(cfg)
}

impl Configuration {
    pub fn from_json(src: &str) -> Result<Self> {
        serde_json::from_str(src).map_err(|e| Error::Parse(format!("line {}: {e}", e.line())))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("configuration serializes")
    }

    pub fn component_index(&self, id: &str) -> Option<usize> {
        self.components.iter().position(|c| c.id == id)
    }

    pub fn bundle_degree(&self, c: usize) -> i64 {
        self.bundle.get(&self.components[c].id).copied().unwrap_or(0)
    }

    pub fn is_compact(&self) -> bool {
        self.components.iter().all(|c| c.punctures.is_empty())
    }

    pub fn puncture_count(&self) -> usize {
        self.components.iter().map(|c| c.punctures.len()).sum()
    }

    /// Node branches as (component index, mark).
    pub fn branches(&self, node: usize) -> Vec<(usize, Point)> {
        self.nodes[node]
            .branches
            .iter()
            .map(|(c, m)| (self.component_index(c).expect("validated"), m.clone()))
            .collect()
    }

    /// All violations of the configuration invariants.
    pub fn validate(&self) -> std::result::Result<(), Vec<String>> {
        let mut errs = Vec::new();
        let mut ids = HashSet::new();
        for c in &self.components {
            if !ids.insert(c.id.as_str()) {
                errs.push(format!("duplicate component id {}", c.id));
            }
            let mut pts = HashSet::new();
            for p in c.marks.iter().chain(&c.punctures) {
                if !pts.insert(p) {
                    if c.punctures.contains(p) && c.marks.contains(p) {
                        errs.push(format!("mark {p} on {} coincides with a puncture", c.id));
                    } else {
                        errs.push(format!("point {p} repeated on {}", c.id));
                    }
                }
            }
        }
        let mut used: HashSet<(String, Point)> = HashSet::new();
        for n in &self.nodes {
            if n.branches.len() != 3 {
                errs.push(format!("node {} not trivalent ({} branches)", n.id, n.branches.len()));
            }
            for (c, m) in &n.branches {
                match self.components.iter().find(|x| &x.id == c) {
                    None => errs.push(format!("node {} refers to unknown component {c}", n.id)),
                    Some(x) if !x.marks.contains(m) => {
                        errs.push(format!("node {} uses {c} at {m}, which is not a mark", n.id))
                    }
                    Some(_) => {}
                }
                if !used.insert((c.clone(), m.clone())) {
                    errs.push(format!("mark {m} on {c} is used by more than one branch"));
                }
            }
        }
        for c in &self.components {
            for m in &c.marks {
                if !used.contains(&(c.id.clone(), m.clone())) {
                    errs.push(format!("mark {m} on {} is not consumed by a node", c.id));
                }
            }
        }
        for id in self.bundle.keys() {
            if !ids.contains(id.as_str()) {
                errs.push(format!("bundle refers to unknown component {id}"));
            }
        }
        if let Some(d) = &self.distinguished {
            if !ids.contains(d.as_str()) {
                errs.push(format!("distinguished component {d} does not exist"));
            }
        }
        if errs.is_empty() && !self.is_connected() {
            errs.push("configuration is disconnected".into());
        }
        if errs.is_empty() {
            Ok(())
        } else {
            Err(errs)
        }
    }

    fn is_connected(&self) -> bool {
        let n = self.components.len();
        if n == 0 {
            return true;
        }
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        for node in &self.nodes {
            let idx: Vec<usize> = node.branches.iter().filter_map(|(c, _)| self.component_index(c)).collect();
            for w in idx.windows(2) {
                let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
                parent[a] = b;
            }
        }
        let root = find(&mut parent, 0);
        (0..n).all(|i| find(&mut parent, i) == root)
    }

    /// First Betti number of the dual graph (components and nodes as vertices).
    pub fn first_betti(&self) -> usize {
        let edges: usize = self.nodes.iter().map(|n| n.branches.len()).sum();
        edges + 1 - self.components.len() - self.nodes.len()
    }
}

/// Euler characteristic of the structure sheaf of a compact configuration.
pub fn chi_o(c: &Configuration) -> Result<i64> {
    if !c.is_compact() {
        return Err(Error::Invalid("Euler characteristic needs a compact configuration".into()));
    }
    Ok(c.components.len() as i64 - 2 * c.nodes.len() as i64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn necklace_counts() {
        for g in 2..=5 {
            let c = build_mirror(g, Variant::Closed).unwrap();
            assert_eq!(c.components.len(), 3 * g - 3);
            assert_eq!(c.nodes.len(), 2 * g - 2);
            assert_eq!(c.first_betti(), g);
        }
        let theta = build_mirror(2, Variant::Closed).unwrap();
        for n in 0..2 {
            let mut cs: Vec<usize> = theta.branches(n).iter().map(|b| b.0).collect();
            cs.sort();
            assert_eq!(cs, vec![0, 1, 2]);
        }
    }

    #[test]
    fn euler_characteristic() {
        assert_eq!(chi_o(&build_mirror(2, Variant::Closed).unwrap()).unwrap(), -1);
        assert_eq!(chi_o(&build_mirror(3, Variant::Closed).unwrap()).unwrap(), -2);
        let single = Configuration {
            components: vec![comp("P", vec![])],
            nodes: vec![],
            bundle: BTreeMap::new(),
            distinguished: None,
        };
        assert_eq!(chi_o(&single).unwrap(), 1);
        assert!(chi_o(&build_mirror(2, Variant::Nodal { l: 1 }).unwrap()).is_err());
    }

    #[test]
    fn open_builder_shape() {
        let c = build_mirror(2, Variant::Open { k: 1 }).unwrap();
        let affine = c.components.iter().filter(|x| x.punctures == vec![Point::Inf]).count();
        assert_eq!(c.components.len(), 5);
        assert_eq!(affine, 1);
        assert_eq!(c.nodes.len(), 3);
    }

    #[test]
    fn validation_reports_every_violation() {
        let mut c = build_mirror(2, Variant::Nodal { l: 1 }).unwrap();
        c.nodes[0].branches.pop();
        c.components[1].marks.push(Point::Finite(rat(-1)));
        c.components[1].punctures.push(Point::Finite(rat(-1)));
        let errs = c.validate().unwrap_err();
        assert!(errs.iter().any(|e| e.contains("not trivalent")));
        assert!(errs.iter().any(|e| e.contains("coincides with a puncture")));
        assert!(errs.iter().any(|e| e.contains("not consumed")));
    }

    #[test]
    fn json_round_trip() {
        let c = build_mirror(3, Variant::Open { k: 2 }).unwrap();
        assert_eq!(Configuration::from_json(&c.to_json()).unwrap(), c);
        let src = r#"{"components":[{"id":"D1a","punctures":["-1"],"marks":["0","inf"]}],
            "nodes":[],"bundle":{"D1a":1}}"#;
        let parsed = Configuration::from_json(src).unwrap();
        assert_eq!(parsed.components[0].punctures, vec![Point::Finite(rat(-1))]);
    }

    #[test]
    fn builder_specs() {
        assert_eq!(parse_builder("nodal:g=3,l=1").unwrap(), (3, Variant::Nodal { l: 1 }));
        assert_eq!(parse_builder("open:g=2,k=2").unwrap(), (2, Variant::Open { k: 2 }));
        assert!(parse_builder("nodal:l=1").is_err());
        assert!(build_mirror(2, Variant::Nodal { l: 2 }).is_err());
    }
}
