//! Three-way comparisons: Floer side, presented target, sheaf side.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::bside::{
    BElem, FilteredModule, FilteredSections, GradedBlocks, GradedModule, GradedRing, GradedSection, H1Part, SectionRing,
};
use crate::cech::{section_mul, stabilization_check, CechComplex, Section, Sheaf};
use crate::compare::{check_module_map, check_ring_map, ModuleLeg};
use crate::curve::{build_mirror, chi_o, Variant};
use crate::error::{Error, Result};
use crate::exact_linalg::{kernel_basis, rank_of_vectors, rat, unit_vec, zero_vec, Mat, Vector};
use crate::floer::{FloerClass, Gen, Parity, Scenario};
use crate::limit::{DirectLimit, GradedFloer, LimitModule, LimitRing};
use crate::model::{GradedModel, ModuleModel};
use crate::poly::Poly;
use crate::presentation::{
    fiber_product_element, fiber_product_oracle, presentations_isomorphic_via, Factor, FiberProductDesc, Presentation,
};
use crate::ratfun::RatFun;
use crate::report::{CheckRecord, Report, Side};

/// Finite cutoffs under which every certificate is stated.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct Cutoffs {
    pub max_weight: u32,
    pub slack: usize,
    pub truncation: u32,
    pub stability_truncation: u32,
    /// Largest Floer stage; defaults to `max_weight + slack + 2`.
    pub max_stage: Option<usize>,
}

impl Default for Cutoffs {
    fn default() -> Self {
        Cutoffs { max_weight: 8, slack: 4, truncation: 10, stability_truncation: 13, max_stage: None }
    }
}

impl Cutoffs {
    pub fn stage_cap(&self) -> usize {
        self.max_stage.unwrap_or(self.max_weight as usize + self.slack + 2)
    }

    fn to_value(&self) -> Value {
        json!({
            "max_weight": self.max_weight,
            "slack": self.slack,
            "truncation": self.truncation,
            "stability_truncation": self.stability_truncation,
            "max_stage": self.stage_cap(),
        })
    }
}

/// Which closed-string comparison to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Case {
    Closed { genus: usize },
    Punctured { genus: usize, k: usize },
    MultiTwist { genus: usize, circles: usize },
}

impl Case {
    pub fn genus(self) -> usize {
        match self {
            Case::Closed { genus } | Case::Punctured { genus, .. } | Case::MultiTwist { genus, .. } => genus,
        }
    }

    pub fn scenario(self, c: &Cutoffs) -> Result<Scenario> {
        let d = c.stage_cap();
        match self {
            Case::Closed { genus } => Scenario::closed(genus, d),
            Case::Punctured { genus, k } => Scenario::punctured(genus, k, d, d),
            Case::MultiTwist { genus, circles } => Scenario::multi_twist(genus, circles, d),
        }
    }

    /// Builder variant of the mirror configuration.
    pub fn variant(self) -> Variant {
        match self {
            Case::Closed { .. } => Variant::Nodal { l: 1 },
            Case::Punctured { k, .. } => Variant::Open { k },
            Case::MultiTwist { circles, .. } => Variant::Nodal { l: circles },
        }
    }
}

pub fn cubic_a() -> Presentation {
    Presentation::parse(&[("Y", 2), ("Z", 3)], &["Y*Z - Y^3 - Z^2"]).expect("valid presentation")
}

pub fn cubic_r() -> Presentation {
    Presentation::parse(&[("X", 1), ("Y", 2), ("Z", 3)], &["X*Y*Z - Y^3 - Z^2"]).expect("valid presentation")
}

pub fn cubic_r2() -> Presentation {
    Presentation::parse(&[("X", 2), ("Y", 2), ("Z", 4)], &["X*Y*Z - Y^4 - Z^2"]).expect("valid presentation")
}

/// `A x_C C[T_1] x_C ... x_C C[T_k]` as a quotient of `C[Y, Z, T_1..T_k]`.
pub fn punctured_ring(k: usize) -> Result<Presentation> {
    let names: Vec<String> = (1..=k).map(|j| format!("T{j}")).collect();
    let mut gens: Vec<(&str, u32)> = vec![("Y", 2), ("Z", 3)];
    gens.extend(names.iter().map(|n| (n.as_str(), 1)));
    let mut rels = vec!["Y*Z - Y^3 - Z^2".to_string()];
    for j in 1..=k {
        rels.push(format!("Y*T{j}"));
        rels.push(format!("Z*T{j}"));
        for i in 1..j {
            rels.push(format!("T{i}*T{j}"));
        }
    }
    let rels: Vec<&str> = rels.iter().map(String::as_str).collect();
    Presentation::parse(&gens, &rels)
}

/// The `l`-fold fiber product of `A` over `C` as a quotient of `C[Y_c, Z_c]`.
pub fn multi_ring(l: usize) -> Result<Presentation> {
    let names: Vec<(String, u32)> = (1..=l).flat_map(|c| [(format!("Y{c}"), 2), (format!("Z{c}"), 3)]).collect();
    let gens: Vec<(&str, u32)> = names.iter().map(|(n, w)| (n.as_str(), *w)).collect();
    let mut rels = Vec::new();
    for c in 1..=l {
        rels.push(format!("Y{c}*Z{c} - Y{c}^3 - Z{c}^2"));
        for d in 1..c {
            for a in ["Y", "Z"] {
                for b in ["Y", "Z"] {
                    rels.push(format!("{a}{d}*{b}{c}"));
                }
            }
        }
    }
    let rels: Vec<&str> = rels.iter().map(String::as_str).collect();
    Presentation::parse(&gens, &rels)
}

fn fiber_desc(case: Case) -> Result<FiberProductDesc> {
    let factors = match case {
        Case::Closed { .. } => vec![Factor::at_origin(cubic_a())],
        Case::Punctured { k, .. } => {
            let mut f = vec![Factor::at_origin(cubic_a())];
            for _ in 0..k {
                f.push(Factor::at_origin(Presentation::parse(&[("T", 1)], &[])?));
            }
            f
        }
        Case::MultiTwist { circles, .. } => (0..circles).map(|_| Factor::at_origin(cubic_a())).collect(),
    };
    FiberProductDesc::new(factors)
}

pub fn ring_presentation(case: Case) -> Result<Presentation> {
    match case {
        Case::Closed { .. } => Ok(cubic_a()),
        Case::Punctured { k, .. } => punctured_ring(k),
        Case::MultiTwist { circles, .. } => multi_ring(circles),
    }
}

fn cls(g: Gen, stage: usize) -> FloerClass {
    FloerClass::gen(g, stage)
}

fn e1(stage: usize, c: usize) -> FloerClass {
    cls(Gen::E { i: 1, c }, stage)
}

/// Images of the presentation generators in the even limit.
fn a_ring_gens(case: Case) -> Vec<FloerClass> {
    match case {
        Case::Closed { .. } => vec![e1(2, 1), e1(3, 1)],
        Case::Punctured { k, .. } => {
            let mut v = vec![e1(2, 1), e1(3, 1)];
            v.extend((1..=k).map(|j| cls(Gen::U { i: 1, j }, 1)));
            v
        }
        Case::MultiTwist { circles, .. } => (1..=circles).flat_map(|c| [e1(2, c), e1(3, c)]).collect(),
    }
}

fn pole(b: u32) -> RatFun {
    RatFun::pole(rat(-1), b)
}

/// `Y = x/(1+x)^2` and `Z = x^2/(1+x)^3` in partial fractions.
pub fn y_function() -> RatFun {
    pole(1).sub(&pole(2))
}

pub fn z_function() -> RatFun {
    pole(1).sub(&pole(2).scale(&rat(2))).add(&pole(3))
}

fn t_var() -> RatFun {
    RatFun::x_pow(1)
}

/// Images of the presentation generators in the pole-filtered sections.
fn b_ring_gens(case: Case, fs: &FilteredSections) -> Result<Vec<Section>> {
    let zero_lines = |k: usize, except: usize| -> Vec<(String, RatFun)> {
        (1..=k).filter(|&j| j != except).map(|j| (format!("T{j}"), RatFun::zero())).collect()
    };
    let lift = |w: u32, parts: Vec<(String, RatFun)>| {
        let p: Vec<(&str, RatFun)> = parts.iter().map(|(n, f)| (n.as_str(), f.clone())).collect();
        fs.lift(w, &p)
    };
    match case {
        Case::Closed { .. } => {
            Ok(vec![lift(2, vec![("D1a".into(), y_function())])?, lift(3, vec![("D1a".into(), z_function())])?])
        }
        Case::Punctured { k, .. } => {
            let mut out = Vec::new();
            for (w, f) in [(2, y_function()), (3, z_function())] {
                let mut parts = vec![("D1a".to_string(), f)];
                parts.extend(zero_lines(k, 0));
                out.push(lift(w, parts)?);
            }
            for j in 1..=k {
                let mut parts = vec![("D1a".to_string(), RatFun::zero()), (format!("T{j}"), t_var())];
                parts.extend(zero_lines(k, j));
                out.push(lift(1, parts)?);
            }
            Ok(out)
        }
        Case::MultiTwist { circles, .. } => {
            let mut out = Vec::new();
            for c in 1..=circles {
                for (w, f) in [(2, y_function()), (3, z_function())] {
                    let parts = (1..=circles)
                        .map(|d| (format!("D{d}a"), if d == c { f.clone() } else { RatFun::zero() }))
                        .collect();
                    out.push(lift(w, parts)?);
                }
            }
            Ok(out)
        }
    }
}

fn dictionary(case: Case) -> Value {
    let mut d = BTreeMap::new();
    d.insert("Y".to_string(), json!({"a": "e_1^2", "b": "x/(1+x)^2 on D1a"}));
    d.insert("Z".to_string(), json!({"a": "e_1^3", "b": "x^2/(1+x)^3 on D1a"}));
    match case {
        Case::Closed { .. } => {
            d.insert("1 (odd)".into(), json!({"a": "g^1", "b": "x d/dx on D1a"}));
            d.insert(
                "C^(2g-2)".into(),
                json!({"a": "m_r^1", "b": "constant h1(O) classes and cycle fields vanishing on D1a"}),
            );
        }
        Case::Punctured { .. } => {
            d.insert("T_j".into(), json!({"a": "u_1^1 at puncture j", "b": "t on T{j}"}));
            d.insert("g".into(), json!({"a": "g^1", "b": "x d/dx on D1a"}));
            d.insert(
                "phi_j".into(),
                json!({"a": "phi^1 at puncture j", "b": "(x/(1+x)) x d/dx on D1a, t d/dt on T{j}"}),
            );
            d.insert("v_j".into(), json!({"a": "v_1^1 at puncture j", "b": "-t^2 d/dt on T{j}"}));
            d.insert(
                "C^(2g-2)".into(),
                json!({"a": "m_r^1", "b": "constant h1(O) classes and cycle fields vanishing on D1a and every T{j}"}),
            );
        }
        Case::MultiTwist { .. } => {
            d.insert("Y_c, Z_c".into(), json!({"a": "e_1^2, e_1^3 on circle c", "b": "Y, Z on D{c}a"}));
            d.insert("1 (odd)".into(), json!({"a": "sum_c g_c^1", "b": "not compared"}));
            d.insert("C^(2g-2)".into(), json!({"a": "m_r^1 and g_1^1 - g_c^1", "b": "not compared"}));
        }
    }
    serde_json::to_value(d).expect("dictionary serializes")
}

/// Merges an A-leg and a B-leg record of the same comparison.
fn joint(name: &str, a: CheckRecord, b: CheckRecord) -> CheckRecord {
    let mut rec = CheckRecord::new(name, Side::Both);
    rec.dims_a = a.dims_a;
    rec.dims_b = b.dims_b;
    rec.dims_target = a.dims_target.clone();
    for w in a.witnesses {
        rec.fail(format!("A: {w}"));
    }
    for w in b.witnesses {
        rec.fail(format!("B: {w}"));
    }
    rec.notes.extend(a.notes.into_iter().map(|n| format!("A: {n}")));
    rec.notes.extend(b.notes.into_iter().map(|n| format!("B: {n}")));
    if !(a.pass && b.pass) {
        rec.pass = false;
    }
    if b.dims_target != a.dims_target {
        rec.fail(format!("target dims differ between legs: {:?} vs {:?}", a.dims_target, b.dims_target));
    }
    if rec.dims_a != rec.dims_b {
        rec.fail(format!("per-weight dims differ: A {:?}, B {:?}", rec.dims_a, rec.dims_b));
    }
    rec
}

fn provenance(entries: Vec<(&str, Value)>) -> BTreeMap<String, Value> {
    entries.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

/// Odd generators on the Floer side, in model order.
fn a_module_gens(case: Case, s: &Scenario) -> Vec<FloerClass> {
    let morse = |r| cls(Gen::MorseOdd { r }, 1);
    match case {
        Case::Closed { .. } => {
            let mut v = vec![cls(Gen::G { c: 1 }, 1)];
            v.extend((1..=s.morse_odd_count()).map(morse));
            v
        }
        Case::Punctured { k, .. } => {
            let mut v = vec![cls(Gen::G { c: 1 }, 1)];
            v.extend((1..=k).map(|j| cls(Gen::Varphi { j }, 1)));
            v.extend((1..=k).map(|j| cls(Gen::V { i: 1, j }, 1)));
            let phi1 = cls(Gen::Varphi { j: 1 }, 1);
            v.extend((2..=k).map(|j| cls(Gen::Varphi { j }, 1).sub(&phi1)));
            v.extend((1..=s.morse_odd_count()).map(morse));
            v
        }
        Case::MultiTwist { circles, .. } => {
            let mut diag = FloerClass::zero(1, Parity::Odd);
            for c in 1..=circles {
                diag.add_term(Gen::G { c }, rat(1));
            }
            let mut v = vec![diag];
            v.extend((1..=s.morse_odd_count()).map(morse));
            for c in 2..=circles {
                v.push(cls(Gen::G { c: 1 }, 1).sub(&cls(Gen::G { c }, 1)));
            }
            v
        }
    }
}

fn odd_model(case: Case, cap: u32) -> ModuleModel {
    let consts = 2 * case.genus() - 2;
    match case {
        Case::Closed { .. } => ModuleModel::closed(consts, cap as usize),
        Case::Punctured { k, .. } => ModuleModel::punctured(k, consts, cap as usize),
        Case::MultiTwist { circles, .. } => ModuleModel::multi(circles, consts, cap as usize),
    }
}

/// Punctured-line components of an open configuration.
fn line_ids(case: Case) -> Vec<String> {
    match case {
        Case::Punctured { k, .. } => (1..=k).map(|j| format!("T{j}")).collect(),
        _ => Vec::new(),
    }
}

/// Odd generators on the sheaf side, in model order: fields for the
/// polynomial summands, then `h1(O)` classes, then cycle fields.
fn b_module_gens(case: Case, m: &FilteredModule<'_>, h1: &H1Part) -> Result<Vec<BElem>> {
    let fs = m.fields;
    let lines = line_ids(case);
    let with_lines = |mut parts: Vec<(String, RatFun)>, j: usize, f: RatFun| {
        for (i, id) in lines.iter().enumerate() {
            parts.push((id.clone(), if i + 1 == j { f.clone() } else { RatFun::zero() }));
        }
        parts
    };
    let lift = |w: u32, parts: Vec<(String, RatFun)>| {
        let p: Vec<(&str, RatFun)> = parts.iter().map(|(n, f)| (n.as_str(), f.clone())).collect();
        fs.lift(w, &p)
    };
    let x = RatFun::x_pow(1);
    let mut gens = vec![m.field(lift(0, with_lines(vec![("D1a".into(), x.clone())], 0, RatFun::zero()))?)];
    if let Case::Punctured { k, .. } = case {
        // (x/(1+x)) x d/dx = (x - 1 + (1+x)^-1) d/dx
        let mut w_field = x.clone();
        w_field.add_term(crate::ratfun::Term::Pow(0), rat(-1));
        w_field.add_term(crate::ratfun::Term::Pole(rat(-1), 1), rat(1));
        for j in 1..=k {
            gens.push(m.field(lift(1, with_lines(vec![("D1a".into(), w_field.clone())], j, t_var()))?));
        }
        for j in 1..=k {
            let t2 = RatFun::x_pow(2).scale(&rat(-1));
            gens.push(m.field(lift(1, with_lines(vec![("D1a".into(), RatFun::zero())], j, t2))?));
        }
        for j in 2..=k {
            let mut parts = with_lines(vec![("D1a".into(), RatFun::zero())], j, t_var());
            parts[1].1 = t_var().scale(&rat(-1));
            gens.push(m.field(lift(0, parts)?));
        }
    }
    for v in h1.constant_classes()? {
        gens.push(m.class(v));
    }
    let mut avoid = vec!["D1a"];
    avoid.extend(lines.iter().map(String::as_str));
    for s in fs.vanishing_on(0, &avoid)? {
        gens.push(m.field(s));
    }
    Ok(gens)
}

/// Even and odd closed-string comparisons for one case.
pub fn check_closed_string(case: Case, c: &Cutoffs) -> Result<Report> {
    let s = case.scenario(c)?;
    let w = c.max_weight;
    let pres = ring_presentation(case)?;
    let cfg = build_mirror(case.genus(), case.variant())?;
    let mut checks = Vec::new();

    // Even: limit ring and sections ring against the presentation.
    let lim = DirectLimit::new(&s, c.slack);
    let a_even = check_ring_map("even", Side::A, &pres, &LimitRing(lim.clone()), &a_ring_gens(case), w)?;
    let o = FilteredSections::new(&cfg, Sheaf::O, w)?;
    let b_even = check_ring_map("even", Side::B, &pres, &SectionRing(&o), &b_ring_gens(case, &o)?, w)?;
    checks.push(joint("even ring", a_even, b_even));

    // The tuple model of the fiber product against the quotient presentation.
    let desc = fiber_desc(case)?;
    let oracle = fiber_product_oracle(&desc, w)?;
    let fp_images = fiber_images(case, &oracle)?;
    let mut fp = presentations_isomorphic_via(&pres, &oracle, &fp_images, w)?;
    fp.name = "fiber product oracle".into();
    checks.push(fp);

    // Odd: limit module and h1(O) + h0(Tbal) against the module model.
    let model = odd_model(case, w);
    let model_leg = ModuleLeg { target: &model, ring_gens: model.ring_images(), module_gens: model.module_images() };
    let mgens = model.generator_weights();
    let a_mod = LimitModule(lim);
    let a_leg = ModuleLeg { target: &a_mod, ring_gens: a_ring_gens(case), module_gens: a_module_gens(case, &s) };
    let a_odd = check_module_map("odd", Side::A, &pres, &mgens, &model_leg, &a_leg, w)?;
    if let Case::MultiTwist { .. } = case {
        let mut rec = a_odd;
        rec.name = "odd limit module (finding)".into();
        let t = FilteredSections::new(&cfg, Sheaf::T, w)?;
        let h1 = H1Part::new(&cfg, Sheaf::O, c.truncation, w)?;
        rec.note(format!("sheaf side: h1(O) = {}, h0(Tbal) level dims {:?}", h1.dim(), t.level_dims()));
        checks.push(rec);
    } else {
        let t = FilteredSections::new(&cfg, Sheaf::T, w)?;
        let h1 = H1Part::new(&cfg, Sheaf::O, c.truncation, w)?;
        let b_mod = FilteredModule { h1: Some(&h1), fields: &t };
        let b_leg = ModuleLeg {
            target: &b_mod,
            ring_gens: b_ring_gens(case, &o)?,
            module_gens: b_module_gens(case, &b_mod, &h1)?,
        };
        let mut b_odd = check_module_map("odd", Side::B, &pres, &mgens, &model_leg, &b_leg, w)?;
        if b_leg.module_gens.len() != mgens.len() {
            b_odd.fail(format!(
                "{} sheaf-side generators for {} model generators",
                b_leg.module_gens.len(),
                mgens.len()
            ));
        }
        checks.push(joint("odd module", a_odd, b_odd));
    }

    let mut prov = vec![
        ("case", serde_json::to_value(case).expect("case serializes")),
        ("cutoffs", c.to_value()),
        ("presentation", serde_json::to_value(pres.to_doc()).expect("presentation serializes")),
        ("module_model", json!(model.name)),
        ("builder", json!(builder_spec(case))),
        ("dictionary", dictionary(case)),
        ("seidel_class", json!("f^1")),
    ];
    let assumptions = s.assumptions();
    if !assumptions.is_empty() {
        prov.push(("assumptions", json!(assumptions)));
    }
    Ok(Report::new(checks, provenance(prov)))
}

fn builder_spec(case: Case) -> String {
    match case.variant() {
        Variant::Closed => format!("closed:g={}", case.genus()),
        Variant::Nodal { l } => format!("nodal:g={},l={l}", case.genus()),
        Variant::Open { k } => format!("open:g={},k={k}", case.genus()),
    }
}

fn fiber_images(case: Case, oracle: &crate::presentation::TruncatedAlgebra) -> Result<Vec<Vector>> {
    let a = cubic_a().names();
    let t = vec!["T".to_string()];
    let pa = |s: &str| Poly::parse(s, &a);
    let pt = |s: &str| Poly::parse(s, &t);
    let mut out = Vec::new();
    match case {
        Case::Closed { .. } => {
            for g in ["Y", "Z"] {
                out.push(fiber_product_element(oracle, &[pa(g)?])?);
            }
        }
        Case::Punctured { k, .. } => {
            for g in ["Y", "Z"] {
                let mut parts = vec![pa(g)?];
                parts.extend((0..k).map(|_| pt("0")).collect::<Result<Vec<_>>>()?);
                out.push(fiber_product_element(oracle, &parts)?);
            }
            for j in 0..k {
                let mut parts = vec![pa("0")?];
                for i in 0..k {
                    parts.push(pt(if i == j { "T" } else { "0" })?);
                }
                out.push(fiber_product_element(oracle, &parts)?);
            }
        }
        Case::MultiTwist { circles, .. } => {
            for c in 0..circles {
                for g in ["Y", "Z"] {
                    let parts: Vec<Poly> =
                        (0..circles).map(|d| pa(if d == c { g } else { "0" })).collect::<Result<_>>()?;
                    out.push(fiber_product_element(oracle, &parts)?);
                }
            }
        }
    }
    Ok(out)
}

/// Graded comparisons for `(+)_d HF(phi^(power*d))` and the bundle powers.
pub fn check_homogeneous(genus: usize, power: u32, c: &Cutoffs) -> Result<Report> {
    let w = c.max_weight;
    let s = Scenario::closed(genus, c.stage_cap().max(w as usize))?;
    let cfg = build_mirror(genus, Variant::Closed)?;
    let mut checks = Vec::new();
    let mut prov = vec![
        ("case", json!({"kind": "homogeneous", "genus": genus, "power": power})),
        ("cutoffs", c.to_value()),
        ("builder", json!(format!("closed:g={genus}"))),
        ("bundle", json!({"D1a": 1})),
    ];
    match power {
        1 => {
            let r = cubic_r();
            let a_ring = [cls(Gen::F, 1), e1(2, 1), e1(3, 1)];
            let even_blocks =
                GradedBlocks::new(&cfg, 1, w, c.truncation, |d| Sheaf::Line { k: d }, Some(&|d| Sheaf::Tbal { k: d }))?;
            let b_ring = homogeneous_ring_gens(&even_blocks, 1)?;

            let a_floer = GradedFloer::new(&s, 1, Parity::Even).skipping(&[Gen::K]);
            let a = check_ring_map("even ring", Side::A, &r, &a_floer, &a_ring, w)?;
            let b = check_ring_map("even ring", Side::B, &r, &GradedRing(&even_blocks), &b_ring, w)?;
            checks.push(joint("graded ring", a, b));

            // Even part as a module: R + C<K>.
            let em = GradedModel::even();
            let em_leg =
                ModuleLeg { target: &em, ring_gens: GradedModel::ring_images(), module_gens: em.module_images() };
            let a_even = GradedFloer::new(&s, 1, Parity::Even);
            let a_leg = ModuleLeg {
                target: &a_even,
                ring_gens: a_ring.to_vec(),
                module_gens: vec![cls(Gen::F, 0), cls(Gen::K, 0)],
            };
            let b_mod = GradedModule(&even_blocks);
            let k_dim = even_blocks.h1_part(0).map_or(0, H1Part::dim);
            let b_leg = ModuleLeg {
                target: &b_mod,
                ring_gens: b_ring.clone(),
                module_gens: vec![
                    BElem { degree: 0, h1: zero_vec(k_dim), section: even_blocks.ones() },
                    BElem { degree: 0, h1: unit_vec(k_dim, 0), section: even_blocks.zero_section() },
                ],
            };
            let a = check_module_map("even module", Side::A, &r, &em.generator_weights(), &em_leg, &a_leg, w)?;
            let mut b = check_module_map("even module", Side::B, &r, &em.generator_weights(), &em_leg, &b_leg, w)?;
            b.require(k_dim == 1, || format!("h1(Tbal) has dimension {k_dim}, expected 1"));
            checks.push(joint("graded even module R + C<K>", a, b));

            // Odd part: R + C[X]^(2g-2) + C.
            let om = GradedModel::odd(2 * genus - 2);
            let om_leg =
                ModuleLeg { target: &om, ring_gens: GradedModel::ring_images(), module_gens: om.module_images() };
            let a_odd = GradedFloer::new(&s, 1, Parity::Odd);
            let mut a_gens = vec![cls(Gen::G { c: 1 }, 0)];
            a_gens.extend((1..=2 * genus - 2).map(|r| cls(Gen::MorseD0 { r }, 0)));
            a_gens.push(cls(Gen::CVan, 0));
            let a_leg = ModuleLeg { target: &a_odd, ring_gens: a_ring.to_vec(), module_gens: a_gens };
            let odd_blocks =
                GradedBlocks::new(&cfg, 1, w, c.truncation, |d| Sheaf::Tbal { k: d }, Some(&|d| Sheaf::Line { k: d }))?;
            let b_mod = GradedModule(&odd_blocks);
            let b_leg = ModuleLeg {
                target: &b_mod,
                ring_gens: b_ring.clone(),
                module_gens: homogeneous_odd_gens(&odd_blocks, &b_ring[0])?,
            };
            let a = check_module_map("odd module", Side::A, &r, &om.generator_weights(), &om_leg, &a_leg, w)?;
            let mut b = check_module_map("odd module", Side::B, &r, &om.generator_weights(), &om_leg, &b_leg, w)?;
            if b_leg.module_gens.len() != om.module_gens.len() {
                b.fail(format!(
                    "{} sheaf-side generators for {} model generators",
                    b_leg.module_gens.len(),
                    om.module_gens.len()
                ));
            }
            checks.push(joint("graded odd module R + C[X]^(2g-2) + C", a, b));

            checks.push(bundle_cohomology(genus, &even_blocks, &odd_blocks));
            prov.push(("presentation", serde_json::to_value(r.to_doc()).expect("presentation serializes")));
            prov.push((
                "dictionary",
                json!({
                    "X": {"a": "f^1", "b": "1+x on D1a in L"},
                    "Y": {"a": "e_1^2", "b": "x on D1a in L^2"},
                    "Z": {"a": "e_1^3", "b": "x^2 on D1a in L^3"},
                    "K": {"a": "K (stage 0)", "b": "generator of h1(Tbal)"},
                    "g": {"a": "g^0", "b": "x d/dx on D1a"},
                    "m_r": {"a": "m_r^0", "b": "h1(O) classes off ker X and cycle fields vanishing on D1a"},
                    "c": {"a": "c_van^0", "b": "kernel of X on h1(O)"},
                }),
            ));
        }
        2 => {
            let r2 = cubic_r2();
            let a_ring = [cls(Gen::F, 2), e1(2, 1), e1(4, 1)];
            let a_floer = GradedFloer::new(&s, 2, Parity::Even).skipping(&[Gen::K]);
            let a = check_ring_map("power 2 ring", Side::A, &r2, &a_floer, &a_ring, w)?;
            let blocks = GradedBlocks::new(&cfg, 2, w, c.truncation, |d| Sheaf::Line { k: d }, None)?;
            let b = check_ring_map(
                "power 2 ring",
                Side::B,
                &r2,
                &GradedRing(&blocks),
                &homogeneous_ring_gens(&blocks, 2)?,
                w,
            )?;
            let mut rec = joint("graded ring XYZ - Y^4 - Z^2", a, b);
            rec.note("sheaf-side generators are named with Y and Z exchanged relative to the relation XYZ = Y^2 + Z^4 (weights 4 and 2)");
            checks.push(rec);
            prov.push(("presentation", serde_json::to_value(r2.to_doc()).expect("presentation serializes")));
            prov.push((
                "dictionary",
                json!({
                    "X": {"a": "f^2", "b": "1+x^2 on D1a in L^2"},
                    "Y": {"a": "e_1^2", "b": "x on D1a in L^2"},
                    "Z": {"a": "e_1^4", "b": "x on D1a in L^4"},
                }),
            ));
        }
        p => return Err(Error::Invalid(format!("power {p} is not supported (expected 1 or 2)"))),
    }
    Ok(Report::new(checks, provenance(prov)))
}

fn homogeneous_ring_gens(blocks: &GradedBlocks, power: u32) -> Result<Vec<GradedSection>> {
    let lift = |d: u32, f: RatFun| -> Result<GradedSection> {
        Ok(GradedSection { degree: d, section: blocks.lift(d, &[("D1a", f)])? })
    };
    let x = RatFun::x_pow(1);
    let one = RatFun::one();
    match power {
        1 => Ok(vec![lift(1, one.add(&x))?, lift(2, x.clone())?, lift(3, RatFun::x_pow(2))?]),
        _ => Ok(vec![lift(2, one.add(&RatFun::x_pow(2)))?, lift(2, x.clone())?, lift(4, x)?]),
    }
}

/// `g`, then `m_r` (`h1(O)` classes completing `ker X`, then cycle fields), then `c`.
fn homogeneous_odd_gens(blocks: &GradedBlocks, x: &GradedSection) -> Result<Vec<BElem>> {
    let h0 = blocks.h1_part(0).ok_or_else(|| Error::Invalid("missing h1(O)".into()))?;
    let h1 = blocks.h1_part(1).ok_or_else(|| Error::Invalid("missing h1(L)".into()))?;
    let n = h0.dim();
    let cols: Vec<Vector> = (0..n).map(|i| h0.times(&x.section, &unit_vec(n, i), h1)).collect::<Result<_>>()?;
    let ker = kernel_basis(&Mat::from_columns(h1.dim(), &cols));
    let mut chosen = ker.clone();
    let mut classes = Vec::new();
    for i in 0..n {
        let mut trial = chosen.clone();
        trial.push(unit_vec(n, i));
        if rank_of_vectors(n, &trial) > chosen.len() {
            chosen = trial;
            classes.push(unit_vec(n, i));
        }
    }
    let field = |s: Section| BElem { degree: 0, h1: zero_vec(n), section: s };
    let mut gens = vec![field(blocks.lift(0, &[("D1a", RatFun::x_pow(1))])?)];
    gens.extend(classes.into_iter().map(|v| BElem { degree: 0, h1: v, section: blocks.zero_section() }));
    gens.extend(blocks.vanishing_on(0, &["D1a"])?.into_iter().map(field));
    gens.extend(ker.into_iter().map(|v| BElem { degree: 0, h1: v, section: blocks.zero_section() }));
    Ok(gens)
}

fn bundle_cohomology(genus: usize, even: &GradedBlocks, odd: &GradedBlocks) -> CheckRecord {
    let mut rec = CheckRecord::new("line bundle cohomology", Side::B);
    let h0_l = even.section_dims();
    let h1_t = even.h1_dims();
    let h1_l = odd.h1_dims();
    let h0_t = odd.section_dims();
    for d in 1..h0_l.len() {
        rec.require(h0_l[d] == d, || format!("h0(L^{d}) = {}, expected {d}", h0_l[d]));
        rec.require(h1_l[d] == genus - 1, || format!("h1(L^{d}) = {}, expected {}", h1_l[d], genus - 1));
        rec.require(h1_t[d] == 0, || format!("h1(Tbal L^{d}) = {}, expected 0", h1_t[d]));
    }
    rec.require(h1_t[0] == 1, || format!("h1(Tbal) = {}, expected 1", h1_t[0]));
    rec.note(format!("h0(L^d) {h0_l:?}"));
    rec.note(format!("h1(L^d) {h1_l:?}"));
    rec.note(format!("h0(Tbal L^d) {h0_t:?}"));
    rec.note(format!("h1(Tbal L^d) {h1_t:?}"));
    rec.dims_b = h0_l.iter().zip(&h1_t).map(|(a, b)| a + b).collect();
    rec
}

/// Standalone sheaf-side statements for one mirror configuration.
pub fn check_sheaf_side(genus: usize, variant: Variant, c: &Cutoffs) -> Result<Report> {
    let cfg = build_mirror(genus, variant)?;
    let w = c.max_weight;
    let n = c.truncation;
    let mut checks = Vec::new();
    let builder = match variant {
        Variant::Closed => format!("closed:g={genus}"),
        Variant::Nodal { l } => format!("nodal:g={genus},l={l}"),
        Variant::Open { k } => format!("open:g={genus},k={k}"),
    };

    // Stability of every computed dimension between the two truncations.
    for sheaf in [Sheaf::O, Sheaf::T] {
        let st = stabilization_check(&cfg, sheaf, n, c.stability_truncation, w)?;
        let mut rec = CheckRecord::new(format!("stability {sheaf} N={n} vs {}", c.stability_truncation), Side::B);
        rec.require(st.stable, || format!("h0 {:?} / h1 {:?} change between truncations", st.h0, st.h1));
        rec.dims_b = st.h0.0.clone();
        rec.note(format!("h1 {} vs {}", st.h1.0, st.h1.1));
        checks.push(rec);
    }

    match variant {
        Variant::Closed => {
            let o = CechComplex::build(&cfg, Sheaf::O, n)?.cohomology();
            let chi = chi_o(&cfg)?;
            let mut rec = CheckRecord::new("euler characteristic of O", Side::B);
            let (h0, h1) = (o.h0_dim(), o.h1_dim());
            rec.require(h0 as i64 - h1 as i64 == chi, || format!("h0 - h1 = {h0} - {h1}, oracle {chi}"));
            rec.require(h0 == 1, || format!("h0(O) = {h0}, expected 1"));
            rec.dims_b = vec![h0, h1];
            checks.push(rec);
            let t = CechComplex::build(&cfg, Sheaf::T, n)?.cohomology();
            let mut rec = CheckRecord::new("balanced fields on the compact mirror", Side::B);
            rec.require(t.h1_dim() == 1, || format!("h1(Tbal) = {}, expected 1", t.h1_dim()));
            rec.require(t.h0_dim() == genus, || format!("h0(Tbal) = {}, expected {genus}", t.h0_dim()));
            rec.dims_b = vec![t.h0_dim(), t.h1_dim()];
            checks.push(rec);
        }
        Variant::Nodal { l } | Variant::Open { k: l } => {
            let punctures = if let Variant::Open { .. } = variant { 1 } else { l };
            let h1 = H1Part::new(&cfg, Sheaf::O, n, w)?;
            let consts = h1.constant_classes()?.len();
            let expected = genus - punctures;
            let mut rec = CheckRecord::new("h1(O) is spanned by constant cocycles", Side::B);
            rec.require(h1.dim() == expected, || format!("h1(O) = {}, expected {expected}", h1.dim()));
            rec.require(consts == h1.dim(), || format!("constant cocycles span {consts} of {} dimensions", h1.dim()));
            rec.dims_b = vec![h1.dim()];
            checks.push(rec);
            let ht = H1Part::new(&cfg, Sheaf::T, n, w)?;
            let mut rec = CheckRecord::new("h1(Tbal) vanishes", Side::B);
            rec.require(ht.dim() == 0, || format!("h1(Tbal) = {}", ht.dim()));
            rec.dims_b = vec![ht.dim()];
            checks.push(rec);

            let case = match variant {
                Variant::Open { k } => Case::Punctured { genus, k },
                _ if l == 1 => Case::Closed { genus },
                _ => Case::MultiTwist { genus, circles: l },
            };
            let o = FilteredSections::new(&cfg, Sheaf::O, w)?;
            let gens = b_ring_gens(case, &o)?;
            let mut rec = CheckRecord::new("YZ = Y^3 + Z^2 as sections", Side::B);
            let circles = if let Case::MultiTwist { circles, .. } = case { circles } else { 1 };
            for c in 0..circles {
                let (y, z) = (&gens[2 * c], &gens[2 * c + 1]);
                let lhs = section_mul(y, z);
                let y3 = section_mul(y, &section_mul(y, y));
                let z2 = section_mul(z, z);
                let rhs: Section = y3.iter().zip(&z2).map(|(a, b)| a.add(b)).collect();
                rec.require(lhs == rhs, || format!("relation fails for the generators on D{}a", c + 1));
            }
            checks.push(rec);

            let pres = ring_presentation(case)?;
            let mut ring = check_ring_map("h0(O) presentation", Side::B, &pres, &SectionRing(&o), &gens, w)?;
            ring.name = format!("h0(O) is presented by {}", presentation_label(case));
            checks.push(ring);

            if !matches!(case, Case::MultiTwist { .. }) {
                let t = FilteredSections::new(&cfg, Sheaf::T, w)?;
                let model = match case {
                    Case::Punctured { k, .. } => ModuleModel::punctured(k, genus - 1, w as usize),
                    _ => ModuleModel::closed(genus - 1, w as usize),
                };
                let model_leg =
                    ModuleLeg { target: &model, ring_gens: model.ring_images(), module_gens: model.module_images() };
                let fields = FilteredModule { h1: None, fields: &t };
                let empty = H1Part::new(&cfg, Sheaf::T, n, w)?;
                let b_leg = ModuleLeg {
                    target: &fields,
                    ring_gens: gens.clone(),
                    module_gens: b_module_gens(case, &fields, &empty)?,
                };
                let mut rec =
                    check_module_map("h0(Tbal)", Side::B, &pres, &model.generator_weights(), &model_leg, &b_leg, w)?;
                rec.name = match case {
                    Case::Punctured { .. } => "h0(Tbal) with balancing F(0) - F(1) = sum_j g_j(0)".into(),
                    _ => "h0(Tbal) = A<x d/dx> + C^(g-1)".into(),
                };
                if b_leg.module_gens.len() != model.module_gens.len() {
                    rec.fail(format!(
                        "{} fields for {} model generators",
                        b_leg.module_gens.len(),
                        model.module_gens.len()
                    ));
                }
                checks.push(rec);
            }
        }
    }
    let prov = provenance(vec![
        ("builder", json!(builder)),
        ("cutoffs", c.to_value()),
        ("configuration", serde_json::to_value(&cfg).expect("configuration serializes")),
    ]);
    Ok(Report::new(checks, prov))
}

fn presentation_label(case: Case) -> String {
    match case {
        Case::Closed { .. } => "C[Y,Z]/(YZ - Y^3 - Z^2)".into(),
        Case::Punctured { k, .. } => format!("A x_C C[T]^{k}"),
        Case::MultiTwist { circles, .. } => format!("A x_C ... x_C A ({circles} factors)"),
    }
}

/// Even limit ring alone, against its presentation.
pub fn check_limit_ring(case: Case, c: &Cutoffs) -> Result<Report> {
    let s = case.scenario(c)?;
    let pres = ring_presentation(case)?;
    let lim = DirectLimit::new(&s, c.slack);
    let mut rec = check_ring_map("even", Side::A, &pres, &LimitRing(lim), &a_ring_gens(case), c.max_weight)?;
    rec.name = "even limit ring".into();
    let mut prov = vec![
        ("case", serde_json::to_value(case).expect("case serializes")),
        ("cutoffs", c.to_value()),
        ("presentation", serde_json::to_value(pres.to_doc()).expect("presentation serializes")),
        ("seidel_class", json!("f^1")),
    ];
    let assumptions = s.assumptions();
    if !assumptions.is_empty() {
        prov.push(("assumptions", json!(assumptions)));
    }
    Ok(Report::new(vec![rec], provenance(prov)))
}

/// Bases of `HF(phi^d)` for `d <= degree`, and optionally every product of
/// basis elements within that range.
pub fn floer_table(s: &Scenario, degree: usize, table: bool) -> Result<Report> {
    let mut rec = CheckRecord::new("floer groups", Side::A);
    let mut even = Vec::new();
    let mut odd = Vec::new();
    for d in s.min_stage()..=degree {
        let (e, o) = s.graded_dims(d)?;
        even.push(e);
        odd.push(o);
        for p in [Parity::Even, Parity::Odd] {
            let names: Vec<String> = s.basis(d, p)?.into_iter().map(|g| s.render_gen(g, d)).collect();
            rec.note(format!("HF^{p}(phi^{d}): {}", names.join(", ")));
        }
    }
    rec.dims_a = even.clone();
    rec.dims_b = odd.clone();
    let mut checks = vec![rec];
    if table {
        let mut t = CheckRecord::new("product table", Side::A);
        let gens = crate::floer::all_generators(s, degree)?;
        for (i, &(a, m)) in gens.iter().enumerate() {
            for &(b, n) in &gens[i..] {
                if m + n > degree {
                    continue;
                }
                let p = s.product_gens(a, m, b, n)?;
                t.note(format!("{} * {} = {}", s.render_gen(a, m), s.render_gen(b, n), p.render(s)));
            }
        }
        checks.push(t);
    }
    let prov = vec![
        ("scenario", serde_json::to_value(s).expect("scenario serializes")),
        ("degree", json!(degree)),
        ("dims", json!({"even": even, "odd": odd})),
    ];
    Ok(Report::new(checks, provenance(prov)))
}

/// Cech cohomology of one sheaf on a configuration, with the stability
/// comparison against a larger truncation.
pub fn cech_report(cfg: &crate::curve::Configuration, builder: &str, sheaf: Sheaf, c: &Cutoffs) -> Result<Report> {
    let coh = CechComplex::build(cfg, sheaf, c.truncation)?.cohomology();
    let stab = stabilization_check(cfg, sheaf, c.truncation, c.stability_truncation, c.max_weight)?;
    let mut rec = CheckRecord::new(format!("cech cohomology of {sheaf}"), Side::B);
    rec.dims_b = vec![coh.h0_dim(), coh.h1_dim()];
    rec.note(format!("h0 = {}, h1 = {}", coh.h0_dim(), coh.h1_dim()));
    if cfg.is_compact() && sheaf == Sheaf::O {
        let chi = chi_o(cfg)?;
        rec.note(format!("chi(O) = {chi}"));
        rec.require(coh.h0_dim() as i64 - coh.h1_dim() as i64 == chi, || {
            format!("h0 - h1 = {} differs from chi(O) = {chi}", coh.h0_dim() as i64 - coh.h1_dim() as i64)
        });
    }
    let mut st =
        CheckRecord::new(format!("stability {sheaf} N={} vs {}", c.truncation, c.stability_truncation), Side::B);
    st.note(format!("h0 {:?} vs {:?}", stab.h0.0, stab.h0.1));
    st.note(format!("h1 {} vs {}", stab.h1.0, stab.h1.1));
    st.require(stab.stable, || "dimensions change between the truncations".into());
    let prov = vec![
        ("builder", json!(builder)),
        ("configuration", serde_json::from_str::<Value>(&cfg.to_json()).expect("configuration is JSON")),
        ("cutoffs", c.to_value()),
        ("sheaf", json!(sheaf.to_string())),
    ];
    Ok(Report::new(vec![rec, st], provenance(prov)))
}

#[cfg(test)]
mod tests {
    use super::*;

    // A = C[Y,Z]/(YZ - Y^3 - Z^2) with weights 2, 3 has one monomial Y^a Z^b with
    // b <= 1 in every weight except 1.
    fn cubic_dims(w: u32) -> Vec<usize> {
        (0..=w).map(|d| usize::from(d != 1)).collect()
    }

    #[test]
    fn cubic_dims_follow_the_normal_form() {
        assert_eq!(cubic_a().quotient_dims(10), cubic_dims(10));
    }

    #[test]
    fn punctured_ring_glues_k_lines() {
        for k in 1..=3 {
            let expected: Vec<usize> =
                cubic_dims(8).iter().enumerate().map(|(d, a)| a + if d > 0 { k } else { 0 }).collect();
            assert_eq!(punctured_ring(k).unwrap().quotient_dims(8), expected, "k={k}");
        }
    }

    #[test]
    fn multi_ring_glues_l_copies() {
        for l in 2..=3 {
            let expected: Vec<usize> =
                cubic_dims(8).iter().enumerate().map(|(d, a)| if d > 0 { a * l } else { 1 }).collect();
            assert_eq!(multi_ring(l).unwrap().quotient_dims(8), expected, "l={l}");
        }
    }

    #[test]
    fn homogeneous_ring_dims() {
        // R_d = C[X,Y,Z]_d modulo (XYZ - Y^3 - Z^2) shifted by 6.
        let free = |d: i64| -> i64 {
            if d < 0 {
                return 0;
            }
            let mut n = 0;
            for z in 0..=d / 3 {
                n += (d - 3 * z) / 2 + 1;
            }
            n
        };
        let expected: Vec<usize> = (0..=10).map(|d| (free(d) - free(d - 6)) as usize).collect();
        assert_eq!(cubic_r().quotient_dims(10), expected);
        assert_eq!(&expected[..4], &[1, 1, 2, 3]);
    }

    #[test]
    fn case_serializes_with_a_kind_tag() {
        let c = Case::Punctured { genus: 2, k: 1 };
        let v = serde_json::to_value(c).unwrap();
        assert_eq!(v["kind"], "punctured");
        assert_eq!(serde_json::from_value::<Case>(v).unwrap(), c);
    }

    #[test]
    fn default_stage_cap_leaves_headroom() {
        let c = Cutoffs::default();
        assert_eq!(c.stage_cap(), 14);
        assert_eq!(Cutoffs { max_stage: Some(20), ..c }.stage_cap(), 20);
    }
}
