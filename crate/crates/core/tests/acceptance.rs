use nodal_mirror::cech::{CechComplex, Sheaf};
use nodal_mirror::compare::check_ring_map;
use nodal_mirror::curve::{build_mirror, chi_o, Variant};
use nodal_mirror::exact_linalg::rat;
use nodal_mirror::floer::{all_generators, FloerClass, Gen, Parity, Scenario};
use nodal_mirror::limit::GradedFloer;
use nodal_mirror::report::{Report, Side};
use nodal_mirror::verify::{
    check_closed_string, check_homogeneous, check_limit_ring, check_sheaf_side, cubic_r, Case, Cutoffs,
};

/// Verdict of one criterion plus everything it produced, for the rerun comparison.
struct Outcome {
    pass: bool,
    detail: String,
    fingerprint: String,
}

impl Outcome {
    fn new() -> Self {
        Outcome { pass: true, detail: String::new(), fingerprint: String::new() }
    }

    fn require(&mut self, cond: bool, what: impl Into<String>) {
        if !cond {
            self.pass = false;
            if !self.detail.is_empty() {
                self.detail.push_str("; ");
            }
            self.detail.push_str(&what.into());
        }
    }

    fn record(&mut self, label: &str, r: &Report) {
        self.fingerprint.push_str(label);
        self.fingerprint.push_str(&r.to_json());
    }

    /// Requires the named checks of `r` to pass.
    fn checks(&mut self, label: &str, r: &Report, names: &[&str]) {
        self.record(label, r);
        for name in names {
            match r.checks.iter().find(|c| c.name == *name) {
                Some(c) if c.pass => {}
                Some(c) => self.require(
                    false,
                    format!("{label}: '{name}' failed: {}", c.witnesses.first().cloned().unwrap_or_default()),
                ),
                None => self.require(false, format!("{label}: no check named '{name}'")),
            }
        }
    }

    fn all(&mut self, label: &str, r: &Report) {
        let names: Vec<&str> = r.checks.iter().map(|c| c.name.as_str()).collect();
        self.checks(label, r, &names);
    }
}

fn defaults() -> Cutoffs {
    Cutoffs::default()
}

fn floer_dims() -> Outcome {
    let mut o = Outcome::new();
    for g in [2, 3] {
        let s = Scenario::closed(g, 10).unwrap();
        let (e0, o0) = s.graded_dims(0).unwrap();
        o.require((e0, o0) == (2, 2 * g), format!("g={g} d=0: ({e0}, {o0})"));
        for d in 1..=10 {
            let (e, od) = s.graded_dims(d).unwrap();
            o.require((e, od) == (d, d + 2 * g - 2), format!("g={g} d={d}: ({e}, {od})"));
            o.fingerprint.push_str(&format!("{g}:{d}:{e}:{od};"));
        }
    }
    o
}

fn product_laws() -> Outcome {
    let mut o = Outcome::new();
    let scenarios = [
        Scenario::closed(2, 8).unwrap(),
        Scenario::closed(3, 8).unwrap(),
        Scenario::punctured(2, 1, 8, 6).unwrap(),
        Scenario::punctured(2, 2, 8, 6).unwrap(),
        Scenario::multi_twist(3, 2, 8).unwrap(),
    ];
    for s in &scenarios {
        let gens = all_generators(s, 8).unwrap();
        let prod = |a: &FloerClass, b: &FloerClass| s.product(a, b).ok();
        let (mut pairs, mut triples) = (0usize, 0usize);
        for &(a, m) in &gens {
            for &(b, n) in &gens {
                if m + n > 8 {
                    continue;
                }
                let x = FloerClass::gen(a, m);
                let y = FloerClass::gen(b, n);
                let sign = if a.parity() == Parity::Odd && b.parity() == Parity::Odd { -1 } else { 1 };
                if let (Some(p), Some(q)) = (prod(&x, &y), prod(&y, &x)) {
                    pairs += 1;
                    o.require(p == q.scale(&rat(sign)), format!("{a:?}@{m} * {b:?}@{n} is not commutative"));
                }
                let Some(xy) = prod(&x, &y) else { continue };
                for &(c, k) in &gens {
                    if m + n + k > 8 {
                        continue;
                    }
                    let z = FloerClass::gen(c, k);
                    let Some(yz) = prod(&y, &z) else { continue };
                    if let (Some(l), Some(r)) = (prod(&xy, &z), prod(&x, &yz)) {
                        triples += 1;
                        o.require(l == r, format!("({a:?}@{m} {b:?}@{n}) {c:?}@{k} is not associative"));
                    }
                }
            }
        }
        o.fingerprint.push_str(&format!("{:?}:{pairs}:{triples};", s.kind()));
    }
    o
}

fn graded_ring() -> Outcome {
    let mut o = Outcome::new();
    let w = 10;
    let r = cubic_r();
    for g in [2, 3] {
        let s = Scenario::closed(g, w as usize).unwrap();
        let target = GradedFloer::new(&s, 1, Parity::Even).skipping(&[Gen::K]);
        let gens = vec![
            FloerClass::gen(Gen::F, 1),
            FloerClass::gen(Gen::E { i: 1, c: 1 }, 2),
            FloerClass::gen(Gen::E { i: 1, c: 1 }, 3),
        ];
        let rec = check_ring_map("graded", Side::A, &r, &target, &gens, w).unwrap();
        o.require(rec.pass, format!("g={g}: {}", rec.witnesses.first().cloned().unwrap_or_default()));
        let expected = r.quotient_dims(w);
        o.require(rec.dims_a == expected, format!("g={g}: dims {:?} vs quotient {:?}", rec.dims_a, expected));
        o.fingerprint.push_str(&serde_json::to_string(&rec).unwrap());
    }
    o
}

fn limit_ring() -> Outcome {
    let mut o = Outcome::new();
    for g in [2, 3] {
        let r = check_limit_ring(Case::Closed { genus: g }, &defaults()).unwrap();
        o.all(&format!("g={g}"), &r);
    }
    o
}

fn limit_module() -> Outcome {
    let mut o = Outcome::new();
    for g in [2, 3] {
        let r = check_closed_string(Case::Closed { genus: g }, &defaults()).unwrap();
        o.checks(&format!("g={g}"), &r, &["odd module"]);
    }
    o
}

fn punctured() -> Outcome {
    let mut o = Outcome::new();
    for k in [1, 2] {
        let r = check_closed_string(Case::Punctured { genus: 2, k }, &defaults()).unwrap();
        o.checks(&format!("k={k}"), &r, &["even ring", "fiber product oracle", "odd module"]);
    }
    o
}

fn multi_twist() -> Outcome {
    let mut o = Outcome::new();
    let r = check_closed_string(Case::MultiTwist { genus: 3, circles: 2 }, &defaults()).unwrap();
    o.checks("g=3 l=2", &r, &["even ring", "fiber product oracle"]);
    o
}

fn b_side() -> Outcome {
    let mut o = Outcome::new();
    for g in [2, 3] {
        let r = check_sheaf_side(g, Variant::Nodal { l: 1 }, &defaults()).unwrap();
        o.all(&format!("g={g}"), &r);
        o.require(r.checks.len() == 7, format!("g={g}: {} checks", r.checks.len()));
        let cfg = build_mirror(g, Variant::Nodal { l: 1 }).unwrap();
        let h1 = CechComplex::build(&cfg, Sheaf::O, 10).unwrap().cohomology().h1_dim();
        o.require(h1 == g - 1, format!("g={g}: h1(O) = {h1}"));
    }
    o
}

fn euler() -> Outcome {
    let mut o = Outcome::new();
    for g in [2, 3, 4] {
        let cfg = build_mirror(g, Variant::Closed).unwrap();
        let coh = CechComplex::build(&cfg, Sheaf::O, 10).unwrap().cohomology();
        let chi = chi_o(&cfg).unwrap();
        let diff = coh.h0_dim() as i64 - coh.h1_dim() as i64;
        o.require(diff == chi, format!("g={g}: h0 - h1 = {diff}, chi = {chi}"));
        o.require(chi == 1 - g as i64, format!("g={g}: chi = {chi}, arithmetic genus gives {}", 1 - g as i64));
        o.fingerprint.push_str(&format!("{g}:{diff}:{chi};"));
    }
    o
}

fn homogeneous() -> Outcome {
    let mut o = Outcome::new();
    let g = 2;
    let r1 = check_homogeneous(g, 1, &defaults()).unwrap();
    o.checks(
        "power 1",
        &r1,
        &[
            "graded ring",
            "graded even module R + C<K>",
            "graded odd module R + C[X]^(2g-2) + C",
            "line bundle cohomology",
        ],
    );
    let cfg = build_mirror(g, Variant::Closed).unwrap();
    for d in 0..=8u32 {
        let l = CechComplex::build(&cfg, Sheaf::Line { k: d }, 10).unwrap().cohomology();
        let t = CechComplex::build(&cfg, Sheaf::Tbal { k: d }, 10).unwrap().cohomology();
        if d >= 1 {
            o.require(l.h0_dim() == d as usize, format!("h0(L^{d}) = {}", l.h0_dim()));
            o.require(l.h1_dim() == g - 1, format!("h1(L^{d}) = {}", l.h1_dim()));
            o.require(t.h1_dim() == 0, format!("h1(Tbal L^{d}) = {}", t.h1_dim()));
        } else {
            o.require(t.h1_dim() == 1, format!("h1(Tbal) = {}", t.h1_dim()));
        }
        o.fingerprint.push_str(&format!("{d}:{}:{}:{};", l.h0_dim(), l.h1_dim(), t.h1_dim()));
    }
    let r2 = check_homogeneous(g, 2, &defaults()).unwrap();
    o.checks("power 2", &r2, &["graded ring XYZ - Y^4 - Z^2"]);
    o
}

fn open_surface() -> Outcome {
    let mut o = Outcome::new();
    let r = check_sheaf_side(2, Variant::Open { k: 1 }, &defaults()).unwrap();
    o.checks(
        "open(1)",
        &r,
        &["h0(O) is presented by A x_C C[T]^1", "h0(Tbal) with balancing F(0) - F(1) = sum_j g_j(0)"],
    );
    o
}

type Criterion = (&'static str, fn() -> Outcome);

const CRITERIA: [Criterion; 11] = [
    ("floer group dimensions", floer_dims),
    ("product table laws", product_laws),
    ("graded ring to weight 10", graded_ring),
    ("direct limit ring", limit_ring),
    ("limit module", limit_module),
    ("punctured limit", punctured),
    ("multi-twist limit", multi_twist),
    ("sheaf side on nodal configurations", b_side),
    ("euler characteristic", euler),
    ("homogeneous rings", homogeneous),
    ("open surface sheaf side", open_surface),
];

#[test]
fn acceptance() {
    let first: Vec<Outcome> = CRITERIA.iter().map(|(_, f)| f()).collect();
    let mut failures = Vec::new();
    for (i, ((title, _), o)) in CRITERIA.iter().zip(&first).enumerate() {
        let flag = if o.pass { "PASS" } else { "FAIL" };
        println!(
            "criterion {:>2} {flag} {title}{}",
            i + 1,
            if o.pass { String::new() } else { format!(": {}", o.detail) }
        );
        if !o.pass {
            failures.push(i + 1);
        }
    }
    let second: Vec<Outcome> = CRITERIA.iter().map(|(_, f)| f()).collect();
    let differing: Vec<usize> = first
        .iter()
        .zip(&second)
        .enumerate()
        .filter(|(_, (a, b))| a.fingerprint != b.fingerprint)
        .map(|(i, _)| i + 1)
        .collect();
    let det = differing.is_empty();
    println!(
        "criterion 12 {} determinism{}",
        if det { "PASS" } else { "FAIL" },
        if det { String::new() } else { format!(": criteria {differing:?} differ between runs") }
    );
    if !det {
        failures.push(12);
    }
    assert!(failures.is_empty(), "failing criteria: {failures:?}");
}
