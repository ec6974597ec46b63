//! Bases and product tables of fixed point Floer cohomology for powers of
//! Dehn twists, on closed and punctured surfaces and for simultaneous twists
//! along several circles.
//!
//! Stage `d` is the power of the twist. Even classes live in `HF^0`, odd
//! classes in `HF^1`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_linalg::{rat, zero_vec, Rat, Vector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn combine(self, other: Parity) -> Parity {
        if self == other {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// Floer generator. Circle indices `c` and puncture indices `j` start at 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Gen {
    /// The class `e_0 + e_d` (plus the `u_0` terms when punctured).
    F,
    /// Fundamental class at stage 0.
    K,
    E {
        i: usize,
        c: usize,
    },
    U {
        i: usize,
        j: usize,
    },
    /// The class `h_0 + h_d`; at stage 0 the class `g^0`.
    G {
        c: usize,
    },
    H {
        i: usize,
        c: usize,
    },
    /// The class `h_0 - v_0` attached to puncture `j`.
    Varphi {
        j: usize,
    },
    V {
        i: usize,
        j: usize,
    },
    /// Odd classes of the complement of the twist region, stage >= 1.
    MorseOdd {
        r: usize,
    },
    /// Odd class at stage 0 annihilated by the Seidel class.
    CVan,
    /// Odd classes at stage 0 mapping to `MorseOdd` under the Seidel class.
    MorseD0 {
        r: usize,
    },
}

impl Gen {
    pub fn parity(self) -> Parity {
        match self {
            Gen::F | Gen::K | Gen::E { .. } | Gen::U { .. } => Parity::Even,
            _ => Parity::Odd,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioKind {
    Closed,
    Punctured,
    MultiTwist,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Scenario {
    pub genus: usize,
    pub punctures: usize,
    pub circles: usize,
    pub max_stage: usize,
    pub index_cutoff: usize,
}

impl Scenario {
    pub fn new(genus: usize, punctures: usize, circles: usize, max_stage: usize, index_cutoff: usize) -> Result<Self> {
        if genus < 2 {
            return Err(Error::InvalidScenario(format!("genus must be at least 2, got {genus}")));
        }
        if circles == 0 || circles > genus {
            return Err(Error::InvalidScenario(format!(
                "number of twist circles must be between 1 and the genus, got {circles}"
            )));
        }
        if punctures > 0 && circles > 1 {
            return Err(Error::InvalidScenario(
                "punctures combined with several twist circles are not supported".into(),
            ));
        }
        Ok(Scenario { genus, punctures, circles, max_stage, index_cutoff })
    }

    pub fn closed(genus: usize, max_stage: usize) -> Result<Self> {
        Scenario::new(genus, 0, 1, max_stage, 0)
    }

    pub fn punctured(genus: usize, k: usize, max_stage: usize, index_cutoff: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidScenario("a punctured scenario needs k >= 1".into()));
        }
        Scenario::new(genus, k, 1, max_stage, index_cutoff)
    }

    pub fn multi_twist(genus: usize, circles: usize, max_stage: usize) -> Result<Self> {
        Scenario::new(genus, 0, circles, max_stage, 0)
    }

    pub fn kind(&self) -> ScenarioKind {
        if self.punctures > 0 {
            ScenarioKind::Punctured
        } else if self.circles > 1 {
            ScenarioKind::MultiTwist
        } else {
            ScenarioKind::Closed
        }
    }

    /// Lowest stage with a Floer group: 0 for a single twist on a closed
    /// surface, 1 otherwise.
    pub fn min_stage(&self) -> usize {
        if self.kind() == ScenarioKind::Closed {
            0
        } else {
            1
        }
    }

    /// Number of odd classes from the complement of the twist region.
    pub fn morse_odd_count(&self) -> usize {
        2 * self.genus - 1 - self.circles
    }

    pub fn assumptions(&self) -> Vec<String> {
        if self.circles > 1 {
            vec!["twist circles are disjoint and homologically linearly independent".into()]
        } else {
            Vec::new()
        }
    }

    fn check_stage(&self, d: usize) -> Result<()> {
        if d > self.max_stage {
            return Err(Error::StageOverflow { stage: d, max: self.max_stage });
        }
        if d < self.min_stage() {
            return Err(Error::InvalidScenario(format!(
                "stage {d} is below the first stage {} of this scenario",
                self.min_stage()
            )));
        }
        Ok(())
    }

    /// Ordered basis of `HF(phi^d)` in the given parity.
    pub fn basis(&self, d: usize, parity: Parity) -> Result<Vec<Gen>> {
        self.check_stage(d)?;
        let mut out = Vec::new();
        if d == 0 {
            match parity {
                Parity::Even => out.extend([Gen::F, Gen::K]),
                Parity::Odd => {
                    out.push(Gen::G { c: 1 });
                    out.push(Gen::CVan);
                    out.extend((1..=2 * self.genus - 2).map(|r| Gen::MorseD0 { r }));
                }
            }
            return Ok(out);
        }
        let circles = 1..=self.circles;
        let punctures = 1..=self.punctures;
        match parity {
            Parity::Even => {
                out.push(Gen::F);
                for c in circles {
                    out.extend((1..d).map(|i| Gen::E { i, c }));
                }
                for j in punctures {
                    out.extend((1..=self.index_cutoff).map(|i| Gen::U { i, j }));
                }
            }
            Parity::Odd => {
                out.extend(circles.clone().map(|c| Gen::G { c }));
                out.extend(punctures.clone().map(|j| Gen::Varphi { j }));
                for c in circles {
                    out.extend((1..d).map(|i| Gen::H { i, c }));
                }
                for j in punctures {
                    out.extend((1..=self.index_cutoff).map(|i| Gen::V { i, j }));
                }
                out.extend((1..=self.morse_odd_count()).map(|r| Gen::MorseOdd { r }));
            }
        }
        Ok(out)
    }

    pub fn graded_dims(&self, d: usize) -> Result<(usize, usize)> {
        Ok((self.basis(d, Parity::Even)?.len(), self.basis(d, Parity::Odd)?.len()))
    }

    pub fn is_valid(&self, g: Gen, d: usize) -> bool {
        if d > self.max_stage || d < self.min_stage() {
            return false;
        }
        let circle = |c: usize| (1..=self.circles).contains(&c);
        let puncture = |j: usize| (1..=self.punctures).contains(&j);
        match g {
            Gen::F => true,
            Gen::K | Gen::CVan => d == 0,
            Gen::MorseD0 { r } => d == 0 && (1..=2 * self.genus - 2).contains(&r),
            Gen::G { c } => circle(c) && (d > 0 || c == 1),
            Gen::E { i, c } | Gen::H { i, c } => d > 0 && circle(c) && (1..d).contains(&i),
            Gen::U { i, j } | Gen::V { i, j } => d > 0 && puncture(j) && (1..=self.index_cutoff).contains(&i),
            Gen::Varphi { j } => d > 0 && puncture(j),
            Gen::MorseOdd { r } => d > 0 && (1..=self.morse_odd_count()).contains(&r),
        }
    }

    pub fn render_gen(&self, g: Gen, d: usize) -> String {
        let multi_c = self.circles > 1;
        let multi_j = self.punctures > 1;
        let ci = |c: usize| if multi_c { format!("_{c}") } else { String::new() };
        let ij = |i: usize, j: usize| if multi_j { format!("{{{i},{j}}}") } else { i.to_string() };
        match g {
            Gen::F => format!("f^{d}"),
            Gen::K => "K".into(),
            Gen::E { i, c } if multi_c => format!("e_{{{i},{c}}}^{d}"),
            Gen::E { i, .. } => format!("e_{i}^{d}"),
            Gen::H { i, c } if multi_c => format!("h_{{{i},{c}}}^{d}"),
            Gen::H { i, .. } => format!("h_{i}^{d}"),
            Gen::G { c } => format!("g{}^{d}", ci(c)),
            Gen::U { i, j } => format!("u_{}^{d}", ij(i, j)),
            Gen::V { i, j } => format!("v_{}^{d}", ij(i, j)),
            Gen::Varphi { j } if multi_j => format!("phi_{j}^{d}"),
            Gen::Varphi { .. } => format!("phi^{d}"),
            Gen::MorseOdd { r } | Gen::MorseD0 { r } => format!("m_{r}^{d}"),
            Gen::CVan => "c_van^0".into(),
        }
    }

    /// The Seidel class: `f` at stage 1.
    pub fn seidel_class(&self) -> FloerClass {
        FloerClass::gen(Gen::F, 1)
    }

    /// Product of two classes.
    pub fn product(&self, a: &FloerClass, b: &FloerClass) -> Result<FloerClass> {
        let stage = a.stage + b.stage;
        if stage > self.max_stage {
            return Err(Error::StageOverflow { stage, max: self.max_stage });
        }
        let mut out = FloerClass::zero(stage, a.parity.combine(b.parity));
        for (ga, x) in &a.coeffs {
            for (gb, y) in &b.coeffs {
                let p = self.product_gens(*ga, a.stage, *gb, b.stage)?;
                out.add_scaled(&p, &(x * y));
            }
        }
        Ok(out)
    }

    /// Product of two generators at stages `m` and `n`.
    pub fn product_gens(&self, a: Gen, m: usize, b: Gen, n: usize) -> Result<FloerClass> {
        for (g, d) in [(a, m), (b, n)] {
            if !self.is_valid(g, d) {
                if d > self.max_stage {
                    return Err(Error::StageOverflow { stage: d, max: self.max_stage });
                }
                return Err(Error::InvalidScenario(format!(
                    "{} is not a generator of this scenario",
                    self.render_gen(g, d)
                )));
            }
        }
        let stage = m + n;
        if stage > self.max_stage {
            return Err(Error::StageOverflow { stage, max: self.max_stage });
        }
        let parity = a.parity().combine(b.parity());
        let terms = match self.table(a, m, b, n) {
            Some(t) => t,
            None => match self.table(b, n, a, m) {
                Some(t) if a.parity() == Parity::Odd && b.parity() == Parity::Odd => {
                    t.into_iter().map(|(g, c)| (g, -c)).collect()
                }
                Some(t) => t,
                None => Vec::new(),
            },
        };
        let mut out = FloerClass::zero(stage, parity);
        for (g, c) in terms {
            if let Gen::U { i, .. } | Gen::V { i, .. } = g {
                if i > self.index_cutoff {
                    return Err(Error::IndexOverflow { index: i, max: self.index_cutoff });
                }
            }
            out.add_term(g, c);
        }
        Ok(out)
    }

    /// Product rules with `a` on the left. Returns `None` when the pair is
    /// only listed in the other order or the product is zero.
    fn table(&self, a: Gen, m: usize, b: Gen, n: usize) -> Option<Vec<(Gen, Rat)>> {
        use Gen::*;
        let one = || Rat::one();
        let t = |g: Gen| vec![(g, one())];
        let all_circles = 1..=self.circles;
        match (a, b) {
            // Stage 0 unit and fundamental class.
            (F, _) if m == 0 => Some(t(b)),
            (_, F) if n == 0 => Some(t(a)),
            (K, _) => Some(Vec::new()),

            // Stage 0 odd classes.
            (G { .. }, E { i, c }) if m == 0 => Some(t(H { i, c })),
            (G { .. }, F) if m == 0 => Some(t(G { c: 1 })),
            (F, MorseD0 { r }) => Some(t(MorseOdd { r })),
            (G { .. }, CVan) if m == 0 && n == 0 => Some(t(K)),
            (MorseD0 { r }, MorseD0 { r: s }) if r % 2 == 1 && s == r + 1 => Some(t(K)),

            // Twist region.
            (E { i, c }, E { i: j, c: c2 }) if c == c2 => Some(t(E { i: i + j, c })),
            (H { i, c }, E { i: j, c: c2 }) if c == c2 => Some(t(H { i: i + j, c })),
            (F, E { i: j, c }) if m > 0 => Some(vec![(E { i: j, c }, one()), (E { i: j + m, c }, one())]),
            (G { c }, E { i: j, c: c2 }) if m > 0 && c == c2 => {
                Some(vec![(H { i: j, c }, one()), (H { i: j + m, c }, one())])
            }
            (F, F) => {
                let mut v: Vec<(Gen, Rat)> = Vec::new();
                for c in all_circles {
                    v.push((E { i: m, c }, one()));
                    v.push((E { i: n, c }, one()));
                }
                v.push((F, one()));
                Some(v)
            }
            (G { c }, F) if m > 0 => Some(vec![(H { i: m, c }, one()), (H { i: n, c }, one()), (G { c }, one())]),
            (F, H { i: j, c }) => Some(vec![(H { i: j, c }, one()), (H { i: j + m, c }, one())]),
            (F, MorseOdd { r }) => Some(t(MorseOdd { r })),

            // Puncture region.
            (U { i, j }, U { i: i2, j: j2 }) if j == j2 => Some(t(U { i: i + i2, j })),
            (U { i, j }, V { i: i2, j: j2 }) if j == j2 => Some(t(V { i: i + i2, j })),
            (F, U { i, j }) => Some(t(U { i, j })),
            (F, V { i, j }) => Some(t(V { i, j })),
            (G { .. }, U { i, j }) => Some(t(V { i, j })),
            (F, Varphi { j }) => Some(vec![(Varphi { j }, one()), (H { i: m, c: 1 }, one())]),
            (E { i, c }, Varphi { .. }) => Some(t(H { i, c })),
            (U { i, j }, Varphi { j: j2 }) if j == j2 => Some(vec![(V { i, j }, rat(-1))]),

            _ => None,
        }
    }
}

/// Finite rational combination of generators at one stage and parity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FloerClass {
    pub stage: usize,
    pub parity: Parity,
    coeffs: BTreeMap<Gen, Rat>,
}

impl FloerClass {
    pub fn zero(stage: usize, parity: Parity) -> Self {
        FloerClass { stage, parity, coeffs: BTreeMap::new() }
    }

    pub fn gen(g: Gen, stage: usize) -> Self {
        let mut c = FloerClass::zero(stage, g.parity());
        c.add_term(g, Rat::one());
        c
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, g: Gen) -> Rat {
        self.coeffs.get(&g).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Gen, &Rat)> {
        self.coeffs.iter()
    }

    pub fn add_term(&mut self, g: Gen, c: Rat) {
        assert_eq!(g.parity(), self.parity, "parity mismatch");
        let v = self.coeff(g) + c;
        if v.is_zero() {
            self.coeffs.remove(&g);
        } else {
            self.coeffs.insert(g, v);
        }
    }

    pub fn add_scaled(&mut self, other: &FloerClass, c: &Rat) {
        assert_eq!(self.stage, other.stage, "stage mismatch");
        for (g, x) in &other.coeffs {
            self.add_term(*g, x * c);
        }
    }

    pub fn scale(&self, c: &Rat) -> FloerClass {
        let mut out = FloerClass::zero(self.stage, self.parity);
        out.add_scaled(self, c);
        out
    }

    pub fn sub(&self, other: &FloerClass) -> FloerClass {
        let mut out = self.clone();
        out.add_scaled(other, &rat(-1));
        out
    }

    /// Coordinates against an ordered basis of the same stage.
    pub fn coords(&self, basis: &[Gen]) -> Vector {
        let mut v = zero_vec(basis.len());
        for (k, g) in basis.iter().enumerate() {
            if let Some(x) = self.coeffs.get(g) {
                v[k] = x.clone();
            }
        }
        debug_assert!(self.coeffs.keys().all(|g| basis.contains(g)), "class outside basis");
        v
    }

    pub fn from_coords(stage: usize, parity: Parity, basis: &[Gen], v: &[Rat]) -> Self {
        let mut out = FloerClass::zero(stage, parity);
        for (g, x) in basis.iter().zip(v) {
            out.add_term(*g, x.clone());
        }
        out
    }

    pub fn render(&self, s: &Scenario) -> String {
        if self.coeffs.is_empty() {
            return "0".into();
        }
        let mut terms: Vec<(String, &Rat)> =
            self.coeffs.iter().map(|(g, c)| (s.render_gen(*g, self.stage), c)).collect();
        terms.sort_by(|a, b| a.0.cmp(&b.0));
        let mut out = String::new();
        for (k, (label, c)) in terms.into_iter().enumerate() {
            let neg = c < &Rat::zero();
            let a = if neg { -c.clone() } else { c.clone() };
            if k > 0 {
                out.push_str(if neg { " - " } else { " + " });
            } else if neg {
                out.push('-');
            }
            if a.is_one() {
                out.push_str(&label);
            } else {
                out.push_str(&format!("{a}*{label}"));
            }
        }
        out
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

/// Every generator of the scenario at stages `0..=max_stage`, with its stage.
pub fn all_generators(s: &Scenario, max_stage: usize) -> Result<Vec<(Gen, usize)>> {
    let mut out = Vec::new();
    for d in s.min_stage()..=max_stage.min(s.max_stage) {
        for p in [Parity::Even, Parity::Odd] {
            out.extend(s.basis(d, p)?.into_iter().map(|g| (g, d)));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn closed(g: usize) -> Scenario {
        Scenario::closed(g, 12).unwrap()
    }

    #[test]
    fn closed_bases() {
        let s = closed(2);
        assert_eq!(s.basis(3, Parity::Even).unwrap(), vec![Gen::F, Gen::E { i: 1, c: 1 }, Gen::E { i: 2, c: 1 }]);
        let odd = s.basis(3, Parity::Odd).unwrap();
        assert_eq!(odd.len(), 5);
        assert_eq!(odd[0], Gen::G { c: 1 });
        assert_eq!(s.graded_dims(1).unwrap(), (1, 3));
        assert_eq!(closed(3).graded_dims(4).unwrap(), (4, 8));
        assert_eq!(s.graded_dims(0).unwrap(), (2, 4));
    }

    #[test]
    fn punctured_basis_includes_wrapping_classes() {
        let s = Scenario::punctured(2, 1, 8, 4).unwrap();
        let even = s.basis(2, Parity::Even).unwrap();
        assert_eq!(even.len(), 6);
        assert_eq!(even[2], Gen::U { i: 1, j: 1 });
        assert!(s.basis(0, Parity::Even).is_err());
    }

    #[test]
    fn listed_products() {
        let s = closed(2);
        let e = |i, d| FloerClass::gen(Gen::E { i, c: 1 }, d);
        let f = |d| FloerClass::gen(Gen::F, d);
        assert_eq!(s.product(&e(1, 2), &e(1, 2)).unwrap(), e(2, 4));
        let mut ff = f(2);
        ff.add_term(Gen::E { i: 1, c: 1 }, rat(2));
        assert_eq!(s.product(&f(1), &f(1)).unwrap(), ff);
        assert_eq!(ff.render(&s), "2*e_1^2 + f^2");
        let h = |i, d| FloerClass::gen(Gen::H { i, c: 1 }, d);
        assert!(s.product(&h(1, 2), &h(1, 3)).unwrap().is_zero());
        let k = FloerClass::gen(Gen::K, 0);
        assert!(s.product(&k, &e(1, 2)).unwrap().is_zero());
    }

    #[test]
    fn punctured_products() {
        let s = Scenario::punctured(2, 1, 8, 4).unwrap();
        let u = FloerClass::gen(Gen::U { i: 1, j: 1 }, 1);
        let phi = FloerClass::gen(Gen::Varphi { j: 1 }, 1);
        let p = s.product(&u, &phi).unwrap();
        assert_eq!(p.coeff(Gen::V { i: 1, j: 1 }), rat(-1));
        assert_eq!(p.stage, 2);
        let u3 = FloerClass::gen(Gen::U { i: 3, j: 1 }, 1);
        assert!(matches!(s.product(&u3, &u3), Err(Error::IndexOverflow { index: 6, max: 4 })));
    }

    #[test]
    fn stage_overflow_is_reported() {
        let s = Scenario::closed(2, 3).unwrap();
        let f = FloerClass::gen(Gen::F, 2);
        assert!(matches!(s.product(&f, &f), Err(Error::StageOverflow { stage: 4, max: 3 })));
    }

    #[test]
    fn stage_zero_cup_products() {
        let s = closed(2);
        let g0 = FloerClass::gen(Gen::G { c: 1 }, 0);
        let cv = FloerClass::gen(Gen::CVan, 0);
        assert_eq!(s.product(&g0, &cv).unwrap(), FloerClass::gen(Gen::K, 0));
        assert_eq!(s.product(&cv, &g0).unwrap().coeff(Gen::K), rat(-1));
        let m1 = FloerClass::gen(Gen::MorseD0 { r: 1 }, 0);
        let m2 = FloerClass::gen(Gen::MorseD0 { r: 2 }, 0);
        assert_eq!(s.product(&m1, &m2).unwrap(), FloerClass::gen(Gen::K, 0));
        let f1 = s.seidel_class();
        assert!(s.product(&f1, &cv).unwrap().is_zero());
        assert_eq!(s.product(&f1, &m1).unwrap(), FloerClass::gen(Gen::MorseOdd { r: 1 }, 1));
    }

    #[test]
    fn invalid_scenarios_are_rejected() {
        assert!(Scenario::closed(1, 4).is_err());
        assert!(Scenario::multi_twist(2, 3, 4).is_err());
        assert!(Scenario::new(3, 1, 2, 4, 4).is_err());
    }
}
