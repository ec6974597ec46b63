//! Direct limits of Floer groups along multiplication by the Seidel class.
//!
//! Elements are represented by a class at a finite stage. Equality is decided
//! after pushing both sides to a common stage plus a fixed slack.

use num_traits::{One, Zero};

use crate::compare::{FilteredTarget, ModuleTarget};
use crate::error::{Error, Result};
use crate::exact_linalg::{rank_of_vectors, Rat, Vector};
use crate::floer::{FloerClass, Gen, Parity, Scenario};

#[derive(Clone, Debug)]
pub struct DirectLimit<'a> {
    pub scenario: &'a Scenario,
    pub slack: usize,
}

impl<'a> DirectLimit<'a> {
    pub fn new(scenario: &'a Scenario, slack: usize) -> Self {
        DirectLimit { scenario, slack }
    }

    /// The unit, carried at stage 0 even when the scenario has no stage 0.
    pub fn unit(&self) -> FloerClass {
        FloerClass::gen(Gen::F, 0)
    }

    fn is_virtual(&self, x: &FloerClass) -> bool {
        x.stage < self.scenario.min_stage()
    }

    fn virtual_scalar(&self, x: &FloerClass) -> Result<Rat> {
        if x.terms().any(|(g, _)| *g != Gen::F) {
            return Err(Error::Invalid("only multiples of the unit exist below the first stage".into()));
        }
        Ok(x.coeff(Gen::F))
    }

    /// Image of `x` at stage `t` under repeated multiplication by the Seidel class.
    pub fn push(&self, x: &FloerClass, t: usize) -> Result<FloerClass> {
        if t < x.stage {
            return Err(Error::Invalid(format!("cannot push stage {} down to {t}", x.stage)));
        }
        if t > self.scenario.max_stage {
            return Err(Error::StageOverflow { stage: t, max: self.scenario.max_stage });
        }
        if self.is_virtual(x) && t > x.stage {
            let c = self.virtual_scalar(x)?;
            return Ok(self.push(&self.scenario.seidel_class(), t)?.scale(&c));
        }
        let s = self.scenario.seidel_class();
        let mut y = x.clone();
        while y.stage < t {
            y = self.scenario.product(&s, &y)?;
        }
        Ok(y)
    }

    pub fn mul(&self, a: &FloerClass, b: &FloerClass) -> Result<FloerClass> {
        if self.is_virtual(a) {
            return Ok(b.scale(&self.virtual_scalar(a)?));
        }
        if self.is_virtual(b) {
            return Ok(a.scale(&self.virtual_scalar(b)?));
        }
        self.scenario.product(a, b)
    }

    /// Equality in the limit, certified at the larger stage plus the slack.
    /// Returns the certifying stage alongside the verdict.
    pub fn eq(&self, a: &FloerClass, b: &FloerClass) -> Result<(bool, usize)> {
        if a.parity != b.parity && !(a.is_zero() && b.is_zero()) {
            return Ok((false, a.stage.max(b.stage)));
        }
        let t = a.stage.max(b.stage).max(self.scenario.min_stage()) + self.slack;
        let pa = self.push(a, t)?;
        let pb = self.push(b, t)?;
        Ok((pa == pb, t))
    }

    /// Stage at which level `w` is represented.
    pub fn level_stage(&self, w: u32) -> usize {
        (w as usize).max(1)
    }

    /// Stage at which level `w` is compared.
    pub fn compare_stage(&self, w: u32) -> usize {
        self.level_stage(w) + self.slack
    }

    /// Classes spanning level `w` of the filtration on the limit. Level 0 is
    /// the image of the stage-independent classes; level `w >= 1` is the image
    /// of stage `w`, keeping wrapping classes of index at most `w`.
    pub fn level_classes(&self, w: u32, parity: Parity) -> Result<Vec<FloerClass>> {
        let d = self.level_stage(w);
        let w = w as usize;
        let keep = |g: &Gen| match *g {
            Gen::F | Gen::G { .. } | Gen::MorseOdd { .. } => true,
            Gen::U { i, .. } | Gen::V { i, .. } => w > 0 && i <= w,
            _ => w > 0,
        };
        let basis = self.scenario.basis(d, parity)?;
        let mut out: Vec<FloerClass> = basis.iter().cloned().filter(keep).map(|g| FloerClass::gen(g, d)).collect();
        if w == 0 {
            // phi_j - phi_1 = v_{0,1} - v_{0,j} is fixed by the Seidel class.
            let phis: Vec<Gen> = basis.into_iter().filter(|g| matches!(g, Gen::Varphi { .. })).collect();
            for g in phis.iter().skip(1) {
                let mut x = FloerClass::gen(*g, d);
                x.add_term(phis[0], -Rat::one());
                out.push(x);
            }
        }
        Ok(out)
    }

    pub fn coords(&self, x: &FloerClass, w: u32) -> Result<Vector> {
        let t = self.compare_stage(w);
        if x.stage > t {
            return Err(Error::WeightOverflow { weight: x.stage as u32, max: t as u32 });
        }
        let basis = self.scenario.basis(t, x.parity)?;
        Ok(self.push(x, t)?.coords(&basis))
    }

    /// Level `w` read at the comparison stage. The image one stage earlier
    /// must have the same rank, so at least one stage of slack is needed.
    pub fn level_span(&self, w: u32, parity: Parity) -> Result<Vec<Vector>> {
        if self.slack == 0 {
            return Err(Error::TruncationLeak(format!(
                "level {w} has no stage headroom: slack 0 cannot certify the limit"
            )));
        }
        let classes = self.level_classes(w, parity)?;
        let span: Vec<Vector> = classes.iter().map(|x| self.coords(x, w)).collect::<Result<_>>()?;
        let t = self.compare_stage(w);
        let before: Vec<Vector> = classes
            .iter()
            .map(|x| Ok(self.push(x, t - 1)?.coords(&self.scenario.basis(t - 1, parity)?)))
            .collect::<Result<_>>()?;
        let n = self.scenario.basis(t - 1, parity)?.len();
        let (r0, r1) = (rank_of_vectors(n, &before), rank_of_vectors(span.first().map_or(0, Vec::len), &span));
        if r0 != r1 {
            return Err(Error::TruncationLeak(format!(
                "level {w} image has rank {r0} at stage {} but {r1} at stage {t}",
                t - 1
            )));
        }
        Ok(span)
    }

    pub fn render(&self, v: &[Rat], w: u32, parity: Parity) -> String {
        let t = self.compare_stage(w);
        match self.scenario.basis(t, parity) {
            Ok(basis) => FloerClass::from_coords(t, parity, &basis, v).render(self.scenario),
            Err(_) => crate::compare::render_sparse(v),
        }
    }

    /// Dimensions of the image of stage `d` pushed `t` stages further.
    pub fn pushed_image_dim(&self, d: usize, t: usize, parity: Parity) -> Result<usize> {
        let vecs: Vec<Vector> = self
            .scenario
            .basis(d, parity)?
            .into_iter()
            .map(|g| {
                let y = self.push(&FloerClass::gen(g, d), d + t)?;
                Ok(y.coords(&self.scenario.basis(d + t, parity)?))
            })
            .collect::<Result<_>>()?;
        let dim = self.scenario.basis(d + t, parity)?.len();
        Ok(rank_of_vectors(dim, &vecs))
    }
}

/// The even limit as a filtered ring.
pub struct LimitRing<'a>(pub DirectLimit<'a>);

impl FilteredTarget for LimitRing<'_> {
    type Elem = FloerClass;

    fn one(&self) -> Result<FloerClass> {
        Ok(self.0.unit())
    }

    fn mul(&self, a: &FloerClass, b: &FloerClass) -> Result<FloerClass> {
        self.0.mul(a, b)
    }

    fn coords(&self, e: &FloerClass, level: u32) -> Result<Vector> {
        self.0.coords(e, level)
    }

    fn level_span(&self, level: u32) -> Result<Vec<Vector>> {
        self.0.level_span(level, Parity::Even)
    }

    fn describe_level(&self, level: u32) -> String {
        format!("stage {}", self.0.compare_stage(level))
    }

    fn render_coords(&self, v: &[Rat], level: u32) -> String {
        self.0.render(v, level, Parity::Even)
    }
}

/// The odd limit as a filtered module over the even limit.
pub struct LimitModule<'a>(pub DirectLimit<'a>);

impl ModuleTarget for LimitModule<'_> {
    type Ring = FloerClass;
    type Elem = FloerClass;

    fn ring_one(&self) -> Result<FloerClass> {
        Ok(self.0.unit())
    }

    fn ring_mul(&self, a: &FloerClass, b: &FloerClass) -> Result<FloerClass> {
        self.0.mul(a, b)
    }

    fn act(&self, r: &FloerClass, m: &FloerClass) -> Result<FloerClass> {
        self.0.mul(r, m)
    }

    fn coords(&self, m: &FloerClass, level: u32) -> Result<Vector> {
        self.0.coords(m, level)
    }

    fn level_span(&self, level: u32) -> Result<Vec<Vector>> {
        self.0.level_span(level, Parity::Odd)
    }

    fn render_coords(&self, v: &[Rat], level: u32) -> String {
        self.0.render(v, level, Parity::Odd)
    }
}

/// Direct sum of Floer groups over stages `0, step, 2*step, ...`, graded by stage.
pub struct GradedFloer<'a> {
    pub scenario: &'a Scenario,
    pub step: usize,
    pub parity: Parity,
    /// Generators left out of the level spans, e.g. `K` when checking the
    /// subring generated in positive stages.
    pub skip: Vec<Gen>,
}

impl<'a> GradedFloer<'a> {
    pub fn new(scenario: &'a Scenario, step: usize, parity: Parity) -> Self {
        GradedFloer { scenario, step, parity, skip: Vec::new() }
    }

    pub fn skipping(mut self, gens: &[Gen]) -> Self {
        self.skip.extend_from_slice(gens);
        self
    }

    fn stages(&self, level: u32) -> impl Iterator<Item = usize> + '_ {
        (0..=level as usize).filter(move |d| d % self.step == 0)
    }

    fn offset(&self, stage: usize, parity: Parity) -> Result<usize> {
        let mut off = 0;
        for d in self.stages(stage as u32).filter(|&d| d < stage) {
            off += self.scenario.basis(d, parity)?.len();
        }
        Ok(off)
    }

    fn total(&self, level: u32, parity: Parity) -> Result<usize> {
        self.offset(level as usize + 1, parity)
    }

    fn place(&self, e: &FloerClass, level: u32) -> Result<Vector> {
        if e.stage > level as usize {
            return Err(Error::WeightOverflow { weight: e.stage as u32, max: level });
        }
        if !e.stage.is_multiple_of(self.step) {
            return Err(Error::Invalid(format!("stage {} is not a multiple of {}", e.stage, self.step)));
        }
        let mut v = vec![Rat::zero(); self.total(level, e.parity)?];
        let off = self.offset(e.stage, e.parity)?;
        let c = e.coords(&self.scenario.basis(e.stage, e.parity)?);
        for (k, x) in c.into_iter().enumerate() {
            v[off + k] = x;
        }
        Ok(v)
    }

    fn span(&self, level: u32, parity: Parity) -> Result<Vec<Vector>> {
        let n = self.total(level, parity)?;
        let mut out = Vec::new();
        for d in self.stages(level) {
            let off = self.offset(d, parity)?;
            for (k, g) in self.scenario.basis(d, parity)?.iter().enumerate() {
                if !self.skip.contains(g) {
                    let mut v = vec![Rat::zero(); n];
                    v[off + k] = Rat::one();
                    out.push(v);
                }
            }
        }
        Ok(out)
    }

    fn render(&self, v: &[Rat], level: u32, parity: Parity) -> String {
        let mut parts = Vec::new();
        for d in self.stages(level) {
            let (Ok(off), Ok(basis)) = (self.offset(d, parity), self.scenario.basis(d, parity)) else {
                continue;
            };
            let c = FloerClass::from_coords(d, parity, &basis, &v[off..off + basis.len()]);
            if !c.is_zero() {
                parts.push(c.render(self.scenario));
            }
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

impl FilteredTarget for GradedFloer<'_> {
    type Elem = FloerClass;

    fn one(&self) -> Result<FloerClass> {
        Ok(FloerClass::gen(Gen::F, 0))
    }

    fn mul(&self, a: &FloerClass, b: &FloerClass) -> Result<FloerClass> {
        self.scenario.product(a, b)
    }

    fn coords(&self, e: &FloerClass, level: u32) -> Result<Vector> {
        self.place(e, level)
    }

    fn level_span(&self, level: u32) -> Result<Vec<Vector>> {
        self.span(level, self.parity)
    }

    fn describe_level(&self, level: u32) -> String {
        format!("stages <= {level}")
    }

    fn render_coords(&self, v: &[Rat], level: u32) -> String {
        self.render(v, level, self.parity)
    }
}

impl ModuleTarget for GradedFloer<'_> {
    type Ring = FloerClass;
    type Elem = FloerClass;

    fn ring_one(&self) -> Result<FloerClass> {
        Ok(FloerClass::gen(Gen::F, 0))
    }

    fn ring_mul(&self, a: &FloerClass, b: &FloerClass) -> Result<FloerClass> {
        self.scenario.product(a, b)
    }

    fn act(&self, r: &FloerClass, m: &FloerClass) -> Result<FloerClass> {
        self.scenario.product(r, m)
    }

    fn coords(&self, m: &FloerClass, level: u32) -> Result<Vector> {
        self.place(m, level)
    }

    fn level_span(&self, level: u32) -> Result<Vec<Vector>> {
        self.span(level, self.parity)
    }

    fn render_coords(&self, v: &[Rat], level: u32) -> String {
        self.render(v, level, self.parity)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_linalg::rat;

    #[test]
    fn push_and_equality() {
        let s = Scenario::closed(2, 12).unwrap();
        let lim = DirectLimit::new(&s, 4);
        let x = FloerClass::gen(Gen::E { i: 1, c: 1 }, 2);
        let px = lim.push(&x, 3).unwrap();
        assert!(lim.eq(&x, &px).unwrap().0);
        let f = FloerClass::gen(Gen::F, 1);
        let (same, stage) = lim.eq(&f, &x).unwrap();
        assert!(!same);
        assert_eq!(stage, 6);
    }

    #[test]
    fn nodal_cubic_relation_holds_in_the_limit() {
        let s = Scenario::closed(2, 12).unwrap();
        let lim = DirectLimit::new(&s, 4);
        let y = FloerClass::gen(Gen::E { i: 1, c: 1 }, 2);
        let z = FloerClass::gen(Gen::E { i: 1, c: 1 }, 3);
        let yz = lim.mul(&y, &z).unwrap();
        let y3 = lim.mul(&lim.mul(&y, &y).unwrap(), &y).unwrap();
        let z2 = lim.mul(&z, &z).unwrap();
        let lhs = lim.push(&yz, 6).unwrap();
        let mut rhs = y3;
        rhs.add_scaled(&z2, &rat(1));
        assert!(lim.eq(&lhs, &rhs).unwrap().0);
    }

    #[test]
    fn virtual_unit_in_punctured_case() {
        let s = Scenario::punctured(2, 1, 8, 8).unwrap();
        let lim = DirectLimit::new(&s, 2);
        let u = FloerClass::gen(Gen::U { i: 1, j: 1 }, 1);
        assert_eq!(lim.mul(&lim.unit(), &u).unwrap(), u);
        assert_eq!(lim.push(&lim.unit(), 1).unwrap(), FloerClass::gen(Gen::F, 1));
        let uu = lim.mul(&u, &u).unwrap();
        assert_eq!(uu, FloerClass::gen(Gen::U { i: 2, j: 1 }, 2));
    }

    #[test]
    fn even_images_stabilize() {
        let s = Scenario::closed(2, 12).unwrap();
        let lim = DirectLimit::new(&s, 4);
        for d in 1..=6 {
            assert_eq!(lim.pushed_image_dim(d, 4, Parity::Even).unwrap(), d);
        }
    }
}
