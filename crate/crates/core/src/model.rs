//! Concrete module models built from polynomial summands.
//!
//! A filtered model is a subspace of a sum of one-variable polynomial
//! summands and constant summands cut out by linear conditions on values at
//! points. The filtration is by degree in the polynomial summands. Ring
//! elements act summand by summand through a multiplier.
//!
//! The graded model realizes `R = C[X,Y,Z]/(XYZ - Y^3 - Z^2)` in degree `d`
//! as polynomials `f(z)` of degree at most `d` with `f(0) = [z^d] f`, via
//! `X = 1 + z`, `Y = z`, `Z = z^2`.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::compare::ModuleTarget;
use crate::error::{Error, Result};
use crate::exact_linalg::{kernel_basis, rat, unit_vec, zero_vec, Mat, Rat, Vector};

fn poly_mul(a: &[Rat], b: &[Rat]) -> Vector {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = zero_vec(a.len() + b.len() - 1);
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn trim(mut v: Vector) -> Vector {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    v
}

fn poly_eval(p: &[Rat], x: &Rat) -> Rat {
    p.iter().rev().fold(Rat::zero(), |acc, c| acc * x + c)
}

fn ints(cs: &[i64]) -> Vector {
    trim(cs.iter().map(|&c| rat(c)).collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SummandKind {
    Poly,
    Const,
}

#[derive(Clone, Debug, Serialize)]
pub struct Summand {
    pub name: String,
    pub kind: SummandKind,
}

/// `sum coeff * F_summand(point) = 0`.
#[derive(Clone, Debug)]
pub struct Condition {
    pub terms: Vec<(usize, Rat, Rat)>,
}

/// Element or ring multiplier: one coefficient vector per summand.
pub type Parts = Vec<Vector>;

#[derive(Clone, Debug)]
pub struct ModuleModel {
    pub name: String,
    pub summands: Vec<Summand>,
    pub conditions: Vec<Condition>,
    /// Ring generator name and its multiplier on each summand.
    pub ring_gens: Vec<(String, Parts)>,
    /// Module generator name, weight and element.
    pub module_gens: Vec<(String, u32, Parts)>,
    pub cap: usize,
}

impl ModuleModel {
    fn poly(name: &str) -> Summand {
        Summand { name: name.into(), kind: SummandKind::Poly }
    }

    fn consts(count: usize) -> Vec<Summand> {
        (1..=count).map(|r| Summand { name: format!("c{r}"), kind: SummandKind::Const }).collect()
    }

    fn zeros(&self) -> Parts {
        vec![Vec::new(); self.summands.len()]
    }

    fn single(&self, s: usize, v: Vector) -> Parts {
        let mut p = self.zeros();
        p[s] = trim(v);
        p
    }

    /// `A (+) C^consts` with `A` the polynomials `F(W)` with `F(0) = F(1)`,
    /// `Y = W - W^2`, `Z = W^2 - W^3`, and the constants acted on through the
    /// value at the node.
    pub fn closed(consts: usize, cap: usize) -> Self {
        let mut summands = vec![Self::poly("C[W]")];
        summands.extend(Self::consts(consts));
        let mut m = ModuleModel {
            name: format!("A + C^{consts}"),
            summands,
            conditions: vec![Condition { terms: vec![(0, rat(0), rat(1)), (0, rat(1), rat(-1))] }],
            ring_gens: Vec::new(),
            module_gens: Vec::new(),
            cap,
        };
        m.ring_gens =
            vec![("Y".into(), m.single(0, ints(&[0, 1, -1]))), ("Z".into(), m.single(0, ints(&[0, 0, 1, -1])))];
        m.module_gens.push(("1".into(), 0, m.single(0, ints(&[1]))));
        for r in 1..=consts {
            m.module_gens.push((format!("c{r}"), 0, m.single(r, ints(&[1]))));
        }
        m
    }

    /// `(C[W] x' prod C[T_j]) (+) C^consts` with the balancing condition
    /// `F(0) - F(1) = sum_j g_j(0)`.
    pub fn punctured(k: usize, consts: usize, cap: usize) -> Self {
        let mut summands = vec![Self::poly("C[W]")];
        summands.extend((1..=k).map(|j| Self::poly(&format!("C[T{j}]"))));
        summands.extend(Self::consts(consts));
        let mut cond = vec![(0, rat(0), rat(1)), (0, rat(1), rat(-1))];
        cond.extend((1..=k).map(|j| (j, rat(0), rat(-1))));
        let mut m = ModuleModel {
            name: format!("C[W] x' C[T]^{k} + C^{consts}"),
            summands,
            conditions: vec![Condition { terms: cond }],
            ring_gens: Vec::new(),
            module_gens: Vec::new(),
            cap,
        };
        m.ring_gens =
            vec![("Y".into(), m.single(0, ints(&[0, 1, -1]))), ("Z".into(), m.single(0, ints(&[0, 0, 1, -1])))];
        for j in 1..=k {
            m.ring_gens.push((format!("T{j}"), m.single(j, ints(&[0, 1]))));
        }
        m.module_gens.push(("g".into(), 0, m.single(0, ints(&[1]))));
        for j in 1..=k {
            let mut p = m.single(0, ints(&[0, 1]));
            p[j] = ints(&[-1]);
            m.module_gens.push((format!("phi{j}"), 1, p));
        }
        for j in 1..=k {
            m.module_gens.push((format!("v{j}"), 1, m.single(j, ints(&[0, 1]))));
        }
        for j in 2..=k {
            let mut p = vec![Vector::new(); m.summands.len()];
            p[1] = ints(&[1]);
            p[j] = ints(&[-1]);
            m.module_gens.push((format!("phi{j}-phi1"), 0, p));
        }
        for r in 1..=consts {
            m.module_gens.push((format!("c{r}"), 0, m.single(k + r, ints(&[1]))));
        }
        m
    }

    /// `(A x_C ... x_C A) (+) C^consts` with `l` factors.
    pub fn multi(l: usize, consts: usize, cap: usize) -> Self {
        let mut summands: Vec<Summand> = (1..=l).map(|c| Self::poly(&format!("C[W{c}]"))).collect();
        summands.extend(Self::consts(consts));
        let mut conditions: Vec<Condition> =
            (0..l).map(|c| Condition { terms: vec![(c, rat(0), rat(1)), (c, rat(1), rat(-1))] }).collect();
        for c in 1..l {
            conditions.push(Condition { terms: vec![(0, rat(0), rat(1)), (c, rat(0), rat(-1))] });
        }
        let mut m = ModuleModel {
            name: format!("A^(x{l}) + C^{consts}"),
            summands,
            conditions,
            ring_gens: Vec::new(),
            module_gens: Vec::new(),
            cap,
        };
        for c in 0..l {
            m.ring_gens.push((format!("Y{}", c + 1), m.single(c, ints(&[0, 1, -1]))));
            m.ring_gens.push((format!("Z{}", c + 1), m.single(c, ints(&[0, 0, 1, -1]))));
        }
        let mut one = m.zeros();
        for p in one.iter_mut().take(l) {
            *p = ints(&[1]);
        }
        m.module_gens.push(("1".into(), 0, one));
        for r in 1..=consts {
            m.module_gens.push((format!("c{r}"), 0, m.single(l + r - 1, ints(&[1]))));
        }
        m
    }

    pub fn generator_weights(&self) -> Vec<(String, u32)> {
        self.module_gens.iter().map(|(n, w, _)| (n.clone(), *w)).collect()
    }

    pub fn ring_images(&self) -> Vec<Parts> {
        self.ring_gens.iter().map(|g| g.1.clone()).collect()
    }

    pub fn module_images(&self) -> Vec<Parts> {
        self.module_gens.iter().map(|g| g.2.clone()).collect()
    }

    fn width(&self, s: usize) -> usize {
        match self.summands[s].kind {
            SummandKind::Poly => self.cap + 1,
            SummandKind::Const => 1,
        }
    }

    fn offsets(&self) -> (Vec<usize>, usize) {
        let mut offs = Vec::new();
        let mut total = 0;
        for s in 0..self.summands.len() {
            offs.push(total);
            total += self.width(s);
        }
        (offs, total)
    }

    /// Elements of level `w` satisfying the conditions, as coordinate vectors.
    fn level_basis(&self, w: usize) -> Vector2 {
        let (offs, total) = self.offsets();
        let mut free: Vec<usize> = Vec::new();
        for (s, sm) in self.summands.iter().enumerate() {
            match sm.kind {
                SummandKind::Poly => free.extend((0..=w.min(self.cap)).map(|d| offs[s] + d)),
                SummandKind::Const => free.push(offs[s]),
            }
        }
        let rows: Vec<Vector> = self
            .conditions
            .iter()
            .map(|c| {
                free.iter()
                    .map(|&col| {
                        let mut x = Rat::zero();
                        for (s, pt, coeff) in &c.terms {
                            if col >= offs[*s] && col < offs[*s] + self.width(*s) {
                                let d = col - offs[*s];
                                let val = match self.summands[*s].kind {
                                    SummandKind::Poly => num_traits::Pow::pow(pt, d as u64),
                                    SummandKind::Const => Rat::one(),
                                };
                                x += coeff * val;
                            }
                        }
                        x
                    })
                    .collect()
            })
            .collect();
        let kernel = if rows.is_empty() {
            (0..free.len()).map(|i| unit_vec(free.len(), i)).collect()
        } else {
            kernel_basis(&Mat::from_row_vectors(free.len(), &rows))
        };
        kernel
            .into_iter()
            .map(|k| {
                let mut v = zero_vec(total);
                for (x, &c) in k.into_iter().zip(&free) {
                    v[c] = x;
                }
                v
            })
            .collect()
    }
}

type Vector2 = Vec<Vector>;

fn render_univariate(coeffs: &[Rat], var: &str) -> String {
    let mut p = crate::poly::Poly::zero(1);
    for (d, c) in coeffs.iter().enumerate() {
        p.add_term(vec![d as u32], c.clone());
    }
    p.render(&[var.to_string()], &[1])
}

impl ModuleTarget for ModuleModel {
    type Ring = Parts;
    type Elem = Parts;

    fn ring_one(&self) -> Result<Parts> {
        Ok(vec![ints(&[1]); self.summands.len()])
    }

    fn ring_mul(&self, a: &Parts, b: &Parts) -> Result<Parts> {
        Ok(a.iter().zip(b).map(|(x, y)| poly_mul(x, y)).collect())
    }

    fn act(&self, r: &Parts, m: &Parts) -> Result<Parts> {
        let mut out = Vec::with_capacity(m.len());
        for (s, (x, y)) in r.iter().zip(m).enumerate() {
            let p = match self.summands[s].kind {
                SummandKind::Poly => poly_mul(x, y),
                SummandKind::Const => trim(vec![poly_eval(x, &Rat::zero()) * y.first().cloned().unwrap_or_default()]),
            };
            if p.len() > self.width(s) {
                return Err(Error::WeightOverflow { weight: p.len() as u32 - 1, max: self.cap as u32 });
            }
            out.push(p);
        }
        Ok(out)
    }

    fn coords(&self, m: &Parts, _level: u32) -> Result<Vector> {
        let (offs, total) = self.offsets();
        let mut v = zero_vec(total);
        for (s, p) in m.iter().enumerate() {
            if p.len() > self.width(s) {
                return Err(Error::WeightOverflow { weight: p.len() as u32 - 1, max: self.cap as u32 });
            }
            for (d, x) in p.iter().enumerate() {
                v[offs[s] + d] = x.clone();
            }
        }
        Ok(v)
    }

    fn level_span(&self, level: u32) -> Result<Vec<Vector>> {
        Ok(self.level_basis(level as usize))
    }

    fn render_coords(&self, v: &[Rat], _level: u32) -> String {
        let (offs, _) = self.offsets();
        let parts: Vec<String> = self
            .summands
            .iter()
            .enumerate()
            .map(|(s, sm)| {
                let coeffs = &v[offs[s]..offs[s] + self.width(s)];
                let var = sm.name.trim_start_matches("C[").trim_end_matches(']');
                render_univariate(coeffs, var)
            })
            .collect();
        format!("({})", parts.join(", "))
    }
}

/// Summands of the graded model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GradedSummand {
    /// A copy of `R`.
    Ring,
    /// `C[X]`, killed by `Y` and `Z`.
    FreeX,
    /// `C` in degree 0, killed by everything of positive degree.
    Point,
}

/// Graded element: a degree and one coefficient vector per summand.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedElem {
    pub degree: u32,
    pub parts: Parts,
}

#[derive(Clone, Debug, Serialize)]
pub struct GradedModel {
    pub name: String,
    pub summands: Vec<GradedSummand>,
    pub module_gens: Vec<String>,
}

impl GradedModel {
    /// `R (+) C<K>`.
    pub fn even() -> Self {
        GradedModel {
            name: "R + C<K>".into(),
            summands: vec![GradedSummand::Ring, GradedSummand::Point],
            module_gens: vec!["1".into(), "K".into()],
        }
    }

    /// `R (+) C[X]^free (+) C`.
    pub fn odd(free: usize) -> Self {
        let mut summands = vec![GradedSummand::Ring];
        summands.extend(std::iter::repeat_n(GradedSummand::FreeX, free));
        summands.push(GradedSummand::Point);
        let mut gens = vec!["g".to_string()];
        gens.extend((1..=free).map(|r| format!("m{r}")));
        gens.push("c".into());
        GradedModel { name: format!("R + C[X]^{free} + C"), summands, module_gens: gens }
    }

    /// Images of `X, Y, Z` as graded ring elements.
    pub fn ring_images() -> Vec<GradedElem> {
        vec![
            GradedElem { degree: 1, parts: vec![ints(&[1, 1])] },
            GradedElem { degree: 2, parts: vec![ints(&[0, 1])] },
            GradedElem { degree: 3, parts: vec![ints(&[0, 0, 1])] },
        ]
    }

    /// Generators in degree 0, one per summand.
    pub fn module_images(&self) -> Vec<GradedElem> {
        (0..self.summands.len())
            .map(|s| {
                let mut parts = vec![Vec::new(); self.summands.len()];
                parts[s] = ints(&[1]);
                GradedElem { degree: 0, parts }
            })
            .collect()
    }

    pub fn generator_weights(&self) -> Vec<(String, u32)> {
        self.module_gens.iter().map(|n| (n.clone(), 0)).collect()
    }

    fn width(&self, s: usize, d: u32) -> usize {
        match self.summands[s] {
            GradedSummand::Ring => d as usize + 1,
            GradedSummand::FreeX => 1,
            GradedSummand::Point => usize::from(d == 0),
        }
    }

    fn block(&self, d: u32) -> usize {
        (0..self.summands.len()).map(|s| self.width(s, d)).sum()
    }

    fn offset(&self, d: u32) -> usize {
        (0..d).map(|e| self.block(e)).sum()
    }
}

impl ModuleTarget for GradedModel {
    type Ring = GradedElem;
    type Elem = GradedElem;

    fn ring_one(&self) -> Result<GradedElem> {
        Ok(GradedElem { degree: 0, parts: vec![ints(&[1])] })
    }

    fn ring_mul(&self, a: &GradedElem, b: &GradedElem) -> Result<GradedElem> {
        Ok(GradedElem { degree: a.degree + b.degree, parts: vec![poly_mul(&a.parts[0], &b.parts[0])] })
    }

    fn act(&self, r: &GradedElem, m: &GradedElem) -> Result<GradedElem> {
        let f = &r.parts[0];
        let at0 = poly_eval(f, &Rat::zero());
        let parts = self
            .summands
            .iter()
            .zip(&m.parts)
            .map(|(s, p)| match s {
                GradedSummand::Ring => poly_mul(f, p),
                GradedSummand::FreeX => trim(p.iter().map(|x| x * &at0).collect()),
                GradedSummand::Point if r.degree == 0 => trim(p.iter().map(|x| x * &at0).collect()),
                GradedSummand::Point => Vec::new(),
            })
            .collect();
        Ok(GradedElem { degree: r.degree + m.degree, parts })
    }

    fn coords(&self, m: &GradedElem, level: u32) -> Result<Vector> {
        if m.degree > level {
            return Err(Error::WeightOverflow { weight: m.degree, max: level });
        }
        let mut v = zero_vec(self.offset(level + 1));
        let mut off = self.offset(m.degree);
        for (s, p) in m.parts.iter().enumerate() {
            let w = self.width(s, m.degree);
            if p.len() > w {
                return Err(Error::Invalid(format!("degree {} element too long", m.degree)));
            }
            for (i, x) in p.iter().enumerate() {
                v[off + i] = x.clone();
            }
            off += w;
        }
        Ok(v)
    }

    fn level_span(&self, level: u32) -> Result<Vec<Vector>> {
        let total = self.offset(level + 1);
        let mut out = Vec::new();
        for d in 0..=level {
            let mut off = self.offset(d);
            for s in 0..self.summands.len() {
                let w = self.width(s, d);
                match self.summands[s] {
                    GradedSummand::Ring if d > 0 => {
                        // 1 + z^d, z, ..., z^(d-1)
                        let mut v = zero_vec(total);
                        v[off] = Rat::one();
                        v[off + d as usize] = Rat::one();
                        out.push(v);
                        out.extend((1..d as usize).map(|i| unit_vec(total, off + i)));
                    }
                    _ => out.extend((0..w).map(|i| unit_vec(total, off + i))),
                }
                off += w;
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_model_levels() {
        let m = ModuleModel::closed(2, 8);
        let dims: Vec<usize> = (0..=4).map(|w| m.level_basis(w).len()).collect();
        assert_eq!(dims, vec![3, 3, 4, 5, 6]);
    }

    #[test]
    fn punctured_model_levels_and_action() {
        let m = ModuleModel::punctured(1, 2, 8);
        let dims: Vec<usize> = (0..=3).map(|w| m.level_basis(w).len()).collect();
        // (deg <= w in W and T, one condition) plus two constants
        assert_eq!(dims, vec![3, 5, 7, 9]);
        let y = &m.ring_gens[0].1;
        let phi = &m.module_gens[1].2;
        let yphi = m.act(y, phi).unwrap();
        assert_eq!(yphi[0], ints(&[0, 0, 1, -1]));
        assert!(yphi[1].is_empty());
    }

    #[test]
    fn graded_model_dims() {
        let m = GradedModel::odd(2);
        let span = m.level_span(3).unwrap();
        // degree 0: 1 + 2 + 1, then d + 2 in degree d
        assert_eq!(span.len(), 4 + 3 + 4 + 5);
        let x = &GradedModel::ring_images()[0];
        let c = &m.module_images()[3];
        assert!(m.act(x, c).unwrap().parts.iter().all(|p| p.is_empty()));
    }
}
