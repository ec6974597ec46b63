//! B-side targets: global sections and first cohomology of sheaves on a
//! configuration, packaged as filtered rings and modules.
//!
//! On punctured configurations the filtration is by pole order at the
//! punctures. A vector field `f d/dx` is weighted as the function `f / x`,
//! so on an affine line with its puncture at infinity `t^(a+1) d/dt` has
//! weight `a`. On compact configurations the grading is by bundle power.

use num_traits::Zero;

use crate::cech::{render_section, section_mul, CechComplex, Cohomology, GlobalSections, Section, Sheaf};
use crate::compare::{render_sparse, FilteredTarget, ModuleTarget};
use crate::curve::{Configuration, Point};
use crate::error::{Error, Result};
use crate::exact_linalg::{kernel_basis, rank_of_vectors, solve_combination, zero_vec, Mat, Rat, Vector};
use crate::ratfun::{RatFun, Term};

/// First cohomology of one sheaf with a fixed basis and projection.
pub struct H1Part {
    pub cx: CechComplex,
    pub coh: Cohomology,
}

impl H1Part {
    pub fn new(cfg: &Configuration, sheaf: Sheaf, n: u32, pcap: u32) -> Result<Self> {
        let cx = CechComplex::build_with_cap(cfg, sheaf, n, pcap)?;
        let coh = cx.cohomology();
        Ok(H1Part { cx, coh })
    }

    pub fn dim(&self) -> usize {
        self.coh.h1_dim()
    }

    /// Per-overlap functions of the cocycle representing class `v`.
    pub fn cochain(&self, v: &[Rat]) -> Vec<RatFun> {
        let mut c = zero_vec(self.cx.c1_dim());
        for (rep, x) in self.coh.h1_representatives().iter().zip(v) {
            for (a, b) in c.iter_mut().zip(rep) {
                *a += x * b;
            }
        }
        self.cx.c1_parts(&c)
    }

    pub fn class_of(&self, parts: &[RatFun]) -> Result<Vector> {
        Ok(self.coh.h1.project(&self.cx.c1_coords(parts)?))
    }

    /// Class of `s * v`, read in `target`.
    pub fn times(&self, s: &Section, v: &[Rat], target: &H1Part) -> Result<Vector> {
        let comps = self.cx.overlap_components();
        let parts: Vec<RatFun> = self.cochain(v).iter().zip(&comps).map(|(f, &c)| s[c].mul(f)).collect();
        target.class_of(&parts)
    }

    /// A basis of the classes carried by constant cochains, chosen greedily
    /// in overlap order.
    pub fn constant_classes(&self) -> Result<Vec<Vector>> {
        let n = self.cx.overlap_components().len();
        let mut out: Vec<Vector> = Vec::new();
        for i in 0..n {
            let mut parts = vec![RatFun::zero(); n];
            parts[i] = RatFun::one();
            let v = self.class_of(&parts)?;
            let mut trial = out.clone();
            trial.push(v.clone());
            if rank_of_vectors(self.dim(), &trial) > out.len() {
                out.push(v);
            }
        }
        Ok(out)
    }
}

/// Global sections of `O` or `Tbal` filtered by pole order at the punctures.
pub struct FilteredSections {
    pub cfg: Configuration,
    pub sheaf: Sheaf,
    pub max_weight: u32,
    gs: GlobalSections,
    levels: Vec<Vec<Vector>>,
}

impl FilteredSections {
    pub fn new(cfg: &Configuration, sheaf: Sheaf, max_weight: u32) -> Result<Self> {
        if sheaf.twist() != 0 {
            return Err(Error::Invalid("pole filtrations are defined for O and Tbal only".into()));
        }
        let gs = GlobalSections::new(cfg, sheaf, max_weight + 1)?;
        let labels = gs.labels();
        let shift = u32::from(sheaf.is_vector());
        let excess = |w: u32, c: usize, t: &Term| {
            let comp = &cfg.components[c];
            match t {
                Term::Pole(q, b) => *b > w && comp.punctures.contains(&Point::Finite(q.clone())),
                Term::Pow(a) => *a > w + shift && comp.punctures.contains(&Point::Inf),
            }
        };
        let mut levels = Vec::new();
        for w in 0..=max_weight {
            let rows: Vec<usize> = (0..labels.len()).filter(|&i| excess(w, labels[i].0, &labels[i].1)).collect();
            let cols: Vec<Vector> = gs.basis().iter().map(|b| rows.iter().map(|&i| b[i].clone()).collect()).collect();
            let combos = if rows.is_empty() {
                (0..cols.len()).map(|i| crate::exact_linalg::unit_vec(cols.len(), i)).collect()
            } else {
                kernel_basis(&Mat::from_columns(rows.len(), &cols))
            };
            levels.push(combos.iter().map(|k| combine(gs.ambient_dim(), gs.basis(), k)).collect());
        }
        Ok(FilteredSections { cfg: cfg.clone(), sheaf, max_weight, gs, levels })
    }

    pub fn ambient_dim(&self) -> usize {
        self.gs.ambient_dim()
    }

    pub fn level(&self, w: u32) -> Result<&[Vector]> {
        self.levels.get(w as usize).map(Vec::as_slice).ok_or(Error::WeightOverflow { weight: w, max: self.max_weight })
    }

    pub fn level_dims(&self) -> Vec<usize> {
        self.levels.iter().map(Vec::len).collect()
    }

    pub fn coords(&self, s: &Section) -> Result<Vector> {
        self.gs.coords(s)
    }

    pub fn section(&self, v: &[Rat]) -> Section {
        self.gs.section(v)
    }

    pub fn component(&self, id: &str) -> Result<usize> {
        self.cfg.component_index(id).ok_or_else(|| Error::Invalid(format!("no component {id}")))
    }

    /// A section of level `w` with the prescribed restrictions to the named components.
    pub fn lift(&self, w: u32, prescribed: &[(&str, RatFun)]) -> Result<Section> {
        let mut target: Section = vec![RatFun::zero(); self.cfg.components.len()];
        let mut comps = Vec::new();
        for (id, f) in prescribed {
            let c = self.component(id)?;
            target[c] = f.clone();
            comps.push(c);
        }
        let labels = self.gs.labels();
        let idx: Vec<usize> = (0..labels.len()).filter(|&i| comps.contains(&labels[i].0)).collect();
        let restrict = |v: &Vector| -> Vector { idx.iter().map(|&i| v[i].clone()).collect() };
        let basis = self.level(w)?;
        let vecs: Vec<Vector> = basis.iter().map(restrict).collect();
        let t = restrict(&self.coords(&target)?);
        let combo = solve_combination(idx.len(), &vecs, &t).ok_or_else(|| {
            Error::Invalid(format!(
                "no global {} section of level {w} restricts to {}",
                self.sheaf,
                render_section(&self.cfg, &target)
            ))
        })?;
        Ok(self.section(&combine(self.ambient_dim(), basis, &combo)))
    }

    /// Sections of level `w` vanishing on the given components, modulo nothing.
    pub fn vanishing_on(&self, w: u32, ids: &[&str]) -> Result<Vec<Section>> {
        let comps: Vec<usize> = ids.iter().map(|id| self.component(id)).collect::<Result<_>>()?;
        let labels = self.gs.labels();
        let idx: Vec<usize> = (0..labels.len()).filter(|&i| comps.contains(&labels[i].0)).collect();
        let basis = self.level(w)?;
        let cols: Vec<Vector> = basis.iter().map(|b| idx.iter().map(|&i| b[i].clone()).collect()).collect();
        let combos = if idx.is_empty() {
            (0..basis.len()).map(|i| crate::exact_linalg::unit_vec(basis.len(), i)).collect()
        } else {
            kernel_basis(&Mat::from_columns(idx.len(), &cols))
        };
        Ok(combos.iter().map(|k| self.section(&combine(self.ambient_dim(), basis, k))).collect())
    }

    pub fn ones(&self) -> Section {
        vec![RatFun::one(); self.cfg.components.len()]
    }
}

fn combine(dim: usize, basis: &[Vector], coeffs: &[Rat]) -> Vector {
    let mut v = zero_vec(dim);
    for (b, c) in basis.iter().zip(coeffs) {
        if c.is_zero() {
            continue;
        }
        for (x, y) in v.iter_mut().zip(b) {
            *x += c * y;
        }
    }
    v
}

/// `h0(O)` of a punctured configuration as a filtered ring.
pub struct SectionRing<'a>(pub &'a FilteredSections);

impl FilteredTarget for SectionRing<'_> {
    type Elem = Section;

    fn one(&self) -> Result<Section> {
        Ok(self.0.ones())
    }

    fn mul(&self, a: &Section, b: &Section) -> Result<Section> {
        Ok(section_mul(a, b))
    }

    fn coords(&self, e: &Section, _level: u32) -> Result<Vector> {
        self.0.coords(e)
    }

    fn level_span(&self, level: u32) -> Result<Vec<Vector>> {
        Ok(self.0.level(level)?.to_vec())
    }

    fn describe_level(&self, level: u32) -> String {
        format!("sections with pole order <= {level}")
    }

    fn render_coords(&self, v: &[Rat], _level: u32) -> String {
        render_section(&self.0.cfg, &self.0.section(v))
    }
}

/// Element of `h1(F) (+) h0(G)` in one degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BElem {
    pub degree: u32,
    pub h1: Vector,
    pub section: Section,
}

/// `h1(O) (+) h0(Tbal)` on a punctured configuration, filtered by pole order
/// with `h1` in level 0.
pub struct FilteredModule<'a> {
    pub h1: Option<&'a H1Part>,
    pub fields: &'a FilteredSections,
}

impl FilteredModule<'_> {
    fn h1_dim(&self) -> usize {
        self.h1.map_or(0, H1Part::dim)
    }

    pub fn class(&self, v: Vector) -> BElem {
        BElem { degree: 0, h1: v, section: vec![RatFun::zero(); self.fields.cfg.components.len()] }
    }

    pub fn field(&self, s: Section) -> BElem {
        BElem { degree: 0, h1: zero_vec(self.h1_dim()), section: s }
    }
}

impl ModuleTarget for FilteredModule<'_> {
    type Ring = Section;
    type Elem = BElem;

    fn ring_one(&self) -> Result<Section> {
        Ok(self.fields.ones())
    }

    fn ring_mul(&self, a: &Section, b: &Section) -> Result<Section> {
        Ok(section_mul(a, b))
    }

    fn act(&self, r: &Section, m: &BElem) -> Result<BElem> {
        let h1 = match self.h1 {
            Some(h) => h.times(r, &m.h1, h)?,
            None => Vec::new(),
        };
        Ok(BElem { degree: 0, h1, section: section_mul(r, &m.section) })
    }

    fn coords(&self, m: &BElem, _level: u32) -> Result<Vector> {
        let mut v = m.h1.clone();
        v.extend(self.fields.coords(&m.section)?);
        Ok(v)
    }

    fn level_span(&self, level: u32) -> Result<Vec<Vector>> {
        let h = self.h1_dim();
        let n = self.fields.ambient_dim();
        let mut out: Vec<Vector> = (0..h).map(|i| crate::exact_linalg::unit_vec(h + n, i)).collect();
        for b in self.fields.level(level)? {
            let mut v = zero_vec(h);
            v.extend(b.iter().cloned());
            out.push(v);
        }
        Ok(out)
    }

    fn render_coords(&self, v: &[Rat], _level: u32) -> String {
        let h = self.h1_dim();
        let field = render_section(&self.fields.cfg, &self.fields.section(&v[h..]));
        if v[..h].iter().all(Zero::is_zero) {
            field
        } else {
            format!("h1{} + {field}", render_sparse(&v[..h]))
        }
    }
}

/// A graded section: an element of `h0(L^degree)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedSection {
    pub degree: u32,
    pub section: Section,
}

/// Per-degree blocks `h1(F_d) (+) h0(G_d)` in degrees `0, step, 2*step, ...`.
pub struct GradedBlocks {
    pub cfg: Configuration,
    pub step: u32,
    pub max_degree: u32,
    sections: Vec<Option<GlobalSections>>,
    h1: Vec<Option<H1Part>>,
}

impl GradedBlocks {
    /// `section_sheaf(d)` supplies `G_d`, `h1_sheaf(d)` supplies `F_d` (if any).
    pub fn new(
        cfg: &Configuration,
        step: u32,
        max_degree: u32,
        truncation: u32,
        section_sheaf: impl Fn(u32) -> Sheaf,
        h1_sheaf: Option<&dyn Fn(u32) -> Sheaf>,
    ) -> Result<Self> {
        if !cfg.is_compact() {
            return Err(Error::Invalid("graded blocks need a compact configuration".into()));
        }
        let mut sections = Vec::new();
        let mut h1 = Vec::new();
        for d in 0..=max_degree {
            if d % step != 0 {
                sections.push(None);
                h1.push(None);
                continue;
            }
            sections.push(Some(GlobalSections::new(cfg, section_sheaf(d), 0)?));
            h1.push(match h1_sheaf {
                Some(f) => Some(H1Part::new(cfg, f(d), truncation, 0)?),
                None => None,
            });
        }
        Ok(GradedBlocks { cfg: cfg.clone(), step, max_degree, sections, h1 })
    }

    fn gs(&self, d: u32) -> Result<&GlobalSections> {
        self.sections
            .get(d as usize)
            .and_then(Option::as_ref)
            .ok_or(Error::WeightOverflow { weight: d, max: self.max_degree })
    }

    pub fn h1_part(&self, d: u32) -> Option<&H1Part> {
        self.h1.get(d as usize).and_then(Option::as_ref)
    }

    fn h1_dim(&self, d: u32) -> usize {
        self.h1_part(d).map_or(0, H1Part::dim)
    }

    fn block(&self, d: u32) -> usize {
        match self.sections.get(d as usize).and_then(Option::as_ref) {
            Some(gs) => self.h1_dim(d) + gs.ambient_dim(),
            None => 0,
        }
    }

    fn offset(&self, d: u32) -> usize {
        (0..d).map(|e| self.block(e)).sum()
    }

    pub fn section_dims(&self) -> Vec<usize> {
        self.sections.iter().map(|s| s.as_ref().map_or(0, GlobalSections::dim)).collect()
    }

    pub fn h1_dims(&self) -> Vec<usize> {
        (0..=self.max_degree).map(|d| self.h1_dim(d)).collect()
    }

    fn place(&self, degree: u32, h1: &[Rat], s: &Section, level: u32) -> Result<Vector> {
        if degree > level {
            return Err(Error::WeightOverflow { weight: degree, max: level });
        }
        let mut v = zero_vec(self.offset(level + 1));
        let off = self.offset(degree);
        for (i, x) in h1.iter().enumerate() {
            v[off + i] = x.clone();
        }
        let h = self.h1_dim(degree);
        for (i, x) in self.gs(degree)?.coords(s)?.into_iter().enumerate() {
            v[off + h + i] = x;
        }
        Ok(v)
    }

    fn span(&self, level: u32, with_h1: bool) -> Result<Vec<Vector>> {
        let n = self.offset(level + 1);
        let mut out = Vec::new();
        for d in (0..=level).filter(|d| d % self.step == 0) {
            let off = self.offset(d);
            let h = self.h1_dim(d);
            if with_h1 {
                out.extend((0..h).map(|i| crate::exact_linalg::unit_vec(n, off + i)));
            }
            for b in self.gs(d)?.basis() {
                let mut v = zero_vec(n);
                for (i, x) in b.iter().enumerate() {
                    v[off + h + i] = x.clone();
                }
                out.push(v);
            }
        }
        Ok(out)
    }

    fn render(&self, v: &[Rat], level: u32) -> String {
        let mut parts = Vec::new();
        for d in (0..=level).filter(|d| d % self.step == 0) {
            let (Ok(gs), off) = (self.gs(d), self.offset(d)) else { continue };
            let h = self.h1_dim(d);
            let hv = &v[off..off + h];
            if hv.iter().any(|x| !x.is_zero()) {
                parts.push(format!("h1[{d}]{}", render_sparse(hv)));
            }
            let sv = &v[off + h..off + h + gs.ambient_dim()];
            if sv.iter().any(|x| !x.is_zero()) {
                parts.push(format!("[{d}] {}", render_section(&self.cfg, &gs.section(sv))));
            }
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }

    /// A degree-`d` section with the prescribed restrictions to the named components.
    pub fn lift(&self, d: u32, prescribed: &[(&str, RatFun)]) -> Result<Section> {
        let gs = self.gs(d)?;
        let mut target: Section = vec![RatFun::zero(); self.cfg.components.len()];
        let mut comps = Vec::new();
        for (id, f) in prescribed {
            let c = self.cfg.component_index(id).ok_or_else(|| Error::Invalid(format!("no component {id}")))?;
            target[c] = f.clone();
            comps.push(c);
        }
        let labels = gs.labels();
        let idx: Vec<usize> = (0..labels.len()).filter(|&i| comps.contains(&labels[i].0)).collect();
        let restrict = |v: &Vector| -> Vector { idx.iter().map(|&i| v[i].clone()).collect() };
        let vecs: Vec<Vector> = gs.basis().iter().map(restrict).collect();
        let combo = solve_combination(idx.len(), &vecs, &restrict(&gs.coords(&target)?)).ok_or_else(|| {
            Error::Invalid(format!(
                "no global {} section restricts to {}",
                gs.sheaf,
                render_section(&self.cfg, &target)
            ))
        })?;
        Ok(gs.section(&combine(gs.ambient_dim(), gs.basis(), &combo)))
    }

    /// Degree-`d` sections vanishing on the named components.
    pub fn vanishing_on(&self, d: u32, ids: &[&str]) -> Result<Vec<Section>> {
        let gs = self.gs(d)?;
        let comps: Vec<usize> = ids
            .iter()
            .map(|id| self.cfg.component_index(id).ok_or_else(|| Error::Invalid(format!("no component {id}"))))
            .collect::<Result<_>>()?;
        let labels = gs.labels();
        let idx: Vec<usize> = (0..labels.len()).filter(|&i| comps.contains(&labels[i].0)).collect();
        let cols: Vec<Vector> = gs.basis().iter().map(|b| idx.iter().map(|&i| b[i].clone()).collect()).collect();
        let combos = kernel_basis(&Mat::from_columns(idx.len(), &cols));
        Ok(combos.iter().map(|k| gs.section(&combine(gs.ambient_dim(), gs.basis(), k))).collect())
    }

    pub fn zero_section(&self) -> Section {
        vec![RatFun::zero(); self.cfg.components.len()]
    }

    pub fn ones(&self) -> Section {
        vec![RatFun::one(); self.cfg.components.len()]
    }
}

/// `(+)_d h0(L^d)` as a graded ring.
pub struct GradedRing<'a>(pub &'a GradedBlocks);

impl FilteredTarget for GradedRing<'_> {
    type Elem = GradedSection;

    fn one(&self) -> Result<GradedSection> {
        Ok(GradedSection { degree: 0, section: self.0.ones() })
    }

    fn mul(&self, a: &GradedSection, b: &GradedSection) -> Result<GradedSection> {
        Ok(GradedSection { degree: a.degree + b.degree, section: section_mul(&a.section, &b.section) })
    }

    fn coords(&self, e: &GradedSection, level: u32) -> Result<Vector> {
        self.0.place(e.degree, &[], &e.section, level)
    }

    fn level_span(&self, level: u32) -> Result<Vec<Vector>> {
        self.0.span(level, false)
    }

    fn describe_level(&self, level: u32) -> String {
        format!("degrees <= {level}")
    }

    fn render_coords(&self, v: &[Rat], level: u32) -> String {
        self.0.render(v, level)
    }
}

/// `(+)_d h1(F_d) (+) h0(G_d)` as a graded module over `(+)_d h0(L^d)`.
pub struct GradedModule<'a>(pub &'a GradedBlocks);

impl ModuleTarget for GradedModule<'_> {
    type Ring = GradedSection;
    type Elem = BElem;

    fn ring_one(&self) -> Result<GradedSection> {
        Ok(GradedSection { degree: 0, section: self.0.ones() })
    }

    fn ring_mul(&self, a: &GradedSection, b: &GradedSection) -> Result<GradedSection> {
        Ok(GradedSection { degree: a.degree + b.degree, section: section_mul(&a.section, &b.section) })
    }

    fn act(&self, r: &GradedSection, m: &BElem) -> Result<BElem> {
        let d = r.degree + m.degree;
        let h1 = match (self.0.h1_part(m.degree), self.0.h1_part(d)) {
            (Some(src), Some(dst)) => src.times(&r.section, &m.h1, dst)?,
            (None, None) => Vec::new(),
            _ => return Err(Error::WeightOverflow { weight: d, max: self.0.max_degree }),
        };
        Ok(BElem { degree: d, h1, section: section_mul(&r.section, &m.section) })
    }

    fn coords(&self, m: &BElem, level: u32) -> Result<Vector> {
        self.0.place(m.degree, &m.h1, &m.section, level)
    }

    fn level_span(&self, level: u32) -> Result<Vec<Vector>> {
        self.0.span(level, true)
    }

    fn render_coords(&self, v: &[Rat], level: u32) -> String {
        self.0.render(v, level)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{build_mirror, Variant};

    #[test]
    fn structure_sheaf_filtration_of_punctured_theta() {
        let cfg = build_mirror(2, Variant::Nodal { l: 1 }).unwrap();
        let fs = FilteredSections::new(&cfg, Sheaf::O, 6).unwrap();
        // filtered pieces of C[Y,Z]/(YZ - Y^3 - Z^2)
        assert_eq!(fs.level_dims(), vec![1, 1, 2, 3, 4, 5, 6]);
    }

    #[test]
    fn lifted_generators_satisfy_the_cubic() {
        let cfg = build_mirror(2, Variant::Nodal { l: 1 }).unwrap();
        let fs = FilteredSections::new(&cfg, Sheaf::O, 6).unwrap();
        let p = |b| RatFun::pole(crate::exact_linalg::rat(-1), b);
        let y = fs.lift(2, &[("D1a", p(1).sub(&p(2)))]).unwrap();
        let z = fs.lift(3, &[("D1a", p(1).sub(&p(2).scale(&crate::exact_linalg::rat(2))).add(&p(3)))]).unwrap();
        let lhs = section_mul(&y, &z);
        let y3 = section_mul(&y, &section_mul(&y, &y));
        let rhs: Section = y3.iter().zip(section_mul(&z, &z)).map(|(a, b)| a.add(&b)).collect();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn line_bundle_blocks() {
        let cfg = build_mirror(2, Variant::Closed).unwrap();
        let sheaf = |d| Sheaf::Tbal { k: d };
        let b = GradedBlocks::new(&cfg, 1, 4, 8, |d| Sheaf::Line { k: d }, Some(&sheaf)).unwrap();
        assert_eq!(b.section_dims(), vec![1, 1, 2, 3, 4]);
        assert_eq!(b.h1_dims(), vec![1, 0, 0, 0, 0]);
    }
}
