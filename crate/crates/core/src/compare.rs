//! Level-by-level comparison of algebra and module maps out of a presented
//! source into a filtered target.
//!
//! A target exposes, for each level `w`, an ambient coordinate space in which
//! elements of filtration level at most `w` can be written, together with a
//! spanning set of that level. The ring check compares the kernel of the
//! monomial evaluation map against the truncated ideal; the module check
//! compares the kernels of two maps out of the same truncated free module.

use std::collections::HashMap;

use crate::error::Result;
use crate::exact_linalg::{is_zero_vec, kernel_basis, Mat, Rat, RowSpace, Vector};
use crate::poly::{monomial_weight, render_monomial, Monomial};
use crate::presentation::{Presentation, TruncatedIdeal};
use crate::report::{graded_from_filtered, CheckRecord, Side};

pub trait FilteredTarget {
    type Elem: Clone;

    fn one(&self) -> Result<Self::Elem>;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem>;
    /// Coordinates of an element of level at most `level`.
    fn coords(&self, e: &Self::Elem, level: u32) -> Result<Vector>;
    /// Spanning set of the level-`level` piece, in the coordinates of `coords`.
    fn level_span(&self, level: u32) -> Result<Vec<Vector>>;

    fn describe_level(&self, level: u32) -> String {
        format!("level {level}")
    }

    fn render_coords(&self, v: &[Rat], _level: u32) -> String {
        render_sparse(v)
    }
}

pub trait ModuleTarget {
    type Ring: Clone;
    type Elem: Clone;

    fn ring_one(&self) -> Result<Self::Ring>;
    fn ring_mul(&self, a: &Self::Ring, b: &Self::Ring) -> Result<Self::Ring>;
    fn act(&self, r: &Self::Ring, m: &Self::Elem) -> Result<Self::Elem>;
    fn coords(&self, m: &Self::Elem, level: u32) -> Result<Vector>;
    fn level_span(&self, level: u32) -> Result<Vec<Vector>>;

    fn render_coords(&self, v: &[Rat], _level: u32) -> String {
        render_sparse(v)
    }
}

pub fn render_sparse(v: &[Rat]) -> String {
    let parts: Vec<String> = v
        .iter()
        .enumerate()
        .filter(|(_, x)| !num_traits::Zero::is_zero(*x))
        .map(|(i, x)| format!("{x}*b{i}"))
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

/// Images of all monomials, built by multiplying a lower monomial by one generator.
pub fn monomial_images<E: Clone>(
    monomials: &[Monomial],
    one: E,
    gens: &[E],
    mul: impl Fn(&E, &E) -> Result<E>,
) -> Result<Vec<E>> {
    let index: HashMap<&Monomial, usize> = monomials.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut out: Vec<E> = Vec::with_capacity(monomials.len());
    for m in monomials {
        match m.iter().position(|&e| e > 0) {
            None => out.push(one.clone()),
            Some(i) => {
                let mut lower = m.clone();
                lower[i] -= 1;
                let j = index[&lower];
                out.push(mul(&out[j], &gens[i])?);
            }
        }
    }
    Ok(out)
}

fn render_combination(v: &[Rat], labels: &[String]) -> String {
    let mut out = String::new();
    for (x, l) in v.iter().zip(labels) {
        if num_traits::Zero::is_zero(x) {
            continue;
        }
        let neg = x < &Rat::from_integer(0.into());
        let a = if neg { -x.clone() } else { x.clone() };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if num_traits::One::is_one(&a) {
            out.push_str(l);
        } else {
            out.push_str(&format!("{a}*{l}"));
        }
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

/// Checks that `gen_images` induces an isomorphism from the presented algebra
/// onto the target, level by level up to `max_weight`.
pub fn check_ring_map<T: FilteredTarget>(
    name: &str,
    side: Side,
    source: &Presentation,
    target: &T,
    gen_images: &[T::Elem],
    max_weight: u32,
) -> Result<CheckRecord> {
    assert_eq!(gen_images.len(), source.generators().len(), "one image per generator");
    let weights = source.weights();
    let names = source.names();
    let ideal = TruncatedIdeal::new(source, max_weight);
    let mons = ideal.monomials();
    let labels: Vec<String> = mons.iter().map(|m| render_monomial(m, &names)).collect();
    let images = monomial_images(mons, target.one()?, gen_images, |a, b| target.mul(a, b))?;

    let mut rec = CheckRecord::new(name, side);

    for r in source.relations() {
        let Some(top) = r.top_weight(&weights) else { continue };
        if top > max_weight {
            rec.note(format!(
                "relation {} has weight {top} above the cutoff; not evaluated",
                r.render(&names, &weights)
            ));
            continue;
        }
        let mut acc: Option<Vector> = None;
        for (m, c) in r.terms() {
            let v = target.coords(&images[ideal.index_of(m)], top)?;
            let acc = acc.get_or_insert_with(|| vec![Rat::from_integer(0.into()); v.len()]);
            for (a, x) in acc.iter_mut().zip(&v) {
                *a += c * x;
            }
        }
        if let Some(v) = acc {
            rec.require(is_zero_vec(&v), || {
                format!(
                    "relation {} evaluates to {} at {}",
                    r.render(&names, &weights),
                    target.render_coords(&v, top),
                    target.describe_level(top)
                )
            });
        }
    }

    let mut image_cum = Vec::new();
    let mut target_cum = Vec::new();
    let mut source_cum = Vec::new();
    for w in 0..=max_weight {
        let n = ideal.prefix(w);
        let cols: Vec<Vector> = (0..n).map(|i| target.coords(&images[i], w)).collect::<Result<_>>()?;
        let dim = cols[0].len();
        let m = Mat::from_columns(dim, &cols);
        let kernel = kernel_basis(&m);
        let id = ideal.level(w);
        if let Some(v) = id.basis().iter().find(|v| !is_zero_vec(&m.mul_vec(v))) {
            rec.fail(format!(
                "weight {w}: ideal element {} does not vanish at {}",
                render_combination(v, &labels[..n]),
                target.describe_level(w)
            ));
        }
        if let Some(v) = kernel.iter().find(|v| !id.contains(v)) {
            rec.fail(format!(
                "weight {w}: {} vanishes at {} but is not in the ideal",
                render_combination(v, &labels[..n]),
                target.describe_level(w)
            ));
        }
        let image = RowSpace::new(dim, &cols);
        let level = RowSpace::new(dim, &target.level_span(w)?);
        if let Some(v) = level.basis().iter().find(|v| !image.contains(v)) {
            rec.fail(format!("weight {w}: target element {} is not in the image", target.render_coords(v, w)));
        }
        if let Some(i) = (0..n).find(|&i| !level.contains(&cols[i])) {
            rec.fail(format!("weight {w}: image of {} lies outside {}", labels[i], target.describe_level(w)));
        }
        image_cum.push(image.dim());
        target_cum.push(level.dim());
        source_cum.push(n - id.dim());
    }
    rec.dims_target = graded_from_filtered(&source_cum);
    rec.set_leg_dims(side, graded_from_filtered(&target_cum));
    if image_cum != target_cum {
        rec.note(format!("image dims {:?}", graded_from_filtered(&image_cum)));
    }
    debug_assert!(monomial_weight(&mons[0], &weights) == 0);
    Ok(rec)
}

/// Generators of a free module over a presented ring, with weights.
#[derive(Clone, Debug)]
pub struct FreeModule {
    monomials: Vec<Monomial>,
    gen_names: Vec<String>,
    ring_names: Vec<String>,
    /// (monomial index, generator index), ordered by total weight.
    pairs: Vec<(usize, usize)>,
    prefix: Vec<usize>,
}

impl FreeModule {
    pub fn new(ring: &Presentation, gens: &[(String, u32)], max_weight: u32) -> Self {
        let weights = ring.weights();
        let monomials = crate::poly::monomials_up_to(&weights, max_weight);
        let mut pairs: Vec<(u32, usize, usize)> = Vec::new();
        for (g, (_, gw)) in gens.iter().enumerate() {
            for (i, m) in monomials.iter().enumerate() {
                let w = monomial_weight(m, &weights) + gw;
                if w <= max_weight {
                    pairs.push((w, g, i));
                }
            }
        }
        pairs.sort();
        let prefix = (0..=max_weight).map(|w| pairs.iter().filter(|p| p.0 <= w).count()).collect();
        FreeModule {
            monomials,
            gen_names: gens.iter().map(|g| g.0.clone()).collect(),
            ring_names: ring.names(),
            pairs: pairs.into_iter().map(|(_, g, i)| (i, g)).collect(),
            prefix,
        }
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn prefix(&self, w: u32) -> usize {
        self.prefix[w as usize]
    }

    pub fn labels(&self) -> Vec<String> {
        self.pairs
            .iter()
            .map(|&(i, g)| {
                let m = render_monomial(&self.monomials[i], &self.ring_names);
                if m == "1" {
                    format!("[{}]", self.gen_names[g])
                } else {
                    format!("{m}*[{}]", self.gen_names[g])
                }
            })
            .collect()
    }

    fn images<T: ModuleTarget>(&self, leg: &ModuleLeg<'_, T>) -> Result<Vec<T::Elem>> {
        let t = leg.target;
        let ring = monomial_images(&self.monomials, t.ring_one()?, &leg.ring_gens, |a, b| t.ring_mul(a, b))?;
        self.pairs.iter().map(|&(i, g)| t.act(&ring[i], &leg.module_gens[g])).collect()
    }
}

/// A module target together with images of the ring and module generators.
pub struct ModuleLeg<'a, T: ModuleTarget> {
    pub target: &'a T,
    pub ring_gens: Vec<T::Ring>,
    pub module_gens: Vec<T::Elem>,
}

struct LegLevel {
    kernel: RowSpace,
    image_dim: usize,
    level_dim: usize,
}

fn leg_level<T: ModuleTarget>(
    rec: &mut CheckRecord,
    tag: &str,
    leg: &ModuleLeg<'_, T>,
    images: &[T::Elem],
    labels: &[String],
    n: usize,
    w: u32,
) -> Result<LegLevel> {
    let t = leg.target;
    let cols: Vec<Vector> = images[..n].iter().map(|e| t.coords(e, w)).collect::<Result<_>>()?;
    let span = t.level_span(w)?;
    let dim = cols.first().or(span.first()).map_or(0, |v| v.len());
    let kernel =
        if n == 0 { RowSpace::new(0, &[]) } else { RowSpace::new(n, &kernel_basis(&Mat::from_columns(dim, &cols))) };
    let image = RowSpace::new(dim, &cols);
    let level = RowSpace::new(dim, &span);
    if let Some(v) = level.basis().iter().find(|v| !image.contains(v)) {
        rec.fail(format!("{tag} weight {w}: element {} is not in the image", t.render_coords(v, w)));
    }
    if let Some(i) = (0..n).find(|&i| !level.contains(&cols[i])) {
        rec.fail(format!("{tag} weight {w}: image of {} lies outside level {w}", labels[i]));
    }
    Ok(LegLevel { kernel, image_dim: image.dim(), level_dim: level.dim() })
}

/// Compares two module maps out of the same truncated free module: the model
/// leg and the computed leg must have equal kernels and both be onto their
/// level pieces at every weight up to `max_weight`.
pub fn check_module_map<P: ModuleTarget, Q: ModuleTarget>(
    name: &str,
    side: Side,
    ring: &Presentation,
    gens: &[(String, u32)],
    model: &ModuleLeg<'_, P>,
    leg: &ModuleLeg<'_, Q>,
    max_weight: u32,
) -> Result<CheckRecord> {
    let free = FreeModule::new(ring, gens, max_weight);
    let labels = free.labels();
    let model_images = free.images(model)?;
    let leg_images = free.images(leg)?;
    let mut rec = CheckRecord::new(name, side);
    let mut model_cum = Vec::new();
    let mut leg_cum = Vec::new();
    for w in 0..=max_weight {
        let n = free.prefix(w);
        let a = leg_level(&mut rec, "model", model, &model_images, &labels, n, w)?;
        let b = leg_level(&mut rec, "computed", leg, &leg_images, &labels, n, w)?;
        if let Some(v) = a.kernel.basis().iter().find(|v| !b.kernel.contains(v)) {
            rec.fail(format!(
                "weight {w}: {} vanishes in the model but not in the computed module",
                render_combination(v, &labels[..n])
            ));
        }
        if let Some(v) = b.kernel.basis().iter().find(|v| !a.kernel.contains(v)) {
            rec.fail(format!(
                "weight {w}: {} vanishes in the computed module but not in the model",
                render_combination(v, &labels[..n])
            ));
        }
        if a.image_dim != a.level_dim || b.image_dim != b.level_dim {
            rec.note(format!("weight {w}: image dims model {} / computed {}", a.image_dim, b.image_dim));
        }
        model_cum.push(a.level_dim);
        leg_cum.push(b.level_dim);
    }
    rec.dims_target = graded_from_filtered(&model_cum);
    rec.set_leg_dims(side, graded_from_filtered(&leg_cum));
    Ok(rec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ModuleModel;
    use crate::poly::Poly;
    use crate::presentation::TruncatedAlgebra;

    fn cubic() -> Presentation {
        Presentation::parse(&[("Y", 2), ("Z", 3)], &["Y*Z - Y^3 - Z^2"]).unwrap()
    }

    fn images(alg: &TruncatedAlgebra, names: &[&str]) -> Vec<Vector> {
        let vars: Vec<String> = ["Y", "Z"].iter().map(|s| s.to_string()).collect();
        names.iter().map(|n| alg.element_of_poly(&Poly::parse(n, &vars).unwrap()).unwrap()).collect()
    }

    #[test]
    fn presentation_maps_onto_its_own_truncation() {
        let alg = TruncatedAlgebra::from_presentation(&cubic(), 8).unwrap();
        let rec = check_ring_map("self", Side::Target, &cubic(), &alg, &images(&alg, &["Y", "Z"]), 8).unwrap();
        assert!(rec.pass, "{:?}", rec.witnesses);
        assert_eq!(rec.dims_target, cubic().quotient_dims(8));
    }

    #[test]
    fn missing_relation_is_witnessed() {
        let alg = TruncatedAlgebra::from_presentation(&cubic(), 8).unwrap();
        let free = Presentation::parse(&[("Y", 2), ("Z", 3)], &[]).unwrap();
        let rec = check_ring_map("free", Side::Target, &free, &alg, &images(&alg, &["Y", "Z"]), 8).unwrap();
        assert!(!rec.pass);
        assert!(rec.witnesses.iter().any(|w| w.contains("weight 6")), "{:?}", rec.witnesses);
    }

    #[test]
    fn wrong_generator_images_fail() {
        let alg = TruncatedAlgebra::from_presentation(&cubic(), 8).unwrap();
        let rec = check_ring_map("swap", Side::Target, &cubic(), &alg, &images(&alg, &["Y", "Y"]), 8).unwrap();
        assert!(!rec.pass);
    }

    #[test]
    fn module_model_against_itself() {
        let m = ModuleModel::closed(2, 8);
        let gens = m.generator_weights();
        let leg = ModuleLeg { target: &m, ring_gens: m.ring_images(), module_gens: m.module_images() };
        let rec = check_module_map("self", Side::Target, &cubic(), &gens, &leg, &leg, 8).unwrap();
        assert!(rec.pass, "{:?}", rec.witnesses);

        let mut swapped = m.module_images();
        swapped.swap(0, 1);
        let bad = ModuleLeg { target: &m, ring_gens: m.ring_images(), module_gens: swapped };
        let rec = check_module_map("swap", Side::Target, &cubic(), &gens, &leg, &bad, 8).unwrap();
        assert!(!rec.pass);
    }
}
