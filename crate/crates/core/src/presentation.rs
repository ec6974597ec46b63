//! Finitely presented weighted algebras, their truncated ideals, concrete
//! truncated models and fiber products.
//!
//! Relations need not be weighted-homogeneous. The ideal is filtered by
//! `I_{<=w} = span{ m*r : weight(m) + topweight(r) <= w }` and all
//! per-weight dimensions refer to the associated graded pieces, which agree
//! with the graded pieces when every relation is homogeneous.

use std::collections::HashMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::compare::{check_ring_map, FilteredTarget};
use crate::error::{Error, Result};
use crate::exact_linalg::{parse_rat, solve_combination, unit_vec, zero_vec, Rat, RowSpace, Vector};
use crate::poly::{monomial_weight, monomials_up_to, render_monomial, Monomial, Poly};
use crate::report::{CheckRecord, Side};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    pub name: String,
    pub weight: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    generators: Vec<Generator>,
    relations: Vec<Poly>,
}

impl Presentation {
    pub fn new(generators: Vec<Generator>, relations: Vec<Poly>) -> Result<Self> {
        if let Some(g) = generators.iter().find(|g| g.weight == 0) {
            return Err(Error::Invalid(format!("generator {} has weight 0", g.name)));
        }
        for (i, g) in generators.iter().enumerate() {
            if generators[..i].iter().any(|h| h.name == g.name) {
                return Err(Error::Invalid(format!("duplicate generator {}", g.name)));
            }
        }
        if relations.iter().any(|r| r.nvars() != generators.len()) {
            return Err(Error::Invalid("relation arity does not match generators".into()));
        }
        Ok(Presentation { generators, relations })
    }

    /// Builds from `(name, weight)` pairs and relation strings.
    pub fn parse(gens: &[(&str, u32)], relations: &[&str]) -> Result<Self> {
        let generators: Vec<Generator> =
            gens.iter().map(|(n, w)| Generator { name: n.to_string(), weight: *w }).collect();
        let names: Vec<String> = generators.iter().map(|g| g.name.clone()).collect();
        let relations = relations.iter().map(|r| Poly::parse(r, &names)).collect::<Result<_>>()?;
        Presentation::new(generators, relations)
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn relations(&self) -> &[Poly] {
        &self.relations
    }

    pub fn names(&self) -> Vec<String> {
        self.generators.iter().map(|g| g.name.clone()).collect()
    }

    pub fn weights(&self) -> Vec<u32> {
        self.generators.iter().map(|g| g.weight).collect()
    }

    pub fn nvars(&self) -> usize {
        self.generators.len()
    }

    pub fn is_homogeneous(&self) -> bool {
        let w = self.weights();
        self.relations.iter().all(|r| r.is_homogeneous(&w))
    }

    pub fn render_relations(&self) -> Vec<String> {
        let (n, w) = (self.names(), self.weights());
        self.relations.iter().map(|r| r.render(&n, &w)).collect()
    }

    pub fn monomials_up_to(&self, max_weight: u32) -> Vec<Monomial> {
        monomials_up_to(&self.weights(), max_weight)
    }

    /// For each weight `w`, ideal elements of level exactly `w` that are
    /// independent modulo lower levels.
    pub fn ideal_truncation(&self, max_weight: u32) -> Vec<Vec<Poly>> {
        let ideal = TruncatedIdeal::new(self, max_weight);
        (0..=max_weight).map(|w| ideal.new_at(w).iter().map(|v| ideal.to_poly(v)).collect()).collect()
    }

    /// Per-weight dimensions of the (associated graded) quotient.
    pub fn quotient_dims(&self, max_weight: u32) -> Vec<usize> {
        crate::report::graded_from_filtered(&self.filtered_dims(max_weight))
    }

    /// Dimensions of the quotient filtration levels `<= w`.
    pub fn filtered_dims(&self, max_weight: u32) -> Vec<usize> {
        let ideal = TruncatedIdeal::new(self, max_weight);
        (0..=max_weight).map(|w| ideal.prefix(w) - ideal.level(w).dim()).collect()
    }

    pub fn to_doc(&self) -> AlgebraDoc {
        AlgebraDoc::Quotient { generators: self.generators.clone(), relations: self.render_relations() }
    }
}

/// JSON form of an algebra description.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AlgebraDoc {
    Quotient { generators: Vec<Generator>, relations: Vec<String> },
    FiberProduct { factors: Vec<FactorDoc> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorDoc {
    pub generators: Vec<Generator>,
    pub relations: Vec<String>,
    /// Point at which the factor is evaluated, one rational per generator.
    pub evaluation: Vec<String>,
}

/// Either kind of algebra description.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Algebra {
    Quotient(Presentation),
    FiberProduct(FiberProductDesc),
}

impl Algebra {
    pub fn from_doc(doc: &AlgebraDoc) -> Result<Self> {
        match doc {
            AlgebraDoc::Quotient { generators, relations } => {
                Ok(Algebra::Quotient(quotient_from_parts(generators, relations)?))
            }
            AlgebraDoc::FiberProduct { factors } => {
                let factors = factors
                    .iter()
                    .map(|f| {
                        let p = quotient_from_parts(&f.generators, &f.relations)?;
                        let point = f
                            .evaluation
                            .iter()
                            .map(|s| parse_rat(s).ok_or_else(|| Error::Parse(format!("bad rational {s:?}"))))
                            .collect::<Result<Vec<_>>>()?;
                        Ok(Factor { algebra: p, point })
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Algebra::FiberProduct(FiberProductDesc::new(factors)?))
            }
        }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let doc: AlgebraDoc = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Algebra::from_doc(&doc)
    }

    pub fn to_doc(&self) -> AlgebraDoc {
        match self {
            Algebra::Quotient(p) => p.to_doc(),
            Algebra::FiberProduct(d) => AlgebraDoc::FiberProduct {
                factors: d
                    .factors
                    .iter()
                    .map(|f| FactorDoc {
                        generators: f.algebra.generators.clone(),
                        relations: f.algebra.render_relations(),
                        evaluation: f.point.iter().map(|x| x.to_string()).collect(),
                    })
                    .collect(),
            },
        }
    }

    /// Concrete truncated model of the algebra.
    pub fn truncate(&self, max_weight: u32) -> Result<TruncatedAlgebra> {
        match self {
            Algebra::Quotient(p) => TruncatedAlgebra::from_presentation(p, max_weight),
            Algebra::FiberProduct(d) => fiber_product_oracle(d, max_weight),
        }
    }
}

fn quotient_from_parts(generators: &[Generator], relations: &[String]) -> Result<Presentation> {
    let names: Vec<String> = generators.iter().map(|g| g.name.clone()).collect();
    let rels = relations.iter().map(|r| Poly::parse(r, &names)).collect::<Result<_>>()?;
    Presentation::new(generators.to_vec(), rels)
}

/// Truncated monomial space with the filtered span of the ideal.
#[derive(Clone, Debug)]
pub struct TruncatedIdeal {
    monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    prefix: Vec<usize>,
    /// Multiples `m * r` tagged with their level.
    products: Vec<(u32, Vector)>,
    names: Vec<String>,
    weights: Vec<u32>,
}

impl TruncatedIdeal {
    pub fn new(p: &Presentation, max_weight: u32) -> Self {
        let weights = p.weights();
        let monomials = monomials_up_to(&weights, max_weight);
        let index: HashMap<Monomial, usize> = monomials.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        let prefix =
            (0..=max_weight).map(|w| monomials.iter().filter(|m| monomial_weight(m, &weights) <= w).count()).collect();
        let mut products = Vec::new();
        for r in p.relations() {
            let Some(top) = r.top_weight(&weights) else { continue };
            for m in &monomials {
                let level = monomial_weight(m, &weights) + top;
                if level > max_weight {
                    continue;
                }
                let mut v = zero_vec(monomials.len());
                for (t, c) in r.terms() {
                    let prod: Monomial = t.iter().zip(m).map(|(a, b)| a + b).collect();
                    v[index[&prod]] += c;
                }
                products.push((level, v));
            }
        }
        products.sort_by_key(|(l, _)| *l);
        TruncatedIdeal { monomials, index, prefix, products, names: p.names(), weights }
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn index_of(&self, m: &[u32]) -> usize {
        self.index[m]
    }

    /// Number of monomials of weight at most `w`.
    pub fn prefix(&self, w: u32) -> usize {
        self.prefix[w as usize]
    }

    fn level_vectors(&self, w: u32) -> Vec<Vector> {
        let n = self.prefix(w);
        self.products.iter().filter(|(l, _)| *l <= w).map(|(_, v)| v[..n].to_vec()).collect()
    }

    /// The span `I_{<=w}` in the coordinates of monomials of weight `<= w`.
    pub fn level(&self, w: u32) -> RowSpace {
        RowSpace::new(self.prefix(w), &self.level_vectors(w))
    }

    fn new_at(&self, w: u32) -> Vec<Vector> {
        let n = self.prefix(w);
        let mut chosen: Vec<Vector> = if w == 0 { Vec::new() } else { self.level_vectors(w - 1) }
            .into_iter()
            .map(|mut v| {
                v.resize(n, Rat::zero());
                v
            })
            .collect();
        let mut span = RowSpace::new(n, &chosen);
        let mut out = Vec::new();
        for (_, v) in self.products.iter().filter(|(l, _)| *l == w) {
            let v = v[..n].to_vec();
            if !span.contains(&v) {
                chosen.push(v.clone());
                span = RowSpace::new(n, &chosen);
                out.push(v);
            }
        }
        out
    }

    pub fn to_poly(&self, v: &[Rat]) -> Poly {
        let mut p = Poly::zero(self.weights.len());
        for (x, m) in v.iter().zip(&self.monomials) {
            if !x.is_zero() {
                p.add_term(m.clone(), x.clone());
            }
        }
        p
    }

    pub fn render(&self, v: &[Rat]) -> String {
        self.to_poly(v).render(&self.names, &self.weights)
    }
}

/// Finite-dimensional model of an algebra truncated at `max_weight`: a basis
/// with filtration weights, a unit and a partial multiplication table
/// (products whose weight would exceed the truncation are absent).
#[derive(Clone, Debug)]
pub struct TruncatedAlgebra {
    labels: Vec<String>,
    weights: Vec<u32>,
    max_weight: u32,
    unit: Vector,
    table: Vec<Vec<Option<Vector>>>,
    normal_form: Option<NormalForm>,
    tuples: Option<TupleModel>,
}

#[derive(Clone, Debug)]
struct TupleModel {
    factors: Vec<TruncatedAlgebra>,
    basis: Vec<Vector>,
}

#[derive(Clone, Debug)]
struct NormalForm {
    ideal: TruncatedIdeal,
    /// Ideal span in reversed (highest weight first) monomial coordinates.
    reversed: RowSpace,
    standard: Vec<usize>,
}

impl NormalForm {
    fn reduce(&self, v: &[Rat]) -> Vector {
        let n = v.len();
        let rev: Vector = v.iter().rev().cloned().collect();
        let red = self.reversed.reduce(&rev);
        self.standard.iter().map(|&i| red[n - 1 - i].clone()).collect()
    }
}

impl TruncatedAlgebra {
    pub fn from_presentation(p: &Presentation, max_weight: u32) -> Result<Self> {
        let ideal = TruncatedIdeal::new(p, max_weight);
        let n = ideal.monomials.len();
        let rev_vectors: Vec<Vector> =
            ideal.level_vectors(max_weight).iter().map(|v| v.iter().rev().cloned().collect()).collect();
        let reversed = RowSpace::new(n, &rev_vectors);
        let mut is_pivot = vec![false; n];
        for &c in reversed.pivots() {
            is_pivot[n - 1 - c] = true;
        }
        let standard: Vec<usize> = (0..n).filter(|&i| !is_pivot[i]).collect();
        let pw = p.weights();
        let names = p.names();
        let labels = standard.iter().map(|&i| render_monomial(&ideal.monomials[i], &names)).collect();
        let weights: Vec<u32> = standard.iter().map(|&i| monomial_weight(&ideal.monomials[i], &pw)).collect();
        let nf = NormalForm { ideal, reversed, standard };

        let k = nf.standard.len();
        let mut table = vec![vec![None; k]; k];
        for a in 0..k {
            for b in 0..k {
                if weights[a] + weights[b] > max_weight {
                    continue;
                }
                let ma = &nf.ideal.monomials[nf.standard[a]];
                let mb = &nf.ideal.monomials[nf.standard[b]];
                let prod: Monomial = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
                let v = nf.reduce(&unit_vec(n, nf.ideal.index[&prod]));
                let w = weights[a] + weights[b];
                if v.iter().zip(&weights).any(|(x, &wt)| !x.is_zero() && wt > w) {
                    return Err(Error::Invalid(format!(
                        "normal form of a weight-{w} product has higher weight terms; \
                         the relations do not give a filtered basis"
                    )));
                }
                table[a][b] = Some(v);
            }
        }
        let unit = unit_vec(k, 0);
        Ok(TruncatedAlgebra { labels, weights, max_weight, unit, table, normal_form: Some(nf), tuples: None })
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn max_weight(&self) -> u32 {
        self.max_weight
    }

    pub fn unit(&self) -> &Vector {
        &self.unit
    }

    pub fn basis_vector(&self, i: usize) -> Vector {
        unit_vec(self.dim(), i)
    }

    /// Per-weight dimensions.
    pub fn dims(&self) -> Vec<usize> {
        (0..=self.max_weight).map(|w| self.weights.iter().filter(|&&x| x == w).count()).collect()
    }

    /// Multiplies two elements; fails if a needed product exceeds the truncation.
    pub fn mul(&self, a: &[Rat], b: &[Rat]) -> Result<Vector> {
        let mut out = zero_vec(self.dim());
        for (i, x) in a.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (j, y) in b.iter().enumerate().filter(|(_, y)| !y.is_zero()) {
                let Some(p) = &self.table[i][j] else {
                    return Err(Error::WeightOverflow {
                        weight: self.weights[i] + self.weights[j],
                        max: self.max_weight,
                    });
                };
                let c = x * y;
                for (o, z) in out.iter_mut().zip(p) {
                    if !z.is_zero() {
                        *o += &c * z;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Element represented by a polynomial in the presentation's generators.
    pub fn element_of_poly(&self, p: &Poly) -> Result<Vector> {
        let nf = self
            .normal_form
            .as_ref()
            .ok_or_else(|| Error::Invalid("algebra was not built from a presentation".into()))?;
        let mut v = zero_vec(nf.ideal.monomials.len());
        for (m, c) in p.terms() {
            let i = nf
                .ideal
                .index
                .get(m)
                .ok_or(Error::WeightOverflow { weight: monomial_weight(m, &nf.ideal.weights), max: self.max_weight })?;
            v[*i] += c;
        }
        Ok(nf.reduce(&v))
    }

    pub fn render(&self, v: &[Rat]) -> String {
        crate::compare::render_sparse(v)
            .split(" + ")
            .map(|t| {
                if let Some((c, b)) = t.split_once("*b") {
                    let i: usize = b.parse().unwrap_or(0);
                    if c == "1" {
                        self.labels[i].clone()
                    } else {
                        format!("{c}*{}", self.labels[i])
                    }
                } else {
                    t.to_string()
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl FilteredTarget for TruncatedAlgebra {
    type Elem = Vector;

    fn one(&self) -> Result<Vector> {
        Ok(self.unit.clone())
    }

    fn mul(&self, a: &Vector, b: &Vector) -> Result<Vector> {
        TruncatedAlgebra::mul(self, a, b)
    }

    fn coords(&self, e: &Vector, _level: u32) -> Result<Vector> {
        Ok(e.clone())
    }

    fn level_span(&self, level: u32) -> Result<Vec<Vector>> {
        Ok((0..self.dim()).filter(|&i| self.weights[i] <= level).map(|i| self.basis_vector(i)).collect())
    }

    fn render_coords(&self, v: &[Rat], _level: u32) -> String {
        self.render(v)
    }
}

/// One factor of a fiber product over the base field: a presented algebra
/// and the point at which it is evaluated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factor {
    pub algebra: Presentation,
    pub point: Vec<Rat>,
}

impl Factor {
    pub fn at_origin(algebra: Presentation) -> Self {
        let n = algebra.nvars();
        Factor { algebra, point: zero_vec(n) }
    }
}

/// Fiber product `A_1 x_C A_2 x_C ... x_C A_k` of the factors along their
/// evaluation maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberProductDesc {
    factors: Vec<Factor>,
}

impl FiberProductDesc {
    pub fn new(factors: Vec<Factor>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::Invalid("fiber product needs at least one factor".into()));
        }
        for (k, f) in factors.iter().enumerate() {
            if f.point.len() != f.algebra.nvars() {
                return Err(Error::Invalid(format!(
                    "factor {k}: evaluation point has {} coordinates for {} generators",
                    f.point.len(),
                    f.algebra.nvars()
                )));
            }
            for r in f.algebra.relations() {
                if !r.eval_at(&f.point).is_zero() {
                    return Err(Error::Invalid(format!(
                        "factor {k}: evaluation is not well-defined, relation {} does not vanish",
                        r.render(&f.algebra.names(), &f.algebra.weights())
                    )));
                }
            }
        }
        Ok(FiberProductDesc { factors })
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }
}

/// Tuple model of a fiber product: tuples of factor elements with equal
/// evaluations, with a basis chosen level by level.
pub fn fiber_product_oracle(desc: &FiberProductDesc, max_weight: u32) -> Result<TruncatedAlgebra> {
    let algebras: Vec<TruncatedAlgebra> = desc
        .factors
        .iter()
        .map(|f| TruncatedAlgebra::from_presentation(&f.algebra, max_weight))
        .collect::<Result<_>>()?;
    let evals: Vec<Vector> = desc
        .factors
        .iter()
        .zip(&algebras)
        .map(|(f, a)| {
            let nf = a.normal_form.as_ref().expect("built from presentation");
            nf.standard
                .iter()
                .map(|&i| {
                    let m = &nf.ideal.monomials[i];
                    Poly::monomial(m.clone(), Rat::one()).eval_at(&f.point)
                })
                .collect()
        })
        .collect();
    let offsets: Vec<usize> = algebras
        .iter()
        .scan(0, |acc, a| {
            let o = *acc;
            *acc += a.dim();
            Some(o)
        })
        .collect();
    let total: usize = algebras.iter().map(|a| a.dim()).sum();
    let tuple_weights: Vec<u32> = algebras.iter().flat_map(|a| a.weights.clone()).collect();

    // Constraints eval_0 = eval_i on tuple coordinates.
    let constraints: Vec<Vector> = (1..algebras.len())
        .map(|i| {
            let mut row = zero_vec(total);
            for (j, x) in evals[0].iter().enumerate() {
                row[offsets[0] + j] += x;
            }
            for (j, x) in evals[i].iter().enumerate() {
                row[offsets[i] + j] -= x;
            }
            row
        })
        .collect();

    let mut basis: Vec<Vector> = Vec::new();
    let mut weights: Vec<u32> = Vec::new();
    for w in 0..=max_weight {
        let cols: Vec<usize> = (0..total).filter(|&c| tuple_weights[c] <= w).collect();
        let sub = crate::exact_linalg::Mat::from_row_vectors(
            cols.len(),
            &constraints.iter().map(|r| cols.iter().map(|&c| r[c].clone()).collect()).collect::<Vec<_>>(),
        );
        let kernel = if constraints.is_empty() {
            (0..cols.len()).map(|i| unit_vec(cols.len(), i)).collect()
        } else {
            crate::exact_linalg::kernel_basis(&sub)
        };
        for k in kernel {
            let mut v = zero_vec(total);
            for (x, &c) in k.into_iter().zip(&cols) {
                v[c] = x;
            }
            let span = RowSpace::new(total, &basis);
            if !span.contains(&v) {
                basis.push(v);
                weights.push(w);
            }
        }
    }

    let split = |v: &[Rat]| -> Vec<Vector> {
        algebras.iter().zip(&offsets).map(|(a, &o)| v[o..o + a.dim()].to_vec()).collect()
    };
    let labels: Vec<String> = basis
        .iter()
        .map(|v| {
            let parts: Vec<String> = split(v).iter().zip(&algebras).map(|(x, a)| a.render(x)).collect();
            format!("({})", parts.join(", "))
        })
        .collect();
    let express = |t: &Vector| -> Result<Vector> {
        solve_combination(total, &basis, t)
            .ok_or_else(|| Error::Invalid("fiber product is not closed under multiplication".into()))
    };
    let k = basis.len();
    let mut table = vec![vec![None; k]; k];
    for a in 0..k {
        for b in 0..k {
            if weights[a] + weights[b] > max_weight {
                continue;
            }
            let (xa, xb) = (split(&basis[a]), split(&basis[b]));
            let mut prod = Vec::with_capacity(total);
            for (i, alg) in algebras.iter().enumerate() {
                prod.extend(alg.mul(&xa[i], &xb[i])?);
            }
            table[a][b] = Some(express(&prod)?);
        }
    }
    let unit_tuple: Vector = algebras.iter().flat_map(|a| a.unit.clone()).collect();
    let unit = express(&unit_tuple)?;
    Ok(TruncatedAlgebra {
        labels,
        weights,
        max_weight,
        unit,
        table,
        normal_form: None,
        tuples: Some(TupleModel { factors: algebras, basis }),
    })
}

/// Element of a fiber product model given by one polynomial per factor.
pub fn fiber_product_element(oracle: &TruncatedAlgebra, parts: &[Poly]) -> Result<Vector> {
    let tuples = oracle.tuples.as_ref().ok_or_else(|| Error::Invalid("algebra is not a fiber product model".into()))?;
    if parts.len() != tuples.factors.len() {
        return Err(Error::Invalid("one polynomial per factor is required".into()));
    }
    let mut tuple = Vec::new();
    for (a, p) in tuples.factors.iter().zip(parts) {
        tuple.extend(a.element_of_poly(p)?);
    }
    solve_combination(tuple.len(), &tuples.basis, &tuple)
        .ok_or_else(|| Error::Invalid("tuple does not lie in the fiber product".into()))
}

/// Checks that `gen_images` (one target element per source generator)
/// induces an isomorphism from `source` onto `target` up to `max_weight`.
pub fn presentations_isomorphic_via(
    source: &Presentation,
    target: &TruncatedAlgebra,
    gen_images: &[Vector],
    max_weight: u32,
) -> Result<CheckRecord> {
    check_ring_map("presentation isomorphism", Side::Target, source, target, gen_images, max_weight)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_linalg::{is_zero_vec, rat};

    fn r_ring() -> Presentation {
        Presentation::parse(&[("X", 1), ("Y", 2), ("Z", 3)], &["X*Y*Z - Y^3 - Z^2"]).unwrap()
    }

    fn a_ring() -> Presentation {
        Presentation::parse(&[("Y", 2), ("Z", 3)], &["Y*Z - Y^3 - Z^2"]).unwrap()
    }

    fn a_times_line() -> FiberProductDesc {
        let t = Presentation::parse(&[("T", 1)], &[]).unwrap();
        FiberProductDesc::new(vec![Factor::at_origin(a_ring()), Factor::at_origin(t)]).unwrap()
    }

    #[test]
    fn ideal_truncation_of_cubic_ring() {
        let it = r_ring().ideal_truncation(7);
        assert!(it[5].is_empty());
        let names = r_ring().names();
        let w = [1, 2, 3];
        assert_eq!(it[6].len(), 1);
        assert_eq!(it[6][0].render(&names, &w), "X*Y*Z - Y^3 - Z^2");
        assert_eq!(it[7].len(), 1);
        assert_eq!(it[7][0].render(&names, &w), "X^2*Y*Z - X*Y^3 - X*Z^2");
    }

    #[test]
    fn quotient_dims_of_standard_rings() {
        assert_eq!(r_ring().quotient_dims(6), vec![1, 1, 2, 3, 4, 5, 6]);
        assert_eq!(a_ring().quotient_dims(6), vec![1, 0, 1, 1, 1, 1, 1]);
        let free = Presentation::parse(&[("X", 1)], &[]).unwrap();
        assert_eq!(free.quotient_dims(5), vec![1; 6]);
    }

    #[test]
    fn truncated_model_multiplies_modulo_relation() {
        let a = TruncatedAlgebra::from_presentation(&a_ring(), 8).unwrap();
        assert_eq!(a.dims(), a_ring().quotient_dims(8));
        let names = a_ring().names();
        let y = a.element_of_poly(&Poly::parse("Y", &names).unwrap()).unwrap();
        let z = a.element_of_poly(&Poly::parse("Z", &names).unwrap()).unwrap();
        let yz = a.mul(&y, &z).unwrap();
        let rhs = a.element_of_poly(&Poly::parse("Y^3 + Z^2", &names).unwrap()).unwrap();
        assert_eq!(yz, rhs);
        let big = a.element_of_poly(&Poly::parse("Y^4", &names).unwrap()).unwrap();
        assert!(matches!(a.mul(&big, &big), Err(Error::WeightOverflow { .. })));
    }

    #[test]
    fn fiber_product_oracle_dims_and_products() {
        let desc = a_times_line();
        let fp = fiber_product_oracle(&desc, 4).unwrap();
        assert_eq!(fp.dims(), vec![1, 1, 2, 2, 2]);
        let one = |n: usize| Poly::one(n);
        let y = fiber_product_element(&fp, &[Poly::var(2, 0), Poly::zero(1)]).unwrap();
        let t = fiber_product_element(&fp, &[Poly::zero(2), Poly::var(1, 0)]).unwrap();
        assert!(is_zero_vec(&fp.mul(&y, &t).unwrap()));
        let unit = fiber_product_element(&fp, &[one(2), one(1)]).unwrap();
        assert_eq!(&unit, fp.unit());
        assert!(fiber_product_element(&fp, &[one(2), Poly::zero(1)]).is_err());
    }

    #[test]
    fn fiber_product_matches_its_quotient_presentation() {
        let desc = a_times_line();
        let fp = fiber_product_oracle(&desc, 8).unwrap();
        let quotient =
            Presentation::parse(&[("Y", 2), ("Z", 3), ("T", 1)], &["Y*Z - Y^3 - Z^2", "Y*T", "Z*T"]).unwrap();
        let images = vec![
            fiber_product_element(&fp, &[Poly::var(2, 0), Poly::zero(1)]).unwrap(),
            fiber_product_element(&fp, &[Poly::var(2, 1), Poly::zero(1)]).unwrap(),
            fiber_product_element(&fp, &[Poly::zero(2), Poly::var(1, 0)]).unwrap(),
        ];
        let rec = presentations_isomorphic_via(&quotient, &fp, &images, 8).unwrap();
        assert!(rec.pass, "{:?}", rec.witnesses);
        assert_eq!(rec.dims_target, fp.dims());
    }

    #[test]
    fn identity_map_is_an_isomorphism() {
        let r = r_ring();
        let model = TruncatedAlgebra::from_presentation(&r, 8).unwrap();
        let images: Vec<Vector> = (0..3).map(|i| model.element_of_poly(&Poly::var(3, i)).unwrap()).collect();
        let rec = presentations_isomorphic_via(&r, &model, &images, 8).unwrap();
        assert!(rec.pass, "{:?}", rec.witnesses);
        assert_eq!(rec.dims_target, vec![1, 1, 2, 3, 4, 5, 6, 7, 8]);
    }

    #[test]
    fn missing_relation_is_reported_with_witness() {
        let free = Presentation::parse(&[("Y", 2), ("Z", 3)], &[]).unwrap();
        let model = TruncatedAlgebra::from_presentation(&a_ring(), 8).unwrap();
        let images: Vec<Vector> = (0..2).map(|i| model.element_of_poly(&Poly::var(2, i)).unwrap()).collect();
        let rec = presentations_isomorphic_via(&free, &model, &images, 8).unwrap();
        assert!(!rec.pass);
        assert!(rec.witnesses[0].starts_with("weight 6:"), "{:?}", rec.witnesses);
        assert!(rec.witnesses[0].contains("Y^3"));
    }

    #[test]
    fn ill_defined_evaluation_is_rejected() {
        let bad = Factor { algebra: a_ring(), point: vec![rat(1), rat(1)] };
        assert!(FiberProductDesc::new(vec![bad]).is_err());
        let arity = Factor { algebra: a_ring(), point: vec![rat(0)] };
        assert!(FiberProductDesc::new(vec![arity]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let src = r#"{"generators":[{"name":"Y","weight":2},{"name":"Z","weight":3}],
                      "relations":["Y*Z - Y^3 - Z^2"],"kind":"quotient"}"#;
        let alg = Algebra::from_json(src).unwrap();
        assert_eq!(alg, Algebra::Quotient(a_ring()));
        let back = serde_json::to_string(&alg.to_doc()).unwrap();
        assert_eq!(Algebra::from_json(&back).unwrap(), alg);

        let fp = Algebra::FiberProduct(a_times_line());
        let s = serde_json::to_string(&fp.to_doc()).unwrap();
        assert_eq!(Algebra::from_json(&s).unwrap(), fp);
        assert_eq!(fp.truncate(4).unwrap().dims(), vec![1, 1, 2, 2, 2]);
    }
}
