//! Truncated Čech complexes and global sections on trivalent configurations.
//!
//! The cover has one open `U_p` per node: the components through `p` with
//! all other node points and all punctures removed. Double intersections are
//! the components joining two nodes with every special point removed, and
//! triple intersections are empty. Sections on a piece of a component are
//! rational functions in the component chart in partial-fraction form, so
//! restriction is coordinate inclusion. Vector fields `f(x) d/dx` are stored
//! through their coefficient `f`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::curve::{Configuration, Point};
use crate::error::{Error, Result};
use crate::exact_linalg::{
    cokernel_with_projection, kernel_basis, rank_of_vectors, unit_vec, zero_vec, Cokernel, Mat, Rat, Vector,
};
use crate::ratfun::{term_deriv, term_value, RatFun, Term};

/// `O`, `L:k`, `Tbal` or `Tbal*L:k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "sheaf", rename_all = "snake_case")]
pub enum Sheaf {
    /// `L^k`; `k = 0` is the structure sheaf.
    Line { k: u32 },
    /// Balanced vector fields twisted by `L^k`.
    Tbal { k: u32 },
}

impl Sheaf {
    pub const O: Sheaf = Sheaf::Line { k: 0 };
    pub const T: Sheaf = Sheaf::Tbal { k: 0 };

    pub fn twist(self) -> u32 {
        match self {
            Sheaf::Line { k } | Sheaf::Tbal { k } => k,
        }
    }

    pub fn is_vector(self) -> bool {
        matches!(self, Sheaf::Tbal { .. })
    }

    /// Pole order allowed at infinity on a component of bundle degree `m`
    /// where infinity is not removed.
    fn base_degree(self, m: i64) -> Result<u32> {
        let d = self.twist() as i64 * m + if self.is_vector() { 2 } else { 0 };
        u32::try_from(d).map_err(|_| Error::Invalid("negative bundle degrees are not supported".into()))
    }
}

impl fmt::Display for Sheaf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sheaf::Line { k: 0 } => f.write_str("O"),
            Sheaf::Line { k } => write!(f, "L:{k}"),
            Sheaf::Tbal { k: 0 } => f.write_str("Tbal"),
            Sheaf::Tbal { k } => write!(f, "Tbal*L:{k}"),
        }
    }
}

impl FromStr for Sheaf {
    type Err = Error;

    fn from_str(s: &str) -> Result<Sheaf> {
        let t = s.trim();
        let twist = |k: &str| k.trim().parse::<u32>().map_err(|_| Error::Parse(format!("bad twist in sheaf '{s}'")));
        if t == "O" {
            Ok(Sheaf::O)
        } else if t == "Tbal" {
            Ok(Sheaf::T)
        } else if let Some(k) = t.strip_prefix("Tbal*L:") {
            Ok(Sheaf::Tbal { k: twist(k)? })
        } else if let Some(k) = t.strip_prefix("L:") {
            Ok(Sheaf::Line { k: twist(k)? })
        } else {
            Err(Error::Parse(format!("unknown sheaf '{s}' (expected O, L:k, Tbal, Tbal*L:k)")))
        }
    }
}

/// Truncated basis of sections on one piece of a component.
#[derive(Clone, Debug)]
pub struct SlotSpace {
    pub component: usize,
    terms: Vec<Term>,
    index: HashMap<Term, usize>,
}

impl SlotSpace {
    fn new(component: usize, poly_max: Option<u32>, poles: &[(Rat, u32)]) -> Self {
        let mut terms: Vec<Term> = Vec::new();
        if let Some(p) = poly_max {
            terms.extend((0..=p).map(Term::Pow));
        }
        let mut poles = poles.to_vec();
        poles.sort();
        for (q, n) in poles {
            terms.extend((1..=n).map(|b| Term::Pole(q.clone(), b)));
        }
        let index = terms.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
        SlotSpace { component, terms, index }
    }

    pub fn dim(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn coords(&self, f: &RatFun) -> Result<Vector> {
        let mut v = zero_vec(self.dim());
        for (t, c) in f.terms() {
            let i = self.index.get(t).ok_or_else(|| {
                Error::TruncationLeak(format!("term {} outside the truncated section space", term_label(t)))
            })?;
            v[*i] = c.clone();
        }
        Ok(v)
    }

    pub fn element(&self, v: &[Rat]) -> RatFun {
        let mut f = RatFun::zero();
        for (t, c) in self.terms.iter().zip(v) {
            f.add_term(t.clone(), c.clone());
        }
        f
    }

    fn unit_at(&self, t: &Term) -> Vector {
        let mut v = zero_vec(self.dim());
        if let Some(&i) = self.index.get(t) {
            v[i] = Rat::one();
        }
        v
    }

    /// Linear functional giving the value at a mark. At infinity the value is
    /// the coefficient of `x^base` in the trivialization of degree `base`.
    fn value_at(&self, m: &Point, base: u32) -> Vector {
        match m {
            Point::Finite(q) => self.terms.iter().map(|t| term_value(t, q)).collect(),
            Point::Inf => self.unit_at(&Term::Pow(base)),
        }
    }

    /// Rotation number at a mark of a field vanishing there.
    fn rotation_at(&self, m: &Point, base: u32) -> Vector {
        match m {
            Point::Finite(q) => self.terms.iter().map(|t| term_deriv(t, q)).collect(),
            Point::Inf => {
                let mut v = self.unit_at(&Term::Pow(base - 1));
                for x in v.iter_mut() {
                    *x = -x.clone();
                }
                v
            }
        }
    }
}

fn term_label(t: &Term) -> String {
    RatFun::term(t.clone(), Rat::one()).render("x")
}

/// Rotation number of the field `f d/dx` at a mark where it vanishes. `base`
/// is the pole order allowed at infinity (2 for untwisted fields).
pub fn rotation_number(f: &RatFun, m: &Point, base: u32) -> Result<Rat> {
    match m {
        Point::Finite(q) => {
            if !f.eval(q)?.is_zero() {
                return Err(Error::Invalid(format!("field does not vanish at {q}")));
            }
            f.deriv_at(q)
        }
        Point::Inf => {
            if f.poly_degree().is_some_and(|d| d > base) || !f.coeff(&Term::Pow(base)).is_zero() {
                return Err(Error::Invalid("field does not vanish at inf".into()));
            }
            Ok(-f.coeff(&Term::Pow(base - 1)))
        }
    }
}

/// Section space on a component with the given points removed. Removed node
/// points allow poles up to `n`, punctures up to `pcap`.
fn piece_space(
    cfg: &Configuration,
    sheaf: Sheaf,
    comp: usize,
    removed_marks: &[Point],
    n: u32,
    pcap: u32,
) -> Result<SlotSpace> {
    let base = sheaf.base_degree(cfg.bundle_degree(comp))?;
    let mut inf_cap: Option<u32> = None;
    let mut poles = Vec::new();
    let removed = removed_marks.iter().map(|m| (m, n));
    let punct = cfg.components[comp].punctures.iter().map(|p| (p, pcap));
    for (p, cap) in removed.chain(punct) {
        match p {
            Point::Finite(q) => poles.push((q.clone(), cap)),
            Point::Inf => inf_cap = Some(inf_cap.map_or(cap, |c| c.max(cap))),
        }
    }
    Ok(SlotSpace::new(comp, Some(base + inf_cap.unwrap_or(0)), &poles))
}

/// Linear conditions at one node: matching values for line bundles;
/// vanishing plus balanced rotation numbers for vector fields.
fn node_conditions(
    cfg: &Configuration,
    sheaf: Sheaf,
    branches: &[(usize, &SlotSpace, &Point)],
    total: usize,
) -> Result<Vec<Vector>> {
    let embed = |off: usize, v: Vector| {
        let mut w = zero_vec(total);
        for (i, x) in v.into_iter().enumerate() {
            w[off + i] = x;
        }
        w
    };
    let mut rows = Vec::new();
    if sheaf.is_vector() {
        let mut balance = zero_vec(total);
        for (off, sp, m) in branches {
            let base = sheaf.base_degree(cfg.bundle_degree(sp.component))?;
            rows.push(embed(*off, sp.value_at(m, base)));
            let rot = embed(*off, sp.rotation_at(m, base));
            for (b, r) in balance.iter_mut().zip(rot) {
                *b += r;
            }
        }
        rows.push(balance);
    } else {
        let vals: Vec<Vector> = branches
            .iter()
            .map(|(off, sp, m)| {
                let base = sheaf.base_degree(cfg.bundle_degree(sp.component))?;
                Ok(embed(*off, sp.value_at(m, base)))
            })
            .collect::<Result<_>>()?;
        for w in vals.windows(2) {
            rows.push(w[0].iter().zip(&w[1]).map(|(a, b)| a - b).collect());
        }
    }
    Ok(rows)
}

/// Per-component sections, indexed like `Configuration::components`.
pub type Section = Vec<RatFun>;

pub fn section_mul(a: &Section, b: &Section) -> Section {
    a.iter().zip(b).map(|(f, g)| f.mul(g)).collect()
}

pub fn render_section(cfg: &Configuration, s: &Section) -> String {
    let parts: Vec<String> = s
        .iter()
        .zip(&cfg.components)
        .filter(|(f, _)| !f.is_zero())
        .map(|(f, c)| format!("{}: {}", c.id, f.render("x")))
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join("; ")
    }
}

fn check_cover(cfg: &Configuration) -> Result<()> {
    cfg.validate().map_err(Error::InvalidConfiguration)?;
    for c in &cfg.components {
        if c.marks.len() > 2 {
            return Err(Error::Invalid(format!(
                "component {} meets more than two node points; the cover would have triple overlaps",
                c.id
            )));
        }
    }
    for n in 0..cfg.nodes.len() {
        let comps: Vec<usize> = cfg.branches(n).iter().map(|b| b.0).collect();
        if (0..comps.len()).any(|i| comps[i + 1..].contains(&comps[i])) {
            return Err(Error::Invalid(format!("self-node {} is not supported", cfg.nodes[n].id)));
        }
    }
    Ok(())
}

/// Global sections with pole order at most `cap` at every puncture.
#[derive(Clone, Debug)]
pub struct GlobalSections {
    pub sheaf: Sheaf,
    pub cap: u32,
    spaces: Vec<SlotSpace>,
    offsets: Vec<usize>,
    dim: usize,
    basis: Vec<Vector>,
}

impl GlobalSections {
    pub fn new(cfg: &Configuration, sheaf: Sheaf, cap: u32) -> Result<Self> {
        check_cover(cfg)?;
        let mut spaces = Vec::new();
        let mut offsets = Vec::new();
        let mut dim = 0;
        for c in 0..cfg.components.len() {
            let sp = piece_space(cfg, sheaf, c, &[], 0, cap)?;
            offsets.push(dim);
            dim += sp.dim();
            spaces.push(sp);
        }
        let mut rows = Vec::new();
        for n in 0..cfg.nodes.len() {
            let br = cfg.branches(n);
            let branches: Vec<(usize, &SlotSpace, &Point)> =
                br.iter().map(|(c, m)| (offsets[*c], &spaces[*c], m)).collect();
            rows.extend(node_conditions(cfg, sheaf, &branches, dim)?);
        }
        let basis = if rows.is_empty() {
            (0..dim).map(|i| unit_vec(dim, i)).collect()
        } else {
            kernel_basis(&Mat::from_row_vectors(dim, &rows))
        };
        Ok(GlobalSections { sheaf, cap, spaces, offsets, dim, basis })
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn coords(&self, s: &Section) -> Result<Vector> {
        let mut v = zero_vec(self.dim);
        for (c, f) in s.iter().enumerate() {
            for (i, x) in self.spaces[c].coords(f)?.into_iter().enumerate() {
                v[self.offsets[c] + i] = x;
            }
        }
        Ok(v)
    }

    pub fn section(&self, v: &[Rat]) -> Section {
        self.spaces.iter().zip(&self.offsets).map(|(sp, &off)| sp.element(&v[off..off + sp.dim()])).collect()
    }

    /// Component and basis term of every ambient coordinate.
    pub fn labels(&self) -> Vec<(usize, Term)> {
        self.spaces.iter().flat_map(|sp| sp.terms.iter().map(move |t| (sp.component, t.clone()))).collect()
    }

    pub fn basis_sections(&self) -> Vec<Section> {
        self.basis.iter().map(|v| self.section(v)).collect()
    }
}

/// One summand of the Čech 1-cochains: a component joining nodes `p < q`.
#[derive(Clone, Debug)]
struct Overlap {
    p: usize,
    q: usize,
    space: SlotSpace,
}

/// The two-term Čech complex `C^0 -> C^1` for a sheaf at truncation `n`.
#[derive(Clone, Debug)]
pub struct CechComplex {
    pub sheaf: Sheaf,
    pub truncation: u32,
    pub puncture_cap: u32,
    /// Per node, the branch spaces of `U_p` with offsets into the free `C^0` coordinates.
    c0: Vec<Vec<(usize, SlotSpace, Point)>>,
    c0_dim: usize,
    /// Basis of `C^0` (the node conditions cut out a subspace of the free coordinates).
    c0_basis: Vec<Vector>,
    c1: Vec<(usize, Overlap)>,
    c1_dim: usize,
    d: Mat,
}

impl CechComplex {
    pub fn build(cfg: &Configuration, sheaf: Sheaf, n: u32) -> Result<Self> {
        CechComplex::build_with_cap(cfg, sheaf, n, n)
    }

    pub fn build_with_cap(cfg: &Configuration, sheaf: Sheaf, n: u32, pcap: u32) -> Result<Self> {
        check_cover(cfg)?;
        if n == 0 {
            return Err(Error::Invalid("truncation must be at least 1".into()));
        }
        let mut c0 = Vec::new();
        let mut c0_dim = 0;
        let mut rows = Vec::new();
        let mut pending = Vec::new();
        for p in 0..cfg.nodes.len() {
            let mut branches = Vec::new();
            for (c, m) in cfg.branches(p) {
                let others: Vec<Point> = cfg.components[c].marks.iter().filter(|x| **x != m).cloned().collect();
                let sp = piece_space(cfg, sheaf, c, &others, n, pcap)?;
                branches.push((c0_dim, sp.clone(), m.clone()));
                c0_dim += sp.dim();
            }
            pending.push(p);
            c0.push(branches);
        }
        for p in pending {
            let br: Vec<(usize, &SlotSpace, &Point)> = c0[p].iter().map(|(off, sp, m)| (*off, sp, m)).collect();
            rows.extend(node_conditions(cfg, sheaf, &br, c0_dim)?);
        }
        let c0_basis = kernel_basis(&Mat::from_row_vectors(c0_dim, &rows));

        let mut c1 = Vec::new();
        let mut c1_dim = 0;
        for (c, comp) in cfg.components.iter().enumerate() {
            let nodes: Vec<usize> =
                (0..cfg.nodes.len()).filter(|&p| cfg.branches(p).iter().any(|b| b.0 == c)).collect();
            if nodes.len() == 2 {
                let space = piece_space(cfg, sheaf, c, &comp.marks, n, pcap)?;
                let dim = space.dim();
                c1.push((c1_dim, Overlap { p: nodes[0], q: nodes[1], space }));
                c1_dim += dim;
            }
        }

        // Restriction matrix from free C^0 coordinates to C^1, with the sign
        // convention (ds)_{pq} = s_q - s_p.
        let mut r = Mat::zeros(c1_dim, c0_dim);
        for (off1, ov) in &c1 {
            for (node, sign) in [(ov.q, Rat::one()), (ov.p, -Rat::one())] {
                let (off0, sp, _) = c0[node].iter().find(|b| b.1.component == ov.space.component).expect("branch");
                for (i, t) in sp.terms().iter().enumerate() {
                    let j =
                        ov.space.index.get(t).ok_or_else(|| {
                            Error::TruncationLeak(format!("restriction of {} leaves C^1", term_label(t)))
                        })?;
                    r.add_to(off1 + j, off0 + i, &sign);
                }
            }
        }
        let b = Mat::from_columns(c0_dim, &c0_basis);
        let d = r.mul(&b);
        Ok(CechComplex { sheaf, truncation: n, puncture_cap: pcap, c0, c0_dim, c0_basis, c1, c1_dim, d })
    }

    pub fn c0_dim(&self) -> usize {
        self.c0_basis.len()
    }

    pub fn c1_dim(&self) -> usize {
        self.c1_dim
    }

    pub fn differential(&self) -> &Mat {
        &self.d
    }

    pub fn cohomology(&self) -> Cohomology {
        let h0 = kernel_basis(&self.d);
        let h1 = cokernel_with_projection(&self.d);
        Cohomology { h0, h1 }
    }

    /// A 1-cochain from per-overlap functions, in `C^1` coordinates.
    pub fn c1_coords(&self, parts: &[RatFun]) -> Result<Vector> {
        let mut v = zero_vec(self.c1_dim);
        for ((off, ov), f) in self.c1.iter().zip(parts) {
            for (i, x) in ov.space.coords(f)?.into_iter().enumerate() {
                v[off + i] = x;
            }
        }
        Ok(v)
    }

    pub fn c1_parts(&self, v: &[Rat]) -> Vec<RatFun> {
        self.c1.iter().map(|(off, ov)| ov.space.element(&v[*off..off + ov.space.dim()])).collect()
    }

    pub fn overlap_components(&self) -> Vec<usize> {
        self.c1.iter().map(|(_, ov)| ov.space.component).collect()
    }

    /// Multiplies a 1-cochain by a global section, overlap by overlap.
    pub fn multiply_cochain(&self, s: &Section, v: &[Rat]) -> Result<Vector> {
        let parts: Vec<RatFun> =
            self.c1_parts(v).iter().zip(&self.c1).map(|(f, (_, ov))| s[ov.space.component].mul(f)).collect();
        self.c1_coords(&parts)
    }

    /// The global section carried by a `C^0` cocycle (coordinates in the `C^0` basis).
    pub fn global_section(&self, cfg: &Configuration, v: &[Rat]) -> Section {
        let mut free = zero_vec(self.c0_dim);
        for (c, x) in self.c0_basis.iter().zip(v) {
            for (f, y) in free.iter_mut().zip(c) {
                *f += x * y;
            }
        }
        let mut out = vec![RatFun::zero(); cfg.components.len()];
        for branches in &self.c0 {
            for (off, sp, _) in branches {
                out[sp.component] = sp.element(&free[*off..off + sp.dim()]);
            }
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct Cohomology {
    /// Kernel of `d` in `C^0` basis coordinates.
    pub h0: Vec<Vector>,
    pub h1: Cokernel,
}

impl Cohomology {
    pub fn h0_dim(&self) -> usize {
        self.h0.len()
    }

    pub fn h1_dim(&self) -> usize {
        self.h1.dim()
    }

    /// Cocycle representatives of the `h1` basis, in `C^1` coordinates.
    pub fn h1_representatives(&self) -> Vec<Vector> {
        self.h1.basis()
    }

    /// Action of a global section on `h1`, as a matrix whose columns are the
    /// images of the basis classes.
    pub fn action_on_h1(
        &self,
        cx: &CechComplex,
        s: &Section,
        target: &CechComplex,
        tcoh: &Cohomology,
    ) -> Result<Vec<Vector>> {
        self.h1_representatives()
            .iter()
            .map(|rep| {
                let prod = cx.multiply_cochain(s, rep)?;
                let parts = cx.c1_parts(&prod);
                let v = target.c1_coords(&parts)?;
                Ok(tcoh.h1.project(&v))
            })
            .collect()
    }

    /// Number of independent `h1` classes represented by constant cochains.
    pub fn constant_class_rank(&self, cx: &CechComplex) -> Result<usize> {
        let n = cx.c1.len();
        let vecs: Vec<Vector> = (0..n)
            .map(|i| {
                let mut parts = vec![RatFun::zero(); n];
                parts[i] = RatFun::one();
                Ok(self.h1.project(&cx.c1_coords(&parts)?))
            })
            .collect::<Result<_>>()?;
        Ok(rank_of_vectors(self.h1_dim(), &vecs))
    }
}

/// Dimensions at two truncations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Stability {
    pub truncations: (u32, u32),
    pub h0: (Vec<usize>, Vec<usize>),
    pub h1: (usize, usize),
    pub stable: bool,
}

/// Compares `h0` (by pole order up to `levels` when punctured) and `h1` between
/// truncations `n` and `n2`.
pub fn stabilization_check(cfg: &Configuration, sheaf: Sheaf, n: u32, n2: u32, levels: u32) -> Result<Stability> {
    let dims = |trunc: u32| -> Result<(Vec<usize>, usize)> {
        let h1 = CechComplex::build(cfg, sheaf, trunc)?.cohomology().h1_dim();
        let h0 = if cfg.is_compact() {
            vec![CechComplex::build(cfg, sheaf, trunc)?.cohomology().h0_dim()]
        } else {
            (0..=levels.min(trunc))
                .map(|w| Ok(CechComplex::build_with_cap(cfg, sheaf, trunc, w)?.cohomology().h0_dim()))
                .collect::<Result<_>>()?
        };
        Ok((h0, h1))
    };
    let (a0, a1) = dims(n)?;
    let (b0, b1) = dims(n2)?;
    let stable = a0 == b0 && a1 == b1;
    Ok(Stability { truncations: (n, n2), h0: (a0, b0), h1: (a1, b1), stable })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{build_mirror, chi_o, Variant};
    use crate::exact_linalg::rat;

    fn coh(g: usize, v: Variant, sheaf: Sheaf, n: u32) -> (CechComplex, Cohomology) {
        let cfg = build_mirror(g, v).unwrap();
        let cx = CechComplex::build(&cfg, sheaf, n).unwrap();
        let c = cx.cohomology();
        (cx, c)
    }

    #[test]
    fn theta_structure_sheaf() {
        let (_, c) = coh(2, Variant::Closed, Sheaf::O, 4);
        assert_eq!((c.h0_dim(), c.h1_dim()), (1, 2));
    }

    #[test]
    fn section_space_counts() {
        let cfg = build_mirror(2, Variant::Closed).unwrap();
        // U_p on the theta graph with N = 2: three branches with poles of order
        // at most 2 at the far mark and one shared value.
        let cx = CechComplex::build(&cfg, Sheaf::O, 2).unwrap();
        assert_eq!(cx.c0_dim(), 2 * 7);
        // A component piece without punctures: x^a for -2 <= a <= 2.
        let sp = piece_space(&cfg, Sheaf::O, 1, &cfg.components[1].marks, 2, 2).unwrap();
        assert_eq!(sp.dim(), 5);
    }

    #[test]
    fn punctured_structure_and_tangent_sheaves() {
        let (cx, c) = coh(2, Variant::Nodal { l: 1 }, Sheaf::O, 4);
        assert_eq!(c.h1_dim(), 1);
        assert_eq!(c.constant_class_rank(&cx).unwrap(), 1);
        let (_, t) = coh(2, Variant::Nodal { l: 1 }, Sheaf::T, 4);
        assert_eq!(t.h1_dim(), 0);
        let (_, t) = coh(3, Variant::Closed, Sheaf::T, 6);
        assert_eq!((t.h0_dim(), t.h1_dim()), (3, 1));
    }

    #[test]
    fn euler_characteristic_matches() {
        for g in 2..=4 {
            let cfg = build_mirror(g, Variant::Closed).unwrap();
            let c = CechComplex::build(&cfg, Sheaf::O, 4).unwrap().cohomology();
            assert_eq!(c.h0_dim() as i64 - c.h1_dim() as i64, chi_o(&cfg).unwrap());
        }
    }

    #[test]
    fn line_bundle_powers() {
        for k in 1..=4 {
            let (_, c) = coh(2, Variant::Closed, Sheaf::Line { k }, 6);
            assert_eq!((c.h0_dim(), c.h1_dim()), (k as usize, 1));
        }
    }

    #[test]
    fn coboundaries_project_to_zero() {
        let (cx, c) = coh(3, Variant::Nodal { l: 1 }, Sheaf::T, 4);
        for j in 0..cx.c0_dim() {
            let col = cx.differential().col_vec(j);
            assert!(c.h1.project(&col).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn rotation_numbers() {
        let x = RatFun::x_pow(1);
        assert_eq!(rotation_number(&x, &Point::Finite(rat(0)), 2).unwrap(), rat(1));
        assert_eq!(rotation_number(&x, &Point::Inf, 2).unwrap(), rat(-1));
        // (x/(1+x)) x d/dx = x - 1 + (1+x)^-1
        let mut f = RatFun::x_pow(1);
        f.add_term(Term::Pow(0), rat(-1));
        f.add_term(Term::Pole(rat(-1), 1), rat(1));
        assert_eq!(rotation_number(&f, &Point::Finite(rat(0)), 2).unwrap(), rat(0));
        assert!(rotation_number(&RatFun::one(), &Point::Finite(rat(0)), 2).is_err());
    }

    #[test]
    fn global_fields_are_balanced() {
        let cfg = build_mirror(3, Variant::Nodal { l: 1 }).unwrap();
        let gs = GlobalSections::new(&cfg, Sheaf::T, 4).unwrap();
        for s in gs.basis_sections() {
            for n in 0..cfg.nodes.len() {
                let total: Rat = cfg.branches(n).iter().map(|(c, m)| rotation_number(&s[*c], m, 2).unwrap()).sum();
                assert!(total.is_zero());
            }
        }
    }

    #[test]
    fn truncations_agree() {
        let cfg = build_mirror(2, Variant::Nodal { l: 1 }).unwrap();
        assert!(stabilization_check(&cfg, Sheaf::O, 4, 7, 4).unwrap().stable);
        let cfg = build_mirror(3, Variant::Closed).unwrap();
        assert!(stabilization_check(&cfg, Sheaf::T, 4, 7, 0).unwrap().stable);
    }
}
