//! Exact linear algebra over the rationals.
//!
//! Matrices are sparse maps `(row, col) -> Rat` with no stored zeros. Row
//! reduction runs a fraction-free forward pass on primitive integer rows and
//! only switches to rationals for back-substitution, which keeps intermediate
//! numerators small on the block-sparse matrices produced by Čech complexes
//! and multiplication tables.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact rational number, always in lowest terms with positive denominator.
pub type Rat = BigRational;

/// Dense vector of rationals.
pub type Vector = Vec<Rat>;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"3"`, `"-1"` or `"2/5"`.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(Rat::new(n, d))
            }
        }
        None => s.parse::<BigInt>().ok().map(Rat::from_integer),
    }
}

pub fn zero_vec(n: usize) -> Vector {
    vec![Rat::zero(); n]
}

pub fn unit_vec(n: usize, i: usize) -> Vector {
    let mut v = zero_vec(n);
    v[i] = Rat::one();
    v
}

pub fn is_zero_vec(v: &[Rat]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// Sparse rational matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), Rat>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, entries: BTreeMap::new() }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rat::one());
        }
        m
    }

    pub fn from_dense(rows: usize, cols: usize, data: &[Vector]) -> Self {
        assert_eq!(data.len(), rows, "row count mismatch");
        let mut m = Mat::zeros(rows, cols);
        for (i, row) in data.iter().enumerate() {
            assert_eq!(row.len(), cols, "column count mismatch in row {i}");
            for (j, x) in row.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    /// Matrix whose columns are the given vectors (all of length `rows`).
    pub fn from_columns(rows: usize, columns: &[Vector]) -> Self {
        let mut m = Mat::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column {j} has wrong length");
            for (i, x) in col.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    /// Matrix whose rows are the given vectors (all of length `cols`).
    pub fn from_row_vectors(cols: usize, rows: &[Vector]) -> Self {
        let mut m = Mat::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "row {i} has wrong length");
            for (j, x) in row.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, i: usize, j: usize) -> Rat {
        self.entries.get(&(i, j)).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn set(&mut self, i: usize, j: usize, x: Rat) {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of range");
        if x.is_zero() {
            self.entries.remove(&(i, j));
        } else {
            self.entries.insert((i, j), x);
        }
    }

    pub fn add_to(&mut self, i: usize, j: usize, x: &Rat) {
        let cur = self.get(i, j);
        self.set(i, j, cur + x);
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Rat)> {
        self.entries.iter().map(|(&(i, j), x)| (i, j, x))
    }

    pub fn row_vec(&self, i: usize) -> Vector {
        let mut v = zero_vec(self.cols);
        for (_, j, x) in self.entries.range((i, 0)..(i + 1, 0)).map(|(&(i, j), x)| (i, j, x)) {
            v[j] = x.clone();
        }
        v
    }

    pub fn col_vec(&self, j: usize) -> Vector {
        let mut v = zero_vec(self.rows);
        for (i, jj, x) in self.entries() {
            if jj == j {
                v[i] = x.clone();
            }
        }
        v
    }

    pub fn to_dense(&self) -> Vec<Vector> {
        (0..self.rows).map(|i| self.row_vec(i)).collect()
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows);
        for (i, j, x) in self.entries() {
            t.entries.insert((j, i), x.clone());
        }
        t
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vector {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        let mut out = zero_vec(self.rows);
        for (i, j, x) in self.entries() {
            if !v[j].is_zero() {
                out[i] += x * &v[j];
            }
        }
        out
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut by_row: Vec<Vec<(usize, &Rat)>> = vec![Vec::new(); other.rows];
        for (i, j, x) in other.entries() {
            by_row[i].push((j, x));
        }
        let mut out = Mat::zeros(self.rows, other.cols);
        for (i, k, a) in self.entries() {
            for &(j, b) in &by_row[k] {
                out.add_to(i, j, &(a * b));
            }
        }
        out
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.cols, "column mismatch in vstack");
        let mut out = self.clone();
        out.rows += other.rows;
        for (i, j, x) in other.entries() {
            out.entries.insert((i + self.rows, j), x.clone());
        }
        out
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for row in self.to_dense() {
            let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Result of row reduction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub reduced: Mat,
    pub pivots: Vec<usize>,
    pub rank: usize,
}

type IntRow = Vec<(usize, BigInt)>;

fn primitive_int_row(row: &[(usize, Rat)]) -> IntRow {
    let mut lcm = BigInt::one();
    for (_, x) in row {
        lcm = lcm.lcm(x.denom());
    }
    let mut out: IntRow = row
        .iter()
        .filter(|(_, x)| !x.is_zero())
        .map(|(j, x)| (*j, (x * Rat::from_integer(lcm.clone())).to_integer()))
        .collect();
    make_primitive(&mut out);
    out
}

fn make_primitive(row: &mut IntRow) {
    let mut g = BigInt::zero();
    for (_, x) in row.iter() {
        g = g.gcd(x);
        if g.is_one() {
            return;
        }
    }
    if g.is_zero() || g.is_one() {
        return;
    }
    for (_, x) in row.iter_mut() {
        *x /= &g;
    }
}

/// `a * r - b * s` for sorted sparse integer rows.
fn combine(a: &BigInt, r: &IntRow, b: &BigInt, s: &IntRow) -> IntRow {
    let mut out = Vec::with_capacity(r.len() + s.len());
    let (mut i, mut k) = (0, 0);
    while i < r.len() || k < s.len() {
        let take_r = k >= s.len() || (i < r.len() && r[i].0 < s[k].0);
        let take_s = i >= r.len() || (k < s.len() && s[k].0 < r[i].0);
        if take_r {
            out.push((r[i].0, a * &r[i].1));
            i += 1;
        } else if take_s {
            out.push((s[k].0, -(b * &s[k].1)));
            k += 1;
        } else {
            let v = a * &r[i].1 - b * &s[k].1;
            if !v.is_zero() {
                out.push((r[i].0, v));
            }
            i += 1;
            k += 1;
        }
    }
    out
}

/// Reduced row echelon form of `m`, its pivot columns and rank.
pub fn rref(m: &Mat) -> Rref {
    let mut raw: Vec<Vec<(usize, Rat)>> = vec![Vec::new(); m.rows];
    for (i, j, x) in m.entries() {
        raw[i].push((j, x.clone()));
    }
    let mut pending: Vec<IntRow> = raw.iter().map(|r| primitive_int_row(r)).filter(|r| !r.is_empty()).collect();

    // Forward pass: integer rows only.
    let mut echelon: Vec<IntRow> = Vec::new();
    while !pending.is_empty() {
        let lead = pending.iter().map(|r| r[0].0).min().expect("nonempty");
        let (mut same, rest): (Vec<IntRow>, Vec<IntRow>) = pending.into_iter().partition(|r| r[0].0 == lead);
        let best = same.iter().enumerate().min_by_key(|(_, r)| r.len()).map(|(k, _)| k).expect("nonempty");
        let pivot = same.swap_remove(best);
        pending = rest;
        for other in same {
            let mut c = combine(&pivot[0].1, &other, &other[0].1, &pivot);
            if !c.is_empty() {
                if c[0].1.is_negative() {
                    for (_, x) in c.iter_mut() {
                        *x = -x.clone();
                    }
                }
                make_primitive(&mut c);
                pending.push(c);
            }
        }
        echelon.push(pivot);
    }

    // Back-substitution over the rationals.
    let mut rows: Vec<BTreeMap<usize, Rat>> = echelon
        .iter()
        .map(|r| {
            let lead = Rat::from_integer(r[0].1.clone());
            r.iter().map(|(j, x)| (*j, Rat::from_integer(x.clone()) / &lead)).collect()
        })
        .collect();
    let pivots: Vec<usize> = echelon.iter().map(|r| r[0].0).collect();
    for i in (0..rows.len()).rev() {
        let p = pivots[i];
        let pivot_row = rows[i].clone();
        for row in rows.iter_mut().take(i) {
            if let Some(f) = row.get(&p).cloned() {
                for (j, x) in &pivot_row {
                    let v = row.get(j).cloned().unwrap_or_else(Rat::zero) - &f * x;
                    if v.is_zero() {
                        row.remove(j);
                    } else {
                        row.insert(*j, v);
                    }
                }
            }
        }
    }

    let mut reduced = Mat::zeros(m.rows, m.cols);
    for (i, row) in rows.iter().enumerate() {
        for (j, x) in row {
            reduced.set(i, *j, x.clone());
        }
    }
    let rank = pivots.len();
    Rref { reduced, pivots, rank }
}

pub fn rank(m: &Mat) -> usize {
    rref(m).rank
}

pub fn rank_of_vectors(dim: usize, vectors: &[Vector]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    rank(&Mat::from_row_vectors(dim, vectors))
}

/// Basis of the null space of `m`, one vector per free column in ascending order.
pub fn kernel_basis(m: &Mat) -> Vec<Vector> {
    let r = rref(m);
    let is_pivot: Vec<bool> = {
        let mut v = vec![false; m.cols];
        for &p in &r.pivots {
            v[p] = true;
        }
        v
    };
    let mut out = Vec::new();
    for f in (0..m.cols).filter(|&c| !is_pivot[c]) {
        let mut v = zero_vec(m.cols);
        v[f] = Rat::one();
        for (i, &p) in r.pivots.iter().enumerate() {
            let x = r.reduced.get(i, f);
            if !x.is_zero() {
                v[p] = -x;
            }
        }
        out.push(v);
    }
    out
}

/// Row space of a set of vectors in reduced echelon form, supporting
/// membership tests and reduction modulo the span.
#[derive(Clone, Debug)]
pub struct RowSpace {
    dim: usize,
    rows: Vec<Vector>,
    pivots: Vec<usize>,
}

impl RowSpace {
    pub fn new(dim: usize, vectors: &[Vector]) -> Self {
        if vectors.is_empty() {
            return RowSpace { dim, rows: Vec::new(), pivots: Vec::new() };
        }
        let r = rref(&Mat::from_row_vectors(dim, vectors));
        let rows = (0..r.rank).map(|i| r.reduced.row_vec(i)).collect();
        RowSpace { dim, rows, pivots: r.pivots }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn basis(&self) -> &[Vector] {
        &self.rows
    }

    /// `v` minus its component along the span, expressed against the pivots.
    pub fn reduce(&self, v: &[Rat]) -> Vector {
        assert_eq!(v.len(), self.dim, "vector length mismatch");
        let mut out = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if out[p].is_zero() {
                continue;
            }
            let f = out[p].clone();
            for (j, x) in row.iter().enumerate() {
                if !x.is_zero() {
                    out[j] -= &f * x;
                }
            }
        }
        out
    }

    pub fn contains(&self, v: &[Rat]) -> bool {
        is_zero_vec(&self.reduce(v))
    }
}

/// Cokernel of a linear map together with a projection onto a chosen
/// complement of the image.
#[derive(Clone, Debug)]
pub struct Cokernel {
    image: RowSpace,
    complement: Vec<usize>,
}

impl Cokernel {
    /// Representatives of the cokernel basis, as vectors in the target space.
    pub fn basis(&self) -> Vec<Vector> {
        self.complement.iter().map(|&j| unit_vec(self.image.dim, j)).collect()
    }

    /// Indices of target coordinates whose unit vectors form the complement.
    pub fn complement_indices(&self) -> &[usize] {
        &self.complement
    }

    pub fn dim(&self) -> usize {
        self.complement.len()
    }

    pub fn image(&self) -> &RowSpace {
        &self.image
    }

    /// Coordinates of the class of `v` in the cokernel basis.
    pub fn project(&self, v: &[Rat]) -> Vector {
        let r = self.image.reduce(v);
        self.complement.iter().map(|&j| r[j].clone()).collect()
    }
}

/// Cokernel of `m : Q^cols -> Q^rows`.
pub fn cokernel_with_projection(m: &Mat) -> Cokernel {
    let image_vectors: Vec<Vector> = (0..m.cols).map(|j| m.col_vec(j)).collect();
    let image = RowSpace::new(m.rows, &image_vectors);
    let mut is_pivot = vec![false; m.rows];
    for &p in image.pivots() {
        is_pivot[p] = true;
    }
    let complement = (0..m.rows).filter(|&j| !is_pivot[j]).collect();
    Cokernel { image, complement }
}

/// Expresses `target` as a combination of `vectors`, if possible.
pub fn solve_combination(dim: usize, vectors: &[Vector], target: &[Rat]) -> Option<Vector> {
    if vectors.is_empty() {
        return if is_zero_vec(target) { Some(Vec::new()) } else { None };
    }
    // Augmented system: columns are the vectors, last column the target.
    let mut cols: Vec<Vector> = vectors.to_vec();
    cols.push(target.to_vec());
    let m = Mat::from_columns(dim, &cols);
    let r = rref(&m);
    let n = vectors.len();
    if r.pivots.contains(&n) {
        return None;
    }
    let mut x = zero_vec(n);
    for (i, &p) in r.pivots.iter().enumerate() {
        x[p] = r.reduced.get(i, n);
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(rows: &[&[i64]]) -> Mat {
        let cols = rows.first().map_or(0, |r| r.len());
        let data: Vec<Vector> = rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect();
        Mat::from_dense(rows.len(), cols, &data)
    }

    #[test]
    fn parses_rationals() {
        assert_eq!(parse_rat("-1"), Some(rat(-1)));
        assert_eq!(parse_rat("4/6"), Some(rat_frac(2, 3)));
        assert_eq!(parse_rat("1/0"), None);
        assert_eq!(parse_rat("x"), None);
    }

    #[test]
    fn rref_identity() {
        let r = rref(&Mat::identity(2));
        assert_eq!(r.rank, 2);
        assert_eq!(r.pivots, vec![0, 1]);
        assert_eq!(r.reduced, Mat::identity(2));
    }

    #[test]
    fn rref_proportional_rows() {
        let r = rref(&m(&[&[1, 2], &[2, 4]]));
        assert_eq!(r.rank, 1);
        assert_eq!(r.pivots, vec![0]);
        assert_eq!(r.reduced.row_vec(0), vec![rat(1), rat(2)]);
    }

    #[test]
    fn rref_empty_matrix() {
        let r = rref(&Mat::zeros(0, 0));
        assert_eq!(r.rank, 0);
        let r = rref(&Mat::zeros(3, 4));
        assert_eq!(r.rank, 0);
        assert!(r.pivots.is_empty());
    }

    #[test]
    fn rref_rational_entries() {
        let data = vec![vec![rat_frac(1, 2), rat_frac(1, 3), rat(1)], vec![rat_frac(1, 4), rat_frac(1, 6), rat(0)]];
        let r = rref(&Mat::from_dense(2, 3, &data));
        assert_eq!(r.rank, 2);
        assert_eq!(r.pivots, vec![0, 2]);
        assert_eq!(r.reduced.row_vec(0), vec![rat(1), rat_frac(2, 3), rat(0)]);
        assert_eq!(r.reduced.row_vec(1), vec![rat(0), rat(0), rat(1)]);
    }

    #[test]
    fn kernel_of_identity_and_zero() {
        assert!(kernel_basis(&Mat::identity(3)).is_empty());
        let k = kernel_basis(&Mat::zeros(3, 3));
        assert_eq!(k, vec![unit_vec(3, 0), unit_vec(3, 1), unit_vec(3, 2)]);
    }

    #[test]
    fn kernel_vectors_are_annihilated() {
        let a = m(&[&[1, 2, 3, 4], &[2, 4, 6, 8], &[0, 1, 1, 0]]);
        let k = kernel_basis(&a);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(is_zero_vec(&a.mul_vec(v)));
        }
    }

    #[test]
    fn cokernel_of_surjection_is_empty() {
        let c = cokernel_with_projection(&m(&[&[1, 0, 1], &[0, 1, 1]]));
        assert_eq!(c.dim(), 0);
        assert!(c.project(&[rat(3), rat(-2)]).is_empty());
    }

    #[test]
    fn cokernel_of_first_axis() {
        let c = cokernel_with_projection(&m(&[&[1], &[0]]));
        assert_eq!(c.basis(), vec![vec![rat(0), rat(1)]]);
        assert_eq!(c.project(&[rat(5), rat(7)]), vec![rat(7)]);
        assert_eq!(c.project(&[rat(5), rat(0)]), vec![rat(0)]);
    }

    #[test]
    fn solve_combination_finds_coefficients() {
        let vs = vec![vec![rat(1), rat(1), rat(0)], vec![rat(0), rat(1), rat(1)]];
        let x = solve_combination(3, &vs, &[rat(2), rat(5), rat(3)]).unwrap();
        assert_eq!(x, vec![rat(2), rat(3)]);
        assert!(solve_combination(3, &vs, &[rat(1), rat(0), rat(0)]).is_none());
    }

    #[test]
    fn mat_mul_and_transpose() {
        let a = m(&[&[1, 2], &[3, 4]]);
        let b = m(&[&[0, 1], &[1, 0]]);
        assert_eq!(a.mul(&b), m(&[&[2, 1], &[4, 3]]));
        assert_eq!(a.transpose(), m(&[&[1, 3], &[2, 4]]));
        assert_eq!(a.nnz(), 4);
    }

    fn arb_mat() -> impl Strategy<Value = (usize, Vec<Vector>)> {
        (1usize..5, 1usize..6).prop_flat_map(|(r, c)| {
            let row = proptest::collection::vec((-3i64..4).prop_map(rat), c);
            (Just(c), proptest::collection::vec(row, r))
        })
    }

    proptest! {
        #[test]
        fn rank_plus_nullity_is_width((c, rows) in arb_mat()) {
            let m = Mat::from_row_vectors(c, &rows);
            let k = kernel_basis(&m);
            prop_assert_eq!(rank(&m) + k.len(), c);
            for v in &k {
                prop_assert!(is_zero_vec(&m.mul_vec(v)));
            }
        }

        #[test]
        fn row_space_reduces_its_own_rows((c, rows) in arb_mat()) {
            let rs = RowSpace::new(c, &rows);
            prop_assert_eq!(rs.dim(), rank_of_vectors(c, &rows));
            for r in &rows {
                prop_assert!(rs.contains(r));
            }
        }

        #[test]
        fn solved_combinations_reproduce_the_target((c, rows) in arb_mat(), pick in 0usize..4) {
            let target = rows[pick % rows.len()].clone();
            let combo = solve_combination(c, &rows, &target).expect("a row lies in the span");
            let mut sum = zero_vec(c);
            for (x, r) in combo.iter().zip(&rows) {
                for (s, y) in sum.iter_mut().zip(r) {
                    *s += x * y;
                }
            }
            prop_assert_eq!(sum, target);
        }
    }
}
