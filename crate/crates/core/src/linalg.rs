//! Dense exact linear algebra over the supported rings.
//!
//! Fields get reduced row echelon form, rank, solving, and kernels. The
//! integers get Hermite and Smith normal forms (fraction-free, with explicit
//! reduction to keep entry growth bounded) plus lattice span saturation for
//! lazily enumerated generator streams. Rank-style questions over Z/m are
//! answered by lifting to Z and reading Smith divisors.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::ring::{Ring, Scalar};

/// Dense row-major matrix over a [`Ring`]. Empty shapes (0 x c, r x 0) are
/// legal and behave as rank 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    ring: Ring,
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
}

/// Outcome of a Smith normal form computation.
///
/// `divisors` is the full diagonal, length min(rows, cols), each dividing the
/// next, trailing zeros allowed. When requested, `transforms = (u, v)` are
/// unimodular with `u * a * v` equal to the diagonal form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnfResult {
    pub divisors: Vec<BigInt>,
    pub transforms: Option<(Matrix, Matrix)>,
}

/// Result of saturating a lattice span from a generator stream.
#[derive(Debug, Clone)]
pub struct SpanSaturation {
    /// HNF basis of the lattice spanned by all consumed generators
    /// (nonzero rows only).
    pub basis: Matrix,
    /// True when the stream was exhausted or the stop policy triggered;
    /// false only when a `max_generators` cap cut the run short while the
    /// lattice was still growing. Either way this certifies the stopping
    /// condition, not completeness of the underlying generating set.
    pub stabilized: bool,
    pub generators_consumed: usize,
}

impl Matrix {
    pub fn new(ring: Ring, rows: usize, cols: usize, entries: Vec<Scalar>) -> Result<Matrix> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "expected {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        if entries.iter().any(|s| s.ring() != &ring) {
            return Err(Error::RingMismatch);
        }
        Ok(Matrix {
            ring,
            rows,
            cols,
            entries,
        })
    }

    pub fn zeros(ring: &Ring, rows: usize, cols: usize) -> Matrix {
        Matrix {
            ring: ring.clone(),
            rows,
            cols,
            entries: vec![ring.zero(); rows * cols],
        }
    }

    pub fn identity(ring: &Ring, n: usize) -> Matrix {
        let mut m = Matrix::zeros(ring, n, n);
        for i in 0..n {
            m.set(i, i, ring.one());
        }
        m
    }

    pub fn from_rows(ring: &Ring, rows: Vec<Vec<Scalar>>) -> Result<Matrix> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Matrix::new(ring.clone(), r, c, rows.into_iter().flatten().collect())
    }

    /// Builds from integer literals via the ring's canonical embedding.
    pub fn from_ints(ring: &Ring, rows: &[&[i64]]) -> Matrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let entries = rows
            .iter()
            .flat_map(|row| row.iter().map(|&v| ring.from_int(v)))
            .collect();
        Matrix::new(ring.clone(), r, c, entries).expect("literal matrix is rectangular")
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &Scalar {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        assert!(v.ring() == &self.ring, "entry from a foreign ring");
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn row_vec(&self, r: usize) -> Vec<Scalar> {
        self.row(r).to_vec()
    }

    /// Row-major flattening.
    pub fn flatten(&self) -> Vec<Scalar> {
        self.entries.clone()
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(&self.ring, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.at(r, c).clone());
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch);
        }
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::DimensionMismatch("matrix addition".into()));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| self.ring.add(a, b))
            .collect();
        Matrix::new(self.ring.clone(), self.rows, self.cols, entries)
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.add(&other.scale(&self.ring.from_int(-1)))
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        let entries = self.entries.iter().map(|a| self.ring.mul(a, s)).collect();
        Matrix {
            ring: self.ring.clone(),
            rows: self.rows,
            cols: self.cols,
            entries,
        }
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch);
        }
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(&self.ring, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.at(k, c);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.at(r, c);
                    let v = self.ring.add(cur, &self.ring.mul(a, b));
                    out.set(r, c, v);
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product (column convention).
    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch("matrix-vector product".into()));
        }
        let mut out = vec![self.ring.zero(); self.rows];
        for r in 0..self.rows {
            let mut acc = self.ring.zero();
            for c in 0..self.cols {
                acc = self.ring.add(&acc, &self.ring.mul(self.at(r, c), &v[c]));
            }
            out[r] = acc;
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    /// Determinant. Fields use elimination; Z uses fraction-free Bareiss;
    /// Z/m lifts to Z and reduces.
    pub fn det(&self) -> Result<Scalar> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch("determinant of non-square".into()));
        }
        if self.rows == 0 {
            return Ok(self.ring.one());
        }
        if self.ring.is_field() {
            return Ok(self.det_field());
        }
        // Z or Z/m: exact integer determinant of the lift.
        let lifted = self.lift_to_integers()?;
        let d = bareiss_det(&lifted);
        Ok(self.ring.from_bigint(&d))
    }

    fn det_field(&self) -> Scalar {
        let ring = &self.ring;
        let n = self.rows;
        let mut m: Vec<Vec<Scalar>> = (0..n).map(|r| self.row_vec(r)).collect();
        let mut det = ring.one();
        for col in 0..n {
            let pivot = (col..n).find(|&r| !m[r][col].is_zero());
            let pr = match pivot {
                Some(pr) => pr,
                None => return ring.zero(),
            };
            if pr != col {
                m.swap(pr, col);
                det = ring.neg(&det);
            }
            det = ring.mul(&det, &m[col][col]);
            let inv = ring.inv(&m[col][col]).expect("nonzero in a field");
            for r in col + 1..n {
                if m[r][col].is_zero() {
                    continue;
                }
                let factor = ring.mul(&m[r][col], &inv);
                for c in col..n {
                    let t = ring.mul(&factor, &m[col][c]);
                    m[r][c] = ring.sub(&m[r][c], &t);
                }
            }
        }
        det
    }

    pub fn is_invertible(&self) -> Result<bool> {
        Ok(self.ring.is_unit(&self.det()?))
    }

    /// Integer lift of a matrix over Z or Z/m (canonical representatives).
    pub fn lift_to_integers(&self) -> Result<Matrix> {
        let z = Ring::integers();
        let entries = self
            .entries
            .iter()
            .map(|s| match s.to_bigint() {
                Some(v) => Ok(z.from_bigint(&v)),
                None => Err(Error::NotIntegers(self.ring.to_string())),
            })
            .collect::<Result<Vec<_>>>()?;
        Matrix::new(z, self.rows, self.cols, entries)
    }

    /// Entrywise image under the canonical map Z -> target ring.
    pub fn reduce_to(&self, target: &Ring) -> Result<Matrix> {
        if !self.ring.is_integers() {
            return Err(Error::NotIntegers(self.ring.to_string()));
        }
        let entries = self
            .entries
            .iter()
            .map(|s| target.from_bigint(&s.to_bigint().expect("integer entry")))
            .collect();
        Matrix::new(target.clone(), self.rows, self.cols, entries)
    }

    fn require_field(&self) -> Result<()> {
        if !self.ring.is_field() {
            return Err(Error::NotAField(self.ring.to_string()));
        }
        Ok(())
    }

    /// Reduced row echelon form; returns (rref, rank, pivot columns).
    pub fn rref(&self) -> Result<(Matrix, usize, Vec<usize>)> {
        self.require_field()?;
        let ring = &self.ring;
        let mut m: Vec<Vec<Scalar>> = (0..self.rows).map(|r| self.row_vec(r)).collect();
        let mut pivots = Vec::new();
        let mut pr = 0usize;
        for col in 0..self.cols {
            if pr == self.rows {
                break;
            }
            let hit = (pr..self.rows).find(|&r| !m[r][col].is_zero());
            let hit = match hit {
                Some(h) => h,
                None => continue,
            };
            m.swap(pr, hit);
            let inv = ring.inv(&m[pr][col]).expect("nonzero in a field");
            for c in col..self.cols {
                m[pr][c] = ring.mul(&m[pr][c], &inv);
            }
            for r in 0..self.rows {
                if r == pr || m[r][col].is_zero() {
                    continue;
                }
                let factor = m[r][col].clone();
                for c in col..self.cols {
                    let t = ring.mul(&factor, &m[pr][c]);
                    m[r][c] = ring.sub(&m[r][c], &t);
                }
            }
            pivots.push(col);
            pr += 1;
        }
        let rank = pivots.len();
        Ok((Matrix::from_rows(ring, m)?, rank, pivots))
    }

    pub fn rank(&self) -> Result<usize> {
        Ok(self.rref()?.1)
    }

    /// Kernel basis in rref-derived canonical form (one vector per free
    /// column, ascending).
    pub fn kernel_basis(&self) -> Result<Vec<Vec<Scalar>>> {
        let (rref, _, pivots) = self.rref()?;
        let ring = &self.ring;
        let mut basis = Vec::new();
        let pivot_set: Vec<Option<usize>> = {
            let mut v = vec![None; self.cols];
            for (i, &c) in pivots.iter().enumerate() {
                v[c] = Some(i);
            }
            v
        };
        for free in 0..self.cols {
            if pivot_set[free].is_some() {
                continue;
            }
            let mut vec = vec![ring.zero(); self.cols];
            vec[free] = ring.one();
            for (i, &pc) in pivots.iter().enumerate() {
                vec[pc] = ring.neg(rref.at(i, free));
            }
            basis.push(vec);
        }
        Ok(basis)
    }

    /// Solves `self * x = rhs`; `None` when inconsistent. The particular
    /// solution sets all free variables to zero.
    pub fn solve(&self, rhs: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
        self.require_field()?;
        if rhs.len() != self.rows {
            return Err(Error::DimensionMismatch("right-hand side".into()));
        }
        let ring = &self.ring;
        let mut aug = Matrix::zeros(ring, self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.set(r, c, self.at(r, c).clone());
            }
            aug.set(r, self.cols, rhs[r].clone());
        }
        let (rref, _, pivots) = aug.rref()?;
        if pivots.contains(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![ring.zero(); self.cols];
        for (i, &pc) in pivots.iter().enumerate() {
            x[pc] = rref.at(i, self.cols).clone();
        }
        Ok(Some(x))
    }

    fn require_integers(&self) -> Result<()> {
        if !self.ring.is_integers() {
            return Err(Error::NotIntegers(self.ring.to_string()));
        }
        Ok(())
    }

    /// Row-style Hermite normal form: echelon with positive pivots, entries
    /// above each pivot reduced into [0, pivot), zero rows at the bottom.
    pub fn hnf(&self) -> Result<Matrix> {
        self.require_integers()?;
        let rows = hnf_rows(self.to_bigint_rows(), self.cols);
        let z = Ring::integers();
        let mut padded = rows;
        while padded.len() < self.rows {
            padded.push(vec![BigInt::zero(); self.cols]);
        }
        let entries = padded
            .into_iter()
            .flatten()
            .map(|v| z.from_bigint(&v))
            .collect();
        Matrix::new(z, self.rows, self.cols, entries)
    }

    /// Smith normal form with divisor chain d_1 | d_2 | ... and optional
    /// unimodular transforms.
    pub fn snf(&self, with_transforms: bool) -> Result<SnfResult> {
        self.require_integers()?;
        let (divisors, transforms) = snf_impl(self.to_bigint_rows(), self.rows, self.cols, with_transforms);
        let z = Ring::integers();
        let transforms = transforms.map(|(u, v)| {
            let um = Matrix::new(
                z.clone(),
                self.rows,
                self.rows,
                u.into_iter().flatten().map(|x| z.from_bigint(&x)).collect(),
            )
            .expect("square transform");
            let vm = Matrix::new(
                z.clone(),
                self.cols,
                self.cols,
                v.into_iter().flatten().map(|x| z.from_bigint(&x)).collect(),
            )
            .expect("square transform");
            (um, vm)
        });
        Ok(SnfResult {
            divisors,
            transforms,
        })
    }

    fn to_bigint_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .map(|s| s.to_bigint().expect("integer entry"))
                    .collect()
            })
            .collect()
    }

    /// Textual exchange form: header `ring rows cols`, then one line per row
    /// with entries in canonical scalar text form.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {} {}\n", self.ring, self.rows, self.cols);
        for r in 0..self.rows {
            let line: Vec<String> = self.row(r).iter().map(|s| s.to_string()).collect();
            let _ = writeln!(out, "{}", line.join(" "));
        }
        out
    }

    pub fn parse_text(text: &str) -> Result<Matrix> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| Error::Parse("empty matrix text".into()))?;
        let mut parts = header.rsplitn(3, ' ');
        let cols: usize = parts
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Parse("bad column count".into()))?;
        let rows: usize = parts
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Parse("bad row count".into()))?;
        let ring = Ring::parse(parts.next().unwrap_or(""))?;
        let mut entries = Vec::with_capacity(rows * cols);
        for _ in 0..rows {
            let line = lines
                .next()
                .ok_or_else(|| Error::Parse("missing matrix row".into()))?;
            let row: Vec<Scalar> = line
                .split_whitespace()
                .map(|tok| ring.parse_scalar(tok))
                .collect::<Result<_>>()?;
            if row.len() != cols {
                return Err(Error::Parse(format!(
                    "expected {cols} entries per row, got {}",
                    row.len()
                )));
            }
            entries.extend(row);
        }
        Matrix::new(ring, rows, cols, entries)
    }
}

/// Incrementally maintained row space over a field, kept in reduced echelon
/// form so membership tests and the canonical basis are cheap.
#[derive(Debug, Clone)]
pub struct RowSpan {
    ring: Ring,
    cols: usize,
    rows: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

impl RowSpan {
    pub fn new(ring: &Ring, cols: usize) -> RowSpan {
        assert!(ring.is_field(), "RowSpan requires a field");
        RowSpan {
            ring: ring.clone(),
            cols,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the current basis, leaving the residual.
    fn reduce(&self, v: &mut [Scalar]) {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v[p].is_zero() {
                continue;
            }
            let factor = v[p].clone();
            for c in p..self.cols {
                if row[c].is_zero() {
                    continue;
                }
                let t = self.ring.mul(&factor, &row[c]);
                v[c] = self.ring.sub(&v[c], &t);
            }
        }
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|s| s.is_zero())
    }

    /// Inserts a vector; returns true when it enlarged the span.
    pub fn insert(&mut self, v: Vec<Scalar>) -> bool {
        assert_eq!(v.len(), self.cols);
        let mut w = v;
        self.reduce(&mut w);
        let pivot = match w.iter().position(|s| !s.is_zero()) {
            Some(p) => p,
            None => return false,
        };
        let inv = self.ring.inv(&w[pivot]).expect("nonzero in a field");
        for c in pivot..self.cols {
            w[c] = self.ring.mul(&w[c], &inv);
        }
        // Back-substitute to keep existing rows fully reduced.
        for (row, _) in self.rows.iter_mut().zip(&self.pivots) {
            if row[pivot].is_zero() {
                continue;
            }
            let factor = row[pivot].clone();
            for c in pivot..self.cols {
                if w[c].is_zero() {
                    continue;
                }
                let t = self.ring.mul(&factor, &w[c]);
                row[c] = self.ring.sub(&row[c], &t);
            }
        }
        let at = self
            .pivots
            .binary_search(&pivot)
            .expect_err("pivot column is new");
        self.rows.insert(at, w);
        self.pivots.insert(at, pivot);
        true
    }

    /// Canonical basis rows (reduced echelon, pivots ascending).
    pub fn basis(&self) -> &[Vec<Scalar>] {
        &self.rows
    }
}

// ---------------------------------------------------------------------------
// Integer normal forms.
// ---------------------------------------------------------------------------

/// HNF of the given rows; returns only the nonzero rows, pivots positive,
/// entries above pivots reduced into [0, pivot).
fn hnf_rows(mut rows: Vec<Vec<BigInt>>, cols: usize) -> Vec<Vec<BigInt>> {
    rows.retain(|r| r.iter().any(|x| !x.is_zero()));
    let mut pr = 0usize;
    for col in 0..cols {
        loop {
            // Deterministic pivot choice: least |value| among nonzero, then
            // least row index.
            let mut best: Option<usize> = None;
            for r in pr..rows.len() {
                if rows[r][col].is_zero() {
                    continue;
                }
                best = match best {
                    None => Some(r),
                    Some(b) if rows[r][col].abs() < rows[b][col].abs() => Some(r),
                    keep => keep,
                };
            }
            let b = match best {
                Some(b) => b,
                None => break,
            };
            rows.swap(pr, b);
            if rows[pr][col].is_negative() {
                for x in rows[pr].iter_mut() {
                    *x = -std::mem::take(x);
                }
            }
            let pivot = rows[pr][col].clone();
            let mut leftover = false;
            for r in pr + 1..rows.len() {
                if rows[r][col].is_zero() {
                    continue;
                }
                let q = rows[r][col].div_floor(&pivot);
                for c in 0..cols {
                    let t = &q * &rows[pr][c];
                    rows[r][c] -= t;
                }
                if !rows[r][col].is_zero() {
                    leftover = true;
                }
            }
            if !leftover {
                // Reduce entries above the pivot into [0, pivot).
                for r in 0..pr {
                    if rows[r][col].is_zero() {
                        continue;
                    }
                    let q = rows[r][col].div_floor(&pivot);
                    if q.is_zero() {
                        continue;
                    }
                    for c in 0..cols {
                        let t = &q * &rows[pr][c];
                        rows[r][c] -= t;
                    }
                }
                pr += 1;
                break;
            }
        }
    }
    rows.truncate(pr);
    rows
}

/// Fraction-free Bareiss determinant of a square integer matrix.
fn bareiss_det(m: &Matrix) -> BigInt {
    let n = m.rows();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = (0..n)
        .map(|r| {
            m.row(r)
                .iter()
                .map(|s| s.to_bigint().expect("integer entry"))
                .collect()
        })
        .collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let swap = (k + 1..n).find(|&r| !a[r][k].is_zero());
            match swap {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = num / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}

type BigRows = Vec<Vec<BigInt>>;

fn snf_impl(
    mut a: BigRows,
    rows: usize,
    cols: usize,
    with_transforms: bool,
) -> (Vec<BigInt>, Option<(BigRows, BigRows)>) {
    let mut u: Option<BigRows> = with_transforms.then(|| big_identity(rows));
    let mut v: Option<BigRows> = with_transforms.then(|| big_identity(cols));
    let n = rows.min(cols);

    let row_add = |a: &mut BigRows, u: &mut Option<BigRows>, dst: usize, src: usize, q: &BigInt| {
        for c in 0..cols {
            let t = q * &a[src][c];
            a[dst][c] -= t;
        }
        if let Some(u) = u {
            for c in 0..rows {
                let t = q * &u[src][c];
                u[dst][c] -= t;
            }
        }
    };
    let col_add = |a: &mut BigRows, v: &mut Option<BigRows>, dst: usize, src: usize, q: &BigInt| {
        for r in 0..rows {
            let t = q * &a[r][src];
            a[r][dst] -= t;
        }
        if let Some(v) = v {
            for r in 0..cols {
                let t = q * &v[r][src];
                v[r][dst] -= t;
            }
        }
    };

    let mut t = 0usize;
    'outer: while t < n {
        // Locate the smallest nonzero entry in the trailing submatrix.
        let mut best: Option<(usize, usize)> = None;
        for r in t..rows {
            for c in t..cols {
                if a[r][c].is_zero() {
                    continue;
                }
                best = match best {
                    None => Some((r, c)),
                    Some((br, bc)) if a[r][c].abs() < a[br][bc].abs() => Some((r, c)),
                    keep => keep,
                };
            }
        }
        let (br, bc) = match best {
            Some(p) => p,
            None => break,
        };
        a.swap(t, br);
        if let Some(u) = &mut u {
            u.swap(t, br);
        }
        if bc != t {
            for row in a.iter_mut() {
                row.swap(t, bc);
            }
            if let Some(v) = &mut v {
                for row in v.iter_mut() {
                    row.swap(t, bc);
                }
            }
        }
        loop {
            // Clear column t below the pivot.
            let mut dirty = false;
            for r in t + 1..rows {
                if a[r][t].is_zero() {
                    continue;
                }
                let q = a[r][t].div_floor(&a[t][t]);
                row_add(&mut a, &mut u, r, t, &q);
                if !a[r][t].is_zero() {
                    a.swap(t, r);
                    if let Some(u) = &mut u {
                        u.swap(t, r);
                    }
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // Clear row t right of the pivot.
            for c in t + 1..cols {
                if a[t][c].is_zero() {
                    continue;
                }
                let q = a[t][c].div_floor(&a[t][t]);
                col_add(&mut a, &mut v, c, t, &q);
                if !a[t][c].is_zero() {
                    for row in a.iter_mut() {
                        row.swap(t, c);
                    }
                    if let Some(v) = &mut v {
                        for row in v.iter_mut() {
                            row.swap(t, c);
                        }
                    }
                    dirty = true;
                }
            }
            if !dirty {
                break;
            }
        }
        // Pivot must divide the whole trailing submatrix.
        for r in t + 1..rows {
            for c in t + 1..cols {
                if (&a[r][c] % &a[t][t]).is_zero() {
                    continue;
                }
                let minus_one = -BigInt::one();
                row_add(&mut a, &mut u, t, r, &minus_one);
                continue 'outer;
            }
        }
        if a[t][t].is_negative() {
            for c in 0..cols {
                a[t][c] = -std::mem::take(&mut a[t][c]);
            }
            if let Some(u) = &mut u {
                for c in 0..rows {
                    u[t][c] = -std::mem::take(&mut u[t][c]);
                }
            }
        }
        t += 1;
    }
    let divisors: Vec<BigInt> = (0..n).map(|i| a[i][i].clone()).collect();
    (divisors, u.zip(v))
}

fn big_identity(n: usize) -> BigRows {
    (0..n)
        .map(|r| {
            (0..n)
                .map(|c| if r == c { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect()
}

/// Number of Smith divisors coprime to `m`: the free rank of the row-span of
/// the lifted matrix inside (Z/m)^cols.
pub fn free_rank_mod_m(a: &Matrix, m: u64) -> Result<usize> {
    let lifted = a.lift_to_integers()?;
    let snf = lifted.snf(false)?;
    let m = BigInt::from(m);
    Ok(snf
        .divisors
        .iter()
        .filter(|d| d.gcd(&m).is_one())
        .count())
}

/// Saturates the lattice spanned by a generator stream over Z.
///
/// Consumes generators one at a time, maintaining the HNF of the span, and
/// stops once `rounds_stable` consecutive generators leave the lattice
/// unchanged, once the stream runs out, or once `max_generators` have been
/// consumed (only the last of these clears `stabilized`).
pub fn span_saturate<I>(
    generators: I,
    rounds_stable: usize,
    max_generators: Option<usize>,
) -> Result<SpanSaturation>
where
    I: IntoIterator<Item = Vec<BigInt>>,
{
    if rounds_stable == 0 {
        return Err(Error::BadParameters("rounds_stable must be >= 1".into()));
    }
    let mut basis: Vec<Vec<BigInt>> = Vec::new();
    let mut cols: Option<usize> = None;
    let mut consumed = 0usize;
    let mut quiet = 0usize;
    let mut stabilized = true;
    for g in generators {
        match cols {
            None => cols = Some(g.len()),
            Some(c) if c != g.len() => {
                return Err(Error::DimensionMismatch("generator length".into()))
            }
            _ => {}
        }
        consumed += 1;
        if lattice_insert(&mut basis, g, cols.unwrap()) {
            quiet = 0;
        } else {
            quiet += 1;
            if quiet >= rounds_stable {
                break;
            }
        }
        if max_generators.is_some_and(|cap| consumed >= cap) {
            stabilized = quiet >= rounds_stable;
            break;
        }
    }
    let cols = cols.ok_or(Error::EmptyStream)?;
    let z = Ring::integers();
    let nrows = basis.len();
    let entries = basis
        .into_iter()
        .flatten()
        .map(|x| z.from_bigint(&x))
        .collect();
    Ok(SpanSaturation {
        basis: Matrix::new(z, nrows, cols, entries)?,
        stabilized,
        generators_consumed: consumed,
    })
}

/// Inserts `v` into the HNF basis; returns true when the lattice grew.
fn lattice_insert(basis: &mut Vec<Vec<BigInt>>, v: Vec<BigInt>, cols: usize) -> bool {
    let mut w = v;
    // Reduce against the triangular basis; membership iff the residual is 0.
    for row in basis.iter() {
        let p = row.iter().position(|x| !x.is_zero()).expect("nonzero row");
        if w[p].is_zero() {
            continue;
        }
        let q = w[p].div_floor(&row[p]);
        if q.is_zero() {
            continue;
        }
        for c in 0..cols {
            let t = &q * &row[c];
            w[c] -= t;
        }
    }
    if w.iter().all(|x| x.is_zero()) {
        return false;
    }
    basis.push(w);
    *basis = hnf_rows(std::mem::take(basis), cols);
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f(p: u64) -> Ring {
        Ring::prime_field(p).unwrap()
    }

    #[test]
    fn rref_rank_examples() {
        let m = Matrix::from_ints(&f(2), &[&[1, 1], &[1, 1]]);
        let (_, rank, pivots) = m.rref().unwrap();
        assert_eq!((rank, pivots), (1, vec![0]));

        let id = Matrix::identity(&f(5), 3);
        assert_eq!(id.rank().unwrap(), 3);
    }

    #[test]
    fn rank_of_flattened_gl2_f2() {
        // Rows: the six invertible 2x2 matrices over F_2, flattened.
        let rows: Vec<&[i64]> = vec![
            &[1, 0, 0, 1],
            &[0, 1, 1, 0],
            &[1, 1, 0, 1],
            &[1, 0, 1, 1],
            &[0, 1, 1, 1],
            &[1, 1, 1, 0],
        ];
        let m = Matrix::from_ints(&f(2), &rows);
        // Independent oracle: count the distinct vectors in the F_2 span by
        // enumerating all 2^6 combinations.
        let ring = f(2);
        let mut seen = std::collections::HashSet::new();
        for mask in 0u32..64 {
            let mut acc = vec![ring.zero(); 4];
            for (i, row) in rows.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    for (a, &b) in acc.iter_mut().zip(row.iter()) {
                        *a = ring.add(a, &ring.from_int(b));
                    }
                }
            }
            seen.insert(acc.iter().map(|s| s.to_string()).collect::<Vec<_>>());
        }
        let oracle_rank = (seen.len() as f64).log2() as usize;
        assert_eq!(oracle_rank, 4);
        assert_eq!(m.rank().unwrap(), oracle_rank);
    }

    #[test]
    fn rref_requires_field() {
        let m = Matrix::identity(&Ring::int_mod(6).unwrap(), 2);
        assert!(matches!(m.rref(), Err(Error::NotAField(_))));
        let z = Matrix::identity(&Ring::integers(), 2);
        assert!(matches!(z.rank(), Err(Error::NotAField(_))));
    }

    #[test]
    fn solve_and_kernel_examples() {
        let f3 = f(3);
        let a = Matrix::identity(&f3, 2);
        let b = vec![f3.from_int(2), f3.from_int(1)];
        let x = a.solve(&b).unwrap().unwrap();
        assert_eq!(x, b);
        assert!(a.kernel_basis().unwrap().is_empty());

        let f2 = f(2);
        let a = Matrix::from_ints(&f2, &[&[1, 1]]);
        let x = a.solve(&[f2.one()]).unwrap().unwrap();
        assert_eq!(x, vec![f2.one(), f2.zero()]);
        let ker = a.kernel_basis().unwrap();
        assert_eq!(ker, vec![vec![f2.one(), f2.one()]]);
    }

    #[test]
    fn solve_detects_inconsistency() {
        let f2 = f(2);
        let a = Matrix::from_ints(&f2, &[&[1, 1], &[1, 1]]);
        let rhs = vec![f2.zero(), f2.one()];
        assert_eq!(a.solve(&rhs).unwrap(), None);
    }

    #[test]
    fn hnf_examples() {
        let z = Ring::integers();
        let m = Matrix::from_ints(&z, &[&[4], &[6]]);
        let h = m.hnf().unwrap();
        assert_eq!(h, Matrix::from_ints(&z, &[&[2], &[0]]));

        let id = Matrix::identity(&z, 2);
        assert_eq!(id.hnf().unwrap(), id);

        // Already in HNF: upper triangular, positive pivots, 1 < 2 above the
        // pivot 3? Entries above a pivot must lie in [0, pivot): 1 in [0,3).
        let m = Matrix::from_ints(&z, &[&[2, 1], &[0, 3]]);
        let h = m.hnf().unwrap();
        assert!(is_row_hnf(&h));
        assert_eq!(h, m);
    }

    fn is_row_hnf(m: &Matrix) -> bool {
        // Oracle re-check of the HNF conditions.
        let mut last_pivot: Option<usize> = None;
        let mut seen_zero_row = false;
        for r in 0..m.rows() {
            let pivot = (0..m.cols()).find(|&c| !m.at(r, c).is_zero());
            match pivot {
                None => seen_zero_row = true,
                Some(p) => {
                    if seen_zero_row {
                        return false;
                    }
                    if let Some(lp) = last_pivot {
                        if p <= lp {
                            return false;
                        }
                    }
                    let pv = m.at(r, p).to_bigint().unwrap();
                    if pv <= BigInt::zero() {
                        return false;
                    }
                    for rr in 0..r {
                        let e = m.at(rr, p).to_bigint().unwrap();
                        if e < BigInt::zero() || e >= pv {
                            return false;
                        }
                    }
                    last_pivot = Some(p);
                }
            }
        }
        true
    }

    /// Determinantal-divisor oracle: the product d_1 ... d_k equals the gcd
    /// of all k x k minors.
    fn minor_gcd_oracle(m: &Matrix) -> Vec<BigInt> {
        let (r, c) = (m.rows(), m.cols());
        let n = r.min(c);
        let mut out = Vec::new();
        let mut prev = BigInt::one();
        for k in 1..=n {
            let mut g = BigInt::zero();
            for rows in combinations(r, k) {
                for cols in combinations(c, k) {
                    let z = Ring::integers();
                    let entries: Vec<Scalar> = rows
                        .iter()
                        .flat_map(|&rr| cols.iter().map(move |&cc| m.at(rr, cc).clone()))
                        .collect();
                    let sub = Matrix::new(z, k, k, entries).unwrap();
                    g = g.gcd(&bareiss_det(&sub));
                }
            }
            if g.is_zero() {
                out.push(BigInt::zero());
                continue;
            }
            out.push(&g / &prev);
            prev = g;
        }
        // Trailing zeros stay zero once a zero gcd appears.
        out
    }

    fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == k {
                out.push(cur.clone());
                return;
            }
            for i in start..n {
                cur.push(i);
                rec(i + 1, n, k, cur, out);
                cur.pop();
            }
        }
        rec(0, n, k, &mut cur, &mut out);
        out
    }

    #[test]
    fn snf_examples() {
        let z = Ring::integers();
        let m = Matrix::from_ints(&z, &[&[2, 0], &[0, 3]]);
        let oracle = minor_gcd_oracle(&m);
        assert_eq!(oracle, vec![BigInt::from(1), BigInt::from(6)]);
        assert_eq!(m.snf(false).unwrap().divisors, oracle);

        let id = Matrix::identity(&z, 3);
        assert_eq!(
            id.snf(false).unwrap().divisors,
            vec![BigInt::one(), BigInt::one(), BigInt::one()]
        );

        let m = Matrix::from_ints(&z, &[&[2, 0], &[0, 2]]);
        assert_eq!(
            m.snf(false).unwrap().divisors,
            vec![BigInt::from(2), BigInt::from(2)]
        );
    }

    #[test]
    fn snf_transforms_reproduce_diagonal() {
        let z = Ring::integers();
        let m = Matrix::from_ints(&z, &[&[2, 4, 4], &[-6, 6, 12], &[10, 4, 16]]);
        let snf = m.snf(true).unwrap();
        let (u, v) = snf.transforms.clone().unwrap();
        let d = u.mul(&m).unwrap().mul(&v).unwrap();
        for r in 0..3 {
            for c in 0..3 {
                let expect = if r == c {
                    snf.divisors[r].clone()
                } else {
                    BigInt::zero()
                };
                assert_eq!(d.at(r, c).to_bigint().unwrap(), expect);
            }
        }
        // Unimodular transforms.
        assert_eq!(bareiss_det(&u).abs(), BigInt::one());
        assert_eq!(bareiss_det(&v).abs(), BigInt::one());
        assert_eq!(snf.divisors, minor_gcd_oracle(&m));
    }

    #[test]
    fn span_saturate_examples() {
        let z = Ring::integers();
        let basis_vecs = vec![
            vec![BigInt::from(1), BigInt::zero(), BigInt::zero()],
            vec![BigInt::zero(), BigInt::from(1), BigInt::zero()],
            vec![BigInt::zero(), BigInt::zero(), BigInt::from(1)],
        ];
        let sat = span_saturate(basis_vecs, 2, None).unwrap();
        assert!(sat.stabilized);
        assert_eq!(sat.basis, Matrix::identity(&z, 3));

        let gens = vec![
            vec![BigInt::from(2), BigInt::zero()],
            vec![BigInt::zero(), BigInt::from(2)],
            vec![BigInt::from(2), BigInt::from(2)],
        ];
        let sat = span_saturate(gens, 1, None).unwrap();
        assert_eq!(sat.basis, Matrix::from_ints(&z, &[&[2, 0], &[0, 2]]));

        assert_eq!(
            span_saturate(std::iter::empty(), 1, None).unwrap_err(),
            Error::EmptyStream
        );
    }

    #[test]
    fn free_rank_mod_4_matches_enumeration() {
        // For every 2x2 matrix over Z/4: the number of Smith divisors of the
        // integer lift coprime to 4 equals log2(|M| / |M[2]|) where M is the
        // row span enumerated exhaustively.
        let z4 = Ring::int_mod(4).unwrap();
        for code in 0u64..256 {
            let vals: Vec<i64> = (0..4).map(|i| ((code >> (2 * i)) & 3) as i64).collect();
            let m = Matrix::from_ints(&z4, &[&vals[0..2], &vals[2..4]]);
            let mut span = std::collections::HashSet::new();
            for x in 0..4u64 {
                for y in 0..4u64 {
                    let v: Vec<u64> = (0..2)
                        .map(|c| {
                            (x * vals[c] as u64 + y * vals[2 + c] as u64) % 4
                        })
                        .collect();
                    span.insert(v);
                }
            }
            let killed_by_2 = span.iter().filter(|v| v.iter().all(|&e| (2 * e) % 4 == 0)).count();
            let a = ((span.len() / killed_by_2) as f64).log2().round() as usize;
            assert_eq!(free_rank_mod_m(&m, 4).unwrap(), a, "matrix {vals:?}");
        }
    }

    #[test]
    fn exchange_format_round_trip() {
        let f4 = Ring::parse("F4").unwrap();
        let m = Matrix::from_rows(
            &f4,
            vec![
                vec![f4.parse_scalar("1,1").unwrap(), f4.zero()],
                vec![f4.one(), f4.parse_scalar("0,1").unwrap()],
            ],
        )
        .unwrap();
        let text = m.to_text();
        assert_eq!(Matrix::parse_text(&text).unwrap(), m);
    }

    #[test]
    fn empty_matrices_are_rank_zero() {
        let f2 = f(2);
        let m = Matrix::zeros(&f2, 0, 3);
        assert_eq!(m.rank().unwrap(), 0);
        let m = Matrix::zeros(&f2, 3, 0);
        assert_eq!(m.rank().unwrap(), 0);
        let z = Matrix::zeros(&Ring::integers(), 0, 2);
        assert_eq!(z.hnf().unwrap().rows(), 0);
    }

    #[test]
    fn row_span_tracks_rank_and_membership() {
        let f3 = f(3);
        let mut span = RowSpan::new(&f3, 3);
        assert!(span.insert(vec![f3.from_int(1), f3.from_int(2), f3.from_int(0)]));
        assert!(span.insert(vec![f3.from_int(0), f3.from_int(1), f3.from_int(1)]));
        // 2*(1,2,0) + (0,1,1) = (2,5,1) = (2,2,1)
        assert!(!span.insert(vec![f3.from_int(2), f3.from_int(2), f3.from_int(1)]));
        assert_eq!(span.rank(), 2);
        assert!(span.contains(&[f3.from_int(2), f3.from_int(2), f3.from_int(1)]));
        assert!(!span.contains(&[f3.one(), f3.zero(), f3.zero()]));
    }

    proptest! {
        #[test]
        fn rref_is_idempotent(seed in any::<u64>()) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let f5 = f(5);
            let entries: Vec<Scalar> = (0..20).map(|_| f5.from_int(rng.gen_range(0..5))).collect();
            let m = Matrix::new(f5, 4, 5, entries).unwrap();
            let (r1, rank1, piv1) = m.rref().unwrap();
            let (r2, rank2, piv2) = r1.rref().unwrap();
            prop_assert_eq!(&r1, &r2);
            prop_assert_eq!((rank1, piv1), (rank2, piv2));
            // Rank is transpose-invariant over a field.
            prop_assert_eq!(rank1, m.transpose().rank().unwrap());
            // Kernel vectors solve exactly.
            for v in m.kernel_basis().unwrap() {
                let image = m.mul_vec(&v).unwrap();
                prop_assert!(image.iter().all(|s| s.is_zero()));
            }
        }

        #[test]
        fn hnf_is_generator_order_invariant(seed in any::<u64>()) {
            use rand::{seq::SliceRandom, Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let z = Ring::integers();
            let rows: Vec<Vec<i64>> = (0..4)
                .map(|_| (0..3).map(|_| rng.gen_range(-6..=6)).collect())
                .collect();
            let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
            let h1 = Matrix::from_ints(&z, &refs).hnf().unwrap();
            let mut shuffled = rows.clone();
            shuffled.shuffle(&mut rng);
            let refs2: Vec<&[i64]> = shuffled.iter().map(|r| r.as_slice()).collect();
            let h2 = Matrix::from_ints(&z, &refs2).hnf().unwrap();
            prop_assert_eq!(h1, h2);
        }

        #[test]
        fn snf_chain_divides_and_matches_det(seed in any::<u64>()) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let z = Ring::integers();
            let rows: Vec<Vec<i64>> = (0..3)
                .map(|_| (0..3).map(|_| rng.gen_range(-5..=5)).collect())
                .collect();
            let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
            let m = Matrix::from_ints(&z, &refs);
            let snf = m.snf(true).unwrap();
            for w in snf.divisors.windows(2) {
                if w[0].is_zero() {
                    prop_assert!(w[1].is_zero());
                } else {
                    prop_assert!((&w[1] % &w[0]).is_zero());
                }
            }
            let det = bareiss_det(&m).abs();
            let product: BigInt = snf.divisors.iter().product();
            if !det.is_zero() {
                prop_assert_eq!(product, det);
            }
            let (u, v) = snf.transforms.unwrap();
            let d = u.mul(&m).unwrap().mul(&v).unwrap();
            for r in 0..3 {
                for c in 0..3 {
                    let expect = if r == c { snf.divisors[r].clone() } else { BigInt::zero() };
                    prop_assert_eq!(d.at(r, c).to_bigint().unwrap(), expect);
                }
            }
        }
    }
}
