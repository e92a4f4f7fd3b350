//! The Schur algebra S(n,d) in two realizations: symmetric tensors
//! TS^d(End(k^n)) with the orbit basis, multiplied through the embedding into
//! End(E^(x)d), and the fixed-point algebra of symmetric-group conjugation.
//!
//! Matrix positions of End(E^(x)d) are partitioned by the orbits: the entry
//! at (row word r, column word s) belongs to the orbit whose content is the
//! zipped word of (r_i, s_i) pairs. Embedded orbit matrices are therefore
//! disjointly supported 0/1 matrices, re-expression of an invariant matrix in
//! the orbit basis amounts to reading one entry per orbit, and structure
//! constants are non-negative integers independent of the coefficient ring.
//! The constants are computed once over Z and specialized into k, which is
//! what makes the base-change comparisons in the tests meaningful.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::guards;
use crate::linalg::{Matrix, RowSpan};
use crate::ring::{Ring, Scalar};
use crate::symtensor::{self, MultisetIndex};
use crate::tensor::{word_rank, word_unrank, Perm};

/// One arrangement of an orbit index over End(k^n): the row word and column
/// word of the corresponding elementary-tensor matrix unit.
type Arrangement = (Vec<usize>, Vec<usize>);

struct SchurInner {
    ring: Ring,
    n: usize,
    d: usize,
    basis: Vec<MultisetIndex>,
    index: HashMap<Vec<u32>, usize>,
    /// Arrangements per basis element, lexicographic.
    arrangements: Vec<Vec<Arrangement>>,
    /// Integer structure constants: entry (a*dim+b) lists (e, count).
    consts_z: Vec<Vec<(usize, u64)>>,
    /// The same constants specialized into the coefficient ring.
    consts: Vec<Vec<(usize, Scalar)>>,
    one: Vec<Scalar>,
}

/// Handle to a fully built Schur algebra; cheap to clone.
#[derive(Clone)]
pub struct SchurAlgebra {
    inner: Arc<SchurInner>,
}

/// Element of a [`SchurAlgebra`] in orbit-basis coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchurElement {
    algebra: SchurAlgebra,
    coeffs: Vec<Scalar>,
}

impl std::fmt::Debug for SchurAlgebra {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "SchurAlgebra({}, n={}, d={}, dim={})",
            self.inner.ring,
            self.inner.n,
            self.inner.d,
            self.dim()
        )
    }
}

impl PartialEq for SchurAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.inner.ring == other.inner.ring
            && self.inner.n == other.inner.n
            && self.inner.d == other.inner.d
    }
}

impl Eq for SchurAlgebra {}

/// Splits a symbol 1..n^2 over End(k^n) into its (row, col) pair, 1-based,
/// row-major: symbol 1 is E_11, symbol 2 is E_12, ..., symbol n^2 is E_nn.
fn symbol_to_pair(symbol: usize, n: usize) -> (usize, usize) {
    ((symbol - 1) / n + 1, (symbol - 1) % n + 1)
}

fn arrangement_of_word(word: &[usize], n: usize) -> Arrangement {
    let mut rw = Vec::with_capacity(word.len());
    let mut sw = Vec::with_capacity(word.len());
    for &sym in word {
        let (r, s) = symbol_to_pair(sym, n);
        rw.push(r);
        sw.push(s);
    }
    (rw, sw)
}

/// The orbit index owning the matrix position (row word, column word).
fn orbit_of_words(rw: &[usize], sw: &[usize], n: usize) -> MultisetIndex {
    let word: Vec<usize> = rw
        .iter()
        .zip(sw)
        .map(|(&r, &s)| (r - 1) * n + (s - 1) + 1)
        .collect();
    MultisetIndex::from_word(&word, n * n)
}

impl SchurAlgebra {
    /// Builds S(n,d) over `ring`, computing the orbit basis and all structure
    /// constants eagerly. Constants are computed over Z via the embedding and
    /// specialized by the canonical map Z -> ring.
    pub fn build(ring: &Ring, n: usize, d: usize) -> Result<SchurAlgebra> {
        if n == 0 {
            return Err(Error::BadParameters("n must be >= 1".into()));
        }
        let dim_u128 = symtensor::multiset_count(n * n, d);
        guards::check("Schur algebra dimension", dim_u128, guards::ORBIT_LIMIT)?;
        let tensor_dim = (n as u128).pow(d as u32);
        guards::check("tensor power dimension", tensor_dim, guards::TENSOR_LIMIT)?;

        let basis = symtensor::ts_basis(n * n, d)?;
        let index = symtensor::basis_index_map(&basis);
        let arrangements: Vec<Vec<Arrangement>> = basis
            .iter()
            .map(|idx| {
                idx.arrangements()
                    .iter()
                    .map(|w| arrangement_of_word(w, n))
                    .collect()
            })
            .collect();
        let dim = basis.len();

        // For the join below, group each factor's arrangements by row word.
        let by_row: Vec<HashMap<&[usize], Vec<&[usize]>>> = arrangements
            .iter()
            .map(|arrs| {
                let mut m: HashMap<&[usize], Vec<&[usize]>> = HashMap::new();
                for (rw, sw) in arrs {
                    m.entry(rw.as_slice()).or_default().push(sw.as_slice());
                }
                m
            })
            .collect();

        let mut consts_z: Vec<Vec<(usize, u64)>> = Vec::with_capacity(dim * dim);
        for a in 0..dim {
            for b in 0..dim {
                // Sparse product of the two embedded 0/1 matrices: matrix
                // units compose when the middle words agree.
                let mut positions: HashMap<(usize, usize), (u64, usize)> = HashMap::new();
                for (rw1, sw1) in &arrangements[a] {
                    let Some(rights) = by_row[b].get(sw1.as_slice()) else {
                        continue;
                    };
                    for sw2 in rights {
                        let key = (word_rank(rw1, n), word_rank(sw2, n));
                        let orbit = index[orbit_of_words(rw1, sw2, n).nu()];
                        positions.entry(key).or_insert((0, orbit)).0 += 1;
                    }
                }
                // Fold positions into orbit coefficients. Every position of a
                // touched orbit must occur, and with the same multiplicity.
                let mut coeff: HashMap<usize, u64> = HashMap::new();
                let mut coverage: HashMap<usize, usize> = HashMap::new();
                for (count, e) in positions.values() {
                    if let Some(prev) = coeff.insert(*e, *count) {
                        if prev != *count {
                            return Err(Error::Consistency(format!(
                                "product of orbits {a} and {b} is not orbit-constant"
                            )));
                        }
                    }
                    *coverage.entry(*e).or_insert(0) += 1;
                }
                for (&e, &seen) in &coverage {
                    if seen != arrangements[e].len() {
                        return Err(Error::Consistency(format!(
                            "product of orbits {a} and {b} misses positions of orbit {e}"
                        )));
                    }
                }
                let mut sparse: Vec<(usize, u64)> = coeff.into_iter().collect();
                sparse.sort_unstable();
                consts_z.push(sparse);
            }
        }

        let consts: Vec<Vec<(usize, Scalar)>> = consts_z
            .iter()
            .map(|sparse| {
                sparse
                    .iter()
                    .map(|&(e, c)| (e, ring.from_bigint(&num_bigint::BigInt::from(c))))
                    .filter(|(_, s)| !s.is_zero())
                    .collect()
            })
            .collect();

        let identity = Matrix::identity(ring, n);
        let one = symtensor::gamma_d(ring, &identity.flatten(), d)?
            .coeffs()
            .to_vec();

        Ok(SchurAlgebra {
            inner: Arc::new(SchurInner {
                ring: ring.clone(),
                n,
                d,
                basis,
                index,
                arrangements,
                consts_z,
                consts,
                one,
            }),
        })
    }

    pub fn ring(&self) -> &Ring {
        &self.inner.ring
    }

    pub fn n(&self) -> usize {
        self.inner.n
    }

    pub fn d(&self) -> usize {
        self.inner.d
    }

    pub fn dim(&self) -> usize {
        self.inner.basis.len()
    }

    pub fn basis(&self) -> &[MultisetIndex] {
        &self.inner.basis
    }

    pub fn basis_index(&self, nu: &MultisetIndex) -> Option<usize> {
        self.inner.index.get(nu.nu()).copied()
    }

    /// Dimension of E^(x)d.
    pub fn tensor_dim(&self) -> usize {
        self.inner.n.pow(self.inner.d as u32)
    }

    /// Integer structure constants of basis_a * basis_b (the constants of
    /// the integral Schur algebra).
    pub fn consts_z(&self, a: usize, b: usize) -> &[(usize, u64)] {
        &self.inner.consts_z[a * self.dim() + b]
    }

    pub fn zero(&self) -> SchurElement {
        SchurElement {
            algebra: self.clone(),
            coeffs: vec![self.inner.ring.zero(); self.dim()],
        }
    }

    /// The identity element: gamma_d of the identity matrix.
    pub fn one(&self) -> SchurElement {
        SchurElement {
            algebra: self.clone(),
            coeffs: self.inner.one.clone(),
        }
    }

    pub fn basis_element(&self, e: usize) -> SchurElement {
        let mut x = self.zero();
        x.coeffs[e] = self.inner.ring.one();
        x
    }

    pub fn from_coeffs(&self, coeffs: Vec<Scalar>) -> Result<SchurElement> {
        if coeffs.len() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "expected {} coefficients, got {}",
                self.dim(),
                coeffs.len()
            )));
        }
        if coeffs.iter().any(|s| s.ring() != &self.inner.ring) {
            return Err(Error::RingMismatch);
        }
        Ok(SchurElement {
            algebra: self.clone(),
            coeffs,
        })
    }

    /// gamma_d of an n x n matrix, in orbit coordinates. For invertible g
    /// this is the canonical image of the group element.
    pub fn gamma(&self, g: &Matrix) -> Result<SchurElement> {
        if g.rows() != self.inner.n || g.cols() != self.inner.n {
            return Err(Error::DimensionMismatch(format!(
                "expected {0}x{0} matrix",
                self.inner.n
            )));
        }
        if g.ring() != &self.inner.ring {
            return Err(Error::RingMismatch);
        }
        let coeffs = symtensor::gamma_d(&self.inner.ring, &g.flatten(), self.inner.d)?
            .coeffs()
            .to_vec();
        self.from_coeffs(coeffs)
    }

    /// The first (lexicographically least) arrangement of orbit `e`, as a
    /// matrix position in End(E^(x)d).
    pub fn canonical_position(&self, e: usize) -> (usize, usize) {
        let (rw, sw) = &self.inner.arrangements[e][0];
        (word_rank(rw, self.inner.n), word_rank(sw, self.inner.n))
    }

    /// The orbit owning a matrix position of End(E^(x)d).
    pub fn orbit_of_position(&self, row: usize, col: usize) -> usize {
        let rw = word_unrank(self.inner.n, self.inner.d, row);
        let sw = word_unrank(self.inner.n, self.inner.d, col);
        self.inner.index[orbit_of_words(&rw, &sw, self.inner.n).nu()]
    }

    /// Embeds an element into End(E^(x)d): each orbit maps to the sum of its
    /// arrangement matrix units.
    pub fn embed(&self, x: &SchurElement) -> Result<Matrix> {
        if x.algebra != *self {
            return Err(Error::OwnerMismatch);
        }
        let nd = self.tensor_dim();
        let mut m = Matrix::zeros(&self.inner.ring, nd, nd);
        for (e, c) in x.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (rw, sw) in &self.inner.arrangements[e] {
                m.set(
                    word_rank(rw, self.inner.n),
                    word_rank(sw, self.inner.n),
                    c.clone(),
                );
            }
        }
        Ok(m)
    }

    /// Re-expresses a symmetric-group-invariant endomorphism in the orbit
    /// basis by reading one entry per orbit; errors when the matrix is not
    /// actually orbit-constant (i.e. not invariant).
    pub fn unembed(&self, m: &Matrix) -> Result<SchurElement> {
        let nd = self.tensor_dim();
        if m.rows() != nd || m.cols() != nd {
            return Err(Error::DimensionMismatch("endomorphism size".into()));
        }
        let mut coeffs = Vec::with_capacity(self.dim());
        for e in 0..self.dim() {
            let (r0, c0) = self.canonical_position(e);
            let v = m.at(r0, c0).clone();
            for (rw, sw) in &self.inner.arrangements[e] {
                let entry = m.at(word_rank(rw, self.inner.n), word_rank(sw, self.inner.n));
                if *entry != v {
                    return Err(Error::Consistency(
                        "matrix is not constant on an orbit".into(),
                    ));
                }
            }
            coeffs.push(v);
        }
        self.from_coeffs(coeffs)
    }

    /// Product via the cached structure constants; satisfies
    /// embed(x * y) = embed(x) * embed(y) exactly.
    pub fn mult(&self, x: &SchurElement, y: &SchurElement) -> Result<SchurElement> {
        if x.algebra != *self || y.algebra != *self {
            return Err(Error::OwnerMismatch);
        }
        let ring = &self.inner.ring;
        let dim = self.dim();
        let mut out = vec![ring.zero(); dim];
        for (a, xa) in x.coeffs.iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            for (b, yb) in y.coeffs.iter().enumerate() {
                if yb.is_zero() {
                    continue;
                }
                let factor = ring.mul(xa, yb);
                for (e, c) in &self.inner.consts[a * dim + b] {
                    out[*e] = ring.add(&out[*e], &ring.mul(&factor, c));
                }
            }
        }
        self.from_coeffs(out)
    }

    /// Structure constants as a deterministic text table: lines
    /// `a b e coeff` in lexicographic (a, b, e) order, zero entries omitted.
    pub fn consts_table_text(&self) -> String {
        let dim = self.dim();
        let mut out = String::new();
        for a in 0..dim {
            for b in 0..dim {
                for (e, c) in &self.inner.consts[a * dim + b] {
                    out.push_str(&format!("{a} {b} {e} {c}\n"));
                }
            }
        }
        out
    }
}

impl SchurElement {
    pub fn algebra(&self) -> &SchurAlgebra {
        &self.algebra
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &SchurElement) -> Result<SchurElement> {
        if self.algebra != other.algebra {
            return Err(Error::OwnerMismatch);
        }
        let ring = self.algebra.ring().clone();
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| ring.add(a, b))
            .collect();
        Ok(SchurElement {
            algebra: self.algebra.clone(),
            coeffs,
        })
    }

    pub fn scale(&self, s: &Scalar) -> SchurElement {
        let ring = self.algebra.ring().clone();
        SchurElement {
            algebra: self.algebra.clone(),
            coeffs: self.coeffs.iter().map(|c| ring.mul(c, s)).collect(),
        }
    }
}

/// Basis of the fixed-point realization End(E^(x)d)^{S_d}, computed by
/// solving the conjugation fixed-point system for adjacent transpositions.
/// Over a field the kernel comes from row reduction; over Z it comes from the
/// Smith normal form of the integer constraint matrix.
pub fn invariant_endo_basis(ring: &Ring, n: usize, d: usize) -> Result<Vec<Matrix>> {
    let dim = symtensor::multiset_count(n * n, d);
    guards::check("Schur algebra dimension", dim, guards::ORBIT_LIMIT)?;
    let nd_u128 = (n as u128).pow(d as u32);
    guards::check("tensor power dimension", nd_u128, guards::TENSOR_LIMIT)?;
    if !(ring.is_field() || ring.is_integers()) {
        return Err(Error::NotAField(ring.to_string()));
    }
    let nd = nd_u128 as usize;
    let vars = nd * nd;

    // Constraint rows: M[u o t][v o t] - M[u][v] = 0 for adjacent
    // transpositions t. Rows where the two positions coincide are omitted.
    let mut rows: Vec<(usize, usize)> = Vec::new();
    for i in 1..d {
        let t = Perm::transposition(d, i, i + 1);
        for u in 0..nd {
            let uw = word_unrank(n, d, u);
            let ut: Vec<usize> = (1..=d).map(|k| uw[t.apply(k) - 1]).collect();
            let urank = word_rank(&ut, n);
            for v in 0..nd {
                let vw = word_unrank(n, d, v);
                let vt: Vec<usize> = (1..=d).map(|k| vw[t.apply(k) - 1]).collect();
                let vrank = word_rank(&vt, n);
                let plus = urank * nd + vrank;
                let minus = u * nd + v;
                if plus != minus {
                    rows.push((plus, minus));
                }
            }
        }
    }

    let kernel: Vec<Vec<Scalar>> = if ring.is_field() {
        let mut m = Matrix::zeros(ring, rows.len(), vars);
        for (r, &(plus, minus)) in rows.iter().enumerate() {
            m.set(r, plus, ring.one());
            m.set(r, minus, ring.from_int(-1));
        }
        m.kernel_basis()?
    } else {
        let z = Ring::integers();
        let mut m = Matrix::zeros(&z, rows.len(), vars);
        for (r, &(plus, minus)) in rows.iter().enumerate() {
            m.set(r, plus, z.one());
            m.set(r, minus, z.from_int(-1));
        }
        let snf = m.snf(true)?;
        let (_, v) = snf.transforms.expect("requested transforms");
        let mut cols = Vec::new();
        for i in 0..vars {
            let zero_divisor = snf
                .divisors
                .get(i)
                .is_none_or(num_traits::Zero::is_zero);
            if zero_divisor {
                cols.push(i);
            }
        }
        cols.iter()
            .map(|&c| (0..vars).map(|r| v.at(r, c).clone()).collect())
            .collect()
    };

    kernel
        .into_iter()
        .map(|flat| Matrix::new(ring.clone(), nd, nd, flat))
        .collect()
}

/// Report comparing the two realizations of S(n,d) over a field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RealizationReport {
    pub expected_dim: usize,
    pub orbit_span_rank: usize,
    pub invariant_dim: usize,
    pub spans_equal: bool,
}

/// Checks that the embedded orbit basis and the fixed-point realization span
/// the same subspace of End(E^(x)d), both of the predicted dimension.
pub fn realization_equality(ring: &Ring, n: usize, d: usize) -> Result<RealizationReport> {
    if !ring.is_field() {
        return Err(Error::NotAField(ring.to_string()));
    }
    let algebra = SchurAlgebra::build(ring, n, d)?;
    let expected_dim = algebra.dim();
    let nd = algebra.tensor_dim();

    let mut span = RowSpan::new(ring, nd * nd);
    for e in 0..algebra.dim() {
        let m = algebra.embed(&algebra.basis_element(e))?;
        span.insert(m.flatten());
    }
    let orbit_span_rank = span.rank();

    let invariants = invariant_endo_basis(ring, n, d)?;
    let invariant_dim = invariants.len();

    // Containment in both directions: the union must not grow.
    let mut union = span.clone();
    let mut contained = true;
    for m in &invariants {
        if union.insert(m.flatten()) {
            contained = false;
        }
    }
    let spans_equal =
        contained && orbit_span_rank == invariant_dim && orbit_span_rank == expected_dim;
    Ok(RealizationReport {
        expected_dim,
        orbit_span_rank,
        invariant_dim,
        spans_equal,
    })
}
