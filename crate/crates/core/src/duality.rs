//! The canonical algebra map from the group algebra of GL(n) into the Schur
//! algebra S(n,d), and the tests built on it: surjectivity (Schur-Weyl
//! duality), the ring-epimorphism criterion via balanced tensors, strong
//! epimorphism reporting over fields, mod-p obstruction certificates for the
//! integral map, and lattice lower bounds for the integral image.
//!
//! The image of the canonical map is the span of the gamma_d images of the
//! group elements: the group algebra is spanned by group elements, so no
//! extra multiplicative closure is needed (closure is property-tested).

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::guards;
use crate::linalg::{span_saturate, Matrix, RowSpan};
use crate::ring::{Ring, RingRepr, Scalar, ScalarRepr};
use crate::schur::{SchurAlgebra, SchurElement};
use crate::symtensor;

const SAMPLE_SEED: u64 = 0x5357_4c41_4221;

struct GlInner {
    ring: Ring,
    n: usize,
    elements: Vec<Matrix>,
    index: HashMap<Vec<ScalarRepr>, usize>,
}

/// A fully enumerated finite general linear group, elements in lexicographic
/// order of their flattened entries.
#[derive(Clone)]
pub struct GlGroup {
    inner: Arc<GlInner>,
}

fn matrix_key(m: &Matrix) -> Vec<ScalarRepr> {
    m.entries().iter().map(|s| s.repr().clone()).collect()
}

/// |GL_n(F_q)| = prod_{i=0}^{n-1} (q^n - q^i).
pub fn gl_order_over_field(q: u128, n: usize) -> u128 {
    let qn = q.pow(n as u32);
    (0..n).map(|i| qn - q.pow(i as u32)).product()
}

impl GlGroup {
    /// Enumerates all invertible n x n matrices over a finite ring. Over Z/m
    /// invertibility means unit determinant. For fields the element count is
    /// verified against the order formula.
    pub fn enumerate(ring: &Ring, n: usize) -> Result<GlGroup> {
        let card = ring.cardinality().ok_or(Error::InfiniteRing)?;
        let candidates = card.pow((n * n) as u32);
        guards::check("GL candidate scan", candidates, guards::GL_SCAN_LIMIT)?;
        let mut elements = Vec::new();
        let mut index = HashMap::new();
        for code in 0..candidates {
            let m = candidate_matrix(ring, n, card, code);
            if m.is_invertible()? {
                index.insert(matrix_key(&m), elements.len());
                elements.push(m);
            }
        }
        if ring.is_field() {
            let expected = gl_order_over_field(card, n);
            if elements.len() as u128 != expected {
                return Err(Error::Consistency(format!(
                    "|GL_{n}({ring})| = {} but the order formula gives {expected}",
                    elements.len()
                )));
            }
        }
        Ok(GlGroup {
            inner: Arc::new(GlInner {
                ring: ring.clone(),
                n,
                elements,
                index,
            }),
        })
    }

    pub fn ring(&self) -> &Ring {
        &self.inner.ring
    }

    pub fn n(&self) -> usize {
        self.inner.n
    }

    pub fn order(&self) -> usize {
        self.inner.elements.len()
    }

    pub fn elements(&self) -> &[Matrix] {
        &self.inner.elements
    }

    pub fn index_of(&self, m: &Matrix) -> Option<usize> {
        self.inner.index.get(&matrix_key(m)).copied()
    }

    pub fn identity_index(&self) -> usize {
        let id = Matrix::identity(&self.inner.ring, self.inner.n);
        self.index_of(&id).expect("identity is invertible")
    }

    /// Full multiplication table: entry [i][j] is the index of g_i * g_j.
    pub fn mult_table(&self) -> Result<Vec<Vec<usize>>> {
        guards::check(
            "group order for multiplication table",
            self.order() as u128,
            guards::GROUP_ALGEBRA_LIMIT,
        )?;
        let mut table = Vec::with_capacity(self.order());
        for a in &self.inner.elements {
            let mut row = Vec::with_capacity(self.order());
            for b in &self.inner.elements {
                let prod = a.mul(b)?;
                let idx = self
                    .index_of(&prod)
                    .ok_or_else(|| Error::Consistency("group not closed".into()))?;
                row.push(idx);
            }
            table.push(row);
        }
        Ok(table)
    }
}

impl std::fmt::Debug for GlGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "GlGroup(GL_{}({}), order {})",
            self.inner.n,
            self.inner.ring,
            self.order()
        )
    }
}

fn candidate_matrix(ring: &Ring, n: usize, card: u128, code: u128) -> Matrix {
    // Most significant digit = entry (0,0), so the scan is lexicographic on
    // flattened rows.
    let mut digits = vec![0u128; n * n];
    let mut rest = code;
    for slot in digits.iter_mut().rev() {
        *slot = rest % card;
        rest /= card;
    }
    let entries: Vec<Scalar> = digits
        .iter()
        .map(|&v| ring.element_from_index(v))
        .collect();
    Matrix::new(ring.clone(), n, n, entries).expect("square shape")
}

/// The canonical image of an invertible matrix: gamma_d(g) in orbit
/// coordinates. Its embedding into End(E^(x)d) is the Kronecker d-th power
/// of g.
pub fn phi(schur: &SchurAlgebra, g: &Matrix) -> Result<SchurElement> {
    schur.gamma(g)
}

/// A group, a Schur algebra, and the canonical images of all group elements.
/// Construction spot-checks multiplicativity: exhaustively for groups of
/// order at most 200, on a seeded sample of pairs otherwise.
pub struct PhiContext {
    group: GlGroup,
    schur: SchurAlgebra,
    images: Vec<SchurElement>,
}

impl PhiContext {
    pub fn new(group: GlGroup, schur: SchurAlgebra) -> Result<PhiContext> {
        if group.ring() != schur.ring() || group.n() != schur.n() {
            return Err(Error::BadParameters(
                "group and Schur algebra must share ring and n".into(),
            ));
        }
        let images: Vec<SchurElement> = group
            .elements()
            .iter()
            .map(|g| schur.gamma(g))
            .collect::<Result<_>>()?;
        let ctx = PhiContext {
            group,
            schur,
            images,
        };
        ctx.spot_check_multiplicativity()?;
        Ok(ctx)
    }

    fn spot_check_multiplicativity(&self) -> Result<()> {
        let order = self.group.order();
        let check = |i: usize, j: usize| -> Result<()> {
            let g = &self.group.elements()[i];
            let h = &self.group.elements()[j];
            let lhs = self.schur.mult(&self.images[i], &self.images[j])?;
            let rhs = self.schur.gamma(&g.mul(h)?)?;
            if lhs != rhs {
                return Err(Error::Consistency(format!(
                    "phi(g)phi(h) != phi(gh) for elements {i}, {j}"
                )));
            }
            Ok(())
        };
        if order <= 200 {
            for i in 0..order {
                for j in 0..order {
                    check(i, j)?;
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED);
            for _ in 0..10_000 {
                check(rng.gen_range(0..order), rng.gen_range(0..order))?;
            }
        }
        Ok(())
    }

    pub fn group(&self) -> &GlGroup {
        &self.group
    }

    pub fn schur(&self) -> &SchurAlgebra {
        &self.schur
    }

    pub fn images(&self) -> &[SchurElement] {
        &self.images
    }
}

/// Rank of the span of the canonical images over a field, and whether the
/// map is surjective (rank = dim S).
pub fn image_rank(ctx: &PhiContext) -> Result<(usize, bool)> {
    let ring = ctx.schur.ring();
    if !ring.is_field() {
        return Err(Error::NotAField(ring.to_string()));
    }
    let mut span = RowSpan::new(ring, ctx.schur.dim());
    for img in &ctx.images {
        span.insert(img.coeffs().to_vec());
        if span.rank() == ctx.schur.dim() {
            break;
        }
    }
    Ok((span.rank(), span.rank() == ctx.schur.dim()))
}

// ---------------------------------------------------------------------------
// Fast arithmetic for prime fields: raw u64 vectors mod p. Used by the
// streaming rank and the balanced-tensor reduction, where scalar-handle
// overhead would dominate.
// ---------------------------------------------------------------------------
mod fp {
    pub fn inv(a: u64, p: u64) -> u64 {
        let (mut r0, mut r1) = (p as i128, (a % p) as i128);
        let (mut s0, mut s1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        debug_assert_eq!(r0, 1);
        s0.rem_euclid(p as i128) as u64
    }

    pub fn pow(mut base: u64, mut exp: u64, p: u64) -> u64 {
        let mut acc = 1u64 % p;
        base %= p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            exp >>= 1;
        }
        acc
    }

    pub fn det(mut m: Vec<u64>, n: usize, p: u64) -> u64 {
        let mut det = 1u64 % p;
        for col in 0..n {
            let pivot = (col..n).find(|&r| m[r * n + col] % p != 0);
            let Some(pr) = pivot else { return 0 };
            if pr != col {
                for c in 0..n {
                    m.swap(pr * n + c, col * n + c);
                }
                det = (p - det) % p;
            }
            let pv = m[col * n + col] % p;
            det = det * pv % p;
            let pv_inv = inv(pv, p);
            for r in col + 1..n {
                let factor = m[r * n + col] % p * pv_inv % p;
                if factor == 0 {
                    continue;
                }
                for c in col..n {
                    let t = factor * (m[col * n + c] % p) % p;
                    m[r * n + c] = (m[r * n + c] % p + p - t) % p;
                }
            }
        }
        det
    }

    /// Incremental reduced echelon span over F_p.
    pub struct Span {
        p: u64,
        cols: usize,
        rows: Vec<Vec<u64>>,
        pivots: Vec<usize>,
    }

    impl Span {
        pub fn new(p: u64, cols: usize) -> Span {
            Span {
                p,
                cols,
                rows: Vec::new(),
                pivots: Vec::new(),
            }
        }

        pub fn rank(&self) -> usize {
            self.rows.len()
        }

        pub fn insert(&mut self, mut v: Vec<u64>) -> bool {
            let p = self.p;
            for (row, &piv) in self.rows.iter().zip(&self.pivots) {
                let f = v[piv] % p;
                if f == 0 {
                    continue;
                }
                for c in piv..self.cols {
                    if row[c] == 0 {
                        continue;
                    }
                    v[c] = (v[c] + p - f * row[c] % p) % p;
                }
            }
            let Some(pivot) = v.iter().position(|&x| x % p != 0) else {
                return false;
            };
            let norm = inv(v[pivot] % p, p);
            for c in pivot..self.cols {
                v[c] = v[c] % p * norm % p;
            }
            for (row, _) in self.rows.iter_mut().zip(&self.pivots) {
                let f = row[pivot];
                if f == 0 {
                    continue;
                }
                for c in pivot..self.cols {
                    if v[c] == 0 {
                        continue;
                    }
                    row[c] = (row[c] + p - f * v[c] % p) % p;
                }
            }
            let at = self.pivots.binary_search(&pivot).expect_err("new pivot");
            self.rows.insert(at, v);
            self.pivots.insert(at, pivot);
            true
        }
    }
}

/// Exact rank of the canonical image over a finite field, computed without
/// materializing the group: a seeded random probe first (which certifies
/// surjectivity early), then a full deterministic scan when the probe did
/// not already reach full rank.
pub fn image_rank_streaming(ring: &Ring, n: usize, d: usize) -> Result<(usize, usize)> {
    if !ring.is_field() {
        return Err(Error::NotAField(ring.to_string()));
    }
    let card = ring.cardinality().expect("finite field");
    let candidates = card.pow((n * n) as u32);
    guards::check("GL candidate scan", candidates, guards::GL_SCAN_LIMIT)?;
    let dim = symtensor::multiset_count(n * n, d);
    guards::check("Schur algebra dimension", dim, guards::ORBIT_LIMIT)?;
    let dim = dim as usize;
    let exponents: Vec<Vec<u32>> = symtensor::ts_basis(n * n, d)?
        .iter()
        .map(|idx| idx.nu().to_vec())
        .collect();

    if let RingRepr::PrimeField { p } = *ring.repr() {
        let mut span = fp::Span::new(p, dim);
        let gamma = |entries: &[u64]| -> Vec<u64> {
            exponents
                .iter()
                .map(|nu| {
                    let mut acc = 1u64 % p;
                    for (x, &e) in entries.iter().zip(nu) {
                        if e > 0 {
                            acc = acc * fp::pow(*x, e as u64, p) % p;
                        }
                    }
                    acc
                })
                .collect()
        };
        // Probe phase.
        let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED);
        let mut draws = 0usize;
        while span.rank() < dim && draws < 64 * dim + 64 {
            draws += 1;
            let entries: Vec<u64> = (0..n * n).map(|_| rng.gen_range(0..p)).collect();
            if fp::det(entries.clone(), n, p) == 0 {
                continue;
            }
            span.insert(gamma(&entries));
        }
        if span.rank() == dim {
            return Ok((dim, dim));
        }
        // Full scan.
        for code in 0..candidates {
            let mut digits = vec![0u64; n * n];
            let mut rest = code;
            for slot in digits.iter_mut().rev() {
                *slot = (rest % card) as u64;
                rest /= card;
            }
            if fp::det(digits.clone(), n, p) == 0 {
                continue;
            }
            span.insert(gamma(&digits));
            if span.rank() == dim {
                return Ok((dim, dim));
            }
        }
        return Ok((span.rank(), dim));
    }

    // Generic path (extension fields).
    let mut span = RowSpan::new(ring, dim);
    let gamma = |m: &Matrix| -> Result<Vec<Scalar>> {
        Ok(symtensor::gamma_d(ring, &m.flatten(), d)?.coeffs().to_vec())
    };
    let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED);
    let mut draws = 0usize;
    while span.rank() < dim && draws < 64 * dim + 64 {
        draws += 1;
        let entries: Vec<Scalar> = (0..n * n)
            .map(|_| ring.element_from_index(rng.gen_range(0..card)))
            .collect();
        let m = Matrix::new(ring.clone(), n, n, entries)?;
        if !m.is_invertible()? {
            continue;
        }
        span.insert(gamma(&m)?);
    }
    if span.rank() == dim {
        return Ok((dim, dim));
    }
    for code in 0..candidates {
        let m = candidate_matrix(ring, n, card, code);
        if !m.is_invertible()? {
            continue;
        }
        span.insert(gamma(&m)?);
        if span.rank() == dim {
            return Ok((dim, dim));
        }
    }
    Ok((span.rank(), dim))
}

/// Surjectivity of the canonical map over Z/m, decided through the Smith
/// normal form of the integer lift of the image matrix: the image is all of
/// (Z/m)^dim iff dim divisors are coprime to m.
pub fn image_rank_mod_m(n: usize, d: usize, m: u64) -> Result<(usize, bool)> {
    let ring = Ring::int_mod(m)?;
    let group = GlGroup::enumerate(&ring, n)?;
    let dim = symtensor::multiset_count(n * n, d);
    guards::check("Schur algebra dimension", dim, guards::ORBIT_LIMIT)?;
    let dim = dim as usize;
    let z = Ring::integers();
    let mut rows = Vec::with_capacity(group.order());
    for g in group.elements() {
        let coeffs = symtensor::gamma_d(&ring, &g.flatten(), d)?;
        let lifted: Vec<Scalar> = coeffs
            .coeffs()
            .iter()
            .map(|s| z.from_bigint(&s.to_bigint().expect("residue entry")))
            .collect();
        rows.push(lifted);
    }
    let mat = Matrix::from_rows(&z, rows)?;
    let free_rank = crate::linalg::free_rank_mod_m(&mat.reduce_to(&ring)?, m)?;
    Ok((free_rank, free_rank == dim))
}

/// Outcome of the balanced-tensor epimorphism test.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EpiReport {
    pub dim_s: usize,
    pub dim_balanced: usize,
    pub is_epi: bool,
}

/// Decides whether the canonical map is a ring epimorphism over a finite
/// field: it is iff the multiplication map B (x)_A B -> B is bijective, i.e.
/// iff dim(B (x)_A B) = dim B. The balanced tensor square is computed as
/// B (x) B modulo the relations x phi(g) (x) y - x (x) phi(g) y, with g
/// ranging over all group elements (they span the group algebra, so
/// generators alone would not suffice without multiplicative saturation).
pub fn epi_test(ctx: &PhiContext) -> Result<EpiReport> {
    let ring = ctx.schur.ring();
    if !ring.is_field() {
        return Err(Error::NotAField(ring.to_string()));
    }
    let dim = ctx.schur.dim();
    let order = ctx.group.order() as u128;
    let entries = (dim as u128).pow(4) * order;
    guards::check("balanced tensor reduction entries", entries, guards::EPI_ENTRY_LIMIT)?;

    let rank = if let RingRepr::PrimeField { p } = *ring.repr() {
        balanced_relation_rank_fp(ctx, p)
    } else {
        balanced_relation_rank_generic(ctx)?
    };
    let dim_balanced = dim * dim - rank;
    if dim_balanced < dim {
        return Err(Error::Consistency(
            "balanced tensor square smaller than the algebra".into(),
        ));
    }
    Ok(EpiReport {
        dim_s: dim,
        dim_balanced,
        is_epi: dim_balanced == dim,
    })
}

fn scalar_to_u64(s: &Scalar) -> u64 {
    match s.repr() {
        ScalarRepr::Mod(v) => *v,
        _ => unreachable!("prime-field scalar"),
    }
}

fn balanced_relation_rank_fp(ctx: &PhiContext, p: u64) -> usize {
    let dim = ctx.schur.dim();
    let schur = &ctx.schur;
    let mut span = fp::Span::new(p, dim * dim);
    for img in &ctx.images {
        let coeffs: Vec<u64> = img.coeffs().iter().map(scalar_to_u64).collect();
        // right[a] = b_a * phi(g), left[b] = phi(g) * b_b, via the integer
        // structure constants reduced mod p.
        let mut right = vec![vec![0u64; dim]; dim];
        let mut left = vec![vec![0u64; dim]; dim];
        for (nu, &c) in coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for a in 0..dim {
                for &(e, count) in schur.consts_z(a, nu) {
                    right[a][e] = (right[a][e] + c * (count % p)) % p;
                }
                for &(e, count) in schur.consts_z(nu, a) {
                    left[a][e] = (left[a][e] + c * (count % p)) % p;
                }
            }
        }
        for alpha in 0..dim {
            for beta in 0..dim {
                let mut row = vec![0u64; dim * dim];
                for (mu, &v) in right[alpha].iter().enumerate() {
                    row[mu * dim + beta] = v;
                }
                for (omega, &v) in left[beta].iter().enumerate() {
                    let idx = alpha * dim + omega;
                    row[idx] = (row[idx] + p - v) % p;
                }
                span.insert(row);
            }
        }
    }
    span.rank()
}

fn balanced_relation_rank_generic(ctx: &PhiContext) -> Result<usize> {
    let ring = ctx.schur.ring().clone();
    let dim = ctx.schur.dim();
    let schur = &ctx.schur;
    let mut span = RowSpan::new(&ring, dim * dim);
    for img in &ctx.images {
        let mut right = Vec::with_capacity(dim);
        let mut left = Vec::with_capacity(dim);
        for a in 0..dim {
            right.push(schur.mult(&schur.basis_element(a), img)?);
            left.push(schur.mult(img, &schur.basis_element(a))?);
        }
        for alpha in 0..dim {
            for beta in 0..dim {
                let mut row = vec![ring.zero(); dim * dim];
                for (mu, v) in right[alpha].coeffs().iter().enumerate() {
                    row[mu * dim + beta] = v.clone();
                }
                for (omega, v) in left[beta].coeffs().iter().enumerate() {
                    let idx = alpha * dim + omega;
                    row[idx] = ring.sub(&row[idx], v);
                }
                span.insert(row);
            }
        }
    }
    Ok(span.rank())
}

/// Field-case summary: by the field lemma, strong epimorphism is equivalent
/// to surjectivity, and the module-category equivalence holds exactly for
/// strong epimorphisms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StrongEpiReport {
    pub dim_s: usize,
    pub rank: usize,
    pub surjective: bool,
    pub is_epi: bool,
    pub strong_epi: bool,
    pub equivalence_of_categories: bool,
}

pub fn strong_epi_report(ctx: &PhiContext) -> Result<StrongEpiReport> {
    let ring = ctx.schur.ring();
    if !ring.is_field() {
        return Err(Error::NotAField(ring.to_string()));
    }
    let (rank, surjective) = image_rank(ctx)?;
    let is_epi = if surjective {
        true // surjections are epimorphisms
    } else {
        epi_test(ctx)?.is_epi
    };
    if surjective && !is_epi {
        return Err(Error::Consistency("surjective but not epi".into()));
    }
    Ok(StrongEpiReport {
        dim_s: ctx.schur.dim(),
        rank,
        surjective,
        is_epi,
        strong_epi: surjective,
        equivalence_of_categories: surjective,
    })
}

/// Certificate that the integral canonical map is (or is not known to be)
/// non-surjective, obtained by reducing mod p: the reduction of the integral
/// image lies inside the F_p-image, so a proper F_p-image certifies
/// non-surjectivity over Z.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ZCertificate {
    pub n: usize,
    pub d: usize,
    pub p: u64,
    pub fp_rank: usize,
    #[serde(rename = "dimS")]
    pub dim_s: usize,
    pub obstruction: bool,
}

pub fn z_mod_p_obstruction(n: usize, d: usize, p: u64) -> Result<ZCertificate> {
    let ring = Ring::prime_field(p)?;
    let (fp_rank, dim_s) = image_rank_streaming(&ring, n, d)?;
    Ok(ZCertificate {
        n,
        d,
        p,
        fp_rank,
        dim_s,
        obstruction: fp_rank < dim_s,
    })
}

/// Empirical lower bound on the image lattice of the integral canonical map
/// for n = 2, from gamma_d images of words in the standard generators of
/// GL_2(Z): the two elementary transvections, the swap, and -I.
#[derive(Debug, Clone)]
pub struct ZSaturation {
    pub basis: Matrix,
    pub rank: usize,
    pub divisors: Vec<BigInt>,
    pub stabilized: bool,
    pub words_consumed: usize,
    /// Fixed caveat attached to every report.
    pub note: &'static str,
}

pub const Z_SATURATION_NOTE: &str = "lower bound on image lattice - not a completeness proof";

pub fn z_image_saturate(n: usize, d: usize, word_len: usize) -> Result<ZSaturation> {
    if n != 2 {
        return Err(Error::BadParameters(
            "integral saturation is implemented for n = 2".into(),
        ));
    }
    guards::check("generator word length", word_len as u128, guards::WORD_LEN_LIMIT)?;
    let dim = symtensor::multiset_count(4, d);
    guards::check("Schur algebra dimension", dim, guards::ORBIT_LIMIT)?;
    let z = Ring::integers();
    let gens: Vec<Matrix> = vec![
        Matrix::from_ints(&z, &[&[1, 1], &[0, 1]]),
        Matrix::from_ints(&z, &[&[1, 0], &[1, 1]]),
        Matrix::from_ints(&z, &[&[0, 1], &[1, 0]]),
        Matrix::from_ints(&z, &[&[-1, 0], &[0, -1]]),
    ];
    let z2 = z.clone();
    let stream = (0..=word_len).flat_map(move |len| {
        let gens = gens.clone();
        let z = z2.clone();
        (0..4u64.pow(len as u32)).map(move |code| {
            let mut m = Matrix::identity(&z, 2);
            let mut rest = code;
            for _ in 0..len {
                m = m.mul(&gens[(rest % 4) as usize]).expect("2x2 product");
                rest /= 4;
            }
            symtensor::gamma_d(&z, &m.flatten(), d)
                .expect("within guards")
                .coeffs()
                .iter()
                .map(|s| s.to_bigint().expect("integer"))
                .collect::<Vec<BigInt>>()
        })
    });
    let sat = span_saturate(stream, 2048, None)?;
    let rank = sat.basis.rows();
    let divisors = if rank == 0 {
        Vec::new()
    } else {
        sat.basis.snf(false)?.divisors
    };
    Ok(ZSaturation {
        basis: sat.basis,
        rank,
        divisors,
        stabilized: sat.stabilized,
        words_consumed: sat.generators_consumed,
        note: Z_SATURATION_NOTE,
    })
}

/// One row of the surjectivity sweep.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub q: u64,
    pub n: usize,
    pub d: usize,
    #[serde(rename = "dimS")]
    pub dim_s: u128,
    pub rank: Option<usize>,
    pub surjective: Option<bool>,
    pub epi: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Sweeps (q, n, d) cells in input order. Cells with q > d must come out
/// surjective; a violation aborts the sweep with a consistency error. Guard
/// overruns inside a cell are recorded in the row and the sweep continues.
pub fn threshold_sweep(qs: &[u64], ns: &[usize], ds: &[usize]) -> Result<Vec<SweepRow>> {
    let mut rows = Vec::new();
    for &q in qs {
        let ring = ring_for_field_size(q)?;
        for &n in ns {
            for &d in ds {
                rows.push(sweep_cell(&ring, q, n, d)?);
            }
        }
    }
    Ok(rows)
}

fn ring_for_field_size(q: u64) -> Result<Ring> {
    let ring = Ring::parse(&format!("F{q}"))?;
    Ok(ring)
}

fn sweep_cell(ring: &Ring, q: u64, n: usize, d: usize) -> Result<SweepRow> {
    let dim_s = symtensor::multiset_count(n * n, d);
    let mut row = SweepRow {
        q,
        n,
        d,
        dim_s,
        rank: None,
        surjective: None,
        epi: None,
        note: None,
    };
    match image_rank_streaming(ring, n, d) {
        Ok((rank, dim)) => {
            row.rank = Some(rank);
            row.surjective = Some(rank == dim);
        }
        Err(e @ Error::GuardExceeded { .. }) => {
            row.note = Some(e.to_string());
            return Ok(row);
        }
        Err(e) => return Err(e),
    }
    let surjective = row.surjective.unwrap();
    if q as usize > d && !surjective {
        return Err(Error::Consistency(format!(
            "cell (q={q}, n={n}, d={d}) must be surjective for q > d but rank {} < {dim_s}",
            row.rank.unwrap()
        )));
    }
    if surjective {
        // Surjections are epimorphisms; no quotient computation needed.
        row.epi = Some(true);
        return Ok(row);
    }
    // Check the epi guard using the order formula before materializing.
    let order = gl_order_over_field(q as u128, n);
    let entries = dim_s.pow(4).saturating_mul(order);
    if let Err(e) = guards::check("balanced tensor reduction entries", entries, guards::EPI_ENTRY_LIMIT) {
        row.note = Some(e.to_string());
        return Ok(row);
    }
    let group = match GlGroup::enumerate(ring, n) {
        Ok(g) => g,
        Err(e @ Error::GuardExceeded { .. }) => {
            row.note = Some(e.to_string());
            return Ok(row);
        }
        Err(e) => return Err(e),
    };
    let schur = match SchurAlgebra::build(ring, n, d) {
        Ok(s) => s,
        Err(e @ Error::GuardExceeded { .. }) => {
            row.note = Some(e.to_string());
            return Ok(row);
        }
        Err(e) => return Err(e),
    };
    let ctx = PhiContext::new(group, schur)?;
    match epi_test(&ctx) {
        Ok(report) => row.epi = Some(report.is_epi),
        Err(e @ Error::GuardExceeded { .. }) => row.note = Some(e.to_string()),
        Err(e) => return Err(e),
    }
    Ok(row)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64) -> Ring {
        Ring::prime_field(p).unwrap()
    }

    #[test]
    fn gl_orders_match_formula() {
        // The order formula is the oracle: (4-1)(4-2) = 6, (9-1)(9-3) = 48.
        assert_eq!(gl_order_over_field(2, 2), 6);
        assert_eq!(gl_order_over_field(3, 2), 48);
        let g = GlGroup::enumerate(&f(2), 2).unwrap();
        assert_eq!(g.order(), 6);
        let g = GlGroup::enumerate(&f(3), 2).unwrap();
        assert_eq!(g.order(), 48);
        // GL_1(F_5): the nonzero scalars.
        let g = GlGroup::enumerate(&f(5), 1).unwrap();
        assert_eq!(g.order(), 4);
    }

    #[test]
    fn gl_over_residue_ring_uses_unit_determinant() {
        let z4 = Ring::int_mod(4).unwrap();
        let g = GlGroup::enumerate(&z4, 1).unwrap();
        // Units of Z/4: 1 and 3.
        assert_eq!(g.order(), 2);
        let g = GlGroup::enumerate(&z4, 2).unwrap();
        // |GL_2(Z/4)| = 96.
        assert_eq!(g.order(), 96);
    }

    #[test]
    fn phi_examples() {
        let f2 = f(2);
        let s = SchurAlgebra::build(&f2, 2, 2).unwrap();
        // phi(I) is the identity of S.
        let id = Matrix::identity(&f2, 2);
        assert_eq!(phi(&s, &id).unwrap(), s.one());

        // d = 1: phi(g) = g in End coordinates.
        let s1 = SchurAlgebra::build(&f2, 2, 1).unwrap();
        let g = Matrix::from_ints(&f2, &[&[1, 1], &[0, 1]]);
        let img = phi(&s1, &g).unwrap();
        assert_eq!(img.coeffs(), g.flatten().as_slice());
    }

    #[test]
    fn phi_of_swap_regrouped_from_kronecker_square() {
        // Oracle: expand swap (x) swap and regroup into orbit coordinates.
        let f2 = f(2);
        let s = SchurAlgebra::build(&f2, 2, 2).unwrap();
        let swap = Matrix::from_ints(&f2, &[&[0, 1], &[1, 0]]);
        let img = phi(&s, &swap).unwrap();
        // Kronecker square of the swap.
        let mut kron = Matrix::zeros(&f2, 4, 4);
        for u1 in 0..2 {
            for u2 in 0..2 {
                for w1 in 0..2 {
                    for w2 in 0..2 {
                        let v = f2.mul(swap.at(u1, w1), swap.at(u2, w2));
                        kron.set(u1 * 2 + u2, w1 * 2 + w2, v);
                    }
                }
            }
        }
        assert_eq!(s.embed(&img).unwrap(), kron);
        let regrouped = s.unembed(&kron).unwrap();
        assert_eq!(img, regrouped);
        // The nonzero orbit coordinates are exactly (E12,E12), (E12,E21),
        // (E21,E21): the monomials supported on the support of the swap.
        let lookup = symtensor::basis_index_map(s.basis());
        let mut expected = vec![f2.zero(); s.dim()];
        expected[lookup[&vec![0u32, 2, 0, 0]]] = f2.one();
        expected[lookup[&vec![0u32, 1, 1, 0]]] = f2.one();
        expected[lookup[&vec![0u32, 0, 2, 0]]] = f2.one();
        assert_eq!(img.coeffs(), expected.as_slice());
    }

    #[test]
    fn image_rank_f2_2_2_not_surjective() {
        let f2 = f(2);
        let group = GlGroup::enumerate(&f2, 2).unwrap();
        let schur = SchurAlgebra::build(&f2, 2, 2).unwrap();
        let ctx = PhiContext::new(group, schur).unwrap();
        let (rank, surjective) = image_rank(&ctx).unwrap();
        // Oracle: enumerate the span of the six images exhaustively.
        let mut seen = std::collections::HashSet::new();
        for mask in 0u32..64 {
            let mut acc = ctx.schur().zero();
            for (i, img) in ctx.images().iter().enumerate() {
                if mask >> i & 1 == 1 {
                    acc = acc.add(img).unwrap();
                }
            }
            seen.insert(
                acc.coeffs()
                    .iter()
                    .map(|s| s.to_string())
                    .collect::<Vec<_>>(),
            );
        }
        let oracle_rank = (seen.len() as f64).log2().round() as usize;
        assert_eq!(oracle_rank, 6);
        assert_eq!(rank, 6);
        assert!(!surjective);
        assert_eq!(ctx.schur().dim(), 10);

        // Streaming agrees.
        assert_eq!(image_rank_streaming(&f2, 2, 2).unwrap(), (6, 10));
    }

    #[test]
    fn image_rank_f3_2_2_surjective() {
        let f3 = f(3);
        let group = GlGroup::enumerate(&f3, 2).unwrap();
        let schur = SchurAlgebra::build(&f3, 2, 2).unwrap();
        let ctx = PhiContext::new(group, schur).unwrap();
        assert_eq!(image_rank(&ctx).unwrap(), (10, true));
        assert_eq!(image_rank_streaming(&f3, 2, 2).unwrap(), (10, 10));
    }

    #[test]
    fn image_rank_f2_2_1_surjective() {
        // The six invertible matrices span End(F_2^2): rank 4.
        let f2 = f(2);
        let group = GlGroup::enumerate(&f2, 2).unwrap();
        let schur = SchurAlgebra::build(&f2, 2, 1).unwrap();
        let ctx = PhiContext::new(group, schur).unwrap();
        assert_eq!(image_rank(&ctx).unwrap(), (4, true));
    }

    #[test]
    fn image_span_is_multiplicatively_closed() {
        // For (F_2, 2, 2): products of images stay inside the span of images.
        let f2 = f(2);
        let group = GlGroup::enumerate(&f2, 2).unwrap();
        let schur = SchurAlgebra::build(&f2, 2, 2).unwrap();
        let ctx = PhiContext::new(group, schur).unwrap();
        let mut span = RowSpan::new(&f2, ctx.schur().dim());
        for img in ctx.images() {
            span.insert(img.coeffs().to_vec());
        }
        for x in ctx.images() {
            for y in ctx.images() {
                let prod = ctx.schur().mult(x, y).unwrap();
                assert!(span.contains(prod.coeffs()));
            }
        }
    }

    #[test]
    fn epi_test_f2_2_2_fails() {
        let f2 = f(2);
        let group = GlGroup::enumerate(&f2, 2).unwrap();
        let schur = SchurAlgebra::build(&f2, 2, 2).unwrap();
        let ctx = PhiContext::new(group, schur).unwrap();
        let report = epi_test(&ctx).unwrap();
        assert!(!report.is_epi);
        assert!(report.dim_balanced > 10, "{report:?}");
        // Cross-check against the generic (scalar) elimination route.
        let generic_rank = balanced_relation_rank_generic(&ctx).unwrap();
        assert_eq!(report.dim_balanced, 100 - generic_rank);
    }

    #[test]
    fn epi_test_f3_2_2_succeeds() {
        let f3 = f(3);
        let group = GlGroup::enumerate(&f3, 2).unwrap();
        let schur = SchurAlgebra::build(&f3, 2, 2).unwrap();
        let ctx = PhiContext::new(group, schur).unwrap();
        let report = epi_test(&ctx).unwrap();
        assert!(report.is_epi);
        assert_eq!(report.dim_balanced, 10);
    }

    #[test]
    fn strong_epi_reports() {
        let cases = [
            (2u64, 2usize, 2usize, false),
            (3, 2, 2, true),
            (2, 2, 1, true),
        ];
        for (p, n, d, expect) in cases {
            let ring = f(p);
            let group = GlGroup::enumerate(&ring, n).unwrap();
            let schur = SchurAlgebra::build(&ring, n, d).unwrap();
            let ctx = PhiContext::new(group, schur).unwrap();
            let report = strong_epi_report(&ctx).unwrap();
            assert_eq!(report.strong_epi, expect, "(F_{p}, {n}, {d})");
            assert_eq!(report.equivalence_of_categories, expect);
            assert_eq!(report.surjective, expect);
            if report.surjective {
                assert!(report.is_epi);
            }
        }
    }

    #[test]
    fn z_certificates() {
        let cert = z_mod_p_obstruction(2, 2, 2).unwrap();
        assert!(cert.obstruction);
        assert_eq!((cert.fp_rank, cert.dim_s), (6, 10));

        let cert = z_mod_p_obstruction(2, 2, 3).unwrap();
        assert!(!cert.obstruction);
        assert_eq!(cert.fp_rank, 10);

        let cert = z_mod_p_obstruction(2, 1, 2).unwrap();
        assert!(!cert.obstruction);

        assert_eq!(z_mod_p_obstruction(2, 2, 4).unwrap_err(), Error::NonPrime(4));
    }

    #[test]
    fn z_saturation_full_lattice_for_d1() {
        let sat = z_image_saturate(2, 1, 4).unwrap();
        assert_eq!(sat.rank, 4);
        assert!(sat.divisors.iter().all(|d| *d == BigInt::from(1)));
        assert!(sat.stabilized);
    }

    #[test]
    fn z_saturation_d2_has_even_divisor() {
        let sat = z_image_saturate(2, 2, 6).unwrap();
        assert_eq!(sat.rank, 10);
        let evens = sat
            .divisors
            .iter()
            .filter(|d| (*d % BigInt::from(2)) == BigInt::from(0))
            .count();
        // Consistency with the mod-2 obstruction: the image mod 2 has rank 6,
        // so exactly 10 - 6 = 4 divisors must be even.
        assert_eq!(evens, 4);
    }

    #[test]
    fn z_saturation_rejects_bad_parameters() {
        assert!(z_image_saturate(3, 2, 4).is_err());
        assert!(z_image_saturate(2, 2, 40).is_err());
    }

    #[test]
    fn sweep_spot_cells() {
        let rows = threshold_sweep(&[2, 3], &[2], &[1, 2]).unwrap();
        assert_eq!(rows.len(), 4);
        let find = |q: u64, d: usize| rows.iter().find(|r| r.q == q && r.d == d).unwrap();
        assert_eq!(find(2, 1).surjective, Some(true));
        assert_eq!(find(2, 2).surjective, Some(false));
        assert_eq!(find(2, 2).epi, Some(false));
        assert_eq!(find(3, 2).surjective, Some(true));
        assert_eq!(find(3, 2).epi, Some(true));
        // Monotone consistency inside every row.
        for row in &rows {
            if row.surjective == Some(true) {
                assert_eq!(row.epi, Some(true));
            }
        }
    }

    #[test]
    fn sweep_includes_extension_fields() {
        let rows = threshold_sweep(&[4], &[2], &[2, 3]).unwrap();
        for row in &rows {
            assert_eq!(row.surjective, Some(true), "q=4 d={} must be surjective", row.d);
        }
    }

    #[test]
    fn mod_m_surjectivity_route() {
        // d = 1 over Z/4: the invertible matrices span all of End((Z/4)^2).
        let (rank, surj) = image_rank_mod_m(2, 1, 4).unwrap();
        assert_eq!((rank, surj), (4, true));
        // d = 2 over Z/4: reduction mod 2 already obstructs surjectivity.
        let (rank, surj) = image_rank_mod_m(2, 2, 4).unwrap();
        assert!(rank < 10);
        assert!(!surj);
    }
}
