//! Structure analysis of small finite-dimensional algebras over finite
//! fields: group algebras from multiplication tables, centers, the Jacobson
//! radical by brute-force enumeration, central idempotents, and block
//! decompositions.
//!
//! Everything here is enumeration-based on purpose: at dimension <= 10 over
//! F_2 or F_3 the exhaustive search is instant and serves as an
//! unimpeachable oracle, so the subtler characteristic-p radical algorithms
//! are not needed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::guards;
use crate::linalg::{Matrix, RowSpan};
use crate::ring::{Ring, Scalar};
use crate::schur::SchurAlgebra;

/// Associative unital algebra given by structure constants over a finite
/// field. Associativity and the two-sided unit law are verified exhaustively
/// at construction.
#[derive(Debug, Clone)]
pub struct FdAlgebra {
    ring: Ring,
    dim: usize,
    /// Dense coefficient vector of basis_a * basis_b at slot a*dim + b.
    consts: Vec<Vec<Scalar>>,
    unit: Vec<Scalar>,
}

/// Per-block facts of a decomposition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockInfo {
    pub dim: usize,
    pub radical_dim: usize,
    pub commutative: bool,
}

/// Primitive central idempotents and their blocks.
#[derive(Debug, Clone)]
pub struct BlockDecomposition {
    pub idempotents: Vec<Vec<Scalar>>,
    pub blocks: Vec<BlockInfo>,
}

/// Coarse isomorphism invariants. Equal algebras yield equal profiles; the
/// converse is not claimed anywhere.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AlgebraProfile {
    pub dim: usize,
    pub commutative: bool,
    pub center_dim: usize,
    pub radical_dim: usize,
    pub ss_dim: usize,
    pub block_dims: Vec<usize>,
}

impl FdAlgebra {
    pub fn new(
        ring: &Ring,
        dim: usize,
        consts: Vec<Vec<Scalar>>,
        unit: Vec<Scalar>,
    ) -> Result<FdAlgebra> {
        if !ring.is_field() || !ring.is_finite() {
            return Err(Error::NotAField(ring.to_string()));
        }
        if consts.len() != dim * dim || consts.iter().any(|v| v.len() != dim) || unit.len() != dim
        {
            return Err(Error::DimensionMismatch("structure constant table".into()));
        }
        let alg = FdAlgebra {
            ring: ring.clone(),
            dim,
            consts,
            unit,
        };
        alg.verify_axioms()?;
        Ok(alg)
    }

    fn verify_axioms(&self) -> Result<()> {
        let dim = self.dim;
        for a in 0..dim {
            let ea = self.basis_vec(a);
            let left = self.mul(&self.unit, &ea);
            let right = self.mul(&ea, &self.unit);
            if left != ea || right != ea {
                return Err(Error::Consistency(format!("unit law fails on basis {a}")));
            }
        }
        for a in 0..dim {
            for b in 0..dim {
                let ab = self.consts[a * dim + b].clone();
                for c in 0..dim {
                    let ec = self.basis_vec(c);
                    let lhs = self.mul(&ab, &ec);
                    let rhs = self.mul(&self.basis_vec(a), &self.consts[b * dim + c]);
                    if lhs != rhs {
                        return Err(Error::Consistency(format!(
                            "associativity fails on basis triple ({a},{b},{c})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn unit(&self) -> &[Scalar] {
        &self.unit
    }

    pub fn basis_vec(&self, i: usize) -> Vec<Scalar> {
        let mut v = vec![self.ring.zero(); self.dim];
        v[i] = self.ring.one();
        v
    }

    pub fn mul(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let ring = &self.ring;
        let mut out = vec![ring.zero(); self.dim];
        for (a, xa) in x.iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            for (b, yb) in y.iter().enumerate() {
                if yb.is_zero() {
                    continue;
                }
                let f = ring.mul(xa, yb);
                for (o, c) in out.iter_mut().zip(&self.consts[a * self.dim + b]) {
                    if !c.is_zero() {
                        *o = ring.add(o, &ring.mul(&f, c));
                    }
                }
            }
        }
        out
    }

    pub fn is_commutative(&self) -> bool {
        for a in 0..self.dim {
            for b in a + 1..self.dim {
                if self.consts[a * self.dim + b] != self.consts[b * self.dim + a] {
                    return false;
                }
            }
        }
        true
    }

    /// The group algebra of a fully enumerated matrix group.
    pub fn group_algebra(ring: &Ring, group: &crate::duality::GlGroup) -> Result<FdAlgebra> {
        guards::check(
            "group order",
            group.order() as u128,
            guards::GROUP_ALGEBRA_LIMIT,
        )?;
        let table = group.mult_table()?;
        Self::from_table_unchecked(ring, &table, group.identity_index())
    }

    /// A group algebra from an explicit multiplication table (entries are
    /// 0-based element indices). The table is validated: identity, inverses,
    /// and associativity (exhaustive up to order 32, sampled beyond).
    pub fn from_table(ring: &Ring, table: &[Vec<usize>]) -> Result<FdAlgebra> {
        let order = table.len();
        guards::check("group order", order as u128, guards::GROUP_ALGEBRA_LIMIT)?;
        if table.iter().any(|row| row.len() != order) {
            return Err(Error::NotAGroup("table is not square".into()));
        }
        if table
            .iter()
            .any(|row| row.iter().any(|&v| v >= order))
        {
            return Err(Error::NotAGroup("index out of range".into()));
        }
        let identity = (0..order)
            .find(|&e| (0..order).all(|g| table[e][g] == g && table[g][e] == g))
            .ok_or_else(|| Error::NotAGroup("no identity element".into()))?;
        for g in 0..order {
            if !(0..order).any(|h| table[g][h] == identity && table[h][g] == identity) {
                return Err(Error::NotAGroup(format!("element {g} has no inverse")));
            }
        }
        let check = |a: usize, b: usize, c: usize| -> Result<()> {
            if table[table[a][b]][c] != table[a][table[b][c]] {
                return Err(Error::NotAGroup(format!(
                    "associativity fails on ({a},{b},{c})"
                )));
            }
            Ok(())
        };
        if order <= 32 {
            for a in 0..order {
                for b in 0..order {
                    for c in 0..order {
                        check(a, b, c)?;
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0x46_44_41);
            for _ in 0..10_000 {
                check(
                    rng.gen_range(0..order),
                    rng.gen_range(0..order),
                    rng.gen_range(0..order),
                )?;
            }
        }
        Self::from_table_unchecked(ring, table, identity)
    }

    fn from_table_unchecked(
        ring: &Ring,
        table: &[Vec<usize>],
        identity: usize,
    ) -> Result<FdAlgebra> {
        let order = table.len();
        let mut consts = vec![vec![ring.zero(); order]; order * order];
        for a in 0..order {
            for b in 0..order {
                consts[a * order + b][table[a][b]] = ring.one();
            }
        }
        let mut unit = vec![ring.zero(); order];
        unit[identity] = ring.one();
        FdAlgebra::new(ring, order, consts, unit)
    }

    /// The Schur algebra as an abstract structure-constant algebra.
    pub fn from_schur(s: &SchurAlgebra) -> Result<FdAlgebra> {
        let ring = s.ring();
        let dim = s.dim();
        let mut consts = vec![vec![ring.zero(); dim]; dim * dim];
        for a in 0..dim {
            for b in 0..dim {
                let prod = s.mult(&s.basis_element(a), &s.basis_element(b))?;
                consts[a * dim + b] = prod.coeffs().to_vec();
            }
        }
        FdAlgebra::new(ring, dim, consts, s.one().coeffs().to_vec())
    }

    /// The dual numbers k[eps], eps^2 = 0.
    pub fn dual_numbers(ring: &Ring) -> Result<FdAlgebra> {
        let z = ring.zero();
        let o = ring.one();
        let consts = vec![
            vec![o.clone(), z.clone()], // 1*1
            vec![z.clone(), o.clone()], // 1*eps
            vec![z.clone(), o.clone()], // eps*1
            vec![z.clone(), z.clone()], // eps*eps
        ];
        FdAlgebra::new(ring, 2, consts, vec![o, z])
    }

    /// Block-diagonal direct sum (unit = sum of the units).
    pub fn direct_sum(&self, other: &FdAlgebra) -> Result<FdAlgebra> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch);
        }
        let ring = &self.ring;
        let dim = self.dim + other.dim;
        let mut consts = vec![vec![ring.zero(); dim]; dim * dim];
        for a in 0..self.dim {
            for b in 0..self.dim {
                let src = &self.consts[a * self.dim + b];
                let dst = &mut consts[a * dim + b];
                dst[..self.dim].clone_from_slice(src);
            }
        }
        for a in 0..other.dim {
            for b in 0..other.dim {
                let src = &other.consts[a * other.dim + b];
                let dst = &mut consts[(self.dim + a) * dim + (self.dim + b)];
                dst[self.dim..].clone_from_slice(src);
            }
        }
        let mut unit = self.unit.clone();
        unit.extend(other.unit.iter().cloned());
        FdAlgebra::new(ring, dim, consts, unit)
    }

    /// Basis of the center in reduced echelon form: the kernel of
    /// x -> (x b_i - b_i x)_i.
    pub fn center(&self) -> Result<Vec<Vec<Scalar>>> {
        let dim = self.dim;
        let ring = &self.ring;
        let mut m = Matrix::zeros(ring, dim * dim, dim);
        for i in 0..dim {
            for e in 0..dim {
                for a in 0..dim {
                    let forward = &self.consts[a * dim + i][e];
                    let backward = &self.consts[i * dim + a][e];
                    m.set(i * dim + e, a, ring.sub(forward, backward));
                }
            }
        }
        m.kernel_basis()
    }

    /// Enumerates all elements as coefficient vectors, in canonical order.
    fn enumerate_elements(&self) -> Result<Vec<Vec<Scalar>>> {
        let card = self.ring.cardinality().expect("finite field");
        let total = card.checked_pow(self.dim as u32).ok_or(Error::GuardExceeded {
            what: "algebra element enumeration",
            actual: u128::MAX,
            limit: guards::RADICAL_ENUM_LIMIT,
        })?;
        guards::check(
            "algebra element enumeration",
            total,
            guards::RADICAL_ENUM_LIMIT,
        )?;
        let mut out = Vec::with_capacity(total as usize);
        for code in 0..total {
            let mut rest = code;
            let mut v = Vec::with_capacity(self.dim);
            for _ in 0..self.dim {
                v.push(self.ring.element_from_index(rest % card));
                rest /= card;
            }
            out.push(v);
        }
        Ok(out)
    }

    /// Two-sided ideal generated by x, as a reduced echelon span.
    fn ideal_span(&self, x: &[Scalar]) -> RowSpan {
        let mut span = RowSpan::new(&self.ring, self.dim);
        if !span.insert(x.to_vec()) {
            return span;
        }
        let mut queue: Vec<Vec<Scalar>> = vec![x.to_vec()];
        while let Some(v) = queue.pop() {
            for i in 0..self.dim {
                let b = self.basis_vec(i);
                for w in [self.mul(&b, &v), self.mul(&v, &b)] {
                    if span.insert(w.clone()) {
                        queue.push(w);
                    }
                }
            }
        }
        span
    }

    /// True when the ideal spanned by `basis` is nilpotent: some power
    /// vanishes within dim steps.
    fn ideal_is_nilpotent(&self, basis: &[Vec<Scalar>]) -> bool {
        let mut power: Vec<Vec<Scalar>> = basis.to_vec();
        for _ in 0..=self.dim {
            if power.is_empty() {
                return true;
            }
            let mut next = RowSpan::new(&self.ring, self.dim);
            for u in &power {
                for v in basis {
                    next.insert(self.mul(u, v));
                }
            }
            power = next.basis().to_vec();
        }
        power.is_empty()
    }

    /// The Jacobson radical by brute force: the set of elements whose
    /// generated two-sided ideal is nilpotent (for finite-dimensional
    /// algebras this set is exactly the radical).
    pub fn brute_radical(&self) -> Result<Vec<Vec<Scalar>>> {
        let mut radical = RowSpan::new(&self.ring, self.dim);
        for x in self.enumerate_elements()? {
            if x.iter().all(|c| c.is_zero()) {
                continue;
            }
            if radical.contains(&x) {
                continue;
            }
            let ideal = self.ideal_span(&x);
            if self.ideal_is_nilpotent(ideal.basis()) {
                radical.insert(x);
            }
        }
        Ok(radical.basis().to_vec())
    }

    /// Quotient by a two-sided ideal given as a reduced echelon basis; the
    /// quotient basis consists of the non-pivot coordinates.
    pub fn quotient(&self, ideal: &[Vec<Scalar>]) -> Result<FdAlgebra> {
        let ring = &self.ring;
        let mut span = RowSpan::new(ring, self.dim);
        for v in ideal {
            span.insert(v.clone());
        }
        let pivots: Vec<usize> = span
            .basis()
            .iter()
            .map(|row| row.iter().position(|c| !c.is_zero()).expect("nonzero row"))
            .collect();
        let free: Vec<usize> = (0..self.dim).filter(|i| !pivots.contains(i)).collect();
        let reduce = |v: &[Scalar]| -> Vec<Scalar> {
            let mut w = v.to_vec();
            for (row, &p) in span.basis().iter().zip(&pivots) {
                if w[p].is_zero() {
                    continue;
                }
                let f = w[p].clone();
                for c in 0..self.dim {
                    if !row[c].is_zero() {
                        let t = ring.mul(&f, &row[c]);
                        w[c] = ring.sub(&w[c], &t);
                    }
                }
            }
            free.iter().map(|&i| w[i].clone()).collect()
        };
        let qdim = free.len();
        let mut consts = vec![vec![ring.zero(); qdim]; qdim * qdim];
        for (qa, &a) in free.iter().enumerate() {
            for (qb, &b) in free.iter().enumerate() {
                consts[qa * qdim + qb] = reduce(&self.consts[a * self.dim + b]);
            }
        }
        let unit = reduce(&self.unit);
        FdAlgebra::new(ring, qdim, consts, unit)
    }

    /// All central idempotents (including 0 and 1), by exhaustive
    /// enumeration of the center.
    fn central_idempotents(&self) -> Result<Vec<Vec<Scalar>>> {
        let center = self.center()?;
        let card = self.ring.cardinality().expect("finite field");
        let total = card.checked_pow(center.len() as u32).ok_or(Error::GuardExceeded {
            what: "central idempotent enumeration",
            actual: u128::MAX,
            limit: guards::RADICAL_ENUM_LIMIT,
        })?;
        guards::check(
            "central idempotent enumeration",
            total,
            guards::RADICAL_ENUM_LIMIT,
        )?;
        let ring = &self.ring;
        let mut out = Vec::new();
        for code in 0..total {
            let mut rest = code;
            let mut x = vec![ring.zero(); self.dim];
            for z in &center {
                let lam = ring.element_from_index(rest % card);
                rest /= card;
                if lam.is_zero() {
                    continue;
                }
                for (xe, ze) in x.iter_mut().zip(z) {
                    *xe = ring.add(xe, &ring.mul(&lam, ze));
                }
            }
            if self.mul(&x, &x) == x {
                out.push(x);
            }
        }
        Ok(out)
    }

    /// Block decomposition by primitive central idempotents. Verifies the
    /// partition of unity and pairwise orthogonality, and reports each
    /// block's dimension, radical dimension, and commutativity.
    pub fn central_idempotent_blocks(&self) -> Result<BlockDecomposition> {
        let ring = &self.ring;
        let idempotents = self.central_idempotents()?;
        let nonzero: Vec<&Vec<Scalar>> = idempotents
            .iter()
            .filter(|e| e.iter().any(|c| !c.is_zero()))
            .collect();
        // e is primitive iff no other nonzero central idempotent f satisfies
        // f e = f (then e = f + (e - f) splits e).
        let mut primitive: Vec<Vec<Scalar>> = Vec::new();
        for e in &nonzero {
            let splits = nonzero.iter().any(|f| {
                f != e && self.mul(f, e) == ***f
            });
            if !splits {
                primitive.push((*e).clone());
            }
        }
        // Partition of unity and orthogonality.
        let mut sum = vec![ring.zero(); self.dim];
        for e in &primitive {
            for (s, c) in sum.iter_mut().zip(e) {
                *s = ring.add(s, c);
            }
        }
        if sum != self.unit {
            return Err(Error::Consistency(
                "primitive central idempotents do not sum to 1".into(),
            ));
        }
        for (i, e) in primitive.iter().enumerate() {
            for (j, f) in primitive.iter().enumerate() {
                let prod = self.mul(e, f);
                let expect = if i == j {
                    e.clone()
                } else {
                    vec![ring.zero(); self.dim]
                };
                if prod != expect {
                    return Err(Error::Consistency(
                        "central idempotents are not orthogonal".into(),
                    ));
                }
            }
        }
        // Deterministic order: by coefficient text.
        primitive.sort_by_key(|e| e.iter().map(|c| c.to_string()).collect::<Vec<_>>());

        let mut blocks = Vec::new();
        for e in &primitive {
            let block = self.corner_algebra(e)?;
            blocks.push(BlockInfo {
                dim: block.dim,
                radical_dim: block.brute_radical()?.len(),
                commutative: block.is_commutative(),
            });
        }
        Ok(BlockDecomposition {
            idempotents: primitive,
            blocks,
        })
    }

    /// The subalgebra e A for a central idempotent e, with unit e.
    fn corner_algebra(&self, e: &[Scalar]) -> Result<FdAlgebra> {
        let ring = &self.ring;
        let mut span = RowSpan::new(ring, self.dim);
        for i in 0..self.dim {
            span.insert(self.mul(e, &self.basis_vec(i)));
        }
        let rows: Vec<Vec<Scalar>> = span.basis().to_vec();
        let pivots: Vec<usize> = rows
            .iter()
            .map(|row| row.iter().position(|c| !c.is_zero()).expect("nonzero row"))
            .collect();
        // Reduced echelon rows: a member's coordinates are its pivot entries.
        let coords = |v: &[Scalar]| -> Vec<Scalar> {
            pivots.iter().map(|&p| v[p].clone()).collect()
        };
        let bdim = rows.len();
        let mut consts = vec![vec![ring.zero(); bdim]; bdim * bdim];
        for a in 0..bdim {
            for b in 0..bdim {
                consts[a * bdim + b] = coords(&self.mul(&rows[a], &rows[b]));
            }
        }
        FdAlgebra::new(ring, bdim, consts, coords(e))
    }

    /// Coarse invariants: dimension, commutativity, center and radical
    /// dimensions, semisimple quotient dimension, sorted block dimensions.
    pub fn profile(&self) -> Result<AlgebraProfile> {
        let radical_dim = self.brute_radical()?.len();
        let decomposition = self.central_idempotent_blocks()?;
        let mut block_dims: Vec<usize> = decomposition.blocks.iter().map(|b| b.dim).collect();
        block_dims.sort_unstable();
        Ok(AlgebraProfile {
            dim: self.dim,
            commutative: self.is_commutative(),
            center_dim: self.center()?.len(),
            radical_dim,
            ss_dim: self.dim - radical_dim,
            block_dims,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::duality::GlGroup;

    fn f(p: u64) -> Ring {
        Ring::prime_field(p).unwrap()
    }

    fn dual_cubed(ring: &Ring) -> FdAlgebra {
        let d = FdAlgebra::dual_numbers(ring).unwrap();
        d.direct_sum(&d).unwrap().direct_sum(&d).unwrap()
    }

    #[test]
    fn dual_numbers_radical() {
        for p in [2u64, 3] {
            let d = FdAlgebra::dual_numbers(&f(p)).unwrap();
            let rad = d.brute_radical().unwrap();
            assert_eq!(rad.len(), 1, "p = {p}");
            // eps spans the radical.
            assert_eq!(rad[0][0], f(p).zero());
        }
    }

    #[test]
    fn dual_cube_profile() {
        let a = dual_cubed(&f(2));
        assert_eq!(a.dim(), 6);
        let rad = a.brute_radical().unwrap();
        assert_eq!(rad.len(), 3);
        let profile = a.profile().unwrap();
        assert_eq!(
            profile,
            AlgebraProfile {
                dim: 6,
                commutative: true,
                center_dim: 6,
                radical_dim: 3,
                ss_dim: 3,
                block_dims: vec![2, 2, 2],
            }
        );
        let blocks = a.central_idempotent_blocks().unwrap();
        assert_eq!(blocks.blocks.len(), 3);
        for b in &blocks.blocks {
            assert_eq!((b.dim, b.radical_dim, b.commutative), (2, 1, true));
        }
    }

    #[test]
    fn cyclic_group_algebra_is_dual_numbers_in_char_2() {
        // C_2 over F_2 via the basis change {1, g-1}: (g-1)^2 = 0.
        let f2 = f(2);
        let table = vec![vec![0, 1], vec![1, 0]];
        let a = FdAlgebra::from_table(&f2, &table).unwrap();
        let g_minus_1 = vec![f2.one(), f2.one()]; // 1 + g in char 2
        let sq = a.mul(&g_minus_1, &g_minus_1);
        assert!(sq.iter().all(|c| c.is_zero()));
        assert_eq!(a.brute_radical().unwrap().len(), 1);
        assert_eq!(
            a.profile().unwrap(),
            FdAlgebra::dual_numbers(&f2).unwrap().profile().unwrap()
        );
    }

    #[test]
    fn trivial_group_algebra_is_the_field() {
        let a = FdAlgebra::from_table(&f(2), &[vec![0]]).unwrap();
        assert_eq!(a.dim(), 1);
        assert_eq!(a.brute_radical().unwrap().len(), 0);
    }

    #[test]
    fn semisimple_group_algebras_have_zero_radical() {
        // C_3 over F_2 and C_2 over F_3 (characteristic coprime to order).
        let c3 = vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]];
        let a = FdAlgebra::from_table(&f(2), &c3).unwrap();
        assert_eq!(a.brute_radical().unwrap().len(), 0);

        let c2 = vec![vec![0, 1], vec![1, 0]];
        let a = FdAlgebra::from_table(&f(3), &c2).unwrap();
        assert_eq!(a.brute_radical().unwrap().len(), 0);
    }

    #[test]
    fn bad_tables_are_rejected() {
        let f2 = f(2);
        // No identity: the constant table.
        let t = vec![vec![0, 0], vec![0, 0]];
        assert!(matches!(
            FdAlgebra::from_table(&f2, &t),
            Err(Error::NotAGroup(_))
        ));
        // Non-associative "multiplication".
        let t = vec![vec![0, 1, 2], vec![1, 0, 0], vec![2, 0, 0]];
        assert!(matches!(
            FdAlgebra::from_table(&f2, &t),
            Err(Error::NotAGroup(_))
        ));
    }

    fn matrix_algebra_2x2(ring: &Ring) -> FdAlgebra {
        // Basis E11, E12, E21, E22; E_ij E_kl = delta_jk E_il.
        let dim = 4;
        let pair = |i: usize| ((i / 2) + 1, (i % 2) + 1);
        let mut consts = vec![vec![ring.zero(); dim]; dim * dim];
        for a in 0..dim {
            let (i, j) = pair(a);
            for b in 0..dim {
                let (k, l) = pair(b);
                if j == k {
                    let e = (i - 1) * 2 + (l - 1);
                    consts[a * dim + b][e] = ring.one();
                }
            }
        }
        let mut unit = vec![ring.zero(); dim];
        unit[0] = ring.one();
        unit[3] = ring.one();
        FdAlgebra::new(ring, dim, consts, unit).unwrap()
    }

    #[test]
    fn matrix_algebra_is_simple_with_scalar_center() {
        let a = matrix_algebra_2x2(&f(2));
        assert_eq!(a.center().unwrap().len(), 1);
        assert_eq!(a.brute_radical().unwrap().len(), 0);
        assert!(!a.is_commutative());
        let profile = a.profile().unwrap();
        assert_eq!(profile.block_dims, vec![4]);
    }

    #[test]
    fn gl2_f2_group_algebra_structure() {
        let f2 = f(2);
        let group = GlGroup::enumerate(&f2, 2).unwrap();
        let a = FdAlgebra::group_algebra(&f2, &group).unwrap();
        assert_eq!(a.dim(), 6);

        // Center dimension equals the number of conjugacy classes; oracle:
        // count the classes by brute conjugation.
        let elems = group.elements();
        let mut seen = vec![false; elems.len()];
        let mut classes = 0;
        for i in 0..elems.len() {
            if seen[i] {
                continue;
            }
            classes += 1;
            for g in elems {
                let ginv_idx = (0..elems.len())
                    .find(|&j| {
                        g.mul(&elems[j]).unwrap() == Matrix::identity(&f2, 2)
                    })
                    .unwrap();
                let conj = g.mul(&elems[i]).unwrap().mul(&elems[ginv_idx]).unwrap();
                seen[group.index_of(&conj).unwrap()] = true;
            }
        }
        assert_eq!(classes, 3);
        assert_eq!(a.center().unwrap().len(), classes);

        // Radical: the 64-element search finds the span of the sum of all
        // group elements.
        let rad = a.brute_radical().unwrap();
        assert_eq!(rad.len(), 1);
        let all_ones = vec![f2.one(); 6];
        assert!(rad.contains(&all_ones));

        // Quotient by the radical is semisimple.
        let quot = a.quotient(&rad).unwrap();
        assert_eq!(quot.dim(), 5);
        assert_eq!(quot.brute_radical().unwrap().len(), 0);
    }

    #[test]
    fn gl2_f2_blocks_differ_from_dual_cube() {
        // The computed decomposition is authoritative: two blocks, of
        // dimensions 2 and 4, the 4-dimensional one non-commutative. This is
        // not the three-factor dual-numbers profile.
        let f2 = f(2);
        let group = GlGroup::enumerate(&f2, 2).unwrap();
        let a = FdAlgebra::group_algebra(&f2, &group).unwrap();
        let blocks = a.central_idempotent_blocks().unwrap();
        let mut dims: Vec<usize> = blocks.blocks.iter().map(|b| b.dim).collect();
        dims.sort_unstable();
        assert_eq!(dims, vec![2, 4]);
        // Block sanity: dims sum to the algebra dimension, blocks annihilate
        // each other (orthogonality is checked inside), and each block's
        // radical quotient is semisimple by construction of BlockInfo.
        assert_eq!(blocks.blocks.iter().map(|b| b.dim).sum::<usize>(), 6);

        let profile = a.profile().unwrap();
        assert_eq!(
            profile,
            AlgebraProfile {
                dim: 6,
                commutative: false,
                center_dim: 3,
                radical_dim: 1,
                ss_dim: 5,
                block_dims: vec![2, 4],
            }
        );
        let reference = dual_cubed(&f2).profile().unwrap();
        assert_ne!(profile, reference, "the two profiles must differ");
    }

    #[test]
    fn direct_sum_profiles_are_componentwise() {
        let f2 = f(2);
        let m2 = matrix_algebra_2x2(&f2);
        let d = FdAlgebra::dual_numbers(&f2).unwrap();
        let sum = m2.direct_sum(&d).unwrap();
        let p = sum.profile().unwrap();
        assert_eq!(p.dim, 6);
        assert_eq!(p.radical_dim, 1);
        assert_eq!(p.center_dim, 3);
        assert_eq!(p.block_dims, vec![2, 4]);
    }

    #[test]
    fn schur_algebra_profile_f2_2_2() {
        let s = SchurAlgebra::build(&f(2), 2, 2).unwrap();
        let a = FdAlgebra::from_schur(&s).unwrap();
        let profile = a.profile().unwrap();
        assert_eq!(profile.dim, 10);
        // Frozen from the 1024-element brute-force search; the semisimple
        // quotient M_2 x M_1 has dimension 5 and the algebra is connected.
        assert_eq!(profile.radical_dim, 5);
        assert_eq!(profile.ss_dim, 5);
        assert_eq!(profile.block_dims, vec![10]);
        assert!(!profile.commutative);
    }
}
