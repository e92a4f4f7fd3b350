//! The module E = k^n, its d-th tensor power with word-indexed basis, the
//! place-permutation action of the symmetric group, and the diagonal GL
//! action.
//!
//! Basis vectors of E^(x)d are indexed by words of length d over {1..n},
//! ranked lexicographically with letter 1 smallest and the leftmost letter
//! most significant.

use crate::error::{Error, Result};
use crate::guards;
use crate::linalg::Matrix;
use crate::ring::{Ring, Scalar};

/// Word of length d over the alphabet {1..n}; indexes a basis vector of the
/// d-th tensor power.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word {
    letters: Vec<usize>,
}

impl Word {
    pub fn new(letters: Vec<usize>, n: usize) -> Result<Word> {
        if letters.iter().any(|&l| l < 1 || l > n) {
            return Err(Error::BadParameters(format!(
                "letters must lie in 1..={n}"
            )));
        }
        Ok(Word { letters })
    }

    pub fn letters(&self) -> &[usize] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Lexicographic rank in 0..n^d.
    pub fn rank(&self, n: usize) -> usize {
        word_rank(&self.letters, n)
    }

    /// Inverse of [`Word::rank`].
    pub fn unrank(n: usize, d: usize, index: usize) -> Result<Word> {
        let total = checked_power(n, d)?;
        if index >= total {
            return Err(Error::BadParameters(format!(
                "word index {index} out of range 0..{total}"
            )));
        }
        Ok(Word {
            letters: word_unrank(n, d, index),
        })
    }
}

pub(crate) fn word_rank(letters: &[usize], n: usize) -> usize {
    letters.iter().fold(0, |acc, &l| acc * n + (l - 1))
}

pub(crate) fn word_unrank(n: usize, d: usize, index: usize) -> Vec<usize> {
    let mut letters = vec![1usize; d];
    let mut rest = index;
    for slot in letters.iter_mut().rev() {
        *slot = rest % n + 1;
        rest /= n;
    }
    letters
}

fn checked_power(n: usize, d: usize) -> Result<usize> {
    let mut acc: u128 = 1;
    for _ in 0..d {
        acc = acc.saturating_mul(n as u128);
    }
    guards::check("tensor power dimension", acc, guards::TENSOR_LIMIT)?;
    Ok(acc as usize)
}

/// Permutation of {1..d}, stored as the image sequence (sigma(1), ..., sigma(d)).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Perm {
    images: Vec<usize>,
}

impl Perm {
    pub fn new(images: Vec<usize>) -> Result<Perm> {
        let d = images.len();
        let mut seen = vec![false; d];
        for &i in &images {
            if i < 1 || i > d || seen[i - 1] {
                return Err(Error::BadParameters("not a permutation".into()));
            }
            seen[i - 1] = true;
        }
        Ok(Perm { images })
    }

    pub fn identity(d: usize) -> Perm {
        Perm {
            images: (1..=d).collect(),
        }
    }

    /// The transposition (i j), 1-based.
    pub fn transposition(d: usize, i: usize, j: usize) -> Perm {
        assert!(i >= 1 && j >= 1 && i <= d && j <= d && i != j);
        let mut images: Vec<usize> = (1..=d).collect();
        images.swap(i - 1, j - 1);
        Perm { images }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i - 1]
    }

    /// Composition `self . other`: apply `other` first, then `self`.
    pub fn compose(&self, other: &Perm) -> Perm {
        assert_eq!(self.degree(), other.degree());
        Perm {
            images: (1..=self.degree())
                .map(|i| self.apply(other.apply(i)))
                .collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut images = vec![0usize; self.degree()];
        for (i, &img) in self.images.iter().enumerate() {
            images[img - 1] = i + 1;
        }
        Perm { images }
    }

    /// All permutations of degree d in lexicographic order of image sequences.
    pub fn all(d: usize) -> Vec<Perm> {
        let mut out = Vec::new();
        let mut images: Vec<usize> = (1..=d).collect();
        loop {
            out.push(Perm {
                images: images.clone(),
            });
            // Next lexicographic permutation.
            let Some(i) = (0..d.saturating_sub(1)).rev().find(|&i| images[i] < images[i + 1])
            else {
                break;
            };
            let j = (i + 1..d).rev().find(|&j| images[j] > images[i]).unwrap();
            images.swap(i, j);
            images[i + 1..].reverse();
        }
        out
    }
}

/// Element of E^(x)d as a dense coefficient vector over the word basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorVector {
    ring: Ring,
    n: usize,
    d: usize,
    coeffs: Vec<Scalar>,
}

impl TensorVector {
    pub fn zero(ring: &Ring, n: usize, d: usize) -> Result<TensorVector> {
        let len = checked_power(n, d)?;
        Ok(TensorVector {
            ring: ring.clone(),
            n,
            d,
            coeffs: vec![ring.zero(); len],
        })
    }

    pub fn from_coeffs(ring: &Ring, n: usize, d: usize, coeffs: Vec<Scalar>) -> Result<TensorVector> {
        let len = checked_power(n, d)?;
        if coeffs.len() != len {
            return Err(Error::DimensionMismatch(format!(
                "expected {len} coefficients, got {}",
                coeffs.len()
            )));
        }
        if coeffs.iter().any(|s| s.ring() != ring) {
            return Err(Error::RingMismatch);
        }
        Ok(TensorVector {
            ring: ring.clone(),
            n,
            d,
            coeffs,
        })
    }

    /// The basis vector e_w.
    pub fn basis_vector(ring: &Ring, n: usize, d: usize, word: &Word) -> Result<TensorVector> {
        if word.len() != d {
            return Err(Error::DimensionMismatch("word length".into()));
        }
        let mut v = TensorVector::zero(ring, n, d)?;
        let idx = word.rank(n);
        v.coeffs[idx] = ring.one();
        Ok(v)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn add(&self, other: &TensorVector) -> Result<TensorVector> {
        if (self.n, self.d) != (other.n, other.d) || self.ring != other.ring {
            return Err(Error::DimensionMismatch("tensor addition".into()));
        }
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| self.ring.add(a, b))
            .collect();
        Ok(TensorVector {
            ring: self.ring.clone(),
            n: self.n,
            d: self.d,
            coeffs,
        })
    }

    /// Place permutation: the group acts on the left, sending the basis word
    /// w to w composed with sigma^{-1}. With this convention
    /// `(s.compose(t)).act(v) == s.act(t.act(v))`.
    pub fn perm_act(&self, sigma: &Perm) -> Result<TensorVector> {
        if sigma.degree() != self.d {
            return Err(Error::DimensionMismatch(format!(
                "permutation degree {} vs tensor degree {}",
                sigma.degree(),
                self.d
            )));
        }
        let mut out = vec![self.ring.zero(); self.coeffs.len()];
        for (target, slot) in out.iter_mut().enumerate() {
            // Coefficient of word u in sigma.v is the coefficient of u o sigma in v.
            let u = word_unrank(self.n, self.d, target);
            let composed: Vec<usize> = (1..=self.d).map(|i| u[sigma.apply(i) - 1]).collect();
            *slot = self.coeffs[word_rank(&composed, self.n)].clone();
        }
        Ok(TensorVector {
            ring: self.ring.clone(),
            n: self.n,
            d: self.d,
            coeffs: out,
        })
    }

    /// Diagonal action of g: the Kronecker d-th power applied to the
    /// coefficient vector (column convention). Invertibility of `g` is the
    /// caller's contract and is not re-verified.
    pub fn gl_act(&self, g: &Matrix) -> Result<TensorVector> {
        if g.rows() != self.n || g.cols() != self.n || g.ring() != &self.ring {
            return Err(Error::DimensionMismatch(format!(
                "expected {0}x{0} matrix over {1}",
                self.n, self.ring
            )));
        }
        let ring = &self.ring;
        let mut cur = self.coeffs.clone();
        // Apply g along each tensor factor in turn (mode product).
        for axis in 0..self.d {
            let stride = self.n.pow((self.d - 1 - axis) as u32);
            let block = stride * self.n;
            let mut next = vec![ring.zero(); cur.len()];
            for base in (0..cur.len()).step_by(block) {
                for off in 0..stride {
                    for a in 0..self.n {
                        let mut acc = ring.zero();
                        for b in 0..self.n {
                            let c = &cur[base + b * stride + off];
                            if c.is_zero() {
                                continue;
                            }
                            acc = ring.add(&acc, &ring.mul(g.at(a, b), c));
                        }
                        next[base + a * stride + off] = acc;
                    }
                }
            }
            cur = next;
        }
        Ok(TensorVector {
            ring: self.ring.clone(),
            n: self.n,
            d: self.d,
            coeffs: cur,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64) -> Ring {
        Ring::prime_field(p).unwrap()
    }

    #[test]
    fn word_codec_examples() {
        // n=2, d=2: (1,1)->0, (1,2)->1, (2,1)->2, (2,2)->3
        let pairs = [
            (vec![1, 1], 0),
            (vec![1, 2], 1),
            (vec![2, 1], 2),
            (vec![2, 2], 3),
        ];
        for (letters, rank) in pairs {
            let w = Word::new(letters.clone(), 2).unwrap();
            assert_eq!(w.rank(2), rank);
            assert_eq!(Word::unrank(2, 2, rank).unwrap(), w);
        }
        assert_eq!(Word::new(vec![2], 3).unwrap().rank(3), 1);
        // n=2, d=3: (2,1,2) reads as binary 101 on letters-1.
        assert_eq!(Word::new(vec![2, 1, 2], 2).unwrap().rank(2), 5);
    }

    #[test]
    fn word_codec_is_a_bijection() {
        for (n, d) in [(2usize, 3usize), (3, 2), (4, 1)] {
            let total = n.pow(d as u32);
            for idx in 0..total {
                assert_eq!(Word::unrank(n, d, idx).unwrap().rank(n), idx);
            }
            assert!(Word::unrank(n, d, total).is_err());
        }
        assert!(Word::new(vec![0, 1], 2).is_err());
        assert!(Word::new(vec![3], 2).is_err());
    }

    #[test]
    fn swap_sends_e12_to_e21() {
        let f2 = f(2);
        let swap = Perm::transposition(2, 1, 2);
        let e12 = TensorVector::basis_vector(&f2, 2, 2, &Word::new(vec![1, 2], 2).unwrap()).unwrap();
        let e21 = TensorVector::basis_vector(&f2, 2, 2, &Word::new(vec![2, 1], 2).unwrap()).unwrap();
        assert_eq!(e12.perm_act(&swap).unwrap(), e21);
        assert_eq!(e12.perm_act(&Perm::identity(2)).unwrap(), e12);
    }

    #[test]
    fn three_cycle_cubed_is_identity() {
        let f5 = f(5);
        let cycle = Perm::new(vec![2, 3, 1]).unwrap();
        // A fixed "random" vector over F_5.
        let coeffs: Vec<Scalar> = (0..8).map(|i| f5.from_int((3 * i + 1) % 5)).collect();
        let v = TensorVector::from_coeffs(&f5, 2, 3, coeffs).unwrap();
        let w = v
            .perm_act(&cycle)
            .unwrap()
            .perm_act(&cycle)
            .unwrap()
            .perm_act(&cycle)
            .unwrap();
        assert_eq!(w, v);
    }

    #[test]
    fn left_action_axiom_exhaustive() {
        // (s t) . e_w = s . (t . e_w) for all words, d <= 4 with n = 2 and
        // d <= 3 with n = 3.
        for (n, d) in [(2usize, 3usize), (2, 4), (3, 2), (3, 3)] {
            let f2 = f(2);
            let perms = Perm::all(d);
            for s in &perms {
                for t in &perms {
                    let st = s.compose(t);
                    for idx in 0..n.pow(d as u32) {
                        let w = Word::unrank(n, d, idx).unwrap();
                        let e = TensorVector::basis_vector(&f2, n, d, &w).unwrap();
                        let lhs = e.perm_act(&st).unwrap();
                        let rhs = e.perm_act(t).unwrap().perm_act(s).unwrap();
                        assert_eq!(lhs, rhs, "n={n} d={d}");
                    }
                }
            }
        }
    }

    #[test]
    fn gl_act_examples() {
        let f3 = f(3);
        let id = Matrix::identity(&f3, 2);
        let e12 = TensorVector::basis_vector(&f3, 2, 2, &Word::new(vec![1, 2], 2).unwrap()).unwrap();
        assert_eq!(e12.gl_act(&id).unwrap(), e12);

        // Coordinate swap sends e_(1,1) to e_(2,2).
        let f2 = f(2);
        let sw = Matrix::from_ints(&f2, &[&[0, 1], &[1, 0]]);
        let e11 = TensorVector::basis_vector(&f2, 2, 2, &Word::new(vec![1, 1], 2).unwrap()).unwrap();
        let e22 = TensorVector::basis_vector(&f2, 2, 2, &Word::new(vec![2, 2], 2).unwrap()).unwrap();
        assert_eq!(e11.gl_act(&sw).unwrap(), e22);

        // Upper triangular over F_3: e_(1,2) -> e_(1,1) + e_(1,2).
        let g = Matrix::from_ints(&f3, &[&[1, 1], &[0, 1]]);
        let moved = e12.gl_act(&g).unwrap();
        let expected = TensorVector::from_coeffs(
            &f3,
            2,
            2,
            vec![f3.one(), f3.one(), f3.zero(), f3.zero()],
        )
        .unwrap();
        assert_eq!(moved, expected);
    }

    /// Explicit Kronecker-square oracle for the diagonal action.
    fn kronecker_square(g: &Matrix) -> Matrix {
        let ring = g.ring().clone();
        let n = g.rows();
        let mut k = Matrix::zeros(&ring, n * n, n * n);
        for u1 in 0..n {
            for u2 in 0..n {
                for w1 in 0..n {
                    for w2 in 0..n {
                        let v = ring.mul(g.at(u1, w1), g.at(u2, w2));
                        k.set(u1 * n + u2, w1 * n + w2, v);
                    }
                }
            }
        }
        k
    }

    #[test]
    fn gl_act_matches_kronecker_square_oracle() {
        let f3 = f(3);
        let g = Matrix::from_ints(&f3, &[&[1, 1], &[0, 1]]);
        let k = kronecker_square(&g);
        for idx in 0..4 {
            let w = Word::unrank(2, 2, idx).unwrap();
            let e = TensorVector::basis_vector(&f3, 2, 2, &w).unwrap();
            let acted = e.gl_act(&g).unwrap();
            let col: Vec<Scalar> = (0..4).map(|r| k.at(r, idx).clone()).collect();
            assert_eq!(acted.coeffs(), col.as_slice());
        }
    }

    fn gl2(ring: &Ring) -> Vec<Matrix> {
        let elems = ring.enumerate().unwrap();
        let mut out = Vec::new();
        for a in &elems {
            for b in &elems {
                for c in &elems {
                    for d in &elems {
                        let m = Matrix::from_rows(
                            ring,
                            vec![vec![a.clone(), b.clone()], vec![c.clone(), d.clone()]],
                        )
                        .unwrap();
                        if m.is_invertible().unwrap() {
                            out.push(m);
                        }
                    }
                }
            }
        }
        out
    }

    #[test]
    fn gl_and_symmetric_group_actions_commute() {
        // The structural heart of the duality: g.(s.v) = s.(g.v) for all
        // g in GL_2(F_2), s in S_2, on every basis vector.
        let f2 = f(2);
        let group = gl2(&f2);
        assert_eq!(group.len(), 6);
        let perms = Perm::all(2);
        for g in &group {
            for s in &perms {
                for idx in 0..4 {
                    let w = Word::unrank(2, 2, idx).unwrap();
                    let e = TensorVector::basis_vector(&f2, 2, 2, &w).unwrap();
                    let lhs = e.perm_act(s).unwrap().gl_act(g).unwrap();
                    let rhs = e.gl_act(g).unwrap().perm_act(s).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn gl_action_is_multiplicative() {
        let f2 = f(2);
        let group = gl2(&f2);
        for g in &group {
            for h in &group {
                let gh = g.mul(h).unwrap();
                for idx in 0..4 {
                    let w = Word::unrank(2, 2, idx).unwrap();
                    let e = TensorVector::basis_vector(&f2, 2, 2, &w).unwrap();
                    let lhs = e.gl_act(&gh).unwrap();
                    let rhs = e.gl_act(h).unwrap().gl_act(g).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn degree_mismatch_is_reported() {
        let f2 = f(2);
        let v = TensorVector::zero(&f2, 2, 2).unwrap();
        assert!(v.perm_act(&Perm::identity(3)).is_err());
        let g3 = Matrix::identity(&f2, 3);
        assert!(v.gl_act(&g3).is_err());
    }
}
