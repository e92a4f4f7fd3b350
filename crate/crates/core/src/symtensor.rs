//! Degree-d symmetric tensors TS^d(M) for free M, the orbit-sum basis, the
//! map gamma_d(x) = x (x) ... (x) x, and both directions of the correspondence
//! between homogeneous polynomial maps of degree d and linear maps on TS^d.
//!
//! The orbit basis puts coefficient 1 on each distinct word of a given
//! content, with no division by stabilizer orders, so everything stays valid
//! over arbitrary commutative rings (F_2 included).

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::guards;
use crate::linalg::Matrix;
use crate::ring::{Ring, Scalar};
use crate::tensor::{word_rank, Perm, TensorVector};

/// Exponent vector over the basis of M with |nu| = d; labels one orbit-sum
/// basis element of TS^d(M).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultisetIndex {
    nu: Vec<u32>,
}

impl MultisetIndex {
    pub fn new(nu: Vec<u32>, d: usize) -> Result<MultisetIndex> {
        let weight: u32 = nu.iter().sum();
        if weight as usize != d {
            return Err(Error::BadParameters(format!(
                "exponent vector sums to {weight}, expected {d}"
            )));
        }
        Ok(MultisetIndex { nu })
    }

    pub fn nu(&self) -> &[u32] {
        &self.nu
    }

    pub fn weight(&self) -> usize {
        self.nu.iter().sum::<u32>() as usize
    }

    /// The content vector of a word over {1..dim_m}.
    pub fn from_word(letters: &[usize], dim_m: usize) -> MultisetIndex {
        let mut nu = vec![0u32; dim_m];
        for &l in letters {
            nu[l - 1] += 1;
        }
        MultisetIndex { nu }
    }

    /// The non-decreasing word with this content (1-based letters).
    pub fn sorted_word(&self) -> Vec<usize> {
        let mut w = Vec::with_capacity(self.weight());
        for (i, &e) in self.nu.iter().enumerate() {
            w.extend(std::iter::repeat_n(i + 1, e as usize));
        }
        w
    }

    /// All distinct rearrangements of the content word, in lexicographic
    /// order.
    pub fn arrangements(&self) -> Vec<Vec<usize>> {
        let mut w = self.sorted_word();
        let d = w.len();
        let mut out = Vec::new();
        loop {
            out.push(w.clone());
            // Next lexicographic multiset permutation.
            let Some(i) = (0..d.saturating_sub(1)).rev().find(|&i| w[i] < w[i + 1]) else {
                break;
            };
            let j = (i + 1..d).rev().find(|&j| w[j] > w[i]).unwrap();
            w.swap(i, j);
            w[i + 1..].reverse();
        }
        out
    }
}

/// C(dim_m + d - 1, d): the number of orbit basis elements.
pub fn multiset_count(dim_m: usize, d: usize) -> u128 {
    if dim_m == 0 {
        return if d == 0 { 1 } else { 0 };
    }
    let n = (dim_m + d - 1) as u128;
    let k = (d as u128).min(n - d as u128);
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..k {
        num = num.saturating_mul(n - i);
        den *= i + 1;
        let g = gcd_u128(num, den);
        num /= g;
        den /= g;
    }
    num / den
}

fn gcd_u128(a: u128, b: u128) -> u128 {
    if b == 0 {
        a
    } else {
        gcd_u128(b, a % b)
    }
}

/// All multiset indices with |nu| = d over dim_m symbols, in canonical order:
/// ascending lexicographic on the sorted content word (equivalently,
/// descending lexicographic on the exponent vectors).
pub fn ts_basis(dim_m: usize, d: usize) -> Result<Vec<MultisetIndex>> {
    if dim_m == 0 {
        return Err(Error::BadParameters("module dimension must be >= 1".into()));
    }
    guards::check(
        "orbit basis size",
        multiset_count(dim_m, d),
        guards::ORBIT_LIMIT,
    )?;
    let mut out = Vec::new();
    let mut word = vec![1usize; d];
    loop {
        out.push(MultisetIndex::from_word(&word, dim_m));
        // Next non-decreasing word.
        let Some(i) = (0..d).rev().find(|&i| word[i] < dim_m) else {
            break;
        };
        let next = word[i] + 1;
        for slot in word.iter_mut().skip(i) {
            *slot = next;
        }
    }
    Ok(out)
}

/// Lookup table from exponent vectors to positions in the canonical order.
pub fn basis_index_map(basis: &[MultisetIndex]) -> HashMap<Vec<u32>, usize> {
    basis
        .iter()
        .enumerate()
        .map(|(i, m)| (m.nu.clone(), i))
        .collect()
}

/// Element of TS^d(M) in orbit-basis coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymTensor {
    ring: Ring,
    dim_m: usize,
    d: usize,
    coeffs: Vec<Scalar>,
}

impl SymTensor {
    pub fn new(ring: &Ring, dim_m: usize, d: usize, coeffs: Vec<Scalar>) -> Result<SymTensor> {
        let expected = multiset_count(dim_m, d);
        if coeffs.len() as u128 != expected {
            return Err(Error::DimensionMismatch(format!(
                "expected {expected} orbit coefficients, got {}",
                coeffs.len()
            )));
        }
        Ok(SymTensor {
            ring: ring.clone(),
            dim_m,
            d,
            coeffs,
        })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn dim_m(&self) -> usize {
        self.dim_m
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    /// Expansion into M^(x)d word coordinates: each orbit contributes its
    /// coefficient to every distinct rearrangement of its content.
    pub fn expand(&self) -> Result<TensorVector> {
        let basis = ts_basis(self.dim_m, self.d)?;
        let zero = TensorVector::zero(&self.ring, self.dim_m, self.d)?;
        let mut coeffs = zero.coeffs().to_vec();
        for (idx, coeff) in basis.iter().zip(&self.coeffs) {
            if coeff.is_zero() {
                continue;
            }
            for w in idx.arrangements() {
                let r = word_rank(&w, self.dim_m);
                coeffs[r] = self.ring.add(&coeffs[r], coeff);
            }
        }
        TensorVector::from_coeffs(&self.ring, self.dim_m, self.d, coeffs)
    }
}

/// gamma_d(x): the d-fold tensor power of x, expressed in the orbit basis.
/// The coefficient on orbit nu is the monomial x^nu.
pub fn gamma_d(ring: &Ring, x: &[Scalar], d: usize) -> Result<SymTensor> {
    let basis = ts_basis(x.len(), d)?;
    let coeffs = basis
        .iter()
        .map(|idx| monomial_eval(ring, x, idx.nu()))
        .collect();
    SymTensor::new(ring, x.len(), d, coeffs)
}

/// x^nu = prod x_i^{nu_i}.
pub fn monomial_eval(ring: &Ring, x: &[Scalar], nu: &[u32]) -> Scalar {
    let mut acc = ring.one();
    for (xi, &e) in x.iter().zip(nu) {
        if e == 0 {
            continue;
        }
        acc = ring.mul(&acc, &ring.pow(xi, e as u64));
    }
    acc
}

/// True when the expansion is fixed by every adjacent transposition
/// (generators of the symmetric group suffice).
pub fn is_symmetric(v: &TensorVector) -> bool {
    let d = v.d();
    (1..d).all(|i| {
        let t = Perm::transposition(d, i, i + 1);
        v.perm_act(&t).expect("degree matches") == *v
    })
}

/// A homogeneous degree-d polynomial map M -> N in coefficient-family form:
/// one target vector y_nu per orbit index, so f(x) = sum_nu x^nu y_nu.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMap {
    ring: Ring,
    dim_m: usize,
    d: usize,
    dim_n: usize,
    family: Vec<Vec<Scalar>>,
}

impl PolyMap {
    pub fn new(
        ring: &Ring,
        dim_m: usize,
        d: usize,
        dim_n: usize,
        family: Vec<Vec<Scalar>>,
    ) -> Result<PolyMap> {
        let expected = multiset_count(dim_m, d);
        if family.len() as u128 != expected {
            return Err(Error::DimensionMismatch(format!(
                "family must have {expected} entries, got {}",
                family.len()
            )));
        }
        if family.iter().any(|y| y.len() != dim_n) {
            return Err(Error::DimensionMismatch("family vector length".into()));
        }
        Ok(PolyMap {
            ring: ring.clone(),
            dim_m,
            d,
            dim_n,
            family,
        })
    }

    pub fn zero(ring: &Ring, dim_m: usize, d: usize, dim_n: usize) -> Result<PolyMap> {
        let count = multiset_count(dim_m, d) as usize;
        PolyMap::new(ring, dim_m, d, dim_n, vec![vec![ring.zero(); dim_n]; count])
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn dim_m(&self) -> usize {
        self.dim_m
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn dim_n(&self) -> usize {
        self.dim_n
    }

    pub fn family(&self) -> &[Vec<Scalar>] {
        &self.family
    }

    /// Exact evaluation f(x) = sum_nu x^nu y_nu.
    pub fn eval(&self, x: &[Scalar]) -> Result<Vec<Scalar>> {
        if x.len() != self.dim_m {
            return Err(Error::DimensionMismatch("polynomial map argument".into()));
        }
        let basis = ts_basis(self.dim_m, self.d)?;
        let mut out = vec![self.ring.zero(); self.dim_n];
        for (idx, y) in basis.iter().zip(&self.family) {
            let lam = monomial_eval(&self.ring, x, idx.nu());
            if lam.is_zero() {
                continue;
            }
            for (o, yv) in out.iter_mut().zip(y) {
                *o = self.ring.add(o, &self.ring.mul(&lam, yv));
            }
        }
        Ok(out)
    }

    /// The linear map h: TS^d(M) -> N with h(orbit_nu) = y_nu, as a matrix
    /// over the orbit basis. Then f(x) = h(gamma_d(x)) for all x.
    pub fn to_linear_map(&self) -> Matrix {
        let count = self.family.len();
        let mut h = Matrix::zeros(&self.ring, self.dim_n, count);
        for (col, y) in self.family.iter().enumerate() {
            for (row, v) in y.iter().enumerate() {
                h.set(row, col, v.clone());
            }
        }
        h
    }

    /// Recovers the coefficient family from a linear map on TS^d(M):
    /// y_nu := h(orbit_nu). Round trip with [`PolyMap::to_linear_map`] is the
    /// identity in both directions.
    pub fn from_linear_map(h: &Matrix, dim_m: usize, d: usize) -> Result<PolyMap> {
        let count = multiset_count(dim_m, d);
        if h.cols() as u128 != count {
            return Err(Error::DimensionMismatch(format!(
                "linear map must have {count} columns, got {}",
                h.cols()
            )));
        }
        let family = (0..h.cols())
            .map(|c| (0..h.rows()).map(|r| h.at(r, c).clone()).collect())
            .collect();
        PolyMap::new(h.ring(), dim_m, d, h.rows(), family)
    }
}
