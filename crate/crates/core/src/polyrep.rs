//! Degree-d polynomial representations of GL(n): the homogeneous-polynomial
//! matrix format, the coefficient-family format, restriction of
//! Schur-algebra modules to group representations, and lifting of polynomial
//! representations back to modules.
//!
//! Conventions: matrices act on column vectors; the multiset index nu over
//! the End-basis E_rs corresponds to the monomial prod X_rs^{nu_rs}; entry
//! (i,j) of a polynomial matrix gives the (i,j) entry of the representing
//! matrix, so evaluating the coefficient family at g reproduces rho(g).
//! Indices i, j, r, s are 1-based in the external formats.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::duality::{image_rank, GlGroup, PhiContext};
use crate::error::{Error, Result};
use crate::guards;
use crate::linalg::Matrix;
use crate::ring::{Ring, Scalar};
use crate::schur::{SchurAlgebra, SchurElement};
use crate::symtensor::{self, MultisetIndex, PolyMap};
use crate::tensor::Perm;

/// A degree-d polynomial representation in coefficient-family form: one
/// dimV x dimV matrix Y_nu per orbit index, so the lifted map evaluates as
/// rho_hat(x) = sum_nu x^nu Y_nu.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyRep {
    ring: Ring,
    n: usize,
    d: usize,
    dim_v: usize,
    /// Underlying polynomial map End(k^n) -> End(V), targets flattened
    /// row-major.
    family: PolyMap,
}

impl PolyRep {
    pub fn new(ring: &Ring, n: usize, d: usize, dim_v: usize, matrices: Vec<Matrix>) -> Result<PolyRep> {
        let count = symtensor::multiset_count(n * n, d) as usize;
        if matrices.len() != count {
            return Err(Error::DimensionMismatch(format!(
                "expected {count} coefficient matrices, got {}",
                matrices.len()
            )));
        }
        let mut family = Vec::with_capacity(count);
        for m in &matrices {
            if m.rows() != dim_v || m.cols() != dim_v {
                return Err(Error::DimensionMismatch("coefficient matrix size".into()));
            }
            if m.ring() != ring {
                return Err(Error::RingMismatch);
            }
            family.push(m.flatten());
        }
        Ok(PolyRep {
            ring: ring.clone(),
            n,
            d,
            dim_v,
            family: PolyMap::new(ring, n * n, d, dim_v * dim_v, family)?,
        })
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

    pub fn dim_v(&self) -> usize {
        self.dim_v
    }

    pub fn family(&self) -> &PolyMap {
        &self.family
    }

    /// The coefficient matrix Y_nu at canonical position `idx`.
    pub fn y_matrix(&self, idx: usize) -> Matrix {
        Matrix::new(
            self.ring.clone(),
            self.dim_v,
            self.dim_v,
            self.family.family()[idx].clone(),
        )
        .expect("stored flat matrix")
    }

    /// Evaluates the lifted polynomial map at an n x n matrix.
    pub fn eval(&self, g: &Matrix) -> Result<Matrix> {
        if g.rows() != self.n || g.cols() != self.n || g.ring() != &self.ring {
            return Err(Error::DimensionMismatch("evaluation argument".into()));
        }
        let flat = self.family.eval(&g.flatten())?;
        Matrix::new(self.ring.clone(), self.dim_v, self.dim_v, flat)
    }

    /// JSON interchange form with scalar entries in canonical text.
    pub fn to_json(&self) -> Value {
        let basis = symtensor::ts_basis(self.n * self.n, self.d).expect("within guards");
        let family: Vec<Value> = basis
            .iter()
            .enumerate()
            .map(|(idx, nu)| {
                let y = self.y_matrix(idx);
                let rows: Vec<Value> = (0..self.dim_v)
                    .map(|r| {
                        Value::Array(
                            y.row(r)
                                .iter()
                                .map(|s| Value::String(s.to_string()))
                                .collect(),
                        )
                    })
                    .collect();
                json!({ "nu": nu.nu(), "Y": rows })
            })
            .collect();
        json!({
            "ring": self.ring.to_string(),
            "n": self.n,
            "d": self.d,
            "dimV": self.dim_v,
            "family": family,
        })
    }

    pub fn from_json(v: &Value) -> Result<PolyRep> {
        let obj = v.as_object().ok_or_else(|| Error::Parse("expected object".into()))?;
        let ring = Ring::parse(
            obj.get("ring")
                .and_then(Value::as_str)
                .ok_or_else(|| Error::Parse("missing ring".into()))?,
        )?;
        let n = get_usize(obj, "n")?;
        let d = get_usize(obj, "d")?;
        let dim_v = get_usize(obj, "dimV")?;
        let family_json = obj
            .get("family")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("missing family".into()))?;
        let basis = symtensor::ts_basis(n * n, d)?;
        let lookup = symtensor::basis_index_map(&basis);
        let mut matrices: Vec<Option<Matrix>> = vec![None; basis.len()];
        for entry in family_json {
            let nu: Vec<u32> = entry
                .get("nu")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Parse("missing nu".into()))?
                .iter()
                .map(|x| {
                    x.as_u64()
                        .map(|v| v as u32)
                        .ok_or_else(|| Error::Parse("bad exponent".into()))
                })
                .collect::<Result<_>>()?;
            let idx = *lookup
                .get(&nu)
                .ok_or_else(|| Error::Parse(format!("unknown orbit index {nu:?}")))?;
            let rows = entry
                .get("Y")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Parse("missing Y".into()))?;
            let mut entries = Vec::with_capacity(dim_v * dim_v);
            for row in rows {
                for cell in row
                    .as_array()
                    .ok_or_else(|| Error::Parse("Y row must be an array".into()))?
                {
                    let text = cell
                        .as_str()
                        .ok_or_else(|| Error::Parse("Y entries are strings".into()))?;
                    entries.push(ring.parse_scalar(text)?);
                }
            }
            let m = Matrix::new(ring.clone(), dim_v, dim_v, entries)?;
            if matrices[idx].replace(m).is_some() {
                return Err(Error::Parse(format!("duplicate orbit index {nu:?}")));
            }
        }
        let matrices: Vec<Matrix> = matrices
            .into_iter()
            .enumerate()
            .map(|(i, m)| m.ok_or_else(|| Error::Parse(format!("missing orbit index {i}"))))
            .collect::<Result<_>>()?;
        PolyRep::new(&ring, n, d, dim_v, matrices)
    }
}

fn get_usize(obj: &serde_json::Map<String, Value>, key: &str) -> Result<usize> {
    obj.get(key)
        .and_then(Value::as_u64)
        .map(|v| v as usize)
        .ok_or_else(|| Error::Parse(format!("missing integer field {key}")))
}

/// One monomial of a homogeneous polynomial entry: exponents on the
/// indeterminates X_rs (1-based, sorted, distinct) and a nonzero
/// coefficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Monomial {
    pub exps: Vec<(usize, usize, u32)>,
    pub coeff: Scalar,
}

impl Monomial {
    fn total_degree(&self) -> u32 {
        self.exps.iter().map(|&(_, _, e)| e).sum()
    }

    fn orbit_index(&self, n: usize, d: usize) -> MultisetIndex {
        let mut nu = vec![0u32; n * n];
        for &(r, s, e) in &self.exps {
            nu[(r - 1) * n + (s - 1)] += e;
        }
        MultisetIndex::new(nu, d).expect("homogeneity checked")
    }
}

/// A dimV x dimV matrix of homogeneous degree-d polynomials in the n^2
/// indeterminates X_rs. Monomial lists are kept canonical: exponents sorted
/// and merged, monomials ordered by their orbit index, zero coefficients
/// dropped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMatrixRep {
    ring: Ring,
    n: usize,
    d: usize,
    dim_v: usize,
    entries: BTreeMap<(usize, usize), Vec<Monomial>>,
}

impl PolyMatrixRep {
    /// Canonicalizes and validates: every monomial must have total degree
    /// exactly d.
    pub fn new(
        ring: &Ring,
        n: usize,
        d: usize,
        dim_v: usize,
        entries: Vec<((usize, usize), Vec<Monomial>)>,
    ) -> Result<PolyMatrixRep> {
        let basis = symtensor::ts_basis(n * n, d)?;
        let lookup = symtensor::basis_index_map(&basis);
        let mut canonical = BTreeMap::new();
        for ((i, j), monomials) in entries {
            if i < 1 || i > dim_v || j < 1 || j > dim_v {
                return Err(Error::BadParameters(format!("entry index ({i},{j})")));
            }
            // Merge coefficients by orbit index.
            let mut by_orbit: BTreeMap<usize, Scalar> = BTreeMap::new();
            for m in monomials {
                let mut exps: BTreeMap<(usize, usize), u32> = BTreeMap::new();
                for &(r, s, e) in &m.exps {
                    if r < 1 || r > n || s < 1 || s > n {
                        return Err(Error::BadParameters(format!(
                            "indeterminate X_{r}{s} out of range"
                        )));
                    }
                    *exps.entry((r, s)).or_insert(0) += e;
                }
                let merged = Monomial {
                    exps: exps
                        .into_iter()
                        .filter(|&(_, e)| e > 0)
                        .map(|((r, s), e)| (r, s, e))
                        .collect(),
                    coeff: m.coeff.clone(),
                };
                if merged.total_degree() as usize != d {
                    return Err(Error::NotHomogeneous {
                        i,
                        j,
                        monomial: format!("{:?}", merged.exps),
                    });
                }
                let idx = lookup[merged.orbit_index(n, d).nu()];
                let slot = by_orbit.entry(idx).or_insert_with(|| ring.zero());
                *slot = ring.add(slot, &merged.coeff);
            }
            let list: Vec<Monomial> = by_orbit
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(idx, coeff)| Monomial {
                    exps: orbit_to_exps(&basis[idx], n),
                    coeff,
                })
                .collect();
            if !list.is_empty() {
                canonical.insert((i, j), list);
            }
        }
        Ok(PolyMatrixRep {
            ring: ring.clone(),
            n,
            d,
            dim_v,
            entries: canonical,
        })
    }

    pub fn entries(&self) -> &BTreeMap<(usize, usize), Vec<Monomial>> {
        &self.entries
    }

    /// The coefficient family: Y_nu[i][j] = coefficient of X^nu in f_ij.
    pub fn to_coeff_family(&self) -> Result<PolyRep> {
        let basis = symtensor::ts_basis(self.n * self.n, self.d)?;
        let lookup = symtensor::basis_index_map(&basis);
        let mut matrices: Vec<Matrix> = (0..basis.len())
            .map(|_| Matrix::zeros(&self.ring, self.dim_v, self.dim_v))
            .collect();
        for (&(i, j), monomials) in &self.entries {
            for m in monomials {
                let idx = lookup[m.orbit_index(self.n, self.d).nu()];
                matrices[idx].set(i - 1, j - 1, m.coeff.clone());
            }
        }
        PolyRep::new(&self.ring, self.n, self.d, self.dim_v, matrices)
    }

    /// Inverse of [`PolyMatrixRep::to_coeff_family`]; reproduces canonical
    /// monomial lists exactly.
    pub fn from_coeff_family(rep: &PolyRep) -> Result<PolyMatrixRep> {
        let basis = symtensor::ts_basis(rep.n * rep.n, rep.d)?;
        let mut entries: Vec<((usize, usize), Vec<Monomial>)> = Vec::new();
        for i in 1..=rep.dim_v {
            for j in 1..=rep.dim_v {
                let mut list = Vec::new();
                for (idx, nu) in basis.iter().enumerate() {
                    let c = rep.y_matrix(idx).at(i - 1, j - 1).clone();
                    if c.is_zero() {
                        continue;
                    }
                    list.push(Monomial {
                        exps: orbit_to_exps(nu, rep.n),
                        coeff: c,
                    });
                }
                if !list.is_empty() {
                    entries.push(((i, j), list));
                }
            }
        }
        PolyMatrixRep::new(&rep.ring, rep.n, rep.d, rep.dim_v, entries)
    }

    pub fn to_json(&self) -> Value {
        let entries: Vec<Value> = self
            .entries
            .iter()
            .map(|(&(i, j), monomials)| {
                let ms: Vec<Value> = monomials
                    .iter()
                    .map(|m| {
                        let exps: Vec<Value> = m
                            .exps
                            .iter()
                            .map(|&(r, s, e)| json!([r, s, e]))
                            .collect();
                        json!({ "exps": exps, "coeff": m.coeff.to_string() })
                    })
                    .collect();
                json!({ "i": i, "j": j, "monomials": ms })
            })
            .collect();
        json!({
            "ring": self.ring.to_string(),
            "n": self.n,
            "d": self.d,
            "dimV": self.dim_v,
            "entries": entries,
        })
    }

    pub fn from_json(v: &Value) -> Result<PolyMatrixRep> {
        let obj = v.as_object().ok_or_else(|| Error::Parse("expected object".into()))?;
        let ring = Ring::parse(
            obj.get("ring")
                .and_then(Value::as_str)
                .ok_or_else(|| Error::Parse("missing ring".into()))?,
        )?;
        let n = get_usize(obj, "n")?;
        let d = get_usize(obj, "d")?;
        let dim_v = get_usize(obj, "dimV")?;
        let mut entries = Vec::new();
        for entry in obj
            .get("entries")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("missing entries".into()))?
        {
            let e = entry.as_object().ok_or_else(|| Error::Parse("bad entry".into()))?;
            let i = get_usize(e, "i")?;
            let j = get_usize(e, "j")?;
            let mut monomials = Vec::new();
            for m in e
                .get("monomials")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Parse("missing monomials".into()))?
            {
                let exps: Vec<(usize, usize, u32)> = m
                    .get("exps")
                    .and_then(Value::as_array)
                    .ok_or_else(|| Error::Parse("missing exps".into()))?
                    .iter()
                    .map(|triple| {
                        let t = triple
                            .as_array()
                            .filter(|t| t.len() == 3)
                            .ok_or_else(|| Error::Parse("exps entries are [r,s,e]".into()))?;
                        Ok((
                            t[0].as_u64().ok_or_else(|| Error::Parse("bad r".into()))? as usize,
                            t[1].as_u64().ok_or_else(|| Error::Parse("bad s".into()))? as usize,
                            t[2].as_u64().ok_or_else(|| Error::Parse("bad e".into()))? as u32,
                        ))
                    })
                    .collect::<Result<_>>()?;
                let coeff = ring.parse_scalar(
                    m.get("coeff")
                        .and_then(Value::as_str)
                        .ok_or_else(|| Error::Parse("missing coeff".into()))?,
                )?;
                monomials.push(Monomial { exps, coeff });
            }
            entries.push(((i, j), monomials));
        }
        PolyMatrixRep::new(&ring, n, d, dim_v, entries)
    }
}

fn orbit_to_exps(nu: &MultisetIndex, n: usize) -> Vec<(usize, usize, u32)> {
    nu.nu()
        .iter()
        .enumerate()
        .filter(|&(_, &e)| e > 0)
        .map(|(sym, &e)| (sym / n + 1, sym % n + 1, e))
        .collect()
}

/// A module over a Schur algebra: one action matrix per basis element,
/// verified to respect the structure constants and the unit.
#[derive(Debug, Clone)]
pub struct SModule {
    algebra: SchurAlgebra,
    dim_v: usize,
    action: Vec<Matrix>,
}

impl SModule {
    pub fn new(algebra: &SchurAlgebra, dim_v: usize, action: Vec<Matrix>) -> Result<SModule> {
        if action.len() != algebra.dim() {
            return Err(Error::DimensionMismatch(format!(
                "expected {} action matrices, got {}",
                algebra.dim(),
                action.len()
            )));
        }
        for m in &action {
            if m.rows() != dim_v || m.cols() != dim_v {
                return Err(Error::DimensionMismatch("action matrix size".into()));
            }
            if m.ring() != algebra.ring() {
                return Err(Error::RingMismatch);
            }
        }
        let module = SModule {
            algebra: algebra.clone(),
            dim_v,
            action,
        };
        if let Some((a, b)) = module.first_violated_pair()? {
            return Err(Error::Consistency(format!(
                "action violates structure constants at basis pair ({a},{b})"
            )));
        }
        Ok(module)
    }

    fn first_violated_pair(&self) -> Result<Option<(usize, usize)>> {
        let one = self.apply(&self.algebra.one())?;
        if one != Matrix::identity(self.algebra.ring(), self.dim_v) {
            return Ok(Some((usize::MAX, usize::MAX)));
        }
        for a in 0..self.algebra.dim() {
            for b in 0..self.algebra.dim() {
                let lhs = self.action[a].mul(&self.action[b])?;
                let mut rhs = Matrix::zeros(self.algebra.ring(), self.dim_v, self.dim_v);
                for &(e, c) in self.algebra.consts_z(a, b) {
                    let scalar = self
                        .algebra
                        .ring()
                        .from_bigint(&num_bigint::BigInt::from(c));
                    rhs = rhs.add(&self.action[e].scale(&scalar))?;
                }
                if lhs != rhs {
                    return Ok(Some((a, b)));
                }
            }
        }
        Ok(None)
    }

    pub fn algebra(&self) -> &SchurAlgebra {
        &self.algebra
    }

    pub fn dim_v(&self) -> usize {
        self.dim_v
    }

    pub fn action(&self) -> &[Matrix] {
        &self.action
    }

    /// Action of an arbitrary algebra element.
    pub fn apply(&self, x: &SchurElement) -> Result<Matrix> {
        let mut out = Matrix::zeros(self.algebra.ring(), self.dim_v, self.dim_v);
        for (e, c) in x.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            out = out.add(&self.action[e].scale(c))?;
        }
        Ok(out)
    }
}

/// A representation of a fully enumerated GL group: one invertible matrix
/// per group element, aligned with the group's element order.
#[derive(Debug, Clone)]
pub struct GroupRep {
    group: GlGroup,
    dim_v: usize,
    matrices: Vec<Matrix>,
}

impl GroupRep {
    pub fn new(group: GlGroup, dim_v: usize, matrices: Vec<Matrix>) -> Result<GroupRep> {
        if matrices.len() != group.order() {
            return Err(Error::DimensionMismatch("one matrix per group element".into()));
        }
        Ok(GroupRep {
            group,
            dim_v,
            matrices,
        })
    }

    pub fn group(&self) -> &GlGroup {
        &self.group
    }

    pub fn dim_v(&self) -> usize {
        self.dim_v
    }

    pub fn matrices(&self) -> &[Matrix] {
        &self.matrices
    }
}

/// Restriction of scalars: a Schur-algebra module becomes a group
/// representation via rho(g) = action(phi(g)), together with its degree-d
/// certificate (the coefficient family Y_nu = action(basis_nu), which
/// evaluates back to rho on every group element).
pub fn restrict_smodule(module: &SModule) -> Result<(GroupRep, PolyRep)> {
    let algebra = module.algebra();
    let ring = algebra.ring();
    if !ring.is_finite() {
        return Err(Error::InfiniteRing);
    }
    let group = GlGroup::enumerate(ring, algebra.n())?;
    let entries = (group.order() as u128) * (module.dim_v() as u128).pow(2);
    guards::check("restriction entries", entries, guards::RESTRICT_ENTRY_LIMIT)?;
    let mut matrices = Vec::with_capacity(group.order());
    for g in group.elements() {
        matrices.push(module.apply(&algebra.gamma(g)?)?);
    }
    let rep = GroupRep::new(group, module.dim_v(), matrices)?;
    let certificate = PolyRep::new(
        ring,
        algebra.n(),
        algebra.d(),
        module.dim_v(),
        module.action().to_vec(),
    )?;
    Ok((rep, certificate))
}

/// Why a candidate lift failed to be an algebra map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Obstruction {
    /// The unit of the Schur algebra does not act as the identity.
    Unit,
    /// Y_a Y_b disagrees with the structure constants at this basis pair.
    Pair { a: usize, b: usize },
}

/// Result of attempting to extend a coefficient family to a module
/// structure; failure is a value, not an error.
#[derive(Debug, Clone)]
pub enum LiftOutcome {
    Module(SModule),
    Obstructed(Obstruction),
}

/// Lifts a polynomial representation to a Schur-algebra module by taking
/// action(basis_nu) := Y_nu, which is the unique candidate determined by the
/// coefficient family. Returns the first violated identity when this
/// candidate is not an algebra homomorphism.
pub fn lift_polyrep(algebra: &SchurAlgebra, spec: &PolyRep) -> Result<LiftOutcome> {
    if algebra.ring() != spec.ring() || algebra.n() != spec.n() || algebra.d() != spec.d() {
        return Err(Error::BadParameters(
            "algebra and representation must share ring, n, d".into(),
        ));
    }
    let action: Vec<Matrix> = (0..algebra.dim()).map(|e| spec.y_matrix(e)).collect();
    let candidate = SModule {
        algebra: algebra.clone(),
        dim_v: spec.dim_v(),
        action,
    };
    match candidate.first_violated_pair()? {
        None => Ok(LiftOutcome::Module(candidate)),
        Some((usize::MAX, _)) => Ok(LiftOutcome::Obstructed(Obstruction::Unit)),
        Some((a, b)) => Ok(LiftOutcome::Obstructed(Obstruction::Pair { a, b })),
    }
}

/// Checks the homomorphism law: exhaustively when |G|^2 is small, otherwise
/// on a seeded sample; rho(1) = 1 is always checked. Returns the first
/// failing pair as a witness.
pub fn is_group_hom(rep: &GroupRep) -> Result<(bool, Option<(usize, usize)>)> {
    let group = rep.group();
    let order = group.order();
    let identity = Matrix::identity(rep.matrices()[0].ring(), rep.dim_v());
    if rep.matrices()[group.identity_index()] != identity {
        let idx = group.identity_index();
        return Ok((false, Some((idx, idx))));
    }
    let check = |i: usize, j: usize| -> Result<Option<(usize, usize)>> {
        let g = &group.elements()[i];
        let h = &group.elements()[j];
        let prod_idx = group
            .index_of(&g.mul(h)?)
            .ok_or_else(|| Error::Consistency("group not closed".into()))?;
        let lhs = rep.matrices()[i].mul(&rep.matrices()[j])?;
        if lhs != rep.matrices()[prod_idx] {
            return Ok(Some((i, j)));
        }
        Ok(None)
    };
    if (order as u128).pow(2) <= guards::HOM_PAIR_LIMIT {
        for i in 0..order {
            for j in 0..order {
                if let Some(w) = check(i, j)? {
                    return Ok((false, Some(w)));
                }
            }
        }
    } else {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x504f_4c59);
        for _ in 0..10_000 {
            let i = rng.gen_range(0..order);
            let j = rng.gen_range(0..order);
            if let Some(w) = check(i, j)? {
                return Ok((false, Some(w)));
            }
        }
    }
    Ok((true, None))
}

/// Outcome of the restrict-then-lift round trip.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct RoundtripReport {
    pub module_dim: usize,
    pub hom_law_holds: bool,
    pub lift_succeeded: bool,
    pub recovered_equal: bool,
    /// The candidate lift is uniquely determined by the certificate family.
    pub lift_unique: bool,
    pub phi_surjective: bool,
}

/// Restricts a module to the group, lifts the certificate back, and compares
/// entrywise; also reports the surjectivity of the canonical map for
/// context (the restriction direction works regardless).
pub fn roundtrip_check(module: &SModule) -> Result<RoundtripReport> {
    let (rep, certificate) = restrict_smodule(module)?;
    let (hom_ok, _) = is_group_hom(&rep)?;
    let lifted = lift_polyrep(module.algebra(), &certificate)?;
    let (lift_succeeded, recovered_equal) = match &lifted {
        LiftOutcome::Module(m) => (true, m.action() == module.action()),
        LiftOutcome::Obstructed(_) => (false, false),
    };
    let ctx = PhiContext::new(rep.group().clone(), module.algebra().clone())?;
    let (_, surjective) = image_rank(&ctx)?;
    Ok(RoundtripReport {
        module_dim: module.dim_v(),
        hom_law_holds: hom_ok,
        lift_succeeded,
        recovered_equal,
        lift_unique: true,
        phi_surjective: surjective,
    })
}

/// Built-in polynomial representations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuiltinRep {
    /// The defining representation (d = 1): rho(g) = g.
    Defining,
    /// The action on E^(x)d: rho(g) = g (x) ... (x) g.
    TensorPower,
    /// The determinant character (d = n), one-dimensional.
    Determinant,
}

pub fn builtin_rep(algebra: &SchurAlgebra, which: BuiltinRep) -> Result<PolyRep> {
    let ring = algebra.ring();
    let n = algebra.n();
    let d = algebra.d();
    match which {
        BuiltinRep::Defining => {
            if d != 1 {
                return Err(Error::BadParameters("defining representation needs d = 1".into()));
            }
            // Y_(E_rs) = E_rs: the basis of S(n,1) is E_11, ..., E_nn.
            let matrices: Vec<Matrix> = (0..algebra.dim())
                .map(|e| algebra.embed(&algebra.basis_element(e)))
                .collect::<Result<_>>()?;
            PolyRep::new(ring, n, 1, n, matrices)
        }
        BuiltinRep::TensorPower => {
            let matrices: Vec<Matrix> = (0..algebra.dim())
                .map(|e| algebra.embed(&algebra.basis_element(e)))
                .collect::<Result<_>>()?;
            PolyRep::new(ring, n, d, algebra.tensor_dim(), matrices)
        }
        BuiltinRep::Determinant => {
            if d != n {
                return Err(Error::BadParameters("determinant needs d = n".into()));
            }
            let basis = symtensor::ts_basis(n * n, d)?;
            let lookup = symtensor::basis_index_map(&basis);
            let mut matrices: Vec<Matrix> =
                (0..basis.len()).map(|_| Matrix::zeros(ring, 1, 1)).collect();
            for sigma in Perm::all(n) {
                // The monomial prod_i X_{i, sigma(i)} with the permutation sign.
                let word: Vec<usize> = (1..=n)
                    .map(|i| (i - 1) * n + (sigma.apply(i) - 1) + 1)
                    .collect();
                let nu = MultisetIndex::from_word(&word, n * n);
                let sign = perm_sign(&sigma);
                let idx = lookup[nu.nu()];
                let cur = matrices[idx].at(0, 0).clone();
                matrices[idx].set(0, 0, ring.add(&cur, &ring.from_int(sign)));
            }
            PolyRep::new(ring, n, d, 1, matrices)
        }
    }
}

fn perm_sign(p: &Perm) -> i64 {
    let d = p.degree();
    let mut sign = 1i64;
    for i in 1..=d {
        for j in i + 1..=d {
            if p.apply(i) > p.apply(j) {
                sign = -sign;
            }
        }
    }
    sign
}

/// Built-in Schur-algebra modules.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuiltinModule {
    /// Left multiplication on the algebra itself.
    Regular,
    /// E^(x)d with the embedding action.
    Tensor,
    /// The lift of the determinant character (d = n).
    Determinant,
}

pub fn builtin_smodule(algebra: &SchurAlgebra, which: BuiltinModule) -> Result<SModule> {
    match which {
        BuiltinModule::Regular => {
            let dim = algebra.dim();
            let ring = algebra.ring();
            let mut action = Vec::with_capacity(dim);
            for a in 0..dim {
                // Column b holds the coefficients of basis_a * basis_b.
                let mut m = Matrix::zeros(ring, dim, dim);
                for b in 0..dim {
                    for &(e, c) in algebra.consts_z(a, b) {
                        m.set(e, b, ring.from_bigint(&num_bigint::BigInt::from(c)));
                    }
                }
                action.push(m);
            }
            SModule::new(algebra, dim, action)
        }
        BuiltinModule::Tensor => {
            let action: Vec<Matrix> = (0..algebra.dim())
                .map(|e| algebra.embed(&algebra.basis_element(e)))
                .collect::<Result<_>>()?;
            SModule::new(algebra, algebra.tensor_dim(), action)
        }
        BuiltinModule::Determinant => {
            let spec = builtin_rep(algebra, BuiltinRep::Determinant)?;
            match lift_polyrep(algebra, &spec)? {
                LiftOutcome::Module(m) => Ok(m),
                LiftOutcome::Obstructed(o) => Err(Error::Consistency(format!(
                    "determinant character failed to lift: {o:?}"
                ))),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64) -> Ring {
        Ring::prime_field(p).unwrap()
    }

    fn det_rep(ring: &Ring) -> PolyRep {
        let algebra = SchurAlgebra::build(ring, 2, 2).unwrap();
        builtin_rep(&algebra, BuiltinRep::Determinant).unwrap()
    }

    #[test]
    fn determinant_coefficients() {
        // Y has +1 at nu(E11,E22) and -1 at nu(E12,E21).
        let f3 = f(3);
        let rep = det_rep(&f3);
        let basis = symtensor::ts_basis(4, 2).unwrap();
        let lookup = symtensor::basis_index_map(&basis);
        for (idx, nu) in basis.iter().enumerate() {
            let y = rep.y_matrix(idx);
            let expect = if idx == lookup[&vec![1u32, 0, 0, 1]] {
                f3.one()
            } else if idx == lookup[&vec![0u32, 1, 1, 0]] {
                f3.from_int(-1)
            } else {
                f3.zero()
            };
            assert_eq!(y.at(0, 0), &expect, "nu = {:?}", nu.nu());
        }
        // Evaluation at the shear [[1,1],[0,1]] gives 1.
        let g = Matrix::from_ints(&f3, &[&[1, 1], &[0, 1]]);
        assert_eq!(rep.eval(&g).unwrap().at(0, 0), &f3.one());
    }

    #[test]
    fn polynomial_matrix_round_trips() {
        // f_11 = X11 X22 - X12 X21 as an explicit polynomial matrix.
        let f3 = f(3);
        let entries = vec![(
            (1usize, 1usize),
            vec![
                Monomial {
                    exps: vec![(1, 1, 1), (2, 2, 1)],
                    coeff: f3.one(),
                },
                Monomial {
                    exps: vec![(1, 2, 1), (2, 1, 1)],
                    coeff: f3.from_int(-1),
                },
            ],
        )];
        let pm = PolyMatrixRep::new(&f3, 2, 2, 1, entries).unwrap();
        let family = pm.to_coeff_family().unwrap();
        assert_eq!(family, det_rep(&f3));
        // Inverse reproduces the monomial lists exactly.
        let back = PolyMatrixRep::from_coeff_family(&family).unwrap();
        assert_eq!(back, pm);
        // JSON round trips bit-exactly for both formats.
        let j = pm.to_json();
        assert_eq!(PolyMatrixRep::from_json(&j).unwrap(), pm);
        assert_eq!(j, PolyMatrixRep::from_json(&j).unwrap().to_json());
        let j = family.to_json();
        assert_eq!(PolyRep::from_json(&j).unwrap(), family);
    }

    #[test]
    fn defining_rep_is_the_identity_family() {
        let f2 = f(2);
        let algebra = SchurAlgebra::build(&f2, 2, 1).unwrap();
        let rep = builtin_rep(&algebra, BuiltinRep::Defining).unwrap();
        // d = 1, f_ij = X_ij: evaluation is the identity map on matrices.
        for g in GlGroup::enumerate(&f2, 2).unwrap().elements() {
            assert_eq!(&rep.eval(g).unwrap(), g);
        }
    }

    #[test]
    fn non_homogeneous_polynomials_are_rejected() {
        let f3 = f(3);
        let entries = vec![(
            (1usize, 1usize),
            vec![Monomial {
                exps: vec![(1, 1, 1)],
                coeff: f3.one(),
            }],
        )];
        let err = PolyMatrixRep::new(&f3, 2, 2, 1, entries).unwrap_err();
        assert!(matches!(err, Error::NotHomogeneous { i: 1, j: 1, .. }));
    }

    #[test]
    fn zero_polynomials_give_zero_family() {
        let f3 = f(3);
        let pm = PolyMatrixRep::new(&f3, 2, 2, 2, vec![]).unwrap();
        let family = pm.to_coeff_family().unwrap();
        for idx in 0..symtensor::multiset_count(4, 2) as usize {
            assert!(family.y_matrix(idx).is_zero());
        }
    }

    #[test]
    fn tensor_power_restriction_is_kronecker() {
        // The tensor module restricted to the group gives rho(g) = g (x) g.
        let f2 = f(2);
        let algebra = SchurAlgebra::build(&f2, 2, 2).unwrap();
        let module = builtin_smodule(&algebra, BuiltinModule::Tensor).unwrap();
        let (rep, certificate) = restrict_smodule(&module).unwrap();
        for (g, rho) in rep.group().elements().iter().zip(rep.matrices()) {
            let mut kron = Matrix::zeros(&f2, 4, 4);
            for u1 in 0..2 {
                for u2 in 0..2 {
                    for w1 in 0..2 {
                        for w2 in 0..2 {
                            let v = f2.mul(g.at(u1, w1), g.at(u2, w2));
                            kron.set(u1 * 2 + u2, w1 * 2 + w2, v);
                        }
                    }
                }
            }
            assert_eq!(rho, &kron);
            // Degree certificate: the family evaluates back to rho(g).
            assert_eq!(&certificate.eval(g).unwrap(), rho);
        }
        assert!(is_group_hom(&rep).unwrap().0);
    }

    #[test]
    fn regular_module_restriction_is_a_homomorphism() {
        let f3 = f(3);
        let algebra = SchurAlgebra::build(&f3, 2, 2).unwrap();
        let module = builtin_smodule(&algebra, BuiltinModule::Regular).unwrap();
        let (rep, certificate) = restrict_smodule(&module).unwrap();
        assert_eq!(rep.dim_v(), 10);
        assert_eq!(rep.group().order(), 48);
        // Exhaustive homomorphism check over all 48^2 pairs.
        let (ok, witness) = is_group_hom(&rep).unwrap();
        assert!(ok, "witness {witness:?}");
        // Certificate evaluates to rho on every element.
        for (g, rho) in rep.group().elements().iter().zip(rep.matrices()) {
            assert_eq!(&certificate.eval(g).unwrap(), rho);
        }
    }

    #[test]
    fn defining_module_restricts_to_identity() {
        let f5 = f(5);
        let algebra = SchurAlgebra::build(&f5, 2, 1).unwrap();
        let module = builtin_smodule(&algebra, BuiltinModule::Tensor).unwrap();
        let (rep, _) = restrict_smodule(&module).unwrap();
        for (g, rho) in rep.group().elements().iter().zip(rep.matrices()) {
            assert_eq!(rho, g);
        }
    }

    #[test]
    fn lift_recovers_restricted_modules() {
        let f3 = f(3);
        let algebra = SchurAlgebra::build(&f3, 2, 2).unwrap();
        for which in [
            BuiltinModule::Regular,
            BuiltinModule::Tensor,
            BuiltinModule::Determinant,
        ] {
            let module = builtin_smodule(&algebra, which).unwrap();
            let (_, certificate) = restrict_smodule(&module).unwrap();
            match lift_polyrep(&algebra, &certificate).unwrap() {
                LiftOutcome::Module(m) => assert_eq!(m.action(), module.action()),
                LiftOutcome::Obstructed(o) => panic!("unexpected obstruction {o:?}"),
            }
        }
    }

    #[test]
    fn determinant_lifts_to_a_module() {
        for p in [2u64, 3] {
            let ring = f(p);
            let algebra = SchurAlgebra::build(&ring, 2, 2).unwrap();
            let spec = builtin_rep(&algebra, BuiltinRep::Determinant).unwrap();
            match lift_polyrep(&algebra, &spec).unwrap() {
                LiftOutcome::Module(m) => assert_eq!(m.dim_v(), 1),
                LiftOutcome::Obstructed(o) => panic!("p={p}: {o:?}"),
            }
        }
    }

    #[test]
    fn tampered_family_reports_an_obstruction() {
        let f3 = f(3);
        let algebra = SchurAlgebra::build(&f3, 2, 2).unwrap();
        let module = builtin_smodule(&algebra, BuiltinModule::Tensor).unwrap();
        let (_, certificate) = restrict_smodule(&module).unwrap();
        // Perturb one coefficient matrix.
        let mut matrices: Vec<Matrix> = (0..algebra.dim())
            .map(|e| certificate.y_matrix(e))
            .collect();
        let bumped = matrices[3].at(0, 0).clone();
        matrices[3].set(0, 0, f3.add(&bumped, &f3.one()));
        let tampered = PolyRep::new(&f3, 2, 2, 4, matrices).unwrap();
        match lift_polyrep(&algebra, &tampered).unwrap() {
            LiftOutcome::Obstructed(_) => {}
            LiftOutcome::Module(_) => panic!("tampered family must not lift"),
        }
    }

    #[test]
    fn group_hom_detects_corruption() {
        let f2 = f(2);
        let algebra = SchurAlgebra::build(&f2, 2, 2).unwrap();
        let module = builtin_smodule(&algebra, BuiltinModule::Tensor).unwrap();
        let (rep, _) = restrict_smodule(&module).unwrap();
        let mut matrices = rep.matrices().to_vec();
        // Zero out a non-identity element's matrix.
        let victim = (0..matrices.len())
            .find(|&i| i != rep.group().identity_index())
            .unwrap();
        matrices[victim] = Matrix::zeros(&f2, 4, 4);
        let bad = GroupRep::new(rep.group().clone(), 4, matrices).unwrap();
        let (ok, witness) = is_group_hom(&bad).unwrap();
        assert!(!ok);
        assert!(witness.is_some());
    }

    #[test]
    fn roundtrip_reports() {
        // Regular module over F_3 (phi surjective), tensor module over F_2
        // (phi not surjective; restriction still round-trips), determinant
        // module over F_3.
        let f3 = f(3);
        let s3 = SchurAlgebra::build(&f3, 2, 2).unwrap();
        let regular = builtin_smodule(&s3, BuiltinModule::Regular).unwrap();
        let report = roundtrip_check(&regular).unwrap();
        assert!(report.recovered_equal && report.hom_law_holds && report.phi_surjective);

        let f2 = f(2);
        let s2 = SchurAlgebra::build(&f2, 2, 2).unwrap();
        let tensor = builtin_smodule(&s2, BuiltinModule::Tensor).unwrap();
        let report = roundtrip_check(&tensor).unwrap();
        assert!(report.recovered_equal && report.hom_law_holds);
        assert!(!report.phi_surjective);

        let det = builtin_smodule(&s3, BuiltinModule::Determinant).unwrap();
        let report = roundtrip_check(&det).unwrap();
        assert!(report.recovered_equal);
    }

    #[test]
    fn degree_zero_modules_work() {
        let f3 = f(3);
        let algebra = SchurAlgebra::build(&f3, 2, 0).unwrap();
        assert_eq!(algebra.dim(), 1);
        let module = builtin_smodule(&algebra, BuiltinModule::Regular).unwrap();
        let report = roundtrip_check(&module).unwrap();
        assert!(report.recovered_equal);
    }

    #[test]
    fn distinct_modules_restrict_differently() {
        // Over F_3 (phi surjective) a tampered copy of the regular module
        // yields a different restricted representation.
        let f3 = f(3);
        let algebra = SchurAlgebra::build(&f3, 2, 2).unwrap();
        let regular = builtin_smodule(&algebra, BuiltinModule::Regular).unwrap();
        let (rep, _) = restrict_smodule(&regular).unwrap();
        // The tampered action: swap the action of two basis elements. This
        // is generally not a module, so compare raw restriction images
        // instead: rho'(g) = sum_nu phi(g)_nu action'(nu).
        let mut action = regular.action().to_vec();
        action.swap(1, 2);
        let mut differs = false;
        for (idx, g) in rep.group().elements().iter().enumerate() {
            let img = algebra.gamma(g).unwrap();
            let mut rho = Matrix::zeros(&f3, 10, 10);
            for (e, c) in img.coeffs().iter().enumerate() {
                if !c.is_zero() {
                    rho = rho.add(&action[e].scale(c)).unwrap();
                }
            }
            if rho != rep.matrices()[idx] {
                differs = true;
                break;
            }
        }
        assert!(differs);
    }
}
