//! 3×3 tropical matrices.
//!
//! Columns are points of the plane and rows are lines, so `A ⊙ p` sends a
//! point to the tropical combination of the columns. Indices are 0-based in
//! code; docs use the 1-based names `(i, j)` only when quoting formulas.

use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::projective::{cross_raw, Vec3};
use crate::semiring::{rat, t_add, t_mul, Rational, TropScalar};

/// Validated 3×3 max-plus matrix; every row and column has a finite entry.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawMatrix", into = "RawMatrix")]
pub struct TropMatrix3 {
    entries: [[TropScalar; 3]; 3],
}

#[derive(Serialize, Deserialize)]
struct RawMatrix {
    entries: [[TropScalar; 3]; 3],
}

impl TryFrom<RawMatrix> for TropMatrix3 {
    type Error = Error;

    fn try_from(raw: RawMatrix) -> Result<Self> {
        TropMatrix3::new(raw.entries)
    }
}

impl From<TropMatrix3> for RawMatrix {
    fn from(m: TropMatrix3) -> Self {
        RawMatrix { entries: m.entries }
    }
}

/// Value of the tropical determinant and whether its maximum is unique.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TropDet {
    pub value: TropScalar,
    pub regular: bool,
}

pub(crate) const PERMS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

impl TropMatrix3 {
    pub fn new(entries: [[TropScalar; 3]; 3]) -> Result<Self> {
        for i in 0..3 {
            if entries[i].iter().all(|e| !e.is_finite()) {
                return Err(Error::InvalidMatrix(format!("row {} has no finite entry", i + 1)));
            }
            if (0..3).all(|r| !entries[r][i].is_finite()) {
                return Err(Error::InvalidMatrix(format!(
                    "column {} has no finite entry",
                    i + 1
                )));
            }
        }
        Ok(TropMatrix3 { entries })
    }

    /// All-finite matrix from rationals.
    pub fn from_rationals(entries: [[Rational; 3]; 3]) -> Self {
        TropMatrix3 {
            entries: entries.map(|row| row.map(TropScalar::Finite)),
        }
    }

    /// All-finite matrix from integers.
    pub fn ints(entries: [[i64; 3]; 3]) -> Self {
        TropMatrix3::from_rationals(entries.map(|row| row.map(rat)))
    }

    pub fn from_columns(cols: [&Vec3; 3]) -> Result<Self> {
        let entries = std::array::from_fn(|i| std::array::from_fn(|j| cols[j][i].clone()));
        TropMatrix3::new(entries)
    }

    /// Tropical identity: zeros on the diagonal, `-inf` elsewhere.
    pub fn identity() -> Self {
        let entries = std::array::from_fn(|i| {
            std::array::from_fn(|j| if i == j { TropScalar::zero() } else { TropScalar::NegInf })
        });
        TropMatrix3 { entries }
    }

    pub fn zero() -> Self {
        TropMatrix3::ints([[0; 3]; 3])
    }

    pub fn entries(&self) -> &[[TropScalar; 3]; 3] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &TropScalar {
        &self.entries[i][j]
    }

    /// Entry `(i, j)` as a rational; errors on `-inf`.
    pub fn finite(&self, i: usize, j: usize) -> Result<&Rational> {
        self.entries[i][j].finite().ok_or_else(|| {
            Error::NonFinite(format!("entry ({}, {}) is -inf", i + 1, j + 1))
        })
    }

    pub fn row(&self, i: usize) -> Vec3 {
        self.entries[i].clone()
    }

    pub fn col(&self, j: usize) -> Vec3 {
        std::array::from_fn(|i| self.entries[i][j].clone())
    }

    pub fn is_all_finite(&self) -> bool {
        self.entries.iter().flatten().all(TropScalar::is_finite)
    }

    pub fn require_finite(&self) -> Result<()> {
        if self.is_all_finite() {
            Ok(())
        } else {
            Err(Error::NonFinite("matrix has a -inf entry".to_string()))
        }
    }

    /// All nine entries as rationals.
    pub fn finite_entries(&self) -> Result<[[Rational; 3]; 3]> {
        self.require_finite()?;
        Ok(self
            .entries
            .clone()
            .map(|row| row.map(|e| e.finite().cloned().expect("checked finite"))))
    }

    pub fn mul(&self, other: &TropMatrix3) -> TropMatrix3 {
        let entries = std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                (0..3)
                    .map(|k| t_mul(&self.entries[i][k], &other.entries[k][j]))
                    .max()
                    .expect("three terms")
            })
        });
        TropMatrix3 { entries }
    }

    /// `A ⊙ v` on a raw triple.
    pub fn mul_vec(&self, v: &Vec3) -> Vec3 {
        std::array::from_fn(|i| {
            (0..3)
                .map(|k| t_mul(&self.entries[i][k], &v[k]))
                .max()
                .expect("three terms")
        })
    }

    pub fn pow(&self, k: u32) -> TropMatrix3 {
        assert!(k >= 1, "matrix power needs k >= 1");
        let mut acc = self.clone();
        for _ in 1..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn transpose(&self) -> TropMatrix3 {
        let entries = std::array::from_fn(|i| std::array::from_fn(|j| self.entries[j][i].clone()));
        TropMatrix3 { entries }
    }

    /// Entrywise max.
    pub fn join(&self, other: &TropMatrix3) -> TropMatrix3 {
        let entries = std::array::from_fn(|i| {
            std::array::from_fn(|j| t_add(&self.entries[i][j], &other.entries[i][j]))
        });
        TropMatrix3 { entries }
    }

    /// Entrywise `self ≤ other`.
    pub fn le(&self, other: &TropMatrix3) -> bool {
        (0..3).all(|i| (0..3).all(|j| self.entries[i][j] <= other.entries[i][j]))
    }

    /// Entrywise `self - other` on finite matrices.
    pub fn sub(&self, other: &TropMatrix3) -> Result<[[Rational; 3]; 3]> {
        let a = self.finite_entries()?;
        let b = other.finite_entries()?;
        Ok(std::array::from_fn(|i| std::array::from_fn(|j| &a[i][j] - &b[i][j])))
    }

    /// `A ⊙ diag(-row(A, 3))`: every column shifted to have third entry 0.
    pub fn chart0(&self) -> Result<TropMatrix3> {
        let shifts = (0..3)
            .map(|j| self.entries[2][j].finite().cloned().ok_or(Error::BoundaryPoint))
            .collect::<Result<Vec<_>>>()?;
        let entries = std::array::from_fn(|i| {
            std::array::from_fn(|j| self.entries[i][j].sub(&shifts[j]))
        });
        Ok(TropMatrix3 { entries })
    }

    /// Entrywise negation of an all-finite matrix.
    pub fn neg(&self) -> Result<TropMatrix3> {
        let a = self.finite_entries()?;
        Ok(TropMatrix3::from_rationals(a.map(|row| row.map(|e| -e))))
    }

    /// `(-A^T)_0`: columns are the vertices of the lines `row(A, j)`.
    pub fn neg_transpose_chart(&self) -> Result<TropMatrix3> {
        self.transpose().neg()?.chart0()
    }

    pub fn trop_det(&self) -> TropDet {
        let terms: Vec<TropScalar> = PERMS
            .iter()
            .map(|s| {
                (0..3).fold(TropScalar::zero(), |acc, i| t_mul(&acc, &self.entries[i][s[i]]))
            })
            .collect();
        let value = terms.iter().max().cloned().expect("six terms");
        let regular = terms.iter().filter(|t| **t == value).count() == 1;
        TropDet { value, regular }
    }

    /// Tropical adjoint: `row(Â, j) = col(A, j-1) ⊗ col(A, j+1)`.
    pub fn adjoint_hat(&self) -> Result<TropMatrix3> {
        let cols = [self.col(0), self.col(1), self.col(2)];
        let mut entries: [[TropScalar; 3]; 3] = Default::default();
        for (j, row) in entries.iter_mut().enumerate() {
            let prev = &cols[(j + 2) % 3];
            let next = &cols[(j + 1) % 3];
            *row = match cross_raw(prev, next) {
                Ok(p) => p.into_coords(),
                Err(_) => [TropScalar::NegInf, TropScalar::NegInf, TropScalar::NegInf],
            };
        }
        TropMatrix3::new(entries)
    }

    /// `β_ii = 0`, `β_ij = a_ik + a_kj` for `{i, j, k} = {1, 2, 3}`.
    pub fn breve(&self) -> Result<TropMatrix3> {
        if (0..3).any(|i| !self.entries[i][i].is_finite()) {
            return Err(Error::NonFinite("breve needs a finite diagonal".to_string()));
        }
        let entries = std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                if i == j {
                    TropScalar::zero()
                } else {
                    let k = 3 - i - j;
                    t_mul(&self.entries[i][k], &self.entries[k][j])
                }
            })
        });
        TropMatrix3::new(entries)
    }

    /// `I ≤ A ≤ 0`.
    pub fn is_normal(&self) -> bool {
        let zero = TropScalar::zero();
        (0..3).all(|i| {
            self.entries[i][i] == zero && self.entries[i].iter().all(|e| *e <= zero)
        })
    }

    /// `A* = I ⊕ A ⊕ A² ⊕ …`, which is `A²` for normal `A`.
    pub fn kleene_star(&self) -> Result<TropMatrix3> {
        if !self.is_normal() {
            return Err(Error::NotNormal);
        }
        Ok(self.pow(2))
    }

    pub fn is_idempotent(&self) -> bool {
        self.pow(2) == *self
    }

    /// Simultaneous relabeling of rows and columns: `R[ρ(i)][ρ(j)] = M[i][j]`.
    pub fn relabel(&self, rho: [usize; 3]) -> TropMatrix3 {
        let mut entries: [[TropScalar; 3]; 3] = Default::default();
        for i in 0..3 {
            for j in 0..3 {
                entries[rho[i]][rho[j]] = self.entries[i][j].clone();
            }
        }
        TropMatrix3 { entries }
    }

    /// Exactly one finite entry per row and column.
    pub fn monomial_pattern(&self) -> Option<MonomialMatrix> {
        let mut perm = [0usize; 3];
        let mut offsets: [Rational; 3] = Default::default();
        for i in 0..3 {
            let finite: Vec<usize> = (0..3).filter(|&j| self.entries[i][j].is_finite()).collect();
            if finite.len() != 1 {
                return None;
            }
            perm[i] = finite[0];
            offsets[i] = self.entries[i][finite[0]].finite().cloned()?;
        }
        MonomialMatrix::new(perm, offsets).ok()
    }
}

impl Default for TropScalar {
    fn default() -> Self {
        TropScalar::NegInf
    }
}

impl fmt::Display for TropMatrix3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, row) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[{}, {}, {}]", row[0], row[1], row[2])?;
        }
        write!(f, "]")
    }
}

/// Generalized permutation matrix: entry `offsets[i]` at `(i, perm[i])`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MonomialMatrix {
    pub perm: [usize; 3],
    #[serde(with = "crate::semiring::rational_str3")]
    pub offsets: [Rational; 3],
}

impl MonomialMatrix {
    pub fn new(perm: [usize; 3], offsets: [Rational; 3]) -> Result<Self> {
        let mut seen = [false; 3];
        for &p in &perm {
            if p >= 3 || seen[p] {
                return Err(Error::InvalidMatrix(format!("{perm:?} is not a permutation")));
            }
            seen[p] = true;
        }
        Ok(MonomialMatrix { perm, offsets })
    }

    pub fn identity() -> Self {
        MonomialMatrix::diag([Rational::zero(), Rational::zero(), Rational::zero()])
    }

    pub fn diag(offsets: [Rational; 3]) -> Self {
        MonomialMatrix {
            perm: [0, 1, 2],
            offsets,
        }
    }

    pub fn permutation(perm: [usize; 3]) -> Result<Self> {
        MonomialMatrix::new(perm, [Rational::zero(), Rational::zero(), Rational::zero()])
    }

    pub fn to_matrix(&self) -> TropMatrix3 {
        let mut entries: [[TropScalar; 3]; 3] = Default::default();
        for i in 0..3 {
            entries[i][self.perm[i]] = TropScalar::Finite(self.offsets[i].clone());
        }
        TropMatrix3 { entries }
    }

    /// `self ⊙ other`.
    pub fn mul(&self, other: &MonomialMatrix) -> MonomialMatrix {
        let perm = std::array::from_fn(|i| other.perm[self.perm[i]]);
        let offsets = std::array::from_fn(|i| &self.offsets[i] + &other.offsets[self.perm[i]]);
        MonomialMatrix { perm, offsets }
    }

    pub fn inverse(&self) -> MonomialMatrix {
        let mut perm = [0usize; 3];
        let mut offsets: [Rational; 3] = Default::default();
        for i in 0..3 {
            perm[self.perm[i]] = i;
            offsets[self.perm[i]] = -&self.offsets[i];
        }
        MonomialMatrix { perm, offsets }
    }

    /// `self ⊙ A`: `(PA)_ij = offsets_i + A[perm(i)][j]`.
    pub fn left_apply(&self, a: &TropMatrix3) -> TropMatrix3 {
        let entries = std::array::from_fn(|i| {
            let o = TropScalar::Finite(self.offsets[i].clone());
            std::array::from_fn(|j| t_mul(&o, &a.entries[self.perm[i]][j]))
        });
        TropMatrix3 { entries }
    }

    /// `A ⊙ self`: column `perm(k)` of the result is column `k` of `A` shifted by `offsets_k`.
    pub fn right_apply(&self, a: &TropMatrix3) -> TropMatrix3 {
        let mut entries: [[TropScalar; 3]; 3] = Default::default();
        for k in 0..3 {
            let o = TropScalar::Finite(self.offsets[k].clone());
            for i in 0..3 {
                entries[i][self.perm[k]] = t_mul(&a.entries[i][k], &o);
            }
        }
        TropMatrix3 { entries }
    }

    /// `self ⊙ v`.
    pub fn apply_vec(&self, v: &Vec3) -> Vec3 {
        std::array::from_fn(|i| t_mul(&TropScalar::Finite(self.offsets[i].clone()), &v[self.perm[i]]))
    }
}

/// `P ⊙ A ⊙ Q`.
pub fn conjugate(p: &MonomialMatrix, a: &TropMatrix3, q: &MonomialMatrix) -> TropMatrix3 {
    q.right_apply(&p.left_apply(a))
}
