//! Square matrices over a [`Ring`].

use crate::error::{Error, Result};
use crate::ring::{Ring, RingValue};

/// Square matrix with exact entries, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingMatrix {
    ring: Ring,
    size: usize,
    data: Vec<RingValue>,
}

impl RingMatrix {
    pub fn zeros(ring: &Ring, size: usize) -> RingMatrix {
        RingMatrix {
            ring: ring.clone(),
            size,
            data: vec![ring.zero(); size * size],
        }
    }

    pub fn identity(ring: &Ring, size: usize) -> RingMatrix {
        let mut m = RingMatrix::zeros(ring, size);
        for i in 0..size {
            m.data[i * size + i] = ring.one();
        }
        m
    }

    pub fn from_rows(ring: &Ring, rows: Vec<Vec<RingValue>>) -> Result<RingMatrix> {
        let size = rows.len();
        let mut data = Vec::with_capacity(size * size);
        for (r, row) in rows.into_iter().enumerate() {
            if row.len() != size {
                return Err(Error::Dimension(format!(
                    "row {} has {} entries, expected {size}",
                    r + 1,
                    row.len()
                )));
            }
            for v in &row {
                ring.check(v)?;
            }
            data.extend(row);
        }
        Ok(RingMatrix {
            ring: ring.clone(),
            size,
            data,
        })
    }

    pub(crate) fn from_fn(ring: &Ring, size: usize, mut f: impl FnMut(usize, usize) -> RingValue) -> RingMatrix {
        let mut data = Vec::with_capacity(size * size);
        for r in 0..size {
            for c in 0..size {
                data.push(f(r, c));
            }
        }
        RingMatrix {
            ring: ring.clone(),
            size,
            data,
        }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, row: usize, col: usize) -> &RingValue {
        &self.data[row * self.size + col]
    }

    pub fn set(&mut self, row: usize, col: usize, v: RingValue) -> Result<()> {
        self.ring.check(&v)?;
        self.data[row * self.size + col] = v;
        Ok(())
    }

    pub fn column(&self, col: usize) -> Vec<RingValue> {
        (0..self.size).map(|r| self.get(r, col).clone()).collect()
    }

    pub fn rows(&self) -> Vec<Vec<RingValue>> {
        self.data
            .chunks(self.size.max(1))
            .map(|c| c.to_vec())
            .take(self.size)
            .collect()
    }

    /// Entries in row-major order.
    pub fn entries(&self) -> &[RingValue] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(RingValue::is_zero)
    }

    fn check_shape(&self, other: &RingMatrix) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch {
                left: self.ring.to_string(),
                right: other.ring.to_string(),
            });
        }
        if self.size != other.size {
            return Err(Error::Dimension(format!(
                "{}x{} vs {}x{}",
                self.size, self.size, other.size, other.size
            )));
        }
        Ok(())
    }

    pub fn mul(&self, other: &RingMatrix) -> Result<RingMatrix> {
        self.check_shape(other)?;
        Ok(self.mul_raw(other))
    }

    pub(crate) fn mul_raw(&self, other: &RingMatrix) -> RingMatrix {
        let n = self.size;
        let ring = &self.ring;
        let mut out = RingMatrix::zeros(ring, n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let slot = &mut out.data[i * n + j];
                    *slot = ring.add_raw(slot, &ring.mul_raw(a, b));
                }
            }
        }
        out
    }

    pub fn add(&self, other: &RingMatrix) -> Result<RingMatrix> {
        self.check_shape(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| self.ring.add_raw(a, b))
            .collect();
        Ok(RingMatrix {
            ring: self.ring.clone(),
            size: self.size,
            data,
        })
    }

    pub fn mul_vec(&self, v: &[RingValue]) -> Result<Vec<RingValue>> {
        if v.len() != self.size {
            return Err(Error::Dimension(format!(
                "vector of length {} for {}x{} matrix",
                v.len(),
                self.size,
                self.size
            )));
        }
        for x in v {
            self.ring.check(x)?;
        }
        Ok(self.mul_vec_raw(v))
    }

    pub(crate) fn mul_vec_raw(&self, v: &[RingValue]) -> Vec<RingValue> {
        let ring = &self.ring;
        (0..self.size)
            .map(|r| {
                let mut acc = ring.zero();
                for (c, x) in v.iter().enumerate() {
                    let a = self.get(r, c);
                    if a.is_zero() || x.is_zero() {
                        continue;
                    }
                    acc = ring.add_raw(&acc, &ring.mul_raw(a, x));
                }
                acc
            })
            .collect()
    }

    /// Matrix whose entry `(r, c)` is `self[perm[r], perm[c]]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<RingMatrix> {
        check_permutation(perm, self.size)?;
        Ok(RingMatrix::from_fn(&self.ring, self.size, |r, c| {
            self.get(perm[r], perm[c]).clone()
        }))
    }

    /// Zero on and below the diagonal.
    pub fn is_strictly_upper(&self) -> bool {
        (0..self.size).all(|r| (0..=r).all(|c| self.get(r, c).is_zero()))
    }
}

pub(crate) fn check_permutation(perm: &[usize], size: usize) -> Result<()> {
    let mut seen = vec![false; size];
    if perm.len() != size {
        return Err(Error::Dimension(format!(
            "permutation of length {} for size {size}",
            perm.len()
        )));
    }
    for &p in perm {
        if p >= size || seen[p] {
            return Err(Error::Dimension(format!("{perm:?} is not a permutation")));
        }
        seen[p] = true;
    }
    Ok(())
}
