//! Linear algebra over `Z / p^M` with pivoting on minimal valuation.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::padic::{valuation, Order, PadicInt};

/// Dense matrix over `Z / p^e` with the modulus below `2^64`.
#[derive(Clone, Debug)]
pub struct ModMatrix {
    p: u64,
    modulus: u128,
    rows: usize,
    cols: usize,
    data: Vec<u128>,
}

impl ModMatrix {
    pub fn zeros(p: u64, exp: u32, rows: usize, cols: usize) -> Result<Self> {
        let modulus = (p as u128).checked_pow(exp).filter(|&m| m < (1u128 << 64)).ok_or_else(|| {
            Error::InvalidPrecision(format!("{p}^{exp} exceeds the word-sized solver"))
        })?;
        Ok(ModMatrix { p, modulus, rows, cols, data: vec![0; rows * cols] })
    }

    pub fn modulus(&self) -> u128 {
        self.modulus
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u128 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u128) {
        self.data[i * self.cols + j] = v % self.modulus;
    }

    fn val(&self, x: u128) -> u32 {
        if x == 0 {
            return u32::MAX;
        }
        let mut x = x;
        let mut n = 0;
        while x % self.p as u128 == 0 {
            x /= self.p as u128;
            n += 1;
        }
        n
    }

    fn inv_unit(&self, u: u128) -> u128 {
        let m = BigInt::from(self.modulus);
        let e = BigInt::from(u).extended_gcd(&m);
        e.x.mod_floor(&m).to_u128().expect("reduced")
    }

    /// Some solution of `self * x = b`, with free variables set to zero.
    pub fn solve(&self, b: &[u128]) -> Result<Vec<u128>> {
        assert_eq!(b.len(), self.rows);
        let m = self.modulus;
        let (nr, nc) = (self.rows, self.cols);
        let mut a = self.data.clone();
        let mut rhs: Vec<u128> = b.iter().map(|x| x % m).collect();
        let mut perm: Vec<usize> = (0..nc).collect();
        let mut pivots: Vec<u32> = Vec::new();
        let mulm = |x: u128, y: u128| x * y % m;
        let mut r = 0;
        while r < nr && r < nc {
            let mut best: Option<(u32, usize, usize)> = None;
            'search: for i in r..nr {
                for j in r..nc {
                    let v = self.val(a[i * nc + j]);
                    if v != u32::MAX && best.is_none_or(|(bv, _, _)| v < bv) {
                        best = Some((v, i, j));
                        if v == 0 {
                            break 'search;
                        }
                    }
                }
            }
            let Some((v, pi, pj)) = best else { break };
            if pi != r {
                for j in 0..nc {
                    a.swap(r * nc + j, pi * nc + j);
                }
                rhs.swap(r, pi);
            }
            if pj != r {
                for i in 0..nr {
                    a.swap(i * nc + r, i * nc + pj);
                }
                perm.swap(r, pj);
            }
            let piv = a[r * nc + r];
            let pv = (self.p as u128).pow(v);
            let uinv = self.inv_unit(piv / pv);
            for i in r + 1..nr {
                let e = a[i * nc + r];
                if e == 0 {
                    continue;
                }
                // e = p^v * t, eliminate with factor t * u^{-1}
                let factor = mulm(e / pv, uinv);
                for j in r..nc {
                    let s = mulm(factor, a[r * nc + j]);
                    a[i * nc + j] = (a[i * nc + j] + m - s) % m;
                }
                rhs[i] = (rhs[i] + m - mulm(factor, rhs[r])) % m;
            }
            pivots.push(v);
            r += 1;
        }
        for (i, &x) in rhs.iter().enumerate().skip(r) {
            if x != 0 {
                return Err(Error::SystemSingularAtPrecision(format!("inconsistent equation {i}")));
            }
        }
        let mut x = vec![0u128; nc];
        for i in (0..r).rev() {
            let mut acc = rhs[i];
            for j in i + 1..nc {
                if x[j] != 0 {
                    acc = (acc + m - mulm(a[i * nc + j], x[j])) % m;
                }
            }
            let v = pivots[i];
            let pv = (self.p as u128).pow(v);
            if acc % pv != 0 {
                return Err(Error::SystemSingularAtPrecision(format!(
                    "pivot {i} of valuation {v} does not divide its right-hand side"
                )));
            }
            let u = a[i * nc + i] / pv;
            let sub_mod = m / pv;
            let ui = self.inv_unit(u) % sub_mod;
            x[i] = (acc / pv) % sub_mod * ui % sub_mod;
        }
        let mut out = vec![0u128; nc];
        for (k, &orig) in perm.iter().enumerate() {
            out[orig] = x[k];
        }
        Ok(out)
    }
}

/// Elementary divisors of a matrix over `Z_p` known modulo `p^M`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SnfResult {
    /// Ascending; `None` stands for a divisor invisible at precision (`AtLeast(M)`).
    pub valuations: Vec<Option<u32>>,
    pub precision: u32,
    pub rank_at_precision: usize,
    pub precision_flag: bool,
}

impl SnfResult {
    pub fn orders(&self) -> Vec<Order> {
        self.valuations
            .iter()
            .map(|v| match v {
                Some(v) => Order::Finite(*v),
                None => Order::AtLeast(self.precision),
            })
            .collect()
    }
}

/// Smith-style elimination over `Z / p^M`.
///
/// The valuation list is padded to the row count so that `rank_at_precision`
/// is the `Z_p`-rank of the cokernel. `precision_flag` marks any finite
/// divisor at or above `M - guard`.
pub fn snf_rank(p: u64, m: u32, matrix: &[Vec<PadicInt>], guard: u32) -> SnfResult {
    let nr = matrix.len();
    let nc = matrix.first().map_or(0, Vec::len);
    let modulus = num_traits::pow(BigUint::from(p), m as usize);
    let mut a: Vec<Vec<BigUint>> =
        matrix.iter().map(|row| row.iter().map(|x| x.residue() % &modulus).collect()).collect();
    let val = |x: &BigUint| if x.is_zero() { None } else { Some(valuation(x, p)) };
    let mut vals: Vec<Option<u32>> = Vec::new();
    let mut r = 0;
    while r < nr.min(nc) {
        let mut best: Option<(u32, usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(r) {
            for (j, x) in row.iter().enumerate().skip(r) {
                if let Some(v) = val(x) {
                    if best.is_none_or(|(bv, _, _)| v < bv) {
                        best = Some((v, i, j));
                    }
                }
            }
        }
        let Some((v, pi, pj)) = best else { break };
        a.swap(r, pi);
        for row in a.iter_mut() {
            row.swap(r, pj);
        }
        let pv = num_traits::pow(BigUint::from(p), v as usize);
        let u = &a[r][r] / &pv;
        let uinv = BigInt::from(u)
            .extended_gcd(&BigInt::from(modulus.clone()))
            .x
            .mod_floor(&BigInt::from(modulus.clone()))
            .to_biguint()
            .expect("nonnegative");
        let prow = a[r].clone();
        for row in a.iter_mut().skip(r + 1) {
            if row[r].is_zero() {
                continue;
            }
            let factor = (&row[r] / &pv) * &uinv % &modulus;
            for j in r..nc {
                let s = &factor * &prow[j] % &modulus;
                row[j] = (&row[j] + &modulus - s) % &modulus;
            }
        }
        // column operations clear the rest of the pivot row
        for j in r + 1..nc {
            a[r][j] = BigUint::zero();
        }
        vals.push(Some(v));
        r += 1;
    }
    while vals.len() < nr {
        vals.push(None);
    }
    let rank_at_precision = vals.iter().filter(|v| v.is_none()).count();
    let precision_flag = vals.iter().flatten().any(|&v| v + guard >= m);
    SnfResult { valuations: vals, precision: m, rank_at_precision, precision_flag }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(p: u64, m: u32, rows: &[&[i64]]) -> Vec<Vec<PadicInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| PadicInt::from_signed(p, &BigInt::from(x), m)).collect())
            .collect()
    }

    #[test]
    fn snf_examples() {
        let z = snf_rank(3, 4, &mat(3, 4, &[&[0, 0], &[0, 0]]), 2);
        assert_eq!(z.orders(), vec![Order::AtLeast(4), Order::AtLeast(4)]);
        assert_eq!(z.rank_at_precision, 2);
        let d = snf_rank(3, 4, &mat(3, 4, &[&[1, 0], &[0, 3]]), 2);
        assert_eq!(d.valuations, vec![Some(0), Some(1)]);
        assert_eq!(d.rank_at_precision, 0);
        assert!(!d.precision_flag);
        let one = snf_rank(2, 8, &mat(2, 8, &[&[0]]), 2);
        assert_eq!(one.rank_at_precision, 1);
    }

    #[test]
    fn guard_band_flags() {
        let d = snf_rank(2, 6, &mat(2, 6, &[&[16]]), 2);
        assert_eq!(d.valuations, vec![Some(4)]);
        assert!(d.precision_flag);
    }

    #[test]
    fn solver_handles_non_units() {
        // 2x + 4y = 6, 3y = 3 mod 2^5 ... over p = 2 with a unit pivot in the second row
        let mut a = ModMatrix::zeros(2, 5, 2, 2).unwrap();
        a.set(0, 0, 2);
        a.set(0, 1, 4);
        a.set(1, 1, 3);
        let x = a.solve(&[6, 3]).unwrap();
        let m = a.modulus();
        assert_eq!((2 * x[0] + 4 * x[1]) % m, 6);
        assert_eq!((3 * x[1]) % m, 3);
        let mut b = ModMatrix::zeros(2, 5, 1, 1).unwrap();
        b.set(0, 0, 4);
        assert!(matches!(b.solve(&[2]), Err(Error::SystemSingularAtPrecision(_))));
    }
}
