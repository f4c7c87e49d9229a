use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::tate::{DeviationTable, Provenance};
use crate::window::Window;

fn overflow() -> Error {
    Error::Internal("series coefficient overflow".into())
}

/// Power series known through `t^t_max`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TruncatedSeries {
    #[serde(with = "crate::window::wide_int::vec")]
    coeffs: Vec<i128>,
}

impl TruncatedSeries {
    /// Coefficients `c_0..=c_{t_max}`; missing ones are zero.
    pub fn new(mut coeffs: Vec<i128>, t_max: usize) -> Self {
        coeffs.resize(t_max + 1, 0);
        TruncatedSeries { coeffs }
    }

    pub fn one(t_max: usize) -> Self {
        Self::new(vec![1], t_max)
    }

    pub fn t_max(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[i128] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> i128 {
        assert!(i <= self.t_max(), "coefficient {i} is beyond t^{}", self.t_max());
        self.coeffs[i]
    }

    fn check(&self, other: &Self) {
        assert_eq!(self.t_max(), other.t_max(), "series truncated at different degrees");
    }

    pub fn add(&self, other: &Self) -> Result<Self, Error> {
        self.check(other);
        let c = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.checked_add(*b).ok_or_else(overflow));
        Ok(TruncatedSeries { coeffs: c.collect::<Result<_, _>>()? })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, Error> {
        self.check(other);
        let c = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.checked_sub(*b).ok_or_else(overflow));
        Ok(TruncatedSeries { coeffs: c.collect::<Result<_, _>>()? })
    }

    pub fn mul(&self, other: &Self) -> Result<Self, Error> {
        self.check(other);
        let n = self.t_max();
        let mut out = vec![0i128; n + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if *a == 0 {
                continue;
            }
            for (j, b) in other.coeffs[..=n - i].iter().enumerate() {
                let p = a.checked_mul(*b).ok_or_else(overflow)?;
                out[i + j] = out[i + j].checked_add(p).ok_or_else(overflow)?;
            }
        }
        Ok(TruncatedSeries { coeffs: out })
    }

    /// Multiplication by `t`, dropping the coefficient that leaves the window.
    pub fn shift(&self) -> Self {
        let mut c = vec![0];
        c.extend_from_slice(&self.coeffs[..self.t_max()]);
        TruncatedSeries { coeffs: c }
    }

    /// Inverse of a series with constant term `±1`.
    pub fn inverse(&self) -> Result<Self, Error> {
        let c0 = self.coeffs[0];
        if c0 != 1 && c0 != -1 {
            return Err(Error::Internal(format!("series with constant term {c0} is not invertible over the integers")));
        }
        let n = self.t_max();
        let mut inv = vec![0i128; n + 1];
        inv[0] = c0;
        for k in 1..=n {
            let mut s: i128 = 0;
            for i in 1..=k {
                let p = self.coeffs[i].checked_mul(inv[k - i]).ok_or_else(overflow)?;
                s = s.checked_add(p).ok_or_else(overflow)?;
            }
            inv[k] = -s * c0;
        }
        Ok(TruncatedSeries { coeffs: inv })
    }

    pub fn div(&self, other: &Self) -> Result<Self, Error> {
        self.mul(&other.inverse()?)
    }

    /// First index where the two series differ.
    pub fn first_difference(&self, other: &Self) -> Option<usize> {
        let n = self.t_max().min(other.t_max());
        (0..=n).find(|&i| self.coeffs[i] != other.coeffs[i])
    }

    pub fn truncate(&self, t_max: usize) -> Self {
        assert!(t_max <= self.t_max());
        TruncatedSeries { coeffs: self.coeffs[..=t_max].to_vec() }
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "-" } else { "+" };
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.unsigned_abs();
            match (i, a) {
                (0, _) => write!(f, "{a}")?,
                (1, 1) => write!(f, "t")?,
                (1, _) => write!(f, "{a}*t")?,
                (_, 1) => write!(f, "t^{i}")?,
                _ => write!(f, "{a}*t^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(t^{})", self.t_max() + 1)
    }
}

/// `(1 + t^i)^e` for odd `i`, `(1 - t^i)^{-e}` for even `i`.
fn deviation_factor(i: usize, e: u64, t_max: usize) -> Result<TruncatedSeries, Error> {
    let mut base = vec![0i128; t_max + 1];
    base[0] = 1;
    if i <= t_max {
        base[i] = if i % 2 == 1 { 1 } else { -1 };
    }
    let base = TruncatedSeries { coeffs: base };
    let mut out = TruncatedSeries::one(t_max);
    for _ in 0..e {
        out = out.mul(&base)?;
    }
    if i.is_multiple_of(2) {
        out = out.inverse()?;
    }
    Ok(out)
}

/// `P(t) = prod_i (1 + t^{2i-1})^{ε_{2i-1}} / (1 - t^{2i})^{ε_{2i}}` through `t^t_max`.
pub fn poincare_from_deviations(dev: &DeviationTable, t_max: usize) -> Result<TruncatedSeries, Error> {
    if (dev.window.hdeg_max as usize) < t_max {
        return Err(Error::InvalidSpec(format!(
            "deviations are known through degree {}, the series needs {t_max}",
            dev.window.hdeg_max
        )));
    }
    let mut p = TruncatedSeries::one(t_max);
    for i in 1..=t_max {
        p = p.mul(&deviation_factor(i, dev.total(i as u32), t_max)?)?;
    }
    Ok(p)
}

/// Inverse of [`poincare_from_deviations`]: `ε_1..=ε_{t_max}` peeled off degree by degree.
/// Fails if some would be negative (the series is not of that form).
pub fn deviations_from_series(p: &TruncatedSeries) -> Result<Vec<u64>, Error> {
    if p.coeff(0) != 1 {
        return Err(Error::InvalidSpec("a Poincaré series has constant term 1".into()));
    }
    let n = p.t_max();
    let mut rest = p.clone();
    let mut eps = Vec::with_capacity(n);
    for i in 1..=n {
        let e = rest.coeff(i);
        if e < 0 {
            return Err(Error::InvalidSpec(format!("negative deviation in degree {i}")));
        }
        eps.push(e as u64);
        rest = rest.div(&deviation_factor(i, e as u64, n)?)?;
    }
    Ok(eps)
}

/// Bigraded series `sum c_{i,j} t^i s^j` with `i <= hdeg_max`, `j <= ideg_max`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigradedSeries {
    window: Window,
    coeffs: BTreeMap<(u32, u32), i128>,
}

impl BigradedSeries {
    pub fn new(window: Window) -> Self {
        BigradedSeries { window, coeffs: BTreeMap::new() }
    }

    pub fn get(&self, i: u32, j: u32) -> i128 {
        self.coeffs.get(&(i, j)).copied().unwrap_or(0)
    }

    pub fn set(&mut self, i: u32, j: u32, v: i128) {
        if v == 0 {
            self.coeffs.remove(&(i, j));
        } else {
            self.coeffs.insert((i, j), v);
        }
    }

    /// Multiplies in place by `(1 + t^a s^b)` (`odd`) or `(1 - t^a s^b)`, or
    /// divides by it when `divide` is set.
    fn apply_factor(&mut self, a: u32, b: u32, odd: bool, divide: bool) {
        let w = self.window;
        let sign: i128 = if odd { 1 } else { -1 };
        let keys: Vec<(u32, u32)> = (0..=w.hdeg_max).flat_map(|i| (0..=w.ideg_max).map(move |j| (i, j))).collect();
        if divide {
            for &(i, j) in &keys {
                if i >= a && j >= b {
                    let v = self.get(i, j) - sign * self.get(i - a, j - b);
                    self.set(i, j, v);
                }
            }
        } else {
            for &(i, j) in keys.iter().rev() {
                if i >= a && j >= b {
                    let v = self.get(i, j) + sign * self.get(i - a, j - b);
                    self.set(i, j, v);
                }
            }
        }
    }
}

/// Bigraded deviations from a bigraded Poincaré series `sum dim Tor_{i,j} t^i s^j`,
/// peeling one factor per bidegree in increasing `(i, j)` order.
pub fn deviations_from_bigraded(p: &BigradedSeries) -> Result<DeviationTable, Error> {
    let w = p.window;
    let mut rest = p.clone();
    let mut table = DeviationTable::new(w, Provenance::SeriesInversionRoute);
    for i in 1..=w.hdeg_max {
        for j in 0..=w.ideg_max {
            let e = rest.get(i, j);
            if e < 0 {
                return Err(Error::InvalidSpec(format!("negative deviation in bidegree ({i},{j})")));
            }
            table.set(i, j, e as u64);
            let odd = i % 2 == 1;
            for _ in 0..e {
                rest.apply_factor(i, j, odd, odd);
            }
        }
    }
    Ok(table)
}
