//! Banded matrices in row-major band storage, with LU factorization
//! (partial pivoting) for the implicit solves.
//!
//! All operator matrices in this crate are narrow bands (`kl <= 2`,
//! `ku <= 3`), so band storage plus a banded LU keeps every solve `O(n)`.

use crate::error::CoreError;

/// Row-major banded matrix: entry `(i, j)` with `-kl <= j - i <= ku` lives at
/// `data[i * (kl + ku + 1) + (j - i + kl)]`.
#[derive(Debug, Clone, PartialEq)]
pub struct BandedMatrix {
    n: usize,
    kl: usize,
    ku: usize,
    data: Vec<f64>,
}

impl BandedMatrix {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        Self {
            n,
            kl,
            ku,
            data: vec![0.0; n * (kl + ku + 1)],
        }
    }

    /// Identity scaled by `s`.
    pub fn scaled_identity(n: usize, s: f64) -> Self {
        let mut m = Self::zeros(n, 0, 0);
        for i in 0..n {
            m.data[i] = s;
        }
        m
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn lower_bandwidth(&self) -> usize {
        self.kl
    }

    pub fn upper_bandwidth(&self) -> usize {
        self.ku
    }

    #[inline]
    fn band_index(&self, i: usize, j: usize) -> Option<usize> {
        let d = j as isize - i as isize;
        if d < -(self.kl as isize) || d > self.ku as isize {
            None
        } else {
            Some(i * (self.kl + self.ku + 1) + (d + self.kl as isize) as usize)
        }
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        match self.band_index(i, j) {
            Some(k) => self.data[k],
            None => 0.0,
        }
    }

    /// Sets entry `(i, j)`. Panics if the entry lies outside the band.
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        let k = self
            .band_index(i, j)
            .unwrap_or_else(|| panic!("entry ({i},{j}) outside band kl={} ku={}", self.kl, self.ku));
        self.data[k] = v;
    }

    /// Adds `v` to entry `(i, j)`. Panics if the entry lies outside the band.
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let k = self
            .band_index(i, j)
            .unwrap_or_else(|| panic!("entry ({i},{j}) outside band kl={} ku={}", self.kl, self.ku));
        self.data[k] += v;
    }

    pub fn scale(&mut self, s: f64) {
        for v in &mut self.data {
            *v *= s;
        }
    }

    /// Returns a copy widened to at least the requested bandwidths.
    pub fn with_bands(&self, kl: usize, ku: usize) -> Self {
        let kl = kl.max(self.kl);
        let ku = ku.max(self.ku);
        let mut out = Self::zeros(self.n, kl, ku);
        for i in 0..self.n {
            let lo = i.saturating_sub(self.kl);
            let hi = (i + self.ku).min(self.n - 1);
            for j in lo..=hi {
                let v = self.get(i, j);
                if v != 0.0 {
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// `self += s * other`, widening the band as needed.
    pub fn add_scaled(&self, other: &BandedMatrix, s: f64) -> Self {
        assert_eq!(self.n, other.n, "banded matrix size mismatch");
        let mut out = self.with_bands(other.kl, other.ku);
        for i in 0..self.n {
            let lo = i.saturating_sub(other.kl);
            let hi = (i + other.ku).min(self.n - 1);
            for j in lo..=hi {
                let v = other.get(i, j);
                if v != 0.0 {
                    out.add(i, j, s * v);
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.n, self.ku, self.kl);
        for i in 0..self.n {
            let lo = i.saturating_sub(self.kl);
            let hi = (i + self.ku).min(self.n - 1);
            for j in lo..=hi {
                let v = self.get(i, j);
                if v != 0.0 {
                    out.set(j, i, v);
                }
            }
        }
        out
    }

    /// `(A + A^T) / 2`. With the uniform-weight trapezoid inner product on
    /// interior unknowns this is the symmetric part in that inner product.
    pub fn symmetric_part(&self) -> Self {
        let k = self.kl.max(self.ku);
        let mut out = Self::zeros(self.n, k, k);
        for i in 0..self.n {
            let lo = i.saturating_sub(k);
            let hi = (i + k).min(self.n - 1);
            for j in lo..=hi {
                let v = 0.5 * (self.get(i, j) + self.get(j, i));
                if v != 0.0 {
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn matvec_into(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.n);
        assert_eq!(y.len(), self.n);
        let w = self.kl + self.ku + 1;
        for i in 0..self.n {
            let lo = i.saturating_sub(self.kl);
            let hi = (i + self.ku).min(self.n - 1);
            let row = &self.data[i * w..(i + 1) * w];
            let mut acc = 0.0;
            for j in lo..=hi {
                acc += row[j + self.kl - i] * x[j];
            }
            y[i] = acc;
        }
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        self.matvec_into(x, &mut y);
        y
    }

    /// Dense copy, for tests and small-matrix checks.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j)).collect())
            .collect()
    }

    /// Number of eigenvalues strictly greater than `sigma`, for a symmetric
    /// banded matrix, by Sylvester inertia: band Gaussian elimination of
    /// `A - sigma I` without pivoting equals an LDL^T factorization, and the
    /// signs of the pivots count the eigenvalues on each side of `sigma`.
    /// Vanishing pivots are floored at `eps * |A|` (counted as negative),
    /// the usual bisection safeguard.
    pub fn eigenvalue_count_above(&self, sigma: f64) -> usize {
        debug_assert_eq!(self.kl, self.ku, "inertia needs a symmetric band");
        let n = self.n;
        let mut w = self.clone();
        for i in 0..n {
            w.add(i, i, -sigma);
        }
        let mut anorm = 0.0f64;
        for v in &w.data {
            anorm = anorm.max(v.abs());
        }
        let floor = (f64::EPSILON * anorm).max(f64::MIN_POSITIVE);
        let mut count = 0usize;
        for i in 0..n {
            let mut piv = w.get(i, i);
            if piv.abs() < floor {
                piv = -floor;
            }
            if piv > 0.0 {
                count += 1;
            }
            let rmax = (i + self.kl).min(n - 1);
            for r in i + 1..=rmax {
                let f = w.get(r, i) / piv;
                if f != 0.0 {
                    let cmax = (i + self.ku).min(n - 1);
                    for c in r.saturating_sub(self.kl).max(i + 1)..=cmax {
                        let upd = w.get(r, c) - f * w.get(i, c);
                        w.set(r, c, upd);
                    }
                }
            }
        }
        count
    }

    /// Certified bracket `[lo, hi]` for the largest eigenvalue of a symmetric
    /// banded matrix, by inertia bisection from the Gershgorin bounds.
    pub fn symmetric_top_eigenvalue_bounds(&self, abs_tol: f64) -> (f64, f64) {
        debug_assert_eq!(self.kl, self.ku, "bounds need a symmetric band");
        let n = self.n;
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let jlo = i.saturating_sub(self.kl);
            let jhi = (i + self.ku).min(n - 1);
            let mut off = 0.0;
            for j in jlo..=jhi {
                if j != i {
                    off += self.get(i, j).abs();
                }
            }
            let d = self.get(i, i);
            lo = lo.min(d - off);
            hi = hi.max(d + off);
        }
        if !(lo < hi) {
            return (lo, lo);
        }
        let tol = abs_tol.max(1e-14 * (1.0 + hi.abs().max(lo.abs())));
        while hi - lo > tol {
            let mid = 0.5 * (lo + hi);
            if self.eigenvalue_count_above(mid) >= 1 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        (lo, hi)
    }

    /// LU factorization with partial pivoting (band storage, LAPACK-style
    /// column alignment with `kl` extra superdiagonals for pivot fill).
    pub fn factor(&self) -> Result<BandedLu, CoreError> {
        let n = self.n;
        let kl = self.kl;
        let ku = self.ku;
        let kw = ku + kl; // working upper bandwidth after pivoting
        let ld = kl + kw + 1;
        // Column-major working array: A(i,j) at work[j * ld + (kw + i - j)]
        // valid for j - kw <= i <= j + kl.
        let mut work = vec![0.0; n * ld];
        for i in 0..n {
            let lo = i.saturating_sub(kl);
            let hi = (i + ku).min(n - 1);
            for j in lo..=hi {
                work[j * ld + (kw + i - j)] = self.get(i, j);
            }
        }
        let mut pivots = vec![0usize; n];
        for k in 0..n {
            // pivot search in column k, rows k..=min(n-1, k+kl)
            let rmax = (k + kl).min(n - 1);
            let mut p = k;
            let mut best = work[k * ld + kw].abs();
            for r in (k + 1)..=rmax {
                let v = work[k * ld + (kw + r - k)].abs();
                if v > best {
                    best = v;
                    p = r;
                }
            }
            if best == 0.0 {
                return Err(CoreError::SingularMatrix { row: k });
            }
            pivots[k] = p;
            let cmax = (k + kw).min(n - 1);
            if p != k {
                for j in k..=cmax {
                    let a = j * ld + (kw + k - j);
                    let b = j * ld + (kw + p - j);
                    work.swap(a, b);
                }
            }
            let piv = work[k * ld + kw];
            for r in (k + 1)..=rmax {
                let idx = k * ld + (kw + r - k);
                let m = work[idx] / piv;
                work[idx] = m;
                if m != 0.0 {
                    for j in (k + 1)..=cmax {
                        let upper = work[j * ld + (kw + k - j)];
                        if upper != 0.0 {
                            work[j * ld + (kw + r - j)] -= m * upper;
                        }
                    }
                }
            }
        }
        Ok(BandedLu {
            n,
            kl,
            kw,
            ld,
            data: work,
            pivots,
        })
    }
}

/// Factored banded matrix; `solve` performs one forward/backward sweep.
#[derive(Debug, Clone)]
pub struct BandedLu {
    n: usize,
    kl: usize,
    kw: usize,
    ld: usize,
    data: Vec<f64>,
    pivots: Vec<usize>,
}

impl BandedLu {
    pub fn solve_in_place(&self, b: &mut [f64]) {
        assert_eq!(b.len(), self.n);
        let (n, kl, kw, ld) = (self.n, self.kl, self.kw, self.ld);
        // forward elimination with row swaps
        for k in 0..n {
            let p = self.pivots[k];
            if p != k {
                b.swap(k, p);
            }
            let rmax = (k + kl).min(n - 1);
            let bk = b[k];
            if bk != 0.0 {
                for r in (k + 1)..=rmax {
                    b[r] -= self.data[k * ld + (kw + r - k)] * bk;
                }
            }
        }
        // back substitution
        for k in (0..n).rev() {
            let cmax = (k + kw).min(n - 1);
            let mut acc = b[k];
            for j in (k + 1)..=cmax {
                acc -= self.data[j * ld + (kw + k - j)] * b[j];
            }
            b[k] = acc / self.data[k * ld + kw];
        }
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let mut x = b.to_vec();
        self.solve_in_place(&mut x);
        x
    }
}
