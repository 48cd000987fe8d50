//! Symmetric positive definite band matrices with an in-place Cholesky
//! factorization. The assembled operators live on structured grids, so a
//! fixed bandwidth covers every coupling; no pivoting is used, which keeps
//! solves bitwise reproducible.

/// Lower band of a symmetric matrix, row-major: entry `(i, j)` with
/// `i - bw <= j <= i` is stored at `data[i * (bw + 1) + (j + bw - i)]`.
#[derive(Clone, Debug)]
pub(crate) struct BandMatrix {
    n: usize,
    bw: usize,
    data: Vec<f64>,
}

impl BandMatrix {
    pub fn new(n: usize, bw: usize) -> Self {
        BandMatrix {
            n,
            bw,
            data: vec![0.0; n * (bw + 1)],
        }
    }

    pub fn reset(&mut self) {
        self.data.fill(0.0);
    }

    #[inline]
    fn slot(&self, i: usize, j: usize) -> usize {
        debug_assert!(j <= i && i - j <= self.bw);
        i * (self.bw + 1) + (j + self.bw - i)
    }

    /// Accumulate into the symmetric entry `(i, j)`; callers may pass the
    /// indices in either order.
    #[inline]
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let (i, j) = if i >= j { (i, j) } else { (j, i) };
        let s = self.slot(i, j);
        self.data[s] += v;
    }

    pub fn max_diag(&self) -> f64 {
        (0..self.n).fold(0.0f64, |m, i| m.max(self.data[self.slot(i, i)]))
    }

    /// Attempt `L Lᵀ` factorization, optionally with a diagonal shift `mu`.
    /// Returns `None` on a non-positive pivot.
    pub fn cholesky(&self, mu: f64) -> Option<BandCholesky> {
        let (n, bw) = (self.n, self.bw);
        let w = bw + 1;
        let mut l = self.data.clone();
        if mu != 0.0 {
            for i in 0..n {
                l[i * w + bw] += mu;
            }
        }
        for i in 0..n {
            let j0 = i.saturating_sub(bw);
            for j in j0..=i {
                let k0 = j0.max(j.saturating_sub(bw));
                let mut s = l[i * w + (j + bw - i)];
                for k in k0..j {
                    s -= l[i * w + (k + bw - i)] * l[j * w + (k + bw - j)];
                }
                if j < i {
                    l[i * w + (j + bw - i)] = s / l[j * w + bw];
                } else {
                    if !(s > 0.0) || !s.is_finite() {
                        return None;
                    }
                    l[i * w + bw] = s.sqrt();
                }
            }
        }
        Some(BandCholesky { n, bw, l })
    }
}

pub(crate) struct BandCholesky {
    n: usize,
    bw: usize,
    l: Vec<f64>,
}

impl BandCholesky {
    /// Solve `A x = b` via the two triangular sweeps.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let (n, bw) = (self.n, self.bw);
        let w = bw + 1;
        let mut x = b.to_vec();
        for i in 0..n {
            let j0 = i.saturating_sub(bw);
            let mut s = x[i];
            for j in j0..i {
                s -= self.l[i * w + (j + bw - i)] * x[j];
            }
            x[i] = s / self.l[i * w + bw];
        }
        for i in (0..n).rev() {
            let jend = (i + bw).min(n - 1);
            let mut s = x[i];
            for j in i + 1..=jend {
                s -= self.l[j * w + (i + bw - j)] * x[j];
            }
            x[i] = s / self.l[i * w + bw];
        }
        x
    }
}
