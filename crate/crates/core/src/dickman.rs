//! The Dickman function `rho`: `rho(u) = 1` on `[0, 1]` and
//! `u rho'(u) + rho(u - 1) = 0` for `u > 1`.
//!
//! The table is built one unit interval at a time from the integral form
//! `rho(u) = rho(k) - int_k^u rho(t - 1) / t dt`. On each interval the
//! solution is sampled at Chebyshev-Lobatto points (each sample an adaptive
//! Simpson integral against the already-built previous interval) and
//! stored as a fixed-degree Chebyshev expansion. Intervals whose expansion
//! does not meet the tolerance are bisected.

use std::sync::{Arc, RwLock};

use crate::error::{Error, Result};

/// Degree of the Chebyshev expansion on every piece.
pub const PIECE_DEGREE: usize = 24;
pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_U_MAX: f64 = 20.0;
pub const MAX_U_MAX: f64 = 50.0;
pub const MIN_TOL: f64 = 1e-14;
pub const MAX_TOL: f64 = 1e-6;

/// Smallest width a piece may be bisected down to.
const MIN_PIECE_WIDTH: f64 = 1.0 / 256.0;
const MAX_SIMPSON_DEPTH: u32 = 40;

/// Quadrature settings used while building a [`DickmanTable`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSettings {
    /// Every adaptive Simpson integral is split at least this many times.
    pub min_depth: u32,
    /// Absolute tolerance of each adaptive Simpson integral, relative to the
    /// table tolerance.
    pub relative_tol: f64,
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        QuadratureSettings {
            min_depth: 2,
            relative_tol: 1e-4,
        }
    }
}

#[derive(Debug, Clone)]
struct Piece {
    a: f64,
    b: f64,
    coeffs: [f64; PIECE_DEGREE + 1],
}

impl Piece {
    #[inline]
    fn eval(&self, u: f64) -> f64 {
        let x = (2.0 * u - self.a - self.b) / (self.b - self.a);
        clenshaw(&self.coeffs, x)
    }
}

/// Piecewise Chebyshev representation of `rho` on `[0, u_max]`.
#[derive(Debug, Clone)]
pub struct DickmanTable {
    u_max: f64,
    tol: f64,
    pieces: Vec<Piece>,
}

impl DickmanTable {
    /// Builds a table valid on `[0, u_max]` with absolute accuracy `tol`.
    pub fn new(u_max: f64, tol: f64) -> Result<Self> {
        Self::with_quadrature(u_max, tol, QuadratureSettings::default())
    }

    pub fn with_quadrature(u_max: f64, tol: f64, quad: QuadratureSettings) -> Result<Self> {
        if !(1.0..=MAX_U_MAX).contains(&u_max) {
            return Err(Error::arg(format!(
                "u_max = {u_max} outside [1, {MAX_U_MAX}]"
            )));
        }
        if !(MIN_TOL..=MAX_TOL).contains(&tol) {
            return Err(Error::arg(format!(
                "tol = {tol} outside [{MIN_TOL}, {MAX_TOL}]"
            )));
        }
        let mut table = DickmanTable {
            u_max,
            tol,
            pieces: Vec::new(),
        };
        let quad_tol = (tol * quad.relative_tol).max(1e-17);
        let last = u_max.ceil() as u32;
        for k in 1..last {
            let mut pending = vec![(k as f64, k as f64 + 1.0)];
            while let Some((a, b)) = pending.pop() {
                let start = table.eval_built(a);
                let piece = table.fit_piece(a, b, start, quad_tol, quad.min_depth);
                if b - a > MIN_PIECE_WIDTH && !table.piece_accurate(&piece, quad_tol, quad.min_depth) {
                    let m = 0.5 * (a + b);
                    // stack order keeps pieces ascending
                    pending.push((m, b));
                    pending.push((a, m));
                } else {
                    table.pieces.push(piece);
                }
            }
        }
        Ok(table)
    }

    pub fn u_max(&self) -> f64 {
        self.u_max
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn piece_count(&self) -> usize {
        self.pieces.len()
    }

    /// `rho(u)` for `0 <= u <= u_max`.
    pub fn eval(&self, u: f64) -> Result<f64> {
        if !(u >= 0.0) {
            return Err(Error::arg(format!("rho is defined for u >= 0, got {u}")));
        }
        if u > self.u_max {
            return Err(Error::arg(format!(
                "u = {u} beyond the table range [0, {}]",
                self.u_max
            )));
        }
        Ok(self.eval_built(u))
    }

    /// Evaluation over the pieces built so far; callers guarantee `u` is
    /// covered.
    fn eval_built(&self, u: f64) -> f64 {
        if u <= 1.0 {
            return 1.0;
        }
        let i = self.pieces.partition_point(|p| p.b < u);
        let piece = &self.pieces[i.min(self.pieces.len() - 1)];
        piece.eval(u)
    }

    /// `rho(start) - int_a^x rho(t - 1)/t dt` at the Lobatto points of `[a, b]`.
    fn fit_piece(&self, a: f64, b: f64, start: f64, quad_tol: f64, min_depth: u32) -> Piece {
        let n = PIECE_DEGREE;
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        let values: Vec<f64> = (0..=n)
            .map(|j| {
                // j = n is the left endpoint
                let x = mid + half * (std::f64::consts::PI * j as f64 / n as f64).cos();
                if j == n {
                    start
                } else {
                    start - self.integral_from(a, x, quad_tol, min_depth)
                }
            })
            .collect();
        let mut coeffs = [0.0; PIECE_DEGREE + 1];
        let nf = n as f64;
        for (m, c) in coeffs.iter_mut().enumerate() {
            let mut s = 0.0;
            for (j, &v) in values.iter().enumerate() {
                let w = if j == 0 || j == n { 0.5 } else { 1.0 };
                s += w * v * (std::f64::consts::PI * (m * j) as f64 / nf).cos();
            }
            *c = 2.0 * s / nf;
        }
        coeffs[0] *= 0.5;
        coeffs[n] *= 0.5;
        Piece { a, b, coeffs }
    }

    fn integral_from(&self, a: f64, x: f64, quad_tol: f64, min_depth: u32) -> f64 {
        let f = |t: f64| self.eval_built(t - 1.0) / t;
        adaptive_simpson(&f, a, x, quad_tol, min_depth)
    }

    /// Accepts a piece when its trailing coefficients are negligible and it
    /// reproduces directly integrated values between the nodes.
    fn piece_accurate(&self, piece: &Piece, quad_tol: f64, min_depth: u32) -> bool {
        let n = PIECE_DEGREE;
        let tail = piece.coeffs[n].abs() + piece.coeffs[n - 1].abs();
        if tail > 0.01 * self.tol {
            return false;
        }
        let start = piece.coeffs_value_at_left();
        let mid = 0.5 * (piece.a + piece.b);
        let half = 0.5 * (piece.b - piece.a);
        [0.5, 6.5, 12.5, 18.5, 23.5].iter().all(|&j| {
            let x = mid + half * (std::f64::consts::PI * j / n as f64).cos();
            let direct = start - self.integral_from(piece.a, x, quad_tol, min_depth);
            (piece.eval(x) - direct).abs() <= 0.1 * self.tol
        })
    }
}

impl Piece {
    fn coeffs_value_at_left(&self) -> f64 {
        clenshaw(&self.coeffs, -1.0)
    }
}

/// Builds a table; see [`DickmanTable::new`].
pub fn build_rho_table(u_max: f64, tol: f64) -> Result<DickmanTable> {
    DickmanTable::new(u_max, tol)
}

fn clenshaw(coeffs: &[f64], x: f64) -> f64 {
    let mut b1 = 0.0;
    let mut b2 = 0.0;
    for &c in coeffs[1..].iter().rev() {
        let b0 = 2.0 * x * b1 - b2 + c;
        b2 = b1;
        b1 = b0;
    }
    x * b1 - b2 + coeffs[0]
}

/// Adaptive Simpson quadrature with absolute tolerance `eps`, splitting at
/// least `min_depth` times.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, eps: f64, min_depth: u32) -> f64 {
    if a == b {
        return 0.0;
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, eps, 0, min_depth)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    eps: f64,
    depth: u32,
    min_depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    let floor = 4.0 * f64::EPSILON * (left + right).abs();
    if depth >= min_depth && (depth >= MAX_SIMPSON_DEPTH || delta.abs() <= 15.0 * eps.max(floor)) {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, 0.5 * eps, depth + 1, min_depth)
        + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * eps, depth + 1, min_depth)
}

static SHARED: RwLock<Option<Arc<DickmanTable>>> = RwLock::new(None);

/// Process-wide table at [`DEFAULT_TOL`] covering at least `[0, u]`,
/// extended on demand up to [`MAX_U_MAX`].
pub fn shared_table(u: f64) -> Result<Arc<DickmanTable>> {
    if let Some(t) = SHARED.read().expect("dickman table lock").as_ref() {
        if t.u_max() >= u {
            return Ok(Arc::clone(t));
        }
    }
    if u > MAX_U_MAX {
        return Err(Error::arg(format!(
            "rho requested at u = {u}, beyond the supported range [0, {MAX_U_MAX}]"
        )));
    }
    let mut guard = SHARED.write().expect("dickman table lock");
    if let Some(t) = guard.as_ref() {
        if t.u_max() >= u {
            return Ok(Arc::clone(t));
        }
    }
    let current = guard.as_ref().map_or(DEFAULT_U_MAX, |t| t.u_max());
    let u_max = current.max(u.ceil()).min(MAX_U_MAX);
    let table = Arc::new(DickmanTable::new(u_max, DEFAULT_TOL)?);
    *guard = Some(Arc::clone(&table));
    Ok(table)
}

/// `rho(u)` to [`DEFAULT_TOL`].
pub fn rho(u: f64) -> Result<f64> {
    if !(u >= 0.0) {
        return Err(Error::arg(format!("rho is defined for u >= 0, got {u}")));
    }
    if u <= 1.0 {
        return Ok(1.0);
    }
    shared_table(u)?.eval(u)
}
