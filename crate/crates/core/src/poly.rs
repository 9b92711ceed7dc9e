//! Dense complex polynomials in one and two variables, just enough for
//! resultant elimination of small bilinear systems.

use std::ops::{Add, Mul, Neg, Sub};

use crate::error::Result;
use crate::linalg;
use crate::tensor::{CMatrix, C64};

const ZERO: C64 = C64::new(0.0, 0.0);

/// Univariate polynomial, coefficients in ascending degree.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly(pub Vec<C64>);

impl Poly {
    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn constant(c: C64) -> Self {
        Poly(vec![c])
    }

    /// `a + b x`.
    pub fn linear(a: C64, b: C64) -> Self {
        Poly(vec![a, b])
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.0
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, c| m.max(c.norm()))
    }

    /// Degree after dropping leading coefficients below `rel * max|c|`;
    /// `None` for the zero polynomial.
    pub fn degree(&self, rel: f64) -> Option<usize> {
        let top = self.max_abs();
        if top == 0.0 {
            return None;
        }
        self.0.iter().rposition(|c| c.norm() > rel * top)
    }

    pub fn trimmed(&self, rel: f64) -> Self {
        match self.degree(rel) {
            None => Poly::zero(),
            Some(d) => Poly(self.0[..=d].to_vec()),
        }
    }

    pub fn eval(&self, x: C64) -> C64 {
        self.0.iter().rev().fold(ZERO, |acc, &c| acc * x + c)
    }

    pub fn scale(&self, k: C64) -> Self {
        Poly(self.0.iter().map(|&c| c * k).collect())
    }

    /// Roots from the eigenvalues of the companion matrix. Leading
    /// coefficients below `rel * max|c|` are treated as zero.
    pub fn roots(&self, rel: f64) -> Result<Vec<C64>> {
        let p = self.trimmed(rel);
        let d = match p.degree(0.0) {
            None | Some(0) => return Ok(Vec::new()),
            Some(d) => d,
        };
        let lead = p.0[d];
        let mut comp = CMatrix::zeros(d, d);
        for i in 1..d {
            comp[(i, i - 1)] = C64::new(1.0, 0.0);
        }
        for i in 0..d {
            comp[(i, d - 1)] = -p.0[i] / lead;
        }
        linalg::general_eigenvalues(&comp)
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.0.len().max(rhs.0.len());
        Poly(
            (0..n)
                .map(|i| {
                    self.0.get(i).copied().unwrap_or(ZERO) + rhs.0.get(i).copied().unwrap_or(ZERO)
                })
                .collect(),
        )
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly(self.0.iter().map(|c| -c).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.0.is_empty() || rhs.0.is_empty() {
            return Poly::zero();
        }
        let mut out = vec![ZERO; self.0.len() + rhs.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in rhs.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly(out)
    }
}

/// Polynomial in `(s, t)` stored as a polynomial in `t` whose coefficients
/// are polynomials in `s`.
#[derive(Clone, Debug, PartialEq)]
pub struct BiPoly(pub Vec<Poly>);

impl BiPoly {
    pub fn zero() -> Self {
        BiPoly(Vec::new())
    }

    /// `a + b s + c t`.
    pub fn affine(a: C64, b: C64, c: C64) -> Self {
        BiPoly(vec![Poly::linear(a, b), Poly::constant(c)])
    }

    /// Coefficient of `t^j`, as a polynomial in `s`.
    pub fn t_coeff(&self, j: usize) -> Poly {
        self.0.get(j).cloned().unwrap_or_else(Poly::zero)
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, p| m.max(p.max_abs()))
    }

    /// Specialize `s`, leaving a polynomial in `t`.
    pub fn at_s(&self, s: C64) -> Poly {
        Poly(self.0.iter().map(|p| p.eval(s)).collect())
    }
}

impl Add for &BiPoly {
    type Output = BiPoly;
    fn add(self, rhs: &BiPoly) -> BiPoly {
        let n = self.0.len().max(rhs.0.len());
        BiPoly((0..n).map(|j| &self.t_coeff(j) + &rhs.t_coeff(j)).collect())
    }
}

impl Sub for &BiPoly {
    type Output = BiPoly;
    fn sub(self, rhs: &BiPoly) -> BiPoly {
        let n = self.0.len().max(rhs.0.len());
        BiPoly((0..n).map(|j| &self.t_coeff(j) - &rhs.t_coeff(j)).collect())
    }
}

impl Mul for &BiPoly {
    type Output = BiPoly;
    fn mul(self, rhs: &BiPoly) -> BiPoly {
        if self.0.is_empty() || rhs.0.is_empty() {
            return BiPoly::zero();
        }
        let mut out = vec![Poly::zero(); self.0.len() + rhs.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in rhs.0.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        BiPoly(out)
    }
}

/// Determinant of a 3x3 matrix of bivariate polynomials.
pub fn det3(m: &[[BiPoly; 3]; 3]) -> BiPoly {
    let minor = |r1: usize, r2: usize, c1: usize, c2: usize| {
        &(&m[r1][c1] * &m[r2][c2]) - &(&m[r1][c2] * &m[r2][c1])
    };
    let a = &m[0][0] * &minor(1, 2, 1, 2);
    let b = &m[0][1] * &minor(1, 2, 0, 2);
    let c = &m[0][2] * &minor(1, 2, 0, 1);
    &(&a - &b) + &c
}

/// Determinant of a square matrix with polynomial entries by Laplace
/// expansion along rows, memoized over the set of used columns.
#[allow(clippy::needless_range_loop)] // `col` also drives the bitmask
pub fn poly_det(m: &[Vec<Poly>]) -> Poly {
    let n = m.len();
    if n == 0 {
        return Poly::constant(C64::new(1.0, 0.0));
    }
    assert!(n <= 16, "polynomial determinant limited to 16x16");
    // dp[mask] = determinant of rows 0..popcount(mask) restricted to columns in mask
    let mut dp: Vec<Option<Poly>> = vec![None; 1 << n];
    dp[0] = Some(Poly::constant(C64::new(1.0, 0.0)));
    for mask in 1usize..(1 << n) {
        let row = mask.count_ones() as usize - 1;
        let mut acc = Poly::zero();
        for col in 0..n {
            if mask & (1 << col) == 0 {
                continue;
            }
            let rest = mask & !(1 << col);
            let above = (mask & ((1 << col) - 1)).count_ones() as usize;
            if m[row][col].0.iter().all(|c| *c == ZERO) {
                continue;
            }
            if let Some(sub) = &dp[rest] {
                let term = &m[row][col] * sub;
                // the entry sits in the last row of this minor, after `above`
                // chosen columns
                let sign_odd = (row + above) % 2 == 1;
                acc = if sign_odd { &acc - &term } else { &acc + &term };
            }
        }
        dp[mask] = Some(acc);
    }
    dp[(1 << n) - 1].take().expect("full mask computed")
}

/// Resultant in `t` of `f` and `g`, taking their formal `t`-degrees as
/// `df` and `dg`, as a polynomial in `s`.
pub fn resultant_t(f: &BiPoly, g: &BiPoly, df: usize, dg: usize) -> Poly {
    let size = df + dg;
    if size == 0 {
        return Poly::constant(C64::new(1.0, 0.0));
    }
    let mut rows = vec![vec![Poly::zero(); size]; size];
    // Sylvester layout with descending powers of t.
    for r in 0..dg {
        for j in 0..=df {
            rows[r][r + j] = f.t_coeff(df - j);
        }
    }
    for r in 0..df {
        for j in 0..=dg {
            rows[dg + r][r + j] = g.t_coeff(dg - j);
        }
    }
    poly_det(&rows)
}

/// Merges values closer than `tol`, averaging each cluster. Deterministic for
/// a given input order.
pub fn cluster(values: &[C64], tol: f64) -> Vec<C64> {
    let mut groups: Vec<(C64, usize)> = Vec::new();
    for &v in values {
        match groups
            .iter_mut()
            .find(|(c, k)| (*c / *k as f64 - v).norm() < tol)
        {
            Some((sum, k)) => {
                *sum += v;
                *k += 1;
            }
            None => groups.push((v, 1)),
        }
    }
    groups.into_iter().map(|(s, k)| s / k as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    fn sorted_re(mut v: Vec<C64>) -> Vec<f64> {
        v.sort_by(|a, b| a.re.total_cmp(&b.re));
        v.iter().map(|z| z.re).collect()
    }

    #[test]
    fn roots_of_cubic() {
        // (x-1)(x-2)(x+3) = x^3 - 7x + 6
        let p = Poly(vec![r(6.0), r(-7.0), r(0.0), r(1.0)]);
        let roots = sorted_re(p.roots(1e-14).unwrap());
        for (got, want) in roots.iter().zip([-3.0, 1.0, 2.0]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn complex_roots() {
        // x^2 + 1
        let p = Poly(vec![r(1.0), r(0.0), r(1.0)]);
        let mut roots = p.roots(1e-14).unwrap();
        roots.sort_by(|a, b| a.im.total_cmp(&b.im));
        assert!((roots[0] - C64::new(0.0, -1.0)).norm() < 1e-12);
        assert!((roots[1] - C64::new(0.0, 1.0)).norm() < 1e-12);
    }

    #[test]
    fn determinant_matches_direct_expansion() {
        let c = |v: f64| Poly::constant(r(v));
        let m = vec![
            vec![c(2.0), c(-1.0), c(0.0)],
            vec![c(1.0), c(3.0), c(4.0)],
            vec![c(0.5), c(0.0), c(-2.0)],
        ];
        // 2(3*-2 - 0) - (-1)(1*-2 - 4*0.5) + 0 = -12 - 4 = -16
        let d = poly_det(&m);
        assert!((d.eval(r(0.0)) - r(-16.0)).norm() < 1e-12);

        let x = Poly::linear(r(0.0), r(1.0));
        // det [[x, 1], [1, x]] = x^2 - 1
        let d = poly_det(&[vec![x.clone(), c(1.0)], vec![c(1.0), x]]);
        assert!((d.eval(r(3.0)) - r(8.0)).norm() < 1e-12);
    }

    #[test]
    fn resultant_detects_common_roots() {
        // f = t - s, g = t^2 - 1: resultant vanishes where s = +-1
        let f = BiPoly(vec![Poly::linear(r(0.0), r(-1.0)), Poly::constant(r(1.0))]);
        let g = BiPoly(vec![
            Poly::constant(r(-1.0)),
            Poly::zero(),
            Poly::constant(r(1.0)),
        ]);
        let res = resultant_t(&f, &g, 1, 2);
        assert_eq!(res.degree(1e-14), Some(2));
        let roots = sorted_re(res.roots(1e-14).unwrap());
        assert!((roots[0] + 1.0).abs() < 1e-12 && (roots[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn resultant_of_shared_factor_is_zero() {
        // f = (t - s)(t + 1), g = (t - s)(t - 2)
        let ts = BiPoly(vec![Poly::linear(r(0.0), r(-1.0)), Poly::constant(r(1.0))]);
        let a = BiPoly(vec![Poly::constant(r(1.0)), Poly::constant(r(1.0))]);
        let b = BiPoly(vec![Poly::constant(r(-2.0)), Poly::constant(r(1.0))]);
        let res = resultant_t(&(&ts * &a), &(&ts * &b), 2, 2);
        assert!(res.max_abs() < 1e-12);
    }

    #[test]
    fn det3_of_affine_entries() {
        let one = BiPoly::affine(r(1.0), r(0.0), r(0.0));
        let zero = BiPoly::zero();
        let s = BiPoly::affine(r(0.0), r(1.0), r(0.0));
        let t = BiPoly::affine(r(0.0), r(0.0), r(1.0));
        // diag(s, t, 1) -> s t
        let m = [
            [s.clone(), zero.clone(), zero.clone()],
            [zero.clone(), t.clone(), zero.clone()],
            [zero.clone(), zero, one],
        ];
        let d = det3(&m);
        assert!((d.at_s(r(2.0)).eval(r(5.0)) - r(10.0)).norm() < 1e-12);
    }

    #[test]
    fn clustering_merges_close_values() {
        let v = [r(1.0), r(1.0 + 1e-9), r(2.0), r(1.0 - 1e-9)];
        let c = cluster(&v, 1e-7);
        assert_eq!(c.len(), 2);
        assert!((c[0] - r(1.0)).norm() < 1e-12);
    }
}
