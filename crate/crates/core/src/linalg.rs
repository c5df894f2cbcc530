//! Integer linear algebra: Bareiss determinants and Smith forms over Z/p^m.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

/// Determinant of a square integer matrix by fraction-free elimination.
pub fn det_bareiss(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::from(1);
    }
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut sign = 1i32;
    let mut prev = BigInt::from(1);
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign < 0 {
        -d
    } else {
        d
    }
}

/// Arithmetic in Z/p^m on i128, enough for p^m below 2^62.
#[derive(Clone, Copy, Debug)]
pub struct PrimePowerRing {
    pub p: i128,
    pub m: u32,
    pub q: i128,
}

impl PrimePowerRing {
    pub fn new(p: u64, m: u32) -> Self {
        let q = (p as i128).checked_pow(m).expect("p^m overflows");
        assert!(q < (1i128 << 62), "p^m too large for word arithmetic");
        PrimePowerRing { p: p as i128, m, q }
    }

    pub fn reduce(&self, x: i128) -> i128 {
        x.rem_euclid(self.q)
    }

    pub fn mul(&self, a: i128, b: i128) -> i128 {
        (a * b).rem_euclid(self.q)
    }

    /// p-adic valuation of a residue, m for zero.
    pub fn val(&self, x: i128) -> u32 {
        let mut x = self.reduce(x);
        if x == 0 {
            return self.m;
        }
        let mut v = 0;
        while x % self.p == 0 {
            x /= self.p;
            v += 1;
        }
        v
    }

    pub fn inv(&self, a: i128) -> i128 {
        let (mut r0, mut r1) = (self.q, self.reduce(a));
        let (mut s0, mut s1) = (0i128, 1i128);
        while r1 != 0 {
            let t = r0 / r1;
            (r0, r1) = (r1, r0 - t * r1);
            (s0, s1) = (s1, s0 - t * s1);
        }
        assert_eq!(r0, 1, "not a unit mod p^m");
        self.reduce(s0)
    }
}

/// Smith form of an s x r matrix over Z/p^m, tracking column operations.
pub struct SmithModPrimePower {
    /// Valuation of each diagonal entry, one per column; m marks a zero column.
    pub diag: Vec<u32>,
    /// Invertible r x r matrix V with (row ops) * B * V diagonal.
    pub v: Vec<Vec<i128>>,
}

pub fn smith_mod_prime_power(b: &[Vec<i128>], cols: usize, ring: PrimePowerRing) -> SmithModPrimePower {
    let rows = b.len();
    let mut a: Vec<Vec<i128>> = b.iter().map(|r| r.iter().map(|&x| ring.reduce(x)).collect()).collect();
    let mut v: Vec<Vec<i128>> = (0..cols)
        .map(|i| (0..cols).map(|j| i128::from(i == j)).collect())
        .collect();
    let mut diag = vec![ring.m; cols];
    let col_op = |a: &mut Vec<Vec<i128>>, v: &mut Vec<Vec<i128>>, dst: usize, src: usize, c: i128| {
        // column dst += c * column src
        for row in a.iter_mut() {
            row[dst] = ring.reduce(row[dst] + ring.mul(c, row[src]));
        }
        for row in v.iter_mut() {
            row[dst] = ring.reduce(row[dst] + ring.mul(c, row[src]));
        }
    };
    for t in 0..rows.min(cols) {
        let mut best: Option<(u32, usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                let val = ring.val(a[i][j]);
                if val < ring.m && best.is_none_or(|b| val < b.0) {
                    best = Some((val, i, j));
                }
            }
        }
        let Some((val, pi, pj)) = best else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        for row in v.iter_mut() {
            row.swap(t, pj);
        }
        let pv = ring.p.pow(val);
        let unit = ring.inv(a[t][t] / pv);
        for row in a.iter_mut() {
            row[t] = ring.mul(row[t], unit);
        }
        for row in v.iter_mut() {
            row[t] = ring.mul(row[t], unit);
        }
        for i in 0..rows {
            if i != t && a[i][t] != 0 {
                let c = a[i][t] / pv;
                for j in 0..cols {
                    a[i][j] = ring.reduce(a[i][j] - ring.mul(c, a[t][j]));
                }
            }
        }
        for j in 0..cols {
            if j != t && a[t][j] != 0 {
                let c = a[t][j] / pv;
                col_op(&mut a, &mut v, j, t, -c);
            }
        }
        diag[t] = val;
    }
    SmithModPrimePower { diag, v }
}

/// Kernel of x -> Bx on (Z/p^m)^r: invariant-factor exponents (nonzero only)
/// and a generating set of column vectors.
pub fn kernel_mod_prime_power(b: &[Vec<i128>], cols: usize, ring: PrimePowerRing) -> (Vec<u32>, Vec<Vec<i128>>) {
    let snf = smith_mod_prime_power(b, cols, ring);
    let mut factors = Vec::new();
    let mut gens = Vec::new();
    for (j, &d) in snf.diag.iter().enumerate() {
        if d == 0 {
            continue;
        }
        factors.push(d);
        let scale = ring.p.pow(ring.m - d);
        gens.push((0..cols).map(|i| ring.mul(snf.v[i][j], scale)).collect());
    }
    factors.sort_unstable();
    (factors, gens)
}

/// Absolute value helper for determinant-derived norms.
pub fn abs(x: &BigInt) -> BigInt {
    x.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(m: &[&[i64]]) -> Vec<Vec<BigInt>> {
        m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn bareiss_matches_cofactor_expansion() {
        assert_eq!(det_bareiss(&big(&[&[2, 0], &[0, 3]])), BigInt::from(6));
        assert_eq!(det_bareiss(&big(&[&[0, 1], &[1, 0]])), BigInt::from(-1));
        assert_eq!(det_bareiss(&big(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 10]])), BigInt::from(-3));
        assert_eq!(det_bareiss(&big(&[&[1, 2], &[2, 4]])), BigInt::zero());
    }

    #[test]
    fn kernel_of_scalar_on_z25() {
        let ring = PrimePowerRing::new(5, 2);
        // multiplication by 5 on Z/25 has kernel 5Z/25 = Z/5
        let (f, g) = kernel_mod_prime_power(&[vec![5]], 1, ring);
        assert_eq!(f, vec![1]);
        assert_eq!(g, vec![vec![5]]);
        let (f, _) = kernel_mod_prime_power(&[vec![3]], 1, ring);
        assert!(f.is_empty());
        let (f, _) = kernel_mod_prime_power(&[vec![0]], 1, ring);
        assert_eq!(f, vec![2]);
    }

    #[test]
    fn kernel_generators_are_in_kernel() {
        let ring = PrimePowerRing::new(3, 3);
        let b = vec![vec![3, 6, 9], vec![0, 9, 18], vec![1, 1, 1]];
        let (f, gens) = kernel_mod_prime_power(&b, 3, ring);
        let size: u32 = f.iter().sum();
        // brute-force kernel size over (Z/27)^3
        let mut count = 0u32;
        for x in 0..27 {
            for y in 0..27 {
                for z in 0..27 {
                    if b.iter().all(|r| ring.reduce(r[0] * x + r[1] * y + r[2] * z) == 0) {
                        count += 1;
                    }
                }
            }
        }
        assert_eq!(3u32.pow(size), count);
        for g in gens {
            for r in &b {
                assert_eq!(ring.reduce((0..3).map(|i| r[i] * g[i]).sum()), 0);
            }
        }
    }
}
