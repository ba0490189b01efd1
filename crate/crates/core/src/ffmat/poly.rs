use std::fmt;

use rand::Rng;

use super::field::PrimeField;
use super::matrix::Matrix;
use crate::error::{Error, Result};

/// Univariate polynomial over `F_p`, coefficients in ascending degree with
/// no trailing zeros (the zero polynomial has no coefficients).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    field: PrimeField,
    coeffs: Vec<u32>,
}

impl Poly {
    pub fn new(field: PrimeField, mut coeffs: Vec<u32>) -> Self {
        for c in coeffs.iter_mut() {
            *c %= field.p();
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Self { field, coeffs }
    }

    pub fn from_i64(field: PrimeField, coeffs: &[i64]) -> Self {
        Self::new(field, coeffs.iter().map(|&c| field.reduce(c)).collect())
    }

    pub fn zero(field: PrimeField) -> Self {
        Self { field, coeffs: vec![] }
    }

    pub fn one(field: PrimeField) -> Self {
        Self::constant(field, 1)
    }

    pub fn constant(field: PrimeField, c: u32) -> Self {
        Self::new(field, vec![c])
    }

    /// The monomial `x`.
    pub fn x(field: PrimeField) -> Self {
        Self::new(field, vec![0, 1])
    }

    /// `x - c`
    pub fn linear(field: PrimeField, c: u32) -> Self {
        Self::new(field, vec![field.neg(c), 1])
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> u32 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == 1
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.field.inv(self.leading());
        self.scale(inv)
    }

    pub fn scale(&self, c: u32) -> Poly {
        let f = self.field;
        Poly::new(f, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn add(&self, rhs: &Poly) -> Poly {
        let f = self.field;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let c = (0..n)
            .map(|i| f.add(self.coeff(i), rhs.coeff(i)))
            .collect();
        Poly::new(f, c)
    }

    pub fn sub(&self, rhs: &Poly) -> Poly {
        let f = self.field;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let c = (0..n)
            .map(|i| f.sub(self.coeff(i), rhs.coeff(i)))
            .collect();
        Poly::new(f, c)
    }

    pub fn coeff(&self, i: usize) -> u32 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn mul(&self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(self.field);
        }
        let f = self.field;
        let mut out = vec![0u32; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = f.mul_add(out[i + j], a, b);
            }
        }
        Poly::new(f, out)
    }

    pub fn pow(&self, mut e: u64) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Euclidean division. Panics on division by zero.
    pub fn divrem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let f = self.field;
        let dd = d.coeffs.len() - 1;
        if self.coeffs.len() < d.coeffs.len() {
            return (Poly::zero(f), self.clone());
        }
        let inv_lead = f.inv(d.leading());
        let mut r = self.coeffs.clone();
        let mut q = vec![0u32; self.coeffs.len() - dd];
        for i in (0..q.len()).rev() {
            let c = f.mul(r[i + dd], inv_lead);
            q[i] = c;
            if c == 0 {
                continue;
            }
            for (j, &b) in d.coeffs.iter().enumerate() {
                r[i + j] = f.sub(r[i + j], f.mul(c, b));
            }
        }
        r.truncate(dd);
        (Poly::new(f, q), Poly::new(f, r))
    }

    pub fn rem(&self, d: &Poly) -> Poly {
        self.divrem(d).1
    }

    /// Monic gcd (zero if both are zero).
    pub fn gcd(&self, rhs: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), rhs.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Returns `(g, s, t)` with `s*self + t*rhs = g` and `g` monic.
    pub fn ext_gcd(&self, rhs: &Poly) -> (Poly, Poly, Poly) {
        let f = self.field;
        let (mut r0, mut r1) = (self.clone(), rhs.clone());
        let (mut s0, mut s1) = (Poly::one(f), Poly::zero(f));
        let (mut t0, mut t1) = (Poly::zero(f), Poly::one(f));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            let s = s0.sub(&q.mul(&s1));
            let t = t0.sub(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
            t0 = t1;
            t1 = t;
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = f.inv(r0.leading());
        (r0.scale(inv), s0.scale(inv), t0.scale(inv))
    }

    pub fn mul_mod(&self, rhs: &Poly, m: &Poly) -> Poly {
        self.mul(rhs).rem(m)
    }

    pub fn pow_mod(&self, mut e: u128, m: &Poly) -> Poly {
        let mut base = self.rem(m);
        let mut acc = Poly::one(self.field).rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_mod(&base, m);
            }
            base = base.mul_mod(&base, m);
            e >>= 1;
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        let f = self.field;
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &a)| f.mul(a, (i as u64 % f.p() as u64) as u32))
            .collect();
        Poly::new(f, c)
    }

    pub fn eval(&self, x: u32) -> u32 {
        let f = self.field;
        self.coeffs.iter().rev().fold(0, |acc, &c| f.mul_add(c, acc, x))
    }

    /// Evaluate at a square matrix (Horner).
    pub fn eval_matrix(&self, m: &Matrix) -> Matrix {
        assert!(m.is_square());
        let f = self.field;
        let n = m.rows();
        let mut acc = Matrix::zeros(f, n, n);
        for &c in self.coeffs.iter().rev() {
            acc = acc.mul(m);
            for i in 0..n {
                acc[(i, i)] = f.add(acc[(i, i)], c);
            }
        }
        acc
    }

    /// `p`-th root of a polynomial whose derivative vanishes.
    fn pth_root(&self) -> Poly {
        let p = self.field.p() as usize;
        let c = self.coeffs.iter().step_by(p).copied().collect();
        // over a prime field the Frobenius is the identity on coefficients
        Poly::new(self.field, c)
    }

    /// Factor into monic irreducibles with multiplicities, sorted by
    /// (degree, coefficients). The leading coefficient is dropped.
    pub fn factor<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Vec<(Poly, usize)>> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let mut out: Vec<(Poly, usize)> = Vec::new();
        for (sqf, mult) in self.monic().squarefree_decomposition() {
            for (deg, part) in sqf.distinct_degree() {
                for irr in part.equal_degree(deg, rng) {
                    out.push((irr, mult));
                }
            }
        }
        // merge duplicates (possible when p | multiplicity)
        out.sort_by(|a, b| a.0.sort_key().cmp(&b.0.sort_key()));
        let mut merged: Vec<(Poly, usize)> = Vec::new();
        for (q, m) in out {
            match merged.last_mut() {
                Some((last, lm)) if *last == q => *lm += m,
                _ => merged.push((q, m)),
            }
        }
        Ok(merged)
    }

    fn sort_key(&self) -> (usize, Vec<u32>) {
        (self.coeffs.len(), self.coeffs.iter().rev().copied().collect())
    }

    /// Squarefree decomposition of a monic polynomial: pairs
    /// `(squarefree factor, multiplicity)` with pairwise coprime factors.
    pub fn squarefree_decomposition(&self) -> Vec<(Poly, usize)> {
        let f = self.field;
        let p = f.p() as usize;
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let d = self.derivative();
        if d.is_zero() {
            for (q, m) in self.pth_root().squarefree_decomposition() {
                out.push((q, m * p));
            }
            return out;
        }
        let mut c = self.gcd(&d);
        let mut w = self.divrem(&c).0;
        let mut i = 1;
        while w.degree().unwrap_or(0) > 0 {
            let y = w.gcd(&c);
            let z = w.divrem(&y).0;
            if z.degree().unwrap_or(0) > 0 {
                out.push((z.monic(), i));
            }
            i += 1;
            w = y;
            c = c.divrem(&w).0;
        }
        if c.degree().unwrap_or(0) > 0 {
            for (q, m) in c.monic().pth_root().squarefree_decomposition() {
                out.push((q, m * p));
            }
        }
        out
    }

    /// Distinct-degree factorization of a monic squarefree polynomial.
    fn distinct_degree(&self) -> Vec<(usize, Poly)> {
        let f = self.field;
        let mut out = Vec::new();
        let mut rest = self.clone();
        let x = Poly::x(f);
        let mut h = x.clone();
        let mut d = 0;
        while rest.degree().unwrap_or(0) >= 2 * (d + 1) {
            d += 1;
            h = h.pow_mod(f.p() as u128, &rest);
            let g = h.sub(&x).gcd(&rest);
            if g.degree().unwrap_or(0) > 0 {
                out.push((d, g.clone()));
                rest = rest.divrem(&g).0;
                h = h.rem(&rest);
            }
        }
        if let Some(deg) = rest.degree() {
            if deg > 0 {
                out.push((deg, rest.monic()));
            }
        }
        out
    }

    /// Equal-degree splitting (Cantor-Zassenhaus; trace map for p = 2).
    fn equal_degree<R: Rng + ?Sized>(&self, d: usize, rng: &mut R) -> Vec<Poly> {
        let n = self.degree().unwrap_or(0);
        if n == d {
            return vec![self.monic()];
        }
        let f = self.field;
        loop {
            let a = Poly::new(f, (0..n).map(|_| f.random(rng)).collect());
            if a.degree().unwrap_or(0) == 0 {
                continue;
            }
            let g = a.gcd(self);
            let g = if g.degree().unwrap_or(0) > 0 {
                g
            } else {
                let b = if f.p() == 2 {
                    // a + a^2 + ... + a^(2^(d-1))
                    let mut term = a.rem(self);
                    let mut acc = term.clone();
                    for _ in 1..d {
                        term = term.mul_mod(&term, self);
                        acc = acc.add(&term);
                    }
                    acc
                } else {
                    let e = ((f.p() as u128).pow(d as u32) - 1) / 2;
                    a.pow_mod(e, self).sub(&Poly::one(f))
                };
                b.gcd(self)
            };
            let gd = g.degree().unwrap_or(0);
            if gd > 0 && gd < n {
                let mut out = g.equal_degree(d, rng);
                out.extend(self.divrem(&g).0.equal_degree(d, rng));
                return out;
            }
        }
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (i, c) {
                (0, _) => write!(f, "{c}")?,
                (1, 1) => write!(f, "x")?,
                (1, _) => write!(f, "{c}x")?,
                (_, 1) => write!(f, "x^{i}")?,
                _ => write!(f, "{c}x^{i}")?,
            }
        }
        Ok(())
    }
}

/// Characteristic polynomial `det(xI - m)` via reduction to Hessenberg form.
pub fn char_poly(m: &Matrix) -> Poly {
    assert!(m.is_square(), "char_poly needs a square matrix");
    let f = m.field();
    let n = m.rows();
    let mut h = m.clone();
    // similarity reduction to upper Hessenberg form
    for j in 0..n.saturating_sub(2) {
        let Some(piv) = (j + 1..n).find(|&i| h[(i, j)] != 0) else {
            continue;
        };
        if piv != j + 1 {
            for c in 0..n {
                let tmp = h[(piv, c)];
                h[(piv, c)] = h[(j + 1, c)];
                h[(j + 1, c)] = tmp;
            }
            for r in 0..n {
                let tmp = h[(r, piv)];
                h[(r, piv)] = h[(r, j + 1)];
                h[(r, j + 1)] = tmp;
            }
        }
        let inv = f.inv(h[(j + 1, j)]);
        for i in j + 2..n {
            let u = f.mul(h[(i, j)], inv);
            if u == 0 {
                continue;
            }
            // row_i -= u * row_{j+1}
            for c in 0..n {
                let v = f.sub(h[(i, c)], f.mul(u, h[(j + 1, c)]));
                h[(i, c)] = v;
            }
            // col_{j+1} += u * col_i
            for r in 0..n {
                let v = f.add(h[(r, j + 1)], f.mul(u, h[(r, i)]));
                h[(r, j + 1)] = v;
            }
        }
    }
    // recurrence on leading principal minors of xI - H
    let mut polys: Vec<Poly> = vec![Poly::one(f)];
    for k in 0..n {
        let mut next = Poly::linear(f, h[(k, k)]).mul(&polys[k]);
        let mut prod = 1u32;
        for i in (0..k).rev() {
            prod = f.mul(prod, h[(i + 1, i)]);
            let c = f.mul(prod, h[(i, k)]);
            if c != 0 {
                next = next.sub(&polys[i].scale(c));
            }
        }
        polys.push(next);
    }
    polys.pop().unwrap()
}

/// Minimal polynomial: the first linear dependency among `I, m, m^2, ...`.
pub fn min_poly(m: &Matrix) -> Poly {
    assert!(m.is_square(), "min_poly needs a square matrix");
    let f = m.field();
    let n = m.rows();
    if n == 0 {
        return Poly::one(f);
    }
    let mut powers: Vec<Vec<u32>> = vec![Matrix::identity(f, n).data().to_vec()];
    let mut cur = Matrix::identity(f, n);
    loop {
        cur = cur.mul(m);
        let k = powers.len();
        let mut cols = powers.clone();
        cols.push(cur.data().to_vec());
        let a = Matrix::from_columns(f, n * n, &cols);
        let ker = a.kernel_basis();
        if ker.cols() > 0 {
            // dependency with m^k coefficient 1 (the previous powers are independent)
            let v = ker.column(0);
            let lead = v[k];
            let inv = f.inv(lead);
            return Poly::new(f, v.iter().map(|&c| f.mul(c, inv)).collect());
        }
        powers.push(cur.data().to_vec());
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn fp(p: u32) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn nilpotent_jordan_block_char_poly() {
        let f = fp(3);
        let m = Matrix::from_rows(f, &[vec![0, 1], vec![0, 0]]);
        assert_eq!(char_poly(&m), Poly::from_i64(f, &[0, 0, 1]));
        assert_eq!(min_poly(&m), Poly::from_i64(f, &[0, 0, 1]));
    }

    #[test]
    fn identity_min_poly() {
        let f = fp(5);
        let m = Matrix::identity(f, 3);
        assert_eq!(min_poly(&m), Poly::linear(f, 1));
        assert_eq!(char_poly(&m), Poly::linear(f, 1).pow(3));
    }

    #[test]
    fn factor_x2_plus_x_over_f2() {
        let f = fp(2);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let fac = Poly::from_i64(f, &[0, 1, 1]).factor(&mut rng).unwrap();
        assert_eq!(fac, vec![(Poly::x(f), 1), (Poly::linear(f, 1), 1)]);
    }

    #[test]
    fn factor_zero_is_error() {
        let f = fp(2);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(matches!(Poly::zero(f).factor(&mut rng), Err(Error::ZeroPolynomial)));
    }

    #[test]
    fn factor_with_p_power_multiplicity() {
        // (x+1)^4 (x^2+x+1)^2 over F_2
        let f = fp(2);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = Poly::linear(f, 1).pow(4);
        let b = Poly::from_i64(f, &[1, 1, 1]).pow(2);
        let fac = a.mul(&b).factor(&mut rng).unwrap();
        assert_eq!(
            fac,
            vec![(Poly::linear(f, 1), 4), (Poly::from_i64(f, &[1, 1, 1]), 2)]
        );
    }

    #[test]
    fn char_poly_companion_matrix() {
        // companion matrix of x^3 + 2x + 1 over F_7
        let f = fp(7);
        let m = Matrix::from_rows(f, &[vec![0, 0, -1], vec![1, 0, -2], vec![0, 1, 0]]);
        assert_eq!(char_poly(&m), Poly::from_i64(f, &[1, 2, 0, 1]));
    }
}
