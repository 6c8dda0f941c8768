//! Log/antilog tables for GF(2^m), m ≤ 8. Polynomials over the field are
//! coefficient vectors in ascending degree.

use std::sync::OnceLock;

#[derive(Clone, Debug)]
pub struct GaloisField {
    m: u32,
    order: usize,
    exp: Vec<u8>,
    log: Vec<u8>,
}

impl GaloisField {
    /// Panics if `primitive_poly` (bit `i` = coefficient of `x^i`) is not
    /// primitive of degree `m`.
    pub fn new(m: u32, primitive_poly: u16) -> Self {
        assert!((2..=8).contains(&m), "field degree out of range");
        let order = 1usize << m;
        let mut exp = vec![0u8; 2 * (order - 1)];
        let mut log = vec![0u8; order];
        let mut x: u16 = 1;
        for (i, e) in exp[..order - 1].iter_mut().enumerate() {
            *e = x as u8;
            assert!(i == 0 || x != 1, "polynomial {primitive_poly:#x} is not primitive");
            log[x as usize] = i as u8;
            x <<= 1;
            if x & (1 << m) != 0 {
                x ^= primitive_poly;
            }
        }
        assert_eq!(x, 1, "polynomial {primitive_poly:#x} is not primitive");
        for i in order - 1..exp.len() {
            exp[i] = exp[i - (order - 1)];
        }
        Self { m, order, exp, log }
    }

    /// GF(16) with x⁴ + x + 1.
    pub fn gf16() -> &'static GaloisField {
        static F: OnceLock<GaloisField> = OnceLock::new();
        F.get_or_init(|| GaloisField::new(4, 0b1_0011))
    }

    /// GF(8) with x³ + x + 1.
    pub fn gf8() -> &'static GaloisField {
        static F: OnceLock<GaloisField> = OnceLock::new();
        F.get_or_init(|| GaloisField::new(3, 0b1011))
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    /// Number of elements, `2^m`.
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn add(&self, a: u8, b: u8) -> u8 {
        a ^ b
    }

    #[inline]
    pub fn mul(&self, a: u8, b: u8) -> u8 {
        if a == 0 || b == 0 {
            0
        } else {
            self.exp[self.log[a as usize] as usize + self.log[b as usize] as usize]
        }
    }

    pub fn inv(&self, a: u8) -> u8 {
        assert!(a != 0, "zero has no inverse");
        self.exp[(self.order - 1 - self.log[a as usize] as usize) % (self.order - 1)]
    }

    pub fn div(&self, a: u8, b: u8) -> u8 {
        self.mul(a, self.inv(b))
    }

    /// `α^e` for any integer exponent.
    pub fn alpha_pow(&self, e: i64) -> u8 {
        let n = (self.order - 1) as i64;
        self.exp[e.rem_euclid(n) as usize]
    }

    pub fn pow(&self, a: u8, e: u64) -> u8 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let n = (self.order - 1) as u64;
        self.exp[((self.log[a as usize] as u64 * (e % n)) % n) as usize]
    }

    /// Horner evaluation of an ascending-degree polynomial.
    pub fn eval(&self, poly: &[u8], x: u8) -> u8 {
        poly.iter().rev().fold(0, |acc, &c| self.mul(acc, x) ^ c)
    }

    pub fn poly_mul(&self, a: &[u8], b: &[u8]) -> Vec<u8> {
        let mut out = vec![0u8; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] ^= self.mul(x, y);
            }
        }
        out
    }

    /// Berlekamp–Massey: shortest connection polynomial Λ (ascending, Λ₀ = 1)
    /// generating `syndromes` (S₁, S₂, ...). Returns `(Λ, L)`.
    pub fn berlekamp_massey(&self, syndromes: &[u8]) -> (Vec<u8>, usize) {
        let mut c = vec![1u8];
        let mut b = vec![1u8];
        let mut l = 0usize;
        let mut shift = 1usize;
        let mut last_d = 1u8;
        for n in 0..syndromes.len() {
            let mut d = syndromes[n];
            for i in 1..=l.min(c.len() - 1) {
                d ^= self.mul(c[i], syndromes[n - i]);
            }
            if d == 0 {
                shift += 1;
                continue;
            }
            let coef = self.div(d, last_d);
            let mut next = c.clone();
            if next.len() < b.len() + shift {
                next.resize(b.len() + shift, 0);
            }
            for (i, &bi) in b.iter().enumerate() {
                next[i + shift] ^= self.mul(coef, bi);
            }
            if 2 * l <= n {
                b = c;
                l = n + 1 - l;
                last_d = d;
                shift = 1;
            } else {
                shift += 1;
            }
            c = next;
        }
        while c.len() > 1 && *c.last().unwrap() == 0 {
            c.pop();
        }
        (c, l)
    }
}
