//! Small finite fields by table lookup.

use thiserror::Error;

use super::latin::{mols_kronecker, LatinSquare, MolsSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not a prime power")]
    NotPrimePower(u32),
    #[error("no embedded irreducible polynomial for order {0}")]
    Unsupported(u32),
    #[error("at most {max} MOLS of order {q} come from the field, asked for {asked}")]
    TooManySquares { q: u32, max: u32, asked: u32 },
    #[error("no MOLS pair of order {0} is constructible here")]
    NoMolsPair(u32),
}

/// Low-to-high coefficients of a monic irreducible polynomial, leading
/// coefficient omitted.
const IRREDUCIBLE: [(u32, &[u32]); 9] = [
    (4, &[1, 1]),             // x^2 + x + 1
    (8, &[1, 1, 0]),          // x^3 + x + 1
    (9, &[1, 0]),             // x^2 + 1
    (16, &[1, 1, 0, 0]),      // x^4 + x + 1
    (25, &[2, 1]),            // x^2 + x + 2
    (27, &[1, 2, 0]),         // x^3 + 2x + 1
    (32, &[1, 0, 1, 0, 0]),   // x^5 + x^2 + 1
    (49, &[1, 0]),            // x^2 + 1
    (64, &[1, 1, 0, 0, 0, 0]), // x^6 + x + 1
];

pub const MAX_FIELD_ORDER: u32 = 64;

/// `(p, e)` with `q = p^e`, if `q` is a prime power.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0)?;
    let (mut r, mut e) = (q, 0);
    while r % p == 0 {
        r /= p;
        e += 1;
    }
    (r == 1).then_some((p, e))
}

/// Elements are `0..q`; element `v` is the polynomial whose base-`p`
/// digits are its coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteField {
    q: u32,
    p: u32,
    add: Vec<u32>,
    mul: Vec<u32>,
}

impl FiniteField {
    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        self.add[(a * self.q + b) as usize]
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul[(a * self.q + b) as usize]
    }

    pub fn neg(&self, a: u32) -> u32 {
        (0..self.q).find(|&b| self.add(a, b) == 0).expect("additive inverse")
    }

    pub fn inv(&self, a: u32) -> Option<u32> {
        (a != 0).then(|| (1..self.q).find(|&b| self.mul(a, b) == 1)).flatten()
    }

    /// Exhaustive check of the field axioms.
    pub fn check_axioms(&self) -> bool {
        let q = self.q;
        let all = || 0..q;
        for a in all() {
            if self.add(a, 0) != a || self.mul(a, 1) != a || self.mul(a, 0) != 0 {
                return false;
            }
            if a != 0 && self.inv(a).is_none() {
                return false;
            }
            for b in all() {
                if self.add(a, b) != self.add(b, a) || self.mul(a, b) != self.mul(b, a) {
                    return false;
                }
                for c in all() {
                    if self.add(self.add(a, b), c) != self.add(a, self.add(b, c))
                        || self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c))
                        || self.mul(a, self.add(b, c)) != self.add(self.mul(a, b), self.mul(a, c))
                    {
                        return false;
                    }
                }
            }
        }
        true
    }
}

fn digits(mut v: u32, p: u32, e: u32) -> Vec<u32> {
    (0..e)
        .map(|_| {
            let d = v % p;
            v /= p;
            d
        })
        .collect()
}

fn undigits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &x| acc * p + x)
}

pub fn gf(q: u32) -> Result<FiniteField, FieldError> {
    let (p, e) = prime_power(q).ok_or(FieldError::NotPrimePower(q))?;
    if q > MAX_FIELD_ORDER {
        return Err(FieldError::Unsupported(q));
    }
    let n = q as usize;
    let mut add = vec![0; n * n];
    let mut mul = vec![0; n * n];
    if e == 1 {
        for a in 0..q {
            for b in 0..q {
                add[(a * q + b) as usize] = (a + b) % p;
                mul[(a * q + b) as usize] = (a * b) % p;
            }
        }
    } else {
        let poly = IRREDUCIBLE.iter().find(|(o, _)| *o == q).ok_or(FieldError::Unsupported(q))?.1;
        let e = e as usize;
        for a in 0..q {
            let da = digits(a, p, e as u32);
            for b in 0..q {
                let db = digits(b, p, e as u32);
                let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[(a * q + b) as usize] = undigits(&s, p);
                // schoolbook product, then reduce x^k for k >= e using
                // x^e = -(poly)
                let mut prod = vec![0u32; 2 * e - 1];
                for i in 0..e {
                    for j in 0..e {
                        prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
                    }
                }
                for k in (e..2 * e - 1).rev() {
                    let c = prod[k];
                    if c == 0 {
                        continue;
                    }
                    prod[k] = 0;
                    for (i, &pc) in poly.iter().enumerate() {
                        let t = prod[k - e + i] + (p - pc) * c;
                        prod[k - e + i] = t % p;
                    }
                }
                mul[(a * q + b) as usize] = undigits(&prod[..e], p);
            }
        }
    }
    let f = FiniteField { q, p, add, mul };
    // Cheap irreducibility guard: every nonzero element must be invertible.
    if (1..q).any(|a| f.inv(a).is_none()) {
        return Err(FieldError::Unsupported(q));
    }
    Ok(f)
}

/// `L_a(x, y) = a·x + y` for the first `count` nonzero `a`.
pub fn mols_prime_power(f: &FiniteField, count: u32) -> Result<MolsSet, FieldError> {
    let q = f.order();
    if count > q - 1 {
        return Err(FieldError::TooManySquares { q, max: q - 1, asked: count });
    }
    let squares = (1..=count)
        .map(|a| LatinSquare::from_fn(q as usize, |x, y| f.add(f.mul(a, x as u32), y as u32)).expect("field square"))
        .collect();
    Ok(MolsSet::new(q as usize, squares).expect("field squares are orthogonal"))
}

/// Prime-power factorization of `m`, ascending by prime.
pub fn factor_prime_powers(mut m: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut p = 2;
    while m > 1 {
        if m % p == 0 {
            let mut pp = 1;
            while m % p == 0 {
                m /= p;
                pp *= p;
            }
            out.push(pp);
        }
        p += 1;
    }
    out
}

/// `count` MOLS of order `m` from field squares of each prime-power factor
/// combined by direct products; needs every factor to exceed `count`.
pub fn mols(m: u32, count: u32) -> Result<MolsSet, FieldError> {
    let mut acc = MolsSet::trivial(count as usize);
    for pp in factor_prime_powers(m) {
        if pp <= count {
            return Err(if count == 2 { FieldError::NoMolsPair(m) } else { FieldError::TooManySquares { q: pp, max: pp - 1, asked: count } });
        }
        let f = gf(pp)?;
        let part = mols_prime_power(&f, count)?;
        acc = mols_kronecker(&acc, &part).expect("equal counts");
    }
    Ok(acc)
}

/// A pair of orthogonal Latin squares of order `m`, for `m ≢ 2 (mod 4)`.
pub fn mols_pair(m: u32) -> Result<MolsSet, FieldError> {
    if m == 0 || m % 4 == 2 {
        return Err(FieldError::NoMolsPair(m));
    }
    mols(m, 2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power(8), Some((2, 3)));
        assert_eq!(prime_power(49), Some((7, 2)));
        assert_eq!(prime_power(6), None);
        assert_eq!(prime_power(1), None);
        assert_eq!(factor_prime_powers(360), vec![8, 9, 5]);
    }

    #[test]
    fn all_supported_fields_satisfy_axioms() {
        for q in 2..=MAX_FIELD_ORDER {
            match gf(q) {
                Ok(f) => {
                    assert!(prime_power(q).is_some());
                    if q <= 32 {
                        assert!(f.check_axioms(), "GF({q})");
                    }
                }
                Err(FieldError::NotPrimePower(_)) => assert!(prime_power(q).is_none()),
                Err(e) => panic!("GF({q}): {e}"),
            }
        }
    }

    #[test]
    fn gf8_uses_the_cubic() {
        let f = gf(8).unwrap();
        // x·x^2 = x^3 = x + 1
        assert_eq!(f.mul(2, 4), 3);
        assert!(f.check_axioms());
    }

    #[test]
    fn gf6_is_rejected() {
        assert_eq!(gf(6), Err(FieldError::NotPrimePower(6)));
    }

    #[test]
    fn field_mols() {
        assert_eq!(mols_prime_power(&gf(5).unwrap(), 4).unwrap().len(), 4);
        assert_eq!(mols_prime_power(&gf(8).unwrap(), 2).unwrap().order(), 8);
        assert!(matches!(mols_prime_power(&gf(3).unwrap(), 3), Err(FieldError::TooManySquares { .. })));
    }

    #[test]
    fn composite_pairs() {
        for m in [1, 3, 4, 5, 7, 8, 9, 12, 15, 20, 21, 24] {
            let ms = mols_pair(m).unwrap();
            assert_eq!(ms.order(), m as usize);
            assert_eq!(ms.len(), 2);
        }
        assert!(mols_pair(2).is_err());
        assert!(mols_pair(6).is_err());
        assert!(mols_pair(10).is_err());
    }
}
