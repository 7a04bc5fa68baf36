//! Univariate polynomials over Q: just enough for squarefree parts and rational roots.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::scalar::Scalar;

/// Coefficients in increasing degree, with no trailing zeros. The zero polynomial is empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly(Vec<Scalar>);

impl Poly {
    pub fn new(mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        self.0
            .iter()
            .rev()
            .fold(Scalar::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    fn monic(&self) -> Poly {
        match self.0.last() {
            None => self.clone(),
            Some(lead) => Poly(self.0.iter().map(|c| c / lead).collect()),
        }
    }

    /// Quotient and remainder of Euclidean division. Panics on division by zero.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        let d = divisor.degree().expect("division by the zero polynomial");
        let lead = divisor.0[d].clone();
        let mut rem = self.0.clone();
        let mut quot = vec![Scalar::zero(); self.0.len().saturating_sub(d)];
        while rem.len() > d && !rem.is_empty() {
            let top = rem.len() - 1;
            let c = &rem[top] / &lead;
            if !c.is_zero() {
                for (i, dc) in divisor.0.iter().enumerate() {
                    rem[top - d + i] -= &c * dc;
                }
                quot[top - d] = c;
            }
            rem.pop();
        }
        (Poly::new(quot), Poly::new(rem))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `p / gcd(p, p')`, monic.
    pub fn squarefree_part(&self) -> Poly {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    /// Divides out `(t - root)`; the caller guarantees that `root` is a root.
    pub fn deflate(&self, root: &Scalar) -> Poly {
        let divisor = Poly::new(vec![-root.clone(), Scalar::one()]);
        self.div_rem(&divisor).0
    }

    /// All distinct rational roots in increasing order, by the rational root theorem applied to
    /// the integer-scaled squarefree part.
    pub fn rational_roots(&self) -> Vec<Scalar> {
        let mut p = self.squarefree_part();
        let mut roots = Vec::new();
        if p.degree().unwrap_or(0) == 0 {
            return roots;
        }
        if p.0[0].is_zero() {
            roots.push(Scalar::zero());
            p = p.deflate(&Scalar::zero());
        }
        if p.degree().unwrap_or(0) > 0 {
            let ints = p.integer_coefficients();
            let constant = ints[0].abs();
            let leading = ints.last().expect("nonzero polynomial").abs();
            for num in divisors(&constant) {
                for den in divisors(&leading) {
                    for sign in [1i32, -1] {
                        let cand = BigRational::new(BigInt::from(sign) * num.clone(), den.clone());
                        if p.eval(&cand).is_zero() && !roots.contains(&cand) {
                            roots.push(cand);
                        }
                    }
                }
            }
        }
        roots.sort();
        roots
    }

    /// Coefficients scaled by the lcm of denominators.
    fn integer_coefficients(&self) -> Vec<BigInt> {
        let l = self
            .0
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        self.0
            .iter()
            .map(|c| (c * BigRational::from_integer(l.clone())).to_integer())
            .collect()
    }
}

/// Positive divisors of `n` (n > 0) by trial division.
fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut out = Vec::new();
    let mut small = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= *n {
        if (n % &d).is_zero() {
            small.push(d.clone());
            let q = n / &d;
            if q != d {
                out.push(q);
            }
        }
        d += 1;
        if d.to_u64().is_none() {
            break;
        }
    }
    small.extend(out.into_iter().rev());
    small
}
