//! Integer polynomials: characteristic polynomials and extraction of the
//! factor whose irreducible pieces all have constant term ±1.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::matrix::IntMatrix;

/// Dense polynomial, coefficients from the constant term upward, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly(Vec<BigInt>);

impl Poly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Poly {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    pub fn one() -> Poly {
        Poly(vec![BigInt::one()])
    }

    pub fn x() -> Poly {
        Poly(vec![BigInt::zero(), BigInt::one()])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn constant(&self) -> BigInt {
        self.0.first().cloned().unwrap_or_default()
    }

    pub fn is_monic(&self) -> bool {
        self.0.last().is_some_and(One::is_one)
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.0
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.0.is_empty() || other.0.is_empty() {
            return Poly(vec![]);
        }
        let mut out = vec![BigInt::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    /// Exact division by a monic polynomial.
    pub fn div_exact(&self, g: &Poly) -> Option<Poly> {
        assert!(g.is_monic(), "division by a non-monic polynomial");
        if self.0.len() < g.0.len() {
            return if self.0.is_empty() {
                Some(Poly(vec![]))
            } else {
                None
            };
        }
        let mut rem = self.0.clone();
        let dg = g.degree();
        let mut q = vec![BigInt::zero(); rem.len() - dg];
        for k in (0..q.len()).rev() {
            let c = rem[k + dg].clone();
            if c.is_zero() {
                continue;
            }
            for (i, gi) in g.0.iter().enumerate() {
                rem[k + i] -= &c * gi;
            }
            q[k] = c;
        }
        if rem.iter().all(Zero::is_zero) {
            Some(Poly::new(q))
        } else {
            None
        }
    }

    /// Evaluates the polynomial at a square matrix (Horner).
    pub fn eval_matrix(&self, a: &IntMatrix) -> IntMatrix {
        let n = a.rows();
        let mut acc = IntMatrix::zeros(n, n);
        for c in self.0.iter().rev() {
            acc = (&acc * a).add(&IntMatrix::scalar(n, c));
        }
        acc
    }
}

/// `det(xI - a)` by the Faddeev–LeVerrier recurrence; every division is exact.
pub fn characteristic_polynomial(a: &IntMatrix) -> Poly {
    assert!(a.is_square());
    let n = a.rows();
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[n] = BigInt::one();
    let mut m = IntMatrix::zeros(n, n);
    for k in 1..=n {
        m = (&*a * &m).add(&IntMatrix::scalar(n, &coeffs[n - k + 1]));
        let am = &*a * &m;
        let (q, r) = am.trace().div_rem(&BigInt::from(k));
        debug_assert!(r.is_zero());
        coeffs[n - k] = -q;
    }
    Poly::new(coeffs)
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if n.is_multiple_of(&d) {
            small.push(d.clone());
            let other = &n / &d;
            if other != d {
                large.push(other);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

/// Interpolating polynomial through `(xs[i], ys[i])` if it has integer coefficients.
fn interpolate_integral(xs: &[BigInt], ys: &[BigInt]) -> Option<Poly> {
    let k = xs.len();
    let mut nums = Vec::with_capacity(k);
    let mut dens = Vec::with_capacity(k);
    for i in 0..k {
        let mut num = Poly::one();
        let mut den = BigInt::one();
        for j in 0..k {
            if i == j {
                continue;
            }
            num = num.mul(&Poly::new(vec![-xs[j].clone(), BigInt::one()]));
            den *= &xs[i] - &xs[j];
        }
        nums.push(num);
        dens.push(den);
    }
    let l = dens.iter().fold(BigInt::one(), |acc, d| acc.lcm(d));
    let mut total = vec![BigInt::zero(); k];
    for i in 0..k {
        let f = &ys[i] * (&l / &dens[i]);
        for (t, c) in nums[i].coeffs().iter().enumerate() {
            total[t] += &f * c;
        }
    }
    let mut out = Vec::with_capacity(k);
    for c in total {
        let (q, r) = c.div_rem(&l);
        if !r.is_zero() {
            return None;
        }
        out.push(q);
    }
    Some(Poly::new(out))
}

/// Searches for a monic divisor of `p` of the given degree with constant term ±1
/// (Kronecker's method with the value at 0 pinned).
fn unit_divisor_of_degree(p: &Poly, k: usize) -> Option<Poly> {
    if k == 1 {
        for c in [1i64, -1] {
            let g = Poly::new(vec![BigInt::from(c), BigInt::one()]);
            if p.div_exact(&g).is_some() {
                return Some(g);
            }
        }
        return None;
    }
    // k - 1 further points where p does not vanish
    let mut xs = vec![BigInt::zero()];
    let mut cand = 1i64;
    while xs.len() < k {
        for x in [cand, -cand] {
            if xs.len() < k && !p.eval(&BigInt::from(x)).is_zero() {
                xs.push(BigInt::from(x));
            }
        }
        cand += 1;
    }
    let choices: Vec<Vec<BigInt>> = xs[1..]
        .iter()
        .map(|x| {
            let ds = divisors(&p.eval(x));
            ds.iter().flat_map(|d| [d.clone(), -d.clone()]).collect()
        })
        .collect();
    let kk = BigInt::from(k as u64);
    let mut idx = vec![0usize; choices.len()];
    loop {
        for g0 in [BigInt::one(), -BigInt::one()] {
            // g = x^k + h with deg h < k
            let mut ys = vec![g0.clone()];
            for (t, x) in xs[1..].iter().enumerate() {
                let v = &choices[t][idx[t]];
                ys.push(v - num_traits::pow(x.clone(), kk.to_usize().unwrap()));
            }
            if let Some(h) = interpolate_integral(&xs, &ys) {
                let mut c = h.coeffs().to_vec();
                c.resize(k + 1, BigInt::zero());
                c[k] += 1;
                let g = Poly::new(c);
                if g.degree() == k && p.div_exact(&g).is_some() {
                    return Some(g);
                }
            }
        }
        // advance the mixed-radix counter
        let mut pos = 0;
        loop {
            if pos == idx.len() {
                return None;
            }
            idx[pos] += 1;
            if idx[pos] < choices[pos].len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// Splits a monic `p` as `unit * rest`, where every irreducible factor of
/// `unit` has constant term ±1 and no irreducible factor of `rest` does.
pub fn unit_part(p: &Poly) -> (Poly, Poly) {
    assert!(p.is_monic() || p.coeffs().is_empty());
    let mut rest = p.clone();
    let mut stripped = Poly::one();
    while rest.degree() > 0 && rest.constant().is_zero() {
        rest = rest.div_exact(&Poly::x()).expect("x divides");
        stripped = stripped.mul(&Poly::x());
    }
    let mut unit = Poly::one();
    'outer: while rest.degree() > 0 {
        if rest.constant().abs().is_one() {
            unit = unit.mul(&rest);
            rest = Poly::one();
            break;
        }
        for k in 1..rest.degree() {
            if let Some(g) = unit_divisor_of_degree(&rest, k) {
                rest = rest.div_exact(&g).expect("found divisor");
                unit = unit.mul(&g);
                continue 'outer;
            }
        }
        break;
    }
    (unit, rest.mul(&stripped))
}

/// Number of prime factors of `n` counted with multiplicity.
pub fn big_omega(n: &BigInt) -> u32 {
    let mut n = n.abs();
    let mut count = 0;
    let mut d = BigInt::from(2);
    while &d * &d <= n {
        while n.is_multiple_of(&d) {
            n /= &d;
            count += 1;
        }
        d += 1;
    }
    if n > BigInt::one() {
        count += 1;
    }
    count
}
